//! Classical rotation number of the spherical pendulum (unit sphere, potential
//! `V = z`), as a function of `c = (J, E)`.
//!
//! On a torus the height oscillates between the two roots `z1 < z2` in
//! `[−1, 1]` of `f(z) = 2(E − z)(1 − z²) − J²`. Over one oscillation the
//! azimuth advances by `Δφ = 2∫ J / ((1 − z²)√f) dz` and `w = Δφ/2π mod 1`.

use core::f64::consts::{FRAC_PI_2, PI};

use crate::chart::SystemPreset;
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::quadrature::integrate;
use crate::rotnum::reduce_mod1;

pub const PENDULUM_REL_TOL: f64 = 1e-8;
const MAX_PIECES: usize = 4000;

fn f(j: f64, e: f64, z: f64) -> f64 {
    2.0 * (e - z) * (1.0 - z * z) - j * j
}

/// Bisection for a sign change of `g` on `[lo, hi]`, run until the bracket
/// cannot shrink further.
fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let up = g(hi) > g(lo);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (g(mid) > 0.0) == up {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Roots of `f` near the poles, stored as distances to them so that orbits
/// passing close to a pole keep full relative precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPoints {
    /// `1 + z1`.
    pub below: f64,
    /// `1 − z2`.
    pub above: f64,
    /// The third root, `z3 > 1`.
    pub z3: f64,
}

impl TurningPoints {
    pub fn z1(&self) -> f64 {
        self.below - 1.0
    }

    pub fn z2(&self) -> f64 {
        1.0 - self.above
    }
}

/// The turning heights `z1 < z2` in `[−1, 1]` and the third root of `f`.
pub fn turning_points(c: Point2) -> Result<TurningPoints> {
    let (j, e) = (c.x, c.y);
    if !(j.is_finite() && e.is_finite()) {
        return Err(Error::InvalidInput("non-finite (J, E)".into()));
    }
    // Local maximum of the cubic; the motion exists iff f is positive there.
    let zm = (e - libm::sqrt(e * e + 3.0)) / 3.0;
    if f(j, e, zm) <= 0.0 || (j == 0.0 && (e - 1.0).abs() < 1e-12) {
        return Err(Error::SingularValue(alloc::format!(
            "({j}, {e}) is not a regular value"
        )));
    }
    // f in terms of u = 1 + z and v = 1 − z.
    let fu = |u: f64| 2.0 * (e + 1.0 - u) * (2.0 - u) * u - j * j;
    let fv = |v: f64| 2.0 * (e - 1.0 + v) * v * (2.0 - v) - j * j;
    let below = bisect(fu, 0.0, zm + 1.0);
    let above = bisect(fv, 0.0, 1.0 - zm);
    let z3 = e - (below - 1.0) - (1.0 - above);
    Ok(TurningPoints { below, above, z3 })
}

/// Time of one height oscillation and the azimuth advance over it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PendulumPeriods {
    pub period: f64,
    pub twist: f64,
}

/// Both period integrals, after the substitution
/// `z = (z1 + z2)/2 + (z2 − z1)/2 · sin θ`, which turns `dz/√f` into the
/// smooth `dθ / √(2(z3 − z))`.
pub fn pendulum_periods(c: Point2) -> Result<PendulumPeriods> {
    let tp = turning_points(c)?;
    let j = c.x;
    let half = 0.5 * (tp.z2() - tp.z1());
    // 1 ± sin θ written as squares to avoid cancellation at θ = ∓π/2.
    let one_plus_z = |t: f64| tp.below + 2.0 * half * sq(libm::sin(0.5 * t + 0.25 * PI));
    let one_minus_z = |t: f64| tp.above + 2.0 * half * sq(libm::cos(0.5 * t + 0.25 * PI));
    let base = |t: f64| 1.0 / libm::sqrt(2.0 * (tp.z3 - 1.0 + one_minus_z(t)));
    let period = 2.0 * integrate(base, -FRAC_PI_2, FRAC_PI_2, PENDULUM_REL_TOL, MAX_PIECES)?.value;
    let twist = if j == 0.0 {
        0.0
    } else {
        let g = |t: f64| j / (one_plus_z(t) * one_minus_z(t)) * base(t);
        2.0 * integrate(g, -FRAC_PI_2, FRAC_PI_2, PENDULUM_REL_TOL, MAX_PIECES)?.value
    };
    Ok(PendulumPeriods { period, twist })
}

fn sq(x: f64) -> f64 {
    x * x
}

/// Rotation number `w mod 1` at `c = (J, E)`.
///
/// On `J = 0` the orbit runs through a pole and the value is the limit from
/// `J ≠ 0`: `1/2` below the unstable equilibrium (one pole passage per
/// oscillation) and `0` above it (two).
pub fn pendulum_rotation(preset: &SystemPreset, c: Point2) -> Result<f64> {
    if *preset != SystemPreset::PendulumClassical {
        return Err(Error::InvalidInput(alloc::format!(
            "{} is not the pendulum preset",
            preset.name()
        )));
    }
    let p = pendulum_periods(c)?;
    if c.x == 0.0 {
        return Ok(if c.y < 1.0 { 0.5 } else { 0.0 });
    }
    Ok(reduce_mod1(p.twist / (2.0 * PI)))
}

/// The boundary point `(J, E)` of the circular orbit at height `z* ∈ (−1, 0)`
/// with `J > 0`.
pub fn elliptic_boundary_point(z_star: f64) -> Result<Point2> {
    if !(z_star > -1.0 && z_star < 0.0) {
        return Err(Error::InvalidInput(alloc::format!(
            "circular orbits need z* in (-1, 0), got {z_star}"
        )));
    }
    let s = 1.0 - z_star * z_star;
    let j = s / libm::sqrt(-z_star);
    let e = z_star + j * j / (2.0 * s);
    Ok(Point2::new(j, e))
}

/// Limit of the rotation number at the circular orbit of height `z*`: the
/// ratio of the azimuthal and height frequencies of the linearised motion.
pub fn linearized_rotation(z_star: f64) -> Result<f64> {
    elliptic_boundary_point(z_star)?;
    Ok(1.0 / libm::sqrt(1.0 + 3.0 * z_star * z_star))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: SystemPreset = SystemPreset::PendulumClassical;

    #[test]
    fn boundary_point_is_a_double_root() {
        let z = -0.4;
        let c = elliptic_boundary_point(z).unwrap();
        let fz = f(c.x, c.y, z);
        let dfz = 6.0 * z * z - 4.0 * c.y * z - 2.0;
        assert!(fz.abs() < 1e-14 && dfz.abs() < 1e-14);
        assert!(pendulum_rotation(&P, c).is_err());
    }

    #[test]
    fn approaches_linearization() {
        for z in [-0.8, -0.5, -0.2] {
            let c = elliptic_boundary_point(z).unwrap();
            let w = pendulum_rotation(&P, Point2::new(c.x, c.y + 1e-7)).unwrap();
            assert!(
                (w - linearized_rotation(z).unwrap()).abs() < 1e-3,
                "{z} {w}"
            );
        }
    }

    #[test]
    fn symmetry_in_j() {
        let a = pendulum_rotation(&P, Point2::new(0.3, 0.2)).unwrap();
        let b = pendulum_rotation(&P, Point2::new(-0.3, 0.2)).unwrap();
        assert!((a + b - 1.0).abs() < 1e-9);
        assert!(a > 0.5 && a < 1.0);
    }

    #[test]
    fn axis_and_critical_values() {
        assert_eq!(pendulum_rotation(&P, Point2::new(0.0, 0.0)).unwrap(), 0.5);
        assert_eq!(pendulum_rotation(&P, Point2::new(0.0, 2.0)).unwrap(), 0.0);
        assert!(matches!(
            pendulum_rotation(&P, Point2::new(0.0, 1.0)),
            Err(Error::SingularValue(_))
        ));
        assert!(matches!(
            pendulum_rotation(&P, Point2::new(0.0, -1.0)),
            Err(Error::SingularValue(_))
        ));
        assert!(pendulum_rotation(&P, Point2::new(2.0, -0.5)).is_err());
        assert!(pendulum_rotation(&SystemPreset::Identity, Point2::new(0.3, 0.2)).is_err());
    }

    #[test]
    fn near_axis_limits() {
        let w = pendulum_rotation(&P, Point2::new(1e-6, 0.0)).unwrap();
        assert!((w - 0.5).abs() < 1e-3, "{w}");
        let w = pendulum_rotation(&P, Point2::new(1e-6, 2.0)).unwrap();
        assert!(!(1e-3..=1.0 - 1e-3).contains(&w), "{w}");
    }

    #[test]
    fn lipschitz_between_nearby_values() {
        let c = Point2::new(0.5, 0.3);
        let d = 1e-4;
        let w0 = pendulum_rotation(&P, c).unwrap();
        let wx = pendulum_rotation(&P, Point2::new(c.x + d, c.y)).unwrap();
        let wy = pendulum_rotation(&P, Point2::new(c.x, c.y + d)).unwrap();
        let grad = libm::hypot(wx - w0, wy - w0) / d;
        let c2 = Point2::new(0.5 + 3e-4, 0.3 - 2e-4);
        let w2 = pendulum_rotation(&P, c2).unwrap();
        assert!((w2 - w0).abs() <= 2.0 * grad * c.dist(c2));
    }
}
