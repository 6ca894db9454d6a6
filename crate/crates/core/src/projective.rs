//! Real projective line and the projective action of integer matrices.

use core::fmt;

use crate::error::{Error, Result};
use crate::integer::IntMatrix2;

/// A point `[p : q]` of the real projective line.
///
/// Stored as a unit vector whose first nonzero coordinate is positive, so two
/// representatives of the same point compare equal up to rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projective1 {
    p: f64,
    q: f64,
}

impl Projective1 {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !p.is_finite() || !q.is_finite() {
            return Err(Error::InvalidInput(
                "projective coordinates must be finite".into(),
            ));
        }
        let r = libm::hypot(p, q);
        if r == 0.0 {
            return Err(Error::DegenerateDirection);
        }
        // Vectors already of unit length are kept as they are, which makes
        // canonicalisation idempotent bit for bit.
        let (mut p, mut q) = if (r - 1.0).abs() <= 4.0 * f64::EPSILON {
            (p, q)
        } else {
            (p / r, q / r)
        };
        if p < 0.0 || (p == 0.0 && q < 0.0) {
            p = -p;
            q = -q;
        }
        // Normalise signed zeros so equal points are bitwise equal.
        Ok(Projective1 {
            p: p + 0.0,
            q: q + 0.0,
        })
    }

    /// `[w : 1]`, or `[1 : 0]` for infinite `w`.
    pub fn from_real(w: f64) -> Result<Self> {
        if w.is_infinite() {
            Projective1::new(1.0, 0.0)
        } else {
            Projective1::new(w, 1.0)
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `p / q`, with `f64::INFINITY` for the point at infinity.
    pub fn value_real(&self) -> f64 {
        if self.q == 0.0 {
            f64::INFINITY
        } else {
            self.p / self.q
        }
    }
}

impl fmt::Display for Projective1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {}]", self.p, self.q)
    }
}

/// Möbius action `[p : q] -> [a p + c q : b p + d q]` of `[[a, b], [c, d]]`.
///
/// On affine values this is `w -> (a w + c) / (b w + d)`, the projective action
/// of the transpose. It is a right action:
/// `mobius_apply(A, mobius_apply(B, w)) == mobius_apply(B * A, w)`.
pub fn mobius_apply(a: &IntMatrix2, w: &Projective1) -> Projective1 {
    let (m11, m12, m21, m22) = (a.a as f64, a.b as f64, a.c as f64, a.d as f64);
    Projective1::new(m11 * w.p + m21 * w.q, m12 * w.p + m22 * w.q)
        .expect("invertible matrices map nonzero vectors to nonzero vectors")
}

/// Exact Möbius action on an integer representative `(p, q)`.
pub fn mobius_apply_exact(a: &IntMatrix2, w: (i128, i128)) -> (i128, i128) {
    (
        a.a as i128 * w.0 + a.c as i128 * w.1,
        a.b as i128 * w.0 + a.d as i128 * w.1,
    )
}

/// Angle in `[0, π/2]` between the lines represented by `u` and `v`.
pub fn projective_distance(u: &Projective1, v: &Projective1) -> f64 {
    let cross = (u.p * v.q - u.q * v.p).abs();
    let dot = (u.p * v.p + u.q * v.q).abs();
    libm::atan2(cross, dot)
}
