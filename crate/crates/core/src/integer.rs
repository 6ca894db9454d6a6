//! Exact integer arithmetic: labels, integer matrices, `SL(2,Z)` and the
//! affine group `GA+(2,Z)`.

use alloc::format;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};

/// An integer label `(n, m)` attached to a spectrum point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Label2 {
    pub n: i64,
    pub m: i64,
}

impl Label2 {
    pub const fn new(n: i64, m: i64) -> Self {
        Label2 { n, m }
    }

    /// `n * other.m - m * other.n`, widened so it cannot overflow.
    pub fn cross(self, other: Label2) -> i128 {
        self.n as i128 * other.m as i128 - self.m as i128 * other.n as i128
    }
}

impl fmt::Display for Label2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n, self.m)
    }
}

impl Add for Label2 {
    type Output = Label2;
    fn add(self, o: Label2) -> Label2 {
        Label2::new(self.n + o.n, self.m + o.m)
    }
}

impl Sub for Label2 {
    type Output = Label2;
    fn sub(self, o: Label2) -> Label2 {
        Label2::new(self.n - o.n, self.m - o.m)
    }
}

impl Neg for Label2 {
    type Output = Label2;
    fn neg(self) -> Label2 {
        Label2::new(-self.n, -self.m)
    }
}

/// A general 2x2 integer matrix `[[a, b], [c, d]]` (row-major).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntMatrix2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntMatrix2 {
    pub const IDENTITY: IntMatrix2 = IntMatrix2::new(1, 0, 0, 1);

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntMatrix2 { a, b, c, d }
    }

    pub fn det(&self) -> i128 {
        self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128
    }

    pub fn mul(&self, o: &IntMatrix2) -> IntMatrix2 {
        IntMatrix2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn apply(&self, l: Label2) -> Label2 {
        Label2::new(self.a * l.n + self.b * l.m, self.c * l.n + self.d * l.m)
    }

    pub fn transpose(&self) -> IntMatrix2 {
        IntMatrix2::new(self.a, self.c, self.b, self.d)
    }

    pub fn rows(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// An element of `SL(2,Z)`. The determinant is checked on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnimodularMatrix2(IntMatrix2);

impl UnimodularMatrix2 {
    pub const IDENTITY: UnimodularMatrix2 = UnimodularMatrix2(IntMatrix2::IDENTITY);

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::try_from_matrix(IntMatrix2::new(a, b, c, d))
    }

    pub fn try_from_matrix(m: IntMatrix2) -> Result<Self> {
        match m.det() {
            1 => Ok(UnimodularMatrix2(m)),
            det => Err(Error::NotUnimodular { det }),
        }
    }

    pub fn matrix(&self) -> IntMatrix2 {
        self.0
    }

    pub fn inverse(&self) -> UnimodularMatrix2 {
        let m = self.0;
        UnimodularMatrix2(IntMatrix2::new(m.d, -m.b, -m.c, m.a))
    }

    pub fn mul(&self, o: &UnimodularMatrix2) -> UnimodularMatrix2 {
        UnimodularMatrix2(self.0.mul(&o.0))
    }

    pub fn apply(&self, l: Label2) -> Label2 {
        self.0.apply(l)
    }

    pub fn transpose(&self) -> UnimodularMatrix2 {
        UnimodularMatrix2(self.0.transpose())
    }

    pub fn is_identity(&self) -> bool {
        self.0 == IntMatrix2::IDENTITY
    }
}

impl fmt::Display for UnimodularMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The orientation-preserving integral affine map `l -> linear * l + shift`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffineInt2 {
    pub linear: UnimodularMatrix2,
    pub shift: Label2,
}

impl AffineInt2 {
    pub const IDENTITY: AffineInt2 = AffineInt2 {
        linear: UnimodularMatrix2::IDENTITY,
        shift: Label2::new(0, 0),
    };

    pub fn new(linear: UnimodularMatrix2, shift: Label2) -> Self {
        AffineInt2 { linear, shift }
    }

    pub fn apply(&self, l: Label2) -> Label2 {
        self.linear.apply(l) + self.shift
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineInt2) -> AffineInt2 {
        AffineInt2 {
            linear: self.linear.mul(&other.linear),
            shift: self.linear.apply(other.shift) + self.shift,
        }
    }

    pub fn inverse(&self) -> AffineInt2 {
        let inv = self.linear.inverse();
        AffineInt2 {
            linear: inv,
            shift: -inv.apply(self.shift),
        }
    }
}

/// Solves `target = Z * source + s` exactly from matched label pairs.
///
/// Every pair is checked against the solution. Fails with `NotAffine` when the
/// pairs are inconsistent or the solution is not integral, and with
/// `InsufficientOverlap` when the source labels are colinear.
pub fn solve_affine_relation(pairs: &[(Label2, Label2)]) -> Result<(IntMatrix2, Label2)> {
    let (s0, t0) = *pairs
        .first()
        .ok_or(Error::InsufficientOverlap { window: 0 })?;
    let mut first = None;
    let mut best: Option<(Label2, Label2, Label2, Label2, i128)> = None;
    for &(s, t) in pairs.iter().skip(1) {
        let ds = s - s0;
        if ds == Label2::default() {
            continue;
        }
        let Some((ds1, dt1)) = first else {
            first = Some((ds, t - t0));
            continue;
        };
        let cr = ds1.cross(ds);
        if cr != 0 && best.as_ref().is_none_or(|b| cr.abs() < b.4.abs()) {
            best = Some((ds1, dt1, ds, t - t0, cr));
            if cr.abs() == 1 {
                break;
            }
        }
    }
    let (u1, w1, u2, w2, det) = best.ok_or(Error::InsufficientOverlap { window: 0 })?;
    // Z [u1 u2] = [w1 w2]  =>  Z = [w1 w2] adj([u1 u2]) / det
    let adj = [
        [u2.m as i128, -(u2.n as i128)],
        [-(u1.m as i128), u1.n as i128],
    ];
    let w = [[w1.n as i128, w2.n as i128], [w1.m as i128, w2.m as i128]];
    let mut z = [[0i64; 2]; 2];
    for (i, row) in w.iter().enumerate() {
        for j in 0..2 {
            let num = row[0] * adj[0][j] + row[1] * adj[1][j];
            if num % det != 0 {
                return Err(Error::NotAffine(format!(
                    "transition has non-integral entry {num}/{det}"
                )));
            }
            z[i][j] = i64::try_from(num / det)
                .map_err(|_| Error::NotAffine("transition entry overflows".into()))?;
        }
    }
    let zm = IntMatrix2::new(z[0][0], z[0][1], z[1][0], z[1][1]);
    let shift = t0 - zm.apply(s0);
    for &(s, t) in pairs {
        if zm.apply(s) + shift != t {
            return Err(Error::NotAffine(format!(
                "label {s} maps to {} but is matched with {t}",
                zm.apply(s) + shift
            )));
        }
    }
    Ok((zm, shift))
}

/// Returns `(g, x, y)` with `g = gcd(a, b) >= 0` and `a x + b y = g`.
pub fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i64, 0i64);
    let (mut y0, mut y1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

/// For coprime `(n, m)` returns `(n', m')` with `n' m - m' n = 1`.
///
/// Among all solutions `|n'|` is minimal (ties toward the nonnegative value),
/// then `|m'|` is minimal.
pub fn bezout_complement(n: i64, m: i64) -> Result<(i64, i64)> {
    let (g, x, y) = extended_gcd(m, -n);
    if g != 1 {
        return Err(Error::NotCoprime { n, m });
    }
    // m x - n y = 1, so (n', m') = (x, y) + t (n, m).
    let (np, mp) = (x, y);
    let candidates = |t: i64| (np + t * n, mp + t * m);
    let key = |(a, b): (i64, i64)| (a.unsigned_abs(), a < 0, b.unsigned_abs(), b < 0);
    let t0 = if n != 0 {
        -libm::round(np as f64 / n as f64) as i64
    } else {
        -libm::round(mp as f64 / m as f64) as i64
    };
    let best = (t0 - 2..=t0 + 2)
        .map(candidates)
        .min_by_key(|&c| key(c))
        .expect("non-empty range");
    Ok(best)
}
