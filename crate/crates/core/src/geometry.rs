//! Planar points, windows and real 2x2 matrices.

use alloc::format;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A semiclassical parameter in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PlanckValue(f64);

impl PlanckValue {
    pub fn new(h: f64) -> Result<Self> {
        if h.is_finite() && h > 0.0 && h <= 1.0 {
            Ok(PlanckValue(h))
        } else {
            Err(Error::InvalidInput(format!(
                "hbar must lie in (0, 1], got {h}"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl fmt::Display for PlanckValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Lexicographic total order on `(x, y)`.
    pub fn lex_cmp(&self, o: &Point2) -> Ordering {
        self.x.total_cmp(&o.x).then(self.y.total_cmp(&o.y))
    }

    /// Bit-exact identity used for point sets. `-0.0` and `0.0` coincide.
    pub fn key(self) -> PointKey {
        let norm = |v: f64| if v == 0.0 { 0.0f64 } else { v };
        PointKey(norm(self.x).to_bits(), norm(self.y).to_bits())
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl Mul<Point2> for f64 {
    type Output = Point2;
    fn mul(self, p: Point2) -> Point2 {
        Point2::new(self * p.x, self * p.y)
    }
}

/// Hashable, totally ordered identity of a [`Point2`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointKey(u64, u64);

/// An axis-aligned rectangle `(xmin, xmax) x (ymin, ymax)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Window {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Self> {
        let finite = [xmin, xmax, ymin, ymax].iter().all(|v| v.is_finite());
        if !finite || xmin >= xmax || ymin >= ymax {
            return Err(Error::InvalidInput(format!(
                "window needs xmin < xmax and ymin < ymax, got ({xmin}, {xmax}, {ymin}, {ymax})"
            )));
        }
        Ok(Window {
            xmin,
            xmax,
            ymin,
            ymax,
        })
    }

    /// Membership in the open rectangle.
    pub fn contains(&self, p: Point2) -> bool {
        p.x > self.xmin && p.x < self.xmax && p.y > self.ymin && p.y < self.ymax
    }

    /// Membership in the closed rectangle.
    pub fn contains_closed(&self, p: Point2) -> bool {
        p.x >= self.xmin && p.x <= self.xmax && p.y >= self.ymin && p.y <= self.ymax
    }

    /// True when `inner`'s closure lies in the open rectangle `self`.
    pub fn strictly_contains(&self, inner: &Window) -> bool {
        inner.xmin > self.xmin
            && inner.xmax < self.xmax
            && inner.ymin > self.ymin
            && inner.ymax < self.ymax
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn center(&self) -> Point2 {
        Point2::new(0.5 * (self.xmin + self.xmax), 0.5 * (self.ymin + self.ymax))
    }

    /// Shrinks every side by `margin`.
    pub fn shrink(&self, margin: f64) -> Result<Window> {
        Window::new(
            self.xmin + margin,
            self.xmax - margin,
            self.ymin + margin,
            self.ymax - margin,
        )
    }

    /// Smallest window containing every given point, or `None` if empty.
    pub fn bounding(points: impl IntoIterator<Item = Point2>) -> Option<Window> {
        let mut it = points.into_iter();
        let p = it.next()?;
        let mut w = Window {
            xmin: p.x,
            xmax: p.x,
            ymin: p.y,
            ymax: p.y,
        };
        for p in it {
            w.xmin = w.xmin.min(p.x);
            w.xmax = w.xmax.max(p.x);
            w.ymin = w.ymin.min(p.y);
            w.ymax = w.ymax.max(p.y);
        }
        Some(w)
    }
}

/// A real 2x2 matrix `[[a, b], [c, d]]` (row-major).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Matrix2 {
    pub const IDENTITY: Matrix2 = Matrix2::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Matrix2 { a, b, c, d }
    }

    pub fn from_columns(u: Point2, v: Point2) -> Self {
        Matrix2::new(u.x, v.x, u.y, v.y)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Option<Matrix2> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        Some(Matrix2::new(
            self.d / det,
            -self.b / det,
            -self.c / det,
            self.a / det,
        ))
    }

    pub fn mul(&self, o: &Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        Point2::new(self.a * p.x + self.b * p.y, self.c * p.x + self.d * p.y)
    }

    pub fn column(&self, j: usize) -> Point2 {
        match j {
            0 => Point2::new(self.a, self.c),
            _ => Point2::new(self.b, self.d),
        }
    }

    pub fn scale(&self, s: f64) -> Matrix2 {
        Matrix2::new(s * self.a, s * self.b, s * self.c, s * self.d)
    }
}
