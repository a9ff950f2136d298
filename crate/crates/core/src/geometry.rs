//! Plane points, 2×2 matrices and axis-aligned windows.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }
}

impl std::ops::Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl From<(f64, f64)> for Point2 {
    fn from((x, y): (f64, f64)) -> Self {
        Point2::new(x, y)
    }
}

/// Row-major 2×2 matrix, used for Jacobians and affine linear parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Mat2 {
    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    pub const fn scaling(s: f64) -> Self {
        Mat2::new(s, 0.0, 0.0, s)
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        Point2::new(
            self.a11 * p.x + self.a12 * p.y,
            self.a21 * p.x + self.a22 * p.y,
        )
    }

    pub fn is_finite(&self) -> bool {
        self.a11.is_finite() && self.a12.is_finite() && self.a21.is_finite() && self.a22.is_finite()
    }

    pub fn determinant(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    /// Largest singular value.
    ///
    /// Uses σ_max = (√((a+d)² + (c−b)²) + √((a−d)² + (b+c)²)) / 2, which is
    /// exact for scalar multiples of the identity.
    pub fn spectral_norm(&self) -> f64 {
        let Mat2 { a11: a, a12: b, a21: c, a22: d } = *self;
        ((a + d).hypot(c - b) + (a - d).hypot(b + c)) / 2.0
    }
}

/// Closed axis-aligned rectangle `[x_min, x_max] × [y_min, y_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub const fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Window { x_min, x_max, y_min, y_max }
    }

    pub const fn square(lo: f64, hi: f64) -> Self {
        Window::new(lo, hi, lo, hi)
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    /// Both sides strictly positive and finite.
    pub fn is_non_degenerate(&self) -> bool {
        self.width() > 0.0 && self.height() > 0.0 && self.width().is_finite() && self.height().is_finite()
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    /// Smallest window containing every point, or `None` for an empty slice.
    pub fn bounding(points: &[Point2]) -> Option<Window> {
        let first = points.first()?;
        let mut w = Window::new(first.x, first.x, first.y, first.y);
        for p in &points[1..] {
            w.x_min = w.x_min.min(p.x);
            w.x_max = w.x_max.max(p.x);
            w.y_min = w.y_min.min(p.y);
            w.y_max = w.y_max.max(p.y);
        }
        Some(w)
    }

    /// Grow each side by `fraction` of its length (at least `min_pad` absolute).
    pub fn padded(&self, fraction: f64, min_pad: f64) -> Window {
        let px = (self.width() * fraction).max(min_pad);
        let py = (self.height() * fraction).max(min_pad);
        Window::new(self.x_min - px, self.x_max + px, self.y_min - py, self.y_max + py)
    }

    pub fn lerp(&self, u: f64, v: f64) -> Point2 {
        Point2::new(self.x_min + u * self.width(), self.y_min + v * self.height())
    }
}
