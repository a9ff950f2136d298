//! Registry of the planar maps the experiments iterate.
//!
//! Twelve nonlinear library members `f1`..`f12`, the three Sierpiński
//! similitudes `sier1`..`sier3` and the trigonometric perturbation `sier_nl`.
//! Only `f8` and the four Sierpiński maps have published closed forms; the
//! remaining library members are fixed here so that every implementation
//! simulates the same systems. `MAPS.md` at the repository root lists them.

use std::fmt;
use std::sync::{Arc, LazyLock};

use crate::error::{Error, Result};
use crate::geometry::{Mat2, Point2, Window};
use crate::rng::Xoshiro256pp;

pub type EvalFn = Arc<dyn Fn(Point2) -> Point2 + Send + Sync>;
pub type JacobianFn = Arc<dyn Fn(Point2) -> Mat2 + Send + Sync>;

/// A named planar map with an optional analytic Jacobian.
///
/// Cloning is cheap: the evaluation closures are shared.
#[derive(Clone)]
pub struct MapDescriptor {
    id: String,
    formula: String,
    description: String,
    is_affine: bool,
    eval: EvalFn,
    jacobian: Option<JacobianFn>,
}

impl fmt::Debug for MapDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MapDescriptor")
            .field("id", &self.id)
            .field("formula", &self.formula)
            .field("is_affine", &self.is_affine)
            .field("analytic_jacobian", &self.jacobian.is_some())
            .finish()
    }
}

impl MapDescriptor {
    /// A nonlinear map without an analytic Jacobian; [`jacobian_at`] falls
    /// back to central differences.
    pub fn new(
        id: impl Into<String>,
        formula: impl Into<String>,
        eval: impl Fn(Point2) -> Point2 + Send + Sync + 'static,
    ) -> Self {
        MapDescriptor {
            id: id.into(),
            formula: formula.into(),
            description: String::new(),
            is_affine: false,
            eval: Arc::new(eval),
            jacobian: None,
        }
    }

    pub fn with_jacobian(mut self, jac: impl Fn(Point2) -> Mat2 + Send + Sync + 'static) -> Self {
        self.jacobian = Some(Arc::new(jac));
        self
    }

    pub fn with_description(mut self, description: impl Into<String>) -> Self {
        self.description = description.into();
        self
    }

    /// `p ↦ linear·p + offset`, with its constant Jacobian attached.
    pub fn affine(id: impl Into<String>, linear: Mat2, offset: Point2) -> Self {
        let formula = format!(
            "({}x + {}y + {}, {}x + {}y + {})",
            linear.a11, linear.a12, offset.x, linear.a21, linear.a22, offset.y
        );
        MapDescriptor {
            id: id.into(),
            formula,
            description: "affine".into(),
            is_affine: true,
            eval: Arc::new(move |p| linear.apply(p) + offset),
            jacobian: Some(Arc::new(move |_| linear)),
        }
    }

    /// Similitude `p ↦ ratio·p + offset`.
    pub fn similitude(id: impl Into<String>, ratio: f64, offset: Point2) -> Self {
        MapDescriptor::affine(id, Mat2::scaling(ratio), offset)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn formula(&self) -> &str {
        &self.formula
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn is_affine(&self) -> bool {
        self.is_affine
    }

    pub fn has_analytic_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    /// Evaluate without the finiteness check. Used in the orbit hot loop,
    /// which applies its own divergence guard.
    #[inline]
    pub fn apply(&self, p: Point2) -> Point2 {
        (self.eval)(p)
    }

    pub fn eval(&self, p: Point2) -> Result<Point2> {
        let q = (self.eval)(p);
        if q.is_finite() {
            Ok(q)
        } else {
            Err(Error::NonFiniteResult { map: self.id.clone(), x: q.x, y: q.y })
        }
    }

    pub fn jacobian(&self, p: Point2) -> Result<Mat2> {
        let m = match &self.jacobian {
            Some(j) => j(p),
            None => self.finite_difference_jacobian(p),
        };
        if m.is_finite() {
            Ok(m)
        } else {
            Err(Error::NonFiniteResult { map: self.id.clone(), x: p.x, y: p.y })
        }
    }

    /// Central differences with step `FD_STEP · max(1, |coordinate|)`.
    pub fn finite_difference_jacobian(&self, p: Point2) -> Mat2 {
        let hx = FD_STEP * p.x.abs().max(1.0);
        let hy = FD_STEP * p.y.abs().max(1.0);
        let dx = (self.apply(Point2::new(p.x + hx, p.y)) - self.apply(Point2::new(p.x - hx, p.y))) * (0.5 / hx);
        let dy = (self.apply(Point2::new(p.x, p.y + hy)) - self.apply(Point2::new(p.x, p.y - hy))) * (0.5 / hy);
        Mat2::new(dx.x, dy.x, dx.y, dy.y)
    }
}

/// Relative step for finite-difference Jacobians.
pub const FD_STEP: f64 = 1e-6;

pub fn eval_map(m: &MapDescriptor, p: Point2) -> Result<Point2> {
    m.eval(p)
}

pub fn jacobian_at(m: &MapDescriptor, p: Point2) -> Result<Mat2> {
    m.jacobian(p)
}

/// Every registered map, in catalog order.
pub fn registry() -> &'static [MapDescriptor] {
    &REGISTRY
}

pub fn lookup(id: &str) -> Result<MapDescriptor> {
    REGISTRY
        .iter()
        .find(|m| m.id == id)
        .cloned()
        .ok_or_else(|| Error::UnknownMap(id.to_string()))
}

/// Empirical Lipschitz constant of `m` over `window`.
///
/// The maximum of `n_pairs` secant ratios `|f(a) − f(b)| / |a − b|` for
/// uniformly drawn pairs and `n_pairs` Jacobian spectral norms at uniformly
/// drawn points. Always a lower bound on the true constant over the window.
pub fn estimate_lipschitz(m: &MapDescriptor, window: &Window, n_pairs: usize, seed: u64) -> Result<f64> {
    if n_pairs == 0 {
        return Err(Error::InvalidArgument("n_pairs must be at least 1".into()));
    }
    if !window.is_non_degenerate() {
        return Err(Error::InvalidArgument(format!("degenerate window {window:?}")));
    }
    let mut rng = Xoshiro256pp::seed_from_u64(seed);
    let draw = |rng: &mut Xoshiro256pp| window.lerp(rng.next_f64(), rng.next_f64());
    let mut best = 0.0f64;
    for _ in 0..n_pairs {
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        let d = a.distance(b);
        if d > 0.0 {
            let fa = m.eval(a)?;
            let fb = m.eval(b)?;
            best = best.max(fa.distance(fb) / d);
        }
        let c = draw(&mut rng);
        best = best.max(m.jacobian(c)?.spectral_norm());
    }
    Ok(best)
}

fn sech2(t: f64) -> f64 {
    let th = t.tanh();
    1.0 - th * th
}

const SQRT3_4: f64 = 0.433_012_701_892_219_3; // √3/4

static REGISTRY: LazyLock<Vec<MapDescriptor>> = LazyLock::new(|| {
    use std::f64::consts::PI;
    const fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }
    vec![
        MapDescriptor::new("f1", "(0.7x, 0.6y^2 - 0.4)", |q| p(0.7 * q.x, 0.6 * q.y * q.y - 0.4))
            .with_jacobian(|q| Mat2::new(0.7, 0.0, 0.0, 1.2 * q.y))
            .with_description("quadratic contraction along y"),
        MapDescriptor::new("f2", "(0.5x + 0.25, 0.8y^2 - 0.3)", |q| p(0.5 * q.x + 0.25, 0.8 * q.y * q.y - 0.3))
            .with_jacobian(|q| Mat2::new(0.5, 0.0, 0.0, 1.6 * q.y))
            .with_description("squares the y component"),
        MapDescriptor::new("f3", "(0.9 sin y + 0.1x, 0.9 sin x)", |q| p(0.9 * q.y.sin() + 0.1 * q.x, 0.9 * q.x.sin()))
            .with_jacobian(|q| Mat2::new(0.1, 0.9 * q.y.cos(), 0.9 * q.x.cos(), 0.0))
            .with_description("crossed sine terms"),
        MapDescriptor::new("f4", "(0.7 sin 2x - 0.3y, 0.7 cos 2y + 0.3x)", |q| {
            p(0.7 * (2.0 * q.x).sin() - 0.3 * q.y, 0.7 * (2.0 * q.y).cos() + 0.3 * q.x)
        })
        .with_jacobian(|q| Mat2::new(1.4 * (2.0 * q.x).cos(), -0.3, 0.3, -1.4 * (2.0 * q.y).sin()))
        .with_description("volatile double-frequency oscillation"),
        MapDescriptor::new("f5", "(0.3x^2 - 0.5y, 0.6y + 0.3x^2)", |q| {
            p(0.3 * q.x * q.x - 0.5 * q.y, 0.6 * q.y + 0.3 * q.x * q.x)
        })
        .with_jacobian(|q| Mat2::new(0.6 * q.x, -0.5, 0.6 * q.x, 0.6))
        .with_description("couples x^2 with y"),
        MapDescriptor::new("f6", "(0.6(x + y), 0.9 tanh(x - y))", |q| p(0.6 * (q.x + q.y), 0.9 * (q.x - q.y).tanh()))
            .with_jacobian(|q| {
                let s = 0.9 * sech2(q.x - q.y);
                Mat2::new(0.6, 0.6, s, -s)
            })
            .with_description("diagonal stretch with hyperbolic squashing"),
        MapDescriptor::new("f7", "(0.5 sinh x - 0.3y, 0.8 sin 2y + 0.2x)", |q| {
            p(0.5 * q.x.sinh() - 0.3 * q.y, 0.8 * (2.0 * q.y).sin() + 0.2 * q.x)
        })
        .with_jacobian(|q| Mat2::new(0.5 * q.x.cosh(), -0.3, 0.2, 1.6 * (2.0 * q.y).cos()))
        .with_description("hyperbolic sine"),
        MapDescriptor::new("f8", "(sin(xy) - cos y, sin(y^2 + x))", |q| {
            p((q.x * q.y).sin() - q.y.cos(), (q.y * q.y + q.x).sin())
        })
        .with_jacobian(|q| {
            let cxy = (q.x * q.y).cos();
            let c2 = (q.y * q.y + q.x).cos();
            Mat2::new(q.y * cxy, q.x * cxy + q.y.sin(), c2, 2.0 * q.y * c2)
        })
        .with_description("strongly oscillating coupled trigonometric map"),
        MapDescriptor::new("f9", "(0.9 cos 2y + 0.2x, 0.9 sin 3x - 0.2y)", |q| {
            p(0.9 * (2.0 * q.y).cos() + 0.2 * q.x, 0.9 * (3.0 * q.x).sin() - 0.2 * q.y)
        })
        .with_jacobian(|q| Mat2::new(0.2, -1.8 * (2.0 * q.y).sin(), 2.7 * (3.0 * q.x).cos(), -0.2))
        .with_description("mixed-frequency trigonometric"),
        MapDescriptor::new("f10", "(0.6(x^2 - y^2) + 0.3, 1.2xy)", |q| {
            p(0.6 * (q.x * q.x - q.y * q.y) + 0.3, 1.2 * q.x * q.y)
        })
        .with_jacobian(|q| Mat2::new(1.2 * q.x, -1.2 * q.y, 1.2 * q.y, 1.2 * q.x))
        .with_description("radial squaring (complex square)"),
        MapDescriptor::new("f11", "(0.9 sin 3x + 0.1y, 0.9 tanh(x + y))", |q| {
            p(0.9 * (3.0 * q.x).sin() + 0.1 * q.y, 0.9 * (q.x + q.y).tanh())
        })
        .with_jacobian(|q| {
            let s = 0.9 * sech2(q.x + q.y);
            Mat2::new(2.7 * (3.0 * q.x).cos(), 0.1, s, s)
        })
        .with_description("sin(3x) with tanh(x + y) feedback"),
        MapDescriptor::new("f12", "(0.9 sin x cos y, 0.9 sin y cos x)", |q| {
            p(0.9 * q.x.sin() * q.y.cos(), 0.9 * q.y.sin() * q.x.cos())
        })
        .with_jacobian(|q| {
            let (sx, cx) = q.x.sin_cos();
            let (sy, cy) = q.y.sin_cos();
            Mat2::new(0.9 * cx * cy, -0.9 * sx * sy, -0.9 * sx * sy, 0.9 * cx * cy)
        })
        .with_description("multiplicative sinusoidal coupling"),
        MapDescriptor::similitude("sier1", 0.5, p(0.0, 0.0))
            .with_description("Sierpinski: halve toward (0, 0)"),
        MapDescriptor::similitude("sier2", 0.5, p(0.5, 0.0))
            .with_description("Sierpinski: halve toward (1, 0)"),
        MapDescriptor::similitude("sier3", 0.5, p(0.25, SQRT3_4))
            .with_description("Sierpinski: halve toward (1/2, sqrt(3)/2)"),
        MapDescriptor::new("sier_nl", "(sin(pi x) y, cos(pi y) x)", |q| {
            p((PI * q.x).sin() * q.y, (PI * q.y).cos() * q.x)
        })
        .with_jacobian(|q| {
            let (sx, cx) = (PI * q.x).sin_cos();
            let (sy, cy) = (PI * q.y).sin_cos();
            Mat2::new(PI * cx * q.y, sx, cy, -PI * sy * q.x)
        })
        .with_description("trigonometric perturbation of the Sierpinski system"),
    ]
    .into_iter()
    .map(|m| match m.id.as_str() {
        // similitude() generates a numeric formula; keep the readable one
        "sier1" => MapDescriptor { formula: "(x/2, y/2)".into(), ..m },
        "sier2" => MapDescriptor { formula: "(x/2 + 1/2, y/2)".into(), ..m },
        "sier3" => MapDescriptor { formula: "(x/2 + 1/4, y/2 + sqrt(3)/4)".into(), ..m },
        _ => m,
    })
    .collect()
});
