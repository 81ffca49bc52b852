//! Built-in benchmark objectives and the objective abstraction.
//!
//! Three landscapes, each probing one failure mode of a local minimizer:
//!
//! - [`f1`]: one dimension, a single spurious local minimum far from the
//!   global one at the origin.
//! - [`f2`]: two dimensions, a cosine egg-crate of local minima superimposed
//!   on a slow radial well.
//! - [`f3`]: any dimension, a radially monotone well that is numerically
//!   flat far from the origin.
//!
//! All three are nonnegative, finite everywhere, and zero only at the origin.

use crate::error::{Error, Result};

/// Depth of the radial well shared by `f2` and `f3`.
const DEPTH: f64 = 15.0;
/// Radial decay rate of that well.
const DECAY: f64 = 0.05;

/// One-dimensional benchmark: a parabola through the origin whose prefactor
/// dips near `x = 1200`, carving a local minimum around `x ≈ 1198.6`.
///
/// `f1(x) = (1 + 19 - 19 exp(-(-20 + x/60)^2 / 9)) * (x/60)^2`
pub fn f1(x: f64) -> f64 {
    let u = x / 60.0;
    let dip = (-(-20.0 + u) * (-20.0 + u) / 9.0).exp();
    (1.0 + 19.0 - 19.0 * dip) * (u * u)
}

/// Two-dimensional benchmark: radial well plus a cosine lattice of traps.
///
/// `f2(x, y) = -15 exp(-0.05 sqrt(x^2 + y^2)) + 15 - cos(x) - cos(y) + 2`
pub fn f2(x: f64, y: f64) -> f64 {
    -DEPTH * (-DECAY * (x * x + y * y).sqrt()).exp() + DEPTH - x.cos() - y.cos() + 2.0
}

/// d-dimensional benchmark: purely radial well, range `[0, 15)`, strictly
/// increasing in the distance from the origin and exponentially flat far out.
///
/// `f3(x) = -15 exp(-0.05 sqrt(sum x_i^2)) + 15`
///
/// Panics on an empty slice; at least one coordinate is required.
pub fn f3(x: &[f64]) -> f64 {
    assert!(!x.is_empty(), "f3 requires at least one coordinate");
    let sum_sq: f64 = x.iter().map(|v| v * v).sum();
    -DEPTH * (-DECAY * sum_sq.sqrt()).exp() + DEPTH
}

fn f1_on_slice(x: &[f64]) -> f64 {
    f1(x[0])
}

fn f2_on_slice(x: &[f64]) -> f64 {
    f2(x[0], x[1])
}

fn f3_on_slice(x: &[f64]) -> f64 {
    f3(x)
}

/// A named objective with a fixed dimension and a pure evaluator.
#[derive(Debug, Clone, Copy)]
pub struct ObjectiveSpec {
    name: &'static str,
    dimension: usize,
    evaluator: fn(&[f64]) -> f64,
}

impl ObjectiveSpec {
    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Evaluates the objective. The slice length must equal `dimension`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dimension);
        (self.evaluator)(x)
    }
}

/// Looks up an objective by its stable name (`"f1"`, `"f2"`, `"f3"`).
///
/// `f1` is strictly univariate and `f2` strictly bivariate; `f3` accepts any
/// dimension of at least one.
pub fn make_objective(name: &str, dimension: usize) -> Result<ObjectiveSpec> {
    let (canonical, evaluator, dim_ok): (&'static str, fn(&[f64]) -> f64, bool) = match name {
        "f1" => ("f1", f1_on_slice, dimension == 1),
        "f2" => ("f2", f2_on_slice, dimension == 2),
        "f3" => ("f3", f3_on_slice, dimension >= 1),
        other => return Err(Error::UnknownObjective(other.to_string())),
    };
    if !dim_ok {
        return Err(Error::Config(format!(
            "objective `{name}` does not support dimension {dimension}"
        )));
    }
    Ok(ObjectiveSpec {
        name: canonical,
        dimension,
        evaluator,
    })
}

/// Counts every evaluation routed through it; one counter per run.
#[derive(Debug)]
pub struct EvalCounter<'a> {
    spec: &'a ObjectiveSpec,
    count: u64,
}

impl<'a> EvalCounter<'a> {
    pub fn new(spec: &'a ObjectiveSpec) -> Self {
        EvalCounter { spec, count: 0 }
    }

    pub fn eval(&mut self, x: &[f64]) -> f64 {
        self.count += 1;
        self.spec.eval(x)
    }

    pub fn count(&self) -> u64 {
        self.count
    }
}
