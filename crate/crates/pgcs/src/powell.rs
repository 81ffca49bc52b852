//! Powell's conjugate-direction minimizer.
//!
//! Minimizes a function of several variables without derivatives: each outer
//! iteration line-minimizes along every direction of a maintained set, then
//! decides whether to replace the direction of largest single gain with the
//! overall displacement of the sweep. Line minima come from
//! [`crate::line_search`] (bracketing plus Brent).
//!
//! A line search that finds no descending bracket (a numerically flat or
//! unbounded direction) contributes no movement and zero decrease rather
//! than an error; on plateau-like objectives the method therefore stalls in
//! place and reports convergence, which is the honest answer a
//! derivative-free method can give there.

use std::cell::{Cell, RefCell};

use crate::error::{Error, Result};
use crate::line_search::{
    bracket_minimum, brent_line_min, DEFAULT_BRACKET_EXPANSIONS, DEFAULT_BRENT_ITERS,
};

/// Tolerances and budgets for [`powell_minimize`].
///
/// `None` budgets default to `1000 * dimension` at call time.
#[derive(Debug, Clone, PartialEq)]
pub struct PowellConfig {
    /// Relative tolerance of each one-dimensional minimization.
    pub xtol: f64,
    /// Relative function-decrease tolerance of the outer loop.
    pub ftol: f64,
    /// Outer-iteration budget.
    pub max_iters: Option<u64>,
    /// Objective-evaluation budget. May overshoot by at most one line
    /// search: `2 + DEFAULT_BRACKET_EXPANSIONS + 1 + DEFAULT_BRENT_ITERS`
    /// evaluations (the budget is checked between line searches, never
    /// inside one).
    pub max_evals: Option<u64>,
}

impl Default for PowellConfig {
    fn default() -> Self {
        PowellConfig {
            xtol: 1e-4,
            ftol: 1e-4,
            max_iters: None,
            max_evals: None,
        }
    }
}

impl PowellConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.xtol > 0.0) || !(self.ftol > 0.0) {
            return Err(Error::Config(format!(
                "powell tolerances must be positive, got xtol={} ftol={}",
                self.xtol, self.ftol
            )));
        }
        if self.max_iters == Some(0) || self.max_evals == Some(0) {
            return Err(Error::Config("powell budgets must be at least 1".into()));
        }
        Ok(())
    }
}

/// Why the outer loop stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowellTermination {
    /// The per-iteration decrease fell under the relative `ftol` test.
    FtolConverged,
    /// Outer-iteration budget exhausted.
    IterBudget,
    /// Evaluation budget exhausted.
    EvalBudget,
}

impl std::fmt::Display for PowellTermination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PowellTermination::FtolConverged => "ftol-converged",
            PowellTermination::IterBudget => "iter-budget",
            PowellTermination::EvalBudget => "eval-budget",
        })
    }
}

/// Final state of a [`powell_minimize`] run.
#[derive(Debug, Clone, PartialEq)]
pub struct PowellOutcome {
    pub x: Vec<f64>,
    /// Cached objective value at `x` (the last evaluation made there).
    pub f: f64,
    pub iters: u64,
    pub evals: u64,
    pub converged: bool,
    pub reason: PowellTermination,
}

/// The maintained direction set: exactly `dimension` nonzero vectors,
/// initialized to the coordinate basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    directions: Vec<Vec<f64>>,
}

impl DirectionSet {
    pub fn identity(dimension: usize) -> Self {
        let directions = (0..dimension)
            .map(|i| {
                let mut e = vec![0.0; dimension];
                e[i] = 1.0;
                e
            })
            .collect();
        DirectionSet { directions }
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    fn replace(&mut self, index: usize, direction: Vec<f64>) {
        debug_assert!(direction.iter().any(|&v| v != 0.0));
        self.directions[index] = direction;
    }
}

/// Result of one directional minimization.
#[derive(Debug, Clone)]
pub struct LineSearchResult {
    pub point: Vec<f64>,
    pub value: f64,
    /// `value_at_point - value`, never negative.
    pub decrease: f64,
    /// The accepted parameter step along the direction (zero when the
    /// search failed or found no strict improvement).
    pub step: f64,
}

/// Minimizes `f` along `point + t * direction`.
///
/// `step_hint` sets the scale of the first probe (the previous successful
/// step along the same direction, or 1.0). A failed bracket — flat or
/// unbounded direction — returns the starting point unchanged with zero
/// decrease.
pub fn line_minimize<F>(
    f: &mut F,
    point: &[f64],
    value_at_point: f64,
    direction: &[f64],
    step_hint: f64,
    xtol: f64,
) -> LineSearchResult
where
    F: FnMut(&[f64]) -> f64,
{
    let mut probe = vec![0.0; point.len()];
    let mut phi = |t: f64| {
        for (slot, (p, u)) in probe.iter_mut().zip(point.iter().zip(direction)) {
            *slot = p + t * u;
        }
        f(&probe)
    };

    let bracket = match bracket_minimum(&mut phi, 0.0, step_hint, DEFAULT_BRACKET_EXPANSIONS) {
        Ok(b) => b,
        Err(_) => {
            return LineSearchResult {
                point: point.to_vec(),
                value: value_at_point,
                decrease: 0.0,
                step: 0.0,
            }
        }
    };
    let min = brent_line_min(&mut phi, &bracket, xtol, DEFAULT_BRENT_ITERS);

    if min.f < value_at_point && min.t != 0.0 {
        let moved = point
            .iter()
            .zip(direction)
            .map(|(p, u)| p + min.t * u)
            .collect();
        LineSearchResult {
            point: moved,
            value: min.f,
            decrease: value_at_point - min.f,
            step: min.t,
        }
    } else {
        LineSearchResult {
            point: point.to_vec(),
            value: value_at_point,
            decrease: 0.0,
            step: 0.0,
        }
    }
}

/// Runs the direction-set method from `x0`.
///
/// Per iteration: line-minimize along each direction in turn; stop when
/// `2 (f_start - f_end) <= ftol (|f_start| + |f_end|) + 1e-20` or a budget
/// runs out. Otherwise probe the extrapolated point `2 p_N - p_0`; when it
/// improves on `p_0` and the standard replacement inequality accepts, the
/// direction of largest single decrease is replaced by the sweep
/// displacement `p_N - p_0` and minimized along once. Ties on the largest
/// decrease go to the lowest index. Deterministic: no randomness anywhere.
pub fn powell_minimize<F>(mut f: F, x0: &[f64], config: &PowellConfig) -> Result<PowellOutcome>
where
    F: FnMut(&[f64]) -> f64,
{
    config.validate()?;
    let dim = x0.len();
    if dim == 0 {
        return Err(Error::Config("powell requires at least one dimension".into()));
    }
    let max_iters = config.max_iters.unwrap_or(1000 * dim as u64);
    let max_evals = config.max_evals.unwrap_or(1000 * dim as u64);

    // Every evaluation flows through here; the first non-finite value
    // poisons the run and aborts at the next checkpoint.
    let eval_count = Cell::new(0u64);
    let poison: RefCell<Option<Vec<f64>>> = RefCell::new(None);
    let mut eval = |x: &[f64]| {
        eval_count.set(eval_count.get() + 1);
        let v = f(x);
        if !v.is_finite() && poison.borrow().is_none() {
            *poison.borrow_mut() = Some(x.to_vec());
        }
        v
    };
    macro_rules! check_poison {
        () => {
            if let Some(position) = poison.borrow_mut().take() {
                return Err(Error::NonFiniteObjective { position });
            }
        };
    }

    let mut point = x0.to_vec();
    let mut value = eval(&point);
    check_poison!();

    let mut dirs = DirectionSet::identity(dim);
    let mut step_hints = vec![1.0f64; dim];
    let mut iters: u64 = 0;
    let reason;

    'outer: loop {
        let sweep_start = point.clone();
        let value_start = value;
        let mut biggest_decrease = 0.0f64;
        let mut biggest_index = 0usize;

        for i in 0..dim {
            let result = line_minimize(
                &mut eval,
                &point,
                value,
                &dirs.directions()[i],
                step_hints[i],
                config.xtol,
            );
            check_poison!();
            if result.decrease > biggest_decrease {
                biggest_decrease = result.decrease;
                biggest_index = i;
            }
            if result.decrease > 0.0 {
                step_hints[i] = result.step.abs();
            }
            point = result.point;
            value = result.value;

            if eval_count.get() >= max_evals && i + 1 < dim {
                iters += 1;
                reason = PowellTermination::EvalBudget;
                break 'outer;
            }
        }
        iters += 1;

        // Relative decrease over the whole sweep.
        if 2.0 * (value_start - value) <= config.ftol * (value_start.abs() + value.abs()) + 1e-20 {
            reason = PowellTermination::FtolConverged;
            break;
        }
        if iters >= max_iters {
            reason = PowellTermination::IterBudget;
            break;
        }
        if eval_count.get() >= max_evals {
            reason = PowellTermination::EvalBudget;
            break;
        }

        // Extrapolate the sweep displacement and decide on replacement.
        let extrapolated: Vec<f64> = point
            .iter()
            .zip(&sweep_start)
            .map(|(p, s)| 2.0 * p - s)
            .collect();
        let value_extrapolated = eval(&extrapolated);
        check_poison!();

        if value_extrapolated < value_start {
            let df = value_start - value - biggest_decrease;
            let test = 2.0 * (value_start - 2.0 * value + value_extrapolated) * df * df
                - biggest_decrease
                    * (value_start - value_extrapolated)
                    * (value_start - value_extrapolated);
            if test < 0.0 {
                let displacement: Vec<f64> = point
                    .iter()
                    .zip(&sweep_start)
                    .map(|(p, s)| p - s)
                    .collect();
                if displacement.iter().any(|&v| v != 0.0) {
                    let result =
                        line_minimize(&mut eval, &point, value, &displacement, 1.0, config.xtol);
                    check_poison!();
                    point = result.point;
                    value = result.value;
                    dirs.replace(biggest_index, displacement);
                    step_hints[biggest_index] = if result.step != 0.0 {
                        result.step.abs()
                    } else {
                        1.0
                    };
                }
            }
        }
    }

    Ok(PowellOutcome {
        x: point,
        f: value,
        iters,
        evals: eval_count.get(),
        converged: reason == PowellTermination::FtolConverged,
        reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcs::GaussianSampler;
    use crate::objectives;

    /// Random positive-definite quadratic with spectrum in [1, 10]:
    /// f(x) = sum_k lambda_k <q_k, x - c>^2 with orthonormal q_k.
    pub(crate) struct SpdQuadratic {
        axes: Vec<Vec<f64>>,
        eigenvalues: Vec<f64>,
        pub center: Vec<f64>,
    }

    impl SpdQuadratic {
        pub(crate) fn random(dim: usize, sampler: &mut GaussianSampler) -> Self {
            // Gram-Schmidt on random Gaussian vectors.
            let mut axes: Vec<Vec<f64>> = Vec::with_capacity(dim);
            while axes.len() < dim {
                let mut v = sampler.sample(dim, 1.0);
                for q in &axes {
                    let dot: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= dot * qi;
                    }
                }
                let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm > 1e-6 {
                    for vi in &mut v {
                        *vi /= norm;
                    }
                    axes.push(v);
                }
            }
            let eigenvalues = (0..dim)
                .map(|_| 10f64.powf(0.5 * (sampler.standard_normal().tanh() + 1.0)))
                .collect();
            let center = sampler.sample(dim, 2.0);
            SpdQuadratic {
                axes,
                eigenvalues,
                center,
            }
        }

        pub(crate) fn eval(&self, x: &[f64]) -> f64 {
            self.axes
                .iter()
                .zip(&self.eigenvalues)
                .map(|(q, lam)| {
                    let proj: f64 = q
                        .iter()
                        .zip(x.iter().zip(&self.center))
                        .map(|(qi, (xi, ci))| qi * (xi - ci))
                        .sum();
                    lam * proj * proj
                })
                .sum()
        }
    }

    #[test]
    fn separable_quadratic_reaches_exact_minimum() {
        let f = |x: &[f64]| x.iter().map(|v| (v - 3.0) * (v - 3.0)).sum::<f64>();
        let out = powell_minimize(f, &[0.0; 12], &PowellConfig::default()).unwrap();
        assert!(out.converged);
        assert!(out.f <= 1e-10, "f = {}", out.f);
        for (i, xi) in out.x.iter().enumerate() {
            assert!((xi - 3.0).abs() < 1e-5, "x[{i}] = {xi}");
        }
    }

    #[test]
    fn line_minimize_zeroes_one_coordinate() {
        let mut f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let p = [4.0, 7.0];
        let fp = f(&p);
        let result = line_minimize(&mut f, &p, fp, &[1.0, 0.0], 1.0, 1e-8);
        assert!(result.point[0].abs() < 1e-6, "x = {}", result.point[0]);
        assert_eq!(result.point[1], 7.0);
        assert!(result.decrease > 15.9);
    }

    #[test]
    fn line_minimize_sees_nothing_on_the_flat_rim() {
        let spec = objectives::make_objective("f3", 12).unwrap();
        let mut f = |x: &[f64]| spec.eval(x);
        let p = [200.0; 12];
        let fp = f(&p);
        let mut dir = [0.0; 12];
        dir[0] = 1.0;
        let result = line_minimize(&mut f, &p, fp, &dir, 1.0, 1e-4);
        assert!(result.decrease < 1e-12, "decrease = {}", result.decrease);
        assert_eq!(result.point, p.to_vec());
    }

    #[test]
    fn line_minimize_finds_the_univariate_trap() {
        let mut f = |x: &[f64]| objectives::f1(x[0]);
        let p = [1200.0];
        let fp = f(&p);
        let result = line_minimize(&mut f, &p, fp, &[1.0], 1.0, 1e-8);
        assert!(
            (result.point[0] - 1198.5754750000001).abs() < 0.01,
            "stopped at {}",
            result.point[0]
        );
    }

    #[test]
    fn trapped_on_f1() {
        let out = powell_minimize(
            |x: &[f64]| objectives::f1(x[0]),
            &[1200.0],
            &PowellConfig::default(),
        )
        .unwrap();
        assert!(out.converged);
        assert!((out.x[0] - 1198.58).abs() < 2.0, "x = {}", out.x[0]);
        assert!((out.f - 399.53).abs() < 1.0, "f = {}", out.f);
    }

    #[test]
    fn trapped_on_f2() {
        let out = powell_minimize(
            |x: &[f64]| objectives::f2(x[0], x[1]),
            &[600.0, 600.0],
            &PowellConfig::default(),
        )
        .unwrap();
        assert!((out.f - 15.0).abs() < 0.5, "f = {}", out.f);
        assert!((out.x[0] - 603.19).abs() < 2.0, "x = {}", out.x[0]);
        assert!((out.x[1] - 603.19).abs() < 2.0, "y = {}", out.x[1]);
    }

    #[test]
    fn stalls_on_the_f3_plateau() {
        let spec = objectives::make_objective("f3", 12).unwrap();
        let start = [200.0; 12];
        let out =
            powell_minimize(|x: &[f64]| spec.eval(x), &start, &PowellConfig::default()).unwrap();
        assert!(out.f >= 14.999, "f = {}", out.f);
        let moved = out
            .x
            .iter()
            .zip(&start)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(moved <= 10.0, "moved {moved}");
        assert!(out.converged);
    }

    #[test]
    fn quadratic_exactness_in_few_iterations() {
        let mut sampler = GaussianSampler::from_seed(7);
        let config = PowellConfig {
            xtol: 1e-10,
            ftol: 1e-10,
            ..PowellConfig::default()
        };
        for dim in [2usize, 4] {
            for _ in 0..5 {
                let quad = SpdQuadratic::random(dim, &mut sampler);
                let x0 = vec![1.5; dim];
                let f0 = quad.eval(&x0);
                let out = powell_minimize(|x: &[f64]| quad.eval(x), &x0, &config).unwrap();
                assert!(
                    out.f <= 1e-8 * f0.max(1.0),
                    "dim {dim}: f = {} from {}",
                    out.f,
                    f0
                );
                assert!(
                    out.iters <= dim as u64 + 2,
                    "dim {dim}: took {} iterations",
                    out.iters
                );
            }
        }
    }

    #[test]
    fn never_worse_than_the_start() {
        let mut sampler = GaussianSampler::from_seed(11);
        for _ in 0..10 {
            let quad = SpdQuadratic::random(3, &mut sampler);
            let x0 = sampler.sample(3, 5.0);
            let f0 = quad.eval(&x0);
            let out = powell_minimize(|x: &[f64]| quad.eval(x), &x0, &PowellConfig::default())
                .unwrap();
            assert!(out.f <= f0);
        }
    }

    #[test]
    fn deterministic_outcomes() {
        let run = || {
            powell_minimize(
                |x: &[f64]| objectives::f2(x[0], x[1]),
                &[600.0, 600.0],
                &PowellConfig::default(),
            )
            .unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a, b);
    }

    #[test]
    fn translation_equivariance_on_a_quadratic() {
        let mut sampler = GaussianSampler::from_seed(23);
        let quad = SpdQuadratic::random(4, &mut sampler);
        let shift = [10.0, -7.0, 2.5, 0.25];
        let x0 = [1.0, 2.0, 3.0, 4.0];
        let base = powell_minimize(|x: &[f64]| quad.eval(x), &x0, &PowellConfig::default())
            .unwrap();
        let shifted_start: Vec<f64> = x0.iter().zip(&shift).map(|(a, b)| a + b).collect();
        let shifted = powell_minimize(
            |x: &[f64]| {
                let unshifted: Vec<f64> = x.iter().zip(&shift).map(|(a, b)| a - b).collect();
                quad.eval(&unshifted)
            },
            &shifted_start,
            &PowellConfig::default(),
        )
        .unwrap();
        for i in 0..4 {
            assert!(
                (shifted.x[i] - (base.x[i] + shift[i])).abs() < 1e-6,
                "coordinate {i}: {} vs {}",
                shifted.x[i],
                base.x[i] + shift[i]
            );
        }
    }

    #[test]
    fn budgets_are_respected() {
        let quad = |x: &[f64]| {
            x.iter()
                .enumerate()
                .map(|(i, v)| (i + 1) as f64 * (v - 1.0) * (v - 1.0))
                .sum::<f64>()
        };
        let tight_evals = PowellConfig {
            max_evals: Some(40),
            ..PowellConfig::default()
        };
        let out = powell_minimize(quad, &[5.0; 6], &tight_evals).unwrap();
        assert_eq!(out.reason, PowellTermination::EvalBudget);
        assert!(!out.converged);
        // Documented overshoot bound: one full line search.
        let overshoot =
            (2 + DEFAULT_BRACKET_EXPANSIONS + 1 + DEFAULT_BRENT_ITERS) as u64;
        assert!(out.evals <= 40 + overshoot, "evals = {}", out.evals);

        let tight_iters = PowellConfig {
            max_iters: Some(1),
            ..PowellConfig::default()
        };
        let out = powell_minimize(quad, &[5.0; 6], &tight_iters).unwrap();
        assert!(out.iters <= 1);
        assert_eq!(out.reason, PowellTermination::IterBudget);
    }

    #[test]
    fn non_finite_objective_aborts() {
        let err = powell_minimize(
            |x: &[f64]| if x[0] > 2.0 { f64::NAN } else { (x[0] - 5.0).abs() },
            &[0.0],
            &PowellConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonFiniteObjective { .. }));
    }

    #[test]
    fn config_validation() {
        assert!(PowellConfig {
            xtol: 0.0,
            ..PowellConfig::default()
        }
        .validate()
        .is_err());
        assert!(PowellConfig {
            max_evals: Some(0),
            ..PowellConfig::default()
        }
        .validate()
        .is_err());
        assert!(PowellConfig::default().validate().is_ok());
    }
}
