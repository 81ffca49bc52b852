//! Gaussian Crunching Search: greedy stochastic descent whose mutation
//! width follows the bounded-wave schedule.
//!
//! Each step perturbs the current point with zero-mean Gaussian noise of
//! standard deviation `sd`, evaluates the candidate, and keeps it only on a
//! strict improvement. The `crunch_step` counter indexes the wave cache and
//! advances **only on rejection**; on acceptance the phase is held where it
//! is, so a streak of improvements keeps sampling at the width that is
//! currently working. When the counter reaches an exact multiple of the
//! period it resets to zero, starting a new cycle from the floor. This
//! rejection-driven phase bookkeeping is load-bearing: it is what makes the
//! schedule sweep through every scale while progress stalls, and stay put
//! while progress flows.
//!
//! The initial `sd` is the schedule's lower bound. With the default floor of
//! zero the very first proposal duplicates the start point and is rejected
//! by the strict comparison; that is intentional and keeps the phase
//! sequence aligned with the reference loop.
//!
//! # Randomness
//!
//! [`GaussianSampler`] is ChaCha8 (seeded via `seed_from_u64`) feeding a
//! Box-Muller transform: each `u64` maps to a uniform in `(0, 1]` as
//! `((x >> 11) + 1) * 2^-53`, and a pair `(u1, u2)` yields
//! `sqrt(-2 ln u1) * (cos, sin)(2 pi u2)`, the sine variate being cached for
//! the next draw. The generator and transform are part of the crate's
//! contract and never change silently; golden tests pin the stream.

use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::objectives::{EvalCounter, ObjectiveSpec};
use crate::wave::{WaveCache, WaveParams};

/// Termination threshold, proposal budget, schedule, and seed of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcsConfig {
    /// Success threshold: the run stops once the current value drops
    /// strictly below it. May be infinite (degenerate immediate success).
    pub target: f64,
    /// Proposal budget.
    pub max_outer_iters: u64,
    pub wave: WaveParams,
    pub seed: u64,
}

impl Default for GcsConfig {
    /// The reference constants: target 0.05, half a million proposals,
    /// floor-zero unbounded wave with period 5000.
    fn default() -> Self {
        GcsConfig {
            target: 0.05,
            max_outer_iters: 500_000,
            wave: WaveParams::default(),
            seed: 1,
        }
    }
}

impl GcsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.target.is_nan() {
            return Err(Error::Config("gcs target must not be NaN".into()));
        }
        if self.max_outer_iters == 0 {
            return Err(Error::Config(
                "gcs proposal budget must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Mutable state of a crunching-search run.
#[derive(Debug, Clone, PartialEq)]
pub struct GcsState {
    pub current_pos: Vec<f64>,
    pub current_val: f64,
    /// Consecutive-rejection counter indexing the wave cache.
    pub crunch_step: usize,
    /// Completed proposals.
    pub iter: u64,
    /// Mutation standard deviation for the next proposal.
    pub sd: f64,
}

impl GcsState {
    /// The entry state: phase zero, `sd` equal to the schedule's floor.
    pub fn init(start: Vec<f64>, value_at_start: f64, params: &WaveParams) -> Self {
        GcsState {
            current_pos: start,
            current_val: value_at_start,
            crunch_step: 0,
            iter: 0,
            sd: params.lower(),
        }
    }
}

/// Seeded, portable source of standard-normal variates (see module docs for
/// the exact generator and transform).
#[derive(Debug, Clone)]
pub struct GaussianSampler {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianSampler {
    pub fn from_seed(seed: u64) -> Self {
        GaussianSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform in `(0, 1]`: the top 53 bits of the next word, shifted up by
    /// one so the logarithm below never sees zero.
    fn next_uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 1.0) * (1.0 / (1u64 << 53) as f64)
    }

    /// One standard-normal draw (Box-Muller; the paired variate is cached).
    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.next_uniform();
        let u2 = self.next_uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }

    /// `dim` independent draws from `Normal(0, sd)`. The stream advances
    /// identically whatever `sd` is; `sd = 0` scales every draw to zero.
    pub fn sample(&mut self, dim: usize, sd: f64) -> Vec<f64> {
        (0..dim).map(|_| sd * self.standard_normal()).collect()
    }
}

/// What one [`gcs_step`] did.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub accepted: bool,
    /// True only when a refiner ran **and** its result was adopted.
    pub refined: bool,
    /// Objective value of the raw Gaussian candidate.
    pub candidate_value: f64,
}

/// Local refinement hook run from every improving candidate.
///
/// Implementations evaluate the objective exclusively through the closure
/// they are given, so the caller's accounting stays exact; they must not
/// consume any randomness.
pub trait Refiner {
    fn refine(
        &mut self,
        objective: &mut dyn FnMut(&[f64]) -> f64,
        start: &[f64],
        value_at_start: f64,
    ) -> Result<(Vec<f64>, f64)>;
}

/// Draws the Gaussian candidate for the current state.
pub fn propose(state: &GcsState, sampler: &mut GaussianSampler) -> Vec<f64> {
    let noise = sampler.sample(state.current_pos.len(), state.sd);
    state
        .current_pos
        .iter()
        .zip(&noise)
        .map(|(p, n)| p + n)
        .collect()
}

/// One full iteration of the crunching loop.
///
/// Propose, evaluate, accept on strict improvement (running the refiner
/// first when present, and adopting its result only if strictly better than
/// the raw candidate), advance the crunch step on rejection, reset it at the
/// period boundary, and look the next `sd` up in the cache. A non-finite
/// candidate value counts as a rejection.
pub fn gcs_step(
    state: &mut GcsState,
    cache: &WaveCache,
    objective: &mut dyn FnMut(&[f64]) -> f64,
    sampler: &mut GaussianSampler,
    refiner: Option<&mut dyn Refiner>,
) -> Result<StepReport> {
    let candidate = propose(state, sampler);
    let candidate_value = objective(&candidate);

    let mut accepted = false;
    let mut refined = false;
    if candidate_value.is_finite() && candidate_value < state.current_val {
        let mut new_pos = candidate;
        let mut new_val = candidate_value;
        if let Some(hook) = refiner {
            let (refined_pos, refined_val) = hook.refine(objective, &new_pos, new_val)?;
            if refined_val < new_val {
                new_pos = refined_pos;
                new_val = refined_val;
                refined = true;
            }
        }
        state.current_pos = new_pos;
        state.current_val = new_val;
        accepted = true;
        // Phase held on acceptance.
    } else {
        state.crunch_step += 1;
    }

    if state.crunch_step % cache.period() == 0 {
        state.crunch_step = 0;
    }
    state.sd = cache.sd_at(state.crunch_step);
    state.iter += 1;

    Ok(StepReport {
        accepted,
        refined,
        candidate_value,
    })
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunTermination {
    /// The current value dropped below the target.
    Success,
    /// The proposal budget ran out first.
    IterBudget,
}

impl std::fmt::Display for RunTermination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RunTermination::Success => "success",
            RunTermination::IterBudget => "iter-budget",
        })
    }
}

/// Everything a finished run reports.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub final_pos: Vec<f64>,
    pub final_val: f64,
    /// Proposals made.
    pub outer_iters: u64,
    /// Accepted proposals.
    pub accepted: u64,
    /// Refiner invocations (zero without a refiner).
    pub refinements: u64,
    /// Objective evaluations, including those made inside the refiner.
    pub evals: u64,
    /// Wall-clock seconds, monotonic; informational only.
    pub wall_time: f64,
    pub reason: RunTermination,
    pub seed: u64,
}

/// Runs the crunching search until the target is undercut or the budget is
/// spent. The target check follows each completed step, so even an
/// immediately-satisfied target performs one proposal first.
pub fn run_gcs(
    objective: &ObjectiveSpec,
    start: &[f64],
    config: &GcsConfig,
    mut refiner: Option<&mut dyn Refiner>,
) -> Result<RunResult> {
    config.validate()?;
    if start.len() != objective.dimension() {
        return Err(Error::Config(format!(
            "start point has dimension {}, objective `{}` expects {}",
            start.len(),
            objective.name(),
            objective.dimension()
        )));
    }

    let started = Instant::now();
    let cache = WaveCache::build(config.wave);
    let mut sampler = GaussianSampler::from_seed(config.seed);
    let mut counter = EvalCounter::new(objective);
    let mut eval = |x: &[f64]| counter.eval(x);

    let start_value = eval(start);
    let mut state = GcsState::init(start.to_vec(), start_value, &config.wave);
    let mut accepted: u64 = 0;
    let mut refinements: u64 = 0;
    let has_refiner = refiner.is_some();
    let mut reason = RunTermination::IterBudget;

    while state.iter < config.max_outer_iters {
        let hook: Option<&mut dyn Refiner> = match refiner {
            Some(ref mut r) => Some(&mut **r),
            None => None,
        };
        let report = gcs_step(&mut state, &cache, &mut eval, &mut sampler, hook)?;
        if report.accepted {
            accepted += 1;
            if has_refiner {
                refinements += 1;
            }
        }
        if state.current_val < config.target {
            reason = RunTermination::Success;
            break;
        }
    }

    drop(eval);
    Ok(RunResult {
        final_pos: state.current_pos,
        final_val: state.current_val,
        outer_iters: state.iter,
        accepted,
        refinements,
        evals: counter.count(),
        wall_time: started.elapsed().as_secs_f64(),
        reason,
        seed: config.seed,
    })
}
