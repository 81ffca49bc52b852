//! P-GCS: the crunching search with Powell's method as the refinement hook.
//!
//! The composition is exactly the crunching loop of [`crate::gcs`] with one
//! addition: every time a Gaussian candidate strictly improves on the
//! current value, a full Powell minimization starts from that candidate, and
//! its result replaces the candidate only when strictly better. Powell is
//! deterministic and consumes no randomness, so a hybrid run and a plain run
//! with the same seed share their proposal stream up to the first
//! refinement.

use crate::error::Result;
use crate::gcs::{run_gcs, GcsConfig, Refiner, RunResult};
use crate::objectives::ObjectiveSpec;
use crate::powell::{powell_minimize, PowellConfig};

/// Sub-configurations of the hybrid; both validated by their own modules.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HybridConfig {
    pub gcs: GcsConfig,
    pub powell: PowellConfig,
}

/// [`Refiner`] that runs [`powell_minimize`] from the improving candidate.
#[derive(Debug, Clone)]
pub struct PowellRefiner {
    pub config: PowellConfig,
}

impl PowellRefiner {
    pub fn new(config: PowellConfig) -> Self {
        PowellRefiner { config }
    }
}

impl Refiner for PowellRefiner {
    fn refine(
        &mut self,
        objective: &mut dyn FnMut(&[f64]) -> f64,
        start: &[f64],
        _value_at_start: f64,
    ) -> Result<(Vec<f64>, f64)> {
        let outcome = powell_minimize(|x: &[f64]| objective(x), start, &self.config)?;
        Ok((outcome.x, outcome.f))
    }
}

/// Runs the hybrid from `start`; see [`run_gcs`] for the loop contract.
pub fn run_pgcs(
    objective: &ObjectiveSpec,
    start: &[f64],
    config: &HybridConfig,
) -> Result<RunResult> {
    let mut refiner = PowellRefiner::new(config.powell.clone());
    run_gcs(objective, start, &config.gcs, Some(&mut refiner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcs::{gcs_step, GaussianSampler, GcsState, RunTermination};
    use crate::objectives::{make_objective, EvalCounter};
    use crate::wave::{WaveCache, WaveParams};

    #[test]
    fn unreachable_target_exhausts_the_budget() {
        let spec = make_objective("f3", 2).unwrap();
        let config = HybridConfig {
            gcs: GcsConfig {
                target: -1.0, // objectives are nonnegative
                max_outer_iters: 400,
                wave: WaveParams::new(0.0, 3.0, 10, 1e30).unwrap(),
                seed: 21,
            },
            powell: PowellConfig::default(),
        };
        let result = run_pgcs(&spec, &[4.0, 4.0], &config).unwrap();
        assert_eq!(result.reason, RunTermination::IterBudget);
        assert_eq!(result.outer_iters, 400);
        assert!(result.refinements <= result.accepted);
        assert!(result.accepted <= result.outer_iters);
    }

    #[test]
    fn refinement_polishes_a_nearby_well() {
        // From a moderate radius the first improving candidate hands Powell
        // a start it can ride all the way down.
        let spec = make_objective("f3", 3).unwrap();
        let config = HybridConfig {
            gcs: GcsConfig {
                target: 1e-6,
                max_outer_iters: 20_000,
                wave: WaveParams::new(0.0, 20.0, 100, 1e30).unwrap(),
                seed: 3,
            },
            powell: PowellConfig::default(),
        };
        let result = run_pgcs(&spec, &[30.0, 30.0, 30.0], &config).unwrap();
        assert_eq!(result.reason, RunTermination::Success);
        assert!(result.final_val < 1e-6, "final {}", result.final_val);
        assert!(result.refinements >= 1);
    }

    #[test]
    fn proposal_stream_shared_until_first_refinement() {
        let spec = make_objective("f3", 2).unwrap();
        let params = WaveParams::new(0.0, 8.0, 12, 1e30).unwrap();
        let cache = WaveCache::build(params);
        let seed = 8;
        let start = [12.0, -9.0];

        let mut plain_sampler = GaussianSampler::from_seed(seed);
        let mut hybrid_sampler = GaussianSampler::from_seed(seed);
        let mut plain_counter = EvalCounter::new(&spec);
        let mut hybrid_counter = EvalCounter::new(&spec);
        let mut plain_eval = |x: &[f64]| plain_counter.eval(x);
        let mut hybrid_eval = |x: &[f64]| hybrid_counter.eval(x);
        let start_val = spec.eval(&start);
        let mut plain = GcsState::init(start.to_vec(), start_val, &params);
        let mut hybrid = GcsState::init(start.to_vec(), start_val, &params);
        let mut refiner = PowellRefiner::new(PowellConfig::default());

        let mut saw_refinement = false;
        for step in 0..200 {
            let plain_report =
                gcs_step(&mut plain, &cache, &mut plain_eval, &mut plain_sampler, None).unwrap();
            let hybrid_report = gcs_step(
                &mut hybrid,
                &cache,
                &mut hybrid_eval,
                &mut hybrid_sampler,
                Some(&mut refiner),
            )
            .unwrap();

            // Identical candidates until the hybrid's first adopted
            // refinement makes the states diverge.
            assert_eq!(
                plain_report.candidate_value, hybrid_report.candidate_value,
                "streams diverged at step {step} before any refinement"
            );
            assert_eq!(plain.sd, hybrid.sd);
            if hybrid_report.refined {
                assert!(
                    hybrid.current_val < hybrid_report.candidate_value,
                    "adopted refinement is not strictly better"
                );
                saw_refinement = true;
                break;
            }
            assert_eq!(plain.current_pos, hybrid.current_pos);
        }
        assert!(saw_refinement, "no refinement adopted in 200 steps");
    }

    #[test]
    fn accepted_values_dominate_raw_candidates() {
        let spec = make_objective("f2", 2).unwrap();
        let params = WaveParams::new(0.0, 6.0, 16, 1e30).unwrap();
        let cache = WaveCache::build(params);
        let mut sampler = GaussianSampler::from_seed(17);
        let mut counter = EvalCounter::new(&spec);
        let mut eval = |x: &[f64]| counter.eval(x);
        let start = [7.0, -5.0];
        let start_val = eval(&start);
        let mut state = GcsState::init(start.to_vec(), start_val, &params);
        let mut refiner = PowellRefiner::new(PowellConfig::default());

        for _ in 0..300 {
            let report = gcs_step(
                &mut state,
                &cache,
                &mut eval,
                &mut sampler,
                Some(&mut refiner),
            )
            .unwrap();
            if report.accepted {
                assert!(state.current_val <= report.candidate_value);
            }
        }
    }

    #[test]
    fn counters_include_refiner_evaluations() {
        let spec = make_objective("f3", 2).unwrap();
        let config = HybridConfig {
            gcs: GcsConfig {
                target: 1e-8,
                max_outer_iters: 5000,
                wave: WaveParams::new(0.0, 10.0, 20, 1e30).unwrap(),
                seed: 12,
            },
            powell: PowellConfig::default(),
        };
        let result = run_pgcs(&spec, &[15.0, 15.0], &config).unwrap();
        // Proposals plus the initial evaluation can only underestimate the
        // tally: Powell's internal evaluations are in there too.
        assert!(
            result.evals > result.outer_iters + 1,
            "evals {} vs proposals {}",
            result.evals,
            result.outer_iters
        );
        assert!(result.refinements >= 1);
        assert_eq!(result.refinements, result.accepted);
    }
}
