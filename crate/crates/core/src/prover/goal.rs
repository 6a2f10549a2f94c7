//! Goal-level proving: encode, dispatch, fall back, combine.

use super::{run_prover, ProverConfig, ProverVerdict, VerdictStatus};
use crate::fol::{encode_task, TptpError};
use crate::hybrid::{HybridSentence, HybridTheory};
use crate::kripke::{
    find_countermodel, ConstraintSet, SearchBounds, SearchError, SearchOutcome,
};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProveError {
    #[error("encoding failed: {0}")]
    Encoding(#[from] TptpError),
}

#[derive(Debug, Clone)]
pub enum Strategy {
    External(ProverConfig),
    Bounded(SearchBounds),
    Both {
        prover: ProverConfig,
        bounds: SearchBounds,
        /// Run both legs concurrently instead of external-then-internal.
        parallel: bool,
    },
}

/// Attempts `theory |= goal`. The external leg is justified by the
/// conservativity of the encoding; the internal leg can only refute, never
/// prove, because its bounds are incomplete.
pub fn prove_goal(
    theory: &HybridTheory,
    constraints: &ConstraintSet,
    goal: &HybridSentence,
    strategy: &Strategy,
) -> Result<ProverVerdict, ProveError> {
    match strategy {
        Strategy::External(cfg) => external_leg(theory, constraints, goal, cfg),
        Strategy::Bounded(bounds) => Ok(bounded_leg(theory, constraints, goal, bounds)),
        Strategy::Both {
            prover,
            bounds,
            parallel,
        } => {
            let (ext, int) = if *parallel {
                std::thread::scope(|scope| {
                    let ext = scope.spawn(|| external_leg(theory, constraints, goal, prover));
                    let int = bounded_leg(theory, constraints, goal, bounds);
                    (ext.join().expect("external leg panicked"), int)
                })
            } else {
                (
                    external_leg(theory, constraints, goal, prover),
                    bounded_leg(theory, constraints, goal, bounds),
                )
            };
            Ok(combine(ext?, int))
        }
    }
}

fn external_leg(
    theory: &HybridTheory,
    constraints: &ConstraintSet,
    goal: &HybridSentence,
    cfg: &ProverConfig,
) -> Result<ProverVerdict, ProveError> {
    let task = encode_task(theory, constraints, Some(goal));
    Ok(run_prover(&task, cfg))
}

fn bounded_leg(
    theory: &HybridTheory,
    constraints: &ConstraintSet,
    goal: &HybridSentence,
    bounds: &SearchBounds,
) -> ProverVerdict {
    let start = Instant::now();
    let provenance = format!("bounded({},{})", bounds.max_worlds, bounds.max_carrier);
    match find_countermodel(&theory.signature, constraints, &theory.axioms, goal, bounds) {
        Ok(SearchOutcome::Found { model, world }) => {
            let mut v = ProverVerdict::new(
                VerdictStatus::CounterSatisfiable,
                provenance,
                start.elapsed(),
            )
            .with_detail(format!(
                "countermodel with {} worlds, goal fails at `{}`",
                model.worlds.len(),
                model.worlds[world]
            ));
            v.countermodel = Some((model, world));
            v
        }
        Ok(SearchOutcome::NoneWithinBounds) => {
            ProverVerdict::new(VerdictStatus::Unknown, provenance, start.elapsed())
                .with_detail("no countermodel within bounds (bounded search cannot prove)")
        }
        Err(SearchError::Eval(e)) => {
            ProverVerdict::new(VerdictStatus::ProverError, provenance, start.elapsed())
                .with_detail(format!("evaluation failed: {e}"))
        }
        Err(e) => ProverVerdict::new(VerdictStatus::ProverError, provenance, start.elapsed())
            .with_detail(e.to_string()),
    }
}

/// External `Proved` wins, internal `CounterSatisfiable` wins, and both at
/// once is a soundness alarm reported as a prover error.
fn combine(ext: ProverVerdict, int: ProverVerdict) -> ProverVerdict {
    match (ext.status, int.status) {
        (VerdictStatus::Proved, VerdictStatus::CounterSatisfiable) => {
            let detail = format!(
                "CONTRADICTION: external `{}` proved the goal but `{}` found a countermodel ({}; {})",
                ext.prover, int.prover, ext.detail, int.detail
            );
            ProverVerdict::new(
                VerdictStatus::ProverError,
                format!("{}+{}", ext.prover, int.prover),
                ext.wall_time + int.wall_time,
            )
            .with_detail(detail)
        }
        (VerdictStatus::Proved, _) => ext,
        (_, VerdictStatus::CounterSatisfiable) => int,
        _ => {
            let detail = format!(
                "external {}: {}; internal {}: {}",
                ext.status.label(),
                ext.detail,
                int.status.label(),
                int.detail
            );
            ProverVerdict::new(
                ext.status,
                format!("{}+{}", ext.prover, int.prover),
                ext.wall_time + int.wall_time,
            )
            .with_detail(detail)
        }
    }
}
