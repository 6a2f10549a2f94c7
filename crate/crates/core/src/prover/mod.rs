//! Prover bridge: dispatches TPTP tasks to external SZS-speaking provers,
//! falls back to internal bounded countermodel search, and assembles
//! verdicts with enough provenance to reproduce them.

mod goal;
mod registry;
mod run;

pub use goal::{prove_goal, ProveError, Strategy};
pub use registry::{ProverConfig, ProverRegistry, RegistryError, PROVERS_ENV};
pub use run::{run_prover, run_prover_on_text};

use crate::kripke::{KripkeModel, World};
use std::time::Duration;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictStatus {
    Proved,
    CounterSatisfiable,
    Timeout,
    Unknown,
    ProverError,
}

impl VerdictStatus {
    pub fn label(self) -> &'static str {
        match self {
            VerdictStatus::Proved => "PROVED",
            VerdictStatus::CounterSatisfiable => "COUNTERSAT",
            VerdictStatus::Timeout => "TIMEOUT",
            VerdictStatus::Unknown => "UNKNOWN",
            VerdictStatus::ProverError => "ERROR",
        }
    }
}

/// Outcome of one proof attempt. `Proved` only ever arises from an SZS
/// Theorem/Unsatisfiable line; the internal bounded search never claims
/// validity since its bounds are incomplete.
#[derive(Debug, Clone)]
pub struct ProverVerdict {
    pub status: VerdictStatus,
    /// Prover id, or `bounded(<worlds>,<carrier>)` for the internal search.
    pub prover: String,
    pub wall_time: Duration,
    /// Raw output excerpt or explanatory message.
    pub detail: String,
    pub countermodel: Option<(KripkeModel, World)>,
}

impl ProverVerdict {
    pub fn new(status: VerdictStatus, prover: impl Into<String>, wall_time: Duration) -> Self {
        ProverVerdict {
            status,
            prover: prover.into(),
            wall_time,
            detail: String::new(),
            countermodel: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}
