//! Hybridized signatures and sentences.
//!
//! A hybrid signature is a triple: nominal names, arity-indexed modalities,
//! and a base signature. Sentences layer Boolean connectors, n-ary box and
//! diamond, nominals, `@`-retrieval and two quantifier families (nominal
//! variables and rigid first-order variables) over atomic base sentences.

mod morphism;
mod wellformed;

pub use morphism::{translate_hybrid, HybridMorphism};
pub use wellformed::{check_wellformed, free_names, FreeNames, WfIssue};

use crate::base::{BaseSentence, BaseSignature};
use indexmap::{IndexMap, IndexSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HybridError {
    #[error("namespaces are not disjoint: `{0}` declared twice")]
    NamespaceClash(String),
    #[error("modality `{name}` has arity {arity}; the minimum is 2")]
    BadModalityArity { name: String, arity: usize },
    #[error("symbol `{0}` not in morphism domain")]
    SymbolNotInDomain(String),
    #[error(transparent)]
    Base(#[from] crate::base::BaseError),
}

/// The triple (Nom, Lambda, Sigma). Modality arity counts every tuple
/// position including the source world, so a conventional binary
/// accessibility relation has arity 2 and its box takes one argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HybridSignature {
    pub nominals: IndexSet<String>,
    pub modalities: IndexMap<String, usize>,
    pub base: BaseSignature,
}

impl HybridSignature {
    pub fn new(base: BaseSignature) -> Self {
        HybridSignature {
            nominals: IndexSet::new(),
            modalities: IndexMap::new(),
            base,
        }
    }

    /// Namespace disjointness and the arity floor.
    pub fn validate(&self) -> Result<(), HybridError> {
        self.base.validate()?;
        let base_names = self.base.symbol_names();
        for n in &self.nominals {
            if self.modalities.contains_key(n) || base_names.contains(n) {
                return Err(HybridError::NamespaceClash(n.clone()));
            }
        }
        for (m, arity) in &self.modalities {
            if base_names.contains(m) {
                return Err(HybridError::NamespaceClash(m.clone()));
            }
            if *arity < 2 {
                return Err(HybridError::BadModalityArity {
                    name: m.clone(),
                    arity: *arity,
                });
            }
        }
        Ok(())
    }

    /// True when `name` is a declared nominal, modality, or base symbol.
    pub fn declares(&self, name: &str) -> bool {
        self.nominals.contains(name)
            || self.modalities.contains_key(name)
            || self.base.symbol_names().contains(name)
    }
}

/// Hybrid sentences. `Box` is the disjunctive n-ary box: it holds when
/// every outgoing tuple satisfies some argument sentence at the
/// corresponding position. At arity 2 this is the familiar box.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HybridSentence {
    Base(BaseSentence),
    Nominal(String),
    Not(std::boxed::Box<HybridSentence>),
    And(std::boxed::Box<HybridSentence>, std::boxed::Box<HybridSentence>),
    Or(std::boxed::Box<HybridSentence>, std::boxed::Box<HybridSentence>),
    Implies(std::boxed::Box<HybridSentence>, std::boxed::Box<HybridSentence>),
    Box {
        modality: String,
        args: Vec<HybridSentence>,
    },
    Diamond {
        modality: String,
        args: Vec<HybridSentence>,
    },
    At {
        nominal: String,
        body: std::boxed::Box<HybridSentence>,
    },
    ForallNom {
        binder: String,
        body: std::boxed::Box<HybridSentence>,
    },
    ExistsNom {
        binder: String,
        body: std::boxed::Box<HybridSentence>,
    },
    ForallRigid {
        var: String,
        sort: String,
        body: std::boxed::Box<HybridSentence>,
    },
    ExistsRigid {
        var: String,
        sort: String,
        body: std::boxed::Box<HybridSentence>,
    },
}

impl HybridSentence {
    #[allow(clippy::should_implement_trait)]
    pub fn not(s: HybridSentence) -> HybridSentence {
        HybridSentence::Not(std::boxed::Box::new(s))
    }

    pub fn and(l: HybridSentence, r: HybridSentence) -> HybridSentence {
        HybridSentence::And(std::boxed::Box::new(l), std::boxed::Box::new(r))
    }

    pub fn or(l: HybridSentence, r: HybridSentence) -> HybridSentence {
        HybridSentence::Or(std::boxed::Box::new(l), std::boxed::Box::new(r))
    }

    pub fn implies(l: HybridSentence, r: HybridSentence) -> HybridSentence {
        HybridSentence::Implies(std::boxed::Box::new(l), std::boxed::Box::new(r))
    }

    pub fn at(nominal: impl Into<String>, body: HybridSentence) -> HybridSentence {
        HybridSentence::At {
            nominal: nominal.into(),
            body: std::boxed::Box::new(body),
        }
    }

    pub fn boxm(modality: impl Into<String>, args: Vec<HybridSentence>) -> HybridSentence {
        HybridSentence::Box {
            modality: modality.into(),
            args,
        }
    }

    pub fn diamond(modality: impl Into<String>, args: Vec<HybridSentence>) -> HybridSentence {
        HybridSentence::Diamond {
            modality: modality.into(),
            args,
        }
    }

    pub fn forall_nom(binder: impl Into<String>, body: HybridSentence) -> HybridSentence {
        HybridSentence::ForallNom {
            binder: binder.into(),
            body: std::boxed::Box::new(body),
        }
    }

    pub fn exists_nom(binder: impl Into<String>, body: HybridSentence) -> HybridSentence {
        HybridSentence::ExistsNom {
            binder: binder.into(),
            body: std::boxed::Box::new(body),
        }
    }

    pub fn forall_rigid(
        var: impl Into<String>,
        sort: impl Into<String>,
        body: HybridSentence,
    ) -> HybridSentence {
        HybridSentence::ForallRigid {
            var: var.into(),
            sort: sort.into(),
            body: std::boxed::Box::new(body),
        }
    }

    pub fn exists_rigid(
        var: impl Into<String>,
        sort: impl Into<String>,
        body: HybridSentence,
    ) -> HybridSentence {
        HybridSentence::ExistsRigid {
            var: var.into(),
            sort: sort.into(),
            body: std::boxed::Box::new(body),
        }
    }

    /// Number of AST nodes (base atoms count as one node).
    pub fn node_count(&self) -> usize {
        match self {
            HybridSentence::Base(_) | HybridSentence::Nominal(_) => 1,
            HybridSentence::Not(s) => 1 + s.node_count(),
            HybridSentence::And(l, r)
            | HybridSentence::Or(l, r)
            | HybridSentence::Implies(l, r) => 1 + l.node_count() + r.node_count(),
            HybridSentence::Box { args, .. } | HybridSentence::Diamond { args, .. } => {
                1 + args.iter().map(|a| a.node_count()).sum::<usize>()
            }
            HybridSentence::At { body, .. }
            | HybridSentence::ForallNom { body, .. }
            | HybridSentence::ExistsNom { body, .. }
            | HybridSentence::ForallRigid { body, .. }
            | HybridSentence::ExistsRigid { body, .. } => 1 + body.node_count(),
        }
    }
}

/// A named theory: a hybrid signature plus closed axioms, and the constraint
/// set that the model class carries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HybridTheory {
    pub name: String,
    pub signature: HybridSignature,
    pub axioms: Vec<HybridSentence>,
}

impl HybridTheory {
    /// Every axiom well-formed and closed over the signature.
    pub fn validate(&self) -> Result<(), Vec<WfIssue>> {
        self.signature.validate().map_err(|e| {
            vec![WfIssue {
                path: "signature".into(),
                message: e.to_string(),
            }]
        })?;
        let mut issues = Vec::new();
        for (i, ax) in self.axioms.iter().enumerate() {
            for issue in check_wellformed(&self.signature, ax) {
                issues.push(WfIssue {
                    path: format!("axiom[{i}].{}", issue.path),
                    message: issue.message,
                });
            }
            let free = free_names(ax);
            let free_noms: Vec<_> = free
                .nominals
                .iter()
                .filter(|n| !self.signature.nominals.contains(*n))
                .collect();
            if !free_noms.is_empty() || !free.rigid_vars.is_empty() {
                issues.push(WfIssue {
                    path: format!("axiom[{i}]"),
                    message: format!(
                        "axiom is not closed: free nominal variables {:?}, free rigid variables {:?}",
                        free_noms, free.rigid_vars
                    ),
                });
            }
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(issues)
        }
    }
}
