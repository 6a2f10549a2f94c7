//! The local and global satisfaction relations, and theory checking.

use super::{Environment, KripkeError, KripkeModel, World};
use crate::base::{base_satisfies, Element};
use crate::hybrid::{HybridSentence, HybridTheory};

/// Local satisfaction at a world. The box clause is disjunctive over
/// argument positions: for every outgoing tuple, *some* argument sentence
/// holds at its world. At arity 2 this coincides with the usual box.
pub fn sat_local(
    model: &KripkeModel,
    w: World,
    sentence: &HybridSentence,
    env: &Environment,
) -> Result<bool, KripkeError> {
    let mut env = env.clone();
    sat_rec(model, w, sentence, &mut env)
}

fn sat_rec(
    model: &KripkeModel,
    w: World,
    sentence: &HybridSentence,
    env: &mut Environment,
) -> Result<bool, KripkeError> {
    match sentence {
        HybridSentence::Base(b) => Ok(base_satisfies(&model.local[w], b, &env.rigids)?),
        HybridSentence::Nominal(i) => Ok(model.resolve_nominal(env, i)? == w),
        HybridSentence::Not(x) => Ok(!sat_rec(model, w, x, env)?),
        HybridSentence::And(l, r) => Ok(sat_rec(model, w, l, env)? && sat_rec(model, w, r, env)?),
        HybridSentence::Or(l, r) => Ok(sat_rec(model, w, l, env)? || sat_rec(model, w, r, env)?),
        HybridSentence::Implies(l, r) => {
            Ok(!sat_rec(model, w, l, env)? || sat_rec(model, w, r, env)?)
        }
        HybridSentence::Box { modality, args } => {
            for tuple in model.tuples_from(modality, w).cloned().collect::<Vec<_>>() {
                let mut some = false;
                for (i, arg) in args.iter().enumerate() {
                    if sat_rec(model, tuple[i + 1], arg, env)? {
                        some = true;
                        break;
                    }
                }
                if !some {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        HybridSentence::Diamond { modality, args } => {
            for tuple in model.tuples_from(modality, w).cloned().collect::<Vec<_>>() {
                let mut all = true;
                for (i, arg) in args.iter().enumerate() {
                    if !sat_rec(model, tuple[i + 1], arg, env)? {
                        all = false;
                        break;
                    }
                }
                if all {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        HybridSentence::At { nominal, body } => {
            let target = model.resolve_nominal(env, nominal)?;
            sat_rec(model, target, body, env)
        }
        HybridSentence::ForallNom { binder, body } => {
            for v in 0..model.worlds.len() {
                env.nominals.insert(binder.clone(), v);
                let holds = sat_rec(model, w, body, env)?;
                env.nominals.shift_remove(binder);
                if !holds {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        HybridSentence::ExistsNom { binder, body } => {
            for v in 0..model.worlds.len() {
                env.nominals.insert(binder.clone(), v);
                let holds = sat_rec(model, w, body, env)?;
                env.nominals.shift_remove(binder);
                if holds {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        HybridSentence::ForallRigid { var, sort, body } => {
            let carrier: Vec<Element> = model
                .rigid_carrier(sort)
                .ok_or_else(|| KripkeError::UnboundName(sort.clone()))?
                .to_vec();
            for e in carrier {
                env.rigids.insert(var.clone(), e);
                let holds = sat_rec(model, w, body, env)?;
                env.rigids.shift_remove(var);
                if !holds {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        HybridSentence::ExistsRigid { var, sort, body } => {
            let carrier: Vec<Element> = model
                .rigid_carrier(sort)
                .ok_or_else(|| KripkeError::UnboundName(sort.clone()))?
                .to_vec();
            for e in carrier {
                env.rigids.insert(var.clone(), e);
                let holds = sat_rec(model, w, body, env)?;
                env.rigids.shift_remove(var);
                if holds {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// Global satisfaction: local satisfaction at every world.
pub fn sat_global(model: &KripkeModel, sentence: &HybridSentence) -> Result<bool, KripkeError> {
    for w in 0..model.worlds.len() {
        if !sat_local(model, w, sentence, &Environment::default())? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A value bound along the failing path of a universal quantifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessBinding {
    World(String),
    Element(String, Element),
}

impl std::fmt::Display for WitnessBinding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WitnessBinding::World(w) => write!(f, "{w}"),
            WitnessBinding::Element(_, e) => write!(f, "{e}"),
        }
    }
}

/// Where and under which bindings an axiom fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureWitness {
    pub world: String,
    pub bindings: Vec<(String, WitnessBinding)>,
}

impl std::fmt::Display for FailureWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "world {}", self.world)?;
        for (name, value) in &self.bindings {
            write!(f, ", {name}={value}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub index: usize,
    pub holds: bool,
    pub witness: Option<FailureWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryReport {
    pub axioms: Vec<AxiomReport>,
}

impl TheoryReport {
    pub fn all_hold(&self) -> bool {
        self.axioms.iter().all(|a| a.holds)
    }
}

/// Evaluates every axiom globally, reporting the first failing world and the
/// quantifier bindings leading to the failure.
pub fn check_theory(model: &KripkeModel, theory: &HybridTheory) -> Result<TheoryReport, KripkeError> {
    if model.signature != theory.signature {
        return Err(KripkeError::SignatureMismatch(format!(
            "model signature does not match theory `{}`",
            theory.name
        )));
    }
    let mut axioms = Vec::with_capacity(theory.axioms.len());
    for (index, axiom) in theory.axioms.iter().enumerate() {
        let mut witness = None;
        let mut holds = true;
        for w in 0..model.worlds.len() {
            if !sat_local(model, w, axiom, &Environment::default())? {
                holds = false;
                let mut bindings = Vec::new();
                let mut env = Environment::default();
                let failing_world =
                    explain_failure(model, w, axiom, &mut env, &mut bindings)?;
                witness = Some(FailureWitness {
                    world: model.worlds[failing_world].clone(),
                    bindings,
                });
                break;
            }
        }
        axioms.push(AxiomReport { index, holds, witness });
    }
    Ok(TheoryReport { axioms })
}

/// Descends into a failing sentence to locate a concrete counterexample:
/// `@` moves the world, failing universal quantifiers record their first
/// failing binding, conjunctions descend into the failing conjunct. Stops at
/// nodes with no single informative branch.
fn explain_failure(
    model: &KripkeModel,
    w: World,
    sentence: &HybridSentence,
    env: &mut Environment,
    bindings: &mut Vec<(String, WitnessBinding)>,
) -> Result<World, KripkeError> {
    match sentence {
        HybridSentence::At { nominal, body } => {
            let target = model.resolve_nominal(env, nominal)?;
            explain_failure(model, target, body, env, bindings)
        }
        HybridSentence::And(l, r) => {
            if !sat_rec(model, w, l, env)? {
                explain_failure(model, w, l, env, bindings)
            } else {
                explain_failure(model, w, r, env, bindings)
            }
        }
        HybridSentence::Implies(_, r) => explain_failure(model, w, r, env, bindings),
        HybridSentence::ForallNom { binder, body } => {
            for v in 0..model.worlds.len() {
                env.nominals.insert(binder.clone(), v);
                let holds = sat_rec(model, w, body, env)?;
                if !holds {
                    bindings.push((
                        binder.clone(),
                        WitnessBinding::World(model.worlds[v].clone()),
                    ));
                    let out = explain_failure(model, w, body, env, bindings);
                    env.nominals.shift_remove(binder);
                    return out;
                }
                env.nominals.shift_remove(binder);
            }
            Ok(w)
        }
        HybridSentence::ForallRigid { var, sort, body } => {
            let carrier: Vec<Element> = model
                .rigid_carrier(sort)
                .ok_or_else(|| KripkeError::UnboundName(sort.clone()))?
                .to_vec();
            for e in carrier {
                env.rigids.insert(var.clone(), e);
                let holds = sat_rec(model, w, body, env)?;
                if !holds {
                    bindings.push((var.clone(), WitnessBinding::Element(sort.clone(), e)));
                    let out = explain_failure(model, w, body, env, bindings);
                    env.rigids.shift_remove(var);
                    return out;
                }
                env.rigids.shift_remove(var);
            }
            Ok(w)
        }
        _ => Ok(w),
    }
}
