//! Bounded countermodel enumeration.
//!
//! Candidates are enumerated in a fixed deterministic order: world count
//! increasing first, then carrier size, then a mixed-radix odometer over
//! relation tables, local model content and the nominal assignment (relation
//! digits most significant, nominal digits least). Rigid tables are decoded
//! once per candidate and shared by every world, so the search only ever
//! produces rigidity-constrained models; frame-property constraints are
//! filtered before local content is inspected.

use super::{
    check_constraints, sat_global, sat_local, ConstraintSet, Environment, KripkeError,
    KripkeModel, World,
};
use crate::base::{
    BaseModel, BaseSignature, Element, OpTable, PropModel, RfolModel,
};
use crate::hybrid::{HybridSentence, HybridSignature};
use indexmap::IndexMap;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_worlds: usize,
    pub max_carrier: u32,
    /// Cap on the total number of candidate models the search may visit.
    pub max_candidates: u64,
}

impl SearchBounds {
    pub fn new(max_worlds: usize, max_carrier: u32) -> SearchBounds {
        SearchBounds {
            max_worlds,
            max_carrier,
            max_candidates: 5_000_000,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("search bounds must be at least 1 world and carrier size 1")]
    BadBounds,
    #[error("search space of {candidates} candidates exceeds the cap of {cap}")]
    BoundsTooLarge { candidates: u128, cap: u64 },
    #[error(transparent)]
    Eval(#[from] KripkeError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A constrained model satisfying every premise globally and falsifying
    /// the goal at the given world.
    Found { model: KripkeModel, world: World },
    NoneWithinBounds,
}

/// Searches for a constrained Kripke model within the bounds that satisfies
/// all premises globally and falsifies the goal at some world.
pub fn find_countermodel(
    sig: &HybridSignature,
    cs: &ConstraintSet,
    premises: &[HybridSentence],
    goal: &HybridSentence,
    bounds: &SearchBounds,
) -> Result<SearchOutcome, SearchError> {
    if bounds.max_worlds == 0 || bounds.max_carrier == 0 {
        return Err(SearchError::BadBounds);
    }
    let mut visited: u128 = 0;
    for n_worlds in 1..=bounds.max_worlds {
        let carrier_sizes: Vec<u32> = match sig.base {
            BaseSignature::Prop(_) => vec![1],
            BaseSignature::Rfol(_) => (1..=bounds.max_carrier).collect(),
        };
        for carrier in carrier_sizes {
            let space = CandidateSpace::new(sig, n_worlds, carrier);
            let total = space.total();
            if visited.saturating_add(total) > bounds.max_candidates as u128 {
                return Err(SearchError::BoundsTooLarge {
                    candidates: visited.saturating_add(total),
                    cap: bounds.max_candidates,
                });
            }
            visited += total;
            let mut odometer = vec![0u64; space.digits.len()];
            loop {
                let model = space.build(sig, &odometer);
                if check_constraints(&model, cs).is_empty() && premises_hold(&model, premises)? {
                    if let Some(world) = failing_world(&model, goal)? {
                        return Ok(SearchOutcome::Found { model, world });
                    }
                }
                if !increment(&mut odometer, &space.digits) {
                    break;
                }
            }
        }
    }
    Ok(SearchOutcome::NoneWithinBounds)
}

fn premises_hold(model: &KripkeModel, premises: &[HybridSentence]) -> Result<bool, KripkeError> {
    for p in premises {
        if !sat_global(model, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn failing_world(model: &KripkeModel, goal: &HybridSentence) -> Result<Option<World>, KripkeError> {
    for w in 0..model.worlds.len() {
        if !sat_local(model, w, goal, &Environment::default())? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Advances the odometer; least-significant digit is the last one. Returns
/// false once the space is exhausted.
fn increment(odometer: &mut [u64], digits: &[DigitSlot]) -> bool {
    for i in (0..odometer.len()).rev() {
        odometer[i] += 1;
        if odometer[i] < digits[i].radix {
            return true;
        }
        odometer[i] = 0;
    }
    false
}

enum DigitKind {
    RelTuple { modality: usize, tuple: Vec<World> },
    PropValue { world: World, atom: usize },
    RigidOpEntry { op: usize, tuple: Vec<Element> },
    RigidRelTuple { rel: usize, tuple: Vec<Element> },
    FlexOpEntry { world: World, op: usize, tuple: Vec<Element> },
    FlexRelTuple { world: World, rel: usize, tuple: Vec<Element> },
    NominalTarget { nominal: usize },
}

struct DigitSlot {
    kind: DigitKind,
    radix: u64,
}

struct CandidateSpace {
    n_worlds: usize,
    carrier: u32,
    digits: Vec<DigitSlot>,
}

fn tuples_over(width: usize, size: u64) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..width {
        let mut next = Vec::with_capacity(out.len() * size as usize);
        for t in &out {
            for v in 0..size {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

impl CandidateSpace {
    fn new(sig: &HybridSignature, n_worlds: usize, carrier: u32) -> CandidateSpace {
        let mut digits = Vec::new();
        for (mi, (_, arity)) in sig.modalities.iter().enumerate() {
            for tuple in tuples_over(*arity, n_worlds as u64) {
                digits.push(DigitSlot {
                    kind: DigitKind::RelTuple {
                        modality: mi,
                        tuple: tuple.into_iter().map(|w| w as World).collect(),
                    },
                    radix: 2,
                });
            }
        }
        match &sig.base {
            BaseSignature::Prop(p) => {
                for w in 0..n_worlds {
                    for (ai, _) in p.atoms.iter().enumerate() {
                        digits.push(DigitSlot {
                            kind: DigitKind::PropValue { world: w, atom: ai },
                            radix: 2,
                        });
                    }
                }
            }
            BaseSignature::Rfol(r) => {
                for (oi, (_, decl)) in r.ops.iter().enumerate() {
                    let entries = tuples_over(decl.args.len(), carrier as u64);
                    if decl.rigidity.is_rigid() {
                        for tuple in &entries {
                            digits.push(DigitSlot {
                                kind: DigitKind::RigidOpEntry {
                                    op: oi,
                                    tuple: tuple.iter().map(|e| *e as Element).collect(),
                                },
                                radix: carrier as u64,
                            });
                        }
                    } else {
                        for w in 0..n_worlds {
                            for tuple in &entries {
                                digits.push(DigitSlot {
                                    kind: DigitKind::FlexOpEntry {
                                        world: w,
                                        op: oi,
                                        tuple: tuple.iter().map(|e| *e as Element).collect(),
                                    },
                                    radix: carrier as u64,
                                });
                            }
                        }
                    }
                }
                for (ri, (_, decl)) in r.rels.iter().enumerate() {
                    let entries = tuples_over(decl.args.len(), carrier as u64);
                    if decl.rigidity.is_rigid() {
                        for tuple in &entries {
                            digits.push(DigitSlot {
                                kind: DigitKind::RigidRelTuple {
                                    rel: ri,
                                    tuple: tuple.iter().map(|e| *e as Element).collect(),
                                },
                                radix: 2,
                            });
                        }
                    } else {
                        for w in 0..n_worlds {
                            for tuple in &entries {
                                digits.push(DigitSlot {
                                    kind: DigitKind::FlexRelTuple {
                                        world: w,
                                        rel: ri,
                                        tuple: tuple.iter().map(|e| *e as Element).collect(),
                                    },
                                    radix: 2,
                                });
                            }
                        }
                    }
                }
            }
        }
        for (ni, _) in sig.nominals.iter().enumerate() {
            digits.push(DigitSlot {
                kind: DigitKind::NominalTarget { nominal: ni },
                radix: n_worlds as u64,
            });
        }
        CandidateSpace {
            n_worlds,
            carrier,
            digits,
        }
    }

    fn total(&self) -> u128 {
        self.digits
            .iter()
            .fold(1u128, |acc, d| acc.saturating_mul(d.radix as u128))
    }

    fn build(&self, sig: &HybridSignature, odometer: &[u64]) -> KripkeModel {
        let worlds: Vec<String> = (0..self.n_worlds).map(|i| format!("w{i}")).collect();
        let mut relations: IndexMap<String, BTreeSet<Vec<World>>> = sig
            .modalities
            .keys()
            .map(|m| (m.clone(), BTreeSet::new()))
            .collect();
        let mut nominal_at: IndexMap<String, World> = IndexMap::new();
        let mut local: Vec<BaseModel> = match &sig.base {
            BaseSignature::Prop(p) => (0..self.n_worlds)
                .map(|_| {
                    BaseModel::Prop(PropModel {
                        valuation: p.atoms.iter().map(|a| (a.clone(), false)).collect(),
                    })
                })
                .collect(),
            BaseSignature::Rfol(r) => {
                let carrier: Vec<Element> = (0..self.carrier).collect();
                (0..self.n_worlds)
                    .map(|_| {
                        let mut m = RfolModel::default();
                        for sort in r.sorts.keys() {
                            m.carriers.insert(sort.clone(), carrier.clone());
                        }
                        for op in r.ops.keys() {
                            m.ops.insert(op.clone(), OpTable::new());
                        }
                        for rel in r.rels.keys() {
                            m.rels.insert(rel.clone(), BTreeSet::new());
                        }
                        BaseModel::Rfol(m)
                    })
                    .collect()
            }
        };
        for (slot, value) in self.digits.iter().zip(odometer) {
            match (&slot.kind, &sig.base) {
                (DigitKind::RelTuple { modality, tuple }, _) => {
                    if *value == 1 {
                        let name = sig.modalities.get_index(*modality).unwrap().0;
                        relations.get_mut(name).unwrap().insert(tuple.clone());
                    }
                }
                (DigitKind::NominalTarget { nominal }, _) => {
                    let name = sig.nominals.get_index(*nominal).unwrap();
                    nominal_at.insert(name.clone(), *value as World);
                }
                (DigitKind::PropValue { world, atom }, BaseSignature::Prop(p)) => {
                    if let BaseModel::Prop(m) = &mut local[*world] {
                        let name = p.atoms.get_index(*atom).unwrap();
                        m.valuation.insert(name.clone(), *value == 1);
                    }
                }
                (DigitKind::RigidOpEntry { op, tuple }, BaseSignature::Rfol(r)) => {
                    let name = r.ops.get_index(*op).unwrap().0.clone();
                    for m in &mut local {
                        if let BaseModel::Rfol(m) = m {
                            m.ops
                                .get_mut(&name)
                                .unwrap()
                                .insert(tuple.clone(), *value as Element);
                        }
                    }
                }
                (DigitKind::RigidRelTuple { rel, tuple }, BaseSignature::Rfol(r)) if *value == 1 => {
                    let name = r.rels.get_index(*rel).unwrap().0.clone();
                    for m in &mut local {
                        if let BaseModel::Rfol(m) = m {
                            m.rels.get_mut(&name).unwrap().insert(tuple.clone());
                        }
                    }
                }
                (DigitKind::FlexOpEntry { world, op, tuple }, BaseSignature::Rfol(r)) => {
                    let name = r.ops.get_index(*op).unwrap().0;
                    if let BaseModel::Rfol(m) = &mut local[*world] {
                        m.ops
                            .get_mut(name)
                            .unwrap()
                            .insert(tuple.clone(), *value as Element);
                    }
                }
                (DigitKind::FlexRelTuple { world, rel, tuple }, BaseSignature::Rfol(r))
                    if *value == 1 =>
                {
                    let name = r.rels.get_index(*rel).unwrap().0;
                    if let BaseModel::Rfol(m) = &mut local[*world] {
                        m.rels.get_mut(name).unwrap().insert(tuple.clone());
                    }
                }
                _ => {}
            }
        }
        KripkeModel {
            signature: sig.clone(),
            worlds,
            relations,
            nominal_at,
            local,
        }
    }
}
