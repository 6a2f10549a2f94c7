//! Finite first-order structures and the induced model of a Kripke model.
//!
//! `induced_fol_model` builds the conservativity witness: a single universe
//! holding the worlds and all carrier elements, membership predicates
//! marking the partition, relation tables for the modalities, and the base
//! tables merged with their world argument. Evaluating the unsorted standard
//! translation in this structure is the independent second route that the
//! translation-soundness suite compares against `sat_local`.

use super::{sort_pred_names, FolFormula, FolTerm, SignatureEncoding, WORLD_SORT};
use crate::base::{BaseModel, BaseSignature, Element};
use crate::kripke::{ConstraintSet, KripkeModel};
use indexmap::IndexMap;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FolEvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("function `{f}` undefined at {tuple:?}")]
    PartialFunction { f: String, tuple: Vec<usize> },
    #[error("unknown sort `{0}` in quantifier")]
    UnknownSort(String),
}

/// A finite unsorted first-order structure over universe `0..size`.
/// Many-sorted formulas evaluate too: quantifiers annotated with a sort
/// range over that sort's members instead of the whole universe.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FiniteStructure {
    pub size: usize,
    /// Sort name to members; also materialized as membership predicates.
    pub sort_members: IndexMap<String, Vec<usize>>,
    pub funcs: IndexMap<String, BTreeMap<Vec<usize>, usize>>,
    pub preds: IndexMap<String, BTreeSet<Vec<usize>>>,
}

pub fn eval_term(
    structure: &FiniteStructure,
    term: &FolTerm,
    env: &HashMap<String, usize>,
) -> Result<usize, FolEvalError> {
    match term {
        FolTerm::Var(v) => env
            .get(v)
            .copied()
            .ok_or_else(|| FolEvalError::UnboundVariable(v.clone())),
        FolTerm::App(f, args) => {
            let table = structure
                .funcs
                .get(f)
                .ok_or_else(|| FolEvalError::UnknownFunction(f.clone()))?;
            let mut tuple = Vec::with_capacity(args.len());
            for a in args {
                tuple.push(eval_term(structure, a, env)?);
            }
            table
                .get(&tuple)
                .copied()
                .ok_or(FolEvalError::PartialFunction { f: f.clone(), tuple })
        }
    }
}

/// Tarski evaluation with short-circuiting, so guarded formulas never visit
/// function entries outside their guards.
pub fn eval_formula(
    structure: &FiniteStructure,
    formula: &FolFormula,
    env: &mut HashMap<String, usize>,
) -> Result<bool, FolEvalError> {
    match formula {
        FolFormula::Eq(l, r) => Ok(eval_term(structure, l, env)? == eval_term(structure, r, env)?),
        FolFormula::Pred(p, args) => {
            let table = structure
                .preds
                .get(p)
                .ok_or_else(|| FolEvalError::UnknownPredicate(p.clone()))?;
            let mut tuple = Vec::with_capacity(args.len());
            for a in args {
                tuple.push(eval_term(structure, a, env)?);
            }
            Ok(table.contains(&tuple))
        }
        FolFormula::Not(x) => Ok(!eval_formula(structure, x, env)?),
        FolFormula::And(l, r) => {
            Ok(eval_formula(structure, l, env)? && eval_formula(structure, r, env)?)
        }
        FolFormula::Or(l, r) => {
            Ok(eval_formula(structure, l, env)? || eval_formula(structure, r, env)?)
        }
        FolFormula::Implies(l, r) => {
            Ok(!eval_formula(structure, l, env)? || eval_formula(structure, r, env)?)
        }
        FolFormula::Iff(l, r) => {
            Ok(eval_formula(structure, l, env)? == eval_formula(structure, r, env)?)
        }
        FolFormula::Forall(v, sort, body) => {
            for value in quantifier_range(structure, sort.as_deref())? {
                let saved = env.insert(v.clone(), value);
                let holds = eval_formula(structure, body, env);
                restore(env, v, saved);
                if !holds? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        FolFormula::Exists(v, sort, body) => {
            for value in quantifier_range(structure, sort.as_deref())? {
                let saved = env.insert(v.clone(), value);
                let holds = eval_formula(structure, body, env);
                restore(env, v, saved);
                if holds? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

fn quantifier_range(
    structure: &FiniteStructure,
    sort: Option<&str>,
) -> Result<Vec<usize>, FolEvalError> {
    match sort {
        None => Ok((0..structure.size).collect()),
        Some(s) => structure
            .sort_members
            .get(s)
            .cloned()
            .ok_or_else(|| FolEvalError::UnknownSort(s.to_string())),
    }
}

fn restore(env: &mut HashMap<String, usize>, var: &str, saved: Option<usize>) {
    match saved {
        Some(v) => {
            env.insert(var.to_string(), v);
        }
        None => {
            env.remove(var);
        }
    }
}

/// Builds the induced unsorted structure of a finite constrained Kripke
/// model: universe = worlds then carrier elements, sort-membership
/// predicates marking the partition, modality relations over world ids,
/// nominal constants, rigid tables shared, flexible tables merged with their
/// world argument. Flexible op tables are padded with the first element of
/// the result carrier where a world's own carrier was smaller than the
/// union, which never matters under guarded evaluation.
pub fn induced_fol_model(model: &KripkeModel) -> FiniteStructure {
    let enc = SignatureEncoding::new(&model.signature, &ConstraintSet::default());
    let sort_preds = sort_pred_names(&enc.theory.signature);
    let n_worlds = model.worlds.len();
    let mut structure = FiniteStructure::default();

    // Universe layout: worlds first, then each sort's union carrier in
    // signature order.
    let mut element_id: IndexMap<(String, Element), usize> = IndexMap::new();
    let mut next = n_worlds;
    structure
        .sort_members
        .insert(WORLD_SORT.to_string(), (0..n_worlds).collect());
    if let BaseSignature::Rfol(r) = &model.signature.base {
        for sort in r.sorts.keys() {
            let mut union: BTreeSet<Element> = BTreeSet::new();
            for m in &model.local {
                if let BaseModel::Rfol(m) = m {
                    if let Some(carrier) = m.carriers.get(sort) {
                        union.extend(carrier.iter().copied());
                    }
                }
            }
            let mut members = Vec::with_capacity(union.len());
            for e in union {
                element_id.insert((sort.clone(), e), next);
                members.push(next);
                next += 1;
            }
            structure
                .sort_members
                .insert(enc.names.sorts[sort].clone(), members);
        }
    }
    structure.size = next;

    // Membership predicates, materialized so relativized formulas evaluate
    // uniformly.
    for (sort, members) in &structure.sort_members.clone() {
        let name = sort_preds
            .get(sort)
            .cloned()
            .unwrap_or_else(|| format!("is{sort}"));
        structure
            .preds
            .insert(name, members.iter().map(|m| vec![*m]).collect());
    }

    // Nominal constants and modality relations.
    for (nominal, world) in &model.nominal_at {
        structure.funcs.insert(
            enc.names.nominals[nominal].clone(),
            BTreeMap::from([(vec![], *world)]),
        );
    }
    for (modality, tuples) in &model.relations {
        structure.preds.insert(
            enc.names.modalities[modality].clone(),
            tuples.iter().cloned().collect(),
        );
    }

    match &model.signature.base {
        BaseSignature::Prop(p) => {
            for atom in &p.atoms {
                let mut ext = BTreeSet::new();
                for (w, m) in model.local.iter().enumerate() {
                    if let BaseModel::Prop(m) = m {
                        if m.valuation.get(atom).copied().unwrap_or(false) {
                            ext.insert(vec![w]);
                        }
                    }
                }
                structure.preds.insert(enc.names.atoms[atom].clone(), ext);
            }
        }
        BaseSignature::Rfol(r) => {
            let eid = |sort: &str, e: Element| element_id[&(sort.to_string(), e)];
            for (op, decl) in &r.ops {
                let mut table: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
                if decl.rigidity.is_rigid() {
                    if let BaseModel::Rfol(m) = &model.local[0] {
                        for (args, res) in &m.ops[op] {
                            let key: Vec<usize> = args
                                .iter()
                                .zip(&decl.args)
                                .map(|(e, s)| eid(s, *e))
                                .collect();
                            table.insert(key, eid(&decl.result, *res));
                        }
                    }
                } else {
                    for (w, m) in model.local.iter().enumerate() {
                        if let BaseModel::Rfol(m) = m {
                            for (args, res) in &m.ops[op] {
                                let mut key = vec![w];
                                key.extend(
                                    args.iter().zip(&decl.args).map(|(e, s)| eid(s, *e)),
                                );
                                table.insert(key, eid(&decl.result, *res));
                            }
                        }
                    }
                    pad_flexible_op(
                        &mut table,
                        n_worlds,
                        &decl.args,
                        &decl.result,
                        &enc,
                        &structure,
                    );
                }
                structure.funcs.insert(enc.names.ops[op].clone(), table);
            }
            for (rel, decl) in &r.rels {
                let mut ext: BTreeSet<Vec<usize>> = BTreeSet::new();
                if decl.rigidity.is_rigid() {
                    if let BaseModel::Rfol(m) = &model.local[0] {
                        for tuple in &m.rels[rel] {
                            ext.insert(
                                tuple
                                    .iter()
                                    .zip(&decl.args)
                                    .map(|(e, s)| eid(s, *e))
                                    .collect(),
                            );
                        }
                    }
                } else {
                    for (w, m) in model.local.iter().enumerate() {
                        if let BaseModel::Rfol(m) = m {
                            for tuple in &m.rels[rel] {
                                let mut t = vec![w];
                                t.extend(tuple.iter().zip(&decl.args).map(|(e, s)| eid(s, *e)));
                                ext.insert(t);
                            }
                        }
                    }
                }
                structure.preds.insert(enc.names.rels[rel].clone(), ext);
            }
        }
    }
    structure
}

fn pad_flexible_op(
    table: &mut BTreeMap<Vec<usize>, usize>,
    n_worlds: usize,
    arg_sorts: &[String],
    result_sort: &str,
    enc: &SignatureEncoding,
    structure: &FiniteStructure,
) {
    let default = match structure.sort_members[&enc.names.sorts[result_sort]].first() {
        Some(d) => *d,
        None => return,
    };
    let mut tuples: Vec<Vec<usize>> = (0..n_worlds).map(|w| vec![w]).collect();
    for sort in arg_sorts {
        let members = &structure.sort_members[&enc.names.sorts[sort]];
        let mut grown = Vec::with_capacity(tuples.len() * members.len());
        for t in &tuples {
            for m in members {
                let mut t2 = t.clone();
                t2.push(*m);
                grown.push(t2);
            }
        }
        tuples = grown;
    }
    for t in tuples {
        table.entry(t).or_insert(default);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{PropModel, PropSignature};
    use crate::hybrid::HybridSignature;

    fn one_world_prop_model() -> KripkeModel {
        let mut sig = HybridSignature::new(BaseSignature::Prop(PropSignature {
            atoms: ["p".to_string()].into_iter().collect(),
        }));
        sig.nominals.insert("i".into());
        sig.modalities.insert("lam".into(), 2);
        KripkeModel {
            signature: sig,
            worlds: vec!["w0".into()],
            relations: [("lam".to_string(), BTreeSet::new())].into_iter().collect(),
            nominal_at: [("i".to_string(), 0usize)].into_iter().collect(),
            local: vec![BaseModel::Prop(PropModel {
                valuation: [("p".to_string(), true)].into_iter().collect(),
            })],
        }
    }

    #[test]
    fn one_world_prop_structure() {
        let s = induced_fol_model(&one_world_prop_model());
        assert_eq!(s.size, 1);
        assert!(s.preds["p"].contains(&vec![0]));
        assert!(s.preds["isWorld"].contains(&vec![0]));
        assert_eq!(s.funcs["i"][&vec![]], 0);
    }

    #[test]
    fn eval_handles_quantifiers_and_guards() {
        let s = induced_fol_model(&one_world_prop_model());
        let f = FolFormula::Forall(
            "w".into(),
            None,
            Box::new(FolFormula::implies(
                FolFormula::Pred("isWorld".into(), vec![FolTerm::var("w")]),
                FolFormula::Pred("p".into(), vec![FolTerm::var("w")]),
            )),
        );
        assert!(eval_formula(&s, &f, &mut HashMap::new()).unwrap());
    }
}
