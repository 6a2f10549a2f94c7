//! Finite base models and the base satisfaction relation.

use super::{BaseError, BaseSentence, BaseSignature, Element, Term, VarEnv};
use indexmap::IndexMap;
use std::collections::{BTreeMap, BTreeSet};

/// Total function table: argument tuple to result element.
pub type OpTable = BTreeMap<Vec<Element>, Element>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PropModel {
    pub valuation: IndexMap<String, bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RfolModel {
    /// Sort name to finite nonempty carrier (sorted element ids).
    pub carriers: IndexMap<String, Vec<Element>>,
    pub ops: IndexMap<String, OpTable>,
    pub rels: IndexMap<String, BTreeSet<Vec<Element>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseModel {
    Prop(PropModel),
    Rfol(RfolModel),
}

impl BaseModel {
    pub fn as_rfol(&self) -> Option<&RfolModel> {
        match self {
            BaseModel::Rfol(m) => Some(m),
            BaseModel::Prop(_) => None,
        }
    }

    pub fn as_prop(&self) -> Option<&PropModel> {
        match self {
            BaseModel::Prop(m) => Some(m),
            BaseModel::Rfol(_) => None,
        }
    }
}

/// Checks a model against its signature: total valuation, nonempty carriers,
/// total op tables over the carrier product, rel tuples within carriers.
pub fn validate_model(sig: &BaseSignature, model: &BaseModel) -> Result<(), BaseError> {
    match (sig, model) {
        (BaseSignature::Prop(p), BaseModel::Prop(m)) => {
            for atom in &p.atoms {
                if !m.valuation.contains_key(atom) {
                    return Err(BaseError::MissingValuation(atom.clone()));
                }
            }
            Ok(())
        }
        (BaseSignature::Rfol(r), BaseModel::Rfol(m)) => {
            for sort in r.sorts.keys() {
                let carrier = m
                    .carriers
                    .get(sort)
                    .ok_or_else(|| BaseError::MissingInterpretation(sort.clone()))?;
                if carrier.is_empty() {
                    return Err(BaseError::EmptyCarrier(sort.clone()));
                }
            }
            for (name, decl) in &r.ops {
                let table = m
                    .ops
                    .get(name)
                    .ok_or_else(|| BaseError::MissingInterpretation(name.clone()))?;
                let result_carrier = &m.carriers[&decl.result];
                for tuple in carrier_product(m, &decl.args) {
                    match table.get(&tuple) {
                        None => {
                            return Err(BaseError::TableNotTotal {
                                op: name.clone(),
                                tuple,
                            })
                        }
                        Some(res) if !result_carrier.contains(res) => {
                            return Err(BaseError::TableOutOfCarrier {
                                op: name.clone(),
                                tuple,
                            })
                        }
                        Some(_) => {}
                    }
                }
            }
            for (name, decl) in &r.rels {
                let table = m
                    .rels
                    .get(name)
                    .ok_or_else(|| BaseError::MissingInterpretation(name.clone()))?;
                for tuple in table {
                    let in_carriers = tuple.len() == decl.args.len()
                        && tuple
                            .iter()
                            .zip(&decl.args)
                            .all(|(e, s)| m.carriers[s].contains(e));
                    if !in_carriers {
                        return Err(BaseError::TupleOutOfCarrier {
                            rel: name.clone(),
                            tuple: tuple.clone(),
                        });
                    }
                }
            }
            Ok(())
        }
        _ => Err(BaseError::KindMismatch(
            "model does not belong to this base logic".into(),
        )),
    }
}

/// All tuples over the carriers of the given argument sorts, in
/// lexicographic order.
pub fn carrier_product(model: &RfolModel, arg_sorts: &[String]) -> Vec<Vec<Element>> {
    let mut tuples: Vec<Vec<Element>> = vec![Vec::new()];
    for sort in arg_sorts {
        let carrier = &model.carriers[sort];
        let mut next = Vec::with_capacity(tuples.len() * carrier.len());
        for t in &tuples {
            for e in carrier {
                let mut t2 = t.clone();
                t2.push(*e);
                next.push(t2);
            }
        }
        tuples = next;
    }
    tuples
}

/// Evaluates a term in an RFOL model under a variable assignment.
pub fn eval_term(model: &RfolModel, term: &Term, env: &VarEnv) -> Result<Element, BaseError> {
    match term {
        Term::Var(v) => env
            .get(v)
            .copied()
            .ok_or_else(|| BaseError::UnboundVariable(v.clone())),
        Term::App(op, args) => {
            let table = model
                .ops
                .get(op)
                .ok_or_else(|| BaseError::UnknownSymbol(op.clone()))?;
            let mut tuple = Vec::with_capacity(args.len());
            for a in args {
                tuple.push(eval_term(model, a, env)?);
            }
            table.get(&tuple).copied().ok_or(BaseError::TableNotTotal {
                op: op.clone(),
                tuple,
            })
        }
    }
}

/// The base satisfaction relation: does the atom hold in the model under the
/// given variable assignment?
pub fn base_satisfies(
    model: &BaseModel,
    sentence: &BaseSentence,
    env: &VarEnv,
) -> Result<bool, BaseError> {
    match (model, sentence) {
        (BaseModel::Prop(m), BaseSentence::PropAtom(a)) => m
            .valuation
            .get(a)
            .copied()
            .ok_or_else(|| BaseError::UnknownSymbol(a.clone())),
        (BaseModel::Rfol(m), BaseSentence::Equation(lhs, rhs)) => {
            Ok(eval_term(m, lhs, env)? == eval_term(m, rhs, env)?)
        }
        (BaseModel::Rfol(m), BaseSentence::RelAtom(rel, args)) => {
            let table = m
                .rels
                .get(rel)
                .ok_or_else(|| BaseError::UnknownSymbol(rel.clone()))?;
            let mut tuple = Vec::with_capacity(args.len());
            for a in args {
                tuple.push(eval_term(m, a, env)?);
            }
            Ok(table.contains(&tuple))
        }
        _ => Err(BaseError::KindMismatch(
            "sentence does not belong to this model's base logic".into(),
        )),
    }
}
