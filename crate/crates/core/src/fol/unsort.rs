//! Relativization: many-sorted to unsorted first-order logic.
//!
//! Each sort becomes a unary membership predicate, quantifiers get guarded,
//! function symbols get closure axioms over their guarded domains, and every
//! sort gets a nonemptiness axiom.

use super::{FolFormula, FolSignature, FolTerm, FolTheory, FuncRank, NamedFormula};
use indexmap::IndexMap;

/// Marker standing in for the single implicit universe in unsorted ranks.
pub const UNIVERSE: &str = "$univ";

/// The membership predicate chosen for each sort, avoiding clashes with the
/// theory's own symbols. Deterministic in sort order.
pub fn sort_pred_names(sig: &FolSignature) -> IndexMap<String, String> {
    let mut used = sig.used_names();
    let mut out = IndexMap::new();
    for sort in &sig.sorts {
        let mut candidate = format!("is{sort}");
        let mut n = 2usize;
        while used.contains(&candidate) {
            candidate = format!("is{sort}_{n}");
            n += 1;
        }
        used.insert(candidate.clone());
        out.insert(sort.clone(), candidate);
    }
    out
}

fn guard(sort_preds: &IndexMap<String, String>, sort: &str, term: FolTerm) -> FolFormula {
    FolFormula::Pred(sort_preds[sort].clone(), vec![term])
}

/// Relativizes one formula: `forall x:s. f` becomes `forall x. is_s(x) => f`
/// and `exists x:s. f` becomes `exists x. is_s(x) /\ f`.
pub fn unsort_formula(
    formula: &FolFormula,
    sort_preds: &IndexMap<String, String>,
) -> FolFormula {
    match formula {
        FolFormula::Eq(l, r) => FolFormula::Eq(l.clone(), r.clone()),
        FolFormula::Pred(p, args) => FolFormula::Pred(p.clone(), args.clone()),
        FolFormula::Not(x) => FolFormula::not(unsort_formula(x, sort_preds)),
        FolFormula::And(l, r) => FolFormula::and(
            unsort_formula(l, sort_preds),
            unsort_formula(r, sort_preds),
        ),
        FolFormula::Or(l, r) => FolFormula::or(
            unsort_formula(l, sort_preds),
            unsort_formula(r, sort_preds),
        ),
        FolFormula::Implies(l, r) => FolFormula::implies(
            unsort_formula(l, sort_preds),
            unsort_formula(r, sort_preds),
        ),
        FolFormula::Iff(l, r) => FolFormula::Iff(
            Box::new(unsort_formula(l, sort_preds)),
            Box::new(unsort_formula(r, sort_preds)),
        ),
        FolFormula::Forall(v, Some(s), b) => FolFormula::Forall(
            v.clone(),
            None,
            Box::new(FolFormula::implies(
                guard(sort_preds, s, FolTerm::var(v.clone())),
                unsort_formula(b, sort_preds),
            )),
        ),
        FolFormula::Exists(v, Some(s), b) => FolFormula::Exists(
            v.clone(),
            None,
            Box::new(FolFormula::and(
                guard(sort_preds, s, FolTerm::var(v.clone())),
                unsort_formula(b, sort_preds),
            )),
        ),
        FolFormula::Forall(v, None, b) => FolFormula::Forall(
            v.clone(),
            None,
            Box::new(unsort_formula(b, sort_preds)),
        ),
        FolFormula::Exists(v, None, b) => FolFormula::Exists(
            v.clone(),
            None,
            Box::new(unsort_formula(b, sort_preds)),
        ),
    }
}

fn closure_axiom(
    name: &str,
    rank: &FuncRank,
    sort_preds: &IndexMap<String, String>,
) -> FolFormula {
    if rank.args.is_empty() {
        return guard(sort_preds, &rank.result, FolTerm::constant(name));
    }
    let vars: Vec<String> = (1..=rank.args.len()).map(|i| format!("x{i}")).collect();
    let guards: Vec<FolFormula> = vars
        .iter()
        .zip(&rank.args)
        .map(|(v, s)| guard(sort_preds, s, FolTerm::var(v.clone())))
        .collect();
    let app = FolTerm::App(
        name.to_string(),
        vars.iter().map(|v| FolTerm::var(v.clone())).collect(),
    );
    let mut body = FolFormula::implies(
        FolFormula::and_all(guards),
        guard(sort_preds, &rank.result, app),
    );
    for v in vars.into_iter().rev() {
        body = FolFormula::Forall(v, None, Box::new(body));
    }
    body
}

/// Translates a many-sorted theory into unsorted first-order logic. Returns
/// the unsorted theory and the sort-predicate mapping so goals can be
/// relativized consistently.
pub fn unsort(theory: &FolTheory) -> (FolTheory, IndexMap<String, String>) {
    let sort_preds = sort_pred_names(&theory.signature);
    let mut signature = FolSignature::default();
    for (name, rank) in &theory.signature.funcs {
        signature.funcs.insert(
            name.clone(),
            FuncRank {
                args: vec![UNIVERSE.to_string(); rank.args.len()],
                result: UNIVERSE.to_string(),
            },
        );
    }
    for (name, args) in &theory.signature.preds {
        signature
            .preds
            .insert(name.clone(), vec![UNIVERSE.to_string(); args.len()]);
    }
    for pred in sort_preds.values() {
        signature
            .preds
            .insert(pred.clone(), vec![UNIVERSE.to_string()]);
    }

    let mut axioms: Vec<NamedFormula> = theory
        .axioms
        .iter()
        .map(|ax| NamedFormula {
            name: ax.name.clone(),
            formula: unsort_formula(&ax.formula, &sort_preds),
        })
        .collect();
    for (name, rank) in &theory.signature.funcs {
        axioms.push(NamedFormula {
            name: format!("closure_{name}"),
            formula: closure_axiom(name, rank, &sort_preds),
        });
    }
    for sort in &theory.signature.sorts {
        axioms.push(NamedFormula {
            name: format!("nonempty_{sort}"),
            formula: FolFormula::Exists(
                "x".into(),
                None,
                Box::new(guard(&sort_preds, sort, FolTerm::var("x"))),
            ),
        });
    }
    (
        FolTheory {
            name: theory.name.clone(),
            signature,
            axioms,
        },
        sort_preds,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use indexmap::IndexSet;

    fn tiny_theory() -> FolTheory {
        let mut sig = FolSignature {
            sorts: IndexSet::from(["World".to_string(), "Nat".to_string()]),
            ..FolSignature::default()
        };
        sig.funcs.insert(
            "sum".into(),
            FuncRank { args: vec![], result: "World".into() },
        );
        sig.funcs.insert(
            "suc".into(),
            FuncRank { args: vec!["Nat".into()], result: "Nat".into() },
        );
        sig.preds.insert("R".into(), vec!["World".into(), "World".into()]);
        FolTheory {
            name: "tiny".into(),
            signature: sig,
            axioms: vec![NamedFormula {
                name: "ax_0".into(),
                formula: FolFormula::forall(
                    "w",
                    "World",
                    FolFormula::Pred("R".into(), vec![FolTerm::var("w"), FolTerm::var("w")]),
                ),
            }],
        }
    }

    #[test]
    fn quantifier_is_relativized() {
        let (unsorted, _) = unsort(&tiny_theory());
        assert_eq!(
            unsorted.axioms[0].formula.to_string(),
            "forall w . ((isWorld(w) => R(w, w)))"
        );
    }

    #[test]
    fn constant_closure_is_membership() {
        let (unsorted, _) = unsort(&tiny_theory());
        let closure = unsorted
            .axioms
            .iter()
            .find(|a| a.name == "closure_sum")
            .unwrap();
        assert_eq!(closure.formula.to_string(), "isWorld(sum)");
    }

    #[test]
    fn unary_function_closure_guards_argument() {
        let (unsorted, _) = unsort(&tiny_theory());
        let closure = unsorted
            .axioms
            .iter()
            .find(|a| a.name == "closure_suc")
            .unwrap();
        assert_eq!(
            closure.formula.to_string(),
            "forall x1 . ((isNat(x1) => isNat(suc(x1))))"
        );
    }

    #[test]
    fn every_sort_gets_nonemptiness() {
        let (unsorted, _) = unsort(&tiny_theory());
        let names: Vec<_> = unsorted.axioms.iter().map(|a| a.name.as_str()).collect();
        assert!(names.contains(&"nonempty_World"));
        assert!(names.contains(&"nonempty_Nat"));
    }

    #[test]
    fn sort_pred_names_avoid_collisions() {
        let mut theory = tiny_theory();
        theory
            .signature
            .preds
            .insert("isNat".into(), vec!["Nat".into()]);
        let preds = sort_pred_names(&theory.signature);
        assert_eq!(preds["World"], "isWorld");
        assert_ne!(preds["Nat"], "isNat");
    }
}
