//! Well-formedness checking and free-name computation.

use super::{HybridSentence, HybridSignature};
use crate::base::{check_sentence, BaseSignature};
use indexmap::{IndexMap, IndexSet};

/// A well-formedness diagnostic: the AST path to the offending node plus a
/// message. Never raised; callers collect the full list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WfIssue {
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FreeNames {
    /// Free nominal names: declared nominals and unbound nominal variables.
    pub nominals: IndexSet<String>,
    /// Free rigid first-order variables.
    pub rigid_vars: IndexSet<String>,
}

struct WfCtx<'a> {
    sig: &'a HybridSignature,
    bound_noms: Vec<String>,
    bound_vars: IndexMap<String, String>,
    issues: Vec<WfIssue>,
}

impl WfCtx<'_> {
    fn push(&mut self, path: &str, message: String) {
        self.issues.push(WfIssue {
            path: path.to_string(),
            message,
        });
    }

    fn nominal_in_scope(&self, name: &str) -> bool {
        self.sig.nominals.contains(name) || self.bound_noms.iter().any(|b| b == name)
    }

    fn shadow_check(&mut self, path: &str, binder: &str) {
        if self.sig.declares(binder) {
            self.push(
                path,
                format!("binder `{binder}` shadows a declared signature symbol"),
            );
        }
        if self.bound_noms.iter().any(|b| b == binder) || self.bound_vars.contains_key(binder) {
            self.push(
                path,
                format!("binder `{binder}` shadows an enclosing binder"),
            );
        }
    }

    fn walk(&mut self, path: &str, s: &HybridSentence) {
        match s {
            HybridSentence::Base(b) => {
                if let Err(e) = check_sentence(&self.sig.base, b, &self.bound_vars) {
                    self.push(path, e.to_string());
                }
            }
            HybridSentence::Nominal(i) => {
                if !self.nominal_in_scope(i) {
                    self.push(path, format!("nominal `{i}` is neither declared nor bound"));
                }
            }
            HybridSentence::Not(x) => self.walk(&format!("{path}.not"), x),
            HybridSentence::And(l, r) => {
                self.walk(&format!("{path}.and.lhs"), l);
                self.walk(&format!("{path}.and.rhs"), r);
            }
            HybridSentence::Or(l, r) => {
                self.walk(&format!("{path}.or.lhs"), l);
                self.walk(&format!("{path}.or.rhs"), r);
            }
            HybridSentence::Implies(l, r) => {
                self.walk(&format!("{path}.implies.lhs"), l);
                self.walk(&format!("{path}.implies.rhs"), r);
            }
            HybridSentence::Box { modality, args } | HybridSentence::Diamond { modality, args } => {
                let kind = if matches!(s, HybridSentence::Box { .. }) {
                    "box"
                } else {
                    "diamond"
                };
                match self.sig.modalities.get(modality) {
                    None => self.push(path, format!("unknown modality `{modality}`")),
                    Some(arity) => {
                        let expected = arity - 1;
                        if args.len() != expected {
                            self.push(
                                path,
                                format!(
                                    "arity mismatch: expected {expected} argument{} for `{modality}`, got {}",
                                    if expected == 1 { "" } else { "s" },
                                    args.len()
                                ),
                            );
                        }
                    }
                }
                for (i, a) in args.iter().enumerate() {
                    self.walk(&format!("{path}.{kind}({modality}).arg[{i}]"), a);
                }
            }
            HybridSentence::At { nominal, body } => {
                if !self.nominal_in_scope(nominal) {
                    self.push(
                        path,
                        format!("nominal `{nominal}` is neither declared nor bound"),
                    );
                }
                self.walk(&format!("{path}.at({nominal})"), body);
            }
            HybridSentence::ForallNom { binder, body }
            | HybridSentence::ExistsNom { binder, body } => {
                self.shadow_check(path, binder);
                self.bound_noms.push(binder.clone());
                self.walk(&format!("{path}.quantNom({binder})"), body);
                self.bound_noms.pop();
            }
            HybridSentence::ForallRigid { var, sort, body }
            | HybridSentence::ExistsRigid { var, sort, body } => {
                self.shadow_check(path, var);
                match &self.sig.base {
                    BaseSignature::Prop(_) => {
                        self.push(path, "rigid quantification requires an RFOL base".into())
                    }
                    BaseSignature::Rfol(r) => match r.sorts.get(sort) {
                        None => self.push(path, format!("unknown sort `{sort}`")),
                        Some(rig) if !rig.is_rigid() => self.push(
                            path,
                            format!("quantified sort `{sort}` is flexible; only rigid sorts may be quantified"),
                        ),
                        Some(_) => {}
                    },
                }
                self.bound_vars.insert(var.clone(), sort.clone());
                self.walk(&format!("{path}.quantRigid({var})"), body);
                self.bound_vars.shift_remove(var);
            }
        }
    }
}

/// Checks all sentence-level invariants; an empty list means well-formed.
pub fn check_wellformed(sig: &HybridSignature, s: &HybridSentence) -> Vec<WfIssue> {
    let mut ctx = WfCtx {
        sig,
        bound_noms: Vec::new(),
        bound_vars: IndexMap::new(),
        issues: Vec::new(),
    };
    ctx.walk("root", s);
    ctx.issues
}

fn collect_free(
    s: &HybridSentence,
    bound_noms: &mut Vec<String>,
    bound_vars: &mut Vec<String>,
    out: &mut FreeNames,
) {
    match s {
        HybridSentence::Base(b) => {
            for v in b.free_vars() {
                if !bound_vars.contains(&v) {
                    out.rigid_vars.insert(v);
                }
            }
        }
        HybridSentence::Nominal(i) => {
            if !bound_noms.iter().any(|x| x == i) {
                out.nominals.insert(i.clone());
            }
        }
        HybridSentence::Not(x) => collect_free(x, bound_noms, bound_vars, out),
        HybridSentence::And(l, r)
        | HybridSentence::Or(l, r)
        | HybridSentence::Implies(l, r) => {
            collect_free(l, bound_noms, bound_vars, out);
            collect_free(r, bound_noms, bound_vars, out);
        }
        HybridSentence::Box { args, .. } | HybridSentence::Diamond { args, .. } => {
            for a in args {
                collect_free(a, bound_noms, bound_vars, out);
            }
        }
        HybridSentence::At { nominal, body } => {
            if !bound_noms.iter().any(|x| x == nominal) {
                out.nominals.insert(nominal.clone());
            }
            collect_free(body, bound_noms, bound_vars, out);
        }
        HybridSentence::ForallNom { binder, body } | HybridSentence::ExistsNom { binder, body } => {
            bound_noms.push(binder.clone());
            collect_free(body, bound_noms, bound_vars, out);
            bound_noms.pop();
        }
        HybridSentence::ForallRigid { var, body, .. }
        | HybridSentence::ExistsRigid { var, body, .. } => {
            bound_vars.push(var.clone());
            collect_free(body, bound_noms, bound_vars, out);
            bound_vars.pop();
        }
    }
}

/// Names not bound by an enclosing quantifier. Declared nominals appear in
/// the nominal set; a sentence is closed when the rigid set is empty and
/// every free nominal is declared.
pub fn free_names(s: &HybridSentence) -> FreeNames {
    let mut out = FreeNames::default();
    collect_free(s, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{BaseSentence, PropSignature};
    use crate::hybrid::HybridSentence as S;

    fn prop_hybrid() -> HybridSignature {
        let mut sig = HybridSignature::new(BaseSignature::Prop(PropSignature {
            atoms: ["p".to_string()].into_iter().collect(),
        }));
        sig.nominals.insert("i".into());
        sig.modalities.insert("lam".into(), 2);
        sig
    }

    #[test]
    fn arity_mismatch_is_diagnosed() {
        let sig = prop_hybrid();
        let s = S::boxm(
            "lam",
            vec![S::Nominal("i".into()), S::Base(BaseSentence::PropAtom("p".into()))],
        );
        let issues = check_wellformed(&sig, &s);
        assert_eq!(issues.len(), 1);
        assert!(issues[0].message.contains("arity mismatch: expected 1 argument"));
    }

    #[test]
    fn rigid_quantifier_over_prop_base_is_diagnosed() {
        let sig = prop_hybrid();
        let s = S::forall_rigid("x", "Nat", S::Base(BaseSentence::PropAtom("p".into())));
        let issues = check_wellformed(&sig, &s);
        assert!(!issues.is_empty());
    }

    #[test]
    fn free_names_of_plain_nominal() {
        let fx = free_names(&S::Nominal("i".into()));
        assert_eq!(fx.nominals.len(), 1);
        assert!(fx.nominals.contains("i"));
        assert!(fx.rigid_vars.is_empty());
    }

    #[test]
    fn quantified_nominal_is_not_free() {
        let fx = free_names(&S::forall_nom("i", S::Nominal("i".into())));
        assert!(fx.nominals.is_empty());
        assert!(fx.rigid_vars.is_empty());
    }

    #[test]
    fn shadowing_is_diagnosed() {
        let sig = prop_hybrid();
        let s = S::forall_nom("k", S::forall_nom("k", S::Nominal("k".into())));
        let issues = check_wellformed(&sig, &s);
        assert!(issues.iter().any(|i| i.message.contains("shadows an enclosing binder")));
    }
}
