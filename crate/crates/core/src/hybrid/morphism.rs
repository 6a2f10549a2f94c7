//! Hybrid signature morphisms and capture-avoiding sentence translation.

use super::{HybridError, HybridSentence, HybridSignature};
use crate::base::BaseMorphism;
use indexmap::{IndexMap, IndexSet};

/// Renames nominals and modalities and carries a base morphism underneath.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HybridMorphism {
    pub source: HybridSignature,
    pub target: HybridSignature,
    pub nominal_map: IndexMap<String, String>,
    pub modality_map: IndexMap<String, String>,
    pub base: BaseMorphism,
}

impl HybridMorphism {
    pub fn identity(sig: &HybridSignature) -> HybridMorphism {
        HybridMorphism {
            source: sig.clone(),
            target: sig.clone(),
            nominal_map: sig.nominals.iter().map(|n| (n.clone(), n.clone())).collect(),
            modality_map: sig
                .modalities
                .keys()
                .map(|m| (m.clone(), m.clone()))
                .collect(),
            base: BaseMorphism::identity(&sig.base),
        }
    }

    pub fn validate(&self) -> Result<(), HybridError> {
        self.base.validate()?;
        for n in &self.source.nominals {
            let image = self
                .nominal_map
                .get(n)
                .ok_or_else(|| HybridError::SymbolNotInDomain(n.clone()))?;
            if !self.target.nominals.contains(image) {
                return Err(HybridError::SymbolNotInDomain(image.clone()));
            }
        }
        for (m, arity) in &self.source.modalities {
            let image = self
                .modality_map
                .get(m)
                .ok_or_else(|| HybridError::SymbolNotInDomain(m.clone()))?;
            match self.target.modalities.get(image) {
                Some(a) if a == arity => {}
                _ => return Err(HybridError::SymbolNotInDomain(image.clone())),
            }
        }
        Ok(())
    }

    fn map_nominal<'a>(&'a self, name: &'a str) -> Result<&'a str, HybridError> {
        self.nominal_map
            .get(name)
            .map(|s| s.as_str())
            .ok_or_else(|| HybridError::SymbolNotInDomain(name.to_string()))
    }

    fn map_modality<'a>(&'a self, name: &'a str) -> Result<&'a str, HybridError> {
        self.modality_map
            .get(name)
            .map(|s| s.as_str())
            .ok_or_else(|| HybridError::SymbolNotInDomain(name.to_string()))
    }
}

struct Translator<'a> {
    phi: &'a HybridMorphism,
    /// Bound names in the source mapped to their (possibly alpha-renamed)
    /// target spelling.
    bound: IndexMap<String, String>,
    /// Names that a fresh binder must avoid in the target.
    taken: IndexSet<String>,
}

impl Translator<'_> {
    fn fresh_binder(&self, binder: &str) -> String {
        if !self.taken.contains(binder) {
            return binder.to_string();
        }
        let mut n = 1usize;
        loop {
            let candidate = format!("{binder}_{n}");
            if !self.taken.contains(&candidate) {
                return candidate;
            }
            n += 1;
        }
    }

    fn resolve_nominal(&self, name: &str) -> Result<String, HybridError> {
        if let Some(renamed) = self.bound.get(name) {
            Ok(renamed.clone())
        } else {
            Ok(self.phi.map_nominal(name)?.to_string())
        }
    }

    fn with_binder<T>(
        &mut self,
        binder: &str,
        f: impl FnOnce(&mut Self) -> Result<T, HybridError>,
    ) -> Result<(String, T), HybridError> {
        let renamed = self.fresh_binder(binder);
        self.taken.insert(renamed.clone());
        self.bound.insert(binder.to_string(), renamed.clone());
        let out = f(self);
        self.bound.shift_remove(binder);
        self.taken.shift_remove(&renamed);
        Ok((renamed, out?))
    }

    fn translate(&mut self, s: &HybridSentence) -> Result<HybridSentence, HybridError> {
        Ok(match s {
            HybridSentence::Base(b) => {
                // Bound rigid variables pass through; renaming them is the
                // binder's job, handled via a rewrite before translation.
                HybridSentence::Base(self.phi.base.translate_sentence(b)?)
            }
            HybridSentence::Nominal(i) => HybridSentence::Nominal(self.resolve_nominal(i)?),
            HybridSentence::Not(x) => HybridSentence::not(self.translate(x)?),
            HybridSentence::And(l, r) => {
                HybridSentence::and(self.translate(l)?, self.translate(r)?)
            }
            HybridSentence::Or(l, r) => {
                HybridSentence::or(self.translate(l)?, self.translate(r)?)
            }
            HybridSentence::Implies(l, r) => {
                HybridSentence::implies(self.translate(l)?, self.translate(r)?)
            }
            HybridSentence::Box { modality, args } => HybridSentence::Box {
                modality: self.phi.map_modality(modality)?.to_string(),
                args: args
                    .iter()
                    .map(|a| self.translate(a))
                    .collect::<Result<_, _>>()?,
            },
            HybridSentence::Diamond { modality, args } => HybridSentence::Diamond {
                modality: self.phi.map_modality(modality)?.to_string(),
                args: args
                    .iter()
                    .map(|a| self.translate(a))
                    .collect::<Result<_, _>>()?,
            },
            HybridSentence::At { nominal, body } => HybridSentence::At {
                nominal: self.resolve_nominal(nominal)?,
                body: std::boxed::Box::new(self.translate(body)?),
            },
            HybridSentence::ForallNom { binder, body } => {
                let (renamed, body) = self.with_binder(binder, |t| t.translate(body))?;
                HybridSentence::ForallNom {
                    binder: renamed,
                    body: std::boxed::Box::new(body),
                }
            }
            HybridSentence::ExistsNom { binder, body } => {
                let (renamed, body) = self.with_binder(binder, |t| t.translate(body))?;
                HybridSentence::ExistsNom {
                    binder: renamed,
                    body: std::boxed::Box::new(body),
                }
            }
            HybridSentence::ForallRigid { var, sort, body } => {
                let sort = self.phi.base.map_sort(sort)?.to_string();
                let (renamed, body) =
                    self.with_binder(var, |t| t.translate(&rename_rigid_var(body, var, &t.bound[var])))?;
                HybridSentence::ForallRigid {
                    var: renamed,
                    sort,
                    body: std::boxed::Box::new(body),
                }
            }
            HybridSentence::ExistsRigid { var, sort, body } => {
                let sort = self.phi.base.map_sort(sort)?.to_string();
                let (renamed, body) =
                    self.with_binder(var, |t| t.translate(&rename_rigid_var(body, var, &t.bound[var])))?;
                HybridSentence::ExistsRigid {
                    var: renamed,
                    sort,
                    body: std::boxed::Box::new(body),
                }
            }
        })
    }
}

/// Rewrites free occurrences of a rigid variable inside base atoms. Used for
/// alpha-renaming; hybrid binders never capture base variables because the
/// namespaces are checked disjoint.
fn rename_rigid_var(s: &HybridSentence, from: &str, to: &str) -> HybridSentence {
    use crate::base::{BaseSentence, Term};
    if from == to {
        return s.clone();
    }
    fn rn_term(t: &Term, from: &str, to: &str) -> Term {
        match t {
            Term::Var(v) if v == from => Term::Var(to.to_string()),
            Term::Var(v) => Term::Var(v.clone()),
            Term::App(op, args) => Term::App(
                op.clone(),
                args.iter().map(|a| rn_term(a, from, to)).collect(),
            ),
        }
    }
    fn rn(s: &HybridSentence, from: &str, to: &str) -> HybridSentence {
        match s {
            HybridSentence::Base(b) => HybridSentence::Base(match b {
                BaseSentence::PropAtom(a) => BaseSentence::PropAtom(a.clone()),
                BaseSentence::Equation(l, r) => {
                    BaseSentence::Equation(rn_term(l, from, to), rn_term(r, from, to))
                }
                BaseSentence::RelAtom(r, args) => BaseSentence::RelAtom(
                    r.clone(),
                    args.iter().map(|a| rn_term(a, from, to)).collect(),
                ),
            }),
            HybridSentence::Nominal(i) => HybridSentence::Nominal(i.clone()),
            HybridSentence::Not(x) => HybridSentence::not(rn(x, from, to)),
            HybridSentence::And(l, r) => HybridSentence::and(rn(l, from, to), rn(r, from, to)),
            HybridSentence::Or(l, r) => HybridSentence::or(rn(l, from, to), rn(r, from, to)),
            HybridSentence::Implies(l, r) => {
                HybridSentence::implies(rn(l, from, to), rn(r, from, to))
            }
            HybridSentence::Box { modality, args } => HybridSentence::Box {
                modality: modality.clone(),
                args: args.iter().map(|a| rn(a, from, to)).collect(),
            },
            HybridSentence::Diamond { modality, args } => HybridSentence::Diamond {
                modality: modality.clone(),
                args: args.iter().map(|a| rn(a, from, to)).collect(),
            },
            HybridSentence::At { nominal, body } => HybridSentence::At {
                nominal: nominal.clone(),
                body: std::boxed::Box::new(rn(body, from, to)),
            },
            HybridSentence::ForallNom { binder, body } => HybridSentence::ForallNom {
                binder: binder.clone(),
                body: std::boxed::Box::new(rn(body, from, to)),
            },
            HybridSentence::ExistsNom { binder, body } => HybridSentence::ExistsNom {
                binder: binder.clone(),
                body: std::boxed::Box::new(rn(body, from, to)),
            },
            HybridSentence::ForallRigid { var, sort, body } if var != from => {
                HybridSentence::ForallRigid {
                    var: var.clone(),
                    sort: sort.clone(),
                    body: std::boxed::Box::new(rn(body, from, to)),
                }
            }
            HybridSentence::ExistsRigid { var, sort, body } if var != from => {
                HybridSentence::ExistsRigid {
                    var: var.clone(),
                    sort: sort.clone(),
                    body: std::boxed::Box::new(rn(body, from, to)),
                }
            }
            // Shadowed (ruled out by the no-shadowing invariant, but keep
            // the rewrite capture-safe anyway).
            other => other.clone(),
        }
    }
    rn(s, from, to)
}

/// Translates a sentence along a hybrid morphism. Bound names are
/// alpha-renamed when they would collide with target signature symbols.
pub fn translate_hybrid(
    phi: &HybridMorphism,
    s: &HybridSentence,
) -> Result<HybridSentence, HybridError> {
    let mut taken: IndexSet<String> = phi.target.nominals.iter().cloned().collect();
    taken.extend(phi.target.modalities.keys().cloned());
    taken.extend(phi.target.base.symbol_names());
    let mut tr = Translator {
        phi,
        bound: IndexMap::new(),
        taken,
    };
    tr.translate(s)
}
