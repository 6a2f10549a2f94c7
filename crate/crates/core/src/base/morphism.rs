//! Signature morphisms, sentence translation and model reduct.
//!
//! Morphisms rename symbols class-by-class and may extend the target with
//! fresh symbols (the signature-extension reading of quantification). The
//! Satisfaction Condition ties translation and reduct together; it is
//! property-tested in the crate's integration suite.

use super::{
    BaseError, BaseModel, BaseSentence, BaseSignature, PropModel, RfolModel, Term,
};
use indexmap::IndexMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolMap {
    Prop {
        atoms: IndexMap<String, String>,
    },
    Rfol {
        sorts: IndexMap<String, String>,
        ops: IndexMap<String, String>,
        rels: IndexMap<String, String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseMorphism {
    pub source: BaseSignature,
    pub target: BaseSignature,
    pub map: SymbolMap,
    /// Target symbols not in the image: fresh constants added for
    /// quantification-as-extension. Purely informational.
    pub extensions: Vec<String>,
}

fn lookup<'a>(map: &'a IndexMap<String, String>, name: &str) -> Result<&'a str, BaseError> {
    map.get(name)
        .map(|s| s.as_str())
        .ok_or_else(|| BaseError::SymbolNotInDomain(name.to_string()))
}

impl BaseMorphism {
    pub fn identity(sig: &BaseSignature) -> BaseMorphism {
        let map = match sig {
            BaseSignature::Prop(p) => SymbolMap::Prop {
                atoms: p.atoms.iter().map(|a| (a.clone(), a.clone())).collect(),
            },
            BaseSignature::Rfol(r) => SymbolMap::Rfol {
                sorts: r.sorts.keys().map(|s| (s.clone(), s.clone())).collect(),
                ops: r.ops.keys().map(|s| (s.clone(), s.clone())).collect(),
                rels: r.rels.keys().map(|s| (s.clone(), s.clone())).collect(),
            },
        };
        BaseMorphism {
            source: sig.clone(),
            target: sig.clone(),
            map,
            extensions: Vec::new(),
        }
    }

    /// Totality on the source, existence in the target, and preservation of
    /// arity, sorting and rigidity.
    pub fn validate(&self) -> Result<(), BaseError> {
        match (&self.source, &self.target, &self.map) {
            (BaseSignature::Prop(src), BaseSignature::Prop(tgt), SymbolMap::Prop { atoms }) => {
                for a in &src.atoms {
                    let image = lookup(atoms, a)?;
                    if !tgt.atoms.contains(image) {
                        return Err(BaseError::UnknownSymbol(image.to_string()));
                    }
                }
                Ok(())
            }
            (
                BaseSignature::Rfol(src),
                BaseSignature::Rfol(tgt),
                SymbolMap::Rfol { sorts, ops, rels },
            ) => {
                for (name, rig) in &src.sorts {
                    let image = lookup(sorts, name)?;
                    match tgt.sorts.get(image) {
                        None => return Err(BaseError::UnknownSort(image.to_string())),
                        Some(t) if t != rig => {
                            return Err(BaseError::KindMismatch(format!(
                                "sort `{name}` changes rigidity under the morphism"
                            )))
                        }
                        Some(_) => {}
                    }
                }
                for (name, decl) in &src.ops {
                    let image = lookup(ops, name)?;
                    let tdecl = tgt
                        .ops
                        .get(image)
                        .ok_or_else(|| BaseError::UnknownSymbol(image.to_string()))?;
                    let mapped_args: Result<Vec<_>, _> =
                        decl.args.iter().map(|s| lookup(sorts, s).map(String::from)).collect();
                    if tdecl.args != mapped_args?
                        || tdecl.result != lookup(sorts, &decl.result)?
                        || tdecl.rigidity != decl.rigidity
                    {
                        return Err(BaseError::KindMismatch(format!(
                            "op `{name}` changes profile under the morphism"
                        )));
                    }
                }
                for (name, decl) in &src.rels {
                    let image = lookup(rels, name)?;
                    let tdecl = tgt
                        .rels
                        .get(image)
                        .ok_or_else(|| BaseError::UnknownSymbol(image.to_string()))?;
                    let mapped_args: Result<Vec<_>, _> =
                        decl.args.iter().map(|s| lookup(sorts, s).map(String::from)).collect();
                    if tdecl.args != mapped_args? || tdecl.rigidity != decl.rigidity {
                        return Err(BaseError::KindMismatch(format!(
                            "rel `{name}` changes profile under the morphism"
                        )));
                    }
                }
                Ok(())
            }
            _ => Err(BaseError::KindMismatch(
                "morphism endpoints have different base kinds".into(),
            )),
        }
    }

    /// Composition `self ; other` (apply `self` first).
    pub fn compose(&self, other: &BaseMorphism) -> Result<BaseMorphism, BaseError> {
        let compose_maps = |f: &IndexMap<String, String>,
                            g: &IndexMap<String, String>|
         -> Result<IndexMap<String, String>, BaseError> {
            f.iter()
                .map(|(k, v)| Ok((k.clone(), lookup(g, v)?.to_string())))
                .collect()
        };
        let map = match (&self.map, &other.map) {
            (SymbolMap::Prop { atoms: f }, SymbolMap::Prop { atoms: g }) => SymbolMap::Prop {
                atoms: compose_maps(f, g)?,
            },
            (
                SymbolMap::Rfol { sorts: fs, ops: fo, rels: fr },
                SymbolMap::Rfol { sorts: gs, ops: go, rels: gr },
            ) => SymbolMap::Rfol {
                sorts: compose_maps(fs, gs)?,
                ops: compose_maps(fo, go)?,
                rels: compose_maps(fr, gr)?,
            },
            _ => {
                return Err(BaseError::KindMismatch(
                    "cannot compose morphisms of different base kinds".into(),
                ))
            }
        };
        Ok(BaseMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            map,
            extensions: Vec::new(),
        })
    }

    pub fn map_atom(&self, name: &str) -> Result<&str, BaseError> {
        match &self.map {
            SymbolMap::Prop { atoms } => lookup(atoms, name),
            SymbolMap::Rfol { .. } => Err(BaseError::SymbolNotInDomain(name.to_string())),
        }
    }

    pub fn map_sort(&self, name: &str) -> Result<&str, BaseError> {
        match &self.map {
            SymbolMap::Rfol { sorts, .. } => lookup(sorts, name),
            SymbolMap::Prop { .. } => Err(BaseError::SymbolNotInDomain(name.to_string())),
        }
    }

    pub fn map_op(&self, name: &str) -> Result<&str, BaseError> {
        match &self.map {
            SymbolMap::Rfol { ops, .. } => lookup(ops, name),
            SymbolMap::Prop { .. } => Err(BaseError::SymbolNotInDomain(name.to_string())),
        }
    }

    pub fn map_rel(&self, name: &str) -> Result<&str, BaseError> {
        match &self.map {
            SymbolMap::Rfol { rels, .. } => lookup(rels, name),
            SymbolMap::Prop { .. } => Err(BaseError::SymbolNotInDomain(name.to_string())),
        }
    }

    fn translate_term(&self, term: &Term) -> Result<Term, BaseError> {
        match term {
            Term::Var(v) => Ok(Term::Var(v.clone())),
            Term::App(op, args) => {
                let args: Result<Vec<_>, _> =
                    args.iter().map(|a| self.translate_term(a)).collect();
                Ok(Term::App(self.map_op(op)?.to_string(), args?))
            }
        }
    }

    /// Sentence translation: rename every symbol along the morphism.
    pub fn translate_sentence(&self, s: &BaseSentence) -> Result<BaseSentence, BaseError> {
        match s {
            BaseSentence::PropAtom(a) => Ok(BaseSentence::PropAtom(self.map_atom(a)?.to_string())),
            BaseSentence::Equation(l, r) => Ok(BaseSentence::Equation(
                self.translate_term(l)?,
                self.translate_term(r)?,
            )),
            BaseSentence::RelAtom(rel, args) => {
                let args: Result<Vec<_>, _> =
                    args.iter().map(|a| self.translate_term(a)).collect();
                Ok(BaseSentence::RelAtom(self.map_rel(rel)?.to_string(), args?))
            }
        }
    }

    /// Model reduct: each source symbol is interpreted the way the target
    /// model interprets its image. Total by the morphism invariants.
    pub fn reduct_model(&self, model: &BaseModel) -> Result<BaseModel, BaseError> {
        match (&self.source, model) {
            (BaseSignature::Prop(src), BaseModel::Prop(m)) => {
                let mut valuation = IndexMap::new();
                for a in &src.atoms {
                    let image = self.map_atom(a)?;
                    let v = m
                        .valuation
                        .get(image)
                        .copied()
                        .ok_or_else(|| BaseError::MissingValuation(image.to_string()))?;
                    valuation.insert(a.clone(), v);
                }
                Ok(BaseModel::Prop(PropModel { valuation }))
            }
            (BaseSignature::Rfol(src), BaseModel::Rfol(m)) => {
                let mut out = RfolModel::default();
                for sort in src.sorts.keys() {
                    let image = self.map_sort(sort)?;
                    let carrier = m
                        .carriers
                        .get(image)
                        .ok_or_else(|| BaseError::MissingInterpretation(image.to_string()))?;
                    out.carriers.insert(sort.clone(), carrier.clone());
                }
                for op in src.ops.keys() {
                    let image = self.map_op(op)?;
                    let table = m
                        .ops
                        .get(image)
                        .ok_or_else(|| BaseError::MissingInterpretation(image.to_string()))?;
                    out.ops.insert(op.clone(), table.clone());
                }
                for rel in src.rels.keys() {
                    let image = self.map_rel(rel)?;
                    let table = m
                        .rels
                        .get(image)
                        .ok_or_else(|| BaseError::MissingInterpretation(image.to_string()))?;
                    out.rels.insert(rel.clone(), table.clone());
                }
                Ok(BaseModel::Rfol(out))
            }
            _ => Err(BaseError::KindMismatch(
                "model does not match the morphism's target kind".into(),
            )),
        }
    }
}
