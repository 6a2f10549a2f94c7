//! Base institutions: the signature / sentence / model / satisfaction layer
//! that the hybrid constructions are parameterised over.
//!
//! Two instances are provided. `PROP` has proposition names and nothing else;
//! `RFOL` has many-sorted atomic first-order logic over total functions and
//! relations, with per-symbol rigidity flags. Both are deliberately stripped
//! to atoms: Boolean structure and quantifiers live at the hybrid level.
//!
//! The institution interface consists of the types in this module together
//! with [`base_satisfies`], [`BaseMorphism::translate_sentence`] and
//! [`BaseMorphism::reduct_model`]; a new base logic slots in by extending
//! these.

mod model;
mod morphism;

pub use model::{base_satisfies, eval_term, validate_model, BaseModel, OpTable, PropModel, RfolModel};
pub use morphism::{BaseMorphism, SymbolMap};

use indexmap::{IndexMap, IndexSet};
use thiserror::Error;

/// Carrier element id. Models are finite, so elements are small integers.
pub type Element = u32;

/// Assignment of rigid variables to carrier elements, used when evaluating
/// open atoms under an enclosing hybrid-level quantifier.
pub type VarEnv = IndexMap<String, Element>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rigidity {
    Rigid,
    Flexible,
}

impl Rigidity {
    pub fn is_rigid(self) -> bool {
        matches!(self, Rigidity::Rigid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseKind {
    Prop,
    Rfol,
}

/// Operation declaration: argument sorts, result sort, rigidity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpDecl {
    pub args: Vec<String>,
    pub result: String,
    pub rigidity: Rigidity,
}

/// Relation declaration: argument sorts, rigidity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelDecl {
    pub args: Vec<String>,
    pub rigidity: Rigidity,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PropSignature {
    pub atoms: IndexSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RfolSignature {
    pub sorts: IndexMap<String, Rigidity>,
    pub ops: IndexMap<String, OpDecl>,
    pub rels: IndexMap<String, RelDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseSignature {
    Prop(PropSignature),
    Rfol(RfolSignature),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BaseError {
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("rigid symbol `{symbol}` ranges over flexible sort `{sort}`")]
    RigidOverFlexible { symbol: String, sort: String },
    #[error("op `{op}` applied to {got} arguments, expected {expected}")]
    ArityMismatch { op: String, expected: usize, got: usize },
    #[error("ill-sorted term: {0}")]
    UnsortedTerm(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("symbol `{0}` not in morphism domain")]
    SymbolNotInDomain(String),
    #[error("signature kinds do not match ({0})")]
    KindMismatch(String),
    #[error("op table for `{op}` is not total: missing entry for {tuple:?}")]
    TableNotTotal { op: String, tuple: Vec<Element> },
    #[error("op table for `{op}` maps {tuple:?} outside the result carrier")]
    TableOutOfCarrier { op: String, tuple: Vec<Element> },
    #[error("rel table for `{rel}` contains tuple {tuple:?} outside the carriers")]
    TupleOutOfCarrier { rel: String, tuple: Vec<Element> },
    #[error("carrier for sort `{0}` is empty")]
    EmptyCarrier(String),
    #[error("model does not interpret `{0}`")]
    MissingInterpretation(String),
    #[error("valuation missing for atom `{0}`")]
    MissingValuation(String),
}

impl BaseSignature {
    pub fn kind(&self) -> BaseKind {
        match self {
            BaseSignature::Prop(_) => BaseKind::Prop,
            BaseSignature::Rfol(_) => BaseKind::Rfol,
        }
    }

    pub fn empty_prop() -> Self {
        BaseSignature::Prop(PropSignature::default())
    }

    pub fn empty_rfol() -> Self {
        BaseSignature::Rfol(RfolSignature::default())
    }

    pub fn as_rfol(&self) -> Option<&RfolSignature> {
        match self {
            BaseSignature::Rfol(s) => Some(s),
            BaseSignature::Prop(_) => None,
        }
    }

    pub fn as_prop(&self) -> Option<&PropSignature> {
        match self {
            BaseSignature::Prop(s) => Some(s),
            BaseSignature::Rfol(_) => None,
        }
    }

    /// All declared symbol names, across classes. Used for namespace
    /// disjointness checks at the hybrid level.
    pub fn symbol_names(&self) -> IndexSet<String> {
        let mut names = IndexSet::new();
        match self {
            BaseSignature::Prop(p) => names.extend(p.atoms.iter().cloned()),
            BaseSignature::Rfol(r) => {
                names.extend(r.sorts.keys().cloned());
                names.extend(r.ops.keys().cloned());
                names.extend(r.rels.keys().cloned());
            }
        }
        names
    }

    pub fn is_rigid_sort(&self, sort: &str) -> bool {
        match self {
            BaseSignature::Prop(_) => false,
            BaseSignature::Rfol(r) => r.sorts.get(sort).map(|x| x.is_rigid()).unwrap_or(false),
        }
    }

    /// Structural invariants: declared sorts, and rigid symbols only over
    /// rigid carriers (a rigid table could not be shared across worlds if its
    /// carrier varied).
    pub fn validate(&self) -> Result<(), BaseError> {
        let r = match self {
            BaseSignature::Prop(_) => return Ok(()),
            BaseSignature::Rfol(r) => r,
        };
        let sort_ok = |s: &String| -> Result<(), BaseError> {
            if r.sorts.contains_key(s) {
                Ok(())
            } else {
                Err(BaseError::UnknownSort(s.clone()))
            }
        };
        for (name, op) in &r.ops {
            for s in op.args.iter().chain(std::iter::once(&op.result)) {
                sort_ok(s)?;
                if op.rigidity.is_rigid() && !r.sorts[s].is_rigid() {
                    return Err(BaseError::RigidOverFlexible {
                        symbol: name.clone(),
                        sort: s.clone(),
                    });
                }
            }
        }
        for (name, rel) in &r.rels {
            for s in &rel.args {
                sort_ok(s)?;
                if rel.rigidity.is_rigid() && !r.sorts[s].is_rigid() {
                    return Err(BaseError::RigidOverFlexible {
                        symbol: name.clone(),
                        sort: s.clone(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// First-order terms over an RFOL signature: variables and op applications.
/// Constants are nullary applications.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn app(op: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(op.into(), args)
    }

    pub fn constant(op: impl Into<String>) -> Term {
        Term::App(op.into(), Vec::new())
    }

    pub fn vars(&self) -> IndexSet<String> {
        let mut out = IndexSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut IndexSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }
}

/// Atomic base sentences. The base institutions carry no connectors or
/// quantifiers of their own.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BaseSentence {
    /// Proposition name (PROP).
    PropAtom(String),
    /// `t1 = t2` over well-sorted terms (RFOL).
    Equation(Term, Term),
    /// `r(t1..tn)` (RFOL).
    RelAtom(String, Vec<Term>),
}

impl BaseSentence {
    pub fn free_vars(&self) -> IndexSet<String> {
        let mut out = IndexSet::new();
        match self {
            BaseSentence::PropAtom(_) => {}
            BaseSentence::Equation(l, r) => {
                l.collect_vars(&mut out);
                r.collect_vars(&mut out);
            }
            BaseSentence::RelAtom(_, args) => {
                for a in args {
                    a.collect_vars(&mut out);
                }
            }
        }
        out
    }
}

/// Infers the sort of a term, checking well-sortedness along the way.
/// `vars` gives the sorts of in-scope (hybrid-level) rigid variables.
pub fn term_sort(
    sig: &RfolSignature,
    term: &Term,
    vars: &IndexMap<String, String>,
) -> Result<String, BaseError> {
    match term {
        Term::Var(v) => vars
            .get(v)
            .cloned()
            .ok_or_else(|| BaseError::UnboundVariable(v.clone())),
        Term::App(op, args) => {
            let decl = sig
                .ops
                .get(op)
                .ok_or_else(|| BaseError::UnknownSymbol(op.clone()))?;
            if decl.args.len() != args.len() {
                return Err(BaseError::ArityMismatch {
                    op: op.clone(),
                    expected: decl.args.len(),
                    got: args.len(),
                });
            }
            for (arg, expected) in args.iter().zip(&decl.args) {
                let got = term_sort(sig, arg, vars)?;
                if &got != expected {
                    return Err(BaseError::UnsortedTerm(format!(
                        "argument of `{op}` has sort `{got}`, expected `{expected}`"
                    )));
                }
            }
            Ok(decl.result.clone())
        }
    }
}

/// Well-sortedness of an atomic sentence over a signature, given the sorts of
/// the in-scope rigid variables.
pub fn check_sentence(
    sig: &BaseSignature,
    sentence: &BaseSentence,
    vars: &IndexMap<String, String>,
) -> Result<(), BaseError> {
    match (sig, sentence) {
        (BaseSignature::Prop(p), BaseSentence::PropAtom(a)) => {
            if p.atoms.contains(a) {
                Ok(())
            } else {
                Err(BaseError::UnknownSymbol(a.clone()))
            }
        }
        (BaseSignature::Rfol(r), BaseSentence::Equation(lhs, rhs)) => {
            let ls = term_sort(r, lhs, vars)?;
            let rs = term_sort(r, rhs, vars)?;
            if ls == rs {
                Ok(())
            } else {
                Err(BaseError::UnsortedTerm(format!(
                    "equation relates sort `{ls}` to sort `{rs}`"
                )))
            }
        }
        (BaseSignature::Rfol(r), BaseSentence::RelAtom(rel, args)) => {
            let decl = r
                .rels
                .get(rel)
                .ok_or_else(|| BaseError::UnknownSymbol(rel.clone()))?;
            if decl.args.len() != args.len() {
                return Err(BaseError::ArityMismatch {
                    op: rel.clone(),
                    expected: decl.args.len(),
                    got: args.len(),
                });
            }
            for (arg, expected) in args.iter().zip(&decl.args) {
                let got = term_sort(r, arg, vars)?;
                if &got != expected {
                    return Err(BaseError::UnsortedTerm(format!(
                        "argument of `{rel}` has sort `{got}`, expected `{expected}`"
                    )));
                }
            }
            Ok(())
        }
        _ => Err(BaseError::KindMismatch(
            "sentence does not belong to this base logic".into(),
        )),
    }
}
