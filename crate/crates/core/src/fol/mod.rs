//! First-order target logic: formulas, theories, the standard translation
//! from hybrid sentences, relativization to unsorted form, TPTP emission,
//! and finite first-order structures for desk-scale evaluation.

mod encode;
mod structure;
mod tptp;
mod unsort;

pub use encode::{
    encode_global, encode_sentence, encode_signature, encode_task, EncodeNames, SignatureEncoding,
};
pub use structure::{eval_formula, induced_fol_model, FiniteStructure, FolEvalError};
pub use tptp::{emit_tptp, TptpError};
pub use unsort::{sort_pred_names, unsort, unsort_formula};

use indexmap::{IndexMap, IndexSet};

/// The sort every hybrid world lives in after encoding.
pub const WORLD_SORT: &str = "World";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FolTerm {
    Var(String),
    App(String, Vec<FolTerm>),
}

impl FolTerm {
    pub fn var(name: impl Into<String>) -> FolTerm {
        FolTerm::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> FolTerm {
        FolTerm::App(name.into(), Vec::new())
    }
}

/// First-order formulas. Quantifier sorts are `Some` in many-sorted
/// theories and `None` after relativization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FolFormula {
    Eq(FolTerm, FolTerm),
    Pred(String, Vec<FolTerm>),
    Not(Box<FolFormula>),
    And(Box<FolFormula>, Box<FolFormula>),
    Or(Box<FolFormula>, Box<FolFormula>),
    Implies(Box<FolFormula>, Box<FolFormula>),
    Iff(Box<FolFormula>, Box<FolFormula>),
    Forall(String, Option<String>, Box<FolFormula>),
    Exists(String, Option<String>, Box<FolFormula>),
}

impl FolFormula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: FolFormula) -> FolFormula {
        FolFormula::Not(Box::new(f))
    }

    pub fn and(l: FolFormula, r: FolFormula) -> FolFormula {
        FolFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: FolFormula, r: FolFormula) -> FolFormula {
        FolFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: FolFormula, r: FolFormula) -> FolFormula {
        FolFormula::Implies(Box::new(l), Box::new(r))
    }

    pub fn forall(var: impl Into<String>, sort: impl Into<String>, body: FolFormula) -> FolFormula {
        FolFormula::Forall(var.into(), Some(sort.into()), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, sort: impl Into<String>, body: FolFormula) -> FolFormula {
        FolFormula::Exists(var.into(), Some(sort.into()), Box::new(body))
    }

    /// Right fold of a nonempty conjunction list.
    pub fn and_all(mut parts: Vec<FolFormula>) -> FolFormula {
        let last = parts.pop().expect("and_all of an empty list");
        parts.into_iter().rev().fold(last, |acc, f| FolFormula::and(f, acc))
    }

    /// Right fold of a nonempty disjunction list.
    pub fn or_all(mut parts: Vec<FolFormula>) -> FolFormula {
        let last = parts.pop().expect("or_all of an empty list");
        parts.into_iter().rev().fold(last, |acc, f| FolFormula::or(f, acc))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuncRank {
    pub args: Vec<String>,
    pub result: String,
}

/// First-order signature. Unsorted signatures have an empty sort set; rank
/// entries then carry the implicit universe marker and only arity matters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FolSignature {
    pub sorts: IndexSet<String>,
    pub funcs: IndexMap<String, FuncRank>,
    pub preds: IndexMap<String, Vec<String>>,
}

impl FolSignature {
    pub fn used_names(&self) -> IndexSet<String> {
        let mut out: IndexSet<String> = self.sorts.iter().cloned().collect();
        out.extend(self.funcs.keys().cloned());
        out.extend(self.preds.keys().cloned());
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedFormula {
    pub name: String,
    pub formula: FolFormula,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FolTheory {
    pub name: String,
    pub signature: FolSignature,
    pub axioms: Vec<NamedFormula>,
}

/// A proof task through both stages of the encoding: the many-sorted
/// translation (premises plus the frame axioms of the signature encoding)
/// and its relativized unsorted form. The goal carries only the sentence
/// translation, never the signature axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedTask {
    pub sorted: FolTheory,
    pub sorted_goal: Option<NamedFormula>,
    pub unsorted: FolTheory,
    pub unsorted_goal: Option<NamedFormula>,
}

impl std::fmt::Display for FolTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FolTerm::Var(v) => write!(f, "{v}"),
            FolTerm::App(op, args) if args.is_empty() => write!(f, "{op}"),
            FolTerm::App(op, args) => {
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl std::fmt::Display for FolFormula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FolFormula::Eq(l, r) => write!(f, "{l} = {r}"),
            FolFormula::Pred(p, args) if args.is_empty() => write!(f, "{p}"),
            FolFormula::Pred(p, args) => {
                write!(f, "{p}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            FolFormula::Not(x) => write!(f, "not ({x})"),
            FolFormula::And(l, r) => write!(f, "({l} /\\ {r})"),
            FolFormula::Or(l, r) => write!(f, "({l} \\/ {r})"),
            FolFormula::Implies(l, r) => write!(f, "({l} => {r})"),
            FolFormula::Iff(l, r) => write!(f, "({l} <=> {r})"),
            FolFormula::Forall(v, Some(s), b) => write!(f, "forall {v} : {s} . ({b})"),
            FolFormula::Forall(v, None, b) => write!(f, "forall {v} . ({b})"),
            FolFormula::Exists(v, Some(s), b) => write!(f, "exists {v} : {s} . ({b})"),
            FolFormula::Exists(v, None, b) => write!(f, "exists {v} . ({b})"),
        }
    }
}

impl std::fmt::Display for FolTheory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "theory {}", self.name)?;
        if !self.signature.sorts.is_empty() {
            writeln!(
                f,
                "sorts: {}",
                self.signature.sorts.iter().cloned().collect::<Vec<_>>().join(", ")
            )?;
        }
        for (name, rank) in &self.signature.funcs {
            if rank.args.is_empty() {
                writeln!(f, "func {name} : {}", rank.result)?;
            } else {
                writeln!(f, "func {name} : {} -> {}", rank.args.join(" * "), rank.result)?;
            }
        }
        for (name, args) in &self.signature.preds {
            if args.is_empty() {
                writeln!(f, "pred {name}")?;
            } else {
                writeln!(f, "pred {name} : {}", args.join(" * "))?;
            }
        }
        for ax in &self.axioms {
            writeln!(f, "axiom {}: {}", ax.name, ax.formula)?;
        }
        Ok(())
    }
}
