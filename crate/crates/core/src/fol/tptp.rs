//! TPTP FOF emission.
//!
//! Axioms are emitted as `fof(ax_<n>, axiom, ...)` in theory order, the goal
//! as `fof(goal, conjecture, ...)`. Symbols are renamed to TPTP lexical form
//! (lower_word functors and predicates, upper_word variables) with
//! deterministic collision suffixes.

use super::{EncodedTask, FolFormula, FolTerm};
use indexmap::{IndexMap, IndexSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TptpError {
    #[error("identifier `{0}` cannot be sanitized to TPTP lexical form")]
    UnsanitizableIdentifier(String),
}

struct Sanitizer {
    map: IndexMap<String, String>,
    used: IndexSet<String>,
}

impl Sanitizer {
    fn new() -> Sanitizer {
        Sanitizer {
            map: IndexMap::new(),
            used: IndexSet::new(),
        }
    }

    fn candidate(name: &str, upper: bool) -> Result<String, TptpError> {
        let cleaned: String = name
            .chars()
            .filter(|c| c.is_ascii_alphanumeric() || *c == '_')
            .collect();
        if cleaned.is_empty() {
            return Err(TptpError::UnsanitizableIdentifier(name.to_string()));
        }
        let mut out = String::with_capacity(cleaned.len() + 1);
        let first = cleaned.chars().next().unwrap();
        if upper {
            if first.is_ascii_uppercase() {
                out.push_str(&cleaned);
            } else if first.is_ascii_lowercase() {
                out.push(first.to_ascii_uppercase());
                out.push_str(&cleaned[1..]);
            } else {
                out.push('V');
                out.push_str(&cleaned);
            }
        } else if first.is_ascii_lowercase() {
            out.push_str(&cleaned);
        } else if first.is_ascii_uppercase() {
            out.push(first.to_ascii_lowercase());
            out.push_str(&cleaned[1..]);
        } else {
            out.push('n');
            out.push_str(&cleaned);
        }
        Ok(out)
    }

    fn get(&mut self, name: &str, upper: bool) -> Result<&str, TptpError> {
        if !self.map.contains_key(name) {
            let base = Self::candidate(name, upper)?;
            let mut chosen = base.clone();
            let mut n = 2usize;
            while !self.used.insert(chosen.clone()) {
                chosen = format!("{base}_{n}");
                n += 1;
            }
            self.map.insert(name.to_string(), chosen);
        }
        Ok(self.map.get(name).unwrap())
    }
}

struct Emitter {
    symbols: Sanitizer,
    vars: Sanitizer,
}

impl Emitter {
    fn term(&mut self, t: &FolTerm, out: &mut String) -> Result<(), TptpError> {
        match t {
            FolTerm::Var(v) => out.push_str(self.vars.get(v, true)?),
            FolTerm::App(f, args) => {
                out.push_str(self.symbols.get(f, false)?);
                if !args.is_empty() {
                    out.push('(');
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        self.term(a, out)?;
                    }
                    out.push(')');
                }
            }
        }
        Ok(())
    }

    fn formula(&mut self, f: &FolFormula, out: &mut String) -> Result<(), TptpError> {
        match f {
            FolFormula::Eq(l, r) => {
                out.push('(');
                self.term(l, out)?;
                out.push_str(" = ");
                self.term(r, out)?;
                out.push(')');
            }
            FolFormula::Pred(p, args) => {
                out.push_str(self.symbols.get(p, false)?);
                if !args.is_empty() {
                    out.push('(');
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        self.term(a, out)?;
                    }
                    out.push(')');
                }
            }
            FolFormula::Not(x) => {
                out.push_str("~(");
                self.formula(x, out)?;
                out.push(')');
            }
            FolFormula::And(l, r) => self.binary(l, "&", r, out)?,
            FolFormula::Or(l, r) => self.binary(l, "|", r, out)?,
            FolFormula::Implies(l, r) => self.binary(l, "=>", r, out)?,
            FolFormula::Iff(l, r) => self.binary(l, "<=>", r, out)?,
            FolFormula::Forall(v, _, b) => {
                out.push_str("! [");
                out.push_str(self.vars.get(v, true)?);
                out.push_str("] : (");
                self.formula(b, out)?;
                out.push(')');
            }
            FolFormula::Exists(v, _, b) => {
                out.push_str("? [");
                out.push_str(self.vars.get(v, true)?);
                out.push_str("] : (");
                self.formula(b, out)?;
                out.push(')');
            }
        }
        Ok(())
    }

    fn binary(
        &mut self,
        l: &FolFormula,
        op: &str,
        r: &FolFormula,
        out: &mut String,
    ) -> Result<(), TptpError> {
        out.push('(');
        self.formula(l, out)?;
        out.push(' ');
        out.push_str(op);
        out.push(' ');
        self.formula(r, out)?;
        out.push(')');
        Ok(())
    }
}

/// Renders the unsorted side of a task as a TPTP FOF problem. Axioms are
/// renamed `ax_0..ax_k` in order; the conjecture is named `goal`.
pub fn emit_tptp(task: &EncodedTask) -> Result<String, TptpError> {
    let mut emitter = Emitter {
        symbols: Sanitizer::new(),
        vars: Sanitizer::new(),
    };
    let mut out = String::new();
    for (i, ax) in task.unsorted.axioms.iter().enumerate() {
        let mut body = String::new();
        emitter.formula(&ax.formula, &mut body)?;
        out.push_str(&format!("fof(ax_{i}, axiom, {body}).\n"));
    }
    if let Some(goal) = &task.unsorted_goal {
        let mut body = String::new();
        emitter.formula(&goal.formula, &mut body)?;
        out.push_str(&format!("fof(goal, conjecture, {body}).\n"));
    }
    Ok(out)
}
