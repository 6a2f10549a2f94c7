//! Pretty-printing with the round-trip guarantee: `parse(print(x))` is
//! structurally equal to `x`. Sentences are printed with minimal
//! parenthesization against the parser's precedence table; `@` is always
//! printed in its colonless prefix form and quantifier bodies extend
//! maximally, so no extent ambiguity survives printing.

use super::spec::{BaseBlock, HybridBlock, SpecBlock, SpecFile};
use crate::base::{BaseModel, BaseSentence, BaseSignature, Rigidity, Term};
use crate::hybrid::HybridSentence;
use crate::kripke::KripkeModel;
use std::fmt::Write;

const PREC_BINDER: u8 = 0;
const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_PREFIX: u8 = 4;
const PREC_ATOM: u8 = 5;

fn prec(s: &HybridSentence) -> u8 {
    match s {
        HybridSentence::ForallNom { .. }
        | HybridSentence::ExistsNom { .. }
        | HybridSentence::ForallRigid { .. }
        | HybridSentence::ExistsRigid { .. } => PREC_BINDER,
        HybridSentence::Implies(_, _) => PREC_IMPLIES,
        HybridSentence::Or(_, _) => PREC_OR,
        HybridSentence::And(_, _) => PREC_AND,
        HybridSentence::Not(_)
        | HybridSentence::Box { .. }
        | HybridSentence::Diamond { .. }
        | HybridSentence::At { .. } => PREC_PREFIX,
        HybridSentence::Base(_) | HybridSentence::Nominal(_) => PREC_ATOM,
    }
}

fn term_text(t: &Term) -> String {
    match t {
        Term::Var(v) => v.clone(),
        Term::App(op, args) if args.is_empty() => op.clone(),
        Term::App(op, args) => {
            let inner: Vec<String> = args.iter().map(term_text).collect();
            format!("{op}({})", inner.join(", "))
        }
    }
}

fn base_text(b: &BaseSentence) -> String {
    match b {
        BaseSentence::PropAtom(a) => a.clone(),
        BaseSentence::Equation(l, r) => format!("{} = {}", term_text(l), term_text(r)),
        BaseSentence::RelAtom(r, args) if args.is_empty() => r.clone(),
        BaseSentence::RelAtom(r, args) => {
            let inner: Vec<String> = args.iter().map(term_text).collect();
            format!("{r}({})", inner.join(", "))
        }
    }
}

fn write_sentence(out: &mut String, s: &HybridSentence, min: u8) {
    let own = prec(s);
    let parens = own < min;
    if parens {
        out.push('(');
    }
    match s {
        HybridSentence::Base(b) => out.push_str(&base_text(b)),
        HybridSentence::Nominal(i) => out.push_str(i),
        HybridSentence::Not(x) => {
            out.push_str("not ");
            write_sentence(out, x, PREC_PREFIX);
        }
        HybridSentence::And(l, r) => {
            write_sentence(out, l, PREC_AND);
            out.push_str(" /\\ ");
            write_sentence(out, r, PREC_AND + 1);
        }
        HybridSentence::Or(l, r) => {
            write_sentence(out, l, PREC_OR);
            out.push_str(" \\/ ");
            write_sentence(out, r, PREC_OR + 1);
        }
        HybridSentence::Implies(l, r) => {
            write_sentence(out, l, PREC_IMPLIES + 1);
            out.push_str(" => ");
            write_sentence(out, r, PREC_IMPLIES);
        }
        HybridSentence::Box { modality, args } => {
            let _ = write!(out, "[{modality}]");
            write_modal_args(out, args);
        }
        HybridSentence::Diamond { modality, args } => {
            let _ = write!(out, "<{modality}>");
            write_modal_args(out, args);
        }
        HybridSentence::At { nominal, body } => {
            let _ = write!(out, "@ {nominal} ");
            write_sentence(out, body, PREC_PREFIX);
        }
        HybridSentence::ForallNom { binder, body } => {
            let _ = write!(out, "forallH {binder} : World . ");
            write_sentence(out, body, PREC_BINDER);
        }
        HybridSentence::ExistsNom { binder, body } => {
            let _ = write!(out, "existsH {binder} : World . ");
            write_sentence(out, body, PREC_BINDER);
        }
        HybridSentence::ForallRigid { var, sort, body } => {
            let _ = write!(out, "forall {var} : {sort} . ");
            write_sentence(out, body, PREC_BINDER);
        }
        HybridSentence::ExistsRigid { var, sort, body } => {
            let _ = write!(out, "exists {var} : {sort} . ");
            write_sentence(out, body, PREC_BINDER);
        }
    }
    if parens {
        out.push(')');
    }
}

fn write_modal_args(out: &mut String, args: &[HybridSentence]) {
    if args.len() == 1 {
        out.push(' ');
        write_sentence(out, &args[0], PREC_PREFIX);
    } else {
        out.push('(');
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            write_sentence(out, a, PREC_BINDER);
        }
        out.push(')');
    }
}

/// Stable text for one sentence, reparseable to the same AST.
pub fn print_sentence(s: &HybridSentence) -> String {
    let mut out = String::new();
    write_sentence(&mut out, s, PREC_BINDER);
    out
}

fn write_base_signature(out: &mut String, sig: &BaseSignature) {
    match sig {
        BaseSignature::Prop(p) => {
            if !p.atoms.is_empty() {
                let names: Vec<&str> = p.atoms.iter().map(|s| s.as_str()).collect();
                let _ = writeln!(out, "  atoms {}", names.join(", "));
            }
        }
        BaseSignature::Rfol(r) => {
            for (sort, rig) in &r.sorts {
                let _ = writeln!(out, "  {}sort {sort}", rigid_prefix(*rig));
            }
            for (op, decl) in &r.ops {
                if decl.args.is_empty() {
                    let _ = writeln!(out, "  {}op {op} : {}", rigid_prefix(decl.rigidity), decl.result);
                } else {
                    let _ = writeln!(
                        out,
                        "  {}op {op} : {} -> {}",
                        rigid_prefix(decl.rigidity),
                        decl.args.join(" * "),
                        decl.result
                    );
                }
            }
            for (rel, decl) in &r.rels {
                let _ = writeln!(
                    out,
                    "  {}rel {rel} : {}",
                    rigid_prefix(decl.rigidity),
                    decl.args.join(" * ")
                );
            }
        }
    }
}

fn rigid_prefix(r: Rigidity) -> &'static str {
    if r.is_rigid() {
        "rigid "
    } else {
        ""
    }
}

fn write_base_block(out: &mut String, block: &BaseBlock) {
    let _ = writeln!(out, "spec {} =", block.name);
    let _ = writeln!(out, "  logic : {}", block.tag.spelling());
    write_base_signature(out, &block.signature);
    let _ = writeln!(out, "end");
}

fn write_hybrid_block(out: &mut String, block: &HybridBlock) {
    let _ = writeln!(out, "spec {} =", block.name);
    let _ = writeln!(out, "  hlogic : {}", block.tag.spelling());
    for import in &block.imports {
        let _ = writeln!(out, "  data {import}");
    }
    let _ = writeln!(out, "  {{");
    let sig = &block.theory.signature;
    if !sig.nominals.is_empty() {
        let names: Vec<&str> = sig.nominals.iter().map(|s| s.as_str()).collect();
        let _ = writeln!(out, "  nominals {}", names.join(", "));
    }
    for (modality, arity) in &sig.modalities {
        let _ = writeln!(out, "  modality {modality} : {arity}");
    }
    for (modality, props) in &block.constraints.frame {
        let names: Vec<&str> = props.iter().map(|p| p.name()).collect();
        let _ = writeln!(out, "  constraint {modality} : {}", names.join(", "));
    }
    for axiom in &block.theory.axioms {
        let _ = writeln!(out, "  . {}", print_sentence(axiom));
    }
    let _ = writeln!(out, "  }}");
    let _ = writeln!(out, "end");
}

/// Deterministic text for a whole file; `parse_spec(print_spec(x)) == x`.
pub fn print_spec(spec: &SpecFile) -> String {
    let mut out = String::new();
    for (i, block) in spec.blocks.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match block {
            SpecBlock::Base(b) => write_base_block(&mut out, b),
            SpecBlock::Hybrid(h) => write_hybrid_block(&mut out, h),
        }
    }
    out
}

fn tuple_text(worlds: &[String], tuple: &[usize]) -> String {
    let names: Vec<&str> = tuple.iter().map(|w| worlds[*w].as_str()).collect();
    format!("({})", names.join(", "))
}

fn op_table_text(table: &crate::base::OpTable) -> String {
    let entries: Vec<String> = table
        .iter()
        .map(|(args, res)| match args.len() {
            0 => res.to_string(),
            1 => format!("{} -> {res}", args[0]),
            _ => {
                let inner: Vec<String> = args.iter().map(|e| e.to_string()).collect();
                format!("({}) -> {res}", inner.join(", "))
            }
        })
        .collect();
    entries.join(", ")
}

fn rel_table_text(table: &std::collections::BTreeSet<Vec<crate::base::Element>>) -> String {
    let entries: Vec<String> = table
        .iter()
        .map(|tuple| {
            let inner: Vec<String> = tuple.iter().map(|e| e.to_string()).collect();
            format!("({})", inner.join(", "))
        })
        .collect();
    entries.join(", ")
}

/// Renders a Kripke model in the `.hmodel` grammar. Rigid tables are
/// written once at the top, flexible content per world.
pub fn print_model(name: &str, model: &KripkeModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "model {name}");
    let _ = writeln!(out, "worlds {}", model.worlds.join(", "));
    for (modality, tuples) in &model.relations {
        let entries: Vec<String> = tuples
            .iter()
            .map(|t| tuple_text(&model.worlds, t))
            .collect();
        if entries.is_empty() {
            let _ = writeln!(out, "relation {modality} = {{ }}");
        } else {
            let _ = writeln!(out, "relation {modality} = {{ {} }}", entries.join(", "));
        }
    }
    for (nominal, world) in &model.nominal_at {
        let _ = writeln!(out, "nominal {nominal} = {}", model.worlds[*world]);
    }
    match &model.signature.base {
        BaseSignature::Prop(p) => {
            for (w, local) in model.local.iter().enumerate() {
                let _ = writeln!(out, "world {} {{", model.worlds[w]);
                if let BaseModel::Prop(m) = local {
                    for atom in &p.atoms {
                        let value = m.valuation.get(atom).copied().unwrap_or(false);
                        let _ = writeln!(out, "  atom {atom} = {value}");
                    }
                }
                let _ = writeln!(out, "}}");
            }
        }
        BaseSignature::Rfol(r) => {
            let first = model.local[0].as_rfol();
            for (sort, rig) in &r.sorts {
                if rig.is_rigid() {
                    if let Some(m) = first {
                        let elems: Vec<String> =
                            m.carriers[sort].iter().map(|e| e.to_string()).collect();
                        let _ = writeln!(out, "carrier {sort} = {{ {} }}", elems.join(", "));
                    }
                }
            }
            for (op, decl) in &r.ops {
                if decl.rigidity.is_rigid() {
                    if let Some(m) = first {
                        if decl.args.is_empty() {
                            let _ = writeln!(out, "op {op} = {}", m.ops[op][&Vec::new()]);
                        } else {
                            let _ = writeln!(out, "op {op} = {{ {} }}", op_table_text(&m.ops[op]));
                        }
                    }
                }
            }
            for (rel, decl) in &r.rels {
                if decl.rigidity.is_rigid() {
                    if let Some(m) = first {
                        let body = rel_table_text(&m.rels[rel]);
                        if body.is_empty() {
                            let _ = writeln!(out, "rel {rel} = {{ }}");
                        } else {
                            let _ = writeln!(out, "rel {rel} = {{ {body} }}");
                        }
                    }
                }
            }
            for (w, local) in model.local.iter().enumerate() {
                let _ = writeln!(out, "world {} {{", model.worlds[w]);
                if let BaseModel::Rfol(m) = local {
                    for (sort, rig) in &r.sorts {
                        if !rig.is_rigid() {
                            let elems: Vec<String> =
                                m.carriers[sort].iter().map(|e| e.to_string()).collect();
                            let _ = writeln!(out, "  carrier {sort} = {{ {} }}", elems.join(", "));
                        }
                    }
                    for (op, decl) in &r.ops {
                        if !decl.rigidity.is_rigid() {
                            if decl.args.is_empty() {
                                let _ = writeln!(out, "  op {op} = {}", m.ops[op][&Vec::new()]);
                            } else {
                                let _ =
                                    writeln!(out, "  op {op} = {{ {} }}", op_table_text(&m.ops[op]));
                            }
                        }
                    }
                    for (rel, decl) in &r.rels {
                        if !decl.rigidity.is_rigid() {
                            let body = rel_table_text(&m.rels[rel]);
                            if body.is_empty() {
                                let _ = writeln!(out, "  rel {rel} = {{ }}");
                            } else {
                                let _ = writeln!(out, "  rel {rel} = {{ {body} }}");
                            }
                        }
                    }
                }
                let _ = writeln!(out, "}}");
            }
        }
    }
    out
}
