//! The standard translation with explicit worlds.
//!
//! Signatures map to many-sorted first-order theories: a `World` sort,
//! nominal constants, one relation symbol per modality, and the base symbols
//! with a leading `World` argument added to every flexible one. Rigid
//! symbols keep their rank unchanged - sharing across worlds is definitional
//! in the encoding, not axiomatized. Sentences translate by structural
//! recursion on a world term.

use super::{FolFormula, FolSignature, FolTerm, FolTheory, FuncRank, NamedFormula, WORLD_SORT};
use crate::base::{BaseSentence, BaseSignature, Rigidity, Term};
use crate::hybrid::{HybridSentence, HybridSignature, HybridTheory};
use crate::kripke::{ConstraintSet, FrameProperty};
use indexmap::{IndexMap, IndexSet};

/// How source symbols were named in the target signature. Allocation is
/// collision-avoiding and deterministic in signature order, so two
/// encodings of the same signature agree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EncodeNames {
    pub nominals: IndexMap<String, String>,
    pub modalities: IndexMap<String, String>,
    pub sorts: IndexMap<String, String>,
    pub ops: IndexMap<String, String>,
    pub rels: IndexMap<String, String>,
    pub atoms: IndexMap<String, String>,
}

/// The signature part of the theoroidal comorphism: target signature, frame
/// axioms, and the name bookkeeping the sentence translation needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureEncoding {
    pub theory: FolTheory,
    pub names: EncodeNames,
}

struct NameAlloc {
    used: IndexSet<String>,
}

impl NameAlloc {
    fn new() -> NameAlloc {
        NameAlloc { used: IndexSet::new() }
    }

    fn alloc(&mut self, candidate: &str) -> String {
        if self.used.insert(candidate.to_string()) {
            return candidate.to_string();
        }
        let mut n = 2usize;
        loop {
            let name = format!("{candidate}_{n}");
            if self.used.insert(name.clone()) {
                return name;
            }
            n += 1;
        }
    }
}

impl SignatureEncoding {
    pub fn new(sig: &HybridSignature, cs: &ConstraintSet) -> SignatureEncoding {
        let mut alloc = NameAlloc::new();
        let mut names = EncodeNames::default();
        let mut fol = FolSignature::default();

        let world = alloc.alloc(WORLD_SORT);
        fol.sorts.insert(world.clone());

        if let BaseSignature::Rfol(r) = &sig.base {
            for sort in r.sorts.keys() {
                let n = alloc.alloc(sort);
                fol.sorts.insert(n.clone());
                names.sorts.insert(sort.clone(), n);
            }
        }
        for nominal in &sig.nominals {
            let n = alloc.alloc(nominal);
            fol.funcs.insert(
                n.clone(),
                FuncRank { args: Vec::new(), result: world.clone() },
            );
            names.nominals.insert(nominal.clone(), n);
        }
        for (modality, arity) in &sig.modalities {
            let n = alloc.alloc(&format!("R_{modality}"));
            fol.preds.insert(n.clone(), vec![world.clone(); *arity]);
            names.modalities.insert(modality.clone(), n);
        }
        match &sig.base {
            BaseSignature::Prop(p) => {
                for atom in &p.atoms {
                    let n = alloc.alloc(atom);
                    fol.preds.insert(n.clone(), vec![world.clone()]);
                    names.atoms.insert(atom.clone(), n);
                }
            }
            BaseSignature::Rfol(r) => {
                for (op, decl) in &r.ops {
                    let n = alloc.alloc(op);
                    let mut args: Vec<String> = Vec::new();
                    if !decl.rigidity.is_rigid() {
                        args.push(world.clone());
                    }
                    args.extend(decl.args.iter().map(|s| names.sorts[s].clone()));
                    fol.funcs.insert(
                        n.clone(),
                        FuncRank { args, result: names.sorts[&decl.result].clone() },
                    );
                    names.ops.insert(op.clone(), n);
                }
                for (rel, decl) in &r.rels {
                    let n = alloc.alloc(rel);
                    let mut args: Vec<String> = Vec::new();
                    if !decl.rigidity.is_rigid() {
                        args.push(world.clone());
                    }
                    args.extend(decl.args.iter().map(|s| names.sorts[s].clone()));
                    fol.preds.insert(n.clone(), args);
                    names.rels.insert(rel.clone(), n);
                }
            }
        }

        let axioms = frame_axioms(&names, cs, &world);
        SignatureEncoding {
            theory: FolTheory {
                name: String::new(),
                signature: fol,
                axioms,
            },
            names,
        }
    }

    fn nominal_constant(&self, name: &str) -> FolTerm {
        FolTerm::constant(self.names.nominals[name].clone())
    }
}

fn frame_axioms(names: &EncodeNames, cs: &ConstraintSet, world: &str) -> Vec<NamedFormula> {
    let mut out = Vec::new();
    for (modality, props) in &cs.frame {
        let r = match names.modalities.get(modality) {
            Some(r) => r.clone(),
            None => continue,
        };
        let rel = |args: Vec<&str>| {
            FolFormula::Pred(r.clone(), args.into_iter().map(FolTerm::var).collect())
        };
        for prop in props {
            let formula = match prop {
                FrameProperty::Reflexive => {
                    FolFormula::forall("w", world, rel(vec!["w", "w"]))
                }
                FrameProperty::Symmetric => FolFormula::forall(
                    "w",
                    world,
                    FolFormula::forall(
                        "v",
                        world,
                        FolFormula::implies(rel(vec!["w", "v"]), rel(vec!["v", "w"])),
                    ),
                ),
                FrameProperty::Transitive => FolFormula::forall(
                    "w",
                    world,
                    FolFormula::forall(
                        "v",
                        world,
                        FolFormula::forall(
                            "u",
                            world,
                            FolFormula::implies(
                                FolFormula::and(rel(vec!["w", "v"]), rel(vec!["v", "u"])),
                                rel(vec!["w", "u"]),
                            ),
                        ),
                    ),
                ),
                FrameProperty::Serial => FolFormula::forall(
                    "w",
                    world,
                    FolFormula::exists("v", world, rel(vec!["w", "v"])),
                ),
            };
            out.push(NamedFormula {
                name: format!("frame_{modality}_{}", prop.name()),
                formula,
            });
        }
    }
    out
}

/// The signature functor of the comorphism: target theory with frame
/// axioms. Rigidity produces no axioms; it is realized by the absence of
/// the `World` argument.
pub fn encode_signature(sig: &HybridSignature, cs: &ConstraintSet) -> FolTheory {
    SignatureEncoding::new(sig, cs).theory
}

struct SentenceEncoder<'a> {
    enc: &'a SignatureEncoding,
    sig: &'a HybridSignature,
    /// Nominal binders in scope; they translate to World variables.
    bound_noms: IndexSet<String>,
    fresh_counter: usize,
}

impl SentenceEncoder<'_> {
    fn fresh_world_var(&mut self) -> String {
        // `%` cannot occur in user identifiers, so these never capture.
        let v = format!("w%{}", self.fresh_counter);
        self.fresh_counter += 1;
        v
    }

    fn world_term_of(&self, nominal: &str) -> FolTerm {
        if self.bound_noms.contains(nominal) {
            FolTerm::var(nominal)
        } else {
            self.enc.nominal_constant(nominal)
        }
    }

    fn term(&self, t: &Term, world: &FolTerm) -> FolTerm {
        match t {
            Term::Var(v) => FolTerm::var(v.clone()),
            Term::App(op, args) => {
                let rigid = match &self.sig.base {
                    BaseSignature::Rfol(r) => r.ops[op].rigidity == Rigidity::Rigid,
                    BaseSignature::Prop(_) => true,
                };
                let mut out: Vec<FolTerm> = Vec::with_capacity(args.len() + 1);
                if !rigid {
                    out.push(world.clone());
                }
                out.extend(args.iter().map(|a| self.term(a, world)));
                FolTerm::App(self.enc.names.ops[op].clone(), out)
            }
        }
    }

    fn base_atom(&self, b: &BaseSentence, world: &FolTerm) -> FolFormula {
        match b {
            BaseSentence::PropAtom(a) => {
                FolFormula::Pred(self.enc.names.atoms[a].clone(), vec![world.clone()])
            }
            BaseSentence::Equation(l, r) => {
                FolFormula::Eq(self.term(l, world), self.term(r, world))
            }
            BaseSentence::RelAtom(rel, args) => {
                let rigid = match &self.sig.base {
                    BaseSignature::Rfol(r) => r.rels[rel].rigidity == Rigidity::Rigid,
                    BaseSignature::Prop(_) => true,
                };
                let mut out: Vec<FolTerm> = Vec::with_capacity(args.len() + 1);
                if !rigid {
                    out.push(world.clone());
                }
                out.extend(args.iter().map(|a| self.term(a, world)));
                FolFormula::Pred(self.enc.names.rels[rel].clone(), out)
            }
        }
    }

    fn st(&mut self, s: &HybridSentence, world: &FolTerm) -> FolFormula {
        match s {
            HybridSentence::Base(b) => self.base_atom(b, world),
            HybridSentence::Nominal(i) => {
                FolFormula::Eq(world.clone(), self.world_term_of(i))
            }
            HybridSentence::Not(x) => FolFormula::not(self.st(x, world)),
            HybridSentence::And(l, r) => {
                FolFormula::and(self.st(l, world), self.st(r, world))
            }
            HybridSentence::Or(l, r) => {
                FolFormula::or(self.st(l, world), self.st(r, world))
            }
            HybridSentence::Implies(l, r) => {
                FolFormula::implies(self.st(l, world), self.st(r, world))
            }
            HybridSentence::Box { modality, args } => {
                let vars: Vec<String> = args.iter().map(|_| self.fresh_world_var()).collect();
                let mut rel_args = vec![world.clone()];
                rel_args.extend(vars.iter().map(|v| FolTerm::var(v.clone())));
                let rel = FolFormula::Pred(self.enc.names.modalities[modality].clone(), rel_args);
                let parts: Vec<FolFormula> = args
                    .iter()
                    .zip(&vars)
                    .map(|(a, v)| self.st(a, &FolTerm::var(v.clone())))
                    .collect();
                let mut body = FolFormula::implies(rel, FolFormula::or_all(parts));
                for v in vars.into_iter().rev() {
                    body = FolFormula::forall(v, WORLD_SORT, body);
                }
                body
            }
            HybridSentence::Diamond { modality, args } => {
                let vars: Vec<String> = args.iter().map(|_| self.fresh_world_var()).collect();
                let mut rel_args = vec![world.clone()];
                rel_args.extend(vars.iter().map(|v| FolTerm::var(v.clone())));
                let rel = FolFormula::Pred(self.enc.names.modalities[modality].clone(), rel_args);
                let parts: Vec<FolFormula> = args
                    .iter()
                    .zip(&vars)
                    .map(|(a, v)| self.st(a, &FolTerm::var(v.clone())))
                    .collect();
                let mut body = FolFormula::and(rel, FolFormula::and_all(parts));
                for v in vars.into_iter().rev() {
                    body = FolFormula::exists(v, WORLD_SORT, body);
                }
                body
            }
            HybridSentence::At { nominal, body } => {
                let target = self.world_term_of(nominal);
                self.st(body, &target)
            }
            HybridSentence::ForallNom { binder, body } => {
                self.bound_noms.insert(binder.clone());
                let inner = self.st(body, world);
                self.bound_noms.shift_remove(binder);
                FolFormula::forall(binder.clone(), WORLD_SORT, inner)
            }
            HybridSentence::ExistsNom { binder, body } => {
                self.bound_noms.insert(binder.clone());
                let inner = self.st(body, world);
                self.bound_noms.shift_remove(binder);
                FolFormula::exists(binder.clone(), WORLD_SORT, inner)
            }
            HybridSentence::ForallRigid { var, sort, body } => {
                let inner = self.st(body, world);
                FolFormula::forall(var.clone(), self.enc.names.sorts[sort].clone(), inner)
            }
            HybridSentence::ExistsRigid { var, sort, body } => {
                let inner = self.st(body, world);
                FolFormula::exists(var.clone(), self.enc.names.sorts[sort].clone(), inner)
            }
        }
    }
}

/// Standard translation of a sentence at the given world term.
pub fn encode_sentence(
    enc: &SignatureEncoding,
    sig: &HybridSignature,
    s: &HybridSentence,
    world: &FolTerm,
) -> FolFormula {
    let mut encoder = SentenceEncoder {
        enc,
        sig,
        bound_noms: IndexSet::new(),
        fresh_counter: 0,
    };
    encoder.st(s, world)
}

/// Global satisfaction of a closed sentence: quantify the world parameter.
pub fn encode_global(
    enc: &SignatureEncoding,
    sig: &HybridSignature,
    s: &HybridSentence,
) -> FolFormula {
    let mut encoder = SentenceEncoder {
        enc,
        sig,
        bound_noms: IndexSet::new(),
        fresh_counter: 0,
    };
    let w = encoder.fresh_world_var();
    let body = encoder.st(s, &FolTerm::var(w.clone()));
    FolFormula::forall(w, WORLD_SORT, body)
}

/// Encodes a whole proof task: theory axioms (globally), frame axioms, the
/// optional goal, and the relativized unsorted forms of everything.
pub fn encode_task(
    theory: &HybridTheory,
    cs: &ConstraintSet,
    goal: Option<&HybridSentence>,
) -> super::EncodedTask {
    let enc = SignatureEncoding::new(&theory.signature, cs);
    let mut axioms: Vec<NamedFormula> = theory
        .axioms
        .iter()
        .enumerate()
        .map(|(i, ax)| NamedFormula {
            name: format!("ax_{i}"),
            formula: encode_global(&enc, &theory.signature, ax),
        })
        .collect();
    axioms.extend(enc.theory.axioms.iter().cloned());
    let sorted = FolTheory {
        name: theory.name.clone(),
        signature: enc.theory.signature.clone(),
        axioms,
    };
    let sorted_goal = goal.map(|g| NamedFormula {
        name: "goal".into(),
        formula: encode_global(&enc, &theory.signature, g),
    });
    let (unsorted, sort_preds) = super::unsort(&sorted);
    let unsorted_goal = sorted_goal.as_ref().map(|g| NamedFormula {
        name: g.name.clone(),
        formula: super::unsort_formula(&g.formula, &sort_preds),
    });
    super::EncodedTask {
        sorted,
        sorted_goal,
        unsorted,
        unsorted_goal,
    }
}
