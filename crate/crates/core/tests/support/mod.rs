//! Shared generators for the property and acceptance suites: random PROP
//! Kripke models, closed hybrid sentences, signature morphisms, and whole
//! specification files. Everything is driven by a seeded RNG so runs are
//! reproducible.

#![allow(dead_code)]

use hyloc_core::base::{
    BaseModel, BaseMorphism, BaseSentence, BaseSignature, PropModel, PropSignature, SymbolMap,
};
use hyloc_core::hybrid::{HybridMorphism, HybridSentence, HybridSignature};
use hyloc_core::kripke::KripkeModel;
use indexmap::{IndexMap, IndexSet};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use std::collections::BTreeSet;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn workspace_file(rel: &str) -> String {
    let path = format!("{}/../../{}", env!("CARGO_MANIFEST_DIR"), rel);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("cannot read {path}: {e}"))
}

/// A PROP hybrid signature with `n_atoms` atoms, `n_nominals` nominals and
/// the given modality arities.
pub fn prop_signature(n_atoms: usize, n_nominals: usize, arities: &[usize]) -> HybridSignature {
    let atoms: IndexSet<String> = (0..n_atoms).map(|i| format!("p{i}")).collect();
    let mut sig = HybridSignature::new(BaseSignature::Prop(PropSignature { atoms }));
    for i in 0..n_nominals {
        sig.nominals.insert(format!("nom{i}"));
    }
    for (i, arity) in arities.iter().enumerate() {
        sig.modalities.insert(format!("lam{i}"), *arity);
    }
    sig.validate().expect("generated signature is valid");
    sig
}

/// A random PROP Kripke model over `sig` with up to `max_worlds` worlds.
pub fn random_prop_model(rng: &mut StdRng, sig: &HybridSignature, max_worlds: usize) -> KripkeModel {
    let n_worlds = rng.gen_range(1..=max_worlds);
    let atoms = sig.base.as_prop().expect("PROP base").atoms.clone();
    let worlds: Vec<String> = (0..n_worlds).map(|i| format!("w{i}")).collect();
    let mut relations = IndexMap::new();
    for (modality, arity) in &sig.modalities {
        let mut tuples = BTreeSet::new();
        let mut all = vec![vec![]];
        for _ in 0..*arity {
            let mut next = Vec::new();
            for t in &all {
                for w in 0..n_worlds {
                    let mut t2: Vec<usize> = t.clone();
                    t2.push(w);
                    next.push(t2);
                }
            }
            all = next;
        }
        for t in all {
            if rng.gen_bool(0.3) {
                tuples.insert(t);
            }
        }
        relations.insert(modality.clone(), tuples);
    }
    let nominal_at: IndexMap<String, usize> = sig
        .nominals
        .iter()
        .map(|n| (n.clone(), rng.gen_range(0..n_worlds)))
        .collect();
    let local: Vec<BaseModel> = (0..n_worlds)
        .map(|_| {
            BaseModel::Prop(PropModel {
                valuation: atoms.iter().map(|a| (a.clone(), rng.gen_bool(0.5))).collect(),
            })
        })
        .collect();
    let model = KripkeModel {
        signature: sig.clone(),
        worlds,
        relations,
        nominal_at,
        local,
    };
    model.validate().expect("generated model is valid");
    model
}

/// A random closed sentence over a PROP signature, depth-bounded, using
/// atoms, nominals, Booleans, Box/Diamond, `@` and nominal quantifiers.
pub fn random_prop_sentence(rng: &mut StdRng, sig: &HybridSignature, depth: usize) -> HybridSentence {
    let mut bound = Vec::new();
    let mut counter = 0usize;
    gen_sentence(rng, sig, depth, &mut bound, &mut counter)
}

fn gen_sentence(
    rng: &mut StdRng,
    sig: &HybridSignature,
    depth: usize,
    bound: &mut Vec<String>,
    counter: &mut usize,
) -> HybridSentence {
    let atoms = &sig.base.as_prop().expect("PROP base").atoms;
    let leaf = depth == 0 || rng.gen_bool(0.25);
    if leaf {
        let pick_nominal = !sig.nominals.is_empty() || !bound.is_empty();
        if pick_nominal && rng.gen_bool(0.4) {
            let name = pick_name(rng, sig, bound);
            return HybridSentence::Nominal(name);
        }
        if atoms.is_empty() {
            let name = pick_name(rng, sig, bound);
            return HybridSentence::Nominal(name);
        }
        let atom = atoms
            .get_index(rng.gen_range(0..atoms.len()))
            .unwrap()
            .clone();
        return HybridSentence::Base(BaseSentence::PropAtom(atom));
    }
    match rng.gen_range(0..8) {
        0 => HybridSentence::not(gen_sentence(rng, sig, depth - 1, bound, counter)),
        1 => HybridSentence::and(
            gen_sentence(rng, sig, depth - 1, bound, counter),
            gen_sentence(rng, sig, depth - 1, bound, counter),
        ),
        2 => HybridSentence::or(
            gen_sentence(rng, sig, depth - 1, bound, counter),
            gen_sentence(rng, sig, depth - 1, bound, counter),
        ),
        3 => HybridSentence::implies(
            gen_sentence(rng, sig, depth - 1, bound, counter),
            gen_sentence(rng, sig, depth - 1, bound, counter),
        ),
        4 if !sig.modalities.is_empty() => {
            let idx = rng.gen_range(0..sig.modalities.len());
            let (modality, arity) = sig.modalities.get_index(idx).unwrap();
            let args: Vec<HybridSentence> = (0..arity - 1)
                .map(|_| gen_sentence(rng, sig, depth - 1, bound, counter))
                .collect();
            if rng.gen_bool(0.5) {
                HybridSentence::Box {
                    modality: modality.clone(),
                    args,
                }
            } else {
                HybridSentence::Diamond {
                    modality: modality.clone(),
                    args,
                }
            }
        }
        5 if !sig.nominals.is_empty() || !bound.is_empty() => {
            let name = pick_name(rng, sig, bound);
            HybridSentence::at(name, gen_sentence(rng, sig, depth - 1, bound, counter))
        }
        6 => {
            let binder = format!("k{}", *counter);
            *counter += 1;
            bound.push(binder.clone());
            let body = gen_sentence(rng, sig, depth - 1, bound, counter);
            bound.pop();
            if rng.gen_bool(0.5) {
                HybridSentence::forall_nom(binder, body)
            } else {
                HybridSentence::exists_nom(binder, body)
            }
        }
        _ => gen_sentence(rng, sig, depth - 1, bound, counter),
    }
}

fn pick_name(rng: &mut StdRng, sig: &HybridSignature, bound: &[String]) -> String {
    let mut candidates: Vec<String> = sig.nominals.iter().cloned().collect();
    candidates.extend(bound.iter().cloned());
    candidates.choose(rng).expect("a nominal exists").clone()
}

/// A random injective atom renaming from a PROP source signature into a
/// fresh target (possibly with extension atoms), plus a random target model.
pub struct PropRenamingCase {
    pub morphism: BaseMorphism,
    pub target_model: BaseModel,
}

pub fn random_prop_renaming(rng: &mut StdRng, n_atoms: usize) -> PropRenamingCase {
    let source_atoms: IndexSet<String> = (0..n_atoms).map(|i| format!("p{i}")).collect();
    let mut target_names: Vec<String> = (0..n_atoms).map(|i| format!("q{i}")).collect();
    target_names.shuffle(rng);
    let n_extra = rng.gen_range(0..=2);
    let extensions: Vec<String> = (0..n_extra).map(|i| format!("extra{i}")).collect();
    let mut target_atoms: IndexSet<String> = target_names.iter().cloned().collect();
    target_atoms.extend(extensions.iter().cloned());
    let atoms_map: IndexMap<String, String> = source_atoms
        .iter()
        .cloned()
        .zip(target_names.iter().cloned())
        .collect();
    let morphism = BaseMorphism {
        source: BaseSignature::Prop(PropSignature { atoms: source_atoms }),
        target: BaseSignature::Prop(PropSignature { atoms: target_atoms.clone() }),
        map: SymbolMap::Prop { atoms: atoms_map },
        extensions,
    };
    morphism.validate().expect("generated morphism is valid");
    let target_model = BaseModel::Prop(PropModel {
        valuation: target_atoms
            .iter()
            .map(|a| (a.clone(), rng.gen_bool(0.5)))
            .collect(),
    });
    PropRenamingCase {
        morphism,
        target_model,
    }
}

/// A random hybrid renaming (nominals, modalities, atoms) with a random
/// Kripke model over the target signature and a random closed source
/// sentence.
pub struct HybridRenamingCase {
    pub morphism: HybridMorphism,
    pub target_model: KripkeModel,
    pub sentence: HybridSentence,
}

pub fn random_hybrid_renaming(rng: &mut StdRng, seed_shift: u64) -> HybridRenamingCase {
    let _ = seed_shift;
    let n_atoms = rng.gen_range(1..=3);
    let n_noms = rng.gen_range(1..=2);
    let arity = rng.gen_range(2..=3);
    let source = prop_signature(n_atoms, n_noms, &[arity]);

    let base_case = random_prop_renaming(rng, n_atoms);
    let mut target = HybridSignature::new(base_case.morphism.target.clone());
    let mut nominal_map = IndexMap::new();
    let mut names: Vec<String> = (0..n_noms).map(|i| format!("m{i}")).collect();
    names.shuffle(rng);
    for (src, tgt) in source.nominals.iter().zip(names.iter()) {
        target.nominals.insert(tgt.clone());
        nominal_map.insert(src.clone(), tgt.clone());
    }
    if rng.gen_bool(0.3) {
        target.nominals.insert("fresh_nom".into());
    }
    let mut modality_map = IndexMap::new();
    for (src, a) in &source.modalities {
        let tgt = format!("mu_{src}");
        target.modalities.insert(tgt.clone(), *a);
        modality_map.insert(src.clone(), tgt);
    }
    let morphism = HybridMorphism {
        source: source.clone(),
        target: target.clone(),
        nominal_map,
        modality_map,
        base: base_case.morphism,
    };
    morphism.validate().expect("generated hybrid morphism is valid");
    let target_model = random_prop_model(rng, &target, 4);
    let sentence = random_prop_sentence(rng, &source, 4);
    HybridRenamingCase {
        morphism,
        target_model,
        sentence,
    }
}

/// Reduct of a Kripke model along a hybrid renaming: same worlds, relations
/// and nominal assignment pulled back, base reduct per world.
pub fn reduct_kripke(phi: &HybridMorphism, model: &KripkeModel) -> KripkeModel {
    let relations: IndexMap<String, BTreeSet<Vec<usize>>> = phi
        .source
        .modalities
        .keys()
        .map(|m| {
            let image = &phi.modality_map[m];
            (m.clone(), model.relations[image].clone())
        })
        .collect();
    let nominal_at: IndexMap<String, usize> = phi
        .source
        .nominals
        .iter()
        .map(|n| {
            let image = &phi.nominal_map[n];
            (n.clone(), model.nominal_at[image])
        })
        .collect();
    let local: Vec<BaseModel> = model
        .local
        .iter()
        .map(|m| phi.base.reduct_model(m).expect("base reduct"))
        .collect();
    KripkeModel {
        signature: phi.source.clone(),
        worlds: model.worlds.clone(),
        relations,
        nominal_at,
        local,
    }
}

/// Random specification files for the round-trip suite: a base block plus a
/// hybrid block with random declarations, constraints and closed axioms.
pub mod specgen {
    use super::*;
    use hyloc_core::base::{OpDecl, RelDecl, Rigidity, Term};
    use hyloc_core::hybrid::HybridTheory;
    use hyloc_core::kripke::{ConstraintSet, FrameProperty};
    use hyloc_core::syntax::{BaseBlock, BaseTag, HybridBlock, HybridTag, SpecBlock, SpecFile};

    pub fn random_spec_file(rng: &mut StdRng, index: usize) -> SpecFile {
        if rng.gen_bool(0.5) {
            prop_spec_file(rng, index)
        } else {
            rfol_spec_file(rng, index)
        }
    }

    fn random_constraints(rng: &mut StdRng, sig: &HybridSignature) -> ConstraintSet {
        let mut cs = ConstraintSet::default();
        for (m, arity) in &sig.modalities {
            if *arity == 2 && rng.gen_bool(0.3) {
                let all = [
                    FrameProperty::Reflexive,
                    FrameProperty::Symmetric,
                    FrameProperty::Transitive,
                    FrameProperty::Serial,
                ];
                let chosen: BTreeSet<FrameProperty> = all
                    .iter()
                    .filter(|_| rng.gen_bool(0.4))
                    .copied()
                    .collect();
                if !chosen.is_empty() {
                    cs.frame.insert(m.clone(), chosen);
                }
            }
        }
        cs
    }

    fn prop_spec_file(rng: &mut StdRng, index: usize) -> SpecFile {
        let n_atoms = rng.gen_range(1..=3);
        let n_noms = rng.gen_range(1..=2);
        let arities: Vec<usize> = (0..rng.gen_range(1..=2))
            .map(|_| rng.gen_range(2..=3))
            .collect();
        let sig = prop_signature(n_atoms, n_noms, &arities);
        let axioms: Vec<HybridSentence> = (0..rng.gen_range(0..=4))
            .map(|_| random_prop_sentence(rng, &sig, 4))
            .collect();
        let base_name = format!("Base{index}");
        let constraints = random_constraints(rng, &sig);
        SpecFile {
            blocks: vec![
                SpecBlock::Base(BaseBlock {
                    name: base_name.clone(),
                    tag: BaseTag::Prop,
                    signature: sig.base.clone(),
                }),
                SpecBlock::Hybrid(HybridBlock {
                    name: format!("Spec{index}"),
                    tag: HybridTag { base: BaseTag::Prop, constrained: rng.gen_bool(0.5) },
                    imports: vec![base_name],
                    theory: HybridTheory {
                        name: format!("Spec{index}"),
                        signature: sig,
                        axioms,
                    },
                    constraints,
                }),
            ],
        }
    }

    pub fn rfol_hybrid_signature(rng: &mut StdRng) -> HybridSignature {
        let mut base = hyloc_core::base::RfolSignature::default();
        base.sorts.insert("Nat".into(), Rigidity::Rigid);
        base.ops.insert(
            "z".into(),
            OpDecl { args: vec![], result: "Nat".into(), rigidity: Rigidity::Rigid },
        );
        base.ops.insert(
            "s".into(),
            OpDecl {
                args: vec!["Nat".into()],
                result: "Nat".into(),
                rigidity: if rng.gen_bool(0.7) { Rigidity::Rigid } else { Rigidity::Flexible },
            },
        );
        if rng.gen_bool(0.6) {
            base.ops.insert(
                "f".into(),
                OpDecl {
                    args: vec!["Nat".into(), "Nat".into()],
                    result: "Nat".into(),
                    rigidity: Rigidity::Flexible,
                },
            );
        }
        if rng.gen_bool(0.5) {
            base.rels.insert(
                "le".into(),
                RelDecl {
                    args: vec!["Nat".into(), "Nat".into()],
                    rigidity: if rng.gen_bool(0.5) { Rigidity::Rigid } else { Rigidity::Flexible },
                },
            );
        }
        let mut sig = HybridSignature::new(hyloc_core::base::BaseSignature::Rfol(base));
        for i in 0..rng.gen_range(1..=2) {
            sig.nominals.insert(format!("nom{i}"));
        }
        for i in 0..rng.gen_range(1..=2) {
            sig.modalities.insert(format!("lam{i}"), rng.gen_range(2..=3));
        }
        sig.validate().expect("generated RFOL signature is valid");
        sig
    }

    fn random_rfol_term(rng: &mut StdRng, sig: &HybridSignature, vars: &[String], depth: usize) -> Term {
        let base = sig.base.as_rfol().unwrap();
        if depth == 0 || rng.gen_bool(0.4) {
            if !vars.is_empty() && rng.gen_bool(0.6) {
                let v = vars[rng.gen_range(0..vars.len())].clone();
                return Term::Var(v);
            }
            return Term::constant("z");
        }
        let unary = Term::app("s", vec![random_rfol_term(rng, sig, vars, depth - 1)]);
        if base.ops.contains_key("f") && rng.gen_bool(0.4) {
            Term::app(
                "f",
                vec![
                    random_rfol_term(rng, sig, vars, depth - 1),
                    random_rfol_term(rng, sig, vars, depth - 1),
                ],
            )
        } else {
            unary
        }
    }

    pub fn random_rfol_sentence(rng: &mut StdRng, sig: &HybridSignature, depth: usize) -> HybridSentence {
        let mut bound_noms = Vec::new();
        let mut bound_vars = Vec::new();
        let mut counter = 0usize;
        gen_rfol(rng, sig, depth, &mut bound_noms, &mut bound_vars, &mut counter)
    }

    fn gen_rfol(
        rng: &mut StdRng,
        sig: &HybridSignature,
        depth: usize,
        bound_noms: &mut Vec<String>,
        bound_vars: &mut Vec<String>,
        counter: &mut usize,
    ) -> HybridSentence {
        let base = sig.base.as_rfol().unwrap();
        if depth == 0 || rng.gen_bool(0.25) {
            if rng.gen_bool(0.3) {
                let mut candidates: Vec<String> = sig.nominals.iter().cloned().collect();
                candidates.extend(bound_noms.iter().cloned());
                return HybridSentence::Nominal(
                    candidates[rng.gen_range(0..candidates.len())].clone(),
                );
            }
            if base.rels.contains_key("le") && rng.gen_bool(0.3) {
                return HybridSentence::Base(BaseSentence::RelAtom(
                    "le".into(),
                    vec![
                        random_rfol_term(rng, sig, bound_vars, 1),
                        random_rfol_term(rng, sig, bound_vars, 1),
                    ],
                ));
            }
            return HybridSentence::Base(BaseSentence::Equation(
                random_rfol_term(rng, sig, bound_vars, 2),
                random_rfol_term(rng, sig, bound_vars, 2),
            ));
        }
        match rng.gen_range(0..9) {
            0 => HybridSentence::not(gen_rfol(rng, sig, depth - 1, bound_noms, bound_vars, counter)),
            1 => HybridSentence::and(
                gen_rfol(rng, sig, depth - 1, bound_noms, bound_vars, counter),
                gen_rfol(rng, sig, depth - 1, bound_noms, bound_vars, counter),
            ),
            2 => HybridSentence::or(
                gen_rfol(rng, sig, depth - 1, bound_noms, bound_vars, counter),
                gen_rfol(rng, sig, depth - 1, bound_noms, bound_vars, counter),
            ),
            3 => HybridSentence::implies(
                gen_rfol(rng, sig, depth - 1, bound_noms, bound_vars, counter),
                gen_rfol(rng, sig, depth - 1, bound_noms, bound_vars, counter),
            ),
            4 => {
                let idx = rng.gen_range(0..sig.modalities.len());
                let (modality, arity) = sig.modalities.get_index(idx).unwrap();
                let args: Vec<HybridSentence> = (0..arity - 1)
                    .map(|_| gen_rfol(rng, sig, depth - 1, bound_noms, bound_vars, counter))
                    .collect();
                if rng.gen_bool(0.5) {
                    HybridSentence::Box { modality: modality.clone(), args }
                } else {
                    HybridSentence::Diamond { modality: modality.clone(), args }
                }
            }
            5 => {
                let mut candidates: Vec<String> = sig.nominals.iter().cloned().collect();
                candidates.extend(bound_noms.iter().cloned());
                let name = candidates[rng.gen_range(0..candidates.len())].clone();
                HybridSentence::at(
                    name,
                    gen_rfol(rng, sig, depth - 1, bound_noms, bound_vars, counter),
                )
            }
            6 => {
                let binder = format!("k{}", *counter);
                *counter += 1;
                bound_noms.push(binder.clone());
                let body = gen_rfol(rng, sig, depth - 1, bound_noms, bound_vars, counter);
                bound_noms.pop();
                if rng.gen_bool(0.5) {
                    HybridSentence::forall_nom(binder, body)
                } else {
                    HybridSentence::exists_nom(binder, body)
                }
            }
            _ => {
                let var = format!("v{}", *counter);
                *counter += 1;
                bound_vars.push(var.clone());
                let body = gen_rfol(rng, sig, depth - 1, bound_noms, bound_vars, counter);
                bound_vars.pop();
                if rng.gen_bool(0.5) {
                    HybridSentence::forall_rigid(var, "Nat", body)
                } else {
                    HybridSentence::exists_rigid(var, "Nat", body)
                }
            }
        }
    }

    fn rfol_spec_file(rng: &mut StdRng, index: usize) -> SpecFile {
        let sig = rfol_hybrid_signature(rng);
        let axioms: Vec<HybridSentence> = (0..rng.gen_range(0..=4))
            .map(|_| random_rfol_sentence(rng, &sig, 4))
            .collect();
        let tag = if rng.gen_bool(0.5) { BaseTag::RigidFol } else { BaseTag::RigidCasl };
        let base_name = format!("Data{index}");
        let constraints = random_constraints(rng, &sig);
        SpecFile {
            blocks: vec![
                SpecBlock::Base(BaseBlock {
                    name: base_name.clone(),
                    tag,
                    signature: sig.base.clone(),
                }),
                SpecBlock::Hybrid(HybridBlock {
                    name: format!("Spec{index}"),
                    tag: HybridTag { base: tag, constrained: rng.gen_bool(0.5) },
                    imports: vec![base_name],
                    theory: HybridTheory {
                        name: format!("Spec{index}"),
                        signature: sig,
                        axioms,
                    },
                    constraints,
                }),
            ],
        }
    }
}

/// Random RFOL Kripke cases with rigidity sharing by construction and,
/// optionally, a flexible sort whose carrier varies per world. Exercises
/// the world-argument insertion and table-merging paths end to end.
pub mod rfolgen {
    use super::*;
    use hyloc_core::base::{OpDecl, OpTable, RelDecl, RfolModel, RfolSignature, Rigidity, Element};

    /// Nat is rigid; `obs : Nat -> Obs` and `g : Obs -> Nat` over a
    /// flexible sort appear with probability 1/2.
    pub fn random_signature(rng: &mut StdRng) -> HybridSignature {
        let mut base = RfolSignature::default();
        base.sorts.insert("Nat".into(), Rigidity::Rigid);
        base.ops.insert(
            "z".into(),
            OpDecl { args: vec![], result: "Nat".into(), rigidity: Rigidity::Rigid },
        );
        base.ops.insert(
            "s".into(),
            OpDecl {
                args: vec!["Nat".into()],
                result: "Nat".into(),
                rigidity: if rng.gen_bool(0.6) { Rigidity::Rigid } else { Rigidity::Flexible },
            },
        );
        base.ops.insert(
            "f".into(),
            OpDecl {
                args: vec!["Nat".into(), "Nat".into()],
                result: "Nat".into(),
                rigidity: Rigidity::Flexible,
            },
        );
        if rng.gen_bool(0.5) {
            base.sorts.insert("Obs".into(), Rigidity::Flexible);
            base.ops.insert(
                "obs".into(),
                OpDecl {
                    args: vec!["Nat".into()],
                    result: "Obs".into(),
                    rigidity: Rigidity::Flexible,
                },
            );
            base.ops.insert(
                "g".into(),
                OpDecl {
                    args: vec!["Obs".into()],
                    result: "Nat".into(),
                    rigidity: Rigidity::Flexible,
                },
            );
        }
        base.rels.insert(
            "le".into(),
            RelDecl {
                args: vec!["Nat".into(), "Nat".into()],
                rigidity: if rng.gen_bool(0.5) { Rigidity::Rigid } else { Rigidity::Flexible },
            },
        );
        let mut sig = HybridSignature::new(hyloc_core::base::BaseSignature::Rfol(base));
        sig.nominals.insert("nom0".into());
        if rng.gen_bool(0.5) {
            sig.nominals.insert("nom1".into());
        }
        sig.modalities.insert("lam0".into(), 2);
        if rng.gen_bool(0.4) {
            sig.modalities.insert("lam1".into(), 3);
        }
        sig.validate().expect("generated RFOL signature is valid");
        sig
    }

    fn random_table(
        rng: &mut StdRng,
        arg_carriers: &[&[Element]],
        result_carrier: &[Element],
    ) -> OpTable {
        let mut tuples: Vec<Vec<Element>> = vec![Vec::new()];
        for carrier in arg_carriers {
            let mut next = Vec::new();
            for t in &tuples {
                for e in *carrier {
                    let mut t2 = t.clone();
                    t2.push(*e);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        tuples
            .into_iter()
            .map(|t| {
                let r = result_carrier[rng.gen_range(0..result_carrier.len())];
                (t, r)
            })
            .collect()
    }

    pub fn random_model(rng: &mut StdRng, sig: &HybridSignature, max_worlds: usize) -> KripkeModel {
        let rfol = sig.base.as_rfol().unwrap();
        let n_worlds = rng.gen_range(1..=max_worlds);
        let nat: Vec<Element> = (0..rng.gen_range(1..=3u32)).collect();
        let has_obs = rfol.sorts.contains_key("Obs");

        // Rigid tables once, shared everywhere.
        let rigid_s = random_table(rng, &[&nat], &nat);
        let rigid_z = OpTable::from([(vec![], nat[rng.gen_range(0..nat.len())])]);
        let rigid_le: BTreeSet<Vec<Element>> = {
            let mut out = BTreeSet::new();
            for a in &nat {
                for b in &nat {
                    if rng.gen_bool(0.3) {
                        out.insert(vec![*a, *b]);
                    }
                }
            }
            out
        };

        let local: Vec<BaseModel> = (0..n_worlds)
            .map(|_| {
                let mut m = RfolModel::default();
                m.carriers.insert("Nat".into(), nat.clone());
                let obs_carrier: Vec<Element> = if has_obs {
                    let size = rng.gen_range(1..=3u32);
                    let start = rng.gen_range(0..2u32);
                    (start..start + size).collect()
                } else {
                    Vec::new()
                };
                if has_obs {
                    m.carriers.insert("Obs".into(), obs_carrier.clone());
                }
                m.ops.insert("z".into(), rigid_z.clone());
                let s_table = if rfol.ops["s"].rigidity.is_rigid() {
                    rigid_s.clone()
                } else {
                    random_table(rng, &[&nat], &nat)
                };
                m.ops.insert("s".into(), s_table);
                m.ops.insert("f".into(), random_table(rng, &[&nat, &nat], &nat));
                if has_obs {
                    m.ops.insert("obs".into(), random_table(rng, &[&nat], &obs_carrier));
                    m.ops.insert("g".into(), random_table(rng, &[&obs_carrier], &nat));
                }
                let le = if rfol.rels["le"].rigidity.is_rigid() {
                    rigid_le.clone()
                } else {
                    let mut out = BTreeSet::new();
                    for a in &nat {
                        for b in &nat {
                            if rng.gen_bool(0.3) {
                                out.insert(vec![*a, *b]);
                            }
                        }
                    }
                    out
                };
                m.rels.insert("le".into(), le);
                BaseModel::Rfol(m)
            })
            .collect();

        let worlds: Vec<String> = (0..n_worlds).map(|i| format!("w{i}")).collect();
        let mut relations: IndexMap<String, BTreeSet<Vec<usize>>> = IndexMap::new();
        for (modality, arity) in &sig.modalities {
            let mut tuples = BTreeSet::new();
            let mut all: Vec<Vec<usize>> = vec![Vec::new()];
            for _ in 0..*arity {
                let mut next = Vec::new();
                for t in &all {
                    for w in 0..n_worlds {
                        let mut t2 = t.clone();
                        t2.push(w);
                        next.push(t2);
                    }
                }
                all = next;
            }
            for t in all {
                if rng.gen_bool(0.3) {
                    tuples.insert(t);
                }
            }
            relations.insert(modality.clone(), tuples);
        }
        let nominal_at: IndexMap<String, usize> = sig
            .nominals
            .iter()
            .map(|n| (n.clone(), rng.gen_range(0..n_worlds)))
            .collect();
        let model = KripkeModel {
            signature: sig.clone(),
            worlds,
            relations,
            nominal_at,
            local,
        };
        model.validate().expect("generated RFOL model is valid");
        model
    }

    /// Closed sentences whose equations may route through the flexible
    /// sort (`g(obs(t))`), exercising merged-table evaluation.
    pub fn random_sentence(rng: &mut StdRng, sig: &HybridSignature, depth: usize) -> HybridSentence {
        use hyloc_core::base::Term;
        let has_obs = sig.base.as_rfol().unwrap().ops.contains_key("g");
        fn term(rng: &mut StdRng, vars: &[String], has_obs: bool, depth: usize) -> Term {
            if depth == 0 || rng.gen_bool(0.35) {
                if !vars.is_empty() && rng.gen_bool(0.6) {
                    return Term::Var(vars[rng.gen_range(0..vars.len())].clone());
                }
                return Term::constant("z");
            }
            match rng.gen_range(0..4) {
                0 => Term::app("s", vec![term(rng, vars, has_obs, depth - 1)]),
                1 => Term::app(
                    "f",
                    vec![
                        term(rng, vars, has_obs, depth - 1),
                        term(rng, vars, has_obs, depth - 1),
                    ],
                ),
                2 if has_obs => Term::app(
                    "g",
                    vec![Term::app("obs", vec![term(rng, vars, has_obs, depth - 1)])],
                ),
                _ => term(rng, vars, has_obs, 0),
            }
        }
        fn gen(
            rng: &mut StdRng,
            sig: &HybridSignature,
            has_obs: bool,
            depth: usize,
            bound_noms: &mut Vec<String>,
            bound_vars: &mut Vec<String>,
            counter: &mut usize,
        ) -> HybridSentence {
            if depth == 0 || rng.gen_bool(0.3) {
                if rng.gen_bool(0.25) {
                    let mut candidates: Vec<String> = sig.nominals.iter().cloned().collect();
                    candidates.extend(bound_noms.iter().cloned());
                    return HybridSentence::Nominal(
                        candidates[rng.gen_range(0..candidates.len())].clone(),
                    );
                }
                if rng.gen_bool(0.3) {
                    return HybridSentence::Base(BaseSentence::RelAtom(
                        "le".into(),
                        vec![
                            term(rng, bound_vars, has_obs, 1),
                            term(rng, bound_vars, has_obs, 1),
                        ],
                    ));
                }
                return HybridSentence::Base(BaseSentence::Equation(
                    term(rng, bound_vars, has_obs, 2),
                    term(rng, bound_vars, has_obs, 2),
                ));
            }
            match rng.gen_range(0..9) {
                0 => HybridSentence::not(gen(rng, sig, has_obs, depth - 1, bound_noms, bound_vars, counter)),
                1 => HybridSentence::and(
                    gen(rng, sig, has_obs, depth - 1, bound_noms, bound_vars, counter),
                    gen(rng, sig, has_obs, depth - 1, bound_noms, bound_vars, counter),
                ),
                2 => HybridSentence::or(
                    gen(rng, sig, has_obs, depth - 1, bound_noms, bound_vars, counter),
                    gen(rng, sig, has_obs, depth - 1, bound_noms, bound_vars, counter),
                ),
                3 => HybridSentence::implies(
                    gen(rng, sig, has_obs, depth - 1, bound_noms, bound_vars, counter),
                    gen(rng, sig, has_obs, depth - 1, bound_noms, bound_vars, counter),
                ),
                4 => {
                    let idx = rng.gen_range(0..sig.modalities.len());
                    let (modality, arity) = sig.modalities.get_index(idx).unwrap();
                    let args: Vec<HybridSentence> = (0..arity - 1)
                        .map(|_| gen(rng, sig, has_obs, depth - 1, bound_noms, bound_vars, counter))
                        .collect();
                    if rng.gen_bool(0.5) {
                        HybridSentence::Box { modality: modality.clone(), args }
                    } else {
                        HybridSentence::Diamond { modality: modality.clone(), args }
                    }
                }
                5 => {
                    let mut candidates: Vec<String> = sig.nominals.iter().cloned().collect();
                    candidates.extend(bound_noms.iter().cloned());
                    let name = candidates[rng.gen_range(0..candidates.len())].clone();
                    HybridSentence::at(
                        name,
                        gen(rng, sig, has_obs, depth - 1, bound_noms, bound_vars, counter),
                    )
                }
                6 => {
                    let binder = format!("k{}", *counter);
                    *counter += 1;
                    bound_noms.push(binder.clone());
                    let body = gen(rng, sig, has_obs, depth - 1, bound_noms, bound_vars, counter);
                    bound_noms.pop();
                    if rng.gen_bool(0.5) {
                        HybridSentence::forall_nom(binder, body)
                    } else {
                        HybridSentence::exists_nom(binder, body)
                    }
                }
                _ => {
                    let var = format!("v{}", *counter);
                    *counter += 1;
                    bound_vars.push(var.clone());
                    let body = gen(rng, sig, has_obs, depth - 1, bound_noms, bound_vars, counter);
                    bound_vars.pop();
                    if rng.gen_bool(0.5) {
                        HybridSentence::forall_rigid(var, "Nat", body)
                    } else {
                        HybridSentence::exists_rigid(var, "Nat", body)
                    }
                }
            }
        }
        gen(rng, sig, has_obs, depth, &mut Vec::new(), &mut Vec::new(), &mut 0)
    }
}
