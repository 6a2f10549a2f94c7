//! The encoder's central property: for every finite constrained Kripke
//! model, world and closed sentence, `sat_local` agrees with finite
//! evaluation of the unsorted standard translation in the induced
//! first-order structure. The two routes share no code: one is the Tarski
//! recursion over the Kripke model, the other encodes to FOL and evaluates
//! in a flat structure.

mod support;

use hyloc_core::fol::{
    encode_global, encode_sentence, eval_formula, induced_fol_model, sort_pred_names, unsort,
    unsort_formula, FolTerm, SignatureEncoding,
};
use hyloc_core::kripke::{sat_global, sat_local, ConstraintSet, Environment};
use hyloc_core::syntax::parse_spec;
use std::collections::HashMap;
use support::{prop_signature, random_prop_model, random_prop_sentence, rng, workspace_file};

/// A world variable the encoder's gensym can never produce.
const OUTER_WORLD: &str = "w%outer";

#[test]
fn standard_translation_matches_sat_local() {
    let mut rng = rng(2024);
    let sig = prop_signature(3, 2, &[2, 3]);
    let enc = SignatureEncoding::new(&sig, &ConstraintSet::default());
    let sort_preds = sort_pred_names(&enc.theory.signature);
    let mut checked = 0usize;
    for case in 0..250 {
        let model = random_prop_model(&mut rng, &sig, 4);
        let sentence = random_prop_sentence(&mut rng, &sig, 4);
        let structure = induced_fol_model(&model);
        let sorted = encode_sentence(&enc, &sig, &sentence, &FolTerm::var(OUTER_WORLD));
        let unsorted = unsort_formula(&sorted, &sort_preds);
        for w in 0..model.worlds.len() {
            let direct = sat_local(&model, w, &sentence, &Environment::default()).unwrap();
            let mut env = HashMap::from([(OUTER_WORLD.to_string(), w)]);
            let via_fol = eval_formula(&structure, &unsorted, &mut env).unwrap();
            assert_eq!(direct, via_fol, "case {case}, world {w}: {sentence:?}");
            checked += 1;
        }
    }
    assert!(checked >= 250, "ran {checked} point checks");
}

#[test]
fn global_encoding_matches_sat_global() {
    let mut rng = rng(2025);
    let sig = prop_signature(2, 1, &[2]);
    let enc = SignatureEncoding::new(&sig, &ConstraintSet::default());
    let sort_preds = sort_pred_names(&enc.theory.signature);
    for case in 0..200 {
        let model = random_prop_model(&mut rng, &sig, 4);
        let sentence = random_prop_sentence(&mut rng, &sig, 4);
        let structure = induced_fol_model(&model);
        let global = unsort_formula(&encode_global(&enc, &sig, &sentence), &sort_preds);
        let direct = sat_global(&model, &sentence).unwrap();
        let via_fol = eval_formula(&structure, &global, &mut HashMap::new()).unwrap();
        assert_eq!(direct, via_fol, "case {case}");
    }
}

#[test]
fn unsort_preserves_finite_satisfaction() {
    // Sorted evaluation ranges quantifiers over sort members; relativized
    // evaluation ranges over the whole universe under guards. They must
    // agree on induced structures.
    let mut rng = rng(2026);
    let sig = prop_signature(2, 1, &[2]);
    let enc = SignatureEncoding::new(&sig, &ConstraintSet::default());
    let sort_preds = sort_pred_names(&enc.theory.signature);
    for case in 0..200 {
        let model = random_prop_model(&mut rng, &sig, 3);
        let sentence = random_prop_sentence(&mut rng, &sig, 3);
        let structure = induced_fol_model(&model);
        let sorted = encode_global(&enc, &sig, &sentence);
        let unsorted = unsort_formula(&sorted, &sort_preds);
        let sorted_value = eval_formula(&structure, &sorted, &mut HashMap::new()).unwrap();
        let unsorted_value = eval_formula(&structure, &unsorted, &mut HashMap::new()).unwrap();
        assert_eq!(sorted_value, unsorted_value, "case {case}");
    }
}

#[test]
fn conservativity_desk_check_on_random_models() {
    // The induced structure of every constrained model satisfies all
    // signature axioms of the encoding: frame axioms (none here), function
    // closures and nonemptiness.
    let mut rng = rng(2027);
    let sig = prop_signature(3, 2, &[2, 3]);
    let enc = SignatureEncoding::new(&sig, &ConstraintSet::default());
    let (unsorted_theory, _) = unsort(&enc.theory);
    for case in 0..100 {
        let model = random_prop_model(&mut rng, &sig, 4);
        let structure = induced_fol_model(&model);
        for axiom in &unsorted_theory.axioms {
            let holds = eval_formula(&structure, &axiom.formula, &mut HashMap::new()).unwrap();
            assert!(holds, "case {case}: induced model violates {}", axiom.name);
        }
    }
}

#[test]
fn conservativity_desk_check_on_calc() {
    let text = workspace_file("samples/calc.hspec");
    let spec = parse_spec(&text).unwrap();
    let calc = spec.find_hybrid("Calc").unwrap();
    let model_text = workspace_file("samples/calc_z5.hmodel");
    let model = hyloc_core::syntax::parse_model(&model_text, &calc.theory.signature).unwrap();
    let enc = SignatureEncoding::new(&calc.theory.signature, &calc.constraints);
    let (unsorted_theory, _) = unsort(&enc.theory);
    let structure = induced_fol_model(&model);
    // Universe: 2 worlds + 5 carrier elements.
    assert_eq!(structure.size, 7);
    for axiom in &unsorted_theory.axioms {
        let holds = eval_formula(&structure, &axiom.formula, &mut HashMap::new()).unwrap();
        assert!(holds, "induced Calc model violates {}", axiom.name);
    }
    // The encoded theory axioms themselves also hold in the induced
    // structure, since the model satisfies the theory.
    let task = hyloc_core::fol::encode_task(&calc.theory, &calc.constraints, None);
    for axiom in &task.unsorted.axioms {
        let holds = eval_formula(&structure, &axiom.formula, &mut HashMap::new()).unwrap();
        assert!(holds, "induced Calc model violates translated axiom {}", axiom.name);
    }
}

#[test]
fn box_diamond_duality_exhaustive_at_arity_two() {
    use hyloc_core::base::BaseSentence;
    use hyloc_core::hybrid::HybridSentence as S;
    let mut rng = rng(2028);
    let sig = prop_signature(1, 1, &[2]);
    let p = S::Base(BaseSentence::PropAtom("p0".into()));
    let diamond = S::diamond("lam0", vec![p.clone()]);
    let dual = S::not(S::boxm("lam0", vec![S::not(p)]));
    for _ in 0..100 {
        let model = random_prop_model(&mut rng, &sig, 4);
        for w in 0..model.worlds.len() {
            assert_eq!(
                sat_local(&model, w, &diamond, &Environment::default()).unwrap(),
                sat_local(&model, w, &dual, &Environment::default()).unwrap()
            );
        }
    }
}

#[test]
fn at_idempotence_everywhere() {
    use hyloc_core::hybrid::HybridSentence as S;
    let mut rng = rng(2029);
    let sig = prop_signature(2, 2, &[2]);
    for _ in 0..100 {
        let model = random_prop_model(&mut rng, &sig, 4);
        let body = random_prop_sentence(&mut rng, &sig, 3);
        let inner = S::at("nom1", body);
        let outer = S::at("nom0", inner.clone());
        for w in 0..model.worlds.len() {
            assert_eq!(
                sat_local(&model, w, &outer, &Environment::default()).unwrap(),
                sat_local(&model, w, &inner, &Environment::default()).unwrap()
            );
        }
    }
}
