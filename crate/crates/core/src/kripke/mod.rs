//! Constrained finite Kripke models.
//!
//! A model carries a world set, one relation table per modality, a total
//! nominal assignment, and a base model per world. Rigidity sharing - rigid
//! sorts and symbols interpreted identically in every world - is checked by
//! [`check_constraints`] together with any requested frame properties.

mod sat;
mod search;

pub use sat::{check_theory, sat_global, sat_local, AxiomReport, FailureWitness, TheoryReport, WitnessBinding};
pub use search::{find_countermodel, SearchBounds, SearchError, SearchOutcome};

use crate::base::{validate_model, BaseModel, Element};
use crate::hybrid::HybridSignature;
use indexmap::IndexMap;
use std::collections::BTreeSet;
use thiserror::Error;

/// Index into [`KripkeModel::worlds`].
pub type World = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KripkeError {
    #[error("model has no worlds")]
    NoWorlds,
    #[error("relation `{modality}` holds tuple {tuple:?} of width {got}, expected {expected}")]
    TupleWidth { modality: String, tuple: Vec<World>, got: usize, expected: usize },
    #[error("relation `{modality}` holds tuple {tuple:?} mentioning an unknown world")]
    WorldOutOfRange { modality: String, tuple: Vec<World> },
    #[error("nominal `{0}` is unassigned")]
    UnassignedNominal(String),
    #[error("nominal `{0}` assigned to an unknown world")]
    NominalOutOfRange(String),
    #[error("model interprets undeclared name `{0}`")]
    UndeclaredName(String),
    #[error("world `{world}`: {source}")]
    LocalModel { world: String, source: crate::base::BaseError },
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("unbound name `{0}` during evaluation")]
    UnboundName(String),
    #[error(transparent)]
    Base(#[from] crate::base::BaseError),
}

/// Binding environment for nominal variables and rigid variables. Nominal
/// bindings land in worlds; rigid bindings take values in the shared rigid
/// carriers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Environment {
    pub nominals: IndexMap<String, World>,
    pub rigids: IndexMap<String, Element>,
}

/// Frame properties a binary modality can be constrained by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FrameProperty {
    Reflexive,
    Symmetric,
    Transitive,
    Serial,
}

impl FrameProperty {
    pub fn name(self) -> &'static str {
        match self {
            FrameProperty::Reflexive => "reflexive",
            FrameProperty::Symmetric => "symmetric",
            FrameProperty::Transitive => "transitive",
            FrameProperty::Serial => "serial",
        }
    }

    pub fn parse(s: &str) -> Option<FrameProperty> {
        match s {
            "reflexive" => Some(FrameProperty::Reflexive),
            "symmetric" => Some(FrameProperty::Symmetric),
            "transitive" => Some(FrameProperty::Transitive),
            "serial" => Some(FrameProperty::Serial),
            _ => None,
        }
    }
}

/// Frame-property constraints per modality. Rigidity sharing is always in
/// force; it is implied by the signature's rigidity flags.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    pub frame: IndexMap<String, BTreeSet<FrameProperty>>,
}

impl ConstraintSet {
    pub fn properties_of(&self, modality: &str) -> impl Iterator<Item = FrameProperty> + '_ {
        self.frame
            .get(modality)
            .into_iter()
            .flat_map(|set| set.iter().copied())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    pub signature: HybridSignature,
    /// World names; indices are the working representation.
    pub worlds: Vec<String>,
    pub relations: IndexMap<String, BTreeSet<Vec<World>>>,
    pub nominal_at: IndexMap<String, World>,
    /// One base model per world, indexed like `worlds`.
    pub local: Vec<BaseModel>,
}

impl KripkeModel {
    pub fn world_named(&self, name: &str) -> Option<World> {
        self.worlds.iter().position(|w| w == name)
    }

    pub fn world_name(&self, w: World) -> &str {
        &self.worlds[w]
    }

    /// Resolves a nominal name through the environment first, then the
    /// model's nominal assignment.
    pub fn resolve_nominal(&self, env: &Environment, name: &str) -> Result<World, KripkeError> {
        if let Some(w) = env.nominals.get(name) {
            return Ok(*w);
        }
        self.nominal_at
            .get(name)
            .copied()
            .ok_or_else(|| KripkeError::UnboundName(name.to_string()))
    }

    /// Structural invariants: nonempty worlds, tuple widths and ranges,
    /// total nominal assignment, a valid base model per world. Rigidity
    /// sharing is *not* enforced here; see [`check_constraints`].
    pub fn validate(&self) -> Result<(), KripkeError> {
        if self.worlds.is_empty() {
            return Err(KripkeError::NoWorlds);
        }
        if self.local.len() != self.worlds.len() {
            return Err(KripkeError::SignatureMismatch(format!(
                "{} worlds but {} local models",
                self.worlds.len(),
                self.local.len()
            )));
        }
        for (name, tuples) in &self.relations {
            let arity = *self
                .signature
                .modalities
                .get(name)
                .ok_or_else(|| KripkeError::UndeclaredName(name.clone()))?;
            for tuple in tuples {
                if tuple.len() != arity {
                    return Err(KripkeError::TupleWidth {
                        modality: name.clone(),
                        tuple: tuple.clone(),
                        got: tuple.len(),
                        expected: arity,
                    });
                }
                if tuple.iter().any(|w| *w >= self.worlds.len()) {
                    return Err(KripkeError::WorldOutOfRange {
                        modality: name.clone(),
                        tuple: tuple.clone(),
                    });
                }
            }
        }
        for nominal in &self.signature.nominals {
            match self.nominal_at.get(nominal) {
                None => return Err(KripkeError::UnassignedNominal(nominal.clone())),
                Some(w) if *w >= self.worlds.len() => {
                    return Err(KripkeError::NominalOutOfRange(nominal.clone()))
                }
                Some(_) => {}
            }
        }
        for name in self.nominal_at.keys() {
            if !self.signature.nominals.contains(name) {
                return Err(KripkeError::UndeclaredName(name.clone()));
            }
        }
        for (w, m) in self.local.iter().enumerate() {
            validate_model(&self.signature.base, m).map_err(|source| KripkeError::LocalModel {
                world: self.worlds[w].clone(),
                source,
            })?;
        }
        Ok(())
    }

    /// Tuples of `modality` starting at world `w`.
    pub fn tuples_from(&self, modality: &str, w: World) -> impl Iterator<Item = &Vec<World>> {
        self.relations
            .get(modality)
            .into_iter()
            .flat_map(move |set| set.iter().filter(move |t| t.first() == Some(&w)))
    }

    /// The shared carrier of a rigid sort (taken from world 0; equality
    /// across worlds is a constraint checked separately).
    pub fn rigid_carrier(&self, sort: &str) -> Option<&[Element]> {
        match &self.local[0] {
            BaseModel::Rfol(m) => m.carriers.get(sort).map(|c| c.as_slice()),
            BaseModel::Prop(_) => None,
        }
    }
}

/// A constraint violation, with enough of a witness to reproduce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    RigidCarrierMismatch { sort: String, world_a: String, world_b: String },
    RigidOpMismatch { op: String, world_a: String, world_b: String },
    RigidRelMismatch { rel: String, world_a: String, world_b: String },
    Frame { modality: String, property: FrameProperty, witness: Vec<String> },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::RigidCarrierMismatch { sort, world_a, world_b } => write!(
                f,
                "rigid sort `{sort}` has different carriers at worlds `{world_a}` and `{world_b}`"
            ),
            Violation::RigidOpMismatch { op, world_a, world_b } => write!(
                f,
                "rigid op `{op}` is interpreted differently at worlds `{world_a}` and `{world_b}`"
            ),
            Violation::RigidRelMismatch { rel, world_a, world_b } => write!(
                f,
                "rigid rel `{rel}` is interpreted differently at worlds `{world_a}` and `{world_b}`"
            ),
            Violation::Frame { modality, property, witness } => write!(
                f,
                "relation `{modality}` is not {}: witness ({})",
                property.name(),
                witness.join(", ")
            ),
        }
    }
}

/// Checks rigidity sharing and the requested frame properties. An empty
/// result means the model is a constrained model.
pub fn check_constraints(model: &KripkeModel, cs: &ConstraintSet) -> Vec<Violation> {
    let mut violations = Vec::new();
    rigidity_violations(model, &mut violations);
    for (modality, props) in &cs.frame {
        let empty = BTreeSet::new();
        let tuples = model.relations.get(modality).unwrap_or(&empty);
        for prop in props {
            frame_violation(model, modality, *prop, tuples, &mut violations);
        }
    }
    violations
}

fn rigidity_violations(model: &KripkeModel, out: &mut Vec<Violation>) {
    let rfol = match &model.signature.base {
        crate::base::BaseSignature::Rfol(r) => r,
        crate::base::BaseSignature::Prop(_) => return,
    };
    let locals: Vec<&crate::base::RfolModel> = model
        .local
        .iter()
        .filter_map(|m| m.as_rfol())
        .collect();
    if locals.len() != model.local.len() {
        return; // kind mismatch surfaces via validate()
    }
    let first = locals[0];
    for (w, m) in locals.iter().enumerate().skip(1) {
        for (sort, rig) in &rfol.sorts {
            if rig.is_rigid() && first.carriers.get(sort) != m.carriers.get(sort) {
                out.push(Violation::RigidCarrierMismatch {
                    sort: sort.clone(),
                    world_a: model.worlds[0].clone(),
                    world_b: model.worlds[w].clone(),
                });
            }
        }
        for (op, decl) in &rfol.ops {
            if decl.rigidity.is_rigid() && first.ops.get(op) != m.ops.get(op) {
                out.push(Violation::RigidOpMismatch {
                    op: op.clone(),
                    world_a: model.worlds[0].clone(),
                    world_b: model.worlds[w].clone(),
                });
            }
        }
        for (rel, decl) in &rfol.rels {
            if decl.rigidity.is_rigid() && first.rels.get(rel) != m.rels.get(rel) {
                out.push(Violation::RigidRelMismatch {
                    rel: rel.clone(),
                    world_a: model.worlds[0].clone(),
                    world_b: model.worlds[w].clone(),
                });
            }
        }
    }
}

fn frame_violation(
    model: &KripkeModel,
    modality: &str,
    property: FrameProperty,
    tuples: &BTreeSet<Vec<World>>,
    out: &mut Vec<Violation>,
) {
    let name = |w: World| model.worlds[w].clone();
    match property {
        FrameProperty::Reflexive => {
            for w in 0..model.worlds.len() {
                if !tuples.contains(&vec![w, w]) {
                    out.push(Violation::Frame {
                        modality: modality.to_string(),
                        property,
                        witness: vec![name(w), name(w)],
                    });
                    return;
                }
            }
        }
        FrameProperty::Symmetric => {
            for t in tuples {
                if t.len() == 2 && !tuples.contains(&vec![t[1], t[0]]) {
                    out.push(Violation::Frame {
                        modality: modality.to_string(),
                        property,
                        witness: vec![name(t[0]), name(t[1])],
                    });
                    return;
                }
            }
        }
        FrameProperty::Transitive => {
            for a in tuples {
                for b in tuples {
                    if a.len() == 2 && b.len() == 2 && a[1] == b[0] && !tuples.contains(&vec![a[0], b[1]])
                    {
                        out.push(Violation::Frame {
                            modality: modality.to_string(),
                            property,
                            witness: vec![name(a[0]), name(a[1]), name(b[1])],
                        });
                        return;
                    }
                }
            }
        }
        FrameProperty::Serial => {
            for w in 0..model.worlds.len() {
                if !tuples.iter().any(|t| t.first() == Some(&w)) {
                    out.push(Violation::Frame {
                        modality: modality.to_string(),
                        property,
                        witness: vec![name(w)],
                    });
                    return;
                }
            }
        }
    }
}
