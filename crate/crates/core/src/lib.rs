//! hyloc-core: a workbench for hybridized specification logics.
//!
//! The library is organised as a pipeline over a small family of logics:
//!
//! - [`base`] - base institutions (PROP, RFOL): atomic sentences, finite
//!   models, signature morphisms, satisfaction.
//! - [`hybrid`] - hybridized signatures and the two-level sentence language
//!   (modalities, nominals, `@`, nominal and rigid-variable quantifiers).
//! - [`kripke`] - constrained finite Kripke models, the local/global
//!   satisfaction relation, model checking and bounded countermodel search.
//! - [`syntax`] - concrete syntax: `.hspec` specification files and
//!   `.hmodel` model files, diagnostics, pretty-printing.
//! - [`fol`] - the standard translation into many-sorted first-order logic,
//!   relativization to unsorted FOL, TPTP emission, and finite first-order
//!   evaluation used as the translation oracle.
//! - [`prover`] - external SZS-speaking provers over a data-driven registry,
//!   plus the internal bounded-search fallback.

pub mod base;
pub mod hybrid;
pub mod kripke;
pub mod syntax;
pub mod fol;
pub mod prover;
