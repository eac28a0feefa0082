//! Exact finite models of hyperkähler cohomology rings.
//!
//! The crate builds graded Frobenius algebras from a quadratic form, computes
//! Lefschetz triples and the Lie algebras they generate, extracts the
//! Bogomolov–Beauville form and its higher-degree analogues, and constructs
//! twistor paths on the period quadric. All arithmetic is exact.

pub mod exact_kernel;
pub mod frobenius_core;
pub mod hodge_su2;
pub mod model_forge;
pub mod par;
pub mod twistor_walk;
