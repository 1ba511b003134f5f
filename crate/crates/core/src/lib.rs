//! Quantum finite automata with mixed states and classical control.
//!
//! This crate provides:
//!
//! - dense complex linear algebra sized for automata work ([`linalg`]),
//! - trace-preserving quantum operations, measurements, and controlled
//!   operations ([`channels`]),
//! - classical DFAs with a matrix-form evaluator ([`classical`]),
//! - six automaton models with their direct acceptance semantics
//!   ([`machines`]): measure-once general QFAs driven by quantum operations,
//!   QFAs with a regular control language, QFAs with classical states
//!   (classical-quantum and two-way communication variants), ancilla QFAs,
//!   and quantum sequential machines,
//! - constructive simulations between the models ([`transforms`]),
//! - equivalence checking by bounded search and by span closure
//!   ([`equivalence`]),
//! - a canonical JSON interchange format ([`formats`]),
//! - seeded random machine generators for testing ([`random`]).
//!
//! All probability evaluators implement the defining formulas of their
//! models directly (history enumeration for measurement-driven models),
//! while the transforms provide the polynomial-time channel-based route.
//! The two routes are checked against each other throughout the test
//! suite.
//!
//! # Example
//!
//! ```
//! use std::collections::BTreeMap;
//! use qfa_core::classical::Dfa;
//! use qfa_core::equivalence::{equiv_any, EquivalenceMethod};
//! use qfa_core::machines::Machine;
//! use qfa_core::transforms::{dfa_to_qcfa_certainty, dfa_to_qfac_certainty};
//!
//! // Two states over {a}: accepts words with an even number of `a`s.
//! let mut delta = BTreeMap::new();
//! delta.insert(("s1".to_string(), "a".to_string()), "s2".to_string());
//! delta.insert(("s2".to_string(), "a".to_string()), "s1".to_string());
//! let dfa = Dfa::new(
//!     vec!["s1".into(), "s2".into()],
//!     vec!["a".into()],
//!     "s1",
//!     ["s1".to_string()],
//!     delta,
//! )?;
//!
//! // Machines accepting the same language with certainty, in two
//! // different hybrid models.
//! let qfac = dfa_to_qfac_certainty(&dfa);
//! assert_eq!(qfac.accept_prob(&["a".to_string(), "a".to_string()])?, 1.0);
//! let verdict = equiv_any(
//!     &Machine::Qfac(qfac),
//!     &Machine::Qcfa(dfa_to_qcfa_certainty(&dfa)),
//!     EquivalenceMethod::Bounded,
//!     None,
//! )?;
//! assert!(verdict.equivalent);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod channels;
pub mod classical;
pub mod equivalence;
pub mod formats;
pub mod linalg;
pub mod machines;
pub mod random;
pub mod transforms;

#[cfg(test)]
pub(crate) mod fixtures;

/// Global numerical tolerance (Frobenius norm) for structural predicates
/// and probability comparisons.
pub const TOL: f64 = 1e-9;

/// Branches of a measurement-history enumeration with squared norm at or
/// below this threshold are dropped. Only exactly-dead branches (killed by
/// an orthogonal projector) fall under it in practice.
pub const PRUNE_EPS: f64 = 1e-15;

pub use channels::{GeneralMeasurement, ProjectiveMeasurement, QuantumOperation};
pub use classical::Dfa;
pub use equivalence::{EquivalenceMethod, EquivalenceVerdict};
pub use linalg::{Complex64, ComplexMatrix, ComplexVector, DensityOperator};
pub use machines::{AncillaQfa, Cl1Qfa, Machine, MachineKind, Mo1gQfa, Qcfa1, Qfac1, Qsm, Violation};
