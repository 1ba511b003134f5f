//! The six automaton models and their direct acceptance semantics.
//!
//! Every model is evaluated exactly as its defining formula prescribes:
//! channel-driven models fold their per-symbol quantum operation over a
//! density operator; measurement-driven models (control-language QFAs and
//! the two-way-communication model) enumerate all measurement-outcome
//! histories, which is exponential in the input length by design — the
//! [`crate::transforms`] module provides the polynomial channel-based
//! route, and the test suite checks the two routes against each other.
//!
//! Constructors perform structural validation only (labels resolve, maps
//! are total, dimensions agree). Numerical invariants — unitarity,
//! measurement completeness, isometry conditions — are reported as data by
//! [`Machine::validate`], so that a defective machine can be described
//! rather than merely rejected.

use std::fmt;

use thiserror::Error;

mod ancilla;
mod cl1qfa;
mod mo1g;
mod qcfa;
mod qfac;
mod qsm;

pub use ancilla::AncillaQfa;
pub use cl1qfa::Cl1Qfa;
pub use mo1g::Mo1gQfa;
pub use qcfa::Qcfa1;
pub use qfac::{Qfac1, ACCEPT_OUTCOME, REJECT_OUTCOME};
pub use qsm::Qsm;

use crate::classical::Dfa;

/// Structural construction failure: a label does not resolve, a map is
/// not total, or dimensions disagree.
#[derive(Debug, Error, PartialEq)]
pub enum BuildError {
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("unknown outcome {0:?}")]
    UnknownOutcome(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("missing {0}")]
    MissingEntry(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("{0}")]
    Structure(String),
}

/// Evaluation failure on a structurally valid machine.
#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("symbol {0:?} not in the input alphabet")]
    UnknownSymbol(String),
    #[error("output symbol {0:?} not in the output alphabet")]
    UnknownOutputSymbol(String),
    #[error("input length {input} does not match output length {output}")]
    LengthMismatch { input: usize, output: usize },
    #[error("a {0} machine has no acceptance probability")]
    NoAcceptance(MachineKind),
}

/// A named invariant violation, e.g. a unitary that is not unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// The offending component, e.g. `U_{s2,b}`.
    pub component: String,
    /// What failed, with the numerical residual where applicable.
    pub message: String,
}

impl Violation {
    pub fn new(component: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            component: component.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.component, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MachineKind {
    Dfa,
    Mo1g,
    Cl1Qfa,
    Qfac,
    Qcfa,
    Ancilla,
    Qsm,
}

impl MachineKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            MachineKind::Dfa => "dfa",
            MachineKind::Mo1g => "mo1g",
            MachineKind::Cl1Qfa => "cl1qfa",
            MachineKind::Qfac => "qfac",
            MachineKind::Qcfa => "qcfa",
            MachineKind::Ancilla => "ancilla",
            MachineKind::Qsm => "qsm",
        }
    }
}

impl fmt::Display for MachineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for MachineKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dfa" => Ok(MachineKind::Dfa),
            "mo1g" => Ok(MachineKind::Mo1g),
            "cl1qfa" => Ok(MachineKind::Cl1Qfa),
            "qfac" => Ok(MachineKind::Qfac),
            "qcfa" => Ok(MachineKind::Qcfa),
            "ancilla" => Ok(MachineKind::Ancilla),
            "qsm" => Ok(MachineKind::Qsm),
            other => Err(format!("unknown machine kind {other:?}")),
        }
    }
}

/// Any machine the interchange format can describe.
#[derive(Debug, Clone, PartialEq)]
pub enum Machine {
    Dfa(Dfa),
    Mo1g(Mo1gQfa),
    Cl1Qfa(Cl1Qfa),
    Qfac(Qfac1),
    Qcfa(Qcfa1),
    Ancilla(AncillaQfa),
    Qsm(Qsm),
}

impl Machine {
    pub fn kind(&self) -> MachineKind {
        match self {
            Machine::Dfa(_) => MachineKind::Dfa,
            Machine::Mo1g(_) => MachineKind::Mo1g,
            Machine::Cl1Qfa(_) => MachineKind::Cl1Qfa,
            Machine::Qfac(_) => MachineKind::Qfac,
            Machine::Qcfa(_) => MachineKind::Qcfa,
            Machine::Ancilla(_) => MachineKind::Ancilla,
            Machine::Qsm(_) => MachineKind::Qsm,
        }
    }

    pub fn input_alphabet(&self) -> &[String] {
        match self {
            Machine::Dfa(m) => m.alphabet(),
            Machine::Mo1g(m) => m.alphabet(),
            Machine::Cl1Qfa(m) => m.alphabet(),
            Machine::Qfac(m) => m.alphabet(),
            Machine::Qcfa(m) => m.alphabet(),
            Machine::Ancilla(m) => m.alphabet(),
            Machine::Qsm(m) => m.alphabet(),
        }
    }

    /// All numerical invariant violations, empty iff the machine is valid
    /// within `tol`. DFAs are fully checked at construction and have no
    /// numerical invariants.
    pub fn validate(&self, tol: f64) -> Vec<Violation> {
        match self {
            Machine::Dfa(_) => Vec::new(),
            Machine::Mo1g(m) => m.validate(tol),
            Machine::Cl1Qfa(m) => m.validate(tol),
            Machine::Qfac(m) => m.validate(tol),
            Machine::Qcfa(m) => m.validate(tol),
            Machine::Ancilla(m) => m.validate(tol),
            Machine::Qsm(m) => m.validate(tol),
        }
    }

    /// Acceptance probability of the input, clamped to `[0, 1]`. For a
    /// DFA this is the characteristic 0/1 value; quantum sequential
    /// machines have no acceptance semantics and report an error.
    pub fn accept_prob(&self, input: &[String]) -> Result<f64, EvalError> {
        match self {
            Machine::Dfa(m) => {
                for sigma in input {
                    if m.symbol_index(sigma).is_none() {
                        return Err(EvalError::UnknownSymbol(sigma.clone()));
                    }
                }
                Ok(f64::from(u8::from(
                    m.accepts(input).expect("symbols checked above"),
                )))
            }
            Machine::Mo1g(m) => m.accept_prob(input),
            Machine::Cl1Qfa(m) => m.accept_prob(input),
            Machine::Qfac(m) => m.accept_prob(input),
            Machine::Qcfa(m) => m.accept_prob(input),
            Machine::Ancilla(m) => m.accept_prob(input),
            Machine::Qsm(_) => Err(EvalError::NoAcceptance(MachineKind::Qsm)),
        }
    }
}

pub(crate) fn check_unique(labels: &[String]) -> Result<(), BuildError> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(BuildError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

pub(crate) fn clamp_prob(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}
