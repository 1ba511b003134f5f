//! One-way QFA together with classical states.
//!
//! The classical component is a DFA without an accepting set; at each step
//! it selects the unitary applied to the quantum component, and the final
//! classical state selects the two-outcome projective measurement that
//! decides acceptance:
//! `P(x) = ‖P_{s_{n+1},a} U_{s_n,x_n} ⋯ U_{s_1,x_1} |q_1⟩‖²`.

use std::collections::BTreeMap;

use crate::channels::ProjectiveMeasurement;
use crate::classical::Dfa;
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::machines::{check_unique, clamp_prob, BuildError, EvalError, Violation};

/// Outcome labels of every final measurement.
pub const ACCEPT_OUTCOME: &str = "a";
pub const REJECT_OUTCOME: &str = "r";

#[derive(Debug, Clone, PartialEq)]
pub struct Qfac1 {
    quantum_states: Vec<String>,
    initial_quantum: String,
    unitaries: BTreeMap<(String, String), ComplexMatrix>,
    classical: Dfa,
    final_measurements: BTreeMap<String, ProjectiveMeasurement>,
}

impl Qfac1 {
    /// `classical` must carry an empty accepting set (acceptance is decided
    /// by the measurements); `unitaries` is keyed by (classical state,
    /// symbol) and must be total; every final measurement must have the
    /// outcome pair `["a", "r"]`.
    pub fn new(
        quantum_states: Vec<String>,
        initial_quantum: impl Into<String>,
        unitaries: BTreeMap<(String, String), ComplexMatrix>,
        classical: Dfa,
        final_measurements: BTreeMap<String, ProjectiveMeasurement>,
    ) -> Result<Self, BuildError> {
        check_unique(&quantum_states)?;
        let initial_quantum = initial_quantum.into();
        if !quantum_states.contains(&initial_quantum) {
            return Err(BuildError::UnknownState(initial_quantum));
        }
        if !classical.accepting().is_empty() {
            return Err(BuildError::Structure(
                "the classical component must have an empty accepting set".into(),
            ));
        }
        let dim = quantum_states.len();
        for s in classical.states() {
            for sigma in classical.alphabet() {
                let u = unitaries.get(&(s.clone(), sigma.clone())).ok_or_else(|| {
                    BuildError::MissingEntry(format!("unitary for (state {s:?}, symbol {sigma:?})"))
                })?;
                if u.rows() != dim || u.cols() != dim {
                    return Err(BuildError::Dimension(format!(
                        "unitary for ({s:?}, {sigma:?}) is {}x{}, expected {dim}x{dim}",
                        u.rows(),
                        u.cols()
                    )));
                }
            }
        }
        for (s, sigma) in unitaries.keys() {
            if classical.state_index(s).is_none() {
                return Err(BuildError::UnknownState(s.clone()));
            }
            if classical.symbol_index(sigma).is_none() {
                return Err(BuildError::UnknownSymbol(sigma.clone()));
            }
        }
        for s in classical.states() {
            let meas = final_measurements.get(s).ok_or_else(|| {
                BuildError::MissingEntry(format!("final measurement for state {s:?}"))
            })?;
            if meas.dim() != dim {
                return Err(BuildError::Dimension(format!(
                    "final measurement for state {s:?} acts on dimension {}, expected {dim}",
                    meas.dim()
                )));
            }
            if meas.outcomes() != [ACCEPT_OUTCOME.to_string(), REJECT_OUTCOME.to_string()] {
                return Err(BuildError::Structure(format!(
                    "final measurement for state {s:?} must have outcomes [\"a\", \"r\"], got {:?}",
                    meas.outcomes()
                )));
            }
        }
        for s in final_measurements.keys() {
            if classical.state_index(s).is_none() {
                return Err(BuildError::UnknownState(s.clone()));
            }
        }
        Ok(Self {
            quantum_states,
            initial_quantum,
            unitaries,
            classical,
            final_measurements,
        })
    }

    pub fn quantum_states(&self) -> &[String] {
        &self.quantum_states
    }

    pub fn classical_states(&self) -> &[String] {
        self.classical.states()
    }

    pub fn alphabet(&self) -> &[String] {
        self.classical.alphabet()
    }

    pub fn initial_quantum(&self) -> &str {
        &self.initial_quantum
    }

    pub fn initial_classical(&self) -> &str {
        self.classical.initial()
    }

    pub fn unitaries(&self) -> &BTreeMap<(String, String), ComplexMatrix> {
        &self.unitaries
    }

    pub fn classical(&self) -> &Dfa {
        &self.classical
    }

    pub fn final_measurements(&self) -> &BTreeMap<String, ProjectiveMeasurement> {
        &self.final_measurements
    }

    pub fn dim(&self) -> usize {
        self.quantum_states.len()
    }

    pub fn initial_quantum_index(&self) -> usize {
        self.quantum_states
            .iter()
            .position(|q| q == &self.initial_quantum)
            .expect("validated initial state")
    }

    pub fn accept_prob_raw(&self, input: &[String]) -> Result<f64, EvalError> {
        let mut psi = ComplexVector::basis(self.dim(), self.initial_quantum_index());
        let mut s = self.classical.initial().to_string();
        for sigma in input {
            let u = self
                .unitaries
                .get(&(s.clone(), sigma.clone()))
                .ok_or_else(|| EvalError::UnknownSymbol(sigma.clone()))?;
            psi = u.mul_vec(&psi);
            s = self
                .classical
                .step(&s, sigma)
                .map_err(|_| EvalError::UnknownSymbol(sigma.clone()))?
                .to_string();
        }
        let p_accept = self.final_measurements[&s]
            .projector_for(ACCEPT_OUTCOME)
            .expect("outcome pair checked at construction");
        Ok(p_accept.mul_vec(&psi).norm_sqr())
    }

    pub fn accept_prob(&self, input: &[String]) -> Result<f64, EvalError> {
        self.accept_prob_raw(input).map(clamp_prob)
    }

    pub fn validate(&self, tol: f64) -> Vec<Violation> {
        let mut violations = Vec::new();
        for ((s, sigma), u) in &self.unitaries {
            if !u.is_finite() {
                violations.push(Violation::new(format!("U_{{{s},{sigma}}}"), "non-finite entry"));
                continue;
            }
            let residual = u.isometry_residual();
            if residual > tol {
                violations.push(Violation::new(
                    format!("U_{{{s},{sigma}}}"),
                    format!("not unitary, residual {residual:.1e}"),
                ));
            }
        }
        for (s, meas) in &self.final_measurements {
            for failure in meas.validity_failures(tol) {
                violations.push(Violation::new(format!("M_{s}"), failure));
            }
        }
        violations
    }
}
