//! Measure-once one-way QFA driven by general quantum operations.
//!
//! On each symbol the current density operator passes through the symbol's
//! trace-preserving operation; a final projective measurement gives the
//! acceptance probability `Tr(P_a ρ)`.

use std::collections::BTreeMap;

use crate::channels::QuantumOperation;
use crate::linalg::{ComplexMatrix, DensityOperator};
use crate::machines::{check_unique, clamp_prob, BuildError, EvalError, Violation};
use crate::TOL;

#[derive(Debug, Clone, PartialEq)]
pub struct Mo1gQfa {
    quantum_states: Vec<String>,
    alphabet: Vec<String>,
    initial: String,
    operations: BTreeMap<String, QuantumOperation>,
    accept_projector: ComplexMatrix,
}

impl Mo1gQfa {
    pub fn new(
        quantum_states: Vec<String>,
        alphabet: Vec<String>,
        initial: impl Into<String>,
        operations: BTreeMap<String, QuantumOperation>,
        accept_projector: ComplexMatrix,
    ) -> Result<Self, BuildError> {
        check_unique(&quantum_states)?;
        check_unique(&alphabet)?;
        let initial = initial.into();
        if !quantum_states.contains(&initial) {
            return Err(BuildError::UnknownState(initial));
        }
        let dim = quantum_states.len();
        for sigma in &alphabet {
            let op = operations
                .get(sigma)
                .ok_or_else(|| BuildError::MissingEntry(format!("operation for symbol {sigma:?}")))?;
            if op.dim() != dim {
                return Err(BuildError::Dimension(format!(
                    "operation for symbol {sigma:?} acts on dimension {}, expected {dim}",
                    op.dim()
                )));
            }
        }
        for sigma in operations.keys() {
            if !alphabet.contains(sigma) {
                return Err(BuildError::UnknownSymbol(sigma.clone()));
            }
        }
        if accept_projector.rows() != dim || accept_projector.cols() != dim {
            return Err(BuildError::Dimension(format!(
                "accept projector is {}x{}, expected {dim}x{dim}",
                accept_projector.rows(),
                accept_projector.cols()
            )));
        }
        Ok(Self {
            quantum_states,
            alphabet,
            initial,
            operations,
            accept_projector,
        })
    }

    /// Convenience constructor with the projector built from an accepting
    /// state subset.
    pub fn with_accepting_states(
        quantum_states: Vec<String>,
        alphabet: Vec<String>,
        initial: impl Into<String>,
        operations: BTreeMap<String, QuantumOperation>,
        accepting: &[String],
    ) -> Result<Self, BuildError> {
        let dim = quantum_states.len();
        let mut indices = Vec::new();
        for s in accepting {
            let i = quantum_states
                .iter()
                .position(|q| q == s)
                .ok_or_else(|| BuildError::UnknownState(s.clone()))?;
            indices.push(i);
        }
        let projector = crate::linalg::projector_from_subset(dim, &indices)
            .map_err(|e| BuildError::Dimension(e.to_string()))?;
        Self::new(quantum_states, alphabet, initial, operations, projector)
    }

    pub fn quantum_states(&self) -> &[String] {
        &self.quantum_states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn initial(&self) -> &str {
        &self.initial
    }

    pub fn operations(&self) -> &BTreeMap<String, QuantumOperation> {
        &self.operations
    }

    pub fn operation(&self, symbol: &str) -> Option<&QuantumOperation> {
        self.operations.get(symbol)
    }

    pub fn accept_projector(&self) -> &ComplexMatrix {
        &self.accept_projector
    }

    pub fn dim(&self) -> usize {
        self.quantum_states.len()
    }

    pub fn initial_index(&self) -> usize {
        self.quantum_states
            .iter()
            .position(|q| q == &self.initial)
            .expect("validated initial state")
    }

    /// The initial density operator `|q_1⟩⟨q_1|`.
    pub fn initial_state(&self) -> DensityOperator {
        DensityOperator::pure_basis(self.dim(), self.initial_index())
    }

    /// Final state after folding the input's operations over the initial
    /// state.
    pub fn final_state(&self, input: &[String]) -> Result<DensityOperator, EvalError> {
        let mut rho = self.initial_state();
        for sigma in input {
            let op = self
                .operations
                .get(sigma)
                .ok_or_else(|| EvalError::UnknownSymbol(sigma.clone()))?;
            rho = op.apply(&rho).expect("dimensions checked at construction");
        }
        Ok(rho)
    }

    /// `Tr(P_a ρ_final)` before clamping.
    pub fn accept_prob_raw(&self, input: &[String]) -> Result<f64, EvalError> {
        let rho = self.final_state(input)?;
        Ok(self.accept_projector.mul(rho.matrix()).trace().re)
    }

    pub fn accept_prob(&self, input: &[String]) -> Result<f64, EvalError> {
        self.accept_prob_raw(input).map(clamp_prob)
    }

    pub fn validate(&self, tol: f64) -> Vec<Violation> {
        let mut violations = Vec::new();
        for (sigma, op) in &self.operations {
            for (k, e) in op.kraus().iter().enumerate() {
                if !e.is_finite() {
                    violations.push(Violation::new(
                        format!("E_{{{sigma},{k}}}"),
                        "non-finite entry",
                    ));
                }
            }
            let residual = op.completeness_residual();
            if residual > tol {
                violations.push(Violation::new(
                    format!("E_{sigma}"),
                    format!("operation elements do not satisfy the completeness condition, residual {residual:.1e}"),
                ));
            }
        }
        if !self.accept_projector.is_finite() {
            violations.push(Violation::new("P_a", "non-finite entry"));
        } else if !self.accept_projector.is_projector(tol) {
            let p = &self.accept_projector;
            violations.push(Violation::new(
                "P_a",
                format!(
                    "accept operator is not a projector, residual {:.1e}",
                    p.mul(p).distance(p).max(p.distance(&p.dagger()))
                ),
            ));
        }
        violations
    }
}

impl Mo1gQfa {
    /// Whether the accept projector is a diagonal 0/1 (state-subset)
    /// projector within `TOL`, and if so the selected indices.
    pub fn accepting_subset(&self) -> Option<Vec<usize>> {
        let p = &self.accept_projector;
        let mut indices = Vec::new();
        for i in 0..p.rows() {
            for j in 0..p.cols() {
                let z = p.get(i, j);
                if i == j {
                    if (z.re - 1.0).abs() <= TOL && z.im.abs() <= TOL {
                        indices.push(i);
                    } else if !(z.re.abs() <= TOL && z.im.abs() <= TOL) {
                        return None;
                    }
                } else if z.norm() > TOL {
                    return None;
                }
            }
        }
        Some(indices)
    }
}
