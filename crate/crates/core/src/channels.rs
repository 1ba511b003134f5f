//! Trace-preserving quantum operations in operator-sum form, general and
//! projective measurements, and controlled operations on bipartite spaces.
//!
//! A quantum operation is a finite list of Kraus elements `{E_k}` acting as
//! `ρ ↦ Σ_k E_k ρ E_k†`; it is trace-preserving when `Σ_k E_k† E_k = I`.
//! Constructors enforce structural well-formedness (dimensions, outcome
//! arity); the numerical completeness conditions are checked by the
//! `validate` functions so that ill-conditioned inputs can be reported as
//! violations rather than rejected blindly.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::linalg::{Complex64, ComplexMatrix, DensityOperator};

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("operation needs at least one Kraus element")]
    EmptyKraus,
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("outcome labels and operators differ in length: {outcomes} vs {operators}")]
    OutcomeArity { outcomes: usize, operators: usize },
    #[error("duplicate outcome label {0:?}")]
    DuplicateOutcome(String),
    #[error("no branch operation for outcome {0:?}")]
    MissingBranch(String),
}

/// A quantum operation in operator-sum (Kraus) form.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumOperation {
    dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl QuantumOperation {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self, ChannelError> {
        let first = kraus.first().ok_or(ChannelError::EmptyKraus)?;
        let dim = first.rows();
        for (i, e) in kraus.iter().enumerate() {
            if e.rows() != dim || e.cols() != dim {
                return Err(ChannelError::DimensionMismatch {
                    context: format!(
                        "Kraus element {i} is {}x{}, expected {dim}x{dim}",
                        e.rows(),
                        e.cols()
                    ),
                });
            }
        }
        Ok(Self { dim, kraus })
    }

    /// The channel with the single element `U` (a unitary evolution when
    /// `U` is unitary).
    pub fn unitary(u: ComplexMatrix) -> Result<Self, ChannelError> {
        Self::new(vec![u])
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            kraus: vec![ComplexMatrix::identity(dim)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// Residual of the completeness condition, `‖Σ E†E − I‖_F`.
    pub fn completeness_residual(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim, self.dim);
        for e in &self.kraus {
            sum = sum.add(&e.dagger().mul(e));
        }
        sum.distance(&ComplexMatrix::identity(self.dim))
    }

    /// True iff `Σ_k E_k† E_k = I` within `tol`.
    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        self.completeness_residual() <= tol
    }

    /// Apply the operation to a raw matrix: `Σ_k E_k m E_k†`.
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> Result<ComplexMatrix, ChannelError> {
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(ChannelError::DimensionMismatch {
                context: format!(
                    "state is {}x{}, operation dimension is {}",
                    m.rows(),
                    m.cols(),
                    self.dim
                ),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for e in &self.kraus {
            out = out.add(&e.mul(m).mul(&e.dagger()));
        }
        Ok(out)
    }

    /// Apply the operation to a density operator. The result is not
    /// re-validated: trace preservation and positivity are consequences of
    /// the completeness condition, which `validate_operation` checks.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator, ChannelError> {
        Ok(DensityOperator::from_matrix_unchecked(
            self.apply_matrix(rho.matrix())?,
        ))
    }
}

/// True iff the operation satisfies the completeness condition within `tol`.
pub fn validate_operation(op: &QuantumOperation, tol: f64) -> bool {
    op.is_trace_preserving(tol)
}

/// Outcome of a measurement applied to a state.
#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    pub outcome: String,
    pub probability: f64,
    /// Normalized post-measurement state; present only when the outcome
    /// probability exceeds the tolerance.
    pub post_state: Option<DensityOperator>,
}

/// A general measurement `{M_m}` with `Σ_m M_m† M_m = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralMeasurement {
    dim: usize,
    outcomes: Vec<String>,
    operators: Vec<ComplexMatrix>,
}

impl GeneralMeasurement {
    pub fn new(outcomes: Vec<String>, operators: Vec<ComplexMatrix>) -> Result<Self, ChannelError> {
        if outcomes.len() != operators.len() {
            return Err(ChannelError::OutcomeArity {
                outcomes: outcomes.len(),
                operators: operators.len(),
            });
        }
        let first = operators.first().ok_or(ChannelError::EmptyKraus)?;
        let dim = first.rows();
        for m in &operators {
            if m.rows() != dim || m.cols() != dim {
                return Err(ChannelError::DimensionMismatch {
                    context: format!("measurement operator is {}x{}, expected {dim}x{dim}", m.rows(), m.cols()),
                });
            }
        }
        for (i, o) in outcomes.iter().enumerate() {
            if outcomes[..i].contains(o) {
                return Err(ChannelError::DuplicateOutcome(o.clone()));
            }
        }
        Ok(Self { dim, outcomes, operators })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn operator_for(&self, outcome: &str) -> Option<&ComplexMatrix> {
        self.outcomes
            .iter()
            .position(|o| o == outcome)
            .map(|i| &self.operators[i])
    }

    /// Residual of `‖Σ M†M − I‖_F`.
    pub fn completeness_residual(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim, self.dim);
        for m in &self.operators {
            sum = sum.add(&m.dagger().mul(m));
        }
        sum.distance(&ComplexMatrix::identity(self.dim))
    }

    pub fn is_complete(&self, tol: f64) -> bool {
        self.completeness_residual() <= tol
    }

    /// Measure a state: outcome `m` occurs with probability
    /// `Tr(M_m† M_m ρ)` and leaves the state `M_m ρ M_m† / p(m)`.
    pub fn measure(
        &self,
        rho: &DensityOperator,
        tol: f64,
    ) -> Result<Vec<MeasurementOutcome>, ChannelError> {
        if rho.dim() != self.dim {
            return Err(ChannelError::DimensionMismatch {
                context: format!("state dimension {} vs measurement dimension {}", rho.dim(), self.dim),
            });
        }
        let mut results = Vec::with_capacity(self.outcomes.len());
        for (label, m) in self.outcomes.iter().zip(&self.operators) {
            let collapsed = m.mul(rho.matrix()).mul(&m.dagger());
            let p = collapsed.trace().re;
            let post_state = if p > tol {
                let inv = Complex64::new(1.0 / p, 0.0);
                Some(DensityOperator::from_matrix_unchecked(collapsed.scale(inv)))
            } else {
                None
            };
            results.push(MeasurementOutcome {
                outcome: label.clone(),
                probability: p,
                post_state,
            });
        }
        Ok(results)
    }
}

/// A projective measurement: pairwise-orthogonal projectors summing to the
/// identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMeasurement {
    inner: GeneralMeasurement,
}

impl ProjectiveMeasurement {
    pub fn new(outcomes: Vec<String>, projectors: Vec<ComplexMatrix>) -> Result<Self, ChannelError> {
        Ok(Self {
            inner: GeneralMeasurement::new(outcomes, projectors)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn outcomes(&self) -> &[String] {
        self.inner.outcomes()
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        self.inner.operators()
    }

    pub fn projector_for(&self, outcome: &str) -> Option<&ComplexMatrix> {
        self.inner.operator_for(outcome)
    }

    pub fn as_general(&self) -> &GeneralMeasurement {
        &self.inner
    }

    pub fn measure(
        &self,
        rho: &DensityOperator,
        tol: f64,
    ) -> Result<Vec<MeasurementOutcome>, ChannelError> {
        self.inner.measure(rho, tol)
    }

    /// Check all three projective-measurement conditions within `tol`:
    /// every operator a projector, pairwise orthogonality, and resolution
    /// of the identity. Returns human-readable failure descriptions.
    pub fn validity_failures(&self, tol: f64) -> Vec<String> {
        let mut failures = Vec::new();
        let ps = self.projectors();
        for (label, p) in self.outcomes().iter().zip(ps) {
            if !p.is_projector(tol) {
                failures.push(format!(
                    "operator for outcome {label:?} is not a projector, residual {:.1e}",
                    p.mul(p).distance(p).max(p.distance(&p.dagger()))
                ));
            }
        }
        for i in 0..ps.len() {
            for j in (i + 1)..ps.len() {
                let prod = ps[i].mul(&ps[j]);
                let res = prod.frobenius_norm();
                if res > tol {
                    failures.push(format!(
                        "projectors for outcomes {:?} and {:?} are not orthogonal, residual {res:.1e}",
                        self.outcomes()[i],
                        self.outcomes()[j]
                    ));
                }
            }
        }
        let mut sum = ComplexMatrix::zeros(self.dim(), self.dim());
        for p in ps {
            sum = sum.add(p);
        }
        let res = sum.distance(&ComplexMatrix::identity(self.dim()));
        if res > tol {
            failures.push(format!("projectors do not sum to identity, residual {res:.1e}"));
        }
        failures
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.validity_failures(tol).is_empty()
    }
}

fn branch_for<'a>(
    branches: &'a BTreeMap<String, QuantumOperation>,
    outcome: &str,
    dim_b: &mut Option<usize>,
) -> Result<&'a QuantumOperation, ChannelError> {
    let op = branches
        .get(outcome)
        .ok_or_else(|| ChannelError::MissingBranch(outcome.to_string()))?;
    match *dim_b {
        None => *dim_b = Some(op.dim()),
        Some(d) if d != op.dim() => {
            return Err(ChannelError::DimensionMismatch {
                context: format!(
                    "branch for outcome {outcome:?} acts on dimension {}, others on {d}",
                    op.dim()
                ),
            });
        }
        _ => {}
    }
    Ok(op)
}

/// The controlled operation "if subsystem A was measured in outcome `i`,
/// perform `E_i` on subsystem B", with Kraus elements `{P_i ⊗ E_k^i}`.
/// On product states `ρ ⊗ ϱ` it acts as `Σ_i P_i ρ P_i ⊗ E_i(ϱ)`.
pub fn controlled_operation(
    measurement: &ProjectiveMeasurement,
    branches: &BTreeMap<String, QuantumOperation>,
) -> Result<QuantumOperation, ChannelError> {
    controlled_elements(measurement.outcomes(), measurement.projectors(), branches)
}

/// The general-measurement variant, with elements `{M_i ⊗ E_k^i}`; on
/// products it acts as `Σ_i M_i ρ M_i† ⊗ E_i(ϱ)`.
pub fn controlled_operation_general(
    measurement: &GeneralMeasurement,
    branches: &BTreeMap<String, QuantumOperation>,
) -> Result<QuantumOperation, ChannelError> {
    controlled_elements(measurement.outcomes(), measurement.operators(), branches)
}

fn controlled_elements(
    outcomes: &[String],
    operators: &[ComplexMatrix],
    branches: &BTreeMap<String, QuantumOperation>,
) -> Result<QuantumOperation, ChannelError> {
    let mut dim_b = None;
    let mut kraus = Vec::new();
    for (outcome, m) in outcomes.iter().zip(operators) {
        let branch = branch_for(branches, outcome, &mut dim_b)?;
        for e in branch.kraus() {
            kraus.push(m.tensor(e));
        }
    }
    QuantumOperation::new(kraus)
}
