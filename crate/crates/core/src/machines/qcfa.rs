//! One-way QFA with quantum and classical states (two-way communication).
//!
//! Each step performs the general measurement selected by the current
//! classical state and scanned symbol; the outcome drives the classical
//! transition. An input is accepted with the total probability of the
//! outcome histories whose final classical state is accepting:
//! `P(x) = Σ_{c_1⋯c_n} χ_a(s_{n+1}) ‖M^{c_n}_{s_n,x_n} ⋯ M^{c_1}_{s_1,x_1} |q_1⟩‖²`.

use std::collections::{BTreeMap, BTreeSet};

use crate::channels::GeneralMeasurement;
use crate::linalg::ComplexVector;
use crate::machines::{check_unique, clamp_prob, BuildError, EvalError, Violation};
use crate::PRUNE_EPS;

#[derive(Debug, Clone, PartialEq)]
pub struct Qcfa1 {
    quantum_states: Vec<String>,
    classical_states: Vec<String>,
    alphabet: Vec<String>,
    outcomes: Vec<String>,
    initial_quantum: String,
    initial_classical: String,
    measurements: BTreeMap<(String, String), GeneralMeasurement>,
    classical_delta: BTreeMap<(String, String, String), String>,
    accepting: BTreeSet<String>,
}

impl Qcfa1 {
    /// `measurements` is keyed by (classical state, symbol) and must be
    /// total with outcome set exactly `outcomes`; `classical_delta` is
    /// keyed by (classical state, symbol, outcome) and must be total.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        quantum_states: Vec<String>,
        classical_states: Vec<String>,
        alphabet: Vec<String>,
        outcomes: Vec<String>,
        initial_quantum: impl Into<String>,
        initial_classical: impl Into<String>,
        measurements: BTreeMap<(String, String), GeneralMeasurement>,
        classical_delta: BTreeMap<(String, String, String), String>,
        accepting: impl IntoIterator<Item = String>,
    ) -> Result<Self, BuildError> {
        check_unique(&quantum_states)?;
        check_unique(&classical_states)?;
        check_unique(&alphabet)?;
        check_unique(&outcomes)?;
        let initial_quantum = initial_quantum.into();
        if !quantum_states.contains(&initial_quantum) {
            return Err(BuildError::UnknownState(initial_quantum));
        }
        let initial_classical = initial_classical.into();
        if !classical_states.contains(&initial_classical) {
            return Err(BuildError::UnknownState(initial_classical));
        }
        let accepting: BTreeSet<String> = accepting.into_iter().collect();
        for s in &accepting {
            if !classical_states.contains(s) {
                return Err(BuildError::UnknownState(s.clone()));
            }
        }
        let dim = quantum_states.len();
        for s in &classical_states {
            for sigma in &alphabet {
                let meas = measurements.get(&(s.clone(), sigma.clone())).ok_or_else(|| {
                    BuildError::MissingEntry(format!(
                        "measurement for (state {s:?}, symbol {sigma:?})"
                    ))
                })?;
                if meas.dim() != dim {
                    return Err(BuildError::Dimension(format!(
                        "measurement for ({s:?}, {sigma:?}) acts on dimension {}, expected {dim}",
                        meas.dim()
                    )));
                }
                if meas.outcomes() != outcomes {
                    return Err(BuildError::Structure(format!(
                        "measurement for ({s:?}, {sigma:?}) has outcomes {:?}, expected {outcomes:?}",
                        meas.outcomes()
                    )));
                }
                for c in &outcomes {
                    let t = classical_delta
                        .get(&(s.clone(), sigma.clone(), c.clone()))
                        .ok_or_else(|| {
                            BuildError::MissingEntry(format!(
                                "classical transition for (state {s:?}, symbol {sigma:?}, outcome {c:?})"
                            ))
                        })?;
                    if !classical_states.contains(t) {
                        return Err(BuildError::UnknownState(t.clone()));
                    }
                }
            }
        }
        for (s, sigma) in measurements.keys() {
            if !classical_states.contains(s) {
                return Err(BuildError::UnknownState(s.clone()));
            }
            if !alphabet.contains(sigma) {
                return Err(BuildError::UnknownSymbol(sigma.clone()));
            }
        }
        for (s, sigma, c) in classical_delta.keys() {
            if !classical_states.contains(s) {
                return Err(BuildError::UnknownState(s.clone()));
            }
            if !alphabet.contains(sigma) {
                return Err(BuildError::UnknownSymbol(sigma.clone()));
            }
            if !outcomes.contains(c) {
                return Err(BuildError::UnknownOutcome(c.clone()));
            }
        }
        Ok(Self {
            quantum_states,
            classical_states,
            alphabet,
            outcomes,
            initial_quantum,
            initial_classical,
            measurements,
            classical_delta,
            accepting,
        })
    }

    pub fn quantum_states(&self) -> &[String] {
        &self.quantum_states
    }

    pub fn classical_states(&self) -> &[String] {
        &self.classical_states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn initial_quantum(&self) -> &str {
        &self.initial_quantum
    }

    pub fn initial_classical(&self) -> &str {
        &self.initial_classical
    }

    pub fn measurements(&self) -> &BTreeMap<(String, String), GeneralMeasurement> {
        &self.measurements
    }

    pub fn classical_delta(&self) -> &BTreeMap<(String, String, String), String> {
        &self.classical_delta
    }

    pub fn accepting(&self) -> &BTreeSet<String> {
        &self.accepting
    }

    pub fn dim(&self) -> usize {
        self.quantum_states.len()
    }

    pub fn is_accepting(&self, state: &str) -> bool {
        self.accepting.contains(state)
    }

    pub fn initial_quantum_index(&self) -> usize {
        self.quantum_states
            .iter()
            .position(|q| q == &self.initial_quantum)
            .expect("validated initial state")
    }

    /// Acceptance probability with an explicit pruning threshold; see
    /// [`crate::PRUNE_EPS`].
    pub fn accept_prob_with_prune(
        &self,
        input: &[String],
        prune_eps: f64,
    ) -> Result<f64, EvalError> {
        for sigma in input {
            if !self.alphabet.contains(sigma) {
                return Err(EvalError::UnknownSymbol(sigma.clone()));
            }
        }
        let psi = ComplexVector::basis(self.dim(), self.initial_quantum_index());
        let mut total = 0.0;
        self.branch(&psi, input, &self.initial_classical, prune_eps, &mut total);
        Ok(clamp_prob(total))
    }

    fn branch(
        &self,
        psi: &ComplexVector,
        rest: &[String],
        classical: &str,
        prune_eps: f64,
        total: &mut f64,
    ) {
        let Some((sigma, tail)) = rest.split_first() else {
            if self.accepting.contains(classical) {
                *total += psi.norm_sqr();
            }
            return;
        };
        let meas = &self.measurements[&(classical.to_string(), sigma.clone())];
        for (outcome, operator) in meas.outcomes().iter().zip(meas.operators()) {
            let collapsed = operator.mul_vec(psi);
            if collapsed.norm_sqr() <= prune_eps {
                continue;
            }
            let next =
                &self.classical_delta[&(classical.to_string(), sigma.clone(), outcome.clone())];
            self.branch(&collapsed, tail, next, prune_eps, total);
        }
    }

    pub fn accept_prob(&self, input: &[String]) -> Result<f64, EvalError> {
        self.accept_prob_with_prune(input, PRUNE_EPS)
    }

    pub fn validate(&self, tol: f64) -> Vec<Violation> {
        let mut violations = Vec::new();
        for ((s, sigma), meas) in &self.measurements {
            if meas.operators().iter().any(|m| !m.is_finite()) {
                violations.push(Violation::new(
                    format!("Theta_{{{s},{sigma}}}"),
                    "non-finite entry",
                ));
                continue;
            }
            let residual = meas.completeness_residual();
            if residual > tol {
                violations.push(Violation::new(
                    format!("Theta_{{{s},{sigma}}}"),
                    format!("measurement operators do not satisfy the completeness condition, residual {residual:.1e}"),
                ));
            }
        }
        violations
    }
}
