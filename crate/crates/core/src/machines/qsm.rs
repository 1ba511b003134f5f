//! Quantum sequential machines: transducers assigning amplitudes to
//! (input, state, output, next-state) tuples.
//!
//! A QSM prints an output word with probability
//! `p(y|x) = ‖V_{x_n,y_n} ⋯ V_{x_1,y_1} |s_1⟩‖²` where
//! `V_{σ,ω}[t, s] = δ(σ, s, ω, t)`. It carries no accepting states; the
//! machine that results from assigning some is an ancilla QFA (see
//! [`crate::transforms::qsm_to_ancilla`]).

use std::collections::BTreeMap;

use crate::linalg::{Complex64, ComplexMatrix, ComplexVector};
use crate::machines::{check_unique, BuildError, EvalError, Violation};

#[derive(Debug, Clone, PartialEq)]
pub struct Qsm {
    states: Vec<String>,
    alphabet: Vec<String>,
    output_alphabet: Vec<String>,
    initial: String,
    /// Sparse amplitudes keyed (symbol, source, output, target); missing
    /// entries are zero.
    delta: BTreeMap<(String, String, String, String), Complex64>,
}

impl Qsm {
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        output_alphabet: Vec<String>,
        initial: impl Into<String>,
        delta: BTreeMap<(String, String, String, String), Complex64>,
    ) -> Result<Self, BuildError> {
        check_unique(&states)?;
        check_unique(&alphabet)?;
        check_unique(&output_alphabet)?;
        if output_alphabet.is_empty() {
            return Err(BuildError::Structure("output alphabet must be non-empty".into()));
        }
        let initial = initial.into();
        if !states.contains(&initial) {
            return Err(BuildError::UnknownState(initial));
        }
        for ((sigma, s, omega, t), amp) in &delta {
            if !alphabet.contains(sigma) {
                return Err(BuildError::UnknownSymbol(sigma.clone()));
            }
            if !states.contains(s) {
                return Err(BuildError::UnknownState(s.clone()));
            }
            if !output_alphabet.contains(omega) {
                return Err(BuildError::UnknownOutcome(omega.clone()));
            }
            if !states.contains(t) {
                return Err(BuildError::UnknownState(t.clone()));
            }
            if !amp.re.is_finite() || !amp.im.is_finite() {
                return Err(BuildError::Structure(format!(
                    "non-finite amplitude for ({sigma:?}, {s:?}, {omega:?}, {t:?})"
                )));
            }
        }
        Ok(Self {
            states,
            alphabet,
            output_alphabet,
            initial,
            delta,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn output_alphabet(&self) -> &[String] {
        &self.output_alphabet
    }

    pub fn initial(&self) -> &str {
        &self.initial
    }

    pub fn delta(&self) -> &BTreeMap<(String, String, String, String), Complex64> {
        &self.delta
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn initial_index(&self) -> usize {
        self.states
            .iter()
            .position(|s| s == &self.initial)
            .expect("validated initial state")
    }

    /// The matrix `V_{σ,ω}` with `V[t, s] = δ(σ, s, ω, t)`.
    pub fn transition_operator(&self, symbol: &str, output: &str) -> ComplexMatrix {
        let n = self.dim();
        let mut v = ComplexMatrix::zeros(n, n);
        for (s_idx, s) in self.states.iter().enumerate() {
            for (t_idx, t) in self.states.iter().enumerate() {
                if let Some(&amp) = self.delta.get(&(
                    symbol.to_string(),
                    s.clone(),
                    output.to_string(),
                    t.clone(),
                )) {
                    v.set(t_idx, s_idx, amp);
                }
            }
        }
        v
    }

    /// Probability of printing `output` on `input`; the words must have
    /// equal length.
    pub fn output_prob(&self, input: &[String], output: &[String]) -> Result<f64, EvalError> {
        if input.len() != output.len() {
            return Err(EvalError::LengthMismatch {
                input: input.len(),
                output: output.len(),
            });
        }
        for sigma in input {
            if !self.alphabet.contains(sigma) {
                return Err(EvalError::UnknownSymbol(sigma.clone()));
            }
        }
        for omega in output {
            if !self.output_alphabet.contains(omega) {
                return Err(EvalError::UnknownOutputSymbol(omega.clone()));
            }
        }
        let mut psi = ComplexVector::basis(self.dim(), self.initial_index());
        for (sigma, omega) in input.iter().zip(output) {
            psi = self.transition_operator(sigma, omega).mul_vec(&psi);
        }
        Ok(psi.norm_sqr().clamp(0.0, 1.0))
    }

    /// One violation per symbol breaking the orthogonality condition
    /// `Σ_{ω,t} δ(σ,s,ω,t) δ(σ,s',ω,t)* = [s = s']`.
    pub fn validate(&self, tol: f64) -> Vec<Violation> {
        let mut violations = Vec::new();
        for sigma in &self.alphabet {
            let n = self.dim();
            let mut gram = ComplexMatrix::zeros(n, n);
            for omega in &self.output_alphabet {
                let v = self.transition_operator(sigma, omega);
                gram = gram.add(&v.dagger().mul(&v));
            }
            let residual = gram.distance(&ComplexMatrix::identity(n));
            if residual > tol {
                violations.push(Violation::new(
                    format!("delta_{sigma}"),
                    format!("transition amplitudes for symbol {sigma:?} break the orthogonality condition, residual {residual:.1e}"),
                ));
            }
        }
        violations
    }
}
