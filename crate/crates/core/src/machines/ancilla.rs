//! Ancilla QFA: a QFA that writes an output symbol at every step.
//!
//! The transition amplitudes `δ(q, σ, p, ω)` must make every stacked
//! operator `V_σ = Σ_ω V_{σ,ω} ⊗ |ω⟩` an isometry, which is equivalent to
//! the orthogonality condition
//! `Σ_{p,ω} δ(q₁,σ,p,ω)* δ(q₂,σ,p,ω) = [q₁ = q₂]`.
//! Since the output tape is never read, scanning a symbol evolves the
//! state by the quantum operation with elements `{V_{σ,ω}}_ω`, and
//! acceptance is `Tr(P_{Q_a} ρ_final)`.

use std::collections::{BTreeMap, BTreeSet};

use crate::channels::QuantumOperation;
use crate::linalg::{projector_from_subset, Complex64, ComplexMatrix, DensityOperator};
use crate::machines::{check_unique, clamp_prob, BuildError, EvalError, Violation};

#[derive(Debug, Clone, PartialEq)]
pub struct AncillaQfa {
    states: Vec<String>,
    alphabet: Vec<String>,
    output_alphabet: Vec<String>,
    initial: String,
    /// Sparse amplitudes keyed (source, symbol, target, output); missing
    /// entries are zero.
    delta: BTreeMap<(String, String, String, String), Complex64>,
    accepting: BTreeSet<String>,
}

impl AncillaQfa {
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        output_alphabet: Vec<String>,
        initial: impl Into<String>,
        delta: BTreeMap<(String, String, String, String), Complex64>,
        accepting: impl IntoIterator<Item = String>,
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
        let accepting: BTreeSet<String> = accepting.into_iter().collect();
        for s in &accepting {
            if !states.contains(s) {
                return Err(BuildError::UnknownState(s.clone()));
            }
        }
        for ((q, sigma, p, omega), amp) in &delta {
            if !states.contains(q) {
                return Err(BuildError::UnknownState(q.clone()));
            }
            if !alphabet.contains(sigma) {
                return Err(BuildError::UnknownSymbol(sigma.clone()));
            }
            if !states.contains(p) {
                return Err(BuildError::UnknownState(p.clone()));
            }
            if !output_alphabet.contains(omega) {
                return Err(BuildError::UnknownOutcome(omega.clone()));
            }
            if !amp.re.is_finite() || !amp.im.is_finite() {
                return Err(BuildError::Structure(format!(
                    "non-finite amplitude for ({q:?}, {sigma:?}, {p:?}, {omega:?})"
                )));
            }
        }
        Ok(Self {
            states,
            alphabet,
            output_alphabet,
            initial,
            delta,
            accepting,
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

    pub fn accepting(&self) -> &BTreeSet<String> {
        &self.accepting
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

    pub fn accepting_indices(&self) -> Vec<usize> {
        self.states
            .iter()
            .enumerate()
            .filter(|(_, s)| self.accepting.contains(*s))
            .map(|(i, _)| i)
            .collect()
    }

    /// The matrix `V_{σ,ω}` with `V[i, j] = δ(q_j, σ, q_i, ω)`.
    pub fn transition_operator(&self, symbol: &str, output: &str) -> ComplexMatrix {
        let n = self.dim();
        let mut v = ComplexMatrix::zeros(n, n);
        for (j, q) in self.states.iter().enumerate() {
            for (i, p) in self.states.iter().enumerate() {
                if let Some(&amp) = self.delta.get(&(
                    q.clone(),
                    symbol.to_string(),
                    p.clone(),
                    output.to_string(),
                )) {
                    v.set(i, j, amp);
                }
            }
        }
        v
    }

    /// The stacked operator `V_σ = Σ_ω V_{σ,ω} ⊗ |ω⟩` as a
    /// `(|Q|·|Ω|) × |Q|` matrix, row index `(i, ω) ↦ i·|Ω| + ω`.
    pub fn stacked_operator(&self, symbol: &str) -> ComplexMatrix {
        let n = self.dim();
        let k = self.output_alphabet.len();
        let mut v = ComplexMatrix::zeros(n * k, n);
        for (w, omega) in self.output_alphabet.iter().enumerate() {
            let block = self.transition_operator(symbol, omega);
            for i in 0..n {
                for j in 0..n {
                    v.set(i * k + w, j, block.get(i, j));
                }
            }
        }
        v
    }

    /// The per-symbol quantum operation with elements `{V_{σ,ω}}_ω`.
    pub fn symbol_operation(&self, symbol: &str) -> Result<QuantumOperation, EvalError> {
        if !self.alphabet.contains(&symbol.to_string()) {
            return Err(EvalError::UnknownSymbol(symbol.to_string()));
        }
        let kraus = self
            .output_alphabet
            .iter()
            .map(|omega| self.transition_operator(symbol, omega))
            .collect();
        Ok(QuantumOperation::new(kraus).expect("non-empty output alphabet"))
    }

    pub fn accept_prob_raw(&self, input: &[String]) -> Result<f64, EvalError> {
        let mut rho = DensityOperator::pure_basis(self.dim(), self.initial_index());
        for sigma in input {
            let op = self.symbol_operation(sigma)?;
            rho = op.apply(&rho).expect("dimensions agree by construction");
        }
        let projector = projector_from_subset(self.dim(), &self.accepting_indices())
            .expect("accepting indices are in range");
        Ok(projector.mul(rho.matrix()).trace().re)
    }

    pub fn accept_prob(&self, input: &[String]) -> Result<f64, EvalError> {
        self.accept_prob_raw(input).map(clamp_prob)
    }

    /// One violation per symbol whose stacked operator is not an isometry,
    /// i.e. whose amplitudes break the orthogonality condition.
    pub fn validate(&self, tol: f64) -> Vec<Violation> {
        let mut violations = Vec::new();
        for sigma in &self.alphabet {
            let residual = self.stacked_operator(sigma).isometry_residual();
            if residual > tol {
                violations.push(Violation::new(
                    format!("V_{sigma}"),
                    format!("transition amplitudes for symbol {sigma:?} do not form an isometry, residual {residual:.1e}"),
                ));
            }
        }
        violations
    }
}
