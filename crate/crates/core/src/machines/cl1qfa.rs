//! One-way QFA with a control language.
//!
//! Each symbol applies a unitary followed by a projective measurement; an
//! input is accepted with the total probability of those outcome
//! histories that the control DFA accepts. The evaluator enumerates
//! histories depth-first, pruning branches killed by a projector.

use std::collections::BTreeMap;

use crate::channels::ProjectiveMeasurement;
use crate::classical::Dfa;
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::machines::{check_unique, clamp_prob, BuildError, EvalError, Violation};
use crate::PRUNE_EPS;

#[derive(Debug, Clone, PartialEq)]
pub struct Cl1Qfa {
    quantum_states: Vec<String>,
    alphabet: Vec<String>,
    initial: String,
    unitaries: BTreeMap<String, ComplexMatrix>,
    measurement: ProjectiveMeasurement,
    control: Dfa,
}

impl Cl1Qfa {
    /// The control DFA's alphabet must equal the measurement's outcome set
    /// (same labels, same order).
    pub fn new(
        quantum_states: Vec<String>,
        alphabet: Vec<String>,
        initial: impl Into<String>,
        unitaries: BTreeMap<String, ComplexMatrix>,
        measurement: ProjectiveMeasurement,
        control: Dfa,
    ) -> Result<Self, BuildError> {
        check_unique(&quantum_states)?;
        check_unique(&alphabet)?;
        let initial = initial.into();
        if !quantum_states.contains(&initial) {
            return Err(BuildError::UnknownState(initial));
        }
        let dim = quantum_states.len();
        for sigma in &alphabet {
            let u = unitaries
                .get(sigma)
                .ok_or_else(|| BuildError::MissingEntry(format!("unitary for symbol {sigma:?}")))?;
            if u.rows() != dim || u.cols() != dim {
                return Err(BuildError::Dimension(format!(
                    "unitary for symbol {sigma:?} is {}x{}, expected {dim}x{dim}",
                    u.rows(),
                    u.cols()
                )));
            }
        }
        for sigma in unitaries.keys() {
            if !alphabet.contains(sigma) {
                return Err(BuildError::UnknownSymbol(sigma.clone()));
            }
        }
        if measurement.dim() != dim {
            return Err(BuildError::Dimension(format!(
                "measurement acts on dimension {}, expected {dim}",
                measurement.dim()
            )));
        }
        if control.alphabet() != measurement.outcomes() {
            return Err(BuildError::Structure(format!(
                "control DFA alphabet {:?} must equal the outcome set {:?}",
                control.alphabet(),
                measurement.outcomes()
            )));
        }
        Ok(Self {
            quantum_states,
            alphabet,
            initial,
            unitaries,
            measurement,
            control,
        })
    }

    pub fn quantum_states(&self) -> &[String] {
        &self.quantum_states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn outcomes(&self) -> &[String] {
        self.measurement.outcomes()
    }

    pub fn initial(&self) -> &str {
        &self.initial
    }

    pub fn unitaries(&self) -> &BTreeMap<String, ComplexMatrix> {
        &self.unitaries
    }

    pub fn measurement(&self) -> &ProjectiveMeasurement {
        &self.measurement
    }

    pub fn control(&self) -> &Dfa {
        &self.control
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

    /// Acceptance probability with an explicit pruning threshold on the
    /// squared norm of a history branch. The default evaluator uses
    /// [`PRUNE_EPS`]; zero retains every branch.
    pub fn accept_prob_with_prune(
        &self,
        input: &[String],
        prune_eps: f64,
    ) -> Result<f64, EvalError> {
        for sigma in input {
            if !self.unitaries.contains_key(sigma) {
                return Err(EvalError::UnknownSymbol(sigma.clone()));
            }
        }
        let psi = ComplexVector::basis(self.dim(), self.initial_index());
        let mut total = 0.0;
        self.branch(&psi, input, self.control.initial(), prune_eps, &mut total);
        Ok(clamp_prob(total))
    }

    fn branch(
        &self,
        psi: &ComplexVector,
        rest: &[String],
        control_state: &str,
        prune_eps: f64,
        total: &mut f64,
    ) {
        let Some((sigma, tail)) = rest.split_first() else {
            if self.control.is_accepting(control_state) {
                *total += psi.norm_sqr();
            }
            return;
        };
        let evolved = self.unitaries[sigma].mul_vec(psi);
        for (outcome, projector) in self
            .measurement
            .outcomes()
            .iter()
            .zip(self.measurement.projectors())
        {
            let collapsed = projector.mul_vec(&evolved);
            if collapsed.norm_sqr() <= prune_eps {
                continue;
            }
            let next = self
                .control
                .step(control_state, outcome)
                .expect("control DFA is total over the outcome alphabet");
            self.branch(&collapsed, tail, next, prune_eps, total);
        }
    }

    pub fn accept_prob(&self, input: &[String]) -> Result<f64, EvalError> {
        self.accept_prob_with_prune(input, PRUNE_EPS)
    }

    pub fn validate(&self, tol: f64) -> Vec<Violation> {
        let mut violations = Vec::new();
        for (sigma, u) in &self.unitaries {
            if !u.is_finite() {
                violations.push(Violation::new(format!("U_{sigma}"), "non-finite entry"));
                continue;
            }
            let residual = u.isometry_residual();
            if residual > tol {
                violations.push(Violation::new(
                    format!("U_{sigma}"),
                    format!("not unitary, residual {residual:.1e}"),
                ));
            }
        }
        for failure in self.measurement.validity_failures(tol) {
            violations.push(Violation::new("M", failure));
        }
        violations
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::TOL;

    fn word(s: &str) -> Vec<String> {
        s.chars().map(|c| c.to_string()).collect()
    }

    #[test]
    fn hadamard_control_fixture_single_symbol() {
        // One history ends in outcome 0: p = ‖P_0 H |0⟩‖² = 1/2.
        let m = fixtures::had_cl();
        assert!((m.accept_prob(&word("a")).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn hadamard_control_fixture_two_symbols() {
        // Full four-history enumeration: p(00) + p(10) = 1/4 + 1/4.
        let m = fixtures::had_cl();
        assert!((m.accept_prob(&word("aa")).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_word_follows_control_language_membership() {
        let m = fixtures::had_cl();
        // The control language (words ending in outcome 0) excludes ε.
        assert_eq!(m.accept_prob(&[]).unwrap(), 0.0);
    }

    #[test]
    fn all_accepting_control_language_gives_total_probability() {
        let mut gen = crate::random::Generator::from_seed(99);
        for _ in 0..5 {
            let mut m = gen.cl1qfa(3, &["a".to_string()], 2, 2);
            m.control = m
                .control
                .with_accepting(m.control.states().to_vec())
                .unwrap();
            for len in 0..4 {
                let input = vec!["a".to_string(); len];
                assert!((m.accept_prob(&input).unwrap() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn pruning_matches_full_enumeration() {
        let m = fixtures::had_cl();
        for input in ["", "a", "aa", "aaaa"] {
            let pruned = m.accept_prob_with_prune(&word(input), PRUNE_EPS).unwrap();
            let full = m.accept_prob_with_prune(&word(input), 0.0).unwrap();
            assert!((pruned - full).abs() < TOL);
        }
        let mut gen = crate::random::Generator::from_seed(7);
        let alphabet = vec!["a".to_string(), "b".to_string()];
        for _ in 0..5 {
            let m = gen.cl1qfa(2, &alphabet, 2, 2);
            let input = gen.word(&alphabet, 4);
            let pruned = m.accept_prob_with_prune(&input, PRUNE_EPS).unwrap();
            let full = m.accept_prob_with_prune(&input, 0.0).unwrap();
            assert!((pruned - full).abs() < TOL);
        }
    }

    #[test]
    fn validate_reports_scaled_unitary() {
        let mut m = fixtures::had_cl();
        let scaled = m.unitaries["a"].scale(crate::linalg::Complex64::new(1.01, 0.0));
        m.unitaries.insert("a".to_string(), scaled);
        let violations = m.validate(TOL);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].component, "U_a");
        assert!(violations[0].message.contains("not unitary"));
    }

    #[test]
    fn control_alphabet_must_match_outcomes() {
        let m = fixtures::had_cl();
        let bad_control = m.control().with_accepting([]).unwrap();
        let renamed = Dfa::new(
            bad_control.states().to_vec(),
            vec!["x".into(), "y".into()],
            bad_control.initial().to_string(),
            [],
            bad_control
                .delta()
                .iter()
                .map(|((s, a), t)| {
                    let a2 = if a == "0" { "x" } else { "y" };
                    ((s.clone(), a2.to_string()), t.clone())
                })
                .collect(),
        )
        .unwrap();
        let err = Cl1Qfa::new(
            m.quantum_states().to_vec(),
            m.alphabet().to_vec(),
            m.initial().to_string(),
            m.unitaries().clone(),
            m.measurement().clone(),
            renamed,
        )
        .unwrap_err();
        assert!(matches!(err, BuildError::Structure(_)));
    }
}
