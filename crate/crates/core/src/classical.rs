//! Deterministic finite automata with a total transition function.
//!
//! Besides the usual extended-transition semantics, the module provides the
//! matrix-notation evaluator: each symbol `σ` has a 0/1 matrix `A_σ` whose
//! column `j` carries a single 1 in row `i` when `δ(s_j, σ) = s_i`, and
//! `f(x) = η A_{x_n} ⋯ A_{x_1} π` equals 1 exactly when the word is
//! accepted. States and symbols are arbitrary strings; the declaration
//! order fixes the indexing used by every matrix construction.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::linalg::{Complex64, ComplexMatrix, ComplexVector};

#[derive(Debug, Error, PartialEq)]
pub enum DfaError {
    #[error("a DFA needs at least one state")]
    EmptyStates,
    #[error("duplicate state {0:?}")]
    DuplicateState(String),
    #[error("duplicate symbol {0:?}")]
    DuplicateSymbol(String),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("symbol {0:?} not in the alphabet")]
    UnknownSymbol(String),
    #[error("transition missing for state {state:?} on symbol {symbol:?}")]
    MissingTransition { state: String, symbol: String },
}

/// A DFA `(S, Σ, s_1, δ, S_a)`. The accepting set may be empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Dfa {
    states: Vec<String>,
    alphabet: Vec<String>,
    initial: String,
    accepting: BTreeSet<String>,
    delta: BTreeMap<(String, String), String>,
}

impl Dfa {
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        initial: impl Into<String>,
        accepting: impl IntoIterator<Item = String>,
        delta: BTreeMap<(String, String), String>,
    ) -> Result<Self, DfaError> {
        if states.is_empty() {
            return Err(DfaError::EmptyStates);
        }
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(DfaError::DuplicateState(s.clone()));
            }
        }
        for (i, a) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(a) {
                return Err(DfaError::DuplicateSymbol(a.clone()));
            }
        }
        let initial = initial.into();
        if !states.contains(&initial) {
            return Err(DfaError::UnknownState(initial));
        }
        let accepting: BTreeSet<String> = accepting.into_iter().collect();
        for s in &accepting {
            if !states.contains(s) {
                return Err(DfaError::UnknownState(s.clone()));
            }
        }
        for ((s, a), t) in &delta {
            if !states.contains(s) {
                return Err(DfaError::UnknownState(s.clone()));
            }
            if !alphabet.contains(a) {
                return Err(DfaError::UnknownSymbol(a.clone()));
            }
            if !states.contains(t) {
                return Err(DfaError::UnknownState(t.clone()));
            }
        }
        for s in &states {
            for a in &alphabet {
                if !delta.contains_key(&(s.clone(), a.clone())) {
                    return Err(DfaError::MissingTransition {
                        state: s.clone(),
                        symbol: a.clone(),
                    });
                }
            }
        }
        Ok(Self {
            states,
            alphabet,
            initial,
            accepting,
            delta,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn initial(&self) -> &str {
        &self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<String> {
        &self.accepting
    }

    pub fn delta(&self) -> &BTreeMap<(String, String), String> {
        &self.delta
    }

    pub fn state_index(&self, state: &str) -> Option<usize> {
        self.states.iter().position(|s| s == state)
    }

    pub fn symbol_index(&self, symbol: &str) -> Option<usize> {
        self.alphabet.iter().position(|a| a == symbol)
    }

    pub fn is_accepting(&self, state: &str) -> bool {
        self.accepting.contains(state)
    }

    /// Indices of accepting states in declaration order.
    pub fn accepting_indices(&self) -> Vec<usize> {
        self.states
            .iter()
            .enumerate()
            .filter(|(_, s)| self.accepting.contains(*s))
            .map(|(i, _)| i)
            .collect()
    }

    /// Same automaton with a different accepting set.
    pub fn with_accepting(
        &self,
        accepting: impl IntoIterator<Item = String>,
    ) -> Result<Self, DfaError> {
        Self::new(
            self.states.clone(),
            self.alphabet.clone(),
            self.initial.clone(),
            accepting,
            self.delta.clone(),
        )
    }

    /// One step of `δ`.
    pub fn step(&self, state: &str, symbol: &str) -> Result<&str, DfaError> {
        if self.symbol_index(symbol).is_none() {
            return Err(DfaError::UnknownSymbol(symbol.to_string()));
        }
        self.delta
            .get(&(state.to_string(), symbol.to_string()))
            .map(String::as_str)
            .ok_or_else(|| DfaError::UnknownState(state.to_string()))
    }

    /// Extended transition `δ*(s_1, input)`; the empty word stays at the
    /// initial state.
    pub fn run(&self, input: &[String]) -> Result<&str, DfaError> {
        let mut state = self.initial.as_str();
        for a in input {
            state = self.step(state, a)?;
        }
        Ok(state)
    }

    pub fn accepts(&self, input: &[String]) -> Result<bool, DfaError> {
        Ok(self.accepting.contains(self.run(input)?))
    }

    /// The 0/1 matrix `A_σ` with `A_σ[i, j] = 1` iff `δ(s_j, σ) = s_i`.
    /// Every column holds exactly one 1.
    pub fn transition_matrix(&self, symbol: &str) -> Result<ComplexMatrix, DfaError> {
        if self.symbol_index(symbol).is_none() {
            return Err(DfaError::UnknownSymbol(symbol.to_string()));
        }
        let n = self.states.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for (j, s) in self.states.iter().enumerate() {
            let t = self.delta[&(s.clone(), symbol.to_string())].as_str();
            let i = self.state_index(t).expect("validated transition target");
            m.set(i, j, Complex64::ONE);
        }
        Ok(m)
    }

    /// Matrix-notation acceptance: `f(x) = η A_{x_n} ⋯ A_{x_1} π` over 0/1
    /// matrices, returning 1 exactly when the word is accepted.
    pub fn matrix_eval(&self, input: &[String]) -> Result<u8, DfaError> {
        let n = self.states.len();
        let init = self.state_index(&self.initial).expect("validated initial");
        let mut vec = ComplexVector::basis(n, init);
        for a in input {
            vec = self.transition_matrix(a)?.mul_vec(&vec);
        }
        let f: f64 = self
            .accepting_indices()
            .iter()
            .map(|&i| vec.get(i).re)
            .sum();
        Ok(f.round() as u8)
    }
}
