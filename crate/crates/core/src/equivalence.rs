//! Equivalence checking: same acceptance probability on every input.
//!
//! Two routes are provided and cross-checked:
//!
//! - [`equiv_bounded`] enumerates every string up to the decidability
//!   bound `n₁² + n₂² − 1` (for machines with `n₁` and `n₂` states) in
//!   length-then-lexicographic order and compares acceptance pointwise.
//!   For hybrid machines converted through [`crate::transforms`], the
//!   bound becomes `(k₁n₁)² + (k₂n₂)² − 1` in the component sizes.
//! - [`equiv_algebraic`] decides equivalence in polynomial time by span
//!   closure: each machine is a linear system on its vectorized density
//!   operators, and the machines are equivalent iff the acceptance
//!   difference functional vanishes on the reachable span of the joined
//!   system, whose dimension is at most `n₁² + n₂²`.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::linalg::{Complex64, ComplexMatrix};
use crate::machines::{Machine, MachineKind, Mo1gQfa};
use crate::transforms::to_mo1g;
use crate::TOL;

/// Refuse bounded enumeration beyond this many strings; the algebraic
/// method handles those instances.
pub const ENUM_LIMIT: u64 = 10_000_000;

/// Rank-revealing threshold for span membership in the algebraic method.
pub const SPAN_TOL: f64 = 1e-10;

/// Discrepancies at or below this are indistinguishable from float noise
/// at bound-length products; larger (but sub-[`TOL`]) residuals are
/// surfaced as "equivalent within tolerance".
pub const RESIDUAL_NOTE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum EquivError {
    #[error("the machines have different input alphabets: {left:?} vs {right:?}")]
    AlphabetMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },
    #[error("bounded enumeration would visit {strings} strings (limit {ENUM_LIMIT}); use the algebraic method")]
    EnumerationTooLarge { strings: u128 },
    #[error("machines of kind {0} are not probability acceptors")]
    UnsupportedKind(MachineKind),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivalenceMethod {
    Bounded,
    Algebraic,
}

impl fmt::Display for EquivalenceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivalenceMethod::Bounded => f.write_str("bounded"),
            EquivalenceMethod::Algebraic => f.write_str("algebraic"),
        }
    }
}

impl std::str::FromStr for EquivalenceMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bounded" => Ok(EquivalenceMethod::Bounded),
            "algebraic" => Ok(EquivalenceMethod::Algebraic),
            other => Err(format!("unknown method {other:?} (expected bounded or algebraic)")),
        }
    }
}

/// The outcome of an equivalence check.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    /// Witness string, present exactly when not equivalent.
    pub counterexample: Option<Vec<String>>,
    pub prob_left: Option<f64>,
    pub prob_right: Option<f64>,
    pub method: EquivalenceMethod,
    /// Strings compared (bounded method).
    pub strings_checked: Option<u64>,
    /// Dimension of the reachable span (algebraic method).
    pub span_dimension: Option<usize>,
    /// Largest sub-tolerance discrepancy observed while concluding
    /// equivalence.
    pub max_residual: f64,
}

impl EquivalenceVerdict {
    /// True when the machines were found equivalent but some string showed
    /// a discrepancy above float noise (still within [`TOL`]).
    pub fn within_tolerance_only(&self) -> bool {
        self.equivalent && self.max_residual > RESIDUAL_NOTE_THRESHOLD
    }
}

/// Equivalence bound for two channel-driven machines with `n1` and `n2`
/// states: strings longer than `n1² + n2² − 1` cannot separate them.
pub fn equiv_bound_mo1g(n1: usize, n2: usize) -> u64 {
    let n1 = n1 as u64;
    let n2 = n2 as u64;
    n1 * n1 + n2 * n2 - 1
}

/// Equivalence bound for two hybrid machines with `k_i` classical and
/// `n_i` quantum states: `(k1·n1)² + (k2·n2)² − 1`.
pub fn equiv_bound_hybrid(k1: usize, n1: usize, k2: usize, n2: usize) -> u64 {
    equiv_bound_mo1g(k1 * n1, k2 * n2)
}

fn check_alphabets(a1: &[String], a2: &[String]) -> Result<(), EquivError> {
    if a1 != a2 {
        return Err(EquivError::AlphabetMismatch {
            left: a1.to_vec(),
            right: a2.to_vec(),
        });
    }
    Ok(())
}

/// Number of strings of length at most `max_len` over an alphabet of the
/// given size.
fn string_count(alphabet_size: usize, max_len: usize) -> u128 {
    let mut total: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 0..=max_len {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(alphabet_size as u128);
    }
    total
}

struct BoundedSearch<'a> {
    m1: &'a Mo1gQfa,
    m2: &'a Mo1gQfa,
    alphabet: &'a [String],
    strings_checked: u64,
    max_residual: f64,
}

struct Counterexample {
    word: Vec<String>,
    prob_left: f64,
    prob_right: f64,
}

impl<'a> BoundedSearch<'a> {
    fn leaf(&mut self, prefix: &[String], rho1: &ComplexMatrix, rho2: &ComplexMatrix) -> Option<Counterexample> {
        self.strings_checked += 1;
        let p1 = self.m1.accept_projector().mul(rho1).trace().re.clamp(0.0, 1.0);
        let p2 = self.m2.accept_projector().mul(rho2).trace().re.clamp(0.0, 1.0);
        let diff = (p1 - p2).abs();
        if diff > TOL {
            return Some(Counterexample {
                word: prefix.to_vec(),
                prob_left: p1,
                prob_right: p2,
            });
        }
        self.max_residual = self.max_residual.max(diff);
        None
    }

    /// Depth-first over the strings of exactly `remaining` more symbols,
    /// visiting extensions in alphabet order.
    fn search(
        &mut self,
        rho1: &ComplexMatrix,
        rho2: &ComplexMatrix,
        remaining: usize,
        prefix: &mut Vec<String>,
    ) -> Option<Counterexample> {
        if remaining == 0 {
            return self.leaf(prefix, rho1, rho2);
        }
        for sigma in self.alphabet {
            let next1 = self.m1.operations()[sigma]
                .apply_matrix(rho1)
                .expect("dimensions fixed at construction");
            let next2 = self.m2.operations()[sigma]
                .apply_matrix(rho2)
                .expect("dimensions fixed at construction");
            prefix.push(sigma.clone());
            let outcome = self.search(&next1, &next2, remaining - 1, prefix);
            prefix.pop();
            if outcome.is_some() {
                return outcome;
            }
        }
        None
    }
}

/// Decide equivalence by checking every string of length at most
/// `max_len` (default: the `n₁² + n₂² − 1` bound) in
/// length-then-lexicographic order. Refuses instances whose enumeration
/// exceeds [`ENUM_LIMIT`] strings.
pub fn equiv_bounded(
    m1: &Mo1gQfa,
    m2: &Mo1gQfa,
    max_len: Option<usize>,
) -> Result<EquivalenceVerdict, EquivError> {
    check_alphabets(m1.alphabet(), m2.alphabet())?;
    let bound = max_len.unwrap_or(equiv_bound_mo1g(m1.dim(), m2.dim()) as usize);
    let count = string_count(m1.alphabet().len(), bound);
    if count > u128::from(ENUM_LIMIT) {
        return Err(EquivError::EnumerationTooLarge { strings: count });
    }

    let mut search = BoundedSearch {
        m1,
        m2,
        alphabet: m1.alphabet(),
        strings_checked: 0,
        max_residual: 0.0,
    };
    let rho1 = m1.initial_state().into_matrix();
    let rho2 = m2.initial_state().into_matrix();
    let mut prefix = Vec::new();
    for length in 0..=bound {
        if let Some(Counterexample {
            word,
            prob_left,
            prob_right,
        }) = search.search(&rho1, &rho2, length, &mut prefix)
        {
            let strings_checked = search.strings_checked;
            return Ok(EquivalenceVerdict {
                equivalent: false,
                counterexample: Some(word),
                prob_left: Some(prob_left),
                prob_right: Some(prob_right),
                method: EquivalenceMethod::Bounded,
                strings_checked: Some(strings_checked),
                span_dimension: None,
                max_residual: search.max_residual,
            });
        }
    }
    Ok(EquivalenceVerdict {
        equivalent: true,
        counterexample: None,
        prob_left: None,
        prob_right: None,
        method: EquivalenceMethod::Bounded,
        strings_checked: Some(search.strings_checked),
        span_dimension: None,
        max_residual: search.max_residual,
    })
}

/// The joined linear system: vectorized density operators of both
/// machines side by side.
struct JoinedSystem<'a> {
    m1: &'a Mo1gQfa,
    m2: &'a Mo1gQfa,
    n1: usize,
    n2: usize,
}

impl<'a> JoinedSystem<'a> {
    fn dim(&self) -> usize {
        self.n1 * self.n1 + self.n2 * self.n2
    }

    fn initial(&self) -> Vec<Complex64> {
        let mut v = Vec::with_capacity(self.dim());
        v.extend_from_slice(self.m1.initial_state().matrix().entries());
        v.extend_from_slice(self.m2.initial_state().matrix().entries());
        v
    }

    fn split(&self, v: &[Complex64]) -> (ComplexMatrix, ComplexMatrix) {
        let cut = self.n1 * self.n1;
        (
            ComplexMatrix::new(self.n1, self.n1, v[..cut].to_vec()),
            ComplexMatrix::new(self.n2, self.n2, v[cut..].to_vec()),
        )
    }

    fn apply(&self, symbol: &str, v: &[Complex64]) -> Vec<Complex64> {
        let (rho1, rho2) = self.split(v);
        let out1 = self.m1.operations()[symbol]
            .apply_matrix(&rho1)
            .expect("dimensions fixed at construction");
        let out2 = self.m2.operations()[symbol]
            .apply_matrix(&rho2)
            .expect("dimensions fixed at construction");
        let mut out = Vec::with_capacity(self.dim());
        out.extend_from_slice(out1.entries());
        out.extend_from_slice(out2.entries());
        out
    }

    /// Acceptance probabilities carried by a reached vector.
    fn probabilities(&self, v: &[Complex64]) -> (f64, f64) {
        let (rho1, rho2) = self.split(v);
        (
            self.m1.accept_projector().mul(&rho1).trace().re,
            self.m2.accept_projector().mul(&rho2).trace().re,
        )
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Decide equivalence by span closure over the reachable vectorized
/// states of the joined system. Polynomial in the state counts;
/// independent of the bounded search.
pub fn equiv_algebraic(m1: &Mo1gQfa, m2: &Mo1gQfa) -> Result<EquivalenceVerdict, EquivError> {
    check_alphabets(m1.alphabet(), m2.alphabet())?;
    let system = JoinedSystem {
        m1,
        m2,
        n1: m1.dim(),
        n2: m2.dim(),
    };

    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut max_residual = 0.0f64;
    let mut queue: VecDeque<(Vec<String>, Vec<Complex64>)> = VecDeque::new();
    queue.push_back((Vec::new(), system.initial()));

    while let Some((word, v)) = queue.pop_front() {
        // Rank-revealing orthogonalization against the current basis.
        let mut residual = v.clone();
        for b in &basis {
            let coeff = inner(b, &residual);
            for (r, e) in residual.iter_mut().zip(b) {
                *r -= coeff * e;
            }
        }
        if norm(&residual) <= SPAN_TOL {
            continue;
        }
        // New span direction reached by `word`: the acceptance-difference
        // functional must vanish on it.
        let (p1, p2) = system.probabilities(&v);
        let p1 = p1.clamp(0.0, 1.0);
        let p2 = p2.clamp(0.0, 1.0);
        let diff = (p1 - p2).abs();
        if diff > TOL {
            return Ok(EquivalenceVerdict {
                equivalent: false,
                counterexample: Some(word),
                prob_left: Some(p1),
                prob_right: Some(p2),
                method: EquivalenceMethod::Algebraic,
                strings_checked: None,
                span_dimension: Some(basis.len() + 1),
                max_residual,
            });
        }
        max_residual = max_residual.max(diff);
        let scale = Complex64::new(1.0 / norm(&residual), 0.0);
        let unit: Vec<Complex64> = residual.iter().map(|z| z * scale).collect();
        basis.push(unit);
        debug_assert!(basis.len() <= system.dim(), "span closure exceeded the dimension bound");
        for sigma in m1.alphabet() {
            let mut next_word = word.clone();
            next_word.push(sigma.clone());
            queue.push_back((next_word, system.apply(sigma, &v)));
        }
    }

    Ok(EquivalenceVerdict {
        equivalent: true,
        counterexample: None,
        prob_left: None,
        prob_right: None,
        method: EquivalenceMethod::Algebraic,
        strings_checked: None,
        span_dimension: Some(basis.len()),
        max_residual,
    })
}

/// Decide equivalence for any two probability-accepting machines (all
/// kinds except QSM, which carries no acceptance semantics, and plain
/// DFAs, which are not probability acceptors): both are converted to
/// channel form, so hybrid machines get the `(k·n)²` bound of their
/// component sizes automatically.
pub fn equiv_any(
    m1: &Machine,
    m2: &Machine,
    method: EquivalenceMethod,
    max_len: Option<usize>,
) -> Result<EquivalenceVerdict, EquivError> {
    for m in [m1, m2] {
        if matches!(m.kind(), MachineKind::Qsm | MachineKind::Dfa) {
            return Err(EquivError::UnsupportedKind(m.kind()));
        }
    }
    check_alphabets(m1.input_alphabet(), m2.input_alphabet())?;
    let c1 = to_mo1g(m1).expect("kind checked above");
    let c2 = to_mo1g(m2).expect("kind checked above");
    match method {
        EquivalenceMethod::Bounded => equiv_bounded(&c1, &c2, max_len),
        EquivalenceMethod::Algebraic => equiv_algebraic(&c1, &c2),
    }
}
