//! Hand-built machines shared across unit tests.

use std::collections::BTreeMap;

use crate::channels::{GeneralMeasurement, ProjectiveMeasurement};
use crate::classical::Dfa;
use crate::linalg::ComplexMatrix;
use crate::machines::{Cl1Qfa, Qcfa1, Qfac1};

pub(crate) fn hadamard() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real(2, 2, &[h, h, h, -h])
}

/// Two states over {a}; each `a` flips; accepts an even number of `a`s.
pub(crate) fn dfa_even() -> Dfa {
    let mut delta = BTreeMap::new();
    delta.insert(("s1".to_string(), "a".to_string()), "s2".to_string());
    delta.insert(("s2".to_string(), "a".to_string()), "s1".to_string());
    Dfa::new(
        vec!["s1".into(), "s2".into()],
        vec!["a".into()],
        "s1",
        ["s1".to_string()],
        delta,
    )
    .unwrap()
}

/// Single qubit, `U_a = H`, computational-basis measurement, control
/// language "outcome words ending in 0". Accepts every non-empty word
/// with probability exactly 1/2 and the empty word with 0.
pub(crate) fn had_cl() -> Cl1Qfa {
    let measurement = ProjectiveMeasurement::new(
        vec!["0".into(), "1".into()],
        vec![
            ComplexMatrix::basis_outer(2, 0, 0),
            ComplexMatrix::basis_outer(2, 1, 1),
        ],
    )
    .unwrap();
    let mut control_delta = BTreeMap::new();
    for s in ["e0", "e1"] {
        control_delta.insert((s.to_string(), "0".to_string()), "e0".to_string());
        control_delta.insert((s.to_string(), "1".to_string()), "e1".to_string());
    }
    let control = Dfa::new(
        vec!["e1".into(), "e0".into()],
        vec!["0".into(), "1".into()],
        "e1",
        ["e0".to_string()],
        control_delta,
    )
    .unwrap();
    let mut unitaries = BTreeMap::new();
    unitaries.insert("a".to_string(), hadamard());
    Cl1Qfa::new(
        vec!["q1".into(), "q2".into()],
        vec!["a".into()],
        "q1",
        unitaries,
        measurement,
        control,
    )
    .unwrap()
}

/// One qubit measured by {|0⟩⟨0|H, |1⟩⟨1|H}; outcome 0 moves the
/// classical part to an absorbing accepting sink, outcome 1 to an
/// absorbing rejecting sink. Accepts "a" with probability 1/2.
pub(crate) fn coin_qcfa() -> Qcfa1 {
    let m0 = ComplexMatrix::basis_outer(2, 0, 0).mul(&hadamard());
    let m1 = ComplexMatrix::basis_outer(2, 1, 1).mul(&hadamard());
    let outcomes = vec!["0".to_string(), "1".to_string()];
    let classical = vec!["s1".to_string(), "acc".to_string(), "rej".to_string()];
    let mut measurements = BTreeMap::new();
    let mut delta = BTreeMap::new();
    for s in &classical {
        measurements.insert(
            (s.clone(), "a".to_string()),
            GeneralMeasurement::new(outcomes.clone(), vec![m0.clone(), m1.clone()]).unwrap(),
        );
    }
    delta.insert(("s1".to_string(), "a".to_string(), "0".to_string()), "acc".to_string());
    delta.insert(("s1".to_string(), "a".to_string(), "1".to_string()), "rej".to_string());
    for sink in ["acc", "rej"] {
        for c in ["0", "1"] {
            delta.insert((sink.to_string(), "a".to_string(), c.to_string()), sink.to_string());
        }
    }
    Qcfa1::new(
        vec!["q1".into(), "q2".into()],
        classical,
        vec!["a".into()],
        outcomes,
        "q1",
        "s1",
        measurements,
        delta,
        ["acc".to_string()],
    )
    .unwrap()
}

/// The one-qubit certainty construction over the even-parity DFA:
/// initial |1⟩, identity unitaries, accepting classical states measure
/// acceptance on |1⟩, others on |0⟩.
pub(crate) fn qfac_even_parity() -> Qfac1 {
    let dfa = dfa_even();
    let accepting = dfa.accepting().clone();
    let classical = dfa.with_accepting([]).unwrap();
    let mut unitaries = BTreeMap::new();
    for s in classical.states() {
        for a in classical.alphabet() {
            unitaries.insert((s.clone(), a.clone()), ComplexMatrix::identity(2));
        }
    }
    let p0 = ComplexMatrix::basis_outer(2, 0, 0);
    let p1 = ComplexMatrix::basis_outer(2, 1, 1);
    let mut finals = BTreeMap::new();
    for s in classical.states() {
        let (pa, pr) = if accepting.contains(s) {
            (p1.clone(), p0.clone())
        } else {
            (p0.clone(), p1.clone())
        };
        finals.insert(
            s.clone(),
            ProjectiveMeasurement::new(vec!["a".into(), "r".into()], vec![pa, pr]).unwrap(),
        );
    }
    Qfac1::new(vec!["0".into(), "1".into()], "1", unitaries, classical, finals).unwrap()
}

/// A machine whose single-outcome (trivial unitary) measurements make the
/// quantum part irrelevant; the classical transitions follow the
/// even-parity DFA.
pub(crate) fn qcfa_classical_even_parity() -> Qcfa1 {
    let outcomes = vec!["c".to_string()];
    let classical = vec!["s1".to_string(), "s2".to_string()];
    let mut measurements = BTreeMap::new();
    let mut delta = BTreeMap::new();
    for s in &classical {
        measurements.insert(
            (s.clone(), "a".to_string()),
            GeneralMeasurement::new(outcomes.clone(), vec![ComplexMatrix::identity(1)]).unwrap(),
        );
    }
    delta.insert(("s1".to_string(), "a".to_string(), "c".to_string()), "s2".to_string());
    delta.insert(("s2".to_string(), "a".to_string(), "c".to_string()), "s1".to_string());
    Qcfa1::new(
        vec!["q1".into()],
        classical,
        vec!["a".into()],
        outcomes,
        "q1",
        "s1",
        measurements,
        delta,
        ["s1".to_string()],
    )
    .unwrap()
}
