//! Constructive simulations between the automaton models.
//!
//! Each transform builds a machine whose acceptance function equals the
//! source's on every input string. The hybrid-model conversions encode
//! the communication between the quantum and classical components into a
//! controlled operation on the composite space:
//!
//! - a DFA becomes a channel-driven machine with elements
//!   `E_s^σ = |δ(s,σ)⟩⟨s|` ([`dfa_to_mo1g`]),
//! - a control-language machine becomes one on `H_Q ⊗ H_S` with elements
//!   `P_c U_σ ⊗ |δ(s,c)⟩⟨s|` ([`cl1qfa_to_mo1g`]),
//! - a classical-state machine becomes one on `H_S ⊗ H_Q` with elements
//!   `|δ(s,σ)⟩⟨s| ⊗ U_{s,σ}` and projector `Σ_s |s⟩⟨s| ⊗ P_{s,a}`
//!   ([`qfac_to_mo1g`]),
//! - a two-way-communication machine becomes one on `H_Q ⊗ H_S` with
//!   elements `M^c_{s,σ} ⊗ |δ(s,σ,c)⟩⟨s|` ([`qcfa_to_mo1g`]),
//! - ancilla machines and channel-driven machines translate into each
//!   other by reading the Kraus elements as transition amplitudes and
//!   vice versa ([`ancilla_to_mo1g`], [`mo1g_to_ancilla`]),
//! - a quantum sequential machine plus an accepting set is an ancilla
//!   machine ([`qsm_to_ancilla`]),
//! - a control-language machine is a restricted two-way machine
//!   ([`cl1qfa_to_qcfa`]), and every regular language has certainty
//!   constructions in both hybrid models ([`dfa_to_qfac_certainty`],
//!   [`dfa_to_qcfa_certainty`]).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::channels::{GeneralMeasurement, ProjectiveMeasurement, QuantumOperation};
use crate::classical::Dfa;
use crate::linalg::{projector_from_subset, Complex64, ComplexMatrix};
use crate::machines::{
    AncillaQfa, Cl1Qfa, Machine, MachineKind, Mo1gQfa, Qcfa1, Qfac1, Qsm,
};

#[derive(Debug, Error, PartialEq)]
pub enum TransformError {
    #[error("the accept projector is not a diagonal 0/1 projector; only state-subset acceptance can be carried to an ancilla machine")]
    NonSubsetProjector,
    #[error("unknown accepting state {0:?}")]
    UnknownAcceptingState(String),
    #[error("no transform path from {from} to {to}")]
    NoPath { from: MachineKind, to: MachineKind },
}

/// Composite labels `(a,b)` in row-major order; pathological collisions
/// are disambiguated so the label set stays unique.
fn pair_labels(first: &[String], second: &[String]) -> Vec<String> {
    let mut labels = Vec::with_capacity(first.len() * second.len());
    for a in first {
        for b in second {
            labels.push(format!("({a},{b})"));
        }
    }
    for i in 0..labels.len() {
        while labels[..i].contains(&labels[i]) {
            labels[i].push('\'');
        }
    }
    labels
}

/// Channel-form image of a DFA: per symbol, the operation with elements
/// `E_s = |δ(s,σ)⟩⟨s|`. Its acceptance is exactly the DFA's 0/1 value.
pub fn dfa_to_mo1g(a: &Dfa) -> Mo1gQfa {
    let n = a.states().len();
    let mut operations = BTreeMap::new();
    for sigma in a.alphabet() {
        let kraus = a
            .states()
            .iter()
            .map(|s| {
                let target = a.step(s, sigma).expect("total transition function");
                let i = a.state_index(target).expect("known target");
                let j = a.state_index(s).expect("known source");
                ComplexMatrix::basis_outer(n, i, j)
            })
            .collect();
        operations.insert(
            sigma.clone(),
            QuantumOperation::new(kraus).expect("one element per state"),
        );
    }
    let accepting: Vec<String> = a
        .states()
        .iter()
        .filter(|s| a.is_accepting(s))
        .cloned()
        .collect();
    Mo1gQfa::with_accepting_states(
        a.states().to_vec(),
        a.alphabet().to_vec(),
        a.initial().to_string(),
        operations,
        &accepting,
    )
    .expect("image of a valid DFA is structurally valid")
}

/// Simulation of a control-language machine on the composite space
/// `H_Q ⊗ H_S`: per symbol the operation with elements
/// `P_c U_σ ⊗ |δ(s,c)⟩⟨s|` over all outcomes `c` and control states `s`,
/// accepting through `I_Q ⊗ Σ_{s ∈ S_a} |s⟩⟨s|`.
pub fn cl1qfa_to_mo1g(m: &Cl1Qfa) -> Mo1gQfa {
    let control = m.control();
    let dim_q = m.dim();
    let dim_s = control.states().len();
    let labels = pair_labels(m.quantum_states(), control.states());
    let initial_idx = m.initial_index() * dim_s
        + control.state_index(control.initial()).expect("valid initial");

    let mut operations = BTreeMap::new();
    for sigma in m.alphabet() {
        let u = &m.unitaries()[sigma];
        let mut kraus = Vec::with_capacity(m.outcomes().len() * dim_s);
        for (outcome, projector) in m
            .measurement()
            .outcomes()
            .iter()
            .zip(m.measurement().projectors())
        {
            let quantum_part = projector.mul(u);
            for s in control.states() {
                let target = control.step(s, outcome).expect("total control DFA");
                let i = control.state_index(target).expect("known target");
                let j = control.state_index(s).expect("known source");
                kraus.push(quantum_part.tensor(&ComplexMatrix::basis_outer(dim_s, i, j)));
            }
        }
        operations.insert(sigma.clone(), QuantumOperation::new(kraus).expect("non-empty"));
    }

    let projector = ComplexMatrix::identity(dim_q).tensor(
        &projector_from_subset(dim_s, &control.accepting_indices()).expect("indices in range"),
    );
    let initial = labels[initial_idx].clone();
    Mo1gQfa::new(labels, m.alphabet().to_vec(), initial, operations, projector)
        .expect("image of a valid machine is structurally valid")
}

/// Simulation of a classical-state machine on `H_S ⊗ H_Q`: per symbol the
/// composition `(F_σ ⊗ I) ∘ E_σ` collapses to the elements
/// `|δ(s,σ)⟩⟨s| ⊗ U_{s,σ}` (one per classical state); the accept
/// projector is `Σ_s |s⟩⟨s| ⊗ P_{s,a}`.
pub fn qfac_to_mo1g(m: &Qfac1) -> Mo1gQfa {
    let classical = m.classical();
    let dim_s = classical.states().len();
    let dim_q = m.dim();
    let labels = pair_labels(classical.states(), m.quantum_states());
    let initial_idx = classical
        .state_index(classical.initial())
        .expect("valid initial")
        * dim_q
        + m.initial_quantum_index();

    let mut operations = BTreeMap::new();
    for sigma in classical.alphabet() {
        let mut kraus = Vec::with_capacity(dim_s);
        for s in classical.states() {
            let target = classical.step(s, sigma).expect("total transition function");
            let i = classical.state_index(target).expect("known target");
            let j = classical.state_index(s).expect("known source");
            let u = &m.unitaries()[&(s.clone(), sigma.clone())];
            kraus.push(ComplexMatrix::basis_outer(dim_s, i, j).tensor(u));
        }
        operations.insert(sigma.clone(), QuantumOperation::new(kraus).expect("non-empty"));
    }

    let mut projector = ComplexMatrix::zeros(dim_s * dim_q, dim_s * dim_q);
    for (s_idx, s) in classical.states().iter().enumerate() {
        let p_accept = m.final_measurements()[s]
            .projector_for(crate::machines::ACCEPT_OUTCOME)
            .expect("outcome pair checked at construction");
        projector = projector.add(
            &ComplexMatrix::basis_outer(dim_s, s_idx, s_idx).tensor(p_accept),
        );
    }
    let initial = labels[initial_idx].clone();
    Mo1gQfa::new(
        labels,
        classical.alphabet().to_vec(),
        initial,
        operations,
        projector,
    )
    .expect("image of a valid machine is structurally valid")
}

/// Simulation of a two-way-communication machine on `H_Q ⊗ H_S`.
///
/// Of the elements `M^c_{s,σ} ⊗ F^k_{σ,c} E_s`, only those with `k = s`
/// survive (`F^k E_s = [k=s]·|δ(s,σ,c)⟩⟨s|`), so the construction
/// materializes the `|S|·|C|` non-zero elements per symbol.
pub fn qcfa_to_mo1g(m: &Qcfa1) -> Mo1gQfa {
    qcfa_to_mo1g_with(m, false)
}

/// As [`qcfa_to_mo1g`]; with `full_elements` the entire
/// `|S|²·|C|`-element family (including the vanishing products) is
/// materialized for audit.
pub fn qcfa_to_mo1g_with(m: &Qcfa1, full_elements: bool) -> Mo1gQfa {
    let dim_q = m.dim();
    let dim_s = m.classical_states().len();
    let labels = pair_labels(m.quantum_states(), m.classical_states());
    let classical_index = |s: &str| {
        m.classical_states()
            .iter()
            .position(|t| t == s)
            .expect("known classical state")
    };
    let initial_idx =
        m.initial_quantum_index() * dim_s + classical_index(m.initial_classical());

    let mut operations = BTreeMap::new();
    for sigma in m.alphabet() {
        let mut kraus = Vec::new();
        for s in m.classical_states() {
            let meas = &m.measurements()[&(s.clone(), sigma.clone())];
            let j = classical_index(s);
            for (c, operator) in meas.outcomes().iter().zip(meas.operators()) {
                let target = &m.classical_delta()[&(s.clone(), sigma.clone(), c.clone())];
                let i = classical_index(target);
                if full_elements {
                    for (k_idx, _) in m.classical_states().iter().enumerate() {
                        // F^k_{σ,c} E_s = [k=s] |δ(s,σ,c)⟩⟨s|.
                        let classical_part = if k_idx == j {
                            ComplexMatrix::basis_outer(dim_s, i, j)
                        } else {
                            ComplexMatrix::zeros(dim_s, dim_s)
                        };
                        kraus.push(operator.tensor(&classical_part));
                    }
                } else {
                    kraus.push(operator.tensor(&ComplexMatrix::basis_outer(dim_s, i, j)));
                }
            }
        }
        operations.insert(sigma.clone(), QuantumOperation::new(kraus).expect("non-empty"));
    }

    let accepting_indices: Vec<usize> = m
        .classical_states()
        .iter()
        .enumerate()
        .filter(|(_, s)| m.is_accepting(s))
        .map(|(i, _)| i)
        .collect();
    let projector = ComplexMatrix::identity(dim_q)
        .tensor(&projector_from_subset(dim_s, &accepting_indices).expect("indices in range"));
    let initial = labels[initial_idx].clone();
    Mo1gQfa::new(labels, m.alphabet().to_vec(), initial, operations, projector)
        .expect("image of a valid machine is structurally valid")
}

/// An ancilla machine is already channel-driven: per symbol the operation
/// with elements `{V_{σ,ω}}_ω`, same states and accepting set.
pub fn ancilla_to_mo1g(m: &AncillaQfa) -> Mo1gQfa {
    let mut operations = BTreeMap::new();
    for sigma in m.alphabet() {
        operations.insert(
            sigma.clone(),
            m.symbol_operation(sigma).expect("symbol from own alphabet"),
        );
    }
    let accepting: Vec<String> = m
        .states()
        .iter()
        .filter(|s| m.accepting().contains(*s))
        .cloned()
        .collect();
    Mo1gQfa::with_accepting_states(
        m.states().to_vec(),
        m.alphabet().to_vec(),
        m.initial().to_string(),
        operations,
        &accepting,
    )
    .expect("image of a valid machine is structurally valid")
}

/// Read a channel-driven machine's Kraus elements as ancilla transition
/// amplitudes: `δ(q_j, σ, q_i, ω) = ⟨q_i| E_{σ,ω} |q_j⟩` with the output
/// alphabet `{1..k}` for the largest element count `k` (shorter lists are
/// padded with zero operators).
///
/// Requires a state-subset (diagonal 0/1) accept projector, since an
/// ancilla machine accepts by a state set.
pub fn mo1g_to_ancilla(m: &Mo1gQfa) -> Result<AncillaQfa, TransformError> {
    let subset = m.accepting_subset().ok_or(TransformError::NonSubsetProjector)?;
    let k = m
        .operations()
        .values()
        .map(|op| op.kraus().len())
        .max()
        .unwrap_or(1)
        .max(1);
    let outputs: Vec<String> = (1..=k).map(|i| i.to_string()).collect();
    let states = m.quantum_states();
    let mut delta = BTreeMap::new();
    for (sigma, op) in m.operations() {
        for (w, element) in op.kraus().iter().enumerate() {
            for (j, q) in states.iter().enumerate() {
                for (i, p) in states.iter().enumerate() {
                    let amp = element.get(i, j);
                    if amp != Complex64::ZERO {
                        delta.insert(
                            (q.clone(), sigma.clone(), p.clone(), outputs[w].clone()),
                            amp,
                        );
                    }
                }
            }
        }
    }
    let accepting: Vec<String> = subset.iter().map(|&i| states[i].clone()).collect();
    Ok(AncillaQfa::new(
        states.to_vec(),
        m.alphabet().to_vec(),
        outputs,
        m.initial().to_string(),
        delta,
        accepting,
    )
    .expect("image of a valid machine is structurally valid"))
}

/// A quantum sequential machine assigned accepting states is an ancilla
/// machine; the amplitudes are reindexed from `(σ, s, ω, t)` to
/// `(s, σ, t, ω)`.
pub fn qsm_to_ancilla(m: &Qsm, accepting: &[String]) -> Result<AncillaQfa, TransformError> {
    for s in accepting {
        if !m.states().contains(s) {
            return Err(TransformError::UnknownAcceptingState(s.clone()));
        }
    }
    let delta = m
        .delta()
        .iter()
        .map(|((sigma, s, omega, t), &amp)| {
            ((s.clone(), sigma.clone(), t.clone(), omega.clone()), amp)
        })
        .collect();
    Ok(AncillaQfa::new(
        m.states().to_vec(),
        m.alphabet().to_vec(),
        m.output_alphabet().to_vec(),
        m.initial().to_string(),
        delta,
        accepting.to_vec(),
    )
    .expect("image of a valid machine is structurally valid"))
}

/// A control-language machine as a restricted two-way machine: every
/// measurement is `{P_c U_σ}_c` independent of the classical state, and
/// the classical transition ignores the input symbol.
pub fn cl1qfa_to_qcfa(m: &Cl1Qfa) -> Qcfa1 {
    let control = m.control();
    let outcomes: Vec<String> = m.outcomes().to_vec();
    let mut measurements = BTreeMap::new();
    let mut delta = BTreeMap::new();
    for s in control.states() {
        for sigma in m.alphabet() {
            let u = &m.unitaries()[sigma];
            let operators: Vec<ComplexMatrix> = m
                .measurement()
                .projectors()
                .iter()
                .map(|p| p.mul(u))
                .collect();
            measurements.insert(
                (s.clone(), sigma.clone()),
                GeneralMeasurement::new(outcomes.clone(), operators).expect("one per outcome"),
            );
            for c in &outcomes {
                let target = control.step(s, c).expect("total control DFA");
                delta.insert((s.clone(), sigma.clone(), c.clone()), target.to_string());
            }
        }
    }
    Qcfa1::new(
        m.quantum_states().to_vec(),
        control.states().to_vec(),
        m.alphabet().to_vec(),
        outcomes,
        m.initial().to_string(),
        control.initial().to_string(),
        measurements,
        delta,
        control.accepting().iter().cloned(),
    )
    .expect("image of a valid machine is structurally valid")
}

/// Certainty construction: the classical component is the DFA itself
/// (accepting set moved into the measurement assignment), the quantum
/// component a single qubit initialized to `|1⟩` with identity
/// evolutions; accepting classical states measure acceptance on `|1⟩`,
/// the rest on `|0⟩`.
pub fn dfa_to_qfac_certainty(a: &Dfa) -> Qfac1 {
    let classical = a.with_accepting([]).expect("same automaton");
    let mut unitaries = BTreeMap::new();
    for s in classical.states() {
        for sigma in classical.alphabet() {
            unitaries.insert((s.clone(), sigma.clone()), ComplexMatrix::identity(2));
        }
    }
    let p0 = ComplexMatrix::basis_outer(2, 0, 0);
    let p1 = ComplexMatrix::basis_outer(2, 1, 1);
    let mut finals = BTreeMap::new();
    for s in classical.states() {
        let (pa, pr) = if a.is_accepting(s) {
            (p1.clone(), p0.clone())
        } else {
            (p0.clone(), p1.clone())
        };
        finals.insert(
            s.clone(),
            ProjectiveMeasurement::new(vec!["a".into(), "r".into()], vec![pa, pr])
                .expect("valid outcome pair"),
        );
    }
    Qfac1::new(
        vec!["0".into(), "1".into()],
        "1",
        unitaries,
        classical,
        finals,
    )
    .expect("image of a valid DFA is structurally valid")
}

/// Certainty construction with the classical component alone: a
/// one-dimensional quantum part with the trivial single-outcome
/// measurement, so the classical transitions carry the DFA.
pub fn dfa_to_qcfa_certainty(a: &Dfa) -> Qcfa1 {
    let outcomes = vec!["c".to_string()];
    let mut measurements = BTreeMap::new();
    let mut delta = BTreeMap::new();
    for s in a.states() {
        for sigma in a.alphabet() {
            measurements.insert(
                (s.clone(), sigma.clone()),
                GeneralMeasurement::new(outcomes.clone(), vec![ComplexMatrix::identity(1)])
                    .expect("single outcome"),
            );
            let target = a.step(s, sigma).expect("total transition function");
            delta.insert((s.clone(), sigma.clone(), "c".to_string()), target.to_string());
        }
    }
    Qcfa1::new(
        vec!["q1".into()],
        a.states().to_vec(),
        a.alphabet().to_vec(),
        outcomes,
        "q1",
        a.initial().to_string(),
        measurements,
        delta,
        a.accepting().iter().cloned(),
    )
    .expect("image of a valid DFA is structurally valid")
}

/// Channel-form image of any acceptance-carrying machine (everything but
/// a QSM, which has no acceptance semantics until it is assigned
/// accepting states).
pub fn to_mo1g(m: &Machine) -> Result<Mo1gQfa, TransformError> {
    match m {
        Machine::Dfa(a) => Ok(dfa_to_mo1g(a)),
        Machine::Mo1g(m) => Ok(m.clone()),
        Machine::Cl1Qfa(m) => Ok(cl1qfa_to_mo1g(m)),
        Machine::Qfac(m) => Ok(qfac_to_mo1g(m)),
        Machine::Qcfa(m) => Ok(qcfa_to_mo1g(m)),
        Machine::Ancilla(m) => Ok(ancilla_to_mo1g(m)),
        Machine::Qsm(_) => Err(TransformError::NoPath {
            from: MachineKind::Qsm,
            to: MachineKind::Mo1g,
        }),
    }
}

/// Apply the unique transform path between two kinds, if one exists.
/// `accepting` is consumed only by the qsm→ancilla path (default: empty
/// accepting set).
pub fn convert_machine(
    m: &Machine,
    to: MachineKind,
    accepting: Option<&[String]>,
) -> Result<Machine, TransformError> {
    let from = m.kind();
    match (m, to) {
        (_, t) if t == from => Ok(m.clone()),
        (Machine::Dfa(a), MachineKind::Mo1g) => Ok(Machine::Mo1g(dfa_to_mo1g(a))),
        (Machine::Dfa(a), MachineKind::Qfac) => Ok(Machine::Qfac(dfa_to_qfac_certainty(a))),
        (Machine::Dfa(a), MachineKind::Qcfa) => Ok(Machine::Qcfa(dfa_to_qcfa_certainty(a))),
        (Machine::Cl1Qfa(x), MachineKind::Mo1g) => Ok(Machine::Mo1g(cl1qfa_to_mo1g(x))),
        (Machine::Cl1Qfa(x), MachineKind::Qcfa) => Ok(Machine::Qcfa(cl1qfa_to_qcfa(x))),
        (Machine::Qfac(x), MachineKind::Mo1g) => Ok(Machine::Mo1g(qfac_to_mo1g(x))),
        (Machine::Qcfa(x), MachineKind::Mo1g) => Ok(Machine::Mo1g(qcfa_to_mo1g(x))),
        (Machine::Ancilla(x), MachineKind::Mo1g) => Ok(Machine::Mo1g(ancilla_to_mo1g(x))),
        (Machine::Mo1g(x), MachineKind::Ancilla) => Ok(Machine::Ancilla(mo1g_to_ancilla(x)?)),
        (Machine::Qsm(x), MachineKind::Ancilla) => Ok(Machine::Ancilla(qsm_to_ancilla(
            x,
            accepting.unwrap_or(&[]),
        )?)),
        _ => Err(TransformError::NoPath { from, to }),
    }
}
