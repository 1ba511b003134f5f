//! The JSON interchange format for machine descriptions.
//!
//! Every document is a single object with a `kind` discriminator (one of
//! `dfa`, `mo1g`, `cl1qfa`, `qfac`, `qcfa`, `ancilla`, `qsm`) and a
//! mandatory `version: 1`. Complex scalars are two-element arrays
//! `[re, im]`; matrices are row-major arrays of rows; maps keyed by
//! composite indices join the parts with `|`, which is therefore reserved
//! and may not appear in labels. Unknown fields are rejected.
//!
//! Serialization is canonical: object keys are sorted, floats carry 17
//! significant digits (so values round-trip exactly), and two
//! serializations of the same machine are byte-identical. Parsing
//! validates the machine and refuses documents whose numerical invariants
//! fail.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::channels::{GeneralMeasurement, ProjectiveMeasurement, QuantumOperation};
use crate::classical::Dfa;
use crate::linalg::{Complex64, ComplexMatrix};
use crate::machines::{
    AncillaQfa, Cl1Qfa, Machine, Mo1gQfa, Qcfa1, Qfac1, Qsm, Violation, ACCEPT_OUTCOME,
    REJECT_OUTCOME,
};
use crate::TOL;

pub const FORMAT_VERSION: u64 = 1;

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| format!("  - {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("syntax error: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("semantic error: {0}")]
    Semantic(String),
    #[error("invalid machine:\n{}", format_violations(.0))]
    Invalid(Vec<Violation>),
}

fn semantic(msg: impl Into<String>) -> FormatError {
    FormatError::Semantic(msg.into())
}

// ---------------------------------------------------------------------------
// Document schemas
// ---------------------------------------------------------------------------

type ScalarDoc = [f64; 2];
type MatrixDoc = Vec<Vec<ScalarDoc>>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DfaDoc {
    kind: String,
    version: u64,
    states: Vec<String>,
    alphabet: Vec<String>,
    initial: String,
    accepting: Vec<String>,
    delta: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Mo1gDoc {
    kind: String,
    version: u64,
    quantum_states: Vec<String>,
    alphabet: Vec<String>,
    initial: String,
    operations: BTreeMap<String, Vec<MatrixDoc>>,
    accept_projector: MatrixDoc,
}

/// Control DFA nested in a `cl1qfa` document; its alphabet is the outcome
/// set and is not repeated.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ControlDoc {
    states: Vec<String>,
    initial: String,
    accepting: Vec<String>,
    delta: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Cl1QfaDoc {
    kind: String,
    version: u64,
    quantum_states: Vec<String>,
    alphabet: Vec<String>,
    outcomes: Vec<String>,
    initial: String,
    unitaries: BTreeMap<String, MatrixDoc>,
    /// Parallel to `outcomes`.
    projectors: Vec<MatrixDoc>,
    control: ControlDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FinalMeasurementDoc {
    accept: MatrixDoc,
    reject: MatrixDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QfacDoc {
    kind: String,
    version: u64,
    quantum_states: Vec<String>,
    classical_states: Vec<String>,
    alphabet: Vec<String>,
    initial_quantum: String,
    initial_classical: String,
    /// Keyed `"state|symbol"`.
    unitaries: BTreeMap<String, MatrixDoc>,
    /// Keyed `"state|symbol"`.
    classical_delta: BTreeMap<String, String>,
    final_measurements: BTreeMap<String, FinalMeasurementDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QcfaDoc {
    kind: String,
    version: u64,
    quantum_states: Vec<String>,
    classical_states: Vec<String>,
    alphabet: Vec<String>,
    outcomes: Vec<String>,
    initial_quantum: String,
    initial_classical: String,
    /// Keyed `"state|symbol"`; operators parallel to `outcomes`.
    measurements: BTreeMap<String, Vec<MatrixDoc>>,
    /// Keyed `"state|symbol|outcome"`.
    classical_delta: BTreeMap<String, String>,
    accepting: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AncillaDoc {
    kind: String,
    version: u64,
    states: Vec<String>,
    alphabet: Vec<String>,
    output_alphabet: Vec<String>,
    initial: String,
    /// Keyed `"source|symbol|target|output"`; absent entries are zero.
    delta: BTreeMap<String, ScalarDoc>,
    accepting: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QsmDoc {
    kind: String,
    version: u64,
    states: Vec<String>,
    alphabet: Vec<String>,
    output_alphabet: Vec<String>,
    initial: String,
    /// Keyed `"symbol|state|output|target"`; absent entries are zero.
    delta: BTreeMap<String, ScalarDoc>,
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

fn check_labels(what: &str, labels: &[String]) -> Result<(), FormatError> {
    for l in labels {
        if l.is_empty() {
            return Err(semantic(format!("{what} contains an empty label")));
        }
        if l.contains('|') {
            return Err(semantic(format!(
                "{what} label {l:?} contains the reserved character '|'"
            )));
        }
    }
    Ok(())
}

fn scalar_from_doc(doc: ScalarDoc, context: &str) -> Result<Complex64, FormatError> {
    if !doc[0].is_finite() || !doc[1].is_finite() {
        return Err(semantic(format!("{context}: non-finite complex entry")));
    }
    Ok(Complex64::new(doc[0], doc[1]))
}

fn matrix_from_doc(doc: &MatrixDoc, context: &str) -> Result<ComplexMatrix, FormatError> {
    let rows = doc.len();
    if rows == 0 {
        return Err(semantic(format!("{context}: empty matrix")));
    }
    let cols = doc[0].len();
    if cols == 0 {
        return Err(semantic(format!("{context}: matrix with an empty row")));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, row) in doc.iter().enumerate() {
        if row.len() != cols {
            return Err(semantic(format!(
                "{context}: row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        for &entry in row {
            entries.push(scalar_from_doc(entry, context)?);
        }
    }
    Ok(ComplexMatrix::new(rows, cols, entries))
}

fn matrix_to_doc(m: &ComplexMatrix) -> MatrixDoc {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let z = m.get(i, j);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

fn split_key<const N: usize>(key: &str, context: &str) -> Result<[String; N], FormatError> {
    let parts: Vec<&str> = key.split('|').collect();
    if parts.len() != N {
        return Err(semantic(format!(
            "{context}: key {key:?} must have {N} '|'-separated parts"
        )));
    }
    Ok(std::array::from_fn(|i| parts[i].to_string()))
}

fn check_version(version: u64) -> Result<(), FormatError> {
    if version != FORMAT_VERSION {
        return Err(semantic(format!(
            "unsupported version {version}, expected {FORMAT_VERSION}"
        )));
    }
    Ok(())
}

fn dfa_from_parts(
    states: Vec<String>,
    alphabet: Vec<String>,
    initial: String,
    accepting: Vec<String>,
    delta: &BTreeMap<String, String>,
    context: &str,
) -> Result<Dfa, FormatError> {
    let mut map = BTreeMap::new();
    for (key, target) in delta {
        let [s, a] = split_key::<2>(key, context)?;
        map.insert((s, a), target.clone());
    }
    Dfa::new(states, alphabet, initial, accepting, map)
        .map_err(|e| semantic(format!("{context}: {e}")))
}

fn dfa_from_doc(doc: DfaDoc) -> Result<Machine, FormatError> {
    check_version(doc.version)?;
    check_labels("states", &doc.states)?;
    check_labels("alphabet", &doc.alphabet)?;
    let dfa = dfa_from_parts(
        doc.states,
        doc.alphabet,
        doc.initial,
        doc.accepting,
        &doc.delta,
        "delta",
    )?;
    Ok(Machine::Dfa(dfa))
}

fn mo1g_from_doc(doc: Mo1gDoc) -> Result<Machine, FormatError> {
    check_version(doc.version)?;
    check_labels("quantum_states", &doc.quantum_states)?;
    check_labels("alphabet", &doc.alphabet)?;
    let mut operations = BTreeMap::new();
    for (sigma, elements) in &doc.operations {
        if elements.is_empty() {
            return Err(semantic(format!(
                "operation for symbol {sigma:?} has no Kraus elements"
            )));
        }
        let kraus = elements
            .iter()
            .enumerate()
            .map(|(k, m)| matrix_from_doc(m, &format!("operations[{sigma:?}][{k}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let op = QuantumOperation::new(kraus)
            .map_err(|e| semantic(format!("operations[{sigma:?}]: {e}")))?;
        operations.insert(sigma.clone(), op);
    }
    let projector = matrix_from_doc(&doc.accept_projector, "accept_projector")?;
    let machine = Mo1gQfa::new(
        doc.quantum_states,
        doc.alphabet,
        doc.initial,
        operations,
        projector,
    )
    .map_err(|e| semantic(e.to_string()))?;
    Ok(Machine::Mo1g(machine))
}

fn cl1qfa_from_doc(doc: Cl1QfaDoc) -> Result<Machine, FormatError> {
    check_version(doc.version)?;
    check_labels("quantum_states", &doc.quantum_states)?;
    check_labels("alphabet", &doc.alphabet)?;
    check_labels("outcomes", &doc.outcomes)?;
    check_labels("control states", &doc.control.states)?;
    let mut unitaries = BTreeMap::new();
    for (sigma, m) in &doc.unitaries {
        unitaries.insert(
            sigma.clone(),
            matrix_from_doc(m, &format!("unitaries[{sigma:?}]"))?,
        );
    }
    if doc.projectors.len() != doc.outcomes.len() {
        return Err(semantic(format!(
            "{} projectors for {} outcomes",
            doc.projectors.len(),
            doc.outcomes.len()
        )));
    }
    let projectors = doc
        .projectors
        .iter()
        .enumerate()
        .map(|(i, m)| matrix_from_doc(m, &format!("projectors[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let measurement = ProjectiveMeasurement::new(doc.outcomes.clone(), projectors)
        .map_err(|e| semantic(format!("measurement: {e}")))?;
    let control = dfa_from_parts(
        doc.control.states,
        doc.outcomes,
        doc.control.initial,
        doc.control.accepting,
        &doc.control.delta,
        "control.delta",
    )?;
    let machine = Cl1Qfa::new(
        doc.quantum_states,
        doc.alphabet,
        doc.initial,
        unitaries,
        measurement,
        control,
    )
    .map_err(|e| semantic(e.to_string()))?;
    Ok(Machine::Cl1Qfa(machine))
}

fn qfac_from_doc(doc: QfacDoc) -> Result<Machine, FormatError> {
    check_version(doc.version)?;
    check_labels("quantum_states", &doc.quantum_states)?;
    check_labels("classical_states", &doc.classical_states)?;
    check_labels("alphabet", &doc.alphabet)?;
    let mut unitaries = BTreeMap::new();
    for (key, m) in &doc.unitaries {
        let [s, sigma] = split_key::<2>(key, "unitaries")?;
        let matrix = matrix_from_doc(m, &format!("unitaries[{key:?}]"))?;
        unitaries.insert((s, sigma), matrix);
    }
    let classical = dfa_from_parts(
        doc.classical_states,
        doc.alphabet,
        doc.initial_classical,
        Vec::new(),
        &doc.classical_delta,
        "classical_delta",
    )?;
    let mut finals = BTreeMap::new();
    for (s, meas) in &doc.final_measurements {
        let accept = matrix_from_doc(&meas.accept, &format!("final_measurements[{s:?}].accept"))?;
        let reject = matrix_from_doc(&meas.reject, &format!("final_measurements[{s:?}].reject"))?;
        let measurement = ProjectiveMeasurement::new(
            vec![ACCEPT_OUTCOME.to_string(), REJECT_OUTCOME.to_string()],
            vec![accept, reject],
        )
        .map_err(|e| semantic(format!("final_measurements[{s:?}]: {e}")))?;
        finals.insert(s.clone(), measurement);
    }
    let machine = Qfac1::new(
        doc.quantum_states,
        doc.initial_quantum,
        unitaries,
        classical,
        finals,
    )
    .map_err(|e| semantic(e.to_string()))?;
    Ok(Machine::Qfac(machine))
}

fn qcfa_from_doc(doc: QcfaDoc) -> Result<Machine, FormatError> {
    check_version(doc.version)?;
    check_labels("quantum_states", &doc.quantum_states)?;
    check_labels("classical_states", &doc.classical_states)?;
    check_labels("alphabet", &doc.alphabet)?;
    check_labels("outcomes", &doc.outcomes)?;
    let mut measurements = BTreeMap::new();
    for (key, operators) in &doc.measurements {
        let [s, sigma] = split_key::<2>(key, "measurements")?;
        if operators.len() != doc.outcomes.len() {
            return Err(semantic(format!(
                "measurements[{key:?}]: {} operators for {} outcomes",
                operators.len(),
                doc.outcomes.len()
            )));
        }
        let ops = operators
            .iter()
            .enumerate()
            .map(|(i, m)| matrix_from_doc(m, &format!("measurements[{key:?}][{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let meas = GeneralMeasurement::new(doc.outcomes.clone(), ops)
            .map_err(|e| semantic(format!("measurements[{key:?}]: {e}")))?;
        measurements.insert((s, sigma), meas);
    }
    let mut delta = BTreeMap::new();
    for (key, target) in &doc.classical_delta {
        let [s, sigma, c] = split_key::<3>(key, "classical_delta")?;
        delta.insert((s, sigma, c), target.clone());
    }
    let machine = Qcfa1::new(
        doc.quantum_states,
        doc.classical_states,
        doc.alphabet,
        doc.outcomes,
        doc.initial_quantum,
        doc.initial_classical,
        measurements,
        delta,
        doc.accepting,
    )
    .map_err(|e| semantic(e.to_string()))?;
    Ok(Machine::Qcfa(machine))
}

fn ancilla_from_doc(doc: AncillaDoc) -> Result<Machine, FormatError> {
    check_version(doc.version)?;
    check_labels("states", &doc.states)?;
    check_labels("alphabet", &doc.alphabet)?;
    check_labels("output_alphabet", &doc.output_alphabet)?;
    let mut delta = BTreeMap::new();
    for (key, &amp) in &doc.delta {
        let [q, sigma, p, omega] = split_key::<4>(key, "delta")?;
        delta.insert(
            (q, sigma, p, omega),
            scalar_from_doc(amp, &format!("delta[{key:?}]"))?,
        );
    }
    let machine = AncillaQfa::new(
        doc.states,
        doc.alphabet,
        doc.output_alphabet,
        doc.initial,
        delta,
        doc.accepting,
    )
    .map_err(|e| semantic(e.to_string()))?;
    Ok(Machine::Ancilla(machine))
}

fn qsm_from_doc(doc: QsmDoc) -> Result<Machine, FormatError> {
    check_version(doc.version)?;
    check_labels("states", &doc.states)?;
    check_labels("alphabet", &doc.alphabet)?;
    check_labels("output_alphabet", &doc.output_alphabet)?;
    let mut delta = BTreeMap::new();
    for (key, &amp) in &doc.delta {
        let [sigma, s, omega, t] = split_key::<4>(key, "delta")?;
        delta.insert(
            (sigma, s, omega, t),
            scalar_from_doc(amp, &format!("delta[{key:?}]"))?,
        );
    }
    let machine = Qsm::new(
        doc.states,
        doc.alphabet,
        doc.output_alphabet,
        doc.initial,
        delta,
    )
    .map_err(|e| semantic(e.to_string()))?;
    Ok(Machine::Qsm(machine))
}

/// Parse a machine document. The machine is validated before it is
/// returned: numerical invariant violations abort the parse.
///
/// ```
/// let text = r#"{
///     "kind": "dfa",
///     "version": 1,
///     "states": ["s1", "s2"],
///     "alphabet": ["a"],
///     "initial": "s1",
///     "accepting": ["s1"],
///     "delta": {"s1|a": "s2", "s2|a": "s1"}
/// }"#;
/// let machine = qfa_core::formats::parse_machine(text)?;
/// assert_eq!(machine.kind().as_str(), "dfa");
/// assert_eq!(machine.accept_prob(&["a".to_string()])?, 0.0);
/// # Ok::<(), Box<dyn std::error::Error>>(())
/// ```
pub fn parse_machine(text: &str) -> Result<Machine, FormatError> {
    let value: Value = serde_json::from_str(text)?;
    let kind = value
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| semantic("missing or non-string \"kind\" field"))?
        .to_string();
    let machine = match kind.as_str() {
        "dfa" => dfa_from_doc(from_value(value)?),
        "mo1g" => mo1g_from_doc(from_value(value)?),
        "cl1qfa" => cl1qfa_from_doc(from_value(value)?),
        "qfac" => qfac_from_doc(from_value(value)?),
        "qcfa" => qcfa_from_doc(from_value(value)?),
        "ancilla" => ancilla_from_doc(from_value(value)?),
        "qsm" => qsm_from_doc(from_value(value)?),
        other => Err(semantic(format!("unknown machine kind {other:?}"))),
    }?;
    let violations = machine.validate(TOL);
    if !violations.is_empty() {
        return Err(FormatError::Invalid(violations));
    }
    Ok(machine)
}

fn from_value<T: serde::de::DeserializeOwned>(value: Value) -> Result<T, FormatError> {
    serde_json::from_value(value).map_err(|e| semantic(e.to_string()))
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

fn accepting_in_declaration_order<'a>(
    states: &'a [String],
    accepting: impl Fn(&str) -> bool + 'a,
) -> Vec<String> {
    states.iter().filter(|s| accepting(s)).cloned().collect()
}

fn machine_to_value(m: &Machine) -> Value {
    match m {
        Machine::Dfa(a) => serde_json::to_value(DfaDoc {
            kind: "dfa".into(),
            version: FORMAT_VERSION,
            states: a.states().to_vec(),
            alphabet: a.alphabet().to_vec(),
            initial: a.initial().to_string(),
            accepting: accepting_in_declaration_order(a.states(), |s| a.is_accepting(s)),
            delta: a
                .delta()
                .iter()
                .map(|((s, sym), t)| (format!("{s}|{sym}"), t.clone()))
                .collect(),
        }),
        Machine::Mo1g(m) => serde_json::to_value(Mo1gDoc {
            kind: "mo1g".into(),
            version: FORMAT_VERSION,
            quantum_states: m.quantum_states().to_vec(),
            alphabet: m.alphabet().to_vec(),
            initial: m.initial().to_string(),
            operations: m
                .operations()
                .iter()
                .map(|(sigma, op)| {
                    (sigma.clone(), op.kraus().iter().map(matrix_to_doc).collect())
                })
                .collect(),
            accept_projector: matrix_to_doc(m.accept_projector()),
        }),
        Machine::Cl1Qfa(m) => serde_json::to_value(Cl1QfaDoc {
            kind: "cl1qfa".into(),
            version: FORMAT_VERSION,
            quantum_states: m.quantum_states().to_vec(),
            alphabet: m.alphabet().to_vec(),
            outcomes: m.outcomes().to_vec(),
            initial: m.initial().to_string(),
            unitaries: m
                .unitaries()
                .iter()
                .map(|(sigma, u)| (sigma.clone(), matrix_to_doc(u)))
                .collect(),
            projectors: m.measurement().projectors().iter().map(matrix_to_doc).collect(),
            control: ControlDoc {
                states: m.control().states().to_vec(),
                initial: m.control().initial().to_string(),
                accepting: accepting_in_declaration_order(m.control().states(), |s| {
                    m.control().is_accepting(s)
                }),
                delta: m
                    .control()
                    .delta()
                    .iter()
                    .map(|((s, c), t)| (format!("{s}|{c}"), t.clone()))
                    .collect(),
            },
        }),
        Machine::Qfac(m) => serde_json::to_value(QfacDoc {
            kind: "qfac".into(),
            version: FORMAT_VERSION,
            quantum_states: m.quantum_states().to_vec(),
            classical_states: m.classical_states().to_vec(),
            alphabet: m.alphabet().to_vec(),
            initial_quantum: m.initial_quantum().to_string(),
            initial_classical: m.initial_classical().to_string(),
            unitaries: m
                .unitaries()
                .iter()
                .map(|((s, sigma), u)| (format!("{s}|{sigma}"), matrix_to_doc(u)))
                .collect(),
            classical_delta: m
                .classical()
                .delta()
                .iter()
                .map(|((s, sigma), t)| (format!("{s}|{sigma}"), t.clone()))
                .collect(),
            final_measurements: m
                .final_measurements()
                .iter()
                .map(|(s, meas)| {
                    (
                        s.clone(),
                        FinalMeasurementDoc {
                            accept: matrix_to_doc(&meas.projectors()[0]),
                            reject: matrix_to_doc(&meas.projectors()[1]),
                        },
                    )
                })
                .collect(),
        }),
        Machine::Qcfa(m) => serde_json::to_value(QcfaDoc {
            kind: "qcfa".into(),
            version: FORMAT_VERSION,
            quantum_states: m.quantum_states().to_vec(),
            classical_states: m.classical_states().to_vec(),
            alphabet: m.alphabet().to_vec(),
            outcomes: m.outcomes().to_vec(),
            initial_quantum: m.initial_quantum().to_string(),
            initial_classical: m.initial_classical().to_string(),
            measurements: m
                .measurements()
                .iter()
                .map(|((s, sigma), meas)| {
                    (
                        format!("{s}|{sigma}"),
                        meas.operators().iter().map(matrix_to_doc).collect(),
                    )
                })
                .collect(),
            classical_delta: m
                .classical_delta()
                .iter()
                .map(|((s, sigma, c), t)| (format!("{s}|{sigma}|{c}"), t.clone()))
                .collect(),
            accepting: accepting_in_declaration_order(m.classical_states(), |s| {
                m.is_accepting(s)
            }),
        }),
        Machine::Ancilla(m) => serde_json::to_value(AncillaDoc {
            kind: "ancilla".into(),
            version: FORMAT_VERSION,
            states: m.states().to_vec(),
            alphabet: m.alphabet().to_vec(),
            output_alphabet: m.output_alphabet().to_vec(),
            initial: m.initial().to_string(),
            delta: m
                .delta()
                .iter()
                .map(|((q, sigma, p, omega), amp)| {
                    (format!("{q}|{sigma}|{p}|{omega}"), [amp.re, amp.im])
                })
                .collect(),
            accepting: accepting_in_declaration_order(m.states(), |s| {
                m.accepting().contains(s)
            }),
        }),
        Machine::Qsm(m) => serde_json::to_value(QsmDoc {
            kind: "qsm".into(),
            version: FORMAT_VERSION,
            states: m.states().to_vec(),
            alphabet: m.alphabet().to_vec(),
            output_alphabet: m.output_alphabet().to_vec(),
            initial: m.initial().to_string(),
            delta: m
                .delta()
                .iter()
                .map(|((sigma, s, omega, t), amp)| {
                    (format!("{sigma}|{s}|{omega}|{t}"), [amp.re, amp.im])
                })
                .collect(),
        }),
    }
    .expect("document structs serialize infallibly")
}

/// Canonical serialization: sorted keys, 17-significant-digit floats,
/// numeric leaf arrays inline. Byte-identical for equal machines;
/// `parse_machine ∘ serialize_machine` is the identity.
pub fn serialize_machine(m: &Machine) -> String {
    let value = machine_to_value(m);
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out.push('\n');
    out
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_number(n: &serde_json::Number, out: &mut String) {
    if let Some(u) = n.as_u64() {
        out.push_str(&u.to_string());
    } else if let Some(i) = n.as_i64() {
        out.push_str(&i.to_string());
    } else {
        out.push_str(&fmt_float(n.as_f64().expect("JSON numbers fit f64")));
    }
}

fn write_string(s: &str, out: &mut String) {
    out.push_str(&serde_json::to_string(s).expect("strings serialize infallibly"));
}

fn is_scalar(v: &Value) -> bool {
    matches!(v, Value::Null | Value::Bool(_) | Value::Number(_) | Value::String(_))
}

/// Arrays of scalars and arrays of scalar-arrays (complex entries, matrix
/// rows) are rendered on one line.
fn is_inline_array(values: &[Value]) -> bool {
    values.iter().all(is_scalar)
        || values.iter().all(|v| match v {
            Value::Array(inner) => inner.iter().all(is_scalar),
            _ => false,
        })
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => write_number(n, out),
        Value::String(s) => write_string(s, out),
        Value::Array(values) => {
            if values.is_empty() {
                out.push_str("[]");
            } else if is_inline_array(values) {
                out.push('[');
                for (i, item) in values.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(item, indent, out);
                }
                out.push(']');
            } else {
                out.push_str("[\n");
                for (i, item) in values.iter().enumerate() {
                    push_indent(indent + 1, out);
                    write_value(item, indent + 1, out);
                    if i + 1 < values.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                push_indent(indent, out);
                out.push(']');
            }
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
            } else {
                let mut entries: Vec<(&String, &Value)> = map.iter().collect();
                entries.sort_by_key(|(key, _)| key.as_str());
                out.push_str("{\n");
                for (i, (key, item)) in entries.iter().enumerate() {
                    push_indent(indent + 1, out);
                    write_string(key, out);
                    out.push_str(": ");
                    write_value(item, indent + 1, out);
                    if i + 1 < entries.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                push_indent(indent, out);
                out.push('}');
            }
        }
    }
}

fn push_indent(level: usize, out: &mut String) {
    for _ in 0..level {
        out.push_str("  ");
    }
}
