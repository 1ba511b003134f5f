//! Python bindings for the quantum finite automata toolkit.
//!
//! Exposes a `Machine` class wrapping any machine of the JSON interchange
//! format, plus equivalence checking and the decidability length bound.
//! Input words are either plain strings (one symbol per character) or
//! lists of symbol strings.

use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;

use qfa_core::equivalence::{equiv_any, equiv_bound_mo1g, EquivalenceMethod};
use qfa_core::formats::{parse_machine, serialize_machine};
use qfa_core::transforms::{convert_machine, to_mo1g};
use qfa_core::TOL;

fn symbols_from(obj: &Bound<'_, PyAny>) -> PyResult<Vec<String>> {
    if let Ok(word) = obj.extract::<Vec<String>>() {
        return Ok(word);
    }
    if let Ok(s) = obj.extract::<String>() {
        return Ok(s.chars().map(|c| c.to_string()).collect());
    }
    Err(PyTypeError::new_err(
        "expected a string (one symbol per character) or a list of symbol strings",
    ))
}

/// A quantum finite automaton (or DFA / quantum sequential machine).
#[pyclass(frozen)]
struct Machine {
    inner: qfa_core::Machine,
}

#[pymethods]
impl Machine {
    /// Parse a machine from its JSON document; validation failures raise.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = parse_machine(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Self { inner })
    }

    /// Canonical JSON serialization of the machine.
    fn to_json(&self) -> String {
        serialize_machine(&self.inner)
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().as_str()
    }

    #[getter]
    fn input_alphabet(&self) -> Vec<String> {
        self.inner.input_alphabet().to_vec()
    }

    /// Numerical invariant violations; an empty list means valid.
    fn validate(&self) -> Vec<String> {
        self.inner
            .validate(TOL)
            .iter()
            .map(|v| v.to_string())
            .collect()
    }

    /// Acceptance probability of the input word.
    fn accept_prob(&self, input: &Bound<'_, PyAny>) -> PyResult<f64> {
        let word = symbols_from(input)?;
        self.inner
            .accept_prob(&word)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// For a qsm: probability of printing `output` while reading `input`.
    fn output_prob(&self, input: &Bound<'_, PyAny>, output: &Bound<'_, PyAny>) -> PyResult<f64> {
        let qfa_core::Machine::Qsm(m) = &self.inner else {
            return Err(PyValueError::new_err(format!(
                "output_prob applies to qsm machines, not {}",
                self.inner.kind()
            )));
        };
        m.output_prob(&symbols_from(input)?, &symbols_from(output)?)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// Convert along the unique transform path to another kind
    /// (`accepting` is consumed only by the qsm -> ancilla path).
    #[pyo3(signature = (to, accepting=None))]
    fn convert(&self, to: &str, accepting: Option<Vec<String>>) -> PyResult<Self> {
        let kind = to
            .parse()
            .map_err(|e: String| PyValueError::new_err(e))?;
        let converted = convert_machine(&self.inner, kind, accepting.as_deref())
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Self { inner: converted })
    }

    fn __repr__(&self) -> String {
        format!(
            "<Machine kind={} alphabet={:?}>",
            self.inner.kind(),
            self.inner.input_alphabet()
        )
    }
}

/// Result of an equivalence check.
#[pyclass(frozen)]
struct Verdict {
    #[pyo3(get)]
    equivalent: bool,
    #[pyo3(get)]
    counterexample: Option<Vec<String>>,
    #[pyo3(get)]
    prob_left: Option<f64>,
    #[pyo3(get)]
    prob_right: Option<f64>,
    #[pyo3(get)]
    method: String,
    #[pyo3(get)]
    strings_checked: Option<u64>,
    #[pyo3(get)]
    span_dimension: Option<usize>,
    #[pyo3(get)]
    max_residual: f64,
}

#[pymethods]
impl Verdict {
    fn __repr__(&self) -> String {
        if self.equivalent {
            format!("<Verdict equivalent method={}>", self.method)
        } else {
            format!(
                "<Verdict not equivalent counterexample={:?}>",
                self.counterexample
            )
        }
    }
}

/// Decide whether two machines accept every input with the same
/// probability. `method` is "bounded" or "algebraic".
#[pyfunction]
#[pyo3(signature = (left, right, method="bounded", max_len=None))]
fn equivalence(
    left: &Machine,
    right: &Machine,
    method: &str,
    max_len: Option<usize>,
) -> PyResult<Verdict> {
    let method: EquivalenceMethod = method
        .parse()
        .map_err(|e: String| PyValueError::new_err(e))?;
    let verdict = equiv_any(&left.inner, &right.inner, method, max_len)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(Verdict {
        equivalent: verdict.equivalent,
        counterexample: verdict.counterexample,
        prob_left: verdict.prob_left,
        prob_right: verdict.prob_right,
        method: verdict.method.to_string(),
        strings_checked: verdict.strings_checked,
        span_dimension: verdict.span_dimension,
        max_residual: verdict.max_residual,
    })
}

/// The equivalence length bound for a pair of machines (their channel-form
/// state counts `n1`, `n2` give `n1² + n2² − 1`).
#[pyfunction]
fn length_bound(left: &Machine, right: &Machine) -> PyResult<u64> {
    let n1 = to_mo1g(&left.inner)
        .map_err(|e| PyValueError::new_err(e.to_string()))?
        .dim();
    let n2 = to_mo1g(&right.inner)
        .map_err(|e| PyValueError::new_err(e.to_string()))?
        .dim();
    Ok(equiv_bound_mo1g(n1, n2))
}

#[pymodule]
fn qfa_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Machine>()?;
    m.add_class::<Verdict>()?;
    m.add_function(wrap_pyfunction!(equivalence, m)?)?;
    m.add_function(wrap_pyfunction!(length_bound, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
