//! Python bindings. Exact quantities come back as `fractions.Fraction`;
//! ε arguments accept a `Fraction`, an int, or a `"p/q"` string.

use std::sync::Arc;

use mdshash_core::bounds::{self, BoundReport, BoundValue, ThresholdSet};
use mdshash_core::code::{self, GenericCode};
use mdshash_core::family::{
    self, EpsilonReport, MeasureOptions, RangeGroup, Strategy, DEFAULT_BUDGET,
};
use mdshash_core::field::FiniteField;
use mdshash_core::rational::{format_ratio, parse_ratio};
use mdshash_core::{BigRational, Error, Kind};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(
    mdshash,
    TooLargeError,
    PyException,
    "Enumeration exceeds the configured budget."
);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::TooLarge { .. } => TooLargeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for mdshash_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn fraction<'py>(py: Python<'py>, r: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((format_ratio(r),))
}

fn eps_arg(obj: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    if obj.is_instance_of::<pyo3::types::PyFloat>() {
        return Err(PyValueError::new_err(
            "eps must be exact: pass a Fraction or a \"p/q\" string",
        ));
    }
    parse_ratio(&obj.str()?.to_cow()?).py()
}

fn kind_arg(s: &str) -> PyResult<Kind> {
    s.parse().py()
}

fn group_arg(s: Option<&str>) -> PyResult<Option<RangeGroup>> {
    match s {
        None => Ok(None),
        Some("zm") => Ok(Some(RangeGroup::Cyclic)),
        Some("gf") => Ok(Some(RangeGroup::Field)),
        Some(other) => Err(PyValueError::new_err(format!(
            "unknown group `{other}` (expected zm or gf)"
        ))),
    }
}

#[pyclass(name = "Field", frozen)]
struct PyField(FiniteField);

#[pymethods]
impl PyField {
    #[new]
    fn new(q: u64) -> PyResult<Self> {
        FiniteField::new(q).map(PyField).py()
    }

    #[getter]
    fn order(&self) -> u32 {
        self.0.order()
    }

    #[getter]
    fn characteristic(&self) -> u32 {
        self.0.characteristic()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.0.degree()
    }

    /// Coefficients of the defining polynomial, constant term first.
    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.0.modulus().to_vec()
    }

    fn add(&self, a: u32, b: u32) -> PyResult<u32> {
        self.0.check(a).and(self.0.check(b)).py()?;
        Ok(self.0.add(a, b))
    }

    fn sub(&self, a: u32, b: u32) -> PyResult<u32> {
        self.0.check(a).and(self.0.check(b)).py()?;
        Ok(self.0.sub(a, b))
    }

    fn mul(&self, a: u32, b: u32) -> PyResult<u32> {
        self.0.check(a).and(self.0.check(b)).py()?;
        Ok(self.0.mul(a, b))
    }

    fn neg(&self, a: u32) -> PyResult<u32> {
        self.0.check(a).py()?;
        Ok(self.0.neg(a))
    }

    fn inv(&self, a: u32) -> PyResult<u32> {
        self.0.check(a).and_then(|_| self.0.inv(a)).py()
    }

    fn pow(&self, a: u32, k: u64) -> PyResult<u32> {
        self.0.check(a).py()?;
        Ok(self.0.pow(a, k))
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.0.order())
    }
}

#[pyclass(name = "LinearCode", frozen)]
struct PyLinearCode(code::LinearCode);

#[pymethods]
impl PyLinearCode {
    #[new]
    fn new(q: u64, generator: Vec<Vec<u32>>) -> PyResult<Self> {
        let field = Arc::new(FiniteField::new(q).py()?);
        code::LinearCode::new(field, generator)
            .map(PyLinearCode)
            .py()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.0.q()
    }

    #[getter]
    fn length(&self) -> usize {
        self.0.length()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn generator(&self) -> Vec<Vec<u32>> {
        self.0.generator().to_vec()
    }

    fn encode(&self, message: Vec<u32>) -> PyResult<Vec<u32>> {
        if message.len() != self.0.dim() {
            return Err(PyValueError::new_err(format!(
                "message must have {} symbols",
                self.0.dim()
            )));
        }
        for &x in &message {
            self.0.field().check(x).py()?;
        }
        Ok(self.0.encode(&message))
    }

    /// All codewords in message order, refusing more than `limit`.
    #[pyo3(signature = (limit = code::DEFAULT_CODEWORD_BUDGET))]
    fn codewords(&self, limit: u128) -> PyResult<Vec<Vec<u32>>> {
        self.0.codewords(limit).py()
    }

    fn contains(&self, word: Vec<u32>) -> bool {
        self.0.contains(&word)
    }

    fn min_distance(&self) -> PyResult<usize> {
        self.0.min_distance().py()
    }

    fn is_mds(&self) -> PyResult<bool> {
        self.0.is_mds().py()
    }

    fn __repr__(&self) -> String {
        format!(
            "LinearCode(q={}, n={}, k={})",
            self.0.q(),
            self.0.length(),
            self.0.dim()
        )
    }
}

#[pyclass(name = "HashFamily", frozen)]
struct PyHashFamily(family::HashFamily);

#[pymethods]
impl PyHashFamily {
    /// `rows[i][a]` is h_i(a).
    #[new]
    #[pyo3(signature = (rows, m, group = None))]
    fn new(rows: Vec<Vec<u32>>, m: u32, group: Option<&str>) -> PyResult<Self> {
        family::HashFamily::from_rows(&rows, m, group_arg(group)?)
            .map(PyHashFamily)
            .py()
    }

    #[getter]
    fn funcs(&self) -> usize {
        self.0.funcs()
    }

    #[getter]
    fn domain(&self) -> usize {
        self.0.domain()
    }

    #[getter]
    fn range(&self) -> u32 {
        self.0.range()
    }

    #[getter]
    fn group(&self) -> Option<&'static str> {
        self.0.group().map(RangeGroup::as_str)
    }

    fn rows(&self) -> Vec<Vec<u32>> {
        self.0.rows()
    }

    fn is_balanced(&self) -> bool {
        self.0.is_balanced()
    }

    /// Exact worst-case ε for `kind` in {"u", "du", "su"}.
    #[pyo3(signature = (kind, budget = DEFAULT_BUDGET, strategy = "auto"))]
    fn measure<'py>(
        &self,
        py: Python<'py>,
        kind: &str,
        budget: u128,
        strategy: &str,
    ) -> PyResult<Bound<'py, PyDict>> {
        let strategy = match strategy {
            "auto" => Strategy::Auto,
            "pairwise" => Strategy::Pairwise,
            "subsets" => Strategy::Subsets,
            other => return Err(PyValueError::new_err(format!("unknown strategy `{other}`"))),
        };
        let opts = MeasureOptions { budget, strategy };
        let report = py.detach(|| family::measure(&self.0, kind_arg(kind)?, &opts).py())?;
        epsilon_dict(py, &report)
    }

    /// Columns as codewords; returns `(words, duplicate_indices)`.
    fn to_code(&self) -> PyResult<(Vec<Vec<u32>>, Vec<usize>)> {
        let fc = family::family_to_code(&self.0).py()?;
        let dups = fc.duplicates.clone();
        Ok((fc.code.into_words(), dups))
    }

    fn __repr__(&self) -> String {
        format!(
            "HashFamily(N={}, n={}, m={})",
            self.0.funcs(),
            self.0.domain(),
            self.0.range()
        )
    }
}

fn epsilon_dict<'py>(py: Python<'py>, r: &EpsilonReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("kind", r.kind.as_str())?;
    d.set_item("epsilon", fraction(py, &r.epsilon)?)?;
    d.set_item("count", r.count)?;
    d.set_item("funcs", r.funcs)?;
    d.set_item("domain", r.domain)?;
    d.set_item("range", r.range)?;
    d.set_item("witness", (r.witness.a1, r.witness.a2))?;
    d.set_item("b", r.witness.b)?;
    d.set_item("b_pair", r.witness.b_pair)?;
    d.set_item("balanced", r.balanced)?;
    d.set_item("group", r.group.map(RangeGroup::as_str))?;
    Ok(d)
}

#[pyfunction]
fn rs_code(q: u32, k: usize, n: usize) -> PyResult<PyLinearCode> {
    code::rs_code(q, k, n).map(PyLinearCode).py()
}

#[pyfunction]
fn parity_code(q: u32, n: usize) -> PyResult<PyLinearCode> {
    code::parity_code(q, n).map(PyLinearCode).py()
}

/// `(code, v)`: the parity-check code of `v`, which contains all-ones.
#[pyfunction]
fn parity_mds_with_allones(q: u32, n: usize) -> PyResult<(PyLinearCode, Vec<u32>)> {
    code::parity_mds_with_allones(q, n)
        .map(|(c, v)| (PyLinearCode(c), v))
        .py()
}

/// First `size` codewords of `code`, in message order.
#[pyfunction]
fn subcode_select(code: &PyLinearCode, size: u128) -> PyResult<Vec<Vec<u32>>> {
    code::subcode_select(&code.0, size)
        .map(GenericCode::into_words)
        .py()
}

#[pyfunction]
fn smallest_n_subcode_size(q: u32, i: u32) -> Option<u128> {
    code::smallest_n_subcode_size(q, i)
}

/// U family whose domain is the given codewords.
#[pyfunction]
fn code_to_family(q: u32, words: Vec<Vec<u32>>) -> PyResult<PyHashFamily> {
    let code = GenericCode::new(q, words).py()?;
    family::code_to_family(&code).map(PyHashFamily).py()
}

#[pyfunction]
fn linear_code_to_family(code: &PyLinearCode) -> PyResult<PyHashFamily> {
    family::linear_code_to_family(&code.0)
        .map(PyHashFamily)
        .py()
}

#[pyfunction]
fn code_to_delta_family(code: &PyLinearCode) -> PyResult<PyHashFamily> {
    family::code_to_delta_family(&code.0).map(PyHashFamily).py()
}

fn bound_value<'py>(py: Python<'py>, b: &BoundValue) -> PyResult<Bound<'py, PyAny>> {
    match &b.exact {
        Some(r) => fraction(py, r),
        None => Ok(b.value.into_pyobject(py)?.into_any()),
    }
}

/// Classical bound on N, exact.
#[pyfunction]
fn bound_old<'py>(
    py: Python<'py>,
    kind: &str,
    n: u64,
    m: u64,
    eps: &Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyAny>> {
    fraction(
        py,
        &bounds::bound_old(kind_arg(kind)?, n, m, &eps_arg(eps)?).py()?,
    )
}

/// Singleton-derived bound on N; a Fraction when exact, else a float.
#[pyfunction]
fn bound_new<'py>(
    py: Python<'py>,
    kind: &str,
    n: u64,
    m: u64,
    eps: &Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyAny>> {
    bound_value(
        py,
        &bounds::bound_new(kind_arg(kind)?, n, m, &eps_arg(eps)?).py()?,
    )
}

/// Smallest N ≥ raw for which the ε-count is integral.
#[pyfunction]
fn integral_adjust(
    raw: &Bound<'_, PyAny>,
    eps: &Bound<'_, PyAny>,
    kind: &str,
    m: u64,
) -> PyResult<u64> {
    let raw = if raw.is_instance_of::<pyo3::types::PyFloat>() {
        BoundValue::approx(raw.extract()?)
    } else {
        BoundValue::exact(eps_arg(raw)?)
    };
    Ok(bounds::integral_adjust(
        &raw,
        &eps_arg(eps)?,
        kind_arg(kind)?,
        m,
    ))
}

#[pyfunction]
fn plotkin_eps_floor<'py>(py: Python<'py>, n: u64, m: u64) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &bounds::plotkin_eps_floor(n, m).py()?)
}

fn thresholds_dict<'py>(py: Python<'py>, t: &ThresholdSet) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("n", t.n)?;
    d.set_item("m", t.m)?;
    for (name, th) in [
        ("eps1", t.eps1),
        ("eps2", t.eps2),
        ("eps3", t.eps3),
        ("eps4", t.eps4),
    ] {
        d.set_item(name, th.value)?;
        d.set_item(format!("{name}_applicable"), th.applicable)?;
    }
    d.set_item("quad_coeffs", t.quad_coeffs)?;
    d.set_item("discriminant", t.discriminant)?;
    Ok(d)
}

#[pyfunction]
fn thresholds<'py>(py: Python<'py>, n: u64, m: u64) -> PyResult<Bound<'py, PyDict>> {
    thresholds_dict(py, &bounds::thresholds(n, m).py()?)
}

fn report_dict<'py>(py: Python<'py>, r: &BoundReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("kind", r.kind.as_str())?;
    d.set_item("n", r.n)?;
    d.set_item("m", r.m)?;
    d.set_item("eps", fraction(py, &r.eps)?)?;
    d.set_item(
        "old_raw",
        r.old_raw.as_ref().map(|b| bound_value(py, b)).transpose()?,
    )?;
    d.set_item(
        "new_raw",
        r.new_raw.as_ref().map(|b| bound_value(py, b)).transpose()?,
    )?;
    d.set_item("old_N", r.old_n)?;
    d.set_item("new_N", r.new_n)?;
    d.set_item("threshold", r.threshold)?;
    d.set_item("floor", fraction(py, &r.floor)?)?;
    d.set_item("dominant", r.dominant.as_str())?;
    let regime = r.regime.map(|g| match g {
        bounds::Regime::New => "new",
        bounds::Regime::Old => "old",
    });
    d.set_item("regime", regime)?;
    d.set_item("boundary", r.boundary)?;
    Ok(d)
}

/// Both bounds, their integral adjustments, and which one dominates.
#[pyfunction]
fn compare<'py>(
    py: Python<'py>,
    kind: &str,
    n: u64,
    m: u64,
    eps: &Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyDict>> {
    report_dict(
        py,
        &bounds::compare(kind_arg(kind)?, n, m, &eps_arg(eps)?).py()?,
    )
}

/// Sweep CSV text (header plus one row per (n, m, ε)).
#[pyfunction]
fn sweep_csv(
    kind: &str,
    ns: Vec<u64>,
    ms: Vec<u64>,
    eps_grid: Vec<Bound<'_, PyAny>>,
) -> PyResult<String> {
    let grid = eps_grid.iter().map(eps_arg).collect::<PyResult<Vec<_>>>()?;
    Ok(bounds::sweep_csv(
        &bounds::sweep(kind_arg(kind)?, &ns, &ms, &grid).py()?,
    ))
}

#[pymodule]
fn mdshash(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("TooLargeError", m.py().get_type::<TooLargeError>())?;
    m.add_class::<PyField>()?;
    m.add_class::<PyLinearCode>()?;
    m.add_class::<PyHashFamily>()?;
    m.add_function(wrap_pyfunction!(rs_code, m)?)?;
    m.add_function(wrap_pyfunction!(parity_code, m)?)?;
    m.add_function(wrap_pyfunction!(parity_mds_with_allones, m)?)?;
    m.add_function(wrap_pyfunction!(subcode_select, m)?)?;
    m.add_function(wrap_pyfunction!(smallest_n_subcode_size, m)?)?;
    m.add_function(wrap_pyfunction!(code_to_family, m)?)?;
    m.add_function(wrap_pyfunction!(linear_code_to_family, m)?)?;
    m.add_function(wrap_pyfunction!(code_to_delta_family, m)?)?;
    m.add_function(wrap_pyfunction!(bound_old, m)?)?;
    m.add_function(wrap_pyfunction!(bound_new, m)?)?;
    m.add_function(wrap_pyfunction!(integral_adjust, m)?)?;
    m.add_function(wrap_pyfunction!(plotkin_eps_floor, m)?)?;
    m.add_function(wrap_pyfunction!(thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_csv, m)?)?;
    Ok(())
}
