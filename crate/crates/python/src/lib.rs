//! Python bindings. Rationals cross the boundary as `fractions.Fraction`;
//! inputs may be ints, `Fraction`s or `"p/q"` strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use regen_bounds::codes::{
    build_congruence_family, builtin_code_423, builtin_code_433, gf2_rank as core_rank,
    verify_parity_structure, verify_recovery, verify_repair, Gf2Matrix, RegeneratingCodeSpec,
};
use regen_bounds::envelope::{evaluate_best as core_best, tradeoff_boundary, upper_envelope};
use regen_bounds::generators::{
    cutset_bounds as core_cutset, enumerate_bounds as core_enumerate,
    verify_certificate as core_verify, EnumerationLimits, LinearBound, LmMode,
};
use regen_bounds::model::rational::parse_rational;
use regen_bounds::model::{Rational, SystemParams};

fn err(e: regen_bounds::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational_arg(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    parse_rational(&obj.str()?.to_string()).map_err(err)
}

fn fraction<'py>(py: Python<'py>, v: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((*v.numer(), *v.denom()))
}

fn params(k: usize, d: usize) -> PyResult<SystemParams> {
    SystemParams::new(k, d).map_err(err)
}

/// `c·B ≤ a·α + b·β` with its certificate.
#[pyclass(name = "LinearBound", frozen, module = "regen_bounds")]
struct PyBound {
    inner: LinearBound,
}

#[pymethods]
impl PyBound {
    #[getter]
    fn k(&self) -> usize {
        self.inner.params.k()
    }
    #[getter]
    fn d(&self) -> usize {
        self.inner.params.d()
    }
    #[getter]
    fn c(&self) -> i64 {
        self.inner.c
    }
    #[getter]
    fn a(&self) -> i64 {
        self.inner.form.alpha_coeff
    }
    #[getter]
    fn b(&self) -> i64 {
        self.inner.form.beta_coeff
    }
    #[getter]
    fn id(&self) -> String {
        self.inner.id()
    }
    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.provenance.label()
    }

    /// Upper bound on `B` at the given `(α, β)`.
    fn value_at<'py>(
        &self,
        py: Python<'py>,
        alpha: &Bound<'py, PyAny>,
        beta: &Bound<'py, PyAny>,
    ) -> PyResult<Bound<'py, PyAny>> {
        fraction(
            py,
            &self
                .inner
                .value_at(&rational_arg(alpha)?, &rational_arg(beta)?),
        )
    }

    /// `(verdict, report)` from the certificate checker.
    fn verify(&self) -> (String, String) {
        let report = core_verify(&self.inner);
        (report.verdict.to_string(), report.to_string())
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("bound serializes")
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyBound { inner })
    }

    fn __repr__(&self) -> String {
        format!(
            "<LinearBound {} ({})>",
            self.inner,
            self.inner.provenance.label()
        )
    }
}

#[pyclass(name = "Enumeration", frozen, module = "regen_bounds")]
struct PyEnumeration {
    #[pyo3(get)]
    truncated: bool,
    #[pyo3(get)]
    notes: Vec<String>,
    bounds: Vec<LinearBound>,
}

#[pymethods]
impl PyEnumeration {
    #[getter]
    fn bounds(&self) -> Vec<PyBound> {
        self.bounds
            .iter()
            .map(|b| PyBound { inner: b.clone() })
            .collect()
    }

    fn __len__(&self) -> usize {
        self.bounds.len()
    }
}

fn collect(bounds: &[PyRef<'_, PyBound>]) -> Vec<LinearBound> {
    bounds.iter().map(|b| b.inner.clone()).collect()
}

/// Every certified bound for `(k, d)` within the caps
/// `(chain length, rectangles, refinements)`.
#[pyfunction]
#[pyo3(signature = (k, d, caps = (6, 4, 8), mode = "auto"))]
fn enumerate_bounds(
    k: usize,
    d: usize,
    caps: (usize, usize, usize),
    mode: &str,
) -> PyResult<PyEnumeration> {
    let mode: LmMode = mode.parse().map_err(err)?;
    let limits = EnumerationLimits {
        max_chain: caps.0,
        max_rectangles: caps.1,
        max_refinements: caps.2,
        mode,
    };
    let e = core_enumerate(&params(k, d)?, &limits).map_err(err)?;
    Ok(PyEnumeration {
        truncated: e.truncated,
        notes: e.notes,
        bounds: e.bounds,
    })
}

#[pyfunction]
fn cutset_bounds(k: usize, d: usize) -> PyResult<Vec<PyBound>> {
    Ok(core_cutset(&params(k, d)?)
        .into_iter()
        .map(|inner| PyBound { inner })
        .collect())
}

type Segment<'py> = (Bound<'py, PyAny>, Option<Bound<'py, PyAny>>, String);

/// Envelope segments `(lo, hi, id)` in `(α/β, B/β)`; `hi` is `None` on the
/// last one.
#[pyfunction]
fn envelope<'py>(py: Python<'py>, bounds: Vec<PyRef<'py, PyBound>>) -> PyResult<Vec<Segment<'py>>> {
    let env = upper_envelope(&collect(&bounds)).map_err(err)?;
    env.segments
        .iter()
        .map(|s| {
            Ok((
                fraction(py, &s.lo)?,
                s.hi.as_ref().map(|h| fraction(py, h)).transpose()?,
                s.bound.id(),
            ))
        })
        .collect()
}

/// `(value, bound)` for the tightest bound at `(α, β)`.
#[pyfunction]
fn evaluate_best<'py>(
    py: Python<'py>,
    bounds: Vec<PyRef<'py, PyBound>>,
    alpha: &Bound<'py, PyAny>,
    beta: &Bound<'py, PyAny>,
) -> PyResult<(Bound<'py, PyAny>, PyBound)> {
    let all = collect(&bounds);
    let (value, bound) =
        core_best(&all, &rational_arg(alpha)?, &rational_arg(beta)?).map_err(err)?;
    Ok((
        fraction(py, &value)?,
        PyBound {
            inner: bound.clone(),
        },
    ))
}

/// Vertices `(α/B, β/B)` of the trade-off boundary.
#[pyfunction]
fn tradeoff<'py>(
    py: Python<'py>,
    bounds: Vec<PyRef<'py, PyBound>>,
) -> PyResult<Vec<(Bound<'py, PyAny>, Bound<'py, PyAny>)>> {
    let boundary = tradeoff_boundary(&collect(&bounds)).map_err(err)?;
    boundary
        .vertices
        .iter()
        .map(|(x, y)| Ok((fraction(py, x)?, fraction(py, y)?)))
        .collect()
}

/// A GF(2) code on `d + 1` nodes with its repair scheme.
#[pyclass(name = "CodeSpec", frozen, module = "regen_bounds")]
struct PyCodeSpec {
    inner: RegeneratingCodeSpec,
}

#[pymethods]
impl PyCodeSpec {
    #[getter]
    fn k(&self) -> usize {
        self.inner.params.k()
    }
    #[getter]
    fn d(&self) -> usize {
        self.inner.params.d()
    }
    #[getter(B)]
    fn file_size(&self) -> usize {
        self.inner.b
    }
    #[getter]
    fn alpha(&self) -> usize {
        self.inner.alpha
    }
    #[getter]
    fn beta(&self) -> usize {
        self.inner.beta
    }
    #[getter]
    fn generator(&self) -> Vec<String> {
        self.inner.generator.to_bitstrings()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyCodeSpec {
            inner: RegeneratingCodeSpec::from_json(text).map_err(err)?,
        })
    }

    /// `[(check, verdict, detail)]` for recovery, repair and, when a parity
    /// matrix is present, its block structure.
    fn verify(&self) -> PyResult<Vec<(String, String, String)>> {
        let mut reports = vec![
            verify_recovery(&self.inner),
            verify_repair(&self.inner).map_err(err)?,
        ];
        if self.inner.parity.is_some() {
            reports.push(verify_parity_structure(&self.inner));
        }
        Ok(reports
            .into_iter()
            .map(|r| (r.check.to_string(), r.verdict.to_string(), r.to_string()))
            .collect())
    }

    fn __repr__(&self) -> String {
        let s = &self.inner;
        format!(
            "<CodeSpec k={} d={} B={} alpha={} beta={}>",
            s.params.k(),
            s.params.d(),
            s.b,
            s.alpha,
            s.beta
        )
    }
}

/// `"423"` or `"433"`.
#[pyfunction]
fn builtin_code(name: &str) -> PyResult<PyCodeSpec> {
    let inner = match name {
        "423" => builtin_code_423(),
        "433" => builtin_code_433(),
        _ => {
            return Err(PyValueError::new_err(format!(
                "unknown builtin code {name:?}"
            )))
        }
    };
    Ok(PyCodeSpec { inner })
}

#[pyfunction]
fn congruence_code(d: usize) -> PyResult<PyCodeSpec> {
    Ok(PyCodeSpec {
        inner: build_congruence_family(d).map_err(err)?,
    })
}

/// Rank over GF(2) of a matrix given as `'0'/'1'` row strings.
#[pyfunction]
fn gf2_rank(rows: Vec<String>) -> PyResult<usize> {
    let cols = rows.first().map_or(0, |r| r.chars().count());
    Ok(core_rank(
        &Gf2Matrix::from_bitstrings(&rows, cols).map_err(err)?,
    ))
}

#[pymodule]
#[pyo3(name = "regen_bounds")]
fn py_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBound>()?;
    m.add_class::<PyEnumeration>()?;
    m.add_class::<PyCodeSpec>()?;
    m.add_function(wrap_pyfunction!(enumerate_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(cutset_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(envelope, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_best, m)?)?;
    m.add_function(wrap_pyfunction!(tradeoff, m)?)?;
    m.add_function(wrap_pyfunction!(builtin_code, m)?)?;
    m.add_function(wrap_pyfunction!(congruence_code, m)?)?;
    m.add_function(wrap_pyfunction!(gf2_rank, m)?)?;
    Ok(())
}
