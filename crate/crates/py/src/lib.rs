//! Python bindings for the `srg` core library.

use pyo3::exceptions::{PyRuntimeError, PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

use srg_core::cyclo::CycNumber;
use srg_core::families::{self, FamilySpec};
use srg_core::matrep::DEFAULT_CAP;
use srg_core::{reflect, verdict, ws2};

fn runtime<E: std::fmt::Display>(e: E) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// Exact element of a cyclotomic field.
#[pyclass(name = "Cyc", frozen, eq, hash)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyCyc(CycNumber);

#[pymethods]
impl PyCyc {
    #[new]
    fn new(s: &str) -> PyResult<Self> {
        s.parse::<CycNumber>()
            .map(PyCyc)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[staticmethod]
    fn from_int(v: i64) -> Self {
        PyCyc(CycNumber::from_int(v))
    }

    /// `exp(2 pi i k / n)`.
    #[staticmethod]
    #[pyo3(signature = (n, k = 1))]
    fn zeta(n: u32, k: i64) -> PyResult<Self> {
        CycNumber::root_of_unity(n, k)
            .map(PyCyc)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn conductor(&self) -> u32 {
        self.0.conductor()
    }

    fn conj(&self) -> Self {
        PyCyc(self.0.conj())
    }

    fn galois(&self, a: i64) -> Self {
        PyCyc(self.0.galois(a))
    }

    fn is_rational(&self) -> bool {
        self.0.is_rational()
    }

    fn root_order(&self) -> Option<u32> {
        self.0.root_order()
    }

    fn __add__(&self, o: &Self) -> Self {
        PyCyc(self.0.add_ref(&o.0))
    }

    fn __sub__(&self, o: &Self) -> Self {
        PyCyc(self.0.sub_ref(&o.0))
    }

    fn __mul__(&self, o: &Self) -> Self {
        PyCyc(self.0.mul_ref(&o.0))
    }

    fn __truediv__(&self, o: &Self) -> PyResult<Self> {
        self.0
            .div_ref(&o.0)
            .map(PyCyc)
            .map_err(|e| PyZeroDivisionError::new_err(e.to_string()))
    }

    fn __neg__(&self) -> Self {
        PyCyc(self.0.neg_ref())
    }

    fn __pow__(&self, e: u64, _m: Option<u64>) -> Self {
        PyCyc(self.0.pow(e))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Cyc('{}')", self.0)
    }
}

/// One of the groups `mu_d T`, `mu_d O`, `mu_d I`, `OT_d`.
#[pyclass(name = "FamilySpec", frozen, eq, hash)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PySpec(FamilySpec);

#[pymethods]
impl PySpec {
    /// Parses `muT:6`, `OT:12` and the like.
    #[new]
    fn new(s: &str) -> PyResult<Self> {
        s.parse::<FamilySpec>()
            .map(PySpec)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind.tag()
    }

    #[getter]
    fn d(&self) -> u32 {
        self.0.d
    }

    #[getter]
    fn label(&self) -> String {
        self.0.label()
    }

    /// Order from the closed formula.
    fn order(&self) -> u64 {
        self.0.order()
    }

    /// Order found by enumerating the group.
    fn enumerated_order(&self, py: Python<'_>) -> PyResult<usize> {
        let spec = self.0;
        py.allow_threads(|| {
            let g = families::build(spec).map_err(runtime)?;
            g.order().ok_or_else(|| runtime("group was not enumerated"))
        })
    }

    /// Number of complex reflections in the group.
    fn reflection_count(&self, py: Python<'_>) -> PyResult<usize> {
        let spec = self.0;
        py.allow_threads(|| reflect::reflection_count(spec).map_err(runtime))
    }

    /// Names and outcomes of the structural checks.
    fn verify_lemmas(&self, py: Python<'_>) -> PyResult<Vec<(String, bool, String)>> {
        let spec = self.0;
        py.allow_threads(|| {
            let r = reflect::verify_lemmas(spec).map_err(runtime)?;
            Ok(r.checks
                .into_iter()
                .map(|c| (c.name.to_string(), c.passed, c.detail))
                .collect())
        })
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("FamilySpec('{}')", self.0)
    }
}

/// Rows `(group, N, minimal d)` for the seventeen reflection groups.
#[pyfunction]
fn reflection_table(py: Python<'_>) -> PyResult<Vec<(String, usize, u32)>> {
    py.allow_threads(|| {
        Ok(verdict::reflection_table()
            .map_err(runtime)?
            .into_iter()
            .map(|r| (r.g0.label(), r.n as usize, r.minimal_d))
            .collect())
    })
}

/// Open cases as `(G0 label, d, status)` after the crude or refined stage.
#[pyfunction]
#[pyo3(signature = (stage = "refined"))]
fn open_cases(py: Python<'_>, stage: &str) -> PyResult<Vec<(String, u32, String)>> {
    let refined = match stage {
        "crude" => false,
        "refined" => true,
        other => return Err(PyValueError::new_err(format!("unknown stage {other:?}"))),
    };
    py.allow_threads(|| {
        let cases = if refined {
            verdict::open_after_refined(&verdict::CHAMP_RECORDS)
        } else {
            verdict::all_open_after_crude()
        }
        .map_err(runtime)?;
        Ok(cases
            .into_iter()
            .map(|c| (c.g0.label(), c.d, c.stage.as_str().to_string()))
            .collect())
    })
}

/// Runs the W(S_2) stabilizer pipeline and returns `(check, passed)` pairs.
#[pyfunction]
#[pyo3(signature = (full = false, cap = DEFAULT_CAP))]
fn ws2_checks(py: Python<'_>, full: bool, cap: usize) -> PyResult<Vec<(String, bool)>> {
    py.allow_threads(|| {
        let g = ws2::build_ws2(None, cap).map_err(runtime)?;
        let rep = ws2::stabilizer_pipeline(&g, ws2::Ws2Options { full, cap }).map_err(runtime)?;
        Ok(rep.checks().into_iter().map(|(n, ok)| (n.to_string(), ok)).collect())
    })
}

#[pymodule]
fn srg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCyc>()?;
    m.add_class::<PySpec>()?;
    m.add_function(wrap_pyfunction!(reflection_table, m)?)?;
    m.add_function(wrap_pyfunction!(open_cases, m)?)?;
    m.add_function(wrap_pyfunction!(ws2_checks, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
