//! Python bindings: fields, square classes, Brauer classes, Hermitian
//! forms and the deduction engine. Rationals are accepted as ints, strings
//! like `"3/5"` or `fractions.Fraction`; errors surface as `ValueError`.

use std::path::Path;

use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use udisc::arith::parse_rational;
use udisc::brauer::render_pair;
use udisc::cli::{self, FactFile, HformReport, Report};
use udisc::deduce::resolve as resolve_sheet;
use udisc::symbols;

fn err(e: udisc::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_rational(obj: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    parse_rational(&obj.str()?.to_cow()?).map_err(err)
}

fn to_place(obj: &Bound<'_, PyAny>) -> PyResult<udisc::Place> {
    obj.str()?.to_cow()?.parse().map_err(err)
}

fn place_names(ps: impl IntoIterator<Item = udisc::Place>) -> Vec<String> {
    ps.into_iter().map(|p| p.to_string()).collect()
}

#[pyclass(name = "Field", module = "udisc_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyField(udisc::ImagQuadField);

#[pymethods]
impl PyField {
    #[new]
    fn new(delta0: u64) -> PyResult<Self> {
        udisc::ImagQuadField::new(delta0).map(PyField).map_err(err)
    }

    #[getter]
    fn delta0(&self) -> u64 {
        self.0.delta0()
    }

    #[getter]
    fn field_disc(&self) -> i64 {
        self.0.field_disc()
    }

    /// "split", "inert" or "ramified".
    fn prime_behavior(&self, p: u64) -> String {
        format!("{:?}", self.0.prime_behavior(&p.into())).to_lowercase()
    }

    fn norm_class(&self, a: &Bound<'_, PyAny>) -> PyResult<Vec<String>> {
        Ok(place_names(self.0.norm_class(&to_rational(a)?).map_err(err)?))
    }

    fn is_norm(&self, a: &Bound<'_, PyAny>) -> PyResult<bool> {
        self.0.is_norm(&to_rational(a)?).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.0.delta0())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyclass(name = "SquareClass", module = "udisc_py", frozen, skip_from_py_object, eq)]
#[derive(Clone, PartialEq)]
struct PySquareClass(udisc::SquareClassQ);

#[pymethods]
impl PySquareClass {
    #[new]
    fn new(a: &Bound<'_, PyAny>) -> PyResult<Self> {
        udisc::SquareClassQ::from_rational(&to_rational(a)?).map(PySquareClass).map_err(err)
    }

    /// The squarefree integer representative.
    #[getter]
    fn rep(&self) -> String {
        self.0.rep().to_string()
    }

    fn __int__(&self) -> PyResult<i64> {
        self.0.to_i64().ok_or_else(|| PyValueError::new_err("representative does not fit in 64 bits"))
    }

    fn __mul__(&self, other: PyRef<'_, PySquareClass>) -> Self {
        PySquareClass(&self.0 * &other.0)
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.0.to_string().hash(&mut h);
        h.finish()
    }

    fn __repr__(&self) -> String {
        format!("SquareClass({})", self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyclass(name = "BrauerClass", module = "udisc_py", frozen, skip_from_py_object, eq)]
#[derive(Clone, PartialEq)]
struct PyBrauerClass(udisc::BrauerClassQ);

#[pymethods]
impl PyBrauerClass {
    /// From a list of ramified places such as `["inf", 3]`.
    #[new]
    #[pyo3(signature = (places = Vec::new()))]
    fn new(places: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let ps = places.iter().map(to_place).collect::<PyResult<Vec<_>>>()?;
        udisc::BrauerClassQ::new(ps).map(PyBrauerClass).map_err(err)
    }

    /// The class of the quaternion algebra `(a,b)_Q`.
    #[staticmethod]
    fn from_pair(a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>) -> PyResult<Self> {
        udisc::BrauerClassQ::from_pair(&to_rational(a)?, &to_rational(b)?).map(PyBrauerClass).map_err(err)
    }

    #[staticmethod]
    fn of_norm_class(field: PyRef<'_, PyField>, d: PyRef<'_, PySquareClass>) -> Self {
        PyBrauerClass(udisc::BrauerClassQ::of_norm_class(&field.0, &d.0))
    }

    #[getter]
    fn ram(&self) -> Vec<String> {
        place_names(self.0.ram().iter().cloned())
    }

    fn is_split(&self) -> bool {
        self.0.is_split()
    }

    fn splits_in(&self, field: PyRef<'_, PyField>) -> bool {
        self.0.splits_in(&field.0)
    }

    /// Smallest `t` with `[(t, -delta0)_Q]` equal to this class.
    fn l_disc(&self, field: PyRef<'_, PyField>) -> PyResult<PySquareClass> {
        self.0.l_disc(&field.0).map(PySquareClass).map_err(err)
    }

    /// A presentation `"(a,b)_Q"`, or `None` if no small one was found.
    fn presentation(&self) -> Option<String> {
        self.0.presentation().map(|(a, b)| render_pair(&a, &b))
    }

    fn __mul__(&self, other: PyRef<'_, PyBrauerClass>) -> Self {
        PyBrauerClass(self.0.mul(&other.0))
    }

    fn __repr__(&self) -> String {
        format!("BrauerClass({:?})", self.ram())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyclass(name = "HermitianForm", module = "udisc_py", frozen)]
struct PyHermitianForm(udisc::HermitianGram);

#[pymethods]
impl PyHermitianForm {
    /// `entries[i][j]` is a pair `(x, y)` standing for `x + y sqrt(-delta0)`.
    #[new]
    fn new(delta0: u64, entries: Vec<Vec<(Bound<'_, PyAny>, Bound<'_, PyAny>)>>) -> PyResult<Self> {
        let l = udisc::ImagQuadField::new(delta0).map_err(err)?;
        let mut rows = Vec::with_capacity(entries.len());
        for row in &entries {
            let mut out = Vec::with_capacity(row.len());
            for (x, y) in row {
                out.push(udisc::QuadElem::new(to_rational(x)?, to_rational(y)?, &l));
            }
            rows.push(out);
        }
        udisc::HermitianGram::new(&l, rows).map(PyHermitianForm).map_err(err)
    }

    #[staticmethod]
    fn diagonal(delta0: u64, diag: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let l = udisc::ImagQuadField::new(delta0).map_err(err)?;
        let d = diag.iter().map(to_rational).collect::<PyResult<Vec<_>>>()?;
        udisc::HermitianGram::diagonal(&l, &d).map(PyHermitianForm).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn diagonalize(&self) -> PyResult<Vec<String>> {
        Ok(self.0.diagonalize().map_err(err)?.iter().map(|a| a.to_string()).collect())
    }

    fn disc(&self) -> PyResult<PySquareClass> {
        self.0.disc().map(PySquareClass).map_err(err)
    }

    fn delta(&self) -> PyResult<PyBrauerClass> {
        self.0.delta().map(PyBrauerClass).map_err(err)
    }

    fn is_positive_definite(&self) -> PyResult<bool> {
        self.0.is_positive_definite().map_err(err)
    }

    /// Clifford invariant of the trace form, as a Brauer class.
    fn transfer_clifford(&self) -> PyResult<PyBrauerClass> {
        Ok(PyBrauerClass(self.0.transfer_quadratic().map_err(err)?.clifford_invariant()))
    }

    /// The `udisc hform --json` report as a JSON string.
    fn report_json(&self) -> PyResult<String> {
        let r = HformReport::compute(&self.0).map_err(err)?;
        Ok(serde_json::to_string(&r).expect("serializes"))
    }
}

/// `(a,b)_v` for a place given as `"inf"` or a prime.
#[pyfunction]
fn hilbert_symbol(a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>, place: &Bound<'_, PyAny>) -> PyResult<i8> {
    symbols::hilbert(&to_rational(a)?, &to_rational(b)?, &to_place(place)?).map_err(err)
}

/// Places where `(a,b)_Q` ramifies.
#[pyfunction]
fn ramified_places(a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>) -> PyResult<Vec<String>> {
    Ok(udisc::BrauerClassQ::from_pair(&to_rational(a)?, &to_rational(b)?).map_err(err)?.ram().iter().map(|p| p.to_string()).collect())
}

#[pyfunction]
fn kronecker(a: i64, n: i64) -> PyResult<i8> {
    symbols::kronecker(&a.into(), &n.into()).map_err(err)
}

/// Resolves a fact sheet given as JSON text; returns the report as JSON.
#[pyfunction]
fn resolve(sheet_json: &str) -> PyResult<String> {
    let file = FactFile::parse(sheet_json, "<string>").map_err(err)?;
    let sheet = file.sheet().map_err(err)?;
    let report = Report::from_deduction(&resolve_sheet(&sheet).map_err(err)?);
    Ok(serde_json::to_string(&report).expect("serializes"))
}

#[pyfunction]
fn deduce_file(path: &str) -> String {
    serde_json::to_string(&cli::deduce_file(Path::new(path))).expect("serializes")
}

/// Runs a corpus directory; returns the rows as JSON.
#[pyfunction]
fn run_corpus(dir: &str) -> PyResult<String> {
    let rows = cli::run_corpus(Path::new(dir)).map_err(err)?;
    Ok(serde_json::to_string(&rows).expect("serializes"))
}

#[pymodule]
fn udisc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PySquareClass>()?;
    m.add_class::<PyBrauerClass>()?;
    m.add_class::<PyHermitianForm>()?;
    m.add_function(wrap_pyfunction!(hilbert_symbol, m)?)?;
    m.add_function(wrap_pyfunction!(ramified_places, m)?)?;
    m.add_function(wrap_pyfunction!(kronecker, m)?)?;
    m.add_function(wrap_pyfunction!(resolve, m)?)?;
    m.add_function(wrap_pyfunction!(deduce_file, m)?)?;
    m.add_function(wrap_pyfunction!(run_corpus, m)?)?;
    Ok(())
}
