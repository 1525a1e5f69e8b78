use std::collections::BTreeMap;
use std::path::PathBuf;

use cdc_workbench::algebra::{Field, Matrix as RsMatrix};
use cdc_workbench::bounds::{
    cor45_poly as rs_cor45_poly, evaluate, optimize_parameters, reproduce_table as rs_reproduce_table, BoundPlan, BoundResult,
    Family, Manifest, Registry, Target,
};
use cdc_workbench::constructions::{build as rs_build, BuildOptions, BuildOutput, ConstructionFamily, ConstructionPlan};
use cdc_workbench::counting;
use cdc_workbench::rankcodes::gabidulin_mrd;
use cdc_workbench::subspaces::{self, verify_min_distance, Cdc, VerifyMode};
use cdc_workbench::Error;
use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(cdc_workbench_py, CdcError, PyException);
create_exception!(cdc_workbench_py, RegistryMiss, CdcError);
create_exception!(cdc_workbench_py, HypothesisViolated, CdcError);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::RegistryMiss { .. } => RegistryMiss::new_err(e.to_string()),
        Error::HypothesisViolated(_) => HypothesisViolated::new_err(e.to_string()),
        _ => CdcError::new_err(e.to_string()),
    }
}

fn field(q: u32) -> PyResult<Field> {
    Field::new(q).map_err(py_err)
}

fn registry(path: Option<PathBuf>) -> PyResult<Registry> {
    let mut reg = Registry::shipped();
    if let Some(p) = path {
        reg.merge(Registry::load(&p).map_err(py_err)?);
    }
    Ok(reg)
}

#[pyfunction]
fn gauss_binomial(n: u64, k: u64, q: u64) -> BigUint {
    counting::gauss_binomial(n, k, q)
}

#[pyfunction]
fn mrd_size(q: u64, a: u64, b: u64, d: u64) -> PyResult<BigUint> {
    counting::mrd_size(q, a, b, d).map_err(py_err)
}

#[pyfunction]
fn delsarte_rank_count(q: u64, a: u64, b: u64, d: u64, u: u64) -> PyResult<BigUint> {
    counting::delsarte_rank_count(q, a, b, d, u).map_err(py_err)
}

#[pyfunction]
fn bounded_rank_size(q: u64, a: u64, b: u64, d: u64, u: u64) -> PyResult<BigUint> {
    counting::bounded_rank_size(q, a, b, d, u).map_err(py_err)
}

/// A matrix over GF(q).
#[pyclass(module = "cdc_workbench_py", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Matrix {
    inner: RsMatrix,
}

#[pymethods]
impl Matrix {
    #[new]
    fn new(q: u32, rows: Vec<Vec<u64>>) -> PyResult<Self> {
        Ok(Matrix { inner: RsMatrix::from_rows(&field(q)?, &rows).map_err(py_err)? })
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.field().order()
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.inner.rows(), self.inner.cols())
    }

    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn rref(&self) -> (Matrix, Vec<usize>) {
        let (m, pivots) = self.inner.rref();
        (Matrix { inner: m }, pivots)
    }

    fn to_list(&self) -> Vec<Vec<u64>> {
        (0..self.inner.rows()).map(|i| self.inner.row(i).iter().map(|&v| v as u64).collect()).collect()
    }

    fn __sub__(&self, other: &Matrix) -> PyResult<Matrix> {
        Ok(Matrix { inner: self.inner.sub(&other.inner).map_err(py_err)? })
    }

    fn __add__(&self, other: &Matrix) -> PyResult<Matrix> {
        Ok(Matrix { inner: self.inner.add(&other.inner).map_err(py_err)? })
    }

    fn __matmul__(&self, other: &Matrix) -> PyResult<Matrix> {
        Ok(Matrix { inner: self.inner.mul(&other.inner).map_err(py_err)? })
    }

    fn __repr__(&self) -> String {
        format!("Matrix(q={}, rows={:?})", self.q(), self.to_list())
    }
}

/// A subspace of GF(q)^n, stored by its reduced generator.
#[pyclass(module = "cdc_workbench_py", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Subspace {
    inner: subspaces::Subspace,
}

#[pymethods]
impl Subspace {
    /// Row space of the given generator rows.
    #[new]
    fn new(q: u32, rows: Vec<Vec<u64>>) -> PyResult<Self> {
        let m = RsMatrix::from_rows(&field(q)?, &rows).map_err(py_err)?;
        Ok(Subspace { inner: subspaces::Subspace::from_rows(&m) })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn ambient(&self) -> usize {
        self.inner.ambient()
    }

    fn generator(&self) -> Matrix {
        Matrix { inner: self.inner.rref().clone() }
    }

    fn distance(&self, other: &Subspace) -> PyResult<usize> {
        self.inner.distance(&other.inner).map_err(py_err)
    }

    fn intersection_dim(&self, other: &Subspace) -> PyResult<usize> {
        self.inner.intersection_dim(&other.inner).map_err(py_err)
    }

    fn identifying_vector(&self) -> String {
        self.inner.identifying_vector().to_string()
    }

    fn __repr__(&self) -> String {
        format!("Subspace(dim={}, ambient={}, pivots={})", self.dim(), self.ambient(), self.identifying_vector())
    }
}

/// Row space of (I | A).
#[pyfunction]
fn lift(a: &Matrix) -> Subspace {
    Subspace { inner: subspaces::lift_matrix(&a.inner) }
}

/// Codewords of the Gabidulin MRD code, optionally only those of rank at most `rank_cap`.
#[pyfunction]
#[pyo3(signature = (q, a, b, d, rank_cap=None))]
fn gabidulin(q: u32, a: usize, b: usize, d: usize, rank_cap: Option<usize>) -> PyResult<Vec<Matrix>> {
    let code = gabidulin_mrd(q, a, b, d).map_err(py_err)?;
    let words = code.enumerate(rank_cap).map_err(py_err)?;
    Ok(words.map(|inner| Matrix { inner }).collect())
}

/// A constant-dimension code.
#[pyclass(module = "cdc_workbench_py", frozen)]
struct Code {
    inner: Cdc,
}

#[pymethods]
impl Code {
    #[new]
    #[pyo3(signature = (d, codewords, provenance="python"))]
    fn new(d: usize, codewords: Vec<Subspace>, provenance: &str) -> PyResult<Self> {
        let first = codewords.first().ok_or_else(|| CdcError::new_err("a code needs at least one codeword"))?;
        let (f, n, k) = (first.inner.field().clone(), first.inner.ambient(), first.inner.dim());
        let words = codewords.into_iter().map(|s| s.inner).collect();
        Ok(Code { inner: Cdc::new(&f, n, k, d, words, provenance).map_err(py_err)? })
    }

    #[staticmethod]
    fn read(path: PathBuf) -> PyResult<Code> {
        Ok(Code { inner: Cdc::read(&path).map_err(py_err)? })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Code> {
        Ok(Code { inner: Cdc::from_text(text).map_err(py_err)? })
    }

    fn write(&self, path: PathBuf) -> PyResult<()> {
        self.inner.write(&path).map_err(py_err)
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.field().order()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.ambient()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.claimed_distance()
    }

    fn codewords(&self) -> Vec<Subspace> {
        self.inner.codewords().iter().map(|s| Subspace { inner: s.clone() }).collect()
    }

    /// Checks the minimum distance, exhaustively or over `sample` seeded pairs.
    #[pyo3(signature = (sample=None, seed=0))]
    fn verify<'py>(&self, py: Python<'py>, sample: Option<u64>, seed: u64) -> PyResult<Bound<'py, PyDict>> {
        let mode = match sample {
            Some(count) => VerifyMode::Sample { count, seed },
            None => VerifyMode::Exhaustive,
        };
        let r = py.detach(|| verify_min_distance(&self.inner, mode)).map_err(py_err)?;
        let out = PyDict::new(py);
        out.set_item("mode", r.mode)?;
        out.set_item("codewords", r.codewords)?;
        out.set_item("claimed_distance", r.claimed_distance)?;
        out.set_item("min_found", r.min_found)?;
        out.set_item("witness", r.witness)?;
        out.set_item("pairs_checked", r.pairs_checked)?;
        out.set_item("passed", r.passed)?;
        Ok(out)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        let c = &self.inner;
        format!("Code(q={}, n={}, size={}, d={}, k={})", self.q(), c.ambient(), c.len(), c.claimed_distance(), c.dim())
    }
}

fn bound_dict<'py>(py: Python<'py>, r: BoundResult) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("family", r.family.name())?;
    out.set_item("params", r.params)?;
    out.set_item("total", r.total)?;
    out.set_item("terms", r.terms.into_iter().map(|t| (t.name, t.value)).collect::<Vec<_>>())?;
    out.set_item("components", r.components.into_iter().map(|c| (c.name, c.value)).collect::<Vec<_>>())?;
    let deps: Vec<_> = r.registry_dependencies.into_iter().map(|d| format!("{d:?}")).collect();
    out.set_item("registry_dependencies", deps)?;
    Ok(out)
}

/// Evaluates a bound family at the given parameters, or at the best grid
/// point when `optimize` is set.
#[pyfunction]
#[pyo3(signature = (family, q, n, d, k, params=None, optimize=false, registry_file=None))]
#[allow(clippy::too_many_arguments)]
fn bound<'py>(
    py: Python<'py>,
    family: &str,
    q: u64,
    n: u64,
    d: u64,
    k: u64,
    params: Option<BTreeMap<String, u64>>,
    optimize: bool,
    registry_file: Option<PathBuf>,
) -> PyResult<Bound<'py, PyDict>> {
    let reg = registry(registry_file)?;
    let family = Family::parse(family).map_err(py_err)?;
    let target = Target::new(q, n, d, k);
    let result = py.detach(|| {
        if optimize {
            optimize_parameters(&reg, target, family)
        } else {
            let plan = BoundPlan::from_map(family, &target, &params.unwrap_or_default())?;
            evaluate(&reg, target, &plan)
        }
    });
    bound_dict(py, result.map_err(py_err)?)
}

/// The closed-form polynomial bound for (n, d, k) evaluated at q.
#[pyfunction]
#[pyo3(signature = (n, d, k, q, registry_file=None))]
fn cor45_poly(n: u64, d: u64, k: u64, q: u64, registry_file: Option<PathBuf>) -> PyResult<BigUint> {
    Ok(rs_cor45_poly(&registry(registry_file)?, (n, d, k), q).map_err(py_err)?.0)
}

/// Recomputes the rows of a published table; one dict per row.
#[pyfunction]
#[pyo3(signature = (table, q=None, registry_file=None))]
fn reproduce_table<'py>(
    py: Python<'py>,
    table: u32,
    q: Option<u64>,
    registry_file: Option<PathBuf>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let rows = rs_reproduce_table(&registry(registry_file)?, &Manifest::shipped(), table, q).map_err(py_err)?;
    rows.into_iter()
        .map(|r| {
            let out = PyDict::new(py);
            out.set_item("table", r.table)?;
            out.set_item("row", r.row)?;
            out.set_item("family", r.family.name())?;
            out.set_item("target", (r.target.q, r.target.n, r.target.d, r.target.k))?;
            out.set_item("params", r.params)?;
            out.set_item("computed", r.computed)?;
            out.set_item("published_new", r.published_new)?;
            out.set_item("published_old", r.published_old)?;
            out.set_item("matches", r.matches)?;
            Ok(out)
        })
        .collect()
}

/// Result of running a construction.
#[pyclass(module = "cdc_workbench_py", frozen)]
struct Construction {
    inner: BuildOutput,
}

#[pymethods]
impl Construction {
    #[getter]
    fn family(&self) -> &'static str {
        self.inner.plan.family.name()
    }

    #[getter]
    fn total(&self) -> BigUint {
        self.inner.total.clone()
    }

    #[getter]
    fn components(&self) -> Vec<(String, BigUint)> {
        self.inner.components.iter().map(|c| (c.name.clone(), c.count.clone())).collect()
    }

    #[getter]
    fn explicit(&self) -> bool {
        self.inner.is_explicit()
    }

    #[getter]
    fn identifying_vectors(&self) -> Vec<String> {
        self.inner.vectors.iter().map(|v| v.to_string()).collect()
    }

    #[getter]
    fn notes(&self) -> Vec<String> {
        self.inner.notes.clone()
    }

    /// The explicit code, or None for a count-only build.
    fn code(&self) -> Option<Code> {
        self.inner.cdc.clone().map(|inner| Code { inner })
    }

    fn __repr__(&self) -> String {
        format!("Construction({}, total={}, explicit={})", self.family(), self.inner.total, self.explicit())
    }
}

/// Runs a construction. Explicit when every part fits under `cutoff`
/// codewords, count-only otherwise.
#[pyfunction]
#[pyo3(signature = (family, q, n, d, k, params, count_only=false, cutoff=None, registry_file=None))]
#[allow(clippy::too_many_arguments)]
fn build(
    py: Python<'_>,
    family: &str,
    q: u64,
    n: u64,
    d: u64,
    k: u64,
    params: BTreeMap<String, u64>,
    count_only: bool,
    cutoff: Option<u64>,
    registry_file: Option<PathBuf>,
) -> PyResult<Construction> {
    let reg = registry(registry_file)?;
    let family = ConstructionFamily::parse(family).map_err(py_err)?;
    let plan = ConstructionPlan::new(family, q, n, d, k, &params).map_err(py_err)?;
    let mut opts = if count_only { BuildOptions::count_only() } else { BuildOptions::default() };
    if let Some(c) = cutoff {
        opts.cutoff = c;
    }
    let inner = py.detach(|| rs_build(&plan, &reg, opts)).map_err(py_err)?;
    Ok(Construction { inner })
}

#[pymodule]
fn cdc_workbench_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CdcError", m.py().get_type::<CdcError>())?;
    m.add("RegistryMiss", m.py().get_type::<RegistryMiss>())?;
    m.add("HypothesisViolated", m.py().get_type::<HypothesisViolated>())?;
    m.add_class::<Matrix>()?;
    m.add_class::<Subspace>()?;
    m.add_class::<Code>()?;
    m.add_class::<Construction>()?;
    m.add_function(wrap_pyfunction!(gauss_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(mrd_size, m)?)?;
    m.add_function(wrap_pyfunction!(delsarte_rank_count, m)?)?;
    m.add_function(wrap_pyfunction!(bounded_rank_size, m)?)?;
    m.add_function(wrap_pyfunction!(lift, m)?)?;
    m.add_function(wrap_pyfunction!(gabidulin, m)?)?;
    m.add_function(wrap_pyfunction!(bound, m)?)?;
    m.add_function(wrap_pyfunction!(cor45_poly, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce_table, m)?)?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    Ok(())
}
