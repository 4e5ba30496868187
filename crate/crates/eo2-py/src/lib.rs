//! Python bindings for the eo2 engine.
//!
//! Exposes the two main types (`Module`, `Curve`) and the classification
//! helpers. Field elements cross the boundary as bitmask integers, the
//! same encoding the JSON curve files use.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use eo2::classify::{enumerate_strata as strata, partition_count as pcount, verify_main};
use eo2::curve::{BranchDatum, CurveData, CurveFile, FieldParams, RationalParts};
use eo2::drham::build_drham;
use eo2::field::{FieldCtx, Gf};
use eo2::gc::{gc, gc_relations, gc_summands, ordinary, GcRelation};
use eo2::semilin::SemilinearModule;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn ctx_from(n: u32, modulus: Option<u32>) -> PyResult<FieldCtx> {
    match modulus {
        Some(m) => FieldCtx::with_modulus(n, m).map_err(err),
        None => FieldCtx::new(n).map_err(err),
    }
}

fn require_positive(c: usize) -> PyResult<()> {
    if c == 0 {
        return Err(PyValueError::new_err("c must be at least 1"));
    }
    Ok(())
}

/// Converts a Python vector of bitmask integers into field elements.
fn to_vec(k: &FieldCtx, v: &[u32]) -> PyResult<Vec<Gf>> {
    v.iter().map(|&b| k.element(b).map_err(err)).collect()
}

fn mat_rows(m: &eo2::matrix::Mat) -> Vec<Vec<u16>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|g| g.0).collect())
        .collect()
}

/// A finite-dimensional module over GF(2^n) with a Frobenius-semilinear F
/// and an inverse-Frobenius-semilinear V satisfying FV = VF = 0.
#[pyclass(frozen)]
struct Module {
    inner: SemilinearModule,
}

#[pymethods]
impl Module {
    /// The self-dual building block G_c (dimension 2c).
    #[staticmethod]
    #[pyo3(signature = (c, n=1, modulus=None))]
    fn gc(c: usize, n: u32, modulus: Option<u32>) -> PyResult<Self> {
        require_positive(c)?;
        let k = ctx_from(n, modulus)?;
        Ok(Module { inner: gc(&k, c) })
    }

    /// The 2-dimensional ordinary block Z/2 + mu_2.
    #[staticmethod]
    #[pyo3(signature = (n=1, modulus=None))]
    fn ordinary(n: u32, modulus: Option<u32>) -> PyResult<Self> {
        let k = ctx_from(n, modulus)?;
        Ok(Module { inner: ordinary(&k) })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn field_degree(&self) -> u32 {
        self.inner.ctx().n()
    }

    /// The type [nu_1, ..., nu_g] read off the canonical filtration.
    fn eo_type(&self) -> PyResult<Vec<usize>> {
        Ok(self.inner.eo_type().map_err(err)?.as_slice().to_vec())
    }

    fn a_number(&self) -> PyResult<usize> {
        self.inner.a_number().map_err(err)
    }

    fn p_rank(&self) -> PyResult<usize> {
        self.inner.p_rank().map_err(err)
    }

    /// Runs the structural axioms; returns {"valid": bool, "failures": [...]}.
    fn check<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let rep = self.inner.check_bt1();
        let d = PyDict::new(py);
        d.set_item("valid", rep.is_valid())?;
        d.set_item("dim", rep.dim)?;
        d.set_item("rank_f", rep.rank_f)?;
        d.set_item("rank_v", rep.rank_v)?;
        d.set_item("failures", rep.failures)?;
        Ok(d)
    }

    /// Matrix of F, row-major; F(v) = f_matrix . v^(2) entrywise-squared.
    fn f_matrix(&self) -> Vec<Vec<u16>> {
        mat_rows(self.inner.f_mat())
    }

    /// Matrix of V, row-major; V(v) = v_matrix . v^(1/2) entrywise-rooted.
    fn v_matrix(&self) -> Vec<Vec<u16>> {
        mat_rows(self.inner.v_mat())
    }

    fn apply_f(&self, v: Vec<u32>) -> PyResult<Vec<u16>> {
        let x = to_vec(self.inner.ctx(), &v)?;
        if x.len() != self.inner.dim() {
            return Err(PyValueError::new_err("vector length != module dimension"));
        }
        Ok(self.inner.apply_f(&x).iter().map(|g| g.0).collect())
    }

    fn apply_v(&self, v: Vec<u32>) -> PyResult<Vec<u16>> {
        let x = to_vec(self.inner.ctx(), &v)?;
        if x.len() != self.inner.dim() {
            return Err(PyValueError::new_err("vector length != module dimension"));
        }
        Ok(self.inner.apply_v(&x).iter().map(|g| g.0).collect())
    }

    /// Block-diagonal sum with another module over the same field.
    fn direct_sum(&self, other: &Module) -> PyResult<Module> {
        let inner = SemilinearModule::direct_sum(&[&self.inner, &other.inner]).map_err(err)?;
        Ok(Module { inner })
    }

    fn __repr__(&self) -> String {
        format!(
            "<Module dim={} over GF(2^{})>",
            self.inner.dim(),
            self.inner.ctx().n()
        )
    }
}

/// An Artin-Schreier curve y^2 - y = f(x) in standard form: a set of
/// branch points alpha with odd-order partial-fraction tails.
#[pyclass(frozen)]
struct Curve {
    inner: CurveData,
}

impl Curve {
    fn inv(&self) -> eo2::curve::Invariants {
        self.inner.invariants()
    }
}

#[pymethods]
impl Curve {
    /// Standard form: branches = [(alpha, [a_0, ..., a_c]), ...] where a_i
    /// multiplies (x - alpha)^-(2i+1); all values are field bitmasks.
    #[new]
    #[pyo3(signature = (n, branches, modulus=None))]
    fn new(n: u32, branches: Vec<(u32, Vec<u32>)>, modulus: Option<u32>) -> PyResult<Self> {
        let k = ctx_from(n, modulus)?;
        let mut data = Vec::with_capacity(branches.len());
        for (alpha, coeffs) in &branches {
            data.push(BranchDatum {
                alpha: k.element(*alpha).map_err(err)?,
                coeffs: to_vec(&k, coeffs)?,
            });
        }
        Ok(Curve {
            inner: CurveData::new(k, data).map_err(err)?,
        })
    }

    /// From a rational function f = num/den (ascending bitmask coefficient
    /// lists), reduced to standard form; `moebius` moves a pole at
    /// infinity to a finite point first.
    #[staticmethod]
    #[pyo3(signature = (n, num, den, modulus=None, moebius=true))]
    fn from_function(
        n: u32,
        num: Vec<u32>,
        den: Vec<u32>,
        modulus: Option<u32>,
        moebius: bool,
    ) -> PyResult<Self> {
        let file = CurveFile {
            field: FieldParams { n, modulus },
            f: Some(RationalParts { num, den }),
            branches: None,
        };
        Ok(Curve {
            inner: file.load(moebius).map_err(err)?,
        })
    }

    /// A random curve with the given ramification invariants (odd pole
    /// orders), deterministic in the seed.
    #[staticmethod]
    #[pyo3(signature = (n, d_multiset, seed, modulus=None))]
    fn random(n: u32, d_multiset: Vec<usize>, seed: u64, modulus: Option<u32>) -> PyResult<Self> {
        let k = ctx_from(n, modulus)?;
        Ok(Curve {
            inner: eo2::curve::random_curve(&k, &d_multiset, seed).map_err(err)?,
        })
    }

    #[getter]
    fn genus(&self) -> usize {
        self.inv().genus
    }

    /// The 2-rank r = #branches - 1.
    #[getter]
    fn two_rank(&self) -> usize {
        self.inv().two_rank
    }

    #[getter]
    fn a_number(&self) -> usize {
        self.inv().a_number
    }

    /// Ramification invariants (odd pole orders), descending.
    #[getter]
    fn d_multiset(&self) -> Vec<usize> {
        self.inv().d_multiset
    }

    #[getter]
    fn field_degree(&self) -> u32 {
        self.inner.ctx().n()
    }

    /// Branch data as [(alpha, [a_0, ..., a_c]), ...] bitmasks.
    fn branches(&self) -> Vec<(u16, Vec<u16>)> {
        self.inner
            .branches()
            .iter()
            .map(|b| (b.alpha.0, b.coeffs.iter().map(|c| c.0).collect()))
            .collect()
    }

    /// The 2-torsion module of the Jacobian, computed from the de Rham
    /// cohomology of the curve.
    fn module(&self) -> Module {
        Module {
            inner: build_drham(&self.inner).module,
        }
    }

    fn eo_type(&self) -> PyResult<Vec<usize>> {
        self.module().eo_type()
    }

    /// Cross-checks the direct computation against the closed-form
    /// decomposition and invariant formulas; returns the full report.
    fn verify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let rep = verify_main(&self.inner);
        let d = PyDict::new(py);
        d.set_item("stratum", rep.stratum)?;
        let dec = PyDict::new(py);
        dec.set_item("r", rep.decomposition.r)?;
        dec.set_item("c_multiset", rep.decomposition.c_multiset)?;
        d.set_item("decomposition", dec)?;
        d.set_item("g", rep.g)?;
        d.set_item("r", rep.r)?;
        d.set_item("a", rep.a)?;
        d.set_item("eo_type", rep.eo_type)?;
        d.set_item("verified", rep.verified)?;
        d.set_item("failures", rep.failures)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        let inv = self.inv();
        format!(
            "<Curve g={} d={:?} over GF(2^{})>",
            inv.genus,
            inv.d_multiset,
            self.inner.ctx().n()
        )
    }
}

/// All strata of genus g: one entry per multiset of odd pole orders.
#[pyfunction]
#[pyo3(name = "enumerate_strata")]
fn enumerate_strata_py(py: Python<'_>, g: usize) -> PyResult<Bound<'_, PyList>> {
    let out = PyList::empty(py);
    for s in strata(g) {
        let d = PyDict::new(py);
        d.set_item("d_multiset", s.d_multiset)?;
        let dec = PyDict::new(py);
        dec.set_item("r", s.decomposition.r)?;
        dec.set_item("c_multiset", s.decomposition.c_multiset)?;
        d.set_item("decomposition", dec)?;
        d.set_item("eo_type", s.eo_type)?;
        d.set_item("a", s.a)?;
        d.set_item("p_rank", s.p_rank)?;
        out.append(d)?;
    }
    Ok(out)
}

/// Number of integer partitions of n; strata of genus g are counted by
/// partition_count(g + 1).
#[pyfunction]
#[pyo3(name = "partition_count")]
fn partition_count_py(n: usize) -> u64 {
    pcount(n)
}

/// Presentation relations of G_c, rendered like "F²X₂+VX₂".
#[pyfunction]
#[pyo3(name = "gc_relations")]
fn gc_relations_py(c: usize) -> PyResult<Vec<String>> {
    require_positive(c)?;
    Ok(gc_relations(c).iter().map(GcRelation::render).collect())
}

/// Number of indecomposable summands of G_c.
#[pyfunction]
#[pyo3(name = "gc_summands")]
fn gc_summands_py(c: usize) -> PyResult<usize> {
    require_positive(c)?;
    Ok(gc_summands(c))
}

#[pymodule]
fn eo2py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Module>()?;
    m.add_class::<Curve>()?;
    m.add_function(wrap_pyfunction!(enumerate_strata_py, m)?)?;
    m.add_function(wrap_pyfunction!(partition_count_py, m)?)?;
    m.add_function(wrap_pyfunction!(gc_relations_py, m)?)?;
    m.add_function(wrap_pyfunction!(gc_summands_py, m)?)?;
    Ok(())
}
