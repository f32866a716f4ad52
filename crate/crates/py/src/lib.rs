//! Python bindings: thin wrappers around the core types. Scalars cross
//! the boundary as Python complex numbers, matrices as nested lists, and
//! the structured check reports as JSON strings.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use groupoidal_core::algebra::{DensityWeights, GFunction};
use groupoidal_core::groupoid::{
    build_action_groupoid, build_cyclic_group, build_pair_groupoid, build_quantum_ratchet,
    build_symmetric_s3, FiniteGroupoid, MorphismId, ObjectId,
};
use groupoidal_core::kernels::{
    check_quasi_invariant, GKernel, ModularFunction, ObjectMeasure, QuasiInvReading,
};
use groupoidal_core::linalg::{CMat, CVec};
use groupoidal_core::rep::{
    extend_from_isotropy, rebuild_from_pair, split_along_section, Equivalence, RepPair, Representation,
};
use groupoidal_core::tannaka;
use groupoidal_core::CoreError;

type C = Complex64;
type PyMat = Vec<Vec<C>>;

fn err(e: CoreError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn mat_to_py(m: &CMat) -> PyMat {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn mat_from_py(rows: PyMat) -> PyResult<CMat> {
    let nrows = rows.len();
    let ncols = rows.first().map(Vec::len).unwrap_or(0);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(PyValueError::new_err("matrix rows have unequal lengths"));
    }
    Ok(CMat::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

/// A finite groupoid with explicit composition and inverse tables.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Groupoid {
    inner: Arc<FiniteGroupoid>,
}

#[pymethods]
impl Groupoid {
    /// The 12-morphism quantum-ratchet groupoid on the objects "-", "+".
    #[staticmethod]
    fn quantum_ratchet() -> Groupoid {
        Groupoid {
            inner: Arc::new(build_quantum_ratchet()),
        }
    }

    /// Pair groupoid on n objects.
    #[staticmethod]
    fn pair(n: usize) -> PyResult<Groupoid> {
        Ok(Groupoid {
            inner: Arc::new(build_pair_groupoid(n).map_err(err)?),
        })
    }

    /// Cyclic group Z_n as a one-object groupoid.
    #[staticmethod]
    fn cyclic(n: usize) -> PyResult<Groupoid> {
        Ok(Groupoid {
            inner: Arc::new(build_cyclic_group(n).map_err(err)?),
        })
    }

    /// The symmetric group S3 as a one-object groupoid.
    #[staticmethod]
    fn symmetric_s3() -> Groupoid {
        Groupoid {
            inner: Arc::new(build_symmetric_s3()),
        }
    }

    /// Action groupoid of a permutation with the acting group Z/period.
    #[staticmethod]
    fn action(perm: Vec<usize>, period: usize) -> PyResult<Groupoid> {
        Ok(Groupoid {
            inner: Arc::new(build_action_groupoid(&perm, period).map_err(err)?),
        })
    }

    /// Parse a groupoid presentation from its JSON text.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Groupoid> {
        Ok(Groupoid {
            inner: Arc::new(groupoidal_core::io::groupoid_from_json(text).map_err(err)?),
        })
    }

    fn to_json(&self) -> String {
        groupoidal_core::io::groupoid_to_json(&self.inner)
    }

    #[getter]
    fn num_objects(&self) -> usize {
        self.inner.num_objects()
    }

    #[getter]
    fn num_morphisms(&self) -> usize {
        self.inner.num_morphisms()
    }

    fn objects(&self) -> Vec<String> {
        self.inner.objects().iter().map(|o| o.0.clone()).collect()
    }

    fn morphisms(&self) -> Vec<String> {
        self.inner.morphisms().iter().map(|m| m.0.clone()).collect()
    }

    fn source(&self, m: &str) -> PyResult<String> {
        Ok(self.inner.source(&m.into()).map_err(err)?.0.clone())
    }

    fn range(&self, m: &str) -> PyResult<String> {
        Ok(self.inner.range(&m.into()).map_err(err)?.0.clone())
    }

    fn unit(&self, o: &str) -> PyResult<String> {
        Ok(self.inner.unit(&o.into()).map_err(err)?.0.clone())
    }

    fn compose(&self, a: &str, b: &str) -> PyResult<String> {
        Ok(self
            .inner
            .compose(&a.into(), &b.into())
            .map_err(err)?
            .0
            .clone())
    }

    fn inverse(&self, m: &str) -> PyResult<String> {
        Ok(self.inner.inverse(&m.into()).map_err(err)?.0.clone())
    }

    /// Fiber G_a^b; pass None for a wildcard endpoint.
    #[pyo3(signature = (a=None, b=None))]
    fn fiber(&self, a: Option<&str>, b: Option<&str>) -> PyResult<Vec<String>> {
        let a = a.map(ObjectId::from);
        let b = b.map(ObjectId::from);
        Ok(self
            .inner
            .fiber(a.as_ref(), b.as_ref())
            .map_err(err)?
            .into_iter()
            .map(|m| m.0)
            .collect())
    }

    fn isotropy(&self, a: &str) -> PyResult<Groupoid> {
        Ok(Groupoid {
            inner: Arc::new(self.inner.isotropy_group(&a.into()).map_err(err)?),
        })
    }

    fn connected_components(&self) -> Vec<Vec<String>> {
        self.inner
            .connected_components()
            .into_iter()
            .map(|c| c.into_iter().map(|o| o.0).collect())
            .collect()
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn is_group(&self) -> bool {
        self.inner.is_group()
    }

    fn is_abelian(&self) -> bool {
        self.inner.is_abelian()
    }

    /// Axiom violations as a JSON string (empty list means valid).
    fn validate(&self) -> String {
        serde_json::to_string(&self.inner.validate()).expect("report serializes")
    }

    fn is_valid(&self) -> bool {
        self.inner.validate().is_valid()
    }

    /// The canonical section at an anchor: object → morphism.
    fn section(&self, anchor: &str) -> PyResult<BTreeMap<String, String>> {
        let s = self.inner.section_omega(&anchor.into()).map_err(err)?;
        Ok(s.entries()
            .map(|(o, m)| (o.0.clone(), m.0.clone()))
            .collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "Groupoid({} objects, {} morphisms)",
            self.inner.num_objects(),
            self.inner.num_morphisms()
        )
    }
}

/// A complex-valued function on the morphisms of a groupoid.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Function {
    inner: GFunction,
}

#[pymethods]
impl Function {
    #[staticmethod]
    fn zero(g: &Groupoid) -> Function {
        Function {
            inner: GFunction::zero(g.inner.clone()),
        }
    }

    /// The canonical potential χ_m.
    #[staticmethod]
    fn indicator(g: &Groupoid, m: &str) -> PyResult<Function> {
        Ok(Function {
            inner: GFunction::indicator(g.inner.clone(), &m.into()).map_err(err)?,
        })
    }

    #[staticmethod]
    fn constant(g: &Groupoid, value: C) -> Function {
        Function {
            inner: GFunction::constant(g.inner.clone(), value),
        }
    }

    #[staticmethod]
    fn from_values(g: &Groupoid, values: BTreeMap<String, C>) -> PyResult<Function> {
        let map: BTreeMap<MorphismId, C> = values
            .into_iter()
            .map(|(k, v)| (MorphismId(k), v))
            .collect();
        Ok(Function {
            inner: GFunction::from_values(g.inner.clone(), &map).map_err(err)?,
        })
    }

    fn get(&self, m: &str) -> PyResult<C> {
        self.inner.get(&m.into()).map_err(err)
    }

    fn values(&self) -> BTreeMap<String, C> {
        self.inner
            .to_id_map()
            .into_iter()
            .map(|(k, v)| (k.0, v))
            .collect()
    }

    fn adjoint(&self) -> Function {
        Function {
            inner: self.inner.adjoint(),
        }
    }

    fn convolve(&self, other: &Function) -> PyResult<Function> {
        Ok(Function {
            inner: self.inner.convolve(&other.inner).map_err(err)?,
        })
    }

    fn convolve_haar(&self, other: &Function, kernel: &Kernel) -> PyResult<Function> {
        Ok(Function {
            inner: self
                .inner
                .convolve_haar(&other.inner, &kernel.inner)
                .map_err(err)?,
        })
    }

    fn add(&self, other: &Function) -> PyResult<Function> {
        Ok(Function {
            inner: self.inner.add(&other.inner).map_err(err)?,
        })
    }

    fn scale(&self, c: C) -> Function {
        Function {
            inner: self.inner.scale(c),
        }
    }

    fn sup_norm(&self) -> f64 {
        self.inner.sup_norm()
    }

    fn approx_eq(&self, other: &Function, tol: f64) -> bool {
        self.inner.approx_eq(&other.inner, tol)
    }
}

/// A fibered coefficient family (finite Haar system).
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Kernel {
    inner: GKernel,
}

#[pymethods]
impl Kernel {
    #[staticmethod]
    fn counting(g: &Groupoid) -> Kernel {
        Kernel {
            inner: GKernel::counting(g.inner.clone()),
        }
    }

    /// coeffs: object → (morphism → weight); rejects unfibered entries.
    #[staticmethod]
    #[pyo3(signature = (g, coeffs, full_support=false))]
    fn from_coeffs(
        g: &Groupoid,
        coeffs: BTreeMap<String, BTreeMap<String, f64>>,
        full_support: bool,
    ) -> PyResult<Kernel> {
        let mut map = BTreeMap::new();
        for (o, per) in coeffs {
            for (m, t) in per {
                map.insert((ObjectId(o.clone()), MorphismId(m)), t);
            }
        }
        Ok(Kernel {
            inner: GKernel::new(g.inner.clone(), &map, full_support).map_err(err)?,
        })
    }

    fn with_coeff(&self, a: &str, m: &str, t: f64) -> PyResult<Kernel> {
        Ok(Kernel {
            inner: self
                .inner
                .with_coeff(&a.into(), &m.into(), t)
                .map_err(err)?,
        })
    }

    fn coeff(&self, a: &str, m: &str) -> PyResult<f64> {
        self.inner.coeff(&a.into(), &m.into()).map_err(err)
    }

    /// λ(f) as a map object → value.
    fn apply(&self, f: &Function) -> PyResult<BTreeMap<String, C>> {
        Ok(self
            .inner
            .apply(&f.inner)
            .map_err(err)?
            .into_iter()
            .map(|(o, v)| (o.0, v))
            .collect())
    }

    fn is_transverse(&self) -> bool {
        self.inner.is_transverse()
    }

    /// Transversality violations as a JSON string.
    fn transverse_report(&self) -> String {
        serde_json::to_string(&self.inner.check_transverse()).expect("report serializes")
    }

    fn is_faithful(&self) -> bool {
        self.inner.is_faithful()
    }
}

/// A measure on the objects.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Measure {
    inner: ObjectMeasure,
}

#[pymethods]
impl Measure {
    #[staticmethod]
    fn uniform(g: &Groupoid) -> Measure {
        Measure {
            inner: ObjectMeasure::uniform(g.inner.clone()),
        }
    }

    #[staticmethod]
    fn from_weights(g: &Groupoid, weights: BTreeMap<String, f64>) -> PyResult<Measure> {
        let map: BTreeMap<ObjectId, f64> = weights
            .into_iter()
            .map(|(k, v)| (ObjectId(k), v))
            .collect();
        Ok(Measure {
            inner: ObjectMeasure::new(g.inner.clone(), &map).map_err(err)?,
        })
    }

    fn weight(&self, o: &str) -> PyResult<f64> {
        self.inner.weight(&o.into()).map_err(err)
    }
}

/// A positive multiplicative cocycle on the morphisms.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Modular {
    inner: ModularFunction,
}

#[pymethods]
impl Modular {
    #[staticmethod]
    fn constant_one(g: &Groupoid) -> Modular {
        Modular {
            inner: ModularFunction::constant_one(g.inner.clone()),
        }
    }

    /// Δ(α) = exp(φ(s(α)) − φ(r(α))) from a potential on the objects.
    #[staticmethod]
    fn from_potential(g: &Groupoid, phi: BTreeMap<String, f64>) -> PyResult<Modular> {
        let map: BTreeMap<ObjectId, f64> =
            phi.into_iter().map(|(k, v)| (ObjectId(k), v)).collect();
        Ok(Modular {
            inner: ModularFunction::from_potential(g.inner.clone(), &map).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_values(g: &Groupoid, values: BTreeMap<String, f64>) -> PyResult<Modular> {
        let map: BTreeMap<MorphismId, f64> = values
            .into_iter()
            .map(|(k, v)| (MorphismId(k), v))
            .collect();
        Ok(Modular {
            inner: ModularFunction::new(g.inner.clone(), &map).map_err(err)?,
        })
    }

    fn value(&self, m: &str) -> PyResult<f64> {
        self.inner.value(&m.into()).map_err(err)
    }

    fn is_modular(&self) -> bool {
        self.inner.is_modular()
    }
}

/// A finite-dimensional representation.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Rep {
    inner: Representation,
}

#[pymethods]
impl Rep {
    #[staticmethod]
    fn trivial(g: &Groupoid) -> Rep {
        Rep {
            inner: Representation::trivial(g.inner.clone()),
        }
    }

    /// Left-regular representation of a one-object groupoid.
    #[staticmethod]
    fn regular(g: &Groupoid) -> PyResult<Rep> {
        Ok(Rep {
            inner: Representation::regular(&g.inner).map_err(err)?,
        })
    }

    /// Build from per-object dimensions and per-morphism complex matrices.
    #[staticmethod]
    fn from_mats(
        g: &Groupoid,
        dims: BTreeMap<String, usize>,
        mats: BTreeMap<String, PyMat>,
    ) -> PyResult<Rep> {
        let dims: BTreeMap<ObjectId, usize> =
            dims.into_iter().map(|(k, v)| (ObjectId(k), v)).collect();
        let mut ms = BTreeMap::new();
        for (k, rows) in mats {
            ms.insert(MorphismId(k), mat_from_py(rows)?);
        }
        Ok(Rep {
            inner: Representation::new(g.inner.clone(), &dims, &ms).map_err(err)?,
        })
    }

    fn mat(&self, m: &str) -> PyResult<PyMat> {
        Ok(mat_to_py(self.inner.mat(&m.into()).map_err(err)?))
    }

    fn dims(&self) -> BTreeMap<String, usize> {
        self.inner
            .base()
            .objects()
            .iter()
            .enumerate()
            .map(|(i, o)| (o.0.clone(), self.inner.dim_idx(i)))
            .collect()
    }

    fn is_representation(&self) -> bool {
        self.inner.is_representation()
    }

    fn is_unitary(&self) -> bool {
        self.inner.is_unitary()
    }

    fn direct_sum(&self, other: &Rep) -> PyResult<Rep> {
        Ok(Rep {
            inner: self.inner.direct_sum(&other.inner).map_err(err)?,
        })
    }

    fn tensor_product(&self, other: &Rep) -> PyResult<Rep> {
        Ok(Rep {
            inner: self.inner.tensor_product(&other.inner).map_err(err)?,
        })
    }

    /// α ↦ Λ(α⁻¹); functorial only for commuting images.
    fn conjugate(&self) -> Rep {
        Rep {
            inner: self.inner.conjugate_rep(),
        }
    }

    /// The entrywise conjugate Λ̄; always a representation.
    fn entrywise_conjugate(&self) -> Rep {
        Rep {
            inner: self.inner.entrywise_conjugate(),
        }
    }

    fn commutant_dimension(&self) -> PyResult<usize> {
        self.inner.commutant_dimension().map_err(err)
    }

    fn is_irreducible(&self) -> PyResult<bool> {
        self.inner.is_irreducible().map_err(err)
    }

    /// True / False, or None when the randomized test is undecided.
    #[pyo3(signature = (other, seed=0))]
    fn equivalent(&self, other: &Rep, seed: u64) -> PyResult<Option<bool>> {
        match self.inner.equivalence(&other.inner, seed).map_err(err)? {
            Equivalence::Equivalent(_) => Ok(Some(true)),
            Equivalence::Inequivalent => Ok(Some(false)),
            Equivalence::Undecided => Ok(None),
        }
    }

    /// Irreducible pieces of a unitary representation.
    #[pyo3(signature = (seed=0))]
    fn decompose(&self, seed: u64) -> PyResult<Vec<Rep>> {
        Ok(self
            .inner
            .decompose(seed)
            .map_err(err)?
            .pieces
            .into_iter()
            .map(|p| Rep { inner: p.rep })
            .collect())
    }

    fn restrict_isotropy(&self, a: &str) -> PyResult<Rep> {
        Ok(Rep {
            inner: self.inner.restrict_to_isotropy(&a.into()).map_err(err)?,
        })
    }

    fn approx_eq(&self, other: &Rep, tol: f64) -> bool {
        self.inner.approx_eq(&other.inner, tol)
    }
}

/// ρ(f) for density weights summing to 1.
#[pyfunction]
fn apply_density(g: &Groupoid, weights: BTreeMap<String, C>, f: &Function) -> PyResult<C> {
    let map: BTreeMap<MorphismId, C> = weights
        .into_iter()
        .map(|(k, v)| (MorphismId(k), v))
        .collect();
    let rho = DensityWeights::new(g.inner.clone(), &map).map_err(err)?;
    rho.apply(&f.inner).map_err(err)
}

/// Mean value of a function on a one-object groupoid (finite group).
#[pyfunction]
fn mean_value(f: &Function) -> PyResult<C> {
    tannaka::mean_value(&f.inner).map_err(err)
}

/// The matrix coefficient α ↦ Σ v_i Λ_ij(α) u_j.
#[pyfunction]
fn matrix_coefficient(rep: &Rep, u: Vec<C>, v: Vec<C>) -> PyResult<Function> {
    let u = CVec::from_vec(u);
    let v = CVec::from_vec(v);
    Ok(Function {
        inner: tannaka::matrix_coefficient(&rep.inner, &u, &v).map_err(err)?,
    })
}

/// The averaged projector (1/|G|) Σ λ(x) onto the fixed subspace.
#[pyfunction]
fn fixed_space_projector(rep: &Rep) -> PyResult<PyMat> {
    Ok(mat_to_py(
        &tannaka::fixed_space_projector(&rep.inner).map_err(err)?,
    ))
}

/// LHS − RHS of the quasi-invariance identity for one function.
#[pyfunction]
#[pyo3(signature = (measure, kernel, modular, f, alternate_reading=false))]
fn quasi_invariant_residual(
    measure: &Measure,
    kernel: &Kernel,
    modular: &Modular,
    f: &Function,
    alternate_reading: bool,
) -> PyResult<C> {
    let reading = if alternate_reading {
        QuasiInvReading::SourceFiber
    } else {
        QuasiInvReading::Literal
    };
    check_quasi_invariant(
        &measure.inner,
        &kernel.inner,
        &modular.inner,
        &f.inner,
        reading,
    )
    .map_err(err)
}

/// Split a unitary representation at an anchor into (isotropy rep, μ).
#[pyfunction]
fn split_rep(rep: &Rep, anchor: &str) -> PyResult<(Rep, BTreeMap<String, PyMat>)> {
    let g = rep.inner.base().clone();
    let section = g.section_omega(&anchor.into()).map_err(err)?;
    let pair = split_along_section(&rep.inner, &section).map_err(err)?;
    let mu = g
        .objects()
        .iter()
        .enumerate()
        .map(|(i, o)| (o.0.clone(), mat_to_py(&pair.mu()[i])))
        .collect();
    Ok((
        Rep {
            inner: pair.lambda().clone(),
        },
        mu,
    ))
}

/// Rebuild a representation from (isotropy rep, μ) at an anchor.
#[pyfunction]
fn rebuild_rep(
    g: &Groupoid,
    anchor: &str,
    lambda: &Rep,
    mu: BTreeMap<String, PyMat>,
) -> PyResult<Rep> {
    let section = g.inner.section_omega(&anchor.into()).map_err(err)?;
    let mut mats = Vec::new();
    for o in g.inner.objects() {
        let rows = mu
            .get(&o.0)
            .ok_or_else(|| PyValueError::new_err(format!("missing μ for object `{o}`")))?;
        mats.push(mat_from_py(rows.clone())?);
    }
    let pair = RepPair::new(
        g.inner.clone(),
        ObjectId::from(anchor),
        lambda.inner.clone(),
        mats,
    )
    .map_err(err)?;
    Ok(Rep {
        inner: rebuild_from_pair(&pair, &section).map_err(err)?,
    })
}

/// Extend an isotropy representation along ω to the whole groupoid.
#[pyfunction]
fn extend_rep(g: &Groupoid, lambda: &Rep, omega: &str, anchor: &str) -> PyResult<Rep> {
    let section = g.inner.section_omega(&anchor.into()).map_err(err)?;
    Ok(Rep {
        inner: extend_from_isotropy(&g.inner, &lambda.inner, &omega.into(), &section)
            .map_err(err)?,
    })
}

/// Full reconstruction check with a generated separating family;
/// returns the report as a JSON string.
#[pyfunction]
#[pyo3(signature = (g, seed=0))]
fn phi_check(g: &Groupoid, seed: u64) -> PyResult<String> {
    let (family, separation, attempts) =
        tannaka::separating_family(&g.inner, seed).map_err(err)?;
    let rec = tannaka::check_reconstruction(&family).map_err(err)?;
    let value = serde_json::json!({
        "separates": separation.separates(),
        "attempts": attempts,
        "report": rec,
    });
    Ok(value.to_string())
}

/// Monoidal-assignment enumeration on the dual of a finite abelian group;
/// returns the report as a JSON string.
#[pyfunction]
#[pyo3(signature = (g, seed=0))]
fn abelian_duality(g: &Groupoid, seed: u64) -> PyResult<String> {
    let report = tannaka::abelian_tannaka_surjectivity(&g.inner, seed).map_err(err)?;
    serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn groupoidal_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Groupoid>()?;
    m.add_class::<Function>()?;
    m.add_class::<Kernel>()?;
    m.add_class::<Measure>()?;
    m.add_class::<Modular>()?;
    m.add_class::<Rep>()?;
    m.add_function(wrap_pyfunction!(apply_density, m)?)?;
    m.add_function(wrap_pyfunction!(mean_value, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_space_projector, m)?)?;
    m.add_function(wrap_pyfunction!(quasi_invariant_residual, m)?)?;
    m.add_function(wrap_pyfunction!(split_rep, m)?)?;
    m.add_function(wrap_pyfunction!(rebuild_rep, m)?)?;
    m.add_function(wrap_pyfunction!(extend_rep, m)?)?;
    m.add_function(wrap_pyfunction!(phi_check, m)?)?;
    m.add_function(wrap_pyfunction!(abelian_duality, m)?)?;
    Ok(())
}
