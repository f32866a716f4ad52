//! Finite-dimensional representations of finite groupoids: functoriality
//! and unitarity checks, direct sums, tensor products, conjugates,
//! intertwiners and equivalence, commutant-based irreducibility and
//! decomposition, and the correspondence between groupoid representations
//! and pairs (isotropy representation, section images).
//!
//! A representation sends each object x to a space V_x and each morphism
//! α to a matrix Λ(α) of shape dim(s(α)) × dim(r(α)); dimensions are
//! constant on connected components, so every matrix is square. The
//! defining identity is Λ(α·β) = Λ(α) Λ(β) together with Λ(unit) = Id.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CoreError;
use crate::groupoid::{same_base, FiniteGroupoid, MorphismId, ObjectId, Section};
use crate::linalg::{
    self, direct_sum, eig_hermitian, identity, is_unitary, kron, max_abs_diff, null_space, CMat,
};
use crate::{Result, CLUSTER_TOL, TOL};

type C = Complex64;

/// A linear representation of a finite groupoid.
#[derive(Debug, Clone)]
pub struct Representation {
    base: Arc<FiniteGroupoid>,
    dims: Vec<usize>,
    mats: Vec<CMat>,
}

impl Representation {
    /// Builds a representation from per-object dimensions and
    /// per-morphism matrices. Checks shapes and the constancy of the
    /// dimension on connected components, but not functoriality — that is
    /// the job of [`Representation::check_representation`].
    pub fn new(
        base: Arc<FiniteGroupoid>,
        dims: &BTreeMap<ObjectId, usize>,
        mats: &BTreeMap<MorphismId, CMat>,
    ) -> Result<Representation> {
        let mut dim_vec = vec![0usize; base.num_objects()];
        for (o, &d) in dims {
            if d == 0 {
                return Err(CoreError::DimensionMismatch(format!(
                    "object `{o}` must carry a positive dimension"
                )));
            }
            dim_vec[base.require_object(o)?] = d;
        }
        if let Some(o) = dim_vec.iter().position(|&d| d == 0) {
            return Err(CoreError::DimensionMismatch(format!(
                "missing dimension for object `{}`",
                base.object(o)
            )));
        }
        for comp in base.connected_components() {
            let d0 = dim_vec[base.require_object(&comp[0])?];
            for o in &comp {
                if dim_vec[base.require_object(o)?] != d0 {
                    return Err(CoreError::DimensionMismatch(format!(
                        "dimension must be constant on the component of `{}`",
                        comp[0]
                    )));
                }
            }
        }

        let mut mat_vec = vec![CMat::zeros(0, 0); base.num_morphisms()];
        let mut seen = vec![false; base.num_morphisms()];
        for (m, mat) in mats {
            let i = base.require_morphism(m)?;
            let want = (dim_vec[base.src_idx(i)], dim_vec[base.rng_idx(i)]);
            if mat.shape() != want {
                return Err(CoreError::DimensionMismatch(format!(
                    "matrix for `{m}` has shape {:?}, expected {:?}",
                    mat.shape(),
                    want
                )));
            }
            mat_vec[i] = mat.clone();
            seen[i] = true;
        }
        if let Some(i) = seen.iter().position(|&s| !s) {
            return Err(CoreError::DimensionMismatch(format!(
                "missing matrix for morphism `{}`",
                base.morphism(i)
            )));
        }
        Ok(Representation {
            base,
            dims: dim_vec,
            mats: mat_vec,
        })
    }

    /// The identity representation of the given dimension: every morphism
    /// acts as the identity matrix.
    pub fn identity_rep(base: Arc<FiniteGroupoid>, dim: usize) -> Representation {
        let mats = (0..base.num_morphisms()).map(|_| identity(dim)).collect();
        Representation {
            dims: vec![dim; base.num_objects()],
            mats,
            base,
        }
    }

    /// The one-dimensional trivial representation.
    pub fn trivial(base: Arc<FiniteGroupoid>) -> Representation {
        Representation::identity_rep(base, 1)
    }

    /// Left-regular representation of a group (single-object groupoid):
    /// `Λ(g) e_h = e_{g·h}` in the canonical morphism basis. Unitary and
    /// faithful.
    pub fn regular(group: &Arc<FiniteGroupoid>) -> Result<Representation> {
        if !group.is_group() {
            return Err(CoreError::NotAGroup(group.num_objects()));
        }
        let n = group.num_morphisms();
        let mats = (0..n)
            .map(|g| {
                CMat::from_fn(n, n, |i, j| {
                    if group.comp_idx(g, j) == Some(i) {
                        C::new(1.0, 0.0)
                    } else {
                        C::default()
                    }
                })
            })
            .collect();
        Ok(Representation {
            dims: vec![n],
            mats,
            base: group.clone(),
        })
    }

    pub fn base(&self) -> &Arc<FiniteGroupoid> {
        &self.base
    }

    pub fn dim_idx(&self, o: usize) -> usize {
        self.dims[o]
    }

    pub fn dim(&self, o: &ObjectId) -> Result<usize> {
        Ok(self.dims[self.base.require_object(o)?])
    }

    /// The common dimension when it is constant over all objects
    /// (always the case on a connected groupoid).
    pub fn common_dim(&self) -> Result<usize> {
        let d = self.dims[0];
        if self.dims.iter().all(|&x| x == d) {
            Ok(d)
        } else {
            Err(CoreError::DimensionMismatch(
                "representation has several local dimensions".into(),
            ))
        }
    }

    pub fn mat_idx(&self, m: usize) -> &CMat {
        &self.mats[m]
    }

    pub fn mat(&self, m: &MorphismId) -> Result<&CMat> {
        Ok(&self.mats[self.base.require_morphism(m)?])
    }

    pub fn same_base_as(&self, other: &Representation) -> bool {
        same_base(&self.base, &other.base)
    }

    pub fn approx_eq(&self, other: &Representation, tol: f64) -> bool {
        self.same_base_as(other)
            && self.dims == other.dims
            && self
                .mats
                .iter()
                .zip(&other.mats)
                .all(|(a, b)| max_abs_diff(a, b) <= tol)
    }

    /// Functoriality report: units act as the identity, compositions
    /// multiply, inverses invert.
    pub fn check_representation(&self) -> RepReport {
        let g = &self.base;
        let mut violations = Vec::new();
        let mut max_residual = 0.0_f64;
        for o in 0..g.num_objects() {
            let u = g.unit_idx(o);
            let r = max_abs_diff(&self.mats[u], &identity(self.dims[o]));
            max_residual = max_residual.max(r);
            if r > TOL {
                violations.push(RepViolation {
                    kind: RepViolationKind::UnitNotIdentity,
                    witnesses: vec![g.morphism(u).0.clone()],
                    residual: r,
                });
            }
        }
        for (i, j) in g.composable_pairs() {
            let Some(k) = g.comp_idx(i, j) else { continue };
            let r = max_abs_diff(&self.mats[k], &(&self.mats[i] * &self.mats[j]));
            max_residual = max_residual.max(r);
            if r > TOL {
                violations.push(RepViolation {
                    kind: RepViolationKind::Functoriality,
                    witnesses: vec![g.morphism(i).0.clone(), g.morphism(j).0.clone()],
                    residual: r,
                });
            }
        }
        for i in 0..g.num_morphisms() {
            let inv = g.inv_idx(i);
            let prod = &self.mats[i] * &self.mats[inv];
            let r = max_abs_diff(&prod, &identity(self.dims[self.base.rng_idx(i)]));
            max_residual = max_residual.max(r);
            if r > TOL {
                violations.push(RepViolation {
                    kind: RepViolationKind::InverseMismatch,
                    witnesses: vec![g.morphism(i).0.clone()],
                    residual: r,
                });
            }
        }
        RepReport {
            violations,
            max_residual,
        }
    }

    /// Unitarity report: Λ(α)† Λ(α) = Id for every morphism.
    pub fn check_unitary(&self) -> RepReport {
        let mut violations = Vec::new();
        let mut max_residual = 0.0_f64;
        for i in 0..self.mats.len() {
            let m = &self.mats[i];
            let r = max_abs_diff(&(m.adjoint() * m), &identity(m.ncols()));
            max_residual = max_residual.max(r);
            if r > TOL {
                violations.push(RepViolation {
                    kind: RepViolationKind::NotUnitary,
                    witnesses: vec![self.base.morphism(i).0.clone()],
                    residual: r,
                });
            }
        }
        RepReport {
            violations,
            max_residual,
        }
    }

    pub fn is_representation(&self) -> bool {
        self.check_representation().violations.is_empty()
    }

    pub fn is_unitary(&self) -> bool {
        self.check_unitary().violations.is_empty()
    }

    fn require_unitary(&self, what: &str) -> Result<()> {
        if self.is_unitary() {
            Ok(())
        } else {
            Err(CoreError::NotUnitary(what.into()))
        }
    }

    /// Blockwise direct sum (Λ ⊕ Λ′)(α) = Λ(α) ⊕ Λ′(α).
    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        if !self.same_base_as(other) {
            return Err(CoreError::BaseMismatch);
        }
        Ok(Representation {
            base: self.base.clone(),
            dims: self
                .dims
                .iter()
                .zip(&other.dims)
                .map(|(a, b)| a + b)
                .collect(),
            mats: self
                .mats
                .iter()
                .zip(&other.mats)
                .map(|(a, b)| direct_sum(a, b))
                .collect(),
        })
    }

    /// Kronecker tensor product (Λ ⊗ Λ′)(α) = Λ(α) ⊗ Λ′(α).
    pub fn tensor_product(&self, other: &Representation) -> Result<Representation> {
        if !self.same_base_as(other) {
            return Err(CoreError::BaseMismatch);
        }
        Ok(Representation {
            base: self.base.clone(),
            dims: self
                .dims
                .iter()
                .zip(&other.dims)
                .map(|(a, b)| a * b)
                .collect(),
            mats: self
                .mats
                .iter()
                .zip(&other.mats)
                .map(|(a, b)| kron(a, b))
                .collect(),
        })
    }

    /// The map Λ*(α) = Λ(α⁻¹). Functorial only when the image matrices
    /// commute enough (always in dimension one); run
    /// [`Representation::check_representation`] on the result to find out.
    pub fn conjugate_rep(&self) -> Representation {
        let mats = (0..self.mats.len())
            .map(|i| self.mats[self.base.inv_idx(i)].clone())
            .collect();
        Representation {
            base: self.base.clone(),
            dims: self.dims.clone(),
            mats,
        }
    }

    /// The conjugate representation Λ̄(α) = conj(Λ(α)), entrywise. Always
    /// a representation; for unitary Λ it equals α ↦ Λ(α⁻¹)ᵀ and agrees
    /// with [`Representation::conjugate_rep`] in dimension one.
    pub fn entrywise_conjugate(&self) -> Representation {
        let mats = self.mats.iter().map(CMat::conjugate).collect();
        Representation {
            base: self.base.clone(),
            dims: self.dims.clone(),
            mats,
        }
    }

    /// Restriction to the isotropy group at `a`, as a representation of
    /// the single-object groupoid returned by `isotropy_group`.
    pub fn restrict_to_isotropy(&self, a: &ObjectId) -> Result<Representation> {
        let iso = Arc::new(self.base.isotropy_group(a)?);
        let d = self.dim(a)?;
        let mut dims = BTreeMap::new();
        dims.insert(a.clone(), d);
        let mut mats = BTreeMap::new();
        for m in iso.morphisms() {
            mats.insert(m.clone(), self.mat(m)?.clone());
        }
        Representation::new(iso, &dims, &mats)
    }

    /// Basis of the space of intertwiners φ with
    /// φ_{s(α)} Λ(α) = Λ′(α) φ_{r(α)} for every α, as the null space of
    /// the stacked linear system.
    pub fn intertwiner_space(&self, other: &Representation) -> Result<Vec<Intertwiner>> {
        if !self.same_base_as(other) {
            return Err(CoreError::BaseMismatch);
        }
        let g = &self.base;
        let nobj = g.num_objects();
        // unknowns: vec(φ_x) column-major, φ_x of shape other.dims[x] × self.dims[x]
        let mut offset = vec![0usize; nobj + 1];
        for o in 0..nobj {
            offset[o + 1] = offset[o] + other.dims[o] * self.dims[o];
        }
        let total = offset[nobj];
        let rows: usize = (0..g.num_morphisms())
            .map(|m| other.dims[g.src_idx(m)] * self.dims[g.rng_idx(m)])
            .sum();
        let mut a = CMat::zeros(rows, total);
        let mut row = 0;
        for m in 0..g.num_morphisms() {
            let s = g.src_idx(m);
            let r = g.rng_idx(m);
            let lam = &self.mats[m];
            let lam2 = &other.mats[m];
            for p in 0..other.dims[s] {
                for q in 0..self.dims[r] {
                    for k in 0..self.dims[s] {
                        a[(row, offset[s] + k * other.dims[s] + p)] += lam[(k, q)];
                    }
                    for l in 0..other.dims[r] {
                        a[(row, offset[r] + q * other.dims[r] + l)] -= lam2[(p, l)];
                    }
                    row += 1;
                }
            }
        }
        let basis = null_space(&a);
        Ok(basis
            .into_iter()
            .map(|v| {
                let components = (0..nobj)
                    .map(|o| {
                        CMat::from_fn(other.dims[o], self.dims[o], |i, j| {
                            v[offset[o] + j * other.dims[o] + i]
                        })
                    })
                    .collect();
                Intertwiner { components }
            })
            .collect())
    }

    /// Dimension of the self-intertwiner (commutant) space.
    pub fn commutant_dimension(&self) -> Result<usize> {
        Ok(self.intertwiner_space(self)?.len())
    }

    /// Schur test for a unitary representation: irreducible exactly when
    /// the commutant is one-dimensional.
    pub fn is_irreducible(&self) -> Result<bool> {
        self.require_unitary("irreducibility test needs a unitary representation")?;
        Ok(self.commutant_dimension()? == 1)
    }

    /// Decides equivalence by drawing random elements of the intertwiner
    /// space and testing invertibility, retrying up to 8 times before
    /// giving up as `Undecided`.
    pub fn equivalence(&self, other: &Representation, seed: u64) -> Result<Equivalence> {
        if !self.same_base_as(other) {
            return Err(CoreError::BaseMismatch);
        }
        if self.dims != other.dims {
            return Ok(Equivalence::Inequivalent);
        }
        let basis = self.intertwiner_space(other)?;
        if basis.is_empty() {
            return Ok(Equivalence::Inequivalent);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..8 {
            let coeffs: Vec<C> = (0..basis.len())
                .map(|_| linalg::random_complex(&mut rng))
                .collect();
            let candidate = Intertwiner::linear_combination(&basis, &coeffs);
            if candidate
                .components
                .iter()
                .all(linalg::is_invertible)
            {
                return Ok(Equivalence::Equivalent(candidate));
            }
        }
        Ok(Equivalence::Undecided)
    }

    /// Splits a unitary representation into irreducible pieces by
    /// spectral projection of random Hermitian commutant elements.
    /// Deterministic for a given seed; requires a connected base.
    pub fn decompose(&self, seed: u64) -> Result<Decomposition> {
        self.require_unitary("decomposition needs a unitary representation")?;
        if !self.base.is_connected() {
            return Err(CoreError::Invalid(
                "decomposition is implemented for connected groupoids".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start: Vec<CMat> = self.dims.iter().map(|&d| identity(d)).collect();
        let mut pieces = Vec::new();
        self.decompose_rec(self.clone(), start, &mut rng, &mut pieces)?;
        Ok(Decomposition { pieces, seed })
    }

    fn decompose_rec(
        &self,
        current: Representation,
        isometries: Vec<CMat>,
        rng: &mut ChaCha8Rng,
        out: &mut Vec<DecompositionPiece>,
    ) -> Result<()> {
        let basis = current.intertwiner_space(&current)?;
        if basis.len() <= 1 {
            out.push(DecompositionPiece {
                isometries,
                rep: current,
            });
            return Ok(());
        }
        let g = &self.base;
        for _attempt in 0..8 {
            let coeffs: Vec<C> = (0..basis.len())
                .map(|_| linalg::random_complex(rng))
                .collect();
            let combo = Intertwiner::linear_combination(&basis, &coeffs);
            // Hermitian part stays in the commutant because the
            // representation is unitary.
            let herm: Vec<CMat> = combo
                .components
                .iter()
                .map(|m| (m + m.adjoint()) * C::new(0.5, 0.0))
                .collect();
            let eigs: Vec<(Vec<f64>, CMat)> = herm.iter().map(eig_hermitian).collect();

            // Cluster the spectrum at a reference object; the spectra
            // agree across objects on a connected base.
            let reference = &eigs[0].0;
            let mut centers: Vec<f64> = Vec::new();
            for &v in reference {
                match centers.last() {
                    Some(&c) if (v - c).abs() <= CLUSTER_TOL => {}
                    _ => centers.push(v),
                }
            }
            if centers.len() < 2 {
                continue;
            }
            let assign = |vals: &[f64]| -> Option<Vec<Vec<usize>>> {
                let mut buckets = vec![Vec::new(); centers.len()];
                for (i, &v) in vals.iter().enumerate() {
                    let (best, dist) = centers
                        .iter()
                        .enumerate()
                        .map(|(k, &c)| (k, (v - c).abs()))
                        .min_by(|a, b| a.1.total_cmp(&b.1))
                        .unwrap();
                    if dist > CLUSTER_TOL * 10.0 {
                        return None;
                    }
                    buckets[best].push(i);
                }
                Some(buckets)
            };
            let Some(buckets_per_obj) = eigs
                .iter()
                .map(|(vals, _)| assign(vals))
                .collect::<Option<Vec<_>>>()
            else {
                continue;
            };
            let counts: Vec<usize> = buckets_per_obj[0].iter().map(Vec::len).collect();
            if counts.contains(&0)
                || buckets_per_obj
                    .iter()
                    .any(|b| b.iter().map(Vec::len).collect::<Vec<_>>() != counts)
            {
                continue;
            }

            for k in 0..centers.len() {
                let qs: Vec<CMat> = (0..g.num_objects())
                    .map(|o| {
                        let cols: Vec<_> = buckets_per_obj[o][k]
                            .iter()
                            .map(|&c| eigs[o].1.column(c).into_owned())
                            .collect();
                        CMat::from_columns(&cols)
                    })
                    .collect();
                let sub_mats: Vec<CMat> = (0..g.num_morphisms())
                    .map(|m| {
                        qs[g.src_idx(m)].adjoint() * current.mat_idx(m) * &qs[g.rng_idx(m)]
                    })
                    .collect();
                let sub = Representation {
                    base: self.base.clone(),
                    dims: qs.iter().map(CMat::ncols).collect(),
                    mats: sub_mats,
                };
                let lifted: Vec<CMat> = isometries
                    .iter()
                    .enumerate()
                    .map(|(o, q)| q * &qs[o])
                    .collect();
                self.decompose_rec(sub, lifted, rng, out)?;
            }
            return Ok(());
        }
        Err(CoreError::Invalid(
            "failed to split a non-scalar commutant after 8 random draws".into(),
        ))
    }
}

/// A morphism of representations: per-object matrices φ_x with
/// φ_{s(α)} Λ(α) = Λ′(α) φ_{r(α)}.
#[derive(Debug, Clone)]
pub struct Intertwiner {
    pub components: Vec<CMat>,
}

impl Intertwiner {
    pub fn linear_combination(basis: &[Intertwiner], coeffs: &[C]) -> Intertwiner {
        let mut components: Vec<CMat> = basis[0]
            .components
            .iter()
            .map(|m| CMat::zeros(m.nrows(), m.ncols()))
            .collect();
        for (b, &c) in basis.iter().zip(coeffs) {
            for (acc, m) in components.iter_mut().zip(&b.components) {
                *acc += m * c;
            }
        }
        Intertwiner { components }
    }

    /// Largest violation of the intertwining identity over all morphisms.
    pub fn residual(&self, from: &Representation, to: &Representation) -> f64 {
        let g = from.base();
        (0..g.num_morphisms())
            .map(|m| {
                let lhs = &self.components[g.src_idx(m)] * from.mat_idx(m);
                let rhs = to.mat_idx(m) * &self.components[g.rng_idx(m)];
                max_abs_diff(&lhs, &rhs)
            })
            .fold(0.0, f64::max)
    }
}

/// Result of the randomized equivalence test.
#[derive(Debug, Clone)]
pub enum Equivalence {
    Equivalent(Intertwiner),
    Inequivalent,
    Undecided,
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepViolationKind {
    UnitNotIdentity,
    Functoriality,
    InverseMismatch,
    NotUnitary,
}

#[derive(Debug, Clone, Serialize)]
pub struct RepViolation {
    pub kind: RepViolationKind,
    pub witnesses: Vec<String>,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RepReport {
    pub violations: Vec<RepViolation>,
    pub max_residual: f64,
}

impl RepReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// One irreducible (or commutant-scalar) piece of a decomposition: the
/// isometries embed the piece's spaces into the original ones.
#[derive(Debug, Clone)]
pub struct DecompositionPiece {
    pub isometries: Vec<CMat>,
    pub rep: Representation,
}

impl DecompositionPiece {
    /// Orthogonal projectors Q Q† onto the invariant subspaces.
    pub fn projectors(&self) -> Vec<CMat> {
        self.isometries.iter().map(|q| q * q.adjoint()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub pieces: Vec<DecompositionPiece>,
    pub seed: u64,
}

impl Decomposition {
    /// Direct sum of the pieces, in order.
    pub fn assemble(&self) -> Result<Representation> {
        let mut it = self.pieces.iter();
        let first = it
            .next()
            .ok_or_else(|| CoreError::Invalid("empty decomposition".into()))?;
        let mut acc = first.rep.clone();
        for p in it {
            acc = acc.direct_sum(&p.rep)?;
        }
        Ok(acc)
    }
}

/// The split form of a representation on a connected groupoid: a unitary
/// representation λ of the isotropy group at the anchor plus a unitary
/// matrix μ(x) for every object, with μ(anchor) = Id.
#[derive(Debug, Clone)]
pub struct RepPair {
    base: Arc<FiniteGroupoid>,
    anchor: ObjectId,
    lambda: Representation,
    mu: Vec<CMat>,
}

impl RepPair {
    pub fn new(
        base: Arc<FiniteGroupoid>,
        anchor: ObjectId,
        lambda: Representation,
        mu: Vec<CMat>,
    ) -> Result<RepPair> {
        let iso = base.isotropy_group(&anchor)?;
        if **lambda.base() != iso {
            return Err(CoreError::Invalid(format!(
                "lambda must be a representation of the isotropy group at `{anchor}`"
            )));
        }
        lambda.require_unitary("the isotropy representation of a pair")?;
        let ai = base.require_object(&anchor)?;
        let d = lambda.common_dim()?;
        if mu.len() != base.num_objects() {
            return Err(CoreError::DimensionMismatch(
                "need one μ matrix per object".into(),
            ));
        }
        for (o, m) in mu.iter().enumerate() {
            if m.shape() != (d, d) || !is_unitary(m, TOL) {
                return Err(CoreError::NotUnitary(format!(
                    "μ at object `{}`",
                    base.object(o)
                )));
            }
        }
        if max_abs_diff(&mu[ai], &identity(d)) > TOL {
            return Err(CoreError::Invalid("μ(anchor) must be the identity".into()));
        }
        Ok(RepPair {
            base,
            anchor,
            lambda,
            mu,
        })
    }

    /// Pair with seeded Haar-random unitaries at every non-anchor object.
    pub fn with_random_mu(
        base: Arc<FiniteGroupoid>,
        anchor: ObjectId,
        lambda: Representation,
        rng: &mut ChaCha8Rng,
    ) -> Result<RepPair> {
        let d = lambda.common_dim()?;
        let ai = base.require_object(&anchor)?;
        let mu = (0..base.num_objects())
            .map(|o| {
                if o == ai {
                    identity(d)
                } else {
                    linalg::random_unitary(rng, d)
                }
            })
            .collect();
        RepPair::new(base, anchor, lambda, mu)
    }

    pub fn anchor(&self) -> &ObjectId {
        &self.anchor
    }

    pub fn lambda(&self) -> &Representation {
        &self.lambda
    }

    pub fn mu(&self) -> &[CMat] {
        &self.mu
    }

    pub fn approx_eq(&self, other: &RepPair, tol: f64) -> bool {
        self.anchor == other.anchor
            && self.lambda.approx_eq(&other.lambda, tol)
            && self
                .mu
                .iter()
                .zip(&other.mu)
                .all(|(a, b)| max_abs_diff(a, b) <= tol)
    }
}

/// Splits Λ into λ = Λ restricted to the isotropy group at the section's anchor and
/// μ(x) = Λ(Ω(x)).
pub fn split_along_section(rep: &Representation, section: &Section) -> Result<RepPair> {
    rep.require_unitary("splitting needs a unitary representation")?;
    let base = rep.base().clone();
    let anchor = section.base().clone();
    let lambda = rep.restrict_to_isotropy(&anchor)?;
    let mut mu = Vec::with_capacity(base.num_objects());
    for o in base.objects() {
        mu.push(rep.mat(section.omega(o)?)?.clone());
    }
    RepPair::new(base, anchor, lambda, mu)
}

/// Λ(α) = μ(r(α))⁻¹ λ(Γ(α)) μ(s(α)); inverse of [`split_along_section`].
pub fn rebuild_from_pair(pair: &RepPair, section: &Section) -> Result<Representation> {
    if section.base() != pair.anchor() {
        return Err(CoreError::Invalid(
            "section and pair must share their anchor".into(),
        ));
    }
    let g = pair.base.clone();
    let mut mats = BTreeMap::new();
    for m in g.morphisms() {
        let gamma = g.gamma(section, m)?;
        let lam = pair.lambda.mat(&gamma)?;
        let r = g.require_object(g.range(m)?)?;
        let s = g.require_object(g.source(m)?)?;
        mats.insert(m.clone(), pair.mu[r].adjoint() * lam * &pair.mu[s]);
    }
    let d = pair.lambda.common_dim()?;
    let dims = g.objects().iter().map(|o| (o.clone(), d)).collect();
    Representation::new(g, &dims, &mats)
}

/// Extends a unitary representation λ′ of the isotropy group at x to the
/// whole connected groupoid along a morphism ω ∈ G_a^x, where a is the
/// section's anchor. The transported isotropy representation is
/// λ(α) = λ′(ω⁻¹·α·ω); the rebuilt representation is conjugated by its
/// own image of ω so that its restriction at x is exactly λ′.
pub fn extend_from_isotropy(
    base: &Arc<FiniteGroupoid>,
    lambda_prime: &Representation,
    omega: &MorphismId,
    section: &Section,
) -> Result<Representation> {
    lambda_prime.require_unitary("extension needs a unitary representation")?;
    let a = section.base().clone();
    let wi = base.require_morphism(omega)?;
    let x = base.object(base.src_idx(wi)).clone();
    if base.object(base.rng_idx(wi)).0 != a.0 {
        return Err(CoreError::NotInFiber(
            omega.0.clone(),
            a.0.clone(),
            x.0.clone(),
        ));
    }
    let iso_x = base.isotropy_group(&x)?;
    if **lambda_prime.base() != iso_x {
        return Err(CoreError::Invalid(format!(
            "lambda' must be a representation of the isotropy group at `{x}`"
        )));
    }

    // λ(α) = λ′(ω⁻¹ · α · ω) on the isotropy group at the anchor
    let iso_a = Arc::new(base.isotropy_group(&a)?);
    let omega_inv = base.inverse(omega)?.clone();
    let d = lambda_prime.common_dim()?;
    let mut mats = BTreeMap::new();
    for m in iso_a.morphisms() {
        let t = base.compose(&omega_inv, m)?.clone();
        let conj = base.compose(&t, omega)?.clone();
        mats.insert(m.clone(), lambda_prime.mat(&conj)?.clone());
    }
    let mut dims = BTreeMap::new();
    dims.insert(a.clone(), d);
    let lambda = Representation::new(iso_a, &dims, &mats)?;

    let mu = (0..base.num_objects()).map(|_| identity(d)).collect();
    let pair = RepPair::new(base.clone(), a, lambda, mu)?;
    let big = rebuild_from_pair(&pair, section)?;

    // conjugate by Λ(ω) to pin the restriction at x
    let u = big.mat(omega)?.clone();
    let mats = big
        .mats
        .iter()
        .map(|m| &u * m * u.adjoint())
        .collect();
    Ok(Representation { mats, ..big })
}
