//! The convolution *-algebra on a finite groupoid: canonical potentials,
//! the involution f*(α) = conj f(α⁻¹), plain and Haar-weighted
//! convolution, and density operators.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::CoreError;
use crate::groupoid::{same_base, FiniteGroupoid, MorphismId};
use crate::kernels::GKernel;
use crate::{Result, TOL};

type C = Complex64;

/// A complex-valued function on the morphisms of a groupoid, stored
/// sparsely (absent keys are 0). Keys are morphism indices, so iteration
/// follows the canonical morphism order.
#[derive(Debug, Clone)]
pub struct GFunction {
    base: Arc<FiniteGroupoid>,
    values: BTreeMap<usize, C>,
}

impl GFunction {
    pub fn zero(base: Arc<FiniteGroupoid>) -> GFunction {
        GFunction {
            base,
            values: BTreeMap::new(),
        }
    }

    /// The constant function with the given value on every morphism.
    pub fn constant(base: Arc<FiniteGroupoid>, value: C) -> GFunction {
        let values = (0..base.num_morphisms()).map(|i| (i, value)).collect();
        GFunction { base, values }
    }

    /// The canonical potential χ_α: indicator of a single morphism.
    pub fn indicator(base: Arc<FiniteGroupoid>, alpha: &MorphismId) -> Result<GFunction> {
        let i = base.require_morphism(alpha)?;
        let mut values = BTreeMap::new();
        values.insert(i, C::new(1.0, 0.0));
        Ok(GFunction { base, values })
    }

    /// Σ_a χ_unit(a): the convolution identity.
    pub fn unit_function(base: Arc<FiniteGroupoid>) -> GFunction {
        let values = (0..base.num_objects())
            .map(|o| (base.unit_idx(o), C::new(1.0, 0.0)))
            .collect();
        GFunction { base, values }
    }

    pub fn from_values(
        base: Arc<FiniteGroupoid>,
        values: &BTreeMap<MorphismId, C>,
    ) -> Result<GFunction> {
        let mut by_idx = BTreeMap::new();
        for (m, &z) in values {
            by_idx.insert(base.require_morphism(m)?, z);
        }
        Ok(GFunction {
            base,
            values: by_idx,
        })
    }

    pub fn base(&self) -> &Arc<FiniteGroupoid> {
        &self.base
    }

    pub fn get(&self, m: &MorphismId) -> Result<C> {
        Ok(self.get_idx(self.base.require_morphism(m)?))
    }

    pub fn get_idx(&self, i: usize) -> C {
        self.values.get(&i).copied().unwrap_or_default()
    }

    pub fn set_idx(&mut self, i: usize, z: C) {
        if z.norm() == 0.0 {
            self.values.remove(&i);
        } else {
            self.values.insert(i, z);
        }
    }

    /// Nonzero entries in canonical morphism order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, C)> + '_ {
        self.values.iter().map(|(&i, &z)| (i, z))
    }

    pub fn to_id_map(&self) -> BTreeMap<MorphismId, C> {
        self.values
            .iter()
            .map(|(&i, &z)| (self.base.morphism(i).clone(), z))
            .collect()
    }

    pub fn same_base_as(&self, other: &GFunction) -> bool {
        same_base(&self.base, &other.base)
    }

    fn require_same_base(&self, other: &GFunction) -> Result<()> {
        if self.same_base_as(other) {
            Ok(())
        } else {
            Err(CoreError::BaseMismatch)
        }
    }

    /// Componentwise comparison within `tol` over the union of supports.
    pub fn approx_eq(&self, other: &GFunction, tol: f64) -> bool {
        if !self.same_base_as(other) {
            return false;
        }
        (0..self.base.num_morphisms())
            .all(|i| (self.get_idx(i) - other.get_idx(i)).norm() <= tol)
    }

    pub fn add(&self, other: &GFunction) -> Result<GFunction> {
        self.require_same_base(other)?;
        let mut out = self.clone();
        for (i, z) in other.iter() {
            out.set_idx(i, out.get_idx(i) + z);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GFunction) -> Result<GFunction> {
        self.require_same_base(other)?;
        let mut out = self.clone();
        for (i, z) in other.iter() {
            out.set_idx(i, out.get_idx(i) - z);
        }
        Ok(out)
    }

    pub fn scale(&self, c: C) -> GFunction {
        let mut out = GFunction::zero(self.base.clone());
        for (i, z) in self.iter() {
            out.set_idx(i, z * c);
        }
        out
    }

    pub fn conj(&self) -> GFunction {
        let mut out = GFunction::zero(self.base.clone());
        for (i, z) in self.iter() {
            out.set_idx(i, z.conj());
        }
        out
    }

    /// Pointwise product (not the convolution).
    pub fn pointwise_mul(&self, other: &GFunction) -> Result<GFunction> {
        self.require_same_base(other)?;
        let mut out = GFunction::zero(self.base.clone());
        for (i, z) in self.iter() {
            out.set_idx(i, z * other.get_idx(i));
        }
        Ok(out)
    }

    /// Largest |f(α)| over all morphisms.
    pub fn sup_norm(&self) -> f64 {
        self.iter().map(|(_, z)| z.norm()).fold(0.0, f64::max)
    }

    /// The involution f*(α) = conj f(α⁻¹).
    pub fn adjoint(&self) -> GFunction {
        let mut out = GFunction::zero(self.base.clone());
        for (i, z) in self.iter() {
            out.set_idx(self.base.inv_idx(i), z.conj());
        }
        out
    }

    /// Convolution: (f ∗ g)(γ) = Σ_{α·β = γ} f(α) g(β), computed by
    /// scanning the factorizations supported by both operands.
    pub fn convolve(&self, other: &GFunction) -> Result<GFunction> {
        self.require_same_base(other)?;
        let mut out = GFunction::zero(self.base.clone());
        for (i, fi) in self.iter() {
            for (j, gj) in other.iter() {
                if let Some(k) = self.base.comp_idx(i, j) {
                    out.set_idx(k, out.get_idx(k) + fi * gj);
                }
            }
        }
        Ok(out)
    }

    /// Haar-weighted convolution against a kernel λ:
    /// (f ∗_λ g)(α) = Σ_{γ ∈ G_{s(α)}} t_γ^{s(α)} f(α·γ) g(γ⁻¹).
    pub fn convolve_haar(&self, other: &GFunction, kernel: &GKernel) -> Result<GFunction> {
        self.require_same_base(other)?;
        if !same_base(&self.base, kernel.base()) {
            return Err(CoreError::BaseMismatch);
        }
        let g = &self.base;
        let mut out = GFunction::zero(g.clone());
        for alpha in 0..g.num_morphisms() {
            let s = g.src_idx(alpha);
            let mut acc = C::default();
            for gamma in g.fiber_indices(Some(s), None) {
                let t = kernel.coeff_idx(s, gamma);
                if t == 0.0 {
                    continue;
                }
                let Some(ag) = g.comp_idx(alpha, gamma) else {
                    continue;
                };
                acc += C::new(t, 0.0) * self.get_idx(ag) * other.get_idx(g.inv_idx(gamma));
            }
            out.set_idx(alpha, acc);
        }
        Ok(out)
    }
}

/// The canonical potential χ_α.
pub fn canonical_potential(base: &Arc<FiniteGroupoid>, alpha: &MorphismId) -> Result<GFunction> {
    GFunction::indicator(base.clone(), alpha)
}

/// The adjoint (involution) operator.
pub fn adjoint(f: &GFunction) -> GFunction {
    f.adjoint()
}

/// Plain convolution.
pub fn convolve(f: &GFunction, g: &GFunction) -> Result<GFunction> {
    f.convolve(g)
}

/// Kernel-weighted convolution.
pub fn convolve_haar(f: &GFunction, g: &GFunction, kernel: &GKernel) -> Result<GFunction> {
    f.convolve_haar(g, kernel)
}

/// A density operator, described by its weights on the canonical
/// potentials; requires Σ weights = 1.
#[derive(Debug, Clone)]
pub struct DensityWeights {
    base: Arc<FiniteGroupoid>,
    weights: BTreeMap<usize, C>,
}

impl DensityWeights {
    pub fn new(base: Arc<FiniteGroupoid>, weights: &BTreeMap<MorphismId, C>) -> Result<DensityWeights> {
        let mut by_idx = BTreeMap::new();
        let mut sum = C::default();
        for (m, &z) in weights {
            sum += z;
            by_idx.insert(base.require_morphism(m)?, z);
        }
        if (sum - C::new(1.0, 0.0)).norm() > TOL {
            return Err(CoreError::WeightsNotNormalized(format!("{sum}")));
        }
        Ok(DensityWeights {
            base,
            weights: by_idx,
        })
    }

    /// The uniform density 1/|G| on every morphism.
    pub fn uniform(base: Arc<FiniteGroupoid>) -> DensityWeights {
        let n = base.num_morphisms();
        let w = C::new(1.0 / n as f64, 0.0);
        DensityWeights {
            weights: (0..n).map(|i| (i, w)).collect(),
            base,
        }
    }

    pub fn base(&self) -> &Arc<FiniteGroupoid> {
        &self.base
    }

    pub fn weight_idx(&self, i: usize) -> C {
        self.weights.get(&i).copied().unwrap_or_default()
    }

    /// ρ(f) = Σ_α f(α) ρ(χ_α).
    pub fn apply(&self, f: &GFunction) -> Result<C> {
        if !same_base(&self.base, f.base()) {
            return Err(CoreError::BaseMismatch);
        }
        Ok(self
            .weights
            .iter()
            .map(|(&i, &w)| f.get_idx(i) * w)
            .sum())
    }

    /// Weights that are not plausible probabilities: negative real part
    /// beyond tolerance or a nonzero imaginary part. The normalization
    /// ρ(1) = 1 is all the structure a density needs; positivity is an
    /// optional lint.
    pub fn lint_non_positive(&self) -> Vec<MorphismId> {
        self.weights
            .iter()
            .filter(|(_, w)| w.re < -TOL || w.im.abs() > TOL)
            .map(|(&i, _)| self.base.morphism(i).clone())
            .collect()
    }
}

/// ρ applied to f.
pub fn apply_density(rho: &DensityWeights, f: &GFunction) -> Result<C> {
    rho.apply(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{build_cyclic_group, build_quantum_ratchet};
    use crate::linalg::random_complex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ratchet() -> Arc<FiniteGroupoid> {
        Arc::new(build_quantum_ratchet())
    }

    fn random_function(base: &Arc<FiniteGroupoid>, rng: &mut ChaCha8Rng) -> GFunction {
        let mut f = GFunction::zero(base.clone());
        for i in 0..base.num_morphisms() {
            f.set_idx(i, random_complex(rng));
        }
        f
    }

    #[test]
    fn canonical_potentials_form_a_basis() {
        let g = ratchet();
        let chi = canonical_potential(&g, &"+".into()).unwrap();
        assert_eq!(chi.get(&"+".into()).unwrap(), C::new(1.0, 0.0));
        assert_eq!(chi.get(&"σ+".into()).unwrap(), C::new(0.0, 0.0));

        let mut sum = GFunction::zero(g.clone());
        for m in g.morphisms() {
            sum = sum.add(&canonical_potential(&g, m).unwrap()).unwrap();
        }
        assert!(sum.approx_eq(&GFunction::constant(g.clone(), C::new(1.0, 0.0)), TOL));

        // span: f = Σ f(α) χ_α
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_function(&g, &mut rng);
        let mut rebuilt = GFunction::zero(g.clone());
        for m in g.morphisms() {
            let chi = canonical_potential(&g, m).unwrap();
            rebuilt = rebuilt.add(&chi.scale(f.get(m).unwrap())).unwrap();
        }
        assert!(rebuilt.approx_eq(&f, TOL));
    }

    #[test]
    fn adjoint_on_the_ratchet() {
        let g = ratchet();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = random_function(&g, &mut rng);
        let fs = f.adjoint();
        // f*(α1) = conj f(β2)
        assert_eq!(fs.get(&"α1".into()).unwrap(), f.get(&"β2".into()).unwrap().conj());
        // involution
        assert!(fs.adjoint().approx_eq(&f, 0.0));
        // χ_+ is self-adjoint
        let chi = canonical_potential(&g, &"+".into()).unwrap();
        assert!(chi.adjoint().approx_eq(&chi, 0.0));
    }

    #[test]
    fn adjoint_is_conjugate_linear() {
        let g = ratchet();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_function(&g, &mut rng);
        let c = random_complex(&mut rng);
        let lhs = f.scale(c).adjoint();
        let rhs = f.adjoint().scale(c.conj());
        assert!(lhs.approx_eq(&rhs, TOL));
    }

    #[test]
    fn convolution_of_basis_elements() {
        let g = ratchet();
        for (i, j) in [(0usize, 1usize), (3, 3), (5, 9)] {
            let a = g.morphism(i).clone();
            let b = g.morphism(j).clone();
            let da = canonical_potential(&g, &a).unwrap();
            let db = canonical_potential(&g, &b).unwrap();
            let prod = da.convolve(&db).unwrap();
            match g.compose(&a, &b) {
                Ok(ab) => {
                    let expected = canonical_potential(&g, &ab.clone()).unwrap();
                    assert!(prod.approx_eq(&expected, TOL));
                }
                Err(_) => assert!(prod.approx_eq(&GFunction::zero(g.clone()), TOL)),
            }
        }
    }

    #[test]
    fn unit_function_is_the_convolution_identity() {
        let g = ratchet();
        let e = GFunction::unit_function(g.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = random_function(&g, &mut rng);
        assert!(e.convolve(&f).unwrap().approx_eq(&f, TOL));
        assert!(f.convolve(&e).unwrap().approx_eq(&f, TOL));
    }

    #[test]
    fn convolution_golden_evaluation_at_plus() {
        let g = ratchet();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_function(&g, &mut rng);
        let h = random_function(&g, &mut rng);
        let val = |fun: &GFunction, id: &str| fun.get(&id.into()).unwrap();
        let expected = val(&f, "σ+") * val(&h, "σ+2")
            + val(&f, "σ+2") * val(&h, "σ+")
            + val(&f, "+") * val(&h, "+")
            + val(&f, "α1") * val(&h, "β2")
            + val(&f, "α2") * val(&h, "β1")
            + val(&f, "α3") * val(&h, "β3");
        let got = f.convolve(&h).unwrap().get(&"+".into()).unwrap();
        assert!((got - expected).norm() < TOL);
    }

    #[test]
    fn adjoint_is_an_antihomomorphism() {
        let g = ratchet();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let f = random_function(&g, &mut rng);
            let h = random_function(&g, &mut rng);
            let lhs = f.convolve(&h).unwrap().adjoint();
            let rhs = h.adjoint().convolve(&f.adjoint()).unwrap();
            assert!(lhs.approx_eq(&rhs, TOL));
        }
    }

    #[test]
    fn convolution_is_bilinear() {
        let g = ratchet();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f1 = random_function(&g, &mut rng);
        let f2 = random_function(&g, &mut rng);
        let h = random_function(&g, &mut rng);
        let c = random_complex(&mut rng);
        let lhs = f1.scale(c).add(&f2).unwrap().convolve(&h).unwrap();
        let rhs = f1
            .convolve(&h)
            .unwrap()
            .scale(c)
            .add(&f2.convolve(&h).unwrap())
            .unwrap();
        assert!(lhs.approx_eq(&rhs, TOL));
    }

    #[test]
    fn density_operator_behaves_like_expectation() {
        let g = ratchet();
        let rho = DensityWeights::uniform(g.clone());
        let one = GFunction::constant(g.clone(), C::new(1.0, 0.0));
        assert!((rho.apply(&one).unwrap() - C::new(1.0, 0.0)).norm() < TOL);

        // point mass at "+"
        let mut w = BTreeMap::new();
        w.insert(MorphismId::from("+"), C::new(1.0, 0.0));
        let delta = DensityWeights::new(g.clone(), &w).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = random_function(&g, &mut rng);
        assert_eq!(delta.apply(&f).unwrap(), f.get(&"+".into()).unwrap());

        // the expansion ρ(f) = Σ f(α) ρ(χ_α) for random weights
        let mut raw = BTreeMap::new();
        let mut total = C::default();
        for m in g.morphisms().iter().take(11) {
            let z = random_complex(&mut rng);
            total += z;
            raw.insert(m.clone(), z);
        }
        raw.insert(g.morphisms()[11].clone(), C::new(1.0, 0.0) - total);
        let rho = DensityWeights::new(g.clone(), &raw).unwrap();
        let direct = rho.apply(&f).unwrap();
        let expanded: C = g
            .morphisms()
            .iter()
            .map(|m| {
                f.get(m).unwrap()
                    * rho
                        .apply(&canonical_potential(&g, m).unwrap())
                        .unwrap()
            })
            .sum();
        assert!((direct - expanded).norm() < TOL);
    }

    #[test]
    fn density_rejects_unnormalized_weights() {
        let g = ratchet();
        let mut w = BTreeMap::new();
        w.insert(MorphismId::from("+"), C::new(0.5, 0.0));
        assert!(matches!(
            DensityWeights::new(g, &w),
            Err(CoreError::WeightsNotNormalized(_))
        ));
    }

    #[test]
    fn cross_groupoid_operations_are_rejected() {
        let g1 = ratchet();
        let g2 = Arc::new(build_cyclic_group(3).unwrap());
        let f1 = GFunction::constant(g1, C::new(1.0, 0.0));
        let f2 = GFunction::constant(g2, C::new(1.0, 0.0));
        assert!(matches!(f1.convolve(&f2), Err(CoreError::BaseMismatch)));
        assert!(matches!(f1.add(&f2), Err(CoreError::BaseMismatch)));
    }
}
