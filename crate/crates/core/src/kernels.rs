//! G-kernels (finite Haar systems), transverse and faithfulness checks,
//! modular functions, quasi-invariant measures, and the composite measure
//! m = M · λ.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::GFunction;
use crate::error::CoreError;
use crate::groupoid::{same_base, FiniteGroupoid, MorphismId, ObjectId};
use crate::{Result, TOL};

type C = Complex64;

/// A fibered coefficient family {t_α^a}: the finite-sum stand-in for a
/// family of measures λ^a supported on the range fibers G_a.
///
/// The fibered condition t_α^a ≠ 0 ⇒ r(α) = a is enforced structurally:
/// the constructor rejects any coefficient filed under the wrong object.
#[derive(Debug, Clone)]
pub struct GKernel {
    base: Arc<FiniteGroupoid>,
    coeffs: BTreeMap<(usize, usize), f64>,
    full_support: bool,
}

impl GKernel {
    /// Builds a kernel from (object, morphism) → coefficient entries.
    /// With `full_support` the kernel additionally promises
    /// Supp(λ^a) = G_a: every morphism of every fiber carries a positive
    /// coefficient.
    pub fn new(
        base: Arc<FiniteGroupoid>,
        coeffs: &BTreeMap<(ObjectId, MorphismId), f64>,
        full_support: bool,
    ) -> Result<GKernel> {
        let mut by_idx = BTreeMap::new();
        for ((a, m), &t) in coeffs {
            let ai = base.require_object(a)?;
            let mi = base.require_morphism(m)?;
            if t < 0.0 {
                return Err(CoreError::NegativeCoefficient(m.0.clone(), t));
            }
            if t == 0.0 {
                continue;
            }
            if base.rng_idx(mi) != ai {
                return Err(CoreError::NotFibered {
                    morphism: m.0.clone(),
                    range: base.object(base.rng_idx(mi)).0.clone(),
                    declared: a.0.clone(),
                });
            }
            by_idx.insert((ai, mi), t);
        }
        let kernel = GKernel {
            base,
            coeffs: by_idx,
            full_support,
        };
        if full_support {
            kernel.check_full_support()?;
        }
        Ok(kernel)
    }

    fn check_full_support(&self) -> Result<()> {
        for o in 0..self.base.num_objects() {
            for m in self.base.fiber_indices(Some(o), None) {
                if self.coeff_idx(o, m) <= 0.0 {
                    return Err(CoreError::NotFullSupport {
                        object: self.base.object(o).0.clone(),
                        morphism: self.base.morphism(m).0.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// The counting kernel: t_α^a = 1 for every α ∈ G_a.
    pub fn counting(base: Arc<FiniteGroupoid>) -> GKernel {
        let mut coeffs = BTreeMap::new();
        for m in 0..base.num_morphisms() {
            coeffs.insert((base.rng_idx(m), m), 1.0);
        }
        GKernel {
            base,
            coeffs,
            full_support: true,
        }
    }

    /// Kernel weighted by a positive function of the source object:
    /// t_α^a = w(s(α)). Transverse for any positive w, because left
    /// translation preserves sources of the translated fiber elements.
    pub fn source_weighted(base: Arc<FiniteGroupoid>, w: &BTreeMap<ObjectId, f64>) -> Result<GKernel> {
        let mut coeffs = BTreeMap::new();
        for m in 0..base.num_morphisms() {
            let s = base.object(base.src_idx(m));
            let &weight = w
                .get(s)
                .ok_or_else(|| CoreError::UnknownObject(s.0.clone()))?;
            if weight <= 0.0 {
                return Err(CoreError::NegativeCoefficient(
                    base.morphism(m).0.clone(),
                    weight,
                ));
            }
            coeffs.insert((base.rng_idx(m), m), weight);
        }
        Ok(GKernel {
            base,
            coeffs,
            full_support: true,
        })
    }

    /// Copy of this kernel with one coefficient replaced (fibered
    /// condition still enforced). Used to build counterexample kernels.
    pub fn with_coeff(&self, a: &ObjectId, m: &MorphismId, t: f64) -> Result<GKernel> {
        let mut coeffs: BTreeMap<(ObjectId, MorphismId), f64> = self
            .coeffs
            .iter()
            .map(|(&(o, i), &v)| ((self.base.object(o).clone(), self.base.morphism(i).clone()), v))
            .collect();
        coeffs.insert((a.clone(), m.clone()), t);
        GKernel::new(self.base.clone(), &coeffs, self.full_support && t > 0.0)
    }

    pub fn scaled(&self, factor: f64) -> Result<GKernel> {
        if factor < 0.0 {
            return Err(CoreError::NegativeCoefficient("<scale>".into(), factor));
        }
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v *= factor;
        }
        out.full_support = self.full_support && factor > 0.0;
        Ok(out)
    }

    pub fn base(&self) -> &Arc<FiniteGroupoid> {
        &self.base
    }

    pub fn is_full_support(&self) -> bool {
        self.full_support
    }

    /// t_α^a by indices; 0 when absent (in particular whenever r(α) ≠ a).
    pub fn coeff_idx(&self, a: usize, m: usize) -> f64 {
        self.coeffs.get(&(a, m)).copied().unwrap_or(0.0)
    }

    pub fn coeff(&self, a: &ObjectId, m: &MorphismId) -> Result<f64> {
        Ok(self.coeff_idx(self.base.require_object(a)?, self.base.require_morphism(m)?))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&ObjectId, &MorphismId, f64)> + '_ {
        self.coeffs
            .iter()
            .map(|(&(a, m), &t)| (self.base.object(a), self.base.morphism(m), t))
    }

    /// λ(f)(a) = Σ_{α ∈ G_a} t_α^a f(α) for every object a.
    pub fn apply(&self, f: &GFunction) -> Result<BTreeMap<ObjectId, C>> {
        if !same_base(&self.base, f.base()) {
            return Err(CoreError::BaseMismatch);
        }
        let mut out = BTreeMap::new();
        for o in 0..self.base.num_objects() {
            let mut acc = C::default();
            for m in self.base.fiber_indices(Some(o), None) {
                acc += C::new(self.coeff_idx(o, m), 0.0) * f.get_idx(m);
            }
            out.insert(self.base.object(o).clone(), acc);
        }
        Ok(out)
    }

    /// Checks λ^{r(α)} = α λ^{s(α)} on every basis potential, which at
    /// finite scale reduces to t_γ^{r(α)} = t_{α⁻¹·γ}^{s(α)} for every α
    /// and every γ in the fiber of r(α).
    pub fn check_transverse(&self) -> TransverseReport {
        let g = &self.base;
        let mut violations = Vec::new();
        for alpha in 0..g.num_morphisms() {
            let (r, s) = (g.rng_idx(alpha), g.src_idx(alpha));
            for gamma in g.fiber_indices(Some(r), None) {
                let lhs = self.coeff_idx(r, gamma);
                let translated = g
                    .comp_idx(g.inv_idx(alpha), gamma)
                    .expect("s(α⁻¹) = r(α) = r(γ), composable by construction");
                let rhs = self.coeff_idx(s, translated);
                if (lhs - rhs).abs() > TOL {
                    violations.push(TransverseViolation {
                        alpha: g.morphism(alpha).clone(),
                        gamma: g.morphism(gamma).clone(),
                        lhs,
                        rhs,
                    });
                }
            }
        }
        TransverseReport { violations }
    }

    pub fn is_transverse(&self) -> bool {
        self.check_transverse().violations.is_empty()
    }

    /// Every object has a fiber with at least one positive coefficient.
    pub fn is_faithful(&self) -> bool {
        (0..self.base.num_objects()).all(|o| {
            self.base
                .fiber_indices(Some(o), None)
                .iter()
                .any(|&m| self.coeff_idx(o, m) > 0.0)
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TransverseViolation {
    pub alpha: MorphismId,
    pub gamma: MorphismId,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransverseReport {
    pub violations: Vec<TransverseViolation>,
}

impl TransverseReport {
    pub fn is_transverse(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A finite measure on the object space: M = Σ t_a δ_a.
#[derive(Debug, Clone)]
pub struct ObjectMeasure {
    base: Arc<FiniteGroupoid>,
    weights: BTreeMap<usize, f64>,
}

impl ObjectMeasure {
    pub fn new(base: Arc<FiniteGroupoid>, weights: &BTreeMap<ObjectId, f64>) -> Result<ObjectMeasure> {
        let mut by_idx = BTreeMap::new();
        for (o, &t) in weights {
            if t < 0.0 {
                return Err(CoreError::NegativeCoefficient(o.0.clone(), t));
            }
            by_idx.insert(base.require_object(o)?, t);
        }
        Ok(ObjectMeasure {
            base,
            weights: by_idx,
        })
    }

    pub fn uniform(base: Arc<FiniteGroupoid>) -> ObjectMeasure {
        let n = base.num_objects();
        ObjectMeasure {
            weights: (0..n).map(|o| (o, 1.0 / n as f64)).collect(),
            base,
        }
    }

    pub fn base(&self) -> &Arc<FiniteGroupoid> {
        &self.base
    }

    pub fn weight_idx(&self, o: usize) -> f64 {
        self.weights.get(&o).copied().unwrap_or(0.0)
    }

    pub fn weight(&self, o: &ObjectId) -> Result<f64> {
        Ok(self.weight_idx(self.base.require_object(o)?))
    }
}

/// A positive multiplicative cocycle Δ on the morphisms.
#[derive(Debug, Clone)]
pub struct ModularFunction {
    base: Arc<FiniteGroupoid>,
    values: Vec<f64>,
}

impl ModularFunction {
    /// Requires a positive value for every morphism.
    pub fn new(base: Arc<FiniteGroupoid>, values: &BTreeMap<MorphismId, f64>) -> Result<ModularFunction> {
        let mut v = vec![f64::NAN; base.num_morphisms()];
        for (m, &x) in values {
            let i = base.require_morphism(m)?;
            if x <= 0.0 {
                return Err(CoreError::NotPositive(m.0.clone()));
            }
            v[i] = x;
        }
        if let Some(i) = v.iter().position(|x| x.is_nan()) {
            return Err(CoreError::MissingModularValue(base.morphism(i).0.clone()));
        }
        Ok(ModularFunction { base, values: v })
    }

    /// The Haar form Δ(α) = exp(φ(s(α)) − φ(r(α))) for a potential φ on
    /// the objects. Always passes the cocycle check: the exponents
    /// telescope along compositions.
    pub fn from_potential(base: Arc<FiniteGroupoid>, phi: &BTreeMap<ObjectId, f64>) -> Result<ModularFunction> {
        let mut by_obj = vec![0.0; base.num_objects()];
        for (o, &x) in phi {
            by_obj[base.require_object(o)?] = x;
        }
        for o in 0..base.num_objects() {
            if !phi.contains_key(base.object(o)) {
                return Err(CoreError::Invalid(format!(
                    "potential misses object `{}`",
                    base.object(o)
                )));
            }
        }
        let values = (0..base.num_morphisms())
            .map(|m| (by_obj[base.src_idx(m)] - by_obj[base.rng_idx(m)]).exp())
            .collect();
        Ok(ModularFunction { base, values })
    }

    pub fn constant_one(base: Arc<FiniteGroupoid>) -> ModularFunction {
        let values = vec![1.0; base.num_morphisms()];
        ModularFunction { base, values }
    }

    pub fn base(&self) -> &Arc<FiniteGroupoid> {
        &self.base
    }

    pub fn value_idx(&self, m: usize) -> f64 {
        self.values[m]
    }

    pub fn value(&self, m: &MorphismId) -> Result<f64> {
        Ok(self.values[self.base.require_morphism(m)?])
    }

    /// Exhaustively checks Δ(α⁻¹ · β) = Δ(α)⁻¹ Δ(β) over every pair
    /// (α⁻¹, β) of composable morphisms.
    pub fn check_modular(&self) -> ModularReport {
        let g = &self.base;
        let mut violations = Vec::new();
        for alpha in 0..g.num_morphisms() {
            let ainv = g.inv_idx(alpha);
            for beta in 0..g.num_morphisms() {
                let Some(prod) = g.comp_idx(ainv, beta) else {
                    continue;
                };
                let lhs = self.values[prod];
                let rhs = self.values[beta] / self.values[alpha];
                if (lhs - rhs).abs() > TOL * lhs.abs().max(1.0) {
                    violations.push(ModularViolation {
                        alpha: g.morphism(alpha).clone(),
                        beta: g.morphism(beta).clone(),
                        lhs,
                        rhs,
                    });
                }
            }
        }
        ModularReport { violations }
    }

    pub fn is_modular(&self) -> bool {
        self.check_modular().violations.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModularViolation {
    pub alpha: MorphismId,
    pub beta: MorphismId,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModularReport {
    pub violations: Vec<ModularViolation>,
}

impl ModularReport {
    pub fn is_modular(&self) -> bool {
        self.violations.is_empty()
    }
}

/// How to read the coefficient t_{α⁻¹}^a on the right-hand side of the
/// quasi-invariance identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuasiInvReading {
    /// Exactly as displayed: look up t with the morphism α⁻¹ filed under
    /// the outer object a. Under strict fibering this vanishes unless
    /// α⁻¹ lies in G_a, i.e. unless α is an isotropy element.
    Literal,
    /// Re-file the coefficient under the fiber α⁻¹ actually lives in:
    /// t_{α⁻¹}^{r(α⁻¹)}. This is the reading the worked ratchet example
    /// uses, where source-fiber coefficients appear on the right.
    SourceFiber,
}

/// LHS − RHS of the quasi-invariance identity
///   Σ_a Σ_{α∈G_a} t_a t_α^a f(α)
///     = Σ_a Σ_{α∈G_a} t_a t_{α⁻¹}^· conj(f(α⁻¹)) Δ(α⁻¹)
/// for one test function f.
pub fn check_quasi_invariant(
    measure: &ObjectMeasure,
    kernel: &GKernel,
    modular: &ModularFunction,
    f: &GFunction,
    reading: QuasiInvReading,
) -> Result<C> {
    let base = kernel.base();
    if !same_base(measure.base(), base)
        || !same_base(modular.base(), base)
        || !same_base(f.base(), base)
    {
        return Err(CoreError::BaseMismatch);
    }
    let g = base;
    let mut lhs = C::default();
    let mut rhs = C::default();
    for a in 0..g.num_objects() {
        let ta = measure.weight_idx(a);
        for alpha in g.fiber_indices(Some(a), None) {
            lhs += C::new(ta * kernel.coeff_idx(a, alpha), 0.0) * f.get_idx(alpha);
            let ainv = g.inv_idx(alpha);
            let t_inv = match reading {
                QuasiInvReading::Literal => kernel.coeff_idx(a, ainv),
                QuasiInvReading::SourceFiber => kernel.coeff_idx(g.rng_idx(ainv), ainv),
            };
            rhs += C::new(ta * t_inv * modular.value_idx(ainv), 0.0) * f.get_idx(ainv).conj();
        }
    }
    Ok(lhs - rhs)
}

/// Scans the quasi-invariance residual over the full basis of canonical
/// potentials; returns the largest residual and its witness.
pub fn quasi_invariant_basis_scan(
    measure: &ObjectMeasure,
    kernel: &GKernel,
    modular: &ModularFunction,
    reading: QuasiInvReading,
) -> Result<(f64, Option<MorphismId>)> {
    let g = kernel.base().clone();
    let mut max = 0.0_f64;
    let mut witness = None;
    for m in g.morphisms() {
        let f = GFunction::indicator(g.clone(), m)?;
        let r = check_quasi_invariant(measure, kernel, modular, &f, reading)?.norm();
        if r > max {
            max = r;
            witness = Some(m.clone());
        }
    }
    Ok((max, witness))
}

/// The composite measure m = M · λ on the groupoid:
/// m(f) = Σ_a t_a Σ_{α ∈ G_a} t_α^a f(α).
#[derive(Debug, Clone)]
pub struct CompositeMeasure {
    measure: ObjectMeasure,
    kernel: GKernel,
}

impl CompositeMeasure {
    pub fn new(measure: ObjectMeasure, kernel: GKernel) -> Result<CompositeMeasure> {
        if !same_base(measure.base(), kernel.base()) {
            return Err(CoreError::BaseMismatch);
        }
        Ok(CompositeMeasure { measure, kernel })
    }

    pub fn apply(&self, f: &GFunction) -> Result<C> {
        let g = self.kernel.base();
        if !same_base(g, f.base()) {
            return Err(CoreError::BaseMismatch);
        }
        let mut acc = C::default();
        for a in 0..g.num_objects() {
            let ta = self.measure.weight_idx(a);
            for alpha in g.fiber_indices(Some(a), None) {
                acc += C::new(ta * self.kernel.coeff_idx(a, alpha), 0.0) * f.get_idx(alpha);
            }
        }
        Ok(acc)
    }

    /// m(f) − m(f* Δ⁻¹); zero for every f exactly when M is
    /// quasi-invariant in the composite-measure sense.
    pub fn symmetry_residual(&self, f: &GFunction, modular: &ModularFunction) -> Result<C> {
        let g = self.kernel.base().clone();
        if !same_base(&g, modular.base()) {
            return Err(CoreError::BaseMismatch);
        }
        let mut twisted = GFunction::zero(g.clone());
        for m in 0..g.num_morphisms() {
            let v = f.get_idx(g.inv_idx(m)).conj() / C::new(modular.value_idx(m), 0.0);
            twisted.set_idx(m, v);
        }
        Ok(self.apply(f)? - self.apply(&twisted)?)
    }
}
