//! JSON file formats: groupoid presentations, functions, kernels,
//! measures, modular functions, and representations. All maps serialize
//! through `BTreeMap`, so output key order is stable and golden-file
//! friendly; parsing back a serialized groupoid reproduces it bit-exactly.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::GFunction;
use crate::error::CoreError;
use crate::groupoid::{FiniteGroupoid, MorphismId, ObjectId, RawMorphism, ValidationReport};
use crate::kernels::{GKernel, ModularFunction, ObjectMeasure};
use crate::linalg::CMat;
use crate::rep::Representation;
use crate::Result;

type C = Complex64;

/// On-disk groupoid presentation. `comp` lists every defined product as
/// `[left, right, result]`; omitted pairs are non-composable, and
/// `validate` checks that the omissions match `s(left) = r(right)`.
/// Units are the idempotent endomorphisms, fixed by `inv`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupoidPresentation {
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    pub inv: BTreeMap<String, String>,
    pub comp: Vec<(String, String, String)>,
}

impl GroupoidPresentation {
    pub fn from_groupoid(g: &FiniteGroupoid) -> GroupoidPresentation {
        let objects = g.objects().iter().map(|o| o.0.clone()).collect();
        let morphisms = g
            .morphisms()
            .iter()
            .enumerate()
            .map(|(i, m)| RawMorphism {
                id: m.0.clone(),
                src: g.object(g.src_idx(i)).0.clone(),
                dst: g.object(g.rng_idx(i)).0.clone(),
            })
            .collect();
        let inv = g
            .morphisms()
            .iter()
            .enumerate()
            .map(|(i, m)| (m.0.clone(), g.morphism(g.inv_idx(i)).0.clone()))
            .collect();
        let mut comp = Vec::new();
        for i in 0..g.num_morphisms() {
            for j in 0..g.num_morphisms() {
                if let Some(k) = g.comp_idx(i, j) {
                    comp.push((
                        g.morphism(i).0.clone(),
                        g.morphism(j).0.clone(),
                        g.morphism(k).0.clone(),
                    ));
                }
            }
        }
        GroupoidPresentation {
            objects,
            morphisms,
            inv,
            comp,
        }
    }

    pub fn to_groupoid(&self) -> Result<FiniteGroupoid> {
        let inv: Vec<(String, String)> = self
            .inv
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        FiniteGroupoid::from_parts(&self.objects, &self.morphisms, &inv, &self.comp)
    }

    /// Structural problems come back as a single structural violation;
    /// otherwise the full axiom report of the assembled groupoid.
    pub fn validate(&self) -> ValidationReport {
        match self.to_groupoid() {
            Ok(g) => g.validate(),
            Err(e) => ValidationReport::structural(e.to_string()),
        }
    }
}

fn parse_error(what: &str, e: impl std::fmt::Display) -> CoreError {
    CoreError::Malformed(format!("{what}: {e}"))
}

pub fn groupoid_to_json(g: &FiniteGroupoid) -> String {
    serde_json::to_string_pretty(&GroupoidPresentation::from_groupoid(g))
        .expect("presentation serializes")
}

pub fn groupoid_from_json(s: &str) -> Result<FiniteGroupoid> {
    let p: GroupoidPresentation =
        serde_json::from_str(s).map_err(|e| parse_error("groupoid file", e))?;
    p.to_groupoid()
}

/// `{ "groupoid": ..., "values": {"α": [re, im], ...} }`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GFunctionFile {
    pub groupoid: String,
    pub values: BTreeMap<String, (f64, f64)>,
}

impl GFunctionFile {
    pub fn from_function(f: &GFunction, groupoid: impl Into<String>) -> GFunctionFile {
        GFunctionFile {
            groupoid: groupoid.into(),
            values: f
                .to_id_map()
                .into_iter()
                .map(|(m, z)| (m.0, (z.re, z.im)))
                .collect(),
        }
    }

    pub fn to_function(&self, base: &Arc<FiniteGroupoid>) -> Result<GFunction> {
        let values: BTreeMap<MorphismId, C> = self
            .values
            .iter()
            .map(|(k, &(re, im))| (MorphismId(k.clone()), C::new(re, im)))
            .collect();
        GFunction::from_values(base.clone(), &values)
    }
}

pub fn gfunction_from_json(s: &str, base: &Arc<FiniteGroupoid>) -> Result<GFunction> {
    let f: GFunctionFile = serde_json::from_str(s).map_err(|e| parse_error("function file", e))?;
    f.to_function(base)
}

/// `{ "groupoid": ..., "coeffs": {"a": {"α": t, ...}, ...}, "full_support": bool }`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelFile {
    pub groupoid: String,
    pub coeffs: BTreeMap<String, BTreeMap<String, f64>>,
    #[serde(default)]
    pub full_support: bool,
}

impl KernelFile {
    pub fn from_kernel(k: &GKernel, groupoid: impl Into<String>) -> KernelFile {
        let mut coeffs: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
        for (a, m, t) in k.entries() {
            coeffs.entry(a.0.clone()).or_default().insert(m.0.clone(), t);
        }
        KernelFile {
            groupoid: groupoid.into(),
            coeffs,
            full_support: k.is_full_support(),
        }
    }

    pub fn to_kernel(&self, base: &Arc<FiniteGroupoid>) -> Result<GKernel> {
        let mut coeffs = BTreeMap::new();
        for (a, per_obj) in &self.coeffs {
            for (m, &t) in per_obj {
                coeffs.insert((ObjectId(a.clone()), MorphismId(m.clone())), t);
            }
        }
        GKernel::new(base.clone(), &coeffs, self.full_support)
    }
}

pub fn kernel_from_json(s: &str, base: &Arc<FiniteGroupoid>) -> Result<GKernel> {
    let k: KernelFile = serde_json::from_str(s).map_err(|e| parse_error("kernel file", e))?;
    k.to_kernel(base)
}

/// `{ "weights": {"a": t, ...} }`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureFile {
    pub weights: BTreeMap<String, f64>,
}

impl MeasureFile {
    pub fn to_measure(&self, base: &Arc<FiniteGroupoid>) -> Result<ObjectMeasure> {
        let weights: BTreeMap<ObjectId, f64> = self
            .weights
            .iter()
            .map(|(k, &v)| (ObjectId(k.clone()), v))
            .collect();
        ObjectMeasure::new(base.clone(), &weights)
    }
}

pub fn measure_from_json(s: &str, base: &Arc<FiniteGroupoid>) -> Result<ObjectMeasure> {
    let m: MeasureFile = serde_json::from_str(s).map_err(|e| parse_error("measure file", e))?;
    m.to_measure(base)
}

/// Either explicit `{ "values": {...} }` or the Haar form
/// `{ "potential": {...} }` on the objects.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModularFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub potential: Option<BTreeMap<String, f64>>,
}

impl ModularFile {
    pub fn to_modular(&self, base: &Arc<FiniteGroupoid>) -> Result<ModularFunction> {
        match (&self.values, &self.potential) {
            (Some(values), None) => {
                let v: BTreeMap<MorphismId, f64> = values
                    .iter()
                    .map(|(k, &x)| (MorphismId(k.clone()), x))
                    .collect();
                ModularFunction::new(base.clone(), &v)
            }
            (None, Some(phi)) => {
                let p: BTreeMap<ObjectId, f64> = phi
                    .iter()
                    .map(|(k, &x)| (ObjectId(k.clone()), x))
                    .collect();
                ModularFunction::from_potential(base.clone(), &p)
            }
            _ => Err(CoreError::Malformed(
                "modular file needs exactly one of `values` or `potential`".into(),
            )),
        }
    }
}

pub fn modular_from_json(s: &str, base: &Arc<FiniteGroupoid>) -> Result<ModularFunction> {
    let m: ModularFile = serde_json::from_str(s).map_err(|e| parse_error("modular file", e))?;
    m.to_modular(base)
}

/// `{ "groupoid": ..., "dims": {...}, "mats": {"α": [[[re,im],...],...]} }`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepresentationFile {
    pub groupoid: String,
    pub dims: BTreeMap<String, usize>,
    pub mats: BTreeMap<String, Vec<Vec<(f64, f64)>>>,
}

impl RepresentationFile {
    pub fn from_representation(r: &Representation, groupoid: impl Into<String>) -> RepresentationFile {
        let g = r.base();
        let dims = g
            .objects()
            .iter()
            .enumerate()
            .map(|(i, o)| (o.0.clone(), r.dim_idx(i)))
            .collect();
        let mats = g
            .morphisms()
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let mat = r.mat_idx(i);
                let rows = (0..mat.nrows())
                    .map(|p| (0..mat.ncols()).map(|q| (mat[(p, q)].re, mat[(p, q)].im)).collect())
                    .collect();
                (m.0.clone(), rows)
            })
            .collect();
        RepresentationFile {
            groupoid: groupoid.into(),
            dims,
            mats,
        }
    }

    pub fn to_representation(&self, base: &Arc<FiniteGroupoid>) -> Result<Representation> {
        let dims: BTreeMap<ObjectId, usize> = self
            .dims
            .iter()
            .map(|(k, &d)| (ObjectId(k.clone()), d))
            .collect();
        let mut mats = BTreeMap::new();
        for (m, rows) in &self.mats {
            let nrows = rows.len();
            let ncols = rows.first().map(Vec::len).unwrap_or(0);
            if rows.iter().any(|r| r.len() != ncols) {
                return Err(CoreError::Malformed(format!(
                    "matrix for `{m}` has ragged rows"
                )));
            }
            let mat = CMat::from_fn(nrows, ncols, |p, q| {
                let (re, im) = rows[p][q];
                C::new(re, im)
            });
            mats.insert(MorphismId(m.clone()), mat);
        }
        Representation::new(base.clone(), &dims, &mats)
    }
}

pub fn representation_from_json(s: &str, base: &Arc<FiniteGroupoid>) -> Result<Representation> {
    let r: RepresentationFile =
        serde_json::from_str(s).map_err(|e| parse_error("representation file", e))?;
    r.to_representation(base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{build_pair_groupoid, build_quantum_ratchet};
    use crate::kernels::GKernel;

    #[test]
    fn groupoid_roundtrip_is_bit_exact() {
        for g in [build_quantum_ratchet(), build_pair_groupoid(3).unwrap()] {
            let json = groupoid_to_json(&g);
            let back = groupoid_from_json(&json).unwrap();
            assert_eq!(g, back);
            // and once more through a second serialization
            assert_eq!(json, groupoid_to_json(&back));
        }
    }

    #[test]
    fn presentation_validate_reports_structural_problems_separately() {
        let mut p = GroupoidPresentation::from_groupoid(&build_quantum_ratchet());
        p.inv.insert("β1".into(), "not-a-morphism".into());
        let report = p.validate();
        assert!(!report.is_valid());
        assert!(report.has_kind(crate::groupoid::ViolationKind::Structural));
    }

    #[test]
    fn function_file_roundtrip() {
        let g = Arc::new(build_quantum_ratchet());
        let mut f = GFunction::zero(g.clone());
        f.set_idx(0, C::new(0.25, -1.5));
        f.set_idx(7, C::new(-3.0, 0.125));
        let file = GFunctionFile::from_function(&f, "quantum-ratchet");
        let json = serde_json::to_string(&file).unwrap();
        let back = gfunction_from_json(&json, &g).unwrap();
        assert!(back.approx_eq(&f, 0.0));
    }

    #[test]
    fn kernel_file_roundtrip_and_fibering() {
        let g = Arc::new(build_quantum_ratchet());
        let k = GKernel::counting(g.clone());
        let file = KernelFile::from_kernel(&k, "quantum-ratchet");
        let json = serde_json::to_string(&file).unwrap();
        let back = kernel_from_json(&json, &g).unwrap();
        for (a, m, t) in k.entries() {
            assert_eq!(back.coeff(a, m).unwrap(), t);
        }
        assert!(back.is_full_support());
    }

    #[test]
    fn modular_file_accepts_exactly_one_form() {
        let g = Arc::new(build_quantum_ratchet());
        let both = r#"{"values": {}, "potential": {}}"#;
        assert!(modular_from_json(both, &g).is_err());
        let potential = r#"{"potential": {"+": 1.0, "-": 0.0}}"#;
        let m = modular_from_json(potential, &g).unwrap();
        assert!(m.is_modular());
    }

    #[test]
    fn representation_file_roundtrip() {
        let g = Arc::new(build_quantum_ratchet());
        let r = Representation::trivial(g.clone());
        let file = RepresentationFile::from_representation(&r, "quantum-ratchet");
        let json = serde_json::to_string(&file).unwrap();
        let back = representation_from_json(&json, &g).unwrap();
        assert!(back.approx_eq(&r, 0.0));
    }
}
