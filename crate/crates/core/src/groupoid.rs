//! Finite groupoids: storage, axiom validation, structural queries, and
//! builders for the standard examples (quantum ratchet, group groupoids,
//! pair groupoids, finite action groupoids).
//!
//! A groupoid is stored extensionally: the full composition table, the
//! inverse table, and the unit of every object. Lookups are O(1) and the
//! tables are directly auditable. The canonical ordering of objects and
//! morphisms is lexicographic on their id strings; every deterministic
//! tie-break in the crate (least morphism in a fiber, component ordering)
//! uses that ordering.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::Result;

/// Identifier of an object (unit) of a groupoid.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectId(pub String);

/// Identifier of a morphism of a groupoid.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MorphismId(pub String);

impl ObjectId {
    pub fn new(id: impl Into<String>) -> Self {
        ObjectId(id.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl MorphismId {
    pub fn new(id: impl Into<String>) -> Self {
        MorphismId(id.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for MorphismId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ObjectId {
    fn from(s: &str) -> Self {
        ObjectId(s.to_owned())
    }
}

impl From<&str> for MorphismId {
    fn from(s: &str) -> Self {
        MorphismId(s.to_owned())
    }
}

/// Raw description of one morphism as it appears in a presentation:
/// `src` is the source object, `dst` the range object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// A finite groupoid with explicit composition and inverse tables.
///
/// Immutable after construction; operations are pure and the value can be
/// shared freely across threads (typically behind an [`Arc`]).
#[derive(Debug, Clone)]
pub struct FiniteGroupoid {
    objects: Vec<ObjectId>,
    morphisms: Vec<MorphismId>,
    obj_idx: HashMap<String, usize>,
    mor_idx: HashMap<String, usize>,
    src: Vec<usize>,
    rng: Vec<usize>,
    inv: Vec<usize>,
    units: Vec<usize>,
    comp: HashMap<(usize, usize), usize>,
}

impl PartialEq for FiniteGroupoid {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.src == other.src
            && self.rng == other.rng
            && self.inv == other.inv
            && self.units == other.units
            && self.comp == other.comp
    }
}

impl Eq for FiniteGroupoid {}

/// True when two shared groupoids are interchangeable as a base.
pub fn same_base(a: &Arc<FiniteGroupoid>, b: &Arc<FiniteGroupoid>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FiniteGroupoid {
    /// Builds a groupoid from raw tables, checking only *structural*
    /// well-formedness (ids resolve, tables are total, units exist).
    /// Axiom violations are the business of [`FiniteGroupoid::validate`].
    pub fn from_parts(
        objects: &[String],
        morphisms: &[RawMorphism],
        inv: &[(String, String)],
        comp: &[(String, String, String)],
    ) -> Result<FiniteGroupoid> {
        let malformed = |msg: String| CoreError::Malformed(msg);

        let mut objs: Vec<ObjectId> = Vec::with_capacity(objects.len());
        for o in objects {
            if o.is_empty() {
                return Err(malformed("empty object id".into()));
            }
            objs.push(ObjectId(o.clone()));
        }
        objs.sort();
        objs.dedup();
        if objs.len() != objects.len() {
            return Err(malformed("duplicate object id".into()));
        }
        if objs.is_empty() {
            return Err(malformed("a groupoid needs at least one object".into()));
        }
        let obj_idx: HashMap<String, usize> = objs
            .iter()
            .enumerate()
            .map(|(i, o)| (o.0.clone(), i))
            .collect();

        let mut mors: Vec<MorphismId> = morphisms
            .iter()
            .map(|m| MorphismId(m.id.clone()))
            .collect();
        if mors.iter().any(|m| m.0.is_empty()) {
            return Err(malformed("empty morphism id".into()));
        }
        mors.sort();
        mors.dedup();
        if mors.len() != morphisms.len() {
            return Err(malformed("duplicate morphism id".into()));
        }
        let mor_idx: HashMap<String, usize> = mors
            .iter()
            .enumerate()
            .map(|(i, m)| (m.0.clone(), i))
            .collect();

        let mut src = vec![usize::MAX; mors.len()];
        let mut rng = vec![usize::MAX; mors.len()];
        for m in morphisms {
            let i = mor_idx[&m.id];
            src[i] = *obj_idx
                .get(&m.src)
                .ok_or_else(|| malformed(format!("morphism `{}`: unknown src `{}`", m.id, m.src)))?;
            rng[i] = *obj_idx
                .get(&m.dst)
                .ok_or_else(|| malformed(format!("morphism `{}`: unknown dst `{}`", m.id, m.dst)))?;
        }

        let mut inv_tab = vec![usize::MAX; mors.len()];
        for (k, v) in inv {
            let i = *mor_idx
                .get(k)
                .ok_or_else(|| malformed(format!("inv table: unknown morphism `{k}`")))?;
            let j = *mor_idx
                .get(v)
                .ok_or_else(|| malformed(format!("inv table: unknown morphism `{v}`")))?;
            if inv_tab[i] != usize::MAX {
                return Err(malformed(format!("inv table: duplicate entry for `{k}`")));
            }
            inv_tab[i] = j;
        }
        if let Some(i) = inv_tab.iter().position(|&v| v == usize::MAX) {
            return Err(malformed(format!(
                "inv table: missing entry for `{}`",
                mors[i]
            )));
        }

        let mut comp_tab: HashMap<(usize, usize), usize> = HashMap::new();
        for (l, r, res) in comp {
            let li = *mor_idx
                .get(l)
                .ok_or_else(|| malformed(format!("comp table: unknown morphism `{l}`")))?;
            let ri = *mor_idx
                .get(r)
                .ok_or_else(|| malformed(format!("comp table: unknown morphism `{r}`")))?;
            let resi = *mor_idx
                .get(res)
                .ok_or_else(|| malformed(format!("comp table: unknown morphism `{res}`")))?;
            if comp_tab.insert((li, ri), resi).is_some() {
                return Err(malformed(format!(
                    "comp table: duplicate entry for (`{l}`, `{r}`)"
                )));
            }
        }

        // Units are not listed separately in a presentation: the unit at an
        // object is the unique idempotent endomorphism sitting there.
        let mut units = vec![usize::MAX; objs.len()];
        for i in 0..mors.len() {
            if src[i] == rng[i] && comp_tab.get(&(i, i)) == Some(&i) {
                let o = src[i];
                if units[o] != usize::MAX {
                    return Err(malformed(format!(
                        "objects `{}`: several idempotent endomorphisms (`{}`, `{}`)",
                        objs[o], mors[units[o]], mors[i]
                    )));
                }
                units[o] = i;
            }
        }
        if let Some(o) = units.iter().position(|&u| u == usize::MAX) {
            return Err(malformed(format!(
                "object `{}` has no unit (idempotent endomorphism)",
                objs[o]
            )));
        }

        Ok(FiniteGroupoid {
            objects: objs,
            morphisms: mors,
            obj_idx,
            mor_idx,
            src,
            rng,
            inv: inv_tab,
            units,
            comp: comp_tab,
        })
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    /// Objects in canonical (lexicographic) order.
    pub fn objects(&self) -> &[ObjectId] {
        &self.objects
    }

    /// Morphisms in canonical (lexicographic) order.
    pub fn morphisms(&self) -> &[MorphismId] {
        &self.morphisms
    }

    pub fn object(&self, idx: usize) -> &ObjectId {
        &self.objects[idx]
    }

    pub fn morphism(&self, idx: usize) -> &MorphismId {
        &self.morphisms[idx]
    }

    pub fn object_index(&self, id: &str) -> Option<usize> {
        self.obj_idx.get(id).copied()
    }

    pub fn morphism_index(&self, id: &str) -> Option<usize> {
        self.mor_idx.get(id).copied()
    }

    pub fn require_object(&self, id: &ObjectId) -> Result<usize> {
        self.object_index(&id.0)
            .ok_or_else(|| CoreError::UnknownObject(id.0.clone()))
    }

    pub fn require_morphism(&self, id: &MorphismId) -> Result<usize> {
        self.morphism_index(&id.0)
            .ok_or_else(|| CoreError::UnknownMorphism(id.0.clone()))
    }

    /// Source object index of morphism `i`.
    pub fn src_idx(&self, i: usize) -> usize {
        self.src[i]
    }

    /// Range object index of morphism `i`.
    pub fn rng_idx(&self, i: usize) -> usize {
        self.rng[i]
    }

    pub fn inv_idx(&self, i: usize) -> usize {
        self.inv[i]
    }

    /// Index of the unit morphism at object `o`.
    pub fn unit_idx(&self, o: usize) -> usize {
        self.units[o]
    }

    /// Composition `i · j` on indices, if defined.
    pub fn comp_idx(&self, i: usize, j: usize) -> Option<usize> {
        self.comp.get(&(i, j)).copied()
    }

    pub fn source(&self, m: &MorphismId) -> Result<&ObjectId> {
        Ok(&self.objects[self.src[self.require_morphism(m)?]])
    }

    pub fn range(&self, m: &MorphismId) -> Result<&ObjectId> {
        Ok(&self.objects[self.rng[self.require_morphism(m)?]])
    }

    pub fn unit(&self, o: &ObjectId) -> Result<&MorphismId> {
        Ok(&self.morphisms[self.units[self.require_object(o)?]])
    }

    /// The inverse `α⁻¹`.
    pub fn inverse(&self, m: &MorphismId) -> Result<&MorphismId> {
        Ok(&self.morphisms[self.inv[self.require_morphism(m)?]])
    }

    /// The composite `α · β`, defined exactly when `s(α) = r(β)`.
    pub fn compose(&self, alpha: &MorphismId, beta: &MorphismId) -> Result<&MorphismId> {
        let i = self.require_morphism(alpha)?;
        let j = self.require_morphism(beta)?;
        match self.comp_idx(i, j) {
            Some(k) => Ok(&self.morphisms[k]),
            None => Err(CoreError::NotComposable {
                left: alpha.0.clone(),
                right: beta.0.clone(),
                left_src: self.objects[self.src[i]].0.clone(),
                right_rng: self.objects[self.rng[j]].0.clone(),
            }),
        }
    }

    /// Indices of the fiber; `a` restricts the range, `b` the source.
    /// `None` acts as a wildcard. Result is in canonical order.
    pub fn fiber_indices(&self, a: Option<usize>, b: Option<usize>) -> Vec<usize> {
        (0..self.morphisms.len())
            .filter(|&i| a.is_none_or(|a| self.rng[i] == a) && b.is_none_or(|b| self.src[i] == b))
            .collect()
    }

    /// The fiber `G_a^b` (range `a`, source `b`); a `None` endpoint is a
    /// wildcard, so `fiber(Some(a), None)` is `G_a` and `fiber(None,
    /// Some(b))` is `G^b`.
    pub fn fiber(&self, a: Option<&ObjectId>, b: Option<&ObjectId>) -> Result<Vec<MorphismId>> {
        let a = a.map(|o| self.require_object(o)).transpose()?;
        let b = b.map(|o| self.require_object(o)).transpose()?;
        Ok(self
            .fiber_indices(a, b)
            .into_iter()
            .map(|i| self.morphisms[i].clone())
            .collect())
    }

    /// The isotropy group at `a`, returned as a single-object groupoid
    /// over the same morphism ids.
    pub fn isotropy_group(&self, a: &ObjectId) -> Result<FiniteGroupoid> {
        let ai = self.require_object(a)?;
        let iso = self.fiber_indices(Some(ai), Some(ai));
        let morphisms: Vec<RawMorphism> = iso
            .iter()
            .map(|&i| RawMorphism {
                id: self.morphisms[i].0.clone(),
                src: a.0.clone(),
                dst: a.0.clone(),
            })
            .collect();
        let inv: Vec<(String, String)> = iso
            .iter()
            .map(|&i| (self.morphisms[i].0.clone(), self.morphisms[self.inv[i]].0.clone()))
            .collect();
        let mut comp = Vec::new();
        for &i in &iso {
            for &j in &iso {
                if let Some(k) = self.comp_idx(i, j) {
                    comp.push((
                        self.morphisms[i].0.clone(),
                        self.morphisms[j].0.clone(),
                        self.morphisms[k].0.clone(),
                    ));
                }
            }
        }
        FiniteGroupoid::from_parts(std::slice::from_ref(&a.0), &morphisms, &inv, &comp)
    }

    /// Partition of the objects into connected components, ordered by
    /// least object id; objects within a component are in canonical order.
    pub fn connected_components(&self) -> Vec<Vec<ObjectId>> {
        let n = self.objects.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for i in 0..self.morphisms.len() {
            let (a, b) = (self.rng[i], self.src[i]);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: BTreeMap<usize, Vec<ObjectId>> = BTreeMap::new();
        for o in 0..n {
            let root = find(&mut parent, o);
            groups.entry(root).or_default().push(self.objects[o].clone());
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    /// Is this a group, i.e. a groupoid on a single object?
    pub fn is_group(&self) -> bool {
        self.objects.len() == 1
    }

    /// Is the composition commutative? Only meaningful for groups.
    pub fn is_abelian(&self) -> bool {
        let m = self.morphisms.len();
        (0..m).all(|i| (0..m).all(|j| self.comp_idx(i, j) == self.comp_idx(j, i)))
    }

    /// All pairs `(i, j)` with `s(i) = r(j)` in canonical order.
    pub fn composable_pairs(&self) -> Vec<(usize, usize)> {
        let m = self.morphisms.len();
        let mut out = Vec::new();
        for i in 0..m {
            for j in 0..m {
                if self.src[i] == self.rng[j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The canonical section anchored at `a`: `Ω(x)` is the
    /// lexicographically least morphism in `G_a^x` and `Ω(a)` is the unit.
    pub fn section_omega(&self, a: &ObjectId) -> Result<Section> {
        let ai = self.require_object(a)?;
        let mut omega = BTreeMap::new();
        for (xi, x) in self.objects.iter().enumerate() {
            let m = if xi == ai {
                self.units[ai]
            } else {
                *self
                    .fiber_indices(Some(ai), Some(xi))
                    .first()
                    .ok_or_else(|| CoreError::NotConnected {
                        anchor: a.0.clone(),
                        object: x.0.clone(),
                    })?
            };
            omega.insert(x.clone(), self.morphisms[m].clone());
        }
        Ok(Section {
            base: a.clone(),
            omega,
        })
    }

    /// The retraction onto the isotropy group at the section's anchor:
    /// `Γ(α) = Ω(r(α)) · α · Ω(s(α))⁻¹`.
    pub fn gamma(&self, section: &Section, alpha: &MorphismId) -> Result<MorphismId> {
        let i = self.require_morphism(alpha)?;
        let left = section.omega(&self.objects[self.rng[i]])?;
        let right = section.omega(&self.objects[self.src[i]])?;
        let t = self.compose(left, alpha)?.clone();
        Ok(self.compose(&t, self.inverse(right)?)?.clone())
    }

    /// Checks every groupoid axiom and table-consistency law, returning a
    /// report that lists each violation with a concrete witness.
    pub fn validate(&self) -> ValidationReport {
        let m = self.morphisms.len();
        let mut violations = Vec::new();
        let id = |i: usize| self.morphisms[i].0.clone();

        for i in 0..m {
            let j = self.inv[i];
            if self.src[j] != self.rng[i] || self.rng[j] != self.src[i] {
                violations.push(Violation {
                    kind: ViolationKind::InverseEndpoints,
                    witnesses: vec![id(i)],
                    detail: format!(
                        "inv(`{}`) = `{}` does not swap source and range",
                        id(i),
                        id(j)
                    ),
                });
            }
            if self.inv[j] != i {
                violations.push(Violation {
                    kind: ViolationKind::AxiomIInvolution,
                    witnesses: vec![id(i)],
                    detail: format!(
                        "inv(inv(`{}`)) = `{}`, expected `{}`",
                        id(i),
                        id(self.inv[j]),
                        id(i)
                    ),
                });
            }
        }

        for i in 0..m {
            for j in 0..m {
                let composable = self.src[i] == self.rng[j];
                let entry = self.comp_idx(i, j);
                match (composable, entry) {
                    (false, Some(k)) => violations.push(Violation {
                        kind: ViolationKind::ComposabilityDomain,
                        witnesses: vec![id(i), id(j)],
                        detail: format!(
                            "comp(`{}`, `{}`) = `{}` defined although s(`{}`) ≠ r(`{}`)",
                            id(i),
                            id(j),
                            id(k),
                            id(i),
                            id(j)
                        ),
                    }),
                    (true, None) => violations.push(Violation {
                        kind: ViolationKind::ComposabilityDomain,
                        witnesses: vec![id(i), id(j)],
                        detail: format!(
                            "comp(`{}`, `{}`) missing although s(`{}`) = r(`{}`)",
                            id(i),
                            id(j),
                            id(i),
                            id(j)
                        ),
                    }),
                    (true, Some(k)) => {
                        if self.src[k] != self.src[j] || self.rng[k] != self.rng[i] {
                            violations.push(Violation {
                                kind: ViolationKind::CompositionEndpoints,
                                witnesses: vec![id(i), id(j), id(k)],
                                detail: format!(
                                    "`{}` · `{}` = `{}` has wrong endpoints",
                                    id(i),
                                    id(j),
                                    id(k)
                                ),
                            });
                        }
                    }
                    (false, None) => {}
                }
            }
        }

        // Associativity on every defined triple.
        for (i, j) in self.composable_pairs() {
            let Some(ij) = self.comp_idx(i, j) else { continue };
            for k in 0..m {
                if self.src[j] != self.rng[k] {
                    continue;
                }
                let (Some(jk), Some(ij_k)) = (self.comp_idx(j, k), self.comp_idx(ij, k)) else {
                    continue;
                };
                let Some(i_jk) = self.comp_idx(i, jk) else { continue };
                if ij_k != i_jk {
                    violations.push(Violation {
                        kind: ViolationKind::AxiomIiAssociativity,
                        witnesses: vec![id(i), id(j), id(k)],
                        detail: format!(
                            "(`{}` · `{}`) · `{}` = `{}` but `{}` · (`{}` · `{}`) = `{}`",
                            id(i),
                            id(j),
                            id(k),
                            id(ij_k),
                            id(i),
                            id(j),
                            id(k),
                            id(i_jk)
                        ),
                    });
                }
            }
        }

        // Axioms iii) and iv): cancellation through the inverse.
        for (i, j) in self.composable_pairs() {
            let Some(ij) = self.comp_idx(i, j) else { continue };
            if let Some(back) = self.comp_idx(self.inv[i], ij) {
                if back != j {
                    violations.push(Violation {
                        kind: ViolationKind::AxiomIiiLeftCancellation,
                        witnesses: vec![id(i), id(j)],
                        detail: format!(
                            "inv(`{}`) · (`{}` · `{}`) = `{}`, expected `{}`",
                            id(i),
                            id(i),
                            id(j),
                            id(back),
                            id(j)
                        ),
                    });
                }
            }
            if let Some(back) = self.comp_idx(ij, self.inv[j]) {
                if back != i {
                    violations.push(Violation {
                        kind: ViolationKind::AxiomIvRightCancellation,
                        witnesses: vec![id(i), id(j)],
                        detail: format!(
                            "(`{}` · `{}`) · inv(`{}`) = `{}`, expected `{}`",
                            id(i),
                            id(j),
                            id(j),
                            id(back),
                            id(i)
                        ),
                    });
                }
            }
        }

        // Unit laws and inv-fixedness of units.
        for (o, &u) in self.units.iter().enumerate() {
            if self.src[u] != o || self.rng[u] != o {
                violations.push(Violation {
                    kind: ViolationKind::UnitLaw,
                    witnesses: vec![id(u)],
                    detail: format!("unit `{}` of `{}` has wrong endpoints", id(u), self.objects[o]),
                });
            }
            if self.inv[u] != u {
                violations.push(Violation {
                    kind: ViolationKind::UnitLaw,
                    witnesses: vec![id(u)],
                    detail: format!("unit `{}` is not fixed by inv", id(u)),
                });
            }
        }
        for i in 0..m {
            let us = self.units[self.src[i]];
            let ur = self.units[self.rng[i]];
            if self.comp_idx(i, us) != Some(i) {
                violations.push(Violation {
                    kind: ViolationKind::UnitLaw,
                    witnesses: vec![id(i)],
                    detail: format!("`{}` · unit(s(`{}`)) ≠ `{}`", id(i), id(i), id(i)),
                });
            }
            if self.comp_idx(ur, i) != Some(i) {
                violations.push(Violation {
                    kind: ViolationKind::UnitLaw,
                    witnesses: vec![id(i)],
                    detail: format!("unit(r(`{}`)) · `{}` ≠ `{}`", id(i), id(i), id(i)),
                });
            }
        }

        // s(α) = α⁻¹ · α and r(α) = α · α⁻¹ against the declared tables.
        for i in 0..m {
            if self.comp_idx(self.inv[i], i) != Some(self.units[self.src[i]]) {
                violations.push(Violation {
                    kind: ViolationKind::SourceRangeConsistency,
                    witnesses: vec![id(i)],
                    detail: format!("inv(`{}`) · `{}` is not the unit at s(`{}`)", id(i), id(i), id(i)),
                });
            }
            if self.comp_idx(i, self.inv[i]) != Some(self.units[self.rng[i]]) {
                violations.push(Violation {
                    kind: ViolationKind::SourceRangeConsistency,
                    witnesses: vec![id(i)],
                    detail: format!("`{}` · inv(`{}`) is not the unit at r(`{}`)", id(i), id(i), id(i)),
                });
            }
        }

        ValidationReport { violations }
    }

    /// Copy of this groupoid with one inverse-table entry rewired.
    /// Produces an invalid groupoid on purpose; only for validator tests.
    #[doc(hidden)]
    pub fn with_inv_entry(&self, m: &MorphismId, target: &MorphismId) -> Result<FiniteGroupoid> {
        let i = self.require_morphism(m)?;
        let t = self.require_morphism(target)?;
        let mut g = self.clone();
        g.inv[i] = t;
        Ok(g)
    }

    /// Copy of this groupoid with one composition-table entry rewired.
    #[doc(hidden)]
    pub fn with_comp_entry(
        &self,
        left: &MorphismId,
        right: &MorphismId,
        result: &MorphismId,
    ) -> Result<FiniteGroupoid> {
        let l = self.require_morphism(left)?;
        let r = self.require_morphism(right)?;
        let res = self.require_morphism(result)?;
        let mut g = self.clone();
        g.comp.insert((l, r), res);
        Ok(g)
    }
}

/// A choice of morphism `Ω(x) ∈ G_a^x` for every object `x`, normalized so
/// that `Ω(a)` is the unit at the anchor `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    base: ObjectId,
    omega: BTreeMap<ObjectId, MorphismId>,
}

impl Section {
    /// Validates a hand-made section against its groupoid.
    pub fn new(
        g: &FiniteGroupoid,
        base: ObjectId,
        omega: BTreeMap<ObjectId, MorphismId>,
    ) -> Result<Section> {
        let ai = g.require_object(&base)?;
        for (x, m) in &omega {
            let xi = g.require_object(x)?;
            let mi = g.require_morphism(m)?;
            if g.rng_idx(mi) != ai || g.src_idx(mi) != xi {
                return Err(CoreError::NotInFiber(
                    m.0.clone(),
                    base.0.clone(),
                    x.0.clone(),
                ));
            }
        }
        for x in g.objects() {
            if !omega.contains_key(x) {
                return Err(CoreError::Invalid(format!("section misses object `{x}`")));
            }
        }
        if omega[&base] != *g.unit(&base)? {
            return Err(CoreError::Invalid(format!(
                "section must send its anchor `{base}` to the unit"
            )));
        }
        Ok(Section { base, omega })
    }

    pub fn base(&self) -> &ObjectId {
        &self.base
    }

    pub fn omega(&self, x: &ObjectId) -> Result<&MorphismId> {
        self.omega
            .get(x)
            .ok_or_else(|| CoreError::UnknownObject(x.0.clone()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&ObjectId, &MorphismId)> {
        self.omega.iter()
    }
}

/// One violated law with concrete witnesses.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witnesses: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// Dangling id or non-total table; distinct from any axiom violation.
    Structural,
    AxiomIInvolution,
    AxiomIiAssociativity,
    AxiomIiiLeftCancellation,
    AxiomIvRightCancellation,
    ComposabilityDomain,
    CompositionEndpoints,
    InverseEndpoints,
    UnitLaw,
    SourceRangeConsistency,
}

/// Outcome of [`FiniteGroupoid::validate`]; empty means the tables satisfy
/// every groupoid axiom.
#[derive(Debug, Clone, Serialize, Deserialize, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_kind(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    /// Report with a single structural violation (used when a presentation
    /// cannot even be assembled into tables).
    pub fn structural(detail: String) -> ValidationReport {
        ValidationReport {
            violations: vec![Violation {
                kind: ViolationKind::Structural,
                witnesses: vec![],
                detail,
            }],
        }
    }
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

/// The 12-morphism quantum-ratchet groupoid on the objects `-` and `+`.
///
/// Morphisms are the triples `(a, σ^j, b)` with `a, b ∈ {-, +}` and
/// `σ` the 3-cycle; composition multiplies the middle permutations and the
/// inverse swaps the endpoints while inverting the cycle.
pub fn build_quantum_ratchet() -> FiniteGroupoid {
    const PLUS: usize = 1;
    const MINUS: usize = 0;
    fn name(a: usize, j: usize, b: usize) -> &'static str {
        match (a, j, b) {
            (PLUS, 0, PLUS) => "+",
            (PLUS, 1, PLUS) => "σ+",
            (PLUS, 2, PLUS) => "σ+2",
            (MINUS, 0, MINUS) => "-",
            (MINUS, 1, MINUS) => "σ-",
            (MINUS, 2, MINUS) => "σ-2",
            (MINUS, 1, PLUS) => "β1",
            (MINUS, 2, PLUS) => "β2",
            (MINUS, 0, PLUS) => "β3",
            (PLUS, 1, MINUS) => "α1",
            (PLUS, 2, MINUS) => "α2",
            (PLUS, 0, MINUS) => "α3",
            _ => unreachable!(),
        }
    }
    let obj = |o: usize| if o == PLUS { "+" } else { "-" };

    let mut morphisms = Vec::new();
    let mut inv = Vec::new();
    let mut comp = Vec::new();
    for a in [MINUS, PLUS] {
        for b in [MINUS, PLUS] {
            for j in 0..3 {
                // s(a, σ^j, b) = b and r(a, σ^j, b) = a
                morphisms.push(RawMorphism {
                    id: name(a, j, b).into(),
                    src: obj(b).into(),
                    dst: obj(a).into(),
                });
                inv.push((name(a, j, b).into(), name(b, (3 - j) % 3, a).into()));
            }
        }
    }
    for a2 in [MINUS, PLUS] {
        for b2 in [MINUS, PLUS] {
            for j in 0..3 {
                for b1 in [MINUS, PLUS] {
                    for i in 0..3 {
                        // (a2, σ^j, b2) · (a1, σ^i, b1) needs a1 = b2
                        let a1 = b2;
                        comp.push((
                            name(a2, j, b2).into(),
                            name(a1, i, b1).into(),
                            name(a2, (j + i) % 3, b1).into(),
                        ));
                    }
                }
            }
        }
    }
    FiniteGroupoid::from_parts(&["-".into(), "+".into()], &morphisms, &inv, &comp)
        .expect("quantum ratchet tables are well-formed")
}

/// Groupoid with a single object built from a group multiplication table:
/// `table[i][j]` is the index of `names[i] · names[j]`. The object is named
/// after the group's identity element.
pub fn build_group_groupoid(names: &[String], table: &[Vec<usize>]) -> Result<FiniteGroupoid> {
    let n = names.len();
    let bad = |msg: String| CoreError::InvalidGroupTable(msg);
    if n == 0 {
        return Err(bad("empty table".into()));
    }
    if table.len() != n || table.iter().any(|row| row.len() != n) {
        return Err(bad(format!("table must be {n}×{n}")));
    }
    if table.iter().flatten().any(|&v| v >= n) {
        return Err(bad("table entry out of range".into()));
    }
    let identity = (0..n)
        .find(|&e| (0..n).all(|i| table[e][i] == i && table[i][e] == i))
        .ok_or_else(|| bad("no two-sided identity".into()))?;
    for i in 0..n {
        if !(0..n).any(|j| table[i][j] == identity && table[j][i] == identity) {
            return Err(bad(format!("element `{}` has no inverse", names[i])));
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if table[table[i][j]][k] != table[i][table[j][k]] {
                    return Err(bad(format!(
                        "not associative at (`{}`, `{}`, `{}`)",
                        names[i], names[j], names[k]
                    )));
                }
            }
        }
    }

    let object = names[identity].clone();
    let morphisms: Vec<RawMorphism> = names
        .iter()
        .map(|g| RawMorphism {
            id: g.clone(),
            src: object.clone(),
            dst: object.clone(),
        })
        .collect();
    let inv: Vec<(String, String)> = (0..n)
        .map(|i| {
            let j = (0..n)
                .find(|&j| table[i][j] == identity && table[j][i] == identity)
                .expect("inverse checked above");
            (names[i].clone(), names[j].clone())
        })
        .collect();
    let mut comp = Vec::new();
    for i in 0..n {
        for j in 0..n {
            comp.push((names[i].clone(), names[j].clone(), names[table[i][j]].clone()));
        }
    }
    FiniteGroupoid::from_parts(&[object], &morphisms, &inv, &comp)
}

/// The cyclic group Z_n as a groupoid, elements `g0 … g{n-1}`.
pub fn build_cyclic_group(n: usize) -> Result<FiniteGroupoid> {
    if n == 0 {
        return Err(CoreError::InvalidGroupTable("order must be positive".into()));
    }
    let width = (n - 1).to_string().len();
    let names: Vec<String> = (0..n).map(|i| format!("g{i:0width$}")).collect();
    let table: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    build_group_groupoid(&names, &table)
}

/// The symmetric group S3 as a groupoid; elements are named by their
/// one-line notation on {0,1,2}, e.g. `p120` maps 0→1, 1→2, 2→0.
pub fn build_symmetric_s3() -> FiniteGroupoid {
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let names: Vec<String> = perms
        .iter()
        .map(|p| format!("p{}{}{}", p[0], p[1], p[2]))
        .collect();
    let index = |p: &[usize; 3]| perms.iter().position(|q| q == p).unwrap();
    let table: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| {
                    // (p · q)(x) = p(q(x))
                    index(&[p[q[0]], p[q[1]], p[q[2]]])
                })
                .collect()
        })
        .collect();
    build_group_groupoid(&names, &table).expect("S3 table is a group")
}

/// Pair groupoid on `n` objects: one morphism `e{i}_{j} : p{j} → p{i}` for
/// every ordered pair, composing as `(i,j) · (j,k) = (i,k)`.
pub fn build_pair_groupoid(n: usize) -> Result<FiniteGroupoid> {
    if n == 0 {
        return Err(CoreError::Malformed("pair groupoid needs n ≥ 1".into()));
    }
    let width = (n - 1).to_string().len();
    let obj = |i: usize| format!("p{i:0width$}");
    let mor = |i: usize, j: usize| format!("e{i:0width$}_{j:0width$}");

    let objects: Vec<String> = (0..n).map(obj).collect();
    let mut morphisms = Vec::new();
    let mut inv = Vec::new();
    let mut comp = Vec::new();
    for i in 0..n {
        for j in 0..n {
            morphisms.push(RawMorphism {
                id: mor(i, j),
                src: obj(j),
                dst: obj(i),
            });
            inv.push((mor(i, j), mor(j, i)));
            for k in 0..n {
                comp.push((mor(i, j), mor(j, k), mor(i, k)));
            }
        }
    }
    FiniteGroupoid::from_parts(&objects, &morphisms, &inv, &comp)
}

/// Finite action groupoid of a permutation acting on `{0..n-1}` with the
/// acting group Z/period. Morphisms are pairs `(x, k)` with range `x` and
/// source `perm^k(x)`; composition adds the exponents mod the period.
/// Requires `perm^period = id`.
pub fn build_action_groupoid(perm: &[usize], period: usize) -> Result<FiniteGroupoid> {
    let n = perm.len();
    if n == 0 || period == 0 {
        return Err(CoreError::Malformed(
            "action groupoid needs nonempty points and a positive period".into(),
        ));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(CoreError::Malformed("not a permutation".into()));
        }
        seen[p] = true;
    }
    let apply_pow = |mut x: usize, k: usize| {
        for _ in 0..k {
            x = perm[x];
        }
        x
    };
    if (0..n).any(|x| apply_pow(x, period) != x) {
        return Err(CoreError::PeriodMismatch { period });
    }

    let ow = (n - 1).to_string().len();
    let kw = (period - 1).to_string().len();
    let obj = |x: usize| format!("x{x:0ow$}");
    let mor = |x: usize, k: usize| format!("x{x:0ow$}_t{k:0kw$}");

    let objects: Vec<String> = (0..n).map(obj).collect();
    let mut morphisms = Vec::new();
    let mut inv = Vec::new();
    let mut comp = Vec::new();
    for x in 0..n {
        for k in 0..period {
            morphisms.push(RawMorphism {
                id: mor(x, k),
                src: obj(apply_pow(x, k)),
                dst: obj(x),
            });
            inv.push((mor(x, k), mor(apply_pow(x, k), (period - k) % period)));
            for k2 in 0..period {
                // (x, k) · (perm^k(x), k2) = (x, k + k2)
                comp.push((
                    mor(x, k),
                    mor(apply_pow(x, k), k2),
                    mor(x, (k + k2) % period),
                ));
            }
        }
    }
    FiniteGroupoid::from_parts(&objects, &morphisms, &inv, &comp)
}
