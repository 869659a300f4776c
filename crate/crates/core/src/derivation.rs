//! Derivations (1-cocycles) `δ: G → M` into a normal abelian subgroup `M`,
//! with `G` acting by conjugation: `δ(gh) = δ(g)^h δ(h)`.
//!
//! A derivation is stored by its values on the PC generators. Values on
//! arbitrary words are obtained by running the cocycle rule letter by letter,
//! which is exactly the free-group derivation with those generator values.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg;
use crate::pc::{GroupElement, PcGroup, Word};
use crate::subgroup::Subgroup;

/// A normal abelian subgroup viewed as a `G`-module under conjugation.
#[derive(Debug, Clone)]
pub struct GModule<'g> {
    group: &'g PcGroup,
    carrier: Subgroup,
}

/// The first relator whose free-derivation value is not trivial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelatorViolation {
    pub relator: String,
    pub value: GroupElement,
}

impl std::fmt::Display for RelatorViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "relator {} evaluates to {}", self.relator, self.value)
    }
}

impl<'g> GModule<'g> {
    pub fn new(group: &'g PcGroup, carrier: Subgroup) -> Result<Self> {
        if !group.is_normal(&carrier) {
            return Err(Error::NotNormal);
        }
        if !group.is_abelian(&carrier) {
            return Err(Error::NotAbelian);
        }
        Ok(GModule { group, carrier })
    }

    pub fn group(&self) -> &'g PcGroup {
        self.group
    }

    pub fn carrier(&self) -> &Subgroup {
        &self.carrier
    }

    pub fn contains(&self, m: &GroupElement) -> bool {
        self.group.contains(&self.carrier, m)
    }

    fn is_elementary(&self) -> bool {
        let p = self.group.prime() as i64;
        self.carrier.igs().iter().all(|x| self.group.power(x, p).is_identity())
    }

    /// Value of the derivation with generator values `images` on the free
    /// word `w`. Tracks `(δ(u), π(u))` along prefixes `u` of `w`.
    pub fn eval_on_word(&self, images: &[GroupElement], w: &Word) -> GroupElement {
        let g = self.group;
        let mut delta = g.identity();
        let mut pi = g.identity();
        for &(i, e) in &w.letters {
            let gen = g.generator(i);
            // δ(gi^-1) = (δ(gi)^(gi^-1))^-1
            let (step_delta, step_pi) = if e >= 0 {
                (images[i].clone(), gen)
            } else {
                let inv = g.inverse(&gen);
                (g.inverse(&g.conjugate(&images[i], &inv)), inv)
            };
            for _ in 0..e.unsigned_abs() {
                delta = g.multiply(&g.conjugate(&delta, &step_pi), &step_delta);
                pi = g.multiply(&pi, &step_pi);
            }
        }
        delta
    }

    fn check_images(&self, images: &[GroupElement]) -> Result<()> {
        let n = self.group.ngens();
        if images.len() != n {
            return Err(Error::WrongImageCount {
                expected: n,
                got: images.len(),
            });
        }
        if !images.iter().all(|m| self.contains(m)) {
            return Err(Error::ImagesNotInModule);
        }
        Ok(())
    }

    /// Accepts `images` as a derivation iff every PC relator evaluates to the
    /// identity. The outer error covers malformed input, the inner one names
    /// the first violated relator.
    pub fn extend_assignment(
        &self,
        images: Vec<GroupElement>,
    ) -> Result<std::result::Result<Derivation<'g>, RelatorViolation>> {
        self.check_images(&images)?;
        for (name, w) in self.group.presentation().relators() {
            let value = self.eval_on_word(&images, &w);
            if !value.is_identity() {
                return Ok(Err(RelatorViolation { relator: name, value }));
            }
        }
        Ok(Ok(Derivation {
            module: self.clone(),
            images,
        }))
    }

    /// The inner derivation `g ↦ [g, h]`, defined when `[G, h] ⊆ M`.
    pub fn principal_derivation(&self, h: &GroupElement) -> Result<Derivation<'g>> {
        let g = self.group;
        let images: Vec<GroupElement> = g.generators().iter().map(|x| g.commutator(x, h)).collect();
        if !images.iter().all(|m| self.contains(m)) {
            return Err(Error::CommutatorsNotInModule);
        }
        Ok(Derivation {
            module: self.clone(),
            images,
        })
    }

    fn coords(&self, m: &GroupElement) -> Vec<u32> {
        self.group
            .igs_coordinates(&self.carrier, m)
            .expect("value lies in the module")
    }

    fn element(&self, coords: &[u32]) -> GroupElement {
        self.group.from_igs_coordinates(&self.carrier, coords)
    }

    /// Images encoded by a flat vector of `n * dim M` coordinates.
    fn images_from_vector(&self, v: &[u32]) -> Vec<GroupElement> {
        let k = self.carrier.rank();
        (0..self.group.ngens()).map(|i| self.element(&v[i * k..(i + 1) * k])).collect()
    }

    /// Matrix of the linear map (assignments) → (relator values), for an
    /// elementary abelian carrier.
    fn relator_matrix(&self) -> Vec<Vec<u32>> {
        let g = self.group;
        let n = g.ngens();
        let k = self.carrier.rank();
        let relators = g.presentation().relators();
        let mut rows = vec![vec![0u32; n * k]; relators.len() * k];
        for col in 0..n * k {
            let mut unit = vec![0u32; n * k];
            unit[col] = 1;
            let images = self.images_from_vector(&unit);
            for (r, (_, w)) in relators.iter().enumerate() {
                for (t, c) in self.coords(&self.eval_on_word(&images, w)).into_iter().enumerate() {
                    rows[r * k + t][col] = c;
                }
            }
        }
        rows
    }

    fn require_elementary(&self) -> Result<()> {
        if self.is_elementary() {
            Ok(())
        } else {
            Err(Error::NotElementaryAbelian)
        }
    }

    /// A basis of `Z¹(G, M)` as flat coordinate vectors (generator-major).
    pub(crate) fn cocycle_basis(&self) -> Result<Vec<Vec<u32>>> {
        self.require_elementary()?;
        let n = self.group.ngens();
        let k = self.carrier.rank();
        Ok(linalg::nullspace(&self.relator_matrix(), n * k, self.group.prime()))
    }

    /// A basis of `Z¹(G, M)`; the carrier must be elementary abelian.
    pub fn derivation_space(&self) -> Result<Vec<Derivation<'g>>> {
        Ok(self
            .cocycle_basis()?
            .iter()
            .map(|v| Derivation {
                module: self.clone(),
                images: self.images_from_vector(v),
            })
            .collect())
    }

    /// A basis of the span of the inner derivations `δ_h`, over all `h` with
    /// `[G, h] ⊆ M`.
    pub fn principal_space(&self) -> Result<Vec<Derivation<'g>>> {
        self.require_elementary()?;
        let g = self.group;
        let p = g.prime();
        let gens = g.generators();
        let mut vectors: Vec<Vec<u32>> = Vec::new();
        for h in g.elements()? {
            let images: Vec<GroupElement> = gens.iter().map(|x| g.commutator(x, &h)).collect();
            if !images.iter().all(|m| self.contains(m)) {
                continue;
            }
            let v: Vec<u32> = images.iter().flat_map(|m| self.coords(m)).collect();
            vectors.push(v);
            linalg::rref(&mut vectors, p);
        }
        Ok(vectors
            .iter()
            .map(|v| Derivation {
                module: self.clone(),
                images: self.images_from_vector(v),
            })
            .collect())
    }

    /// The unique cocycle whose values on the first `prefix.len()` PC
    /// generators are `prefix`, if one exists.
    pub fn solve_with_prefix(&self, prefix: &[GroupElement]) -> Result<Option<Derivation<'g>>> {
        let basis = self.cocycle_basis()?;
        Ok(self.solve_in_basis(&basis, prefix))
    }

    pub(crate) fn solve_in_basis(&self, basis: &[Vec<u32>], prefix: &[GroupElement]) -> Option<Derivation<'g>> {
        let p = self.group.prime();
        let n = self.group.ngens();
        let k = self.carrier.rank();
        let target: Vec<u32> = prefix.iter().flat_map(|m| self.coords(m)).collect();
        let rows: Vec<Vec<u32>> = (0..target.len()).map(|r| basis.iter().map(|b| b[r]).collect()).collect();
        let coeffs = linalg::solve(&rows, &target, basis.len(), p)?;
        let v = linalg::combine(basis, &coeffs, n * k, p);
        Some(Derivation {
            module: self.clone(),
            images: self.images_from_vector(&v),
        })
    }
}

/// A validated derivation, stored by its values on the PC generators.
#[derive(Debug, Clone)]
pub struct Derivation<'g> {
    module: GModule<'g>,
    images: Vec<GroupElement>,
}

impl<'g> Derivation<'g> {
    pub fn module(&self) -> &GModule<'g> {
        &self.module
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    /// `δ(a)`, computed on the normal word of `a`.
    pub fn evaluate(&self, a: &GroupElement) -> GroupElement {
        self.module.eval_on_word(&self.images, &a.to_word())
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(GroupElement::is_identity)
    }

    /// Values in the module's igs coordinates, keyed by 1-based generator.
    pub fn coordinates(&self) -> BTreeMap<usize, Vec<u32>> {
        self.images
            .iter()
            .enumerate()
            .map(|(i, m)| (i + 1, self.module.coords(m)))
            .collect()
    }

    /// Flat coordinate vector, generator-major.
    pub fn to_vector(&self) -> Vec<u32> {
        self.images.iter().flat_map(|m| self.module.coords(m)).collect()
    }
}

impl serde::Serialize for Derivation<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coordinates().serialize(s)
    }
}

impl PartialEq for Derivation<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.module.carrier == other.module.carrier && self.images == other.images
    }
}
