//! Structural predicates: normally constrained, thin, strongly Frattinian,
//! plus the lattice oracles used to cross-check them on small groups.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::automorphism::route_hypotheses;
use crate::error::{Error, Result};
use crate::pc::{GroupElement, PcGroup};
use crate::subgroup::Subgroup;

/// Everything the hypothesis router looks at, in one serializable record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub prime: u32,
    pub order: u64,
    pub class: usize,
    pub d: usize,
    pub is_nc: bool,
    pub is_thin: bool,
    pub strongly_frattinian: bool,
    /// `d(Z2/Z) = d(G) d(Z)`.
    pub abdollahi_condition: bool,
    pub z2_abelian: bool,
    pub center_type: Vec<u64>,
    /// `None` when `Z2` is not abelian.
    pub z2_type: Option<Vec<u64>>,
    /// `|γi : γi+1|` for `i = 1..=class`.
    pub series_orders: Vec<u64>,
    pub hypothesis_route: String,
}

/// One line of [`PcGroup::nc_invariants_report`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn term(series: &[Subgroup], i: usize) -> &Subgroup {
    // γ_i for 1-based i; everything past the end is trivial
    let last = series.len() - 1;
    &series[(i - 1).min(last)]
}

impl PcGroup {
    /// Covering property at layer `i` (1-based): every `x ∈ γi − γi+1`
    /// satisfies `[x, G] γi+2 = γi+1`. Returns `None` when it holds and a
    /// failing `x` otherwise.
    ///
    /// Only `x` modulo `γi+1` matters, and `[x, G] γi+2` is the subgroup
    /// generated by `γi+2` and the `[x, gj]`, so one transversal suffices.
    pub fn covering_property_check(&self, i: usize) -> Result<Option<GroupElement>> {
        assert!(i >= 1, "layers are numbered from 1");
        let lcs = self.lower_central_series();
        self.covering_on(&lcs, i)
    }

    fn covering_on(&self, lcs: &[Subgroup], i: usize) -> Result<Option<GroupElement>> {
        let (gi, gi1, gi2) = (term(lcs, i), term(lcs, i + 1), term(lcs, i + 2));
        if gi == gi1 {
            return Ok(None);
        }
        let gens = self.generators();
        for x in self.transversal(gi, gi1)? {
            if x.is_identity() {
                continue;
            }
            let mut cover: Vec<GroupElement> = gens.iter().map(|g| self.commutator(&x, g)).collect();
            cover.extend(gi2.igs().iter().cloned());
            if self.subgroup_closure(&cover) != *gi1 {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }

    /// Normally constrained: every normal subgroup is comparable with every
    /// term of the lower central series. Decided by the covering property
    /// for class at least 3 and by `γi ≤ ⟨x⟩^G` for all `x ∉ γi` otherwise;
    /// the `i = 1` condition is vacuous, so abelian groups qualify.
    pub fn is_normally_constrained(&self) -> Result<bool> {
        let lcs = self.lower_central_series();
        let class = lcs.len() - 1;
        if class >= 3 {
            for i in 1..class {
                if self.covering_on(&lcs, i)?.is_some() {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        if class <= 1 {
            return Ok(true);
        }
        let g2 = &lcs[1];
        for x in self.elements()? {
            if self.contains(g2, &x) {
                continue;
            }
            if !self.is_subgroup_of(g2, &self.normal_closure(&[x])) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `d(G) ≤ 1`, or `d(G) = 2` with `|G : γ2| = p^2`, on top of being
    /// normally constrained. This matches the antichain definition exactly,
    /// including the cyclic groups and the abelian groups of rank 2.
    pub fn is_thin(&self) -> Result<bool> {
        let d = self.minimal_generator_count();
        let shape = match d {
            0 | 1 => true,
            2 => self.ngens() - self.lower_central_series()[1].rank() == 2,
            _ => false,
        };
        Ok(shape && self.is_normally_constrained()?)
    }

    /// `C_G(Φ) = Z(Φ)`.
    pub fn is_strongly_frattinian(&self) -> Result<bool> {
        let phi = self.frattini();
        let c = self.centralizer_of_subgroup(&self.whole_group(), &phi)?;
        let z = self.centralizer_of_subgroup(&phi, &phi)?;
        Ok(c == z)
    }

    /// `d(Z2/Z) = d(G) d(Z)`.
    pub fn abdollahi_condition(&self) -> Result<bool> {
        let ucs = self.upper_central_series()?;
        let z = &ucs[1.min(ucs.len() - 1)];
        let z2 = &ucs[2.min(ucs.len() - 1)];
        let dz = self.abelian_section_rank(z, &self.trivial_subgroup());
        let dz2 = self.abelian_section_rank(z2, z);
        Ok(dz2 == self.minimal_generator_count() * dz)
    }

    /// All normal subgroups, sorted by order and then by igs.
    pub fn normal_subgroups(&self) -> Result<Vec<Subgroup>> {
        let elements: Vec<GroupElement> = self.elements()?.collect();
        let trivial = self.trivial_subgroup();
        let mut seen: HashSet<Subgroup> = HashSet::from([trivial.clone()]);
        let mut queue = vec![trivial];
        while let Some(n) = queue.pop() {
            for x in &elements {
                if self.contains(&n, x) {
                    continue;
                }
                let mut gens = n.igs().to_vec();
                gens.push(x.clone());
                let m = self.normal_closure(&gens);
                if seen.insert(m.clone()) {
                    queue.push(m);
                }
            }
        }
        let mut all: Vec<Subgroup> = seen.into_iter().collect();
        all.sort_by(|a, b| a.rank().cmp(&b.rank()).then_with(|| a.igs().cmp(b.igs())));
        Ok(all)
    }

    /// Lattice form of the normally constrained condition: every normal
    /// subgroup is comparable with every `γi`.
    pub fn nc_lattice_oracle(&self) -> Result<bool> {
        let lcs = self.lower_central_series();
        let normals = self.normal_subgroups()?;
        Ok(normals.iter().all(|n| {
            lcs.iter()
                .all(|gi| self.is_subgroup_of(n, gi) || self.is_subgroup_of(gi, n))
        }))
    }

    /// Width of the lattice of normal subgroups (largest antichain), by
    /// Dilworth's theorem: elements minus a maximum matching on strict
    /// comparabilities.
    pub fn antichain_oracle(&self) -> Result<usize> {
        let normals = self.normal_subgroups()?;
        let m = normals.len();
        let below: Vec<Vec<usize>> = (0..m)
            .map(|a| {
                (0..m)
                    .filter(|&b| a != b && normals[a].rank() < normals[b].rank() && self.is_subgroup_of(&normals[a], &normals[b]))
                    .collect()
            })
            .collect();
        let mut matched_to: Vec<Option<usize>> = vec![None; m];
        fn augment(a: usize, below: &[Vec<usize>], seen: &mut [bool], matched_to: &mut [Option<usize>]) -> bool {
            for &b in &below[a] {
                if seen[b] {
                    continue;
                }
                seen[b] = true;
                if matched_to[b].map_or(true, |a2| augment(a2, below, seen, matched_to)) {
                    matched_to[b] = Some(a);
                    return true;
                }
            }
            false
        }
        let mut matching = 0;
        for a in 0..m {
            let mut seen = vec![false; m];
            if augment(a, &below, &mut seen, &mut matched_to) {
                matching += 1;
            }
        }
        Ok(m - matching)
    }

    /// Checks the structural consequences of being normally constrained of
    /// class at least 3. A failing line means a bug or a misclassified input.
    pub fn nc_invariants_report(&self) -> Result<Vec<InvariantCheck>> {
        let lcs = self.lower_central_series();
        let class = lcs.len() - 1;
        if class < 3 {
            return Err(Error::HypothesisViolation(format!("class {class} < 3")));
        }
        if !self.is_normally_constrained()? {
            return Err(Error::HypothesisViolation("group is not normally constrained".into()));
        }
        let p = self.prime() as u64;
        let layer = |i: usize| term(&lcs, i).rank() - term(&lcs, i + 1).rank();
        let mut out = Vec::new();

        // G/γ3 special of exponent p, |γ2/γ3|^2 = |G/γ2|
        let (q, _) = self.quotient(&lcs[2])?;
        let qz = q.center()?;
        let qphi = q.frattini();
        let qg2 = q.lower_central_series()[1].clone();
        let exponent_p = q.elements()?.all(|x| q.power(&x, p as i64).is_identity());
        let special = qz == qphi && qphi == qg2;
        let (l1, l2) = (layer(1), layer(2));
        out.push(InvariantCheck {
            name: "special quotient",
            passed: special && exponent_p && 2 * l2 == l1,
            detail: format!(
                "G/γ3: Z = Φ = γ2 {special}, exponent p {exponent_p}, |G:γ2| = {p}^{l1}, |γ2:γ3| = {p}^{l2}"
            ),
        });

        // γi/γi+2 elementary abelian for i >= 2
        let mut bad = Vec::new();
        for i in 2..=class {
            let (gi, gi2) = (term(&lcs, i), term(&lcs, i + 2));
            let powers = gi.igs().iter().all(|x| self.contains(gi2, &self.power(x, p as i64)));
            let comms = gi.igs().iter().all(|x| gi.igs().iter().all(|y| self.contains(gi2, &self.commutator(x, y))));
            if !(powers && comms) {
                bad.push(i);
            }
        }
        out.push(InvariantCheck {
            name: "elementary double layers",
            passed: bad.is_empty(),
            detail: if bad.is_empty() {
                format!("γi/γi+2 elementary abelian for 2 <= i <= {class}")
            } else {
                format!("fails at i = {bad:?}")
            },
        });

        // upper and lower central series coincide
        let ucs = self.upper_central_series()?;
        let mut reversed = lcs.clone();
        reversed.reverse();
        out.push(InvariantCheck {
            name: "series coincide",
            passed: reversed == ucs,
            detail: format!(
                "lower orders {:?}, upper orders {:?}",
                lcs.iter().map(Subgroup::order).collect::<Vec<_>>(),
                ucs.iter().map(Subgroup::order).collect::<Vec<_>>()
            ),
        });

        // p^n <= |γi:γi+1| <= p^2n where |G:γ2| = p^2n
        let layers: Vec<usize> = (1..class).map(layer).collect();
        let passed = l1 % 2 == 0 && layers.iter().all(|&l| l1 / 2 <= l && l <= l1);
        out.push(InvariantCheck {
            name: "layer bounds",
            passed,
            detail: format!("|G:γ2| = {p}^{l1}, layer exponents for 1 <= i < {class}: {layers:?}"),
        });
        Ok(out)
    }

    pub fn structure_report(&self) -> Result<StructureReport> {
        let lcs = self.lower_central_series();
        let ucs = self.upper_central_series()?;
        let center = &ucs[1.min(ucs.len() - 1)];
        let z2 = &ucs[2.min(ucs.len() - 1)];
        let z2_abelian = self.is_abelian(z2);
        let hypothesis_route = match route_hypotheses(self) {
            Ok(route) => route.label().to_string(),
            Err(Error::EvenPrime) => "unsupported(p = 2)".to_string(),
            Err(Error::NotNormallyConstrained) => "not normally constrained".to_string(),
            Err(e) => return Err(e),
        };
        Ok(StructureReport {
            prime: self.prime(),
            order: self.order(),
            class: lcs.len() - 1,
            d: self.minimal_generator_count(),
            is_nc: self.is_normally_constrained()?,
            is_thin: self.is_thin()?,
            strongly_frattinian: self.is_strongly_frattinian()?,
            abdollahi_condition: self.abdollahi_condition()?,
            z2_abelian,
            center_type: self.abelian_type(center)?,
            z2_type: if z2_abelian { Some(self.abelian_type(z2)?) } else { None },
            series_orders: lcs.windows(2).map(|w| w[0].order() / w[1].order()).collect(),
            hypothesis_route,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn group(name: &str) -> PcGroup {
        corpus::load(name).unwrap()
    }

    #[test]
    fn normally_constrained_small() {
        for (name, nc) in [
            ("heisenberg27", true),
            ("elab3_2", true),
            ("elab3_3", true),
            ("c9", true),
            ("heisenberg27_x_c3", false),
            ("maxclass3_4", true),
            ("maxclass3_4_x_c3", false),
        ] {
            assert_eq!(group(name).is_normally_constrained().unwrap(), nc, "{name}");
        }
    }

    #[test]
    fn thin_small() {
        for (name, thin) in [("heisenberg27", true), ("elab3_2", true), ("elab3_3", false), ("c9", true), ("c9xc3", false)] {
            assert_eq!(group(name).is_thin().unwrap(), thin, "{name}");
        }
    }

    #[test]
    fn antichains() {
        assert_eq!(group("elab3_2").antichain_oracle().unwrap(), 4);
        assert_eq!(group("c9").antichain_oracle().unwrap(), 1);
        assert_eq!(group("elab3_3").antichain_oracle().unwrap(), 13);
        assert_eq!(group("elab3_2").normal_subgroups().unwrap().len(), 6);
    }

    #[test]
    fn covering_witness_on_direct_product() {
        let g = group("maxclass3_4_x_c3");
        assert!((1..4).any(|i| g.covering_property_check(i).unwrap().is_some()));
        assert!(g.covering_property_check(7).unwrap().is_none());
        let m = group("maxclass3_4");
        assert!((1..=4).all(|i| m.covering_property_check(i).unwrap().is_none()));
    }

    #[test]
    fn strongly_frattinian() {
        assert!(!group("heisenberg27").is_strongly_frattinian().unwrap());
        assert!(!group("c9").is_strongly_frattinian().unwrap());
    }

    #[test]
    fn invariants_guard_class() {
        assert!(matches!(
            group("heisenberg27").nc_invariants_report(),
            Err(Error::HypothesisViolation(_))
        ));
        let report = group("maxclass3_5").nc_invariants_report().unwrap();
        assert_eq!(report.len(), 4);
        assert!(report.iter().all(|c| c.passed), "{report:?}");
    }

    #[test]
    fn report_fields() {
        let r = group("heisenberg27").structure_report().unwrap();
        assert_eq!(r.class, 2);
        assert_eq!(r.d, 2);
        assert!(r.is_thin);
        assert_eq!(r.series_orders, vec![9, 3]);
        assert_eq!(r.center_type, vec![3]);
        assert_eq!(r.hypothesis_route, "reduction(class ≤ 3)");
    }
}
