//! Automorphisms given by generator images, lifting of derivations, the
//! innerness test, the hypothesis router and the two constructions of a
//! non-inner automorphism of order `p`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::derivation::{Derivation, GModule};
use crate::error::{Error, FaultKind, Result};
use crate::pc::{GroupElement, PcGroup, Word};
use crate::subgroup::Subgroup;

/// An endomorphism of `G` stored by the images of the PC generators.
/// Values built through the public constructors are automorphisms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Automorphism {
    images: Vec<GroupElement>,
}

/// Product of `images[i]^e` over the letters of `w`.
fn eval_word_on_images(g: &PcGroup, images: &[GroupElement], w: &Word) -> GroupElement {
    w.letters
        .iter()
        .fold(g.identity(), |acc, &(i, e)| g.multiply(&acc, &g.power(&images[i], e)))
}

/// Name of the first PC relator not sent to the identity by `images`.
pub fn broken_relator(g: &PcGroup, images: &[GroupElement]) -> Option<String> {
    g.presentation()
        .relators()
        .into_iter()
        .find(|(_, w)| !eval_word_on_images(g, images, w).is_identity())
        .map(|(name, _)| name)
}

fn generates(g: &PcGroup, images: &[GroupElement]) -> bool {
    g.subgroup_closure(images).rank() == g.ngens()
}

impl Automorphism {
    pub fn identity(g: &PcGroup) -> Self {
        Automorphism { images: g.generators() }
    }

    /// Validates that `images` preserve every relator and generate `G`.
    pub fn from_images(g: &PcGroup, images: Vec<GroupElement>) -> Result<Self> {
        if images.len() != g.ngens() {
            return Err(Error::WrongImageCount {
                expected: g.ngens(),
                got: images.len(),
            });
        }
        if let Some(r) = broken_relator(g, &images) {
            return Err(Error::RelatorBroken(r));
        }
        if !generates(g, &images) {
            return Err(Error::HypothesisViolation("images do not generate the group".into()));
        }
        Ok(Automorphism { images })
    }

    /// `φ(g) = g δ(g)`, valid when `δ` vanishes on its module.
    pub fn lift(delta: &Derivation<'_>) -> Result<Self> {
        let m = delta.module();
        let g = m.group();
        for x in m.carrier().igs() {
            let v = delta.evaluate(x);
            if !v.is_identity() {
                return Err(Error::ModuleNotAnnihilated(v.to_string()));
            }
        }
        let images: Vec<GroupElement> = g
            .generators()
            .iter()
            .zip(delta.images())
            .map(|(x, d)| g.multiply(x, d))
            .collect();
        if let Some(r) = broken_relator(g, &images) {
            return Err(Error::RelatorBroken(r));
        }
        if !generates(g, &images) {
            return Err(Error::RelatorBroken("images do not generate the group".into()));
        }
        Ok(Automorphism { images })
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, x)| x.exps().iter().enumerate().all(|(k, &e)| e == u32::from(k == i)))
    }

    pub fn apply(&self, g: &PcGroup, a: &GroupElement) -> GroupElement {
        eval_word_on_images(g, &self.images, &a.to_word())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, g: &PcGroup, other: &Automorphism) -> Automorphism {
        Automorphism {
            images: other.images.iter().map(|x| self.apply(g, x)).collect(),
        }
    }

    /// Least `k >= 1` with `φ^k = 1`, giving up past the enumeration cap.
    pub fn order(&self, g: &PcGroup) -> Result<u64> {
        let mut power = self.clone();
        let mut k = 1u64;
        while !power.is_identity() {
            k += 1;
            if k > g.cap() {
                return Err(Error::CapExceeded { size: k, cap: g.cap() });
            }
            power = self.compose(g, &power);
        }
        Ok(k)
    }
}

/// Some `h` with `φ(gi) = gi^h` for every PC generator, scanning `G` in
/// lexicographic order; `None` means `φ` is not inner.
pub fn innerness_witness(g: &PcGroup, phi: &Automorphism) -> Result<Option<GroupElement>> {
    let gens = g.generators();
    Ok(g.elements()?.find(|h| {
        let hinv = g.inverse(h);
        gens.iter()
            .zip(phi.images())
            .all(|(x, y)| g.multiply(&hinv, &g.multiply(x, h)) == *y)
    }))
}

/// Conjugation action of every element on a generating set, keyed by the
/// image tuple, first conjugator in lexicographic order kept.
pub(crate) struct InnerTable {
    gens: Vec<usize>,
    first: HashMap<Vec<GroupElement>, GroupElement>,
}

impl InnerTable {
    pub(crate) fn new(g: &PcGroup, gens: Vec<usize>) -> Result<Self> {
        let mut first = HashMap::new();
        for h in g.elements()? {
            let key: Vec<_> = gens.iter().map(|&i| g.conjugate(&g.generator(i), &h)).collect();
            first.entry(key).or_insert(h);
        }
        Ok(InnerTable { gens, first })
    }

    /// Valid for automorphisms only: they are determined by the images of a
    /// generating set.
    pub(crate) fn witness(&self, phi: &Automorphism) -> Option<&GroupElement> {
        let key: Vec<_> = self.gens.iter().map(|&i| phi.images[i].clone()).collect();
        self.first.get(&key)
    }
}

/// Outcome of the hypothesis router.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    /// Class at most 3: covered by earlier results.
    LowClass,
    NotStronglyFrattinian,
    /// `d(Z2/Z) ≠ d(G) d(Z)`: a non-inner automorphism of order `p` fixing
    /// `Φ(G)` elementwise exists.
    CentralRankCondition,
    NonAbelianSecondCenter,
    /// Two-generator (thin) construction.
    Thin,
    /// Construction through the centralizer intersection, `d >= 3`.
    ManyGenerators,
}

impl Route {
    pub fn label(self) -> &'static str {
        match self {
            Route::LowClass => "reduction(class ≤ 3)",
            Route::NotStronglyFrattinian => "reduction(not strongly Frattinian)",
            Route::CentralRankCondition => "reduction(d(Z2/Z) ≠ d(G)d(Z))",
            Route::NonAbelianSecondCenter => "reduction(Z2 non-abelian)",
            Route::Thin => "Thm3.4",
            Route::ManyGenerators => "Thm4.2",
        }
    }

    pub fn is_reduction(self) -> bool {
        !matches!(self, Route::Thin | Route::ManyGenerators)
    }
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// First applicable route: low class, not strongly Frattinian, the central
/// rank condition, non-abelian `Z2`, then the normally constrained check
/// and the split on `d(G)`.
pub fn route_hypotheses(g: &PcGroup) -> Result<Route> {
    if g.prime() == 2 {
        return Err(Error::EvenPrime);
    }
    if g.nilpotency_class() <= 3 {
        return Ok(Route::LowClass);
    }
    if !g.is_strongly_frattinian()? {
        return Ok(Route::NotStronglyFrattinian);
    }
    if !g.abdollahi_condition()? {
        return Ok(Route::CentralRankCondition);
    }
    let ucs = g.upper_central_series()?;
    if !g.is_abelian(&ucs[2]) {
        return Ok(Route::NonAbelianSecondCenter);
    }
    if !g.is_normally_constrained()? {
        return Err(Error::NotNormallyConstrained);
    }
    Ok(if g.minimal_generator_count() == 2 {
        Route::Thin
    } else {
        Route::ManyGenerators
    })
}

/// Which construction produced an automorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// Thin groups, `Z2` elementary abelian of order `p^3`.
    ThinCaseA,
    /// Thin groups, `Z2 ≅ C_{p^2} × C_p`.
    ThinCaseB,
    /// Centralizer intersection `K`.
    Centralizer,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::ThinCaseA => "Thm3.4-caseA",
            Method::ThinCaseB => "Thm3.4-caseB",
            Method::Centralizer => "Thm4.2",
        }
    }
}

/// A constructed automorphism with its order and exhaustive innerness scan.
#[derive(Debug, Clone)]
pub struct Construction {
    pub method: Method,
    pub automorphism: Automorphism,
    pub order: u64,
    /// Number of conjugators scanned without finding a witness.
    pub search_size: u64,
}

struct Centers {
    center: Subgroup,
    z2: Subgroup,
}

/// Shared preconditions of the constructions: odd `p`, minimal generators
/// in front, `Z(G)` of order `p`, abelian `Z2`.
fn construction_setup(g: &PcGroup) -> Result<Centers> {
    if g.prime() == 2 {
        return Err(Error::EvenPrime);
    }
    let d = g.minimal_generator_count();
    if g.minimal_generator_indices() != (0..d).collect::<Vec<_>>() {
        return Err(Error::GeneratorsNotMinimal(d));
    }
    let ucs = g.upper_central_series()?;
    if ucs.len() < 3 {
        return Err(Error::HypothesisViolation("class below 2".into()));
    }
    let (center, z2) = (ucs[1].clone(), ucs[2].clone());
    if center.rank() != 1 {
        return Err(Error::HypothesisViolation(format!("|Z(G)| = {}, expected p", center.order())));
    }
    if !g.is_abelian(&z2) {
        return Err(Error::NotAbelian);
    }
    Ok(Centers { center, z2 })
}

/// Lifts `delta`, checks order `p`, and scans all of `G` for a conjugator.
/// A witness is an engine contradiction: the constructions rule it out.
fn finish(g: &PcGroup, method: Method, delta: &Derivation<'_>) -> Result<Construction> {
    let phi = Automorphism::lift(delta)?;
    let order = phi.order(g)?;
    if order != g.prime() as u64 {
        return Err(Error::fault(
            FaultKind::EngineContradiction,
            format!("{}: lifted automorphism {:?} has order {order}", method.label(), phi.images),
        ));
    }
    if let Some(h) = innerness_witness(g, &phi)? {
        return Err(Error::fault(
            FaultKind::EngineContradiction,
            format!(
                "{}: automorphism {:?} is conjugation by {:?}",
                method.label(),
                phi.images,
                h
            ),
        ));
    }
    Ok(Construction {
        method,
        automorphism: phi,
        order,
        search_size: g.order(),
    })
}

fn sorted_elements(g: &PcGroup, s: &Subgroup) -> Result<Vec<GroupElement>> {
    let mut all: Vec<GroupElement> = g.subgroup_elements(s)?.collect();
    all.sort();
    Ok(all)
}

/// Non-inner automorphism of order `p` for a group routed to the thin
/// construction. Images of `x1, x2` range over `Ω1(Z2)`; the remaining PC
/// generators get the values forced by the cocycle condition.
pub fn berkovich_thin(g: &PcGroup) -> Result<Construction> {
    let route = route_hypotheses(g)?;
    if route != Route::Thin {
        return Err(Error::RouteMismatch {
            expected: Route::Thin.label().into(),
            found: route.label().into(),
        });
    }
    thin_construction(g)
}

/// The thin construction without the router gate (still checks its own
/// structural preconditions).
pub fn thin_construction(g: &PcGroup) -> Result<Construction> {
    let Centers { center, z2 } = construction_setup(g)?;
    if g.minimal_generator_count() != 2 {
        return Err(Error::HypothesisViolation("the thin construction needs d(G) = 2".into()));
    }
    let p = g.prime() as u64;
    let omega = g.omega1(&z2)?;
    let module = GModule::new(g, omega.clone())?;
    let basis = module.cocycle_basis()?;
    let candidates = sorted_elements(g, &omega)?;
    let ty = g.abelian_type(&z2)?;
    let solve = |u: &GroupElement, v: &GroupElement| {
        module.solve_in_basis(&basis, &[u.clone(), v.clone()]).ok_or_else(|| {
            Error::fault(
                FaultKind::EngineContradiction,
                format!("assignment x1 -> {u:?}, x2 -> {v:?} does not extend to a derivation"),
            )
        })
    };

    if ty == vec![p, p, p] {
        let table = InnerTable::new(g, vec![0, 1])?;
        for u in &candidates {
            for v in &candidates {
                let delta = solve(u, v)?;
                let phi = Automorphism::lift(&delta)?;
                if table.witness(&phi).is_none() {
                    return finish(g, Method::ThinCaseA, &delta);
                }
            }
        }
        return Err(Error::fault(
            FaultKind::CaseACountingFailure,
            format!("all {} lifts are inner", candidates.len().pow(2)),
        ));
    }
    if ty == vec![p * p, p] {
        let u = candidates
            .iter()
            .find(|x| !x.is_identity() && !g.contains(&center, x))
            .ok_or_else(|| Error::HypothesisViolation("Ω1(Z2) is central".into()))?;
        let v = candidates.iter().find(|x| !x.is_identity()).expect("Ω1(Z2) is nontrivial");
        return finish(g, Method::ThinCaseB, &solve(u, v)?);
    }
    Err(Error::HypothesisViolation(format!("Z2 has type {ty:?}, expected p^3 or p^2 × p")))
}

/// Counts for the assignment family of the thin construction when `Z2` is
/// elementary abelian of order `p^3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseACensus {
    pub assignments: usize,
    pub distinct_derivations: usize,
    pub distinct_automorphisms: usize,
    pub inner: usize,
    pub all_order_p: bool,
}

pub fn case_a_census(g: &PcGroup) -> Result<CaseACensus> {
    let Centers { z2, .. } = construction_setup(g)?;
    let p = g.prime() as u64;
    if g.minimal_generator_count() != 2 || g.abelian_type(&z2)? != vec![p, p, p] {
        return Err(Error::HypothesisViolation("needs d(G) = 2 and Z2 elementary abelian of order p^3".into()));
    }
    let module = GModule::new(g, z2.clone())?;
    let basis = module.cocycle_basis()?;
    let candidates = sorted_elements(g, &z2)?;
    let table = InnerTable::new(g, vec![0, 1])?;
    let pairs: Vec<(&GroupElement, &GroupElement)> =
        candidates.iter().flat_map(|u| candidates.iter().map(move |v| (u, v))).collect();
    let results: Vec<(Vec<u32>, Automorphism, bool, u64)> = pairs
        .par_iter()
        .map(|(u, v)| {
            let delta = module.solve_in_basis(&basis, &[(*u).clone(), (*v).clone()]).ok_or_else(|| {
                Error::fault(FaultKind::EngineContradiction, format!("x1 -> {u:?}, x2 -> {v:?} does not extend"))
            })?;
            let phi = Automorphism::lift(&delta)?;
            let inner = table.witness(&phi).is_some();
            let order = phi.order(g)?;
            Ok((delta.to_vector(), phi, inner, order))
        })
        .collect::<Result<_>>()?;
    let mut derivations: Vec<&Vec<u32>> = results.iter().map(|r| &r.0).collect();
    derivations.sort();
    derivations.dedup();
    let mut autos: Vec<&Automorphism> = results.iter().map(|r| &r.1).collect();
    autos.sort_by(|a, b| a.images.cmp(&b.images));
    autos.dedup();
    Ok(CaseACensus {
        assignments: results.len(),
        distinct_derivations: derivations.len(),
        distinct_automorphisms: autos.len(),
        inner: results.iter().filter(|r| r.2).count(),
        all_order_p: results.iter().all(|r| r.3 == 1 || r.3 == p),
    })
}

/// `K = C_{Z2}(⟨x2, ..., xd⟩)`, which must have order `p^2`.
pub fn centralizer_intersection(g: &PcGroup) -> Result<Subgroup> {
    let Centers { z2, .. } = construction_setup(g)?;
    let d = g.minimal_generator_count();
    let others: Vec<GroupElement> = (1..d).map(|i| g.generator(i)).collect();
    let k = g.centralizer_of_subgroup(&z2, &g.subgroup_closure(&others))?;
    if k.rank() != 2 {
        return Err(Error::fault(
            FaultKind::KOrderUnexpected,
            format!("|K| = {}, K = {:?}", k.order(), k.igs()),
        ));
    }
    Ok(k)
}

/// Non-inner automorphism of order `p` for a group routed to the
/// centralizer construction (`d >= 3`).
pub fn berkovich_general(g: &PcGroup) -> Result<Construction> {
    let route = route_hypotheses(g)?;
    if route != Route::ManyGenerators {
        return Err(Error::RouteMismatch {
            expected: Route::ManyGenerators.label().into(),
            found: route.label().into(),
        });
    }
    centralizer_construction(g)
}

/// The centralizer construction without the router gate: `δ(x1) = u1`,
/// `δ(xi) = 1` for `i >= 2`, with `u1` the first element of `K − Z(G)`.
/// It applies to two-generator groups as well.
pub fn centralizer_construction(g: &PcGroup) -> Result<Construction> {
    let Centers { center, .. } = construction_setup(g)?;
    let k = centralizer_intersection(g)?;
    let u1 = sorted_elements(g, &k)?
        .into_iter()
        .find(|x| !g.contains(&center, x))
        .expect("|K| > |Z(G)|");
    let d = g.minimal_generator_count();
    let mut prefix = vec![g.identity(); d];
    prefix[0] = u1.clone();
    let module = GModule::new(g, k)?;
    let delta = module.solve_with_prefix(&prefix)?.ok_or_else(|| {
        Error::fault(
            FaultKind::EngineContradiction,
            format!("x1 -> {u1:?}, xi -> 1 does not extend to a derivation"),
        )
    })?;
    finish(g, Method::Centralizer, &delta)
}

/// Summary of the exhaustive search over automorphisms fixing `Φ(G)`
/// elementwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleSummary {
    pub candidates: u64,
    pub frattini_fixing: u64,
    pub count_order_p: u64,
    pub non_inner_order_p: u64,
    pub exists_noninner_order_p_fixing_frattini: bool,
    /// Every automorphism `x ↦ x m(x)` with central `m` is inner.
    pub central_lifts_all_inner: bool,
}

/// Upper bound on image tuples the oracle is willing to test.
pub const ORACLE_CANDIDATE_LIMIT: u64 = 531_441;

/// Enumerates every automorphism fixing `Φ(G)` elementwise. Such a map
/// sends each minimal generator `x` to `x m` with `m ∈ C_G(Φ(G))`, so the
/// candidates are tuples from that centralizer; the other PC generators
/// follow from fixed words in the minimal generators.
pub fn brute_force_aut_oracle(g: &PcGroup) -> Result<OracleSummary> {
    let p = g.prime() as u64;
    let mins = g.minimal_generator_indices();
    let phi_sub = g.frattini();
    let cent: Vec<GroupElement> = g.subgroup_elements(&g.centralizer_of_subgroup(&g.whole_group(), &phi_sub)?)?.collect();
    let center = g.center()?;
    let candidates = (cent.len() as u64)
        .checked_pow(mins.len() as u32)
        .filter(|&c| c <= ORACLE_CANDIDATE_LIMIT)
        .ok_or(Error::CapExceeded {
            size: (cent.len() as f64).powi(mins.len() as i32) as u64,
            cap: ORACLE_CANDIDATE_LIMIT,
        })?;

    // words in the minimal generators for every PC generator, by BFS
    let mut parent: HashMap<GroupElement, (GroupElement, usize)> = HashMap::new();
    let mut frontier = vec![g.identity()];
    let mut reached = std::collections::HashSet::from([g.identity()]);
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for (k, &i) in mins.iter().enumerate() {
                let b = g.multiply(a, &g.generator(i));
                if reached.insert(b.clone()) {
                    parent.insert(b.clone(), (a.clone(), k));
                    next.push(b);
                }
            }
        }
        frontier = next;
        if reached.len() as u64 > g.cap() {
            return Err(Error::CapExceeded {
                size: g.order(),
                cap: g.cap(),
            });
        }
    }
    let words: Vec<Vec<usize>> = (0..g.ngens())
        .map(|j| {
            let mut w = Vec::new();
            let mut cur = g.generator(j);
            while let Some((prev, k)) = parent.get(&cur) {
                w.push(*k);
                cur = prev.clone();
            }
            w.reverse();
            w
        })
        .collect();

    let relators = g.presentation().relators();
    let table = InnerTable::new(g, mins.clone())?;
    let d = mins.len();
    let m = cent.len() as u64;

    // (valid and Φ-fixing, order, inner, central)
    let outcomes: Vec<(u64, bool, bool)> = (0..candidates)
        .into_par_iter()
        .filter_map(|code| {
            let mut c = code;
            let mut ms = Vec::with_capacity(d);
            for _ in 0..d {
                ms.push(&cent[(c % m) as usize]);
                c /= m;
            }
            let xs: Vec<GroupElement> = mins.iter().zip(&ms).map(|(&i, mi)| g.multiply(&g.generator(i), mi)).collect();
            let images: Vec<GroupElement> = words
                .iter()
                .map(|w| w.iter().fold(g.identity(), |acc, &k| g.multiply(&acc, &xs[k])))
                .collect();
            if relators.iter().any(|(_, w)| !eval_word_on_images(g, &images, w).is_identity()) {
                return None;
            }
            if !generates(g, &images) {
                return None;
            }
            let phi = Automorphism { images };
            if phi_sub.igs().iter().any(|f| phi.apply(g, f) != *f) {
                return None;
            }
            let order = phi.order(g).ok()?;
            let inner = table.witness(&phi).is_some();
            let central = ms.iter().all(|x| g.contains(&center, x));
            Some((order, inner, central))
        })
        .collect();
    let order_p: Vec<_> = outcomes.iter().filter(|o| o.0 == p).collect();
    let non_inner_order_p = order_p.iter().filter(|o| !o.1).count() as u64;
    Ok(OracleSummary {
        candidates,
        frattini_fixing: outcomes.len() as u64,
        count_order_p: order_p.len() as u64,
        non_inner_order_p,
        exists_noninner_order_p_fixing_frattini: non_inner_order_p > 0,
        central_lifts_all_inner: outcomes.iter().filter(|o| o.2).all(|o| o.1),
    })
}
