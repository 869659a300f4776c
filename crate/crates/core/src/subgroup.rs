//! Subgroups as canonical induced generating sequences, and the classical
//! series built from them.
//!
//! A [`Subgroup`] stores a fully reduced echelon sequence: leading exponents
//! are 1, depths strictly increase, and every row has exponent 0 at the depth
//! of every other row. That form is unique per subgroup, so subgroup equality
//! is plain `==`.

use crate::error::{Error, Result};
use crate::pc::{ExponentTuples, GroupElement, PcGroup, PcPresentation};

#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Subgroup {
    #[serde(skip)]
    prime: u32,
    #[serde(skip)]
    ngens: usize,
    igs: Vec<GroupElement>,
}

impl Subgroup {
    pub fn igs(&self) -> &[GroupElement] {
        &self.igs
    }

    /// `log_p` of the order.
    pub fn rank(&self) -> usize {
        self.igs.len()
    }

    pub fn order(&self) -> u64 {
        (self.prime as u64).pow(self.igs.len() as u32)
    }

    pub fn is_trivial(&self) -> bool {
        self.igs.is_empty()
    }

    pub fn depths(&self) -> Vec<usize> {
        self.igs.iter().filter_map(|r| r.depth()).collect()
    }

    fn rows(&self) -> Vec<Option<GroupElement>> {
        let mut rows = vec![None; self.ngens];
        for r in &self.igs {
            rows[r.depth().expect("igs rows are nontrivial")] = Some(r.clone());
        }
        rows
    }
}

pub(crate) fn mod_inverse(a: u32, p: u32) -> u32 {
    let (a, p) = (a as u64 % p as u64, p as u64);
    // p is prime
    let mut result = 1u64;
    let mut base = a;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result as u32
}

impl PcGroup {
    fn sift_rows(&self, rows: &[Option<GroupElement>], mut g: GroupElement) -> GroupElement {
        while let Some(d) = g.depth() {
            let Some(r) = &rows[d] else { break };
            let a = g.exps()[d] as i64;
            g = self.multiply(&g, &self.power(r, -a));
        }
        g
    }

    fn build_subgroup(&self, gens: impl IntoIterator<Item = GroupElement>, normal: bool) -> Subgroup {
        let n = self.ngens();
        let p = self.prime();
        let mut rows: Vec<Option<GroupElement>> = vec![None; n];
        let mut queue: Vec<GroupElement> = gens.into_iter().collect();
        while let Some(g) = queue.pop() {
            let r = self.sift_rows(&rows, g);
            let Some(d) = r.depth() else { continue };
            let r = self.power(&r, mod_inverse(r.exps()[d], p) as i64);
            queue.push(self.power(&r, p as i64));
            for s in rows.iter().flatten() {
                queue.push(self.commutator(&r, s));
            }
            if normal {
                for j in 0..n {
                    queue.push(self.commutator(&r, &self.generator(j)));
                }
            }
            rows[d] = Some(r);
        }
        self.reduce_rows(rows)
    }

    fn reduce_rows(&self, mut rows: Vec<Option<GroupElement>>) -> Subgroup {
        let n = self.ngens();
        for d in 0..n {
            let Some(mut row) = rows[d].clone() else { continue };
            for e in d + 1..n {
                if let Some(other) = &rows[e] {
                    let c = row.exps()[e] as i64;
                    if c != 0 {
                        row = self.multiply(&row, &self.power(other, -c));
                    }
                }
            }
            rows[d] = Some(row);
        }
        Subgroup {
            prime: self.prime(),
            ngens: n,
            igs: rows.into_iter().flatten().collect(),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            prime: self.prime(),
            ngens: self.ngens(),
            igs: Vec::new(),
        }
    }

    pub fn whole_group(&self) -> Subgroup {
        Subgroup {
            prime: self.prime(),
            ngens: self.ngens(),
            igs: self.generators(),
        }
    }

    /// `⟨gens⟩`.
    pub fn subgroup_closure(&self, gens: &[GroupElement]) -> Subgroup {
        self.build_subgroup(gens.iter().cloned(), false)
    }

    /// Smallest normal subgroup containing `gens`.
    pub fn normal_closure(&self, gens: &[GroupElement]) -> Subgroup {
        self.build_subgroup(gens.iter().cloned(), true)
    }

    /// `⟨A, B⟩`.
    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        self.build_subgroup(a.igs.iter().chain(b.igs.iter()).cloned(), false)
    }

    pub fn contains(&self, s: &Subgroup, a: &GroupElement) -> bool {
        self.sift_rows(&s.rows(), a.clone()).is_identity()
    }

    pub fn is_subgroup_of(&self, a: &Subgroup, b: &Subgroup) -> bool {
        a.igs.iter().all(|x| self.contains(b, x))
    }

    /// Canonical coset representative of `a` modulo `n`: zero exponent at
    /// every depth of `n`.
    pub fn reduce_modulo(&self, n: &Subgroup, a: &GroupElement) -> GroupElement {
        let mut x = a.clone();
        for r in &n.igs {
            let d = r.depth().expect("nontrivial row");
            let c = x.exps()[d] as i64;
            if c != 0 {
                x = self.multiply(&x, &self.power(r, -c));
            }
        }
        x
    }

    /// Coefficients `c` with `a = ∏ r_t^{c_t}` over the igs rows of `s`, or
    /// `None` when `a ∉ s`.
    pub fn igs_coordinates(&self, s: &Subgroup, a: &GroupElement) -> Option<Vec<u32>> {
        let mut x = a.clone();
        let mut coords = Vec::with_capacity(s.igs.len());
        for r in &s.igs {
            let d = r.depth().expect("nontrivial row");
            let c = x.exps()[d];
            coords.push(c);
            if c != 0 {
                x = self.multiply(&self.power(r, -(c as i64)), &x);
            }
        }
        x.is_identity().then_some(coords)
    }

    /// `∏ r_t^{c_t}` over the igs rows of `s`.
    pub fn from_igs_coordinates(&self, s: &Subgroup, coords: &[u32]) -> GroupElement {
        assert_eq!(coords.len(), s.igs.len());
        s.igs
            .iter()
            .zip(coords)
            .fold(self.identity(), |acc, (r, &c)| self.multiply(&acc, &self.power(r, c as i64)))
    }

    /// Every element of `s`, each once, ordered by igs coefficients.
    pub fn subgroup_elements<'a>(&'a self, s: &'a Subgroup) -> Result<impl Iterator<Item = GroupElement> + 'a> {
        self.ensure_enumerable(s.order())?;
        Ok(ExponentTuples::new(self.prime(), s.igs.len()).map(move |c| self.from_igs_coordinates(s, c.exps())))
    }

    /// Elements of `a` forming a transversal of `b ≤ a` (identity included).
    pub fn transversal<'a>(&'a self, a: &'a Subgroup, b: &Subgroup) -> Result<impl Iterator<Item = GroupElement> + 'a> {
        let bd = b.depths();
        let top: Vec<&GroupElement> = a
            .igs
            .iter()
            .filter(|r| !bd.contains(&r.depth().expect("nontrivial row")))
            .collect();
        let size = (self.prime() as u64).pow(top.len() as u32);
        self.ensure_enumerable(size)?;
        Ok(ExponentTuples::new(self.prime(), top.len()).map(move |c| {
            top.iter()
                .zip(c.exps())
                .fold(self.identity(), |acc, (r, &e)| self.multiply(&acc, &self.power(r, e as i64)))
        }))
    }

    pub fn is_normal(&self, s: &Subgroup) -> bool {
        s.igs
            .iter()
            .all(|r| (0..self.ngens()).all(|j| self.contains(s, &self.commutator(r, &self.generator(j)))))
    }

    pub fn is_abelian(&self, s: &Subgroup) -> bool {
        s.igs
            .iter()
            .enumerate()
            .all(|(k, a)| s.igs[..k].iter().all(|b| self.commutator(a, b).is_identity()))
    }

    /// `[A, B]` for normal `A`, `B`.
    pub fn commutator_subgroup(&self, a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
        if !self.is_normal(a) || !self.is_normal(b) {
            return Err(Error::NotNormal);
        }
        let comms: Vec<_> = a
            .igs
            .iter()
            .flat_map(|x| b.igs.iter().map(move |y| (x, y)))
            .map(|(x, y)| self.commutator(x, y))
            .collect();
        Ok(self.normal_closure(&comms))
    }

    /// `γ1 = G ⊇ γ2 ⊇ ... ⊇ 1`, ending with the trivial subgroup. The class
    /// is `len - 1`.
    pub fn lower_central_series(&self) -> Vec<Subgroup> {
        let whole = self.whole_group();
        let mut series = vec![whole.clone()];
        loop {
            let last = series.last().expect("nonempty");
            if last.is_trivial() {
                break;
            }
            let next = self
                .commutator_subgroup(last, &whole)
                .expect("lower central terms are normal");
            assert!(next.rank() < last.rank(), "finite p-groups are nilpotent");
            series.push(next);
        }
        series
    }

    /// Nilpotency class: `c` with `γ_{c+1} = 1 ≠ γ_c`.
    pub fn nilpotency_class(&self) -> usize {
        self.lower_central_series().len() - 1
    }

    /// `x ∈ Z_{i+1}` iff `[x, gj] ∈ Z_i` for every PC generator.
    fn next_center(&self, below: &Subgroup) -> Result<Subgroup> {
        let gens = self.generators();
        let members: Vec<_> = self
            .elements()?
            .filter(|x| gens.iter().all(|g| self.contains(below, &self.commutator(x, g))))
            .collect();
        Ok(self.subgroup_closure(&members))
    }

    /// `1 = Z0 ⊆ Z1 ⊆ ... ⊆ G`, starting with the trivial subgroup.
    pub fn upper_central_series(&self) -> Result<Vec<Subgroup>> {
        let mut series = vec![self.trivial_subgroup()];
        loop {
            let last = series.last().expect("nonempty");
            if last.rank() == self.ngens() {
                break;
            }
            let next = self.next_center(last)?;
            assert!(next.rank() > last.rank(), "finite p-groups are nilpotent");
            series.push(next);
        }
        Ok(series)
    }

    pub fn center(&self) -> Result<Subgroup> {
        self.next_center(&self.trivial_subgroup())
    }

    /// `Φ(G) = G^p [G, G]`.
    pub fn frattini(&self) -> Subgroup {
        let n = self.ngens();
        let p = self.prime() as i64;
        let mut gens = Vec::new();
        for j in 0..n {
            gens.push(self.power(&self.generator(j), p));
            for i in 0..j {
                gens.push(self.commutator(&self.generator(j), &self.generator(i)));
            }
        }
        self.normal_closure(&gens)
    }

    /// `d(G) = log_p |G : Φ(G)|`.
    pub fn minimal_generator_count(&self) -> usize {
        self.ngens() - self.frattini().rank()
    }

    /// PC generator indices outside the depths of `Φ(G)`; their generators
    /// form a minimal generating set.
    pub fn minimal_generator_indices(&self) -> Vec<usize> {
        let fd = self.frattini().depths();
        (0..self.ngens()).filter(|i| !fd.contains(i)).collect()
    }

    /// `C_S(x)` by exhaustive iteration over `S`.
    pub fn centralizer_of_element(&self, s: &Subgroup, x: &GroupElement) -> Result<Subgroup> {
        let members: Vec<_> = self
            .subgroup_elements(s)?
            .filter(|a| self.multiply(a, x) == self.multiply(x, a))
            .collect();
        Ok(self.subgroup_closure(&members))
    }

    /// Elements of `A` commuting with all of `B`.
    pub fn centralizer_of_subgroup(&self, a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
        let members: Vec<_> = self
            .subgroup_elements(a)?
            .filter(|x| b.igs.iter().all(|y| self.multiply(x, y) == self.multiply(y, x)))
            .collect();
        Ok(self.subgroup_closure(&members))
    }

    /// `Ω1(A)` for abelian `A`.
    pub fn omega1(&self, a: &Subgroup) -> Result<Subgroup> {
        if !self.is_abelian(a) {
            return Err(Error::NotAbelian);
        }
        let p = self.prime() as i64;
        let members: Vec<_> = self
            .subgroup_elements(a)?
            .filter(|x| self.power(x, p).is_identity())
            .collect();
        Ok(self.subgroup_closure(&members))
    }

    pub fn is_elementary_abelian(&self, a: &Subgroup) -> Result<bool> {
        if !self.is_abelian(a) {
            return Err(Error::NotAbelian);
        }
        let p = self.prime() as i64;
        Ok(a.igs.iter().all(|x| self.power(x, p).is_identity()))
    }

    /// Invariant factors of abelian `A` as descending `p`-powers.
    pub fn abelian_type(&self, a: &Subgroup) -> Result<Vec<u64>> {
        if !self.is_abelian(a) {
            return Err(Error::NotAbelian);
        }
        let p = self.prime() as u64;
        // counts[k] = #{x : order(x) = p^k}
        let mut counts: Vec<u64> = vec![0];
        for x in self.subgroup_elements(a)? {
            let k = self.element_order(&x).ilog(p) as usize;
            if counts.len() <= k {
                counts.resize(k + 1, 0);
            }
            counts[k] += 1;
        }
        // s[k] = log_p #{x : x^{p^k} = 1}
        let mut s = Vec::with_capacity(counts.len());
        let mut acc = 0u64;
        for c in &counts {
            acc += c;
            s.push(acc.ilog(p) as usize);
        }
        // r[k] = number of cyclic factors of order >= p^k, k >= 1
        let r: Vec<usize> = (1..s.len()).map(|k| s[k] - s[k - 1]).collect();
        let mut factors = Vec::new();
        for k in (1..=r.len()).rev() {
            let exact = r[k - 1] - r.get(k).copied().unwrap_or(0);
            factors.extend(std::iter::repeat(p.pow(k as u32)).take(exact));
        }
        Ok(factors)
    }

    /// Minimal number of generators of an abelian section `A/B`
    /// (`B ≤ A`, `[A, A] ≤ B`), i.e. `log_p |A : A^p B|`.
    pub fn abelian_section_rank(&self, a: &Subgroup, b: &Subgroup) -> usize {
        let p = self.prime() as i64;
        let gens: Vec<_> = b
            .igs
            .iter()
            .cloned()
            .chain(a.igs.iter().map(|x| self.power(x, p)))
            .collect();
        a.rank() - self.subgroup_closure(&gens).rank()
    }

    /// A consistent presentation of `G/N`. Generator `t` of the quotient is
    /// the image of PC generator `kept[t]` of `G`.
    pub fn quotient(&self, n: &Subgroup) -> Result<(PcGroup, Vec<usize>)> {
        if !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let nd = n.depths();
        let kept: Vec<usize> = (0..self.ngens()).filter(|i| !nd.contains(i)).collect();
        if kept.is_empty() {
            return Err(Error::HypothesisViolation("quotient by the whole group is trivial".into()));
        }
        let project = |x: &GroupElement| -> Vec<u32> {
            let r = self.reduce_modulo(n, x);
            kept.iter().map(|&i| r.exps()[i]).collect()
        };
        let mut pres = PcPresentation::new(self.prime(), kept.len()).expect("prime already validated");
        let p = self.prime() as i64;
        for (t, &i) in kept.iter().enumerate() {
            let rhs = project(&self.power(&self.generator(i), p));
            pres.set_power(t, &rhs).expect("tails stay above their generator");
            for (s, &k) in kept.iter().enumerate().take(t) {
                let rhs = project(&self.commutator(&self.generator(i), &self.generator(k)));
                pres.set_commutator(t, s, &rhs).expect("tails stay above their generator");
            }
        }
        let q = PcGroup::new(pres)?.with_cap(self.cap());
        Ok((q, kept))
    }
}
