use super::{GroupElement, PcPresentation, Word};
use crate::error::Error;

/// Default bound on exhaustive enumeration: `3^8` elements.
pub const DEFAULT_ENUMERATION_CAP: u64 = 6561;

/// Multiplies the normal form held in `state` on the right by `letters`
/// (each exponent in `1..p`), collecting from the left with an explicit stack.
///
/// Moving `gi` past the tail `g_{i+1}^{e_{i+1}} ... gn^{en}` uses
/// `gj gi = gi gj [gj, gi]`, so every letter pushed while processing `gi` has
/// index `> i`; this is what makes the loop terminate for any presentation of
/// the right shape, consistent or not.
fn collect_letters(pres: &PcPresentation, state: &mut [u32], letters: impl DoubleEndedIterator<Item = (usize, u32)>) {
    let p = pres.prime();
    let n = pres.ngens();
    let mut stack: Vec<usize> = Vec::new();
    for (g, e) in letters.rev() {
        for _ in 0..e {
            stack.push(g);
        }
    }
    let mut saved = vec![0u32; n];
    while let Some(g) = stack.pop() {
        let has_tail = state[g + 1..].iter().any(|&e| e != 0);
        if has_tail {
            saved[g + 1..].copy_from_slice(&state[g + 1..]);
            state[g + 1..].fill(0);
            // conjugated tail (gj^gi)^{ej}, j ascending, processed after the power tail
            for j in (g + 1..n).rev() {
                for _ in 0..saved[j] {
                    for (k, e) in pres.comm_rhs(j, g).letters().collect::<Vec<_>>().into_iter().rev() {
                        for _ in 0..e {
                            stack.push(k);
                        }
                    }
                    stack.push(j);
                }
            }
        }
        state[g] += 1;
        if state[g] == p {
            state[g] = 0;
            for (k, e) in pres.power_rhs(g).letters().collect::<Vec<_>>().into_iter().rev() {
                for _ in 0..e {
                    stack.push(k);
                }
            }
        }
    }
}

impl PcPresentation {
    fn collect_raw(&self, prefix: &[(usize, u32)], rest: &[(usize, u32)]) -> GroupElement {
        let mut state = vec![0u32; self.ngens()];
        collect_letters(self, &mut state, prefix.iter().chain(rest.iter()).copied().collect::<Vec<_>>().into_iter());
        GroupElement::from_exps(state)
    }

    /// Runs the overlap tests. Every presentation of the right shape is
    /// consistent iff all of them collect to equal normal forms:
    ///
    /// * `gk (gj gi) = (gk gj) gi` for `k > j > i`
    /// * `gj^p gi = gj^(p-1) (gj gi)` for `j > i`
    /// * `gj gi^p = (gj gi) gi^(p-1)` for `j > i`
    /// * `gi gi^p = gi^p gi`
    pub fn check_consistency(&self) -> Result<(), Inconsistency> {
        let n = self.ngens();
        let p = self.prime();
        let nf = |e: &GroupElement| e.letters().collect::<Vec<_>>();
        let pair = |j: usize, i: usize| nf(&self.collect_raw(&[(j, 1)], &[(i, 1)]));
        let check = |test: OverlapTest, lhs: GroupElement, rhs: GroupElement| {
            if lhs == rhs {
                Ok(())
            } else {
                Err(Inconsistency { test, lhs, rhs })
            }
        };

        for k in 0..n {
            for j in 0..k {
                for i in 0..j {
                    let lhs = self.collect_raw(&[(k, 1)], &pair(j, i));
                    let rhs = self.collect_raw(&pair(k, j), &[(i, 1)]);
                    check(OverlapTest::Triple { k, j, i }, lhs, rhs)?;
                }
            }
        }
        for j in 0..n {
            for i in 0..j {
                let lhs = self.collect_raw(&nf(self.power_rhs(j)), &[(i, 1)]);
                let rhs = self.collect_raw(&[(j, p - 1)], &pair(j, i));
                check(OverlapTest::PowerLeft { j, i }, lhs, rhs)?;

                let lhs = self.collect_raw(&[(j, 1)], &nf(self.power_rhs(i)));
                let rhs = self.collect_raw(&pair(j, i), &[(i, p - 1)]);
                check(OverlapTest::PowerRight { j, i }, lhs, rhs)?;
            }
        }
        for i in 0..n {
            let lhs = self.collect_raw(&[(i, 1)], &nf(self.power_rhs(i)));
            let rhs = self.collect_raw(&nf(self.power_rhs(i)), &[(i, 1)]);
            check(OverlapTest::PowerSelf { i }, lhs, rhs)?;
        }
        Ok(())
    }
}

/// One of the overlap tests run by [`PcPresentation::check_consistency`];
/// indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapTest {
    Triple { k: usize, j: usize, i: usize },
    PowerLeft { j: usize, i: usize },
    PowerRight { j: usize, i: usize },
    PowerSelf { i: usize },
}

impl std::fmt::Display for OverlapTest {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            OverlapTest::Triple { k, j, i } => {
                write!(f, "g{0}(g{1} g{2}) = (g{0} g{1})g{2}", k + 1, j + 1, i + 1)
            }
            OverlapTest::PowerLeft { j, i } => write!(f, "g{0}^p g{1} = g{0}^(p-1)(g{0} g{1})", j + 1, i + 1),
            OverlapTest::PowerRight { j, i } => write!(f, "g{0} g{1}^p = (g{0} g{1})g{1}^(p-1)", j + 1, i + 1),
            OverlapTest::PowerSelf { i } => write!(f, "g{0} g{0}^p = g{0}^p g{0}", i + 1),
        }
    }
}

/// The first failing overlap test with both collected sides.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("inconsistent presentation: {test} fails ({lhs:?} != {rhs:?})")]
pub struct Inconsistency {
    pub test: OverlapTest,
    pub lhs: GroupElement,
    pub rhs: GroupElement,
}

/// A consistent presentation together with its arithmetic.
///
/// Immutable after construction and `Sync`, so any operation can be called
/// from several threads on a shared reference.
#[derive(Debug, Clone)]
pub struct PcGroup {
    pres: PcPresentation,
    cap: u64,
}

impl PcGroup {
    pub fn new(pres: PcPresentation) -> Result<Self, Inconsistency> {
        pres.check_consistency()?;
        Ok(PcGroup {
            pres,
            cap: DEFAULT_ENUMERATION_CAP,
        })
    }

    /// Parses and consistency-checks a presentation file.
    pub fn from_text(text: &str) -> Result<Self, Error> {
        Ok(PcGroup::new(PcPresentation::parse(text)?)?)
    }

    /// Replaces the enumeration cap used by every exhaustive operation.
    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn presentation(&self) -> &PcPresentation {
        &self.pres
    }

    pub fn prime(&self) -> u32 {
        self.pres.prime()
    }

    pub fn ngens(&self) -> usize {
        self.pres.ngens()
    }

    pub fn order(&self) -> u64 {
        self.pres.group_order()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self.ngens())
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        GroupElement::generator(self.ngens(), i)
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.ngens()).map(|i| self.generator(i)).collect()
    }

    /// Element from integer exponents, reduced mod `p`.
    pub fn element(&self, exps: &[i64]) -> GroupElement {
        assert_eq!(exps.len(), self.ngens(), "exponent vector length");
        let p = self.prime() as i64;
        GroupElement::from_exps(exps.iter().map(|e| e.rem_euclid(p) as u32).collect())
    }

    pub(crate) fn ensure_enumerable(&self, size: u64) -> Result<(), Error> {
        if size > self.cap {
            Err(Error::CapExceeded { size, cap: self.cap })
        } else {
            Ok(())
        }
    }

    fn mul_letters(&self, state: &mut GroupElement, letters: impl DoubleEndedIterator<Item = (usize, u32)>) {
        collect_letters(&self.pres, state.exps_mut(), letters);
    }

    /// Collects a word to its normal form.
    pub fn collect(&self, w: &Word) -> GroupElement {
        let p = self.prime() as i64;
        let mut acc = self.identity();
        for &(i, e) in &w.letters {
            assert!(i < self.ngens(), "generator index {i} out of range");
            if e > 0 && e < p {
                self.mul_letters(&mut acc, std::iter::once((i, e as u32)));
            } else if e != 0 {
                let g = self.power(&self.generator(i), e);
                acc = self.multiply(&acc, &g);
            }
        }
        acc
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let mut acc = a.clone();
        self.mul_letters(&mut acc, b.letters().collect::<Vec<_>>().into_iter());
        acc
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        // right-multiply by gi^(p - ri) left to right; the letters used form
        // a normal word because their indices increase
        let p = self.prime();
        let mut r = a.clone();
        let mut inv = self.identity();
        for i in 0..self.ngens() {
            let e = r.exps()[i];
            if e != 0 {
                self.mul_letters(&mut r, std::iter::once((i, p - e)));
                inv.exps_mut()[i] = p - e;
            }
        }
        debug_assert!(r.is_identity());
        inv
    }

    pub fn power(&self, a: &GroupElement, k: i64) -> GroupElement {
        let base = if k < 0 { self.inverse(a) } else { a.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = self.identity();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.multiply(&acc, &sq);
            }
            k >>= 1;
            if k > 0 {
                sq = self.multiply(&sq, &sq);
            }
        }
        acc
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let ba = self.multiply(b, a);
        let ab = self.multiply(a, b);
        self.multiply(&self.inverse(&ba), &ab)
    }

    /// `a^b = b^-1 a b`.
    pub fn conjugate(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.multiply(&self.inverse(b), &self.multiply(a, b))
    }

    /// Least `k >= 1` with `a^k = 1`; always a power of `p`.
    pub fn element_order(&self, a: &GroupElement) -> u64 {
        let p = self.prime() as i64;
        let mut order = 1u64;
        let mut x = a.clone();
        while !x.is_identity() {
            x = self.power(&x, p);
            order *= p as u64;
        }
        order
    }

    /// All `p^n` elements in lexicographic order of exponent vectors.
    pub fn elements(&self) -> Result<ExponentTuples, Error> {
        self.ensure_enumerable(self.order())?;
        Ok(ExponentTuples::new(self.prime(), self.ngens()))
    }
}

/// Odometer over `{0..p}^len` in lexicographic order, last coordinate fastest.
#[derive(Debug, Clone)]
pub struct ExponentTuples {
    p: u32,
    next: Option<Vec<u32>>,
}

impl ExponentTuples {
    pub(crate) fn new(p: u32, len: usize) -> Self {
        ExponentTuples {
            p,
            next: Some(vec![0; len]),
        }
    }
}

impl Iterator for ExponentTuples {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut k = succ.len();
        let mut advanced = false;
        while k > 0 {
            k -= 1;
            succ[k] += 1;
            if succ[k] < self.p {
                advanced = true;
                break;
            }
            succ[k] = 0;
        }
        if advanced {
            self.next = Some(succ);
        }
        Some(GroupElement::from_exps(cur))
    }
}
