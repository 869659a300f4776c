//! Power-commutator presentations and their arithmetic.
//!
//! A presentation has generators `g1, ..., gn`, each of relative order `p`,
//! with relations `gi^p = w_ii` and `[gj, gi] = w_ji` (for `j > i`) whose right
//! hand sides are normal words supported on strictly higher generators.
//! Generator indices are 0-based in the API and 1-based in presentation files.

mod collect;
mod parse;

use std::fmt;

pub use collect::{ExponentTuples, Inconsistency, OverlapTest, PcGroup, DEFAULT_ENUMERATION_CAP};
pub use parse::{ParseError, ParseErrorKind};

/// Normal form `g1^e1 ... gn^en` of a group element, `0 <= ei < p`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    exps: Vec<u32>,
}

impl GroupElement {
    pub fn identity(ngens: usize) -> Self {
        GroupElement { exps: vec![0; ngens] }
    }

    /// Builds an element from raw exponents. Callers are responsible for
    /// reducing them mod `p`; [`PcGroup::element`] does that for you.
    pub fn from_exps(exps: Vec<u32>) -> Self {
        GroupElement { exps }
    }

    pub fn generator(ngens: usize, i: usize) -> Self {
        let mut exps = vec![0; ngens];
        exps[i] = 1;
        GroupElement { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub(crate) fn exps_mut(&mut self) -> &mut [u32] {
        &mut self.exps
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Index of the first nonzero exponent, `None` for the identity.
    pub fn depth(&self) -> Option<usize> {
        self.exps.iter().position(|&e| e != 0)
    }

    /// Leading (first nonzero) exponent.
    pub fn leading_exp(&self) -> Option<u32> {
        self.depth().map(|d| self.exps[d])
    }

    /// The normal word spelled by this element.
    pub fn to_word(&self) -> Word {
        Word {
            letters: self
                .exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| (i, e as i64))
                .collect(),
        }
    }

    pub(crate) fn letters(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (i, e))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.exps.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for GroupElement {
    /// Prints `g1^2*g3`, or `1` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, e) in self.letters() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "g{}", i + 1)?;
            } else {
                write!(f, "g{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// An uncollected word: a sequence of `(generator, exponent)` letters with
/// arbitrary integer exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Word {
    pub letters: Vec<(usize, i64)>,
}

impl Word {
    pub fn new(letters: Vec<(usize, i64)>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letter(i: usize, e: i64) -> Self {
        Word {
            letters: vec![(i, e)],
        }
    }

    pub fn concat(mut self, other: &Word) -> Self {
        self.letters.extend_from_slice(&other.letters);
        self
    }

    /// Formal inverse: letters reversed with negated exponents.
    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|&(i, e)| (i, -e)).collect(),
        }
    }

    /// The commutator word `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.inverse().concat(&b.inverse()).concat(a).concat(b)
    }
}

/// A power-commutator presentation with all relative orders equal to `p`.
///
/// Construction via [`PcPresentation::new`] or parsing only checks the shape
/// of the relations (support on higher generators); consistency is checked by
/// [`PcPresentation::check_consistency`] or when building a [`PcGroup`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPresentation {
    prime: u32,
    ngens: usize,
    power_rhs: Vec<GroupElement>,
    // comm_rhs[j][i] for i < j
    comm_rhs: Vec<Vec<GroupElement>>,
}

/// Shape violations when assembling a presentation programmatically.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("a presentation needs at least one generator")]
    NoGenerators,
    #[error("generator index {index} out of range 1..={ngens}")]
    IndexOutOfRange { index: usize, ngens: usize },
    #[error("commutator relation needs j > i, got comm {j} {i}")]
    CommutatorOrder { j: usize, i: usize },
    #[error("right hand side of {relation} is not supported on generators above {bound}")]
    NotSupportedAbove { relation: String, bound: usize },
    #[error("right hand side has length {got}, expected {expected}")]
    WrongLength { got: usize, expected: usize },
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PcPresentation {
    /// The presentation with all relations trivial (elementary abelian `p^n`).
    pub fn new(prime: u32, ngens: usize) -> Result<Self, PresentationError> {
        if !is_prime(prime) {
            return Err(PresentationError::NotPrime(prime));
        }
        if ngens == 0 {
            return Err(PresentationError::NoGenerators);
        }
        Ok(PcPresentation {
            prime,
            ngens,
            power_rhs: vec![GroupElement::identity(ngens); ngens],
            comm_rhs: (0..ngens)
                .map(|j| vec![GroupElement::identity(ngens); j])
                .collect(),
        })
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse::parse_presentation(text)
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    /// `p^n`, saturating at `u64::MAX`.
    pub fn group_order(&self) -> u64 {
        (self.prime as u64)
            .checked_pow(self.ngens as u32)
            .unwrap_or(u64::MAX)
    }

    pub fn power_rhs(&self, i: usize) -> &GroupElement {
        &self.power_rhs[i]
    }

    /// Value of `[gj, gi]`, `j > i`.
    pub fn comm_rhs(&self, j: usize, i: usize) -> &GroupElement {
        &self.comm_rhs[j][i]
    }

    fn check_rhs(&self, rhs: &[u32], bound: usize, relation: String) -> Result<(), PresentationError> {
        if rhs.len() != self.ngens {
            return Err(PresentationError::WrongLength {
                got: rhs.len(),
                expected: self.ngens,
            });
        }
        if rhs[..=bound].iter().any(|&e| e % self.prime != 0) {
            return Err(PresentationError::NotSupportedAbove {
                relation,
                bound: bound + 1,
            });
        }
        Ok(())
    }

    /// Sets `gi^p = rhs` (0-based `i`); `rhs` is reduced mod `p`.
    pub fn set_power(&mut self, i: usize, rhs: &[u32]) -> Result<(), PresentationError> {
        if i >= self.ngens {
            return Err(PresentationError::IndexOutOfRange {
                index: i + 1,
                ngens: self.ngens,
            });
        }
        self.check_rhs(rhs, i, format!("pow {}", i + 1))?;
        let p = self.prime;
        self.power_rhs[i] = GroupElement::from_exps(rhs.iter().map(|e| e % p).collect());
        Ok(())
    }

    /// Sets `[gj, gi] = rhs` (0-based, `j > i`); `rhs` is reduced mod `p`.
    pub fn set_commutator(&mut self, j: usize, i: usize, rhs: &[u32]) -> Result<(), PresentationError> {
        for index in [i, j] {
            if index >= self.ngens {
                return Err(PresentationError::IndexOutOfRange {
                    index: index + 1,
                    ngens: self.ngens,
                });
            }
        }
        if j <= i {
            return Err(PresentationError::CommutatorOrder { j: j + 1, i: i + 1 });
        }
        self.check_rhs(rhs, j, format!("comm {} {}", j + 1, i + 1))?;
        let p = self.prime;
        self.comm_rhs[j][i] = GroupElement::from_exps(rhs.iter().map(|e| e % p).collect());
        Ok(())
    }

    /// Relators as words that evaluate to the identity: `gi^p * rhs^-1` and
    /// `[gj, gi] * rhs^-1`, in the order powers first, then commutators by
    /// `(j, i)` ascending.
    pub fn relators(&self) -> Vec<(String, Word)> {
        let mut out = Vec::new();
        for i in 0..self.ngens {
            let w = Word::letter(i, self.prime as i64).concat(&self.power_rhs[i].to_word().inverse());
            out.push((format!("g{}^{}", i + 1, self.prime), w));
        }
        for j in 0..self.ngens {
            for i in 0..j {
                let w = Word::commutator(&Word::letter(j, 1), &Word::letter(i, 1))
                    .concat(&self.comm_rhs[j][i].to_word().inverse());
                out.push((format!("[g{},g{}]", j + 1, i + 1), w));
            }
        }
        out
    }

    /// Canonical text: `p`, `n`, nontrivial `pow` lines by index, nontrivial
    /// `comm` lines by `(j, i)`, single spaces, LF endings.
    pub fn canonical_text(&self) -> String {
        let mut s = format!("p {}\nn {}\n", self.prime, self.ngens);
        let fmt_rhs = |e: &GroupElement| {
            e.letters()
                .map(|(k, v)| format!("{}:{}", k + 1, v))
                .collect::<Vec<_>>()
                .join(" ")
        };
        for (i, rhs) in self.power_rhs.iter().enumerate() {
            if !rhs.is_identity() {
                s.push_str(&format!("pow {} = {}\n", i + 1, fmt_rhs(rhs)));
            }
        }
        for j in 0..self.ngens {
            for i in 0..j {
                let rhs = &self.comm_rhs[j][i];
                if !rhs.is_identity() {
                    s.push_str(&format!("comm {} {} = {}\n", j + 1, i + 1, fmt_rhs(rhs)));
                }
            }
        }
        s
    }

    /// Hex SHA-256 of [`canonical_text`](Self::canonical_text).
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        hex::encode(Sha256::digest(self.canonical_text().as_bytes()))
    }
}

impl fmt::Display for PcPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_checks() {
        let mut p = PcPresentation::new(3, 3).unwrap();
        assert!(p.set_commutator(1, 0, &[0, 0, 1]).is_ok());
        assert!(matches!(
            p.set_commutator(1, 0, &[0, 1, 0]),
            Err(PresentationError::NotSupportedAbove { .. })
        ));
        assert!(matches!(
            p.set_commutator(0, 1, &[0, 0, 1]),
            Err(PresentationError::CommutatorOrder { .. })
        ));
        assert!(matches!(p.set_power(0, &[1, 0, 0]), Err(PresentationError::NotSupportedAbove { .. })));
        assert!(matches!(PcPresentation::new(9, 2), Err(PresentationError::NotPrime(9))));
        assert!(matches!(PcPresentation::new(3, 0), Err(PresentationError::NoGenerators)));
    }

    #[test]
    fn canonical_text_is_sorted_and_reduced() {
        let mut p = PcPresentation::new(3, 3).unwrap();
        p.set_commutator(1, 0, &[0, 0, 4]).unwrap();
        p.set_power(0, &[0, 0, 2]).unwrap();
        assert_eq!(p.canonical_text(), "p 3\nn 3\npow 1 = 3:2\ncomm 2 1 = 3:1\n");
        assert_eq!(p.digest().len(), 64);
    }

    #[test]
    fn word_commutator_shape() {
        let w = Word::commutator(&Word::letter(1, 1), &Word::letter(0, 1));
        assert_eq!(w.letters, vec![(1, -1), (0, -1), (1, 1), (0, 1)]);
    }

    #[test]
    fn element_display() {
        let e = GroupElement::from_exps(vec![2, 0, 1]);
        assert_eq!(e.to_string(), "g1^2*g3");
        assert_eq!(format!("{e:?}"), "(2,0,1)");
        assert_eq!(GroupElement::identity(2).to_string(), "1");
        assert_eq!(e.depth(), Some(0));
    }
}
