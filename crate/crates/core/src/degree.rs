//! Multi-indices in `N^k`: the values of the degree functor.
//!
//! Two orders live here and they are not interchangeable: [`Degree::le`] is
//! the coordinatewise `m <= n`, while [`Degree::lt`] is the *strict*
//! coordinatewise `m < n` (every coordinate strictly smaller). `m != n` with
//! `m <= n` does not imply `m < n`.

use std::fmt;
use std::str::FromStr;

use crate::error::{KGraphError, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Degree(Vec<u32>);

impl Degree {
    pub fn new(coords: Vec<u32>) -> Self {
        Degree(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Degree(vec![0; rank])
    }

    /// The vector with every coordinate equal to `value`.
    pub fn splat(rank: usize, value: u32) -> Self {
        Degree(vec![value; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    fn check_rank(&self, other: &Degree) -> Result<()> {
        if self.rank() != other.rank() {
            return Err(KGraphError::RankMismatch {
                expected: self.rank(),
                found: other.rank(),
            });
        }
        Ok(())
    }

    /// Coordinatewise `self <= other`. Panics on rank mismatch.
    pub fn le(&self, other: &Degree) -> bool {
        assert_eq!(self.rank(), other.rank(), "degree rank mismatch");
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Strict coordinatewise `self < other`. Panics on rank mismatch.
    pub fn lt(&self, other: &Degree) -> bool {
        assert_eq!(self.rank(), other.rank(), "degree rank mismatch");
        self.0.iter().zip(&other.0).all(|(a, b)| a < b)
    }

    pub fn join(&self, other: &Degree) -> Result<Degree> {
        self.check_rank(other)?;
        Ok(Degree(
            self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect(),
        ))
    }

    pub fn meet(&self, other: &Degree) -> Result<Degree> {
        self.check_rank(other)?;
        Ok(Degree(
            self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect(),
        ))
    }

    pub fn checked_add(&self, other: &Degree) -> Result<Degree> {
        self.check_rank(other)?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(KGraphError::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(Degree)
    }

    /// `self - other`, failing if any coordinate would go negative.
    pub fn checked_sub(&self, other: &Degree) -> Result<Degree> {
        self.check_rank(other)?;
        if !other.le(self) {
            return Err(KGraphError::NotBelow {
                lhs: other.clone(),
                rhs: self.clone(),
            });
        }
        Ok(Degree(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// `self + other` where the caller already knows ranks agree and the sum fits.
    pub(crate) fn add(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub(crate) fn sub(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `self - (1,...,1)`, the largest degree strictly below `self`.
    /// Fails when a coordinate is zero.
    pub fn pred(&self) -> Result<Degree> {
        if self.0.iter().any(|&c| c == 0) {
            return Err(KGraphError::ZeroModulus(self.clone()));
        }
        Ok(Degree(self.0.iter().map(|c| c - 1).collect()))
    }

    /// Representative of `self + H_n` in `{m : m < n}`.
    pub fn residue(&self, modulus: &Degree) -> Result<Degree> {
        self.check_rank(modulus)?;
        if modulus.0.iter().any(|&c| c == 0) {
            return Err(KGraphError::ZeroModulus(modulus.clone()));
        }
        Ok(Degree(
            self.0.iter().zip(&modulus.0).map(|(a, n)| a % n).collect(),
        ))
    }

    /// Whether `self` lies in `H_n` (every coordinate a multiple of `n_i`).
    pub fn in_lattice(&self, modulus: &Degree) -> Result<bool> {
        Ok(self.residue(modulus)?.is_zero())
    }

    /// Number of degrees `m` with `0 <= m <= self`.
    pub fn box_size(&self) -> usize {
        self.0.iter().map(|&c| c as usize + 1).product()
    }

    /// Mixed-radix index of `m` inside the box `[0, self]`. Requires `m <= self`.
    pub(crate) fn box_index(&self, m: &Degree) -> usize {
        let mut idx = 0usize;
        for (c, bound) in m.0.iter().zip(&self.0) {
            idx = idx * (*bound as usize + 1) + *c as usize;
        }
        idx
    }

    /// All `m` with `0 <= m <= self`, in lexicographic order.
    pub fn box_iter(&self) -> BoxIter {
        BoxIter {
            bound: self.clone(),
            next: Some(Degree::zero(self.rank())),
        }
    }

    /// Concatenation `(self, other)` in `N^{k1 + k2}`.
    pub fn concat(&self, other: &Degree) -> Degree {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Degree(v)
    }

    /// Splits into the first `k` coordinates and the rest.
    pub fn split_at(&self, k: usize) -> (Degree, Degree) {
        let (a, b) = self.0.split_at(k);
        (Degree(a.to_vec()), Degree(b.to_vec()))
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }
}

pub struct BoxIter {
    bound: Degree,
    next: Option<Degree>,
}

impl Iterator for BoxIter {
    type Item = Degree;

    fn next(&mut self) -> Option<Degree> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.rank();
        loop {
            if i == 0 {
                self.next = None;
                break;
            }
            i -= 1;
            if succ.0[i] < self.bound.0[i] {
                succ.0[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ.0[i] = 0;
        }
        Some(current)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        if self.0.len() == 1 {
            write!(f, ",")?;
        }
        write!(f, ")")
    }
}

/// Parses comma-separated naturals, e.g. `3` or `2,4`.
impl FromStr for Degree {
    type Err = KGraphError;

    fn from_str(s: &str) -> Result<Self> {
        let coords = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| KGraphError::InvalidArgument(format!("bad degree `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if coords.is_empty() {
            return Err(KGraphError::InvalidArgument(format!("empty degree `{s}`")));
        }
        Ok(Degree(coords))
    }
}

impl From<Vec<u32>> for Degree {
    fn from(v: Vec<u32>) -> Self {
        Degree(v)
    }
}

impl<const K: usize> From<[u32; K]> for Degree {
    fn from(v: [u32; K]) -> Self {
        Degree(v.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d<const K: usize>(v: [u32; K]) -> Degree {
        Degree::from(v)
    }

    #[test]
    fn residue_examples() {
        assert_eq!(d([5, 7]).residue(&d([3, 4])).unwrap(), d([2, 3]));
        assert_eq!(d([0, 0]).residue(&d([3, 4])).unwrap(), d([0, 0]));
        assert_eq!(d([6, 8]).residue(&d([3, 4])).unwrap(), d([0, 0]));
    }

    #[test]
    fn residue_errors() {
        assert!(matches!(
            d([1, 2]).residue(&d([3])),
            Err(KGraphError::RankMismatch { .. })
        ));
        assert!(matches!(
            d([1, 2]).residue(&d([3, 0])),
            Err(KGraphError::ZeroModulus(_))
        ));
    }

    #[test]
    fn join_examples() {
        assert_eq!(d([2, 5]).join(&d([4, 1])).unwrap(), d([4, 5]));
        assert_eq!(d([0, 0]).join(&d([0, 0])).unwrap(), d([0, 0]));
        assert_eq!(d([3]).join(&d([3])).unwrap(), d([3]));
        assert!(d([3]).join(&d([3, 1])).is_err());
    }

    #[test]
    fn strict_and_weak_orders_differ() {
        assert!(d([1, 2]).le(&d([1, 3])));
        assert!(!d([1, 2]).lt(&d([1, 3])));
        assert!(d([0, 2]).lt(&d([1, 3])));
    }

    #[test]
    fn overflow_is_an_error() {
        assert_eq!(
            d([u32::MAX]).checked_add(&d([1])),
            Err(KGraphError::Overflow)
        );
        assert!(d([1]).checked_sub(&d([2])).is_err());
    }

    #[test]
    fn box_iteration_matches_index() {
        let top = d([2, 1, 3]);
        let all: Vec<_> = top.box_iter().collect();
        assert_eq!(all.len(), top.box_size());
        for (i, m) in all.iter().enumerate() {
            assert_eq!(top.box_index(m), i);
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("2,4".parse::<Degree>().unwrap(), d([2, 4]));
        assert_eq!("3".parse::<Degree>().unwrap(), d([3]));
        assert!("a,1".parse::<Degree>().is_err());
        assert_eq!(d([2, 4]).to_string(), "(2,4)");
        assert_eq!(d([3]).to_string(), "(3,)");
    }

    proptest! {
        #[test]
        fn residue_is_invariant_under_lattice(
            m in proptest::collection::vec(0u32..50, 2),
            n in proptest::collection::vec(1u32..6, 2),
            h in proptest::collection::vec(0u32..5, 2),
        ) {
            let m = Degree(m);
            let n = Degree(n);
            let shift = Degree(h.iter().zip(n.coords()).map(|(a, b)| a * b).collect());
            let r = m.residue(&n).unwrap();
            prop_assert!(r.lt(&n));
            prop_assert_eq!(m.add(&shift).residue(&n).unwrap(), r.clone());
            prop_assert!(m.checked_sub(&r).unwrap().in_lattice(&n).unwrap());
        }
    }
}
