//! Toeplitz–Cuntz–Krieger families on the truncated Fock space `ℓ²(Λ^{≤D})`.
//!
//! Operators are sparse and column-oriented with exact rational entries. Each
//! operator also records how a word of generators moves degrees: `net` is the
//! total shift and `peak` the largest intermediate shift, so that a word is
//! exact on `δ_τ` whenever `d(τ) + peak <= D`. Identities are asserted on that
//! safe block; mismatches outside it are truncation artifacts and are counted
//! separately as boundary mismatches.

mod checks;
mod jmap;

pub use checks::{
    equiv_exprs_check, gamma_matrix_unit_check, iota_image, iota_tck_check, tck_check, tck_check_family,
    FormalGeneratorSum,
};
pub use jmap::{j_ck_check, j_image, ElementaryTensor};

use std::collections::BTreeMap;
use std::io::Write;
use std::ops::{Add, Mul, Sub};

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::degree::Degree;
use crate::error::{KGraphError, Result};
use crate::graph::{Morph, TruncatedKGraph};

/// `ℓ²` of the stored morphisms of a truncated graph; basis index = morphism id.
#[derive(Clone, Copy, Debug)]
pub struct FockSpace<'g> {
    graph: &'g TruncatedKGraph,
}

impl<'g> FockSpace<'g> {
    pub fn new(graph: &'g TruncatedKGraph) -> Self {
        FockSpace { graph }
    }

    pub fn graph(&self) -> &'g TruncatedKGraph {
        self.graph
    }

    pub fn dim(&self) -> usize {
        self.graph.len()
    }

    pub fn depth(&self) -> &Degree {
        self.graph.depth()
    }

    /// `t_μ`: `δ_τ ↦ δ_{μτ}` when `s(μ) = r(τ)` and `d(μτ) <= D`, else 0.
    pub fn creation(&self, mu: Morph) -> Result<SparseOperator> {
        let g = self.graph;
        g.check(mu)?;
        let mut op = SparseOperator::zero(self.dim(), &signed(g.degree(mu)));
        op.peak = op.net.clone();
        for &tau in g.from_range(g.source(mu)) {
            if let Some(mt) = g.compose(mu, tau) {
                op.cols[tau.index()].insert(mt.0, Rational64::one());
            }
        }
        Ok(op)
    }

    /// `Σ` of [`Self::creation`] over `terms`, with the given shift for an empty sum.
    pub fn creation_sum(&self, terms: &[Morph], degree: &Degree) -> Result<SparseOperator> {
        let mut acc = SparseOperator::zero(self.dim(), &signed(degree));
        acc.peak = acc.net.clone();
        for &m in terms {
            acc = &acc + &self.creation(m)?;
        }
        Ok(acc)
    }

    /// Compares two operators column by column.
    pub fn compare(&self, a: &SparseOperator, b: &SparseOperator) -> Comparison {
        let peak: Vec<i64> = a.peak.iter().zip(&b.peak).map(|(x, y)| *x.max(y)).collect();
        let mut c = Comparison::default();
        for tau in self.graph.morphisms() {
            let j = tau.index();
            let safe = self.is_safe(tau, &peak);
            let equal = a.cols[j] == b.cols[j];
            if safe {
                c.safe_columns += 1;
                if !equal && c.first_mismatch.is_none() {
                    c.first_mismatch = Some(tau);
                }
            } else if !equal {
                c.boundary_mismatches += 1;
            }
        }
        c
    }

    /// `d(τ) + peak <= D`.
    pub fn is_safe(&self, tau: Morph, peak: &[i64]) -> bool {
        let d = self.graph.degree(tau);
        let depth = self.graph.depth();
        (0..d.rank()).all(|i| d.get(i) as i64 + peak[i] <= depth.get(i) as i64)
    }

    /// The basis manifest: one `id label degree` line per basis vector.
    pub fn write_basis<W: Write>(&self, out: &mut W) -> Result<()> {
        for m in self.graph.morphisms() {
            writeln!(out, "{} {} {}", m.0, self.graph.label(m), self.graph.degree(m))?;
        }
        Ok(())
    }

    /// Sparse triple dump `row col value` preceded by the basis manifest.
    pub fn write_triples<W: Write>(&self, op: &SparseOperator, out: &mut W) -> Result<()> {
        writeln!(out, "# basis {}", self.dim())?;
        self.write_basis(out)?;
        writeln!(out, "# entries {}", op.nnz())?;
        for (r, c, v) in op.entries() {
            writeln!(out, "{r} {c} {v}")?;
        }
        Ok(())
    }
}

fn signed(d: &Degree) -> Vec<i64> {
    d.coords().iter().map(|&c| c as i64).collect()
}

/// Outcome of comparing two operators on the safe block and outside it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Comparison {
    pub safe_columns: usize,
    pub first_mismatch: Option<Morph>,
    pub boundary_mismatches: usize,
}

impl Comparison {
    pub fn holds(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// A finitely supported matrix on a Fock space, stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseOperator {
    cols: Vec<BTreeMap<u32, Rational64>>,
    net: Vec<i64>,
    peak: Vec<i64>,
}

impl SparseOperator {
    /// The zero operator, carrying degree shift `net`.
    pub fn zero(dim: usize, net: &[i64]) -> Self {
        SparseOperator {
            cols: vec![BTreeMap::new(); dim],
            net: net.to_vec(),
            peak: net.iter().map(|&x| x.max(0)).collect(),
        }
    }

    pub fn identity(dim: usize, rank: usize) -> Self {
        let mut op = SparseOperator::zero(dim, &vec![0; rank]);
        for (j, col) in op.cols.iter_mut().enumerate() {
            col.insert(j as u32, Rational64::one());
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn net(&self) -> &[i64] {
        &self.net
    }

    pub fn peak(&self) -> &[i64] {
        &self.peak
    }

    pub fn get(&self, row: usize, col: usize) -> Rational64 {
        self.cols[col].get(&(row as u32)).copied().unwrap_or_else(Rational64::zero)
    }

    pub fn column(&self, col: usize) -> &BTreeMap<u32, Rational64> {
        &self.cols[col]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(BTreeMap::is_empty)
    }

    /// `(row, col, value)` in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Rational64)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(&r, &v)| (r as usize, c, v)))
    }

    pub fn adjoint(&self) -> SparseOperator {
        let mut cols = vec![BTreeMap::new(); self.dim()];
        for (r, c, v) in self.entries() {
            cols[r].insert(c as u32, v);
        }
        SparseOperator {
            cols,
            net: self.net.iter().map(|x| -x).collect(),
            peak: self.peak.iter().zip(&self.net).map(|(p, n)| p - n).collect(),
        }
    }

    pub fn scale(&self, k: Rational64) -> SparseOperator {
        let mut out = self.clone();
        for col in &mut out.cols {
            if k.is_zero() {
                col.clear();
            } else {
                for v in col.values_mut() {
                    *v *= k;
                }
            }
        }
        out
    }

    /// Overwrites one entry; used to build corrupted families in tests.
    pub fn set(&mut self, row: usize, col: usize, value: Rational64) {
        if value.is_zero() {
            self.cols[col].remove(&(row as u32));
        } else {
            self.cols[col].insert(row as u32, value);
        }
    }

    fn combine(&self, rhs: &SparseOperator, sign: Rational64) -> SparseOperator {
        assert_eq!(self.dim(), rhs.dim(), "operators on different spaces");
        let net = if self.is_zero() {
            rhs.net.clone()
        } else {
            assert!(rhs.is_zero() || self.net == rhs.net, "sum of inhomogeneous words");
            self.net.clone()
        };
        let peak = self.peak.iter().zip(&rhs.peak).map(|(a, b)| *a.max(b)).collect();
        let mut cols = self.cols.clone();
        for (c, col) in rhs.cols.iter().enumerate() {
            for (&r, &v) in col {
                let e = cols[c].entry(r).or_insert_with(Rational64::zero);
                *e += sign * v;
                if e.is_zero() {
                    cols[c].remove(&r);
                }
            }
        }
        SparseOperator { cols, net, peak }
    }

    fn product(&self, rhs: &SparseOperator) -> SparseOperator {
        assert_eq!(self.dim(), rhs.dim(), "operators on different spaces");
        let mut cols = vec![BTreeMap::new(); self.dim()];
        for (j, col) in rhs.cols.iter().enumerate() {
            let out: &mut BTreeMap<u32, Rational64> = &mut cols[j];
            for (&k, &v) in col {
                for (&r, &w) in &self.cols[k as usize] {
                    let e = out.entry(r).or_insert_with(Rational64::zero);
                    *e += v * w;
                    if e.is_zero() {
                        out.remove(&r);
                    }
                }
            }
        }
        let net = self.net.iter().zip(&rhs.net).map(|(a, b)| a + b).collect();
        let peak = rhs
            .peak
            .iter()
            .zip(&rhs.net)
            .zip(&self.peak)
            .map(|((pb, nb), pa)| *pb.max(&(nb + pa)))
            .collect();
        SparseOperator { cols, net, peak }
    }
}

impl Add for &SparseOperator {
    type Output = SparseOperator;
    fn add(self, rhs: &SparseOperator) -> SparseOperator {
        self.combine(rhs, Rational64::one())
    }
}

impl Sub for &SparseOperator {
    type Output = SparseOperator;
    fn sub(self, rhs: &SparseOperator) -> SparseOperator {
        self.combine(rhs, -Rational64::one())
    }
}

impl Mul for &SparseOperator {
    type Output = SparseOperator;
    fn mul(self, rhs: &SparseOperator) -> SparseOperator {
        self.product(rhs)
    }
}

/// Product of a nonempty list of operators, left to right.
pub fn word(ops: &[&SparseOperator]) -> Result<SparseOperator> {
    let (first, rest) = ops
        .split_first()
        .ok_or_else(|| KGraphError::InvalidArgument("empty word".into()))?;
    Ok(rest.iter().fold((*first).clone(), |acc, op| &acc * op))
}
