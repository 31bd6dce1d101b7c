//! Finite truncations of row-finite k-graphs.
//!
//! A [`TruncatedKGraph`] stores every morphism of degree at most its depth
//! `D`, with explicit range/source/degree data and a composition table
//! covering every composable pair whose total degree stays within `D`. The
//! factorization oracle is the inverse of the composition table.

use std::collections::HashMap;
use std::fmt;

use crate::degree::Degree;
use crate::error::{KGraphError, Result};

/// Interned morphism id. Ids are assigned in construction order, which is
/// deterministic for every constructor in this crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Morph(pub u32);

impl Morph {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Morph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug)]
pub(crate) struct MorphData {
    pub degree: Degree,
    pub range: Morph,
    pub source: Morph,
    pub label: String,
}

/// Collects morphisms before the composition table is computed.
pub struct GraphBuilder {
    rank: usize,
    depth: Degree,
    morphs: Vec<MorphData>,
    labels: HashMap<String, Morph>,
}

impl GraphBuilder {
    pub fn new(depth: Degree) -> Result<Self> {
        if depth.rank() == 0 {
            return Err(KGraphError::RankZero);
        }
        Ok(GraphBuilder {
            rank: depth.rank(),
            depth,
            morphs: Vec::new(),
            labels: HashMap::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.morphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphs.is_empty()
    }

    /// The id the next call to [`GraphBuilder::add`] will return.
    pub fn next_id(&self) -> Morph {
        Morph(self.morphs.len() as u32)
    }

    /// Adds a morphism. `range`/`source` may refer forward to ids added later;
    /// they are validated in [`GraphBuilder::finish`].
    pub fn add(
        &mut self,
        label: impl Into<String>,
        degree: Degree,
        range: Morph,
        source: Morph,
    ) -> Result<Morph> {
        let label = label.into();
        if degree.rank() != self.rank {
            return Err(KGraphError::RankMismatch {
                expected: self.rank,
                found: degree.rank(),
            });
        }
        if !degree.le(&self.depth) {
            return Err(KGraphError::DepthExceeded {
                needed: degree,
                available: self.depth.clone(),
            });
        }
        let id = self.next_id();
        if self.labels.insert(label.clone(), id).is_some() {
            return Err(KGraphError::DuplicateName(label));
        }
        self.morphs.push(MorphData {
            degree,
            range,
            source,
            label,
        });
        Ok(id)
    }

    /// Adds a vertex: a degree-zero morphism that is its own range and source.
    pub fn add_vertex(&mut self, label: impl Into<String>) -> Result<Morph> {
        let id = self.next_id();
        self.add(label, Degree::zero(self.rank), id, id)
    }

    /// Computes the composition table by calling `compose` on every pair
    /// `(a, b)` with `s(a) = r(b)` and `d(a) + d(b) <= D`. A `None` leaves the
    /// pair undefined, which [`crate::axioms::verify_axioms`] reports.
    pub fn finish<F>(self, mut compose: F) -> Result<TruncatedKGraph>
    where
        F: FnMut(Morph, Morph) -> Option<Morph>,
    {
        let GraphBuilder {
            rank,
            depth,
            morphs,
            labels,
        } = self;
        let n = morphs.len();
        for (i, m) in morphs.iter().enumerate() {
            if m.range.index() >= n || m.source.index() >= n {
                return Err(KGraphError::Malformed(format!(
                    "morphism `{}` references a missing endpoint",
                    m.label
                )));
            }
            let r = &morphs[m.range.index()];
            let s = &morphs[m.source.index()];
            if !r.degree.is_zero() || !s.degree.is_zero() {
                return Err(KGraphError::Malformed(format!(
                    "endpoint of `{}` is not a degree-zero morphism",
                    m.label
                )));
            }
            if m.degree.is_zero() && (m.range.index() != i || m.source.index() != i) {
                return Err(KGraphError::Malformed(format!(
                    "degree-zero morphism `{}` is not a vertex",
                    m.label
                )));
            }
        }

        let mut by_range: Vec<Vec<Morph>> = vec![Vec::new(); n];
        let mut vertices = Vec::new();
        let mut by_degree: HashMap<Degree, Vec<Morph>> = HashMap::new();
        for (i, m) in morphs.iter().enumerate() {
            let id = Morph(i as u32);
            by_range[m.range.index()].push(id);
            if m.degree.is_zero() {
                vertices.push(id);
            }
            by_degree.entry(m.degree.clone()).or_default().push(id);
        }

        let mut table = HashMap::new();
        let mut splits: Vec<Vec<Option<(Morph, Morph)>>> = morphs
            .iter()
            .map(|m| vec![None; m.degree.box_size()])
            .collect();
        for (i, a) in morphs.iter().enumerate() {
            let aid = Morph(i as u32);
            let room = depth.sub(&a.degree);
            for &bid in &by_range[a.source.index()] {
                let b = &morphs[bid.index()];
                if !b.degree.le(&room) {
                    continue;
                }
                let Some(c) = compose(aid, bid) else { continue };
                if c.index() >= n {
                    return Err(KGraphError::Malformed(format!(
                        "composition returned unknown id {c}"
                    )));
                }
                table.insert((aid, bid), c);
                let cd = &morphs[c.index()].degree;
                if a.degree.le(cd) {
                    let slot = &mut splits[c.index()][cd.box_index(&a.degree)];
                    if slot.is_none() {
                        *slot = Some((aid, bid));
                    }
                }
            }
        }

        Ok(TruncatedKGraph {
            rank,
            depth,
            morphs,
            vertices,
            by_range,
            by_degree,
            compose: table,
            splits,
            labels,
        })
    }
}

/// All morphisms of a row-finite k-graph with degree at most `depth`.
#[derive(Clone, Debug)]
pub struct TruncatedKGraph {
    rank: usize,
    depth: Degree,
    morphs: Vec<MorphData>,
    vertices: Vec<Morph>,
    by_range: Vec<Vec<Morph>>,
    by_degree: HashMap<Degree, Vec<Morph>>,
    compose: HashMap<(Morph, Morph), Morph>,
    splits: Vec<Vec<Option<(Morph, Morph)>>>,
    labels: HashMap<String, Morph>,
}

/// Which degrees a path query selects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathSpec {
    /// `Λ^n`
    Exact(Degree),
    /// `Λ^{<n}`: strictly below `n` in every coordinate.
    Below(Degree),
    /// `Λ^{[p,q)}`: `p <= d(λ)` and `d(λ) < q` strictly.
    Interval(Degree, Degree),
}

impl PathSpec {
    pub fn contains(&self, d: &Degree) -> bool {
        match self {
            PathSpec::Exact(n) => d == n,
            PathSpec::Below(n) => d.lt(n),
            PathSpec::Interval(p, q) => p.le(d) && d.lt(q),
        }
    }
}

/// Minimal common extensions of a pair, computed by enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaMin {
    /// `Λ^min(μ, ν)`: pairs `(α, β)` with `μα = νβ` of degree `d(μ) ∨ d(ν)`.
    pub pairs: Vec<(Morph, Morph)>,
    /// `MCE(μ, ν)`, in id order.
    pub extensions: Vec<Morph>,
}

impl TruncatedKGraph {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn depth(&self) -> &Degree {
        &self.depth
    }

    pub fn len(&self) -> usize {
        self.morphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphs.is_empty()
    }

    pub fn morphisms(&self) -> impl Iterator<Item = Morph> + '_ {
        (0..self.morphs.len() as u32).map(Morph)
    }

    pub fn vertices(&self) -> &[Morph] {
        &self.vertices
    }

    pub fn contains(&self, m: Morph) -> bool {
        m.index() < self.morphs.len()
    }

    pub fn check(&self, m: Morph) -> Result<Morph> {
        if self.contains(m) {
            Ok(m)
        } else {
            Err(KGraphError::NotStored(m.0))
        }
    }

    pub fn degree(&self, m: Morph) -> &Degree {
        &self.morphs[m.index()].degree
    }

    pub fn range(&self, m: Morph) -> Morph {
        self.morphs[m.index()].range
    }

    pub fn source(&self, m: Morph) -> Morph {
        self.morphs[m.index()].source
    }

    pub fn label(&self, m: Morph) -> &str {
        &self.morphs[m.index()].label
    }

    pub fn lookup(&self, label: &str) -> Option<Morph> {
        self.labels.get(label).copied()
    }

    pub fn is_vertex(&self, m: Morph) -> bool {
        self.degree(m).is_zero()
    }

    /// Morphisms with range `v`, in id order.
    pub fn from_range(&self, v: Morph) -> &[Morph] {
        &self.by_range[v.index()]
    }

    pub fn of_degree(&self, n: &Degree) -> &[Morph] {
        self.by_degree.get(n).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Composable pairs and their composites, ordered by pair.
    pub(crate) fn composition_table(&self) -> impl Iterator<Item = (&(Morph, Morph), &Morph)> {
        let mut pairs: Vec<_> = self.compose.iter().collect();
        pairs.sort_unstable_by_key(|(k, _)| **k);
        pairs.into_iter()
    }

    /// `μν` when `s(μ) = r(ν)` and the result is within depth.
    pub fn compose(&self, a: Morph, b: Morph) -> Option<Morph> {
        self.compose.get(&(a, b)).copied()
    }

    pub fn compose_all(&self, parts: &[Morph]) -> Option<Morph> {
        let (&first, rest) = parts.split_first()?;
        rest.iter().try_fold(first, |acc, &m| self.compose(acc, m))
    }

    pub fn ensure_within_depth(&self, needed: &Degree) -> Result<()> {
        if needed.rank() != self.rank {
            return Err(KGraphError::RankMismatch {
                expected: self.rank,
                found: needed.rank(),
            });
        }
        if !needed.le(&self.depth) {
            return Err(KGraphError::DepthExceeded {
                needed: needed.clone(),
                available: self.depth.clone(),
            });
        }
        Ok(())
    }

    /// `(λ(0, m), λ(m, d(λ)))`.
    pub fn factor(&self, lambda: Morph, m: &Degree) -> Result<(Morph, Morph)> {
        self.check(lambda)?;
        let top = self.degree(lambda);
        if m.rank() != self.rank {
            return Err(KGraphError::RankMismatch {
                expected: self.rank,
                found: m.rank(),
            });
        }
        if !m.le(top) {
            return Err(KGraphError::InvalidSegment {
                m: m.clone(),
                n: m.clone(),
                top: top.clone(),
            });
        }
        self.splits[lambda.index()][top.box_index(m)].ok_or_else(|| {
            KGraphError::Malformed(format!(
                "`{}` has no factorization at {m}",
                self.label(lambda)
            ))
        })
    }

    /// `λ(m, n)`, the unique segment with `λ = λ(0,m) λ(m,n) λ(n,d(λ))`.
    pub fn segment(&self, lambda: Morph, m: &Degree, n: &Degree) -> Result<Morph> {
        self.check(lambda)?;
        let top = self.degree(lambda);
        if m.rank() != self.rank || n.rank() != self.rank || !m.le(n) || !n.le(top) {
            return Err(KGraphError::InvalidSegment {
                m: m.clone(),
                n: n.clone(),
                top: top.clone(),
            });
        }
        let (head, _) = self.factor(lambda, n)?;
        let (_, mid) = self.factor(head, m)?;
        Ok(mid)
    }

    /// Exact enumeration of `vΛ^spec` (or `Λ^spec` when `v` is `None`), in id order.
    pub fn paths(&self, v: Option<Morph>, spec: &PathSpec) -> Result<Vec<Morph>> {
        let top = match spec {
            PathSpec::Exact(n) => n.clone(),
            PathSpec::Below(n) => n.pred()?,
            PathSpec::Interval(p, q) => {
                if p.rank() != q.rank() {
                    return Err(KGraphError::RankMismatch {
                        expected: p.rank(),
                        found: q.rank(),
                    });
                }
                q.pred()?
            }
        };
        self.ensure_within_depth(&top)?;
        let pool: Box<dyn Iterator<Item = Morph>> = match v {
            Some(v) => {
                self.check(v)?;
                if !self.is_vertex(v) {
                    return Err(KGraphError::InvalidArgument(format!(
                        "`{}` is not a vertex",
                        self.label(v)
                    )));
                }
                Box::new(self.from_range(v).iter().copied())
            }
            None => Box::new(self.morphisms()),
        };
        Ok(pool.filter(|&m| spec.contains(self.degree(m))).collect())
    }

    /// `vΛ^n` as a slice-free iterator; `n` is assumed within depth.
    pub(crate) fn paths_of_degree_from(
        &self,
        v: Morph,
        n: &Degree,
    ) -> impl Iterator<Item = Morph> + '_ {
        let n = n.clone();
        self.from_range(v)
            .iter()
            .copied()
            .filter(move |&m| *self.degree(m) == n)
    }

    /// Minimal common extensions via two independent enumerations: `MCE` as
    /// the paths of degree `d(μ) ∨ d(ν)` with both prefixes, and `Λ^min` as all
    /// pairs `(α, β)` of the right degrees with `μα = νβ`. Errors if the two
    /// routes disagree on the bijection `(α, β) ↦ μα`.
    pub fn lambda_min(&self, mu: Morph, nu: Morph) -> Result<LambdaMin> {
        self.check(mu)?;
        self.check(nu)?;
        let dm = self.degree(mu);
        let dn = self.degree(nu);
        let top = dm.join(dn)?;
        self.ensure_within_depth(&top)?;
        if self.range(mu) != self.range(nu) {
            return Ok(LambdaMin {
                pairs: Vec::new(),
                extensions: Vec::new(),
            });
        }
        let extensions: Vec<Morph> = self
            .paths_of_degree_from(self.range(mu), &top)
            .filter(|&l| {
                self.factor(l, dm).map(|p| p.0) == Ok(mu)
                    && self.factor(l, dn).map(|p| p.0) == Ok(nu)
            })
            .collect();

        let da = top.sub(dm);
        let db = top.sub(dn);
        let alphas: Vec<Morph> = self.paths_of_degree_from(self.source(mu), &da).collect();
        let betas: Vec<Morph> = self.paths_of_degree_from(self.source(nu), &db).collect();
        let mut pairs = Vec::new();
        for &a in &alphas {
            let Some(ma) = self.compose(mu, a) else {
                continue;
            };
            for &b in &betas {
                if self.compose(nu, b) == Some(ma) {
                    pairs.push((a, b));
                }
            }
        }

        let mut images: Vec<Morph> = pairs
            .iter()
            .map(|&(a, _)| self.compose(mu, a).expect("composed above"))
            .collect();
        images.sort();
        images.dedup();
        if images.len() != pairs.len() || images != extensions {
            return Err(KGraphError::Malformed(format!(
                "Λ^min({}, {}) is not in bijection with MCE",
                self.label(mu),
                self.label(nu)
            )));
        }
        Ok(LambdaMin { pairs, extensions })
    }

    /// Count of morphisms per degree, sorted by degree.
    pub fn degree_counts(&self) -> Vec<(Degree, usize)> {
        let mut v: Vec<_> = self
            .by_degree
            .iter()
            .map(|(d, ms)| (d.clone(), ms.len()))
            .collect();
        v.sort();
        v
    }
}
