//! The delay construction `Λ(n)` on a truncated k-graph, and the directed-graph
//! version `E(m)` with its compatibility checks.
//!
//! `Λ(n)` consists of pairs `(λ, λ')` with `λ' ∈ s(λ)Λ^{<n}`, with
//! `d((λ,λ')) = d(λ)`, `s((λ,λ')) = (s(λ), λ')`, `r((λ,λ')) = (r(λ), [λλ'])`
//! and `(λ,λ')(μ,μ') = (λμ, μ')` when `λ' = [μμ']`. Vertices are the pairs
//! `(r(λ'), λ')`, identified with `Λ^{<n}`.

mod compat;
mod digraph;

pub use compat::{prodgraph_generator_check, product_delay_compat_check, ProductGenerators};
pub use digraph::{delay_path_iso_check, graph_delay, rout_equivalence_check, DelayedDigraph};

use std::collections::HashMap;

use crate::degree::Degree;
use crate::error::{KGraphError, Result};
use crate::graph::{GraphBuilder, Morph, PathSpec, TruncatedKGraph};
use crate::report::{describe, AxiomReport};

/// `[λ] = λ(0, [d(λ)])`, the prefix whose degree is `d(λ) mod n`.
pub fn bracket(g: &TruncatedKGraph, lambda: Morph, n: &Degree) -> Result<Morph> {
    let r = g.degree(g.check(lambda)?).residue(n)?;
    Ok(g.factor(lambda, &r)?.0)
}

/// `T(λ)`, the suffix with `λ = [λ] T(λ)`; its degree lies in `H_n`.
pub fn tail(g: &TruncatedKGraph, lambda: Morph, n: &Degree) -> Result<Morph> {
    let r = g.degree(g.check(lambda)?).residue(n)?;
    Ok(g.factor(lambda, &r)?.1)
}

fn check_modulus(g: &TruncatedKGraph, n: &Degree) -> Result<()> {
    if n.rank() != g.rank() {
        return Err(KGraphError::RankMismatch {
            expected: g.rank(),
            found: n.rank(),
        });
    }
    if n.coords().iter().any(|&c| c == 0) {
        return Err(KGraphError::ZeroModulus(n.clone()));
    }
    Ok(())
}

/// Base depth needed to realize `Λ(n)` at depth `D`: `D + n - 1`.
pub fn required_base_depth(n: &Degree, depth: &Degree) -> Result<Degree> {
    depth.checked_add(&n.pred()?)
}

/// `Λ(n)` realized as a truncated k-graph of depth `D`.
#[derive(Clone, Debug)]
pub struct DelayedGraph<'a> {
    base: &'a TruncatedKGraph,
    n: Degree,
    realized: TruncatedKGraph,
    pairs: Vec<(Morph, Morph)>,
    index: HashMap<(Morph, Morph), Morph>,
}

impl<'a> DelayedGraph<'a> {
    pub fn base(&self) -> &'a TruncatedKGraph {
        self.base
    }

    pub fn n(&self) -> &Degree {
        &self.n
    }

    pub fn realized(&self) -> &TruncatedKGraph {
        &self.realized
    }

    /// Depth of the realization; queries beyond it are refused.
    pub fn depth(&self) -> &Degree {
        self.realized.depth()
    }

    /// `(λ, λ')` for a realized morphism.
    pub fn pair(&self, m: Morph) -> (Morph, Morph) {
        self.pairs[m.index()]
    }

    pub fn id_of(&self, lambda: Morph, lambda2: Morph) -> Option<Morph> {
        self.index.get(&(lambda, lambda2)).copied()
    }

    /// The vertex `(r(λ'), λ')` for `λ' ∈ Λ^{<n}`.
    pub fn vertex_for(&self, lambda2: Morph) -> Option<Morph> {
        self.id_of(self.base.range(lambda2), lambda2)
    }

    /// Under `Λ(n)^0 ≅ Λ^{<n}`, the base path a vertex stands for.
    pub fn vertex_path(&self, v: Morph) -> Morph {
        self.pair(v).1
    }

    pub fn bracket(&self, lambda: Morph) -> Result<Morph> {
        bracket(self.base, lambda, &self.n)
    }

    pub fn tail(&self, lambda: Morph) -> Result<Morph> {
        tail(self.base, lambda, &self.n)
    }

    /// `s(λ)Λ^{<n}` in the base graph.
    pub fn delays_at(&self, v: Morph) -> Vec<Morph> {
        self.base
            .from_range(v)
            .iter()
            .copied()
            .filter(|&m| self.base.degree(m).lt(&self.n))
            .collect()
    }
}

/// Builds `Λ(n)` at depth `D`. Requires the base depth to be at least
/// `D + n - 1` so that every `λλ'` is stored.
pub fn delay<'a>(base: &'a TruncatedKGraph, n: &Degree, depth: &Degree) -> Result<DelayedGraph<'a>> {
    check_modulus(base, n)?;
    base.ensure_within_depth(&required_base_depth(n, depth)?)?;

    let below: Vec<Morph> = base.paths(None, &PathSpec::Below(n.clone()))?;
    let mut b = GraphBuilder::new(depth.clone())?;
    let mut pairs = Vec::new();
    let mut index = HashMap::new();
    let label = |x: Morph, y: Morph| format!("({};{})", base.label(x), base.label(y));

    for &l2 in &below {
        let r = base.range(l2);
        let id = b.add_vertex(label(r, l2))?;
        pairs.push((r, l2));
        index.insert((r, l2), id);
    }
    for lam in base.morphisms() {
        if base.is_vertex(lam) || !base.degree(lam).le(depth) {
            continue;
        }
        for &l2 in base.from_range(base.source(lam)) {
            if !base.degree(l2).lt(n) {
                continue;
            }
            let whole = base
                .compose(lam, l2)
                .ok_or_else(|| KGraphError::Malformed(format!("{} not composable", label(lam, l2))))?;
            let range = index[&(base.range(lam), bracket(base, whole, n)?)];
            let source = index[&(base.source(lam), l2)];
            let id = b.add(label(lam, l2), base.degree(lam).clone(), range, source)?;
            pairs.push((lam, l2));
            index.insert((lam, l2), id);
        }
    }

    let realized = b.finish(|x, y| {
        let (lam, l2) = pairs[x.index()];
        let (mu, m2) = pairs[y.index()];
        let mm = base.compose(mu, m2)?;
        if bracket(base, mm, n).ok()? != l2 {
            return None;
        }
        index.get(&(base.compose(lam, mu)?, m2)).copied()
    })?;

    Ok(DelayedGraph {
        base,
        n: n.clone(),
        realized,
        pairs,
        index,
    })
}

/// Compares the closed form for `Λ(n)^min((λ,λ'),(μ,μ'))` with brute-force
/// enumeration in the realized graph, for all pairs with `d(λ), d(μ) <= bound`.
pub fn delayed_min_check(base: &TruncatedKGraph, n: &Degree, bound: &Degree) -> Result<AxiomReport> {
    let dg = delay(base, n, bound)?;
    let g = dg.realized();
    let mut rep = AxiomReport::new("delayed_min_check");
    let mut distinct_range = 0usize;
    for &v in g.vertices() {
        let group = g.from_range(v);
        for &a in group {
            for &b in group {
                let brute = g.lambda_min(a, b)?;
                let mut closed = closed_form_min(&dg, a, b)?;
                closed.sort();
                let mut brute_pairs = brute.pairs.clone();
                brute_pairs.sort();
                rep.expect(closed == brute_pairs, "closed-form-min", || {
                    vec![describe(g, a), describe(g, b)]
                });
            }
        }
        distinct_range += group.len() * (g.len() - group.len());
    }
    // Pairs with distinct ranges: [λλ'] != [μμ'], both sides empty by definition.
    for a in g.morphisms() {
        let (lam, l2) = dg.pair(a);
        let ll = base.compose(lam, l2).expect("stored pair");
        rep.expect(
            dg.vertex_path(g.range(a)) == bracket(base, ll, n)?,
            "range-is-bracket",
            || vec![describe(g, a)],
        );
    }
    rep.note(format!("{distinct_range} ordered pairs with distinct ranges are empty on both sides"));
    Ok(rep)
}

/// `{((α,τ),(β,τ)) : (α,β) ∈ Λ^min(λ,μ), τ ∈ s(α)Λ^{<n}, [ατ] = λ', [βτ] = μ'}`,
/// or empty when `[λλ'] != [μμ']`.
pub fn closed_form_min(dg: &DelayedGraph<'_>, a: Morph, b: Morph) -> Result<Vec<(Morph, Morph)>> {
    let base = dg.base();
    let n = dg.n();
    let (lam, l2) = dg.pair(a);
    let (mu, m2) = dg.pair(b);
    let ll = base.compose(lam, l2).expect("stored pair");
    let mm = base.compose(mu, m2).expect("stored pair");
    if bracket(base, ll, n)? != bracket(base, mm, n)? {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (alpha, beta) in base.lambda_min(lam, mu)?.pairs {
        for tau in dg.delays_at(base.source(alpha)) {
            let at = base.compose(alpha, tau).expect("within base depth");
            let bt = base.compose(beta, tau).expect("within base depth");
            if bracket(base, at, n)? == l2 && bracket(base, bt, n)? == m2 {
                let x = dg.id_of(alpha, tau).expect("degree within bound");
                let y = dg.id_of(beta, tau).expect("degree within bound");
                out.push((x, y));
            }
        }
    }
    Ok(out)
}

/// Checks the explicit description of `(r(λ),λ)Λ(n)^m` for every vertex and
/// every `m <= D`: it equals `{((λν)(0,m), (λν)(m, p + d(λ))) : ν ∈ s(λ)Λ^p}`
/// with `p = m + [d(λ) - m] - d(λ)`, so in particular has `|s(λ)Λ^p|` elements.
pub fn range_set_check(dg: &DelayedGraph<'_>) -> Result<AxiomReport> {
    let base = dg.base();
    let g = dg.realized();
    let n = dg.n();
    let mut rep = AxiomReport::new("range_set_check");
    for &v in g.vertices() {
        let lam = dg.vertex_path(v);
        let dl = base.degree(lam);
        for m in g.depth().box_iter() {
            let target: Vec<u32> = (0..n.rank())
                .map(|i| {
                    let diff = dl.get(i) as i64 - m.get(i) as i64;
                    let res = diff.rem_euclid(n.get(i) as i64) as u32;
                    m.get(i) + res
                })
                .collect();
            let target = Degree::new(target);
            let p = target.checked_sub(dl)?;
            let mut expected = Vec::new();
            for nu in base.paths_of_degree_from(base.source(lam), &p) {
                let ln = base.compose(lam, nu).expect("within base depth");
                let head = base.segment(ln, &Degree::zero(n.rank()), &m)?;
                let rest = base.segment(ln, &m, &target)?;
                expected.push(dg.id_of(head, rest).expect("pair is stored"));
            }
            expected.sort();
            let mut actual: Vec<Morph> = g.paths_of_degree_from(v, &m).collect();
            actual.sort();
            rep.expect(actual == expected && !actual.is_empty(), "range-set", || {
                vec![describe(g, v), format!("m={m}"), format!("p={p}")]
            });
        }
    }
    Ok(rep)
}

/// `Λ(1,...,1) ≅ Λ`: the map `(λ, s(λ)) ↦ λ` is a degree-preserving bijection
/// intertwining range, source and composition.
pub fn unit_delay_iso_check(base: &TruncatedKGraph, depth: &Degree) -> Result<AxiomReport> {
    let ones = Degree::splat(base.rank(), 1);
    let dg = delay(base, &ones, depth)?;
    let g = dg.realized();
    let mut rep = AxiomReport::new("unit_delay_iso_check");
    let phi = |m: Morph| dg.pair(m).0;
    let targets: Vec<Morph> = base
        .morphisms()
        .filter(|&m| base.degree(m).le(depth))
        .collect();
    let mut images: Vec<Morph> = g.morphisms().map(phi).collect();
    images.sort();
    rep.expect(images == targets, "bijection", || {
        vec![format!("{} delayed vs {} base", g.len(), targets.len())]
    });
    for m in g.morphisms() {
        let (lam, l2) = dg.pair(m);
        rep.expect(
            l2 == base.source(lam)
                && g.degree(m) == base.degree(lam)
                && phi(g.range(m)) == base.range(lam)
                && phi(g.source(m)) == base.source(lam),
            "intertwines-r-s-d",
            || vec![describe(g, m)],
        );
    }
    for (&(x, y), &z) in g.composition_table() {
        rep.expect(
            base.compose(phi(x), phi(y)) == Some(phi(z)),
            "intertwines-composition",
            || vec![describe(g, x), describe(g, y)],
        );
    }
    Ok(rep)
}

/// `[λμ] = [λ]` whenever `d(μ) ∈ H_n`, and `λ = [λ] T(λ)`, exhaustively.
pub fn bracket_tail_check(base: &TruncatedKGraph, n: &Degree) -> Result<AxiomReport> {
    check_modulus(base, n)?;
    let mut rep = AxiomReport::new("bracket_tail_check");
    for lam in base.morphisms() {
        let br = bracket(base, lam, n)?;
        let tl = tail(base, lam, n)?;
        rep.expect(
            base.compose(br, tl) == Some(lam)
                && base.degree(br).lt(n)
                && base.degree(tl).in_lattice(n)?,
            "reassembly",
            || vec![describe(base, lam)],
        );
        for &mu in base.from_range(base.source(lam)) {
            if !base.degree(mu).in_lattice(n)? {
                continue;
            }
            if let Some(lm) = base.compose(lam, mu) {
                rep.expect(bracket(base, lm, n)? == br, "lattice-invariance", || {
                    vec![describe(base, lam), describe(base, mu)]
                });
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::verify_axioms;
    use crate::digraph::{path_category, DirectedGraph};
    use crate::skeleton::{build_2graph, Skeleton2};

    fn loop1(depth: u32) -> TruncatedKGraph {
        path_category(&DirectedGraph::parse("vertex v\nedge e v v\n").unwrap(), depth).unwrap()
    }

    fn free2(depth: [u32; 2]) -> TruncatedKGraph {
        let sk = Skeleton2::parse("vertex v\nblue f v v\nred g v v\nsquare f g g f\n").unwrap();
        build_2graph(&sk, &Degree::from(depth)).unwrap()
    }

    #[test]
    fn bracket_and_tail_on_loop() {
        let g = loop1(6);
        let e5 = g.lookup("e.e.e.e.e").unwrap();
        let n = Degree::from([3]);
        assert_eq!(g.label(bracket(&g, e5, &n).unwrap()), "e.e");
        assert_eq!(g.label(tail(&g, e5, &n).unwrap()), "e.e.e");
        let e2 = g.lookup("e.e").unwrap();
        assert_eq!(bracket(&g, e2, &n).unwrap(), e2);
        assert_eq!(g.label(tail(&g, e2, &n).unwrap()), "v");
    }

    #[test]
    fn bracket_in_n2() {
        let g = free2([3, 5]);
        let lam = g.lookup("f.f.f.g.g.g.g.g").unwrap();
        let br = bracket(&g, lam, &Degree::from([2, 2])).unwrap();
        assert_eq!(*g.degree(br), Degree::from([1, 1]));
        assert_eq!(g.label(br), "f.g");
    }

    #[test]
    fn loop_delay_three_is_three_cycle() {
        let base = loop1(5);
        let dg = delay(&base, &Degree::from([3]), &Degree::from([3])).unwrap();
        let g = dg.realized();
        let verts: Vec<_> = g.vertices().iter().map(|&v| g.label(v).to_string()).collect();
        assert_eq!(verts, ["(v;v)", "(v;e)", "(v;e.e)"]);
        // Hand enumeration: (e,v): v -> e, (e,e): e -> e², (e,e²): e² -> v
        // (source -> range, in the Λ^{<n} picture).
        let edges: Vec<(String, String, String)> = g
            .of_degree(&Degree::from([1]))
            .iter()
            .map(|&m| {
                (
                    g.label(m).to_string(),
                    base.label(dg.vertex_path(g.source(m))).to_string(),
                    base.label(dg.vertex_path(g.range(m))).to_string(),
                )
            })
            .collect();
        assert_eq!(
            edges,
            [
                ("(e;v)".to_string(), "v".to_string(), "e".to_string()),
                ("(e;e)".to_string(), "e".to_string(), "e.e".to_string()),
                ("(e;e.e)".to_string(), "e.e".to_string(), "v".to_string()),
            ]
        );
        assert!(verify_axioms(g).passed());
    }

    #[test]
    fn insufficient_base_depth_is_refused() {
        let base = loop1(4);
        let err = delay(&base, &Degree::from([3]), &Degree::from([3])).unwrap_err();
        assert!(matches!(err, KGraphError::DepthExceeded { .. }));
    }

    #[test]
    fn unit_delay_is_isomorphic() {
        let base = free2([3, 3]);
        assert!(unit_delay_iso_check(&base, &Degree::from([3, 3])).unwrap().passed());
    }

    #[test]
    fn n2_vertex_count() {
        let base = free2([3, 3]);
        let dg = delay(&base, &Degree::from([2, 2]), &Degree::from([2, 2])).unwrap();
        assert_eq!(dg.realized().vertices().len(), 4);
        assert!(verify_axioms(dg.realized()).passed());
    }

    #[test]
    fn delayed_min_closed_form() {
        let base = loop1(6);
        assert!(delayed_min_check(&base, &Degree::from([3]), &Degree::from([3])).unwrap().passed());
        let base = free2([3, 3]);
        let rep = delayed_min_check(&base, &Degree::from([2, 2]), &Degree::from([2, 2])).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn self_min_is_source_pair() {
        let base = free2([3, 3]);
        let dg = delay(&base, &Degree::from([2, 2]), &Degree::from([2, 2])).unwrap();
        let g = dg.realized();
        for a in g.morphisms() {
            let min = g.lambda_min(a, a).unwrap();
            assert_eq!(min.pairs, vec![(g.source(a), g.source(a))]);
            let closed = closed_form_min(&dg, a, a).unwrap();
            assert_eq!(closed, min.pairs);
        }
    }

    #[test]
    fn range_sets_and_bracket_tail() {
        let base = free2([4, 4]);
        let dg = delay(&base, &Degree::from([2, 3]), &Degree::from([2, 2])).unwrap();
        assert!(range_set_check(&dg).unwrap().passed());
        assert!(bracket_tail_check(&base, &Degree::from([2, 3])).unwrap().passed());
    }
}
