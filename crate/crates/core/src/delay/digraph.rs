//! The delay `E(m)` of a directed graph, in directed-graph conventions.

use std::collections::{BTreeSet, HashMap};

use crate::degree::Degree;
use crate::digraph::{path_category, DiPath, DirectedGraph};
use crate::error::{KGraphError, Result};
use crate::graph::{Morph, PathSpec, TruncatedKGraph};
use crate::report::{describe, AxiomReport};

use super::{delay, DelayedGraph};

/// `E(m)`: vertices `E^{<m}`, edges `(e, μ)` with `r_E(e) = s_E(μ)`,
/// `r((e,μ)) = μ` and `s((e,μ)) = eμ` if `|μ| < m-1`, else `s_E(e)`.
#[derive(Clone, Debug)]
pub struct DelayedDigraph {
    base: DirectedGraph,
    m: u32,
    graph: DirectedGraph,
    vertex_paths: Vec<DiPath>,
    edge_pairs: Vec<(usize, DiPath)>,
}

impl DelayedDigraph {
    pub fn base(&self) -> &DirectedGraph {
        &self.base
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `E(m)` as a plain directed graph. Vertex names are path labels of
    /// `E`; edge names are `(e;μ)`.
    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    pub fn vertex_path(&self, v: usize) -> &DiPath {
        &self.vertex_paths[v]
    }

    pub fn edge_pair(&self, i: usize) -> (usize, &DiPath) {
        let (e, ref mu) = self.edge_pairs[i];
        (e, mu)
    }
}

pub fn graph_delay(e: &DirectedGraph, m: u32) -> Result<DelayedDigraph> {
    if m == 0 {
        return Err(KGraphError::InvalidArgument("m must be at least 1".into()));
    }
    let vertex_paths: Vec<DiPath> = e.paths_up_to(m as usize - 1).into_iter().flatten().collect();
    let mut graph = DirectedGraph::new();
    let mut id_of: HashMap<DiPath, usize> = HashMap::new();
    for p in &vertex_paths {
        let id = graph.add_vertex(&e.path_label(p))?;
        id_of.insert(p.clone(), id);
    }
    let mut edge_pairs = Vec::new();
    for (ei, edge) in e.edges().iter().enumerate() {
        for mu in vertex_paths.iter().filter(|mu| e.path_src(mu) == edge.dst) {
            let src = if (mu.edges.len() as u32) < m - 1 {
                let mut edges = vec![ei];
                edges.extend(&mu.edges);
                id_of[&DiPath {
                    vertex: edge.src,
                    edges,
                }]
            } else {
                id_of[&DiPath {
                    vertex: edge.src,
                    edges: Vec::new(),
                }]
            };
            let name = format!("({};{})", edge.name, e.path_label(mu));
            let src_name = graph.vertices()[src].clone();
            let dst_name = e.path_label(mu);
            graph.add_edge(&name, &src_name, &dst_name)?;
            edge_pairs.push((ei, mu.clone()));
        }
    }
    Ok(DelayedDigraph {
        base: e.clone(),
        m,
        graph,
        vertex_paths,
        edge_pairs,
    })
}

/// `E*(m)` realized at depth `D`, from the path category at depth `D + m - 1`.
fn star_delay(base: &TruncatedKGraph, m: u32, depth: u32) -> Result<DelayedGraph<'_>> {
    delay(base, &Degree::new(vec![m]), &Degree::new(vec![depth]))
}

fn star(e: &DirectedGraph, m: u32, depth: u32) -> Result<TruncatedKGraph> {
    let extra = m.checked_sub(1).ok_or_else(|| KGraphError::InvalidArgument("m must be at least 1".into()))?;
    path_category(e, depth.checked_add(extra).ok_or(KGraphError::Overflow)?)
}

/// `E(m)* ≅ E*(m)`: the identity on edges `(e, μ)` intertwines range and
/// source, and its extension is a degree-preserving bijection on all paths of
/// length at most `D` that respects composition.
pub fn delay_path_iso_check(e: &DirectedGraph, m: u32, depth: u32) -> Result<AxiomReport> {
    let em = graph_delay(e, m)?;
    let lhs = path_category(em.graph(), depth)?;
    let base = star(e, m, depth)?;
    let dg = star_delay(&base, m, depth)?;
    let rhs = dg.realized();
    let mut rep = AxiomReport::new("delay_path_iso_check");

    let lookup = |p: &DiPath| base.lookup(&e.path_label(p)).expect("path within base depth");
    let mut phi: Vec<Option<Morph>> = vec![None; lhs.len()];
    for (vi, p) in em.vertex_paths.iter().enumerate() {
        let v = lhs.lookup(&em.graph().vertices()[vi]).expect("vertex");
        phi[v.index()] = dg.vertex_for(lookup(p));
    }
    for (i, (ei, mu)) in em.edge_pairs.iter().enumerate() {
        let edge = lhs.lookup(&em.graph().edges()[i].name).expect("edge");
        let eb = base.lookup(&e.edges()[*ei].name).expect("edge");
        phi[edge.index()] = dg.id_of(eb, lookup(mu));
    }
    for m1 in lhs.morphisms() {
        if lhs.degree(m1).get(0) > 1 {
            let (head, rest) = lhs.factor(m1, &Degree::new(vec![1]))?;
            phi[m1.index()] = match (phi[head.index()], phi[rest.index()]) {
                (Some(x), Some(y)) => rhs.compose(x, y),
                _ => None,
            };
        }
        rep.expect(phi[m1.index()].is_some(), "defined", || vec![describe(&lhs, m1)]);
    }
    if !rep.passed() {
        return Ok(rep);
    }
    let f = |x: Morph| phi[x.index()].unwrap();

    let edges_l: Vec<Morph> = lhs.of_degree(&Degree::new(vec![1])).to_vec();
    for &x in &edges_l {
        rep.expect(
            f(lhs.range(x)) == rhs.range(f(x)) && f(lhs.source(x)) == rhs.source(f(x)),
            "edge-intertwines-r-s",
            || vec![describe(&lhs, x), describe(rhs, f(x))],
        );
        rep.expect(lhs.label(x) == rhs.label(f(x)), "identity-on-edges", || {
            vec![describe(&lhs, x), describe(rhs, f(x))]
        });
    }
    let images: BTreeSet<Morph> = lhs.morphisms().map(f).collect();
    rep.expect(
        images.len() == lhs.len() && lhs.len() == rhs.len(),
        "bijection",
        || vec![format!("{} images, {} vs {} morphisms", images.len(), lhs.len(), rhs.len())],
    );
    for x in lhs.morphisms() {
        rep.expect(lhs.degree(x) == rhs.degree(f(x)), "degree", || vec![describe(&lhs, x)]);
    }
    for (&(x, y), &z) in lhs.composition_table() {
        rep.expect(rhs.compose(f(x), f(y)) == Some(f(z)), "composition", || {
            vec![describe(&lhs, x), describe(&lhs, y)]
        });
    }
    for &v in lhs.vertices() {
        for j in 0..=depth {
            let d = Degree::new(vec![j]);
            let a = lhs.paths_of_degree_from(v, &d).count();
            let b = rhs.paths_of_degree_from(f(v), &d).count();
            rep.expect(a == b, "path-counts", || vec![describe(&lhs, v), format!("length {j}")]);
        }
    }
    Ok(rep)
}

/// `ι̃_m ∘ ψ_E = ψ_{E(m)} ∘ ι̃_{m,E}` on generators, as index sets of
/// generators of `C*(E*(m))`. `D >= 1` is the realization depth.
pub fn rout_equivalence_check(e: &DirectedGraph, m: u32, depth: u32) -> Result<AxiomReport> {
    if depth == 0 {
        return Err(KGraphError::InvalidArgument("depth must be at least 1".into()));
    }
    let em = graph_delay(e, m)?;
    let base = star(e, m, depth)?;
    let dg = star_delay(&base, m, depth)?;
    let rhs = dg.realized();
    let below = PathSpec::Below(Degree::new(vec![m]));
    let mut rep = AxiomReport::new("rout_equivalence_check");
    let pair = |x: &str, y: &str| format!("({x};{y})");

    for (vi, vname) in e.vertices().iter().enumerate() {
        // ι̃_m(S_v): sum of S_{(v,λ)} over λ ∈ v(E*)^{<m}.
        let v = base.lookup(vname).expect("vertex");
        let left: BTreeSet<String> = base
            .paths(Some(v), &below)?
            .into_iter()
            .map(|l| rhs.label(dg.vertex_for(l).expect("vertex stored")).to_string())
            .collect();
        // ψ_{E(m)}(ι̃_{m,E}(p_v)): p_λ over λ ∈ E^{<m}, s_E(λ) = v, relabelled S_{(s_E(λ),λ)}.
        let right: BTreeSet<String> = em
            .vertex_paths
            .iter()
            .filter(|p| e.path_src(p) == vi)
            .map(|p| pair(&e.vertices()[e.path_src(p)], &e.path_label(p)))
            .collect();
        rep.expect(left == right && !left.is_empty(), "vertex-generators", || {
            vec![vname.clone()]
        });
        rep.expect(
            right.iter().all(|l| rhs.lookup(l).is_some_and(|x| rhs.is_vertex(x))),
            "vertex-generators-exist",
            || vec![vname.clone()],
        );
    }
    for (ei, edge) in e.edges().iter().enumerate() {
        let eb = base.lookup(&edge.name).expect("edge");
        let left: BTreeSet<String> = base
            .paths(Some(base.source(eb)), &below)?
            .into_iter()
            .map(|l| rhs.label(dg.id_of(eb, l).expect("edge pair stored")).to_string())
            .collect();
        let right: BTreeSet<String> = em
            .edge_pairs
            .iter()
            .enumerate()
            .filter(|(_, (x, _))| *x == ei)
            .map(|(i, _)| em.graph().edges()[i].name.clone())
            .collect();
        rep.expect(left == right && !left.is_empty(), "edge-generators", || {
            vec![edge.name.clone()]
        });
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LOOP: &str = "vertex v\nedge e v v\n";
    const TWO: &str = "vertex u\nvertex w\nedge a u w\nedge l w w\nedge b w u\n";

    #[test]
    fn loop_three_is_cycle() {
        let e = DirectedGraph::parse(LOOP).unwrap();
        let em = graph_delay(&e, 3).unwrap();
        let g = em.graph();
        assert_eq!(g.vertices(), ["v", "e", "e.e"]);
        let edges: Vec<(&str, &str, &str)> = g
            .edges()
            .iter()
            .map(|x| (x.name.as_str(), g.vertices()[x.src].as_str(), g.vertices()[x.dst].as_str()))
            .collect();
        assert_eq!(
            edges,
            [("(e;v)", "e", "v"), ("(e;e)", "e.e", "e"), ("(e;e.e)", "v", "e.e")]
        );
        g.check_no_sinks().unwrap();
    }

    #[test]
    fn m_zero_is_rejected() {
        let e = DirectedGraph::parse(LOOP).unwrap();
        assert!(graph_delay(&e, 0).is_err());
    }

    #[test]
    fn m_one_is_e() {
        let e = DirectedGraph::parse(TWO).unwrap();
        let em = graph_delay(&e, 1).unwrap();
        assert_eq!(em.graph().vertices(), e.vertices());
        for (x, y) in em.graph().edges().iter().zip(e.edges()) {
            assert_eq!((x.src, x.dst), (y.src, y.dst));
        }
    }

    #[test]
    fn edge_count_formula() {
        let e = DirectedGraph::parse(TWO).unwrap();
        for m in 1..=4 {
            let em = graph_delay(&e, m).unwrap();
            let want: usize = e
                .paths_up_to(m as usize - 1)
                .iter()
                .flatten()
                .map(|mu| e.edges().iter().filter(|x| x.dst == e.path_src(mu)).count())
                .sum();
            assert_eq!(em.graph().edges().len(), want);
            em.graph().check_no_sinks().unwrap();
        }
    }

    #[test]
    fn path_iso_and_rout() {
        for text in [LOOP, TWO] {
            let e = DirectedGraph::parse(text).unwrap();
            for m in 1..=3 {
                let rep = delay_path_iso_check(&e, m, 4).unwrap();
                assert!(rep.passed(), "{rep}");
                let rep = rout_equivalence_check(&e, m, 2).unwrap();
                assert!(rep.passed(), "{rep}");
            }
        }
    }
}
