//! Cartesian products of truncated k-graphs.

use crate::error::{KGraphError, Result};
use crate::graph::{GraphBuilder, Morph, TruncatedKGraph};

/// `Λ1 × Λ2` as a `(k1 + k2)`-graph truncated at the concatenated depth.
/// The morphism `(μ1, μ2)` has id `μ1 * |Λ2| + μ2`.
pub fn cartesian_product(a: &TruncatedKGraph, b: &TruncatedKGraph) -> Result<TruncatedKGraph> {
    if a.rank() == 0 || b.rank() == 0 {
        return Err(KGraphError::RankZero);
    }
    let nb = b.len() as u32;
    let pair = |x: Morph, y: Morph| Morph(x.0 * nb + y.0);
    let mut builder = GraphBuilder::new(a.depth().concat(b.depth()))?;
    for x in a.morphisms() {
        for y in b.morphisms() {
            builder.add(
                product_label(a.label(x), b.label(y)),
                a.degree(x).concat(b.degree(y)),
                pair(a.range(x), b.range(y)),
                pair(a.source(x), b.source(y)),
            )?;
        }
    }
    builder.finish(|p, q| {
        let (p1, p2) = (Morph(p.0 / nb), Morph(p.0 % nb));
        let (q1, q2) = (Morph(q.0 / nb), Morph(q.0 % nb));
        Some(pair(a.compose(p1, q1)?, b.compose(p2, q2)?))
    })
}

pub fn product_label(x: &str, y: &str) -> String {
    format!("({x},{y})")
}

/// Splits a product id into its components, given the second factor's size.
pub fn unpair(m: Morph, second_len: usize) -> (Morph, Morph) {
    let nb = second_len as u32;
    (Morph(m.0 / nb), Morph(m.0 % nb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::verify_axioms;
    use crate::degree::Degree;
    use crate::digraph::{path_category, DirectedGraph};
    use crate::graph::GraphBuilder;
    use crate::skeleton::{build_2graph, Skeleton2};

    fn loop1(depth: u32) -> TruncatedKGraph {
        path_category(&DirectedGraph::parse("vertex v\nedge e v v\n").unwrap(), depth).unwrap()
    }

    #[test]
    fn loop_times_loop_matches_commuting_skeleton() {
        let prod = cartesian_product(&loop1(3), &loop1(3)).unwrap();
        let sk = Skeleton2::parse("vertex v\nblue f v v\nred g v v\nsquare f g g f\n").unwrap();
        let free = build_2graph(&sk, &Degree::from([3, 3])).unwrap();
        assert_eq!(prod.degree_counts(), free.degree_counts());
        assert!(verify_axioms(&prod).passed());
    }

    #[test]
    fn counts_multiply() {
        let e = DirectedGraph::parse("vertex u\nvertex w\nedge a u w\nedge l w w\nedge b w u\n").unwrap();
        let g1 = path_category(&e, 3).unwrap();
        let g2 = loop1(2);
        let prod = cartesian_product(&g1, &g2).unwrap();
        for &v1 in g1.vertices() {
            for &v2 in g2.vertices() {
                for n in prod.depth().box_iter() {
                    let (m1, m2) = n.split_at(1);
                    let v = prod.lookup(&product_label(g1.label(v1), g2.label(v2))).unwrap();
                    let lhs = crate::axioms::count_from(&prod, v, &n);
                    let rhs = crate::axioms::count_from(&g1, v1, &m1) * crate::axioms::count_from(&g2, v2, &m2);
                    assert_eq!(lhs, rhs, "degree {n}");
                }
            }
        }
    }

    #[test]
    fn rank_zero_is_disallowed() {
        assert!(GraphBuilder::new(Degree::zero(0)).is_err());
    }
}
