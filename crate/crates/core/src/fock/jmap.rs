//! The return map `j_n(s_{(λ,λ')}) = s_{T(λλ')} ⊗ θ_{[λλ'],λ'}`, with the
//! matrix-unit factor kept as an index pair.

use std::collections::BTreeSet;

use crate::degree::Degree;
use crate::delay::{bracket, delay, tail, DelayedGraph};
use crate::error::Result;
use crate::graph::{Morph, TruncatedKGraph};
use crate::report::{describe, AxiomReport};

/// `s_path ⊗ θ_{row,col}` with `path ∈ Λ` and `row, col ∈ Λ^{<n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementaryTensor {
    pub path: Morph,
    pub row: Morph,
    pub col: Morph,
}

impl ElementaryTensor {
    /// `(s_a ⊗ θ_{b,c})(s_a' ⊗ θ_{b',c'}) = δ_{c,b'} s_a s_a' ⊗ θ_{b,c'}`, with
    /// `s_a s_a' = 0` unless `s(a) = r(a')`. `None` is the zero tensor.
    pub fn mul(self, other: ElementaryTensor, g: &TruncatedKGraph) -> Option<ElementaryTensor> {
        if self.col != other.row || g.source(self.path) != g.range(other.path) {
            return None;
        }
        Some(ElementaryTensor {
            path: g.compose(self.path, other.path)?,
            row: self.row,
            col: other.col,
        })
    }

    /// `(s_a ⊗ θ_{b,c})*(s_a ⊗ θ_{b,c}) = s_{s(a)} ⊗ θ_{c,c}`.
    pub fn star_self(self, g: &TruncatedKGraph) -> ElementaryTensor {
        ElementaryTensor {
            path: g.source(self.path),
            row: self.col,
            col: self.col,
        }
    }

    pub fn display(&self, g: &TruncatedKGraph) -> String {
        format!("s_{} ⊗ θ({},{})", g.label(self.path), g.label(self.row), g.label(self.col))
    }
}

pub fn j_image(dg: &DelayedGraph<'_>, x: Morph) -> Result<ElementaryTensor> {
    let base = dg.base();
    let (lam, l2) = dg.pair(x);
    let ll = base.compose(lam, l2).expect("stored pair");
    Ok(ElementaryTensor {
        path: tail(base, ll, dg.n())?,
        row: bracket(base, ll, dg.n())?,
        col: l2,
    })
}

/// The combinatorial identities behind `j_n`, exhaustively on `Λ(n)` at depth `D`.
pub fn j_ck_check(base: &TruncatedKGraph, n: &Degree, depth: &Degree) -> Result<AxiomReport> {
    let dg = delay(base, n, depth)?;
    let g = dg.realized();
    let mut rep = AxiomReport::new("j_ck_check");
    let images: Vec<ElementaryTensor> = g.morphisms().map(|x| j_image(&dg, x)).collect::<Result<_>>()?;
    let j = |x: Morph| images[x.index()];
    let br = |m: Morph| bracket(base, m, n);
    let tl = |m: Morph| tail(base, m, n);

    // (i) tails and brackets along composable pairs.
    for (&(x, y), _) in g.composition_table() {
        let (lam, l2) = dg.pair(x);
        let (mu, m2) = dg.pair(y);
        let ll = base.compose(lam, l2).expect("stored");
        let mm = base.compose(mu, m2).expect("stored");
        let w = || vec![describe(g, x), describe(g, y)];
        rep.expect(l2 == br(mm)?, "composable-iff-bracket", w);
        let tm = tl(mm)?;
        let lhs = base.compose(ll, tm).map(tl).transpose()?;
        rep.expect(lhs.is_some() && lhs == base.compose(tl(ll)?, tm), "tail-multiplicative", w);
        let lmm = base.compose(lam, mm).expect("within base depth");
        rep.expect(br(lmm)? == br(ll)?, "bracket-stable", w);
    }

    // (iii) the elementary tensors satisfy (TCK1)-(TCK3) formally.
    for &v in g.vertices() {
        let t = j(v);
        rep.expect(
            base.is_vertex(t.path) && t.row == t.col && t.row == dg.vertex_path(v),
            "TCK1-projection",
            || vec![describe(g, v)],
        );
    }
    let distinct: BTreeSet<ElementaryTensor> = g.vertices().iter().map(|&v| j(v)).collect();
    rep.expect(distinct.len() == g.vertices().len(), "TCK1-orthogonal", Vec::new);
    for x in g.morphisms() {
        rep.expect(j(x).star_self(base) == j(g.source(x)), "TCK3", || vec![describe(g, x)]);
        let room = depth.sub(g.degree(x));
        for y in g.morphisms() {
            if !g.degree(y).le(&room) {
                continue;
            }
            let want = g.compose(x, y).map(j);
            rep.expect(j(x).mul(j(y), base) == want, "TCK2", || vec![describe(g, x), describe(g, y)]);
        }
    }

    // (ii) the (CK) counting identity.
    for &v in g.vertices() {
        let lam = dg.vertex_path(v);
        let dl = base.degree(lam);
        let r = base.range(lam);
        for m in depth.box_iter() {
            let p = Degree::new(
                (0..n.rank())
                    .map(|i| {
                        let diff = dl.get(i) as i64 - m.get(i) as i64;
                        m.get(i) + diff.rem_euclid(n.get(i) as i64) as u32
                    })
                    .collect(),
            );
            let mut lhs = BTreeSet::new();
            for mu in base.paths_of_degree_from(r, &m) {
                for m2 in dg.delays_at(base.source(mu)) {
                    let mm = base.compose(mu, m2).expect("within base depth");
                    if br(mm)? == lam {
                        lhs.insert(mm);
                    }
                }
            }
            let mut rhs = BTreeSet::new();
            let mut tails_ok = true;
            for nu in base.paths_of_degree_from(base.source(lam), &p.sub(dl)) {
                let ln = base.compose(lam, nu).expect("within base depth");
                tails_ok &= tl(ln)? == nu;
                rhs.insert(ln);
            }
            let w = || vec![describe(base, lam), format!("m={m}")];
            rep.expect(lhs == rhs && !lhs.is_empty(), "CK-counting", w);
            rep.expect(tails_ok, "CK-tails", w);
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{path_category, DirectedGraph};
    use crate::skeleton::{build_2graph, Skeleton2};

    #[test]
    fn loop_images() {
        let base = path_category(&DirectedGraph::parse("vertex v\nedge e v v\n").unwrap(), 6).unwrap();
        let n = Degree::from([3]);
        let dg = delay(&base, &n, &Degree::from([4])).unwrap();
        let x = dg.id_of(base.lookup("e.e").unwrap(), base.lookup("e.e").unwrap()).unwrap();
        let t = j_image(&dg, x).unwrap();
        assert_eq!(t.display(&base), "s_e.e.e ⊗ θ(e,e.e)");
        assert!(j_ck_check(&base, &n, &Degree::from([4])).unwrap().passed());
    }

    #[test]
    fn n2_identities() {
        let sk = Skeleton2::parse("vertex v\nblue f v v\nred g v v\nsquare f g g f\n").unwrap();
        let base = build_2graph(&sk, &Degree::from([3, 3])).unwrap();
        let rep = j_ck_check(&base, &Degree::from([2, 2]), &Degree::from([2, 2])).unwrap();
        assert!(rep.passed(), "{rep}");
    }
}
