//! Compatibility of the delay construction with cartesian products.

use std::collections::BTreeSet;

use crate::degree::Degree;
use crate::error::{KGraphError, Result};
use crate::graph::{Morph, PathSpec, TruncatedKGraph};
use crate::product::{cartesian_product, product_label, unpair};
use crate::report::{describe, AxiomReport};

use super::delay;

/// Checks that `((λ1,λ2),(λ1',λ2')) ↦ ((λ1,λ1'),(λ2,λ2'))` is an isomorphism
/// `(Λ1×Λ2)((n1,n2)) → Λ1(n1)×Λ2(n2)` up to degree `D = (D1, D2)`.
pub fn product_delay_compat_check(
    l1: &TruncatedKGraph,
    l2: &TruncatedKGraph,
    n1: &Degree,
    n2: &Degree,
    depth: &Degree,
) -> Result<AxiomReport> {
    let k1 = l1.rank();
    if depth.rank() != k1 + l2.rank() {
        return Err(KGraphError::RankMismatch {
            expected: k1 + l2.rank(),
            found: depth.rank(),
        });
    }
    let (d1, d2) = depth.split_at(k1);
    let prod = cartesian_product(l1, l2)?;
    let lhs_delay = delay(&prod, &n1.concat(n2), depth)?;
    let lhs = lhs_delay.realized();
    let del1 = delay(l1, n1, &d1)?;
    let del2 = delay(l2, n2, &d2)?;
    let rhs = cartesian_product(del1.realized(), del2.realized())?;
    let n_l2 = l2.len();
    let n_del2 = del2.realized().len() as u32;

    let mut rep = AxiomReport::new("product_delay_compat_check");
    let mut phi = Vec::with_capacity(lhs.len());
    for m in lhs.morphisms() {
        let (lam, lam2) = lhs_delay.pair(m);
        let (a1, a2) = unpair(lam, n_l2);
        let (b1, b2) = unpair(lam2, n_l2);
        let image = match (del1.id_of(a1, b1), del2.id_of(a2, b2)) {
            (Some(x), Some(y)) => Some(Morph(x.0 * n_del2 + y.0)),
            _ => None,
        };
        rep.expect(image.is_some(), "well-defined", || vec![describe(lhs, m)]);
        phi.push(image);
    }
    if !rep.passed() {
        return Ok(rep);
    }
    let phi: Vec<Morph> = phi.into_iter().map(Option::unwrap).collect();
    let f = |m: Morph| phi[m.index()];

    let mut seen = vec![false; rhs.len()];
    for m in lhs.morphisms() {
        let img = f(m);
        rep.expect(!seen[img.index()], "injective", || vec![describe(lhs, m)]);
        seen[img.index()] = true;
        rep.expect(
            lhs.degree(m) == rhs.degree(img)
                && f(lhs.range(m)) == rhs.range(img)
                && f(lhs.source(m)) == rhs.source(img),
            "intertwines-d-r-s",
            || vec![describe(lhs, m), describe(&rhs, img)],
        );
    }
    rep.expect(lhs.len() == rhs.len(), "surjective", || {
        vec![format!("{} vs {} morphisms", lhs.len(), rhs.len())]
    });
    for (&(x, y), &z) in lhs.composition_table() {
        rep.expect(rhs.compose(f(x), f(y)) == Some(f(z)), "intertwines-composition", || {
            vec![describe(lhs, x), describe(lhs, y)]
        });
    }
    let want = count_below(l1, n1)? * count_below(l2, n2)?;
    rep.expect(lhs.vertices().len() == want, "vertex-count", || {
        vec![format!("{} vertices, expected {want}", lhs.vertices().len())]
    });
    Ok(rep)
}

fn count_below(g: &TruncatedKGraph, n: &Degree) -> Result<usize> {
    Ok(g.paths(None, &PathSpec::Below(n.clone()))?.len())
}

/// Both sides of the product compatibility for the delay inclusion,
/// evaluated on one generator `s_{(μ1,μ2)}` as sets of labelled generators
/// of `C*(Λ1(n1)) ⊗ C*(Λ2(n2))`.
pub struct ProductGenerators<'a> {
    l1: &'a TruncatedKGraph,
    l2: &'a TruncatedKGraph,
    prod: TruncatedKGraph,
    n1: Degree,
    n2: Degree,
}

impl<'a> ProductGenerators<'a> {
    pub fn new(l1: &'a TruncatedKGraph, l2: &'a TruncatedKGraph, n1: &Degree, n2: &Degree) -> Result<Self> {
        Ok(ProductGenerators {
            l1,
            l2,
            prod: cartesian_product(l1, l2)?,
            n1: n1.clone(),
            n2: n2.clone(),
        })
    }

    fn label(g: &TruncatedKGraph, x: Morph, y: Morph) -> String {
        format!("({};{})", g.label(x), g.label(y))
    }

    /// `(ι̃_{n1} ⊗ ι̃_{n2}) ∘ Θ`: a sum over `ν ∈ s(μ1)Λ1^{<n1}`, `ν' ∈ s(μ2)Λ2^{<n2}`.
    pub fn tensor_side(&self, mu1: Morph, mu2: Morph) -> Result<BTreeSet<String>> {
        let (l1, l2) = (self.l1, self.l2);
        l1.ensure_within_depth(&l1.degree(mu1).checked_add(&self.n1.pred()?)?)?;
        l2.ensure_within_depth(&l2.degree(mu2).checked_add(&self.n2.pred()?)?)?;
        let a = l1.paths(Some(l1.source(mu1)), &PathSpec::Below(self.n1.clone()))?;
        let b = l2.paths(Some(l2.source(mu2)), &PathSpec::Below(self.n2.clone()))?;
        let mut out = BTreeSet::new();
        for &nu in &a {
            for &nu2 in &b {
                out.insert(product_label(&Self::label(l1, mu1, nu), &Self::label(l2, mu2, nu2)));
            }
        }
        Ok(out)
    }

    /// `Θ ∘ ι̃_{(n1,n2)}`: a sum over `(α,β) ∈ s((μ1,μ2))(Λ1×Λ2)^{<(n1,n2)}`
    /// pushed through the product-delay identification.
    pub fn product_side(&self, mu1: Morph, mu2: Morph) -> Result<BTreeSet<String>> {
        let (l1, l2) = (self.l1, self.l2);
        let mu = Morph(mu1.0 * l2.len() as u32 + mu2.0);
        let n = self.n1.concat(&self.n2);
        let p = &self.prod;
        p.ensure_within_depth(&p.degree(mu).checked_add(&n.pred()?)?)?;
        let mut out = BTreeSet::new();
        for ab in p.paths(Some(p.source(mu)), &PathSpec::Below(n))? {
            let (alpha, beta) = unpair(ab, l2.len());
            out.insert(product_label(&Self::label(l1, mu1, alpha), &Self::label(l2, mu2, beta)));
        }
        Ok(out)
    }

    pub fn check(&self, mu1: Morph, mu2: Morph) -> Result<bool> {
        Ok(self.tensor_side(mu1, mu2)? == self.product_side(mu1, mu2)?)
    }

    /// Runs [`Self::check`] on every `(μ1, μ2)` with `d(μ1) ⊕ d(μ2) <= bound`.
    pub fn sweep(&self, bound: &Degree) -> Result<AxiomReport> {
        let mut rep = AxiomReport::new("prodgraph_generator_check");
        let (b1, b2) = bound.split_at(self.l1.rank());
        for mu1 in self.l1.morphisms().filter(|&m| self.l1.degree(m).le(&b1)) {
            for mu2 in self.l2.morphisms().filter(|&m| self.l2.degree(m).le(&b2)) {
                let ok = self.check(mu1, mu2)?;
                rep.expect(ok, "generator-sums", || {
                    vec![describe(self.l1, mu1), describe(self.l2, mu2)]
                });
            }
        }
        Ok(rep)
    }
}

/// Compares the two generator sums for `s_{(μ1,μ2)}`.
pub fn prodgraph_generator_check(
    l1: &TruncatedKGraph,
    l2: &TruncatedKGraph,
    n1: &Degree,
    n2: &Degree,
    sample: (Morph, Morph),
) -> Result<bool> {
    ProductGenerators::new(l1, l2, n1, n2)?.check(sample.0, sample.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{path_category, DirectedGraph};

    fn loop1(name: &str, depth: u32) -> TruncatedKGraph {
        let text = format!("vertex v\nedge {name} v v\n");
        path_category(&DirectedGraph::parse(&text).unwrap(), depth).unwrap()
    }

    #[test]
    fn loops_with_two_delay() {
        let (a, b) = (loop1("e", 3), loop1("f", 3));
        let one = Degree::from([2]);
        let rep = product_delay_compat_check(&a, &b, &one, &one, &Degree::from([2, 2])).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn unit_delays() {
        let (a, b) = (loop1("e", 2), loop1("f", 2));
        let one = Degree::from([1]);
        assert!(product_delay_compat_check(&a, &b, &one, &one, &Degree::from([2, 2])).unwrap().passed());
    }

    #[test]
    fn four_term_sum() {
        let (a, b) = (loop1("e", 3), loop1("f", 3));
        let n = Degree::from([2]);
        let pg = ProductGenerators::new(&a, &b, &n, &n).unwrap();
        let (e, f) = (a.lookup("e").unwrap(), b.lookup("f").unwrap());
        let sum = pg.tensor_side(e, f).unwrap();
        assert_eq!(sum.len(), 4);
        assert!(sum.contains("((e;v),(f;f))"));
        assert_eq!(sum, pg.product_side(e, f).unwrap());
        assert!(pg.sweep(&Degree::from([2, 2])).unwrap().passed());
    }

    #[test]
    fn vertices_sum_over_all_short_paths() {
        let (a, b) = (loop1("e", 3), loop1("f", 3));
        let n = Degree::from([3]);
        let v = a.lookup("v").unwrap();
        assert!(prodgraph_generator_check(&a, &b, &n, &n, (v, b.lookup("v").unwrap())).unwrap());
        let pg = ProductGenerators::new(&a, &b, &n, &n).unwrap();
        assert_eq!(pg.tensor_side(v, v).unwrap().len(), 9);
    }
}
