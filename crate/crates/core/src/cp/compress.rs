//! `P_n` and `Q_n` on elementary operators `t_μ t_ν*`.

use num_rational::Rational64;

use crate::degree::Degree;
use crate::error::{KGraphError, Result};
use crate::fock::{FockSpace, SparseOperator};
use crate::graph::Morph;
use crate::report::{describe, AxiomReport};

use super::{ceil_five_halves, ceil_three_halves, delta, DeltaTensor};

fn window_lo_hi(n: &Degree, second: bool) -> (Degree, Degree) {
    if second {
        (
            Degree::new(n.coords().iter().map(|&c| ceil_three_halves(c)).collect()),
            Degree::new(n.coords().iter().map(|&c| ceil_five_halves(c)).collect()),
        )
    } else {
        (n.clone(), n.add(n))
    }
}

fn in_window(d: &Degree, lo: &Degree, hi: &Degree) -> bool {
    lo.le(d) && d.lt(hi)
}

fn offset(d: &Degree, lo: &Degree) -> Vec<i64> {
    (0..d.rank()).map(|i| d.get(i) as i64 - lo.get(i) as i64).collect()
}

/// `R^q_p`: the projection onto `span{δ_λ : p <= d(λ) < q}`.
pub fn window_projection(space: &FockSpace<'_>, p: &Degree, q: &Degree) -> SparseOperator {
    let g = space.graph();
    let mut op = SparseOperator::zero(space.dim(), &vec![0; g.rank()]);
    for m in g.morphisms() {
        if in_window(g.degree(m), p, q) {
            op.set(m.index(), m.index(), Rational64::from_integer(1));
        }
    }
    op
}

/// Path (i): `M ∘ (R a R)` for the window `[lo, hi)`.
fn direct(space: &FockSpace<'_>, dn: &DeltaTensor, a: &SparseOperator, lo: &Degree, hi: &Degree) -> Result<SparseOperator> {
    let g = space.graph();
    let r = window_projection(space, lo, hi);
    let compressed = &(&r * a) * &r;
    let mut out = SparseOperator::zero(space.dim(), a.net());
    for (row, col, v) in compressed.entries() {
        let (x, y) = (Morph(row as u32), Morph(col as u32));
        let w = dn.at(&offset(g.degree(x), lo), &offset(g.degree(y), lo));
        out.set(row, col, v * w);
    }
    Ok(out)
}

/// Path (ii): `Σ_{τ ∈ s(μ)Λ, μτ, ντ in window} Δ_n(d(μτ)-lo, d(ντ)-lo) θ_{μτ,ντ}`.
fn closed(
    space: &FockSpace<'_>,
    dn: &DeltaTensor,
    mu: Morph,
    nu: Morph,
    net: &[i64],
    lo: &Degree,
    hi: &Degree,
) -> Result<SparseOperator> {
    let g = space.graph();
    let mut out = SparseOperator::zero(space.dim(), net);
    for &tau in g.from_range(g.source(mu)) {
        let (Some(mt), Some(nt)) = (g.compose(mu, tau), g.compose(nu, tau)) else {
            continue;
        };
        let (dm, dv) = (g.degree(mt), g.degree(nt));
        if in_window(dm, lo, hi) && in_window(dv, lo, hi) {
            let w = dn.at(&offset(dm, lo), &offset(dv, lo));
            let cur = out.get(mt.index(), nt.index());
            out.set(mt.index(), nt.index(), cur + w);
        }
    }
    Ok(out)
}

fn prepare(space: &FockSpace<'_>, n: &Degree, mu: Morph, nu: Morph) -> Result<(DeltaTensor, SparseOperator)> {
    let g = space.graph();
    g.check(mu)?;
    g.check(nu)?;
    if g.source(mu) != g.source(nu) {
        return Err(KGraphError::InvalidArgument(format!(
            "s({}) != s({})",
            g.label(mu),
            g.label(nu)
        )));
    }
    let dn = delta(n)?;
    let top = window_lo_hi(n, true).1.pred()?;
    let reach = g.degree(mu).join(g.degree(nu))?;
    g.ensure_within_depth(&top.checked_add(&reach)?.checked_add(&Degree::splat(2, 1))?)?;
    let a = &space.creation(mu)? * &space.creation(nu)?.adjoint();
    Ok((dn, a))
}

/// `(P_n(t_μ t_ν*), Q_n(t_μ t_ν*))` by compression and Schur weighting.
pub fn pn_qn_apply(space: &FockSpace<'_>, n: &Degree, mu: Morph, nu: Morph) -> Result<(SparseOperator, SparseOperator)> {
    let (dn, a) = prepare(space, n, mu, nu)?;
    let (lo1, hi1) = window_lo_hi(n, false);
    let (lo2, hi2) = window_lo_hi(n, true);
    Ok((direct(space, &dn, &a, &lo1, &hi1)?, direct(space, &dn, &a, &lo2, &hi2)?))
}

/// Both evaluations of `P_n` and `Q_n` on every `t_μ t_ν*` with `s(μ) = s(ν)`
/// and `d(μ), d(ν) <= bound`.
pub fn pn_qn_check(space: &FockSpace<'_>, n: &Degree, bound: &Degree) -> Result<AxiomReport> {
    let g = space.graph();
    let mut rep = AxiomReport::new("pn_qn_check");
    let small: Vec<Morph> = g.morphisms().filter(|&m| g.degree(m).le(bound)).collect();
    let mut nonzero = 0usize;
    for &mu in &small {
        for &nu in &small {
            if g.source(mu) != g.source(nu) {
                continue;
            }
            let (dn, a) = prepare(space, n, mu, nu)?;
            for (name, second) in [("P_n", false), ("Q_n", true)] {
                let (lo, hi) = window_lo_hi(n, second);
                let x = direct(space, &dn, &a, &lo, &hi)?;
                let y = closed(space, &dn, mu, nu, a.net(), &lo, &hi)?;
                nonzero += usize::from(!x.is_zero());
                rep.expect(x.entries().eq(y.entries()), name, || vec![describe(g, mu), describe(g, nu)]);
            }
        }
    }
    rep.note(format!("{nonzero} nonzero images"));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skeleton::{build_2graph, Skeleton2};

    fn n2(depth: u32) -> crate::graph::TruncatedKGraph {
        let sk = Skeleton2::parse("vertex v\nblue f v v\nred g v v\nsquare f g g f\n").unwrap();
        build_2graph(&sk, &Degree::from([depth, depth])).unwrap()
    }

    #[test]
    fn vertex_is_diagonal() {
        let g = n2(6);
        let f = FockSpace::new(&g);
        let n = Degree::from([2, 2]);
        let v = g.lookup("v").unwrap();
        let (p, q) = pn_qn_apply(&f, &n, v, v).unwrap();
        let dn = delta(&n).unwrap();
        for (r, c, w) in p.entries() {
            assert_eq!(r, c);
            let d = g.degree(Morph(r as u32));
            assert!(in_window(d, &n, &Degree::from([4, 4])));
            assert_eq!(w, dn.at(&offset(d, &n), &offset(d, &n)));
        }
        assert_eq!(p.nnz(), 4);
        assert_eq!(q.nnz(), 4);
    }

    #[test]
    fn agreement_on_commuting_loops() {
        let g = n2(6);
        let f = FockSpace::new(&g);
        let rep = pn_qn_check(&f, &Degree::from([2, 2]), &Degree::from([1, 1])).unwrap();
        assert!(rep.passed(), "{rep}");
        let bl = g.lookup("f").unwrap();
        let (p, _) = pn_qn_apply(&f, &Degree::from([2, 2]), bl, bl).unwrap();
        assert!(!p.is_zero());
    }

    #[test]
    fn large_degree_gives_zero() {
        let g = n2(8);
        let f = FockSpace::new(&g);
        let mu = g.paths(Some(g.lookup("v").unwrap()), &crate::graph::PathSpec::Exact(Degree::from([3, 0]))).unwrap()[0];
        let (p, _) = pn_qn_apply(&f, &Degree::from([1, 1]), mu, mu).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn shallow_depth_is_refused() {
        let g = n2(4);
        let f = FockSpace::new(&g);
        let v = g.lookup("v").unwrap();
        assert!(matches!(
            pn_qn_apply(&f, &Degree::from([2, 2]), v, v),
            Err(KGraphError::DepthExceeded { .. })
        ));
    }
}
