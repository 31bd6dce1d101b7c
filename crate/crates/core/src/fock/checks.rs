//! Exact verification of Toeplitz–Cuntz–Krieger relations and the derived
//! operator identities on the safe block of a truncated Fock space.

use crate::degree::Degree;
use crate::delay::{bracket, delay, DelayedGraph};
use crate::error::{KGraphError, Result};
use crate::graph::{Morph, TruncatedKGraph};
use crate::report::{describe, AxiomReport};

use super::{signed, word, FockSpace, SparseOperator};

/// Tallies what happened outside the asserted region of each check.
#[derive(Default)]
struct Tally {
    boundary: usize,
    vacuous: usize,
    beyond_depth: usize,
}

impl Tally {
    fn finish(self, rep: &mut AxiomReport) {
        if self.boundary > 0 {
            rep.note(format!("{} boundary mismatches outside the safe block", self.boundary));
        }
        if self.vacuous > 0 {
            rep.note(format!("{} identities with an empty safe block", self.vacuous));
        }
        if self.beyond_depth > 0 {
            rep.note(format!("{} instances need paths beyond the truncation and were skipped", self.beyond_depth));
        }
    }
}

fn assert_same(
    rep: &mut AxiomReport,
    tally: &mut Tally,
    space: &FockSpace<'_>,
    lhs: &SparseOperator,
    rhs: &SparseOperator,
    axiom: &str,
    witness: impl FnOnce() -> Vec<String>,
) {
    let c = space.compare(lhs, rhs);
    tally.boundary += c.boundary_mismatches;
    if c.safe_columns == 0 {
        tally.vacuous += 1;
    }
    let col = c.first_mismatch;
    rep.expect(c.holds(), axiom, || {
        let mut w = witness();
        if let Some(tau) = col {
            w.push(format!("column {}", describe(space.graph(), tau)));
        }
        w
    });
}

/// Lazily built operators indexed by morphism id.
struct Cache<'f> {
    ops: Vec<Option<SparseOperator>>,
    limit: Degree,
    family: &'f mut dyn FnMut(Morph) -> Result<SparseOperator>,
}

impl Cache<'_> {
    fn get(&mut self, g: &TruncatedKGraph, m: Morph) -> Result<Option<&SparseOperator>> {
        if !g.degree(m).le(&self.limit) {
            return Ok(None);
        }
        if self.ops[m.index()].is_none() {
            self.ops[m.index()] = Some((self.family)(m)?);
        }
        Ok(self.ops[m.index()].as_ref())
    }

    fn take(&mut self, g: &TruncatedKGraph, m: Morph) -> Result<Option<SparseOperator>> {
        Ok(self.get(g, m)?.cloned())
    }
}

/// (TCK1)–(TCK4) and the derived projection relation for the creation
/// operators of `F`, with generators of degree at most `margin`.
pub fn tck_check(space: &FockSpace<'_>, margin: &Degree) -> Result<AxiomReport> {
    let g = space.graph();
    let mut family = |m: Morph| space.creation(m);
    tck_check_family(space, g, g.depth(), margin, "tck_check", &mut family)
}

/// (TCK1)–(TCK4) and the derived projection relation for an arbitrary family
/// `{family(λ)}` indexed by `index`, acting on `space`. Members are available
/// for `d(λ) <= family_depth`; generators range over `d(λ) <= margin`.
pub fn tck_check_family(
    space: &FockSpace<'_>,
    index: &TruncatedKGraph,
    family_depth: &Degree,
    margin: &Degree,
    check: &str,
    family: &mut dyn FnMut(Morph) -> Result<SparseOperator>,
) -> Result<AxiomReport> {
    index.ensure_within_depth(margin)?;
    if !margin.le(family_depth) {
        return Err(KGraphError::DepthExceeded {
            needed: margin.clone(),
            available: family_depth.clone(),
        });
    }
    let mut rep = AxiomReport::new(check);
    let mut tally = Tally::default();
    let mut cache = Cache {
        ops: vec![None; index.len()],
        limit: family_depth.clone(),
        family,
    };
    let dim = space.dim();
    let gens: Vec<Morph> = index.morphisms().filter(|&m| index.degree(m).le(margin)).collect();
    let d = |m: Morph| signed(index.degree(m));

    // (TCK1)
    for &v in index.vertices() {
        let tv = cache.take(index, v)?.expect("vertices are within depth");
        assert_same(&mut rep, &mut tally, space, &tv.adjoint(), &tv, "TCK1-selfadjoint", || {
            vec![describe(index, v)]
        });
        for &w in index.vertices() {
            let tw = cache.take(index, w)?.expect("vertices are within depth");
            let rhs = if v == w { tv.clone() } else { SparseOperator::zero(dim, &d(v)) };
            assert_same(&mut rep, &mut tally, space, &(&tv * &tw), &rhs, "TCK1", || {
                vec![describe(index, v), describe(index, w)]
            });
        }
    }

    for &lam in &gens {
        let tl = cache.take(index, lam)?.expect("generator within depth");
        // (TCK3)
        let ts = cache.take(index, index.source(lam))?.expect("vertex");
        assert_same(&mut rep, &mut tally, space, &(&tl.adjoint() * &tl), &ts, "TCK3", || {
            vec![describe(index, lam)]
        });
        for &mu in &gens {
            let tm = cache.take(index, mu)?.expect("generator within depth");
            // (TCK2)
            let prod = &tl * &tm;
            if index.source(lam) != index.range(mu) {
                let zero = SparseOperator::zero(dim, prod.net());
                assert_same(&mut rep, &mut tally, space, &prod, &zero, "TCK2", || {
                    vec![describe(index, lam), describe(index, mu)]
                });
            } else {
                match index.compose(lam, mu) {
                    Some(lm) => match cache.take(index, lm)? {
                        Some(tlm) => assert_same(&mut rep, &mut tally, space, &prod, &tlm, "TCK2", || {
                            vec![describe(index, lam), describe(index, mu)]
                        }),
                        None => tally.beyond_depth += 1,
                    },
                    None => tally.beyond_depth += 1,
                }
            }
            // (TCK4)
            let top = index.degree(lam).join(index.degree(mu))?;
            if !top.le(index.depth()) || !top.le(family_depth) {
                tally.beyond_depth += 1;
                continue;
            }
            let lhs = &tl.adjoint() * &tm;
            let pairs = index.lambda_min(lam, mu)?.pairs;
            if lam == mu {
                let s = index.source(lam);
                rep.expect(pairs == vec![(s, s)], "TCK4-diagonal", || vec![describe(index, lam)]);
            }
            let mut rhs = SparseOperator::zero(dim, lhs.net());
            for (alpha, beta) in pairs {
                let ta = cache.take(index, alpha)?.expect("within join");
                let tb = cache.take(index, beta)?.expect("within join");
                rhs = &rhs + &(&ta * &tb.adjoint());
            }
            assert_same(&mut rep, &mut tally, space, &lhs, &rhs, "TCK4", || {
                vec![describe(index, lam), describe(index, mu)]
            });
        }
    }

    // Σ_{λ ∈ vΛ^n} t_λ t_λ* is a projection below t_v.
    for &v in index.vertices() {
        let tv = cache.take(index, v)?.expect("vertex");
        for n in margin.box_iter() {
            let terms: Vec<Morph> = index.paths_of_degree_from(v, &n).collect();
            let mut projs = Vec::with_capacity(terms.len());
            for &l in &terms {
                let t = cache.take(index, l)?.expect("within margin");
                projs.push(&t * &t.adjoint());
            }
            let mut p = SparseOperator::zero(dim, &vec![0; n.rank()]);
            for q in &projs {
                p = &p + q;
            }
            let w = || vec![describe(index, v), format!("n={n}")];
            assert_same(&mut rep, &mut tally, space, &(&p * &p), &p, "TCK5-idempotent", w);
            assert_same(&mut rep, &mut tally, space, &p.adjoint(), &p, "TCK5-selfadjoint", w);
            assert_same(&mut rep, &mut tally, space, &(&p * &tv), &p, "TCK5-below", w);
            for (i, a) in projs.iter().enumerate() {
                for (j, b) in projs.iter().enumerate().skip(i + 1) {
                    let zero = SparseOperator::zero(dim, a.net());
                    assert_same(&mut rep, &mut tally, space, &(a * b), &zero, "TCK5-orthogonal", || {
                        vec![describe(index, terms[i]), describe(index, terms[j])]
                    });
                }
            }
        }
    }
    tally.finish(&mut rep);
    Ok(rep)
}

/// A formal sum of generators of a delayed graph, e.g. `ι_n(t_μ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalGeneratorSum {
    /// Realized morphism and its label, in id order.
    pub terms: Vec<(Morph, String)>,
    pub degree: Degree,
}

impl FormalGeneratorSum {
    pub fn labels(&self) -> Vec<&str> {
        self.terms.iter().map(|(_, l)| l.as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_operator(&self, space: &FockSpace<'_>) -> Result<SparseOperator> {
        let ids: Vec<Morph> = self.terms.iter().map(|&(m, _)| m).collect();
        space.creation_sum(&ids, &self.degree)
    }
}

/// `ι_n(t_μ) = Σ_{λ' ∈ s(μ)Λ^{<n}} t_{(μ,λ')}`.
pub fn iota_image(dg: &DelayedGraph<'_>, mu: Morph) -> Result<FormalGeneratorSum> {
    let base = dg.base();
    base.check(mu)?;
    dg.realized().ensure_within_depth(base.degree(mu))?;
    let mut terms = Vec::new();
    for l2 in dg.delays_at(base.source(mu)) {
        let id = dg.id_of(mu, l2).expect("within realized depth");
        terms.push((id, dg.realized().label(id).to_string()));
    }
    Ok(FormalGeneratorSum {
        terms,
        degree: base.degree(mu).clone(),
    })
}

/// (TCK1)–(TCK4) for `{ι_n(t_μ)}` on the Fock space of `Λ(n)` at depth `D`.
pub fn iota_tck_check(base: &TruncatedKGraph, n: &Degree, depth: &Degree, margin: &Degree) -> Result<AxiomReport> {
    let dg = delay(base, n, depth)?;
    let space = FockSpace::new(dg.realized());
    let mut family = |m: Morph| iota_image(&dg, m)?.to_operator(&space);
    tck_check_family(&space, base, depth, margin, "iota_tck_check", &mut family)
}

/// Matrix units `T_{(μ,s(μ))}T*_{(ν,s(ν))}` for `μ, ν ∈ Λ^{[p, p+n)}` with a
/// common source, on the Fock space of `Λ(n)` at depth `D`.
pub fn gamma_matrix_unit_check(base: &TruncatedKGraph, n: &Degree, p: &Degree, depth: &Degree) -> Result<AxiomReport> {
    let top = p.checked_add(&n.pred()?)?;
    if !top.le(depth) {
        return Err(KGraphError::DepthExceeded {
            needed: top,
            available: depth.clone(),
        });
    }
    let dg = delay(base, n, depth)?;
    let g = dg.realized();
    let space = FockSpace::new(g);
    let mut rep = AxiomReport::new("gamma_matrix_unit_check");
    let mut tally = Tally::default();
    let window: Vec<Morph> = base
        .morphisms()
        .filter(|&m| p.le(base.degree(m)) && base.degree(m).lt(&p.add(n)))
        .collect();
    let unit_gen: Vec<Morph> = window
        .iter()
        .map(|&m| dg.id_of(m, base.source(m)).expect("within depth"))
        .collect();
    let t: Vec<SparseOperator> = unit_gen.iter().map(|&m| space.creation(m)).collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..window.len())
        .flat_map(|i| (0..window.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| base.source(window[i]) == base.source(window[j]))
        .collect();
    let unit = |i: usize, j: usize| &t[i] * &t[j].adjoint();
    let w2 = |i: usize, j: usize| vec![describe(base, window[i]), describe(base, window[j])];

    for &(i, j) in &pairs {
        let e = unit(i, j);
        rep.expect(!e.is_zero(), "nonzero", || w2(i, j));
        assert_same(&mut rep, &mut tally, &space, &e.adjoint(), &unit(j, i), "adjoint", || w2(i, j));
        // Λ(n)^min((ν,s(ν)),(μ,s(μ))) is {(s, s)} when μ = ν and empty otherwise.
        let min = g.lambda_min(unit_gen[j], unit_gen[i])?.pairs;
        let want = if i == j {
            let s = dg.vertex_for(base.source(window[i])).expect("vertex");
            vec![(s, s)]
        } else {
            Vec::new()
        };
        rep.expect(min == want, "min-singleton", || w2(i, j));
        for &(k, l) in &pairs {
            let lhs = &e * &unit(k, l);
            let rhs = if j == k { unit(i, l) } else { SparseOperator::zero(space.dim(), lhs.net()) };
            assert_same(&mut rep, &mut tally, &space, &lhs, &rhs, "matrix-unit-product", || {
                let mut w = w2(i, j);
                w.extend(w2(k, l));
                w
            });
        }
    }
    rep.note(format!("{} paths in the window, {} matrix units", window.len(), pairs.len()));
    tally.finish(&mut rep);
    Ok(rep)
}

/// `ι_n(t_μ)T_{(s(μ),s(μ))} = T_{(μ,s(μ))} = T_{(r(μ),[μ])}ι_n(t_μ)`,
/// `T_{(μτ,s)}T*_{(ντ,s)} = ι_n(t_μ)ι_n(t_τt_τ*)T_{(r(τ),[τ])}ι_n(t_ν*)` and
/// `T_{(μ,s(μ))}T*_{(μ,s(μ))} = ι_n(t_μt_μ*)T_{(r(μ),[μ])}`, for generators of
/// degree at most `margin`.
pub fn equiv_exprs_check(base: &TruncatedKGraph, n: &Degree, depth: &Degree, margin: &Degree) -> Result<AxiomReport> {
    if !margin.le(depth) {
        return Err(KGraphError::DepthExceeded {
            needed: margin.clone(),
            available: depth.clone(),
        });
    }
    let dg = delay(base, n, depth)?;
    let space = FockSpace::new(dg.realized());
    let mut rep = AxiomReport::new("equiv_exprs_check");
    let mut tally = Tally::default();
    let mut iota: Vec<Option<SparseOperator>> = vec![None; base.len()];
    let mut unit: Vec<Option<SparseOperator>> = vec![None; base.len()];
    let mut get_iota = |m: Morph| -> Result<SparseOperator> {
        if iota[m.index()].is_none() {
            iota[m.index()] = Some(iota_image(&dg, m)?.to_operator(&space)?);
        }
        Ok(iota[m.index()].clone().unwrap())
    };
    let mut get_unit = |m: Morph| -> Result<SparseOperator> {
        if unit[m.index()].is_none() {
            let id = dg.id_of(m, base.source(m)).ok_or(KGraphError::NotStored(m.0))?;
            unit[m.index()] = Some(space.creation(id)?);
        }
        Ok(unit[m.index()].clone().unwrap())
    };
    let vert = |x: Morph| -> Result<SparseOperator> { space.creation(dg.vertex_for(x).expect("x is short")) };
    let gens: Vec<Morph> = base.morphisms().filter(|&m| base.degree(m).le(margin)).collect();

    for &mu in &gens {
        let im = get_iota(mu)?;
        let um = get_unit(mu)?;
        let br = vert(bracket(base, mu, n)?)?;
        let w = || vec![describe(base, mu)];
        assert_same(&mut rep, &mut tally, &space, &(&im * &vert(base.source(mu))?), &um, "iota-right", w);
        assert_same(&mut rep, &mut tally, &space, &(&br * &im), &um, "iota-left", w);
        assert_same(
            &mut rep,
            &mut tally,
            &space,
            &(&um * &um.adjoint()),
            &word(&[&im, &im.adjoint(), &br])?,
            "range-projection",
            w,
        );
    }
    for &mu in &gens {
        for &nu in gens.iter().filter(|&&nu| base.source(nu) == base.source(mu)) {
            for &tau in base.from_range(base.source(mu)) {
                if !base.degree(tau).le(margin) {
                    continue;
                }
                let (Some(mt), Some(nt)) = (base.compose(mu, tau), base.compose(nu, tau)) else {
                    tally.beyond_depth += 1;
                    continue;
                };
                if !base.degree(mt).le(depth) || !base.degree(nt).le(depth) {
                    tally.beyond_depth += 1;
                    continue;
                }
                let lhs = &get_unit(mt)? * &get_unit(nt)?.adjoint();
                let it = get_iota(tau)?;
                let rhs = word(&[
                    &get_iota(mu)?,
                    &it,
                    &it.adjoint(),
                    &vert(bracket(base, tau, n)?)?,
                    &get_iota(nu)?.adjoint(),
                ])?;
                assert_same(&mut rep, &mut tally, &space, &lhs, &rhs, "conjugated-units", || {
                    vec![describe(base, mu), describe(base, nu), describe(base, tau)]
                });
            }
        }
    }
    tally.finish(&mut rep);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use num_rational::Rational64;

    use super::*;
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
    fn loop_tck() {
        let g = loop1(6);
        let rep = tck_check(&FockSpace::new(&g), &Degree::from([2])).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn n2_tck() {
        let g = free2([4, 4]);
        let rep = tck_check(&FockSpace::new(&g), &Degree::from([2, 2])).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn corrupted_family_breaks_tck3() {
        let g = loop1(6);
        let space = FockSpace::new(&g);
        let e = g.lookup("e").unwrap();
        let mut family = |m: Morph| {
            let op = space.creation(m)?;
            Ok(if m == e { op.scale(Rational64::from_integer(2)) } else { op })
        };
        let rep = tck_check_family(&space, &g, g.depth(), &Degree::from([1]), "tck_check", &mut family).unwrap();
        assert!(!rep.passed());
        assert!(rep.violations.iter().any(|v| v.axiom == "TCK3" && v.witness[0] == "e@(1,)"));
    }

    #[test]
    fn iota_on_loop() {
        let base = loop1(6);
        let dg = delay(&base, &Degree::from([3]), &Degree::from([4])).unwrap();
        let s = iota_image(&dg, base.lookup("e").unwrap()).unwrap();
        assert_eq!(s.labels(), ["(e;v)", "(e;e)", "(e;e.e)"]);
        let v = iota_image(&dg, base.lookup("v").unwrap()).unwrap();
        assert_eq!(v.len(), 3);
        let rep = iota_tck_check(&base, &Degree::from([3]), &Degree::from([4]), &Degree::from([2])).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn iota_on_n2() {
        let base = free2([4, 4]);
        let rep = iota_tck_check(&base, &Degree::from([2, 2]), &Degree::from([3, 3]), &Degree::from([1, 1])).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn gamma_units() {
        let base = loop1(8);
        let rep = gamma_matrix_unit_check(&base, &Degree::from([3]), &Degree::from([3]), &Degree::from([6])).unwrap();
        assert!(rep.passed(), "{rep}");
        let base = free2([4, 4]);
        let rep = gamma_matrix_unit_check(&base, &Degree::from([2, 2]), &Degree::from([1, 1]), &Degree::from([3, 3]))
            .unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn equiv_exprs() {
        let base = loop1(7);
        let rep = equiv_exprs_check(&base, &Degree::from([3]), &Degree::from([5]), &Degree::from([2])).unwrap();
        assert!(rep.passed(), "{rep}");
        let base = free2([4, 4]);
        let rep = equiv_exprs_check(&base, &Degree::from([2, 2]), &Degree::from([3, 3]), &Degree::from([1, 1])).unwrap();
        assert!(rep.passed(), "{rep}");
    }
}
