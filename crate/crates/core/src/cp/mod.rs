//! The weight matrices `κ_m` and `Δ_n`, window arithmetic, and exact
//! evaluation of the approximation defect against its bound.

mod compress;
mod schur;

pub use compress::{pn_qn_apply, pn_qn_check, window_projection};
pub use schur::{phi_decomposition_check, psd_check, schur_contraction_check, SchurReport};

use std::io::Write;

use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::degree::Degree;
use crate::error::{KGraphError, Result};

fn ceil_half(m: i64) -> i64 {
    (m + 1) / 2
}

/// `⌈3m/2⌉`.
pub fn ceil_three_halves(m: u32) -> u32 {
    (3 * m).div_ceil(2)
}

/// `⌈5m/2⌉`.
pub fn ceil_five_halves(m: u32) -> u32 {
    (5 * m).div_ceil(2)
}

/// `κ_m`: entries `min(i+1, j+1, m-i, m-j) / Z` with `Z = m/2 + 1` for even
/// `m` and `Z = ⌈m/2⌉ + 2` for odd `m`, zero outside `{0..m-1}²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaMatrix {
    m: u32,
    entries: Vec<Rational64>,
}

impl KappaMatrix {
    pub fn m(&self) -> u32 {
        self.m
    }

    /// `Z`, the normalization.
    pub fn denominator(m: u32) -> i64 {
        let m = m as i64;
        if m % 2 == 0 {
            m / 2 + 1
        } else {
            ceil_half(m) + 2
        }
    }

    /// Zero-extended evaluation.
    pub fn get(&self, i: i64, j: i64) -> Rational64 {
        let m = self.m as i64;
        if i < 0 || j < 0 || i >= m || j >= m {
            return Rational64::zero();
        }
        self.entries[(i * m + j) as usize]
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        let m = self.m as usize;
        nalgebra::DMatrix::from_fn(m, m, |i, j| self.get(i as i64, j as i64).to_f64().unwrap_or(f64::NAN))
    }

    /// Row-major exact entries.
    pub fn rows(&self) -> Vec<Vec<Rational64>> {
        let m = self.m as usize;
        self.entries.chunks(m).map(<[Rational64]>::to_vec).collect()
    }
}

pub fn kappa(m: u32) -> Result<KappaMatrix> {
    if m == 0 {
        return Err(KGraphError::InvalidArgument("m must be at least 1".into()));
    }
    let mm = m as i64;
    let z = KappaMatrix::denominator(m);
    let mut entries = Vec::with_capacity((m * m) as usize);
    for i in 0..mm {
        for j in 0..mm {
            let t = (i + 1).min(j + 1).min(mm - i).min(mm - j);
            entries.push(Rational64::new(t, z));
        }
    }
    Ok(KappaMatrix { m, entries })
}

/// Extremes of `κ_m(x,x) + κ_m(x+s,x+s)` over `x` with both points in range,
/// or `None` when `s >= m`.
pub fn window_sum_range(m: u32, shift: u32) -> Result<Option<(Rational64, Rational64)>> {
    let k = kappa(m)?;
    let (m, s) = (m as i64, shift as i64);
    let sums: Vec<Rational64> = (0..(m - s).max(0)).map(|x| k.get(x, x) + k.get(x + s, x + s)).collect();
    Ok(sums.iter().min().copied().zip(sums.iter().max().copied()))
}

/// `(⌈m/2⌉+1)/(⌈m/2⌉+2)`, the lower end of the window-sum bracket.
pub fn window_sum_floor(m: u32) -> Rational64 {
    let l = ceil_half(m as i64);
    Rational64::new(l + 1, l + 2)
}

/// `Δ_n(i1,i2,j1,j2) = ½(κ_{n1}(i1,j1) + κ_{n2}(i2,j2))`, each `κ` zero-extended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaTensor {
    n: (u32, u32),
    k1: KappaMatrix,
    k2: KappaMatrix,
}

impl DeltaTensor {
    pub fn n(&self) -> (u32, u32) {
        self.n
    }

    pub fn eval(&self, i: (i64, i64), j: (i64, i64)) -> Rational64 {
        (self.k1.get(i.0, j.0) + self.k2.get(i.1, j.1)) / 2
    }

    /// At a pair of degree offsets, which may be negative.
    pub fn at(&self, i: &[i64], j: &[i64]) -> Rational64 {
        self.eval((i[0], i[1]), (j[0], j[1]))
    }

    /// The `n1 n2 × n1 n2` matrix, index `i1 * n2 + i2`.
    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        let (n1, n2) = (self.n.0 as usize, self.n.1 as usize);
        let dim = n1 * n2;
        nalgebra::DMatrix::from_fn(dim, dim, |r, c| {
            let i = ((r / n2) as i64, (r % n2) as i64);
            let j = ((c / n2) as i64, (c % n2) as i64);
            self.eval(i, j).to_f64().unwrap_or(f64::NAN)
        })
    }
}

fn rank2(n: &Degree) -> Result<(u32, u32)> {
    if n.rank() != 2 {
        return Err(KGraphError::RankMismatch {
            expected: 2,
            found: n.rank(),
        });
    }
    if n.coords().iter().any(|&c| c == 0) {
        return Err(KGraphError::ZeroModulus(n.clone()));
    }
    Ok((n.get(0), n.get(1)))
}

pub fn delta(n: &Degree) -> Result<DeltaTensor> {
    let (n1, n2) = rank2(n)?;
    Ok(DeltaTensor {
        n: (n1, n2),
        k1: kappa(n1)?,
        k2: kappa(n2)?,
    })
}

/// `h_{n,μ}(p)` and `g_{n,μ}(p)` for `d(μ) = a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowPair {
    pub a: Degree,
    pub p: Degree,
    pub n: Degree,
    pub h: Vec<i64>,
    pub g: Vec<i64>,
}

impl WindowPair {
    /// `a + p + h - n`.
    pub fn first_offset(&self, base: &Degree) -> Vec<i64> {
        (0..self.n.rank())
            .map(|i| base.get(i) as i64 + self.p.get(i) as i64 + self.h[i] - self.n.get(i) as i64)
            .collect()
    }

    /// `a + p + g - ⌈3n/2⌉`.
    pub fn second_offset(&self, base: &Degree) -> Vec<i64> {
        (0..self.n.rank())
            .map(|i| base.get(i) as i64 + self.p.get(i) as i64 + self.g[i] - ceil_three_halves(self.n.get(i)) as i64)
            .collect()
    }
}

/// The unique `h, g ∈ H_n` with `n <= a+p+h < 2n` and
/// `⌈3n/2⌉ <= a+p+g < ⌈5n/2⌉`.
pub fn windows(a: &Degree, p: &Degree, n: &Degree) -> Result<WindowPair> {
    if a.rank() != n.rank() || p.rank() != n.rank() {
        return Err(KGraphError::RankMismatch {
            expected: n.rank(),
            found: if a.rank() != n.rank() { a.rank() } else { p.rank() },
        });
    }
    if !p.lt(n) {
        return Err(KGraphError::NotBelow {
            lhs: p.clone(),
            rhs: n.clone(),
        });
    }
    let mut h = Vec::with_capacity(n.rank());
    let mut g = Vec::with_capacity(n.rank());
    for i in 0..n.rank() {
        let s = a.get(i) as i64 + p.get(i) as i64;
        let m = n.get(i) as i64;
        let c = ceil_three_halves(n.get(i)) as i64;
        h.push(m - m * s.div_euclid(m));
        g.push(c - s + (s - c).rem_euclid(m));
    }
    Ok(WindowPair {
        a: a.clone(),
        p: p.clone(),
        n: n.clone(),
        h,
        g,
    })
}

/// `max_{p<n} |Δ_{n,1}(p) + Δ_{n,2}(p) - 1|` and its bound, exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectReport {
    pub a: Degree,
    pub b: Degree,
    pub n: Degree,
    pub defect: Rational64,
    /// A `p` attaining the maximum.
    pub argmax: Degree,
    pub bound: Rational64,
}

impl DefectReport {
    pub fn within_bound(&self) -> bool {
        self.defect <= self.bound
    }
}

/// `2(1 + |a1-b1| + |a2-b2|) / (2(min(⌈n1/2⌉, ⌈n2/2⌉) + 1))`.
pub fn defect_bound(a: &Degree, b: &Degree, n: &Degree) -> Result<Rational64> {
    let (n1, n2) = rank2(n)?;
    let diff: i64 = (0..2).map(|i| (a.get(i) as i64 - b.get(i) as i64).abs()).sum();
    let m = ceil_half(n1 as i64).min(ceil_half(n2 as i64));
    Ok(Rational64::new(2 * (1 + diff), 2 * (m + 1)))
}

pub fn defect(a: &Degree, b: &Degree, n: &Degree) -> Result<DefectReport> {
    let dn = delta(n)?;
    if a.rank() != 2 || b.rank() != 2 {
        return Err(KGraphError::RankMismatch {
            expected: 2,
            found: if a.rank() != 2 { a.rank() } else { b.rank() },
        });
    }
    let mut best = Rational64::zero();
    let mut argmax = Degree::zero(2);
    for p in n.pred()?.box_iter() {
        let w = windows(a, &p, n)?;
        let d1 = dn.at(&w.first_offset(a), &w.first_offset(b));
        let d2 = dn.at(&w.second_offset(a), &w.second_offset(b));
        let v = (d1 + d2 - 1).abs();
        if v > best {
            best = v;
            argmax = p;
        }
    }
    Ok(DefectReport {
        a: a.clone(),
        b: b.clone(),
        n: n.clone(),
        defect: best,
        argmax,
        bound: defect_bound(a, b, n)?,
    })
}

/// Decimal rendering with 12 significant digits, trailing zeros removed.
pub fn decimal12(x: Rational64) -> String {
    let v = x.to_f64().unwrap_or(f64::NAN);
    if v == 0.0 {
        return "0".to_string();
    }
    let digits = 11 - v.abs().log10().floor() as i32;
    let s = format!("{:.*}", digits.max(0) as usize, v);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub const SWEEP_CSV_HEADER: &str = "n1,n2,a1,a2,b1,b2,defect,bound,ok,defect_exact,bound_exact";

pub fn sweep(a: &Degree, b: &Degree, n_list: &[Degree]) -> Result<Vec<DefectReport>> {
    n_list.iter().map(|n| defect(a, b, n)).collect()
}

pub fn write_sweep_csv<W: Write>(out: &mut W, rows: &[DefectReport]) -> Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.n.get(0),
            r.n.get(1),
            r.a.get(0),
            r.a.get(1),
            r.b.get(0),
            r.b.get(1),
            decimal12(r.defect),
            decimal12(r.bound),
            r.within_bound(),
            r.defect,
            r.bound
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn kappa_four() {
        let k = kappa(4).unwrap();
        let want = [[1, 1, 1, 1], [1, 2, 2, 1], [1, 2, 2, 1], [1, 1, 1, 1]];
        for (i, row) in want.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_eq!(k.get(i as i64, j as i64), q(x, 3));
            }
        }
        assert_eq!(k.get(-1, 0), q(0, 1));
        assert_eq!(k.get(4, 4), q(0, 1));
    }

    #[test]
    fn kappa_small() {
        assert_eq!(kappa(2).unwrap().rows(), vec![vec![q(1, 2); 2]; 2]);
        assert_eq!(kappa(1).unwrap().rows(), vec![vec![q(1, 3)]]);
        assert!(kappa(0).is_err());
    }

    #[test]
    fn kappa_lipschitz_and_window_sums() {
        for m in 1..=24u32 {
            let k = kappa(m).unwrap();
            let mi = m as i64;
            let ch = ceil_half(mi);
            for i in 0..mi {
                for j in 0..mi {
                    assert!(k.get(i, j) >= k.get(i, i) - q((i - j).abs(), ch + 1), "m={m} i={i} j={j}");
                    assert_eq!(k.get(i, j), k.get(j, i));
                }
                assert!(k.get(i, i) <= q(1, 1));
            }
            let s = mi / 2;
            for x in 0..mi - s {
                let sum = k.get(x, x) + k.get(x + s, x + s);
                assert!(q(ch + 1, ch + 2) <= sum && sum <= q(1, 1), "m={m} x={x}");
            }
            let (lo, hi) = window_sum_range(m, m / 2).unwrap().unwrap();
            assert!(window_sum_floor(m) <= lo && hi <= q(1, 1));
        }
    }

    #[test]
    fn ceiling_shift_for_odd_m() {
        // With shift ⌈m/2⌉ the sum is (l+1)/(l+3) for m = 2l+1, below the bracket.
        let (lo, hi) = window_sum_range(5, 3).unwrap().unwrap();
        assert_eq!((lo, hi), (q(3, 5), q(3, 5)));
        assert!(lo < window_sum_floor(5));
        assert_eq!(window_sum_range(1, 1).unwrap(), None);
        let (lo, _) = window_sum_range(6, 3).unwrap().unwrap();
        assert_eq!(lo, q(1, 1));
    }

    #[test]
    fn delta_entries() {
        let d = delta(&Degree::from([4, 4])).unwrap();
        assert_eq!(d.eval((0, 0), (0, 0)), q(1, 3));
        let d1 = delta(&Degree::from([1, 1])).unwrap();
        assert_eq!(d1.eval((0, 0), (0, 0)), kappa(1).unwrap().get(0, 0));
        let d = delta(&Degree::from([3, 4])).unwrap();
        for i in 0..12i64 {
            for j in 0..12i64 {
                let (a, b) = ((i / 4, i % 4), (j / 4, j % 4));
                assert_eq!(d.eval(a, b), d.eval(b, a));
            }
        }
    }

    #[test]
    fn window_examples() {
        let one = |x: u32| Degree::from([x]);
        let w = windows(&one(2), &one(1), &one(4)).unwrap();
        assert_eq!((w.h[0], w.g[0]), (4, 4));
        let w = windows(&one(0), &one(0), &one(4)).unwrap();
        assert_eq!((w.h[0], w.g[0]), (4, 8));
        let (x, y) = (w.first_offset(&one(0))[0], w.second_offset(&one(0))[0]);
        assert_eq!((x, y, x - y), (0, 2, -2));
        let w = windows(&one(0), &one(0), &one(1)).unwrap();
        assert_eq!((w.h[0], w.g[0]), (1, 2));
        assert!(windows(&one(0), &one(4), &one(4)).is_err());
    }

    #[test]
    fn window_invariants_exhaustive() {
        for m in 1..=12u32 {
            let c3 = ceil_three_halves(m) as i64;
            let c5 = ceil_five_halves(m) as i64;
            for a in 0..3 * m {
                for p in 0..m {
                    let w = windows(&Degree::from([a]), &Degree::from([p]), &Degree::from([m])).unwrap();
                    let s = (a + p) as i64;
                    let mi = m as i64;
                    assert!(mi <= s + w.h[0] && s + w.h[0] < 2 * mi);
                    assert!(c3 <= s + w.g[0] && s + w.g[0] < c5);
                    assert_eq!(w.h[0].rem_euclid(mi), 0);
                    assert_eq!(w.g[0].rem_euclid(mi), 0);
                    let diff = (s + w.h[0] - mi) - (s + w.g[0] - c3);
                    assert!(diff == ceil_half(mi) || diff == -(mi / 2), "m={m} a={a} p={p}");
                }
            }
        }
    }

    #[test]
    fn defect_examples() {
        let z = Degree::from([0, 0]);
        assert_eq!(defect(&z, &z, &Degree::from([4, 4])).unwrap().defect, q(0, 1));
        let r = defect(&Degree::from([1, 0]), &z, &Degree::from([4, 4])).unwrap();
        assert_eq!(r.bound, q(2, 3));
        assert!(r.within_bound());
        let r = defect(&Degree::from([2, 1]), &z, &Degree::from([40, 40])).unwrap();
        assert_eq!(r.bound, q(4, 21));
        assert!(r.within_bound());
        for m in 1..=20u32 {
            let n = Degree::from([2 * m, 2 * m]);
            for a in [[0, 0], [3, 1], [5, 7]] {
                let a = Degree::from(a);
                assert_eq!(defect(&a, &a, &n).unwrap().defect, q(0, 1), "n={n} a={a}");
            }
        }
    }

    #[test]
    fn csv_rows() {
        let z = Degree::from([0, 0]);
        let rows = sweep(&z, &z, &[]).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &rows).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{SWEEP_CSV_HEADER}\n"));
        let rows = sweep(&Degree::from([2, 1]), &z, &[Degree::from([40, 40])]).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let line = text.lines().nth(1).unwrap();
        assert!(line.starts_with("40,40,2,1,0,0,"), "{line}");
        assert!(line.contains(",0.190476190476,true,"), "{line}");
        assert!(line.ends_with(",4/21"), "{line}");
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal12(q(1, 3)), "0.333333333333");
        assert_eq!(decimal12(q(2, 3)), "0.666666666667");
        assert_eq!(decimal12(q(1, 1)), "1");
        assert_eq!(decimal12(q(0, 1)), "0");
        assert_eq!(decimal12(q(-5, 4)), "-1.25");
    }
}
