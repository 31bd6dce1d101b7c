//! Schur multipliers: positivity, contractivity on random samples, and the
//! decomposition of `M^{n,1}` into conjugations by spectral projections.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::degree::Degree;
use crate::error::{KGraphError, Result};
use crate::report::AxiomReport;

use super::delta;

const PSD_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-10;

/// Positive semidefiniteness via the symmetric eigendecomposition.
pub fn psd_check(m: &DMatrix<f64>) -> Result<bool> {
    if !m.is_square() {
        return Err(KGraphError::NotSymmetric);
    }
    let n = m.nrows();
    for i in 0..n {
        for j in i + 1..n {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * (1.0 + m[(i, j)].abs()) {
                return Err(KGraphError::NotSymmetric);
            }
        }
    }
    if n == 0 {
        return Ok(true);
    }
    let eig = m.clone().symmetric_eigen();
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(min >= -PSD_TOL)
}

fn spectral_norm(a: &DMatrix<Complex64>) -> f64 {
    a.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

/// Largest observed `‖M∘A‖ / ‖A‖` and whether it stayed within tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct SchurReport {
    pub trials: usize,
    pub worst_ratio: f64,
    pub worst_trial: Option<usize>,
    pub passed: bool,
}

/// `‖M∘A‖ <= ‖A‖(1 + 1e-10)` for `trials` random complex `A`.
pub fn schur_contraction_check(m: &DMatrix<f64>, trials: usize, seed: u64) -> Result<SchurReport> {
    if !m.is_square() {
        return Err(KGraphError::NotSymmetric);
    }
    let n = m.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut worst_trial = None;
    let mut passed = true;
    for t in 0..trials {
        let a = DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let ma = DMatrix::from_fn(n, n, |i, j| a[(i, j)] * m[(i, j)]);
        let na = spectral_norm(&a);
        if na == 0.0 {
            continue;
        }
        let ratio = spectral_norm(&ma) / na;
        if ratio > worst {
            worst = ratio;
            worst_trial = Some(t);
        }
        passed &= ratio <= 1.0 + NORM_TOL;
    }
    Ok(SchurReport {
        trials,
        worst_ratio: worst,
        worst_trial,
        passed,
    })
}

/// `Φ^{i,j}` on the grid `[n, 2n)`: `|d_i - (3n_i - 1)/2| < j`, compared as
/// `|2 d_i - 3 n_i + 1| < 2j`.
fn in_phi(d: u32, ni: u32, j: u32) -> bool {
    (2 * d as i64 - 3 * ni as i64 + 1).abs() < 2 * j as i64
}

/// For even `n`, Schur multiplication by `M^{n,1}` on the degree grid
/// `[n,2n)` equals `½(Φ¹ + Φ²)` with
/// `Φ^i(a) = Σ_{j=1}^{n_i/2} (n_i/2 + 1)^{-1} Φ^{i,j} a Φ^{i,j}`.
///
/// The maps are applied to a seeded integer matrix and to every matrix unit;
/// both comparisons are exact.
pub fn phi_decomposition_check(n: &Degree, seed: u64) -> Result<AxiomReport> {
    let dn = delta(n)?;
    let (n1, n2) = dn.n();
    if n1 % 2 != 0 || n2 % 2 != 0 {
        return Err(KGraphError::InvalidArgument(format!("n = {n} must have even coordinates")));
    }
    let grid: Vec<(u32, u32)> = (n1..2 * n1).flat_map(|x| (n2..2 * n2).map(move |y| (x, y))).collect();
    let dim = grid.len();
    let weight = |(x1, x2): (u32, u32), (y1, y2): (u32, u32)| {
        dn.eval(
            (x1 as i64 - n1 as i64, x2 as i64 - n2 as i64),
            (y1 as i64 - n1 as i64, y2 as i64 - n2 as i64),
        )
    };

    // Φ applied to a matrix with exact entries, via the diagonal projections.
    let phi = |a: &[Rational64]| -> Vec<Rational64> {
        let mut out = vec![Rational64::zero(); dim * dim];
        for (coord, ni) in [(0usize, n1), (1, n2)] {
            let c = Rational64::new(1, 2 * (ni as i64 / 2 + 1));
            for j in 1..=ni / 2 {
                let p: Vec<bool> = grid
                    .iter()
                    .map(|&(x, y)| in_phi(if coord == 0 { x } else { y }, ni, j))
                    .collect();
                for r in 0..dim {
                    for s in 0..dim {
                        if p[r] && p[s] {
                            out[r * dim + s] += c * a[r * dim + s];
                        }
                    }
                }
            }
        }
        out
    };

    let mut rep = AxiomReport::new("phi_decomposition_check");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<Rational64> = (0..dim * dim).map(|_| Rational64::from_integer(rng.random_range(-9..=9))).collect();
    let lhs: Vec<Rational64> = (0..dim * dim).map(|k| weight(grid[k / dim], grid[k % dim]) * a[k]).collect();
    let rhs = phi(&a);
    for k in 0..dim * dim {
        rep.expect(lhs[k] == rhs[k], "schur-equals-phi", || {
            vec![format!("{:?},{:?}", grid[k / dim], grid[k % dim]), format!("{} vs {}", lhs[k], rhs[k])]
        });
    }
    for r in 0..dim {
        for s in 0..dim {
            let mut unit = vec![Rational64::zero(); dim * dim];
            unit[r * dim + s] = Rational64::from_integer(1);
            let out = phi(&unit);
            let want = weight(grid[r], grid[s]);
            let ok = out.iter().enumerate().all(|(k, v)| if k == r * dim + s { *v == want } else { v.is_zero() });
            rep.expect(ok, "matrix-unit", || vec![format!("{:?},{:?}", grid[r], grid[s])]);
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psd_examples() {
        let k = super::super::kappa(4).unwrap().to_f64();
        assert!(psd_check(&k).unwrap());
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(!psd_check(&bad).unwrap());
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert_eq!(psd_check(&asym), Err(KGraphError::NotSymmetric));
    }

    #[test]
    fn kappa_and_delta_are_psd() {
        for m in 1..=16 {
            assert!(psd_check(&super::super::kappa(m).unwrap().to_f64()).unwrap(), "m={m}");
        }
        for n in [[4, 4], [3, 5], [1, 2], [6, 2]] {
            assert!(psd_check(&delta(&Degree::from(n)).unwrap().to_f64()).unwrap());
        }
    }

    #[test]
    fn ones_is_an_isometric_multiplier() {
        let ones = DMatrix::from_element(5, 5, 1.0);
        let r = schur_contraction_check(&ones, 20, 7).unwrap();
        assert!(r.passed);
        assert!((r.worst_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn delta_is_contractive() {
        let m = delta(&Degree::from([4, 4])).unwrap().to_f64();
        let r = schur_contraction_check(&m, 100, 1).unwrap();
        assert!(r.passed, "{r:?}");
        let scaled = &m * 4.0;
        assert!(!schur_contraction_check(&scaled, 5, 1).unwrap().passed);
    }

    #[test]
    fn phi_identity() {
        for n in [[2, 2], [4, 4], [2, 6], [6, 4]] {
            let rep = phi_decomposition_check(&Degree::from(n), 3).unwrap();
            assert!(rep.passed(), "{rep}");
        }
        assert!(phi_decomposition_check(&Degree::from([3, 4]), 3).is_err());
    }
}
