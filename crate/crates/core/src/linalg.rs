//! Small dense complex Hermitian linear algebra.
//!
//! Matrices here are at most a few dozen rows, so plain unblocked
//! Cholesky factorizations are used throughout.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Largest matrix dimension accepted by the bound routines.
pub const MAX_DIM: usize = 64;

const HERMITIAN_TOL: f64 = 1e-10;

/// Checks `m == m†` up to a relative tolerance.
pub fn check_hermitian(m: &CMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(invalid("matrix", format!("must be square, got {}×{}", m.nrows(), m.ncols())));
    }
    let scale = m.iter().fold(1.0_f64, |acc, z| acc.max(z.norm()));
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            let deviation = (m[(i, j)] - m[(j, i)].conj()).norm();
            if deviation > HERMITIAN_TOL * scale {
                return Err(Error::NotHermitian { row: i, col: j, deviation });
            }
        }
    }
    Ok(())
}

/// `(m + m†) / 2`
pub fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Lower-triangular Cholesky factor `L` with `m = L L†`.
///
/// Only the lower triangle of `m` is read. A pivot that is not strictly
/// positive is reported with its index.
pub fn cholesky(m: &CMatrix) -> Result<CMatrix> {
    let n = m.nrows();
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return Err(Error::NotPositiveDefinite { index: j, value: d });
        }
        let djj = d.sqrt();
        l[(j, j)] = Complex64::new(djj, 0.0);
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(l)
}

/// `log det m` for Hermitian positive definite `m`, via Cholesky.
pub fn hermitian_logdet(m: &CMatrix) -> Result<f64> {
    check_hermitian(m)?;
    let l = cholesky(m)?;
    Ok(2.0 * (0..l.nrows()).map(|i| l[(i, i)].re.ln()).sum::<f64>())
}

/// Solves `m x = rhs` for Hermitian positive definite `m`.
///
/// Pivots below `rel_tol` times the largest diagonal entry are treated as
/// singular and reported through [`Error::SingularCovariance`].
pub fn solve_hermitian(m: &CMatrix, rhs: &CMatrix, rel_tol: f64) -> Result<CMatrix> {
    check_hermitian(m)?;
    let n = m.nrows();
    let scale = (0..n).map(|i| m[(i, i)].re).fold(0.0_f64, f64::max);
    let threshold = rel_tol * scale.max(f64::MIN_POSITIVE);
    let l = match cholesky(m) {
        Ok(l) => l,
        Err(Error::NotPositiveDefinite { index, value }) => {
            return Err(Error::SingularCovariance { index, value, threshold })
        }
        Err(e) => return Err(e),
    };
    for i in 0..n {
        let pivot = l[(i, i)].re * l[(i, i)].re;
        if pivot <= threshold {
            return Err(Error::SingularCovariance { index: i, value: pivot, threshold });
        }
    }
    let mut x = rhs.clone();
    for c in 0..x.ncols() {
        // forward: L u = b
        for i in 0..n {
            let mut s = x[(i, c)];
            for k in 0..i {
                s -= l[(i, k)] * x[(k, c)];
            }
            x[(i, c)] = s / l[(i, i)].re;
        }
        // backward: L† x = u
        for i in (0..n).rev() {
            let mut s = x[(i, c)];
            for k in (i + 1)..n {
                s -= l[(k, i)].conj() * x[(k, c)];
            }
            x[(i, c)] = s / l[(i, i)].re;
        }
    }
    Ok(x)
}

/// Verifies that a Hermitian matrix is positive semidefinite.
///
/// Runs a Cholesky sweep that tolerates zero pivots (degenerate, i.e.
/// deterministic, directions) as long as the rest of the pivot's column is
/// zero as well.
pub fn check_psd(m: &CMatrix) -> Result<()> {
    check_hermitian(m)?;
    let n = m.nrows();
    let scale = (0..n).map(|i| m[(i, i)].re.abs()).fold(1.0_f64, f64::max);
    let tol = 1e-10 * scale;
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d < -tol {
            return Err(Error::Indefinite { index: j, value: d });
        }
        if d <= tol {
            for i in (j + 1)..n {
                let mut s = m[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                if s.norm() > tol.sqrt() * scale.sqrt() {
                    return Err(Error::Indefinite { index: j, value: d });
                }
            }
            continue;
        }
        let djj = d.sqrt();
        l[(j, j)] = Complex64::new(djj, 0.0);
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(())
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    m.clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::cofactor_determinant;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_pd(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let g = CMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        &g * g.adjoint() + CMatrix::identity(n, n).scale(0.5)
    }

    fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let g = CMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        g.qr().q()
    }

    #[test]
    fn logdet_of_identity_and_diagonal() {
        assert_eq!(hermitian_logdet(&CMatrix::identity(3, 3)).unwrap(), 0.0);
        let d = CMatrix::from_diagonal_element(2, 2, c(2.0, 0.0));
        assert!((hermitian_logdet(&d).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn logdet_matches_cofactor_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let m = random_pd(4, &mut rng);
            let det = cofactor_determinant(&m);
            assert!(det.im.abs() < 1e-10 * det.re.abs());
            let expected = det.re.ln();
            let got = hermitian_logdet(&m).unwrap();
            assert!((got - expected).abs() <= 1e-10 * expected.abs().max(1.0), "{got} vs {expected}");
        }
    }

    #[test]
    fn logdet_is_unitarily_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 3, 5] {
            let m = random_pd(n, &mut rng);
            let u = random_unitary(n, &mut rng);
            let rotated = symmetrize(&(&u * &m * u.adjoint()));
            let a = hermitian_logdet(&m).unwrap();
            let b = hermitian_logdet(&rotated).unwrap();
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn non_pd_reports_pivot() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
        match hermitian_logdet(&m) {
            Err(Error::NotPositiveDefinite { index, .. }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.5, 0.1), c(0.5, 0.1), c(1.0, 0.0)]);
        assert!(matches!(hermitian_logdet(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn solve_recovers_rhs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_pd(5, &mut rng);
        let x = CMatrix::from_fn(5, 2, |i, j| c(i as f64, j as f64 - 0.5));
        let b = &m * &x;
        let got = solve_hermitian(&m, &b, 1e-14).unwrap();
        assert!((got - x).norm() < 1e-10);
    }

    #[test]
    fn solve_flags_singular_pivot() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        let b = CMatrix::from_element(2, 1, c(1.0, 0.0));
        assert!(matches!(solve_hermitian(&m, &b, 1e-12), Err(Error::SingularCovariance { index: 1, .. })));
    }

    #[test]
    fn psd_check_accepts_degenerate_directions() {
        let zero_var = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        check_psd(&zero_var).unwrap();
        let rank_one = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)]);
        check_psd(&rank_one).unwrap();
        let indefinite = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(check_psd(&indefinite), Err(Error::Indefinite { .. })));
    }
}
