//! Exact moments of jointly circularly-symmetric complex Gaussian variables.
//!
//! A monomial `∏ g_k` (some factors conjugated) is expanded around the means
//! `g_k = μ_k + w_k`. For the zero-mean fluctuations the circular Wick
//! (Isserlis) rule applies: `E[∏ w]` vanishes unless every unconjugated
//! factor pairs with a conjugated one, and then equals the permanent of the
//! covariance block `C[u_i, c_j] = E[w_{u_i} w_{c_j}^*]`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::linalg::{check_psd, CMatrix};

/// Highest monomial degree accepted; `2⁸` mean/fluctuation splits at most.
pub const MAX_DEGREE: usize = 8;

/// One factor of a monomial: variable `var`, optionally conjugated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub var: usize,
    pub conj: bool,
}

impl Factor {
    pub const fn plain(var: usize) -> Self {
        Self { var, conj: false }
    }

    pub const fn conj(var: usize) -> Self {
        Self { var, conj: true }
    }

    fn conjugate(self) -> Self {
        Self { var: self.var, conj: !self.conj }
    }
}

/// A vector of jointly circular complex Gaussian variables, validated once
/// and then queried for arbitrary monomial moments.
#[derive(Debug, Clone)]
pub struct GaussianVector {
    means: Vec<Complex64>,
    cov: CMatrix,
    independent: bool,
}

impl GaussianVector {
    /// `cov[(i, j)] = E[(g_i − μ_i)(g_j − μ_j)^*]`; must be Hermitian PSD.
    pub fn new(means: Vec<Complex64>, cov: CMatrix) -> Result<Self> {
        if cov.nrows() != means.len() || cov.ncols() != means.len() {
            return Err(invalid(
                "covariance",
                format!("expected {n}×{n}, got {}×{}", cov.nrows(), cov.ncols(), n = means.len()),
            ));
        }
        check_psd(&cov)?;
        let n = means.len();
        let independent = (0..n).all(|i| (0..n).all(|j| i == j || cov[(i, j)] == Complex64::new(0.0, 0.0)));
        Ok(Self { means, cov, independent })
    }

    /// Mutually independent variables given as `(mean, variance)` pairs.
    pub fn independent(params: &[(Complex64, f64)]) -> Result<Self> {
        let n = params.len();
        let mut cov = CMatrix::zeros(n, n);
        for (i, &(_, var)) in params.iter().enumerate() {
            if !(var >= 0.0) {
                return Err(invalid("variance", format!("must be ≥ 0, got {var}")));
            }
            cov[(i, i)] = Complex64::new(var, 0.0);
        }
        Self::new(params.iter().map(|p| p.0).collect(), cov)
    }

    pub fn len(&self) -> usize {
        self.means.len()
    }

    pub fn is_empty(&self) -> bool {
        self.means.is_empty()
    }

    /// `E[∏ factors]`
    pub fn moment(&self, monomial: &[Factor]) -> Result<Complex64> {
        if monomial.len() > MAX_DEGREE {
            return Err(Error::DegreeTooHigh { degree: monomial.len(), max: MAX_DEGREE });
        }
        if let Some(f) = monomial.iter().find(|f| f.var >= self.len()) {
            return Err(invalid("monomial", format!("variable {} out of range", f.var)));
        }
        if self.independent {
            Ok(self.moment_factorized(monomial))
        } else {
            Ok(self.moment_by_pairing(monomial))
        }
    }

    /// Independent variables: the expectation factorizes into scalar moments
    /// `E[g^a (g^*)^b] = Σ_k C(a,k) C(b,k) k! s^k μ^{a−k} (μ^*)^{b−k}`.
    fn moment_factorized(&self, monomial: &[Factor]) -> Complex64 {
        let mut counts = vec![(0u32, 0u32); self.len()];
        for f in monomial {
            let entry = &mut counts[f.var];
            if f.conj {
                entry.1 += 1;
            } else {
                entry.0 += 1;
            }
        }
        let mut total = Complex64::new(1.0, 0.0);
        for (v, &(a, b)) in counts.iter().enumerate() {
            if a == 0 && b == 0 {
                continue;
            }
            let mu = self.means[v];
            let s = self.cov[(v, v)].re;
            let mut sum = Complex64::new(0.0, 0.0);
            for k in 0..=a.min(b) {
                let pairs = binomial(a, k) * binomial(b, k) * factorial(k) * s.powi(k as i32);
                sum += mu.powu(a - k) * mu.conj().powu(b - k) * pairs;
            }
            total *= sum;
        }
        total
    }

    fn moment_by_pairing(&self, monomial: &[Factor]) -> Complex64 {
        let m = monomial.len();
        let mut total = Complex64::new(0.0, 0.0);
        let mut plain = [0usize; MAX_DEGREE];
        let mut conj = [0usize; MAX_DEGREE];
        for mask in 0u32..(1 << m) {
            // bits set: factor contributes its fluctuation
            let (mut np, mut nc) = (0, 0);
            let mut mean_part = Complex64::new(1.0, 0.0);
            for (k, f) in monomial.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    if f.conj {
                        conj[nc] = f.var;
                        nc += 1;
                    } else {
                        plain[np] = f.var;
                        np += 1;
                    }
                } else {
                    let mu = self.means[f.var];
                    mean_part *= if f.conj { mu.conj() } else { mu };
                }
            }
            if np != nc || mean_part == Complex64::new(0.0, 0.0) {
                continue;
            }
            total += mean_part * self.pairing_permanent(&plain[..np], &conj[..nc]);
        }
        total
    }

    fn pairing_permanent(&self, plain: &[usize], conj: &[usize]) -> Complex64 {
        fn rec(cov: &CMatrix, plain: &[usize], conj: &[usize], used: u32) -> Complex64 {
            let Some((&u, rest)) = plain.split_first() else {
                return Complex64::new(1.0, 0.0);
            };
            let mut s = Complex64::new(0.0, 0.0);
            for (j, &c) in conj.iter().enumerate() {
                if used >> j & 1 == 0 {
                    let cij = cov[(u, c)];
                    if cij != Complex64::new(0.0, 0.0) {
                        s += cij * rec(cov, rest, conj, used | 1 << j);
                    }
                }
            }
            s
        }
        rec(&self.cov, plain, conj, 0)
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Free-function form of [`GaussianVector::moment`].
pub fn wick_moment(means: &[Complex64], covariance: &CMatrix, monomial: &[Factor]) -> Result<Complex64> {
    GaussianVector::new(means.to_vec(), covariance.clone())?.moment(monomial)
}

/// Complex polynomial in Gaussian variables and their conjugates.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Polynomial {
    terms: BTreeMap<Vec<Factor>, Complex64>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(var: usize) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![Factor::plain(var)], Complex64::new(1.0, 0.0));
        p
    }

    fn add_term(&mut self, mut monomial: Vec<Factor>, coeff: Complex64) {
        if coeff == Complex64::new(0.0, 0.0) {
            return;
        }
        monomial.sort_unstable();
        let entry = self.terms.entry(monomial).or_default();
        *entry += coeff;
    }

    pub fn conj(&self) -> Self {
        let mut p = Self::zero();
        for (m, c) in &self.terms {
            p.add_term(m.iter().map(|f| f.conjugate()).collect(), c.conj());
        }
        p
    }

    /// `|p|² = p · p^*`
    pub fn abs_sq(&self) -> Self {
        self * &self.conj()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut p = Self::zero();
        for (m, c) in &self.terms {
            p.add_term(m.clone(), c * s);
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Exact expectation under `g`.
    pub fn expectation(&self, g: &GaussianVector) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            total += c * g.moment(m)?;
        }
        Ok(total)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), *c);
        }
        p
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut p = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mut m = Vec::with_capacity(ma.len() + mb.len());
                m.extend_from_slice(ma);
                m.extend_from_slice(mb);
                p.add_term(m, ca * cb);
            }
        }
        p
    }
}
