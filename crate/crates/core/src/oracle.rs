//! Brute-force reference routines used only to cross-check the library.
//!
//! These take deliberately different routes from the production code
//! (cofactor expansion instead of factorization, numerical quadrature
//! instead of special-function identities) and are compiled only for tests
//! or with the `test-oracles` feature.

use num_complex::Complex64;

use crate::linalg::CMatrix;

/// Determinant by Laplace expansion along the first row. Exponential cost;
/// meant for matrices up to about 6×6.
pub fn cofactor_determinant(m: &CMatrix) -> Complex64 {
    let n = m.nrows();
    match n {
        0 => Complex64::new(1.0, 0.0),
        1 => m[(0, 0)],
        _ => {
            let mut det = Complex64::new(0.0, 0.0);
            for j in 0..n {
                let minor = m.clone().remove_row(0).remove_column(j);
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                det += m[(0, j)] * cofactor_determinant(&minor) * sign;
            }
            det
        }
    }
}

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod quadrature on a finite interval with a relative
/// error target.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    let mut segments = vec![(a, b, gk15(&f, a, b))];
    for _ in 0..10_000 {
        let total: f64 = segments.iter().map(|s| s.2 .0).sum();
        let err: f64 = segments.iter().map(|s| s.2 .1).sum();
        if err <= rel_tol * total.abs() {
            break;
        }
        let (idx, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .expect("non-empty");
        let (lo, hi, _) = segments.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        segments.push((lo, mid, gk15(&f, lo, mid)));
        segments.push((mid, hi, gk15(&f, mid, hi)));
    }
    // summing small to large limits cancellation
    let mut parts: Vec<f64> = segments.iter().map(|s| s.2 .0).collect();
    parts.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
    parts.iter().sum()
}

/// `∫₀^∞ log(1 + x t) e^{−t} dt` by direct quadrature, truncated where the
/// integrand drops below double precision.
pub fn coherent_capacity_by_quadrature(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let f = |t: f64| (x * t).ln_1p() * (-t).exp();
    // split so the kink-free but rapidly varying head near t = 0 is resolved
    let breaks = [0.0, 1e-3, 1e-1, 1.0, 5.0, 20.0, 60.0, 800.0];
    breaks.windows(2).map(|w| integrate(f, w[0], w[1], 1e-14)).sum()
}
