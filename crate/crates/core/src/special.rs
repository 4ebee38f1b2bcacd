//! Exponential integral and the coherent Rayleigh ergodic capacity.

use crate::error::{invalid, Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const EPS: f64 = 1e-16;
const MAX_ITER: usize = 500;

/// Split point between the power series and the continued fraction.
const SERIES_LIMIT: f64 = 1.0;

/// `E₁(z) = ∫_z^∞ e^{−t}/t dt` for `z > 0`.
pub fn exp_integral_e1(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(invalid("z", format!("E1 needs a finite positive argument, got {z}")));
    }
    if z <= SERIES_LIMIT {
        e1_series(z)
    } else {
        Ok(scaled_e1_continued_fraction(z)? * (-z).exp())
    }
}

/// `e^z E₁(z)`, finite for all `z > 0` without overflow.
pub fn scaled_exp_integral_e1(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(invalid("z", format!("E1 needs a finite positive argument, got {z}")));
    }
    if z <= SERIES_LIMIT {
        Ok(e1_series(z)? * z.exp())
    } else {
        scaled_e1_continued_fraction(z)
    }
}

// E₁(z) = −γ − ln z − Σ_{k≥1} (−z)^k / (k·k!)
fn e1_series(z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..MAX_ITER {
        let kf = k as f64;
        term *= -z / kf;
        let delta = term / kf;
        sum += delta;
        if delta.abs() < EPS * sum.abs() {
            return Ok(-EULER_GAMMA - z.ln() - sum);
        }
    }
    Err(Error::Inconsistent(format!("E1 series did not converge at z = {z}")))
}

// e^z E₁(z) = 1/(z + 1 − 1²/(z + 3 − 2²/(z + 5 − …))), modified Lentz.
fn scaled_e1_continued_fraction(z: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut b = z + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            return Ok(h);
        }
    }
    Err(Error::Inconsistent(format!("E1 continued fraction did not converge at z = {z}")))
}

/// `C(x) = ∫₀^∞ log(1 + x t) e^{−t} dt = e^{1/x} E₁(1/x)`, the ergodic
/// capacity of a coherent Rayleigh channel at SNR `x` (nats).
pub fn coherent_ergodic_capacity(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(invalid("x", format!("must be finite and ≥ 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    scaled_exp_integral_e1(1.0 / x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::coherent_capacity_by_quadrature;

    #[test]
    fn e1_reference_values() {
        // Abramowitz & Stegun table 5.1
        let cases = [
            (0.001, 6.331_539_364_136_149),
            (0.1, 1.822_923_958_419_390_6),
            (1.0, 0.219_383_934_395_520_27),
            (2.0, 0.048_900_510_708_061_12),
            (10.0, 4.156_968_929_685_324e-6),
        ];
        for (z, expected) in cases {
            let got = exp_integral_e1(z).unwrap();
            assert!(((got - expected) / expected).abs() < 1e-14, "E1({z}) = {got}");
        }
    }

    #[test]
    fn branches_agree_at_split_point() {
        let z = SERIES_LIMIT;
        let series = e1_series(z).unwrap() * z.exp();
        let cf = scaled_e1_continued_fraction(z).unwrap();
        assert!(((series - cf) / cf).abs() < 1e-13);
    }

    #[test]
    fn capacity_edge_cases() {
        assert_eq!(coherent_ergodic_capacity(0.0).unwrap(), 0.0);
        let x = 1e-8;
        assert!((coherent_ergodic_capacity(x).unwrap() / x - 1.0).abs() < 1e-6);
        assert!(coherent_ergodic_capacity(-1.0).is_err());
        assert!(exp_integral_e1(0.0).is_err());
    }

    #[test]
    fn capacity_matches_quadrature_at_unit_snr() {
        let oracle = coherent_capacity_by_quadrature(1.0);
        let got = coherent_ergodic_capacity(1.0).unwrap();
        assert!(((got - oracle) / oracle).abs() < 1e-10);
        assert!((got - 0.596_347_362_323_194_6).abs() < 1e-12);
    }

    #[test]
    fn capacity_is_increasing_and_concave() {
        let xs: Vec<f64> = (0..=60).map(|i| 10f64.powf(-3.0 + i as f64 * 0.1)).collect();
        let c: Vec<f64> = xs.iter().map(|&x| coherent_ergodic_capacity(x).unwrap()).collect();
        for i in 1..xs.len() {
            assert!(c[i] > c[i - 1]);
        }
        for i in 1..xs.len() - 1 {
            // slope of the chord decreases
            let left = (c[i] - c[i - 1]) / (xs[i] - xs[i - 1]);
            let right = (c[i + 1] - c[i]) / (xs[i + 1] - xs[i]);
            assert!(right < left, "concavity fails near x = {}", xs[i]);
        }
    }
}
