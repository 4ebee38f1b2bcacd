//! Number formatting for reports and CSV output.

/// Significant digits written by [`fmt_sig`].
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits and prints the
/// shortest representation that parses back to the rounded value.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("scientific notation parses");
    if rounded == 0.0 {
        return "0".to_owned();
    }
    let magnitude = rounded.abs();
    if (1e-4..1e15).contains(&magnitude) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_and_notation() {
        assert_eq!(fmt_sig(0.046_520_015_634_892_91), "0.0465200156349");
        assert_eq!(fmt_sig(0.5), "0.5");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(1e-8), "1e-8");
        assert_eq!(fmt_sig(2.0f64.ln()), "0.69314718056");
        assert_eq!(fmt_sig(123_456_789_012_345.0), "123456789012000");
        assert_eq!(fmt_sig(f64::NAN), "NaN");
    }

    #[test]
    fn round_trip_is_stable() {
        for x in [1.234_567_890_123_456_7, 9.999_999_999_999_9e-7, 3.3e20, -0.006_651] {
            let once = fmt_sig(x);
            assert_eq!(fmt_sig(once.parse().unwrap()), once);
        }
    }
}
