//! One-dimensional maximization on a closed interval.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`,
/// stopping once the bracket is narrower than `tol`.
///
/// Returns `(argmax, max)`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximizes `f` over a pilot share `ν ∈ [0, 1]`.
///
/// A coarse scan (uniform, plus log-spaced points towards both ends, where
/// block-fading optima sit for long coherence times) picks the bracket, a
/// golden-section search refines it to `tol`, and the endpoints are kept as
/// candidates so a maximum on the boundary is never lost.
pub fn maximize_share(f: impl Fn(f64) -> f64, tol: f64) -> (f64, f64) {
    let mut grid: Vec<f64> = (0..=200).map(|i| i as f64 / 200.0).collect();
    for k in 0..=56 {
        let small = 10f64.powf(-10.0 + k as f64 * 0.125);
        grid.push(small);
        grid.push(1.0 - small);
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let best = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("grid is non-empty");
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let refined = golden_section_max(&f, lo, hi, tol);

    [(grid[best], values[best]), refined]
        .into_iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("two candidates")
}
