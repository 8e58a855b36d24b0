//! Small numeric building blocks: stable log-sum-exp, composite Simpson
//! integration, and grid generators shared by tests, bounds, and the CLI.

/// log(Σ exp(vᵢ)) with max-shifting so any finite inputs stay finite.
///
/// Returns −∞ for an empty slice (the empty sum).
pub fn log_sum_exp(vals: &[f64]) -> f64 {
    let m = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        // All -inf (zero-probability everywhere) or empty: the sum is 0.
        return m;
    }
    let s: f64 = vals.iter().map(|v| (v - m).exp()).sum();
    m + s.ln()
}

/// Composite Simpson integral of `f` over `[a, b]` with `points` nodes.
///
/// `points` must be odd and ≥ 3; panics otherwise (this is a test/bounds
/// helper with call sites that control the count).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, points: usize) -> f64 {
    assert!(points >= 3 && points % 2 == 1, "Simpson needs an odd point count >= 3");
    let h = (b - a) / (points - 1) as f64;
    let mut acc = f(a) + f(b);
    for i in 1..points - 1 {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64);
    }
    acc * h / 3.0
}

/// `count` linearly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (count - 1) as f64;
    (0..count)
        .map(|i| if i == count - 1 { hi } else { lo + step * i as f64 })
        .collect()
}

/// `count` logarithmically spaced values from `lo` to `hi` inclusive.
///
/// Requires `lo > 0` and `hi > 0`; the endpoints are reproduced exactly.
pub fn geomspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > 0.0, "geomspace needs positive endpoints");
    if count == 1 {
        return vec![lo];
    }
    let (la, lb) = (lo.ln(), hi.ln());
    let step = (lb - la) / (count - 1) as f64;
    (0..count)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == count - 1 {
                hi
            } else {
                (la + step * i as f64).exp()
            }
        })
        .collect()
}
