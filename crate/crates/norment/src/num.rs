//! Small numeric kernels shared across modules: stable log-sum-exp,
//! golden-section and ternary searches, monotone-boundary bisection.

/// log Σ exp(x_i), max-shifted. Empty input gives −∞.
pub(crate) fn logsumexp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + terms
        .iter()
        .map(|&x| (x - max).exp())
        .sum::<f64>()
        .ln()
}

/// Golden-section minimization of a unimodal function on [lo, hi].
/// Returns (argmin, min). Tolerant of plateaus; `iters` around 100 gives
/// interval width ~ (hi-lo) * 0.618^iters.
pub(crate) fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if b - a <= f64::EPSILON * (1.0 + a.abs() + b.abs()) {
            break;
        }
    }
    // candidates at the shrunken interval plus the original endpoints:
    // boundary minima are legitimate.
    let mid = 0.5 * (a + b);
    let mut best = (mid, f(mid));
    for x in [lo, hi, c, d] {
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Golden-section maximization on [lo, hi].
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    let (x, v) = golden_min(|t| -f(t), lo, hi, iters);
    (x, -v)
}

/// Ternary-search minimization of a unimodal function on [lo, hi].
pub(crate) fn ternary_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    for _ in 0..iters {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if f(m1) <= f(m2) {
            b = m2;
        } else {
            a = m1;
        }
        if b - a <= f64::EPSILON * (1.0 + a.abs() + b.abs()) {
            break;
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Ternary-search maximization on [lo, hi].
pub(crate) fn ternary_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    let (x, v) = ternary_min(|t| -f(t), lo, hi, iters);
    (x, -v)
}

/// Boundary of a monotone predicate: `pred` is false on [lo, x*) and true on
/// (x*, hi]; requires `pred(hi)` true and `!pred(lo)`. Returns a point within
/// `tol` of x*.
pub(crate) fn bisect_boundary(pred: impl Fn(f64) -> bool, lo: f64, hi: f64, tol: f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    let mut guard = 0;
    while hi - lo > tol && guard < 20_000 {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        guard += 1;
    }
    0.5 * (lo + hi)
}
