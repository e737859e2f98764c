//! Luxemburg norms for Young functions of the form τ_α = e^α − 1 over
//! discrete measures, with computable upper and lower estimates.
//!
//! The norm is the gauge of the unit integral ball:
//!
//! ```text
//! ‖f‖_{τ_α} = inf { λ > 0 : Σ_i μ_i (e^{α(|f_i|/λ)} − 1) ≤ 1 }
//! ```
//!
//! computed by bisection on λ — the integral is nonincreasing in λ, and any
//! term with |f_i|/λ outside dom α makes it +∞, which the bisection simply
//! treats as "greater than one".
//!
//! Two estimates complement the exact value:
//! - for dom α = ℝ⁺, the scan bound
//!   inf_δ (1/δ)(1 + log ∫ e^{α(δχ)} dμ / log 2), always ≥ the norm;
//! - for bounded dom α, the L∞ sandwich
//!   ‖χ‖_∞ / r_α ≤ ‖χ‖_{τ_α} ≤ ‖χ‖_∞ / sup{t : α(t) ≤ log 2}.

use crate::convex::{generalized_inverse, ConvexGauge, InverseSide};
use crate::grid::GridSpec;
use crate::measure::{DiscreteMeasure, SpaceFunction};
use crate::num::{golden_min, logsumexp};
use crate::{Error, Result};

/// Default absolute tolerance on λ.
pub const DEFAULT_NORM_TOL: f64 = 1e-10;

/// A Luxemburg-norm query: function, measure, gauge, and the absolute
/// tolerance on the returned λ.
#[derive(Debug, Clone)]
pub struct LuxemburgQuery<'a> {
    pub f: &'a SpaceFunction,
    pub mu: &'a DiscreteMeasure,
    pub alpha: &'a ConvexGauge,
    pub tol: f64,
}

impl<'a> LuxemburgQuery<'a> {
    pub fn new(f: &'a SpaceFunction, mu: &'a DiscreteMeasure, alpha: &'a ConvexGauge) -> Self {
        LuxemburgQuery {
            f,
            mu,
            alpha,
            tol: DEFAULT_NORM_TOL,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        assert!(tol > 0.0, "tolerance must be positive");
        self.tol = tol;
        self
    }

    pub fn norm(&self) -> Result<f64> {
        luxemburg_norm(self.f, self.mu, self.alpha, self.tol)
    }
}

/// Σ_i μ_i τ_α(|f_i|/λ); +∞ as soon as one supported term leaves dom α.
fn tau_integral(f: &SpaceFunction, mu: &DiscreteMeasure, alpha: &ConvexGauge, lambda: f64) -> f64 {
    let mut total = 0.0;
    for i in mu.support() {
        let a = alpha.eval(f.value(i).abs() / lambda);
        if !a.is_finite() {
            return f64::INFINITY;
        }
        let term = a.exp_m1();
        if !term.is_finite() {
            return f64::INFINITY;
        }
        total += mu.weight(i) * term;
    }
    total
}

/// The Luxemburg norm ‖f‖_{τ_α}, by certified-bracket bisection.
///
/// The upper bracket λ with α(|f_i|/λ) ≤ log 2 for every supported i makes
/// each integrand term at most one, hence the integral at most one; the
/// lower bracket is grown from there by halving until the integral exceeds
/// one. Returns 0 for f ≡ 0 μ-a.e. and errors on gauges with r_α = 0.
pub fn luxemburg_norm(
    f: &SpaceFunction,
    mu: &DiscreteMeasure,
    alpha: &ConvexGauge,
    tol: f64,
) -> Result<f64> {
    if f.len() != mu.len() {
        return Err(Error::DimensionMismatch {
            expected: mu.len(),
            got: f.len(),
        });
    }
    if alpha.domain_end() == 0.0 {
        return Err(Error::DegenerateGauge(
            "dom alpha = {0}: the Young function is identically infinite".into(),
        ));
    }
    let ess_sup = f.ess_sup(mu)?;
    if ess_sup == 0.0 {
        return Ok(0.0);
    }
    let t_log2 = generalized_inverse(alpha, std::f64::consts::LN_2, InverseSide::Upper, 1e-13);
    if t_log2.is_infinite() {
        // alpha never exceeds log 2, so every positive λ is feasible
        return Ok(0.0);
    }
    debug_assert!(t_log2 > 0.0, "alpha is continuous at 0 with alpha(0) = 0");
    let mut hi = ess_sup / t_log2;
    let mut guard = 0;
    while tau_integral(f, mu, alpha, hi) > 1.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::SolverStalled(
                "luxemburg upper bracket failed to certify".into(),
            ));
        }
    }
    let mut lo = hi;
    while tau_integral(f, mu, alpha, lo) <= 1.0 {
        lo /= 2.0;
        if lo < 1e-300 {
            return Ok(0.0);
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if tau_integral(f, mu, alpha, mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Scan upper bound for full-domain gauges:
/// min over the δ-grid (with a golden-section polish around the best grid
/// point) of (1/δ)(1 + log ∫ e^{α(δχ)} dμ / log 2). Any δ gives a valid
/// bound, so the polish only tightens it. Requires dom α = ℝ⁺.
pub fn luxemburg_upper_bound(
    chi: &SpaceFunction,
    mu: &DiscreteMeasure,
    alpha: &ConvexGauge,
    delta_grid: &GridSpec,
) -> Result<f64> {
    if chi.len() != mu.len() {
        return Err(Error::DimensionMismatch {
            expected: mu.len(),
            got: chi.len(),
        });
    }
    if chi.values().iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidFunction("chi must be nonnegative".into()));
    }
    if alpha.domain_end().is_finite() {
        return Err(Error::InvalidGauge(
            "the scan bound needs dom alpha = R+; use the L-infinity bounds instead".into(),
        ));
    }
    let bound = |delta: f64| -> f64 {
        if delta <= 0.0 {
            return f64::INFINITY;
        }
        let terms: Vec<f64> = mu
            .support()
            .map(|i| mu.weight(i).ln() + alpha.eval(delta * chi.value(i)))
            .collect();
        let log_integral = logsumexp(&terms);
        if !log_integral.is_finite() {
            return f64::INFINITY;
        }
        (1.0 / delta) * (1.0 + log_integral.max(0.0) / std::f64::consts::LN_2)
    };
    let pts = delta_grid.points();
    let mut best = f64::INFINITY;
    let mut best_idx = 0;
    for (k, &d) in pts.iter().enumerate() {
        let b = bound(d);
        if b < best {
            best = b;
            best_idx = k;
        }
    }
    if best.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let lo = if best_idx == 0 { pts[0] } else { pts[best_idx - 1] };
    let hi = if best_idx + 1 < pts.len() {
        pts[best_idx + 1]
    } else {
        pts[best_idx]
    };
    if hi > lo {
        let (_, refined) = golden_min(bound, lo, hi, 120);
        best = best.min(refined);
    }
    Ok(best)
}

/// L∞ sandwich for bounded-domain gauges: the norm of χ lies in
/// [‖χ‖_∞ / r_α, ‖χ‖_∞ / sup{t : α(t) ≤ log 2}].
pub fn luxemburg_linfty_bounds(
    chi: &SpaceFunction,
    mu: &DiscreteMeasure,
    alpha: &ConvexGauge,
) -> Result<(f64, f64)> {
    if chi.len() != mu.len() {
        return Err(Error::DimensionMismatch {
            expected: mu.len(),
            got: chi.len(),
        });
    }
    let r = alpha.domain_end();
    if !r.is_finite() {
        return Err(Error::InvalidGauge(
            "the L-infinity sandwich needs a bounded domain".into(),
        ));
    }
    if r == 0.0 {
        return Err(Error::DegenerateGauge("dom alpha = {0}".into()));
    }
    let ess_sup = chi.ess_sup(mu)?;
    let lower = ess_sup / r;
    let t_log2 = generalized_inverse(alpha, std::f64::consts::LN_2, InverseSide::Upper, 1e-13);
    let upper = if t_log2 == 0.0 {
        f64::INFINITY
    } else {
        ess_sup / t_log2
    };
    Ok((lower, upper))
}
