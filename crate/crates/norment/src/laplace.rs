//! Log-Laplace transforms, Cramér transforms, and exponential-moment
//! estimates for discrete random variables.
//!
//! For X distributed as f under μ:
//!
//! ```text
//! Λ(s)  = log Σ_i μ_i e^{s f_i}          (log-Laplace, stable via max-shift)
//! Λ*(t) = sup_s { st − Λ(s) }            (Cramér transform)
//! ```
//!
//! Λ* vanishes at the mean, is +∞ outside the convex hull of the support
//! values, and at the hull endpoints equals −log of the endpoint mass (the
//! supremum is a limit there, so it is evaluated in closed form rather than
//! searched).
//!
//! On top of these the module provides four scan checks, each returning
//! margins (location, value) sorted worst-first:
//! - the integrated tail estimate E[e^{εΛ*(X)}] ≤ (1+ε)/(1−ε) with the exact
//!   tail bound P(Λ*(X) > t) ≤ 2e^{−t},
//! - the Kozachenko–Ostrovskii Laplace bound ∫e^{sf}dμ ≤ e^{α⊛(as)} for
//!   centered f with a = √2·m_α·‖f‖_{τ_α},
//! - the dual Laplace condition ∫e^{sφ}dμ ≤ e^{s⟨φ,μ⟩ + α⊛(as)} over an
//!   explicit class,
//! - the sub-gaussian moment bound E[e^{s(X−EX)}] ≤ e^{s²/2}·E[e^{X²}]^{2s²}.

use crate::convex::{check_domain_open, ConvexGauge, MAlphaResult};
use crate::grid::GridSpec;
use crate::measure::{DiscreteMeasure, FunctionClass, SpaceFunction};
use crate::num::{logsumexp, ternary_max};
use crate::orlicz::luxemburg_norm;
use crate::{Error, Result};

/// Log-Laplace transform of a function under a measure, restricted to the
/// support of the measure.
#[derive(Debug, Clone)]
pub struct LogLaplace {
    values: Vec<f64>,
    log_weights: Vec<f64>,
    mean: f64,
}

impl LogLaplace {
    pub fn new(f: &SpaceFunction, mu: &DiscreteMeasure) -> Result<Self> {
        if f.len() != mu.len() {
            return Err(Error::DimensionMismatch {
                expected: mu.len(),
                got: f.len(),
            });
        }
        let mut values = Vec::new();
        let mut log_weights = Vec::new();
        for i in mu.support() {
            values.push(f.value(i));
            log_weights.push(mu.weight(i).ln());
        }
        let mean = mu.integrate(f)?;
        Ok(LogLaplace {
            values,
            log_weights,
            mean,
        })
    }

    /// Λ(s) = log Σ μ_i e^{s f_i}
    pub fn eval(&self, s: f64) -> f64 {
        let terms: Vec<f64> = self
            .values
            .iter()
            .zip(&self.log_weights)
            .map(|(&v, &lw)| lw + s * v)
            .collect();
        logsumexp(&terms)
    }

    /// Λ′(s): the mean of f under the s-tilted measure.
    pub fn derivative(&self, s: f64) -> f64 {
        let shift = self
            .values
            .iter()
            .zip(&self.log_weights)
            .map(|(&v, &lw)| lw + s * v)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut num = 0.0;
        let mut den = 0.0;
        for (&v, &lw) in self.values.iter().zip(&self.log_weights) {
            let w = (lw + s * v - shift).exp();
            num += v * w;
            den += w;
        }
        num / den
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }
}

/// Cramér transform of a function under a measure.
#[derive(Debug, Clone)]
pub struct CramerTransform {
    ll: LogLaplace,
    min: f64,
    max: f64,
    log_mass_min: f64,
    log_mass_max: f64,
}

impl CramerTransform {
    pub fn new(f: &SpaceFunction, mu: &DiscreteMeasure) -> Result<Self> {
        let ll = LogLaplace::new(f, mu)?;
        let min = ll.values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = ll.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mass = |target: f64| -> f64 {
            let terms: Vec<f64> = ll
                .values
                .iter()
                .zip(&ll.log_weights)
                .filter(|(&v, _)| v == target)
                .map(|(_, &lw)| lw)
                .collect();
            logsumexp(&terms)
        };
        let log_mass_min = mass(min);
        let log_mass_max = mass(max);
        Ok(CramerTransform {
            ll,
            min,
            max,
            log_mass_min,
            log_mass_max,
        })
    }

    /// Λ*(t) = sup_s { st − Λ(s) }: 0 at the mean, −log(endpoint mass) at the
    /// hull endpoints, +∞ outside the hull, concave maximization inside (by
    /// ternary search on an expanding bracket).
    pub fn eval(&self, t: f64) -> f64 {
        if t < self.min || t > self.max {
            return f64::INFINITY;
        }
        if self.min == self.max {
            return 0.0;
        }
        if t == self.max {
            return -self.log_mass_max;
        }
        if t == self.min {
            return -self.log_mass_min;
        }
        if t == self.ll.mean {
            return 0.0;
        }
        // expand a bracket until Λ′ straddles t (Λ′ is increasing with range
        // (min, max), and min < t < max strictly here)
        let mut radius = 1.0;
        let mut guard = 0;
        while self.ll.derivative(radius) < t || self.ll.derivative(-radius) > t {
            radius *= 2.0;
            guard += 1;
            if guard > 600 {
                break;
            }
        }
        let objective = |s: f64| s * t - self.ll.eval(s);
        let (_, sup) = ternary_max(objective, -radius, radius, 300);
        sup.max(0.0)
    }
}

/// Λ(s) in one call.
pub fn log_laplace(f: &SpaceFunction, mu: &DiscreteMeasure, s: f64) -> Result<f64> {
    Ok(LogLaplace::new(f, mu)?.eval(s))
}

/// Λ*(t) in one call.
pub fn cramer_transform(f: &SpaceFunction, mu: &DiscreteMeasure, t: f64) -> Result<f64> {
    Ok(CramerTransform::new(f, mu)?.eval(t))
}

/// Margins of a scan, sorted worst-first as (location, margin) pairs.
#[derive(Debug, Clone)]
pub struct MarginScan {
    pub entries: Vec<(f64, f64)>,
}

impl MarginScan {
    fn from_entries(mut entries: Vec<(f64, f64)>) -> Self {
        entries.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        MarginScan { entries }
    }

    pub fn min_margin(&self) -> f64 {
        self.entries.first().map(|e| e.1).unwrap_or(f64::INFINITY)
    }

    pub fn worst_location(&self) -> Option<f64> {
        self.entries.first().map(|e| e.0)
    }
}

/// Result of the integrated-tail check.
#[derive(Debug, Clone)]
pub struct DzReport {
    /// Σ μ_i e^{ε Λ*(f_i)}
    pub lhs: f64,
    /// (1+ε)/(1−ε)
    pub rhs: f64,
    /// rhs − lhs
    pub margin: f64,
    /// min over the t-grid of 2e^{−t} − P(Λ*(X) > t)
    pub tail: MarginScan,
}

/// Check E[e^{ε Λ*(X)}] ≤ (1+ε)/(1−ε) for ε ∈ [0, 1), together with the
/// pointwise tail bound P(Λ*(X) > t) ≤ 2e^{−t} on the t-grid.
pub fn dz_check(
    f: &SpaceFunction,
    mu: &DiscreteMeasure,
    eps: f64,
    t_grid: &GridSpec,
) -> Result<DzReport> {
    assert!((0.0..1.0).contains(&eps), "epsilon must be in [0, 1)");
    let cramer = CramerTransform::new(f, mu)?;
    // Λ* at the support atoms; zero-mass atoms never enter (e^{ε·∞}·0 := 0)
    let mut lhs = 0.0;
    let mut rates: Vec<(usize, f64)> = Vec::new();
    for i in mu.support() {
        let r = cramer.eval(f.value(i));
        rates.push((i, r));
        lhs += mu.weight(i) * (eps * r).exp();
    }
    let rhs = (1.0 + eps) / (1.0 - eps);
    let mut tail_entries = Vec::new();
    for t in t_grid.points() {
        if t < 0.0 {
            continue;
        }
        let mass: f64 = rates
            .iter()
            .filter(|&&(_, r)| r > t)
            .map(|&(i, _)| mu.weight(i))
            .sum();
        tail_entries.push((t, 2.0 * (-t).exp() - mass));
    }
    Ok(DzReport {
        lhs,
        rhs,
        margin: rhs - lhs,
        tail: MarginScan::from_entries(tail_entries),
    })
}

/// Default t-grid for the tail bound.
pub fn default_tail_grid() -> GridSpec {
    GridSpec::linear(0.0, 25.0, 50)
}

/// Exponential-moment bound for centered f:
/// margin(s) = α⊛(a·s) − Λ(s) with a = √2 · m_α · ‖f‖_{τ_α}, scanned over
/// the s-grid. Requires ⟨f, μ⟩ = 0 within 1e-10 and a conjugate with domain
/// open on the left (the witness inside `m` covers superquadraticity).
pub fn ko_bound_check(
    f: &SpaceFunction,
    mu: &DiscreteMeasure,
    alpha: &ConvexGauge,
    m: &MAlphaResult,
    s_grid: &GridSpec,
) -> Result<MarginScan> {
    let mean = mu.integrate(f)?;
    if mean.abs() > 1e-10 {
        return Err(Error::NotCentered { mean });
    }
    let beta = alpha.conjugate(s_grid);
    if !check_domain_open(&beta).holds() {
        return Err(Error::InvalidGauge(
            "the conjugate domain must be open on the left".into(),
        ));
    }
    let norm = luxemburg_norm(f, mu, alpha, 1e-12)?;
    let a = std::f64::consts::SQRT_2 * m.m_alpha * norm;
    let ll = LogLaplace::new(f, mu)?;
    let entries = s_grid
        .points()
        .into_iter()
        .filter(|&s| s >= 0.0)
        .map(|s| (s, beta.eval(a * s) - ll.eval(s)))
        .collect();
    Ok(MarginScan::from_entries(entries))
}

/// Margins of the dual Laplace condition over an explicit class:
/// for each φ and grid s, s⟨φ,μ⟩ + α⊛(as) − Λ_φ(s). A nonnegative minimum
/// certifies the condition on the scanned grid.
#[derive(Debug, Clone)]
pub struct DualConditionReport {
    pub min_margin: f64,
    pub worst_phi: usize,
    pub worst_s: f64,
    /// (φ index, s, margin) triples sorted worst-first.
    pub entries: Vec<(usize, f64, f64)>,
}

pub fn dual_condition_check(
    mu: &DiscreteMeasure,
    phi_class: &FunctionClass,
    alpha: &ConvexGauge,
    a: f64,
    s_grid: &GridSpec,
) -> Result<DualConditionReport> {
    let functions = match phi_class {
        FunctionClass::ExplicitList(fs) => fs,
        _ => return Err(Error::NonExplicitClass),
    };
    let beta = alpha.conjugate(s_grid);
    let mut entries = Vec::new();
    for (idx, phi) in functions.iter().enumerate() {
        let mean = mu.integrate(phi)?;
        let ll = LogLaplace::new(phi, mu)?;
        for s in s_grid.points() {
            if s < 0.0 {
                continue;
            }
            let margin = s * mean + beta.eval(a * s) - ll.eval(s);
            entries.push((idx, s, margin));
        }
    }
    entries.sort_by(|x, y| x.2.partial_cmp(&y.2).unwrap());
    let worst = entries.first().copied().unwrap_or((0, 0.0, f64::INFINITY));
    Ok(DualConditionReport {
        min_margin: worst.2,
        worst_phi: worst.0,
        worst_s: worst.1,
        entries,
    })
}

/// Sub-gaussian moment bound:
/// margin(s) = s²/2 + 2s²·log E[e^{f²}] − Λ_{f−⟨f,μ⟩}(s) over the s-grid.
pub fn subgaussian_check(
    f: &SpaceFunction,
    mu: &DiscreteMeasure,
    s_grid: &GridSpec,
) -> Result<MarginScan> {
    let centered = f.centered(mu)?;
    let ll = LogLaplace::new(&centered, mu)?;
    let sq_terms: Vec<f64> = mu
        .support()
        .map(|i| mu.weight(i).ln() + f.value(i) * f.value(i))
        .collect();
    let log_moment = logsumexp(&sq_terms);
    let entries = s_grid
        .points()
        .into_iter()
        .filter(|&s| s >= 0.0)
        .map(|s| (s, s * s / 2.0 + 2.0 * s * s * log_moment - ll.eval(s)))
        .collect();
    Ok(MarginScan::from_entries(entries))
}

/// s_max = b/a − ε when dom α⊛ = [0, b) is bounded, 10³ otherwise; the bound
/// is vacuous past dom α⊛ so points there would be wasted.
pub fn default_ko_grid(alpha: &ConvexGauge, a: f64) -> GridSpec {
    let beta = alpha.conjugate(&crate::grid::default_s_grid());
    crate::grid::s_grid_for_dual(beta.domain_end(), a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::default_s_grid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rademacher() -> (SpaceFunction, DiscreteMeasure) {
        (
            SpaceFunction::new(vec![1.0, -1.0]).unwrap(),
            DiscreteMeasure::uniform(2),
        )
    }

    fn random_pair(rng: &mut ChaCha8Rng, n: usize, half_width: f64) -> (SpaceFunction, DiscreteMeasure) {
        let f = SpaceFunction::new(
            (0..n)
                .map(|_| (rng.random::<f64>() * 2.0 - 1.0) * half_width)
                .collect(),
        )
        .unwrap();
        let mu = DiscreteMeasure::from_unnormalized(
            (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect(),
        )
        .unwrap();
        (f, mu)
    }

    #[test]
    fn log_laplace_basics() {
        let (f, mu) = rademacher();
        assert_eq!(log_laplace(&f, &mu, 0.0).unwrap(), 0.0);
        let got = log_laplace(&f, &mu, 1.0).unwrap();
        assert!((got - 1f64.cosh().ln()).abs() < 1e-14);
        let c = SpaceFunction::constant(3, 2.5).unwrap();
        let mu3 = DiscreteMeasure::uniform(3);
        for s in [-1.0, 0.3, 7.0] {
            assert!((log_laplace(&c, &mu3, s).unwrap() - 2.5 * s).abs() < 1e-12);
        }
    }

    #[test]
    fn log_laplace_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..30 {
            let n = rng.random_range(2..7);
            let (f, mu) = random_pair(&mut rng, n, 2.0);
            let ll = LogLaplace::new(&f, &mu).unwrap();
            assert!(ll.eval(0.0).abs() < 1e-12);
            // Λ′(0) is the mean, by finite differences
            let h = 1e-6;
            let fd = (ll.eval(h) - ll.eval(-h)) / (2.0 * h);
            assert!((fd - ll.mean()).abs() < 1e-6);
            // convexity on a grid
            for k in -10..9 {
                let s = k as f64 * 0.3;
                let mid = ll.eval(s + 0.15);
                let chord = 0.5 * (ll.eval(s) + ll.eval(s + 0.3));
                assert!(mid <= chord + 1e-12);
            }
        }
    }

    #[test]
    fn cramer_transform_examples() {
        let (f, mu) = rademacher();
        let cr = CramerTransform::new(&f, &mu).unwrap();
        assert_eq!(cr.eval(0.0), 0.0); // the mean
        assert!((cr.eval(1.0) - 2f64.ln()).abs() < 1e-12); // −log μ(X = 1)
        assert_eq!(cr.eval(2.0), f64::INFINITY);
        assert_eq!(cr.eval(-1.5), f64::INFINITY);
        // interior value against the closed form for the two-point case:
        // Λ*(t) = ((1+t)/2)log(1+t) + ((1−t)/2)log(1−t)
        let t = 0.4f64;
        let closed = 0.5 * (1.0 + t) * (1.0 + t).ln() + 0.5 * (1.0 - t) * (1.0 - t).ln();
        assert!((cr.eval(t) - closed).abs() < 1e-9, "{} vs {closed}", cr.eval(t));
    }

    #[test]
    fn cramer_vanishes_at_the_mean_and_fenchel_young_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..25 {
            let n = rng.random_range(2..7);
            let (f, mu) = random_pair(&mut rng, n, 2.0);
            let ll = LogLaplace::new(&f, &mu).unwrap();
            let cr = CramerTransform::new(&f, &mu).unwrap();
            assert!(cr.eval(ll.mean()).abs() < 1e-9);
            for i in -5..=5 {
                for j in -5..=5 {
                    let s = i as f64 * 0.4;
                    let t = ll.mean() + j as f64 * 0.1;
                    let bound = ll.eval(s) + cr.eval(t);
                    if bound.is_finite() {
                        assert!(s * t <= bound + 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn dz_check_examples() {
        let (f, mu) = rademacher();
        let grid = default_tail_grid();
        let at_zero = dz_check(&f, &mu, 0.0, &grid).unwrap();
        assert!((at_zero.lhs - 1.0).abs() < 1e-12);
        assert!((at_zero.rhs - 1.0).abs() < 1e-12);
        assert!(at_zero.margin.abs() < 1e-12);

        let at_half = dz_check(&f, &mu, 0.5, &grid).unwrap();
        assert!((at_half.lhs - 2f64.sqrt()).abs() < 1e-10);
        assert!((at_half.rhs - 3.0).abs() < 1e-12);
        assert!(at_half.margin > 0.0);
        assert!(at_half.tail.min_margin() >= 0.0);

        let c = SpaceFunction::constant(2, 3.0).unwrap();
        for eps in [0.0, 0.3, 0.9] {
            let r = dz_check(&c, &mu, eps, &grid).unwrap();
            assert!((r.lhs - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dz_check_random_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let grid = default_tail_grid();
        for _ in 0..200 {
            let n = rng.random_range(2..=10);
            let (f, mu) = random_pair(&mut rng, n, 3.0);
            for k in 0..10 {
                let eps = k as f64 * 0.1;
                let r = dz_check(&f, &mu, eps, &grid).unwrap();
                assert!(r.margin >= -1e-9, "integrated margin {}", r.margin);
                assert!(r.tail.min_margin() >= -1e-12, "tail margin");
            }
        }
    }

    #[test]
    fn ko_bound_rademacher_square() {
        // log cosh s ≤ (as)²/4 for a = √2·2e·‖f‖ ≈ 9.23
        let (f, mu) = rademacher();
        let alpha = ConvexGauge::x2();
        let m = crate::convex::derive_m_alpha(&alpha, &default_s_grid()).unwrap();
        let scan = ko_bound_check(&f, &mu, &alpha, &m, &default_s_grid()).unwrap();
        assert!(scan.min_margin() >= 0.0, "margin {}", scan.min_margin());
    }

    #[test]
    fn ko_bound_zero_function_has_zero_margins() {
        let f = SpaceFunction::constant(2, 0.0).unwrap();
        let mu = DiscreteMeasure::uniform(2);
        let alpha = ConvexGauge::x2();
        let m = crate::convex::derive_m_alpha(&alpha, &default_s_grid()).unwrap();
        let scan = ko_bound_check(&f, &mu, &alpha, &m, &default_s_grid()).unwrap();
        for &(_, margin) in &scan.entries {
            assert_eq!(margin, 0.0);
        }
    }

    #[test]
    fn dual_condition_trivial_class() {
        // Φ = {0}: the margin is just α⊛(as) ≥ 0, tending to 0 at small s
        let mu = DiscreteMeasure::uniform(2);
        let zero = SpaceFunction::constant(2, 0.0).unwrap();
        let class = FunctionClass::explicit(vec![zero]).unwrap();
        let report =
            dual_condition_check(&mu, &class, &ConvexGauge::x2(), 1.0, &default_s_grid())
                .unwrap();
        assert!(report.min_margin >= 0.0);
        assert!(report.min_margin < 1e-6, "margin {}", report.min_margin);
    }

    #[test]
    fn ko_bound_refuses_uncentered_input() {
        let f = SpaceFunction::new(vec![1.0, 0.0]).unwrap();
        let mu = DiscreteMeasure::uniform(2);
        let alpha = ConvexGauge::x2();
        let m = crate::convex::derive_m_alpha(&alpha, &default_s_grid()).unwrap();
        assert!(matches!(
            ko_bound_check(&f, &mu, &alpha, &m, &default_s_grid()),
            Err(Error::NotCentered { .. })
        ));
    }

    #[test]
    fn ko_bound_random_family() {
        // gauges whose conjugates admit a superquadratic witness; x³ has
        // conjugate ~ s^{3/2}, which dominates s² near zero, so it passes
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let gauges = [
            ConvexGauge::x2(),
            ConvexGauge::x2_over_2(),
            ConvexGauge::power(3.0, 1.0).unwrap(),
        ];
        for alpha in &gauges {
            let m = crate::convex::derive_m_alpha(alpha, &default_s_grid()).unwrap();
            for _ in 0..66 {
                let n = rng.random_range(2..=10);
            let (f, mu) = random_pair(&mut rng, n, 2.0);
                let f = f.centered(&mu).unwrap();
                let grid = default_ko_grid(alpha, 1.0);
                let scan = ko_bound_check(&f, &mu, alpha, &m, &grid).unwrap();
                assert!(
                    scan.min_margin() >= -1e-9,
                    "margin {} for {alpha:?}",
                    scan.min_margin()
                );
            }
        }
    }

    #[test]
    fn dual_condition_hoeffding() {
        // Φ = {±(1,−1)}, α = t²/2, a = 1: log cosh s ≤ s²/2
        let (f, mu) = rademacher();
        let class = FunctionClass::explicit(vec![f]).unwrap();
        let report =
            dual_condition_check(&mu, &class, &ConvexGauge::x2_over_2(), 1.0, &default_s_grid())
                .unwrap();
        assert!(report.min_margin >= 0.0, "margin {}", report.min_margin);
    }

    #[test]
    fn dual_condition_detects_undersized_constant() {
        // α = t², a = 0.1: at s = 1 the bound (0.1 s)²/4 is far below log cosh s
        let (f, mu) = rademacher();
        let class = FunctionClass::explicit(vec![f]).unwrap();
        let report =
            dual_condition_check(&mu, &class, &ConvexGauge::x2(), 0.1, &default_s_grid()).unwrap();
        assert!(report.min_margin < 0.0);
        let probe = 0.0025 - 1f64.cosh().ln();
        assert!(report.min_margin <= probe + 1e-9);
    }

    #[test]
    fn dual_condition_requires_explicit_class() {
        let mu = DiscreteMeasure::uniform(2);
        let chi = FunctionClass::chi_bounded(SpaceFunction::constant(2, 1.0).unwrap()).unwrap();
        assert!(matches!(
            dual_condition_check(&mu, &chi, &ConvexGauge::x2(), 1.0, &default_s_grid()),
            Err(Error::NonExplicitClass)
        ));
    }

    #[test]
    fn dual_condition_implies_variance_lower_bound() {
        // when the condition passes, α⊛(as)/s² at small s dominates Var/2
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let alpha = ConvexGauge::x2_over_2();
        for _ in 0..20 {
            let n = rng.random_range(2..6);
            let (phi, mu) = random_pair(&mut rng, n, 1.0);
            let centered = phi.centered(&mu).unwrap();
            let var = mu
                .support()
                .map(|i| mu.weight(i) * centered.value(i) * centered.value(i))
                .sum::<f64>();
            if var < 1e-6 {
                continue;
            }
            let class = FunctionClass::explicit(vec![phi]).unwrap();
            // a large enough constant certifies the condition
            let a = 4.0;
            let report =
                dual_condition_check(&mu, &class, &alpha, a, &default_s_grid()).unwrap();
            assert!(report.min_margin >= 0.0);
            let beta = alpha.conjugate(&default_s_grid());
            let small = GridSpec::geometric(1e-4, 1e-2, 20);
            let proxy = small
                .points()
                .iter()
                .map(|&s| beta.eval(a * s) / (s * s))
                .fold(f64::INFINITY, f64::min);
            assert!(proxy >= var / 2.0 - 1e-3, "proxy {proxy} vs var/2 {}", var / 2.0);
        }
    }

    #[test]
    fn subgaussian_examples() {
        let (f, mu) = rademacher();
        let grid = GridSpec::linear(0.0, 10.0, 256);
        let scan = subgaussian_check(&f, &mu, &grid).unwrap();
        assert!(scan.min_margin() >= 0.0);
        // strict margin away from s = 0: s²/2 + 2s² − log cosh s > 0
        let strict: Vec<_> = scan.entries.iter().filter(|e| e.0 > 0.1).collect();
        assert!(strict.iter().all(|e| e.1 > 0.0));

        let zero = SpaceFunction::constant(2, 0.0).unwrap();
        let scan = subgaussian_check(&zero, &mu, &grid).unwrap();
        assert!(scan.min_margin() >= 0.0);

        let shifted = SpaceFunction::new(vec![2.0, 0.0]).unwrap();
        let scan = subgaussian_check(&shifted, &mu, &grid).unwrap();
        assert!(scan.min_margin() >= -1e-9);
    }

    #[test]
    fn subgaussian_random_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(202);
        let grid = GridSpec::linear(0.0, 10.0, 128);
        for _ in 0..200 {
            let n = rng.random_range(2..=8);
            let (f, mu) = random_pair(&mut rng, n, 2.5);
            let scan = subgaussian_check(&f, &mu, &grid).unwrap();
            assert!(scan.min_margin() >= -1e-9, "margin {}", scan.min_margin());
        }
    }

    #[test]
    fn margins_are_sorted_worst_first() {
        let scan = MarginScan::from_entries(vec![(1.0, 0.5), (2.0, -0.25), (3.0, 0.1)]);
        assert_eq!(scan.min_margin(), -0.25);
        assert_eq!(scan.worst_location(), Some(2.0));
        assert!(scan.entries.windows(2).all(|w| w[0].1 <= w[1].1));
    }
}
