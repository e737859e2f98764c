//! One-dimensional convex calculus on the nonnegative half-line.
//!
//! The central object is a [`ConvexGauge`]: a convex, lower semi-continuous
//! function α : ℝ⁺ → ℝ⁺ ∪ {+∞} with α(0) = 0. Gauges play three roles here:
//! the entropy-side function α, its monotone conjugate
//!
//! ```text
//! α⊛(s) = sup_{t≥0} { st − α(t) }
//! ```
//!
//! and the cost gauge q used to build transport costs q(d(x,y)).
//!
//! Everything downstream rests on a few facts: conjugates of gauges are
//! gauges, biconjugation is the identity (α⊛⊛ = α), and Young's inequality
//! st ≤ α(t) + α⊛(s) holds with equality along the subdifferential. The
//! tests check all three numerically.
//!
//! Besides conjugation the module computes:
//! - generalized inverses inf{t : α(t) ≥ y} and sup{t : α(t) ≤ y},
//! - superquadratic witnesses (c, s) with α⊛(s′) ≥ c·s′² for s′ ≤ s,
//! - the constant m_α = e·max(1/(α⁻¹(2)√(c(1−u))), 1/u) with its balancing
//!   parameter u,
//! - doubling constants K with q(2x) ≤ K·q(x).

use crate::grid::GridSpec;
use crate::num::{golden_max, ternary_min};
use crate::{Error, Result};

/// Closed-under-conjugation representation of a gauge.
///
/// `Power` and `PiecewiseLinear` conjugate in closed form. `DomainCapped`
/// restricts an inner gauge to [0, cap] (or [0, cap) when open).
/// `CappedConjugate` is the lazy conjugate of a capped gauge,
/// s ↦ sup_{t ∈ [0, radius]} { st − inner(t) }: the four explicit families
/// are not closed under conjugation of capped gauges, and a grid sample
/// would lose the (always unbounded) domain of such a conjugate.
#[derive(Debug, Clone, PartialEq)]
pub enum GaugeFamily {
    /// α(t) = scale · t^exponent, exponent ≥ 1, scale ≥ 0.
    Power { exponent: f64, scale: f64 },
    /// Piecewise-linear interpolation of `knots`, extended beyond the last
    /// knot with the final slope. First knot must be (0, 0).
    PiecewiseLinear { knots: Vec<(f64, f64)> },
    /// inner(t) on [0, cap] (closed) or [0, cap) (open), +∞ beyond.
    DomainCapped {
        inner: Box<ConvexGauge>,
        cap: f64,
        closed: bool,
    },
    /// s ↦ max_{t ∈ [0, radius]} { st − inner(t) }; finite on all of ℝ⁺.
    CappedConjugate { inner: Box<ConvexGauge>, radius: f64 },
    /// Piecewise-linear interpolation of samples on [0, last abscissa],
    /// +∞ beyond. First sample must be (0, 0).
    GridSampled {
        abscissae: Vec<f64>,
        values: Vec<f64>,
    },
}

/// A convex l.s.c. gauge α on ℝ⁺ with α(0) = 0, nondecreasing, possibly +∞
/// outside a bounded effective domain.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexGauge {
    family: GaugeFamily,
}

/// Which generalized inverse of a nondecreasing gauge to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseSide {
    /// inf{t ≥ 0 : α(t) ≥ y}
    Lower,
    /// sup{t ≥ 0 : α(t) ≤ y}
    Upper,
}

/// Classification of the effective domain {s : β(s) < ∞} of a conjugate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainStatus {
    /// Domain is [0, b) with b possibly +∞ — open on the left of its right end.
    OpenOnLeft { b: f64 },
    /// Domain is [0, b] with b finite (endpoint attained), or degenerate {0}.
    ClosedAtEnd { b: f64 },
    /// Grid-sampled input: the behaviour past the grid is unknowable.
    Indeterminate { grid_end: f64 },
}

impl DomainStatus {
    /// True when the domain is open on the left of its right endpoint.
    pub fn holds(&self) -> bool {
        matches!(self, DomainStatus::OpenOnLeft { .. })
    }
}

/// A certified pair (c, s) with β(s′) ≥ c·s′² for every grid point s′ ≤ s.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperquadraticWitness {
    pub c: f64,
    pub s: f64,
    /// Grid abscissae on which the bound was verified.
    pub certified_grid: Vec<f64>,
}

/// The constant m_α = e · max(1/(α⁻¹(2)√(c(1−u))), 1/u) together with the
/// balancing parameter u and the slack of its two feasibility constraints
/// u/√(1−u) ≤ s·√c and u³/(1−u) ≤ 2.
#[derive(Debug, Clone, PartialEq)]
pub struct MAlphaResult {
    pub u: f64,
    pub m_alpha: f64,
    pub slack_ratio: f64,
    pub slack_cubic: f64,
    pub witness: SuperquadraticWitness,
}

const CONVEXITY_TOL_GRID: f64 = 1e-6;
const CONVEXITY_TOL_CLOSED: f64 = 1e-9;

impl ConvexGauge {
    // ------------------------------------------------------------------
    // constructors
    // ------------------------------------------------------------------

    /// α(t) = scale · t^exponent. Convexity on ℝ⁺ requires exponent ≥ 1.
    pub fn power(exponent: f64, scale: f64) -> Result<Self> {
        if !exponent.is_finite() || exponent < 1.0 {
            return Err(Error::InvalidGauge(format!(
                "power exponent must be >= 1 for convexity, got {exponent}"
            )));
        }
        if !scale.is_finite() || scale < 0.0 {
            return Err(Error::InvalidGauge(format!(
                "power scale must be finite and >= 0, got {scale}"
            )));
        }
        Ok(ConvexGauge {
            family: GaugeFamily::Power { exponent, scale },
        })
    }

    /// t ↦ t²
    pub fn x2() -> Self {
        ConvexGauge::power(2.0, 1.0).unwrap()
    }

    /// t ↦ t²/2
    pub fn x2_over_2() -> Self {
        ConvexGauge::power(2.0, 0.5).unwrap()
    }

    /// t ↦ t
    pub fn linear() -> Self {
        ConvexGauge::power(1.0, 1.0).unwrap()
    }

    /// The zero gauge (identically 0 on ℝ⁺).
    pub fn zero() -> Self {
        ConvexGauge::power(1.0, 0.0).unwrap()
    }

    /// Piecewise-linear gauge through `knots`, extended beyond the last knot
    /// with the final slope. Requires (0,0) first, strictly increasing
    /// abscissae, nonnegative first slope, nondecreasing slopes.
    pub fn piecewise_linear(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidGauge(
                "piecewise-linear gauge needs at least two knots".into(),
            ));
        }
        if knots[0] != (0.0, 0.0) {
            return Err(Error::InvalidGauge(format!(
                "first knot must be (0, 0), got {:?}",
                knots[0]
            )));
        }
        let mut prev_slope = 0.0f64; // slopes below 0 would dip under alpha(0) = 0
        for w in knots.windows(2) {
            let (t0, v0) = w[0];
            let (t1, v1) = w[1];
            if !(t1.is_finite() && v1.is_finite()) {
                return Err(Error::InvalidGauge("knots must be finite".into()));
            }
            if t1 <= t0 {
                return Err(Error::InvalidGauge(
                    "knot abscissae must be strictly increasing".into(),
                ));
            }
            let slope = (v1 - v0) / (t1 - t0);
            let tol = CONVEXITY_TOL_CLOSED * (1.0 + slope.abs() + prev_slope.abs());
            if slope < prev_slope - tol {
                return Err(Error::InvalidGauge(format!(
                    "slopes must be nondecreasing and nonnegative (convexity): {prev_slope} then {slope}"
                )));
            }
            prev_slope = slope.max(prev_slope);
        }
        Ok(ConvexGauge {
            family: GaugeFamily::PiecewiseLinear { knots },
        })
    }

    /// Restrict `inner` to [0, cap] (closed) or [0, cap) (open).
    pub fn capped(inner: ConvexGauge, cap: f64, closed: bool) -> Result<Self> {
        if !cap.is_finite() || cap < 0.0 {
            return Err(Error::InvalidGauge(format!(
                "cap must be finite and >= 0, got {cap}"
            )));
        }
        if cap == 0.0 && !closed {
            return Err(Error::InvalidGauge(
                "open cap at 0 would violate alpha(0) = 0".into(),
            ));
        }
        // flatten nested caps; an unreachable cap is dropped
        let (inner, cap, closed) = match inner.family {
            GaugeFamily::DomainCapped {
                inner: nested,
                cap: inner_cap,
                closed: inner_closed,
            } => {
                if inner_cap < cap {
                    (*nested, inner_cap, inner_closed)
                } else if inner_cap == cap {
                    (*nested, cap, closed && inner_closed)
                } else {
                    (*nested, cap, closed)
                }
            }
            _ => (inner, cap, closed),
        };
        // a cap at which the inner gauge is already infinite acts as open
        let closed = closed && inner.eval(cap).is_finite();
        Ok(ConvexGauge {
            family: GaugeFamily::DomainCapped {
                inner: Box::new(inner),
                cap,
                closed,
            },
        })
    }

    /// Gauge from samples (abscissae, values); evaluation interpolates
    /// linearly and is +∞ beyond the last abscissa. Convexity of the samples
    /// is validated to relative tolerance 1e-6.
    pub fn grid_sampled(abscissae: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if abscissae.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: abscissae.len(),
                got: values.len(),
            });
        }
        if abscissae.len() < 2 {
            return Err(Error::InvalidGauge("need at least two samples".into()));
        }
        if abscissae[0] != 0.0 || values[0] != 0.0 {
            return Err(Error::InvalidGauge(
                "first sample must be (0, 0)".into(),
            ));
        }
        let mut prev_slope = f64::NEG_INFINITY;
        let scale = values.iter().fold(0f64, |m, v| m.max(v.abs()));
        for i in 1..abscissae.len() {
            if !(abscissae[i].is_finite() && values[i].is_finite()) {
                return Err(Error::InvalidGauge("samples must be finite".into()));
            }
            if abscissae[i] <= abscissae[i - 1] {
                return Err(Error::InvalidGauge(
                    "abscissae must be strictly increasing".into(),
                ));
            }
            if values[i] < -CONVEXITY_TOL_GRID * (1.0 + scale) {
                return Err(Error::InvalidGauge("values must be nonnegative".into()));
            }
            let slope = (values[i] - values[i - 1]) / (abscissae[i] - abscissae[i - 1]);
            let tol = CONVEXITY_TOL_GRID * (1.0 + slope.abs().max(prev_slope.abs()));
            if slope < prev_slope - tol {
                return Err(Error::InvalidGauge(format!(
                    "samples are not convex near t = {}",
                    abscissae[i]
                )));
            }
            prev_slope = prev_slope.max(slope);
        }
        Ok(ConvexGauge {
            family: GaugeFamily::GridSampled { abscissae, values },
        })
    }

    pub fn family(&self) -> &GaugeFamily {
        &self.family
    }

    // ------------------------------------------------------------------
    // evaluation and domain
    // ------------------------------------------------------------------

    /// α(t), +∞ outside the effective domain (including t < 0).
    pub fn eval(&self, t: f64) -> f64 {
        if t < 0.0 || t.is_nan() {
            return f64::INFINITY;
        }
        match &self.family {
            GaugeFamily::Power { exponent, scale } => {
                if *scale == 0.0 {
                    0.0
                } else if *exponent == 1.0 {
                    scale * t
                } else if *exponent == 2.0 {
                    scale * t * t
                } else {
                    scale * t.powf(*exponent)
                }
            }
            GaugeFamily::PiecewiseLinear { knots } => eval_pwl(knots, t, true),
            GaugeFamily::DomainCapped { inner, cap, closed } => {
                if t > *cap || (t == *cap && !*closed) {
                    f64::INFINITY
                } else {
                    inner.eval(t)
                }
            }
            GaugeFamily::CappedConjugate { inner, radius } => {
                capped_conjugate_eval(inner, *radius, t)
            }
            GaugeFamily::GridSampled { abscissae, values } => {
                let last = *abscissae.last().unwrap();
                if t > last {
                    f64::INFINITY
                } else {
                    interp(abscissae, values, t)
                }
            }
        }
    }

    /// Right endpoint r_α of the effective domain (+∞ when unbounded).
    pub fn domain_end(&self) -> f64 {
        match &self.family {
            GaugeFamily::Power { .. }
            | GaugeFamily::PiecewiseLinear { .. }
            | GaugeFamily::CappedConjugate { .. } => f64::INFINITY,
            GaugeFamily::DomainCapped { cap, .. } => *cap,
            GaugeFamily::GridSampled { abscissae, .. } => *abscissae.last().unwrap(),
        }
    }

    /// Whether a finite domain endpoint belongs to the domain.
    pub fn domain_closed(&self) -> bool {
        match &self.family {
            GaugeFamily::DomainCapped { closed, .. } => *closed,
            _ => true,
        }
    }

    // ------------------------------------------------------------------
    // conjugation
    // ------------------------------------------------------------------

    /// Monotone conjugate α⊛(s) = sup_{t≥0}{ st − α(t) }.
    ///
    /// Power and piecewise-linear gauges conjugate in closed form; capped
    /// gauges produce a lazy [`GaugeFamily::CappedConjugate`]; grid samples
    /// produce a dense Legendre transform on `resolution`, with a
    /// golden-section refinement pass around each arg-sup.
    pub fn conjugate(&self, resolution: &GridSpec) -> ConvexGauge {
        match &self.family {
            GaugeFamily::Power { exponent, scale } => {
                if *scale == 0.0 {
                    // conj of the zero gauge: indicator of {0}
                    ConvexGauge::capped(ConvexGauge::zero(), 0.0, true).unwrap()
                } else if *exponent == 1.0 {
                    // conj of scale·t: indicator of [0, scale]
                    ConvexGauge::capped(ConvexGauge::zero(), *scale, true).unwrap()
                } else {
                    // conj of c·t^p: (p−1)·c·(cp)^{−p′} · s^{p′}, p′ = p/(p−1)
                    let p = *exponent;
                    let c = *scale;
                    let p_dual = p / (p - 1.0);
                    let factor = (p - 1.0) * c * (c * p).powf(-p_dual);
                    ConvexGauge::power(p_dual, factor).unwrap()
                }
            }
            GaugeFamily::PiecewiseLinear { knots } => conjugate_pwl(knots),
            GaugeFamily::DomainCapped { inner, cap, .. } => ConvexGauge {
                family: GaugeFamily::CappedConjugate {
                    inner: inner.clone(),
                    radius: *cap,
                },
            },
            GaugeFamily::CappedConjugate { inner, radius } => {
                // biconjugation: conj of sup_{t≤r}{st − inner(t)} is the
                // l.s.c. closure of the capped gauge itself
                ConvexGauge::capped((**inner).clone(), *radius, true).unwrap()
            }
            GaugeFamily::GridSampled { abscissae, values } => {
                conjugate_grid(abscissae, values, resolution)
            }
        }
    }

    /// Convexity / monotonicity / vanishing-at-0 diagnostics over a probe
    /// grid restricted to the effective domain. Used by tests and by
    /// consumers validating externally supplied gauges.
    pub fn check_class_membership(&self, probe: &GridSpec) -> Result<()> {
        if self.eval(0.0) != 0.0 {
            return Err(Error::InvalidGauge(format!(
                "alpha(0) = {} instead of 0",
                self.eval(0.0)
            )));
        }
        let pts: Vec<f64> = probe
            .points()
            .into_iter()
            .filter(|&t| t >= 0.0 && self.eval(t).is_finite())
            .collect();
        let tol = match self.family {
            GaugeFamily::GridSampled { .. } => CONVEXITY_TOL_GRID,
            _ => CONVEXITY_TOL_CLOSED,
        };
        for w in pts.windows(3) {
            let (t1, t2, t3) = (w[0], w[1], w[2]);
            let (v1, v2, v3) = (self.eval(t1), self.eval(t2), self.eval(t3));
            let chord = v1 + (v3 - v1) * (t2 - t1) / (t3 - t1);
            if v2 > chord + tol * (1.0 + chord.abs()) {
                return Err(Error::InvalidGauge(format!(
                    "convexity violated near t = {t2}: {v2} above chord {chord}"
                )));
            }
        }
        for w in pts.windows(2) {
            let (a, b) = (self.eval(w[0]), self.eval(w[1]));
            if b < a - tol * (1.0 + a.abs()) {
                return Err(Error::InvalidGauge(format!(
                    "gauge must be nondecreasing; decreases near t = {}",
                    w[1]
                )));
            }
        }
        Ok(())
    }
}

fn eval_pwl(knots: &[(f64, f64)], t: f64, extend: bool) -> f64 {
    let (t_last, v_last) = *knots.last().unwrap();
    if t >= t_last {
        if !extend {
            return if t == t_last { v_last } else { f64::INFINITY };
        }
        let (t_prev, v_prev) = knots[knots.len() - 2];
        let slope = (v_last - v_prev) / (t_last - t_prev);
        return v_last + slope * (t - t_last);
    }
    // binary search for the segment containing t
    let idx = knots.partition_point(|&(x, _)| x <= t);
    let (t0, v0) = knots[idx - 1];
    let (t1, v1) = knots[idx];
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

fn interp(xs: &[f64], vs: &[f64], t: f64) -> f64 {
    let last = *xs.last().unwrap();
    if t >= last {
        return *vs.last().unwrap();
    }
    let idx = xs.partition_point(|&x| x <= t);
    let (x0, x1) = (xs[idx - 1], xs[idx]);
    let (v0, v1) = (vs[idx - 1], vs[idx]);
    v0 + (v1 - v0) * (t - x0) / (x1 - x0)
}

/// sup_{t ∈ [0, radius]}{ st − inner(t) }: closed form for power inners,
/// exact knot scan for piecewise-linear, golden-section otherwise.
fn capped_conjugate_eval(inner: &ConvexGauge, radius: f64, s: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    match &inner.family {
        GaugeFamily::Power { exponent, scale } => {
            let (p, c) = (*exponent, *scale);
            let t_star = if c == 0.0 {
                radius
            } else if p == 1.0 {
                if s > c {
                    radius
                } else {
                    0.0
                }
            } else {
                (s / (c * p)).powf(1.0 / (p - 1.0)).min(radius)
            };
            (s * t_star - inner.eval(t_star)).max(0.0)
        }
        GaugeFamily::PiecewiseLinear { knots } => {
            // concave piecewise-linear objective: max over knots and the cap
            let mut best = 0.0f64;
            for &(t, v) in knots.iter().take_while(|&&(t, _)| t <= radius) {
                best = best.max(s * t - v);
            }
            best.max(s * radius - eval_pwl(knots, radius, true))
        }
        _ => {
            let objective = |t: f64| {
                let v = inner.eval(t);
                if v.is_finite() {
                    s * t - v
                } else {
                    f64::NEG_INFINITY
                }
            };
            let (_, sup) = golden_max(objective, 0.0, radius, 200);
            sup.max(0.0).max(objective(radius)).max(objective(0.0))
        }
    }
}

/// Closed-form conjugate of a piecewise-linear gauge: piecewise linear with
/// knots at the slopes, capped (closed) at the final slope.
fn conjugate_pwl(knots: &[(f64, f64)]) -> ConvexGauge {
    // segment slopes and their right break points; the final slope extends
    // to +∞ so the conjugate is +∞ past it
    let mut slopes: Vec<(f64, f64, f64)> = Vec::new(); // (slope, break t, break value)
    for w in knots.windows(2) {
        let (t0, v0) = w[0];
        let (t1, v1) = w[1];
        let m = (v1 - v0) / (t1 - t0);
        match slopes.last_mut() {
            Some(last) if (m - last.0).abs() <= 1e-15 * (1.0 + m.abs()) => {
                last.1 = t1;
                last.2 = v1;
            }
            _ => slopes.push((m, t1, v1)),
        }
    }
    let m_last = slopes.last().unwrap().0;
    if m_last <= 0.0 {
        // the gauge is identically zero: conjugate is the indicator of {0}
        return ConvexGauge::capped(ConvexGauge::zero(), 0.0, true).unwrap();
    }
    let mut conj_knots: Vec<(f64, f64)> = vec![(0.0, 0.0)];
    let m_first = slopes[0].0;
    if m_first > 0.0 {
        conj_knots.push((m_first, 0.0));
    }
    // between consecutive slopes the arg-sup sits at the break knot
    for pair in slopes.windows(2) {
        let (_, t_break, v_break) = pair[0];
        let (m_next, _, _) = pair[1];
        conj_knots.push((m_next, m_next * t_break - v_break));
    }
    // keep only strictly increasing abscissae (m_first may repeat at 0)
    conj_knots.dedup_by(|b, a| b.0 <= a.0);
    let pwl = if conj_knots.len() >= 2 {
        ConvexGauge::piecewise_linear(conj_knots).expect("conjugate knots are convex")
    } else {
        ConvexGauge::zero()
    };
    ConvexGauge::capped(pwl, m_last, true).unwrap()
}

/// Dense Legendre transform of grid samples: sup over sample knots, then a
/// golden-section refinement of the interpolated objective around the
/// arg-sup (a no-op for exact piecewise-linear data, by concavity).
fn conjugate_grid(xs: &[f64], vs: &[f64], resolution: &GridSpec) -> ConvexGauge {
    let mut s_points: Vec<f64> = resolution.points().into_iter().filter(|&s| s > 0.0).collect();
    s_points.dedup();
    let mut abscissae = Vec::with_capacity(s_points.len() + 1);
    let mut values = Vec::with_capacity(s_points.len() + 1);
    abscissae.push(0.0);
    values.push(0.0);
    for s in s_points {
        let mut best = f64::NEG_INFINITY;
        let mut best_idx = 0;
        for (i, (&t, &v)) in xs.iter().zip(vs.iter()).enumerate() {
            let g = s * t - v;
            if g > best {
                best = g;
                best_idx = i;
            }
        }
        let lo = if best_idx == 0 { xs[0] } else { xs[best_idx - 1] };
        let hi = if best_idx + 1 < xs.len() {
            xs[best_idx + 1]
        } else {
            xs[best_idx]
        };
        if hi > lo {
            let (_, refined) = golden_max(|t| s * t - interp(xs, vs, t), lo, hi, 60);
            best = best.max(refined);
        }
        abscissae.push(s);
        values.push(best.max(0.0));
    }
    ConvexGauge::grid_sampled(abscissae, values).expect("legendre transform of convex data is convex")
}

// ----------------------------------------------------------------------
// generalized inverses
// ----------------------------------------------------------------------

/// Generalized inverse of a nondecreasing gauge by bisection.
///
/// `Lower` returns inf{t ≥ 0 : α(t) ≥ y} (+∞ when y exceeds sup α);
/// `Upper` returns sup{t ≥ 0 : α(t) ≤ y} (+∞ when α never exceeds y).
/// `tol` is the absolute tolerance on t.
pub fn generalized_inverse(alpha: &ConvexGauge, y: f64, side: InverseSide, tol: f64) -> f64 {
    assert!(y >= 0.0, "generalized inverse requires y >= 0");
    match side {
        InverseSide::Lower => {
            if alpha.eval(0.0) >= y {
                return 0.0;
            }
            let mut hi = 1.0f64;
            let mut guard = 0;
            while alpha.eval(hi) < y {
                hi *= 2.0;
                guard += 1;
                if guard > 1100 {
                    return f64::INFINITY;
                }
            }
            if hi <= tol {
                return hi;
            }
            crate::num::bisect_boundary(|t| alpha.eval(t) >= y, 0.0, hi, tol)
        }
        InverseSide::Upper => {
            if alpha.eval(0.0) > y {
                return 0.0;
            }
            let mut hi = 1.0f64;
            let mut guard = 0;
            while alpha.eval(hi) <= y {
                hi *= 2.0;
                guard += 1;
                if guard > 1100 {
                    return f64::INFINITY;
                }
            }
            crate::num::bisect_boundary(|t| alpha.eval(t) > y, 0.0, hi, tol)
        }
    }
}

// ----------------------------------------------------------------------
// assumption checks: domain openness and superquadraticity
// ----------------------------------------------------------------------

/// Classify the effective domain of a conjugate β: open on the left of its
/// right endpoint ([0, b), including b = +∞), or closed ([0, b]).
/// Grid-sampled inputs are reported indeterminate rather than guessed.
pub fn check_domain_open(beta: &ConvexGauge) -> DomainStatus {
    match beta.family() {
        GaugeFamily::GridSampled { abscissae, .. } => DomainStatus::Indeterminate {
            grid_end: *abscissae.last().unwrap(),
        },
        GaugeFamily::DomainCapped { cap, closed, .. } => {
            if *closed || *cap == 0.0 {
                DomainStatus::ClosedAtEnd { b: *cap }
            } else {
                DomainStatus::OpenOnLeft { b: *cap }
            }
        }
        _ => DomainStatus::OpenOnLeft {
            b: f64::INFINITY,
        },
    }
}

/// Search for a superquadratic witness: a pair (c, s) with β(s′) ≥ c·s′² for
/// all s′ ≤ s. Candidate thresholds are the grid points; for each, c is the
/// minimum of β(s′)/s′² over grid points below; among valid pairs the one
/// minimizing the resulting m_α (for the given α⁻¹(2)) wins.
///
/// Returns `None` when the ratio vanishes at some grid point (β is flat near
/// 0) or decays toward 0 at a power rate, i.e. superquadraticity fails.
pub fn superquadratic_witness(
    beta: &ConvexGauge,
    s_grid: &GridSpec,
    alpha_inv2: f64,
) -> Option<SuperquadraticWitness> {
    let pts: Vec<f64> = s_grid.points().into_iter().filter(|&s| s > 0.0).collect();
    if pts.is_empty() {
        return None;
    }
    let ratios: Vec<(f64, f64)> = pts
        .iter()
        .map(|&s| (s, beta.eval(s) / (s * s)))
        .collect();
    // exact failure: β vanishes at a positive point, hence on a whole
    // initial interval by convexity
    if ratios.iter().any(|&(_, r)| r <= 0.0) {
        return None;
    }
    // power-rate decay toward 0: estimate the log-log slope on the two
    // smallest finite-ratio points; β ~ s^p near 0 gives slope p − 2
    let finite_head: Vec<(f64, f64)> = ratios
        .iter()
        .copied()
        .filter(|&(_, r)| r.is_finite())
        .take(2)
        .collect();
    if finite_head.len() < 2 {
        return None;
    }
    let (s1, r1) = finite_head[0];
    let (s2, r2) = finite_head[1];
    let head_slope = (r2.ln() - r1.ln()) / (s2.ln() - s1.ln());
    if head_slope > 0.05 {
        return None;
    }

    let a_inv2 = alpha_inv2;
    let mut best: Option<(f64, SuperquadraticWitness)> = None;
    let mut running_min = f64::INFINITY;
    for (idx, &(s_k, _)) in ratios.iter().enumerate() {
        let r_k = ratios[idx].1;
        if r_k.is_finite() {
            running_min = running_min.min(r_k);
        }
        if !running_min.is_finite() || running_min <= 0.0 {
            continue;
        }
        let c_k = running_min;
        if let Some((_, g)) = optimize_balance(a_inv2, c_k, s_k) {
            let m = std::f64::consts::E * g;
            // a larger threshold never hurts (it only relaxes the ratio
            // constraint), so ties go to the larger s
            let better = match &best {
                None => true,
                Some((m_best, w_best)) => {
                    m < m_best * (1.0 - 1e-13)
                        || (m <= m_best * (1.0 + 1e-13) && s_k > w_best.s)
                }
            };
            if better {
                best = Some((
                    m,
                    SuperquadraticWitness {
                        c: c_k,
                        s: s_k,
                        certified_grid: pts.iter().copied().filter(|&p| p <= s_k).collect(),
                    },
                ));
            }
        }
    }
    best.map(|(_, w)| w)
}

/// Minimize g(u) = max(A/√(c(1−u)), 1/u) over u in (0, 1) subject to
/// u/√(1−u) ≤ s√c and u³/(1−u) ≤ 2, by ternary search (the first term is
/// increasing, the second decreasing, so the max is unimodal).
/// A = 1/α⁻¹(2). Returns (u, g(u)), or None when infeasible.
fn optimize_balance(alpha_inv2: f64, c: f64, s: f64) -> Option<(f64, f64)> {
    const EPS: f64 = 1e-6;
    let cap_ratio = s * c.sqrt();
    // u/√(1−u) is increasing on (0,1): invert by bisection
    let u_cap1 = if cap_ratio >= 1e9 {
        1.0 - EPS
    } else {
        crate::num::bisect_boundary(|u| u / (1.0 - u).sqrt() > cap_ratio, 0.0, 1.0 - 1e-15, 1e-15)
    };
    let u_cap2 =
        crate::num::bisect_boundary(|u| u.powi(3) / (1.0 - u) > 2.0, 0.0, 1.0 - 1e-15, 1e-15);
    let hi = u_cap1.min(u_cap2).min(1.0 - EPS);
    if hi <= EPS {
        return None;
    }
    let a = 1.0 / alpha_inv2;
    let g = |u: f64| (a / (c * (1.0 - u)).sqrt()).max(1.0 / u);
    let (u_star, _) = ternary_min(g, EPS, hi, 300);
    // tie toward smaller u: walk left while the value does not degrade
    let mut u = u_star;
    let v = g(u);
    let mut probe = u * (1.0 - 1e-12);
    while probe > EPS && g(probe) <= v {
        u = probe;
        probe *= 1.0 - 1e-12;
    }
    // clamp any bisection overshoot back into the feasible region
    while u > EPS && (u / (1.0 - u).sqrt() > cap_ratio || u.powi(3) / (1.0 - u) > 2.0) {
        u -= 1e-13 * (1.0 + u);
    }
    Some((u, g(u)))
}

/// The constant m_α for a validated witness:
/// m_α = e · max(1/(α⁻¹(2)·√(c(1−u))), 1/u) with u feasible for
/// u/√(1−u) ≤ s√c and u³/(1−u) ≤ 2, chosen to minimize m_α.
pub fn m_alpha(alpha: &ConvexGauge, witness: &SuperquadraticWitness) -> Result<MAlphaResult> {
    let inv2 = generalized_inverse(alpha, 2.0, InverseSide::Lower, 1e-13);
    if inv2 <= 0.0 {
        return Err(Error::DegenerateGauge(
            "alpha^{-1}(2) = 0: gauge jumps to infinity at 0".into(),
        ));
    }
    if !inv2.is_finite() {
        return Err(Error::DegenerateGauge(
            "alpha never reaches 2: alpha^{-1}(2) is infinite".into(),
        ));
    }
    let (u, g) = optimize_balance(inv2, witness.c, witness.s)
        .ok_or(Error::NoSuperquadraticWitness)?;
    Ok(MAlphaResult {
        u,
        m_alpha: std::f64::consts::E * g,
        slack_ratio: witness.s * witness.c.sqrt() - u / (1.0 - u).sqrt(),
        slack_cubic: 2.0 - u.powi(3) / (1.0 - u),
        witness: witness.clone(),
    })
}

/// Conjugate α, find a witness on `s_grid`, and assemble m_α in one step.
pub fn derive_m_alpha(alpha: &ConvexGauge, s_grid: &GridSpec) -> Result<MAlphaResult> {
    let beta = alpha.conjugate(s_grid);
    let inv2 = generalized_inverse(alpha, 2.0, InverseSide::Lower, 1e-13);
    if inv2 <= 0.0 || !inv2.is_finite() {
        return Err(Error::DegenerateGauge(
            "alpha^{-1}(2) must be positive and finite".into(),
        ));
    }
    let witness =
        superquadratic_witness(&beta, s_grid, inv2).ok_or(Error::NoSuperquadraticWitness)?;
    m_alpha(alpha, &witness)
}

// ----------------------------------------------------------------------
// doubling constant
// ----------------------------------------------------------------------

/// Doubling constant K = sup over the grid of q(2x)/q(x), with 0/0 read as 1.
/// Returns `None` when the ratio is infinite somewhere (including q(2x) = +∞
/// for a capped gauge) or keeps growing through the top decade of the grid.
pub fn delta2_constant(q: &ConvexGauge, t_grid: &GridSpec) -> Option<f64> {
    let pts: Vec<f64> = t_grid.points().into_iter().filter(|&x| x > 0.0).collect();
    if pts.is_empty() {
        return None;
    }
    let mut ratios: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for &x in &pts {
        let qx = q.eval(x);
        let q2x = q.eval(2.0 * x);
        if !qx.is_finite() {
            continue; // both sides out of the domain: vacuous point
        }
        let r = if qx == 0.0 {
            if q2x == 0.0 {
                1.0
            } else {
                return None; // flat at x but positive at 2x: unbounded ratio
            }
        } else if !q2x.is_finite() {
            return None; // capped gauge: q(2x) = +∞
        } else {
            q2x / qx
        };
        ratios.push((x, r));
    }
    if ratios.is_empty() {
        return None;
    }
    let k = ratios.iter().fold(0f64, |m, &(_, r)| m.max(r));
    // tail stability: if the ratio is still climbing over the top decade of
    // the grid, the supremum has not converged and we refuse to report one
    let hi = ratios.last().unwrap().0;
    let tail: Vec<f64> = ratios
        .iter()
        .filter(|&&(x, _)| x >= hi / 10.0)
        .map(|&(_, r)| r)
        .collect();
    if tail.len() >= 2 {
        let first = tail[0];
        let last = *tail.last().unwrap();
        if last > first * (1.0 + 1e-6) && last >= k * (1.0 - 1e-12) {
            return None;
        }
    }
    Some(k)
}
