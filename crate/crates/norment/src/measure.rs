//! Finite metric spaces, discrete probability measures, relative entropy,
//! and dual semi-norms over symmetric function classes.
//!
//! The dual semi-norm of a difference of measures over a class Φ is
//!
//! ```text
//! ‖ν − μ‖*_Φ = sup_{φ ∈ Φ} { ⟨φ, ν⟩ − ⟨φ, μ⟩ },
//! ```
//!
//! with three supported classes: an explicit symmetric list, the unit ball
//! of 1-Lipschitz functions (where the value is the optimal transport cost
//! for the metric, by Kantorovich–Rubinstein duality), and the χ-bounded
//! ball {φ : |φ| ≤ χ} (where it collapses to the weighted total variation
//! Σ χ_i |ν_i − μ_i|).

use crate::{Error, Result};

/// Weights below this are snapped to exact zero at construction so that
/// absolute-continuity tests are exact rather than rounding-sensitive.
const WEIGHT_CLAMP: f64 = 1e-15;
const MASS_TOL: f64 = 1e-12;

/// A finite metric space: labelled points and a distance matrix, validated
/// for symmetry, zero diagonal, positivity off the diagonal, and the
/// triangle inequality over every triple.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<f64>>,
}

impl MetricSpace {
    #[allow(clippy::needless_range_loop)]
    pub fn new(labels: Vec<String>, dist: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidSpace("space must have at least one point".into()));
        }
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidSpace(format!(
                "distance matrix must be {n}x{n}"
            )));
        }
        let scale = dist
            .iter()
            .flatten()
            .fold(0f64, |m, &d| if d.is_finite() { m.max(d.abs()) } else { m });
        let tol = 1e-12 * (1.0 + scale);
        for i in 0..n {
            if dist[i][i] != 0.0 {
                return Err(Error::InvalidSpace(format!(
                    "diagonal entry ({i},{i}) is {}, must be 0",
                    dist[i][i]
                )));
            }
            for j in 0..n {
                let d = dist[i][j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidSpace(format!(
                        "entry ({i},{j}) = {d} must be finite and nonnegative"
                    )));
                }
                if i != j && d == 0.0 {
                    return Err(Error::InvalidSpace(format!(
                        "distinct points ({i},{j}) at distance 0"
                    )));
                }
                if (d - dist[j][i]).abs() > tol {
                    return Err(Error::InvalidSpace(format!(
                        "asymmetry at ({i},{j}): {d} vs {}",
                        dist[j][i]
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][k] > dist[i][j] + dist[j][k] + tol {
                        return Err(Error::InvalidSpace(format!(
                            "triangle inequality fails: d({i},{k}) > d({i},{j}) + d({j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(MetricSpace { labels, dist })
    }

    /// Space on points of the real line with |x − y| distances.
    pub fn line(coords: &[f64]) -> Result<Self> {
        let labels = coords.iter().map(|c| format!("{c}")).collect();
        let dist = coords
            .iter()
            .map(|&a| coords.iter().map(|&b| (a - b).abs()).collect())
            .collect();
        MetricSpace::new(labels, dist)
    }

    /// Space on planar points with Euclidean distances.
    pub fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        let labels = (0..points.len()).map(|i| format!("p{i}")).collect();
        let dist = points
            .iter()
            .map(|&(ax, ay)| {
                points
                    .iter()
                    .map(|&(bx, by)| (ax - bx).hypot(ay - by))
                    .collect()
            })
            .collect();
        MetricSpace::new(labels, dist)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    pub fn dist_matrix(&self) -> &[Vec<f64>] {
        &self.dist
    }

    /// The distance function d(x0, ·) as a function on the space.
    pub fn distance_from(&self, x0: usize) -> SpaceFunction {
        SpaceFunction {
            values: self.dist[x0].clone(),
        }
    }
}

/// A probability vector over the points of a space. Weights are clamped to
/// exact zero below 1e-15 and must sum to 1 within 1e-12.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidMeasure("empty weight vector".into()));
        }
        let mut w = weights;
        for x in w.iter_mut() {
            if !x.is_finite() {
                return Err(Error::InvalidMeasure("weights must be finite".into()));
            }
            if *x < -MASS_TOL {
                return Err(Error::InvalidMeasure(format!("negative weight {x}")));
            }
            if x.abs() < WEIGHT_CLAMP {
                *x = 0.0;
            }
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!(
                "weights sum to {sum}, must be 1 within {MASS_TOL}"
            )));
        }
        Ok(DiscreteMeasure { weights: w })
    }

    /// Normalize a nonnegative vector into a probability measure.
    pub fn from_unnormalized(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum.is_finite() && sum > 0.0) {
            return Err(Error::InvalidMeasure(format!(
                "cannot normalize: total mass {sum}"
            )));
        }
        DiscreteMeasure::new(weights.into_iter().map(|x| x / sum).collect())
    }

    pub fn uniform(n: usize) -> Self {
        DiscreteMeasure {
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn dirac(n: usize, at: usize) -> Self {
        let mut w = vec![0.0; n];
        w[at] = 1.0;
        DiscreteMeasure { weights: w }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// Indices carrying positive mass.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(i, _)| i)
    }

    /// ⟨f, μ⟩ = Σ f_i μ_i
    pub fn integrate(&self, f: &SpaceFunction) -> Result<f64> {
        check_len(self.len(), f.len())?;
        Ok(self
            .weights
            .iter()
            .zip(f.values())
            .map(|(&w, &v)| w * v)
            .sum())
    }
}

/// A real-valued function on the points of a space (finite entries).
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceFunction {
    values: Vec<f64>,
}

impl SpaceFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidFunction("entries must be finite".into()));
        }
        Ok(SpaceFunction { values })
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        SpaceFunction::new(vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn negated(&self) -> SpaceFunction {
        SpaceFunction {
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// f − ⟨f, μ⟩, the μ-centered version of f.
    pub fn centered(&self, mu: &DiscreteMeasure) -> Result<SpaceFunction> {
        let mean = mu.integrate(self)?;
        Ok(SpaceFunction {
            values: self.values.iter().map(|v| v - mean).collect(),
        })
    }

    /// max over the support of μ of |f|.
    pub fn ess_sup(&self, mu: &DiscreteMeasure) -> Result<f64> {
        check_len(self.len(), mu.len())?;
        Ok(mu
            .support()
            .map(|i| self.values[i].abs())
            .fold(0.0, f64::max))
    }
}

/// A symmetric class Φ of test functions for the dual semi-norm.
#[derive(Debug, Clone)]
pub enum FunctionClass {
    /// An explicit list, closed under negation (symmetrized at construction).
    ExplicitList(Vec<SpaceFunction>),
    /// All 1-Lipschitz functions with respect to the attached space.
    LipschitzBall(MetricSpace),
    /// {φ : |φ| ≤ χ} for a nonnegative weight function χ.
    ChiBounded(SpaceFunction),
}

impl FunctionClass {
    /// Explicit class: stores every φ together with −φ.
    pub fn explicit(functions: Vec<SpaceFunction>) -> Result<Self> {
        if functions.is_empty() {
            return Err(Error::InvalidFunction("empty function class".into()));
        }
        let n = functions[0].len();
        let mut all = Vec::with_capacity(functions.len() * 2);
        for f in functions {
            check_len(n, f.len())?;
            all.push(f.negated());
            all.push(f);
        }
        Ok(FunctionClass::ExplicitList(all))
    }

    pub fn lipschitz_ball(space: MetricSpace) -> Self {
        FunctionClass::LipschitzBall(space)
    }

    pub fn chi_bounded(chi: SpaceFunction) -> Result<Self> {
        if chi.values().iter().any(|&v| v < 0.0) {
            return Err(Error::InvalidFunction("chi must be nonnegative".into()));
        }
        Ok(FunctionClass::ChiBounded(chi))
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        Err(Error::DimensionMismatch { expected, got })
    } else {
        Ok(())
    }
}

/// Relative entropy H(ν∣μ) = Σ_{ν_i > 0} ν_i log(ν_i/μ_i), with the
/// convention 0·log 0 = 0, and +∞ when ν is not absolutely continuous
/// with respect to μ. Never negative.
pub fn relative_entropy(nu: &DiscreteMeasure, mu: &DiscreteMeasure) -> Result<f64> {
    check_len(mu.len(), nu.len())?;
    let mut h = 0.0;
    for (&n_i, &m_i) in nu.weights().iter().zip(mu.weights()) {
        if n_i > 0.0 {
            if m_i == 0.0 {
                return Ok(f64::INFINITY);
            }
            h += n_i * (n_i / m_i).ln();
        }
    }
    Ok(h.max(0.0))
}

/// Dual semi-norm ‖ν − μ‖*_Φ.
///
/// - explicit list: max over the (symmetrized) list of ⟨φ, ν − μ⟩;
/// - χ-bounded ball: Σ χ_i |ν_i − μ_i| (weighted total variation);
/// - Lipschitz ball: the metric optimal transport cost 𝒯_d(ν, μ).
pub fn dual_norm(
    nu: &DiscreteMeasure,
    mu: &DiscreteMeasure,
    class: &FunctionClass,
) -> Result<f64> {
    check_len(mu.len(), nu.len())?;
    match class {
        FunctionClass::ExplicitList(functions) => {
            let mut best = f64::NEG_INFINITY;
            for f in functions {
                check_len(mu.len(), f.len())?;
                let pairing: f64 = f
                    .values()
                    .iter()
                    .zip(nu.weights().iter().zip(mu.weights()))
                    .map(|(&v, (&n, &m))| v * (n - m))
                    .sum();
                best = best.max(pairing);
            }
            Ok(best)
        }
        FunctionClass::ChiBounded(chi) => {
            check_len(mu.len(), chi.len())?;
            Ok(chi
                .values()
                .iter()
                .zip(nu.weights().iter().zip(mu.weights()))
                .map(|(&c, (&n, &m))| c * (n - m).abs())
                .sum())
        }
        FunctionClass::LipschitzBall(space) => {
            check_len(space.len(), mu.len())?;
            let plan = crate::transport::metric_transport(nu, mu, space)?;
            Ok(plan.cost)
        }
    }
}

/// Exponential tilt: weights proportional to μ_i e^{s φ_i}, max-shifted for
/// stability and renormalized.
pub fn exp_tilt(mu: &DiscreteMeasure, phi: &SpaceFunction, s: f64) -> Result<DiscreteMeasure> {
    check_len(mu.len(), phi.len())?;
    let shift = phi
        .values()
        .iter()
        .map(|&v| s * v)
        .fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = mu
        .weights()
        .iter()
        .zip(phi.values())
        .map(|(&w, &v)| w * (s * v - shift).exp())
        .collect();
    DiscreteMeasure::from_unnormalized(raw)
}
