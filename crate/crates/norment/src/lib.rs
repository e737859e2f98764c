//! # norment
//!
//! Norm-entropy machinery on finite metric spaces: one-dimensional convex
//! calculus (monotone conjugates, generalized inverses, doubling constants),
//! Luxemburg norms for gauges of the form τ(x) = e^α(x) − 1, exact optimal
//! transport, log-Laplace/Cramér transforms, and a certification harness that
//! evaluates both sides of entropy–transport inequalities on adversarial
//! candidate measures and reports margins.
//!
//! ## The objects
//!
//! | Concept | Type | Where |
//! |---------|------|-------|
//! | convex gauge α with α(0)=0 | [`convex::ConvexGauge`] | [`convex`] |
//! | monotone conjugate α⊛(s) = sup_{t≥0}{st − α(t)} | [`convex::ConvexGauge::conjugate`] | [`convex`] |
//! | finite metric space, probability vector | [`measure::MetricSpace`], [`measure::DiscreteMeasure`] | [`measure`] |
//! | relative entropy H(ν∣μ) | [`measure::relative_entropy`] | [`measure`] |
//! | Luxemburg norm inf{λ : ∫(e^α(f/λ)−1)dμ ≤ 1} | [`orlicz::luxemburg_norm`] | [`orlicz`] |
//! | transport cost 𝒯_c(ν,μ) over couplings | [`transport::ot_cost`] | [`transport`] |
//! | log-Laplace Λ(s), Cramér transform Λ* | [`laplace`] | [`laplace`] |
//! | inequality certificates | [`certify::CertificateReport`] | [`certify`] |
//!
//! ## Quick start
//!
//! ```rust
//! use norment::convex::ConvexGauge;
//! use norment::measure::{DiscreteMeasure, SpaceFunction};
//! use norment::orlicz::luxemburg_norm;
//!
//! let alpha = ConvexGauge::power(2.0, 1.0).unwrap();
//! let mu = DiscreteMeasure::uniform(2);
//! let f = SpaceFunction::new(vec![1.0, 1.0]).unwrap();
//!
//! // solve e^(1/λ²) − 1 = 1  =>  λ = 1/sqrt(ln 2)
//! let norm = luxemburg_norm(&f, &mu, &alpha, 1e-10).unwrap();
//! assert!((norm - 1.0 / 2f64.ln().sqrt()).abs() < 1e-8);
//! ```
//!
//! All values are immutable after construction and all operations are pure,
//! so everything can be shared read-only across threads.

use thiserror::Error;

pub mod certify;
pub mod convex;
pub mod grid;
pub mod laplace;
pub mod measure;
mod num;
pub mod orlicz;
pub mod transport;

/// Error type shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid gauge: {0}")]
    InvalidGauge(String),

    #[error("degenerate gauge: {0}")]
    DegenerateGauge(String),

    #[error("invalid metric space: {0}")]
    InvalidSpace(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("function is not centered: mean = {mean}")]
    NotCentered { mean: f64 },

    #[error("cost gauge has no doubling constant: q(2x) <= K q(x) fails on the grid")]
    NoDoublingConstant,

    #[error("no superquadratic witness: the conjugate is not bounded below by c*s^2 near 0")]
    NoSuperquadraticWitness,

    #[error("function class must be an explicit list for this check")]
    NonExplicitClass,

    #[error("cost is infinite at pair ({i}, {j}); costs must be finite on the space")]
    InfiniteCost { i: usize, j: usize },

    #[error("solver stalled: {0}")]
    SolverStalled(String),
}

pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod tests {
    // everything is immutable after construction, so read-only sharing
    // across workers is safe by construction
    #[test]
    fn core_types_are_send_and_sync() {
        fn check<T: Send + Sync>() {}
        check::<crate::convex::ConvexGauge>();
        check::<crate::measure::MetricSpace>();
        check::<crate::measure::DiscreteMeasure>();
        check::<crate::measure::SpaceFunction>();
        check::<crate::measure::FunctionClass>();
        check::<crate::transport::TransportPlan>();
        check::<crate::laplace::LogLaplace>();
        check::<crate::laplace::CramerTransform>();
        check::<crate::certify::CertificateReport>();
    }
}
