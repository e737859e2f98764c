//! Evaluation grids for one-dimensional scans.
//!
//! Most checks in this crate scan a quantity over a set of abscissae (a
//! conjugation resolution, an s-grid for Laplace bounds, a δ-grid for
//! Luxemburg estimates). [`GridSpec`] is the shared description of such a
//! set: linear, geometric, or explicit points.

/// Specification of a finite grid on the positive half-line.
#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    /// `points` equally spaced values covering `[lo, hi]`.
    Linear { lo: f64, hi: f64, points: usize },
    /// `points` values covering `[lo, hi]` with constant ratio; requires `lo > 0`.
    Geometric { lo: f64, hi: f64, points: usize },
    /// Verbatim abscissae.
    Explicit(Vec<f64>),
}

impl GridSpec {
    pub fn linear(lo: f64, hi: f64, points: usize) -> Self {
        GridSpec::Linear { lo, hi, points }
    }

    pub fn geometric(lo: f64, hi: f64, points: usize) -> Self {
        GridSpec::Geometric { lo, hi, points }
    }

    /// Geometric grid with a fixed density per decade of `[lo, hi]`.
    pub fn geometric_per_decade(lo: f64, hi: f64, per_decade: usize) -> Self {
        let decades = (hi / lo).log10().max(0.0);
        let points = ((decades * per_decade as f64).ceil() as usize).max(2);
        GridSpec::Geometric { lo, hi, points }
    }

    /// Materialize the grid, in increasing order.
    pub fn points(&self) -> Vec<f64> {
        match self {
            GridSpec::Linear { lo, hi, points } => {
                let n = (*points).max(1);
                if n == 1 {
                    return vec![*lo];
                }
                let step = (hi - lo) / (n - 1) as f64;
                (0..n).map(|k| lo + step * k as f64).collect()
            }
            GridSpec::Geometric { lo, hi, points } => {
                let n = (*points).max(1);
                assert!(*lo > 0.0, "geometric grid requires lo > 0");
                if n == 1 {
                    return vec![*lo];
                }
                let ratio = (hi / lo).ln() / (n - 1) as f64;
                (0..n).map(|k| lo * (ratio * k as f64).exp()).collect()
            }
            GridSpec::Explicit(pts) => {
                let mut pts = pts.clone();
                pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
                pts
            }
        }
    }
}

/// Default s-grid for Laplace-side scans: geometric, 1e-3 to 1e3, 200 points.
pub fn default_s_grid() -> GridSpec {
    GridSpec::geometric(1e-3, 1e3, 200)
}

/// s-grid capped below the right end `b` of dom α⊛ when it is bounded:
/// beyond `b/a` the bound is vacuously +∞, so points there are wasted.
pub fn s_grid_for_dual(conjugate_domain_end: f64, a: f64) -> GridSpec {
    if conjugate_domain_end.is_finite() && a > 0.0 {
        let hi = (conjugate_domain_end / a) * (1.0 - 1e-9);
        GridSpec::geometric(1e-3_f64.min(hi / 2.0), hi.max(2e-3), 200)
    } else {
        default_s_grid()
    }
}

/// Default δ-grid for Luxemburg upper bounds: 64 points per decade on [1e-3, 1e3].
pub fn default_delta_grid() -> GridSpec {
    GridSpec::geometric_per_decade(1e-3, 1e3, 64)
}

/// Default t-grid for doubling-constant scans.
pub fn default_doubling_grid() -> GridSpec {
    GridSpec::geometric_per_decade(1e-4, 1e4, 32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_endpoints() {
        let pts = GridSpec::linear(0.0, 1.0, 11).points();
        assert_eq!(pts.len(), 11);
        assert_eq!(pts[0], 0.0);
        assert!((pts[10] - 1.0).abs() < 1e-15);
        assert!((pts[5] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn geometric_endpoints_and_ratio() {
        let pts = GridSpec::geometric(1e-3, 1e3, 7).points();
        assert_eq!(pts.len(), 7);
        assert!((pts[0] - 1e-3).abs() < 1e-18);
        assert!((pts[6] - 1e3).abs() < 1e-9);
        for w in pts.windows(2) {
            assert!((w[1] / w[0] - 10.0).abs() < 1e-9);
        }
    }

    #[test]
    fn per_decade_density() {
        let pts = GridSpec::geometric_per_decade(1e-3, 1e3, 64).points();
        assert!(pts.len() >= 6 * 64);
    }

    #[test]
    fn explicit_sorted() {
        let pts = GridSpec::Explicit(vec![3.0, 1.0, 2.0]).points();
        assert_eq!(pts, vec![1.0, 2.0, 3.0]);
    }
}
