//! Randomized robustness sweep: throws degenerate-prone instances
//! (singleton spaces, sparse measures, near-duplicate points, n up to 14)
//! at the three main verifiers and insists every certificate passes with
//! the derived constants.
use norment::certify::*;
use norment::convex::ConvexGauge;
use norment::grid::default_delta_grid;
use norment::measure::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(424242);
    for trial in 0..200 {
        let n = rng.random_range(1..=14);
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.random::<f64>() * 9.0, rng.random::<f64>() * 9.0))
            .collect();
        let space = match MetricSpace::from_points(&pts) {
            Ok(s) => s,
            Err(_) => continue, // duplicate points
        };
        // occasionally sparse measures with zero atoms
        let mu_raw: Vec<f64> = (0..n)
            .map(|_| if rng.random::<f64>() < 0.2 && n > 1 { 0.0 } else { rng.random::<f64>() })
            .collect();
        let mu = match DiscreteMeasure::from_unnormalized(mu_raw) {
            Ok(m) => m,
            Err(_) => continue,
        };
        let chi = SpaceFunction::new((0..n).map(|_| rng.random::<f64>() * 4.0).collect()).unwrap();
        let cands = generate_candidates(&mu, &space, &CandidateFamily::default(), 80, trial).unwrap();
        let alpha = ConvexGauge::x2();
        let r1 = verify_tci_metric(&mu, &space, &alpha, &cands, ConstantOverride::default(), 1e-9).unwrap();
        assert!(r1.pass, "trial {trial}: tci-metric {}", r1.min_margin);
        let r2 = verify_tci_cost(&mu, &space, &ConvexGauge::x2(), &alpha, &cands, &default_delta_grid(), ConstantOverride::default(), 1e-9).unwrap();
        for r in &r2 { assert!(r.pass, "trial {trial}: {} {}", r.inequality, r.min_margin); }
        let r3 = verify_weighted_pinsker(&mu, &chi, &alpha, &cands, &default_delta_grid(), ConstantOverride::default(), 1e-9).unwrap();
        for r in &r3 { assert!(r.pass, "trial {trial}: {} {}", r.inequality, r.min_margin); }
    }
    println!("stress: 200 trials clean");
}
