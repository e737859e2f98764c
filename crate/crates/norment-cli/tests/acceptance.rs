//! Acceptance suite: every criterion the build must satisfy, one test per
//! criterion, each printing a pass/fail line (visible with --nocapture).
//! Tolerances and instance counts are pinned here, in code.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use norment::certify::{
    generate_candidates, verify_improved_x2, verify_tci_cost, verify_tci_metric,
    verify_weighted_pinsker, CandidateFamily, ConstantOverride,
};
use norment::convex::{derive_m_alpha, ConvexGauge};
use norment::grid::{default_delta_grid, default_s_grid, GridSpec};
use norment::laplace::{default_tail_grid, dz_check, ko_bound_check, subgaussian_check};
use norment::measure::{
    relative_entropy, DiscreteMeasure, FunctionClass, MetricSpace, SpaceFunction,
};
use norment::orlicz::{luxemburg_norm, luxemburg_upper_bound};
use norment::transport::{kr_dual, metric_transport, sandwich_bounds};

fn report(criterion: &str, elapsed: Duration, detail: &str) {
    println!("criterion {criterion}: PASS ({detail}; {:.3}s)", elapsed.as_secs_f64());
}

fn random_measure(rng: &mut ChaCha8Rng, n: usize) -> DiscreteMeasure {
    DiscreteMeasure::from_unnormalized(
        (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect(),
    )
    .unwrap()
}

fn random_space(rng: &mut ChaCha8Rng, n: usize) -> MetricSpace {
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.random::<f64>() * 4.0, rng.random::<f64>() * 4.0))
        .collect();
    MetricSpace::from_points(&pts).unwrap()
}

#[test]
fn acceptance_01_pinsker_exactness() {
    let start = Instant::now();
    let mu = DiscreteMeasure::uniform(2);
    let mut worst = f64::INFINITY;
    for k in 0..=20 {
        let p = k as f64 * 0.05;
        let nu = DiscreteMeasure::new(vec![p, 1.0 - p]).unwrap();
        let lhs = 2.0 * (p - 0.5) * (p - 0.5);
        let rhs = relative_entropy(&nu, &mu).unwrap();
        let margin = rhs - lhs;
        assert!(margin >= 0.0, "violation at p = {p}: {lhs} > {rhs}");
        worst = worst.min(margin);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    report("1 (pinsker exactness)", elapsed, &format!("21 points, min margin {worst:.3e}"));
}

#[test]
fn acceptance_02_biconjugation() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    // a random convex piecewise-linear gauge
    let mut knots = vec![(0.0, 0.0)];
    let (mut t, mut v, mut slope) = (0.0, 0.0, 0.0);
    for _ in 0..4 {
        let gap = 0.3 + rng.random::<f64>();
        slope += rng.random::<f64>() * 1.5;
        t += gap;
        v += slope * gap;
        knots.push((t, v));
    }
    let resolution = GridSpec::geometric(1e-3, 1e3, 200);
    let gauges = vec![
        ("x2", ConvexGauge::x2()),
        ("x2over2", ConvexGauge::x2_over_2()),
        ("x3", ConvexGauge::power(3.0, 1.0).unwrap()),
        ("linear", ConvexGauge::linear()),
        (
            "capped:1",
            ConvexGauge::capped(ConvexGauge::x2(), 1.0, true).unwrap(),
        ),
        ("random-pwl", ConvexGauge::piecewise_linear(knots).unwrap()),
    ];
    let mut worst = 0.0f64;
    for (name, alpha) in &gauges {
        let back = alpha.conjugate(&resolution).conjugate(&resolution);
        let t_hi = alpha.domain_end().min(10.0);
        for k in 0..=2000 {
            let t = t_hi * k as f64 / 2000.0;
            let (a, b) = (alpha.eval(t), back.eval(t));
            if a.is_finite() {
                let dev = (b - a).abs() / (1.0 + a);
                assert!(dev <= 1e-6, "{name}: deviation {dev} at t = {t}");
                worst = worst.max(dev);
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    report("2 (biconjugation)", elapsed, &format!("6 gauges, max rel deviation {worst:.3e}"));
}

#[test]
fn acceptance_03_conjugate_closed_forms() {
    let start = Instant::now();
    let resolution = GridSpec::geometric(1e-3, 1e3, 200);
    let mut worst = 0.0f64;
    for p in [2.0, 3.0] {
        let alpha = ConvexGauge::power(p, 1.0).unwrap();
        let beta = alpha.conjugate(&resolution);
        for k in 1..=60 {
            let s = k as f64 * 0.15;
            let closed = (p - 1.0) * (s / p).powf(p / (p - 1.0));
            // dense-maximization oracle, independent of the conjugation path
            let t_max = 2.0 * (s / p).powf(1.0 / (p - 1.0)) + 1.0;
            let grid_n = 40_000;
            let mut oracle = 0.0f64;
            for j in 0..=grid_n {
                let t = t_max * j as f64 / grid_n as f64;
                oracle = oracle.max(s * t - t.powf(p));
            }
            // golden polish around the dense argmax
            let (mut lo, mut hi) = (0.0f64, t_max);
            for _ in 0..200 {
                let m1 = lo + (hi - lo) / 3.0;
                let m2 = hi - (hi - lo) / 3.0;
                if s * m1 - m1.powf(p) >= s * m2 - m2.powf(p) {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            let tm = 0.5 * (lo + hi);
            let oracle = oracle.max(s * tm - tm.powf(p));
            let dev_closed = (beta.eval(s) - closed).abs() / (1.0 + closed);
            let dev_oracle = (beta.eval(s) - oracle).abs() / (1.0 + oracle);
            assert!(dev_closed <= 1e-8, "p={p}, s={s}: closed-form deviation {dev_closed}");
            assert!(dev_oracle <= 1e-8, "p={p}, s={s}: oracle deviation {dev_oracle}");
            worst = worst.max(dev_closed.max(dev_oracle));
        }
    }
    report("3 (conjugate closed forms)", start.elapsed(), &format!("p in {{2,3}}, max deviation {worst:.3e}"));
}

#[test]
fn acceptance_04_luxemburg_closed_form() {
    let start = Instant::now();
    let mu = DiscreteMeasure::uniform(2);
    let one = SpaceFunction::constant(2, 1.0).unwrap();
    let alpha = ConvexGauge::x2();
    let norm = luxemburg_norm(&one, &mu, &alpha, 1e-10).unwrap();
    let norm_expect = 1.0 / 2f64.ln().sqrt();
    assert!((norm - norm_expect).abs() <= 1e-8, "norm {norm} vs {norm_expect}");

    let bound = luxemburg_upper_bound(&one, &mu, &alpha, &default_delta_grid()).unwrap();
    let bound_expect = 2.0 / 2f64.ln().sqrt();
    assert!((bound - bound_expect).abs() <= 1e-6, "bound {bound} vs {bound_expect}");
    assert!(bound >= norm, "the scan bound must dominate the norm");
    report("4 (luxemburg closed form)", start.elapsed(), &format!("norm {norm:.9}, bound {bound:.9}"));
}

#[test]
fn acceptance_05_kr_duality() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut worst_gap = 0.0f64;
    let mut worst_lip = 0.0f64;
    for _ in 0..100 {
        let n = rng.random_range(2..=12);
        let space = random_space(&mut rng, n);
        let nu = random_measure(&mut rng, n);
        let mu = random_measure(&mut rng, n);
        let plan = metric_transport(&nu, &mu, &space).unwrap();
        let (value, phi) = kr_dual(&nu, &mu, &space).unwrap();
        let gap = (value - plan.cost).abs();
        assert!(gap <= 1e-8, "duality gap {gap}");
        worst_gap = worst_gap.max(gap);
        for i in 0..n {
            for j in 0..n {
                let excess = phi.value(i) - phi.value(j) - space.dist(i, j);
                assert!(excess <= 1e-10, "lipschitz violation {excess}");
                worst_lip = worst_lip.max(excess);
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    report("5 (kr duality)", elapsed, &format!("100 instances, max gap {worst_gap:.3e}, max lipschitz excess {worst_lip:.3e}"));
}

#[test]
fn acceptance_06_dz_family() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let t_grid = default_tail_grid();
    assert_eq!(t_grid.points().len(), 50);
    let mut worst = f64::INFINITY;
    for _ in 0..200 {
        let n = rng.random_range(2..=10);
        let f = SpaceFunction::new((0..n).map(|_| rng.random::<f64>() * 6.0 - 3.0).collect())
            .unwrap();
        let mu = random_measure(&mut rng, n);
        for k in 0..10 {
            let eps = k as f64 * 0.1;
            let r = dz_check(&f, &mu, eps, &t_grid).unwrap();
            assert!(r.margin >= -1e-9, "integrated margin {} at eps {eps}", r.margin);
            assert!(r.tail.min_margin() >= -1e-12, "tail margin {}", r.tail.min_margin());
            worst = worst.min(r.margin);
        }
    }
    report("6 (dz family)", start.elapsed(), &format!("200 instances x 10 epsilons, min margin {worst:.3e}"));
}

#[test]
fn acceptance_07_ko_family_and_m_alpha() {
    let start = Instant::now();
    // the module constant for the square gauge, against a grid-search oracle
    let m = derive_m_alpha(&ConvexGauge::x2(), &default_s_grid()).unwrap();
    assert!(m.m_alpha <= 2.0 * std::f64::consts::E + 1e-6, "m = {}", m.m_alpha);
    assert!((m.u - 0.5).abs() <= 1e-6, "u = {}", m.u);
    {
        // oracle: scan u over the feasible region, then refine
        let (c, s) = (m.witness.c, m.witness.s);
        let a_inv2 = 2f64.sqrt();
        let cap = s * c.sqrt();
        let g = |u: f64| ((1.0 / a_inv2) / (c * (1.0 - u)).sqrt()).max(1.0 / u);
        let feasible = |u: f64| u / (1.0 - u).sqrt() <= cap && u * u * u / (1.0 - u) <= 2.0;
        let mut best = (f64::NAN, f64::INFINITY);
        for k in 1..400_000 {
            let u = k as f64 / 400_000.0;
            if feasible(u) {
                let v = g(u);
                if v < best.1 {
                    best = (u, v);
                }
            }
        }
        assert!((m.u - best.0).abs() <= 1e-5, "u {} vs oracle {}", m.u, best.0);
        assert!(
            (m.m_alpha - std::f64::consts::E * best.1).abs() <= 1e-5,
            "m {} vs oracle {}",
            m.m_alpha,
            std::f64::consts::E * best.1
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut worst = f64::INFINITY;
    for alpha in [ConvexGauge::x2(), ConvexGauge::x2_over_2()] {
        let m = derive_m_alpha(&alpha, &default_s_grid()).unwrap();
        let grid = norment::laplace::default_ko_grid(&alpha, 1.0);
        for _ in 0..100 {
            let n = rng.random_range(2..=10);
            let f = SpaceFunction::new((0..n).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect())
                .unwrap();
            let mu = random_measure(&mut rng, n);
            let centered = f.centered(&mu).unwrap();
            let scan = ko_bound_check(&centered, &mu, &alpha, &m, &grid).unwrap();
            assert!(scan.min_margin() >= -1e-9, "ko margin {}", scan.min_margin());
            worst = worst.min(scan.min_margin());
        }
    }
    report("7 (ko family)", start.elapsed(), &format!("200 centered instances, min margin {worst:.3e}, m_x2 = {:.6}", m.m_alpha));
}

#[test]
fn acceptance_08_subgaussian_family() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let grid = GridSpec::linear(0.0, 10.0, 256);
    let mut worst = f64::INFINITY;
    for _ in 0..200 {
        let n = rng.random_range(2..=10);
        let f = SpaceFunction::new((0..n).map(|_| rng.random::<f64>() * 5.0 - 2.5).collect())
            .unwrap();
        let mu = random_measure(&mut rng, n);
        let scan = subgaussian_check(&f, &mu, &grid).unwrap();
        assert!(scan.min_margin() >= -1e-9, "margin {}", scan.min_margin());
        worst = worst.min(scan.min_margin());
    }
    report("8 (subgaussian family)", start.elapsed(), &format!("200 instances on s in [0,10], min margin {worst:.3e}"));
}

#[test]
fn acceptance_09_sandwich_chain() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut worst = f64::INFINITY;
    for q in [ConvexGauge::linear(), ConvexGauge::x2()] {
        for _ in 0..50 {
            let n = rng.random_range(2..=8);
            let space = random_space(&mut rng, n);
            let nu = random_measure(&mut rng, n);
            let mu = random_measure(&mut rng, n);
            for x0 in 0..n {
                let b = sandwich_bounds(&nu, &mu, &space, &q, x0).unwrap();
                let s1 = b.gauge_cost - b.q_of_metric_cost;
                let s2 = b.weighted_tv - b.gauge_cost;
                assert!(s1 >= -1e-9, "first link slack {s1}");
                assert!(s2 >= -1e-9, "second link slack {s2}");
                worst = worst.min(s1.min(s2));
            }
        }
    }
    report("9 (sandwich chain)", start.elapsed(), &format!("100 instances x all x0, min slack {worst:.3e}"));
}

#[test]
fn acceptance_10_end_to_end_theorems() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let alpha = ConvexGauge::x2();
    let q = ConvexGauge::x2();
    let mut worst = f64::INFINITY;
    for instance in 0..50 {
        let n = rng.random_range(2..=10);
        let space = random_space(&mut rng, n);
        let mu = random_measure(&mut rng, n);
        let chi = SpaceFunction::new((0..n).map(|_| rng.random::<f64>() * 3.0).collect()).unwrap();
        let candidates =
            generate_candidates(&mu, &space, &CandidateFamily::default(), 500, 1010 + instance)
                .unwrap();

        let tci_d = verify_tci_metric(
            &mu, &space, &alpha, &candidates, ConstantOverride::default(), 1e-9,
        )
        .unwrap();
        assert!(tci_d.pass, "tci-metric violated: min margin {}", tci_d.min_margin);
        worst = worst.min(tci_d.min_margin);

        let tci_c = verify_tci_cost(
            &mu, &space, &q, &alpha, &candidates, &default_delta_grid(),
            ConstantOverride::default(), 1e-9,
        )
        .unwrap();
        for r in &tci_c {
            assert!(r.pass, "{} violated: min margin {}", r.inequality, r.min_margin);
            worst = worst.min(r.min_margin);
        }

        let wcpk = verify_weighted_pinsker(
            &mu, &chi, &alpha, &candidates, &default_delta_grid(),
            ConstantOverride::default(), 1e-9,
        )
        .unwrap();
        for r in &wcpk {
            assert!(r.pass, "{} violated: min margin {}", r.inequality, r.min_margin);
            worst = worst.min(r.min_margin);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    report("10 (end-to-end theorems)", elapsed, &format!("3 families x 50 instances x 500 candidates, min margin {worst:.3e}"));
}

#[test]
fn acceptance_11_falsifiability_and_round_trip() {
    let start = Instant::now();
    let base_instance = r#"{
        "space": {"labels": ["a", "b", "c"], "dist": [[0, 1, 2], [1, 0, 1], [2, 1, 0]]},
        "measures": {"mu": [0.5, 0.25, 0.25]},
        "chi": [1, 2, 1]
    }"#;
    let mut base_path = std::env::temp_dir();
    base_path.push(format!("norment-accept-{}-base.json", std::process::id()));
    std::fs::write(&base_path, base_instance).unwrap();

    for suite in ["pinsker", "tci-metric", "tci-cost", "weighted-pinsker"] {
        let out = Command::new(env!("CARGO_BIN_EXE_norment"))
            .args([
                "certify", "--suite", suite, "--instance", base_path.to_str().unwrap(),
                "--a-scale", "0.01", "--seed", "11", "--candidates", "60",
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(1), "suite {suite} must fail under a/100");
        let reports: serde_json::Value =
            serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
        let failed = reports
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r["pass"] == false && r["worst"]["nu"].is_array())
            .unwrap_or_else(|| panic!("suite {suite}: no violation with a/100"));
        let inequality = failed["inequality"].as_str().unwrap().to_string();
        let recorded_margin = failed["worst"]["margin"].as_f64().unwrap();
        let nu: Vec<f64> = failed["worst"]["nu"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_f64().unwrap())
            .collect();

        // round-trip: feed the worst instance back as the only candidate
        let round_trip = serde_json::json!({
            "space": {"labels": ["a", "b", "c"], "dist": [[0, 1, 2], [1, 0, 1], [2, 1, 0]]},
            "measures": {"mu": [0.5, 0.25, 0.25], "worst": nu},
            "chi": [1, 2, 1],
            "harness": {"explicit_candidates": ["worst"]}
        });
        let mut rt_path = std::env::temp_dir();
        rt_path.push(format!("norment-accept-{}-rt-{suite}.json", std::process::id()));
        std::fs::write(&rt_path, serde_json::to_string(&round_trip).unwrap()).unwrap();
        let out = Command::new(env!("CARGO_BIN_EXE_norment"))
            .args([
                "certify", "--suite", suite, "--instance", rt_path.to_str().unwrap(),
                "--a-scale", "0.01", "--seed", "11",
            ])
            .output()
            .unwrap();
        let reports: serde_json::Value =
            serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
        let replay = reports
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r["inequality"] == inequality.as_str())
            .expect("the same inequality is reported");
        let replay_margin = replay["min_margin"].as_f64().unwrap();
        assert!(
            (replay_margin - recorded_margin).abs() <= 1e-12,
            "suite {suite}: round-trip margin {replay_margin} vs recorded {recorded_margin}"
        );
        std::fs::remove_file(rt_path).ok();
    }
    std::fs::remove_file(base_path).ok();
    report("11 (falsifiability + round trip)", start.elapsed(), "4 families violated under a/100, margins reproduced to 1e-12");
}

#[test]
fn acceptance_12_improved_factor_dominates() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1212);
    let mut worst = f64::INFINITY;
    for instance in 0..50 {
        let n = rng.random_range(2..=8);
        let space = random_space(&mut rng, n);
        let mu = random_measure(&mut rng, n);
        let chi = SpaceFunction::new((0..n).map(|_| rng.random::<f64>() * 3.0).collect()).unwrap();
        let candidates =
            generate_candidates(&mu, &space, &CandidateFamily::default(), 50, 1212 + instance)
                .unwrap();
        let reports = verify_improved_x2(
            &mu, &chi, &candidates, &default_delta_grid(), ConstantOverride::default(), 1e-9,
        )
        .unwrap();
        let dominance = reports
            .iter()
            .find(|r| r.inequality == "improved-vs-crude")
            .unwrap();
        assert!(
            dominance.min_margin >= 0.0,
            "instance {instance}: improved factor exceeds crude by {}",
            -dominance.min_margin
        );
        worst = worst.min(dominance.min_margin);
        let improved = reports.iter().find(|r| r.inequality == "wcpk-x2-improved").unwrap();
        assert!(improved.pass, "improved bound violated: {}", improved.min_margin);
    }
    report("12 (improved vs crude)", start.elapsed(), &format!("50 instances, min factor gap {worst:.3e}"));
}

/// The constants checked in BTreeMap-backed reports are finite numbers.
#[test]
fn reports_have_finite_constants() {
    let mu = DiscreteMeasure::uniform(2);
    let space = MetricSpace::new(
        vec!["a".into(), "b".into()],
        vec![vec![0.0, 1.0], vec![1.0, 0.0]],
    )
    .unwrap();
    let cands = generate_candidates(&mu, &space, &CandidateFamily::default(), 20, 3).unwrap();
    let report = verify_tci_metric(
        &mu, &space, &ConvexGauge::x2(), &cands, ConstantOverride::default(), 1e-9,
    )
    .unwrap();
    let _: &BTreeMap<String, f64> = &report.constants;
    for (k, v) in &report.constants {
        assert!(v.is_finite(), "constant {k} = {v}");
    }
    // the class Φ used in the dual certification is symmetric by construction
    let f = SpaceFunction::new(vec![1.0, -1.0]).unwrap();
    if let FunctionClass::ExplicitList(fs) = FunctionClass::explicit(vec![f]).unwrap() {
        assert_eq!(fs.len(), 2);
        for (a, b) in fs[0].values().iter().zip(fs[1].values()) {
            assert_eq!(*a, -*b);
        }
    }
}
