//! Certification suites: wire an instance (space, μ, χ, gauges, candidate
//! set) into the library verifiers and collect certificates.

use norment::certify::{
    generate_candidates, verify_improved_x2, verify_norm_entropy, verify_tci_cost,
    verify_tci_metric, verify_weighted_pinsker, CandidateFamily, CertificateReport,
    ConstantOverride, InstanceRecord,
};
use norment::convex::{derive_m_alpha, ConvexGauge};
use norment::grid::{default_delta_grid, default_s_grid, GridSpec};
use norment::laplace::{default_tail_grid, dz_check, ko_bound_check, subgaussian_check, LogLaplace};
use norment::measure::{DiscreteMeasure, FunctionClass, SpaceFunction};
use norment::orlicz::luxemburg_norm;
use norment::transport::{cost_matrix, CostSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

use crate::instance::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Pinsker,
    WeightedPinsker,
    TciMetric,
    TciCost,
    Ko,
    Dz,
    Subgaussian,
    All,
}

pub struct SuiteCtx<'a> {
    pub instance: &'a Instance,
    pub mu: &'a DiscreteMeasure,
    /// Entropy-side gauge for most suites (default x²).
    pub alpha: ConvexGauge,
    /// Entropy-side gauge for the plain total-variation suite (default x²/2).
    pub alpha_pinsker: ConvexGauge,
    /// Cost gauge q for the gauge-cost suite (default x²).
    pub q: ConvexGauge,
    pub chi: SpaceFunction,
    pub candidates: Vec<DiscreteMeasure>,
    pub scan_functions: Vec<SpaceFunction>,
    pub tol: f64,
    pub adjust: ConstantOverride,
}

/// Resolve the candidate set: explicit names from the harness section win,
/// otherwise the default adversarial family seeded from `seed`.
pub fn resolve_candidates(
    instance: &Instance,
    mu: &DiscreteMeasure,
    count: usize,
    seed: u64,
) -> Result<Vec<DiscreteMeasure>, String> {
    if let Some(names) = &instance.harness.explicit_candidates {
        let mut out = Vec::with_capacity(names.len());
        for name in names {
            out.push(instance.measure(name)?.clone());
        }
        if out.is_empty() {
            return Err("harness.explicit_candidates: empty list".to_string());
        }
        return Ok(out);
    }
    generate_candidates(mu, &instance.space, &CandidateFamily::default(), count, seed)
        .map_err(|e| format!("candidate generation: {e}"))
}

/// Resolve the scan functions for ko/dz/subgaussian: explicit names from the
/// harness win, otherwise seeded uniform values in [−3, 3).
pub fn resolve_scan_functions(
    instance: &Instance,
    n: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<SpaceFunction>, String> {
    if let Some(names) = &instance.harness.explicit_functions {
        let mut out = Vec::with_capacity(names.len());
        for name in names {
            out.push(instance.function(name)?.clone());
        }
        if out.is_empty() {
            return Err("harness.explicit_functions: empty list".to_string());
        }
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5f5f_5f5f);
    Ok((0..count)
        .map(|_| {
            SpaceFunction::new((0..n).map(|_| rng.random::<f64>() * 6.0 - 3.0).collect())
                .expect("finite values")
        })
        .collect())
}

fn err_str(e: norment::Error) -> String {
    e.to_string()
}

pub fn run_suite(suite: Suite, ctx: &SuiteCtx) -> Result<Vec<CertificateReport>, String> {
    match suite {
        Suite::Pinsker => pinsker(ctx),
        Suite::WeightedPinsker => weighted_pinsker(ctx),
        Suite::TciMetric => tci_metric(ctx),
        Suite::TciCost => tci_cost(ctx),
        Suite::Ko => ko(ctx),
        Suite::Dz => dz(ctx),
        Suite::Subgaussian => subgaussian(ctx),
        Suite::All => {
            let mut all = Vec::new();
            for s in [
                Suite::Pinsker,
                Suite::WeightedPinsker,
                Suite::TciMetric,
                Suite::TciCost,
                Suite::Ko,
                Suite::Dz,
                Suite::Subgaussian,
            ] {
                all.extend(run_suite(s, ctx)?);
            }
            Ok(all)
        }
    }
}

fn pinsker(ctx: &SuiteCtx) -> Result<Vec<CertificateReport>, String> {
    let n = ctx.mu.len();
    let ones = SpaceFunction::constant(n, 1.0).map_err(err_str)?;
    let class = FunctionClass::chi_bounded(ones).map_err(err_str)?;
    let a = ctx.adjust.apply(1.0);
    let mut report = verify_norm_entropy(
        ctx.mu,
        &class,
        &ctx.alpha_pinsker,
        a,
        &ctx.candidates,
        ctx.tol,
    )
    .map_err(err_str)?;
    report.inequality = "pinsker".to_string();
    Ok(vec![report])
}

fn weighted_pinsker(ctx: &SuiteCtx) -> Result<Vec<CertificateReport>, String> {
    let mut reports = verify_weighted_pinsker(
        ctx.mu,
        &ctx.chi,
        &ctx.alpha,
        &ctx.candidates,
        &default_delta_grid(),
        ctx.adjust,
        ctx.tol,
    )
    .map_err(err_str)?;
    reports.extend(
        verify_improved_x2(
            ctx.mu,
            &ctx.chi,
            &ctx.candidates,
            &default_delta_grid(),
            ctx.adjust,
            ctx.tol,
        )
        .map_err(err_str)?,
    );
    Ok(reports)
}

fn tci_metric(ctx: &SuiteCtx) -> Result<Vec<CertificateReport>, String> {
    let report = verify_tci_metric(
        ctx.mu,
        &ctx.instance.space,
        &ctx.alpha,
        &ctx.candidates,
        ctx.adjust,
        ctx.tol,
    )
    .map_err(err_str)?;
    Ok(vec![report])
}

fn tci_cost(ctx: &SuiteCtx) -> Result<Vec<CertificateReport>, String> {
    verify_tci_cost(
        ctx.mu,
        &ctx.instance.space,
        &ctx.q,
        &ctx.alpha,
        &ctx.candidates,
        &default_delta_grid(),
        ctx.adjust,
        ctx.tol,
    )
    .map_err(err_str)
}

fn scan_report(
    name: &str,
    constants: BTreeMap<String, f64>,
    records: Vec<InstanceRecord>,
    tol: f64,
    notes: Vec<String>,
) -> CertificateReport {
    CertificateReport::from_records(name, constants, records, tol, notes)
}

fn ko(ctx: &SuiteCtx) -> Result<Vec<CertificateReport>, String> {
    let m = derive_m_alpha(&ctx.alpha, &default_s_grid()).map_err(err_str)?;
    let beta = ctx.alpha.conjugate(&default_s_grid());
    let grid = norment::laplace::default_ko_grid(&ctx.alpha, 1.0);
    let mut records = Vec::new();
    for (idx, f) in ctx.scan_functions.iter().enumerate() {
        let centered = f.centered(ctx.mu).map_err(err_str)?;
        let scan = ko_bound_check(&centered, ctx.mu, &ctx.alpha, &m, &grid).map_err(err_str)?;
        let s_star = scan.worst_location().unwrap_or(0.0);
        let norm = luxemburg_norm(&centered, ctx.mu, &ctx.alpha, 1e-12).map_err(err_str)?;
        let a = std::f64::consts::SQRT_2 * m.m_alpha * norm;
        let ll = LogLaplace::new(&centered, ctx.mu).map_err(err_str)?;
        let lhs = ll.eval(s_star);
        let rhs = beta.eval(a * s_star);
        records.push(InstanceRecord {
            id: format!("f{idx}@s={s_star}"),
            lhs,
            rhs,
            margin: scan.min_margin(),
            nu: Some(centered.values().to_vec()),
        });
    }
    let mut constants = BTreeMap::new();
    constants.insert("m_alpha".to_string(), m.m_alpha);
    constants.insert("u".to_string(), m.u);
    Ok(vec![scan_report(
        "ko",
        constants,
        records,
        ctx.tol,
        vec!["worst instance serializes the centered test function".to_string()],
    )])
}

fn dz(ctx: &SuiteCtx) -> Result<Vec<CertificateReport>, String> {
    let grid = default_tail_grid();
    let mut records = Vec::new();
    let mut tail_records = Vec::new();
    for (idx, f) in ctx.scan_functions.iter().enumerate() {
        for k in 0..10 {
            let eps = k as f64 * 0.1;
            let report = dz_check(f, ctx.mu, eps, &grid).map_err(err_str)?;
            records.push(InstanceRecord {
                id: format!("f{idx}:eps={eps:.1}"),
                lhs: report.lhs,
                rhs: report.rhs,
                margin: report.margin,
                nu: Some(f.values().to_vec()),
            });
            if k == 0 {
                let worst_t = report.tail.worst_location().unwrap_or(0.0);
                let rhs = 2.0 * (-worst_t).exp();
                let margin = report.tail.min_margin();
                tail_records.push(InstanceRecord {
                    id: format!("f{idx}:t={worst_t}"),
                    lhs: rhs - margin,
                    rhs,
                    margin,
                    nu: Some(f.values().to_vec()),
                });
            }
        }
    }
    Ok(vec![
        scan_report(
            "dz",
            BTreeMap::new(),
            records,
            ctx.tol,
            vec!["worst instance serializes the test function".to_string()],
        ),
        scan_report(
            "dz-tail",
            BTreeMap::new(),
            tail_records,
            ctx.tol,
            vec!["margins of the pointwise tail bound 2e^{-t}".to_string()],
        ),
    ])
}

fn subgaussian(ctx: &SuiteCtx) -> Result<Vec<CertificateReport>, String> {
    let grid = GridSpec::linear(0.0, 10.0, 256);
    let mut records = Vec::new();
    for (idx, f) in ctx.scan_functions.iter().enumerate() {
        let scan = subgaussian_check(f, ctx.mu, &grid).map_err(err_str)?;
        let s_star = scan.worst_location().unwrap_or(0.0);
        let centered = f.centered(ctx.mu).map_err(err_str)?;
        let lhs = LogLaplace::new(&centered, ctx.mu).map_err(err_str)?.eval(s_star);
        let margin = scan.min_margin();
        records.push(InstanceRecord {
            id: format!("f{idx}@s={s_star}"),
            lhs,
            rhs: lhs + margin,
            margin,
            nu: Some(f.values().to_vec()),
        });
    }
    Ok(vec![scan_report(
        "subgaussian",
        BTreeMap::new(),
        records,
        ctx.tol,
        vec!["worst instance serializes the test function".to_string()],
    )])
}

/// Build the gauge-of-metric cost matrix for the transport subcommand.
pub fn cost_for(
    instance: &Instance,
    spec: &CostSpec,
) -> Result<Vec<Vec<f64>>, String> {
    cost_matrix(&instance.space, spec).map_err(err_str)
}
