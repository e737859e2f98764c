//! norment: certify entropy–transport inequalities on finite metric spaces.
//!
//! Subcommands compute individual quantities (conjugates, generalized
//! inverses, Luxemburg norms, transport costs, relative entropy, Laplace
//! transforms) or run certification suites over adversarial candidate
//! measures. Exit code 0 means every requested certificate passed, 1 means
//! at least one failed (the violating instance is in the report), 2 means
//! the input was malformed.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use norment::certify::{CertStatus, ConstantOverride};
use norment::convex::{generalized_inverse, InverseSide};
use norment::grid::GridSpec;
use norment::laplace::{cramer_transform, log_laplace};
use norment::measure::relative_entropy;
use norment::orlicz::luxemburg_norm;
use norment::transport::{kr_dual, ot_cost, CostSpec};

mod instance;
mod report;
mod suites;

use instance::{bundled_instance, load_instance, parse_gauge_shorthand, resolve_function, Instance};
use suites::{resolve_candidates, resolve_scan_functions, run_suite, Suite, SuiteCtx};

#[derive(Parser)]
#[command(name = "norment", about = "Certified transport-entropy inequalities on finite spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the monotone conjugate of a gauge at given points.
    Conjugate {
        #[arg(long)]
        gauge: String,
        /// Points s at which to evaluate, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        at: Vec<f64>,
    },
    /// Generalized inverse of a gauge at a level y.
    Inverse {
        #[arg(long)]
        gauge: String,
        #[arg(long)]
        y: f64,
        #[arg(long, value_enum)]
        side: SideArg,
    },
    /// Luxemburg norm of a function under a measure.
    Norm {
        #[arg(long)]
        gauge: String,
        /// const:<v>, values:a,b,..., chi, or a named function.
        #[arg(long)]
        function: String,
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long, default_value = "mu")]
        measure: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Relative entropy H(nu | mu).
    Entropy {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        nu: String,
        #[arg(long, default_value = "mu")]
        mu: String,
    },
    /// Optimal transport cost between two named measures.
    Transport {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        nu: String,
        #[arg(long, default_value = "mu")]
        mu: String,
        /// metric, a gauge shorthand, or a named cost from the instance.
        #[arg(long, default_value = "metric")]
        cost: String,
        /// Also print the Kantorovich dual value and the duality gap.
        #[arg(long)]
        dual: bool,
    },
    /// Log-Laplace transform and Cramér transform of a function.
    Laplace {
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long)]
        function: String,
        #[arg(long, default_value = "mu")]
        measure: String,
        /// Evaluate the log-Laplace transform at this s.
        #[arg(long)]
        s: Option<f64>,
        /// Evaluate the Cramér transform at this t.
        #[arg(long)]
        cramer_at: Option<f64>,
    },
    /// Run a certification suite and emit a report.
    Certify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long, default_value_t = 17)]
        seed: u64,
        /// Candidate or scan-instance count.
        #[arg(long)]
        candidates: Option<usize>,
        /// Report tolerance: pass means min margin >= -tol.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value = "json")]
        report: ReportFormat,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Entropy-side gauge (default x2; x2over2 for the pinsker suite).
        #[arg(long)]
        alpha: Option<String>,
        /// Cost gauge q for the tci-cost suite (default x2).
        #[arg(long)]
        gauge: Option<String>,
        /// Weight function for the weighted suites (const:<v>, values:...,
        /// chi, or a named function; default: the instance chi, else 1).
        #[arg(long)]
        chi: Option<String>,
        /// Override the derived constant a.
        #[arg(long)]
        a: Option<f64>,
        /// Multiply every derived constant by this factor (falsification runs).
        #[arg(long, default_value_t = 1.0)]
        a_scale: f64,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_or_bundled(path: &Option<PathBuf>) -> Result<Instance, String> {
    match path {
        Some(p) => load_instance(p),
        None => Ok(bundled_instance()),
    }
}

fn print_value(x: f64) {
    if x.is_finite() {
        println!("{x}");
    } else if x.is_nan() {
        println!("nan");
    } else if x > 0.0 {
        println!("inf");
    } else {
        println!("-inf");
    }
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Conjugate { gauge, at } => {
            let g = parse_gauge_shorthand(&gauge)?;
            let conj = g.conjugate(&GridSpec::geometric(1e-3, 1e3, 200));
            for s in at {
                let v = conj.eval(s);
                if v.is_finite() {
                    println!("{s}\t{v}");
                } else {
                    println!("{s}\tinf");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Inverse { gauge, y, side } => {
            if y < 0.0 {
                return Err("inverse: y must be nonnegative".to_string());
            }
            let g = parse_gauge_shorthand(&gauge)?;
            let side = match side {
                SideArg::Lower => InverseSide::Lower,
                SideArg::Upper => InverseSide::Upper,
            };
            print_value(generalized_inverse(&g, y, side, 1e-12));
            Ok(ExitCode::SUCCESS)
        }
        Command::Norm {
            gauge,
            function,
            instance,
            measure,
            tol,
        } => {
            let inst = load_or_bundled(&instance)?;
            let g = parse_gauge_shorthand(&gauge)?;
            let mu = inst.measure(&measure)?;
            let f = resolve_function(&function, &inst, mu.len())?;
            let norm = luxemburg_norm(&f, mu, &g, tol).map_err(|e| e.to_string())?;
            print_value(norm);
            Ok(ExitCode::SUCCESS)
        }
        Command::Entropy { instance, nu, mu } => {
            let inst = load_instance(&instance)?;
            let h = relative_entropy(inst.measure(&nu)?, inst.measure(&mu)?)
                .map_err(|e| e.to_string())?;
            print_value(h);
            Ok(ExitCode::SUCCESS)
        }
        Command::Transport {
            instance,
            nu,
            mu,
            cost,
            dual,
        } => {
            let inst = load_instance(&instance)?;
            let nu_m = inst.measure(&nu)?;
            let mu_m = inst.measure(&mu)?;
            let spec = if cost == "metric" {
                CostSpec::Metric
            } else if let Some(named) = inst.costs.get(&cost) {
                named.clone()
            } else {
                CostSpec::GaugeOfMetric {
                    q: parse_gauge_shorthand(&cost)?,
                }
            };
            let matrix = suites::cost_for(&inst, &spec)?;
            let plan = ot_cost(nu_m, mu_m, &matrix).map_err(|e| e.to_string())?;
            print_value(plan.cost);
            if dual {
                let (value, _) = kr_dual(nu_m, mu_m, &inst.space).map_err(|e| e.to_string())?;
                print_value(value);
                print_value((plan.cost - value).abs());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Laplace {
            instance,
            function,
            measure,
            s,
            cramer_at,
        } => {
            let inst = load_or_bundled(&instance)?;
            let mu = inst.measure(&measure)?;
            let f = resolve_function(&function, &inst, mu.len())?;
            if s.is_none() && cramer_at.is_none() {
                return Err("laplace: pass --s and/or --cramer-at".to_string());
            }
            if let Some(s) = s {
                print_value(log_laplace(&f, mu, s).map_err(|e| e.to_string())?);
            }
            if let Some(t) = cramer_at {
                print_value(cramer_transform(&f, mu, t).map_err(|e| e.to_string())?);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Certify {
            suite,
            instance,
            seed,
            candidates,
            tol,
            report,
            out,
            alpha,
            gauge,
            chi,
            a,
            a_scale,
        } => {
            let inst = load_or_bundled(&instance)?;
            let mu = inst.measure("mu")?;
            let n = mu.len();

            let alpha_default = inst
                .gauges
                .get("alpha")
                .cloned()
                .unwrap_or_else(norment::convex::ConvexGauge::x2);
            let alpha_gauge = match &alpha {
                Some(s) => parse_gauge_shorthand(s)?,
                None => alpha_default,
            };
            let alpha_pinsker = match &alpha {
                Some(s) => parse_gauge_shorthand(s)?,
                None => norment::convex::ConvexGauge::x2_over_2(),
            };
            let q = match &gauge {
                Some(s) => parse_gauge_shorthand(s)?,
                None => match inst.costs.get("q") {
                    Some(CostSpec::GaugeOfMetric { q }) => q.clone(),
                    _ => norment::convex::ConvexGauge::x2(),
                },
            };
            let chi_fn = match &chi {
                Some(spec) => resolve_function(spec, &inst, n)?,
                None => match &inst.chi {
                    Some(c) => c.clone(),
                    None => norment::measure::SpaceFunction::constant(n, 1.0)
                        .map_err(|e| e.to_string())?,
                },
            };
            if chi_fn.values().iter().any(|&v| v < 0.0) {
                return Err("chi: values must be nonnegative".to_string());
            }

            let seed = inst.harness.seed.unwrap_or(seed);
            let count = candidates.or(inst.harness.candidates).unwrap_or(200);
            let tol = tol.or(inst.harness.tolerance).unwrap_or(1e-9);
            let adjust = ConstantOverride {
                override_a: a,
                scale: a_scale,
            };
            let cands = resolve_candidates(&inst, mu, count, seed)?;
            let scan_functions = resolve_scan_functions(&inst, n, count, seed)?;

            let ctx = SuiteCtx {
                instance: &inst,
                mu,
                alpha: alpha_gauge,
                alpha_pinsker,
                q,
                chi: chi_fn,
                candidates: cands,
                scan_functions,
                tol,
                adjust,
            };
            let reports = run_suite(suite, &ctx)?;

            let body = match report {
                ReportFormat::Json => report::reports_to_json(&reports),
                ReportFormat::Csv => report::reports_to_csv(&reports),
            };
            match &out {
                Some(path) => std::fs::write(path, &body)
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
                None => print!("{body}"),
            }
            let mut all_pass = true;
            for r in &reports {
                eprintln!("{}", report::summary_line(r));
                if r.status != CertStatus::Pass {
                    all_pass = false;
                }
            }
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
