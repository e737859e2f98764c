//! Report emission: one JSON object per inequality (in a top-level array),
//! or CSV with one row per evaluated instance. Output bytes are
//! deterministic for identical inputs: objects are built on sorted maps and
//! non-finite numbers are encoded as the strings "inf", "-inf", "nan".

use norment::certify::{CertificateReport, CertStatus};
use serde_json::{json, Map, Value};

fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        Value::String("nan".to_string())
    } else if x > 0.0 {
        Value::String("inf".to_string())
    } else {
        Value::String("-inf".to_string())
    }
}

fn status_str(s: CertStatus) -> &'static str {
    match s {
        CertStatus::Pass => "pass",
        CertStatus::Fail => "fail",
        CertStatus::HypothesisNotCertified => "hypothesis-not-certified",
    }
}

pub fn report_to_json(report: &CertificateReport) -> Value {
    let mut constants = Map::new();
    for (k, v) in &report.constants {
        constants.insert(k.clone(), num(*v));
    }
    let worst = match &report.worst {
        None => Value::Null,
        Some(w) => json!({
            "id": w.id,
            "lhs": num(w.lhs),
            "rhs": num(w.rhs),
            "margin": num(w.margin),
            "nu": w.nu.as_ref().map(|nu| nu.iter().map(|&x| num(x)).collect::<Vec<_>>()),
        }),
    };
    json!({
        "inequality": report.inequality,
        "constants": Value::Object(constants),
        "instances": report.records.len(),
        "min_margin": num(report.min_margin),
        "worst": worst,
        "pass": report.pass,
        "status": status_str(report.status),
        "tolerance": num(report.tolerance),
        "notes": report.notes,
    })
}

pub fn reports_to_json(reports: &[CertificateReport]) -> String {
    let arr: Vec<Value> = reports.iter().map(report_to_json).collect();
    let mut s = serde_json::to_string_pretty(&arr).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_num(x: f64) -> String {
    if x.is_finite() {
        // the Display form is the shortest representation that round-trips
        format!("{x}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

pub fn reports_to_csv(reports: &[CertificateReport]) -> String {
    let mut out = String::from("inequality,instance_id,lhs,rhs,margin\n");
    for report in reports {
        for r in &report.records {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                report.inequality,
                r.id,
                csv_num(r.lhs),
                csv_num(r.rhs),
                csv_num(r.margin)
            ));
        }
    }
    out
}

/// One human-readable line per certificate, for stderr.
pub fn summary_line(report: &CertificateReport) -> String {
    format!(
        "[{}] {} instances={} min_margin={}",
        match report.status {
            CertStatus::Pass => "PASS",
            CertStatus::Fail => "FAIL",
            CertStatus::HypothesisNotCertified => "SKIP",
        },
        report.inequality,
        report.records.len(),
        csv_num(report.min_margin),
    )
}
