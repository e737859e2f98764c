//! Instance files: JSON descriptions of a space, named measures and
//! functions, gauges, costs, an optional weight function χ, and harness
//! configuration. Weights may be given as numbers or as decimal strings
//! (parsed to the nearest f64), so exactness-sensitive fixtures stay
//! diffable.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use norment::convex::ConvexGauge;
use norment::measure::{DiscreteMeasure, MetricSpace, SpaceFunction};
use norment::transport::CostSpec;

/// A number or a decimal string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Float(f64),
    Text(String),
}

impl Num {
    fn value(&self, context: &str) -> Result<f64, String> {
        match self {
            Num::Float(x) => Ok(*x),
            Num::Text(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|e| format!("{context}: cannot parse number {s:?}: {e}")),
        }
    }
}

fn nums(values: &[Num], context: &str) -> Result<Vec<f64>, String> {
    values.iter().map(|v| v.value(context)).collect()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub labels: Vec<String>,
    pub dist: Vec<Vec<Num>>,
}

/// Gauge specification: a shorthand string or a structured family.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GaugeSpec {
    Shorthand(String),
    Family(GaugeFamilySpec),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GaugeFamilySpec {
    Power {
        p: f64,
        #[serde(default = "default_scale")]
        scale: f64,
    },
    PiecewiseLinear {
        knots: Vec<(f64, f64)>,
    },
    Capped {
        inner: Box<GaugeSpec>,
        cap: f64,
        #[serde(default = "default_closed")]
        closed: bool,
    },
    Grid {
        abscissae: Vec<f64>,
        values: Vec<f64>,
    },
}

fn default_scale() -> f64 {
    1.0
}

fn default_closed() -> bool {
    true
}

/// Shorthand gauges: `x2`, `x2over2`, `xp:<p>`, `linear`, `capped:<r>`
/// (the square gauge capped at r).
pub fn parse_gauge_shorthand(s: &str) -> Result<ConvexGauge, String> {
    let s = s.trim();
    match s {
        "x2" => Ok(ConvexGauge::x2()),
        "x2over2" => Ok(ConvexGauge::x2_over_2()),
        "linear" => Ok(ConvexGauge::linear()),
        _ => {
            if let Some(p) = s.strip_prefix("xp:") {
                let p: f64 = p
                    .parse()
                    .map_err(|e| format!("gauge {s:?}: bad exponent: {e}"))?;
                ConvexGauge::power(p, 1.0).map_err(|e| format!("gauge {s:?}: {e}"))
            } else if let Some(r) = s.strip_prefix("capped:") {
                let r: f64 = r
                    .parse()
                    .map_err(|e| format!("gauge {s:?}: bad cap: {e}"))?;
                ConvexGauge::capped(ConvexGauge::x2(), r, true)
                    .map_err(|e| format!("gauge {s:?}: {e}"))
            } else {
                Err(format!(
                    "unknown gauge {s:?}; expected x2, x2over2, xp:<p>, linear, or capped:<r>"
                ))
            }
        }
    }
}

impl GaugeSpec {
    pub fn build(&self) -> Result<ConvexGauge, String> {
        match self {
            GaugeSpec::Shorthand(s) => parse_gauge_shorthand(s),
            GaugeSpec::Family(f) => match f {
                GaugeFamilySpec::Power { p, scale } => {
                    ConvexGauge::power(*p, *scale).map_err(|e| format!("gauge: {e}"))
                }
                GaugeFamilySpec::PiecewiseLinear { knots } => {
                    ConvexGauge::piecewise_linear(knots.clone()).map_err(|e| format!("gauge: {e}"))
                }
                GaugeFamilySpec::Capped { inner, cap, closed } => {
                    let inner = inner.build()?;
                    ConvexGauge::capped(inner, *cap, *closed).map_err(|e| format!("gauge: {e}"))
                }
                GaugeFamilySpec::Grid { abscissae, values } => {
                    ConvexGauge::grid_sampled(abscissae.clone(), values.clone())
                        .map_err(|e| format!("gauge: {e}"))
                }
            },
        }
    }
}

/// Cost specification: `"metric"`, `{"power_of_metric": p}`, or
/// `{"gauge_of_metric": <gauge spec>}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum CostSpecFile {
    Shorthand(String),
    Structured(CostFamilySpec),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CostFamilySpec {
    PowerOfMetric(f64),
    GaugeOfMetric(GaugeSpec),
}

impl CostSpecFile {
    pub fn build(&self) -> Result<CostSpec, String> {
        match self {
            CostSpecFile::Shorthand(s) if s.trim() == "metric" => Ok(CostSpec::Metric),
            CostSpecFile::Shorthand(s) => {
                // any gauge shorthand is also a cost gauge
                Ok(CostSpec::GaugeOfMetric {
                    q: parse_gauge_shorthand(s)?,
                })
            }
            CostSpecFile::Structured(CostFamilySpec::PowerOfMetric(p)) => {
                Ok(CostSpec::PowerOfMetric { p: *p })
            }
            CostSpecFile::Structured(CostFamilySpec::GaugeOfMetric(g)) => {
                Ok(CostSpec::GaugeOfMetric { q: g.build()? })
            }
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarnessSpec {
    pub seed: Option<u64>,
    pub candidates: Option<usize>,
    pub tolerance: Option<f64>,
    /// When present, the candidate set is exactly these named measures.
    pub explicit_candidates: Option<Vec<String>>,
    /// When present, scan suites use exactly these named functions.
    pub explicit_functions: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub space: SpaceSpec,
    pub measures: BTreeMap<String, Vec<Num>>,
    #[serde(default)]
    pub functions: BTreeMap<String, Vec<Num>>,
    #[serde(default)]
    pub gauges: BTreeMap<String, GaugeSpec>,
    #[serde(default)]
    pub costs: BTreeMap<String, CostSpecFile>,
    #[serde(default)]
    pub chi: Option<Vec<Num>>,
    #[serde(default)]
    pub harness: HarnessSpec,
}

/// A fully validated instance.
pub struct Instance {
    pub space: MetricSpace,
    pub measures: BTreeMap<String, DiscreteMeasure>,
    pub functions: BTreeMap<String, SpaceFunction>,
    pub gauges: BTreeMap<String, ConvexGauge>,
    pub costs: BTreeMap<String, CostSpec>,
    pub chi: Option<SpaceFunction>,
    pub harness: HarnessSpec,
}

impl Instance {
    pub fn measure(&self, name: &str) -> Result<&DiscreteMeasure, String> {
        self.measures
            .get(name)
            .ok_or_else(|| format!("measures: no measure named {name:?}"))
    }

    pub fn function(&self, name: &str) -> Result<&SpaceFunction, String> {
        self.functions
            .get(name)
            .ok_or_else(|| format!("functions: no function named {name:?}"))
    }
}

/// Parse and validate an instance file; error strings carry the field path.
pub fn load_instance(path: &Path) -> Result<Instance, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_instance(&text)
}

pub fn parse_instance(text: &str) -> Result<Instance, String> {
    let mut deserializer = serde_json::Deserializer::from_str(text);
    let spec: InstanceSpec = serde_path_to_error::deserialize(&mut deserializer)
        .map_err(|e| format!("instance file: at {}: {}", e.path(), e.inner()))?;
    build_instance(spec)
}

fn build_instance(spec: InstanceSpec) -> Result<Instance, String> {
    let n = spec.space.labels.len();
    let mut dist = Vec::with_capacity(n);
    for (i, row) in spec.space.dist.iter().enumerate() {
        dist.push(nums(row, &format!("space.dist[{i}]"))?);
    }
    let space = MetricSpace::new(spec.space.labels.clone(), dist)
        .map_err(|e| format!("space: {e}"))?;

    let mut measures = BTreeMap::new();
    for (name, raw) in &spec.measures {
        let w = nums(raw, &format!("measures.{name}"))?;
        if w.len() != n {
            return Err(format!(
                "measures.{name}: expected {n} weights, got {}",
                w.len()
            ));
        }
        let m = DiscreteMeasure::new(w).map_err(|e| format!("measures.{name}: {e}"))?;
        measures.insert(name.clone(), m);
    }

    let mut functions = BTreeMap::new();
    for (name, raw) in &spec.functions {
        let v = nums(raw, &format!("functions.{name}"))?;
        if v.len() != n {
            return Err(format!(
                "functions.{name}: expected {n} values, got {}",
                v.len()
            ));
        }
        let f = SpaceFunction::new(v).map_err(|e| format!("functions.{name}: {e}"))?;
        functions.insert(name.clone(), f);
    }

    let mut gauges = BTreeMap::new();
    for (name, g) in &spec.gauges {
        gauges.insert(
            name.clone(),
            g.build().map_err(|e| format!("gauges.{name}: {e}"))?,
        );
    }

    let mut costs = BTreeMap::new();
    for (name, c) in &spec.costs {
        costs.insert(
            name.clone(),
            c.build().map_err(|e| format!("costs.{name}: {e}"))?,
        );
    }

    let chi = match &spec.chi {
        None => None,
        Some(raw) => {
            let v = nums(raw, "chi")?;
            if v.len() != n {
                return Err(format!("chi: expected {n} values, got {}", v.len()));
            }
            if v.iter().any(|&x| x < 0.0) {
                return Err("chi: values must be nonnegative".to_string());
            }
            Some(SpaceFunction::new(v).map_err(|e| format!("chi: {e}"))?)
        }
    };

    Ok(Instance {
        space,
        measures,
        functions,
        gauges,
        costs,
        chi,
        harness: spec.harness,
    })
}

/// The built-in two-point instance used when no file is supplied: a unit
/// distance, the uniform reference measure, χ ≡ 1, and f = (1, −1).
pub fn bundled_instance() -> Instance {
    parse_instance(
        r#"{
        "space": {"labels": ["a", "b"], "dist": [[0, 1], [1, 0]]},
        "measures": {"mu": [0.5, 0.5]},
        "functions": {"f": [1, -1]},
        "chi": [1, 1]
    }"#,
    )
    .expect("the bundled instance is valid")
}

/// Function specs on the command line: `const:<v>`, `values:a,b,...`, `chi`,
/// or a named function from the instance file.
pub fn resolve_function(
    spec: &str,
    instance: &Instance,
    n: usize,
) -> Result<SpaceFunction, String> {
    if let Some(v) = spec.strip_prefix("const:") {
        let v: f64 = v
            .parse()
            .map_err(|e| format!("function {spec:?}: bad constant: {e}"))?;
        return SpaceFunction::constant(n, v).map_err(|e| format!("function {spec:?}: {e}"));
    }
    if let Some(list) = spec.strip_prefix("values:") {
        let vals: Result<Vec<f64>, _> = list.split(',').map(|x| x.trim().parse::<f64>()).collect();
        let vals = vals.map_err(|e| format!("function {spec:?}: {e}"))?;
        if vals.len() != n {
            return Err(format!(
                "function {spec:?}: expected {n} values, got {}",
                vals.len()
            ));
        }
        return SpaceFunction::new(vals).map_err(|e| format!("function {spec:?}: {e}"));
    }
    if spec == "chi" {
        return instance
            .chi
            .clone()
            .ok_or_else(|| "function \"chi\": the instance has no chi".to_string());
    }
    instance.function(spec).cloned()
}
