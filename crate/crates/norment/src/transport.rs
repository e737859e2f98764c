//! Exact optimal transport on finite spaces.
//!
//! The primal problem over couplings π with first marginal ν and second
//! marginal μ,
//!
//! ```text
//! 𝒯_c(ν, μ) = min { Σ_{ij} π_ij c_ij : π ≥ 0, π 1 = ν, πᵀ1 = μ },
//! ```
//!
//! is solved by a transportation-simplex (network simplex on the bipartite
//! transportation polytope) implemented in-repo, with Bland's rule for
//! anti-cycling. Optimality is certified by complementary slackness against
//! the dual variables. For the metric cost the dual variables are projected
//! to an exactly 1-Lipschitz Kantorovich potential φ via
//! φ(x) = min_y (d(x, y) − v_y), so the pair (plan cost, ⟨φ, ν − μ⟩) is a
//! two-sided optimality certificate.

use crate::convex::ConvexGauge;
use crate::measure::{DiscreteMeasure, MetricSpace, SpaceFunction};
use crate::{Error, Result};

/// How to build a cost matrix from the metric.
#[derive(Debug, Clone)]
pub enum CostSpec {
    /// c(x, y) = d(x, y)
    Metric,
    /// c(x, y) = d(x, y)^p, p ≥ 1
    PowerOfMetric { p: f64 },
    /// c(x, y) = q(d(x, y)) for an increasing convex gauge q
    GaugeOfMetric { q: ConvexGauge },
}

/// An optimal coupling with its cost, the LP dual variables, and (for metric
/// costs) a 1-Lipschitz Kantorovich potential.
#[derive(Debug, Clone)]
pub struct TransportPlan {
    /// n×n coupling: row sums are ν, column sums are μ.
    pub plan: Vec<Vec<f64>>,
    pub cost: f64,
    /// Dual variable per row (ν point); zero on pruned (zero-mass) points.
    pub row_duals: Vec<f64>,
    /// Dual variable per column (μ point); zero on pruned points.
    pub col_duals: Vec<f64>,
    /// Kantorovich potential, present for metric costs.
    pub potential: Option<SpaceFunction>,
}

/// The three quantities of the sandwich chain
/// q(𝒯_d) ≤ 𝒯_{q∘d} ≤ ‖χ_{x0}·(ν−μ)‖_TV with χ_{x0} = ½·q(2 d(·, x0)).
#[derive(Debug, Clone, Copy)]
pub struct SandwichBounds {
    pub q_of_metric_cost: f64,
    pub gauge_cost: f64,
    pub weighted_tv: f64,
}

/// Entrywise cost matrix q(d(i, j)). Errors when the gauge is infinite at
/// some realized distance.
#[allow(clippy::needless_range_loop)]
pub fn cost_matrix(space: &MetricSpace, spec: &CostSpec) -> Result<Vec<Vec<f64>>> {
    let n = space.len();
    let mut cost = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let d = space.dist(i, j);
            let c = match spec {
                CostSpec::Metric => d,
                CostSpec::PowerOfMetric { p } => {
                    if *p < 1.0 {
                        return Err(Error::InvalidGauge(format!(
                            "power-of-metric exponent must be >= 1, got {p}"
                        )));
                    }
                    d.powf(*p)
                }
                CostSpec::GaugeOfMetric { q } => q.eval(d),
            };
            if !c.is_finite() {
                return Err(Error::InfiniteCost { i, j });
            }
            cost[i][j] = c;
        }
    }
    Ok(cost)
}

/// Optimal transport cost between ν (rows) and μ (columns) for an arbitrary
/// finite nonnegative cost matrix. Zero-mass points are pruned before the
/// solve and reinserted as zero rows/columns.
pub fn ot_cost(
    nu: &DiscreteMeasure,
    mu: &DiscreteMeasure,
    cost: &[Vec<f64>],
) -> Result<TransportPlan> {
    let n = nu.len();
    if mu.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: mu.len(),
        });
    }
    if cost.len() != n || cost.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: cost.len(),
        });
    }
    for (i, row) in cost.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if !c.is_finite() || c < 0.0 {
                return Err(Error::InfiniteCost { i, j });
            }
        }
    }

    let rows: Vec<usize> = nu.support().collect();
    let cols: Vec<usize> = mu.support().collect();
    let supply: Vec<f64> = rows.iter().map(|&i| nu.weight(i)).collect();
    let demand: Vec<f64> = cols.iter().map(|&j| mu.weight(j)).collect();
    let pruned_cost: Vec<Vec<f64>> = rows
        .iter()
        .map(|&i| cols.iter().map(|&j| cost[i][j]).collect())
        .collect();

    let solved = simplex::solve(&supply, &demand, &pruned_cost)?;

    let mut plan = vec![vec![0.0; n]; n];
    for (a, &i) in rows.iter().enumerate() {
        for (b, &j) in cols.iter().enumerate() {
            plan[i][j] = solved.flow[a][b];
        }
    }
    let mut row_duals = vec![0.0; n];
    let mut col_duals = vec![0.0; n];
    for (a, &i) in rows.iter().enumerate() {
        row_duals[i] = solved.u[a];
    }
    for (b, &j) in cols.iter().enumerate() {
        col_duals[j] = solved.v[b];
    }
    let plan = TransportPlan {
        plan,
        cost: solved.cost,
        row_duals,
        col_duals,
        potential: None,
    };
    validate_plan(&plan, nu, mu, cost)?;
    Ok(plan)
}

/// Optimal transport for the metric cost, with the Kantorovich potential
/// attached. The potential is built from the column duals by the 1-Lipschitz
/// projection φ(x) = min_y (d(x, y) − v_y) over supported columns.
pub fn metric_transport(
    nu: &DiscreteMeasure,
    mu: &DiscreteMeasure,
    space: &MetricSpace,
) -> Result<TransportPlan> {
    let cost = cost_matrix(space, &CostSpec::Metric)?;
    let mut plan = ot_cost(nu, mu, &cost)?;
    let cols: Vec<usize> = mu.support().collect();
    let n = space.len();
    let mut phi = Vec::with_capacity(n);
    for x in 0..n {
        let val = cols
            .iter()
            .map(|&y| space.dist(x, y) - plan.col_duals[y])
            .fold(f64::INFINITY, f64::min);
        phi.push(val);
    }
    plan.potential = Some(SpaceFunction::new(phi)?);
    Ok(plan)
}

/// Kantorovich–Rubinstein dual value and an attaining 1-Lipschitz potential:
/// 𝒯_d(ν, μ) = sup { ⟨φ, ν⟩ − ⟨φ, μ⟩ : φ 1-Lipschitz }.
pub fn kr_dual(
    nu: &DiscreteMeasure,
    mu: &DiscreteMeasure,
    space: &MetricSpace,
) -> Result<(f64, SpaceFunction)> {
    let plan = metric_transport(nu, mu, space)?;
    let phi = plan.potential.expect("metric transport sets the potential");
    let value: f64 = phi
        .values()
        .iter()
        .zip(nu.weights().iter().zip(mu.weights()))
        .map(|(&p, (&a, &b))| p * (a - b))
        .sum();
    Ok((value, phi))
}

/// The sandwich chain around a gauge-of-metric cost: q applied to the metric
/// cost, the primal gauge cost, and the weighted total variation against
/// χ_{x0}(x) = ½ q(2 d(x, x0)).
pub fn sandwich_bounds(
    nu: &DiscreteMeasure,
    mu: &DiscreteMeasure,
    space: &MetricSpace,
    q: &ConvexGauge,
    x0: usize,
) -> Result<SandwichBounds> {
    let metric = metric_transport(nu, mu, space)?;
    let gauge_cost = ot_cost(
        nu,
        mu,
        &cost_matrix(space, &CostSpec::GaugeOfMetric { q: q.clone() })?,
    )?;
    let mut weighted_tv = 0.0;
    for i in 0..space.len() {
        let chi = 0.5 * q.eval(2.0 * space.dist(i, x0));
        if !chi.is_finite() {
            return Err(Error::InfiniteCost { i, j: x0 });
        }
        weighted_tv += chi * (nu.weight(i) - mu.weight(i)).abs();
    }
    Ok(SandwichBounds {
        q_of_metric_cost: q.eval(metric.cost),
        gauge_cost: gauge_cost.cost,
        weighted_tv,
    })
}

/// Feasibility and optimality diagnostics for a returned plan.
pub fn validate_plan(
    plan: &TransportPlan,
    nu: &DiscreteMeasure,
    mu: &DiscreteMeasure,
    cost: &[Vec<f64>],
) -> Result<()> {
    let n = nu.len();
    let scale = cost.iter().flatten().fold(0f64, |m, &c| m.max(c.abs()));
    for i in 0..n {
        let row: f64 = plan.plan[i].iter().sum();
        if (row - nu.weight(i)).abs() > 1e-10 {
            return Err(Error::SolverStalled(format!(
                "row sum {row} differs from nu weight {}",
                nu.weight(i)
            )));
        }
    }
    for j in 0..n {
        let col: f64 = (0..n).map(|i| plan.plan[i][j]).sum();
        if (col - mu.weight(j)).abs() > 1e-10 {
            return Err(Error::SolverStalled(format!(
                "column sum {col} differs from mu weight {}",
                mu.weight(j)
            )));
        }
    }
    let recomputed: f64 = (0..n)
        .map(|i| (0..n).map(|j| plan.plan[i][j] * cost[i][j]).sum::<f64>())
        .sum();
    if (recomputed - plan.cost).abs() > 1e-9 * (1.0 + scale) {
        return Err(Error::SolverStalled(format!(
            "stored cost {} differs from plan cost {recomputed}",
            plan.cost
        )));
    }
    // complementary slackness against the duals
    let tol = 1e-9 * (1.0 + scale);
    for i in nu.support() {
        for j in mu.support() {
            let r = cost[i][j] - plan.row_duals[i] - plan.col_duals[j];
            if r < -tol {
                return Err(Error::SolverStalled(format!(
                    "negative reduced cost {r} at ({i},{j})"
                )));
            }
            if plan.plan[i][j] > 1e-10 && r.abs() > tol {
                return Err(Error::SolverStalled(format!(
                    "slackness violated at ({i},{j}): flow {} with reduced cost {r}",
                    plan.plan[i][j]
                )));
            }
        }
    }
    Ok(())
}

mod simplex {
    //! Transportation simplex with northwest-corner start and Bland's rule.

    use crate::{Error, Result};

    pub(super) struct Solved {
        pub flow: Vec<Vec<f64>>,
        pub u: Vec<f64>,
        pub v: Vec<f64>,
        pub cost: f64,
    }

    pub(super) fn solve(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> Result<Solved> {
        let m = supply.len();
        let k = demand.len();
        if m == 0 || k == 0 {
            return Err(Error::SolverStalled("empty marginal support".into()));
        }
        let scale = cost.iter().flatten().fold(0f64, |a, &c| a.max(c.abs()));
        let enter_tol = 1e-13 * (1.0 + scale);

        // northwest-corner initial basis: exactly m + k − 1 arcs, including
        // degenerate zero-flow ones
        let mut basis: Vec<(usize, usize, f64)> = Vec::with_capacity(m + k - 1);
        {
            let mut s = supply.to_vec();
            let mut d = demand.to_vec();
            let (mut i, mut j) = (0usize, 0usize);
            loop {
                let t = s[i].min(d[j]).max(0.0);
                basis.push((i, j, t));
                s[i] -= t;
                d[j] -= t;
                if i == m - 1 && j == k - 1 {
                    break;
                }
                if j == k - 1 || (s[i] <= d[j] && i < m - 1) {
                    i += 1;
                } else {
                    j += 1;
                }
            }
        }

        let max_pivots = 2000 * (m + k) * (m + k) + 10_000;
        let mut pivots = 0usize;
        loop {
            let (u, v) = duals(m, k, &basis, cost)?;
            // entering arc: Bland — first (row-major) with negative reduced cost
            let mut entering = None;
            'scan: for i in 0..m {
                for j in 0..k {
                    let r = cost[i][j] - u[i] - v[j];
                    if r < -enter_tol {
                        entering = Some((i, j));
                        break 'scan;
                    }
                }
            }
            let (ei, ej) = match entering {
                None => break,
                Some(arc) => arc,
            };

            // unique tree path from row node ei to col node m + ej
            let path = tree_path(m, k, &basis, ei, m + ej)?;
            // cycle = entering arc (+θ) followed by the path back; arcs along
            // the path alternate −θ, +θ, ... starting from the entering col
            let mut deltas: Vec<(usize, isize)> = Vec::new(); // (basis idx, sign)
            {
                let mut sign = -1isize;
                let mut node = m + ej;
                for &next in path.iter().rev().skip(1) {
                    let (a, b) = if node >= m {
                        (next, node - m)
                    } else {
                        (node, next - m)
                    };
                    let idx = basis
                        .iter()
                        .position(|&(i, j, _)| i == a && j == b)
                        .ok_or_else(|| Error::SolverStalled("missing basic arc".into()))?;
                    deltas.push((idx, sign));
                    sign = -sign;
                    node = next;
                }
            }
            // ratio test on the backward arcs, first minimizer leaves (Bland)
            let mut theta = f64::INFINITY;
            let mut leaving = None;
            for &(idx, sign) in &deltas {
                if sign < 0 && basis[idx].2 < theta {
                    theta = basis[idx].2;
                    leaving = Some(idx);
                }
            }
            let leaving =
                leaving.ok_or_else(|| Error::SolverStalled("unbounded pivot cycle".into()))?;
            for &(idx, sign) in &deltas {
                if sign > 0 {
                    basis[idx].2 += theta;
                } else {
                    basis[idx].2 = (basis[idx].2 - theta).max(0.0);
                }
            }
            basis[leaving] = (ei, ej, theta);

            pivots += 1;
            if pivots > max_pivots {
                return Err(Error::SolverStalled(format!(
                    "pivot cap {max_pivots} exceeded"
                )));
            }
        }

        let (u, v) = duals(m, k, &basis, cost)?;
        let mut flow = vec![vec![0.0; k]; m];
        let mut total = 0.0;
        for &(i, j, f) in &basis {
            flow[i][j] += f;
            total += f * cost[i][j];
        }
        Ok(Solved {
            flow,
            u,
            v,
            cost: total,
        })
    }

    /// Dual variables from u[0] = 0 over the basis tree: u_i + v_j = c_ij on
    /// every basic arc.
    fn duals(
        m: usize,
        k: usize,
        basis: &[(usize, usize, f64)],
        cost: &[Vec<f64>],
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        let nodes = m + k;
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes]; // (neighbor, basis idx)
        for (idx, &(i, j, _)) in basis.iter().enumerate() {
            adj[i].push((m + j, idx));
            adj[m + j].push((i, idx));
        }
        let mut u = vec![f64::NAN; m];
        let mut v = vec![f64::NAN; k];
        u[0] = 0.0;
        let mut stack = vec![0usize];
        let mut seen = vec![false; nodes];
        seen[0] = true;
        while let Some(node) = stack.pop() {
            for &(next, idx) in &adj[node] {
                if seen[next] {
                    continue;
                }
                seen[next] = true;
                let (i, j, _) = basis[idx];
                if next >= m {
                    v[next - m] = cost[i][j] - u[i];
                } else {
                    u[next] = cost[i][j] - v[j];
                }
                stack.push(next);
            }
        }
        if u.iter().any(|x| x.is_nan()) || v.iter().any(|x| x.is_nan()) {
            return Err(Error::SolverStalled("basis is not a spanning tree".into()));
        }
        Ok((u, v))
    }

    /// Node path from `from` to `to` along basic arcs.
    fn tree_path(
        m: usize,
        k: usize,
        basis: &[(usize, usize, f64)],
        from: usize,
        to: usize,
    ) -> Result<Vec<usize>> {
        let nodes = m + k;
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
        for &(i, j, _) in basis {
            adj[i].push(m + j);
            adj[m + j].push(i);
        }
        let mut parent = vec![usize::MAX; nodes];
        let mut stack = vec![from];
        parent[from] = from;
        while let Some(node) = stack.pop() {
            if node == to {
                break;
            }
            for &next in &adj[node] {
                if parent[next] == usize::MAX {
                    parent[next] = node;
                    stack.push(next);
                }
            }
        }
        if parent[to] == usize::MAX {
            return Err(Error::SolverStalled("basis tree is disconnected".into()));
        }
        let mut path = vec![to];
        let mut node = to;
        while node != from {
            node = parent[node];
            path.push(node);
        }
        path.reverse();
        Ok(path)
    }
}
