//! Successive shortest paths on the bipartite transportation network.
//!
//! Only points with positive mass become network nodes. Node potentials are
//! kept from one Dijkstra pass to the next so that every reduced cost stays
//! nonnegative; at termination they are an optimal dual solution of the
//! reduced problem.

use super::CostMatrix;
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// Optimal solution of a transport problem restricted to the supports.
#[derive(Debug, Clone)]
pub(crate) struct ReducedSolution {
    pub value: f64,
    /// Original indices of points with positive source mass.
    pub sources: Vec<usize>,
    /// Original indices of points with positive target mass.
    pub sinks: Vec<usize>,
    /// Row-major `sources.len() x sinks.len()` plan.
    pub flow: Vec<f64>,
    pub source_mass: Vec<f64>,
    pub sink_mass: Vec<f64>,
    /// Source duals; `u_i - v_j ≤ h(i, j)` with equality where flow is positive.
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

/// Nonzero entries of a mass vector as `(index, mass)`.
pub(crate) type SparseMass = Vec<(usize, f64)>;

pub(crate) fn sparse(weights: &[f64]) -> SparseMass {
    weights
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, w)| w > 0.0)
        .collect()
}

impl ReducedSolution {
    pub fn dual_value(&self) -> f64 {
        let src: f64 = self
            .source_mass
            .iter()
            .zip(&self.u)
            .map(|(p, u)| p * u)
            .sum();
        let dst: f64 = self.sink_mass.iter().zip(&self.v).map(|(q, v)| q * v).sum();
        src - dst
    }

    /// Largest violation of `u_i - v_j ≤ h(i, j)`.
    pub fn dual_infeasibility(&self, cost: &CostMatrix) -> f64 {
        let mut worst = 0.0f64;
        for (&i, &ui) in self.sources.iter().zip(&self.u) {
            for (&j, &vj) in self.sinks.iter().zip(&self.v) {
                worst = worst.max(ui - vj - cost.get(i, j));
            }
        }
        worst
    }

    /// Checks strong duality and dual feasibility on the reduced problem.
    pub fn certify(&self, cost: &CostMatrix, tol: &Tolerances) -> Result<()> {
        let gap = (self.value - self.dual_value()).abs();
        if gap > tol.duality_gap {
            return Err(Error::Certificate(format!("duality gap {gap:e}")));
        }
        let infeasible = self.dual_infeasibility(cost);
        if infeasible > tol.feasibility {
            return Err(Error::Certificate(format!(
                "dual infeasibility {infeasible:e}"
            )));
        }
        Ok(())
    }
}

/// Exact minimum-cost transport of `p` onto `q` under `cost`.
pub(crate) fn solve(
    cost: &CostMatrix,
    p: &[f64],
    q: &[f64],
    tol: &Tolerances,
) -> Result<ReducedSolution> {
    let n = cost.size();
    if p.len() != n || q.len() != n {
        return Err(Error::Shape(format!(
            "cost matrix is {n}x{n} but distributions have {} and {} entries",
            p.len(),
            q.len()
        )));
    }
    solve_sparse(cost, &sparse(p), &sparse(q), tol)
}

/// [`solve`] on precomputed supports. Indices must be below `cost.size()`.
pub(crate) fn solve_sparse(
    cost: &CostMatrix,
    p: &[(usize, f64)],
    q: &[(usize, f64)],
    tol: &Tolerances,
) -> Result<ReducedSolution> {
    let source_mass: f64 = p.iter().map(|e| e.1).sum();
    let target_mass: f64 = q.iter().map(|e| e.1).sum();
    if (source_mass - target_mass).abs() > tol.mass_mismatch {
        return Err(Error::MassMismatch {
            source_mass,
            target_mass,
        });
    }

    let sources: Vec<usize> = p.iter().map(|e| e.0).collect();
    let sinks: Vec<usize> = q.iter().map(|e| e.0).collect();
    let source_mass: Vec<f64> = p.iter().map(|e| e.1).collect();
    let sink_mass: Vec<f64> = q.iter().map(|e| e.1).collect();
    let (m, k) = (sources.len(), sinks.len());

    if p == q {
        let flow = (0..m)
            .flat_map(|i| (0..k).map(move |j| if i == j { p[i].1 } else { 0.0 }))
            .collect();
        return Ok(ReducedSolution {
            value: 0.0,
            sources,
            sinks,
            flow,
            source_mass,
            sink_mass,
            u: vec![0.0; m],
            v: vec![0.0; k],
        });
    }

    let c: Vec<f64> = sources
        .iter()
        .flat_map(|&i| sinks.iter().map(move |&j| cost.get(i, j)))
        .collect();

    let mut supply = source_mass.clone();
    let mut demand = sink_mass.clone();
    let mut flow = vec![0.0; m * k];

    // Node layout: 0 = super source, 1..=m sources, m+1..=m+k sinks, m+k+1 = sink.
    let n_nodes = m + k + 2;
    let super_sink = m + k + 1;
    let mut potential = vec![0.0; n_nodes];
    let mut dist = vec![f64::INFINITY; n_nodes];
    let mut pred = vec![usize::MAX; n_nodes];
    let mut done = vec![false; n_nodes];

    let max_augmentations = 50 * (m + k) * (m + k) + 100;
    let mut augmentations = 0;
    loop {
        dist.iter_mut().for_each(|d| *d = f64::INFINITY);
        pred.iter_mut().for_each(|p| *p = usize::MAX);
        done.iter_mut().for_each(|d| *d = false);
        dist[0] = 0.0;

        loop {
            let mut u = usize::MAX;
            let mut best = f64::INFINITY;
            for (node, &d) in dist.iter().enumerate() {
                if !done[node] && d < best {
                    best = d;
                    u = node;
                }
            }
            if u == usize::MAX {
                break;
            }
            done[u] = true;
            let du = dist[u];
            let relax = |to: usize, arc_cost: f64, dist: &mut [f64], pred: &mut [usize]| {
                let reduced = (arc_cost + potential[u] - potential[to]).max(0.0);
                let cand = du + reduced;
                if cand < dist[to] {
                    dist[to] = cand;
                    pred[to] = u;
                }
            };
            if u == 0 {
                for i in 0..m {
                    if supply[i] > 0.0 {
                        relax(1 + i, 0.0, &mut dist, &mut pred);
                    }
                }
            } else if u <= m {
                let i = u - 1;
                for j in 0..k {
                    relax(1 + m + j, c[i * k + j], &mut dist, &mut pred);
                }
            } else if u < super_sink {
                let j = u - 1 - m;
                for i in 0..m {
                    if flow[i * k + j] > 0.0 {
                        relax(1 + i, -c[i * k + j], &mut dist, &mut pred);
                    }
                }
                if demand[j] > 0.0 {
                    relax(super_sink, 0.0, &mut dist, &mut pred);
                }
            }
        }

        let reach = dist
            .iter()
            .copied()
            .filter(|d| d.is_finite())
            .fold(0.0, f64::max);
        for (pi, &d) in potential.iter_mut().zip(&dist) {
            *pi += if d.is_finite() { d } else { reach };
        }

        if !dist[super_sink].is_finite() {
            break;
        }
        augmentations += 1;
        if augmentations > max_augmentations {
            return Err(Error::SolverStalled(max_augmentations));
        }

        let mut bottleneck = f64::INFINITY;
        let mut node = super_sink;
        while node != 0 {
            let prev = pred[node];
            if node == super_sink {
                bottleneck = bottleneck.min(demand[prev - 1 - m]);
            } else if prev == 0 {
                bottleneck = bottleneck.min(supply[node - 1]);
            } else if prev > m {
                // backward along a sink -> source arc
                bottleneck = bottleneck.min(flow[(node - 1) * k + (prev - 1 - m)]);
            }
            node = prev;
        }

        let mut node = super_sink;
        while node != 0 {
            let prev = pred[node];
            if node == super_sink {
                let j = prev - 1 - m;
                demand[j] = if demand[j] == bottleneck {
                    0.0
                } else {
                    demand[j] - bottleneck
                };
            } else if prev == 0 {
                let i = node - 1;
                supply[i] = if supply[i] == bottleneck {
                    0.0
                } else {
                    supply[i] - bottleneck
                };
            } else if prev <= m {
                flow[(prev - 1) * k + (node - 1 - m)] += bottleneck;
            } else {
                let e = (node - 1) * k + (prev - 1 - m);
                flow[e] = if flow[e] == bottleneck {
                    0.0
                } else {
                    flow[e] - bottleneck
                };
            }
            node = prev;
        }
    }

    let leftover = supply.iter().sum::<f64>() + demand.iter().sum::<f64>();
    if leftover > tol.mass_mismatch {
        return Err(Error::Certificate(format!(
            "{leftover:e} mass left unrouted"
        )));
    }

    let value = flow.iter().zip(&c).map(|(x, h)| x * h).sum();
    let u = (0..m).map(|i| -potential[1 + i]).collect();
    let v = (0..k).map(|j| -potential[1 + m + j]).collect();
    Ok(ReducedSolution {
        value,
        sources,
        sinks,
        flow,
        source_mass,
        sink_mass,
        u,
        v,
    })
}
