//! Exact Kantorovich distances on finite supports.
//!
//! [`kantorovich`] solves the transportation problem by successive shortest
//! paths and returns the optimal plan together with an `h`-Lipschitz dual
//! function certifying optimality: the plan cost and `P(f) - Q(f)` agree to
//! within the configured duality-gap tolerance. Both certificates are
//! re-checked before the result is returned.
//!
//! Zero-mass support points are kept in every output so indices line up
//! with the state space of the MDP the distributions come from.

mod brute;
mod ssp;

pub(crate) use ssp::{sparse, SparseMass};

pub use brute::{brute_force_kantorovich, BRUTE_FORCE_LIMIT};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::tolerance::Tolerances;

/// Probability vector over a finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    /// Accepts finite, nonnegative weights summing to 1 within 1e-12.
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::Distribution("empty support".into()));
        }
        if let Some(i) = probabilities
            .iter()
            .position(|p| !p.is_finite() || *p < 0.0)
        {
            return Err(Error::Distribution(format!(
                "entry {i} is {} (must be finite and nonnegative)",
                probabilities[i]
            )));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > Tolerances::DEFAULT.row_sum {
            return Err(Error::Distribution(format!("total mass {total} ≠ 1")));
        }
        Ok(Distribution(probabilities))
    }

    /// Scales nonnegative weights to total mass 1.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::Distribution(format!(
                "cannot normalize total {total}"
            )));
        }
        Self::new(weights.into_iter().map(|w| w / total).collect())
    }

    pub fn point_mass(n: usize, at: usize) -> Self {
        let mut p = vec![0.0; n];
        p[at] = 1.0;
        Distribution(p)
    }

    pub fn uniform(n: usize) -> Self {
        Distribution(vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Expectation of `f`.
    pub fn expect(&self, f: &[f64]) -> f64 {
        self.0.iter().zip(f).map(|(p, x)| p * x).sum()
    }
}

/// Dense ground cost, required to be a semimetric: nonnegative, symmetric,
/// zero on the diagonal and satisfying the triangle inequality within 1e-9.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    n: usize,
    data: Vec<f64>,
}

impl CostMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Shape(format!(
                "{} entries for a {n}x{n} cost",
                data.len()
            )));
        }
        let cost = CostMatrix { n, data };
        if let Some(problem) = cost
            .semimetric_violations(Tolerances::DEFAULT.triangle)
            .first()
        {
            return Err(Error::Cost(problem.clone()));
        }
        Ok(cost)
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("cost rows must form a square matrix".into()));
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    pub(crate) fn from_raw(n: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        CostMatrix { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        CostMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// 1 between distinct points, 0 on the diagonal.
    pub fn discrete(n: usize) -> Self {
        let data = (0..n * n)
            .map(|e| if e / n == e % n { 0.0 } else { 1.0 })
            .collect();
        CostMatrix { n, data }
    }

    /// 1 between points in different blocks, 0 within a block.
    pub fn discrete_quotient(partition: &Partition) -> Self {
        let n = partition.n_states();
        let data = (0..n * n)
            .map(|e| {
                if partition.same_block(e / n, e % n) {
                    0.0
                } else {
                    1.0
                }
            })
            .collect();
        CostMatrix { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Human-readable descriptions of every broken semimetric axiom.
    pub fn semimetric_violations(&self, slack: f64) -> Vec<String> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let d = self.get(i, j);
                if !d.is_finite() || d < 0.0 {
                    out.push(format!(
                        "h({i},{j}) = {d} is not a finite nonnegative number"
                    ));
                } else if i == j && d != 0.0 {
                    out.push(format!("h({i},{i}) = {d} is not zero"));
                } else if (d - self.get(j, i)).abs() > slack {
                    out.push(format!(
                        "h({i},{j}) = {d} ≠ h({j},{i}) = {}",
                        self.get(j, i)
                    ));
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for i in 0..n {
            for k in 0..n {
                let direct = self.get(i, k);
                for j in 0..n {
                    let via = self.get(i, j) + self.get(j, k);
                    if direct > via + slack {
                        out.push(format!(
                            "triangle inequality fails: h({i},{k}) = {direct} > h({i},{j}) + h({j},{k}) = {via}"
                        ));
                    }
                }
            }
        }
        out
    }

    /// True when `self ≤ other` entrywise.
    pub fn dominated_by(&self, other: &CostMatrix) -> bool {
        self.data.iter().zip(&other.data).all(|(a, b)| a <= b)
    }
}

/// Coupling with prescribed marginals, stored densely as `source x target`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    n: usize,
    mass: Vec<f64>,
}

impl TransportPlan {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, source: usize, target: usize) -> f64 {
        self.mass[source * self.n + target]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.mass.chunks(self.n).map(|r| r.iter().sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut cols = vec![0.0; self.n];
        for row in self.mass.chunks(self.n) {
            for (c, m) in cols.iter_mut().zip(row) {
                *c += m;
            }
        }
        cols
    }

    pub fn cost(&self, h: &CostMatrix) -> f64 {
        self.mass.iter().zip(h.as_slice()).map(|(m, c)| m * c).sum()
    }

    /// Largest deviation of either marginal from `p` and `q`, or of any
    /// entry below zero.
    pub fn marginal_error(&self, p: &[f64], q: &[f64]) -> f64 {
        let rows = self
            .row_sums()
            .iter()
            .zip(p)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let cols = self
            .column_sums()
            .iter()
            .zip(q)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let negative = self.mass.iter().fold(0.0f64, |w, &m| w.max(-m));
        rows.max(cols).max(negative)
    }
}

/// A function on the support that is `h`-Lipschitz: `f(x) - f(y) ≤ h(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPotentials(pub Vec<f64>);

impl DualPotentials {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// `P(f) - Q(f)`.
    pub fn dual_value(&self, p: &[f64], q: &[f64]) -> f64 {
        p.iter()
            .zip(q)
            .zip(&self.0)
            .map(|((a, b), f)| (a - b) * f)
            .sum()
    }

    /// Largest value of `f(x) - f(y) - h(x, y)`; nonpositive for a member of Lip(h).
    pub fn lipschitz_violation(&self, h: &CostMatrix) -> f64 {
        let f = &self.0;
        let mut worst = f64::NEG_INFINITY;
        for x in 0..f.len() {
            for y in 0..f.len() {
                worst = worst.max(f[x] - f[y] - h.get(x, y));
            }
        }
        worst
    }
}

/// Optimal transport between two distributions with its certificates.
#[derive(Debug, Clone)]
pub struct Transport {
    /// Primal optimum, `Σ plan · h`.
    pub value: f64,
    /// `P(f) - Q(f)` for the returned potentials.
    pub dual_value: f64,
    pub plan: TransportPlan,
    pub potentials: DualPotentials,
}

/// Kantorovich distance `T_K(h)(P, Q)` with default tolerances.
pub fn kantorovich(h: &CostMatrix, p: &Distribution, q: &Distribution) -> Result<Transport> {
    kantorovich_with(h, p, q, &Tolerances::DEFAULT)
}

pub fn kantorovich_with(
    h: &CostMatrix,
    p: &Distribution,
    q: &Distribution,
    tol: &Tolerances,
) -> Result<Transport> {
    let (p, q) = (p.as_slice(), q.as_slice());
    let reduced = ssp::solve(h, p, q, tol)?;
    let n = h.size();

    let mut mass = vec![0.0; n * n];
    let k = reduced.sinks.len();
    for (a, &i) in reduced.sources.iter().enumerate() {
        for (b, &j) in reduced.sinks.iter().enumerate() {
            mass[i * n + j] = reduced.flow[a * k + b];
        }
    }
    let plan = TransportPlan { n, mass };

    // c-transform of the sink duals: h-Lipschitz on the whole support,
    // at least u on sources and at most v on sinks.
    let f: Vec<f64> = if reduced.sinks.is_empty() {
        vec![0.0; n]
    } else {
        (0..n)
            .map(|x| {
                reduced
                    .sinks
                    .iter()
                    .zip(&reduced.v)
                    .map(|(&j, &vj)| vj + h.get(x, j))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    };
    let potentials = DualPotentials(f);

    let value = plan.cost(h);
    let dual_value = potentials.dual_value(p, q);
    let marginal = plan.marginal_error(p, q);
    if marginal > tol.feasibility {
        return Err(Error::Certificate(format!(
            "plan marginal error {marginal:e}"
        )));
    }
    let lipschitz = potentials.lipschitz_violation(h);
    if lipschitz > tol.feasibility {
        return Err(Error::Certificate(format!(
            "potentials violate Lip(h) by {lipschitz:e}"
        )));
    }
    let gap = (value - dual_value).abs();
    if gap > tol.duality_gap {
        return Err(Error::Certificate(format!("duality gap {gap:e}")));
    }
    Ok(Transport {
        value,
        dual_value,
        plan,
        potentials,
    })
}

/// Optimal transport cost only. The reduced dual certificate is still
/// checked; the full-support c-transform is skipped.
pub(crate) fn kantorovich_value(
    h: &CostMatrix,
    p: &[(usize, f64)],
    q: &[(usize, f64)],
    tol: &Tolerances,
) -> Result<f64> {
    // a single source or sink leaves exactly one feasible plan
    if let ([(i, pm)], [(j, qm)]) = (p, q) {
        if (pm - qm).abs() > tol.mass_mismatch {
            return Err(Error::MassMismatch {
                source_mass: *pm,
                target_mass: *qm,
            });
        }
        return Ok(pm * h.get(*i, *j));
    }
    let reduced = ssp::solve_sparse(h, p, q, tol)?;
    reduced.certify(h, tol)?;
    Ok(reduced.value)
}

/// `sup_X |P(X) - Q(X)|`, computed as half the L1 distance.
pub fn total_variation(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Shape(format!(
            "supports of size {} and {}",
            p.len(),
            q.len()
        )));
    }
    Ok(total_variation_slices(p.as_slice(), q.as_slice()))
}

pub(crate) fn total_variation_slices(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// `sup |P(X) - Q(X)|` over unions `X` of partition blocks, i.e. the total
/// variation of the block marginals.
pub fn quotient_total_variation(
    p: &Distribution,
    q: &Distribution,
    partition: &Partition,
) -> Result<f64> {
    if p.len() != q.len() || p.len() != partition.n_states() {
        return Err(Error::Shape(format!(
            "distributions of size {} and {} with a partition of {} states",
            p.len(),
            q.len(),
            partition.n_states()
        )));
    }
    let pb = partition.block_masses(p.as_slice());
    let qb = partition.block_masses(q.as_slice());
    Ok(total_variation_slices(&pb, &qb))
}
