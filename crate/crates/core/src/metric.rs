//! Bisimulation semimetrics as fixed points of
//! `F^c(h)(s, s') = max_a (|r_s^a - r_s'^a| + c · T_K(h)(P_s^a, P_s'^a))`,
//! exact bisimulation by partition refinement, and checks that relate the
//! two and bound optimal values.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{check_discount, check_tolerance, Error, Result};
use crate::mdp::{reward_span, value_iteration, FiniteMdp};
use crate::partition::Partition;
use crate::tolerance::Tolerances;
use crate::transport::{kantorovich_value, sparse, total_variation_slices, CostMatrix, SparseMass};

const MAX_METRIC_ITERATIONS: usize = 1_000_000;

/// Symmetric state-distance matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix(CostMatrix);

impl MetricMatrix {
    pub fn zeros(n: usize) -> Self {
        MetricMatrix(CostMatrix::zeros(n))
    }

    /// Validates the semimetric axioms.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        CostMatrix::from_rows(rows).map(MetricMatrix)
    }

    pub fn size(&self) -> usize {
        self.0.size()
    }

    pub fn get(&self, s: usize, t: usize) -> f64 {
        self.0.get(s, t)
    }

    pub fn as_cost(&self) -> &CostMatrix {
        &self.0
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.size()).map(|s| self.0.row(s).to_vec()).collect()
    }

    pub fn max_entry(&self) -> f64 {
        self.0.as_slice().iter().copied().fold(0.0, f64::max)
    }

    /// `‖self - other‖∞`.
    pub fn sup_distance(&self, other: &MetricMatrix) -> f64 {
        self.0
            .as_slice()
            .iter()
            .zip(other.0.as_slice())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Broken invariants, including the upper bound `alpha`.
    pub fn violations(&self, alpha: f64, slack: f64) -> Vec<String> {
        let mut out = self.0.semimetric_violations(slack);
        let max = self.max_entry();
        if max > alpha + slack {
            out.push(format!("entry {max} exceeds the bound {alpha}"));
        }
        out
    }

    /// Largest distance between two members of the same block.
    pub fn diameter(&self, members: &[usize]) -> f64 {
        let mut d = 0.0f64;
        for (i, &s) in members.iter().enumerate() {
            for &t in &members[i + 1..] {
                d = d.max(self.get(s, t));
            }
        }
        d
    }
}

/// `B / (1 - c)`, the uniform bound on every iterate and on the fixed point.
pub fn metric_bound(mdp: &FiniteMdp, c: f64) -> f64 {
    reward_span(mdp) / (1.0 - c)
}

/// Per-action precomputation: sparse supports and identical-row classes.
struct StepContext<'a> {
    mdp: &'a FiniteMdp,
    /// `row_class[a][s]`: states with the same class have bitwise equal rows.
    row_class: Vec<Vec<usize>>,
    /// `support[s * n_actions + a]`: nonzero entries of `P_s^a`.
    support: Vec<SparseMass>,
}

impl<'a> StepContext<'a> {
    fn new(mdp: &'a FiniteMdp) -> Self {
        let row_class = (0..mdp.n_actions())
            .map(|a| {
                let mut classes: HashMap<Vec<u64>, usize> = HashMap::new();
                (0..mdp.n_states())
                    .map(|s| {
                        let key: Vec<u64> = mdp.row(s, a).iter().map(|p| p.to_bits()).collect();
                        let next = classes.len();
                        *classes.entry(key).or_insert(next)
                    })
                    .collect()
            })
            .collect();
        let support = (0..mdp.n_states())
            .flat_map(|s| (0..mdp.n_actions()).map(move |a| sparse(mdp.row(s, a))))
            .collect();
        StepContext {
            mdp,
            row_class,
            support,
        }
    }

    fn apply(&self, c: f64, h: &MetricMatrix, tol: &Tolerances) -> Result<MetricMatrix> {
        let mdp = self.mdp;
        let n = mdp.n_states();
        let na = mdp.n_actions();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|s| (s + 1..n).map(move |t| (s, t)))
            .collect();
        let values: Vec<f64> = pairs
            .par_iter()
            .map(|&(s, t)| {
                let mut best = 0.0f64;
                for a in 0..mdp.n_actions() {
                    let reward_gap = (mdp.reward(s, a) - mdp.reward(t, a)).abs();
                    let transport = if self.row_class[a][s] == self.row_class[a][t] {
                        0.0
                    } else {
                        let (p, q) = (&self.support[s * na + a], &self.support[t * na + a]);
                        kantorovich_value(h.as_cost(), p, q, tol)?
                    };
                    best = best.max(reward_gap + c * transport);
                }
                Ok(best)
            })
            .collect::<Result<_>>()?;
        let mut data = vec![0.0; n * n];
        for (&(s, t), &d) in pairs.iter().zip(&values) {
            data[s * n + t] = d;
            data[t * n + s] = d;
        }
        Ok(MetricMatrix(CostMatrix::from_raw(n, data)))
    }
}

/// One application of `F^c`.
pub fn metric_step(mdp: &FiniteMdp, c: f64, h: &MetricMatrix) -> Result<MetricMatrix> {
    check_discount("c", c)?;
    if h.size() != mdp.n_states() {
        return Err(Error::Shape(format!(
            "metric has size {} but the MDP has {} states",
            h.size(),
            mdp.n_states()
        )));
    }
    StepContext::new(mdp).apply(c, h, &Tolerances::DEFAULT)
}

#[derive(Debug, Clone)]
pub struct MetricSolution {
    pub metric: MetricMatrix,
    pub iterations: usize,
    /// Upper bound on `‖metric - d_fix‖∞` from the Banach estimate.
    pub certified_error: f64,
    /// `‖h_{n+1} - h_n‖∞` per step.
    pub step_sizes: Vec<f64>,
    /// `h_0, h_1, ...` when tracing was requested.
    pub trace: Option<Vec<MetricMatrix>>,
}

/// Iterates `F^c` from the zero metric until
/// `‖h_{n+1} - h_n‖∞ ≤ ε(1-c)/c`, so the returned iterate is within `ε` of
/// the fixed point.
pub fn fixed_point_metric(mdp: &FiniteMdp, c: f64, epsilon: f64) -> Result<MetricSolution> {
    iterate(mdp, c, epsilon, false)
}

/// Like [`fixed_point_metric`] but keeps every iterate.
pub fn fixed_point_metric_traced(mdp: &FiniteMdp, c: f64, epsilon: f64) -> Result<MetricSolution> {
    iterate(mdp, c, epsilon, true)
}

fn iterate(mdp: &FiniteMdp, c: f64, epsilon: f64, keep_trace: bool) -> Result<MetricSolution> {
    check_discount("c", c)?;
    check_tolerance("epsilon", epsilon)?;
    let tol = Tolerances::DEFAULT;
    let ctx = StepContext::new(mdp);
    let threshold = epsilon * (1.0 - c) / c;

    let mut current = MetricMatrix::zeros(mdp.n_states());
    let mut trace = keep_trace.then(|| vec![current.clone()]);
    let mut step_sizes = Vec::new();
    for iteration in 1..=MAX_METRIC_ITERATIONS {
        let next = ctx.apply(c, &current, &tol)?;
        let step = next.sup_distance(&current);
        step_sizes.push(step);
        if let Some(trace) = trace.as_mut() {
            trace.push(next.clone());
        }
        current = next;
        if step <= threshold {
            return Ok(MetricSolution {
                metric: current,
                iterations: iteration,
                certified_error: c / (1.0 - c) * step,
                step_sizes,
                trace,
            });
        }
    }
    Err(Error::IterationLimit(MAX_METRIC_ITERATIONS))
}

/// Coarsest partition in which states of a block agree, within `tol`, on
/// every reward and on the mass sent into every block. Blocks are split
/// until nothing changes; block ids are ordered by lowest member.
pub fn bisimulation_partition(mdp: &FiniteMdp, tol: f64) -> Partition {
    let n = mdp.n_states();
    let na = mdp.n_actions();
    let mut partition = Partition::single_block(n);
    for _round in 0..=n {
        let k = partition.n_blocks();
        // signature: rewards per action, then mass into each block per action
        let signatures: Vec<Vec<f64>> = (0..n)
            .map(|s| {
                let mut sig: Vec<f64> = (0..na).map(|a| mdp.reward(s, a)).collect();
                for a in 0..na {
                    sig.extend(partition.block_masses(mdp.row(s, a)));
                }
                sig
            })
            .collect();
        debug_assert!(signatures.iter().all(|s| s.len() == na * (1 + k)));

        let mut labels = vec![(0usize, 0usize); n];
        for (b, members) in partition.blocks().into_iter().enumerate() {
            let mut order = members.clone();
            order.sort_by(|&x, &y| {
                signatures[x]
                    .partial_cmp(&signatures[y])
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(x.cmp(&y))
            });
            let mut reps: Vec<usize> = Vec::new();
            for s in order {
                let close = |r: &usize| {
                    signatures[*r]
                        .iter()
                        .zip(&signatures[s])
                        .all(|(x, y)| (x - y).abs() <= tol)
                };
                let sub = match reps.iter().position(close) {
                    Some(i) => i,
                    None => {
                        reps.push(s);
                        reps.len() - 1
                    }
                };
                labels[s] = (b, sub);
            }
        }
        let refined = Partition::canonical(&labels);
        if refined.n_blocks() == k {
            return refined;
        }
        partition = refined;
    }
    partition
}

/// Verdict on one state pair in [`kernel_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairVerdict {
    /// Distance and partition disagree beyond the separation band.
    Disagree,
    /// Distance falls inside `(tol, 10·tol)`.
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPair {
    pub s: usize,
    pub t: usize,
    pub distance: f64,
    pub same_block: bool,
    pub verdict: PairVerdict,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct KernelReport {
    pub pairs: Vec<KernelPair>,
}

impl KernelReport {
    pub fn disagreements(&self) -> impl Iterator<Item = &KernelPair> {
        self.pairs
            .iter()
            .filter(|p| p.verdict == PairVerdict::Disagree)
    }

    pub fn indeterminate(&self) -> impl Iterator<Item = &KernelPair> {
        self.pairs
            .iter()
            .filter(|p| p.verdict == PairVerdict::Indeterminate)
    }

    pub fn agrees(&self) -> bool {
        self.disagreements().next().is_none()
    }
}

impl fmt::Display for KernelReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.pairs {
            writeln!(
                f,
                "({}, {}) d = {:.3e} same_block = {} {:?}",
                p.s, p.t, p.distance, p.same_block, p.verdict
            )?;
        }
        Ok(())
    }
}

/// Compares the zero set of `metric` with `partition`. Pairs in one block
/// should have distance at most `tol`; pairs in different blocks should
/// exceed it. Distances in `(tol, 10·tol)` are reported as indeterminate.
pub fn kernel_check(metric: &MetricMatrix, partition: &Partition, tol: f64) -> KernelReport {
    let n = metric.size();
    let mut pairs = Vec::new();
    for s in 0..n {
        for t in s + 1..n {
            let distance = metric.get(s, t);
            let same_block = partition.same_block(s, t);
            let verdict = if distance > tol && distance < 10.0 * tol {
                Some(PairVerdict::Indeterminate)
            } else if same_block != (distance <= tol) {
                Some(PairVerdict::Disagree)
            } else {
                None
            };
            if let Some(verdict) = verdict {
                pairs.push(KernelPair {
                    s,
                    t,
                    distance,
                    same_block,
                    verdict,
                });
            }
        }
    }
    KernelReport { pairs }
}

/// Both sides of the perturbation bound relating metrics of two MDPs that
/// share states and actions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationBound {
    /// `‖d_1 - d_2‖∞`, each metric certified to `epsilon`.
    pub lhs: f64,
    /// `2/(1-c) · max_a ‖r_1^a - r_2^a‖∞ + 2Bc/(1-c)² · sup_{a,s} d_TV(P_1, P_2)`.
    pub rhs: f64,
    pub epsilon: f64,
}

impl PerturbationBound {
    /// `lhs ≤ rhs + 2ε`.
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + 2.0 * self.epsilon
    }
}

/// Right-hand side of the perturbation bound; needs no metric computation.
pub fn perturbation_rhs(mdp1: &FiniteMdp, mdp2: &FiniteMdp, c: f64) -> Result<f64> {
    check_discount("c", c)?;
    if !mdp1.same_shape(mdp2) {
        return Err(Error::Shape(
            "perturbed MDPs must share states and actions".into(),
        ));
    }
    let (n, na) = (mdp1.n_states(), mdp1.n_actions());
    let reward_gap = (0..na)
        .flat_map(|a| (0..n).map(move |s| (s, a)))
        .map(|(s, a)| (mdp1.reward(s, a) - mdp2.reward(s, a)).abs())
        .fold(0.0, f64::max);
    let tv = (0..na)
        .flat_map(|a| (0..n).map(move |s| (s, a)))
        .map(|(s, a)| total_variation_slices(mdp1.row(s, a), mdp2.row(s, a)))
        .fold(0.0, f64::max);
    let span = reward_span(mdp1).max(reward_span(mdp2));
    Ok(2.0 / (1.0 - c) * reward_gap + 2.0 * span * c / ((1.0 - c) * (1.0 - c)) * tv)
}

pub fn perturbation_bound(
    mdp1: &FiniteMdp,
    mdp2: &FiniteMdp,
    c: f64,
    epsilon: f64,
) -> Result<PerturbationBound> {
    let rhs = perturbation_rhs(mdp1, mdp2, c)?;
    let d1 = fixed_point_metric(mdp1, c, epsilon)?;
    let d2 = fixed_point_metric(mdp2, c, epsilon)?;
    Ok(PerturbationBound {
        lhs: d1.metric.sup_distance(&d2.metric),
        rhs,
        epsilon,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzCheck {
    /// `max_{s,s'} |V*(s) - V*(s')| - d(s, s')`.
    pub max_violation: f64,
    /// `2·εV + εd`.
    pub allowance: f64,
    pub worst_pair: (usize, usize),
}

impl LipschitzCheck {
    pub fn holds(&self) -> bool {
        self.max_violation <= self.allowance
    }
}

/// Measures how far the optimal values fail to be 1-Lipschitz in `metric`.
/// Requires `γ ≤ c`.
pub fn value_lipschitz_check(
    mdp: &FiniteMdp,
    gamma: f64,
    c: f64,
    metric: &MetricMatrix,
    epsilon_value: f64,
    epsilon_metric: f64,
) -> Result<LipschitzCheck> {
    check_discount("gamma", gamma)?;
    check_discount("c", c)?;
    if gamma > c {
        return Err(Error::DiscountOrder { gamma, c });
    }
    if metric.size() != mdp.n_states() {
        return Err(Error::Shape("metric and MDP sizes differ".into()));
    }
    let values = value_iteration(mdp, gamma, epsilon_value)?.values;
    let n = mdp.n_states();
    let mut worst = (0.0, (0, 0));
    for s in 0..n {
        for t in s + 1..n {
            let v = (values[s] - values[t]).abs() - metric.get(s, t);
            if v > worst.0 {
                worst = (v, (s, t));
            }
        }
    }
    Ok(LipschitzCheck {
        max_violation: worst.0,
        allowance: 2.0 * epsilon_value + epsilon_metric,
        worst_pair: worst.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn absorbing_pair() -> FiniteMdp {
        FiniteMdp::with_default_labels(
            vec![vec![0.0], vec![1.0]],
            vec![vec![vec![1.0, 0.0]], vec![vec![0.0, 1.0]]],
        )
        .unwrap()
    }

    #[test]
    fn step_from_zero_is_reward_gap() {
        let mdp = FiniteMdp::with_default_labels(
            vec![vec![0.2, 0.9], vec![0.5, 0.1], vec![0.0, 0.0]],
            vec![
                vec![vec![0.5, 0.5, 0.0], vec![0.0, 0.0, 1.0]],
                vec![vec![0.0, 1.0, 0.0], vec![0.3, 0.3, 0.4]],
                vec![vec![0.1, 0.1, 0.8], vec![1.0, 0.0, 0.0]],
            ],
        )
        .unwrap();
        let d = metric_step(&mdp, 0.7, &MetricMatrix::zeros(3)).unwrap();
        for s in 0..3 {
            for t in 0..3 {
                let expect = (0..2)
                    .map(|a| (mdp.reward(s, a) - mdp.reward(t, a)).abs())
                    .fold(0.0, f64::max);
                assert!((d.get(s, t) - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn step_on_absorbing_pair() {
        let h = MetricMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let d = metric_step(&absorbing_pair(), 0.5, &h).unwrap();
        assert!((d.get(0, 1) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn identical_states_stay_at_zero() {
        let mdp = FiniteMdp::with_default_labels(
            vec![vec![0.3], vec![0.3], vec![0.9]],
            vec![
                vec![vec![0.2, 0.2, 0.6]],
                vec![vec![0.2, 0.2, 0.6]],
                vec![vec![0.0, 0.5, 0.5]],
            ],
        )
        .unwrap();
        let h = MetricMatrix::from_rows(vec![
            vec![0.0, 3.0, 2.0],
            vec![3.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ])
        .unwrap();
        assert_eq!(metric_step(&mdp, 0.9, &h).unwrap().get(0, 1), 0.0);
    }

    #[test]
    fn rejects_bad_discount() {
        let mdp = absorbing_pair();
        assert!(metric_step(&mdp, 1.0, &MetricMatrix::zeros(2)).is_err());
        assert!(fixed_point_metric(&mdp, 0.0, 1e-6).is_err());
        assert!(fixed_point_metric(&mdp, 0.5, 0.0).is_err());
        assert!(metric_step(&mdp, 0.5, &MetricMatrix::zeros(3)).is_err());
    }

    #[test]
    fn absorbing_fixed_point() {
        // d = 1 + d/2
        let sol = fixed_point_metric(&absorbing_pair(), 0.5, 1e-10).unwrap();
        assert!((sol.metric.get(0, 1) - 2.0).abs() <= 1e-10);
        assert!(sol.certified_error <= 1e-10);
        assert!((metric_bound(&absorbing_pair(), 0.5) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn identical_states_fixed_point_is_zero() {
        let mdp = FiniteMdp::with_default_labels(
            vec![vec![1.0, 2.0]; 3],
            vec![vec![vec![0.2, 0.3, 0.5], vec![1.0, 0.0, 0.0]]; 3],
        )
        .unwrap();
        let sol = fixed_point_metric(&mdp, 0.9, 1e-9).unwrap();
        assert_eq!(sol.metric.max_entry(), 0.0);
    }

    #[test]
    fn partition_cases() {
        let dup = FiniteMdp::with_default_labels(
            vec![vec![0.3], vec![0.3], vec![0.9]],
            vec![
                vec![vec![0.2, 0.2, 0.6]],
                vec![vec![0.2, 0.2, 0.6]],
                vec![vec![0.0, 0.5, 0.5]],
            ],
        )
        .unwrap();
        assert_eq!(bisimulation_partition(&dup, 0.0).assignment(), &[0, 0, 1]);
        assert_eq!(
            bisimulation_partition(&absorbing_pair(), 0.0).assignment(),
            &[0, 1]
        );
    }

    #[test]
    fn partition_splits_on_future_behaviour() {
        // states 0 and 1 share rewards but lead to states with different rewards
        let mdp = FiniteMdp::with_default_labels(
            vec![vec![0.0], vec![0.0], vec![1.0], vec![2.0]],
            vec![
                vec![vec![0.0, 0.0, 1.0, 0.0]],
                vec![vec![0.0, 0.0, 0.0, 1.0]],
                vec![vec![0.0, 0.0, 1.0, 0.0]],
                vec![vec![0.0, 0.0, 0.0, 1.0]],
            ],
        )
        .unwrap();
        assert_eq!(bisimulation_partition(&mdp, 0.0).n_blocks(), 4);
        // two-step chains to equal-reward sinks are bisimilar
        let mdp = FiniteMdp::with_default_labels(
            vec![vec![0.0], vec![0.0], vec![1.0], vec![1.0]],
            vec![
                vec![vec![0.0, 0.0, 1.0, 0.0]],
                vec![vec![0.0, 0.0, 0.0, 1.0]],
                vec![vec![0.0, 0.0, 1.0, 0.0]],
                vec![vec![0.0, 0.0, 0.0, 1.0]],
            ],
        )
        .unwrap();
        assert_eq!(
            bisimulation_partition(&mdp, 0.0).assignment(),
            &[0, 0, 1, 1]
        );
    }

    #[test]
    fn kernel_check_cases() {
        let single =
            FiniteMdp::with_default_labels(vec![vec![0.4]], vec![vec![vec![1.0]]]).unwrap();
        let m = fixed_point_metric(&single, 0.5, 1e-8).unwrap().metric;
        assert!(kernel_check(&m, &bisimulation_partition(&single, 0.0), 1e-6).agrees());

        let mdp = absorbing_pair();
        let m = fixed_point_metric(&mdp, 0.5, 1e-8).unwrap().metric;
        let report = kernel_check(&m, &bisimulation_partition(&mdp, 0.0), 1e-6);
        assert!(report.agrees() && report.pairs.is_empty());

        // a wrong partition is flagged
        let report = kernel_check(&m, &Partition::single_block(2), 1e-6);
        assert_eq!(report.disagreements().count(), 1);

        let near = MetricMatrix::from_rows(vec![vec![0.0, 5e-6], vec![5e-6, 0.0]]).unwrap();
        let report = kernel_check(&near, &Partition::singletons(2), 1e-6);
        assert!(report.agrees());
        assert_eq!(report.indeterminate().count(), 1);
    }

    #[test]
    fn perturbation_identity_and_reward_shift() {
        let mdp = FiniteMdp::with_default_labels(
            vec![vec![0.1, 0.5], vec![0.7, 0.2]],
            vec![
                vec![vec![0.5, 0.5], vec![1.0, 0.0]],
                vec![vec![0.2, 0.8], vec![0.0, 1.0]],
            ],
        )
        .unwrap();
        let same = perturbation_bound(&mdp, &mdp, 0.6, 1e-9).unwrap();
        assert_eq!((same.lhs, same.rhs), (0.0, 0.0));

        let mut shifted = mdp.clone();
        let delta = 0.05;
        shifted.set_reward(1, 0, mdp.reward(1, 0) + delta);
        let b = perturbation_bound(&mdp, &shifted, 0.6, 1e-9).unwrap();
        assert!((b.rhs - 2.0 * delta / 0.4).abs() < 1e-12);
        assert!(b.holds());

        let other = FiniteMdp::with_default_labels(vec![vec![0.0]], vec![vec![vec![1.0]]]).unwrap();
        assert!(perturbation_bound(&mdp, &other, 0.6, 1e-9).is_err());
    }

    #[test]
    fn lipschitz_rejects_gamma_above_c() {
        let mdp = absorbing_pair();
        let m = MetricMatrix::zeros(2);
        assert!(matches!(
            value_lipschitz_check(&mdp, 0.9, 0.5, &m, 1e-8, 1e-8),
            Err(Error::DiscountOrder { .. })
        ));
    }

    #[test]
    fn lipschitz_single_state() {
        let mdp = FiniteMdp::with_default_labels(vec![vec![0.4]], vec![vec![vec![1.0]]]).unwrap();
        let check =
            value_lipschitz_check(&mdp, 0.5, 0.5, &MetricMatrix::zeros(1), 1e-8, 1e-8).unwrap();
        assert_eq!(check.max_violation, 0.0);
        assert!(check.holds());
    }
}
