//! Metric-guided state aggregation.
//!
//! [`epsilon_partition`] groups states into balls of radius `ε/2` around
//! representatives, so every block has diameter at most `ε` in the metric.
//! [`quotient_mdp`] averages rewards and block-to-block transition mass
//! over each block. [`aggregation_report`] ties the two together: within a
//! block, optimal values can differ by at most the block diameter whenever
//! `γ ≤ c`.

use crate::error::{check_discount, check_tolerance, Error, Result};
use crate::mdp::{value_iteration, FiniteMdp};
use crate::metric::{fixed_point_metric, MetricMatrix};
use crate::partition::Partition;

/// Greedy ball covering in state order. A state joins the first block whose
/// representative (lowest member) lies within `ε/2`, otherwise it opens a
/// new block.
pub fn epsilon_partition(metric: &MetricMatrix, epsilon: f64) -> Result<Partition> {
    check_tolerance("epsilon", epsilon)?;
    let radius = epsilon / 2.0;
    let mut representatives: Vec<usize> = Vec::new();
    let mut assignment = Vec::with_capacity(metric.size());
    for s in 0..metric.size() {
        let block = match representatives
            .iter()
            .position(|&r| metric.get(r, s) <= radius)
        {
            Some(b) => b,
            None => {
                representatives.push(s);
                representatives.len() - 1
            }
        };
        assignment.push(block);
    }
    Partition::from_assignment(assignment)
}

/// Averaged MDP over the blocks of `partition`. `weights` default to uniform
/// within each block; block rewards are weighted means of member rewards and
/// block-to-block transitions are weighted means of the mass each member
/// sends into the target block.
pub fn quotient_mdp(
    mdp: &FiniteMdp,
    partition: &Partition,
    weights: Option<&[f64]>,
) -> Result<FiniteMdp> {
    let n = mdp.n_states();
    if partition.n_states() != n {
        return Err(Error::Shape(format!(
            "partition covers {} states, MDP has {n}",
            partition.n_states()
        )));
    }
    let uniform;
    let weights = match weights {
        Some(w) => {
            if w.len() != n {
                return Err(Error::Shape(format!("{} weights for {n} states", w.len())));
            }
            if let Some(s) = w.iter().position(|x| !x.is_finite() || *x < 0.0) {
                return Err(Error::InvalidMdp(format!(
                    "weight of state {s} is {}",
                    w[s]
                )));
            }
            w
        }
        None => {
            uniform = vec![1.0; n];
            &uniform[..]
        }
    };

    let na = mdp.n_actions();
    let k = partition.n_blocks();
    let blocks = partition.blocks();
    let mut rewards = Vec::with_capacity(k);
    let mut transitions = Vec::with_capacity(k);
    for (b, members) in blocks.iter().enumerate() {
        let total: f64 = members.iter().map(|&s| weights[s]).sum();
        if total <= 0.0 {
            return Err(Error::ZeroWeightBlock(b));
        }
        let mut block_rewards = vec![0.0; na];
        let mut block_rows = vec![vec![0.0; k]; na];
        for &s in members {
            let w = weights[s] / total;
            for a in 0..na {
                block_rewards[a] += w * mdp.reward(s, a);
                for (target, mass) in partition
                    .block_masses(mdp.row(s, a))
                    .into_iter()
                    .enumerate()
                {
                    block_rows[a][target] += w * mass;
                }
            }
        }
        rewards.push(block_rewards);
        transitions.push(block_rows);
    }
    FiniteMdp::new(mdp.actions().to_vec(), rewards, transitions)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockReport {
    pub block: usize,
    pub size: usize,
    /// Largest metric distance between two members.
    pub diameter: f64,
    /// Certified bound on `|V*(s) - V*(s')|` within the block; equals the diameter.
    pub value_spread_bound: f64,
    /// Observed `max |V*(s) - V*(s')|` within the block.
    pub observed_value_spread: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregationReport {
    pub blocks: Vec<BlockReport>,
    /// Largest block diameter.
    pub global_bound: f64,
    /// `max_s |V*_orig(s) - V*_quot(block(s))|`, measured rather than certified.
    pub empirical_value_error: f64,
    pub metric_error: f64,
}

impl AggregationReport {
    pub const CSV_HEADER: &'static str =
        "block,size,diameter,value_spread_bound,observed_value_spread";

    /// One line per block under [`Self::CSV_HEADER`], 9 decimal places.
    pub fn csv_rows(&self) -> Vec<String> {
        self.blocks
            .iter()
            .map(|b| {
                format!(
                    "{},{},{:.9},{:.9},{:.9}",
                    b.block, b.size, b.diameter, b.value_spread_bound, b.observed_value_spread
                )
            })
            .collect()
    }
}

/// Computes the metric (certified to `epsilon_metric`), block diameters and
/// optimal values of both the original and the quotient model.
pub fn aggregation_report(
    mdp: &FiniteMdp,
    partition: &Partition,
    gamma: f64,
    c: f64,
    epsilon_metric: f64,
) -> Result<AggregationReport> {
    let metric = fixed_point_metric(mdp, c, epsilon_metric)?;
    aggregation_report_with_metric(mdp, partition, gamma, c, &metric.metric, epsilon_metric)
}

/// [`aggregation_report`] for an already computed metric.
pub fn aggregation_report_with_metric(
    mdp: &FiniteMdp,
    partition: &Partition,
    gamma: f64,
    c: f64,
    metric: &MetricMatrix,
    epsilon_metric: f64,
) -> Result<AggregationReport> {
    check_discount("gamma", gamma)?;
    check_discount("c", c)?;
    check_tolerance("epsilon_metric", epsilon_metric)?;
    if gamma > c {
        return Err(Error::DiscountOrder { gamma, c });
    }
    if partition.n_states() != mdp.n_states() || metric.size() != mdp.n_states() {
        return Err(Error::Shape(
            "partition, metric and MDP sizes differ".into(),
        ));
    }
    let values = value_iteration(mdp, gamma, epsilon_metric)?.values;
    let quotient = quotient_mdp(mdp, partition, None)?;
    let quotient_values = value_iteration(&quotient, gamma, epsilon_metric)?.values;

    let blocks: Vec<BlockReport> = partition
        .blocks()
        .into_iter()
        .enumerate()
        .map(|(block, members)| {
            let diameter = metric.diameter(&members);
            let (lo, hi) = members
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &s| {
                    (lo.min(values[s]), hi.max(values[s]))
                });
            BlockReport {
                block,
                size: members.len(),
                diameter,
                value_spread_bound: diameter,
                observed_value_spread: hi - lo,
            }
        })
        .collect();
    let global_bound = blocks.iter().map(|b| b.diameter).fold(0.0, f64::max);
    let empirical_value_error = (0..mdp.n_states())
        .map(|s| (values[s] - quotient_values[partition.block_of(s)]).abs())
        .fold(0.0, f64::max);
    Ok(AggregationReport {
        blocks,
        global_bound,
        empirical_value_error,
        metric_error: epsilon_metric,
    })
}
