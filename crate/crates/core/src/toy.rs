//! The interval toy model and its uniform-grid discretization.
//!
//! States are `x ∈ [0, 1]` with two actions: `a` pays `1 - x` and jumps to a
//! uniformly random state, `b` pays `x` and stays put. The discretized model
//! has one state per block `[k/n, (k+1)/n)`, with rewards evaluated at the
//! block centres `(2k+1)/(2n)`, action `a` uniform over blocks and action
//! `b` a self-loop.
//!
//! Two value oracles are provided. [`toy_value_closed_form`] is the
//! published piecewise expression. [`toy_value_exact`] solves the Bellman
//! equation of the continuous model; the two agree on `[1/2, 1]` but not
//! below `1/2`, where the published form underestimates the value of
//! jumping.

use crate::error::{check_discount, Error, Result};
use crate::mdp::{value_iteration, FiniteMdp};
use crate::metric::fixed_point_metric;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToySpec {
    pub n: usize,
    pub gamma: f64,
    pub c: f64,
}

impl ToySpec {
    pub fn new(n: usize, gamma: f64, c: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Shape("the grid needs at least one block".into()));
        }
        check_discount("gamma", gamma)?;
        check_discount("c", c)?;
        Ok(ToySpec { n, gamma, c })
    }

    /// Fails when `γ > c`, where value bounds in the metric do not apply.
    pub fn require_value_bounds(&self) -> Result<()> {
        if self.gamma > self.c {
            Err(Error::DiscountOrder {
                gamma: self.gamma,
                c: self.c,
            })
        } else {
            Ok(())
        }
    }
}

/// `(2k+1)/(2n)`.
pub fn block_center(k: usize, n: usize) -> f64 {
    (2 * k + 1) as f64 / (2 * n) as f64
}

/// Discretized toy model on `n` blocks. Actions are labelled `a` and `b`.
pub fn toy_mdp(n: usize) -> Result<FiniteMdp> {
    if n == 0 {
        return Err(Error::Shape("the grid needs at least one block".into()));
    }
    let uniform = 1.0 / n as f64;
    let rewards = (0..n)
        .map(|k| {
            let x = block_center(k, n);
            vec![1.0 - x, x]
        })
        .collect();
    let transitions = (0..n)
        .map(|k| {
            let mut stay = vec![0.0; n];
            stay[k] = 1.0;
            vec![vec![uniform; n], stay]
        })
        .collect();
    FiniteMdp::new(vec!["a".into(), "b".into()], rewards, transitions)
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value })
    }
}

/// Fixed-point metric of the continuous model, `|x - y| / (1 - c)`.
pub fn toy_metric_closed_form(x: f64, y: f64, c: f64) -> Result<f64> {
    check_unit("x", x)?;
    check_unit("y", y)?;
    check_discount("c", c)?;
    Ok((x - y).abs() / (1.0 - c))
}

/// Published piecewise value: `1 - x + γ/(2(1-γ))` below `1/2`, `x/(1-γ)`
/// from `1/2` on.
pub fn toy_value_closed_form(x: f64, gamma: f64) -> Result<f64> {
    check_unit("x", x)?;
    check_discount("gamma", gamma)?;
    Ok(if x < 0.5 {
        1.0 - x + gamma / (2.0 * (1.0 - gamma))
    } else {
        x / (1.0 - gamma)
    })
}

/// Mean optimal value `M = ∫ V*(x) dx` of the continuous model.
///
/// `V*(x) = max(1 - x + γM, x/(1-γ))`, so `M` is the fixed point of
/// `M ↦ ∫ max(1 - x + γM, x/(1-γ)) dx`, a `γ`-contraction with a closed-form
/// integral once the switching point `t` is known.
pub fn toy_mean_value(gamma: f64) -> Result<f64> {
    check_discount("gamma", gamma)?;
    let mut mean = 0.0f64;
    for _ in 0..100_000 {
        let jump = 1.0 + gamma * mean;
        let t = (jump * (1.0 - gamma) / (2.0 - gamma)).clamp(0.0, 1.0);
        let next = jump * t - t * t / 2.0 + (1.0 - t * t) / (2.0 * (1.0 - gamma));
        if next == mean {
            break;
        }
        mean = next;
    }
    Ok(mean)
}

/// Optimal value of the continuous model, from the Bellman equation.
pub fn toy_value_exact(x: f64, gamma: f64) -> Result<f64> {
    check_unit("x", x)?;
    let mean = toy_mean_value(gamma)?;
    Ok((1.0 - x + gamma * mean).max(x / (1.0 - gamma)))
}

/// Switching point of the exact optimal policy: jump below, stay above.
pub fn toy_switch_point(gamma: f64) -> Result<f64> {
    let mean = toy_mean_value(gamma)?;
    Ok(((1.0 + gamma * mean) * (1.0 - gamma) / (2.0 - gamma)).clamp(0.0, 1.0))
}

/// Tolerances for [`convergence_experiment_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub metric_epsilon: f64,
    pub value_epsilon: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            metric_epsilon: 1e-6,
            value_epsilon: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    /// `max_{k,l} |d(B_k, B_l) - |x_k - x_l|/(1-c)|`.
    pub max_metric_dev: f64,
    /// `max_k |V_quot(B_k) - toy_value_closed_form(x_k)|`.
    pub max_value_dev: f64,
    /// `1/(n(1-γ))`.
    pub certified_bound: f64,
    /// Banach error bound of the computed metric.
    pub metric_error: f64,
    /// Certified error of the quotient values.
    pub value_error: f64,
    /// `sup_{x ∈ B_k} |toy_value_closed_form(x) - V_quot(B_k)|` over all blocks.
    pub max_block_spread: f64,
    /// `max_k |V_quot(B_k) - toy_value_exact(x_k)|`.
    pub max_exact_value_dev: f64,
    /// `sup_{x ∈ B_k} |toy_value_exact(x) - V_quot(B_k)|` over all blocks.
    pub max_exact_block_spread: f64,
}

impl ConvergenceRow {
    pub const CSV_HEADER: &'static str = "n,max_metric_dev,max_value_dev,certified_bound";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.9},{:.9},{:.9}",
            self.n, self.max_metric_dev, self.max_value_dev, self.certified_bound
        )
    }
}

/// Points where a piecewise-linear value on `[lo, hi]` can attain its
/// extreme deviation from a constant.
fn breakpoints(lo: f64, hi: f64, kinks: &[f64]) -> Vec<f64> {
    let mut xs = vec![lo, hi];
    xs.extend(kinks.iter().copied().filter(|&k| k > lo && k < hi));
    // the published form jumps at 1/2; approach from the left too
    if 0.5 > lo && 0.5 <= hi {
        xs.push(0.5f64.next_down());
    }
    xs
}

pub fn convergence_experiment(ns: &[usize], c: f64, gamma: f64) -> Result<Vec<ConvergenceRow>> {
    convergence_experiment_with(ns, c, gamma, &ExperimentConfig::default())
}

/// For each grid size: metric at block centres against the closed form,
/// quotient values against both value oracles, and the within-block bound
/// `1/(n(1-γ))`.
pub fn convergence_experiment_with(
    ns: &[usize],
    c: f64,
    gamma: f64,
    config: &ExperimentConfig,
) -> Result<Vec<ConvergenceRow>> {
    let switch = toy_switch_point(gamma)?;
    ns.iter()
        .map(|&n| {
            ToySpec::new(n, gamma, c)?.require_value_bounds()?;
            let mdp = toy_mdp(n)?;
            let metric = fixed_point_metric(&mdp, c, config.metric_epsilon)?;
            let mut max_metric_dev = 0.0f64;
            for k in 0..n {
                for l in 0..n {
                    let closed = toy_metric_closed_form(block_center(k, n), block_center(l, n), c)?;
                    max_metric_dev = max_metric_dev.max((metric.metric.get(k, l) - closed).abs());
                }
            }

            let values = value_iteration(&mdp, gamma, config.value_epsilon)?;
            let mut max_value_dev = 0.0f64;
            let mut max_exact_value_dev = 0.0f64;
            let mut max_block_spread = 0.0f64;
            let mut max_exact_block_spread = 0.0f64;
            for k in 0..n {
                let v = values.values[k];
                let x = block_center(k, n);
                max_value_dev = max_value_dev.max((v - toy_value_closed_form(x, gamma)?).abs());
                max_exact_value_dev =
                    max_exact_value_dev.max((v - toy_value_exact(x, gamma)?).abs());
                let (lo, hi) = (k as f64 / n as f64, (k + 1) as f64 / n as f64);
                for x in breakpoints(lo, hi, &[switch]) {
                    max_block_spread =
                        max_block_spread.max((toy_value_closed_form(x, gamma)? - v).abs());
                    max_exact_block_spread =
                        max_exact_block_spread.max((toy_value_exact(x, gamma)? - v).abs());
                }
            }
            Ok(ConvergenceRow {
                n,
                max_metric_dev,
                max_value_dev,
                certified_bound: 1.0 / (n as f64 * (1.0 - gamma)),
                metric_error: metric.certified_error,
                value_error: values.certified_error,
                max_block_spread,
                max_exact_value_dev,
                max_exact_block_spread,
            })
        })
        .collect()
}
