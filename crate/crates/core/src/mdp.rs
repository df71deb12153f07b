//! Finite Markov decision processes and discounted value iteration.
//!
//! A [`FiniteMdp`] stores one reward and one transition row per
//! (state, action) pair. Every state shares the same ordered action list.
//! Construction through [`FiniteMdp::from_parts`] only checks dimensions so
//! that malformed models can still be inspected with [`validate_mdp`];
//! [`FiniteMdp::new`] additionally rejects anything `validate_mdp` flags.

use std::fmt;

use rayon::prelude::*;

use crate::error::{check_discount, check_tolerance, Error, Result};
use crate::tolerance::Tolerances;

/// Hard cap on Bellman sweeps. The stopping rule terminates long before this
/// for any discount that is representable away from 1.
const MAX_VALUE_ITERATIONS: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMdp {
    n_states: usize,
    actions: Vec<String>,
    /// `[state][action]`, flattened.
    rewards: Vec<f64>,
    /// `[state][action][target]`, flattened.
    transitions: Vec<f64>,
}

impl FiniteMdp {
    /// Builds an MDP and rejects it unless [`validate_mdp`] reports nothing.
    pub fn new(
        actions: Vec<String>,
        rewards: Vec<Vec<f64>>,
        transitions: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        let mdp = Self::from_parts(actions, rewards, transitions)?;
        let report = validate_mdp(&mdp);
        if report.is_valid() {
            Ok(mdp)
        } else {
            Err(Error::InvalidMdp(report.to_string()))
        }
    }

    /// Builds an MDP checking only that the nested arrays have consistent
    /// shapes. Values are not inspected.
    pub fn from_parts(
        actions: Vec<String>,
        rewards: Vec<Vec<f64>>,
        transitions: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        let n_states = rewards.len();
        let n_actions = actions.len();
        if n_states == 0 {
            return Err(Error::Shape("an MDP needs at least one state".into()));
        }
        if n_actions == 0 {
            return Err(Error::Shape("an MDP needs at least one action".into()));
        }
        if transitions.len() != n_states {
            return Err(Error::Shape(format!(
                "{} reward rows but {} transition blocks",
                n_states,
                transitions.len()
            )));
        }
        let mut flat_rewards = Vec::with_capacity(n_states * n_actions);
        let mut flat_transitions = Vec::with_capacity(n_states * n_actions * n_states);
        for (s, (r, p)) in rewards.into_iter().zip(transitions).enumerate() {
            if r.len() != n_actions {
                return Err(Error::Shape(format!(
                    "state {s} has {} rewards, expected {n_actions}",
                    r.len()
                )));
            }
            if p.len() != n_actions {
                return Err(Error::Shape(format!(
                    "state {s} has {} transition rows, expected {n_actions}",
                    p.len()
                )));
            }
            flat_rewards.extend(r);
            for (a, row) in p.into_iter().enumerate() {
                if row.len() != n_states {
                    return Err(Error::Shape(format!(
                        "state {s}, action {a}: row has length {}, expected {n_states}",
                        row.len()
                    )));
                }
                flat_transitions.extend(row);
            }
        }
        Ok(FiniteMdp {
            n_states,
            actions,
            rewards: flat_rewards,
            transitions: flat_transitions,
        })
    }

    /// An MDP with actions labelled `a0, a1, ...`.
    pub fn with_default_labels(
        rewards: Vec<Vec<f64>>,
        transitions: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        let n_actions = rewards.first().map_or(0, Vec::len);
        let actions = (0..n_actions).map(|a| format!("a{a}")).collect();
        Self::new(actions, rewards, transitions)
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn reward(&self, state: usize, action: usize) -> f64 {
        self.rewards[state * self.n_actions() + action]
    }

    /// Transition distribution `P_state^action` over all states.
    pub fn row(&self, state: usize, action: usize) -> &[f64] {
        let start = (state * self.n_actions() + action) * self.n_states;
        &self.transitions[start..start + self.n_states]
    }

    /// Rewards as nested `[state][action]` vectors.
    pub fn rewards(&self) -> Vec<Vec<f64>> {
        self.rewards
            .chunks(self.n_actions())
            .map(<[f64]>::to_vec)
            .collect()
    }

    /// Transitions as nested `[state][action][target]` vectors.
    pub fn transitions(&self) -> Vec<Vec<Vec<f64>>> {
        (0..self.n_states)
            .map(|s| {
                (0..self.n_actions())
                    .map(|a| self.row(s, a).to_vec())
                    .collect()
            })
            .collect()
    }

    pub fn set_reward(&mut self, state: usize, action: usize, value: f64) {
        let na = self.n_actions();
        self.rewards[state * na + action] = value;
    }

    /// Rescales every transition row to total mass 1. Rows with no positive
    /// mass are left untouched. Never called implicitly.
    pub fn renormalize_rows(&mut self) {
        for row in self.transitions.chunks_mut(self.n_states) {
            let total: f64 = row.iter().sum();
            if total > 0.0 && total.is_finite() {
                row.iter_mut().for_each(|p| *p /= total);
            }
        }
    }

    /// True when both models have the same state count and action labels.
    pub fn same_shape(&self, other: &FiniteMdp) -> bool {
        self.n_states == other.n_states && self.actions == other.actions
    }
}

/// One broken [`FiniteMdp`] invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    RowSum {
        state: usize,
        action: usize,
        sum: f64,
    },
    NegativeMass {
        state: usize,
        action: usize,
        target: usize,
        mass: f64,
    },
    NonFiniteMass {
        state: usize,
        action: usize,
        target: usize,
    },
    NonFiniteReward {
        state: usize,
        action: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::RowSum { state, action, sum } => {
                write!(f, "state {state}, action {action}: row sum {sum} ≠ 1")
            }
            Violation::NegativeMass {
                state,
                action,
                target,
                mass,
            } => write!(
                f,
                "state {state}, action {action}: negative mass {mass} on target {target}"
            ),
            Violation::NonFiniteMass {
                state,
                action,
                target,
            } => write!(
                f,
                "state {state}, action {action}: non-finite mass on target {target}"
            ),
            Violation::NonFiniteReward { state, action } => {
                write!(f, "state {state}, action {action}: non-finite reward")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Lists every broken invariant: non-finite rewards, negative or non-finite
/// transition mass, and rows whose total differs from 1 by more than 1e-12.
pub fn validate_mdp(mdp: &FiniteMdp) -> ValidationReport {
    let tol = Tolerances::DEFAULT.row_sum;
    let mut violations = Vec::new();
    for s in 0..mdp.n_states() {
        for a in 0..mdp.n_actions() {
            if !mdp.reward(s, a).is_finite() {
                violations.push(Violation::NonFiniteReward {
                    state: s,
                    action: a,
                });
            }
            let row = mdp.row(s, a);
            let mut finite = true;
            for (t, &p) in row.iter().enumerate() {
                if !p.is_finite() {
                    finite = false;
                    violations.push(Violation::NonFiniteMass {
                        state: s,
                        action: a,
                        target: t,
                    });
                } else if p < 0.0 {
                    violations.push(Violation::NegativeMass {
                        state: s,
                        action: a,
                        target: t,
                        mass: p,
                    });
                }
            }
            if finite {
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > tol {
                    violations.push(Violation::RowSum {
                        state: s,
                        action: a,
                        sum,
                    });
                }
            }
        }
    }
    ValidationReport { violations }
}

/// Largest per-action reward spread, `max_a (max_s r_s^a - min_s r_s^a)`.
pub fn reward_span(mdp: &FiniteMdp) -> f64 {
    (0..mdp.n_actions())
        .map(|a| {
            let (lo, hi) = (0..mdp.n_states())
                .map(|s| mdp.reward(s, a))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                    (lo.min(r), hi.max(r))
                });
            hi - lo
        })
        .fold(0.0, f64::max)
}

/// Value per state.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueVector(pub Vec<f64>);

impl ValueVector {
    pub fn zeros(n: usize) -> Self {
        ValueVector(vec![0.0; n])
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

    pub fn sup_distance(&self, other: &ValueVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for ValueVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Action index per state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Policy(pub Vec<usize>);

impl Policy {
    pub fn action(&self, state: usize) -> usize {
        self.0[state]
    }
}

#[derive(Debug, Clone)]
pub struct ValueSolution {
    pub values: ValueVector,
    pub iterations: usize,
    /// `‖V_{n+1} - V_n‖∞` for every sweep, in order.
    pub residuals: Vec<f64>,
    /// Upper bound on `‖values - V*‖∞`.
    pub certified_error: f64,
}

fn q_value(mdp: &FiniteMdp, values: &[f64], gamma: f64, s: usize, a: usize) -> f64 {
    let expected: f64 = mdp.row(s, a).iter().zip(values).map(|(p, v)| p * v).sum();
    mdp.reward(s, a) + gamma * expected
}

fn bellman_backup(mdp: &FiniteMdp, values: &[f64], gamma: f64) -> Vec<f64> {
    (0..mdp.n_states())
        .into_par_iter()
        .map(|s| {
            (0..mdp.n_actions())
                .map(|a| q_value(mdp, values, gamma, s, a))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect()
}

/// Value iteration from `V_0 = 0`, stopping once
/// `‖V_{n+1} - V_n‖∞ ≤ ε(1-γ)/γ`, which bounds `‖V_{n+1} - V*‖∞` by `ε`.
pub fn value_iteration(mdp: &FiniteMdp, gamma: f64, epsilon: f64) -> Result<ValueSolution> {
    check_discount("gamma", gamma)?;
    check_tolerance("epsilon", epsilon)?;
    let threshold = epsilon * (1.0 - gamma) / gamma;
    let mut values = vec![0.0; mdp.n_states()];
    let mut residuals = Vec::new();
    for iteration in 1..=MAX_VALUE_ITERATIONS {
        let next = bellman_backup(mdp, &values, gamma);
        let residual = next
            .iter()
            .zip(&values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        residuals.push(residual);
        values = next;
        if residual <= threshold {
            return Ok(ValueSolution {
                values: ValueVector(values),
                iterations: iteration,
                residuals,
                certified_error: gamma / (1.0 - gamma) * residual,
            });
        }
    }
    Err(Error::IterationLimit(MAX_VALUE_ITERATIONS))
}

/// Greedy policy with respect to `values`; ties go to the lowest action index.
pub fn greedy_policy(mdp: &FiniteMdp, values: &ValueVector, gamma: f64) -> Policy {
    let policy = (0..mdp.n_states())
        .map(|s| {
            let mut best = 0;
            let mut best_q = q_value(mdp, values.as_slice(), gamma, s, 0);
            for a in 1..mdp.n_actions() {
                let q = q_value(mdp, values.as_slice(), gamma, s, a);
                if q > best_q {
                    best = a;
                    best_q = q;
                }
            }
            best
        })
        .collect();
    Policy(policy)
}
