//! Random instances for property tests, acceptance runs and benchmarks.

use rand::Rng;

use crate::mdp::FiniteMdp;
use crate::transport::{CostMatrix, Distribution};

/// Random probability vector. About a third of the entries are zeroed when
/// `sparse` is set; at least one entry stays positive.
pub fn random_weights<R: Rng + ?Sized>(rng: &mut R, n: usize, sparse: bool) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n)
        .map(|_| {
            if sparse && rng.gen_bool(1.0 / 3.0) {
                0.0
            } else {
                -rng.gen::<f64>().max(f64::MIN_POSITIVE).ln()
            }
        })
        .collect();
    if w.iter().all(|&x| x == 0.0) {
        w[rng.gen_range(0..n)] = 1.0;
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

pub fn random_distribution<R: Rng + ?Sized>(rng: &mut R, n: usize, sparse: bool) -> Distribution {
    Distribution::new(random_weights(rng, n, sparse)).expect("normalized weights")
}

/// Random semimetric: Euclidean distances between random points in the
/// plane, with occasional coincident points so that some off-diagonal
/// distances are exactly zero.
pub fn random_semimetric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CostMatrix {
    let scale = rng.gen_range(0.1..5.0);
    let mut points: Vec<(f64, f64)> = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 && rng.gen_bool(0.15) {
            let j = rng.gen_range(0..i);
            points.push(points[j]);
        } else {
            points.push((rng.gen::<f64>() * scale, rng.gen::<f64>() * scale));
        }
    }
    let rows = points
        .iter()
        .map(|a| {
            points
                .iter()
                .map(|b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt())
                .collect()
        })
        .collect();
    CostMatrix::from_rows(rows).expect("Euclidean distances form a semimetric")
}

/// Random MDP with rewards in `[0, 1)` and random, partly sparse, rows.
pub fn random_mdp<R: Rng + ?Sized>(rng: &mut R, n_states: usize, n_actions: usize) -> FiniteMdp {
    let rewards = (0..n_states)
        .map(|_| (0..n_actions).map(|_| rng.gen::<f64>()).collect())
        .collect();
    let transitions = (0..n_states)
        .map(|_| {
            (0..n_actions)
                .map(|_| random_weights(rng, n_states, true))
                .collect()
        })
        .collect();
    FiniteMdp::with_default_labels(rewards, transitions).expect("random MDP is valid")
}

/// Copies state `from` onto state `to`: same rewards, same transition rows.
pub fn plant_duplicate(mdp: &FiniteMdp, from: usize, to: usize) -> FiniteMdp {
    let mut rewards = mdp.rewards();
    let mut transitions = mdp.transitions();
    rewards[to] = rewards[from].clone();
    transitions[to] = transitions[from].clone();
    FiniteMdp::new(mdp.actions().to_vec(), rewards, transitions).expect("copying a valid state")
}

/// Perturbs every reward by up to `scale` and mixes every row with a random
/// distribution at weight `scale`.
pub fn perturb_mdp<R: Rng + ?Sized>(rng: &mut R, mdp: &FiniteMdp, scale: f64) -> FiniteMdp {
    let n = mdp.n_states();
    let rewards = mdp
        .rewards()
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| x + scale * rng.gen_range(-1.0..1.0))
                .collect()
        })
        .collect();
    let transitions = mdp
        .transitions()
        .into_iter()
        .map(|rows| {
            rows.into_iter()
                .map(|row| {
                    let noise = random_weights(rng, n, false);
                    let mixed: Vec<f64> = row
                        .iter()
                        .zip(&noise)
                        .map(|(p, q)| (1.0 - scale) * p + scale * q)
                        .collect();
                    let total: f64 = mixed.iter().sum();
                    mixed.into_iter().map(|x| x / total).collect()
                })
                .collect()
        })
        .collect();
    FiniteMdp::new(mdp.actions().to_vec(), rewards, transitions).expect("mixture of valid rows")
}
