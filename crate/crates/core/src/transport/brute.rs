//! Vertex enumeration of the transportation polytope, used as an oracle.
//!
//! Every basic feasible solution of a transportation problem is supported on
//! a spanning tree of the complete bipartite graph between the source and
//! target supports, and the flows on a tree are forced by the marginals. The
//! minimum over all trees whose forced flows are nonnegative is the exact
//! optimum.

use super::{CostMatrix, Distribution};
use crate::error::{Error, Result};

/// Largest support accepted by [`brute_force_kantorovich`].
pub const BRUTE_FORCE_LIMIT: usize = 5;

const NEGATIVE_FLOW_SLACK: f64 = 1e-12;

/// Exact optimal transport cost by enumerating spanning trees.
pub fn brute_force_kantorovich(h: &CostMatrix, p: &Distribution, q: &Distribution) -> Result<f64> {
    let n = p.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::BruteForceTooLarge {
            size: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if q.len() != n || h.size() != n {
        return Err(Error::Shape("brute force needs matching supports".into()));
    }
    let sources: Vec<usize> = (0..n).filter(|&i| p.as_slice()[i] > 0.0).collect();
    let sinks: Vec<usize> = (0..n).filter(|&j| q.as_slice()[j] > 0.0).collect();
    let (m, k) = (sources.len(), sinks.len());

    // Bipartite nodes: 0..m sources, m..m+k sinks.
    let mass: Vec<f64> = sources
        .iter()
        .map(|&i| p.as_slice()[i])
        .chain(sinks.iter().map(|&j| q.as_slice()[j]))
        .collect();
    let edges: Vec<(usize, usize, f64)> = (0..m)
        .flat_map(|a| (0..k).map(move |b| (a, m + b)))
        .map(|(a, b)| (a, b, h.get(sources[a], sinks[b - m])))
        .collect();

    let mut search = TreeSearch {
        edges: &edges,
        mass: &mass,
        n_nodes: m + k,
        chosen: Vec::with_capacity(m + k - 1),
        best: f64::INFINITY,
    };
    let parent: Vec<usize> = (0..m + k).collect();
    search.extend(0, parent);
    Ok(search.best)
}

struct TreeSearch<'a> {
    edges: &'a [(usize, usize, f64)],
    mass: &'a [f64],
    n_nodes: usize,
    chosen: Vec<usize>,
    best: f64,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl TreeSearch<'_> {
    fn extend(&mut self, next: usize, parent: Vec<usize>) {
        let needed = self.n_nodes - 1;
        if self.chosen.len() == needed {
            self.evaluate();
            return;
        }
        if self.edges.len() - next < needed - self.chosen.len() {
            return;
        }
        // take edge `next` when it keeps the selection acyclic
        let (a, b, _) = self.edges[next];
        let mut with = parent.clone();
        let (ra, rb) = (find(&mut with, a), find(&mut with, b));
        if ra != rb {
            with[ra] = rb;
            self.chosen.push(next);
            self.extend(next + 1, with);
            self.chosen.pop();
        }
        self.extend(next + 1, parent);
    }

    /// Forces flows on the chosen spanning tree by peeling leaves.
    fn evaluate(&mut self) {
        let mut remaining = self.mass.to_vec();
        let mut degree = vec![0usize; self.n_nodes];
        for &e in &self.chosen {
            let (a, b, _) = self.edges[e];
            degree[a] += 1;
            degree[b] += 1;
        }
        let mut alive = self.chosen.clone();
        let mut cost = 0.0;
        while !alive.is_empty() {
            let pos = alive
                .iter()
                .position(|&e| {
                    let (a, b, _) = self.edges[e];
                    degree[a] == 1 || degree[b] == 1
                })
                .expect("a finite tree always has a leaf");
            let e = alive.swap_remove(pos);
            let (a, b, c) = self.edges[e];
            let (leaf, other) = if degree[a] == 1 { (a, b) } else { (b, a) };
            let flow = remaining[leaf];
            if flow < -NEGATIVE_FLOW_SLACK {
                return;
            }
            remaining[leaf] = 0.0;
            remaining[other] -= flow;
            degree[leaf] -= 1;
            degree[other] -= 1;
            cost += flow.max(0.0) * c;
        }
        if cost < self.best {
            self.best = cost;
        }
    }
}
