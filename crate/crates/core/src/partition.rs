use crate::error::{Error, Result};

/// Assignment of states to numbered blocks. Block ids are contiguous from 0
/// and every block is nonempty. Unions of blocks are exactly the sets closed
/// under the induced equivalence relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    assignment: Vec<usize>,
    n_blocks: usize,
}

impl Partition {
    /// Validates a block id per state. Ids must cover `0..k` with no gaps.
    pub fn from_assignment(assignment: Vec<usize>) -> Result<Self> {
        let n_blocks = assignment.iter().map(|&b| b + 1).max().unwrap_or(0);
        let mut seen = vec![false; n_blocks];
        for &b in &assignment {
            seen[b] = true;
        }
        if let Some(empty) = seen.iter().position(|&s| !s) {
            return Err(Error::Partition(format!("block {empty} is empty")));
        }
        Ok(Partition {
            assignment,
            n_blocks,
        })
    }

    /// Renumbers arbitrary labels so that blocks are ordered by their
    /// lowest-index member.
    pub fn canonical<T: PartialEq>(labels: &[T]) -> Self {
        let mut firsts: Vec<usize> = Vec::new();
        let mut assignment = Vec::with_capacity(labels.len());
        for (s, label) in labels.iter().enumerate() {
            let id = firsts
                .iter()
                .position(|&f| labels[f] == *label)
                .unwrap_or_else(|| {
                    firsts.push(s);
                    firsts.len() - 1
                });
            assignment.push(id);
        }
        Partition {
            n_blocks: firsts.len(),
            assignment,
        }
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            assignment: (0..n).collect(),
            n_blocks: n,
        }
    }

    pub fn single_block(n: usize) -> Self {
        Partition {
            assignment: vec![0; n],
            n_blocks: usize::from(n > 0),
        }
    }

    pub fn n_states(&self) -> usize {
        self.assignment.len()
    }

    pub fn n_blocks(&self) -> usize {
        self.n_blocks
    }

    pub fn block_of(&self, state: usize) -> usize {
        self.assignment[state]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn same_block(&self, s: usize, t: usize) -> bool {
        self.assignment[s] == self.assignment[t]
    }

    /// Members of each block in increasing state order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.n_blocks];
        for (s, &b) in self.assignment.iter().enumerate() {
            blocks[b].push(s);
        }
        blocks
    }

    /// Total mass of `weights` in each block.
    pub fn block_masses(&self, weights: &[f64]) -> Vec<f64> {
        let mut masses = vec![0.0; self.n_blocks];
        for (&b, &w) in self.assignment.iter().zip(weights) {
            masses[b] += w;
        }
        masses
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_gaps() {
        assert!(Partition::from_assignment(vec![0, 2, 2]).is_err());
        let p = Partition::from_assignment(vec![1, 0, 1]).unwrap();
        assert_eq!(p.n_blocks(), 2);
        assert_eq!(p.blocks(), vec![vec![1], vec![0, 2]]);
    }

    #[test]
    fn canonical_orders_by_first_member() {
        let p = Partition::canonical(&["x", "y", "x", "z"]);
        assert_eq!(p.assignment(), &[0, 1, 0, 2]);
        assert_eq!(
            p.block_masses(&[0.1, 0.2, 0.3, 0.4]),
            vec![0.1 + 0.3, 0.2, 0.4]
        );
    }

    #[test]
    fn trivial_partitions() {
        assert_eq!(Partition::singletons(3).n_blocks(), 3);
        assert_eq!(Partition::single_block(3).n_blocks(), 1);
        assert!(Partition::single_block(3).same_block(0, 2));
    }
}
