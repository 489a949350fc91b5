/// Complete binary tree of non-negative weights supporting O(log n) update
/// and weighted sampling.
///
/// Every internal node is recomputed from its two children, so the stored
/// sums depend only on the current leaves and never on the update history.
#[derive(Clone, Debug)]
pub(crate) struct SumTree {
    leaves: usize,
    nodes: Vec<f64>,
}

impl SumTree {
    pub fn new(weights: &[f64]) -> Self {
        let leaves = weights.len().max(1).next_power_of_two();
        let mut nodes = vec![0.0; 2 * leaves];
        nodes[leaves..leaves + weights.len()].copy_from_slice(weights);
        for i in (1..leaves).rev() {
            nodes[i] = nodes[2 * i] + nodes[2 * i + 1];
        }
        Self { leaves, nodes }
    }

    pub fn total(&self) -> f64 {
        self.nodes[1]
    }

    pub fn get(&self, i: usize) -> f64 {
        self.nodes[self.leaves + i]
    }

    pub fn set(&mut self, i: usize, w: f64) {
        let mut pos = self.leaves + i;
        self.nodes[pos] = w;
        while pos > 1 {
            pos /= 2;
            self.nodes[pos] = self.nodes[2 * pos] + self.nodes[2 * pos + 1];
        }
    }

    /// Leaf index whose cumulative interval contains `target`, for
    /// `target` in `[0, total)`. Zero-weight leaves are never returned.
    pub fn find(&self, mut target: f64) -> usize {
        let mut pos = 1;
        while pos < self.leaves {
            let left = self.nodes[2 * pos];
            let right = self.nodes[2 * pos + 1];
            if target < left || right <= 0.0 {
                pos *= 2;
            } else {
                target -= left;
                pos = 2 * pos + 1;
            }
        }
        pos - self.leaves
    }
}
