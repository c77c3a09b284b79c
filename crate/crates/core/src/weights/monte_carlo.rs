use rand::Rng;

use crate::graph::{Multigraph, SpanningTree};
use crate::mc::{self, Estimate};

use super::{cycle_paths, WeightError};

/// Samples the tree parameters uniformly on the unit cube and averages the
/// product of path minima over the non-tree edges.
pub fn weight_monte_carlo(g: &Multigraph, t: &SpanningTree, samples: u64, seed: u64) -> Result<Estimate, WeightError> {
    g.require_connected()?;
    let mask = t.checked_mask(g)?;
    let (tree_edges, paths) = cycle_paths(g, mask);
    let n = tree_edges.len();
    Ok(mc::sample(samples.max(1), seed, |rng| {
        let w: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        paths
            .iter()
            .map(|path| path.iter().map(|&p| w[p]).fold(f64::INFINITY, f64::min))
            .product()
    }))
}
