//! Constructive tree weights: the fraction of edge orderings (sectors) whose
//! greedy leading tree is a given spanning tree.
//!
//! Three exact routes are provided and must agree:
//!
//! * [`weight_bruteforce`] walks every ordering of the edges;
//! * [`weight_deletion_contraction`] peels the first edge of the ordering off
//!   recursively, memoised on canonical (graph, tree) forms;
//! * [`weight_symbolic`] integrates the product of path minima over the tree
//!   parameters, one order simplex at a time.
//!
//! [`weight_monte_carlo`] samples the same integral.

mod brute;
mod dc;
mod kruskal;
mod monte_carlo;
mod symbolic;
mod table;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::graph::{DisjointSets, GraphError, Multigraph, SpanningTree};
use crate::scalar::{factorial, ratio_of};

pub use brute::{sector_counts, sectors_for_tree, weight_bruteforce};
pub use dc::{weight_deletion_contraction, DcCache, DcStats};
pub use kruskal::{kruskal_leading_tree, leading_tree_mask};
pub use monte_carlo::weight_monte_carlo;
pub use symbolic::{simplex_monomial_integral, weight_symbolic};
pub use table::{weight_table, Method, WeightRow, WeightTable, WeightValue};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("brute force over {edges}! sectors exceeds the cap of {cap} edges")]
    BruteForceCap { edges: usize, cap: usize },
    #[error("symbolic integration over {tree_edges} tree edges exceeds the cap of {cap}")]
    SymbolicCap { tree_edges: usize, cap: usize },
    #[error("invalid sector: {0}")]
    InvalidSector(String),
}

/// Size limits for the exponential-time exact methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightCaps {
    pub brute_force_max_edges: usize,
    pub symbolic_max_tree_edges: usize,
}

impl Default for WeightCaps {
    fn default() -> Self {
        WeightCaps { brute_force_max_edges: 9, symbolic_max_tree_edges: 9 }
    }
}

/// A Hepp sector: an ordering of all edge labels of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sector(pub Vec<String>);

impl Sector {
    pub fn new<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Sector(labels.into_iter().map(Into::into).collect())
    }

    /// Edge indices of `g` in sector order; fails unless every edge appears once.
    pub fn indices_in(&self, g: &Multigraph) -> Result<Vec<usize>, WeightError> {
        if self.0.len() != g.edge_count() {
            return Err(WeightError::InvalidSector(format!(
                "{} labels for a graph with {} edges",
                self.0.len(),
                g.edge_count()
            )));
        }
        let mut seen = vec![false; g.edge_count()];
        self.0
            .iter()
            .map(|l| {
                let i = g.edge_index(l).ok_or_else(|| WeightError::InvalidSector(format!("unknown edge {l:?}")))?;
                if std::mem::replace(&mut seen[i], true) {
                    return Err(WeightError::InvalidSector(format!("edge {l:?} repeated")));
                }
                Ok(i)
            })
            .collect()
    }

    pub(crate) fn from_indices(g: &Multigraph, order: &[usize]) -> Self {
        Sector(order.iter().map(|&i| g.edges()[i].label.clone()).collect())
    }
}

/// Leading tree together with the order in which the greedy sweep picked it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedTree {
    pub tree: SpanningTree,
    pub pick_order: Vec<String>,
}

/// `value = sector_count / total_sectors`, with `total_sectors = |E|!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructiveWeight {
    pub value: BigRational,
    pub sector_count: BigUint,
    pub total_sectors: BigUint,
}

impl ConstructiveWeight {
    pub(crate) fn from_count(sector_count: BigUint, edges: usize) -> Self {
        let total_sectors = factorial(edges);
        ConstructiveWeight { value: ratio_of(&sector_count, &total_sectors), sector_count, total_sectors }
    }

    /// Rebuilds the sector count from an exact weight. The weight of a
    /// spanning tree always has a denominator dividing `|E|!`.
    pub(crate) fn from_value(value: BigRational, edges: usize) -> Self {
        let total_sectors = factorial(edges);
        let scaled = &value * BigRational::from_integer(total_sectors.clone().into());
        assert!(scaled.is_integer(), "weight {value} is not a multiple of 1/{edges}!");
        let sector_count = scaled.to_integer().to_biguint().expect("weights are nonnegative");
        ConstructiveWeight { value, sector_count, total_sectors }
    }
}

/// Every spanning tree of a connected graph, each exactly once, ordered by
/// include-first recursion over edge indices.
pub fn enumerate_spanning_trees(g: &Multigraph) -> Result<Vec<SpanningTree>, WeightError> {
    Ok(spanning_tree_masks(g)?.into_iter().map(|m| SpanningTree::from_mask(g, m)).collect())
}

pub(crate) fn spanning_tree_masks(g: &Multigraph) -> Result<Vec<u64>, GraphError> {
    g.require_connected()?;
    let mut out = Vec::new();
    let need = g.vertex_count() - 1;
    grow(g, 0, 0, 0, need, &DisjointSets::new(g.vertex_count()), &mut out);
    Ok(out)
}

fn grow(g: &Multigraph, i: usize, mask: u64, picked: usize, need: usize, sets: &DisjointSets, out: &mut Vec<u64>) {
    if picked == need {
        out.push(mask);
        return;
    }
    if g.edge_count() - i < need - picked {
        return;
    }
    let e = &g.edges()[i];
    let mut with = sets.clone();
    if with.union(e.ends[0], e.ends[1]) {
        grow(g, i + 1, mask | 1 << i, picked + 1, need, &with, out);
    }
    grow(g, i + 1, mask, picked, need, sets, out);
}

/// For each non-tree, non-loop edge: the positions (within `tree_edges`) of
/// the tree edges on its path. Self-loops have empty paths and are skipped.
pub(crate) fn cycle_paths(g: &Multigraph, tree_mask: u64) -> (Vec<usize>, Vec<Vec<usize>>) {
    let tree_edges: Vec<usize> = (0..g.edge_count()).filter(|&i| tree_mask >> i & 1 == 1).collect();
    let position = |e: usize| tree_edges.iter().position(|&t| t == e).unwrap();
    let paths = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(i, e)| tree_mask >> i & 1 == 0 && !e.is_self_loop())
        .map(|(_, e)| g.tree_path_indices(tree_mask, e.ends[0], e.ends[1]).into_iter().map(position).collect())
        .collect();
    (tree_edges, paths)
}
