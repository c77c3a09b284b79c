use crate::graph::{DisjointSets, Multigraph, SpanningTree};

use super::{OrderedTree, Sector, WeightError};

/// Greedy sweep of `order`: self-loops and cycle-closing edges are dropped,
/// everything else is picked. Returns the tree mask and the pick order.
pub fn leading_tree_mask(g: &Multigraph, order: &[usize]) -> (u64, Vec<usize>) {
    let need = g.vertex_count().saturating_sub(1);
    let mut sets = DisjointSets::new(g.vertex_count());
    let mut mask = 0u64;
    let mut picks = Vec::with_capacity(need);
    for &i in order {
        if picks.len() == need {
            break;
        }
        let e = &g.edges()[i];
        if sets.union(e.ends[0], e.ends[1]) {
            mask |= 1 << i;
            picks.push(i);
        }
    }
    (mask, picks)
}

/// Leading tree of a sector, i.e. the edges contracted by the
/// deletion/contraction sweep taken in sector order.
pub fn kruskal_leading_tree(g: &Multigraph, sector: &Sector) -> Result<OrderedTree, WeightError> {
    g.require_connected()?;
    let order = sector.indices_in(g)?;
    let (mask, picks) = leading_tree_mask(g, &order);
    Ok(OrderedTree {
        tree: SpanningTree::from_mask(g, mask),
        pick_order: picks.into_iter().map(|i| g.edges()[i].label.clone()).collect(),
    })
}
