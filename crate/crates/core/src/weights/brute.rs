use std::collections::BTreeMap;

use num_bigint::BigUint;

use crate::graph::{Multigraph, SpanningTree};

use super::kruskal::leading_tree_mask;
use super::{ConstructiveWeight, Sector, WeightError};

fn check_cap(g: &Multigraph, cap: usize) -> Result<(), WeightError> {
    if g.edge_count() > cap {
        return Err(WeightError::BruteForceCap { edges: g.edge_count(), cap });
    }
    Ok(())
}

/// Visits every permutation of `0..n` in lexicographic order.
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        visit(&p);
        // next_permutation
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Number of sectors leading to each spanning tree, keyed by tree mask.
pub fn sector_counts(g: &Multigraph, cap: usize) -> Result<BTreeMap<u64, u64>, WeightError> {
    check_cap(g, cap)?;
    g.require_connected()?;
    let mut counts = BTreeMap::new();
    for_each_permutation(g.edge_count(), |order| {
        *counts.entry(leading_tree_mask(g, order).0).or_insert(0u64) += 1;
    });
    Ok(counts)
}

/// Counts sectors one by one.
pub fn weight_bruteforce(g: &Multigraph, t: &SpanningTree, cap: usize) -> Result<ConstructiveWeight, WeightError> {
    check_cap(g, cap)?;
    g.require_connected()?;
    let target = t.checked_mask(g)?;
    let mut n = 0u64;
    for_each_permutation(g.edge_count(), |order| {
        if leading_tree_mask(g, order).0 == target {
            n += 1;
        }
    });
    Ok(ConstructiveWeight::from_count(BigUint::from(n), g.edge_count()))
}

/// Every sector whose leading tree is `t`, in lexicographic order of edge index.
pub fn sectors_for_tree(g: &Multigraph, t: &SpanningTree, cap: usize) -> Result<Vec<Sector>, WeightError> {
    check_cap(g, cap)?;
    g.require_connected()?;
    let target = t.checked_mask(g)?;
    let mut out = Vec::new();
    for_each_permutation(g.edge_count(), |order| {
        if leading_tree_mask(g, order).0 == target {
            out.push(Sector::from_indices(g, order));
        }
    });
    Ok(out)
}
