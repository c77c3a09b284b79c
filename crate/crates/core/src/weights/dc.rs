use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::canon::{canonical_key, CanonicalKey};
use crate::graph::{Multigraph, SpanningTree};

use super::{ConstructiveWeight, WeightError};

/// Memo of sector counts keyed on canonical (graph, tree) forms. Shareable
/// across threads; racing workers may both compute an entry but always agree.
#[derive(Debug, Default)]
pub struct DcCache {
    counts: Mutex<HashMap<CanonicalKey, BigUint>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DcStats {
    pub hits: u64,
    pub misses: u64,
    pub entries: usize,
}

impl DcCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn stats(&self) -> DcStats {
        DcStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            entries: self.counts.lock().unwrap().len(),
        }
    }

    /// Sector count `N(G, T)` for a validated tree mask.
    ///
    /// The first edge of a sector is a self-loop (deleted) or gets picked,
    /// in which case it must belong to `T` and is contracted; the rest of the
    /// sector is a sector of the reduced graph.
    pub fn sector_count(&self, g: &Multigraph, tree: u64) -> BigUint {
        if g.edge_count() == 0 {
            return if g.vertex_count() == 1 { BigUint::one() } else { BigUint::zero() };
        }
        let key = canonical_key(g, tree);
        if let Some(n) = self.counts.lock().unwrap().get(&key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return n.clone();
        }
        self.misses.fetch_add(1, Ordering::Relaxed);

        let mut total = BigUint::zero();
        for (i, e) in g.edges().iter().enumerate() {
            let rest = drop_bit(tree, i);
            if e.is_self_loop() {
                total += self.sector_count(&g.delete_index(i), rest);
            } else if tree >> i & 1 == 1 {
                let contracted = g.contract_index(i).expect("non-loop edge");
                total += self.sector_count(&contracted, rest);
            }
        }
        self.counts.lock().unwrap().insert(key, total.clone());
        total
    }
}

/// Removes bit `i` and shifts the higher bits down, matching edge removal.
fn drop_bit(mask: u64, i: usize) -> u64 {
    let low = mask & ((1u64 << i) - 1);
    let high = if i + 1 >= 64 { 0 } else { (mask >> (i + 1)) << i };
    low | high
}

pub fn weight_deletion_contraction(
    g: &Multigraph,
    t: &SpanningTree,
    cache: &DcCache,
) -> Result<ConstructiveWeight, WeightError> {
    g.require_connected()?;
    let mask = t.checked_mask(g)?;
    Ok(ConstructiveWeight::from_count(cache.sector_count(g, mask), g.edge_count()))
}
