use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::graph::{Multigraph, SpanningTree};
use crate::mc::Estimate;

use super::{
    sector_counts, spanning_tree_masks, weight_deletion_contraction, weight_monte_carlo, weight_symbolic,
    ConstructiveWeight, DcCache, WeightCaps, WeightError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Brute,
    DeletionContraction,
    Symbolic,
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightValue {
    Exact(ConstructiveWeight),
    Estimated(Estimate),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightRow {
    pub tree: SpanningTree,
    pub value: WeightValue,
}

/// One row per spanning tree, in enumeration order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    pub rows: Vec<WeightRow>,
}

impl WeightTable {
    /// Sum of the exact weights, or `None` for a sampled table.
    pub fn exact_sum(&self) -> Option<BigRational> {
        self.rows.iter().try_fold(BigRational::zero(), |acc, row| match &row.value {
            WeightValue::Exact(w) => Some(acc + &w.value),
            WeightValue::Estimated(_) => None,
        })
    }

    pub fn get(&self, tree: &SpanningTree) -> Option<&WeightValue> {
        self.rows.iter().find(|r| &r.tree == tree).map(|r| &r.value)
    }
}

/// Weights of every spanning tree of `g` by the chosen method. Trees are
/// evaluated in parallel; the deletion/contraction memo is shared between them.
pub fn weight_table(g: &Multigraph, method: Method, caps: WeightCaps) -> Result<WeightTable, WeightError> {
    let masks = spanning_tree_masks(g)?;
    let trees: Vec<SpanningTree> = masks.iter().map(|&m| SpanningTree::from_mask(g, m)).collect();
    let values: Vec<WeightValue> = match method {
        Method::Brute => {
            let counts = sector_counts(g, caps.brute_force_max_edges)?;
            masks
                .iter()
                .map(|m| {
                    let n = counts.get(m).copied().unwrap_or(0);
                    WeightValue::Exact(ConstructiveWeight::from_count(BigUint::from(n), g.edge_count()))
                })
                .collect()
        }
        Method::DeletionContraction => {
            let cache = DcCache::new();
            trees
                .par_iter()
                .map(|t| weight_deletion_contraction(g, t, &cache).map(WeightValue::Exact))
                .collect::<Result<_, _>>()?
        }
        Method::Symbolic => trees
            .par_iter()
            .map(|t| weight_symbolic(g, t, caps.symbolic_max_tree_edges).map(WeightValue::Exact))
            .collect::<Result<_, _>>()?,
        Method::MonteCarlo { samples, seed } => trees
            .iter()
            .enumerate()
            .map(|(k, t)| {
                // Each tree gets its own derived seed.
                weight_monte_carlo(g, t, samples, seed.wrapping_add(k as u64)).map(WeightValue::Estimated)
            })
            .collect::<Result<_, _>>()?,
    };
    Ok(WeightTable { rows: trees.into_iter().zip(values).map(|(tree, value)| WeightRow { tree, value }).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use num_bigint::BigInt;
    use num_traits::One;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn exact_values(t: &WeightTable) -> Vec<BigRational> {
        t.rows
            .iter()
            .map(|r| match &r.value {
                WeightValue::Exact(w) => w.value.clone(),
                WeightValue::Estimated(_) => panic!("expected exact"),
            })
            .collect()
    }

    #[test]
    fn g_eye_table_by_every_exact_method() {
        let g = fixtures::g_eye();
        for method in [Method::Brute, Method::DeletionContraction, Method::Symbolic] {
            let table = weight_table(&g, method, WeightCaps::default()).unwrap();
            let values = exact_values(&table);
            assert_eq!(values.iter().filter(|v| **v == q(1, 15)).count(), 4, "{method:?}");
            assert_eq!(values.iter().filter(|v| **v == q(11, 120)).count(), 8, "{method:?}");
            assert_eq!(table.exact_sum().unwrap(), BigRational::one());
        }
    }

    #[test]
    fn cycles_are_uniform() {
        for n in 1..=6 {
            let table = weight_table(&fixtures::cycle(n), Method::DeletionContraction, WeightCaps::default()).unwrap();
            assert_eq!(table.rows.len(), n);
            assert!(exact_values(&table).iter().all(|v| *v == q(1, n as i64)));
        }
    }

    #[test]
    fn single_edge_table() {
        let table = weight_table(&fixtures::single_edge(), Method::Symbolic, WeightCaps::default()).unwrap();
        assert_eq!(exact_values(&table), vec![q(1, 1)]);
    }

    #[test]
    fn sampled_table_has_no_exact_sum() {
        let table =
            weight_table(&fixtures::triangle(), Method::MonteCarlo { samples: 2000, seed: 3 }, WeightCaps::default())
                .unwrap();
        assert!(table.exact_sum().is_none());
        assert_eq!(table.rows.len(), 3);
    }
}
