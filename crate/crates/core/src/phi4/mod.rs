//! Zero-dimensional quartic model: labelled vacuum graphs from Wick pairings,
//! intermediate-field extensions, collapse of solid cycles, and the
//! order-by-order repacking of collapsed graphs by their spanning trees.
//!
//! Coupling convention: the interaction is `exp(-λ φ⁴ / 2)`, so a labelled
//! pairing at order `n` carries `(-λ/2)ⁿ / n!`.

mod extension;
mod oracle;
mod repack;
mod vacuum;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::graph::GraphError;
use crate::weights::WeightError;

pub use extension::{collapse, extensions, CollapsedGraph, ExtendedGraph, PAIRINGS};
pub use oracle::{double_factorial, logz_oracle, logz_quadrature, z_coefficients};
pub use repack::{lve_repack, CollapsedClass, LveRepacking, ShapeSeries};
pub use vacuum::{base_amplitude, generate_vacuum_graphs, VacuumGraph};

pub const DEFAULT_ORDER_CAP: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Phi4Error {
    #[error("order {order} exceeds the cap of {cap}")]
    OrderCap { order: usize, cap: usize },
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error("solid lines do not form disjoint cycles: {0}")]
    NotCycles(String),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Truncated power series in the coupling, `order → coefficient of λ^order`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AmplitudeSeries(pub BTreeMap<usize, BigRational>);

impl AmplitudeSeries {
    pub fn coefficient(&self, order: usize) -> BigRational {
        self.0.get(&order).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&mut self, order: usize, value: &BigRational) {
        let slot = self.0.entry(order).or_insert_with(BigRational::zero);
        *slot += value;
    }

    pub fn orders(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    /// `Σ_n c_n λⁿ` in floating point.
    pub fn evaluate(&self, lambda: f64) -> f64 {
        self.0.iter().map(|(&n, c)| c.to_f64().unwrap_or(f64::NAN) * lambda.powi(n as i32)).sum()
    }
}
