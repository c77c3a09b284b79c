use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::canon::{canonical_form, CanonicalForm};
use crate::graph::{Multigraph, SpanningTree};
use crate::scalar::{factorial, ratio_of};
use crate::weights::{spanning_tree_masks, DcCache};

use super::extension::{collapse, extensions};
use super::vacuum::generate_vacuum_graphs;
use super::{AmplitudeSeries, ExtendedGraph, Phi4Error};

/// One isomorphism class of collapsed graphs at a fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapsedClass {
    pub order: usize,
    /// Canonical rendering of the collapsed graph.
    pub key: String,
    /// Representative with bold vertices `c1..` and dotted edges `d1..`.
    pub graph: Multigraph,
    /// Number of (pairing, extension) pairs collapsing into this class.
    pub multiplicity: u64,
    /// `multiplicity · 3^{-n} (-1/2)ⁿ / n!`.
    pub amplitude: BigRational,
    pub connected: bool,
    /// Spanning trees of the representative with their exact weights and
    /// shapes. Empty for disconnected classes.
    pub trees: Vec<(SpanningTree, BigRational, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeSeries {
    /// Canonical rendering of the tree as a graph on its bold vertices.
    pub shape: String,
    pub edges: usize,
    pub series: AmplitudeSeries,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LveRepacking {
    pub max_order: usize,
    /// Connected classes repacked by tree shape, ordered by shape key.
    pub shapes: Vec<ShapeSeries>,
    /// Sum over shapes, order by order.
    pub totals: AmplitudeSeries,
    /// All collapsed classes (connected and not), by order then key.
    pub classes: Vec<CollapsedClass>,
    /// Amplitude of every collapsed graph, the coefficients of `Z`.
    pub z_side: AmplitudeSeries,
    /// Amplitude carried by disconnected collapsed graphs.
    pub disconnected: AmplitudeSeries,
    /// Labelled vacuum pairings per order, split as (connected, disconnected).
    pub vacuum_counts: BTreeMap<usize, (u64, u64)>,
}

/// Generates every labelled vacuum graph up to `max_order`, extends and
/// collapses it, groups collapsed graphs by isomorphism class and spreads
/// each connected class over its spanning trees with the constructive weights.
pub fn lve_repack(max_order: usize, cap: usize) -> Result<LveRepacking, Phi4Error> {
    if max_order == 0 {
        return Err(Phi4Error::ZeroOrder);
    }
    if max_order > cap {
        return Err(Phi4Error::OrderCap { order: max_order, cap });
    }
    let cache = DcCache::new();
    let mut classes = Vec::new();
    let mut vacuum_counts = BTreeMap::new();
    for order in 1..=max_order {
        let graphs = generate_vacuum_graphs(order, cap)?;
        let tallies: Vec<(BTreeMap<CanonicalForm, u64>, bool)> = graphs
            .par_iter()
            .map(|g| {
                let mut local = BTreeMap::new();
                for e in extensions(g) {
                    *local.entry(collapsed_form(&e)?).or_insert(0) += 1;
                }
                Ok((local, g.is_connected()))
            })
            .collect::<Result<_, Phi4Error>>()?;

        let connected = tallies.iter().filter(|(_, c)| *c).count() as u64;
        vacuum_counts.insert(order, (connected, tallies.len() as u64 - connected));
        let mut merged: BTreeMap<CanonicalForm, u64> = BTreeMap::new();
        for (local, _) in tallies {
            for (form, count) in local {
                *merged.entry(form).or_insert(0) += count;
            }
        }

        let unit = super::base_amplitude(order) / BigRational::from_integer(num_traits::pow(BigInt::from(3), order));
        for (form, multiplicity) in merged {
            classes.push(build_class(order, &form, multiplicity, &unit, &cache)?);
        }
    }

    let mut shapes: BTreeMap<String, ShapeSeries> = BTreeMap::new();
    let mut totals = AmplitudeSeries::default();
    let mut z_side = AmplitudeSeries::default();
    let mut disconnected = AmplitudeSeries::default();
    for class in &classes {
        z_side.add(class.order, &class.amplitude);
        if !class.connected {
            disconnected.add(class.order, &class.amplitude);
            continue;
        }
        for (tree, weight, shape) in &class.trees {
            let share = weight * &class.amplitude;
            totals.add(class.order, &share);
            shapes
                .entry(shape.clone())
                .or_insert_with(|| ShapeSeries { shape: shape.clone(), edges: tree.len(), series: AmplitudeSeries::default() })
                .series
                .add(class.order, &share);
        }
    }

    Ok(LveRepacking {
        max_order,
        shapes: shapes.into_values().collect(),
        totals,
        classes,
        z_side,
        disconnected,
        vacuum_counts,
    })
}

fn collapsed_form(e: &ExtendedGraph) -> Result<CanonicalForm, Phi4Error> {
    Ok(canonical_form(&collapse(e)?.graph, 0))
}

fn representative(form: &CanonicalForm) -> Multigraph {
    let vertices: Vec<String> = (1..=form.vertex_count).map(|k| format!("c{k}")).collect();
    let edges: Vec<(String, String, String)> = form
        .edges
        .iter()
        .enumerate()
        .map(|(k, &(a, b, _))| (format!("d{}", k + 1), vertices[a].clone(), vertices[b].clone()))
        .collect();
    Multigraph::new(vertices, edges).expect("canonical forms are well formed")
}

fn tree_shape(g: &Multigraph, mask: u64) -> String {
    let edges: Vec<(String, String, String)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(i, _)| mask >> i & 1 == 1)
        .map(|(_, e)| {
            let (a, b) = g.endpoint_labels(e);
            (e.label.clone(), a.to_string(), b.to_string())
        })
        .collect();
    let tree = Multigraph::new(g.vertices().to_vec(), edges).expect("subgraph of a valid graph");
    canonical_form(&tree, 0).render()
}

fn build_class(
    order: usize,
    form: &CanonicalForm,
    multiplicity: u64,
    unit: &BigRational,
    cache: &DcCache,
) -> Result<CollapsedClass, Phi4Error> {
    let graph = representative(form);
    let connected = graph.is_connected()?;
    let trees = if connected {
        let total = factorial(graph.edge_count());
        spanning_tree_masks(&graph)?
            .into_iter()
            .map(|mask| {
                let weight = ratio_of(&cache.sector_count(&graph, mask), &total);
                (SpanningTree::from_mask(&graph, mask), weight, tree_shape(&graph, mask))
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(CollapsedClass {
        order,
        key: form.render(),
        amplitude: unit * BigRational::from_integer(BigInt::from(multiplicity)),
        graph,
        multiplicity,
        connected,
        trees,
    })
}
