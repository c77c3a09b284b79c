//! Graph generators: exhaustive connected multigraphs up to isomorphism and
//! seeded random instances for sweeps.

use std::collections::BTreeMap;

use rand::Rng;

use crate::canon::{canonical_form, CanonicalForm};
use crate::graph::Multigraph;

/// Every connected multigraph (self-loops and multi-edges allowed) with at
/// most `max_edges` edges, one per isomorphism class, ordered by edge count
/// and then canonical form. Vertices are `v1..`, edges `e1..`.
///
/// Built by augmentation: every connected graph with `E ≥ 1` edges arises
/// from one with `E - 1` edges by adding an edge between existing vertices
/// (drop a non-bridge edge) or a pendant vertex (drop a leaf edge).
pub fn connected_multigraphs(max_edges: usize) -> Vec<Multigraph> {
    let mut layer: Vec<CanonicalForm> = vec![CanonicalForm { vertex_count: 1, edges: Vec::new() }];
    let mut out: Vec<Multigraph> = vec![from_form(&layer[0])];
    for _ in 0..max_edges {
        let mut next: BTreeMap<CanonicalForm, ()> = BTreeMap::new();
        for form in &layer {
            let n = form.vertex_count;
            let mut candidates: Vec<CanonicalForm> = Vec::new();
            for a in 0..n {
                for b in a..n {
                    candidates.push(with_edge(form, n, a, b));
                }
                candidates.push(with_edge(form, n + 1, a, n));
            }
            for c in candidates {
                let g = from_form(&c);
                next.insert(canonical_form(&g, 0), ());
            }
        }
        layer = next.into_keys().collect();
        out.extend(layer.iter().map(from_form));
    }
    out
}

fn with_edge(form: &CanonicalForm, vertex_count: usize, a: usize, b: usize) -> CanonicalForm {
    let mut edges = form.edges.clone();
    edges.push((a, b, false));
    CanonicalForm { vertex_count, edges }
}

fn from_form(form: &CanonicalForm) -> Multigraph {
    let vertices: Vec<String> = (1..=form.vertex_count).map(|k| format!("v{k}")).collect();
    let edges: Vec<(String, String, String)> = form
        .edges
        .iter()
        .enumerate()
        .map(|(k, &(a, b, _))| (format!("e{}", k + 1), vertices[a].clone(), vertices[b].clone()))
        .collect();
    Multigraph::new(vertices, edges).expect("generated graphs are well formed")
}

/// Random labelled tree on `n` vertices `v1..vn` (edges `e1..`),
/// built by attaching each vertex to a random earlier one after a shuffle.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Multigraph {
    assert!(n >= 1);
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let vertices: Vec<String> = (1..=n).map(|k| format!("v{k}")).collect();
    let edges: Vec<(String, String, String)> = (1..n)
        .map(|k| {
            let parent = order[rng.random_range(0..k)];
            (format!("e{k}"), vertices[parent].clone(), vertices[order[k]].clone())
        })
        .collect();
    Multigraph::new(vertices, edges).unwrap()
}

/// Random connected multigraph with `edges ≥ vertices - 1` edges: a random
/// tree plus extra edges (possibly loops or parallels) between random vertices.
pub fn random_connected<R: Rng>(rng: &mut R, vertices: usize, edges: usize) -> Multigraph {
    assert!(vertices >= 1 && edges + 1 >= vertices);
    let tree = random_tree(rng, vertices);
    let labels = tree.vertices().to_vec();
    let mut list: Vec<(String, String, String)> = tree
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = tree.endpoint_labels(e);
            (e.label.clone(), a.to_string(), b.to_string())
        })
        .collect();
    for k in list.len()..edges {
        let a = rng.random_range(0..vertices);
        let b = rng.random_range(0..vertices);
        list.push((format!("e{}", k + 1), labels[a].clone(), labels[b].clone()));
    }
    Multigraph::new(labels, list).unwrap()
}
