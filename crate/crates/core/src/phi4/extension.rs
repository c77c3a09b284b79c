use num_bigint::BigInt;
use num_rational::BigRational;

use crate::graph::{DisjointSets, Multigraph};

use super::vacuum::base_amplitude;
use super::{Phi4Error, VacuumGraph};

/// The three ways to split the slots `0..4` of a quartic vertex into two pairs.
pub const PAIRINGS: [[[usize; 2]; 2]; 3] = [[[0, 1], [2, 3]], [[0, 2], [1, 3]], [[0, 3], [1, 2]]];

/// A vacuum graph with one pairing chosen per vertex. Vertex `v` splits into
/// half-vertices `xva` and `xvb` joined by the dotted edge `dv`; the solid
/// edges `ek` are the original lines, re-attached to half-vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedGraph {
    pub base: VacuumGraph,
    pub pairings: Vec<usize>,
    pub graph: Multigraph,
    /// Edge mask of the solid (original) lines in `graph`.
    pub solid: u64,
}

impl ExtendedGraph {
    /// `3^{-n}` times the base pairing's amplitude.
    pub fn amplitude(&self) -> BigRational {
        let n = self.base.order;
        base_amplitude(n) / BigRational::from_integer(num_traits::pow(BigInt::from(3), n))
    }

    pub fn dotted(&self) -> u64 {
        self.graph.all_edges_mask() & !self.solid
    }

    fn half_vertex(&self, half_edge: usize) -> usize {
        let v = VacuumGraph::vertex_of(half_edge);
        let slot = half_edge % 4;
        let side = usize::from(!PAIRINGS[self.pairings[v]][0].contains(&slot));
        2 * v + side
    }
}

/// All `3ⁿ` extensions, with pairing choices enumerated in base-3 order
/// (vertex 1 slowest).
pub fn extensions(g: &VacuumGraph) -> Vec<ExtendedGraph> {
    let n = g.order;
    let total = 3usize.pow(n as u32);
    (0..total)
        .map(|code| {
            let pairings: Vec<usize> = (0..n).map(|v| code / 3usize.pow((n - 1 - v) as u32) % 3).collect();
            build(g, pairings)
        })
        .collect()
}

fn build(g: &VacuumGraph, pairings: Vec<usize>) -> ExtendedGraph {
    let n = g.order;
    let mut ext = ExtendedGraph { base: g.clone(), pairings, graph: Multigraph::new(["_"], Vec::<(&str, &str, &str)>::new()).unwrap(), solid: 0 };
    let vertices: Vec<String> = (0..2 * n).map(|h| format!("x{}{}", h / 2 + 1, if h % 2 == 0 { 'a' } else { 'b' })).collect();
    let mut edges: Vec<(String, String, String)> = g
        .pairs
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| {
            (format!("e{}", k + 1), vertices[ext.half_vertex(a)].clone(), vertices[ext.half_vertex(b)].clone())
        })
        .collect();
    ext.solid = (1u64 << edges.len()) - 1;
    edges.extend((0..n).map(|v| (format!("d{}", v + 1), vertices[2 * v].clone(), vertices[2 * v + 1].clone())));
    ext.graph = Multigraph::new(vertices, edges).unwrap();
    ext
}

/// Bold vertices are the solid cycles; the dotted lines become its edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapsedGraph {
    pub graph: Multigraph,
    /// Bold vertex of each half-vertex of the extension.
    pub cycle_of: Vec<usize>,
}

impl CollapsedGraph {
    pub fn cycle_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn is_connected(&self) -> bool {
        self.graph.is_connected().unwrap_or(false)
    }
}

/// Contracts every solid cycle to a bold vertex `c1..`, numbered by the
/// smallest half-vertex each contains. Checks that every half-vertex has
/// exactly two solid line ends, so the solid lines are disjoint cycles.
pub fn collapse(e: &ExtendedGraph) -> Result<CollapsedGraph, Phi4Error> {
    let g = &e.graph;
    let n = g.vertex_count();
    let mut solid_degree = vec![0usize; n];
    let mut sets = DisjointSets::new(n);
    for (i, edge) in g.edges().iter().enumerate() {
        if e.solid >> i & 1 == 1 {
            solid_degree[edge.ends[0]] += 1;
            solid_degree[edge.ends[1]] += 1;
            sets.union(edge.ends[0], edge.ends[1]);
        }
    }
    if let Some(v) = solid_degree.iter().position(|&d| d != 2) {
        return Err(Phi4Error::NotCycles(format!(
            "half-vertex {} has {} solid line ends",
            g.vertex_label(v),
            solid_degree[v]
        )));
    }

    let mut root_to_bold: Vec<Option<usize>> = vec![None; n];
    let mut cycle_of = vec![0usize; n];
    let mut bold = 0usize;
    for (v, slot) in cycle_of.iter_mut().enumerate() {
        let r = sets.find(v);
        *slot = *root_to_bold[r].get_or_insert_with(|| {
            bold += 1;
            bold - 1
        });
    }
    let vertices: Vec<String> = (1..=bold).map(|k| format!("c{k}")).collect();
    let edges: Vec<(String, String, String)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(i, _)| e.solid >> i & 1 == 0)
        .map(|(_, edge)| (edge.label.clone(), vertices[cycle_of[edge.ends[0]]].clone(), vertices[cycle_of[edge.ends[1]]].clone()))
        .collect();
    Ok(CollapsedGraph { graph: Multigraph::new(vertices, edges)?, cycle_of })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi4::generate_vacuum_graphs;
    use num_traits::Zero;

    #[test]
    fn order_one_extensions_and_shapes() {
        let graphs = generate_vacuum_graphs(1, 3).unwrap();
        for g in &graphs {
            let exts = extensions(g);
            assert_eq!(exts.len(), 3);
            let mut shapes: Vec<(usize, usize)> = exts
                .iter()
                .map(|e| {
                    let c = collapse(e).unwrap();
                    (c.graph.vertex_count(), c.graph.self_loop_count())
                })
                .collect();
            shapes.sort();
            // Two extensions close one solid cycle (dotted self-loop), one closes two.
            assert_eq!(shapes, vec![(1, 1), (1, 1), (2, 0)]);
        }
    }

    #[test]
    fn order_two_extensions() {
        let graphs = generate_vacuum_graphs(2, 3).unwrap();
        let mut two_edge_tree_hosts = 0;
        for g in &graphs {
            let exts = extensions(g);
            assert_eq!(exts.len(), 9);
            let total = exts.iter().fold(BigRational::zero(), |acc, e| acc + e.amplitude());
            assert_eq!(total, base_amplitude(2));
            for e in &exts {
                assert_eq!(e.dotted().count_ones(), 2);
                let c = collapse(e).unwrap();
                assert_eq!(c.graph.edge_count(), 2);
                if c.is_connected() && c.cycle_count() == 3 {
                    two_edge_tree_hosts += 1;
                }
            }
        }
        assert!(two_edge_tree_hosts > 0);
    }

    #[test]
    fn broken_cycles_are_reported() {
        let g = &generate_vacuum_graphs(1, 3).unwrap()[0];
        let mut e = extensions(g).remove(0);
        e.solid = 0b01;
        assert!(matches!(collapse(&e), Err(Phi4Error::NotCycles(_))));
    }

    #[test]
    fn half_vertex_labels() {
        let g = &generate_vacuum_graphs(1, 3).unwrap()[0];
        let e = &extensions(g)[0];
        assert_eq!(e.graph.vertices(), ["x1a", "x1b"]);
        assert_eq!(e.graph.edge("d1").map(|d| d.ends), Some([0, 1]));
    }
}
