//! Labeled multigraphs with self-loops, plus the contraction, deletion,
//! connectivity and tree-path primitives the rest of the crate is built on.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Hard limit on edge count; edge subsets are carried as `u64` masks.
pub const MAX_EDGES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("graph JSON could not be parsed: {0}")]
    Parse(String),
    #[error("duplicate vertex label {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate edge label {0:?}")]
    DuplicateEdge(String),
    #[error("edge {edge:?} refers to unknown vertex {vertex:?}")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("graph has no vertices")]
    Empty,
    #[error("graph has {0} edges, more than the supported {MAX_EDGES}")]
    TooManyEdges(usize),
    #[error("no edge labeled {0:?}")]
    UnknownEdge(String),
    #[error("no vertex labeled {0:?}")]
    UnknownVertex(String),
    #[error("edge {0:?} is a self-loop and cannot be contracted")]
    SelfLoopContraction(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("edge set is not a spanning tree: {0}")]
    NotSpanningTree(String),
}

/// An edge between two vertex indices of its host graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub label: String,
    pub ends: [usize; 2],
}

impl Edge {
    pub fn is_self_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }

    /// The endpoint opposite to `v`, if `v` is an endpoint.
    pub fn other(&self, v: usize) -> Option<usize> {
        match self.ends {
            [a, b] if a == v => Some(b),
            [a, b] if b == v => Some(a),
            _ => None,
        }
    }
}

/// Multigraph with labeled vertices and labeled edges. Vertex and edge order
/// is preserved from construction and only matters for display.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphFile {
    vertices: Vec<String>,
    edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct EdgeRecord {
    id: String,
    ends: [String; 2],
}

impl Multigraph {
    /// Builds a graph from vertex labels and `(edge label, end, end)` triples.
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S, S)>,
        S: Into<String>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (label, a, b) in edges {
            let (label, a, b): (String, String, String) = (label.into(), a.into(), b.into());
            if !seen.insert(label.clone()) {
                return Err(GraphError::DuplicateEdge(label));
            }
            let lookup = |v: &String| {
                index.get(v).copied().ok_or_else(|| GraphError::DanglingEndpoint {
                    edge: label.clone(),
                    vertex: v.clone(),
                })
            };
            let ends = [lookup(&a)?, lookup(&b)?];
            out.push(Edge { label, ends });
        }
        if out.len() > MAX_EDGES {
            return Err(GraphError::TooManyEdges(out.len()));
        }
        Ok(Multigraph { vertices, edges: out })
    }

    pub fn from_json_str(s: &str) -> Result<Self, GraphError> {
        let file: GraphFile = serde_json::from_str(s).map_err(|e| GraphError::Parse(e.to_string()))?;
        Multigraph::new(
            file.vertices,
            file.edges.into_iter().map(|e| {
                let [a, b] = e.ends;
                (e.id, a, b)
            }),
        )
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let file = GraphFile {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    id: e.label.clone(),
                    ends: [self.vertices[e.ends[0]].clone(), self.vertices[e.ends[1]].clone()],
                })
                .collect(),
        };
        serde_json::to_value(file).expect("graph serialization is infallible")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn edge_index(&self, label: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.label == label)
    }

    pub fn edge(&self, label: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.label == label)
    }

    pub fn endpoint_labels(&self, e: &Edge) -> (&str, &str) {
        (&self.vertices[e.ends[0]], &self.vertices[e.ends[1]])
    }

    pub fn self_loop_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_self_loop()).count()
    }

    /// Mask with one bit per edge index.
    pub fn all_edges_mask(&self) -> u64 {
        if self.edges.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.edges.len()) - 1
        }
    }

    /// Reachability from the first vertex. Self-loops never help.
    pub fn is_connected(&self) -> Result<bool, GraphError> {
        if self.vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        Ok(self.component_count() == 1)
    }

    pub fn component_count(&self) -> usize {
        let mut sets = DisjointSets::new(self.vertices.len());
        for e in &self.edges {
            sets.union(e.ends[0], e.ends[1]);
        }
        sets.count()
    }

    pub(crate) fn require_connected(&self) -> Result<(), GraphError> {
        if self.is_connected()? {
            Ok(())
        } else {
            Err(GraphError::Disconnected)
        }
    }

    /// Merges the endpoints of `label`. The merged vertex keeps the
    /// lexicographically smaller label and the lower vertex position; edges parallel to `label` become self-loops.
    pub fn contract_edge(&self, label: &str) -> Result<Multigraph, GraphError> {
        let idx = self.edge_index(label).ok_or_else(|| GraphError::UnknownEdge(label.to_string()))?;
        self.contract_index(idx)
    }

    pub(crate) fn contract_index(&self, idx: usize) -> Result<Multigraph, GraphError> {
        let e = &self.edges[idx];
        if e.is_self_loop() {
            return Err(GraphError::SelfLoopContraction(e.label.clone()));
        }
        let (keep, drop) = (e.ends[0].min(e.ends[1]), e.ends[0].max(e.ends[1]));
        let mut vertices = self.vertices.clone();
        if self.vertices[drop] < self.vertices[keep] {
            vertices[keep] = self.vertices[drop].clone();
        }
        vertices.remove(drop);
        let relabel = |v: usize| match v.cmp(&drop) {
            std::cmp::Ordering::Less => v,
            std::cmp::Ordering::Equal => keep,
            std::cmp::Ordering::Greater => v - 1,
        };
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, e)| Edge { label: e.label.clone(), ends: [relabel(e.ends[0]), relabel(e.ends[1])] })
            .collect();
        Ok(Multigraph { vertices, edges })
    }

    pub fn delete_edge(&self, label: &str) -> Result<Multigraph, GraphError> {
        let idx = self.edge_index(label).ok_or_else(|| GraphError::UnknownEdge(label.to_string()))?;
        Ok(self.delete_index(idx))
    }

    pub(crate) fn delete_index(&self, idx: usize) -> Multigraph {
        let mut edges = self.edges.clone();
        edges.remove(idx);
        Multigraph { vertices: self.vertices.clone(), edges }
    }

    /// Resolves a set of edge labels to a mask over this graph's edges.
    pub fn edge_mask<'a, I>(&self, labels: I) -> Result<u64, GraphError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        labels.into_iter().try_fold(0u64, |mask, l| {
            let i = self.edge_index(l).ok_or_else(|| GraphError::UnknownEdge(l.to_string()))?;
            Ok(mask | (1 << i))
        })
    }

    pub fn mask_labels(&self, mask: u64) -> Vec<String> {
        self.edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e.label.clone())
            .collect()
    }

    /// Checks that `mask` selects a spanning tree.
    pub fn check_tree_mask(&self, mask: u64) -> Result<(), GraphError> {
        let n = self.vertices.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if mask & !self.all_edges_mask() != 0 {
            return Err(GraphError::NotSpanningTree("edge outside graph".into()));
        }
        if mask.count_ones() as usize != n - 1 {
            return Err(GraphError::NotSpanningTree(format!(
                "{} edges selected, a spanning tree of {} vertices has {}",
                mask.count_ones(),
                n,
                n - 1
            )));
        }
        let mut sets = DisjointSets::new(n);
        for (i, e) in self.edges.iter().enumerate() {
            if mask >> i & 1 == 1 && !sets.union(e.ends[0], e.ends[1]) {
                return Err(GraphError::NotSpanningTree(format!("edge {:?} closes a cycle", e.label)));
            }
        }
        Ok(())
    }

    /// Unique path between `i` and `j` through the tree edges in `tree`.
    pub fn tree_path(&self, tree: &SpanningTree, i: &str, j: &str) -> Result<TreePath, GraphError> {
        let mask = tree.mask_in(self)?;
        self.check_tree_mask(mask)?;
        let vi = self.vertex_index(i).ok_or_else(|| GraphError::UnknownVertex(i.to_string()))?;
        let vj = self.vertex_index(j).ok_or_else(|| GraphError::UnknownVertex(j.to_string()))?;
        let path = self.tree_path_indices(mask, vi, vj);
        Ok(TreePath(path.into_iter().map(|e| self.edges[e].label.clone()).collect()))
    }

    /// Edge indices along the tree path from `from` to `to`, in walking order.
    /// `mask` must already be a valid spanning tree.
    pub(crate) fn tree_path_indices(&self, mask: u64, from: usize, to: usize) -> Vec<usize> {
        if from == to {
            return Vec::new();
        }
        let adjacency = self.tree_adjacency(mask);
        let mut parent_edge: Vec<Option<usize>> = vec![None; self.vertices.len()];
        let mut visited = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([from]);
        visited[from] = true;
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &(e, w) in &adjacency[v] {
                if !visited[w] {
                    visited[w] = true;
                    parent_edge[w] = Some(e);
                    queue.push_back(w);
                }
            }
        }
        let mut path = Vec::new();
        let mut v = to;
        while v != from {
            let e = parent_edge[v].expect("tree spans the graph");
            path.push(e);
            v = self.edges[e].other(v).unwrap();
        }
        path.reverse();
        path
    }

    pub(crate) fn tree_adjacency(&self, mask: u64) -> Vec<Vec<(usize, usize)>> {
        let mut adjacency = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                adjacency[e.ends[0]].push((i, e.ends[1]));
                adjacency[e.ends[1]].push((i, e.ends[0]));
            }
        }
        adjacency
    }

    /// Same graph with every vertex and edge renamed; used for relabeling tests.
    pub fn relabeled<F, G>(&self, mut vertex: F, mut edge: G) -> Multigraph
    where
        F: FnMut(&str) -> String,
        G: FnMut(&str) -> String,
    {
        Multigraph {
            vertices: self.vertices.iter().map(|v| vertex(v)).collect(),
            edges: self.edges.iter().map(|e| Edge { label: edge(&e.label), ends: e.ends }).collect(),
        }
    }
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V={} E={} [", self.vertices.len(), self.edges.len())?;
        for (k, e) in self.edges.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            let (a, b) = self.endpoint_labels(e);
            write!(f, "{}={}{}", e.label, a, b)?;
        }
        write!(f, "]")
    }
}

/// Spanning tree given by its edge labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpanningTree(BTreeSet<String>);

impl SpanningTree {
    pub fn new<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        SpanningTree(labels.into_iter().map(Into::into).collect())
    }

    pub(crate) fn from_mask(g: &Multigraph, mask: u64) -> Self {
        SpanningTree(g.mask_labels(mask).into_iter().collect())
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.0.contains(label)
    }

    pub fn mask_in(&self, g: &Multigraph) -> Result<u64, GraphError> {
        g.edge_mask(self.labels())
    }

    /// Validated mask; fails unless this is a spanning tree of `g`.
    pub fn checked_mask(&self, g: &Multigraph) -> Result<u64, GraphError> {
        let mask = self.mask_in(g)?;
        g.check_tree_mask(mask)?;
        Ok(mask)
    }

    /// Comma-separated labels in edge order of `g`, e.g. `l1,l2,l3`.
    pub fn display_in(&self, g: &Multigraph) -> String {
        g.edges().iter().filter(|e| self.contains(&e.label)).map(|e| e.label.as_str()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for SpanningTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().cloned().collect::<Vec<_>>().join(","))
    }
}

/// Ordered edge labels of a tree path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePath(pub Vec<String>);

impl TreePath {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> TreePath {
        TreePath(self.0.iter().rev().cloned().collect())
    }
}

/// Union-find with path halving.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    count: usize,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect(), count: n }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        self.count -= 1;
        true
    }

    pub fn count(&self) -> usize {
        self.count
    }
}
