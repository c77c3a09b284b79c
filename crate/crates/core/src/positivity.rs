//! Weakening matrices `x^T_{ij}(w)` and their barycentric decomposition into
//! block matrices, which makes their positive semidefiniteness explicit.

use std::collections::BTreeMap;

use crate::graph::{DisjointSets, GraphError, Multigraph, SpanningTree};
use crate::linalg::{is_symmetric, symmetric_eigenvalues, Dense};
use crate::scalar::{min_of, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PositivityError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("no weakening parameter for tree edge {0:?}")]
    MissingParameter(String),
    #[error("parameter given for {0:?}, which is not a tree edge")]
    UnexpectedParameter(String),
    #[error("parameter for {0:?} lies outside [0, 1]")]
    OutOfRange(String),
    #[error("matrix is not symmetric")]
    NonSymmetric,
}

/// One parameter in `[0, 1]` per tree edge.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakeningVector<T>(pub BTreeMap<String, T>);

impl<T: Scalar> WeakeningVector<T> {
    pub fn new<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
    {
        WeakeningVector(entries.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    /// Parameters in the order of the tree's edge indices in `g`.
    fn per_tree_edge(&self, g: &Multigraph, tree_mask: u64) -> Result<Vec<(usize, T)>, PositivityError> {
        for label in self.0.keys() {
            match g.edge_index(label) {
                Some(i) if tree_mask >> i & 1 == 1 => {}
                _ => return Err(PositivityError::UnexpectedParameter(label.clone())),
            }
        }
        (0..g.edge_count())
            .filter(|&i| tree_mask >> i & 1 == 1)
            .map(|i| {
                let label = &g.edges()[i].label;
                let w = self.0.get(label).ok_or_else(|| PositivityError::MissingParameter(label.clone()))?;
                if *w < T::zero() || *w > T::one() {
                    return Err(PositivityError::OutOfRange(label.clone()));
                }
                Ok((i, w.clone()))
            })
            .collect()
    }
}

/// Symmetric vertex-indexed matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakeningMatrix<T> {
    pub vertices: Vec<String>,
    pub entries: Dense<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdReport {
    pub psd: bool,
    pub min_eigenvalue: f64,
}

/// `x_ii = 1`, `x_ij` = smallest parameter on the tree path from `i` to `j`.
pub fn build_weakening_matrix<T: Scalar>(
    g: &Multigraph,
    t: &SpanningTree,
    w: &WeakeningVector<T>,
) -> Result<WeakeningMatrix<T>, PositivityError> {
    let mask = t.checked_mask(g)?;
    let params: BTreeMap<usize, T> = w.per_tree_edge(g, mask)?.into_iter().collect();
    let n = g.vertex_count();
    let mut entries = vec![vec![T::one(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let x = g
                .tree_path_indices(mask, i, j)
                .iter()
                .map(|e| params[e].clone())
                .reduce(|a, b| min_of(&a, &b))
                .unwrap_or_else(T::one);
            entries[i][j] = x.clone();
            entries[j][i] = x;
        }
    }
    Ok(WeakeningMatrix { vertices: g.vertices().to_vec(), entries })
}

/// PSD iff the smallest eigenvalue is at least `-tol * ‖m‖₂`.
pub fn check_psd<T: Scalar>(m: &WeakeningMatrix<T>, tol: f64) -> Result<PsdReport, PositivityError> {
    if !is_symmetric(&m.entries) {
        return Err(PositivityError::NonSymmetric);
    }
    let eigenvalues = symmetric_eigenvalues(&m.entries);
    let Some(&min_eigenvalue) = eigenvalues.first() else {
        return Ok(PsdReport { psd: true, min_eigenvalue: 0.0 });
    };
    let norm = eigenvalues.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    Ok(PsdReport { psd: min_eigenvalue >= -tol * norm, min_eigenvalue })
}

pub const DEFAULT_PSD_TOLERANCE: f64 = 1e-10;

/// Nested vertex partitions `B_1 … B_V` built by adding tree edges in order of
/// decreasing parameter, with barycentric coefficients
/// `w_{σ(k-1)} - w_{σ(k)}` (`w_{σ(0)} = 1`, `w_{σ(V)} = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPartition<T> {
    pub vertices: Vec<String>,
    /// Tree edges in decreasing-parameter order, ties by label.
    pub order: Vec<String>,
    /// `partitions[k]` is `B_{k+1}`, as blocks of vertex indices.
    pub partitions: Vec<Vec<Vec<usize>>>,
    pub coefficients: Vec<T>,
}

impl<T: Scalar> BlockPartition<T> {
    /// 0/1 matrix joining vertices that share a block of `partitions[k]`.
    pub fn block_matrix(&self, k: usize) -> Dense<T> {
        let n = self.vertices.len();
        let mut m = vec![vec![T::zero(); n]; n];
        for block in &self.partitions[k] {
            for &i in block {
                for &j in block {
                    m[i][j] = T::one();
                }
            }
        }
        m
    }

    /// `Σ_k coefficient_k · B_k`.
    pub fn reconstruct(&self) -> Dense<T> {
        let n = self.vertices.len();
        let mut out = vec![vec![T::zero(); n]; n];
        for (k, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for block in &self.partitions[k] {
                for &i in block {
                    for &j in block {
                        out[i][j] = out[i][j].clone() + c.clone();
                    }
                }
            }
        }
        out
    }

    pub fn labeled_partition(&self, k: usize) -> Vec<Vec<String>> {
        self.partitions[k].iter().map(|b| b.iter().map(|&v| self.vertices[v].clone()).collect()).collect()
    }
}

pub fn block_decomposition<T: Scalar>(
    g: &Multigraph,
    t: &SpanningTree,
    w: &WeakeningVector<T>,
) -> Result<BlockPartition<T>, PositivityError> {
    let mask = t.checked_mask(g)?;
    let mut params = w.per_tree_edge(g, mask)?;
    params.sort_by(|(ea, wa), (eb, wb)| {
        wb.partial_cmp(wa).unwrap_or(std::cmp::Ordering::Equal).then_with(|| g.edges()[*ea].label.cmp(&g.edges()[*eb].label))
    });

    let n = g.vertex_count();
    let mut sets = DisjointSets::new(n);
    let mut partitions = vec![blocks_of(&mut sets, n)];
    for &(e, _) in &params {
        let [a, b] = g.edges()[e].ends;
        sets.union(a, b);
        partitions.push(blocks_of(&mut sets, n));
    }

    let mut coefficients = Vec::with_capacity(n);
    let mut previous = T::one();
    for (_, wk) in &params {
        coefficients.push(previous - wk.clone());
        previous = wk.clone();
    }
    coefficients.push(previous);

    Ok(BlockPartition {
        vertices: g.vertices().to_vec(),
        order: params.iter().map(|(e, _)| g.edges()[*e].label.clone()).collect(),
        partitions,
        coefficients,
    })
}

fn blocks_of(sets: &mut DisjointSets, n: usize) -> Vec<Vec<usize>> {
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        by_root.entry(sets.find(v)).or_default().push(v);
    }
    let mut blocks: Vec<Vec<usize>> = by_root.into_values().collect();
    blocks.sort();
    blocks
}

/// Largest entrywise difference, in `f64`.
pub fn residual<T: Scalar>(a: &Dense<T>, b: &Dense<T>) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x.clone() - y.clone()).abs().to_f64_lossy()))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::is_psd_exact;
    use crate::scalar::parse_rational;
    use crate::Rational;

    fn path_example() -> (Multigraph, SpanningTree) {
        let g = Multigraph::new(["A", "B", "C", "D"], [("AB", "A", "B"), ("BC", "B", "C"), ("CD", "C", "D")]).unwrap();
        (g, SpanningTree::new(["AB", "BC", "CD"]))
    }

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn path_tree_matrix() {
        let (g, t) = path_example();
        let w = WeakeningVector::new([("AB", 0.5), ("BC", 0.3), ("CD", 0.8)]);
        let m = build_weakening_matrix(&g, &t, &w).unwrap();
        let x = |a: usize, b: usize| m.entries[a][b];
        assert_eq!(x(0, 2), 0.3);
        assert_eq!(x(0, 3), 0.3);
        assert_eq!(x(1, 3), 0.3);
        assert_eq!(x(0, 1), 0.5);
        assert_eq!(x(2, 3), 0.8);
        assert!((0..4).all(|i| x(i, i) == 1.0));
        let report = check_psd(&m, DEFAULT_PSD_TOLERANCE).unwrap();
        assert!(report.psd && report.min_eigenvalue > 0.0, "{report:?}");
    }

    #[test]
    fn extreme_parameters() {
        let (g, t) = path_example();
        let ones = build_weakening_matrix(&g, &t, &WeakeningVector::new([("AB", 1.0), ("BC", 1.0), ("CD", 1.0)])).unwrap();
        assert!(ones.entries.iter().flatten().all(|&x| x == 1.0));
        let r = check_psd(&ones, DEFAULT_PSD_TOLERANCE).unwrap();
        assert!(r.psd && r.min_eigenvalue.abs() < 1e-12);

        let zeros = build_weakening_matrix(&g, &t, &WeakeningVector::new([("AB", 0.0), ("BC", 0.0), ("CD", 0.0)])).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(zeros.entries[i][j], if i == j { 1.0 } else { 0.0 });
            }
        }
        let r = check_psd(&zeros, DEFAULT_PSD_TOLERANCE).unwrap();
        assert!(r.psd && (r.min_eigenvalue - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parameter_validation() {
        let (g, t) = path_example();
        let missing = WeakeningVector::new([("AB", 0.5), ("BC", 0.3)]);
        assert_eq!(build_weakening_matrix(&g, &t, &missing), Err(PositivityError::MissingParameter("CD".into())));
        let extra = WeakeningVector::new([("AB", 0.5), ("BC", 0.3), ("CD", 0.1), ("XX", 0.2)]);
        assert_eq!(build_weakening_matrix(&g, &t, &extra), Err(PositivityError::UnexpectedParameter("XX".into())));
        let big = WeakeningVector::new([("AB", 1.5), ("BC", 0.3), ("CD", 0.1)]);
        assert_eq!(build_weakening_matrix(&g, &t, &big), Err(PositivityError::OutOfRange("AB".into())));
    }

    #[test]
    fn non_symmetric_rejected() {
        let m = WeakeningMatrix { vertices: vec!["a".into(), "b".into()], entries: vec![vec![1.0, 0.2], vec![0.3, 1.0]] };
        assert_eq!(check_psd(&m, 1e-10), Err(PositivityError::NonSymmetric));
    }

    #[test]
    fn single_edge_decomposition() {
        let g = fixtures::single_edge();
        let t = SpanningTree::new(["l1"]);
        let w = WeakeningVector::new([("l1", q("0.4"))]);
        let b = block_decomposition(&g, &t, &w).unwrap();
        assert_eq!(b.labeled_partition(0), vec![vec!["A".to_string()], vec!["B".to_string()]]);
        assert_eq!(b.labeled_partition(1), vec![vec!["A".to_string(), "B".to_string()]]);
        assert_eq!(b.coefficients, vec![q("0.6"), q("0.4")]);
        let m = build_weakening_matrix(&g, &t, &w).unwrap();
        assert_eq!(m.entries, vec![vec![q("1"), q("0.4")], vec![q("0.4"), q("1")]]);
        assert_eq!(b.reconstruct(), m.entries);
    }

    #[test]
    fn path_example_decomposition_is_exact() {
        let (g, t) = path_example();
        let w = WeakeningVector::new([("AB", q("0.5")), ("BC", q("0.3")), ("CD", q("0.8"))]);
        let b = block_decomposition(&g, &t, &w).unwrap();
        assert_eq!(b.order, ["CD", "AB", "BC"]);
        assert_eq!(b.coefficients, vec![q("0.2"), q("0.3"), q("0.2"), q("0.3")]);
        let m = build_weakening_matrix(&g, &t, &w).unwrap();
        assert_eq!(b.reconstruct(), m.entries);
        assert!(is_psd_exact(&m.entries));
        for k in 0..b.partitions.len() {
            assert_eq!(b.partitions[k].len(), 4 - k);
            assert!(is_psd_exact(&b.block_matrix(k)));
        }
    }

    #[test]
    fn all_ones_puts_everything_on_the_last_block() {
        let (g, t) = path_example();
        let w = WeakeningVector::new([("AB", q("1")), ("BC", q("1")), ("CD", q("1"))]);
        let b = block_decomposition(&g, &t, &w).unwrap();
        assert_eq!(b.coefficients, vec![q("0"), q("0"), q("0"), q("1")]);
        assert_eq!(b.order, ["AB", "BC", "CD"]);
        assert!(b.reconstruct().iter().flatten().all(|x| *x == q("1")));
    }

    #[test]
    fn float_reconstruction_is_close() {
        let g = fixtures::g_eye();
        let t = SpanningTree::new(["l1", "l2", "l5"]);
        let w = WeakeningVector::new([("l1", 0.7), ("l2", 0.25), ("l5", 0.7)]);
        let b = block_decomposition(&g, &t, &w).unwrap();
        let m = build_weakening_matrix(&g, &t, &w).unwrap();
        assert!(residual(&b.reconstruct(), &m.entries) < 1e-15);
    }
}
