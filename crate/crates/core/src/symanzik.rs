//! Kirchhoff–Symanzik polynomial `U_G = Σ_T Π_{ℓ∉T} α_ℓ`, its matrix-tree
//! evaluation, and Monte-Carlo estimates of the parametric amplitude
//! `∫ dα e^{-m² Σα} U_G^{-D/2}` for `0 ≤ D < 2`.

use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::graph::{GraphError, Multigraph};
use crate::linalg::determinant;
use crate::mc::{self, Estimate, RunningStats};
use crate::scalar::Scalar;
use crate::weights::{leading_tree_mask, spanning_tree_masks};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AmplitudeError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("dimension {0} outside [0, 2)")]
    Dimension(f64),
    #[error("mass must be positive, got {0}")]
    Mass(f64),
    #[error("sector decomposition over {edges}! sectors exceeds the cap of {cap} edges")]
    SectorCap { edges: usize, cap: usize },
}

/// Multilinear polynomial with unit coefficients. Each monomial is a mask of
/// the edges (variables) it contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymanzikPolynomial {
    pub variables: Vec<String>,
    pub monomials: Vec<u64>,
}

impl SymanzikPolynomial {
    pub fn degree(&self) -> Option<u32> {
        self.monomials.first().map(|m| m.count_ones())
    }

    pub fn monomial_labels(&self) -> Vec<Vec<String>> {
        self.monomials
            .iter()
            .map(|&m| (0..self.variables.len()).filter(|&i| m >> i & 1 == 1).map(|i| self.variables[i].clone()).collect())
            .collect()
    }

    /// Evaluation at `alpha`, indexed like `variables`.
    pub fn evaluate<T: Scalar>(&self, alpha: &[T]) -> T {
        self.monomials.iter().fold(T::zero(), |acc, &m| {
            let term = (0..alpha.len()).filter(|&i| m >> i & 1 == 1).fold(T::one(), |p, i| p * alpha[i].clone());
            acc + term
        })
    }
}

pub fn symanzik_polynomial(g: &Multigraph) -> Result<SymanzikPolynomial, GraphError> {
    let all = g.all_edges_mask();
    let monomials = spanning_tree_masks(g)?.into_iter().map(|t| all & !t).collect();
    Ok(SymanzikPolynomial { variables: g.edges().iter().map(|e| e.label.clone()).collect(), monomials })
}

/// `Σ_T Π_{ℓ∈T} α_ℓ` as the first-row/column cofactor of the weighted
/// Laplacian. Self-loops are ignored; a disconnected graph gives zero.
pub fn weighted_tree_sum<T: Scalar>(g: &Multigraph, alpha: &[T]) -> T {
    let n = g.vertex_count();
    if n <= 1 {
        return T::one();
    }
    let mut lap = vec![vec![T::zero(); n]; n];
    for (e, a) in g.edges().iter().zip(alpha) {
        let [u, v] = e.ends;
        if u == v {
            continue;
        }
        lap[u][u] = lap[u][u].clone() + a.clone();
        lap[v][v] = lap[v][v].clone() + a.clone();
        lap[u][v] = lap[u][v].clone() - a.clone();
        lap[v][u] = lap[v][u].clone() - a.clone();
    }
    let minor: Vec<Vec<T>> = lap[1..].iter().map(|row| row[1..].to_vec()).collect();
    determinant(minor)
}

/// Number of spanning trees.
pub fn spanning_tree_count<T: Scalar>(g: &Multigraph) -> T {
    weighted_tree_sum(g, &vec![T::one(); g.edge_count()])
}

/// `U_G(α)` through the matrix tree theorem with the complement transform
/// `U = (Π_ℓ α_ℓ) · Σ_T Π_{ℓ∈T} α_ℓ^{-1}`. Non-loop `α` must be nonzero.
pub fn symanzik_via_matrix_tree<T: Scalar>(g: &Multigraph, alpha: &[T]) -> T {
    let inverse: Vec<T> =
        g.edges().iter().zip(alpha).map(|(e, a)| if e.is_self_loop() { T::one() } else { T::one() / a.clone() }).collect();
    let product = alpha.iter().fold(T::one(), |p, a| p * a.clone());
    product * weighted_tree_sum(g, &inverse)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub dimension: f64,
    pub mass: f64,
    pub coupling: f64,
}

impl ModelParams {
    pub fn new(dimension: f64, mass: f64) -> Self {
        ModelParams { dimension, mass, coupling: 0.0 }
    }

    fn validate(&self) -> Result<(), AmplitudeError> {
        if !(0.0..2.0).contains(&self.dimension) {
            return Err(AmplitudeError::Dimension(self.dimension));
        }
        if self.mass <= 0.0 || !self.mass.is_finite() {
            return Err(AmplitudeError::Mass(self.mass));
        }
        Ok(())
    }
}

/// Closed form of the two-edge bubble, `Γ(2 - D/2) m^{D-4}`.
pub fn bubble_amplitude(params: ModelParams) -> f64 {
    gamma(2.0 - params.dimension / 2.0) * params.mass.powf(params.dimension - 4.0)
}

/// Integrand evaluator: self-loop parameters multiply the Symanzik
/// polynomial of the loop-free graph.
struct Integrand {
    loops: Vec<usize>,
    reduced: Vec<usize>,
    monomials: Vec<u64>,
    half_dim: f64,
    scale: f64,
}

impl Integrand {
    fn new(g: &Multigraph, params: ModelParams) -> Result<Self, AmplitudeError> {
        params.validate()?;
        g.require_connected()?;
        let loops: Vec<usize> = (0..g.edge_count()).filter(|&i| g.edges()[i].is_self_loop()).collect();
        let reduced: Vec<usize> = (0..g.edge_count()).filter(|&i| !g.edges()[i].is_self_loop()).collect();
        let mut loop_free = g.clone();
        for &i in loops.iter().rev() {
            loop_free = loop_free.delete_index(i);
        }
        let poly = symanzik_polynomial(&loop_free)?;
        Ok(Integrand {
            loops,
            reduced,
            monomials: poly.monomials,
            half_dim: params.dimension / 2.0,
            scale: params.mass.powi(-2 * g.edge_count() as i32),
        })
    }

    fn symanzik(&self, alpha: &[f64]) -> f64 {
        let loop_part: f64 = self.loops.iter().map(|&i| alpha[i]).product();
        let tree_part: f64 = self
            .monomials
            .iter()
            .map(|&m| {
                self.reduced.iter().enumerate().filter(|&(k, _)| m >> k & 1 == 1).map(|(_, &i)| alpha[i]).product::<f64>()
            })
            .sum();
        loop_part * tree_part
    }

    fn value(&self, alpha: &[f64]) -> f64 {
        if self.half_dim == 0.0 {
            return self.scale;
        }
        self.scale * self.symanzik(alpha).powf(-self.half_dim)
    }
}

/// Importance sampling with each `α_ℓ` drawn from `m² e^{-m² α}`.
pub fn amplitude_parametric(g: &Multigraph, params: ModelParams, samples: u64, seed: u64) -> Result<Estimate, AmplitudeError> {
    let integrand = Integrand::new(g, params)?;
    let exp = Exp::new(params.mass * params.mass).map_err(|_| AmplitudeError::Mass(params.mass))?;
    let e = g.edge_count();
    Ok(mc::sample(samples.max(1), seed, |rng| {
        let alpha: Vec<f64> = (0..e).map(|_| exp.sample(rng)).collect();
        integrand.value(&alpha)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorEstimate {
    pub estimate: Estimate,
    pub sectors: u64,
    pub samples_per_sector: u64,
    /// Samples where the leading tree's complement was not the largest monomial.
    pub leading_monomial_mismatches: u64,
}

/// Same integral split over Hepp sectors. In sector `σ` the parameters are
/// increasing along `σ` (`α_{σ(1)}` smallest); a sorted exponential sample
/// has density `E!` times the product density on that region, so each
/// sector mean carries weight `1/E!`. Each sample also checks that the
/// complement of the sector's leading tree is the dominant monomial of `U_G`.
pub fn amplitude_sector_decomposed(
    g: &Multigraph,
    params: ModelParams,
    samples: u64,
    seed: u64,
    cap: usize,
) -> Result<SectorEstimate, AmplitudeError> {
    let e = g.edge_count();
    if e > cap {
        return Err(AmplitudeError::SectorCap { edges: e, cap });
    }
    let integrand = Integrand::new(g, params)?;
    let exp = Exp::new(params.mass * params.mass).map_err(|_| AmplitudeError::Mass(params.mass))?;
    let all = g.all_edges_mask();
    let full_monomials: Vec<u64> = spanning_tree_masks(g)?.into_iter().map(|t| all & !t).collect();

    let mut sectors: Vec<Vec<usize>> = Vec::new();
    let mut p: Vec<usize> = (0..e).collect();
    loop {
        sectors.push(p.clone());
        let Some(i) = (1..e).rev().find(|&i| p[i - 1] < p[i]) else { break };
        let j = (i..e).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    let count = sectors.len() as u64;
    let per_sector = samples.div_ceil(count).max(2);

    let results: Vec<(RunningStats, u64)> = sectors
        .par_iter()
        .enumerate()
        .map(|(k, order)| {
            let leading = all & !leading_tree_mask(g, order).0;
            let mut rng = mc::stream_rng(seed, k as u64);
            let mut stats = RunningStats::default();
            let mut mismatches = 0u64;
            let mut draws = vec![0.0f64; e];
            let mut alpha = vec![0.0f64; e];
            for _ in 0..per_sector {
                for d in draws.iter_mut() {
                    *d = exp.sample(&mut rng);
                }
                draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
                for (rank, &edge) in order.iter().enumerate() {
                    alpha[edge] = draws[rank];
                }
                stats.push(integrand.value(&alpha));
                let monomial = |m: u64| (0..e).filter(|&i| m >> i & 1 == 1).map(|i| alpha[i]).product::<f64>();
                let top = full_monomials.iter().map(|&m| monomial(m)).fold(f64::NEG_INFINITY, f64::max);
                if monomial(leading) < top {
                    mismatches += 1;
                }
            }
            (stats, mismatches)
        })
        .collect();

    // Running mean over sector means, exact when they all coincide.
    let mut mean = 0.0f64;
    let mut variance_sum = 0.0f64;
    let mut mismatches = 0u64;
    for (k, (stats, bad)) in results.iter().enumerate() {
        mean += (stats.mean() - mean) / (k + 1) as f64;
        variance_sum += stats.variance() / stats.count() as f64;
        mismatches += bad;
    }
    let std_error = variance_sum.sqrt() / count as f64;
    Ok(SectorEstimate {
        estimate: Estimate { estimate: mean, std_error, samples: per_sector * count },
        sectors: count,
        samples_per_sector: per_sector,
        leading_monomial_mismatches: mismatches,
    })
}
