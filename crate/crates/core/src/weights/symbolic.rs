use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::graph::{Multigraph, SpanningTree};

use super::{cycle_paths, ConstructiveWeight, WeightError};

/// `∫_{0<x_1<…<x_n<1} Π x_k^{c_k} dx = Π_k 1 / (c_1 + … + c_k + k)`.
pub fn simplex_monomial_integral(exponents: &[u32]) -> BigRational {
    let mut partial = 0u64;
    let mut denominator = BigUint::one();
    for (k, &c) in exponents.iter().enumerate() {
        partial += u64::from(c);
        denominator *= BigUint::from(partial + k as u64 + 1);
    }
    BigRational::new(BigInt::one(), denominator.into())
}

/// Exact value of `∫_{[0,1]^{T}} Π_{ℓ∉T} min_{ℓ'∈P_ℓ} w_{ℓ'}`, computed by
/// splitting the cube into the `(V-1)!` orderings of the tree parameters.
/// Inside one ordering every minimum is the path edge ranked lowest, so the
/// integrand is a monomial. Self-loops contribute a factor 1.
pub fn weight_symbolic(g: &Multigraph, t: &SpanningTree, cap: usize) -> Result<ConstructiveWeight, WeightError> {
    g.require_connected()?;
    let mask = t.checked_mask(g)?;
    let n = g.vertex_count() - 1;
    if n > cap {
        return Err(WeightError::SymbolicCap { tree_edges: n, cap });
    }
    let (_, paths) = cycle_paths(g, mask);

    // rank[p] = position of tree edge p in the increasing order of parameters.
    let mut monomials: HashMap<Vec<u32>, u64> = HashMap::new();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rank = vec![0usize; n];
    loop {
        for (k, &p) in order.iter().enumerate() {
            rank[p] = k;
        }
        let mut exponents = vec![0u32; n];
        for path in &paths {
            let lowest = path.iter().map(|&p| rank[p]).min().expect("non-loop edges have nonempty paths");
            exponents[lowest] += 1;
        }
        *monomials.entry(exponents).or_insert(0) += 1;
        if !next_permutation(&mut order) {
            break;
        }
    }

    let mut terms: Vec<(Vec<u32>, u64)> = monomials.into_iter().collect();
    terms.sort();
    let value = terms.iter().fold(BigRational::zero(), |acc, (exps, mult)| {
        acc + simplex_monomial_integral(exps) * BigRational::from_integer(BigInt::from(*mult))
    });
    Ok(ConstructiveWeight::from_value(value, g.edge_count()))
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Iterated integration of a monomial over the ordered simplex, done
    /// with explicit antiderivatives: an independent route to the product formula.
    fn iterated_integral(exponents: &[u32]) -> BigRational {
        // Integrate x_1 from 0 to x_2, then x_2 from 0 to x_3, …; the running
        // integrand is coeff * x^power.
        let mut coeff = BigRational::one();
        let mut power = 0u32;
        for &c in exponents {
            power += c;
            coeff /= BigRational::from_integer(BigInt::from(power + 1));
            power += 1;
        }
        coeff
    }

    #[test]
    fn displayed_simplex_integrals() {
        assert_eq!(simplex_monomial_integral(&[3, 0, 0]), q(1, 120));
        assert_eq!(simplex_monomial_integral(&[1, 1, 1]), q(1, 48));
        // w2 < w1 < w3 with integrand w1^2 w2.
        assert_eq!(simplex_monomial_integral(&[1, 2, 0]), q(1, 60));
        // w2 < w3 < w1 with integrand w3^2 w2.
        assert_eq!(simplex_monomial_integral(&[1, 2, 0]), q(1, 60));
        assert_eq!(simplex_monomial_integral(&[]), q(1, 1));
        assert_eq!(simplex_monomial_integral(&[0, 0, 0, 0]), q(1, 24));
    }

    #[test]
    fn product_formula_matches_iterated_integration() {
        for exps in [[0u32, 0, 0], [3, 0, 0], [0, 0, 3], [1, 2, 0], [2, 1, 4], [5, 0, 1]] {
            assert_eq!(simplex_monomial_integral(&exps), iterated_integral(&exps));
        }
    }

    #[test]
    fn g_eye_symbolic() {
        let g = fixtures::g_eye();
        let w = weight_symbolic(&g, &SpanningTree::new(["l1", "l2", "l3"]), 9).unwrap();
        assert_eq!(w.value, q(1, 120) * q(4, 1) + q(1, 60) * q(2, 1));
        assert_eq!(w.value, q(1, 15));
        assert_eq!(w.sector_count, BigUint::from(48u32));
        let w = weight_symbolic(&g, &SpanningTree::new(["l1", "l2", "l5"]), 9).unwrap();
        assert_eq!(w.value, q(1, 48) * q(2, 1) + q(1, 120) * q(2, 1) + q(1, 60) * q(2, 1));
        assert_eq!(w.value, q(11, 120));
    }

    #[test]
    fn extra_self_loop_keeps_weight() {
        let g = fixtures::g_eye();
        let mut edges: Vec<(String, String, String)> = g
            .edges()
            .iter()
            .map(|e| {
                let (a, b) = g.endpoint_labels(e);
                (e.label.clone(), a.to_string(), b.to_string())
            })
            .collect();
        edges.push(("t".into(), "C".into(), "C".into()));
        let h = Multigraph::new(g.vertices().to_vec(), edges).unwrap();
        let t = SpanningTree::new(["l1", "l2", "l5"]);
        let with = weight_symbolic(&h, &t, 9).unwrap();
        assert_eq!(with.value, q(11, 120));
        assert_eq!(with.sector_count, BigUint::from(66u32 * 7));
    }

    #[test]
    fn symbolic_cap() {
        let g = fixtures::path(5);
        let t = SpanningTree::new(["e1", "e2", "e3", "e4"]);
        assert_eq!(weight_symbolic(&g, &t, 3), Err(WeightError::SymbolicCap { tree_edges: 4, cap: 3 }));
        assert_eq!(weight_symbolic(&g, &t, 4).unwrap().value, q(1, 1));
    }
}
