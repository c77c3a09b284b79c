use num_bigint::BigInt;
use num_rational::BigRational;

use crate::graph::Multigraph;
use crate::scalar::factorial;

use super::Phi4Error;

/// Perfect matching of the `4n` half-edges of `n` quartic vertices. Half-edge
/// `4v + k` is slot `k` of vertex `v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VacuumGraph {
    pub order: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl VacuumGraph {
    pub fn vertex_of(half_edge: usize) -> usize {
        half_edge / 4
    }

    pub fn half_edge_label(half_edge: usize) -> String {
        format!("x{}.{}", half_edge / 4 + 1, half_edge % 4 + 1)
    }

    /// Vertices `x1..xn`, edge `ek` for the k-th pair.
    pub fn multigraph(&self) -> Multigraph {
        let vertices: Vec<String> = (1..=self.order).map(|v| format!("x{v}")).collect();
        let edges: Vec<(String, String, String)> = self
            .pairs
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| {
                (format!("e{}", k + 1), vertices[Self::vertex_of(a)].clone(), vertices[Self::vertex_of(b)].clone())
            })
            .collect();
        Multigraph::new(vertices, edges).unwrap()
    }

    pub fn is_connected(&self) -> bool {
        self.multigraph().is_connected().unwrap_or(false)
    }
}

/// `(-1/2)ⁿ / n!`, the weight of one labelled pairing at order `n`.
pub fn base_amplitude(order: usize) -> BigRational {
    let sign = if order % 2 == 0 { 1 } else { -1 };
    let denominator = BigInt::from(factorial(order)) * num_traits::pow(BigInt::from(2), order);
    BigRational::new(BigInt::from(sign), denominator)
}

/// All `(4n-1)!!` pairings at order `n`, in lexicographic order.
pub fn generate_vacuum_graphs(order: usize, cap: usize) -> Result<Vec<VacuumGraph>, Phi4Error> {
    if order == 0 {
        return Err(Phi4Error::ZeroOrder);
    }
    if order > cap {
        return Err(Phi4Error::OrderCap { order, cap });
    }
    let mut out = Vec::new();
    let mut used = vec![false; 4 * order];
    pair_up(&mut used, &mut Vec::with_capacity(2 * order), order, &mut out);
    Ok(out)
}

fn pair_up(used: &mut [bool], pairs: &mut Vec<(usize, usize)>, order: usize, out: &mut Vec<VacuumGraph>) {
    let Some(first) = used.iter().position(|&u| !u) else {
        out.push(VacuumGraph { order, pairs: pairs.clone() });
        return;
    };
    used[first] = true;
    for partner in first + 1..used.len() {
        if used[partner] {
            continue;
        }
        used[partner] = true;
        pairs.push((first, partner));
        pair_up(used, pairs, order, out);
        pairs.pop();
        used[partner] = false;
    }
    used[first] = false;
}
