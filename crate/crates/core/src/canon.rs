//! Canonical forms for multigraphs with a marked edge subset.
//!
//! Colour refinement on vertices followed by individualisation and
//! backtracking over every remaining choice. The search is exhaustive (no
//! automorphism pruning), which is affordable for the desk-scale graphs this
//! crate handles and keeps the form exact: two (graph, marked) pairs share a
//! key iff they are isomorphic.

use std::fmt::Write as _;

use crate::graph::Multigraph;

/// Canonical edge list: vertices renumbered `0..n`, each edge as
/// `(low, high, marked)`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize, bool)>,
}

impl CanonicalForm {
    /// Stable textual rendering, e.g. `v3:0-1*,1-2*,1-2`. Marked edges carry `*`.
    pub fn render(&self) -> String {
        let mut s = format!("v{}:", self.vertex_count);
        for (k, &(a, b, marked)) in self.edges.iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            write!(s, "{a}-{b}").unwrap();
            if marked {
                s.push('*');
            }
        }
        s
    }

    pub fn key(&self) -> CanonicalKey {
        CanonicalKey(self.render().into_bytes())
    }
}

/// Byte-string key; equal for isomorphic (graph, marked) pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(pub Vec<u8>);

impl CanonicalKey {
    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).expect("keys are ASCII")
    }
}

pub fn canonical_key(g: &Multigraph, marked: u64) -> CanonicalKey {
    canonical_form(g, marked).key()
}

pub fn canonical_form(g: &Multigraph, marked: u64) -> CanonicalForm {
    let n = g.vertex_count();
    let edges: Vec<(usize, usize, bool)> =
        g.edges().iter().enumerate().map(|(i, e)| (e.ends[0], e.ends[1], marked >> i & 1 == 1)).collect();

    let mut incident: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    let mut loops = vec![(0usize, 0usize); n];
    for &(a, b, m) in &edges {
        if a == b {
            if m {
                loops[a].0 += 1;
            } else {
                loops[a].1 += 1;
            }
        } else {
            incident[a].push((b, m));
            incident[b].push((a, m));
        }
    }

    let initial = rank_by(&loops);
    let search = Search { incident: &incident, edges: &edges };
    let colors = search.refine(initial);
    let mut best: Option<CanonicalForm> = None;
    search.descend(colors, &mut best);
    best.unwrap_or(CanonicalForm { vertex_count: 0, edges: Vec::new() })
}

struct Search<'a> {
    incident: &'a [Vec<(usize, bool)>],
    edges: &'a [(usize, usize, bool)],
}

impl Search<'_> {
    /// Iterated refinement until the number of colour classes stops growing.
    /// New colours sort first by old colour, so class order is preserved.
    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        let mut classes = distinct(&colors);
        loop {
            let signatures: Vec<(usize, Vec<(usize, bool)>)> = (0..colors.len())
                .map(|v| {
                    let mut nb: Vec<(usize, bool)> = self.incident[v].iter().map(|&(w, m)| (colors[w], m)).collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            colors = rank_by(&signatures);
            let now = distinct(&colors);
            if now == classes {
                return colors;
            }
            classes = now;
        }
    }

    fn descend(&self, colors: Vec<usize>, best: &mut Option<CanonicalForm>) {
        let n = colors.len();
        // Smallest colour whose class is not a singleton.
        let mut counts = vec![0usize; n];
        for &c in &colors {
            counts[c] += 1;
        }
        let Some(target) = (0..n).find(|&c| counts[c] > 1) else {
            let form = self.certificate(&colors);
            if best.as_ref().is_none_or(|b| form < *b) {
                *best = Some(form);
            }
            return;
        };
        for v in (0..n).filter(|&v| colors[v] == target) {
            let split: Vec<usize> = colors
                .iter()
                .enumerate()
                .map(|(w, &c)| 2 * c + usize::from(c == target && w != v))
                .collect();
            self.descend(self.refine(rank_by(&split)), best);
        }
    }

    fn certificate(&self, perm: &[usize]) -> CanonicalForm {
        let mut edges: Vec<(usize, usize, bool)> = self
            .edges
            .iter()
            .map(|&(a, b, m)| {
                let (x, y) = (perm[a], perm[b]);
                (x.min(y), x.max(y), m)
            })
            .collect();
        edges.sort_unstable();
        CanonicalForm { vertex_count: perm.len(), edges }
    }
}

fn distinct(colors: &[usize]) -> usize {
    let mut seen = colors.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// Dense ranks `0..k` of `items` under their natural order.
fn rank_by<T: Ord + Clone>(items: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = items.to_vec();
    sorted.sort();
    sorted.dedup();
    items.iter().map(|x| sorted.binary_search(x).unwrap()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn mask(g: &Multigraph, labels: &[&str]) -> u64 {
        g.edge_mask(labels.iter().copied()).unwrap()
    }

    #[test]
    fn edge_order_does_not_matter() {
        let g = fixtures::g_eye();
        let mut edges: Vec<(String, String, String)> = g
            .edges()
            .iter()
            .map(|e| {
                let (a, b) = g.endpoint_labels(e);
                (e.label.clone(), b.to_string(), a.to_string())
            })
            .collect();
        edges.reverse();
        let h = Multigraph::new(g.vertices().to_vec(), edges).unwrap();
        let t = ["l1", "l2", "l3"];
        assert_eq!(canonical_key(&g, mask(&g, &t)), canonical_key(&h, mask(&h, &t)));
    }

    #[test]
    fn isomorphic_relabeling_collides() {
        let g = fixtures::g_eye();
        // A->W, B->X, C->Y, D->Z with vertices listed in a different order.
        let h = Multigraph::new(
            ["Z", "Y", "X", "W"],
            [
                ("m6", "X", "Y"),
                ("m1", "W", "X"),
                ("m4", "X", "Z"),
                ("m3", "W", "Y"),
                ("m5", "Y", "X"),
                ("m2", "Y", "Z"),
            ],
        )
        .unwrap();
        assert_eq!(canonical_key(&g, mask(&g, &["l1", "l2", "l3"])), canonical_key(&h, mask(&h, &["m1", "m2", "m3"])));
        // A<->D, B<->C maps l1<->l2 and l3<->l4, so T_123 and T_124 are isomorphic.
        assert_eq!(canonical_key(&g, mask(&g, &["l1", "l2", "l3"])), canonical_key(&g, mask(&g, &["l1", "l2", "l4"])));
    }

    #[test]
    fn different_tree_shapes_differ() {
        let g = fixtures::g_eye();
        assert_ne!(canonical_key(&g, mask(&g, &["l1", "l2", "l3"])), canonical_key(&g, mask(&g, &["l1", "l2", "l5"])));
        assert_ne!(canonical_key(&g, 0), canonical_key(&g, mask(&g, &["l1"])));
    }

    #[test]
    fn regular_graphs_are_handled() {
        // Cycles are vertex-transitive; refinement alone never splits them.
        let a = fixtures::cycle(6);
        let b = Multigraph::new(
            ["p", "q", "r", "s", "t", "u"],
            [("1", "p", "r"), ("2", "r", "t"), ("3", "t", "q"), ("4", "q", "s"), ("5", "s", "u"), ("6", "u", "p")],
        )
        .unwrap();
        assert_eq!(canonical_key(&a, 0), canonical_key(&b, 0));
        assert_eq!(canonical_key(&a, 0b11), canonical_key(&b, 0b110000));
        assert_ne!(canonical_key(&a, 0b101), canonical_key(&b, 0b11));
    }

    #[test]
    fn loops_and_multiplicities_are_seen() {
        let loop_a = Multigraph::new(["A", "B"], [("p", "A", "B"), ("t", "A", "A")]).unwrap();
        let loop_b = Multigraph::new(["A", "B"], [("p", "A", "B"), ("t", "B", "B")]).unwrap();
        let double = Multigraph::new(["A", "B"], [("p", "A", "B"), ("t", "A", "B")]).unwrap();
        assert_eq!(canonical_key(&loop_a, 0b01), canonical_key(&loop_b, 0b01));
        assert_ne!(canonical_key(&loop_a, 0), canonical_key(&double, 0));
        assert_eq!(canonical_key(&loop_a, 0b01).as_str(), "v2:0-1*,1-1");
    }
}
