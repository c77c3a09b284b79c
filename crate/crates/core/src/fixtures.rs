//! Named example graphs. The same graphs ship as JSON under `fixtures/`.

use crate::graph::Multigraph;

/// Four-vertex, six-edge graph with twelve spanning trees:
/// `l1=AB, l2=CD, l3=AC, l4=BD, l5=BC, l6=BC`.
///
/// Reconstructed from its spanning-tree list and tree-path structure, not
/// copied from a drawing.
pub fn g_eye() -> Multigraph {
    Multigraph::new(
        ["A", "B", "C", "D"],
        [
            ("l1", "A", "B"),
            ("l2", "C", "D"),
            ("l3", "A", "C"),
            ("l4", "B", "D"),
            ("l5", "B", "C"),
            ("l6", "B", "C"),
        ],
    )
    .unwrap()
}

/// Two vertices joined by `l1` and `l2`.
pub fn bubble() -> Multigraph {
    Multigraph::new(["A", "B"], [("l1", "A", "B"), ("l2", "A", "B")]).unwrap()
}

pub fn triangle() -> Multigraph {
    Multigraph::new(["a", "b", "c"], [("ab", "a", "b"), ("bc", "b", "c"), ("ca", "c", "a")]).unwrap()
}

pub fn single_edge() -> Multigraph {
    Multigraph::new(["A", "B"], [("l1", "A", "B")]).unwrap()
}

/// Vertex `A` with self-loop `t` and pendant edge `p` to `B`.
pub fn tadpole() -> Multigraph {
    Multigraph::new(["A", "B"], [("t", "A", "A"), ("p", "A", "B")]).unwrap()
}

/// Cycle on `n ≥ 1` vertices `v1..vn` with edges `e1..en`, `ek = vk v(k+1)`.
/// `n = 1` is a single self-loop and `n = 2` a double edge.
pub fn cycle(n: usize) -> Multigraph {
    assert!(n >= 1, "cycle needs at least one vertex");
    let vertices: Vec<String> = (1..=n).map(|k| format!("v{k}")).collect();
    let edges: Vec<(String, String, String)> = (0..n)
        .map(|k| (format!("e{}", k + 1), vertices[k].clone(), vertices[(k + 1) % n].clone()))
        .collect();
    Multigraph::new(vertices, edges).unwrap()
}

/// Path `v1 - v2 - … - vn` with edges `e1..e(n-1)`.
pub fn path(n: usize) -> Multigraph {
    assert!(n >= 1);
    let vertices: Vec<String> = (1..=n).map(|k| format!("v{k}")).collect();
    let edges: Vec<(String, String, String)> =
        (0..n - 1).map(|k| (format!("e{}", k + 1), vertices[k].clone(), vertices[k + 1].clone())).collect();
    Multigraph::new(vertices, edges).unwrap()
}

/// Every named fixture with the file stem it is stored under.
pub fn named() -> Vec<(String, Multigraph)> {
    let mut out = vec![
        ("g_eye".to_string(), g_eye()),
        ("bubble".to_string(), bubble()),
        ("triangle".to_string(), triangle()),
        ("tadpole".to_string(), tadpole()),
        ("single_edge".to_string(), single_edge()),
    ];
    out.extend((1..=6).map(|n| (format!("cycle{n}"), cycle(n))));
    out
}
