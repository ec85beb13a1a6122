//! Reachability-based m-separation.
//!
//! Works on any graph whose marks are tail/arrow (DAGs and MAGs). The walk
//! relaxation is exact: an m-connecting walk exists iff an m-connecting path
//! does, so BFS over `(node, entering mark)` states decides separation.

use super::{Mark, MixedGraph};
use std::collections::BTreeSet;

pub(super) fn m_separated(g: &MixedGraph, x: usize, y: usize, z: &BTreeSet<usize>) -> bool {
    assert!(x != y, "m-separation is undefined for identical endpoints");
    assert!(
        !z.contains(&x) && !z.contains(&y),
        "conditioning set must exclude the endpoints"
    );
    if g.adjacent(x, y) {
        return false;
    }
    let anc_z = g.ancestors_of_set(z);

    // visited[(node, entering mark)] with marks indexed tail=0, arrow=1
    let mark_idx = |m: Mark| match m {
        Mark::Tail => 0usize,
        Mark::Arrow => 1,
        Mark::Circle => panic!("m-separation is undefined with circle marks"),
    };
    let v = g.node_count();
    let mut visited = vec![[false; 2]; v];
    let mut queue: Vec<(usize, Mark)> = Vec::new();

    for &w in g.adjacency(x) {
        let m_in = g.mark_at(w, x).expect("adjacent");
        if !visited[w][mark_idx(m_in)] {
            visited[w][mark_idx(m_in)] = true;
            queue.push((w, m_in));
        }
    }

    while let Some((node, m_in)) = queue.pop() {
        if node == y {
            return false;
        }
        for &next in g.adjacency(node) {
            let m_out = g.mark_at(node, next).expect("adjacent");
            let collider = m_in == Mark::Arrow && m_out == Mark::Arrow;
            let passes = if collider {
                anc_z[node]
            } else {
                !z.contains(&node)
            };
            if !passes {
                continue;
            }
            let m_next = g.mark_at(next, node).expect("adjacent");
            if !visited[next][mark_idx(m_next)] {
                visited[next][mark_idx(m_next)] = true;
                queue.push((next, m_next));
            }
        }
    }
    true
}
