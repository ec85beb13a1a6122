//! MAG → PAG conversion.
//!
//! Starts from the skeleton with all circles, copies the MAG's unshielded
//! colliders (their status is invariant across a Markov equivalence class),
//! then runs the complete orientation rule set for graphs without selection
//! bias to a fixpoint: arrowhead rules R1–R4 and tail rules R8–R10. The
//! discriminating-path rule decides its branch from the input MAG, which is
//! equivalent to consulting a separating set. Output marks are tail or
//! arrow exactly where the whole equivalence class agrees; the brute-force
//! consensus in [`super::bruteforce::consensus_pag`] certifies this in the
//! test suites.

use super::{validate_mag, GraphError, GraphKind, Mark, MixedGraph};

/// Cap on path-search work per rule application. Graphs small enough for
/// exact certification never get near it; on very large graphs an exceeded
/// budget leaves a circle that sound rules might have oriented, which is
/// conservative.
const SEARCH_BUDGET: usize = 1_000_000;

pub fn mag_to_pag(m: &MixedGraph) -> Result<MixedGraph, GraphError> {
    let check = validate_mag(m);
    if !check.is_valid() {
        return Err(GraphError::NotAMag(check.describe(m).join("; ")));
    }

    let mut p = MixedGraph::new(GraphKind::Pag, m.node_names().iter().cloned())?;
    for (i, j, _, _) in m.edge_list() {
        p.set_edge(i, j, Mark::Circle, Mark::Circle);
    }

    // Unshielded colliders carry over from the MAG.
    for t in p.unshielded_triples() {
        if m.mark_at(t.c, t.a) == Some(Mark::Arrow) && m.mark_at(t.c, t.b) == Some(Mark::Arrow) {
            set_mark(&mut p, t.a, t.c, Mark::Arrow);
            set_mark(&mut p, t.b, t.c, Mark::Arrow);
        }
    }

    loop {
        let changed = rule_r1(&mut p)
            || rule_r2(&mut p)
            || rule_r3(&mut p)
            || rule_r4(&mut p, m)
            || rule_r8(&mut p)
            || rule_r9(&mut p)
            || rule_r10(&mut p);
        if !changed {
            break;
        }
    }
    Ok(p)
}

/// Sets the mark at `node` on the edge between `other` and `node`.
fn set_mark(p: &mut MixedGraph, other: usize, node: usize, mark: Mark) -> bool {
    let (m_other, m_node) = p.edge(other, node).expect("edge exists");
    if m_node == mark {
        return false;
    }
    p.set_edge(other, node, m_other, mark);
    true
}

fn arrow_at(p: &MixedGraph, node: usize, from: usize) -> bool {
    p.mark_at(node, from) == Some(Mark::Arrow)
}

fn circle_at(p: &MixedGraph, node: usize, towards: usize) -> bool {
    p.mark_at(node, towards) == Some(Mark::Circle)
}

/// R1: a*→b ∘–* c with a, c non-adjacent orients b → c.
fn rule_r1(p: &mut MixedGraph) -> bool {
    for b in 0..p.node_count() {
        let neigh: Vec<usize> = p.adjacency(b).iter().copied().collect();
        for &a in &neigh {
            if !arrow_at(p, b, a) {
                continue;
            }
            for &c in &neigh {
                if c == a || p.adjacent(a, c) || !circle_at(p, b, c) {
                    continue;
                }
                set_mark(p, c, b, Mark::Tail);
                set_mark(p, b, c, Mark::Arrow);
                return true;
            }
        }
    }
    false
}

/// R2: (a → b *→ c) or (a *→ b → c) with a *–∘ c puts an arrowhead at c.
fn rule_r2(p: &mut MixedGraph) -> bool {
    for a in 0..p.node_count() {
        let neigh_a: Vec<usize> = p.adjacency(a).iter().copied().collect();
        for &c in &neigh_a {
            if !circle_at(p, c, a) {
                continue;
            }
            for &b in &neigh_a {
                if b == c || !p.adjacent(b, c) {
                    continue;
                }
                let first = p.has_directed(a, b) && arrow_at(p, c, b);
                let second = arrow_at(p, b, a) && p.has_directed(b, c);
                if first || second {
                    set_mark(p, a, c, Mark::Arrow);
                    return true;
                }
            }
        }
    }
    false
}

/// R3: a*→b←*c, a *–∘ d ∘–* c with a, c non-adjacent and d *–∘ b puts an
/// arrowhead at b on the d–b edge.
fn rule_r3(p: &mut MixedGraph) -> bool {
    for d in 0..p.node_count() {
        let neigh_d: Vec<usize> = p.adjacency(d).iter().copied().collect();
        for &b in &neigh_d {
            if !circle_at(p, b, d) {
                continue;
            }
            for &a in &neigh_d {
                if a == b || !circle_at(p, d, a) || !p.adjacent(a, b) || !arrow_at(p, b, a) {
                    continue;
                }
                for &c in &neigh_d {
                    if c == b || c == a || !circle_at(p, d, c) {
                        continue;
                    }
                    if p.adjacent(a, c) || !p.adjacent(c, b) || !arrow_at(p, b, c) {
                        continue;
                    }
                    set_mark(p, d, b, Mark::Arrow);
                    return true;
                }
            }
        }
    }
    false
}

/// R4: for a discriminating path <d, …, a, b, c> with a circle at b on the
/// b–c edge, orient b → c when b is a non-collider on the path in the input
/// MAG, and a ↔ b ↔ c when it is a collider. The MAG's own marks stand in
/// for the sepset query: on a discriminating path, b's collider status is
/// invariant across the equivalence class.
fn rule_r4(p: &mut MixedGraph, m: &MixedGraph) -> bool {
    for c in 0..p.node_count() {
        let neigh_c: Vec<usize> = p.adjacency(c).iter().copied().collect();
        for &b in &neigh_c {
            if !circle_at(p, b, c) {
                continue;
            }
            if let Some(a) = find_discriminating_path(p, b, c) {
                let b_collider_in_m =
                    m.mark_at(b, a) == Some(Mark::Arrow) && m.mark_at(b, c) == Some(Mark::Arrow);
                if b_collider_in_m {
                    set_mark(p, a, b, Mark::Arrow);
                    set_mark(p, b, a, Mark::Arrow);
                    set_mark(p, c, b, Mark::Arrow);
                    set_mark(p, b, c, Mark::Arrow);
                } else {
                    set_mark(p, c, b, Mark::Tail);
                    set_mark(p, b, c, Mark::Arrow);
                }
                return true;
            }
        }
    }
    false
}

/// Searches for a discriminating path <d, …, a, b, c> and returns the node
/// `a` adjacent to `b` on it. Interior nodes between d and b must be
/// colliders on the path and parents of c; d must not be adjacent to c.
fn find_discriminating_path(p: &MixedGraph, b: usize, c: usize) -> Option<usize> {
    let mut budget = SEARCH_BUDGET;
    // Each queue entry is the path tail [b, a1, ..., front]; c is implicit.
    let mut queue: Vec<Vec<usize>> = Vec::new();
    for &a in p.adjacency(b) {
        if a == c || !arrow_at(p, a, b) || !p.has_directed(a, c) {
            continue;
        }
        queue.push(vec![b, a]);
    }
    while let Some(path) = queue.pop() {
        if budget == 0 {
            return None;
        }
        budget -= 1;
        let front = *path.last().unwrap();
        for &y in p.adjacency(front) {
            if y == c || path.contains(&y) {
                continue;
            }
            // front's interior collider status needs an arrowhead from y
            if !arrow_at(p, front, y) {
                continue;
            }
            if !p.adjacent(y, c) {
                return Some(path[1]);
            }
            if p.has_directed(y, c) && arrow_at(p, y, front) {
                let mut longer = path.clone();
                longer.push(y);
                queue.push(longer);
            }
        }
    }
    None
}

/// R8: a → b → c with a ∘→ c orients the tail at a.
fn rule_r8(p: &mut MixedGraph) -> bool {
    for a in 0..p.node_count() {
        let neigh_a: Vec<usize> = p.adjacency(a).iter().copied().collect();
        for &c in &neigh_a {
            if !(circle_at(p, a, c) && arrow_at(p, c, a)) {
                continue;
            }
            for &b in &neigh_a {
                if b != c && p.has_directed(a, b) && p.has_directed(b, c) {
                    set_mark(p, c, a, Mark::Tail);
                    return true;
                }
            }
        }
    }
    false
}

/// True iff the edge u–v could be oriented u → v (no arrow at u, no tail at v).
fn potentially_directed(p: &MixedGraph, u: usize, v: usize) -> bool {
    p.mark_at(u, v) != Some(Mark::Arrow) && p.mark_at(v, u) != Some(Mark::Tail)
}

/// Depth-first search for an uncovered potentially directed path
/// a – first – … – target (consecutive triple endpoints non-adjacent).
fn uncovered_pd_path_exists(
    p: &MixedGraph,
    a: usize,
    first: usize,
    target: usize,
    budget: &mut usize,
) -> bool {
    if !potentially_directed(p, a, first) {
        return false;
    }
    if first == target {
        return true;
    }
    let mut on_path = vec![false; p.node_count()];
    on_path[a] = true;
    on_path[first] = true;
    fn dfs(
        p: &MixedGraph,
        prev: usize,
        cur: usize,
        target: usize,
        on_path: &mut [bool],
        budget: &mut usize,
    ) -> bool {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        for &next in p.adjacency(cur) {
            if on_path[next] || p.adjacent(prev, next) || !potentially_directed(p, cur, next) {
                continue;
            }
            if next == target {
                return true;
            }
            on_path[next] = true;
            if dfs(p, cur, next, target, on_path, budget) {
                return true;
            }
            on_path[next] = false;
        }
        false
    }
    dfs(p, a, first, target, &mut on_path, budget)
}

/// R9: a ∘→ c with an uncovered potentially directed path a–b–…–c whose
/// second node b is not adjacent to c orients the tail at a.
fn rule_r9(p: &mut MixedGraph) -> bool {
    for a in 0..p.node_count() {
        let neigh_a: Vec<usize> = p.adjacency(a).iter().copied().collect();
        for &c in &neigh_a {
            if !(circle_at(p, a, c) && arrow_at(p, c, a)) {
                continue;
            }
            let mut budget = SEARCH_BUDGET;
            for &b in &neigh_a {
                if b == c || p.adjacent(b, c) {
                    continue;
                }
                if uncovered_pd_path_exists(p, a, b, c, &mut budget) {
                    set_mark(p, c, a, Mark::Tail);
                    return true;
                }
            }
        }
    }
    false
}

/// R10: a ∘→ c, two parents b → c and d → c reachable from a by uncovered
/// potentially directed paths whose first steps μ, ω are distinct and
/// non-adjacent orients the tail at a.
fn rule_r10(p: &mut MixedGraph) -> bool {
    for a in 0..p.node_count() {
        let neigh_a: Vec<usize> = p.adjacency(a).iter().copied().collect();
        for &c in &neigh_a {
            if !(circle_at(p, a, c) && arrow_at(p, c, a)) {
                continue;
            }
            let parents: Vec<usize> = p
                .parents(c)
                .into_iter()
                .filter(|&x| x != a)
                .collect();
            if parents.len() < 2 {
                continue;
            }
            // first steps from a that reach each parent by an uncovered pd path
            let mut budget = SEARCH_BUDGET;
            let mut first_steps: Vec<(usize, Vec<usize>)> = Vec::new();
            for &b in &parents {
                let mut firsts = Vec::new();
                for &mu in &neigh_a {
                    if mu == c {
                        continue;
                    }
                    if uncovered_pd_path_exists(p, a, mu, b, &mut budget) {
                        firsts.push(mu);
                    }
                }
                first_steps.push((b, firsts));
            }
            for (i, (b, mus)) in first_steps.iter().enumerate() {
                for (d, omegas) in first_steps.iter().skip(i + 1) {
                    if b == d {
                        continue;
                    }
                    for &mu in mus {
                        for &omega in omegas {
                            if mu != omega && !p.adjacent(mu, omega) {
                                set_mark(p, c, a, Mark::Tail);
                                return true;
                            }
                        }
                    }
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::bruteforce;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn mag(names: &[&str]) -> MixedGraph {
        MixedGraph::new(GraphKind::Mag, names.iter().copied()).unwrap()
    }

    #[test]
    fn collider_keeps_arrowheads_and_circles_its_tails() {
        let mut m = mag(&["A", "B", "C"]);
        m.add_directed(0, 2);
        m.add_directed(1, 2);
        let p = mag_to_pag(&m).unwrap();
        // A o-> C <-o B
        assert_eq!(p.edge(0, 2), Some((Mark::Circle, Mark::Arrow)));
        assert_eq!(p.edge(1, 2), Some((Mark::Circle, Mark::Arrow)));
    }

    #[test]
    fn single_edge_is_fully_ambiguous() {
        let mut m = mag(&["A", "B"]);
        m.add_directed(0, 1);
        let p = mag_to_pag(&m).unwrap();
        assert_eq!(p.edge(0, 1), Some((Mark::Circle, Mark::Circle)));
    }

    #[test]
    fn empty_graph_maps_to_empty_graph() {
        let m = mag(&["A", "B", "C"]);
        let p = mag_to_pag(&m).unwrap();
        assert_eq!(p.edge_count(), 0);
        assert_eq!(p.kind(), GraphKind::Pag);
    }

    #[test]
    fn chain_after_collider_gets_directed_by_r1() {
        // A -> C <- B, C -> D: the C-D edge must become C -> D (R1)
        let mut m = mag(&["A", "B", "C", "D"]);
        m.add_directed(0, 2);
        m.add_directed(1, 2);
        m.add_directed(2, 3);
        let p = mag_to_pag(&m).unwrap();
        assert_eq!(p.edge(2, 3), Some((Mark::Tail, Mark::Arrow)));
    }

    #[test]
    fn invalid_mag_is_rejected() {
        let mut m = mag(&["A", "B", "C"]);
        m.add_directed(0, 1);
        m.add_directed(1, 2);
        m.add_bidirected(0, 2);
        assert!(matches!(mag_to_pag(&m), Err(GraphError::NotAMag(_))));
    }

    #[test]
    fn matches_consensus_on_random_small_mags() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 40 {
            let g = bruteforce::random_ancestral_graph(4, 0.5, &mut rng);
            if !validate_mag(&g).is_valid() {
                continue;
            }
            checked += 1;
            let by_rules = mag_to_pag(&g).unwrap();
            let by_enumeration = bruteforce::consensus_pag(&g);
            for (i, j, _, _) in g.edge_list() {
                assert_eq!(
                    by_rules.edge(i, j),
                    by_enumeration.edge(i, j),
                    "mark mismatch on edge {i},{j} of {:?}",
                    g
                );
            }
        }
    }
}
