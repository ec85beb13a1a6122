//! MAG validity: ancestrality and maximality.

use super::{Mark, MixedGraph};
use std::collections::BTreeSet;

/// Maximality is checked by subset search, which is exponential; above this
/// many nodes it is skipped and [`MagValidation::maximality_checked`] is
/// false.
pub const MAXIMALITY_NODE_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MagViolation {
    /// Circle or tail–tail marks have no place in a MAG.
    BadEdge { a: usize, b: usize },
    DirectedCycle(Vec<usize>),
    /// Bidirected edge between a node and one of its ancestors/descendants.
    AlmostDirectedCycle { a: usize, b: usize },
    /// Non-adjacent pair with no m-separating subset.
    NotMaximal { a: usize, b: usize },
}

impl MagViolation {
    pub fn describe(&self, g: &MixedGraph) -> String {
        let name = |i: &usize| g.node_name(*i).to_string();
        match self {
            MagViolation::BadEdge { a, b } => {
                format!("invalid marks on edge {},{}", name(a), name(b))
            }
            MagViolation::DirectedCycle(nodes) => {
                let list: Vec<String> = nodes.iter().map(name).collect();
                format!("directed cycle {}", list.join(","))
            }
            MagViolation::AlmostDirectedCycle { a, b } => {
                format!("almost-directed cycle through {} <-> {}", name(a), name(b))
            }
            MagViolation::NotMaximal { a, b } => format!(
                "not maximal: no separating set for {},{}",
                name(a),
                name(b)
            ),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MagValidation {
    pub violations: Vec<MagViolation>,
    /// False when the graph was too large for the maximality search.
    pub maximality_checked: bool,
}

impl MagValidation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn describe(&self, g: &MixedGraph) -> Vec<String> {
        self.violations.iter().map(|v| v.describe(g)).collect()
    }
}

/// Checks ancestrality (marks, directed cycles, almost-directed cycles) and,
/// for graphs of at most [`MAXIMALITY_NODE_LIMIT`] nodes, maximality. The
/// result is empty iff the graph is a valid MAG (up to the maximality size
/// cutoff). Violations are data, not errors.
pub fn validate_mag(g: &MixedGraph) -> MagValidation {
    let mut violations = Vec::new();

    for (i, j, mi, mj) in g.edge_list() {
        let ok = matches!(
            (mi, mj),
            (Mark::Tail, Mark::Arrow) | (Mark::Arrow, Mark::Tail) | (Mark::Arrow, Mark::Arrow)
        );
        if !ok {
            violations.push(MagViolation::BadEdge { a: i, b: j });
        }
    }
    if !violations.is_empty() {
        // Mark errors make cycle/maximality semantics meaningless.
        return MagValidation {
            violations,
            maximality_checked: false,
        };
    }

    if let Some(cycle) = g.find_directed_cycle() {
        violations.push(MagViolation::DirectedCycle(cycle));
    }
    for (i, j, mi, mj) in g.edge_list() {
        if mi == Mark::Arrow && mj == Mark::Arrow {
            let bad = (g.is_ancestor(i, j) && i != j) || (g.is_ancestor(j, i) && j != i);
            // is_ancestor is reflexive; i != j always holds for edges
            if bad {
                violations.push(MagViolation::AlmostDirectedCycle { a: i, b: j });
            }
        }
    }
    if !violations.is_empty() {
        return MagValidation {
            violations,
            maximality_checked: false,
        };
    }

    let v = g.node_count();
    if v > MAXIMALITY_NODE_LIMIT {
        return MagValidation {
            violations,
            maximality_checked: false,
        };
    }
    for a in 0..v {
        for b in a + 1..v {
            if g.adjacent(a, b) {
                continue;
            }
            if !has_separating_set(g, a, b) {
                violations.push(MagViolation::NotMaximal { a, b });
            }
        }
    }
    MagValidation {
        violations,
        maximality_checked: true,
    }
}

fn has_separating_set(g: &MixedGraph, a: usize, b: usize) -> bool {
    // Try the ancestor margin first; it separates whenever anything does in
    // the graphs we care about, and the exhaustive sweep below is the
    // fallback that makes this function a definition rather than a theorem.
    let mut candidate: BTreeSet<usize> = BTreeSet::new();
    for i in 0..g.node_count() {
        if i != a && i != b && (g.is_ancestor(i, a) || g.is_ancestor(i, b)) {
            candidate.insert(i);
        }
    }
    if g.m_separated(a, b, &candidate) {
        return true;
    }
    let pool: Vec<usize> = (0..g.node_count()).filter(|&i| i != a && i != b).collect();
    for mask in 0u32..(1u32 << pool.len()) {
        let z: BTreeSet<usize> = pool
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &n)| n)
            .collect();
        if g.m_separated(a, b, &z) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphKind;

    fn mag(names: &[&str]) -> MixedGraph {
        MixedGraph::new(GraphKind::Mag, names.iter().copied()).unwrap()
    }

    #[test]
    fn directed_cycle_is_reported() {
        let mut g = mag(&["A", "B", "C"]);
        g.add_directed(0, 1);
        g.add_directed(1, 2);
        g.add_directed(2, 0);
        let check = validate_mag(&g);
        assert!(matches!(
            check.violations[0],
            MagViolation::DirectedCycle(_)
        ));
        assert_eq!(check.describe(&g)[0], "directed cycle A,B,C");
    }

    #[test]
    fn almost_directed_cycle_is_reported() {
        // A -> B, B -> C, A <-> C
        let mut g = mag(&["A", "B", "C"]);
        g.add_directed(0, 1);
        g.add_directed(1, 2);
        g.add_bidirected(0, 2);
        let check = validate_mag(&g);
        assert_eq!(
            check.violations,
            vec![MagViolation::AlmostDirectedCycle { a: 0, b: 2 }]
        );
    }

    #[test]
    fn small_valid_mag_passes_including_maximality() {
        // A -> B, A <-> C
        let mut g = mag(&["A", "B", "C"]);
        g.add_directed(0, 1);
        g.add_bidirected(0, 2);
        let check = validate_mag(&g);
        assert!(check.is_valid(), "{:?}", check.violations);
        assert!(check.maximality_checked);
    }

    #[test]
    fn circle_marks_rejected_for_mags() {
        let mut g = mag(&["A", "B"]);
        g.set_edge(0, 1, Mark::Circle, Mark::Arrow);
        assert!(matches!(
            validate_mag(&g).violations[0],
            MagViolation::BadEdge { .. }
        ));
        let mut und = mag(&["A", "B"]);
        und.set_edge(0, 1, Mark::Tail, Mark::Tail);
        assert!(!validate_mag(&und).is_valid());
    }

    #[test]
    fn non_maximal_graph_is_caught() {
        // Primitive inducing path A <-> B <-> C <-> D with B -> D and
        // C -> A: each interior collider is an ancestor of an endpoint, so
        // no subset of {B, C} separates A from D.
        let mut g = mag(&["A", "B", "C", "D"]);
        g.add_bidirected(0, 1);
        g.add_bidirected(1, 2);
        g.add_bidirected(2, 3);
        g.add_directed(1, 3);
        g.add_directed(2, 0);
        let check = validate_mag(&g);
        assert_eq!(
            check.violations,
            vec![MagViolation::NotMaximal { a: 0, b: 3 }],
            "expected exactly the A,D maximality violation"
        );
    }
}
