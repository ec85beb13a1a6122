//! Mixed graphs with typed endpoint marks.
//!
//! One structure, [`MixedGraph`], represents DAGs (tail/arrow, one arrow per
//! edge), MAGs (tail/arrow) and PAGs (circle marks allowed). Node order is
//! canonical: identifiers are sorted lexicographically at construction and
//! every iteration order in this crate derives from that order, so results
//! are reproducible across runs and platforms.
//!
//! Selection bias is out of scope throughout: there are no tail–tail
//! (undirected) edges.

mod equiv;
mod io;
mod msep;
mod pag;
mod project;
mod validate;

pub mod bruteforce;

pub use equiv::{markov_equivalent, separation_signature};
pub use io::{graph_from_text, graph_to_text};
pub use pag::mag_to_pag;
pub use project::latent_project;
pub use validate::{validate_mag, MagValidation, MagViolation};

use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Endpoint mark of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mark {
    Tail,
    Arrow,
    Circle,
}

impl Mark {
    pub fn as_str(self) -> &'static str {
        match self {
            Mark::Tail => "tail",
            Mark::Arrow => "arrow",
            Mark::Circle => "circle",
        }
    }
}

/// What a graph claims to be. Validation is explicit, not enforced on edit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    Dag,
    Mag,
    Pag,
    Unclassified,
}

/// An unshielded triple a–c–b (a, b adjacent to c, a and b non-adjacent),
/// stored with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Triple {
    pub a: usize,
    pub c: usize,
    pub b: usize,
}

impl Triple {
    pub fn new(a: usize, c: usize, b: usize) -> Self {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        Triple { a, c, b }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid node identifier {0:?}")]
    InvalidNodeName(String),
    #[error("duplicate node identifier {0:?}")]
    DuplicateNode(String),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("self loop at node {0}")]
    SelfLoop(usize),
    #[error("node sets differ")]
    NodeSetMismatch,
    #[error("graph is not a valid DAG")]
    NotADag,
    #[error("graph is not a valid MAG: {0}")]
    NotAMag(String),
    #[error("cannot project: no observed nodes remain")]
    NoObservedNodes,
    #[error("{0} nodes is too large for exhaustive enumeration")]
    TooLargeForExhaustive(usize),
    #[error("malformed graph file: {0}")]
    ParseError(String),
}

/// A graph over named nodes with one marked edge per unordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedGraph {
    nodes: Vec<String>,
    edges: BTreeMap<(usize, usize), (Mark, Mark)>,
    adj: Vec<BTreeSet<usize>>,
    kind: GraphKind,
}

impl MixedGraph {
    /// Creates an edgeless graph. Node identifiers are sorted
    /// lexicographically; they must be non-empty and free of `,`, `:` and
    /// line breaks (the characters used by the text format).
    pub fn new<I, S>(kind: GraphKind, names: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut nodes: Vec<String> = names.into_iter().map(Into::into).collect();
        for name in &nodes {
            if name.is_empty() || name.contains([',', ':', '\n', '\r']) {
                return Err(GraphError::InvalidNodeName(name.clone()));
            }
        }
        nodes.sort();
        for w in nodes.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateNode(w[0].clone()));
            }
        }
        let v = nodes.len();
        Ok(MixedGraph {
            nodes,
            edges: BTreeMap::new(),
            adj: vec![BTreeSet::new(); v],
            kind,
        })
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn set_kind(&mut self, kind: GraphKind) {
        self.kind = kind;
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_names(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_name(&self, i: usize) -> &str {
        &self.nodes[i]
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Marks of the edge between `i` and `j` as `(mark at i, mark at j)`.
    pub fn edge(&self, i: usize, j: usize) -> Option<(Mark, Mark)> {
        if i < j {
            self.edges.get(&(i, j)).copied()
        } else {
            self.edges.get(&(j, i)).map(|&(a, b)| (b, a))
        }
    }

    /// The mark at `i` on the edge between `i` and `j`.
    pub fn mark_at(&self, i: usize, j: usize) -> Option<Mark> {
        self.edge(i, j).map(|(m, _)| m)
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.edge(i, j).is_some()
    }

    /// Neighbours of `i` in ascending index order.
    pub fn adjacency(&self, i: usize) -> &BTreeSet<usize> {
        &self.adj[i]
    }

    /// Canonical edge iteration: `(i, j, mark at i, mark at j)` with `i < j`.
    pub fn edge_list(&self) -> impl Iterator<Item = (usize, usize, Mark, Mark)> + '_ {
        self.edges.iter().map(|(&(i, j), &(mi, mj))| (i, j, mi, mj))
    }

    /// Inserts or replaces the edge between `i` and `j`.
    pub fn set_edge(&mut self, i: usize, j: usize, mark_i: Mark, mark_j: Mark) {
        assert!(i != j, "self loops are not allowed");
        assert!(i < self.nodes.len() && j < self.nodes.len());
        let key = if i < j { (i, j) } else { (j, i) };
        let marks = if i < j { (mark_i, mark_j) } else { (mark_j, mark_i) };
        self.edges.insert(key, marks);
        self.adj[i].insert(j);
        self.adj[j].insert(i);
    }

    /// Inserts the directed edge `from → to`.
    pub fn add_directed(&mut self, from: usize, to: usize) {
        self.set_edge(from, to, Mark::Tail, Mark::Arrow);
    }

    /// Inserts the bidirected edge `a ↔ b`.
    pub fn add_bidirected(&mut self, a: usize, b: usize) {
        self.set_edge(a, b, Mark::Arrow, Mark::Arrow);
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) {
        let key = if i < j { (i, j) } else { (j, i) };
        if self.edges.remove(&key).is_some() {
            self.adj[i].remove(&j);
            self.adj[j].remove(&i);
        }
    }

    /// True iff the edge `i → j` is present (tail at i, arrow at j).
    pub fn has_directed(&self, from: usize, to: usize) -> bool {
        self.edge(from, to) == Some((Mark::Tail, Mark::Arrow))
    }

    pub fn has_bidirected(&self, a: usize, b: usize) -> bool {
        self.edge(a, b) == Some((Mark::Arrow, Mark::Arrow))
    }

    /// Parents of `i`: nodes `j` with `j → i`.
    pub fn parents(&self, i: usize) -> Vec<usize> {
        self.adj[i]
            .iter()
            .copied()
            .filter(|&j| self.has_directed(j, i))
            .collect()
    }

    /// Children of `i`: nodes `j` with `i → j`.
    pub fn children(&self, i: usize) -> Vec<usize> {
        self.adj[i]
            .iter()
            .copied()
            .filter(|&j| self.has_directed(i, j))
            .collect()
    }

    /// Spouses of `i`: nodes `j` with `i ↔ j`.
    pub fn spouses(&self, i: usize) -> Vec<usize> {
        self.adj[i]
            .iter()
            .copied()
            .filter(|&j| self.has_bidirected(i, j))
            .collect()
    }

    /// `anc[i][j]` is true iff `j` is an ancestor of `i` (including `j == i`)
    /// through directed edges only.
    pub fn ancestor_table(&self) -> Vec<Vec<bool>> {
        let v = self.node_count();
        let mut anc = vec![vec![false; v]; v];
        for i in 0..v {
            let mut stack = vec![i];
            anc[i][i] = true;
            while let Some(u) = stack.pop() {
                for p in self.parents(u) {
                    if !anc[i][p] {
                        anc[i][p] = true;
                        stack.push(p);
                    }
                }
            }
        }
        anc
    }

    /// True iff `a` is an ancestor of `b` via a directed path (a → … → b).
    /// A node is an ancestor of itself.
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        if a == b {
            return true;
        }
        let mut seen = vec![false; self.node_count()];
        let mut stack = vec![a];
        seen[a] = true;
        while let Some(u) = stack.pop() {
            for c in self.children(u) {
                if c == b {
                    return true;
                }
                if !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        false
    }

    /// All nodes with a directed path into some member of `set`, including
    /// the members themselves.
    pub fn ancestors_of_set(&self, set: &BTreeSet<usize>) -> Vec<bool> {
        let mut out = vec![false; self.node_count()];
        let mut stack: Vec<usize> = set.iter().copied().collect();
        for &s in set {
            out[s] = true;
        }
        while let Some(u) = stack.pop() {
            for p in self.parents(u) {
                if !out[p] {
                    out[p] = true;
                    stack.push(p);
                }
            }
        }
        out
    }

    /// True iff the directed part of the graph is acyclic.
    pub fn directed_part_acyclic(&self) -> bool {
        self.find_directed_cycle().is_none()
    }

    /// Returns some directed cycle as a node list, if one exists.
    pub fn find_directed_cycle(&self) -> Option<Vec<usize>> {
        let v = self.node_count();
        // 0 unvisited, 1 on stack, 2 done
        let mut state = vec![0u8; v];
        let mut parent = vec![usize::MAX; v];
        for start in 0..v {
            if state[start] != 0 {
                continue;
            }
            let mut stack = vec![(start, false)];
            while let Some((u, processed)) = stack.pop() {
                if processed {
                    state[u] = 2;
                    continue;
                }
                if state[u] == 1 {
                    continue;
                }
                state[u] = 1;
                stack.push((u, true));
                for c in self.children(u) {
                    match state[c] {
                        0 => {
                            parent[c] = u;
                            stack.push((c, false));
                        }
                        1 => {
                            // back edge u -> c closes a cycle
                            let mut cycle = vec![c];
                            let mut w = u;
                            while w != c {
                                cycle.push(w);
                                w = parent[w];
                            }
                            cycle.reverse();
                            // canonical rotation: smallest node first
                            let min_pos = cycle
                                .iter()
                                .enumerate()
                                .min_by_key(|(_, &n)| n)
                                .map(|(k, _)| k)
                                .unwrap();
                            cycle.rotate_left(min_pos);
                            return Some(cycle);
                        }
                        _ => {}
                    }
                }
            }
        }
        None
    }

    /// A topological order of the directed part (deterministic: smallest
    /// index first among ready nodes). Errors if a directed cycle exists.
    pub fn topological_order(&self) -> Result<Vec<usize>, GraphError> {
        let v = self.node_count();
        let mut indeg: Vec<usize> = (0..v).map(|i| self.parents(i).len()).collect();
        let mut ready: BTreeSet<usize> = (0..v).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(v);
        while let Some(&u) = ready.iter().next() {
            ready.remove(&u);
            order.push(u);
            for c in self.children(u) {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        if order.len() == v {
            Ok(order)
        } else {
            Err(GraphError::NotADag)
        }
    }

    /// Checks that a graph flagged as a DAG really is one: every edge is
    /// directed and the directed part is acyclic.
    pub fn validate_dag(&self) -> Result<(), GraphError> {
        for (_, _, mi, mj) in self.edge_list() {
            let directed =
                (mi == Mark::Tail && mj == Mark::Arrow) || (mi == Mark::Arrow && mj == Mark::Tail);
            if !directed {
                return Err(GraphError::NotADag);
            }
        }
        if !self.directed_part_acyclic() {
            return Err(GraphError::NotADag);
        }
        Ok(())
    }

    /// Fast ancestral check used in search inner loops: marks are tail/arrow
    /// with no tail–tail edges, the directed part is acyclic, and no
    /// bidirected edge connects a node to its ancestor or descendant.
    pub fn is_ancestral(&self) -> bool {
        for (_, _, mi, mj) in self.edge_list() {
            if mi == Mark::Circle || mj == Mark::Circle {
                return false;
            }
            if mi == Mark::Tail && mj == Mark::Tail {
                return false;
            }
        }
        if !self.directed_part_acyclic() {
            return false;
        }
        for (i, j, mi, mj) in self.edge_list() {
            if mi == Mark::Arrow && mj == Mark::Arrow {
                // self-ancestry is trivial; check proper ancestry both ways
                if self.directed_reaches(i, j) || self.directed_reaches(j, i) {
                    return false;
                }
            }
        }
        true
    }

    fn directed_reaches(&self, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.node_count()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(u) = stack.pop() {
            for c in self.children(u) {
                if c == to {
                    return true;
                }
                if !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        false
    }

    /// Connected components of the subgraph keeping only bidirected edges.
    /// Nodes without a bidirected edge form singleton components. Components
    /// are sorted internally and by their smallest member.
    pub fn c_components(&self) -> Vec<Vec<usize>> {
        let v = self.node_count();
        let mut comp = vec![usize::MAX; v];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for start in 0..v {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for s in self.spouses(u) {
                    if comp[s] == usize::MAX {
                        comp[s] = id;
                        members.push(s);
                        stack.push(s);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// All unshielded triples (a, c, b): a–c and c–b adjacent, a–b not.
    /// Canonical order: ascending by (a, c, b) with a < b within each triple.
    pub fn unshielded_triples(&self) -> Vec<Triple> {
        let mut out = Vec::new();
        for c in 0..self.node_count() {
            let neigh: Vec<usize> = self.adj[c].iter().copied().collect();
            for (x, &a) in neigh.iter().enumerate() {
                for &b in &neigh[x + 1..] {
                    if !self.adjacent(a, b) {
                        out.push(Triple::new(a, c, b));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// m-separation of `x` and `y` given `z`, evaluated by reachability over
    /// walk states `(node, entering mark)`. A collider on a walk passes iff
    /// it is in `z` or has a descendant in `z`; a non-collider passes iff it
    /// is not in `z`. See [`bruteforce::m_separated_paths`] for the
    /// path-enumeration reference implementation this is tested against.
    pub fn m_separated(&self, x: usize, y: usize, z: &BTreeSet<usize>) -> bool {
        msep::m_separated(self, x, y, z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(names: &[&str]) -> MixedGraph {
        MixedGraph::new(GraphKind::Unclassified, names.iter().copied()).unwrap()
    }

    #[test]
    fn nodes_are_sorted_and_unique() {
        let gr = g(&["B", "A", "C"]);
        assert_eq!(gr.node_names(), &["A", "B", "C"]);
        assert_eq!(gr.node_index("B"), Some(1));
        assert!(matches!(
            MixedGraph::new(GraphKind::Dag, ["A", "A"]),
            Err(GraphError::DuplicateNode(_))
        ));
        assert!(matches!(
            MixedGraph::new(GraphKind::Dag, ["A,B"]),
            Err(GraphError::InvalidNodeName(_))
        ));
    }

    #[test]
    fn edge_marks_are_order_independent() {
        let mut gr = g(&["A", "B"]);
        gr.set_edge(1, 0, Mark::Arrow, Mark::Tail); // B <- A stored as A -> B
        assert_eq!(gr.edge(0, 1), Some((Mark::Tail, Mark::Arrow)));
        assert_eq!(gr.mark_at(1, 0), Some(Mark::Arrow));
        assert!(gr.has_directed(0, 1));
        assert_eq!(gr.parents(1), vec![0]);
        assert_eq!(gr.children(0), vec![1]);
    }

    #[test]
    fn c_components_split_on_directed_edges() {
        // A -> B, B <-> C, C <-> D, isolated E
        let mut gr = g(&["A", "B", "C", "D", "E"]);
        gr.add_directed(0, 1);
        gr.add_bidirected(1, 2);
        gr.add_bidirected(2, 3);
        assert_eq!(gr.c_components(), vec![vec![0], vec![1, 2, 3], vec![4]]);
    }

    #[test]
    fn c_components_all_singletons_for_dag() {
        let mut gr = g(&["A", "B", "C"]);
        gr.add_directed(0, 1);
        gr.add_directed(1, 2);
        assert_eq!(gr.c_components(), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn c_components_bidirected_triangle() {
        let mut gr = g(&["A", "B", "C"]);
        gr.add_bidirected(0, 1);
        gr.add_bidirected(1, 2);
        gr.add_bidirected(0, 2);
        assert_eq!(gr.c_components(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn unshielded_triples_chain_triangle_star() {
        let mut chain = g(&["A", "B", "C"]);
        chain.set_edge(0, 1, Mark::Circle, Mark::Circle);
        chain.set_edge(1, 2, Mark::Circle, Mark::Circle);
        assert_eq!(chain.unshielded_triples(), vec![Triple::new(0, 1, 2)]);

        let mut tri = g(&["A", "B", "C"]);
        tri.set_edge(0, 1, Mark::Circle, Mark::Circle);
        tri.set_edge(1, 2, Mark::Circle, Mark::Circle);
        tri.set_edge(0, 2, Mark::Circle, Mark::Circle);
        assert!(tri.unshielded_triples().is_empty());

        let mut star = g(&["H", "X", "Y", "Z"]);
        for leaf in 1..4 {
            star.set_edge(0, leaf, Mark::Circle, Mark::Circle);
        }
        assert_eq!(star.unshielded_triples().len(), 3);
    }

    #[test]
    fn cycle_detection_and_topological_order() {
        let mut gr = g(&["A", "B", "C"]);
        gr.add_directed(0, 1);
        gr.add_directed(1, 2);
        assert!(gr.directed_part_acyclic());
        assert_eq!(gr.topological_order().unwrap(), vec![0, 1, 2]);
        gr.add_directed(2, 0);
        let cyc = gr.find_directed_cycle().unwrap();
        assert_eq!(cyc.len(), 3);
        assert!(gr.topological_order().is_err());
    }

    #[test]
    fn ancestral_rejects_bidirected_to_descendant() {
        // A -> B, B -> C, A <-> C: almost directed cycle
        let mut gr = g(&["A", "B", "C"]);
        gr.add_directed(0, 1);
        gr.add_directed(1, 2);
        gr.add_bidirected(0, 2);
        assert!(!gr.is_ancestral());
        // A -> B, A <-> C is fine
        let mut ok = g(&["A", "B", "C"]);
        ok.add_directed(0, 1);
        ok.add_bidirected(0, 2);
        assert!(ok.is_ancestral());
    }

    #[test]
    fn ancestor_queries() {
        let mut gr = g(&["A", "B", "C", "D"]);
        gr.add_directed(0, 1);
        gr.add_directed(1, 2);
        gr.add_bidirected(2, 3);
        assert!(gr.is_ancestor(0, 2));
        assert!(!gr.is_ancestor(2, 0));
        assert!(!gr.is_ancestor(3, 2));
        let anc = gr.ancestors_of_set(&BTreeSet::from([2]));
        assert_eq!(anc, vec![true, true, true, false]);
    }
}
