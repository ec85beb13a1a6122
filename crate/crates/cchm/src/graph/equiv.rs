//! Markov equivalence by definition: two MAGs are equivalent iff they entail
//! exactly the same m-separation statements. Exponential in node count, so
//! guarded; only ever used on small graphs (score-equivalence checks, PAG
//! consensus certification).

use super::{GraphError, MixedGraph};
use std::collections::BTreeSet;

const EXHAUSTIVE_NODE_LIMIT: usize = 16;

/// The full list of m-separation verdicts over every pair and every
/// conditioning subset, in canonical enumeration order.
pub fn separation_signature(g: &MixedGraph) -> Vec<bool> {
    let v = g.node_count();
    assert!(v <= EXHAUSTIVE_NODE_LIMIT);
    let mut sig = Vec::new();
    for x in 0..v {
        for y in x + 1..v {
            let pool: Vec<usize> = (0..v).filter(|&n| n != x && n != y).collect();
            for mask in 0u32..(1u32 << pool.len()) {
                let z: BTreeSet<usize> = pool
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &n)| n)
                    .collect();
                sig.push(g.m_separated(x, y, &z));
            }
        }
    }
    sig
}

/// True iff the two MAGs share the same node set and the same complete set
/// of m-separation statements.
pub fn markov_equivalent(m1: &MixedGraph, m2: &MixedGraph) -> Result<bool, GraphError> {
    if m1.node_names() != m2.node_names() {
        return Err(GraphError::NodeSetMismatch);
    }
    let v = m1.node_count();
    if v > EXHAUSTIVE_NODE_LIMIT {
        return Err(GraphError::TooLargeForExhaustive(v));
    }
    Ok(separation_signature(m1) == separation_signature(m2))
}
