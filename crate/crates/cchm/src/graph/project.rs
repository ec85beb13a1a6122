//! Latent projection of a DAG onto its observed margin.
//!
//! Two observed nodes are adjacent in the projection iff the DAG contains an
//! inducing path between them relative to the latent set. Adjacency is
//! decided by a d-connection test against the observed ancestor margin,
//! which is equivalent to the path definition and avoids enumerating paths;
//! [`super::bruteforce::has_inducing_path`] keeps the literal definition
//! available as the test oracle.

use super::{GraphError, GraphKind, MixedGraph};
use std::collections::BTreeSet;

/// Projects a DAG onto `nodes \ latents`. Edge directions follow DAG
/// ancestry: `a → b` iff `a` is an ancestor of `b`, `a ↔ b` when neither is
/// an ancestor of the other.
pub fn latent_project(
    dag: &MixedGraph,
    latents: &BTreeSet<usize>,
) -> Result<MixedGraph, GraphError> {
    dag.validate_dag()?;
    for &l in latents {
        if l >= dag.node_count() {
            return Err(GraphError::UnknownNode(format!("#{l}")));
        }
    }
    let observed: Vec<usize> = (0..dag.node_count())
        .filter(|i| !latents.contains(i))
        .collect();
    if observed.is_empty() {
        return Err(GraphError::NoObservedNodes);
    }

    let names: Vec<String> = observed
        .iter()
        .map(|&i| dag.node_name(i).to_string())
        .collect();
    let mut mag = MixedGraph::new(GraphKind::Mag, names)?;
    // observed is ascending and node names are sorted, so position in
    // `observed` equals the node index in `mag`.

    for (pos_a, &a) in observed.iter().enumerate() {
        for (pos_b, &b) in observed.iter().enumerate().skip(pos_a + 1) {
            if !inducing_path_between(dag, a, b, &observed) {
                continue;
            }
            let a_anc_b = dag.is_ancestor(a, b);
            let b_anc_a = dag.is_ancestor(b, a);
            match (a_anc_b, b_anc_a) {
                (true, false) => mag.add_directed(pos_a, pos_b),
                (false, true) => mag.add_directed(pos_b, pos_a),
                (false, false) => mag.add_bidirected(pos_a, pos_b),
                (true, true) => unreachable!("mutual ancestry in a DAG"),
            }
        }
    }
    Ok(mag)
}

/// a and b have an inducing path relative to the latents iff they are
/// d-connected given the observed part of their joint ancestor set.
fn inducing_path_between(dag: &MixedGraph, a: usize, b: usize, observed: &[usize]) -> bool {
    if dag.adjacent(a, b) {
        return true;
    }
    let margin: BTreeSet<usize> = observed
        .iter()
        .copied()
        .filter(|&i| i != a && i != b && (dag.is_ancestor(i, a) || dag.is_ancestor(i, b)))
        .collect();
    !dag.m_separated(a, b, &margin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::bruteforce;
    use crate::graph::validate_mag;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn dag(names: &[&str]) -> MixedGraph {
        MixedGraph::new(GraphKind::Dag, names.iter().copied()).unwrap()
    }

    #[test]
    fn hidden_common_cause_becomes_bidirected() {
        // L -> A, L -> B with L latent
        let mut g = dag(&["A", "B", "L"]);
        g.add_directed(2, 0);
        g.add_directed(2, 1);
        let mag = latent_project(&g, &BTreeSet::from([2])).unwrap();
        assert_eq!(mag.node_names(), &["A", "B"]);
        assert!(mag.has_bidirected(0, 1));
    }

    #[test]
    fn hidden_mediator_keeps_direction() {
        // A -> L -> B with L latent
        let mut g = dag(&["A", "B", "L"]);
        g.add_directed(0, 2);
        g.add_directed(2, 1);
        let mag = latent_project(&g, &BTreeSet::from([2])).unwrap();
        assert!(mag.has_directed(0, 1));
    }

    #[test]
    fn no_latents_preserves_adjacency_and_ancestry() {
        let mut g = dag(&["A", "B", "C", "D"]);
        g.add_directed(0, 1);
        g.add_directed(1, 2);
        g.add_directed(0, 3);
        let mag = latent_project(&g, &BTreeSet::new()).unwrap();
        assert_eq!(mag.edge_count(), g.edge_count());
        for (i, j, _, _) in g.edge_list() {
            assert!(mag.has_directed(i, j));
        }
    }

    #[test]
    fn projecting_all_nodes_is_an_error() {
        let g = dag(&["A", "B"]);
        assert_eq!(
            latent_project(&g, &BTreeSet::from([0, 1])),
            Err(GraphError::NoObservedNodes)
        );
    }

    fn random_dag(v: usize, rng: &mut ChaCha12Rng) -> MixedGraph {
        let names: Vec<String> = (0..v).map(|i| format!("N{i}")).collect();
        let mut g = MixedGraph::new(GraphKind::Dag, names).unwrap();
        for i in 0..v {
            for j in i + 1..v {
                if rng.gen::<f64>() < 0.4 {
                    g.add_directed(i, j);
                }
            }
        }
        g
    }

    #[test]
    fn adjacency_test_matches_literal_inducing_paths() {
        let mut rng = ChaCha12Rng::seed_from_u64(40);
        for _ in 0..80 {
            let g = random_dag(6, &mut rng);
            let k = rng.gen_range(1..=2);
            let mut latents = BTreeSet::new();
            while latents.len() < k {
                latents.insert(rng.gen_range(0..6));
            }
            let observed: Vec<usize> = (0..6).filter(|i| !latents.contains(i)).collect();
            for (x, &a) in observed.iter().enumerate() {
                for &b in &observed[x + 1..] {
                    assert_eq!(
                        inducing_path_between(&g, a, b, &observed),
                        bruteforce::has_inducing_path(&g, a, b, &latents),
                        "a={a} b={b} latents={latents:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn projection_is_a_valid_mag_and_preserves_margins() {
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        for _ in 0..40 {
            let g = random_dag(6, &mut rng);
            let latents = BTreeSet::from([rng.gen_range(0..6)]);
            let mag = latent_project(&g, &latents).unwrap();
            assert!(validate_mag(&mag).is_valid());

            let observed: Vec<usize> = (0..6).filter(|i| !latents.contains(i)).collect();
            let vo = observed.len();
            for x in 0..vo {
                for y in x + 1..vo {
                    let pool: Vec<usize> = (0..vo).filter(|&n| n != x && n != y).collect();
                    for z in bruteforce::subsets_in_order(&pool) {
                        let z_dag: BTreeSet<usize> = z.iter().map(|&i| observed[i]).collect();
                        assert_eq!(
                            mag.m_separated(x, y, &z),
                            g.m_separated(observed[x], observed[y], &z_dag),
                            "margin mismatch at x={x} y={y} z={z:?}"
                        );
                    }
                }
            }
        }
    }
}
