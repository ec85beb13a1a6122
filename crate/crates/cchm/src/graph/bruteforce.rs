//! Exhaustive reference implementations and test-support generators.
//!
//! Everything here trades speed for being an independently checkable
//! definition: path enumeration instead of reachability, full enumeration of
//! mark assignments instead of orientation rules. The fast implementations
//! elsewhere in this module tree are certified against these in the test
//! suites; none of this is used on the learning path.

use super::{validate_mag, GraphKind, Mark, MixedGraph};
use rand::Rng;
use std::collections::BTreeSet;

/// m-separation decided by enumerating every simple path between `x` and `y`
/// and applying the blocking definition literally: a path is blocked iff it
/// contains a non-collider in `z` or a collider that is neither in `z` nor
/// an ancestor of a member of `z`.
pub fn m_separated_paths(g: &MixedGraph, x: usize, y: usize, z: &BTreeSet<usize>) -> bool {
    assert!(x != y && !z.contains(&x) && !z.contains(&y));
    let anc_z = g.ancestors_of_set(z);
    let mut on_path = vec![false; g.node_count()];
    on_path[x] = true;
    let mut path = vec![x];
    !any_open_path(g, y, z, &anc_z, &mut path, &mut on_path)
}

fn any_open_path(
    g: &MixedGraph,
    y: usize,
    z: &BTreeSet<usize>,
    anc_z: &[bool],
    path: &mut Vec<usize>,
    on_path: &mut [bool],
) -> bool {
    let last = *path.last().unwrap();
    for &next in g.adjacency(last) {
        if on_path[next] {
            continue;
        }
        path.push(next);
        let found = if next == y {
            path_open(g, path, z, anc_z)
        } else {
            any_open_path(g, y, z, anc_z, {
                on_path[next] = true;
                path
            }, on_path)
        };
        if next != y {
            on_path[next] = false;
        }
        path.pop();
        if found {
            return true;
        }
    }
    false
}

fn path_open(g: &MixedGraph, path: &[usize], z: &BTreeSet<usize>, anc_z: &[bool]) -> bool {
    for k in 1..path.len() - 1 {
        let node = path[k];
        let m_prev = g.mark_at(node, path[k - 1]).expect("path edge");
        let m_next = g.mark_at(node, path[k + 1]).expect("path edge");
        let collider = m_prev == Mark::Arrow && m_next == Mark::Arrow;
        let blocked = if collider {
            !anc_z[node]
        } else {
            z.contains(&node)
        };
        if blocked {
            return false;
        }
    }
    true
}

/// Literal inducing-path test in a DAG: a simple path from `a` to `b` on
/// which every non-endpoint node is either latent or a collider, and every
/// collider is an ancestor of `a` or `b`.
pub fn has_inducing_path(
    dag: &MixedGraph,
    a: usize,
    b: usize,
    latents: &BTreeSet<usize>,
) -> bool {
    let mut anc_ab = vec![false; dag.node_count()];
    for (i, flag) in anc_ab.iter_mut().enumerate() {
        *flag = dag.is_ancestor(i, a) || dag.is_ancestor(i, b);
    }
    let mut on_path = vec![false; dag.node_count()];
    on_path[a] = true;
    let mut path = vec![a];
    inducing_dfs(dag, b, latents, &anc_ab, &mut path, &mut on_path)
}

fn inducing_dfs(
    dag: &MixedGraph,
    b: usize,
    latents: &BTreeSet<usize>,
    anc_ab: &[bool],
    path: &mut Vec<usize>,
    on_path: &mut [bool],
) -> bool {
    let last = *path.last().unwrap();
    for &next in dag.adjacency(last) {
        if on_path[next] {
            continue;
        }
        path.push(next);
        let found = if next == b {
            inducing_conditions_hold(dag, path, latents, anc_ab)
        } else {
            on_path[next] = true;
            inducing_dfs(dag, b, latents, anc_ab, path, on_path)
        };
        if next != b {
            on_path[next] = false;
        }
        path.pop();
        if found {
            return true;
        }
    }
    false
}

fn inducing_conditions_hold(
    dag: &MixedGraph,
    path: &[usize],
    latents: &BTreeSet<usize>,
    anc_ab: &[bool],
) -> bool {
    for k in 1..path.len() - 1 {
        let node = path[k];
        let collider = dag.mark_at(node, path[k - 1]) == Some(Mark::Arrow)
            && dag.mark_at(node, path[k + 1]) == Some(Mark::Arrow);
        if collider {
            if !anc_ab[node] {
                return false;
            }
        } else if !latents.contains(&node) {
            return false;
        }
    }
    true
}

/// Every valid MAG over the given skeleton (3 mark assignments per edge,
/// filtered through [`validate_mag`], maximality included).
pub fn mags_on_skeleton(skeleton: &MixedGraph) -> Vec<MixedGraph> {
    let edges: Vec<(usize, usize)> = skeleton.edge_list().map(|(i, j, _, _)| (i, j)).collect();
    let mut out = Vec::new();
    let total = 3usize.pow(edges.len() as u32);
    for code in 0..total {
        let mut g =
            MixedGraph::new(GraphKind::Mag, skeleton.node_names().iter().cloned()).unwrap();
        let mut c = code;
        for &(i, j) in &edges {
            match c % 3 {
                0 => g.add_directed(i, j),
                1 => g.add_directed(j, i),
                _ => g.add_bidirected(i, j),
            }
            c /= 3;
        }
        if validate_mag(&g).is_valid() {
            out.push(g);
        }
    }
    out
}

/// The Markov equivalence class of `m`: every valid MAG on the same skeleton
/// with identical m-separation statements.
pub fn equivalence_class(m: &MixedGraph) -> Vec<MixedGraph> {
    let sig = super::separation_signature(m);
    mags_on_skeleton(m)
        .into_iter()
        .filter(|cand| super::separation_signature(cand) == sig)
        .collect()
}

/// PAG by definition: enumerate the Markov equivalence class of `m` and take
/// the per-endpoint consensus, writing a circle wherever members disagree.
pub fn consensus_pag(m: &MixedGraph) -> MixedGraph {
    let class = equivalence_class(m);
    assert!(!class.is_empty(), "a valid MAG belongs to its own class");
    let mut pag = MixedGraph::new(GraphKind::Pag, m.node_names().iter().cloned()).unwrap();
    for (i, j, _, _) in m.edge_list() {
        let mut mark_i = class[0].mark_at(i, j).unwrap();
        let mut mark_j = class[0].mark_at(j, i).unwrap();
        for member in &class[1..] {
            if member.mark_at(i, j) != Some(mark_i) {
                mark_i = Mark::Circle;
            }
            if member.mark_at(j, i) != Some(mark_j) {
                mark_j = Mark::Circle;
            }
        }
        pag.set_edge(i, j, mark_i, mark_j);
    }
    pag
}

/// Rejection-samples a random ancestral graph: Bernoulli(`density`) skeleton,
/// uniform mark assignment per edge, retried until ancestral. Test support.
pub fn random_ancestral_graph<R: Rng>(v: usize, density: f64, rng: &mut R) -> MixedGraph {
    let names: Vec<String> = (0..v).map(|i| format!("N{i}")).collect();
    loop {
        let mut g = MixedGraph::new(GraphKind::Mag, names.iter().cloned()).unwrap();
        for i in 0..v {
            for j in i + 1..v {
                if rng.gen::<f64>() < density {
                    match rng.gen_range(0..3) {
                        0 => g.add_directed(i, j),
                        1 => g.add_directed(j, i),
                        _ => g.add_bidirected(i, j),
                    }
                }
            }
        }
        if g.is_ancestral() {
            return g;
        }
    }
}

/// All subsets of `pool` in canonical order (by size, then lexicographic).
pub fn subsets_in_order(pool: &[usize]) -> Vec<BTreeSet<usize>> {
    let mut out: Vec<BTreeSet<usize>> = Vec::with_capacity(1 << pool.len());
    for mask in 0u32..(1u32 << pool.len()) {
        out.push(
            pool.iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &n)| n)
                .collect(),
        );
    }
    out.sort_by(|a, b| (a.len(), a.iter().collect::<Vec<_>>()).cmp(&(b.len(), b.iter().collect())));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn path_oracle_matches_reachability_on_random_graphs() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..60 {
            let g = random_ancestral_graph(5, 0.45, &mut rng);
            let all: Vec<usize> = (0..5).collect();
            for x in 0..5 {
                for y in x + 1..5 {
                    let pool: Vec<usize> = all.iter().copied().filter(|&n| n != x && n != y).collect();
                    for z in subsets_in_order(&pool) {
                        assert_eq!(
                            g.m_separated(x, y, &z),
                            m_separated_paths(&g, x, y, &z),
                            "disagreement on x={x} y={y} z={z:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn subset_enumeration_is_canonical() {
        let subs = subsets_in_order(&[1, 2, 3]);
        assert_eq!(subs.len(), 8);
        assert_eq!(subs[0], BTreeSet::new());
        assert_eq!(subs[1], BTreeSet::from([1]));
        assert_eq!(subs[7], BTreeSet::from([1, 2, 3]));
    }
}
