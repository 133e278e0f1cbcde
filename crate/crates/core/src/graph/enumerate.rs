use std::collections::BTreeMap;

use super::{canonical_form, Edge, Graph};

/// Every connected multigraph with the given rank and edge count whose
/// vertices all have valence at least 3, one canonical representative per
/// isomorphism class, ordered by canonical key.
pub fn enumerate_high_valence_graphs(rank: usize, num_edges: usize) -> Vec<Graph> {
    if num_edges < rank {
        return Vec::new();
    }
    let m = num_edges + 1 - rank;
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect();
    let mut found = BTreeMap::new();
    let mut chosen = Vec::with_capacity(num_edges);
    multisets(&pairs, 0, num_edges, &mut chosen, &mut |choice| {
        let mut valence = vec![0; m];
        for &(i, j) in choice {
            valence[i] += 1;
            valence[j] += 1;
        }
        if valence.iter().any(|&k| k < 3) {
            return;
        }
        let edges = choice
            .iter()
            .enumerate()
            .map(|(n, &(i, j))| Edge {
                label: super::canonical_label(n),
                init: i,
                term: j,
            })
            .collect();
        let g = Graph::from_parts_unchecked((1..=m).map(|i| format!("v{i}")).collect(), edges);
        if !g.is_connected() {
            return;
        }
        let c = canonical_form(&g, &Default::default(), &[]);
        found.entry(c.key).or_insert(c.graph);
    });
    found.into_values().collect()
}

fn multisets(
    pairs: &[(usize, usize)],
    from: usize,
    left: usize,
    chosen: &mut Vec<(usize, usize)>,
    visit: &mut impl FnMut(&[(usize, usize)]),
) {
    if left == 0 {
        visit(chosen);
        return;
    }
    for i in from..pairs.len() {
        chosen.push(pairs[i]);
        multisets(pairs, i, left - 1, chosen, visit);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{graph_key, rank, valence_profile};

    #[test]
    fn three_edges_give_the_rose() {
        let gs = enumerate_high_valence_graphs(3, 3);
        assert_eq!(gs.len(), 1);
        assert_eq!(graph_key(&gs[0]), graph_key(&Graph::rose(3)));
    }

    #[test]
    fn five_edge_graphs_have_profile_four_three_three() {
        let gs = enumerate_high_valence_graphs(3, 5);
        assert!(!gs.is_empty());
        for g in &gs {
            assert_eq!(rank(g), Ok(3));
            assert_eq!(valence_profile(g).valences, vec![4, 3, 3]);
            assert_eq!(g.valences().iter().sum::<usize>(), 2 * g.edge_count());
        }
    }

    #[test]
    fn rank_two_theta_and_barbell() {
        // rank 2 with 3 edges on 2 vertices: the theta graph and the barbell
        assert_eq!(enumerate_high_valence_graphs(2, 3).len(), 2);
        assert!(enumerate_high_valence_graphs(4, 2).is_empty());
    }
}
