/// Strongly connected components of a digraph given by adjacency lists,
/// each sorted, listed in order of their least node. Iterative Tarjan, so
/// deep graphs do not exhaust the stack.
pub(crate) fn strongly_connected(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // (node, position in its adjacency list)
        let mut call = vec![(root, 0usize)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(v, pos)) = call.last() {
            if let Some(&w) = adj[v].get(pos) {
                call.last_mut().unwrap().1 += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps.sort_unstable_by_key(|c| c[0]);
    comps
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reach(adj: &[Vec<usize>], from: usize) -> Vec<bool> {
        let mut seen = vec![false; adj.len()];
        let mut todo = vec![from];
        seen[from] = true;
        while let Some(v) = todo.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    todo.push(w);
                }
            }
        }
        seen
    }

    #[test]
    fn small_examples() {
        let adj = vec![vec![1], vec![2], vec![0, 3], vec![], vec![4]];
        assert_eq!(
            strongly_connected(&adj),
            vec![vec![0, 1, 2], vec![3], vec![4]]
        );
        assert!(strongly_connected(&[]).is_empty());
    }

    #[test]
    fn long_cycle_does_not_overflow() {
        let n = 200_000;
        let adj: Vec<Vec<usize>> = (0..n).map(|i| vec![(i + 1) % n]).collect();
        assert_eq!(strongly_connected(&adj).len(), 1);
    }

    proptest! {
        #[test]
        fn matches_mutual_reachability(
            edges in proptest::collection::vec((0usize..12, 0usize..12), 0..40)
        ) {
            let mut adj = vec![Vec::new(); 12];
            for (a, b) in edges {
                adj[a].push(b);
            }
            let reach: Vec<Vec<bool>> = (0..12).map(|v| reach(&adj, v)).collect();
            let comps = strongly_connected(&adj);
            let mut owner = [usize::MAX; 12];
            for (i, c) in comps.iter().enumerate() {
                for &v in c {
                    prop_assert_eq!(owner[v], usize::MAX);
                    owner[v] = i;
                }
            }
            for a in 0..12 {
                for b in 0..12 {
                    prop_assert_eq!(owner[a] == owner[b], reach[a][b] && reach[b][a]);
                }
            }
        }
    }
}
