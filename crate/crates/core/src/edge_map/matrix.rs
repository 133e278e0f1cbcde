use super::EdgeMap;

/// Edge-crossing counts of a map. Row `i` counts, for each column edge, how
/// often the image of row edge `i` crosses it in either orientation. Rows
/// and columns are ordered by edge label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMatrix {
    pub labels: Vec<String>,
    pub rows: Vec<Vec<u64>>,
}

pub fn transition_matrix(m: &EdgeMap) -> TransitionMatrix {
    let order = |g: &crate::graph::Graph| {
        let mut idx: Vec<usize> = (0..g.edge_count()).collect();
        idx.sort_by(|&a, &b| g.edges()[a].label.cmp(&g.edges()[b].label));
        idx
    };
    let rows_order = order(m.source());
    let cols_order = order(m.target());
    let mut col_of = vec![0; m.target().edge_count()];
    for (c, &e) in cols_order.iter().enumerate() {
        col_of[e] = c;
    }
    let rows = rows_order
        .iter()
        .map(|&e| {
            let mut row = vec![0u64; cols_order.len()];
            for d in m.image(e) {
                row[col_of[d.edge()]] += 1;
            }
            row
        })
        .collect();
    TransitionMatrix {
        labels: rows_order
            .iter()
            .map(|&e| m.source().edges()[e].label.clone())
            .collect(),
        rows,
    }
}

impl TransitionMatrix {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn identity(labels: Vec<String>) -> TransitionMatrix {
        let n = labels.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
            .collect();
        TransitionMatrix { labels, rows }
    }

    pub fn mul(&self, other: &TransitionMatrix) -> TransitionMatrix {
        let n = self.rows.len();
        let k = other.rows.first().map_or(0, Vec::len);
        let rows = (0..n)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        (0..other.rows.len())
                            .map(|l| self.rows[i][l] * other.rows[l][j])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        TransitionMatrix {
            labels: self.labels.clone(),
            rows,
        }
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.iter().sum()).collect()
    }

    fn support(&self) -> Vec<Vec<bool>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&x| x > 0).collect())
            .collect()
    }
}

fn bool_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).any(|l| a[i][l] && b[l][j])).collect())
        .collect()
}

fn bool_pow(a: &[Vec<bool>], mut exp: usize) -> Vec<Vec<bool>> {
    let n = a.len();
    let mut result: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
    let mut base = a.to_vec();
    while exp > 0 {
        if exp & 1 == 1 {
            result = bool_mul(&result, &base);
        }
        base = bool_mul(&base, &base);
        exp >>= 1;
    }
    result
}

/// Strong connectivity of the digraph with an arc `i -> j` whenever entry `(i, j)` is positive.
pub fn is_irreducible(a: &TransitionMatrix) -> bool {
    let n = a.size();
    if n == 0 {
        return false;
    }
    let s = a.support();
    // reachability closure: (I + A)^(n-1) > 0 everywhere
    let mut with_id = s.clone();
    for (i, row) in with_id.iter_mut().enumerate() {
        row[i] = true;
    }
    bool_pow(&with_id, n.saturating_sub(1).max(1))
        .iter()
        .all(|row| row.iter().all(|&x| x))
}

/// Some power is strictly positive; tested at the Wielandt exponent `n^2 - 2n + 2`.
pub fn is_primitive(a: &TransitionMatrix) -> bool {
    let n = a.size();
    if n == 0 {
        return false;
    }
    let w = n * n - 2 * n + 2;
    bool_pow(&a.support(), w)
        .iter()
        .all(|row| row.iter().all(|&x| x))
}

/// Whether every edge image grows without bound under iteration: each row
/// of the transition matrix reaches a row sum of at least 2 in some power
/// `A^k` with `k <= 2n`.
///
/// A row whose iterates stay bounded only ever reaches rows that stay
/// bounded, and among those some edge lies on a cycle of single-edge
/// images, so its sums stay at 1 forever; a growing row reaches a doubling
/// edge within `n` steps.
pub fn is_expanding(m: &EdgeMap) -> bool {
    if !m.is_self_map() {
        return false;
    }
    let a = transition_matrix(m);
    let n = a.size();
    let mut ok = vec![false; n];
    let mut lengths = vec![1u64; n];
    for _ in 0..2 * n {
        // lengths of the next iterate, saturating since only ">= 2" matters
        lengths = a
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&lengths)
                    .map(|(&x, &l)| x.saturating_mul(l))
                    .fold(0u64, u64::saturating_add)
                    .min(2)
            })
            .collect();
        for (o, &l) in ok.iter_mut().zip(&lengths) {
            *o |= l >= 2;
        }
    }
    ok.into_iter().all(|o| o)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::edge_map::fixtures::fibonacci;
    use crate::graph::fixtures::gamma_star;
    use crate::graph::Graph;

    fn matrix(rows: &[&[u64]]) -> TransitionMatrix {
        TransitionMatrix {
            labels: (0..rows.len()).map(crate::graph::canonical_label).collect(),
            rows: rows.iter().map(|r| r.to_vec()).collect(),
        }
    }

    fn self_map(g: &Graph, images: &[(&str, &[&str])]) -> EdgeMap {
        let images: BTreeMap<String, Vec<String>> = images
            .iter()
            .map(|(l, img)| (l.to_string(), img.iter().map(|s| s.to_string()).collect()))
            .collect();
        EdgeMap::parse_self_map(g, &images).unwrap()
    }

    #[test]
    fn fibonacci_matrix() {
        let a = transition_matrix(&fibonacci());
        assert_eq!(a.rows, vec![vec![1, 1], vec![1, 0]]);
        assert!(is_irreducible(&a));
        assert!(is_primitive(&a));
        assert!(is_expanding(&fibonacci()));
    }

    #[test]
    fn identity_matrix() {
        let id = EdgeMap::identity(&gamma_star());
        let a = transition_matrix(&id);
        assert_eq!(a, TransitionMatrix::identity(a.labels.clone()));
        assert!(!is_irreducible(&a));
        assert!(!is_primitive(&a));
        assert!(!is_expanding(&id));
    }

    #[test]
    fn swap_is_irreducible_not_primitive() {
        let a = matrix(&[&[0, 1], &[1, 0]]);
        assert!(is_irreducible(&a));
        assert!(!is_primitive(&a));
    }

    #[test]
    fn wielandt_extremal_matrix_is_primitive() {
        // the n-cycle with one chord attains the Wielandt bound
        let a = matrix(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 1, 0, 0]]);
        assert!(is_primitive(&a));
        let w = 4 * 4 - 2 * 4 + 2;
        let mut p = a.clone();
        for _ in 1..w - 1 {
            p = p.mul(&a);
        }
        assert!(p.rows.iter().flatten().any(|&x| x == 0));
    }

    #[test]
    fn expansion_needs_a_pumping_cycle() {
        let r2 = Graph::rose(2);
        // a doubles itself forever, b maps to a and grows through it
        assert!(is_expanding(&self_map(
            &r2,
            &[("a", &["a", "a"]), ("b", &["a"])]
        )));
        // a grows but b is a fixed petal
        assert!(!is_expanding(&self_map(
            &r2,
            &[("a", &["a", "b"]), ("b", &["b"])]
        )));
        // a stays a single edge while b grows linearly
        assert!(!is_expanding(&self_map(
            &r2,
            &[("a", &["a"]), ("b", &["b", "a"])]
        )));
        // the image of a has length 2 but never grows further
        assert!(!is_expanding(&self_map(
            &r2,
            &[("a", &["b", "b"]), ("b", &["b"])]
        )));
        // c reaches a doubling edge only after two steps
        let r3 = Graph::rose(3);
        assert!(is_expanding(&self_map(
            &r3,
            &[("a", &["a", "a"]), ("b", &["a"]), ("c", &["b"])]
        )));
    }

    /// Growth oracle: iterate literal image lengths far past the bound and
    /// call a row growing when its length keeps increasing.
    fn grows_by_iteration(m: &EdgeMap) -> bool {
        let a = transition_matrix(m);
        let n = a.size();
        let mut lengths = vec![1u128; n];
        let mut history = Vec::new();
        for _ in 0..8 * n + 8 {
            lengths = a
                .rows
                .iter()
                .map(|r| {
                    r.iter()
                        .zip(&lengths)
                        .map(|(&x, &l)| u128::from(x) * l)
                        .sum()
                })
                .collect();
            history.push(lengths.clone());
        }
        // lengths never decrease; bounded rows settle within n steps
        let last = &history[history.len() - 1];
        let early = &history[n];
        (0..n).all(|i| last[i] > early[i])
    }

    proptest::proptest! {
        #[test]
        fn expansion_matches_iteration(raw in proptest::collection::vec(proptest::collection::vec(0usize..6, 1..4), 3)) {
            let r3 = Graph::rose(3);
            let images: BTreeMap<String, Vec<String>> = raw
                .iter()
                .enumerate()
                .map(|(i, img)| {
                    let toks = img.iter().map(|&d| r3.dir_token(crate::graph::Dir::from_index(d))).collect();
                    (crate::graph::canonical_label(i), toks)
                })
                .collect();
            let m = EdgeMap::parse_self_map(&r3, &images).unwrap();
            proptest::prop_assert_eq!(is_expanding(&m), grows_by_iteration(&m));
        }

        #[test]
        fn composition_multiplies_matrices(i in 0usize..64, j in 0usize..64, li: bool, lj: bool) {
            let fold_at = |g: &Graph, k: usize, first_longer: bool| {
                let turns: Vec<_> = g
                    .all_turns()
                    .iter()
                    .copied()
                    .filter(|t| t.first().edge() != t.second().edge())
                    .collect();
                let t = turns[k % turns.len()];
                let longer = if first_longer { t.first() } else { t.second() };
                let f = crate::folds::FoldDescriptor::new(t, longer).unwrap();
                crate::folds::different_length_fold(g, &f).unwrap()
            };
            let f = fold_at(&gamma_star(), i, li);
            let g = fold_at(&f.image, j, lj);
            let product = transition_matrix(&f.map).mul(&transition_matrix(&g.map));
            let composed = transition_matrix(&f.map.then(&g.map).unwrap());
            proptest::prop_assert_eq!(composed.rows, product.rows);
        }
    }
}
