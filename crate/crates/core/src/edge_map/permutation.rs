use crate::error::{Error, Result};
use crate::folds::{different_length_fold, is_permissible, push_forward_turn_set, FoldDescriptor};
use crate::graph::{Dir, Graph, Relabeling, TurnSet};

/// A permutation of the directions of a graph's edge labels that commutes
/// with reversal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabelPermutation {
    images: Vec<Dir>,
}

impl LabelPermutation {
    /// Images indexed by direction index.
    pub fn new(images: Vec<Dir>) -> Result<LabelPermutation> {
        let n = images.len();
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidPermutation("odd number of directions".into()));
        }
        let mut seen = vec![false; n];
        for (i, &d) in images.iter().enumerate() {
            if d.index() >= n || std::mem::replace(&mut seen[d.index()], true) {
                return Err(Error::InvalidPermutation("not a bijection".into()));
            }
            if images[Dir::from_index(i).rev().index()] != d.rev() {
                return Err(Error::InvalidPermutation(format!(
                    "does not commute with reversal at direction {i}"
                )));
            }
        }
        Ok(LabelPermutation { images })
    }

    pub fn identity(edge_count: usize) -> LabelPermutation {
        LabelPermutation {
            images: (0..2 * edge_count).map(Dir::from_index).collect(),
        }
    }

    /// Builds a permutation from cycles of direction tokens; directions not
    /// mentioned are fixed. `[["a","d","b"]]` sends a to d, d to b, b to a.
    pub fn from_cycles<S: AsRef<str>>(g: &Graph, cycles: &[Vec<S>]) -> Result<LabelPermutation> {
        let mut images: Vec<Option<Dir>> = vec![None; g.dir_count()];
        for cycle in cycles {
            let dirs: Vec<Dir> = cycle
                .iter()
                .map(|t| g.parse_dir(t.as_ref()))
                .collect::<Result<_>>()?;
            for (i, &d) in dirs.iter().enumerate() {
                let next = dirs[(i + 1) % dirs.len()];
                if images[d.index()].replace(next).is_some() {
                    return Err(Error::InvalidPermutation(format!(
                        "{} appears twice",
                        g.dir_token(d)
                    )));
                }
            }
        }
        LabelPermutation::new(
            images
                .into_iter()
                .enumerate()
                .map(|(i, d)| d.unwrap_or(Dir::from_index(i)))
                .collect(),
        )
    }

    /// The direction permutation underlying a relabeling between two graphs
    /// with the same edge count.
    pub fn from_relabeling(rel: &Relabeling) -> LabelPermutation {
        let images = (0..2 * rel.edges.len())
            .map(|i| rel.apply(Dir::from_index(i)))
            .collect();
        LabelPermutation { images }
    }

    pub fn apply(&self, d: Dir) -> Dir {
        self.images[d.index()]
    }

    pub fn dir_count(&self) -> usize {
        self.images.len()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &LabelPermutation) -> LabelPermutation {
        LabelPermutation {
            images: self.images.iter().map(|&d| other.apply(d)).collect(),
        }
    }

    pub fn inverse(&self) -> LabelPermutation {
        let mut images = vec![Dir::from_index(0); self.images.len()];
        for (i, &d) in self.images.iter().enumerate() {
            images[d.index()] = Dir::from_index(i);
        }
        LabelPermutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, d)| d.index() == i)
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.then(self);
            k += 1;
        }
        k
    }
}

/// Continues a fold sequence by translating each fold `|seed|` steps back
/// through `sigma`, up to `total` folds.
///
/// The seed must carry `(start, turns)` to a graph and turn set that
/// `sigma` identifies with the start: the base of `sigma(d)` after the seed
/// corresponds, through one vertex bijection, to the base of `d` before.
pub fn extend_fold_sequence(
    start: &Graph,
    turns: &TurnSet,
    seed: &[FoldDescriptor],
    sigma: &LabelPermutation,
    total: usize,
) -> Result<Vec<FoldDescriptor>> {
    if sigma.dir_count() != start.dir_count() {
        return Err(Error::InvalidPermutation(
            "permutation size does not match the graph".into(),
        ));
    }
    if seed.is_empty() {
        return Err(Error::InvalidFold("empty seed".into()));
    }
    let step = |g: &Graph, t: &TurnSet, f: &FoldDescriptor, i: usize| -> Result<(Graph, TurnSet)> {
        if !g.is_turn(f.turn) || !is_permissible(t, f) {
            return Err(Error::NotPermissible(format!(
                "fold {i} ({}) is not permissible",
                f.display(g)
            )));
        }
        let fr = different_length_fold(g, f)?;
        let pushed = push_forward_turn_set(t, &fr)?;
        Ok((fr.image, pushed))
    };

    let (mut g, mut t) = (start.clone(), turns.clone());
    for (i, f) in seed.iter().enumerate() {
        (g, t) = step(&g, &t, f, i)?;
    }
    let mut beta = vec![None; start.vertex_count()];
    for d in start.dirs() {
        let w = g.base(sigma.apply(d));
        match beta[start.base(d)] {
            Some(x) if x != w => {
                return Err(Error::InvalidPermutation(
                    "the seed does not return to the start up to the permutation".into(),
                ))
            }
            _ => beta[start.base(d)] = Some(w),
        }
    }
    let hit: std::collections::BTreeSet<_> = beta.iter().flatten().collect();
    if hit.len() != start.vertex_count() || g.vertex_count() != start.vertex_count() {
        return Err(Error::InvalidPermutation(
            "the seed does not return to the start up to the permutation".into(),
        ));
    }
    if t != turns.map(|d| sigma.apply(d)) {
        return Err(Error::InvalidPermutation(
            "the seed does not carry the turn set to its image under the permutation".into(),
        ));
    }

    let mut folds: Vec<FoldDescriptor> = seed.iter().copied().take(total).collect();
    for i in seed.len()..total {
        let f = folds[i - seed.len()].map(|d| sigma.apply(d));
        (g, t) = step(&g, &t, &f, i)?;
        folds.push(f);
    }
    Ok(folds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::gamma_star;

    fn sigma(g: &Graph) -> LabelPermutation {
        LabelPermutation::from_cycles(g, &[vec!["a", "d", "b", "e", "C", "A", "D", "B", "E", "c"]])
            .unwrap()
    }

    #[test]
    fn ten_cycle_has_order_ten() {
        let g = gamma_star();
        let s = sigma(&g);
        assert_eq!(s.order(), 10);
        for d in g.dirs() {
            assert_eq!(s.apply(d.rev()), s.apply(d).rev());
        }
        assert!(s.then(&s.inverse()).is_identity());
    }

    #[test]
    fn rejects_non_permutations() {
        let g = gamma_star();
        assert!(LabelPermutation::from_cycles(&g, &[vec!["a", "b"]]).is_err());
        assert!(LabelPermutation::from_cycles(&g, &[vec!["a", "b"], vec!["A", "B"]]).is_ok());
        assert!(LabelPermutation::from_cycles(&g, &[vec!["a", "b"], vec!["a", "c"]]).is_err());
        let a = Dir::from_index(0);
        assert!(LabelPermutation::new(vec![a, a]).is_err());
    }

    #[test]
    fn seed_must_close_up() {
        // on the rose every fold returns the rose with the same labels
        let r2 = Graph::rose(2);
        let f = FoldDescriptor::parse(&r2, ["a", "b"], "a").unwrap();
        let t = TurnSet::new();
        let err =
            extend_fold_sequence(&r2, &t, &[f], &LabelPermutation::identity(2), 2).unwrap_err();
        // the pushed turn set gained the interior turn, so the seed is not closed
        assert!(matches!(err, Error::InvalidPermutation(_)));
    }
}
