use std::collections::BTreeSet;

use super::{Dir, Graph, Turn};
use crate::error::{Error, Result};

/// A nonempty edge path, or a loop when `cyclic` is set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    steps: Vec<Dir>,
    cyclic: bool,
}

/// Result of tightening. Paths and loops that cancel completely become
/// `Trivial`; an empty step sequence is never produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tightened {
    Path(Path),
    Trivial,
}

impl Tightened {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Tightened::Trivial)
    }

    pub fn path(&self) -> Option<&Path> {
        match self {
            Tightened::Path(p) => Some(p),
            Tightened::Trivial => None,
        }
    }

    pub fn is_comprehensive(&self, g: &Graph) -> bool {
        match self {
            Tightened::Path(p) => p.is_comprehensive(g),
            Tightened::Trivial => g.edge_count() == 0,
        }
    }
}

impl Path {
    pub fn new(g: &Graph, steps: Vec<Dir>, cyclic: bool) -> Result<Path> {
        if steps.is_empty() {
            return Err(Error::InvalidPath("empty step sequence".into()));
        }
        if let Some(d) = steps.iter().find(|d| !g.contains_dir(**d)) {
            return Err(Error::InvalidPath(format!(
                "direction index {} is not in the graph",
                d.index()
            )));
        }
        for (i, w) in steps.windows(2).enumerate() {
            if g.end(w[0]) != g.base(w[1]) {
                return Err(Error::InvalidPath(format!(
                    "step {} ({}) does not continue step {} ({})",
                    i + 1,
                    g.dir_token(w[1]),
                    i,
                    g.dir_token(w[0])
                )));
            }
        }
        if cyclic && g.end(*steps.last().unwrap()) != g.base(steps[0]) {
            return Err(Error::InvalidPath("loop does not close up".into()));
        }
        Ok(Path { steps, cyclic })
    }

    pub fn parse(g: &Graph, tokens: &[&str], cyclic: bool) -> Result<Path> {
        Path::new(g, g.parse_dirs(tokens)?, cyclic)
    }

    pub(crate) fn new_unchecked(steps: Vec<Dir>, cyclic: bool) -> Path {
        debug_assert!(!steps.is_empty());
        Path { steps, cyclic }
    }

    pub fn steps(&self) -> &[Dir] {
        &self.steps
    }

    pub fn into_steps(self) -> Vec<Dir> {
        self.steps
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn tokens(&self, g: &Graph) -> Vec<String> {
        self.steps.iter().map(|&d| g.dir_token(d)).collect()
    }

    pub fn reversed(&self) -> Path {
        Path {
            steps: self.steps.iter().rev().map(|d| d.rev()).collect(),
            cyclic: self.cyclic,
        }
    }

    /// Consecutive step pairs, including the wrap-around pair of a loop.
    fn adjacent_pairs(&self) -> impl Iterator<Item = (Dir, Dir)> + '_ {
        let wrap = (self.cyclic).then(|| (*self.steps.last().unwrap(), self.steps[0]));
        self.steps.windows(2).map(|w| (w[0], w[1])).chain(wrap)
    }

    pub fn is_tight(&self) -> bool {
        self.adjacent_pairs().all(|(a, b)| b != a.rev())
    }

    /// Every turn `{reverse(a_i), a_(i+1)}`, degenerate ones included.
    pub fn turns_taken(&self) -> BTreeSet<Turn> {
        self.adjacent_pairs()
            .map(|(a, b)| Turn::new(a.rev(), b))
            .collect()
    }

    pub fn is_comprehensive(&self, g: &Graph) -> bool {
        let mut seen = vec![false; g.edge_count()];
        for d in &self.steps {
            if let Some(s) = seen.get_mut(d.edge()) {
                *s = true;
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn tighten(&self) -> Tightened {
        let mut stack: Vec<Dir> = Vec::with_capacity(self.steps.len());
        for &d in &self.steps {
            if stack.last() == Some(&d.rev()) {
                stack.pop();
            } else {
                stack.push(d);
            }
        }
        if self.cyclic {
            let mut start = 0;
            let mut end = stack.len();
            while end - start >= 2 && stack[end - 1] == stack[start].rev() {
                start += 1;
                end -= 1;
            }
            stack = stack[start..end].to_vec();
        }
        if stack.is_empty() {
            Tightened::Trivial
        } else {
            Tightened::Path(Path {
                steps: stack,
                cyclic: self.cyclic,
            })
        }
    }
}
