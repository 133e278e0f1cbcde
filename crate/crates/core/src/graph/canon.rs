//! Canonical forms of decorated graphs under relabeling.
//!
//! Two decorated graphs get the same key iff some bijection of vertices and
//! of edges, with each edge allowed to reverse orientation, preserves
//! incidence and carries one decoration onto the other. The search runs over
//! every edge order and orientation choice and keeps the lexicographically
//! least serialization, pruning branches whose edge prefix is already larger
//! than the best one found.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use super::{Dir, Edge, Graph, Turn, TurnSet};

/// Label of the edge at canonical position `i`: a, b, ..., z, then z26, z27, ...
pub fn canonical_label(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("z{i}")
    }
}

/// How the input graph maps onto its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabeling {
    /// Image of each positively oriented input edge.
    pub edges: Vec<Dir>,
    pub vertices: Vec<usize>,
}

impl Relabeling {
    pub fn apply(&self, d: Dir) -> Dir {
        let img = self.edges[d.edge()];
        if d.is_forward() {
            img
        } else {
            img.rev()
        }
    }

    pub fn inverse(&self) -> Relabeling {
        let mut edges = vec![Dir::new(0, true); self.edges.len()];
        for (old, &new) in self.edges.iter().enumerate() {
            edges[new.edge()] = Dir::new(old, new.is_forward());
        }
        let mut vertices = vec![0; self.vertices.len()];
        for (old, &new) in self.vertices.iter().enumerate() {
            vertices[new] = old;
        }
        Relabeling { edges, vertices }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub key: String,
    /// Canonical representative, edges labeled a, b, ... and vertices v1, v2, ...
    pub graph: Graph,
    pub turns: TurnSet,
    pub marks: Vec<Dir>,
    /// Isomorphism from the input onto `graph`.
    pub relabeling: Relabeling,
}

struct Search<'a> {
    g: &'a Graph,
    turns: Vec<Turn>,
    marks: &'a [Dir],
    perm: Vec<usize>,
    flips: Vec<bool>,
    used: Vec<bool>,
    vnum: Vec<Option<u32>>,
    next_v: u32,
    code: Vec<u32>,
    best: Option<Best>,
}

/// Code, edge order, flips and vertex numbering of the least labeling so far.
type Best = (Vec<u32>, Vec<usize>, Vec<bool>, Vec<u32>);

impl Search<'_> {
    fn prefix_vs_best(&self) -> Ordering {
        match &self.best {
            None => Ordering::Less,
            Some((best, ..)) => self.code.as_slice().cmp(&best[..self.code.len()]),
        }
    }

    fn number(&mut self, v: usize, fresh: &mut Vec<usize>) -> u32 {
        if let Some(n) = self.vnum[v] {
            return n;
        }
        let n = self.next_v;
        self.vnum[v] = Some(n);
        self.next_v += 1;
        fresh.push(v);
        n
    }

    fn dfs(&mut self) {
        let pos = self.perm.len();
        let n = self.g.edge_count();
        if pos == n {
            self.leaf();
            return;
        }
        for e in 0..n {
            if self.used[e] {
                continue;
            }
            for flip in [false, true] {
                let edge = &self.g.edges()[e];
                let (a, b) = if flip {
                    (edge.term, edge.init)
                } else {
                    (edge.init, edge.term)
                };
                let mut fresh = Vec::new();
                let na = self.number(a, &mut fresh);
                let nb = self.number(b, &mut fresh);
                self.code.push(na);
                self.code.push(nb);
                if self.prefix_vs_best() != Ordering::Greater {
                    self.used[e] = true;
                    self.perm.push(e);
                    self.flips.push(flip);
                    self.dfs();
                    self.flips.pop();
                    self.perm.pop();
                    self.used[e] = false;
                }
                self.code.truncate(2 * pos);
                for v in fresh {
                    self.vnum[v] = None;
                    self.next_v -= 1;
                }
            }
        }
    }

    fn new_dir(&self, pos_of: &[usize], d: Dir) -> u32 {
        let flip = self.flips[pos_of[d.edge()]];
        Dir::new(pos_of[d.edge()], d.is_forward() != flip).index() as u32
    }

    fn leaf(&mut self) {
        let mut pos_of = vec![0; self.perm.len()];
        for (pos, &e) in self.perm.iter().enumerate() {
            pos_of[e] = pos;
        }
        let mut pairs: Vec<(u32, u32)> = self
            .turns
            .iter()
            .map(|t| {
                let (x, y) = (
                    self.new_dir(&pos_of, t.first()),
                    self.new_dir(&pos_of, t.second()),
                );
                (x.min(y), x.max(y))
            })
            .collect();
        pairs.sort_unstable();
        let mut full = self.code.clone();
        full.extend(pairs.into_iter().flat_map(|(x, y)| [x, y]));
        full.extend(self.marks.iter().map(|&d| self.new_dir(&pos_of, d)));
        let better = match &self.best {
            None => true,
            Some((best, ..)) => full < *best,
        };
        if better {
            // isolated vertices (only possible without edges) go last
            let mut vnum: Vec<u32> = Vec::with_capacity(self.vnum.len());
            let mut next = self.next_v;
            for v in &self.vnum {
                vnum.push(v.unwrap_or_else(|| {
                    next += 1;
                    next - 1
                }));
            }
            self.best = Some((full, self.perm.clone(), self.flips.clone(), vnum));
        }
    }
}

/// Canonical representative of a graph decorated with a set of turns
/// (degenerate ones allowed) and an ordered list of marked directions.
pub fn canonical_form(g: &Graph, turns: &BTreeSet<Turn>, marks: &[Dir]) -> Canonical {
    let n = g.edge_count();
    let mut search = Search {
        g,
        turns: turns.iter().copied().collect(),
        marks,
        perm: Vec::with_capacity(n),
        flips: Vec::with_capacity(n),
        used: vec![false; n],
        vnum: vec![None; g.vertex_count()],
        next_v: 0,
        code: Vec::with_capacity(2 * n),
        best: None,
    };
    search.dfs();
    let (code, perm, flips, vnum) = search.best.expect("search visits at least one leaf");

    let mut rel_edges = vec![Dir::new(0, true); n];
    for (pos, (&e, &flip)) in perm.iter().zip(&flips).enumerate() {
        rel_edges[e] = Dir::new(pos, !flip);
    }
    let relabeling = Relabeling {
        edges: rel_edges,
        vertices: vnum.iter().map(|&v| v as usize).collect(),
    };

    let m = g.vertex_count();
    let vertices: Vec<String> = (1..=m).map(|i| format!("v{i}")).collect();
    let edges: Vec<Edge> = (0..n)
        .map(|pos| Edge {
            label: canonical_label(pos),
            init: code[2 * pos] as usize,
            term: code[2 * pos + 1] as usize,
        })
        .collect();
    let graph = Graph::from_parts_unchecked(vertices, edges);
    let turn_set: TurnSet = turns
        .iter()
        .map(|t| t.map(|d| relabeling.apply(d)))
        .collect();
    let marks: Vec<Dir> = marks.iter().map(|&d| relabeling.apply(d)).collect();

    let mut key = format!("{m}|");
    key.push_str(
        &graph
            .edges()
            .iter()
            .map(|e| format!("{}-{}", e.init, e.term))
            .collect::<Vec<_>>()
            .join(","),
    );
    key.push('|');
    key.push_str(
        &turn_set
            .iter()
            .map(|t| {
                format!(
                    "{}{}",
                    graph.dir_token(t.first()),
                    graph.dir_token(t.second())
                )
            })
            .collect::<Vec<_>>()
            .join(","),
    );
    if !marks.is_empty() {
        key.push('|');
        key.push_str(
            &marks
                .iter()
                .map(|&d| graph.dir_token(d))
                .collect::<Vec<_>>()
                .join(","),
        );
    }

    Canonical {
        key,
        graph,
        turns: turn_set,
        marks,
        relabeling,
    }
}

/// Key of a graph together with a turn set. Two pairs get the same key
/// exactly when some graph isomorphism carries one turn set onto the other.
pub fn canonical_key(g: &Graph, t: &TurnSet) -> String {
    canonical_form(g, t.as_set(), &[]).key
}

/// Key of the bare graph.
pub fn graph_key(g: &Graph) -> String {
    canonical_form(g, &BTreeSet::new(), &[]).key
}
