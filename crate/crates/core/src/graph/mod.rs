//! Finite connected multigraphs with labeled oriented edges, together with
//! the directions, turns and edge paths that live on them.
//!
//! Directions are written as tokens: the lowercase edge label is the
//! positively oriented edge (`a`), the uppercase label its reversal (`A`).

mod canon;
mod enumerate;
mod path;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

pub use canon::{canonical_form, canonical_key, canonical_label, graph_key, Canonical, Relabeling};
pub use enumerate::enumerate_high_valence_graphs;
pub use path::{Path, Tightened};

/// An oriented edge germ, packed as `edge << 1 | reversed`.
///
/// The derived order sorts by edge index first and puts the forward
/// direction before the reversed one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dir(u32);

impl Dir {
    pub fn new(edge: usize, forward: bool) -> Self {
        Dir(((edge as u32) << 1) | u32::from(!forward))
    }

    pub fn from_index(index: usize) -> Self {
        Dir(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn edge(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_forward(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn rev(self) -> Self {
        Dir(self.0 ^ 1)
    }
}

/// An unordered pair of directions, stored with the smaller one first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Turn(Dir, Dir);

impl Turn {
    pub fn new(a: Dir, b: Dir) -> Self {
        if a <= b {
            Turn(a, b)
        } else {
            Turn(b, a)
        }
    }

    pub fn first(self) -> Dir {
        self.0
    }

    pub fn second(self) -> Dir {
        self.1
    }

    pub fn is_degenerate(self) -> bool {
        self.0 == self.1
    }

    pub fn contains(self, d: Dir) -> bool {
        self.0 == d || self.1 == d
    }

    /// The other direction of the turn, if `d` belongs to it.
    pub fn partner(self, d: Dir) -> Option<Dir> {
        if self.0 == d {
            Some(self.1)
        } else if self.1 == d {
            Some(self.0)
        } else {
            None
        }
    }

    pub fn map(self, f: impl Fn(Dir) -> Dir) -> Turn {
        Turn::new(f(self.0), f(self.1))
    }
}

/// A finite set of turns on a fixed graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TurnSet(BTreeSet<Turn>);

impl TurnSet {
    pub fn new() -> Self {
        TurnSet(BTreeSet::new())
    }

    pub fn contains(&self, t: &Turn) -> bool {
        self.0.contains(t)
    }

    pub fn insert(&mut self, t: Turn) -> bool {
        self.0.insert(t)
    }

    pub fn remove(&mut self, t: &Turn) -> bool {
        self.0.remove(t)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Turn> + '_ {
        self.0.iter()
    }

    pub fn as_set(&self) -> &BTreeSet<Turn> {
        &self.0
    }

    pub fn is_subset(&self, other: &TurnSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn has_degenerate(&self) -> bool {
        self.0.iter().any(|t| t.is_degenerate())
    }

    pub fn at_vertex(&self, g: &Graph, v: usize) -> TurnSet {
        self.0
            .iter()
            .filter(|t| g.base(t.first()) == v)
            .copied()
            .collect()
    }

    pub fn map(&self, f: impl Fn(Dir) -> Dir) -> TurnSet {
        self.0.iter().map(|t| t.map(&f)).collect()
    }

    /// Parses token pairs such as `[["a","E"],["C","D"]]`.
    pub fn parse<S: AsRef<str>>(g: &Graph, pairs: &[[S; 2]]) -> Result<TurnSet> {
        let mut out = TurnSet::new();
        for [a, b] in pairs {
            let t = g.parse_turn(a.as_ref(), b.as_ref())?;
            if t.is_degenerate() {
                return Err(Error::InvalidTurn(format!(
                    "degenerate turn {{{}, {}}}",
                    a.as_ref(),
                    b.as_ref()
                )));
            }
            out.insert(t);
        }
        Ok(out)
    }
}

impl FromIterator<Turn> for TurnSet {
    fn from_iter<I: IntoIterator<Item = Turn>>(iter: I) -> Self {
        TurnSet(iter.into_iter().collect())
    }
}

impl IntoIterator for TurnSet {
    type Item = Turn;
    type IntoIter = std::collections::btree_set::IntoIter<Turn>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a TurnSet {
    type Item = &'a Turn;
    type IntoIter = std::collections::btree_set::Iter<'a, Turn>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl Extend<Turn> for TurnSet {
    fn extend<I: IntoIterator<Item = Turn>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub label: String,
    pub init: usize,
    pub term: usize,
}

/// A finite multigraph with labeled, positively oriented edges. Loops and
/// parallel edges are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

fn valid_label(label: &str) -> bool {
    let mut chars = label.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl Graph {
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Graph> {
        if vertices.is_empty() {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        let mut names = BTreeSet::new();
        for v in &vertices {
            if !names.insert(v.as_str()) {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{v}`")));
            }
        }
        let mut labels = BTreeSet::new();
        for e in &edges {
            if !valid_label(&e.label) {
                return Err(Error::InvalidGraph(format!(
                    "edge label `{}` must be lowercase ascii",
                    e.label
                )));
            }
            if !labels.insert(e.label.as_str()) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge label `{}`",
                    e.label
                )));
            }
            if e.init >= vertices.len() || e.term >= vertices.len() {
                return Err(Error::InvalidGraph(format!(
                    "edge `{}` has an endpoint outside the vertex set",
                    e.label
                )));
            }
        }
        Ok(Graph { vertices, edges })
    }

    /// Builds a graph from `(label, from, to)` triples naming vertices.
    pub fn from_triples(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Graph> {
        let index: BTreeMap<&str, usize> =
            vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let lookup = |v: &str| {
            index
                .get(v)
                .copied()
                .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex `{v}`")))
        };
        let edges = edges
            .iter()
            .map(|(label, from, to)| {
                Ok(Edge {
                    label: label.to_string(),
                    init: lookup(from)?,
                    term: lookup(to)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Graph::new(vertices.iter().map(|v| v.to_string()).collect(), edges)
    }

    /// The rose with `petals` loops at a single vertex, labeled a, b, c, ...
    pub fn rose(petals: usize) -> Graph {
        let edges = (0..petals)
            .map(|i| Edge {
                label: canonical_label(i),
                init: 0,
                term: 0,
            })
            .collect();
        Graph {
            vertices: vec!["v1".into()],
            edges,
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn dir_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edge_index(&self, label: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.label == label)
    }

    /// Vertex at which the direction starts.
    pub fn base(&self, d: Dir) -> usize {
        let e = &self.edges[d.edge()];
        if d.is_forward() {
            e.init
        } else {
            e.term
        }
    }

    /// Vertex reached by traversing the direction's edge.
    pub fn end(&self, d: Dir) -> usize {
        self.base(d.rev())
    }

    pub fn contains_dir(&self, d: Dir) -> bool {
        d.edge() < self.edges.len()
    }

    pub fn dirs(&self) -> impl Iterator<Item = Dir> + '_ {
        (0..self.dir_count()).map(Dir::from_index)
    }

    pub fn directions_at(&self, v: usize) -> Vec<Dir> {
        self.dirs().filter(|&d| self.base(d) == v).collect()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.init == v) + usize::from(e.term == v))
            .sum()
    }

    pub fn valences(&self) -> Vec<usize> {
        (0..self.vertex_count()).map(|v| self.valence(v)).collect()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut components = n;
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.init), find(&mut parent, e.term));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        components == 1
    }

    /// Nondegenerate turns at `v`, in sorted order.
    pub fn turns_at(&self, v: usize) -> Vec<Turn> {
        let dirs = self.directions_at(v);
        let mut out = Vec::new();
        for (i, &a) in dirs.iter().enumerate() {
            for &b in &dirs[i + 1..] {
                out.push(Turn::new(a, b));
            }
        }
        out
    }

    /// All nondegenerate turns of the graph.
    pub fn all_turns(&self) -> TurnSet {
        (0..self.vertex_count())
            .flat_map(|v| self.turns_at(v))
            .collect()
    }

    /// Number of turns of the graph, degenerate ones included.
    pub fn turn_count_with_degenerate(&self) -> usize {
        self.valences().iter().map(|&k| k * (k + 1) / 2).sum()
    }

    pub fn is_turn(&self, t: Turn) -> bool {
        self.contains_dir(t.first())
            && self.contains_dir(t.second())
            && self.base(t.first()) == self.base(t.second())
    }

    pub fn check_turn_set(&self, t: &TurnSet) -> Result<()> {
        for &turn in t {
            if !self.is_turn(turn) {
                return Err(Error::InvalidTurn(format!(
                    "{{{}, {}}} is not a turn of the graph",
                    self.dir_token(turn.first()),
                    self.dir_token(turn.second())
                )));
            }
        }
        Ok(())
    }

    pub fn dir_token(&self, d: Dir) -> String {
        let label = &self.edges[d.edge()].label;
        if d.is_forward() {
            label.clone()
        } else {
            label.to_ascii_uppercase()
        }
    }

    pub fn parse_dir(&self, token: &str) -> Result<Dir> {
        let forward = match token.chars().next() {
            Some(c) if c.is_ascii_lowercase() => true,
            Some(c) if c.is_ascii_uppercase() => false,
            _ => return Err(Error::UnknownDirection(token.to_string())),
        };
        let label = token.to_ascii_lowercase();
        let expected = if forward {
            label.clone()
        } else {
            label.to_ascii_uppercase()
        };
        if expected != token {
            return Err(Error::UnknownDirection(token.to_string()));
        }
        self.edge_index(&label)
            .map(|e| Dir::new(e, forward))
            .ok_or_else(|| Error::UnknownDirection(token.to_string()))
    }

    pub fn parse_dirs(&self, tokens: &[&str]) -> Result<Vec<Dir>> {
        tokens.iter().map(|t| self.parse_dir(t)).collect()
    }

    pub fn parse_turn(&self, a: &str, b: &str) -> Result<Turn> {
        let t = Turn::new(self.parse_dir(a)?, self.parse_dir(b)?);
        if !self.is_turn(t) {
            return Err(Error::InvalidTurn(format!(
                "{a} and {b} are not at a common vertex"
            )));
        }
        Ok(t)
    }

    /// Token pair sorted as strings, e.g. `["C", "a"]`.
    pub fn turn_tokens(&self, t: Turn) -> [String; 2] {
        let mut pair = [self.dir_token(t.first()), self.dir_token(t.second())];
        pair.sort();
        pair
    }

    pub fn turn_set_tokens(&self, t: &TurnSet) -> Vec<[String; 2]> {
        let mut out: Vec<_> = t.iter().map(|&x| self.turn_tokens(x)).collect();
        out.sort();
        out
    }

    pub fn fmt_turn(&self, t: Turn) -> String {
        let [a, b] = self.turn_tokens(t);
        format!("{{{a},{b}}}")
    }

    /// Replaces one endpoint of an edge; used by fold surgery.
    pub(crate) fn set_endpoint(&mut self, d: Dir, v: usize) {
        let e = &mut self.edges[d.edge()];
        if d.is_forward() {
            e.init = v;
        } else {
            e.term = v;
        }
    }

    pub(crate) fn from_parts_unchecked(vertices: Vec<String>, edges: Vec<Edge>) -> Graph {
        Graph { vertices, edges }
    }

    /// Removes the vertices no edge touches, keeping the order of the rest.
    /// Returns the old-to-new vertex index table.
    pub(crate) fn compact_vertices(&mut self) -> Vec<Option<usize>> {
        let mut used = vec![false; self.vertices.len()];
        for e in &self.edges {
            used[e.init] = true;
            used[e.term] = true;
        }
        let mut table = vec![None; self.vertices.len()];
        let mut kept = Vec::new();
        for (v, name) in self.vertices.iter().enumerate() {
            if used[v] {
                table[v] = Some(kept.len());
                kept.push(name.clone());
            }
        }
        for e in &mut self.edges {
            e.init = table[e.init].unwrap();
            e.term = table[e.term].unwrap();
        }
        self.vertices = kept;
        table
    }

    /// A label not used by any edge, of the form `<stem>`, `<stem>1`, ...
    pub(crate) fn fresh_label(&self, stem: &str) -> String {
        if self.edge_index(stem).is_none() {
            return stem.to_string();
        }
        (1..)
            .map(|i| format!("{stem}{i}"))
            .find(|l| self.edge_index(l).is_none())
            .unwrap()
    }

    pub(crate) fn fresh_vertex(&self) -> String {
        (self.vertices.len() + 1..)
            .map(|i| format!("v{i}"))
            .find(|l| self.vertex_index(l).is_none())
            .unwrap()
    }

    pub(crate) fn push_vertex(&mut self, name: String) -> usize {
        self.vertices.push(name);
        self.vertices.len() - 1
    }

    pub(crate) fn push_edge(&mut self, label: String, init: usize, term: usize) -> usize {
        self.edges.push(Edge { label, init, term });
        self.edges.len() - 1
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges
            .iter()
            .map(|e| {
                format!(
                    "{}:{}->{}",
                    e.label, self.vertices[e.init], self.vertices[e.term]
                )
            })
            .collect();
        write!(f, "[{}]", edges.join(" "))
    }
}

/// First betti number `|E| - |V| + 1`.
pub fn rank(g: &Graph) -> Result<usize> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(g.edge_count() + 1 - g.vertex_count())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValenceProfile {
    /// Per-vertex direction counts, largest first.
    pub valences: Vec<usize>,
    pub high_valence: bool,
}

pub fn valence_profile(g: &Graph) -> ValenceProfile {
    let mut valences = g.valences();
    valences.sort_unstable_by(|a, b| b.cmp(a));
    let high_valence = valences.iter().all(|&k| k >= 3);
    ValenceProfile {
        valences,
        high_valence,
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// The rank-3 graph with vertices v1 (valence 4), v2, v3.
    pub fn gamma_star() -> Graph {
        Graph::from_triples(
            &["v1", "v2", "v3"],
            &[
                ("a", "v1", "v3"),
                ("b", "v2", "v3"),
                ("c", "v3", "v1"),
                ("d", "v2", "v1"),
                ("e", "v2", "v1"),
            ],
        )
        .unwrap()
    }

    /// Every turn of `gamma_star` except {a, C} and {a, D}.
    pub fn t_star(g: &Graph) -> TurnSet {
        TurnSet::parse(
            g,
            &[
                ["d", "e"],
                ["D", "E"],
                ["b", "d"],
                ["B", "c"],
                ["C", "E"],
                ["C", "D"],
                ["A", "c"],
                ["E", "a"],
                ["b", "e"],
                ["A", "B"],
            ],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&gamma_star()), Ok(3));
        assert_eq!(rank(&Graph::rose(1)), Ok(1));
        let tree = Graph::from_triples(&["u", "v"], &[("a", "u", "v")]).unwrap();
        assert_eq!(rank(&tree), Ok(0));
        let split = Graph::from_triples(&["u", "v"], &[("a", "u", "u")]).unwrap();
        assert_eq!(rank(&split), Err(Error::Disconnected));
    }

    #[test]
    fn valence_examples() {
        let p = valence_profile(&gamma_star());
        assert_eq!(p.valences, vec![4, 3, 3]);
        assert!(p.high_valence);
        assert_eq!(valence_profile(&Graph::rose(3)).valences, vec![6]);
        let tree = Graph::from_triples(&["u", "v"], &[("a", "u", "v")]).unwrap();
        let p = valence_profile(&tree);
        assert_eq!(p.valences, vec![1, 1]);
        assert!(!p.high_valence);
    }

    #[test]
    fn tokens_round_trip() {
        let g = gamma_star();
        for d in g.dirs() {
            assert_eq!(g.parse_dir(&g.dir_token(d)), Ok(d));
            assert_eq!(d.rev().rev(), d);
        }
        assert!(g.parse_dir("x").is_err());
        assert!(g.parse_dir("aB").is_err());
        assert_eq!(g.base(g.parse_dir("C").unwrap()), 0);
        assert_eq!(g.directions_at(0).len(), 4);
    }

    #[test]
    fn t_star_shape() {
        let g = gamma_star();
        let t = t_star(&g);
        assert_eq!(t.len(), 10);
        let all = g.all_turns();
        assert_eq!(all.len(), 12);
        let missing: Vec<_> = all
            .iter()
            .filter(|x| !t.contains(x))
            .map(|&x| g.fmt_turn(x))
            .collect();
        assert_eq!(missing, vec!["{C,a}", "{D,a}"]);
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(Graph::from_triples(&["v"], &[("a", "v", "v"), ("a", "v", "v")]).is_err());
        assert!(Graph::from_triples(&["v"], &[("A", "v", "v")]).is_err());
        assert!(Graph::from_triples(&["v"], &[("a", "v", "w")]).is_err());
    }
}
