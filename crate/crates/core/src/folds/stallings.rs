use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{different_length_fold, FoldDescriptor};
use crate::edge_map::EdgeMap;
use crate::error::{Error, Result};
use crate::graph::{canonical_form, graph_key, Dir, Graph, Turn};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FoldKind {
    /// One edge is folded entirely over a longer one.
    DifferentLength,
    /// Proper initial segments of two edges are identified, creating a vertex.
    Partial,
    /// Two whole edges are identified, merging their far endpoints.
    EqualLength,
}

/// One fold of a fold sequence together with isomorphism-invariant keys
/// used to compare sequences living on differently labeled graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldStep {
    pub kind: FoldKind,
    /// The folded turn, in the labels of the source graph.
    pub turn: Turn,
    pub longer: Option<Dir>,
    /// The fold as a map from its source graph to its target graph.
    pub map: EdgeMap,
    /// Key of the source graph decorated with the folded turn.
    pub source_turn_key: String,
    /// Key of the source graph decorated with the turn and the longer direction, plus the kind.
    pub full_key: String,
    /// Key of the bare target graph.
    pub target_key: String,
}

impl FoldStep {
    fn new(kind: FoldKind, turn: Turn, longer: Option<Dir>, map: EdgeMap) -> FoldStep {
        let src = map.source();
        let turns = BTreeSet::from([turn]);
        let source_turn_key = canonical_form(src, &turns, &[]).key;
        let marks: Vec<Dir> = longer.into_iter().collect();
        let full_key = format!("{kind:?}:{}", canonical_form(src, &turns, &marks).key);
        let target_key = graph_key(map.target());
        FoldStep {
            kind,
            turn,
            longer,
            map,
            source_turn_key,
            full_key,
            target_key,
        }
    }

    /// The different-length fold `f` of `g` as a step.
    pub fn from_fold(g: &Graph, f: &FoldDescriptor) -> Result<FoldStep> {
        let fr = different_length_fold(g, f)?;
        Ok(FoldStep::new(
            FoldKind::DifferentLength,
            f.turn,
            Some(f.longer),
            fr.map,
        ))
    }

    pub fn source(&self) -> &Graph {
        self.map.source()
    }

    pub fn target(&self) -> &Graph {
        self.map.target()
    }

    pub fn describe(&self) -> String {
        let g = self.source();
        match self.longer {
            Some(l) => format!(
                "{:?} {}/{}",
                self.kind,
                g.fmt_turn(self.turn),
                g.dir_token(l)
            ),
            None => format!("{:?} {}", self.kind, g.fmt_turn(self.turn)),
        }
    }
}

/// A factorization `m = final_map . steps[n-1] . ... . steps[0]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stallings {
    pub steps: Vec<FoldStep>,
    /// Isomorphism from the last folded graph onto the target of the map.
    pub final_map: EdgeMap,
}

impl Stallings {
    /// Recomposes the folds and the final isomorphism.
    pub fn compose(&self) -> Result<EdgeMap> {
        let mut maps: Vec<EdgeMap> = self.steps.iter().map(|s| s.map.clone()).collect();
        maps.push(self.final_map.clone());
        EdgeMap::compose(&maps)
    }
}

/// Current stage: a graph and a tight map from it to the fixed target.
struct Stage {
    g: Graph,
    vmap: Vec<usize>,
    images: Vec<Vec<Dir>>,
}

impl Stage {
    fn image_of_dir(&self, d: Dir) -> Vec<Dir> {
        let img = &self.images[d.edge()];
        if d.is_forward() {
            img.clone()
        } else {
            img.iter().rev().map(|s| s.rev()).collect()
        }
    }

    /// Sets the image of direction `d` (reversing for reversed directions).
    fn set_image_of_dir(&mut self, d: Dir, path: Vec<Dir>) {
        self.images[d.edge()] = if d.is_forward() {
            path
        } else {
            path.into_iter().rev().map(|s| s.rev()).collect()
        };
    }

    /// Least pair of distinct directions at a vertex whose images start
    /// with the same step.
    fn illegal_turn(&self) -> Option<(Dir, Dir)> {
        let first: Vec<Dir> = self.g.dirs().map(|d| self.image_of_dir(d)[0]).collect();
        for d1 in self.g.dirs() {
            for d2 in self.g.dirs().filter(|&d2| d2 > d1) {
                if self.g.base(d1) == self.g.base(d2) && first[d1.index()] == first[d2.index()] {
                    return Some((d1, d2));
                }
            }
        }
        None
    }

    fn dump(&self, target: &Graph) -> String {
        let mut out = format!("graph {}\n", self.g);
        for (e, img) in self.g.edges().iter().zip(&self.images) {
            let toks: Vec<String> = img.iter().map(|&d| target.dir_token(d)).collect();
            let _ = writeln!(out, "  {} -> {}", e.label, toks.join(" "));
        }
        out
    }
}

fn identity_images(g: &Graph) -> Vec<Vec<Dir>> {
    (0..g.edge_count())
        .map(|e| vec![Dir::new(e, true)])
        .collect()
}

/// Factors a tight map into folds followed by an isomorphism. At every
/// stage the least pair of directions whose images share a first step is
/// folded as far as the images agree.
pub fn stallings_decompose(m: &EdgeMap) -> Result<Stallings> {
    m.check_tight()?;
    let target = m.target().clone();
    let mut stage = Stage {
        g: m.source().clone(),
        vmap: m.vertex_map().to_vec(),
        images: m.images().to_vec(),
    };
    let total: usize = m.images().iter().map(Vec::len).sum();
    let mut steps = Vec::new();
    let mut log = String::new();
    let fail = |message: String, log: &str, stage: &Stage| Error::Stallings {
        message,
        dump: format!("{log}stage {}:\n{}", steps_len(log), stage.dump(&target)),
    };

    // every fold shortens the total image length, so this bound is never hit
    for _ in 0..=total {
        let Some((d1, d2)) = stage.illegal_turn() else {
            break;
        };
        let (p1, p2) = (stage.image_of_dir(d1), stage.image_of_dir(d2));
        let c = p1.iter().zip(&p2).take_while(|(a, b)| a == b).count();
        let _ = writeln!(
            log,
            "stage {}:\n{}  fold {}",
            steps.len(),
            stage.dump(&target),
            stage.g.fmt_turn(Turn::new(d1, d2))
        );
        let g = stage.g.clone();
        let turn = Turn::new(d1, d2);

        if d1.edge() == d2.edge() {
            // both ends of a loop: tightness forces 2c < length
            let e = d1.edge();
            let full = stage.images[e].clone();
            if 2 * c >= full.len() {
                return Err(fail("loop image is not tight".into(), &log, &stage));
            }
            let v = g.base(d1);
            let mut h = g.clone();
            let w = h.push_vertex(h.fresh_vertex());
            h.set_endpoint(Dir::new(e, true), w);
            h.set_endpoint(Dir::new(e, false), w);
            let s = h.push_edge(h.fresh_label("s"), v, w);
            let mut fimg = identity_images(&g);
            let sd = Dir::new(s, true);
            fimg[e] = vec![sd, Dir::new(e, true), sd.rev()];
            let fmap =
                EdgeMap::new_unchecked(g.clone(), h.clone(), (0..g.vertex_count()).collect(), fimg);
            stage.vmap.push(target.end(full[c - 1]));
            stage.images.push(full[..c].to_vec());
            stage.images[e] = full[c..full.len() - c].to_vec();
            stage.g = h;
            steps.push(FoldStep::new(FoldKind::Partial, turn, None, fmap));
        } else if c == p1.len() && c == p2.len() {
            let (u1, u2) = (g.end(d1), g.end(d2));
            if u1 == u2 {
                return Err(fail(
                    format!(
                        "folding {} would collapse a loop; the map is not a homotopy equivalence",
                        g.fmt_turn(turn)
                    ),
                    &log,
                    &stage,
                ));
            }
            // drop the edge of d2 and merge u2 into u1
            let e2 = d2.edge();
            let new_index = |e: usize| if e > e2 { e - 1 } else { e };
            let mut h = g.clone();
            let merge = |v: usize| if v == u2 { u1 } else { v };
            let kept: Vec<crate::graph::Edge> = g
                .edges()
                .iter()
                .enumerate()
                .filter(|&(e, _)| e != e2)
                .map(|(_, ed)| crate::graph::Edge {
                    label: ed.label.clone(),
                    init: merge(ed.init),
                    term: merge(ed.term),
                })
                .collect();
            h = Graph::from_parts_unchecked(h.vertices().to_vec(), kept);
            let table = h.compact_vertices();
            let vmap_f: Vec<usize> = (0..g.vertex_count())
                .map(|v| table[merge(v)].unwrap())
                .collect();
            let d1_new = Dir::new(new_index(d1.edge()), d1.is_forward());
            let fimg: Vec<Vec<Dir>> = (0..g.edge_count())
                .map(|e| {
                    if e == e2 {
                        vec![if d2.is_forward() {
                            d1_new
                        } else {
                            d1_new.rev()
                        }]
                    } else {
                        vec![Dir::new(new_index(e), true)]
                    }
                })
                .collect();
            let fmap = EdgeMap::new_unchecked(g.clone(), h.clone(), vmap_f.clone(), fimg);
            let mut vmap = vec![0; h.vertex_count()];
            for v in 0..g.vertex_count() {
                vmap[vmap_f[v]] = stage.vmap[v];
            }
            stage.images.remove(e2);
            stage.vmap = vmap;
            stage.g = h;
            steps.push(FoldStep::new(FoldKind::EqualLength, turn, None, fmap));
        } else if c == p1.len() || c == p2.len() {
            let (short, long, long_img) = if c == p1.len() {
                (d1, d2, p2)
            } else {
                (d2, d1, p1)
            };
            let f = FoldDescriptor::new(turn, long)?;
            let fr = different_length_fold(&g, &f)?;
            debug_assert_eq!(f.shorter(), short);
            stage.set_image_of_dir(long, long_img[c..].to_vec());
            stage.g = fr.image.clone();
            steps.push(FoldStep::new(
                FoldKind::DifferentLength,
                turn,
                Some(long),
                fr.map,
            ));
        } else {
            let v = g.base(d1);
            let mut h = g.clone();
            let w = h.push_vertex(h.fresh_vertex());
            h.set_endpoint(d1, w);
            h.set_endpoint(d2, w);
            let s = h.push_edge(h.fresh_label("s"), v, w);
            let sd = Dir::new(s, true);
            let mut fimg = identity_images(&g);
            for d in [d1, d2] {
                let ed = Dir::new(d.edge(), true);
                fimg[d.edge()] = if d.is_forward() {
                    vec![sd, ed]
                } else {
                    vec![ed, sd.rev()]
                };
            }
            let fmap =
                EdgeMap::new_unchecked(g.clone(), h.clone(), (0..g.vertex_count()).collect(), fimg);
            stage.vmap.push(target.end(p1[c - 1]));
            stage.images.push(p1[..c].to_vec());
            stage.set_image_of_dir(d1, p1[c..].to_vec());
            stage.set_image_of_dir(d2, p2[c..].to_vec());
            stage.g = h;
            steps.push(FoldStep::new(FoldKind::Partial, turn, None, fmap));
        }
    }
    if stage.illegal_turn().is_some() {
        return Err(fail("fold cap reached".into(), &log, &stage));
    }

    // an immersion that is a homotopy equivalence onto the target is an isomorphism
    let bijective_edges = stage.images.iter().all(|img| img.len() == 1)
        && stage.images.len() == target.edge_count()
        && stage
            .images
            .iter()
            .map(|img| img[0].edge())
            .collect::<BTreeSet<_>>()
            .len()
            == target.edge_count();
    let bijective_vertices = stage.vmap.len() == target.vertex_count()
        && stage.vmap.iter().collect::<BTreeSet<_>>().len() == target.vertex_count();
    if !(bijective_edges && bijective_vertices) {
        return Err(fail(
            "folding stopped at a map that is not an isomorphism".into(),
            &log,
            &stage,
        ));
    }
    let final_map = EdgeMap::new(stage.g.clone(), target.clone(), stage.vmap, stage.images)?;
    Ok(Stallings { steps, final_map })
}

fn steps_len(log: &str) -> usize {
    log.matches("  fold ").count()
}

/// How two closed fold sequences were matched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conjugacy {
    /// The second sequence is the first rotated left by `offset`.
    Rotation { offset: usize },
    /// One fold of the shorter sequence corresponds to two consecutive
    /// folds of the longer one after rotation.
    Subdivided { first_is_longer: bool },
}

fn check_closed(s: &[FoldStep]) -> Result<()> {
    match (s.first(), s.last()) {
        (Some(first), Some(last)) if graph_key(first.source()) != last.target_key => {
            Err(Error::NotClosed)
        }
        _ => Ok(()),
    }
}

/// Matches two closed fold sequences up to cyclic rotation, allowing one
/// fold to be split into two.
pub fn fold_conjugacy(s1: &[FoldStep], s2: &[FoldStep]) -> Result<Option<Conjugacy>> {
    check_closed(s1)?;
    check_closed(s2)?;
    let (n1, n2) = (s1.len(), s2.len());
    if n1 == n2 {
        if n1 == 0 {
            return Ok(Some(Conjugacy::Rotation { offset: 0 }));
        }
        let found = (0..n1).find(|&r| (0..n1).all(|i| s2[i].full_key == s1[(i + r) % n1].full_key));
        return Ok(found.map(|offset| Conjugacy::Rotation { offset }));
    }
    if n1.abs_diff(n2) != 1 || n1.min(n2) == 0 {
        return Ok(None);
    }
    let (long, short, first_is_longer) = if n1 > n2 {
        (s1, s2, true)
    } else {
        (s2, s1, false)
    };
    let n = short.len();
    for r in 0..=n {
        let l = |i: usize| &long[(i + r) % (n + 1)];
        for q in 0..n {
            let s = |i: usize| &short[(i + q) % n];
            let prefix = (0..n - 1).all(|i| s(i).full_key == l(i).full_key);
            let split = s(n - 1).source_turn_key == l(n - 1).source_turn_key
                && s(n - 1).target_key == l(n).target_key;
            if prefix && split {
                return Ok(Some(Conjugacy::Subdivided { first_is_longer }));
            }
        }
    }
    Ok(None)
}

pub fn fold_conjugate(s1: &[FoldStep], s2: &[FoldStep]) -> Result<bool> {
    Ok(fold_conjugacy(s1, s2)?.is_some())
}
