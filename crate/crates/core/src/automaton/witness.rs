use std::collections::{BTreeSet, VecDeque};

use super::scc::strongly_connected;
use crate::graph::{Dir, Graph, Path, Turn, TurnSet};

/// Directions as nodes, with an arc `a -> b` when `b` may follow `a` in a
/// loop taking only turns of `t`.
fn successor_lists(g: &Graph, t: &TurnSet) -> Vec<Vec<Dir>> {
    g.dirs()
        .map(|a| {
            g.directions_at(g.end(a))
                .into_iter()
                .filter(|&b| b != a.rev() && t.contains(&Turn::new(a.rev(), b)))
                .collect()
        })
        .collect()
}

fn shortest_path(succ: &[Vec<Dir>], from: Dir, to: Dir) -> Option<Vec<Dir>> {
    if from == to {
        return Some(vec![from]);
    }
    let mut prev: Vec<Option<Dir>> = vec![None; succ.len()];
    let mut queue = VecDeque::from([from]);
    prev[from.index()] = Some(from);
    while let Some(x) = queue.pop_front() {
        for &y in &succ[x.index()] {
            if prev[y.index()].is_none() {
                prev[y.index()] = Some(x);
                if y == to {
                    let mut path = vec![to];
                    let mut cur = to;
                    while cur != from {
                        cur = prev[cur.index()].unwrap();
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(y);
            }
        }
    }
    None
}

/// A tight loop crossing every edge and taking exactly the turns of `t`,
/// or `None` when there is none.
///
/// Such a loop is a closed walk in the digraph of allowed successions, so
/// it lives in one strongly connected component, and that component must
/// contain one realization of every turn and a direction of every edge.
/// Conversely, chaining shortest paths through those requirements inside
/// the component gives a loop. Components and requirements are visited in
/// index order, so the result is deterministic.
pub fn witness_loop(g: &Graph, t: &TurnSet) -> Option<Path> {
    if t.has_degenerate() || t.iter().any(|&x| !g.is_turn(x)) || g.edge_count() == 0 {
        return None;
    }
    let succ = successor_lists(g, t);
    let adjacency: Vec<Vec<usize>> = succ
        .iter()
        .map(|s| s.iter().map(|d| d.index()).collect())
        .collect();
    for comp in strongly_connected(&adjacency) {
        let inside: BTreeSet<Dir> = comp.iter().map(|&i| Dir::from_index(i)).collect();
        let arc_in = |a: Dir, b: Dir| {
            inside.contains(&a) && inside.contains(&b) && succ[a.index()].contains(&b)
        };
        // each turn {x, y} is taken as X then y, or as Y then x
        let arcs: Option<Vec<(Dir, Dir)>> = t
            .iter()
            .map(|turn| {
                let (x, y) = (turn.first(), turn.second());
                [(x.rev(), y), (y.rev(), x)]
                    .into_iter()
                    .find(|&(a, b)| arc_in(a, b))
            })
            .collect();
        let Some(arcs) = arcs else { continue };
        let covered: BTreeSet<usize> = arcs
            .iter()
            .flat_map(|&(a, b)| [a.edge(), b.edge()])
            .collect();
        // an arc to traverse, or a lone direction to pass through
        let mut required: Vec<(Dir, Option<Dir>)> =
            arcs.into_iter().map(|(a, b)| (a, Some(b))).collect();
        let visits: Option<Vec<Dir>> = (0..g.edge_count())
            .filter(|e| !covered.contains(e))
            .map(|e| {
                [Dir::new(e, true), Dir::new(e, false)]
                    .into_iter()
                    .find(|d| inside.contains(d))
            })
            .collect();
        let Some(visits) = visits else { continue };
        required.extend(visits.into_iter().map(|d| (d, None)));
        let start = required[0].0;
        let mut steps = vec![start];
        let mut here = start;
        for &(a, b) in &required {
            let leg = shortest_path(&succ, here, a).expect("same component");
            steps.extend_from_slice(&leg[1..]);
            here = a;
            if let Some(b) = b {
                steps.push(b);
                here = b;
            }
        }
        let back = shortest_path(&succ, here, start).expect("same component");
        steps.extend_from_slice(&back[1..]);
        // the walk ends where it started; a lone direction needs a real cycle
        if steps.len() > 1 {
            steps.pop();
        } else {
            let cycle = succ[start.index()]
                .iter()
                .filter_map(|&b| shortest_path(&succ, b, start))
                .min_by_key(Vec::len)?;
            steps.extend_from_slice(&cycle[..cycle.len() - 1]);
        }
        let path = Path::new(g, steps, true).ok()?;
        if path.is_tight() && path.is_comprehensive(g) && path.turns_taken() == *t.as_set() {
            return Some(path);
        }
    }
    None
}
