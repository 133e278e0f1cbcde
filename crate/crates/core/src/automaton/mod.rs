//! The rank-3 fold automaton: seed states, closure under permissible
//! folds, strongly connected components, and maps composed along loops.

mod scc;
mod witness;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;

use crate::edge_map::EdgeMap;
use crate::error::{Error, Result};
use crate::folds::{
    different_length_fold, partial_fold_graph, push_forward_turn_set, FoldDescriptor, FoldStep,
};
use crate::graph::{
    canonical_form, enumerate_high_valence_graphs, graph_key, Dir, Graph, Path, Relabeling, Turn,
    TurnSet,
};
use crate::whitehead::{certify, Certificate};

pub(crate) use scc::strongly_connected;
pub use witness::witness_loop;

pub const DEFAULT_STATE_CAP: usize = 100_000;

/// The direction shared by the only two missing turns, when the state is a
/// rank-3 graph with valences 4, 3, 3 and both missing turns sit at the
/// valence-4 vertex.
pub fn lonely_direction(g: &Graph, t: &TurnSet) -> Option<Dir> {
    if g.edge_count() != 5 || g.vertex_count() != 3 || !g.is_connected() {
        return None;
    }
    let mut valences = g.valences();
    valences.sort_unstable();
    if valences != [3, 3, 4] {
        return None;
    }
    let missing: Vec<Turn> = g
        .all_turns()
        .into_iter()
        .filter(|x| !t.contains(x))
        .collect();
    let [p, q] = missing[..] else { return None };
    let v = g.base(p.first());
    if g.valence(v) != 4 || g.base(q.first()) != v {
        return None;
    }
    [p.first(), p.second()].into_iter().find(|&d| q.contains(d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomatonState {
    pub key: String,
    /// Canonical representative.
    pub graph: Graph,
    pub turn_set: TurnSet,
    pub distinguished: Option<Dir>,
}

impl AutomatonState {
    /// Canonicalizes `(g, t)`; the relabeling maps `g` onto the state graph.
    pub fn from_parts(g: &Graph, t: &TurnSet) -> (AutomatonState, Relabeling) {
        let canon = canonical_form(g, t.as_set(), &[]);
        let distinguished = lonely_direction(&canon.graph, &canon.turns);
        let state = AutomatonState {
            key: canon.key,
            graph: canon.graph,
            turn_set: canon.turns,
            distinguished,
        };
        (state, canon.relabeling)
    }

    /// Nondegenerate turns of the graph not in the turn set.
    pub fn missing_turns(&self) -> Vec<Turn> {
        self.graph
            .all_turns()
            .into_iter()
            .filter(|t| !self.turn_set.contains(t))
            .collect()
    }

    /// Every different-length fold of a missing turn. Turns between the
    /// two ends of one loop have none.
    pub fn folds(&self) -> Vec<FoldDescriptor> {
        self.missing_turns()
            .into_iter()
            .filter(|t| t.first().edge() != t.second().edge())
            .flat_map(|t| [t.first(), t.second()].map(|longer| FoldDescriptor { turn: t, longer }))
            .collect()
    }

    /// Applies a fold and canonicalizes the result.
    pub fn fold(&self, f: &FoldDescriptor) -> Result<(AutomatonState, EdgeMap)> {
        let fr = different_length_fold(&self.graph, f)?;
        let pushed = push_forward_turn_set(&self.turn_set, &fr)?;
        let (next, rel) = AutomatonState::from_parts(&fr.image, &pushed);
        let iso = EdgeMap::from_relabeling(&fr.image, &next.graph, &rel);
        Ok((next, fr.map.then(&iso)?))
    }

    /// Missing turns and the distinguished direction, e.g. `-{a,C} -{a,D} *a`.
    pub fn summary(&self) -> String {
        let mut parts: Vec<String> = self
            .missing_turns()
            .iter()
            .map(|&t| format!("-{}", self.graph.fmt_turn(t)))
            .collect();
        if let Some(d) = self.distinguished {
            parts.push(format!("*{}", self.graph.dir_token(d)));
        }
        parts.join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AutomatonEdge {
    pub from: String,
    /// In the labels of the source state's graph.
    pub fold: FoldDescriptor,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    pub state: AutomatonState,
    /// Tight loop crossing every edge and taking exactly the state's turns.
    pub witness: Path,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Automaton {
    pub states: BTreeMap<String, AutomatonState>,
    pub edges: BTreeSet<AutomatonEdge>,
    /// Witness loops of the seed states, keyed by state.
    pub witness_loops: BTreeMap<String, Path>,
}

impl Automaton {
    pub fn state(&self, key: &str) -> Result<&AutomatonState> {
        self.states
            .get(key)
            .ok_or_else(|| Error::InvalidLoop(format!("unknown state `{key}`")))
    }

    /// Edges in their stored order; loop files refer to edges by position here.
    pub fn edge_list(&self) -> Vec<&AutomatonEdge> {
        self.edges.iter().collect()
    }

    pub fn out_edges<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a AutomatonEdge> + 'a {
        self.edges.iter().filter(move |e| e.from == key)
    }

    pub fn seed_keys(&self) -> Vec<&str> {
        self.witness_loops.keys().map(String::as_str).collect()
    }

    /// Out-degree of every state.
    pub fn out_degrees(&self) -> BTreeMap<&str, usize> {
        let mut deg: BTreeMap<&str, usize> = self.states.keys().map(|k| (k.as_str(), 0)).collect();
        for e in &self.edges {
            *deg.get_mut(e.from.as_str()).unwrap() += 1;
        }
        deg
    }
}

/// Every state with a lonely direction, realizable or not, deduplicated up
/// to relabeling and ordered by key.
pub fn lonely_direction_states(rank: usize) -> Result<Vec<AutomatonState>> {
    if rank != 3 {
        return Err(Error::UnsupportedRank(rank));
    }
    let mut states: BTreeMap<String, AutomatonState> = BTreeMap::new();
    for g in enumerate_high_valence_graphs(3, 5) {
        let Some(v) = (0..g.vertex_count()).find(|&v| g.valence(v) == 4) else {
            continue;
        };
        for d in g.directions_at(v) {
            let with_d: Vec<Turn> = g
                .turns_at(v)
                .into_iter()
                .filter(|t| t.contains(d))
                .collect();
            for i in 0..with_d.len() {
                for j in i + 1..with_d.len() {
                    let mut t = g.all_turns();
                    t.remove(&with_d[i]);
                    t.remove(&with_d[j]);
                    let (state, _) = AutomatonState::from_parts(&g, &t);
                    states.entry(state.key.clone()).or_insert(state);
                }
            }
        }
    }
    Ok(states.into_values().collect())
}

/// The states of [`lonely_direction_states`] whose turn set is realized by
/// a comprehensive tight loop, each with such a loop.
pub fn seed_states(rank: usize) -> Result<Vec<Seed>> {
    Ok(lonely_direction_states(rank)?
        .into_iter()
        .filter_map(|state| {
            let witness = witness_loop(&state.graph, &state.turn_set)?;
            Some(Seed { state, witness })
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Schedule {
    #[default]
    BreadthFirst,
    DepthFirst,
    /// Breadth-first with each frontier expanded concurrently.
    ParallelBreadthFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildConfig {
    pub state_cap: usize,
    pub schedule: Schedule,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            state_cap: DEFAULT_STATE_CAP,
            schedule: Schedule::BreadthFirst,
        }
    }
}

type Expansion = Vec<(FoldDescriptor, AutomatonState)>;

fn expand(state: &AutomatonState) -> Result<Expansion> {
    state
        .folds()
        .into_iter()
        .map(|f| {
            let fr = different_length_fold(&state.graph, &f)?;
            let pushed = push_forward_turn_set(&state.turn_set, &fr)?;
            Ok((f, AutomatonState::from_parts(&fr.image, &pushed).0))
        })
        .collect()
}

/// Closes the seeds under permissible folds. The result does not depend on
/// the schedule.
pub fn build(seeds: &[Seed], config: &BuildConfig) -> Result<Automaton> {
    let mut a = Automaton::default();
    for s in seeds {
        a.witness_loops
            .insert(s.state.key.clone(), s.witness.clone());
    }
    close(a, seeds.iter().map(|s| &s.state), config)
}

/// Like [`build`], but from bare states with no witness loops, so that
/// unrealizable turn sets can be explored too.
pub fn build_from_states(states: &[AutomatonState], config: &BuildConfig) -> Result<Automaton> {
    close(Automaton::default(), states.iter(), config)
}

fn close<'a>(
    mut a: Automaton,
    start: impl Iterator<Item = &'a AutomatonState>,
    config: &BuildConfig,
) -> Result<Automaton> {
    let mut frontier: VecDeque<String> = VecDeque::new();
    for s in start {
        if a.states.insert(s.key.clone(), s.clone()).is_none() {
            frontier.push_back(s.key.clone());
        }
    }
    let over_cap = |a: &Automaton| a.states.len() > config.state_cap;
    if over_cap(&a) {
        return Err(Error::StateCapExceeded {
            cap: config.state_cap,
            partial: Box::new(a),
        });
    }

    let record = |a: &mut Automaton, from: &str, out: Expansion, next: &mut Vec<String>| {
        for (fold, state) in out {
            a.edges.insert(AutomatonEdge {
                from: from.to_string(),
                fold,
                to: state.key.clone(),
            });
            if !a.states.contains_key(&state.key) {
                next.push(state.key.clone());
                a.states.insert(state.key.clone(), state);
            }
        }
    };

    match config.schedule {
        Schedule::BreadthFirst | Schedule::DepthFirst => {
            let depth_first = config.schedule == Schedule::DepthFirst;
            let mut popped = if depth_first {
                frontier.pop_back()
            } else {
                frontier.pop_front()
            };
            while let Some(key) = popped {
                let out = expand(&a.states[&key])?;
                let mut next = Vec::new();
                record(&mut a, &key, out, &mut next);
                frontier.extend(next);
                if over_cap(&a) {
                    return Err(Error::StateCapExceeded {
                        cap: config.state_cap,
                        partial: Box::new(a),
                    });
                }
                popped = if depth_first {
                    frontier.pop_back()
                } else {
                    frontier.pop_front()
                };
            }
        }
        Schedule::ParallelBreadthFirst => {
            let mut layer: Vec<String> = frontier.into_iter().collect();
            while !layer.is_empty() {
                let outs: Vec<Result<Expansion>> =
                    layer.par_iter().map(|k| expand(&a.states[k])).collect();
                let mut next = Vec::new();
                for (key, out) in layer.iter().zip(outs) {
                    record(&mut a, key, out?, &mut next);
                }
                if over_cap(&a) {
                    return Err(Error::StateCapExceeded {
                        cap: config.state_cap,
                        partial: Box::new(a),
                    });
                }
                layer = next;
            }
        }
    }
    Ok(a)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Sorted state keys.
    pub states: Vec<String>,
    /// Edges with both ends in the component.
    pub edges: Vec<AutomatonEdge>,
}

impl Component {
    /// Has at least one edge; a lone state counts only with a self-loop.
    pub fn is_nontrivial(&self) -> bool {
        !self.edges.is_empty()
    }

    pub fn is_singleton(&self) -> bool {
        self.states.len() == 1
    }

    pub fn contains(&self, key: &str) -> bool {
        self.states
            .binary_search_by(|k| k.as_str().cmp(key))
            .is_ok()
    }
}

/// All strongly connected components, ordered by least state key.
pub fn sccs(a: &Automaton) -> Vec<Component> {
    let keys: Vec<&String> = a.states.keys().collect();
    let index: BTreeMap<&str, usize> = keys
        .iter()
        .enumerate()
        .map(|(i, k)| (k.as_str(), i))
        .collect();
    let mut adj = vec![Vec::new(); keys.len()];
    for e in &a.edges {
        adj[index[e.from.as_str()]].push(index[e.to.as_str()]);
    }
    let comps = strongly_connected(&adj);
    let mut owner = vec![0; keys.len()];
    for (c, comp) in comps.iter().enumerate() {
        for &v in comp {
            owner[v] = c;
        }
    }
    let mut edges: Vec<Vec<AutomatonEdge>> = vec![Vec::new(); comps.len()];
    for e in &a.edges {
        let (x, y) = (index[e.from.as_str()], index[e.to.as_str()]);
        if owner[x] == owner[y] {
            edges[owner[x]].push(e.clone());
        }
    }
    comps
        .into_iter()
        .zip(edges)
        .map(|(comp, edges)| Component {
            states: comp.into_iter().map(|i| keys[i].clone()).collect(),
            edges,
        })
        .collect()
}

pub fn nontrivial_components(a: &Automaton) -> Vec<Component> {
    sccs(a)
        .into_iter()
        .filter(Component::is_nontrivial)
        .collect()
}

/// The nontrivial component with the most states, ties going to the one
/// with the least key.
pub fn primary_component(a: &Automaton) -> Option<Component> {
    nontrivial_components(a).into_iter().min_by(|x, y| {
        y.states
            .len()
            .cmp(&x.states.len())
            .then_with(|| x.states[0].cmp(&y.states[0]))
    })
}

/// Looks up edges by their position in [`Automaton::edge_list`].
pub fn loop_from_indices(a: &Automaton, indices: &[usize]) -> Result<Vec<AutomatonEdge>> {
    let list = a.edge_list();
    indices
        .iter()
        .map(|&i| {
            list.get(i).map(|&e| e.clone()).ok_or_else(|| {
                Error::InvalidLoop(format!(
                    "edge index {i} out of range ({} edges)",
                    list.len()
                ))
            })
        })
        .collect()
}

fn check_closed(walk: &[AutomatonEdge]) -> Result<()> {
    if walk.is_empty() {
        return Err(Error::NotClosed);
    }
    for (i, e) in walk.iter().enumerate() {
        let next = &walk[(i + 1) % walk.len()];
        if e.to != next.from {
            return Err(Error::NotClosed);
        }
    }
    Ok(())
}

/// Composes the folds along a closed walk, each followed by the
/// isomorphism onto the next state's canonical graph, into a self-map of
/// the first state's graph.
pub fn loop_to_map(a: &Automaton, walk: &[AutomatonEdge]) -> Result<EdgeMap> {
    check_closed(walk)?;
    let maps: Vec<EdgeMap> = walk
        .iter()
        .map(|e| {
            let (next, map) = a.state(&e.from)?.fold(&e.fold)?;
            if next.key != e.to {
                return Err(Error::InvalidLoop(format!(
                    "the fold of edge {} -> {} lands on another state",
                    e.from, e.to
                )));
            }
            Ok(map)
        })
        .collect::<Result<_>>()?;
    EdgeMap::compose(&maps)
}

/// The folds along a walk as fold steps, for comparing with a Stallings
/// factorization.
pub fn fold_steps(a: &Automaton, walk: &[AutomatonEdge]) -> Result<Vec<FoldStep>> {
    walk.iter()
        .map(|e| FoldStep::from_fold(&a.state(&e.from)?.graph, &e.fold))
        .collect()
}

/// Certificate of the map composed along a loop, in rank 3.
pub fn certify_loop(
    a: &Automaton,
    walk: &[AutomatonEdge],
    pnp_free: bool,
    transparency_cap: usize,
) -> Result<Certificate> {
    certify(&loop_to_map(a, walk)?, 3, pnp_free, transparency_cap)
}

/// Closed walks of length `1..=max_len` inside `comp`, each listed once up
/// to rotation, as the least rotation by edge order. Shorter walks first.
pub fn closed_walks(comp: &Component, max_len: usize) -> Vec<Vec<AutomatonEdge>> {
    let mut out_edges: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, e) in comp.edges.iter().enumerate() {
        out_edges.entry(e.from.as_str()).or_default().push(i);
    }
    let is_least_rotation =
        |w: &[usize]| (1..w.len()).all(|r| w[r..].iter().chain(&w[..r]).cmp(w.iter()).is_ge());
    let mut result = Vec::new();
    for len in 1..=max_len {
        let mut stack: Vec<Vec<usize>> = (0..comp.edges.len()).map(|i| vec![i]).collect();
        stack.reverse();
        while let Some(w) = stack.pop() {
            let first = &comp.edges[w[0]];
            let last = &comp.edges[*w.last().unwrap()];
            if w.len() == len {
                if last.to == first.from && is_least_rotation(&w) {
                    result.push(w.iter().map(|&i| comp.edges[i].clone()).collect());
                }
                continue;
            }
            // a least rotation never continues with an edge below its first
            for &i in out_edges.get(last.to.as_str()).into_iter().flatten().rev() {
                if i >= w[0] {
                    let mut next = w.clone();
                    next.push(i);
                    stack.push(next);
                }
            }
        }
    }
    result
}

/// Rotations of a closed walk, starting with the walk itself.
pub fn rotations(walk: &[AutomatonEdge]) -> Vec<Vec<AutomatonEdge>> {
    (0..walk.len())
        .map(|r| walk[r..].iter().chain(&walk[..r]).cloned().collect())
        .collect()
}

/// Graphs halfway through each fold of the primary component, one per
/// isomorphism type, sorted by key.
pub fn partial_fold_graphs(a: &Automaton) -> Result<Vec<Graph>> {
    let mut out: BTreeMap<String, Graph> = BTreeMap::new();
    if let Some(primary) = primary_component(a) {
        for e in &primary.edges {
            let g = partial_fold_graph(&a.state(&e.from)?.graph, &e.fold)?;
            out.entry(graph_key(&g)).or_insert(g);
        }
    }
    Ok(out.into_values().collect())
}

/// Distinct underlying graphs of the primary component together with its
/// partial fold graphs.
pub fn graph_census(a: &Automaton) -> Result<BTreeSet<String>> {
    let mut keys: BTreeSet<String> = BTreeSet::new();
    if let Some(primary) = primary_component(a) {
        for k in &primary.states {
            keys.insert(graph_key(&a.state(k)?.graph));
        }
    }
    for g in partial_fold_graphs(a)? {
        keys.insert(graph_key(&g));
    }
    Ok(keys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::{gamma_star, t_star};
    use crate::graph::{canonical_key, valence_profile};

    #[test]
    fn lonely_direction_of_t_star() {
        let g = gamma_star();
        let t = t_star(&g);
        assert_eq!(lonely_direction(&g, &t), g.parse_dir("a").ok());
        assert_eq!(lonely_direction(&g, &g.all_turns()), None);
        let mut spread = g.all_turns();
        spread.remove(&g.parse_turn("a", "C").unwrap());
        spread.remove(&g.parse_turn("D", "E").unwrap());
        assert_eq!(lonely_direction(&g, &spread), None);
    }

    #[test]
    fn t_star_is_a_seed() {
        let seeds = seed_states(3).unwrap();
        let g = gamma_star();
        let key = canonical_key(&g, &t_star(&g));
        let seed = seeds
            .iter()
            .find(|s| s.state.key == key)
            .expect("seed present");
        assert_eq!(
            seed.state
                .distinguished
                .map(|d| seed.state.graph.valence(seed.state.graph.base(d))),
            Some(4)
        );
        for s in &seeds {
            assert_eq!(valence_profile(&s.state.graph).valences, vec![4, 3, 3]);
            assert!(s.witness.is_tight());
            assert!(s.witness.is_comprehensive(&s.state.graph));
            assert_eq!(&s.witness.turns_taken(), s.state.turn_set.as_set());
        }
    }

    #[test]
    fn other_ranks_are_unsupported() {
        assert_eq!(seed_states(2), Err(Error::UnsupportedRank(2)));
    }

    #[test]
    fn state_fold_matches_push_forward() {
        let g = gamma_star();
        let (state, _) = AutomatonState::from_parts(&g, &t_star(&g));
        let folds = state.folds();
        assert_eq!(folds.len(), 4);
        for f in folds {
            let (next, map) = state.fold(&f).unwrap();
            assert_eq!(map.source(), &state.graph);
            assert_eq!(map.target(), &next.graph);
            assert!(next.distinguished.is_some());
        }
    }

    #[test]
    fn closed_walks_on_a_small_component() {
        let f = |from: &str, to: &str, n: u32| AutomatonEdge {
            from: from.into(),
            fold: FoldDescriptor {
                turn: Turn::new(Dir::from_index(0), Dir::from_index(n as usize + 1)),
                longer: Dir::from_index(0),
            },
            to: to.into(),
        };
        let comp = Component {
            states: vec!["x".into(), "y".into()],
            edges: vec![f("x", "x", 0), f("x", "y", 1), f("y", "x", 2)],
        };
        let walks = closed_walks(&comp, 3);
        let shape: Vec<usize> = walks.iter().map(Vec::len).collect();
        // x; xx, x->y->x; xxx, x x->y->x
        assert_eq!(shape, vec![1, 2, 2, 3, 3]);
        for w in &walks {
            check_closed(w).unwrap();
        }
    }

    #[test]
    fn open_walks_are_rejected() {
        let a = Automaton::default();
        assert_eq!(loop_to_map(&a, &[]), Err(Error::NotClosed));
    }

    fn rank3() -> (Vec<Seed>, Automaton) {
        let seeds = seed_states(3).unwrap();
        let a = build(&seeds, &BuildConfig::default()).unwrap();
        (seeds, a)
    }

    #[test]
    fn edges_are_sound() {
        let (_, a) = rank3();
        for e in &a.edges {
            let s = &a.states[&e.from];
            assert!(crate::folds::is_permissible(&s.turn_set, &e.fold));
            let fr = different_length_fold(&s.graph, &e.fold).unwrap();
            let pushed = push_forward_turn_set(&s.turn_set, &fr).unwrap();
            assert_eq!(canonical_key(&fr.image, &pushed), e.to);
        }
    }

    #[test]
    fn witness_loops_agree_with_push_forward() {
        let (seeds, a) = rank3();
        for seed in &seeds {
            for e in a.out_edges(&seed.state.key) {
                let (next, map) = seed.state.fold(&e.fold).unwrap();
                let image = map.apply(&seed.witness).unwrap();
                assert!(image.is_tight());
                assert!(image.is_comprehensive(&next.graph));
                assert_eq!(&image.turns_taken(), next.turn_set.as_set());
            }
        }
    }

    #[test]
    fn every_state_has_a_lonely_direction() {
        let (_, a) = rank3();
        for s in a.states.values() {
            assert!(s.distinguished.is_some(), "{}", s.key);
            assert_eq!(lonely_direction(&s.graph, &s.turn_set), s.distinguished);
            let d = a.out_degrees()[s.key.as_str()];
            assert!((1..=4).contains(&d));
        }
    }

    #[test]
    fn schedules_agree() {
        let seeds = seed_states(3).unwrap();
        let encoded: Vec<String> = [
            Schedule::BreadthFirst,
            Schedule::DepthFirst,
            Schedule::ParallelBreadthFirst,
        ]
        .into_iter()
        .map(|schedule| {
            let config = BuildConfig {
                schedule,
                ..BuildConfig::default()
            };
            crate::io::encode_automaton(&build(&seeds, &config).unwrap())
        })
        .collect();
        assert_eq!(encoded[0], encoded[1]);
        assert_eq!(encoded[0], encoded[2]);
    }

    #[test]
    fn components_lie_inside_the_automaton() {
        let (_, a) = rank3();
        let comps = sccs(&a);
        let total: usize = comps.iter().map(|c| c.states.len()).sum();
        assert_eq!(total, a.states.len());
        for c in &comps {
            for k in &c.states {
                assert!(a.states.contains_key(k));
            }
            for e in &c.edges {
                assert!(a.edges.contains(e));
                assert!(c.contains(&e.from) && c.contains(&e.to));
            }
        }
    }

    #[test]
    fn state_cap_returns_the_partial_automaton() {
        let seeds = seed_states(3).unwrap();
        // every rank-3 state is already a seed, so the cap must be below that
        let config = BuildConfig {
            state_cap: seeds.len() - 1,
            ..BuildConfig::default()
        };
        match build(&seeds, &config) {
            Err(Error::StateCapExceeded { cap, partial }) => {
                assert_eq!(cap, seeds.len() - 1);
                assert!(partial.states.len() > cap);
            }
            other => panic!("expected the cap to trip, got {other:?}"),
        }
        let two_petals = Graph::rose(2);
        let t = two_petals.all_turns();
        let (state, _) = AutomatonState::from_parts(&two_petals, &t);
        let config = BuildConfig {
            state_cap: 1,
            ..BuildConfig::default()
        };
        assert!(build_from_states(&[state], &config).is_ok());
    }

    #[test]
    fn unrealizable_turn_sets_stay_isolated() {
        let states = lonely_direction_states(3).unwrap();
        let seeds = seed_states(3).unwrap();
        assert_eq!(states.len() - seeds.len(), 3);
        let a = build_from_states(&states, &BuildConfig::default()).unwrap();
        let comps = sccs(&a);
        assert_eq!(comps.len(), 4);
        let lone: Vec<&Component> = comps.iter().filter(|c| c.is_singleton()).collect();
        assert_eq!(lone.len(), 3);
        for c in lone {
            assert!(c.edges.is_empty());
            assert!(seeds.iter().all(|s| s.state.key != c.states[0]));
        }
    }

    #[test]
    fn self_loops_decompose_into_their_fold() {
        let (_, a) = rank3();
        let loops: Vec<&AutomatonEdge> = a.edges.iter().filter(|e| e.from == e.to).collect();
        assert!(!loops.is_empty());
        for e in loops {
            let walk = vec![e.clone()];
            let m = loop_to_map(&a, &walk).unwrap();
            let s = crate::folds::stallings_decompose(&m).unwrap();
            assert_eq!(s.steps.len(), 1);
            assert!(
                crate::folds::fold_conjugate(&s.steps, &fold_steps(&a, &walk).unwrap()).unwrap()
            );
        }
    }

    proptest::proptest! {
        #[test]
        fn random_walks_give_train_tracks(choices in proptest::collection::vec(0usize..4, 1..8)) {
            let (_, a) = rank3();
            let comp = primary_component(&a).unwrap();
            // walk by the given choices, then close up along a shortest path
            let start = comp.states[0].clone();
            let mut walk = Vec::new();
            let mut here = start.clone();
            for c in choices {
                let out: Vec<&AutomatonEdge> = a.out_edges(&here).collect();
                let e = out[c % out.len()].clone();
                here = e.to.clone();
                walk.push(e);
            }
            let mut prev: BTreeMap<String, AutomatonEdge> = BTreeMap::new();
            let mut queue = VecDeque::from([here.clone()]);
            while let Some(k) = queue.pop_front() {
                if k == start {
                    break;
                }
                for e in a.out_edges(&k) {
                    if !prev.contains_key(&e.to) && e.to != here {
                        prev.insert(e.to.clone(), e.clone());
                        queue.push_back(e.to.clone());
                    }
                }
            }
            let mut back = Vec::new();
            let mut k = start.clone();
            while k != here {
                let e = prev[&k].clone();
                k = e.from.clone();
                back.push(e);
            }
            back.reverse();
            walk.extend(back);
            let m = loop_to_map(&a, &walk).unwrap();
            proptest::prop_assert!(m.is_tight());
            proptest::prop_assert!(crate::whitehead::is_train_track(&m).unwrap());
        }
    }
}
