//! Turns taken by iterates of a self-map, Whitehead graphs built from
//! them, and the certificate combining every test on a map.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::edge_map::{
    is_expanding, is_irreducible, is_primitive, transition_matrix, transparent_power, EdgeMap,
    TransparentPower,
};
use crate::error::{Error, Result};
use crate::graph::{Dir, Graph, Turn, TurnSet};

/// Every turn taken by some iterate of some edge image, before tightening.
/// Degenerate turns are kept: they mark cancellation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TurnsTaken {
    turns: BTreeSet<Turn>,
}

impl TurnsTaken {
    pub fn turns(&self) -> &BTreeSet<Turn> {
        &self.turns
    }

    pub fn has_degenerate(&self) -> bool {
        self.turns.iter().any(|t| t.is_degenerate())
    }

    pub fn nondegenerate(&self) -> TurnSet {
        self.turns
            .iter()
            .filter(|t| !t.is_degenerate())
            .copied()
            .collect()
    }

    pub fn at_vertex(&self, g: &Graph, v: usize) -> BTreeSet<Turn> {
        self.turns
            .iter()
            .filter(|t| g.base(t.first()) == v)
            .copied()
            .collect()
    }
}

/// Starts from the turns inside the edge images and adds direction-map
/// images of newly found turns until nothing new appears.
pub fn turns_taken_closure(m: &EdgeMap) -> Result<TurnsTaken> {
    m.require_self_map()?;
    let dmap = m.direction_map();
    let mut seen: BTreeSet<Turn> = m
        .images()
        .iter()
        .flat_map(|img| img.windows(2).map(|w| Turn::new(w[0].rev(), w[1])))
        .collect();
    let mut fresh: Vec<Turn> = seen.iter().copied().collect();
    while !fresh.is_empty() {
        fresh = fresh
            .into_iter()
            .map(|t| t.map(|d| dmap[d.index()]))
            .filter(|t| seen.insert(*t))
            .collect();
    }
    Ok(TurnsTaken { turns: seen })
}

/// No iterate of any edge image backtracks.
pub fn is_train_track(m: &EdgeMap) -> Result<bool> {
    Ok(!turns_taken_closure(m)?.has_degenerate())
}

/// A simple graph on a set of directions at one vertex, with an edge for
/// each turn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhiteheadGraph {
    pub vertex: usize,
    pub nodes: Vec<Dir>,
    pub edges: BTreeSet<Turn>,
}

impl WhiteheadGraph {
    pub fn components(&self) -> Vec<Vec<Dir>> {
        let mut comp: BTreeMap<Dir, usize> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, &d)| (d, i))
            .collect();
        let mut changed = true;
        while changed {
            changed = false;
            for t in &self.edges {
                let (a, b) = (comp[&t.first()], comp[&t.second()]);
                if a != b {
                    let low = a.min(b);
                    for c in comp.values_mut() {
                        if *c == a || *c == b {
                            *c = low;
                        }
                    }
                    changed = true;
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<Dir>> = BTreeMap::new();
        for (d, c) in comp {
            groups.entry(c).or_default().push(d);
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn edges_within(&self, nodes: &[Dir]) -> usize {
        self.edges
            .iter()
            .filter(|t| nodes.contains(&t.first()) && nodes.contains(&t.second()))
            .count()
    }
}

fn whitehead_on(
    g: &Graph,
    turns: &BTreeSet<Turn>,
    v: usize,
    keep: impl Fn(Dir) -> bool,
) -> Result<WhiteheadGraph> {
    let nodes: Vec<Dir> = g
        .directions_at(v)
        .into_iter()
        .filter(|&d| keep(d))
        .collect();
    let mut edges = BTreeSet::new();
    for &t in turns.iter().filter(|t| g.base(t.first()) == v) {
        if t.is_degenerate() {
            return Err(Error::NotTrainTrack);
        }
        if keep(t.first()) && keep(t.second()) {
            edges.insert(t);
        }
    }
    Ok(WhiteheadGraph {
        vertex: v,
        nodes,
        edges,
    })
}

/// All directions at `v`, joined by the turns of `turns` at `v`.
pub fn local_whitehead(g: &Graph, turns: &BTreeSet<Turn>, v: usize) -> Result<WhiteheadGraph> {
    whitehead_on(g, turns, v, |_| true)
}

/// The local Whitehead graph restricted to the given fixed directions.
pub fn stable_whitehead(
    g: &Graph,
    turns: &BTreeSet<Turn>,
    v: usize,
    fixed: &BTreeSet<Dir>,
) -> Result<WhiteheadGraph> {
    whitehead_on(g, turns, v, |d| fixed.contains(&d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub vertex: String,
    pub directions: Vec<String>,
    pub edges: usize,
}

impl ComponentRecord {
    pub fn is_triangle(&self) -> bool {
        self.directions.len() == 3 && self.edges == 3
    }
}

/// Disjoint union of stable Whitehead graphs over the fixed vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealWhitehead {
    pub graphs: Vec<WhiteheadGraph>,
    pub components: Vec<ComponentRecord>,
    /// Whether the caller vouched for the absence of periodic Nielsen paths,
    /// without which the union need not be the ideal Whitehead graph.
    pub pnp_free_asserted: bool,
}

fn ideal_from_parts(
    g: &Graph,
    turns: &BTreeSet<Turn>,
    vertices: &[usize],
    fixed: &BTreeSet<Dir>,
    pnp_free: bool,
) -> Result<IdealWhitehead> {
    let mut graphs = Vec::new();
    let mut components = Vec::new();
    for &v in vertices {
        let sw = stable_whitehead(g, turns, v, fixed)?;
        for comp in sw.components() {
            components.push(ComponentRecord {
                vertex: g.vertex_name(v).to_string(),
                directions: comp.iter().map(|&d| g.dir_token(d)).collect(),
                edges: sw.edges_within(&comp),
            });
        }
        graphs.push(sw);
    }
    Ok(IdealWhitehead {
        graphs,
        components,
        pnp_free_asserted: pnp_free,
    })
}

/// Ideal Whitehead graph of a transparent map. Maps that are not their own
/// transparent power are rejected; pass `transparent_power` output to
/// [`ideal_whitehead_of_power`] instead.
pub fn ideal_whitehead(m: &EdgeMap, pnp_free: bool) -> Result<IdealWhitehead> {
    let tp = transparent_power(m, 1).map_err(|_| {
        Error::NotTransparent(
            "the map is not transparent; use transparent_power and ideal_whitehead_of_power".into(),
        )
    })?;
    ideal_whitehead_of_power(m, &tp, pnp_free)
}

/// Ideal Whitehead graph of the transparent power `tp` of `m`, computed
/// without expanding the power: its fixed cells are the periodic cells of
/// `m` and its turns are those recorded in `tp`.
pub fn ideal_whitehead_of_power(
    m: &EdgeMap,
    tp: &TransparentPower,
    pnp_free: bool,
) -> Result<IdealWhitehead> {
    let cells = m.periodic_cells()?;
    let vertices: Vec<usize> = cells.vertices.keys().copied().collect();
    ideal_from_parts(
        m.source(),
        &tp.turns(),
        &vertices,
        &cells.periodic_directions(),
        pnp_free,
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhiteheadRecord {
    pub vertex: String,
    pub directions: Vec<String>,
    pub edges: Vec<[String; 2]>,
    pub connected: bool,
}

/// Every verdict about a self-map, in a fixed field order. Verdicts that
/// depend on the absence of periodic Nielsen paths use the asserted flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub rank: usize,
    pub train_track: bool,
    pub expanding: bool,
    pub irreducible: bool,
    pub primitive: bool,
    pub transparent_power_used: Option<usize>,
    pub lw_connected: Vec<bool>,
    pub nonperiodic_directions: Vec<String>,
    pub iw_components: Vec<ComponentRecord>,
    pub fic_fully_irreducible: bool,
    pub principal: bool,
    pub pnp_free_asserted: bool,
    /// Turns taken by the transparent power, or by the map itself when no
    /// transparent power was found.
    pub turns: Vec<[String; 2]>,
    pub turn_split: Vec<usize>,
    pub local_whitehead: Vec<WhiteheadRecord>,
    pub notes: Vec<String>,
}

/// The parts of a certificate that do not depend on how the graph is
/// labeled; vertex data is sorted by valence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CertificateSummary {
    pub train_track: bool,
    pub expanding: bool,
    pub irreducible: bool,
    pub primitive: bool,
    pub transparent_power_used: Option<usize>,
    pub lw: Vec<(usize, usize, bool)>,
    pub nonperiodic_count: usize,
    pub iw_census: Vec<(usize, usize)>,
    pub fic_fully_irreducible: bool,
    pub principal: bool,
}

impl Certificate {
    pub fn summary(&self) -> CertificateSummary {
        let mut lw: Vec<(usize, usize, bool)> = self
            .local_whitehead
            .iter()
            .map(|w| (w.directions.len(), w.edges.len(), w.connected))
            .collect();
        lw.sort_unstable_by(|a, b| b.cmp(a));
        let mut iw_census: Vec<(usize, usize)> = self
            .iw_components
            .iter()
            .map(|c| (c.directions.len(), c.edges))
            .collect();
        iw_census.sort_unstable();
        CertificateSummary {
            train_track: self.train_track,
            expanding: self.expanding,
            irreducible: self.irreducible,
            primitive: self.primitive,
            transparent_power_used: self.transparent_power_used,
            lw,
            nonperiodic_count: self.nonperiodic_directions.len(),
            iw_census,
            fic_fully_irreducible: self.fic_fully_irreducible,
            principal: self.principal,
        }
    }
}

/// Runs every test on a self-map. Failed prerequisites are recorded in the
/// certificate; only a map that is not a self-map is an error.
pub fn certify(
    m: &EdgeMap,
    rank: usize,
    pnp_free: bool,
    transparency_cap: usize,
) -> Result<Certificate> {
    m.require_self_map()?;
    let g = m.source();
    let mut notes = Vec::new();
    if !m.is_tight() {
        notes.push("some edge image backtracks".to_string());
    }
    let closure = turns_taken_closure(m)?;
    let train_track = !closure.has_degenerate();
    if !train_track {
        notes.push("an iterate backtracks, so the map is not a train track map".into());
    }
    let matrix = transition_matrix(m);
    let irreducible = is_irreducible(&matrix);
    let primitive = is_primitive(&matrix);
    let expanding = is_expanding(m);

    let tp = match transparent_power(m, transparency_cap) {
        Ok(tp) => Some(tp),
        Err(e) => {
            notes.push(e.to_string());
            None
        }
    };
    let turns: BTreeSet<Turn> = match &tp {
        Some(tp) => tp.turns(),
        None => closure.turns().clone(),
    };

    let mut lw_connected = Vec::new();
    let mut local = Vec::new();
    for v in 0..g.vertex_count() {
        match local_whitehead(g, &turns, v) {
            Ok(lw) => {
                let connected = lw.is_connected();
                lw_connected.push(connected);
                local.push(WhiteheadRecord {
                    vertex: g.vertex_name(v).to_string(),
                    directions: lw.nodes.iter().map(|&d| g.dir_token(d)).collect(),
                    edges: lw.edges.iter().map(|&t| g.turn_tokens(t)).collect(),
                    connected,
                });
            }
            Err(_) => {
                lw_connected.push(false);
                local.push(WhiteheadRecord {
                    vertex: g.vertex_name(v).to_string(),
                    directions: g.directions_at(v).iter().map(|&d| g.dir_token(d)).collect(),
                    edges: Vec::new(),
                    connected: false,
                });
            }
        }
    }

    let cells = m.periodic_cells()?;
    let periodic = cells.periodic_directions();
    let nonperiodic_directions = g
        .dirs()
        .filter(|d| !periodic.contains(d))
        .map(|d| g.dir_token(d))
        .collect();

    let iw_components = match (&tp, train_track) {
        (Some(tp), true) => ideal_whitehead_of_power(m, tp, pnp_free)?.components,
        _ => {
            notes.push("ideal Whitehead graph needs a transparent train track power".into());
            Vec::new()
        }
    };

    let fic_fully_irreducible =
        pnp_free && train_track && irreducible && primitive && lw_connected.iter().all(|&c| c);
    let triangles = rank >= 2
        && iw_components.len() == 2 * rank - 3
        && iw_components.iter().all(|c| c.is_triangle());
    let principal = fic_fully_irreducible && triangles;

    let turn_split = (0..g.vertex_count())
        .map(|v| turns.iter().filter(|t| g.base(t.first()) == v).count())
        .collect();
    let mut turn_tokens: Vec<[String; 2]> = turns.iter().map(|&t| g.turn_tokens(t)).collect();
    turn_tokens.sort();

    Ok(Certificate {
        rank,
        train_track,
        expanding,
        irreducible,
        primitive,
        transparent_power_used: tp.as_ref().map(|tp| tp.power),
        lw_connected,
        nonperiodic_directions,
        iw_components,
        fic_fully_irreducible,
        principal,
        pnp_free_asserted: pnp_free,
        turns: turn_tokens,
        turn_split,
        local_whitehead: local,
        notes,
    })
}
