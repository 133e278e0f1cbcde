//! JSON file formats. Every top-level document carries `format_version`.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::automaton::{
    graph_census, partial_fold_graphs, Automaton, AutomatonEdge, AutomatonState, Component, Seed,
};
use crate::edge_map::EdgeMap;
use crate::error::{Error, Result};
use crate::folds::{FoldDescriptor, FoldKind, Stallings};
use crate::graph::{canonical_form, graph_key, Edge, Graph, Path, TurnSet};
use crate::whitehead::Certificate;

pub const FORMAT_VERSION: u32 = 1;

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Parses JSON; syntax and shape errors carry the line and column.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported format_version {v}, expected {FORMAT_VERSION}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub label: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            vertices: g.vertices().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeJson {
                    label: e.label.clone(),
                    from: g.vertex_name(e.init).to_string(),
                    to: g.vertex_name(e.term).to_string(),
                })
                .collect(),
        }
    }
}

impl GraphJson {
    pub fn to_graph(&self) -> Result<Graph> {
        let index: BTreeMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex `{name}`")))
        };
        let edges = self
            .edges
            .iter()
            .map(|e| {
                Ok(Edge {
                    label: e.label.clone(),
                    init: lookup(&e.from)?,
                    term: lookup(&e.to)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Graph::new(self.vertices.clone(), edges)
    }
}

pub fn turn_set_to_json(g: &Graph, t: &TurnSet) -> Vec<[String; 2]> {
    g.turn_set_tokens(t)
}

pub fn turn_set_from_json(g: &Graph, pairs: &[[String; 2]]) -> Result<TurnSet> {
    TurnSet::parse(g, pairs)
}

pub fn path_to_json(g: &Graph, p: &Path) -> Vec<String> {
    p.tokens(g)
}

pub fn path_from_json(g: &Graph, tokens: &[String], cyclic: bool) -> Result<Path> {
    let toks: Vec<&str> = tokens.iter().map(String::as_str).collect();
    Path::parse(g, &toks, cyclic)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldJson {
    pub turn: [String; 2],
    pub longer: String,
}

impl FoldJson {
    pub fn new(g: &Graph, f: &FoldDescriptor) -> FoldJson {
        FoldJson {
            turn: g.turn_tokens(f.turn),
            longer: g.dir_token(f.longer),
        }
    }

    pub fn to_fold(&self, g: &Graph) -> Result<FoldDescriptor> {
        FoldDescriptor::parse(g, [&self.turn[0], &self.turn[1]], &self.longer)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeMapJson {
    pub graph: GraphJson,
    /// Absent for self-maps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<GraphJson>,
    /// Inferred from the edge images when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_map: Option<BTreeMap<String, String>>,
    pub edge_images: BTreeMap<String, Vec<String>>,
}

impl EdgeMapJson {
    pub fn new(m: &EdgeMap) -> EdgeMapJson {
        let (s, t) = (m.source(), m.target());
        EdgeMapJson {
            graph: GraphJson::from(s),
            target: (s != t).then(|| GraphJson::from(t)),
            vertex_map: Some(
                m.vertex_map()
                    .iter()
                    .enumerate()
                    .map(|(v, &w)| (s.vertex_name(v).to_string(), t.vertex_name(w).to_string()))
                    .collect(),
            ),
            edge_images: s
                .edges()
                .iter()
                .zip(m.images())
                .map(|(e, img)| {
                    (
                        e.label.clone(),
                        img.iter().map(|&d| t.dir_token(d)).collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn to_map(&self) -> Result<EdgeMap> {
        let source = self.graph.to_graph()?;
        let target = match &self.target {
            Some(t) => t.to_graph()?,
            None => source.clone(),
        };
        EdgeMap::parse(
            &source,
            &target,
            self.vertex_map.as_ref(),
            &self.edge_images,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFile {
    pub format_version: u32,
    #[serde(flatten)]
    pub map: EdgeMapJson,
}

pub fn encode_edge_map(m: &EdgeMap) -> String {
    to_json(&MapFile {
        format_version: FORMAT_VERSION,
        map: EdgeMapJson::new(m),
    })
}

pub fn decode_edge_map(text: &str) -> Result<EdgeMap> {
    let file: MapFile = from_json(text)?;
    check_version(file.format_version)?;
    file.map.to_map()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub format_version: u32,
    #[serde(flatten)]
    pub graph: GraphJson,
}

pub fn encode_graph(g: &Graph) -> String {
    to_json(&GraphFile {
        format_version: FORMAT_VERSION,
        graph: GraphJson::from(g),
    })
}

pub fn decode_graph(text: &str) -> Result<Graph> {
    let file: GraphFile = from_json(text)?;
    check_version(file.format_version)?;
    file.graph.to_graph()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateJson {
    pub key: String,
    pub graph: GraphJson,
    pub turn_set: Vec<[String; 2]>,
    pub distinguished: Option<String>,
}

impl StateJson {
    pub fn new(s: &AutomatonState) -> StateJson {
        StateJson {
            key: s.key.clone(),
            graph: GraphJson::from(&s.graph),
            turn_set: turn_set_to_json(&s.graph, &s.turn_set),
            distinguished: s.distinguished.map(|d| s.graph.dir_token(d)),
        }
    }

    /// Rebuilds the state and checks that the stored key and distinguished
    /// direction are the ones the graph and turns determine.
    pub fn to_state(&self) -> Result<AutomatonState> {
        let g = self.graph.to_graph()?;
        let t = turn_set_from_json(&g, &self.turn_set)?;
        let canon = canonical_form(&g, t.as_set(), &[]);
        if canon.key != self.key || canon.graph != g {
            return Err(Error::Format(format!(
                "state `{}` is not in canonical form",
                self.key
            )));
        }
        let (state, _) = AutomatonState::from_parts(&g, &t);
        let distinguished = self
            .distinguished
            .as_deref()
            .map(|d| g.parse_dir(d))
            .transpose()?;
        if distinguished != state.distinguished {
            return Err(Error::Format(format!(
                "state `{}` has the wrong distinguished direction",
                self.key
            )));
        }
        Ok(state)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonEdgeJson {
    pub from: String,
    pub fold: FoldJson,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedJson {
    pub key: String,
    pub witness_loop: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonFile {
    pub format_version: u32,
    pub states: Vec<StateJson>,
    pub edges: Vec<AutomatonEdgeJson>,
    pub seeds: Vec<SeedJson>,
}

pub fn encode_automaton(a: &Automaton) -> String {
    to_json(&AutomatonFile {
        format_version: FORMAT_VERSION,
        states: a.states.values().map(StateJson::new).collect(),
        edges: a
            .edges
            .iter()
            .map(|e| AutomatonEdgeJson {
                from: e.from.clone(),
                fold: FoldJson::new(&a.states[&e.from].graph, &e.fold),
                to: e.to.clone(),
            })
            .collect(),
        seeds: a
            .witness_loops
            .iter()
            .map(|(k, p)| SeedJson {
                key: k.clone(),
                witness_loop: path_to_json(&a.states[k].graph, p),
            })
            .collect(),
    })
}

pub fn decode_automaton(text: &str) -> Result<Automaton> {
    let file: AutomatonFile = from_json(text)?;
    check_version(file.format_version)?;
    let mut a = Automaton::default();
    for s in &file.states {
        let state = s.to_state()?;
        a.states.insert(state.key.clone(), state);
    }
    let state = |k: &str| {
        a.states
            .get(k)
            .ok_or_else(|| Error::Format(format!("unknown state `{k}`")))
    };
    let mut edges = Vec::new();
    for e in &file.edges {
        let fold = e.fold.to_fold(&state(&e.from)?.graph)?;
        state(&e.to)?;
        edges.push(AutomatonEdge {
            from: e.from.clone(),
            fold,
            to: e.to.clone(),
        });
    }
    let mut loops = BTreeMap::new();
    for s in &file.seeds {
        let p = path_from_json(&state(&s.key)?.graph, &s.witness_loop, true)?;
        loops.insert(s.key.clone(), p);
    }
    a.edges.extend(edges);
    a.witness_loops = loops;
    Ok(a)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRecord {
    #[serde(flatten)]
    pub state: StateJson,
    pub witness_loop: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedFile {
    pub format_version: u32,
    pub rank: usize,
    pub seeds: Vec<SeedRecord>,
}

pub fn encode_seeds(rank: usize, seeds: &[Seed]) -> String {
    to_json(&SeedFile {
        format_version: FORMAT_VERSION,
        rank,
        seeds: seeds
            .iter()
            .map(|s| SeedRecord {
                state: StateJson::new(&s.state),
                witness_loop: path_to_json(&s.state.graph, &s.witness),
            })
            .collect(),
    })
}

pub fn decode_seeds(text: &str) -> Result<Vec<Seed>> {
    let file: SeedFile = from_json(text)?;
    check_version(file.format_version)?;
    file.seeds
        .iter()
        .map(|r| {
            let state = r.state.to_state()?;
            let witness = path_from_json(&state.graph, &r.witness_loop, true)?;
            Ok(Seed { state, witness })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub format_version: u32,
    #[serde(flatten)]
    pub certificate: Certificate,
}

pub fn encode_certificate(c: &Certificate) -> String {
    to_json(&CertificateFile {
        format_version: FORMAT_VERSION,
        certificate: c.clone(),
    })
}

pub fn decode_certificate(text: &str) -> Result<Certificate> {
    let file: CertificateFile = from_json(text)?;
    check_version(file.format_version)?;
    Ok(file.certificate)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub size: usize,
    pub edge_count: usize,
    pub self_loops: usize,
    pub primary: bool,
    pub states: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub format_version: u32,
    pub state_count: usize,
    pub edge_count: usize,
    pub component_count: usize,
    pub nontrivial_count: usize,
    pub singleton_count: usize,
    /// Nontrivial components, largest first.
    pub components: Vec<ComponentJson>,
}

pub fn component_report(a: &Automaton, all: &[Component]) -> ComponentReport {
    let mut nontrivial: Vec<&Component> = all.iter().filter(|c| c.is_nontrivial()).collect();
    nontrivial.sort_by(|x, y| {
        y.states
            .len()
            .cmp(&x.states.len())
            .then_with(|| x.states[0].cmp(&y.states[0]))
    });
    ComponentReport {
        format_version: FORMAT_VERSION,
        state_count: a.states.len(),
        edge_count: a.edges.len(),
        component_count: all.len(),
        nontrivial_count: nontrivial.len(),
        singleton_count: nontrivial.iter().filter(|c| c.is_singleton()).count(),
        components: nontrivial
            .iter()
            .enumerate()
            .map(|(i, c)| ComponentJson {
                size: c.states.len(),
                edge_count: c.edges.len(),
                self_loops: c.edges.iter().filter(|e| e.from == e.to).count(),
                primary: i == 0,
                states: c.states.clone(),
            })
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub kind: String,
    pub turn: [String; 2],
    pub longer: Option<String>,
    pub source_key: String,
    pub target_key: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StallingsReport {
    pub format_version: u32,
    pub steps: Vec<StepJson>,
    pub final_map: EdgeMapJson,
}

pub fn stallings_report(s: &Stallings) -> StallingsReport {
    StallingsReport {
        format_version: FORMAT_VERSION,
        steps: s
            .steps
            .iter()
            .map(|step| {
                let g = step.source();
                StepJson {
                    kind: match step.kind {
                        FoldKind::DifferentLength => "different_length",
                        FoldKind::Partial => "partial",
                        FoldKind::EqualLength => "equal_length",
                    }
                    .to_string(),
                    turn: g.turn_tokens(step.turn),
                    longer: step.longer.map(|d| g.dir_token(d)),
                    source_key: step.source_turn_key.clone(),
                    target_key: step.target_key.clone(),
                }
            })
            .collect(),
        final_map: EdgeMapJson::new(&s.final_map),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyedGraph {
    pub key: String,
    pub graph: GraphJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialFoldReport {
    pub format_version: u32,
    /// Distinct graphs among primary states and partial fold graphs.
    pub graph_census: usize,
    pub graphs: Vec<KeyedGraph>,
}

pub fn partial_fold_report(a: &Automaton) -> Result<PartialFoldReport> {
    let graphs = partial_fold_graphs(a)?;
    Ok(PartialFoldReport {
        format_version: FORMAT_VERSION,
        graph_census: graph_census(a)?.len(),
        graphs: graphs
            .iter()
            .map(|g| KeyedGraph {
                key: graph_key(g),
                graph: g.into(),
            })
            .collect(),
    })
}

/// Run settings shared by the command line tools.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub rank: usize,
    pub state_cap: usize,
    pub transparency_cap: usize,
    pub loop_sample_length: usize,
    pub output_path: Option<String>,
    pub format: OutputFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Dot,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            rank: 3,
            state_cap: crate::automaton::DEFAULT_STATE_CAP,
            transparency_cap: 60,
            loop_sample_length: 4,
            output_path: None,
            format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rank", self.rank),
            ("state_cap", self.state_cap),
            ("transparency_cap", self.transparency_cap),
            ("loop_sample_length", self.loop_sample_length),
        ] {
            if v == 0 {
                return Err(Error::Format(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edge_map::fixtures::fibonacci;
    use crate::graph::fixtures::{gamma_star, t_star};
    use crate::whitehead::certify;
    use proptest::prelude::*;

    #[test]
    fn graph_json_shape() {
        let g = gamma_star();
        let v: serde_json::Value = serde_json::from_str(&encode_graph(&g)).unwrap();
        assert_eq!(v["format_version"], 1);
        assert_eq!(
            v["edges"][0],
            serde_json::json!({"label": "a", "from": "v1", "to": "v3"})
        );
        assert_eq!(decode_graph(&encode_graph(&g)).unwrap(), g);
    }

    #[test]
    fn turn_sets_and_folds_round_trip() {
        let g = gamma_star();
        let t = t_star(&g);
        let json = turn_set_to_json(&g, &t);
        assert!(json.iter().all(|p| p[0] <= p[1]));
        assert_eq!(turn_set_from_json(&g, &json).unwrap(), t);
        let f = FoldDescriptor::parse(&g, ["a", "C"], "a").unwrap();
        let fj = FoldJson::new(&g, &f);
        assert_eq!(
            serde_json::to_string(&fj).unwrap(),
            r#"{"turn":["C","a"],"longer":"a"}"#
        );
        assert_eq!(fj.to_fold(&g).unwrap(), f);
    }

    #[test]
    fn edge_map_round_trip() {
        let m = fibonacci();
        assert_eq!(decode_edge_map(&encode_edge_map(&m)).unwrap(), m);
    }

    #[test]
    fn certificate_round_trip() {
        let c = certify(&fibonacci(), 2, false, 60).unwrap();
        let text = encode_certificate(&c);
        assert_eq!(decode_certificate(&text).unwrap(), c);
        // field order is stable
        let train = text.find("\"train_track\"").unwrap();
        let principal = text.find("\"principal\"").unwrap();
        assert!(train < principal);
    }

    #[test]
    fn malformed_json_reports_location() {
        let err = decode_edge_map("{\n  \"format_version\": 1,\n  oops\n}").unwrap_err();
        let Error::Format(msg) = err else {
            panic!("expected a format error")
        };
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn wrong_version_is_rejected() {
        let text =
            encode_graph(&gamma_star()).replace("\"format_version\": 1", "\"format_version\": 2");
        assert!(matches!(decode_graph(&text), Err(Error::Format(_))));
    }

    #[test]
    fn run_config_defaults_are_valid() {
        let c = RunConfig::default();
        c.validate().unwrap();
        assert!(RunConfig { state_cap: 0, ..c }.validate().is_err());
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (
            1usize..4,
            proptest::collection::vec((0usize..4, 0usize..4), 1..6),
        )
            .prop_filter_map("connected", |(n, pairs)| {
                let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
                let edges = pairs
                    .iter()
                    .enumerate()
                    .map(|(i, &(a, b))| Edge {
                        label: crate::graph::canonical_label(i),
                        init: a % n,
                        term: b % n,
                    })
                    .collect();
                Graph::new(names, edges).ok().filter(Graph::is_connected)
            })
    }

    proptest! {
        #[test]
        fn graphs_round_trip(g in arb_graph()) {
            prop_assert_eq!(decode_graph(&encode_graph(&g)).unwrap(), g);
        }

        #[test]
        fn turn_sets_round_trip(g in arb_graph(), mask in any::<u64>()) {
            let t: TurnSet = g.all_turns().into_iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, t)| t).collect();
            prop_assert_eq!(turn_set_from_json(&g, &turn_set_to_json(&g, &t)).unwrap(), t);
        }

        #[test]
        fn identity_maps_round_trip(g in arb_graph()) {
            let m = EdgeMap::identity(&g);
            prop_assert_eq!(decode_edge_map(&encode_edge_map(&m)).unwrap(), m);
        }
    }
}
