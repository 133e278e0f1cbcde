//! Fold automata of train track representatives in rank 3: graphs with
//! turn sets, folds, edge maps, turns-taken closures, Whitehead graphs and
//! the certificates that combine them.

pub mod automaton;
pub mod dot;
pub mod edge_map;
pub mod error;
pub mod folds;
pub mod graph;
pub mod io;
pub mod whitehead;

pub use automaton::{
    build, build_from_states, certify_loop, closed_walks, fold_steps, graph_census,
    lonely_direction, lonely_direction_states, loop_from_indices, loop_to_map,
    nontrivial_components, partial_fold_graphs, primary_component, rotations, sccs, seed_states,
    witness_loop, Automaton, AutomatonEdge, AutomatonState, BuildConfig, Component, Schedule, Seed,
    DEFAULT_STATE_CAP,
};
pub use edge_map::{
    extend_fold_sequence, is_expanding, is_irreducible, is_primitive, transition_matrix,
    transparent_power, EdgeMap, LabelPermutation, PeriodicCells, TransitionMatrix,
    TransparentPower, TurnDynamics,
};
pub use error::{Error, Result};
pub use folds::{
    different_length_fold, fold_conjugacy, fold_conjugate, is_permissible, partial_fold_graph,
    push_forward_turn_set, stallings_decompose, Conjugacy, FoldDescriptor, FoldKind, FoldResult,
    FoldStep, Stallings,
};
pub use graph::{
    canonical_form, canonical_key, enumerate_high_valence_graphs, graph_key, rank, valence_profile,
    Canonical, Dir, Edge, Graph, Path, Relabeling, Tightened, Turn, TurnSet, ValenceProfile,
};
pub use whitehead::{
    certify, ideal_whitehead, ideal_whitehead_of_power, is_train_track, local_whitehead,
    stable_whitehead, turns_taken_closure, Certificate, CertificateSummary, ComponentRecord,
    IdealWhitehead, TurnsTaken, WhiteheadGraph, WhiteheadRecord,
};
