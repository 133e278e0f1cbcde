//! Folds of a graph at a turn: the different-length folds that drive the
//! automaton, the partial folds between them, and Stallings factorization
//! of arbitrary maps into folds.

mod stallings;

use std::collections::BTreeMap;

use crate::edge_map::EdgeMap;
use crate::error::{Error, Result};
use crate::graph::{canonical_form, Dir, Graph, Turn, TurnSet};

pub use stallings::{
    fold_conjugacy, fold_conjugate, stallings_decompose, Conjugacy, FoldKind, FoldStep, Stallings,
};

/// A fold of the turn `{x, y}` that slides the `longer` direction's edge
/// over the other one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FoldDescriptor {
    pub turn: Turn,
    pub longer: Dir,
}

impl FoldDescriptor {
    pub fn new(turn: Turn, longer: Dir) -> Result<FoldDescriptor> {
        if turn.is_degenerate() {
            return Err(Error::InvalidFold(
                "cannot fold a direction with itself".into(),
            ));
        }
        if !turn.contains(longer) {
            return Err(Error::InvalidFold(
                "the longer direction is not in the turn".into(),
            ));
        }
        Ok(FoldDescriptor { turn, longer })
    }

    pub fn parse(g: &Graph, turn: [&str; 2], longer: &str) -> Result<FoldDescriptor> {
        FoldDescriptor::new(g.parse_turn(turn[0], turn[1])?, g.parse_dir(longer)?)
    }

    pub fn shorter(&self) -> Dir {
        self.turn.partner(self.longer).unwrap()
    }

    /// Display form such as `{a,C}/a`.
    pub fn display(&self, g: &Graph) -> String {
        format!("{}/{}", g.fmt_turn(self.turn), g.dir_token(self.longer))
    }

    pub fn map(&self, f: impl Fn(Dir) -> Dir) -> FoldDescriptor {
        FoldDescriptor {
            turn: self.turn.map(&f),
            longer: f(self.longer),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldResult {
    pub image: Graph,
    /// Map from the source graph to `image`.
    pub map: EdgeMap,
    /// Old edge label to new edge label. Folds keep labels, so this is the
    /// identity; it is kept explicit for callers that relabel afterwards.
    pub relabeling: BTreeMap<String, String>,
    pub fold: FoldDescriptor,
}

impl FoldResult {
    /// The new direction carried by the folded edge at the far end of the
    /// shorter edge.
    pub fn remainder(&self) -> Dir {
        self.fold.longer
    }

    /// The one turn created by the fold, between the reversed shorter
    /// direction and the remainder.
    pub fn interior_turn(&self) -> Turn {
        Turn::new(self.fold.shorter().rev(), self.fold.longer)
    }
}

pub fn is_permissible(t: &TurnSet, f: &FoldDescriptor) -> bool {
    !t.contains(&f.turn)
}

fn check_fold(g: &Graph, f: &FoldDescriptor) -> Result<()> {
    if f.turn.is_degenerate() || !f.turn.contains(f.longer) {
        return Err(Error::InvalidFold("malformed fold descriptor".into()));
    }
    if !g.is_turn(f.turn) {
        return Err(Error::InvalidFold(
            "the two directions do not share a vertex".into(),
        ));
    }
    Ok(())
}

/// Slides the initial segment of the longer edge along the shorter edge.
///
/// For the turn `{x, y}` with `x` longer, the edge carrying `x` has its
/// `x`-end moved to the far end of `y` and maps to the path `(y, x)` read
/// from that end. All other edges map to themselves and vertices are fixed.
pub fn different_length_fold(g: &Graph, f: &FoldDescriptor) -> Result<FoldResult> {
    check_fold(g, f)?;
    let (x, y) = (f.longer, f.shorter());
    if x.edge() == y.edge() {
        return Err(Error::InvalidFold(format!(
            "both directions of {} lie on the loop `{}`",
            g.fmt_turn(f.turn),
            g.edges()[x.edge()].label
        )));
    }
    let mut image = g.clone();
    image.set_endpoint(x, g.end(y));
    let mut images: Vec<Vec<Dir>> = (0..g.edge_count())
        .map(|e| vec![Dir::new(e, true)])
        .collect();
    let ex = Dir::new(x.edge(), true);
    images[x.edge()] = if x.is_forward() {
        vec![y, ex]
    } else {
        vec![ex, y.rev()]
    };
    let map = EdgeMap::new_unchecked(
        g.clone(),
        image.clone(),
        (0..g.vertex_count()).collect(),
        images,
    );
    let relabeling = g
        .edges()
        .iter()
        .map(|e| (e.label.clone(), e.label.clone()))
        .collect();
    Ok(FoldResult {
        image,
        map,
        relabeling,
        fold: *f,
    })
}

/// Turns taken by the image of a loop that takes exactly `t`, computed
/// from the turn set alone: every turn is pushed through the direction map
/// of the fold and the fold's interior turn is added.
pub fn push_forward_turn_set(t: &TurnSet, fr: &FoldResult) -> Result<TurnSet> {
    let (x, y) = (fr.fold.longer, fr.fold.shorter());
    let dmap = |d: Dir| if d == x { y } else { d };
    let mut out = TurnSet::new();
    for &turn in t {
        let img = turn.map(dmap);
        if img.is_degenerate() {
            return Err(Error::NotPermissible(format!(
                "{} collapses under {}",
                fr.map.source().fmt_turn(turn),
                fr.fold.display(fr.map.source())
            )));
        }
        out.insert(img);
    }
    out.insert(fr.interior_turn());
    Ok(out)
}

/// The graph halfway through the fold: both edges are subdivided at the
/// turn and their initial segments identified into one new edge ending at a
/// new trivalent vertex. Returned in canonical form.
pub fn partial_fold_graph(g: &Graph, f: &FoldDescriptor) -> Result<Graph> {
    check_fold(g, f)?;
    let (x, y) = (f.longer, f.shorter());
    let v = g.base(x);
    let mut h = g.clone();
    let w = h.push_vertex(h.fresh_vertex());
    h.set_endpoint(x, w);
    h.set_endpoint(y, w);
    h.push_edge(h.fresh_label("s"), v, w);
    Ok(canonical_form(&h, &Default::default(), &[]).graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::{gamma_star, t_star};
    use crate::graph::{graph_key, rank, valence_profile};

    fn fold(g: &Graph, turn: [&str; 2], longer: &str) -> FoldDescriptor {
        FoldDescriptor::parse(g, turn, longer).unwrap()
    }

    #[test]
    fn permissibility() {
        let g = gamma_star();
        let t = t_star(&g);
        assert!(is_permissible(&t, &fold(&g, ["a", "C"], "a")));
        assert!(is_permissible(&t, &fold(&g, ["a", "C"], "C")));
        assert!(!is_permissible(&t, &fold(&g, ["D", "E"], "D")));
        assert!(is_permissible(&TurnSet::new(), &fold(&g, ["D", "E"], "E")));
    }

    #[test]
    fn fold_a_over_c_bar() {
        let g = gamma_star();
        let fr = different_length_fold(&g, &fold(&g, ["a", "C"], "a")).unwrap();
        let want = Graph::from_triples(
            &["v1", "v2", "v3"],
            &[
                ("a", "v3", "v3"),
                ("b", "v2", "v3"),
                ("c", "v3", "v1"),
                ("d", "v2", "v1"),
                ("e", "v2", "v1"),
            ],
        )
        .unwrap();
        assert_eq!(fr.image, want);
        let img: Vec<String> = fr.map.image(0).iter().map(|&d| want.dir_token(d)).collect();
        assert_eq!(img, vec!["C", "a"]);
        assert_eq!(rank(&fr.image), Ok(3));
        assert_eq!(valence_profile(&fr.image).valences, vec![4, 3, 3]);
        let dm = fr.map.direction_map();
        for d in g.dirs() {
            let expect = if g.dir_token(d) == "a" {
                g.parse_dir("C").unwrap()
            } else {
                d
            };
            assert_eq!(dm[d.index()], expect);
        }
    }

    #[test]
    fn fold_on_the_rose() {
        let r2 = Graph::rose(2);
        let fr = different_length_fold(&r2, &fold(&r2, ["a", "b"], "a")).unwrap();
        assert_eq!(fr.image, r2);
        let img: Vec<String> = fr.map.image(0).iter().map(|&d| r2.dir_token(d)).collect();
        assert_eq!(img, vec!["b", "a"]);
    }

    #[test]
    fn reversed_longer_direction() {
        let g = gamma_star();
        // C is longer: the v1 end of c moves to the end of a, which is v3
        let fr = different_length_fold(&g, &fold(&g, ["a", "C"], "C")).unwrap();
        let c = g.edge_index("c").unwrap();
        assert_eq!(fr.image.edges()[c].term, g.vertex_index("v3").unwrap());
        let img: Vec<String> = fr.map.image(c).iter().map(|&d| g.dir_token(d)).collect();
        assert_eq!(img, vec!["c", "A"]);
    }

    #[test]
    fn rejects_bad_folds() {
        let g = gamma_star();
        let a = g.parse_dir("a").unwrap();
        let d = g.parse_dir("d").unwrap();
        assert!(FoldDescriptor::new(Turn::new(a, a), a).is_err());
        let across = FoldDescriptor {
            turn: Turn::new(a, d),
            longer: a,
        };
        assert!(different_length_fold(&g, &across).is_err());
        let r1 = Graph::rose(1);
        let loop_fold = fold(&r1, ["a", "A"], "a");
        assert!(different_length_fold(&r1, &loop_fold).is_err());
    }

    #[test]
    fn push_forward_of_t_star() {
        let g = gamma_star();
        let fr = different_length_fold(&g, &fold(&g, ["a", "C"], "a")).unwrap();
        let pushed = push_forward_turn_set(&t_star(&g), &fr).unwrap();
        let h = &fr.image;
        let mut got = h.turn_set_tokens(&pushed);
        got.sort();
        let mut want: Vec<[String; 2]> = [
            ["D", "E"],
            ["C", "D"],
            ["C", "E"],
            ["d", "e"],
            ["b", "d"],
            ["b", "e"],
            ["B", "c"],
            ["A", "c"],
            ["A", "B"],
            ["a", "c"],
        ]
        .iter()
        .map(|p| h.turn_tokens(h.parse_turn(p[0], p[1]).unwrap()))
        .collect();
        want.sort();
        assert_eq!(got, want);
        // the two turns left out at v3 both contain the remainder a
        let missing: Vec<String> = h
            .all_turns()
            .iter()
            .filter(|t| !pushed.contains(t))
            .map(|&t| h.fmt_turn(t))
            .collect();
        assert_eq!(missing, vec!["{A,a}", "{B,a}"]);
    }

    #[test]
    fn push_forward_rejects_impermissible() {
        let g = gamma_star();
        let fr = different_length_fold(&g, &fold(&g, ["D", "E"], "D")).unwrap();
        assert!(matches!(
            push_forward_turn_set(&t_star(&g), &fr),
            Err(Error::NotPermissible(_))
        ));
    }

    #[test]
    fn partial_fold_of_t_star_turn() {
        let g = gamma_star();
        let h = partial_fold_graph(&g, &fold(&g, ["a", "C"], "a")).unwrap();
        assert_eq!(h.edge_count(), 6);
        assert_eq!(rank(&h), Ok(3));
        assert_eq!(valence_profile(&h).valences, vec![3, 3, 3, 3]);
        // both orientations of the descriptor give the same graph
        assert_eq!(
            graph_key(&h),
            graph_key(&partial_fold_graph(&g, &fold(&g, ["a", "C"], "C")).unwrap())
        );
    }

    #[test]
    fn partial_fold_of_a_loop_is_a_lollipop() {
        let r2 = Graph::rose(2);
        let h = partial_fold_graph(&r2, &fold(&r2, ["a", "A"], "a")).unwrap();
        assert_eq!(h.edge_count(), 3);
        assert_eq!(rank(&h), Ok(2));
        assert_eq!(valence_profile(&h).valences, vec![3, 3]);
    }
}
