//! Maps between graphs that send vertices to vertices and edges to edge
//! paths, and the algebra built on them.

mod matrix;
mod permutation;
mod transparent;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{Dir, Graph, Path, Relabeling};

pub use matrix::{is_expanding, is_irreducible, is_primitive, transition_matrix, TransitionMatrix};
pub use permutation::{extend_fold_sequence, LabelPermutation};
pub use transparent::{transparent_power, TransparentPower, TurnDynamics};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeMap {
    source: Graph,
    target: Graph,
    vertex_map: Vec<usize>,
    images: Vec<Vec<Dir>>,
}

impl EdgeMap {
    /// Checks that every image is a nonempty path in the target running
    /// between the images of the edge's endpoints.
    pub fn new(
        source: Graph,
        target: Graph,
        vertex_map: Vec<usize>,
        images: Vec<Vec<Dir>>,
    ) -> Result<EdgeMap> {
        if vertex_map.len() != source.vertex_count() {
            return Err(Error::MapMismatch(
                "vertex map does not cover the source vertices".into(),
            ));
        }
        if let Some(&w) = vertex_map.iter().find(|&&w| w >= target.vertex_count()) {
            return Err(Error::MapMismatch(format!(
                "vertex index {w} is outside the target"
            )));
        }
        if images.len() != source.edge_count() {
            return Err(Error::MapMismatch(
                "edge images do not cover the source edges".into(),
            ));
        }
        for (i, (edge, img)) in source.edges().iter().zip(&images).enumerate() {
            let label = &edge.label;
            if img.is_empty() {
                return Err(Error::MapMismatch(format!("image of `{label}` is empty")));
            }
            let path = Path::new(&target, img.clone(), false)
                .map_err(|e| Error::MapMismatch(format!("image of `{label}`: {e}")))?;
            let first = path.steps()[0];
            let last = *path.steps().last().unwrap();
            if target.base(first) != vertex_map[edge.init]
                || target.end(last) != vertex_map[edge.term]
            {
                return Err(Error::MapMismatch(format!(
                    "image of `{label}` does not join the images of its endpoints (edge {i})"
                )));
            }
        }
        Ok(EdgeMap {
            source,
            target,
            vertex_map,
            images,
        })
    }

    pub(crate) fn new_unchecked(
        source: Graph,
        target: Graph,
        vertex_map: Vec<usize>,
        images: Vec<Vec<Dir>>,
    ) -> EdgeMap {
        debug_assert!(EdgeMap::new(
            source.clone(),
            target.clone(),
            vertex_map.clone(),
            images.clone()
        )
        .is_ok());
        EdgeMap {
            source,
            target,
            vertex_map,
            images,
        }
    }

    pub fn identity(g: &Graph) -> EdgeMap {
        EdgeMap {
            source: g.clone(),
            target: g.clone(),
            vertex_map: (0..g.vertex_count()).collect(),
            images: (0..g.edge_count())
                .map(|e| vec![Dir::new(e, true)])
                .collect(),
        }
    }

    /// The isomorphism from `source` onto its canonical representative.
    pub fn from_relabeling(source: &Graph, target: &Graph, rel: &Relabeling) -> EdgeMap {
        EdgeMap::new_unchecked(
            source.clone(),
            target.clone(),
            rel.vertices.clone(),
            rel.edges.iter().map(|&d| vec![d]).collect(),
        )
    }

    /// Builds a self-map of `g` from token images, e.g. `{"a": ["a","b"], "b": ["a"]}`.
    pub fn parse_self_map(g: &Graph, images: &BTreeMap<String, Vec<String>>) -> Result<EdgeMap> {
        EdgeMap::parse(g, g, None, images)
    }

    /// Builds a map from token images. When no vertex map is given it is
    /// inferred from the images.
    pub fn parse(
        source: &Graph,
        target: &Graph,
        vertex_map: Option<&BTreeMap<String, String>>,
        images: &BTreeMap<String, Vec<String>>,
    ) -> Result<EdgeMap> {
        let mut imgs = vec![None; source.edge_count()];
        for (label, tokens) in images {
            let e = source.edge_index(label).ok_or_else(|| {
                Error::MapMismatch(format!("`{label}` is not an edge of the source"))
            })?;
            let toks: Vec<&str> = tokens.iter().map(String::as_str).collect();
            imgs[e] = Some(target.parse_dirs(&toks)?);
        }
        let imgs: Vec<Vec<Dir>> = imgs
            .into_iter()
            .enumerate()
            .map(|(e, img)| {
                img.ok_or_else(|| {
                    Error::MapMismatch(format!("no image for `{}`", source.edges()[e].label))
                })
            })
            .collect::<Result<_>>()?;
        let vmap = match vertex_map {
            Some(vm) => (0..source.vertex_count())
                .map(|v| {
                    let name = source.vertex_name(v);
                    let w = vm.get(name).ok_or_else(|| {
                        Error::MapMismatch(format!("no image for vertex `{name}`"))
                    })?;
                    target.vertex_index(w).ok_or_else(|| {
                        Error::MapMismatch(format!("`{w}` is not a vertex of the target"))
                    })
                })
                .collect::<Result<Vec<_>>>()?,
            None => infer_vertex_map(source, target, &imgs)?,
        };
        EdgeMap::new(source.clone(), target.clone(), vmap, imgs)
    }

    pub fn source(&self) -> &Graph {
        &self.source
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn images(&self) -> &[Vec<Dir>] {
        &self.images
    }

    pub fn image(&self, edge: usize) -> &[Dir] {
        &self.images[edge]
    }

    /// Image of a direction as a path: reversed edge image for reversed directions.
    pub fn image_of_dir(&self, d: Dir) -> Vec<Dir> {
        let img = &self.images[d.edge()];
        if d.is_forward() {
            img.clone()
        } else {
            img.iter().rev().map(|s| s.rev()).collect()
        }
    }

    pub fn image_len(&self, edge: usize) -> usize {
        self.images[edge].len()
    }

    pub fn is_self_map(&self) -> bool {
        self.source == self.target
    }

    pub(crate) fn require_self_map(&self) -> Result<()> {
        if self.is_self_map() {
            Ok(())
        } else {
            Err(Error::NotSelfMap)
        }
    }

    pub fn is_tight(&self) -> bool {
        self.images
            .iter()
            .all(|img| img.windows(2).all(|w| w[1] != w[0].rev()))
    }

    pub fn check_tight(&self) -> Result<()> {
        match self
            .images
            .iter()
            .position(|img| img.windows(2).any(|w| w[1] == w[0].rev()))
        {
            Some(e) => Err(Error::NotTight(self.source.edges()[e].label.clone())),
            None => Ok(()),
        }
    }

    /// First step of the image of each direction, indexed by direction index.
    pub fn direction_map(&self) -> Vec<Dir> {
        self.source
            .dirs()
            .map(|d| {
                let img = &self.images[d.edge()];
                if d.is_forward() {
                    img[0]
                } else {
                    img.last().unwrap().rev()
                }
            })
            .collect()
    }

    pub fn map_dir(&self, d: Dir) -> Dir {
        let img = &self.images[d.edge()];
        if d.is_forward() {
            img[0]
        } else {
            img.last().unwrap().rev()
        }
    }

    /// Image of a path in the source, concatenated without tightening.
    pub fn apply(&self, p: &Path) -> Result<Path> {
        // revalidate: a Path does not remember which graph it lives in
        let p = Path::new(&self.source, p.steps().to_vec(), p.is_cyclic())
            .map_err(|e| Error::MapMismatch(format!("path is not in the source graph: {e}")))?;
        let steps = p
            .steps()
            .iter()
            .flat_map(|&d| self.image_of_dir(d))
            .collect();
        Ok(Path::new_unchecked(steps, p.is_cyclic()))
    }

    /// `self` followed by `next`; the target of `self` must equal the source of `next`.
    pub fn then(&self, next: &EdgeMap) -> Result<EdgeMap> {
        if self.target != next.source {
            return Err(Error::MapMismatch(format!(
                "cannot compose: target {} differs from source {}",
                self.target, next.source
            )));
        }
        let images = self
            .images
            .iter()
            .map(|img| img.iter().flat_map(|&d| next.image_of_dir(d)).collect())
            .collect();
        let vertex_map = self
            .vertex_map
            .iter()
            .map(|&v| next.vertex_map[v])
            .collect();
        Ok(EdgeMap {
            source: self.source.clone(),
            target: next.target.clone(),
            vertex_map,
            images,
        })
    }

    /// The composition of `maps` in application order: `maps[0]` acts first.
    pub fn compose(maps: &[EdgeMap]) -> Result<EdgeMap> {
        let (first, rest) = maps
            .split_first()
            .ok_or_else(|| Error::MapMismatch("nothing to compose".into()))?;
        rest.iter().try_fold(first.clone(), |acc, m| acc.then(m))
    }

    /// The `n`-fold iterate of a self-map, with `n >= 1`.
    pub fn power(&self, n: usize) -> Result<EdgeMap> {
        self.require_self_map()?;
        if n == 0 {
            return Ok(EdgeMap::identity(&self.source));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.then(self)?;
        }
        Ok(acc)
    }

    /// Orbit structure of the vertex and direction maps of a self-map.
    pub fn periodic_cells(&self) -> Result<PeriodicCells> {
        self.require_self_map()?;
        let dmap: Vec<usize> = self.direction_map().into_iter().map(Dir::index).collect();
        let directions = cycle_periods(&dmap)
            .into_iter()
            .map(|(d, p)| (Dir::from_index(d), p))
            .collect();
        let vertices = cycle_periods(&self.vertex_map).into_iter().collect();
        Ok(PeriodicCells {
            vertices,
            directions,
        })
    }
}

fn infer_vertex_map(source: &Graph, target: &Graph, images: &[Vec<Dir>]) -> Result<Vec<usize>> {
    let mut vmap: Vec<Option<usize>> = vec![None; source.vertex_count()];
    for (edge, img) in source.edges().iter().zip(images) {
        let (Some(first), Some(last)) = (img.first(), img.last()) else {
            return Err(Error::MapMismatch(format!(
                "image of `{}` is empty",
                edge.label
            )));
        };
        for (v, w) in [
            (edge.init, target.base(*first)),
            (edge.term, target.end(*last)),
        ] {
            match vmap[v] {
                Some(x) if x != w => {
                    return Err(Error::MapMismatch(format!(
                        "images disagree on where vertex `{}` goes",
                        source.vertex_name(v)
                    )))
                }
                _ => vmap[v] = Some(w),
            }
        }
    }
    vmap.into_iter()
        .enumerate()
        .map(|(v, w)| {
            w.ok_or_else(|| {
                Error::MapMismatch(format!("vertex `{}` has no edges", source.vertex_name(v)))
            })
        })
        .collect()
}

/// Points of a finite self-map lying on cycles, with their cycle lengths.
fn cycle_periods(f: &[usize]) -> BTreeMap<usize, usize> {
    let n = f.len();
    let mut out = BTreeMap::new();
    for start in 0..n {
        // a point is periodic iff it returns to itself within n steps
        let mut x = f[start];
        for k in 1..=n {
            if x == start {
                out.insert(start, k);
                break;
            }
            x = f[x];
        }
    }
    out
}

/// Periodic vertices and directions of a self-map, each with its least period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicCells {
    pub vertices: BTreeMap<usize, usize>,
    pub directions: BTreeMap<Dir, usize>,
}

impl PeriodicCells {
    pub fn fixed_vertices(&self) -> Vec<usize> {
        self.vertices
            .iter()
            .filter(|(_, &p)| p == 1)
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn fixed_directions(&self) -> Vec<Dir> {
        self.directions
            .iter()
            .filter(|(_, &p)| p == 1)
            .map(|(&d, _)| d)
            .collect()
    }

    pub fn periodic_directions(&self) -> BTreeSet<Dir> {
        self.directions.keys().copied().collect()
    }

    /// Least common multiple of all vertex and direction periods.
    pub fn period_lcm(&self) -> usize {
        self.vertices
            .values()
            .chain(self.directions.values())
            .fold(1, |acc, &p| acc / gcd(acc, p) * p)
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
