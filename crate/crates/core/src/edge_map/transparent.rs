use std::collections::{BTreeMap, BTreeSet};

use super::EdgeMap;
use crate::error::{Error, Result};
use crate::graph::{Dir, Turn};

type EdgeState = (Vec<bool>, BTreeSet<Turn>);

/// For each edge `e`, the edges crossed by and the turns taken by the
/// untightened iterates `m^n(e)`, computed without expanding the paths.
///
/// The turns of `m^(n+1)(e)` are the interior turns of `m(f)` for each edge
/// `f` crossed by `m^n(e)`, together with the direction-map images of the
/// turns of `m^n(e)`. Each per-edge sequence is eventually periodic.
#[derive(Clone, Debug)]
pub struct TurnDynamics {
    states: Vec<Vec<EdgeState>>,
    preperiod: Vec<usize>,
    period: Vec<usize>,
}

pub(crate) fn interior_turns(img: &[Dir]) -> BTreeSet<Turn> {
    img.windows(2)
        .map(|w| Turn::new(w[0].rev(), w[1]))
        .collect()
}

impl TurnDynamics {
    pub fn new(m: &EdgeMap) -> Result<TurnDynamics> {
        m.require_self_map()?;
        let n = m.source().edge_count();
        let dmap = m.direction_map();
        let first: Vec<EdgeState> = (0..n)
            .map(|e| {
                let mut supp = vec![false; n];
                for d in m.image(e) {
                    supp[d.edge()] = true;
                }
                (supp, interior_turns(m.image(e)))
            })
            .collect();
        let mut states = Vec::with_capacity(n);
        let mut preperiod = Vec::with_capacity(n);
        let mut period = Vec::with_capacity(n);
        for start in &first {
            let mut seq = vec![start.clone()];
            let mut seen = BTreeMap::from([(start.clone(), 0usize)]);
            loop {
                let (supp, turns) = seq.last().unwrap();
                let mut next_supp = vec![false; n];
                let mut next_turns: BTreeSet<Turn> =
                    turns.iter().map(|t| t.map(|d| dmap[d.index()])).collect();
                for f in (0..n).filter(|&f| supp[f]) {
                    for (s, &x) in next_supp.iter_mut().zip(&first[f].0) {
                        *s |= x;
                    }
                    next_turns.extend(first[f].1.iter().copied());
                }
                let next = (next_supp, next_turns);
                if let Some(&i) = seen.get(&next) {
                    preperiod.push(i);
                    period.push(seq.len() - i);
                    break;
                }
                seen.insert(next.clone(), seq.len());
                seq.push(next);
            }
            states.push(seq);
        }
        Ok(TurnDynamics {
            states,
            preperiod,
            period,
        })
    }

    fn state(&self, e: usize, n: usize) -> &EdgeState {
        assert!(n >= 1, "iterates start at 1");
        let seq = &self.states[e];
        let i = n - 1;
        if i < seq.len() {
            &seq[i]
        } else {
            let (mu, lam) = (self.preperiod[e], self.period[e]);
            &seq[mu + (i - mu) % lam]
        }
    }

    /// Turns taken by `m^n(e)`, degenerate ones included, for `n >= 1`.
    pub fn turns(&self, e: usize, n: usize) -> &BTreeSet<Turn> {
        &self.state(e, n).1
    }

    /// Edges crossed by `m^n(e)`.
    pub fn support(&self, e: usize, n: usize) -> Vec<usize> {
        let supp = &self.state(e, n).0;
        (0..supp.len()).filter(|&f| supp[f]).collect()
    }

    /// Iterate index after which every sequence has entered its cycle.
    pub fn preperiod(&self, e: usize) -> usize {
        self.preperiod[e] + 1
    }

    pub fn period(&self, e: usize) -> usize {
        self.period[e]
    }

    /// All turns of all iterates of all edges.
    pub fn all_turns(&self) -> BTreeSet<Turn> {
        self.states
            .iter()
            .flatten()
            .flat_map(|(_, t)| t.iter().copied())
            .collect()
    }
}

/// Least transparent power of a self-map and the data certifying it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransparentPower {
    pub power: usize,
    /// Turns taken by the image of each edge under the power.
    pub edge_turns: Vec<BTreeSet<Turn>>,
    pub period_lcm: usize,
    /// Steps after which every pair of directions that the direction map
    /// ever identifies has been identified.
    pub merge_time: usize,
    /// Why each smaller candidate power was rejected.
    pub rejected: Vec<String>,
}

impl TransparentPower {
    /// Turns taken by iterates of the power, which for a transparent map are
    /// exactly the turns taken by its edge images.
    pub fn turns(&self) -> BTreeSet<Turn> {
        self.edge_turns.iter().flatten().copied().collect()
    }
}

/// Steps until the last pair of directions at a common vertex that the
/// direction map ever sends to the same direction has merged.
fn merge_time(m: &EdgeMap) -> usize {
    let g = m.source();
    let dmap = m.direction_map();
    let horizon = g.dir_count() + 1;
    let mut worst = 0;
    for v in 0..g.vertex_count() {
        let dirs = g.directions_at(v);
        for (i, &a) in dirs.iter().enumerate() {
            for &b in &dirs[i + 1..] {
                let (mut x, mut y) = (a, b);
                for k in 1..=horizon {
                    x = dmap[x.index()];
                    y = dmap[y.index()];
                    if x == y {
                        worst = worst.max(k);
                        break;
                    }
                }
            }
        }
    }
    worst
}

/// Searches multiples of the period lcm up to `cap` for the least power
/// `p` such that every illegal turn of `m^p` is prenull, every turn of an
/// iterate `m^(pk)(e)` is already taken by `m^p(e)`, and every periodic
/// vertex and direction is fixed.
pub fn transparent_power(m: &EdgeMap, cap: usize) -> Result<TransparentPower> {
    m.require_self_map()?;
    m.check_tight()?;
    let cells = m.periodic_cells()?;
    let lcm = cells.period_lcm();
    let merge = merge_time(m);
    let dynamics = TurnDynamics::new(m)?;
    let n = m.source().edge_count();
    let mut rejected = Vec::new();
    let mut p = lcm;
    while p <= cap {
        if p < merge {
            rejected.push(format!(
                "p={p}: an illegal turn is not prenull (merge takes {merge} steps)"
            ));
        } else {
            let failure = (0..n).find_map(|e| {
                let base = dynamics.turns(e, p);
                let kmax = dynamics.preperiod(e) / p + 1 + dynamics.period(e);
                (2..=kmax)
                    .find(|&k| !dynamics.turns(e, p * k).is_subset(base))
                    .map(|k| (e, k))
            });
            match failure {
                Some((e, k)) => rejected.push(format!(
                    "p={p}: iterate {k} of the image of `{}` takes a turn its first image does not",
                    m.source().edges()[e].label
                )),
                None => {
                    return Ok(TransparentPower {
                        power: p,
                        edge_turns: (0..n).map(|e| dynamics.turns(e, p).clone()).collect(),
                        period_lcm: lcm,
                        merge_time: merge,
                        rejected,
                    })
                }
            }
        }
        p += lcm;
    }
    let mut msg = format!("no transparent power up to {cap} (periods force multiples of {lcm})");
    for r in &rejected {
        msg.push_str("; ");
        msg.push_str(r);
    }
    Err(Error::NotTransparent(msg))
}
