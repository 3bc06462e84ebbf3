use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::engine::{solve, Goal, Problem};
use crate::error::{Error, Result};
use crate::graph::{Kind, MixedMap, Mode, RouteType};

/// Exact route-set counts keyed by route type. Missing keys count zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VRTable {
    mode: Mode,
    num_labels: usize,
    counts: BTreeMap<RouteType, BigUint>,
}

impl VRTable {
    pub fn new(mode: Mode, num_labels: usize) -> Self {
        VRTable { mode, num_labels, counts: BTreeMap::new() }
    }

    /// Builds a table from `(type, count)` entries; zero counts are dropped.
    pub fn from_entries(
        mode: Mode,
        num_labels: usize,
        entries: impl IntoIterator<Item = (RouteType, BigUint)>,
    ) -> Result<Self> {
        let mut t = VRTable::new(mode, num_labels);
        for (ty, c) in entries {
            if ty.num_labels() != num_labels {
                return Err(Error::InvalidParameter(format!(
                    "route type {ty} does not cover {num_labels} labels"
                )));
            }
            t.add(ty, c);
        }
        Ok(t)
    }

    /// Four-label table from counts on 01|23, 02|13, 03|12.
    pub fn from_triple(mode: Mode, triple: [BigUint; 3]) -> Self {
        let mut t = VRTable::new(mode, 4);
        for (ty, c) in RouteType::four().into_iter().zip(triple) {
            t.add(ty, c);
        }
        t
    }

    pub fn add(&mut self, ty: RouteType, c: BigUint) {
        if c.is_zero() {
            return;
        }
        *self.counts.entry(ty).or_default() += c;
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    pub fn get(&self, ty: &RouteType) -> BigUint {
        self.counts.get(ty).cloned().unwrap_or_default()
    }

    /// Nonzero entries in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&RouteType, &BigUint)> {
        self.counts.iter()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// Counts on 01|23, 02|13, 03|12.
    pub fn triple(&self) -> Result<[BigUint; 3]> {
        if self.num_labels != 4 {
            return Err(Error::ExternalCount { expected: "4".into(), found: self.num_labels });
        }
        Ok(RouteType::four().map(|t| self.get(&t)))
    }

    /// Every entry reduced modulo `p`, zero residues included, over all types.
    pub fn residues(&self, p: u64) -> BTreeMap<RouteType, u64> {
        let m = BigUint::from(p);
        RouteType::all(self.num_labels)
            .into_iter()
            .map(|t| {
                let r = (self.get(&t) % &m).iter_u64_digits().next().unwrap_or(0);
                (t, r)
            })
            .collect()
    }

    /// Renames labels: label `l` becomes `perm[l]`.
    pub fn relabeled(&self, perm: &[u32]) -> VRTable {
        let mut t = VRTable::new(self.mode, self.num_labels);
        for (ty, c) in &self.counts {
            t.add(ty.relabeled(perm), c.clone());
        }
        t
    }

    pub fn entries(&self) -> Vec<TableEntry> {
        self.counts
            .iter()
            .map(|(t, c)| TableEntry { route_type: t.to_string(), count: c.to_string() })
            .collect()
    }
}

/// JSON row of a table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    #[serde(rename = "type")]
    pub route_type: String,
    pub count: String,
}

fn vertex_problem(m: &MixedMap, mode: Mode) -> Problem<u64> {
    let h = m.num_half_edges();
    let mut wires: Vec<(usize, usize)> = m.edges();
    wires.extend(m.externals().iter().enumerate().map(|(l, &x)| (x, h + l)));
    let nodes = (0..m.num_vertices())
        .map(|v| {
            let rot = m.rotation(v);
            mode.pairings(rot.len())
                .into_iter()
                .map(|p| (p.pairs().into_iter().map(|(a, b)| (rot[a], rot[b])).collect(), 1u64))
                .collect()
        })
        .collect();
    Problem { num_ports: h, num_externals: m.num_externals(), wires, nodes }
}

fn check_mode(m: &MixedMap, mode: Mode) -> Result<()> {
    m.check_even()?;
    if mode == Mode::ATrail && m.kind() != Kind::Map {
        return Err(Error::NotAMap);
    }
    Ok(())
}

/// Counts transition systems by the route type they trace, discarding any
/// that leave a closed curve.
pub fn count_vr(m: &MixedMap, mode: Mode) -> Result<VRTable> {
    check_mode(m, mode)?;
    if m.num_externals() < 2 {
        return Err(Error::ExternalCount { expected: "at least 2".into(), found: m.num_externals() });
    }
    let tally = solve(&vertex_problem(m, mode), Goal::Routes);
    let mut t = VRTable::new(mode, m.num_externals());
    for (key, c) in tally {
        t.add(RouteType::from_partners(&key), BigUint::from(c));
    }
    Ok(t)
}

/// Number of transition systems tracing a single closed curve through every
/// edge: Eulerian tours in general mode, A-trails in a-trail mode.
pub fn count_closed(m: &MixedMap, mode: Mode) -> Result<BigUint> {
    check_mode(m, mode)?;
    if m.num_externals() != 0 {
        return Err(Error::ExternalCount { expected: "0".into(), found: m.num_externals() });
    }
    if !m.is_connected() {
        return Err(Error::Disconnected);
    }
    let tally = solve(&vertex_problem(m, mode), Goal::SingleCycle);
    Ok(tally.into_values().next().map(BigUint::from).unwrap_or_default())
}
