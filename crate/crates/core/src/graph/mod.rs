//! Multigraphs and maps with half-edges.
//!
//! A [`MixedMap`] stores every vertex as a cyclic list of half-edges. Each
//! half-edge is either glued to a twin (forming an edge) or left dangling as
//! an external half-edge carrying a label. The same structure serves closed
//! graphs, rotation-system maps, and gadgets with an interface.
//!
//! Half-edges are dense indices `0..H` assigned in vertex order, so two maps
//! built from the same rotations are byte-identical when serialized.

mod codec;
mod route_type;
mod trace;
mod transitions;

pub use codec::{map_from_json, map_to_json, ExternalEntry, MapDocument, VertexEntry};
pub use route_type::RouteType;
pub use trace::{trace, Route, RouteDecomposition};
pub use transitions::{
    adjacent_pairings, pairing_count, slot_pairings, Mode, Pairing, TransitionSystem,
    TransitionSystems,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense half-edge index.
pub type HalfEdge = usize;

/// Whether the rotation order at a vertex carries meaning.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Graph,
    Map,
}

/// What sits on the far side of a half-edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Link {
    Twin(HalfEdge),
    External(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedMap {
    kind: Kind,
    vertex_ids: Vec<u64>,
    rotations: Vec<Vec<HalfEdge>>,
    link: Vec<Link>,
    owner: Vec<(usize, usize)>,
    externals: Vec<HalfEdge>,
}

impl MixedMap {
    /// Builds a map from raw ids, relabeling half-edges densely in vertex order.
    pub fn from_parts(
        kind: Kind,
        vertices: &[(u64, Vec<u64>)],
        edges: &[(u64, u64)],
        externals: &[(u64, u64)],
    ) -> Result<Self> {
        use std::collections::{HashMap, HashSet};

        let mut dense: HashMap<u64, HalfEdge> = HashMap::new();
        let mut seen_vertices = HashSet::new();
        let mut rotations = Vec::with_capacity(vertices.len());
        let mut owner = Vec::new();
        for (v, (id, rot)) in vertices.iter().enumerate() {
            if !seen_vertices.insert(*id) {
                return Err(Error::DuplicateVertex(*id));
            }
            let mut dense_rot = Vec::with_capacity(rot.len());
            for (slot, &h) in rot.iter().enumerate() {
                let next = dense.len();
                if dense.insert(h, next).is_some() {
                    return Err(Error::HalfEdgeReused(h));
                }
                owner.push((v, slot));
                dense_rot.push(next);
            }
            rotations.push(dense_rot);
        }
        let total = dense.len();
        let mut link: Vec<Option<Link>> = vec![None; total];
        let lookup = |h: u64| dense.get(&h).copied().ok_or(Error::DanglingHalfEdge(h));
        for &(a, b) in edges {
            let (da, db) = (lookup(a)?, lookup(b)?);
            if a == b {
                return Err(Error::HalfEdgeReused(a));
            }
            for (d, raw) in [(da, a), (db, b)] {
                if link[d].is_some() {
                    return Err(Error::HalfEdgeReused(raw));
                }
            }
            link[da] = Some(Link::Twin(db));
            link[db] = Some(Link::Twin(da));
        }
        let mut ext_slots: Vec<Option<HalfEdge>> = vec![None; externals.len()];
        for &(label, h) in externals {
            let d = lookup(h)?;
            if label as usize >= externals.len() || ext_slots[label as usize].is_some() {
                return Err(Error::ExternalLabels {
                    expected: externals.len(),
                    found: label,
                });
            }
            if link[d].is_some() {
                return Err(Error::HalfEdgeReused(h));
            }
            link[d] = Some(Link::External(label as u32));
            ext_slots[label as usize] = Some(d);
        }
        if !externals.len().is_multiple_of(2) {
            return Err(Error::ExternalLabels {
                expected: externals.len() + 1,
                found: externals.len() as u64,
            });
        }
        let mut raw_of = vec![0u64; total];
        for (&raw, &d) in &dense {
            raw_of[d] = raw;
        }
        let link = link
            .into_iter()
            .enumerate()
            .map(|(d, l)| l.ok_or(Error::DanglingHalfEdge(raw_of[d])))
            .collect::<Result<Vec<_>>>()?;
        Ok(MixedMap {
            kind,
            vertex_ids: vertices.iter().map(|(id, _)| *id).collect(),
            rotations,
            link,
            owner,
            externals: ext_slots.into_iter().map(|s| s.expect("labels checked")).collect(),
        })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn with_kind(mut self, kind: Kind) -> Self {
        self.kind = kind;
        self
    }

    pub fn num_vertices(&self) -> usize {
        self.rotations.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.link.len()
    }

    pub fn num_edges(&self) -> usize {
        (self.link.len() - self.externals.len()) / 2
    }

    pub fn num_externals(&self) -> usize {
        self.externals.len()
    }

    pub fn vertex_id(&self, v: usize) -> u64 {
        self.vertex_ids[v]
    }

    pub fn rotation(&self, v: usize) -> &[HalfEdge] {
        &self.rotations[v]
    }

    pub fn rotations(&self) -> &[Vec<HalfEdge>] {
        &self.rotations
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotations[v].len()
    }

    pub fn link(&self, h: HalfEdge) -> Link {
        self.link[h]
    }

    pub fn twin(&self, h: HalfEdge) -> Option<HalfEdge> {
        match self.link[h] {
            Link::Twin(t) => Some(t),
            Link::External(_) => None,
        }
    }

    /// Vertex index and rotation slot of a half-edge.
    pub fn owner(&self, h: HalfEdge) -> (usize, usize) {
        self.owner[h]
    }

    /// Half-edge carrying external label `label`.
    pub fn external(&self, label: u32) -> HalfEdge {
        self.externals[label as usize]
    }

    pub fn externals(&self) -> &[HalfEdge] {
        &self.externals
    }

    /// Edges as `(h, twin)` with `h < twin`, in increasing order of `h`.
    pub fn edges(&self) -> Vec<(HalfEdge, HalfEdge)> {
        self.link
            .iter()
            .enumerate()
            .filter_map(|(h, l)| match *l {
                Link::Twin(t) if h < t => Some((h, t)),
                _ => None,
            })
            .collect()
    }

    /// The clockwise successor of `h` around its vertex.
    pub fn rotation_successor(&self, h: HalfEdge) -> HalfEdge {
        let (v, slot) = self.owner[h];
        let rot = &self.rotations[v];
        rot[(slot + 1) % rot.len()]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.rotations.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.rotations.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_regular(&self, degree: usize) -> bool {
        self.rotations.iter().all(|r| r.len() == degree)
    }

    /// Fails with the first vertex of odd degree.
    pub fn check_even(&self) -> Result<()> {
        for (v, rot) in self.rotations.iter().enumerate() {
            if rot.len() % 2 != 0 {
                return Err(Error::OddDegree {
                    vertex: self.vertex_ids[v],
                    degree: rot.len(),
                });
            }
        }
        Ok(())
    }

    /// True when every vertex is reachable from vertex 0 along edges.
    pub fn is_connected(&self) -> bool {
        let n = self.num_vertices();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &h in &self.rotations[v] {
                if let Link::Twin(t) = self.link[h] {
                    let w = self.owner[t].0;
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Reverses every rotation (mirror image of the embedding).
    pub fn mirrored(&self) -> MixedMap {
        let mut b = MapBuilder::new(self.kind);
        let mut new_of = vec![0; self.num_half_edges()];
        for rot in &self.rotations {
            let mut order: Vec<HalfEdge> = rot.clone();
            if order.len() > 1 {
                order[1..].reverse();
            }
            let hs = b.add_vertex(order.len());
            for (new, old) in hs.into_iter().zip(order) {
                new_of[old] = new;
            }
        }
        self.copy_links_into(&mut b, &new_of, |l| l);
        b.build().expect("mirror of a valid map is valid")
    }

    /// Renames external labels: label `l` becomes `perm[l]`.
    pub fn relabel_externals(&self, perm: &[u32]) -> Result<MixedMap> {
        if perm.len() != self.num_externals() {
            return Err(Error::InvalidParameter(format!(
                "relabeling of length {} for {} externals",
                perm.len(),
                self.num_externals()
            )));
        }
        let mut b = MapBuilder::new(self.kind);
        let mut new_of = vec![0; self.num_half_edges()];
        for rot in &self.rotations {
            let hs = b.add_vertex(rot.len());
            for (new, &old) in hs.into_iter().zip(rot) {
                new_of[old] = new;
            }
        }
        self.copy_links_into(&mut b, &new_of, |l| perm[l as usize]);
        b.build()
    }

    fn copy_links_into(
        &self,
        b: &mut MapBuilder,
        new_of: &[HalfEdge],
        label: impl Fn(u32) -> u32,
    ) {
        for (h, l) in self.link.iter().enumerate() {
            match *l {
                Link::Twin(t) if h < t => b.connect(new_of[h], new_of[t]),
                Link::External(x) => b.export(label(x), new_of[h]),
                _ => {}
            }
        }
    }

    /// Closed map from neighbour lists: `rotations[u]` lists the neighbours
    /// of `u` in rotation order. The k-th `v` in `u`'s list is joined to the
    /// k-th `u` in `v`'s list. Loops are not expressible this way.
    pub fn from_neighbor_rotations(kind: Kind, rotations: &[Vec<usize>]) -> Result<MixedMap> {
        use std::collections::HashMap;
        let mut b = MapBuilder::new(kind);
        let hs: Vec<Vec<HalfEdge>> = rotations.iter().map(|r| b.add_vertex(r.len())).collect();
        let mut slots: HashMap<(usize, usize), Vec<HalfEdge>> = HashMap::new();
        for (u, r) in rotations.iter().enumerate() {
            for (slot, &v) in r.iter().enumerate() {
                if v == u || v >= rotations.len() {
                    return Err(Error::InvalidParameter(format!("vertex {u} lists neighbour {v}")));
                }
                slots.entry((u, v)).or_default().push(hs[u][slot]);
            }
        }
        for (&(u, v), mine) in &slots {
            if u < v {
                let theirs = slots.get(&(v, u)).map_or(&[][..], Vec::as_slice);
                if theirs.len() != mine.len() {
                    return Err(Error::InvalidParameter(format!("edges {u}-{v} listed unevenly")));
                }
                for (&a, &c) in mine.iter().zip(theirs) {
                    b.connect(a, c);
                }
            }
        }
        b.build()
    }

    /// Single vertex whose rotation slots are external labels `0..degree`.
    pub fn star(kind: Kind, degree: usize) -> MixedMap {
        Self::star_with_rotation(kind, &(0..degree as u32).collect::<Vec<_>>())
    }

    /// Single vertex whose clockwise rotation lists the given labels.
    pub fn star_with_rotation(kind: Kind, labels: &[u32]) -> MixedMap {
        let mut b = MapBuilder::new(kind);
        let hs = b.add_vertex(labels.len());
        for (h, &l) in hs.into_iter().zip(labels) {
            b.export(l, h);
        }
        b.build().expect("star is valid")
    }
}

/// Incremental construction of a [`MixedMap`]; half-edges are handed out densely.
#[derive(Debug)]
pub struct MapBuilder {
    kind: Kind,
    rotations: Vec<Vec<HalfEdge>>,
    link: Vec<Option<Link>>,
    conflict: Option<Error>,
}

impl MapBuilder {
    pub fn new(kind: Kind) -> Self {
        MapBuilder {
            kind,
            rotations: Vec::new(),
            link: Vec::new(),
            conflict: None,
        }
    }

    /// Adds a vertex and returns its half-edges in clockwise order.
    pub fn add_vertex(&mut self, degree: usize) -> Vec<HalfEdge> {
        let start = self.link.len();
        let hs: Vec<HalfEdge> = (start..start + degree).collect();
        self.link.extend(std::iter::repeat_n(None, degree));
        self.rotations.push(hs.clone());
        hs
    }

    pub fn num_vertices(&self) -> usize {
        self.rotations.len()
    }

    pub fn connect(&mut self, a: HalfEdge, b: HalfEdge) {
        self.set(a, Link::Twin(b));
        self.set(b, Link::Twin(a));
        if a == b {
            self.conflict.get_or_insert(Error::HalfEdgeReused(a as u64));
        }
    }

    pub fn export(&mut self, label: u32, h: HalfEdge) {
        self.set(h, Link::External(label));
    }

    fn set(&mut self, h: HalfEdge, l: Link) {
        match self.link.get_mut(h) {
            Some(slot @ None) => *slot = Some(l),
            Some(Some(_)) => {
                self.conflict.get_or_insert(Error::HalfEdgeReused(h as u64));
            }
            None => {
                self.conflict.get_or_insert(Error::DanglingHalfEdge(h as u64));
            }
        }
    }

    pub fn build(self) -> Result<MixedMap> {
        if let Some(e) = self.conflict {
            return Err(e);
        }
        let mut vertices = Vec::with_capacity(self.rotations.len());
        for (v, rot) in self.rotations.iter().enumerate() {
            vertices.push((v as u64, rot.iter().map(|&h| h as u64).collect()));
        }
        let mut edges = Vec::new();
        let mut externals = Vec::new();
        for (h, l) in self.link.iter().enumerate() {
            match l {
                Some(Link::Twin(t)) if h < *t => edges.push((h as u64, *t as u64)),
                Some(Link::Twin(_)) => {}
                Some(Link::External(x)) => externals.push((*x as u64, h as u64)),
                None => return Err(Error::DanglingHalfEdge(h as u64)),
            }
        }
        MixedMap::from_parts(self.kind, &vertices, &edges, &externals)
    }
}

/// Replaces chosen vertices by gadgets. Gadget label `i` takes the place of
/// rotation slot `i` of the vertex it replaces; other vertices are kept.
pub fn substitute(
    m: &MixedMap,
    kind: Kind,
    mut replacement: impl FnMut(usize) -> Option<MixedMap>,
) -> Result<MixedMap> {
    let parts: Vec<MixedMap> = (0..m.num_vertices())
        .map(|v| {
            let r = replacement(v).unwrap_or_else(|| MixedMap::star(kind, m.degree(v)));
            if r.num_externals() != m.degree(v) {
                return Err(Error::ExternalCount {
                    expected: m.degree(v).to_string(),
                    found: r.num_externals(),
                });
            }
            Ok(r)
        })
        .collect::<Result<_>>()?;
    let port = |h: HalfEdge| {
        let (v, slot) = m.owner(h);
        Endpoint::port(v, slot as u32)
    };
    let mut wires = Vec::new();
    for h in 0..m.num_half_edges() {
        match m.link(h) {
            Link::Twin(t) if h < t => wires.push((port(h), port(t))),
            Link::External(l) => wires.push((Endpoint::External(l), port(h))),
            _ => {}
        }
    }
    let refs: Vec<&MixedMap> = parts.iter().collect();
    wire_gadgets(kind, &refs, &wires, m.num_externals() as u32)
}

/// One side of a wire in a composite: a port of a part, or an external label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Port { part: usize, label: u32 },
    External(u32),
}

impl Endpoint {
    pub fn port(part: usize, label: u32) -> Self {
        Endpoint::Port { part, label }
    }
}

/// Glues gadgets together. Every port of every part and every external label
/// `0..num_externals` must occur in exactly one wire.
pub fn wire_gadgets(
    kind: Kind,
    parts: &[&MixedMap],
    wires: &[(Endpoint, Endpoint)],
    num_externals: u32,
) -> Result<MixedMap> {
    let mut b = MapBuilder::new(kind);
    let mut offsets = Vec::with_capacity(parts.len());
    for part in parts {
        let base = b.link.len();
        offsets.push(base);
        for rot in &part.rotations {
            b.add_vertex(rot.len());
        }
        for (h, l) in part.link.iter().enumerate() {
            if let Link::Twin(t) = *l {
                if h < t {
                    b.connect(base + h, base + t);
                }
            }
        }
    }
    let resolve = |e: Endpoint| -> Result<Option<HalfEdge>> {
        match e {
            Endpoint::Port { part, label } => {
                let p = parts.get(part).ok_or_else(|| {
                    Error::Network(format!("wire names missing part {part}"))
                })?;
                if label as usize >= p.num_externals() {
                    return Err(Error::Network(format!(
                        "part {part} has no external label {label}"
                    )));
                }
                Ok(Some(offsets[part] + p.external(label)))
            }
            Endpoint::External(l) if l < num_externals => Ok(None),
            Endpoint::External(l) => Err(Error::Network(format!("external label {l} out of range"))),
        }
    };
    for &(x, y) in wires {
        match (resolve(x)?, resolve(y)?) {
            (Some(a), Some(c)) => b.connect(a, c),
            (Some(a), None) => b.export(ext_label(y), a),
            (None, Some(c)) => b.export(ext_label(x), c),
            (None, None) => {
                return Err(Error::Network(
                    "a bare wire between two externals has no vertex to live on".into(),
                ))
            }
        }
    }
    b.build().map_err(|e| match e {
        Error::DanglingHalfEdge(_) | Error::HalfEdgeReused(_) | Error::ExternalLabels { .. } => {
            Error::Network(format!("wiring does not cover every port exactly once ({e})"))
        }
        other => other,
    })
}

fn ext_label(e: Endpoint) -> u32 {
    match e {
        Endpoint::External(l) => l,
        Endpoint::Port { .. } => unreachable!("caller matched an external"),
    }
}
