use std::collections::HashMap;

use num_bigint::BigUint;

use super::engine::{solve, Goal, Problem};
use super::vr::{count_vr, VRTable};
use crate::error::{Error, Result};
use crate::graph::{wire_gadgets, Endpoint, Kind, Link, MapBuilder, MixedMap, Mode, RouteType};

/// A component with a known table, optionally backed by its concrete map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leaf {
    pub table: VRTable,
    pub map: Option<MixedMap>,
}

impl Leaf {
    pub fn from_map(map: MixedMap, mode: Mode) -> Result<Self> {
        Ok(Leaf { table: count_vr(&map, mode)?, map: Some(map) })
    }

    /// A single vertex of the given degree, externals in rotation order.
    pub fn vertex(kind: Kind, mode: Mode, degree: usize) -> Result<Self> {
        Self::from_map(MixedMap::star(kind, degree), mode)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Component {
    Leaf(Leaf),
    Nested(Box<GadgetNetwork>),
}

impl Component {
    pub fn num_labels(&self) -> usize {
        match self {
            Component::Leaf(l) => l.table.num_labels(),
            Component::Nested(n) => n.num_externals() as usize,
        }
    }
}

/// Components wired together. Every component label and every network
/// external label sits on exactly one link; external-to-external links are
/// pass-through wires.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetNetwork {
    mode: Mode,
    components: Vec<Component>,
    links: Vec<(Endpoint, Endpoint)>,
    num_externals: u32,
}

impl GadgetNetwork {
    pub fn new(
        mode: Mode,
        components: Vec<Component>,
        links: Vec<(Endpoint, Endpoint)>,
        num_externals: u32,
    ) -> Result<Self> {
        let net = GadgetNetwork { mode, components, links, num_externals };
        net.validate()?;
        Ok(net)
    }

    /// One component and no wiring beyond re-exporting its labels.
    pub fn single(mode: Mode, component: Component) -> Result<Self> {
        let n = component.num_labels() as u32;
        let links = (0..n).map(|l| (Endpoint::External(l), Endpoint::port(0, l))).collect();
        Self::new(mode, vec![component], links, n)
    }

    fn validate(&self) -> Result<()> {
        let mut seen: HashMap<Endpoint, ()> = HashMap::new();
        for &(a, b) in &self.links {
            for e in [a, b] {
                match e {
                    Endpoint::Port { part, label } => {
                        let c = self.components.get(part).ok_or_else(|| {
                            Error::Network(format!("link names missing component {part}"))
                        })?;
                        if label as usize >= c.num_labels() {
                            return Err(Error::Network(format!("component {part} has no label {label}")));
                        }
                    }
                    Endpoint::External(l) if l >= self.num_externals => {
                        return Err(Error::Network(format!("external label {l} out of range")));
                    }
                    Endpoint::External(_) => {}
                }
                if seen.insert(e, ()).is_some() {
                    return Err(Error::Network(format!("{e:?} linked twice")));
                }
            }
        }
        let needed: usize = self.components.iter().map(Component::num_labels).sum::<usize>() + self.num_externals as usize;
        if seen.len() != needed {
            return Err(Error::Network(format!("{} of {needed} ends are linked", seen.len())));
        }
        for (i, c) in self.components.iter().enumerate() {
            let mode = match c {
                Component::Leaf(l) => l.table.mode(),
                Component::Nested(n) => n.mode,
            };
            if mode != self.mode {
                return Err(Error::Network(format!("component {i} was counted in another mode")));
            }
            if c.num_labels() == 0 {
                return Err(Error::Network(format!("component {i} has no labels")));
            }
        }
        Ok(())
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn num_externals(&self) -> u32 {
        self.num_externals
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn links(&self) -> &[(Endpoint, Endpoint)] {
        &self.links
    }

    /// Number of leaves across the whole hierarchy.
    pub fn leaf_count(&self) -> usize {
        self.components
            .iter()
            .map(|c| match c {
                Component::Leaf(_) => 1,
                Component::Nested(n) => n.leaf_count(),
            })
            .sum()
    }

    /// Vertices of the flattened map, when every leaf carries a map.
    pub fn vertex_count(&self) -> Option<usize> {
        self.components
            .iter()
            .map(|c| match c {
                Component::Leaf(l) => l.map.as_ref().map(MixedMap::num_vertices),
                Component::Nested(n) => n.vertex_count(),
            })
            .sum()
    }

    fn problem(&self) -> Result<Problem<BigUint>> {
        let mut offsets = Vec::with_capacity(self.components.len());
        let mut num_ports = 0;
        let mut nodes = Vec::with_capacity(self.components.len());
        for c in &self.components {
            let table = match c {
                Component::Leaf(l) => l.table.clone(),
                Component::Nested(n) => compose_vr(n)?,
            };
            let base = num_ports;
            offsets.push(base);
            num_ports += table.num_labels();
            nodes.push(
                table
                    .iter()
                    .map(|(ty, count)| {
                        let pairs = ty
                            .pairs()
                            .iter()
                            .map(|&(a, b)| (base + a as usize, base + b as usize))
                            .collect();
                        (pairs, count.clone())
                    })
                    .collect(),
            );
        }
        let end = |e: Endpoint| match e {
            Endpoint::Port { part, label } => offsets[part] + label as usize,
            Endpoint::External(l) => num_ports + l as usize,
        };
        let wires = self.links.iter().map(|&(a, b)| (end(a), end(b))).collect();
        Ok(Problem { num_ports, num_externals: self.num_externals as usize, wires, nodes })
    }

    /// Splits a map into one leaf per block of `block_of` (indexed by vertex).
    /// Block labels are assigned in half-edge order.
    pub fn from_partition(m: &MixedMap, mode: Mode, block_of: &[usize]) -> Result<Self> {
        if block_of.len() != m.num_vertices() {
            return Err(Error::InvalidParameter("one block per vertex".into()));
        }
        let blocks = block_of.iter().max().map_or(0, |b| b + 1);
        let mut builders: Vec<MapBuilder> = (0..blocks).map(|_| MapBuilder::new(m.kind())).collect();
        let mut local = vec![0usize; m.num_half_edges()];
        for v in 0..m.num_vertices() {
            let hs = builders[block_of[v]].add_vertex(m.degree(v));
            for (new, &old) in hs.into_iter().zip(m.rotation(v)) {
                local[old] = new;
            }
        }
        let block = |h: usize| block_of[m.owner(h).0];
        let mut next_label = vec![0u32; blocks];
        let mut port_of = vec![None; m.num_half_edges()];
        for h in 0..m.num_half_edges() {
            match m.link(h) {
                Link::Twin(t) if block(t) == block(h) => {
                    if h < t {
                        builders[block(h)].connect(local[h], local[t]);
                    }
                }
                _ => {
                    let b = block(h);
                    builders[b].export(next_label[b], local[h]);
                    port_of[h] = Some(Endpoint::port(b, next_label[b]));
                    next_label[b] += 1;
                }
            }
        }
        let mut links = Vec::new();
        for h in 0..m.num_half_edges() {
            match (m.link(h), port_of[h]) {
                (Link::Twin(t), Some(p)) if h < t => links.push((p, port_of[t].expect("crossing edge"))),
                (Link::External(l), Some(p)) => links.push((Endpoint::External(l), p)),
                _ => {}
            }
        }
        let components = builders
            .into_iter()
            .map(|b| Leaf::from_map(b.build()?, mode).map(Component::Leaf))
            .collect::<Result<Vec<_>>>()?;
        Self::new(mode, components, links, m.num_externals() as u32)
    }
}

/// Table of a network on its external labels, computed from component tables.
pub fn compose_vr(net: &GadgetNetwork) -> Result<VRTable> {
    if net.num_externals == 0 {
        return Err(Error::ExternalCount { expected: "at least 2".into(), found: 0 });
    }
    let tally = solve(&net.problem()?, Goal::Routes);
    VRTable::from_entries(
        net.mode,
        net.num_externals as usize,
        tally.into_iter().map(|(k, c)| (RouteType::from_partners(&k), c)),
    )
}

/// Closed count of a network with no externals: component choices whose
/// strands close into a single curve.
pub fn count_closed_network(net: &GadgetNetwork) -> Result<BigUint> {
    if net.num_externals != 0 {
        return Err(Error::ExternalCount { expected: "0".into(), found: net.num_externals as usize });
    }
    let tally = solve(&net.problem()?, Goal::SingleCycle);
    Ok(tally.into_values().next().unwrap_or_default())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum WireNode {
    LeafPort(usize, u32),
    Hub(usize, u32),
}

/// Expands a network into one map by gluing the maps of all leaves,
/// contracting pass-through wires of nested networks.
pub fn flatten(net: &GadgetNetwork) -> Result<MixedMap> {
    let mut parts: Vec<&MixedMap> = Vec::new();
    let mut adj: HashMap<WireNode, Vec<WireNode>> = HashMap::new();
    let mut next_net = 1;
    collect(net, 0, &mut next_net, &mut parts, &mut adj)?;

    let terminal = |n: &WireNode| matches!(n, WireNode::LeafPort(..) | WireNode::Hub(0, _));
    let mut starts: Vec<WireNode> = adj.keys().copied().filter(terminal).collect();
    starts.sort_by_key(|n| match *n {
        WireNode::LeafPort(i, l) => (0, i, l),
        WireNode::Hub(i, l) => (1, i, l),
    });
    let mut done: HashMap<WireNode, ()> = HashMap::new();
    let mut wires = Vec::new();
    for s in starts {
        if done.contains_key(&s) {
            continue;
        }
        let (mut prev, mut cur) = (s, adj[&s][0]);
        while !terminal(&cur) {
            let nb = &adj[&cur];
            let next = if nb[0] == prev { nb[1] } else { nb[0] };
            prev = cur;
            cur = next;
        }
        done.insert(s, ());
        done.insert(cur, ());
        let as_end = |n: WireNode| match n {
            WireNode::LeafPort(i, l) => Endpoint::port(i, l),
            WireNode::Hub(_, l) => Endpoint::External(l),
        };
        wires.push((as_end(s), as_end(cur)));
    }
    let kind = if parts.iter().all(|m| m.kind() == Kind::Map) { Kind::Map } else { Kind::Graph };
    wire_gadgets(kind, &parts, &wires, net.num_externals)
}

fn collect<'a>(
    net: &'a GadgetNetwork,
    id: usize,
    next_net: &mut usize,
    parts: &mut Vec<&'a MixedMap>,
    adj: &mut HashMap<WireNode, Vec<WireNode>>,
) -> Result<()> {
    let mut refs = Vec::with_capacity(net.components.len());
    for c in &net.components {
        match c {
            Component::Leaf(l) => {
                let m = l.map.as_ref().ok_or_else(|| Error::Network("leaf has no map to flatten".into()))?;
                refs.push(WireNode::LeafPort(parts.len(), 0));
                parts.push(m);
            }
            Component::Nested(n) => {
                let child = *next_net;
                *next_net += 1;
                refs.push(WireNode::Hub(child, 0));
                collect(n, child, next_net, parts, adj)?;
            }
        }
    }
    let node = |e: Endpoint| match e {
        Endpoint::Port { part, label } => match refs[part] {
            WireNode::LeafPort(i, _) => WireNode::LeafPort(i, label),
            WireNode::Hub(i, _) => WireNode::Hub(i, label),
        },
        Endpoint::External(l) => WireNode::Hub(id, l),
    };
    for &(a, b) in &net.links {
        let (x, y) = (node(a), node(b));
        adj.entry(x).or_default().push(y);
        adj.entry(y).or_default().push(x);
    }
    Ok(())
}
