//! Gadget builders. Each builder is pinned by its closed-form counts in
//! [`oracle`], so the wiring is checked by counting rather than by drawing.
//!
//! Four-terminal gadgets list their externals 0, 1, 2, 3 in the same cyclic
//! order as the slots of a single vertex, so they can replace a vertex of a
//! plane map without creating crossings.

pub mod oracle;

use serde::{Deserialize, Serialize};

use crate::counting::{Component, GadgetNetwork, Leaf, VRTable};
use crate::error::{Error, Result};
use crate::graph::{wire_gadgets, Endpoint, Kind, MapBuilder, MixedMap, Mode};
use crate::reductions::primes::is_odd_prime;

pub use oracle::{formula_oracle, oxy_formula, r_d, xyy_formula, Expected};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Blueprint {
    Xyy { k: usize },
    Oxy { p: usize, k: usize },
    Q { d: usize, p: usize },
    Deg4map,
    Shuffle { d: usize, layers: usize },
    Crossover { p: usize },
}

fn check_prime(p: usize) -> Result<()> {
    if !is_odd_prime(p as u64) {
        return Err(Error::InvalidParameter(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// Ladder of `k` vertices joined by parallel edge pairs; externals 0, 1 on
/// the first vertex and 2, 3 on the last.
pub fn build_xyy(k: usize) -> Result<MixedMap> {
    if k < 1 {
        return Err(Error::InvalidParameter("ladder needs k >= 1".into()));
    }
    let mut b = MapBuilder::new(Kind::Graph);
    // Slots: left-top, left-bottom, right-bottom, right-top.
    let vs: Vec<Vec<usize>> = (0..k).map(|_| b.add_vertex(4)).collect();
    b.export(0, vs[0][0]);
    b.export(1, vs[0][1]);
    for w in vs.windows(2) {
        b.connect(w[0][3], w[1][0]);
        b.connect(w[0][2], w[1][1]);
    }
    b.export(2, vs[k - 1][2]);
    b.export(3, vs[k - 1][3]);
    b.build()
}

/// Chain of `p` ladder nodes with parameter `k`.
pub fn build_0xy(p: usize, k: usize) -> Result<MixedMap> {
    check_prime(p)?;
    let node = build_xyy(k)?;
    let parts: Vec<&MixedMap> = vec![&node; p];
    let mut wires = vec![
        (Endpoint::External(0), Endpoint::port(0, 0)),
        (Endpoint::External(1), Endpoint::port(0, 3)),
        (Endpoint::External(2), Endpoint::port(p - 1, 2)),
        (Endpoint::External(3), Endpoint::port(p - 1, 1)),
    ];
    for j in 0..p - 1 {
        wires.push((Endpoint::port(j, 1), Endpoint::port(j + 1, 0)));
        wires.push((Endpoint::port(j, 2), Endpoint::port(j + 1, 3)));
    }
    Ok(wire_gadgets(Kind::Graph, &parts, &wires, 4)?.mirrored())
}

/// The node placed on each crossing of a drawing.
pub fn build_crossover(p: usize) -> Result<MixedMap> {
    build_0xy(p, p)
}

fn oxy_leaf(p: usize, k: usize) -> Result<Leaf> {
    Ok(Leaf {
        table: VRTable::from_triple(Mode::General, oxy_formula(p, k)),
        map: Some(build_0xy(p, k)?),
    })
}

/// Recursive gadget with inputs `IN_i` on label `i - 1` and outputs `OUT_i`
/// on label `d + i - 1`. Chain nodes carry their closed-form tables.
pub fn build_q(d: usize, p: usize) -> Result<GadgetNetwork> {
    if d < 1 {
        return Err(Error::InvalidParameter("Q needs d >= 1".into()));
    }
    check_prime(p)?;
    if p <= d {
        return Err(Error::InvalidParameter(format!("Q({d}, {p}) needs p > d")));
    }
    q_rec(d, p)
}

fn q_rec(d: usize, p: usize) -> Result<GadgetNetwork> {
    let ext = |l: usize| Endpoint::External(l as u32);
    if d == 1 {
        return GadgetNetwork::new(Mode::General, vec![], vec![(ext(0), ext(1))], 2);
    }
    let inner = q_rec(d - 1, p)?;
    let rect = d - 1;
    let mut components: Vec<Component> = (1..d).map(|i| oxy_leaf(p, i).map(Component::Leaf)).collect::<Result<_>>()?;
    components.push(Component::Nested(Box::new(inner)));
    let node = |i: usize, l: u32| Endpoint::port(i - 1, l);
    let mut links = Vec::new();
    for i in 1..d {
        links.push((node(i, 0), if i == 1 { ext(d - 1) } else { node(i - 1, 3) }));
        links.push((node(i, 1), ext(d - i - 1)));
        links.push((node(i, 2), Endpoint::port(rect, (d - i - 1) as u32)));
    }
    links.push((node(d - 1, 3), ext(2 * d - 1)));
    for j in 1..d {
        links.push((Endpoint::port(rect, (d - 1 + j - 1) as u32), ext(d + j - 1)));
    }
    GadgetNetwork::new(Mode::General, components, links, 2 * d as u32)
}

/// `Q(d, p)` with outputs `2j - 1` and `2j` joined; externals are the inputs.
pub fn closed_q(d: usize, p: usize) -> Result<GadgetNetwork> {
    if !d.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("closing outputs needs even d, got {d}")));
    }
    close_outputs(build_q(d, p)?, d)
}

fn close_outputs(inner: GadgetNetwork, d: usize) -> Result<GadgetNetwork> {
    let mode = inner.mode();
    let mut links: Vec<_> = (0..d as u32).map(|i| (Endpoint::External(i), Endpoint::port(0, i))).collect();
    for j in 0..d / 2 {
        links.push((Endpoint::port(0, (d + 2 * j) as u32), Endpoint::port(0, (d + 2 * j + 1) as u32)));
    }
    GadgetNetwork::new(mode, vec![Component::Nested(Box::new(inner))], links, d as u32)
}

/// Three-vertex map whose a-trail table is (2, 2, 2).
pub fn build_deg4_map_gadget() -> MixedMap {
    let mut b = MapBuilder::new(Kind::Map);
    let v0 = b.add_vertex(4);
    let v1 = b.add_vertex(4);
    let v2 = b.add_vertex(4);
    b.export(0, v0[0]);
    b.export(1, v0[2]);
    b.export(2, v1[0]);
    b.export(3, v2[0]);
    b.connect(v0[1], v1[1]);
    b.connect(v0[3], v2[1]);
    b.connect(v1[2], v2[2]);
    b.connect(v1[3], v2[3]);
    b.build().expect("fixed gadget is valid")
}

/// Vertex pairs of each layer, as 0-based wire positions.
pub fn shuffle_layers(d: usize, layers: usize) -> Vec<Vec<(usize, usize)>> {
    (1..=layers)
        .map(|t| {
            if t % 2 == 1 {
                (0..d / 2).map(|i| (2 * i, 2 * i + 1)).collect()
            } else {
                (1..d / 2).map(|i| (2 * i - 1, 2 * i)).collect()
            }
        })
        .collect()
}

/// Number of vertices in the shuffle gadget.
pub fn shuffle_vertex_count(d: usize, layers: usize) -> usize {
    if layers == 0 {
        return d;
    }
    shuffle_layers(d, layers).iter().map(Vec::len).sum()
}

fn check_shuffle(d: usize) -> Result<()> {
    if d < 2 || !d.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("shuffle gadget needs even d >= 2, got {d}")));
    }
    Ok(())
}

/// Layered shuffle map. Inputs are labels `0..d`, outputs `d..2d`. A vertex
/// has rotation (upper in, upper out, lower in, lower out), so its two inputs
/// are never cyclically adjacent. With no layers each wire gets a degree-2
/// vertex.
pub fn build_shuffle_gadget(d: usize, layers: usize) -> Result<MixedMap> {
    check_shuffle(d)?;
    let mut b = MapBuilder::new(Kind::Map);
    if layers == 0 {
        for i in 0..d {
            let v = b.add_vertex(2);
            b.export(i as u32, v[0]);
            b.export((d + i) as u32, v[1]);
        }
        return b.build();
    }
    // Loose end of each wire: `Err(label)` while still an input.
    let mut front: Vec<std::result::Result<usize, u32>> = (0..d as u32).map(Err).collect();
    let attach = |b: &mut MapBuilder, end: std::result::Result<usize, u32>, h: usize| match end {
        Ok(prev) => b.connect(prev, h),
        Err(label) => b.export(label, h),
    };
    for layer in shuffle_layers(d, layers) {
        for (up, low) in layer {
            let v = b.add_vertex(4);
            attach(&mut b, front[up], v[0]);
            attach(&mut b, front[low], v[2]);
            front[up] = Ok(v[1]);
            front[low] = Ok(v[3]);
        }
    }
    for (i, end) in front.into_iter().enumerate() {
        match end {
            Ok(h) => b.export((d + i) as u32, h),
            Err(_) => unreachable!("every wire meets the first layer"),
        }
    }
    b.build()
}

/// The shuffle gadget as nested networks, one level per layer, so its table
/// can be composed without enumerating all vertices at once.
pub fn shuffle_network(d: usize, layers: usize) -> Result<GadgetNetwork> {
    check_shuffle(d)?;
    let ext = |l: usize| Endpoint::External(l as u32);
    let mut net = GadgetNetwork::new(Mode::ATrail, vec![], (0..d).map(|i| (ext(i), ext(d + i))).collect(), 2 * d as u32)?;
    for layer in shuffle_layers(d, layers) {
        let vertex = Leaf::vertex(Kind::Map, Mode::ATrail, 4)?;
        let mut components = vec![Component::Nested(Box::new(net))];
        let mut links: Vec<_> = (0..d).map(|i| (ext(i), Endpoint::port(0, i as u32))).collect();
        let mut covered = vec![false; d];
        for (up, low) in layer {
            let c = components.len();
            components.push(Component::Leaf(vertex.clone()));
            links.push((Endpoint::port(0, (d + up) as u32), Endpoint::port(c, 0)));
            links.push((Endpoint::port(0, (d + low) as u32), Endpoint::port(c, 2)));
            links.push((Endpoint::port(c, 1), ext(d + up)));
            links.push((Endpoint::port(c, 3), ext(d + low)));
            covered[up] = true;
            covered[low] = true;
        }
        for (i, _) in covered.iter().enumerate().filter(|(_, c)| !**c) {
            links.push((Endpoint::port(0, (d + i) as u32), ext(d + i)));
        }
        net = GadgetNetwork::new(Mode::ATrail, components, links, 2 * d as u32)?;
    }
    Ok(net)
}

/// Shuffle network with outputs `2j - 1` and `2j` joined.
pub fn closed_shuffle(d: usize, layers: usize) -> Result<GadgetNetwork> {
    close_outputs(shuffle_network(d, layers)?, d)
}

/// Single map vertex with signature (1/2, 1/2, 0).
pub fn smg() -> MixedMap {
    MixedMap::star_with_rotation(Kind::Map, &[0, 1, 3, 2])
}

/// Single graph vertex with signature (1/3, 1/3, 1/3).
pub fn sgg() -> MixedMap {
    MixedMap::star(Kind::Graph, 4)
}

/// Builds the map of a blueprint; `Q` is flattened from its network.
pub fn build(bp: &Blueprint) -> Result<MixedMap> {
    match *bp {
        Blueprint::Xyy { k } => build_xyy(k),
        Blueprint::Oxy { p, k } => build_0xy(p, k),
        Blueprint::Q { d, p } => crate::counting::flatten(&build_q(d, p)?),
        Blueprint::Deg4map => Ok(build_deg4_map_gadget()),
        Blueprint::Shuffle { d, layers } => build_shuffle_gadget(d, layers),
        Blueprint::Crossover { p } => build_crossover(p),
    }
}
