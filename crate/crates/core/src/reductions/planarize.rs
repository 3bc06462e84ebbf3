//! Straight-line drawing with crossings replaced by crossover nodes.
//!
//! Vertices sit on a circle with jittered angles, so they are in convex
//! position. Parallel edges bend slightly off the chord and loops are small
//! outward triangles. Every crossing becomes a four-terminal node whose
//! labels run clockwise starting from the arm of the lower-numbered edge.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::counting::{flatten, Component, GadgetNetwork, Leaf, VRTable};
use crate::error::{Error, Result};
use crate::gadgets::{build_crossover, oxy_formula};
use crate::graph::{Endpoint, Kind, MixedMap, Mode};
use crate::kotzig::trace_faces;
use crate::reductions::primes::is_odd_prime;

type Pt = (f64, f64);

const EPS: f64 = 1e-9;
const MAX_ATTEMPTS: u64 = 32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    /// Edge indices, in the order of `MixedMap::edges`, lower first.
    pub edges: (usize, usize),
    pub point: Pt,
}

#[derive(Clone, Debug)]
pub struct Planarized {
    pub map: MixedMap,
    pub network: GadgetNetwork,
    pub crossings: Vec<Crossing>,
    /// Seeds tried before the drawing was clean.
    pub attempts: u64,
}

struct Drawing {
    pos: Vec<Pt>,
    /// Polyline of each edge, from the owner of its low half-edge.
    lines: Vec<Vec<Pt>>,
}

fn sub(a: Pt, b: Pt) -> Pt {
    (a.0 - b.0, a.1 - b.1)
}

fn cross(a: Pt, b: Pt) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn angle(v: Pt) -> f64 {
    v.1.atan2(v.0)
}

fn draw(g: &MixedMap, rng: &mut ChaCha8Rng) -> Drawing {
    use std::f64::consts::TAU;
    let n = g.num_vertices();
    let pos: Vec<Pt> = (0..n)
        .map(|v| {
            let t = TAU * (v as f64 + rng.gen_range(-0.25..0.25)) / n as f64;
            (t.cos(), t.sin())
        })
        .collect();
    let edges = g.edges();
    let mut lines = vec![Vec::new(); edges.len()];
    let mut groups: std::collections::BTreeMap<(usize, usize), Vec<usize>> = Default::default();
    for (i, &(h, t)) in edges.iter().enumerate() {
        let (u, w) = (g.owner(h).0, g.owner(t).0);
        groups.entry((u.min(w), u.max(w))).or_default().push(i);
    }
    let bend = 0.12 + rng.gen_range(0.0..0.02);
    for ((u, w), members) in groups {
        let m = members.len();
        for (k, &i) in members.iter().enumerate() {
            let (h, _) = edges[i];
            let (a, b) = if g.owner(h).0 == u { (u, w) } else { (w, u) };
            let (pa, pb) = (pos[a], pos[b]);
            if u == w {
                let out = pa;
                let r = 0.3 + 0.15 * k as f64;
                let phi = 0.3 + 0.1 * k as f64;
                let rot = |ang: f64| (out.0 * ang.cos() - out.1 * ang.sin(), out.0 * ang.sin() + out.1 * ang.cos());
                let (x, y) = (rot(phi), rot(-phi));
                lines[i] = vec![pa, (pa.0 + r * x.0, pa.1 + r * x.1), (pa.0 + r * y.0, pa.1 + r * y.1), pa];
                continue;
            }
            let offset = k as f64 - (m as f64 - 1.0) / 2.0;
            if offset.abs() < 1e-12 {
                lines[i] = vec![pa, pb];
            } else {
                // Offset measured against the fixed direction u -> w.
                let d = sub(pos[w], pos[u]);
                let normal = (-d.1, d.0);
                let mid = ((pa.0 + pb.0) / 2.0, (pa.1 + pb.1) / 2.0);
                let s = offset * bend;
                lines[i] = vec![pa, (mid.0 + s * normal.0, mid.1 + s * normal.1), pb];
            }
        }
    }
    Drawing { pos, lines }
}

/// Proper intersection parameters of two segments, if any.
fn intersect(a: Pt, b: Pt, c: Pt, d: Pt) -> std::result::Result<Option<(f64, f64)>, ()> {
    let r = sub(b, a);
    let s = sub(d, c);
    let denom = cross(r, s);
    let ca = sub(c, a);
    if denom.abs() < EPS {
        // Parallel: degenerate only if collinear and overlapping.
        if cross(ca, r).abs() < EPS {
            let len = r.0 * r.0 + r.1 * r.1;
            let t0 = (ca.0 * r.0 + ca.1 * r.1) / len;
            let t1 = t0 + (s.0 * r.0 + s.1 * r.1) / len;
            if t0.max(t1) > EPS && t0.min(t1) < 1.0 - EPS {
                return Err(());
            }
        }
        return Ok(None);
    }
    let t = cross(ca, s) / denom;
    let u = cross(ca, r) / denom;
    let inside = |x: f64| x > 1e-7 && x < 1.0 - 1e-7;
    let near = |x: f64| x > -1e-7 && x < 1.0 + 1e-7;
    if inside(t) && inside(u) {
        Ok(Some((t, u)))
    } else if near(t) && near(u) && !(shared(a, b, c, d)) {
        Err(())
    } else {
        Ok(None)
    }
}

fn same(p: Pt, q: Pt) -> bool {
    (p.0 - q.0).abs() < 1e-12 && (p.1 - q.1).abs() < 1e-12
}

fn shared(a: Pt, b: Pt, c: Pt, d: Pt) -> bool {
    same(a, c) || same(a, d) || same(b, c) || same(b, d)
}

fn point_on_segment(p: Pt, a: Pt, b: Pt) -> bool {
    let r = sub(b, a);
    let len = (r.0 * r.0 + r.1 * r.1).sqrt();
    let t = ((p.0 - a.0) * r.0 + (p.1 - a.1) * r.1) / (len * len);
    t > 1e-7 && t < 1.0 - 1e-7 && (cross(sub(p, a), r) / len).abs() < 1e-7
}

struct Hit {
    e: usize,
    f: usize,
    along_e: f64,
    along_f: f64,
    point: Pt,
    dir_e: Pt,
    dir_f: Pt,
}

fn crossings(d: &Drawing) -> std::result::Result<Vec<Hit>, ()> {
    for (v, &p) in d.pos.iter().enumerate() {
        for line in &d.lines {
            for w in line.windows(2) {
                if !same(w[0], p) && !same(w[1], p) && point_on_segment(p, w[0], w[1]) {
                    let _ = v;
                    return Err(());
                }
            }
        }
    }
    let mut hits = Vec::new();
    for e in 0..d.lines.len() {
        for f in e + 1..d.lines.len() {
            for (i, a) in d.lines[e].windows(2).enumerate() {
                for (j, b) in d.lines[f].windows(2).enumerate() {
                    if let Some((t, u)) = intersect(a[0], a[1], b[0], b[1])? {
                        let r = sub(a[1], a[0]);
                        hits.push(Hit {
                            e,
                            f,
                            along_e: i as f64 + t,
                            along_f: j as f64 + u,
                            point: (a[0].0 + t * r.0, a[0].1 + t * r.1),
                            dir_e: r,
                            dir_f: sub(b[1], b[0]),
                        });
                    }
                }
            }
        }
    }
    for (i, x) in hits.iter().enumerate() {
        for y in &hits[i + 1..] {
            if (x.point.0 - y.point.0).hypot(x.point.1 - y.point.1) < 1e-7 {
                return Err(());
            }
        }
    }
    Ok(hits)
}

/// Clockwise order of directions, as indices into `dirs`.
fn clockwise(dirs: &[Pt]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..dirs.len()).collect();
    idx.sort_by(|&a, &b| angle(dirs[b]).partial_cmp(&angle(dirs[a])).expect("finite"));
    idx
}

/// Draws a 4-regular graph and replaces each crossing by the crossover
/// node `(0,X,Y)(p, p)`. The result is a plane 4-regular map whose tour count
/// is congruent to that of the input modulo `p`.
pub fn planarize(g: &MixedMap, p: u64, seed: u64) -> Result<Planarized> {
    if !g.is_regular(4) || g.num_externals() != 0 {
        return Err(Error::InvalidParameter("planarize needs a closed 4-regular graph".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if !is_odd_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not an odd prime")));
    }
    let crossover = Leaf {
        table: VRTable::from_triple(Mode::General, oxy_formula(p as usize, p as usize)),
        map: Some(build_crossover(p as usize)?.with_kind(Kind::Map)),
    };
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let d = draw(g, &mut rng);
        let Ok(hits) = crossings(&d) else { continue };
        let out = assemble(g, &d, &hits, &crossover)?;
        if trace_faces(&out.0).is_ok() {
            let crossings = hits.iter().map(|h| Crossing { edges: (h.e, h.f), point: h.point }).collect();
            return Ok(Planarized { map: out.0, network: out.1, crossings, attempts: attempt + 1 });
        }
    }
    Err(Error::Degenerate(format!("no clean drawing after {MAX_ATTEMPTS} seeds")))
}

fn assemble(g: &MixedMap, d: &Drawing, hits: &[Hit], crossover: &Leaf) -> Result<(MixedMap, GadgetNetwork)> {
    let edges = g.edges();
    // Clockwise slot of each half-edge at its vertex.
    let mut slot = vec![0u32; g.num_half_edges()];
    for v in 0..g.num_vertices() {
        let dirs: Vec<Pt> = g
            .rotation(v)
            .iter()
            .map(|&h| {
                let e = edges.iter().position(|&(a, b)| a == h || b == h).expect("closed map");
                let line = &d.lines[e];
                if edges[e].0 == h {
                    sub(line[1], line[0])
                } else {
                    sub(line[line.len() - 2], line[line.len() - 1])
                }
            })
            .collect();
        for (label, i) in clockwise(&dirs).into_iter().enumerate() {
            slot[g.rotation(v)[i]] = label as u32;
        }
    }
    let n = g.num_vertices();
    let mut components: Vec<Component> = (0..n)
        .map(|v| Leaf::vertex(Kind::Map, Mode::General, g.degree(v)).map(Component::Leaf))
        .collect::<Result<_>>()?;
    // Per edge, the stops met along it: (position, incoming end, outgoing end).
    let mut stops: Vec<Vec<(f64, Endpoint, Endpoint)>> = vec![Vec::new(); edges.len()];
    for h in hits {
        let c = components.len();
        components.push(Component::Leaf(crossover.clone()));
        let neg = |x: Pt| (-x.0, -x.1);
        // Arms: 0 back along e, 1 forward along e, 2 back along f, 3 forward along f.
        let arms = [neg(h.dir_e), h.dir_e, neg(h.dir_f), h.dir_f];
        let mut order = clockwise(&arms);
        let start = order.iter().position(|&a| a == 0).expect("arm present");
        order.rotate_left(start);
        let mut label = [0u32; 4];
        for (l, &a) in order.iter().enumerate() {
            label[a] = l as u32;
        }
        stops[h.e].push((h.along_e, Endpoint::port(c, label[0]), Endpoint::port(c, label[1])));
        stops[h.f].push((h.along_f, Endpoint::port(c, label[2]), Endpoint::port(c, label[3])));
    }
    let mut links = Vec::new();
    for (e, &(a, b)) in edges.iter().enumerate() {
        stops[e].sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite"));
        let mut prev = Endpoint::port(g.owner(a).0, slot[a]);
        for &(_, inc, out) in &stops[e] {
            links.push((prev, inc));
            prev = out;
        }
        links.push((prev, Endpoint::port(g.owner(b).0, slot[b])));
    }
    let network = GadgetNetwork::new(Mode::General, components, links, 0)?;
    Ok((flatten(&network)?, network))
}
