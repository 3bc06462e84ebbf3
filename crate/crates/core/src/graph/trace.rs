use super::transitions::Mode;
use super::{HalfEdge, Link, MixedMap, RouteType, TransitionSystem};

/// A trail from one external label to another, listing half-edges in the
/// order they are passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Route {
    pub start: u32,
    pub end: u32,
    pub half_edges: Vec<HalfEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteDecomposition {
    pub routes: Vec<Route>,
    /// Closed curves that never reach an external half-edge.
    pub cycles: Vec<Vec<HalfEdge>>,
}

impl RouteDecomposition {
    pub fn closed_cycles(&self) -> usize {
        self.cycles.len()
    }

    pub fn route_type(&self) -> RouteType {
        RouteType::new(self.routes.iter().map(|r| (r.start, r.end))).expect("routes match labels")
    }
}

/// Follows the transition system from every external half-edge, then picks up
/// the closed curves that remain. Returns `None` when `mode` is a-trail and
/// some pair is not cyclically adjacent.
pub fn trace(m: &MixedMap, ts: &TransitionSystem, mode: Mode) -> Option<RouteDecomposition> {
    assert_eq!(ts.pairings.len(), m.num_vertices(), "one pairing per vertex");
    for (v, p) in ts.pairings.iter().enumerate() {
        assert_eq!(p.degree(), m.degree(v), "pairing degree at vertex {v}");
        if mode == Mode::ATrail && !p.is_cyclically_adjacent() {
            return None;
        }
    }
    let through = |h: HalfEdge| {
        let (v, slot) = m.owner(h);
        m.rotation(v)[ts.pairings[v].partner(slot)]
    };
    let mut used = vec![false; m.num_half_edges()];
    let mut routes = Vec::new();
    for label in 0..m.num_externals() as u32 {
        let start = m.external(label);
        if used[start] {
            continue;
        }
        let mut h = start;
        let mut path = Vec::new();
        let end = loop {
            let out = through(h);
            used[h] = true;
            used[out] = true;
            path.extend([h, out]);
            match m.link(out) {
                Link::External(l) => break l,
                Link::Twin(t) => h = t,
            }
        };
        routes.push(Route { start: label, end, half_edges: path });
    }
    let mut cycles = Vec::new();
    for start in 0..m.num_half_edges() {
        if used[start] {
            continue;
        }
        let mut h = start;
        let mut cycle = Vec::new();
        loop {
            let out = through(h);
            used[h] = true;
            used[out] = true;
            cycle.extend([h, out]);
            let t = m.twin(out).expect("externals already consumed");
            if t == start {
                break;
            }
            h = t;
        }
        cycles.push(cycle);
    }
    Some(RouteDecomposition { routes, cycles })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Kind, Pairing, TransitionSystems};

    fn dipole() -> MixedMap {
        MixedMap::from_parts(
            Kind::Graph,
            &[(0, vec![0, 1, 2, 3]), (1, vec![4, 5, 6, 7])],
            &[(0, 4), (1, 5), (2, 6), (3, 7)],
            &[],
        )
        .unwrap()
    }

    #[test]
    fn adjacency_check_in_a_trail_mode() {
        let m = MixedMap::star(Kind::Map, 4);
        let adjacent = TransitionSystem::new(vec![Pairing::from_pairs(4, &[(0, 1), (2, 3)]).unwrap()]);
        let opposite = TransitionSystem::new(vec![Pairing::from_pairs(4, &[(0, 2), (1, 3)]).unwrap()]);
        assert!(trace(&m, &adjacent, Mode::ATrail).is_some());
        assert!(trace(&m, &opposite, Mode::ATrail).is_none());
        assert!(trace(&m, &opposite, Mode::General).is_some());
    }

    #[test]
    fn same_pairing_on_dipole_gives_two_cycles() {
        let p = Pairing::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        let d = trace(&dipole(), &TransitionSystem::new(vec![p.clone(), p]), Mode::General).unwrap();
        assert_eq!(d.closed_cycles(), 2);
        assert!(d.routes.is_empty());
    }

    #[test]
    fn every_half_edge_is_covered_once() {
        let m = dipole();
        for ts in TransitionSystems::new(&m, Mode::General).unwrap() {
            let d = trace(&m, &ts, Mode::General).unwrap();
            let mut all: Vec<_> = d.cycles.concat();
            all.sort();
            assert_eq!(all, (0..8).collect::<Vec<_>>());
        }
    }

    #[test]
    fn star_routes_follow_the_pairing() {
        let m = MixedMap::star(Kind::Graph, 4);
        let ts = TransitionSystem::new(vec![Pairing::from_pairs(4, &[(0, 3), (1, 2)]).unwrap()]);
        let d = trace(&m, &ts, Mode::General).unwrap();
        assert_eq!(d.route_type().to_string(), "{0,3}{1,2}");
    }
}
