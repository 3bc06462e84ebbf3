use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::crt::{unscale_and_crt, DegreeProfile, ResiduePair};
use super::primes::{is_odd_prime, select_primes};
use crate::counting::{count_closed_network, Component, GadgetNetwork, Leaf};
use crate::error::{Error, Result};
use crate::gadgets::closed_q;
use crate::graph::{pairing_count, Endpoint, Kind, Link, MixedMap, Mode};

/// Which vertices get a Q gadget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Threshold {
    /// Degree above four.
    AboveFour,
    /// Degree four and above, so tiny graphs exercise the gadgets.
    TestMode,
}

impl Threshold {
    pub fn replaces(self, degree: usize) -> bool {
        match self {
            Threshold::AboveFour => degree > 4,
            Threshold::TestMode => degree >= 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Expansion {
    pub network: GadgetNetwork,
    /// Degrees of the replaced vertices.
    pub profile: DegreeProfile,
    pub replaced: Vec<usize>,
}

pub(crate) fn check_eulerian(g: &MixedMap) -> Result<()> {
    g.check_even()?;
    if g.num_externals() != 0 {
        return Err(Error::ExternalCount { expected: "0".into(), found: g.num_externals() });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if let Some(v) = (0..g.num_vertices()).find(|&v| g.degree(v) < 4) {
        return Err(Error::InvalidParameter(format!(
            "vertex {} has degree {}; contract degree-2 vertices first",
            g.vertex_id(v),
            g.degree(v)
        )));
    }
    Ok(())
}

/// Wires one component per vertex along the edges of `g`; component `v`
/// label `i` stands for rotation slot `i` of vertex `v`.
pub(crate) fn vertex_network(g: &MixedMap, mode: Mode, components: Vec<Component>) -> Result<GadgetNetwork> {
    let port = |h: usize| {
        let (v, slot) = g.owner(h);
        Endpoint::port(v, slot as u32)
    };
    let links = (0..g.num_half_edges())
        .filter_map(|h| match g.link(h) {
            Link::Twin(t) if h < t => Some((port(h), port(t))),
            _ => None,
        })
        .collect();
    GadgetNetwork::new(mode, components, links, 0)
}

/// Replaces high-degree vertices by `Q(d, p)` with output pairs closed. The
/// result is a closed network whose flattened map is 4-regular.
pub fn expand_to_4regular(g: &MixedMap, p: u64, threshold: Threshold) -> Result<Expansion> {
    check_eulerian(g)?;
    if !is_odd_prime(p) || p as usize <= g.max_degree() {
        return Err(Error::InvalidParameter(format!(
            "p = {p} must be an odd prime above the maximum degree {}",
            g.max_degree()
        )));
    }
    let mut replaced = Vec::new();
    let mut components = Vec::with_capacity(g.num_vertices());
    for v in 0..g.num_vertices() {
        let d = g.degree(v);
        if threshold.replaces(d) {
            replaced.push(v);
            components.push(Component::Nested(Box::new(closed_q(d, p as usize)?)));
        } else {
            components.push(Component::Leaf(Leaf::vertex(Kind::Graph, Mode::General, d)?));
        }
    }
    let profile = DegreeProfile::of_vertices(g, |v| threshold.replaces(g.degree(v)));
    Ok(Expansion { network: vertex_network(g, Mode::General, components)?, profile, replaced })
}

/// Number of transition systems, an upper bound on the tour count.
pub fn tour_bound(g: &MixedMap) -> BigUint {
    g.degrees().into_iter().map(|d| BigUint::from(pairing_count(d))).fold(BigUint::one(), |a, b| a * b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrtReport {
    pub primes: Vec<u64>,
    pub residues: Vec<ResiduePair>,
    pub profile: DegreeProfile,
    pub bound: String,
    pub tours: String,
}

/// Counts Eulerian tours through the 4-regular expansions: one residue per
/// prime from the composed network, then unscaling and CRT.
pub fn count_et_via_crt(g: &MixedMap, threshold: Threshold) -> Result<CrtReport> {
    check_eulerian(g)?;
    let bound = tour_bound(g);
    let lower = g.max_degree().max(2) as u64;
    let primes = select_primes(64, lower, &bound)?;
    let expansions: Vec<(u64, Expansion)> =
        primes.iter().map(|&p| expand_to_4regular(g, p, threshold).map(|e| (p, e))).collect::<Result<_>>()?;
    let residues: Vec<ResiduePair> = expansions
        .par_iter()
        .map(|(p, e)| {
            let t = count_closed_network(&e.network)?;
            Ok(ResiduePair { residue: (t % *p).to_u64().expect("reduced"), modulus: *p })
        })
        .collect::<Result<_>>()?;
    let profile = expansions[0].1.profile.clone();
    let tours = unscale_and_crt(&residues, &profile)?;
    Ok(CrtReport { primes, residues, profile, bound: bound.to_string(), tours: tours.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{count_closed, flatten};

    fn dipole(d: usize) -> MixedMap {
        MixedMap::from_neighbor_rotations(Kind::Graph, &[vec![1; d], vec![0; d]]).unwrap()
    }

    #[test]
    fn four_regular_is_untouched_by_default() {
        let e = expand_to_4regular(&dipole(4), 5, Threshold::AboveFour).unwrap();
        assert!(e.replaced.is_empty());
        let flat = flatten(&e.network).unwrap();
        assert_eq!(flat.num_vertices(), 2);
        assert_eq!(count_closed_network(&e.network).unwrap(), BigUint::from(6u32));
    }

    #[test]
    fn six_dipole_expands_to_four_regular() {
        let e = expand_to_4regular(&dipole(6), 7, Threshold::AboveFour).unwrap();
        assert_eq!(e.replaced, vec![0, 1]);
        let flat = flatten(&e.network).unwrap();
        assert!(flat.is_regular(4));
        assert!(expand_to_4regular(&dipole(6), 5, Threshold::AboveFour).is_err());
    }

    #[test]
    fn test_mode_dipole_residue() {
        let e = expand_to_4regular(&dipole(4), 5, Threshold::TestMode).unwrap();
        let t = count_closed_network(&e.network).unwrap() % 5u32;
        let f: u32 = (2 * 4 * 192) % 5;
        assert_eq!(t, BigUint::from((6 * f * f) % 5u32));
    }

    #[test]
    fn pipeline_reconstructs_dipole_counts() {
        for (g, mode) in [(dipole(4), Threshold::TestMode), (dipole(6), Threshold::AboveFour)] {
            let r = count_et_via_crt(&g, mode).unwrap();
            assert_eq!(r.tours, count_closed(&g, Mode::General).unwrap().to_string());
        }
    }
}
