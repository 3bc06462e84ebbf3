//! Approximation-preserving instance: each vertex becomes a closed shuffle
//! gadget, and the A-trail count divided by a normalizer estimates the tour
//! count.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::expand::{check_eulerian, vertex_network};
use crate::chain::layers_for;
use crate::counting::{count_closed, count_closed_network, flatten, Component, GadgetNetwork};
use crate::error::{Error, Result};
use crate::gadgets::{closed_shuffle, shuffle_vertex_count};
use crate::graph::{MixedMap, Mode};

#[derive(Clone, Debug)]
pub struct ApInstance {
    pub map: MixedMap,
    pub network: GadgetNetwork,
    /// `prod_d R_d^(n_d)`.
    pub r: BigRational,
    /// Degree to gadget vertex count.
    pub d_d: BTreeMap<usize, usize>,
    /// Degree to layer count.
    pub t_d: BTreeMap<usize, usize>,
}

/// `R_d = 2^(D_d) 2^(d/2) (d/2)! / d!`.
pub fn r_factor(d: usize, vertices: usize) -> BigRational {
    let fact = |n: usize| (1..=n).fold(BigUint::one(), |a, i| a * i);
    let num = (BigUint::one() << (vertices + d / 2)) * fact(d / 2);
    BigRational::new(BigInt::from(num), BigInt::from(fact(d)))
}

/// Layers for degree `d`: TV at most `eps / (4 n d!)`.
pub fn layer_count(d: usize, n: usize, eps: f64, constant: f64) -> usize {
    layers_for(d, eps / (4.0 * n as f64), constant)
}

pub fn ap_instance(g: &MixedMap, eps: f64, constant: f64) -> Result<ApInstance> {
    check_eulerian(g)?;
    if !(eps > 0.0) || !(constant > 0.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps}, C = {constant}")));
    }
    let n = g.num_vertices();
    let mut t_d = BTreeMap::new();
    let mut d_d = BTreeMap::new();
    let mut gadgets: BTreeMap<usize, GadgetNetwork> = BTreeMap::new();
    for d in g.degrees() {
        if gadgets.contains_key(&d) {
            continue;
        }
        let t = layer_count(d, n, eps, constant);
        t_d.insert(d, t);
        d_d.insert(d, shuffle_vertex_count(d, t));
        gadgets.insert(d, closed_shuffle(d, t)?);
    }
    let components = (0..n).map(|v| Component::Nested(Box::new(gadgets[&g.degree(v)].clone()))).collect();
    let network = vertex_network(g, Mode::ATrail, components)?;
    let map = flatten(&network)?;
    let r = g.degrees().into_iter().fold(BigRational::one(), |acc, d| acc * r_factor(d, d_d[&d]));
    Ok(ApInstance { map, network, r, d_d, t_d })
}

/// Any A-trail counter, given the accuracy it is asked for.
pub trait ATrailOracle {
    fn count(&self, instance: &ApInstance, eps: f64) -> Result<BigUint>;
}

/// Exact count by composing the instance network.
pub struct ExactNetworkOracle;

impl ATrailOracle for ExactNetworkOracle {
    fn count(&self, instance: &ApInstance, _eps: f64) -> Result<BigUint> {
        count_closed_network(&instance.network)
    }
}

/// Exact count by enumerating transition systems of the flat map.
pub struct BruteForceOracle;

impl ATrailOracle for BruteForceOracle {
    fn count(&self, instance: &ApInstance, _eps: f64) -> Result<BigUint> {
        count_closed(&instance.map, Mode::ATrail)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    /// Exact rational value of the estimate.
    pub value: String,
    pub value_float: f64,
    /// True when `eps > 2n` and `3^n` is returned without a reduction.
    pub trivial: bool,
    pub layers: BTreeMap<usize, usize>,
    pub gadget_vertices: BTreeMap<usize, usize>,
    pub normalizer: String,
}

pub fn estimate_et(g: &MixedMap, eps: f64, constant: f64, oracle: &dyn ATrailOracle) -> Result<Estimate> {
    let n = g.num_vertices();
    if eps > 2.0 * n as f64 {
        let v = num_traits::pow(BigUint::from(3u32), n);
        return Ok(Estimate {
            value_float: v.to_f64().unwrap_or(f64::INFINITY),
            value: v.to_string(),
            trivial: true,
            layers: BTreeMap::new(),
            gadget_vertices: BTreeMap::new(),
            normalizer: "1".into(),
        });
    }
    let inst = ap_instance(g, eps, constant)?;
    let a = oracle.count(&inst, eps / 2.0)?;
    let value = BigRational::from_integer(a.into()) / &inst.r;
    Ok(Estimate {
        value_float: value.to_f64().unwrap_or(f64::NAN),
        value: value.to_string(),
        trivial: false,
        layers: inst.t_d,
        gadget_vertices: inst.d_d,
        normalizer: inst.r.to_string(),
    })
}
