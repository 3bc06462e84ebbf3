//! The even/odd sweep chain on `d` cards: odd layers may swap positions
//! (0,1), (2,3), ..., even layers (1,2), (3,4), ..., each swap independently
//! with probability 1/2. A state `sigma` records `sigma[card] = position`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::count_vr;
use crate::error::{Error, Result};
use crate::gadgets::{build_shuffle_gadget, shuffle_layers};
use crate::graph::{Mode, RouteType};

/// Largest number of cards handled.
pub const DEFAULT_CARD_CAP: usize = 8;

/// Layer constant `C` in `T = ceil(C d^2 ln d ln(d!/eps))`. Dominates every
/// ratio measured by [`calibrate`] on [`CALIBRATION_DEGREES`] x
/// [`CALIBRATION_EPS`], rounded up.
pub const DEFAULT_LAYER_CONSTANT: f64 = 0.2;

pub const CALIBRATION_DEGREES: [usize; 4] = [2, 4, 6, 8];
pub const CALIBRATION_EPS: [f64; 5] = [0.5, 1e-1, 1e-2, 1e-4, 1e-6];

/// All permutations of `0..d` in lexicographic order, with adjacent-swap tables.
#[derive(Clone, Debug)]
pub struct PermIndex {
    d: usize,
    perms: Vec<Vec<u8>>,
    /// `swap[a][i]`: index of perms[i] with positions `a` and `a + 1` exchanged.
    swap: Vec<Vec<u32>>,
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Lexicographic rank of a permutation.
pub fn perm_rank(p: &[u8]) -> usize {
    let d = p.len();
    let mut rank = 0;
    for i in 0..d {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count();
        rank += smaller * factorial(d - 1 - i);
    }
    rank
}

impl PermIndex {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 || d > DEFAULT_CARD_CAP {
            return Err(Error::SizeCap(format!("{d} cards; cap is {DEFAULT_CARD_CAP}")));
        }
        let mut perms = Vec::with_capacity(factorial(d));
        let mut p: Vec<u8> = (0..d as u8).collect();
        loop {
            perms.push(p.clone());
            // Next permutation in lexicographic order.
            let Some(i) = (0..d - 1).rev().find(|&i| p[i] < p[i + 1]) else { break };
            let j = (i + 1..d).rev().find(|&j| p[j] > p[i]).expect("exists");
            p.swap(i, j);
            p[i + 1..].reverse();
        }
        let swap = (0..d.saturating_sub(1))
            .map(|a| {
                perms
                    .iter()
                    .map(|s| {
                        let t: Vec<u8> = s
                            .iter()
                            .map(|&pos| match pos as usize {
                                x if x == a => (a + 1) as u8,
                                x if x == a + 1 => a as u8,
                                _ => pos,
                            })
                            .collect();
                        perm_rank(&t) as u32
                    })
                    .collect()
            })
            .collect();
        Ok(PermIndex { d, perms, swap })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn perm(&self, i: usize) -> &[u8] {
        &self.perms[i]
    }
}

/// Exact distribution after `layers` layers: `counts[i] / 2^swaps`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermDistribution {
    pub d: usize,
    pub layers: usize,
    /// Number of swap sites applied; the denominator is `2^swaps`.
    pub swaps: usize,
    pub counts: Vec<BigUint>,
}

impl PermDistribution {
    pub fn probability(&self, i: usize) -> BigRational {
        BigRational::new(self.counts[i].clone().into(), (BigUint::one() << self.swaps).into())
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }
}

fn step_exact(index: &PermIndex, counts: &[BigUint], a: usize) -> Vec<BigUint> {
    let table = &index.swap[a];
    (0..counts.len()).into_par_iter().map(|i| &counts[i] + &counts[table[i] as usize]).collect()
}

fn step_float(index: &PermIndex, probs: &[f64], a: usize) -> Vec<f64> {
    let table = &index.swap[a];
    (0..probs.len()).into_par_iter().map(|i| 0.5 * (probs[i] + probs[table[i] as usize])).collect()
}

/// Swap sites of layer `t` (1-based), as the lower position of each pair.
fn layer_sites(d: usize, t: usize) -> Vec<usize> {
    let start = if t % 2 == 1 { 0 } else { 1 };
    (start..d.saturating_sub(1)).step_by(2).collect()
}

/// Runs the chain from the identity for `layers` layers, exactly.
pub fn chain_distribution(d: usize, layers: usize) -> Result<PermDistribution> {
    let index = PermIndex::new(d)?;
    let mut counts = vec![BigUint::zero(); index.len()];
    counts[0] = BigUint::one();
    let mut swaps = 0;
    for t in 1..=layers {
        for a in layer_sites(d, t) {
            counts = step_exact(&index, &counts, a);
            swaps += 1;
        }
    }
    Ok(PermDistribution { d, layers, swaps, counts })
}

/// `1/2 sum |p - 1/d!|`.
pub fn tv_to_uniform(dist: &PermDistribution) -> BigRational {
    let n = dist.counts.len();
    let denom = BigUint::one() << dist.swaps;
    // |c/2^s - 1/n| summed, over the common denominator n 2^s.
    let total: BigUint = dist
        .counts
        .iter()
        .map(|c| {
            let a = c * n;
            if a >= denom {
                a - &denom
            } else {
                &denom - a
            }
        })
        .sum();
    BigRational::new(total.into(), (denom * n * 2u32).into())
}

/// Floating-point TV after each layer `0..=max_layers`.
pub fn tv_curve(d: usize, max_layers: usize) -> Result<Vec<f64>> {
    let index = PermIndex::new(d)?;
    let n = index.len() as f64;
    let mut probs = vec![0.0; index.len()];
    probs[0] = 1.0;
    let tv = |p: &[f64]| 0.5 * p.iter().map(|x| (x - 1.0 / n).abs()).sum::<f64>();
    let mut out = vec![tv(&probs)];
    for t in 1..=max_layers {
        for a in layer_sites(d, t) {
            probs = step_float(&index, &probs, a);
        }
        out.push(tv(&probs));
    }
    Ok(out)
}

/// Slack for float comparisons against a TV bound.
pub const FLOAT_SLACK: f64 = 1e-12;

/// Exact arithmetic up to this many cards, floats above.
pub const EXACT_CARD_LIMIT: usize = 6;

/// Hard stop for layer searches.
pub const MAX_LAYERS: usize = 100_000;

/// `ceil(C d^2 ln d ln(d!/eps))`, at least 1.
pub fn layers_for(d: usize, eps: f64, constant: f64) -> usize {
    let df = d as f64;
    let fact: f64 = (1..=d).map(|i| i as f64).product();
    let t = constant * df * df * df.ln() * (fact / eps).ln();
    (t.ceil() as usize).max(1)
}

/// Smallest `T` with TV at most `target`; scans layer by layer.
pub fn min_layers(d: usize, target: f64) -> Result<usize> {
    if d <= 1 {
        return Ok(0);
    }
    let index = PermIndex::new(d)?;
    let n = index.len() as f64;
    let mut probs = vec![0.0; index.len()];
    probs[0] = 1.0;
    for t in 0..=MAX_LAYERS {
        if t > 0 {
            for a in layer_sites(d, t) {
                probs = step_float(&index, &probs, a);
            }
        }
        let tv = 0.5 * probs.iter().map(|x| (x - 1.0 / n).abs()).sum::<f64>();
        if tv <= target + FLOAT_SLACK {
            return Ok(t);
        }
    }
    Err(Error::SizeCap(format!("TV above {target} after {MAX_LAYERS} layers")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingReport {
    pub d: usize,
    pub eps: f64,
    pub constant: f64,
    pub layers: usize,
    /// Exact TV as a fraction, when computed exactly.
    pub tv: Option<String>,
    pub tv_float: f64,
    /// `eps / d!`.
    pub bound: f64,
    pub within_bound: bool,
    pub min_layers: usize,
}

pub fn mixing_report(d: usize, eps: f64, constant: f64) -> Result<MixingReport> {
    if !(eps > 0.0 && eps < 1.0) || !(constant > 0.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps}, C = {constant}")));
    }
    let layers = layers_for(d, eps, constant);
    let fact: f64 = (1..=d).map(|i| i as f64).product();
    let bound = eps / fact;
    let (tv, tv_float) = if d <= EXACT_CARD_LIMIT {
        let exact = tv_to_uniform(&chain_distribution(d, layers)?);
        let f = exact.to_f64().unwrap_or(f64::NAN);
        (Some(exact.to_string()), f)
    } else {
        (None, *tv_curve(d, layers)?.last().expect("nonempty"))
    };
    Ok(MixingReport {
        d,
        eps,
        constant,
        layers,
        tv,
        tv_float,
        bound,
        within_bound: tv_float <= bound + FLOAT_SLACK,
        min_layers: min_layers(d, bound)?,
    })
}

/// Infimum of the `C` for which [`layers_for`] reaches `T_min` at one grid
/// point: `ceil(C x) >= T_min` iff `C x > T_min - 1`.
pub fn calibration_ratio(d: usize, eps: f64) -> Result<f64> {
    let df = d as f64;
    let fact: f64 = (1..=d).map(|i| i as f64).product();
    let t = min_layers(d, eps / fact)?;
    Ok(t.saturating_sub(1) as f64 / (df * df * df.ln() * (fact / eps).ln()))
}

/// Largest ratio over the grid; any `C` strictly above it meets every point.
pub fn calibrate(degrees: &[usize], eps: &[f64]) -> Result<f64> {
    let mut c: f64 = 0.0;
    for &d in degrees.iter().filter(|&&d| d >= 2) {
        for &e in eps {
            c = c.max(calibration_ratio(d, e)?);
        }
    }
    Ok(c)
}

/// Compares the normalized shuffle-gadget table with the chain, key by key.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetChainCheck {
    pub d: usize,
    pub layers: usize,
    pub pass: bool,
    pub mismatches: Vec<String>,
}

/// Default half-edge budget `d T` for brute force.
pub const DEFAULT_BUDGET: usize = 24;

pub fn gadget_chain_check(d: usize, layers: usize, budget: usize) -> Result<GadgetChainCheck> {
    if d * layers > budget {
        return Err(Error::SizeCap(format!("d T = {} exceeds budget {budget}", d * layers)));
    }
    let table = count_vr(&build_shuffle_gadget(d, layers)?, Mode::ATrail)?;
    let dist = chain_distribution(d, layers)?;
    let index = PermIndex::new(d)?;
    let total = table.total();
    let mut mismatches = Vec::new();
    for (ty, _) in table.iter() {
        if ty.as_permutation().is_none() {
            mismatches.push(format!("{ty}: not a permutation"));
        }
    }
    for i in 0..index.len() {
        let sigma: Vec<usize> = index.perm(i).iter().map(|&x| x as usize).collect();
        let got = BigRational::new(table.get(&RouteType::from_permutation(&sigma)).into(), total.clone().into());
        let want = dist.probability(i);
        if got != want {
            mismatches.push(format!("{}: gadget {got}, chain {want}", RouteType::from_permutation(&sigma)));
        }
    }
    debug_assert_eq!(shuffle_layers(d, layers).iter().map(Vec::len).sum::<usize>(), dist.swaps);
    Ok(GadgetChainCheck { d, layers, pass: mismatches.is_empty(), mismatches })
}

/// True when the counts sum to the denominator.
pub fn is_distribution(dist: &PermDistribution) -> bool {
    dist.total() == BigUint::one() << dist.swaps
}
