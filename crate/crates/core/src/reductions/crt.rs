use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadgets::r_d;
use crate::graph::MixedMap;

/// Degree to number of vertices of that degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile(pub BTreeMap<usize, usize>);

impl DegreeProfile {
    pub fn of_vertices(m: &MixedMap, keep: impl Fn(usize) -> bool) -> Self {
        let mut p = BTreeMap::new();
        for v in 0..m.num_vertices() {
            if keep(v) {
                *p.entry(m.degree(v)).or_insert(0) += 1;
            }
        }
        DegreeProfile(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResiduePair {
    pub residue: u64,
    pub modulus: u64,
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc: u128 = 1 % m128;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(m));
    if !e.gcd.is_one() {
        return None;
    }
    let x = e.x.mod_floor(&BigInt::from(m));
    x.to_u64()
}

/// `(d/2)! 2^(d/2) R_d` modulo `p`: how many closed-gadget route sets a
/// single pairing of the inputs stands for, reduced.
pub fn vertex_factor(d: usize, p: u64) -> u64 {
    let mut f = r_d(d) << (d / 2);
    for i in 1..=d / 2 {
        f *= i;
    }
    (f % p).to_u64().expect("reduced below p")
}

/// Divides out the per-vertex factors from each residue and combines the
/// results by the Chinese remainder theorem. Residues that contradict each
/// other cannot be detected and give some number below the modulus product.
pub fn unscale_and_crt(pairs: &[ResiduePair], profile: &DegreeProfile) -> Result<BigUint> {
    let mut acc = BigUint::zero();
    let mut modulus = BigUint::one();
    for pair in pairs {
        let p = pair.modulus;
        if p < 2 || pair.residue >= p {
            return Err(Error::InvalidParameter(format!("residue {} mod {p}", pair.residue)));
        }
        let mut factor = 1 % p;
        for (&d, &n) in &profile.0 {
            factor = (factor as u128 * pow_mod(vertex_factor(d, p), n as u64, p) as u128 % p as u128) as u64;
        }
        let inv = inverse_mod(factor, p)
            .ok_or_else(|| Error::NotInvertible { value: factor.to_string(), modulus: p })?;
        let t = (pair.residue as u128 * inv as u128 % p as u128) as u64;
        // Solve x = acc (mod modulus), x = t (mod p).
        let m_mod_p = (&modulus % p).to_u64().expect("below p");
        let m_inv = inverse_mod(m_mod_p, p).ok_or_else(|| Error::NotInvertible {
            value: modulus.to_string(),
            modulus: p,
        })?;
        let acc_mod_p = (&acc % p).to_u64().expect("below p");
        let k = ((t + p - acc_mod_p) as u128 % p as u128 * m_inv as u128 % p as u128) as u64;
        acc += &modulus * k;
        modulus *= p;
    }
    Ok(acc)
}
