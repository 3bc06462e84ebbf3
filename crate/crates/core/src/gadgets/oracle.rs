use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};

use super::Blueprint;
use crate::error::{Error, Result};

/// Counts on (01|23, 02|13, 03|12) for the ladder node: `(B, A, A)` with
/// `A = 2^(k-1)` and `B = k 2^(k-1)`.
pub fn xyy_formula(k: usize) -> [BigUint; 3] {
    let (a, b) = ab(k);
    [b, a.clone(), a]
}

fn ab(k: usize) -> (BigUint, BigUint) {
    let a = BigUint::one() << (k - 1);
    let b = &a * k;
    (a, b)
}

/// Counts for a chain of `p` ladder nodes with parameter `k`.
pub fn oxy_formula(p: usize, k: usize) -> [BigUint; 3] {
    let (a, b) = ab(k);
    let s = BigInt::from(&a + &b);
    let t = BigInt::from(b.clone()) - BigInt::from(a.clone());
    let sp = s.pow(p as u32);
    let tp = t.pow(p as u32);
    let half = |x: BigInt| -> BigUint {
        debug_assert!(!Signed::is_negative(&x));
        (x / BigInt::from(2)).to_biguint().expect("nonnegative")
    };
    let first = &a * p * (&a + &b).pow(p as u32 - 1);
    [first, half(&sp - &tp), half(&sp + &tp)]
}

/// `R_d = prod_{i=1}^{d-1} 2^(i(i-1)/2) i!`.
pub fn r_d(d: usize) -> BigUint {
    let mut r = BigUint::one();
    let mut fact = BigUint::one();
    for i in 1..d {
        fact *= i;
        r *= (BigUint::one() << (i * (i - 1) / 2)) * &fact;
    }
    r
}

/// Expected values for a blueprint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    /// Exact counts on (01|23, 02|13, 03|12).
    Triple([BigUint; 3]),
    /// Permutation types are `permutation` mod `modulus`, all other types 0.
    Residues { modulus: u64, permutation: u64 },
}

pub fn formula_oracle(bp: &Blueprint) -> Result<Expected> {
    match *bp {
        Blueprint::Xyy { k } if k >= 1 => Ok(Expected::Triple(xyy_formula(k))),
        Blueprint::Oxy { p, k } if k >= 1 && p >= 1 => Ok(Expected::Triple(oxy_formula(p, k))),
        Blueprint::Crossover { p } if p >= 1 => Ok(Expected::Triple(oxy_formula(p, p))),
        Blueprint::Q { d, p } if d >= 1 && p >= 2 => {
            let r = r_d(d) % p;
            Ok(Expected::Residues { modulus: p as u64, permutation: r.iter_u64_digits().next().unwrap_or(0) })
        }
        ref other => Err(Error::InvalidParameter(format!("no closed form for {other:?}"))),
    }
}
