use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Primes up to and including `limit`.
pub fn sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn is_odd_prime(n: u64) -> bool {
    n > 2 && is_prime(n)
}

/// Smallest primes above `lower`, taken in order until their product exceeds
/// `product_bound`. Fails if more than `count` would be needed.
pub fn select_primes(count: usize, lower: u64, product_bound: &BigUint) -> Result<Vec<u64>> {
    if count == 0 {
        return Err(Error::InvalidParameter("at least one prime must be allowed".into()));
    }
    let mut limit = (lower + 2).max(64) * 2;
    loop {
        let mut product = BigUint::from(1u32);
        let mut chosen = Vec::new();
        for p in sieve(limit).into_iter().filter(|&p| p > lower) {
            product *= p;
            chosen.push(p);
            if &product > product_bound {
                return Ok(chosen);
            }
            if chosen.len() == count {
                return Err(Error::InvalidParameter(format!(
                    "{count} primes above {lower} do not exceed {product_bound}"
                )));
            }
        }
        limit *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn select(lower: u64, bound: u64) -> Vec<u64> {
        select_primes(64, lower, &BigUint::from(bound)).unwrap()
    }

    #[test]
    fn greedy_prefixes() {
        assert_eq!(select(4, 10), vec![5, 7]);
        assert_eq!(select(1, 1), vec![2]);
        assert_eq!(select(6, 243), vec![7, 11, 13]);
        assert_eq!(select(6, 225), vec![7, 11, 13]);
        assert_eq!(select(6, 1215), vec![7, 11, 13, 17]);
    }

    #[test]
    fn too_few_primes_allowed() {
        assert!(select_primes(2, 6, &BigUint::from(1000u32)).is_err());
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        let s = sieve(500);
        let t: Vec<u64> = (0..=500).filter(|&n| is_prime(n)).collect();
        assert_eq!(s, t);
        assert!(!is_odd_prime(2));
        assert!(is_odd_prime(3));
    }
}
