use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use super::Multigraph;

/// Determinant by fraction-free elimination; every intermediate is an exact
/// integer minor.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Spanning trees by the matrix-tree theorem. Loops are ignored; a
/// disconnected graph gives zero.
pub fn spanning_tree_count(g: &Multigraph) -> BigUint {
    if g.n == 0 {
        return BigUint::zero();
    }
    let mut lap = vec![vec![BigInt::zero(); g.n]; g.n];
    for &(u, v) in &g.edges {
        if u == v {
            continue;
        }
        lap[u][u] += 1;
        lap[v][v] += 1;
        lap[u][v] -= 1;
        lap[v][u] -= 1;
    }
    let minor: Vec<Vec<BigInt>> = lap.into_iter().take(g.n - 1).map(|mut r| {
        r.truncate(g.n - 1);
        r
    }).collect();
    let det = bareiss_determinant(minor);
    debug_assert!(!det.is_negative());
    det.to_biguint().unwrap_or_default()
}
