use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Perfect matching on external labels, stored canonically: each pair sorted,
/// pairs sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RouteType {
    pairs: Vec<(u32, u32)>,
}

impl RouteType {
    pub fn new(pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut pairs: Vec<(u32, u32)> = pairs.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        let mut seen = vec![false; 2 * pairs.len()];
        for &(a, b) in &pairs {
            for x in [a, b] {
                match seen.get_mut(x as usize) {
                    Some(s @ false) if a != b => *s = true,
                    _ => {
                        return Err(Error::InvalidParameter(format!(
                            "route type is not a perfect matching on 0..{}",
                            seen.len()
                        )))
                    }
                }
            }
        }
        Ok(RouteType { pairs })
    }

    /// From a partner array: `partner[a] = b` and `partner[b] = a`.
    pub fn from_partners(partner: &[u32]) -> Self {
        let pairs = partner
            .iter()
            .enumerate()
            .filter(|&(a, &b)| (a as u32) < b)
            .map(|(a, &b)| (a as u32, b))
            .collect();
        RouteType { pairs }
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn num_labels(&self) -> usize {
        2 * self.pairs.len()
    }

    pub fn partners(&self) -> Vec<u32> {
        let mut p = vec![0; self.num_labels()];
        for &(a, b) in &self.pairs {
            p[a as usize] = b;
            p[b as usize] = a;
        }
        p
    }

    /// All perfect matchings on `0..num_labels`, in canonical order.
    pub fn all(num_labels: usize) -> Vec<RouteType> {
        fn go(free: &[u32], acc: &mut Vec<(u32, u32)>, out: &mut Vec<RouteType>) {
            let Some((&a, rest)) = free.split_first() else {
                let mut pairs = acc.clone();
                pairs.sort_unstable();
                out.push(RouteType { pairs });
                return;
            };
            for i in 0..rest.len() {
                let mut next = rest.to_vec();
                let b = next.remove(i);
                acc.push((a, b));
                go(&next, acc, out);
                acc.pop();
            }
        }
        let labels: Vec<u32> = (0..num_labels as u32).collect();
        let mut out = Vec::new();
        if num_labels.is_multiple_of(2) {
            go(&labels, &mut Vec::new(), &mut out);
        }
        out.sort();
        out
    }

    /// The three types on four labels in signature order: 01|23, 02|13, 03|12.
    pub fn four() -> [RouteType; 3] {
        [
            RouteType { pairs: vec![(0, 1), (2, 3)] },
            RouteType { pairs: vec![(0, 2), (1, 3)] },
            RouteType { pairs: vec![(0, 3), (1, 2)] },
        ]
    }

    /// With inputs `0..d` and outputs `d..2d`, the permutation `sigma` with
    /// input `i` routed to output `d + sigma[i]`, if every pair crosses.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        let d = self.pairs.len() as u32;
        let mut sigma = vec![0; d as usize];
        for &(a, b) in &self.pairs {
            if a >= d || b < d {
                return None;
            }
            sigma[a as usize] = (b - d) as usize;
        }
        Some(sigma)
    }

    /// Inverse of [`RouteType::as_permutation`].
    pub fn from_permutation(sigma: &[usize]) -> Self {
        let d = sigma.len() as u32;
        RouteType {
            pairs: sigma.iter().enumerate().map(|(i, &s)| (i as u32, d + s as u32)).collect(),
        }
    }

    /// The type seen after renaming label `l` to `perm[l]`.
    pub fn relabeled(&self, perm: &[u32]) -> RouteType {
        RouteType::new(self.pairs.iter().map(|&(a, b)| (perm[a as usize], perm[b as usize])))
            .expect("a relabeled matching is a matching")
    }
}

impl fmt::Display for RouteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in &self.pairs {
            write!(f, "{{{a},{b}}}")?;
        }
        Ok(())
    }
}

impl FromStr for RouteType {
    type Err = Error;

    /// Parses `{0,1}{2,3}`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("route type {s:?}"));
        let body = s.trim();
        if body.is_empty() {
            return Ok(RouteType { pairs: Vec::new() });
        }
        let body = body.strip_prefix('{').and_then(|b| b.strip_suffix('}')).ok_or_else(bad)?;
        let mut pairs = Vec::new();
        for chunk in body.split("}{") {
            let (a, b) = chunk.split_once(',').ok_or_else(bad)?;
            let a = a.trim().parse().map_err(|_| bad())?;
            let b = b.trim().parse().map_err(|_| bad())?;
            pairs.push((a, b));
        }
        RouteType::new(pairs)
    }
}
