use serde::{Deserialize, Serialize};

use super::MixedMap;
use crate::error::{Error, Result};

/// Which transitions are allowed at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Any pairing of the incident half-edges.
    General,
    /// Only pairings whose pairs are cyclically adjacent in the rotation.
    ATrail,
}

impl Mode {
    /// Pairings available at a vertex of the given degree.
    pub fn pairings(self, degree: usize) -> Vec<Pairing> {
        match self {
            Mode::General => slot_pairings(degree),
            Mode::ATrail => adjacent_pairings(degree),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::General => "et",
            Mode::ATrail => "atrail",
        }
    }
}

/// Perfect matching of the rotation slots of one vertex: `partner[s]` is the
/// slot paired with `s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pairing {
    partner: Vec<u8>,
}

impl Pairing {
    /// Builds a pairing from unordered slot pairs.
    pub fn from_pairs(degree: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut partner = vec![u8::MAX; degree];
        for &(a, b) in pairs {
            if a == b || a >= degree || b >= degree || partner[a] != u8::MAX || partner[b] != u8::MAX {
                return Err(Error::InvalidParameter(format!(
                    "pair ({a},{b}) does not fit a vertex of degree {degree}"
                )));
            }
            partner[a] = b as u8;
            partner[b] = a as u8;
        }
        if partner.contains(&u8::MAX) {
            return Err(Error::InvalidParameter("pairing leaves a slot unmatched".into()));
        }
        Ok(Pairing { partner })
    }

    pub fn degree(&self) -> usize {
        self.partner.len()
    }

    pub fn partner(&self, slot: usize) -> usize {
        self.partner[slot] as usize
    }

    /// Pairs `(a, b)` with `a < b`, sorted.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.partner.len())
            .filter(|&s| s < self.partner(s))
            .map(|s| (s, self.partner(s)))
            .collect()
    }

    /// True when every pair is cyclically adjacent in the slot order.
    pub fn is_cyclically_adjacent(&self) -> bool {
        let d = self.partner.len();
        (0..d).all(|s| {
            let p = self.partner(s);
            d == 2 || p == (s + 1) % d || s == (p + 1) % d
        })
    }
}

/// `(D-1)!!`, the number of pairings at a vertex of degree `D`.
pub fn pairing_count(degree: usize) -> u64 {
    if degree % 2 == 1 {
        return 0;
    }
    (1..degree as u64).step_by(2).product()
}

/// All pairings of `degree` slots in a fixed order: slot 0 takes each later
/// slot in turn, the rest recurses.
pub fn slot_pairings(degree: usize) -> Vec<Pairing> {
    fn go(free: &mut Vec<usize>, partner: &mut Vec<u8>, out: &mut Vec<Pairing>) {
        if free.is_empty() {
            out.push(Pairing { partner: partner.clone() });
            return;
        }
        let a = free.remove(0);
        for i in 0..free.len() {
            let b = free.remove(i);
            partner[a] = b as u8;
            partner[b] = a as u8;
            go(free, partner, out);
            free.insert(i, b);
        }
        free.insert(0, a);
    }
    if degree % 2 == 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    go(&mut (0..degree).collect(), &mut vec![0; degree], &mut out);
    out
}

/// Pairings made only of cyclically adjacent slots: two for degree at least
/// four, one for degree two.
pub fn adjacent_pairings(degree: usize) -> Vec<Pairing> {
    match degree {
        0 => vec![Pairing { partner: Vec::new() }],
        2 => vec![Pairing { partner: vec![1, 0] }],
        d if d % 2 == 1 => Vec::new(),
        d => {
            let even: Vec<_> = (0..d / 2).map(|i| (2 * i, 2 * i + 1)).collect();
            let odd: Vec<_> = (0..d / 2).map(|i| (2 * i + 1, (2 * i + 2) % d)).collect();
            vec![
                Pairing::from_pairs(d, &even).expect("valid"),
                Pairing::from_pairs(d, &odd).expect("valid"),
            ]
        }
    }
}

/// One pairing per vertex, indexed like the map's vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TransitionSystem {
    pub pairings: Vec<Pairing>,
}

impl TransitionSystem {
    pub fn new(pairings: Vec<Pairing>) -> Self {
        TransitionSystem { pairings }
    }
}

/// Deterministic enumeration of the product of per-vertex pairings, with the
/// last vertex varying fastest.
#[derive(Clone, Debug)]
pub struct TransitionSystems {
    choices: Vec<Vec<Pairing>>,
    index: Vec<usize>,
    fixed: usize,
    done: bool,
}

impl TransitionSystems {
    pub fn new(m: &MixedMap, mode: Mode) -> Result<Self> {
        m.check_even()?;
        if mode == Mode::ATrail && m.kind() != super::Kind::Map {
            return Err(Error::NotAMap);
        }
        let choices: Vec<Vec<Pairing>> = m.degrees().into_iter().map(|d| mode.pairings(d)).collect();
        let done = choices.iter().any(Vec::is_empty);
        Ok(TransitionSystems {
            index: vec![0; choices.len()],
            choices,
            fixed: 0,
            done,
        })
    }

    /// Number of choices at each vertex.
    pub fn radices(&self) -> Vec<usize> {
        self.choices.iter().map(Vec::len).collect()
    }

    /// Total number of systems in the unrestricted product.
    pub fn total(&self) -> u128 {
        self.choices.iter().map(|c| c.len() as u128).product()
    }

    /// Restricts the stream to systems whose first vertices use the given
    /// choice indices. Disjoint prefixes give disjoint streams.
    pub fn with_prefix(mut self, prefix: &[usize]) -> Self {
        for (v, &c) in prefix.iter().enumerate() {
            if v >= self.choices.len() || c >= self.choices[v].len() {
                self.done = true;
                return self;
            }
            self.index[v] = c;
        }
        self.fixed = prefix.len();
        self
    }
}

impl Iterator for TransitionSystems {
    type Item = TransitionSystem;

    fn next(&mut self) -> Option<TransitionSystem> {
        if self.done {
            return None;
        }
        let ts = TransitionSystem::new(
            self.index
                .iter()
                .zip(&self.choices)
                .map(|(&i, c)| c[i].clone())
                .collect(),
        );
        let mut v = self.index.len();
        loop {
            if v == self.fixed {
                self.done = true;
                break;
            }
            v -= 1;
            self.index[v] += 1;
            if self.index[v] < self.choices[v].len() {
                break;
            }
            self.index[v] = 0;
        }
        Some(ts)
    }
}
