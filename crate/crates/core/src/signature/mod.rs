//! Signatures of four-terminal gadgets: the normalized counts on
//! (01|23, 02|13, 03|12).

pub mod enumerate;
pub mod precise;
pub mod region;
pub mod synth;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::counting::{count_vr, VRTable};
use crate::error::{Error, Result};
use crate::graph::{wire_gadgets, Endpoint, Kind, MixedMap, Mode, RouteType};

pub use enumerate::{closure_sample, enumerate_gadgets, region_scan, ClosureReport, EnumOptions, ScanOptions, ScanReport};
pub use region::{region_classify, region_constants, Classification, RegionClass, RegionConstants, DEFAULT_PRECISION};
pub use synth::{synthesize_graph_gadget, synthesize_map_gadget, Step, SynthesisTrace, DEFAULT_DELTA_DIVISOR};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub alpha: BigRational,
    pub beta: BigRational,
    pub gamma: BigRational,
}

pub fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

impl Signature {
    pub fn new(alpha: BigRational, beta: BigRational, gamma: BigRational) -> Result<Self> {
        let s = Signature { alpha, beta, gamma };
        if s.as_array().iter().any(|x| x.is_negative()) || s.alpha.clone() + &s.beta + &s.gamma != BigRational::one() {
            return Err(Error::InvalidParameter(format!("{s} is not a signature")));
        }
        Ok(s)
    }

    pub fn from_counts(counts: &[BigUint; 3]) -> Result<Self> {
        let n: BigUint = counts.iter().sum();
        if n.is_zero() {
            return Err(Error::Degenerate("gadget has no valid route set".into()));
        }
        let q = |c: &BigUint| BigRational::new(BigInt::from(c.clone()), BigInt::from(n.clone()));
        Ok(Signature { alpha: q(&counts[0]), beta: q(&counts[1]), gamma: q(&counts[2]) })
    }

    pub fn from_array([alpha, beta, gamma]: [BigRational; 3]) -> Result<Self> {
        Self::new(alpha, beta, gamma)
    }

    pub fn smg() -> Self {
        Signature { alpha: ratio(1, 2), beta: ratio(1, 2), gamma: BigRational::zero() }
    }

    pub fn sgg() -> Self {
        Signature { alpha: ratio(1, 3), beta: ratio(1, 3), gamma: ratio(1, 3) }
    }

    pub fn as_array(&self) -> [BigRational; 3] {
        [self.alpha.clone(), self.beta.clone(), self.gamma.clone()]
    }

    pub fn to_f64(&self) -> [f64; 3] {
        self.as_array().map(|x| x.to_f64().unwrap_or(f64::NAN))
    }

    /// Entry `i` moves to position `perm[i]`.
    pub fn permuted(&self, perm: [usize; 3]) -> Signature {
        let old = self.as_array();
        let mut new = old.clone();
        for i in 0..3 {
            new[perm[i]] = old[i].clone();
        }
        Signature { alpha: new[0].clone(), beta: new[1].clone(), gamma: new[2].clone() }
    }

    pub fn l1_distance(&self, other: &Signature) -> BigRational {
        self.as_array().iter().zip(other.as_array()).map(|(a, b)| (a - b).abs()).sum()
    }

    /// Entries sorted descending, with the positions they came from.
    pub fn sorted_desc(&self) -> ([BigRational; 3], [usize; 3]) {
        let a = self.as_array();
        let mut idx = [0, 1, 2];
        idx.sort_by(|&i, &j| a[j].cmp(&a[i]).then(i.cmp(&j)));
        (idx.map(|i| a[i].clone()), idx)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.alpha, self.beta, self.gamma)
    }
}

/// Exact fractions plus float renditions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignatureReport {
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    pub float: [f64; 3],
}

impl From<&Signature> for SignatureReport {
    fn from(s: &Signature) -> Self {
        SignatureReport {
            alpha: s.alpha.to_string(),
            beta: s.beta.to_string(),
            gamma: s.gamma.to_string(),
            float: s.to_f64(),
        }
    }
}

impl TryFrom<&SignatureReport> for Signature {
    type Error = Error;

    fn try_from(r: &SignatureReport) -> Result<Self> {
        let p = |s: &str| s.parse::<BigRational>().map_err(|e| Error::Parse(format!("{s}: {e}")));
        Signature::new(p(&r.alpha)?, p(&r.beta)?, p(&r.gamma)?)
    }
}

/// Mode whose transition systems define a gadget's signature.
pub fn mode_for(kind: Kind) -> Mode {
    match kind {
        Kind::Map => Mode::ATrail,
        Kind::Graph => Mode::General,
    }
}

pub fn signature_of_table(t: &VRTable) -> Result<Signature> {
    Signature::from_counts(&t.triple()?)
}

pub fn signature_of(m: &MixedMap) -> Result<Signature> {
    if m.num_externals() != 4 {
        return Err(Error::ExternalCount { expected: "4".into(), found: m.num_externals() });
    }
    signature_of_table(&count_vr(m, mode_for(m.kind()))?)
}

/// Where each of the three types goes under the label renaming `l -> perm[l]`.
pub fn type_permutation(perm: &[u32; 4]) -> [usize; 3] {
    let four = RouteType::four();
    let mut out = [0; 3];
    for (i, t) in four.iter().enumerate() {
        let r = t.relabeled(perm);
        out[i] = four.iter().position(|u| *u == r).expect("matchings on four labels");
    }
    out
}

/// Some label renaming inducing the given type permutation.
pub fn relabeling_for(types: [usize; 3]) -> [u32; 4] {
    let mut p = [0u32, 1, 2, 3];
    loop {
        if type_permutation(&p) == types {
            return p;
        }
        // Next permutation of four labels; all six type permutations occur.
        let i = (0..3).rev().find(|&i| p[i] < p[i + 1]).expect("type permutation is reachable");
        let j = (i + 1..4).rev().find(|&j| p[j] > p[i]).expect("exists");
        p.swap(i, j);
        p[i + 1..].reverse();
    }
}

/// Relabels a gadget so that its signature is permuted by `types`.
pub fn relabel_gadget(m: &MixedMap, types: [usize; 3]) -> Result<MixedMap> {
    m.relabel_externals(&relabeling_for(types))
}

/// Joins `g1`'s 3 and 2 to `g2`'s 0 and 1; the result exports `g1`'s 0, 1 and
/// `g2`'s 2, 3.
pub fn glue_build(g1: &MixedMap, g2: &MixedMap) -> Result<MixedMap> {
    for g in [g1, g2] {
        if g.num_externals() != 4 {
            return Err(Error::ExternalCount { expected: "4".into(), found: g.num_externals() });
        }
    }
    let kind = if g1.kind() == Kind::Map && g2.kind() == Kind::Map { Kind::Map } else { Kind::Graph };
    let p = Endpoint::port;
    let e = Endpoint::External;
    let wires = [
        (p(0, 3), p(1, 0)),
        (p(0, 2), p(1, 1)),
        (p(0, 0), e(0)),
        (p(0, 1), e(1)),
        (p(1, 2), e(2)),
        (p(1, 3), e(3)),
    ];
    wire_gadgets(kind, &[g1, g2], &wires, 4)
}

pub fn glue_signature(s1: &Signature, s2: &Signature) -> Result<Signature> {
    let den = BigRational::one() - &s1.alpha * &s2.alpha;
    if den.is_zero() {
        return Err(Error::Degenerate("gluing two (1, 0, 0) signatures".into()));
    }
    let (a1, b1, c1) = (&s1.alpha, &s1.beta, &s1.gamma);
    let (a2, b2, c2) = (&s2.alpha, &s2.beta, &s2.gamma);
    let alpha = (a1 * b2 + a1 * c2 + b1 * a2 + c1 * a2) / &den;
    let beta = (b1 * c2 + c1 * b2) / &den;
    let gamma = (b1 * b2 + c1 * c2) / &den;
    Ok(Signature { alpha, beta, gamma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{build_xyy, sgg, smg};

    #[test]
    fn basic_signatures() {
        assert_eq!(signature_of(&smg()).unwrap(), Signature::smg());
        assert_eq!(signature_of(&sgg()).unwrap(), Signature::sgg());
        let x = signature_of(&build_xyy(2).unwrap()).unwrap();
        assert_eq!(x, Signature::new(ratio(1, 2), ratio(1, 4), ratio(1, 4)).unwrap());
    }

    #[test]
    fn glue_examples() {
        let gg = glue_signature(&Signature::sgg(), &Signature::sgg()).unwrap();
        assert_eq!(gg, Signature::new(ratio(1, 2), ratio(1, 4), ratio(1, 4)).unwrap());
        assert_eq!(signature_of(&glue_build(&sgg(), &sgg()).unwrap()).unwrap(), gg);
        let mm = glue_signature(&Signature::smg(), &Signature::smg()).unwrap();
        assert_eq!(mm, Signature::new(ratio(2, 3), BigRational::zero(), ratio(1, 3)).unwrap());
        assert_eq!(signature_of(&glue_build(&smg(), &smg()).unwrap()).unwrap(), mm);
        let one = Signature::new(BigRational::one(), BigRational::zero(), BigRational::zero()).unwrap();
        let b = Signature::new(BigRational::zero(), BigRational::one(), BigRational::zero()).unwrap();
        assert_eq!(glue_signature(&one, &b).unwrap().alpha, BigRational::one());
        assert!(glue_signature(&one, &one).is_err());
    }

    #[test]
    fn relabelings_cover_all_type_permutations() {
        let s = Signature::new(ratio(1, 2), ratio(1, 3), ratio(1, 6)).unwrap();
        let g = build_xyy(2).unwrap();
        let base = signature_of(&g).unwrap();
        for types in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let p = relabeling_for(types);
            assert_eq!(type_permutation(&p), types);
            assert_eq!(signature_of(&relabel_gadget(&g, types).unwrap()).unwrap(), base.permuted(types));
            assert_eq!(s.permuted(types).sorted_desc().0, s.sorted_desc().0);
        }
    }

    #[test]
    fn report_round_trip() {
        let s = Signature::new(ratio(1, 2), ratio(1, 4), ratio(1, 4)).unwrap();
        let r = SignatureReport::from(&s);
        assert_eq!(r.alpha, "1/2");
        assert_eq!(Signature::try_from(&r).unwrap(), s);
    }
}
