//! Arbitrary-precision helpers for the region boundary.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

const RM: RoundingMode = RoundingMode::ToEven;

/// Working precision plus the constant cache astro-float needs for `exp`.
pub struct Ctx {
    pub prec: usize,
    cc: Consts,
}

impl Ctx {
    pub fn new(prec: usize) -> Self {
        Ctx { prec: prec.max(64), cc: Consts::new().expect("constant cache") }
    }

    pub fn int(&self, n: &BigUint) -> BigFloat {
        if n.is_zero() {
            return BigFloat::from_word(0, self.prec);
        }
        let words = n.to_u64_digits();
        let e = 64 * words.len() as i32;
        // Mantissa words are read as 0.m, so shifting by the word length
        // gives the integer back exactly.
        BigFloat::from_words(&words, Sign::Pos, e)
    }

    pub fn rational(&mut self, q: &BigRational) -> BigFloat {
        let n = self.int(&q.numer().magnitude().clone());
        let d = self.int(&q.denom().magnitude().clone());
        let v = n.div(&d, self.prec, RM);
        if q.is_negative() {
            v.neg()
        } else {
            v
        }
    }

    pub fn f64(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.prec)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.prec, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.prec, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.prec, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.prec, RM)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.prec, RM, &mut self.cc)
    }

    pub fn cosh(&mut self, a: &BigFloat) -> BigFloat {
        a.cosh(self.prec, RM, &mut self.cc)
    }

    pub fn sinh(&mut self, a: &BigFloat) -> BigFloat {
        a.sinh(self.prec, RM, &mut self.cc)
    }

    pub fn decimal(&mut self, x: &BigFloat) -> String {
        x.format(astro_float::Radix::Dec, RM, &mut self.cc).unwrap_or_else(|_| "NaN".into())
    }

    pub fn one(&self) -> BigFloat {
        BigFloat::from_word(1, self.prec)
    }

    pub fn half(&self) -> BigFloat {
        self.div(&self.one(), &BigFloat::from_word(2, self.prec))
    }

    /// `exp(2x / (x - 1))`, zero at `x = 1`.
    fn decay(&mut self, x: &BigFloat) -> BigFloat {
        let one = self.one();
        let den = self.sub(x, &one);
        if den.is_zero() {
            return BigFloat::from_word(0, self.prec);
        }
        let two_x = self.add(x, x);
        let r = self.div(&two_x, &den);
        self.exp(&r)
    }

    /// `f_c(x) = 1/2 (1 - x)(1 + (2c - 1) exp(2x/(x-1)))`; `c = 0` is the
    /// region boundary.
    pub fn f_c(&mut self, c: &BigFloat, x: &BigFloat) -> BigFloat {
        let e = self.decay(x);
        let one = self.one();
        let k = self.sub(&self.add(c, c), &one);
        let inner = self.add(&one, &self.mul(&k, &e));
        let h = self.half();
        self.mul(&self.mul(&h, &self.sub(&one, x)), &inner)
    }

    pub fn boundary(&mut self, x: &BigFloat) -> BigFloat {
        let zero = BigFloat::from_word(0, self.prec);
        self.f_c(&zero, x)
    }

    /// Root of `1/2 (1-x)(1 + exp(2x/(x-1))) = x` on `[0, 1]`, by bisection.
    /// The left side is `f_1(x)` and decreasing, so the root is unique.
    pub fn u(&mut self) -> BigFloat {
        let one = self.one();
        let mut lo = BigFloat::from_word(0, self.prec);
        let mut hi = self.half();
        let h = self.half();
        for _ in 0..self.prec + 8 {
            let mid = self.mul(&self.add(&lo, &hi), &h);
            let f = self.f_c(&one, &mid);
            let g = self.sub(&f, &mid);
            if g.is_positive() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// `w = u / (1 - u)`.
    pub fn w(&mut self) -> BigFloat {
        let u = self.u();
        let one = self.one();
        self.div(&u, &self.sub(&one, &u))
    }

    /// `(cosh x, x e^x, sinh x) / ((x + 1) e^x)`, sorted descending when
    /// `x <= w`.
    pub fn boundary_point(&mut self, x: &BigFloat) -> [BigFloat; 3] {
        let ex = self.exp(x);
        let one = self.one();
        let den = self.mul(&self.add(x, &one), &ex);
        let c = self.cosh(x);
        let s = self.sinh(x);
        let m = self.mul(x, &ex);
        [self.div(&c, &den), self.div(&m, &den), self.div(&s, &den)]
    }
}

/// Exact value of a finite float.
pub fn to_rational(x: &BigFloat) -> BigRational {
    let Some((words, _, sign, e, _)) = x.as_raw_parts() else {
        return BigRational::zero();
    };
    if x.is_zero() {
        return BigRational::zero();
    }
    let mut m = BigUint::zero();
    for (i, &w) in words.iter().enumerate() {
        m += BigUint::from(w) << (64 * i);
    }
    let shift = e as i64 - 64 * words.len() as i64;
    let mut q = if shift >= 0 {
        BigRational::from_integer(BigInt::from(m << shift as usize))
    } else {
        BigRational::new(BigInt::from(m), BigInt::one() << (-shift) as usize)
    };
    if sign == Sign::Neg {
        q = -q;
    }
    q
}

pub fn to_f64(x: &BigFloat) -> f64 {
    to_rational(x).to_f64().unwrap_or(f64::NAN)
}
