//! Membership in the region bounded by `f(x) = 1/2 (1-x)(1 - exp(2x/(x-1)))`:
//! a signature sorted as `a >= b >= c` is inside when `c >= f(b)`.

use serde::{Deserialize, Serialize};

use super::precise::{to_f64, Ctx};
use super::Signature;

pub const DEFAULT_PRECISION: usize = 128;

/// `2^-64`.
pub const DEFAULT_TOLERANCE: f64 = 5.421010862427522e-20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionClass {
    Inside,
    Boundary,
    Outside,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub class: RegionClass,
    /// `c - f(b)` for the sorted entries.
    pub margin: f64,
}

pub fn classify_in(ctx: &mut Ctx, s: &Signature, tol: f64) -> Classification {
    let (sorted, _) = s.sorted_desc();
    let b = ctx.rational(&sorted[1]);
    let c = ctx.rational(&sorted[2]);
    let fb = ctx.boundary(&b);
    let diff = ctx.sub(&c, &fb);
    let t = ctx.f64(tol);
    let class = if diff.abs().cmp(&t).is_some_and(|o| o <= 0) {
        RegionClass::Boundary
    } else if diff.is_positive() {
        RegionClass::Inside
    } else {
        RegionClass::Outside
    };
    Classification { class, margin: to_f64(&diff) }
}

pub fn region_classify(s: &Signature, tol: f64, prec: usize) -> Classification {
    classify_in(&mut Ctx::new(prec), s, tol)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionConstants {
    pub precision: usize,
    pub u: f64,
    pub w: f64,
    /// Decimal rendering at full precision.
    pub u_digits: String,
    pub w_digits: String,
}

pub fn region_constants(prec: usize) -> RegionConstants {
    let mut ctx = Ctx::new(prec);
    let u = ctx.u();
    let w = ctx.w();
    RegionConstants {
        precision: prec,
        u: to_f64(&u),
        w: to_f64(&w),
        u_digits: ctx.decimal(&u),
        w_digits: ctx.decimal(&w),
    }
}
