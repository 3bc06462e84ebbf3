use std::collections::BTreeSet;

use num_rational::BigRational;
use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;

use trailcount::graph::{Kind, MixedMap};
use trailcount::signature::precise::{to_rational, Ctx};
use trailcount::signature::synth::{build_recipe, plan_map_gadget};
use trailcount::signature::{
    enumerate_gadgets, glue_build, glue_signature, region_classify, region_constants, signature_of, type_permutation,
    EnumOptions, RegionClass, Signature, DEFAULT_PRECISION,
};

const TOL: f64 = 5.421010862427522e-20;

fn pool() -> Vec<MixedMap> {
    enumerate_gadgets(3, EnumOptions { allow_loops: true, dedup: true })
        .unwrap()
        .into_iter()
        .filter(|g| signature_of(g).is_ok())
        .collect()
}

fn all_perms4() -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for a in 0..4u32 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if BTreeSet::from(p).len() == 4 {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn glue_is_a_homomorphism(i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), as_map in any::<bool>()) {
        let pool = pool();
        let (mut g1, mut g2) = (i.get(&pool).clone(), j.get(&pool).clone());
        if as_map {
            g1 = g1.with_kind(Kind::Map);
            g2 = g2.with_kind(Kind::Map);
        }
        let (Ok(s1), Ok(s2)) = (signature_of(&g1), signature_of(&g2)) else { return Ok(()); };
        let glued = glue_build(&g1, &g2).unwrap();
        match glue_signature(&s1, &s2) {
            Ok(s) => prop_assert_eq!(signature_of(&glued).unwrap(), s),
            // Both (1, 0, 0): the glued gadget has no route sets at all.
            Err(_) => prop_assert!(signature_of(&glued).is_err()),
        }
    }

    #[test]
    fn relabeling_permutes_the_signature(i in any::<prop::sample::Index>()) {
        let pool = pool();
        let g = i.get(&pool);
        let s = signature_of(g).unwrap();
        for p in all_perms4() {
            let r = signature_of(&g.relabel_externals(&p).unwrap()).unwrap();
            prop_assert_eq!(r, s.permuted(type_permutation(&p)));
        }
    }

    #[test]
    fn region_is_closed_under_glue(i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let pool = pool();
        let (s1, s2) = (signature_of(i.get(&pool)).unwrap(), signature_of(j.get(&pool)).unwrap());
        if let Ok(s) = glue_signature(&s1, &s2) {
            prop_assert_ne!(region_classify(&s, TOL, DEFAULT_PRECISION).class, RegionClass::Outside);
        }
    }
}

#[test]
fn map_synthesis_is_exact_up_to_denominator_six() {
    for den in 1..=6i64 {
        for a in 0..den {
            for b in 0..den - a {
                let c = den - a - b;
                if c == den {
                    continue;
                }
                let q = |x: i64| BigRational::new(x.into(), den.into());
                let target = Signature::new(q(a), q(b), q(c)).unwrap();
                let m = build_recipe(&plan_map_gadget(&target).unwrap().recipe).unwrap();
                assert_eq!(m.kind(), Kind::Map);
                assert_eq!(signature_of(&m).unwrap(), target);
            }
        }
    }
}

#[test]
fn boundary_parametrization_classifies_as_boundary() {
    let k = region_constants(DEFAULT_PRECISION);
    let mut ctx = Ctx::new(DEFAULT_PRECISION);
    let w = ctx.f64(k.w);
    let half_w = ctx.div(&w, &ctx.f64(2.0));
    for x in [ctx.f64(0.0), half_w, w] {
        let p = ctx.boundary_point(&x).map(|c| to_rational(&c));
        // Push the rounding residue into the largest entry to land on the simplex.
        let slack = BigRational::one() - p.iter().sum::<BigRational>();
        let s = Signature::new(&p[0] + &slack, p[1].clone(), p[2].clone()).unwrap();
        let c = region_classify(&s, TOL, DEFAULT_PRECISION);
        assert_eq!(c.class, RegionClass::Boundary, "x = {:?}: margin {}", s.to_f64(), c.margin);
        assert!(slack.abs() < BigRational::new(1.into(), BigInt::one() << 100u32));
    }
}
