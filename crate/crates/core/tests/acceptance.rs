//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Set TRAILCOUNT_LONG=1 for the long-run profile.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trailcount::chain::{gadget_chain_check, DEFAULT_BUDGET, DEFAULT_LAYER_CONSTANT};
use trailcount::counting::{compose_vr, count_closed, count_closed_network, count_vr};
use trailcount::gadgets::{build_0xy, build_q, build_xyy, sgg, smg};
use trailcount::graph::{MixedMap, Mode};
use trailcount::kotzig::count_atrails_plane;
use trailcount::reductions::{
    count_et_via_crt, estimate_et, planarize, to_atrail_instance, ExactNetworkOracle, Threshold,
};
use trailcount::signature::synth::{build_recipe, plan_graph_gadget, plan_map_gadget, replay_signature, GraphSynthOptions};
use trailcount::signature::{
    closure_sample, enumerate_gadgets, glue_build, glue_signature, region_classify, region_constants, region_scan,
    relabel_gadget, signature_of, EnumOptions, RegionClass, ScanOptions, Signature, DEFAULT_PRECISION,
};

/// L1 slack allowed on top of `eps` when comparing replayed signatures: none.
const SYNTH_SLACK: f64 = 0.0;
/// `|log(estimate / T)| <= eps` is checked with this much float slack.
const LOG_SLACK: f64 = 1e-12;
/// Stated bounds on the region constants.
const U_MAX: f64 = 0.39;
const W_RANGE: (f64, f64) = (0.5, 0.64);
/// Region tolerance `2^-64`.
const REGION_TOL: f64 = 5.421010862427522e-20;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn long_run() -> bool {
    std::env::var("TRAILCOUNT_LONG").is_ok_and(|v| !v.is_empty() && v != "0")
}

fn c1_ladder() -> Check {
    for k in 1..=6usize {
        let a = 1u64 << (k - 1);
        let want = [big(k as u64 * a), big(a), big(a)];
        let got = count_vr(&build_xyy(k).map_err(e)?, Mode::General).map_err(e)?.triple().map_err(e)?;
        ensure(got == want, || format!("k = {k}: {got:?} != {want:?}"))?;
    }
    Ok("k = 1..6 exact".into())
}

fn c2_oxy() -> Check {
    for (p, k) in [(3usize, 1usize), (3, 2), (3, 3), (5, 1)] {
        let a = BigInt::from(1u64 << (k - 1));
        let b = &a * k;
        let s = (&a + &b).pow(p as u32);
        let t = (&b - &a).pow(p as u32);
        let first = BigInt::from(p) * &a * (&a + &b).pow(p as u32 - 1);
        let want: Vec<BigInt> = vec![first, (&s - &t) / 2, (&s + &t) / 2];
        let got = count_vr(&build_0xy(p, k).map_err(e)?, Mode::General).map_err(e)?.triple().map_err(e)?;
        let got: Vec<BigInt> = got.into_iter().map(BigInt::from).collect();
        ensure(got == want, || format!("(p, k) = ({p}, {k}): {got:?} != {want:?}"))?;
        let pm = BigInt::from(p);
        let m = |x: &BigInt| ((x % &pm) + &pm) % &pm;
        let residues: Vec<BigInt> = got.iter().map(m).collect();
        ensure(residues == vec![BigInt::zero(), m(&a), m(&b)], || format!("({p}, {k}) residues {residues:?}"))?;
    }
    Ok("4 parameter pairs exact, congruences (0, A, B)".into())
}

fn c3_q() -> Check {
    let mut checked = 0;
    for (d, p) in [(2usize, 5u64), (3, 5), (3, 7), (4, 5)] {
        let mut r = BigUint::one();
        let mut fact = BigUint::one();
        for i in 1..d {
            fact *= i;
            r *= (BigUint::one() << (i * (i - 1) / 2)) * &fact;
        }
        let r = (r % p).to_u64().expect("small");
        let table = compose_vr(&build_q(d, p as usize).map_err(e)?).map_err(e)?;
        let residues = table.residues(p);
        let perms = residues.keys().filter(|t| t.as_permutation().is_some()).count();
        let fact_d: usize = (1..=d).product();
        ensure(perms == fact_d, || format!("d = {d}: {perms} permutation types"))?;
        for (ty, got) in residues {
            let want = if ty.as_permutation().is_some() { r } else { 0 };
            ensure(got == want, || format!("(d, p) = ({d}, {p}), {ty}: {got} != {want}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} route types checked"))
}

fn c4_crt() -> Check {
    let mut notes = Vec::new();
    for (name, g) in [("6-dipole", common::dipole(6)), ("degree-6 graph", common::degree_six_graph())] {
        let brute = count_closed(&g, Mode::General).map_err(e)?;
        let r = count_et_via_crt(&g, Threshold::AboveFour).map_err(e)?;
        ensure(r.tours == brute.to_string(), || format!("{name}: CRT {} != brute {brute}", r.tours))?;
        ensure(r.primes.iter().all(|&p| p as usize > g.max_degree()), || format!("{name}: primes {:?}", r.primes))?;
        notes.push(format!("{name} T = {brute} via {:?}", r.primes));
    }
    Ok(notes.join("; "))
}

fn c5_planar() -> Check {
    let k5 = common::k5();
    let t = count_closed(&k5, Mode::General).map_err(e)?;
    // 264 directed circuits, each counted once per direction.
    ensure(t == big(132), || format!("K5 T = {t}"))?;
    for p in [3u64, 5] {
        let pl = planarize(&k5, p, 0).map_err(e)?;
        let tp = count_closed_network(&pl.network).map_err(e)?;
        ensure(&tp % p == &t % p, || format!("p = {p}: {tp} vs {t}"))?;
    }
    Ok(format!("K5 T = {t}, congruent mod 3 and 5"))
}

fn c6_atrails() -> Check {
    for (name, g) in [("4-dipole", common::dipole(4)), ("doubled C3", common::doubled_c3()), ("K5", common::k5())] {
        let et = count_closed(&g, Mode::General).map_err(e)?;
        let at = count_closed(&to_atrail_instance(&g).map_err(e)?, Mode::ATrail).map_err(e)?;
        let want = et << g.num_vertices();
        ensure(at == want, || format!("{name}: {at} != {want}"))?;
    }
    Ok("exact on 3 graphs".into())
}

fn c7_kotzig() -> Check {
    let corpus = common::plane_corpus();
    for (name, m, known) in &corpus {
        let brute = count_closed(m, Mode::ATrail).map_err(e)?;
        let trees = count_atrails_plane(m).map_err(e)?;
        ensure(brute == trees, || format!("{name}: trees {trees}, brute {brute}"))?;
        if let Some(k) = known {
            ensure(brute == big(*k), || format!("{name}: {brute} != {k}"))?;
        }
    }
    Ok(format!("{} plane maps", corpus.len()))
}

fn c8_chain() -> Check {
    for d in [2usize, 4] {
        for t in 0..=3 {
            let c = gadget_chain_check(d, t, DEFAULT_BUDGET).map_err(e)?;
            ensure(c.pass, || format!("d = {d}, T = {t}: {:?}", c.mismatches))?;
        }
    }
    let mut worst: f64 = 0.0;
    for g in [common::dipole(4), common::doubled_c3()] {
        let t = count_closed(&g, Mode::General).map_err(e)?.to_f64().expect("small");
        for eps in [0.25, 0.5, 1.0] {
            let est = estimate_et(&g, eps, DEFAULT_LAYER_CONSTANT, &ExactNetworkOracle).map_err(e)?;
            let err = (est.value_float / t).ln().abs();
            worst = worst.max(err / eps);
            ensure(err <= eps + LOG_SLACK, || format!("eps = {eps}: |log| = {err}"))?;
        }
    }
    Ok(format!("8 gadget/chain points; worst |log| / eps = {worst:.3}"))
}

fn random_gadget(pool: &[MixedMap], rng: &mut ChaCha8Rng) -> Result<MixedMap, String> {
    let g = pool.choose(rng).expect("nonempty").clone();
    let mut types = [0usize, 1, 2];
    types.shuffle(rng);
    relabel_gadget(&g, types).map_err(e)
}

fn c9_glue() -> Check {
    ensure(signature_of(&smg()).map_err(e)? == Signature::smg(), || "SMG".into())?;
    ensure(signature_of(&sgg()).map_err(e)? == Signature::sgg(), || "SGG".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let pools: Vec<Vec<MixedMap>> = (1..=3)
        .map(|n| enumerate_gadgets(n, EnumOptions { allow_loops: false, dedup: true }))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    let by_size = |n: usize| -> Vec<MixedMap> {
        pools[n - 1].iter().filter(|g| g.num_vertices() == n).cloned().collect()
    };
    let mut maps = 0;
    for i in 0..200 {
        let n1 = rng.gen_range(1..=3);
        let n2 = rng.gen_range(1..=(6 - n1).min(3));
        let mut g1 = random_gadget(&by_size(n1), &mut rng)?;
        let mut g2 = random_gadget(&by_size(n2), &mut rng)?;
        if i % 2 == 1 {
            // Same rotations read as maps: signatures count A-trails.
            g1 = g1.with_kind(trailcount::graph::Kind::Map);
            g2 = g2.with_kind(trailcount::graph::Kind::Map);
            maps += 1;
        }
        let (s1, s2) = match (signature_of(&g1), signature_of(&g2)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => continue,
        };
        let built = signature_of(&glue_build(&g1, &g2).map_err(e)?).map_err(e)?;
        let formula = glue_signature(&s1, &s2).map_err(e)?;
        ensure(built == formula, || format!("pair {i}: built {built}, formula {formula}"))?;
    }
    Ok(format!("200 pairs ({maps} as maps), SMG and SGG exact"))
}

fn c10_region() -> Check {
    let k = region_constants(DEFAULT_PRECISION);
    ensure(k.u <= U_MAX, || format!("u = {}", k.u))?;
    ensure(W_RANGE.0 <= k.w && k.w <= W_RANGE.1, || format!("w = {}", k.w))?;
    let top = if long_run() { 5 } else { 4 };
    let mut scanned = 0;
    for n in 1..=top {
        let r = region_scan(&ScanOptions { n, ..ScanOptions::default() }).map_err(e)?;
        ensure(r.outside == 0, || format!("n = {n}: {} outside, e.g. {:?}", r.outside, r.witnesses.first()))?;
        scanned = r.gadgets;
    }
    let c = closure_sample(10_000, 1, DEFAULT_PRECISION, REGION_TOL).map_err(e)?;
    ensure(c.outside == 0, || format!("closure: {} outside, e.g. {:?}", c.outside, c.counterexamples.first()))?;
    Ok(format!(
        "u = {:.6}, w = {:.6}; {scanned} gadgets up to n = {top} inside; 10^4 glues inside (min margin {:.2e})",
        k.u, k.w, c.min_margin
    ))
}

fn sample_interior(rng: &mut ChaCha8Rng, count: usize) -> Vec<Signature> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    while out.len() < count {
        let a = rng.gen_range(0..=1000i64);
        let b = rng.gen_range(0..=1000 - a);
        let q = |x: i64| BigRational::new(x.into(), 1000.into());
        let s = Signature::new(q(a), q(b), q(1000 - a - b)).expect("on the simplex");
        if region_classify(&s, REGION_TOL, DEFAULT_PRECISION).class == RegionClass::Inside && seen.insert((a, b)) {
            out.push(s);
        }
    }
    out
}

fn c11_synthesis() -> Check {
    let mut exact = 0;
    for den in 1..=6i64 {
        for a in 0..den {
            for b in 0..den - a {
                let c = den - a - b;
                if c >= den {
                    continue;
                }
                let q = |x: i64| BigRational::new(x.into(), den.into());
                let target = Signature::new(q(a), q(b), q(c)).expect("sums to one");
                let t = plan_map_gadget(&target).map_err(e)?;
                let m = build_recipe(&t.recipe).map_err(e)?;
                let got = signature_of(&m).map_err(e)?;
                ensure(got == target, || format!("map target {target}: brute force {got}"))?;
                exact += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let targets = sample_interior(&mut rng, 10);
    let opts = GraphSynthOptions::default();
    let mut worst: f64 = 0.0;
    let mut largest = 0;
    for eps in [0.05, 0.01] {
        for s in &targets {
            let t = plan_graph_gadget(s, eps, &opts).map_err(e)?;
            let d = replay_signature(&t.recipe).map_err(e)?.l1_distance(s).to_f64().expect("finite");
            ensure(d <= eps + SYNTH_SLACK, || format!("target {s}, eps {eps}: distance {d}"))?;
            worst = worst.max(d / eps);
            largest = largest.max(t.vertices);
        }
    }
    Ok(format!(
        "{exact} map targets exact; 20 graph syntheses, worst distance / eps = {worst:.3}, largest gadget {largest} vertices"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Check, Duration); 11] = [
        ("1 ladder gadget counts", c1_ladder, Duration::from_secs(10)),
        ("2 (0,X,Y) gadget counts", c2_oxy, Duration::from_secs(120)),
        ("3 Q gadget residues", c3_q, Duration::from_secs(300)),
        ("4 residue pipeline", c4_crt, Duration::from_secs(600)),
        ("5 planarization congruence", c5_planar, Duration::from_secs(300)),
        ("6 A-trail instance factor", c6_atrails, Duration::from_secs(120)),
        ("7 plane A-trails as spanning trees", c7_kotzig, Duration::from_secs(60)),
        ("8 shuffle gadget and estimator", c8_chain, Duration::from_secs(600)),
        ("9 glue homomorphism", c9_glue, Duration::from_secs(300)),
        ("10 region constants and experiments", c10_region, Duration::from_secs(1800)),
        ("11 gadget synthesis", c11_synthesis, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(note) if took <= limit => Ok(note),
            Ok(note) => Err(format!("{note}; took {took:.1?}, limit {limit:?}")),
            Err(msg) => Err(msg),
        };
        match outcome {
            Ok(note) => println!("PASS  criterion {name} ({took:.2?}): {note}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  criterion {name} ({took:.2?}): {msg}");
            }
        }
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
