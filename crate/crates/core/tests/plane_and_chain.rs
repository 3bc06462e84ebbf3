mod common;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use trailcount::chain::{chain_distribution, is_distribution, tv_curve, PermIndex};
use trailcount::counting::{count_closed, count_closed_network, count_vr};
use trailcount::gadgets::build_shuffle_gadget;
use trailcount::graph::Mode;
use trailcount::kotzig::{checkerboard_demedialize, count_atrails_plane, spanning_tree_count, trace_faces, FaceClass};
use trailcount::reductions::{
    ap_instance, count_et_via_crt, estimate_et, planarize, to_atrail_instance, BruteForceOracle, ExactNetworkOracle, Threshold,
};

#[test]
fn faces_cover_every_side_once() {
    for (name, m, _) in common::plane_corpus() {
        let fs = trace_faces(&m).unwrap();
        let total: usize = fs.faces.iter().map(Vec::len).sum();
        assert_eq!(total, 2 * m.num_edges(), "{name}");
        assert_eq!(fs.genus, 0, "{name}");
    }
}

#[test]
fn both_colour_classes_give_the_same_tree_count() {
    for (name, m, _) in common::plane_corpus() {
        let b = checkerboard_demedialize(&m, FaceClass::Black).unwrap();
        let w = checkerboard_demedialize(&m, FaceClass::White).unwrap();
        assert_eq!(b.graph.edges.len(), m.num_vertices(), "{name}");
        assert_eq!(spanning_tree_count(&b.graph), spanning_tree_count(&w.graph), "{name}");
    }
}

#[test]
fn kotzig_matches_brute_force() {
    for (name, m, known) in common::plane_corpus() {
        let brute = count_closed(&m, Mode::ATrail).unwrap();
        assert_eq!(count_atrails_plane(&m).unwrap(), brute, "{name}");
        if let Some(k) = known {
            assert_eq!(brute, BigUint::from(k), "{name}");
        }
    }
}

#[test]
fn uniform_mass_and_support() {
    for d in 2..=5 {
        let index = PermIndex::new(d).unwrap();
        for t in 0..=6 {
            let dist = chain_distribution(d, t).unwrap();
            assert!(is_distribution(&dist));
            assert_eq!(dist.counts.len(), index.len());
        }
    }
}

#[test]
fn tv_does_not_increase() {
    for d in 2..=5 {
        let curve = tv_curve(d, 30).unwrap();
        for w in curve.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "d = {d}: {curve:?}");
        }
        assert!(curve.iter().all(|&x| (0.0..=1.0).contains(&x)));
    }
}

#[test]
fn shuffle_tables_only_hold_permutations() {
    for d in [2usize, 4, 6] {
        for t in 0..=4 {
            if d * t > 24 {
                continue;
            }
            let table = count_vr(&build_shuffle_gadget(d, t).unwrap(), Mode::ATrail).unwrap();
            assert!(table.iter().all(|(ty, _)| ty.as_permutation().is_some()), "d = {d}, T = {t}");
        }
    }
}

#[test]
fn crt_on_small_graphs() {
    for g in [common::dipole(4), common::doubled_c3(), common::dipole(6), common::degree_six_graph()] {
        let brute = count_closed(&g, Mode::General).unwrap();
        let r = count_et_via_crt(&g, Threshold::TestMode).unwrap();
        assert_eq!(r.tours, brute.to_string());
    }
}

#[test]
fn planarized_k5_is_congruent() {
    let k5 = common::k5();
    let t = count_closed(&k5, Mode::General).unwrap();
    for p in [3u64, 5] {
        let pl = planarize(&k5, p, 0).unwrap();
        assert_eq!(pl.crossings.len(), 5);
        assert_eq!(count_closed_network(&pl.network).unwrap() % p, &t % p);
    }
}

#[test]
fn atrail_instance_doubles_per_vertex() {
    for g in [common::dipole(4), common::doubled_c3(), common::k5()] {
        let et = count_closed(&g, Mode::General).unwrap();
        let at = count_closed(&to_atrail_instance(&g).unwrap(), Mode::ATrail).unwrap();
        assert_eq!(at, et << g.num_vertices());
    }
}

#[test]
fn estimates_sandwich_the_count() {
    let g = common::dipole(4);
    let t = count_closed(&g, Mode::General).unwrap().to_f64().unwrap();
    for eps in [0.5, 1.0] {
        let a = estimate_et(&g, eps, 0.2, &ExactNetworkOracle).unwrap();
        assert!((a.value_float / t).ln().abs() <= eps);
        // The flat instance is small enough to enumerate only at coarse eps.
        if ap_instance(&g, eps, 0.2).unwrap().map.num_vertices() <= 22 {
            let b = estimate_et(&g, eps, 0.2, &BruteForceOracle).unwrap();
            assert_eq!(a.value, b.value);
        }
    }
}
