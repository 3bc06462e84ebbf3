mod common;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use trailcount::counting::{compose_vr, count_closed, count_vr, GadgetNetwork};
use trailcount::graph::{
    map_from_json, map_to_json, pairing_count, slot_pairings, trace, Kind, MapBuilder, MixedMap, Mode, TransitionSystem,
    TransitionSystems,
};

/// Random map: vertex degrees from {2, 4}, `externals` labelled stubs, the
/// rest of the half-edges paired uniformly.
fn random_map(kind: Kind, degrees: &[usize], externals: usize, seed: u64) -> Option<MixedMap> {
    let slots: usize = degrees.iter().sum();
    if slots < externals || !(slots - externals).is_multiple_of(2) {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = MapBuilder::new(kind);
    let mut hs: Vec<_> = degrees.iter().flat_map(|&d| b.add_vertex(d)).collect();
    hs.shuffle(&mut rng);
    for (l, &h) in hs[..externals].iter().enumerate() {
        b.export(l as u32, h);
    }
    for pair in hs[externals..].chunks(2) {
        b.connect(pair[0], pair[1]);
    }
    let m = b.build().ok()?;
    m.is_connected().then_some(m)
}

fn gadget_strategy(kind: Kind) -> impl Strategy<Value = MixedMap> {
    (prop::collection::vec(prop::sample::select(vec![2usize, 4]), 1..=3), prop::sample::select(vec![2usize, 4]), any::<u64>())
        .prop_filter_map("odd or disconnected", move |(degrees, ext, seed)| {
            let total: usize = degrees.iter().sum::<usize>();
            if total > 12 {
                return None;
            }
            random_map(kind, &degrees, ext, seed)
        })
}

#[test]
fn pairing_counts_are_double_factorials() {
    for (d, want) in [(2usize, 1u64), (4, 3), (6, 15), (8, 105)] {
        assert_eq!(pairing_count(d), want);
        assert_eq!(slot_pairings(d).len() as u64, want);
    }
}

#[test]
fn a_trail_stream_is_two_thirds_per_vertex() {
    for (_, m, _) in common::plane_corpus() {
        let general = TransitionSystems::new(&m, Mode::General).unwrap().total();
        let at = TransitionSystems::new(&m, Mode::ATrail).unwrap().total();
        let n = m.num_vertices() as u32;
        assert_eq!(general * 2u128.pow(n), at * 3u128.pow(n));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip(m in gadget_strategy(Kind::Graph)) {
        let text = map_to_json(&m);
        let back = map_from_json(&text).unwrap();
        prop_assert_eq!(map_to_json(&back), text);
        prop_assert_eq!(count_vr(&back, Mode::General).unwrap(), count_vr(&m, Mode::General).unwrap());
    }

    #[test]
    fn trace_covers_every_edge(m in gadget_strategy(Kind::Map), pick in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        let pairings = (0..m.num_vertices()).map(|v| slot_pairings(m.degree(v)).choose(&mut rng).unwrap().clone()).collect();
        let ts = TransitionSystem::new(pairings);
        let dec = trace(&m, &ts, Mode::General).expect("general mode accepts every pairing");
        let mut seen = vec![0usize; m.num_half_edges()];
        for r in dec.routes.iter().map(|r| &r.half_edges).chain(dec.cycles.iter()) {
            for &h in r {
                seen[h] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&c| c == 1), "{seen:?}");
    }

    #[test]
    fn compose_matches_whole(m in gadget_strategy(Kind::Graph), cut in prop::collection::vec(0usize..2, 3)) {
        let mut block_of: Vec<usize> = (0..m.num_vertices()).map(|v| cut[v]).collect();
        // Block labels must be contiguous.
        if !block_of.contains(&0) {
            block_of.iter_mut().for_each(|b| *b = 0);
        }
        let net = GadgetNetwork::from_partition(&m, Mode::General, &block_of).unwrap();
        prop_assert_eq!(compose_vr(&net).unwrap(), count_vr(&m, Mode::General).unwrap());
    }

    #[test]
    fn compose_matches_whole_for_maps(m in gadget_strategy(Kind::Map), cut in prop::collection::vec(0usize..2, 3)) {
        let mut block_of: Vec<usize> = (0..m.num_vertices()).map(|v| cut[v]).collect();
        if !block_of.contains(&0) {
            block_of.iter_mut().for_each(|b| *b = 0);
        }
        let net = GadgetNetwork::from_partition(&m, Mode::ATrail, &block_of).unwrap();
        prop_assert_eq!(compose_vr(&net).unwrap(), count_vr(&m, Mode::ATrail).unwrap());
    }

    #[test]
    fn table_total_counts_cycle_free_systems(m in gadget_strategy(Kind::Graph)) {
        let systems = TransitionSystems::new(&m, Mode::General).unwrap();
        let mut free = 0u64;
        for ts in systems {
            if trace(&m, &ts, Mode::General).unwrap().closed_cycles() == 0 {
                free += 1;
            }
        }
        prop_assert_eq!(count_vr(&m, Mode::General).unwrap().total(), BigUint::from(free));
    }
}

#[test]
fn closed_counts_of_fixtures() {
    assert_eq!(count_closed(&common::dipole(4), Mode::General).unwrap(), BigUint::from(6u32));
    assert_eq!(count_closed(&common::dipole(6), Mode::General).unwrap(), BigUint::from(120u32));
    assert_eq!(count_closed(&common::k5(), Mode::General).unwrap(), BigUint::from(132u32));
}
