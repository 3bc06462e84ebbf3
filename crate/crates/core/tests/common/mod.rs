//! Graphs and maps shared by the integration tests.
#![allow(dead_code)]

use trailcount::graph::{Kind, MixedMap};
use trailcount::kotzig::medial_map;

fn graph(rots: &[&[usize]]) -> MixedMap {
    MixedMap::from_neighbor_rotations(Kind::Graph, &rots.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn plane(rots: &[&[usize]]) -> MixedMap {
    MixedMap::from_neighbor_rotations(Kind::Map, &rots.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

/// Two vertices joined by `d` parallel edges.
pub fn dipole(d: usize) -> MixedMap {
    MixedMap::from_neighbor_rotations(Kind::Graph, &[vec![1; d], vec![0; d]]).unwrap()
}

/// Triangle with every edge doubled.
pub fn doubled_c3() -> MixedMap {
    graph(&[&[1, 1, 2, 2], &[0, 0, 2, 2], &[0, 0, 1, 1]])
}

pub fn k5() -> MixedMap {
    let rots: Vec<Vec<usize>> = (0..5).map(|v| (0..5).filter(|&w| w != v).collect()).collect();
    MixedMap::from_neighbor_rotations(Kind::Graph, &rots).unwrap()
}

/// Five vertices, one of degree 6 and four of degree 4.
pub fn degree_six_graph() -> MixedMap {
    graph(&[&[1, 1, 2, 2, 3, 4], &[0, 0, 3, 4], &[0, 0, 3, 4], &[0, 1, 2, 4], &[0, 1, 2, 3]])
}

/// Plane embedding of two vertices joined by four edges.
pub fn plane_dipole() -> MixedMap {
    MixedMap::from_parts(Kind::Map, &[(0, vec![0, 1, 2, 3]), (1, vec![4, 5, 6, 7])], &[(0, 4), (1, 7), (2, 6), (3, 5)], &[])
        .unwrap()
}

pub fn k4_plane() -> MixedMap {
    plane(&[&[1, 2, 3], &[0, 3, 2], &[0, 1, 3], &[0, 2, 1]])
}

pub fn cycle_plane(n: usize) -> MixedMap {
    let rots: Vec<Vec<usize>> = (0..n).map(|i| vec![(i + 1) % n, (i + n - 1) % n]).collect();
    MixedMap::from_neighbor_rotations(Kind::Map, &rots).unwrap()
}

/// Wheel with hub 0 and rim 1..=n.
pub fn wheel_plane(n: usize) -> MixedMap {
    let mut rots = vec![(1..=n).collect::<Vec<_>>()];
    for i in 1..=n {
        let next = i % n + 1;
        let prev = (i + n - 2) % n + 1;
        rots.push(vec![0, prev, next]);
    }
    MixedMap::from_neighbor_rotations(Kind::Map, &rots).unwrap()
}

/// Prism over an `n`-cycle: outer 0..n, inner n..2n.
pub fn prism_plane(n: usize) -> MixedMap {
    let mut rots = Vec::new();
    for i in 0..n {
        rots.push(vec![(i + n - 1) % n, (i + 1) % n, n + i]);
    }
    for i in 0..n {
        rots.push(vec![n + (i + 1) % n, n + (i + n - 1) % n, i]);
    }
    MixedMap::from_neighbor_rotations(Kind::Map, &rots).unwrap()
}

/// Plane 4-regular maps with their spanning-tree counts where known.
pub fn plane_corpus() -> Vec<(&'static str, MixedMap, Option<u64>)> {
    vec![
        ("plane 4-dipole", plane_dipole(), Some(2)),
        ("octahedron", medial_map(&k4_plane()).unwrap(), Some(16)),
        ("medial of C3", medial_map(&cycle_plane(3)).unwrap(), Some(3)),
        ("medial of C4", medial_map(&cycle_plane(4)).unwrap(), Some(4)),
        ("medial of W4", medial_map(&wheel_plane(4)).unwrap(), Some(45)),
        ("medial of prism", medial_map(&prism_plane(3)).unwrap(), Some(75)),
        ("cuboctahedron", medial_map(&prism_plane(4)).unwrap(), Some(384)),
    ]
}
