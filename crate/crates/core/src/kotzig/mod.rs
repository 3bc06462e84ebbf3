//! A-trails of 4-regular plane maps counted as spanning trees.
//!
//! The faces of a 4-regular plane map can be coloured black and white so that
//! faces sharing an edge differ. Taking one vertex per black face and one
//! edge per map vertex (joining the two black faces at its opposite corners)
//! gives a plane graph whose medial graph is the map, and its spanning trees
//! are in bijection with the A-trails.

mod faces;
mod matrix_tree;

pub use faces::{face_structure, medial_map, trace_faces, FaceStructure};
pub use matrix_tree::{bareiss_determinant, spanning_tree_count};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::graph::MixedMap;

/// Loopy multigraph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceClass {
    Black,
    White,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarDemedial {
    /// One vertex per face of the chosen class, one edge per map vertex.
    pub graph: Multigraph,
    /// Face index (into the face structure) of each graph vertex.
    pub faces: Vec<usize>,
    /// Colour of every face; `true` is black.
    pub black: Vec<bool>,
}

/// Two-colours the faces, the face of half-edge 0 white, and builds the
/// graph on the faces of `class`.
pub fn checkerboard_demedialize(m: &MixedMap, class: FaceClass) -> Result<PlanarDemedial> {
    let fs = trace_faces(m)?;
    let nf = fs.faces.len();
    let mut color: Vec<Option<bool>> = vec![None; nf];
    let mut adj = vec![Vec::new(); nf];
    for (h, t) in m.edges() {
        let (a, b) = (fs.face_of[h], fs.face_of[t]);
        adj[a].push(b);
        adj[b].push(a);
    }
    if nf > 0 {
        let root = fs.face_of[0];
        color[root] = Some(false);
        let mut stack = vec![root];
        while let Some(f) = stack.pop() {
            let c = color[f].expect("coloured when pushed");
            for &g in &adj[f] {
                match color[g] {
                    None => {
                        color[g] = Some(!c);
                        stack.push(g);
                    }
                    Some(x) if x == c => return Err(Error::Coloring),
                    Some(_) => {}
                }
            }
        }
    }
    let black: Vec<bool> = color.into_iter().map(|c| c.unwrap_or(false)).collect();
    if !m.is_regular(4) {
        return Err(Error::InvalidParameter("demedialization needs a 4-regular map".into()));
    }
    let want = class == FaceClass::Black;
    let faces: Vec<usize> = (0..nf).filter(|&f| black[f] == want).collect();
    let mut index = vec![usize::MAX; nf];
    for (i, &f) in faces.iter().enumerate() {
        index[f] = i;
    }
    let mut edges = Vec::with_capacity(m.num_vertices());
    for v in 0..m.num_vertices() {
        // Corner before slot i lies in the face leaving along slot i.
        let corners: Vec<usize> = m.rotation(v).iter().map(|&h| fs.face_of[h]).collect();
        let picked: Vec<usize> = corners.iter().copied().filter(|&f| black[f] == want).collect();
        if picked.len() != 2 {
            return Err(Error::Coloring);
        }
        edges.push((index[picked[0]], index[picked[1]]));
    }
    Ok(PlanarDemedial { graph: Multigraph { n: faces.len(), edges }, faces, black })
}

/// Number of A-trails of a 4-regular plane map.
pub fn count_atrails_plane(m: &MixedMap) -> Result<BigUint> {
    let d = checkerboard_demedialize(m, FaceClass::Black)?;
    Ok(spanning_tree_count(&d.graph))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::count_closed;
    use crate::graph::{Kind, Mode};

    fn plane(rots: &[&[usize]]) -> MixedMap {
        MixedMap::from_neighbor_rotations(Kind::Map, &rots.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn k4() -> MixedMap {
        plane(&[&[1, 2, 3], &[0, 3, 2], &[0, 1, 3], &[0, 2, 1]])
    }

    #[test]
    fn octahedron_gives_k4() {
        let oct = medial_map(&k4()).unwrap();
        assert!(oct.is_regular(4));
        assert_eq!(oct.num_vertices(), 6);
        let d = checkerboard_demedialize(&oct, FaceClass::Black).unwrap();
        assert_eq!(d.graph.edges.len(), 6);
        assert_eq!(spanning_tree_count(&d.graph), BigUint::from(16u32));
        assert_eq!(count_atrails_plane(&oct).unwrap(), BigUint::from(16u32));
        assert_eq!(count_closed(&oct, Mode::ATrail).unwrap(), BigUint::from(16u32));
    }

    #[test]
    fn plane_dipole() {
        let m = MixedMap::from_parts(
            Kind::Map,
            &[(0, vec![0, 1, 2, 3]), (1, vec![4, 5, 6, 7])],
            &[(0, 4), (1, 7), (2, 6), (3, 5)],
            &[],
        )
        .unwrap();
        let d = checkerboard_demedialize(&m, FaceClass::Black).unwrap();
        assert_eq!(d.graph.edges.len(), 2);
        assert_eq!(count_atrails_plane(&m).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn both_colour_classes_agree() {
        for g in [k4(), plane(&[&[1, 3], &[2, 0], &[3, 1], &[0, 2]])] {
            let m = medial_map(&g).unwrap();
            let b = checkerboard_demedialize(&m, FaceClass::Black).unwrap();
            let w = checkerboard_demedialize(&m, FaceClass::White).unwrap();
            assert_eq!(spanning_tree_count(&b.graph), spanning_tree_count(&w.graph));
        }
    }

    #[test]
    fn medial_of_c4() {
        let m = medial_map(&plane(&[&[1, 3], &[2, 0], &[3, 1], &[0, 2]])).unwrap();
        assert_eq!(count_atrails_plane(&m).unwrap(), BigUint::from(4u32));
        assert_eq!(count_closed(&m, Mode::ATrail).unwrap(), BigUint::from(4u32));
    }

    #[test]
    fn odd_faces_fail_colouring() {
        // A triangle of double edges with one single edge replaced: degree 3.
        let m = plane(&[&[1, 2, 2], &[0, 2], &[0, 0, 1]]);
        assert!(checkerboard_demedialize(&m, FaceClass::Black).is_err());
    }
}
