use crate::error::{Error, Result};
use crate::graph::{HalfEdge, Kind, MapBuilder, MixedMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceStructure {
    /// Each face as the cycle of half-edges leaving its corners.
    pub faces: Vec<Vec<HalfEdge>>,
    pub face_of: Vec<usize>,
    /// Orientable genus from `V - E + F = 2 - 2g`.
    pub genus: i64,
}

/// Faces of a closed connected map, following `next(h) = succ(twin(h))`.
pub fn face_structure(m: &MixedMap) -> Result<FaceStructure> {
    if m.kind() != Kind::Map {
        return Err(Error::NotAMap);
    }
    if m.num_externals() != 0 {
        return Err(Error::ExternalCount { expected: "0".into(), found: m.num_externals() });
    }
    if !m.is_connected() {
        return Err(Error::Disconnected);
    }
    let h = m.num_half_edges();
    let mut face_of = vec![usize::MAX; h];
    let mut faces = Vec::new();
    for start in 0..h {
        if face_of[start] != usize::MAX {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        loop {
            face_of[x] = faces.len();
            cycle.push(x);
            x = m.rotation_successor(m.twin(x).expect("closed map"));
            if x == start {
                break;
            }
        }
        faces.push(cycle);
    }
    let chi = m.num_vertices() as i64 - m.num_edges() as i64 + faces.len() as i64;
    Ok(FaceStructure { faces, face_of, genus: (2 - chi) / 2 })
}

/// Like [`face_structure`] but rejects anything that is not plane.
pub fn trace_faces(m: &MixedMap) -> Result<FaceStructure> {
    let fs = face_structure(m)?;
    if fs.genus != 0 {
        return Err(Error::NotPlane { genus: fs.genus });
    }
    Ok(fs)
}

/// Medial map of a plane map: one 4-valent vertex per edge, joined along
/// consecutive edges of every face.
pub fn medial_map(g: &MixedMap) -> Result<MixedMap> {
    let fs = trace_faces(g)?;
    let next = |x: HalfEdge| g.rotation_successor(g.twin(x).expect("closed"));
    let edges = g.edges();
    let mut edge_of = vec![(0usize, false); g.num_half_edges()];
    for (e, &(a, b)) in edges.iter().enumerate() {
        edge_of[a] = (e, false);
        edge_of[b] = (e, true);
    }
    let mut b = MapBuilder::new(Kind::Map);
    let slots: Vec<Vec<HalfEdge>> = edges.iter().map(|_| b.add_vertex(4)).collect();
    // Slots around an edge's midpoint: forward in the face of its low half,
    // back in the face of its high half, forward there, back in the first.
    let forward = |x: HalfEdge| {
        let (e, high) = edge_of[x];
        slots[e][if high { 2 } else { 0 }]
    };
    let back = |x: HalfEdge| {
        let (e, high) = edge_of[x];
        slots[e][if high { 1 } else { 3 }]
    };
    for x in 0..g.num_half_edges() {
        b.connect(forward(x), back(next(x)));
    }
    drop(fs);
    b.build()
}
