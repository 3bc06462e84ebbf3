use crate::error::{Error, Result};
use crate::gadgets::build_deg4_map_gadget;
use crate::graph::{substitute, Kind, MixedMap};

/// Replaces every vertex of a 4-regular graph by the three-vertex map gadget.
/// Each tour of the input corresponds to `2^|V|` A-trails of the output.
pub fn to_atrail_instance(g: &MixedMap) -> Result<MixedMap> {
    if !g.is_regular(4) {
        return Err(Error::InvalidParameter("A-trail instance needs a 4-regular graph".into()));
    }
    if g.num_externals() != 0 {
        return Err(Error::ExternalCount { expected: "0".into(), found: g.num_externals() });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let gadget = build_deg4_map_gadget();
    substitute(g, Kind::Map, |_| Some(gadget.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::count_closed;
    use crate::graph::Mode;
    use num_bigint::BigUint;

    #[test]
    fn dipole_relation() {
        let g = MixedMap::from_neighbor_rotations(Kind::Graph, &[vec![1; 4], vec![0; 4]]).unwrap();
        let m = to_atrail_instance(&g).unwrap();
        assert_eq!(m.num_vertices(), 6);
        assert_eq!(count_closed(&m, Mode::ATrail).unwrap(), BigUint::from(24u32));
    }

    #[test]
    fn rejects_other_degrees() {
        let g = MixedMap::from_neighbor_rotations(Kind::Graph, &[vec![1; 6], vec![0; 6]]).unwrap();
        assert!(to_atrail_instance(&g).is_err());
    }
}
