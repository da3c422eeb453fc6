use num::ToPrimitive;

use super::lattice::require_simple;
use super::{HPolytope, PolytopeError};
use crate::linalg::primitive;
use crate::toric::SimplicialFan;

/// Normal fan of a simple polytope: one ray per facet (the primitive
/// inward normal, same index as the facet) and one maximal cone per vertex,
/// spanned by the rays of the facets tight there.
pub fn normal_fan(p: &HPolytope) -> Result<SimplicialFan, PolytopeError> {
    require_simple(p)?;
    let rays = p
        .facets()
        .iter()
        .map(|h| {
            let inward: Vec<_> = h.normal.iter().map(|x| -x).collect();
            primitive(&inward)
                .into_iter()
                .map(|x| {
                    x.to_i64()
                        .ok_or_else(|| PolytopeError::Overflow(format!("ray entry {x}")))
                })
                .collect::<Result<Vec<i64>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let cones = p.vertices().iter().map(|v| v.tight.clone()).collect();
    SimplicialFan::new(p.dim(), rays, cones).map_err(|e| PolytopeError::Degenerate(e.to_string()))
}
