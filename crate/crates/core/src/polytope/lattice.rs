use std::collections::{BTreeSet, HashSet};

use num::bigint::BigInt;
use num::ToPrimitive;

use super::{HPolytope, PolytopeError};
use crate::arith::Poly;
use crate::linalg::{affine_rank, qi, Vector};

/// A nonempty face: its dimension, vertex indices and the facets containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub dim: usize,
    pub vertices: Vec<usize>,
    pub facets: Vec<usize>,
}

/// All nonempty faces of a polytope, ordered by dimension and then by vertex
/// set. The last entry is the polytope itself.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    pub faces: Vec<Face>,
    /// Cover relations `(lower, upper)`: `lower` is a facet of `upper`.
    pub covers: Vec<(usize, usize)>,
}

impl FaceLattice {
    pub fn of_dim(&self, d: usize) -> impl Iterator<Item = (usize, &Face)> {
        self.faces.iter().enumerate().filter(move |(_, f)| f.dim == d)
    }

    pub fn top(&self) -> &Face {
        self.faces.last().expect("lattice has at least the polytope itself")
    }

    /// Faces covered by `idx`.
    pub fn boundary(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |(_, u)| *u == idx).map(|(l, _)| *l)
    }
}

pub fn build_face_lattice(p: &HPolytope) -> FaceLattice {
    let verts = p.vertices();
    let facet_sets: Vec<BTreeSet<usize>> = (0..p.facets().len())
        .map(|j| {
            verts
                .iter()
                .enumerate()
                .filter(|(_, v)| v.tight.binary_search(&j).is_ok())
                .map(|(i, _)| i)
                .collect()
        })
        .collect();

    // Every face is the intersection of the facets containing it, so closing
    // the full vertex set under intersection with facets reaches them all.
    let all: BTreeSet<usize> = (0..verts.len()).collect();
    let mut seen: HashSet<BTreeSet<usize>> = HashSet::from([all.clone()]);
    let mut queue = vec![all];
    while let Some(f) = queue.pop() {
        for fs in &facet_sets {
            let g: BTreeSet<usize> = f.intersection(fs).copied().collect();
            if !g.is_empty() && seen.insert(g.clone()) {
                queue.push(g);
            }
        }
    }

    let mut faces: Vec<Face> = seen
        .into_iter()
        .map(|vs| {
            let pts: Vec<&Vector> = vs.iter().map(|&i| &verts[i].point).collect();
            let dim = affine_rank(&pts).expect("nonempty");
            let facets = (0..facet_sets.len())
                .filter(|&j| vs.is_subset(&facet_sets[j]))
                .collect();
            Face {
                dim,
                vertices: vs.into_iter().collect(),
                facets,
            }
        })
        .collect();
    faces.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));

    let mut covers = Vec::new();
    for (i, lo) in faces.iter().enumerate() {
        for (j, hi) in faces.iter().enumerate() {
            if hi.dim == lo.dim + 1 && lo.vertices.iter().all(|v| hi.vertices.binary_search(v).is_ok()) {
                covers.push((i, j));
            }
        }
    }
    FaceLattice { faces, covers }
}

/// `(f_0, ..., f_{n-1})`.
pub fn f_vector(p: &HPolytope) -> Vec<u64> {
    let lattice = build_face_lattice(p);
    (0..p.dim()).map(|d| lattice.of_dim(d).count() as u64).collect()
}

/// True iff every vertex lies on exactly `dim` facets.
pub fn is_simple(p: &HPolytope) -> bool {
    p.vertices().iter().all(|v| v.tight.len() == p.dim())
}

pub(crate) fn require_simple(p: &HPolytope) -> Result<(), PolytopeError> {
    match p.vertices().iter().position(|v| v.tight.len() != p.dim()) {
        None => Ok(()),
        Some(i) => Err(PolytopeError::NotSimple {
            vertex: i,
            facets: p.vertices()[i].tight.len(),
        }),
    }
}

/// `(h_0, ..., h_n)` from `sum_i f_i (t-1)^i = sum_k h_k t^{n-k}` with
/// `f_n = 1`.
pub fn h_vector(p: &HPolytope) -> Result<Vec<u64>, PolytopeError> {
    require_simple(p)?;
    let n = p.dim();
    let mut f = f_vector(p);
    f.push(1);
    let t_minus_1 = Poly::from_ints(&[-1, 1]);
    let lhs = f.iter().enumerate().fold(Poly::zero(), |acc, (i, &fi)| {
        &acc + &t_minus_1.pow(i as u32).scale(&qi(fi as i64))
    });
    (0..=n)
        .map(|k| {
            let c = lhs.coeff(n - k);
            let v: BigInt = c.to_integer();
            v.to_u64()
                .filter(|_| c.is_integer())
                .ok_or_else(|| PolytopeError::Degenerate(format!("h-vector entry {c} is not a natural number")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn cube_lattice() {
        let l = build_face_lattice(&cube(3));
        let counts: Vec<usize> = (0..=3).map(|d| l.of_dim(d).count()).collect();
        assert_eq!(counts, vec![8, 12, 6, 1]);
        assert_eq!(l.top().vertices.len(), 8);
        assert!(l.top().facets.is_empty());
        // every edge is covered by exactly two squares and covers two vertices
        for (i, _) in l.of_dim(1) {
            assert_eq!(l.boundary(i).count(), 2);
            assert_eq!(l.covers.iter().filter(|(lo, _)| *lo == i).count(), 2);
        }
    }

    #[test]
    fn interval_and_square_lattices() {
        let l = build_face_lattice(&cube(1));
        assert_eq!(l.faces.len(), 3);
        let l = build_face_lattice(&cube(2));
        let counts: Vec<usize> = (0..=2).map(|d| l.of_dim(d).count()).collect();
        assert_eq!(counts, vec![4, 4, 1]);
    }

    #[test]
    fn simple_polytope_faces_lie_on_codim_many_facets() {
        for p in [cube(3), simplex3(), hexagon()] {
            let l = build_face_lattice(&p);
            for f in &l.faces {
                assert_eq!(f.facets.len(), p.dim() - f.dim);
            }
        }
    }

    #[test]
    fn f_vectors() {
        assert_eq!(f_vector(&cube(3)), vec![8, 12, 6]);
        assert_eq!(f_vector(&simplex3()), vec![4, 6, 4]);
        assert_eq!(f_vector(&hexagon()), vec![6, 6]);
        assert_eq!(f_vector(&octahedron()), vec![6, 12, 8]);
    }

    #[test]
    fn h_vectors() {
        assert_eq!(h_vector(&cube(3)).unwrap(), vec![1, 3, 3, 1]);
        assert_eq!(h_vector(&simplex3()).unwrap(), vec![1, 1, 1, 1]);
        assert_eq!(h_vector(&hexagon()).unwrap(), vec![1, 4, 1]);
        assert!(matches!(
            h_vector(&octahedron()),
            Err(PolytopeError::NotSimple { facets: 4, .. })
        ));
    }

    #[test]
    fn simplicity() {
        assert!(is_simple(&cube(3)));
        assert!(!is_simple(&octahedron()));
        assert!(is_simple(&hexagon()));
    }
}
