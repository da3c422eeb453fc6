//! Signed Betti numbers of Hamiltonian torus spaces carrying an
//! anti-symplectic involution, together with their relation to the
//! symplectic reduction.
//!
//! The toric side works entirely from polytopes and fans in exact rational
//! arithmetic: [`polytope`] enumerates faces and slices, [`toric`] computes
//! the trace of a lattice involution on Stanley–Reisner cohomology,
//! [`characters`] compares graded characters, [`morse`] checks perfection
//! of the moment-map norm square and [`flag`] handles complete flag
//! manifolds. [`io`] holds the file formats and command pipelines.

pub mod arith;
pub mod characters;
pub mod exec;
pub mod flag;
pub mod io;
pub mod linalg;
pub mod morse;
pub mod polytope;
pub mod toric;
