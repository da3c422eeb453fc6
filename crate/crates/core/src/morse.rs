//! Equivariant Morse counting series for the norm square of the moment map,
//! critical data for full-torus toric actions, and perfection checks in the
//! trivial, sign and regular coefficient systems.

use std::collections::HashMap;
use std::fmt;

use num::{One, Signed};
use thiserror::Error;

use crate::arith::{Poly, Rational, RationalFunction};
use crate::characters::{chi_from_manifold, equivariant_split, TorusRank};
use crate::linalg::{dot, inverse, mat_vec, transpose, Matrix};
use crate::polytope::{build_face_lattice, AffineInvolution, HPolytope, PolytopeError};
use crate::toric::SignedBettiTable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorseError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("invalid critical data: {0}")]
    InvalidRecord(String),
    #[error("component {0} has no valid partner")]
    UnpairedComponent(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pairing {
    SelfFixed,
    PairedWith(String),
}

/// A connected component of the critical set away from the zero level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalComponentRecord {
    pub id: String,
    /// Real Morse–Bott index (even).
    pub index: usize,
    pub stab_rank: usize,
    /// Equivariant Poincaré series with trivial coefficients.
    pub t_series: RationalFunction,
    pub pairing: Pairing,
}

/// The zero level, described by the signed Betti table of the reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroLevelRecord {
    pub table0: SignedBettiTable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientSystem {
    Trivial,
    Sign,
    Regular,
}

impl CoefficientSystem {
    pub const ALL: [CoefficientSystem; 3] = [Self::Trivial, Self::Sign, Self::Regular];

    fn rank(self) -> i64 {
        match self {
            Self::Regular => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CoefficientSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Trivial => "trivial",
            Self::Sign => "sign",
            Self::Regular => "regular",
        })
    }
}

/// Critical data of `|mu|^2` for the full torus acting on the toric variety
/// of a simple polytope symmetric about the origin.
///
/// For a face `F` with facet normals `A_F` and offsets `b_F`, the closest
/// point of `aff(F)` to the origin is `A_F^T g` with `A_F A_F^T g = b_F`.
/// Leaving the `j`-th facet of `F` decreases the norm to first order exactly
/// when `g_j > 0`, so the index is `2 #{j : g_j > 0}`. Directions with
/// `g_j = 0` increase the norm at second order and do not count.
pub fn full_torus_critical_data(p: &HPolytope) -> Result<(ZeroLevelRecord, Vec<CriticalComponentRecord>), MorseError> {
    crate::polytope::require_simple(p)?;
    let n = p.dim();
    if !AffineInvolution::negation(n).preserves(p) {
        return Err(PolytopeError::NotCentrallySymmetric.into());
    }
    let lattice = build_face_lattice(p);
    let vertex_of: HashMap<&Vec<Rational>, usize> =
        p.vertices().iter().enumerate().map(|(i, v)| (&v.point, i)).collect();
    let face_of: HashMap<&Vec<usize>, usize> = lattice
        .faces
        .iter()
        .enumerate()
        .map(|(i, f)| (&f.vertices, i))
        .collect();
    let opposite = |vs: &[usize]| -> usize {
        let mut image: Vec<usize> = vs
            .iter()
            .map(|&v| {
                let neg: Vec<Rational> = p.vertices()[v].point.iter().map(|x| -x).collect();
                vertex_of[&neg]
            })
            .collect();
        image.sort_unstable();
        face_of[&image]
    };

    let mut comps = Vec::new();
    for (idx, face) in lattice.faces.iter().enumerate() {
        if face.dim == n {
            continue;
        }
        let a: Matrix = face.facets.iter().map(|&j| p.facets()[j].normal.clone()).collect();
        let b: Vec<Rational> = face.facets.iter().map(|&j| p.facets()[j].offset.clone()).collect();
        let gram = crate::linalg::mat_mul(&a, &transpose(&a));
        let g = mat_vec(&inverse(&gram).expect("facet normals of a face are independent"), &b);
        let foot = mat_vec(&transpose(&a), &g);
        let in_relint = p
            .facets()
            .iter()
            .enumerate()
            .filter(|(j, _)| face.facets.binary_search(j).is_err())
            .all(|(_, h)| dot(&h.normal, &foot) < h.offset);
        if !in_relint {
            continue;
        }
        let partner = opposite(&face.vertices);
        if partner == idx {
            return Err(MorseError::InvalidRecord(format!(
                "proper face f{idx} is its own opposite"
            )));
        }
        let codim = n - face.dim;
        comps.push(CriticalComponentRecord {
            id: format!("f{idx}"),
            index: 2 * g.iter().filter(|x| x.is_positive()).count(),
            stab_rank: codim,
            t_series: RationalFunction::recip_of(&Poly::binomial_factor(-1, 2).pow(codim as u32)).expect("nonzero"),
            pairing: Pairing::PairedWith(format!("f{partner}")),
        });
    }
    Ok((
        ZeroLevelRecord {
            table0: SignedBettiTable::point(),
        },
        comps,
    ))
}

/// Checks even indices, unique ids, and that pairs are mutual, distinct and
/// carry identical data.
pub fn validate_components(comps: &[CriticalComponentRecord]) -> Result<(), MorseError> {
    let by_id: HashMap<&str, &CriticalComponentRecord> = comps.iter().map(|c| (c.id.as_str(), c)).collect();
    if by_id.len() != comps.len() {
        return Err(MorseError::InvalidRecord("duplicate component id".into()));
    }
    for c in comps {
        if c.index % 2 != 0 {
            return Err(MorseError::InvalidRecord(format!(
                "component {} has odd index {}",
                c.id, c.index
            )));
        }
        let Pairing::PairedWith(other) = &c.pairing else {
            return Err(MorseError::UnpairedComponent(c.id.clone()));
        };
        let partner = by_id
            .get(other.as_str())
            .filter(|d| d.id != c.id && d.pairing == Pairing::PairedWith(c.id.clone()))
            .ok_or_else(|| MorseError::UnpairedComponent(c.id.clone()))?;
        if partner.index != c.index || partner.t_series != c.t_series || partner.stab_rank != c.stab_rank {
            return Err(MorseError::InvalidRecord(format!(
                "components {} and {} are paired but carry different data",
                c.id, partner.id
            )));
        }
    }
    Ok(())
}

/// `zero term + sum_Z t^{ind Z} |G:G_Z|^{-1} dim(rho) P_T(Z)`, where every
/// paired component has `|G:G_Z| = 2`.
pub fn counting_series(
    zero: &ZeroLevelRecord,
    comps: &[CriticalComponentRecord],
    rho: CoefficientSystem,
) -> Result<RationalFunction, MorseError> {
    validate_components(comps)?;
    let t0 = &zero.table0;
    let zero_term = match rho {
        CoefficientSystem::Trivial => t0.plus_poly(),
        CoefficientSystem::Sign => t0.minus_poly(),
        CoefficientSystem::Regular => t0.betti_poly(),
    };
    let weight = Rational::new(rho.rank().into(), 2.into());
    let comp_sum: RationalFunction = comps
        .iter()
        .map(|c| {
            let shift = RationalFunction::from_poly(Poly::monomial(weight.clone(), c.index));
            &shift * &c.t_series
        })
        .sum();
    Ok(&RationalFunction::from_poly(zero_term) + &comp_sum)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidueClass {
    /// Counting series equals the Poincaré series.
    Zero,
    /// `(1 + t) Q(t)` with `Q` non-negative through the expansion order.
    BottForm,
    /// Not of the form `(1 + t) Q(t)` with `Q >= 0`: the data are inconsistent.
    NonBott,
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Zero => "perfect",
            Self::BottForm => "not perfect",
            Self::NonBott => "non-Bott residue",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectionRow {
    pub rho: CoefficientSystem,
    pub counting: RationalFunction,
    pub target: RationalFunction,
    /// Counting series minus Poincaré series.
    pub residue: RationalFunction,
    pub class: ResidueClass,
    /// Whether truncated expansions agree exactly when the closed forms do.
    pub series_consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectionReport {
    pub rows: Vec<PerfectionRow>,
    /// Regular counting series is the sum of the trivial and sign ones.
    pub additive: bool,
    /// Trivial minus sign counting series equals the manifold-side character.
    pub character_recovered: bool,
}

impl PerfectionReport {
    pub fn holds(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.class == ResidueClass::Zero && r.series_consistent)
            && self.additive
            && self.character_recovered
    }

    pub fn first_failure(&self) -> Option<&PerfectionRow> {
        self.rows
            .iter()
            .find(|r| r.class != ResidueClass::Zero || !r.series_consistent)
    }
}

fn classify(residue: &RationalFunction, order: usize) -> ResidueClass {
    if residue.is_zero() {
        return ResidueClass::Zero;
    }
    let q = RationalFunction::new(residue.num().clone(), residue.den() * &Poly::binomial_factor(1, 1))
        .expect("nonzero denominator");
    match q.series(order) {
        Ok(s) if s.coeffs().iter().all(|c| !c.is_negative()) => ResidueClass::BottForm,
        _ => ResidueClass::NonBott,
    }
}

/// Compares the counting series in each coefficient system with the
/// corresponding part of the equivariant Poincaré series of the manifold.
pub fn perfection_check(
    zero: &ZeroLevelRecord,
    comps: &[CriticalComponentRecord],
    table: &SignedBettiTable,
    k: TorusRank,
    expand_order: usize,
) -> Result<PerfectionReport, MorseError> {
    let (plus, minus) = equivariant_split(table, k);
    let mut counted = HashMap::new();
    let mut rows = Vec::new();
    for rho in CoefficientSystem::ALL {
        let counting = counting_series(zero, comps, rho)?;
        let target = match rho {
            CoefficientSystem::Trivial => plus.clone(),
            CoefficientSystem::Sign => minus.clone(),
            CoefficientSystem::Regular => &plus + &minus,
        };
        let residue = &counting - &target;
        let series_equal = matches!(
            (counting.series(expand_order), target.series(expand_order)),
            (Ok(a), Ok(b)) if a == b
        );
        rows.push(PerfectionRow {
            rho,
            class: classify(&residue, expand_order),
            series_consistent: series_equal == residue.is_zero(),
            counting: counting.clone(),
            target,
            residue,
        });
        counted.insert(rho, counting);
    }
    let triv = &counted[&CoefficientSystem::Trivial];
    let sign = &counted[&CoefficientSystem::Sign];
    let additive = (triv + sign) == counted[&CoefficientSystem::Regular];
    let character_recovered = (triv - sign) == chi_from_manifold(table, k).value;
    Ok(PerfectionReport {
        rows,
        additive,
        character_recovered,
    })
}

/// `sum_F t^{ind F} / (1 - t^2)^{n - dim F}` including the zero level.
pub fn full_torus_regular_sum(comps: &[CriticalComponentRecord]) -> RationalFunction {
    let one = RationalFunction::one();
    &one + &comps
        .iter()
        .map(|c| &RationalFunction::from_poly(Poly::monomial(Rational::one(), c.index)) * &c.t_series)
        .sum::<RationalFunction>()
}
