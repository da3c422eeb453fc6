#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use signed_betti::arith::Rational;
use signed_betti::characters::{stanley_check, TorusRank};
use signed_betti::exec::Exec;
use signed_betti::io::parse::{parse_automorphism_matrix, parse_critical_file, parse_fan, parse_polytope, Source};
use signed_betti::linalg::{dot, solve};
use signed_betti::morse::{
    counting_series, full_torus_critical_data, perfection_check, CoefficientSystem, CriticalComponentRecord,
    ZeroLevelRecord,
};
use signed_betti::polytope::{h_vector, is_simple, normal_fan, HPolytope, Halfspace};
use signed_betti::toric::{graded_trace, graded_trace_with, signed_betti, FanAutomorphism, SimplicialFan};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn load_polytope(name: &str) -> HPolytope {
    parse_polytope(&Source::read(fixture(name)).unwrap(), Exec::default()).unwrap()
}

pub const SYMMETRIC_FIXTURES: [&str; 6] = [
    "cube1.poly",
    "cube2.poly",
    "cube3.poly",
    "cube4.poly",
    "hexagon.poly",
    "hexprism.poly",
];

/// Facts and table rows of a TSV report.
#[derive(Debug, Default)]
pub struct Tsv {
    pub raw: String,
    pub verdict: String,
    pub facts: BTreeMap<String, String>,
    pub rows: BTreeMap<String, Vec<Vec<String>>>,
}

impl Tsv {
    pub fn parse(raw: String) -> Self {
        let mut out = Tsv::default();
        for line in raw.lines() {
            let cells: Vec<&str> = line.split('\t').collect();
            match cells[0] {
                "verdict" => out.verdict = cells[1].to_string(),
                "fact" => {
                    out.facts.insert(cells[1].to_string(), cells[2].to_string());
                }
                "row" => out
                    .rows
                    .entry(cells[1].to_string())
                    .or_default()
                    .push(cells[2..].iter().map(|c| c.to_string()).collect()),
                _ => {}
            }
        }
        out.raw = raw;
        out
    }

    pub fn fact(&self, key: &str) -> &str {
        self.facts
            .get(key)
            .map(String::as_str)
            .unwrap_or_else(|| panic!("no fact {key}"))
    }

    pub fn column(&self, table: &str, col: usize) -> Vec<String> {
        self.rows
            .get(table)
            .map(|r| r.iter().map(|row| row[col].clone()).collect())
            .unwrap_or_default()
    }
}

/// Runs the binary with `--report` and returns the exit code with the
/// parsed report.
pub fn run_cli(args: &[&str]) -> (i32, Tsv) {
    let report = tempfile::NamedTempFile::new().expect("temp file");
    let out = Command::new(env!("CARGO_BIN_EXE_signed-betti"))
        .args(args)
        .arg("--report")
        .arg(report.path())
        .output()
        .expect("binary runs");
    let raw = std::fs::read_to_string(report.path()).unwrap_or_default();
    (out.status.code().unwrap_or(-1), Tsv::parse(raw))
}

pub fn fx(name: &str) -> String {
    fixture(name).display().to_string()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn random_offset(rng: &mut ChaCha8Rng) -> Rational {
    let d = rng.gen_range(3..12);
    q(rng.gen_range(d..3 * d), d)
}

fn random_normal(rng: &mut ChaCha8Rng, dim: usize) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..dim).map(|_| rng.gen_range(-2..=2)).collect();
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

fn to_q(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| q(x, 1)).collect()
}

fn build(dim: usize, ineqs: Vec<(Vec<i64>, Rational)>) -> Option<HPolytope> {
    let hs = ineqs.into_iter().map(|(a, b)| Halfspace::new(to_q(&a), b)).collect();
    HPolytope::from_inequalities(dim, hs, Exec::Sequential)
        .ok()
        .filter(is_simple)
}

/// A random simple polytope: a box cut by a few generic halfspaces.
pub fn random_simple_polytope(rng: &mut ChaCha8Rng, dim: usize) -> HPolytope {
    loop {
        let mut ineqs = Vec::new();
        for i in 0..dim {
            for s in [1, -1] {
                let mut e = vec![0; dim];
                e[i] = s;
                ineqs.push((e, random_offset(rng)));
            }
        }
        for _ in 0..rng.gen_range(1..=dim + 2) {
            ineqs.push((random_normal(rng, dim), random_offset(rng)));
        }
        if let Some(p) = build(dim, ineqs) {
            return p;
        }
    }
}

/// A random centrally symmetric simple polytope with integral normals.
pub fn random_symmetric_polytope(rng: &mut ChaCha8Rng, dim: usize) -> HPolytope {
    loop {
        let mut normals: Vec<Vec<i64>> = (0..dim).map(|i| (0..dim).map(|j| (i == j) as i64).collect()).collect();
        for _ in 0..rng.gen_range(1..=dim) {
            normals.push(random_normal(rng, dim));
        }
        let ineqs = normals
            .into_iter()
            .flat_map(|a| {
                let b = random_offset(rng);
                let neg = a.iter().map(|x| -x).collect();
                [(a, b.clone()), (neg, b)]
            })
            .collect();
        if let Some(p) = build(dim, ineqs) {
            return p;
        }
    }
}

/// Counts vertices by their number of edges descending along `xi`; `None`
/// when `xi` is orthogonal to an edge.
pub fn descending_edge_counts(p: &HPolytope, xi: &[Rational]) -> Option<Vec<u64>> {
    let n = p.dim();
    let mut h = vec![0u64; n + 1];
    for v in p.vertices() {
        let a: Vec<Vec<Rational>> = v.tight.iter().map(|&i| p.facets()[i].normal.clone()).collect();
        let mut down = 0;
        for k in 0..n {
            // the edge leaving facet tight[k] while staying on the others
            let mut rhs = vec![q(0, 1); n];
            rhs[k] = q(-1, 1);
            let u = solve(&a, &rhs)?;
            let s = dot(xi, &u);
            if s == q(0, 1) {
                return None;
            }
            down += (s < q(0, 1)) as usize;
        }
        h[down] += 1;
    }
    Some(h)
}

pub fn generic_functional(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Rational> {
    (0..dim).map(|_| q(rng.gen_range(-1000..=1000), 1)).collect()
}

/// A random unimodular integer matrix built from elementary operations.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    m = perm.iter().map(|&i| m[i].clone()).collect();
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            m[i].iter_mut().for_each(|x| *x = -*x);
            continue;
        }
        let c = rng.gen_range(-2..=2);
        let (ri, rj) = (m[i].clone(), m[j].clone());
        m[i] = ri.iter().zip(&rj).map(|(a, b)| a + c * b).collect();
    }
    m
}

pub fn fan_fixtures() -> Vec<(String, SimplicialFan, FanAutomorphism)> {
    let mut out = Vec::new();
    for name in SYMMETRIC_FIXTURES {
        let fan = normal_fan(&load_polytope(name)).unwrap();
        let psi = FanAutomorphism::negation(&fan).unwrap();
        out.push((name.to_string(), fan, psi));
    }
    let simplex = normal_fan(&load_polytope("simplex3.poly")).unwrap();
    out.push((
        "simplex3.poly".into(),
        simplex.clone(),
        FanAutomorphism::identity(&simplex),
    ));
    let fan = parse_fan(&Source::read(fixture("p1xp1.fan")).unwrap()).unwrap();
    let m = parse_automorphism_matrix(&Source::read(fixture("swap.aut")).unwrap()).unwrap();
    let psi = FanAutomorphism::new(&fan, m).unwrap();
    out.push(("p1xp1.fan".into(), fan, psi));
    out
}

pub fn morse_fixtures() -> Vec<(String, ZeroLevelRecord, Vec<CriticalComponentRecord>)> {
    let mut out: Vec<_> = [
        "cube1.poly",
        "cube2.poly",
        "cube3.poly",
        "hexagon.poly",
        "hexprism.poly",
    ]
    .iter()
    .map(|n| {
        let (zero, comps) = full_torus_critical_data(&load_polytope(n)).unwrap();
        (n.to_string(), zero, comps)
    })
    .collect();
    for crit in ["cp3.crit", "cp3_corrupt.crit"] {
        let src = Source::read(fixture(crit)).unwrap();
        let (zero, comps, _) = parse_critical_file(&src).unwrap();
        out.push((crit.to_string(), zero, comps));
    }
    out
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// h-vector palindromicity and agreement with descending-edge counts of a
/// generic linear functional, on `count` random simple polytopes.
pub fn prop_h_vector_and_morse_count(seed: u64, count: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..count {
        let dim = 2 + trial % 3;
        let p = random_simple_polytope(&mut rng, dim);
        let h = h_vector(&p).map_err(|e| e.to_string())?;
        let rev: Vec<u64> = h.iter().rev().copied().collect();
        ensure(h == rev, || format!("trial {trial}: h-vector {h:?} is not palindromic"))?;
        let counts = loop {
            let xi = generic_functional(&mut rng, dim);
            if let Some(c) = descending_edge_counts(&p, &xi) {
                break c;
            }
        };
        ensure(h == counts, || {
            format!("trial {trial}: h {h:?} vs Morse count {counts:?}")
        })?;
    }
    Ok(())
}

pub fn prop_trace_palindromic() -> Result<(), String> {
    let one = Rational::from_integer(1.into());
    for (name, fan, psi) in fan_fixtures() {
        let tr = graded_trace(&fan, &psi).map_err(|e| e.to_string())?;
        let rev: Vec<Rational> = tr.traces.iter().rev().cloned().collect();
        ensure(tr.traces == rev, || format!("{name}: trace not palindromic"))?;
        ensure(tr.traces[0] == one && tr.traces.last() == Some(&one), || {
            format!("{name}: end traces are not 1")
        })?;
        tr.check_invariants().map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(())
}

pub fn prop_lsop_invariance(seed: u64, count: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fixtures = fan_fixtures();
    for trial in 0..count {
        let (name, fan, psi) = &fixtures[trial % fixtures.len()];
        let g = random_unimodular(&mut rng, fan.rank());
        let base = graded_trace(fan, psi).map_err(|e| e.to_string())?;
        let rebased = graded_trace_with(fan, psi, Some(&g), Exec::default()).map_err(|e| e.to_string())?;
        ensure(base == rebased, || format!("{name}: trace changed under lsop {g:?}"))?;
    }
    Ok(())
}

pub fn prop_rho_additivity() -> Result<(), String> {
    for (name, zero, comps) in morse_fixtures() {
        let series = |rho| counting_series(&zero, &comps, rho).map_err(|e| e.to_string());
        let triv = series(CoefficientSystem::Trivial)?;
        let sign = series(CoefficientSystem::Sign)?;
        let reg = series(CoefficientSystem::Regular)?;
        ensure(&triv + &sign == reg, || format!("{name}: trivial + sign != regular"))?;
    }
    Ok(())
}

/// Stanley's identity and Morse perfection on random centrally symmetric
/// simple polytopes.
pub fn prop_random_symmetric(seed: u64, count: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..count {
        let dim = 2 + trial % 2;
        let p = random_symmetric_polytope(&mut rng, dim);
        let fan = normal_fan(&p).map_err(|e| e.to_string())?;
        let psi = FanAutomorphism::negation(&fan).map_err(|e| e.to_string())?;
        let tr = graded_trace(&fan, &psi).map_err(|e| e.to_string())?;
        let table = signed_betti(&tr).map_err(|e| e.to_string())?;
        ensure(stanley_check(&table, dim).holds(), || {
            format!("trial {trial}: Stanley identity fails")
        })?;
        let (zero, comps) = full_torus_critical_data(&p).map_err(|e| e.to_string())?;
        let k = TorusRank::new(dim as u32).unwrap();
        let report = perfection_check(&zero, &comps, &table, k, 2 * dim + 10).map_err(|e| e.to_string())?;
        ensure(report.holds(), || format!("trial {trial}: Morse function not perfect"))?;
    }
    Ok(())
}
