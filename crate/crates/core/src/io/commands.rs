use std::path::PathBuf;
use std::time::Instant;

use num::One;

use super::parse::{
    format_involution, format_polytope, format_series, parse_automorphism_matrix, parse_betti_table,
    parse_critical_file, parse_fan, parse_flag_spec, parse_involution, parse_polytope, parse_subtorus, Source,
};
use super::report::{Failure, InputRecord, RunReport, Table};
use super::IoError;
use crate::arith::{format_rational, Poly, RationalFunction};
use crate::characters::{
    chi_from_manifold, chi_from_reduction, solve_reduction_signature, stanley_check, verify_main_identity,
    IdentityReport, TorusRank,
};
use crate::exec::Exec;
use crate::flag::{
    check_moment_compat, coinvariant_trace, theta_molien, trace_poly, FlagError, FlagSpec, SignedPermutation,
};
use crate::linalg::{identity, Vector};
use crate::morse::{
    full_torus_critical_data, full_torus_regular_sum, perfection_check, CriticalComponentRecord, Pairing,
    ZeroLevelRecord,
};
use crate::polytope::{
    detect_central_symmetry, f_vector, h_vector, is_simple, normal_fan, slice_reduce, HPolytope, PolytopeError,
};
use crate::toric::{graded_trace_with, signed_betti, FanAutomorphism, GradedTrace, SignedBettiTable, SimplicialFan};

/// Settings shared by every command.
#[derive(Clone, Copy, Debug, Default)]
pub struct Context {
    /// Order of the series cross-checks; `None` means `2 dim + 10`.
    pub expand_order: Option<usize>,
    pub exec: Exec,
}

impl Context {
    fn order(&self, dim: usize) -> usize {
        self.expand_order.unwrap_or(2 * dim + 10)
    }
}

#[derive(Clone, Debug)]
pub enum TraceSource {
    Fan {
        fan: PathBuf,
        automorphism: PathBuf,
    },
    Polytope {
        polytope: PathBuf,
        involution: Option<PathBuf>,
    },
}

#[derive(Clone, Debug)]
pub enum MorseSource {
    Polytope(PathBuf),
    Critical { crit: PathBuf, betti: PathBuf, rank: u32 },
}

#[derive(Clone, Debug)]
pub enum Command {
    Stats {
        polytope: PathBuf,
    },
    VerifyStanley {
        polytope: PathBuf,
    },
    VerifyMain {
        polytope: PathBuf,
        involution: PathBuf,
        subtorus: PathBuf,
    },
    Reduce {
        polytope: PathBuf,
        involution: PathBuf,
        subtorus: PathBuf,
        write_polytope: Option<PathBuf>,
        write_involution: Option<PathBuf>,
    },
    Trace(TraceSource),
    Morse(MorseSource),
    Flag {
        n: Option<usize>,
        spec: Option<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Stats { .. } => "stats",
            Command::VerifyStanley { .. } => "verify-stanley",
            Command::VerifyMain { .. } => "verify-main",
            Command::Reduce { .. } => "reduce",
            Command::Trace(_) => "trace",
            Command::Morse(_) => "morse",
            Command::Flag { .. } => "flag",
        }
    }
}

/// Runs a command. Input and precondition errors become an `ERROR` report
/// listing whatever inputs were read before the failure.
pub fn run(cmd: &Command, ctx: &Context) -> RunReport {
    let start = Instant::now();
    let mut report = RunReport::new(cmd.name());
    let outcome = match cmd {
        Command::Stats { polytope } => stats(&mut report, polytope, ctx),
        Command::VerifyStanley { polytope } => verify_stanley(&mut report, polytope, ctx),
        Command::VerifyMain {
            polytope,
            involution,
            subtorus,
        } => verify_main(&mut report, polytope, involution, subtorus, ctx),
        Command::Reduce {
            polytope,
            involution,
            subtorus,
            write_polytope,
            write_involution,
        } => reduce(
            &mut report,
            (polytope, involution, subtorus),
            write_polytope.as_ref(),
            write_involution.as_ref(),
            ctx,
        ),
        Command::Trace(src) => trace(&mut report, src, ctx),
        Command::Morse(src) => morse(&mut report, src, ctx),
        Command::Flag { n, spec } => flag(&mut report, *n, spec.as_ref(), ctx),
    };
    if let Err(e) = outcome {
        let inputs: Vec<InputRecord> = std::mem::take(&mut report.inputs);
        report = RunReport::error(cmd.name(), inputs, e.to_string());
    }
    report.elapsed = start.elapsed();
    report
}

fn read(report: &mut RunReport, path: &PathBuf) -> Result<Source, IoError> {
    let src = Source::read(path)?;
    report.input(&src);
    Ok(src)
}

fn list<T: ToString>(v: &[T]) -> String {
    format!("({})", v.iter().map(T::to_string).collect::<Vec<_>>().join(","))
}

fn trace_table(name: &str, t: &GradedTrace) -> Table {
    let mut table = Table::new(name, &["degree", "dim", "trace"]);
    for (i, (tr, d)) in t.traces.iter().zip(&t.dims).enumerate() {
        table.push(vec![(2 * i).to_string(), d.to_string(), format_rational(tr)]);
    }
    table
}

fn betti_table(name: &str, t: &SignedBettiTable) -> Table {
    let mut table = Table::new(name, &["degree", "h_plus", "h_minus", "signed"]);
    for (i, &(p, m)) in t.entries().iter().enumerate() {
        table.push(vec![
            i.to_string(),
            p.to_string(),
            m.to_string(),
            (p as i64 - m as i64).to_string(),
        ]);
    }
    table
}

fn identity_table(report: &mut RunReport, name: &str, id: &IdentityReport) {
    let mut table = Table::new(name, &["degree", "lhs", "rhs", "status"]);
    for r in &id.rows {
        let status = if r.holds() { "ok" } else { "FAIL" };
        table.push(vec![
            r.degree.to_string(),
            r.lhs.to_string(),
            r.rhs.to_string(),
            status.into(),
        ]);
    }
    report.tables.push(table);
    if let Some(r) = id.first_violation() {
        report.fail(Failure {
            check: name.into(),
            degree: Some(r.degree),
            lhs: r.lhs.to_string(),
            rhs: r.rhs.to_string(),
        });
    }
}

/// Compares the truncated expansions of two rational functions; a mismatch
/// with equal closed forms (or the reverse) is an arithmetic inconsistency.
fn cross_check(report: &mut RunReport, check: &str, a: &RationalFunction, b: &RationalFunction, order: usize) {
    let closed = a == b;
    let expanded = match (a.series(order), b.series(order)) {
        (Ok(x), Ok(y)) => x == y,
        _ => closed,
    };
    report.fact(&format!("{check}_series_agree_to_order_{order}"), expanded);
    if closed != expanded {
        report.fail(Failure {
            check: format!("{check}_series"),
            degree: None,
            lhs: a.to_string(),
            rhs: b.to_string(),
        });
    }
}

fn signed_table(
    fan: &SimplicialFan,
    psi: &FanAutomorphism,
    exec: Exec,
) -> Result<(GradedTrace, SignedBettiTable), IoError> {
    let t = graded_trace_with(fan, psi, None, exec)?;
    let table = signed_betti(&t)?;
    Ok((t, table))
}

fn centered(p: &HPolytope) -> Result<HPolytope, IoError> {
    let center = detect_central_symmetry(p).ok_or(PolytopeError::NotCentrallySymmetric)?;
    let shift: Vector = center.iter().map(|x| -x).collect();
    Ok(p.transform(&identity(p.dim()), &shift)?)
}

fn stats(report: &mut RunReport, path: &PathBuf, ctx: &Context) -> Result<(), IoError> {
    let src = read(report, path)?;
    let p = parse_polytope(&src, ctx.exec)?;
    report.fact("dim", p.dim());
    report.fact("facets", p.facets().len());
    report.fact("vertices", p.vertices().len());
    let f = f_vector(&p);
    report.fact("f_vector", list(&f));
    report.fact("simple", is_simple(&p));
    if is_simple(&p) {
        let h = h_vector(&p)?;
        report.fact("h_vector", list(&h));
        report.fact("h_palindromic", h.iter().eq(h.iter().rev()));
    }
    match detect_central_symmetry(&p) {
        Some(c) => report.fact("center", list(&c.iter().map(format_rational).collect::<Vec<_>>())),
        None => report.fact("center", "none"),
    }
    let mut table = Table::new("vertices", &["index", "point", "tight_facets"]);
    for (i, v) in p.vertices().iter().enumerate() {
        let pt: Vec<String> = v.point.iter().map(format_rational).collect();
        table.push(vec![i.to_string(), list(&pt), list(&v.tight)]);
    }
    report.tables.push(table);
    Ok(())
}

fn verify_stanley(report: &mut RunReport, path: &PathBuf, ctx: &Context) -> Result<(), IoError> {
    let src = read(report, path)?;
    let p = parse_polytope(&src, ctx.exec)?;
    crate::polytope::require_simple(&p)?;
    let p = centered(&p)?;
    let n = p.dim();
    let fan = normal_fan(&p)?;
    let psi = FanAutomorphism::negation(&fan)?;
    let (t, table) = signed_table(&fan, &psi, ctx.exec)?;
    report.fact("dim", n);
    report.fact("h_vector", list(&t.dims));
    report.fact("signed_poly", table.signed_poly().to_list_string());
    report.tables.push(trace_table("trace", &t));
    report.tables.push(betti_table("signed_betti", &table));
    identity_table(report, "stanley", &stanley_check(&table, n));

    let k = TorusRank::new(n as u32)?;
    let chi = chi_from_manifold(&table, k);
    report.fact("chi_theta_k_equals_n", &chi);
    if chi.value != RationalFunction::one() {
        report.fail(Failure {
            check: "chi_theta_equals_one".into(),
            degree: None,
            lhs: chi.to_string(),
            rhs: "1".into(),
        });
    }
    cross_check(report, "chi_theta", &chi.value, &RationalFunction::one(), ctx.order(n));
    Ok(())
}

struct MainData {
    table: SignedBettiTable,
    table0: SignedBettiTable,
    k: TorusRank,
    dim: usize,
}

fn both_sides(
    report: &mut RunReport,
    paths: (&PathBuf, &PathBuf, &PathBuf),
    ctx: &Context,
) -> Result<(MainData, crate::polytope::SliceReduction), IoError> {
    let p_src = read(report, paths.0)?;
    let i_src = read(report, paths.1)?;
    let s_src = read(report, paths.2)?;
    let p = parse_polytope(&p_src, ctx.exec)?;
    let inv = parse_involution(&i_src)?;
    let sub = parse_subtorus(&s_src)?;
    let red = slice_reduce(&p, &inv, &sub)?;
    report.fact("k", sub.rank());
    report.fact(
        "level",
        list(&red.level.iter().map(format_rational).collect::<Vec<_>>()),
    );
    report.fact("reduced_dim", red.polytope.dim());
    report.fact("reduced_f_vector", list(&f_vector(&red.polytope)));

    let fan = normal_fan(&p)?;
    let psi = FanAutomorphism::from_involution(&fan, &inv)?;
    let (t, table) = signed_table(&fan, &psi, ctx.exec)?;
    let fan0 = normal_fan(&red.polytope)?;
    let psi0 = FanAutomorphism::from_involution(&fan0, &red.involution)?;
    let (t0, table0) = signed_table(&fan0, &psi0, ctx.exec)?;
    report.tables.push(trace_table("manifold_trace", &t));
    report.tables.push(betti_table("manifold_signed_betti", &table));
    report.tables.push(trace_table("reduction_trace", &t0));
    report.tables.push(betti_table("reduction_signed_betti", &table0));
    Ok((
        MainData {
            table,
            table0,
            k: TorusRank::new(sub.rank() as u32)?,
            dim: p.dim(),
        },
        red,
    ))
}

fn verify_main(
    report: &mut RunReport,
    polytope: &PathBuf,
    involution: &PathBuf,
    subtorus: &PathBuf,
    ctx: &Context,
) -> Result<(), IoError> {
    let (d, _) = both_sides(report, (polytope, involution, subtorus), ctx)?;
    report.fact("manifold_signed", list(&d.table.signed_diffs()));
    report.fact("reduction_signed", list(&d.table0.signed_diffs()));
    identity_table(report, "main_identity", &verify_main_identity(&d.table, &d.table0, d.k));
    let lhs = chi_from_manifold(&d.table, d.k);
    let rhs = chi_from_reduction(&d.table0);
    report.fact("chi_manifold", &lhs);
    report.fact("chi_reduction", &rhs);
    if lhs != rhs {
        report.fail(Failure {
            check: "characters".into(),
            degree: None,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }
    cross_check(report, "characters", &lhs.value, &rhs.value, ctx.order(d.dim));
    Ok(())
}

fn reduce(
    report: &mut RunReport,
    paths: (&PathBuf, &PathBuf, &PathBuf),
    write_polytope: Option<&PathBuf>,
    write_involution: Option<&PathBuf>,
    ctx: &Context,
) -> Result<(), IoError> {
    let (d, red) = both_sides(report, paths, ctx)?;
    report.fact("reduction_signed", list(&d.table0.signed_diffs()));
    let mut facets = Table::new("reduced_facets", &["index", "normal", "offset"]);
    for (i, h) in red.polytope.facets().iter().enumerate() {
        let a: Vec<String> = h.normal.iter().map(format_rational).collect();
        facets.push(vec![i.to_string(), list(&a), format_rational(&h.offset)]);
    }
    report.tables.push(facets);
    let mut inv = Table::new("reduced_involution", &["row", "linear", "translation"]);
    for (i, r) in red.involution.linear().iter().enumerate() {
        let a: Vec<String> = r.iter().map(format_rational).collect();
        inv.push(vec![
            i.to_string(),
            list(&a),
            format_rational(&red.involution.translation()[i]),
        ]);
    }
    report.tables.push(inv);
    let write = |path: &PathBuf, text: String| {
        std::fs::write(path, text).map_err(|e| IoError::Read {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    };
    if let Some(path) = write_polytope {
        write(path, format_polytope(&red.polytope))?;
    }
    if let Some(path) = write_involution {
        write(path, format_involution(&red.involution))?;
    }
    Ok(())
}

fn trace(report: &mut RunReport, src: &TraceSource, ctx: &Context) -> Result<(), IoError> {
    let (fan, psi, h) = match src {
        TraceSource::Fan { fan, automorphism } => {
            let f_src = read(report, fan)?;
            let a_src = read(report, automorphism)?;
            let fan = parse_fan(&f_src)?;
            let psi = FanAutomorphism::new(&fan, parse_automorphism_matrix(&a_src)?)?;
            (fan, psi, None)
        }
        TraceSource::Polytope { polytope, involution } => {
            let p_src = read(report, polytope)?;
            let p = parse_polytope(&p_src, ctx.exec)?;
            let fan = normal_fan(&p)?;
            let psi = match involution {
                Some(path) => {
                    let i_src = read(report, path)?;
                    FanAutomorphism::from_involution(&fan, &parse_involution(&i_src)?)?
                }
                None if detect_central_symmetry(&p).is_some() => FanAutomorphism::negation(&fan)?,
                None => FanAutomorphism::identity(&fan),
            };
            (fan, psi, Some(h_vector(&p)?))
        }
    };
    report.fact("rank", fan.rank());
    report.fact("rays", fan.rays().len());
    report.fact("ray_permutation", list(psi.ray_permutation()));
    let (t, table) = signed_table(&fan, &psi, ctx.exec)?;
    report.fact("dims", list(&t.dims));
    report.tables.push(trace_table("trace", &t));
    report.tables.push(betti_table("signed_betti", &table));
    if let Some(h) = h {
        let dims: Vec<u64> = t.dims.iter().map(|&d| d as u64).collect();
        if dims != h {
            report.fail(Failure {
                check: "dims_equal_h_vector".into(),
                degree: None,
                lhs: list(&dims),
                rhs: list(&h),
            });
        }
    }
    if let Err(msg) = t.check_invariants() {
        report.fail(Failure {
            check: "trace_invariants".into(),
            degree: None,
            lhs: msg,
            rhs: String::new(),
        });
    }
    Ok(())
}

fn critical_table(comps: &[CriticalComponentRecord]) -> Table {
    let mut table = Table::new("critical", &["id", "index", "stab_rank", "series", "pair"]);
    for c in comps {
        let pair = match &c.pairing {
            Pairing::SelfFixed => "self".to_string(),
            Pairing::PairedWith(id) => id.clone(),
        };
        table.push(vec![
            c.id.clone(),
            c.index.to_string(),
            c.stab_rank.to_string(),
            format_series(&c.t_series),
            pair,
        ]);
    }
    table
}

fn morse(report: &mut RunReport, src: &MorseSource, ctx: &Context) -> Result<(), IoError> {
    let (zero, comps, table, k, dim): (
        ZeroLevelRecord,
        Vec<CriticalComponentRecord>,
        SignedBettiTable,
        TorusRank,
        usize,
    ) = match src {
        MorseSource::Polytope(path) => {
            let p_src = read(report, path)?;
            let p = parse_polytope(&p_src, ctx.exec)?;
            crate::polytope::require_simple(&p)?;
            let p = centered(&p)?;
            let (zero, comps) = full_torus_critical_data(&p)?;
            let fan = normal_fan(&p)?;
            let (_, table) = signed_table(&fan, &FanAutomorphism::negation(&fan)?, ctx.exec)?;
            let n = p.dim();
            let expected = RationalFunction::new(table.betti_poly(), Poly::binomial_factor(-1, 2).pow(n as u32))
                .map_err(crate::characters::CharacterError::from)?;
            let sum = full_torus_regular_sum(&comps);
            report.fact("full_torus_regular_sum", &sum);
            if sum != expected {
                report.fail(Failure {
                    check: "full_torus_regular_sum".into(),
                    degree: None,
                    lhs: sum.to_string(),
                    rhs: expected.to_string(),
                });
            }
            (zero, comps, table, TorusRank::new(n as u32)?, n)
        }
        MorseSource::Critical { crit, betti, rank } => {
            let c_src = read(report, crit)?;
            let (zero, comps, zero_src) = parse_critical_file(&c_src)?;
            report.input(&zero_src);
            let b_src = read(report, betti)?;
            let table = parse_betti_table(&b_src)?;
            let dim = table.top_degree() / 2;
            (zero, comps, table, TorusRank::new(*rank)?, dim)
        }
    };
    report.fact("k", k.get());
    report.fact("components", comps.len());
    report.tables.push(critical_table(&comps));
    report.tables.push(betti_table("zero_level", &zero.table0));
    report.tables.push(betti_table("manifold_signed_betti", &table));
    let order = ctx.order(dim);
    let check = perfection_check(&zero, &comps, &table, k, order)?;
    let mut t = Table::new(
        "perfection",
        &["rho", "counting", "target", "residue", "class", "series_consistent"],
    );
    for r in &check.rows {
        t.push(vec![
            r.rho.to_string(),
            r.counting.to_string(),
            r.target.to_string(),
            r.residue.to_string(),
            r.class.to_string(),
            r.series_consistent.to_string(),
        ]);
    }
    report.tables.push(t);
    report.fact("additive_in_rho", check.additive);
    report.fact("character_recovered", check.character_recovered);
    if let Some(r) = check.first_failure() {
        report.fail(Failure {
            check: format!("perfection_{}", r.rho),
            degree: None,
            lhs: r.counting.to_string(),
            rhs: r.target.to_string(),
        });
    }
    if !check.additive {
        report.fail(Failure {
            check: "additivity".into(),
            degree: None,
            lhs: String::new(),
            rhs: String::new(),
        });
    }
    if !check.character_recovered {
        report.fail(Failure {
            check: "character_from_counting".into(),
            degree: None,
            lhs: String::new(),
            rhs: String::new(),
        });
    }
    Ok(())
}

fn flag(report: &mut RunReport, n: Option<usize>, spec: Option<&PathBuf>, ctx: &Context) -> Result<(), IoError> {
    let spec = match (n, spec) {
        (_, Some(path)) => {
            let src = read(report, path)?;
            let s = parse_flag_spec(&src)?;
            if n.is_some_and(|n| n != s.n()) {
                return Err(IoError::Precondition(format!(
                    "n does not match the spec file (n = {})",
                    s.n()
                )));
            }
            s
        }
        (Some(n), None) => FlagSpec::standard(n)?,
        (None, None) => return Err(IoError::Precondition("give n or a spec file".into())),
    };
    let n = spec.n();
    report.fact("n", n);
    report.fact(
        "spectrum",
        list(&spec.spectrum().iter().map(format_rational).collect::<Vec<_>>()),
    );
    report.fact(
        "weights",
        list(&spec.weights().iter().map(format_rational).collect::<Vec<_>>()),
    );
    let compat = check_moment_compat(&spec);
    report.fact("moment_compatible", compat);
    if !compat {
        report.fail(Failure {
            check: "moment_compat".into(),
            degree: None,
            lhs: "false".into(),
            rhs: "true".into(),
        });
    }
    let t = coinvariant_trace(n, &SignedPermutation::theta(n), ctx.exec)?;
    let poly = trace_poly(&t);
    report.fact("dims", list(&t.dims));
    report.fact("trace_poly", &poly);
    report.tables.push(trace_table("trace", &t));
    let molien = theta_molien(n);
    report.fact("molien", &molien);
    if molien.as_poly() != Some(&poly) {
        report.fail(Failure {
            check: "molien".into(),
            degree: None,
            lhs: poly.to_string(),
            rhs: molien.to_string(),
        });
    }
    if let Err(msg) = t.check_invariants() {
        report.fail(Failure {
            check: "trace_invariants".into(),
            degree: None,
            lhs: msg,
            rhs: String::new(),
        });
    }
    let table = signed_betti(&t).map_err(|e| FlagError::Split(e.to_string()))?;
    report.tables.push(betti_table("signed_betti", &table));
    let k = TorusRank::new(1)?;
    let chi = chi_from_manifold(&table, k);
    report.fact("chi_theta", &chi);
    match solve_reduction_signature(&table, k) {
        Ok(pred) => {
            report.fact("prediction", &pred);
            let mut tbl = Table::new("prediction", &["degree", "signed"]);
            for (i, c) in pred.coeffs().iter().enumerate() {
                tbl.push(vec![i.to_string(), format_rational(c)]);
            }
            report.tables.push(tbl);
            if !pred.coeff(0).is_one() {
                report.fail(Failure {
                    check: "prediction_at_zero".into(),
                    degree: Some(0),
                    lhs: format_rational(&pred.coeff(0)),
                    rhs: "1".into(),
                });
            }
            cross_check(
                report,
                "chi_theta",
                &chi.value,
                &RationalFunction::from_poly(pred.clone()),
                ctx.order(n * (n - 1) / 2),
            );
        }
        Err(e) => report.fail(Failure {
            check: "divisibility".into(),
            degree: None,
            lhs: e.to_string(),
            rhs: String::new(),
        }),
    }
    Ok(())
}
