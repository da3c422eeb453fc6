use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use signed_betti::exec::Exec;
use signed_betti::io::{run, Command, Context, MorseSource, TraceSource};

/// Signed Betti numbers of torus spaces with an anti-compatible involution,
/// verified against their symplectic reductions.
///
/// Exit status: 0 when every check holds, 1 when a check is violated, 2 on
/// malformed or inapplicable input.
#[derive(Parser, Debug)]
#[command(name = "signed-betti", version)]
struct Cli {
    /// Write a machine-readable TSV report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,

    /// Order of the power-series cross-checks (default 2*dim+10).
    #[arg(long, global = true, value_name = "N")]
    expand_order: Option<usize>,

    /// Run every stage on the current thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// f- and h-vectors, simplicity and central symmetry of a polytope.
    Stats { polytope: PathBuf },
    /// Signed Betti numbers of a symmetric toric variety against binomials.
    VerifyStanley { polytope: PathBuf },
    /// Both sides of the reduction identity for a toric variety, an
    /// involution of its polytope and a subtorus.
    VerifyMain {
        polytope: PathBuf,
        involution: PathBuf,
        subtorus: PathBuf,
    },
    /// The reduced polytope, its involution and signed Betti numbers.
    Reduce {
        polytope: PathBuf,
        involution: PathBuf,
        subtorus: PathBuf,
        /// Save the reduced polytope in polytope file format.
        #[arg(long, value_name = "PATH")]
        write_polytope: Option<PathBuf>,
        /// Save the reduced involution in involution file format.
        #[arg(long, value_name = "PATH")]
        write_involution: Option<PathBuf>,
    },
    /// Graded trace of a fan automorphism on cohomology.
    Trace(TraceArgs),
    /// Morse counting series and perfection in all coefficient systems.
    Morse(MorseArgs),
    /// Trace of the involution on the complete flag manifold and the
    /// predicted signature of its circle reduction.
    Flag {
        /// Number of eigenvalues (defaults to the spec file's).
        n: Option<usize>,
        /// File with "spectrum ..." and "weights ..." lines.
        #[arg(long, value_name = "PATH")]
        spec: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = true)]
struct TraceArgs {
    /// Fan file (`rank n`, ray lines, `c:` cone lines).
    #[arg(long, requires = "automorphism", conflicts_with = "polytope")]
    fan: Option<PathBuf>,
    /// Integer matrix of an involution preserving the fan.
    #[arg(long, requires = "fan")]
    automorphism: Option<PathBuf>,
    /// Polytope whose normal fan is used; the involution defaults to -id
    /// for symmetric polytopes and the identity otherwise.
    #[arg(long)]
    polytope: Option<PathBuf>,
    /// Affine involution of the polytope.
    #[arg(long, requires = "polytope")]
    involution: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = true)]
struct MorseArgs {
    /// Symmetric simple polytope: critical data computed for the full torus.
    #[arg(long, conflicts_with_all = ["crit", "betti"])]
    polytope: Option<PathBuf>,
    /// Critical-data file.
    #[arg(long, requires_all = ["betti", "rank"])]
    crit: Option<PathBuf>,
    /// Signed Betti table of the manifold.
    #[arg(long, requires = "crit")]
    betti: Option<PathBuf>,
    /// Rank of the acting torus.
    #[arg(long, requires = "crit")]
    rank: Option<u32>,
}

fn to_command(cmd: Cmd) -> Command {
    match cmd {
        Cmd::Stats { polytope } => Command::Stats { polytope },
        Cmd::VerifyStanley { polytope } => Command::VerifyStanley { polytope },
        Cmd::VerifyMain {
            polytope,
            involution,
            subtorus,
        } => Command::VerifyMain {
            polytope,
            involution,
            subtorus,
        },
        Cmd::Reduce {
            polytope,
            involution,
            subtorus,
            write_polytope,
            write_involution,
        } => Command::Reduce {
            polytope,
            involution,
            subtorus,
            write_polytope,
            write_involution,
        },
        Cmd::Trace(a) => Command::Trace(match (a.fan, a.automorphism, a.polytope) {
            (Some(fan), Some(automorphism), _) => TraceSource::Fan { fan, automorphism },
            (_, _, Some(polytope)) => TraceSource::Polytope {
                polytope,
                involution: a.involution,
            },
            _ => unreachable!("clap enforces one source"),
        }),
        Cmd::Morse(a) => Command::Morse(match (a.polytope, a.crit, a.betti, a.rank) {
            (Some(p), ..) => MorseSource::Polytope(p),
            (None, Some(crit), Some(betti), Some(rank)) => MorseSource::Critical { crit, betti, rank },
            _ => unreachable!("clap enforces one source"),
        }),
        Cmd::Flag { n, spec } => Command::Flag { n, spec },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let ctx = Context {
        expand_order: cli.expand_order,
        exec: if cli.sequential {
            Exec::Sequential
        } else {
            Exec::default()
        },
    };
    let report = run(&to_command(cli.command), &ctx);
    print!("{}", report.to_human());
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, report.to_tsv()) {
            eprintln!("cannot write report {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(report.verdict.exit_code())
}
