//! Command-line driver: bar homology reports, operation matrices, axiom
//! verification, and the bundled reproduction suites.
//!
//! Exit codes: 0 success, 2 validation failure (including failed
//! verifications), 3 cap exceeded, 4 internal invariant failure.

mod doc;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hhgft::fingroup::FiniteGroup;
use hhgft::{Caps, Context, Error, ErrorClass};

#[derive(Parser)]
#[command(
    name = "hhgft",
    version,
    about = "Exact mod-2 h-graph field theory operations for finite groups"
)]
struct Cli {
    /// Enumeration budget: caps both the functors per representation
    /// variety and the bar tuples per boundary pass.
    #[arg(long, global = true)]
    cap: Option<u64>,

    /// Directory for the on-disk homology-basis cache.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Seed for randomized property suites.  The bundled suites are
    /// deterministic; the flag is accepted for interface stability.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output format.
    #[arg(long, global = true, default_value = "text", value_parser = ["text"])]
    format: String,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classifying-space homology: dimensions and representative cycles.
    Homology {
        /// Group specification: `cyclic n`, `symmetric n`,
        /// `product <spec> <spec>`, or `table [[...],[...]]`.
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,

        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },

    /// Run the `operate` requests of an input document.
    Operate {
        /// Path to the input document.
        document: PathBuf,
    },

    /// Run the axiom-check requests of an input document.
    Verify {
        /// Path to the input document.
        document: PathBuf,
    },

    /// Re-run a bundled calculation and report expected vs computed.
    Reproduce {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Subcommand)]
enum Suite {
    /// Reflection-family operation over Z/2 against the shuffle
    /// Pontryagin oracle.
    #[command(name = "thm9_1")]
    Thm91 {
        /// Largest i and j in the (i, j) table.
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },

    /// Composed reflection families over Z/2 against the iterated
    /// Pontryagin oracle.
    #[command(name = "cor9_7")]
    Cor97 {
        /// Number of composed families (desk scale supports 2).
        #[arg(long, default_value_t = 2)]
        n: usize,

        /// Bound on deg(a1) + deg(a2) + deg(b).
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },

    /// Commutativity, associativity, and the counit axiom on the point
    /// state space.
    Frobenius {
        /// Group specification (default: cyclic 2, cyclic 4, symmetric 3).
        #[arg(long, num_args = 1..)]
        group: Option<Vec<String>>,

        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },

    /// Pants operation on the circle over Z/2: direct vs the wedge
    /// factorization, commutativity, associativity.
    #[command(name = "loop_product")]
    LoopProduct {
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            let (tag, code) = match e.class() {
                ErrorClass::Validation => ("validation", 2),
                ErrorClass::Cap => ("cap", 3),
                ErrorClass::Internal => ("internal", 4),
            };
            eprintln!("error[{tag}]: {e}");
            ExitCode::from(code)
        }
    }
}

fn read_document(ctx: &Context, path: &PathBuf) -> hhgft::Result<doc::Document> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::ValidationFailed(format!("cannot read {}: {e}", path.display())))?;
    doc::parse_document(&text, &ctx.caps)
}

fn run(cli: Cli) -> hhgft::Result<bool> {
    let mut caps = Caps::default();
    if let Some(cap) = cli.cap {
        caps.functor_enum = cap;
        caps.bar_tuple_budget = cap;
    }
    let mut ctx = Context::with_caps(caps);
    ctx.cache_dir = cli.cache_dir;
    match cli.cmd {
        Cmd::Homology { spec, max_degree } => {
            let label = spec.join(" ");
            let group = doc::parse_group_spec(0, &spec, &ctx.caps)?;
            print!("{}", report::homology_report(&ctx, &label, &group, max_degree)?);
            Ok(true)
        }
        Cmd::Operate { document } => {
            let parsed = read_document(&ctx, &document)?;
            print!("{}", report::run_operate(&ctx, &parsed)?);
            Ok(true)
        }
        Cmd::Verify { document } => {
            let parsed = read_document(&ctx, &document)?;
            let (text, pass) = report::run_verify(&ctx, &parsed)?;
            print!("{text}");
            Ok(pass)
        }
        Cmd::Reproduce { suite } => {
            let (text, pass) = match suite {
                Suite::Thm91 { max_degree } => report::reproduce_thm91(&ctx, max_degree)?,
                Suite::Cor97 { n, max_degree } => {
                    if n != 2 {
                        return Err(Error::ValidationFailed(format!(
                            "n = {n} is outside the supported desk scale (only n = 2)"
                        )));
                    }
                    report::reproduce_cor97(&ctx, max_degree)?
                }
                Suite::Frobenius { group, max_degree } => {
                    let groups = match group {
                        Some(spec) => {
                            vec![(spec.join(" "), doc::parse_group_spec(0, &spec, &ctx.caps)?)]
                        }
                        None => vec![
                            ("cyclic 2".to_string(), FiniteGroup::cyclic(2)),
                            ("cyclic 4".to_string(), FiniteGroup::cyclic(4)),
                            ("symmetric 3".to_string(), FiniteGroup::symmetric(3)),
                        ],
                    };
                    report::reproduce_frobenius(&ctx, &groups, max_degree)?
                }
                Suite::LoopProduct { max_degree } => {
                    report::reproduce_loop_product(&ctx, max_degree)?
                }
            };
            print!("{text}");
            Ok(pass)
        }
    }
}
