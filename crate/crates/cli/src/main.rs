//! `canontop`: run the library's verifications from the command line.
//!
//! Every command prints one JSON document on stdout and a one-line summary on
//! stderr. Exit status is 0 when every check in the report passes, 1 when a
//! check fails, and 2 for malformed input.

mod commands;
mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use canontop::bergman::Mode;

#[derive(Parser, Debug)]
#[command(
    name = "canontop",
    version,
    about = "Checks for canonical topologies induced by group actions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the matrix identities behind the finest ring topology.
    VerifyRingIdentities {
        /// `free`, `zmod:N` or `mat:D:zmod:N`.
        #[arg(long, default_value = "free")]
        ring: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random assignments per identity over finite rings.
        #[arg(long, default_value_t = 1000)]
        samples: u64,
    },
    /// Build and verify the witness that a_{1/3} − a_{2/3} lies in every basic neighbourhood.
    SeparationWitness {
        /// Uniform ball radius, as `p/q`.
        #[arg(long, required_unless_present = "fixture")]
        epsilon: Option<String>,
        #[command(flatten)]
        coeffs: CoeffArgs,
        /// A previous report (or `{group, a, spec}`) to rebuild or re-verify.
        #[arg(long, conflicts_with = "epsilon")]
        fixture: Option<String>,
        /// Largest grid size n allowed.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Build and verify an η for the Cantor-cube claim.
    CantorClaim {
        /// An instance, or a previous report to re-verify.
        #[arg(long)]
        fixture: Option<String>,
        /// Seed for a random instance when no fixture is given.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_dom: usize,
        #[arg(long, default_value_t = 8)]
        max_support: usize,
    },
    /// Decide membership in the set U built from a ℚ-indexed family.
    BergmanMember {
        #[command(flatten)]
        group: GroupArg,
        /// The family as JSON, or a previous report.
        #[arg(long)]
        fixture: String,
        /// Element index; optional when the fixture is a previous report.
        #[arg(long)]
        element: Option<usize>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Smallest neighbourhood of e generated by the conjugates of a set.
    MinimalNbhd {
        #[command(flatten)]
        group: GroupArg,
        /// Comma-separated element indices.
        #[arg(long, value_delimiter = ',')]
        set: Vec<usize>,
        #[arg(long, value_enum, default_value_t = ModeArg::Group)]
        mode: ModeArg,
    },
    /// Orbits of the pointwise stabilizer of a set of points.
    Orbits {
        #[command(flatten)]
        action: ActionArgs,
        /// Comma-separated points to fix.
        #[arg(long, value_delimiter = ',')]
        fixed: Vec<usize>,
    },
    /// Exhaustive check of the four properties of τ(X,G).
    CheckTau {
        #[command(flatten)]
        action: ActionArgs,
        /// Comma-separated kernel N; defaults to the fixture's.
        #[arg(long, value_delimiter = ',', conflicts_with = "all_kernels")]
        kernel: Option<Vec<usize>>,
        /// Run once for every normal subgroup N.
        #[arg(long)]
        all_kernels: bool,
    },
    /// Number of orbits of G on n-tuples of points.
    CountOrbits {
        #[command(flatten)]
        action: ActionArgs,
        #[arg(long, default_value_t = 2)]
        power: u32,
        /// Largest number of tuples to enumerate.
        #[arg(long)]
        budget: Option<u128>,
    },
}

#[derive(Args, Debug)]
pub struct CoeffArgs {
    /// `Z`, `Z2`, `S3`, any other named finite group, or `table:FILE`.
    #[arg(long, default_value = "Z")]
    pub group: String,
    /// Coefficient a; an integer for `Z`, an element index otherwise. Defaults to 1.
    #[arg(long, allow_hyphen_values = true)]
    pub element: Option<String>,
}

#[derive(Args, Debug)]
pub struct GroupArg {
    /// A named finite group or `table:FILE`.
    #[arg(long)]
    pub group: Option<String>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct ActionArgs {
    /// Action fixture JSON: `{group, action, kernel?, point_group?}`.
    #[arg(long)]
    pub fixture: Option<String>,
    /// A built-in action, e.g. `S3 natural`; see `--action list`.
    #[arg(long)]
    pub action: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Group,
    Semigroup,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Group => Mode::Group,
            ModeArg::Semigroup => Mode::Semigroup,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli.command) {
        Ok(out) => {
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout(), "{}", out.json);
            eprintln!("{}", out.summary);
            ExitCode::from(if out.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
