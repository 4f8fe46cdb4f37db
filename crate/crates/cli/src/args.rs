//! Argument surface. Phases (not complex literals) parameterize `a` and
//! `b` so unimodularity never depends on parsing precision; seeds
//! default to a fixed value, never the clock.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const DEFAULT_SEED: u64 = 7;

#[derive(Parser, Debug)]
#[command(
    name = "delsarte",
    about = "Witness-function bounds on difference-avoiding sets in finite abelian groups, \
             their two-witness refinement, and the 6x6 Fourier-family non-extendability \
             certificate",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Absolute tolerance for "real", "nonnegative" and "zero" checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format; `csv` only applies to `mub sweep`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    /// Worker threads for `mub sweep` (output order is deterministic
    /// regardless).
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,

    /// Seed for the multistart searches; fixed default, never
    /// time-based.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Optimal-witness bound for a group and forbidden set.
    Bound {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Check a witness function supplied as a function JSON file.
    VerifyWitness {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Function JSON ({"re": [...], "im": [...]}) for h.
        #[arg(long)]
        witness: PathBuf,
    },
    /// Two-witness improvement: verify a supplied K or synthesize one
    /// for the prescribed set.
    Improve {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Function JSON for h; the LP-optimal witness when omitted.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Function JSON for K; synthesized from the prescribed set
        /// when omitted.
        #[arg(long)]
        second_witness: Option<PathBuf>,
        /// Prescribed set C, same element syntax as --forbidden.
        #[arg(long)]
        prescribed: Option<String>,
    },
    /// Exclusion test for pinned points under a tight integer bound.
    Corollary {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Pinned elements, same element syntax as --forbidden.
        #[arg(long)]
        pinned: String,
        /// Function JSON for h (the witness K was built against); the
        /// LP-optimal witness when omitted. The null-set conditions on K
        /// are relative to this h.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Function JSON for K (already normalized to sum 1 over the
        /// pinned points).
        #[arg(long)]
        second_witness: PathBuf,
        /// The integer bound m; the rounded LP bound when omitted.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Unbiased-bases toolkit.
    #[command(subcommand)]
    Mub(MubCommand),
    /// Exhaustive oracles for small groups.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand, Debug)]
pub enum MubCommand {
    /// Full non-extendability certificate for one parameter pair.
    CertifyFab {
        /// Phase of a, i.e. a = exp(i·a_phase).
        #[arg(long, default_value_t = 0.0)]
        a_phase: f64,
        /// Phase of b.
        #[arg(long, default_value_t = 0.0)]
        b_phase: f64,
        /// Spot-check sample count (corroboration only).
        #[arg(long, default_value_t = 4)]
        samples: usize,
        /// Also write the 6x6 family member used, as matrix JSON.
        #[arg(long)]
        matrix_out: Option<PathBuf>,
    },
    /// Certificates over a phase grid; CSV of margins and verdicts.
    Sweep {
        /// Grid resolution per axis.
        #[arg(long, default_value_t = 24)]
        grid: usize,
        /// Spot-check samples per grid point.
        #[arg(long, default_value_t = 1)]
        samples: usize,
    },
    /// The constrained minimum: numeric optimizer vs closed form.
    OptimizeC,
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Exhaustive maximum difference-avoiding set (group order <= 24).
    MaxB {
        #[command(flatten)]
        instance: InstanceArgs,
    },
}

/// A group plus forbidden set, inline or from JSON files.
#[derive(Args, Debug)]
pub struct InstanceArgs {
    /// Cyclic orders inline, e.g. "6" or "2x2x3".
    #[arg(long, conflicts_with = "group_file")]
    pub group: Option<String>,
    /// Group JSON file ({"cyclic_orders": [6]}).
    #[arg(long)]
    pub group_file: Option<PathBuf>,
    /// Forbidden elements inline: coordinates comma-separated, elements
    /// semicolon-separated, e.g. "1,4" on a cyclic group or "0,1;1,1"
    /// on a rank-2 group. 0 is always included.
    #[arg(long, conflicts_with = "forbidden_file")]
    pub forbidden: Option<String>,
    /// Forbidden-set JSON file ({"members": [[1],[5]]}).
    #[arg(long)]
    pub forbidden_file: Option<PathBuf>,
}
