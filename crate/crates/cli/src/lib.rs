//! Command-line front end, JSON/CSV file formats, and report rendering
//! for the witness-bound library.
//!
//! Subcommands map one-to-one onto library operations: `bound`,
//! `verify-witness`, `improve`, `corollary`, `oracle max-b`, and the
//! `mub` group (`certify-fab`, `sweep`, `optimize-c`). Every report
//! embeds the tolerance set it was produced with, and identical
//! invocations (including seed and parallelism) produce byte-identical
//! output.
//!
//! Exit codes: 0 success or verdict true, 2 verification failed or
//! verdict inconclusive, 3 infeasible or not converged, 64 usage error.

pub mod args;
pub mod io;
pub mod render;
pub mod run;

pub use run::{run_from_args, EXIT_INCONCLUSIVE, EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE};
