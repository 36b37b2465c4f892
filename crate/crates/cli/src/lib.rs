//! Orchestration behind the `khoxotic` binary: each `cmd_*` reads its
//! inputs, consults the cache and returns a reproducible [`Report`].

pub mod cache;
pub mod commands;
pub mod guard;
pub mod report;

pub use commands::{
    cmd_cp2_map, cmd_export_link, cmd_homology, cmd_movie_check, cmd_theorem1, cmd_torus_table, cmd_verify_hs,
    CliError, DiskArgs, Options, Theorem1Args,
};
pub use report::{Outcome, Report};
