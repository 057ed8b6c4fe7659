//! Command-line front end for `cocycle-core`: configuration loading, a rayon
//! executor, and CSV/JSON emission with a `run.json` manifest per run.

#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod exec;
pub mod output;

pub use cli::main_with_args;
pub use exec::Pool;
