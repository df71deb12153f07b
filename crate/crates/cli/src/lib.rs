//! File format and subcommands behind the `bisim` binary.

pub mod commands;
pub mod document;

pub use commands::{run, Cli, CliError, Command};
pub use document::{MdpDocument, FORMAT_VERSION};
