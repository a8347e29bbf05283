//! Command-line front end for the `choicewalk` library.
//!
//! The binary is a thin shell around [`run`]; everything else lives in
//! library modules so integration tests can drive the same machinery that
//! produces user-facing output:
//!
//! - [`config`]: the serializable [`config::RunConfig`] embedded in every
//!   output file,
//! - [`commands`]: one clap-free function per subcommand,
//! - [`output`]: table assembly, CSV/JSON emitters, float formatting,
//! - [`svg`]: deterministic hand-rolled line charts,
//! - [`cli`]: argument parsing, seed and worker resolution, exit codes.

pub mod cli;
pub mod commands;
pub mod config;
pub mod output;
pub mod svg;

pub use cli::{run, CliError};
pub use config::{RunConfig, DEFAULT_SEED};
