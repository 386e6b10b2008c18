//! Library half of the `sl2dvr` command-line tool: subcommand bodies and the
//! numbered acceptance suites, shared by the binary and the integration tests.

pub mod commands;
pub mod suites;
