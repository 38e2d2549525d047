//! Library side of the `nielsen` command-line tool.

pub mod commands;
pub mod expr;
