//! Library surface of the command-line front end: the argument-file DSL
//! and the command dispatcher. The `credence` binary is a thin wrapper.

pub mod dsl;
pub mod run;
