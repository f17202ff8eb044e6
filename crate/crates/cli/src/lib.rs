//! Library surface of the command-line front end: the fixture format,
//! workspace resolution, and command dispatch. The binary in `main.rs` is a
//! thin argument-parsing wrapper over this.

pub mod commands;
pub mod error;
pub mod export;
pub mod format;
pub mod workspace;
