//! Command-line front end for `gpt-phase`.

pub mod app;
pub mod commands;
pub mod error;
pub mod report;
pub mod theory_file;

pub use app::{run, Outcome};
