//! Command-line front end: expression parsing and the `ffr` subcommands.

mod app;
mod parse;

pub use app::{run, Outcome};
pub use parse::{parse_element, parse_generator, parse_uelement, ParseError};
