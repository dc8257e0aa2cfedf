//! Text format and JSON helpers behind the `smb` binary.

pub mod format;
pub mod json;

pub use format::{parse_algebra, parse_identity, parse_law, parse_quasiidentity, parse_term, print_algebra, ParseError};
