//! Reusable pieces of the `teesplit` command-line tool: dimensioned-value
//! parsing, Touchstone and CSV serialization, and design persistence and
//! artwork export. The binary in `main.rs` is a thin argument layer over
//! these modules and the core library.

pub mod csvout;
pub mod geometry;
pub mod touchstone;
pub mod units;
