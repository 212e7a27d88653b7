//! Compiles the guide's code blocks as doc-tests, one module per chapter,
//! so `cargo test` keeps the book in sync with the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/lattice.md")]
pub mod lattice {}
#[doc = include_str!("../../../book/src/series.md")]
pub mod series {}
#[doc = include_str!("../../../book/src/hilbert.md")]
pub mod hilbert {}
#[doc = include_str!("../../../book/src/positivity.md")]
pub mod positivity {}
#[doc = include_str!("../../../book/src/picard.md")]
pub mod picard {}
#[doc = include_str!("../../../book/src/bps.md")]
pub mod bps {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
