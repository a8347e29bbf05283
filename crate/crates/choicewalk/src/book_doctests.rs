//! Compiles and runs the guide's code samples as doc-tests.
//!
//! mdBook renders `book/` but cannot test code blocks against this crate,
//! so each chapter is included here as a documented item and `cargo test
//! --doc` exercises every `rust` fence. One module per chapter keeps test
//! failures attributable to the chapter they came from.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/walks.md")]
pub mod walks {}

#[doc = include_str!("../../../book/src/families.md")]
pub mod families {}

#[doc = include_str!("../../../book/src/policies.md")]
pub mod policies {}

#[doc = include_str!("../../../book/src/estimation.md")]
pub mod estimation {}

#[doc = include_str!("../../../book/src/exact.md")]
pub mod exact {}

#[doc = include_str!("../../../book/src/dichotomy.md")]
pub mod dichotomy {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
