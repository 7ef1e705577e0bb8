//! The narrative guide, embedded chapter by chapter.
//!
//! The book sources live in `book/` at the repository root (`mdbook build
//! book` renders them). Each chapter is included here as a module's
//! documentation so that every code snippet in the book compiles and runs
//! under `cargo test`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/codes.md")]
pub mod codes {}

#[doc = include_str!("../../../book/src/channel.md")]
pub mod channel {}

#[doc = include_str!("../../../book/src/list-decoding.md")]
pub mod list_decoding {}

#[doc = include_str!("../../../book/src/codebook-probability.md")]
pub mod codebook_probability {}

#[doc = include_str!("../../../book/src/soft-output.md")]
pub mod soft_output {}

#[doc = include_str!("../../../book/src/turbo-product.md")]
pub mod turbo_product {}

#[doc = include_str!("../../../book/src/channel-estimation.md")]
pub mod channel_estimation {}

#[doc = include_str!("../../../book/src/simulation.md")]
pub mod simulation {}
