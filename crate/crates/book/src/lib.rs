//! The guide in `book/`, compiled so that `cargo test` runs every listing.
//!
//! One module per chapter, so a failing doctest names its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/pgm.md")]
pub mod pgm {}

#[doc = include_str!("../../../book/src/wavelet.md")]
pub mod wavelet {}

#[doc = include_str!("../../../book/src/payload.md")]
pub mod payload {}

#[doc = include_str!("../../../book/src/codec.md")]
pub mod codec {}

#[doc = include_str!("../../../book/src/metrics.md")]
pub mod metrics {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/benchmarking.md")]
pub mod benchmarking {}
