//! Compiles every code block in the mdbook guide as a doctest, so
//! `cargo test --doc` fails whenever the book drifts from the library.
//! One module per chapter keeps failure output traceable to its source.

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}

#[doc = include_str!("../../../book/src/graphs.md")]
mod graphs {}

#[doc = include_str!("../../../book/src/spectral.md")]
mod spectral {}

#[doc = include_str!("../../../book/src/transforms.md")]
mod transforms {}

#[doc = include_str!("../../../book/src/codec.md")]
mod codec {}

#[doc = include_str!("../../../book/src/metrics.md")]
mod metrics {}

#[doc = include_str!("../../../book/src/bench.md")]
mod bench {}
