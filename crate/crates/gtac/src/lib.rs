//! Graph-based transform audio compression.
//!
//! A frame of audio samples is modeled as a line graph, the eigenvectors of
//! the graph Laplacian form an orthonormal analysis basis, and compression
//! keeps only the largest-magnitude coefficients of each frame. The same
//! pipeline runs with classical bases — DCT types I through IV and the
//! Walsh-Hadamard transform — so the graph transforms can be benchmarked
//! against them on PSNR and energy-retained metrics.
//!
//! ```
//! use gtac::codec::{compress_signal, decompress_signal, CodecConfig};
//! use gtac::transforms::{basis_for, TransformKind};
//! use gtac::Signal;
//!
//! let samples: Vec<f64> = (0..256).map(|i| (0.07 * i as f64).sin() * 0.8).collect();
//! let signal = Signal::new(samples, 8000)?;
//!
//! let config = CodecConfig::new(TransformKind::Gt2, 64, 4)?;
//! let basis = basis_for(config.kind(), config.frame_size())?;
//! let stream = compress_signal(&signal, &config, &basis)?;
//! let reconstructed = decompress_signal(&stream, &basis)?;
//!
//! assert_eq!(reconstructed.len(), signal.len());
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! The `book/` directory holds a longer guide; its code snippets compile
//! and run as part of `cargo test --doc`.

pub mod audio_io;
pub mod bench;
pub mod codec;
pub mod graph;
pub mod mat;
pub mod metrics;
pub mod spectral;
pub mod transforms;

pub use audio_io::Signal;
pub use codec::{CodecConfig, CompressedStream};
pub use transforms::{basis_for, Coefficients, OrthonormalBasis, TransformKind};

// Book chapters double as doctests so the guide can never drift from the
// library. See book/src/*.md.
#[cfg(doctest)]
mod book;
