//! Constant-composition distribution matching via subset ranking.
//!
//! The crate provides
//! - exact combinatorics ([`exactint`]) and subset (un)ranking ([`subsetrank`]),
//! - binary and nonbinary fixed-length matchers ([`matchers`]),
//! - the parallel-amplitude and bit-level architectures ([`architectures`]),
//! - target distributions, quantization and AWGN rates ([`shaping`]),
//! - degree-of-serialism accounting and experiment sweeps ([`analysis`]).
//!
//! Data-parallel loops honour an [`Execution`] policy; rayon is used only
//! when the `parallel` feature is enabled.

pub mod analysis;
pub mod architectures;
pub mod composition;
pub mod error;
pub mod exactint;
pub mod exec;
pub mod matchers;
pub mod shaping;
pub mod subsetrank;

pub use composition::Composition;
pub use error::{Error, Result};
pub use exec::Execution;
pub use matchers::{BinaryCodec, BitWord, NbEnumCodec, RankMethod, ShapedSequence};
pub use subsetrank::{Order, Rank, Subset};
