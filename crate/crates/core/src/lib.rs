//! Systematic rateless erasure code with logarithmic-degree parities.
//!
//! The generator matrix is `G = [I | P]` over GF(2^m). Every parity column
//! combines about `c log k` input symbols chosen uniformly with replacement,
//! with uniform coefficients. Any column is generated on its own from the
//! code's master seed, so the code is rateless. Decoding is maximum
//! likelihood (Gaussian elimination after peeling systematic symbols), and
//! any single lost symbol can be rebuilt from one parity and its footprint.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod code;
pub mod codec;
pub mod galois;
pub mod linalg;
pub mod matching;
pub mod repair;
pub mod rng;

pub use code::{Code, CodeConfig, Column, ColumnId, LogBase, ParityColumn, Ratio};
pub use codec::{decode, encode_symbol, CodecError, DecodeReport, EncodedSymbol, Encoder, SourceBlock};
pub use galois::{Field, FieldElement, FieldSpec, GaloisError};
pub use linalg::{rank, solve, GfMatrix, LinalgError};
pub use matching::BipartiteGraph;
