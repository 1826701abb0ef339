//! Unsupervised word and sentence embeddings, string and vector similarity
//! metrics, and the evaluation harness for sentence-pair similarity
//! benchmarks.
//!
//! The pipeline runs from raw text ([`corpus`]) through a vocabulary
//! ([`vocab`]) to trained tables ([`train`], [`model`]), sentence vectors
//! ([`sentence`]), similarity scores ([`metrics`]) and correlation-based
//! evaluation with optional linear fusion ([`eval`]).

pub mod cli;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod fmt;
pub mod metrics;
pub mod model;
pub mod sentence;
pub mod train;
pub mod vocab;

pub use error::{Error, Result};
pub use model::{Algorithm, EmbeddingModel, Matrix, PvCombine, TrainConfig};
