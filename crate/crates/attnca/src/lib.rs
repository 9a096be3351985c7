//! Attention-based neural cellular automata.
//!
//! A cell grid (one state vector per image patch) is evolved by repeatedly
//! applying a learned update rule: a single pre-LN Transformer block whose
//! self-attention is restricted to each cell's neighbourhood by index
//! gathering, followed by an MLP head that decodes per-cell update vectors.
//! The crate bundles everything needed to train and probe such a rule at
//! desk scale:
//!
//! - [`autodiff`]: a dense-tensor engine with reverse-mode differentiation
//!   on a per-rollout tape,
//! - [`model`]: cell grids, tokenization, positional encodings, localized
//!   multi-head self-attention and the update rule itself,
//! - [`corruption`]: patch-noise masking and the curriculum that unlocks
//!   harder configurations during training,
//! - [`trainer`]: pool-sampling training with AdamW, cosine annealing,
//!   per-parameter gradient normalization, gradient checkpointing and a
//!   fusion/mitosis rollout variant,
//! - [`evaluation`]: PSNR/SSIM, linear probes, damage/stability/update-rate
//!   analyses, hidden-state PCA and spatial interpolation,
//! - [`data`]: IDX and PPM/PGM codecs, a synthetic shape corpus and the
//!   run configuration format.

pub mod autodiff;
pub mod corruption;
pub mod data;
pub mod evaluation;
pub mod model;
pub mod trainer;

/// Crate-wide error type.
///
/// The CLI maps these onto process exit codes: configuration and contract
/// problems are usage errors, decode failures are data errors, and
/// non-finite training state is a divergence.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch in {op}: {detail}")]
    Shape { op: &'static str, detail: String },
    #[error("index out of range in {op}: {detail}")]
    Index { op: &'static str, detail: String },
    #[error("contract violation in {op}: {detail}")]
    Contract { op: &'static str, detail: String },
    #[error("config error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("numeric divergence: {0}")]
    Divergence(String),
}

impl Error {
    pub(crate) fn shape(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Shape { op, detail: detail.into() }
    }
    pub(crate) fn index(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Index { op, detail: detail.into() }
    }
    pub(crate) fn contract(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Contract { op, detail: detail.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
