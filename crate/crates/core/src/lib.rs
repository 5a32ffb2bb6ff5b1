//! Confusion-guided alignment (CGA) for source-free domain adaptation.
//!
//! A pretrained source classifier is adapted to an unlabeled target domain by
//! closing a loop over its own class-confusion structure:
//!
//! 1. **Confusion analysis** — estimate a directional class-confusion matrix
//!    from the model's soft predictions over the whole target set, and extract
//!    the ordered confusion pairs it implies ([`confusion`]).
//! 2. **Multi-prototype prompts** — render each confusion pair into a hybrid
//!    class text ("truck looks like a bus"), encode the texts with a
//!    vision-language model whose context prefix is learnable, and classify
//!    images against the max over each class's prompt group ([`prompts`]).
//! 3. **Feature alignment** — build per-pair feature-center banks for both
//!    model views over the source feature space, project batches onto them
//!    with residual attention heads, and align the two projections
//!    contrastively ([`alignment`]).
//! 4. **Label fusion** — fuse the two predictions into a gradient-frozen
//!    reference distribution that supervises every branch ([`fusion`]).
//!
//! The [`engine`] module orchestrates the per-epoch rebuild of all of the
//! above plus the two-step training loop; [`models`] provides the adapter
//! interfaces and a deterministic toy backbone pair; [`data`] and [`config`]
//! hold the synthetic two-domain generator and run configuration.

pub mod alignment;
pub mod autodiff;
pub mod config;
pub mod confusion;
pub mod data;
pub mod engine;
pub mod error;
pub mod fusion;
pub mod models;
pub mod prompts;
pub mod report;
pub mod stats;

pub use error::{Error, Result};
