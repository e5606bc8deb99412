//! Composer-style classification of symbolic music.
//!
//! The crate covers the whole path from Standard MIDI Files to a model
//! comparison:
//!
//! - [`midi`]: SMF parsing, note extraction, and a format-0 writer.
//! - [`features`]: eight melodic and harmonic descriptors per piece.
//! - [`gbt`]: second-order gradient-boosted trees with exact greedy splits.
//! - [`bpnn`]: a one-hidden-layer sigmoid network trained by backpropagation.
//! - [`eval`]: confusion-based metrics, ROC curves, and AUC.
//! - [`pipeline`]: dataset scanning, splitting, normalization, the synthetic
//!   corpus generator, and the end-to-end comparison.

pub mod bpnn;
pub mod eval;
pub mod features;
pub mod gbt;
pub mod midi;
pub mod numfmt;
pub mod pipeline;

