//! File formats and the batch driver for the word segmentation pipeline.
//!
//! Everything algorithmic lives in `wseg-core`; this crate adds the binary
//! PGM/PPM codecs, the "WSGT 1" ground-truth sidecar format, the flat
//! key/value configuration files, and the `segment` / `eval` / `synth`
//! subcommand runners used by the `wseg` binary.

pub mod config;
pub mod pnm;
pub mod run;
pub mod truth;

pub use run::{CliError, EvalArgs, SegmentArgs, SynthArgs};
