//! Core algorithms for segmenting handwritten document pages directly into
//! words.
//!
//! The pipeline smears ink by thresholding an exact Euclidean distance
//! transform of the page, labels the smeared regions, and extracts one word
//! per region:
//!
//! gray page -> Gaussian blur -> Otsu binarization -> squared EDT ->
//! 0-255 distance image -> threshold at alpha -> connected components ->
//! (border-component slicing) -> word extraction -> join repair
//!
//! This crate is `no_std` (with `alloc`) and performs no I/O; file formats
//! and the command-line driver live in the companion `wseg` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ccl;
pub mod edt;
pub mod eval;
pub mod pipeline;
pub mod postproc;
pub mod preprocess;
pub mod raster;
pub mod segment;
pub mod synth;

mod num;

pub use ccl::{label_components, Component, Connectivity, LabelMap};
pub use edt::{distance_to_gray, edt_bruteforce, edt_exact, DistanceMap, ScaleMode, NO_INK};
pub use eval::{count_errors, match_boxes, success_rate, EvalReport, MatchTable};
pub use pipeline::segment_page;
pub use postproc::{page_stats, repair, PageStats};
pub use preprocess::{binarize_otsu, gaussian_blur, gaussian_kernel};
pub use raster::{render_overlay, BoxList, GrayImage, InkMask, Rect, RgbImage};
pub use segment::{extract_words, smear, Provenance, SegConfig, WordBox};
pub use synth::{synth_page, SynthSpec, Xorshift64Star};
