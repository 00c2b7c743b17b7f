//! The `segment`, `eval`, and `synth` subcommand runners.
//!
//! Exit codes: 0 success, 1 bad arguments or configuration, 2 I/O failure,
//! 3 malformed input file. The `WSEG_THREADS` environment variable caps the
//! worker count (0 or unset = one worker per available core); outputs are
//! bit-identical for any worker count because every unit of work writes its
//! own files.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use clap::Args;
use thiserror::Error;

use wseg_core::ccl::{label_components, Connectivity};
use wseg_core::edt::{distance_to_gray, edt_exact};
use wseg_core::eval::evaluate;
use wseg_core::pipeline::regions_to_words;
use wseg_core::postproc::repair;
use wseg_core::preprocess::{binarize_otsu, gaussian_blur};
use wseg_core::raster::{render_overlay, GrayImage, Rect};
use wseg_core::segment::{smear, SegConfig, WordBox};
use wseg_core::synth::{synth_page, SynthSpec};

use crate::config;
use crate::pnm::{self, PnmError};
use crate::truth::{self, TruthError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Malformed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Malformed(_) => 3,
        }
    }
}

fn pnm_error(path: &Path, err: PnmError) -> CliError {
    let msg = format!("{}: {err}", path.display());
    match err {
        PnmError::Io(_) => CliError::Io(msg),
        _ => CliError::Malformed(msg),
    }
}

fn truth_error(path: &Path, err: TruthError) -> CliError {
    let msg = format!("{}: {err}", path.display());
    match err {
        TruthError::Io(_) => CliError::Io(msg),
        _ => CliError::Malformed(msg),
    }
}

fn io_error(path: &Path, err: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {err}", path.display()))
}

/// Worker count from WSEG_THREADS (0 or unset = auto).
pub fn worker_count() -> Result<usize, CliError> {
    match std::env::var("WSEG_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(auto_workers()),
        Err(e) => Err(CliError::Usage(format!("WSEG_THREADS: {e}"))),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(0) => Ok(auto_workers()),
            Ok(n) => Ok(n),
            Err(_) => Err(CliError::Usage(format!(
                "invalid WSEG_THREADS value `{s}`; expected a non-negative integer"
            ))),
        },
    }
}

fn auto_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Run `f` over the items on up to `workers` scoped threads. Each item must
/// write only its own outputs, so scheduling cannot change any file content.
fn for_each_parallel<T, F>(items: &[T], workers: usize, f: F) -> Result<(), CliError>
where
    T: Sync,
    F: Fn(usize, &T) -> Result<(), CliError> + Sync,
{
    if workers <= 1 || items.len() <= 1 {
        for (i, item) in items.iter().enumerate() {
            f(i, item)?;
        }
        return Ok(());
    }
    let next = AtomicUsize::new(0);
    let failure: Mutex<Option<CliError>> = Mutex::new(None);
    std::thread::scope(|s| {
        for _ in 0..workers.min(items.len()) {
            s.spawn(|| loop {
                if failure.lock().unwrap().is_some() {
                    break;
                }
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                if let Err(e) = f(i, &items[i]) {
                    failure.lock().unwrap().get_or_insert(e);
                    break;
                }
            });
        }
    });
    match failure.into_inner().unwrap() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

#[derive(Args, Debug)]
pub struct SegmentArgs {
    /// Input page image (binary PGM or PPM); repeat for batch processing
    #[arg(long, required = true)]
    pub input: Vec<PathBuf>,
    /// Output directory for word crops and the run manifest
    #[arg(long)]
    pub out: PathBuf,
    /// Smearing threshold on the 0-255 distance image
    #[arg(long)]
    pub alpha: Option<u8>,
    /// Gaussian sigma for noise removal
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Saturation distance in pixels for fixed-scale mapping
    #[arg(long = "d-sat")]
    pub d_sat: Option<f64>,
    /// Distance-to-gray mapping: "fixed" or "max"
    #[arg(long = "scale-mode")]
    pub scale_mode: Option<String>,
    /// Multiplier on word height for the cross-line split window
    #[arg(long)]
    pub beta: Option<f64>,
    /// Write an RGB overlay of the final boxes to this PPM path
    #[arg(long)]
    pub overlay: Option<PathBuf>,
    /// Write the predicted boxes to this WSGT text path
    #[arg(long)]
    pub boxes: Option<PathBuf>,
    /// Flat key=value config file (flags take precedence)
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Predicted boxes (WSGT text)
    #[arg(long)]
    pub pred: PathBuf,
    /// Ground-truth boxes (WSGT text)
    #[arg(long)]
    pub truth: PathBuf,
    /// Where to write the report
    #[arg(long)]
    pub report: PathBuf,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Flat key=value page spec (defaults used when omitted)
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Seed override for the page generator
    #[arg(long)]
    pub seed: Option<u64>,
    /// Where to write the page image (binary PGM)
    #[arg(long = "out-image")]
    pub out_image: PathBuf,
    /// Where to write the ground-truth sidecar (WSGT text)
    #[arg(long = "out-truth")]
    pub out_truth: PathBuf,
}

/// Resolve the effective config: defaults, then the config file, then flags.
fn resolve_config(args: &SegmentArgs) -> Result<SegConfig, CliError> {
    let mut cfg = SegConfig::default();
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        cfg = config::apply_seg_config(&text, cfg)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    }
    if let Some(v) = args.sigma {
        cfg.sigma = v;
    }
    if let Some(v) = args.alpha {
        cfg.alpha = v;
    }
    if let Some(v) = args.d_sat {
        cfg.d_sat = v;
    }
    if let Some(m) = &args.scale_mode {
        cfg.scale_mode = config::parse_scale_mode(m)
            .ok_or_else(|| CliError::Usage(format!("invalid scale mode `{m}`")))?;
    }
    if let Some(v) = args.beta {
        cfg.beta_factor = v;
    }
    if !(cfg.sigma > 0.0) {
        return Err(CliError::Usage("sigma must be > 0".into()));
    }
    if !(cfg.d_sat > 0.0) {
        return Err(CliError::Usage("d-sat must be > 0".into()));
    }
    if !(cfg.beta_factor > 0.0) {
        return Err(CliError::Usage("beta must be > 0".into()));
    }
    Ok(cfg)
}

struct PageOutcome {
    input: PathBuf,
    words: usize,
    outputs: Vec<PathBuf>,
    timings: Vec<(&'static str, u128)>,
}

/// Crop one word out of the page: original gray values at the word's own
/// ink pixels, white elsewhere.
fn crop_word(gray: &GrayImage, word: &WordBox) -> GrayImage {
    let mut out = GrayImage::filled(word.bbox.w, word.bbox.h, 255);
    for (x, y) in word.mask.ink_pixels() {
        out.set(x, y, gray.get(word.bbox.x + x, word.bbox.y + y));
    }
    out
}

fn crop_name(index: usize) -> String {
    format!("word_{:04}.pgm", index + 1)
}

fn process_page(
    input: &Path,
    cfg: &SegConfig,
    out_dir: &Path,
    overlay: Option<&Path>,
    boxes_path: Option<&Path>,
    crop_workers: usize,
) -> Result<PageOutcome, CliError> {
    let mut timings = Vec::new();
    let mut stage = Instant::now();
    let record = |name: &'static str, stage: &mut Instant, timings: &mut Vec<(&'static str, u128)>| {
        timings.push((name, stage.elapsed().as_millis()));
        *stage = Instant::now();
    };

    let gray = pnm::load_gray(input).map_err(|e| pnm_error(input, e))?;
    record("load", &mut stage, &mut timings);
    let blurred =
        gaussian_blur(&gray, cfg.sigma).map_err(|e| CliError::Usage(e.to_string()))?;
    record("blur", &mut stage, &mut timings);
    let ink = binarize_otsu(&blurred);
    record("binarize", &mut stage, &mut timings);
    let dm = edt_exact(&ink);
    record("edt", &mut stage, &mut timings);
    let gdt = distance_to_gray(&dm, cfg.scale_mode, cfg.d_sat)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    record("distance", &mut stage, &mut timings);
    let smeared = smear(&gdt, cfg.alpha);
    record("smear", &mut stage, &mut timings);
    let labels = label_components(&smeared, Connectivity::Eight);
    record("label", &mut stage, &mut timings);
    let words = regions_to_words(&ink, &labels, cfg);
    record("extract", &mut stage, &mut timings);
    let words = repair(&words, cfg);
    record("repair", &mut stage, &mut timings);

    fs::create_dir_all(out_dir).map_err(|e| io_error(out_dir, e))?;
    let mut outputs = Vec::new();
    for (i, _) in words.iter().enumerate() {
        outputs.push(out_dir.join(crop_name(i)));
    }
    for_each_parallel(&words, crop_workers, |i, word| {
        let path = out_dir.join(crop_name(i));
        pnm::save_gray(&crop_word(&gray, word), &path).map_err(|e| pnm_error(&path, e))
    })?;

    let pred: Vec<Rect> = words.iter().map(|w| w.bbox).collect();
    if let Some(path) = overlay {
        let rgb = render_overlay(&gray, &pred).expect("word boxes lie inside the page");
        pnm::save_rgb(&rgb, path).map_err(|e| pnm_error(path, e))?;
        outputs.push(path.to_path_buf());
    }
    if let Some(path) = boxes_path {
        truth::write_truth(&pred, path).map_err(|e| truth_error(path, e))?;
        outputs.push(path.to_path_buf());
    }
    record("write", &mut stage, &mut timings);

    Ok(PageOutcome {
        input: input.to_path_buf(),
        words: words.len(),
        outputs,
        timings,
    })
}

fn config_line(cfg: &SegConfig) -> String {
    let mode = match cfg.scale_mode {
        wseg_core::ScaleMode::FixedScale => "fixed",
        wseg_core::ScaleMode::MaxNormalize => "max",
    };
    format!(
        "config: sigma={} alpha={} scale_mode={} d_sat={} beta_factor={} \
         width_join_factor={} height_join_factor={} valley_thickness_factor={} \
         min_word_pixels={}",
        cfg.sigma,
        cfg.alpha,
        mode,
        cfg.d_sat,
        cfg.beta_factor,
        cfg.width_join_factor,
        cfg.height_join_factor,
        cfg.valley_thickness_factor,
        cfg.min_word_pixels
    )
}

pub fn run_segment(args: &SegmentArgs) -> Result<(), CliError> {
    let workers = worker_count()?;
    let cfg = resolve_config(args)?;
    if args.input.is_empty() {
        return Err(CliError::Usage("at least one --input is required".into()));
    }
    if args.input.len() > 1 && (args.overlay.is_some() || args.boxes.is_some()) {
        return Err(CliError::Usage(
            "--overlay and --boxes require a single --input".into(),
        ));
    }
    fs::create_dir_all(&args.out).map_err(|e| io_error(&args.out, e))?;

    // One input writes into --out directly; a batch gets one subdirectory
    // per page, named by the input file stem.
    let jobs: Vec<(PathBuf, PathBuf)> = if args.input.len() == 1 {
        vec![(args.input[0].clone(), args.out.clone())]
    } else {
        args.input
            .iter()
            .enumerate()
            .map(|(i, input)| {
                let stem = input
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| format!("page_{i}"));
                (input.clone(), args.out.join(stem))
            })
            .collect()
    };

    let single = jobs.len() == 1;
    let outcomes: Mutex<Vec<(usize, PageOutcome)>> = Mutex::new(Vec::new());
    for_each_parallel(&jobs, if single { 1 } else { workers }, |i, (input, dir)| {
        let outcome = process_page(
            input,
            &cfg,
            dir,
            if single { args.overlay.as_deref() } else { None },
            if single { args.boxes.as_deref() } else { None },
            if single { workers } else { 1 },
        )?;
        outcomes.lock().unwrap().push((i, outcome));
        Ok(())
    })?;

    let mut outcomes = outcomes.into_inner().unwrap();
    outcomes.sort_by_key(|(i, _)| *i);

    let mut manifest = String::new();
    manifest.push_str(&format!("inputs: {}\n", jobs.len()));
    manifest.push_str(&config_line(&cfg));
    manifest.push('\n');
    manifest.push_str(&format!("threads: {workers}\n"));
    for (_, oc) in &outcomes {
        manifest.push_str(&format!("page: {}\n", oc.input.display()));
        manifest.push_str(&format!("words: {}\n", oc.words));
        for path in &oc.outputs {
            manifest.push_str(&format!("output: {}\n", path.display()));
        }
        let timing: Vec<String> = oc
            .timings
            .iter()
            .map(|(name, ms)| format!("{name}={ms}"))
            .collect();
        manifest.push_str(&format!("timing_ms: {}\n", timing.join(" ")));
    }
    let manifest_path = args.out.join("manifest.txt");
    fs::write(&manifest_path, manifest).map_err(|e| io_error(&manifest_path, e))?;
    Ok(())
}

pub fn run_eval(args: &EvalArgs) -> Result<(), CliError> {
    let pred = truth::read_truth(&args.pred).map_err(|e| truth_error(&args.pred, e))?;
    let truth_boxes = truth::read_truth(&args.truth).map_err(|e| truth_error(&args.truth, e))?;
    let report = evaluate(&pred, &truth_boxes)
        .map_err(|e| CliError::Malformed(format!("{}: {e}", args.truth.display())))?;
    let text = report.to_report_string();
    fs::write(&args.report, &text).map_err(|e| io_error(&args.report, e))?;
    print!("{text}");
    Ok(())
}

pub fn run_synth(args: &SynthArgs) -> Result<(), CliError> {
    let mut spec = SynthSpec::default();
    if let Some(path) = &args.spec {
        let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        spec = config::apply_synth_spec(&text, spec)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    }
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    config::validate_synth_spec(&spec).map_err(CliError::Usage)?;
    let (img, boxes) = synth_page(&spec)
        .map_err(|e| CliError::Usage(format!("page spec does not fit: {e}")))?;
    pnm::save_gray(&img, &args.out_image).map_err(|e| pnm_error(&args.out_image, e))?;
    truth::write_truth(&boxes, &args.out_truth).map_err(|e| truth_error(&args.out_truth, e))?;
    Ok(())
}
