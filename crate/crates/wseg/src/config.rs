//! Flat `key = value` configuration files for the segmenter and the page
//! generator. Blank lines and `#` comments are ignored; range-valued keys
//! take `lo..hi` (inclusive) or a single number for both ends.

use thiserror::Error;
use wseg_core::{ScaleMode, SegConfig, SynthSpec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {0}: expected `key = value`")]
    BadSyntax(usize),
    #[error("line {0}: unknown key `{1}`")]
    UnknownKey(usize, String),
    #[error("line {0}: bad value for `{1}`")]
    BadValue(usize, String),
}

fn entries(text: &str) -> Result<Vec<(usize, &str, &str)>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(ConfigError::BadSyntax(i + 1))?;
        out.push((i + 1, key.trim(), value.trim()));
    }
    Ok(out)
}

fn parse_as<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError::BadValue(line, key.to_string()))
}

fn parse_range(line: usize, key: &str, value: &str) -> Result<(u32, u32), ConfigError> {
    let bad = || ConfigError::BadValue(line, key.to_string());
    if let Some((lo, hi)) = value.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        Ok((lo, hi))
    } else {
        let v: u32 = value.parse().map_err(|_| bad())?;
        Ok((v, v))
    }
}

pub fn parse_scale_mode(value: &str) -> Option<ScaleMode> {
    match value {
        "fixed" => Some(ScaleMode::FixedScale),
        "max" => Some(ScaleMode::MaxNormalize),
        _ => None,
    }
}

/// Apply a segmenter config file on top of `base`. Later lines win.
pub fn apply_seg_config(text: &str, base: SegConfig) -> Result<SegConfig, ConfigError> {
    let mut cfg = base;
    for (line, key, value) in entries(text)? {
        match key {
            "sigma" => cfg.sigma = parse_as(line, key, value)?,
            "alpha" => cfg.alpha = parse_as(line, key, value)?,
            "scale_mode" => {
                cfg.scale_mode = parse_scale_mode(value)
                    .ok_or_else(|| ConfigError::BadValue(line, key.to_string()))?
            }
            "d_sat" => cfg.d_sat = parse_as(line, key, value)?,
            "beta_factor" => cfg.beta_factor = parse_as(line, key, value)?,
            "width_join_factor" => cfg.width_join_factor = parse_as(line, key, value)?,
            "height_join_factor" => cfg.height_join_factor = parse_as(line, key, value)?,
            "valley_thickness_factor" => {
                cfg.valley_thickness_factor = parse_as(line, key, value)?
            }
            "min_word_pixels" => cfg.min_word_pixels = parse_as(line, key, value)?,
            _ => return Err(ConfigError::UnknownKey(line, key.to_string())),
        }
    }
    Ok(cfg)
}

/// Apply a page-generator spec file on top of `base`.
pub fn apply_synth_spec(text: &str, base: SynthSpec) -> Result<SynthSpec, ConfigError> {
    let mut spec = base;
    for (line, key, value) in entries(text)? {
        match key {
            "page_width" => spec.page_width = parse_as(line, key, value)?,
            "page_height" => spec.page_height = parse_as(line, key, value)?,
            "lines" => spec.lines = parse_as(line, key, value)?,
            "words_per_line" => spec.words_per_line = parse_range(line, key, value)?,
            "chars_per_word" => spec.chars_per_word = parse_range(line, key, value)?,
            "char_size" => spec.char_size = parse_range(line, key, value)?,
            "intra_word_gap" => spec.intra_word_gap = parse_range(line, key, value)?,
            "inter_word_gap" => spec.inter_word_gap = parse_range(line, key, value)?,
            "line_gap" => spec.line_gap = parse_range(line, key, value)?,
            "jitter" => spec.jitter = parse_as(line, key, value)?,
            "stroke_gray" => spec.stroke_gray = parse_as(line, key, value)?,
            "noise_salt_prob" => spec.noise_salt_prob = parse_as(line, key, value)?,
            "seed" => spec.seed = parse_as(line, key, value)?,
            _ => return Err(ConfigError::UnknownKey(line, key.to_string())),
        }
    }
    Ok(spec)
}

/// Sanity limits the generator itself asserts; checked here so a bad spec
/// file surfaces as a usage error instead of a panic.
pub fn validate_synth_spec(spec: &SynthSpec) -> Result<(), String> {
    if spec.lines < 1 {
        return Err("lines must be >= 1".into());
    }
    if spec.words_per_line.0 < 1 {
        return Err("words_per_line must start at 1 or more".into());
    }
    if spec.chars_per_word.0 < 1 {
        return Err("chars_per_word must start at 1 or more".into());
    }
    if spec.char_size.0 < 2 {
        return Err("char_size must start at 2 or more".into());
    }
    if spec.intra_word_gap.1 >= spec.inter_word_gap.0 {
        return Err("intra_word_gap must stay strictly below inter_word_gap".into());
    }
    if spec.stroke_gray == 255 {
        return Err("stroke_gray must be darker than the paper (255)".into());
    }
    if !(0.0..=1.0).contains(&spec.noise_salt_prob) {
        return Err("noise_salt_prob must be within [0, 1]".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seg_overrides_apply() {
        let text = "# comment\nalpha = 120\nsigma=2.5\nscale_mode = max\n";
        let cfg = apply_seg_config(text, SegConfig::default()).unwrap();
        assert_eq!(cfg.alpha, 120);
        assert_eq!(cfg.sigma, 2.5);
        assert_eq!(cfg.scale_mode, ScaleMode::MaxNormalize);
        assert_eq!(cfg.d_sat, 24.0); // untouched default
    }

    #[test]
    fn seg_rejects_unknown_and_bad() {
        assert_eq!(
            apply_seg_config("alfa = 1\n", SegConfig::default()),
            Err(ConfigError::UnknownKey(1, "alfa".into()))
        );
        assert_eq!(
            apply_seg_config("alpha = 300\n", SegConfig::default()),
            Err(ConfigError::BadValue(1, "alpha".into()))
        );
        assert_eq!(
            apply_seg_config("alpha\n", SegConfig::default()),
            Err(ConfigError::BadSyntax(1))
        );
    }

    #[test]
    fn synth_ranges_parse() {
        let text = "lines = 3\nwords_per_line = 4..6\nchar_size = 10\nseed = 9\n";
        let spec = apply_synth_spec(text, SynthSpec::default()).unwrap();
        assert_eq!(spec.lines, 3);
        assert_eq!(spec.words_per_line, (4, 6));
        assert_eq!(spec.char_size, (10, 10));
        assert_eq!(spec.seed, 9);
        assert_eq!(
            apply_synth_spec("char_size = 9..3\n", SynthSpec::default()),
            Err(ConfigError::BadValue(1, "char_size".into()))
        );
    }

    #[test]
    fn synth_validation() {
        let mut spec = SynthSpec::default();
        assert!(validate_synth_spec(&spec).is_ok());
        spec.intra_word_gap = (1, 40);
        assert!(validate_synth_spec(&spec).is_err());
    }
}
