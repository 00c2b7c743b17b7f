//! Binary netpbm I/O: PGM (P5) and PPM (P6), maxval 255 only.
//!
//! The writer emits the canonical single-whitespace header
//! (`P5\n<w> <h>\n255\n` followed by raw samples), and save/load round-trips
//! are bit-exact. The reader accepts any whitespace runs between header
//! tokens with exactly one whitespace byte before the sample data.

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;
use wseg_core::{GrayImage, RgbImage};

#[derive(Debug, Error)]
pub enum PnmError {
    #[error("malformed header at byte {0}")]
    MalformedHeader(usize),
    #[error("unsupported maxval {maxval} at byte {offset}; only 255 is supported")]
    UnsupportedMaxval { offset: usize, maxval: u64 },
    #[error("truncated pixel data at byte {0}")]
    TruncatedData(usize),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// A decoded netpbm image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pnm {
    Gray(GrayImage),
    Rgb(RgbImage),
}

fn is_ws(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c)
}

/// Parse one ASCII decimal token, returning (value, offset after token).
fn parse_int(bytes: &[u8], mut pos: usize) -> Result<(u64, usize), PnmError> {
    while pos < bytes.len() && is_ws(bytes[pos]) {
        pos += 1;
    }
    let start = pos;
    let mut value: u64 = 0;
    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
        value = value
            .checked_mul(10)
            .and_then(|v| v.checked_add((bytes[pos] - b'0') as u64))
            .ok_or(PnmError::MalformedHeader(start))?;
        pos += 1;
    }
    if pos == start {
        return Err(PnmError::MalformedHeader(pos.min(bytes.len())));
    }
    Ok((value, pos))
}

/// Decode a binary PGM or PPM from raw bytes.
pub fn decode(bytes: &[u8]) -> Result<Pnm, PnmError> {
    if bytes.len() < 2 {
        return Err(PnmError::MalformedHeader(0));
    }
    let channels = match &bytes[..2] {
        b"P5" => 1usize,
        b"P6" => 3usize,
        _ => return Err(PnmError::MalformedHeader(0)),
    };
    let (width, pos) = parse_int(bytes, 2)?;
    let width_at = pos;
    let (height, pos) = parse_int(bytes, pos)?;
    let height_at = pos;
    let (maxval, pos) = parse_int(bytes, pos)?;
    let maxval_at = pos;
    if width == 0 || width > u32::MAX as u64 {
        return Err(PnmError::MalformedHeader(width_at));
    }
    if height == 0 || height > u32::MAX as u64 {
        return Err(PnmError::MalformedHeader(height_at));
    }
    if maxval != 255 {
        return Err(PnmError::UnsupportedMaxval {
            offset: maxval_at,
            maxval,
        });
    }
    // Exactly one whitespace byte separates the header from the samples.
    if pos >= bytes.len() || !is_ws(bytes[pos]) {
        return Err(PnmError::MalformedHeader(pos.min(bytes.len())));
    }
    let data_start = pos + 1;
    let need = (width as usize)
        .checked_mul(height as usize)
        .and_then(|n| n.checked_mul(channels))
        .ok_or(PnmError::MalformedHeader(width_at))?;
    if bytes.len() < data_start + need {
        return Err(PnmError::TruncatedData(bytes.len()));
    }
    let data = bytes[data_start..data_start + need].to_vec();
    Ok(match channels {
        1 => Pnm::Gray(GrayImage::from_raw(width as u32, height as u32, data)),
        _ => Pnm::Rgb(RgbImage::from_raw(width as u32, height as u32, data)),
    })
}

/// Canonical P5 encoding.
pub fn encode_p5(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.data());
    out
}

/// Canonical P6 encoding.
pub fn encode_p6(img: &RgbImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.data());
    out
}

/// Load a page as gray: PGM passes through untouched, PPM is converted with
/// ITU-R 601 luminance weights.
pub fn load_gray(path: &Path) -> Result<GrayImage, PnmError> {
    let bytes = fs::read(path)?;
    Ok(match decode(&bytes)? {
        Pnm::Gray(g) => g,
        Pnm::Rgb(rgb) => rgb.to_gray(),
    })
}

pub fn save_gray(img: &GrayImage, path: &Path) -> Result<(), PnmError> {
    fs::write(path, encode_p5(img))?;
    Ok(())
}

pub fn save_rgb(img: &RgbImage, path: &Path) -> Result<(), PnmError> {
    fs::write(path, encode_p6(img))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decode_minimal_p5() {
        let img = match decode(b"P5\n1 1\n255\nM").unwrap() {
            Pnm::Gray(g) => g,
            _ => panic!("expected gray"),
        };
        assert_eq!((img.width(), img.height()), (1, 1));
        assert_eq!(img.data(), &[b'M']); // 77
    }

    #[test]
    fn decode_p6_converts_to_gray() {
        let white = decode(b"P6\n1 1\n255\n\xff\xff\xff").unwrap();
        let Pnm::Rgb(rgb) = white else { panic!() };
        assert_eq!(rgb.to_gray().data(), &[255]);

        let mixed = decode(&[b"P6\n1 1\n255\n".as_slice(), &[100, 200, 50]].concat()).unwrap();
        let Pnm::Rgb(rgb) = mixed else { panic!() };
        // round(0.299*100 + 0.587*200 + 0.114*50) = round(153.0)
        assert_eq!(rgb.to_gray().data(), &[153]);
    }

    #[test]
    fn encode_is_canonical() {
        let img = GrayImage::from_raw(2, 1, vec![0, 255]);
        assert_eq!(encode_p5(&img), b"P5\n2 1\n255\n\x00\xff");
    }

    #[test]
    fn header_errors_carry_offsets() {
        assert!(matches!(decode(b"P4\n1 1\n255\n\x00"), Err(PnmError::MalformedHeader(0))));
        assert!(matches!(decode(b"P5\nx 1\n255\n\x00"), Err(PnmError::MalformedHeader(3))));
        assert!(matches!(
            decode(b"P5\n1 1\n65535\n\x00\x00"),
            Err(PnmError::UnsupportedMaxval { maxval: 65535, .. })
        ));
        assert!(matches!(decode(b"P5\n0 1\n255\n"), Err(PnmError::MalformedHeader(_))));
        assert!(matches!(
            decode(b"P5\n4 4\n255\n\x00\x00"),
            Err(PnmError::TruncatedData(13))
        ));
    }

    #[test]
    fn roundtrip_via_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.pgm");
        let img = GrayImage::from_raw(3, 2, vec![0, 1, 2, 253, 254, 255]);
        save_gray(&img, &path).unwrap();
        assert_eq!(load_gray(&path).unwrap(), img);
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_gray(Path::new("/nonexistent/x.pgm")).unwrap_err();
        assert!(matches!(err, PnmError::Io(_)));
    }
}
