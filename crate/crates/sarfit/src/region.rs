//! SAR intensity ingestion: csv lists, 16-bit PGM rasters, and headerless
//! little-endian 32-bit float rasters, with optional rectangular extracts.
//!
//! Pixel values are taken as-is (no normalization); nonpositive or
//! non-finite pixels are rejected and counted.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// Rectangular extract in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Rect {
    pub x0: u32,
    pub y0: u32,
    pub width: u32,
    pub height: u32,
}

/// Supported input formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// One value per line or comma-separated rows; `#` comments ignored.
    Csv,
    /// Binary PGM (`P5`), maxval up to 65535 (two-byte samples above 255).
    Pgm16,
    /// Headerless little-endian f32 raster with known dimensions.
    RawF32le { width: u32, height: u32 },
}

/// A rectangular extract of positive intensity samples with provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntensityRegion {
    pub values: Vec<f64>,
    pub source: String,
    pub channel: String,
    pub rect: Option<Rect>,
    /// Count of nonpositive / non-finite pixels dropped during ingestion.
    pub rejected: usize,
}

/// Load an intensity region from `path`, extracting `rect` when given
/// (whole image otherwise).
pub fn load_region(
    path: &Path,
    format: Format,
    rect: Option<Rect>,
    channel: &str,
) -> Result<IntensityRegion> {
    let (raw, dims) = match format {
        Format::Csv => read_csv(path)?,
        Format::Pgm16 => {
            let (v, w, h) = read_pgm16(path)?;
            (v, Some((w, h)))
        }
        Format::RawF32le { width, height } => {
            let v = read_raw_f32le(path, width, height)?;
            (v, Some((width, height)))
        }
    };

    let extracted: Vec<f64> = match (rect, dims) {
        (None, _) => raw,
        (Some(r), Some((w, h))) => {
            if r.width == 0 || r.height == 0 {
                return Err(Error::Dimension("rect has zero width or height".into()));
            }
            if r.x0 + r.width > w || r.y0 + r.height > h {
                return Err(Error::Dimension(format!(
                    "rect {}x{}+{}+{} exceeds image {}x{}",
                    r.width, r.height, r.x0, r.y0, w, h
                )));
            }
            let mut out = Vec::with_capacity((r.width * r.height) as usize);
            for y in r.y0..r.y0 + r.height {
                let row = (y * w + r.x0) as usize;
                out.extend_from_slice(&raw[row..row + r.width as usize]);
            }
            out
        }
        (Some(_), None) => {
            return Err(Error::Dimension(
                "rect extraction needs image dimensions (ragged csv input)".into(),
            ))
        }
    };

    let mut values = Vec::with_capacity(extracted.len());
    let mut rejected = 0usize;
    for v in extracted {
        if v > 0.0 && v.is_finite() {
            values.push(v);
        } else {
            rejected += 1;
        }
    }
    if values.is_empty() {
        return Err(Error::EmptyRegion(format!(
            "{} yielded no positive finite samples",
            path.display()
        )));
    }
    Ok(IntensityRegion {
        values,
        source: path.display().to_string(),
        channel: channel.to_string(),
        rect,
        rejected,
    })
}

/// Returns values in row-major order plus dimensions when the rows form a
/// rectangular matrix.
fn read_csv(path: &Path) -> Result<(Vec<f64>, Option<(u32, u32)>)> {
    let text = fs::read_to_string(path)?;
    let mut values = Vec::new();
    let mut row_len: Option<usize> = None;
    let mut rectangular = true;
    let mut rows = 0u32;
    for (i, line) in text.lines().enumerate() {
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut count = 0usize;
        for field in body.split(',') {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                path: path.display().to_string(),
                line: i + 1,
                msg: format!("not a number: {field:?}"),
            })?;
            values.push(v);
            count += 1;
        }
        if count == 0 {
            continue;
        }
        rows += 1;
        match row_len {
            None => row_len = Some(count),
            Some(w) if w != count => rectangular = false,
            _ => {}
        }
    }
    let dims = match (rectangular, row_len) {
        (true, Some(w)) => Some((w as u32, rows)),
        _ => None,
    };
    Ok((values, dims))
}

fn read_pgm16(path: &Path) -> Result<(Vec<f64>, u32, u32)> {
    let bytes = fs::read(path)?;
    let mut pos = 0usize;
    let parse_err = |msg: &str| Error::Parse {
        path: path.display().to_string(),
        line: 0,
        msg: msg.to_string(),
    };

    // header tokens separated by whitespace, '#' to end-of-line is comment
    let token = |pos: &mut usize| -> Result<String> {
        loop {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
            if *pos < bytes.len() && bytes[*pos] == b'#' {
                while *pos < bytes.len() && bytes[*pos] != b'\n' {
                    *pos += 1;
                }
                continue;
            }
            break;
        }
        let start = *pos;
        while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if start == *pos {
            return Err(parse_err("unexpected end of header"));
        }
        Ok(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
    };

    if token(&mut pos)? != "P5" {
        return Err(parse_err("not a binary PGM (magic must be P5)"));
    }
    let width: u32 = token(&mut pos)?.parse().map_err(|_| parse_err("bad width"))?;
    let height: u32 = token(&mut pos)?.parse().map_err(|_| parse_err("bad height"))?;
    let maxval: u32 = token(&mut pos)?.parse().map_err(|_| parse_err("bad maxval"))?;
    if maxval == 0 || maxval > 65535 {
        return Err(parse_err("maxval must be in 1..=65535"));
    }
    pos += 1; // single whitespace after maxval

    let n = width as usize * height as usize;
    let wide = maxval > 255;
    let expected = n * if wide { 2 } else { 1 };
    if bytes.len() < pos + expected {
        return Err(Error::Dimension(format!(
            "pgm payload too short: need {expected} bytes, have {}",
            bytes.len().saturating_sub(pos)
        )));
    }
    let mut values = Vec::with_capacity(n);
    if wide {
        for i in 0..n {
            // per the PGM spec the most significant byte comes first
            let hi = bytes[pos + 2 * i] as u16;
            let lo = bytes[pos + 2 * i + 1] as u16;
            values.push(((hi << 8) | lo) as f64);
        }
    } else {
        for i in 0..n {
            values.push(bytes[pos + i] as f64);
        }
    }
    Ok((values, width, height))
}

fn read_raw_f32le(path: &Path, width: u32, height: u32) -> Result<Vec<f64>> {
    let bytes = fs::read(path)?;
    let n = width as usize * height as usize;
    if bytes.len() != n * 4 {
        return Err(Error::Dimension(format!(
            "raw raster is {} bytes, expected {} for {width}x{height} f32",
            bytes.len(),
            n * 4
        )));
    }
    Ok(bytes
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
        .collect())
}

/// Write the region's values as csv, one per line, with a shortest
/// round-trip float encoding (reloading reproduces the values bit-exactly).
pub fn save_csv(region: &IntensityRegion, path: &Path) -> Result<()> {
    let mut f = fs::File::create(path)?;
    writeln!(f, "# source: {}  channel: {}", region.source, region.channel)?;
    for v in &region.values {
        writeln!(f, "{v}")?;
    }
    Ok(())
}
