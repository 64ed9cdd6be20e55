//! 8-bit binary PGM (`P5`) images and their least significant bits.

use std::path::Path;

use crate::error::{Error, Result};
use crate::gf2::BitVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u8,
    /// Row-major.
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, maxval: u8, pixels: Vec<u8>) -> Result<Self> {
        Error::check_len("pixel data", width * height, pixels.len())?;
        if maxval == 0 {
            return Err(Error::InvalidParameter("maxval must be positive".into()));
        }
        if let Some(i) = pixels.iter().position(|&p| p > maxval) {
            return Err(Error::InvalidParameter(format!(
                "pixel {i} has value {} above maxval {maxval}",
                pixels[i]
            )));
        }
        Ok(Self { width, height, maxval, pixels })
    }

    pub fn pixel_count(&self) -> usize {
        self.pixels.len()
    }
}

struct Header<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.data.len() && self.data[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(format!("PGM header: expected {what} at byte offset {start}")));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .expect("ASCII digits")
            .parse()
            .map_err(|_| Error::parse(format!("PGM header: {what} at byte offset {start} is too large")))
    }
}

pub fn parse_pgm(data: &[u8]) -> Result<GrayImage> {
    if !data.starts_with(b"P5") {
        return Err(Error::parse("not a binary PGM: magic number must be P5"));
    }
    let mut h = Header { data, pos: 2 };
    let width = h.number("width")?;
    let height = h.number("height")?;
    let maxval = h.number("maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::parse(format!("PGM maxval {maxval} not in 1..=255")));
    }
    match data.get(h.pos) {
        Some(b) if b.is_ascii_whitespace() => h.pos += 1,
        _ => {
            return Err(Error::parse(format!(
                "PGM header: expected whitespace after maxval at byte offset {}",
                h.pos
            )))
        }
    }
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| Error::parse("PGM dimensions overflow"))?;
    let body = &data[h.pos..];
    if body.len() < expected {
        return Err(Error::parse(format!(
            "PGM pixel data truncated at byte offset {}: expected {expected} bytes, found {}",
            data.len(),
            body.len()
        )));
    }
    GrayImage::new(width, height, maxval as u8, body[..expected].to_vec())
        .map_err(|e| Error::parse(format!("PGM data: {e}")))
}

/// Canonical encoding: single spaces, one newline before the pixels.
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n{}\n", img.width, img.height, img.maxval).into_bytes();
    out.extend_from_slice(&img.pixels);
    out
}

pub fn read_pgm(path: &Path) -> Result<GrayImage> {
    let data = std::fs::read(path)
        .map_err(|e| Error::parse(format!("cannot read {}: {e}", path.display())))?;
    parse_pgm(&data).map_err(|e| Error::parse(format!("{}: {e}", path.display())))
}

pub fn write_pgm(img: &GrayImage, path: &Path) -> Result<()> {
    std::fs::write(path, encode_pgm(img))?;
    Ok(())
}

fn check_count(img: &GrayImage, n: usize) -> Result<()> {
    if n > img.pixel_count() {
        Err(Error::InvalidParameter(format!(
            "cover length {n} exceeds the image's {} pixels",
            img.pixel_count()
        )))
    } else {
        Ok(())
    }
}

/// Least significant bits of the first `n` pixels.
pub fn lsb_extract(img: &GrayImage, n: usize) -> Result<BitVector> {
    check_count(img, n)?;
    Ok(BitVector::from_bits(img.pixels[..n].iter().map(|p| p & 1 == 1)))
}

/// Replaces the least significant bits of the first `x.len()` pixels.
pub fn lsb_inject(img: &GrayImage, x: &BitVector) -> Result<GrayImage> {
    check_count(img, x.len())?;
    let mut out = img.clone();
    for (i, bit) in x.iter().enumerate() {
        let p = (out.pixels[i] & !1) | bit as u8;
        if p > out.maxval {
            return Err(Error::InvalidParameter(format!(
                "pixel {i}: value {p} would exceed maxval {}",
                out.maxval
            )));
        }
        out.pixels[i] = p;
    }
    Ok(out)
}
