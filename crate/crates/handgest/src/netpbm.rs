//! Netpbm codecs: P6 color images, P1/P4 bitmaps.
//!
//! On disk a PBM `1` is black; in memory a `1` is white (the target color).
//! The inversion happens here and nowhere else.

use handgest_core::{BinaryFrame, FrameError, RgbFrame};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PnmError {
    #[error("byte {offset}: unrecognized magic number")]
    BadMagic { offset: usize },
    #[error("byte {offset}: unexpected end of data")]
    Truncated { offset: usize },
    #[error("byte {offset}: malformed header field")]
    BadHeader { offset: usize },
    #[error("byte {offset}: unsupported maxval {maxval}, expected 255")]
    Maxval { offset: usize, maxval: u64 },
    #[error("byte {offset}: bitmap values must be 0 or 1")]
    BadBit { offset: usize },
    #[error("byte {offset}: {source}")]
    Frame { offset: usize, source: FrameError },
}

impl PnmError {
    pub fn offset(&self) -> usize {
        match *self {
            PnmError::BadMagic { offset }
            | PnmError::Truncated { offset }
            | PnmError::BadHeader { offset }
            | PnmError::Maxval { offset, .. }
            | PnmError::BadBit { offset }
            | PnmError::Frame { offset, .. } => offset,
        }
    }
}

/// Any image this module can decode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Image {
    Rgb(RgbFrame),
    Binary(BinaryFrame),
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn magic(&mut self) -> Result<[u8; 2], PnmError> {
        match self.bytes {
            [b'P', d, ..] => {
                self.pos = 2;
                Ok([b'P', *d])
            }
            [] | [b'P'] => Err(PnmError::Truncated { offset: self.bytes.len() }),
            _ => Err(PnmError::BadMagic { offset: 0 }),
        }
    }

    /// Skips whitespace and `#` comments.
    fn skip_blank(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self) -> Result<u64, PnmError> {
        self.skip_blank();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(if self.pos >= self.bytes.len() {
                PnmError::Truncated { offset: self.pos }
            } else {
                PnmError::BadHeader { offset: self.pos }
            });
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(PnmError::BadHeader { offset: start })
    }

    fn dimension(&mut self) -> Result<u32, PnmError> {
        self.skip_blank();
        let offset = self.pos;
        match self.number()? {
            0 => Err(PnmError::BadHeader { offset }),
            n => u32::try_from(n).map_err(|_| PnmError::BadHeader { offset }),
        }
    }

    /// The single whitespace byte that ends a binary header.
    fn header_end(&mut self) -> Result<(), PnmError> {
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => {
                self.pos += 1;
                Ok(())
            }
            Some(_) => Err(PnmError::BadHeader { offset: self.pos }),
            None => Err(PnmError::Truncated { offset: self.pos }),
        }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], PnmError> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or(PnmError::Truncated { offset: self.bytes.len() })?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }
}

fn byte_len(offset: usize, parts: &[u64]) -> Result<usize, PnmError> {
    parts
        .iter()
        .try_fold(1usize, |acc, &p| acc.checked_mul(usize::try_from(p).ok()?))
        .ok_or(PnmError::BadHeader { offset })
}

fn read_p6(cur: &mut Cursor<'_>) -> Result<RgbFrame, PnmError> {
    let width = cur.dimension()?;
    let height = cur.dimension()?;
    cur.skip_blank();
    let maxval_at = cur.pos;
    let maxval = cur.number()?;
    if maxval != 255 {
        return Err(PnmError::Maxval {
            offset: maxval_at,
            maxval,
        });
    }
    cur.header_end()?;
    let offset = cur.pos;
    let len = byte_len(offset, &[width as u64, height as u64, 3])?;
    let data = cur.take(len)?.to_vec();
    RgbFrame::new(width, height, data).map_err(|source| PnmError::Frame { offset, source })
}

fn read_p4(cur: &mut Cursor<'_>) -> Result<BinaryFrame, PnmError> {
    let width = cur.dimension()?;
    let height = cur.dimension()?;
    cur.header_end()?;
    let offset = cur.pos;
    let stride = (width as u64).div_ceil(8);
    let len = byte_len(offset, &[stride, height as u64])?;
    let packed = cur.take(len)?.iter().map(|b| !b).collect();
    BinaryFrame::from_packed(width, height, packed)
        .map_err(|source| PnmError::Frame { offset, source })
}

fn read_p1(cur: &mut Cursor<'_>) -> Result<BinaryFrame, PnmError> {
    let width = cur.dimension()?;
    let height = cur.dimension()?;
    let offset = cur.pos;
    let mut frame =
        BinaryFrame::new(width, height).map_err(|source| PnmError::Frame { offset, source })?;
    for row in 0..height {
        for col in 0..width {
            cur.skip_blank();
            match cur.bytes.get(cur.pos) {
                // black on disk
                Some(b'1') => {}
                Some(b'0') => frame.set(col, row, true),
                Some(_) => return Err(PnmError::BadBit { offset: cur.pos }),
                None => return Err(PnmError::Truncated { offset: cur.pos }),
            }
            cur.pos += 1;
        }
    }
    Ok(frame)
}

/// Reads a binary (P6) PPM with maxval 255.
pub fn read_ppm(bytes: &[u8]) -> Result<RgbFrame, PnmError> {
    let mut cur = Cursor::new(bytes);
    match cur.magic()? {
        [b'P', b'6'] => read_p6(&mut cur),
        _ => Err(PnmError::BadMagic { offset: 0 }),
    }
}

/// Reads a P1 (ASCII) or P4 (binary) PBM.
pub fn read_pbm(bytes: &[u8]) -> Result<BinaryFrame, PnmError> {
    let mut cur = Cursor::new(bytes);
    match cur.magic()? {
        [b'P', b'4'] => read_p4(&mut cur),
        [b'P', b'1'] => read_p1(&mut cur),
        _ => Err(PnmError::BadMagic { offset: 0 }),
    }
}

/// Reads whichever supported format the magic number announces.
pub fn read_image(bytes: &[u8]) -> Result<Image, PnmError> {
    let mut cur = Cursor::new(bytes);
    match cur.magic()? {
        [b'P', b'6'] => read_p6(&mut cur).map(Image::Rgb),
        [b'P', b'4'] => read_p4(&mut cur).map(Image::Binary),
        [b'P', b'1'] => read_p1(&mut cur).map(Image::Binary),
        _ => Err(PnmError::BadMagic { offset: 0 }),
    }
}

pub fn write_ppm(frame: &RgbFrame) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", frame.width(), frame.height()).into_bytes();
    out.extend_from_slice(frame.data());
    out
}

/// Writes a P4 PBM. Row padding bits are written as 0.
pub fn write_pbm(frame: &BinaryFrame) -> Vec<u8> {
    let mut out = format!("P4\n{} {}\n", frame.width(), frame.height()).into_bytes();
    let tail = frame.width() % 8;
    let pad_mask = if tail == 0 { 0xff } else { !(0xffu8 >> tail) };
    for row in 0..frame.height() {
        let bytes = frame.packed_row(row);
        let (last, body) = bytes.split_last().expect("width >= 1");
        out.extend(body.iter().map(|b| !b));
        out.push(!last & pad_mask);
    }
    out
}
