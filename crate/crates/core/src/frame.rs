//! Pixel frames, color-range binarization and frame differencing.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrameError {
    ZeroDimension { width: u32, height: u32 },
    DataLength { expected: usize, actual: usize },
    DimensionMismatch { first: (u32, u32), second: (u32, u32) },
    InvertedRange { channel: char, min: u8, max: u8 },
    RangeSyntax(&'static str),
}

impl fmt::Display for FrameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameError::ZeroDimension { width, height } => {
                write!(f, "frame dimensions must be non-zero, got {width}x{height}")
            }
            FrameError::DataLength { expected, actual } => {
                write!(f, "expected {expected} data bytes, got {actual}")
            }
            FrameError::DimensionMismatch { first, second } => write!(
                f,
                "frame dimensions differ: {}x{} vs {}x{}",
                first.0, first.1, second.0, second.1
            ),
            FrameError::InvertedRange { channel, min, max } => {
                write!(f, "channel {channel}: min {min} exceeds max {max}")
            }
            FrameError::RangeSyntax(msg) => write!(f, "bad color range: {msg}"),
        }
    }
}

impl core::error::Error for FrameError {}

/// Column/row address into a frame. Row 0 is the top image row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PixelCoord {
    pub col: u32,
    pub row: u32,
}

impl PixelCoord {
    pub const fn new(col: u32, row: u32) -> Self {
        Self { col, row }
    }

    /// Row-major scan index within a frame of the given width.
    pub fn scan_index(self, width: u32) -> u64 {
        self.row as u64 * width as u64 + self.col as u64
    }
}

fn check_dims(width: u32, height: u32) -> Result<(), FrameError> {
    if width == 0 || height == 0 {
        return Err(FrameError::ZeroDimension { width, height });
    }
    Ok(())
}

/// Row-major 8-bit RGB image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbFrame {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl RgbFrame {
    pub fn new(width: u32, height: u32, data: Vec<u8>) -> Result<Self, FrameError> {
        check_dims(width, height)?;
        let expected = width as usize * height as usize * 3;
        if data.len() != expected {
            return Err(FrameError::DataLength {
                expected,
                actual: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Builds a frame from a list of `(r, g, b)` pixels in row-major order.
    pub fn from_pixels(width: u32, height: u32, pixels: &[[u8; 3]]) -> Result<Self, FrameError> {
        Self::new(width, height, pixels.iter().flatten().copied().collect())
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn pixel(&self, col: u32, row: u32) -> [u8; 3] {
        let i = (row as usize * self.width as usize + col as usize) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }
}

/// Inclusive per-channel bounds selecting the target color.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColorRange {
    r_min: u8,
    r_max: u8,
    g_min: u8,
    g_max: u8,
    b_min: u8,
    b_max: u8,
}

impl ColorRange {
    pub fn new(r: (u8, u8), g: (u8, u8), b: (u8, u8)) -> Result<Self, FrameError> {
        for (channel, (min, max)) in [('r', r), ('g', g), ('b', b)] {
            if min > max {
                return Err(FrameError::InvertedRange { channel, min, max });
            }
        }
        Ok(Self {
            r_min: r.0,
            r_max: r.1,
            g_min: g.0,
            g_max: g.1,
            b_min: b.0,
            b_max: b.1,
        })
    }

    pub fn red(&self) -> (u8, u8) {
        (self.r_min, self.r_max)
    }

    pub fn green(&self) -> (u8, u8) {
        (self.g_min, self.g_max)
    }

    pub fn blue(&self) -> (u8, u8) {
        (self.b_min, self.b_max)
    }

    #[inline]
    pub fn contains(&self, [r, g, b]: [u8; 3]) -> bool {
        (self.r_min..=self.r_max).contains(&r)
            && (self.g_min..=self.g_max).contains(&g)
            && (self.b_min..=self.b_max).contains(&b)
    }

    /// True if every color accepted by `other` is accepted by `self`.
    pub fn covers(&self, other: &ColorRange) -> bool {
        self.r_min <= other.r_min
            && self.r_max >= other.r_max
            && self.g_min <= other.g_min
            && self.g_max >= other.g_max
            && self.b_min <= other.b_min
            && self.b_max >= other.b_max
    }
}

/// Parses `"rmin:rmax,gmin:gmax,bmin:bmax"`.
impl FromStr for ColorRange {
    type Err = FrameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bounds = [(0u8, 0u8); 3];
        let mut parts = s.split(',');
        for slot in bounds.iter_mut() {
            let part = parts
                .next()
                .ok_or(FrameError::RangeSyntax("expected three channel ranges"))?;
            let (lo, hi) = part
                .trim()
                .split_once(':')
                .ok_or(FrameError::RangeSyntax("channel range must be min:max"))?;
            let lo = lo
                .trim()
                .parse::<u8>()
                .map_err(|_| FrameError::RangeSyntax("bound is not an integer in 0..=255"))?;
            let hi = hi
                .trim()
                .parse::<u8>()
                .map_err(|_| FrameError::RangeSyntax("bound is not an integer in 0..=255"))?;
            *slot = (lo, hi);
        }
        if parts.next().is_some() {
            return Err(FrameError::RangeSyntax("expected three channel ranges"));
        }
        ColorRange::new(bounds[0], bounds[1], bounds[2])
    }
}

impl fmt::Display for ColorRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{},{}:{},{}:{}",
            self.r_min, self.r_max, self.g_min, self.g_max, self.b_min, self.b_max
        )
    }
}

/// The logical array: one bit per pixel, 1 = white.
///
/// Rows are packed MSB-first, 8 pixels per byte, each row padded to a whole
/// byte. Padding bits are always zero so derived equality is bit-exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryFrame {
    width: u32,
    height: u32,
    stride: usize,
    bits: Vec<u8>,
}

impl fmt::Debug for BinaryFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryFrame {}x{}", self.width, self.height)?;
        if self.width <= 64 && self.height <= 64 {
            for row in 0..self.height {
                for col in 0..self.width {
                    f.write_str(if self.get(col, row) { "#" } else { "." })?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

impl BinaryFrame {
    /// An all-black frame.
    pub fn new(width: u32, height: u32) -> Result<Self, FrameError> {
        check_dims(width, height)?;
        let stride = (width as usize).div_ceil(8);
        Ok(Self {
            width,
            height,
            stride,
            bits: vec![0; stride * height as usize],
        })
    }

    pub fn from_fn(
        width: u32,
        height: u32,
        mut white: impl FnMut(u32, u32) -> bool,
    ) -> Result<Self, FrameError> {
        let mut frame = Self::new(width, height)?;
        for row in 0..height {
            for col in 0..width {
                if white(col, row) {
                    frame.set(col, row, true);
                }
            }
        }
        Ok(frame)
    }

    /// Builds a frame from `0`/`1` values in row-major order.
    pub fn from_bits(width: u32, height: u32, bits: &[u8]) -> Result<Self, FrameError> {
        let expected = width as usize * height as usize;
        if bits.len() != expected {
            return Err(FrameError::DataLength {
                expected,
                actual: bits.len(),
            });
        }
        Self::from_fn(width, height, |c, r| {
            bits[r as usize * width as usize + c as usize] != 0
        })
    }

    /// Builds a frame from already packed rows (MSB-first, `stride` bytes per
    /// row, 1 = white). Padding bits are cleared.
    pub fn from_packed(width: u32, height: u32, mut packed: Vec<u8>) -> Result<Self, FrameError> {
        check_dims(width, height)?;
        let stride = (width as usize).div_ceil(8);
        let expected = stride * height as usize;
        if packed.len() != expected {
            return Err(FrameError::DataLength {
                expected,
                actual: packed.len(),
            });
        }
        let tail = width % 8;
        if tail != 0 {
            let mask = !(0xffu8 >> tail);
            for row in packed.chunks_exact_mut(stride) {
                row[stride - 1] &= mask;
            }
        }
        Ok(Self {
            width,
            height,
            stride,
            bits: packed,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    /// Bytes per packed row.
    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn packed(&self) -> &[u8] {
        &self.bits
    }

    pub fn packed_row(&self, row: u32) -> &[u8] {
        let start = row as usize * self.stride;
        &self.bits[start..start + self.stride]
    }

    #[inline]
    pub fn get(&self, col: u32, row: u32) -> bool {
        debug_assert!(col < self.width && row < self.height);
        let byte = self.bits[row as usize * self.stride + (col as usize >> 3)];
        byte & (0x80 >> (col & 7)) != 0
    }

    #[inline]
    pub fn set(&mut self, col: u32, row: u32, white: bool) {
        assert!(col < self.width && row < self.height, "pixel out of bounds");
        let byte = &mut self.bits[row as usize * self.stride + (col as usize >> 3)];
        let mask = 0x80 >> (col & 7);
        if white {
            *byte |= mask;
        } else {
            *byte &= !mask;
        }
    }

    /// White pixels in row-major order.
    pub fn white_pixels(&self) -> impl Iterator<Item = PixelCoord> + '_ {
        (0..self.height).flat_map(move |row| {
            (0..self.width)
                .filter(move |&col| self.get(col, row))
                .map(move |col| PixelCoord { col, row })
        })
    }
}

/// Maps each pixel to white iff all three channels fall inside `range`.
pub fn binarize(frame: &RgbFrame, range: &ColorRange) -> BinaryFrame {
    let mut out = BinaryFrame::new(frame.width, frame.height).expect("RgbFrame dims are non-zero");
    let width = frame.width as usize;
    for (row, rgb_row) in frame.data.chunks_exact(width * 3).enumerate() {
        let packed_row = &mut out.bits[row * out.stride..(row + 1) * out.stride];
        for (col, px) in rgb_row.chunks_exact(3).enumerate() {
            if range.contains([px[0], px[1], px[2]]) {
                packed_row[col >> 3] |= 0x80 >> (col & 7);
            }
        }
    }
    out
}

pub fn white_count(frame: &BinaryFrame) -> u64 {
    frame.bits.iter().map(|b| b.count_ones() as u64).sum()
}

/// Sum over all positions of `second - first`.
pub fn frame_diff_sum(first: &BinaryFrame, second: &BinaryFrame) -> Result<i64, FrameError> {
    if first.dimensions() != second.dimensions() {
        return Err(FrameError::DimensionMismatch {
            first: first.dimensions(),
            second: second.dimensions(),
        });
    }
    Ok(white_count(second) as i64 - white_count(first) as i64)
}
