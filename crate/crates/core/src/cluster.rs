//! Seed-fill extraction of connected white regions.
//!
//! The frame is scanned row-major for a white pixel that is not yet in the
//! visited record. Each such pixel seeds a flood over an explicit stack:
//! neighbors are marked visited when pushed, so every pixel enters the stack
//! at most once. The input frame is never modified.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::frame::{BinaryFrame, PixelCoord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Connectivity {
    /// Edge neighbors only.
    #[default]
    Four,
    /// Edge and corner neighbors.
    Eight,
}

impl Connectivity {
    fn offsets(self) -> &'static [(i32, i32)] {
        const FOUR: [(i32, i32); 4] = [(0, -1), (-1, 0), (1, 0), (0, 1)];
        const EIGHT: [(i32, i32); 8] = [
            (-1, -1),
            (0, -1),
            (1, -1),
            (-1, 0),
            (1, 0),
            (-1, 1),
            (0, 1),
            (1, 1),
        ];
        match self {
            Connectivity::Four => &FOUR,
            Connectivity::Eight => &EIGHT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClusterError {
    /// No cluster to track.
    Empty,
}

impl fmt::Display for ClusterError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClusterError::Empty => f.write_str("frame contains no clusters"),
        }
    }
}

impl core::error::Error for ClusterError {}

/// Inclusive pixel bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundingBox {
    pub min_col: u32,
    pub min_row: u32,
    pub max_col: u32,
    pub max_row: u32,
}

impl BoundingBox {
    fn at(p: PixelCoord) -> Self {
        Self {
            min_col: p.col,
            min_row: p.row,
            max_col: p.col,
            max_row: p.row,
        }
    }

    fn include(&mut self, p: PixelCoord) {
        self.min_col = self.min_col.min(p.col);
        self.min_row = self.min_row.min(p.row);
        self.max_col = self.max_col.max(p.col);
        self.max_row = self.max_row.max(p.row);
    }

    pub fn contains(&self, col: f64, row: f64) -> bool {
        col >= self.min_col as f64
            && col <= self.max_col as f64
            && row >= self.min_row as f64
            && row <= self.max_row as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    /// Position in scan-discovery order.
    pub id: usize,
    pub pixel_count: u64,
    /// Member pixels in fill order. Shorter than `pixel_count` only when the
    /// labeler's pixel cap was hit.
    pub pixels: Vec<PixelCoord>,
    pub bbox: BoundingBox,
    pub centroid_col: f64,
    pub centroid_row: f64,
    /// The pixel that seeded the fill, i.e. the first one met by the scan.
    pub seed: PixelCoord,
}

impl Cluster {
    /// Mean `(col, row)` of the member pixels.
    pub fn centroid(&self) -> (f64, f64) {
        (self.centroid_col, self.centroid_row)
    }

    pub fn is_truncated(&self) -> bool {
        (self.pixels.len() as u64) < self.pixel_count
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSet {
    pub clusters: Vec<Cluster>,
    pub source_width: u32,
    pub source_height: u32,
}

impl ClusterSet {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Cluster> {
        self.clusters.iter()
    }

    /// The cluster whose seed comes first in row-major scan order.
    pub fn top_left(&self) -> Result<&Cluster, ClusterError> {
        self.clusters
            .iter()
            .min_by_key(|c| (c.seed.row, c.seed.col))
            .ok_or(ClusterError::Empty)
    }
}

pub fn cluster_count(set: &ClusterSet) -> usize {
    set.clusters.len()
}

/// Seed-fill labeler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Labeler {
    pub connectivity: Connectivity,
    /// Maximum number of pixels stored per cluster; `None` keeps all of them.
    pub pixel_cap: Option<usize>,
}

impl Labeler {
    pub fn new(connectivity: Connectivity) -> Self {
        Self {
            connectivity,
            pixel_cap: None,
        }
    }

    pub fn with_pixel_cap(mut self, cap: usize) -> Self {
        self.pixel_cap = Some(cap);
        self
    }

    pub fn extract(&self, frame: &BinaryFrame) -> ClusterSet {
        let (width, height) = frame.dimensions();
        let stride = frame.stride();
        let bits = frame.packed();
        let mut visited = vec![0u8; bits.len()];
        let mut stack: Vec<(u32, u32)> = Vec::new();
        let mut clusters = Vec::new();
        let offsets = self.connectivity.offsets();
        let cap = self.pixel_cap.unwrap_or(usize::MAX);

        for (i, &byte) in bits.iter().enumerate() {
            let row = (i / stride) as u32;
            let col_base = ((i % stride) * 8) as u32;
            loop {
                let fresh = byte & !visited[i];
                if fresh == 0 {
                    break;
                }
                let seed = PixelCoord::new(col_base + fresh.leading_zeros(), row);
                visited[i] |= 0x80 >> (seed.col & 7);
                stack.push((seed.col, seed.row));

                let mut pixels = Vec::new();
                let mut count = 0u64;
                let (mut sum_col, mut sum_row) = (0u64, 0u64);
                let mut bbox = BoundingBox::at(seed);

                while let Some((c, r)) = stack.pop() {
                    let p = PixelCoord::new(c, r);
                    count += 1;
                    sum_col += c as u64;
                    sum_row += r as u64;
                    bbox.include(p);
                    if pixels.len() < cap {
                        pixels.push(p);
                    }
                    for &(dc, dr) in offsets {
                        let nc = c as i64 + dc as i64;
                        let nr = r as i64 + dr as i64;
                        if nc < 0 || nr < 0 || nc >= width as i64 || nr >= height as i64 {
                            continue;
                        }
                        let (nc, nr) = (nc as u32, nr as u32);
                        let idx = nr as usize * stride + (nc as usize >> 3);
                        let mask = 0x80u8 >> (nc & 7);
                        if bits[idx] & mask != 0 && visited[idx] & mask == 0 {
                            visited[idx] |= mask;
                            stack.push((nc, nr));
                        }
                    }
                }

                clusters.push(Cluster {
                    id: clusters.len(),
                    pixel_count: count,
                    pixels,
                    bbox,
                    centroid_col: sum_col as f64 / count as f64,
                    centroid_row: sum_row as f64 / count as f64,
                    seed,
                });
            }
        }

        ClusterSet {
            clusters,
            source_width: width,
            source_height: height,
        }
    }
}

/// Extracts all clusters, keeping every member pixel.
pub fn extract_clusters(frame: &BinaryFrame, connectivity: Connectivity) -> ClusterSet {
    Labeler::new(connectivity).extract(frame)
}
