//! Synthetic frame sequences with known ground truth.
//!
//! Discs are placed in Cartesian coordinates and rasterized by a plain
//! center-distance test: pixel `(col, row)` sits at Cartesian
//! `(col, height - 1 - row)` and is white iff it lies within the disc radius.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::frame::BinaryFrame;
use crate::geometry::{normalize_degrees, CartesianPoint};
use crate::motion::{classify_swipe, classify_zoom, EventKind, TrackerConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum SynthError {
    InvalidParameter(&'static str),
    DiscOutOfBounds { frame: u32 },
}

impl fmt::Display for SynthError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SynthError::InvalidParameter(msg) => write!(f, "invalid scenario: {msg}"),
            SynthError::DiscOutOfBounds { frame } => {
                write!(f, "disc leaves the frame at step {frame}")
            }
        }
    }
}

impl core::error::Error for SynthError {}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "variant", rename_all = "snake_case"))]
pub enum Motion {
    /// Disc moving at constant velocity (pixels/frame, y up).
    LinearMotion {
        start: CartesianPoint,
        velocity: (f64, f64),
        disc_radius: f64,
    },
    /// Disc orbiting `center`; positive angular velocity is counterclockwise.
    CircularMotion {
        center: CartesianPoint,
        radius: f64,
        angular_velocity: f64,
        disc_radius: f64,
        #[cfg_attr(feature = "serde", serde(default))]
        start_angle: f64,
    },
    /// Stationary disc whose radius changes linearly from first to last frame.
    ScalingDisc {
        center: CartesianPoint,
        radius_start: f64,
        radius_end: f64,
    },
    Static {
        disc_centers: Vec<CartesianPoint>,
        disc_radius: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Scenario {
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub motion: Motion,
    pub frame_count: u32,
    pub width: u32,
    pub height: u32,
    /// Seed for speckle noise.
    #[cfg_attr(feature = "serde", serde(default))]
    pub seed: u64,
    /// Probability that any pixel is additionally set white.
    #[cfg_attr(feature = "serde", serde(default))]
    pub speckle: f64,
}

impl Scenario {
    pub fn new(motion: Motion, frame_count: u32, width: u32, height: u32) -> Self {
        Self {
            motion,
            frame_count,
            width,
            height,
            seed: 0,
            speckle: 0.0,
        }
    }

    /// Disc centers and radii at step `t`.
    pub fn discs_at(&self, t: u32) -> Vec<(CartesianPoint, f64)> {
        let tf = t as f64;
        match &self.motion {
            Motion::LinearMotion {
                start,
                velocity,
                disc_radius,
            } => alloc::vec![(
                CartesianPoint::new(start.x + velocity.0 * tf, start.y + velocity.1 * tf),
                *disc_radius
            )],
            Motion::CircularMotion {
                center,
                radius,
                angular_velocity,
                disc_radius,
                start_angle,
            } => {
                let a = (start_angle + angular_velocity * tf).to_radians();
                let (s, c) = libm::sincos(a);
                alloc::vec![(
                    CartesianPoint::new(center.x + radius * c, center.y + radius * s),
                    *disc_radius
                )]
            }
            Motion::ScalingDisc {
                center,
                radius_start,
                radius_end,
            } => {
                let frac = if self.frame_count > 1 {
                    tf / (self.frame_count - 1) as f64
                } else {
                    0.0
                };
                alloc::vec![(*center, radius_start + (radius_end - radius_start) * frac)]
            }
            Motion::Static {
                disc_centers,
                disc_radius,
            } => disc_centers.iter().map(|&c| (c, *disc_radius)).collect(),
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        use SynthError::InvalidParameter as Bad;
        if self.frame_count == 0 {
            return Err(Bad("frame_count must be at least 1"));
        }
        if self.width == 0 || self.height == 0 {
            return Err(Bad("width and height must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.speckle) {
            return Err(Bad("speckle must lie in [0, 1]"));
        }
        let finite = |v: f64| v.is_finite();
        let ok = match &self.motion {
            Motion::LinearMotion {
                start,
                velocity,
                disc_radius,
            } => start.is_finite() && finite(velocity.0) && finite(velocity.1) && *disc_radius > 0.0,
            Motion::CircularMotion {
                center,
                radius,
                angular_velocity,
                disc_radius,
                start_angle,
            } => {
                center.is_finite()
                    && *radius >= 0.0
                    && finite(*angular_velocity)
                    && finite(*start_angle)
                    && *disc_radius > 0.0
            }
            Motion::ScalingDisc {
                center,
                radius_start,
                radius_end,
            } => center.is_finite() && *radius_start > 0.0 && *radius_end > 0.0,
            Motion::Static {
                disc_centers,
                disc_radius,
            } => disc_centers.iter().all(|c| c.is_finite()) && *disc_radius > 0.0,
        };
        if !ok {
            return Err(Bad("positions must be finite and radii positive"));
        }
        let (w, h) = ((self.width - 1) as f64, (self.height - 1) as f64);
        for t in 0..self.frame_count {
            for (c, r) in self.discs_at(t) {
                if !r.is_finite() || c.x - r < 0.0 || c.x + r > w || c.y - r < 0.0 || c.y + r > h {
                    return Err(SynthError::DiscOutOfBounds { frame: t });
                }
            }
        }
        Ok(())
    }
}

fn rasterize(frame: &mut BinaryFrame, center: CartesianPoint, radius: f64) {
    let top = frame.height() as f64 - 1.0;
    let col_lo = libm::floor(center.x - radius).max(0.0) as u32;
    let col_hi = (libm::ceil(center.x + radius) as u32).min(frame.width() - 1);
    let y_lo = libm::floor(center.y - radius).max(0.0) as u32;
    let y_hi = (libm::ceil(center.y + radius) as u32).min(frame.height() - 1);
    let r2 = radius * radius;
    for y in y_lo..=y_hi {
        let dy = y as f64 - center.y;
        for col in col_lo..=col_hi {
            let dx = col as f64 - center.x;
            if dx * dx + dy * dy <= r2 {
                frame.set(col, (top - y as f64) as u32, true);
            }
        }
    }
}

/// Renders every frame of the scenario. Validation runs first, so nothing is
/// produced for a scenario whose discs would leave the frame.
pub fn generate(scenario: &Scenario) -> Result<Vec<BinaryFrame>, SynthError> {
    scenario.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
    (0..scenario.frame_count)
        .map(|t| {
            let mut frame = BinaryFrame::new(scenario.width, scenario.height)
                .map_err(|_| SynthError::InvalidParameter("bad frame size"))?;
            for (c, r) in scenario.discs_at(t) {
                rasterize(&mut frame, c, r);
            }
            if scenario.speckle > 0.0 {
                for row in 0..scenario.height {
                    for col in 0..scenario.width {
                        if rng.gen_bool(scenario.speckle) {
                            frame.set(col, row, true);
                        }
                    }
                }
            }
            Ok(frame)
        })
        .collect()
}

/// Pixels covered by the union of discs, counted over the full grid.
fn covered_pixels(scenario: &Scenario, t: u32) -> u64 {
    let discs = scenario.discs_at(t);
    let mut n = 0;
    for y in 0..scenario.height {
        for x in 0..scenario.width {
            let hit = discs.iter().any(|(c, r)| {
                let (dx, dy) = (x as f64 - c.x, y as f64 - c.y);
                dx * dx + dy * dy <= r * r
            });
            n += hit as u64;
        }
    }
    n
}

/// Swipe kinds produced by replaying the segment rule on exact disc centers.
fn segment_swipes(centers: &[CartesianPoint], config: &TrackerConfig) -> Vec<EventKind> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < centers.len() {
        let start = centers[i];
        let mut end = i;
        let mut still = 0;
        while end + 1 < centers.len() && still < config.stationary_frame_limit {
            let step = centers[end + 1].distance(centers[end]);
            still = if step < config.stationary_epsilon { still + 1 } else { 0 };
            end += 1;
        }
        let d = (centers[end].x - start.x, centers[end].y - start.y);
        let frames = (end - i + 1) as u64;
        if let Some(g) = classify_swipe(d.0, d.1, frames, config) {
            out.push(g.kind());
        }
        i = end + 1;
    }
    out
}

/// Event kinds a tracker is expected to emit for the scenario, deduplicated
/// and in [`EventKind`] order. Speckle noise is not modeled.
pub fn expected_events(scenario: &Scenario, config: &TrackerConfig) -> Vec<EventKind> {
    let mut kinds = BTreeSet::new();
    let n = scenario.frame_count;

    let counts: Vec<u64> = (0..n).map(|t| covered_pixels(scenario, t)).collect();
    for pair in counts.windows(2) {
        if let Some(g) = classify_zoom(pair[1] as i64 - pair[0] as i64, config.zoom_threshold) {
            kinds.insert(g.kind());
        }
    }

    match &scenario.motion {
        Motion::LinearMotion { .. } => {
            let centers: Vec<_> = (0..n).map(|t| scenario.discs_at(t)[0].0).collect();
            kinds.extend(segment_swipes(&centers, config));
        }
        Motion::CircularMotion {
            radius,
            angular_velocity,
            ..
        } => {
            let centers: Vec<_> = (0..n).map(|t| scenario.discs_at(t)[0].0).collect();
            kinds.extend(segment_swipes(&centers, config));
            let step = normalize_degrees(*angular_velocity);
            let in_bounds =
                *radius >= config.rotation_min_radius && *radius <= config.rotation_max_radius;
            if n >= 3 && *radius > 0.0 && in_bounds && step != 0.0 && step != 180.0 {
                kinds.insert(if step > 0.0 {
                    EventKind::RotateCcw
                } else {
                    EventKind::RotateCw
                });
            }
        }
        Motion::ScalingDisc { .. } | Motion::Static { .. } => {}
    }
    kinds.into_iter().collect()
}
