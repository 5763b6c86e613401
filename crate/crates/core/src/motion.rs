//! Streaming gesture detectors over a sequence of binary frames.
//!
//! A [`Tracker`] follows the centroid of the top-left cluster. Frames where
//! the cluster is in view and moving form a segment; the segment closes when
//! the cluster stays put for `stationary_frame_limit` frames or leaves view,
//! and its net displacement decides whether an up/down/left/right gesture
//! happened. Zoom (frame subtraction) and rotation (three-point circle) are
//! evaluated on every consecutive pair and triple independently of segments.

use alloc::vec::Vec;
use core::fmt;

use crate::cluster::{Connectivity, Labeler};
use crate::frame::{frame_diff_sum, white_count, BinaryFrame, ColorRange, FrameError};
use crate::geometry::{fit_circle, rotation_sense, CartesianPoint, RotationSense};

#[derive(Debug, Clone, PartialEq)]
pub enum MotionError {
    InvalidConfig(&'static str),
    DimensionChange {
        frame_index: u64,
        expected: (u32, u32),
        found: (u32, u32),
    },
    Frame(FrameError),
}

impl fmt::Display for MotionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MotionError::InvalidConfig(msg) => write!(f, "invalid tracker config: {msg}"),
            MotionError::DimensionChange {
                frame_index,
                expected,
                found,
            } => write!(
                f,
                "frame {frame_index} is {}x{}, stream is {}x{}",
                found.0, found.1, expected.0, expected.1
            ),
            MotionError::Frame(e) => fmt::Display::fmt(e, f),
        }
    }
}

impl core::error::Error for MotionError {}

impl From<FrameError> for MotionError {
    fn from(e: FrameError) -> Self {
        MotionError::Frame(e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackerConfig {
    /// Needed only when frames arrive as color images.
    pub color_range: Option<ColorRange>,
    pub connectivity: Connectivity,
    pub stationary_frame_limit: u32,
    pub stationary_epsilon: f64,
    pub vertical_threshold: f64,
    pub horizontal_threshold: f64,
    pub zoom_threshold: u64,
    pub rotation_min_radius: f64,
    pub rotation_max_radius: f64,
    pub alignment_threshold: f64,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self {
            color_range: None,
            connectivity: Connectivity::Four,
            stationary_frame_limit: 5,
            stationary_epsilon: 1.0,
            vertical_threshold: 20.0,
            horizontal_threshold: 20.0,
            zoom_threshold: 50,
            rotation_min_radius: 5.0,
            rotation_max_radius: 1000.0,
            alignment_threshold: 5.0,
        }
    }
}

impl TrackerConfig {
    pub fn validate(&self) -> Result<(), MotionError> {
        let non_negative = |v: f64| v >= 0.0 && !v.is_nan();
        if self.stationary_frame_limit == 0 {
            return Err(MotionError::InvalidConfig("stationary_frame_limit must be at least 1"));
        }
        for (v, msg) in [
            (self.stationary_epsilon, "stationary_epsilon must be >= 0"),
            (self.vertical_threshold, "vertical_threshold must be >= 0"),
            (self.horizontal_threshold, "horizontal_threshold must be >= 0"),
            (self.rotation_min_radius, "rotation_min_radius must be >= 0"),
            (self.rotation_max_radius, "rotation_max_radius must be >= 0"),
            (self.alignment_threshold, "alignment_threshold must be >= 0"),
        ] {
            if !non_negative(v) {
                return Err(MotionError::InvalidConfig(msg));
            }
        }
        if self.rotation_min_radius > self.rotation_max_radius {
            return Err(MotionError::InvalidConfig(
                "rotation_min_radius exceeds rotation_max_radius",
            ));
        }
        Ok(())
    }
}

/// Payload-free event tag, also used as the ground-truth descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum EventKind {
    Up,
    Down,
    Left,
    Right,
    ZoomIn,
    ZoomOut,
    RotateCw,
    RotateCcw,
}

impl EventKind {
    pub const ALL: [EventKind; 8] = [
        EventKind::Up,
        EventKind::Down,
        EventKind::Left,
        EventKind::Right,
        EventKind::ZoomIn,
        EventKind::ZoomOut,
        EventKind::RotateCw,
        EventKind::RotateCcw,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Up => "up",
            EventKind::Down => "down",
            EventKind::Left => "left",
            EventKind::Right => "right",
            EventKind::ZoomIn => "zoom_in",
            EventKind::ZoomOut => "zoom_out",
            EventKind::RotateCw => "rotate_cw",
            EventKind::RotateCcw => "rotate_ccw",
        }
    }

    /// The opposite direction, sense or zoom.
    pub fn contradiction(self) -> EventKind {
        match self {
            EventKind::Up => EventKind::Down,
            EventKind::Down => EventKind::Up,
            EventKind::Left => EventKind::Right,
            EventKind::Right => EventKind::Left,
            EventKind::ZoomIn => EventKind::ZoomOut,
            EventKind::ZoomOut => EventKind::ZoomIn,
            EventKind::RotateCw => EventKind::RotateCcw,
            EventKind::RotateCcw => EventKind::RotateCw,
        }
    }
}

impl core::str::FromStr for EventKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EventKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GestureKind {
    /// Speeds are in pixels per frame.
    Up { speed: f64 },
    Down { speed: f64 },
    Left { speed: f64 },
    Right { speed: f64 },
    /// Magnitudes are whole pixels.
    ZoomIn { magnitude: u64 },
    ZoomOut { magnitude: u64 },
    RotateCw { center: CartesianPoint, radius: f64 },
    RotateCcw { center: CartesianPoint, radius: f64 },
}

impl GestureKind {
    pub fn kind(&self) -> EventKind {
        match self {
            GestureKind::Up { .. } => EventKind::Up,
            GestureKind::Down { .. } => EventKind::Down,
            GestureKind::Left { .. } => EventKind::Left,
            GestureKind::Right { .. } => EventKind::Right,
            GestureKind::ZoomIn { .. } => EventKind::ZoomIn,
            GestureKind::ZoomOut { .. } => EventKind::ZoomOut,
            GestureKind::RotateCw { .. } => EventKind::RotateCw,
            GestureKind::RotateCcw { .. } => EventKind::RotateCcw,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GestureEvent {
    /// Index of the frame that completed the event.
    pub frame_index: u64,
    pub gesture: GestureKind,
}

impl GestureEvent {
    pub fn kind(&self) -> EventKind {
        self.gesture.kind()
    }
}

/// Zoom decision for a signed white-pixel difference (`second - first`).
pub fn classify_zoom(diff: i64, threshold: u64) -> Option<GestureKind> {
    let magnitude = diff.unsigned_abs();
    if magnitude < threshold {
        None
    } else if diff < 0 {
        Some(GestureKind::ZoomOut { magnitude })
    } else {
        Some(GestureKind::ZoomIn { magnitude })
    }
}

/// Frame subtraction: more white pixels in `second` is a zoom-in.
pub fn detect_in_out(
    first: &BinaryFrame,
    second: &BinaryFrame,
    zoom_threshold: u64,
) -> Result<Option<GestureKind>, FrameError> {
    Ok(classify_zoom(frame_diff_sum(first, second)?, zoom_threshold))
}

/// Rotation event for three consecutive centroids, if they fit a circle whose
/// radius lies inside the configured bounds.
pub fn detect_rotation(
    c1: CartesianPoint,
    c2: CartesianPoint,
    c3: CartesianPoint,
    config: &TrackerConfig,
) -> Option<GestureKind> {
    let fit = fit_circle(c1, c2, c3).ok()?;
    if fit.radius < config.rotation_min_radius || fit.radius > config.rotation_max_radius {
        return None;
    }
    let (center, radius) = (fit.center, fit.radius);
    Some(match rotation_sense(c1, c2, c3).ok()? {
        RotationSense::AntiClockwise => GestureKind::RotateCcw { center, radius },
        RotationSense::Clockwise => GestureKind::RotateCw { center, radius },
    })
}

/// Swipe/scroll decision for a closed segment's net displacement.
///
/// Only axes that reach their threshold compete; the larger displacement wins
/// and ties go to the vertical axis.
pub fn classify_swipe(dx: f64, dy: f64, frames: u64, config: &TrackerConfig) -> Option<GestureKind> {
    if frames == 0 {
        return None;
    }
    let vertical = dy != 0.0 && dy.abs() >= config.vertical_threshold;
    let horizontal = dx != 0.0 && dx.abs() >= config.horizontal_threshold;
    let use_vertical = match (vertical, horizontal) {
        (false, false) => return None,
        (true, false) => true,
        (false, true) => false,
        (true, true) => dy.abs() >= dx.abs(),
    };
    let n = frames as f64;
    Some(if use_vertical {
        let speed = dy.abs() / n;
        if dy > 0.0 {
            GestureKind::Up { speed }
        } else {
            GestureKind::Down { speed }
        }
    } else {
        let speed = dx.abs() / n;
        if dx > 0.0 {
            GestureKind::Right { speed }
        } else {
            GestureKind::Left { speed }
        }
    })
}

/// Accumulated per-stream state.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrackerState {
    pub segment_start_centroid: Option<CartesianPoint>,
    pub current_centroid: Option<CartesianPoint>,
    pub frames_in_segment: u64,
    pub stationary_streak: u32,
    pub last_white_count: Option<u64>,
    /// Up to three most recent consecutive centroids, oldest first.
    pub centroid_history: Vec<CartesianPoint>,
}

impl TrackerState {
    fn record_centroid(&mut self, p: CartesianPoint) {
        if self.centroid_history.len() == 3 {
            self.centroid_history.remove(0);
        }
        self.centroid_history.push(p);
    }
}

#[derive(Debug, Clone)]
pub struct Tracker {
    config: TrackerConfig,
    labeler: Labeler,
    state: TrackerState,
    dimensions: Option<(u32, u32)>,
    frames_seen: u64,
}

impl Tracker {
    pub fn new(config: TrackerConfig) -> Result<Self, MotionError> {
        config.validate()?;
        // only centroids are needed, so no pixel lists are kept
        let labeler = Labeler::new(config.connectivity).with_pixel_cap(0);
        Ok(Self {
            config,
            labeler,
            state: TrackerState::default(),
            dimensions: None,
            frames_seen: 0,
        })
    }

    pub fn config(&self) -> &TrackerConfig {
        &self.config
    }

    pub fn state(&self) -> &TrackerState {
        &self.state
    }

    pub fn frames_seen(&self) -> u64 {
        self.frames_seen
    }

    /// Feeds the next frame and returns every event it completes.
    pub fn push(&mut self, frame: &BinaryFrame) -> Result<Vec<GestureEvent>, MotionError> {
        let dims = frame.dimensions();
        match self.dimensions {
            Some(expected) if expected != dims => {
                return Err(MotionError::DimensionChange {
                    frame_index: self.frames_seen,
                    expected,
                    found: dims,
                })
            }
            _ => self.dimensions = Some(dims),
        }
        let frame_index = self.frames_seen;
        self.frames_seen += 1;
        let mut events = Vec::new();

        let clusters = self.labeler.extract(frame);
        match clusters.top_left() {
            Err(_) => {
                // out of view
                if let Some(gesture) = self.close_segment() {
                    events.push(GestureEvent {
                        frame_index,
                        gesture,
                    });
                }
                self.state.centroid_history.clear();
            }
            Ok(cluster) => {
                let p = CartesianPoint::new(
                    cluster.centroid_col,
                    (dims.1 as f64 - 1.0) - cluster.centroid_row,
                );
                let state = &mut self.state;
                match state.current_centroid {
                    Some(prev) => {
                        if p.distance(prev) < self.config.stationary_epsilon {
                            state.stationary_streak += 1;
                        } else {
                            state.stationary_streak = 0;
                        }
                        state.current_centroid = Some(p);
                        state.frames_in_segment += 1;
                        if state.stationary_streak >= self.config.stationary_frame_limit {
                            if let Some(gesture) = self.close_segment() {
                                events.push(GestureEvent {
                                    frame_index,
                                    gesture,
                                });
                            }
                        }
                    }
                    None => {
                        state.segment_start_centroid = Some(p);
                        state.current_centroid = Some(p);
                        state.frames_in_segment = 1;
                        state.stationary_streak = 0;
                    }
                }
                self.state.record_centroid(p);
            }
        }

        let count = white_count(frame);
        if let Some(last) = self.state.last_white_count {
            if let Some(gesture) = classify_zoom(count as i64 - last as i64, self.config.zoom_threshold)
            {
                events.push(GestureEvent {
                    frame_index,
                    gesture,
                });
            }
        }
        self.state.last_white_count = Some(count);

        if let [c1, c2, c3] = self.state.centroid_history[..] {
            if let Some(gesture) = detect_rotation(c1, c2, c3, &self.config) {
                events.push(GestureEvent {
                    frame_index,
                    gesture,
                });
            }
        }
        Ok(events)
    }

    /// Ends the stream: an open segment is closed as if the cluster had left
    /// view after the last frame. The tracker can be reused afterwards.
    pub fn finish(&mut self) -> Vec<GestureEvent> {
        let frame_index = self.frames_seen.saturating_sub(1);
        let events = self
            .close_segment()
            .map(|gesture| GestureEvent {
                frame_index,
                gesture,
            })
            .into_iter()
            .collect();
        self.state = TrackerState::default();
        events
    }

    fn close_segment(&mut self) -> Option<GestureKind> {
        let state = &mut self.state;
        let start = state.segment_start_centroid.take()?;
        let end = state.current_centroid.take().unwrap_or(start);
        let frames = core::mem::take(&mut state.frames_in_segment);
        state.stationary_streak = 0;
        classify_swipe(end.x - start.x, end.y - start.y, frames, &self.config)
    }
}
