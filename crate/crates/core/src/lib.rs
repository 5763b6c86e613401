//! Hand gesture recognition primitives.
//!
//! The pipeline runs color-range binarization into a logical array, then
//! seed-fill cluster extraction. Geometry covers alignment, pointing direction,
//! three-point circle fitting and rotation sense. Streaming detectors turn a
//! sequence of binary frames into swipe, scroll, zoom and rotation events.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, configuration
//! parsing and the command-line tool live in the `handgest` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cluster;
pub mod frame;
pub mod geometry;
pub mod motion;
pub mod synth;

pub use cluster::{
    cluster_count, extract_clusters, BoundingBox, Cluster, ClusterError, ClusterSet, Connectivity,
    Labeler,
};
pub use frame::{
    binarize, frame_diff_sum, white_count, BinaryFrame, ColorRange, FrameError, PixelCoord,
    RgbFrame,
};
pub use geometry::{
    detect_alignment, fit_circle, pointing_direction, rotation_sense, to_cartesian, Alignment,
    CartesianPoint, CircleFit, GeometryError, RotationSense,
};
pub use motion::{
    classify_swipe, classify_zoom, detect_in_out, detect_rotation, EventKind, GestureEvent,
    GestureKind, MotionError, Tracker, TrackerConfig, TrackerState,
};
pub use synth::{expected_events, generate, Motion, Scenario, SynthError};
