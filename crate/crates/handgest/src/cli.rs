//! Subcommands of the `handgest` tool.
//!
//! Each command writes to the given streams and returns its exit status:
//! 0 on success, 2 for usage, parse and I/O errors, 3 for inconsistent data.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use handgest_core::{
    binarize, detect_alignment, expected_events, extract_clusters, generate, pointing_direction,
    Alignment, BinaryFrame, CartesianPoint, ColorRange, GestureEvent, GestureKind, MotionError,
    Scenario, Tracker,
};
use serde::Serialize;
use thiserror::Error;

use crate::config::{parse_connectivity, CliConfig};
use crate::netpbm::{read_image, read_pbm, read_ppm, write_pbm, Image};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DATA: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn io_err(path: &Path, e: io::Error) -> CliError {
    usage(format!("{}: {e}", path.display()))
}

#[derive(Debug, Parser)]
#[command(name = "handgest", version, about = "Hand gesture recognition over netpbm frames")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a PPM image into a PBM logical array using a color range.
    Binarize {
        input: PathBuf,
        /// "rmin:rmax,gmin:gmax,bmin:bmax", inclusive, 0-255.
        range: String,
        output: PathBuf,
    },
    /// Print one JSON line per cluster of a PBM image, then a summary line.
    Clusters {
        input: PathBuf,
        /// Pixel adjacency: 4 or 8.
        #[arg(long, short, default_value = "4")]
        connectivity: String,
        /// Spread allowed when classifying centroid alignment.
        #[arg(long, default_value_t = 5.0)]
        alignment_threshold: f64,
    },
    /// Run the gesture detectors over frames and print JSON-lines events.
    Detect {
        /// PPM/PBM files, or directories read in lexicographic order.
        frames: Vec<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write events here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Render a JSON scenario to PBM frames and print the expected events.
    Synth {
        scenario: PathBuf,
        output_dir: PathBuf,
        /// Thresholds used for the expected events.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// Runs a parsed command, printing diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result = match cli.command {
        Command::Binarize {
            input,
            range,
            output,
        } => cmd_binarize(&input, &range, &output),
        Command::Clusters {
            input,
            connectivity,
            alignment_threshold,
        } => cmd_clusters(&input, &connectivity, alignment_threshold, out),
        Command::Detect {
            frames,
            config,
            output,
        } => cmd_detect(&frames, config.as_deref(), output.as_deref(), out),
        Command::Synth {
            scenario,
            output_dir,
            config,
        } => cmd_synth(&scenario, &output_dir, config.as_deref(), out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "handgest: {e}");
            e.exit_code()
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| io_err(path, e))
}

pub fn cmd_binarize(input: &Path, range: &str, output: &Path) -> Result<(), CliError> {
    let range: ColorRange = range.parse().map_err(|e| usage(format!("{e}")))?;
    let frame = read_ppm(&read_file(input)?)
        .map_err(|e| usage(format!("{}: {e}", input.display())))?;
    let bits = binarize(&frame, &range);
    fs::write(output, write_pbm(&bits)).map_err(|e| io_err(output, e))
}

/// Rounds to six fractional digits so printed numbers stay short and stable.
pub fn round6(v: f64) -> f64 {
    let r = (v * 1e6).round() / 1e6;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[derive(Serialize)]
struct Point {
    x: f64,
    y: f64,
}

impl From<CartesianPoint> for Point {
    fn from(p: CartesianPoint) -> Self {
        Point {
            x: round6(p.x),
            y: round6(p.y),
        }
    }
}

#[derive(Serialize)]
struct ImagePoint {
    col: f64,
    row: f64,
}

#[derive(Serialize)]
struct BboxLine {
    min_col: u32,
    min_row: u32,
    max_col: u32,
    max_row: u32,
}

#[derive(Serialize)]
struct ClusterLine {
    id: usize,
    pixel_count: u64,
    bbox: BboxLine,
    centroid: ImagePoint,
    centroid_cartesian: Point,
    direction_deg: Option<f64>,
}

#[derive(Serialize)]
struct SummaryLine {
    count: usize,
    alignment: Option<&'static str>,
}

fn emit(out: &mut dyn Write, value: &impl Serialize) -> Result<(), CliError> {
    serde_json::to_writer(&mut *out, value).map_err(|e| usage(e.to_string()))?;
    writeln!(out).map_err(|e| usage(e.to_string()))
}

pub fn cmd_clusters(
    input: &Path,
    connectivity: &str,
    alignment_threshold: f64,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let conn = parse_connectivity(connectivity)
        .ok_or_else(|| usage(format!("connectivity must be 4 or 8, got {connectivity:?}")))?;
    let frame = read_pbm(&read_file(input)?)
        .map_err(|e| usage(format!("{}: {e}", input.display())))?;
    let height = frame.height();
    let set = extract_clusters(&frame, conn);

    let mut centroids = Vec::with_capacity(set.len());
    for c in set.iter() {
        let cart = CartesianPoint::new(c.centroid_col, (height as f64 - 1.0) - c.centroid_row);
        centroids.push(cart);
        let line = ClusterLine {
            id: c.id,
            pixel_count: c.pixel_count,
            bbox: BboxLine {
                min_col: c.bbox.min_col,
                min_row: c.bbox.min_row,
                max_col: c.bbox.max_col,
                max_row: c.bbox.max_row,
            },
            centroid: ImagePoint {
                col: round6(c.centroid_col),
                row: round6(c.centroid_row),
            },
            centroid_cartesian: cart.into(),
            direction_deg: pointing_direction(&c.pixels, height).ok().map(round6),
        };
        emit(out, &line)?;
    }
    let alignment = detect_alignment(&centroids, alignment_threshold)
        .ok()
        .map(|a| match a {
            Alignment::Horizontal => "horizontal",
            Alignment::Vertical => "vertical",
            Alignment::Both => "both",
            Alignment::None => "none",
        });
    emit(
        out,
        &SummaryLine {
            count: set.len(),
            alignment,
        },
    )
}

#[derive(Serialize)]
struct EventLine {
    frame: u64,
    event: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    speed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    magnitude: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    center: Option<Point>,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
}

impl From<&GestureEvent> for EventLine {
    fn from(e: &GestureEvent) -> Self {
        let mut line = EventLine {
            frame: e.frame_index,
            event: e.kind().as_str(),
            speed: None,
            magnitude: None,
            center: None,
            radius: None,
        };
        match e.gesture {
            GestureKind::Up { speed }
            | GestureKind::Down { speed }
            | GestureKind::Left { speed }
            | GestureKind::Right { speed } => line.speed = Some(round6(speed)),
            GestureKind::ZoomIn { magnitude } | GestureKind::ZoomOut { magnitude } => {
                line.magnitude = Some(magnitude)
            }
            GestureKind::RotateCw { center, radius } | GestureKind::RotateCcw { center, radius } => {
                line.center = Some(center.into());
                line.radius = Some(round6(radius));
            }
        }
        line
    }
}

/// Expands directories into their netpbm files, sorted by path.
pub fn collect_frames(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut frames = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut entries = Vec::new();
            for entry in fs::read_dir(input).map_err(|e| io_err(input, e))? {
                let path = entry.map_err(|e| io_err(input, e))?.path();
                let is_pnm = path
                    .extension()
                    .and_then(|e| e.to_str())
                    .is_some_and(|e| matches!(e.to_ascii_lowercase().as_str(), "pbm" | "ppm" | "pnm"));
                if is_pnm && path.is_file() {
                    entries.push(path);
                }
            }
            entries.sort();
            frames.extend(entries);
        } else {
            frames.push(input.clone());
        }
    }
    Ok(frames)
}

fn load_config(path: Option<&Path>) -> Result<CliConfig, CliError> {
    match path {
        Some(p) => CliConfig::load(p).map_err(|e| usage(e.to_string())),
        None => Ok(CliConfig::default()),
    }
}

fn load_binary(path: &Path, range: Option<&ColorRange>) -> Result<BinaryFrame, CliError> {
    let image = read_image(&read_file(path)?)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    match image {
        Image::Binary(b) => Ok(b),
        Image::Rgb(rgb) => {
            let range = range.ok_or_else(|| {
                usage(format!(
                    "{}: color frames need \"color_range\" in the config",
                    path.display()
                ))
            })?;
            Ok(binarize(&rgb, range))
        }
    }
}

pub fn cmd_detect(
    inputs: &[PathBuf],
    config_path: Option<&Path>,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let config = load_config(config_path)?;
    let tracker_config = config.tracker_config().map_err(|e| usage(e.to_string()))?;
    let inputs = match (inputs.is_empty(), &config.input) {
        (false, _) => inputs.to_vec(),
        (true, Some(p)) => vec![p.clone()],
        (true, None) => return Err(usage("no frames given")),
    };
    let frames = collect_frames(&inputs)?;

    let mut file_out;
    let sink: &mut dyn Write = match output.or(config.output.as_deref()) {
        Some(p) => {
            file_out = io::BufWriter::new(fs::File::create(p).map_err(|e| io_err(p, e))?);
            &mut file_out
        }
        None => out,
    };

    let mut tracker = Tracker::new(tracker_config).map_err(|e| usage(e.to_string()))?;
    for path in &frames {
        let frame = load_binary(path, config.color_range.as_ref())?;
        let events = tracker.push(&frame).map_err(|e| match e {
            MotionError::DimensionChange { .. } => {
                CliError::Data(format!("{}: {e}", path.display()))
            }
            other => usage(other.to_string()),
        })?;
        for e in &events {
            emit(sink, &EventLine::from(e))?;
        }
        sink.flush().map_err(|e| usage(e.to_string()))?;
    }
    for e in &tracker.finish() {
        emit(sink, &EventLine::from(e))?;
    }
    sink.flush().map_err(|e| usage(e.to_string()))
}

pub fn cmd_synth(
    scenario_path: &Path,
    output_dir: &Path,
    config_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let text = fs::read_to_string(scenario_path).map_err(|e| io_err(scenario_path, e))?;
    let scenario: Scenario = serde_json::from_str(&text)
        .map_err(|e| usage(format!("{}: {e}", scenario_path.display())))?;
    let config = load_config(config_path)?
        .tracker_config()
        .map_err(|e| usage(e.to_string()))?;
    let frames = generate(&scenario).map_err(|e| usage(e.to_string()))?;

    fs::create_dir_all(output_dir).map_err(|e| io_err(output_dir, e))?;
    for (i, frame) in frames.iter().enumerate() {
        let path = output_dir.join(format!("frame_{i:04}.pbm"));
        fs::write(&path, write_pbm(frame)).map_err(|e| io_err(&path, e))?;
    }
    let expected: Vec<&str> = expected_events(&scenario, &config)
        .into_iter()
        .map(|k| k.as_str())
        .collect();
    emit(out, &expected)
}
