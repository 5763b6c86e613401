//! Stateless geometry on tracked points.
//!
//! Everything here works in Cartesian coordinates with y pointing up.
//! [`to_cartesian`] is the only place where image rows are flipped.

use core::fmt;

use crate::frame::PixelCoord;

/// Relative tolerance for degeneracy tests, scaled by the extent of the inputs.
pub const DEGENERACY_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryError {
    EmptyInput,
    NonFinite,
    InvalidThreshold,
    /// The farthest point coincides with the mean.
    DegenerateDirection,
    /// Collinear or coincident points.
    DegenerateCircle,
    /// Coincident first points or a straight (non-turning) triple.
    DegenerateTurn,
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeometryError::EmptyInput => "no points given",
            GeometryError::NonFinite => "point coordinates must be finite",
            GeometryError::InvalidThreshold => "threshold must be a non-negative number",
            GeometryError::DegenerateDirection => "direction undefined: cluster has zero extent",
            GeometryError::DegenerateCircle => "points are collinear or coincident",
            GeometryError::DegenerateTurn => "points do not turn",
        })
    }
}

impl core::error::Error for GeometryError {}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CartesianPoint {
    pub x: f64,
    pub y: f64,
}

impl CartesianPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(self, other: CartesianPoint) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }
}

/// `x = col`, `y = (frame_height - 1) - row`.
pub fn to_cartesian(p: PixelCoord, frame_height: u32) -> CartesianPoint {
    CartesianPoint {
        x: p.col as f64,
        y: (frame_height as f64 - 1.0) - p.row as f64,
    }
}

/// Image-convention `(col, row)` of a real-valued Cartesian point.
pub fn to_image(p: CartesianPoint, frame_height: u32) -> (f64, f64) {
    (p.x, (frame_height as f64 - 1.0) - p.y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alignment {
    Horizontal,
    Vertical,
    Both,
    None,
}

/// Points are horizontally aligned when their y-spread is within `threshold`,
/// vertically aligned when their x-spread is.
pub fn detect_alignment(
    points: &[CartesianPoint],
    threshold: f64,
) -> Result<Alignment, GeometryError> {
    if threshold.is_nan() || threshold < 0.0 {
        return Err(GeometryError::InvalidThreshold);
    }
    let first = points.first().ok_or(GeometryError::EmptyInput)?;
    let (mut min, mut max) = (*first, *first);
    for p in points {
        if !p.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        min.x = min.x.min(p.x);
        min.y = min.y.min(p.y);
        max.x = max.x.max(p.x);
        max.y = max.y.max(p.y);
    }
    let horizontal = max.y - min.y <= threshold;
    let vertical = max.x - min.x <= threshold;
    Ok(match (horizontal, vertical) {
        (true, true) => Alignment::Both,
        (true, false) => Alignment::Horizontal,
        (false, true) => Alignment::Vertical,
        (false, false) => Alignment::None,
    })
}

/// Normalizes degrees into `(-180, 180]`.
pub fn normalize_degrees(deg: f64) -> f64 {
    let mut d = libm::fmod(deg, 360.0);
    if d > 180.0 {
        d -= 360.0;
    } else if d <= -180.0 {
        d += 360.0;
    }
    d
}

/// Inclination, in degrees, of the ray from the cluster mean to its farthest
/// member pixel. Counterclockwise from +x, in `(-180, 180]`.
///
/// Ties for the farthest pixel go to the one earliest in row-major order.
pub fn pointing_direction(pixels: &[PixelCoord], frame_height: u32) -> Result<f64, GeometryError> {
    if pixels.is_empty() {
        return Err(GeometryError::EmptyInput);
    }
    let n = pixels.len() as f64;
    let (sx, sy) = pixels.iter().fold((0.0, 0.0), |(sx, sy), &p| {
        let c = to_cartesian(p, frame_height);
        (sx + c.x, sy + c.y)
    });
    let mean = CartesianPoint::new(sx / n, sy / n);

    let mut best: Option<(f64, PixelCoord)> = None;
    for &p in pixels {
        let c = to_cartesian(p, frame_height);
        let d2 = (c.x - mean.x) * (c.x - mean.x) + (c.y - mean.y) * (c.y - mean.y);
        best = match best {
            Some((bd, bp)) if bd > d2 || (bd == d2 && (bp.row, bp.col) <= (p.row, p.col)) => {
                Some((bd, bp))
            }
            _ => Some((d2, p)),
        };
    }
    let (d2, far) = best.expect("non-empty");
    if d2 == 0.0 {
        return Err(GeometryError::DegenerateDirection);
    }
    let far = to_cartesian(far, frame_height);
    let deg = libm::atan2(far.y - mean.y, far.x - mean.x).to_degrees();
    Ok(normalize_degrees(deg))
}

/// Circle `x² + y² + C·x + D·y + E = 0` through three points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleFit {
    pub c_coef: f64,
    pub d_coef: f64,
    pub e_coef: f64,
    pub center: CartesianPoint,
    pub radius: f64,
}

impl CircleFit {
    /// Left-hand side of the circle equation at `p`.
    pub fn residual(&self, p: CartesianPoint) -> f64 {
        p.x * p.x + p.y * p.y + self.c_coef * p.x + self.d_coef * p.y + self.e_coef
    }

    /// Residual divided by the summed magnitude of the equation's terms.
    pub fn relative_residual(&self, p: CartesianPoint) -> f64 {
        let scale = p.x * p.x
            + p.y * p.y
            + (self.c_coef * p.x).abs()
            + (self.d_coef * p.y).abs()
            + self.e_coef.abs();
        if scale == 0.0 {
            0.0
        } else {
            self.residual(p).abs() / scale
        }
    }
}

fn extent(points: &[CartesianPoint]) -> f64 {
    let mut min = points[0];
    let mut max = points[0];
    for p in points {
        min.x = min.x.min(p.x);
        min.y = min.y.min(p.y);
        max.x = max.x.max(p.x);
        max.y = max.y.max(p.y);
    }
    (max.x - min.x).max(max.y - min.y)
}

/// Solves a 3×3 system by Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col] == 0.0 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let factor = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

/// Fits the circle through three points by solving `A·[C, D, E]ᵀ = B` with
/// rows `[x, y, 1]` and `B = -(x² + y²)`.
///
/// The system is solved in coordinates centered on the points' mean and
/// scaled by their extent, then mapped back.
pub fn fit_circle(
    p1: CartesianPoint,
    p2: CartesianPoint,
    p3: CartesianPoint,
) -> Result<CircleFit, GeometryError> {
    let pts = [p1, p2, p3];
    if !pts.iter().all(|p| p.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    let scale = extent(&pts);
    if scale == 0.0 {
        return Err(GeometryError::DegenerateCircle);
    }
    let origin = CartesianPoint::new(
        (p1.x + p2.x + p3.x) / 3.0,
        (p1.y + p2.y + p3.y) / 3.0,
    );
    let local = pts.map(|p| ((p.x - origin.x) / scale, (p.y - origin.y) / scale));

    let a = local.map(|(u, v)| [u, v, 1.0]);
    let det = a[0][0] * (a[1][1] - a[2][1]) - a[0][1] * (a[1][0] - a[2][0])
        + (a[1][0] * a[2][1] - a[2][0] * a[1][1]);
    if det.abs() < DEGENERACY_EPS {
        return Err(GeometryError::DegenerateCircle);
    }
    let b = local.map(|(u, v)| -(u * u + v * v));
    let [c, d, e] = solve3(a, b).ok_or(GeometryError::DegenerateCircle)?;

    let r2 = (c * c + d * d) / 4.0 - e;
    if r2.is_nan() || r2 <= 0.0 {
        return Err(GeometryError::DegenerateCircle);
    }
    let center = CartesianPoint::new(origin.x - c / 2.0 * scale, origin.y - d / 2.0 * scale);
    let radius = libm::sqrt(r2) * scale;
    let c_coef = -2.0 * center.x;
    let d_coef = -2.0 * center.y;
    // E = (C² + D²)/4 - r²
    let e_coef = center.x * center.x + center.y * center.y - radius * radius;
    Ok(CircleFit {
        c_coef,
        d_coef,
        e_coef,
        center,
        radius,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationSense {
    Clockwise,
    AntiClockwise,
}

impl RotationSense {
    pub fn reversed(self) -> Self {
        match self {
            RotationSense::Clockwise => RotationSense::AntiClockwise,
            RotationSense::AntiClockwise => RotationSense::Clockwise,
        }
    }
}

/// Turn direction of the path `p1 → p2 → p3`.
///
/// The triple is rotated by `-θ`, where `θ` is the inclination of `p1 → p2`,
/// and then classified by the four cases on `x₁, x₂` and `y₂, y₃`.
#[allow(clippy::if_same_then_else)]
pub fn rotation_sense(
    p1: CartesianPoint,
    p2: CartesianPoint,
    p3: CartesianPoint,
) -> Result<RotationSense, GeometryError> {
    let pts = [p1, p2, p3];
    if !pts.iter().all(|p| p.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    if p1 == p2 {
        return Err(GeometryError::DegenerateTurn);
    }
    let scale = extent(&pts);
    let cross = (p2.x - p1.x) * (p3.y - p2.y) - (p2.y - p1.y) * (p3.x - p2.x);
    if cross.abs() <= DEGENERACY_EPS * scale * scale {
        return Err(GeometryError::DegenerateTurn);
    }

    let theta = libm::atan2(p2.y - p1.y, p2.x - p1.x);
    let (sin, cos) = (libm::sin(theta), libm::cos(theta));
    // rotate by -θ about p1
    let rotate = |p: CartesianPoint| {
        let (dx, dy) = (p.x - p1.x, p.y - p1.y);
        (dx * cos + dy * sin, -dx * sin + dy * cos)
    };
    let (x1, _) = rotate(p1);
    let (x2, y2) = rotate(p2);
    let (_, y3) = rotate(p3);

    if x1 < x2 && y3 > y2 {
        Ok(RotationSense::AntiClockwise)
    } else if x1 < x2 && y3 < y2 {
        Ok(RotationSense::Clockwise)
    } else if x1 > x2 && y3 > y2 {
        Ok(RotationSense::Clockwise)
    } else if x1 > x2 && y3 < y2 {
        Ok(RotationSense::AntiClockwise)
    } else {
        Err(GeometryError::DegenerateTurn)
    }
}
