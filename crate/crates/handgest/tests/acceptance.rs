//! Acceptance suite. Every criterion runs in sequence inside one test so the
//! timing bounds are not disturbed by other tests, and each prints one
//! PASS/FAIL line. Run with `-- --nocapture` to see them.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::{Duration, Instant};

use handgest::cli::{cmd_detect, cmd_synth};
use handgest::{read_pbm, read_ppm, write_pbm, write_ppm};
use handgest_core::{
    detect_in_out, extract_clusters, fit_circle, generate, rotation_sense, BinaryFrame,
    CartesianPoint, Connectivity, EventKind, GeometryError, GestureKind, Motion, RgbFrame,
    RotationSense, Scenario, Tracker, TrackerConfig,
};
use petgraph::unionfind::UnionFind;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pt(x: f64, y: f64) -> CartesianPoint {
    CartesianPoint::new(x, y)
}

// ---- criterion 1 ----

fn union_find_partition(frame: &BinaryFrame, conn: Connectivity) -> Vec<BTreeSet<(u32, u32)>> {
    let (w, h) = frame.dimensions();
    let idx = |c: u32, r: u32| (r * w + c) as usize;
    let mut uf = UnionFind::<usize>::new((w * h) as usize);
    let forward: &[(i64, i64)] = match conn {
        Connectivity::Four => &[(1, 0), (0, 1)],
        Connectivity::Eight => &[(1, 0), (0, 1), (1, 1), (-1, 1)],
    };
    for r in 0..h {
        for c in 0..w {
            if !frame.get(c, r) {
                continue;
            }
            for &(dc, dr) in forward {
                let (nc, nr) = (c as i64 + dc, r as i64 + dr);
                if nc >= 0 && nc < w as i64 && nr < h as i64 && frame.get(nc as u32, nr as u32) {
                    uf.union(idx(c, r), idx(nc as u32, nr as u32));
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, BTreeSet<(u32, u32)>> = BTreeMap::new();
    for r in 0..h {
        for c in 0..w {
            if frame.get(c, r) {
                groups.entry(uf.find(idx(c, r))).or_default().insert((c, r));
            }
        }
    }
    let mut out: Vec<_> = groups.into_values().collect();
    out.sort();
    out
}

fn labeling_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1);
    let start = Instant::now();
    for i in 0..500 {
        let w = rng.gen_range(1..=64);
        let h = rng.gen_range(1..=64);
        let density = rng.gen_range(0.05..=0.95);
        let frame = BinaryFrame::from_fn(w, h, |_, _| rng.gen_bool(density)).unwrap();
        for conn in [Connectivity::Four, Connectivity::Eight] {
            let set = extract_clusters(&frame, conn);
            let oracle = union_find_partition(&frame, conn);
            let mut got: Vec<BTreeSet<(u32, u32)>> = set
                .iter()
                .map(|c| c.pixels.iter().map(|p| (p.col, p.row)).collect())
                .collect();
            got.sort();
            check(set.len() == oracle.len(), || format!("frame {i} {conn:?}: count differs"))?;
            check(got == oracle, || format!("frame {i} {conn:?}: partition differs"))?;
            let mut tallies: Vec<u64> = set.iter().map(|c| c.pixel_count).collect();
            let mut expected: Vec<u64> = oracle.iter().map(|c| c.len() as u64).collect();
            tallies.sort();
            expected.sort();
            check(tallies == expected, || format!("frame {i} {conn:?}: tallies differ"))?;
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("500 frames x 2 connectivities in {elapsed:.2?}"))
}

// ---- criterion 2 ----

fn circle_round_trip() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..1000 {
        let center = pt(rng.gen_range(-1000.0..1000.0), rng.gen_range(-1000.0..1000.0));
        let radius = rng.gen_range(0.5..=500.0);
        let mut angles: Vec<f64> = Vec::new();
        while angles.len() < 3 {
            let a: f64 = rng.gen_range(0.0..360.0);
            // distinct angles, at least one degree apart
            if angles.iter().all(|b| {
                let d = (a - b).rem_euclid(360.0);
                d.min(360.0 - d) >= 1.0
            }) {
                angles.push(a);
            }
        }
        let p: Vec<_> = angles
            .iter()
            .map(|a| {
                let (s, c) = a.to_radians().sin_cos();
                pt(center.x + radius * c, center.y + radius * s)
            })
            .collect();
        let fit = fit_circle(p[0], p[1], p[2]).map_err(|e| format!("circle {i}: {e}"))?;
        let center_err = fit.center.distance(center) / radius;
        let radius_err = (fit.radius - radius).abs() / radius;
        let residual = p.iter().map(|q| fit.relative_residual(*q)).fold(0.0, f64::max);
        worst = (worst.0.max(center_err), worst.1.max(radius_err), worst.2.max(residual));
        check(center_err <= 1e-6, || format!("circle {i}: center error {center_err:e}"))?;
        check(radius_err <= 1e-6, || format!("circle {i}: radius error {radius_err:e}"))?;
        check(residual <= 1e-9, || format!("circle {i}: residual {residual:e}"))?;
    }
    for i in 0..100 {
        let a = pt(rng.gen_range(-500.0..500.0), rng.gen_range(-500.0..500.0));
        let (dx, dy) = match i % 4 {
            0 => (0.0, rng.gen_range(0.5..10.0)),
            1 => (rng.gen_range(0.5..10.0), 0.0),
            _ => (rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)),
        };
        let t1: f64 = rng.gen_range(-20.0..20.0);
        let t2: f64 = rng.gen_range(-20.0..20.0);
        let b = pt(a.x + dx * t1, a.y + dy * t1);
        let c = pt(a.x + dx * t2, a.y + dy * t2);
        check(
            fit_circle(a, b, c) == Err(GeometryError::DegenerateCircle),
            || format!("collinear case {i} not rejected"),
        )?;
    }
    Ok(format!(
        "1000 circles: max center err {:.1e}, radius err {:.1e}, residual {:.1e}; 100/100 collinear rejected",
        worst.0, worst.1, worst.2
    ))
}

// ---- criterion 3 ----

fn rotation_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let mut checked = 0;
    let mut vertical = 0;
    while checked < 1000 {
        let a = pt(rng.gen_range(-500.0..500.0), rng.gen_range(-500.0..500.0));
        let b = if checked % 5 == 0 {
            pt(a.x, a.y + rng.gen_range(-200.0..200.0))
        } else {
            pt(rng.gen_range(-500.0..500.0), rng.gen_range(-500.0..500.0))
        };
        let c = pt(rng.gen_range(-500.0..500.0), rng.gen_range(-500.0..500.0));
        let cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
        // non-degenerate: clear of the 1e-9 relative tolerance by a wide margin
        if a == b || cross.abs() < 1e-3 {
            continue;
        }
        let oracle = if cross > 0.0 {
            RotationSense::AntiClockwise
        } else {
            RotationSense::Clockwise
        };
        let got = rotation_sense(a, b, c).map_err(|e| format!("triple {checked}: {e}"))?;
        check(got == oracle, || format!("triple {checked}: {got:?} vs {oracle:?}"))?;
        if a.x == b.x {
            vertical += 1;
        }
        checked += 1;
    }
    check(vertical >= 100, || format!("only {vertical} vertical first segments"))?;
    Ok(format!("1000/1000 agree with cross-product sign ({vertical} vertical first segments)"))
}

// ---- criterion 4 ----

/// Mean white-pixel position in Cartesian coordinates, by brute force.
fn brute_centroid(f: &BinaryFrame) -> CartesianPoint {
    let (mut sx, mut sy, mut n) = (0.0, 0.0, 0.0);
    for r in 0..f.height() {
        for c in 0..f.width() {
            if f.get(c, r) {
                sx += c as f64;
                sy += (f.height() - 1 - r) as f64;
                n += 1.0;
            }
        }
    }
    pt(sx / n, sy / n)
}

fn speed_formula() -> Outcome {
    let cases = [
        ((0.0, 3.0), 30),
        ((0.0, -2.0), 25),
        ((4.0, 0.0), 20),
        ((-3.5, 0.0), 30),
        ((1.3, 2.7), 30),
        ((-2.2, -1.1), 28),
        ((1.2, 0.0), 50),
    ];
    let mut worst = 0.0f64;
    for (v, n) in cases {
        let half = (n - 1) as f64 / 2.0;
        let s = Scenario::new(
            Motion::LinearMotion {
                start: pt(64.0 - v.0 * half, 64.0 - v.1 * half),
                velocity: v,
                disc_radius: 5.0,
            },
            n,
            128,
            128,
        );
        let frames = generate(&s).map_err(|e| e.to_string())?;
        let mut tracker = Tracker::new(TrackerConfig::default()).unwrap();
        let mut events = Vec::new();
        for f in &frames {
            events.extend(tracker.push(f).map_err(|e| e.to_string())?);
        }
        events.extend(tracker.finish());
        let speeds: Vec<f64> = events
            .iter()
            .filter_map(|e| match e.gesture {
                GestureKind::Up { speed }
                | GestureKind::Down { speed }
                | GestureKind::Left { speed }
                | GestureKind::Right { speed } => Some(speed),
                _ => None,
            })
            .collect();
        check(speeds.len() == 1, || format!("{v:?}: {} swipe events", speeds.len()))?;
        let a = brute_centroid(&frames[0]);
        let b = brute_centroid(&frames[frames.len() - 1]);
        let (dx, dy) = ((b.x - a.x).abs(), (b.y - a.y).abs());
        let expected = dx.max(dy) / n as f64;
        let err = (speeds[0] - expected).abs();
        worst = worst.max(err);
        check(err <= 1e-9, || format!("{v:?}: speed {} vs {expected}", speeds[0]))?;
    }
    Ok(format!("{} scenarios, max |speed - oracle| {worst:.1e}", cases.len()))
}

// ---- criterion 5 ----

fn matrix() -> Vec<(&'static str, Option<EventKind>, Scenario)> {
    let linear = |start: (f64, f64), v: (f64, f64)| Motion::LinearMotion {
        start: pt(start.0, start.1),
        velocity: v,
        disc_radius: 6.0,
    };
    let circular = |w: f64| Motion::CircularMotion {
        center: pt(64.0, 64.0),
        radius: 30.0,
        angular_velocity: w,
        disc_radius: 5.0,
        start_angle: 0.0,
    };
    let scaling = |a: f64, b: f64| Motion::ScalingDisc {
        center: pt(64.0, 64.0),
        radius_start: a,
        radius_end: b,
    };
    let full_turn = 360.0 / 29.0;
    [
        ("up", Some(EventKind::Up), linear((64.0, 20.0), (0.0, 3.0))),
        ("down", Some(EventKind::Down), linear((64.0, 107.0), (0.0, -3.0))),
        ("left", Some(EventKind::Left), linear((107.0, 64.0), (-3.0, 0.0))),
        ("right", Some(EventKind::Right), linear((20.0, 64.0), (3.0, 0.0))),
        ("zoom_in", Some(EventKind::ZoomIn), scaling(5.0, 25.0)),
        ("zoom_out", Some(EventKind::ZoomOut), scaling(25.0, 5.0)),
        ("rotate_cw", Some(EventKind::RotateCw), circular(-full_turn)),
        ("rotate_ccw", Some(EventKind::RotateCcw), circular(full_turn)),
        (
            "static",
            None,
            Motion::Static {
                disc_centers: vec![pt(64.0, 64.0)],
                disc_radius: 6.0,
            },
        ),
    ]
    .into_iter()
    .map(|(name, kind, motion)| (name, kind, Scenario::new(motion, 30, 128, 128)))
    .collect()
}

fn run_pipeline(dir: &Path, name: &str, scenario: &Scenario) -> Result<(Vec<String>, Vec<String>), String> {
    let scenario_path = dir.join(format!("{name}.json"));
    std::fs::write(&scenario_path, serde_json::to_string(scenario).unwrap()).unwrap();
    let frames = dir.join(name);
    let mut synth_out = Vec::new();
    cmd_synth(&scenario_path, &frames, None, &mut synth_out).map_err(|e| e.to_string())?;
    let expected: Vec<String> = serde_json::from_slice(&synth_out).map_err(|e| e.to_string())?;
    let mut detect_out = Vec::new();
    cmd_detect(&[frames], None, None, &mut detect_out).map_err(|e| e.to_string())?;
    let events = String::from_utf8(detect_out)
        .unwrap()
        .lines()
        .map(|l| {
            let v: Value = serde_json::from_str(l).unwrap();
            v["event"].as_str().unwrap().to_owned()
        })
        .collect();
    Ok((expected, events))
}

fn scenario_matrix() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let mut summary = Vec::new();
    for (name, kind, scenario) in matrix() {
        let (expected, events) = run_pipeline(dir.path(), name, &scenario)?;
        match kind {
            Some(kind) => {
                let hits = events.iter().filter(|e| *e == kind.as_str()).count();
                let bad = kind.contradiction().as_str();
                check(hits >= 1, || format!("{name}: no {} event in {events:?}", kind.as_str()))?;
                check(
                    !events.iter().any(|e| e == bad),
                    || format!("{name}: contradictory {bad} in {events:?}"),
                )?;
                summary.push(format!("{name}:{hits}"));
            }
            None => check(events.is_empty(), || format!("{name}: unexpected {events:?}"))?,
        }
        // the emitted event types are exactly the predicted ones
        let emitted: BTreeSet<&str> = events.iter().map(String::as_str).collect();
        let predicted: BTreeSet<&str> = expected.iter().map(String::as_str).collect();
        check(emitted == predicted, || {
            format!("{name}: emitted {emitted:?}, predicted {predicted:?}")
        })?;
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("9 scenarios at 128x128x30 in {elapsed:.2?} [{}]", summary.join(" ")))
}

// ---- criterion 6 ----

fn zoom_sweep() -> Outcome {
    let frames: Vec<BinaryFrame> = (0..=100usize)
        .map(|n| BinaryFrame::from_fn(10, 10, |c, r| ((r * 10 + c) as usize) < n).unwrap())
        .collect();
    let mut cases = 0;
    for t in [1u64, 10, 50] {
        for a in 0..=100i64 {
            for b in 0..=100i64 {
                let d = b - a;
                let got = detect_in_out(&frames[a as usize], &frames[b as usize], t)
                    .map_err(|e| e.to_string())?;
                let ti = t as i64;
                let ok = match got {
                    None => d.abs() < ti,
                    Some(GestureKind::ZoomOut { magnitude }) => {
                        d <= -ti && d < 0 && magnitude == d.unsigned_abs()
                    }
                    Some(GestureKind::ZoomIn { magnitude }) => {
                        d >= ti && d >= 0 && magnitude == d as u64
                    }
                    _ => false,
                };
                let complete = (d.abs() < ti) == got.is_none();
                check(ok && complete, || format!("a={a} b={b} t={t}: {got:?}"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (a, b, t) cases"))
}

// ---- criterion 7 ----

fn io_round_trips() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut bytes = 0usize;
    for i in 0..100 {
        let (w, h) = if i == 0 {
            (1024, 1024)
        } else if i == 1 {
            (1, 1)
        } else {
            (rng.gen_range(1..=1024), rng.gen_range(1..=1024))
        };
        let mut data = vec![0u8; (w * h * 3) as usize];
        rng.fill(&mut data[..]);
        let rgb = RgbFrame::new(w, h, data).unwrap();
        let encoded = write_ppm(&rgb);
        bytes += encoded.len();
        check(read_ppm(&encoded).as_ref() == Ok(&rgb), || format!("ppm {i} ({w}x{h}) differs"))?;

        let density: f64 = rng.gen_range(0.0..=1.0);
        let bin = BinaryFrame::from_fn(w, h, |_, _| rng.gen_bool(density)).unwrap();
        let encoded = write_pbm(&bin);
        bytes += encoded.len();
        check(read_pbm(&encoded).as_ref() == Ok(&bin), || format!("pbm {i} ({w}x{h}) differs"))?;
    }
    Ok(format!("100 PPM + 100 PBM frames, {:.1} MB encoded", bytes as f64 / 1e6))
}

// ---- criterion 8 ----

fn throughput() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let frames: Vec<BinaryFrame> = (0..100)
        .map(|_| BinaryFrame::from_fn(640, 480, |_, _| rng.gen_bool(0.2)).unwrap())
        .collect();
    let start = Instant::now();
    let mut total = 0;
    for f in &frames {
        total += extract_clusters(f, Connectivity::Four).len();
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(1), || {
        format!("performance regression: {elapsed:?} for 100 frames")
    })?;
    Ok(format!("100 frames 640x480 @20% in {elapsed:.2?} ({total} clusters)"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("labeling matches union-find oracle", labeling_oracle),
        ("circle fit round trip", circle_round_trip),
        ("rotation sense matches cross product", rotation_oracle),
        ("speed = displacement / frames", speed_formula),
        ("end-to-end scenario matrix", scenario_matrix),
        ("zoom arithmetic sweep", zoom_sweep),
        ("netpbm round trips", io_round_trips),
        ("labeling throughput", throughput),
    ];
    let mut failed = Vec::new();
    for (name, criterion) in criteria {
        match criterion() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                println!("FAIL  {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
