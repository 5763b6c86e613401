//! Test oracles that share no code with the implementation under test.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use handgest_core::{BinaryFrame, Connectivity};
use petgraph::unionfind::UnionFind;
use rand::Rng;

pub type Component = BTreeSet<(u32, u32)>;

/// Connected components of white pixels via union-find over all adjacent
/// white pairs, sorted for comparison.
pub fn union_find_components(frame: &BinaryFrame, conn: Connectivity) -> Vec<Component> {
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
    let mut groups: BTreeMap<usize, Component> = BTreeMap::new();
    for r in 0..h {
        for c in 0..w {
            if frame.get(c, r) {
                groups.entry(uf.find(idx(c, r))).or_default().insert((c, r));
            }
        }
    }
    let mut comps: Vec<Component> = groups.into_values().collect();
    comps.sort();
    comps
}

pub fn random_frame(rng: &mut impl Rng, w: u32, h: u32, density: f64) -> BinaryFrame {
    BinaryFrame::from_fn(w, h, |_, _| rng.gen_bool(density)).unwrap()
}
