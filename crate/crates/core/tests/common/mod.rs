//! Test-only helpers: seeded random clouds and a brute-force reference
//! implementation of the SR pipeline that uses nested loops and linear
//! scans only (no hash sets, no shared code with the library's transform
//! module).

#![allow(dead_code)]

use std::collections::BTreeMap;

use fracsr::{Point, ScaleFactor, VoxelCloud};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sf(n: u32, d: u32) -> ScaleFactor {
    ScaleFactor::new(n, d).unwrap()
}

/// The five scales exercised throughout the acceptance suite.
pub fn five_scales() -> [ScaleFactor; 5] {
    [sf(16, 15), sf(8, 7), sf(4, 3), sf(3, 2), sf(2, 1)]
}

/// Random cloud of up to `max_points` points inside a `side`^3 box at `offset`.
pub fn random_cloud(rng: &mut ChaCha8Rng, max_points: usize, side: i32, offset: i32) -> VoxelCloud {
    let n = rng.gen_range(1..=max_points);
    VoxelCloud::from_points((0..n).map(|_| {
        [
            offset + rng.gen_range(0..side),
            offset + rng.gen_range(0..side),
            offset + rng.gen_range(0..side),
        ]
    }))
    .unwrap()
}

/// Random blob: a noisy ellipsoid shell, which has non-trivial neighbourhoods.
pub fn random_blob(rng: &mut ChaCha8Rng, max_points: usize, side: i32) -> VoxelCloud {
    let c = side as f64 / 2.0;
    let (a, b, e) = (rng.gen_range(0.5..1.0) * c, rng.gen_range(0.5..1.0) * c, rng.gen_range(0.5..1.0) * c);
    let keep = rng.gen_range(0.6..1.0);
    let mut pts = Vec::new();
    for x in 0..side {
        for y in 0..side {
            for z in 0..side {
                let r = ((x as f64 - c) / a).powi(2) + ((y as f64 - c) / b).powi(2) + ((z as f64 - c) / e).powi(2);
                if r <= 1.0 && r >= 0.55 && rng.gen_bool(keep) {
                    pts.push([x, y, z]);
                }
            }
        }
    }
    pts.truncate(max_points);
    if pts.is_empty() {
        pts.push([0, 0, 0]);
    }
    VoxelCloud::from_points(pts).unwrap()
}

fn linear_contains(points: &[Point], q: [i64; 3]) -> bool {
    points.iter().any(|p| p[0] as i64 == q[0] && p[1] as i64 == q[1] && p[2] as i64 == q[2])
}

/// `round((v - t) / s)` on one axis found by testing the defining inequality
/// `(2p - 1) num <= 2 (v - t) den < (2p + 1) num` against candidate parents.
pub fn oracle_parent_axis(v: i64, t: i64, s: ScaleFactor) -> i64 {
    let (num, den) = (s.num() as i128, s.den() as i128);
    let x = (v - t) as i128;
    let guess = (x * den / num) as i64;
    for p in guess - 2..=guess + 2 {
        let p128 = p as i128;
        if (2 * p128 - 1) * num <= 2 * x * den && 2 * x * den < (2 * p128 + 1) * num {
            return p;
        }
    }
    unreachable!("no parent for {v}")
}

pub fn oracle_parent(v: [i64; 3], t: [i64; 3], s: ScaleFactor) -> [i64; 3] {
    [0, 1, 2].map(|i| oracle_parent_axis(v[i], t[i], s))
}

/// All integers on one axis whose parent is `p`, by scanning a window.
pub fn oracle_children_axis(p: i64, t: i64, s: ScaleFactor) -> Vec<i64> {
    let centre = (p as f64 * s.value()).round() as i64 + t;
    (centre - 4..=centre + 4).filter(|&v| oracle_parent_axis(v, t, s) == p).collect()
}

/// `round(s p)` with ties up, found as the integer `v` with
/// `2 v den <= 2 p num + den < (2 v + 2) den`.
pub fn oracle_nni_axis(p: i64, t: i64, s: ScaleFactor) -> i64 {
    let (num, den) = (s.num() as i128, s.den() as i128);
    let target = 2 * p as i128 * num + den;
    let guess = (p as f64 * s.value()) as i64;
    for v in guess - 2..=guess + 2 {
        let v128 = v as i128;
        if 2 * v128 * den <= target && target < (2 * v128 + 2) * den {
            return v + t;
        }
    }
    unreachable!()
}

pub fn oracle_code(points: &[Point], v: Point) -> u32 {
    let mut code = 0u32;
    let mut bit = 0;
    for dx in -1..=1 {
        for dy in -1..=1 {
            for dz in -1..=1 {
                if dx == 0 && dy == 0 && dz == 0 {
                    continue;
                }
                let q = [(v[0] + dx) as i64, (v[1] + dy) as i64, (v[2] + dz) as i64];
                if linear_contains(points, q) {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
    }
    code
}

/// `(slot, coordinate)` for every child of `p`; slot is relative to the
/// minimum child.
fn oracle_slots(p: Point, t: [i64; 3], s: ScaleFactor) -> Vec<(usize, [i64; 3])> {
    let axes: Vec<Vec<i64>> = (0..3).map(|i| oracle_children_axis(p[i] as i64, t[i], s)).collect();
    let mut out = Vec::new();
    for (ox, &x) in axes[0].iter().enumerate() {
        for (oy, &y) in axes[1].iter().enumerate() {
            for (oz, &z) in axes[2].iter().enumerate() {
                out.push((ox * 4 + oy * 2 + oz, [x, y, z]));
            }
        }
    }
    out
}

pub type OracleLut = BTreeMap<(u32, usize), (u32, u32)>;

pub fn oracle_build_lut(v_d: &[Point], s: ScaleFactor) -> OracleLut {
    let mut t = [i64::MAX; 3];
    for p in v_d {
        for i in 0..3 {
            t[i] = t[i].min(p[i] as i64);
        }
    }
    let mut v_dd: Vec<Point> = Vec::new();
    for p in v_d {
        let q = oracle_parent([p[0] as i64, p[1] as i64, p[2] as i64], t, s);
        let q = [q[0] as i32, q[1] as i32, q[2] as i32];
        if !v_dd.contains(&q) {
            v_dd.push(q);
        }
    }
    let mut lut = OracleLut::new();
    for &parent in &v_dd {
        let code = oracle_code(&v_dd, parent);
        for (slot, child) in oracle_slots(parent, t, s) {
            let e = lut.entry((code, slot)).or_insert((0, 0));
            e.1 += 1;
            if linear_contains(v_d, child) {
                e.0 += 1;
            }
        }
    }
    lut
}

pub fn oracle_apply_sr(v_d: &[Point], s: ScaleFactor, t: [i64; 3], lut: &OracleLut) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    let push = |c: [i64; 3], out: &mut Vec<Point>| {
        if c.iter().all(|&x| x >= 0) {
            let q = [c[0] as i32, c[1] as i32, c[2] as i32];
            if !out.contains(&q) {
                out.push(q);
            }
        }
    };
    for &parent in v_d {
        let code = oracle_code(v_d, parent);
        for (slot, child) in oracle_slots(parent, t, s) {
            if let Some(&(occ, tot)) = lut.get(&(code, slot)) {
                if tot > 0 && 2 * occ >= tot {
                    push(child, &mut out);
                }
            }
        }
        let nni = [0, 1, 2].map(|i| oracle_nni_axis(parent[i] as i64, t[i], s));
        push(nni, &mut out);
    }
    out.sort();
    out
}

/// The library LUT flattened into the oracle's representation.
pub fn flatten_lut(lut: &fracsr::sr::OccupancyLut) -> OracleLut {
    let mut out = OracleLut::new();
    for (code, table) in lut.sorted_entries() {
        for (slot, c) in table.iter().enumerate() {
            if c.total > 0 {
                out.insert((code.bits(), slot), (c.occupied, c.total));
            }
        }
    }
    out
}

/// Quadratic-time directional MSE.
pub fn brute_mse(a: &[Point], b: &[Point]) -> f64 {
    let mut sum: u128 = 0;
    for p in a {
        let mut best = u64::MAX;
        for q in b {
            let d: u64 = (0..3).map(|i| ((p[i] - q[i]) as i64).pow(2) as u64).sum();
            best = best.min(d);
        }
        sum += best as u128;
    }
    sum as f64 / a.len() as f64
}
