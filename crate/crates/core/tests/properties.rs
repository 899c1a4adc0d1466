mod common;

use std::collections::HashSet;

use fracsr::geometry::{
    children_of, downscale, downscale_point, integer_upscale, read_ply, translation_of, upscale_nni, write_ply,
    PlyFormat,
};
use fracsr::metrics::{bd_rate, d1_psnr, RdCurve, RdPoint};
use fracsr::sr::{apply_sr, build_lut, factorize_scale};
use fracsr::{Point, ScaleFactor, Translation, VoxelCloud};
use proptest::prelude::*;

fn scale_strategy() -> impl Strategy<Value = ScaleFactor> {
    (2u32..40, 1u32..20).prop_filter_map("s > 1", |(n, d)| {
        let s = ScaleFactor::new(n, d).ok()?;
        s.is_downscale().then_some(s)
    })
}

fn sr_scale_strategy() -> impl Strategy<Value = ScaleFactor> {
    scale_strategy().prop_filter("s <= 2", |s| s.le(&ScaleFactor::TWO))
}

fn cloud_strategy(max_len: usize, side: i32) -> impl Strategy<Value = VoxelCloud> {
    prop::collection::vec((0..side, 0..side, 0..side), 1..max_len)
        .prop_map(|v| VoxelCloud::from_points(v.into_iter().map(|(x, y, z)| [x, y, z])).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn translation_follows_shifts(c in cloud_strategy(60, 200), d in (0..500i32, 0..500i32, 0..500i32)) {
        let d = [d.0, d.1, d.2];
        let shifted = c.shifted(d).unwrap();
        prop_assert_eq!(translation_of(&shifted).unwrap(), translation_of(&c).unwrap() + d);
    }

    #[test]
    fn every_point_is_a_child_of_its_parent(c in cloud_strategy(80, 300), s in scale_strategy()) {
        let t = translation_of(&c).unwrap();
        for &v in c.points() {
            let p = downscale_point(v, s, t);
            let p = [p[0] as i32, p[1] as i32, p[2] as i32];
            prop_assert!(children_of(p, s, t).contains(&[v[0] as i64, v[1] as i64, v[2] as i64]));
        }
    }

    #[test]
    fn downscale_never_grows(c in cloud_strategy(200, 100), s in scale_strategy()) {
        let t = translation_of(&c).unwrap();
        let d = downscale(&c, s, t).unwrap();
        prop_assert!(d.len() <= c.len());
        let images: HashSet<Point> = c.iter().map(|&v| {
            let p = downscale_point(v, s, t);
            [p[0] as i32, p[1] as i32, p[2] as i32]
        }).collect();
        prop_assert_eq!(images.len(), d.len());
        prop_assert!(d.iter().all(|p| images.contains(p)));
    }

    #[test]
    fn nni_points_are_children(c in cloud_strategy(100, 64), s in scale_strategy(), t in (0..9i32, 0..9i32, 0..9i32)) {
        let t = Translation([t.0, t.1, t.2]);
        let up = upscale_nni(&c, s, t).unwrap();
        let children: HashSet<[i64; 3]> = c.iter().flat_map(|&p| children_of(p, s, t)).collect();
        prop_assert!(up.iter().all(|p| children.contains(&[p[0] as i64, p[1] as i64, p[2] as i64])));
    }

    #[test]
    fn doubling_then_halving_is_identity(c in cloud_strategy(100, 1000)) {
        let up = integer_upscale(&c, 2).unwrap();
        prop_assert_eq!(up.len(), c.len());
        let back = downscale(&up, ScaleFactor::TWO, Translation::ZERO).unwrap();
        prop_assert_eq!(back.points(), c.points());
    }

    #[test]
    fn ply_round_trip(c in cloud_strategy(300, 70000), binary in any::<bool>()) {
        let format = if binary { PlyFormat::BinaryLittleEndian } else { PlyFormat::Ascii };
        let mut buf = Vec::new();
        write_ply(&c, format, &mut buf).unwrap();
        let header = String::from_utf8_lossy(&buf[..buf.len().min(200)]).into_owned();
        let expected_vertex_line = format!("element vertex {}\n", c.len());
        prop_assert!(header.contains(&expected_vertex_line));
        prop_assert_eq!(read_ply(buf.as_slice(), None).unwrap(), c);
    }

    #[test]
    fn factors_multiply_back(s in scale_strategy()) {
        let f = factorize_scale(s).unwrap();
        let mut prod = ScaleFactor::ONE;
        for (i, x) in f.iter().enumerate() {
            prop_assert!(x.is_downscale() && x.le(&ScaleFactor::TWO));
            if i + 1 < f.len() {
                prop_assert_eq!(*x, ScaleFactor::TWO);
            }
            prod = prod.checked_mul(*x).unwrap();
        }
        prop_assert_eq!(prod, s);
    }

    #[test]
    fn lut_counters_are_consistent(c in cloud_strategy(300, 14), s in sr_scale_strategy()) {
        let lut = build_lut(&c, s).unwrap();
        let t = translation_of(&c).unwrap();
        let v_dd = downscale(&c, s, t).unwrap();
        let mut per_slot = [0u64; 8];
        for (_, table) in lut.sorted_entries() {
            for (i, cnt) in table.iter().enumerate() {
                prop_assert!(cnt.occupied <= cnt.total);
                per_slot[i] += cnt.total as u64;
            }
        }
        let mut expected = [0u64; 8];
        for &p in v_dd.points() {
            for (slot, _) in fracsr::sr::ChildSet::new(p, s, t).slots() {
                expected[slot.index()] += 1;
            }
        }
        prop_assert_eq!(per_slot, expected);
    }

    #[test]
    fn sr_output_is_bracketed_and_deterministic(c in cloud_strategy(300, 14), s in sr_scale_strategy(), t in (0..5i32, 0..5i32, 0..5i32)) {
        let t = Translation([t.0, t.1, t.2]);
        let lut = build_lut(&c, s).unwrap();
        let out = apply_sr(&c, s, t, &lut).unwrap();
        let nni = upscale_nni(&c, s, t).unwrap();
        prop_assert!(nni.iter().all(|p| out.contains(p)));
        let children: HashSet<[i64; 3]> = c.iter().flat_map(|&p| children_of(p, s, t)).collect();
        prop_assert!(out.iter().all(|p| children.contains(&[p[0] as i64, p[1] as i64, p[2] as i64])));
        let again = apply_sr(&c, s, t, &build_lut(&c, s).unwrap()).unwrap();
        prop_assert_eq!(again, out);
    }

    #[test]
    fn d1_is_symmetric(a in cloud_strategy(120, 50), b in cloud_strategy(120, 50)) {
        let ab = d1_psnr(&a, &b, 63).unwrap();
        let ba = d1_psnr(&b, &a, 63).unwrap();
        prop_assert_eq!(ab.to_bits(), ba.to_bits());
    }

    #[test]
    fn bd_rate_is_nearly_antisymmetric(shift in -0.02f64..0.02, tilt in -0.005f64..0.005) {
        let anchor: Vec<RdPoint> = (0..6).map(|i| RdPoint { rate: 0.05 * 1.8f64.powi(i), quality: 55.0 + 3.2 * i as f64 }).collect();
        let test: Vec<RdPoint> = anchor
            .iter()
            .map(|p| RdPoint { rate: p.rate * 10f64.powf(shift + tilt * (p.quality - 60.0) / 10.0), quality: p.quality })
            .collect();
        let a = RdCurve::new("a", anchor).unwrap();
        let t = RdCurve::new("t", test).unwrap();
        let fwd = bd_rate(&a, &t).unwrap().percent;
        let back = bd_rate(&t, &a).unwrap().percent;
        prop_assert!((fwd + back).abs() <= 0.5, "{} vs {}", fwd, back);
    }

    #[test]
    fn bd_rate_ignores_order_and_labels(perm in Just(vec![3usize, 0, 4, 1, 2]).prop_shuffle()) {
        let pts: Vec<RdPoint> = (0..5).map(|i| RdPoint { rate: 0.1 * 2f64.powi(i), quality: 58.0 + 3.0 * i as f64 + 0.2 * (i * i) as f64 }).collect();
        let test_pts: Vec<RdPoint> = pts.iter().map(|p| RdPoint { rate: p.rate * 0.8, quality: p.quality + 0.3 }).collect();
        let shuffled: Vec<RdPoint> = perm.iter().map(|&i| test_pts[i]).collect();
        let a = RdCurve::new("anchor", pts).unwrap();
        let base = bd_rate(&a, &RdCurve::new("t", test_pts).unwrap()).unwrap().percent;
        let other = bd_rate(&a.clone().with_label("renamed"), &RdCurve::new("zzz", shuffled).unwrap()).unwrap().percent;
        prop_assert_eq!(base.to_bits(), other.to_bits());
    }
}

#[test]
fn moving_a_point_away_never_raises_psnr() {
    let a = VoxelCloud::from_points((0..10).map(|i| [i * 3, 5, 5])).unwrap();
    let mut last = f64::INFINITY;
    for dz in 0..12 {
        let mut pts: Vec<Point> = a.points().to_vec();
        pts[4][2] += dz;
        let b = VoxelCloud::from_points(pts).unwrap();
        let p = d1_psnr(&a, &b, 255).unwrap();
        assert!(p <= last, "dz={dz}: {p} > {last}");
        last = p;
    }
}

#[test]
fn nni_round_trip_displacement() {
    let mut rng = common::rng(7);
    for s in common::five_scales() {
        let c = common::random_cloud(&mut rng, 2000, 120, 9);
        let t = translation_of(&c).unwrap();
        let rec = upscale_nni(&downscale(&c, s, t).unwrap(), s, t).unwrap();
        let bound2 = s.num() as i64 + s.den() as i64;
        for &v in c.points() {
            let p = downscale_point(v, s, t);
            let p = [p[0] as i32, p[1] as i32, p[2] as i32];
            let r = fracsr::geometry::upscale_point(p, s, t);
            for i in 0..3 {
                assert!(2 * (v[i] as i64 - r[i]).abs() * s.den() as i64 <= bound2);
            }
            assert!(rec.contains(&[r[0] as i32, r[1] as i32, r[2] as i32]));
        }
    }
}
