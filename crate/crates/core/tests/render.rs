use std::f64::consts::TAU;

use bongard_core::dsl::{parse_action, ActionKind, ActionProgram, BaseAction, MovingType, ValueGrid};
use bongard_core::geometry::{Point, Primitive, Rect};
use bongard_core::problem::poses_for;
use bongard_core::render::decorate::{decoration_reach, DecoratedPolyline, StyledSpan};
use bongard_core::render::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn program(actions: &[&str]) -> ActionProgram {
    ActionProgram::single(actions.iter().map(|a| parse_action(a).unwrap()).collect()).unwrap()
}

fn random_program(rng: &mut ChaCha8Rng) -> ActionProgram {
    let grid = ValueGrid::default();
    let shapes = rng.random_range(1..=2);
    ActionProgram::new((0..shapes).map(|_| (0..rng.random_range(2..=9)).map(|_| grid.sample_action(rng)).collect()).collect()).unwrap()
}

#[test]
fn headings_are_uniform() {
    let cfg = RenderConfig::default();
    let unit_box = Rect::new(Point::new(0.0, -0.2), Point::new(1.0, 0.5));
    let canvas = Rect::new(Point::ORIGIN, Point::new(512.0, 512.0));
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let bins = 36;
    let mut counts = vec![0.0; bins];
    for _ in 0..10000 {
        let pose = sample_pose(&unit_box, &canvas, &cfg, &mut rng).unwrap();
        assert!((0.0..360.0).contains(&pose.heading));
        counts[(pose.heading / 10.0) as usize] += 1.0;
    }
    let e = 10000.0 / bins as f64;
    let stat: f64 = counts.iter().map(|o| (o - e).powi(2) / e).sum();
    let p = 1.0 - ChiSquared::new((bins - 1) as f64).unwrap().cdf(stat);
    assert!(p > 0.01, "p = {p}");
}

#[test]
fn sizes_cover_the_configured_fraction() {
    let cfg = RenderConfig::default();
    let unit_box = Rect::new(Point::new(0.0, 0.0), Point::new(1.0, 1.0));
    let canvas = Rect::new(Point::ORIGIN, Point::new(512.0, 512.0));
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for _ in 0..2000 {
        let pose = sample_pose(&unit_box, &canvas, &cfg, &mut rng).unwrap();
        let t = pose.heading.to_radians();
        // Extent of the rotated unit square.
        let extent = pose.unit_length * (t.cos().abs() + t.sin().abs());
        let f = extent / 512.0;
        assert!((0.4 - 1e-9..=0.8 + 1e-9).contains(&f), "{f}");
        lo = lo.min(f);
        hi = hi.max(f);
    }
    assert!(lo < 0.42 && hi > 0.78, "{lo} {hi}");
}

fn ink_box(d: &DecoratedPolyline, i: usize, cfg: &RenderConfig) -> Rect {
    let b = d.component_bbox(i);
    let h = cfg.stroke_width / 2.0;
    Rect::new(Point::new(b.min.x - h, b.min.y - h), Point::new(b.max.x + h, b.max.y + h))
}

#[test]
fn shapes_stay_inside_the_margin() {
    let cfg = RenderConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mut pairs = 0;
    for i in 0..1000 {
        let p = random_program(&mut rng);
        let poses = poses_for(&p, i, &cfg).unwrap();
        let bp = execute_program(&p, &poses).unwrap();
        let d = decorate_path(&bp, &p, &cfg);
        for c in 0..bp.components.len() {
            let b = ink_box(&d, c, &cfg);
            assert!(b.min.x >= cfg.margin && b.min.y >= cfg.margin, "{i}: {b:?}");
            assert!(b.max.x <= 512.0 - cfg.margin && b.max.y <= 512.0 - cfg.margin, "{i}: {b:?}");
        }
        if bp.components.len() == 2 {
            pairs += 1;
            let (a, b) = (ink_box(&d, 0, &cfg), ink_box(&d, 1, &cfg));
            let gap = (b.min.x - a.max.x).max(a.min.x - b.max.x).max(b.min.y - a.max.y).max(a.min.y - b.max.y);
            assert!(gap >= cfg.margin, "{i}: gap {gap}");
        }
        if i % 10 == 0 {
            // The pixels agree: nothing is inked in the border band.
            let img = rasterize(&d, &cfg);
            for y in 0..512u32 {
                for x in 0..512u32 {
                    let inside = (8..504).contains(&x) && (8..504).contains(&y);
                    assert!(inside || img.get(x, y) == 255, "{i}: ink at {x},{y}");
                }
            }
        }
    }
    assert!(pairs > 300, "{pairs}");
}

/// Closed-form turtle: arc end point and heading from the pose alone.
fn arc_end(origin: Point, heading: f64, length: f64, sweep: f64) -> (Point, f64) {
    let r = length / sweep;
    let end = Point::new(origin.x + r * ((heading + sweep).sin() - heading.sin()), origin.y + r * (heading.cos() - (heading + sweep).cos()));
    (end, heading + sweep)
}

proptest! {
    #[test]
    fn arc_end_points_match_the_circle(
        l in 0.01..=1.0f64,
        a in prop_oneof![0.0..0.4999f64, 0.5001..=1.0f64],
        l2 in 0.0..=1.0f64,
        heading in 0.0..360.0f64,
        unit in 10.0..300.0f64,
        x in -300.0..300.0f64,
        y in -300.0..300.0f64,
    ) {
        let p = ActionProgram::single(vec![
            BaseAction::new(ActionKind::Arc, MovingType::Normal, l, a),
            BaseAction::new(ActionKind::Line, MovingType::Normal, l2, 0.5),
        ]).unwrap();
        let pose = Pose { origin: Point::new(x, y), heading, unit_length: unit };
        let bp = execute_program(&p, &[pose]).unwrap();
        let c = &bp.components[0];
        let sweep = (a - 0.5) * TAU;
        let (end, h) = arc_end(pose.origin, heading.to_radians(), l * unit, sweep);
        let scale = unit.max(x.abs()).max(y.abs());
        prop_assert!(c.primitives[0].end().dist(end) <= 1e-9 * scale, "{:?} vs {:?}", c.primitives[0].end(), end);
        let Primitive::Arc { radius, sweep: s, .. } = c.primitives[0] else { panic!("not an arc") };
        prop_assert!((radius - l * unit / sweep.abs()).abs() <= 1e-9 * scale);
        prop_assert!((s - sweep).abs() <= 1e-12);
        // The turtle leaves the arc along its tangent.
        let after = Point::new(end.x + l2 * unit * h.cos(), end.y + l2 * unit * h.sin());
        prop_assert!(c.end().dist(after) <= 1e-9 * scale);
    }

    #[test]
    fn lines_turn_then_advance(l in 0.0..=1.0f64, a in 0.0..=1.0f64, heading in 0.0..360.0f64, unit in 10.0..300.0f64) {
        let p = ActionProgram::single(vec![BaseAction::new(ActionKind::Line, MovingType::Zigzag, l, a)]).unwrap();
        let pose = Pose { origin: Point::new(40.0, -7.0), heading, unit_length: unit };
        let bp = execute_program(&p, &[pose]).unwrap();
        let h = heading.to_radians() + (a - 0.5) * TAU;
        let want = Point::new(40.0 + l * unit * h.cos(), -7.0 + l * unit * h.sin());
        prop_assert!(bp.components[0].end().dist(want) <= 1e-9 * unit.max(40.0));
    }

    #[test]
    fn decorations_stay_near_their_stroke(
        kind in prop::sample::select(ActionKind::ALL.to_vec()),
        style in prop::sample::select(MovingType::ALL.to_vec()),
        l in 0.05..=1.0f64,
        a in prop_oneof![0.0..0.49f64, 0.51..=1.0f64],
        unit in 20.0..200.0f64,
    ) {
        let cfg = RenderConfig::default();
        let p = ActionProgram::single(vec![BaseAction::new(kind, style, l, a)]).unwrap();
        let bp = execute_program(&p, &[Pose { origin: Point::new(256.0, 256.0), heading: 30.0, unit_length: unit }]).unwrap();
        let d = decorate_path(&bp, &p, &cfg);
        let prim = bp.components[0].primitives[0];
        let reach = decoration_reach(&cfg) * unit + 1e-9 * unit;
        for q in d.points() {
            prop_assert!(q.x.is_finite() && q.y.is_finite());
            prop_assert!(prim.distance_to(*q) <= reach, "{} > {}", prim.distance_to(*q), reach);
        }
    }
}

fn one_span(action: &str, unit: f64) -> (Primitive, StyledSpan) {
    let cfg = RenderConfig::default();
    let p = program(&[action]);
    let bp = execute_program(&p, &[Pose { origin: Point::new(10.0, 20.0), heading: 0.0, unit_length: unit }]).unwrap();
    let d = decorate_path(&bp, &p, &cfg);
    (bp.components[0].primitives[0], d.components[0][0].clone())
}

#[test]
fn normal_segment_is_its_end_points() {
    let (prim, span) = one_span("line(normal,0.75,0.5)", 100.0);
    assert_eq!(span.polylines, vec![vec![prim.start(), prim.end()]]);
}

#[test]
fn zigzag_deviation_equals_amplitude() {
    let cfg = RenderConfig::default();
    for unit in [37.0, 100.0, 250.0] {
        let (_, span) = one_span("line(zigzag,1.0,0.5)", unit);
        // Heading 0 from y=20: transverse deviation is the y offset.
        let dev = span.polylines[0].iter().map(|q| (q.y - 20.0).abs()).fold(0.0, f64::max);
        assert!((dev - cfg.zigzag_amplitude * unit).abs() < 1e-9, "{dev}");
    }
}

#[test]
fn glyph_counts_and_centres() {
    let cfg = RenderConfig::default();
    for (action, unit) in [("line(circle,1.0,0.5)", 100.0), ("line(circle,0.25,0.5)", 173.0), ("line(square,0.75,0.5)", 60.0), ("arc(circle,1.0,0.75)", 100.0)] {
        let (prim, span) = one_span(action, unit);
        let len = prim.length();
        let pitch = cfg.glyph_pitch * unit;
        assert_eq!(span.polylines.len(), (len / pitch).ceil() as usize, "{action}");
        for g in &span.polylines {
            // Closed glyph outlines repeat their first point.
            let ring = &g[..g.len() - 1];
            let n = ring.len() as f64;
            let c = Point::new(ring.iter().map(|q| q.x).sum::<f64>() / n, ring.iter().map(|q| q.y).sum::<f64>() / n);
            assert!(prim.distance_to(c) < 1e-6, "{action}: {}", prim.distance_to(c));
        }
    }
}

#[test]
fn empty_and_single_stroke_rasters() {
    let cfg = RenderConfig::default();
    let blank = rasterize(&DecoratedPolyline::default(), &cfg);
    assert_eq!((blank.width, blank.height), (512, 512));
    assert!(blank.pixels.iter().all(|&v| v == 255));

    let p = program(&["line(normal,1.0,0.5)"]);
    let bp = execute_program(&p, &[Pose { origin: Point::new(56.0, 256.0), heading: 0.0, unit_length: 400.0 }]).unwrap();
    let img = rasterize(&decorate_path(&bp, &p, &cfg), &cfg);
    for x in [100, 256, 400] {
        let dark = (0..512).filter(|&y| img.get(x, y) < 128).count();
        let ink = (0..512).filter(|&y| img.get(x, y) < 255).count();
        assert!((2..=4).contains(&dark) && ink <= 5, "column {x}: {dark} dark, {ink} inked");
        assert_eq!(img.get(x, 256), 0);
    }
    assert!(img.get(30, 256) == 255 && img.get(480, 256) == 255);
}

#[test]
fn same_seed_same_bytes() {
    let cfg = RenderConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for seed in 0..20u64 {
        let p = random_program(&mut rng);
        let png = |s: u64| render_program(&p, &poses_for(&p, s, &cfg).unwrap(), &cfg).unwrap().encode_png().unwrap();
        let a = png(seed);
        assert_eq!(a, png(seed));
        assert_ne!(a, png(seed + 1000));
        let back = Image::decode_png(&a).unwrap();
        assert_eq!(back.encode_png().unwrap(), a);
    }
}

#[test]
fn equal_programs_give_equal_paths() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let cfg = RenderConfig::default();
    for i in 0..50 {
        let p = random_program(&mut rng);
        let q = ActionProgram::from_json(&p.to_json()).unwrap();
        let poses = poses_for(&p, i, &cfg).unwrap();
        assert_eq!(execute_program(&p, &poses).unwrap(), execute_program(&q, &poses).unwrap());
    }
}

/// Overlap by the documented rule on straight-line paths, computed from
/// end points alone: samples every unit/50 at piece midpoints, a hit within
/// unit/20 of another piece, ignoring adjacent pieces within three
/// tolerances of their shared joint.
fn overlap_oracle(pts: &[Point], closed: bool, unit: f64) -> f64 {
    let segs: Vec<(Point, Point)> = pts.windows(2).map(|w| (w[0], w[1])).filter(|(a, b)| a.dist(*b) > 0.0).collect();
    let n = segs.len();
    let dist = |q: Point, (a, b): (Point, Point)| {
        let ab = Point::new(b.x - a.x, b.y - a.y);
        let t = (((q.x - a.x) * ab.x + (q.y - a.y) * ab.y) / (ab.x * ab.x + ab.y * ab.y)).clamp(0.0, 1.0);
        q.dist(Point::new(a.x + t * ab.x, a.y + t * ab.y))
    };
    let tol = unit / 20.0;
    let (mut total, mut hits) = (0, 0);
    for (i, &s) in segs.iter().enumerate() {
        let len = s.0.dist(s.1);
        let k = (len / (unit / 50.0)).ceil().max(1.0) as usize;
        for j in 0..k {
            let t = (j as f64 + 0.5) / k as f64;
            let q = Point::new(s.0.x + t * (s.1.x - s.0.x), s.0.y + t * (s.1.y - s.0.y));
            total += 1;
            let hit = segs.iter().enumerate().any(|(m, &o)| {
                if m == i || dist(q, o) >= tol {
                    return false;
                }
                let mut joints = Vec::new();
                if m == i + 1 || (closed && n > 1 && i == n - 1 && m == 0) {
                    joints.push(s.1);
                }
                if i == m + 1 || (closed && n > 1 && m == n - 1 && i == 0) {
                    joints.push(o.1);
                }
                joints.iter().all(|j| q.dist(*j) > 3.0 * tol)
            });
            hits += usize::from(hit);
        }
    }
    hits as f64 / total as f64
}

#[test]
fn overlap_matches_brute_force() {
    let square = program(&["line(normal,1,0.5)", "line(normal,1,0.75)", "line(normal,1,0.75)", "line(normal,1,0.75)"]);
    let bp = execute_canonical(&square).unwrap();
    assert_eq!(overlap_score(&bp), 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(35);
    let grid = ValueGrid::default();
    let mut positive = 0;
    for _ in 0..300 {
        let actions: Vec<BaseAction> = (0..rng.random_range(2..=9))
            .map(|_| {
                let mut a = grid.sample_action(&mut rng);
                a.kind = ActionKind::Line;
                // Grid lengths put samples exactly on the joint-disc boundary.
                a.length = rng.random_range(0.1..1.0);
                a
            })
            .collect();
        let p = ActionProgram::single(actions).unwrap();
        let bp = execute_program(&p, &[Pose { origin: Point::new(3.0, 4.0), heading: 17.0, unit_length: 50.0 }]).unwrap();
        let c = &bp.components[0];
        let mut pts = vec![c.start()];
        pts.extend(c.primitives.iter().map(|q| q.end()));
        let want = overlap_oracle(&pts, c.is_closed(), 50.0);
        let got = overlap_score(&bp);
        assert!((got - want).abs() < 1e-12, "{got} vs {want}: {}", p.to_json());
        positive += usize::from(want > 0.0);
    }
    assert!(positive > 30, "{positive}");
}
