//! Property checks run both by the `properties` test target and by the
//! acceptance suite. Each takes the number of cases to generate.

use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use covercab::covermat::{binarize, build_bmatrix, stack_layouts, BinaryCoverageMatrix};
use covercab::geometry::{
    ray_hits_box, rpy_to_matrix, segment_occluded, Occluder, OrientedBox, Ray, RotationRPY, Sphere,
    Vec3, DEFAULT_EPSILON,
};
use covercab::optimizer::{max_coverage_budget, min_cover_exact, min_cover_greedy, SolverOptions};
use covercab::render::render_layout;
use covercab::report::{SolutionReport, SolveMode};
use covercab::scene::{
    default_scene, enumerate_poses, parse_scene, AngleGrid, BodyArea, Pose6D, Rail, Scene,
};
use covercab::sweep::{read_csv_from, run_sweep, write_csv_to, SweepDataset};
use covercab::visibility::{evaluate_pose, in_frustum, luminance_at, CameraModel, CoverageRecord};
use covercab::Execution;

use super::{masks, oracle_budget, oracle_min_cover, oracle_reps};

pub type Property = fn(u32) -> Result<(), String>;

pub const ALL: &[(&str, Property)] = &[
    ("rotation is orthonormal with det 1", rotation_orthonormal),
    (
        "ray/box hit invariant under rigid motion",
        ray_box_rigid_invariance,
    ),
    ("segment occlusion is symmetric", segment_symmetry),
    ("slab test agrees with ray march", slab_matches_march),
    ("rearward seat mirrors forward seat", rearward_mirror),
    (
        "built-in layouts validate with 6p markers",
        builtin_layouts_validate,
    ),
    ("pose enumeration is deterministic", enumerate_deterministic),
    ("poses lie on rail samples or anchors", poses_on_rails),
    (
        "positive luminance implies visible",
        luminance_implies_visible,
    ),
    (
        "luminance scale leaves coverage unchanged",
        luminance_scale_invariance,
    ),
    ("mirror symmetry about the cabin midplane", mirror_symmetry),
    (
        "adding an occluder never raises luminance",
        monotone_occlusion,
    ),
    ("dataset size law", dataset_size_law),
    (
        "sequential and parallel sweeps agree",
        sweep_order_independence,
    ),
    ("CSV round-trip is lossless", csv_round_trip),
    ("binarize is idempotent", binarize_idempotent),
    ("binarize is scale invariant", binarize_scale_invariant),
    (
        "matrix flattens back to the record stream",
        flatten_round_trip,
    ),
    ("stacking sums rows and keeps columns", stack_counts),
    ("exact <= greedy <= (ln 6p + 1) exact", greedy_bounds),
    ("budget coverage is monotone in k", budget_monotone),
    (
        "budget at the cover size covers every row",
        budget_at_optimum_covers,
    ),
    (
        "joint optimum >= individual optima",
        joint_at_least_individual,
    ),
    (
        "solvers match brute force for m <= 16",
        brute_force_equivalence,
    ),
    ("report totals are consistent", report_totals),
    ("end-to-end output is deterministic", end_to_end_determinism),
];

fn run<S>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String>
where
    S: Strategy,
    S::Value: std::fmt::Debug,
{
    let config = Config {
        cases,
        failure_persistence: None,
        max_global_rejects: cases * 64,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn angle() -> impl Strategy<Value = f64> {
    -180.0..180.0f64
}

fn rpy() -> impl Strategy<Value = RotationRPY> {
    (angle(), angle(), angle()).prop_map(|(r, p, y)| RotationRPY::new(r, p, y))
}

fn vec3(lo: f64, hi: f64) -> impl Strategy<Value = Vec3> {
    (lo..hi, lo..hi, lo..hi).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn unit() -> impl Strategy<Value = Vec3> {
    vec3(-1.0, 1.0).prop_filter_map("zero direction", |v| v.normalized())
}

fn obox() -> impl Strategy<Value = OrientedBox> {
    (vec3(-1.0, 1.0), vec3(0.1, 0.8), rpy()).prop_map(|(c, h, r)| OrientedBox::new(c, h, r))
}

fn occluder() -> impl Strategy<Value = Occluder> {
    prop_oneof![
        obox().prop_map(Occluder::from),
        (vec3(-1.0, 1.0), 0.1..0.8f64).prop_map(|(c, r)| Occluder::from(Sphere::new(c, r))),
    ]
}

/// A camera pose somewhere under the cabin roof.
fn cabin_pose() -> impl Strategy<Value = Pose6D> {
    (
        0.1..1.7f64,
        0.4..2.8f64,
        0.7..1.4f64,
        -90.0..30.0f64,
        angle(),
        -30.0..30.0f64,
    )
        .prop_map(|(x, y, z, p, yaw, r)| {
            Pose6D::new(Vec3::new(x, y, z), RotationRPY::new(r, p, yaw))
        })
}

fn scene() -> &'static Scene {
    static S: OnceLock<Scene> = OnceLock::new();
    S.get_or_init(default_scene)
}

/// Default scene whose layouts 11..16 are the X-mirror images of 1..6.
fn mirrored_scene() -> &'static Scene {
    static S: OnceLock<Scene> = OnceLock::new();
    S.get_or_init(|| {
        let mut v: serde_json::Value =
            serde_json::from_str(covercab::scene::DEFAULT_SCENE_JSON).unwrap();
        let layouts = v["layouts"].as_array().unwrap().clone();
        let mut all = layouts.clone();
        for l in layouts {
            let mut m = l.clone();
            m["id"] = serde_json::json!(l["id"].as_u64().unwrap() + 10);
            for occ in m["occupants"].as_array_mut().unwrap() {
                let seat = occ["seat"].as_str().unwrap();
                let swapped = match seat.strip_suffix("_a") {
                    Some(row) => format!("{row}_b"),
                    None => format!("{}_a", seat.strip_suffix("_b").unwrap()),
                };
                occ["seat"] = serde_json::json!(swapped);
            }
            all.push(m);
        }
        v["layouts"] = serde_json::Value::Array(all);
        parse_scene(&v.to_string()).unwrap()
    })
}

/// Default scene with a handful of camera locations, for fast sweeps.
fn small_scene() -> &'static Scene {
    static S: OnceLock<Scene> = OnceLock::new();
    S.get_or_init(|| {
        let mut s = default_scene();
        s.rails = vec![Rail::new(
            vec![Vec3::new(0.9, 0.4, 1.4), Vec3::new(0.9, 2.8, 1.4)],
            0.6,
        )];
        s
    })
}

fn small_grid() -> impl Strategy<Value = AngleGrid> {
    (
        prop::sample::select(vec![45.0, 60.0, 90.0, 120.0]),
        prop::sample::select(vec![30.0, 45.0, 90.0]),
    )
        .prop_map(|(ys, ps)| {
            AngleGrid::default()
                .with_overrides(&format!("yaw=0:359:{ys},pitch=-90:0:{ps},roll=0"))
                .unwrap()
        })
}

fn layout_id() -> impl Strategy<Value = u32> {
    1..=6u32
}

fn dense(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Vec<Vec<u8>>> {
    (1..=max_rows, 1..=max_cols)
        .prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(prop::bool::weighted(0.3), c), r)
        })
        .prop_map(|rows| {
            let c = rows[0].len();
            rows.into_iter()
                .enumerate()
                .map(|(i, mut row)| {
                    if row.iter().all(|b| !b) {
                        row[i % c] = true;
                    }
                    row.into_iter().map(u8::from).collect()
                })
                .collect()
        })
}

fn cover(a: &BinaryCoverageMatrix, sel: &[usize]) -> usize {
    (0..a.row_count())
        .filter(|&i| sel.iter().any(|&j| a.get(i, j) == 1))
        .count()
}

// geometry

pub fn rotation_orthonormal(cases: u32) -> Result<(), String> {
    run(cases, rpy(), |r| {
        let m = rpy_to_matrix(r);
        prop_assert!(m.orthonormality_error() < 1e-9);
        prop_assert!((m.determinant() - 1.0).abs() < 1e-9);
        Ok(())
    })
}

pub fn ray_box_rigid_invariance(cases: u32) -> Result<(), String> {
    let s = (
        obox(),
        vec3(-3.0, 3.0),
        unit(),
        rpy(),
        vec3(-5.0, 5.0),
        vec3(-0.5, 0.5),
        any::<bool>(),
    );
    run(cases, s, |(b, origin, dir, rot, shift, aim, aimed)| {
        // half the rays are aimed into the box so hits are well represented
        let dir = if aimed {
            match (b.center + aim * 0.5 - origin).normalized() {
                Some(d) => d,
                None => return Err(TestCaseError::reject("degenerate")),
            }
        } else {
            dir
        };
        let m = rot.to_matrix();
        let moved_rot = RotationRPY::from_matrix(&m.mul_mat(&b.orientation.to_matrix()));
        prop_assume!(moved_rot.pitch.abs() < 85.0);
        let moved = OrientedBox::new(m.mul_vec(b.center) + shift, b.half_extents, moved_rot);
        let ray = Ray::new(origin, dir).unwrap();
        let moved_ray = Ray::new(m.mul_vec(origin) + shift, m.mul_vec(dir)).unwrap();
        match (ray_hits_box(&ray, &b), ray_hits_box(&moved_ray, &moved)) {
            (Some(t), Some(u)) => prop_assert!((t - u).abs() < 1e-7, "{t} vs {u}"),
            (None, None) => {}
            (x, y) => prop_assert!(false, "{x:?} vs {y:?}"),
        }
        Ok(())
    })
}

pub fn segment_symmetry(cases: u32) -> Result<(), String> {
    let s = (
        vec3(-3.0, 3.0),
        vec3(-3.0, 3.0),
        prop::collection::vec(occluder(), 1..5),
    );
    run(cases, s, |(p0, p1, occ)| {
        prop_assert_eq!(
            segment_occluded(p0, p1, &occ, DEFAULT_EPSILON),
            segment_occluded(p1, p0, &occ, DEFAULT_EPSILON)
        );
        Ok(())
    })
}

pub fn slab_matches_march(cases: u32) -> Result<(), String> {
    const T_MAX: f64 = 6.0;
    const STEP: f64 = 1e-4;
    let s = (obox(), vec3(-2.0, 2.0), unit());
    run(cases, s, |(b, origin, dir)| {
        let ray = Ray::new(origin, dir).unwrap();
        let chord = b
            .line_interval(&ray)
            .map(|(t0, t1)| t1.min(T_MAX) - t0.max(0.0))
            .unwrap_or(-1.0);
        // skip chords too short for the march to resolve
        prop_assume!(!(0.0..1e-3).contains(&chord));
        let slab = ray_hits_box(&ray, &b).is_some_and(|t| t <= T_MAX);
        prop_assert_eq!(slab, super::march_hits(&ray, &b, T_MAX, STEP));
        Ok(())
    })
}

// scene

pub fn rearward_mirror(cases: u32) -> Result<(), String> {
    let s = (
        prop::sample::select(vec!["row1_a", "row1_b", "row2_a", "row2_b"]),
        0.60..0.75f64,
        0.0..0.08f64,
        0.45..0.60f64,
        0.16..0.20f64,
        0.30..0.45f64,
        0.12..0.18f64,
        0.10..0.18f64,
    );
    run(
        cases,
        s,
        |(seat, nose_h, nose_f, sh_h, sh_w, chest_h, waist_h, waist_w)| {
            let text = serde_json::json!({
                "occupants": [{
                    "name": "p",
                    "nose_height": nose_h, "nose_forward": nose_f,
                    "shoulder_height": sh_h, "shoulder_half_width": sh_w,
                    "chest_height": chest_h,
                    "waist_height": waist_h, "waist_half_width": waist_w,
                }],
                "layouts": [
                    {"id": 1, "occupants": [{"seat": seat, "facing": "forward", "profile": "p"}]},
                    {"id": 2, "occupants": [{"seat": seat, "facing": "rearward", "profile": "p"}]},
                ],
            });
            let sc =
                parse_scene(&text.to_string()).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let (f, r) = (sc.layout(1).unwrap(), sc.layout(2).unwrap());
            let origin = f.seats[0].reference;
            for (a, b) in f.occupants[0]
                .key_points
                .iter()
                .zip(&r.occupants[0].key_points)
            {
                prop_assert!((a.x - b.x).abs() < 1e-12);
                prop_assert!((a.z - b.z).abs() < 1e-12);
                prop_assert!(((a.y - origin.y) + (b.y - origin.y)).abs() < 1e-12);
            }
            Ok(())
        },
    )
}

pub fn builtin_layouts_validate(cases: u32) -> Result<(), String> {
    run(cases, layout_id(), |id| {
        let l =
            covercab::scene::builtin_layout(id).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let p = [4, 6, 6, 2, 2, 4][id as usize - 1];
        prop_assert_eq!(l.occupant_count(), p);
        prop_assert_eq!(l.marker_count(), 6 * p);
        Ok(())
    })
}

pub fn enumerate_deterministic(cases: u32) -> Result<(), String> {
    run(cases, small_grid(), |g| {
        let s = scene();
        let a = enumerate_poses(&s.rails, &s.cabin.anchors, &g);
        let b = enumerate_poses(&s.rails, &s.cabin.anchors, &g);
        prop_assert_eq!(a, b);
        Ok(())
    })
}

pub fn poses_on_rails(cases: u32) -> Result<(), String> {
    let s = (
        prop::sample::select(vec![0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.7]),
        small_grid(),
    );
    run(cases, s, |(step, g)| {
        let sc = scene();
        let rails: Vec<Rail> = sc
            .rails
            .iter()
            .map(|r| Rail::new(r.vertices.clone(), step))
            .collect();
        let sites: Vec<Vec3> = rails
            .iter()
            .flat_map(Rail::samples)
            .chain(sc.cabin.anchors.iter().copied())
            .collect();
        for cp in enumerate_poses(&rails, &sc.cabin.anchors, &g) {
            let d = sites
                .iter()
                .map(|s| s.distance(cp.pose.position))
                .fold(f64::INFINITY, f64::min);
            prop_assert!(d < 1e-9);
        }
        Ok(())
    })
}

// visibility

pub fn luminance_implies_visible(cases: u32) -> Result<(), String> {
    run(cases, (layout_id(), cabin_pose()), |(id, pose)| {
        let l = scene().layout(id).unwrap();
        let cam = CameraModel::default();
        for occ in &l.occupants {
            for p in occ.key_points {
                if luminance_at(&pose, &cam, p, &l.occluders) > 0.0 {
                    prop_assert!(in_frustum(&pose, &cam, p));
                    prop_assert!(!segment_occluded(
                        pose.position,
                        p,
                        &l.occluders,
                        DEFAULT_EPSILON
                    ));
                }
            }
        }
        Ok(())
    })
}

pub fn luminance_scale_invariance(cases: u32) -> Result<(), String> {
    run(cases, (layout_id(), cabin_pose()), |(id, pose)| {
        let l = scene().layout(id).unwrap();
        let lum: Vec<f64> = evaluate_pose(0, &pose, l, &CameraModel::default())
            .iter()
            .map(|r| r.luminance)
            .collect();
        let base = binarize(&lum).unwrap();
        for k in [1e-3, 1.0, 1e3] {
            let scaled: Vec<f64> = lum.iter().map(|v| v * k).collect();
            prop_assert_eq!(&binarize(&scaled).unwrap(), &base);
        }
        Ok(())
    })
}

pub fn mirror_symmetry(cases: u32) -> Result<(), String> {
    run(cases, (layout_id(), cabin_pose()), |(id, pose)| {
        let s = mirrored_scene();
        let cam = CameraModel::default();
        let mid = s.cabin.width / 2.0;
        let a = evaluate_pose(0, &pose, s.layout(id).unwrap(), &cam);
        let b = evaluate_pose(0, &pose.mirrored_x(mid), s.layout(id + 10).unwrap(), &cam);
        for r in &a {
            let m = b
                .iter()
                .find(|x| x.seat_index == r.seat_index && x.body_area == r.body_area.mirrored())
                .unwrap();
            prop_assert!(
                (r.luminance - m.luminance).abs() < 1e-9,
                "{:?} {} vs {}",
                r.body_area,
                r.luminance,
                m.luminance
            );
        }
        Ok(())
    })
}

pub fn monotone_occlusion(cases: u32) -> Result<(), String> {
    let extra = prop_oneof![
        (vec3(0.2, 1.6), 0.05..0.4f64).prop_map(|(c, r)| Occluder::from(Sphere::new(
            Vec3::new(c.x, c.y * 1.7, c.z * 0.8),
            r
        ))),
        (vec3(0.2, 1.6), vec3(0.02, 0.4), rpy()).prop_map(|(c, h, r)| Occluder::from(
            OrientedBox::new(Vec3::new(c.x, c.y * 1.7, c.z * 0.8), h, r)
        )),
    ];
    run(
        cases,
        (layout_id(), cabin_pose(), extra),
        |(id, pose, extra)| {
            let cam = CameraModel::default();
            let l = scene().layout(id).unwrap();
            let mut more = l.clone();
            more.occluders.push(extra);
            let a = evaluate_pose(0, &pose, l, &cam);
            let b = evaluate_pose(0, &pose, &more, &cam);
            for (x, y) in a.iter().zip(&b) {
                prop_assert!(y.luminance <= x.luminance);
            }
            Ok(())
        },
    )
}

// sweep

pub fn dataset_size_law(cases: u32) -> Result<(), String> {
    run(cases, (layout_id(), small_grid()), |(id, g)| {
        let s = small_scene();
        let ds = run_sweep(s, id, &g, Execution::Parallel).unwrap();
        let p = s.layout(id).unwrap().occupant_count();
        prop_assert_eq!(ds.len(), s.poses_with_grid(&g).len() * 6 * p);
        Ok(())
    })
}

pub fn sweep_order_independence(cases: u32) -> Result<(), String> {
    run(cases, (layout_id(), small_grid()), |(id, g)| {
        let s = small_scene();
        let a = run_sweep(s, id, &g, Execution::Sequential).unwrap();
        let b = run_sweep(s, id, &g, Execution::Parallel).unwrap();
        prop_assert_eq!(a.records, b.records);
        Ok(())
    })
}

pub fn csv_round_trip(cases: u32) -> Result<(), String> {
    run(cases, (layout_id(), small_grid()), |(id, g)| {
        let ds = run_sweep(small_scene(), id, &g, Execution::Parallel).unwrap();
        let mut buf = Vec::new();
        write_csv_to(&ds, &mut buf).unwrap();
        let back = read_csv_from(buf.as_slice()).unwrap();
        prop_assert_eq!(&back.records, &ds.records);
        let mut again = Vec::new();
        write_csv_to(&back, &mut again).unwrap();
        prop_assert_eq!(buf, again);
        Ok(())
    })
}

// covermat

fn luminances() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), 1e-6..100.0f64], 0..40)
}

pub fn binarize_idempotent(cases: u32) -> Result<(), String> {
    run(cases, luminances(), |l| {
        let b = binarize(&l).unwrap();
        let bf: Vec<f64> = b.iter().map(|&v| f64::from(v)).collect();
        prop_assert_eq!(binarize(&bf).unwrap(), b);
        Ok(())
    })
}

pub fn binarize_scale_invariant(cases: u32) -> Result<(), String> {
    run(cases, (luminances(), 1e-3..1e3f64), |(l, k)| {
        let scaled: Vec<f64> = l.iter().map(|v| v * k).collect();
        prop_assert_eq!(binarize(&scaled).unwrap(), binarize(&l).unwrap());
        Ok(())
    })
}

/// Records for `m` positions and `p` occupants with random luminance, shuffled.
fn random_dataset() -> impl Strategy<Value = (usize, usize, Vec<f64>, Vec<usize>)> {
    (1..=3usize, 1..=8usize).prop_flat_map(|(p, m)| {
        let n = 6 * p * m;
        (
            Just(p),
            Just(m),
            prop::collection::vec(prop_oneof![Just(0.0), 0.01..5.0f64], n),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        )
    })
}

fn dataset_from(p: usize, lum: &[f64], order: &[usize]) -> SweepDataset {
    let recs: Vec<CoverageRecord> = order
        .iter()
        .map(|&k| {
            let (pi, i) = (k / (6 * p), k % (6 * p));
            CoverageRecord {
                position_index: pi * 3,
                seat_index: i / 6,
                body_area: BodyArea::ALL[i % 6],
                luminance: lum[k],
                pose: Pose6D::new(Vec3::new(0.1 * pi as f64, 0.5, 1.4), RotationRPY::default()),
            }
        })
        .collect();
    SweepDataset {
        records: recs,
        meta: None,
    }
}

pub fn flatten_round_trip(cases: u32) -> Result<(), String> {
    run(cases, random_dataset(), |(p, m, lum, order)| {
        let ds = dataset_from(p, &lum, &order);
        let a = build_bmatrix(&ds, 1).unwrap();
        prop_assert_eq!(a.column_count(), m);
        prop_assert_eq!(a.row_count(), 6 * p);
        let flat: Vec<u8> = (0..m)
            .flat_map(|j| (0..6 * p).map(move |i| (i, j)))
            .map(|(i, j)| a.get(i, j))
            .collect();
        prop_assert_eq!(flat, binarize(&lum).unwrap());
        Ok(())
    })
}

pub fn stack_counts(cases: u32) -> Result<(), String> {
    let s = (1..=4usize, 1..=6usize).prop_flat_map(|(n, m)| {
        prop::collection::vec(
            (1..=3usize).prop_flat_map(move |p| {
                prop::collection::vec(prop::collection::vec(0..=1u8, m), 6 * p)
            }),
            n,
        )
    });
    run(cases, s, |mats| {
        let mats: Vec<BinaryCoverageMatrix> = mats
            .iter()
            .enumerate()
            .map(|(i, d)| BinaryCoverageMatrix::from_dense(i as u32 + 1, d))
            .collect();
        let st = stack_layouts(&mats).unwrap();
        prop_assert_eq!(
            st.row_count(),
            mats.iter()
                .map(BinaryCoverageMatrix::row_count)
                .sum::<usize>()
        );
        prop_assert_eq!(st.columns(), mats[0].columns());
        let mut offset = 0;
        for m in &mats {
            for i in 0..m.row_count() {
                for j in 0..m.column_count() {
                    prop_assert_eq!(st.get(offset + i, j), m.get(i, j));
                }
            }
            offset += m.row_count();
        }
        Ok(())
    })
}

// optimizer

pub fn greedy_bounds(cases: u32) -> Result<(), String> {
    run(cases, dense(18, 12), |d| {
        let a = BinaryCoverageMatrix::from_dense(1, &d);
        let e = min_cover_exact(&a, &SolverOptions::default()).unwrap();
        let g = min_cover_greedy(&a).unwrap();
        prop_assert_eq!(g.num_covered, a.row_count());
        prop_assert!(e.num_cameras <= g.num_cameras);
        let ceiling = ((a.row_count() as f64).ln() + 1.0) * e.num_cameras as f64;
        prop_assert!(g.num_cameras as f64 <= ceiling + 1e-9);
        Ok(())
    })
}

pub fn budget_monotone(cases: u32) -> Result<(), String> {
    run(cases, dense(18, 10), |d| {
        let a = BinaryCoverageMatrix::from_dense(1, &d);
        let mut last = 0;
        for k in 0..=a.column_count() {
            let s = max_coverage_budget(&a, k, &SolverOptions::default()).unwrap();
            prop_assert_eq!(s.num_cameras, k);
            prop_assert!(s.num_covered >= last);
            last = s.num_covered;
        }
        Ok(())
    })
}

pub fn budget_at_optimum_covers(cases: u32) -> Result<(), String> {
    run(cases, dense(18, 12), |d| {
        let a = BinaryCoverageMatrix::from_dense(1, &d);
        let e = min_cover_exact(&a, &SolverOptions::default()).unwrap();
        let b = max_coverage_budget(&a, e.num_cameras, &SolverOptions::default()).unwrap();
        prop_assert_eq!(b.num_covered, a.row_count());
        prop_assert_eq!(b.selected, e.selected);
        Ok(())
    })
}

pub fn joint_at_least_individual(cases: u32) -> Result<(), String> {
    let s = (1..=10usize).prop_flat_map(|m| {
        let one = move || {
            (1..=12usize).prop_flat_map(move |r| {
                prop::collection::vec(prop::collection::vec(prop::bool::weighted(0.4), m), r)
            })
        };
        (one(), one())
    });
    run(cases, s, |(x, y)| {
        let fix = |d: Vec<Vec<bool>>| -> Vec<Vec<u8>> {
            let m = d[0].len();
            d.into_iter()
                .enumerate()
                .map(|(i, mut r)| {
                    if r.iter().all(|b| !b) {
                        r[i % m] = true;
                    }
                    r.into_iter().map(u8::from).collect()
                })
                .collect()
        };
        let a = BinaryCoverageMatrix::from_dense(1, &fix(x));
        let b = BinaryCoverageMatrix::from_dense(2, &fix(y));
        let opts = SolverOptions::default();
        let ea = min_cover_exact(&a, &opts).unwrap().num_cameras;
        let eb = min_cover_exact(&b, &opts).unwrap().num_cameras;
        let joint = min_cover_exact(&stack_layouts(&[a, b]).unwrap(), &opts)
            .unwrap()
            .num_cameras;
        prop_assert!(joint >= ea.max(eb));
        Ok(())
    })
}

pub fn brute_force_equivalence(cases: u32) -> Result<(), String> {
    run(cases, (dense(12, 16), 1..=4usize), |(d, k)| {
        let a = BinaryCoverageMatrix::from_dense(1, &d);
        let cols = masks(&a);
        let (size, lex, ties) = oracle_min_cover(&cols, a.row_count()).unwrap();
        for opts in [SolverOptions::default(), SolverOptions::sequential()] {
            let e = min_cover_exact(&a, &opts).unwrap();
            prop_assert_eq!(e.num_cameras, size);
            prop_assert_eq!(&e.selected, &lex);
            prop_assert_eq!(e.tie_class_size, ties);
            if k <= a.column_count() {
                let (best, blex) = oracle_budget(&cols, k);
                let b = max_coverage_budget(&a, k, &opts).unwrap();
                prop_assert_eq!(b.num_covered, best);
                prop_assert_eq!(b.num_covered, cover(&a, &b.selected));
                prop_assert_eq!(b.num_cameras, k);
                if k <= oracle_reps(&cols).len() {
                    prop_assert_eq!(&b.selected, &blex);
                } else {
                    prop_assert!(blex.iter().all(|j| b.selected.contains(j)));
                }
            }
        }
        Ok(())
    })
}

// report

pub fn report_totals(cases: u32) -> Result<(), String> {
    run(cases, (dense(18, 10), 0..=3usize), |(d, k)| {
        let a = BinaryCoverageMatrix::from_dense(1, &d);
        let k = k.min(a.column_count());
        let s = max_coverage_budget(&a, k, &SolverOptions::default()).unwrap();
        let r = SolutionReport::new(&a, &s, SolveMode::Budget, Some(k));
        prop_assert!(r.num_covered <= r.total);
        prop_assert_eq!(r.total, a.row_count());
        prop_assert_eq!(r.uncovered.len(), r.total - r.num_covered);
        prop_assert_eq!(r.rows.iter().filter(|x| x.covered).count(), r.num_covered);
        Ok(())
    })
}

pub fn end_to_end_determinism(cases: u32) -> Result<(), String> {
    run(cases, (layout_id(), small_grid()), |(id, g)| {
        let s = small_scene();
        let once = || {
            let ds = run_sweep(s, id, &g, Execution::Parallel).unwrap();
            let mut csv = Vec::new();
            write_csv_to(&ds, &mut csv).unwrap();
            let a = build_bmatrix(&ds, id).unwrap();
            let sol = max_coverage_budget(&a, 2.min(a.column_count()), &SolverOptions::default())
                .unwrap();
            let covered = sol.covered.clone();
            let cams: Vec<Pose6D> = sol.selected.iter().map(|&j| a.columns()[j].pose).collect();
            let svg = render_layout(s, s.layout(id).unwrap(), &covered, &cams);
            (csv, sol, svg)
        };
        prop_assert_eq!(once(), once());
        Ok(())
    })
}
