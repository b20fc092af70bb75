//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::collections::HashSet;
use std::f64::consts::{FRAC_PI_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use ndarray::Array2;
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, RngAlgorithm, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use common::*;
use insar::config::Config;
use insar::geometry::{
    build_virtual_array, derive_chirp_params, write_trajectory_csv, ChirpConfig, Vec3, SPEED_OF_LIGHT,
};
use insar::imaging::{
    aperture_pulses, image_stack, predicted_azimuth_resolution, ImageGrid, ImagingOptions, Interpolation,
    SarFrame,
};
use insar::interferometry::{
    combine_correlations, elevation_from_phase, phase_from_elevation, read_elevation_map, tau_from_elevation,
    ElevationMap, InterferogramPixel,
};
use insar::pipeline::{run_pipeline, CLOUD_FILE, MAP_FILE};
use insar::pointcloud::{
    filter_points, read_pcd, spherical_to_cartesian, write_pcd, CloudPoint, ElevationPointCloud, FilterConfig,
    FilterStats, Provenance, Spherical,
};
use insar::sim::{synthesize_capture, write_scene_csv, ApertureWindow};

type Verdict = Result<String, String>;
type Criterion = fn() -> Verdict;

fn check(pass: bool, detail: String) -> Verdict {
    if pass {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// 1 -------------------------------------------------------------------------

/// Runs the two-reflector rail scene and returns (truth z, recovered z) for
/// each reflector plus the pipeline wall time.
fn reflector_run(mounted_z: f64, dir: &Path) -> (Vec<(f64, f64)>, f64) {
    let reflectors = [[0.0, 3.0, 0.05], [0.0, 4.5, mounted_z]];
    let scene_path = dir.join("scene.csv");
    let traj_path = dir.join("rail.csv");
    write_scene_csv(&scene(&[(reflectors[0], 1.0), (reflectors[1], 1.0)]), &scene_path).unwrap();
    write_trajectory_csv(&rail(1.0, 2.5), &traj_path).unwrap();

    let cfg = Config {
        // a pixel center on the reflectors' along-track position x = 0; the
        // 6 mm azimuth response is far narrower than a 4 cm pixel
        grid: ImageGrid::new([-5.02, 0.0], [10.0, 10.0], 0.04),
        noise_snr_db: 20.0,
        seed: 7,
        sensor_mount_height: TABLE_HEIGHT_M,
        filter: FilterConfig::with_mount_height(TABLE_HEIGHT_M),
        ..Config::default()
    };

    let t = Instant::now();
    run_pipeline(&cfg, &scene_path, &traj_path, dir).unwrap();
    let runtime = t.elapsed().as_secs_f64();

    let map = read_elevation_map(&dir.join(MAP_FILE)).unwrap();
    let cloud = filter_points(&map, &cfg.filter).unwrap();
    let results = reflectors
        .iter()
        .map(|r| {
            let local = map.frame.to_local(&Vec3::new(r[0], r[1], r[2]));
            let slant = local.y.hypot(local.z);
            let peak = peak_pixel_near(&map, local.x, slant, 0.3);
            let point = cloud
                .points
                .iter()
                .find(|p| p.pixel == peak)
                .unwrap_or_else(|| panic!("peak pixel {peak:?} of reflector at z = {} was filtered out", r[2]));
            (r[2], map.frame.to_world(&point.position).z)
        })
        .collect();
    (results, runtime)
}

fn peak_pixel_near(map: &ElevationMap, u: f64, v: f64, radius: f64) -> (usize, usize) {
    let mut best = ((0, 0), f64::MIN);
    for ((r, c), p) in map.pixels.indexed_iter() {
        let (pu, pv) = map.grid.pixel_center(r, c);
        if (pu - u).hypot(pv - v) <= radius && p.combined_magnitude > best.1 {
            best = ((r, c), p.combined_magnitude);
        }
    }
    best.0
}

fn criterion_1() -> Verdict {
    let mut details = Vec::new();
    let mut pass = true;
    for mounted in [0.33, 0.63] {
        let dir = tempfile::tempdir().unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let (results, runtime) = pool.install(|| reflector_run(mounted, dir.path()));
        for (truth, got) in results {
            let err = got - truth;
            pass &= err.abs() <= REFLECTOR_HEIGHT_TOL_M;
            details.push(format!("{:.1}->{:.1} cm", truth * 100.0, got * 100.0));
        }
        pass &= runtime <= REFLECTOR_RUNTIME_S;
        details.push(format!("{runtime:.1} s on 4 threads"));
    }
    check(pass, details.join(", "))
}

// 2 -------------------------------------------------------------------------

fn criterion_2() -> Verdict {
    let d = derive_chirp_params(&ChirpConfig::automotive()).map_err(|e| e.to_string())?;
    // printed value, computed value in the same unit, half of the last printed digit
    let rows = [
        ("range resolution cm", 18.3, d.range_resolution * 100.0, 0.05),
        ("max range m", 93.7, d.max_range, 0.05),
        ("pulse us", 27.3, d.pulse_length * 1e6, 0.05),
        ("effective PRI us", 191.7, d.effective_pri * 1e6, 0.05),
        ("wavelength mm", 3.87, d.wavelength * 1e3, 0.005),
    ];
    let mut pass = true;
    let parts: Vec<String> = rows
        .iter()
        .map(|&(name, printed, got, tol)| {
            pass &= (got - printed).abs() <= tol;
            format!("{name} {got:.4} (reported {printed})")
        })
        .collect();
    check(pass, parts.join(", "))
}

// 3 -------------------------------------------------------------------------

fn criterion_3() -> Verdict {
    let mut cfg = ChirpConfig::automotive();
    cfg.num_tx = 1;
    let array = build_virtual_array(vec![Vec3::zeros()], vec![Vec3::zeros()]);
    let range = 10.0;
    let traj = rail(1.0, 2.5);
    let target = scene(&[([0.0, range, TABLE_HEIGHT_M], 1.0)]);
    let capture = synthesize_capture(&target, &traj, &cfg, &array, ApertureWindow::whole(&traj)).unwrap();
    // 1 mm cut along-track through the target
    let grid = ImageGrid::new([-0.15, range - 0.0005], [0.3, 0.001], 0.001);
    let stack = image_stack(&capture, &grid, &ImagingOptions::default()).unwrap();
    let cols = grid.shape().1;
    let xs: Vec<f64> = (0..cols).map(|c| grid.pixel_center(0, c).0).collect();
    let mag: Vec<f64> = stack.images[0].row(0).iter().map(|c| c.norm()).collect();
    let fwhm = width_at(&xs, &mag, 0.5) / range;
    let predicted = predicted_azimuth_resolution(1.0, cfg.wavelength(), FRAC_PI_2).unwrap();
    let rel = fwhm / predicted - 1.0;
    check(
        rel.abs() <= AZIMUTH_FWHM_REL_TOL,
        format!(
            "FWHM {:.4} deg vs lambda/L {:.4} deg ({:+.1}%, allowed +-{:.0}%)",
            fwhm.to_degrees(),
            predicted.to_degrees(),
            100.0 * rel,
            100.0 * AZIMUTH_FWHM_REL_TOL
        ),
    )
}

// 4 -------------------------------------------------------------------------

fn phase_error_std(baselines: usize, rng: &mut ChaCha8Rng) -> f64 {
    let truth = 0.6;
    // 10 dB per element: noise variance 0.1, 0.05 per component
    let noise = Normal::new(0.0, 0.05f64.sqrt()).unwrap();
    let draw = |rng: &mut ChaCha8Rng| Complex64::new(noise.sample(rng), noise.sample(rng));
    let errors: Vec<f64> = (0..MONTE_CARLO_TRIALS)
        .map(|_| {
            let pairs: Vec<(Complex64, Complex64)> = (0..baselines)
                .map(|_| {
                    let lower = Complex64::new(1.0, 0.0) + draw(rng);
                    let upper = Complex64::from_polar(1.0, -truth) + draw(rng);
                    (lower, upper)
                })
                .collect();
            let (mean, _) = combine_correlations(pairs).unwrap();
            (mean - truth + PI).rem_euclid(2.0 * PI) - PI
        })
        .collect();
    let m = errors.iter().sum::<f64>() / errors.len() as f64;
    (errors.iter().map(|e| (e - m).powi(2)).sum::<f64>() / (errors.len() - 1) as f64).sqrt()
}

fn criterion_4() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let one = phase_error_std(1, &mut rng);
    let four = phase_error_std(4, &mut rng);
    let ratio = four / one;
    check(
        (ratio - SQRT_N_RATIO).abs() <= SQRT_N_RATIO_TOL,
        format!("std N=1 {one:.4} rad, N=4 {four:.4} rad, ratio {ratio:.3}"),
    )
}

// 5 -------------------------------------------------------------------------

fn criterion_5() -> Verdict {
    let lambda = ChirpConfig::automotive().wavelength();
    // 0.1 degree steps including both endpoints
    let phis: Vec<f64> = (-900..=900).map(|k| (k as f64 / 10.0).to_radians()).collect();
    let mut round_trip = 0.0f64;
    for dv in [lambda / 4.0, lambda / 5.0, lambda / 8.0] {
        for &phi in &phis {
            let dpsi = phase_from_elevation(phi, dv, lambda).unwrap();
            let back = elevation_from_phase(dpsi, dv, lambda).unwrap();
            round_trip = round_trip.max((back - phi).abs());
        }
    }
    let mut norm = 0.0f64;
    for &r in &[0.0, 0.5, 3.0, 12.5, 41.0] {
        for i in 0..=36 {
            for &phi in &phis[..] {
                let theta = i as f64 * 5f64.to_radians();
                let p = spherical_to_cartesian(Spherical { r, theta, phi });
                norm = norm.max((p.norm() - r).abs() / r.max(1.0));
            }
        }
    }
    let mut two_way = 0.0f64;
    for dv in [lambda / 4.0, 0.5e-3] {
        for &phi in &phis {
            if phi == 0.0 {
                continue;
            }
            let phase = phase_from_elevation(phi, dv, lambda).unwrap();
            let from_tau = 2.0 * PI * (SPEED_OF_LIGHT / lambda) * 2.0 * tau_from_elevation(phi, dv).unwrap();
            two_way = two_way.max(((phase - from_tau) / phase).abs());
        }
    }
    check(
        round_trip <= IDENTITY_TOL && norm <= IDENTITY_TOL && two_way <= IDENTITY_TOL,
        format!("round trip {round_trip:.1e} rad, norm {norm:.1e}, two-way {two_way:.1e} rel"),
    )
}

// 6 -------------------------------------------------------------------------

fn criterion_6() -> Verdict {
    let cfg = ChirpConfig::automotive();
    let array = insar::geometry::VirtualArray::two_layer_default(cfg.wavelength());
    let traj = rail(0.2, 9.0);
    let targets = [[0.1, 3.0, 0.6], [-0.2, 3.4, 1.1], [0.3, 3.6, 0.9]];
    let s = scene(&[(targets[0], 1.0), (targets[1], 0.7), (targets[2], 0.4)]);
    // 64 TDM cycles, so 64 pulses per VX
    let window = ApertureWindow::new(0.0, 63.5 * cfg.effective_pri());
    let capture = synthesize_capture(&s, &traj, &cfg, &array, window).unwrap();
    let grid = ImageGrid::new([-0.64, 2.8], [1.28, 1.28], 0.04);
    let mut options = ImagingOptions::default();
    options.aperture.length = 1.0;

    let t = Instant::now();
    options.interpolation = Interpolation::Sinc;
    let stack = image_stack(&capture, &grid, &options).unwrap();
    let runtime = t.elapsed().as_secs_f64();
    options.interpolation = Interpolation::Linear;
    let linear = image_stack(&capture, &grid, &options).unwrap();

    let frame: SarFrame = stack.frame;
    let mut worst: f64 = 0.0;
    let mut worst_linear: f64 = 0.0;
    let mut pulses_per_vx = 0;
    for vx in [0, 5, 9, 11] {
        let pulses = aperture_pulses(&capture, vx, &frame, options.aperture.length);
        pulses_per_vx = pulses.len();
        let img = &stack.images[vx];
        for t in &targets {
            let local = frame.to_local(&Vec3::new(t[0], t[1], t[2]));
            let slant = local.y.hypot(local.z);
            let (r, c) = local_peak(img, &grid, local.x, slant);
            let (u, v) = grid.pixel_center(r, c);
            let want = correlation_oracle(&capture, &pulses, &frame, Vec3::new(u, v, grid.height));
            worst = worst.max((img[[r, c]] - want).norm() / want.norm());
            worst_linear = worst_linear.max((linear.images[vx][[r, c]] - want).norm() / want.norm());
        }
    }
    check(
        worst < ORACLE_REL_TOL && runtime < ORACLE_RUNTIME_S && pulses_per_vx <= 64,
        format!(
            "sinc max rel err {worst:.2e} (linear {worst_linear:.2e}), {pulses_per_vx} pulses/VX, 32x32, {runtime:.2} s"
        ),
    )
}

fn local_peak(img: &Array2<Complex64>, grid: &ImageGrid, u: f64, v: f64) -> (usize, usize) {
    let mut best = ((0, 0), -1.0);
    for ((r, c), z) in img.indexed_iter() {
        let (pu, pv) = grid.pixel_center(r, c);
        if (pu - u).abs() <= 0.13 && (pv - v).abs() <= 0.13 && z.norm() > best.1 {
            best = ((r, c), z.norm());
        }
    }
    best.0
}

// 7 -------------------------------------------------------------------------

fn random_map() -> impl Strategy<Value = ElevationMap> {
    let pixel = (
        prop::option::weighted(0.9, -FRAC_PI_2..=FRAC_PI_2),
        -10.0..40.0f64,
        0.0..=1.0f64,
        0.0..5.0f64,
    );
    (
        (-4.0..4.0f64, 0.0..4.0f64, 0.05..0.6f64),
        prop::collection::vec(pixel, 36),
    )
        .prop_map(|((u0, v0, px), pixels)| {
            let grid = ImageGrid::new([u0, v0], [6.0 * px + 1e-9, 6.0 * px + 1e-9], px);
            ElevationMap {
                grid,
                frame: SarFrame {
                    origin: Vec3::zeros(),
                    orientation: nalgebra::UnitQuaternion::identity(),
                },
                wavelength: 3.87e-3,
                baseline_length: 3.87e-3 / 4.0,
                baseline_count: 4,
                elevation: Array2::from_shape_vec((6, 6), pixels.iter().map(|p| p.0).collect()).unwrap(),
                pixels: Array2::from_shape_vec(
                    (6, 6),
                    pixels
                        .iter()
                        .map(|p| InterferogramPixel {
                            mean_phase_delay: 0.0,
                            circular_variance: p.2,
                            combined_magnitude: p.3,
                            snr_db: p.1,
                        })
                        .collect(),
                )
                .unwrap(),
            }
        })
}

fn random_filter() -> impl Strategy<Value = FilterConfig> {
    (
        -5.0..30.0f64,
        1.0..90.0f64,
        0.0..4.0f64,
        1.0..90.0f64,
        0.0..180.0f64,
        -2.0..0.5f64,
        0.0..=1.0f64,
    )
        .prop_map(|(snr, elev, radius, half, cone, min_z, var)| FilterConfig {
            snr_threshold_db: snr,
            max_elevation_angle: elev.to_radians(),
            min_radius: radius,
            front_azimuth_halfwidth: half.to_radians(),
            front_cone_angle: cone.to_radians(),
            min_z,
            max_circular_variance: var,
        })
}

/// Every predicate, evaluated from first principles for one emitted point.
fn satisfies_all(map: &ElevationMap, cfg: &FilterConfig, p: &CloudPoint) -> bool {
    let Some(phi) = map.elevation[p.pixel] else { return false };
    let q = map.pixels[p.pixel];
    let (u, v) = map.grid.pixel_center(p.pixel.0, p.pixel.1);
    let r = (u * u + v * v).sqrt();
    let theta = v.atan2(u);
    let z = r * theta.sin() * phi.sin();
    let in_front = r < cfg.min_radius && (theta - cfg.front_cone_angle).abs() <= cfg.front_azimuth_halfwidth;
    q.snr_db >= cfg.snr_threshold_db
        && q.circular_variance <= cfg.max_circular_variance
        && phi.abs() <= cfg.max_elevation_angle
        && !in_front
        && z >= cfg.min_z - 1e-12
        && (p.position.z - z).abs() < 1e-9
}

fn pixels_of(map: &ElevationMap, cfg: &FilterConfig) -> HashSet<(usize, usize)> {
    filter_points(map, cfg).unwrap().points.iter().map(|p| p.pixel).collect()
}

/// Tightened copies of `cfg`, one per predicate.
fn tightened(cfg: &FilterConfig, step: f64) -> Vec<FilterConfig> {
    let mut out = Vec::new();
    let mut c = *cfg;
    c.snr_threshold_db += 10.0 * step;
    out.push(c);
    let mut c = *cfg;
    c.max_circular_variance *= 1.0 - step;
    out.push(c);
    let mut c = *cfg;
    c.max_elevation_angle *= 1.0 - 0.9 * step;
    out.push(c);
    let mut c = *cfg;
    c.min_radius += 2.0 * step;
    out.push(c);
    let mut c = *cfg;
    c.front_azimuth_halfwidth = (c.front_azimuth_halfwidth * (1.0 + step)).min(FRAC_PI_2);
    out.push(c);
    let mut c = *cfg;
    c.min_z += step;
    out.push(c);
    out
}

fn boundary_map(u: f64, v: f64, snr: f64, phi: f64) -> ElevationMap {
    let grid = ImageGrid::new([u - 0.02, v - 0.02], [0.04, 0.04], 0.04);
    ElevationMap {
        grid,
        frame: SarFrame {
            origin: Vec3::zeros(),
            orientation: nalgebra::UnitQuaternion::identity(),
        },
        wavelength: 3.87e-3,
        baseline_length: 3.87e-3 / 4.0,
        baseline_count: 4,
        elevation: Array2::from_elem((1, 1), Some(phi)),
        pixels: Array2::from_elem(
            (1, 1),
            InterferogramPixel {
                mean_phase_delay: 0.0,
                circular_variance: 0.0,
                combined_magnitude: 1.0,
                snr_db: snr,
            },
        ),
    }
}

fn default_boundaries() -> Result<usize, String> {
    let d = FilterConfig::default();
    let eps = 1e-6;
    let deg = |x: f64| x.to_radians();
    // (u, v, snr, phi, expected kept)
    let cases = [
        (0.0, 5.0, 15.0, 0.0, true),
        (0.0, 5.0, 15.0 - eps, 0.0, false),
        (0.0, 5.0, 14.0, 0.0, false),
        (0.0, 5.0, 30.0, deg(45.0) - eps, true),
        (0.0, 5.0, 30.0, deg(45.0) + eps, false),
        (0.0, 5.0, 30.0, deg(44.0), true),
        (0.0, 5.0, 30.0, deg(50.0), false),
        (0.0, 1.5, 30.0, 0.0, false),
        (0.0, 2.0 - 1e-4, 30.0, 0.0, false),
        (0.0, 2.0 + 1e-4, 30.0, 0.0, true),
        // r = 1.5 m at cone angles 90 -+ (15 -+ 0.01) degrees
        (1.5 * deg(75.01).cos(), 1.5 * deg(75.01).sin(), 30.0, 0.0, false),
        (1.5 * deg(74.99).cos(), 1.5 * deg(74.99).sin(), 30.0, 0.0, true),
        (1.5 * deg(104.99).cos(), 1.5 * deg(104.99).sin(), 30.0, 0.0, false),
        (1.5 * deg(105.01).cos(), 1.5 * deg(105.01).sin(), 30.0, 0.0, true),
        // 3 m slant range: z = 3 sin(phi); ground is 0.9 m below the sensor
        (0.0, 3.0, 30.0, (-0.9f64 / 3.0).asin() + 1e-6, true),
        (0.0, 3.0, 30.0, (-0.9f64 / 3.0).asin() - 1e-6, false),
    ];
    for (i, &(u, v, snr, phi, kept)) in cases.iter().enumerate() {
        // the one-pixel grid centers exactly on (u, v) only up to rounding
        let map = boundary_map(u, v, snr, phi);
        let got = !filter_points(&map, &d).unwrap().is_empty();
        if got != kept {
            return Err(format!("boundary case {i} expected kept={kept}"));
        }
    }
    Ok(cases.len())
}

fn criterion_7() -> Verdict {
    let mut runner = TestRunner::new_with_rng(
        PropConfig {
            cases: 1000,
            failure_persistence: None,
            ..PropConfig::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let strategy = (random_map(), random_filter(), 0.01..0.5f64);
    let emitted = std::cell::Cell::new(0usize);
    let result = runner.run(&strategy, |(map, cfg, step)| {
        let cloud = filter_points(&map, &cfg).unwrap();
        emitted.set(emitted.get() + cloud.len());
        for p in &cloud.points {
            prop_assert!(satisfies_all(&map, &cfg, p), "point {:?} violates {:?}", p, cfg);
        }
        let base = pixels_of(&map, &cfg);
        for stricter in tightened(&cfg, step) {
            prop_assert!(pixels_of(&map, &stricter).is_subset(&base), "tightening {:?} added points", stricter);
        }
        Ok(())
    });
    let boundaries = default_boundaries();
    match (result, boundaries) {
        (Ok(()), Ok(n)) => Ok(format!("1000 random maps, {} points checked, {n} default boundary cases", emitted.get())),
        (Err(e), _) => Err(e.to_string()),
        (_, Err(e)) => Err(e),
    }
}

// 8 -------------------------------------------------------------------------

fn criterion_8() -> Verdict {
    let inputs = tempfile::tempdir().unwrap();
    let scene_path = inputs.path().join("scene.csv");
    let traj_path = inputs.path().join("rail.csv");
    let config_path = inputs.path().join("small.conf");
    write_scene_csv(&scene(&[([0.0, 3.0, 0.05], 1.0), ([0.0, 4.5, 0.63], 1.0)]), &scene_path).unwrap();
    write_trajectory_csv(&rail(1.0, 2.5), &traj_path).unwrap();
    let cfg = Config {
        grid: ImageGrid::new([-0.6, 2.6], [1.2, 2.4], 0.04),
        noise_snr_db: 20.0,
        ..Config::default()
    };
    std::fs::write(&config_path, cfg.to_text()).unwrap();

    let run = |dir: &Path| {
        let status = Command::new(env!("CARGO_BIN_EXE_insar"))
            .args(["--seed", "99", "--config"])
            .arg(&config_path)
            .arg("--out-dir")
            .arg(dir)
            .args(["pipeline", "--scene"])
            .arg(&scene_path)
            .arg("--trajectory")
            .arg(&traj_path)
            .output()
            .unwrap();
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
        std::fs::read(dir.join(CLOUD_FILE)).unwrap()
    };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (pcd_a, pcd_b) = (run(a.path()), run(b.path()));
    let identical = pcd_a == pcd_b && !pcd_a.is_empty();
    let mut all_identical = true;
    for entry in std::fs::read_dir(a.path()).unwrap() {
        let name = entry.unwrap().file_name();
        let x = std::fs::read(a.path().join(&name)).unwrap();
        let y = std::fs::read(b.path().join(&name)).unwrap();
        all_identical &= fnv1a(&x) == fnv1a(&y) && x == y;
    }
    let n_points = read_pcd(&a.path().join(CLOUD_FILE)).unwrap().len();

    // write/parse round trip over a spread of magnitudes
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let coord = rand_distr::Uniform::new(-1.0f64, 1.0).unwrap();
    let points: Vec<CloudPoint> = (0..2000)
        .map(|i| {
            let scale = 10f64.powi(i % 9 - 4);
            CloudPoint {
                position: Vec3::new(coord.sample(&mut rng), coord.sample(&mut rng), coord.sample(&mut rng)) * scale,
                intensity: coord.sample(&mut rng).abs() * scale,
                snr_db: 20.0,
                circular_variance: 0.0,
                pixel: (0, 0),
            }
        })
        .collect();
    let cloud = ElevationPointCloud {
        points,
        provenance: Provenance {
            grid: ImageGrid::default(),
            frame: SarFrame {
                origin: Vec3::zeros(),
                orientation: nalgebra::UnitQuaternion::identity(),
            },
            wavelength: 3.87e-3,
            baseline_length: 3.87e-3 / 4.0,
            baseline_count: 4,
            filter: FilterConfig::default(),
        },
        stats: FilterStats::default(),
    };
    let path = a.path().join("round_trip.pcd");
    write_pcd(&cloud, &path).unwrap();
    let back = read_pcd(&path).unwrap();
    let mut worst: f64 = 0.0;
    for (p, q) in cloud.points.iter().zip(&back) {
        for (x, y) in [(p.position.x, q.x), (p.position.y, q.y), (p.position.z, q.z), (p.intensity, q.intensity)] {
            worst = worst.max((x - y).abs() / x.abs().max(f64::MIN_POSITIVE));
        }
    }
    check(
        identical && all_identical && back.len() == cloud.points.len() && worst <= PCD_REL_TOL,
        format!("two runs byte-identical ({n_points} points), PCD round trip max rel err {worst:.1e}"),
    )
}

fn main() {
    let criteria: [(&str, Criterion); 8] = [
        ("reflector elevation accuracy", criterion_1),
        ("derived chirp parameters", criterion_2),
        ("azimuth point response", criterion_3),
        ("sqrt(N) baseline gain", criterion_4),
        ("equation round trips", criterion_5),
        ("backprojection vs correlation oracle", criterion_6),
        ("filter chain properties", criterion_7),
        ("determinism and PCD round trip", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match verdict {
            Ok(d) => println!("criterion {} PASS  {name}: {d} [{secs:.1} s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {d} [{secs:.1} s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
