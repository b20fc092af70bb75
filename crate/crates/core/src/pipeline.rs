//! File-to-file processing stages and their summaries.
//!
//! Every stage reads its inputs from disk and writes its artifact to disk, so
//! the full pipeline and the four stages run by hand produce the same files.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use crate::codec::sniff_magic;
use crate::config::Config;
use crate::error::{InsarError, Result};
use crate::geometry::read_trajectory_csv;
use crate::imaging::{
    image_stack, read_image_stack, write_image_stack, write_log_magnitude_pgm, IMAGE_MAGIC,
};
use crate::interferometry::{elevation_map, read_elevation_map, write_elevation_map, ELEVATION_MAGIC};
use crate::pointcloud::{
    filter_points, read_pcd, write_cloud_csv, write_pcd, FilterStats, Rejection,
};
use crate::sim::{
    add_noise, read_capture, read_scene_csv, synthesize_capture_with, write_capture,
    ApertureWindow, CAPTURE_MAGIC,
};

pub const CAPTURE_FILE: &str = "capture.insarraw";
pub const STACK_FILE: &str = "stack.insarimg";
pub const MAP_FILE: &str = "elevation.insarelv";
pub const CLOUD_FILE: &str = "cloud.pcd";
pub const CLOUD_CSV_FILE: &str = "cloud.csv";

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateSummary {
    pub pulses: usize,
    pub vx_streams: usize,
    pub duration: f64,
    /// Trajectory speed above the TDM limit, if any.
    pub speed_warning: Option<f64>,
}

impl fmt::Display for SimulateSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pulses: {}  vx streams: {}  duration: {:.6} s",
            self.pulses, self.vx_streams, self.duration
        )?;
        if let Some(v) = self.speed_warning {
            write!(
                f,
                "\nwarning: trajectory speed {v:.2} m/s exceeds the {} m/s TDM limit",
                crate::geometry::MAX_TDM_SPEED_MPS
            )?;
        }
        Ok(())
    }
}

/// Synthesizes a capture for the scene over the trajectory, adds noise at the
/// configured SNR and writes it.
pub fn simulate(cfg: &Config, scene: &Path, trajectory: &Path, out: &Path) -> Result<SimulateSummary> {
    cfg.validate()?;
    let scene = read_scene_csv(scene)?;
    let traj = read_trajectory_csv(trajectory)?;
    let window = ApertureWindow::new(
        cfg.capture_start.unwrap_or(traj.start_time()),
        cfg.capture_end.unwrap_or(traj.end_time()),
    );
    let array = cfg.array();
    let clean = synthesize_capture_with(&scene, &traj, &cfg.chirp, &array, window, &cfg.simulation)?;
    let capture = add_noise(&clean, cfg.noise_snr_db, cfg.seed)?;
    write_capture(&capture, out)?;
    Ok(SimulateSummary {
        pulses: capture.pulses.len(),
        vx_streams: array.num_vx(),
        duration: capture.duration(),
        speed_warning: traj.speed_warning(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImageSummary {
    pub images: usize,
    pub rows: usize,
    pub cols: usize,
    pub pixel_size: f64,
    pub peak_magnitude: f64,
    pub peak_vx: usize,
    pub peak_uv: (f64, f64),
}

impl fmt::Display for ImageSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "images: {}  grid: {} x {} at {} m\npeak |I|: {:.6e} (vx {}, u = {:.3} m, v = {:.3} m)",
            self.images,
            self.rows,
            self.cols,
            self.pixel_size,
            self.peak_magnitude,
            self.peak_vx,
            self.peak_uv.0,
            self.peak_uv.1
        )
    }
}

/// Forms the per-VX image stack; optionally dumps one PGM per VX into
/// `pgm_dir`.
pub fn image(cfg: &Config, capture: &Path, out: &Path, pgm_dir: Option<&Path>) -> Result<ImageSummary> {
    cfg.validate()?;
    let capture = read_capture(capture)?;
    let stack = image_stack(&capture, &cfg.grid, &cfg.imaging)?;
    write_image_stack(&stack, out)?;
    if let Some(dir) = pgm_dir {
        std::fs::create_dir_all(dir)?;
        for (k, img) in stack.images.iter().enumerate() {
            write_log_magnitude_pgm(img, 60.0, &dir.join(format!("vx{k:02}.pgm")))?;
        }
    }
    let (peak, vx, r, c) = stack.peak();
    let (rows, cols) = stack.grid.shape();
    Ok(ImageSummary {
        images: stack.images.len(),
        rows,
        cols,
        pixel_size: stack.grid.pixel_size,
        peak_magnitude: peak,
        peak_vx: vx,
        peak_uv: stack.grid.pixel_center(r, c),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElevateSummary {
    pub pixels: usize,
    pub with_elevation: usize,
    pub baselines: usize,
    pub baseline_length: f64,
}

impl fmt::Display for ElevateSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "baselines: {} x {:.4e} m  pixels with elevation: {} / {}",
            self.baselines, self.baseline_length, self.with_elevation, self.pixels
        )
    }
}

pub fn elevate(stack: &Path, out: &Path) -> Result<ElevateSummary> {
    let stack = read_image_stack(stack)?;
    let map = elevation_map(&stack)?;
    write_elevation_map(&map, out)?;
    Ok(ElevateSummary {
        pixels: map.grid.len(),
        with_elevation: map.valid_count(),
        baselines: map.baseline_count,
        baseline_length: map.baseline_length,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointcloudSummary {
    pub stats: FilterStats,
    /// Min, max and mean `s_z` of the kept points.
    pub heights: Option<(f64, f64, f64)>,
}

impl fmt::Display for PointcloudSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.stats;
        let pct = |n: usize| if s.total == 0 { 0.0 } else { 100.0 * n as f64 / s.total as f64 };
        writeln!(f, "pixels: {}  kept: {} ({:.2}%)", s.total, s.kept, pct(s.kept))?;
        for r in Rejection::ALL {
            let n = s.rejected_by(r);
            writeln!(f, "  rejected by {:<16} {:>9} ({:.2}%)", format!("{}:", r.name()), n, pct(n))?;
        }
        match self.heights {
            Some((lo, hi, mean)) => write!(
                f,
                "elevation z: min {lo:.4} m  max {hi:.4} m  mean {mean:.4} m"
            ),
            None => write!(f, "elevation z: no points"),
        }
    }
}

/// Filters the elevation map into a point cloud, writing PCD and, if asked,
/// CSV.
pub fn pointcloud(cfg: &Config, map: &Path, out_pcd: &Path, out_csv: Option<&Path>) -> Result<PointcloudSummary> {
    cfg.validate()?;
    let map = read_elevation_map(map)?;
    let cloud = filter_points(&map, &cfg.filter)?;
    write_pcd(&cloud, out_pcd)?;
    if let Some(csv) = out_csv {
        write_cloud_csv(&cloud, csv)?;
    }
    Ok(PointcloudSummary {
        stats: cloud.stats,
        heights: cloud.height_summary(),
    })
}

/// One executed stage.
#[derive(Debug, Clone)]
pub struct StageRecord {
    pub name: &'static str,
    pub output: PathBuf,
    pub elapsed: Duration,
    pub summary: String,
}

/// A full simulate-to-point-cloud run.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub config: Config,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub stages: Vec<StageRecord>,
    pub pointcloud: PointcloudSummary,
}

impl PipelineRun {
    pub fn artifact(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }
}

impl fmt::Display for PipelineRun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "output directory: {}  seed: {}", self.out_dir.display(), self.seed)?;
        for s in &self.stages {
            writeln!(
                f,
                "[{}] {:.2} s -> {}",
                s.name,
                s.elapsed.as_secs_f64(),
                s.output.display()
            )?;
            for line in s.summary.lines() {
                writeln!(f, "    {line}")?;
            }
        }
        Ok(())
    }
}

/// Runs simulate, image, elevate and pointcloud in order, materializing every
/// intermediate artifact in `out_dir`.
pub fn run_pipeline(cfg: &Config, scene: &Path, trajectory: &Path, out_dir: &Path) -> Result<PipelineRun> {
    cfg.validate()?;
    std::fs::create_dir_all(out_dir)?;
    let mut stages = Vec::new();
    let mut record = |name, output: PathBuf, start: Instant, summary: String| {
        stages.push(StageRecord {
            name,
            output,
            elapsed: start.elapsed(),
            summary,
        })
    };

    let (capture, stack, map) = (out_dir.join(CAPTURE_FILE), out_dir.join(STACK_FILE), out_dir.join(MAP_FILE));
    let (pcd, csv) = (out_dir.join(CLOUD_FILE), out_dir.join(CLOUD_CSV_FILE));

    let t = Instant::now();
    let s = simulate(cfg, scene, trajectory, &capture)?;
    record("simulate", capture.clone(), t, s.to_string());
    let t = Instant::now();
    let s = image(cfg, &capture, &stack, None)?;
    record("image", stack.clone(), t, s.to_string());
    let t = Instant::now();
    let s = elevate(&stack, &map)?;
    record("elevate", map.clone(), t, s.to_string());
    let t = Instant::now();
    let cloud = pointcloud(cfg, &map, &pcd, Some(&csv))?;
    record("pointcloud", pcd, t, cloud.to_string());

    Ok(PipelineRun {
        config: cfg.clone(),
        out_dir: out_dir.to_path_buf(),
        seed: cfg.seed,
        stages,
        pointcloud: cloud,
    })
}

/// Human-readable description of any artifact, chosen by its magic bytes.
pub fn describe(path: &Path) -> Result<String> {
    let head = std::fs::read(path)?.into_iter().take(16).collect::<Vec<u8>>();
    let text_head = String::from_utf8_lossy(&head);
    if text_head.starts_with("# .PCD") || text_head.starts_with("VERSION") {
        let points = read_pcd(path)?;
        let mut s = format!("PCD point cloud: {} points", points.len());
        if !points.is_empty() {
            let zs = points.iter().map(|p| p.z);
            let lo = zs.clone().fold(f64::INFINITY, f64::min);
            let hi = zs.clone().fold(f64::NEG_INFINITY, f64::max);
            let mean = zs.sum::<f64>() / points.len() as f64;
            s += &format!("\nelevation z: min {lo:.4} m  max {hi:.4} m  mean {mean:.4} m");
        }
        return Ok(s);
    }
    let magic = sniff_magic(path).map_err(|_| InsarError::format("artifact", "file too short"))?;
    if &magic == CAPTURE_MAGIC {
        let c = read_capture(path)?;
        let d = crate::geometry::derive_chirp_params(&c.chirp)?;
        Ok(format!(
            "INSARRAW capture: {} pulses, {} TX x {} RX = {} VX, {} vertical baselines\n\
             duration {:.6} s  wavelength {:.4} mm  range resolution {:.4} m  max range {:.2} m",
            c.pulses.len(),
            c.array.num_tx(),
            c.array.num_rx(),
            c.array.num_vx(),
            c.array.vertical_baselines.len(),
            c.duration(),
            d.wavelength * 1e3,
            d.range_resolution,
            d.max_range
        ))
    } else if &magic == IMAGE_MAGIC {
        let s = read_image_stack(path)?;
        let (rows, cols) = s.grid.shape();
        let (peak, vx, r, c) = s.peak();
        let (u, v) = s.grid.pixel_center(r, c);
        Ok(format!(
            "INSARIMG image stack: {} VX images of {rows} x {cols} at {} m, aperture {} m\n\
             phase center ({:.4}, {:.4}, {:.4})  peak |I| {peak:.6e} at vx {vx}, u = {u:.3} m, v = {v:.3} m",
            s.images.len(),
            s.grid.pixel_size,
            s.aperture_length,
            s.frame.origin.x,
            s.frame.origin.y,
            s.frame.origin.z
        ))
    } else if &magic == ELEVATION_MAGIC {
        let m = read_elevation_map(path)?;
        let elev: Vec<f64> = m.elevation.iter().flatten().map(|e| e.to_degrees()).collect();
        let mut s = format!(
            "INSARELV elevation map: {} x {} pixels, {} with elevation, {} baselines of {:.4e} m",
            m.grid.shape().0,
            m.grid.shape().1,
            elev.len(),
            m.baseline_count,
            m.baseline_length
        );
        if !elev.is_empty() {
            let lo = elev.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = elev.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mean = elev.iter().sum::<f64>() / elev.len() as f64;
            s += &format!("\nelevation angle: min {lo:.2} deg  max {hi:.2} deg  mean {mean:.2} deg");
        }
        Ok(s)
    } else {
        Err(InsarError::format(
            "artifact",
            format!("unrecognized magic {:?}", String::from_utf8_lossy(&magic)),
        ))
    }
}
