//! Flat `key = value` configuration files.
//!
//! One assignment per line, SI units, `#` starts a comment. Angles are given
//! in degrees. Position lists use `[(x, y, z), ...]`.
//!
//! ```text
//! center_frequency_hz = 77.4e9
//! tx_positions_m = [(0, 0, 0), (0.00774, 0, 0), (0, 0, 0.001935)]
//! grid_origin_m = (-5, 0)
//! window = hann
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{InsarError, Result};
use crate::geometry::{build_virtual_array, ChirpConfig, Vec3, VirtualArray};
use crate::imaging::{ImageGrid, ImagingOptions, Interpolation, Window};
use crate::pointcloud::{FilterConfig, DEFAULT_MOUNT_HEIGHT_M};
use crate::sim::{ElementPattern, SimulationOptions};

/// Every setting the command-line stages read.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub chirp: ChirpConfig,
    /// `None` selects the default two-layer array for the configured
    /// wavelength.
    pub tx_positions: Option<Vec<Vec3>>,
    pub rx_positions: Option<Vec<Vec3>>,
    pub simulation: SimulationOptions,
    /// Capture window; `None` ends use the trajectory's own span.
    pub capture_start: Option<f64>,
    pub capture_end: Option<f64>,
    /// Per-sample SNR in dB; `+inf` leaves the capture noiseless.
    pub noise_snr_db: f64,
    pub seed: u64,
    pub grid: ImageGrid,
    pub imaging: ImagingOptions,
    pub sensor_mount_height: f64,
    pub filter: FilterConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            chirp: ChirpConfig::automotive(),
            tx_positions: None,
            rx_positions: None,
            simulation: SimulationOptions::default(),
            capture_start: None,
            capture_end: None,
            noise_snr_db: f64::INFINITY,
            seed: 0,
            grid: ImageGrid::default(),
            imaging: ImagingOptions::default(),
            sensor_mount_height: DEFAULT_MOUNT_HEIGHT_M,
            filter: FilterConfig::default(),
        }
    }
}

struct Line<'a> {
    path: &'a Path,
    number: usize,
}

impl Line<'_> {
    fn error(&self, message: impl Into<String>) -> InsarError {
        InsarError::Parse {
            path: self.path.to_path_buf(),
            line: self.number,
            message: message.into(),
        }
    }

    fn f64(&self, v: &str) -> Result<f64> {
        v.trim()
            .parse::<f64>()
            .map_err(|_| self.error(format!("expected a number, found {:?}", v.trim())))
    }

    fn usize(&self, v: &str) -> Result<usize> {
        v.trim()
            .parse::<usize>()
            .map_err(|_| self.error(format!("expected a non-negative integer, found {:?}", v.trim())))
    }

    fn tuple(&self, v: &str) -> Result<Vec<f64>> {
        let inner = v
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| self.error(format!("expected (a, b, ...), found {:?}", v.trim())))?;
        inner.split(',').map(|x| self.f64(x)).collect()
    }

    fn pair(&self, v: &str) -> Result<[f64; 2]> {
        match self.tuple(v)?[..] {
            [a, b] => Ok([a, b]),
            _ => Err(self.error("expected a pair (a, b)")),
        }
    }

    fn positions(&self, v: &str) -> Result<Vec<Vec3>> {
        let inner = v
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| self.error("expected a list [(x, y, z), ...]"))?;
        let mut out = Vec::new();
        let mut rest = inner.trim();
        while !rest.is_empty() {
            let close = rest
                .find(')')
                .ok_or_else(|| self.error("unterminated tuple in position list"))?;
            let t = self.tuple(&rest[..=close])?;
            if t.len() != 3 {
                return Err(self.error(format!("position needs 3 coordinates, found {}", t.len())));
            }
            out.push(Vec3::new(t[0], t[1], t[2]));
            rest = rest[close + 1..].trim_start();
            rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
        }
        if out.is_empty() {
            return Err(self.error("position list is empty"));
        }
        Ok(out)
    }

    fn pattern(&self, v: &str) -> Result<ElementPattern> {
        let v = v.trim();
        if v.eq_ignore_ascii_case("isotropic") {
            return Ok(ElementPattern::Isotropic);
        }
        let exponent = v
            .strip_prefix("cosine:")
            .ok_or_else(|| self.error(format!("expected isotropic or cosine:<exponent>, found {v:?}")))?;
        Ok(ElementPattern::CosinePower {
            exponent: self.f64(exponent)?,
        })
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)?;
        Config::parse(&text, path)
    }

    /// Parses configuration text; `path` is only used in error messages.
    pub fn parse(text: &str, path: &Path) -> Result<Config> {
        let mut cfg = Config::default();
        let mut min_z = None;
        let mut seen = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = Line { path, number: i + 1 };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| line.error(format!("expected key = value, found {content:?}")))?;
            let key = key.trim();
            if !seen.insert(key.to_string()) {
                return Err(line.error(format!("duplicate key {key:?}")));
            }
            let c = &mut cfg;
            match key {
                "center_frequency_hz" => c.chirp.center_frequency = line.f64(value)?,
                "ramp_slope_hz_per_s" => c.chirp.ramp_slope = line.f64(value)?,
                "samples_per_chirp" => c.chirp.samples_per_chirp = line.usize(value)?,
                "sample_rate_hz" => c.chirp.sample_rate = line.f64(value)?,
                "pri_s" => c.chirp.pri = line.f64(value)?,
                "chirps_per_tx_per_frame" => c.chirp.chirps_per_tx_per_frame = line.usize(value)?,
                "num_tx" => c.chirp.num_tx = line.usize(value)?,
                "tx_positions_m" => c.tx_positions = Some(line.positions(value)?),
                "rx_positions_m" => c.rx_positions = Some(line.positions(value)?),
                "element_pattern" => c.simulation.pattern = line.pattern(value)?,
                "capture_start_s" => c.capture_start = Some(line.f64(value)?),
                "capture_end_s" => c.capture_end = Some(line.f64(value)?),
                "noise_snr_db" => c.noise_snr_db = line.f64(value)?,
                "seed" => {
                    c.seed = value
                        .trim()
                        .parse()
                        .map_err(|_| line.error(format!("expected a u64 seed, found {:?}", value.trim())))?
                }
                "grid_origin_m" => c.grid.origin = line.pair(value)?,
                "grid_extent_m" => c.grid.extent = line.pair(value)?,
                "pixel_size_m" => c.grid.pixel_size = line.f64(value)?,
                "image_height_m" => c.grid.height = line.f64(value)?,
                "aperture_length_m" => c.imaging.aperture.length = line.f64(value)?,
                "aperture_center_s" => c.imaging.aperture.center_time = Some(line.f64(value)?),
                "oversample_factor" => c.imaging.range.oversample = line.usize(value)?,
                "max_range_m" => c.imaging.range.max_range = Some(line.f64(value)?),
                "window" => {
                    c.imaging.range.window = value.trim().parse::<Window>().map_err(|e| line.error(e.to_string()))?
                }
                "interpolation" => {
                    c.imaging.interpolation = value
                        .trim()
                        .parse::<Interpolation>()
                        .map_err(|e| line.error(e.to_string()))?
                }
                "sensor_mount_height_m" => c.sensor_mount_height = line.f64(value)?,
                "snr_threshold_db" => c.filter.snr_threshold_db = line.f64(value)?,
                "max_elevation_deg" => c.filter.max_elevation_angle = line.f64(value)?.to_radians(),
                "min_radius_m" => c.filter.min_radius = line.f64(value)?,
                "front_azimuth_halfwidth_deg" => {
                    c.filter.front_azimuth_halfwidth = line.f64(value)?.to_radians()
                }
                "front_cone_angle_deg" => c.filter.front_cone_angle = line.f64(value)?.to_radians(),
                "min_z_m" => min_z = Some(line.f64(value)?),
                "max_circular_variance" => c.filter.max_circular_variance = line.f64(value)?,
                other => return Err(line.error(format!("unknown key {other:?}"))),
            }
        }
        cfg.filter.min_z = min_z.unwrap_or(-cfg.sensor_mount_height);
        cfg.validate()
            .map_err(|e| InsarError::Parse {
                path: PathBuf::from(path),
                line: 0,
                message: e.to_string(),
            })?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.chirp.validate()?;
        self.grid.validate()?;
        self.filter.validate()?;
        if self.tx_positions.is_some() != self.rx_positions.is_some() {
            return Err(InsarError::InvalidConfig(
                "tx_positions_m and rx_positions_m must be given together".into(),
            ));
        }
        if self.array().num_tx() != self.chirp.num_tx {
            return Err(InsarError::InvalidConfig(format!(
                "num_tx = {} but the array has {} TX positions",
                self.chirp.num_tx,
                self.array().num_tx()
            )));
        }
        if !(self.imaging.aperture.length > 0.0) {
            return Err(InsarError::InvalidConfig("aperture_length_m must be positive".into()));
        }
        if self.imaging.range.oversample < 2 {
            return Err(InsarError::InvalidConfig("oversample_factor must be at least 2".into()));
        }
        if self.noise_snr_db.is_nan() {
            return Err(InsarError::InvalidConfig("noise_snr_db is NaN".into()));
        }
        if !(self.sensor_mount_height.is_finite() && self.sensor_mount_height >= 0.0) {
            return Err(InsarError::InvalidConfig(
                "sensor_mount_height_m must be finite and >= 0".into(),
            ));
        }
        Ok(())
    }

    pub fn array(&self) -> VirtualArray {
        match (&self.tx_positions, &self.rx_positions) {
            (Some(tx), Some(rx)) => build_virtual_array(tx.clone(), rx.clone()),
            _ => VirtualArray::two_layer_default(self.chirp.wavelength()),
        }
    }

    /// Serializes every setting; `parse(to_text())` reproduces the config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let c = &self.chirp;
        let pos = |v: &[Vec3]| {
            let items: Vec<String> = v.iter().map(|p| format!("({:?}, {:?}, {:?})", p.x, p.y, p.z)).collect();
            format!("[{}]", items.join(", "))
        };
        let _ = writeln!(s, "center_frequency_hz = {:?}", c.center_frequency);
        let _ = writeln!(s, "ramp_slope_hz_per_s = {:?}", c.ramp_slope);
        let _ = writeln!(s, "samples_per_chirp = {}", c.samples_per_chirp);
        let _ = writeln!(s, "sample_rate_hz = {:?}", c.sample_rate);
        let _ = writeln!(s, "pri_s = {:?}", c.pri);
        let _ = writeln!(s, "chirps_per_tx_per_frame = {}", c.chirps_per_tx_per_frame);
        let _ = writeln!(s, "num_tx = {}", c.num_tx);
        if let (Some(tx), Some(rx)) = (&self.tx_positions, &self.rx_positions) {
            let _ = writeln!(s, "tx_positions_m = {}", pos(tx));
            let _ = writeln!(s, "rx_positions_m = {}", pos(rx));
        }
        match self.simulation.pattern {
            ElementPattern::Isotropic => s.push_str("element_pattern = isotropic\n"),
            ElementPattern::CosinePower { exponent } => {
                let _ = writeln!(s, "element_pattern = cosine:{exponent:?}");
            }
        }
        if let Some(t) = self.capture_start {
            let _ = writeln!(s, "capture_start_s = {t:?}");
        }
        if let Some(t) = self.capture_end {
            let _ = writeln!(s, "capture_end_s = {t:?}");
        }
        let _ = writeln!(s, "noise_snr_db = {:?}", self.noise_snr_db);
        let _ = writeln!(s, "seed = {}", self.seed);
        let g = &self.grid;
        let _ = writeln!(s, "grid_origin_m = ({:?}, {:?})", g.origin[0], g.origin[1]);
        let _ = writeln!(s, "grid_extent_m = ({:?}, {:?})", g.extent[0], g.extent[1]);
        let _ = writeln!(s, "pixel_size_m = {:?}", g.pixel_size);
        let _ = writeln!(s, "image_height_m = {:?}", g.height);
        let im = &self.imaging;
        let _ = writeln!(s, "aperture_length_m = {:?}", im.aperture.length);
        if let Some(t) = im.aperture.center_time {
            let _ = writeln!(s, "aperture_center_s = {t:?}");
        }
        let _ = writeln!(s, "oversample_factor = {}", im.range.oversample);
        if let Some(r) = im.range.max_range {
            let _ = writeln!(s, "max_range_m = {r:?}");
        }
        let _ = writeln!(s, "window = {}", im.range.window.name());
        let _ = writeln!(s, "interpolation = {}", im.interpolation.name());
        let f = &self.filter;
        let _ = writeln!(s, "sensor_mount_height_m = {:?}", self.sensor_mount_height);
        let _ = writeln!(s, "snr_threshold_db = {:?}", f.snr_threshold_db);
        let _ = writeln!(s, "max_elevation_deg = {:?}", f.max_elevation_angle.to_degrees());
        let _ = writeln!(s, "min_radius_m = {:?}", f.min_radius);
        let _ = writeln!(s, "front_azimuth_halfwidth_deg = {:?}", f.front_azimuth_halfwidth.to_degrees());
        let _ = writeln!(s, "front_cone_angle_deg = {:?}", f.front_cone_angle.to_degrees());
        let _ = writeln!(s, "min_z_m = {:?}", f.min_z);
        let _ = writeln!(s, "max_circular_variance = {:?}", f.max_circular_variance);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Config> {
        Config::parse(text, Path::new("test.conf"))
    }

    #[test]
    fn empty_text_gives_defaults() {
        let cfg = parse("# nothing\n\n").unwrap();
        assert_eq!(cfg, Config::default());
        assert_eq!(cfg.filter.min_z, -0.9);
        assert_eq!(cfg.array().num_vx(), 12);
    }

    #[test]
    fn values_and_lists() {
        let cfg = parse(
            "pixel_size_m = 0.02  # finer\n\
             grid_origin_m = (-1, 2.5)\n\
             grid_extent_m = (2, 3)\n\
             num_tx = 2\n\
             tx_positions_m = [(0, 0, 0), (0, 0, 0.002)]\n\
             rx_positions_m = [(0,0,0)]\n\
             window = hann\n\
             interpolation = sinc\n\
             snr_threshold_db = inf\n\
             sensor_mount_height_m = 1.2\n\
             element_pattern = cosine:2\n",
        )
        .unwrap();
        assert_eq!(cfg.grid.pixel_size, 0.02);
        assert_eq!(cfg.grid.origin, [-1.0, 2.5]);
        let array = cfg.array();
        assert_eq!(array.num_vx(), 2);
        assert_eq!(array.vertical_baselines.len(), 1);
        assert!((array.vertical_baselines[0].length - 0.001).abs() < 1e-15);
        assert_eq!(cfg.imaging.range.window, Window::Hann);
        assert_eq!(cfg.imaging.interpolation, Interpolation::Sinc);
        assert_eq!(cfg.filter.snr_threshold_db, f64::INFINITY);
        assert_eq!(cfg.filter.min_z, -1.2);
        assert_eq!(cfg.simulation.pattern, ElementPattern::CosinePower { exponent: 2.0 });
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse("pixel_size_m = 0.04\nbogus = 1\n").unwrap_err();
        match &err {
            InsarError::Parse { line, message, .. } => {
                assert_eq!(*line, 2);
                assert!(message.contains("bogus"));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(err.exit_code(), 2);
        assert!(matches!(parse("\n\npri_s = fast\n"), Err(InsarError::Parse { line: 3, .. })));
        assert!(matches!(parse("seed = 1\nseed = 2\n"), Err(InsarError::Parse { line: 2, .. })));
        assert!(matches!(parse("window\n"), Err(InsarError::Parse { line: 1, .. })));
        assert!(matches!(
            parse("tx_positions_m = [(0, 0)]\n"),
            Err(InsarError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn sub_pixel_grid_is_a_config_error() {
        let err = parse("grid_extent_m = (0.01, 0.01)\n").unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn text_round_trip() {
        let mut cfg = Config::default();
        cfg.grid = ImageGrid::new([-5.0, 0.0], [10.0, 10.0], 0.04);
        cfg.noise_snr_db = 20.0;
        cfg.seed = 42;
        cfg.tx_positions = Some(vec![Vec3::zeros(), Vec3::new(0.1, 0.0, 0.0), Vec3::new(0.0, 0.0, 0.002)]);
        cfg.rx_positions = Some(vec![Vec3::zeros()]);
        cfg.imaging.aperture.center_time = Some(0.2);
        cfg.capture_end = Some(0.4);
        cfg.filter.min_z = -0.5;
        assert_eq!(parse(&cfg.to_text()).unwrap(), cfg);
    }
}
