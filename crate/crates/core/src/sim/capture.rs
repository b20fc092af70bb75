//! Dechirped FMCW beat-signal synthesis with TDM scheduling.

use std::f64::consts::PI;

use num_complex::{Complex32, Complex64};
use rayon::prelude::*;

use super::scene::Scene;
use crate::error::{InsarError, Result};
use crate::geometry::{ChirpConfig, Pose, Trajectory, Vec3, VirtualArray, SPEED_OF_LIGHT};

/// One received chirp of one TX/RX pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseRecord {
    pub tx_index: usize,
    pub rx_index: usize,
    /// Transmit time of this chirp.
    pub time: f64,
    /// Platform pose (shared by every chirp of a TDM cycle).
    pub pose: Pose,
    pub samples: Vec<Complex32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawCapture {
    pub chirp: ChirpConfig,
    pub array: VirtualArray,
    pub pulses: Vec<PulseRecord>,
}

impl RawCapture {
    pub fn validate(&self) -> Result<()> {
        if self.pulses.is_empty() {
            return Err(InsarError::EmptyCapture);
        }
        let n = self.chirp.samples_per_chirp;
        for (i, p) in self.pulses.iter().enumerate() {
            if p.samples.len() != n {
                return Err(InsarError::MismatchedSamples {
                    pulse: i,
                    found: p.samples.len(),
                    expected: n,
                });
            }
        }
        Ok(())
    }

    /// Indices of the pulses recorded by one virtual element.
    pub fn pulses_for_vx(&self, vx: usize) -> Vec<usize> {
        let Some(el) = self.array.vx_elements.get(vx) else {
            return Vec::new();
        };
        self.pulses
            .iter()
            .enumerate()
            .filter(|(_, p)| p.tx_index == el.tx_index && p.rx_index == el.rx_index)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn duration(&self) -> f64 {
        match (self.pulses.first(), self.pulses.last()) {
            (Some(a), Some(b)) => b.time - a.time,
            _ => 0.0,
        }
    }

    /// Distinct platform poses (one per TDM cycle), in time order.
    pub fn cycle_poses(&self) -> Vec<Pose> {
        let mut poses: Vec<Pose> = Vec::new();
        for p in &self.pulses {
            if poses.last().is_none_or(|last| p.pose.time > last.time) {
                poses.push(p.pose);
            }
        }
        poses
    }
}

/// Time interval over which TDM cycles are emitted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApertureWindow {
    pub start: f64,
    pub end: f64,
}

impl ApertureWindow {
    pub fn new(start: f64, end: f64) -> Self {
        ApertureWindow { start, end }
    }

    pub fn whole(traj: &Trajectory) -> Self {
        ApertureWindow::new(traj.start_time(), traj.end_time())
    }

    /// Number of TDM cycles whose first chirp falls inside the window.
    pub fn cycle_count(&self, cfg: &ChirpConfig) -> usize {
        let span = (self.end - self.start).max(0.0);
        (span / cfg.effective_pri() + 1e-9).floor() as usize + 1
    }
}

/// Per-element amplitude pattern applied on both transmit and receive.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ElementPattern {
    #[default]
    Isotropic,
    /// `max(cos(off-boresight angle), 0)^exponent`, boresight along array `+y`.
    CosinePower { exponent: f64 },
}

impl ElementPattern {
    fn gain(&self, boresight: &Vec3, direction: &Vec3) -> f64 {
        match *self {
            ElementPattern::Isotropic => 1.0,
            ElementPattern::CosinePower { exponent } => {
                let norm = direction.norm();
                if norm == 0.0 {
                    return 1.0;
                }
                (boresight.dot(direction) / norm).max(0.0).powf(exponent)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TdmSlot {
    pub time: f64,
    pub tx_index: usize,
    pub cycle: usize,
}

/// Chirp transmit times and TX indices: chirp `k` fires TX `k mod num_tx` at
/// `start + k * pri`.
pub fn tdm_schedule(cfg: &ChirpConfig, start: f64, num_chirps: usize) -> Vec<TdmSlot> {
    (0..num_chirps)
        .map(|k| TdmSlot {
            time: start + k as f64 * cfg.pri,
            tx_index: k % cfg.num_tx,
            cycle: k / cfg.num_tx,
        })
        .collect()
}

/// Beat signal of one chirp for transmit and receive antennas at the given
/// world positions. Each target at two-way delay `tau` contributes
/// `a * exp(j 2 pi (slope * tau * (n - (N-1)/2) / fs + f_c * tau))`.
pub fn synthesize_chirp(
    scene: &Scene,
    tx_world: &Vec3,
    rx_world: &Vec3,
    cfg: &ChirpConfig,
) -> Vec<Complex64> {
    synthesize_chirp_with_gain(scene, tx_world, rx_world, cfg, |_| 1.0)
}

fn synthesize_chirp_with_gain(
    scene: &Scene,
    tx_world: &Vec3,
    rx_world: &Vec3,
    cfg: &ChirpConfig,
    gain: impl Fn(&Vec3) -> f64,
) -> Vec<Complex64> {
    let n = cfg.samples_per_chirp;
    let mid = (n as f64 - 1.0) / 2.0;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for target in &scene.targets {
        let amplitude = target.amplitude * gain(&target.position);
        if amplitude == 0.0 {
            continue;
        }
        let tau = ((target.position - tx_world).norm() + (target.position - rx_world).norm())
            / SPEED_OF_LIGHT;
        let carrier = 2.0 * PI * (cfg.center_frequency * tau).fract();
        let step = 2.0 * PI * cfg.ramp_slope * tau / cfg.sample_rate;
        for (i, s) in out.iter_mut().enumerate() {
            *s += Complex64::from_polar(amplitude, carrier + step * (i as f64 - mid));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SimulationOptions {
    pub pattern: ElementPattern,
}

pub fn synthesize_capture(
    scene: &Scene,
    traj: &Trajectory,
    cfg: &ChirpConfig,
    array: &VirtualArray,
    window: ApertureWindow,
) -> Result<RawCapture> {
    synthesize_capture_with(scene, traj, cfg, array, window, &SimulationOptions::default())
}

/// Emits `cycle_count` full TDM cycles starting at `window.start`. The pose is
/// sampled once per cycle at its first chirp and held for the whole cycle.
pub fn synthesize_capture_with(
    scene: &Scene,
    traj: &Trajectory,
    cfg: &ChirpConfig,
    array: &VirtualArray,
    window: ApertureWindow,
    options: &SimulationOptions,
) -> Result<RawCapture> {
    cfg.validate()?;
    scene.validate()?;
    if array.num_tx() != cfg.num_tx {
        return Err(InsarError::InvalidConfig(format!(
            "chirp config has {} TX but the array has {}",
            cfg.num_tx,
            array.num_tx()
        )));
    }
    if array.num_rx() == 0 {
        return Err(InsarError::InvalidConfig("array has no RX".into()));
    }
    if !(window.end >= window.start) {
        return Err(InsarError::InvalidConfig(
            "aperture window end precedes start".into(),
        ));
    }
    if window.start < traj.start_time() || window.end > traj.end_time() {
        return Err(InsarError::TrajectoryTooShort {
            have_start: traj.start_time(),
            have_end: traj.end_time(),
            need_start: window.start,
            need_end: window.end,
        });
    }

    let cycles = window.cycle_count(cfg);
    let poses = (0..cycles)
        .map(|c| traj.pose_at_time(window.start + c as f64 * cfg.effective_pri()))
        .collect::<Result<Vec<_>>>()?;

    let pulses: Vec<PulseRecord> = poses
        .par_iter()
        .enumerate()
        .flat_map_iter(|(c, pose)| {
            let boresight = pose.orientation * Vec3::y();
            let cycle_start = window.start + c as f64 * cfg.effective_pri();
            (0..cfg.num_tx).flat_map(move |tx| {
                let tx_world = pose.transform(&array.tx_positions[tx]);
                (0..array.num_rx()).map(move |rx| {
                    let rx_world = pose.transform(&array.rx_positions[rx]);
                    let gain = |p: &Vec3| {
                        options.pattern.gain(&boresight, &(p - tx_world))
                            * options.pattern.gain(&boresight, &(p - rx_world))
                    };
                    let samples = synthesize_chirp_with_gain(scene, &tx_world, &rx_world, cfg, gain)
                        .into_iter()
                        .map(|s| Complex32::new(s.re as f32, s.im as f32))
                        .collect();
                    PulseRecord {
                        tx_index: tx,
                        rx_index: rx,
                        time: cycle_start + tx as f64 * cfg.pri,
                        pose: *pose,
                        samples,
                    }
                })
            })
        })
        .collect();

    Ok(RawCapture {
        chirp: *cfg,
        array: array.clone(),
        pulses,
    })
}
