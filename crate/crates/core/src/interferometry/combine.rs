//! Baseline averaging and quality maps.

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use super::equations::{check_unambiguous, elevation_from_phase, wrap_phase};
use crate::error::{InsarError, Result};
use crate::imaging::{ImageGrid, SarFrame, SarImageStack};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferogramPixel {
    /// Argument of the summed baseline correlations, in `(-pi, pi]`.
    pub mean_phase_delay: f64,
    /// `1 - |mean unit phasor|` over the baselines, in `[0, 1]`.
    pub circular_variance: f64,
    /// Mean `|S|` over all virtual elements.
    pub combined_magnitude: f64,
    pub snr_db: f64,
}

/// Mean phase and circular variance of per-baseline correlations
/// `S_lower conj(S_upper)`. Zero correlations are skipped; if all are zero the
/// phase is undefined and `None` is returned.
pub fn combine_correlations<I>(pairs: I) -> Option<(f64, f64)>
where
    I: IntoIterator<Item = (Complex64, Complex64)>,
{
    let mut sum = Complex64::new(0.0, 0.0);
    let mut unit_sum = Complex64::new(0.0, 0.0);
    let mut n = 0usize;
    for (lower, upper) in pairs {
        let c = lower * upper.conj();
        let m = c.norm();
        if m == 0.0 {
            continue;
        }
        sum += c;
        unit_sum += c / m;
        n += 1;
    }
    if n == 0 || sum.norm_sqr() == 0.0 {
        return None;
    }
    let variance = if n == 1 {
        0.0
    } else {
        (1.0 - unit_sum.norm() / n as f64).clamp(0.0, 1.0)
    };
    Some((wrap_phase(sum.arg()), variance))
}

/// Median of the values; the mean of the middle pair for even counts.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    let mid = v.len() / 2;
    let (_, &mut hi, _) = v.select_nth_unstable_by(mid, f64::total_cmp);
    if v.len() % 2 == 1 {
        return Some(hi);
    }
    let lo = v[..mid].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Some(0.5 * (lo + hi))
}

/// `20 log10(|S| / median |S|)` per pixel.
pub fn snr_map(magnitudes: &Array2<f64>) -> Result<Array2<f64>> {
    let flat: Vec<f64> = magnitudes.iter().cloned().collect();
    let med = median(&flat).ok_or_else(|| InsarError::InvalidConfig("empty magnitude grid".into()))?;
    if !(med > 0.0) {
        return Err(InsarError::ZeroMedian);
    }
    Ok(magnitudes.mapv(|m| 20.0 * (m / med).log10()))
}

/// Common vertical baseline length; every baseline must match.
pub fn common_baseline(stack: &SarImageStack) -> Result<f64> {
    let baselines = &stack.array.vertical_baselines;
    let first = baselines.first().ok_or(InsarError::NoVerticalBaseline)?.length;
    for b in baselines {
        if (b.length - first).abs() > 1e-9 * first.max(1e-12) {
            return Err(InsarError::MixedBaselines(first, b.length));
        }
    }
    Ok(first)
}

/// Per-pixel interferogram over every vertical baseline of the stack. Pixels
/// where every correlation vanishes get phase 0 and variance 1.
pub fn combine_baselines(stack: &SarImageStack) -> Result<Array2<InterferogramPixel>> {
    combine(stack).map(|(pixels, _)| pixels)
}

/// Interferogram plus a mask of pixels with a defined phase.
fn combine(stack: &SarImageStack) -> Result<(Array2<InterferogramPixel>, Array2<bool>)> {
    common_baseline(stack)?;
    let shape = stack.grid.shape();
    let baselines = &stack.array.vertical_baselines;
    let n_vx = stack.images.len() as f64;
    if stack.images.iter().any(|img| img.dim() != shape) {
        return Err(InsarError::InvalidConfig("image shapes disagree with grid".into()));
    }

    let raw: Vec<(Option<(f64, f64)>, f64)> = (0..shape.0 * shape.1)
        .into_par_iter()
        .map(|i| {
            let idx = [i / shape.1, i % shape.1];
            let combined = combine_correlations(
                baselines
                    .iter()
                    .map(|b| (stack.images[b.lower][idx], stack.images[b.upper][idx])),
            );
            let magnitude = stack.images.iter().map(|img| img[idx].norm()).sum::<f64>() / n_vx;
            (combined, magnitude)
        })
        .collect();

    let magnitudes = Array2::from_shape_vec(shape, raw.iter().map(|r| r.1).collect())
        .expect("grid shape");
    let snr = snr_map(&magnitudes)?;
    let defined = Array2::from_shape_vec(shape, raw.iter().map(|r| r.0.is_some()).collect())
        .expect("grid shape");
    let pixels = raw
        .iter()
        .zip(snr.iter())
        .map(|(&(combined, magnitude), &snr_db)| {
            let (mean_phase_delay, circular_variance) = combined.unwrap_or((0.0, 1.0));
            InterferogramPixel {
                mean_phase_delay,
                circular_variance,
                combined_magnitude: magnitude,
                snr_db,
            }
        })
        .collect();
    Ok((Array2::from_shape_vec(shape, pixels).expect("grid shape"), defined))
}

/// Elevation angle and quality maps on the image grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ElevationMap {
    pub grid: ImageGrid,
    pub frame: SarFrame,
    pub wavelength: f64,
    pub baseline_length: f64,
    pub baseline_count: usize,
    /// Elevation angle in radians; `None` where it cannot be recovered.
    pub elevation: Array2<Option<f64>>,
    pub pixels: Array2<InterferogramPixel>,
}

impl ElevationMap {
    pub fn shape(&self) -> (usize, usize) {
        self.grid.shape()
    }

    pub fn valid_count(&self) -> usize {
        self.elevation.iter().filter(|e| e.is_some()).count()
    }
}

/// Full interferometric stage: combine baselines, then convert phase to
/// elevation. Pixels with no usable correlation, or whose phase falls outside
/// the arcsine domain, get no elevation.
pub fn elevation_map(stack: &SarImageStack) -> Result<ElevationMap> {
    let baseline = common_baseline(stack)?;
    let wavelength = stack.chirp.wavelength();
    check_unambiguous(baseline, wavelength)?;
    let (pixels, defined) = combine(stack)?;
    let elevation = ndarray::Zip::from(&pixels)
        .and(&defined)
        .map_collect(|p, &ok| {
            ok.then(|| elevation_from_phase(p.mean_phase_delay, baseline, wavelength).ok())
                .flatten()
        });
    Ok(ElevationMap {
        grid: stack.grid,
        frame: stack.frame,
        wavelength,
        baseline_length: baseline,
        baseline_count: stack.array.vertical_baselines.len(),
        elevation,
        pixels,
    })
}
