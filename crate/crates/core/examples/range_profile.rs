// Range-compresses one pulse and locates its targets.

use nalgebra::UnitQuaternion;
use num_complex::Complex32;

use insar::geometry::{build_virtual_array, ChirpConfig, Pose, Vec3};
use insar::imaging::{range_compress, RangeOptions, Window};
use insar::sim::{synthesize_chirp, PointTarget, PulseRecord, RawCapture, Scene};

pub fn run_example() -> insar::Result<()> {
    let mut cfg = ChirpConfig::automotive();
    cfg.num_tx = 1;
    let ranges = [2.5, 7.25, 31.0];
    let scene = Scene::new(ranges.iter().map(|&r| PointTarget::new(Vec3::new(0.0, r, 0.0), 1.0)).collect());
    let samples = synthesize_chirp(&scene, &Vec3::zeros(), &Vec3::zeros(), &cfg)
        .into_iter()
        .map(|s| Complex32::new(s.re as f32, s.im as f32))
        .collect();
    let capture = RawCapture {
        chirp: cfg,
        array: build_virtual_array(vec![Vec3::zeros()], vec![Vec3::zeros()]),
        pulses: vec![PulseRecord {
            tx_index: 0,
            rx_index: 0,
            time: 0.0,
            pose: Pose::new(0.0, Vec3::zeros(), UnitQuaternion::identity()),
            samples,
        }],
    };

    for window in [Window::Rectangular, Window::Hann] {
        let options = RangeOptions { window, ..RangeOptions::default() };
        let set = range_compress(&capture, &options)?;
        let p = &set.profiles[0];
        println!("{} window, bin spacing {:.2} cm", window.name(), set.bin_spacing * 100.0);
        for &r in &ranges {
            let centre = (r / set.bin_spacing).round() as usize;
            let (bin, mag) = (centre.saturating_sub(8)..(centre + 8).min(p.len()))
                .map(|k| (k, p[k].norm()))
                .fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
            println!("  target {r:6.2} m -> peak {:6.3} m  |P| {mag:.1}", set.range_of_bin(bin as f64));
        }
    }
    Ok(())
}

fn main() -> insar::Result<()> {
    run_example()
}
