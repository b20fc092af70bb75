// Recovers a target's elevation angle from the phase of the vertical
// baselines, and shows the single-baseline relations.

use std::f64::consts::PI;

use nalgebra::UnitQuaternion;

use insar::geometry::{ChirpConfig, Trajectory, Vec3, VirtualArray};
use insar::imaging::{image_stack, ImageGrid, ImagingOptions};
use insar::interferometry::{elevation_from_phase, elevation_map, phase_delay, phase_from_elevation};
use insar::sim::{synthesize_capture, ApertureWindow, PointTarget, Scene};

pub fn run_example() -> insar::Result<()> {
    let cfg = ChirpConfig::automotive();
    let lambda = cfg.wavelength();
    let dv = lambda / 4.0;
    println!("D_v = lambda/4: phase spans (-pi, pi] for elevations in (-90, 90] deg");
    for deg in [-60.0f64, -15.0, 0.0, 10.0, 45.0] {
        let dpsi = phase_from_elevation(deg.to_radians(), dv, lambda)?;
        let back = elevation_from_phase(dpsi, dv, lambda)?.to_degrees();
        println!("  {deg:6.1} deg -> {dpsi:+.4} rad -> {back:6.1} deg");
    }

    let array = VirtualArray::two_layer_default(lambda);
    let traj = Trajectory::linear(
        Vec3::new(-0.5, 0.0, 0.9),
        Vec3::new(8.0, 0.0, 0.0),
        UnitQuaternion::identity(),
        0.0,
        0.125,
        0.125,
    )?;
    let phi = 12f64.to_radians();
    let slant = 3.5;
    let target = Vec3::new(0.0, slant * phi.cos(), 0.9 + slant * phi.sin());
    let scene = Scene::new(vec![PointTarget::new(target, 1.0)]);
    let capture = synthesize_capture(&scene, &traj, &cfg, &array, ApertureWindow::whole(&traj))?;
    let grid = ImageGrid::new([-0.1, 3.3], [0.2, 0.4], 0.02);
    let stack = image_stack(&capture, &grid, &ImagingOptions::default())?;

    let local = stack.frame.to_local(&target);
    let (r, c) = grid.pixel_at(local.x, local.y.hypot(local.z)).expect("target inside grid");
    println!("\ntarget at {:.1} deg elevation, pixel {:?}", phi.to_degrees(), (r, c));
    for b in &array.vertical_baselines {
        let dpsi = phase_delay(stack.images[b.lower][[r, c]], stack.images[b.upper][[r, c]])?;
        println!(
            "  vx{:02}/vx{:02}: {dpsi:+.4} rad ({:+.2} deg of fringe)",
            b.lower,
            b.upper,
            dpsi * 180.0 / PI
        );
    }
    let map = elevation_map(&stack)?;
    let p = map.pixels[[r, c]];
    println!(
        "combined: {:+.4} rad, circular variance {:.2e}, elevation {:.3} deg (closed form {:+.4} rad)",
        p.mean_phase_delay,
        p.circular_variance,
        map.elevation[[r, c]].unwrap_or(f64::NAN).to_degrees(),
        phase_from_elevation(phi, dv, lambda)?
    );
    Ok(())
}

fn main() -> insar::Result<()> {
    run_example()
}
