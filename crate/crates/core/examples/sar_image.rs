// Backprojects a short rail capture into per-VX images and dumps one as a
// log-magnitude PGM.

use nalgebra::UnitQuaternion;

use insar::geometry::{ChirpConfig, Trajectory, Vec3, VirtualArray};
use insar::imaging::{image_stack, write_log_magnitude_pgm, ImageGrid, ImagingOptions, Interpolation};
use insar::sim::{synthesize_capture, ApertureWindow, PointTarget, Scene};

pub fn run_example() -> insar::Result<()> {
    let cfg = ChirpConfig::automotive();
    let array = VirtualArray::two_layer_default(cfg.wavelength());
    // 0.5 m of rail at 8 m/s
    let traj = Trajectory::linear(
        Vec3::new(-0.25, 0.0, 0.9),
        Vec3::new(8.0, 0.0, 0.0),
        UnitQuaternion::identity(),
        0.0,
        0.0625,
        0.0625,
    )?;
    let scene = Scene::new(vec![
        PointTarget::new(Vec3::new(0.0, 2.5, 0.9), 1.0),
        PointTarget::new(Vec3::new(-0.4, 3.2, 0.9), 0.7),
        PointTarget::new(Vec3::new(0.48, 3.6, 0.9), 0.4),
    ]);
    let capture = synthesize_capture(&scene, &traj, &cfg, &array, ApertureWindow::whole(&traj))?;

    let grid = ImageGrid::new([-0.81, 1.99], [1.6, 2.0], 0.02);
    let mut options = ImagingOptions::default();
    options.aperture.length = 0.5;
    let stack = image_stack(&capture, &grid, &options)?;
    let (rows, cols) = grid.shape();
    println!("{} images of {rows} x {cols}, phase center {:?}", stack.images.len(), stack.phase_center().as_slice());

    for t in &scene.targets {
        let local = stack.frame.to_local(&t.position);
        let (r, c) = grid.pixel_at(local.x, local.y.hypot(local.z)).expect("target inside grid");
        println!(
            "  target ({:5.2}, {:4.2}) m  |I| = {:.3e}",
            t.position.x,
            t.position.y,
            stack.images[0][[r, c]].norm()
        );
    }
    let (peak, vx, r, c) = stack.peak();
    println!("peak |I| {peak:.3e} in vx{vx:02} at {:?}", grid.pixel_center(r, c));

    options.interpolation = Interpolation::Sinc;
    let sinc = image_stack(&capture, &grid, &options)?;
    println!("sinc interpolation peak |I| {:.3e}", sinc.peak().0);

    let dir = std::env::temp_dir().join("insar-examples");
    std::fs::create_dir_all(&dir)?;
    let pgm = dir.join("sar_image_vx00.pgm");
    write_log_magnitude_pgm(&stack.images[0], 50.0, &pgm)?;
    println!("wrote {}", pgm.display());
    Ok(())
}

fn main() -> insar::Result<()> {
    run_example()
}
