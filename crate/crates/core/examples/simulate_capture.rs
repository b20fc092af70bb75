// Synthesizes a noisy TDM capture along a rail and round-trips it through
// the binary capture format.

use nalgebra::UnitQuaternion;

use insar::geometry::{ChirpConfig, Trajectory, Vec3, VirtualArray};
use insar::sim::{
    add_noise, read_capture, synthesize_capture, write_capture, ApertureWindow, PointTarget, Scene,
};

pub fn run_example() -> insar::Result<()> {
    let cfg = ChirpConfig::automotive();
    let array = VirtualArray::two_layer_default(cfg.wavelength());
    let traj = Trajectory::linear(
        Vec3::new(-0.1, 0.0, 0.9),
        Vec3::new(5.0, 0.0, 0.0),
        UnitQuaternion::identity(),
        0.0,
        0.04,
        0.01,
    )?;
    let scene = Scene::new(vec![
        PointTarget::new(Vec3::new(0.0, 3.0, 0.05), 1.0),
        PointTarget::new(Vec3::new(0.3, 5.0, 1.2), 0.5),
    ]);

    let clean = synthesize_capture(&scene, &traj, &cfg, &array, ApertureWindow::whole(&traj))?;
    let noisy = add_noise(&clean, 20.0, 42)?;
    println!(
        "{} pulses over {:.4} s, {} per VX, {} samples each",
        noisy.pulses.len(),
        noisy.duration(),
        noisy.pulses_for_vx(0).len(),
        cfg.samples_per_chirp
    );
    if let Some(v) = traj.speed_warning() {
        println!("warning: {v} m/s is above the TDM speed limit");
    }

    let dir = std::env::temp_dir().join("insar-examples");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("simulate_capture.insarraw");
    write_capture(&noisy, &path)?;
    let back = read_capture(&path)?;
    assert_eq!(back.pulses.len(), noisy.pulses.len());
    println!("wrote {} ({} bytes)", path.display(), std::fs::metadata(&path)?.len());
    Ok(())
}

fn main() -> insar::Result<()> {
    run_example()
}
