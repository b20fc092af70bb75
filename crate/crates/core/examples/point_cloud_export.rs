// Filters an elevation map into a point cloud and exports PCD and CSV.

use nalgebra::UnitQuaternion;

use insar::geometry::{ChirpConfig, Trajectory, Vec3, VirtualArray};
use insar::imaging::{image_stack, ImageGrid, ImagingOptions};
use insar::interferometry::elevation_map;
use insar::pointcloud::{filter_points, read_pcd, write_cloud_csv, write_pcd, FilterConfig, Rejection};
use insar::sim::{add_noise, synthesize_capture, ApertureWindow, PointTarget, Scene};

pub fn run_example() -> insar::Result<()> {
    let cfg = ChirpConfig::automotive();
    let array = VirtualArray::two_layer_default(cfg.wavelength());
    let traj = Trajectory::linear(
        Vec3::new(-0.5, 0.0, 0.9),
        Vec3::new(8.0, 0.0, 0.0),
        UnitQuaternion::identity(),
        0.0,
        0.125,
        0.125,
    )?;
    // a post, a kerb-height point and something in the front cone
    let scene = Scene::new(vec![
        PointTarget::new(Vec3::new(0.4, 3.2, 0.3), 1.0),
        PointTarget::new(Vec3::new(0.4, 3.2, 1.1), 1.0),
        PointTarget::new(Vec3::new(-0.6, 3.8, 0.1), 0.8),
        PointTarget::new(Vec3::new(0.0, 1.2, 0.9), 1.0),
    ]);
    let capture = synthesize_capture(&scene, &traj, &cfg, &array, ApertureWindow::whole(&traj))?;
    let capture = add_noise(&capture, 10.0, 1)?;
    let grid = ImageGrid::new([-1.02, 0.5], [2.0, 4.0], 0.04);
    let stack = image_stack(&capture, &grid, &ImagingOptions::default())?;
    let map = elevation_map(&stack)?;

    let filter = FilterConfig::with_mount_height(0.9);
    let cloud = filter_points(&map, &filter)?;
    println!("{} of {} pixels kept", cloud.stats.kept, cloud.stats.total);
    for r in Rejection::ALL {
        println!("  {:<16} {}", r.name(), cloud.stats.rejected_by(r));
    }
    if let Some((lo, hi, mean)) = cloud.height_summary() {
        println!("s_z in sensor frame: {lo:.3} .. {hi:.3} m, mean {mean:.3} m");
    }

    let dir = std::env::temp_dir().join("insar-examples");
    std::fs::create_dir_all(&dir)?;
    let (pcd, csv) = (dir.join("point_cloud.pcd"), dir.join("point_cloud.csv"));
    write_pcd(&cloud, &pcd)?;
    write_cloud_csv(&cloud, &csv)?;
    let back = read_pcd(&pcd)?;
    println!("wrote {} ({} points) and {}", pcd.display(), back.len(), csv.display());
    Ok(())
}

fn main() -> insar::Result<()> {
    run_example()
}
