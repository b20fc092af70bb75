//! Platform poses and their interpolation.

use std::path::Path;

use nalgebra::{Quaternion, UnitQuaternion};

use super::array::Vec3;
use crate::error::{InsarError, Result};

/// Speed above which TDM velocity ambiguity becomes a concern (20 mph).
pub const MAX_TDM_SPEED_MPS: f64 = 9.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub time: f64,
    pub position: Vec3,
    /// World-from-array rotation.
    pub orientation: UnitQuaternion<f64>,
}

impl Pose {
    pub fn new(time: f64, position: Vec3, orientation: UnitQuaternion<f64>) -> Self {
        Pose {
            time,
            position,
            orientation,
        }
    }

    /// Maps an array-frame offset to world coordinates.
    pub fn transform(&self, offset: &Vec3) -> Vec3 {
        self.position + self.orientation * offset
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    poses: Vec<Pose>,
}

impl Trajectory {
    pub fn new(poses: Vec<Pose>) -> Result<Self> {
        if poses.is_empty() {
            return Err(InsarError::InvalidConfig("trajectory is empty".into()));
        }
        for (i, w) in poses.windows(2).enumerate() {
            if !(w[1].time > w[0].time) {
                return Err(InsarError::InvalidConfig(format!(
                    "trajectory times must be strictly increasing (sample {} at {} s follows {} s)",
                    i + 1,
                    w[1].time,
                    w[0].time
                )));
            }
        }
        if poses
            .iter()
            .any(|p| !p.time.is_finite() || !p.position.iter().all(|c| c.is_finite()))
        {
            return Err(InsarError::InvalidConfig(
                "trajectory contains non-finite values".into(),
            ));
        }
        Ok(Trajectory { poses })
    }

    /// Constant-velocity straight line sampled every `dt` seconds over `[t0, t1]`.
    pub fn linear(
        start: Vec3,
        velocity: Vec3,
        orientation: UnitQuaternion<f64>,
        t0: f64,
        t1: f64,
        dt: f64,
    ) -> Result<Self> {
        if !(dt > 0.0) || !(t1 > t0) {
            return Err(InsarError::InvalidConfig(
                "linear trajectory needs t1 > t0 and dt > 0".into(),
            ));
        }
        let steps = ((t1 - t0) / dt).ceil() as usize;
        let pose = |t: f64| Pose::new(t, start + velocity * (t - t0), orientation);
        let mut poses: Vec<Pose> = (0..steps)
            .map(|k| t0 + k as f64 * dt)
            .take_while(|&t| t < t1 - 1e-9 * dt)
            .map(pose)
            .collect();
        poses.push(pose(t1));
        Trajectory::new(poses)
    }

    pub fn poses(&self) -> &[Pose] {
        &self.poses
    }

    pub fn start_time(&self) -> f64 {
        self.poses[0].time
    }

    pub fn end_time(&self) -> f64 {
        self.poses[self.poses.len() - 1].time
    }

    /// Position is interpolated linearly and orientation by slerp between the
    /// bracketing samples.
    pub fn pose_at_time(&self, t: f64) -> Result<Pose> {
        let (start, end) = (self.start_time(), self.end_time());
        if !(t >= start && t <= end) {
            return Err(InsarError::OutOfRangeTime {
                time: t,
                start,
                end,
            });
        }
        let hi = self.poses.partition_point(|p| p.time < t);
        let b = self.poses[hi];
        if b.time == t || hi == 0 {
            return Ok(b);
        }
        let a = self.poses[hi - 1];
        let s = (t - a.time) / (b.time - a.time);
        let position = a.position + (b.position - a.position) * s;
        let orientation = a
            .orientation
            .try_slerp(&b.orientation, s, 1e-12)
            .unwrap_or(a.orientation);
        Ok(Pose::new(t, position, orientation))
    }

    /// Largest speed between consecutive samples, m/s.
    pub fn max_speed(&self) -> f64 {
        self.poses
            .windows(2)
            .map(|w| (w[1].position - w[0].position).norm() / (w[1].time - w[0].time))
            .fold(0.0, f64::max)
    }

    /// Returns the offending speed when it exceeds [`MAX_TDM_SPEED_MPS`].
    pub fn speed_warning(&self) -> Option<f64> {
        let v = self.max_speed();
        (v > MAX_TDM_SPEED_MPS).then_some(v)
    }
}

#[derive(Debug, serde::Deserialize, serde::Serialize)]
struct TrajectoryRow {
    t: f64,
    x: f64,
    y: f64,
    z: f64,
    qw: f64,
    qx: f64,
    qy: f64,
    qz: f64,
}

const TRAJECTORY_HEADER: [&str; 8] = ["t", "x", "y", "z", "qw", "qx", "qy", "qz"];

/// Reads a `t,x,y,z,qw,qx,qy,qz` CSV file.
pub fn read_trajectory_csv(path: &Path) -> Result<Trajectory> {
    let parse_err = |line: usize, message: String| InsarError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| parse_err(0, e.to_string()))?;
    let headers = reader
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != TRAJECTORY_HEADER {
        return Err(parse_err(
            1,
            format!("expected header {}", TRAJECTORY_HEADER.join(",")),
        ));
    }
    let mut poses = Vec::new();
    for record in reader.deserialize::<TrajectoryRow>() {
        let row = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            parse_err(line, e.to_string())
        })?;
        let line = poses.len() + 2;
        let q = Quaternion::new(row.qw, row.qx, row.qy, row.qz);
        let norm = q.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-3 {
            return Err(parse_err(
                line,
                format!("quaternion norm {norm} is not 1"),
            ));
        }
        poses.push(Pose::new(
            row.t,
            Vec3::new(row.x, row.y, row.z),
            UnitQuaternion::from_quaternion(q),
        ));
    }
    if poses.is_empty() {
        return Err(parse_err(1, "trajectory has no samples".into()));
    }
    Trajectory::new(poses).map_err(|e| parse_err(0, e.to_string()))
}

pub fn write_trajectory_csv(traj: &Trajectory, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(csv_io)?;
    for p in traj.poses() {
        let q = p.orientation.quaternion();
        writer
            .serialize(TrajectoryRow {
                t: p.time,
                x: p.position.x,
                y: p.position.y,
                z: p.position.z,
                qw: q.w,
                qx: q.i,
                qy: q.j,
                qz: q.k,
            })
            .map_err(csv_io)?;
    }
    writer.flush()?;
    Ok(())
}

pub(crate) fn csv_io(e: csv::Error) -> InsarError {
    InsarError::Io(std::io::Error::other(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::Vector3;

    fn two_point() -> Trajectory {
        Trajectory::new(vec![
            Pose::new(0.0, Vec3::zeros(), UnitQuaternion::identity()),
            Pose::new(1.0, Vec3::new(9.0, 0.0, 0.0), UnitQuaternion::identity()),
        ])
        .unwrap()
    }

    #[test]
    fn midpoint_is_linear() {
        let p = two_point().pose_at_time(0.5).unwrap();
        assert_relative_eq!(p.position.x, 4.5);
    }

    #[test]
    fn sample_time_returns_sample() {
        let traj = two_point();
        assert_eq!(traj.pose_at_time(1.0).unwrap(), traj.poses()[1]);
        assert_eq!(traj.pose_at_time(0.0).unwrap(), traj.poses()[0]);
    }

    #[test]
    fn out_of_range_time() {
        assert!(matches!(
            two_point().pose_at_time(-1.0),
            Err(InsarError::OutOfRangeTime { .. })
        ));
        assert!(two_point().pose_at_time(1.5).is_err());
    }

    #[test]
    fn orientation_is_slerped() {
        let q1 = UnitQuaternion::from_axis_angle(&Vector3::z_axis(), 1.0);
        let traj = Trajectory::new(vec![
            Pose::new(0.0, Vec3::zeros(), UnitQuaternion::identity()),
            Pose::new(2.0, Vec3::zeros(), q1),
        ])
        .unwrap();
        let p = traj.pose_at_time(0.5).unwrap();
        assert_relative_eq!(p.orientation.angle(), 0.25, epsilon = 1e-12);
        let r = p.orientation.to_rotation_matrix();
        assert_relative_eq!(r.matrix().determinant(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn non_increasing_times_rejected() {
        let p = Pose::new(0.0, Vec3::zeros(), UnitQuaternion::identity());
        assert!(Trajectory::new(vec![p, p]).is_err());
        assert!(Trajectory::new(vec![]).is_err());
    }

    #[test]
    fn speed_guard_warns_above_limit() {
        let slow = Trajectory::linear(
            Vec3::zeros(),
            Vec3::new(2.0, 0.0, 0.0),
            UnitQuaternion::identity(),
            0.0,
            1.0,
            0.1,
        )
        .unwrap();
        assert!(slow.speed_warning().is_none());
        let fast = Trajectory::linear(
            Vec3::zeros(),
            Vec3::new(12.0, 0.0, 0.0),
            UnitQuaternion::identity(),
            0.0,
            1.0,
            0.1,
        )
        .unwrap();
        assert_relative_eq!(fast.speed_warning().unwrap(), 12.0, epsilon = 1e-9);
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("traj.csv");
        let traj = Trajectory::linear(
            Vec3::new(1.0, 2.0, 0.9),
            Vec3::new(1.0, 0.0, 0.0),
            UnitQuaternion::from_axis_angle(&Vector3::z_axis(), 0.3),
            0.0,
            1.0,
            0.25,
        )
        .unwrap();
        write_trajectory_csv(&traj, &path).unwrap();
        let back = read_trajectory_csv(&path).unwrap();
        assert_eq!(back.poses().len(), traj.poses().len());
        for (a, b) in back.poses().iter().zip(traj.poses()) {
            assert_relative_eq!(a.position, b.position, epsilon = 1e-12);
            assert!(a.orientation.angle_to(&b.orientation) < 1e-12);
        }
    }

    #[test]
    fn csv_bad_row_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("traj.csv");
        std::fs::write(&path, "t,x,y,z,qw,qx,qy,qz\n0,0,0,0,1,0,0,0\n1,abc,0,0,1,0,0,0\n").unwrap();
        match read_trajectory_csv(&path) {
            Err(InsarError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }
}
