use std::path::Path;

use crate::error::{InsarError, Result};
use crate::geometry::trajectory::csv_io;
use crate::geometry::Vec3;

/// Ideal point scatterer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointTarget {
    pub position: Vec3,
    /// Linear reflectivity.
    pub amplitude: f64,
}

impl PointTarget {
    pub fn new(position: Vec3, amplitude: f64) -> Self {
        PointTarget {
            position,
            amplitude,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            return Err(InsarError::InvalidConfig(format!(
                "target amplitude must be finite and >= 0, got {}",
                self.amplitude
            )));
        }
        if !self.position.iter().all(|c| c.is_finite()) {
            return Err(InsarError::InvalidConfig(
                "target position must be finite".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Scene {
    pub targets: Vec<PointTarget>,
}

impl Scene {
    pub fn new(targets: Vec<PointTarget>) -> Self {
        Scene { targets }
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.targets.is_empty() {
            return Err(InsarError::InvalidConfig("scene has no targets".into()));
        }
        self.targets.iter().try_for_each(PointTarget::validate)
    }

    /// Union of two scenes.
    pub fn merged(&self, other: &Scene) -> Scene {
        let mut targets = self.targets.clone();
        targets.extend_from_slice(&other.targets);
        Scene { targets }
    }
}

#[derive(Debug, serde::Deserialize, serde::Serialize)]
struct SceneRow {
    x: f64,
    y: f64,
    z: f64,
    amplitude: f64,
}

/// Reads an `x,y,z,amplitude` CSV file. An empty scene is a parse error.
pub fn read_scene_csv(path: &Path) -> Result<Scene> {
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
    if headers.iter().collect::<Vec<_>>() != ["x", "y", "z", "amplitude"] {
        return Err(parse_err(1, "expected header x,y,z,amplitude".into()));
    }
    let mut targets = Vec::new();
    for record in reader.deserialize::<SceneRow>() {
        let row = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            parse_err(line, e.to_string())
        })?;
        let target = PointTarget::new(Vec3::new(row.x, row.y, row.z), row.amplitude);
        target
            .validate()
            .map_err(|e| parse_err(targets.len() + 2, e.to_string()))?;
        targets.push(target);
    }
    if targets.is_empty() {
        return Err(parse_err(1, "scene file contains no targets".into()));
    }
    Ok(Scene { targets })
}

pub fn write_scene_csv(scene: &Scene, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(csv_io)?;
    for t in &scene.targets {
        writer
            .serialize(SceneRow {
                x: t.position.x,
                y: t.position.y,
                z: t.position.z,
                amplitude: t.amplitude,
            })
            .map_err(csv_io)?;
    }
    writer.flush()?;
    Ok(())
}
