//! ASCII PCD v0.7 and CSV export.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::filter::ElevationPointCloud;
use crate::error::{InsarError, Result};

/// Formats like C's `%g`: six significant digits, trailing zeros removed,
/// exponent form below `1e-4` and from `1e6`.
pub fn format_g(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-4..6).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    trim_zeros(&format!("{v:.*}", (5 - exp) as usize)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_pcd(cloud: &ElevationPointCloud, path: &Path) -> Result<()> {
    if cloud
        .points
        .iter()
        .any(|p| !p.position.iter().all(|c| c.is_finite()) || !p.intensity.is_finite())
    {
        return Err(InsarError::InvalidConfig("point cloud has non-finite values".into()));
    }
    let mut out = BufWriter::new(File::create(path)?);
    let n = cloud.points.len();
    write!(
        out,
        "# .PCD v0.7 - Point Cloud Data file format\n\
         VERSION 0.7\n\
         FIELDS x y z intensity\n\
         SIZE 4 4 4 4\n\
         TYPE F F F F\n\
         COUNT 1 1 1 1\n\
         WIDTH {n}\n\
         HEIGHT 1\n\
         VIEWPOINT 0 0 0 1 0 0 0\n\
         POINTS {n}\n\
         DATA ascii\n"
    )?;
    for p in &cloud.points {
        // values are single precision on disk
        let f = |v: f64| format_g(v as f32 as f64);
        writeln!(
            out,
            "{} {} {} {}",
            f(p.position.x),
            f(p.position.y),
            f(p.position.z),
            f(p.intensity)
        )?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcdPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub intensity: f64,
}

/// Parses an ASCII PCD with fields `x y z intensity`.
pub fn read_pcd(path: &Path) -> Result<Vec<PcdPoint>> {
    let err = |line: usize, m: String| InsarError::format("pcd", format!("line {line}: {m}"));
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines().enumerate();
    let mut points_declared = None;
    let mut fields_ok = false;
    loop {
        let (i, line) = lines.next().ok_or_else(|| err(0, "missing DATA line".into()))?;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match key {
            "FIELDS" => {
                if rest.split_whitespace().collect::<Vec<_>>() != ["x", "y", "z", "intensity"] {
                    return Err(err(i + 1, format!("unsupported FIELDS {rest:?}")));
                }
                fields_ok = true;
            }
            "POINTS" => {
                points_declared = Some(
                    rest.trim()
                        .parse::<usize>()
                        .map_err(|e| err(i + 1, format!("bad POINTS: {e}")))?,
                );
            }
            "DATA" => {
                if rest.trim() != "ascii" {
                    return Err(err(i + 1, format!("unsupported DATA {rest:?}")));
                }
                break;
            }
            _ => {}
        }
    }
    if !fields_ok {
        return Err(err(0, "missing FIELDS".into()));
    }
    let expected = points_declared.ok_or_else(|| err(0, "missing POINTS".into()))?;
    let mut points = Vec::with_capacity(expected);
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let v: Vec<f64> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| err(i + 1, format!("{e}")))?;
        if v.len() != 4 {
            return Err(err(i + 1, format!("expected 4 values, found {}", v.len())));
        }
        points.push(PcdPoint {
            x: v[0],
            y: v[1],
            z: v[2],
            intensity: v[3],
        });
    }
    if points.len() != expected {
        return Err(err(0, format!("POINTS {expected} but {} data lines", points.len())));
    }
    Ok(points)
}

#[derive(Serialize)]
struct CsvRow {
    x: f64,
    y: f64,
    z: f64,
    intensity: f64,
    snr_db: f64,
    circ_var: f64,
}

/// CSV with columns `x,y,z,intensity,snr_db,circ_var`.
pub fn write_cloud_csv(cloud: &ElevationPointCloud, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    for p in &cloud.points {
        w.serialize(CsvRow {
            x: p.position.x,
            y: p.position.y,
            z: p.position.z,
            intensity: p.intensity,
            snr_db: p.snr_db,
            circ_var: p.circular_variance,
        })
        .map_err(csv_error)?;
    }
    if cloud.points.is_empty() {
        w.write_record(["x", "y", "z", "intensity", "snr_db", "circ_var"])
            .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> InsarError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => InsarError::Io(io),
        other => InsarError::format("csv", format!("{other:?}")),
    }
}
