//! `INSARIMG` image-stack files and PGM previews.
//!
//! Layout (little-endian):
//!
//! ```text
//! magic "INSARIMG" | u32 version
//! grid:   f64 u0, v0, extent_u, extent_v, pixel_size, height | u32 rows | u32 cols
//! frame:  f64 x,y,z (phase center) | f64 qw,qx,qy,qz
//! f64 aperture length
//! chirp and array blocks as in INSARRAW
//! u32 vx count | per VX: u32 tx | u32 rx
//! per VX: rows x cols x (f32 I, f32 Q), row-major (rows along v)
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::Array2;
use num_complex::{Complex32, Complex64};

use super::grid::{ImageGrid, SarFrame};
use super::stack::SarImageStack;
use crate::codec::{Decoder, Encoder};
use crate::error::Result;

pub const IMAGE_MAGIC: &[u8; 8] = b"INSARIMG";

pub(crate) fn write_grid<W: Write>(enc: &mut Encoder<W>, grid: &ImageGrid) -> Result<()> {
    for v in [
        grid.origin[0],
        grid.origin[1],
        grid.extent[0],
        grid.extent[1],
        grid.pixel_size,
        grid.height,
    ] {
        enc.f64(v)?;
    }
    let (rows, cols) = grid.shape();
    enc.u32(rows as u32)?;
    enc.u32(cols as u32)
}

pub(crate) fn read_grid<R: Read>(dec: &mut Decoder<R>) -> Result<ImageGrid> {
    let origin = [dec.f64()?, dec.f64()?];
    let extent = [dec.f64()?, dec.f64()?];
    let pixel_size = dec.f64()?;
    let height = dec.f64()?;
    let grid = ImageGrid {
        origin,
        extent,
        pixel_size,
        height,
    };
    grid.validate().map_err(|e| dec.error(e.to_string()))?;
    let (rows, cols) = (dec.u32()? as usize, dec.u32()? as usize);
    if (rows, cols) != grid.shape() {
        return Err(dec.error(format!(
            "grid shape {rows}x{cols} disagrees with geometry {:?}",
            grid.shape()
        )));
    }
    Ok(grid)
}

pub fn write_image_stack(stack: &SarImageStack, path: &Path) -> Result<()> {
    let mut enc = Encoder::new(BufWriter::new(File::create(path)?));
    enc.header(IMAGE_MAGIC)?;
    write_grid(&mut enc, &stack.grid)?;
    enc.vec3(&stack.frame.origin)?;
    enc.quaternion(&stack.frame.orientation)?;
    enc.f64(stack.aperture_length)?;
    enc.chirp(&stack.chirp)?;
    enc.array(&stack.array)?;
    enc.u32(stack.array.num_vx() as u32)?;
    for vx in &stack.array.vx_elements {
        enc.u32(vx.tx_index as u32)?;
        enc.u32(vx.rx_index as u32)?;
    }
    for img in &stack.images {
        let plane: Vec<Complex32> = img
            .iter()
            .map(|c| Complex32::new(c.re as f32, c.im as f32))
            .collect();
        enc.complex32s(&plane)?;
    }
    enc.into_inner().flush()?;
    Ok(())
}

pub fn read_image_stack(path: &Path) -> Result<SarImageStack> {
    let mut dec = Decoder::new(BufReader::new(File::open(path)?), "image stack");
    dec.header(IMAGE_MAGIC)?;
    let grid = read_grid(&mut dec)?;
    let frame = SarFrame {
        origin: dec.vec3()?,
        orientation: dec.quaternion()?,
    };
    let aperture_length = dec.f64()?;
    let chirp = dec.chirp()?;
    let array = dec.array()?;
    let n_vx = dec.u32()? as usize;
    if n_vx != array.num_vx() {
        return Err(dec.error(format!("{n_vx} VX listed, array has {}", array.num_vx())));
    }
    for el in &array.vx_elements {
        let (tx, rx) = (dec.u32()? as usize, dec.u32()? as usize);
        if (tx, rx) != (el.tx_index, el.rx_index) {
            return Err(dec.error("VX list disagrees with array geometry"));
        }
    }
    let shape = grid.shape();
    let mut images = Vec::with_capacity(n_vx);
    for _ in 0..n_vx {
        let plane: Vec<Complex64> = dec
            .complex32s(shape.0 * shape.1)?
            .into_iter()
            .map(|c| Complex64::new(c.re as f64, c.im as f64))
            .collect();
        images.push(Array2::from_shape_vec(shape, plane).expect("grid shape"));
    }
    dec.finish()?;
    Ok(SarImageStack {
        grid,
        images,
        frame,
        aperture_length,
        chirp,
        array,
    })
}

/// Writes `20 log10 |I|` as a 16-bit binary PGM, mapping the top
/// `dynamic_range_db` below the peak onto 0..=65535. Row 0 is the far edge so
/// range increases upward.
pub fn write_log_magnitude_pgm(
    image: &Array2<Complex64>,
    dynamic_range_db: f64,
    path: &Path,
) -> Result<()> {
    let (rows, cols) = image.dim();
    let db = image.mapv(|c| 20.0 * c.norm().max(1e-300).log10());
    let peak = db.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let floor = peak - dynamic_range_db;
    let mut out = BufWriter::new(File::create(path)?);
    write!(out, "P5\n{cols} {rows}\n65535\n")?;
    for r in (0..rows).rev() {
        for c in 0..cols {
            let t = ((db[[r, c]] - floor) / dynamic_range_db).clamp(0.0, 1.0);
            let level = (t * 65535.0).round() as u16;
            out.write_all(&level.to_be_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}
