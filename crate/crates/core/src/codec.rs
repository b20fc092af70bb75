//! Little-endian building blocks shared by the binary artifact formats.

use std::io::{self, Read, Write};

use byteorder::{LittleEndian as LE, ReadBytesExt, WriteBytesExt};
use nalgebra::{Quaternion, UnitQuaternion};
use num_complex::Complex32;

use crate::error::{InsarError, Result};
use crate::geometry::{build_virtual_array, ChirpConfig, Pose, Vec3, VirtualArray};

pub const FORMAT_VERSION: u32 = 1;

/// Upper bound on any element count read from a header, to reject garbage
/// before allocating.
const MAX_COUNT: u64 = 1 << 32;

pub(crate) struct Decoder<R> {
    inner: R,
    kind: &'static str,
}

impl<R: Read> Decoder<R> {
    pub fn new(inner: R, kind: &'static str) -> Self {
        Decoder { inner, kind }
    }

    fn map(&self, e: io::Error) -> InsarError {
        if e.kind() == io::ErrorKind::UnexpectedEof {
            InsarError::format(self.kind, "file is truncated")
        } else {
            InsarError::Io(e)
        }
    }

    pub fn error(&self, message: impl Into<String>) -> InsarError {
        InsarError::format(self.kind, message)
    }

    pub fn header(&mut self, magic: &[u8; 8]) -> Result<()> {
        let mut found = [0u8; 8];
        self.inner.read_exact(&mut found).map_err(|e| self.map(e))?;
        if &found != magic {
            return Err(self.error(format!(
                "bad magic {:?}, expected {:?}",
                String::from_utf8_lossy(&found),
                String::from_utf8_lossy(magic)
            )));
        }
        let version = self.u32()?;
        if version != FORMAT_VERSION {
            return Err(self.error(format!("unsupported version {version}")));
        }
        Ok(())
    }

    pub fn u32(&mut self) -> Result<u32> {
        self.inner.read_u32::<LE>().map_err(|e| self.map(e))
    }

    pub fn u64(&mut self) -> Result<u64> {
        self.inner.read_u64::<LE>().map_err(|e| self.map(e))
    }

    pub fn count(&mut self) -> Result<usize> {
        let n = self.u64()?;
        if n > MAX_COUNT {
            return Err(self.error(format!("implausible element count {n}")));
        }
        Ok(n as usize)
    }

    pub fn f64(&mut self) -> Result<f64> {
        self.inner.read_f64::<LE>().map_err(|e| self.map(e))
    }

    pub fn f32s(&mut self, n: usize) -> Result<Vec<f32>> {
        let mut out = vec![0f32; n];
        self.inner
            .read_f32_into::<LE>(&mut out)
            .map_err(|e| self.map(e))?;
        Ok(out)
    }

    pub fn complex32s(&mut self, n: usize) -> Result<Vec<Complex32>> {
        let flat = self.f32s(2 * n)?;
        Ok(flat
            .chunks_exact(2)
            .map(|c| Complex32::new(c[0], c[1]))
            .collect())
    }

    pub fn vec3(&mut self) -> Result<Vec3> {
        Ok(Vec3::new(self.f64()?, self.f64()?, self.f64()?))
    }

    pub fn quaternion(&mut self) -> Result<UnitQuaternion<f64>> {
        let (w, x, y, z) = (self.f64()?, self.f64()?, self.f64()?, self.f64()?);
        let q = Quaternion::new(w, x, y, z);
        if !q.norm().is_finite() || (q.norm() - 1.0).abs() > 1e-6 {
            return Err(self.error("orientation is not a unit quaternion"));
        }
        Ok(UnitQuaternion::from_quaternion(q))
    }

    pub fn pose(&mut self) -> Result<Pose> {
        Ok(Pose::new(self.f64()?, self.vec3()?, self.quaternion()?))
    }

    pub fn chirp(&mut self) -> Result<ChirpConfig> {
        let cfg = ChirpConfig {
            center_frequency: self.f64()?,
            ramp_slope: self.f64()?,
            samples_per_chirp: self.u32()? as usize,
            sample_rate: self.f64()?,
            pri: self.f64()?,
            chirps_per_tx_per_frame: self.u32()? as usize,
            num_tx: self.u32()? as usize,
        };
        cfg.validate().map_err(|e| self.error(e.to_string()))?;
        Ok(cfg)
    }

    pub fn array(&mut self) -> Result<VirtualArray> {
        let ntx = self.u32()? as usize;
        let tx = (0..ntx).map(|_| self.vec3()).collect::<Result<Vec<_>>>()?;
        let nrx = self.u32()? as usize;
        let rx = (0..nrx).map(|_| self.vec3()).collect::<Result<Vec<_>>>()?;
        if tx.is_empty() || rx.is_empty() {
            return Err(self.error("array has no TX or RX"));
        }
        Ok(build_virtual_array(tx, rx))
    }

    /// Succeeds only if the stream is exhausted.
    pub fn finish(mut self) -> Result<()> {
        let mut extra = [0u8; 1];
        match self.inner.read(&mut extra) {
            Ok(0) => Ok(()),
            Ok(_) => Err(self.error("trailing bytes after payload")),
            Err(e) => Err(InsarError::Io(e)),
        }
    }
}

pub(crate) struct Encoder<W> {
    inner: W,
}

impl<W: Write> Encoder<W> {
    pub fn new(inner: W) -> Self {
        Encoder { inner }
    }

    pub fn into_inner(self) -> W {
        self.inner
    }

    pub fn header(&mut self, magic: &[u8; 8]) -> Result<()> {
        self.inner.write_all(magic)?;
        self.u32(FORMAT_VERSION)
    }

    pub fn u32(&mut self, v: u32) -> Result<()> {
        Ok(self.inner.write_u32::<LE>(v)?)
    }

    pub fn u64(&mut self, v: u64) -> Result<()> {
        Ok(self.inner.write_u64::<LE>(v)?)
    }

    pub fn f64(&mut self, v: f64) -> Result<()> {
        Ok(self.inner.write_f64::<LE>(v)?)
    }

    pub fn f32(&mut self, v: f32) -> Result<()> {
        Ok(self.inner.write_f32::<LE>(v)?)
    }

    pub fn complex32s(&mut self, values: &[Complex32]) -> Result<()> {
        for c in values {
            self.f32(c.re)?;
            self.f32(c.im)?;
        }
        Ok(())
    }

    pub fn vec3(&mut self, v: &Vec3) -> Result<()> {
        self.f64(v.x)?;
        self.f64(v.y)?;
        self.f64(v.z)
    }

    pub fn quaternion(&mut self, q: &UnitQuaternion<f64>) -> Result<()> {
        let q = q.quaternion();
        self.f64(q.w)?;
        self.f64(q.i)?;
        self.f64(q.j)?;
        self.f64(q.k)
    }

    pub fn pose(&mut self, p: &Pose) -> Result<()> {
        self.f64(p.time)?;
        self.vec3(&p.position)?;
        self.quaternion(&p.orientation)
    }

    pub fn chirp(&mut self, c: &ChirpConfig) -> Result<()> {
        self.f64(c.center_frequency)?;
        self.f64(c.ramp_slope)?;
        self.u32(c.samples_per_chirp as u32)?;
        self.f64(c.sample_rate)?;
        self.f64(c.pri)?;
        self.u32(c.chirps_per_tx_per_frame as u32)?;
        self.u32(c.num_tx as u32)
    }

    pub fn array(&mut self, a: &VirtualArray) -> Result<()> {
        self.u32(a.tx_positions.len() as u32)?;
        for p in &a.tx_positions {
            self.vec3(p)?;
        }
        self.u32(a.rx_positions.len() as u32)?;
        for p in &a.rx_positions {
            self.vec3(p)?;
        }
        Ok(())
    }
}

/// Reads the 8-byte magic of an artifact file.
pub fn sniff_magic(path: &std::path::Path) -> Result<[u8; 8]> {
    let mut f = std::fs::File::open(path)?;
    let mut magic = [0u8; 8];
    f.read_exact(&mut magic)?;
    Ok(magic)
}
