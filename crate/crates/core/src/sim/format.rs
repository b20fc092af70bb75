//! `INSARRAW` capture files.
//!
//! Layout (little-endian):
//!
//! ```text
//! magic "INSARRAW" | u32 version
//! chirp: f64 fc | f64 slope | u32 samples | f64 fs | f64 pri | u32 chirps/tx | u32 num_tx
//! array: u32 ntx | ntx x (f64 x,y,z) | u32 nrx | nrx x (f64 x,y,z)
//! u64 pulse count
//! per pulse: u32 tx | u32 rx | f64 time
//!            | pose: f64 t | f64 x,y,z | f64 qw,qx,qy,qz
//!            | samples x (f32 I, f32 Q)
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use super::capture::{PulseRecord, RawCapture};
use crate::codec::{Decoder, Encoder};
use crate::error::Result;

pub const CAPTURE_MAGIC: &[u8; 8] = b"INSARRAW";

pub fn write_capture(capture: &RawCapture, path: &Path) -> Result<()> {
    capture.validate()?;
    let mut enc = Encoder::new(BufWriter::new(File::create(path)?));
    enc.header(CAPTURE_MAGIC)?;
    enc.chirp(&capture.chirp)?;
    enc.array(&capture.array)?;
    enc.u64(capture.pulses.len() as u64)?;
    for p in &capture.pulses {
        enc.u32(p.tx_index as u32)?;
        enc.u32(p.rx_index as u32)?;
        enc.f64(p.time)?;
        enc.pose(&p.pose)?;
        enc.complex32s(&p.samples)?;
    }
    enc.into_inner().flush()?;
    Ok(())
}

pub fn read_capture(path: &Path) -> Result<RawCapture> {
    let mut dec = Decoder::new(BufReader::new(File::open(path)?), "capture");
    dec.header(CAPTURE_MAGIC)?;
    let chirp = dec.chirp()?;
    let array = dec.array()?;
    if array.num_tx() != chirp.num_tx {
        return Err(dec.error("TX count disagrees with chirp config"));
    }
    let n = dec.count()?;
    let mut pulses = Vec::with_capacity(n.min(1 << 20));
    for _ in 0..n {
        let tx_index = dec.u32()? as usize;
        let rx_index = dec.u32()? as usize;
        if array.vx_index(tx_index, rx_index).is_none() {
            return Err(dec.error(format!("pulse references unknown TX/RX {tx_index}/{rx_index}")));
        }
        let time = dec.f64()?;
        let pose = dec.pose()?;
        let samples = dec.complex32s(chirp.samples_per_chirp)?;
        pulses.push(PulseRecord {
            tx_index,
            rx_index,
            time,
            pose,
            samples,
        });
    }
    dec.finish()?;
    Ok(RawCapture {
        chirp,
        array,
        pulses,
    })
}
