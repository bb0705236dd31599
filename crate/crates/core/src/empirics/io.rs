//! Flat binary batch files: the magic `RSMB`, a little-endian `u32` version
//! and `u64` count, then `count` little-endian `f64` values.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"RSMB";
const VERSION: u32 = 1;

pub fn write_batch(path: impl AsRef<Path>, values: &[f64]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(values.len() as u64).to_le_bytes())?;
    for v in values {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_batch(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let mut r = BufReader::new(File::open(path)?);
    let mut header = [0u8; 16];
    r.read_exact(&mut header)?;
    if &header[..4] != MAGIC {
        return Err(Error::Io("not a batch file".into()));
    }
    let version = u32::from_le_bytes(header[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(Error::Io(format!("unsupported batch version {version}")));
    }
    let count = u64::from_le_bytes(header[8..16].try_into().unwrap()) as usize;
    let mut out = Vec::with_capacity(count);
    let mut buf = [0u8; 8];
    for _ in 0..count {
        r.read_exact(&mut buf)?;
        out.push(f64::from_le_bytes(buf));
    }
    Ok(out)
}
