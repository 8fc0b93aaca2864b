//! Parameter checkpoint container: a flat list of named float64 arrays behind
//! a versioned header, with an embedded JSON metadata string.
//!
//! Byte layout (all integers little-endian, version carried by the magic):
//!
//! ```text
//! offset 0   magic           8 bytes  = "GQCCKPT1"
//!        8   meta_len        u32
//!       12   meta            meta_len bytes of UTF-8 JSON (may be empty)
//!        .   array_count     u32
//!  per array:
//!        .   name_len        u32
//!        .   name            name_len bytes of UTF-8
//!        .   value_count     u64
//!        .   values          value_count × f64
//! ```
//!
//! Writes are deterministic: arrays are stored in insertion order.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"GQCCKPT1";

/// In-memory checkpoint: JSON metadata plus ordered named float64 arrays.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Checkpoint {
    pub meta: String,
    entries: Vec<(String, Vec<f64>)>,
}

impl Checkpoint {
    pub fn new(meta: String) -> Self {
        Self {
            meta,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, values: Vec<f64>) {
        self.entries.push((name.into(), values));
    }

    pub fn get(&self, name: &str) -> Option<&[f64]> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn entries(&self) -> &[(String, Vec<f64>)] {
        &self.entries
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(MAGIC)?;
        let meta_bytes = self.meta.as_bytes();
        w.write_all(&(meta_bytes.len() as u32).to_le_bytes())?;
        w.write_all(meta_bytes)?;
        w.write_all(&(self.entries.len() as u32).to_le_bytes())?;
        for (name, values) in &self.entries {
            let name_bytes = name.as_bytes();
            w.write_all(&(name_bytes.len() as u32).to_le_bytes())?;
            w.write_all(name_bytes)?;
            w.write_all(&(values.len() as u64).to_le_bytes())?;
            for v in values {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Parse(format!(
                "bad checkpoint magic {magic:?} in {}",
                path.display()
            )));
        }
        let meta_len = read_u32(&mut r)? as usize;
        let mut meta_bytes = vec![0u8; meta_len];
        r.read_exact(&mut meta_bytes)?;
        let meta = String::from_utf8(meta_bytes)
            .map_err(|e| Error::Parse(format!("checkpoint metadata is not UTF-8: {e}")))?;
        let array_count = read_u32(&mut r)? as usize;
        let mut entries = Vec::with_capacity(array_count);
        for _ in 0..array_count {
            let name_len = read_u32(&mut r)? as usize;
            let mut name_bytes = vec![0u8; name_len];
            r.read_exact(&mut name_bytes)?;
            let name = String::from_utf8(name_bytes)
                .map_err(|e| Error::Parse(format!("checkpoint array name is not UTF-8: {e}")))?;
            let count = read_u64(&mut r)? as usize;
            let mut values = Vec::with_capacity(count);
            let mut buf = [0u8; 8];
            for _ in 0..count {
                r.read_exact(&mut buf)?;
                values.push(f64::from_le_bytes(buf));
            }
            entries.push((name, values));
        }
        Ok(Self { meta, entries })
    }
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}
