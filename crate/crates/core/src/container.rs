//! Binary dump/load for sieve and τ_N tables.
//!
//! Layout: a 16-byte header `magic[8] | version: u32 LE | size: u32 LE`
//! followed by the columns as little-endian arrays, each covering indices
//! `0..=size`.
//!
//! | table  | magic        | size  | columns                                   |
//! |--------|--------------|-------|-------------------------------------------|
//! | sieve  | `PSLSIEVE`   | limit | spf u32, ω u8, Ω u8, Ω₂ u8, τ u16         |
//! | τ_N    | `PSLTAUN\0`  | N     | τ_N u16 over `0..=N²`                      |

use std::io::{Read, Write};

use crate::error::{LabError, Result};
use crate::sieve::SieveTables;
use crate::tau::TauNTable;

pub const SIEVE_MAGIC: [u8; 8] = *b"PSLSIEVE";
pub const TAU_MAGIC: [u8; 8] = *b"PSLTAUN\0";
pub const FORMAT_VERSION: u32 = 1;

fn write_header<W: Write>(w: &mut W, magic: &[u8; 8], size: u32) -> Result<()> {
    w.write_all(magic)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(&size.to_le_bytes())?;
    Ok(())
}

fn read_header<R: Read>(r: &mut R, magic: &[u8; 8]) -> Result<u32> {
    let mut header = [0u8; 16];
    r.read_exact(&mut header)?;
    if &header[..8] != magic {
        return Err(LabError::Format(format!(
            "expected magic {:?}, found {:?}",
            String::from_utf8_lossy(magic),
            String::from_utf8_lossy(&header[..8])
        )));
    }
    let version = u32::from_le_bytes(header[8..12].try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(LabError::Format(format!("unsupported version {version}")));
    }
    Ok(u32::from_le_bytes(header[12..16].try_into().unwrap()))
}

fn read_exact_vec<R: Read>(r: &mut R, bytes: usize) -> Result<Vec<u8>> {
    let mut buf = vec![0u8; bytes];
    r.read_exact(&mut buf)
        .map_err(|e| LabError::Format(format!("truncated body: {e}")))?;
    Ok(buf)
}

fn write_u16s<W: Write>(w: &mut W, xs: &[u16]) -> Result<()> {
    let mut buf = Vec::with_capacity(xs.len() * 2);
    for x in xs {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

fn read_u16s<R: Read>(r: &mut R, len: usize) -> Result<Vec<u16>> {
    let raw = read_exact_vec(r, len * 2)?;
    Ok(raw.chunks_exact(2).map(|c| u16::from_le_bytes([c[0], c[1]])).collect())
}

impl SieveTables {
    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        write_header(w, &SIEVE_MAGIC, self.limit)?;
        let mut buf = Vec::with_capacity(self.spf.len() * 4);
        for x in &self.spf {
            buf.extend_from_slice(&x.to_le_bytes());
        }
        w.write_all(&buf)?;
        w.write_all(&self.omega)?;
        w.write_all(&self.big_omega)?;
        w.write_all(&self.big_omega_2)?;
        write_u16s(w, &self.tau)
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let limit = read_header(r, &SIEVE_MAGIC)?;
        let len = limit as usize + 1;
        let spf = read_exact_vec(r, len * 4)?
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let omega = read_exact_vec(r, len)?;
        let big_omega = read_exact_vec(r, len)?;
        let big_omega_2 = read_exact_vec(r, len)?;
        let tau = read_u16s(r, len)?;
        Ok(Self {
            limit,
            spf,
            omega,
            big_omega,
            big_omega_2,
            tau,
        })
    }
}

impl TauNTable {
    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        let n = u32::try_from(self.n_max()).map_err(|_| LabError::Format("N too large".into()))?;
        write_header(w, &TAU_MAGIC, n)?;
        write_u16s(w, self.counts())
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let n = read_header(r, &TAU_MAGIC)? as u64;
        let counts = read_u16s(r, (n * n) as usize + 1)?;
        TauNTable::from_counts(n, counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_round_trip() {
        let t = SieveTables::build(5000).unwrap();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        assert_eq!(&buf[..8], b"PSLSIEVE");
        assert_eq!(buf.len(), 16 + 5001 * 9);
        let back = SieveTables::read_from(&mut buf.as_slice()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn tau_round_trip() {
        let t = TauNTable::build(30).unwrap();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        assert_eq!(&buf[..7], b"PSLTAUN");
        let back = TauNTable::read_from(&mut buf.as_slice()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn rejects_wrong_magic_and_truncation() {
        let t = TauNTable::build(5).unwrap();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        assert!(matches!(
            SieveTables::read_from(&mut buf.as_slice()),
            Err(LabError::Format(_))
        ));
        buf.truncate(buf.len() - 1);
        assert!(matches!(
            TauNTable::read_from(&mut buf.as_slice()),
            Err(LabError::Format(_))
        ));
    }
}
