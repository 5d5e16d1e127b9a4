//! Flat binary container: `b"KGL1"`, `u32 d`, `d × u32 N`, `f64 L`, then
//! `(re, im)` f64 pairs of the coefficients in storage order. All little-endian.

use super::field::SpectralField;
use super::grid::VelocityGrid;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"KGL1";

fn io(e: std::io::Error) -> Error {
    Error::Container(e.to_string())
}

pub fn write_field<W: Write>(mut w: W, f: &SpectralField) -> Result<()> {
    let g = f.grid();
    let mut buf = Vec::with_capacity(16 + 16 * g.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&(g.dim() as u32).to_le_bytes());
    for _ in 0..g.dim() {
        buf.extend_from_slice(&(g.n() as u32).to_le_bytes());
    }
    buf.extend_from_slice(&g.half_width().to_le_bytes());
    for z in f.coefficients() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    w.write_all(&buf).map_err(io)
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b).map_err(io)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b).map_err(io)?;
    Ok(f64::from_le_bytes(b))
}

pub fn read_field<R: Read>(mut r: R) -> Result<SpectralField> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(io)?;
    if &magic != MAGIC {
        return Err(Error::Container("bad magic".into()));
    }
    let d = read_u32(&mut r)? as usize;
    if !(1..=3).contains(&d) {
        return Err(Error::Container(format!("dimension {d} out of range")));
    }
    let ns: Vec<u32> = (0..d).map(|_| read_u32(&mut r)).collect::<Result<_>>()?;
    if ns.iter().any(|&n| n != ns[0]) {
        return Err(Error::Container("anisotropic grids are not supported".into()));
    }
    let l = read_f64(&mut r)?;
    let grid = VelocityGrid::new(d, ns[0] as usize, l)?;
    let mut coefs = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let re = read_f64(&mut r)?;
        let im = read_f64(&mut r)?;
        coefs.push(Complex64::new(re, im));
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest).map_err(io)? != 0 {
        return Err(Error::Container("trailing bytes".into()));
    }
    SpectralField::from_coefficients(grid, coefs)
}

pub fn write_field_file(path: impl AsRef<Path>, f: &SpectralField) -> Result<()> {
    let file = std::fs::File::create(path).map_err(io)?;
    write_field(std::io::BufWriter::new(file), f)
}

pub fn read_field_file(path: impl AsRef<Path>) -> Result<SpectralField> {
    let file = std::fs::File::open(path).map_err(io)?;
    read_field(std::io::BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_bytes() {
        let g = VelocityGrid::new(2, 8, 3.0).unwrap();
        let f = SpectralField::from_fn(g, |v| (-(v[0] * v[0] + 2.0 * v[1] * v[1])).exp()).unwrap();
        let mut bytes = Vec::new();
        write_field(&mut bytes, &f).unwrap();
        assert_eq!(&bytes[..4], b"KGL1");
        assert_eq!(bytes.len(), 4 + 4 + 8 + 8 + 16 * 64);
        let back = read_field(bytes.as_slice()).unwrap();
        assert_eq!(back.coefficients(), f.coefficients());
        assert_eq!(back.grid(), f.grid());
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_field(&b"KGL2\x01\x00\x00\x00"[..]).is_err());
        let g = VelocityGrid::new(1, 8, 1.0).unwrap();
        let mut bytes = Vec::new();
        write_field(&mut bytes, &SpectralField::zeros(g)).unwrap();
        bytes.push(0);
        assert!(read_field(bytes.as_slice()).is_err());
        bytes.truncate(bytes.len() - 9);
        assert!(read_field(bytes.as_slice()).is_err());
    }
}
