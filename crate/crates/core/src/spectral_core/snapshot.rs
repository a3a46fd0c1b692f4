//! Binary field snapshots.
//!
//! Layout: a 16-byte magic (`"DISLOC2D-FLD\n"` padded with three NUL
//! bytes), one ASCII header line `n=<n> period=<float> name=<str>\n`, then
//! `n*n` little-endian `f64` samples in the grid's storage order (rows of
//! constant `x2`, `x1` varying fastest).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::field::ScalarField2D;
use super::grid::Grid;
use crate::error::{Error, Result};

pub const SNAPSHOT_MAGIC: &[u8; 16] = b"DISLOC2D-FLD\n\0\0\0";

pub fn write_snapshot<W: Write>(mut w: W, field: &ScalarField2D, name: &str) -> Result<()> {
    if name.is_empty() || name.chars().any(char::is_whitespace) {
        return Err(Error::InvalidArgument(format!(
            "snapshot name must be non-empty without whitespace: {name:?}"
        )));
    }
    let g = field.grid();
    w.write_all(SNAPSHOT_MAGIC)?;
    writeln!(w, "n={} period={} name={}", g.n(), g.period(), name)?;
    for v in field.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_snapshot<R: Read>(r: R) -> Result<(ScalarField2D, String)> {
    let mut r = BufReader::new(r);
    let mut magic = [0u8; 16];
    r.read_exact(&mut magic)?;
    if &magic != SNAPSHOT_MAGIC {
        return Err(Error::MalformedSnapshot("bad magic".into()));
    }
    let mut header = String::new();
    r.read_line(&mut header)?;
    let header = header
        .strip_suffix('\n')
        .ok_or_else(|| Error::MalformedSnapshot("unterminated header".into()))?;
    let (mut n, mut period, mut name) = (None, None, None);
    for tok in header.split(' ') {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| Error::MalformedSnapshot(format!("bad header token {tok:?}")))?;
        match key {
            "n" => n = val.parse::<usize>().ok(),
            "period" => period = val.parse::<f64>().ok(),
            "name" => name = Some(val.to_string()),
            _ => return Err(Error::MalformedSnapshot(format!("unknown key {key:?}"))),
        }
    }
    let (n, period, name) = match (n, period, name) {
        (Some(n), Some(p), Some(name)) => (n, p, name),
        _ => return Err(Error::MalformedSnapshot("incomplete header".into())),
    };
    let grid = Grid::new(n, period)?;
    let mut buf = vec![0u8; grid.len() * 8];
    r.read_exact(&mut buf)?;
    let values = buf
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    Ok((ScalarField2D::from_values(grid, values)?, name))
}

pub fn save_snapshot(path: impl AsRef<Path>, field: &ScalarField2D, name: &str) -> Result<()> {
    write_snapshot(BufWriter::new(File::create(path)?), field, name)
}

pub fn load_snapshot(path: impl AsRef<Path>) -> Result<(ScalarField2D, String)> {
    read_snapshot(File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let g = Grid::new(8, 3.5).unwrap();
        let f = ScalarField2D::from_fn(g, |x1, x2| (x1 * 1.7).sin() - x2.powi(3) / 7.0);
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &f, "rho_plus").unwrap();
        assert_eq!(&buf[..16], SNAPSHOT_MAGIC);
        assert!(buf[16..].starts_with(b"n=8 period=3.5 name=rho_plus\n"));
        assert_eq!(buf.len(), 16 + 29 + 64 * 8);
        let (back, name) = read_snapshot(buf.as_slice()).unwrap();
        assert_eq!(name, "rho_plus");
        assert_eq!(back, f);
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_snapshot(&b"NOT-A-SNAPSHOT!!n=8"[..]).is_err());
        let f = ScalarField2D::zeros(Grid::standard(8).unwrap());
        assert!(write_snapshot(Vec::new(), &f, "two words").is_err());
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &f, "z").unwrap();
        buf.truncate(buf.len() - 1);
        assert!(read_snapshot(buf.as_slice()).is_err());
    }
}
