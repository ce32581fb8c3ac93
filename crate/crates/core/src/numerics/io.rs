//! Test-vector files.
//!
//! Text: a header line `N L dims`, then one `re im` pair per line.
//! Binary: magic `RFGRID01`, `u32 N`, `f64 L`, `u32 dims`, then `f64` pairs,
//! all little-endian.

use std::io::{BufRead, Read, Write};

use num_complex::Complex64;

use super::grid::{GridFunction, GridSpec};
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"RFGRID01";

pub fn write_text(f: &GridFunction, mut out: impl Write) -> Result<()> {
    writeln!(out, "{} {} {}", f.spec.n, f.spec.l, f.spec.dims)?;
    for v in &f.values {
        writeln!(out, "{} {}", v.re, v.im)?;
    }
    Ok(())
}

pub fn read_text(input: impl BufRead) -> Result<GridFunction> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty grid file".into()))??;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [n, l, dims] = fields.as_slice() else {
        return Err(Error::Parse(format!("bad grid header `{header}`")));
    };
    let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("`{s}`: {e}")));
    let int = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse(format!("`{s}`: {e}")));
    let spec = GridSpec::new(int(n)?, num(l)?, int(dims)?)?;
    let mut values = Vec::with_capacity(spec.len());
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        match (parts.next(), parts.next(), parts.next()) {
            (Some(re), Some(im), None) => values.push(Complex64::new(num(re)?, num(im)?)),
            _ => return Err(Error::Parse(format!("bad sample line `{line}`"))),
        }
    }
    GridFunction::new(spec, values)
}

pub fn write_binary(f: &GridFunction, mut out: impl Write) -> Result<()> {
    out.write_all(MAGIC)?;
    out.write_all(&(f.spec.n as u32).to_le_bytes())?;
    out.write_all(&f.spec.l.to_le_bytes())?;
    out.write_all(&(f.spec.dims as u32).to_le_bytes())?;
    for v in &f.values {
        out.write_all(&v.re.to_le_bytes())?;
        out.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary(mut input: impl Read) -> Result<GridFunction> {
    let mut magic = [0u8; 8];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Parse("not a grid file".into()));
    }
    let mut b4 = [0u8; 4];
    let mut b8 = [0u8; 8];
    input.read_exact(&mut b4)?;
    let n = u32::from_le_bytes(b4) as usize;
    input.read_exact(&mut b8)?;
    let l = f64::from_le_bytes(b8);
    input.read_exact(&mut b4)?;
    let dims = u32::from_le_bytes(b4) as usize;
    let spec = GridSpec::new(n, l, dims)?;
    let mut values = Vec::with_capacity(spec.len());
    for _ in 0..spec.len() {
        input.read_exact(&mut b8)?;
        let re = f64::from_le_bytes(b8);
        input.read_exact(&mut b8)?;
        values.push(Complex64::new(re, f64::from_le_bytes(b8)));
    }
    let mut rest = Vec::new();
    input.read_to_end(&mut rest)?;
    if !rest.is_empty() {
        return Err(Error::Parse(format!("{} trailing bytes after samples", rest.len())));
    }
    GridFunction::new(spec, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> GridFunction {
        let s = GridSpec::plane(8, 1.5).unwrap();
        GridFunction::from_fn2(s, |x, y| Complex64::new(x.sin() + 0.1, y * x / 3.0)).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let f = sample();
        let mut buf = Vec::new();
        write_text(&f, &mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("8 1.5 2\n"));
        assert_eq!(read_text(buf.as_slice()).unwrap(), f);
    }

    #[test]
    fn binary_round_trip() {
        let f = sample();
        let mut buf = Vec::new();
        write_binary(&f, &mut buf).unwrap();
        assert_eq!(buf.len(), 8 + 4 + 8 + 4 + 16 * 64);
        assert_eq!(read_binary(buf.as_slice()).unwrap(), f);
        buf.push(0);
        assert!(read_binary(buf.as_slice()).is_err());
        assert!(read_binary(&b"RFGRID02"[..]).is_err());
    }

    #[test]
    fn malformed_text() {
        assert!(read_text("8 1.0\n".as_bytes()).is_err());
        assert!(read_text("8 1.0 1\n1 2\n".as_bytes()).is_err());
        assert!(read_text("8 1.0 1\n1 2 3\n".as_bytes()).is_err());
    }
}
