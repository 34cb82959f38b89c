//! Matrix dump format used to exchange operators and states.
//!
//! Text layout:
//!
//! ```text
//! # optional comment lines
//! dim <rows> <cols>
//! <re> <im> <re> <im> ...      one line per row
//! ```
//!
//! Binary layout (little endian): the 8-byte magic `NHOPDUMP`, `u64` rows,
//! `u64` cols, then `2 * rows * cols` `f64` values in row-major order, real
//! part first.

use std::io::{BufRead, Read, Write};

use crate::error::{Error, Result};
use crate::operator::{c64, DenseOperator};

const MAGIC: &[u8; 8] = b"NHOPDUMP";

/// Row-major complex matrix, not necessarily square.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixDump {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<c64>,
}

impl MatrixDump {
    pub fn from_operator(op: &DenseOperator) -> Self {
        let n = op.dim();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(op.get(i, j));
            }
        }
        Self { rows: n, cols: n, data }
    }

    pub fn from_vector(v: &[c64]) -> Self {
        Self { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn into_operator(self) -> Result<DenseOperator> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        Ok(DenseOperator::from_fn(n, |i, j| self.data[i * n + j]))
    }

    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "dim {} {}", self.rows, self.cols)?;
        for row in self.data.chunks(self.cols.max(1)) {
            let line: Vec<String> = row.iter().map(|z| format!("{:.16e} {:.16e}", z.re, z.im)).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let (rows, cols) = loop {
            let line = lines.next().ok_or_else(|| Error::Format("missing header".into()))??;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                ["dim", r, c] => break (parse_usize(r)?, parse_usize(c)?),
                ["dim", n] => {
                    let n = parse_usize(n)?;
                    break (n, n);
                }
                _ => return Err(Error::Format(format!("bad header `{line}`"))),
            }
        };
        let mut values = Vec::with_capacity(2 * rows * cols);
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            for tok in line.split_whitespace() {
                values.push(tok.parse::<f64>().map_err(|e| Error::Format(format!("`{tok}`: {e}")))?);
            }
        }
        if values.len() != 2 * rows * cols {
            return Err(Error::Format(format!("expected {} numbers, found {}", 2 * rows * cols, values.len())));
        }
        let data = values.chunks(2).map(|p| c64::new(p[0], p[1])).collect();
        Ok(Self { rows, cols, data })
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&(self.rows as u64).to_le_bytes())?;
        w.write_all(&(self.cols as u64).to_le_bytes())?;
        for z in &self.data {
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let mut word = [0u8; 8];
        r.read_exact(&mut word)?;
        let rows = u64::from_le_bytes(word) as usize;
        r.read_exact(&mut word)?;
        let cols = u64::from_le_bytes(word) as usize;
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            r.read_exact(&mut word)?;
            let re = f64::from_le_bytes(word);
            r.read_exact(&mut word)?;
            let im = f64::from_le_bytes(word);
            data.push(c64::new(re, im));
        }
        Ok(Self { rows, cols, data })
    }
}

fn parse_usize(s: &str) -> Result<usize> {
    s.parse().map_err(|e| Error::Format(format!("`{s}`: {e}")))
}
