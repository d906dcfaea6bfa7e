//! Sample sets and their file formats.
//!
//! Two formats are supported for ±1 data:
//!
//! - CSV, one row per sample, entries `-1` or `1`, no header;
//! - a compact binary layout: the 4-byte magic `ISNG`, a little-endian
//!   `u16` version (currently 1), a `u16` reserved field, `u64` n and
//!   `u64` p, then one bit-packed row per sample of `ceil(p / 8)` bytes
//!   where bit `k % 8` of byte `k / 8` is set when variable `k` is `+1`.

use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub const BINARY_MAGIC: &[u8; 4] = b"ISNG";
pub const BINARY_VERSION: u16 = 1;

/// `n` observations of a `p`-dimensional vector over a finite alphabet.
///
/// Entries are stored as symbol indices into `alphabet`. For Ising data the
/// alphabet is `[-1, 1]`, so symbol 1 means spin `+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSet {
    n: usize,
    p: usize,
    alphabet: Vec<i32>,
    data: Vec<u8>,
}

impl SampleSet {
    pub const SPIN_ALPHABET: [i32; 2] = [-1, 1];

    /// Builds a sample set from row-major symbol indices.
    pub fn from_symbols(n: usize, p: usize, alphabet: Vec<i32>, data: Vec<u8>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("a sample set needs n >= 1".into()));
        }
        if alphabet.len() < 2 || alphabet.len() > 255 {
            return Err(Error::InvalidArgument(format!(
                "alphabet size {} outside [2, 255]",
                alphabet.len()
            )));
        }
        if data.len() != n * p {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for n = {n}, p = {p}, got {}",
                n * p,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|&&s| s as usize >= alphabet.len()) {
            return Err(Error::InvalidArgument(format!("symbol {bad} outside alphabet")));
        }
        Ok(SampleSet {
            n,
            p,
            alphabet,
            data,
        })
    }

    /// Builds an Ising sample set from row-major `±1` values.
    pub fn from_spins(n: usize, p: usize, spins: &[i8]) -> Result<Self> {
        let data = spins
            .iter()
            .map(|&s| match s {
                -1 => Ok(0u8),
                1 => Ok(1u8),
                other => Err(Error::InvalidArgument(format!("spin value {other} not in {{-1, +1}}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_symbols(n, p, Self::SPIN_ALPHABET.to_vec(), data)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn alphabet(&self) -> &[i32] {
        &self.alphabet
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_binary(&self) -> bool {
        self.alphabet.len() == 2
    }

    #[inline]
    pub fn symbol(&self, row: usize, var: usize) -> u8 {
        self.data[row * self.p + var]
    }

    pub fn value(&self, row: usize, var: usize) -> i32 {
        self.alphabet[self.symbol(row, var) as usize]
    }

    pub fn row(&self, row: usize) -> &[u8] {
        &self.data[row * self.p..(row + 1) * self.p]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.data.chunks_exact(self.p.max(1)).take(self.n)
    }

    /// Per-variable bitsets (`n` bits each) marking rows where the symbol is 1.
    pub fn indicator_bits(&self) -> Vec<Vec<u64>> {
        let words = self.n.div_ceil(64);
        let mut bits = vec![vec![0u64; words]; self.p];
        for (r, row) in self.rows().enumerate() {
            for (v, &s) in row.iter().enumerate() {
                if s == 1 {
                    bits[v][r / 64] |= 1u64 << (r % 64);
                }
            }
        }
        bits
    }

    /// Keeps the first `n` rows.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.n {
            return Err(Error::InvalidArgument(format!(
                "cannot keep {n} of {} samples",
                self.n
            )));
        }
        Ok(SampleSet {
            n,
            p: self.p,
            alphabet: self.alphabet.clone(),
            data: self.data[..n * self.p].to_vec(),
        })
    }

    fn require_spins(&self) -> Result<()> {
        if self.alphabet != Self::SPIN_ALPHABET {
            return Err(Error::InvalidArgument(
                "file formats are defined for ±1 samples only".into(),
            ));
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        self.require_spins()?;
        let mut w = BufWriter::new(writer);
        let mut line = String::with_capacity(3 * self.p);
        for row in self.rows() {
            line.clear();
            for (k, &s) in row.iter().enumerate() {
                if k > 0 {
                    line.push(',');
                }
                line.push_str(if s == 1 { "1" } else { "-1" });
            }
            line.push('\n');
            w.write_all(line.as_bytes())
                .map_err(|e| Error::io("<csv writer>", e))?;
        }
        w.flush().map_err(|e| Error::io("<csv writer>", e))
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut spins: Vec<i8> = Vec::new();
        let mut p: Option<usize> = None;
        let mut n = 0;
        for (lineno, line) in BufReader::new(reader).lines().enumerate() {
            let line = line.map_err(|e| Error::io("<csv reader>", e))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let before = spins.len();
            for field in line.split(',') {
                let v = match field.trim() {
                    "1" | "+1" => 1,
                    "-1" => -1,
                    other => {
                        return Err(Error::Format(format!(
                            "line {}: `{other}` is not a spin",
                            lineno + 1
                        )))
                    }
                };
                spins.push(v);
            }
            let width = spins.len() - before;
            match p {
                None => p = Some(width),
                Some(w) if w != width => {
                    return Err(Error::Format(format!(
                        "line {}: expected {w} columns, found {width}",
                        lineno + 1
                    )))
                }
                _ => {}
            }
            n += 1;
        }
        let p = p.ok_or_else(|| Error::Format("empty sample file".into()))?;
        Self::from_spins(n, p, &spins)
    }

    pub fn write_binary<W: Write>(&self, writer: W) -> Result<()> {
        self.require_spins()?;
        let mut w = BufWriter::new(writer);
        let io = |e| Error::io("<binary writer>", e);
        w.write_all(BINARY_MAGIC).map_err(io)?;
        w.write_all(&BINARY_VERSION.to_le_bytes()).map_err(io)?;
        w.write_all(&0u16.to_le_bytes()).map_err(io)?;
        w.write_all(&(self.n as u64).to_le_bytes()).map_err(io)?;
        w.write_all(&(self.p as u64).to_le_bytes()).map_err(io)?;
        let row_bytes = self.p.div_ceil(8);
        let mut buf = vec![0u8; row_bytes];
        for row in self.rows() {
            buf.fill(0);
            for (k, &s) in row.iter().enumerate() {
                if s == 1 {
                    buf[k / 8] |= 1 << (k % 8);
                }
            }
            w.write_all(&buf).map_err(io)?;
        }
        w.flush().map_err(io)
    }

    pub fn read_binary<R: Read>(reader: R) -> Result<Self> {
        let mut r = BufReader::new(reader);
        let mut header = [0u8; 24];
        r.read_exact(&mut header)
            .map_err(|_| Error::Format("truncated binary header".into()))?;
        if &header[0..4] != BINARY_MAGIC {
            return Err(Error::Format("bad magic in binary sample file".into()));
        }
        let version = u16::from_le_bytes([header[4], header[5]]);
        if version != BINARY_VERSION {
            return Err(Error::Format(format!("unsupported binary version {version}")));
        }
        let n = u64::from_le_bytes(header[8..16].try_into().unwrap()) as usize;
        let p = u64::from_le_bytes(header[16..24].try_into().unwrap()) as usize;
        let row_bytes = p.div_ceil(8);
        let mut buf = vec![0u8; row_bytes];
        let mut data = Vec::with_capacity(n * p);
        for _ in 0..n {
            r.read_exact(&mut buf)
                .map_err(|_| Error::Format("truncated binary body".into()))?;
            data.extend((0..p).map(|k| (buf[k / 8] >> (k % 8)) & 1));
        }
        Self::from_symbols(n, p, Self::SPIN_ALPHABET.to_vec(), data)
    }

    /// Writes CSV, or the binary layout when the extension is `.bin`.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        if is_binary_path(path) {
            self.write_binary(file)
        } else {
            self.write_csv(file)
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        if is_binary_path(path) {
            Self::read_binary(file)
        } else {
            Self::read_csv(file)
        }
    }
}

fn is_binary_path(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "bin")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn validation() {
        assert!(SampleSet::from_spins(0, 2, &[]).is_err());
        assert!(SampleSet::from_spins(1, 2, &[1, 0]).is_err());
        assert!(SampleSet::from_symbols(1, 2, vec![0, 1, 2], vec![0, 3]).is_err());
        assert!(SampleSet::from_symbols(2, 2, vec![0, 1], vec![0, 1, 1]).is_err());
    }

    #[test]
    fn csv_layout() {
        let s = SampleSet::from_spins(2, 3, &[1, -1, 1, -1, -1, 1]).unwrap();
        let mut out = Vec::new();
        s.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out.clone()).unwrap(), "1,-1,1\n-1,-1,1\n");
        assert_eq!(SampleSet::read_csv(&out[..]).unwrap(), s);
        assert!(SampleSet::read_csv(&b"1,-1\n1\n"[..]).is_err());
        assert!(SampleSet::read_csv(&b"1,2\n"[..]).is_err());
    }

    #[test]
    fn binary_header() {
        let s = SampleSet::from_spins(1, 10, &[1, 1, -1, -1, -1, -1, -1, -1, -1, 1]).unwrap();
        let mut out = Vec::new();
        s.write_binary(&mut out).unwrap();
        assert_eq!(&out[0..4], b"ISNG");
        assert_eq!(out.len(), 24 + 2);
        assert_eq!(out[24], 0b0000_0011);
        assert_eq!(out[25], 0b0000_0010);
        let mut bad = out.clone();
        bad[0] = b'X';
        assert!(SampleSet::read_binary(&bad[..]).is_err());
        assert!(SampleSet::read_binary(&out[..25]).is_err());
    }

    #[test]
    fn indicator_bits_mark_plus_spins() {
        let s = SampleSet::from_spins(3, 2, &[1, -1, -1, -1, 1, 1]).unwrap();
        let bits = s.indicator_bits();
        assert_eq!(bits[0], vec![0b101]);
        assert_eq!(bits[1], vec![0b100]);
    }

    proptest! {
        #[test]
        fn both_formats_round_trip(n in 1usize..40, p in 1usize..20, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let spins: Vec<i8> = (0..n * p).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
            let s = SampleSet::from_spins(n, p, &spins).unwrap();
            let mut csv = Vec::new();
            s.write_csv(&mut csv).unwrap();
            prop_assert_eq!(&SampleSet::read_csv(&csv[..]).unwrap(), &s);
            let mut bin = Vec::new();
            s.write_binary(&mut bin).unwrap();
            prop_assert_eq!(&SampleSet::read_binary(&bin[..]).unwrap(), &s);
        }
    }
}
