//! Plain-text and binary adjacency exports, with matching readers.

use serde::{Deserialize, Serialize};

use super::{BitMatrix, CayleyGraph, GraphSpec};
use crate::error::{Error, Result};

/// Header line of the bit-matrix dump.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DumpHeader {
    pub p: u64,
    pub s: u32,
    pub m: u32,
    pub ell: u32,
    pub complemented: bool,
    pub n: usize,
    pub k: usize,
}

impl DumpHeader {
    pub fn spec(&self) -> GraphSpec {
        GraphSpec { p: self.p, s: self.s, m: self.m, ell: self.ell, complemented: self.complemented }
    }
}

/// One `i j` line per edge with `i < j`.
pub fn edge_list(g: &CayleyGraph) -> String {
    let mut out = String::new();
    for (i, j) in g.adjacency().edges() {
        out.push_str(&format!("{i} {j}\n"));
    }
    out
}

/// DIMACS `p edge` format with 1-based vertices.
pub fn dimacs(g: &CayleyGraph) -> String {
    let a = g.adjacency();
    let mut out = format!("c {}\np edge {} {}\n", g.spec().label(), a.n(), a.edge_count());
    for (i, j) in a.edges() {
        out.push_str(&format!("e {} {}\n", i + 1, j + 1));
    }
    out
}

/// A JSON header line followed by the rows, each packed into
/// `ceil(n/8)` bytes with bit `j` of a row at bit `j % 8` of byte `j / 8`.
pub fn bit_dump(g: &CayleyGraph) -> Vec<u8> {
    let a = g.adjacency();
    let s = g.spec();
    let header =
        DumpHeader { p: s.p, s: s.s, m: s.m, ell: s.ell, complemented: s.complemented, n: a.n(), k: g.degree() };
    let mut out = serde_json::to_vec(&header).expect("header serializes");
    out.push(b'\n');
    let row_bytes = a.n().div_ceil(8);
    for i in 0..a.n() {
        let bytes: Vec<u8> = a.row(i).iter().flat_map(|w| w.to_le_bytes()).collect();
        out.extend_from_slice(&bytes[..row_bytes]);
    }
    out
}

pub fn read_bit_dump(data: &[u8]) -> Result<(DumpHeader, BitMatrix)> {
    let nl = data.iter().position(|&b| b == b'\n').ok_or_else(|| Error::Parse("missing header line".into()))?;
    let header: DumpHeader = serde_json::from_slice(&data[..nl]).map_err(|e| Error::Parse(e.to_string()))?;
    let body = &data[nl + 1..];
    let row_bytes = header.n.div_ceil(8);
    if body.len() != row_bytes * header.n {
        return Err(Error::Parse(format!("expected {} body bytes, found {}", row_bytes * header.n, body.len())));
    }
    let mut a = BitMatrix::new(header.n);
    for (i, row) in body.chunks(row_bytes).enumerate() {
        for j in (0..header.n).filter(|&j| row[j / 8] >> (j % 8) & 1 == 1) {
            a.set(i, j, true);
        }
    }
    Ok((header, a))
}

pub fn read_edge_list(text: &str, n: usize) -> Result<BitMatrix> {
    let mut a = BitMatrix::new(n);
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let (i, j) = parse_pair(line.split_whitespace(), n, 0)?;
        a.set_sym(i, j, true);
    }
    Ok(a)
}

pub fn read_dimacs(text: &str) -> Result<BitMatrix> {
    let mut a: Option<BitMatrix> = None;
    for line in text.lines() {
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("p") => {
                let n = tok
                    .nth(1)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("bad problem line {line:?}")))?;
                a = Some(BitMatrix::new(n));
            }
            Some("e") => {
                let m = a.as_mut().ok_or_else(|| Error::Parse("edge before problem line".into()))?;
                let (i, j) = parse_pair(tok, m.n(), 1)?;
                m.set_sym(i, j, true);
            }
            _ => {}
        }
    }
    a.ok_or_else(|| Error::Parse("missing problem line".into()))
}

fn parse_pair<'a>(mut tok: impl Iterator<Item = &'a str>, n: usize, base: usize) -> Result<(usize, usize)> {
    let mut next = || -> Result<usize> {
        let v: usize = tok.next().and_then(|t| t.parse().ok()).ok_or_else(|| Error::Parse("bad vertex".into()))?;
        v.checked_sub(base).filter(|&v| v < n).ok_or_else(|| Error::Parse(format!("vertex {v} out of range")))
    };
    Ok((next()?, next()?))
}
