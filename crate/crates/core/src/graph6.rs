//! graph6 encoding and decoding.
//!
//! Header-less lines, printable bytes offset by 63, upper-triangle bits in
//! column-major order, zero padding. Orders 63 and 64 use the `~`-prefixed
//! long form of the size field.

use thiserror::Error;

use crate::graph::{Graph, MAX_VERTICES};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 line")]
    Empty,
    #[error("byte {offset}: character {byte:#04x} outside graph6 range")]
    BadByte { offset: usize, byte: u8 },
    #[error("byte {offset}: truncated size field")]
    TruncatedHeader { offset: usize },
    #[error("vertex count {0} out of supported range (1..={MAX_VERTICES})")]
    UnsupportedOrder(u64),
    #[error("byte {offset}: bit body truncated (expected {expected} bytes)")]
    TruncatedBody { offset: usize, expected: usize },
    #[error("byte {offset}: trailing data after bit body")]
    TrailingData { offset: usize },
    #[error("byte {offset}: nonzero padding bits")]
    DirtyPadding { offset: usize },
}

fn sixbit(bytes: &[u8], offset: usize) -> Result<u64, Graph6Error> {
    match bytes.get(offset) {
        None => Err(Graph6Error::TruncatedHeader { offset }),
        Some(&b) if !(63..=126).contains(&b) => Err(Graph6Error::BadByte { offset, byte: b }),
        Some(&b) => Ok((b - 63) as u64),
    }
}

/// Parses one header-less graph6 line into a graph.
pub fn parse_graph6(line: &str) -> Result<Graph, Graph6Error> {
    let bytes = line.as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    let (n, mut offset) = if bytes[0] == b'~' {
        if bytes.get(1) == Some(&b'~') {
            // 8-byte size field: always beyond our 64-vertex cap.
            let mut n = 0u64;
            for i in 2..8 {
                n = n << 6 | sixbit(bytes, i)?;
            }
            return Err(Graph6Error::UnsupportedOrder(n));
        }
        let n = sixbit(bytes, 1)? << 12 | sixbit(bytes, 2)? << 6 | sixbit(bytes, 3)?;
        (n, 4)
    } else {
        (sixbit(bytes, 0)?, 1)
    };
    if n == 0 || n > MAX_VERTICES as u64 {
        return Err(Graph6Error::UnsupportedOrder(n));
    }
    let n = n as usize;

    let nbits = n * (n - 1) / 2;
    let nbytes = nbits.div_ceil(6);
    if bytes.len() < offset + nbytes {
        return Err(Graph6Error::TruncatedBody {
            offset: bytes.len(),
            expected: nbytes,
        });
    }
    if bytes.len() > offset + nbytes {
        return Err(Graph6Error::TrailingData {
            offset: offset + nbytes,
        });
    }

    let mut group = 0u64;
    let mut remaining = 0usize;
    // Column-major upper triangle: pair (i, j) for j = 1..n, i = 0..j.
    let mut rows = [0u64; MAX_VERTICES];
    for j in 1..n {
        for i in 0..j {
            if remaining == 0 {
                group = sixbit(bytes, offset)?;
                offset += 1;
                remaining = 6;
            }
            remaining -= 1;
            if group >> remaining & 1 == 1 {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
        }
    }
    if remaining > 0 && group & ((1 << remaining) - 1) != 0 {
        return Err(Graph6Error::DirtyPadding { offset: offset - 1 });
    }
    Ok(Graph::from_rows(n, &rows[..n]).expect("rows built symmetric"))
}

/// Encodes a graph as a canonical header-less graph6 line.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(63 + n as u8);
    } else {
        out.push(b'~');
        out.push(63 + (n >> 12 & 63) as u8);
        out.push(63 + (n >> 6 & 63) as u8);
        out.push(63 + (n & 63) as u8);
    }
    let mut group = 0u8;
    let mut filled = 0usize;
    for j in 1..n {
        for i in 0..j {
            group <<= 1;
            if g.has_edge(i, j) {
                group |= 1;
            }
            filled += 1;
            if filled == 6 {
                out.push(63 + group);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(63 + (group << (6 - filled)));
    }
    String::from_utf8(out).expect("printable range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    /// Reference encoder written straight off the format definition,
    /// independent of `to_graph6`'s byte handling.
    fn reference_encode(n: usize, edges: &[(usize, usize)]) -> String {
        let mut bits = Vec::new();
        for j in 1..n {
            for i in 0..j {
                let e = edges.iter().any(|&(a, b)| (a, b) == (i, j) || (a, b) == (j, i));
                bits.push(e as u8);
            }
        }
        while bits.len() % 6 != 0 {
            bits.push(0);
        }
        let mut s = String::new();
        assert!(n <= 62, "reference encoder only covers the short form");
        s.push((63 + n as u8) as char);
        for chunk in bits.chunks(6) {
            let v = chunk.iter().fold(0u8, |acc, &b| acc << 1 | b);
            s.push((63 + v) as char);
        }
        s
    }

    #[test]
    fn k1_is_at_sign() {
        assert_eq!(reference_encode(1, &[]), "@");
        let g = parse_graph6("@").unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(to_graph6(&g), "@");
    }

    #[test]
    fn k2_is_a_underscore() {
        assert_eq!(reference_encode(2, &[(0, 1)]), "A_");
        let g = parse_graph6("A_").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(to_graph6(&Graph::complete(2)), "A_");
    }

    #[test]
    fn c5_matches_reference() {
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)];
        let expect = reference_encode(5, &edges);
        assert_eq!(to_graph6(&Graph::cycle_graph(5)), expect);
        assert_eq!(parse_graph6(&expect).unwrap(), Graph::cycle_graph(5));
    }

    #[test]
    fn parse_then_encode_is_identity_on_canonical_lines() {
        for line in ["@", "A_", "A?", "Bw", "D?{", "DQc"] {
            let g = parse_graph6(line).unwrap();
            assert_eq!(to_graph6(&g), line, "line {line}");
        }
    }

    #[test]
    fn long_form_orders() {
        for n in [63usize, 64] {
            let g = Graph::cycle_graph(n);
            let s = to_graph6(&g);
            assert!(s.starts_with('~'));
            assert_eq!(parse_graph6(&s).unwrap(), g);
        }
    }

    #[test]
    fn errors_name_byte_offsets() {
        assert_eq!(parse_graph6(""), Err(Graph6Error::Empty));
        assert_eq!(
            parse_graph6("D"),
            Err(Graph6Error::TruncatedBody {
                offset: 1,
                expected: 2
            })
        );
        assert_eq!(
            parse_graph6("A_x"),
            Err(Graph6Error::TrailingData { offset: 2 })
        );
        let bad = parse_graph6("A\n");
        assert_eq!(
            bad,
            Err(Graph6Error::BadByte {
                offset: 1,
                byte: b'\n'
            })
        );
        // K2 with a dirty padding bit: 0b110000 instead of 0b100000.
        assert_eq!(
            parse_graph6("Ao"),
            Err(Graph6Error::DirtyPadding { offset: 1 })
        );
        assert_eq!(parse_graph6("?"), Err(Graph6Error::UnsupportedOrder(0)));
    }
}
