//! graph6 encoding: size header then the upper triangle packed six bits per
//! byte, column by column (`x(0,1) x(0,2) x(1,2) x(0,3) ...`), each byte
//! offset by 63.

use crate::error::{Error, Result};
use crate::graph::{bit, Graph, MAX_VERTICES};

const OFFSET: u8 = 63;

fn perr(offset: usize, reason: impl Into<String>) -> Error {
    Error::Graph6 {
        offset,
        reason: reason.into(),
    }
}

pub fn emit_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::with_capacity(4 + (n * n) / 12);
    if n <= 62 {
        out.push(n as u8 + OFFSET);
    } else {
        out.push(b'~');
        out.push(((n >> 12) & 0x3f) as u8 + OFFSET);
        out.push(((n >> 6) & 0x3f) as u8 + OFFSET);
        out.push((n & 0x3f) as u8 + OFFSET);
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + OFFSET);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + OFFSET);
    }
    // all bytes are in 63..=126
    String::from_utf8(out).expect("graph6 output is ASCII")
}

pub fn parse_graph6(text: &[u8]) -> Result<Graph> {
    let sextet = |pos: usize| -> Result<u8> {
        match text.get(pos) {
            None => Err(perr(pos, "unexpected end of input")),
            Some(&b) if (63..=126).contains(&b) => Ok(b - OFFSET),
            Some(&b) => Err(perr(pos, format!("byte 0x{b:02x} outside 63..=126"))),
        }
    };

    let (n, mut pos) = match text.first() {
        None => return Err(perr(0, "empty input")),
        Some(b'~') => {
            if text.get(1) == Some(&b'~') {
                return Err(perr(1, "8-byte size header: n exceeds 64"));
            }
            let n = (0..3).try_fold(0usize, |acc, k| Ok::<_, Error>((acc << 6) | sextet(1 + k)? as usize))?;
            if n <= 62 {
                return Err(perr(1, format!("long size header used for n = {n} <= 62")));
            }
            (n, 4)
        }
        Some(_) => (sextet(0)? as usize, 1),
    };
    if n == 0 || n > MAX_VERTICES {
        return Err(perr(0, format!("vertex count {n} outside 1..={MAX_VERTICES}")));
    }

    let total_bits = n * (n - 1) / 2;
    let body_len = total_bits.div_ceil(6);
    let mut rows = vec![0u64; n];
    let mut k = 0;
    let (mut i, mut j) = (0usize, 1usize);
    for _ in 0..body_len {
        let byte = sextet(pos)?;
        for shift in (0..6).rev() {
            let set = (byte >> shift) & 1 == 1;
            if k < total_bits {
                if set {
                    rows[i] |= bit(j);
                    rows[j] |= bit(i);
                }
                i += 1;
                if i == j {
                    i = 0;
                    j += 1;
                }
                k += 1;
            } else if set {
                return Err(perr(pos, "non-zero padding bit"));
            }
        }
        pos += 1;
    }
    if pos != text.len() {
        return Err(perr(pos, format!("{} trailing byte(s)", text.len() - pos)));
    }
    Graph::from_rows(rows)
}

pub fn parse_graph6_str(text: &str) -> Result<Graph> {
    parse_graph6(text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_encoding_is_single_vertex() {
        let g = parse_graph6(b"@").unwrap();
        assert_eq!(g, Graph::empty(1).unwrap());
        assert_eq!(emit_graph6(&g), "@");
    }

    #[test]
    fn star_example() {
        // bits 0000 0011 11: vertex 4 joined to 0..3
        let g = parse_graph6(b"D?{").unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(g, Graph::from_edges(5, (0..4).map(|v| (v, 4))).unwrap());
        assert_eq!(emit_graph6(&g), "D?{");
    }

    #[test]
    fn known_encodings() {
        assert_eq!(emit_graph6(&Graph::complete(3).unwrap()), "Bw");
        assert_eq!(emit_graph6(&Graph::path(3).unwrap()), "Bg");
        // matches the encoder used by petgraph's graph6 tests
        let g = Graph::from_edges(5, [(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(emit_graph6(&g), "DQc");
    }

    #[test]
    fn truncated_input() {
        let err = parse_graph6(b"B").unwrap_err();
        assert_eq!(
            err,
            Error::Graph6 {
                offset: 1,
                reason: "unexpected end of input".into()
            }
        );
    }

    #[test]
    fn malformed_inputs_name_offsets() {
        assert!(matches!(parse_graph6(b""), Err(Error::Graph6 { offset: 0, .. })));
        assert!(matches!(parse_graph6(b"?"), Err(Error::Graph6 { offset: 0, .. })));
        assert!(matches!(parse_graph6(b"Bw?"), Err(Error::Graph6 { offset: 2, .. })));
        assert!(matches!(parse_graph6(b"B "), Err(Error::Graph6 { offset: 1, .. })));
        // K_3 body is 3 bits; the low padding bits must be zero
        assert!(matches!(parse_graph6(b"Bx"), Err(Error::Graph6 { offset: 1, .. })));
        assert!(matches!(parse_graph6(b"~~??"), Err(Error::Graph6 { offset: 1, .. })));
        assert!(parse_graph6(b"\x7f").is_err());
    }

    #[test]
    fn large_orders_use_long_header() {
        for n in [62, 63, 64] {
            let g = Graph::cycle(n).unwrap();
            let s = emit_graph6(&g);
            assert_eq!(s.starts_with('~'), n > 62);
            assert_eq!(parse_graph6_str(&s).unwrap(), g);
        }
        // n = 65 is representable in graph6 but not here
        let text = [b'~', 63, 64, 64];
        assert!(matches!(parse_graph6(&text), Err(Error::Graph6 { offset: 0, .. })));
    }
}
