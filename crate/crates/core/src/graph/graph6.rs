//! graph6 encoding (McKay's compact ASCII format for undirected graphs).
//!
//! Layout: an optional `>>graph6<<` header, the vertex count `N(n)`, then
//! the upper triangle of the adjacency matrix in column order
//! (`x(0,1) x(0,2) x(1,2) x(0,3) …`), packed six bits per byte, each byte
//! offset by 63.

use thiserror::Error;

use super::Graph;

const HEADER: &[u8] = b">>graph6<<";
const MAX_N: usize = (1 << 36) - 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("unexpected end of input at byte {offset}")]
    UnexpectedEnd { offset: usize },
    #[error("byte {byte:#04x} at offset {offset} is outside the graph6 range 63..=126")]
    InvalidByte { offset: usize, byte: u8 },
    #[error("non-zero padding bits in final byte at offset {offset}")]
    NonZeroPadding { offset: usize },
    #[error("trailing data at byte {offset}")]
    TrailingData { offset: usize },
    #[error("graph too large for graph6: {0} vertices")]
    TooLarge(usize),
}

fn encode_n(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    } else {
        out.push(126);
        out.push(126);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
}

/// graph6 bytes for `g`, without header or trailing newline.
pub fn to_graph6(g: &Graph) -> Vec<u8> {
    let n = g.n();
    assert!(n <= MAX_N, "graph too large for graph6");
    let mut out = Vec::with_capacity(8 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    encode_n(n, &mut out);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn next6(&mut self) -> Result<u8, Graph6Error> {
        let byte = *self
            .bytes
            .get(self.pos)
            .ok_or(Graph6Error::UnexpectedEnd { offset: self.pos })?;
        if !(63..=126).contains(&byte) {
            return Err(Graph6Error::InvalidByte { offset: self.pos, byte });
        }
        self.pos += 1;
        Ok(byte - 63)
    }

    fn read_n(&mut self) -> Result<usize, Graph6Error> {
        let first = self.next6()?;
        if first < 63 {
            return Ok(first as usize);
        }
        if self.bytes.get(self.pos) == Some(&126) {
            self.pos += 1;
            let mut n = 0usize;
            for _ in 0..6 {
                n = (n << 6) | self.next6()? as usize;
            }
            Ok(n)
        } else {
            let mut n = 0usize;
            for _ in 0..3 {
                n = (n << 6) | self.next6()? as usize;
            }
            Ok(n)
        }
    }
}

/// Parses one graph6 record. A leading `>>graph6<<` header and a single
/// trailing newline (`\n` or `\r\n`) are accepted.
pub fn from_graph6(bytes: &[u8]) -> Result<Graph, Graph6Error> {
    let mut end = bytes.len();
    if bytes[..end].ends_with(b"\n") {
        end -= 1;
        if bytes[..end].ends_with(b"\r") {
            end -= 1;
        }
    }
    let start = if bytes.starts_with(HEADER) { HEADER.len() } else { 0 };
    let mut r = Reader {
        bytes: &bytes[..end],
        pos: start,
    };
    let n = r.read_n()?;
    if n > 1 << 16 {
        return Err(Graph6Error::TooLarge(n));
    }
    let total_bits = n * n.saturating_sub(1) / 2;
    let mut g = Graph::new(n);
    let mut bit_index = 0;
    let mut chunk = 0u8;
    let mut left = 0;
    for j in 1..n {
        for i in 0..j {
            if left == 0 {
                chunk = r.next6()?;
                left = 6;
            }
            left -= 1;
            if chunk >> left & 1 == 1 {
                g.add_edge(i, j);
            }
            bit_index += 1;
        }
    }
    debug_assert_eq!(bit_index, total_bits);
    if left > 0 && chunk & ((1 << left) - 1) != 0 {
        return Err(Graph6Error::NonZeroPadding { offset: r.pos - 1 });
    }
    if r.pos != end {
        return Err(Graph6Error::TrailingData { offset: r.pos });
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle};
    use proptest::prelude::*;

    #[test]
    fn empty_graph_is_one_byte() {
        assert_eq!(to_graph6(&Graph::new(0)), b"?");
        assert_eq!(from_graph6(b"?").unwrap(), Graph::new(0));
    }

    #[test]
    fn c5_standard_code() {
        // C5 with edges 01 12 23 34 04 -> bits 1 0 1 0 0 1 1 0 0 1 -> "Dhc"
        let code = to_graph6(&cycle(5));
        assert_eq!(code, b"Dhc");
        assert_eq!(from_graph6(&code).unwrap(), cycle(5));
        assert_eq!(from_graph6(b">>graph6<<Dhc\n").unwrap(), cycle(5));
    }

    #[test]
    fn known_codes() {
        assert_eq!(to_graph6(&complete(4)), b"C~");
        assert_eq!(to_graph6(&Graph::new(1)), b"@");
    }

    #[test]
    fn large_n_uses_extended_size() {
        let mut g = Graph::new(100);
        g.add_edge(0, 99);
        g.add_edge(50, 51);
        let code = to_graph6(&g);
        assert_eq!(code[0], 126);
        assert_eq!(from_graph6(&code).unwrap(), g);
    }

    #[test]
    fn decode_errors_carry_offsets() {
        assert_eq!(from_graph6(b""), Err(Graph6Error::UnexpectedEnd { offset: 0 }));
        assert_eq!(from_graph6(b"Dh"), Err(Graph6Error::UnexpectedEnd { offset: 2 }));
        assert_eq!(
            from_graph6(b"D h"),
            Err(Graph6Error::InvalidByte { offset: 1, byte: b' ' })
        );
        assert_eq!(from_graph6(b"Dhcc"), Err(Graph6Error::TrailingData { offset: 3 }));
        // C5 needs 10 bits; the last two bits of the second byte are padding
        assert_eq!(from_graph6(b"Dhd"), Err(Graph6Error::NonZeroPadding { offset: 2 }));
    }

    proptest! {
        #[test]
        fn round_trip(n in 0usize..70, seed in any::<u64>()) {
            let mut g = Graph::new(n);
            let mut state = seed | 1;
            for u in 0..n {
                for v in u + 1..n {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    if state % 3 == 0 {
                        g.add_edge(u, v);
                    }
                }
            }
            prop_assert_eq!(from_graph6(&to_graph6(&g)).unwrap(), g);
        }
    }
}
