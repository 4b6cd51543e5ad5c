//! Red/blue colorings of all k-subsets and integer labelings of pairs, both
//! laid out in colex order, plus their text file formats.
//!
//! Coloring file (`ORC`):
//! ```text
//! ORC <k> <N>
//! <lowercase hex of the bit array>
//! ```
//! Bit `r` (colex rank) lives in byte `r / 8` at bit `7 - r % 8` (most
//! significant bit first); `1` is blue. Padding bits are zero.
//!
//! Labeling file (`ORL`):
//! ```text
//! ORL <N> <R>
//! <labels in colex order of pairs, space separated>
//! ```

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::colex;
use crate::error::{Error, ParseError, Result};
use crate::hypergraph::{Hypergraph, OrderedHypergraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }

    fn bit(self) -> bool {
        self == Color::Blue
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "red",
            Color::Blue => "blue",
        })
    }
}

impl FromStr for Color {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "red" => Ok(Color::Red),
            "blue" => Ok(Color::Blue),
            _ => Err(Error::invalid(format!("unknown color {s:?}"))),
        }
    }
}

/// Red/blue coloring of the k-subsets of `0..n`, one bit per colex rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperedgeColoring {
    k: usize,
    n: usize,
    bits: FixedBitSet,
}

impl HyperedgeColoring {
    fn size(k: usize, n: usize) -> Result<usize> {
        if k < 2 {
            return Err(Error::invalid(format!("coloring uniformity must be at least 2, got {k}")));
        }
        let total = colex::binomial(n as u64, k as u64)
            .filter(|&t| t <= usize::MAX as u64 / 2)
            .ok_or_else(|| Error::invalid(format!("C({n},{k}) too large for a coloring")))?;
        Ok(total as usize)
    }

    /// Every k-subset colored `color`.
    pub fn monochromatic(k: usize, n: usize, color: Color) -> Result<Self> {
        let mut bits = FixedBitSet::with_capacity(Self::size(k, n)?);
        if color == Color::Blue {
            bits.insert_range(..);
        }
        Ok(HyperedgeColoring { k, n, bits })
    }

    /// Builds a coloring from its bits in colex order (`true` = blue).
    pub fn from_bits(k: usize, n: usize, bits: FixedBitSet) -> Result<Self> {
        let size = Self::size(k, n)?;
        if bits.len() != size {
            return Err(Error::invalid(format!("expected {size} bits, got {}", bits.len())));
        }
        Ok(HyperedgeColoring { k, n, bits })
    }

    /// Colors subset of colex rank `r` by `f(r)`.
    pub fn from_fn(k: usize, n: usize, f: impl Fn(u64) -> Color) -> Result<Self> {
        let size = Self::size(k, n)?;
        let mut bits = FixedBitSet::with_capacity(size);
        for r in 0..size {
            bits.set(r, f(r as u64).bit());
        }
        Ok(HyperedgeColoring { k, n, bits })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of k-subsets, `C(n, k)`.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn color_of_rank(&self, r: u64) -> Color {
        if self.bits.contains(r as usize) {
            Color::Blue
        } else {
            Color::Red
        }
    }

    /// Color of a strictly increasing k-subset.
    pub fn color(&self, subset: &[usize]) -> Color {
        debug_assert_eq!(subset.len(), self.k);
        self.color_of_rank(colex::rank(subset))
    }

    pub fn set_rank(&mut self, r: u64, color: Color) {
        self.bits.set(r as usize, color.bit());
    }

    pub fn set(&mut self, subset: &[usize], color: Color) {
        self.set_rank(colex::rank(subset), color);
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn count(&self, color: Color) -> usize {
        let blue = self.bits.count_ones(..);
        match color {
            Color::Blue => blue,
            Color::Red => self.bits.len() - blue,
        }
    }

    pub fn view(&self, color: Color) -> ColorView<'_> {
        ColorView { coloring: self, color }
    }

    /// Swaps red and blue.
    pub fn swapped(&self) -> Self {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        HyperedgeColoring { k: self.k, n: self.n, bits }
    }

    /// Serializes to the `ORC` text format.
    pub fn to_orc(&self) -> String {
        let mut bytes = vec![0u8; self.bits.len().div_ceil(8)];
        for r in self.bits.ones() {
            bytes[r / 8] |= 0x80 >> (r % 8);
        }
        let mut out = format!("ORC {} {}\n", self.k, self.n);
        for b in bytes {
            out.push_str(&format!("{b:02x}"));
        }
        out.push('\n');
        out
    }

    pub fn from_orc(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| ParseError::BadHeader("empty input".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (k, n) = match fields.as_slice() {
            ["ORC", k, n] => (parse_field(k)?, parse_field(n)?),
            _ => return Err(ParseError::BadHeader(header.to_string()).into()),
        };
        let size = Self::size(k, n)?;
        let hex: String = lines.flat_map(|l| l.split_whitespace()).collect();
        if hex.len() != 2 * size.div_ceil(8) {
            return Err(ParseError::Malformed(format!(
                "expected {} hex digits for C({n},{k}) bits, got {}",
                2 * size.div_ceil(8),
                hex.len()
            ))
            .into());
        }
        let mut bits = FixedBitSet::with_capacity(size);
        for (i, pair) in hex.as_bytes().chunks(2).enumerate() {
            let s = std::str::from_utf8(pair).map_err(|e| ParseError::Malformed(e.to_string()))?;
            if s.bytes().any(|b| b.is_ascii_uppercase()) {
                return Err(ParseError::Malformed("hex digits must be lowercase".into()).into());
            }
            let byte = u8::from_str_radix(s, 16).map_err(|e| ParseError::Malformed(e.to_string()))?;
            for bit in 0..8 {
                if byte & (0x80 >> bit) != 0 {
                    let r = i * 8 + bit;
                    if r >= size {
                        return Err(ParseError::Malformed("non-zero padding bits".into()).into());
                    }
                    bits.insert(r);
                }
            }
        }
        Ok(HyperedgeColoring { k, n, bits })
    }
}

fn parse_field(s: &str) -> Result<usize> {
    s.parse().map_err(|_| ParseError::BadHeader(format!("not an integer: {s:?}")).into())
}

/// The hypergraph formed by the k-subsets of one color.
#[derive(Clone, Copy, Debug)]
pub struct ColorView<'a> {
    pub coloring: &'a HyperedgeColoring,
    pub color: Color,
}

impl ColorView<'_> {
    /// Materializes the view as an explicit hypergraph.
    pub fn to_hypergraph(&self) -> OrderedHypergraph {
        let edges = colex::subsets(self.coloring.n, self.coloring.k)
            .enumerate()
            .filter(|(r, _)| self.coloring.color_of_rank(*r as u64) == self.color)
            .map(|(_, s)| s)
            .collect();
        OrderedHypergraph::from_unsorted_unique(self.coloring.k, self.coloring.n, edges)
    }
}

impl Hypergraph for ColorView<'_> {
    fn uniformity(&self) -> usize {
        self.coloring.k
    }

    fn vertex_count(&self) -> usize {
        self.coloring.n
    }

    fn contains_edge(&self, edge: &[usize]) -> bool {
        self.coloring.color(edge) == self.color
    }
}

/// Labels in `1..=r` on the pairs of `0..n`, indexed by colex rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeLabeling {
    n: usize,
    r: u32,
    labels: Vec<u32>,
}

impl EdgeLabeling {
    pub fn new(n: usize, r: u32, labels: Vec<u32>) -> Result<Self> {
        let expected = n * n.saturating_sub(1) / 2;
        if labels.len() != expected {
            return Err(Error::invalid(format!("expected {expected} labels, got {}", labels.len())));
        }
        if r == 0 {
            return Err(Error::invalid("label range must be at least 1"));
        }
        if let Some(bad) = labels.iter().find(|&&l| l == 0 || l > r) {
            return Err(Error::invalid(format!("label {bad} outside 1..={r}")));
        }
        Ok(EdgeLabeling { n, r, labels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn range(&self) -> u32 {
        self.r
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Label of the pair `{u, v}`, `u != v`, in either order.
    pub fn label(&self, u: usize, v: usize) -> u32 {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.labels[b * (b - 1) / 2 + a]
    }

    pub fn to_orl(&self) -> String {
        let body: Vec<String> = self.labels.iter().map(u32::to_string).collect();
        format!("ORL {} {}\n{}\n", self.n, self.r, body.join(" "))
    }

    pub fn from_orl(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| ParseError::BadHeader("empty input".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (n, r) = match fields.as_slice() {
            ["ORL", n, r] => (parse_field(n)?, parse_field(r)?),
            _ => return Err(ParseError::BadHeader(header.to_string()).into()),
        };
        let labels = lines
            .flat_map(|l| l.split_whitespace())
            .map(|t| t.parse::<u32>().map_err(|_| ParseError::Malformed(format!("bad label {t:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, u32::try_from(r).map_err(|_| ParseError::BadHeader("label range".into()))?, labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orc_layout_is_msb_first() {
        let mut c = HyperedgeColoring::monochromatic(2, 4, Color::Red).unwrap();
        // ranks: 01=0 02=1 12=2 03=3 13=4 23=5
        c.set(&[0, 1], Color::Blue);
        c.set(&[2, 3], Color::Blue);
        assert_eq!(c.to_orc(), "ORC 2 4\n84\n");
        assert_eq!(HyperedgeColoring::from_orc(&c.to_orc()).unwrap(), c);
    }

    #[test]
    fn orc_rejects_bad_input() {
        assert!(HyperedgeColoring::from_orc("ORX 2 4\n84\n").is_err());
        assert!(HyperedgeColoring::from_orc("ORC 2 4\n8\n").is_err());
        assert!(HyperedgeColoring::from_orc("ORC 2 4\n85\n").is_err()); // padding bit
        assert!(HyperedgeColoring::from_orc("ORC 2 4\n8A\n").is_err());
    }

    #[test]
    fn view_matches_colors() {
        let mut c = HyperedgeColoring::monochromatic(3, 5, Color::Red).unwrap();
        c.set(&[0, 2, 4], Color::Blue);
        let blue = c.view(Color::Blue).to_hypergraph();
        assert_eq!(blue.edges(), &[vec![0, 2, 4]]);
        assert_eq!(c.view(Color::Red).to_hypergraph().edge_count(), 9);
        assert_eq!(c.count(Color::Blue), 1);
        assert_eq!(c.swapped().count(Color::Blue), 9);
    }

    #[test]
    fn labeling_round_trip() {
        let l = EdgeLabeling::new(3, 2, vec![1, 2, 2]).unwrap();
        assert_eq!(l.label(0, 1), 1);
        assert_eq!(l.label(2, 0), 2);
        assert_eq!(l.to_orl(), "ORL 3 2\n1 2 2\n");
        assert_eq!(EdgeLabeling::from_orl(&l.to_orl()).unwrap(), l);
        assert!(EdgeLabeling::new(3, 2, vec![1, 3, 2]).is_err());
        assert!(EdgeLabeling::from_orl("ORL 3 2\n1 2\n").is_err());
    }
}
