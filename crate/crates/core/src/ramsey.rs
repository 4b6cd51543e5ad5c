//! Exact ordered Ramsey numbers of small patterns by exhaustive search.
//!
//! The search colors k-subsets in colex order, one decision bit each. After
//! coloring the subset of rank `r`, it inspects only pattern copies whose
//! largest edge (in colex order) has rank `r`; their other edges are packed
//! into a 128-bit mask, so a conflict test is one AND and one compare.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::colex;
use crate::coloring::{Color, HyperedgeColoring};
use crate::error::{Error, Result};
use crate::hypergraph::OrderedHypergraph;

/// Hard limit on decision bits, set by the 128-bit masks.
pub const MAX_BITS: u32 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest `C(N, k)` the search accepts.
    pub max_bits: u32,
    /// Leading decision bits enumerated up front and searched in parallel.
    pub split_bits: u32,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_bits: 40, split_bits: 6 }
    }
}

/// Copies of one pattern, grouped by the rank of their largest edge.
struct Closures {
    by_rank: Vec<Vec<u128>>,
    /// Some copy has no edges at all, so the pattern is always present.
    unavoidable: bool,
}

impl Closures {
    fn new(pattern: &OrderedHypergraph, n: usize, bits: usize) -> Self {
        let mut by_rank = vec![Vec::new(); bits];
        if pattern.n() > n {
            return Closures { by_rank, unavoidable: false };
        }
        if pattern.edge_count() == 0 {
            return Closures { by_rank, unavoidable: true };
        }
        let mut image = Vec::with_capacity(pattern.k());
        for s in colex::subsets(n, pattern.n()) {
            let mut ranks: Vec<u64> = pattern
                .edges()
                .iter()
                .map(|e| {
                    image.clear();
                    image.extend(e.iter().map(|&p| s[p]));
                    colex::rank(&image)
                })
                .collect();
            ranks.sort_unstable();
            let top = ranks.pop().unwrap();
            let mask = ranks.iter().fold(0u128, |m, &r| m | 1u128 << r);
            by_rank[top as usize].push(mask);
        }
        for masks in &mut by_rank {
            masks.sort_unstable();
            masks.dedup();
        }
        Closures { by_rank, unavoidable: false }
    }
}

struct Search {
    bits: usize,
    blue: Closures,
    red: Closures,
    /// First subset forced red (color-swap symmetry of the diagonal case).
    fix_first: bool,
}

impl Search {
    /// Whether coloring rank `r` with `color` closes a forbidden copy.
    fn conflict(&self, assigned: u128, r: usize, color: Color) -> bool {
        match color {
            Color::Blue => {
                let with = assigned | 1u128 << r;
                self.blue.by_rank[r].iter().any(|&m| with & m == m)
            }
            Color::Red => self.red.by_rank[r].iter().any(|&m| assigned & m == 0),
        }
    }

    fn options(&self, r: usize) -> &'static [Color] {
        if r == 0 && self.fix_first {
            &[Color::Red]
        } else {
            &[Color::Red, Color::Blue]
        }
    }

    fn dfs(&self, r: usize, assigned: u128) -> Option<u128> {
        if r == self.bits {
            return Some(assigned);
        }
        for &color in self.options(r) {
            if !self.conflict(assigned, r, color) {
                let next = if color == Color::Blue { assigned | 1u128 << r } else { assigned };
                if let Some(done) = self.dfs(r + 1, next) {
                    return Some(done);
                }
            }
        }
        None
    }

    /// Replays a prefix of `len` bits; `None` if it is inconsistent.
    fn prefix(&self, bits: u64, len: usize) -> Option<u128> {
        let mut assigned = 0u128;
        for r in 0..len {
            let color = if bits >> (len - 1 - r) & 1 == 1 { Color::Blue } else { Color::Red };
            if !self.options(r).contains(&color) || self.conflict(assigned, r, color) {
                return None;
            }
            if color == Color::Blue {
                assigned |= 1u128 << r;
            }
        }
        Some(assigned)
    }
}

/// A coloring of all k-subsets of `0..n` with no blue copy of `blue` and no
/// red copy of `red`, or `None` when the exhausted search proves there is none.
/// The result is the first such coloring in the red-before-blue depth-first
/// order, independent of thread count.
pub fn find_avoiding_coloring(
    blue: &OrderedHypergraph,
    red: &OrderedHypergraph,
    n: usize,
    config: SearchConfig,
) -> Result<Option<HyperedgeColoring>> {
    let k = blue.k();
    if red.k() != k {
        return Err(Error::invalid(format!("patterns differ in uniformity: {} and {}", k, red.k())));
    }
    if config.max_bits > MAX_BITS {
        return Err(Error::invalid(format!("max_bits may not exceed {MAX_BITS}")));
    }
    let bits = colex::binomial(n as u64, k as u64).unwrap_or(u64::MAX);
    if bits > u64::from(config.max_bits) {
        return Err(Error::CapExceeded { what: "ramsey decision bits", size: bits, cap: u64::from(config.max_bits) });
    }
    let bits = bits as usize;
    let search = Search {
        bits,
        blue: Closures::new(blue, n, bits),
        red: Closures::new(red, n, bits),
        fix_first: blue == red,
    };
    if search.blue.unavoidable || search.red.unavoidable {
        return Ok(None);
    }
    let split = (config.split_bits as usize).min(bits);
    let found = (0..1u64 << split)
        .into_par_iter()
        .find_map_first(|p| search.prefix(p, split).and_then(|a| search.dfs(split, a)));
    let Some(assigned) = found else { return Ok(None) };
    let mut set = FixedBitSet::with_capacity(bits);
    for r in 0..bits {
        set.set(r, assigned >> r & 1 == 1);
    }
    Ok(Some(HyperedgeColoring::from_bits(k, n, set)?))
}

/// Outcome of [`ordered_ramsey_exact`].
#[derive(Clone, Debug, PartialEq)]
pub enum RamseyResult {
    /// The exact value, with an avoiding coloring on `value - 1` vertices when one exists.
    Value { value: usize, certificate: Option<HyperedgeColoring> },
    /// Every `N` up to the cap admits an avoiding coloring.
    LowerBound { at_least: usize, certificate: Option<HyperedgeColoring> },
}

impl RamseyResult {
    pub fn value(&self) -> Option<usize> {
        match self {
            RamseyResult::Value { value, .. } => Some(*value),
            RamseyResult::LowerBound { .. } => None,
        }
    }

    pub fn certificate(&self) -> Option<&HyperedgeColoring> {
        match self {
            RamseyResult::Value { certificate, .. } | RamseyResult::LowerBound { certificate, .. } => {
                certificate.as_ref()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RamseyQuery {
    pub blue: OrderedHypergraph,
    pub red: OrderedHypergraph,
    pub n_cap: usize,
}

/// Least `N <= n_cap` with no avoiding coloring, probing `N = 1, 2, ...`.
pub fn ordered_ramsey_exact(query: &RamseyQuery, config: SearchConfig) -> Result<RamseyResult> {
    let mut certificate = None;
    for n in 1..=query.n_cap {
        match find_avoiding_coloring(&query.blue, &query.red, n, config)? {
            Some(c) => certificate = Some(c),
            None => return Ok(RamseyResult::Value { value: n, certificate }),
        }
    }
    Ok(RamseyResult::LowerBound { at_least: query.n_cap + 1, certificate })
}
