//! Order-preserving (non-induced) subhypergraph search.
//!
//! Pattern vertices are assigned left to right to strictly increasing host
//! vertices. An edge is checked as soon as its last pattern vertex is placed,
//! and a branch is cut when too few host vertices remain for the rest of the
//! pattern. Once every edge has been checked, the remaining pattern vertices
//! are unconstrained, so counting finishes with a binomial instead of
//! enumerating them.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::colex;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, OrderedHypergraph};

/// `map[p]` is the host image of pattern vertex `p`; strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub map: Vec<usize>,
}

impl Embedding {
    /// Re-checks order preservation and every pattern edge against the host.
    pub fn verify<H: Hypergraph + ?Sized>(&self, host: &H, pattern: &OrderedHypergraph) -> bool {
        self.map.len() == pattern.n()
            && self.map.windows(2).all(|w| w[0] < w[1])
            && self.map.last().is_none_or(|&v| v < host.vertex_count())
            && pattern.edges().iter().all(|e| {
                let image: Vec<usize> = e.iter().map(|&p| self.map[p]).collect();
                host.contains_edge(&image)
            })
    }
}

struct Plan<'a> {
    pattern: &'a OrderedHypergraph,
    /// edges grouped by their largest pattern vertex
    closing: Vec<Vec<&'a [usize]>>,
    /// pattern vertices needing search: 0..=last_constrained
    depth: usize,
}

impl<'a> Plan<'a> {
    fn new<H: Hypergraph + ?Sized>(host: &H, pattern: &'a OrderedHypergraph) -> Result<Self> {
        if host.uniformity() != pattern.k() {
            return Err(Error::invalid(format!(
                "uniformity mismatch: host k={}, pattern k={}",
                host.uniformity(),
                pattern.k()
            )));
        }
        let mut closing = vec![Vec::new(); pattern.n()];
        for e in pattern.edges() {
            closing[*e.last().unwrap()].push(e.as_slice());
        }
        let depth = pattern.edges().iter().map(|e| e.last().unwrap() + 1).max().unwrap_or(0);
        Ok(Plan { pattern, closing, depth })
    }

    fn edges_ok<H: Hypergraph + ?Sized>(&self, host: &H, p: usize, map: &[usize], image: &mut Vec<usize>) -> bool {
        self.closing[p].iter().all(|e| {
            image.clear();
            image.extend(e.iter().map(|&q| map[q]));
            host.contains_edge(image)
        })
    }

    /// Host vertices still available for pattern vertex `p` given the previous image.
    fn range(&self, host_n: usize, p: usize, prev: Option<usize>) -> std::ops::Range<usize> {
        let lo = prev.map_or(0, |v| v + 1);
        let hi = (host_n + p + 1).saturating_sub(self.pattern.n());
        lo..hi.max(lo)
    }

    fn find_from<H: Hypergraph + ?Sized>(&self, host: &H, map: &mut Vec<usize>, image: &mut Vec<usize>) -> bool {
        let p = map.len();
        if p == self.depth {
            let n = self.pattern.n();
            let start = map.last().map_or(0, |v| v + 1);
            map.extend(start..start + (n - p));
            return true;
        }
        for v in self.range(host.vertex_count(), p, map.last().copied()) {
            map.push(v);
            if self.edges_ok(host, p, map, image) && self.find_from(host, map, image) {
                return true;
            }
            map.pop();
        }
        false
    }

    fn count_from<H: Hypergraph + ?Sized>(&self, host: &H, map: &mut Vec<usize>, image: &mut Vec<usize>) -> BigUint {
        let p = map.len();
        if p == self.depth {
            let free = host.vertex_count() - map.last().map_or(0, |v| v + 1);
            return colex::binomial_big(free as u64, (self.pattern.n() - p) as u64);
        }
        let mut total = BigUint::default();
        for v in self.range(host.vertex_count(), p, map.last().copied()) {
            map.push(v);
            if self.edges_ok(host, p, map, image) {
                total += self.count_from(host, map, image);
            }
            map.pop();
        }
        total
    }
}

/// Lexicographically least order-preserving, edge-preserving map of `pattern`
/// into `host`, if any.
pub fn find_embedding<H: Hypergraph + ?Sized>(host: &H, pattern: &OrderedHypergraph) -> Result<Option<Embedding>> {
    let plan = Plan::new(host, pattern)?;
    if pattern.n() > host.vertex_count() {
        return Ok(None);
    }
    if plan.depth == 0 {
        return Ok(Some(Embedding { map: (0..pattern.n()).collect() }));
    }
    let found = plan.range(host.vertex_count(), 0, None).into_par_iter().find_map_first(|v| {
        let mut map = Vec::with_capacity(pattern.n());
        let mut image = Vec::with_capacity(pattern.k());
        map.push(v);
        (plan.edges_ok(host, 0, &map, &mut image) && plan.find_from(host, &mut map, &mut image)).then_some(map)
    });
    Ok(found.map(|map| Embedding { map }))
}

/// Number of order-preserving, edge-preserving maps of `pattern` into `host`.
pub fn count_embeddings<H: Hypergraph + ?Sized>(host: &H, pattern: &OrderedHypergraph) -> Result<BigUint> {
    let plan = Plan::new(host, pattern)?;
    if pattern.n() > host.vertex_count() {
        return Ok(BigUint::default());
    }
    if plan.depth == 0 {
        return Ok(colex::binomial_big(host.vertex_count() as u64, pattern.n() as u64));
    }
    let partial: Vec<BigUint> = plan
        .range(host.vertex_count(), 0, None)
        .into_par_iter()
        .map(|v| {
            let mut map = vec![v];
            let mut image = Vec::with_capacity(pattern.k());
            if plan.edges_ok(host, 0, &map, &mut image) {
                plan.count_from(host, &mut map, &mut image)
            } else {
                BigUint::default()
            }
        })
        .collect();
    Ok(partial.into_iter().sum())
}
