//! Ordered uniform hypergraphs, canonical generators and order-aware degree
//! statistics.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::colex;
use crate::error::{Error, ParseError, Result};

/// Anything that answers edge-membership queries on an ordered vertex set
/// `0..vertex_count()`. Implemented by [`OrderedHypergraph`] and by
/// [`ColorView`](crate::ColorView).
pub trait Hypergraph: Sync {
    fn uniformity(&self) -> usize;
    fn vertex_count(&self) -> usize;
    /// `edge` must be strictly increasing with `uniformity()` entries.
    fn contains_edge(&self, edge: &[usize]) -> bool;
}

impl<H: Hypergraph + ?Sized> Hypergraph for &H {
    fn uniformity(&self) -> usize {
        (**self).uniformity()
    }
    fn vertex_count(&self) -> usize {
        (**self).vertex_count()
    }
    fn contains_edge(&self, edge: &[usize]) -> bool {
        (**self).contains_edge(edge)
    }
}

/// Membership index; colex-ranked bitset when the rank space is small.
#[derive(Clone, Debug)]
enum EdgeIndex {
    Bits(FixedBitSet),
    Hashed(HashSet<Vec<usize>>),
}

const BITSET_LIMIT: u64 = 1 << 24;

/// A k-uniform hypergraph on `0..n` with the natural vertex order.
///
/// Edges are strictly increasing tuples, deduplicated and kept in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct OrderedHypergraph {
    k: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
    index: EdgeIndex,
}

impl PartialEq for OrderedHypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.n == other.n && self.edges == other.edges
    }
}

impl Eq for OrderedHypergraph {}

impl OrderedHypergraph {
    /// Validates and canonicalizes the given edges. Each edge is sorted; a
    /// repeated vertex, wrong arity, out-of-range vertex or duplicate edge is
    /// rejected.
    pub fn new<I>(k: usize, n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        if k < 2 {
            return Err(Error::invalid(format!("uniformity must be at least 2, got {k}")));
        }
        let mut canonical = Vec::new();
        for mut e in edges {
            e.sort_unstable();
            if e.len() != k || e.windows(2).any(|w| w[0] == w[1]) {
                return Err(ParseError::Arity { edge: e, expected: k }.into());
            }
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(ParseError::VertexOutOfRange { vertex: v, n }.into());
            }
            canonical.push(e);
        }
        canonical.sort_unstable();
        if let Some(w) = canonical.windows(2).find(|w| w[0] == w[1]) {
            return Err(ParseError::DuplicateEdge(w[0].clone()).into());
        }
        Ok(Self::from_canonical(k, n, canonical))
    }

    /// Edges must already be sorted tuples in lexicographic order without duplicates.
    pub(crate) fn from_canonical(k: usize, n: usize, edges: Vec<Vec<usize>>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        let index = match colex::binomial(n as u64, k as u64) {
            Some(total) if total <= BITSET_LIMIT => {
                let mut bits = FixedBitSet::with_capacity(total as usize);
                for e in &edges {
                    bits.insert(colex::rank(e) as usize);
                }
                EdgeIndex::Bits(bits)
            }
            _ => EdgeIndex::Hashed(edges.iter().cloned().collect()),
        };
        OrderedHypergraph { k, n, edges, index }
    }

    pub(crate) fn from_unsorted_unique(k: usize, n: usize, mut edges: Vec<Vec<usize>>) -> Self {
        edges.sort_unstable();
        Self::from_canonical(k, n, edges)
    }

    pub fn empty(k: usize, n: usize) -> Result<Self> {
        Self::new(k, n, std::iter::empty())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(&v)).count()
    }

    /// Largest number of edges through a single vertex; 0 without edges.
    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.n];
        for e in &self.edges {
            for &v in e {
                deg[v] += 1;
            }
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// Mirror image under `v -> n - 1 - v`.
    pub fn reversed(&self) -> Self {
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().rev().map(|&v| self.n - 1 - v).collect())
            .collect();
        Self::from_unsorted_unique(self.k, self.n, edges)
    }

    /// Hypergraph with one more edge. Fails if the edge is present or invalid.
    pub fn with_edge(&self, edge: Vec<usize>) -> Result<Self> {
        Self::new(self.k, self.n, self.edges.iter().cloned().chain(std::iter::once(edge)))
    }

    pub fn prefix_degrees(&self, i: usize) -> Result<PrefixDegreeTable> {
        PrefixDegreeTable::new(self, i)
    }

    pub fn interval_chromatic_number(&self) -> usize {
        interval_chromatic_number(self)
    }

    /// Canonical JSON: `{"version":1,"k":..,"n":..,"edges":[[..],..]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&HypergraphJson {
            version: Some(FORMAT_VERSION),
            k: self.k,
            n: self.n,
            edges: self.edges.clone(),
        })
        .expect("hypergraph serializes")
    }

    /// Parses the JSON hypergraph format. A missing `version` is read as
    /// version 1; any other version is rejected.
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let raw: HypergraphJson =
            serde_json::from_slice(bytes).map_err(|e| ParseError::Malformed(e.to_string()))?;
        match raw.version {
            None | Some(FORMAT_VERSION) => {}
            Some(v) => return Err(ParseError::UnsupportedVersion(v).into()),
        }
        Self::new(raw.k, raw.n, raw.edges)
    }
}

impl Hypergraph for OrderedHypergraph {
    fn uniformity(&self) -> usize {
        self.k
    }

    fn vertex_count(&self) -> usize {
        self.n
    }

    fn contains_edge(&self, edge: &[usize]) -> bool {
        debug_assert_eq!(edge.len(), self.k);
        if edge.last().is_some_and(|&v| v >= self.n) {
            return false;
        }
        match &self.index {
            EdgeIndex::Bits(bits) => bits.contains(colex::rank(edge) as usize),
            EdgeIndex::Hashed(set) => set.contains(edge),
        }
    }
}

const FORMAT_VERSION: u64 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HypergraphJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    version: Option<u64>,
    k: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
}

/// Complete k-uniform hypergraph on `n` ordered vertices.
pub fn complete_hypergraph(k: usize, n: usize) -> Result<OrderedHypergraph> {
    if k < 2 || k > n {
        return Err(Error::invalid(format!("complete hypergraph needs 2 <= k <= N, got k={k}, N={n}")));
    }
    let mut edges: Vec<Vec<usize>> = colex::subsets(n, k).collect();
    edges.sort_unstable();
    Ok(OrderedHypergraph::from_canonical(k, n, edges))
}

/// Complete k-uniform `chi`-partite hypergraph with `chi` consecutive classes of size `n`.
pub fn complete_multipartite(k: usize, chi: usize, n: usize) -> Result<OrderedHypergraph> {
    if n == 0 {
        return Err(Error::invalid("class size must be positive"));
    }
    complete_multipartite_sizes(k, &vec![n; chi])
}

/// Complete k-uniform multipartite hypergraph whose consecutive classes have the given sizes.
pub fn complete_multipartite_sizes(k: usize, sizes: &[usize]) -> Result<OrderedHypergraph> {
    if k < 2 || sizes.len() < k {
        return Err(Error::invalid(format!(
            "multipartite hypergraph needs chi >= k >= 2, got k={k}, chi={}",
            sizes.len()
        )));
    }
    if sizes.contains(&0) {
        return Err(Error::invalid("class sizes must be positive"));
    }
    let mut starts = Vec::with_capacity(sizes.len());
    let mut total = 0;
    for &s in sizes {
        starts.push(total);
        total += s;
    }
    let mut edges = Vec::new();
    for classes in colex::subsets(sizes.len(), k) {
        let mut edge = vec![0; k];
        product_fill(&classes, &starts, sizes, 0, &mut edge, &mut edges);
    }
    Ok(OrderedHypergraph::from_unsorted_unique(k, total, edges))
}

fn product_fill(
    classes: &[usize],
    starts: &[usize],
    sizes: &[usize],
    pos: usize,
    edge: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if pos == classes.len() {
        out.push(edge.clone());
        return;
    }
    let c = classes[pos];
    for v in starts[c]..starts[c] + sizes[c] {
        edge[pos] = v;
        product_fill(classes, starts, sizes, pos + 1, edge, out);
    }
}

/// Monotone hyperpath: every window of `k` consecutive vertices is an edge.
pub fn monotone_hyperpath(k: usize, n: usize) -> Result<OrderedHypergraph> {
    if k < 2 || n < k {
        return Err(Error::invalid(format!("monotone hyperpath needs n >= k >= 2, got k={k}, n={n}")));
    }
    let edges = (0..=n - k).map(|i| (i..i + k).collect()).collect();
    Ok(OrderedHypergraph::from_canonical(k, n, edges))
}

/// Minimum number of consecutive intervals partitioning the vertices so that
/// no edge has two vertices in one interval.
///
/// Greedy left-to-right: a new interval starts at `v` exactly when some edge
/// pairs `v` with an earlier vertex of the current interval. Any feasible
/// partition has its `j`-th boundary no further right than the greedy one
/// (induction on `j`), so greedy uses the fewest intervals.
pub fn interval_chromatic_number(h: &OrderedHypergraph) -> usize {
    if h.n == 0 {
        return 0;
    }
    // latest[v] = largest vertex u < v sharing an edge with v
    let mut latest: Vec<Option<usize>> = vec![None; h.n];
    for e in &h.edges {
        for w in e.windows(2) {
            let slot = &mut latest[w[1]];
            *slot = Some(slot.map_or(w[0], |u| u.max(w[0])));
        }
    }
    let mut count = 1;
    let mut start = 0;
    for (v, conflict) in latest.iter().enumerate() {
        if conflict.is_some_and(|u| u >= start) {
            count += 1;
            start = v;
        }
    }
    count
}

/// Prefix-weighted degrees for the inductive embedding.
///
/// For prefix length `i` (the first `i` vertices already handled):
/// * `single(j)` = sum over edges `e` containing `j` of `|e ∩ {0..i-1}|`;
/// * `pair(j, k)` = number of edges containing `j`, `k` and a vertex of `{0..i-1}`.
///
/// Values are meaningful for `j, k >= i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixDegreeTable {
    i: usize,
    n: usize,
    single: Vec<usize>,
    pair: Vec<usize>,
}

impl PrefixDegreeTable {
    pub fn new(h: &OrderedHypergraph, i: usize) -> Result<Self> {
        if i > h.n {
            return Err(Error::invalid(format!("prefix length {i} exceeds n = {}", h.n)));
        }
        let n = h.n;
        let mut single = vec![0; n];
        let mut pair = vec![0; n * n];
        for e in &h.edges {
            let in_prefix = e.iter().filter(|&&v| v < i).count();
            for &v in e {
                single[v] += e.iter().filter(|&&u| u < i && u != v).count();
            }
            if in_prefix == 0 {
                continue;
            }
            for (a, &x) in e.iter().enumerate() {
                for &y in &e[a + 1..] {
                    let others = in_prefix - usize::from(x < i) - usize::from(y < i);
                    if others > 0 {
                        pair[x * n + y] += 1;
                        pair[y * n + x] += 1;
                    }
                }
            }
        }
        Ok(PrefixDegreeTable { i, n, single, pair })
    }

    pub fn prefix_len(&self) -> usize {
        self.i
    }

    pub fn single(&self, j: usize) -> usize {
        self.single[j]
    }

    pub fn pair(&self, j: usize, k: usize) -> usize {
        self.pair[j * self.n + k]
    }
}
