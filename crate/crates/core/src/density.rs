//! Bi-density and tri-density of ordered bipartite graphs and 3-uniform
//! hypergraphs, with exact checks at small scale, seeded falsifiers, and
//! witnesses that can be re-verified from raw data.
//!
//! Size thresholds use ceilings: a set `X ⊆ U` qualifies when
//! `|X| >= ceil(eps * |U|)` (and at least 1).

use fixedbitset::FixedBitSet;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::colex;
use crate::error::{Error, ParseError, Result};
use crate::hypergraph::Hypergraph;
use crate::scalar::{rational_string, Scalar};
use crate::Rational;

/// Bipartite graph between two disjoint sets of host vertices, stored as
/// bit rows (left → right) and bit columns (right → left).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: Vec<usize>,
    right: Vec<usize>,
    rows: Vec<FixedBitSet>,
    cols: Vec<FixedBitSet>,
}

impl BipartiteGraph {
    /// Edgeless graph. Both sides are sorted; they must be disjoint.
    pub fn empty(mut left: Vec<usize>, mut right: Vec<usize>) -> Result<Self> {
        left.sort_unstable();
        right.sort_unstable();
        if left.windows(2).any(|w| w[0] == w[1]) || right.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("bipartite side contains a repeated vertex"));
        }
        if left.iter().any(|v| right.binary_search(v).is_ok()) {
            return Err(Error::invalid("bipartite sides are not disjoint"));
        }
        let rows = vec![FixedBitSet::with_capacity(right.len()); left.len()];
        let cols = vec![FixedBitSet::with_capacity(left.len()); right.len()];
        Ok(BipartiteGraph { left, right, rows, cols })
    }

    pub fn complete(left: Vec<usize>, right: Vec<usize>) -> Result<Self> {
        let mut g = Self::empty(left, right)?;
        for row in &mut g.rows {
            row.insert_range(..);
        }
        for col in &mut g.cols {
            col.insert_range(..);
        }
        Ok(g)
    }

    /// Graph with the given edges, each `(left vertex, right vertex)` in host ids.
    pub fn from_edges(left: Vec<usize>, right: Vec<usize>, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(left, right)?;
        for &(u, v) in edges {
            let i = g.left_pos(u).ok_or_else(|| Error::invalid(format!("{u} is not a left vertex")))?;
            let j = g.right_pos(v).ok_or_else(|| Error::invalid(format!("{v} is not a right vertex")))?;
            g.insert_local(i, j);
        }
        Ok(g)
    }

    pub(crate) fn insert_local(&mut self, i: usize, j: usize) {
        self.rows[i].insert(j);
        self.cols[j].insert(i);
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn left_pos(&self, v: usize) -> Option<usize> {
        self.left.binary_search(&v).ok()
    }

    pub fn right_pos(&self, v: usize) -> Option<usize> {
        self.right.binary_search(&v).ok()
    }

    /// Row of left vertex at local index `i`, over right local indices.
    pub fn row(&self, i: usize) -> &FixedBitSet {
        &self.rows[i]
    }

    pub fn col(&self, j: usize) -> &FixedBitSet {
        &self.cols[j]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match (self.left_pos(u), self.right_pos(v)) {
            (Some(i), Some(j)) => self.rows[i].contains(j),
            _ => false,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count() == self.left.len() * self.right.len()
    }

    /// Whether every left vertex precedes every right vertex.
    pub fn is_consecutive(&self) -> bool {
        match (self.left.last(), self.right.first()) {
            (Some(a), Some(b)) => a < b,
            _ => true,
        }
    }

    /// Neighbors (host ids) of a left vertex.
    pub fn left_neighbors(&self, u: usize) -> Vec<usize> {
        self.left_pos(u)
            .map(|i| self.rows[i].ones().map(|j| self.right[j]).collect())
            .unwrap_or_default()
    }

    pub fn right_neighbors(&self, v: usize) -> Vec<usize> {
        self.right_pos(v)
            .map(|j| self.cols[j].ones().map(|i| self.left[i]).collect())
            .unwrap_or_default()
    }

    /// Edges as host-id pairs in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.ones().map(move |j| (self.left[i], self.right[j])))
            .collect()
    }

    /// Subgraph induced by subsets of the two sides (host ids).
    pub fn induced(&self, left: &[usize], right: &[usize]) -> Result<Self> {
        let mut g = Self::empty(left.to_vec(), right.to_vec())?;
        let li: Vec<usize> = g
            .left
            .iter()
            .map(|&u| self.left_pos(u).ok_or_else(|| Error::invalid(format!("{u} not on left side"))))
            .collect::<Result<_>>()?;
        let rj: Vec<usize> = g
            .right
            .iter()
            .map(|&v| self.right_pos(v).ok_or_else(|| Error::invalid(format!("{v} not on right side"))))
            .collect::<Result<_>>()?;
        for (a, &i) in li.iter().enumerate() {
            for (b, &j) in rj.iter().enumerate() {
                if self.rows[i].contains(j) {
                    g.insert_local(a, b);
                }
            }
        }
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_repr()).expect("graph serializes")
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let raw: BipartiteJson = serde_json::from_slice(bytes).map_err(|e| ParseError::Malformed(e.to_string()))?;
        Self::from_repr(raw)
    }

    fn to_repr(&self) -> BipartiteJson {
        BipartiteJson {
            left: self.left.clone(),
            right: self.right.clone(),
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }

    fn from_repr(raw: BipartiteJson) -> Result<Self> {
        let edges: Vec<(usize, usize)> = raw.edges.iter().map(|e| (e[0], e[1])).collect();
        Self::from_edges(raw.left, raw.right, &edges)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BipartiteJson {
    left: Vec<usize>,
    right: Vec<usize>,
    edges: Vec<[usize; 2]>,
}

impl Serialize for BipartiteGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BipartiteGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BipartiteJson::deserialize(d)?;
        Self::from_repr(raw).map_err(serde::de::Error::custom)
    }
}

/// A pair `(X, Y)` whose edge density falls below the requested threshold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityWitness {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub edges: usize,
    pub density: Rational,
}

impl DensityWitness {
    fn new(g: &BipartiteGraph, xi: &[usize], yi: &[usize], edges: usize) -> Self {
        DensityWitness {
            x: xi.iter().map(|&i| g.left[i]).collect(),
            y: yi.iter().map(|&j| g.right[j]).collect(),
            edges,
            density: ratio(edges, xi.len() * yi.len()),
        }
    }

    /// Recomputes the density from the graph and checks the size and density
    /// inequalities this witness certifies.
    pub fn certifies<T: Scalar>(&self, g: &BipartiteGraph, eps1: &T, eps2: &T, rho: &T) -> bool {
        let Ok(d) = pair_density(g, &self.x, &self.y) else { return false };
        let a = threshold(eps1, g.left.len());
        let b = threshold(eps2, g.right.len());
        d == self.density
            && self.x.len() >= a
            && self.y.len() >= b
            && T::from_count(self.edges) < rho.clone() * T::from_count(self.x.len() * self.y.len())
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "x": self.x,
            "y": self.y,
            "edges": self.edges,
            "density": rational_string(&self.density),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BiDensity {
    Dense,
    Violated(DensityWitness),
}

impl BiDensity {
    pub fn is_dense(&self) -> bool {
        matches!(self, BiDensity::Dense)
    }

    pub fn witness(&self) -> Option<&DensityWitness> {
        match self {
            BiDensity::Dense => None,
            BiDensity::Violated(w) => Some(w),
        }
    }
}

/// Upper bound on the number of subsets the exact bi-density check enumerates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactCap {
    pub max_subsets: u64,
}

impl Default for ExactCap {
    fn default() -> Self {
        ExactCap { max_subsets: 1 << 20 }
    }
}

fn ratio(num: usize, den: usize) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `max(1, ceil(eps * size))`.
pub(crate) fn threshold<T: Scalar>(eps: &T, size: usize) -> usize {
    (eps.clone() * T::from_count(size)).ceil_to_usize().max(1)
}

/// Exact edge density `e(X, Y) / (|X| |Y|)`.
pub fn pair_density(g: &BipartiteGraph, x: &[usize], y: &[usize]) -> Result<Rational> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::invalid("density needs non-empty X and Y"));
    }
    let mut ys = FixedBitSet::with_capacity(g.right.len());
    for &v in y {
        let j = g.right_pos(v).ok_or_else(|| Error::invalid(format!("{v} is not a right vertex")))?;
        if ys.put(j) {
            return Err(Error::invalid(format!("{v} repeated in Y")));
        }
    }
    let mut seen = FixedBitSet::with_capacity(g.left.len());
    let mut edges = 0;
    for &u in x {
        let i = g.left_pos(u).ok_or_else(|| Error::invalid(format!("{u} is not a left vertex")))?;
        if seen.put(i) {
            return Err(Error::invalid(format!("{u} repeated in X")));
        }
        edges += g.rows[i].intersection_count(&ys);
    }
    Ok(ratio(edges, x.len() * y.len()))
}

/// Exact bi-(eps1, eps2, rho)-density check.
///
/// For a fixed `Y` the density is the average of per-vertex weights over `X`,
/// so its minimum over `|X| >= a` is attained by the `a` lightest vertices;
/// the same holds for `Y` given `X`. Hence the global minimum over all
/// qualifying pairs is attained with `|X| = a` and `|Y| = b` exactly. The
/// check enumerates all subsets of that size on the side with fewer of them,
/// pairs each with the lightest vertices on the other side, and returns the
/// pair of least density (first in colex order on ties).
pub fn is_bi_dense<T: Scalar>(g: &BipartiteGraph, eps1: &T, eps2: &T, rho: &T, cap: ExactCap) -> Result<BiDensity> {
    let zero = T::zero();
    if !(*eps1 > zero && *eps2 > zero && *rho > zero) {
        return Err(Error::invalid("bi-density parameters must be positive"));
    }
    let (nl, nr) = (g.left.len(), g.right.len());
    let a = threshold(eps1, nl);
    let b = threshold(eps2, nr);
    if nl == 0 || nr == 0 || a > nl || b > nr {
        return Ok(BiDensity::Dense);
    }
    let violates = |e: usize| T::from_count(e) < rho.clone() * T::from_count(a * b);
    if g.edge_count() == 0 {
        if !violates(0) {
            return Ok(BiDensity::Dense);
        }
        let xi: Vec<usize> = (0..a).collect();
        let yi: Vec<usize> = (0..b).collect();
        return Ok(BiDensity::Violated(DensityWitness::new(g, &xi, &yi, 0)));
    }
    if g.is_complete() {
        if !violates(a * b) {
            return Ok(BiDensity::Dense);
        }
        let xi: Vec<usize> = (0..a).collect();
        let yi: Vec<usize> = (0..b).collect();
        return Ok(BiDensity::Violated(DensityWitness::new(g, &xi, &yi, a * b)));
    }
    let left_count = colex::binomial(nl as u64, a as u64).unwrap_or(u64::MAX);
    let right_count = colex::binomial(nr as u64, b as u64).unwrap_or(u64::MAX);
    let enumerate_left = left_count <= right_count;
    let count = left_count.min(right_count);
    if count > cap.max_subsets {
        return Err(Error::CapExceeded { what: "bi-density subset enumeration", size: count, cap: cap.max_subsets });
    }
    let (size, pick, lines, other_len) =
        if enumerate_left { (a, b, &g.cols, nr) } else { (b, a, &g.rows, nl) };

    const CHUNK: u64 = 4096;
    let chunks = count.div_ceil(CHUNK);
    let best = (0..chunks)
        .into_par_iter()
        .filter_map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(count);
            let mut subset = colex::unrank(start, size);
            let mut mask = FixedBitSet::with_capacity(if enumerate_left { nl } else { nr });
            let mut weights: Vec<(usize, usize)> = Vec::with_capacity(other_len);
            let mut best: Option<(usize, u64)> = None;
            for r in start..end {
                if r > start {
                    colex::advance(&mut subset);
                }
                mask.clear();
                subset.iter().for_each(|&i| mask.insert(i));
                weights.clear();
                weights.extend(lines.iter().enumerate().map(|(j, line)| (line.intersection_count(&mask), j)));
                weights.select_nth_unstable(pick - 1);
                let e: usize = weights[..pick].iter().map(|w| w.0).sum();
                if best.is_none_or(|(be, _)| e < be) {
                    best = Some((e, r));
                }
            }
            best
        })
        .min();
    let (e, r) = best.expect("at least one subset");
    if !violates(e) {
        return Ok(BiDensity::Dense);
    }
    let subset = colex::unrank(r, size);
    let mut mask = FixedBitSet::with_capacity(if enumerate_left { nl } else { nr });
    subset.iter().for_each(|&i| mask.insert(i));
    let mut weights: Vec<(usize, usize)> =
        lines.iter().enumerate().map(|(j, line)| (line.intersection_count(&mask), j)).collect();
    weights.sort_unstable();
    let mut other: Vec<usize> = weights[..pick].iter().map(|w| w.1).collect();
    other.sort_unstable();
    let witness = if enumerate_left {
        DensityWitness::new(g, &subset, &other, e)
    } else {
        DensityWitness::new(g, &other, &subset, e)
    };
    Ok(BiDensity::Violated(witness))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampleVerdict {
    NoViolationFound,
    Violated { trial: u64, witness: DensityWitness },
}

/// Random search for a bi-density violation. Trial `i` draws its pair from a
/// generator keyed by `(seed, i)`; the earliest violating trial is returned.
/// A negative answer is not a proof of density.
pub fn sample_bi_dense<T: Scalar>(
    g: &BipartiteGraph,
    eps1: &T,
    eps2: &T,
    rho: &T,
    trials: u64,
    seed: u64,
) -> Result<SampleVerdict> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let (nl, nr) = (g.left.len(), g.right.len());
    let a = threshold(eps1, nl);
    let b = threshold(eps2, nr);
    if nl == 0 || nr == 0 || a > nl || b > nr {
        return Ok(SampleVerdict::NoViolationFound);
    }
    let found = (0..trials).into_par_iter().find_map_first(|trial| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let sx = rng.gen_range(a..=nl);
        let sy = rng.gen_range(b..=nr);
        let mut xi = index::sample(&mut rng, nl, sx).into_vec();
        let mut yi = index::sample(&mut rng, nr, sy).into_vec();
        xi.sort_unstable();
        yi.sort_unstable();
        let mut ymask = FixedBitSet::with_capacity(nr);
        yi.iter().for_each(|&j| ymask.insert(j));
        let e: usize = xi.iter().map(|&i| g.rows[i].intersection_count(&ymask)).sum();
        (T::from_count(e) < rho.clone() * T::from_count(sx * sy))
            .then(|| (trial, DensityWitness::new(g, &xi, &yi, e)))
    });
    Ok(match found {
        Some((trial, witness)) => SampleVerdict::Violated { trial, witness },
        None => SampleVerdict::NoViolationFound,
    })
}

fn check_tripartite(g12: &BipartiteGraph, g13: &BipartiteGraph, g23: &BipartiteGraph) -> Result<()> {
    if g12.left != g13.left || g12.right != g23.left || g13.right != g23.right {
        return Err(Error::invalid("bipartite graphs do not share consistent vertex sets V1, V2, V3"));
    }
    Ok(())
}

/// Number of `(a, b, c) ∈ V1 × V2 × V3` with `ab ∈ G12`, `ac ∈ G13`, `bc ∈ G23`.
pub fn count_triangles(g12: &BipartiteGraph, g13: &BipartiteGraph, g23: &BipartiteGraph) -> Result<BigUint> {
    check_tripartite(g12, g13, g23)?;
    let mut total: u64 = 0;
    for (a, row) in g12.rows.iter().enumerate() {
        for b in row.ones() {
            total += g13.rows[a].intersection_count(&g23.rows[b]) as u64;
        }
    }
    Ok(BigUint::from(total))
}

/// Triangles of the tripartite graph whose vertex triple is an edge of `h`.
pub fn count_hyperedge_triangles<H: Hypergraph + ?Sized>(
    h: &H,
    g12: &BipartiteGraph,
    g13: &BipartiteGraph,
    g23: &BipartiteGraph,
) -> Result<BigUint> {
    check_tripartite(g12, g13, g23)?;
    let mut total: u64 = 0;
    for (a, row) in g12.rows.iter().enumerate() {
        for b in row.ones() {
            for c in g13.rows[a].intersection(&g23.rows[b]) {
                let mut triple = [g12.left[a], g12.right[b], g13.right[c]];
                triple.sort_unstable();
                if h.contains_edge(&triple) {
                    total += 1;
                }
            }
        }
    }
    Ok(BigUint::from(total))
}

/// Three consecutive vertex sets with bipartite graphs between them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriWitness {
    pub v1: Vec<usize>,
    pub v2: Vec<usize>,
    pub v3: Vec<usize>,
    pub g12: BipartiteGraph,
    pub g13: BipartiteGraph,
    pub g23: BipartiteGraph,
    #[serde(with = "biguint_string")]
    pub triangles: BigUint,
    #[serde(with = "biguint_string")]
    pub hyperedge_triangles: BigUint,
}

mod biguint_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl TriWitness {
    /// Builds a witness and fills both triangle counts from the data.
    pub fn new<H: Hypergraph + ?Sized>(
        h: &H,
        g12: BipartiteGraph,
        g13: BipartiteGraph,
        g23: BipartiteGraph,
    ) -> Result<Self> {
        let triangles = count_triangles(&g12, &g13, &g23)?;
        let hyperedge_triangles = count_hyperedge_triangles(h, &g12, &g13, &g23)?;
        Ok(TriWitness {
            v1: g12.left.clone(),
            v2: g12.right.clone(),
            v3: g13.right.clone(),
            g12,
            g13,
            g23,
            triangles,
            hyperedge_triangles,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriVerdict {
    Violation,
    Compliant,
    Inapplicable,
}

/// Verdict together with the counts recomputed from raw data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriCheck {
    pub verdict: TriVerdict,
    pub triangles: BigUint,
    pub hyperedge_triangles: BigUint,
}

fn big_to_scalar<T: Scalar>(v: &BigUint) -> T {
    T::from_count(v.to_usize().expect("triangle count fits usize"))
}

/// Classifies a witness against tri-(eps, rho, m)-density, recounting its
/// triangles from the graphs: inapplicable below `eps·m³` triangles, a
/// violation when fewer than a `rho` fraction of them are hyperedges.
pub fn check_tri_witness<H: Hypergraph + ?Sized, T: Scalar>(
    h: &H,
    w: &TriWitness,
    eps: &T,
    rho: &T,
    m: usize,
) -> Result<TriCheck> {
    if h.uniformity() != 3 {
        return Err(Error::invalid("tri-density needs a 3-uniform hypergraph"));
    }
    if w.g12.left != w.v1 || w.g12.right != w.v2 || w.g13.right != w.v3 {
        return Err(Error::invalid("witness graphs do not match V1, V2, V3"));
    }
    let consecutive = |a: &[usize], b: &[usize]| match (a.last(), b.first()) {
        (Some(x), Some(y)) => x < y,
        _ => true,
    };
    if !consecutive(&w.v1, &w.v2) || !consecutive(&w.v2, &w.v3) {
        return Err(Error::invalid("V1, V2, V3 are not consecutive"));
    }
    if [&w.v1, &w.v2, &w.v3].iter().any(|v| v.len() > m) {
        return Err(Error::invalid(format!("a vertex class exceeds m = {m}")));
    }
    if w.v3.last().is_some_and(|&v| v >= h.vertex_count()) {
        return Err(Error::invalid("witness vertex outside the hypergraph"));
    }
    let triangles = count_triangles(&w.g12, &w.g13, &w.g23)?;
    let hyperedge_triangles = count_hyperedge_triangles(h, &w.g12, &w.g13, &w.g23)?;
    let t: T = big_to_scalar(&triangles);
    let verdict = if t < eps.clone() * T::from_count(m * m * m) {
        TriVerdict::Inapplicable
    } else if big_to_scalar::<T>(&hyperedge_triangles) < rho.clone() * t {
        TriVerdict::Violation
    } else {
        TriVerdict::Compliant
    };
    Ok(TriCheck { verdict, triangles, hyperedge_triangles })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FalsifyStrategy {
    /// Every maximal triple of consecutive classes, every graph between the
    /// two classes with the fewest vertex pairs, and an exact optimization of
    /// the remaining two graphs. Needs `m <= 5` and at most 12 host vertices.
    ExhaustiveTiny,
    /// Consecutive windows of size `m` with complete graphs and graphs
    /// derived from the non-link of a single vertex.
    Induced,
    /// Seeded random classes and random graphs of density one half.
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FalsifyOutcome {
    pub witness: Option<TriWitness>,
    /// Budget units consumed (graphs enumerated, candidates or trials evaluated).
    pub examined: u64,
    /// True when the search space was fully covered, so `None` is a proof.
    pub exhausted: bool,
}

/// Searches for a witness that `h` is not tri-(eps, rho, m)-dense.
pub fn falsify_tri_density<H: Hypergraph + ?Sized, T: Scalar>(
    h: &H,
    eps: &T,
    rho: &T,
    m: usize,
    strategy: FalsifyStrategy,
    budget: u64,
    seed: u64,
) -> Result<FalsifyOutcome> {
    if h.uniformity() != 3 {
        return Err(Error::invalid("tri-density needs a 3-uniform hypergraph"));
    }
    if m == 0 {
        return Err(Error::invalid("m must be positive"));
    }
    match strategy {
        FalsifyStrategy::ExhaustiveTiny => {
            if m > 5 || h.vertex_count() > 12 {
                return Err(Error::invalid("exhaustive-tiny requires m <= 5 and at most 12 vertices"));
            }
            exhaustive_tiny(h, eps, rho, m, budget)
        }
        FalsifyStrategy::Induced => induced_search(h, eps, rho, m, budget),
        FalsifyStrategy::Random => random_search(h, eps, rho, m, budget, seed),
    }
}

fn min_triangles<T: Scalar>(eps: &T, m: usize) -> usize {
    (eps.clone() * T::from_count(m * m * m)).ceil_to_usize().max(1)
}

fn violation<H: Hypergraph + ?Sized, T: Scalar>(h: &H, w: &TriWitness, eps: &T, rho: &T, m: usize) -> bool {
    matches!(check_tri_witness(h, w, eps, rho, m), Ok(c) if c.verdict == TriVerdict::Violation)
}

/// Maximal triples `V1 < V2 < V3` with `1 <= |Vi| <= m`: no class can absorb
/// an unused vertex lying in its admissible range.
fn maximal_triples(n: usize, m: usize) -> Vec<[Vec<usize>; 3]> {
    // each vertex is unused, joins the open class, or opens the next class
    fn rec(v: usize, n: usize, m: usize, cur: &mut [Vec<usize>; 3], open: usize, out: &mut Vec<[Vec<usize>; 3]>) {
        if v == n {
            if open == 3 && is_maximal(cur, n, m) {
                out.push(cur.clone());
            }
            return;
        }
        rec(v + 1, n, m, cur, open, out);
        if open > 0 && cur[open - 1].len() < m {
            cur[open - 1].push(v);
            rec(v + 1, n, m, cur, open, out);
            cur[open - 1].pop();
        }
        if open < 3 {
            cur[open].push(v);
            rec(v + 1, n, m, cur, open + 1, out);
            cur[open].pop();
        }
    }
    fn is_maximal(cur: &[Vec<usize>; 3], n: usize, m: usize) -> bool {
        let used: Vec<bool> = (0..n).map(|v| cur.iter().any(|c| c.contains(&v))).collect();
        (0..3).all(|c| {
            if cur[c].len() == m {
                return true;
            }
            let lo = if c == 0 { 0 } else { cur[c - 1].last().unwrap() + 1 };
            let hi = if c == 2 { n } else { *cur[c + 1].first().unwrap() };
            (lo..hi).all(|v| used[v])
        })
    }
    let mut out = Vec::new();
    let mut cur: [Vec<usize>; 3] = Default::default();
    rec(0, n, m, &mut cur, 0, &mut out);
    out.sort_by_key(|t| std::cmp::Reverse(t.iter().map(Vec::len).sum::<usize>()));
    out
}

fn exhaustive_tiny<H: Hypergraph + ?Sized, T: Scalar>(
    h: &H,
    eps: &T,
    rho: &T,
    m: usize,
    budget: u64,
) -> Result<FalsifyOutcome> {
    let target = min_triangles(eps, m);
    let mut examined = 0u64;
    for classes in maximal_triples(h.vertex_count(), m) {
        // enumerate the graph between the pair of classes with the fewest vertex pairs
        let pairs = [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)];
        let &(p, q, apex) = pairs
            .iter()
            .min_by_key(|(p, q, _)| classes[*p].len() * classes[*q].len())
            .unwrap();
        let (vp, vq, va) = (&classes[p], &classes[q], &classes[apex]);
        let np = vp.len();
        let nq = vq.len();
        let graphs = 1u64 << (np * nq);
        for gmask in 0..graphs {
            if examined >= budget {
                return Ok(FalsifyOutcome { witness: None, examined, exhausted: false });
            }
            examined += 1;
            let adj = |i: usize, j: usize| gmask >> (i * nq + j) & 1 == 1;
            // per apex vertex: for each triangle count t, fewest hyperedge triangles and the neighborhoods achieving it
            let max_t = np * nq;
            let mut options: Vec<Vec<Option<(usize, u32, u32)>>> = Vec::with_capacity(va.len());
            for &x in va {
                let mut best: Vec<Option<(usize, u32, u32)>> = vec![None; max_t + 1];
                for sp in 0u32..1 << np {
                    for sq in 0u32..1 << nq {
                        let mut t = 0;
                        let mut hy = 0;
                        for i in (0..np).filter(|i| sp >> i & 1 == 1) {
                            for j in (0..nq).filter(|j| sq >> j & 1 == 1) {
                                if adj(i, j) {
                                    t += 1;
                                    let mut tri = [x, vp[i], vq[j]];
                                    tri.sort_unstable();
                                    if h.contains_edge(&tri) {
                                        hy += 1;
                                    }
                                }
                            }
                        }
                        if best[t].is_none_or(|(bh, _, _)| hy < bh) {
                            best[t] = Some((hy, sp, sq));
                        }
                    }
                }
                options.push(best);
            }
            // knapsack over apex vertices: dp[t] = fewest hyperedge triangles with t triangles
            let total_max = max_t * va.len();
            let mut dp: Vec<Option<usize>> = vec![None; total_max + 1];
            dp[0] = Some(0);
            let mut choice = vec![vec![usize::MAX; total_max + 1]; va.len()];
            for (xi, best) in options.iter().enumerate() {
                let mut next: Vec<Option<usize>> = vec![None; total_max + 1];
                for (s, cur) in dp.iter().enumerate() {
                    let Some(cur) = cur else { continue };
                    for (t, opt) in best.iter().enumerate() {
                        let Some((hy, _, _)) = opt else { continue };
                        let val = cur + hy;
                        if next[s + t].is_none_or(|v| val < v) {
                            next[s + t] = Some(val);
                            choice[xi][s + t] = t;
                        }
                    }
                }
                dp = next;
            }
            let hit = (target..=total_max).find(|&s| {
                dp[s].is_some_and(|hy| T::from_count(hy) < rho.clone() * T::from_count(s))
            });
            let Some(mut s) = hit else { continue };
            // reconstruct apex neighborhoods
            let mut apex_edges_p = Vec::new();
            let mut apex_edges_q = Vec::new();
            for xi in (0..va.len()).rev() {
                let t = choice[xi][s];
                let (_, sp, sq) = options[xi][t].unwrap();
                for i in (0..np).filter(|i| sp >> i & 1 == 1) {
                    apex_edges_p.push((va[xi], vp[i]));
                }
                for j in (0..nq).filter(|j| sq >> j & 1 == 1) {
                    apex_edges_q.push((va[xi], vq[j]));
                }
                s -= t;
            }
            let pq_edges: Vec<(usize, usize)> = (0..np)
                .flat_map(|i| (0..nq).map(move |j| (i, j)))
                .filter(|&(i, j)| adj(i, j))
                .map(|(i, j)| (vp[i], vq[j]))
                .collect();
            let witness = assemble(h, &classes, (p, q, apex), pq_edges, apex_edges_p, apex_edges_q)?;
            debug_assert!(violation(h, &witness, eps, rho, m));
            return Ok(FalsifyOutcome { witness: Some(witness), examined, exhausted: false });
        }
    }
    Ok(FalsifyOutcome { witness: None, examined, exhausted: true })
}

/// Orients edge lists given by class roles into `G12`, `G13`, `G23`.
fn assemble<H: Hypergraph + ?Sized>(
    h: &H,
    classes: &[Vec<usize>; 3],
    (p, q, apex): (usize, usize, usize),
    pq: Vec<(usize, usize)>,
    ap: Vec<(usize, usize)>,
    aq: Vec<(usize, usize)>,
) -> Result<TriWitness> {
    let mut lists: [Vec<(usize, usize)>; 3] = Default::default(); // 12, 13, 23
    let mut put = |c1: usize, c2: usize, edges: Vec<(usize, usize)>| {
        let (lo, hi, flip) = if c1 < c2 { (c1, c2, false) } else { (c2, c1, true) };
        let slot = match (lo, hi) {
            (0, 1) => 0,
            (0, 2) => 1,
            _ => 2,
        };
        lists[slot].extend(edges.into_iter().map(|(u, v)| if flip { (v, u) } else { (u, v) }));
    };
    put(p, q, pq);
    put(apex, p, ap);
    put(apex, q, aq);
    let g12 = BipartiteGraph::from_edges(classes[0].clone(), classes[1].clone(), &lists[0])?;
    let g13 = BipartiteGraph::from_edges(classes[0].clone(), classes[2].clone(), &lists[1])?;
    let g23 = BipartiteGraph::from_edges(classes[1].clone(), classes[2].clone(), &lists[2])?;
    TriWitness::new(h, g12, g13, g23)
}

fn induced_search<H: Hypergraph + ?Sized, T: Scalar>(
    h: &H,
    eps: &T,
    rho: &T,
    m: usize,
    budget: u64,
) -> Result<FalsifyOutcome> {
    let n = h.vertex_count();
    let w = m.min(n / 3);
    let mut examined = 0u64;
    if w == 0 {
        return Ok(FalsifyOutcome { witness: None, examined, exhausted: true });
    }
    for s1 in 0..=n - 3 * w {
        for s2 in s1 + w..=n - 2 * w {
            for s3 in s2 + w..=n - w {
                let classes = [
                    (s1..s1 + w).collect::<Vec<_>>(),
                    (s2..s2 + w).collect::<Vec<_>>(),
                    (s3..s3 + w).collect::<Vec<_>>(),
                ];
                let complete = |a: usize, b: usize| BipartiteGraph::complete(classes[a].clone(), classes[b].clone());
                let mut candidates: Vec<Box<dyn Fn() -> Result<TriWitness> + '_>> = Vec::new();
                candidates.push(Box::new(|| TriWitness::new(h, complete(0, 1)?, complete(0, 2)?, complete(1, 2)?)));
                for &a in &classes[0] {
                    let classes = &classes;
                    let non_link = move || -> Result<BipartiteGraph> {
                        let mut edges = Vec::new();
                        for &b in &classes[1] {
                            for &c in &classes[2] {
                                if !h.contains_edge(&[a, b, c]) {
                                    edges.push((b, c));
                                }
                            }
                        }
                        BipartiteGraph::from_edges(classes[1].clone(), classes[2].clone(), &edges)
                    };
                    candidates.push(Box::new(move || {
                        TriWitness::new(
                            h,
                            BipartiteGraph::complete(classes[0].clone(), classes[1].clone())?,
                            BipartiteGraph::complete(classes[0].clone(), classes[2].clone())?,
                            non_link()?,
                        )
                    }));
                    candidates.push(Box::new(move || {
                        let star12: Vec<(usize, usize)> = classes[1].iter().map(|&b| (a, b)).collect();
                        let star13: Vec<(usize, usize)> = classes[2].iter().map(|&c| (a, c)).collect();
                        TriWitness::new(
                            h,
                            BipartiteGraph::from_edges(classes[0].clone(), classes[1].clone(), &star12)?,
                            BipartiteGraph::from_edges(classes[0].clone(), classes[2].clone(), &star13)?,
                            non_link()?,
                        )
                    }));
                }
                for cand in candidates {
                    if examined >= budget {
                        return Ok(FalsifyOutcome { witness: None, examined, exhausted: false });
                    }
                    examined += 1;
                    let witness = cand()?;
                    if violation(h, &witness, eps, rho, m) {
                        return Ok(FalsifyOutcome { witness: Some(witness), examined, exhausted: false });
                    }
                }
            }
        }
    }
    Ok(FalsifyOutcome { witness: None, examined, exhausted: true })
}

fn random_search<H: Hypergraph + ?Sized, T: Scalar>(
    h: &H,
    eps: &T,
    rho: &T,
    m: usize,
    budget: u64,
    seed: u64,
) -> Result<FalsifyOutcome> {
    let n = h.vertex_count();
    if n < 3 {
        return Ok(FalsifyOutcome { witness: None, examined: 0, exhausted: true });
    }
    let found = (0..budget).into_par_iter().find_map_first(|trial| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let c1 = rng.gen_range(1..n - 1);
        let c2 = rng.gen_range(c1 + 1..n);
        let regions = [(0, c1), (c1, c2), (c2, n)];
        let classes: Vec<Vec<usize>> = regions
            .iter()
            .map(|&(lo, hi)| {
                let size = m.min(hi - lo);
                let mut v: Vec<usize> = index::sample(&mut rng, hi - lo, size).into_iter().map(|i| lo + i).collect();
                v.sort_unstable();
                v
            })
            .collect();
        let mut random_graph = |a: usize, b: usize| {
            let edges: Vec<(usize, usize)> = classes[a]
                .iter()
                .flat_map(|&u| classes[b].iter().map(move |&v| (u, v)))
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            BipartiteGraph::from_edges(classes[a].clone(), classes[b].clone(), &edges)
        };
        let g12 = random_graph(0, 1).ok()?;
        let g13 = random_graph(0, 2).ok()?;
        let g23 = random_graph(1, 2).ok()?;
        let witness = TriWitness::new(h, g12, g13, g23).ok()?;
        violation(h, &witness, eps, rho, m).then_some((trial, witness))
    });
    Ok(match found {
        Some((trial, witness)) => FalsifyOutcome { witness: Some(witness), examined: trial + 1, exhausted: false },
        None => FalsifyOutcome { witness: None, examined: budget, exhausted: false },
    })
}
