//! Step-up colorings, clique verification, random edge labelings and the
//! majority-color auxiliary hypergraph.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{self, Log2Value, RedCopyChain, StepUpBound};
use crate::colex;
use crate::coloring::{Color, EdgeLabeling, HyperedgeColoring};
use crate::error::{Error, Result};
use crate::hypergraph::OrderedHypergraph;
use crate::scalar::Real;

/// `chi(u, v, w) = chi1(chi2(u,v), chi2(u,w))` for `u < v < w` when the two
/// labels differ, red otherwise. Label `x` names vertex `x - 1` of `chi1`.
pub fn stepup_coloring(chi1: &HyperedgeColoring, chi2: &EdgeLabeling) -> Result<HyperedgeColoring> {
    if chi1.k() != 2 {
        return Err(Error::invalid("chi1 must color pairs"));
    }
    if chi2.range() as usize > chi1.n() {
        return Err(Error::invalid(format!(
            "labels run to {} but chi1 has only {} vertices",
            chi2.range(),
            chi1.n()
        )));
    }
    let n = chi2.n();
    let mut out = HyperedgeColoring::monochromatic(3, n, Color::Red)?;
    let blue: Vec<Vec<u64>> = (2..n)
        .into_par_iter()
        .map(|w| {
            let mut ranks = Vec::new();
            for v in 1..w {
                for u in 0..v {
                    let a = chi2.label(u, v);
                    let b = chi2.label(u, w);
                    if a != b && chi1.color(&sorted_pair(a as usize - 1, b as usize - 1)) == Color::Blue {
                        ranks.push(colex::rank(&[u, v, w]));
                    }
                }
            }
            ranks
        })
        .collect();
    for r in blue.into_iter().flatten() {
        out.set_rank(r, Color::Blue);
    }
    Ok(out)
}

fn sorted_pair(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliqueVerdict {
    Clean,
    /// Lexicographically least vertex set whose subsets all carry the color.
    Counterexample(Vec<usize>),
}

impl CliqueVerdict {
    pub fn is_clean(&self) -> bool {
        matches!(self, CliqueVerdict::Clean)
    }
}

/// Searches for `size` vertices all of whose k-subsets have color `color`.
pub fn find_monochromatic_clique(coloring: &HyperedgeColoring, size: usize, color: Color) -> CliqueVerdict {
    let (k, n) = (coloring.k(), coloring.n());
    if size < k {
        // every set of fewer than k vertices is vacuously monochromatic
        return if size <= n { CliqueVerdict::Counterexample((0..size).collect()) } else { CliqueVerdict::Clean };
    }
    if size > n {
        return CliqueVerdict::Clean;
    }
    let extend_ok = |cur: &[usize], v: usize, scratch: &mut Vec<usize>| -> bool {
        if cur.len() + 1 < k {
            return true;
        }
        // every (k-1)-subset of cur together with v
        colex::subsets(cur.len(), k - 1).all(|idx| {
            scratch.clear();
            scratch.extend(idx.iter().map(|&i| cur[i]));
            scratch.push(v);
            coloring.color(scratch) == color
        })
    };
    fn dfs(
        cur: &mut Vec<usize>,
        n: usize,
        size: usize,
        scratch: &mut Vec<usize>,
        ok: &dyn Fn(&[usize], usize, &mut Vec<usize>) -> bool,
    ) -> bool {
        if cur.len() == size {
            return true;
        }
        let start = cur.last().map_or(0, |v| v + 1);
        let need = size - cur.len();
        for v in start..=n - need {
            if ok(cur, v, scratch) {
                cur.push(v);
                if dfs(cur, n, size, scratch, ok) {
                    return true;
                }
                cur.pop();
            }
        }
        false
    }
    let found = (0..=n - size).into_par_iter().find_map_first(|first| {
        let mut cur = vec![first];
        let mut scratch = Vec::with_capacity(k);
        dfs(&mut cur, n, size, &mut scratch, &extend_ok).then_some(cur)
    });
    match found {
        Some(set) => CliqueVerdict::Counterexample(set),
        None => CliqueVerdict::Clean,
    }
}

/// Checks that no `t_plus_1` vertices span only blue triples.
pub fn verify_no_blue_clique(coloring: &HyperedgeColoring, t_plus_1: usize) -> Result<CliqueVerdict> {
    if coloring.k() != 3 {
        return Err(Error::invalid("blue-clique verification expects a 3-uniform coloring"));
    }
    Ok(find_monochromatic_clique(coloring, t_plus_1, Color::Blue))
}

/// Labels in `1..=r`, the label of the pair of colex rank `i` drawn from a
/// generator keyed by `(seed, i)` alone.
pub fn random_labeling(n: usize, r: u32, seed: u64) -> Result<EdgeLabeling> {
    if n < 2 {
        return Err(Error::invalid("need at least two vertices"));
    }
    if r == 0 {
        return Err(Error::invalid("label range must be at least 1"));
    }
    let pairs = n * (n - 1) / 2;
    let labels: Vec<u32> = (0..pairs as u64)
        .into_par_iter()
        .map(|rank| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(rank);
            rng.gen_range(1..=r)
        })
        .collect();
    EdgeLabeling::new(n, r, labels)
}

/// Parameters of the step-up lower bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepUpParams<T> {
    pub t: u64,
    pub n: u64,
    /// `ceil(n / 4)`
    pub m: u64,
    /// `ceil(n / 2)`
    pub l: u64,
    pub log2_r: T,
    pub alpha: T,
}

impl<T: Real> StepUpParams<T> {
    pub fn new(t: u64, n: u64, log2_r: T, alpha: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n must be positive"));
        }
        if !(alpha > T::zero() && alpha <= T::one()) {
            return Err(Error::invalid("alpha must lie in (0, 1]"));
        }
        Ok(StepUpParams { t, n, m: n.div_ceil(4), l: n.div_ceil(2), log2_r, alpha })
    }

    /// `2n < R^alpha`.
    pub fn valid(&self) -> bool {
        let lhs = ((2 * self.n) as f64).log2();
        let rhs = (self.alpha * self.log2_r).to_f64().unwrap_or(f64::NAN);
        lhs < rhs
    }

    pub fn lower_bound(&self) -> Result<StepUpBound<T>> {
        bounds::stepup_lowerbound_log2(self.n, self.log2_r, self.alpha)
    }

    /// Vertex count `N` at which the closed form of the chain equals 1.
    pub fn critical_log2_n(&self) -> Log2Value<T> {
        bounds::critical_log2_n(self.log2_r, self.alpha, self.n)
    }

    pub fn expected_red_copies_log2(&self, log2_n: T) -> Result<RedCopyChain<T>> {
        if self.l + 1 < 2 * self.m {
            return Err(Error::invalid("l must be at least 2m - 1"));
        }
        bounds::expected_red_copies_log2(log2_n, self.log2_r, self.alpha, self.n, self.l)
    }
}

/// Monochromatic `chi`-subsets of the majority color.
#[derive(Clone, Debug, PartialEq)]
pub struct MajorityAuxiliary {
    /// `chi`-uniform; edges are the monochromatic `chi`-subsets of `color`.
    pub hypergraph: OrderedHypergraph,
    pub color: Color,
    pub red: u64,
    pub blue: u64,
}

/// Classifies every `chi`-subset by whether all its k-subsets share a color
/// and keeps those of the more frequent color (red on ties).
pub fn majority_auxiliary(coloring: &HyperedgeColoring, chi: usize) -> Result<MajorityAuxiliary> {
    let (k, n) = (coloring.k(), coloring.n());
    if chi < k || chi > n {
        return Err(Error::invalid(format!("need k <= chi <= N, got k={k}, chi={chi}, N={n}")));
    }
    let total = colex::binomial(n as u64, chi as u64)
        .ok_or_else(|| Error::invalid("too many chi-subsets"))?;
    const CHUNK: u64 = 1 << 14;
    let chunks: Vec<(Vec<Vec<usize>>, Vec<Vec<usize>>)> = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(total);
            let mut s = colex::unrank(start, chi);
            let mut red = Vec::new();
            let mut blue = Vec::new();
            let mut sub = Vec::with_capacity(k);
            for r in start..end {
                if r > start {
                    colex::advance(&mut s);
                }
                let mut colors = colex::subsets(chi, k).map(|idx| {
                    sub.clear();
                    sub.extend(idx.iter().map(|&i| s[i]));
                    coloring.color(&sub)
                });
                let first = colors.next().expect("chi >= k");
                if colors.all(|col| col == first) {
                    match first {
                        Color::Red => red.push(s.clone()),
                        Color::Blue => blue.push(s.clone()),
                    }
                }
            }
            (red, blue)
        })
        .collect();
    let (mut red, mut blue) = (Vec::new(), Vec::new());
    for (r, b) in chunks {
        red.extend(r);
        blue.extend(b);
    }
    let (red_count, blue_count) = (red.len() as u64, blue.len() as u64);
    let (color, edges) = if blue_count > red_count { (Color::Blue, blue) } else { (Color::Red, red) };
    let mut edges = edges;
    edges.sort_unstable();
    Ok(MajorityAuxiliary {
        hypergraph: OrderedHypergraph::from_canonical(chi, n, edges),
        color,
        red: red_count,
        blue: blue_count,
    })
}
