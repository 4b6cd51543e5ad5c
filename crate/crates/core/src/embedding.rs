//! Greedy embedding of an ordered 3-uniform pattern into a host, one pattern
//! vertex per interval of the host, maintaining candidate sets and pair
//! graphs whose density is controlled by prefix-degree schedules.
//!
//! With pattern vertices `0..t`, before step `i` the state holds a candidate
//! set `U[j]` for each `j >= i` and a bipartite graph `G[j][k]` for each
//! `i <= j < k`. Step `i`:
//! 1. `W` = vertices `w` of `U[i]` with `|N(w)| >= rho_i(i,j) |U[j]|` in
//!    `G[i][j]` for every `j` sharing a pattern edge with `i`;
//! 2. for every pattern edge `{i, j, k}`, drop `w` whose link graph `H_jk(w)`
//!    (edges `xy` of `G[j][k]` between the neighborhoods of `w` with
//!    `{w, x, y}` a host edge) is not bi-dense for the next schedule;
//! 3. map `i` to the smallest survivor and update the state.

use rayon::prelude::*;
use serde::Serialize;

use crate::containment::Embedding;
use crate::density::{is_bi_dense, sample_bi_dense, BiDensity, BipartiteGraph, ExactCap, SampleVerdict};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, OrderedHypergraph, PrefixDegreeTable};
use crate::scalar::Scalar;
use crate::seed::mix_seed;

#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingParams<T> {
    pub rho: T,
    /// Maximum degree of the pattern (at least 1).
    pub d: usize,
    pub eps: T,
    /// Refuse to run below `n >= t / eps` and treat size-condition breaches as failures.
    pub enforce_size_guarantee: bool,
    /// Re-check bi-density of every pair graph after each step (slow).
    pub audit: bool,
}

/// `2^-6 rho^{15 d^2} d^-3`.
pub fn default_epsilon<T: Scalar>(rho: &T, d: usize) -> T {
    let d = d.max(1);
    rho.powu(15 * d * d) / T::from_count(64 * d * d * d)
}

impl<T: Scalar> EmbeddingParams<T> {
    /// Parameters for `pattern` with the default `eps`.
    pub fn new(pattern: &OrderedHypergraph, rho: T) -> Result<Self> {
        if !(rho > T::zero() && rho <= T::one()) {
            return Err(Error::invalid("rho must lie in (0, 1]"));
        }
        let d = pattern.max_degree().max(1);
        let eps = default_epsilon(&rho, d);
        Ok(EmbeddingParams { rho, d, eps, enforce_size_guarantee: false, audit: false })
    }
}

/// Per-step schedule values derived from prefix degrees.
pub struct Schedule<'a, T> {
    table: PrefixDegreeTable,
    rho: &'a T,
    d: usize,
}

impl<'a, T: Scalar> Schedule<'a, T> {
    pub fn new(pattern: &OrderedHypergraph, i: usize, rho: &'a T, d: usize) -> Result<Self> {
        Ok(Schedule { table: pattern.prefix_degrees(i)?, rho, d })
    }

    /// `C_j = rho^{d deg(j)}`.
    pub fn c(&self, j: usize) -> T {
        self.rho.powu(self.d * self.table.single(j))
    }

    /// `eps_j = rho^{4d^2 - d deg(j)} / (4d)`.
    pub fn eps(&self, j: usize) -> T {
        let e = (4 * self.d * self.d).saturating_sub(self.d * self.table.single(j));
        self.rho.powu(e) / T::from_count(4 * self.d)
    }

    /// `rho_jk = rho^{deg(j, k)}`.
    pub fn rho_pair(&self, j: usize, k: usize) -> T {
        self.rho.powu(self.table.pair(j, k))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityCheck {
    Exact(ExactCap),
    /// `trials` random pairs per check, seeded from the run seed and the check's position.
    Sampled { trials: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    WEmpty,
    AllCandidatesFiltered,
    SizeGuaranteeViolated,
}

/// Candidate sets, pair graphs and partial map between steps.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingState {
    pub i: usize,
    pub f: Vec<usize>,
    t: usize,
    u: Vec<Vec<usize>>,
    g: Vec<Option<BipartiteGraph>>,
}

impl EmbeddingState {
    fn initial(t: usize, n: usize) -> Result<Self> {
        let size = n / t;
        let u: Vec<Vec<usize>> = (0..t)
            .map(|j| if j + 1 == t { (j * size..n).collect() } else { (j * size..(j + 1) * size).collect() })
            .collect();
        let mut g = vec![None; t * t];
        for j in 0..t {
            for k in j + 1..t {
                g[j * t + k] = Some(BipartiteGraph::complete(u[j].clone(), u[k].clone())?);
            }
        }
        Ok(EmbeddingState { i: 0, f: Vec::new(), t, u, g })
    }

    /// Candidate set of pattern vertex `j` (empty once `j` is embedded).
    pub fn candidates(&self, j: usize) -> &[usize] {
        &self.u[j]
    }

    /// Pair graph between the candidate sets of `j < k`, both not yet embedded.
    pub fn pair_graph(&self, j: usize, k: usize) -> Option<&BipartiteGraph> {
        self.g.get(j * self.t + k).and_then(Option::as_ref)
    }

    fn graph(&self, j: usize, k: usize) -> &BipartiteGraph {
        self.g[j * self.t + k].as_ref().expect("pair graph present")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "i": self.i,
            "f": self.f,
            "candidates": (self.i..self.t).map(|j| serde_json::json!({"j": j, "vertices": self.u[j]})).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FilterRecord {
    pub j: usize,
    pub k: usize,
    /// `|W_jk|`: candidates whose link graph failed the density check.
    pub rejected: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SizeRecord {
    pub j: usize,
    pub size: usize,
    /// `C_j n / t`, exact.
    pub required: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditRecord {
    pub j: usize,
    pub k: usize,
    /// `pattern-edge`, `one-endpoint` or `untouched`, relative to the vertex just embedded.
    pub case: &'static str,
    /// `None` when the exact check exceeded its cap.
    pub dense: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    /// `|U_i|` before filtering.
    pub candidates: usize,
    /// Condition (i) at the start of the step, for every `j >= step`.
    pub sizes: Vec<SizeRecord>,
    /// Candidates removed for too few neighbors, per neighbor `j`.
    pub low_degree: Vec<(usize, usize)>,
    /// `|W|`.
    pub w: usize,
    pub filters: Vec<FilterRecord>,
    pub survivors: usize,
    pub chosen: Option<usize>,
    /// Condition (iii) re-checked against the host after the update.
    pub condition_iii: Option<bool>,
    pub audit: Vec<AuditRecord>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Success(Embedding),
    Failure { step: usize, reason: FailureReason, state: Box<EmbeddingState> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmbedReport {
    pub outcome: Outcome,
    pub trace: Vec<StepRecord>,
}

impl EmbedReport {
    pub fn embedding(&self) -> Option<&Embedding> {
        match &self.outcome {
            Outcome::Success(e) => Some(e),
            Outcome::Failure { .. } => None,
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let outcome = match &self.outcome {
            Outcome::Success(e) => serde_json::json!({"status": "success", "map": e.map}),
            Outcome::Failure { step, reason, state } => serde_json::json!({
                "status": "failure",
                "step": step,
                "reason": reason,
                "state": state.to_json_value(),
            }),
        };
        serde_json::json!({"outcome": outcome, "trace": self.trace})
    }
}

/// Link graph of `w` for the pattern edge `{i, j, k}`.
fn link_graph<H: Hypergraph + ?Sized>(
    host: &H,
    g_ij: &BipartiteGraph,
    g_ik: &BipartiteGraph,
    g_jk: &BipartiteGraph,
    w: usize,
) -> Result<BipartiteGraph> {
    let left = g_ij.left_neighbors(w);
    let right = g_ik.left_neighbors(w);
    let mut edges = Vec::new();
    for &x in &left {
        for &y in &right {
            if g_jk.has_edge(x, y) && host.contains_edge(&[w, x, y]) {
                edges.push((x, y));
            }
        }
    }
    BipartiteGraph::from_edges(left, right, &edges)
}

fn dense<T: Scalar>(g: &BipartiteGraph, e1: &T, e2: &T, r: &T, check: DensityCheck, seed: u64) -> Result<bool> {
    Ok(match check {
        DensityCheck::Exact(cap) => matches!(is_bi_dense(g, e1, e2, r, cap)?, BiDensity::Dense),
        DensityCheck::Sampled { trials } => {
            matches!(sample_bi_dense(g, e1, e2, r, trials, seed)?, SampleVerdict::NoViolationFound)
        }
    })
}

/// Runs the greedy embedding. Failures are reported in the outcome; errors
/// are reserved for invalid input and exceeded caps.
pub fn greedy_embed<H: Hypergraph + ?Sized, T: Scalar>(
    pattern: &OrderedHypergraph,
    host: &H,
    params: &EmbeddingParams<T>,
    check: DensityCheck,
    seed: u64,
) -> Result<EmbedReport> {
    if pattern.k() != 3 || host.uniformity() != 3 {
        return Err(Error::invalid("greedy embedding needs 3-uniform pattern and host"));
    }
    let (t, n) = (pattern.n(), host.vertex_count());
    if t == 0 || n < t {
        return Err(Error::invalid(format!("host has {n} vertices, pattern needs at least {t}")));
    }
    if !(params.rho > T::zero() && params.rho <= T::one()) {
        return Err(Error::invalid("rho must lie in (0, 1]"));
    }
    if params.d == 0 {
        return Err(Error::invalid("d must be positive"));
    }
    let mut state = EmbeddingState::initial(t, n)?;
    let mut trace = Vec::with_capacity(t);
    if params.enforce_size_guarantee && T::from_count(n) * params.eps.clone() < T::from_count(t) {
        return Ok(EmbedReport {
            outcome: Outcome::Failure { step: 0, reason: FailureReason::SizeGuaranteeViolated, state: Box::new(state) },
            trace,
        });
    }
    let shares = |a: usize, b: usize| pattern.edges().iter().any(|e| e.contains(&a) && e.contains(&b));
    let edge_set: std::collections::HashSet<&[usize]> = pattern.edges().iter().map(Vec::as_slice).collect();
    let n_over_t = T::from_count(n) / T::from_count(t);

    for i in 0..t {
        let now = Schedule::new(pattern, i, &params.rho, params.d)?;
        let next = Schedule::new(pattern, i + 1, &params.rho, params.d)?;
        let nbrs: Vec<usize> = (i + 1..t).filter(|&j| shares(i, j)).collect();
        let owned: Vec<(usize, usize)> = pattern
            .edges()
            .iter()
            .filter(|e| e[0] == i)
            .map(|e| (e[1], e[2]))
            .collect();

        let sizes: Vec<SizeRecord> = (i..t)
            .map(|j| {
                let required = now.c(j) * n_over_t.clone();
                SizeRecord {
                    j,
                    size: state.u[j].len(),
                    holds: T::from_count(state.u[j].len()) >= required,
                    required: required.render(),
                }
            })
            .collect();
        let mut record = StepRecord {
            step: i,
            candidates: state.u[i].len(),
            sizes,
            low_degree: Vec::new(),
            w: 0,
            filters: Vec::new(),
            survivors: 0,
            chosen: None,
            condition_iii: None,
            audit: Vec::new(),
        };
        if params.enforce_size_guarantee && record.sizes.iter().any(|s| !s.holds) {
            trace.push(record);
            return Ok(EmbedReport {
                outcome: Outcome::Failure { step: i, reason: FailureReason::SizeGuaranteeViolated, state: Box::new(state) },
                trace,
            });
        }

        // W: enough neighbors towards every j sharing an edge with i
        let thresholds: Vec<(usize, T)> =
            nbrs.iter().map(|&j| (j, now.rho_pair(i, j) * T::from_count(state.u[j].len()))).collect();
        let mut w_set = Vec::new();
        let mut low = vec![0usize; nbrs.len()];
        for &w in &state.u[i] {
            let mut ok = true;
            for (slot, (j, need)) in thresholds.iter().enumerate() {
                let g = state.graph(i, *j);
                let deg = g.left_pos(w).map_or(0, |p| g.row(p).count_ones(..));
                if T::from_count(deg) < *need {
                    low[slot] += 1;
                    ok = false;
                }
            }
            if ok {
                w_set.push(w);
            }
        }
        record.low_degree = nbrs.iter().copied().zip(low).collect();
        record.w = w_set.len();
        if w_set.is_empty() {
            trace.push(record);
            return Ok(EmbedReport {
                outcome: Outcome::Failure { step: i, reason: FailureReason::WEmpty, state: Box::new(state) },
                trace,
            });
        }

        // link-graph filter, evaluated for every candidate so the trace holds |W_jk|
        let verdicts: Vec<Vec<bool>> = w_set
            .par_iter()
            .map(|&w| {
                owned
                    .iter()
                    .map(|&(j, k)| {
                        let h = link_graph(host, state.graph(i, j), state.graph(i, k), state.graph(j, k), w)?;
                        let s = mix_seed(seed, &[i as u64, j as u64, k as u64, w as u64]);
                        dense(&h, &next.eps(j), &next.eps(k), &next.rho_pair(j, k), check, s)
                    })
                    .collect::<Result<Vec<bool>>>()
            })
            .collect::<Result<_>>()?;
        record.filters = owned
            .iter()
            .enumerate()
            .map(|(slot, &(j, k))| FilterRecord { j, k, rejected: verdicts.iter().filter(|v| !v[slot]).count() })
            .collect();
        let survivors: Vec<usize> =
            w_set.iter().zip(&verdicts).filter(|(_, v)| v.iter().all(|&ok| ok)).map(|(&w, _)| w).collect();
        record.survivors = survivors.len();
        let Some(&w) = survivors.first() else {
            trace.push(record);
            return Ok(EmbedReport {
                outcome: Outcome::Failure { step: i, reason: FailureReason::AllCandidatesFiltered, state: Box::new(state) },
                trace,
            });
        };
        record.chosen = Some(w);

        // update
        let mut links = Vec::with_capacity(owned.len());
        for &(j, k) in &owned {
            links.push(((j, k), link_graph(host, state.graph(i, j), state.graph(i, k), state.graph(j, k), w)?));
        }
        for &j in &nbrs {
            state.u[j] = state.graph(i, j).left_neighbors(w);
        }
        for j in i + 1..t {
            for k in j + 1..t {
                let slot = j * t + k;
                if let Some(pos) = links.iter().position(|(p, _)| *p == (j, k)) {
                    state.g[slot] = Some(links.swap_remove(pos).1);
                } else if nbrs.contains(&j) || nbrs.contains(&k) {
                    let g = state.graph(j, k).induced(&state.u[j], &state.u[k])?;
                    state.g[slot] = Some(g);
                }
            }
        }
        for k in i + 1..t {
            state.g[i * t + k] = None;
        }
        state.u[i].clear();
        state.f.push(w);
        state.i = i + 1;

        record.condition_iii = Some(condition_iii_holds(host, pattern, &state, &edge_set));
        if params.audit {
            record.audit = audit(&state, &next, &nbrs, &owned)?;
        }
        trace.push(record);
    }
    Ok(EmbedReport { outcome: Outcome::Success(Embedding { map: state.f }), trace })
}

/// Condition (iii): edges of `G[j][k]` close host edges with every embedded
/// `f(h)` for pattern edges `{h, j, k}`, and candidates of `j` close host
/// edges with embedded pairs `f(h1), f(h2)` for pattern edges `{h1, h2, j}`.
fn condition_iii_holds<H: Hypergraph + ?Sized>(
    host: &H,
    pattern: &OrderedHypergraph,
    state: &EmbeddingState,
    edge_set: &std::collections::HashSet<&[usize]>,
) -> bool {
    let (i, t) = (state.i, state.t);
    for j in i..t {
        for k in j + 1..t {
            for h in 0..i {
                if !edge_set.contains(&[h, j, k][..]) {
                    continue;
                }
                let fh = state.f[h];
                if state.graph(j, k).edges().iter().any(|&(x, y)| !host.contains_edge(&[fh, x, y])) {
                    return false;
                }
            }
        }
        for e in pattern.edges() {
            if e[2] == j && e[1] < i {
                let (a, b) = (state.f[e[0]], state.f[e[1]]);
                if state.u[j].iter().any(|&u| !host.contains_edge(&[a, b, u])) {
                    return false;
                }
            }
        }
    }
    true
}

fn audit<T: Scalar>(
    state: &EmbeddingState,
    next: &Schedule<'_, T>,
    nbrs: &[usize],
    owned: &[(usize, usize)],
) -> Result<Vec<AuditRecord>> {
    let (i, t) = (state.i, state.t);
    let mut out = Vec::new();
    for j in i..t {
        for k in j + 1..t {
            let case = if owned.contains(&(j, k)) {
                "pattern-edge"
            } else if nbrs.contains(&j) || nbrs.contains(&k) {
                "one-endpoint"
            } else {
                "untouched"
            };
            let g = state.graph(j, k);
            let dense = match is_bi_dense(g, &next.eps(j), &next.eps(k), &next.rho_pair(j, k), ExactCap::default()) {
                Ok(v) => Some(v.is_dense()),
                Err(Error::CapExceeded { .. }) => None,
                Err(e) => return Err(e),
            };
            out.push(AuditRecord { j, k, case, dense });
        }
    }
    Ok(out)
}
