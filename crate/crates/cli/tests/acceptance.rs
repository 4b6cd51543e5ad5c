//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use ordered_ramsey::bounds::{
    critical_log2_n, lemma_tripartite_feasible, main_exponent, precise_three_way_split, thm_main_upper_log2,
    thm_precise_upper_log2, PreciseConstants, TripartiteVariant,
};
use ordered_ramsey::colex;
use ordered_ramsey::constructions::{random_labeling, stepup_coloring, verify_no_blue_clique, StepUpParams};
use ordered_ramsey::density::{count_triangles, is_bi_dense, BipartiteGraph, ExactCap};
use ordered_ramsey::embedding::{greedy_embed, DensityCheck, EmbeddingParams, Outcome, Schedule};
use ordered_ramsey::hypergraph::{complete_hypergraph, complete_multipartite, complete_multipartite_sizes, monotone_hyperpath};
use ordered_ramsey::ramsey::{find_avoiding_coloring, ordered_ramsey_exact, RamseyQuery, SearchConfig};
use ordered_ramsey::{
    count_embeddings, find_embedding, parse_rational, Color, HyperedgeColoring, OrderedHypergraph, Rational,
};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn single_threaded<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(f)
}

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

/// Neither color class of `c` contains its forbidden pattern.
fn avoids(c: &HyperedgeColoring, blue: &OrderedHypergraph, red: &OrderedHypergraph) -> bool {
    find_embedding(&c.view(Color::Blue), blue).unwrap().is_none()
        && find_embedding(&c.view(Color::Red), red).unwrap().is_none()
}

fn criterion_1() -> Check {
    let k3 = complete_hypergraph(2, 3).unwrap();
    let p3 = monotone_hyperpath(2, 3).unwrap();
    let mut notes = Vec::new();
    for (name, pattern, expected) in [("K3", &k3, 6), ("P3", &p3, 5)] {
        let start = Instant::now();
        let query = RamseyQuery { blue: pattern.clone(), red: pattern.clone(), n_cap: 8 };
        let result = single_threaded(|| ordered_ramsey_exact(&query, SearchConfig::default())).unwrap();
        let elapsed = start.elapsed();
        ensure!(result.value() == Some(expected), "{name}: got {:?}", result.value());
        ensure!(elapsed < Duration::from_secs(60), "{name}: took {elapsed:?}");
        let cert = result.certificate().ok_or(format!("{name}: no certificate"))?;
        ensure!(cert.n() == expected - 1, "{name}: certificate on {} vertices", cert.n());
        ensure!(avoids(cert, pattern, pattern), "{name}: certificate contains a monochromatic copy");
        notes.push(format!("R({name},{name}) = {expected} in {:.2?}", elapsed));
    }
    Ok(notes.join(", "))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let k3 = complete_hypergraph(2, 3).unwrap();
    let k22 = complete_multipartite(2, 2, 2).unwrap();
    let query = RamseyQuery { blue: k3.clone(), red: k22.clone(), n_cap: 16 };
    let value = ordered_ramsey_exact(&query, SearchConfig { max_bits: 128, split_bits: 6 })
        .unwrap()
        .value()
        .ok_or("R(K3, K22) above 16")?;
    let r = value - 1;
    let chi1 = find_avoiding_coloring(&k3, &k22, r, SearchConfig::default()).unwrap().ok_or("no chi1")?;
    ensure!(avoids(&chi1, &k3, &k22), "chi1 is not a valid avoiding coloring");
    for seed in 0..20 {
        let labels = random_labeling(100, r as u32, seed).unwrap();
        let c = stepup_coloring(&chi1, &labels).unwrap();
        let verdict = verify_no_blue_clique(&c, 4).unwrap();
        ensure!(verdict.is_clean(), "seed {seed}: blue K4 at {verdict:?}");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    Ok(format!("R = {r}, 20 seeds x C(100,4) = 3921225 subsets clean in {:.2?}", elapsed))
}

fn criterion_3() -> Check {
    let points = [
        (40.0, 0.25, 10u64),
        (64.0, 0.5, 8),
        (100.0, 0.1, 20),
        (200.0, 0.5, 30),
        (500.0, 0.75, 12),
        (1000.0, 0.1, 100),
        (30.0, 0.3, 4),
        (2048.0, 0.01, 64),
        (77.5, 0.6, 7),
        (10_000.0, 0.9, 250),
    ];
    let mut worst = 0f64;
    for (lr, alpha, n) in points {
        let p = StepUpParams::new(3, n, lr, alpha).unwrap();
        let log2_n = critical_log2_n(lr, alpha, n).value;
        let chain = p.expected_red_copies_log2(log2_n).unwrap();
        let t: f64 = chain.terminal().value;
        let t = t.abs();
        ensure!(t < 1e-6, "(log2 R, alpha, n) = ({lr}, {alpha}, {n}): terminal {t}");
        worst = worst.max(t);
    }
    Ok(format!("10 points, max |log2 terminal| = {worst:.3e}"))
}

/// Host size making `C^i_{i+1} n / (4t) >= 1` for every step.
fn host_size(p: &OrderedHypergraph, rho: &Rational) -> usize {
    let (t, d) = (p.n(), p.max_degree());
    let mut min_c = Rational::from_integer(1.into());
    for i in 0..t - 1 {
        let c = Schedule::new(p, i, rho, d).unwrap().c(i + 1);
        if c < min_c {
            min_c = c;
        }
    }
    let need = Rational::from_integer((4 * t).into()) / min_c;
    let n = need.ceil().to_integer().to_string().parse::<usize>().unwrap();
    n.max(t)
}

/// The host restricted to the image, relabelled `0..t`, must contain the pattern.
fn recheck(host: &OrderedHypergraph, p: &OrderedHypergraph, map: &[usize]) -> bool {
    let edges: Vec<Vec<usize>> = colex::subsets(map.len(), 3)
        .filter(|e| host.edges().binary_search(&e.iter().map(|&i| map[i]).collect::<Vec<_>>()).is_ok())
        .collect();
    let image = OrderedHypergraph::new(3, map.len(), edges).unwrap();
    find_embedding(&image, p).unwrap().is_some()
}

fn criterion_4() -> Check {
    let rho = q("99/100");
    let cases = [
        ("P4", monotone_hyperpath(3, 4).unwrap()),
        ("P5", monotone_hyperpath(3, 5).unwrap()),
        ("K4", complete_hypergraph(3, 4).unwrap()),
        ("K3(1)", complete_multipartite_sizes(3, &[1, 1, 1]).unwrap()),
        ("K3(2)", complete_multipartite(3, 3, 2).unwrap()),
    ];
    let mut notes = Vec::new();
    for (name, p) in &cases {
        let n = host_size(p, &rho);
        let params = EmbeddingParams::new(p, rho.clone()).unwrap();
        let check = DensityCheck::Exact(ExactCap::default());
        let start = Instant::now();
        let host = complete_hypergraph(3, n).unwrap();
        let report = greedy_embed(p, &host, &params, check, 0).map_err(|e| format!("{name}: {e}"))?;
        let e = report.embedding().ok_or(format!("{name}: failed on complete host of {n}"))?;
        ensure!(e.verify(&host, p) && recheck(&host, p, &e.map), "{name}: embedding does not verify");
        let empty = OrderedHypergraph::empty(3, n).unwrap();
        let failed = greedy_embed(p, &empty, &params, check, 0).map_err(|e| format!("{name}: {e}"))?;
        ensure!(matches!(failed.outcome, Outcome::Failure { .. }), "{name}: embedded into an edgeless host");
        ensure!(!failed.to_json_value()["trace"].is_null(), "{name}: no failure trace");
        let elapsed = start.elapsed();
        ensure!(elapsed < Duration::from_secs(120), "{name}: took {elapsed:?}");
        notes.push(format!("{name}@{n}"));
    }
    Ok(format!("embedded {} and failed cleanly on edgeless hosts", notes.join(" ")))
}

fn subsets_of(v: &[usize]) -> Vec<Vec<usize>> {
    (1u32..1 << v.len())
        .map(|m| v.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &x)| x).collect())
        .collect()
}

fn naive_bi_dense(g: &BipartiteGraph, e1: &Rational, e2: &Rational, rho: &Rational) -> bool {
    let r = |n: usize| Rational::from_integer(n.into());
    for x in subsets_of(g.left()) {
        if r(x.len()) < e1 * r(g.left().len()) {
            continue;
        }
        for y in subsets_of(g.right()) {
            if r(y.len()) < e2 * r(g.right().len()) {
                continue;
            }
            let e = x.iter().map(|&u| y.iter().filter(|&&v| g.has_edge(u, v)).count()).sum::<usize>();
            if r(e) < rho * r(x.len() * y.len()) {
                return false;
            }
        }
    }
    true
}

/// xorshift, so the instances do not depend on the library's generators.
struct Xs(u64);

impl Xs {
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }
    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

fn graph(x: &mut Xs, left: Vec<usize>, right: Vec<usize>, percent: u64) -> BipartiteGraph {
    let mut edges = Vec::new();
    for &u in &left {
        for &v in &right {
            if x.below(100) < percent {
                edges.push((u, v));
            }
        }
    }
    BipartiteGraph::from_edges(left, right, &edges).unwrap()
}

fn criterion_5() -> Check {
    let mut x = Xs(0x2545_f491_4f6c_dd1d);
    let params = [("1/4", "1/3", "1/2"), ("1/2", "1/2", "2/3"), ("1/8", "1/8", "1/3"), ("1/3", "3/4", "3/4")];
    let (mut violations, mut dense) = (0, 0);
    for case in 0..100 {
        let (a, b) = (1 + x.below(8) as usize, 1 + x.below(8) as usize);
        let g = graph(&mut x, (0..a).collect(), (a..a + b).collect(), [35, 60, 85, 100][case % 4]);
        let (e1, e2, rho) = params[case % 4];
        let (e1, e2, rho) = (q(e1), q(e2), q(rho));
        let got = is_bi_dense(&g, &e1, &e2, &rho, ExactCap::default()).unwrap();
        ensure!(got.is_dense() == naive_bi_dense(&g, &e1, &e2, &rho), "bi case {case}: verdict differs");
        match got.witness() {
            Some(w) => {
                violations += 1;
                let e = w.x.iter().map(|&u| w.y.iter().filter(|&&v| g.has_edge(u, v)).count()).sum::<usize>();
                let r = |n: usize| Rational::from_integer(n.into());
                let valid = r(w.x.len()) >= &e1 * r(a)
                    && r(w.y.len()) >= &e2 * r(b)
                    && r(e) < &rho * r(w.x.len() * w.y.len());
                ensure!(valid, "bi case {case}: invalid witness");
            }
            None => dense += 1,
        }
    }
    for case in 0..200 {
        let (a, b, c) = (1 + x.below(8) as usize, 1 + x.below(8) as usize, 1 + x.below(8) as usize);
        let (v1, v2, v3): (Vec<usize>, Vec<usize>, Vec<usize>) =
            ((0..a).collect(), (a..a + b).collect(), (a + b..a + b + c).collect());
        let p = [20, 50, 90][case % 3];
        let g12 = graph(&mut x, v1.clone(), v2.clone(), p);
        let g13 = graph(&mut x, v1.clone(), v3.clone(), p);
        let g23 = graph(&mut x, v2.clone(), v3.clone(), p);
        let mut naive = 0u64;
        for &i in &v1 {
            for &j in &v2 {
                for &k in &v3 {
                    naive += u64::from(g12.has_edge(i, j) && g13.has_edge(i, k) && g23.has_edge(j, k));
                }
            }
        }
        let got = count_triangles(&g12, &g13, &g23).unwrap();
        ensure!(got.to_string() == naive.to_string(), "triangle case {case}: {got} vs {naive}");
    }
    Ok(format!("100 bi-density instances ({dense} dense, {violations} violated), 200 triangle counts"))
}

fn criterion_6() -> Check {
    for d in 1u64..=3 {
        let den = 2 + 60 * d * d;
        let (num, den_e) = main_exponent(d as u32);
        let exponent = Rational::new(num.into(), den_e.into());
        ensure!(exponent == q("2") - Rational::new(1.into(), den.into()), "d={d}: exponent {exponent}");
        // s^{3/2} rho^{-30d^2} with rho = s^{-1/den}
        let via_rho = q("3/2") + Rational::new((30 * d * d).into(), den.into());
        ensure!(via_rho == exponent, "d={d}: substitution gives {via_rho}");
    }
    let mut x = Xs(0x9e37_79b9_7f4a_7c15);
    let mut agreed = 0;
    for i in 0..100 {
        let t = 1 + x.below(10_000);
        // ranges where log2 N is finite in f64 and rho < 1/4
        let (d, log2_s) = if i % 2 == 0 {
            (1u32, 130.0 + (x.below(1 << 20) as f64 / (1 << 20) as f64) * 370.0)
        } else {
            (2u32, 485.0 + (x.below(1 << 20) as f64 / (1 << 20) as f64) * 9.0)
        };
        let b = thm_main_upper_log2(t, d, log2_s, &PreciseConstants::default()).map_err(|e| e.to_string())?;
        ensure!(!b.direct.is_overflow(), "point {i} overflowed");
        ensure!(b.paths_agree(), "point {i}: {:?} vs {:?}", b.direct, b.simplified);
        agreed += 1;
    }
    let mut splits = 0;
    for d in 1u32..=3 {
        for s in [2u64, 10, 1000] {
            for rho in ["1/10", "1/16", "1/9"] {
                let rho_f = q(rho);
                let rho_f: f64 = num_to_f64(&rho_f);
                let split = precise_three_way_split(d, s, rho_f).unwrap();
                if split.budget.is_overflow() {
                    continue;
                }
                ensure!(split.holds.iter().all(|&h| h), "d={d} s={s} rho={rho}: {split:?}");
                let n_over_t = thm_precise_upper_log2(1, d, s, rho_f, &PreciseConstants::default()).unwrap();
                let eps = 2f64.powi(-6) * rho_f.powi(15 * (d * d) as i32) / f64::from(d).powi(3);
                let feasible = lemma_tripartite_feasible(eps, rho_f, s, n_over_t, TripartiteVariant::Proof).unwrap();
                ensure!(feasible, "d={d} s={s} rho={rho}: proof variant infeasible");
                splits += 1;
            }
        }
    }
    ensure!(splits >= 9, "only {splits} finite split points");
    Ok(format!("exponents d=1..3 exact, {agreed}/100 dual-path agreements, {splits} three-way splits hold"))
}

fn num_to_f64(r: &Rational) -> f64 {
    let (n, d) = (r.numer().to_string(), r.denom().to_string());
    n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap()
}

fn criterion_7() -> Check {
    let patterns = [
        monotone_hyperpath(3, 3).unwrap(),
        monotone_hyperpath(3, 4).unwrap(),
        monotone_hyperpath(3, 6).unwrap(),
        complete_hypergraph(3, 4).unwrap(),
        complete_hypergraph(3, 5).unwrap(),
        complete_multipartite(3, 3, 2).unwrap(),
        OrderedHypergraph::new(3, 5, vec![vec![0, 1, 4]]).unwrap(),
        OrderedHypergraph::new(3, 6, vec![vec![0, 2, 4], vec![1, 3, 5]]).unwrap(),
        OrderedHypergraph::empty(3, 4).unwrap(),
        OrderedHypergraph::new(3, 7, vec![vec![0, 1, 2], vec![4, 5, 6]]).unwrap(),
    ];
    let binom = |n: u64, k: u64| (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
    let mut checks = 0;
    for p in &patterns {
        for n in p.n()..=10 {
            let host = complete_hypergraph(3, n).unwrap();
            let got = count_embeddings(&host, p).unwrap();
            ensure!(got.to_string() == binom(n as u64, p.n() as u64).to_string(), "N={n}, t={}: {got}", p.n());
            checks += 1;
        }
    }
    Ok(format!("10 patterns, {checks} (pattern, N) pairs exact"))
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

const BATTERY: &[&[&str]] = &[
    &["gen", "complete", "--k", "2", "--n", "3", "-o", "k3.json"],
    &["gen", "path", "--k", "2", "--n", "3", "-o", "p3.json"],
    &["gen", "multipartite", "--k", "2", "--chi", "2", "--n", "2", "-o", "k22.json"],
    &["gen", "complete", "--k", "3", "--n", "14", "-o", "host.json"],
    &["gen", "path", "--k", "3", "--n", "4", "-o", "path4.json"],
    &["gen", "complete", "--k", "3", "--n", "3"],
    &["contains", "--host", "host.json", "--pattern", "path4.json"],
    &["contains", "--host", "sparse.json", "--pattern", "path4.json"],
    &["count", "--host", "host.json", "--pattern", "path4.json"],
    &["ramsey", "--blue", "k3.json", "--red", "k3.json", "--cap", "6"],
    &["ramsey", "--blue", "p3.json", "--red", "p3.json", "--cap", "4"],
    &["ramsey", "--blue", "k3.json", "--red", "k22.json", "--cap", "12", "--max-bits", "128", "--certificate", "chi1.orc"],
    &["stepup", "--chi1", "chi1.orc", "--n", "30", "-o", "step.orc", "--check", "4"],
    &["stepup", "--chi1", "chi1.orc", "--labeling", "labels.orl"],
    &["verify", "--coloring", "step.orc", "--clique", "4"],
    &["count", "--coloring", "step.orc", "--color", "red", "--pattern", "path4.json"],
    &["contains", "--coloring", "step.orc", "--color", "blue", "--pattern", "path4.json"],
    &["expected", "--log2-r", "40", "--alpha", "0.25", "--n", "10"],
    &["expected", "--log2-r", "40", "--alpha", "0.25", "--n", "10", "--l", "7", "--log2-n", "12.5"],
    &["density", "bi", "--graph", "bip.json", "--eps1", "1/4", "--eps2", "1/4", "--rho", "1/2"],
    &["density", "bi", "--graph", "bip.json", "--eps1", "1/4", "--eps2", "1/4", "--rho", "1/2", "--sampled", "64"],
    &["density", "tri", "--host", "sparse.json", "--eps", "1/27", "--rho", "1/2", "--m", "3"],
    &["density", "tri", "--host", "sparse.json", "--eps", "1/27", "--rho", "1/2", "--m", "3", "--strategy", "random"],
    &["density", "tri", "--host", "sparse.json", "--eps", "1/27", "--rho", "1/2", "--m", "3", "--strategy", "exhaustive-tiny"],
    &["embed", "--pattern", "path4.json", "--host", "host.json", "--rho", "99/100", "--trace", "trace.json"],
    &["embed", "--pattern", "path4.json", "--host", "sparse.json", "--rho", "1/2", "--mode", "sampled", "--trials", "16"],
    &["bound", "tow", "--params", "h=3,x=5"],
    &["bound", "precise", "--params", "t=10,d=2,s=4,rho=1/10"],
    &["bound", "main", "--params", "t=10,d=1,log2_s=200"],
    &["bound", "tripartite", "--params", "delta=1/10,eta=1/10,s=3,m_log2=100,variant=statement"],
    &["bound", "split", "--params", "d=1,s=10,rho=1/10"],
    &["bound", "stepup", "--params", "n=10,log2_r=40,alpha=1/4"],
    &["bound", "lizang", "--params", "t=3,m=100,c=1/2,base=e"],
    &["bound", "composite", "--params", "t=3,n=40,alpha=1/2,c=1"],
    &["bound", "prop", "--params", "chi=3,k=3,n=2,r=3"],
    &["bound", "cor", "--params", "chi=3,n=1,r=2"],
    &["contains", "--host", "missing.json", "--pattern", "path4.json"],
];

fn battery(threads: &str) -> Result<Vec<u8>, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    write(dir.path(), "sparse.json", r#"{"k":3,"n":9,"edges":[[0,3,6],[1,4,7]]}"#);
    write(dir.path(), "bip.json", r#"{"left":[0,1,2,3],"right":[4,5,6,7],"edges":[[0,4],[0,5],[1,4],[2,6],[3,7],[3,6]]}"#);
    write(dir.path(), "labels.orl", "ORL 5 4\n1 2 3 4 1 2 3 4 1 2\n");
    let mut transcript = Vec::new();
    for args in BATTERY {
        let out = Command::new(env!("CARGO_BIN_EXE_oramsey"))
            .current_dir(dir.path())
            .args(["--threads", threads, "--seed", "17"])
            .args(*args)
            .output()
            .map_err(|e| e.to_string())?;
        let code = out.status.code().unwrap_or(-1);
        if code == 2 && args[0] != "contains" {
            return Err(format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr)));
        }
        transcript.extend(format!("$ {}\nexit {code}\n", args.join(" ")).bytes());
        transcript.extend(&out.stdout);
    }
    let mut files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    for f in files {
        transcript.extend(format!("== {}\n", f.file_name().unwrap().to_string_lossy()).bytes());
        transcript.extend(std::fs::read(&f).unwrap());
    }
    Ok(transcript)
}

fn criterion_8() -> Check {
    let a = battery("1")?;
    let b = battery("1")?;
    let c = battery("4")?;
    ensure!(a == b, "two single-threaded runs differ");
    ensure!(a == c, "1 and 4 threads differ");
    let text = String::from_utf8_lossy(&a);
    ensure!(text.contains("\"value\": 6"), "ramsey K3 value missing");
    ensure!(text.contains("missing.json") && text.contains("exit 2"), "missing file not exit 2");
    Ok(format!("{} commands, {} transcript bytes identical across runs and threads 1/4", BATTERY.len(), a.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("exact small Ramsey oracle", criterion_1),
        ("step-up soundness", criterion_2),
        ("expected-count identity", criterion_3),
        ("embedding execution", criterion_4),
        ("density oracle equivalence", criterion_5),
        ("bound-evaluator consistency", criterion_6),
        ("counting identity", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match result {
            Ok(note) => println!("criterion {} {name}: PASS ({note}; {:.1?})", i + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
