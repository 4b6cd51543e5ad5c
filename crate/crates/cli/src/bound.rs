//! `bound <name> --params k=v,...`

use std::collections::BTreeMap;

use clap::{Args, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use ordered_ramsey::bounds::{
    cor_upper_log2, lemma_tripartite_feasible, lizang_lower_log2, main_exponent, precise_three_way_split,
    prop_upper_log2, stepup_lowerbound_log2, thm_lower_composite_log2, thm_main_upper_log2,
    thm_precise_upper_log2, tow, tripartite_lhs_log2, ExactExponent, LogBase, PreciseConstants,
    TripartiteVariant,
};
use ordered_ramsey::{parse_rational, Log2};

use crate::{fmt_f64, log2_json, Failure, Outcome};

#[derive(Clone, Copy, ValueEnum)]
pub enum BoundName {
    /// h, x
    Tow,
    /// t, d, s, rho [lead, tail, rho_exponent]
    Precise,
    /// t, d, log2_s
    Main,
    /// delta, eta, s, m_log2 [variant=proof|statement]
    Tripartite,
    /// d, s, rho
    Split,
    /// n, log2_r, alpha
    Stepup,
    /// t, m, c [base=2|e]
    Lizang,
    /// t, n, alpha, c [base=2|e]
    Composite,
    /// chi, k, n, r [c=4]
    Prop,
    /// chi, n, r
    Cor,
}

#[derive(Args)]
pub struct BoundArgs {
    name: BoundName,
    /// Comma-separated `key=value` pairs; numbers may be `p/q`.
    #[arg(long, default_value = "")]
    params: String,
}

struct Params(BTreeMap<String, String>);

impl Params {
    fn parse(s: &str) -> Result<Self, Failure> {
        let mut map = BTreeMap::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| Failure(format!("bad parameter `{part}`")))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Params(map))
    }

    fn raw(&self, key: &str) -> Result<&str, Failure> {
        self.0.get(key).map(String::as_str).ok_or_else(|| Failure(format!("missing parameter `{key}`")))
    }

    fn real(&self, key: &str) -> Result<f64, Failure> {
        let q = parse_rational(self.raw(key)?).map_err(|e| Failure(format!("{key}: {e}")))?;
        q.to_f64().ok_or_else(|| Failure(format!("{key}: out of range")))
    }

    fn real_or(&self, key: &str, default: f64) -> Result<f64, Failure> {
        if self.0.contains_key(key) {
            self.real(key)
        } else {
            Ok(default)
        }
    }

    fn int(&self, key: &str) -> Result<u64, Failure> {
        self.raw(key)?.parse().map_err(|_| Failure(format!("{key}: expected a non-negative integer")))
    }

    fn int_or(&self, key: &str, default: u64) -> Result<u64, Failure> {
        if self.0.contains_key(key) {
            self.int(key)
        } else {
            Ok(default)
        }
    }

    fn base(&self) -> Result<LogBase, Failure> {
        match self.0.get("base").map(String::as_str) {
            None | Some("2") => Ok(LogBase::Two),
            Some("e") | Some("natural") => Ok(LogBase::Natural),
            Some(b) => Err(Failure(format!("base: expected 2 or e, got {b}"))),
        }
    }
}

fn small(v: u64, key: &str) -> Result<u32, Failure> {
    u32::try_from(v).map_err(|_| Failure(format!("{key}: too large")))
}

fn with_flags(v: &Log2, flags: Value) -> Value {
    let mut out = log2_json(v);
    out["valid_flags"] = flags;
    out
}

fn exact(e: &ExactExponent<f64>) -> Value {
    json!({"log2": e.exact.to_string(), "err": "0", "log2_f64": fmt_f64(e.log2.value), "valid_flags": {}})
}

pub fn run(a: &BoundArgs) -> Outcome {
    let p = Params::parse(&a.params)?;
    let out = match a.name {
        BoundName::Tow => {
            let v = tow(small(p.int("h")?, "h")?, p.real("x")?)?;
            with_flags(&v, json!({"overflow": v.is_overflow()}))
        }
        BoundName::Precise => {
            let k = PreciseConstants {
                lead: p.real_or("lead", 268_435_456.0)?,
                tail: p.real_or("tail", 12.0)?,
                rho_exponent: small(p.int_or("rho_exponent", 30)?, "rho_exponent")?,
            };
            let v = thm_precise_upper_log2(p.int("t")?, small(p.int("d")?, "d")?, p.int("s")?, p.real("rho")?, &k)?;
            with_flags(&v, json!({"overflow": v.is_overflow()}))
        }
        BoundName::Main => {
            let d = small(p.int("d")?, "d")?;
            let b = thm_main_upper_log2(p.int("t")?, d, p.real("log2_s")?, &PreciseConstants::default())?;
            let (num, den) = main_exponent(d);
            let mut out = with_flags(
                &b.direct,
                json!({"above_threshold": b.above_threshold, "paths_agree": b.paths_agree(), "overflow": b.direct.is_overflow()}),
            );
            out["simplified"] = log2_json(&b.simplified);
            out["dominant"] = log2_json(&b.dominant_log2);
            out["exponent"] = json!(format!("{num}/{den}"));
            out
        }
        BoundName::Tripartite => {
            let variant = match p.0.get("variant").map(String::as_str) {
                None | Some("proof") => TripartiteVariant::Proof,
                Some("statement") => TripartiteVariant::Statement,
                Some(v) => return Err(Failure(format!("variant: expected proof or statement, got {v}"))),
            };
            let (delta, eta, s) = (p.real("delta")?, p.real("eta")?, p.int("s")?);
            let lhs = tripartite_lhs_log2(delta, eta, s, variant)?;
            let feasible = lemma_tripartite_feasible(delta, eta, s, Log2::exact(p.real("m_log2")?), variant)?;
            with_flags(&lhs, json!({"feasible": feasible}))
        }
        BoundName::Split => {
            let split = precise_three_way_split(small(p.int("d")?, "d")?, p.int("s")?, p.real("rho")?)?;
            let mut out = with_flags(&split.budget, json!({"holds": split.holds}));
            out["terms"] = json!(split.terms.iter().map(log2_json).collect::<Vec<_>>());
            out
        }
        BoundName::Stepup => {
            let b = stepup_lowerbound_log2(p.int("n")?, p.real("log2_r")?, p.real("alpha")?)?;
            with_flags(&b.log2_n, json!({"valid": b.valid}))
        }
        BoundName::Lizang => {
            let v = lizang_lower_log2(p.int("t")?, p.int("m")?, p.real("c")?, p.base()?)?;
            with_flags(&v, json!({}))
        }
        BoundName::Composite => {
            let b = thm_lower_composite_log2(p.int("t")?, p.int("n")?, p.real("alpha")?, p.real("c")?, p.base()?)?;
            with_flags(&b.log2_n, json!({"valid": b.valid}))
        }
        BoundName::Prop => {
            exact(&prop_upper_log2(p.int("chi")?, p.int("k")?, p.int("n")?, p.int("r")?, p.int_or("c", 4)?)?)
        }
        BoundName::Cor => exact(&cor_upper_log2(p.int("chi")?, p.int("n")?, p.int("r")?)?),
    };
    crate::emit(&out);
    Ok(true)
}
