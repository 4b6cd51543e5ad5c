//! Log-space evaluators for the quantitative bounds on ordered Ramsey numbers.
//!
//! Every bound is returned as a [`Log2Value`]: `value` is `log2` of the bound
//! and `err` an absolute error bound accumulated through every floating
//! operation (unit roundoff `u = epsilon / 2` per operation, plus documented
//! slack for library `lgamma`). An infinite `value` marks overflow of the
//! floating range; comparisons against it are still meaningful.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `log2` of a positive quantity with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Log2Value<T> {
    pub value: T,
    pub err: T,
}

impl<T: Real> Log2Value<T> {
    pub fn new(value: T, err: T) -> Self {
        Log2Value { value, err: err.abs() }
    }

    pub fn exact(value: T) -> Self {
        Log2Value { value, err: T::zero() }
    }

    /// The bound exceeded the floating range.
    pub fn is_overflow(&self) -> bool {
        self.value.is_infinite() && self.value > T::zero()
    }

    /// Whether `self` is certainly below `other` given both error bounds.
    pub fn certainly_lt(&self, other: &Self) -> bool {
        self.value + self.err < other.value - other.err
    }

    /// Whether the two values agree within their combined error.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.value.is_infinite() || other.value.is_infinite() {
            return self.value == other.value;
        }
        (self.value - other.value).abs() <= self.err + other.err
    }

    /// `log2` of a product.
    pub fn mul(&self, other: &Self) -> Self {
        let v = Tracked::from(*self).add(Tracked::from(*other));
        v.into()
    }

    /// `log2` of a quotient.
    pub fn div(&self, other: &Self) -> Self {
        Tracked::from(*self).sub(Tracked::from(*other)).into()
    }
}

impl<T: Real> fmt::Display for Log2Value<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {}", self.value, self.err)
    }
}

/// Value with a running absolute error bound.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Tracked<T> {
    pub v: T,
    pub e: T,
}

fn unit<T: Real>() -> T {
    T::epsilon() / (T::one() + T::one())
}

fn c<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("constant representable")
}

impl<T: Real> From<Log2Value<T>> for Tracked<T> {
    fn from(l: Log2Value<T>) -> Self {
        Tracked { v: l.value, e: l.err }
    }
}

impl<T: Real> From<Tracked<T>> for Log2Value<T> {
    fn from(t: Tracked<T>) -> Self {
        let err = if t.v.is_infinite() || t.e.is_nan() { T::zero() } else { t.e };
        Log2Value { value: t.v, err }
    }
}

impl<T: Real> Tracked<T> {
    pub fn exact(v: T) -> Self {
        Tracked { v, e: T::zero() }
    }

    /// A value that was rounded once on the way in.
    pub fn rounded(v: T) -> Self {
        Tracked { v, e: unit::<T>() * v.abs() }
    }

    pub fn int(n: u64) -> Self {
        let v = T::from_u64(n).expect("integer representable");
        if n < (1u64 << T::epsilon().recip().log2().to_u32().unwrap_or(0).min(63)) {
            Self::exact(v)
        } else {
            Self::rounded(v)
        }
    }

    fn round(v: T, e: T) -> Self {
        Tracked { v, e: e + unit::<T>() * v.abs() }
    }

    pub fn add(self, o: Self) -> Self {
        Self::round(self.v + o.v, self.e + o.e)
    }

    pub fn sub(self, o: Self) -> Self {
        Self::round(self.v - o.v, self.e + o.e)
    }

    pub fn mul(self, o: Self) -> Self {
        Self::round(self.v * o.v, self.v.abs() * o.e + o.v.abs() * self.e + self.e * o.e)
    }

    pub fn div(self, o: Self) -> Self {
        let b = o.v.abs();
        let slack = b - o.e;
        let e = if slack > T::zero() {
            (self.v.abs() / b * o.e + self.e) / slack
        } else {
            T::infinity()
        };
        Self::round(self.v / o.v, e)
    }

    pub fn neg(self) -> Self {
        Tracked { v: -self.v, e: self.e }
    }

    pub fn scale(self, k: u64) -> Self {
        self.mul(Self::int(k))
    }

    /// `log2(x)`; library `log2` is taken to be within 2 ulp.
    pub fn log2(self) -> Self {
        let v = self.v.log2();
        let lo = self.v - self.e;
        let prop = if lo > T::zero() { self.e / (lo * T::LN_2()) } else { T::infinity() };
        Tracked { v, e: prop + c::<T>(4.0) * unit::<T>() * v.abs() + unit::<T>() }
    }

    /// `log2(1 + x)` for `x > -1`.
    pub fn log2_1p(self) -> Self {
        let v = self.v.ln_1p() / T::LN_2();
        let lo = T::one() + self.v - self.e;
        let prop = if lo > T::zero() { self.e / (lo * T::LN_2()) } else { T::infinity() };
        Tracked { v, e: prop + c::<T>(4.0) * unit::<T>() * v.abs() + unit::<T>() * unit::<T>() }
    }

    /// `2^x`; library `exp2` is taken to be within 2 ulp.
    pub fn exp2(self) -> Self {
        let v = self.v.exp2();
        let grow = (self.e * T::LN_2()).exp_m1();
        Tracked { v, e: v.abs() * grow + c::<T>(4.0) * unit::<T>() * v.abs() }
    }
}

fn log2_e<T: Real>() -> Tracked<T> {
    Tracked::rounded(T::LOG2_E())
}

/// `log2(k!)`: exact summation for moderate `k`, `lgamma` beyond.
pub(crate) fn log2_factorial<T: Real>(k: u64) -> Tracked<T> {
    if k <= 4096 {
        let mut acc = Tracked::exact(T::zero());
        for i in 2..=k {
            acc = acc.add(Tracked::int(i).log2());
        }
        return acc;
    }
    let lg = libm::lgamma(k as f64 + 1.0) / std::f64::consts::LN_2;
    let v: T = c(lg);
    // lgamma is accurate to a few ulp for large arguments; 64 ulp of slack.
    let e = c::<T>(64.0 * f64::EPSILON * lg.abs()) + unit::<T>() * v.abs();
    Tracked { v, e }
}

/// `log2 C(x, k)` for real `x` given by `log2 x`, via the falling factorial
/// `x (x-1) ... (x-k+1) / k!`. Returns `-inf` when `x < k` has a
/// vanishing factor, i.e. when `x` is an integer below `k`.
pub(crate) fn log2_binomial<T: Real>(log2_x: Tracked<T>, k: u64) -> Tracked<T> {
    let mut acc = Tracked::exact(T::zero());
    let inv = log2_x.neg().exp2();
    for i in 0..k {
        // log2(x - i) = log2 x + log2(1 - i / x)
        let r = Tracked::int(i).mul(inv);
        if r.v >= T::one() {
            return Tracked::exact(T::neg_infinity());
        }
        let term = if i == 0 { log2_x } else { log2_x.add(r.neg().log2_1p()) };
        acc = acc.add(term);
    }
    acc.sub(log2_factorial(k))
}

fn log2_of<T: Real>(x: T, what: &str) -> Result<Tracked<T>> {
    if !(x > T::zero()) {
        return Err(Error::invalid(format!("{what} must be positive")));
    }
    Ok(Tracked::exact(x).log2())
}

/// `log2 tow_h(x)` where `tow_1(x) = x` and `tow_h(x) = 2^tow_{h-1}(x)`.
pub fn tow<T: Real>(h: u32, x: T) -> Result<Log2Value<T>> {
    if h < 1 {
        return Err(Error::invalid("tower height must be at least 1"));
    }
    if h == 1 {
        return Ok(log2_of(x, "x")?.into());
    }
    let mut y = Tracked::exact(x);
    for _ in 2..h {
        if y.v.is_infinite() {
            break;
        }
        y = y.exp2();
    }
    Ok(y.into())
}

/// Adjustable constants of the precise upper bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PreciseConstants<T> {
    /// Multiplier of the `s^{3/2} rho^{-e d^2} d^6` term (`2^28`).
    pub lead: T,
    /// Multiplier of the `s^2 log2(1/(1-4 rho))` term (`12`).
    pub tail: T,
    /// `e` in `rho^{-e d^2}` (`30`).
    pub rho_exponent: u32,
}

impl<T: Real> Default for PreciseConstants<T> {
    fn default() -> Self {
        PreciseConstants { lead: c(268_435_456.0), tail: c(12.0), rho_exponent: 30 }
    }
}

fn check_rho<T: Real>(rho: T) -> Result<()> {
    if !(rho > T::zero() && rho < c(0.125)) {
        return Err(Error::invalid("rho must lie in (0, 1/8)"));
    }
    Ok(())
}

/// `log2(1 / (1 - 4 rho))`.
/// `log2(1/(1-4rho))`, infinite once `4rho >= 1`.
fn log2_inv_one_minus_4<T: Real>(rho: Tracked<T>) -> Tracked<T> {
    if rho.v * c::<T>(4.0) >= T::one() {
        return Tracked { v: T::infinity(), e: T::zero() };
    }
    rho.scale(4).neg().log2_1p().neg()
}

fn precise_from_parts<T: Real>(
    log2_t: Tracked<T>,
    d: u32,
    log2_s: Tracked<T>,
    log2_rho: Tracked<T>,
    rho: Tracked<T>,
    k: &PreciseConstants<T>,
) -> Tracked<T> {
    let dd = u64::from(d) * u64::from(d);
    let log2_d = Tracked::int(u64::from(d)).log2();
    // lead * s^{3/2} * rho^{-e d^2} * d^6, assembled in log space
    let lead_log = Tracked::exact(k.lead)
        .log2()
        .add(log2_s.mul(Tracked::exact(c(1.5))))
        .sub(log2_rho.scale(u64::from(k.rho_exponent) * dd))
        .add(log2_d.scale(6));
    let lead = lead_log.exp2();
    let tail = Tracked::exact(k.tail).mul(log2_s.scale(2).exp2()).mul(log2_inv_one_minus_4(rho));
    log2_t.add(lead).add(tail)
}

/// `log2` of `t · 2^{lead·s^{3/2}·rho^{-30d^2}·d^6 + tail·s^2·log2(1/(1-4rho))}`.
pub fn thm_precise_upper_log2<T: Real>(
    t: u64,
    d: u32,
    s: u64,
    rho: T,
    constants: &PreciseConstants<T>,
) -> Result<Log2Value<T>> {
    check_rho(rho)?;
    if t == 0 || d == 0 || s == 0 {
        return Err(Error::invalid("t, d and s must be positive"));
    }
    let rho_t = Tracked::exact(rho);
    Ok(precise_from_parts(
        Tracked::int(t).log2(),
        d,
        Tracked::int(s).log2(),
        rho_t.log2(),
        rho_t,
        constants,
    )
    .into())
}

/// Same bound with `s` given as `log2 s`, for `s` beyond integer range.
pub fn thm_precise_upper_log2_logs<T: Real>(
    t: u64,
    d: u32,
    log2_s: T,
    rho: T,
    constants: &PreciseConstants<T>,
) -> Result<Log2Value<T>> {
    check_rho(rho)?;
    let rho_t = Tracked::exact(rho);
    Ok(precise_from_parts(
        Tracked::int(t).log2(),
        d,
        Tracked::exact(log2_s),
        rho_t.log2(),
        rho_t,
        constants,
    )
    .into())
}

/// Main upper bound with `rho = s^{-1/(2+60d^2)}`, evaluated two ways.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MainBound<T> {
    /// Substituting `rho` into the precise bound.
    pub direct: Log2Value<T>,
    /// Using `s^{3/2} rho^{-30d^2} = s^{2 - 1/(2+60d^2)}`.
    pub simplified: Log2Value<T>,
    /// Exponent of `s` as the fraction `(num, den)`.
    pub exponent: (u64, u64),
    /// `s > 8^{2+60d^2}`, the range where the substitution gives `rho < 1/8`.
    pub above_threshold: bool,
    /// `log2` of the dominant exponent term `lead s^{2-1/(2+60d^2)} d^6`; finite
    /// where the bound itself overflows.
    pub dominant_log2: Log2Value<T>,
}

impl<T: Real> MainBound<T> {
    pub fn paths_agree(&self) -> bool {
        self.direct.agrees_with(&self.simplified)
    }
}

/// Exponent `2 - 1/(2 + 60 d^2)` of `s`, as a reduced fraction.
pub fn main_exponent(d: u32) -> (u64, u64) {
    let den = 2 + 60 * u64::from(d) * u64::from(d);
    (2 * den - 1, den)
}

/// Main upper bound for `s` given as `log2 s`.
pub fn thm_main_upper_log2<T: Real>(
    t: u64,
    d: u32,
    log2_s: T,
    constants: &PreciseConstants<T>,
) -> Result<MainBound<T>> {
    if t == 0 || d == 0 {
        return Err(Error::invalid("t and d must be positive"));
    }
    if !(log2_s > T::zero()) {
        return Err(Error::invalid("s must exceed 1"));
    }
    let den = 2 + 60 * u64::from(d) * u64::from(d);
    let ls = Tracked::exact(log2_s);
    let log2_rho = ls.div(Tracked::int(den)).neg();
    let rho = log2_rho.exp2();
    let log2_t = Tracked::int(t).log2();

    let direct = precise_from_parts(log2_t, d, ls, log2_rho, rho, constants);

    let (num, den_e) = main_exponent(d);
    let e = Tracked::int(num).div(Tracked::int(den_e));
    let lead_log = Tracked::exact(constants.lead)
        .log2()
        .add(Tracked::int(u64::from(d)).log2().scale(6))
        .add(e.mul(ls));
    let k = PreciseConstants { rho_exponent: constants.rho_exponent, ..*constants };
    let tail = Tracked::exact(k.tail).mul(ls.scale(2).exp2()).mul(log2_inv_one_minus_4(rho));
    let simplified = log2_t.add(lead_log.exp2()).add(tail);

    let above = log2_s > T::from_u64(3 * den).unwrap();
    let bound = MainBound {
        direct: direct.into(),
        simplified: simplified.into(),
        exponent: (num, den_e),
        above_threshold: above,
        dominant_log2: lead_log.into(),
    };
    if constants.rho_exponent == 30 && !bound.paths_agree() {
        return Err(Error::invalid("direct and simplified evaluations disagree"));
    }
    Ok(bound)
}

/// Which third factor the tripartite condition uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TripartiteVariant {
    /// `(delta/16)^{4s}` as in the lemma's statement.
    Statement,
    /// `(16/delta)^{4s}` as used when the lemma is applied.
    #[default]
    Proof,
}

/// The three factors of the tripartite condition, each in `log2`.
pub fn tripartite_terms_log2<T: Real>(
    delta: T,
    eta: T,
    s: u64,
    variant: TripartiteVariant,
) -> Result<[Log2Value<T>; 3]> {
    if !(delta > T::zero()) {
        return Err(Error::invalid("delta must be positive"));
    }
    check_rho(eta).map_err(|_| Error::invalid("eta must lie in (0, 1/8)"))?;
    if s == 0 {
        return Err(Error::invalid("s must be positive"));
    }
    let d = Tracked::exact(delta);
    let ls = Tracked::int(s).log2();
    // log2(e) 2^10 delta^{-2} s^{3/2}
    let first = log2_e::<T>()
        .mul(Tracked::exact(c(1024.0)))
        .mul(ls.mul(Tracked::exact(c(1.5))).exp2())
        .div(d.mul(d));
    // 4 s^2 log2(1/(1-4 eta))
    let second = Tracked::int(s).mul(Tracked::int(s)).scale(4).mul(log2_inv_one_minus_4(Tracked::exact(eta)));
    let ratio = d.log2().sub(Tracked::exact(c(4.0)));
    let third = match variant {
        TripartiteVariant::Statement => ratio,
        TripartiteVariant::Proof => ratio.neg(),
    }
    .scale(4 * s);
    Ok([first.into(), second.into(), third.into()])
}

/// Left side of the tripartite condition, in `log2`.
pub fn tripartite_lhs_log2<T: Real>(delta: T, eta: T, s: u64, variant: TripartiteVariant) -> Result<Log2Value<T>> {
    let [a, b, c3] = tripartite_terms_log2(delta, eta, s, variant)?;
    Ok(Tracked::from(a).add(Tracked::from(b)).add(Tracked::from(c3)).into())
}

/// Whether the tripartite condition holds against `m` given as `log2 m`.
pub fn lemma_tripartite_feasible<T: Real>(
    delta: T,
    eta: T,
    s: u64,
    m_log2: Log2Value<T>,
    variant: TripartiteVariant,
) -> Result<bool> {
    let lhs = tripartite_lhs_log2(delta, eta, s, variant)?;
    Ok(lhs.value + lhs.err <= m_log2.value - m_log2.err)
}

/// The estimate that closes the precise upper bound: at
/// `eps = 2^-6 rho^{15 d^2} d^-3` and `N/t` equal to the bound, each factor
/// of the tripartite condition is at most `(N/t)^{1/3}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThreeWaySplit<T> {
    pub terms: [Log2Value<T>; 3],
    /// `log2(N/t) / 3`.
    pub budget: Log2Value<T>,
    pub holds: [bool; 3],
}

pub fn precise_three_way_split<T: Real>(d: u32, s: u64, rho: T) -> Result<ThreeWaySplit<T>> {
    check_rho(rho)?;
    let eps = epsilon_for::<T>(d, rho);
    let terms = tripartite_terms_log2(eps.v, rho, s, TripartiteVariant::Proof)?;
    let full = thm_precise_upper_log2(1, d, s, rho, &PreciseConstants::default())?;
    let budget: Log2Value<T> = Tracked::from(full).div(Tracked::exact(c(3.0))).into();
    let holds = terms.map(|t| t.value + t.err <= budget.value - budget.err);
    Ok(ThreeWaySplit { terms, budget, holds })
}

/// `2^-6 rho^{15 d^2} d^-3`.
pub(crate) fn epsilon_for<T: Real>(d: u32, rho: T) -> Tracked<T> {
    let dd = u64::from(d) * u64::from(d);
    Tracked::exact(rho)
        .log2()
        .scale(15 * dd)
        .sub(Tracked::exact(c(6.0)))
        .sub(Tracked::int(u64::from(d)).log2().scale(3))
        .exp2()
}

/// Lower bound from the step-up construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepUpBound<T> {
    pub log2_n: Log2Value<T>,
    /// `2n < R^alpha`.
    pub valid: bool,
}

/// `log2 N = ((n+2)/6) ((1-alpha) log2 R - 4 log2 e)`, with validity `2n < R^alpha`.
pub fn stepup_lowerbound_log2<T: Real>(n: u64, log2_r: T, alpha: T) -> Result<StepUpBound<T>> {
    if !(alpha > T::zero() && alpha <= T::one()) {
        return Err(Error::invalid("alpha must lie in (0, 1]"));
    }
    if !(log2_r >= T::one()) {
        return Err(Error::invalid("R must be at least 2"));
    }
    let lr = Tracked::exact(log2_r);
    let a = Tracked::exact(alpha);
    let inner = Tracked::exact(T::one()).sub(a).mul(lr).sub(log2_e::<T>().scale(4));
    let log2_n = Tracked::int(n + 2).div(Tracked::exact(c(6.0))).mul(inner);
    let lhs = Tracked::<T>::int(2 * n).log2();
    let rhs = a.mul(lr);
    Ok(StepUpBound { log2_n: log2_n.into(), valid: lhs.v + lhs.e < rhs.v - rhs.e })
}

/// Base of the logarithm inside `(m / log m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Two,
    Natural,
}

/// `log2( c (m / log m)^{(t+1)/2} )`.
pub fn lizang_lower_log2<T: Real>(t: u64, m: u64, c_const: T, base: LogBase) -> Result<Log2Value<T>> {
    if m < 2 {
        return Err(Error::invalid("m must be at least 2"));
    }
    if t < 3 {
        return Err(Error::invalid("t must be at least 3"));
    }
    let lm = Tracked::int(m).log2();
    let log_m = match base {
        LogBase::Two => lm,
        LogBase::Natural => lm.mul(Tracked::rounded(T::LN_2())),
    };
    let half = Tracked::int(t + 1).div(Tracked::exact(c(2.0)));
    let v = log2_of(c_const, "c")?.add(half.mul(lm.sub(log_m.log2())));
    Ok(v.into())
}

/// Step-up bound fed with the lower bound on `R = R(K_t, K_{m,m})`, `m = ceil(n/4)`.
pub fn thm_lower_composite_log2<T: Real>(
    t: u64,
    n: u64,
    alpha: T,
    c_const: T,
    base: LogBase,
) -> Result<StepUpBound<T>> {
    let m = n.div_ceil(4).max(2);
    let r = lizang_lower_log2(t, m, c_const, base)?;
    let b = stepup_lowerbound_log2(n, r.value, alpha)?;
    Ok(StepUpBound {
        log2_n: Log2Value::new(b.log2_n.value, b.log2_n.err + r.err * T::from_u64(n + 2).unwrap()),
        valid: b.valid,
    })
}

/// Upper bound of the general proposition: `log2 N = R^{chi(chi-1)} (c chi n)^{chi-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactExponent<T> {
    /// The exponent itself, i.e. `log2` of the bound, as an exact integer.
    pub exact: BigUint,
    /// The same exponent as a floating `log2` value.
    pub log2: Log2Value<T>,
}

fn big_to_real<T: Real>(v: &BigUint) -> Log2Value<T> {
    let bits = v.bits();
    if bits <= 53 {
        let x = T::from_u64(v.iter_u64_digits().next().unwrap_or(0)).unwrap();
        return Tracked::rounded(x).into();
    }
    // keep the top 64 bits
    let shift = bits - 64;
    let top: BigUint = v >> shift;
    let mant = T::from_u64(top.iter_u64_digits().next().unwrap()).unwrap();
    let scale = T::from_u64(shift).unwrap().exp2();
    let x = mant * scale;
    let rel = c::<T>(2.0).powi(-63) + unit::<T>() * c(3.0);
    Log2Value::new(x, x.abs() * rel)
}

pub fn prop_upper_log2<T: Real>(chi: u64, k: u64, n: u64, r: u64, c_const: u64) -> Result<ExactExponent<T>> {
    if !(chi >= k && k >= 2) {
        return Err(Error::invalid("need chi >= k >= 2"));
    }
    if n == 0 || r == 0 || c_const == 0 {
        return Err(Error::invalid("n, R and c must be positive"));
    }
    let exponent = num_traits::pow(BigUint::from(r), (chi * (chi - 1)) as usize)
        * num_traits::pow(BigUint::from(c_const * chi * n), (chi - 1) as usize);
    let log2 = big_to_real(&exponent);
    Ok(ExactExponent { exact: exponent, log2 })
}

/// Corollary bound: `log2 N = 2^{2R} chi^2 n^2` with `R = R(K_{chi-1})`.
pub fn cor_upper_log2<T: Real>(chi: u64, n: u64, r_clique: u64) -> Result<ExactExponent<T>> {
    if chi < 3 {
        return Err(Error::invalid("chi must be at least 3"));
    }
    let exponent = (BigUint::one() << (2 * r_clique)) * BigUint::from(chi * chi) * BigUint::from(n) * BigUint::from(n);
    let log2 = if exponent.is_zero() { Log2Value::exact(T::zero()) } else { big_to_real(&exponent) };
    Ok(ExactExponent { exact: exponent, log2 })
}

/// The displayed chain bounding the expected number of red copies of the
/// complete 3-partite hypergraph with parts of size `n`, from its opening
/// binomial form (stage 0) to the closed form (stage 4). Every stage is an
/// upper bound on the expectation, not the expectation itself.
#[derive(Clone, Debug, PartialEq)]
pub struct RedCopyChain<T> {
    pub stages: [Log2Value<T>; 5],
}

impl<T: Real> RedCopyChain<T> {
    /// The tightest (first) bound of the chain.
    pub fn bound(&self) -> Log2Value<T> {
        self.stages[0]
    }

    /// The closed form, which equals 0 when `N = (R^{1-alpha}/e^4)^{(n+2)/6}`.
    pub fn terminal(&self) -> Log2Value<T> {
        self.stages[4]
    }
}

/// Evaluates the chain with `N` and `R` given as `log2 N` and `log2 R`.
///
/// Stage 1 follows the displayed formula, whose factor `2` is not raised to
/// the `n`-th power; stage 2 onwards carry `2^n`.
pub fn expected_red_copies_log2<T: Real>(log2_n: T, log2_r: T, alpha: T, n: u64, l: u64) -> Result<RedCopyChain<T>> {
    if n == 0 || l == 0 {
        return Err(Error::invalid("n and l must be positive"));
    }
    if !(alpha > T::zero() && alpha <= T::one()) {
        return Err(Error::invalid("alpha must lie in (0, 1]"));
    }
    if !(log2_r >= T::zero()) {
        return Err(Error::invalid("R must be at least 1"));
    }
    let ln = Tracked::exact(log2_n);
    let lr = Tracked::exact(log2_r);
    let q = n + l - 1;
    let lq = Tracked::int(q).log2();
    let le = log2_e::<T>();
    let one = Tracked::exact(T::one());
    let nn = Tracked::int(n);
    let n2 = Tracked::int(n).mul(Tracked::int(n));
    let q_over_r = lq.sub(lr);

    let s0 = log2_binomial(ln, 3 * n)
        .add(one)
        .add(log2_binomial(lr, q).mul(nn))
        .add(n2.scale(2).mul(q_over_r));

    let s1 = ln
        .scale(3 * n)
        .add(one)
        .add(nn.scale(q).mul(le.add(lr).sub(lq)))
        .add(n2.scale(2).mul(q_over_r));

    let diff = Tracked::exact(c::<T>(n as f64 - l as f64 + 1.0));
    let s2 = nn.mul(ln.scale(3).add(one).add(le.scale(q)).add(diff.mul(q_over_r)));

    let am1 = Tracked::exact(alpha).sub(one);
    let s3 = nn.mul(ln.scale(3).add(le.scale(2 * n)).add(am1.mul(diff).mul(lr)));

    let half = Tracked::exact(c::<T>(n as f64 / 2.0 + 1.0));
    let s4 = nn.mul(ln.scale(3).add(half.mul(le.scale(4).add(am1.mul(lr)))));

    Ok(RedCopyChain { stages: [s0.into(), s1.into(), s2.into(), s3.into(), s4.into()] })
}

/// `log2 N` for `N = (R^{1-alpha}/e^4)^{(n+2)/6}`.
pub fn critical_log2_n<T: Real>(log2_r: T, alpha: T, n: u64) -> Log2Value<T> {
    let inner = Tracked::exact(T::one())
        .sub(Tracked::exact(alpha))
        .mul(Tracked::exact(log2_r))
        .sub(log2_e::<T>().scale(4));
    Tracked::int(n + 2).div(Tracked::exact(c(6.0))).mul(inner).into()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn towers() {
        assert!(close(tow(1, 7.0f64).unwrap().value, 7f64.log2(), 1e-15));
        assert_eq!(tow(2, 3.0f64).unwrap().value, 3.0);
        assert_eq!(tow(3, 2.0f64).unwrap().value, 4.0);
        assert!(tow(0, 2.0f64).is_err());
        assert!(tow(6, 2.0f64).unwrap().is_overflow());
    }

    #[test]
    fn precise_preconditions_and_scaling() {
        let k = PreciseConstants::default();
        assert!(thm_precise_upper_log2(10, 2, 4, 0.125f64, &k).is_err());
        let below = thm_precise_upper_log2(10, 1, 4, 0.12f64, &k).unwrap();
        assert!(below.value.is_finite());
        let second = |rho: f64| -(1.0 - 4.0 * rho).log2();
        assert!(second(0.1249) > second(0.12));
        // dominant term scales by 2^{3/2} when s doubles
        let k0 = PreciseConstants { tail: 0.0, ..k };
        let a = thm_precise_upper_log2(1, 1, 1 << 10, 0.1f64, &k0).unwrap().value;
        let b = thm_precise_upper_log2(1, 1, 1 << 11, 0.1f64, &k0).unwrap().value;
        assert!(close(b / a, 2f64.powf(1.5), 1e-9));
    }

    #[test]
    fn main_bound_exponent() {
        assert_eq!(main_exponent(1), (123, 62));
        let b = thm_main_upper_log2(10, 1, 200.0f64, &PreciseConstants::default()).unwrap();
        assert!(b.paths_agree());
        let mut last = 0.0;
        for d in 1..4 {
            let v = thm_main_upper_log2(10, d, 200.0f64, &PreciseConstants::default()).unwrap().dominant_log2.value;
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn tripartite_examples() {
        let s = TripartiteVariant::Statement;
        let p = TripartiteVariant::Proof;
        let a = tripartite_lhs_log2(16.0f64, 0.1, 3, s).unwrap();
        let b = tripartite_lhs_log2(16.0f64, 0.1, 3, p).unwrap();
        assert!(a.agrees_with(&b));
        assert!(tripartite_lhs_log2(0.5f64, 0.1, 3, s).unwrap().value <= tripartite_lhs_log2(0.5, 0.1, 3, p).unwrap().value);
        assert!(lemma_tripartite_feasible(0.25f64, 0.1, 3, Log2Value::exact(1e6), p).unwrap());
        assert!(!lemma_tripartite_feasible(0.25f64, 0.1, 3, Log2Value::exact(10.0), p).unwrap());
        assert!(lemma_tripartite_feasible(0.25f64, 0.125, 3, Log2Value::exact(10.0), p).is_err());
    }

    #[test]
    fn stepup_examples() {
        let b = stepup_lowerbound_log2(100, 20.0f64, 0.5).unwrap();
        assert!(close(b.log2_n.value, 17.0 * (10.0 - 4.0 * std::f64::consts::LOG2_E), 1e-9));
        assert!(b.valid);
        let one = stepup_lowerbound_log2(100, 20.0f64, 1.0).unwrap();
        assert!(one.log2_n.value < 0.0);
        assert!(stepup_lowerbound_log2(100, 21.0f64, 0.5).unwrap().log2_n.value > b.log2_n.value);
    }

    #[test]
    fn lizang_examples() {
        let v = lizang_lower_log2(3, 1 << 16, 1.0f64, LogBase::Two).unwrap();
        assert!(close(v.value, 24.0, 1e-12));
        let w = lizang_lower_log2(7, 1 << 16, 1.0f64, LogBase::Two).unwrap();
        assert!(close(w.value, 48.0, 1e-12));
        assert!(lizang_lower_log2(3, 1, 1.0f64, LogBase::Two).is_err());
    }

    #[test]
    fn exact_exponents() {
        assert_eq!(prop_upper_log2::<f64>(3, 3, 2, 3, 4).unwrap().exact, 419_904u32.into());
        assert_eq!(prop_upper_log2::<f64>(2, 2, 1, 2, 4).unwrap().exact, 32u32.into());
        assert_eq!(cor_upper_log2::<f64>(3, 1, 2).unwrap().exact, 144u32.into());
        assert_eq!(
            cor_upper_log2::<f64>(3, 4, 2).unwrap().exact,
            cor_upper_log2::<f64>(3, 1, 2).unwrap().exact * 16u32
        );
        assert!(cor_upper_log2::<f64>(2, 1, 2).is_err());
    }

    #[test]
    fn chain_terminal_is_zero_at_critical_n() {
        for (lr, alpha, n) in [(40.0f64, 0.25, 10u64), (200.0, 0.5, 30), (1000.0, 0.1, 100)] {
            let ln = critical_log2_n(lr, alpha, n).value;
            let l = n.div_ceil(2);
            let chain = expected_red_copies_log2(ln, lr, alpha, n, l).unwrap();
            assert!(chain.terminal().value.abs() < 1e-6, "{:?}", chain.terminal());
        }
    }

    #[test]
    fn log2_binomial_small() {
        let v: Tracked<f64> = log2_binomial(Tracked::exact(10f64.log2()), 3);
        assert!(close(v.v, 120f64.log2(), 1e-12));
        assert!(v.e < 1e-13);
        let z: Tracked<f64> = log2_binomial(Tracked::exact(2f64.log2()), 3);
        assert_eq!(z.v, f64::NEG_INFINITY);
    }
}
