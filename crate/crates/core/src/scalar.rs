use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Ordered field used for thresholds: bi-density parameters, embedding schedules
/// and proportions. Comparisons at decision points are performed in `Self`, so
/// [`BigRational`] gives bit-reproducible verdicts while `f64` trades exactness
/// for speed.
pub trait Scalar: Clone + PartialOrd + Num + FromPrimitive + Debug + Send + Sync {
    /// Smallest integer `c` with `c >= self`, clamped below at zero.
    fn ceil_to_usize(&self) -> usize;

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar")
    }

    fn to_f64_lossy(&self) -> f64;

    /// Exact text form: `p/q` for rationals, shortest round-trip for floats.
    fn render(&self) -> String;

    /// `self ^ exp` for a non-negative integer exponent.
    fn powu(&self, exp: usize) -> Self {
        num_traits::pow(self.clone(), exp)
    }
}

macro_rules! impl_float_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn ceil_to_usize(&self) -> usize {
                if *self <= 0.0 { 0 } else { self.ceil() as usize }
            }

            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }

            fn render(&self) -> String {
                self.to_string()
            }
        }
    )*};
}

impl_float_scalar!(f32, f64);

impl Scalar for BigRational {
    fn ceil_to_usize(&self) -> usize {
        if !self.is_positive() {
            return 0;
        }
        self.ceil().to_integer().to_usize().unwrap_or(usize::MAX)
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn render(&self) -> String {
        rational_string(self)
    }
}

/// Floating type used for log-space bound evaluation.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl<T> Real for T where T: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static {}

/// Parses `p/q`, an integer, or a finite decimal such as `0.99` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10u32), frac.len());
        let r = BigRational::new(num, den);
        return Ok(if negative { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Renders a rational as `p/q` (or `p` when integral).
pub(crate) fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
