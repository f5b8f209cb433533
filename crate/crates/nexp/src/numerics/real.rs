//! Configurable-precision real arithmetic.
//!
//! `Real` wraps a binary big-float with an explicit mantissa precision that is
//! carried through every operation: combining two values yields the larger of
//! the two precisions, so a computation never silently degrades below the
//! precision its inputs were built with. Arithmetic at a fixed precision is
//! deterministic (round-to-nearest-even at each step).

use dashu_base::{Abs, SquareRoot};
use dashu_float::{round::mode::HalfEven, FBig};
use dashu_int::IBig;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

type F = FBig<HalfEven, 2>;
type D = FBig<HalfEven, 10>;

/// Minimum supported mantissa precision in bits.
pub const MIN_PRECISION: u32 = 64;
/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 128;

/// Mantissa precision in bits, clamped to at least [`MIN_PRECISION`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub fn new(bits: u32) -> Self {
        Precision(bits.max(MIN_PRECISION))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Comparison tolerance at this precision: `2^(8 - bits)`.
    pub fn eps_cmp(self) -> Real {
        Real::exp2(8 - self.0 as i64, self)
    }

    /// Integrality tolerance at this precision: `2^(16 - bits)`.
    pub fn eps_int(self) -> Real {
        Real::exp2(16 - self.0 as i64, self)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(DEFAULT_PRECISION)
    }
}

/// A real number at a fixed binary precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Real {
    v: F,
    prec: Precision,
}

/// Round `v` so its significand holds at most `bits` bits (nearest-even).
pub(crate) fn fbig_round_to_bits(v: F, bits: u32) -> F {
    if v.repr().digits() > bits as usize {
        let (signif, exp) = v.into_repr().into_parts();
        F::from_parts(signif, exp).with_precision(bits as usize).value()
    } else if v.precision() != bits as usize {
        v.with_precision(bits as usize).value()
    } else {
        v
    }
}

/// Division with a single round-to-nearest-even at `bits` significand bits.
///
/// The backend's own division quantizes at a fixed ulp scale derived from
/// the operand representations, which can leave an extra significand bit;
/// re-rounding that afterwards would double-round. Dividing the significands
/// directly with an explicit guard/sticky keeps every quotient correctly
/// rounded in one step, so results line up bit for bit with reference
/// implementations at the same mantissa width.
pub(crate) fn fbig_div_rounded(a: &F, b: &F, bits: u32) -> F {
    use dashu_base::{BitTest, DivRem, Sign, UnsignedAbs};
    use dashu_int::UBig;

    let ra = a.repr();
    let rb = b.repr();
    assert!(!rb.significand().is_zero(), "division by zero");
    if ra.significand().is_zero() {
        return F::ZERO.with_precision(bits as usize).value();
    }
    let sign = ra.significand().sign() * rb.significand().sign();
    let ua = ra.significand().clone().unsigned_abs();
    let ub = rb.significand().clone().unsigned_abs();
    let da = ua.bit_len() as isize;
    let db = ub.bit_len() as isize;
    // scale the numerator so the integer quotient has `bits` or `bits + 1` bits
    let s = db + bits as isize - da;
    let (num, den) = if s >= 0 {
        (ua << (s as usize), ub)
    } else {
        (ua, ub << ((-s) as usize))
    };
    let (mut q, r) = num.div_rem(&den);
    let mut ulp_exp = ra.exponent() - rb.exponent() - s;
    let qb = q.bit_len();
    debug_assert!(qb == bits as usize || qb == bits as usize + 1);
    let (guard, sticky);
    if qb == bits as usize + 1 {
        guard = q.bit(0);
        q >>= 1usize;
        ulp_exp += 1;
        sticky = !r.is_zero();
    } else {
        // the guard is the next quotient bit: 2r >= den
        let rz = r.is_zero();
        let r2 = r << 1usize;
        guard = r2 >= den;
        sticky = if guard { r2 > den } else { !rz };
    }
    if guard && (sticky || q.bit(0)) {
        q += UBig::ONE;
        if q.bit_len() > bits as usize {
            q >>= 1usize;
            ulp_exp += 1;
        }
    }
    let signif = match sign {
        Sign::Positive => IBig::from(q),
        Sign::Negative => -IBig::from(q),
    };
    F::from_parts(signif, ulp_exp).with_precision(bits as usize).value()
}

impl Real {
    fn wrap(v: F, prec: Precision) -> Self {
        let v = fbig_round_to_bits(v, prec.bits());
        debug_assert!(v.repr().digits() <= prec.bits() as usize);
        Real { v, prec }
    }

    pub fn zero(prec: Precision) -> Self {
        Self::wrap(F::ZERO, prec)
    }

    pub fn one(prec: Precision) -> Self {
        Self::wrap(F::ONE, prec)
    }

    pub fn from_int(n: i64, prec: Precision) -> Self {
        Self::wrap(F::from(n), prec)
    }

    pub fn from_ibig(n: &IBig, prec: Precision) -> Self {
        Self::wrap(F::from(n.clone()), prec)
    }

    /// Exact power of two `2^e`.
    pub fn exp2(e: i64, prec: Precision) -> Self {
        let one = F::ONE.with_precision(prec.bits() as usize).value();
        if e >= 0 {
            Self::wrap(one << (e as isize), prec)
        } else {
            Self::wrap(one >> ((-e) as isize), prec)
        }
    }

    /// `p / q` correctly rounded at `prec`.
    pub fn from_ratio(p: &IBig, q: &IBig, prec: Precision) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::ZeroDenominator("rational with zero denominator".into()));
        }
        let pf = F::from(p.clone());
        let qf = F::from(q.clone());
        Ok(Self::wrap(fbig_div_rounded(&pf, &qf, prec.bits()), prec))
    }

    /// Parse a decimal literal ("49.98019737", "-3", "2.5e-3") at `prec`.
    ///
    /// The decimal significand is taken exactly and converted with a single
    /// correctly-rounded base change.
    pub fn parse_decimal(s: &str, prec: Precision) -> Result<Self> {
        let d = D::from_str(s.trim()).map_err(|e| Error::Parse(format!("invalid decimal {s:?}: {e}")))?;
        let v = d.with_base_and_precision::<2>(prec.bits() as usize).value();
        Ok(Self::wrap(v, prec))
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    /// Same value re-rounded at a different precision.
    pub fn with_precision(&self, prec: Precision) -> Self {
        Self::wrap(self.v.clone(), prec)
    }

    pub fn is_zero(&self) -> bool {
        self.v.repr().is_zero()
    }

    pub fn sign(&self) -> Ordering {
        self.v.cmp(&F::ZERO)
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.clone().abs(), self.prec)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.sign() == Ordering::Less {
            return Err(Error::domain("square root of a negative value"));
        }
        Ok(Self::wrap(self.v.sqrt(), self.prec))
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator("1/0".into()));
        }
        let one = F::ONE.with_precision(self.prec.bits() as usize).value();
        Ok(Self::wrap(fbig_div_rounded(&one, &self.v, self.prec.bits()), self.prec))
    }

    /// Largest integer not above the value.
    pub fn floor_int(&self) -> IBig {
        self.v.floor().to_int().value()
    }

    /// Floor with a snap-up tolerance: values within `eps` below an integer
    /// are treated as that integer. This keeps boundary points (where the
    /// argument is an exact integer mathematically but rounded in binary)
    /// reproducible.
    pub fn floor_int_eps(&self, eps: &Real) -> IBig {
        let f = self.floor_int();
        let next = &Real::from_ibig(&(f.clone() + IBig::ONE), self.prec) - self;
        if next.sign() != Ordering::Greater || &next <= eps {
            f + IBig::ONE
        } else {
            f
        }
    }

    /// True when the value is within `eps` of some integer.
    pub fn is_integer_within(&self, eps: &Real) -> bool {
        let f = self.floor_int();
        let lo = self - &Real::from_ibig(&f, self.prec);
        let hi = &Real::from_ibig(&(f + IBig::ONE), self.prec) - self;
        &lo <= eps || &hi <= eps
    }

    /// Nearest integer (used together with [`is_integer_within`]).
    pub fn round_int(&self) -> IBig {
        let half = Real::from_ratio(&IBig::ONE, &IBig::from(2), self.prec).unwrap();
        (self + &half).floor_int()
    }

    /// Comparison within an absolute tolerance.
    pub fn approx_eq(&self, other: &Real, eps: &Real) -> bool {
        (self - other).abs() <= *eps
    }

    pub fn to_f64(&self) -> f64 {
        self.v.to_f64().value()
    }

    pub(crate) fn as_fbig(&self) -> &F {
        &self.v
    }

    #[cfg(test)]
    pub(crate) fn from_fbig(v: F, prec: Precision) -> Self {
        Self::wrap(v, prec)
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let d = self.v.clone().with_base_and_precision::<10>(digits).value();
        format!("{d}")
    }

}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        self.v.cmp(&other.v)
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let prec = self.prec.max(rhs.prec);
                Real::wrap((&self.v).$method(&rhs.v), prec)
            }
        }
        impl $trait<i64> for &Real {
            type Output = Real;
            fn $method(self, rhs: i64) -> Real {
                let r = Real::from_int(rhs, self.prec);
                (self).$method(&r)
            }
        }
        impl $trait for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
    };
}

real_binop!(Add, add);
real_binop!(Sub, sub);
real_binop!(Mul, mul);

impl Div for &Real {
    type Output = Real;
    fn div(self, rhs: &Real) -> Real {
        let prec = self.prec.max(rhs.prec);
        Real::wrap(fbig_div_rounded(&self.v, &rhs.v, prec.bits()), prec)
    }
}
impl Div<i64> for &Real {
    type Output = Real;
    fn div(self, rhs: i64) -> Real {
        let r = Real::from_int(rhs, self.prec);
        self.div(&r)
    }
}
impl Div for Real {
    type Output = Real;
    fn div(self, rhs: Real) -> Real {
        (&self).div(&rhs)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(-self.v.clone(), self.prec)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.prec.bits() as f64 * 0.30103).ceil() as usize;
        write!(f, "{}", self.to_decimal_string(digits.max(6)))
    }
}
