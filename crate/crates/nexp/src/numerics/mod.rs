//! Numeric foundation: configurable-precision reals and exact surds.

pub(crate) mod real;
mod surd;

pub use real::{Precision, Real, DEFAULT_PRECISION, MIN_PRECISION};
pub use surd::{surd_compare, surd_normalize, Surd};

use crate::error::Result;
use std::cmp::Ordering;

/// A quantity that is either exact (a surd) or a rounded real.
///
/// Exact inputs keep every downstream comparison exact; decimal inputs carry
/// their working precision instead.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(Surd),
    Approx(Real),
}

impl Value {
    pub fn to_real(&self, prec: Precision) -> Real {
        match self {
            Value::Exact(s) => s.to_real(prec),
            Value::Approx(r) => r.with_precision(prec),
        }
    }

    pub fn as_exact(&self) -> Option<&Surd> {
        match self {
            Value::Exact(s) => Some(s),
            Value::Approx(_) => None,
        }
    }

    /// Ordering against another value; exact when both sides are exact.
    pub fn compare(&self, other: &Value, prec: Precision) -> Ordering {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => surd_compare(a, b),
            _ => self.to_real(prec).cmp(&other.to_real(prec)),
        }
    }

    /// Decimal rendering alongside the exact form when available.
    pub fn display_pair(&self, prec: Precision, digits: usize) -> (Option<String>, String) {
        match self {
            Value::Exact(s) => (Some(s.to_string()), s.to_real(prec).to_decimal_string(digits)),
            Value::Approx(r) => (None, r.to_decimal_string(digits)),
        }
    }
}

impl From<Surd> for Value {
    fn from(s: Surd) -> Self {
        Value::Exact(s)
    }
}

impl From<Real> for Value {
    fn from(r: Real) -> Self {
        Value::Approx(r)
    }
}

/// Parse a value literal: surd form, rational `p/q`, or decimal at `prec`.
pub fn parse_value(text: &str, prec: Precision) -> Result<Value> {
    if let Ok(s) = text.parse::<Surd>() {
        return Ok(Value::Exact(s));
    }
    Ok(Value::Approx(Real::parse_decimal(text, prec)?))
}
