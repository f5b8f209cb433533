//! The interval map `T(x) = N/x - d(x)` on `I = [alpha, alpha+1]`, its digit
//! function with the left-endpoint special case, orbits, digit expansions and
//! continued-fraction evaluation.

use dashu_int::IBig;
use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::numerics::{Precision, Real, Surd, Value};

/// One `(N, alpha)` system. `alpha` may be exact (surd/rational) or a rounded
/// real; `0 < alpha <= sqrt(N) - 1` is enforced at construction.
#[derive(Debug, Clone)]
pub struct Params {
    n: u64,
    alpha: Value,
    prec: Precision,
    alpha_real: Real,
    /// Whether `N/alpha - alpha` is an integer (the `T(alpha) = alpha + 1` case).
    special: bool,
}

impl Params {
    pub fn new(n: u64, alpha: Value, prec: Precision) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("n = {n} must be at least 2")));
        }
        let alpha_max = Surd::sqrt_int(n)?.sub_int(1);
        match &alpha {
            Value::Exact(a) => {
                if a.sign() != Ordering::Greater {
                    return Err(Error::InvalidParams(format!("alpha = {a} must be positive")));
                }
                if a.compare(&alpha_max) == Ordering::Greater {
                    return Err(Error::InvalidParams(format!(
                        "alpha = {a} exceeds sqrt({n}) - 1 = {alpha_max}"
                    )));
                }
            }
            Value::Approx(a) => {
                let eps = prec.eps_cmp();
                let hi = alpha_max.to_real(a.precision());
                if a.sign() != Ordering::Greater {
                    return Err(Error::InvalidParams(format!("alpha = {a} must be positive")));
                }
                if *a > &hi + &eps {
                    return Err(Error::InvalidParams(format!(
                        "alpha = {a} exceeds sqrt({n}) - 1 = {hi}"
                    )));
                }
            }
        }
        let alpha_real = alpha.to_real(prec);
        let special = match &alpha {
            Value::Exact(a) => Surd::from_int(n as i64)
                .div(a)
                .and_then(|t| t.sub(a))
                .map(|t| t.is_integer())
                .unwrap_or(false),
            Value::Approx(a) => {
                let t = &(&Real::from_int(n as i64, prec) / a) - a;
                t.is_integer_within(&prec.eps_int())
            }
        };
        Ok(Params {
            n,
            alpha,
            prec,
            alpha_real,
            special,
        })
    }

    /// Convenience constructor for exact integer alpha.
    pub fn with_int_alpha(n: u64, alpha: i64, prec: Precision) -> Result<Self> {
        Self::new(n, Value::Exact(Surd::from_int(alpha)), prec)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn alpha(&self) -> &Value {
        &self.alpha
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn alpha_real(&self) -> &Real {
        &self.alpha_real
    }

    pub fn alpha_plus_one(&self) -> Real {
        &self.alpha_real + 1
    }

    /// True when `N/alpha - alpha` is an integer, so `T(alpha) = alpha + 1`.
    pub fn is_special_case(&self) -> bool {
        self.special
    }

    pub fn n_real(&self) -> Real {
        Real::from_int(self.n as i64, self.prec)
    }

    fn check_domain(&self, x: &Real) -> Result<()> {
        let eps = self.prec.eps_cmp();
        if *x < &self.alpha_real - &eps || *x > &self.alpha_plus_one() + &eps {
            return Err(Error::domain(format!(
                "x = {x} outside [alpha, alpha+1] = [{}, {}]",
                self.alpha_real,
                self.alpha_plus_one()
            )));
        }
        Ok(())
    }

    fn is_left_endpoint(&self, x: &Real) -> bool {
        let eps = self.prec.eps_cmp();
        (x - &self.alpha_real).abs() <= eps
    }
}

/// Digit sequence of an expansion together with the system it came from.
#[derive(Debug, Clone)]
pub struct ExpansionDigits {
    pub digits: Vec<i64>,
    pub params: Params,
}

/// `d(x) = floor(N/x - alpha)`, with `d(alpha)` lowered by one when
/// `N/alpha - alpha` is an integer.
pub fn digit(params: &Params, x: &Real) -> Result<i64> {
    params.check_domain(x)?;
    let prec = params.prec.max(x.precision());
    let eps = prec.eps_cmp();
    let y = &(&params.n_real() / x) - &params.alpha_real;
    let mut d = y.floor_int_eps(&eps);
    if params.special && params.is_left_endpoint(x) {
        d -= IBig::ONE;
    }
    Ok(i64::try_from(&d).map_err(|_| Error::domain("digit out of i64 range"))?)
}

/// One application of the map together with the digit it used.
pub fn step(params: &Params, x: &Real) -> Result<(i64, Real)> {
    let d = digit(params, x)?;
    let t = &(&params.n_real() / x) - d;
    Ok((d, t))
}

/// `T(x) = N/x - d(x)`.
pub fn apply_t(params: &Params, x: &Real) -> Result<Real> {
    Ok(step(params, x)?.1)
}

/// `[x, T(x), ..., T^steps(x)]`.
pub fn orbit(params: &Params, x: &Real, steps: usize) -> Result<Vec<Real>> {
    let mut out = Vec::with_capacity(steps + 1);
    let mut cur = x.clone();
    out.push(cur.clone());
    for _ in 0..steps {
        cur = apply_t(params, &cur)?;
        out.push(cur.clone());
    }
    Ok(out)
}

/// First `count` digits of the expansion of `x`.
pub fn expand(params: &Params, x: &Real, count: usize) -> Result<ExpansionDigits> {
    if count == 0 {
        return Err(Error::domain("expansion needs count >= 1"));
    }
    let mut digits = Vec::with_capacity(count);
    let mut cur = x.clone();
    for _ in 0..count {
        let (d, t) = step(params, &cur)?;
        digits.push(d);
        cur = t;
    }
    Ok(ExpansionDigits {
        digits,
        params: params.clone(),
    })
}

/// Right fold `v <- N/(d + v)` over the digits, seeded with `tail`.
pub fn evaluate(n: u64, digits: &[i64], tail: &Real) -> Result<Real> {
    if digits.is_empty() {
        return Err(Error::domain("evaluate needs at least one digit"));
    }
    if tail.sign() != Ordering::Greater {
        return Err(Error::domain("tail must be positive"));
    }
    let prec = tail.precision();
    let nr = Real::from_int(n as i64, prec);
    let mut v = tail.clone();
    for &d in digits.iter().rev() {
        let denom = &v + d;
        if denom.sign() != Ordering::Greater {
            return Err(Error::ZeroDenominator(format!(
                "denominator {denom} not positive while folding digit {d}"
            )));
        }
        v = &nr / &denom;
    }
    Ok(v)
}

/// Exact right fold for surd tails (stays in the tail's quadratic field).
pub fn evaluate_exact(n: u64, digits: &[i64], tail: &Surd) -> Result<Surd> {
    if digits.is_empty() {
        return Err(Error::domain("evaluate needs at least one digit"));
    }
    if tail.sign() != Ordering::Greater {
        return Err(Error::domain("tail must be positive"));
    }
    let nr = Surd::from_int(n as i64);
    let mut v = tail.clone();
    for &d in digits.iter().rev() {
        let denom = v.add_int(d);
        if denom.sign() != Ordering::Greater {
            return Err(Error::ZeroDenominator(format!(
                "denominator {denom} not positive while folding digit {d}"
            )));
        }
        v = nr.div(&denom)?;
    }
    Ok(v)
}

/// Exact digit of a surd point. `alpha` must be exact; `x` may live in any
/// quadratic field (boundary comparisons cross fields exactly).
pub fn digit_exact(params: &Params, x: &Surd) -> Result<i64> {
    let alpha = params
        .alpha
        .as_exact()
        .ok_or_else(|| Error::domain("digit_exact requires an exact alpha"))?;
    let alpha_p1 = alpha.add_int(1);
    if x.compare(alpha) == Ordering::Less || x.compare(&alpha_p1) == Ordering::Greater {
        return Err(Error::domain(format!("x = {x} outside [alpha, alpha+1]")));
    }
    let n = Surd::from_int(params.n as i64);
    if x.compare(alpha) == Ordering::Equal {
        let y = n.div(alpha)?.sub(alpha)?;
        let mut d = y.floor_int();
        if params.special {
            d -= IBig::ONE;
        }
        return Ok(i64::try_from(&d).map_err(|_| Error::domain("digit out of i64 range"))?);
    }
    // guess from a rounded evaluation, then pin down with exact comparisons
    // against the discontinuity points p_i = N/(alpha + i)
    let y = &(&params.n_real() / &x.to_real(params.prec)) - &params.alpha_real;
    let mut k: i64 = i64::try_from(&y.floor_int()).map_err(|_| Error::domain("digit out of i64 range"))?;
    let p = |i: i64| n.div(&alpha.add_int(i));
    // d(x) = k  <=>  p_{k+1} < x <= p_k
    loop {
        if x.compare(&p(k)?) == Ordering::Greater {
            k -= 1;
        } else if x.compare(&p(k + 1)?) != Ordering::Greater {
            k += 1;
        } else {
            return Ok(k);
        }
    }
}

/// Exact map application for a surd point (requires exact alpha).
pub fn apply_t_exact(params: &Params, x: &Surd) -> Result<Surd> {
    let d = digit_exact(params, x)?;
    Surd::from_int(params.n as i64).div(x)?.sub(&Surd::from_int(d)).map_err(Into::into)
}
