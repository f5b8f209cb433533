//! Exact quadratic irrationals `(p + q*sqrt(d))/r`.
//!
//! Values are kept in a canonical form: `d` squarefree (0 for rationals),
//! `gcd(p, q, r) = 1` and `r > 0`, which makes structural equality coincide
//! with numeric equality. Same-field arithmetic is exact; ordering across
//! different radicands falls back to interval refinement at escalating
//! precision, which terminates because distinct normalized surds with
//! different radicands are never numerically equal.

use dashu_base::UnsignedAbs;
use dashu_int::{IBig, UBig};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::real::{Precision, Real};
use crate::error::{Error, Result};

/// Exact value `(p + q*sqrt(d)) / r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Surd {
    p: IBig,
    q: IBig,
    r: IBig,
    d: UBig,
}

fn gcd(a: &UBig, b: &UBig) -> UBig {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let t = &a % &b;
        a = b;
        b = t;
    }
    a
}

/// Integer floor square root, overflow-safe via u128 squares.
fn isqrt_u64(d: u64) -> u64 {
    if d == 0 {
        return 0;
    }
    let mut r = (d as f64).sqrt() as u64;
    while (r as u128 + 1) * (r as u128 + 1) <= d as u128 {
        r += 1;
    }
    while (r as u128) * (r as u128) > d as u128 {
        r -= 1;
    }
    r
}

/// Trial-division bound for square extraction: radicands up to `BOUND^2`
/// (1e12) are made exactly squarefree. Larger radicands only arise from
/// astronomically high digits; they get small square factors removed and a
/// perfect-square check, which is all the exact paths ever rely on.
const SQUAREFREE_TRIAL_BOUND: u64 = 1_000_000;

/// Split `d` into `(s, f)` with `d = s^2 * f`, `f` squarefree up to the
/// trial bound.
fn squarefree_split(d: &UBig) -> Result<(UBig, UBig)> {
    if d.is_zero() {
        return Ok((UBig::ONE, UBig::ZERO));
    }
    let mut d: u64 = d
        .clone()
        .try_into()
        .map_err(|_| Error::domain("radicand too large to normalize (must fit in 64 bits)"))?;
    let root = isqrt_u64(d);
    if root * root == d {
        return Ok((UBig::from(root), UBig::ONE));
    }
    let mut s = 1u64;
    let mut f = 2u64;
    while f <= SQUAREFREE_TRIAL_BOUND && (f as u128) * (f as u128) <= d as u128 {
        let f2 = f * f;
        while d % f2 == 0 {
            d /= f2;
            s *= f;
        }
        f += 1;
    }
    // the remaining part may itself have become a perfect square
    let root = isqrt_u64(d);
    if root * root == d {
        s *= root;
        d = 1;
    }
    Ok((UBig::from(s), UBig::from(d)))
}

impl Surd {
    /// Build and normalize `(p + q*sqrt(d))/r`. Rejects `r = 0`.
    pub fn new(
        p: impl Into<IBig>,
        q: impl Into<IBig>,
        r: impl Into<IBig>,
        d: impl Into<UBig>,
    ) -> Result<Self> {
        let mut s = Surd {
            p: p.into(),
            q: q.into(),
            r: r.into(),
            d: d.into(),
        };
        s.normalize()?;
        Ok(s)
    }

    pub fn from_int(n: impl Into<IBig>) -> Self {
        Surd {
            p: n.into(),
            q: IBig::ZERO,
            r: IBig::ONE,
            d: UBig::ZERO,
        }
    }

    pub fn from_ratio(p: impl Into<IBig>, r: impl Into<IBig>) -> Result<Self> {
        Surd::new(p, IBig::ZERO, r, UBig::ZERO)
    }

    /// `sqrt(d)` as a surd.
    pub fn sqrt_int(d: impl Into<UBig>) -> Result<Self> {
        Surd::new(IBig::ZERO, IBig::ONE, IBig::ONE, d)
    }

    fn normalize(&mut self) -> Result<()> {
        if self.r.is_zero() {
            return Err(Error::ZeroDenominator("surd with r = 0".into()));
        }
        if self.q.is_zero() {
            self.d = UBig::ZERO;
        }
        if self.d.is_zero() || self.d == UBig::ONE {
            if self.d == UBig::ONE {
                self.p += &self.q;
            }
            self.q = IBig::ZERO;
            self.d = UBig::ZERO;
        } else {
            let (s, f) = squarefree_split(&self.d)?;
            if f == UBig::ONE {
                // perfect square: collapses to a rational
                self.p += &self.q * IBig::from(s);
                self.q = IBig::ZERO;
                self.d = UBig::ZERO;
            } else {
                self.q *= IBig::from(s);
                self.d = f;
            }
        }
        if self.r < IBig::ZERO {
            self.p = -std::mem::take(&mut self.p);
            self.q = -std::mem::take(&mut self.q);
            self.r = -std::mem::take(&mut self.r);
        }
        let g = gcd(
            &gcd(&self.p.clone().unsigned_abs(), &self.q.clone().unsigned_abs()),
            &self.r.clone().unsigned_abs(),
        );
        if g > UBig::ONE {
            let g = IBig::from(g);
            self.p /= &g;
            self.q /= &g;
            self.r /= &g;
        }
        Ok(())
    }

    pub fn p(&self) -> &IBig {
        &self.p
    }
    pub fn q(&self) -> &IBig {
        &self.q
    }
    pub fn r(&self) -> &IBig {
        &self.r
    }
    pub fn d(&self) -> &UBig {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.d.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.r == IBig::ONE
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// Radicand both operands can live under, if any.
    fn common_radicand(&self, other: &Surd) -> Result<UBig> {
        if self.d.is_zero() {
            Ok(other.d.clone())
        } else if other.d.is_zero() || self.d == other.d {
            Ok(self.d.clone())
        } else {
            Err(Error::MixedRadicals(self.d.to_string(), other.d.to_string()))
        }
    }

    pub fn neg(&self) -> Surd {
        Surd {
            p: -self.p.clone(),
            q: -self.q.clone(),
            r: self.r.clone(),
            d: self.d.clone(),
        }
    }

    pub fn add(&self, other: &Surd) -> Result<Surd> {
        let d = self.common_radicand(other)?;
        Surd::new(
            &self.p * &other.r + &other.p * &self.r,
            &self.q * &other.r + &other.q * &self.r,
            &self.r * &other.r,
            d,
        )
    }

    pub fn sub(&self, other: &Surd) -> Result<Surd> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Surd) -> Result<Surd> {
        let d = self.common_radicand(other)?;
        let di = IBig::from(d.clone());
        Surd::new(
            &self.p * &other.p + &self.q * &other.q * &di,
            &self.p * &other.q + &self.q * &other.p,
            &self.r * &other.r,
            d,
        )
    }

    pub fn recip(&self) -> Result<Surd> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator("1/0 in surd arithmetic".into()));
        }
        // r / (p + q*sqrt(d)) = r (p - q*sqrt(d)) / (p^2 - q^2 d)
        let di = IBig::from(self.d.clone());
        let norm = &self.p * &self.p - &self.q * &self.q * &di;
        if norm.is_zero() {
            return Err(Error::ZeroDenominator("surd with zero norm".into()));
        }
        Surd::new(&self.r * &self.p, -(&self.r * &self.q), norm, self.d.clone())
    }

    pub fn div(&self, other: &Surd) -> Result<Surd> {
        self.mul(&other.recip()?)
    }

    pub fn add_int(&self, n: i64) -> Surd {
        self.add(&Surd::from_int(n)).expect("integer is field-compatible")
    }

    pub fn sub_int(&self, n: i64) -> Surd {
        self.add_int(-n)
    }

    pub fn mul_int(&self, n: i64) -> Surd {
        self.mul(&Surd::from_int(n)).expect("integer is field-compatible")
    }

    /// Sign of the exact value.
    pub fn sign(&self) -> Ordering {
        // r > 0, so the sign is that of p + q*sqrt(d)
        let sp = self.p.cmp(&IBig::ZERO);
        let sq = self.q.cmp(&IBig::ZERO);
        if self.q.is_zero() {
            return sp;
        }
        if self.p.is_zero() {
            return sq;
        }
        if sp == sq {
            return sp;
        }
        // opposite signs: compare p^2 with q^2 d; the larger magnitude wins
        let p2 = &self.p * &self.p;
        let q2d = &self.q * &self.q * IBig::from(self.d.clone());
        match p2.cmp(&q2d) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => Ordering::Equal, // impossible for squarefree d > 1
        }
    }

    /// Exact ordering of two surds, across radicands if necessary.
    pub fn compare(&self, other: &Surd) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        match self.sub(other) {
            Ok(diff) => diff.sign(),
            Err(_) => {
                // Different radicands: never equal after normalization, so
                // interval refinement at escalating precision terminates.
                let mut bits = 128u32;
                loop {
                    let prec = Precision::new(bits);
                    let a = self.to_real(prec);
                    let b = other.to_real(prec);
                    let diff = &a - &b;
                    let scale = &(&a.abs() + &b.abs()) + &Real::one(prec);
                    let bound = &scale * &Real::exp2(6 - bits as i64, prec);
                    if diff.abs() > bound {
                        return diff.sign();
                    }
                    bits = bits.checked_mul(2).expect("comparison precision overflow");
                    assert!(
                        bits <= 1 << 22,
                        "surd comparison failed to resolve; values may be equal across radicands"
                    );
                }
            }
        }
    }

    /// Evaluate at the given precision (within 2 ulp).
    pub fn to_real(&self, prec: Precision) -> Real {
        let work = Precision::new(prec.bits() + 32);
        let mut v = Real::from_ibig(&self.p, work);
        if !self.q.is_zero() {
            let s = Real::from_ibig(&IBig::from(self.d.clone()), work)
                .sqrt()
                .expect("radicand is non-negative");
            v = &v + &(&Real::from_ibig(&self.q, work) * &s);
        }
        (&v / &Real::from_ibig(&self.r, work)).with_precision(prec)
    }

    /// Exact floor.
    pub fn floor_int(&self) -> IBig {
        let mut k = self.to_real(Precision::new(128)).floor_int();
        // verify k <= self < k+1 exactly, adjusting if the rounded guess is off
        loop {
            match self.compare(&Surd::from_int(k.clone())) {
                Ordering::Less => k -= IBig::ONE,
                _ => match self.compare(&Surd::from_int(k.clone() + IBig::ONE)) {
                    Ordering::Less => return k,
                    _ => k += IBig::ONE,
                },
            }
        }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            if self.r == IBig::ONE {
                write!(f, "{}", self.p)
            } else {
                write!(f, "{}/{}", self.p, self.r)
            }
        } else {
            let sign = if self.q < IBig::ZERO { '-' } else { '+' };
            let qa = self.q.clone().unsigned_abs();
            write!(f, "({}{}{}*sqrt({}))/{}", self.p, sign, qa, self.d, self.r)
        }
    }
}

impl FromStr for Surd {
    type Err = Error;

    /// Accepts `(p+q*sqrt(D))/r` (also `q*` omitted, `-` signs, `/r` omitted)
    /// and plain rationals `p/q` or integers.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("invalid surd literal {s:?}"));

        if let Some(rest) = s.strip_prefix('(') {
            let close = rest.rfind(')').ok_or_else(bad)?;
            let inner = &rest[..close];
            let tail = &rest[close + 1..];
            let r: IBig = if tail.is_empty() {
                IBig::ONE
            } else {
                let t = tail.strip_prefix('/').ok_or_else(bad)?;
                t.parse().map_err(|_| bad())?
            };
            // inner = p <sign> [q*]sqrt(D)
            let idx = inner.find("sqrt(").ok_or_else(bad)?;
            let open = idx + "sqrt(".len();
            let dclose = inner[open..].find(')').ok_or_else(bad)? + open;
            let d: UBig = inner[open..dclose].parse().map_err(|_| bad())?;
            if dclose + 1 != inner.len() {
                return Err(bad());
            }
            let head = &inner[..idx]; // "p+q*" or "p-" or "+q*" ...
            let head = head.strip_suffix('*').unwrap_or(head);
            // split head into p part and q part at the last top-level sign
            let mut split = None;
            for (i, c) in head.char_indices().skip(1) {
                if c == '+' || c == '-' {
                    split = Some(i);
                }
            }
            let (pstr, qstr) = match split {
                Some(i) => (&head[..i], &head[i..]),
                None => ("0", head),
            };
            let p: IBig = if pstr.is_empty() { IBig::ZERO } else { pstr.parse().map_err(|_| bad())? };
            let q: IBig = match qstr {
                "" | "+" => IBig::ONE,
                "-" => -IBig::ONE,
                _ => qstr.trim_start_matches('+').parse().map_err(|_| bad())?,
            };
            return Surd::new(p, q, r, d);
        }
        if let Some((num, den)) = s.split_once('/') {
            let p: IBig = num.parse().map_err(|_| bad())?;
            let r: IBig = den.parse().map_err(|_| bad())?;
            return Surd::from_ratio(p, r);
        }
        let p: IBig = s.parse().map_err(|_| bad())?;
        Ok(Surd::from_int(p))
    }
}

/// Canonicalize `(p + q*sqrt(d))/r`; the public entry point mirroring the
/// tuple-in, surd-out contract.
pub fn surd_normalize(p: i64, q: i64, r: i64, d: u64) -> Result<Surd> {
    Surd::new(p, q, r, d)
}

/// Exact ordering of two surds.
pub fn surd_compare(a: &Surd, b: &Surd) -> Ordering {
    a.compare(b)
}
