//! Fast path for the simulation hot loop: positive 128-bit binary floats with
//! the single operation the orbit step needs, `N/x - d`, rounded exactly like
//! the general big-float backend (round-to-nearest-even at 128 bits). The
//! subtraction of the digit is exact at this precision, so the division is
//! the only rounding point per step.
//!
//! Bit-compatibility with the general backend is load-bearing (simulation
//! goldens are pinned); `simulate::tests::fast_path_matches_backend` checks
//! it step-by-step and the seeded histograms pin it end to end.

use dashu_base::{BitTest, Sign, UnsignedAbs};
use std::cmp::Ordering;

use crate::numerics::Real;

uint::construct_uint! {
    struct U256(4);
}

/// Normalized positive float: value = `m * 2^(e - 127)` with `m` in
/// `[2^127, 2^128)`, i.e. `e = floor(log2(value))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Fx {
    m: u128,
    e: i32,
}

impl Fx {
    /// Exact conversion of a positive value with at most 128 significand bits.
    pub(crate) fn from_real(x: &Real) -> Option<Fx> {
        let repr = x.as_fbig().repr();
        let signif = repr.significand();
        if signif.sign() != Sign::Positive {
            return None;
        }
        let mag = signif.clone().unsigned_abs();
        let bits = mag.bit_len();
        if bits == 0 || bits > 128 {
            return None;
        }
        let m: u128 = mag.try_into().ok()?;
        let e64 = repr.exponent() as i64 + bits as i64 - 1;
        let e = i32::try_from(e64).ok()?;
        Some(Fx {
            m: m << (128 - bits),
            e,
        })
    }

    #[inline]
    pub(crate) fn cmp_value(&self, other: &Fx) -> Ordering {
        (self.e, self.m).cmp(&(other.e, other.m))
    }

    /// Correctly rounded conversion to f64 (mantissa rounds nearest-even,
    /// the power-of-two scale is exact in range).
    #[inline]
    pub(crate) fn to_f64(self) -> f64 {
        (self.m as f64) * f64::powi(2.0, self.e - 127)
    }

    /// `N/self` rounded to nearest-even at 128 bits. Requires `2 <= n < 2^31`
    /// and a positive value, which the orbit guarantees.
    #[inline]
    pub(crate) fn div_from_int(self, n: u64) -> Fx {
        debug_assert!((2..1 << 31).contains(&n));
        let nb = 64 - n.leading_zeros() as i32; // bit length of N
        let s = 256 - nb; // numerator N << s has exactly 256 bits
        let num = U256::from(n) << (s as usize);
        let den = U256::from(self.m);
        let (q, r) = num.div_mod(den);
        let qb = 256 - q.leading_zeros() as i32; // 128 or 129
        let (mut m, g, sticky);
        if qb == 129 {
            g = q.bit(0);
            m = (q >> 1).low_u128();
            sticky = !r.is_zero();
        } else {
            // guard bit comes from the next quotient bit: 2r >= den
            m = q.low_u128();
            let den_minus_r = den - r;
            g = r >= den_minus_r;
            sticky = if g { r > den_minus_r } else { !r.is_zero() };
        }
        let mut e = qb + 126 - s - self.e;
        if g && (sticky || (m & 1) == 1) {
            m = m.wrapping_add(1);
            if m == 0 {
                m = 1 << 127;
                e += 1;
            }
        }
        debug_assert!(m >= 1 << 127);
        Fx { m, e }
    }

    /// Exact `self - d` for an integer `0 < d < value`; the difference always
    /// fits in 128 significand bits, so no rounding happens (matching the
    /// general backend, which keeps exact results exact).
    #[inline]
    pub(crate) fn sub_int(self, d: u64) -> Fx {
        debug_assert!((0..=127).contains(&self.e), "orbit value out of the expected range");
        let dd = (d as u128) << (127 - self.e);
        debug_assert!(dd < self.m);
        let diff = self.m - dd;
        let lz = diff.leading_zeros();
        Fx {
            m: diff << lz,
            e: self.e - lz as i32,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Precision;
    use crate::simulate::SplitMix64;

    fn real(v: f64) -> Real {
        Real::parse_decimal(&format!("{v:.17}"), Precision::new(128)).unwrap()
    }

    #[test]
    fn conversion_round_trips_values() {
        for v in [6.5, 0.0517, 49.98019737, 1.0, 1020.25] {
            let r = real(v);
            let f = Fx::from_real(&r).unwrap();
            assert_eq!(f.to_f64(), r.to_f64(), "value {v}");
        }
    }

    #[test]
    fn division_matches_backend_bit_for_bit() {
        // 1e5 random (N, x) pairs: N/x must agree with the 128-bit backend
        let rng = SplitMix64::new(99);
        let prec = Precision::new(128);
        for i in 0..100_000u64 {
            let n = rng.value(3 * i) % ((1 << 31) - 2) + 2;
            // x in [2^-20, 2^20), spread across exponents
            let mant = rng.value(3 * i + 1) | (1 << 63);
            let exp = (rng.value(3 * i + 2) % 40) as i32 - 20;
            let x = &(&Real::from_ibig(&mant.into(), prec) * &Real::exp2(-63, prec))
                * &Real::exp2(exp as i64, prec);
            let fast = Fx::from_real(&x).unwrap().div_from_int(n);
            let slow = &Real::from_int(n as i64, prec) / &x;
            let slow_fx = Fx::from_real(&slow).unwrap();
            assert_eq!(fast, slow_fx, "N={n}, x={x} (case {i})");
        }
    }

    #[test]
    fn subtraction_is_exact_and_matches_backend() {
        let rng = SplitMix64::new(7);
        let prec = Precision::new(128);
        for i in 0..20_000u64 {
            let mant = rng.value(2 * i) | (1 << 63);
            let e = (rng.value(2 * i + 1) % 12) as i64; // t in [1, 4096)
            let t = &(&Real::from_ibig(&mant.into(), prec) * &Real::exp2(-63, prec))
                * &Real::exp2(e, prec);
            let tf = Fx::from_real(&t).unwrap();
            let tv = t.to_f64();
            if tv <= 1.5 {
                continue;
            }
            let d = 1 + (rng.value(2 * i) % (tv as u64 - 1).max(1));
            let fast = tf.sub_int(d);
            let slow = &t - (d as i64);
            assert_eq!(fast, Fx::from_real(&slow).unwrap(), "t={t}, d={d}");
        }
    }
}
