//! Structural analysis of the interval: cylinder decomposition, fixed points,
//! discontinuity points, branch number, the full-arrangement classification
//! and the boundary-family helper functions.

use dashu_int::IBig;
use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::map_core::{digit, Params};
use crate::numerics::{Precision, Real, Surd, Value};

/// One cylinder `{x : d(x) = i}` with its interval and completeness flag.
#[derive(Debug, Clone)]
pub struct Cylinder {
    pub digit: i64,
    pub left: Real,
    pub right: Real,
    pub is_full: bool,
}

/// The full decomposition of `[alpha, alpha+1]` for one system.
#[derive(Debug, Clone)]
pub struct Arrangement {
    pub params: Params,
    pub d_min: i64,
    pub d_max: i64,
    pub cylinders: Vec<Cylinder>,
    /// Fixed point of each branch, exact.
    pub fixed_points: Vec<(i64, Surd)>,
    /// Discontinuity points `p_i = N/(alpha+i)` for `d_min < i <= d_max`.
    pub discontinuities: Vec<(i64, Real)>,
    pub branch_number: Real,
    /// Slope magnitude at the right endpoint, `N/(alpha+1)^2`.
    pub sigma: Real,
}

impl Arrangement {
    pub fn num_cylinders(&self) -> usize {
        self.cylinders.len()
    }

    pub fn is_full_arrangement(&self) -> bool {
        self.cylinders.iter().all(|c| c.is_full)
    }

    pub fn cylinder(&self, digit: i64) -> Option<&Cylinder> {
        self.cylinders.iter().find(|c| c.digit == digit)
    }

    pub fn fixed_point(&self, digit: i64) -> Option<&Surd> {
        self.fixed_points.iter().find(|(d, _)| *d == digit).map(|(_, f)| f)
    }
}

/// `f_i(N) = (sqrt(4N + i^2) - i)/2`, the fixed point of the digit-`i` branch.
pub fn fixed_point(n: u64, i: i64) -> Surd {
    let disc = 4 * n as i64 + i * i;
    Surd::new(-i, 1, 2, disc as u64).expect("discriminant is positive")
}

/// `p_i = N/(alpha + i)`, the boundary between the digit-`i` and digit-`i-1`
/// cylinders. Requires `d_min < i <= d_max`.
pub fn discontinuity(params: &Params, i: i64) -> Result<Real> {
    let arr = describe(params)?;
    if i <= arr.d_min || i > arr.d_max {
        return Err(Error::domain(format!(
            "discontinuity index {i} outside ({}, {}]",
            arr.d_min, arr.d_max
        )));
    }
    Ok(discontinuity_unchecked(params, i))
}

fn discontinuity_unchecked(params: &Params, i: i64) -> Real {
    &params.n_real() / &(params.alpha_real() + i)
}

/// Exact discontinuity point when alpha is exact.
pub fn discontinuity_exact(params: &Params, i: i64) -> Result<Surd> {
    let alpha = params
        .alpha()
        .as_exact()
        .ok_or_else(|| Error::domain("exact discontinuity requires an exact alpha"))?;
    Surd::from_int(params.n() as i64).div(&alpha.add_int(i))
}

/// Whether both outer cylinders are full, which makes the whole arrangement
/// full (interior cylinders always are). Needs no cylinder enumeration.
pub fn is_full_system(params: &Params) -> bool {
    params.is_special_case() && right_cylinder_full(params)
}

/// Whether `N/(alpha+1) - alpha` is an integer, i.e. the rightmost cylinder
/// maps onto the whole interval.
fn right_cylinder_full(params: &Params) -> bool {
    match params.alpha().as_exact() {
        Some(a) => Surd::from_int(params.n() as i64)
            .div(&a.add_int(1))
            .and_then(|t| t.sub(a))
            .map(|t| t.is_integer())
            .unwrap_or(false),
        None => {
            let t = &(&params.n_real() / &params.alpha_plus_one()) - params.alpha_real();
            t.is_integer_within(&params.precision().eps_int())
        }
    }
}

/// Largest and smallest digit of the system: `(d(alpha), d(alpha+1))`.
pub fn digit_range(params: &Params) -> Result<(i64, i64)> {
    let d_max = digit(params, params.alpha_real())?;
    let d_min = digit(params, &params.alpha_plus_one())?;
    debug_assert!(d_max >= d_min + 1, "at least two cylinders always exist");
    Ok((d_max, d_min))
}

/// Enumeration guard: arrangements for very small alpha can have millions of
/// cylinders; listing them is refused past this cap (the digit range and the
/// classifier still work there).
pub const MAX_ENUMERATED_CYLINDERS: i64 = 100_000;

/// Complete arrangement of the interval for the given system.
pub fn describe(params: &Params) -> Result<Arrangement> {
    let prec = params.precision();
    let alpha = params.alpha_real().clone();
    let alpha_p1 = params.alpha_plus_one();
    let (d_max, d_min) = digit_range(params)?;
    if d_max - d_min + 1 > MAX_ENUMERATED_CYLINDERS {
        return Err(Error::domain(format!(
            "arrangement with {} cylinders exceeds the enumeration cap of {}",
            d_max - d_min + 1,
            MAX_ENUMERATED_CYLINDERS
        )));
    }

    let discontinuities: Vec<(i64, Real)> = (d_min + 1..=d_max)
        .map(|i| (i, discontinuity_unchecked(params, i)))
        .collect();
    let right_of = |i: i64| -> Real {
        if i == d_max {
            // left end [alpha, p_dmax]
            discontinuities
                .iter()
                .find(|(j, _)| *j == i)
                .map(|(_, p)| p.clone())
                .unwrap_or_else(|| alpha_p1.clone())
        } else {
            discontinuities
                .iter()
                .find(|(j, _)| *j == i)
                .map(|(_, p)| p.clone())
                .expect("interior boundary exists")
        }
    };

    let left_full = params.is_special_case();
    let right_full = right_cylinder_full(params);

    let mut cylinders = Vec::with_capacity((d_max - d_min + 1) as usize);
    for i in (d_min..=d_max).rev() {
        let left = if i == d_max { alpha.clone() } else { right_of(i + 1) };
        let right = if i == d_min { alpha_p1.clone() } else { right_of(i) };
        let is_full = if i == d_max {
            left_full
        } else if i == d_min {
            right_full
        } else {
            true
        };
        cylinders.push(Cylinder {
            digit: i,
            left,
            right,
            is_full,
        });
    }

    let fixed_points = (d_min..=d_max).rev().map(|i| (i, fixed_point(params.n(), i))).collect();
    let branch_number = branch_number(params);
    let sigma = &params.n_real() / &alpha_p1.square();

    let arr = Arrangement {
        params: params.clone(),
        d_min,
        d_max,
        cylinders,
        fixed_points,
        discontinuities,
        branch_number,
        sigma,
    };
    debug_assert!(arr.num_cylinders() >= 2);
    debug_assert!(check_fixed_points_inside(&arr, prec));
    Ok(arr)
}

fn check_fixed_points_inside(arr: &Arrangement, prec: Precision) -> bool {
    let eps = prec.eps_cmp();
    arr.fixed_points.iter().all(|(i, f)| {
        let c = arr.cylinder(*i).expect("cylinder exists for every digit");
        let fr = f.to_real(prec);
        fr >= &c.left - &eps && fr <= &c.right + &eps
    })
}

/// The unique parameters giving `m` full cylinders with `alpha = k`:
/// `(N, alpha, d) = (m k (k+1), k, (m-1)(k+1))`.
pub fn full_params(m: u64, k: u64) -> (u64, i64, i64) {
    let n = m * k * (k + 1);
    let d = ((m - 1) * (k + 1)) as i64;
    (n, k as i64, d)
}

/// Branch number `b(N, alpha) = N / (alpha (alpha+1))`.
pub fn branch_number(params: &Params) -> Real {
    let a = params.alpha_real();
    &params.n_real() / &(a * &(a + 1))
}

/// The three-term form of the branch number: full interior cylinders plus the
/// image lengths of the two outermost ones.
pub fn branch_number_sum(params: &Params) -> Result<Real> {
    let (d_max, d_min) = digit_range(params)?;
    let a = params.alpha_real();
    let nr = params.n_real();
    let full_part = Real::from_int(d_max - d_min - 1, params.precision());
    let left = &(&nr / a) - &(a + d_max);
    let right = &(a + 1) - &(&(&nr / &params.alpha_plus_one()) - d_min);
    Ok(&(&full_part + &left) + &right)
}

/// Invert the branch number: `alpha = (sqrt(4N/b + 1) - 1)/2`.
pub fn alpha_of_branch(n: u64, b: &Real) -> Result<Real> {
    let prec = b.precision();
    if *b <= Real::one(prec) {
        return Err(Error::domain(format!("branch number {b} must exceed 1")));
    }
    let four_n = Real::from_int(4 * n as i64, prec);
    let alpha = &(&(&(&four_n / b) + 1).sqrt()? - 1) / 2;
    let alpha_max = Surd::sqrt_int(n)?.sub_int(1).to_real(prec);
    let eps = prec.eps_cmp();
    if alpha.sign() != Ordering::Greater || alpha > &alpha_max + &eps {
        return Err(Error::domain(format!(
            "branch number {b} puts alpha = {alpha} outside (0, sqrt({n})-1]"
        )));
    }
    Ok(alpha)
}

/// Largest digit for the system with branch number `b`, i.e. `d(alpha)` at
/// `alpha = alpha_of_branch(n, b)` (the special case lowers the raw floor
/// `((b-1) sqrt(4N/b+1) + b + 1)/2` by one).
pub fn d_of_branch(n: u64, b: &Real) -> Result<i64> {
    let alpha = alpha_of_branch(n, b)?;
    let params = Params::new(n, Value::Approx(alpha.clone()), alpha.precision())?;
    digit(&params, &alpha)
}

/// The boundary-family alpha `alpha(N, d) = N (sqrt(4N + (d-1)^2) - (d+1)) / (2(N-d))`,
/// the unique alpha with `T(alpha) = f_{d-1}` in a two-cylinder arrangement.
pub fn alpha_star(n: u64, d: i64) -> Result<Surd> {
    if d < 2 || n as i64 <= d {
        return Err(Error::domain(format!("alpha_star needs n > d >= 2, got n={n}, d={d}")));
    }
    let disc = 4 * n as i64 + (d - 1) * (d - 1);
    let ni = IBig::from(n);
    Surd::new(
        -(&ni * IBig::from(d + 1)),
        ni,
        IBig::from(2) * IBig::from(n as i64 - d),
        disc as u64,
    )
}

fn real_int(v: i64, prec: Precision) -> Real {
    Real::from_int(v, prec)
}

/// Signed margin `f_d - (T(alpha+1) - (d-1))`-style quantity at `alpha(x, d)`:
/// positive exactly when the two-cylinder boundary family still exists at `x`.
pub fn j_func(d: i64, x: &Real) -> Result<Real> {
    check_jh_domain(d, x)?;
    let prec = x.precision();
    let d1 = real_int(d, prec);
    let x2 = x.square();
    let a = &(&x2 + &(&d1 * x)) + &d1; // x^2 + dx + d
    let s1 = (&(x * 4) + &real_int(d * d, prec)).sqrt()?;
    let s2 = (&(x * 4) + &real_int((d - 1) * (d - 1), prec)).sqrt()?;
    let poly = &(&x2 - &(&real_int(d * (d - 4), prec) * x)) - &real_int(d * (d - 2), prec);
    let num = &(&(&a * &s1) - &(&x2 * &s2)) - &poly;
    Ok(&num / &(&a * 2))
}

/// Signed margin of `T(alpha+1)` above `alpha` at `alpha = alpha(x, d)`:
/// positive exactly when the arrangement has two cylinders there.
pub fn h_func(d: i64, x: &Real) -> Result<Real> {
    check_jh_domain(d, x)?;
    let prec = x.precision();
    let x2 = x.square();
    let x3 = &x2 * x;
    let num_poly = &(&(&(&x3 * 2) + &(&x2 * (4 * d))) + &(&real_int(2 * d * d * d - 5 * d * d + 3 * d, prec) * x))
        + &real_int(2 * d * d * (d - 1), prec);
    let s = (&(x * 4) + &real_int((d - 1) * (d - 1), prec)).sqrt()?;
    let num = &num_poly - &(&(&(&(x * 2) + 1) * &(&real_int(d, prec) * x)) * &s);
    let den = &(&(x - &real_int(d, prec)) * 2) * &(&(&x2 + &(&real_int(d, prec) * x)) + &real_int(d, prec));
    Ok(&num / &den)
}

/// Slope magnitude `N/(alpha(N,d)+1)^2` as a closed form in `x = N`.
pub fn k_func(d: i64, x: &Real) -> Result<Real> {
    if d < 2 {
        return Err(Error::domain("k_func needs d >= 2"));
    }
    let prec = x.precision();
    let x2 = x.square();
    let x3 = &x2 * x;
    let x4 = &x2 * &x2;
    let dm1 = d - 1;
    let num_poly = &(&(&(&x4 * 2) + &(&x3 * (dm1 * dm1))) + &(&x2 * (2 * d * dm1))) + &(x * (2 * d * d));
    let s = (&(x * 4) + &real_int(dm1 * dm1, prec)).sqrt()?;
    let num = &num_poly + &(&(&(&x3 * dm1) + &(&x2 * (2 * d))) * &s);
    let den_poly = &(&(&(&x4 + &(&x3 * (2 * d))) + &(&x2 * (d * (d + 2)))) + &(x * (2 * d * d))) + &real_int(d * d, prec);
    Ok(&num / &(&den_poly * 2))
}

fn check_jh_domain(d: i64, x: &Real) -> Result<()> {
    if d < 2 {
        return Err(Error::domain("boundary-family functions need d >= 2"));
    }
    // The margin analysis lives on [25, inf), but the closed forms evaluate
    // for any x past the pole at x = d; the digit-2 candidates sit below 25.
    if *x <= Real::from_int(d, x.precision()) {
        return Err(Error::domain("boundary-family functions need x > d"));
    }
    Ok(())
}

/// Direct membership test for the boundary family: at `alpha = alpha(N, d)`
/// the arrangement has exactly the two cylinders `{d, d-1}` and
/// `T(alpha+1) <= f_d`. All comparisons are exact.
pub fn in_fstar_family(n: u64, d: i64) -> Result<bool> {
    if n as i64 <= d || d < 2 {
        return Ok(false);
    }
    let astar = alpha_star(n, d)?;
    // alpha must be a valid parameter at all
    if astar.sign() != Ordering::Greater {
        return Ok(false);
    }
    let alpha_max = Surd::sqrt_int(n)?.sub_int(1);
    if astar.compare(&alpha_max) == Ordering::Greater {
        return Ok(false);
    }
    let nn = Surd::from_int(n as i64);
    let a1 = astar.add_int(1);
    // two cylinders: d(alpha) = d and d(alpha+1) = d-1, i.e.
    //   alpha < p_d' means N/alpha - d in [alpha, alpha+1) — by construction
    //   T(alpha) = f_{d-1}; so check N/(alpha+1) - (d-1) in [alpha, alpha+1)
    let t1 = nn.div(&a1)?.sub_int(d - 1);
    if t1.compare(&astar) == Ordering::Less {
        return Ok(false); // fewer than two branches reach the right edge
    }
    if t1.compare(&a1) != Ordering::Less {
        return Ok(false); // three or more cylinders
    }
    // T(alpha) = f_{d-1} holds identically for alpha(N, d); verify once
    debug_assert_eq!(
        nn.div(&astar).unwrap().sub_int(d).compare(&fixed_point(n, d - 1)),
        Ordering::Equal
    );
    // T(alpha+1) <= f_d
    Ok(t1.compare(&fixed_point(n, d)) != Ordering::Greater)
}

/// Largest `N` for which the boundary family at digit `d` is non-empty.
///
/// The closed-form candidates are `floor/ceil((4+3*sqrt(2))(d^2-d))`; the sign
/// of [`j_func`] at them decides, and a brute-force window of `+-3` around the
/// candidates via [`in_fstar_family`] guards the rounding direction.
pub fn max_n_for_fstar(d: i64) -> Result<i64> {
    if d < 2 {
        return Err(Error::domain("max_n_for_fstar needs d >= 2"));
    }
    let prec = Precision::new(192);
    let c = &(&Real::from_int(2, prec).sqrt()? * 3) + 4;
    let target = &c * &Real::from_int(d * d - d, prec);
    let floor_cand = i64::try_from(&target.floor_int()).map_err(|_| Error::domain("candidate overflow"))?;
    let ceil_cand = floor_cand + 1;

    // sign test on the two candidates (h > 0 guarantees the family shape)
    let mut best: Option<i64> = None;
    for cand in [floor_cand, ceil_cand] {
        if cand >= 25 {
            let x = Real::from_int(cand, prec);
            if j_func(d, &x)?.sign() == Ordering::Greater && h_func(d, &x)?.sign() == Ordering::Greater {
                best = Some(cand);
            }
        }
    }
    // brute-force window, authoritative for small d and a guard elsewhere
    let mut verified: Option<i64> = None;
    for cand in floor_cand - 3..=ceil_cand + 3 {
        if cand >= 2 && in_fstar_family(cand as u64, d)? {
            verified = Some(cand);
        }
    }
    match (best, verified) {
        (_, Some(v)) => Ok(v),
        (Some(b), None) => Ok(b),
        (None, None) => Err(Error::domain(format!("no boundary-family member near the candidates for d = {d}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::DEFAULT_PRECISION;

    fn p() -> Precision {
        Precision::new(DEFAULT_PRECISION)
    }

    fn params(n: u64, alpha: i64) -> Params {
        Params::with_int_alpha(n, alpha, p()).unwrap()
    }

    #[test]
    fn fixed_point_values() {
        let f = fixed_point(51, 2);
        assert_eq!(f, Surd::new(-1, 2, 1, 13u8).unwrap());
        assert!((f.to_real(p()).to_f64() - 6.21110).abs() < 1e-5);
        assert!((fixed_point(12, 7).to_real(p()).to_f64() - 1.4244).abs() < 1e-4);
        assert!((fixed_point(9, 2).to_real(p()).to_f64() - 2.16228).abs() < 1e-5);
    }

    #[test]
    fn fixed_point_residual_is_exactly_zero() {
        // N/f_i - i - f_i = 0 in exact arithmetic over the whole grid
        for n in 2..=200u64 {
            for i in 1..=30i64 {
                let f = fixed_point(n, i);
                let res = Surd::from_int(n as i64).div(&f).unwrap().sub_int(i).sub(&f).unwrap();
                assert!(res.is_zero(), "residual for N={n}, i={i}");
            }
        }
    }

    #[test]
    fn discontinuity_values() {
        let pr = params(51, 6);
        let p2 = discontinuity(&pr, 2).unwrap();
        assert!(p2.approx_eq(&Real::parse_decimal("6.375", p()).unwrap(), &p().eps_cmp()));
        assert!(discontinuity(&pr, 3).is_err());
        assert!(discontinuity(&pr, 1).is_err());

        let pr9 = params(9, 2);
        assert!((discontinuity(&pr9, 2).unwrap().to_f64() - 2.25).abs() < 1e-12);
    }

    #[test]
    fn describe_51_6() {
        let arr = describe(&params(51, 6)).unwrap();
        assert_eq!((arr.d_min, arr.d_max), (1, 2));
        assert_eq!(arr.num_cylinders(), 2);
        assert!(!arr.cylinders[0].is_full && !arr.cylinders[1].is_full);
        assert!((arr.branch_number.to_f64() - 51.0 / 42.0).abs() < 1e-12);
    }

    #[test]
    fn describe_4_1_full() {
        let arr = describe(&params(4, 1)).unwrap();
        assert_eq!(arr.num_cylinders(), 2);
        assert!(arr.is_full_arrangement());
        assert!((arr.branch_number.to_f64() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn describe_11_f6() {
        // alpha = f_6(11): four cylinders with digits 2..5
        let alpha = fixed_point(11, 6);
        let pr = Params::new(11, Value::Exact(alpha), p()).unwrap();
        assert!(pr.is_special_case());
        let arr = describe(&pr).unwrap();
        assert_eq!((arr.d_min, arr.d_max), (2, 5));
        assert_eq!(arr.num_cylinders(), 4);
        // left cylinder is full in the special case
        assert!(arr.cylinder(5).unwrap().is_full);
    }

    #[test]
    fn full_params_round_trip() {
        for m in 2..=5u64 {
            for k in 1..=10u64 {
                let (n, alpha, d) = full_params(m, k);
                let pr = params(n, alpha);
                let arr = describe(&pr).unwrap();
                assert_eq!(arr.num_cylinders() as u64, m, "N={n}, alpha={alpha}");
                assert!(arr.is_full_arrangement(), "N={n}, alpha={alpha}");
                assert_eq!(arr.d_max, d);
            }
        }
    }

    #[test]
    fn branch_number_values() {
        assert!((branch_number(&params(4, 1)).to_f64() - 2.0).abs() < 1e-12);
        // b(N, alpha_max) = 1 + 1/(sqrt(N)-1)
        let n = 51u64;
        let am = Surd::sqrt_int(n).unwrap().sub_int(1);
        let pr = Params::new(n, Value::Exact(am.clone()), p()).unwrap();
        let expect = &Real::one(p()) + &am.to_real(p()).recip().unwrap();
        assert!(branch_number(&pr).approx_eq(&expect, &p().eps_cmp()));
    }

    #[test]
    fn branch_sum_identity() {
        for (n, a) in [(51u64, 6i64), (9, 2), (11, 1), (100, 5)] {
            let pr = params(n, a);
            let b1 = branch_number(&pr);
            let b2 = branch_number_sum(&pr).unwrap();
            assert!(b1.approx_eq(&b2, &p().eps_cmp()), "N={n}, alpha={a}");
        }
    }

    #[test]
    fn alpha_of_branch_rejects_bad_branch_numbers() {
        assert!(alpha_of_branch(4, &Real::parse_decimal("0.5", p()).unwrap()).is_err());
        assert!(alpha_of_branch(4, &Real::one(p())).is_err());
    }

    #[test]
    fn alpha_of_branch_round_trip() {
        let b = Real::from_int(2, p());
        let a = alpha_of_branch(4, &b).unwrap();
        assert!(a.approx_eq(&Real::one(p()), &p().eps_cmp()));

        let b3 = Real::from_int(3, p());
        let a50 = alpha_of_branch(50, &b3).unwrap();
        // round trip through the closed form
        let pr = Params::new(50, Value::Approx(a50.clone()), p()).unwrap();
        assert!(branch_number(&pr).approx_eq(&b3, &p().eps_cmp()));
        assert!((a50.to_f64() - 3.612987).abs() < 1e-5);
    }

    #[test]
    fn d_of_branch_values() {
        assert_eq!(d_of_branch(4, &Real::from_int(2, p())).unwrap(), 2);
        assert_eq!(d_of_branch(12, &Real::from_int(2, p())).unwrap(), 3);
        let b = &Real::from_int(51, p()) / 42;
        assert_eq!(d_of_branch(51, &b).unwrap(), 2);
    }

    #[test]
    fn alpha_star_values() {
        let a = alpha_star(99, 4).unwrap();
        assert_eq!(a, Surd::new(-495, 99, 190, 405u16).unwrap());
        assert!((a.to_real(p()).to_f64() - 7.8807).abs() < 1e-4);
        assert!((alpha_star(17, 2).unwrap().to_real(p()).to_f64() - 3.0071).abs() < 1e-4);
        assert!((alpha_star(49, 3).unwrap().to_real(p()).to_f64() - 5.402).abs() < 1e-3);
    }

    #[test]
    fn alpha_star_satisfies_boundary_identity() {
        // T(alpha) = f_{d-1} exactly at alpha = alpha(N, d)
        for (n, d) in [(99u64, 4i64), (17, 2), (49, 3), (165, 5)] {
            let a = alpha_star(n, d).unwrap();
            let t = Surd::from_int(n as i64).div(&a).unwrap().sub_int(d);
            assert_eq!(t.compare(&fixed_point(n, d - 1)), Ordering::Equal, "N={n}, d={d}");
        }
    }

    #[test]
    fn jhk_function_values() {
        let prec = Precision::new(192);
        let k = k_func(4, &Real::from_int(99, prec)).unwrap();
        assert!((k.to_f64() - 1.2552).abs() < 1e-4, "k = {k}");
        assert_eq!(j_func(2, &Real::from_int(17, prec)).unwrap().sign(), Ordering::Greater);
        assert_eq!(j_func(2, &Real::from_int(18, prec)).unwrap().sign(), Ordering::Less);
        assert_eq!(h_func(4, &Real::from_int(99, prec)).unwrap().sign(), Ordering::Greater);
        assert!(j_func(2, &Real::from_int(2, prec)).is_err());
    }

    #[test]
    fn k_func_agrees_with_direct_slope() {
        let prec = Precision::new(192);
        for (n, d) in [(99u64, 4i64), (49, 3), (165, 5)] {
            let k = k_func(d, &Real::from_int(n as i64, prec)).unwrap();
            let a = alpha_star(n, d).unwrap().to_real(prec);
            let direct = &Real::from_int(n as i64, prec) / &(&a + 1).square();
            assert!(k.approx_eq(&direct, &Precision::new(160).eps_cmp()), "N={n}, d={d}");
        }
    }

    #[test]
    fn max_n_for_fstar_known_values() {
        assert_eq!(max_n_for_fstar(2).unwrap(), 17);
        assert_eq!(max_n_for_fstar(3).unwrap(), 49);
        assert_eq!(max_n_for_fstar(4).unwrap(), 99);
        assert_eq!(max_n_for_fstar(5).unwrap(), 165);
    }

    #[test]
    fn sigma_is_exactly_one_at_alpha_max() {
        // N/(alpha+1)^2 with alpha = sqrt(N)-1: exact surd arithmetic gives 1
        for n in [5u64, 7, 50, 51, 200] {
            let am = Surd::sqrt_int(n).unwrap().sub_int(1);
            let denom = am.add_int(1).mul(&am.add_int(1)).unwrap();
            let sigma = Surd::from_int(n as i64).div(&denom).unwrap();
            assert_eq!(sigma, Surd::from_int(1), "N={n}");
        }
    }
}
