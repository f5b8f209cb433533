//! Acceptance suite: one test per exit criterion, each printing a PASS/FAIL
//! line (visible with `--nocapture`). Tolerances and budgets are pinned here.

use std::cmp::Ordering;
use std::time::Instant;

use nexp::arrangement::{describe, full_params, max_n_for_fstar, alpha_star, k_func};
use nexp::gap_analysis::{
    classify, escape_time, four_cyl_bracket, four_cyl_gap_params, gap_preimage_chain,
    two_cycle_points, GapIntervalKind, VerdictKind,
};
use nexp::map_core::{apply_t_exact, evaluate, expand, orbit, Params};
use nexp::numerics::{surd_compare, Precision, Real, Surd, Value};
use nexp::simulate::{scan, scan_rows, simulate, SimConfig, SplitMix64};

fn p128() -> Precision {
    Precision::new(128)
}

fn report(n: u32, name: &str, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("criterion {n:2}: {status} — {name}{}{detail}", if detail.is_empty() { "" } else { ": " });
    assert!(pass, "criterion {n} failed — {name}: {detail}");
}

/// Published bracket endpoints (truncated to six decimals).
const TABLE2: [(u64, f64, f64); 8] = [
    (9, 1.594119, 1.594686),
    (21, 2.712252, 2.712310),
    (37, 3.776839, 3.776851),
    (57, 4.817672, 4.817675),
    (8, 1.450165, 1.442809),
    (20, 2.613247, 2.611575),
    (36, 3.700989, 3.700407),
    (56, 4.756087, 4.755832),
];

#[test]
fn criterion_01_table2_reproduction() {
    let t0 = Instant::now();
    let prec = p128();
    let mut worst = 0.0f64;
    for (n, lo, hi) in TABLE2 {
        let b = four_cyl_bracket(n).unwrap().unwrap_or_else(|| panic!("bracket for N={n}"));
        let dl = (b.alpha_l.to_real(prec).to_f64() - lo).abs();
        let du = (b.alpha_u.to_real(prec).to_f64() - hi).abs();
        worst = worst.max(dl).max(du);
    }
    let elapsed = t0.elapsed();
    let pass = worst < 1e-6 && elapsed.as_secs_f64() < 1.0;
    report(
        1,
        "bracket endpoints match the printed six-decimal values",
        pass,
        &format!("worst |diff| = {worst:.2e}, runtime {elapsed:?} (budget 1 s)"),
    );
}

#[test]
fn criterion_02_closed_form_cross_checks() {
    // printed closed forms for N = 11, 10, 9, 8
    let cases: [(u64, Surd, Surd); 4] = [
        (
            11,
            Surd::new(99, -1, 2, 9075u64).unwrap(),
            Surd::new(-26, 1, 37, 9075u64).unwrap(),
        ),
        (
            10,
            Surd::new(45, -1, 2, 1725u64).unwrap(),
            Surd::new(-12, 1, 17, 1725u64).unwrap(),
        ),
        (
            9,
            Surd::new(27, -1, 2, 567u64).unwrap(),
            Surd::new(-22, 1, 31, 5103u64).unwrap(),
        ),
        (
            8,
            Surd::new(9, -1, 1, 57u64).unwrap(),
            Surd::new(-5, 1, 7, 228u64).unwrap(),
        ),
    ];
    let prec = Precision::new(192);
    let mut worst = 0.0f64;
    for (n, closed_l, closed_u) in &cases {
        let b = four_cyl_bracket(*n).unwrap().unwrap();
        let dl = (b.alpha_l.to_real(prec).to_f64() - closed_l.to_real(prec).to_f64()).abs();
        let du = (b.alpha_u.to_real(prec).to_f64() - closed_u.to_real(prec).to_f64()).abs();
        worst = worst.max(dl).max(du);
        // the uniform construction agrees with the printed forms exactly
        assert_eq!(surd_compare(&b.alpha_l, closed_l), Ordering::Equal, "alpha_l N={n}");
        assert_eq!(surd_compare(&b.alpha_u, closed_u), Ordering::Equal, "alpha_u N={n}");
    }
    report(
        2,
        "closed-form bracket endpoints agree to 1e-12 (and exactly)",
        worst < 1e-12,
        &format!("worst |diff| = {worst:.2e}"),
    );
}

#[test]
fn criterion_03_gap_example_9_2() {
    let params = Params::with_int_alpha(9, 2, p128()).unwrap();
    let v = classify(&params).unwrap();
    let pass = v.kind == VerdictKind::GapTwoCyl
        && v.gaps.len() == 1
        && v.gaps[0].lo.as_exact() == Some(&Surd::from_ratio(5, 2).unwrap())
        && v.gaps[0].hi.as_exact() == Some(&Surd::from_ratio(13, 5).unwrap());
    report(
        3,
        "classify(9, 2) yields exactly (5/2, 13/5)",
        pass,
        &format!("verdict {:?}, gaps {:?}", v.kind, v.gaps.len()),
    );
}

#[test]
fn criterion_04_full_arrangement_round_trip() {
    let t0 = Instant::now();
    let prec = p128();
    for m in 2..=5u64 {
        for k in 1..=10u64 {
            let (n, alpha, d) = full_params(m, k);
            let params = Params::with_int_alpha(n, alpha, prec).unwrap();
            let arr = describe(&params).unwrap();
            assert_eq!(arr.num_cylinders() as u64, m, "cylinder count for N={n}");
            assert!(arr.is_full_arrangement(), "completeness for N={n}");
            assert_eq!(arr.d_max, d, "largest digit for N={n}");
        }
    }
    // randomized non-conforming integer-alpha systems have an incomplete cylinder
    let rng = SplitMix64::new(4);
    let mut checked = 0;
    let mut i = 0u64;
    while checked < 1000 {
        i += 1;
        let n = rng.value(2 * i) % 9_000 + 4;
        let alpha_max = Surd::sqrt_int(n).unwrap().sub_int(1);
        let kmax: i64 = alpha_max.floor_int().try_into().unwrap();
        if kmax < 1 {
            continue;
        }
        let k = (rng.value(2 * i + 1) % kmax as u64) as i64 + 1;
        if n % (k as u64) == 0 && n % (k as u64 + 1) == 0 {
            continue; // conforming: alpha and alpha+1 both divide N
        }
        let params = Params::with_int_alpha(n, k, prec).unwrap();
        let arr = describe(&params).unwrap();
        assert!(
            !arr.is_full_arrangement(),
            "expected an incomplete cylinder for N={n}, alpha={k}"
        );
        checked += 1;
    }
    let elapsed = t0.elapsed();
    report(
        4,
        "full arrangements round trip; non-conforming systems are incomplete",
        elapsed.as_secs_f64() < 5.0,
        &format!("runtime {elapsed:?} (budget 5 s)"),
    );
}

#[test]
fn criterion_05_bracket_scan_exact() {
    let t0 = Instant::now();
    for k in 2..=10i64 {
        for i in 1..=4i64 {
            let n = (2 * k * k + 2 * k - i) as u64;
            let b = four_cyl_bracket(n).unwrap().unwrap_or_else(|| panic!("bracket k={k}, i={i}"));
            assert_eq!((b.k, b.i), (k, i));
            let cmp = surd_compare(&b.alpha_l, &b.alpha_u);
            if i <= 3 {
                assert_ne!(cmp, Ordering::Greater, "alpha_l <= alpha_u must hold for k={k}, i={i}");
            } else {
                assert_eq!(cmp, Ordering::Greater, "alpha_l > alpha_u must hold for k={k}, i=4");
            }
        }
    }
    let elapsed = t0.elapsed();
    report(
        5,
        "bracket ordering exact for k in 2..=10, i in 1..=4",
        elapsed.as_secs_f64() < 5.0,
        &format!("runtime {elapsed:?} (budget 5 s)"),
    );
}

#[test]
fn criterion_06_boundary_family_maxima() {
    let got: Vec<i64> = (2..=5).map(|d| max_n_for_fstar(d).unwrap()).collect();
    let pass = got == vec![17, 49, 99, 165];
    report(6, "largest boundary-family N for d = 2..5", pass, &format!("{got:?}"));
}

#[test]
fn criterion_07_fstar_spot_values() {
    let astar = alpha_star(99, 4).unwrap();
    let closed = Surd::new(-495, 99, 190, 405u64).unwrap(); // 99(sqrt(405)-5)/190
    let alpha_ok = surd_compare(&astar, &closed) == Ordering::Equal;
    assert!(alpha_ok, "alpha_star(99,4) closed form");

    let k = k_func(4, &Real::from_int(99, Precision::new(192))).unwrap().to_f64();
    // Tolerance pinned from the criterion. The computed slope is
    // 1.25527523... (cross-checked against N/(alpha+1)^2 directly); the
    // printed truncation "1.2552..." sits 7.5e-5 below it, so this band
    // cannot contain the true value. See the analysis notes.
    let k_ok = (k - 1.2552).abs() <= 5e-5;
    report(
        7,
        "alpha_star(99,4) exact; k_func(4,99) within 1.2552 +- 5e-5",
        alpha_ok && k_ok,
        &format!(
            "alpha_star exact: {alpha_ok}; k_func = {k:.8} (band misses the true slope by {:.1e})",
            (k - 1.2552).abs() - 5e-5
        ),
    );
}

/// Published escape steps for x = 50.0, 50.1, ..., 50.9.
const TABLE3_PUBLISHED: [u64; 10] = [5417, 2090, 3568, 1123, 4776, 185, 5816, 16231, 5646, 7604];

/// Certified escape steps for the same inputs: stable from 24576 bits on and
/// reproduced independently by exact rational iteration.
const TABLE3_CERTIFIED: [u64; 10] = [5417, 6638, 4859, 123, 14530, 5751, 3266, 2820, 5412, 18660];

fn table3_run(bits: u32) -> Vec<u64> {
    let prec = Precision::new(bits);
    let alpha = Real::parse_decimal("49.98019737", prec).unwrap();
    let params = Params::new(5097, Value::Approx(alpha), prec).unwrap();
    (0..10)
        .map(|j| {
            let x = Real::parse_decimal(&format!("50.{j}"), prec).unwrap();
            escape_time(&params, &x, 100_000).unwrap().expect("escape within bound")
        })
        .collect()
}

#[test]
fn criterion_08_table3_escape_times() {
    let t0 = Instant::now();
    let got = table3_run(512);
    let elapsed = t0.elapsed();
    let exact_matches = got.iter().zip(&TABLE3_PUBLISHED).filter(|(a, b)| a == b).count();
    let within_2 = got
        .iter()
        .zip(&TABLE3_PUBLISHED)
        .all(|(a, b)| a.abs_diff(*b) <= 2);
    let x505_exact = got[5] == 185;
    let pass = x505_exact && exact_matches >= 8 && within_2 && elapsed.as_secs_f64() < 30.0;
    report(
        8,
        "escape steps match the printed table at >= 512 bits",
        pass,
        &format!(
            "computed {got:?} vs printed {TABLE3_PUBLISHED:?}: x=50.5 -> {} (need 185), {exact_matches}/10 exact (need >= 8). \
             The printed values are not reproducible by faithful arithmetic: the certified \
             ground truth (exact rational iteration, confirmed at 24576 and 28672 bits) is \
             {TABLE3_CERTIFIED:?}, and only x=50.0 agrees with the printed row. See the \
             companion test table3_certified_ground_truth.",
            got[5]
        ),
    );
}

#[test]
fn table3_certified_ground_truth() {
    // Companion to criterion 8: the arithmetic-independent escape steps.
    // 20480 bits gives > 1800 bits of headroom past the longest escape
    // (18660 steps, losing ~1 bit per step).
    let t0 = Instant::now();
    let got = table3_run(20_480);
    assert_eq!(got.as_slice(), &TABLE3_CERTIFIED, "certified escape steps");
    // determinism of the faithful 512-bit run (pseudo-orbit, but pinned)
    let a = table3_run(512);
    let b = table3_run(512);
    assert_eq!(a, b, "fixed-precision escape must be deterministic");
    println!(
        "criterion  8*: INFO — certified ground truth {TABLE3_CERTIFIED:?} reproduced in {:?}",
        t0.elapsed()
    );
}

/// Overlap length of two intervals.
fn overlap(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.1.min(b.1) - a.0.max(b.0)).max(0.0)
}

#[test]
fn criterion_09_simulation_concordance() {
    let t0 = Instant::now();
    let prec = p128();
    let cfg = SimConfig {
        samples: 1000,
        burn_in: 200,
        iters: 1000,
        bins: 10_000,
        seed: 0,
        min_gap_bins: 3,
    };
    let systems: Vec<(u64, Value)> = vec![
        (51, Value::Exact(Surd::from_int(6))),
        (9, Value::Exact(Surd::from_int(2))),
        (21, Value::Approx(Real::parse_decimal("2.7123", prec).unwrap())),
    ];
    let mut detail = String::new();
    for (n, alpha) in systems {
        let params = Params::new(n, alpha, prec).unwrap();
        let verdict = classify(&params).unwrap();
        assert!(verdict.kind.is_gap(), "expected a gap verdict for N={n}");
        let (hist, empirical) = simulate(&params, &cfg).unwrap();
        assert_eq!(hist.rejected, 0);
        let bin_w = 1.0 / cfg.bins as f64;
        for gap in &verdict.gaps {
            let a = (gap.lo.to_real(prec).to_f64(), gap.hi.to_real(prec).to_f64());
            let width = a.1 - a.0;
            let best = empirical
                .iter()
                .map(|e| (e.lo.to_f64(), e.hi.to_f64()))
                .max_by(|x, y| {
                    overlap(a, *x)
                        .partial_cmp(&overlap(a, *y))
                        .expect("finite overlap")
                })
                .expect("at least one empirical gap");
            let cov = overlap(a, best) / width;
            assert!(
                cov >= 0.90,
                "coverage {cov:.3} < 0.90 for N={n} gap {a:?} vs empirical {best:?}"
            );
            assert!(
                best.0 >= a.0 - 2.0 * bin_w - 1e-12 && best.1 <= a.1 + 2.0 * bin_w + 1e-12,
                "empirical gap {best:?} extends beyond {a:?} by more than 2 bins for N={n}"
            );
            detail.push_str(&format!("N={n}: coverage {cov:.4}; "));
        }
        // escape consistency: interior of the four-cylinder trap stays empty
        if verdict.kind == VerdictKind::GapFourCyl {
            let g = &verdict.gaps[0];
            let af = params.alpha_real().to_f64();
            let lo = g.lo.to_real(prec).to_f64() - af + 2.0 * bin_w;
            let hi = g.hi.to_real(prec).to_f64() - af - 2.0 * bin_w;
            let b0 = (lo / bin_w).ceil() as usize;
            let b1 = (hi / bin_w).floor() as usize;
            for b in b0..b1 {
                assert_eq!(hist.counts[b], 0, "occupied bin {b} inside the trap for N={n}");
            }
        }
    }
    let elapsed = t0.elapsed();
    report(
        9,
        "empirical gaps cover >= 90% of analytic gaps within 2 bins",
        elapsed.as_secs_f64() < 60.0,
        &format!("{detail}runtime {elapsed:?} (budget 60 s)"),
    );
}

#[test]
fn criterion_10_property_suite() {
    let prec = p128();
    // (a) expansion/evaluation round trip to 1e-20 on 1e4 random points
    let rng = SplitMix64::new(10);
    let tol = Real::parse_decimal("1e-20", prec).unwrap();
    let mut checked = 0u64;
    let mut i = 0u64;
    while checked < 10_000 {
        i += 1;
        let n = rng.value(3 * i) % 199 + 2;
        let alpha_max = Surd::sqrt_int(n).unwrap().sub_int(1).to_real(prec);
        let u = &Real::from_ibig(&rng.value(3 * i + 1).max(1 << 40).into(), prec) * &Real::exp2(-64, prec);
        let alpha = &alpha_max * &u;
        if alpha.sign() != Ordering::Greater {
            continue;
        }
        let params = match Params::new(n, Value::Approx(alpha.clone()), prec) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let frac = &Real::from_ibig(&rng.value(3 * i + 2).into(), prec) * &Real::exp2(-64, prec);
        let x = &alpha + &frac;
        let e = expand(&params, &x, 40).unwrap();
        let tail = orbit(&params, &x, 40).unwrap().pop().unwrap();
        let back = evaluate(n, &e.digits, &tail).unwrap();
        assert!((&back - &x).abs() <= tol, "round trip for N={n}");
        checked += 1;
    }

    // (b) branch-number identity on 1e3 random params (guard precision)
    let work = Precision::new(192);
    let eps = prec.eps_cmp();
    let mut checked = 0u64;
    while checked < 1_000 {
        i += 1;
        let n = rng.value(2 * i) % 499 + 2;
        let alpha_max = Surd::sqrt_int(n).unwrap().sub_int(1).to_real(work);
        let u = &Real::from_ibig(&rng.value(2 * i + 1).max(1 << 40).into(), work) * &Real::exp2(-64, work);
        let alpha = &alpha_max * &u;
        if alpha.sign() != Ordering::Greater {
            continue;
        }
        let params = match Params::new(n, Value::Approx(alpha), work) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let direct = nexp::arrangement::branch_number(&params);
        let summed = nexp::arrangement::branch_number_sum(&params).unwrap();
        assert!(direct.approx_eq(&summed, &eps), "branch identity N={n}");
        checked += 1;
    }

    // (c) exact two-cycle identities over the full grid
    for k in 2..=10i64 {
        for ii in 1..=3i64 {
            let n = (2 * k * k + 2 * k - ii) as u64;
            let gp = four_cyl_gap_params(n).unwrap().unwrap();
            let params = Params::new(n, Value::Exact(gp.alpha_l.clone()), prec).unwrap();
            assert_eq!(apply_t_exact(&params, &gp.q).unwrap(), gp.r, "T(q)=r at N={n}");
            assert_eq!(apply_t_exact(&params, &gp.r).unwrap(), gp.q, "T(r)=q at N={n}");
        }
    }

    // (d) pre-image chain converges to (q, r) within 1e-9 by depth 50
    for (n, d) in [(9u64, 4i64), (21, 5)] {
        let chain = gap_preimage_chain(n, d, 50).unwrap();
        let (q, r) = two_cycle_points(n, d).unwrap();
        let (lo, hi) = chain.last().unwrap();
        let dq = (lo.to_real(prec).to_f64() - q.to_real(prec).to_f64()).abs();
        let dr = (hi.to_real(prec).to_f64() - r.to_real(prec).to_f64()).abs();
        assert!(dq < 1e-9 && dr < 1e-9, "chain convergence for N={n}: {dq:.2e}, {dr:.2e}");
    }

    report(10, "round trips, branch identity, two-cycles, pre-image chains", true, "");
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Golden hash of the criterion-11 scan CSV, pinned from the first verified
/// run; any arithmetic, seeding or formatting drift changes it.
const SCAN50_CSV_FNV1A: u64 = 0xc614858d5296f3ca;

#[test]
fn criterion_11_figure3_scan() {
    let t0 = Instant::now();
    let prec = p128();
    let alpha_lo = Real::parse_decimal("0.05", prec).unwrap();
    let alpha_hi = Surd::sqrt_int(50u32).unwrap().sub_int(1).to_real(prec);
    let rows = 600u32;
    let cfg = SimConfig::default();
    let table = scan(50, &alpha_lo, &alpha_hi, rows, &cfg).unwrap();
    assert_eq!(table.rows.len(), rows as usize);

    // no gaps below alpha = 2.0
    for row in &table.rows {
        if row.alpha.to_f64() < 2.0 {
            assert!(
                row.empirical_gaps.is_empty(),
                "row {} (alpha={}) reports a gap below 2.0",
                row.index,
                row.alpha
            );
        }
    }
    // a contiguous top band with gaps that reaches down to alpha <= 6.0
    let mut band_start = rows as usize;
    for (j, row) in table.rows.iter().enumerate().rev() {
        if row.empirical_gaps.is_empty() {
            break;
        }
        band_start = j;
    }
    assert!(
        band_start < rows as usize,
        "no gap band at the top of the scan"
    );
    let band_alpha = table.rows[band_start].alpha.to_f64();
    assert!(
        band_alpha <= 6.0,
        "top gap band starts at alpha = {band_alpha}, above 6.0"
    );

    // golden stability: recompute a 25-row sample independently
    let csv = table.to_csv();
    let picks: Vec<u32> = (0..25).map(|j| SplitMix64::new(11).value(j) as u32 % rows).collect();
    let recomputed = scan_rows(50, &alpha_lo, &alpha_hi, rows, &cfg, &picks).unwrap();
    for row in &recomputed {
        let line = row.csv_line();
        assert!(
            csv.lines().any(|l| l == line),
            "recomputed row {} differs from the full scan",
            row.index
        );
    }
    let hash = fnv1a(csv.as_bytes());
    let hash_ok = if SCAN50_CSV_FNV1A == 0 {
        println!("criterion 11: INFO — golden hash not yet pinned; computed 0x{hash:016x}");
        true
    } else {
        hash == SCAN50_CSV_FNV1A
    };

    let elapsed = t0.elapsed();
    let pass = hash_ok && elapsed.as_secs_f64() < 600.0;
    report(
        11,
        "scan(50): top gap band through alpha=6.0, none below 2.0, golden CSV",
        pass,
        &format!(
            "band from alpha={band_alpha:.4} to top, csv fnv1a=0x{hash:016x}, runtime {elapsed:?} (budget 600 s)"
        ),
    );
}
