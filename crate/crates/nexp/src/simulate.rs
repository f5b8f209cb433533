//! Seeded Monte-Carlo orbit simulation and empirical gap extraction.
//!
//! Sampling uses a counter-based splitmix64 stream keyed by `(seed, sample)`,
//! so results are bit-identical for a fixed seed regardless of thread count
//! or evaluation order; scan rows re-key with `seed ^ row_index`.

use dashu_float::{round::mode::HalfEven, FBig};
use rayon::prelude::*;
use std::cmp::Ordering;

use crate::arrangement::describe;
use crate::error::{Error, Result};
use crate::fastfloat::Fx;
use crate::gap_analysis::{classify, GapInterval, VerdictKind};
use crate::map_core::Params;
use crate::numerics::real::fbig_div_rounded;
use crate::numerics::{Precision, Real, Value};

type F = FBig<HalfEven, 2>;

/// Simulation configuration. Defaults: 1000 samples, 200 burn-in steps,
/// 1000 recorded iterates per sample, 10000 bins, seed 0, gaps need at least
/// 3 consecutive empty interior bins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimConfig {
    pub samples: u32,
    pub burn_in: u32,
    pub iters: u32,
    pub bins: u32,
    pub seed: u64,
    pub min_gap_bins: u32,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            samples: 1000,
            burn_in: 200,
            iters: 1000,
            bins: 10_000,
            seed: 0,
            min_gap_bins: 3,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 || self.burn_in == 0 || self.iters == 0 || self.min_gap_bins == 0 {
            return Err(Error::domain("simulation counts must be positive"));
        }
        if self.bins < 100 {
            return Err(Error::domain("need at least 100 bins"));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        SimConfig { seed, ..self.clone() }
    }
}

/// Counter-based splitmix64: `value(ctr)` depends only on `(key, ctr)`.
#[derive(Debug, Clone, Copy)]
pub struct SplitMix64 {
    key: u64,
}

impl SplitMix64 {
    pub fn new(key: u64) -> Self {
        SplitMix64 { key }
    }

    #[inline]
    pub fn value(&self, ctr: u64) -> u64 {
        let mut z = self
            .key
            .wrapping_add(ctr.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Occupancy counts over `bins` uniform cells of `[alpha, alpha+1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub counts: Vec<u64>,
    pub total: u64,
    /// Out-of-domain events; the map keeps orbits inside, so this must be 0.
    pub rejected: u64,
}

/// A maximal run of empty interior bins, reported as a bin-edge-aligned
/// interval strictly inside `(alpha, alpha+1)`.
#[derive(Debug, Clone)]
pub struct EmpiricalGap {
    pub lo: Real,
    pub hi: Real,
    pub width_bins: u32,
}

/// Cutpoint table for branch-free digit evaluation in the hot loop; works on
/// the raw big-float representation and caches the digit constants.
struct DigitTable {
    /// cutpoints `p_i` in descending-digit order; `x <= cuts[j]` means the
    /// digit is `d_max - j`
    cuts: Vec<F>,
    /// digit values as big-floats, index 0 = d_max, last = d_min
    digit_consts: Vec<F>,
    digit_f64s: Vec<f64>,
    /// bit-compatible 128-bit fast representation, present when the system
    /// fits its domain (128-bit precision, digits and N below 2^31)
    fast: Option<FastTable>,
}

/// The same table in the fast representation.
struct FastTable {
    cuts: Vec<Fx>,
    digits: Vec<u64>,
}

impl FastTable {
    #[inline]
    fn digit_index(&self, x: &Fx) -> usize {
        if self.cuts.len() <= 4 {
            for (j, p) in self.cuts.iter().enumerate() {
                if x.cmp_value(p) != Ordering::Greater {
                    return j;
                }
            }
            self.cuts.len()
        } else {
            self.cuts.partition_point(|p| p.cmp_value(x) == Ordering::Less)
        }
    }
}

impl DigitTable {
    fn new(params: &Params) -> Result<Self> {
        let arr = describe(params)?;
        let mut by_digit: Vec<(i64, Real)> = arr.discontinuities.clone();
        by_digit.sort_by(|a, b| b.0.cmp(&a.0));
        let cuts = by_digit.iter().map(|(_, p)| p.as_fbig().clone()).collect();
        let digit_consts: Vec<F> = (arr.d_min..=arr.d_max).rev().map(F::from).collect();
        let digit_f64s = digit_consts.iter().map(|d| d.to_f64().value()).collect();
        let fast = Self::build_fast(params, &arr);
        Ok(DigitTable {
            cuts,
            digit_consts,
            digit_f64s,
            fast,
        })
    }

    fn build_fast(params: &Params, arr: &crate::arrangement::Arrangement) -> Option<FastTable> {
        if params.precision().bits() != 128 || params.n() >= 1 << 31 {
            return None;
        }
        if arr.d_min < 1 || arr.d_max >= 1 << 31 {
            return None;
        }
        let mut by_digit: Vec<(i64, Real)> = arr.discontinuities.clone();
        by_digit.sort_by(|a, b| b.0.cmp(&a.0));
        let cuts: Option<Vec<Fx>> = by_digit.iter().map(|(_, p)| Fx::from_real(p)).collect();
        let digits = (arr.d_min..=arr.d_max).rev().map(|d| d as u64).collect();
        Some(FastTable {
            cuts: cuts?,
            digits,
        })
    }

    /// Index of the digit class of `x`; cutpoint membership `x <= p_i` puts
    /// `p_i` itself in the digit-`i` cylinder. The cutpoints ascend in value
    /// (descending digit), so this is the first cut with `x <= p`.
    #[inline]
    fn digit_index(&self, x: &F) -> usize {
        if self.cuts.len() <= 4 {
            for (j, p) in self.cuts.iter().enumerate() {
                if x <= p {
                    return j;
                }
            }
            self.cuts.len()
        } else {
            self.cuts.partition_point(|p| p < x)
        }
    }

}

fn uniform_in_interval(params: &Params, u: u64) -> Real {
    let prec = params.precision();
    let frac = &Real::from_ibig(&u.into(), prec) * &Real::exp2(-64, prec);
    params.alpha_real() + &frac
}

/// Run the Monte-Carlo simulation: deterministic for a fixed seed.
pub fn simulate(params: &Params, cfg: &SimConfig) -> Result<(Histogram, Vec<EmpiricalGap>)> {
    cfg.validate()?;
    let table = DigitTable::new(params)?;
    let prec = params.precision();
    let alpha = params.alpha_real().clone();
    let alpha_f64 = alpha.to_f64();
    let nr = params.n_real();
    let bins = cfg.bins as usize;
    let rng = SplitMix64::new(cfg.seed);

    let nrf = nr.as_fbig().clone();
    let n_int = params.n();
    let n_f64 = params.n() as f64;
    // Binning runs on an f64 shadow of the orbit, resynced from the exact
    // value every RESYNC steps. The shadow error doubles per step, so it
    // stays below 1e-10 between resyncs, four orders of magnitude under the
    // smallest admissible bin width of 1e-2; bin indices therefore match
    // full-precision binning except for points within that sliver of an
    // edge, and the result is still a pure function of (seed, cfg).
    const RESYNC: u32 = 20;
    // a recorded point materially outside [alpha, alpha+1] counts as rejected
    // instead of being clamped into an edge bin; the map cannot produce one,
    // so the histogram invariant demands this stays zero
    let out_of_domain = |off: f64| !(-1e-9..=1.0 + 1e-9).contains(&off);
    let run_sample = |counts: &mut [u64], rejected: &mut u64, sample: u32| {
        let x0 = uniform_in_interval(params, rng.value(sample as u64));
        match &table.fast {
            Some(fast) => {
                // bit-compatible 128-bit path: one correctly-rounded division
                // and an exact integer subtraction per step
                let mut x = Fx::from_real(&x0).expect("sampled point is positive and 128-bit");
                for _ in 0..cfg.burn_in {
                    let j = fast.digit_index(&x);
                    x = x.div_from_int(n_int).sub_int(fast.digits[j]);
                }
                let mut xf = x.to_f64();
                for it in 0..cfg.iters {
                    let j = fast.digit_index(&x);
                    x = x.div_from_int(n_int).sub_int(fast.digits[j]);
                    if it % RESYNC == 0 {
                        xf = x.to_f64();
                    } else {
                        xf = n_f64 / xf - table.digit_f64s[j];
                    }
                    let off = xf - alpha_f64;
                    if out_of_domain(off) {
                        *rejected += 1;
                        continue;
                    }
                    let idx = ((off * bins as f64).floor() as i64).clamp(0, bins as i64 - 1) as usize;
                    counts[idx] += 1;
                }
            }
            None => {
                let bits = params.precision().bits();
                let mut x = x0.as_fbig().clone();
                for _ in 0..cfg.burn_in {
                    let j = table.digit_index(&x);
                    x = fbig_div_rounded(&nrf, &x, bits) - &table.digit_consts[j];
                }
                let mut xf = x.to_f64().value();
                for it in 0..cfg.iters {
                    let j = table.digit_index(&x);
                    x = fbig_div_rounded(&nrf, &x, bits) - &table.digit_consts[j];
                    if it % RESYNC == 0 {
                        xf = x.to_f64().value();
                    } else {
                        xf = n_f64 / xf - table.digit_f64s[j];
                    }
                    let off = xf - alpha_f64;
                    if out_of_domain(off) {
                        *rejected += 1;
                        continue;
                    }
                    let idx = ((off * bins as f64).floor() as i64).clamp(0, bins as i64 - 1) as usize;
                    counts[idx] += 1;
                }
            }
        }
    };

    // chunk the samples so each worker owns one histogram; counts are
    // additive, so the merge order cannot change the result
    let nchunks = (rayon::current_num_threads().max(1) * 4).min(cfg.samples as usize).max(1);
    let chunk = (cfg.samples as usize).div_ceil(nchunks);
    let (counts, rejected): (Vec<u64>, u64) = (0..nchunks)
        .into_par_iter()
        .map(|c| {
            let mut local = vec![0u64; bins];
            let mut rej = 0u64;
            let lo = c * chunk;
            let hi = ((c + 1) * chunk).min(cfg.samples as usize);
            for s in lo..hi {
                run_sample(&mut local, &mut rej, s as u32);
            }
            (local, rej)
        })
        .reduce(
            || (vec![0u64; bins], 0),
            |(mut a, ra), (b, rb)| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                (a, ra + rb)
            },
        );

    let total: u64 = counts.iter().sum();
    debug_assert_eq!(total + rejected, cfg.samples as u64 * cfg.iters as u64);
    let hist = Histogram {
        counts,
        total,
        rejected,
    };
    let gaps = empirical_gaps(&hist, &alpha, cfg, prec);
    Ok((hist, gaps))
}

/// Maximal empty runs of interior bins of length at least `min_gap_bins`.
fn empirical_gaps(hist: &Histogram, alpha: &Real, cfg: &SimConfig, prec: Precision) -> Vec<EmpiricalGap> {
    let bins = cfg.bins as usize;
    let bin_edge = |i: usize| -> Real {
        let frac = Real::from_ratio(&(i as i64).into(), &(bins as i64).into(), prec).expect("bins > 0");
        alpha + &frac
    };
    let mut gaps = Vec::new();
    let mut run_start: Option<usize> = None;
    // interior bins only: the first and last bin touch the endpoints
    for i in 1..bins - 1 {
        if hist.counts[i] == 0 {
            run_start.get_or_insert(i);
        } else if let Some(s) = run_start.take() {
            let len = i - s;
            if len >= cfg.min_gap_bins as usize {
                gaps.push(EmpiricalGap {
                    lo: bin_edge(s),
                    hi: bin_edge(s + len),
                    width_bins: len as u32,
                });
            }
        }
    }
    if let Some(s) = run_start {
        let len = bins - 1 - s;
        if len >= cfg.min_gap_bins as usize {
            gaps.push(EmpiricalGap {
                lo: bin_edge(s),
                hi: bin_edge(s + len),
                width_bins: len as u32,
            });
        }
    }
    gaps
}

/// One row of a stacked-alpha scan.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub index: u32,
    pub alpha: Real,
    pub verdict: VerdictKind,
    pub citation: &'static str,
    pub analytic_gaps: Vec<GapInterval>,
    pub empirical_gaps: Vec<EmpiricalGap>,
}

/// Scan output: one row per alpha on an inclusive uniform grid.
#[derive(Debug, Clone)]
pub struct ScanTable {
    pub n: u64,
    pub cfg: SimConfig,
    pub rows: Vec<ScanRow>,
}

/// Simulate and classify a uniform inclusive grid of alphas. Row `i` is keyed
/// with `seed ^ i`, so rows are reproducible independently of each other.
pub fn scan(n: u64, alpha_lo: &Real, alpha_hi: &Real, rows: u32, cfg: &SimConfig) -> Result<ScanTable> {
    let indices: Vec<u32> = (0..rows).collect();
    let out = scan_rows(n, alpha_lo, alpha_hi, rows, cfg, &indices)?;
    Ok(ScanTable {
        n,
        cfg: cfg.clone(),
        rows: out,
    })
}

/// Compute a subset of scan rows. Each row depends only on the grid
/// definition, the seed and its own index, so any subset reproduces the
/// corresponding rows of the full scan.
pub fn scan_rows(
    n: u64,
    alpha_lo: &Real,
    alpha_hi: &Real,
    rows: u32,
    cfg: &SimConfig,
    indices: &[u32],
) -> Result<Vec<ScanRow>> {
    cfg.validate()?;
    if rows == 0 {
        return Err(Error::domain("scan needs at least one row"));
    }
    if rows > 1_000_000 {
        return Err(Error::domain("scan rows capped at 1e6"));
    }
    let prec = alpha_lo.precision().max(alpha_hi.precision());
    if alpha_lo.sign() != Ordering::Greater || alpha_lo >= alpha_hi {
        return Err(Error::domain("need 0 < alpha_lo < alpha_hi"));
    }
    if let Some(&bad) = indices.iter().find(|&&i| i >= rows) {
        return Err(Error::domain(format!("row index {bad} out of range 0..{rows}")));
    }
    let span = alpha_hi - alpha_lo;
    let denom = Real::from_int(rows.max(2) as i64 - 1, prec);
    indices
        .par_iter()
        .map(|&i| {
            let alpha = if rows == 1 {
                alpha_lo.clone()
            } else {
                let t = &Real::from_int(i as i64, prec) / &denom;
                alpha_lo + &(&span * &t)
            };
            let params = Params::new(n, Value::Approx(alpha.clone()), prec)?;
            let verdict = classify(&params)?;
            let (_, empirical) = simulate(&params, &cfg.with_seed(cfg.seed ^ i as u64))?;
            Ok(ScanRow {
                index: i,
                alpha,
                verdict: verdict.kind,
                citation: verdict.citation,
                analytic_gaps: verdict.gaps,
                empirical_gaps: empirical,
            })
        })
        .collect()
}

impl ScanRow {
    /// One stable CSV line: gaps as `lo..hi` lists, 12 significant digits.
    pub fn csv_line(&self) -> String {
        let prec = self.alpha.precision();
        let analytic = self
            .analytic_gaps
            .iter()
            .map(|g| {
                format!(
                    "{}..{}",
                    g.lo.to_real(prec).to_decimal_string(12),
                    g.hi.to_real(prec).to_decimal_string(12)
                )
            })
            .collect::<Vec<_>>()
            .join(";");
        let empirical = self
            .empirical_gaps
            .iter()
            .map(|g| format!("{}..{}", g.lo.to_decimal_string(12), g.hi.to_decimal_string(12)))
            .collect::<Vec<_>>()
            .join(";");
        format!(
            "{},{},{},{},{},{}",
            self.index,
            self.alpha.to_decimal_string(12),
            self.verdict.as_str(),
            self.citation,
            analytic,
            empirical
        )
    }
}

impl ScanTable {
    pub const CSV_HEADER: &'static str = "index,alpha,verdict,citation,analytic_gaps,empirical_gaps";

    /// Stable CSV rendering: one row per alpha.
    /// Locale-independent, LF line endings, 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.csv_line());
            out.push('\n');
        }
        out
    }
}

/// Cobweb trace: `(x_k, x_k) -> (x_k, x_{k+1}) -> (x_{k+1}, x_{k+1}) -> ...`.
pub fn cobweb(params: &Params, x: &Real, steps: usize) -> Result<Vec<(Real, Real)>> {
    let orbit = crate::map_core::orbit(params, x, steps)?;
    let mut pts = Vec::with_capacity(2 * steps + 1);
    pts.push((orbit[0].clone(), orbit[0].clone()));
    for w in orbit.windows(2) {
        pts.push((w[0].clone(), w[1].clone()));
        pts.push((w[1].clone(), w[1].clone()));
    }
    Ok(pts)
}
