//! `nexp` — analysis and simulation of N-expansion interval maps from the
//! command line. Every command writes one self-describing document (JSON,
//! CSV or SVG) with the tool version, precision and seed echoed in it.

mod alpha_expr;
mod doc;
mod svg;

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use nexp::arrangement::{describe, discontinuity_exact};
use nexp::gap_analysis::{classify, escape_time, four_cyl_bracket, Verdict};
use nexp::map_core::{evaluate, expand, orbit, Params};
use nexp::numerics::{Precision, Real, Value};
use nexp::simulate::{cobweb, scan, simulate, ScanTable, SimConfig};

use alpha_expr::AlphaExpr;
use doc::OutputDoc;

/// Errors surfaced to the shell: usage/domain problems exit 2, internal
/// invariant violations exit 3.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Internal(String),
}

impl CliError {
    pub fn usage(msg: impl fmt::Display) -> Self {
        CliError::Usage(msg.to_string())
    }

    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<nexp::Error> for CliError {
    fn from(e: nexp::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "nexp",
    version,
    about = "N-expansion interval maps: arrangements, gap classification, orbit simulation",
    long_about = None
)]
struct Cli {
    /// Working precision in mantissa bits (default 128; the NEXP_PRECISION
    /// environment variable overrides the default, an explicit flag wins)
    #[arg(long, global = true)]
    precision: Option<u32>,

    /// Seed for the counter-based sampling generator
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format (render commands always produce svg)
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the document to this path instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, clap::Args)]
struct SimFlags {
    /// Number of starting points sampled uniformly from the interval
    #[arg(long, default_value_t = 1000)]
    samples: u32,
    /// Iterations discarded before recording; gap regimes with near-neutral
    /// two-cycles can need thousands of steps to drain (see `table3`)
    #[arg(long, default_value_t = 200)]
    burn_in: u32,
    /// Recorded iterations per sample
    #[arg(long, default_value_t = 1000)]
    iters: u32,
    /// Histogram bins over [alpha, alpha+1]
    #[arg(long, default_value_t = 10_000)]
    bins: u32,
    /// Minimum run of empty interior bins that counts as a gap
    #[arg(long, default_value_t = 3)]
    min_gap_bins: u32,
}

impl SimFlags {
    fn config(&self, seed: u64) -> SimConfig {
        SimConfig {
            samples: self.samples,
            burn_in: self.burn_in,
            iters: self.iters,
            bins: self.bins,
            seed,
            min_gap_bins: self.min_gap_bins,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Cylinder decomposition, fixed points, dividers, branch number
    Describe { n: u64, alpha: String },
    /// Gap verdict with exact endpoints where a decision rule applies
    Classify { n: u64, alpha: String },
    /// Orbit prefix [x, T(x), ..., T^steps(x)]
    Orbit {
        n: u64,
        alpha: String,
        x: String,
        steps: usize,
    },
    /// First digits of the expansion of x
    Expand {
        n: u64,
        alpha: String,
        x: String,
        count: usize,
    },
    /// Fold digits back into a value: v <- N/(d + v), seeded with the tail
    Eval {
        n: u64,
        /// Tail value the fold starts from
        #[arg(long)]
        tail: String,
        #[arg(required = true, allow_negative_numbers = true)]
        digits: Vec<i64>,
    },
    /// Monte-Carlo occupancy histogram and empirical gaps
    Simulate {
        n: u64,
        alpha: String,
        #[command(flatten)]
        sim: SimFlags,
    },
    /// Classify + simulate one row per alpha on an inclusive grid
    Scan {
        n: u64,
        alpha_lo: String,
        alpha_hi: String,
        rows: u32,
        #[command(flatten)]
        sim: SimFlags,
    },
    /// Bracket endpoints for the four-cylinder families N in {9,21,37,57,8,20,36,56}
    Table2,
    /// Escape steps from the two middle cylinders for N=5097, alpha=49.98019737
    /// at x = 50.0..50.9 (defaults to 512-bit arithmetic)
    Table3,
    /// SVG pictures of arrangements, cobwebs and scans
    Render {
        #[command(subcommand)]
        mode: RenderMode,
    },
}

#[derive(Subcommand, Debug)]
enum RenderMode {
    /// Arrangement square with branches, dividers and fixed points
    Arrangement {
        n: u64,
        alpha: String,
        /// Overlay the cobweb of this starting point
        #[arg(long)]
        cobweb_from: Option<String>,
        /// Cobweb steps
        #[arg(long, default_value_t = 12)]
        steps: usize,
    },
    /// Arrangement square with a cobweb overlay
    Cobweb {
        n: u64,
        alpha: String,
        x: String,
        steps: usize,
    },
    /// Stacked support plot over an alpha grid
    Scan {
        n: u64,
        alpha_lo: String,
        alpha_hi: String,
        rows: u32,
        #[command(flatten)]
        sim: SimFlags,
    },
}

fn env_precision() -> Option<u32> {
    std::env::var("NEXP_PRECISION").ok().and_then(|v| v.parse().ok())
}

fn resolve_precision(cli: &Cli, default_bits: u32) -> Precision {
    Precision::new(cli.precision.or_else(env_precision).unwrap_or(default_bits))
}

fn decimal_digits(prec: Precision) -> usize {
    ((prec.bits() as f64) * 0.30103).ceil() as usize
}

fn value_json(v: &Value, prec: Precision) -> serde_json::Value {
    let (exact, decimal) = v.display_pair(prec, decimal_digits(prec));
    json!({ "exact": exact, "decimal": decimal })
}

fn real_str(r: &Real) -> String {
    r.to_string()
}

fn parse_real(text: &str, prec: Precision, what: &str) -> Result<Real, CliError> {
    nexp::numerics::parse_value(text, prec)
        .map(|v| v.to_real(prec))
        .map_err(|e| CliError::usage(format!("{what}: {e}")))
}

fn params_from(n: u64, alpha_text: &str, prec: Precision) -> Result<(Params, Value), CliError> {
    let alpha = AlphaExpr::parse(alpha_text)?.resolve(n, prec)?;
    let params = Params::new(n, alpha.clone(), prec)?;
    Ok((params, alpha))
}

fn verdict_json(v: &Verdict, prec: Precision) -> serde_json::Value {
    let gaps: Vec<serde_json::Value> = v
        .gaps
        .iter()
        .map(|g| {
            json!({
                "kind": g.kind.as_str(),
                "lo": value_json(&g.lo, prec),
                "hi": value_json(&g.hi, prec),
            })
        })
        .collect();
    let details = v.details.as_ref().map(|d| {
        json!({
            "k": d.k,
            "i": d.i,
            "d": d.d,
            "alpha_lower": value_json(&Value::Exact(d.alpha_l.clone()), prec),
            "alpha_upper": value_json(&Value::Exact(d.alpha_u.clone()), prec),
            "q": value_json(&Value::Exact(d.q.clone()), prec),
            "r": value_json(&Value::Exact(d.r.clone()), prec),
        })
    });
    json!({
        "verdict": v.kind.as_str(),
        "citation": v.citation,
        "gaps": gaps,
        "bracket": details,
    })
}

fn emit(out: &Option<PathBuf>, body: String) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn forbid_svg(format: Format) -> Result<(), CliError> {
    if format == Format::Svg {
        return Err(CliError::usage(
            "--format svg is only available for render commands",
        ));
    }
    Ok(())
}

fn scan_payload(table: &ScanTable, prec: Precision) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = table
        .rows
        .iter()
        .map(|row| {
            let analytic: Vec<serde_json::Value> = row
                .analytic_gaps
                .iter()
                .map(|g| {
                    json!({
                        "kind": g.kind.as_str(),
                        "lo": g.lo.to_real(prec).to_decimal_string(12),
                        "hi": g.hi.to_real(prec).to_decimal_string(12),
                    })
                })
                .collect();
            let empirical: Vec<serde_json::Value> = row
                .empirical_gaps
                .iter()
                .map(|g| {
                    json!({
                        "lo": g.lo.to_decimal_string(12),
                        "hi": g.hi.to_decimal_string(12),
                        "width_bins": g.width_bins,
                    })
                })
                .collect();
            json!({
                "index": row.index,
                "alpha": row.alpha.to_decimal_string(12),
                "verdict": row.verdict.as_str(),
                "citation": row.citation,
                "analytic_gaps": analytic,
                "empirical_gaps": empirical,
            })
        })
        .collect();
    json!({ "n": table.n, "rows": rows })
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    let default_bits = match cli.cmd {
        Cmd::Table3 => 512,
        _ => 128,
    };
    let prec = resolve_precision(&cli, default_bits);
    let bits = prec.bits();
    let seed = cli.seed;

    match &cli.cmd {
        Cmd::Describe { n, alpha } => {
            forbid_svg(cli.format)?;
            let (params, alpha_v) = params_from(*n, alpha, prec)?;
            let arr = describe(&params)?;
            let cylinders: Vec<serde_json::Value> = arr
                .cylinders
                .iter()
                .map(|c| {
                    json!({
                        "digit": c.digit,
                        "left": real_str(&c.left),
                        "right": real_str(&c.right),
                        "is_full": c.is_full,
                    })
                })
                .collect();
            let fixed_points: Vec<serde_json::Value> = arr
                .fixed_points
                .iter()
                .map(|(i, f)| {
                    json!({
                        "digit": i,
                        "exact": f.to_string(),
                        "decimal": f.to_real(prec).to_string(),
                    })
                })
                .collect();
            let discontinuities: Vec<serde_json::Value> = arr
                .discontinuities
                .iter()
                .map(|(i, p)| {
                    let exact = discontinuity_exact(&params, *i).ok().map(|s| s.to_string());
                    json!({ "digit": i, "exact": exact, "decimal": real_str(p) })
                })
                .collect();
            let payload = json!({
                "n": n,
                "alpha": value_json(&alpha_v, prec),
                "special_case": params.is_special_case(),
                "d_min": arr.d_min,
                "d_max": arr.d_max,
                "num_cylinders": arr.num_cylinders(),
                "all_full": arr.is_full_arrangement(),
                "branch_number": real_str(&arr.branch_number),
                "sigma": real_str(&arr.sigma),
                "cylinders": cylinders,
                "fixed_points": fixed_points,
                "discontinuities": discontinuities,
            });
            let doc = OutputDoc::new(
                format!("describe {n} {alpha}"),
                cli.format.as_str(),
                bits,
                seed,
                payload,
            );
            let body = match cli.format {
                Format::Json => doc.to_json(),
                Format::Csv => {
                    let mut b = String::from("digit,left,right,is_full,fixed_point\n");
                    for c in &arr.cylinders {
                        let f = arr.fixed_point(c.digit).expect("fixed point per cylinder");
                        b.push_str(&format!(
                            "{},{},{},{},{}\n",
                            c.digit,
                            c.left.to_decimal_string(12),
                            c.right.to_decimal_string(12),
                            c.is_full,
                            f.to_real(prec).to_decimal_string(12)
                        ));
                    }
                    doc.to_csv(&b)
                }
                Format::Svg => unreachable!(),
            };
            emit(&cli.out, body)
        }

        Cmd::Classify { n, alpha } => {
            forbid_svg(cli.format)?;
            let (params, alpha_v) = params_from(*n, alpha, prec)?;
            let verdict = classify(&params)?;
            let payload = json!({
                "n": n,
                "alpha": value_json(&alpha_v, prec),
                "classification": verdict_json(&verdict, prec),
            });
            let doc = OutputDoc::new(
                format!("classify {n} {alpha}"),
                cli.format.as_str(),
                bits,
                seed,
                payload,
            );
            let body = match cli.format {
                Format::Json => doc.to_json(),
                Format::Csv => {
                    let mut b = String::from("kind,lo_exact,lo_decimal,hi_exact,hi_decimal\n");
                    for g in &verdict.gaps {
                        let (le, ld) = g.lo.display_pair(prec, 12);
                        let (he, hd) = g.hi.display_pair(prec, 12);
                        b.push_str(&format!(
                            "{},{},{},{},{}\n",
                            g.kind.as_str(),
                            le.unwrap_or_default(),
                            ld,
                            he.unwrap_or_default(),
                            hd
                        ));
                    }
                    doc.to_csv(&b)
                }
                Format::Svg => unreachable!(),
            };
            emit(&cli.out, body)
        }

        Cmd::Orbit { n, alpha, x, steps } => {
            forbid_svg(cli.format)?;
            let (params, _) = params_from(*n, alpha, prec)?;
            let x0 = parse_real(x, prec, "x")?;
            let orb = orbit(&params, &x0, *steps)?;
            let values: Vec<String> = orb.iter().map(real_str).collect();
            let payload = json!({ "n": n, "x": real_str(&x0), "orbit": values });
            let doc = OutputDoc::new(
                format!("orbit {n} {alpha} {x} {steps}"),
                cli.format.as_str(),
                bits,
                seed,
                payload,
            );
            let body = match cli.format {
                Format::Json => doc.to_json(),
                Format::Csv => {
                    let mut b = String::from("k,value\n");
                    for (k, v) in orb.iter().enumerate() {
                        b.push_str(&format!("{k},{}\n", v.to_decimal_string(decimal_digits(prec))));
                    }
                    doc.to_csv(&b)
                }
                Format::Svg => unreachable!(),
            };
            emit(&cli.out, body)
        }

        Cmd::Expand { n, alpha, x, count } => {
            forbid_svg(cli.format)?;
            let (params, _) = params_from(*n, alpha, prec)?;
            let x0 = parse_real(x, prec, "x")?;
            let e = expand(&params, &x0, *count)?;
            let payload = json!({ "n": n, "x": real_str(&x0), "digits": e.digits });
            let doc = OutputDoc::new(
                format!("expand {n} {alpha} {x} {count}"),
                cli.format.as_str(),
                bits,
                seed,
                payload,
            );
            let body = match cli.format {
                Format::Json => doc.to_json(),
                Format::Csv => {
                    let mut b = String::from("k,digit\n");
                    for (k, d) in e.digits.iter().enumerate() {
                        b.push_str(&format!("{},{d}\n", k + 1));
                    }
                    doc.to_csv(&b)
                }
                Format::Svg => unreachable!(),
            };
            emit(&cli.out, body)
        }

        Cmd::Eval { n, tail, digits } => {
            forbid_svg(cli.format)?;
            let tail_v = parse_real(tail, prec, "tail")?;
            let v = evaluate(*n, digits, &tail_v)?;
            let payload = json!({
                "n": n,
                "digits": digits,
                "tail": real_str(&tail_v),
                "value": real_str(&v),
            });
            let doc = OutputDoc::new(
                format!("eval {n} --tail {tail} {digits:?}"),
                cli.format.as_str(),
                bits,
                seed,
                payload,
            );
            let body = match cli.format {
                Format::Json => doc.to_json(),
                Format::Csv => {
                    doc.to_csv(&format!("value\n{}\n", v.to_decimal_string(decimal_digits(prec))))
                }
                Format::Svg => unreachable!(),
            };
            emit(&cli.out, body)
        }

        Cmd::Simulate { n, alpha, sim } => {
            forbid_svg(cli.format)?;
            let (params, alpha_v) = params_from(*n, alpha, prec)?;
            let cfg = sim.config(seed);
            let (hist, gaps) = simulate(&params, &cfg)?;
            if hist.rejected != 0 {
                return Err(CliError::Internal(format!(
                    "{} orbit points left the interval",
                    hist.rejected
                )));
            }
            let occupied = hist.counts.iter().filter(|&&c| c > 0).count();
            let gaps_json: Vec<serde_json::Value> = gaps
                .iter()
                .map(|g| {
                    json!({
                        "lo": g.lo.to_decimal_string(12),
                        "hi": g.hi.to_decimal_string(12),
                        "width_bins": g.width_bins,
                    })
                })
                .collect();
            let payload = json!({
                "n": n,
                "alpha": value_json(&alpha_v, prec),
                "config": {
                    "samples": cfg.samples, "burn_in": cfg.burn_in, "iters": cfg.iters,
                    "bins": cfg.bins, "seed": cfg.seed, "min_gap_bins": cfg.min_gap_bins,
                },
                "histogram": {
                    "bins": cfg.bins,
                    "total": hist.total,
                    "occupied": occupied,
                    "rejected": hist.rejected,
                },
                "empirical_gaps": gaps_json,
            });
            let doc = OutputDoc::new(
                format!("simulate {n} {alpha}"),
                cli.format.as_str(),
                bits,
                seed,
                payload,
            );
            let body = match cli.format {
                Format::Json => doc.to_json(),
                Format::Csv => {
                    let mut b = String::from("lo,hi,width_bins\n");
                    for g in &gaps {
                        b.push_str(&format!(
                            "{},{},{}\n",
                            g.lo.to_decimal_string(12),
                            g.hi.to_decimal_string(12),
                            g.width_bins
                        ));
                    }
                    doc.to_csv(&b)
                }
                Format::Svg => unreachable!(),
            };
            emit(&cli.out, body)
        }

        Cmd::Scan {
            n,
            alpha_lo,
            alpha_hi,
            rows,
            sim,
        } => {
            forbid_svg(cli.format)?;
            let lo = parse_real(alpha_lo, prec, "alpha_lo")?;
            let hi = parse_real(alpha_hi, prec, "alpha_hi")?;
            let cfg = sim.config(seed);
            let table = scan(*n, &lo, &hi, *rows, &cfg)?;
            let doc = OutputDoc::new(
                format!("scan {n} {alpha_lo} {alpha_hi} {rows}"),
                cli.format.as_str(),
                bits,
                seed,
                scan_payload(&table, prec),
            );
            let body = match cli.format {
                Format::Json => doc.to_json(),
                Format::Csv => doc.to_csv(&table.to_csv()),
                Format::Svg => unreachable!(),
            };
            emit(&cli.out, body)
        }

        Cmd::Table2 => {
            forbid_svg(cli.format)?;
            let mut rows = Vec::new();
            for n in [9u64, 21, 37, 57, 8, 20, 36, 56] {
                let b = four_cyl_bracket(n)?
                    .ok_or_else(|| CliError::Internal(format!("bracket missing for N={n}")))?;
                rows.push(json!({
                    "n": n, "k": b.k, "i": b.i, "d": b.d,
                    "alpha_lower": value_json(&Value::Exact(b.alpha_l.clone()), prec),
                    "alpha_upper": value_json(&Value::Exact(b.alpha_u.clone()), prec),
                    "gap_exists": b.gap_exists(),
                }));
            }
            let doc = OutputDoc::new(
                "table2".into(),
                cli.format.as_str(),
                bits,
                seed,
                json!({ "rows": rows }),
            );
            let body = match cli.format {
                Format::Json => doc.to_json(),
                Format::Csv => {
                    let mut b = String::from(
                        "n,k,i,d,alpha_lower_exact,alpha_lower,alpha_upper_exact,alpha_upper,gap_exists\n",
                    );
                    for r in &rows {
                        b.push_str(&format!(
                            "{},{},{},{},{},{},{},{},{}\n",
                            r["n"],
                            r["k"],
                            r["i"],
                            r["d"],
                            r["alpha_lower"]["exact"].as_str().unwrap_or(""),
                            r["alpha_lower"]["decimal"].as_str().unwrap_or(""),
                            r["alpha_upper"]["exact"].as_str().unwrap_or(""),
                            r["alpha_upper"]["decimal"].as_str().unwrap_or(""),
                            r["gap_exists"],
                        ));
                    }
                    doc.to_csv(&b)
                }
                Format::Svg => unreachable!(),
            };
            emit(&cli.out, body)
        }

        Cmd::Table3 => {
            forbid_svg(cli.format)?;
            if bits < 128 {
                return Err(CliError::usage("table3 needs precision >= 128 bits"));
            }
            let alpha = Real::parse_decimal("49.98019737", prec).expect("table alpha parses");
            let params = Params::new(5097, Value::Approx(alpha), prec)?;
            let mut rows = Vec::new();
            for j in 0..10 {
                let xs = format!("50.{j}");
                let x = Real::parse_decimal(&xs, prec).expect("grid value parses");
                let steps = escape_time(&params, &x, 1_000_000)?
                    .ok_or_else(|| CliError::Internal(format!("no escape within bound for x={xs}")))?;
                rows.push((xs, steps));
            }
            let rows_json: Vec<serde_json::Value> = rows
                .iter()
                .map(|(x, s)| json!({ "x": x, "escape_steps": s }))
                .collect();
            let payload = json!({
                "n": 5097,
                "alpha": "49.98019737",
                "rows": rows_json,
            });
            let doc = OutputDoc::new("table3".into(), cli.format.as_str(), bits, seed, payload);
            let body = match cli.format {
                Format::Json => doc.to_json(),
                Format::Csv => {
                    let mut b = String::from("x,escape_steps\n");
                    for (x, s) in &rows {
                        b.push_str(&format!("{x},{s}\n"));
                    }
                    doc.to_csv(&b)
                }
                Format::Svg => unreachable!(),
            };
            emit(&cli.out, body)
        }

        Cmd::Render { mode } => {
            if cli.format == Format::Csv {
                return Err(CliError::usage("render emits svg"));
            }
            let (command, svg_body) = match mode {
                RenderMode::Arrangement {
                    n,
                    alpha,
                    cobweb_from,
                    steps,
                } => {
                    let (params, _) = params_from(*n, alpha, prec)?;
                    let arr = describe(&params)?;
                    let body = match cobweb_from {
                        Some(x) => {
                            let x0 = parse_real(x, prec, "cobweb start")?;
                            svg::render_cobweb(&params, &arr, &x0, *steps)?
                        }
                        None => svg::render_arrangement(&params, &arr, None),
                    };
                    (format!("render arrangement {n} {alpha}"), body)
                }
                RenderMode::Cobweb { n, alpha, x, steps } => {
                    let (params, _) = params_from(*n, alpha, prec)?;
                    let arr = describe(&params)?;
                    let x0 = parse_real(x, prec, "x")?;
                    let pts = cobweb(&params, &x0, *steps)?;
                    (
                        format!("render cobweb {n} {alpha} {x} {steps}"),
                        svg::render_arrangement(&params, &arr, Some(&pts)),
                    )
                }
                RenderMode::Scan {
                    n,
                    alpha_lo,
                    alpha_hi,
                    rows,
                    sim,
                } => {
                    let lo = parse_real(alpha_lo, prec, "alpha_lo")?;
                    let hi = parse_real(alpha_hi, prec, "alpha_hi")?;
                    let table = scan(*n, &lo, &hi, *rows, &sim.config(seed))?;
                    (
                        format!("render scan {n} {alpha_lo} {alpha_hi} {rows}"),
                        svg::render_scan(&table, lo.to_f64(), hi.to_f64()),
                    )
                }
            };
            let doc = OutputDoc::new(command, "svg", bits, seed, json!({}));
            let body = doc.to_svg(&svg_body);
            emit(&cli.out, body)
        }
    }
}

fn main() {
    let outcome = std::panic::catch_unwind(run);
    let code = match outcome {
        Ok(Ok(())) => 0,
        Ok(Err(e)) => {
            eprintln!("nexp: {}", e.message());
            e.code()
        }
        Err(_) => {
            eprintln!("nexp: internal invariant violation");
            3
        }
    };
    std::process::exit(code);
}
