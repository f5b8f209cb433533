//! Deterministic SVG emitters: arrangement squares (with optional cobweb
//! overlay) and stacked scan plots. Coordinates are normalized to the unit
//! square and labeled with offsets from alpha, so the pictures compare
//! directly across systems.

use nexp::arrangement::Arrangement;
use nexp::map_core::{apply_t, Params};
use nexp::numerics::Real;
use nexp::simulate::ScanTable;

const W: f64 = 640.0;
const H: f64 = 640.0;
const M: f64 = 48.0; // margin

fn fx(u: f64) -> f64 {
    M + u * (W - 2.0 * M)
}

fn fy(v: f64) -> f64 {
    // SVG y grows downward; the plot's v grows upward
    H - M - v * (H - 2.0 * M)
}

fn line(x1: f64, y1: f64, x2: f64, y2: f64, style: &str) -> String {
    format!(
        r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" {style}/>"#
    )
}

fn text(x: f64, y: f64, anchor: &str, s: &str) -> String {
    format!(r#"<text x="{x:.3}" y="{y:.3}" text-anchor="{anchor}" font-size="12" font-family="monospace">{s}</text>"#)
}

fn header() -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    )
}

/// Arrangement square: frame, diagonal, dashed dividers at the discontinuity
/// points, branch curves (at least 256 samples in total), fixed-point marks
/// and an optional cobweb overlay.
pub fn render_arrangement(params: &Params, arr: &Arrangement, cobweb: Option<&[(Real, Real)]>) -> String {
    let a = params.alpha_real().to_f64();
    let norm = |x: f64| x - a; // offset from alpha, in [0, 1]
    let mut out = header();
    out.push_str(&format!(
        "<g stroke=\"black\" fill=\"none\" stroke-width=\"1\"><rect x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\"/></g>\n",
        fx(0.0),
        fy(1.0),
        W - 2.0 * M,
        H - 2.0 * M
    ));
    out.push_str(&line(fx(0.0), fy(0.0), fx(1.0), fy(1.0), "stroke=\"black\" stroke-width=\"0.6\""));
    out.push('\n');

    // dividers
    for (i, p) in &arr.discontinuities {
        let u = norm(p.to_f64());
        out.push_str(&line(
            fx(u),
            fy(0.0),
            fx(u),
            fy(1.0),
            "stroke=\"black\" stroke-width=\"0.8\" stroke-dasharray=\"5,4\"",
        ));
        out.push('\n');
        out.push_str(&text(fx(u), fy(0.0) + 16.0, "middle", &format!("p{i}={u:.4}")));
        out.push('\n');
    }

    // branch curves, sampled uniformly per cylinder
    let samples_per = (256usize).div_ceil(arr.cylinders.len()).max(64);
    for cyl in &arr.cylinders {
        let l = cyl.left.to_f64();
        let r = cyl.right.to_f64();
        let mut path = String::from("<path d=\"");
        for k in 0..=samples_per {
            let x = l + (r - l) * (k as f64 / samples_per as f64);
            let y = params.n() as f64 / x - cyl.digit as f64;
            let cmd = if k == 0 { 'M' } else { 'L' };
            path.push_str(&format!("{cmd}{:.3} {:.3} ", fx(norm(x)), fy(norm(y).clamp(0.0, 1.0))));
        }
        path.push_str("\" stroke=\"black\" fill=\"none\" stroke-width=\"1.4\"/>");
        out.push_str(&path);
        out.push('\n');
    }

    // fixed points on the diagonal
    for (i, f) in &arr.fixed_points {
        let u = norm(f.to_real(params.precision()).to_f64());
        out.push_str(&format!(
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"3\" fill=\"black\"/>\n",
            fx(u),
            fy(u)
        ));
        out.push_str(&text(fx(u) + 8.0, fy(u) - 6.0, "start", &format!("F{i}")));
        out.push('\n');
    }

    if let Some(points) = cobweb {
        let mut path = String::from("<path d=\"");
        for (k, (x, y)) in points.iter().enumerate() {
            let cmd = if k == 0 { 'M' } else { 'L' };
            path.push_str(&format!(
                "{cmd}{:.3} {:.3} ",
                fx(norm(x.to_f64())),
                fy(norm(y.to_f64()).clamp(0.0, 1.0))
            ));
        }
        path.push_str("\" stroke=\"blue\" fill=\"none\" stroke-width=\"1\"/>");
        out.push_str(&path);
        out.push('\n');
    }

    out.push_str(&text(fx(0.0), fy(0.0) + 16.0, "middle", "0"));
    out.push('\n');
    out.push_str(&text(fx(1.0), fy(0.0) + 16.0, "middle", "1"));
    out.push('\n');
    out.push_str(&text(
        fx(0.5),
        fy(1.0) - 10.0,
        "middle",
        &format!("N={}, alpha={:.6} (axes offset by alpha)", params.n(), a),
    ));
    out.push_str("\n</svg>\n");
    out
}

/// Cobweb trace for a standalone render (delegates to the arrangement view).
pub fn render_cobweb(params: &Params, arr: &Arrangement, x: &Real, steps: usize) -> nexp::Result<String> {
    let mut pts = Vec::new();
    let mut cur = x.clone();
    pts.push((cur.clone(), cur.clone()));
    for _ in 0..steps {
        let next = apply_t(params, &cur)?;
        pts.push((cur.clone(), next.clone()));
        pts.push((next.clone(), next.clone()));
        cur = next;
    }
    Ok(render_arrangement(params, arr, Some(&pts)))
}

/// Stacked scan: one horizontal support line per row (gaps left blank),
/// alpha increasing upward.
pub fn render_scan(table: &ScanTable, alpha_lo: f64, alpha_hi: f64) -> String {
    let mut out = header();
    out.push_str(&format!(
        "<g stroke=\"black\" fill=\"none\" stroke-width=\"1\"><rect x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\"/></g>\n",
        fx(0.0),
        fy(1.0),
        W - 2.0 * M,
        H - 2.0 * M
    ));
    let span = alpha_hi - alpha_lo;
    for row in &table.rows {
        let a = row.alpha.to_f64();
        let v = (a - alpha_lo) / span;
        // support = [alpha, alpha+1] minus the empirical gaps
        let mut edges = vec![0.0f64];
        for g in &row.empirical_gaps {
            edges.push(g.lo.to_f64() - a);
            edges.push(g.hi.to_f64() - a);
        }
        edges.push(1.0);
        for seg in edges.chunks(2) {
            if seg.len() == 2 && seg[1] > seg[0] {
                out.push_str(&line(
                    fx(seg[0]),
                    fy(v),
                    fx(seg[1]),
                    fy(v),
                    "stroke=\"black\" stroke-width=\"1\"",
                ));
                out.push('\n');
            }
        }
    }
    out.push_str(&text(fx(0.0), fy(0.0) + 16.0, "middle", &format!("alpha={alpha_lo:.4}")));
    out.push('\n');
    out.push_str(&text(fx(0.0), fy(1.0) - 6.0, "middle", &format!("alpha={alpha_hi:.4}")));
    out.push('\n');
    out.push_str(&text(
        fx(0.5),
        fy(0.0) + 32.0,
        "middle",
        &format!("N={}, x offset from alpha", table.n),
    ));
    out.push_str("\n</svg>\n");
    out
}
