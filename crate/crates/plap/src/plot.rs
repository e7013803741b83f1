//! Static SVG convergence plots. Fixed 800x600 canvas, fixed axis
//! formatting, no timestamps: identical inputs render byte-identical
//! files, so the plots are diffable in tests.

use std::fmt::Write as _;

use crate::asymptotics::SweepResult;
use crate::error::{PlapError, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 30.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// sup-norm column against q, with an optional theta reference line.
    SupnormVsQ,
    /// Rayleigh-minimum column against q, with an optional lambda_p line.
    LambdaVsQ,
    /// log-log rate plot: ln |Lambda_q/mu_q - 1| against ln |q - p|.
    Rate,
}

impl PlotKind {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "supnorm_vs_q" => Ok(Self::SupnormVsQ),
            "lambda_vs_q" => Ok(Self::LambdaVsQ),
            "rate" => Ok(Self::Rate),
            other => Err(PlapError::Config(format!(
                "unknown plot kind `{other}` (expected supnorm_vs_q, lambda_vs_q or rate)"
            ))),
        }
    }
}

/// Reference values drawn as dashed horizontal lines where applicable.
#[derive(Debug, Clone, Copy, Default)]
pub struct PlotRefs {
    pub theta: Option<f64>,
    pub lambda_p: Option<f64>,
}

/// Render one sweep column as a deterministic SVG document.
pub fn plot_sweep(sweep: &SweepResult, kind: PlotKind, refs: &PlotRefs) -> Result<String> {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for r in &sweep.rows {
        if !r.converged {
            continue;
        }
        match kind {
            PlotKind::SupnormVsQ => {
                if r.sup_norm.is_finite() {
                    pts.push((r.q, r.sup_norm));
                }
            }
            PlotKind::LambdaVsQ => {
                if r.lambda_q.is_finite() {
                    pts.push((r.q, r.lambda_q));
                }
            }
            PlotKind::Rate => {
                let gap = (r.capital_lambda / r.mu - 1.0).abs();
                let dq = (r.q - sweep.p).abs();
                if gap > 0.0 && dq > 0.0 && gap.is_finite() {
                    pts.push((dq.ln(), gap.ln()));
                }
            }
        }
    }
    if pts.is_empty() {
        return Err(PlapError::Schema("no data rows".into()));
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let (title, xlabel, ylabel, refline) = match kind {
        PlotKind::SupnormVsQ => (
            "sup-norm of u_q against q",
            "q",
            "sup norm",
            refs.theta.map(|v| ("theta", v)),
        ),
        PlotKind::LambdaVsQ => (
            "Rayleigh minimum lambda_q against q",
            "q",
            "lambda_q",
            refs.lambda_p.map(|v| ("lambda_p", v)),
        ),
        PlotKind::Rate => ("ln |Lambda_q/mu_q - 1| against ln |q - p|", "ln |q - p|", "ln gap", None),
    };

    let (mut ymin, mut ymax) = y_range(&pts);
    if let Some((_, v)) = refline {
        ymin = ymin.min(v);
        ymax = ymax.max(v);
    }
    let (ymin, ymax) = pad_range(ymin, ymax);
    let (xmin, xmax) = pad_range(pts[0].0, pts[pts.len() - 1].0);

    let to_x = |x: f64| MARGIN_L + (x - xmin) / (xmax - xmin) * (WIDTH - MARGIN_L - MARGIN_R);
    let to_y = |y: f64| HEIGHT - MARGIN_B - (y - ymin) / (ymax - ymin) * (HEIGHT - MARGIN_T - MARGIN_B);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"24\" font-family=\"monospace\" font-size=\"16\" text-anchor=\"middle\">{}</text>",
        WIDTH / 2.0,
        title
    );

    // axes
    let _ = writeln!(
        svg,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        MARGIN_L,
        HEIGHT - MARGIN_B,
        WIDTH - MARGIN_R,
        HEIGHT - MARGIN_B
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        MARGIN_L, MARGIN_T, MARGIN_L,
        HEIGHT - MARGIN_B
    );

    // ticks
    for k in 0..=4 {
        let fx = xmin + (xmax - xmin) * k as f64 / 4.0;
        let px = to_x(fx);
        let _ = writeln!(
            svg,
            "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
            HEIGHT - MARGIN_B,
            HEIGHT - MARGIN_B + 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{px:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">{fx:.4}</text>",
            HEIGHT - MARGIN_B + 18.0
        );
        let fy = ymin + (ymax - ymin) * k as f64 / 4.0;
        let py = to_y(fy);
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" stroke=\"black\"/>",
            MARGIN_L - 5.0,
            MARGIN_L
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">{fy:.4}</text>",
            MARGIN_L - 8.0,
            py + 4.0
        );
    }

    // axis labels
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">{}</text>",
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        HEIGHT - 14.0,
        xlabel
    );
    let _ = writeln!(
        svg,
        "<text x=\"18\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2})\">{}</text>",
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        ylabel
    );

    // reference line
    if let Some((name, v)) = refline {
        let py = to_y(v);
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" stroke=\"crimson\" stroke-dasharray=\"6 4\"/>",
            MARGIN_L,
            WIDTH - MARGIN_R
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\" fill=\"crimson\" text-anchor=\"end\">{name} = {v:.6}</text>",
            WIDTH - MARGIN_R - 4.0,
            py - 6.0
        );
    }

    // polyline + markers
    let mut path = String::new();
    for (i, &(x, y)) in pts.iter().enumerate() {
        let _ = write!(path, "{}{:.2},{:.2}", if i == 0 { "" } else { " " }, to_x(x), to_y(y));
    }
    let _ = writeln!(svg, "<polyline points=\"{path}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\"/>");
    for &(x, y) in &pts {
        let _ = writeln!(
            svg,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"steelblue\"/>",
            to_x(x),
            to_y(y)
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

fn y_range(pts: &[(f64, f64)]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &(_, y) in pts {
        lo = lo.min(y);
        hi = hi.max(y);
    }
    (lo, hi)
}

fn pad_range(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        (lo - 1.0, hi + 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::{SweepRow, SweepResult};

    fn sweep() -> SweepResult {
        let mk = |q: f64, sup: f64| SweepRow {
            q,
            lambda: 1.0,
            sup_norm: sup,
            l1_norm: 1.0,
            lq_norm: 1.0,
            lp_norm: 1.0,
            mu: 9.6,
            capital_lambda: 9.9,
            lambda_q: 9.8,
            residual: 1e-10,
            iterations: 3,
            converged: true,
        };
        SweepResult { p: 2.0, lambda: 9.87, s: f64::INFINITY, rows: vec![mk(1.9, 1.22), mk(2.1, 1.21)] }
    }

    #[test]
    fn renders_reference_line() {
        let svg = plot_sweep(
            &sweep(),
            PlotKind::SupnormVsQ,
            &PlotRefs { theta: Some(1.213061), lambda_p: None },
        )
        .unwrap();
        assert!(svg.contains("theta = 1.213061"));
        assert!(svg.contains("<svg"));
        assert!(svg.contains("polyline"));
    }

    #[test]
    fn deterministic_output() {
        let refs = PlotRefs { theta: Some(1.213061), lambda_p: Some(9.8696) };
        let a = plot_sweep(&sweep(), PlotKind::LambdaVsQ, &refs).unwrap();
        let b = plot_sweep(&sweep(), PlotKind::LambdaVsQ, &refs).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_rows_rejected() {
        let mut s = sweep();
        s.rows.clear();
        match plot_sweep(&s, PlotKind::Rate, &PlotRefs::default()) {
            Err(PlapError::Schema(msg)) => assert_eq!(msg, "no data rows"),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn rate_plot_uses_log_gap() {
        let svg = plot_sweep(&sweep(), PlotKind::Rate, &PlotRefs::default()).unwrap();
        assert!(svg.contains("ln |q - p|"));
    }

    #[test]
    fn kind_parsing() {
        assert_eq!(PlotKind::parse("rate").unwrap(), PlotKind::Rate);
        assert!(PlotKind::parse("pie").is_err());
    }
}
