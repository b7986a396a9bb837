//! Minimal SVG line plot for deformation profiles.

use std::fmt::Write;

use crate::beam::Profile;
use crate::real::Real;

pub const PLOT_WIDTH: f64 = 1000.0;
pub const PLOT_HEIGHT: f64 = 600.0;

const LEFT: f64 = 90.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 70.0;

fn ticks(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..=count).map(|i| lo + (hi - lo) * i as f64 / count as f64).collect()
}

/// Δρ against θ with labeled axes, 1000×600 user units.
pub fn profile_svg<T: Real>(profile: &Profile<T>, title: &str) -> String {
    let xs: Vec<f64> = profile.theta.iter().map(|v| v.to_f64_lossy()).collect();
    let ys: Vec<f64> = profile.drho.iter().map(|v| v.to_f64_lossy()).collect();
    let x_lo = xs.first().copied().unwrap_or(0.0);
    let mut x_hi = xs.last().copied().unwrap_or(1.0);
    if x_hi <= x_lo {
        x_hi = x_lo + 1.0;
    }
    let y_lo = ys.iter().fold(0.0f64, |m, &v| m.min(v)).min(-0.1);
    let y_hi = ys.iter().fold(0.0f64, |m, &v| m.max(v)).max(0.1) * 1.05;
    let pw = PLOT_WIDTH - LEFT - RIGHT;
    let ph = PLOT_HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * pw;
    let sy = |y: f64| TOP + (y_hi - y) / (y_hi - y_lo) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{PLOT_WIDTH}" height="{PLOT_HEIGHT}" viewBox="0 0 {PLOT_WIDTH} {PLOT_HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-size="18" text-anchor="middle">{}</text>"#,
        PLOT_WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for t in ticks(x_lo, x_hi, 5) {
        let x = sx(t);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" font-size="14" text-anchor="middle">{t:.1}</text>"#,
            TOP + ph,
            TOP + ph + 6.0,
            TOP + ph + 24.0
        );
    }
    for t in ticks(y_lo, y_hi, 5) {
        let y = sy(t);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" font-size="14" text-anchor="end">{t:.2}</text>"#,
            LEFT - 6.0,
            LEFT - 10.0,
            y + 5.0
        );
    }
    if y_lo < 0.0 {
        let y0 = sy(0.0);
        let _ = writeln!(
            s,
            r#"<line x1="{LEFT}" y1="{y0:.2}" x2="{:.2}" y2="{y0:.2}" stroke="gray" stroke-dasharray="4 4"/>"#,
            LEFT + pw
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="16" text-anchor="middle">winding angle theta (rad)</text>"#,
        LEFT + pw / 2.0,
        PLOT_HEIGHT - 20.0
    );
    let _ = writeln!(
        s,
        r#"<text x="24" y="{:.2}" font-size="16" text-anchor="middle" transform="rotate(-90 24 {:.2})">normalized displacement drho</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );
    let mut points = String::new();
    for (x, y) in xs.iter().zip(&ys) {
        let _ = write!(points, "{:.2},{:.2} ", sx(*x), sy(*y));
    }
    let _ = writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
        points.trim_end()
    );
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn has_size_and_labels() {
        let p = Profile {
            theta: vec![0.0, 1.0, 2.0],
            drho: vec![1.0, 0.5, 0.0],
        };
        let svg = profile_svg(&p, "mode 1");
        assert!(svg.contains(r#"width="1000""#) && svg.contains(r#"height="600""#));
        assert!(svg.contains("theta (rad)") && svg.contains("drho"));
    }
}
