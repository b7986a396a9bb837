//! Strip outline of the spiral as a single closed polygon, plus SVG and
//! vertex-list export for mask layout.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::real::Real;

use super::SpiralCurve;

/// Closed polygon in the spiral plane; the closing edge is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedPolygon<T> {
    pub vertices: Vec<[T; 2]>,
}

/// Outline of the strip: the outer edge `ρ + b/2` traced outward, a cap
/// vertex on the outer end of the centerline, the inner edge `ρ − b/2`
/// traced back, and a cap vertex on the inner end of the centerline.
///
/// Edges are offset radially, which keeps the radial clearance between
/// windings exactly `t` and the strip width `b` along every ray.
pub fn outline<T: Real>(curve: &SpiralCurve<T>, strip_width: T) -> ClosedPolygon<T> {
    let half = strip_width / T::lit(2.0);
    let n = curve.samples.len();
    let mut vertices = Vec::with_capacity(2 * n + 2);
    let at = |theta: T, r: T| {
        let (s, c) = theta.sin_cos();
        [r * c, r * s]
    };
    for s in &curve.samples {
        vertices.push(at(s.theta, curve.radius_at(s.theta) + half));
    }
    if let Some(end) = curve.samples.last() {
        vertices.push([end.position.x, end.position.y]);
    }
    for s in curve.samples.iter().rev() {
        vertices.push(at(s.theta, curve.radius_at(s.theta) - half));
    }
    if let Some(start) = curve.samples.first() {
        vertices.push([start.position.x, start.position.y]);
    }
    ClosedPolygon { vertices }
}

/// Area of the strip footprint, from the shoelace formula on [`outline`].
pub fn footprint_area<T: Real>(curve: &SpiralCurve<T>, strip_width: T) -> T {
    outline(curve, strip_width).area()
}

/// Mask outline, verified to be a simple polygon.
pub fn mask_polygon<T: Real>(curve: &SpiralCurve<T>, strip_width: T) -> Result<ClosedPolygon<T>> {
    if !(strip_width > T::zero()) {
        return Err(Error::InvalidSpec(format!("strip width must be > 0, got {strip_width}")));
    }
    if strip_width >= curve.pitch {
        return Err(Error::GeometryCollision(format!(
            "strip width {} fills the whole pitch {}",
            strip_width, curve.pitch
        )));
    }
    if curve.inner_radius < strip_width / T::lit(2.0) {
        return Err(Error::GeometryCollision(format!(
            "inner edge crosses the spiral center (r_in = {} < b/2 = {})",
            curve.inner_radius,
            strip_width / T::lit(2.0)
        )));
    }
    let polygon = outline(curve, strip_width);
    if let Some((i, j)) = polygon.first_crossing() {
        return Err(Error::GeometryCollision(format!(
            "outline edges {i} and {j} intersect (gap too small or under-sampled)"
        )));
    }
    Ok(polygon)
}

fn orient<T: Real>(a: [T; 2], b: [T; 2], c: [T; 2]) -> T {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_segment<T: Real>(a: [T; 2], b: [T; 2], p: [T; 2]) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

/// True when closed segments `ab` and `cd` share at least one point.
fn segments_touch<T: Real>(a: [T; 2], b: [T; 2], c: [T; 2], d: [T; 2]) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    let z = T::zero();
    if ((o1 > z && o2 < z) || (o1 < z && o2 > z)) && ((o3 > z && o4 < z) || (o3 < z && o4 > z)) {
        return true;
    }
    (o1 == z && on_segment(a, b, c))
        || (o2 == z && on_segment(a, b, d))
        || (o3 == z && on_segment(c, d, a))
        || (o4 == z && on_segment(c, d, b))
}

impl<T: Real> ClosedPolygon<T> {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn edge(&self, i: usize) -> ([T; 2], [T; 2]) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    /// Enclosed area (absolute value of the shoelace sum).
    pub fn area(&self) -> T {
        let n = self.vertices.len();
        let mut twice = T::zero();
        for i in 0..n {
            let (p, q) = self.edge(i);
            twice += p[0] * q[1] - q[0] * p[1];
        }
        (twice / T::lit(2.0)).abs()
    }

    /// First pair of non-adjacent edges that touch, found with an x-sorted
    /// sweep over edge bounding boxes. `None` means the polygon is simple.
    pub fn first_crossing(&self) -> Option<(usize, usize)> {
        let n = self.vertices.len();
        if n < 4 {
            return None;
        }
        let mut order: Vec<usize> = (0..n).collect();
        let xmin = |i: usize| {
            let (p, q) = self.edge(i);
            p[0].min(q[0])
        };
        order.sort_by(|&i, &j| xmin(i).partial_cmp(&xmin(j)).unwrap_or(std::cmp::Ordering::Equal));
        let mut found: Option<(usize, usize)> = None;
        for (k, &i) in order.iter().enumerate() {
            let (a, b) = self.edge(i);
            let xmax = a[0].max(b[0]);
            let (ylo, yhi) = (a[1].min(b[1]), a[1].max(b[1]));
            for &j in &order[k + 1..] {
                if xmin(j) > xmax {
                    break;
                }
                let adjacent = (i + 1) % n == j || (j + 1) % n == i;
                if adjacent {
                    continue;
                }
                let (c, d) = self.edge(j);
                if c[1].max(d[1]) < ylo || c[1].min(d[1]) > yhi {
                    continue;
                }
                if segments_touch(a, b, c, d) {
                    let pair = (i.min(j), i.max(j));
                    found = Some(found.map_or(pair, |f| f.min(pair)));
                }
            }
        }
        found
    }

    /// Vertex list in nm, header `x_nm,y_nm`, closing vertex not repeated.
    pub fn to_csv_nm(&self) -> String {
        let mut out = String::from("x_nm,y_nm\n");
        for v in &self.vertices {
            let _ = writeln!(out, "{:.4},{:.4}", v[0].to_f64_lossy() * 1e9, v[1].to_f64_lossy() * 1e9);
        }
        out
    }

    /// Single closed black path on a white background, 1 user unit = 1 nm.
    pub fn to_svg_nm(&self) -> String {
        let pts: Vec<(f64, f64)> = self
            .vertices
            .iter()
            .map(|v| (v[0].to_f64_lossy() * 1e9, -v[1].to_f64_lossy() * 1e9))
            .collect();
        let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for &(x, y) in &pts {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        let margin = 0.02 * (x1 - x0).max(y1 - y0).max(1.0);
        let (vx, vy) = (x0 - margin, y0 - margin);
        let (w, h) = (x1 - x0 + 2.0 * margin, y1 - y0 + 2.0 * margin);
        let mut d = String::new();
        for (k, (x, y)) in pts.iter().enumerate() {
            let _ = write!(d, "{}{:.3} {:.3} ", if k == 0 { "M" } else { "L" }, x, y);
        }
        d.push('Z');
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{vx:.3} {vy:.3} {w:.3} {h:.3}\" width=\"{w:.3}\" height=\"{h:.3}\">\n\
             <rect x=\"{vx:.3}\" y=\"{vy:.3}\" width=\"{w:.3}\" height=\"{h:.3}\" fill=\"white\"/>\n\
             <path d=\"{d}\" fill=\"black\" fill-rule=\"nonzero\"/>\n\
             </svg>\n"
        )
    }
}
