//! Sampled scalar fields on rectangular windows, their CSV and SVG forms,
//! and zero-level contour extraction by marching squares.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{BasisContext, BasisKind};
use crate::error::{Error, Result};
use crate::manifest::RunManifest;
use crate::rootlocus::limiting_circles;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let w = Window { x_min, x_max, y_min, y_max };
        if !(x_min < x_max && y_min < y_max) || [x_min, x_max, y_min, y_max].iter().any(|v| !v.is_finite()) {
            return Err(Error::Grid(format!("degenerate window {w}")));
        }
        Ok(w)
    }

    /// `[-d-1, d] x [-(d/2+1), d/2+1]`.
    pub fn default_for(d: usize) -> Self {
        let h = d as f64 / 2.0 + 1.0;
        Window { x_min: -(d as f64) - 1.0, x_max: d as f64, y_min: -h, y_max: h }
    }

    /// Bounding box of the limiting circles of the given binomial pairs (and
    /// their mirror images), enlarged by 15% about its centre. Falls back to
    /// the default window when no pair has circles.
    pub fn auto(ctx: &BasisContext, pairs: &[(usize, usize)]) -> Self {
        let mut bbox: Option<[f64; 4]> = None;
        if ctx.kind == BasisKind::BinomialCoefficient {
            for &(j, k) in pairs {
                let Ok(circles) = limiting_circles(ctx.d, j, k) else { continue };
                for c in circles {
                    let ext = [
                        c.center.re - c.radius,
                        c.center.re + c.radius,
                        -(c.center.im.abs() + c.radius),
                        c.center.im.abs() + c.radius,
                    ];
                    bbox = Some(match bbox {
                        None => ext,
                        Some(b) => [b[0].min(ext[0]), b[1].max(ext[1]), b[2].min(ext[2]), b[3].max(ext[3])],
                    });
                }
            }
        }
        let Some([x0, x1, y0, y1]) = bbox else { return Self::default_for(ctx.d) };
        let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        let (hx, hy) = ((x1 - x0) / 2.0 * 1.15, (y1 - y0) / 2.0 * 1.15);
        Window { x_min: cx - hx, x_max: cx + hx, y_min: cy - hy, y_max: cy + hy }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.x_min, self.x_max, self.y_min, self.y_max]
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (self.x_min..=self.x_max).contains(&z.re) && (self.y_min..=self.y_max).contains(&z.im)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.x_min, self.x_max, self.y_min, self.y_max)
    }
}

impl FromStr for Window {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad window '{s}'"))))
            .collect::<Result<_>>()?;
        if v.len() != 4 {
            return Err(Error::Parse(format!("window needs x_min,x_max,y_min,y_max, got '{s}'")));
        }
        Window::new(v[0], v[1], v[2], v[3])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    DValue,
    Excluded,
    ExcludedConstrained,
    AngleSum,
    BarycenterAbs,
    CustomDet,
}

impl FieldKind {
    pub fn is_boolean(self) -> bool {
        matches!(self, FieldKind::Excluded | FieldKind::ExcludedConstrained)
    }
}

/// Row-major samples: `values[iy * nx + ix]` at `(x_ix, y_iy)`. Undefined
/// cells (e.g. on the real axis for tests that need non-real input) are NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionGrid {
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
    pub field_kind: FieldKind,
}

impl RegionGrid {
    pub fn x(&self, ix: usize) -> f64 {
        coord(self.window.x_min, self.window.x_max, self.nx, ix)
    }

    pub fn y(&self, iy: usize) -> f64 {
        coord(self.window.y_min, self.window.y_max, self.ny, iy)
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }

    /// Evaluates `f` at every node, rows in parallel.
    pub fn fill<F>(window: Window, nx: usize, ny: usize, field_kind: FieldKind, f: F) -> Result<Self>
    where
        F: Fn(Complex64) -> f64 + Sync,
    {
        if nx < 2 || ny < 2 {
            return Err(Error::Grid(format!("resolution must be at least 2x2, got {nx}x{ny}")));
        }
        let values: Vec<f64> = (0..ny)
            .into_par_iter()
            .flat_map_iter(|iy| {
                let y = coord(window.y_min, window.y_max, ny, iy);
                let f = &f;
                (0..nx).map(move |ix| f(Complex64::new(coord(window.x_min, window.x_max, nx, ix), y)))
            })
            .collect();
        Ok(RegionGrid { window, nx, ny, values, field_kind })
    }

    /// `# manifest: <json>`, an `x,y,value` header, then one row per node.
    pub fn to_csv(&self, manifest: &RunManifest) -> String {
        let mut s = String::with_capacity(self.values.len() * 72);
        let _ = writeln!(s, "# manifest: {}", manifest.to_json());
        s.push_str("x,y,value\n");
        for iy in 0..self.ny {
            let y = self.y(iy);
            for ix in 0..self.nx {
                let _ = writeln!(s, "{:.16e},{:.16e},{:.16e}", self.x(ix), y, self.get(ix, iy));
            }
        }
        s
    }

    /// Inverse of [`to_csv`](Self::to_csv); the grid shape is read from the manifest.
    pub fn from_csv(text: &str) -> Result<(Self, RunManifest)> {
        let mut lines = text.lines();
        let first = lines.next().ok_or_else(|| Error::Parse("empty grid file".into()))?;
        let json = first
            .strip_prefix("# manifest: ")
            .ok_or_else(|| Error::Parse("missing manifest line".into()))?;
        let manifest = RunManifest::from_json(json)?;
        if lines.next() != Some("x,y,value") {
            return Err(Error::Parse("missing x,y,value header".into()));
        }
        let window = manifest.window.ok_or_else(|| Error::Parse("manifest has no window".into()))?;
        let (nx, ny) = manifest.resolution.ok_or_else(|| Error::Parse("manifest has no resolution".into()))?;
        let field_kind = manifest.field.ok_or_else(|| Error::Parse("manifest has no field kind".into()))?;
        let mut values = Vec::with_capacity(nx * ny);
        for line in lines {
            let v = line
                .rsplit(',')
                .next()
                .and_then(|t| t.parse::<f64>().ok())
                .ok_or_else(|| Error::Parse(format!("bad grid row '{line}'")))?;
            values.push(v);
        }
        if values.len() != nx * ny {
            return Err(Error::Parse(format!("expected {} rows, found {}", nx * ny, values.len())));
        }
        Ok((RegionGrid { window, nx, ny, values, field_kind }, manifest))
    }

    /// Zero-level contours. Boolean fields are contoured at 1/2.
    pub fn contours(&self) -> Vec<Contour> {
        let level = if self.field_kind.is_boolean() { 0.5 } else { 0.0 };
        marching_squares(self, level)
    }
}

fn coord(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
}

// Edge identifiers: horizontal edge from node (ix, iy) to (ix+1, iy), or
// vertical edge from (ix, iy) to (ix, iy+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum EdgeKey {
    H(usize, usize),
    V(usize, usize),
}

/// Level-set polylines of `grid - level`, stitched across cells. Cells with a
/// NaN corner are skipped. Saddle cells connect through the centre the pair
/// of diagonal corners whose class matches the centre average, which makes
/// the output identical for `f` and `-f`.
pub fn marching_squares(grid: &RegionGrid, level: f64) -> Vec<Contour> {
    let (nx, ny) = (grid.nx, grid.ny);
    let val = |ix: usize, iy: usize| grid.get(ix, iy) - level;
    let mut points: HashMap<EdgeKey, (f64, f64)> = HashMap::new();
    let mut crossing = |key: EdgeKey| -> Option<EdgeKey> {
        let ((ax, ay), (bx, by)) = match key {
            EdgeKey::H(i, j) => ((i, j), (i + 1, j)),
            EdgeKey::V(i, j) => ((i, j), (i, j + 1)),
        };
        let (a, b) = (val(ax, ay), val(bx, by));
        if (a > 0.0) == (b > 0.0) {
            return None;
        }
        points.entry(key).or_insert_with(|| {
            let t = a / (a - b);
            let (x0, y0) = (grid.x(ax), grid.y(ay));
            let (x1, y1) = (grid.x(bx), grid.y(by));
            (x0 + t * (x1 - x0), y0 + t * (y1 - y0))
        });
        Some(key)
    };

    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    for iy in 0..ny - 1 {
        for ix in 0..nx - 1 {
            let c = [val(ix, iy), val(ix + 1, iy), val(ix + 1, iy + 1), val(ix, iy + 1)];
            if c.iter().any(|v| v.is_nan()) {
                continue;
            }
            let pos: Vec<bool> = c.iter().map(|&v| v > 0.0).collect();
            // edges in cyclic order: bottom, right, top, left
            let edges = [EdgeKey::H(ix, iy), EdgeKey::V(ix + 1, iy), EdgeKey::H(ix, iy + 1), EdgeKey::V(ix, iy)];
            let hits: Vec<EdgeKey> = edges.iter().filter_map(|&e| crossing(e)).collect();
            match hits.len() {
                2 => segments.push((hits[0], hits[1])),
                4 => {
                    let centre = (c[0] + c[1] + c[2] + c[3]) / 4.0 > 0.0;
                    if centre == pos[0] {
                        // corners 0 and 2 are joined: cut off corners 1 and 3
                        segments.push((edges[0], edges[1]));
                        segments.push((edges[2], edges[3]));
                    } else {
                        segments.push((edges[3], edges[0]));
                        segments.push((edges[1], edges[2]));
                    }
                }
                _ => {}
            }
        }
    }

    let mut adj: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (s, &(a, b)) in segments.iter().enumerate() {
        adj.entry(a).or_default().push(s);
        adj.entry(b).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();
    let other = |s: usize, e: EdgeKey| if segments[s].0 == e { segments[s].1 } else { segments[s].0 };
    let next_unused = |e: EdgeKey, used: &[bool]| adj[&e].iter().copied().find(|&s| !used[s]);

    // open chains first (start at an endpoint of degree one), then loops
    let mut starts: Vec<EdgeKey> = segments.iter().flat_map(|&(a, b)| [a, b]).filter(|e| adj[e].len() == 1).collect();
    starts.sort_by_key(|e| match *e {
        EdgeKey::H(i, j) => (j, i, 0),
        EdgeKey::V(i, j) => (j, i, 1),
    });
    let loop_starts: Vec<usize> = (0..segments.len()).collect();
    for start in starts {
        if next_unused(start, &used).is_none() {
            continue;
        }
        let mut chain = vec![start];
        let mut cur = start;
        while let Some(s) = next_unused(cur, &used) {
            used[s] = true;
            cur = other(s, cur);
            chain.push(cur);
        }
        out.push(Contour { points: chain.iter().map(|e| points[e]).collect(), closed: false });
    }
    for s0 in loop_starts {
        if used[s0] {
            continue;
        }
        used[s0] = true;
        let start = segments[s0].0;
        let mut chain = vec![start];
        let mut cur = segments[s0].1;
        while cur != start {
            chain.push(cur);
            match next_unused(cur, &used) {
                Some(s) => {
                    used[s] = true;
                    cur = other(s, cur);
                }
                None => break,
            }
        }
        let closed = cur == start;
        out.push(Contour { points: chain.iter().map(|e| points[e]).collect(), closed });
    }
    out
}

/// SVG with `viewBox` equal to the window (y pointing up), one path per
/// contour and optional point markers.
pub fn to_svg(window: &Window, layers: &[(&str, &[Contour])], markers: &[(&str, &[Complex64])]) -> String {
    let w = window.x_max - window.x_min;
    let h = window.y_max - window.y_min;
    let stroke = (w.max(h) / 800.0).max(1e-6);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        window.x_min, -window.y_max, w, h
    );
    let _ = writeln!(s, r#"<g fill="none" stroke="black" stroke-width="{stroke}">"#);
    for (class, contours) in layers {
        for c in contours.iter() {
            let mut d = String::new();
            for (i, (x, y)) in c.points.iter().enumerate() {
                let _ = write!(d, "{}{:.6} {:.6} ", if i == 0 { "M" } else { "L" }, x, -y);
            }
            if c.closed {
                d.push('Z');
            }
            let _ = writeln!(s, r#"<path class="{class}" d="{}"/>"#, d.trim_end());
        }
    }
    s.push_str("</g>\n");
    for (class, pts) in markers {
        for z in pts.iter() {
            let _ = writeln!(s, r#"<circle class="{class}" cx="{:.6}" cy="{:.6}" r="{stroke}"/>"#, z.re, -z.im);
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisContext;
    use crate::rootlocus::oval_point;

    fn manifest_for(g: &RegionGrid) -> RunManifest {
        let mut m = RunManifest::new("test");
        m.window = Some(g.window);
        m.resolution = Some((g.nx, g.ny));
        m.field = Some(g.field_kind);
        m
    }

    #[test]
    fn csv_round_trip() {
        let w = Window::new(-1.3, 2.1, -0.7, 0.9).unwrap();
        let g = RegionGrid::fill(w, 7, 5, FieldKind::CustomDet, |z| (z * z).re / 3.0 + 1e-300 * z.im).unwrap();
        let mut g2 = g.clone();
        g2.values[3] = f64::NAN;
        for grid in [g, g2] {
            let m = manifest_for(&grid);
            let text = grid.to_csv(&m);
            let (back, m2) = RegionGrid::from_csv(&text).unwrap();
            assert_eq!(m, m2);
            assert_eq!(back.window, grid.window);
            assert_eq!((back.nx, back.ny), (grid.nx, grid.ny));
            for (a, b) in back.values.iter().zip(&grid.values) {
                assert!(a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()));
            }
            assert_eq!(back.to_csv(&m2), text);
        }
        assert!(RegionGrid::fill(w, 1, 5, FieldKind::DValue, |_| 0.0).is_err());
        assert!("1,0,0,1".parse::<Window>().is_err());
    }

    #[test]
    fn circle_contour() {
        let w = Window::new(-2.05, 2.0, -1.97, 2.03).unwrap();
        let g = RegionGrid::fill(w, 101, 97, FieldKind::CustomDet, |z| z.norm_sqr() - 1.0).unwrap();
        let c = g.contours();
        assert_eq!(c.len(), 1);
        assert!(c[0].closed);
        for &(x, y) in &c[0].points {
            assert!(((x * x + y * y).sqrt() - 1.0).abs() < 5e-3);
        }
    }

    #[test]
    fn negation_symmetry_with_saddles() {
        let w = Window::new(-3.1, 2.9, -2.95, 3.05).unwrap();
        let f = |z: Complex64| (2.0 * z.re).sin() * (1.7 * z.im).cos() + 0.05 * z.re;
        let a = RegionGrid::fill(w, 61, 59, FieldKind::CustomDet, f).unwrap();
        let b = RegionGrid::fill(w, 61, 59, FieldKind::CustomDet, |z| -f(z)).unwrap();
        let key = |cs: Vec<Contour>| {
            let mut pts: Vec<(u64, u64)> =
                cs.iter().flat_map(|c| c.points.iter().map(|&(x, y)| (x.to_bits(), y.to_bits()))).collect();
            pts.sort();
            pts.dedup();
            pts
        };
        let (ca, cb) = (a.contours(), b.contours());
        assert_eq!(ca.len(), cb.len());
        assert_eq!(key(ca), key(cb));
    }

    #[test]
    fn open_contours_at_the_border() {
        let w = Window::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        let g = RegionGrid::fill(w, 20, 20, FieldKind::CustomDet, |z| z.re - 0.013).unwrap();
        let c = g.contours();
        assert_eq!(c.len(), 1);
        assert!(!c[0].closed);
        assert_eq!(c[0].points.len(), 20);
    }

    #[test]
    fn auto_window_covers_outer_ovals() {
        for d in [6usize, 10] {
            let ctx = BasisContext::new(BasisKind::BinomialCoefficient, d);
            let w = Window::auto(&ctx, &[(0, d)]);
            for s in 1..40 {
                let theta = std::f64::consts::PI * s as f64 / 40.0;
                let z = oval_point(&ctx, 0, d, 1, theta).unwrap();
                assert!(w.contains(z) && w.contains(z.conj()), "d={d} {z}");
            }
        }
    }

    #[test]
    fn svg_shape() {
        let w = Window::new(-1.0, 1.0, -2.0, 2.0).unwrap();
        let c = vec![Contour { points: vec![(0.0, 1.0), (1.0, 0.0), (0.0, 0.0)], closed: true }];
        let s = to_svg(&w, &[("curve", &c)], &[("root", &[Complex64::new(0.5, 0.5)])]);
        assert!(s.contains(r#"viewBox="-1 -2 2 4""#));
        assert!(s.contains(r#"<path class="curve" d="M0.000000 -1.000000 L1.000000 -0.000000 L0.000000 -0.000000 Z"/>"#));
        assert!(s.contains(r#"class="root""#));
    }
}
