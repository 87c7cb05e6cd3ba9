//! Validation suites. Each returns a [`Check`] with a short diagnostic; the
//! acceptance target and the `verify` command both run them.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{is_non_real, BasisContext, BasisKind};
use crate::determinant::{
    chromatic_det, chromatic_lambda, d_closed_eval, d_eval, d_on_real_axis, det_deleted_poly,
    eval_univariate, Tables,
};
use crate::error::Result;
use crate::galedual::{chromatic_equation_dual, primal_rows, ConstraintSpec, GaleDual};
use crate::grid::{FieldKind, RegionGrid, Window};
use crate::numeric::det_rational;
use crate::randstudy::{
    barycenter, batch_roots, binomial_barycenter_closed, default_clustering_spec, median_proxy, SampleSpec,
};
use crate::rootfind::is_real_root;
use crate::rootlocus::{
    angle_sum, certificate, excluded, limiting_circles, relative_residual, shifted_points, ConstrainedRegion,
};
use crate::symbolic::{rat, ratio, BivarPoly, Rational};

/// Seed used by the default runs.
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn timed(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    Check { name: name.to_string(), passed, detail, seconds: start.elapsed().as_secs_f64() }
}

fn random_nonreal(rng: &mut ChaCha8Rng, x: (f64, f64), ymax: f64) -> Complex64 {
    let y = rng.gen_range(0.05..ymax);
    let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    Complex64::new(rng.gen_range(x.0..x.1), s * y)
}

/// Symbolic `W W̄ = 0` and the syzygy identities for every basis and `2 <= d <= dmax`.
pub fn duality(dmax: usize) -> Check {
    timed("duality", || {
        let mut bad = Vec::new();
        let mut n = 0;
        for kind in BasisKind::ALL {
            for d in 2..=dmax {
                let ctx = BasisContext::new(kind, d);
                let gd = GaleDual::build(ctx)?;
                let primal = primal_rows(&ctx, d)?;
                let zero = crate::galedual::annihilates(&primal, &gd.entries);
                let parts: Vec<_> = (0..=d).map(|i| ctx.real_imag(i)).collect::<Result<_>>()?;
                let mut syz = true;
                for k in 0..=d - 2 {
                    let t = ctx.syzygy_triple(k)?;
                    for part in [0, 1] {
                        let v = |i: usize| if part == 0 { &parts[i].0 } else { &parts[i].1 };
                        let s = &(&(&t.p * v(k)) - &(&t.q * v(k + 1))) + &(&t.r * v(k + 2));
                        syz &= s.is_zero();
                    }
                }
                n += 1;
                if !(zero && syz) {
                    bad.push(format!("{kind} d={d}"));
                }
            }
        }
        Ok((bad.is_empty(), format!("{n} (basis, d) cases; failures: {bad:?}")))
    })
}

/// Recursion against closed form at random non-real points.
pub fn recursion_vs_closed(points: usize, dmax: usize, seed: u64) -> Check {
    timed("recursion-vs-closed-form", || {
        let mut jobs = Vec::new();
        for kind in BasisKind::ALL {
            for d in 2..=dmax {
                for j in 0..d {
                    for k in j + 1..=d {
                        jobs.push((kind, d, j, k));
                    }
                }
            }
        }
        let results: Vec<(usize, f64)> = jobs
            .par_iter()
            .enumerate()
            .map(|(idx, &(kind, d, j, k))| -> Result<(usize, f64)> {
                let ctx = BasisContext::new(kind, d);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(idx as u64);
                let (mut bad, mut worst) = (0, 0.0f64);
                for _ in 0..points {
                    let z = random_nonreal(&mut rng, (-2.0 * d as f64 - 2.0, 2.0 * d as f64), d as f64 + 1.0);
                    let a = d_eval(&ctx, j, k, z)?;
                    let b = d_closed_eval(&ctx, j, k, z)?;
                    let err = (a - b).abs() / (1.0 + a.abs());
                    worst = worst.max(err);
                    if err > 1e-9 {
                        bad += 1;
                    }
                }
                Ok((bad, worst))
            })
            .collect::<Result<_>>()?;
        let bad: usize = results.iter().map(|r| r.0).sum();
        let worst = results.iter().map(|r| r.1).fold(0.0, f64::max);
        Ok((
            bad == 0,
            format!("{} pairs x {points} points; violations {bad}; worst scaled error {worst:.2e}", jobs.len()),
        ))
    })
}

/// The worked `d = 3` binomial example, against its printed `p, q, r`.
pub fn example_n2() -> Check {
    timed("example-n2", || {
        let ctx = BasisContext::new(BasisKind::BinomialCoefficient, 3);
        let x = BivarPoly::x();
        let y2 = BivarPoly::y().pow(2);
        let sq = |c: i64| BivarPoly::x_plus(rat(c)).pow(2) + y2.clone();
        // q0 = 2(x+1)^2 + 2y^2 - 4, q1 = 2x^2 + 2y^2 - 4
        let q0_lit = BivarPoly::x_plus(rat(1)).pow(2).scale(&rat(2)) + y2.scale(&rat(2)) - BivarPoly::from_int(4);
        let q1 = x.pow(2).scale(&rat(2)) + y2.scale(&rat(2)) - BivarPoly::from_int(4);
        let (p0, p1, r0, r1) = (sq(0), sq(-1), sq(2), sq(1));
        let t0 = ctx.syzygy_triple(0)?;
        let t1 = ctx.syzygy_triple(1)?;
        let triples_match =
            t0.p == p0 && t0.q == q0_lit && t0.r == r0 && t1.p == p1 && t1.q == q1 && t1.r == r1;
        let d02 = det_deleted_poly(&ctx, 0, 2)? == -(&q0_lit * &r1);
        let d03 = det_deleted_poly(&ctx, 0, 3)? == &(&q0_lit * &q1) - &(&p1 * &r0);
        let d13 = det_deleted_poly(&ctx, 1, 3)? == -(&p0 * &q1);
        // the remaining deleted determinants are nonnegative off the axis
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut others = true;
        for (j, k) in [(0, 1), (1, 2), (2, 3)] {
            let poly = det_deleted_poly(&ctx, j, k)?;
            for _ in 0..200 {
                let z = random_nonreal(&mut rng, (-8.0, 6.0), 6.0);
                others &= poly.eval_f(z.re, z.im) >= 0.0;
            }
        }
        let ok = triples_match && d02 && d03 && d13 && others;
        Ok((
            ok,
            format!("triples {triples_match}; (0,2) {d02}; (0,3) {d03}; (1,3) {d13}; others >= 0 {others}"),
        ))
    })
}

/// No root of a random nonnegative power-basis polynomial within `|arg z| < π/d`.
pub fn power_sector(d: usize, count: usize, seed: u64) -> Check {
    timed("power-sector", || {
        let ctx = BasisContext::new(BasisKind::Power, d);
        let mut spec = SampleSpec::new(ctx, count, seed);
        spec.ends_nonzero = true;
        let roots = batch_roots(&spec)?;
        let limit = PI / d as f64 - 1e-6;
        let bad = roots.iter().filter(|(_, r)| r.arg().abs() < limit).count();
        let closest = roots.iter().map(|(_, r)| r.arg().abs()).fold(PI, f64::min);
        Ok((bad == 0, format!("{} roots; in sector {bad}; smallest |arg| {closest:.6}", roots.len())))
    })
}

/// Binomial roots lie in the outer oval closure and in the real root locus.
pub fn containment(d: usize, count: usize, seed: u64) -> Check {
    timed("containment", || {
        let ctx = BasisContext::new(BasisKind::BinomialCoefficient, d);
        let mut spec = SampleSpec::new(ctx, count, seed);
        spec.ends_nonzero = true;
        let roots = batch_roots(&spec)?;
        let (mut bad_c, mut bad_r, mut min_angle) = (0, 0, f64::INFINITY);
        for &(_, r) in &roots {
            if is_real_root(r) {
                if r.re < -(d as f64) - 1e-9 || r.re > d as f64 - 1.0 + 1e-9 {
                    bad_r += 1;
                }
            } else {
                let a = angle_sum(&ctx, 0, d, r)?.angle_sum;
                min_angle = min_angle.min(a);
                if a < PI - 1e-6 {
                    bad_c += 1;
                }
            }
        }
        Ok((
            bad_c == 0 && bad_r == 0,
            format!(
                "{} roots; non-real outside oval {bad_c}; real outside [-{d},{}] {bad_r}; min angle sum {min_angle:.6}",
                roots.len(),
                d - 1
            ),
        ))
    })
}

fn sample_by_angle(
    ctx: &BasisContext,
    count: usize,
    rng: &mut ChaCha8Rng,
    keep: impl Fn(f64) -> bool,
) -> Result<Vec<Complex64>> {
    let w = Window::auto(ctx, &[(0, ctx.d)]);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let z = Complex64::new(rng.gen_range(w.x_min..w.x_max), rng.gen_range(w.y_min..w.y_max));
        if is_non_real(z) && z.im.abs() > 1e-3 && keep(angle_sum(ctx, 0, ctx.d, z)?.angle_sum) {
            out.push(z);
        }
    }
    Ok(out)
}

/// Certificates inside the oval, exclusion outside.
pub fn tightness(d: usize, count: usize, seed: u64) -> Check {
    timed("tightness", || {
        let ctx = BasisContext::new(BasisKind::BinomialCoefficient, d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inside = sample_by_angle(&ctx, count, &mut rng, |a| a >= PI + 0.01)?;
        let outside = sample_by_angle(&ctx, count, &mut rng, |a| a <= PI - 0.01)?;
        let mut cert_ok = 0;
        let mut worst = 0.0f64;
        for &z in &inside {
            if let Some(a) = certificate(&ctx, z)? {
                let res = relative_residual(&ctx, &a, z);
                worst = worst.max(res);
                if a.iter().all(|&v| v >= 0.0) && res <= 1e-9 {
                    cert_ok += 1;
                }
            }
        }
        let mut out_ok = 0;
        for &z in &outside {
            if certificate(&ctx, z)?.is_none() && excluded(&ctx, z)? {
                out_ok += 1;
            }
        }
        Ok((
            cert_ok == count && out_ok == count,
            format!("inside certified {cert_ok}/{count} (worst residual {worst:.1e}); outside excluded {out_ok}/{count}"),
        ))
    })
}

/// Growth of `D_{0,d}` at infinity and the symbolic top-degree parts.
pub fn asymptotics(d: usize, r: f64, dmax: usize) -> Check {
    timed("asymptotics", || {
        let ctx = BasisContext::new(BasisKind::BinomialCoefficient, d);
        let n = d - 1;
        let expect = if n.is_multiple_of(2) { d as f64 } else { -(d as f64) };
        let mut ratios = Vec::new();
        let mut ok = true;
        for phi in [PI / 6.0, PI / 3.0, 2.0 * PI / 3.0] {
            let v = d_eval(&ctx, 0, d, Complex64::from_polar(r, phi))?;
            let q = v / r.powi(2 * n as i32);
            ok &= ((q - expect) / expect).abs() <= 0.01;
            ratios.push(q);
        }
        let rho = BivarPoly::x().pow(2) + BivarPoly::y().pow(2);
        let mut bad_top = Vec::new();
        for dd in 2..=dmax {
            let c = BasisContext::new(BasisKind::BinomialCoefficient, dd);
            let t = Tables::symbolic(&c, dd)?;
            for j in 0..dd {
                for k in j + 1..=dd {
                    let n = (k - j - 1) as u32;
                    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
                    let want = rho.pow(n).scale(&rat(sign * (n as i64 + 1)));
                    if t.d(j, k).top_degree_part() != want {
                        bad_top.push((dd, j, k));
                    }
                }
            }
        }
        Ok((
            ok && bad_top.is_empty(),
            format!("ratios {ratios:.5?} vs {expect}; top-degree mismatches {bad_top:?}"),
        ))
    })
}

/// Zeros of `D_{j,k}` on rays from the common centre, bracketed on a scan
/// and refined by bisection.
pub fn ray_zeros(ctx: &BasisContext, j: usize, k: usize, origin: Complex64, theta: f64, tmax: f64) -> Result<Vec<f64>> {
    let dir = Complex64::from_polar(1.0, theta);
    let f = |t: f64| d_eval(ctx, j, k, origin + dir * t).map(f64::signum);
    let steps = 4000;
    let mut out = Vec::new();
    let mut prev_t = tmax / steps as f64;
    let mut prev = f(prev_t)?;
    for s in 2..=steps {
        let t = tmax * s as f64 / steps as f64;
        let cur = f(t)?;
        if cur != prev && cur != 0.0 && prev != 0.0 {
            let (mut lo, mut hi) = (prev_t, t);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if f(mid)? == prev {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        prev = cur;
        prev_t = t;
    }
    Ok(out)
}

/// Distance from `origin` along direction `theta` to a circle containing it.
fn ray_circle(origin: Complex64, theta: f64, c: Complex64, r: f64) -> f64 {
    let u = Complex64::from_polar(1.0, theta);
    let w = origin - c;
    let b = w.re * u.re + w.im * u.im;
    let cc = w.norm_sqr() - r * r;
    -b + (b * b - cc).sqrt()
}

/// Zeros along rays compared with the limiting circles.
pub fn circles(d: usize, j: usize, k: usize, rays: usize) -> Check {
    timed("limiting-circles", || {
        let ctx = BasisContext::new(BasisKind::BinomialCoefficient, d);
        let cs = limiting_circles(d, j, k)?;
        let origin = Complex64::new(-((d + 1 - k - j) as f64) / 2.0, 0.0);
        let mut worst = 0.0f64;
        let mut bad = 0;
        for m in 0..rays {
            let theta = PI * (m + 1) as f64 / (rays + 1) as f64;
            let predicted: Vec<f64> = cs.iter().map(|c| ray_circle(origin, theta, c.center, c.radius)).collect();
            let tmax = predicted.iter().cloned().fold(0.0, f64::max) * 1.5;
            let found = ray_zeros(&ctx, j, k, origin, theta, tmax)?;
            if found.len() != predicted.len() {
                bad += 1;
                continue;
            }
            for p in &predicted {
                let nearest = found.iter().map(|f| (f - p).abs()).fold(f64::INFINITY, f64::min);
                let rel = nearest / p;
                worst = worst.max(rel);
                if rel > 0.01 {
                    bad += 1;
                }
            }
        }
        Ok((bad == 0, format!("{rays} rays x {} circles; misses {bad}; worst relative distance {worst:.2e}", cs.len())))
    })
}

/// Nested ovals by contour extraction plus the real-axis interlacing.
pub fn ovals(d: usize, res: usize) -> Check {
    timed("ovals", || {
        let ctx = BasisContext::new(BasisKind::BinomialCoefficient, d);
        let window = Window::auto(&ctx, &[(0, d)]);
        let grid = RegionGrid::fill(window, res, res, FieldKind::DValue, |z| {
            d_eval(&ctx, 0, d, z).unwrap_or(f64::NAN)
        })?;
        let contours = grid.contours();
        let closed = contours.iter().filter(|c| c.closed).count();
        let open = contours.len() - closed;
        let coeffs = d_on_real_axis(&ctx, 0, d)?;
        let (shift, a) = shifted_points(d, 0, d);
        let mut interlace_bad = 0;
        for i in 0..a.len() - 1 {
            for s in [1.0, -1.0] {
                let v1 = eval_univariate(&coeffs, s * a[i] + shift);
                let v2 = eval_univariate(&coeffs, s * a[i + 1] + shift);
                if v1 * v2 >= 0.0 {
                    interlace_bad += 1;
                }
            }
        }
        Ok((
            closed == d - 1 && interlace_bad == 0,
            format!("closed contours {closed} (open {open}) at {res}x{res}; interlacing failures {interlace_bad}"),
        ))
    })
}

/// Probe points with positive real part just inside the outer oval.
pub fn ehrhart_probes(ctx: &BasisContext, count: usize) -> Result<Vec<Complex64>> {
    let d = ctx.d;
    let (shift, _) = shifted_points(d, 0, d);
    let centre = Complex64::new(shift, 0.0);
    let target = PI + 0.025;
    let mut out = Vec::new();
    let mut s = 0;
    while out.len() < count && s < 10 * count {
        s += 1;
        let theta = 0.5 * PI * s as f64 / (2.0 * count as f64 + 1.0);
        let dir = Complex64::from_polar(1.0, theta);
        let g = |t: f64| angle_sum(ctx, 0, d, centre + dir * t).map(|m| m.angle_sum - target);
        let (mut lo, mut hi) = (1e-6, 1.0);
        while g(hi)? > 0.0 {
            hi *= 2.0;
        }
        if g(lo)? < 0.0 {
            continue;
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if g(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let z = centre + dir * lo;
        let a = angle_sum(ctx, 0, d, z)?.angle_sum;
        if z.re > 0.0 && (PI..=PI + 0.05).contains(&a) {
            out.push(z);
        }
    }
    Ok(out)
}

/// Sampled roots avoid the constrained exclusion region; near the outer oval
/// the constraint excludes more than the plain test.
pub fn ehrhart(d: usize, count: usize, probes: usize, res: usize, seed: u64) -> Check {
    timed("ehrhart", || {
        let ctx = BasisContext::new(BasisKind::BinomialCoefficient, d);
        let spec = ConstraintSpec::EhrhartS0;
        let region = ConstrainedRegion::new(ctx, &spec)?;
        let mut sspec = SampleSpec::new(ctx, count, seed);
        sspec.constraint = Some(spec);
        let roots = batch_roots(&sspec)?;
        let nonreal: Vec<Complex64> = roots.iter().map(|r| r.1).filter(|&r| !is_real_root(r)).collect();
        let direct: usize = nonreal
            .par_iter()
            .map(|&r| region.excluded(r).map(usize::from))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum();
        let window = Window::default_for(d);
        let grid = RegionGrid::fill(window, res, res, FieldKind::ExcludedConstrained, |z| {
            if is_non_real(z) {
                region.excluded(z).map_or(f64::NAN, |b| b as u8 as f64)
            } else {
                f64::NAN
            }
        })?;
        let mut cell_hits = 0;
        for &r in &nonreal {
            if !window.contains(r) {
                continue;
            }
            let fx = (r.re - window.x_min) / (window.x_max - window.x_min) * (res - 1) as f64;
            let fy = (r.im - window.y_min) / (window.y_max - window.y_min) * (res - 1) as f64;
            let (ix, iy) = ((fx.floor() as usize).min(res - 2), (fy.floor() as usize).min(res - 2));
            if [(ix, iy), (ix + 1, iy), (ix, iy + 1), (ix + 1, iy + 1)].iter().all(|&(a, b)| grid.get(a, b) == 1.0) {
                cell_hits += 1;
            }
        }
        let pts = ehrhart_probes(&ctx, probes)?;
        let (mut gained, mut lost) = (0, 0);
        for &z in &pts {
            let plain = excluded(&ctx, z)?;
            let constrained = region.excluded(z)?;
            if constrained && !plain {
                gained += 1;
            }
            if plain && !constrained {
                lost += 1;
            }
        }
        let a = direct == 0 && cell_hits == 0;
        let b = pts.len() == probes && gained >= 1 && lost == 0;
        Ok((
            a && b,
            format!(
                "(a) {} non-real roots; excluded at root {direct}; in fully excluded cell {cell_hits}; \
                 (b) {} probes; newly excluded {gained}; lost {lost}",
                nonreal.len(),
                pts.len()
            ),
        ))
    })
}

/// The alternating-power equation leaves the exclusion region unchanged.
pub fn chromatic_altpower(d: usize, kappa: usize, m: i64, side: usize, half_width: f64) -> Check {
    timed("chromatic-altpower", || {
        let ctx = BasisContext::new(BasisKind::AlternatingPower, d);
        let eff = BasisContext::new(BasisKind::AlternatingPower, d - kappa);
        let region = ConstrainedRegion::new(ctx, &ConstraintSpec::ChromaticAltPower { kappa, m })?;
        let dp = d - kappa;
        let h = half_width;
        let pts: Vec<Complex64> = (0..side)
            .flat_map(|iy| {
                (0..side).map(move |ix| {
                    let t = |i: usize| -h + 2.0 * h * i as f64 / (side - 1) as f64;
                    Complex64::new(t(ix), t(iy))
                })
            })
            .filter(|z| is_non_real(*z))
            .collect();
        let mut disagree = Vec::new();
        let mut missing_zero = 0;
        let (mut referee_c, mut referee_u) = (0, 0);
        for &z in &pts {
            let c = region.excluded(z)?;
            let u = excluded(&eff, z)?;
            if c != u {
                disagree.push(z);
            }
            // independent referee: does a coefficient vector obeying the
            // constraint vanish at z?
            let b = eff.eval_all(z);
            let mut cols: Vec<Vec<f64>> = b.iter().map(|v| vec![v.re, v.im, 0.0]).collect();
            cols[dp - 1][2] = -1.0;
            cols[dp][2] = m as f64;
            if c == nonnegative_kernel_exists(&cols) {
                referee_c += 1;
            }
            let plain: Vec<Vec<f64>> = b.iter().map(|v| vec![v.re, v.im]).collect();
            if u == nonnegative_kernel_exists(&plain) {
                referee_u += 1;
            }
            for (set, s) in region.sign_sets(z)? {
                if set.last() == Some(&(dp - 1)) && !s.contains(0) {
                    missing_zero += 1;
                }
            }
        }
        let example = disagree.first().map(|z| format!("; e.g. z = {:.4}{:+.4}i", z.re, z.im)).unwrap_or_default();
        Ok((
            disagree.is_empty() && missing_zero == 0,
            format!(
                "(a) {} points; disagreements {}{example}; support-enumeration referee contradicts \
                 the constrained test at {referee_c} and the plain test at {referee_u} points; \
                 (b) sets {{i,j,k,{}}} without 0: {missing_zero}",
                pts.len(),
                disagree.len(),
                dp - 1
            ),
        ))
    })
}

/// Whether some `a >= 0`, `a != 0` has `sum_i a_i v_i = 0`. Normalising
/// `sum a_i = 1` gives `m + 1` equations, so a basic solution is supported on
/// `m + 1` columns; every such support is solved directly.
pub fn nonnegative_kernel_exists(columns: &[Vec<f64>]) -> bool {
    let m = columns.first().map_or(0, Vec::len) + 1;
    let unit: Vec<Vec<f64>> = columns
        .iter()
        .map(|c| {
            let n = c.iter().map(|v| v * v).sum::<f64>().sqrt();
            let mut u: Vec<f64> = c.iter().map(|v| if n > 0.0 { v / n } else { 0.0 }).collect();
            u.push(1.0);
            u
        })
        .collect();
    if unit.iter().any(|u| u[..m - 1].iter().all(|&v| v == 0.0)) {
        return true;
    }
    (0..columns.len()).combinations(m).any(|support| {
        let mut a: Vec<Vec<f64>> = (0..m)
            .map(|row| {
                let mut r: Vec<f64> = support.iter().map(|&c| unit[c][row]).collect();
                r.push(if row + 1 == m { 1.0 } else { 0.0 });
                r
            })
            .collect();
        solve_in_place(&mut a).is_some_and(|x| x.iter().all(|&v| v >= -1e-12))
    })
}

// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve_in_place(a: &mut [Vec<f64>]) -> Option<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for c in col..=n {
                a[row][c] -= f * a[col][c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (a[row][n] - s) / a[row][row];
    }
    Some(x)
}

/// Chromatic binomial determinants: empty and nonempty loci plus an exact
/// dense oracle.
pub fn chromatic_binomial(d: usize, chi: usize, eps: Rational, points: usize, seed: u64) -> Check {
    timed("chromatic-binomial", || {
        let ctx = BasisContext::new(BasisKind::BinomialCoefficient, d);
        let dim = d - chi;
        let window = Window::new(-(d as f64) - 6.0, 6.0, -8.0, 8.0)?;
        let (nx, ny) = (240, 240);
        let mut empty = Vec::new();
        let mut nonempty = Vec::new();
        for j in 0..dim {
            for k in j + 1..dim {
                for l in k + 1..=dim {
                    let g = RegionGrid::fill(window, nx, ny, FieldKind::CustomDet, |z| {
                        chromatic_det(&ctx, chi, &eps, (j, k, l), z).map_or(f64::NAN, |v| v.to_f64())
                    })?;
                    let pos = g.values.iter().any(|&v| v > 0.0);
                    let neg = g.values.iter().any(|&v| v < 0.0);
                    if pos && neg {
                        nonempty.push((j, k, l));
                    } else {
                        empty.push((j, k, l));
                    }
                }
            }
        }
        let want_empty = if chi == 0 && d == 4 { vec![(0, 1, 2), (1, 2, 3)] } else { empty.clone() };
        let loci_ok = empty == want_empty;

        let ext = chromatic_equation_dual(ctx, chi, &eps)?;
        let mat = ext.matrix();
        let lam = chromatic_lambda(d, &eps);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut mismatches = 0;
        for _ in 0..points {
            let x = ratio(rng.gen_range(-60..60), rng.gen_range(1..7));
            let mut yn = rng.gen_range(-40..40);
            if yn == 0 {
                yn = 1;
            }
            let y = ratio(yn, rng.gen_range(1..7));
            let m: Vec<Vec<Rational>> = mat.iter().map(|row| row.iter().map(|e| e.eval(&x, &y)).collect()).collect();
            let xs = &x - rat(chi as i64);
            let t = Tables::exact(&ctx, dim, &xs, &y)?;
            for j in 0..dim {
                for k in j + 1..dim {
                    for l in k + 1..=dim {
                        let sub: Vec<Vec<Rational>> = m
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| ![j, k, l].contains(i))
                            .map(|(_, r)| r.clone())
                            .collect();
                        if t.chromatic_det(j, k, l, &lam) != det_rational(&sub) {
                            mismatches += 1;
                        }
                    }
                }
            }
        }
        Ok((
            loci_ok && mismatches == 0,
            format!("empty loci {empty:?}; nonempty {}; oracle mismatches {mismatches} over {points} points", nonempty.len()),
        ))
    })
}

/// Barycenter closed form and the clustering median proxy.
pub fn barycenter_check(degrees: &[usize], points: usize, seed: u64) -> Check {
    timed("barycenter", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for &d in degrees {
            let ctx = BasisContext::new(BasisKind::BinomialCoefficient, d);
            for _ in 0..points {
                let z = Complex64::new(rng.gen_range(-2.0 * d as f64..d as f64), rng.gen_range(-(d as f64)..d as f64));
                let b = barycenter(&ctx, z);
                worst = worst.max((b - binomial_barycenter_closed(d, z)).norm() / (1.0 + b.norm()));
            }
        }
        let proxy = median_proxy(&default_clustering_spec(seed), 2000)?;
        Ok((
            worst <= 1e-10 && proxy.holds(),
            format!(
                "worst relative error {worst:.1e}; median |beta| at {} roots {:.4e} vs region {:.4e}",
                proxy.root_count, proxy.root_median, proxy.region_median
            ),
        ))
    })
}

/// Every suite name accepted by [`run_suite`].
pub const SUITES: [&str; 13] = [
    "duality",
    "recursion",
    "example-n2",
    "power-sector",
    "containment",
    "tightness",
    "asymptotics",
    "circles",
    "ovals",
    "ehrhart",
    "chromatic-altpower",
    "chromatic-binomial",
    "barycenter",
];

/// Runs one suite at its default scale. `count` and `d` override where they apply.
pub fn run_suite(name: &str, d: Option<usize>, count: Option<usize>, seed: u64) -> Option<Check> {
    Some(match name {
        "duality" => duality(d.unwrap_or(10)),
        "recursion" => recursion_vs_closed(count.unwrap_or(1000), d.unwrap_or(10), seed),
        "example-n2" => example_n2(),
        "power-sector" => power_sector(d.unwrap_or(6), count.unwrap_or(10_000), seed),
        "containment" => containment(d.unwrap_or(6), count.unwrap_or(1000), seed),
        "tightness" => tightness(d.unwrap_or(6), count.unwrap_or(500), seed),
        "asymptotics" => asymptotics(d.unwrap_or(8), 1e4, 10),
        "circles" => circles(d.unwrap_or(200), 0, 4, 16),
        "ovals" => ovals(d.unwrap_or(10), 800),
        "ehrhart" => ehrhart(d.unwrap_or(10), count.unwrap_or(10_000), 50, 200, seed),
        "chromatic-altpower" => chromatic_altpower(d.unwrap_or(6), 1, 7, 32, 4.0),
        "chromatic-binomial" => chromatic_binomial(d.unwrap_or(4), 0, ratio(1, 2), count.unwrap_or(200), seed),
        "barycenter" => barycenter_check(&[4, 6, 10], count.unwrap_or(1000), seed),
        _ => return None,
    })
}
