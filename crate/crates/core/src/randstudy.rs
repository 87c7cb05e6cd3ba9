//! Random nonnegative polynomials, the barycenter field and the clustering
//! study.
//!
//! Polynomial `i` of a batch draws from ChaCha8 seeded with the batch seed on
//! stream `i`, so batches are reproducible regardless of thread count.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::basis::{BasisContext, BasisKind};
use crate::error::{Error, Result};
use crate::galedual::{ConstraintSpec, LinearConstraint};
use crate::grid::{FieldKind, RegionGrid, Window};
use crate::rootfind::{roots_in_basis, PolynomialInBasis};
use crate::rootlocus::in_outermost_closure;

/// Rejections allowed per polynomial before giving up.
pub const MAX_REJECTIONS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpec {
    pub ctx: BasisContext,
    /// Coefficients are uniform in `[0, bound]`.
    pub bound: f64,
    pub count: usize,
    pub seed: u64,
    pub ends_nonzero: bool,
    pub constraint: Option<ConstraintSpec>,
}

impl SampleSpec {
    pub fn new(ctx: BasisContext, count: usize, seed: u64) -> Self {
        SampleSpec { ctx, bound: 1.0, count, seed, ends_nonzero: false, constraint: None }
    }
}

// Equations become assignments: forced zeros, and one coefficient solved
// from each remaining equation.
struct Plan {
    zeros: Vec<usize>,
    solved: Vec<(usize, Vec<f64>)>,
    inequalities: Vec<LinearConstraint>,
}

fn plan(spec: &SampleSpec) -> Result<Plan> {
    let d = spec.ctx.d;
    let mut p = Plan { zeros: Vec::new(), solved: Vec::new(), inequalities: Vec::new() };
    let Some(c) = &spec.constraint else { return Ok(p) };
    for lc in c.coefficient_constraints(d)? {
        if lc.lambda.len() != d + 1 {
            return Err(Error::Constraint(format!(
                "constraint has {} coefficients, expected {}",
                lc.lambda.len(),
                d + 1
            )));
        }
        if lc.kind.is_inequality() {
            p.inequalities.push(lc);
            continue;
        }
        let support: Vec<usize> = (0..=d).filter(|&i| !lc.lambda[i].is_zero()).collect();
        if support.len() == 1 {
            p.zeros.push(support[0]);
            continue;
        }
        let taken = |i: &usize| p.zeros.contains(i) || p.solved.iter().any(|(s, _)| s == i);
        let pivot = *support
            .iter()
            .rev()
            .find(|i| !taken(i))
            .ok_or_else(|| Error::Constraint("equation has no free coefficient".into()))?;
        let lp = lc.lambda[pivot].to_f64().unwrap();
        let coeffs = lc.lambda.iter().map(|l| -l.to_f64().unwrap() / lp).collect();
        p.solved.push((pivot, coeffs));
    }
    if spec.ends_nonzero && (p.zeros.contains(&0) || p.zeros.contains(&d)) {
        return Err(Error::Precondition("constraint forces an end coefficient to zero".into()));
    }
    Ok(p)
}

fn draw_one(spec: &SampleSpec, plan: &Plan, index: usize) -> Result<Vec<f64>> {
    let d = spec.ctx.d;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(index as u64);
    let mut rejections = 0u64;
    loop {
        let mut a: Vec<f64> = (0..=d).map(|_| rng.gen_range(0.0..=spec.bound)).collect();
        for &i in &plan.zeros {
            a[i] = 0.0;
        }
        for (pivot, coeffs) in &plan.solved {
            a[*pivot] = 0.0;
            a[*pivot] = coeffs.iter().zip(&a).map(|(c, v)| c * v).sum();
        }
        let ok = a.iter().all(|&v| v >= 0.0)
            && (!spec.ends_nonzero || (a[0] > 0.0 && a[d] > 0.0))
            && plan.inequalities.iter().all(|c| c.holds_f64(&a, 0.0));
        if ok {
            return Ok(a);
        }
        rejections += 1;
        if rejections > MAX_REJECTIONS {
            return Err(Error::RejectionOverflow(rejections));
        }
    }
}

/// A reproducible batch of random nonnegative polynomials.
pub fn sample(spec: &SampleSpec) -> Result<Vec<PolynomialInBasis>> {
    if spec.count == 0 {
        return Err(Error::Precondition("count must be at least 1".into()));
    }
    if !(spec.bound > 0.0 && spec.bound.is_finite()) {
        return Err(Error::Precondition(format!("bound must be positive, got {}", spec.bound)));
    }
    let plan = plan(spec)?;
    (0..spec.count)
        .into_par_iter()
        .map(|i| PolynomialInBasis::new(spec.ctx, draw_one(spec, &plan, i)?))
        .collect()
}

/// `beta(z) = sum_i b_i(z)`.
pub fn barycenter(ctx: &BasisContext, z: Complex64) -> Complex64 {
    ctx.eval_all(z).into_iter().sum()
}

/// Generalized binomial coefficient `C(w, n)` for complex `w`.
pub fn complex_binomial(w: Complex64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, t| acc * (w - t as f64) / (t + 1) as f64)
}

/// `C(z+d+1, d+1) - C(z, d+1)`, the closed form of the binomial barycenter.
pub fn binomial_barycenter_closed(d: usize, z: Complex64) -> Complex64 {
    complex_binomial(z + (d + 1) as f64, d + 1) - complex_binomial(z, d + 1)
}

/// `(z^{d+1} - 1)/(z - 1)`, the power-basis barycenter.
pub fn power_barycenter_closed(d: usize, z: Complex64) -> Complex64 {
    if z == Complex64::new(1.0, 0.0) {
        return Complex64::new((d + 1) as f64, 0.0);
    }
    (z.powu(d as u32 + 1) - 1.0) / (z - 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringReport {
    pub grid: RegionGrid,
    /// `(polynomial index, root)`.
    pub roots: Vec<(usize, Complex64)>,
}

/// `|beta|` on a grid plus the roots of the sampled batch (none for `count = 0`).
pub fn clustering_report(spec: &SampleSpec, window: Window, nx: usize, ny: usize) -> Result<ClusteringReport> {
    let ctx = spec.ctx;
    let grid = RegionGrid::fill(window, nx, ny, FieldKind::BarycenterAbs, |z| barycenter(&ctx, z).norm())?;
    let roots = if spec.count == 0 { Vec::new() } else { batch_roots(spec)? };
    Ok(ClusteringReport { grid, roots })
}

/// Roots of every polynomial in the batch, tagged with the polynomial index.
pub fn batch_roots(spec: &SampleSpec) -> Result<Vec<(usize, Complex64)>> {
    let polys = sample(spec)?;
    let per: Vec<Vec<Complex64>> = polys.par_iter().map(roots_in_basis).collect::<Result<_>>()?;
    Ok(per.into_iter().enumerate().flat_map(|(i, rs)| rs.into_iter().map(move |r| (i, r))).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MedianProxy {
    /// Median `|beta|` over the non-real roots of the batch.
    pub root_median: f64,
    /// Median `|beta|` over uniform points of the outer oval closure.
    pub region_median: f64,
    pub root_count: usize,
}

impl MedianProxy {
    pub fn holds(&self) -> bool {
        self.root_median < self.region_median
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Compares `|beta|` at sampled roots with `|beta|` at uniform points of the
/// closure of the outermost oval of `D_{0,d}` (binomial basis only).
pub fn median_proxy(spec: &SampleSpec, region_points: usize) -> Result<MedianProxy> {
    let ctx = spec.ctx;
    ctx.require_binomial()?;
    let roots: Vec<Complex64> = batch_roots(spec)?
        .into_iter()
        .map(|(_, r)| r)
        .filter(|r| crate::basis::is_non_real(*r))
        .collect();
    if roots.is_empty() || region_points == 0 {
        return Err(Error::Precondition("median proxy needs non-real roots and region points".into()));
    }
    let window = Window::auto(&ctx, &[(0, ctx.d)]);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(u64::MAX);
    let mut region = Vec::with_capacity(region_points);
    let mut tries = 0u64;
    while region.len() < region_points {
        let z = Complex64::new(
            rng.gen_range(window.x_min..window.x_max),
            rng.gen_range(window.y_min..window.y_max),
        );
        tries += 1;
        if tries > MAX_REJECTIONS * 10 {
            return Err(Error::RejectionOverflow(tries));
        }
        if crate::basis::is_non_real(z) && in_outermost_closure(&ctx, z)? {
            region.push(barycenter(&ctx, z).norm());
        }
    }
    Ok(MedianProxy {
        root_median: median(roots.iter().map(|&r| barycenter(&ctx, r).norm()).collect()),
        region_median: median(region),
        root_count: roots.len(),
    })
}

/// The default clustering run: binomial `d = 6`, `N = d!`, 500 samples.
pub fn default_clustering_spec(seed: u64) -> SampleSpec {
    let d = 6;
    let ctx = BasisContext::new(BasisKind::BinomialCoefficient, d);
    SampleSpec {
        ctx,
        bound: crate::basis::factorial(d).to_f64().unwrap(),
        count: 500,
        seed,
        ends_nonzero: true,
        constraint: None,
    }
}

/// Checks a coefficient vector against every constraint of a spec.
pub fn satisfies(spec: &ConstraintSpec, a: &[f64], tol: f64) -> Result<bool> {
    Ok(spec.coefficient_constraints(a.len() - 1)?.iter().all(|c| c.holds_f64(a, tol)))
}
