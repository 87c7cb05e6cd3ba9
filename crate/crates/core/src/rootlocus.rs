//! Sign-set tests that certify points of the complex plane as non-roots,
//! the angle-sum description of the binomial ovals, sector tests and
//! constructive root certificates.

use std::f64::consts::PI;
use std::fmt;

use itertools::Itertools;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::basis::{is_non_real, BasisContext};
use crate::determinant::{chromatic_lambda, Tables};
use crate::error::{Error, Result};
use crate::galedual::{ConstraintSpec, ExtendedDual, LinearConstraint};
use crate::numeric::{det_f64, Dd, NeumaierSum, SignTolerance, Tracked};
use crate::symbolic::{BivarPoly, Rational};

/// A subset of `{-1, 0, +1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SignSet(u8);

impl SignSet {
    pub const EMPTY: SignSet = SignSet(0);

    fn bit(s: i8) -> u8 {
        match s {
            -1 => 1,
            0 => 2,
            _ => 4,
        }
    }

    pub fn insert(&mut self, s: i8) {
        self.0 |= Self::bit(s);
    }

    pub fn from_signs(signs: &[i8]) -> Self {
        let mut out = SignSet::EMPTY;
        for &s in signs {
            out.insert(s);
        }
        out
    }

    pub fn contains(self, s: i8) -> bool {
        self.0 & Self::bit(s) != 0
    }

    /// Both `-1` and `+1` present: the tuple does not witness a root.
    pub fn has_both_signs(self) -> bool {
        self.contains(-1) && self.contains(1)
    }

    pub fn is_zero_only(self) -> bool {
        self.0 == 2
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for SignSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = [(-1, "-1"), (0, "0"), (1, "+1")]
            .iter()
            .filter(|(s, _)| self.contains(*s))
            .map(|(_, n)| *n)
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn parity(n: usize) -> i8 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn require_non_real(z: Complex64) -> Result<()> {
    if is_non_real(z) {
        Ok(())
    } else {
        Err(Error::RealAxis { x: z.re, y: z.im })
    }
}

/// Signs of every `D_{a,b}` at one point, under a tolerance.
#[derive(Debug, Clone)]
pub struct PairSigns {
    dim: usize,
    s: Vec<i8>,
}

impl PairSigns {
    pub fn from_tables(t: &Tables<Tracked>, tol: SignTolerance) -> Self {
        let n = t.dim + 1;
        let mut s = vec![0i8; n * n];
        for a in 0..n {
            for b in a + 1..n {
                s[a * n + b] = t.d(a, b).sign(tol);
            }
        }
        PairSigns { dim: t.dim, s }
    }

    pub fn get(&self, a: usize, b: usize) -> i8 {
        self.s[a * (self.dim + 1) + b]
    }

    /// `σ_{i,j,k} = {(-1)^i sgn D_{j,k}, (-1)^{j-1} sgn D_{i,k}, (-1)^k sgn D_{i,j}}`.
    pub fn sigma(&self, i: usize, j: usize, k: usize) -> SignSet {
        SignSet::from_signs(&[
            parity(i) * self.get(j, k),
            -parity(j) * self.get(i, k),
            parity(k) * self.get(i, j),
        ])
    }

    /// True iff every triple carries both signs.
    pub fn all_triples_excluding(&self) -> bool {
        let n = self.dim + 1;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if !self.sigma(i, j, k).has_both_signs() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn check_triple(d: usize, i: usize, j: usize, k: usize) -> Result<()> {
    if i < j && j < k && k <= d {
        Ok(())
    } else {
        Err(Error::InvalidIndices(format!("need 0 <= i < j < k <= {d}, got ({i}, {j}, {k})")))
    }
}

pub fn sigma_triple(ctx: &BasisContext, i: usize, j: usize, k: usize, z: Complex64) -> Result<SignSet> {
    ctx.require_complex()?;
    check_triple(ctx.d, i, j, k)?;
    require_non_real(z)?;
    let t = Tables::at(ctx, z);
    Ok(PairSigns::from_tables(&t, SignTolerance::default()).sigma(i, j, k))
}

/// `z` lies in `S_{i,j,k}`: the triple may witness a root.
pub fn in_s_ijk(ctx: &BasisContext, i: usize, j: usize, k: usize, z: Complex64) -> Result<bool> {
    Ok(!sigma_triple(ctx, i, j, k, z)?.has_both_signs())
}

/// Proof that no polynomial with nonnegative coefficients in this basis
/// vanishes at `z`.
pub fn excluded(ctx: &BasisContext, z: Complex64) -> Result<bool> {
    excluded_with(ctx, z, SignTolerance::default())
}

pub fn excluded_with(ctx: &BasisContext, z: Complex64, tol: SignTolerance) -> Result<bool> {
    ctx.require_complex()?;
    require_non_real(z)?;
    let t = Tables::at(ctx, z);
    Ok(PairSigns::from_tables(&t, tol).all_triples_excluding())
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// A nonnegative coefficient vector `a != 0` with `sum a_i b_i(z) = 0`, or
/// `None` when no such vector exists (up to tolerance).
pub fn certificate(ctx: &BasisContext, z: Complex64) -> Result<Option<Vec<f64>>> {
    ctx.require_complex()?;
    require_non_real(z)?;
    let w = ctx.eval_all(z);
    let norms: Vec<f64> = w.iter().map(|v| v.norm()).collect();
    let u: Vec<Complex64> = w.iter().zip(&norms).map(|(v, n)| v / n).collect();
    let n = w.len();

    // pairs: antiparallel vectors
    let mut best_pair: Option<(f64, usize, usize)> = None;
    for i in 0..n {
        for j in i + 1..n {
            let c = cross(u[i], u[j]).abs();
            if c <= 1e-9 && (u[i].re * u[j].re + u[i].im * u[j].im) < 0.0
                && best_pair.is_none_or(|(bc, _, _)| c < bc) {
                    best_pair = Some((c, i, j));
                }
        }
    }
    if let Some((_, i, j)) = best_pair {
        let mut a = vec![0.0; n];
        a[i] = 1.0 / norms[i];
        a[j] = 1.0 / norms[j];
        return Ok(Some(normalise(a)));
    }

    // triples: α u_i + β u_j + u_k = 0 with α, β >= 0, best balanced choice
    let mut best: Option<(f64, [usize; 3], [f64; 3])> = None;
    for tri in (0..n).combinations(3) {
        for rot in 0..3 {
            let (i, j, k) = (tri[rot], tri[(rot + 1) % 3], tri[(rot + 2) % 3]);
            let det = cross(u[i], u[j]);
            if det.abs() < 1e-12 {
                continue;
            }
            let alpha = cross(-u[k], u[j]) / det;
            let beta = cross(u[i], -u[k]) / det;
            if alpha < 0.0 || beta < 0.0 {
                continue;
            }
            let hi = alpha.max(beta).max(1.0);
            let lo = alpha.min(beta).min(1.0);
            let score = lo / hi * det.abs();
            if best.is_none_or(|(s, _, _)| score > s) {
                best = Some((score, [i, j, k], [alpha, beta, 1.0]));
            }
        }
    }
    Ok(best.map(|(_, idx, coef)| {
        let mut a = vec![0.0; n];
        for (t, &i) in idx.iter().enumerate() {
            a[i] = coef[t] / norms[i];
        }
        normalise(a)
    }))
}

fn normalise(mut a: Vec<f64>) -> Vec<f64> {
    let m = a.iter().cloned().fold(0.0, f64::max);
    if m > 0.0 {
        for v in &mut a {
            *v /= m;
        }
    }
    a
}

/// `|sum a_i b_i(z)| / sum a_i |b_i(z)|`.
pub fn relative_residual(ctx: &BasisContext, a: &[f64], z: Complex64) -> f64 {
    let w = ctx.eval_all(z);
    let s: Complex64 = w.iter().zip(a).map(|(v, c)| v * c).sum();
    let scale: f64 = w.iter().zip(a).map(|(v, c)| v.norm() * c.abs()).sum();
    s.norm() / scale
}

/// Position of a point relative to the nested ovals of `D_{j,k}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OvalMembership {
    pub angle_sum: f64,
    pub oval_index: usize,
}

/// Centro-symmetric coordinates for `(j, k)`: `z'' = z - shift`, `a_i = i + half`.
pub fn shifted_points(d: usize, j: usize, k: usize) -> (f64, Vec<f64>) {
    let shift = (k as f64 + j as f64 - d as f64 - 1.0) / 2.0;
    let half = (d as f64 - 1.0 - k as f64 + j as f64) / 2.0;
    (shift, (1..=k - j).map(|i| i as f64 + half).collect())
}

/// `A(j,k;z) = sum_i [arg(z'' - a_i) - arg(z'' + a_i)]` for the binomial basis.
pub fn angle_sum(ctx: &BasisContext, j: usize, k: usize, z: Complex64) -> Result<OvalMembership> {
    ctx.require_binomial()?;
    if j >= k || k > ctx.d {
        return Err(Error::InvalidIndices(format!("need 0 <= j < k <= {}", ctx.d)));
    }
    let (shift, a) = shifted_points(ctx.d, j, k);
    let x = z.re - shift;
    let y = z.im.abs();
    let mut sum = NeumaierSum::default();
    for ai in &a {
        sum.add(y.atan2(x - ai));
        sum.add(-y.atan2(x + ai));
    }
    let angle_sum = sum.value();
    let idx = (angle_sum / PI).floor().max(0.0) as usize;
    Ok(OvalMembership { angle_sum, oval_index: idx.min(k - j - 1) })
}

/// Default angle tolerance for closure tests.
pub const ANGLE_TOL: f64 = 1e-9;

/// `z` lies in the closure of the outermost oval of `D_{0,d}`.
pub fn in_outermost_closure(ctx: &BasisContext, z: Complex64) -> Result<bool> {
    Ok(angle_sum(ctx, 0, ctx.d, z)?.angle_sum >= PI - ANGLE_TOL)
}

/// Membership in the closure of the `l`-th oval of `D_{j,k}`.
pub fn in_oval_closure(ctx: &BasisContext, j: usize, k: usize, l: usize, z: Complex64) -> Result<bool> {
    Ok(angle_sum(ctx, j, k, z)?.angle_sum >= l as f64 * PI - ANGLE_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

/// The `k-j-1` circles approached by the binomial ovals as `d` grows.
pub fn limiting_circles(d: usize, j: usize, k: usize) -> Result<Vec<Circle>> {
    if j + 2 > k || k > d {
        return Err(Error::InvalidIndices(format!("need k - j >= 2 and k <= d, got ({j}, {k})")));
    }
    let n = (k - j) as f64;
    let cx = -(d as f64 + 1.0 - k as f64 - j as f64) / 2.0;
    Ok((1..k - j)
        .map(|l| {
            let t = l as f64 * PI / n;
            Circle {
                center: Complex64::new(cx, -(d as f64 / 2.0) / t.tan()),
                radius: d as f64 / (2.0 * t.sin()),
            }
        })
        .collect())
}

/// A point on the `l`-th oval of `D_{j,k}` along the ray from the symmetry
/// centre at angle `theta ∈ (0, π)`, found by bisection on the angle sum.
pub fn oval_point(ctx: &BasisContext, j: usize, k: usize, l: usize, theta: f64) -> Result<Complex64> {
    let (shift, _) = shifted_points(ctx.d, j, k);
    let dir = Complex64::from_polar(1.0, theta);
    let target = l as f64 * PI;
    let f = |r: f64| -> Result<f64> {
        Ok(angle_sum(ctx, j, k, Complex64::new(shift, 0.0) + dir * r)?.angle_sum - target)
    };
    let (mut lo, mut hi) = (1e-9, 1.0);
    while f(hi)? > 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Precondition("oval ray search diverged".into()));
        }
    }
    if f(lo)? < 0.0 {
        return Err(Error::Precondition(format!("oval {l} not reached along ray {theta}")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(Complex64::new(shift, 0.0) + dir * (0.5 * (lo + hi)))
}

/// `|arg z| < π/d`: the sector free of roots for the power basis.
pub fn power_sector_excluded(d: usize, z: Complex64) -> Result<bool> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Precondition("z = 0 has no argument".into()));
    }
    if d == 0 {
        return Err(Error::DegenerateDegree(d));
    }
    Ok(z.arg().abs() < PI / d as f64)
}

/// `|arg z| > (1 - 1/(d-κ)) π`: the cone free of roots for the alternating
/// power basis with `κ` vanishing leading coefficients.
pub fn alt_power_sector(d: usize, kappa: usize, z: Complex64) -> Result<bool> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Precondition("z = 0 has no argument".into()));
    }
    if kappa >= d {
        return Err(Error::DegenerateDegree(d - kappa.min(d)));
    }
    let dp = (d - kappa) as f64;
    Ok(z.arg().abs() > (1.0 - 1.0 / dp) * PI)
}

/// Outside the outermost binomial oval the vectors `w_0..w_d` span a pointed
/// cone with extreme rays `w_0`, `w_d` and the others in between, in order.
pub fn cone_order_check(ctx: &BasisContext, z: Complex64) -> Result<bool> {
    let a = angle_sum(ctx, 0, ctx.d, z)?.angle_sum;
    if a >= PI - 1e-9 {
        return Err(Error::Precondition(format!(
            "angle sum {a} is not below π; z is not outside the outermost oval"
        )));
    }
    let w = ctx.eval_all(z);
    let mut args = vec![w[0].arg()];
    for v in &w[1..] {
        let prev = *args.last().unwrap();
        let mut t = v.arg();
        while t - prev > PI {
            t -= 2.0 * PI;
        }
        while t - prev <= -PI {
            t += 2.0 * PI;
        }
        args.push(t);
    }
    let diffs: Vec<f64> = args.windows(2).map(|p| p[1] - p[0]).collect();
    let monotone = diffs.iter().all(|&x| x >= 0.0) || diffs.iter().all(|&x| x <= 0.0);
    let span = (args[args.len() - 1] - args[0]).abs();
    Ok(monotone && span < PI)
}

/// `sign(w_j · w_k)`, which equals `(-1)^l` on the `l`-th oval of `D_{j,k}`.
pub fn orientation(ctx: &BasisContext, j: usize, k: usize, z: Complex64) -> Result<i8> {
    let wj = ctx.eval(j, z)?;
    let wk = ctx.eval(k, z)?;
    let dot = wj.re * wk.re + wj.im * wk.im;
    Ok(if dot > 0.0 {
        1
    } else if dot < 0.0 {
        -1
    } else {
        0
    })
}

/// `σ(J̄, z)` for one appended inequality and `J = {j,k,l,d+1}`.
pub fn sigma_quad(
    ctx: &BasisContext,
    lambda: &[Rational],
    jkl: (usize, usize, usize),
    z: Complex64,
) -> Result<SignSet> {
    ctx.require_complex()?;
    let (j, k, l) = jkl;
    check_triple(ctx.d, j, k, l)?;
    require_non_real(z)?;
    if lambda.len() != ctx.d + 1 {
        return Err(Error::Constraint(format!("lambda must have length {}", ctx.d + 1)));
    }
    let tol = SignTolerance::default();
    let t = Tables::at(ctx, z);
    let ps = PairSigns::from_tables(&t, tol);
    let omega = t.omega(lambda);
    let last = parity(ctx.d) * t.det_extended(j, k, l, &omega).sign(tol);
    let mut s = ps.sigma(j, k, l);
    s.insert(last);
    Ok(s)
}

#[derive(Debug, Clone)]
enum Evaluator {
    /// One inequality row appended to `W̄`, evaluated by the minor formulas.
    Inequality { lambda: Vec<Rational> },
    /// Column-combined chromatic binomial dual, evaluated by its formula.
    Chromatic { lambda: Rational },
    /// Anything else: dense determinants of the numeric matrix.
    Dense { matrix: Vec<Vec<BivarPoly>> },
}

/// Exclusion test with linear constraints on the coefficients.
#[derive(Debug, Clone)]
pub struct ConstrainedRegion {
    pub ctx: BasisContext,
    pub dual: ExtendedDual,
    pub tol: SignTolerance,
    /// Admit hyperplanes through new rows as well (weak inequalities).
    pub weak: bool,
    rows: usize,
    cols: usize,
    original_rows: usize,
    x_shift: f64,
    eval: Evaluator,
}

/// Numeric per-point state for one sign-set scan.
enum PointState {
    Inequality { t: Tables<Tracked>, omega: Vec<Tracked>, pairs: PairSigns },
    Chromatic { t: Tables<Tracked> },
    Dense { m: Vec<Vec<f64>> },
}

impl ConstrainedRegion {
    pub fn new(ctx: BasisContext, spec: &ConstraintSpec) -> Result<Self> {
        let dual = spec.build(ctx)?;
        let eval = match spec {
            ConstraintSpec::EhrhartS0 => Evaluator::Inequality {
                lambda: LinearConstraint::ehrhart_s0(ctx.d)?.lambda,
            },
            ConstraintSpec::Custom(c) if c.kind.is_inequality() => {
                Evaluator::Inequality { lambda: c.lambda.clone() }
            }
            ConstraintSpec::ChromaticBinomial { eps, .. } => {
                Evaluator::Chromatic { lambda: chromatic_lambda(ctx.d, eps) }
            }
            _ => Evaluator::Dense { matrix: dual.matrix() },
        };
        Ok(Self::assemble(ctx, dual, eval))
    }

    /// Uses dense determinants for any extended dual.
    pub fn dense(ctx: BasisContext, dual: ExtendedDual) -> Self {
        let matrix = dual.matrix();
        Self::assemble(ctx, dual, Evaluator::Dense { matrix })
    }

    fn assemble(ctx: BasisContext, dual: ExtendedDual, eval: Evaluator) -> Self {
        let m = dual.matrix();
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let original_rows = dual.base.rows();
        ConstrainedRegion {
            ctx,
            x_shift: dual.x_shift.to_f64().unwrap(),
            dual,
            tol: SignTolerance::default(),
            weak: false,
            rows,
            cols,
            original_rows,
            eval,
        }
    }

    pub fn with_weak(mut self, weak: bool) -> Self {
        self.weak = weak;
        self
    }

    pub fn with_tolerance(mut self, tol: SignTolerance) -> Self {
        self.tol = tol;
        self
    }

    /// Size of the index sets `J`.
    pub fn j_size(&self) -> usize {
        self.rows - self.cols + 1
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// The admissible index sets `J`.
    pub fn admissible_sets(&self) -> Vec<Vec<usize>> {
        let new: Vec<usize> = (self.original_rows..self.rows).collect();
        let size = self.j_size();
        if new.is_empty() {
            return (0..self.rows).combinations(size).collect();
        }
        if !self.weak {
            if size < new.len() {
                return Vec::new();
            }
            return (0..self.original_rows)
                .combinations(size - new.len())
                .map(|mut c| {
                    c.extend(new.iter().copied());
                    c
                })
                .collect();
        }
        (0..self.rows)
            .combinations(size)
            .filter(|c| c.iter().any(|&i| i < self.original_rows))
            .collect()
    }

    fn point_state(&self, z: Complex64) -> PointState {
        let x = z.re - self.x_shift;
        match &self.eval {
            Evaluator::Inequality { lambda } => {
                let t = Tables::numeric(&self.ctx, self.ctx.d, x, z.im);
                let omega = t.omega(lambda);
                let pairs = PairSigns::from_tables(&t, self.tol);
                PointState::Inequality { t, omega, pairs }
            }
            Evaluator::Chromatic { .. } => {
                PointState::Chromatic { t: Tables::numeric(&self.ctx, self.dual.base.dim, x, z.im) }
            }
            Evaluator::Dense { matrix } => {
                let (xd, yd) = (Dd::from(x), Dd::from(z.im));
                PointState::Dense {
                    m: matrix
                        .iter()
                        .map(|row| row.iter().map(|e| e.eval_dd(xd, yd).to_f64()).collect())
                        .collect(),
                }
            }
        }
    }

    /// Sign of the determinant of the dual with rows `k` (sorted) deleted.
    fn det_sign(&self, st: &PointState, k: &[usize]) -> i8 {
        match (st, &self.eval) {
            (PointState::Inequality { t, omega, pairs }, _) => {
                let new = self.original_rows;
                if let Some(pos) = k.iter().position(|&r| r == new) {
                    let rest: Vec<usize> = k.iter().enumerate().filter(|(i, _)| *i != pos).map(|(_, &r)| r).collect();
                    // p and r factors are positive off the real axis
                    pairs.get(rest[0], rest[1])
                } else {
                    t.det_extended(k[0], k[1], k[2], omega).sign(self.tol)
                }
            }
            (PointState::Chromatic { t }, Evaluator::Chromatic { lambda }) => {
                t.chromatic_det(k[0], k[1], k[2], lambda).sign(self.tol)
            }
            (PointState::Dense { m }, _) => {
                let sub: Vec<Vec<f64>> = m
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !k.contains(i))
                    .map(|(_, r)| r.clone())
                    .collect();
                let (det, scale) = det_f64(&sub);
                self.tol.sign_of(det, scale)
            }
            _ => unreachable!("point state matches evaluator"),
        }
    }

    fn sigma_at(&self, st: &PointState, j: &[usize]) -> SignSet {
        let mut s = SignSet::EMPTY;
        for (i, &ji) in j.iter().enumerate() {
            let rest: Vec<usize> = j.iter().copied().filter(|&r| r != ji).collect();
            // 1-based position i+1: prefactor (-1)^{j_i + i + 2}
            s.insert(parity(ji + i) * self.det_sign(st, &rest));
        }
        s
    }

    /// `σ(J̄, z)` for one index set.
    pub fn sigma(&self, j: &[usize], z: Complex64) -> Result<SignSet> {
        require_non_real(z)?;
        if j.len() != self.j_size() || j.windows(2).any(|w| w[0] >= w[1]) || j.iter().any(|&r| r >= self.rows) {
            return Err(Error::InvalidIndices(format!("bad index set {j:?}")));
        }
        Ok(self.sigma_at(&self.point_state(z), j))
    }

    /// Every admissible `J` with its sign set.
    pub fn sign_sets(&self, z: Complex64) -> Result<Vec<(Vec<usize>, SignSet)>> {
        require_non_real(z)?;
        let st = self.point_state(z);
        Ok(self.admissible_sets().into_iter().map(|j| {
            let s = self.sigma_at(&st, &j);
            (j, s)
        }).collect())
    }

    /// True iff every admissible, non-degenerate `J` carries both signs.
    pub fn excluded(&self, z: Complex64) -> Result<bool> {
        require_non_real(z)?;
        let st = self.point_state(z);
        if let (PointState::Inequality { pairs, .. }, false) = (&st, self.weak) {
            // fast path: the three original signs often settle a set already
            let d = self.ctx.d;
            let new = self.original_rows;
            for (j, k, l) in (0..=d).tuple_combinations() {
                if pairs.sigma(j, k, l).has_both_signs() {
                    continue;
                }
                let s = self.sigma_at(&st, &[j, k, l, new]);
                if s.is_zero_only() {
                    continue;
                }
                if !s.has_both_signs() {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        for j in self.admissible_sets() {
            let s = self.sigma_at(&st, &j);
            if s.is_zero_only() {
                continue;
            }
            if !s.has_both_signs() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// [`ConstrainedRegion::excluded`] built from a constraint spec; without a
/// constraint this is [`excluded`].
pub fn excluded_with_constraints(
    ctx: &BasisContext,
    spec: Option<&ConstraintSpec>,
    z: Complex64,
) -> Result<bool> {
    match spec {
        None => excluded(ctx, z),
        Some(s) => ConstrainedRegion::new(*ctx, s)?.excluded(z),
    }
}
