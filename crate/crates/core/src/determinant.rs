//! The tridiagonal determinants `D_{j,k}`, deleted-row determinants of `W̄`,
//! the minors used for constraint rows, and their closed forms.
//!
//! One generic table type serves three coefficient rings: `BivarPoly` for
//! symbolic identities, `Rational` for exact point evaluation and `Tracked`
//! (double-double with a magnitude bound) for fast sign decisions.

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::basis::{BasisContext, BasisKind};
use crate::error::{Error, Result};
use crate::numeric::{CDd, Dd, Tracked};
use crate::symbolic::{rat, BivarPoly, Rational};

/// The ring operations the determinant formulas need.
pub trait Ring: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, b: &Self) -> Self;
    fn mul(&self, b: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rational(v: &Rational) -> Self;
    fn sub(&self, b: &Self) -> Self {
        self.add(&b.neg())
    }
}

impl Ring for BivarPoly {
    fn zero() -> Self {
        BivarPoly::zero()
    }
    fn one() -> Self {
        BivarPoly::one()
    }
    fn add(&self, b: &Self) -> Self {
        self + b
    }
    fn mul(&self, b: &Self) -> Self {
        self * b
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(v: &Rational) -> Self {
        BivarPoly::constant(v.clone())
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, b: &Self) -> Self {
        self + b
    }
    fn mul(&self, b: &Self) -> Self {
        self * b
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(v: &Rational) -> Self {
        v.clone()
    }
}

impl Ring for Tracked {
    fn zero() -> Self {
        Tracked::ZERO
    }
    fn one() -> Self {
        Tracked::ONE
    }
    fn add(&self, b: &Self) -> Self {
        *self + *b
    }
    fn mul(&self, b: &Self) -> Self {
        *self * *b
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn from_rational(v: &Rational) -> Self {
        Tracked::exact(Dd::from_rational(v))
    }
}

fn check_pair(dim: usize, j: usize, k: usize) -> Result<()> {
    if j >= k || k > dim {
        Err(Error::InvalidIndices(format!("need 0 <= j < k <= {dim}, got j={j}, k={k}")))
    } else {
        Ok(())
    }
}

fn check_triple(dim: usize, j: usize, k: usize, l: usize) -> Result<()> {
    if !(j < k && k < l && l <= dim) {
        Err(Error::InvalidIndices(format!(
            "need 0 <= j < k < l <= {dim}, got ({j}, {k}, {l})"
        )))
    } else {
        Ok(())
    }
}

/// Syzygy values for columns `0..dim-1` and every `D_{a,b}`, in one ring.
#[derive(Debug, Clone)]
pub struct Tables<T> {
    pub dim: usize,
    pub p: Vec<T>,
    pub q: Vec<T>,
    pub r: Vec<T>,
    /// `dmat[a][b] = D_{a,b}` for `a < b`, zero otherwise.
    dmat: Vec<Vec<T>>,
}

impl<T: Ring> Tables<T> {
    pub fn from_triples(dim: usize, p: Vec<T>, q: Vec<T>, r: Vec<T>) -> Self {
        let mut dmat = vec![vec![T::zero(); dim + 1]; dim + 1];
        for a in 0..dim {
            dmat[a][a + 1] = T::one();
            for b in a + 2..=dim {
                let t1 = q[b - 2].neg().mul(&dmat[a][b - 1]);
                let t2 = if b >= a + 3 {
                    r[b - 3].mul(&p[b - 2]).mul(&dmat[a][b - 2])
                } else {
                    T::zero()
                };
                dmat[a][b] = t1.sub(&t2);
            }
        }
        Tables { dim, p, q, r, dmat }
    }

    /// `D_{a,b}`, with `D_{a,b} = 0` for `a >= b`.
    pub fn d(&self, a: usize, b: usize) -> T {
        if a >= b {
            T::zero()
        } else {
            self.dmat[a][b].clone()
        }
    }

    fn prod_p(&self, from: usize, to_incl: isize) -> T {
        (from as isize..=to_incl).fold(T::one(), |acc, i| acc.mul(&self.p[i as usize]))
    }

    fn prod_r(&self, from: usize, to_incl: isize) -> T {
        (from as isize..=to_incl).fold(T::one(), |acc, i| acc.mul(&self.r[i as usize]))
    }

    /// `det W̄_{(j,k)} = p_0..p_{j-1} D_{j,k} r_{k-1}..r_{dim-2}`.
    pub fn det_deleted(&self, j: usize, k: usize) -> T {
        self.prod_p(0, j as isize - 1)
            .mul(&self.d(j, k))
            .mul(&self.prod_r(k - 1, self.dim as isize - 2))
    }

    /// Minor of `W̄` without rows `j < k < l` and column `c`.
    pub fn minor(&self, j: usize, k: usize, l: usize, c: usize) -> T {
        if c < j || c + 1 >= l {
            return T::zero();
        }
        let head = self.prod_p(0, j as isize - 1);
        let tail = self.prod_r(l - 1, self.dim as isize - 2);
        let mid = if c < k {
            self.d(j, c + 1).mul(&self.prod_p(c + 1, k as isize - 1)).mul(&self.d(k, l))
        } else {
            self.d(j, k).mul(&self.prod_r(k - 1, c as isize - 1)).mul(&self.d(c + 1, l))
        };
        head.mul(&mid).mul(&tail)
    }

    /// `ω_c = -λ_c p_c + λ_{c+1} q_c - λ_{c+2} r_c`.
    pub fn omega(&self, lambda: &[Rational]) -> Vec<T> {
        (0..self.dim - 1)
            .map(|c| {
                let a = T::from_rational(&lambda[c]).mul(&self.p[c]).neg();
                let b = T::from_rational(&lambda[c + 1]).mul(&self.q[c]);
                let e = T::from_rational(&lambda[c + 2]).mul(&self.r[c]);
                a.add(&b).sub(&e)
            })
            .collect()
    }

    /// `det W̃_{{j,k,l}}` for one appended row `ω`, expanded along that row.
    pub fn det_extended(&self, j: usize, k: usize, l: usize, omega: &[T]) -> T {
        let mut acc = T::zero();
        for (c, w) in omega.iter().enumerate() {
            let term = w.mul(&self.minor(j, k, l, c));
            acc = if (self.dim + c).is_multiple_of(2) { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    /// `[W̃]_K` for the column-combined chromatic binomial dual:
    /// `λ Σ_{c} (-1)^c M_c - (-1)^{d'-2} r_{d'-2} M_{d'-2}`.
    pub fn chromatic_det(&self, j: usize, k: usize, l: usize, lambda: &Rational) -> T {
        let last = self.dim - 2;
        let mut sum = T::zero();
        for c in 0..=last {
            let m = self.minor(j, k, l, c);
            sum = if c % 2 == 0 { sum.add(&m) } else { sum.sub(&m) };
        }
        let corr = self.r[last].mul(&self.minor(j, k, l, last));
        let main = T::from_rational(lambda).mul(&sum);
        if last.is_multiple_of(2) {
            main.sub(&corr)
        } else {
            main.add(&corr)
        }
    }
}

impl Tables<BivarPoly> {
    pub fn symbolic(ctx: &BasisContext, dim: usize) -> Result<Self> {
        ctx.require_complex()?;
        let (mut p, mut q, mut r) = (Vec::new(), Vec::new(), Vec::new());
        for k in 0..dim.saturating_sub(1) {
            let t = ctx.syzygy_triple(k)?;
            p.push(t.p);
            q.push(t.q);
            r.push(t.r);
        }
        Ok(Tables::from_triples(dim, p, q, r))
    }
}

impl Tables<Rational> {
    pub fn exact(ctx: &BasisContext, dim: usize, x: &Rational, y: &Rational) -> Result<Self> {
        ctx.require_complex()?;
        let (mut p, mut q, mut r) = (Vec::new(), Vec::new(), Vec::new());
        for k in 0..dim.saturating_sub(1) {
            let t = ctx.syzygy_triple(k)?;
            p.push(t.p.eval(x, y));
            q.push(t.q.eval(x, y));
            r.push(t.r.eval(x, y));
        }
        Ok(Tables::from_triples(dim, p, q, r))
    }
}

impl Tables<Tracked> {
    /// Numeric tables at `(x, y)`; `dim` may be smaller than `ctx.d` for
    /// translated (vanishing-coefficient) duals.
    pub fn numeric(ctx: &BasisContext, dim: usize, x: f64, y: f64) -> Self {
        let (mut p, mut q, mut r) = (Vec::new(), Vec::new(), Vec::new());
        for k in 0..dim.saturating_sub(1) {
            let t = ctx.triple_values(k, Dd::from(x), Dd::from(y));
            p.push(Tracked::exact(t.p));
            q.push(Tracked::exact(t.q));
            r.push(Tracked::exact(t.r));
        }
        Tables::from_triples(dim, p, q, r)
    }

    pub fn at(ctx: &BasisContext, z: Complex64) -> Self {
        Self::numeric(ctx, ctx.d, z.re, z.im)
    }
}

/// `D_{j,k}` as a polynomial in `x, y`.
#[derive(Debug, Clone, PartialEq)]
pub struct DPoly {
    pub j: usize,
    pub k: usize,
    pub poly: BivarPoly,
}

/// Symbolic `D_{j,k}` from the three-term recursion.
pub fn d_poly(ctx: &BasisContext, j: usize, k: usize) -> Result<DPoly> {
    ctx.require_complex()?;
    check_pair(ctx.d, j, k)?;
    let (mut prev, mut cur) = (BivarPoly::zero(), BivarPoly::one());
    for b in j + 2..=k {
        let t = ctx.syzygy_triple(b - 2)?;
        let mut next = -(&t.q * &cur);
        if b >= j + 3 {
            let r_prev = ctx.syzygy_triple(b - 3)?.r;
            next = &next - &(&(&r_prev * &t.p) * &prev);
        }
        prev = cur;
        cur = next;
    }
    Ok(DPoly { j, k, poly: cur })
}

/// `D_{j,k}(x, y)` from the recursion, carried with its magnitude bound.
pub fn d_eval_tracked(ctx: &BasisContext, j: usize, k: usize, x: f64, y: f64) -> Result<Tracked> {
    ctx.require_complex()?;
    check_pair(ctx.d, j, k)?;
    let (xd, yd) = (Dd::from(x), Dd::from(y));
    let mut prev = Tracked::ZERO;
    let mut cur = Tracked::ONE;
    let mut prev_tv: Option<crate::basis::TripleValues> = None;
    for b in j + 2..=k {
        let tv = ctx.triple_values(b - 2, xd, yd);
        let mut next = -(Tracked::exact(tv.q) * cur);
        if let Some(pt) = prev_tv {
            next = next - Tracked::exact(pt.r) * Tracked::exact(tv.p) * prev;
        }
        prev = cur;
        cur = next;
        prev_tv = Some(tv);
    }
    Ok(cur)
}

/// `D_{j,k}(z)` as a float (saturating to `±inf` past the `f64` range).
pub fn d_eval(ctx: &BasisContext, j: usize, k: usize, z: Complex64) -> Result<f64> {
    Ok(d_eval_tracked(ctx, j, k, z.re, z.im)?.to_f64())
}

/// `D_{j,k}` from `(f(z) - f(z̄)) / (z - z̄)`, refusing points near the real axis.
pub fn d_closed_eval(ctx: &BasisContext, j: usize, k: usize, z: Complex64) -> Result<f64> {
    ctx.require_complex()?;
    check_pair(ctx.d, j, k)?;
    if z.im.abs() < 1e-8 * (1.0 + z.re.abs()) {
        return Err(Error::RealAxis { x: z.re, y: z.im });
    }
    let n = k - j - 1;
    let zd = CDd::new(Dd::from(z.re), Dd::from(z.im));
    let prod = |shifts: &mut dyn Iterator<Item = f64>, w: CDd| {
        shifts.fold(CDd::one(), |acc, c| acc * w.add_real(c))
    };
    let (lo, hi) = (j as i64, k as i64);
    // f(z) - f(z̄) = 2i Im f(z) whenever f has real coefficients
    let im_f = match ctx.kind {
        BasisKind::Power | BasisKind::AlternatingPower => {
            prod(&mut (0..k - j).map(|_| 0.0), zd).im
        }
        BasisKind::FallingFactorial => prod(&mut (lo..hi).map(|t| -t as f64), zd).im,
        BasisKind::RisingFactorial | BasisKind::AlternatingRisingFactorial => {
            prod(&mut (lo..hi).map(|t| t as f64), zd).im
        }
        BasisKind::BinomialCoefficient => {
            // f(z) = A(z) B(z̄) / d and f(z̄) = conj(f(z))
            let d = ctx.d as f64;
            let a = prod(&mut (lo..hi).map(|t| -t as f64), zd);
            let b = prod(&mut (lo..hi).map(|t| d - t as f64), zd);
            (a * b.conj()).im * (1.0 / d)
        }
    };
    let v = (im_f / Dd::from(z.im)).to_f64();
    // the alternating bases flip the sign of every q, hence of D by (-1)^n
    let sign = if ctx.kind.is_alternating() || n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * v)
}

/// `det W̄_{(j,k)}` at a point.
pub fn det_deleted(ctx: &BasisContext, j: usize, k: usize, z: Complex64) -> Result<f64> {
    ctx.require_complex()?;
    check_pair(ctx.d, j, k)?;
    Ok(Tables::at(ctx, z).det_deleted(j, k).to_f64())
}

/// Symbolic `det W̄_{(j,k)}`.
pub fn det_deleted_poly(ctx: &BasisContext, j: usize, k: usize) -> Result<BivarPoly> {
    check_pair(ctx.d, j, k)?;
    Ok(Tables::symbolic(ctx, ctx.d)?.det_deleted(j, k))
}

/// The minor `[W̄]_{{j,k,l};c}` at a point.
pub fn minor_eval(ctx: &BasisContext, jkl: (usize, usize, usize), c: usize, z: Complex64) -> Result<f64> {
    ctx.require_complex()?;
    let (j, k, l) = jkl;
    check_triple(ctx.d, j, k, l)?;
    if c + 2 > ctx.d {
        return Err(Error::IndexOutOfRange { index: c, max: ctx.d - 2 });
    }
    Ok(Tables::at(ctx, z).minor(j, k, l, c).to_f64())
}

/// `det W̃_{{j,k,l}}` for a single inequality `λ`.
pub fn det_extended(
    ctx: &BasisContext,
    jkl: (usize, usize, usize),
    lambda: &[Rational],
    z: Complex64,
) -> Result<Tracked> {
    ctx.require_complex()?;
    let (j, k, l) = jkl;
    check_triple(ctx.d, j, k, l)?;
    if lambda.len() != ctx.d + 1 {
        return Err(Error::Constraint(format!("lambda must have length {}", ctx.d + 1)));
    }
    let t = Tables::at(ctx, z);
    let omega = t.omega(lambda);
    Ok(t.det_extended(j, k, l, &omega))
}

/// `[W̃]_K` for the chromatic binomial dual with `χ` vanishing coefficients and
/// parameter `ε`, at a point in original coordinates.
pub fn chromatic_det(
    ctx: &BasisContext,
    chi: usize,
    eps: &Rational,
    jkl: (usize, usize, usize),
    z: Complex64,
) -> Result<Tracked> {
    ctx.require_binomial()?;
    if ctx.d < 3 || chi > ctx.d - 3 {
        return Err(Error::Constraint(format!("chi = {chi} out of range for d = {}", ctx.d)));
    }
    let dim = ctx.d - chi;
    let (j, k, l) = jkl;
    check_triple(dim, j, k, l)?;
    let t = Tables::numeric(ctx, dim, z.re - chi as f64, z.im);
    Ok(t.chromatic_det(j, k, l, &chromatic_lambda(ctx.d, eps)))
}

/// `λ = ε d (d-1)`.
pub fn chromatic_lambda(d: usize, eps: &Rational) -> Rational {
    let d = d as i64;
    eps * rat(d * (d - 1))
}

/// `(-1)^{k-j-1} (k-j)`: the binomial `D_{j,k}` behaves like this multiple of
/// `(x^2+y^2)^{k-j-1}` at infinity.
pub fn leading_asymptote(ctx: &BasisContext, j: usize, k: usize) -> Result<i64> {
    ctx.require_binomial()?;
    check_pair(ctx.d, j, k)?;
    let n = (k - j) as i64;
    Ok(if (n - 1) % 2 == 0 { n } else { -n })
}

/// Power-basis zero lines: `D_{j,k}` vanishes on the rays of angle
/// `π l / (n+1)`, `l = 1..n`, with `n = k-j-1`.
pub fn power_zero_angles(j: usize, k: usize) -> Vec<f64> {
    let n = k - j - 1;
    (1..=n).map(|l| std::f64::consts::PI * l as f64 / (n + 1) as f64).collect()
}

/// Real `D_{j,k}(x, 0)` coefficients in `x` (exact).
pub fn d_on_real_axis(ctx: &BasisContext, j: usize, k: usize) -> Result<Vec<Rational>> {
    Ok(d_poly(ctx, j, k)?.poly.at_y_zero())
}

/// Evaluates a univariate rational polynomial (ascending coefficients) in `f64`.
pub fn eval_univariate(coeffs: &[Rational], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{det_rational, Scaled};
    use crate::symbolic::ratio;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(kind: BasisKind, d: usize) -> BasisContext {
        BasisContext::new(kind, d)
    }

    #[test]
    fn boundary_cases() {
        for kind in BasisKind::ALL {
            let c = ctx(kind, 6);
            for j in 0..6 {
                assert_eq!(d_poly(&c, j, j + 1).unwrap().poly, BivarPoly::one());
            }
            for j in 0..5 {
                assert_eq!(d_poly(&c, j, j + 2).unwrap().poly, -c.syzygy_triple(j).unwrap().q);
            }
        }
        assert_eq!(
            d_poly(&ctx(BasisKind::Power, 5), 1, 3).unwrap().poly,
            BivarPoly::x().scale(&rat(-2))
        );
        assert!(d_poly(&ctx(BasisKind::Power, 5), 3, 3).is_err());
        assert!(d_poly(&ctx(BasisKind::Power, 5), 0, 6).is_err());
    }

    #[test]
    fn binomial_two_step_is_circle() {
        // in coordinates shifted by (k+j-d-1)/2, D = -2(x^2 + y^2 - (d^2-1)/4)
        for d in 2..=9usize {
            let c = ctx(BasisKind::BinomialCoefficient, d);
            for j in 0..=d - 2 {
                let k = j + 2;
                let shift = ratio((k + j) as i64 - d as i64 - 1, 2);
                let dp = d_poly(&c, j, k).unwrap().poly.shift_x(&shift);
                let expect = (BivarPoly::x().pow(2) + BivarPoly::y().pow(2)
                    - BivarPoly::constant(ratio((d * d) as i64 - 1, 4)))
                .scale(&rat(-2));
                assert_eq!(dp, expect, "d={d} j={j}");
            }
        }
    }

    #[test]
    fn even_in_y() {
        for kind in BasisKind::ALL {
            for d in 2..=10 {
                let c = ctx(kind, d);
                let t = Tables::symbolic(&c, d).unwrap();
                for j in 0..d {
                    for k in j + 1..=d {
                        assert!(t.d(j, k).all_y_degrees_even(), "{kind} d={d} ({j},{k})");
                    }
                }
            }
        }
    }

    #[test]
    fn recursion_variants_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kind in BasisKind::ALL {
            for d in 2..=10 {
                let c = ctx(kind, d);
                let t = Tables::symbolic(&c, d).unwrap();
                for _ in 0..20 {
                    let x: f64 = rng.gen_range(-12.0..12.0);
                    let y: f64 = rng.gen_range(-8.0..8.0);
                    let num = Tables::numeric(&c, d, x, y);
                    for j in 0..d {
                        for k in j + 1..=d {
                            let exact = t.d(j, k).eval_dd(Dd::from(x), Dd::from(y)).to_f64();
                            let a = d_eval(&c, j, k, Complex64::new(x, y)).unwrap();
                            let b = num.d(j, k).to_f64();
                            let scale = t.d(j, k).abs_scale(x, y);
                            assert!((a - exact).abs() <= 1e-10 * (1.0 + scale), "{kind} {d} {j} {k}");
                            assert!((b - a).abs() <= 1e-12 * (1.0 + scale));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_recursion() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for kind in BasisKind::ALL {
            for d in 2..=10 {
                let c = ctx(kind, d);
                for _ in 0..30 {
                    let x: f64 = rng.gen_range(-12.0..12.0);
                    let mut y: f64 = rng.gen_range(-8.0..8.0);
                    if y.abs() < 0.05 {
                        y = 0.05;
                    }
                    let z = Complex64::new(x, y);
                    for j in 0..d {
                        for k in j + 1..=d {
                            let a = d_eval(&c, j, k, z).unwrap();
                            let b = d_closed_eval(&c, j, k, z).unwrap();
                            assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()), "{kind} d={d} ({j},{k}) {a} {b}");
                        }
                    }
                }
            }
        }
        assert!(matches!(
            d_closed_eval(&ctx(BasisKind::Power, 4), 0, 2, Complex64::new(1.0, 1e-12)),
            Err(Error::RealAxis { .. })
        ));
    }

    #[test]
    fn power_closed_forms() {
        // D_n = (-1)^n (z^{n+1} - z̄^{n+1}) / (z - z̄), alternating without the sign
        let z = Complex64::new(0.7, 1.3);
        for n in 0..6usize {
            let w = (z.powu(n as u32 + 1) - z.conj().powu(n as u32 + 1)) / (z - z.conj());
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let p = d_eval(&ctx(BasisKind::Power, 8), 1, n + 2, z).unwrap();
            let a = d_eval(&ctx(BasisKind::AlternatingPower, 8), 1, n + 2, z).unwrap();
            assert!((p - sign * w.re).abs() < 1e-12 * (1.0 + w.re.abs()));
            assert!((a - w.re).abs() < 1e-12 * (1.0 + w.re.abs()));
        }
    }

    #[test]
    fn power_zero_lines() {
        let c = ctx(BasisKind::Power, 8);
        let z = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
        assert!(d_eval(&c, 0, 3, z).unwrap().abs() < 1e-12);
        for (j, k) in [(0, 3), (1, 6), (0, 8), (2, 4)] {
            let n = (k - j - 1) as i32;
            let angles = power_zero_angles(j, k);
            for r in [0.5, 2.0, 7.0] {
                for (idx, th) in angles.iter().enumerate() {
                    let v = d_eval(&c, j, k, Complex64::from_polar(r, *th)).unwrap();
                    assert!(v.abs() <= 1e-9 * r.powi(2 * n).max(r.powi(n)), "{j},{k} r={r}");
                    let mid = th - std::f64::consts::PI / (2.0 * (n + 1) as f64);
                    let vm = d_eval(&c, j, k, Complex64::from_polar(r, mid)).unwrap();
                    assert!(vm.abs() > 1e-6 * r.powi(n), "mid {idx}");
                }
            }
        }
    }

    #[test]
    fn conjugation_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for kind in BasisKind::ALL {
            let c = ctx(kind, 7);
            for _ in 0..100 {
                let z = Complex64::new(rng.gen_range(-9.0..9.0), rng.gen_range(-9.0..9.0));
                for (j, k) in [(0, 7), (1, 5), (2, 4)] {
                    assert_eq!(d_eval(&c, j, k, z).unwrap(), d_eval(&c, j, k, z.conj()).unwrap());
                }
            }
        }
    }

    #[test]
    fn example_n2_deleted_determinants() {
        let c = ctx(BasisKind::BinomialCoefficient, 3);
        let t0 = c.syzygy_triple(0).unwrap();
        let t1 = c.syzygy_triple(1).unwrap();
        assert_eq!(det_deleted_poly(&c, 0, 2).unwrap(), -(&t0.q * &t1.r));
        assert_eq!(det_deleted_poly(&c, 0, 3).unwrap(), &t0.q * &t1.q - &t1.p * &t0.r);
        assert_eq!(det_deleted_poly(&c, 1, 3).unwrap(), -(&t0.p * &t1.q));
    }

    fn dense_minor(
        m: &[Vec<Rational>],
        skip_rows: &[usize],
        skip_col: Option<usize>,
    ) -> Rational {
        let sub: Vec<Vec<Rational>> = m
            .iter()
            .enumerate()
            .filter(|(i, _)| !skip_rows.contains(i))
            .map(|(_, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| Some(*c) != skip_col)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        det_rational(&sub)
    }

    fn exact_dual(c: &BasisContext, x: &Rational, y: &Rational) -> Vec<Vec<Rational>> {
        let gd = crate::galedual::GaleDual::build(*c).unwrap();
        gd.entries.iter().map(|row| row.iter().map(|e| e.eval(x, y)).collect()).collect()
    }

    #[test]
    fn deleted_and_minor_formulas_match_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for kind in BasisKind::ALL {
            for d in 3..=7usize {
                let c = ctx(kind, d);
                for _ in 0..3 {
                    let x = ratio(rng.gen_range(-30..30), rng.gen_range(1..5));
                    let y = ratio(rng.gen_range(1..30), rng.gen_range(1..5));
                    let m = exact_dual(&c, &x, &y);
                    let t = Tables::exact(&c, d, &x, &y).unwrap();
                    for j in 0..d {
                        for k in j + 1..=d {
                            assert_eq!(t.det_deleted(j, k), dense_minor(&m, &[j, k], None));
                        }
                    }
                    for j in 0..d {
                        for k in j + 1..d {
                            for l in k + 1..=d {
                                for cc in 0..=d - 2 {
                                    assert_eq!(
                                        t.minor(j, k, l, cc),
                                        dense_minor(&m, &[j, k, l], Some(cc)),
                                        "{kind} d={d} ({j},{k},{l}) c={cc}"
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn minor_overlap_and_zero_ranges() {
        let c = ctx(BasisKind::BinomialCoefficient, 7);
        let z = Complex64::new(-1.3, 2.1);
        let (j, k, l) = (2, 4, 6);
        for cc in 0..j {
            assert_eq!(minor_eval(&c, (j, k, l), cc, z).unwrap(), 0.0);
        }
        for cc in l - 1..=5 {
            assert_eq!(minor_eval(&c, (j, k, l), cc, z).unwrap(), 0.0);
        }
        // both cases of the formula at c = k-1
        let t = Tables::symbolic(&c, 7).unwrap();
        let cc = k - 1;
        let first = t.d(j, cc + 1).mul(&t.d(k, l));
        let second = t.d(j, k).mul(&t.d(cc + 1, l));
        assert_eq!(first, second);
    }

    #[test]
    fn extended_det_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for d in 3..=7usize {
            let c = ctx(BasisKind::BinomialCoefficient, d);
            let lam = crate::galedual::LinearConstraint::ehrhart_s0(d).unwrap().lambda;
            for _ in 0..4 {
                let x = ratio(rng.gen_range(-30..30), rng.gen_range(1..5));
                let y = ratio(rng.gen_range(1..30), rng.gen_range(1..5));
                let mut m = exact_dual(&c, &x, &y);
                let t = Tables::exact(&c, d, &x, &y).unwrap();
                let omega = t.omega(&lam);
                m.push(omega.clone());
                for j in 0..d {
                    for k in j + 1..d {
                        for l in k + 1..=d {
                            assert_eq!(t.det_extended(j, k, l, &omega), dense_minor(&m, &[j, k, l], None));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ehrhart_specialisations() {
        // det W̃_{0,k,d} closed forms for d = 6
        let d = 6usize;
        let c = ctx(BasisKind::BinomialCoefficient, d);
        let lam = crate::galedual::LinearConstraint::ehrhart_s0(d).unwrap().lambda;
        let t = Tables::symbolic(&c, d).unwrap();
        let omega = t.omega(&lam);
        let sd = if d.is_multiple_of(2) { BivarPoly::one() } else { BivarPoly::from_int(-1) };
        let r_all = (0..=d - 2).fold(BivarPoly::one(), |a, i| &a * &t.r[i]);
        let k1 = &(&(&sd * &(&t.p[0] - &t.q[0])) * &t.d(1, d))
            - &(&(&(&sd * &t.p[1]) * &t.r[0]) * &t.d(2, d));
        assert_eq!(t.det_extended(0, 1, d, &omega), &k1 - &r_all);
        for k in 2..d {
            let pp = (0..k).fold(BivarPoly::one(), |a, i| &a * &t.p[i]);
            let rr = (k - 1..=d - 2).fold(BivarPoly::one(), |a, i| &a * &t.r[i]);
            let expect = &(&(&sd * &pp) * &t.d(k, d)) - &(&t.d(0, k) * &rr);
            assert_eq!(t.det_extended(0, k, d, &omega), expect, "k={k}");
        }
    }

    #[test]
    fn chromatic_det_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for (d, chi) in [(4usize, 0usize), (5, 1), (6, 2), (6, 0)] {
            let c = ctx(BasisKind::BinomialCoefficient, d);
            let eps = ratio(1, 2);
            let ext = crate::galedual::chromatic_equation_dual(c, chi, &eps).unwrap();
            let mat = ext.matrix();
            let dim = d - chi;
            let lam = chromatic_lambda(d, &eps);
            for _ in 0..10 {
                let x = ratio(rng.gen_range(-30..30), rng.gen_range(1..5));
                let y = ratio(rng.gen_range(1..30), rng.gen_range(1..5));
                let m: Vec<Vec<Rational>> =
                    mat.iter().map(|row| row.iter().map(|e| e.eval(&x, &y)).collect()).collect();
                let t = Tables::exact(&c, dim, &x, &y).unwrap();
                for j in 0..dim {
                    for k in j + 1..dim {
                        for l in k + 1..=dim {
                            assert_eq!(t.chromatic_det(j, k, l, &lam), dense_minor(&m, &[j, k, l], None));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn chromatic_det_affine_in_eps() {
        let c = ctx(BasisKind::BinomialCoefficient, 5);
        let z = Complex64::new(-0.7, 1.4);
        let v: Vec<f64> = [ratio(1, 4), ratio(1, 2), ratio(3, 4)]
            .iter()
            .map(|e| chromatic_det(&c, 1, e, (0, 2, 3), z).unwrap().to_f64())
            .collect();
        assert!((v[0] + v[2] - 2.0 * v[1]).abs() < 1e-9 * (1.0 + v[1].abs()));
    }

    #[test]
    fn leading_terms() {
        let c = ctx(BasisKind::BinomialCoefficient, 8);
        assert_eq!(leading_asymptote(&c, 0, 8).unwrap(), -8);
        assert_eq!(leading_asymptote(&c, 3, 4).unwrap(), 1);
        assert!(leading_asymptote(&ctx(BasisKind::Power, 8), 0, 8).is_err());
        for d in 2..=8usize {
            let c = ctx(BasisKind::BinomialCoefficient, d);
            let t = Tables::symbolic(&c, d).unwrap();
            for j in 0..d {
                for k in j + 1..=d {
                    let n = (k - j - 1) as u32;
                    let rho = BivarPoly::x().pow(2) + BivarPoly::y().pow(2);
                    let expect = rho.pow(n).scale(&rat(leading_asymptote(&c, j, k).unwrap()));
                    assert_eq!(t.d(j, k).top_degree_part(), expect);
                }
            }
        }
    }

    #[test]
    fn real_axis_interlacing() {
        // D_{j,k}(x, 0) changes sign inside every shifted interval ±(a_i, a_{i+1})
        for d in 2..=10usize {
            let c = ctx(BasisKind::BinomialCoefficient, d);
            for j in 0..d {
                for k in j + 2..=d {
                    let coeffs = d_on_real_axis(&c, j, k).unwrap();
                    let shift = ((k + j) as f64 - d as f64 - 1.0) / 2.0;
                    let half = (d as f64 - 1.0 - k as f64 + j as f64) / 2.0;
                    for i in 1..k - j {
                        let (a, b) = (i as f64 + half, i as f64 + 1.0 + half);
                        for s in [1.0, -1.0] {
                            let v1 = eval_univariate(&coeffs, s * a + 1e-9 * s + shift);
                            let v2 = eval_univariate(&coeffs, s * b - 1e-9 * s + shift);
                            assert!(v1 * v2 < 0.0, "d={d} ({j},{k}) i={i} side {s}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn large_degree_does_not_overflow() {
        let c = ctx(BasisKind::BinomialCoefficient, 200);
        let v = d_eval_tracked(&c, 0, 200, 150.0, 170.0).unwrap();
        assert!(v.value.log2_abs() > 1024.0);
        assert_ne!(v.value.signum(), 0);
        assert!(!v.scale.abs_le(Scaled::from_f64(f64::MAX)));
    }
}
