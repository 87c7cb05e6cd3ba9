//! Numerical roots of polynomials given in any of the supported bases.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::basis::BasisContext;
use crate::error::{Error, Result};
use crate::symbolic::Rational;

/// `f = sum a_i b_i` for a basis context.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialInBasis {
    pub ctx: BasisContext,
    pub coeffs: Vec<f64>,
}

impl PolynomialInBasis {
    pub fn new(ctx: BasisContext, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != ctx.d + 1 {
            return Err(Error::Precondition(format!(
                "expected {} coefficients, got {}",
                ctx.d + 1,
                coeffs.len()
            )));
        }
        Ok(PolynomialInBasis { ctx, coeffs })
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|&a| a >= 0.0) && self.coeffs.iter().any(|&a| a > 0.0)
    }

    /// `f(z)` and `f'(z)` evaluated in basis form.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut v = Complex64::zero();
        let mut dv = Complex64::zero();
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let (b, db) = self.ctx.eval_with_derivative(i, z).expect("index in range");
            v += b * a;
            dv += db * a;
        }
        (v, dv)
    }

    /// `|f(z)| / sum |a_i| |b_i(z)|`.
    pub fn relative_residual(&self, z: Complex64) -> f64 {
        let mut v = Complex64::zero();
        let mut scale = 0.0;
        for (i, &a) in self.coeffs.iter().enumerate() {
            let b = self.ctx.eval(i, z).expect("index in range");
            v += b * a;
            scale += a.abs() * b.norm();
        }
        if scale == 0.0 {
            v.norm()
        } else {
            v.norm() / scale
        }
    }
}

/// Monomial coefficients `c_0..c_d`, computed exactly and rounded last.
pub fn to_power(p: &PolynomialInBasis) -> Vec<f64> {
    let m = p.ctx.to_power_matrix();
    let a: Vec<Rational> = p
        .coeffs
        .iter()
        .map(|&v| Rational::from_float(v).expect("finite coefficient"))
        .collect();
    (0..=p.ctx.d)
        .map(|j| {
            let s: Rational = (0..=p.ctx.d)
                .filter(|&i| !a[i].is_zero() && !m[i][j].is_zero())
                .map(|i| &a[i] * &m[i][j])
                .sum();
            s.to_f64().unwrap()
        })
        .collect()
}

pub const MAX_ITERATIONS: usize = 200;

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::zero();
    let mut dv = Complex64::zero();
    for &ci in c.iter().rev() {
        dv = dv * z + v;
        v = v * z + ci;
    }
    (v, dv)
}

/// `|f(r)| / sum |c_j| |r|^j` for monomial coefficients.
pub fn power_residual(c: &[f64], r: Complex64) -> f64 {
    let (v, _) = horner(c, r);
    let m = r.norm();
    let scale = c.iter().rev().fold(0.0, |acc, ci| acc * m + ci.abs());
    if scale == 0.0 {
        0.0
    } else {
        v.norm() / scale
    }
}

/// All roots of `sum c_j z^j` by Aberth-Ehrlich iteration; zero roots are
/// reported explicitly.
pub fn find_roots(c: &[f64]) -> Result<Vec<Complex64>> {
    let hi = c.iter().rposition(|&v| v != 0.0).ok_or_else(|| {
        Error::Precondition("the zero polynomial has no isolated roots".into())
    })?;
    let lo = c.iter().position(|&v| v != 0.0).unwrap();
    let mut roots = vec![Complex64::zero(); lo];
    let core = &c[lo..=hi];
    let n = core.len() - 1;
    if n == 0 {
        return Ok(roots);
    }
    if n == 1 {
        roots.push(Complex64::new(-core[0] / core[1], 0.0));
        return Ok(roots);
    }
    let lead = core[n];
    let cauchy = 1.0 + core[..n].iter().map(|v| (v / lead).abs()).fold(0.0, f64::max);
    // a smaller starting radius converges faster; the Cauchy bound caps it
    let geo = (core[0] / lead).abs().powf(1.0 / n as f64);
    let radius = geo.min(cauchy).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();

    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (v, dv) = horner(core, z[i]);
            if v == Complex64::zero() {
                continue;
            }
            let ratio = v / dv;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                continue;
            }
            z[i] -= w;
            max_step = max_step.max(w.norm() / (1.0 + z[i].norm()));
        }
        if max_step <= 1e-14 {
            converged = true;
            break;
        }
    }
    let worst = z.iter().map(|&r| power_residual(core, r)).fold(0.0, f64::max);
    if !converged && worst > 1e-10 {
        return Err(Error::NonConvergence { iterations: MAX_ITERATIONS, residual: worst });
    }
    roots.extend(z);
    Ok(roots)
}

/// Roots of a polynomial in basis form, polished by Newton steps on the
/// basis-form evaluation (a step is kept only if it lowers the residual).
pub fn roots_in_basis(p: &PolynomialInBasis) -> Result<Vec<Complex64>> {
    let c = to_power(p);
    let mut roots = find_roots(&c)?;
    for r in roots.iter_mut() {
        polish(p, r);
    }
    Ok(roots)
}

fn polish(p: &PolynomialInBasis, r: &mut Complex64) {
    let mut res = p.relative_residual(*r);
    for _ in 0..4 {
        let (v, dv) = p.eval_with_derivative(*r);
        if dv == Complex64::zero() {
            break;
        }
        let cand = *r - v / dv;
        let cres = p.relative_residual(cand);
        if !(cres < res) {
            break;
        }
        *r = cand;
        res = cres;
    }
}

/// Real-root classification used by the validation suites.
pub fn is_real_root(z: Complex64) -> bool {
    z.im.abs() <= 1e-8 * (1.0 + z.re.abs())
}
