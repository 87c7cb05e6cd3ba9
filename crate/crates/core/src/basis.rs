//! The polynomial bases of `P_d` and everything derived from them directly:
//! complex evaluation, real/imaginary decomposition, syzygy triples, change
//! of basis to monomials and the locus of possible real roots.

use std::fmt;
use std::str::FromStr;

use num_complex::{Complex, Complex64};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{rational_sign, Dd};
use crate::symbolic::{rat, ratio, BivarPoly, Rational};

/// Exact complex point `x + iy`.
pub type ExactPoint = Complex<Rational>;

/// Points with `|y| <= NON_REAL_TOL * (1 + |x|)` count as real.
pub const NON_REAL_TOL: f64 = 1e-12;

pub fn is_non_real(z: Complex64) -> bool {
    z.im.abs() > NON_REAL_TOL * (1.0 + z.re.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    /// `b_i = z^i`
    Power,
    /// `b_i = z (z-1) ... (z-i+1)`
    FallingFactorial,
    /// `b_i = z (z+1) ... (z+i-1)`
    RisingFactorial,
    /// `b_i = C(z+d-i, d)`
    BinomialCoefficient,
    /// `b_i = (-1)^(d-i) z^i`
    AlternatingPower,
    /// `b_i = (-1)^(d-i) z (z+1) ... (z+i-1)`
    AlternatingRisingFactorial,
}

impl BasisKind {
    pub const ALL: [BasisKind; 6] = [
        BasisKind::Power,
        BasisKind::FallingFactorial,
        BasisKind::RisingFactorial,
        BasisKind::BinomialCoefficient,
        BasisKind::AlternatingPower,
        BasisKind::AlternatingRisingFactorial,
    ];

    /// The four bases with an explicit closed form for `D_{j,k}`.
    pub const CLASSICAL: [BasisKind; 4] = [
        BasisKind::Power,
        BasisKind::FallingFactorial,
        BasisKind::RisingFactorial,
        BasisKind::BinomialCoefficient,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BasisKind::Power => "power",
            BasisKind::FallingFactorial => "falling",
            BasisKind::RisingFactorial => "rising",
            BasisKind::BinomialCoefficient => "binomial",
            BasisKind::AlternatingPower => "alt-power",
            BasisKind::AlternatingRisingFactorial => "alt-rising",
        }
    }

    pub fn is_alternating(self) -> bool {
        matches!(self, BasisKind::AlternatingPower | BasisKind::AlternatingRisingFactorial)
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasisKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "power" | "pow" => BasisKind::Power,
            "falling" | "falling-factorial" => BasisKind::FallingFactorial,
            "rising" | "rising-factorial" => BasisKind::RisingFactorial,
            "binomial" | "binomial-coefficient" => BasisKind::BinomialCoefficient,
            "alt-power" | "alternating-power" => BasisKind::AlternatingPower,
            "alt-rising" | "alternating-rising" | "alternating-rising-factorial" => {
                BasisKind::AlternatingRisingFactorial
            }
            other => return Err(Error::Parse(format!("unknown basis '{other}'"))),
        })
    }
}

/// A basis together with the degree `d` of the ambient space `P_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisContext {
    pub kind: BasisKind,
    pub d: usize,
}

/// Coefficients of a syzygy `p b_k - q b_{k+1} + r b_{k+2} = 0`; the Gale
/// dual column `k` is `(p, -q, r)` placed in rows `k..=k+2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SyzygyTriple {
    pub p: BivarPoly,
    pub q: BivarPoly,
    pub r: BivarPoly,
}

/// Numeric values of a syzygy triple at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleValues {
    pub p: Dd,
    pub q: Dd,
    pub r: Dd,
}

/// A closed real interval; `None` endpoints are infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct RealInterval {
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
}

impl RealInterval {
    pub fn contains(&self, x: &Rational) -> bool {
        self.lo.as_ref().is_none_or(|lo| lo <= x) && self.hi.as_ref().is_none_or(|hi| x <= hi)
    }

    pub fn contains_f64(&self, x: f64, tol: f64) -> bool {
        let lo = self.lo_f64();
        let hi = self.hi_f64();
        x >= lo - tol && x <= hi + tol
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.as_ref().map_or(f64::NEG_INFINITY, |v| v.to_f64().unwrap())
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.as_ref().map_or(f64::INFINITY, |v| v.to_f64().unwrap())
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lo {
            Some(v) => write!(f, "[{v}, ")?,
            None => write!(f, "(-inf, ")?,
        }
        match &self.hi {
            Some(v) => write!(f, "{v}]"),
            None => write!(f, "+inf)"),
        }
    }
}

pub fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * rat(k))
}

impl BasisContext {
    pub fn new(kind: BasisKind, d: usize) -> Self {
        BasisContext { kind, d }
    }

    /// Errors unless `d >= 2`.
    pub fn require_complex(&self) -> Result<()> {
        if self.d < 2 {
            Err(Error::DegenerateDegree(self.d))
        } else {
            Ok(())
        }
    }

    pub fn require_binomial(&self) -> Result<()> {
        if self.kind == BasisKind::BinomialCoefficient {
            Ok(())
        } else {
            Err(Error::BasisMismatch { expected: "binomial", got: self.kind.name() })
        }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i > self.d {
            Err(Error::IndexOutOfRange { index: i, max: self.d })
        } else {
            Ok(())
        }
    }

    /// `b_i = sign * scale * prod (z + c)` over the returned shifts `c`.
    fn linear_factors(&self, i: usize) -> (i64, Vec<i64>, Rational) {
        let d = self.d as i64;
        let i64i = i as i64;
        let alt_sign = if (self.d - i).is_multiple_of(2) { 1 } else { -1 };
        match self.kind {
            BasisKind::Power => (1, vec![0; i], Rational::one()),
            BasisKind::FallingFactorial => (1, (0..i64i).map(|m| -m).collect(), Rational::one()),
            BasisKind::RisingFactorial => (1, (0..i64i).collect(), Rational::one()),
            BasisKind::BinomialCoefficient => {
                // C(z+d-i, d) = (z+d-i)(z+d-i-1)...(z-i+1) / d!
                let shifts = (1..=d).map(|t| t - i64i).collect();
                (1, shifts, Rational::one() / factorial(self.d))
            }
            BasisKind::AlternatingPower => (alt_sign, vec![0; i], Rational::one()),
            BasisKind::AlternatingRisingFactorial => {
                (alt_sign, (0..i64i).collect(), Rational::one())
            }
        }
    }

    /// `b_i(z)` in floating point.
    pub fn eval(&self, i: usize, z: Complex64) -> Result<Complex64> {
        self.check_index(i)?;
        let (sign, shifts, scale) = self.linear_factors(i);
        let prod = shifts
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, &c| acc * (z + c as f64));
        Ok(prod * (sign as f64 * scale.to_f64().unwrap()))
    }

    /// `b_i(z)` together with its derivative.
    pub fn eval_with_derivative(&self, i: usize, z: Complex64) -> Result<(Complex64, Complex64)> {
        self.check_index(i)?;
        let (sign, shifts, scale) = self.linear_factors(i);
        let mut v = Complex64::new(1.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for &c in &shifts {
            let f = z + c as f64;
            dv = dv * f + v;
            v *= f;
        }
        let s = sign as f64 * scale.to_f64().unwrap();
        Ok((v * s, dv * s))
    }

    /// All basis values at `z`.
    pub fn eval_all(&self, z: Complex64) -> Vec<Complex64> {
        (0..=self.d).map(|i| self.eval(i, z).expect("index in range")).collect()
    }

    /// `b_i(z)` exactly.
    pub fn eval_exact(&self, i: usize, z: &ExactPoint) -> Result<ExactPoint> {
        self.check_index(i)?;
        let (sign, shifts, scale) = self.linear_factors(i);
        let mut acc = Complex::new(Rational::one(), Rational::zero());
        for &c in &shifts {
            acc *= Complex::new(&z.re + rat(c), z.im.clone());
        }
        let s = scale * rat(sign);
        Ok(Complex::new(acc.re * &s, acc.im * &s))
    }

    /// `b_i(x)` at a real rational point.
    pub fn eval_real_exact(&self, i: usize, x: &Rational) -> Result<Rational> {
        self.check_index(i)?;
        let (sign, shifts, scale) = self.linear_factors(i);
        let prod = shifts.iter().fold(Rational::one(), |acc, &c| acc * (x + rat(c)));
        Ok(prod * scale * rat(sign))
    }

    /// `(R_i, I_i)` with `R_i + i I_i = b_i(x + iy)`.
    pub fn real_imag(&self, i: usize) -> Result<(BivarPoly, BivarPoly)> {
        self.check_index(i)?;
        let (sign, shifts, scale) = self.linear_factors(i);
        let mut re = BivarPoly::one();
        let mut im = BivarPoly::zero();
        let y = BivarPoly::y();
        for &c in &shifts {
            let fr = BivarPoly::x_plus(rat(c));
            // (re + i im)(fr + i y)
            let new_re = &(&re * &fr) - &(&im * &y);
            let new_im = &(&re * &y) + &(&im * &fr);
            re = new_re;
            im = new_im;
        }
        let s = scale * rat(sign);
        Ok((re.scale(&s), im.scale(&s)))
    }

    /// The syzygy coefficients of Gale dual column `k`, `0 <= k <= d-2`.
    pub fn syzygy_triple(&self, k: usize) -> Result<SyzygyTriple> {
        self.require_complex()?;
        if k + 2 > self.d {
            return Err(Error::IndexOutOfRange { index: k, max: self.d - 2 });
        }
        let x = BivarPoly::x();
        let y2 = BivarPoly::y().pow(2);
        let sq = |c: i64| BivarPoly::x_plus(rat(c)).pow(2) + y2.clone();
        let two = rat(2);
        let kk = k as i64;
        let one = BivarPoly::one();
        Ok(match self.kind {
            BasisKind::Power => SyzygyTriple { p: sq(0), q: x.scale(&two), r: one },
            BasisKind::AlternatingPower => {
                SyzygyTriple { p: sq(0), q: x.scale(&rat(-2)), r: one }
            }
            BasisKind::FallingFactorial => SyzygyTriple {
                p: sq(-kk),
                q: BivarPoly::x_plus(rat(-kk)).scale(&two) - one.clone(),
                r: one,
            },
            BasisKind::RisingFactorial => SyzygyTriple {
                p: sq(kk),
                q: BivarPoly::x_plus(rat(kk)).scale(&two) + one.clone(),
                r: one,
            },
            BasisKind::AlternatingRisingFactorial => SyzygyTriple {
                p: sq(kk),
                q: -(BivarPoly::x_plus(rat(kk)).scale(&two) + one.clone()),
                r: one,
            },
            BasisKind::BinomialCoefficient => {
                let d = self.d as i64;
                let p = sq(-kk);
                // r_k = p_{k+1-d} = (x - (k+1-d))^2 + y^2
                let r = sq(d - 1 - kk);
                let q = &(&p + &r) - &BivarPoly::from_int(d * (d - 1));
                SyzygyTriple { p, q, r }
            }
        })
    }

    /// Numeric syzygy values at `(x, y)` in double-double precision.
    ///
    /// Index `k` is not range-checked against `d`: translated (chromatic)
    /// duals reuse the formulas on a truncated index range.
    pub fn triple_values(&self, k: usize, x: Dd, y: Dd) -> TripleValues {
        let y2 = y.sqr();
        let kk = k as f64;
        let sq = |c: f64| (x + c).sqr() + y2;
        match self.kind {
            BasisKind::Power => TripleValues { p: sq(0.0), q: x * 2.0, r: Dd::ONE },
            BasisKind::AlternatingPower => TripleValues { p: sq(0.0), q: x * -2.0, r: Dd::ONE },
            BasisKind::FallingFactorial => {
                TripleValues { p: sq(-kk), q: (x - kk) * 2.0 - 1.0, r: Dd::ONE }
            }
            BasisKind::RisingFactorial => {
                TripleValues { p: sq(kk), q: (x + kk) * 2.0 + 1.0, r: Dd::ONE }
            }
            BasisKind::AlternatingRisingFactorial => {
                TripleValues { p: sq(kk), q: -((x + kk) * 2.0 + 1.0), r: Dd::ONE }
            }
            BasisKind::BinomialCoefficient => {
                let d = self.d as f64;
                let p = sq(-kk);
                let r = sq(d - 1.0 - kk);
                TripleValues { p, q: p + r - d * (d - 1.0), r }
            }
        }
    }

    /// Monomial coefficients `c_0..c_i` of `b_i`.
    pub fn power_coeffs(&self, i: usize) -> Result<Vec<Rational>> {
        self.check_index(i)?;
        let (sign, shifts, scale) = self.linear_factors(i);
        let mut coeffs = vec![Rational::one()];
        for &c in &shifts {
            // multiply by (z + c)
            let mut next = vec![Rational::zero(); coeffs.len() + 1];
            for (k, v) in coeffs.iter().enumerate() {
                next[k] += v * rat(c);
                next[k + 1] += v;
            }
            coeffs = next;
        }
        let s = scale * rat(sign);
        Ok(coeffs.into_iter().map(|v| v * &s).collect())
    }

    /// Row `i` holds the monomial coefficients of `b_i`, padded to length `d+1`.
    pub fn to_power_matrix(&self) -> Vec<Vec<Rational>> {
        (0..=self.d)
            .map(|i| {
                let mut row = self.power_coeffs(i).expect("index in range");
                row.resize(self.d + 1, Rational::zero());
                row
            })
            .collect()
    }

    /// Rational roots of `b_i` (every basis here factors over the integers).
    fn basis_roots(&self, i: usize) -> Vec<Rational> {
        let (_, shifts, _) = self.linear_factors(i);
        shifts.into_iter().map(|c| rat(-c)).collect()
    }

    /// Possible real roots of polynomials with nonnegative coefficients: the
    /// points where two basis polynomials have a non-positive product.
    pub fn real_root_locus(&self) -> Vec<RealInterval> {
        if self.d == 0 {
            return Vec::new();
        }
        let mut roots: Vec<Rational> = (0..=self.d).flat_map(|i| self.basis_roots(i)).collect();
        roots.sort();
        roots.dedup();

        let mixed_signs = |x: &Rational| -> bool {
            let signs: Vec<i8> = (0..=self.d)
                .map(|i| rational_sign(&self.eval_real_exact(i, x).unwrap()))
                .collect();
            signs.contains(&0) || (signs.contains(&1) && signs.contains(&-1))
        };

        // Each region is either a root (always included) or an open gap between
        // consecutive roots / an unbounded tail, sampled at one interior point.
        // Collect included pieces as (lo, hi) with None for infinity.
        let mut pieces: Vec<(Option<Rational>, Option<Rational>)> = Vec::new();
        let one = Rational::one();
        if roots.is_empty() {
            if mixed_signs(&Rational::zero()) {
                pieces.push((None, None));
            }
        } else {
            let first = roots[0].clone();
            if mixed_signs(&(&first - &one)) {
                pieces.push((None, Some(first.clone())));
            }
            for (n, r) in roots.iter().enumerate() {
                pieces.push((Some(r.clone()), Some(r.clone())));
                let next = roots.get(n + 1);
                let probe = match next {
                    Some(nx) => (r + nx) * ratio(1, 2),
                    None => r + &one,
                };
                if mixed_signs(&probe) {
                    pieces.push((Some(r.clone()), next.cloned()));
                }
            }
        }

        let mut out: Vec<RealInterval> = Vec::new();
        for (lo, hi) in pieces {
            if let Some(last) = out.last_mut() {
                let touches = match (&last.hi, &lo) {
                    (None, _) => true,
                    (Some(h), Some(l)) => l <= h,
                    (Some(_), None) => true,
                };
                if touches {
                    let extend = match (&last.hi, &hi) {
                        (None, _) | (_, None) => None,
                        (Some(a), Some(b)) => Some(if b > a { b.clone() } else { a.clone() }),
                    };
                    last.hi = extend;
                    continue;
                }
            }
            out.push(RealInterval { lo, hi });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(kind: BasisKind, d: usize) -> BasisContext {
        BasisContext::new(kind, d)
    }

    #[test]
    fn eval_examples() {
        let z = Complex64::new(2.0, 0.0);
        assert_eq!(ctx(BasisKind::Power, 6).eval(3, z).unwrap(), Complex64::new(8.0, 0.0));
        let b = ctx(BasisKind::BinomialCoefficient, 3).eval(0, Complex64::new(0.0, 0.0)).unwrap();
        assert!((b - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let f = ctx(BasisKind::FallingFactorial, 4).eval(2, Complex64::new(3.0, 0.0)).unwrap();
        assert_eq!(f, Complex64::new(6.0, 0.0));
        assert!(matches!(
            ctx(BasisKind::Power, 3).eval(4, z),
            Err(Error::IndexOutOfRange { index: 4, max: 3 })
        ));
    }

    #[test]
    fn alternating_signs() {
        let c = ctx(BasisKind::AlternatingPower, 5);
        let z = Complex64::new(1.5, 0.0);
        assert!((c.eval(4, z).unwrap() + Complex64::new(1.5f64.powi(4), 0.0)).norm() < 1e-12);
        assert!((c.eval(5, z).unwrap() - Complex64::new(1.5f64.powi(5), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn real_imag_examples() {
        let (re, im) = ctx(BasisKind::Power, 4).real_imag(2).unwrap();
        let x = BivarPoly::x();
        let y = BivarPoly::y();
        assert_eq!(re, x.pow(2) - y.pow(2));
        assert_eq!(im, (&x * &y).scale(&rat(2)));
        let (re0, im0) = ctx(BasisKind::Power, 4).real_imag(0).unwrap();
        assert_eq!(re0, BivarPoly::one());
        assert!(im0.is_zero());

        // C(z, 2) = z(z-1)/2
        let (re, im) = ctx(BasisKind::BinomialCoefficient, 2).real_imag(2).unwrap();
        let half = ratio(1, 2);
        assert_eq!(re, (x.pow(2) - y.pow(2) - x.clone()).scale(&half));
        assert_eq!(im, ((&x * &y).scale(&rat(2)) - y.clone()).scale(&half));
    }

    #[test]
    fn triple_table_values() {
        let x = BivarPoly::x();
        let y2 = BivarPoly::y().pow(2);
        let t = ctx(BasisKind::Power, 5).syzygy_triple(2).unwrap();
        assert_eq!(t.p, x.pow(2) + y2.clone());
        assert_eq!(t.q, x.scale(&rat(2)));
        assert_eq!(t.r, BivarPoly::one());

        // binomial d = 3, k = 0
        let t = ctx(BasisKind::BinomialCoefficient, 3).syzygy_triple(0).unwrap();
        assert_eq!(t.p, x.pow(2) + y2.clone());
        let q0 = (BivarPoly::x_plus(rat(1)).pow(2) + y2.clone()).scale(&rat(2))
            - BivarPoly::from_int(4);
        assert_eq!(t.q, q0);
        assert_eq!(t.r, BivarPoly::x_plus(rat(2)).pow(2) + y2.clone());

        let t = ctx(BasisKind::FallingFactorial, 5).syzygy_triple(2).unwrap();
        assert_eq!(t.p, BivarPoly::x_plus(rat(-2)).pow(2) + y2.clone());
        assert_eq!(t.q, BivarPoly::x_plus(rat(-2)).scale(&rat(2)) - BivarPoly::one());

        assert!(ctx(BasisKind::Power, 4).syzygy_triple(3).is_err());
        assert_eq!(
            ctx(BasisKind::Power, 1).syzygy_triple(0),
            Err(Error::DegenerateDegree(1))
        );
    }

    #[test]
    fn binomial_q_matches_symmetric_form() {
        // q_k = 2(x - (k - (d-1)/2))^2 + 2y^2 - (d^2-1)/2
        for d in 2..=8usize {
            let c = ctx(BasisKind::BinomialCoefficient, d);
            for k in 0..=d - 2 {
                let center = rat(k as i64) - ratio(d as i64 - 1, 2);
                let alt = (BivarPoly::x_plus(-center).pow(2) + BivarPoly::y().pow(2))
                    .scale(&rat(2))
                    - BivarPoly::constant(ratio((d * d) as i64 - 1, 2));
                assert_eq!(c.syzygy_triple(k).unwrap().q, alt);
            }
        }
    }

    #[test]
    fn numeric_triples_match_symbolic() {
        for kind in BasisKind::ALL {
            let c = ctx(kind, 7);
            for k in 0..=5 {
                let t = c.syzygy_triple(k).unwrap();
                let v = c.triple_values(k, Dd::from(0.37), Dd::from(-1.25));
                assert!((t.p.eval_f(0.37, -1.25) - v.p.to_f64()).abs() < 1e-12);
                assert!((t.q.eval_f(0.37, -1.25) - v.q.to_f64()).abs() < 1e-12);
                assert!((t.r.eval_f(0.37, -1.25) - v.r.to_f64()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn syzygy_identity_holds_with_dual_signs() {
        // p R_k - q R_{k+1} + r R_{k+2} = 0, and likewise for I
        for kind in BasisKind::ALL {
            for d in 2..=7 {
                let c = ctx(kind, d);
                let parts: Vec<_> = (0..=d).map(|i| c.real_imag(i).unwrap()).collect();
                for k in 0..=d - 2 {
                    let t = c.syzygy_triple(k).unwrap();
                    let re = &(&(&t.p * &parts[k].0) - &(&t.q * &parts[k + 1].0))
                        + &(&t.r * &parts[k + 2].0);
                    let im = &(&(&t.p * &parts[k].1) - &(&t.q * &parts[k + 1].1))
                        + &(&t.r * &parts[k + 2].1);
                    assert!(re.is_zero() && im.is_zero(), "{kind} d={d} k={k}");
                }
            }
        }
    }

    #[test]
    fn real_imag_agrees_with_exact_eval() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for kind in BasisKind::ALL {
            let c = ctx(kind, 6);
            let parts: Vec<_> = (0..=6).map(|i| c.real_imag(i).unwrap()).collect();
            for _ in 0..100 {
                let x = ratio(rng.gen_range(-40..40), rng.gen_range(1..7));
                let y = ratio(rng.gen_range(-40..40), rng.gen_range(1..7));
                let z = Complex::new(x.clone(), y.clone());
                for (i, (re, im)) in parts.iter().enumerate() {
                    let v = c.eval_exact(i, &z).unwrap();
                    assert_eq!(re.eval(&x, &y), v.re);
                    assert_eq!(im.eval(&x, &y), v.im);
                }
            }
        }
    }

    #[test]
    fn power_matrix_examples() {
        let m = ctx(BasisKind::Power, 4).to_power_matrix();
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, if i == j { rat(1) } else { rat(0) });
            }
        }
        let m = ctx(BasisKind::FallingFactorial, 2).to_power_matrix();
        assert_eq!(m[2], vec![rat(0), rat(-1), rat(1)]);
        let m = ctx(BasisKind::BinomialCoefficient, 2).to_power_matrix();
        assert_eq!(m[2], vec![rat(0), ratio(-1, 2), ratio(1, 2)]);
    }

    #[test]
    fn power_matrix_is_invertible_basis_change() {
        use crate::numeric::det_rational;
        for kind in BasisKind::ALL {
            for d in 0..=8 {
                let m = ctx(kind, d).to_power_matrix();
                assert!(!det_rational(&m).is_zero(), "{kind} d={d}");
            }
        }
    }

    fn brute_force_locus(c: &BasisContext, x: &Rational) -> bool {
        let vals: Vec<Rational> = (0..=c.d).map(|i| c.eval_real_exact(i, x).unwrap()).collect();
        (0..vals.len()).any(|i| {
            (0..vals.len()).any(|j| i != j && !(&vals[i] * &vals[j]).is_positive())
        })
    }

    #[test]
    fn real_locus_examples() {
        for d in 1..=9usize {
            let b = ctx(BasisKind::BinomialCoefficient, d).real_root_locus();
            assert_eq!(b, vec![RealInterval { lo: Some(rat(-(d as i64))), hi: Some(rat(d as i64 - 1)) }]);

            let p = ctx(BasisKind::Power, d).real_root_locus();
            assert_eq!(p, vec![RealInterval { lo: None, hi: Some(rat(0)) }]);

            // every x < 0 has b_0 b_1 = x < 0, so the locus is unbounded below
            let r = ctx(BasisKind::RisingFactorial, d).real_root_locus();
            assert_eq!(r, vec![RealInterval { lo: None, hi: Some(rat(0)) }]);
        }
        assert!(ctx(BasisKind::Power, 0).real_root_locus().is_empty());
    }

    #[test]
    fn real_locus_matches_brute_force_sign_table() {
        for kind in BasisKind::ALL {
            for d in 1..=7usize {
                let c = ctx(kind, d);
                let locus = c.real_root_locus();
                for n in -120..=120 {
                    let x = ratio(n, 8);
                    let inside = locus.iter().any(|iv| iv.contains(&x));
                    assert_eq!(inside, brute_force_locus(&c, &x), "{kind} d={d} x={x}");
                }
            }
        }
    }
}
