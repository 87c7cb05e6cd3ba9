//! Exact bivariate polynomials in `(x, y)` with rational coefficients.
//!
//! Sparse representation: a map from `(deg_x, deg_y)` to a nonzero
//! coefficient. Equality is term-map equality, so the zero polynomial is the
//! empty map.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numeric::Dd;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(rat(c))
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, Rational::one())
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, Rational::one())
    }

    pub fn monomial(dx: u32, dy: u32, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((dx, dy), c);
        }
        BivarPoly { terms }
    }

    /// `x + c`, the basic linear factor.
    pub fn x_plus(c: Rational) -> Self {
        Self::x() + Self::constant(c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, dx: u32, dy: u32) -> Rational {
        self.terms.get(&(dx, dy)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(a, b)| a + b).max()
    }

    pub fn all_y_degrees_even(&self) -> bool {
        self.terms.keys().all(|&(_, dy)| dy % 2 == 0)
    }

    /// Homogeneous part of top total degree.
    pub fn top_degree_part(&self) -> BivarPoly {
        let Some(deg) = self.degree() else {
            return BivarPoly::zero();
        };
        let terms = self
            .terms
            .iter()
            .filter(|((a, b), _)| a + b == deg)
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        BivarPoly { terms }
    }

    fn add_term(&mut self, key: (u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> BivarPoly {
        if c.is_zero() {
            return BivarPoly::zero();
        }
        let terms = self.terms.iter().map(|(k, v)| (*k, v * c)).collect();
        BivarPoly { terms }
    }

    pub fn pow(&self, e: u32) -> BivarPoly {
        let mut acc = BivarPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `p(x + c, y)`.
    pub fn shift_x(&self, c: &Rational) -> BivarPoly {
        if c.is_zero() {
            return self.clone();
        }
        let max_dx = self.terms.keys().map(|k| k.0).max().unwrap_or(0) as usize;
        // binomial expansions of (x + c)^n for n = 0..=max_dx
        let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::one()]];
        for n in 1..=max_dx {
            let prev = &rows[n - 1];
            let mut row = vec![Rational::zero(); n + 1];
            for (i, v) in prev.iter().enumerate() {
                row[i] += v * c;
                row[i + 1] += v;
            }
            rows.push(row);
        }
        let mut out = BivarPoly::zero();
        for (&(dx, dy), v) in &self.terms {
            for (i, b) in rows[dx as usize].iter().enumerate() {
                out.add_term((i as u32, dy), v * b);
            }
        }
        out
    }

    /// Drops every term with positive `y` degree, i.e. the restriction to `y = 0`
    /// as a polynomial in `x`.
    pub fn at_y_zero(&self) -> Vec<Rational> {
        let deg = self.terms.keys().filter(|k| k.1 == 0).map(|k| k.0).max();
        let Some(deg) = deg else {
            return Vec::new();
        };
        let mut out = vec![Rational::zero(); deg as usize + 1];
        for (&(dx, dy), v) in &self.terms {
            if dy == 0 {
                out[dx as usize] = v.clone();
            }
        }
        out
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut xp: Vec<Rational> = vec![Rational::one()];
        let mut yp: Vec<Rational> = vec![Rational::one()];
        let mut acc = Rational::zero();
        for (&(dx, dy), v) in &self.terms {
            while xp.len() <= dx as usize {
                let next = xp.last().unwrap() * x;
                xp.push(next);
            }
            while yp.len() <= dy as usize {
                let next = yp.last().unwrap() * y;
                yp.push(next);
            }
            acc += v * &xp[dx as usize] * &yp[dy as usize];
        }
        acc
    }

    /// Floating-point evaluation; monomials are formed and accumulated in
    /// double-double precision.
    pub fn eval_f(&self, x: f64, y: f64) -> f64 {
        self.eval_dd(Dd::from(x), Dd::from(y)).to_f64()
    }

    pub fn eval_dd(&self, x: Dd, y: Dd) -> Dd {
        let mut xp = vec![Dd::ONE];
        let mut yp = vec![Dd::ONE];
        let mut acc = Dd::ZERO;
        for (&(dx, dy), v) in &self.terms {
            while xp.len() <= dx as usize {
                let next = *xp.last().unwrap() * x;
                xp.push(next);
            }
            while yp.len() <= dy as usize {
                let next = *yp.last().unwrap() * y;
                yp.push(next);
            }
            acc += Dd::from_rational(v) * xp[dx as usize] * yp[dy as usize];
        }
        acc
    }

    /// Sum of absolute monomial values at `(x, y)`; the scale against which
    /// the sign of `eval_f` is meaningful.
    pub fn abs_scale(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(dx, dy), v)| {
                v.abs().to_f64().unwrap_or(f64::INFINITY)
                    * x.abs().powi(dx as i32)
                    * y.abs().powi(dy as i32)
            })
            .sum()
    }
}

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(dx, dy), v) in self.terms.iter().rev() {
            let neg = v.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let a = v.abs();
            let unit = a.is_one();
            if !unit || (dx == 0 && dy == 0) {
                write!(f, "{a}")?;
            }
            for (name, e) in [("x", dx), ("y", dy)] {
                match e {
                    0 => {}
                    1 => write!(f, "{name}")?,
                    _ => write!(f, "{name}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl Add<&BivarPoly> for &BivarPoly {
    type Output = BivarPoly;
    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, v.clone());
        }
        out
    }
}

impl Add for BivarPoly {
    type Output = BivarPoly;
    fn add(mut self, rhs: BivarPoly) -> BivarPoly {
        for (k, v) in rhs.terms {
            self.add_term(k, v);
        }
        self
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        let terms = self.terms.iter().map(|(k, v)| (*k, -v)).collect();
        BivarPoly { terms }
    }
}

impl Neg for BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        -&self
    }
}

impl Sub<&BivarPoly> for &BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, -v);
        }
        out
    }
}

impl Sub for BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: BivarPoly) -> BivarPoly {
        &self - &rhs
    }
}

impl Mul<&BivarPoly> for &BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(a1, b1), v1) in &self.terms {
            for (&(a2, b2), v2) in &rhs.terms {
                out.add_term((a1 + a2, b1 + b2), v1 * v2);
            }
        }
        out
    }
}

impl Mul for BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: BivarPoly) -> BivarPoly {
        &self * &rhs
    }
}

/// Determinant of a square matrix of polynomials by cofactor expansion along
/// the first column, skipping zero entries. Meant for the small banded
/// matrices that appear in identity checks.
pub fn det_symbolic(m: &[Vec<BivarPoly>]) -> BivarPoly {
    let n = m.len();
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (0..n).collect();
    det_rec(m, &rows, &cols)
}

fn det_rec(m: &[Vec<BivarPoly>], rows: &[usize], cols: &[usize]) -> BivarPoly {
    match rows.len() {
        0 => BivarPoly::one(),
        1 => m[rows[0]][cols[0]].clone(),
        _ => {
            let c = cols[0];
            let rest_cols = &cols[1..];
            let mut acc = BivarPoly::zero();
            for (pos, &r) in rows.iter().enumerate() {
                let e = &m[r][c];
                if e.is_zero() {
                    continue;
                }
                let sub_rows: Vec<usize> = rows.iter().copied().filter(|&q| q != r).collect();
                let minor = det_rec(m, &sub_rows, rest_cols);
                if minor.is_zero() {
                    continue;
                }
                let term = e * &minor;
                acc = if pos % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x() -> BivarPoly {
        BivarPoly::x()
    }
    fn y() -> BivarPoly {
        BivarPoly::y()
    }

    #[test]
    fn additive_inverse_is_empty() {
        let p = x().pow(2);
        assert!((&p + &(-&p)).is_zero());
        assert_eq!((&p + &(-&p)).num_terms(), 0);
    }

    #[test]
    fn add_constant() {
        let p = x().pow(2) + y().pow(2);
        let q = &p + &BivarPoly::one();
        assert_eq!(q.coeff(0, 0), rat(1));
        assert_eq!(q.coeff(2, 0), rat(1));
        assert_eq!(q.coeff(0, 2), rat(1));
        assert_eq!(q.num_terms(), 3);
    }

    #[test]
    fn products() {
        assert_eq!(x() * y(), BivarPoly::monomial(1, 1, rat(1)));
        let diff = (x() + y()) * (x() - y());
        assert_eq!(diff, x().pow(2) - y().pow(2));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(x().shift_x(&rat(1)), BivarPoly::x_plus(rat(1)));
        let s = x().pow(2).shift_x(&rat(-1));
        assert_eq!(s, x().pow(2) - x().scale(&rat(2)) + BivarPoly::one());
    }

    #[test]
    fn eval_examples() {
        let p = x().pow(2) + y().pow(2);
        assert_eq!(p.eval(&rat(1), &rat(1)), rat(2));
        assert_eq!(BivarPoly::zero().eval(&ratio(3, 7), &rat(5)), rat(0));
    }

    #[test]
    fn top_degree_and_parity() {
        let p = x().pow(3) + (x() * y().pow(2)).scale(&rat(3)) + x();
        assert_eq!(p.top_degree_part(), x().pow(3) + (x() * y().pow(2)).scale(&rat(3)));
        assert!(p.all_y_degrees_even());
        assert!(!y().all_y_degrees_even());
    }

    #[test]
    fn display_is_readable() {
        let p = x().pow(2) - y().scale(&rat(2)) + BivarPoly::from_int(3);
        assert_eq!(p.to_string(), "x^2 - 2y + 3");
    }

    #[test]
    fn symbolic_det_2x2() {
        let m = vec![vec![x(), y()], vec![BivarPoly::one(), x()]];
        assert_eq!(det_symbolic(&m), x().pow(2) - y());
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-9i64..=9, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
    }

    fn small_poly() -> impl Strategy<Value = BivarPoly> {
        prop::collection::vec((0u32..4, 0u32..4, small_rat()), 0..6).prop_map(|ts| {
            ts.into_iter()
                .fold(BivarPoly::zero(), |acc, (a, b, c)| acc + BivarPoly::monomial(a, b, c))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &BivarPoly::zero(), a.clone());
            prop_assert_eq!(&a * &BivarPoly::one(), a.clone());
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in small_poly(), b in small_poly(),
                                        px in small_rat(), py in small_rat()) {
            prop_assert_eq!((&a + &b).eval(&px, &py), a.eval(&px, &py) + b.eval(&px, &py));
            prop_assert_eq!((&a * &b).eval(&px, &py), a.eval(&px, &py) * b.eval(&px, &py));
        }

        #[test]
        fn shift_is_ring_hom_and_invertible(a in small_poly(), b in small_poly(), c in small_rat(),
                                            px in small_rat(), py in small_rat()) {
            prop_assert_eq!((&a * &b).shift_x(&c), &a.shift_x(&c) * &b.shift_x(&c));
            prop_assert_eq!(a.shift_x(&c).shift_x(&-&c), a.clone());
            prop_assert_eq!(a.shift_x(&c).eval(&px, &py), a.eval(&(&px + &c), &py));
        }

        #[test]
        fn float_eval_matches_exact(a in small_poly(), px in small_rat(), py in small_rat()) {
            let exact = a.eval(&px, &py).to_f64().unwrap();
            let approx = a.eval_f(px.to_f64().unwrap(), py.to_f64().unwrap());
            let scale = a.abs_scale(px.to_f64().unwrap(), py.to_f64().unwrap());
            prop_assert!((exact - approx).abs() <= 1e-12 * scale.max(exact.abs()).max(1e-300),
                "{} vs {}", exact, approx);
        }
    }
}
