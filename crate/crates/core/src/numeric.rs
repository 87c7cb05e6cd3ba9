//! Double-double arithmetic and small dense linear algebra helpers.
//!
//! `Dd` carries an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`, giving
//! roughly 106 bits of significand. It is used wherever a sign decision
//! downstream depends on a quantity that suffers heavy cancellation in plain
//! `f64` (tridiagonal recursions, imaginary parts of long products).

use std::cmp::Ordering;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub const fn from_f64(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    /// -1, 0 or +1.
    #[inline]
    pub fn signum(self) -> i8 {
        match self.hi.partial_cmp(&0.0) {
            Some(Ordering::Greater) => 1,
            Some(Ordering::Less) => -1,
            _ => match self.lo.partial_cmp(&0.0) {
                Some(Ordering::Greater) => 1,
                Some(Ordering::Less) => -1,
                _ => 0,
            },
        }
    }

    /// Multiplies by `2^k` exactly (barring over/underflow).
    #[inline]
    pub fn ldexp(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        Dd { hi: self.hi * f, lo: self.lo * f }
    }

    #[inline]
    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    /// Nearest double-double to an exact rational.
    pub fn from_rational(r: &BigRational) -> Self {
        let hi = r.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() || hi == 0.0 {
            return Dd::from_f64(hi);
        }
        let rest = r - BigRational::from_float(hi).unwrap_or_else(BigRational::zero);
        Dd::from(hi) + Dd::from_f64(rest.to_f64().unwrap_or(0.0))
    }
}

impl From<f64> for Dd {
    fn from(v: f64) -> Self {
        Dd::from_f64(v)
    }
}

impl From<i64> for Dd {
    fn from(v: i64) -> Self {
        let hi = v as f64;
        let lo = (v - hi as i64) as f64;
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Add<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: f64) -> Dd {
        let (s, e) = two_sum(self.hi, b);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Sub<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: f64) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * q1;
        let q2 = r.hi / b.hi;
        let r = r - b * q2;
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + q3
    }
}

impl AddAssign for Dd {
    fn add_assign(&mut self, b: Dd) {
        *self = *self + b;
    }
}

impl SubAssign for Dd {
    fn sub_assign(&mut self, b: Dd) {
        *self = *self - b;
    }
}

impl MulAssign for Dd {
    fn mul_assign(&mut self, b: Dd) {
        *self = *self * b;
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

/// Complex number over `Dd`, only what the closed-form evaluators need.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub fn new(re: Dd, im: Dd) -> Self {
        CDd { re, im }
    }

    pub fn one() -> Self {
        CDd { re: Dd::ONE, im: Dd::ZERO }
    }

    pub fn conj(self) -> Self {
        CDd { re: self.re, im: -self.im }
    }

    pub fn add_real(self, c: f64) -> Self {
        CDd { re: self.re + c, im: self.im }
    }
}

impl Mul for CDd {
    type Output = CDd;
    fn mul(self, b: CDd) -> CDd {
        CDd {
            re: self.re * b.re - self.im * b.im,
            im: self.re * b.im + self.im * b.re,
        }
    }
}

/// Kahan-Babuska (Neumaier) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Determinant of a dense square matrix by LU with partial pivoting.
///
/// Also returns the Hadamard bound (product of row norms), which is the
/// natural scale against which the determinant's sign is judged.
pub fn det_f64(rows: &[Vec<f64>]) -> (f64, f64) {
    let n = rows.len();
    if n == 0 {
        return (1.0, 1.0);
    }
    let hadamard: f64 = rows
        .iter()
        .map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt())
        .product();
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col] == 0.0 {
            return (0.0, hadamard);
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let piv = a[col][col];
        det *= piv;
        for r in col + 1..n {
            let f = a[r][col] / piv;
            if f != 0.0 {
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    (det, hadamard)
}

/// Exact determinant over the rationals (fraction-free Bareiss on the
/// integer-scaled matrix).
pub fn det_rational(rows: &[Vec<BigRational>]) -> BigRational {
    let n = rows.len();
    if n == 0 {
        return BigRational::one();
    }
    // clear denominators row by row
    let mut scale = BigRational::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in rows {
        let lcm = row
            .iter()
            .fold(BigInt::one(), |acc, v| num_integer::Integer::lcm(&acc, v.denom()));
        scale *= BigRational::from_integer(lcm.clone());
        a.push(
            row.iter()
                .map(|v| (v * BigRational::from_integer(lcm.clone())).to_integer())
                .collect(),
        );
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigRational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = BigRational::from_integer(sign * &a[n - 1][n - 1]);
    det / scale
}

/// Sign of an exact rational as -1, 0, +1.
pub fn rational_sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// A double-double mantissa with a separate binary exponent, so long products
/// of large factors neither overflow nor lose their sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    m: Dd,
    e: i64,
}

fn exponent_of(v: f64) -> i64 {
    let bits = v.to_bits();
    let raw = ((bits >> 52) & 0x7ff) as i64;
    if raw == 0 {
        // subnormal: renormalise through a multiplication
        exponent_of(v * 2f64.powi(64)) - 64
    } else {
        raw - 1022
    }
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { m: Dd::ZERO, e: 0 };
    pub const ONE: Scaled = Scaled { m: Dd::ONE, e: 0 };

    fn normalized(m: Dd, e: i64) -> Self {
        let hi = m.hi();
        if hi == 0.0 || !hi.is_finite() {
            return Scaled { m, e: if hi == 0.0 { 0 } else { e } };
        }
        let k = exponent_of(hi);
        Scaled { m: m.ldexp(-k as i32), e: e + k }
    }

    pub fn from_dd(v: Dd) -> Self {
        Self::normalized(v, 0)
    }

    pub fn from_f64(v: f64) -> Self {
        Self::normalized(Dd::from(v), 0)
    }

    /// Saturates to `±inf` / `0` outside the `f64` range.
    pub fn to_f64(self) -> f64 {
        let v = self.m.to_f64();
        if v == 0.0 {
            return 0.0;
        }
        if self.e > 1100 {
            return v.signum() * f64::INFINITY;
        }
        if self.e < -1100 {
            return 0.0;
        }
        // split to avoid intermediate overflow of 2^e
        let half = (self.e / 2) as i32;
        v * 2f64.powi(half) * 2f64.powi(self.e as i32 - half)
    }

    pub fn signum(self) -> i8 {
        self.m.signum()
    }

    pub fn is_zero(self) -> bool {
        self.m.signum() == 0
    }

    pub fn abs(self) -> Self {
        Scaled { m: self.m.abs(), e: self.e }
    }

    /// `log2 |self|`, `-inf` for zero.
    pub fn log2_abs(self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.m.to_f64().abs().log2() + self.e as f64
        }
    }

    /// Compares absolute values.
    pub fn abs_le(self, other: Scaled) -> bool {
        if self.is_zero() {
            return true;
        }
        if other.is_zero() {
            return false;
        }
        match self.e.cmp(&other.e) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => self.m.abs() <= other.m.abs(),
        }
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, b: Scaled) -> Scaled {
        Scaled::normalized(self.m * b.m, self.e + b.e)
    }
}

impl Mul<f64> for Scaled {
    type Output = Scaled;
    fn mul(self, b: f64) -> Scaled {
        Scaled::normalized(self.m * b, self.e)
    }
}

impl Add for Scaled {
    type Output = Scaled;
    fn add(self, b: Scaled) -> Scaled {
        if self.is_zero() {
            return b;
        }
        if b.is_zero() {
            return self;
        }
        let (big, small) = if self.e >= b.e { (self, b) } else { (b, self) };
        let gap = big.e - small.e;
        if gap > 220 {
            return big;
        }
        Scaled::normalized(big.m + small.m.ldexp(-gap as i32), big.e)
    }
}

impl Neg for Scaled {
    type Output = Scaled;
    fn neg(self) -> Scaled {
        Scaled { m: -self.m, e: self.e }
    }
}

impl Sub for Scaled {
    type Output = Scaled;
    fn sub(self, b: Scaled) -> Scaled {
        self + (-b)
    }
}

/// A value together with a bound on the magnitudes that went into it.
///
/// Sums add the bounds of their terms and products multiply them, so `scale`
/// is the value of the same expression with every input replaced by its
/// absolute value; the ratio `|value| / scale` measures cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tracked {
    pub value: Scaled,
    pub scale: Scaled,
}

impl Tracked {
    pub const ZERO: Tracked = Tracked { value: Scaled::ZERO, scale: Scaled::ZERO };
    pub const ONE: Tracked = Tracked { value: Scaled::ONE, scale: Scaled::ONE };

    pub fn exact(v: Dd) -> Self {
        let s = Scaled::from_dd(v);
        Tracked { value: s, scale: s.abs() }
    }

    pub fn to_f64(self) -> f64 {
        self.value.to_f64()
    }

    /// Sign with the tolerance policy: zero when
    /// `|value| <= tol_abs + tol_rel * scale`.
    pub fn sign(self, tol: SignTolerance) -> i8 {
        let thresh = Scaled::from_f64(tol.abs) + self.scale * tol.rel;
        if self.value.abs_le(thresh) {
            0
        } else {
            self.value.signum()
        }
    }
}

impl Mul for Tracked {
    type Output = Tracked;
    fn mul(self, b: Tracked) -> Tracked {
        Tracked { value: self.value * b.value, scale: self.scale * b.scale }
    }
}

impl Mul<f64> for Tracked {
    type Output = Tracked;
    fn mul(self, b: f64) -> Tracked {
        Tracked { value: self.value * b, scale: self.scale * b.abs() }
    }
}

impl Add for Tracked {
    type Output = Tracked;
    fn add(self, b: Tracked) -> Tracked {
        Tracked { value: self.value + b.value, scale: self.scale + b.scale }
    }
}

impl Sub for Tracked {
    type Output = Tracked;
    fn sub(self, b: Tracked) -> Tracked {
        Tracked { value: self.value - b.value, scale: self.scale + b.scale }
    }
}

impl Neg for Tracked {
    type Output = Tracked;
    fn neg(self) -> Tracked {
        Tracked { value: -self.value, scale: self.scale }
    }
}

/// Thresholds for turning a computed value into a sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignTolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for SignTolerance {
    fn default() -> Self {
        SignTolerance { abs: 1e-12, rel: 1e-9 }
    }
}

impl SignTolerance {
    /// Sign of a plain float judged against an explicit scale.
    pub fn sign_of(self, v: f64, scale: f64) -> i8 {
        if v.abs() <= self.abs + self.rel * scale {
            0
        } else if v > 0.0 {
            1
        } else {
            -1
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_recovers_cancelled_digits() {
        let a = Dd::from(1.0) + Dd::from(1e-20);
        let b = a - Dd::from(1.0);
        assert!((b.to_f64() - 1e-20).abs() < 1e-35);
    }

    #[test]
    fn dd_product_is_exact_for_doubles() {
        let x = 1.0 + f64::EPSILON;
        let p = Dd::from(x) * Dd::from(x);
        // (1+e)^2 = 1 + 2e + e^2 exactly
        let rest = p - Dd::from(1.0 + 2.0 * f64::EPSILON);
        assert_eq!(rest.to_f64(), f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn dd_division_round_trip() {
        let a = Dd::from(355.0);
        let b = Dd::from(113.0);
        let q = a / b;
        let back = q * b - a;
        assert!(back.to_f64().abs() < 1e-28);
    }

    #[test]
    fn dd_signum_uses_low_word() {
        let d = Dd { hi: 0.0, lo: -1e-300 };
        assert_eq!(d.signum(), -1);
        assert_eq!(Dd::ZERO.signum(), 0);
    }

    #[test]
    fn from_rational_is_closer_than_f64() {
        let third = BigRational::new(1.into(), 3.into());
        let dd = Dd::from_rational(&third);
        let err = (dd * 3.0 - Dd::ONE).to_f64().abs();
        assert!(err < 1e-30, "{err}");
    }

    #[test]
    fn lu_and_bareiss_agree() {
        let m = vec![vec![2.0, -1.0, 0.5], vec![4.0, 3.0, -2.0], vec![-1.0, 0.25, 6.0]];
        let (d, _) = det_f64(&m);
        let q: Vec<Vec<BigRational>> = m
            .iter()
            .map(|r| r.iter().map(|&v| BigRational::from_float(v).unwrap()).collect())
            .collect();
        let exact = det_rational(&q).to_f64().unwrap();
        assert!((d - exact).abs() < 1e-12 * exact.abs());
    }

    #[test]
    fn bareiss_singular_and_pivoting() {
        let r = |v: i64| BigRational::from_integer(v.into());
        let sing = vec![vec![r(1), r(2)], vec![r(2), r(4)]];
        assert!(det_rational(&sing).is_zero());
        let piv = vec![vec![r(0), r(1)], vec![r(1), r(0)]];
        assert_eq!(det_rational(&piv), r(-1));
    }

    #[test]
    fn neumaier_beats_naive() {
        let mut s = NeumaierSum::default();
        for v in [1.0, 1e100, 1.0, -1e100] {
            s.add(v);
        }
        assert_eq!(s.value(), 2.0);
    }
    #[test]
    fn scaled_survives_huge_products() {
        let mut p = Scaled::ONE;
        for _ in 0..400 {
            p = p * Scaled::from_f64(1e10);
        }
        assert!((p.log2_abs() - 4000.0 * 10f64.log2()).abs() < 1e-6);
        let q = p * Scaled::from_f64(-1.0) + p;
        assert!(q.is_zero());
        assert_eq!(Scaled::from_f64(-3.5).to_f64(), -3.5);
        assert_eq!((Scaled::from_f64(2.0) + Scaled::from_f64(0.25)).to_f64(), 2.25);
        assert_eq!(p.to_f64(), f64::INFINITY);
    }

    #[test]
    fn tracked_sign_tolerance() {
        let tol = SignTolerance::default();
        let a = Tracked::exact(Dd::from(1e6));
        let b = Tracked::exact(Dd::from(1e6 + 1e-2));
        assert_eq!((b - a).sign(tol), 1);
        assert_eq!((a - a).sign(tol), 0);
        let tiny = Tracked::exact(Dd::from(1e6 + 1e-4));
        // 1e-4 against a scale of 2e6 is below the relative threshold
        assert_eq!((tiny - a).sign(tol), 0);
    }
}
