//! Gale dual matrices: the banded `W̄`, its real-axis analogue, and the
//! extended duals for linear inequality and equation constraints.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::basis::{BasisContext, BasisKind};
use crate::error::{Error, Result};
use crate::symbolic::{rat, BivarPoly, Rational};

/// The `(rows) x (cols)` banded Gale dual; column `k` is `(p_k, -q_k, r_k)`
/// in rows `k, k+1, k+2`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaleDual {
    pub ctx: BasisContext,
    /// Effective degree: `rows = dim + 1`, `cols = dim - 1`. Equals `ctx.d`
    /// unless leading coefficients were forced to vanish.
    pub dim: usize,
    pub entries: Vec<Vec<BivarPoly>>,
}

impl GaleDual {
    pub fn build(ctx: BasisContext) -> Result<Self> {
        Self::truncated(ctx, ctx.d)
    }

    /// Dual of the first `dim + 1` basis vectors, using the syzygies of `ctx`.
    pub fn truncated(ctx: BasisContext, dim: usize) -> Result<Self> {
        ctx.require_complex()?;
        if dim < 2 || dim > ctx.d {
            return Err(Error::DegenerateDegree(dim));
        }
        let mut entries = vec![vec![BivarPoly::zero(); dim - 1]; dim + 1];
        for k in 0..dim - 1 {
            let t = ctx.syzygy_triple(k)?;
            entries[k][k] = t.p;
            entries[k + 1][k] = -t.q;
            entries[k + 2][k] = t.r;
        }
        Ok(GaleDual { ctx, dim, entries })
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn entry(&self, row: usize, col: usize) -> &BivarPoly {
        &self.entries[row][col]
    }

    pub fn column(&self, col: usize) -> Vec<BivarPoly> {
        self.entries.iter().map(|row| row[col].clone()).collect()
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().flatten().filter(|e| !e.is_zero()).count()
    }
}

/// The primal rows `(R_0..R_n)` and `(I_0..I_n)` of the first `n+1` basis vectors.
pub fn primal_rows(ctx: &BasisContext, n: usize) -> Result<[Vec<BivarPoly>; 2]> {
    let mut re = Vec::with_capacity(n + 1);
    let mut im = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let (r, s) = ctx.real_imag(i)?;
        re.push(r);
        im.push(s);
    }
    Ok([re, im])
}

/// Symbolic product `row * M` for a row vector and a matrix of polynomials.
pub fn row_times(row: &[BivarPoly], m: &[Vec<BivarPoly>]) -> Vec<BivarPoly> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|c| {
            row.iter()
                .zip(m)
                .filter(|(a, mr)| !a.is_zero() && !mr[c].is_zero())
                .fold(BivarPoly::zero(), |acc, (a, mr)| &acc + &(a * &mr[c]))
        })
        .collect()
}

/// True iff every given primal row annihilates every column of `m`.
pub fn annihilates(primal: &[Vec<BivarPoly>], m: &[Vec<BivarPoly>]) -> bool {
    primal.iter().all(|row| row_times(row, m).iter().all(BivarPoly::is_zero))
}

/// Symbolic check of `W W̄ = 0`.
pub fn verify_duality(ctx: BasisContext) -> Result<bool> {
    let gd = GaleDual::build(ctx)?;
    let primal = primal_rows(&ctx, ctx.d)?;
    Ok(annihilates(&primal, &gd.entries))
}

/// The `(d+1) x d` bidiagonal kernel basis of `W^R = (b_0(x), .., b_d(x))`:
/// column `j` is `(-b_{j+1}(x), b_j(x))` in rows `j, j+1`.
pub fn real_gale_dual(ctx: &BasisContext, x: &Rational) -> Result<Vec<Vec<Rational>>> {
    let b: Vec<Rational> = (0..=ctx.d).map(|i| ctx.eval_real_exact(i, x)).collect::<Result<_>>()?;
    let mut m = vec![vec![Rational::zero(); ctx.d]; ctx.d + 1];
    for j in 0..ctx.d {
        m[j][j] = -b[j + 1].clone();
        m[j + 1][j] = b[j].clone();
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintKind {
    /// `sum lambda_i a_i <= 0`
    InequalityLe,
    /// `sum lambda_i a_i < 0`
    InequalityLt,
    /// `sum lambda_i a_i = 0`
    Equation,
}

impl ConstraintKind {
    pub fn is_inequality(self) -> bool {
        !matches!(self, ConstraintKind::Equation)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    pub lambda: Vec<Rational>,
    pub kind: ConstraintKind,
}

impl LinearConstraint {
    pub fn new(lambda: Vec<Rational>, kind: ConstraintKind) -> Result<Self> {
        if lambda.iter().all(Zero::is_zero) {
            return Err(Error::Constraint("lambda must not be the zero vector".into()));
        }
        Ok(LinearConstraint { lambda, kind })
    }

    /// `a_d <= a_0 + a_1`, the first Ehrhart inequality.
    pub fn ehrhart_s0(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::DegenerateDegree(d));
        }
        let mut lambda = vec![Rational::zero(); d + 1];
        lambda[0] = rat(-1);
        lambda[1] = rat(-1);
        lambda[d] += rat(1);
        Self::new(lambda, ConstraintKind::InequalityLe)
    }

    /// Whether a coefficient vector satisfies the constraint (exactly).
    pub fn holds(&self, a: &[Rational]) -> bool {
        let s: Rational = self.lambda.iter().zip(a).map(|(l, v)| l * v).sum();
        match self.kind {
            ConstraintKind::InequalityLe => !s.is_positive(),
            ConstraintKind::InequalityLt => s.is_negative(),
            ConstraintKind::Equation => s.is_zero(),
        }
    }

    /// Floating-point version of [`holds`](Self::holds) with a relative slack.
    pub fn holds_f64(&self, a: &[f64], tol: f64) -> bool {
        use num_traits::ToPrimitive;
        let mut s = 0.0;
        let mut scale = 0.0;
        for (l, v) in self.lambda.iter().zip(a) {
            let l = l.to_f64().unwrap();
            s += l * v;
            scale += (l * v).abs();
        }
        let slack = tol * scale;
        match self.kind {
            ConstraintKind::InequalityLe => s <= slack,
            ConstraintKind::InequalityLt => s < 0.0,
            ConstraintKind::Equation => s.abs() <= slack,
        }
    }
}

/// A Gale dual adapted to constraints: inequality rows `ω` appended below
/// `W̄`, or columns recombined for equations.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedDual {
    pub base: GaleDual,
    pub extra_rows: Vec<Vec<BivarPoly>>,
    /// `(base cols) x (new cols)`; the dual becomes `W̄ T`.
    pub column_transform: Option<Vec<Vec<BivarPoly>>>,
    /// Extra primal rows the dual must also annihilate (equations).
    pub equation_rows: Vec<Vec<BivarPoly>>,
    /// Entries are polynomials in `x - x_shift`.
    pub x_shift: Rational,
    /// Strict inequalities: only hyperplanes avoiding every new row count.
    pub strict: bool,
}

impl ExtendedDual {
    pub fn plain(base: GaleDual) -> Self {
        ExtendedDual {
            base,
            extra_rows: Vec::new(),
            column_transform: None,
            equation_rows: Vec::new(),
            x_shift: Rational::zero(),
            strict: true,
        }
    }

    pub fn num_new_rows(&self) -> usize {
        self.extra_rows.len()
    }

    /// The full dual matrix: `W̄ T` for equations, `[W̄; ω rows]` for inequalities.
    pub fn matrix(&self) -> Vec<Vec<BivarPoly>> {
        let base: Vec<Vec<BivarPoly>> = match &self.column_transform {
            Some(t) => self.base.entries.iter().map(|row| row_times(row, t)).collect(),
            None => self.base.entries.clone(),
        };
        base.into_iter().chain(self.extra_rows.iter().cloned()).collect()
    }

    /// Primal rows (in the shifted coordinate) that [`matrix`](Self::matrix)
    /// must annihilate when there are no inequality rows.
    pub fn primal(&self) -> Result<Vec<Vec<BivarPoly>>> {
        let [re, im] = primal_rows(&self.base.ctx, self.base.dim)?;
        let mut rows = vec![re, im];
        rows.extend(self.equation_rows.iter().cloned());
        Ok(rows)
    }
}

/// `ω_i = -λ_i p_i + λ_{i+1} q_i - λ_{i+2} r_i`.
pub fn omega_row(ctx: &BasisContext, lambda: &[Rational]) -> Result<Vec<BivarPoly>> {
    ctx.require_complex()?;
    if lambda.len() != ctx.d + 1 {
        return Err(Error::Constraint(format!(
            "lambda has length {}, expected {}",
            lambda.len(),
            ctx.d + 1
        )));
    }
    (0..ctx.d - 1)
        .map(|i| {
            let t = ctx.syzygy_triple(i)?;
            Ok(t.p.scale(&-lambda[i].clone()) + t.q.scale(&lambda[i + 1])
                - t.r.scale(&lambda[i + 2]))
        })
        .collect()
}

/// Appends the `ω`-row of an inequality constraint.
pub fn extend_with_inequality(mut ext: ExtendedDual, c: &LinearConstraint) -> Result<ExtendedDual> {
    if !c.kind.is_inequality() {
        return Err(Error::Constraint("extend_with_inequality needs an inequality".into()));
    }
    if ext.column_transform.is_some() || ext.base.dim != ext.base.ctx.d {
        return Err(Error::Constraint("cannot mix inequalities with equation transforms".into()));
    }
    ext.extra_rows.push(omega_row(&ext.base.ctx, &c.lambda)?);
    if c.kind == ConstraintKind::InequalityLe {
        ext.strict = false;
    }
    Ok(ext)
}

/// Chromatic polynomial in the binomial basis with `a_0 = .. = a_{χ-1} = 0`
/// and `a_d = ε d! · (sum of coefficients) / d!`, i.e. the linear relation
/// `sum a_i - a_d / ε = 0`. Works in the coordinate `x - χ`.
pub fn chromatic_equation_dual(ctx: BasisContext, chi: usize, eps: &Rational) -> Result<ExtendedDual> {
    ctx.require_binomial()?;
    ctx.require_complex()?;
    if ctx.d < 3 || chi > ctx.d - 3 {
        return Err(Error::Constraint(format!(
            "chi = {chi} out of range 0..={} for d = {}",
            ctx.d.saturating_sub(3),
            ctx.d
        )));
    }
    if !eps.is_positive() || *eps > Rational::one() {
        return Err(Error::Constraint(format!("eps = {eps} must lie in (0, 1]")));
    }
    let dp = ctx.d - chi;
    let base = GaleDual::truncated(ctx, dp)?;
    let d = ctx.d as i64;
    let lam = eps * rat(d * (d - 1));
    let r_last = ctx.syzygy_triple(dp - 2)?.r;
    let mu = &BivarPoly::constant(lam.clone()) - &r_last;

    // columns v_c - v_0 (c = 1..d'-3), then λ v_{d'-2} - μ v_0
    let cols = dp - 1;
    let mut t = vec![vec![BivarPoly::zero(); cols - 1]; cols];
    for c in 1..cols - 1 {
        t[c][c - 1] = BivarPoly::one();
        t[0][c - 1] = BivarPoly::from_int(-1);
    }
    t[cols - 1][cols - 2] = BivarPoly::constant(lam);
    t[0][cols - 2] = -mu;

    let mut eq = vec![BivarPoly::one(); dp + 1];
    eq[dp] = BivarPoly::constant(Rational::one() - Rational::one() / eps);

    Ok(ExtendedDual {
        base,
        extra_rows: Vec::new(),
        column_transform: Some(t),
        equation_rows: vec![eq],
        x_shift: rat(chi as i64),
        strict: true,
    })
}

/// Alternating power basis with `a_0 = .. = a_{κ-1} = 0` and `m a_d = a_{d-1}`:
/// the last two columns are replaced by `(m - 2x) v_{d'-3} + v_{d'-2}`.
pub fn alt_power_equation_dual(ctx: BasisContext, kappa: usize, m: i64) -> Result<ExtendedDual> {
    if ctx.kind != BasisKind::AlternatingPower {
        return Err(Error::BasisMismatch { expected: "alt-power", got: ctx.kind.name() });
    }
    ctx.require_complex()?;
    if ctx.d < 3 || kappa > ctx.d - 3 {
        return Err(Error::Constraint(format!(
            "kappa = {kappa} out of range 0..={} for d = {}",
            ctx.d.saturating_sub(3),
            ctx.d
        )));
    }
    let dp = ctx.d - kappa;
    let base = GaleDual::truncated(ctx, dp)?;
    let cols = dp - 1;
    let mut t = vec![vec![BivarPoly::zero(); cols - 1]; cols];
    for (c, row) in t.iter_mut().enumerate().take(cols - 2) {
        row[c] = BivarPoly::one();
    }
    t[cols - 2][cols - 2] = BivarPoly::from_int(m) - BivarPoly::x().scale(&rat(2));
    t[cols - 1][cols - 2] = BivarPoly::one();

    let mut eq = vec![BivarPoly::zero(); dp + 1];
    eq[dp - 1] = BivarPoly::from_int(-1);
    eq[dp] = BivarPoly::from_int(m);

    Ok(ExtendedDual {
        base,
        extra_rows: Vec::new(),
        column_transform: Some(t),
        equation_rows: vec![eq],
        x_shift: Rational::zero(),
        strict: true,
    })
}

/// The `g` and `h` entries of the recombined alt-power column.
pub fn alt_power_gh(m: i64) -> (BivarPoly, BivarPoly) {
    let x = BivarPoly::x();
    let rho = x.pow(2) + BivarPoly::y().pow(2);
    let f = BivarPoly::from_int(m) - x.scale(&rat(2));
    let g = &f * &rho;
    let h = &(&f * &x.scale(&rat(2))) + &rho;
    (g, h)
}

/// A general equation `sum λ_i a_i = 0`: the dual columns are the kernel of
/// `u = λ W̄`, spanned by `u_{c0} e_c - u_c e_{c0}` for a pivot `c0`.
pub fn generic_equation_dual(ctx: BasisContext, c: &LinearConstraint) -> Result<ExtendedDual> {
    if c.kind != ConstraintKind::Equation {
        return Err(Error::Constraint("generic_equation_dual needs an equation".into()));
    }
    let base = GaleDual::build(ctx)?;
    if c.lambda.len() != ctx.d + 1 {
        return Err(Error::Constraint(format!(
            "lambda has length {}, expected {}",
            c.lambda.len(),
            ctx.d + 1
        )));
    }
    if ctx.d < 3 {
        return Err(Error::Constraint("an equation needs d >= 3".into()));
    }
    let lam_row: Vec<BivarPoly> = c.lambda.iter().cloned().map(BivarPoly::constant).collect();
    let u = row_times(&lam_row, &base.entries);
    let cols = ctx.d - 1;
    let mut t = vec![vec![BivarPoly::zero(); cols - 1]; cols];
    match u.iter().position(|v| !v.is_zero()) {
        None => {
            // λ already annihilates W̄: every column survives, drop the last
            return Err(Error::Constraint(
                "equation is implied by the basis relations; nothing to impose".into(),
            ));
        }
        Some(c0) => {
            let mut out = 0;
            for cc in 0..cols {
                if cc == c0 {
                    continue;
                }
                t[cc][out] = u[c0].clone();
                t[c0][out] = -u[cc].clone();
                out += 1;
            }
        }
    }
    Ok(ExtendedDual {
        base,
        extra_rows: Vec::new(),
        column_transform: Some(t),
        equation_rows: vec![lam_row],
        x_shift: Rational::zero(),
        strict: true,
    })
}

/// Parsed `--constraint` option.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintSpec {
    EhrhartS0,
    ChromaticBinomial { chi: usize, eps: Rational },
    ChromaticAltPower { kappa: usize, m: i64 },
    Custom(LinearConstraint),
}

fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
        let d: i64 = d.trim().parse().map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
        if d == 0 {
            return Err(Error::Parse(format!("zero denominator in '{s}'")));
        }
        return Ok(Rational::new(n.into(), d.into()));
    }
    if let Ok(n) = s.parse::<i64>() {
        return Ok(rat(n));
    }
    let f: f64 = s.parse().map_err(|_| Error::Parse(format!("bad number '{s}'")))?;
    Rational::from_float(f).ok_or_else(|| Error::Parse(format!("non-finite number '{s}'")))
}

impl FromStr for ConstraintSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (head, tail) = s.split_once(':').unwrap_or((s, ""));
        let args: Vec<&str> = if tail.is_empty() { Vec::new() } else { tail.split(',').collect() };
        let int = |v: &str| -> Result<i64> {
            v.trim().parse().map_err(|_| Error::Parse(format!("bad integer '{v}'")))
        };
        match head {
            "ehrhart-s0" if args.is_empty() => Ok(ConstraintSpec::EhrhartS0),
            "chromatic-binomial" if args.len() == 2 => {
                let chi = int(args[0])?;
                if chi < 0 {
                    return Err(Error::Parse("chi must be nonnegative".into()));
                }
                Ok(ConstraintSpec::ChromaticBinomial { chi: chi as usize, eps: parse_rational(args[1])? })
            }
            "chromatic-altpower" if args.len() == 2 => {
                let kappa = int(args[0])?;
                if kappa < 0 {
                    return Err(Error::Parse("kappa must be nonnegative".into()));
                }
                Ok(ConstraintSpec::ChromaticAltPower { kappa: kappa as usize, m: int(args[1])? })
            }
            "custom" if args.len() >= 2 => {
                let (kind, coeffs) = args.split_last().unwrap();
                let kind = match kind.trim() {
                    "le" => ConstraintKind::InequalityLe,
                    "lt" => ConstraintKind::InequalityLt,
                    "eq" => ConstraintKind::Equation,
                    other => return Err(Error::Parse(format!("unknown constraint kind '{other}'"))),
                };
                let lambda = coeffs.iter().map(|v| parse_rational(v)).collect::<Result<_>>()?;
                Ok(ConstraintSpec::Custom(LinearConstraint::new(lambda, kind)?))
            }
            _ => Err(Error::Parse(format!("unrecognised constraint '{s}'"))),
        }
    }
}

impl fmt::Display for ConstraintSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintSpec::EhrhartS0 => write!(f, "ehrhart-s0"),
            ConstraintSpec::ChromaticBinomial { chi, eps } => write!(f, "chromatic-binomial:{chi},{eps}"),
            ConstraintSpec::ChromaticAltPower { kappa, m } => write!(f, "chromatic-altpower:{kappa},{m}"),
            ConstraintSpec::Custom(c) => {
                write!(f, "custom:")?;
                for l in &c.lambda {
                    write!(f, "{l},")?;
                }
                let kind = match c.kind {
                    ConstraintKind::InequalityLe => "le",
                    ConstraintKind::InequalityLt => "lt",
                    ConstraintKind::Equation => "eq",
                };
                write!(f, "{kind}")
            }
        }
    }
}

impl ConstraintSpec {
    /// Builds the constrained dual for a basis context.
    pub fn build(&self, ctx: BasisContext) -> Result<ExtendedDual> {
        match self {
            ConstraintSpec::EhrhartS0 => {
                ctx.require_binomial()?;
                let base = ExtendedDual::plain(GaleDual::build(ctx)?);
                extend_with_inequality(base, &LinearConstraint::ehrhart_s0(ctx.d)?)
            }
            ConstraintSpec::ChromaticBinomial { chi, eps } => chromatic_equation_dual(ctx, *chi, eps),
            ConstraintSpec::ChromaticAltPower { kappa, m } => alt_power_equation_dual(ctx, *kappa, *m),
            ConstraintSpec::Custom(c) if c.kind == ConstraintKind::Equation => generic_equation_dual(ctx, c),
            ConstraintSpec::Custom(c) => {
                extend_with_inequality(ExtendedDual::plain(GaleDual::build(ctx)?), c)
            }
        }
    }

    /// The constraint a sampled coefficient vector of length `d+1` must obey,
    /// including forced zeros.
    pub fn coefficient_constraints(&self, d: usize) -> Result<Vec<LinearConstraint>> {
        let unit = |i: usize| {
            let mut l = vec![Rational::zero(); d + 1];
            l[i] = rat(1);
            LinearConstraint::new(l, ConstraintKind::Equation)
        };
        match self {
            ConstraintSpec::EhrhartS0 => Ok(vec![LinearConstraint::ehrhart_s0(d)?]),
            ConstraintSpec::ChromaticBinomial { chi, eps } => {
                let mut out: Vec<_> = (0..*chi).map(unit).collect::<Result<_>>()?;
                let mut l = vec![rat(1); d + 1];
                for v in l.iter_mut().take(*chi) {
                    *v = Rational::zero();
                }
                l[d] = Rational::one() - Rational::one() / eps;
                out.push(LinearConstraint::new(l, ConstraintKind::Equation)?);
                Ok(out)
            }
            ConstraintSpec::ChromaticAltPower { kappa, m } => {
                let mut out: Vec<_> = (0..*kappa).map(unit).collect::<Result<_>>()?;
                let mut l = vec![Rational::zero(); d + 1];
                l[d - 1] = rat(-1);
                l[d] = rat(*m);
                out.push(LinearConstraint::new(l, ConstraintKind::Equation)?);
                Ok(out)
            }
            ConstraintSpec::Custom(c) => Ok(vec![c.clone()]),
        }
    }
}
