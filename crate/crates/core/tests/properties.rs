//! Randomized invariants across modules.

use galeroot::basis::{BasisContext, BasisKind, ExactPoint};
use galeroot::determinant::{d_closed_eval, d_eval};
use galeroot::galedual::ConstraintSpec;
use galeroot::grid::{marching_squares, Contour, FieldKind, RegionGrid, Window};
use galeroot::manifest::RunManifest;
use galeroot::randstudy::{clustering_report, sample, SampleSpec};
use galeroot::rootfind::{find_roots, power_residual, roots_in_basis, to_power, PolynomialInBasis};
use galeroot::rootlocus::{
    angle_sum, excluded, excluded_with_constraints, in_oval_closure, ANGLE_TOL,
};
use galeroot::symbolic::{ratio, Rational};
use num_complex::{Complex, Complex64};
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = BasisKind> {
    prop::sample::select(BasisKind::ALL.to_vec())
}

fn classical() -> impl Strategy<Value = BasisKind> {
    prop::sample::select(BasisKind::CLASSICAL.to_vec())
}

fn small_rat() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=7).prop_map(|(n, d)| ratio(n, d))
}

fn non_real(bound: f64) -> impl Strategy<Value = Complex64> {
    (-bound..bound, 0.05..bound, any::<bool>())
        .prop_map(|(x, y, up)| Complex64::new(x, if up { y } else { -y }))
}

/// Pairs each root in `a` with its nearest unused partner in `b`.
fn matched(a: &[Complex64], b: &[Complex64]) -> Vec<(Complex64, Complex64)> {
    let mut used = vec![false; b.len()];
    a.iter()
        .map(|&x| {
            let (i, _) = b
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .map(|(i, y)| (i, (x - y).norm()))
                .min_by(|p, q| p.1.total_cmp(&q.1))
                .unwrap();
            used[i] = true;
            (x, b[i])
        })
        .collect()
}

fn contour_points(cs: &[Contour]) -> Vec<(u64, u64)> {
    let mut pts: Vec<(u64, u64)> =
        cs.iter().flat_map(|c| c.points.iter().map(|&(x, y)| (x.to_bits(), y.to_bits()))).collect();
    pts.sort();
    pts.dedup();
    pts
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn real_imag_matches_exact_eval(k in kind(), d in 1usize..=10, x in small_rat(), y in small_rat()) {
        let ctx = BasisContext::new(k, d);
        let z = ExactPoint::new(x.clone(), y.clone());
        for i in 0..=d {
            let (re, im) = ctx.real_imag(i).unwrap();
            let v = ctx.eval_exact(i, &z).unwrap();
            prop_assert_eq!(Complex::new(re.eval(&x, &y), im.eval(&x, &y)), v);
        }
    }

    #[test]
    fn recursion_agrees_with_closed_form(k in classical(), d in 2usize..=10, a in 0usize..10, b in 0usize..10,
                                         z in non_real(12.0)) {
        let (j, kk) = (a.min(b) % d, a.max(b).min(d));
        prop_assume!(j < kk);
        let ctx = BasisContext::new(k, d);
        let rec = d_eval(&ctx, j, kk, z).unwrap();
        let closed = d_closed_eval(&ctx, j, kk, z).unwrap();
        prop_assert!((rec - closed).abs() <= 1e-9 * (1.0 + rec.abs()), "{} vs {}", rec, closed);
    }

    #[test]
    fn conjugation_symmetry(k in kind(), d in 2usize..=10, z in non_real(10.0)) {
        let ctx = BasisContext::new(k, d);
        let a = d_eval(&ctx, 0, d, z).unwrap();
        let b = d_eval(&ctx, 0, d, z.conj()).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn sampled_roots_are_never_excluded(k in kind(), d in 2usize..=8,
                                        a in prop::collection::vec(0.0f64..1.0, 9)) {
        let ctx = BasisContext::new(k, d);
        let mut coeffs = a[..=d].to_vec();
        coeffs[d] += 0.05;
        let p = PolynomialInBasis::new(ctx, coeffs).unwrap();
        for r in roots_in_basis(&p).unwrap() {
            if galeroot::basis::is_non_real(r) {
                prop_assert!(!excluded(&ctx, r).unwrap(), "{} root {} excluded", k, r);
            }
        }
    }

    #[test]
    fn oval_closures_nest(d in 3usize..=8, j in 0usize..8, dk in 0usize..8, d1 in 0usize..3, d2 in 0usize..3,
                          l in 1usize..4, z in non_real(9.0)) {
        let k = (j + 2 + dk).min(d);
        prop_assume!(j + d1 + 1 < k - d2.min(k));
        let (j2, k2) = (j + d1, k - d2);
        prop_assume!(l <= k2 - j2);
        let ctx = BasisContext::new(BasisKind::BinomialCoefficient, d);
        if in_oval_closure(&ctx, j2, k2, l, z).unwrap() {
            // Points sitting on the inner boundary are allowed tolerance slack.
            let outer = angle_sum(&ctx, j, k, z).unwrap().angle_sum;
            prop_assert!(outer >= l as f64 * std::f64::consts::PI - 1e3 * ANGLE_TOL,
                "({},{}) -> ({},{}) l={} at {}", j2, k2, j, k, l, z);
        }
    }

    #[test]
    fn constraints_only_grow_the_excluded_set(d in 3usize..=8, z in non_real(9.0),
                                              which in 0usize..3) {
        let ctx = BasisContext::new(BasisKind::BinomialCoefficient, d);
        let spec = match which {
            0 => ConstraintSpec::EhrhartS0,
            1 => ConstraintSpec::ChromaticBinomial { chi: (d - 3).min(1), eps: ratio(1, 2) },
            _ => {
                let mut lam = vec!["0"; d + 1];
                lam[0] = "1";
                lam[d] = "-1";
                format!("custom:{},le", lam.join(",")).parse().unwrap()
            }
        };
        if excluded(&ctx, z).unwrap() {
            prop_assert!(excluded_with_constraints(&ctx, Some(&spec), z).unwrap(), "{:?} at {}", spec, z);
        }
    }

    #[test]
    fn level_set_of_negated_field_coincides(fx in 0.5f64..3.0, fy in 0.5f64..3.0, shift in -0.5f64..0.5,
                                           nx in 5usize..40, ny in 5usize..40) {
        let w = Window::new(-2.0, 2.0, -1.5, 1.5).unwrap();
        let f = move |z: Complex64| (fx * z.re).sin() * (fy * z.im).cos() + shift;
        let a = RegionGrid::fill(w, nx, ny, FieldKind::CustomDet, f).unwrap();
        let b = RegionGrid::fill(w, nx, ny, FieldKind::CustomDet, move |z| -f(z)).unwrap();
        prop_assert_eq!(contour_points(&marching_squares(&a, 0.0)), contour_points(&marching_squares(&b, 0.0)));
    }

    #[test]
    fn csv_round_trip(vals in prop::collection::vec(prop_oneof![any::<f64>(), Just(f64::NAN)], 12),
                      x0 in -5.0f64..0.0, y0 in -5.0f64..0.0) {
        let w = Window::new(x0, x0 + 3.0, y0, y0 + 2.0).unwrap();
        let mut g = RegionGrid::fill(w, 4, 3, FieldKind::DValue, |_| 0.0).unwrap();
        g.values = vals;
        let mut m = RunManifest::new("region");
        m.window = Some(w);
        m.resolution = Some((4, 3));
        m.field = Some(FieldKind::DValue);
        let (back, m2) = RegionGrid::from_csv(&g.to_csv(&m)).unwrap();
        prop_assert_eq!(m2, m);
        prop_assert_eq!(back.window, g.window);
        prop_assert_eq!((back.nx, back.ny), (g.nx, g.ny));
        for (a, b) in back.values.iter().zip(&g.values) {
            prop_assert!(a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn residual_contract_and_conjugate_pairs(k in kind(), d in 1usize..=12,
                                             a in prop::collection::vec(0.0f64..1.0, 13)) {
        let ctx = BasisContext::new(k, d);
        let p = PolynomialInBasis::new(ctx, a[..=d].to_vec()).unwrap();
        prop_assume!(p.is_nonnegative());
        let c = to_power(&p);
        for &r in &find_roots(&c).unwrap() {
            prop_assert!(power_residual(&c, r) <= 1e-10, "{} d={} raw root {}", k, d, r);
        }
        let roots = roots_in_basis(&p).unwrap();
        let nonreal: Vec<Complex64> =
            roots.iter().copied().filter(|r| galeroot::basis::is_non_real(*r)).collect();
        for &r in &roots {
            prop_assert!(power_residual(&c, r) <= 1e-10, "{} d={} root {}", k, d, r);
        }
        let conj: Vec<Complex64> = nonreal.iter().map(|r| r.conj()).collect();
        for (x, y) in matched(&nonreal, &conj) {
            prop_assert!((x - y).norm() <= 1e-9 * (1.0 + x.norm()), "{} unpaired", x);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn polishing_never_increases_the_residual(k in kind(), d in 2usize..=12,
                                              a in prop::collection::vec(0.01f64..1.0, 13)) {
        let ctx = BasisContext::new(k, d);
        let p = PolynomialInBasis::new(ctx, a[..=d].to_vec()).unwrap();
        let raw = find_roots(&to_power(&p)).unwrap();
        let polished = roots_in_basis(&p).unwrap();
        prop_assert_eq!(raw.len(), polished.len());
        for (r, q) in matched(&raw, &polished) {
            prop_assert!(p.relative_residual(q) <= p.relative_residual(r) * (1.0 + 1e-12) + 1e-300,
                "{} -> {}", r, q);
        }
    }
}

#[test]
fn excluded_matches_angle_sum_away_from_the_boundary() {
    let d = 6;
    let ctx = BasisContext::new(BasisKind::BinomialCoefficient, d);
    let n = 400;
    let (x0, x1, y1) = (-(d as f64) - 1.0, d as f64, d as f64);
    let band = 10.0 * ANGLE_TOL;
    let mut checked = 0;
    for ix in 0..n {
        for iy in 1..=n {
            let z = Complex64::new(x0 + (x1 - x0) * ix as f64 / (n - 1) as f64, y1 * iy as f64 / n as f64);
            let a = angle_sum(&ctx, 0, d, z).unwrap().angle_sum;
            if (a - std::f64::consts::PI).abs() < band {
                continue;
            }
            checked += 1;
            assert_eq!(excluded(&ctx, z).unwrap(), a < std::f64::consts::PI, "at {z}, angle sum {a}");
        }
    }
    assert!(checked > n * n * 9 / 10);
}

#[test]
fn reports_are_reproducible() {
    let ctx = BasisContext::new(BasisKind::BinomialCoefficient, 5);
    let mut spec = SampleSpec::new(ctx, 64, 99);
    spec.ends_nonzero = true;
    let w = Window::default_for(5);
    let a = clustering_report(&spec, w, 30, 20).unwrap();
    let b = clustering_report(&spec, w, 30, 20).unwrap();
    let m = RunManifest::new("barycenter");
    assert_eq!(a.grid.to_csv(&m), b.grid.to_csv(&m));
    assert_eq!(format!("{:?}", a.roots), format!("{:?}", b.roots));
    spec.seed = 100;
    assert_ne!(sample(&spec).unwrap(), sample(&SampleSpec { seed: 99, ..spec.clone() }).unwrap());
}
