use multijet::interp::{
    dirichlet_moment, divdiff_1d_classical, divided_difference, kergin, kergin_matrix, newton_forms,
    newton_reconstruct, BuiltinFn, FnOracle, Profile, SimplexRule,
};
use multijet::polycore::{basis_dim, homogeneous, MultiIndex, Poly};
use proptest::prelude::*;

fn profile() -> impl Strategy<Value = Profile> {
    prop_oneof![Just(Profile::Sin), Just(Profile::Cos), Just(Profile::Exp)]
}

fn ridge(n: usize) -> impl Strategy<Value = BuiltinFn> {
    (profile(), prop::collection::vec(-1.5..1.5f64, n), -1.0..1.0f64, 0.5..2.0f64)
        .prop_map(|(profile, w, b, scale)| BuiltinFn::Ridge { profile, w, b, scale })
}

fn poly(n: usize, d: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-1.0..1.0f64, basis_dim(n, d)).prop_map(move |c| Poly::from_coeffs(n, d, c).unwrap())
}

/// p points in [-1, 1]ⁿ where each may repeat an earlier one.
fn points(n: usize, p: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (
        prop::collection::vec(prop::collection::vec(-1.0..1.0f64, n), p),
        prop::collection::vec(any::<prop::sample::Index>(), p),
        prop::collection::vec(prop::bool::weighted(0.3), p),
    )
        .prop_map(|(mut pts, picks, repeat)| {
            for j in 1..pts.len() {
                if repeat[j] {
                    pts[j] = pts[picks[j].index(j)].clone();
                }
            }
            pts
        })
}

fn sized() -> impl Strategy<Value = (usize, usize)> {
    (1..=3usize, 1..=5usize)
}

fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs() / y.abs().max(1.0)).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn divided_differences_are_linear(
        (f, g, pts) in (1..=2usize, 1..=4usize).prop_flat_map(|(n, p)| (ridge(n), poly(n, 4), points(n, p))),
        a in -2.0..2.0f64,
        b in -2.0..2.0f64,
    ) {
        let combo = BuiltinFn::Sum(vec![
            match &f { BuiltinFn::Ridge { profile, w, b: shift, scale } => BuiltinFn::Ridge { profile: *profile, w: w.clone(), b: *shift, scale: a * scale }, _ => unreachable!() },
            BuiltinFn::Poly(g.scale(b)),
        ]);
        let lhs = divided_difference(&combo, &pts).unwrap();
        let df = divided_difference(&f, &pts).unwrap();
        let dg = divided_difference(&g, &pts).unwrap();
        let rhs: Vec<f64> = df.coeffs().iter().zip(dg.coeffs()).map(|(x, y)| a * x + b * y).collect();
        let err = lhs.coeffs().iter().zip(&rhs).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-10, "{}", err);
    }

    #[test]
    fn divided_differences_ignore_point_order(
        (f, pts) in (1..=2usize, 2..=4usize).prop_flat_map(|(n, p)| (ridge(n), points(n, p))),
        shift in 1..4usize,
    ) {
        let mut rotated = pts.clone();
        rotated.rotate_left(shift % pts.len());
        rotated.swap(0, pts.len() - 1);
        let a = divided_difference(&f, &pts).unwrap();
        let b = divided_difference(&f, &rotated).unwrap();
        prop_assert!(a.max_abs_diff(&b) <= 1e-8, "{}", a.max_abs_diff(&b));
    }

    #[test]
    fn simplex_and_classical_agree_in_one_dimension(
        (f, pts) in (1..=5usize).prop_flat_map(|p| (ridge(1), points(1, p))),
    ) {
        let xs: Vec<f64> = pts.iter().map(|x| x[0]).collect();
        // the classical recursion loses accuracy on close distinct nodes
        let mut sorted = xs.clone();
        sorted.sort_by(f64::total_cmp);
        prop_assume!(sorted.windows(2).all(|w| w[1] == w[0] || w[1] - w[0] >= 0.1));
        let simplex = divided_difference(&f, &pts).unwrap().coeffs()[0];
        let jet = |x: f64, m: usize| Some(f.deriv(&MultiIndex::unit(1, 0, m as u32), &[x]));
        let classical = divdiff_1d_classical(&xs, &jet).unwrap();
        prop_assert!((simplex - classical).abs() <= 1e-6 * classical.abs().max(1.0), "{} vs {}", simplex, classical);
    }

    #[test]
    fn kergin_is_the_identity_on_low_degree((p, pts) in sized().prop_flat_map(|(n, p)| (poly(n, p - 1), points(n, p)))) {
        let k = kergin(&p, &pts).unwrap();
        prop_assert!(k.max_abs_diff(&p) <= 1e-9, "{}", k.max_abs_diff(&p));
    }

    #[test]
    fn kergin_matches_every_subset(
        (f, pts) in (1..=2usize, 1..=4usize).prop_flat_map(|(n, p)| (ridge(n), points(n, p))),
    ) {
        let k = kergin(&f, &pts).unwrap();
        for mask in 1u32..(1 << pts.len()) {
            let subset: Vec<Vec<f64>> = (0..pts.len()).filter(|i| mask >> i & 1 == 1).map(|i| pts[i].clone()).collect();
            let want = divided_difference(&f, &subset).unwrap();
            let got = divided_difference(&k, &subset).unwrap();
            let err = rel_diff(got.coeffs(), want.coeffs());
            prop_assert!(err <= 1e-6, "subset {:b}: {}", mask, err);
        }
    }

    #[test]
    fn newton_round_trip((p, pts) in (poly(2, 3), points(2, 4))) {
        let forms = newton_forms(&p, &pts).unwrap();
        let back = newton_reconstruct(&forms, &pts, 2).unwrap();
        prop_assert!(back.max_abs_diff(&p) <= 1e-9, "{}", back.max_abs_diff(&p));
    }

    #[test]
    fn simplex_rules_are_exact_on_monomials(k in 1..=4usize, degree in 0..=8usize) {
        let rule = SimplexRule::with_exactness(k, degree);
        prop_assert!(rule.exactness_degree() >= degree);
        let mass: f64 = rule.weights().iter().sum();
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        prop_assert!((mass - 1.0 / fact).abs() <= 1e-14);
        for m in 0..=degree {
            for a in homogeneous(k + 1, m) {
                let got = rule.integrate(1, |t| vec![a.monomial(t)])[0];
                let want = dirichlet_moment(a.exponents());
                prop_assert!((got - want).abs() <= 1e-12 * want, "{:?}: {} vs {}", a.exponents(), got, want);
            }
        }
    }

    #[test]
    fn zeroth_derivative_is_the_value((f, x) in (1..=3usize).prop_flat_map(|n| (ridge(n), prop::collection::vec(-2.0..2.0f64, n)))) {
        prop_assert_eq!(f.deriv(&MultiIndex::zero(f.n()), &x), f.eval(&x));
    }

    #[test]
    fn clustered_compatibility_map_has_full_rank(
        (n, centers, sizes) in (1..=2usize, 1..=4usize).prop_flat_map(|(n, c)| (
            Just(n),
            prop::collection::vec(prop::collection::vec(-1.0..1.0f64, n), c),
            prop::collection::vec(1..=4usize, c),
        )),
    ) {
        // cells of exact repeats, at most four points in all
        let mut cells: Vec<(Vec<f64>, usize)> = vec![];
        let mut p = 0;
        for (x, s) in centers.into_iter().zip(sizes) {
            let s = s.min(4 - p);
            if s == 0 || cells.iter().any(|(y, _)| y.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) < 0.05) {
                continue;
            }
            p += s;
            cells.push((x, s));
        }
        let blocks: Vec<_> = cells.iter().map(|(x, s)| kergin_matrix(&vec![x.clone(); *s], p - 1).unwrap()).collect();
        let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
        let mut stacked = nalgebra::DMatrix::zeros(rows, basis_dim(n, p - 1));
        let mut at = 0;
        for b in &blocks {
            stacked.view_mut((at, 0), (b.nrows(), b.ncols())).copy_from(b);
            at += b.nrows();
        }
        let want: usize = cells.iter().map(|(_, s)| basis_dim(n, s - 1)).sum();
        prop_assert_eq!(rows, want);
        let sv = stacked.svd(false, false).singular_values;
        let tol = rows.max(sv.len()) as f64 * f64::EPSILON * sv.max();
        prop_assert_eq!(sv.iter().filter(|&&s| s > tol).count(), want);
    }
}
