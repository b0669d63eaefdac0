use multijet::polycore::{basis_dim, monomials, poly_jet, rank, taylor_poly, AffineVec, MultiIndex, Poly, SymForm};
use proptest::prelude::*;

fn coeffs(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, len)
}

/// (n, d, coefficients) for a random polynomial.
fn poly(max_n: usize, max_d: usize) -> impl Strategy<Value = Poly> {
    (1..=max_n, 0..=max_d)
        .prop_flat_map(|(n, d)| coeffs(basis_dim(n, d)).prop_map(move |c| Poly::from_coeffs(n, d, c).unwrap()))
}

fn point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, n)
}

/// A form of order k on ℝⁿ with k affine arguments in `ambient` variables.
fn form_and_args() -> impl Strategy<Value = (SymForm, Vec<AffineVec>)> {
    (1..=3usize, 1..=5usize, 1..=3usize).prop_flat_map(|(n, k, ambient)| {
        let form = coeffs(multijet::polycore::homogeneous(n, k).len())
            .prop_map(move |c| SymForm::from_coeffs(n, k, c).unwrap());
        let arg = prop::collection::vec(coeffs(ambient + 1), n).prop_map(move |rows| {
            AffineVec(rows.into_iter().map(|c| Poly::from_coeffs(ambient, 1, c).unwrap()).collect())
        });
        (form, prop::collection::vec(arg, k))
    })
}

proptest! {
    #[test]
    fn rank_inverts_graded_lex_enumeration(n in 1..=4usize, d in 0..=5usize) {
        for (i, a) in monomials(n, d).iter().enumerate() {
            prop_assert_eq!(rank(a), i);
        }
    }

    #[test]
    fn derivative_matches_central_differences(
        (p, x, i) in poly(3, 5).prop_flat_map(|p| {
            let n = p.n();
            (Just(p), point(n), 0..n)
        })
    ) {
        let n = p.n();
        let h = 1e-5;
        let mut fwd = x.clone();
        let mut bwd = x.clone();
        fwd[i] += h;
        bwd[i] -= h;
        let fd = (p.eval(&fwd).unwrap() - p.eval(&bwd).unwrap()) / (2.0 * h);
        let exact = p.derivative(&MultiIndex::unit(n, i, 1)).unwrap().eval(&x).unwrap();
        prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0), "{} vs {}", fd, exact);
    }

    #[test]
    fn taylor_of_exact_jet_is_identity(
        (p, x) in poly(3, 4).prop_flat_map(|p| { let n = p.n(); (Just(p), point(n)) }),
        extra in 0..=2usize,
    ) {
        let k = p.degree_bound() + extra;
        let jet = poly_jet(&p, &x, k).unwrap();
        let back = taylor_poly(&jet, &x, k).unwrap();
        prop_assert!(back.max_abs_diff(&p) <= 1e-12, "{}", back.max_abs_diff(&p));
    }

    #[test]
    fn application_is_symmetric_in_its_arguments((s, args) in form_and_args(), seed in any::<u64>()) {
        let base = s.apply(&args).unwrap();
        let mut perm = args.clone();
        // a seeded Fisher-Yates shuffle keeps the case reproducible from the proptest seed
        let mut state = seed;
        for i in (1..perm.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let shuffled = s.apply(&perm).unwrap();
        prop_assert_eq!(base, shuffled);
    }

    #[test]
    fn constant_arguments_give_the_homogeneous_value(
        (s, v) in (1..=3usize, 1..=6usize).prop_flat_map(|(n, k)| {
            (coeffs(multijet::polycore::homogeneous(n, k).len())
                .prop_map(move |c| SymForm::from_coeffs(n, k, c).unwrap()), point(n))
        }),
        ambient in 1..=3usize,
    ) {
        let args = vec![AffineVec::constant(&v, ambient); s.order()];
        let value = s.apply(&args).unwrap().eval(&vec![0.0; ambient]).unwrap();
        prop_assert!((value - s.homogeneous_value(&v)).abs() <= 1e-12, "{} vs {}", value, s.homogeneous_value(&v));
    }

    #[test]
    fn coefficient_count_is_binomial(n in 1..=4usize, d in 0..=6usize) {
        prop_assert_eq!(Poly::zero(n, d).coeffs().len(), multijet::polycore::binomial(n + d, n));
    }
}
