use multijet::configspace::{
    ev_kernel, ev_kernel_cluster, eval_matrix, multijet2, partition_intersection_check, subspace_angle, Configuration,
    Partition, Site2,
};
use multijet::interp::{BuiltinFn, Profile};
use nalgebra::DMatrix;
use proptest::prelude::*;

/// p points in [-1, 1]ⁿ, pairwise at least 0.05 apart.
fn spread(n: usize, p: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-1.0..1.0f64, n), p).prop_filter("points too close", |pts| {
        pts.iter().enumerate().all(|(i, a)| {
            pts[..i].iter().all(|b| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt() >= 0.05)
        })
    })
}

fn config() -> impl Strategy<Value = Configuration> {
    (1..=3usize, 1..=5usize).prop_flat_map(|(n, p)| spread(n, p)).prop_map(|pts| Configuration::new(pts).unwrap())
}

fn config_and_partition() -> impl Strategy<Value = (Configuration, Partition)> {
    (1..=2usize, 2..=4usize).prop_flat_map(|(n, p)| {
        let parts = Partition::all(p);
        (spread(n, p), prop::sample::select(parts)).prop_map(|(pts, part)| (Configuration::new(pts).unwrap(), part))
    })
}

fn orthonormality_error(b: &DMatrix<f64>) -> f64 {
    let g = b.transpose() * b;
    (g - DMatrix::identity(b.ncols(), b.ncols())).amax()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn evaluation_is_surjective_off_the_diagonal(c in config()) {
        let p = c.p();
        let m = eval_matrix(&c, p - 1);
        let sv = m.clone().svd(false, false).singular_values;
        let tol = m.nrows().max(m.ncols()) as f64 * f64::EPSILON * sv.max();
        prop_assert_eq!(sv.iter().filter(|&&s| s > tol).count(), p);
        let g = ev_kernel(&c).unwrap();
        prop_assert_eq!(g.codim(), p);
        prop_assert!(orthonormality_error(g.basis()) <= 1e-10);
    }

    #[test]
    fn kernel_sits_inside_every_cluster_kernel((c, part) in config_and_partition()) {
        let g = ev_kernel(&c).unwrap();
        for cell in part.cells() {
            let (g_i, g_tilde) = ev_kernel_cluster(&c, cell).unwrap();
            prop_assert_eq!(g_i.codim(), cell.len());
            prop_assert_eq!(g_tilde.codim(), cell.len());
            prop_assert!(g_tilde.containment_residual(&g).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn codimensions_add_up((c, part) in config_and_partition()) {
        let rep = partition_intersection_check(&c, &part).unwrap();
        prop_assert!(rep.passes(c.p(), 1e-8), "{:?}", rep);
    }

    #[test]
    fn clustering_is_an_equivalence(
        pts in (1..=2usize, 2..=6usize).prop_flat_map(|(n, p)| prop::collection::vec(prop::collection::vec(prop::sample::select(vec![0.0, 0.5, 1.0]), n), p)),
    ) {
        let c = Configuration::new(pts.clone()).unwrap();
        let part = c.clustering_partition();
        let mut seen: Vec<usize> = part.cells().iter().flatten().copied().collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..pts.len()).collect::<Vec<_>>());
        for cell in part.cells() {
            for other in part.cells() {
                let same = std::ptr::eq(cell, other);
                prop_assert_eq!(pts[cell[0]] == pts[other[0]], same);
            }
            prop_assert!(cell.iter().all(|&i| pts[i] == pts[cell[0]]));
        }
    }

    #[test]
    fn angles_are_symmetric_and_bounded((a, b) in (1..=2usize, 1..=4usize).prop_flat_map(|(n, p)| (spread(n, p), spread(n, p)))) {
        let (ga, gb) = (ev_kernel(&Configuration::new(a).unwrap()).unwrap(), ev_kernel(&Configuration::new(b).unwrap()).unwrap());
        let (ab, ba) = (subspace_angle(&ga, &gb).unwrap(), subspace_angle(&gb, &ga).unwrap());
        prop_assert!((ab - ba).abs() <= 1e-12);
        prop_assert!((0.0..=std::f64::consts::FRAC_PI_2 + 1e-15).contains(&ab));
        prop_assert!(subspace_angle(&ga, &ga).unwrap() <= 1e-7);
    }

    #[test]
    fn multijet_is_lipschitz_toward_the_divisor(
        (w, x, u) in (1..=3usize).prop_flat_map(|n| (
            prop::collection::vec(-1.5..1.5f64, n),
            prop::collection::vec(-1.0..1.0f64, n),
            prop::collection::vec(-1.0..1.0f64, n).prop_filter("zero direction", |u| u.iter().any(|c| c.abs() > 0.1)),
        )),
        profile in prop_oneof![Just(Profile::Sin), Just(Profile::Cos), Just(Profile::Exp)],
        b in -1.0..1.0f64,
    ) {
        let norm = u.iter().map(|c| c * c).sum::<f64>().sqrt();
        let u: Vec<f64> = u.iter().map(|c| c / norm).collect();
        let f = BuiltinFn::ridge(profile, w.clone(), b);
        let on = multijet2(&f, &Site2::Direction { x: x.clone(), u: u.clone() }).unwrap();
        let wu: f64 = w.iter().zip(&u).map(|(a, c)| a * c).sum();
        let wn = w.iter().map(|c| c * c).sum::<f64>().sqrt();
        let xn = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        // |g''| ≤ e^{|s|} for every profile, and |s| ≤ ‖w‖(‖x‖ + t) + |b| on the segment
        let lipschitz = 0.5 * wu * wu * (wn * (xn + 0.01) + b.abs()).exp();
        for t in [1e-2, 1e-3, 1e-4, 1e-5] {
            let x2: Vec<f64> = x.iter().zip(&u).map(|(a, c)| a + t * c).collect();
            let off = multijet2(&f, &Site2::Pair(x.clone(), x2)).unwrap();
            let gap = (off.0 - on.0).abs().max((off.1 - on.1).abs());
            prop_assert!(gap <= lipschitz * t + 1e-10, "t = {}: {} > {}", t, gap, lipschitz * t);
        }
    }
}
