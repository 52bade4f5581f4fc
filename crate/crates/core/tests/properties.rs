use deligne_core::affine_fock::{random_state, AffineModule, FockState};
use deligne_core::lie_algebra::lie_algebra;
use deligne_core::q_series::PuiseuxSeries;
use deligne_core::rational::{q, qi};
use deligne_core::root_system::TypeLabel;
use deligne_core::virasoro::{partitions, VirasoroModule, VirasoroState};
use deligne_core::Q;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn series(coeffs: &[i64]) -> PuiseuxSeries {
    PuiseuxSeries::from_integer_coeffs(coeffs, 8)
}

/// Equality below the smaller of the two known precisions.
fn agree(a: &PuiseuxSeries, b: &PuiseuxSeries) -> bool {
    let t = a.truncation().clone().min(b.truncation().clone());
    a.truncate(&t) == b.truncate(&t)
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..=5, 8)
}

proptest! {
    #[test]
    fn series_product_is_associative(a in coeffs(), b in coeffs(), c in coeffs()) {
        let (a, b, c) = (series(&a), series(&b), series(&c));
        prop_assert!(agree(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c))));
    }

    #[test]
    fn series_product_distributes(a in coeffs(), b in coeffs(), c in coeffs()) {
        let (a, b, c) = (series(&a), series(&b), series(&c));
        prop_assert!(agree(&a.mul(&b.add(&c)), &a.mul(&b).add(&a.mul(&c))));
    }

    #[test]
    fn series_inverse(mut a in coeffs()) {
        a[0] = 1;
        let a = series(&a);
        prop_assert_eq!(a.mul(&a.invert().unwrap()), PuiseuxSeries::one(qi(8)));
    }
}

fn virasoro_state(c: &Q, min_part: i64, picks: &[(usize, i64)]) -> VirasoroState {
    let mut s = VirasoroState::zero(c);
    for &(i, coeff) in picks {
        let degree = (i % 5) as i64;
        let basis = partitions(degree, min_part);
        if basis.is_empty() {
            continue;
        }
        let p = &basis[i % basis.len()];
        s = s.add(&VirasoroState::monomial(c, p, qi(coeff)));
    }
    s
}

fn check_virasoro(module: &VirasoroModule, m: i64, n: i64, s: &VirasoroState) -> bool {
    let lhs = module.apply_l(m, &module.apply_l(n, s)).sub(&module.apply_l(n, &module.apply_l(m, s)));
    let mut rhs = module.apply_l(m + n, s).scale(&qi(m - n));
    if m + n == 0 {
        rhs = rhs.add(&s.scale(&(&module.c * qi(m * m * m - m) / qi(12))));
    }
    lhs == rhs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn virasoro_vacuum_commutator(
        m in -4i64..=4, n in -4i64..=4, cn in -6i64..=6, cd in 1i64..=5,
        picks in prop::collection::vec((0usize..40, -3i64..=3), 1..4),
    ) {
        let c = q(cn, cd);
        let module = VirasoroModule::vacuum(&c);
        let s = virasoro_state(&c, 2, &picks);
        prop_assert!(check_virasoro(&module, m, n, &s));
    }

    #[test]
    fn virasoro_verma_commutator(
        m in -4i64..=4, n in -4i64..=4, cn in -6i64..=6, hn in -4i64..=4,
        picks in prop::collection::vec((0usize..40, -3i64..=3), 1..4),
    ) {
        let c = qi(cn);
        let module = VirasoroModule::verma(&c, &q(hn, 3));
        let s = virasoro_state(&c, 1, &picks);
        prop_assert!(check_virasoro(&module, m, n, &s));
    }
}

fn element(dim: usize, raw: &[i64]) -> Vec<Q> {
    (0..dim).map(|i| qi(raw[i % raw.len()])).collect()
}

fn check_affine(t: TypeLabel, m: i64, n: i64, xr: &[i64], yr: &[i64], seed: u64) -> bool {
    let g = lie_algebra(t).unwrap();
    let module = AffineModule::new(&g);
    let x = element(g.dim, xr);
    let y = element(g.dim, yr);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = random_state(&module, &mut rng, 3);
    let lhs = module.apply_mode(&x, m, &module.apply_mode(&y, n, &s)).sub(&module.apply_mode(
        &y,
        n,
        &module.apply_mode(&x, m, &s),
    ));
    let mut rhs = module.apply_mode(&g.bracket(&x, &y).unwrap(), m + n, &s);
    if m + n == 0 {
        rhs = rhs.add(&s.scale(&(qi(m) * g.form(&x, &y).unwrap())));
    }
    lhs == rhs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn affine_commutator_a1(
        m in -3i64..=3, n in -3i64..=3,
        xr in prop::collection::vec(-2i64..=2, 3), yr in prop::collection::vec(-2i64..=2, 3), seed in any::<u64>(),
    ) {
        prop_assert!(check_affine(TypeLabel::A(1), m, n, &xr, &yr, seed));
    }

    #[test]
    fn affine_commutator_a2(
        m in -2i64..=2, n in -2i64..=2,
        xr in prop::collection::vec(-2i64..=2, 8), yr in prop::collection::vec(-2i64..=2, 8), seed in any::<u64>(),
    ) {
        prop_assert!(check_affine(TypeLabel::A(2), m, n, &xr, &yr, seed));
    }

    #[test]
    fn normal_ordering_is_confluent(
        xr in prop::collection::vec(-2i64..=2, 3), yr in prop::collection::vec(-2i64..=2, 3),
        a in 1i64..=3, b in 1i64..=3,
    ) {
        // Creating x_(-a)y_(-b)𝟙 in either order differs by the bracket mode only.
        let g = lie_algebra(TypeLabel::A(1)).unwrap();
        let module = AffineModule::new(&g);
        let (x, y) = (element(3, &xr), element(3, &yr));
        let v = FockState::vacuum();
        let xy = module.apply_mode(&x, -a, &module.apply_mode(&y, -b, &v));
        let yx = module.apply_mode(&y, -b, &module.apply_mode(&x, -a, &v));
        let bracket = module.apply_mode(&g.bracket(&x, &y).unwrap(), -a - b, &v);
        prop_assert_eq!(xy.sub(&yx), bracket);
    }

    #[test]
    fn trace_is_multilinear(
        a in prop::collection::vec(-3i64..=3, 8), b in prop::collection::vec(-3i64..=3, 8),
        c in prop::collection::vec(-3i64..=3, 8), d in prop::collection::vec(-3i64..=3, 8),
        s in -4i64..=4, u in -4i64..=4,
    ) {
        let g = lie_algebra(TypeLabel::A(2)).unwrap();
        let (a, b, c, d) = (element(8, &a), element(8, &b), element(8, &c), element(8, &d));
        let mix: Vec<Q> = a.iter().zip(&b).map(|(x, y)| qi(s) * x + qi(u) * y).collect();
        let lhs = g.trace_ad_product(&[c.clone(), mix, d.clone()]).unwrap();
        let rhs = qi(s) * g.trace_ad_product(&[c.clone(), a, d.clone()]).unwrap()
            + qi(u) * g.trace_ad_product(&[c, b, d]).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
