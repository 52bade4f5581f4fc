use deligne_core::affine_fock::{appendix_b_sweep, verify_lemma_a1, AffineModule};
use deligne_core::lie_algebra::{lie_algebra, DEFAULT_SEED};
use deligne_core::root_system::TypeLabel;

#[test]
fn commutator_identity_over_a1_and_a2() {
    let mut total = 0;
    for t in [TypeLabel::A(1), TypeLabel::A(2)] {
        let g = lie_algebra(t).unwrap();
        let rep = verify_lemma_a1(&g, 50, DEFAULT_SEED + 1);
        assert_eq!(rep.passed, 50, "{t}: {:?}", rep.first_failure);
        total += rep.passed;
    }
    assert!(total >= 100);
}

#[test]
fn a2_quartic_sweep() {
    let g = lie_algebra(TypeLabel::A(2)).unwrap();
    let s = appendix_b_sweep(&g, 12, DEFAULT_SEED + 2).unwrap();
    assert_eq!((s.projection_matches, s.cd1_balanced, s.design_holds, s.recombined), (12, 12, 12, 12));
}

/// Coefficients of `∏ (1 - q^n)^{-dim}` by repeated multiplication by geometric series.
fn colored_partitions(dim: usize, top: usize) -> Vec<usize> {
    let mut c = vec![0usize; top + 1];
    c[0] = 1;
    for n in 1..=top {
        for _ in 0..dim {
            for k in n..=top {
                c[k] += c[k - n];
            }
        }
    }
    c
}

#[test]
fn pbw_basis_sizes_match_generating_function() {
    for (t, top) in [(TypeLabel::A(1), 5), (TypeLabel::A(2), 3)] {
        let g = lie_algebra(t).unwrap();
        let module = AffineModule::new(&g);
        let sizes: Vec<usize> = (0..=top).map(|d| module.pbw_basis(d).len()).collect();
        assert_eq!(sizes, colored_partitions(g.dim, top), "{t}");
    }
}
