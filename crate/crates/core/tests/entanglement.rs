use cqed::entanglement::{
    concurrence, entanglement_entropy, entanglement_of_formation, eof_from_concurrence, negativity, negativity_qubit1,
    partial_transpose, purity,
};
use cqed::hilbert::{hermitian_eigenvalues, CMatrix, DensityMatrix, StateVector};
use cqed::Complex64;
use proptest::prelude::*;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `G G† / Tr` for a 4×k complex `G` drawn from `vals`.
fn random_rho(vals: &[f64], k: usize) -> DensityMatrix {
    let mut m = CMatrix::zeros(4, 4);
    for j in 0..k {
        let v: Vec<Complex64> = (0..4).map(|i| cx(vals[8 * j + i], vals[8 * j + 4 + i])).collect();
        m = &m + &CMatrix::outer(&v, &v);
    }
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr), vec![2, 2]).unwrap()
}

fn random_unitary2(h: &[f64]) -> CMatrix {
    let herm = CMatrix::from_row_major(
        2,
        2,
        vec![cx(h[0], 0.0), cx(h[1], h[2]), cx(h[1], -h[2]), cx(h[3], 0.0)],
    )
    .unwrap();
    herm.scale(cx(0.0, 1.0)).expm()
}

#[test]
fn entropy_of_center_packet_at_quarter_turn() {
    // |c(π/2)⟩ = (cos(π/4)|ee⟩ + i sin(π/4)|eg⟩ − |gg⟩)/√2; its qubit-1 marginal is
    // [[1/2, i/(2√2)], [−i/(2√2), 1/2]] with eigenvalues (1 ± 1/√2)/2
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let psi = StateVector::new(vec![cx(-h, 0.0), cx(0.0, 0.0), cx(0.0, 0.5), cx(0.5, 0.0)], vec![2, 2]).unwrap();
    let p = (1.0 + h) / 2.0;
    let expect = -(p * p.log2() + (1.0 - p) * (1.0 - p).log2());
    assert!((expect - 0.600876036693).abs() < 1e-11);
    let e = entanglement_entropy(&psi).unwrap();
    assert!((e - expect).abs() < 1e-12, "{e} vs {expect}");
    assert!(e > 0.0 && e < 1.0);
}

#[test]
fn eof_is_monotone_in_concurrence() {
    let vals: Vec<f64> = (0..=1000).map(|k| eof_from_concurrence(k as f64 / 1000.0)).collect();
    assert!(vals.windows(2).all(|w| w[1] > w[0]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn entanglement_detection_agrees(vals in prop::collection::vec(-1.0f64..1.0, 32), rank in 1usize..=4) {
        let rho = random_rho(&vals, rank);
        let c = concurrence(&rho).unwrap();
        let n = negativity(&rho).unwrap();
        // near the separability boundary N ~ C², so compare with a margin
        if c > 1e-3 {
            prop_assert!(n > 0.0, "C = {c}, N = {n}");
        }
        if n > 1e-8 {
            prop_assert!(c > 0.0, "C = {c}, N = {n}");
        }
        prop_assert!(n <= 0.5 * c + 1e-9);
    }

    #[test]
    fn measures_are_local_unitary_invariant(vals in prop::collection::vec(-1.0f64..1.0, 32), h in prop::collection::vec(-2.0f64..2.0, 8)) {
        let rho = random_rho(&vals, 4);
        let u = random_unitary2(&h[..4]).kron(&random_unitary2(&h[4..]));
        let moved = DensityMatrix::new(u.matmul(rho.matrix()).matmul(&u.adjoint()), vec![2, 2]).unwrap();
        prop_assert!((concurrence(&rho).unwrap() - concurrence(&moved).unwrap()).abs() < 1e-10);
        prop_assert!((entanglement_of_formation(&rho).unwrap() - entanglement_of_formation(&moved).unwrap()).abs() < 1e-10);
        prop_assert!((negativity(&rho).unwrap() - negativity(&moved).unwrap()).abs() < 1e-10);
        prop_assert!((purity(&rho) - purity(&moved)).abs() < 1e-10);
    }

    #[test]
    fn negativity_independent_of_transposed_qubit(vals in prop::collection::vec(-1.0f64..1.0, 32), rank in 1usize..=4) {
        let rho = random_rho(&vals, rank);
        let a = hermitian_eigenvalues(&partial_transpose(rho.matrix(), 0)).unwrap();
        let b = hermitian_eigenvalues(&partial_transpose(rho.matrix(), 1)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
        prop_assert!((negativity(&rho).unwrap() - negativity_qubit1(&rho).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn measures_stay_in_range(vals in prop::collection::vec(-1.0f64..1.0, 32), rank in 1usize..=4) {
        let rho = random_rho(&vals, rank);
        let ef = entanglement_of_formation(&rho).unwrap();
        let n = negativity(&rho).unwrap();
        let p = purity(&rho);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ef));
        prop_assert!((0.0..=0.5 + 1e-12).contains(&n));
        prop_assert!((0.25 - 1e-12..=1.0 + 1e-12).contains(&p));
    }
}
