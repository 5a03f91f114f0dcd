mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use atomic_filters::filters::{
    check_properties_with_laplacian, classical_shift_matrix, classical_thetas, make_filter, polynomial_expand,
    FrequencyResponse, ShiftDirection,
};
use atomic_filters::frames::{analyze, build_frame, lemma_unitary_decompose, power_responses, synthesize};
use atomic_filters::graph::{gen_sensor, generate, is_circulant, GeneratingVector, Graph, GraphKind};
use atomic_filters::linalg::{complexify, max_abs_vec};
use atomic_filters::spectral::{
    dft_basis, eigendecompose, normal_basis, supports_normal_atomic, FourierBasis, RealSpectrum,
};
use atomic_filters::{CMatrix, CVector};
use common::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn laplacian_and_spectrum(kind: GraphKind, n: usize) -> (DMatrix<f64>, RealSpectrum) {
    let l = generate(&kind, n).unwrap().laplacian();
    let s = eigendecompose(&l).unwrap();
    (l, s)
}

/// Graph families used across several properties; `pick` selects one.
fn family(pick: u8, n: usize, seed: u64) -> Graph {
    match pick % 5 {
        0 => generate(&GraphKind::Ring, n).unwrap(),
        1 => generate(&GraphKind::Path, n).unwrap(),
        2 => generate(&GraphKind::Complete, n).unwrap(),
        3 => {
            let p = (n / 2).max(1);
            generate(&GraphKind::CompleteBipartite { p, q: n - p }, n).unwrap()
        }
        _ => gen_sensor(n, 0.6, 0.4, 0.01, seed).unwrap(),
    }
}

/// A paired basis: DFT for rings, otherwise the normal basis when one exists.
fn paired_basis(pick: u8, n: usize) -> Option<(DMatrix<f64>, FourierBasis)> {
    let kind = match pick % 3 {
        0 => GraphKind::Ring,
        1 => GraphKind::Complete,
        _ => {
            let p = n / 2 + 1;
            GraphKind::CompleteBipartite { p, q: n - p }
        }
    };
    let (l, s) = laplacian_and_spectrum(kind, n);
    if pick.is_multiple_of(3) {
        return Some((l.clone(), dft_basis(n).with_eigenvalues_from(&l)));
    }
    normal_basis(&s, s.default_tol()).ok().map(|b| (l, b))
}

/// Random response with `a_k = conj(a_{p(k)})` and unit modulus.
fn conforming_response(basis: &FourierBasis, r: &mut rand_chacha::ChaCha8Rng) -> Vec<Complex64> {
    let pairing = basis.pairing.as_ref().expect("paired basis");
    let n = basis.n();
    let mut a = vec![c(0.0, 0.0); n];
    for k in 0..n {
        let j = pairing.p[k];
        if j == k {
            a[k] = c(if r.random_bool(0.5) { 1.0 } else { -1.0 }, 0.0);
        } else if k < j {
            a[k] = unit_phase(r.random_range(0.0..2.0 * PI));
            a[j] = a[k].conj();
        }
    }
    a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn laplacian_rows_sum_to_zero(pick in 0u8..5, n in 2usize..40, seed in any::<u64>()) {
        let g = family(pick, n, seed);
        let l = g.laplacian();
        let w = g.adjacency();
        prop_assert_eq!(w.transpose(), w.clone());
        for i in 0..n {
            prop_assert_eq!(w[(i, i)], 0.0);
            prop_assert!(l.row(i).sum().abs() <= 1e-12);
        }
        prop_assert!(w.iter().all(|&x| x >= 0.0));
        prop_assert!(g.is_connected());
    }

    #[test]
    fn circulant_round_trip(n in 3usize..24, raw in prop::collection::vec(0.0f64..3.0, 12)) {
        let mut c = vec![0.0; n];
        for k in 1..=n / 2 {
            c[k] = raw[k % raw.len()];
            c[n - k] = c[k];
        }
        c[1] = c[1].max(0.5);
        c[n - 1] = c[1];
        let v = GeneratingVector::new(c.clone()).unwrap();
        let g = generate(&GraphKind::Circulant(v), n).unwrap();
        let recovered = is_circulant(&g, 0.0).unwrap();
        prop_assert_eq!(recovered.as_slice(), c.as_slice());
    }

    #[test]
    fn sensor_is_pure(n in 2usize..40, seed in any::<u64>()) {
        let a = gen_sensor(n, 0.6, 0.4, 0.01, seed).unwrap();
        let b = gen_sensor(n, 0.6, 0.4, 0.01, seed).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn path_spectrum_closed_form(n in 2usize..=200) {
        let (_, s) = laplacian_and_spectrum(GraphKind::Path, n);
        let expected = path_eigenvalues(n);
        for (got, want) in s.eigenvalues.iter().zip(&expected) {
            prop_assert!((got - want).abs() <= 1e-8, "n={} got {} want {}", n, got, want);
        }
    }

    #[test]
    fn bipartite_spectrum_closed_form(p in 1usize..12, q in 1usize..12) {
        let (_, s) = laplacian_and_spectrum(GraphKind::CompleteBipartite { p, q }, p + q);
        for (got, want) in s.eigenvalues.iter().zip(&bipartite_eigenvalues(p, q)) {
            prop_assert!((got - want).abs() <= 1e-8);
        }
    }

    #[test]
    fn eigendecomposition_reconstructs(pick in 0u8..5, n in 2usize..48, seed in any::<u64>()) {
        let l = family(pick, n, seed).laplacian();
        let s = eigendecompose(&l).unwrap();
        let v = &s.vectors;
        let recon = v * DMatrix::from_diagonal(&s.eigenvalues) * v.transpose();
        let err = (recon - &l).amax();
        prop_assert!(err <= 1e-8 * s.max_eigenvalue().max(1.0), "err {}", err);
    }

    #[test]
    fn normal_basis_pairs_columns(pick in 0u8..5, n in 2usize..24, seed in any::<u64>()) {
        let l = family(pick, n, seed).laplacian();
        let s = eigendecompose(&l).unwrap();
        let support = supports_normal_atomic(&s, s.default_tol());
        let built = normal_basis(&s, s.default_tol());
        prop_assert_eq!(support.supported, built.is_ok());
        if let Ok(b) = built {
            let u = &b.u;
            for k in 1..=n / 2 {
                for i in 0..n {
                    prop_assert!((u[(i, k)] - u[(i, n - k)].conj()).norm() <= 1e-10);
                }
            }
            prop_assert!(distance_to_identity(&(u.adjoint() * u)) <= 1e-10);
        }
    }

    #[test]
    fn dft_columns_are_circulant_eigenvectors(n in 3usize..32, raw in prop::collection::vec(0.0f64..2.0, 16)) {
        let mut c = vec![0.0; n];
        for k in 1..=n / 2 {
            c[k] = raw[k % raw.len()];
            c[n - k] = c[k];
        }
        c[1] = 1.0;
        c[n - 1] = 1.0;
        let l = generate(&GraphKind::Circulant(GeneratingVector::new(c).unwrap()), n).unwrap().laplacian();
        let s = eigendecompose(&l).unwrap();
        let u = dft_basis(n).u;
        let lc = complexify(&l);
        for k in 0..n {
            let col = u.column(k).into_owned();
            let lu = &lc * &col;
            let best = s.eigenvalues.iter().map(|&lam| max_abs_vec(&(&lu - &col * c_re(lam)))).fold(f64::INFINITY, f64::min);
            prop_assert!(best <= 1e-8);
        }
    }

    #[test]
    fn filter_cache_matches_definition(pick in 0u8..5, n in 2usize..24, seed in any::<u64>()) {
        let l = family(pick, n, seed).laplacian();
        let basis = Arc::new(eigendecompose(&l).unwrap().real_basis());
        let mut r = rng(seed);
        let a = random_complex(n, &mut r);
        let f = make_filter(&basis, FrequencyResponse::new(a.clone()).unwrap()).unwrap();
        prop_assert!(max_entry(&(f.matrix() - dense_filter(&basis.u, a.as_slice()))) <= 1e-10);
        prop_assert!(f.cache_residual() <= 1e-10);
    }

    #[test]
    fn filters_commute(pick in 0u8..5, n in 2usize..24, seed in any::<u64>()) {
        let l = family(pick, n, seed).laplacian();
        let basis = Arc::new(eigendecompose(&l).unwrap().real_basis());
        let mut r = rng(seed);
        let fa = make_filter(&basis, FrequencyResponse::from_vec(random_phases(n, &mut r)).unwrap()).unwrap();
        let fb = make_filter(&basis, FrequencyResponse::new(random_complex(n, &mut r)).unwrap()).unwrap();
        let ab = fa.matrix() * fb.matrix();
        let ba = fb.matrix() * fa.matrix();
        prop_assert!(max_entry(&(ab - ba)) <= 1e-10);
    }

    #[test]
    fn classical_degeneration(n in 1usize..=128) {
        let basis = Arc::new(dft_basis(n));
        let f = make_filter(&basis, FrequencyResponse::from_thetas(&classical_thetas(n), ShiftDirection::Down)).unwrap();
        prop_assert!(max_entry(&(f.matrix() - complexify(&classical_shift_matrix(n)))) <= 1e-10);
        prop_assert!(max_entry(&(f.matrix() - downshift(n))) <= 1e-10);
    }

    #[test]
    fn norm_and_smoothness(pick in 0u8..5, n in 2usize..20, seed in any::<u64>(), unit in any::<bool>()) {
        let l = family(pick, n, seed).laplacian();
        let basis = Arc::new(eigendecompose(&l).unwrap().real_basis());
        let mut r = rng(seed);
        let mut a = random_phases(n, &mut r);
        if !unit {
            let k = r.random_range(0..n);
            a[k] *= r.random_range(1.01..2.0);
        }
        let f = make_filter(&basis, FrequencyResponse::from_vec(a.clone()).unwrap()).unwrap();
        let rep = check_properties_with_laplacian(&f, &l, 20, seed, 1e-9);
        let h = dense_filter(&basis.u, &a);
        let lc = complexify(&l);
        let mut operational = true;
        for _ in 0..100 {
            let x = random_complex(n, &mut r);
            let hx = &h * &x;
            operational &= (hx.norm() - x.norm()).abs() <= 1e-9 * x.norm();
            if rep.norm_preserving.holds {
                let sigma = |v: &CVector| (v.adjoint() * &lc * v)[(0, 0)].re;
                prop_assert!((sigma(&hx) - sigma(&x)).abs() <= 1e-9 * sigma(&x).max(1.0));
            }
        }
        prop_assert_eq!(rep.norm_preserving.holds, operational);
        prop_assert_eq!(rep.norm_preserving.holds, unit);
    }

    #[test]
    fn periodicity_iff_roots(n in 2usize..20, seed in any::<u64>(), kind in 0u8..3) {
        let l = ring_laplacian(n);
        let basis = Arc::new(eigendecompose(&l).unwrap().real_basis());
        let mut r = rng(seed);
        let a = match kind {
            0 => permuted_roots(&random_permutation(n, &mut r), c(1.0, 0.0)),
            1 => permuted_roots(&random_permutation(n, &mut r), unit_phase(r.random_range(0.01..2.0 * PI / n as f64 - 0.01))),
            _ => random_phases(n, &mut r),
        };
        prop_assume!(all_distinct(&a, 1e-6));
        let f = make_filter(&basis, FrequencyResponse::from_vec(a.clone()).unwrap()).unwrap();
        let rep = check_properties_with_laplacian(&f, &l, 4, seed, 1e-9);
        let residual = distance_to_identity(&naive_power(&dense_filter(&basis.u, &a), n));
        let criterion = theta_criterion(&a, 1e-9);
        prop_assert_eq!(residual <= 1e-8, criterion);
        prop_assert_eq!(rep.periodic.holds, criterion);
        prop_assert_eq!(criterion, kind == 0);
    }

    #[test]
    fn real_preservation_flips(pick in 0u8..3, n in 3usize..16, seed in any::<u64>(), delta in 0.05f64..3.0) {
        let Some((l, basis)) = paired_basis(pick, n) else { return Ok(()); };
        let basis = Arc::new(basis);
        let mut r = rng(seed);
        let a = conforming_response(&basis, &mut r);
        let f = make_filter(&basis, FrequencyResponse::from_vec(a.clone()).unwrap()).unwrap();
        let rep = check_properties_with_laplacian(&f, &l, 4, seed, 1e-9);
        prop_assert_eq!(rep.structural_real.map(|v| v.holds), Some(true));
        prop_assert!(max_imag(&dense_filter(&basis.u, &a)) <= 1e-10);
        prop_assert!(rep.real_preserving.holds);

        let pairing = basis.pairing.clone().unwrap();
        let k = (1..n).find(|&k| pairing.p[k] != k).unwrap();
        let mut b = a.clone();
        b[k] *= unit_phase(delta);
        let fb = make_filter(&basis, FrequencyResponse::from_vec(b.clone()).unwrap()).unwrap();
        let rep_b = check_properties_with_laplacian(&fb, &l, 4, seed, 1e-9);
        prop_assert_eq!(rep_b.structural_real.map(|v| v.holds), Some(false));
        prop_assert!(max_imag(&dense_filter(&basis.u, &b)) > 1e-10);
        prop_assert!(!rep_b.real_preserving.holds);
    }

    #[test]
    fn expansion_reproduces_target(n in 2usize..=32, seed in any::<u64>()) {
        let basis = Arc::new(dft_basis(n));
        let mut r = rng(seed);
        let a = jittered_roots(n, 0.3, &mut r);
        let f = make_filter(&basis, FrequencyResponse::from_vec(a.clone()).unwrap()).unwrap();
        let b = random_complex(n, &mut r);
        let e = polynomial_expand(&f, &FrequencyResponse::new(b.clone()).unwrap()).unwrap();
        let h = dense_filter(&basis.u, &a);
        let mut acc = CMatrix::zeros(n, n);
        let mut p = CMatrix::identity(n, n);
        for ck in &e.coeffs {
            acc += &p * *ck;
            p = &p * &h;
        }
        prop_assert!(max_entry(&(acc - dense_filter(&basis.u, b.as_slice()))) <= 1e-7);
        prop_assert!(e.operator_residual.unwrap() <= 1e-7);
    }

    #[test]
    fn frame_reconstruction_and_bounds(pick in 0u8..5, n in 2usize..16, seed in any::<u64>(), extra in 0usize..4) {
        let l = family(pick, n, seed).laplacian();
        let s = eigendecompose(&l).unwrap();
        let basis = Arc::new(s.real_basis());
        let mut r = rng(seed);
        let g = random_complex(n, &mut r);
        // First N rows of a (N + extra)-point power matrix: orthonormal rows, J >= N.
        let j = n + extra;
        let full = power_responses(&FrequencyResponse::classical(j, ShiftDirection::Down));
        let a = full.rows(0, n).into_owned();
        let d = build_frame(&basis, &g, &a).unwrap();
        let ghat = basis.u.ad_mul(&d.window);
        let weights: Vec<f64> = (0..n)
            .map(|v| (0..n).map(|k| ghat[k].norm_sqr() * basis.u[(v, k)].norm_sqr()).sum())
            .collect();
        for (w, dw) in weights.iter().zip(d.weights.iter()) {
            prop_assert!((w - dw).abs() <= 1e-12);
        }
        let (alpha, beta) = d.bounds;
        for _ in 0..20 {
            let f = random_complex(n, &mut r);
            let coeffs = analyze(&d, &f).unwrap();
            let back = synthesize(&d, &coeffs).unwrap();
            prop_assert!(max_abs_vec(&(back - &f)) <= 1e-9 * max_abs_vec(&f).max(1.0));
            let energy: f64 = coeffs.iter().map(|z| z.norm_sqr()).sum();
            let fn2 = f.norm_squared();
            let eps = 1e-9 * beta * fn2;
            prop_assert!(alpha * fn2 - eps <= energy && energy <= beta * fn2 + eps);
            let parseval: f64 = (0..n).map(|v| weights[v] * f[v].norm_sqr()).sum();
            prop_assert!((energy - parseval).abs() <= 1e-9 * parseval);
        }
    }

    #[test]
    fn tight_on_dft(n in 2usize..40, seed in any::<u64>()) {
        let basis = Arc::new(dft_basis(n));
        let g = random_complex(n, &mut rng(seed));
        let d = build_frame(&basis, &g, &power_responses(&FrequencyResponse::classical(n, ShiftDirection::Up))).unwrap();
        prop_assert!((d.bounds.0 - d.bounds.1).abs() <= 1e-10);
        prop_assert!((d.bounds.0 - d.window.norm_squared() / n as f64).abs() <= 1e-10);
    }

    #[test]
    fn lemma_iff_gram(n in 2usize..24, seed in any::<u64>(), kind in 0u8..3) {
        let mut r = rng(seed);
        let a = match kind {
            0 => permuted_roots(&random_permutation(n, &mut r), unit_phase(r.random_range(0.0..2.0 * PI))),
            1 => jittered_roots(n, 1e-4, &mut r),
            _ => random_phases(n, &mut r),
        };
        let tol = 1e-9;
        let dec = lemma_unitary_decompose(&FrequencyResponse::from_vec(a.clone()).unwrap(), tol);
        prop_assert_eq!(dec.is_some(), power_gram_residual(&a) <= 10.0 * tol);
        if kind == 0 {
            prop_assert!(dec.is_some());
        }
    }
}

fn c_re(x: f64) -> Complex64 {
    c(x, 0.0)
}
