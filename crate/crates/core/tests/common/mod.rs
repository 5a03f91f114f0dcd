//! Independent reference computations shared by the integration tests.
//! Nothing here calls into the library's numerical routines.
#![allow(dead_code)]

use std::f64::consts::PI;

use atomic_filters::CMatrix;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Entrywise `sum_k u_ik a_k conj(u_jk)`.
pub fn dense_filter(u: &CMatrix, a: &[Complex64]) -> CMatrix {
    let n = u.nrows();
    CMatrix::from_fn(n, n, |i, j| (0..n).map(|k| u[(i, k)] * a[k] * u[(j, k)].conj()).sum())
}

pub fn max_entry(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_imag(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
}

/// `||A - I||_max`.
pub fn distance_to_identity(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((m[(i, j)] - target).norm());
        }
    }
    worst
}

/// Naive repeated multiplication.
pub fn naive_power(m: &CMatrix, p: usize) -> CMatrix {
    let mut out = CMatrix::identity(m.nrows(), m.ncols());
    for _ in 0..p {
        out = &out * m;
    }
    out
}

/// Pairwise distinctness by checking every pair.
pub fn all_distinct(a: &[Complex64], tol: f64) -> bool {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if (a[i] - a[j]).norm() <= tol {
                return false;
            }
        }
    }
    true
}

/// `{theta_k} = {2 pi (k-1)/N}` checked by sorting, with `|a_k| = 1`.
pub fn theta_criterion(a: &[Complex64], tol: f64) -> bool {
    let n = a.len();
    if a.iter().any(|z| (z.norm() - 1.0).abs() > tol) {
        return false;
    }
    let mut thetas: Vec<f64> = a.iter().map(|z| (-z.arg()).rem_euclid(2.0 * PI)).collect();
    // Phases within tol of 2 pi belong to the grid point 0.
    for t in thetas.iter_mut() {
        if 2.0 * PI - *t <= tol {
            *t = 0.0;
        }
    }
    thetas.sort_by(f64::total_cmp);
    thetas
        .iter()
        .enumerate()
        .all(|(k, t)| (t - 2.0 * PI * k as f64 / n as f64).abs() <= tol)
}

pub fn path_eigenvalues(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 - 2.0 * (k as f64 * PI / n as f64).cos()).collect()
}

/// `{0, p x (q-1)... }`: the multiset for K(p, q), sorted.
pub fn bipartite_eigenvalues(p: usize, q: usize) -> Vec<f64> {
    let mut v = vec![0.0];
    v.extend(std::iter::repeat_n(p as f64, q - 1));
    v.extend(std::iter::repeat_n(q as f64, p - 1));
    v.push((p + q) as f64);
    v.sort_by(f64::total_cmp);
    v
}

pub fn ring_laplacian(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0
        } else if (i + 1) % n == j || (j + 1) % n == i {
            -1.0
        } else {
            0.0
        }
    })
}

/// `(x S)(i) = x(i - 1)` as an explicit matrix.
pub fn downshift(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| if (j + 1) % n == i { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

pub fn unit_phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

pub fn random_phases(n: usize, r: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..n).map(|_| unit_phase(r.random_range(0.0..2.0 * PI))).collect()
}

pub fn random_complex(n: usize, r: &mut ChaCha8Rng) -> DVector<Complex64> {
    DVector::from_fn(n, |_, _| c(r.sample(StandardNormal), r.sample(StandardNormal)))
}

/// Fisher-Yates.
pub fn random_permutation(n: usize, r: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = r.random_range(0..=i);
        p.swap(i, j);
    }
    p
}

/// `c * omega^{perm[n]}` with `omega = e^{i 2 pi / N}`.
pub fn permuted_roots(perm: &[usize], scale: Complex64) -> Vec<Complex64> {
    let n = perm.len();
    perm.iter()
        .map(|&k| scale * unit_phase(2.0 * PI * k as f64 / n as f64))
        .collect()
}

/// Roots of unity with each phase moved by up to `jitter` grid steps, shuffled.
pub fn jittered_roots(n: usize, jitter: f64, r: &mut ChaCha8Rng) -> Vec<Complex64> {
    let perm = random_permutation(n, r);
    perm.iter()
        .map(|&k| unit_phase(2.0 * PI * (k as f64 + r.random_range(-jitter..=jitter)) / n as f64))
        .collect()
}

/// `||A* A - I||_max` for the matrix with columns `a^j / sqrt N`.
pub fn power_gram_residual(a: &[Complex64]) -> f64 {
    let n = a.len();
    let m = CMatrix::from_fn(n, n, |row, j| a[row].powu(j as u32) / (n as f64).sqrt());
    distance_to_identity(&(m.adjoint() * m))
}
