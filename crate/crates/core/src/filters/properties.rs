use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{detect_conjugate_pairing, is_atomic, smoothness, theta_set_is_roots, Filter};
use crate::linalg;

/// A boolean verdict and the number that decided it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: f64,
}

impl Verdict {
    fn at_most(witness: f64, tol: f64) -> Self {
        Self {
            holds: witness <= tol,
            witness,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Periodicity {
    /// Phases of `a` are exactly the N-th roots of unity (and `|a_k| = 1`).
    pub holds: bool,
    /// Largest deviation of `|a_k|` from 1 or of a phase from its grid point.
    pub theta_deviation: f64,
    /// `||H^N - I||_max` computed by repeated squaring of the dense operator.
    pub matrix_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub n: usize,
    pub tol: f64,
    /// Witness: minimum pairwise gap between response components.
    pub atomic: Verdict,
    /// Witness: `max ||a_k| - 1|`.
    pub norm_preserving: Verdict,
    /// Witness: max relative change of `x* L x` over the sampled signals.
    /// Only the sampled direction is checked. `None` without a Laplacian.
    pub smoothness_preserving_sampled: Option<Verdict>,
    pub periodic: Periodicity,
    /// Witness: `max |Im H_ij|`.
    pub real_preserving: Verdict,
    /// Conjugate-pairing condition on the response, when the basis has a pairing.
    /// Witness: `max(|Im a_1|, max_k |a_k - conj(a_{p(k)})|)`.
    pub structural_real: Option<Verdict>,
    /// Witness: largest deviation from a monomial 0/unit-modulus pattern.
    pub permutation: Verdict,
    pub normal: bool,
    pub trials: usize,
    pub seed: u64,
}

/// Runs the property battery using the Laplacian implied by the basis
/// eigenvalues, if the basis has them.
pub fn check_properties(f: &Filter, trials: usize, seed: u64, tol: f64) -> PropertyReport {
    let l = f.basis().laplacian();
    run(f, l.as_ref(), trials, seed, tol)
}

pub fn check_properties_with_laplacian(
    f: &Filter,
    l: &DMatrix<f64>,
    trials: usize,
    seed: u64,
    tol: f64,
) -> PropertyReport {
    run(f, Some(l), trials, seed, tol)
}

fn run(f: &Filter, l: Option<&DMatrix<f64>>, trials: usize, seed: u64, tol: f64) -> PropertyReport {
    let n = f.n();
    let a = f.response();
    let h = f.matrix();

    let atomic = is_atomic(a, tol);
    let modulus_dev = a.as_slice().iter().fold(0.0f64, |m, z| m.max((z.norm() - 1.0).abs()));
    let norm_preserving = Verdict::at_most(modulus_dev, tol);

    let smoothness_preserving_sampled = l.map(|l| {
        let mut worst: f64 = 0.0;
        for x in crate::signals::random_complex(n, trials, seed) {
            let hx = h * &x;
            let before = smoothness(l, &x).expect("sizes checked");
            let after = smoothness(l, &hx).expect("sizes checked");
            worst = worst.max((after - before).abs() / before.abs().max(1.0));
        }
        Verdict::at_most(worst, tol)
    });

    let thetas: Vec<f64> = a.as_slice().iter().map(|z| -z.arg()).collect();
    let (roots, phase_dev) = theta_set_is_roots(&thetas, tol);
    let theta_deviation = phase_dev.max(modulus_dev);
    let periodic = Periodicity {
        holds: roots && modulus_dev <= tol,
        theta_deviation,
        matrix_residual: linalg::identity_residual(&linalg::matrix_power(h, n)),
    };

    let max_imag = h.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
    let real_preserving = Verdict::at_most(max_imag, tol);

    let structural_real = f
        .basis()
        .pairing
        .clone()
        .or_else(|| detect_conjugate_pairing(f.basis(), tol))
        .map(|pairing| {
            let v = a.as_slice();
            let mut worst = v[0].im.abs();
            for k in 1..n {
                worst = worst.max((v[k] - v[pairing.p[k]].conj()).norm());
            }
            Verdict::at_most(worst, tol)
        });

    let permutation = Verdict::at_most(monomial_deviation(h, tol), tol);

    PropertyReport {
        n,
        tol,
        normal: atomic.holds && norm_preserving.holds && real_preserving.holds,
        atomic,
        norm_preserving,
        smoothness_preserving_sampled,
        periodic,
        real_preserving,
        structural_real,
        permutation,
        trials,
        seed,
    }
}

/// For every row and column: one entry of modulus near 1, the rest near 0.
/// Returns the largest deviation found (infinite if some line has no
/// candidate or more than one).
fn monomial_deviation(h: &crate::linalg::CMatrix, tol: f64) -> f64 {
    let n = h.nrows();
    let mut worst: f64 = 0.0;
    let mut cols_hit = vec![0usize; n];
    for i in 0..n {
        let mut hits = 0;
        for j in 0..n {
            let m = h[(i, j)].norm();
            if (m - 1.0).abs() <= tol.max(0.5) {
                hits += 1;
                cols_hit[j] += 1;
                worst = worst.max((m - 1.0).abs());
            } else {
                worst = worst.max(m);
            }
        }
        if hits != 1 {
            return f64::INFINITY;
        }
    }
    if cols_hit.iter().any(|&c| c != 1) {
        return f64::INFINITY;
    }
    worst
}
