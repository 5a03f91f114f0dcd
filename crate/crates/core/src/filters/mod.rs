//! Graph filters `H_a = U diag(a) U*` and atomic filters (filters whose
//! frequency response has pairwise-distinct components, so that every other
//! filter on the same basis is a polynomial in them).

mod comparison;
mod expand;
mod properties;
mod spec;

pub use comparison::{comparison_shift, ComparisonKind, ComparisonShift};
pub use expand::{polynomial_expand, Expansion};
pub use properties::{check_properties, check_properties_with_laplacian, Periodicity, PropertyReport, Verdict};
pub use spec::{ComparisonSpec, FilterKind, FilterSpec};

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::linalg::{self, CMatrix, CVector, GraphSignal};
use crate::spectral::{FourierBasis, Pairing};

/// Default tolerance for every filter verdict.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyResponse(pub CVector);

impl FrequencyResponse {
    pub fn new(a: CVector) -> Result<Self> {
        if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return param("frequency response has non-finite entries");
        }
        Ok(Self(a))
    }

    pub fn from_vec(a: Vec<Complex64>) -> Result<Self> {
        Self::new(CVector::from_vec(a))
    }

    /// `a_k = exp(-i theta_k)` for [`ShiftDirection::Down`], `exp(+i theta_k)` for `Up`.
    pub fn from_thetas(thetas: &[f64], direction: ShiftDirection) -> Self {
        let sign = direction.sign();
        Self(CVector::from_iterator(
            thetas.len(),
            thetas.iter().map(|&t| Complex64::from_polar(1.0, sign * t)),
        ))
    }

    /// `theta_k = 2 pi (k-1) / N`: the classical shift on a circulant graph.
    pub fn classical(n: usize, direction: ShiftDirection) -> Self {
        Self::from_thetas(&classical_thetas(n), direction)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        self.0.as_slice()
    }
}

pub fn classical_thetas(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}

/// Which way the classical shift moves a signal. `Down` (`a_k = e^{-i theta_k}`)
/// gives `(Hx)(n) = x(n-1)`; `Up` conjugates the response.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftDirection {
    #[default]
    Down,
    Up,
}

impl ShiftDirection {
    fn sign(self) -> f64 {
        match self {
            ShiftDirection::Down => -1.0,
            ShiftDirection::Up => 1.0,
        }
    }
}

/// A frequency response bound to a basis. The dense operator is built on
/// first use and cached.
#[derive(Debug, Clone)]
pub struct Filter {
    basis: Arc<FourierBasis>,
    response: FrequencyResponse,
    matrix: OnceLock<CMatrix>,
}

impl Filter {
    pub fn basis(&self) -> &Arc<FourierBasis> {
        &self.basis
    }

    pub fn response(&self) -> &FrequencyResponse {
        &self.response
    }

    pub fn n(&self) -> usize {
        self.response.len()
    }

    /// `U diag(a) U*`.
    pub fn matrix(&self) -> &CMatrix {
        self.matrix
            .get_or_init(|| linalg::conjugate_diag(&self.basis.u, &self.response.0))
    }

    /// Max deviation of the cached operator from a fresh `U diag(a) U*`.
    pub fn cache_residual(&self) -> f64 {
        let fresh = linalg::conjugate_diag(&self.basis.u, &self.response.0);
        linalg::max_abs(&(self.matrix() - fresh))
    }
}

pub fn make_filter(basis: &Arc<FourierBasis>, a: FrequencyResponse) -> Result<Filter> {
    if a.len() != basis.n() {
        return param(format!("response length {} does not match basis size {}", a.len(), basis.n()));
    }
    Ok(Filter {
        basis: Arc::clone(basis),
        response: a,
        matrix: OnceLock::new(),
    })
}

/// A filter built from phases together with the normality/periodicity flags
/// for a conjugate-paired basis.
#[derive(Debug, Clone)]
pub struct ThetaFilter {
    pub filter: Filter,
    pub atomic: Verdict,
    /// `theta_1 = 0` and `theta_{N+2-k} + theta_k = 2 pi` for `k = 2..floor(N/2)+1`.
    pub normal_condition: bool,
    /// The phases are exactly `{2 pi (k-1) / N}` as a set.
    pub periodic_condition: bool,
}

pub fn make_from_thetas(basis: &Arc<FourierBasis>, thetas: &[f64], direction: ShiftDirection) -> Result<ThetaFilter> {
    make_from_thetas_tol(basis, thetas, direction, DEFAULT_TOL)
}

pub fn make_from_thetas_tol(
    basis: &Arc<FourierBasis>,
    thetas: &[f64],
    direction: ShiftDirection,
    tol: f64,
) -> Result<ThetaFilter> {
    if let Some(t) = thetas.iter().find(|t| !(0.0..2.0 * PI).contains(*t)) {
        return param(format!("theta {t} outside [0, 2 pi)"));
    }
    let response = FrequencyResponse::from_thetas(thetas, direction);
    let atomic = is_atomic(&response, tol);
    let filter = make_filter(basis, response)?;
    let n = thetas.len();
    let normal_condition = thetas[0].abs() <= tol
        && (2..=n / 2 + 1).all(|k| (thetas[n + 1 - k] + thetas[k - 1] - 2.0 * PI).abs() <= tol);
    Ok(ThetaFilter {
        filter,
        atomic,
        normal_condition,
        periodic_condition: theta_set_is_roots(thetas, tol).0,
    })
}

/// Whether `{theta_k}` equals `{2 pi (k-1)/N}` as a set, with the largest
/// angular distance to the matched grid point. Phases are taken mod 2 pi.
pub(crate) fn theta_set_is_roots(thetas: &[f64], tol: f64) -> (bool, f64) {
    let n = thetas.len();
    let step = 2.0 * PI / n as f64;
    let mut hit = vec![false; n];
    let mut worst: f64 = 0.0;
    let mut distinct = true;
    for &t in thetas {
        let t = t.rem_euclid(2.0 * PI);
        let m = (t / step).round();
        worst = worst.max((t - m * step).abs());
        let idx = (m as usize) % n;
        if std::mem::replace(&mut hit[idx], true) {
            distinct = false;
        }
    }
    (distinct && worst <= tol, worst)
}

/// `U diag(a^power) U* x` via forward GFT, componentwise scaling, inverse GFT.
pub fn apply(f: &Filter, x: &GraphSignal, power: u32) -> Result<GraphSignal> {
    if x.len() != f.n() {
        return param(format!("signal length {} does not match filter size {}", x.len(), f.n()));
    }
    if power == 0 {
        return Ok(x.clone());
    }
    let u = &f.basis.u;
    let mut hat = u.ad_mul(x);
    for (h, a) in hat.iter_mut().zip(f.response.0.iter()) {
        *h *= a.powu(power);
    }
    Ok(u * hat)
}

/// Atomicity verdict with the minimum pairwise distance between response components.
pub fn is_atomic(a: &FrequencyResponse, tol: f64) -> Verdict {
    let v = a.as_slice();
    let mut gap = f64::INFINITY;
    for j in 0..v.len() {
        for k in (j + 1)..v.len() {
            gap = gap.min((v[j] - v[k]).norm());
        }
    }
    Verdict {
        holds: gap > tol,
        witness: gap,
    }
}

/// Finds `p, c` with `u_k = c_k conj(u_{p(k)})` from the column pattern of
/// `G = U^T U`: every column must have a single entry of modulus `>= 1 - tol`
/// with all others `<= tol`, and the resulting map must be an involution.
pub fn detect_conjugate_pairing(basis: &FourierBasis, tol: f64) -> Option<Pairing> {
    let n = basis.n();
    let g = basis.u.transpose() * &basis.u;
    let mut p = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    for k in 0..n {
        let mut found = None;
        for j in 0..n {
            let m = g[(j, k)].norm();
            if m >= 1.0 - tol {
                if found.is_some() {
                    return None;
                }
                found = Some(j);
            } else if m > tol {
                return None;
            }
        }
        let j = found?;
        // u_1 must be self-paired.
        if (k == 0) != (j == 0) {
            return None;
        }
        p.push(j);
        let z = g[(j, k)];
        c.push(z / z.norm());
    }
    let pairing = Pairing { p, c };
    pairing.is_involution().then_some(pairing)
}

/// `sigma(x) = x* L x`.
pub fn smoothness(l: &DMatrix<f64>, x: &GraphSignal) -> Result<f64> {
    if l.nrows() != x.len() || l.ncols() != x.len() {
        return param(format!("signal length {} does not match Laplacian size {}", x.len(), l.nrows()));
    }
    let lx = linalg::complexify(l) * x;
    Ok(x.dotc(&lx).re)
}

/// `sum_k lambda_k |x_hat(k)|^2`; needs eigenvalues on the basis.
pub fn smoothness_spectral(basis: &FourierBasis, x: &GraphSignal) -> Result<f64> {
    let Some(ev) = &basis.eigenvalues else {
        return param("basis carries no eigenvalues");
    };
    if x.len() != basis.n() {
        return param(format!("signal length {} does not match basis size {}", x.len(), basis.n()));
    }
    let hat = basis.u.ad_mul(x);
    Ok(hat.iter().zip(ev.iter()).map(|(z, l)| l * z.norm_sqr()).sum())
}

/// Downshift permutation: `(Sx)_m = x_{m-1 mod n}`.
pub fn classical_shift_matrix(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| if j == (i + n - 1) % n { 1.0 } else { 0.0 })
}
