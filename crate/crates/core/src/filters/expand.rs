use num_complex::Complex64;
use serde::Serialize;

use super::{is_atomic, Filter, FrequencyResponse, DEFAULT_TOL};
use crate::error::{param, Error, Result};
use crate::linalg::{self, CMatrix};

/// Largest N for which the operator-level check `sum c_k H_a^k` is evaluated.
const OPERATOR_CHECK_MAX_N: usize = 64;

/// Coefficients of `H_b = sum_k c_k H_a^k`.
#[derive(Debug, Clone, Serialize)]
pub struct Expansion {
    pub coeffs: Vec<Complex64>,
    /// `||V c - b||_inf` for the Vandermonde system.
    pub residual: f64,
    /// `||sum_k c_k H_a^k - H_b||_max`; skipped above N = 64.
    pub operator_residual: Option<f64>,
    /// Set when `residual > 1e-6 * ||b||_inf`.
    pub ill_conditioned: bool,
}

/// Solves `V(a) c = b` (row n is `1, a_n, ..., a_n^{N-1}`) with LU and
/// partial pivoting.
pub fn polynomial_expand(s: &Filter, b: &FrequencyResponse) -> Result<Expansion> {
    let a = s.response();
    let n = a.len();
    if b.len() != n {
        return param(format!("target response length {} does not match filter size {n}", b.len()));
    }
    let atomic = is_atomic(a, DEFAULT_TOL);
    if !atomic.holds {
        return Err(Error::NotAtomic { min_gap: atomic.witness });
    }

    let v = CMatrix::from_fn(n, n, |row, k| a.0[row].powu(k as u32));
    let coeffs = v
        .clone()
        .lu()
        .solve(&b.0)
        .ok_or(Error::NotAtomic { min_gap: atomic.witness })?;
    let residual = linalg::max_abs_vec(&(&v * &coeffs - &b.0));
    let b_inf = linalg::max_abs_vec(&b.0);

    let operator_residual = (n <= OPERATOR_CHECK_MAX_N).then(|| {
        let h = s.matrix();
        // Horner: (((c_{N-1} H + c_{N-2}) H + ...) H + c_0).
        let mut acc = CMatrix::zeros(n, n);
        for c in coeffs.iter().rev() {
            acc = &acc * h;
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        let hb = linalg::conjugate_diag(&s.basis().u, &b.0);
        linalg::max_abs(&(acc - hb))
    });

    Ok(Expansion {
        coeffs: coeffs.iter().copied().collect(),
        residual,
        operator_residual,
        ill_conditioned: residual > 1e-6 * b_inf,
    })
}
