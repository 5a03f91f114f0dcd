//! Windowed Fourier atoms `g_{a_j,k} = (H_{a_j} g) ⊙ u_k` and the
//! analysis/synthesis pair with per-vertex weights
//! `C_n = sum_l |g_hat(l)|^2 |u_l(n)|^2`.
//!
//! Coefficients are stored as a `J x N` matrix: row `j` is the response
//! column `a_j`, column `k` the basis vector `u_k`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::filters::{is_atomic, FrequencyResponse};
use crate::linalg::{self, CMatrix, GraphSignal};
use crate::spectral::FourierBasis;

/// `C_n` at or below this is treated as zero.
pub const DEGENERATE_WEIGHT: f64 = 1e-12;
/// Tolerance for `A A* = I`.
pub const ROW_ORTHONORMALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameOptions {
    /// Rescale the window to unit norm before building atoms.
    pub normalize_window: bool,
}

impl Default for FrameOptions {
    fn default() -> Self {
        Self {
            normalize_window: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FrameDictionary {
    pub basis: Arc<FourierBasis>,
    /// The window actually used (after optional normalisation).
    pub window: GraphSignal,
    pub window_hat: GraphSignal,
    /// `N x J`, column `j` is the response `a_j`.
    pub responses: CMatrix,
    /// `N x (J N)`, column `j N + k` is `g_{a_j,k}`.
    pub atoms: CMatrix,
    pub weights: DVector<f64>,
    /// `(min C_n, max C_n)`.
    pub bounds: (f64, f64),
    pub normalized: bool,
}

impl FrameDictionary {
    pub fn n(&self) -> usize {
        self.basis.n()
    }

    pub fn j(&self) -> usize {
        self.responses.ncols()
    }

    pub fn is_tight(&self, tol: f64) -> bool {
        (self.bounds.1 - self.bounds.0).abs() <= tol
    }

    pub fn atom(&self, j: usize, k: usize) -> GraphSignal {
        self.atoms.column(j * self.n() + k).into_owned()
    }

    pub fn to_file(&self) -> FrameFile {
        let n = self.n();
        FrameFile {
            n,
            j: self.j(),
            normalized: self.normalized,
            responses_real: (0..n).map(|i| self.responses.row(i).iter().map(|z| z.re).collect()).collect(),
            responses_imag: (0..n).map(|i| self.responses.row(i).iter().map(|z| z.im).collect()).collect(),
            weights: self.weights.iter().copied().collect(),
            bounds: [self.bounds.0, self.bounds.1],
        }
    }
}

/// Frame export: responses (row-major, `N` rows of `J`), weights, bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameFile {
    pub n: usize,
    pub j: usize,
    pub normalized: bool,
    pub responses_real: Vec<Vec<f64>>,
    pub responses_imag: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub bounds: [f64; 2],
}

pub fn build_frame(basis: &Arc<FourierBasis>, g: &GraphSignal, a: &CMatrix) -> Result<FrameDictionary> {
    build_frame_with(basis, g, a, FrameOptions::default())
}

pub fn build_frame_with(
    basis: &Arc<FourierBasis>,
    g: &GraphSignal,
    a: &CMatrix,
    opts: FrameOptions,
) -> Result<FrameDictionary> {
    let n = basis.n();
    if g.len() != n {
        return param(format!("window length {} does not match basis size {n}", g.len()));
    }
    if a.nrows() != n {
        return param(format!("response matrix has {} rows, expected {n}", a.nrows()));
    }
    let j_count = a.ncols();
    if j_count < n {
        // N orthonormal rows cannot live in C^J with J < N.
        return Err(Error::FrameCondition {
            residual: linalg::identity_residual(&(a * a.adjoint())),
        });
    }
    let gram_residual = linalg::identity_residual(&(a * a.adjoint()));
    if gram_residual > ROW_ORTHONORMALITY_TOL {
        return Err(Error::FrameCondition {
            residual: gram_residual,
        });
    }

    let norm = g.norm();
    if !(norm > 0.0 && norm.is_finite()) {
        return param("window must be nonzero and finite");
    }
    let window = if opts.normalize_window { g.unscale(norm) } else { g.clone() };
    let window_hat = basis.u.ad_mul(&window);

    let weights = DVector::from_fn(n, |v, _| {
        (0..n)
            .map(|l| window_hat[l].norm_sqr() * basis.u[(v, l)].norm_sqr())
            .sum::<f64>()
    });
    if let Some((v, &w)) = weights.iter().enumerate().find(|(_, &w)| w <= DEGENERATE_WEIGHT) {
        return Err(Error::DegenerateWindow { vertex: v + 1, weight: w });
    }

    let mut atoms = CMatrix::zeros(n, j_count * n);
    for j in 0..j_count {
        // H_{a_j} g = U (a_j ⊙ g_hat)
        let shifted_hat = a.column(j).component_mul(&window_hat);
        let shifted = &basis.u * shifted_hat;
        for k in 0..n {
            let atom = shifted.component_mul(&basis.u.column(k));
            atoms.set_column(j * n + k, &atom);
        }
    }

    let bounds = (weights.min(), weights.max());
    Ok(FrameDictionary {
        basis: Arc::clone(basis),
        window,
        window_hat,
        responses: a.clone(),
        atoms,
        weights,
        bounds,
        normalized: opts.normalize_window,
    })
}

/// Column `j` is `(a_1^j, ..., a_N^j) / sqrt N` (0-based `j`).
pub fn power_responses(a: &FrequencyResponse) -> CMatrix {
    let n = a.len();
    let scale = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, n, |row, j| a.0[row].powu(j as u32) * scale)
}

/// `power_responses(a) = P U C` with `U` the DFT matrix and
/// `C = diag(1, c, ..., c^{N-1})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaDecomposition {
    /// `a_n = c * omega^{permutation[n]}`; `P` has a one at `(n, permutation[n])`.
    pub permutation: Vec<usize>,
    pub c: Complex64,
    /// `||P U C - A||_max`.
    pub reproduction_error: f64,
}

impl LemmaDecomposition {
    pub fn permutation_matrix(&self) -> CMatrix {
        let n = self.permutation.len();
        CMatrix::from_fn(n, n, |i, j| {
            if self.permutation[i] == j {
                linalg::ONE
            } else {
                linalg::ZERO
            }
        })
    }
}

/// Recovers `(P, c)` when the power matrix of `a` is unitary: all `|a_k| = 1`
/// and the sorted phases step by exactly `2 pi / N`.
pub fn lemma_unitary_decompose(a: &FrequencyResponse, tol: f64) -> Option<LemmaDecomposition> {
    let n = a.len();
    if n == 0 || !is_atomic(a, tol).holds {
        return None;
    }
    let v = a.as_slice();
    if v.iter().any(|z| (z.norm() - 1.0).abs() > tol) {
        return None;
    }
    let phases: Vec<f64> = v.iter().map(|z| z.arg().rem_euclid(2.0 * PI)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| phases[x].total_cmp(&phases[y]));
    let step = 2.0 * PI / n as f64;
    if order.windows(2).any(|w| (phases[w[1]] - phases[w[0]] - step).abs() > tol) {
        return None;
    }

    let c = v[order[0]];
    let mut permutation = vec![0; n];
    for (rank, &idx) in order.iter().enumerate() {
        permutation[idx] = rank;
    }
    let mut dec = LemmaDecomposition {
        permutation,
        c,
        reproduction_error: 0.0,
    };
    let dft = crate::spectral::dft_basis(n).u;
    let cdiag = CMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |j, _| c.powu(j as u32)));
    let recon = dec.permutation_matrix() * dft * cdiag;
    dec.reproduction_error = linalg::max_abs(&(recon - power_responses(a)));
    (dec.reproduction_error <= tol.max(1e-10)).then_some(dec)
}

/// `c_{j,k} = <f, g_{a_j,k}> = g_{a_j,k}* f`, as a `J x N` matrix.
pub fn analyze(d: &FrameDictionary, f: &GraphSignal) -> Result<CMatrix> {
    let n = d.n();
    if f.len() != n {
        return param(format!("signal length {} does not match frame size {n}", f.len()));
    }
    let flat = d.atoms.ad_mul(f);
    Ok(CMatrix::from_fn(d.j(), n, |j, k| flat[j * n + k]))
}

/// `f(n) = (1 / C_n) sum_{j,k} c_{j,k} g_{a_j,k}(n)`.
pub fn synthesize(d: &FrameDictionary, coeffs: &CMatrix) -> Result<GraphSignal> {
    let n = d.n();
    if coeffs.nrows() != d.j() || coeffs.ncols() != n {
        return param(format!(
            "coefficient matrix is {}x{}, expected {}x{n}",
            coeffs.nrows(),
            coeffs.ncols(),
            d.j()
        ));
    }
    let flat = GraphSignal::from_fn(d.j() * n, |idx, _| coeffs[(idx / n, idx % n)]);
    let mut out = &d.atoms * flat;
    for (z, w) in out.iter_mut().zip(d.weights.iter()) {
        *z /= *w;
    }
    Ok(out)
}

/// CSV with header `j,k,re,im`; indices 0-based.
pub fn coefficients_csv(coeffs: &CMatrix) -> String {
    let mut s = String::from("j,k,re,im\n");
    for j in 0..coeffs.nrows() {
        for k in 0..coeffs.ncols() {
            let z = coeffs[(j, k)];
            let _ = writeln!(s, "{j},{k},{:e},{:e}", z.re, z.im);
        }
    }
    s
}

pub fn parse_coefficients_csv(text: &str, j_count: usize, n: usize) -> Result<CMatrix> {
    let mut out = CMatrix::zeros(j_count, n);
    let mut seen = vec![false; j_count * n];
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == "j,k,re,im" => {}
        _ => return param("coefficient CSV must start with the header j,k,re,im"),
    }
    for (lineno, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = || Error::Parameter(format!("coefficient CSV line {}: {line:?}", lineno + 2));
        if fields.len() != 4 {
            return Err(bad());
        }
        let j: usize = fields[0].parse().map_err(|_| bad())?;
        let k: usize = fields[1].parse().map_err(|_| bad())?;
        let re: f64 = fields[2].parse().map_err(|_| bad())?;
        let im: f64 = fields[3].parse().map_err(|_| bad())?;
        if j >= j_count || k >= n || std::mem::replace(&mut seen[j * n + k], true) {
            return Err(bad());
        }
        out[(j, k)] = Complex64::new(re, im);
    }
    if seen.iter().any(|s| !s) {
        return param("coefficient CSV is missing entries");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};
    use crate::spectral::{dft_basis, eigendecompose};
    use crate::linalg::CVector;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn omega_powers(n: usize) -> CMatrix {
        power_responses(&FrequencyResponse::classical(n, crate::filters::ShiftDirection::Up))
    }

    #[test]
    fn dft_frame_is_tight() {
        let n = 12;
        let basis = Arc::new(dft_basis(n));
        let g = CVector::from_fn(n, |i, _| c((i as f64 * 0.4).cos() + 1.5, 0.2 * i as f64));
        let opts = FrameOptions { normalize_window: false };
        let d = build_frame_with(&basis, &g, &omega_powers(n), opts).unwrap();
        let expect = g.norm_squared() / n as f64;
        for w in d.weights.iter() {
            assert!((w - expect).abs() <= 1e-12);
        }
        assert!(d.is_tight(1e-12));
    }

    #[test]
    fn constant_window_gives_unit_weights() {
        let s = eigendecompose(&generate(&GraphKind::Path, 7).unwrap().laplacian()).unwrap();
        let basis = Arc::new(s.real_basis());
        let g = basis.column(0) * c(7f64.sqrt(), 0.0);
        let opts = FrameOptions { normalize_window: false };
        let d = build_frame_with(&basis, &g, &omega_powers(7), opts).unwrap();
        for w in d.weights.iter() {
            assert!((w - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn window_on_vanishing_eigenvector_is_degenerate() {
        // Path N = 3: the lambda = 1 eigenvector (1, 0, -1)/sqrt 2 vanishes at vertex 2.
        let s = eigendecompose(&generate(&GraphKind::Path, 3).unwrap().laplacian()).unwrap();
        let basis = Arc::new(s.real_basis());
        let g = basis.column(1);
        match build_frame(&basis, &g, &omega_powers(3)) {
            Err(Error::DegenerateWindow { vertex, weight }) => {
                assert_eq!(vertex, 2);
                assert!(weight <= DEGENERATE_WEIGHT);
            }
            other => panic!("expected degenerate window, got {other:?}"),
        }
    }

    #[test]
    fn non_orthonormal_rows_rejected() {
        let basis = Arc::new(dft_basis(4));
        let g = CVector::from_element(4, c(1.0, 0.0));
        let a = FrequencyResponse::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.5, 0.5)]).unwrap();
        assert!(matches!(
            build_frame(&basis, &g, &power_responses(&a)),
            Err(Error::FrameCondition { .. })
        ));
        let narrow = CMatrix::identity(4, 3);
        assert!(matches!(build_frame(&basis, &g, &narrow), Err(Error::FrameCondition { .. })));
    }

    #[test]
    fn power_response_examples() {
        assert_eq!(power_responses(&FrequencyResponse::from_vec(vec![c(1.0, 0.0)]).unwrap())[(0, 0)], c(1.0, 0.0));
        let a2 = power_responses(&FrequencyResponse::from_vec(vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let want = CMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)]);
        assert!(linalg::max_abs(&(a2.clone() - want)) < 1e-15);
        assert!(linalg::unitarity_residual(&a2) < 1e-15);
        assert!(linalg::unitarity_residual(&omega_powers(9)) < 1e-12);
    }

    #[test]
    fn lemma_examples() {
        let w = |k: usize| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 4.0);
        let a = FrequencyResponse::from_vec(vec![w(0), w(1), w(2), w(3)]).unwrap();
        let d = lemma_unitary_decompose(&a, 1e-9).unwrap();
        assert_eq!(d.permutation, vec![0, 1, 2, 3]);
        assert!((d.c - c(1.0, 0.0)).norm() < 1e-15);

        let a = FrequencyResponse::from_vec(vec![w(3), w(0), w(1), w(2)]).unwrap();
        let d = lemma_unitary_decompose(&a, 1e-9).unwrap();
        assert_eq!(d.permutation, vec![3, 0, 1, 2]);
        assert!((d.c - c(1.0, 0.0)).norm() < 1e-15);
        assert!(d.reproduction_error <= 1e-12);

        let bad = FrequencyResponse::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]).unwrap();
        assert!(lemma_unitary_decompose(&bad, 1e-9).is_none());
    }

    #[test]
    fn analysis_synthesis_basics() {
        let n = 8;
        let basis = Arc::new(dft_basis(n));
        let g = CVector::from_fn(n, |i, _| c((-(i as f64 - 4.0).powi(2) / 4.0).exp(), 0.0));
        let d = build_frame(&basis, &g, &omega_powers(n)).unwrap();
        let zero = analyze(&d, &CVector::zeros(n)).unwrap();
        assert!(zero.iter().all(|z| *z == linalg::ZERO));
        assert!(synthesize(&d, &CMatrix::zeros(n, n)).unwrap().iter().all(|z| *z == linalg::ZERO));
        assert!(synthesize(&d, &CMatrix::zeros(n - 1, n)).is_err());
        assert!(analyze(&d, &CVector::zeros(n + 1)).is_err());
        // Atom layout.
        let atom = d.atom(2, 5);
        assert_eq!(atom, d.atoms.column(2 * n + 5).into_owned());
    }

    #[test]
    fn coefficient_csv_round_trip() {
        let m = CMatrix::from_fn(2, 3, |j, k| c(j as f64 + 0.5, -(k as f64) * 1e-3));
        let text = coefficients_csv(&m);
        assert!(text.starts_with("j,k,re,im\n0,0,"));
        assert_eq!(parse_coefficients_csv(&text, 2, 3).unwrap(), m);
        assert!(parse_coefficients_csv("j,k,re,im\n0,0,1,0\n", 2, 3).is_err());
    }
}
