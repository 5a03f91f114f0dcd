//! Laplacian spectra and graph Fourier bases.
//!
//! [`eigendecompose`] produces the real orthonormal eigenbasis. From it,
//! [`normal_basis`] builds a complex basis whose columns come in conjugate
//! pairs `u_k = conj(u_{N+2-k})` (1-based), which is what real-preserving,
//! norm-preserving atomic filters need. [`dft_basis`] is the classical
//! Fourier basis that diagonalises every circulant graph.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::linalg::{self, CMatrix, CVector, GraphSignal};

/// Ascending Laplacian eigenvalues with real orthonormal eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct RealSpectrum {
    pub eigenvalues: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

impl RealSpectrum {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.n() - 1]
    }

    /// `1e-8 * max(1, lambda_N)`.
    pub fn default_tol(&self) -> f64 {
        1e-8 * self.max_eigenvalue().max(1.0)
    }

    /// The real eigenbasis as a [`FourierBasis`] (trivially self-paired).
    pub fn real_basis(&self) -> FourierBasis {
        let n = self.n();
        FourierBasis {
            u: linalg::complexify(&self.vectors),
            eigenvalues: Some(self.eigenvalues.clone()),
            pairing: Some(Pairing::identity(n)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Solver {
    /// Cyclic Jacobi rotations.
    Jacobi,
    /// Householder tridiagonalisation + implicit QL.
    #[default]
    TridiagonalQl,
}

pub fn eigendecompose(l: &DMatrix<f64>) -> Result<RealSpectrum> {
    eigendecompose_with(l, Solver::default())
}

pub fn eigendecompose_with(l: &DMatrix<f64>, solver: Solver) -> Result<RealSpectrum> {
    let n = l.nrows();
    if n == 0 || l.ncols() != n {
        return param(format!("Laplacian must be square and nonempty, got {}x{}", n, l.ncols()));
    }
    let scale = linalg::max_abs_real(l).max(1.0);
    for i in 0..n {
        for j in (i + 1)..n {
            if (l[(i, j)] - l[(j, i)]).abs() > 1e-12 * scale {
                return param(format!("Laplacian not symmetric at ({}, {})", i + 1, j + 1));
            }
        }
    }

    let eig = match solver {
        Solver::Jacobi => linalg::jacobi_eigen(l),
        Solver::TridiagonalQl => linalg::tridiagonal_ql_eigen(l),
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.values[a].total_cmp(&eig.values[b]).then(a.cmp(&b)));
    let mut values = DVector::from_iterator(n, order.iter().map(|&k| eig.values[k]));
    let mut vectors = DMatrix::from_fn(n, n, |i, j| eig.vectors[(i, order[j])]);

    let lambda_max = values[n - 1].max(1.0);
    if values[0].abs() > 1e-9 * lambda_max {
        return Err(Error::Structure(format!(
            "smallest eigenvalue {:e} is not zero; input is not a graph Laplacian",
            values[0]
        )));
    }
    if n > 1 && values[1] <= 1e-8 * lambda_max {
        return Err(Error::Structure(format!(
            "lambda_2 = {:e}: graph is disconnected",
            values[1]
        )));
    }

    // Sign convention: the first entry that is clearly nonzero is positive.
    for mut col in vectors.column_iter_mut() {
        let peak = col.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if let Some(&first) = col.iter().find(|x| x.abs() > 1e-8 * peak) {
            if first < 0.0 {
                col.neg_mut();
            }
        }
    }
    vectors.column_mut(0).fill(1.0 / (n as f64).sqrt());
    values[0] = 0.0;

    Ok(RealSpectrum {
        eigenvalues: values,
        vectors,
    })
}

/// One group of numerically equal eigenvalues: representative value and
/// 0-based column indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityGroup {
    pub value: f64,
    pub indices: Vec<usize>,
}

impl MultiplicityGroup {
    pub fn multiplicity(&self) -> usize {
        self.indices.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityGroups {
    pub groups: Vec<MultiplicityGroup>,
    pub tol: f64,
}

impl MultiplicityGroups {
    pub fn sizes(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.multiplicity()).collect()
    }
}

/// Groups ascending eigenvalues, starting a new group whenever the gap to
/// the previous eigenvalue exceeds `tol`.
pub fn multiplicity_partition(spec: &RealSpectrum, tol: f64) -> MultiplicityGroups {
    partition_values(spec.eigenvalues.as_slice(), tol)
}

pub(crate) fn partition_values(values: &[f64], tol: f64) -> MultiplicityGroups {
    let mut groups: Vec<MultiplicityGroup> = Vec::new();
    for (k, &lambda) in values.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if lambda - values[k - 1] <= tol => g.indices.push(k),
            _ => groups.push(MultiplicityGroup {
                value: lambda,
                indices: vec![k],
            }),
        }
    }
    MultiplicityGroups { groups, tol }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalSupport {
    pub supported: bool,
    /// Nonzero eigenvalue groups of odd multiplicity: `(value, multiplicity)`.
    pub odd_groups: Vec<(f64, usize)>,
    /// Number of odd groups the pairing needs: 0 for odd N, 1 for even N.
    pub required_odd: usize,
}

/// At most one nonzero eigenvalue of odd multiplicity, with the count
/// matching the parity of N (the middle column is self-paired only for even N).
pub fn supports_normal_atomic(spec: &RealSpectrum, tol: f64) -> NormalSupport {
    let n = spec.n();
    let groups = multiplicity_partition(spec, tol);
    let odd_groups: Vec<(f64, usize)> = groups
        .groups
        .iter()
        .skip(1)
        .filter(|g| g.multiplicity() % 2 == 1)
        .map(|g| (g.value, g.multiplicity()))
        .collect();
    let required_odd = if n.is_multiple_of(2) { 1 } else { 0 };
    NormalSupport {
        supported: odd_groups.len() == required_odd,
        odd_groups,
        required_odd,
    }
}

/// An involution `p` on column indices with unit scalars `c_k` such that
/// `u_k = c_k conj(u_{p(k)})`. Stored 0-based over all N columns; entry 0
/// is always the fixed point `p(0) = 0, c_0 = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pairing {
    pub p: Vec<usize>,
    pub c: Vec<Complex64>,
}

impl Pairing {
    pub fn identity(n: usize) -> Self {
        Self {
            p: (0..n).collect(),
            c: vec![Complex64::new(1.0, 0.0); n],
        }
    }

    /// `p(k) = N + 2 - k` in 1-based terms, i.e. `k -> (n - k) mod n` 0-based.
    pub fn mirror(n: usize) -> Self {
        Self {
            p: (0..n).map(|k| (n - k) % n).collect(),
            c: vec![Complex64::new(1.0, 0.0); n],
        }
    }

    /// Same permutation, and phases within `tol`.
    pub fn approx_eq(&self, other: &Pairing, tol: f64) -> bool {
        self.p == other.p && self.c.iter().zip(&other.c).all(|(a, b)| (a - b).norm() <= tol)
    }

    pub fn is_involution(&self) -> bool {
        self.p.iter().enumerate().all(|(k, &j)| j < self.p.len() && self.p[j] == k)
    }
}

/// Unitary eigenvector matrix `U` (columns `u_k`), optionally with the
/// eigenvalue of each column and a conjugate pairing.
#[derive(Debug, Clone)]
pub struct FourierBasis {
    pub u: CMatrix,
    pub eigenvalues: Option<DVector<f64>>,
    pub pairing: Option<Pairing>,
}

impl FourierBasis {
    /// Validates `U* U = I` within `1e-10`.
    pub fn new(u: CMatrix, eigenvalues: Option<DVector<f64>>, pairing: Option<Pairing>) -> Result<Self> {
        let n = u.nrows();
        if n == 0 || u.ncols() != n {
            return param(format!("basis must be square and nonempty, got {}x{}", n, u.ncols()));
        }
        if let Some(ev) = &eigenvalues {
            if ev.len() != n {
                return param(format!("{} eigenvalues for a basis of size {n}", ev.len()));
            }
        }
        let residual = linalg::unitarity_residual(&u);
        if residual > 1e-10 {
            return param(format!("basis is not unitary: ||U*U - I||_max = {residual:e}"));
        }
        Ok(Self { u, eigenvalues, pairing })
    }

    pub fn n(&self) -> usize {
        self.u.nrows()
    }

    pub fn column(&self, k: usize) -> CVector {
        self.u.column(k).into_owned()
    }

    /// Attaches Rayleigh quotients `u_k* L u_k` as column eigenvalues.
    pub fn with_eigenvalues_from(mut self, l: &DMatrix<f64>) -> Self {
        self.eigenvalues = Some(rayleigh_quotients(&self.u, l));
        self
    }

    /// `L = U diag(lambda) U*`, available when eigenvalues are attached.
    pub fn laplacian(&self) -> Option<DMatrix<f64>> {
        let ev = self.eigenvalues.as_ref()?;
        let d = CVector::from_iterator(ev.len(), ev.iter().map(|&x| Complex64::new(x, 0.0)));
        Some(linalg::conjugate_diag(&self.u, &d).map(|z| z.re))
    }

    pub fn to_file(&self) -> SpectrumFile {
        let n = self.n();
        SpectrumFile {
            n,
            eigenvalues: self.eigenvalues.as_ref().map(|e| e.iter().copied().collect()),
            u_real: (0..n).map(|i| (0..n).map(|j| self.u[(i, j)].re).collect()).collect(),
            u_imag: (0..n).map(|i| (0..n).map(|j| self.u[(i, j)].im).collect()).collect(),
        }
    }

    /// Loads and validates unitarity. Pairing is re-detected, not stored.
    pub fn from_file(file: &SpectrumFile) -> Result<Self> {
        let n = file.n;
        if file.u_real.len() != n || file.u_imag.len() != n {
            return param("spectrum file: U_real/U_imag row count does not match n");
        }
        let mut u = CMatrix::zeros(n, n);
        for i in 0..n {
            if file.u_real[i].len() != n || file.u_imag[i].len() != n {
                return param(format!("spectrum file: row {i} has the wrong length"));
            }
            for j in 0..n {
                u[(i, j)] = Complex64::new(file.u_real[i][j], file.u_imag[i][j]);
            }
        }
        let eigenvalues = file.eigenvalues.as_ref().map(|e| DVector::from_vec(e.clone()));
        let mut basis = Self::new(u, eigenvalues, None)?;
        basis.pairing = crate::filters::detect_conjugate_pairing(&basis, 1e-9);
        Ok(basis)
    }
}

/// Spectrum export: `U_real` / `U_imag` are row-major (list of rows).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumFile {
    pub n: usize,
    pub eigenvalues: Option<Vec<f64>>,
    #[serde(rename = "U_real")]
    pub u_real: Vec<Vec<f64>>,
    #[serde(rename = "U_imag")]
    pub u_imag: Vec<Vec<f64>>,
}

pub(crate) fn rayleigh_quotients(u: &CMatrix, l: &DMatrix<f64>) -> DVector<f64> {
    let lc = linalg::complexify(l);
    let lu = &lc * u;
    DVector::from_iterator(
        u.ncols(),
        (0..u.ncols()).map(|k| u.column(k).dotc(&lu.column(k)).re),
    )
}

/// Conjugate-paired eigenbasis. Columns are reordered so that paired
/// columns `k` and `N+2-k` (1-based) share an eigenvalue; within each
/// multiplicity group consecutive real eigenvectors `a, b` become
/// `(a + i b)/sqrt 2` and `(a - i b)/sqrt 2`. For even N the odd-multiplicity
/// group supplies the real middle column `N/2 + 1`.
pub fn normal_basis(spec: &RealSpectrum, tol: f64) -> Result<FourierBasis> {
    let n = spec.n();
    let support = supports_normal_atomic(spec, tol);
    if !support.supported {
        return Err(Error::NoNormalBasis {
            n,
            required: support.required_odd,
            offending: support.odd_groups,
        });
    }

    let groups = multiplicity_partition(spec, tol);
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(n / 2);
    let mut middle: Option<usize> = None;
    for g in groups.groups.iter().skip(1) {
        let mut chunks = g.indices.chunks_exact(2);
        pairs.extend(chunks.by_ref().map(|c| (c[0], c[1])));
        if let [last] = chunks.remainder() {
            middle = Some(*last);
        }
    }

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = CMatrix::zeros(n, n);
    let mut eigenvalues = DVector::zeros(n);
    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    u.column_mut(0).fill(Complex64::new(inv_sqrt_n, 0.0));
    for (slot, &(a, b)) in pairs.iter().enumerate() {
        let k = slot + 1;
        let mirror = n - k;
        for i in 0..n {
            let re = spec.vectors[(i, a)] * s;
            let im = spec.vectors[(i, b)] * s;
            u[(i, k)] = Complex64::new(re, im);
            u[(i, mirror)] = Complex64::new(re, -im);
        }
        eigenvalues[k] = spec.eigenvalues[a];
        eigenvalues[mirror] = spec.eigenvalues[a];
    }
    if let Some(m) = middle {
        let k = n / 2;
        for i in 0..n {
            u[(i, k)] = Complex64::new(spec.vectors[(i, m)], 0.0);
        }
        eigenvalues[k] = spec.eigenvalues[m];
    }

    FourierBasis::new(u, Some(eigenvalues), Some(Pairing::mirror(n)))
}

/// `u_k(j) = omega^{(j-1)(k-1)} / sqrt N`, `omega = exp(2 pi i / N)`.
pub fn dft_basis(n: usize) -> FourierBasis {
    let scale = 1.0 / (n as f64).sqrt();
    let u = CMatrix::from_fn(n, n, |j, k| {
        let phase = 2.0 * PI * ((j * k) % n) as f64 / n as f64;
        Complex64::from_polar(scale, phase)
    });
    FourierBasis {
        u,
        eigenvalues: None,
        pairing: Some(Pairing::mirror(n)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Forward: `U* x`. Inverse: `U x`.
pub fn gft(basis: &FourierBasis, x: &GraphSignal, direction: Direction) -> Result<GraphSignal> {
    if x.len() != basis.n() {
        return param(format!("signal length {} does not match basis size {}", x.len(), basis.n()));
    }
    Ok(match direction {
        Direction::Forward => basis.u.ad_mul(x),
        Direction::Inverse => &basis.u * x,
    })
}
