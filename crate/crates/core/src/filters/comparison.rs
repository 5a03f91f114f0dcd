//! Shift operators from the literature, expressed as graph filters so that
//! they can be run through the same property battery.

use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_properties_with_laplacian, make_filter, Filter, FrequencyResponse, PropertyReport, DEFAULT_TOL};
use crate::error::{param, Result};
use crate::graph::{is_regular, Graph};
use crate::spectral::{rayleigh_quotients, FourierBasis, RealSpectrum};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComparisonKind {
    /// The adjacency matrix `W`; a filter only on regular graphs (`a_k = d - lambda_k`).
    Adjacency,
    /// `a_k = exp(-i pi sqrt(lambda_k / rho))`, `rho` defaults to `lambda_N`.
    Girault { rho: Option<f64> },
    /// `a_k = exp(i phi_k)`.
    Gavili { phi: Vec<f64> },
    /// `exp(i h L)`: `a_k = exp(i h lambda_k)`.
    Schrodinger { h: f64 },
    /// `exp(i h sqrt L)`: `a_k = exp(i h sqrt(lambda_k))`.
    SqrtSchrodinger { h: f64 },
}

#[derive(Debug, Clone)]
pub struct ComparisonShift {
    /// `None` when the operator is not a graph filter (adjacency on a non-regular graph).
    pub filter: Option<Filter>,
    pub report: Option<PropertyReport>,
    pub diagnostic: String,
}

const REPORT_TRIALS: usize = 16;
const REPORT_SEED: u64 = 0;

pub fn comparison_shift(
    g: &Graph,
    spec: &RealSpectrum,
    basis: &Arc<FourierBasis>,
    kind: &ComparisonKind,
) -> Result<ComparisonShift> {
    let n = g.n();
    if spec.n() != n || basis.n() != n {
        return param(format!(
            "graph, spectrum and basis sizes differ: {n}, {}, {}",
            spec.n(),
            basis.n()
        ));
    }
    let l = g.laplacian();
    // Eigenvalue attached to each basis column.
    let lambda: DVector<f64> = basis
        .eigenvalues
        .clone()
        .unwrap_or_else(|| rayleigh_quotients(&basis.u, &l))
        .map(|x| x.max(0.0));

    let (a, diagnostic): (Vec<Complex64>, String) = match kind {
        ComparisonKind::Adjacency => match is_regular(g, 1e-12 * g.degrees().max().max(1.0)) {
            Some(d) => (
                lambda.iter().map(|&l| Complex64::new(d - l, 0.0)).collect(),
                format!("graph is {d}-regular: W = H_a with a_k = d - lambda_k"),
            ),
            None => {
                return Ok(ComparisonShift {
                    filter: None,
                    report: None,
                    diagnostic: "NotAFilter: graph is not regular, so W is not a graph filter".into(),
                })
            }
        },
        ComparisonKind::Girault { rho } => {
            let rho = rho.unwrap_or_else(|| spec.max_eigenvalue());
            if !(rho > 0.0 && rho.is_finite()) {
                return param(format!("rho must be positive, got {rho}"));
            }
            (
                lambda
                    .iter()
                    .map(|&l| Complex64::from_polar(1.0, -std::f64::consts::PI * (l / rho).sqrt()))
                    .collect(),
                format!("Girault shift with rho = {rho}"),
            )
        }
        ComparisonKind::Gavili { phi } => {
            if phi.len() != n {
                return param(format!("phi has length {} but N = {n}", phi.len()));
            }
            (
                phi.iter().map(|&p| Complex64::from_polar(1.0, p)).collect(),
                "Gavili shift".into(),
            )
        }
        ComparisonKind::Schrodinger { h } => (
            lambda.iter().map(|&l| Complex64::from_polar(1.0, h * l)).collect(),
            format!("exp(i h L) with h = {h}"),
        ),
        ComparisonKind::SqrtSchrodinger { h } => (
            lambda.iter().map(|&l| Complex64::from_polar(1.0, h * l.sqrt())).collect(),
            format!("exp(i h sqrt L) with h = {h}"),
        ),
    };

    let filter = make_filter(basis, FrequencyResponse::from_vec(a)?)?;
    let report = check_properties_with_laplacian(&filter, &l, REPORT_TRIALS, REPORT_SEED, DEFAULT_TOL);
    Ok(ComparisonShift {
        filter: Some(filter),
        report: Some(report),
        diagnostic,
    })
}
