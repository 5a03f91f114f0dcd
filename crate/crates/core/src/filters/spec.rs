use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{comparison_shift, make_filter, make_from_thetas, ComparisonKind, Filter, FrequencyResponse, ShiftDirection};
use crate::error::{param, Error, Result};
use crate::graph::Graph;
use crate::spectral::{FourierBasis, RealSpectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterKind {
    Thetas,
    Explicit,
    Comparison,
}

/// `{"kind": "comparison", "comparison": {"kind": "girault", "params": {"rho": 4.0}}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonSpec {
    pub kind: String,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
}

/// Filter description file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    pub kind: FilterKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thetas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<ShiftDirection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_real: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_imag: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ComparisonSpec>,
}

impl FilterSpec {
    pub fn thetas(thetas: Vec<f64>, direction: ShiftDirection) -> Self {
        Self {
            kind: FilterKind::Thetas,
            thetas: Some(thetas),
            direction: Some(direction),
            a_real: None,
            a_imag: None,
            comparison: None,
        }
    }

    pub fn explicit(a: &FrequencyResponse) -> Self {
        Self {
            kind: FilterKind::Explicit,
            thetas: None,
            direction: None,
            a_real: Some(a.as_slice().iter().map(|z| z.re).collect()),
            a_imag: Some(a.as_slice().iter().map(|z| z.im).collect()),
            comparison: None,
        }
    }

    pub fn comparison(kind: &ComparisonKind) -> Self {
        let mut params = BTreeMap::new();
        let name = match kind {
            ComparisonKind::Adjacency => "adjacency",
            ComparisonKind::Girault { rho } => {
                if let Some(r) = rho {
                    params.insert("rho".into(), (*r).into());
                }
                "girault"
            }
            ComparisonKind::Gavili { phi } => {
                params.insert("phi".into(), phi.clone().into());
                "gavili"
            }
            ComparisonKind::Schrodinger { h } => {
                params.insert("h".into(), (*h).into());
                "schrodinger"
            }
            ComparisonKind::SqrtSchrodinger { h } => {
                params.insert("h".into(), (*h).into());
                "sqrt_schrodinger"
            }
        };
        Self {
            kind: FilterKind::Comparison,
            thetas: None,
            direction: None,
            a_real: None,
            a_imag: None,
            comparison: Some(ComparisonSpec {
                kind: name.into(),
                params,
            }),
        }
    }

    pub fn comparison_kind(&self) -> Result<ComparisonKind> {
        let Some(c) = &self.comparison else {
            return param("filter spec of kind comparison needs a \"comparison\" object");
        };
        let number = |key: &str| -> Result<Option<f64>> {
            match c.params.get(key) {
                None => Ok(None),
                Some(v) => v
                    .as_f64()
                    .map(Some)
                    .ok_or_else(|| Error::Parameter(format!("comparison parameter {key} must be a number"))),
            }
        };
        let required = |key: &str| -> Result<f64> {
            number(key)?.ok_or_else(|| Error::Parameter(format!("comparison {} needs parameter {key}", c.kind)))
        };
        Ok(match c.kind.as_str() {
            "adjacency" => ComparisonKind::Adjacency,
            "girault" => ComparisonKind::Girault { rho: number("rho")? },
            "gavili" => {
                let phi: Vec<f64> = serde_json::from_value(
                    c.params
                        .get("phi")
                        .cloned()
                        .ok_or_else(|| Error::Parameter("comparison gavili needs parameter phi".into()))?,
                )?;
                ComparisonKind::Gavili { phi }
            }
            "schrodinger" => ComparisonKind::Schrodinger { h: required("h")? },
            "sqrt_schrodinger" => ComparisonKind::SqrtSchrodinger { h: required("h")? },
            other => return param(format!("unknown comparison kind {other:?}")),
        })
    }

    /// Builds the filter on `basis`. `graph` and `spec` are needed only for
    /// comparison filters.
    pub fn build(&self, basis: &Arc<FourierBasis>, graph: &Graph, spec: &RealSpectrum) -> Result<Filter> {
        match self.kind {
            FilterKind::Thetas => {
                let Some(thetas) = &self.thetas else {
                    return param("filter spec of kind thetas needs \"thetas\"");
                };
                Ok(make_from_thetas(basis, thetas, self.direction.unwrap_or_default())?.filter)
            }
            FilterKind::Explicit => {
                let Some(re) = &self.a_real else {
                    return param("filter spec of kind explicit needs \"a_real\"");
                };
                let zeros = vec![0.0; re.len()];
                let im = self.a_imag.as_ref().unwrap_or(&zeros);
                if im.len() != re.len() {
                    return param("a_real and a_imag differ in length");
                }
                let a = re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect();
                make_filter(basis, FrequencyResponse::from_vec(a)?)
            }
            FilterKind::Comparison => {
                let shift = comparison_shift(graph, spec, basis, &self.comparison_kind()?)?;
                shift.filter.ok_or(Error::Structure(shift.diagnostic))
            }
        }
    }
}
