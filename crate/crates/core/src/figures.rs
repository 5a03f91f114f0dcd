//! Deterministic pipelines behind the five illustrative figures: a test
//! signal, an atomic filter, and the filtered output on a given graph.
//!
//! All pipelines use the response `a = (1, e^{i 2pi/N}, ..., e^{i 2pi (N-1)/N})`
//! (`ShiftDirection::Up`), the convention of the figure captions.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::filters::{apply, make_filter, Filter, FrequencyResponse, ShiftDirection};
use crate::graph::{gen_sensor_with, generate, GraphKind, SensorParams};
use crate::linalg::GraphSignal;
use crate::signals;
use crate::spectral::{dft_basis, eigendecompose, normal_basis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FigureId {
    Fig1RingGaussian,
    Fig3CompletePulse,
    Fig4BipartitePulse,
    Fig5PathSine,
    Fig6SensorGaussian,
}

impl FigureId {
    pub const ALL: [FigureId; 5] = [
        FigureId::Fig1RingGaussian,
        FigureId::Fig3CompletePulse,
        FigureId::Fig4BipartitePulse,
        FigureId::Fig5PathSine,
        FigureId::Fig6SensorGaussian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1RingGaussian => "fig1_ring_gaussian",
            FigureId::Fig3CompletePulse => "fig3_complete_pulse",
            FigureId::Fig4BipartitePulse => "fig4_bipartite_pulse",
            FigureId::Fig5PathSine => "fig5_path_sine",
            FigureId::Fig6SensorGaussian => "fig6_sensor_gaussian",
        }
    }

    /// Default `(N, power)`.
    pub fn defaults(self) -> (usize, u32) {
        match self {
            FigureId::Fig1RingGaussian => (64, 10),
            FigureId::Fig3CompletePulse => (16, 3),
            FigureId::Fig4BipartitePulse => (8, 3),
            FigureId::Fig5PathSine => (64, 1),
            FigureId::Fig6SensorGaussian => (500, 1),
        }
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown figure id {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FigureParams {
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub power: Option<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FigureData {
    pub id: FigureId,
    pub n: usize,
    pub convention: String,
    pub columns: Vec<Column>,
    pub metrics: BTreeMap<String, f64>,
}

impl FigureData {
    /// `# <convention>` line, then `vertex,<columns...>` with 0-based vertices.
    pub fn to_csv(&self) -> String {
        let mut s = format!("# {}\nvertex", self.convention);
        for c in &self.columns {
            s.push(',');
            s.push_str(&c.name);
        }
        s.push('\n');
        for i in 0..self.n {
            let _ = write!(s, "{i}");
            for c in &self.columns {
                let _ = write!(s, ",{:e}", c.values[i]);
            }
            s.push('\n');
        }
        s
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|c| c.name == name).map(|c| c.values.as_slice())
    }
}

const CONVENTION: &str = "a_k = exp(+i 2 pi (k-1)/N), k = 1..N (upshift, as in the figure captions)";

fn push(columns: &mut Vec<Column>, name: &str, x: &GraphSignal, part: fn(&num_complex::Complex64) -> f64) {
    columns.push(Column {
        name: name.into(),
        values: x.iter().map(part).collect(),
    });
}

fn push_complex(columns: &mut Vec<Column>, stem: &str, y: &GraphSignal) {
    push(columns, &format!("{stem}_re"), y, |z| z.re);
    push(columns, &format!("{stem}_im"), y, |z| z.im);
}

fn max_imag(y: &GraphSignal) -> f64 {
    y.iter().fold(0.0f64, |m, z| m.max(z.im.abs()))
}

fn upshift(basis: crate::spectral::FourierBasis) -> Result<Filter> {
    let n = basis.n();
    make_filter(&Arc::new(basis), FrequencyResponse::classical(n, ShiftDirection::Up))
}

pub fn compute_figure(id: FigureId, params: &FigureParams) -> Result<FigureData> {
    let (default_n, default_power) = id.defaults();
    let n = params.n.unwrap_or(default_n);
    let power = params.power.unwrap_or(default_power);
    let mut columns = Vec::new();
    let mut metrics = BTreeMap::new();

    match id {
        FigureId::Fig1RingGaussian => {
            if n < 3 {
                return param("fig1 needs N >= 3");
            }
            let x = signals::gaussian_ring(n, n / 2, signals::default_width(n));
            let conforming = upshift(dft_basis(n))?;
            let mut disordered_a = conforming.response().clone();
            // Swapping a_2 and a_3 breaks a_k = conj(a_{N+2-k}).
            disordered_a.0.swap_rows(1, 2);
            let disordered = make_filter(conforming.basis(), disordered_a)?;
            let ya = apply(&conforming, &x, power)?;
            let yb = apply(&disordered, &x, power)?;
            push(&mut columns, "input", &x, |z| z.re);
            push_complex(&mut columns, &format!("Ha{power}x"), &ya);
            push_complex(&mut columns, &format!("Hb{power}x"), &yb);
            metrics.insert("max_imag_conforming".into(), max_imag(&ya));
            metrics.insert("max_imag_disordered".into(), max_imag(&yb));
        }
        FigureId::Fig3CompletePulse | FigureId::Fig4BipartitePulse => {
            let basis = if id == FigureId::Fig3CompletePulse {
                let g = generate(&GraphKind::Complete, n)?;
                dft_basis(n).with_eigenvalues_from(&g.laplacian())
            } else {
                if n < 2 {
                    return param("fig4 needs N >= 2");
                }
                let (p, q) = bipartite_split(n);
                let g = generate(&GraphKind::CompleteBipartite { p, q }, n)?;
                let s = eigendecompose(&g.laplacian())?;
                normal_basis(&s, s.default_tol())?
            };
            let f = upshift(basis)?;
            let x = signals::pulse(n, 0);
            push(&mut columns, "input", &x, |z| z.re);
            for pw in [1, power] {
                let y = apply(&f, &x, pw)?;
                push_complex(&mut columns, &format!("H{pw}x"), &y);
                metrics.insert(format!("max_imag_power{pw}"), max_imag(&y));
            }
        }
        FigureId::Fig5PathSine => {
            let g = generate(&GraphKind::Path, n)?;
            let s = eigendecompose(&g.laplacian())?;
            let f = upshift(s.real_basis())?;
            let x = signals::sine(n);
            let y = apply(&f, &x, power)?;
            push(&mut columns, "input", &x, |z| z.re);
            push_complex(&mut columns, &format!("H{power}x"), &y);
            metrics.insert("imag_energy_fraction".into(), signals::imaginary_energy_fraction(&y));
        }
        FigureId::Fig6SensorGaussian => {
            let Some(seed) = params.seed else {
                return param("fig6_sensor_gaussian requires --seed");
            };
            let sg = gen_sensor_with(n, &SensorParams::default(), seed)?;
            let s = eigendecompose(&sg.graph.laplacian())?;
            let f = upshift(s.real_basis())?;
            let x = signals::gaussian_points(&sg.coords, [0.5, 0.5], SENSOR_WINDOW_WIDTH);
            let y = apply(&f, &x, power)?;
            columns.push(Column {
                name: "x".into(),
                values: sg.coords.iter().map(|p| p[0]).collect(),
            });
            columns.push(Column {
                name: "y".into(),
                values: sg.coords.iter().map(|p| p[1]).collect(),
            });
            push(&mut columns, "input", &x, |z| z.re);
            push_complex(&mut columns, &format!("H{power}x"), &y);
            metrics.insert("imag_energy_fraction".into(), signals::imaginary_energy_fraction(&y));
            metrics.insert("placement_attempts".into(), sg.attempts as f64);
        }
    }

    Ok(FigureData {
        id,
        n,
        convention: CONVENTION.into(),
        columns,
        metrics,
    })
}

/// Width of the Gaussian bump on the sensor graph, in unit-square distance.
pub const SENSOR_WINDOW_WIDTH: f64 = 0.1;

/// `(5, 3)` for the default N = 8, otherwise the closest split into two odd parts when possible.
fn bipartite_split(n: usize) -> (usize, usize) {
    if n == 8 {
        return (5, 3);
    }
    let q = if n.is_multiple_of(2) { (n / 2) | 1 } else { n / 2 };
    let q = q.min(n - 1).max(1);
    (n - q, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in FigureId::ALL {
            assert_eq!(id.name().parse::<FigureId>().unwrap(), id);
        }
        assert!("fig2".parse::<FigureId>().is_err());
    }

    #[test]
    fn fig3_pulse_moves_backwards_under_upshift() {
        let d = compute_figure(FigureId::Fig3CompletePulse, &FigureParams::default()).unwrap();
        let h1 = d.column("H1x_re").unwrap();
        let h3 = d.column("H3x_re").unwrap();
        // Upshift: (Hx)(n) = x(n+1), so the pulse at vertex 0 moves to N-1, then N-3.
        assert!((h1[15] - 1.0).abs() < 1e-12);
        assert!((h3[13] - 1.0).abs() < 1e-12);
        assert!(d.metrics["max_imag_power3"] < 1e-12);
    }

    #[test]
    fn fig4_output_is_real() {
        let d = compute_figure(FigureId::Fig4BipartitePulse, &FigureParams::default()).unwrap();
        assert!(d.metrics["max_imag_power1"] < 1e-12);
        assert!(d.metrics["max_imag_power3"] < 1e-12);
    }

    #[test]
    fn fig6_requires_seed() {
        assert!(compute_figure(FigureId::Fig6SensorGaussian, &FigureParams::default()).is_err());
    }

    #[test]
    fn csv_layout() {
        let d = compute_figure(
            FigureId::Fig5PathSine,
            &FigureParams {
                n: Some(6),
                ..Default::default()
            },
        )
        .unwrap();
        let csv = d.to_csv();
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with("# a_k = exp(+i"));
        assert_eq!(lines.next().unwrap(), "vertex,input,H1x_re,H1x_im");
        assert_eq!(lines.count(), 6);
    }
}
