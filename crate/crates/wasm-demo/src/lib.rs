//! Browser bindings for the atomic-filters demo page.
//!
//! Each exported function takes plain numbers and strings and returns a JSON
//! string; errors come back as a thrown string. The `*_json` functions are
//! the same operations without the wasm-bindgen layer, so they can be tested
//! natively.

use std::sync::Arc;

use atomic_filters::filters::{apply, make_filter, FrequencyResponse, ShiftDirection};
use atomic_filters::frames::{analyze, build_frame, power_responses, synthesize};
use atomic_filters::graph::{generate, gen_sensor_with, is_circulant, Graph, GraphKind, SensorParams};
use atomic_filters::spectral::{
    dft_basis, eigendecompose, multiplicity_partition, normal_basis, supports_normal_atomic, FourierBasis,
};
use atomic_filters::{signals, GraphSignal};
use serde::Serialize;
use wasm_bindgen::prelude::*;

pub const MAX_N: usize = 256;

fn graph(kind: &str, n: usize, seed: u64) -> Result<Graph, String> {
    if !(2..=MAX_N).contains(&n) {
        return Err(format!("n must be in 2..={MAX_N}"));
    }
    let kind = match kind {
        "ring" => GraphKind::Ring,
        "path" => GraphKind::Path,
        "complete" => GraphKind::Complete,
        "bipartite" => GraphKind::CompleteBipartite { p: n - n / 2, q: n / 2 },
        "sensor" => {
            // Denser for small n so the placement usually connects.
            let radius = (4.0 / n as f64).sqrt().clamp(0.15, 1.4);
            return gen_sensor_with(n, &SensorParams::with_radius(radius), seed)
                .map(|s| s.graph)
                .map_err(|e| e.to_string());
        }
        other => return Err(format!("unknown graph kind {other:?}")),
    };
    generate(&kind, n).map_err(|e| e.to_string())
}

/// DFT on circulant graphs, the normal basis when the spectrum allows it,
/// the real eigenvector basis otherwise.
fn basis(g: &Graph) -> Result<(Arc<FourierBasis>, &'static str), String> {
    if is_circulant(g, 0.0).is_some() {
        return Ok((Arc::new(dft_basis(g.n()).with_eigenvalues_from(&g.laplacian())), "dft"));
    }
    let spec = eigendecompose(&g.laplacian()).map_err(|e| e.to_string())?;
    let tol = spec.default_tol();
    if supports_normal_atomic(&spec, tol).supported {
        let b = normal_basis(&spec, tol).map_err(|e| e.to_string())?;
        Ok((Arc::new(b), "normal"))
    } else {
        Ok((Arc::new(spec.real_basis()), "real"))
    }
}

fn input_signal(g: &Graph, signal: &str) -> Result<GraphSignal, String> {
    let n = g.n();
    match signal {
        "pulse" => Ok(signals::pulse(n, 0)),
        "sine" => Ok(signals::sine(n)),
        "gaussian" if is_circulant(g, 0.0).is_some() => Ok(signals::gaussian_ring(n, n / 2, signals::default_width(n))),
        "gaussian" => Ok(signals::gaussian_path(n, n / 2, signals::default_width(n))),
        other => Err(format!("unknown signal {other:?}")),
    }
}

fn re(x: &GraphSignal) -> Vec<f64> {
    x.iter().map(|z| z.re).collect()
}

fn im(x: &GraphSignal) -> Vec<f64> {
    x.iter().map(|z| z.im).collect()
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct ShiftResult {
    basis: &'static str,
    input: Vec<f64>,
    output_re: Vec<f64>,
    output_im: Vec<f64>,
    imag_energy_fraction: f64,
}

/// Applies the classical shift `power` times.
pub fn shift_json(kind: &str, n: usize, seed: u64, signal: &str, power: u32, up: bool) -> Result<String, String> {
    let g = graph(kind, n, seed)?;
    let (b, name) = basis(&g)?;
    let x = input_signal(&g, signal)?;
    let dir = if up { ShiftDirection::Up } else { ShiftDirection::Down };
    let f = make_filter(&b, FrequencyResponse::classical(n, dir)).map_err(|e| e.to_string())?;
    let y = apply(&f, &x, power).map_err(|e| e.to_string())?;
    to_json(&ShiftResult {
        basis: name,
        input: re(&x),
        output_re: re(&y),
        output_im: im(&y),
        imag_energy_fraction: signals::imaginary_energy_fraction(&y),
    })
}

#[derive(Serialize)]
struct Group {
    value: f64,
    multiplicity: usize,
}

#[derive(Serialize)]
struct SupportResult {
    eigenvalues: Vec<f64>,
    groups: Vec<Group>,
    odd_groups: usize,
    required_odd: usize,
    supported: bool,
}

/// Eigenvalue multiplicities and whether a normal Fourier basis exists.
pub fn normal_support_json(kind: &str, n: usize, seed: u64) -> Result<String, String> {
    let g = graph(kind, n, seed)?;
    let spec = eigendecompose(&g.laplacian()).map_err(|e| e.to_string())?;
    let tol = spec.default_tol();
    let support = supports_normal_atomic(&spec, tol);
    let groups = multiplicity_partition(&spec, tol)
        .groups
        .into_iter()
        .map(|gr| Group {
            value: gr.value,
            multiplicity: gr.multiplicity(),
        })
        .collect();
    to_json(&SupportResult {
        eigenvalues: spec.eigenvalues.iter().copied().collect(),
        groups,
        odd_groups: support.odd_groups.len(),
        required_odd: support.required_odd,
        supported: support.supported,
    })
}

#[derive(Serialize)]
struct FrameResult {
    basis: &'static str,
    weights: Vec<f64>,
    lower_bound: f64,
    upper_bound: f64,
    tight: bool,
    signal: Vec<f64>,
    reconstructed: Vec<f64>,
    max_error: f64,
}

/// Builds the shift-power frame from a Gaussian window and reconstructs a sine.
pub fn frame_roundtrip_json(kind: &str, n: usize, seed: u64) -> Result<String, String> {
    let g = graph(kind, n, seed)?;
    let (b, name) = basis(&g)?;
    let window = input_signal(&g, "gaussian")?;
    let a = power_responses(&FrequencyResponse::classical(n, ShiftDirection::Down));
    let d = build_frame(&b, &window, &a).map_err(|e| e.to_string())?;
    let f = signals::sine(n);
    let back = synthesize(&d, &analyze(&d, &f).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let max_error = (&back - &f).iter().map(|z| z.norm()).fold(0.0, f64::max);
    to_json(&FrameResult {
        basis: name,
        weights: d.weights.iter().copied().collect(),
        lower_bound: d.bounds.0,
        upper_bound: d.bounds.1,
        tight: d.is_tight(1e-9),
        signal: re(&f),
        reconstructed: re(&back),
        max_error,
    })
}

#[wasm_bindgen]
pub fn shift(kind: &str, n: usize, seed: u32, signal: &str, power: u32, up: bool) -> Result<String, JsValue> {
    shift_json(kind, n, seed.into(), signal, power, up).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn normal_support(kind: &str, n: usize, seed: u32) -> Result<String, JsValue> {
    normal_support_json(kind, n, seed.into()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn frame_roundtrip(kind: &str, n: usize, seed: u32) -> Result<String, JsValue> {
    frame_roundtrip_json(kind, n, seed.into()).map_err(|e| JsValue::from_str(&e))
}
