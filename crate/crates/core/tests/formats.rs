use std::sync::Arc;

use atomic_filters::filters::{FilterSpec, FrequencyResponse, ShiftDirection};
use atomic_filters::frames::{analyze, build_frame, coefficients_csv, parse_coefficients_csv, power_responses, FrameFile};
use atomic_filters::graph::{generate, Graph, GraphKind};
use atomic_filters::spectral::{eigendecompose, normal_basis, FourierBasis, SpectrumFile};
use atomic_filters::{signals, CVector};
use num_complex::Complex64;

#[test]
fn graph_json_is_sorted_and_reloads() {
    let g = generate(&GraphKind::CompleteBipartite { p: 5, q: 3 }, 8).unwrap();
    let text = g.to_json_string().unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let edges = v["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 15);
    let pairs: Vec<(u64, u64)> = edges
        .iter()
        .map(|e| (e[0].as_u64().unwrap(), e[1].as_u64().unwrap()))
        .collect();
    let mut sorted = pairs.clone();
    sorted.sort();
    assert_eq!(pairs, sorted);
    assert!(pairs.iter().all(|(i, j)| i < j));
    assert_eq!(Graph::from_json_str(&text).unwrap(), g);
}

#[test]
fn graph_loader_rejects_bad_files() {
    for bad in [
        r#"{"n": 3, "edges": [[0, 1, 1.0], [1, 0, 1.0]]}"#,
        r#"{"n": 3, "edges": [[1, 1, 1.0]]}"#,
        r#"{"n": 3, "edges": [[0, 3, 1.0]]}"#,
        r#"{"n": 3, "edges": [[0, 1, -1.0]]}"#,
        r#"{"n": 3, "edges": [[0, 1, 1.0]], "extra": 1}"#,
    ] {
        assert!(Graph::from_json_str(bad).is_err(), "{bad}");
    }
}

#[test]
fn spectrum_json_uses_documented_keys() {
    let l = generate(&GraphKind::Ring, 6).unwrap().laplacian();
    let s = eigendecompose(&l).unwrap();
    let b = normal_basis(&s, s.default_tol()).unwrap();
    let v = serde_json::to_value(b.to_file()).unwrap();
    for key in ["n", "eigenvalues", "U_real", "U_imag"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let file: SpectrumFile = serde_json::from_value(v).unwrap();
    let back = FourierBasis::from_file(&file).unwrap();
    assert_eq!(back.u, b.u);
    assert!(back.pairing.is_some());
}

#[test]
fn filter_spec_round_trip() {
    let a = FrequencyResponse::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)]).unwrap();
    for spec in [
        FilterSpec::explicit(&a),
        FilterSpec::thetas(vec![0.0, 1.0], ShiftDirection::Up),
    ] {
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<FilterSpec>(&text).unwrap(), spec);
    }
}

#[test]
fn frame_export_and_coefficient_csv() {
    let n = 8;
    let l = generate(&GraphKind::Ring, n).unwrap().laplacian();
    let basis = Arc::new(eigendecompose(&l).unwrap().real_basis());
    let d = build_frame(
        &basis,
        &signals::gaussian_ring(n, 0, 1.5),
        &power_responses(&FrequencyResponse::classical(n, ShiftDirection::Down)),
    )
    .unwrap();
    let text = serde_json::to_string(&d.to_file()).unwrap();
    let file: FrameFile = serde_json::from_str(&text).unwrap();
    assert_eq!(file.weights.len(), n);
    assert_eq!(file.responses_real.len(), n);

    let f = CVector::from_fn(n, |i, _| Complex64::new(i as f64, -(i as f64) / 2.0));
    let coeffs = analyze(&d, &f).unwrap();
    let csv = coefficients_csv(&coeffs);
    assert!(csv.starts_with("j,k,re,im\n0,0,"));
    assert_eq!(parse_coefficients_csv(&csv, n, n).unwrap(), coeffs);
    assert!(parse_coefficients_csv("j,k,re\n", n, n).is_err());
}
