//! Test signals and windows used by the figure pipelines, the CLI and the demo.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{real_signal, GraphSignal};

/// `exp(-d^2 / (2 width^2))` with `d` the circular index distance to `center` (0-based).
pub fn gaussian_ring(n: usize, center: usize, width: f64) -> GraphSignal {
    let values: Vec<f64> = (0..n)
        .map(|i| {
            let d = i.abs_diff(center);
            let d = d.min(n - d) as f64;
            (-d * d / (2.0 * width * width)).exp()
        })
        .collect();
    real_signal(&values)
}

/// Same as [`gaussian_ring`] with plain index distance.
pub fn gaussian_path(n: usize, center: usize, width: f64) -> GraphSignal {
    let values: Vec<f64> = (0..n)
        .map(|i| {
            let d = i.abs_diff(center) as f64;
            (-d * d / (2.0 * width * width)).exp()
        })
        .collect();
    real_signal(&values)
}

/// Gaussian bump in Euclidean distance from `center` over planar coordinates.
pub fn gaussian_points(coords: &[[f64; 2]], center: [f64; 2], width: f64) -> GraphSignal {
    let values: Vec<f64> = coords
        .iter()
        .map(|p| {
            let d2 = (p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2);
            (-d2 / (2.0 * width * width)).exp()
        })
        .collect();
    real_signal(&values)
}

/// Default Gaussian width `N / 10`.
pub fn default_width(n: usize) -> f64 {
    n as f64 / 10.0
}

/// Unit delta at `vertex` (0-based).
pub fn pulse(n: usize, vertex: usize) -> GraphSignal {
    let mut v = vec![0.0; n];
    v[vertex] = 1.0;
    real_signal(&v)
}

/// `sin(4 pi (n-1) / N)` for 1-based `n`.
pub fn sine(n: usize) -> GraphSignal {
    let values: Vec<f64> = (0..n).map(|i| (4.0 * PI * i as f64 / n as f64).sin()).collect();
    real_signal(&values)
}

/// `count` signals with independent standard normal real and imaginary parts.
pub fn random_complex(n: usize, count: usize, seed: u64) -> Vec<GraphSignal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            GraphSignal::from_fn(n, |_, _| {
                Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
            })
        })
        .collect()
}

/// `||Im y||^2 / ||y||^2` (zero for the zero signal).
pub fn imaginary_energy_fraction(y: &GraphSignal) -> f64 {
    let total = y.norm_squared();
    if total == 0.0 {
        return 0.0;
    }
    y.iter().map(|z| z.im * z.im).sum::<f64>() / total
}
