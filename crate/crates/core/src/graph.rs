//! Undirected weighted graphs, the generator families used throughout the
//! crate, and the graph JSON file format.
//!
//! Vertices are 0-based in code and in files. Reports and error messages
//! that talk about individual vertices use 1-based numbering.

use std::collections::{BTreeSet, VecDeque};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};

/// Symmetric, nonnegative, zero-diagonal weighted adjacency matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    weights: DMatrix<f64>,
}

impl Graph {
    /// Validates symmetry (exact), zero diagonal and nonnegative finite weights.
    pub fn new(weights: DMatrix<f64>) -> Result<Self> {
        let n = weights.nrows();
        if n == 0 || weights.ncols() != n {
            return param(format!("adjacency must be square and nonempty, got {}x{}", n, weights.ncols()));
        }
        for i in 0..n {
            if weights[(i, i)] != 0.0 {
                return param(format!("self-loop at vertex {}", i + 1));
            }
            for j in 0..n {
                let w = weights[(i, j)];
                if !w.is_finite() || w < 0.0 {
                    return param(format!("weight w[{},{}] = {w} is not a finite nonnegative number", i + 1, j + 1));
                }
                if w != weights[(j, i)] {
                    return param(format!("adjacency not symmetric at ({}, {})", i + 1, j + 1));
                }
            }
        }
        Ok(Self { weights })
    }

    /// Builds a graph from 0-based `(i, j, w)` triples.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        if n == 0 {
            return param("graph needs at least one vertex");
        }
        let mut weights = DMatrix::zeros(n, n);
        let mut seen = BTreeSet::new();
        for &(i, j, w) in edges {
            if i >= n || j >= n {
                return param(format!("edge ({i}, {j}) out of range for n = {n}"));
            }
            if i == j {
                return param(format!("self-loop at vertex index {i}"));
            }
            if !(w.is_finite() && w > 0.0) {
                return param(format!("edge ({i}, {j}) has non-positive or non-finite weight {w}"));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return param(format!("duplicate edge ({i}, {j})"));
            }
            weights[(i, j)] = w;
            weights[(j, i)] = w;
        }
        Self::new(weights)
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    pub fn adjacency(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[(i, j)]
    }

    /// `d_i = sum_j w_ij`.
    pub fn degrees(&self) -> DVector<f64> {
        DVector::from_iterator(self.n(), self.weights.row_iter().map(|r| r.sum()))
    }

    pub fn degree_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.degrees())
    }

    /// `L = D - W`.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let mut l = -self.weights.clone();
        for (i, d) in self.degrees().iter().enumerate() {
            l[(i, i)] = *d;
        }
        l
    }

    /// Edges as sorted 0-based `(i, j, w)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let w = self.weights[(i, j)];
                if w > 0.0 {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    /// BFS over strictly positive weights.
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for u in 0..n {
                if !seen[u] && self.weights[(v, u)] > 0.0 {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count == n
    }

    pub fn to_json(&self) -> GraphFile {
        GraphFile {
            n: self.n(),
            edges: self.edges(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(s)?;
        Self::from_edges(file.n, &file.edges)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_json())?)
    }
}

/// On-disk graph: `{"n": <int>, "edges": [[i, j, w], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

/// First row of a symmetric circulant adjacency matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratingVector(Vec<f64>);

impl GeneratingVector {
    /// Requires `c_0 = 0`, `c_{n-k} = c_k` and nonnegative finite entries.
    pub fn new(c: Vec<f64>) -> Result<Self> {
        let n = c.len();
        if n == 0 {
            return param("generating vector must be nonempty");
        }
        if c[0] != 0.0 {
            return param(format!("generating vector needs c_0 = 0, got {}", c[0]));
        }
        for k in 1..n {
            if !c[k].is_finite() || c[k] < 0.0 {
                return param(format!("generating vector entry c_{k} = {} must be finite and nonnegative", c[k]));
            }
            if c[k] != c[n - k] {
                return param(format!("generating vector not symmetric: c_{k} = {} but c_{} = {}", c[k], n - k, c[n - k]));
            }
        }
        Ok(Self(c))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Laplacian eigenvalue attached to DFT column `k` (0-based):
    /// `sum_j c_j (1 - cos(2 pi j k / n))`.
    pub fn laplacian_eigenvalue(&self, k: usize) -> f64 {
        let n = self.0.len() as f64;
        self.0
            .iter()
            .enumerate()
            .map(|(j, c)| c * (1.0 - (2.0 * std::f64::consts::PI * (j * k) as f64 / n).cos()))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphKind {
    Ring,
    Path,
    Complete,
    CompleteBipartite { p: usize, q: usize },
    Circulant(GeneratingVector),
}

pub fn generate(kind: &GraphKind, n: usize) -> Result<Graph> {
    if n < 2 {
        return param(format!("graph families need n >= 2, got {n}"));
    }
    let g = match kind {
        GraphKind::Ring => {
            let mut c = vec![0.0; n];
            c[1] = 1.0;
            c[n - 1] = 1.0;
            circulant(&GeneratingVector::new(c)?)
        }
        GraphKind::Complete => {
            let mut c = vec![1.0; n];
            c[0] = 0.0;
            circulant(&GeneratingVector::new(c)?)
        }
        GraphKind::Path => {
            let w = DMatrix::from_fn(n, n, |i, j| if i.abs_diff(j) == 1 { 1.0 } else { 0.0 });
            Graph::new(w)?
        }
        GraphKind::CompleteBipartite { p, q } => {
            if *p < 1 || *q < 1 || p + q != n {
                return param(format!("complete bipartite needs p, q >= 1 and p + q = n; got p = {p}, q = {q}, n = {n}"));
            }
            let w = DMatrix::from_fn(n, n, |i, j| if (i < *p) != (j < *p) { 1.0 } else { 0.0 });
            Graph::new(w)?
        }
        GraphKind::Circulant(c) => {
            if c.len() != n {
                return param(format!("generating vector has length {} but n = {n}", c.len()));
            }
            circulant(c)
        }
    };
    if !g.is_connected() {
        return Err(Error::Structure("generated graph is not connected".into()));
    }
    Ok(g)
}

fn circulant(c: &GeneratingVector) -> Graph {
    let n = c.len();
    let w = DMatrix::from_fn(n, n, |i, j| c.0[(j + n - i) % n]);
    Graph { weights: w }
}

/// Random geometric graph with thresholded Gaussian kernel weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorParams {
    pub radius: f64,
    pub sigma: f64,
    pub threshold: f64,
    pub max_attempts: usize,
}

impl SensorParams {
    /// `sigma = radius / sqrt(2)`; threshold is the kernel value at the cutoff distance.
    pub fn with_radius(radius: f64) -> Self {
        let sigma = radius / std::f64::consts::SQRT_2;
        Self {
            radius,
            sigma,
            threshold: (-radius * radius / (2.0 * sigma * sigma)).exp(),
            max_attempts: 64,
        }
    }
}

impl Default for SensorParams {
    fn default() -> Self {
        Self::with_radius(0.15)
    }
}

/// A sensor graph together with the vertex positions in the unit square.
#[derive(Debug, Clone)]
pub struct SensorGraph {
    pub graph: Graph,
    pub coords: Vec<[f64; 2]>,
    pub attempts: usize,
}

pub fn gen_sensor(n: usize, radius: f64, sigma: f64, threshold: f64, seed: u64) -> Result<Graph> {
    let params = SensorParams {
        radius,
        sigma,
        threshold,
        ..SensorParams::default()
    };
    Ok(gen_sensor_with(n, &params, seed)?.graph)
}

pub fn gen_sensor_with(n: usize, params: &SensorParams, seed: u64) -> Result<SensorGraph> {
    if n < 2 {
        return param(format!("sensor graph needs n >= 2, got {n}"));
    }
    if !(params.radius > 0.0 && params.radius <= std::f64::consts::SQRT_2) {
        return param(format!("radius must lie in (0, sqrt 2], got {}", params.radius));
    }
    if !(params.sigma > 0.0 && params.sigma.is_finite()) {
        return param(format!("sigma must be positive, got {}", params.sigma));
    }
    if !(0.0..1.0).contains(&params.threshold) {
        return param(format!("threshold must lie in [0, 1), got {}", params.threshold));
    }
    if params.max_attempts == 0 {
        return param("max_attempts must be positive");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two_sigma_sq = 2.0 * params.sigma * params.sigma;
    for attempt in 1..=params.max_attempts {
        let coords: Vec<[f64; 2]> = (0..n).map(|_| [rng.random::<f64>(), rng.random::<f64>()]).collect();
        let mut w = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let dx = coords[i][0] - coords[j][0];
                let dy = coords[i][1] - coords[j][1];
                let d2 = dx * dx + dy * dy;
                if d2.sqrt() <= params.radius {
                    let k = (-d2 / two_sigma_sq).exp();
                    if k > params.threshold {
                        w[(i, j)] = k;
                        w[(j, i)] = k;
                    }
                }
            }
        }
        let graph = Graph { weights: w };
        if graph.is_connected() {
            return Ok(SensorGraph {
                graph,
                coords,
                attempts: attempt,
            });
        }
    }
    Err(Error::Generation {
        attempts: params.max_attempts,
    })
}

/// Returns the generating vector if `w_ij = c_{(j - i) mod n}` within `tol`.
pub fn is_circulant(g: &Graph, tol: f64) -> Option<GeneratingVector> {
    let n = g.n();
    let c: Vec<f64> = (0..n).map(|k| g.weights[(0, k)]).collect();
    for i in 0..n {
        for j in 0..n {
            if (g.weights[(i, j)] - c[(j + n - i) % n]).abs() > tol {
                return None;
            }
        }
    }
    // Symmetry of W makes c symmetric up to tol; snap it so the invariant holds exactly.
    let mut sym = c.clone();
    for k in 1..n {
        sym[k] = 0.5 * (c[k] + c[n - k]);
    }
    GeneratingVector::new(sym).ok()
}

/// Common degree if all row sums agree within `tol`.
pub fn is_regular(g: &Graph, tol: f64) -> Option<f64> {
    let d = g.degrees();
    let first = d[0];
    d.iter().all(|x| (x - first).abs() <= tol).then_some(first)
}
