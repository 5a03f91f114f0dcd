//! Turning command-line arguments into library values.

use std::path::Path;
use std::sync::Arc;

use atomic_filters::filters::{classical_thetas, FilterSpec, FrequencyResponse, ShiftDirection};
use atomic_filters::graph::{is_circulant, Graph};
use atomic_filters::signals;
use atomic_filters::spectral::{
    dft_basis, eigendecompose_with, normal_basis, supports_normal_atomic, FourierBasis, RealSpectrum, Solver,
};
use atomic_filters::{Error, GraphSignal};
use num_complex::Complex64;

use crate::output::{read, usage, CliResult};
use crate::{BasisArgs, BasisChoice, DirectionArg, FilterSource, Preset, SignalArgs, SignalKind, SolverArg};

pub fn load_graph(path: &Path) -> CliResult<Graph> {
    Ok(Graph::from_json_str(&read(path)?)?)
}

pub fn direction(d: DirectionArg) -> ShiftDirection {
    match d {
        DirectionArg::Down => ShiftDirection::Down,
        DirectionArg::Up => ShiftDirection::Up,
    }
}

pub fn solver(s: SolverArg) -> Solver {
    match s {
        SolverArg::Ql => Solver::TridiagonalQl,
        SolverArg::Jacobi => Solver::Jacobi,
    }
}

pub struct Context {
    pub graph: Graph,
    pub spectrum: RealSpectrum,
    pub basis: Arc<FourierBasis>,
    pub basis_name: &'static str,
}

pub fn context(path: &Path, args: &BasisArgs, solver_arg: SolverArg) -> CliResult<Context> {
    let graph = load_graph(path)?;
    let spectrum = eigendecompose_with(&graph.laplacian(), solver(solver_arg))?;
    let tol = args.multiplicity_tol.unwrap_or_else(|| spectrum.default_tol());
    let circulant = is_circulant(&graph, 0.0).is_some();
    let (basis, basis_name) = match args.basis {
        BasisChoice::Real => (spectrum.real_basis(), "real"),
        BasisChoice::Normal => (normal_basis(&spectrum, tol)?, "normal"),
        BasisChoice::Dft => {
            if !circulant {
                return usage("--basis dft needs a circulant graph (the DFT does not diagonalize this Laplacian)");
            }
            (dft_basis(graph.n()).with_eigenvalues_from(&graph.laplacian()), "dft")
        }
        BasisChoice::Auto if circulant => (dft_basis(graph.n()).with_eigenvalues_from(&graph.laplacian()), "dft"),
        BasisChoice::Auto if supports_normal_atomic(&spectrum, tol).supported => {
            (normal_basis(&spectrum, tol)?, "normal")
        }
        BasisChoice::Auto => (spectrum.real_basis(), "real"),
    };
    Ok(Context {
        graph,
        spectrum,
        basis: Arc::new(basis),
        basis_name,
    })
}

pub fn filter_spec(src: &FilterSource, n: usize) -> CliResult<FilterSpec> {
    let given = [
        src.spec.is_some(),
        src.preset.is_some(),
        !src.thetas.is_empty(),
        !src.a_real.is_empty(),
    ]
    .iter()
    .filter(|&&b| b)
    .count();
    if given != 1 {
        return usage("give exactly one of --spec, --preset, --thetas, --a-real");
    }
    let dir = direction(src.direction);
    if let Some(path) = &src.spec {
        return Ok(serde_json::from_str(&read(path)?).map_err(Error::from)?);
    }
    if let Some(Preset::ClassicalShift) = src.preset {
        return Ok(FilterSpec::thetas(classical_thetas(n), dir));
    }
    if !src.thetas.is_empty() {
        return Ok(FilterSpec::thetas(src.thetas.clone(), dir));
    }
    let a = response_from_parts(&src.a_real, &src.a_imag)?;
    Ok(FilterSpec::explicit(&a))
}

pub fn response_from_parts(re: &[f64], im: &[f64]) -> CliResult<FrequencyResponse> {
    if !im.is_empty() && im.len() != re.len() {
        return usage(format!("--a-real has {} entries but --a-imag has {}", re.len(), im.len()));
    }
    let a = re
        .iter()
        .enumerate()
        .map(|(k, &r)| Complex64::new(r, im.get(k).copied().unwrap_or(0.0)))
        .collect();
    Ok(FrequencyResponse::from_vec(a)?)
}

/// 1-based vertex flag to 0-based index.
pub fn vertex_index(v: Option<usize>, default: usize, n: usize) -> CliResult<usize> {
    match v {
        None => Ok(default),
        Some(v) if (1..=n).contains(&v) => Ok(v - 1),
        Some(v) => usage(format!("vertex {v} outside 1..={n}")),
    }
}

/// Gaussian by ring index distance on circulant graphs, path index distance otherwise.
pub fn gaussian(graph: &Graph, center: usize, width: f64) -> GraphSignal {
    let n = graph.n();
    if is_circulant(graph, 0.0).is_some() {
        signals::gaussian_ring(n, center, width)
    } else {
        signals::gaussian_path(n, center, width)
    }
}

pub fn signal(graph: &Graph, args: &SignalArgs) -> CliResult<GraphSignal> {
    let n = graph.n();
    if let Some(path) = &args.signal_file {
        return read_signal(path, n);
    }
    let width = args.width.unwrap_or_else(|| signals::default_width(n));
    Ok(match args.signal {
        SignalKind::Gaussian => gaussian(graph, vertex_index(args.vertex, n / 2, n)?, width),
        SignalKind::Pulse => signals::pulse(n, vertex_index(args.vertex, 0, n)?),
        SignalKind::Sine => signals::sine(n),
    })
}

fn read_signal(path: &Path, n: usize) -> CliResult<GraphSignal> {
    let text = read(path)?;
    let mut values = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let parts: Vec<&str> = line.split(',').map(str::trim).collect();
        let parse = |s: &str| s.parse::<f64>().map_err(|_| format!("bad number {s:?} in {}", path.display()));
        let z = match parts.as_slice() {
            [re] => Complex64::new(parse(re).or_else(usage)?, 0.0),
            [re, im] => Complex64::new(parse(re).or_else(usage)?, parse(im).or_else(usage)?),
            _ => return usage(format!("bad line {line:?} in {}", path.display())),
        };
        values.push(z);
    }
    if values.len() != n {
        return usage(format!("signal file has {} values, graph has {n} vertices", values.len()));
    }
    Ok(GraphSignal::from_vec(values))
}
