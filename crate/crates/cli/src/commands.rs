use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use atomic_filters::figures::{compute_figure, FigureData, FigureId, FigureParams};
use atomic_filters::filters::{
    apply, check_properties_with_laplacian, comparison_shift, polynomial_expand, ComparisonKind, FilterSpec,
    FrequencyResponse,
};
use atomic_filters::frames::{
    analyze, build_frame_with, coefficients_csv, lemma_unitary_decompose, parse_coefficients_csv, power_responses,
    synthesize, FrameFile, FrameOptions,
};
use atomic_filters::graph::{
    gen_sensor_with, generate, is_circulant, is_regular, Graph, GraphFile, GraphKind, GeneratingVector, SensorParams,
};
use atomic_filters::linalg::max_abs_vec;
use atomic_filters::spectral::{multiplicity_partition, supports_normal_atomic, FourierBasis, SpectrumFile};
use atomic_filters::{signals, Error, GraphSignal};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::inputs::{self, context, direction, filter_spec, gaussian, vertex_index, Context};
use crate::output::{self, usage, write_csv, write_json, write_report, write_svg, CliResult};
use crate::svg::{stem_plot, Series};
use crate::{
    Command, CompareKind, FilterCmd, FrameArgs, FrameCmd, GenArgs, GraphCmd, InfoArgs, KindArg, ReproArgs,
    SolverArg, SpectrumCmd, WindowKind,
};

pub fn run(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Graph(GraphCmd::Gen(args)) => graph_gen(&args),
        Command::Graph(GraphCmd::Info(args)) => graph_info(&args),
        Command::Spectrum(SpectrumCmd::Compute(args)) => {
            let ctx = context(&args.graph, &args.basis, args.solver)?;
            write_json(&args.output, &ctx.basis.to_file(), |f: SpectrumFile| {
                FourierBasis::from_file(&f).map(|_| ()).map_err(|e| e.to_string())
            })?;
            announce(&args.output, &format!("{} basis, N = {}", ctx.basis_name, ctx.basis.n()));
            Ok(())
        }
        Command::Filter(cmd) => filter(cmd),
        Command::Frame(cmd) => frame(cmd),
        Command::Repro(args) => repro(&args),
    }
}

fn announce(path: &Path, what: &str) {
    println!("wrote {} ({what})", output::resolve(path).display());
}

fn graph_gen(args: &GenArgs) -> CliResult<()> {
    let need_n = || args.n.ok_or_else(|| Error::Parameter("--n is required for this kind".into()));
    let mut coords = None;
    let graph = match args.kind {
        KindArg::Ring => generate(&GraphKind::Ring, need_n()?)?,
        KindArg::Path => generate(&GraphKind::Path, need_n()?)?,
        KindArg::Complete => generate(&GraphKind::Complete, need_n()?)?,
        KindArg::Bipartite => {
            let (Some(p), Some(q)) = (args.p, args.q) else {
                return usage("--kind bipartite needs --p and --q");
            };
            generate(&GraphKind::CompleteBipartite { p, q }, args.n.unwrap_or(p + q))?
        }
        KindArg::Circulant => {
            if args.c.is_empty() {
                return usage("--kind circulant needs --c c0,c1,...");
            }
            let n = args.n.unwrap_or(args.c.len());
            generate(&GraphKind::Circulant(GeneratingVector::new(args.c.clone())?), n)?
        }
        KindArg::Sensor => {
            let Some(seed) = args.seed else {
                return usage("--kind sensor needs --seed");
            };
            let mut params = SensorParams::with_radius(args.radius);
            if let Some(s) = args.sigma {
                params.sigma = s;
            }
            params.threshold = args
                .threshold
                .unwrap_or_else(|| (-params.radius * params.radius / (2.0 * params.sigma * params.sigma)).exp());
            let sg = gen_sensor_with(need_n()?, &params, seed)?;
            coords = Some(sg.coords);
            sg.graph
        }
    };
    let expected = graph.clone();
    write_json(&args.output, &graph.to_json(), move |f: GraphFile| {
        let text = serde_json::to_string(&f).map_err(|e| e.to_string())?;
        match Graph::from_json_str(&text) {
            Ok(g) if g == expected => Ok(()),
            Ok(_) => Err("graph read back differs".into()),
            Err(e) => Err(e.to_string()),
        }
    })?;
    announce(&args.output, &format!("N = {}, {} edges", graph.n(), graph.edges().len()));
    if let (Some(path), Some(coords)) = (&args.coords, coords) {
        let mut csv = String::from("vertex,x,y\n");
        for (i, p) in coords.iter().enumerate() {
            let _ = writeln!(csv, "{i},{:e},{:e}", p[0], p[1]);
        }
        write_csv(path, &csv, "vertex,x,y", coords.len())?;
        announce(path, "sensor coordinates");
    }
    Ok(())
}

#[derive(Serialize)]
struct GraphInfo {
    n: usize,
    edges: usize,
    connected: bool,
    regular_degree: Option<f64>,
    circulant: Option<Vec<f64>>,
    eigenvalues: Vec<f64>,
    /// `(value, multiplicity)` per group.
    multiplicities: Vec<(f64, usize)>,
    normal_basis_supported: bool,
    odd_multiplicity_groups: Vec<(f64, usize)>,
    auto_basis: &'static str,
}

fn graph_info(args: &InfoArgs) -> CliResult<()> {
    let graph = inputs::load_graph(&args.graph)?;
    let connected = graph.is_connected();
    let mut info = GraphInfo {
        n: graph.n(),
        edges: graph.edges().len(),
        connected,
        regular_degree: is_regular(&graph, 0.0),
        circulant: is_circulant(&graph, 0.0).map(|c| c.as_slice().to_vec()),
        eigenvalues: Vec::new(),
        multiplicities: Vec::new(),
        normal_basis_supported: false,
        odd_multiplicity_groups: Vec::new(),
        auto_basis: "none",
    };
    if connected {
        let ctx = context(&args.graph, &crate::BasisArgs { basis: crate::BasisChoice::Auto, multiplicity_tol: None }, SolverArg::Ql)?;
        let s = &ctx.spectrum;
        let tol = s.default_tol();
        let support = supports_normal_atomic(s, tol);
        info.eigenvalues = s.eigenvalues.iter().copied().collect();
        info.multiplicities = multiplicity_partition(s, tol)
            .groups
            .iter()
            .map(|g| (g.value, g.multiplicity()))
            .collect();
        info.normal_basis_supported = support.supported;
        info.odd_multiplicity_groups = support.odd_groups;
        info.auto_basis = ctx.basis_name;
    }
    match &args.report {
        Some(path) => {
            write_report(path, &info)?;
            announce(path, "graph description");
        }
        None => print!("{}", output::to_json(&info)?),
    }
    Ok(())
}

fn build_filter(ctx: &Context, spec: &FilterSpec) -> CliResult<atomic_filters::filters::Filter> {
    Ok(spec.build(&ctx.basis, &ctx.graph, &ctx.spectrum)?)
}

/// Adds `"basis"` to a serialized report object.
fn with_basis<T: Serialize>(value: &T, basis: &str) -> CliResult<Value> {
    let mut v = serde_json::to_value(value).map_err(Error::from)?;
    if let Value::Object(map) = &mut v {
        map.insert("basis".into(), Value::String(basis.into()));
    }
    Ok(v)
}

fn filter(cmd: FilterCmd) -> CliResult<()> {
    match cmd {
        FilterCmd::Make {
            graph,
            basis,
            source,
            output,
        } => {
            let ctx = context(&graph, &basis, SolverArg::Ql)?;
            let spec = filter_spec(&source, ctx.graph.n())?;
            build_filter(&ctx, &spec)?;
            let (basis_arc, g, s) = (Arc::clone(&ctx.basis), ctx.graph.clone(), ctx.spectrum.clone());
            write_json(&output, &spec, move |back: FilterSpec| {
                back.build(&basis_arc, &g, &s).map(|_| ()).map_err(|e| e.to_string())
            })?;
            announce(&output, "filter spec");
        }
        FilterCmd::Check {
            graph,
            basis,
            source,
            trials,
            seed,
            tol,
            report,
        } => {
            let ctx = context(&graph, &basis, SolverArg::Ql)?;
            let f = build_filter(&ctx, &filter_spec(&source, ctx.graph.n())?)?;
            let r = check_properties_with_laplacian(&f, &ctx.graph.laplacian(), trials, seed, tol);
            write_report(&report, &with_basis(&r, ctx.basis_name)?)?;
            announce(
                &report,
                &format!(
                    "atomic {}, norm-preserving {}, periodic {}, real-preserving {}, normal {}",
                    r.atomic.holds, r.norm_preserving.holds, r.periodic.holds, r.real_preserving.holds, r.normal
                ),
            );
        }
        FilterCmd::Apply {
            graph,
            basis,
            source,
            signal,
            power,
            output,
            svg,
        } => {
            let ctx = context(&graph, &basis, SolverArg::Ql)?;
            let f = build_filter(&ctx, &filter_spec(&source, ctx.graph.n())?)?;
            let x = inputs::signal(&ctx.graph, &signal)?;
            let y = apply(&f, &x, power)?;
            let header = "vertex,input_re,input_im,output_re,output_im";
            let mut csv = format!("{header}\n");
            for i in 0..x.len() {
                let _ = writeln!(csv, "{i},{:e},{:e},{:e},{:e}", x[i].re, x[i].im, y[i].re, y[i].im);
            }
            write_csv(&output, &csv, header, x.len())?;
            announce(&output, &format!("H^{power} x, imaginary energy fraction {:.3e}", signals::imaginary_energy_fraction(&y)));
            if let Some(path) = svg {
                let (xr, yr, yi) = (re(&x), re(&y), im(&y));
                let plot = stem_plot(
                    &format!("H^{power} x ({} basis)", ctx.basis_name),
                    &[
                        Series { label: "x", values: &xr },
                        Series { label: "Re H x", values: &yr },
                        Series { label: "Im H x", values: &yi },
                    ],
                );
                write_svg(&path, &plot)?;
                announce(&path, "stem plot");
            }
        }
        FilterCmd::Expand {
            graph,
            basis,
            source,
            target,
            report,
        } => {
            let ctx = context(&graph, &basis, SolverArg::Ql)?;
            let s = build_filter(&ctx, &filter_spec(&source, ctx.graph.n())?)?;
            let target_spec: FilterSpec =
                serde_json::from_str(&output::read(&target)?).map_err(Error::from)?;
            let b = build_filter(&ctx, &target_spec)?;
            let e = polynomial_expand(&s, b.response())?;
            write_report(&report, &with_basis(&e, ctx.basis_name)?)?;
            announce(
                &report,
                &format!("{} coefficients, residual {:.3e}", e.coeffs.len(), e.residual),
            );
        }
        FilterCmd::Compare {
            graph,
            basis,
            kind,
            rho,
            h,
            phi,
            report,
        } => {
            let ctx = context(&graph, &basis, SolverArg::Ql)?;
            let need_h = || h.ok_or_else(|| Error::Parameter("this comparison needs --h".into()));
            let kind = match kind {
                CompareKind::Adjacency => ComparisonKind::Adjacency,
                CompareKind::Girault => ComparisonKind::Girault { rho },
                CompareKind::Gavili => ComparisonKind::Gavili { phi },
                CompareKind::Schrodinger => ComparisonKind::Schrodinger { h: need_h()? },
                CompareKind::SqrtSchrodinger => ComparisonKind::SqrtSchrodinger { h: need_h()? },
            };
            let shift = comparison_shift(&ctx.graph, &ctx.spectrum, &ctx.basis, &kind)?;
            let out = json!({
                "basis": ctx.basis_name,
                "operator": kind,
                "is_filter": shift.filter.is_some(),
                "diagnostic": shift.diagnostic,
                "report": shift.report,
            });
            write_report(&report, &out)?;
            announce(&report, &shift.diagnostic);
        }
    }
    Ok(())
}

fn re(x: &GraphSignal) -> Vec<f64> {
    x.iter().map(|z| z.re).collect()
}

fn im(x: &GraphSignal) -> Vec<f64> {
    x.iter().map(|z| z.im).collect()
}

struct BuiltFrame {
    ctx: Context,
    dict: atomic_filters::frames::FrameDictionary,
}

fn frame_from(args: &FrameArgs) -> CliResult<BuiltFrame> {
    let ctx = context(&args.graph, &args.basis, SolverArg::Ql)?;
    let n = ctx.graph.n();
    let width = args.width.unwrap_or_else(|| signals::default_width(n));
    let g = match args.window {
        WindowKind::Gaussian => gaussian(&ctx.graph, vertex_index(args.vertex, n / 2, n)?, width),
        WindowKind::Pulse => signals::pulse(n, vertex_index(args.vertex, 0, n)?),
        WindowKind::Random => signals::random_complex(n, 1, args.window_seed).remove(0),
    };
    let a = power_responses(&FrequencyResponse::classical(n, direction(args.direction)));
    let dict = build_frame_with(
        &ctx.basis,
        &g,
        &a,
        FrameOptions {
            normalize_window: !args.no_normalize,
        },
    )?;
    Ok(BuiltFrame { ctx, dict })
}

fn frame(cmd: FrameCmd) -> CliResult<()> {
    match cmd {
        FrameCmd::Build { frame, output } => {
            let b = frame_from(&frame)?;
            let file = b.dict.to_file();
            let expected = file.clone();
            write_json(&output, &file, move |back: FrameFile| {
                if back == expected {
                    Ok(())
                } else {
                    Err("frame file read back differs".into())
                }
            })?;
            announce(
                &output,
                &format!("{} basis, bounds [{:.6e}, {:.6e}]", b.ctx.basis_name, b.dict.bounds.0, b.dict.bounds.1),
            );
        }
        FrameCmd::Roundtrip {
            frame,
            signals: count,
            seed,
            coeffs,
            report,
        } => {
            let b = frame_from(&frame)?;
            let d = &b.dict;
            let n = d.n();
            let mut max_error: f64 = 0.0;
            let mut max_relative: f64 = 0.0;
            let mut worst_parseval: f64 = 0.0;
            let (alpha, beta) = d.bounds;
            let mut inequality_holds = true;
            let mut first = None;
            for f in signals::random_complex(n, count, seed) {
                let c = analyze(d, &f)?;
                let back = synthesize(d, &c)?;
                let err = max_abs_vec(&(back - &f));
                max_error = max_error.max(err);
                max_relative = max_relative.max(err / max_abs_vec(&f).max(1.0));
                let energy: f64 = c.iter().map(|z| z.norm_sqr()).sum();
                let parseval: f64 = (0..n).map(|v| d.weights[v] * f[v].norm_sqr()).sum();
                worst_parseval = worst_parseval.max((energy - parseval).abs() / parseval.max(f64::MIN_POSITIVE));
                let fn2 = f.norm_squared();
                let eps = 1e-9 * beta * fn2;
                inequality_holds &= alpha * fn2 - eps <= energy && energy <= beta * fn2 + eps;
                first.get_or_insert(c);
            }
            if let (Some(path), Some(c)) = (&coeffs, &first) {
                let csv = coefficients_csv(c);
                let (j, nn) = (c.nrows(), c.ncols());
                let expected = c.clone();
                output::write_checked(path, &csv, |s| {
                    let back = parse_coefficients_csv(s, j, nn).map_err(|e| e.to_string())?;
                    let diff = (back - &expected).iter().fold(0.0f64, |m, z| m.max(z.norm()));
                    if diff <= 1e-12 * expected.iter().fold(1.0f64, |m, z| m.max(z.norm())) {
                        Ok(())
                    } else {
                        Err(format!("coefficients differ by {diff:e} after parsing"))
                    }
                })?;
                announce(path, "coefficients of the first signal");
            }
            let out = json!({
                "n": n,
                "j": d.j(),
                "basis": b.ctx.basis_name,
                "normalized": d.normalized,
                "bounds": [alpha, beta],
                "tight": d.is_tight(1e-10),
                "signals": count,
                "seed": seed,
                "max_error": max_error,
                "max_relative_error": max_relative,
                "parseval_max_relative_deviation": worst_parseval,
                "frame_inequality_holds": inequality_holds,
            });
            write_report(&report, &out)?;
            announce(&report, &format!("max reconstruction error {max_error:.3e}"));
        }
        FrameCmd::Lemma {
            thetas,
            direction: dir,
            a_real,
            a_imag,
            tol,
            report,
        } => {
            let a = match (thetas.is_empty(), a_real.is_empty()) {
                (false, true) => FrequencyResponse::from_thetas(&thetas, direction(dir)),
                (true, false) => inputs::response_from_parts(&a_real, &a_imag)?,
                _ => return usage("give exactly one of --thetas, --a-real"),
            };
            let pm = power_responses(&a);
            let gram = pm.adjoint() * &pm;
            let gram_residual = gram
                .iter()
                .enumerate()
                .map(|(idx, z)| {
                    let (i, j) = (idx % gram.nrows(), idx / gram.nrows());
                    (z - if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }).norm()
                })
                .fold(0.0f64, f64::max);
            let dec = lemma_unitary_decompose(&a, tol);
            let out = json!({
                "n": a.len(),
                "tol": tol,
                "unitary": dec.is_some(),
                "gram_residual": gram_residual,
                "decomposition": dec,
            });
            write_report(&report, &out)?;
            announce(
                &report,
                &format!("unitary {}, Gram residual {gram_residual:.3e}", dec.is_some()),
            );
        }
    }
    Ok(())
}

fn repro(args: &ReproArgs) -> CliResult<()> {
    let id: FigureId = args.figure.parse()?;
    let params = FigureParams {
        n: args.n,
        seed: args.seed,
        power: args.power,
    };
    let data = compute_figure(id, &params)?;
    let dir = match &args.outdir {
        Some(d) => d.clone(),
        None => std::env::var_os(output::OUT_DIR_ENV)
            .filter(|d| !d.is_empty())
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(".")),
    };
    let base = dir.join(id.name());
    let csv_path = base.with_extension("csv");
    let header = std::iter::once("vertex".to_string())
        .chain(data.columns.iter().map(|c| c.name.clone()))
        .collect::<Vec<_>>()
        .join(",");
    write_csv(&absolute(&csv_path), &data.to_csv(), &header, data.n)?;
    write_svg(&absolute(&base.with_extension("svg")), &figure_svg(&data))?;
    let summary = json!({
        "id": id.name(),
        "n": data.n,
        "seed": args.seed,
        "power": args.power.unwrap_or(id.defaults().1),
        "convention": data.convention,
        "metrics": data.metrics,
    });
    write_report(&absolute(&base.with_extension("json")), &summary)?;
    println!("{} -> {}.{{csv,svg,json}}", id.name(), base.display());
    let metrics: BTreeMap<_, _> = data.metrics.iter().collect();
    for (k, v) in metrics {
        println!("  {k} = {v:.6e}");
    }
    Ok(())
}

/// Paths under the repro directory are final; anchor relative ones to the
/// working directory so `resolve` leaves them alone.
fn absolute(p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        std::env::current_dir().map(|d| d.join(p)).unwrap_or_else(|_| p.to_path_buf())
    }
}

fn figure_svg(data: &FigureData) -> String {
    let series: Vec<Series<'_>> = data
        .columns
        .iter()
        .filter(|c| c.name != "x" && c.name != "y")
        .map(|c| Series {
            label: &c.name,
            values: &c.values,
        })
        .collect();
    stem_plot(&format!("{} ({})", data.id.name(), data.convention), &series)
}
