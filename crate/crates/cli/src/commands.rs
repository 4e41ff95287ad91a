use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use forms::{assemble_dual_hydraulic, assemble_primal, Field, ResistanceField, SourceData};
use netgen::{
    arterio_venous, conditioning_table, convergence_csv, convergence_study, honeycomb, murray_tree,
    pruned_tree, y_graph, y_mms, ArterioVenousSpec, ConditionRow, Family, Formulation,
    MurrayTreeSpec, TableNorm,
};
use netgraph::{GraphMesh, SpatialGraph};
use pump::{
    collapse_pumping, murray_pumping, run_transient, series_csv, summary_csv, sweep_csv, Inertia,
    NetFlowMetrics, Probe, PulsationModel, SweepRow, TransientConfig, Waveform,
};
use solvers::{solve_saddle, SpectrumOptions};
use spaces::DualNorm;
use xsection::{Convention, CrossSectionSpec, FdOptions, TimeLaw};

use crate::args::*;
use crate::svg::{Plot, Series};
use crate::{emit, stamped, CliError, Stamp};

/// Execute one parsed command line.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Generate(a) => generate(g, a),
        Command::Solve(a) => solve(g, a),
        Command::Conditioning(a) => conditioning(g, a),
        Command::Convergence(a) => convergence(g, a),
        Command::Resistance(a) => resistance(g, a),
        Command::Pump(a) => pump_cmd(g, a),
        Command::Collapse(a) => collapse(g, a),
    }
}

/// Command-line spelling of a value.
fn name(v: impl clap::ValueEnum) -> String {
    v.to_possible_value()
        .expect("no skipped values")
        .get_name()
        .to_string()
}

fn log(g: &Global, msg: impl AsRef<str>) {
    if g.verbose {
        eprintln!("{}", msg.as_ref());
    }
}

fn check_result(g: &Global, failures: Vec<String>) -> Result<(), CliError> {
    if !g.check {
        return Ok(());
    }
    if failures.is_empty() {
        log(g, "check passed");
        Ok(())
    } else {
        Err(CliError::Check(failures.join("; ")))
    }
}

fn write_svg(g: &Global, plot: impl FnOnce() -> Plot) -> Result<(), CliError> {
    if let Some(p) = &g.svg {
        emit(Some(p), &plot().render())?;
    }
    Ok(())
}

fn no_svg(g: &Global, what: &str) {
    if g.svg.is_some() {
        eprintln!("warning: {what} has no plot; --svg ignored");
    }
}

/// Run `job` over `items` on at most `threads` workers; results keep the
/// input order.
fn parallel_map<T: Sync, R: Send>(
    items: &[T],
    threads: usize,
    job: impl Fn(&T) -> R + Sync,
) -> Vec<R> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..threads.clamp(1, items.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = job(&items[i]);
                slots.lock().expect("result slots")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("result slots")
        .into_iter()
        .map(|r| r.expect("every item ran"))
        .collect()
}

fn threads(g: &Global) -> Result<usize, CliError> {
    match g.threads {
        Some(0) => Err(CliError::Validation("--threads must be at least 1".into())),
        Some(n) => Ok(n),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn read_network(path: &Path) -> Result<SpatialGraph, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    Ok(SpatialGraph::from_json(&text)?)
}

// ---------------------------------------------------------------- generate

fn generate(g: &Global, a: &GenerateArgs) -> Result<(), CliError> {
    let spec = MurrayTreeSpec::new(a.generations, a.gamma, a.root_radius);
    let graph = match a.kind {
        NetworkKind::Murray => murray_tree(&spec)?,
        NetworkKind::YMms => y_graph(),
        NetworkKind::Av => arterio_venous(&ArterioVenousSpec {
            tree: spec,
            capillary_ratio: a.cap_ratio,
        })?,
        NetworkKind::Honeycomb => honeycomb(a.size)?,
        NetworkKind::Tree => pruned_tree(&spec, a.size)?,
    };
    log(
        g,
        format!(
            "{} vertices, {} edges",
            graph.num_vertices(),
            graph.num_edges()
        ),
    );
    let json = graph.to_json();
    let back = SpatialGraph::from_json(&json)?;
    let failures = if back.to_json() == json {
        vec![]
    } else {
        vec!["network does not round-trip through JSON".to_string()]
    };
    emit(g.out.as_deref(), &format!("{json}\n"))?;
    no_svg(g, "generate");
    check_result(g, failures)
}

// ------------------------------------------------------------------- solve

fn parse_pressures(items: &[String]) -> Result<Vec<(usize, f64)>, CliError> {
    items
        .iter()
        .map(|it| {
            let (v, p) = it.split_once('=').ok_or_else(|| {
                CliError::Validation(format!("pressure `{it}` is not vertex=value"))
            })?;
            let v = v
                .trim()
                .parse()
                .map_err(|_| CliError::Validation(format!("bad vertex in `{it}`")))?;
            let p = p
                .trim()
                .parse()
                .map_err(|_| CliError::Validation(format!("bad pressure in `{it}`")))?;
            Ok((v, p))
        })
        .collect()
}

fn physical_field(graph: &SpatialGraph, nu: f64) -> Result<ResistanceField, CliError> {
    let mut r = Vec::new();
    let mut area = Vec::new();
    for e in graph.edges() {
        let res = xsection::resistance(&CrossSectionSpec::open(e.radius1, e.ratio, nu))?;
        r.push(res.resistance);
        area.push(res.area);
    }
    let per_edge = |v: Vec<f64>| -> Field {
        let v = Arc::new(v);
        Arc::new(move |e, _| v[e])
    };
    let nu_eff: Vec<f64> = area.iter().map(|a| nu / a).collect();
    Ok(ResistanceField::new(
        per_edge(r),
        per_edge(area),
        per_edge(nu_eff),
    ))
}

fn solve(g: &Global, a: &SolveArgs) -> Result<(), CliError> {
    let graph = read_network(&a.network)?;
    let mesh = Arc::new(match a.h {
        Some(h) => GraphMesh::uniform(&graph, h)?,
        None => GraphMesh::with_cells_each(&graph, a.cells)?,
    });
    let field = match a.resistance.as_str() {
        "physical" => physical_field(&graph, a.nu)?,
        s => {
            let r: f64 = s.parse().map_err(|_| {
                CliError::Validation(format!(
                    "resistance `{s}` is neither `physical` nor a number"
                ))
            })?;
            if !(r > 0.0 && r.is_finite()) {
                return Err(CliError::Validation(format!(
                    "resistance {r} must be positive"
                )));
            }
            ResistanceField::uniform(r)
        }
    };
    let boundary = graph.boundary_vertices();
    let mut src = SourceData::zero().with_f(forms::constant(a.source));
    for (v, p) in parse_pressures(&a.pressure)? {
        if !boundary.contains(&v) {
            return Err(CliError::Validation(format!(
                "vertex {v} is not a boundary vertex"
            )));
        }
        src = src.with_boundary_pressure(v, p);
    }
    let sys = match a.formulation {
        FormulationArg::Primal => assemble_primal(&mesh, &field, &src, a.degree)?,
        FormulationArg::Dual => assemble_dual_hydraulic(&mesh, &field, &src, a.degree)?,
    };
    let sol = solve_saddle(&sys)?;
    log(g, format!("relative residual {:e}", sol.residual));
    let q = sol.flux(&sys);
    let p = sol.pressure_block(&sys, 0);
    let mut body = String::from("edge_id,s_m,q_m3_per_s,p_Pa\n");
    for c in 0..mesh.num_cells() {
        let e = mesh.cell_edge(c);
        let s = mesh.cell_midpoint(c);
        let qv = q
            .evaluate(e, s)
            .map_err(|e| CliError::Solver(e.to_string()))?;
        let pv = p
            .evaluate(e, s)
            .map_err(|e| CliError::Solver(e.to_string()))?;
        writeln!(body, "{e},{s:.9e},{qv:.9e},{pv:.9e}").unwrap();
    }
    let stamp = Stamp::new("solve")
        .with("network", a.network.display())
        .with("formulation", name(a.formulation))
        .with(
            "mesh",
            a.h.map_or(format!("cells={}", a.cells), |h| format!("h={h}")),
        )
        .with("degree", a.degree)
        .with("resistance", &a.resistance)
        .with("nu", a.nu)
        .list("pressure", &a.pressure)
        .with("source", a.source)
        .with("seed", g.seed);
    emit(g.out.as_deref(), &stamped(&body, &stamp))?;
    no_svg(g, "solve");
    let failures = if sol.residual <= solvers::RESIDUAL_TOL {
        vec![]
    } else {
        vec![format!(
            "residual {:e} above {:e}",
            sol.residual,
            solvers::RESIDUAL_TOL
        )]
    };
    check_result(g, failures)
}

// ------------------------------------------------------------ conditioning

fn table_norm(a: &ConditioningArgs) -> TableNorm {
    match (a.formulation, a.norm) {
        (FormulationArg::Primal, _) | (_, NormArg::Primal) => TableNorm::Primal,
        (FormulationArg::Dual, NormArg::Unweighted) => TableNorm::Dual(DualNorm::Unweighted),
        (FormulationArg::Dual, NormArg::Weighted) => TableNorm::Dual(DualNorm::Weighted),
        (FormulationArg::Dual, NormArg::RRobust) => TableNorm::Dual(DualNorm::RRobust),
    }
}

fn collect_rows(
    g: &Global,
    rows: Vec<Result<ConditionRow, (usize, f64, netgen::NetgenError)>>,
) -> Result<Vec<ConditionRow>, CliError> {
    let mut out = Vec::new();
    for r in rows {
        match r {
            Ok(row) => out.push(row),
            Err((
                n,
                h,
                netgen::NetgenError::Solver(e @ solvers::SolverError::DimensionCapExceeded { .. }),
            )) => {
                eprintln!("warning: skipping n={n}, h={h}: {e}");
            }
            Err((_, _, e)) => return Err(e.into()),
        }
    }
    if g.verbose {
        for r in &out {
            eprintln!("n={} h={} condition={:.4}", r.n, r.h, r.condition);
        }
    }
    Ok(out)
}

fn conditioning(g: &Global, a: &ConditioningArgs) -> Result<(), CliError> {
    let family = match a.family {
        FamilyArg::Tree => Family::Tree,
        FamilyArg::Honeycomb => Family::Honeycomb,
    };
    let sizes: Vec<usize> = if a.sizes.is_empty() {
        family.sizes().to_vec()
    } else {
        a.sizes.clone()
    };
    let hs: Vec<f64> = if a.h.is_empty() {
        netgen::TABLE_H.to_vec()
    } else {
        a.h.clone()
    };
    if !(a.resistance > 0.0 && a.resistance.is_finite()) {
        return Err(CliError::Validation(format!(
            "resistance {} must be positive",
            a.resistance
        )));
    }
    let norm = table_norm(a);
    let opts = SpectrumOptions {
        cap: a.dense_cap,
        ..Default::default()
    };
    let rows = collect_rows(
        g,
        conditioning_table(family, &sizes, &hs, norm, a.resistance, opts),
    )?;

    let mut body = String::from("n,h,condition_number\n");
    for r in &rows {
        writeln!(body, "{},{},{:.6}", r.n, r.h, r.condition).unwrap();
    }
    let norm_name = match norm {
        TableNorm::Primal => "primal".to_string(),
        TableNorm::Dual(DualNorm::Unweighted) => "unweighted".into(),
        TableNorm::Dual(DualNorm::RRobust) => "r-robust".into(),
        TableNorm::Dual(d) => format!("{d:?}").to_lowercase(),
    };
    let stamp = Stamp::new("conditioning")
        .with("norm", &norm_name)
        .with("family", name(a.family))
        .with("resistance", a.resistance)
        .list("sizes", &sizes)
        .list("h", &hs)
        .with("dense_cap", a.dense_cap)
        .with("seed", g.seed);
    emit(g.out.as_deref(), &stamped(&body, &stamp))?;
    write_svg(g, || Plot {
        title: format!("Condition numbers ({norm_name})"),
        x_label: "internal vertices".into(),
        y_label: "condition number".into(),
        series: hs
            .iter()
            .map(|&h| Series {
                label: format!("h={h}"),
                points: rows
                    .iter()
                    .filter(|r| r.h == h)
                    .map(|r| (r.n as f64, r.condition))
                    .collect(),
            })
            .collect(),
        ..Default::default()
    })?;

    if !g.check {
        return Ok(());
    }
    let mut failures = Vec::new();
    match norm {
        TableNorm::Primal => {
            let phi2 = (3.0 + 5f64.sqrt()) / 2.0;
            for r in rows.iter().filter(|r| (r.condition - phi2).abs() > 0.01) {
                failures.push(format!(
                    "n={} h={}: {:.4} is not 2.618",
                    r.n, r.h, r.condition
                ));
            }
        }
        TableNorm::Dual(DualNorm::Weighted) => {
            for r in rows.iter().filter(|r| r.condition > 4.5) {
                failures.push(format!("n={} h={}: {:.4} above 4.5", r.n, r.h, r.condition));
            }
            let col: Vec<f64> = rows
                .iter()
                .filter(|r| r.h == 0.125)
                .map(|r| r.condition)
                .collect();
            if col.len() > 1 {
                let (lo, hi) = min_max(&col);
                if hi / lo - 1.0 >= 0.15 {
                    failures.push(format!(
                        "h=0.125 column varies by {:.1}%",
                        100.0 * (hi / lo - 1.0)
                    ));
                }
            }
        }
        TableNorm::Dual(DualNorm::RRobust) => {
            let reference =
                collect_rows(g, conditioning_table(family, &sizes, &hs, norm, 1.0, opts))?;
            for (r, r1) in rows.iter().zip(&reference) {
                if (r.condition / r1.condition - 1.0).abs() >= 1e-3 {
                    failures.push(format!(
                        "n={} h={}: {:.4} differs from {:.4} at R=1",
                        r.n, r.h, r.condition, r1.condition
                    ));
                }
            }
        }
        TableNorm::Dual(_) => {
            let col: Vec<&ConditionRow> = rows.iter().filter(|r| r.h == 0.125).collect();
            if let (Some(first), Some(last)) = (col.first(), col.last()) {
                if col.len() > 1 && last.condition < 2.0 * first.condition {
                    failures.push(format!(
                        "growth {:.2} from n={} to n={} is below 2",
                        last.condition / first.condition,
                        first.n,
                        last.n
                    ));
                }
            }
        }
    }
    check_result(g, failures)
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
            (a.min(x), b.max(x))
        })
}

// ------------------------------------------------------------- convergence

fn convergence(g: &Global, a: &ConvergenceArgs) -> Result<(), CliError> {
    if a.degree < 1 || a.levels < 1 {
        return Err(CliError::Validation(
            "degree and levels must be at least 1".into(),
        ));
    }
    let form = match a.formulation {
        FormulationArg::Primal => Formulation::Primal,
        FormulationArg::Dual => Formulation::DualHydraulic,
    };
    let rows = convergence_study(&y_mms(), form, a.degree, a.levels)?;
    let stamp = Stamp::new("convergence")
        .with("formulation", name(a.formulation))
        .with("degree", a.degree)
        .with("levels", a.levels)
        .with("coarsest_h", netgen::COARSEST_H)
        .with("seed", g.seed);
    emit(g.out.as_deref(), &stamped(&convergence_csv(&rows), &stamp))?;
    write_svg(g, || Plot {
        title: format!("Errors, {:?} k={}", a.formulation, a.degree),
        x_label: "h".into(),
        y_label: "error".into(),
        log_x: true,
        log_y: true,
        series: vec![
            Series {
                label: "flux".into(),
                points: rows.iter().map(|r| (r.h, r.err_q)).collect(),
            },
            Series {
                label: "pressure".into(),
                points: rows.iter().map(|r| (r.h, r.err_p)).collect(),
            },
        ],
    })?;

    let k = a.degree as f64;
    let (p_rate, p_tol) = match (form, a.degree) {
        (Formulation::DualHydraulic, 3) => (2.0, 0.2),
        _ => (k, 0.15),
    };
    let mut failures = Vec::new();
    for r in &rows {
        if let (Some(rq), Some(rp)) = (r.rate_q, r.rate_p) {
            if (rq - k).abs() > 0.15 {
                failures.push(format!("flux rate {rq:.2} at h={:.3e}, expected {k}", r.h));
            }
            if (rp - p_rate).abs() > p_tol {
                failures.push(format!(
                    "pressure rate {rp:.2} at h={:.3e}, expected {p_rate}",
                    r.h
                ));
            }
        }
    }
    check_result(g, failures)
}

// -------------------------------------------------------------- resistance

fn parse_kappa(s: &str) -> Result<f64, CliError> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        t => t.parse().map_err(|_| {
            CliError::Validation(format!("permeability `{s}` is neither `inf` nor a number"))
        }),
    }
}

fn resistance(g: &Global, a: &ResistanceArgs) -> Result<(), CliError> {
    let kappa = parse_kappa(&a.kappa)?;
    let spec = CrossSectionSpec::open(a.r1, a.ratio, a.nu).with_porous(a.phi, kappa);
    spec.validate()?;
    let conv = match a.convention {
        ConventionArg::Flux => Convention::Flux,
        ConventionArg::MeanVelocity => Convention::MeanVelocity,
    };
    let mean = match a.points {
        Some(n) if n < 3 => {
            return Err(CliError::Validation(format!("{n} grid points are too few")))
        }
        Some(n) => xsection::annulus_profile_mean_with(
            &spec,
            FdOptions {
                points: Some(n),
                richardson: true,
            },
        )?,
        None => xsection::annulus_profile_mean(&spec)?,
    };
    let res = xsection::resistance_with(&spec, conv)?;
    let porous = if kappa.is_finite() {
        2.0 * a.nu / kappa
    } else {
        0.0
    };
    let drag = match conv {
        Convention::Flux => a.nu / (mean * spec.area()),
        Convention::MeanVelocity => a.nu / mean,
    };
    let body = format!(
        "r1_m,ratio,phi,kappa_m2,nu_m2_per_s,mean_velocity,flux,area_m2,resistance,shape_resistance\n\
         {},{},{},{},{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}\n",
        a.r1,
        a.ratio,
        a.phi,
        kappa,
        a.nu,
        mean,
        mean * spec.area(),
        spec.area(),
        drag + porous,
        res.shape_resistance
    );
    let stamp = Stamp::new("resistance")
        .with("r1", a.r1)
        .with("ratio", a.ratio)
        .with("kappa", kappa)
        .with("phi", a.phi)
        .with("nu", a.nu)
        .with("convention", name(a.convention))
        .with(
            "points",
            a.points.map_or("auto".to_string(), |n| n.to_string()),
        )
        .with("seed", g.seed);
    emit(g.out.as_deref(), &stamped(&body, &stamp))?;
    no_svg(g, "resistance");

    let mut failures = Vec::new();
    if spec.is_open() {
        let exact = xsection::poiseuille_flux(a.r1, spec.r2()) / spec.area();
        let fd = xsection::fd_profile_mean(
            &spec,
            FdOptions {
                points: Some(201),
                richardson: true,
            },
        );
        if (fd / exact - 1.0).abs() > 1e-6 {
            failures.push(format!("FD mean {fd:e} vs closed form {exact:e}"));
        }
    }
    let scaled = CrossSectionSpec {
        r1: 2.0 * a.r1,
        permeability: kappa * 4.0,
        ..spec
    };
    let r2 = xsection::resistance_with(&scaled, conv)?.resistance - porous / 4.0;
    let expected = (res.resistance - porous) * 2f64.powi(conv.scaling_exponent());
    if (r2 / expected - 1.0).abs() > 1e-12 {
        failures.push(format!(
            "scaling of the drag term off by {:e}",
            r2 / expected - 1.0
        ));
    }
    check_result(g, failures)
}

// -------------------------------------------------------------------- pump

fn transient_setup(t: &TransientArgs) -> (PulsationModel, TransientConfig) {
    let mut pulsation = PulsationModel::new(t.eps, t.period);
    if t.literal_waveform {
        pulsation.waveform = Waveform::Literal;
    }
    let mut cfg = TransientConfig::for_period(t.period);
    if let Some(dt) = t.dt {
        cfg.dt = dt;
    }
    cfg.cycles = t.cycles;
    cfg.warmup = t.warmup;
    cfg.cells_per_edge = t.cells;
    cfg.nu = t.nu;
    cfg.law = match t.law {
        LawArg::FixedOuterWall => TimeLaw::FixedOuterWall,
        LawArg::FixedShape => TimeLaw::FixedShape,
    };
    cfg.inertia = match t.inertia {
        InertiaArg::InverseArea => Inertia::InverseArea,
        InertiaArg::Unit => Inertia::Unit,
        InertiaArg::MeanVelocity => Inertia::MeanVelocity,
    };
    (pulsation, cfg)
}

fn transient_stamp(stamp: Stamp, t: &TransientArgs, cfg: &TransientConfig) -> Stamp {
    stamp
        .with("eps", t.eps)
        .with("period", t.period)
        .with("dt", cfg.dt)
        .with("cycles", t.cycles)
        .with("warmup", t.warmup)
        .with("cells_per_edge", t.cells)
        .with("nu", t.nu)
        .with("law", name(t.law))
        .with("inertia", name(t.inertia))
        .with(
            "waveform",
            if t.literal_waveform {
                "literal"
            } else {
                "periodic"
            },
        )
}

fn sweep_rows(
    cases: &[(usize, f64)],
    threads: usize,
    job: impl Fn(usize, f64) -> Result<NetFlowMetrics, pump::PumpError> + Sync,
) -> Result<Vec<SweepRow>, CliError> {
    parallel_map(cases, threads, |&(n, p)| job(n, p))
        .into_iter()
        .zip(cases)
        .map(|(r, &(generations, parameter))| {
            Ok(SweepRow {
                generations,
                parameter,
                metrics: r?,
            })
        })
        .collect()
}

fn sweep_plot(rows: &[SweepRow], params: &[f64], name: &str, title: &str) -> Plot {
    Plot {
        title: title.into(),
        x_label: "generations".into(),
        y_label: "V_cycle [uL]".into(),
        series: params
            .iter()
            .map(|&p| Series {
                label: format!("{name}={p}"),
                points: rows
                    .iter()
                    .filter(|r| r.parameter == p)
                    .map(|r| (r.generations as f64, r.metrics.v_cycle_ul()))
                    .collect(),
            })
            .collect(),
        ..Default::default()
    }
}

fn pump_cmd(g: &Global, a: &PumpArgs) -> Result<(), CliError> {
    let (mut pulsation, mut cfg) = transient_setup(&a.transient);
    if a.arteries_only {
        pulsation = pulsation.arteries_only();
    }
    let stamp = transient_stamp(Stamp::new("pump"), &a.transient, &cfg).with("seed", g.seed);
    match &a.network {
        Some(path) => pump_network(g, a, path, &pulsation, &mut cfg, stamp),
        None => pump_sweep(g, a, &pulsation, &cfg, stamp),
    }
}

fn pump_network(
    g: &Global,
    a: &PumpArgs,
    path: &PathBuf,
    pulsation: &PulsationModel,
    cfg: &mut TransientConfig,
    stamp: Stamp,
) -> Result<(), CliError> {
    let graph = read_network(path)?;
    let boundary = graph.boundary_vertices();
    let probes = if a.probe.is_empty() {
        vec![0]
    } else {
        a.probe.clone()
    };
    for &v in &probes {
        if !boundary.contains(&v) {
            return Err(CliError::Validation(format!(
                "probe vertex {v} is not a boundary vertex"
            )));
        }
    }
    cfg.probes = probes.iter().map(|&v| Probe::Boundary(v)).collect();
    log(
        g,
        format!("{} edges, {} probes", graph.num_edges(), probes.len()),
    );
    let rec = run_transient(&graph, pulsation, cfg)?;
    let stamp = stamp
        .with("network", path.display())
        .with("arteries_only", a.arteries_only)
        .list("probes", &probes);
    let series = stamped(&series_csv(&rec), &stamp);
    let summary = stamped(&summary_csv(&rec), &stamp);
    for (v, m) in probes.iter().zip(&rec.metrics) {
        log(
            g,
            format!(
                "vertex {v}: V_cycle {:.4} uL, eta {:.3}%",
                m.v_cycle_ul(),
                m.eta_percent()
            ),
        );
    }
    match (&g.out, &a.summary) {
        (Some(out), Some(sum)) => {
            emit(Some(out), &series)?;
            emit(Some(sum), &summary)?;
        }
        (Some(out), None) => {
            emit(Some(out), &series)?;
            emit(None, &summary)?;
        }
        (None, Some(sum)) => {
            emit(None, &series)?;
            emit(Some(sum), &summary)?;
        }
        (None, None) => {
            emit(None, &series)?;
            eprint!("{summary}");
        }
    }
    write_svg(g, || Plot {
        title: "Flux at the probes".into(),
        x_label: "t [s]".into(),
        y_label: "q [m^3/s]".into(),
        series: probes
            .iter()
            .zip(&rec.series)
            .map(|(v, s)| Series {
                label: format!("v{v}"),
                points: rec.times.iter().copied().zip(s.iter().copied()).collect(),
            })
            .collect(),
        ..Default::default()
    })?;
    if g.check {
        return Err(CliError::Validation(
            "--check compares Murray tree sweeps only; drop --network".into(),
        ));
    }
    Ok(())
}

fn pump_sweep(
    g: &Global,
    a: &PumpArgs,
    pulsation: &PulsationModel,
    cfg: &TransientConfig,
    stamp: Stamp,
) -> Result<(), CliError> {
    let cases: Vec<(usize, f64)> = a
        .gamma
        .iter()
        .flat_map(|&gm| a.generations.iter().map(move |&n| (n, gm)))
        .collect();
    let rows = sweep_rows(&cases, threads(g)?, |n, gm| {
        let r = murray_pumping(n, gm, pulsation, cfg);
        if g.verbose {
            if let Ok(m) = &r {
                eprintln!(
                    "N={n} gamma={gm}: {:.4} uL ({:.3}%)",
                    m.v_cycle_ul(),
                    m.eta_percent()
                );
            }
        }
        r
    })?;
    let stamp = stamp
        .with("root_radius", pump::ROOT_RADIUS)
        .list("generations", &a.generations)
        .list("gamma", &a.gamma)
        .with("arteries_only", a.arteries_only);
    emit(
        g.out.as_deref(),
        &stamped(&sweep_csv(&rows, "gamma"), &stamp),
    )?;
    write_svg(g, || {
        sweep_plot(&rows, &a.gamma, "gamma", "Net flow of Murray trees")
    })?;

    let mut failures = Vec::new();
    for r in rows.iter().filter(|r| r.parameter == 1.0) {
        let (v, eta) = (r.metrics.v_cycle_ul(), r.metrics.eta_percent());
        if r.generations == 1 && v.abs() >= 0.005 {
            failures.push(format!("single vessel moves {v:.4} uL"));
        }
        if r.generations == 5 {
            if !(0.55..=1.1).contains(&v) {
                failures.push(format!("N=5: V_cycle {v:.3} uL outside [0.55, 1.1]"));
            }
            if !(2.5..=5.5).contains(&eta) {
                failures.push(format!("N=5: eta {eta:.2}% outside [2.5, 5.5]"));
            }
        }
    }
    let mut gamma1: Vec<&SweepRow> = rows
        .iter()
        .filter(|r| r.parameter == 1.0 && r.generations >= 2)
        .collect();
    gamma1.sort_by_key(|r| r.generations);
    for w in gamma1.windows(2) {
        if w[1].metrics.v_cycle <= w[0].metrics.v_cycle {
            failures.push(format!(
                "V_cycle does not grow from N={} to N={}",
                w[0].generations, w[1].generations
            ));
        }
    }
    check_result(g, failures)
}

// ---------------------------------------------------------------- collapse

fn collapse(g: &Global, a: &CollapseArgs) -> Result<(), CliError> {
    let (pulsation, cfg) = transient_setup(&a.transient);
    let cases: Vec<(usize, f64)> = a
        .ratios
        .iter()
        .flat_map(|&r| a.generations.iter().map(move |&n| (n, r)))
        .collect();
    let rows = sweep_rows(&cases, threads(g)?, |n, r| {
        let res = collapse_pumping(n, r, &pulsation, &cfg);
        if g.verbose {
            if let Ok(m) = &res {
                eprintln!(
                    "N={n} ratio={r}: {:.4} uL ({:.3}%)",
                    m.v_cycle_ul(),
                    m.eta_percent()
                );
            }
        }
        res
    })?;
    let stamp = transient_stamp(Stamp::new("collapse"), &a.transient, &cfg)
        .with("root_radius", pump::ROOT_RADIUS)
        .list("generations", &a.generations)
        .list("ratios", &a.ratios)
        .with("pulsating", "arteries")
        .with("seed", g.seed);
    emit(
        g.out.as_deref(),
        &stamped(&sweep_csv(&rows, "capillary_ratio"), &stamp),
    )?;
    write_svg(g, || {
        sweep_plot(
            &rows,
            &a.ratios,
            "ratio",
            "Net flow of arterio-venous networks",
        )
    })?;

    let mut failures = Vec::new();
    for r in &rows {
        let eta = r.metrics.eta_percent();
        if r.parameter == 0.01 && eta.abs() >= 0.1 {
            failures.push(format!(
                "N={} ratio 0.01: eta {eta:.3}% not below 0.1%",
                r.generations
            ));
        }
        if r.parameter == 1.0 && !(0.4..=3.0).contains(&eta) {
            failures.push(format!(
                "N={} ratio 1: eta {eta:.3}% outside [0.4, 3]",
                r.generations
            ));
        }
    }
    let mut open: Vec<&SweepRow> = rows.iter().filter(|r| r.parameter == 1.0).collect();
    open.sort_by_key(|r| r.generations);
    for w in open.windows(2) {
        if w[1].metrics.eta <= w[0].metrics.eta {
            failures.push(format!(
                "eta does not grow from N={} to N={}",
                w[0].generations, w[1].generations
            ));
        }
    }
    check_result(g, failures)
}
