use std::fmt::Write;

use netgen::{arterio_venous, murray_tree, ArterioVenousSpec, MurrayTreeSpec};

use crate::metrics::NetFlowMetrics;
use crate::transient::{run_transient, FlowRecord, Probe, PulsationModel, TransientConfig};
use crate::PumpError;

/// Root inner radius of the pumping networks [m].
pub const ROOT_RADIUS: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub generations: usize,
    /// Branching symmetry for trees, capillary ratio for arterio-venous
    /// networks.
    pub parameter: f64,
    pub metrics: NetFlowMetrics,
}

/// Inlet metrics of a Murray tree driven by `pulsation`.
pub fn murray_pumping(
    generations: usize,
    gamma: f64,
    pulsation: &PulsationModel,
    config: &TransientConfig,
) -> Result<NetFlowMetrics, PumpError> {
    let g = murray_tree(&MurrayTreeSpec::new(generations, gamma, ROOT_RADIUS))?;
    let cfg = TransientConfig {
        probes: vec![Probe::Boundary(0)],
        ..config.clone()
    };
    Ok(run_transient(&g, pulsation, &cfg)?.metrics[0])
}

/// Inlet metrics of an arterio-venous network whose arteries pulsate.
pub fn collapse_pumping(
    generations: usize,
    capillary_ratio: f64,
    pulsation: &PulsationModel,
    config: &TransientConfig,
) -> Result<NetFlowMetrics, PumpError> {
    let mut spec = ArterioVenousSpec::new(generations, capillary_ratio);
    spec.tree.root_radius = ROOT_RADIUS;
    let g = arterio_venous(&spec)?;
    let cfg = TransientConfig {
        probes: vec![Probe::Boundary(0)],
        ..config.clone()
    };
    Ok(run_transient(&g, &pulsation.clone().arteries_only(), &cfg)?.metrics[0])
}

/// Evaluate `job` for every (generations, parameter) pair on scoped
/// threads; rows keep the input order.
fn sweep(
    generations: &[usize],
    parameters: &[f64],
    job: &(dyn Fn(usize, f64) -> Result<NetFlowMetrics, PumpError> + Sync),
) -> Result<Vec<SweepRow>, PumpError> {
    let cases: Vec<(usize, f64)> = parameters
        .iter()
        .flat_map(|&p| generations.iter().map(move |&n| (n, p)))
        .collect();
    let results: Vec<Result<NetFlowMetrics, PumpError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = cases
            .iter()
            .map(|&(n, p)| scope.spawn(move || job(n, p)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    cases
        .into_iter()
        .zip(results)
        .map(|((generations, parameter), r)| {
            Ok(SweepRow {
                generations,
                parameter,
                metrics: r?,
            })
        })
        .collect()
}

/// Net flow of Murray trees over generations × γ.
pub fn murray_sweep(
    generations: &[usize],
    gammas: &[f64],
    pulsation: &PulsationModel,
    config: &TransientConfig,
) -> Result<Vec<SweepRow>, PumpError> {
    sweep(generations, gammas, &|n, g| murray_pumping(n, g, pulsation, config))
}

/// Net flow of arterio-venous networks over generations × capillary ratio.
pub fn capillary_collapse_study(
    generations: &[usize],
    ratios: &[f64],
    pulsation: &PulsationModel,
    config: &TransientConfig,
) -> Result<Vec<SweepRow>, PumpError> {
    sweep(generations, ratios, &|n, r| collapse_pumping(n, r, pulsation, config))
}

fn probe_id(p: &Probe) -> String {
    match p {
        Probe::Boundary(v) => format!("v{v}"),
        Probe::Point { edge, s } => format!("e{edge}@{s}"),
    }
}

/// Time series with columns time_s, probe_id, q_m3_per_s.
pub fn series_csv(rec: &FlowRecord) -> String {
    let mut out = String::from("time_s,probe_id,q_m3_per_s\n");
    for (n, t) in rec.times.iter().enumerate() {
        for (p, s) in rec.probes.iter().zip(&rec.series) {
            writeln!(out, "{t:.9e},{},{:.9e}", probe_id(p), s[n]).unwrap();
        }
    }
    out
}

/// One row per probe: probe_id, V_cycle_uL, eta_percent, max_qosc_m3_per_s.
pub fn summary_csv(rec: &FlowRecord) -> String {
    let mut out = String::from("probe_id,V_cycle_uL,eta_percent,max_qosc_m3_per_s\n");
    for (p, m) in rec.probes.iter().zip(&rec.metrics) {
        writeln!(
            out,
            "{},{:.6},{:.6},{:.9e}",
            probe_id(p),
            m.v_cycle_ul(),
            m.eta_percent(),
            m.max_osc
        )
        .unwrap();
    }
    out
}

/// Sweep table with columns generations, <parameter>, V_cycle_uL, eta_percent.
pub fn sweep_csv(rows: &[SweepRow], parameter: &str) -> String {
    let mut out = format!("generations,{parameter},V_cycle_uL,eta_percent\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{:.6},{:.6}",
            r.generations,
            r.parameter,
            r.metrics.v_cycle_ul(),
            r.metrics.eta_percent()
        )
        .unwrap();
    }
    out
}
