use std::f64::consts::PI;

use netgen::{arterio_venous, murray_tree, ArterioVenousSpec, MurrayTreeSpec};
use netgraph::EdgeKind;
use proptest::prelude::*;
use pump::*;

fn tree(n: usize) -> netgraph::SpatialGraph {
    murray_tree(&MurrayTreeSpec::new(n, 1.0, ROOT_RADIUS)).unwrap()
}

fn sampled(f: impl Fn(f64) -> f64, steps: usize, cycles: usize) -> Vec<f64> {
    let dt = 1.0 / steps as f64;
    (0..=steps * cycles).map(|n| f(n as f64 * dt)).collect()
}

#[test]
fn pure_oscillation_has_no_direction() {
    let s = sampled(|t| (2.0 * PI * t).sin(), 200, 2);
    let m = net_flow_metrics(&s, 1.0 / 200.0, 1.0).unwrap();
    assert!(m.mean_rate.abs() < 1e-15);
    assert!((m.max_osc - 1.0).abs() < 1e-12);
    assert!(m.eta.abs() < 1e-15);
}

#[test]
fn offset_sine_gives_four_percent() {
    let s = sampled(|t| 0.04 + (2.0 * PI * t).sin(), 200, 1);
    let m = net_flow_metrics(&s, 1.0 / 200.0, 1.0).unwrap();
    assert!((m.eta_percent() - 4.0).abs() < 1e-9, "{}", m.eta_percent());
    assert!((m.v_cycle - 0.04).abs() < 1e-12);
}

#[test]
fn constant_series_flags_zero_oscillation() {
    let m = net_flow_metrics(&[2.0; 11], 0.1, 1.0).unwrap();
    assert!(m.zero_oscillation);
    assert_eq!(m.eta, 0.0);
    assert_eq!(m.eta_checked(), Err(PumpError::ZeroOscillation));
}

#[test]
fn metrics_reject_short_or_misaligned_series() {
    assert!(net_flow_metrics(&[0.0; 5], 0.1, 1.0).is_err());
    assert!(steps_per_cycle(1.0, 0.3).is_err());
    assert_eq!(steps_per_cycle(1.0, 0.005).unwrap(), 200);
}

#[test]
fn zero_amplitude_stays_at_rest() {
    let g = tree(3);
    let mut cfg = TransientConfig::for_period(1.0);
    cfg.cycles = 2;
    cfg.warmup = 1;
    let rec = run_transient(&g, &PulsationModel::new(0.0, 1.0), &cfg).unwrap();
    assert!(rec.series[0].iter().all(|&q| q == 0.0));
    let model = TransientModel::new(&g, PulsationModel::new(0.0, 1.0), cfg).unwrap();
    let step = model.step_implicit_euler(&vec![0.0; model.mesh.num_cells()], 0.3, 0.005).unwrap();
    assert!(step.q.iter().all(|q| q.abs() <= 1e-12));
}

#[test]
fn wall_motion_source_at_time_zero() {
    // A = π(R2² − R1²): ∂_t A = −2π R1 ∂_t R1 = −2π·1e-3·(2π·0.1·1e-3).
    let g = tree(1);
    let model = TransientModel::new(&g, PulsationModel::new(0.1, 1.0), TransientConfig::for_period(1.0)).unwrap();
    let st = model.state(0.0).unwrap();
    let expected = -2.0 * PI * 1e-3 * (2.0 * PI * 0.1 * 1e-3);
    assert!((st.area_rate[0] / expected - 1.0).abs() < 1e-12);

    let literal = PulsationModel {
        waveform: Waveform::Literal,
        ..PulsationModel::new(0.1, 1.0)
    };
    let model = TransientModel::new(&g, literal, TransientConfig::for_period(1.0)).unwrap();
    let st = model.state(0.0).unwrap();
    assert!((st.area_rate[0] + 6.283e-7).abs() < 1e-10);
}

#[test]
fn single_vessel_is_symmetric() {
    let g = tree(1);
    let l = g.edge(0).length;
    let mut cfg = TransientConfig::for_period(1.0);
    cfg.cells_per_edge = 21;
    cfg.cycles = 2;
    cfg.warmup = 1;
    cfg.probes = vec![
        Probe::Point { edge: 0, s: 0.5 * l },
        Probe::Boundary(0),
        Probe::Boundary(1),
    ];
    let rec = run_transient(&g, &PulsationModel::new(0.1, 1.0), &cfg).unwrap();
    let stroke = rec.metrics[1].max_osc;
    assert!(stroke > 0.0);
    for (a, b) in rec.series[1].iter().zip(&rec.series[2]) {
        assert!((a + b).abs() <= 1e-10 * stroke);
    }
    assert!(rec.series[0].iter().all(|q| q.abs() <= 1e-10 * stroke));
    // Stroke volume T·max|q_osc| with T = 1 s.
    assert!(rec.metrics[1].v_cycle.abs() < 1e-3 * stroke);
}

#[test]
fn infinite_step_is_the_stationary_solve() {
    let g = tree(2);
    let model = TransientModel::new(&g, PulsationModel::new(0.1, 1.0), TransientConfig::for_period(1.0)).unwrap();
    let n = model.mesh.num_cells();
    let junk: Vec<f64> = (0..n).map(|i| i as f64).collect();
    let a = model.step_implicit_euler(&junk, 0.1, f64::INFINITY).unwrap();
    let b = model.step_implicit_euler(&vec![0.0; n], 0.1, f64::INFINITY).unwrap();
    assert_eq!(a.q, b.q);
    // A huge finite step from a nearby state approaches it.
    let near: Vec<f64> = b.q.iter().map(|q| 10.0 * q).collect();
    let c = model.step_implicit_euler(&near, 0.1, 1e6).unwrap();
    let scale = b.q.iter().fold(0.0f64, |m, q| m.max(q.abs()));
    for (x, y) in c.q.iter().zip(&b.q) {
        assert!((x - y).abs() <= 1e-6 * scale);
    }
}

#[test]
fn mass_balance_every_step() {
    let mut cfg = TransientConfig::for_period(1.0);
    cfg.cycles = 2;
    cfg.warmup = 1;
    let rec = run_transient(&tree(3), &PulsationModel::new(0.1, 1.0), &cfg).unwrap();
    assert!(rec.max_mass_defect <= 1e-10, "{}", rec.max_mass_defect);
}

#[test]
fn murray_tree_single_vessel_null_result() {
    let m = murray_pumping(1, 1.0, &PulsationModel::new(0.1, 1.0), &TransientConfig::for_period(1.0)).unwrap();
    assert!(m.v_cycle_ul().abs() < 0.005);
}

#[test]
fn all_pulsating_arterio_venous_network_is_mirror_symmetric() {
    let mut spec = ArterioVenousSpec::new(3, 1.0);
    spec.tree.root_radius = ROOT_RADIUS;
    let g = arterio_venous(&spec).unwrap();
    let mut cfg = TransientConfig::for_period(1.0);
    cfg.cells_per_edge = 21;
    cfg.cycles = 2;
    cfg.warmup = 1;
    cfg.probes = g
        .edges()
        .iter()
        .filter(|e| e.kind == Some(EdgeKind::Capillary))
        .map(|e| Probe::Point { edge: e.id, s: 0.5 * e.length })
        .collect();
    cfg.probes.push(Probe::Boundary(0));
    let rec = run_transient(&g, &PulsationModel::new(0.1, 1.0), &cfg).unwrap();
    let stroke = rec.metrics.last().unwrap().max_osc;
    for s in &rec.series[..rec.series.len() - 1] {
        assert!(s.iter().all(|q| q.abs() <= 1e-9 * stroke));
    }
}

#[test]
fn net_flow_is_first_order_in_time() {
    let g = tree(3);
    let v = |steps: usize| {
        let mut cfg = TransientConfig::for_period(1.0);
        cfg.dt = 1.0 / steps as f64;
        run_transient(&g, &PulsationModel::new(0.1, 1.0), &cfg).unwrap().metrics[0].v_cycle
    };
    let (a, b, c) = (v(100), v(200), v(400));
    let order = ((a - b) / (b - c)).abs().log2();
    assert!((0.8..=1.2).contains(&order), "order {order}: {a} {b} {c}");
}

#[test]
fn csv_output_is_reproducible() {
    let mut cfg = TransientConfig::for_period(1.0);
    cfg.dt = 1.0 / 40.0;
    cfg.cycles = 2;
    cfg.warmup = 1;
    let run = || run_transient(&tree(2), &PulsationModel::new(0.1, 1.0), &cfg).unwrap();
    let (a, b) = (run(), run());
    assert_eq!(series_csv(&a), series_csv(&b));
    assert_eq!(summary_csv(&a), summary_csv(&b));
    assert!(summary_csv(&a).starts_with("probe_id,V_cycle_uL,eta_percent,max_qosc_m3_per_s\n"));
    assert_eq!(series_csv(&a).lines().count(), 1 + 81);
}

#[test]
fn invalid_configurations() {
    let g = tree(1);
    let mut cfg = TransientConfig::for_period(1.0);
    cfg.dt = 0.1;
    assert!(matches!(
        TransientModel::new(&g, PulsationModel::new(0.1, 1.0), cfg),
        Err(PumpError::InvalidConfig(_))
    ));
    let mut cfg = TransientConfig::for_period(1.0);
    cfg.cycles = 6;
    assert!(TransientModel::new(&g, PulsationModel::new(0.1, 1.0), cfg).is_err());
    let cfg = TransientConfig::for_period(1.0);
    assert!(TransientModel::new(&g, PulsationModel::new(1.0, 1.0), cfg.clone()).is_err());
    assert!(TransientModel::new(&g, PulsationModel::new(0.1, -1.0), cfg).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn eta_recovers_offset(offset in -0.5f64..0.5, amp in 0.1f64..10.0) {
        let s = sampled(|t| amp * (offset + (2.0 * PI * t).sin()), 100, 1);
        let m = net_flow_metrics(&s, 0.01, 1.0).unwrap();
        prop_assert!((m.eta - offset).abs() < 1e-9);
    }
}
