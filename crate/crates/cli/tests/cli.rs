use std::path::PathBuf;
use std::process::{Command, Output};

use clap::Parser;
use graphflow::{stamped, Cli, CliError, Stamp};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graphflow"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("graphflow-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn generate_murray_tree_file() {
    let path = scratch("tree5.json");
    let o = run(&[
        "generate",
        "--kind",
        "murray",
        "--generations",
        "5",
        "--gamma",
        "1.0",
        "--root-radius",
        "1e-3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let g = netgraph::SpatialGraph::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(g.num_edges(), 31);
}

#[test]
fn generate_y_and_av() {
    let y = run(&["generate", "--kind", "y-mms"]);
    let g = netgraph::SpatialGraph::from_json(&stdout(&y)).unwrap();
    assert_eq!(g.num_edges(), 3);

    let av = run(&[
        "generate",
        "--kind",
        "av",
        "--generations",
        "3",
        "--cap-ratio",
        "0.1",
    ]);
    let g = netgraph::SpatialGraph::from_json(&stdout(&av)).unwrap();
    // 7 arteries, 7 veins, 4 capillaries.
    assert_eq!(g.num_edges(), 18);
    let caps = g
        .edges()
        .iter()
        .filter(|e| e.kind == Some(netgraph::EdgeKind::Capillary))
        .count();
    assert_eq!(caps, 4);
}

#[test]
fn validation_errors_exit_with_two() {
    let o = run(&["generate", "--kind", "murray", "--gamma", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("branching symmetry"));

    let o = run(&["resistance", "--r1", "1e-3", "--ratio", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["pump", "--generations", "3", "--dt", "0.2"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["solve", "--network", "/nonexistent/net.json"]);
    assert_eq!(o.status.code(), Some(2));

    // Unknown flags are rejected by the parser with the same code.
    let o = run(&["conditioning", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn resistance_open_channel() {
    let o = run(&[
        "resistance",
        "--r1",
        "1e-3",
        "--ratio",
        "3",
        "--kappa",
        "inf",
        "--nu",
        "1e-6",
        "--check",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| {
        row[header.iter().position(|h| *h == name).unwrap()]
            .parse::<f64>()
            .unwrap()
    };
    let exact = 1e-6 / xsection::poiseuille_flux(1e-3, 3e-3);
    assert!((col("resistance") / exact - 1.0).abs() < 1e-10);
    // Shape factor at unit radius scaled by (1e-3)^-4.
    assert!((col("resistance") / (col("shape_resistance") * 1e12) - 1.0).abs() < 1e-10);
    assert!(lines.next().unwrap().starts_with("# graphflow"));
}

#[test]
fn porous_resistance_adds_brinkman_term() {
    let o = run(&[
        "resistance",
        "--r1",
        "1",
        "--ratio",
        "2",
        "--kappa",
        "0.5",
        "--phi",
        "0.8",
        "--nu",
        "1",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    let (flux, r) = (row[6], row[8]);
    assert!((r - 1.0 / flux - 4.0).abs() < 1e-9);
}

#[test]
fn primal_conditioning_table() {
    let o = run(&[
        "conditioning",
        "--formulation",
        "primal",
        "--family",
        "tree",
        "--sizes",
        "1,3",
        "--check",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(rows.len(), 8);
    for r in rows {
        assert!(r.ends_with(",2.618034"), "{r}");
    }
}

#[test]
fn r_robust_rows_do_not_depend_on_resistance() {
    let body = |r: &str| {
        let o = run(&[
            "conditioning",
            "--norm",
            "r-robust",
            "--sizes",
            "3",
            "--h",
            "0.5",
            "--resistance",
            r,
        ]);
        assert!(o.status.success());
        stdout(&o).lines().nth(1).unwrap().to_string()
    };
    assert_eq!(body("1"), body("1e8"));
}

#[test]
fn check_failures_exit_with_four() {
    // Halving h once from 1/32 is enough to see the pressure rate of 3.
    let o = run(&[
        "convergence",
        "--formulation",
        "dual",
        "--degree",
        "3",
        "--levels",
        "2",
        "--check",
    ]);
    assert_eq!(
        o.status.code(),
        Some(4),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(String::from_utf8_lossy(&o.stderr).contains("pressure rate"));
    assert!(stdout(&o).starts_with("h,err_q,rate_q,err_p,rate_p\n"));
}

#[test]
fn convergence_primal_passes_check() {
    let o = run(&["convergence", "--degree", "2", "--levels", "2", "--check"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let args = [
        "pump",
        "--generations",
        "2,3",
        "--gamma",
        "1,0.5",
        "--dt",
        "0.025",
        "--cycles",
        "2",
        "--warmup",
        "1",
        "--cells",
        "4",
    ];
    let a = run(&args);
    let b = run(&[&args[..], &["--threads", "1"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let c1 = run(&["conditioning", "--sizes", "1,3", "--h", "1,0.5"]);
    let c2 = run(&["conditioning", "--sizes", "1,3", "--h", "1,0.5"]);
    assert_eq!(c1.stdout, c2.stdout);
}

#[test]
fn single_network_pump_writes_series_and_summary() {
    let net = scratch("tree2.json");
    let series = scratch("flow.csv");
    let svg = scratch("flow.svg");
    assert!(run(&[
        "generate",
        "--kind",
        "murray",
        "--generations",
        "2",
        "--out",
        net.to_str().unwrap()
    ])
    .status
    .success());
    let o = run(&[
        "pump",
        "--network",
        net.to_str().unwrap(),
        "--dt",
        "0.025",
        "--cycles",
        "2",
        "--warmup",
        "1",
        "--cells",
        "4",
        "--probe",
        "0,2",
        "--out",
        series.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = stdout(&o);
    assert!(summary.starts_with("probe_id,V_cycle_uL,eta_percent,max_qosc_m3_per_s\nv0,"));
    let text = std::fs::read_to_string(&series).unwrap();
    assert!(text.starts_with("time_s,probe_id,q_m3_per_s\n"));
    // Two probes, 81 instants, header and stamp.
    assert_eq!(text.lines().count(), 1 + 2 * 81 + 1);
    assert!(text.lines().last().unwrap().contains("network="));
    let plot = std::fs::read_to_string(&svg).unwrap();
    assert!(plot.starts_with("<svg") && plot.matches("<polyline").count() == 3);
}

#[test]
fn arguments_parse_into_commands() {
    let cli = Cli::try_parse_from([
        "graphflow",
        "collapse",
        "--generations",
        "3",
        "--ratios",
        "1,0.01",
    ])
    .unwrap();
    match cli.command {
        graphflow::args::Command::Collapse(a) => {
            assert_eq!(a.generations, vec![3]);
            assert_eq!(a.ratios, vec![1.0, 0.01]);
            assert_eq!(a.transient.eps, 0.1);
        }
        _ => panic!("wrong subcommand"),
    }
    assert!(Cli::try_parse_from(["graphflow", "pump", "--law", "sideways"]).is_err());
}

#[test]
fn stamp_and_exit_codes() {
    let s = Stamp::new("x").with("a", 1).list("b", &[1.5, 2.0]);
    assert_eq!(
        stamped("h\n1", &s),
        format!(
            "h\n1\n# graphflow {} command=x a=1 b=1.5;2\n",
            env!("CARGO_PKG_VERSION")
        )
    );
    assert_eq!(CliError::Validation(String::new()).exit_code(), 2);
    assert_eq!(CliError::Solver(String::new()).exit_code(), 3);
    assert_eq!(CliError::Check(String::new()).exit_code(), 4);
}
