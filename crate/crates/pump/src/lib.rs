//! Flow driven by prescribed wall motion: implicit Euler on the primal
//! hydraulic network model, and the net-flow measures computed from it.
//!
//! The inner wall moves as R¹(t) = (1 + ε sin(2πt/T)) R¹(0) while the outer
//! wall stays put, so the channel area A(t), the resistance R(t) and the
//! source f = −∂_t A all follow from the wall position.

mod metrics;
mod studies;
mod transient;

pub use metrics::{cycle_drift, net_flow_metrics, steps_per_cycle, NetFlowMetrics};
pub use studies::{
    capillary_collapse_study, collapse_pumping, murray_pumping, murray_sweep, series_csv,
    summary_csv, sweep_csv, SweepRow, ROOT_RADIUS,
};
pub use transient::{
    run_transient, EdgeState, FlowRecord, Inertia, Probe, PulsatingEdges, PulsationModel,
    StepResult, TransientConfig, TransientModel, Waveform,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PumpError {
    #[error("invalid transient setup: {0}")]
    InvalidConfig(String),
    #[error("flow is not periodic: V_cycle changed by {drift:.3e} between the last two cycles")]
    NotPeriodic { drift: f64 },
    #[error("oscillatory amplitude is zero, directionality is undefined")]
    ZeroOscillation,
    #[error(transparent)]
    Graph(#[from] netgraph::GraphError),
    #[error(transparent)]
    Forms(#[from] forms::FormsError),
    #[error(transparent)]
    Solver(#[from] solvers::SolverError),
    #[error(transparent)]
    CrossSection(#[from] xsection::XsError),
}
