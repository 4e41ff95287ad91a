use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use forms::{assemble_primal, Field, ResistanceField, SaddleSystem, SourceData};
use netgraph::{EdgeKind, GraphMesh, SpatialGraph};
use solvers::solve_saddle;
use spaces::assemble::mass;
use xsection::{time_resistance, Convention, CrossSectionSpec, TimeLaw};

use crate::metrics::{cycle_drift, net_flow_metrics, steps_per_cycle, NetFlowMetrics};
use crate::PumpError;

/// Phase argument of the wall motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Waveform {
    /// sin(2πt/T): T is the period.
    #[default]
    Periodic,
    /// sin(t/T) as written in the model equations.
    Literal,
}

/// Which edges move.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum PulsatingEdges {
    #[default]
    All,
    Kinds(Vec<EdgeKind>),
    Mask(Vec<bool>),
}

impl PulsatingEdges {
    fn resolve(&self, g: &SpatialGraph) -> Vec<bool> {
        g.edges()
            .iter()
            .map(|e| match self {
                PulsatingEdges::All => true,
                PulsatingEdges::Kinds(k) => e.kind.is_some_and(|kind| k.contains(&kind)),
                PulsatingEdges::Mask(m) => m.get(e.id).copied().unwrap_or(false),
            })
            .collect()
    }
}

/// R¹(s,t) = (1 + ε w(t)) R¹(s,0) on pulsating edges.
#[derive(Debug, Clone, PartialEq)]
pub struct PulsationModel {
    pub amplitude: f64,
    pub period: f64,
    pub edges: PulsatingEdges,
    pub waveform: Waveform,
}

impl PulsationModel {
    pub fn new(amplitude: f64, period: f64) -> Self {
        Self {
            amplitude,
            period,
            edges: PulsatingEdges::All,
            waveform: Waveform::Periodic,
        }
    }

    pub fn arteries_only(mut self) -> Self {
        self.edges = PulsatingEdges::Kinds(vec![EdgeKind::Artery]);
        self
    }

    fn validate(&self) -> Result<(), PumpError> {
        if !(0.0..1.0).contains(&self.amplitude) {
            return Err(PumpError::InvalidConfig(format!(
                "amplitude {} outside [0, 1)",
                self.amplitude
            )));
        }
        if !(self.period > 0.0 && self.period.is_finite()) {
            return Err(PumpError::InvalidConfig(format!("period {} must be positive", self.period)));
        }
        Ok(())
    }

    /// (w(t), w′(t)).
    pub fn wave(&self, t: f64) -> (f64, f64) {
        let omega = match self.waveform {
            Waveform::Periodic => 2.0 * PI / self.period,
            Waveform::Literal => 1.0 / self.period,
        };
        ((omega * t).sin(), omega * (omega * t).cos())
    }
}

/// Weight of ∂_t q in the momentum equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Inertia {
    /// (1/A) ∂_t q with the instantaneous area.
    #[default]
    InverseArea,
    /// ∂_t q.
    Unit,
    /// ∂_t (q/A), the rate of change of the mean velocity.
    MeanVelocity,
}

/// Where the flux is recorded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Probe {
    /// Flux at a boundary vertex in the orientation of its edge, computed
    /// from the discrete conservation residual.
    Boundary(usize),
    /// Flux inside an edge.
    Point { edge: usize, s: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransientConfig {
    pub dt: f64,
    pub cycles: usize,
    pub warmup: usize,
    pub probes: Vec<Probe>,
    pub cells_per_edge: usize,
    /// Kinematic viscosity ν [m²/s].
    pub nu: f64,
    pub law: TimeLaw,
    pub convention: Convention,
    pub inertia: Inertia,
    /// Traction datum per boundary vertex; missing vertices use 0.
    pub p_ref: BTreeMap<usize, f64>,
    /// Largest admissible cycle-to-cycle change of V_cycle at the end.
    pub periodicity_tol: f64,
}

impl TransientConfig {
    /// Δt = T/200, 8 cycles of which 6 are warm-up, 20 cells per edge,
    /// ν = 1e-6 m²/s, probing the flux at vertex 0.
    pub fn for_period(period: f64) -> Self {
        Self {
            dt: period / 200.0,
            cycles: 8,
            warmup: 6,
            probes: vec![Probe::Boundary(0)],
            cells_per_edge: 20,
            nu: 1e-6,
            law: TimeLaw::FixedOuterWall,
            convention: Convention::Flux,
            inertia: Inertia::InverseArea,
            p_ref: BTreeMap::new(),
            periodicity_tol: 0.01,
        }
    }

    fn validate(&self, period: f64) -> Result<(), PumpError> {
        if !(self.dt > 0.0) || self.dt > period / 20.0 + 1e-15 * period {
            return Err(PumpError::InvalidConfig(format!(
                "time step {} must lie in (0, T/20]",
                self.dt
            )));
        }
        if self.cycles < self.warmup + 1 {
            return Err(PumpError::InvalidConfig(format!(
                "{} cycles leave nothing after {} warm-up cycles",
                self.cycles, self.warmup
            )));
        }
        if self.cells_per_edge == 0 {
            return Err(PumpError::InvalidConfig("need at least one cell per edge".into()));
        }
        if !(self.nu > 0.0) {
            return Err(PumpError::InvalidConfig(format!("viscosity {} must be positive", self.nu)));
        }
        Ok(())
    }
}

/// Cross-section state of every edge at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeState {
    pub resistance: Vec<f64>,
    pub area: Vec<f64>,
    /// ∂_t A.
    pub area_rate: Vec<f64>,
}

/// Network, discretization and wall motion of a transient run.
pub struct TransientModel {
    pub mesh: Arc<GraphMesh>,
    pub pulsation: PulsationModel,
    pub config: TransientConfig,
    moving: Vec<bool>,
    baseline: Vec<CrossSectionSpec>,
    fixed_resistance: Vec<f64>,
    /// Peak of Σ |∂_t A| ℓ over a cycle, bounded from above.
    source_scale: f64,
}

/// Result of one implicit Euler step.
#[derive(Debug, Clone)]
pub struct StepResult {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    /// Boundary vertex → flux in the orientation of its edge.
    pub boundary_flux: BTreeMap<usize, f64>,
    /// |Σ outflow − ∫ f| relative to the peak of ∫ |f| over a cycle.
    pub mass_defect: f64,
}

impl TransientModel {
    pub fn new(
        graph: &SpatialGraph,
        pulsation: PulsationModel,
        config: TransientConfig,
    ) -> Result<Self, PumpError> {
        pulsation.validate()?;
        config.validate(pulsation.period)?;
        let mesh = Arc::new(GraphMesh::with_cells_each(graph, config.cells_per_edge)?);
        let baseline: Vec<CrossSectionSpec> = graph
            .edges()
            .iter()
            .map(|e| CrossSectionSpec::open(e.radius1, e.ratio, config.nu))
            .collect();
        let fixed_resistance = baseline
            .iter()
            .map(|b| Ok(xsection::resistance_with(b, config.convention)?.resistance))
            .collect::<Result<Vec<f64>, PumpError>>()?;
        let moving = pulsation.edges.resolve(graph);
        let (_, omega) = pulsation.wave(0.0);
        let eps = pulsation.amplitude;
        let source_scale = graph
            .edges()
            .iter()
            .filter(|e| moving[e.id])
            .map(|e| 2.0 * PI * e.radius1.powi(2) * (1.0 + eps) * eps * omega.abs() * e.length)
            .sum();
        Ok(Self {
            moving,
            source_scale,
            mesh,
            pulsation,
            config,
            baseline,
            fixed_resistance,
        })
    }

    pub fn graph(&self) -> &SpatialGraph {
        self.mesh.graph()
    }

    pub fn state(&self, t: f64) -> Result<EdgeState, PumpError> {
        let (w, dw) = self.pulsation.wave(t);
        let eps = self.pulsation.amplitude;
        let n = self.baseline.len();
        let mut st = EdgeState {
            resistance: Vec::with_capacity(n),
            area: Vec::with_capacity(n),
            area_rate: Vec::with_capacity(n),
        };
        for (e, b) in self.baseline.iter().enumerate() {
            if self.moving[e] && eps != 0.0 {
                let r1 = b.r1 * (1.0 + eps * w);
                let dr1 = b.r1 * eps * dw;
                let s = time_resistance(b, r1, self.config.law, self.config.convention)?;
                st.resistance.push(s.resistance);
                st.area.push(s.area);
                st.area_rate.push(-2.0 * PI * r1 * dr1);
            } else {
                st.resistance.push(self.fixed_resistance[e]);
                st.area.push(b.area());
                st.area_rate.push(0.0);
            }
        }
        Ok(st)
    }

    fn system(&self, st: &EdgeState) -> Result<SaddleSystem, PumpError> {
        let per_edge = |v: &Vec<f64>| -> Field {
            let v = Arc::new(v.clone());
            Arc::new(move |e, _| v[e])
        };
        let field = ResistanceField::new(
            per_edge(&st.resistance),
            per_edge(&st.area),
            forms::constant(0.0),
        );
        let f: Vec<f64> = st.area_rate.iter().map(|a| -a).collect();
        let mut src = SourceData::zero().with_f(per_edge(&f));
        for (&v, &p) in &self.config.p_ref {
            src = src.with_traction(v, p);
        }
        Ok(assemble_primal(&self.mesh, &field, &src, 1)?)
    }

    fn inertia_weights(&self, st: &EdgeState) -> Vec<f64> {
        (0..self.mesh.num_cells())
            .map(|c| match self.config.inertia {
                Inertia::InverseArea | Inertia::MeanVelocity => 1.0 / st.area[self.mesh.cell_edge(c)],
                Inertia::Unit => 1.0,
            })
            .collect()
    }

    /// Advance q from t_{n+1} − Δt to `t_next` with all data at `t_next`.
    /// `dt = ∞` gives the stationary solve.
    pub fn step_implicit_euler(&self, q_n: &[f64], t_next: f64, dt: f64) -> Result<StepResult, PumpError> {
        let st = self.state(t_next)?;
        let mut sys = self.system(&st)?;
        if dt.is_finite() {
            let w = mass(&sys.v_space, &self.inertia_weights(&st)).scaled(1.0 / dt);
            let wq = if self.config.inertia == Inertia::MeanVelocity {
                // The old flux is divided by the old area.
                let old = self.state(t_next - dt)?;
                mass(&sys.v_space, &self.inertia_weights(&old))
                    .scaled(1.0 / dt)
                    .matvec(q_n)
            } else {
                w.matvec(q_n)
            };
            sys.a = sys.a.add(&w).compress();
            sys.rhs_v.iter_mut().zip(&wq).for_each(|(r, x)| *r += x);
        }
        let sol = solve_saddle(&sys)?;

        // Reaction of the conservation rows at the prescribed vertices.
        let bq = sys.b.matvec(&sol.q);
        let m = &sys.m_spaces[0];
        let g = self.graph();
        let mut boundary_flux = BTreeMap::new();
        let mut outflow = 0.0;
        for v in g.boundary_vertices() {
            let d = m.vertex_dof(v).expect("vertex dof");
            let reaction = bq[d] - sys.rhs_m[d];
            let (_, sigma) = g.incident(v).next().expect("boundary vertex has an edge");
            boundary_flux.insert(v, sigma * reaction);
            outflow += reaction;
        }
        let source: f64 = g
            .edges()
            .iter()
            .map(|e| -st.area_rate[e.id] * e.length)
            .sum();
        let scale = self.source_scale.max(outflow.abs()).max(source.abs());
        let mass_defect = if scale > 0.0 {
            (outflow - source).abs() / scale
        } else {
            0.0
        };
        Ok(StepResult {
            q: sol.q,
            p: sol.p,
            boundary_flux,
            mass_defect,
        })
    }

    fn probe(&self, step: &StepResult, probe: Probe) -> Result<f64, PumpError> {
        match probe {
            Probe::Boundary(v) => step
                .boundary_flux
                .get(&v)
                .copied()
                .ok_or_else(|| PumpError::InvalidConfig(format!("vertex {v} is not a boundary vertex"))),
            Probe::Point { edge, s } => {
                let (c, _) = self.mesh.locate(edge, s)?;
                // DG0 flux: one coefficient per cell.
                Ok(step.q[c])
            }
        }
    }
}

/// Recorded probe series and their final-cycle metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowRecord {
    pub probes: Vec<Probe>,
    pub dt: f64,
    pub period: f64,
    /// t_0 = 0, t_1, …
    pub times: Vec<f64>,
    /// series[i][n] = q at probe i and time t_n.
    pub series: Vec<Vec<f64>>,
    pub metrics: Vec<NetFlowMetrics>,
    /// Largest relative mass defect over all steps.
    pub max_mass_defect: f64,
    /// Cycle-to-cycle V_cycle change at the end of the run, per probe.
    pub drift: Vec<f64>,
}

/// Simulate from rest and evaluate the last cycle.
pub fn run_transient(
    graph: &SpatialGraph,
    pulsation: &PulsationModel,
    config: &TransientConfig,
) -> Result<FlowRecord, PumpError> {
    let model = TransientModel::new(graph, pulsation.clone(), config.clone())?;
    let period = pulsation.period;
    let s = steps_per_cycle(period, config.dt)?;
    let n_steps = s * config.cycles;
    let mut q = vec![0.0; model.mesh.num_cells()];
    let mut times = vec![0.0];
    let mut series = vec![vec![0.0]; config.probes.len()];
    let mut max_mass_defect: f64 = 0.0;
    for n in 1..=n_steps {
        let t = n as f64 * config.dt;
        let step = model.step_implicit_euler(&q, t, config.dt)?;
        for (i, &p) in config.probes.iter().enumerate() {
            series[i].push(model.probe(&step, p)?);
        }
        max_mass_defect = max_mass_defect.max(step.mass_defect);
        times.push(t);
        q = step.q;
    }
    let mut metrics = Vec::new();
    let mut drift = Vec::new();
    for sr in &series {
        metrics.push(net_flow_metrics(sr, config.dt, period)?);
        let d = cycle_drift(sr, config.dt, period)?;
        if config.cycles > config.warmup + 1 && d > config.periodicity_tol {
            return Err(PumpError::NotPeriodic { drift: d });
        }
        drift.push(d);
    }
    Ok(FlowRecord {
        probes: config.probes.clone(),
        dt: config.dt,
        period,
        times,
        series,
        metrics,
        max_mass_defect,
        drift,
    })
}
