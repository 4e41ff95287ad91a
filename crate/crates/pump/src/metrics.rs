use crate::PumpError;

/// Cycle statistics of a flux series at one probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetFlowMetrics {
    /// ∫ q dt over the last cycle [m³].
    pub v_cycle: f64,
    /// Cycle-average rate ⟨Q⟩ = V_cycle / T.
    pub mean_rate: f64,
    /// max |q − ⟨Q⟩| over the last cycle.
    pub max_osc: f64,
    /// ⟨Q⟩ / max |q_osc|; zero when the oscillation vanishes.
    pub eta: f64,
    pub zero_oscillation: bool,
}

impl NetFlowMetrics {
    pub fn v_cycle_ul(&self) -> f64 {
        self.v_cycle * 1e9
    }

    pub fn eta_percent(&self) -> f64 {
        100.0 * self.eta
    }

    /// η, or an error when the oscillatory amplitude is zero.
    pub fn eta_checked(&self) -> Result<f64, PumpError> {
        if self.zero_oscillation {
            Err(PumpError::ZeroOscillation)
        } else {
            Ok(self.eta)
        }
    }
}

/// Samples per cycle for a step `dt`; the period must be a whole number of
/// steps.
pub fn steps_per_cycle(period: f64, dt: f64) -> Result<usize, PumpError> {
    let n = (period / dt).round();
    if n < 1.0 || ((n * dt - period) / period).abs() > 1e-9 {
        return Err(PumpError::InvalidConfig(format!(
            "time step {dt} does not divide the period {period}"
        )));
    }
    Ok(n as usize)
}

fn trapezoid(samples: &[f64], dt: f64) -> f64 {
    let n = samples.len();
    if n < 2 {
        return 0.0;
    }
    dt * (samples[1..n - 1].iter().sum::<f64>() + 0.5 * (samples[0] + samples[n - 1]))
}

/// Metrics over the final cycle of `series`, sampled at uniform `dt` and
/// ending at a cycle boundary.
pub fn net_flow_metrics(series: &[f64], dt: f64, period: f64) -> Result<NetFlowMetrics, PumpError> {
    let s = steps_per_cycle(period, dt)?;
    if series.len() < s + 1 {
        return Err(PumpError::InvalidConfig(format!(
            "series of {} samples is shorter than one cycle ({} samples)",
            series.len(),
            s + 1
        )));
    }
    let cycle = &series[series.len() - s - 1..];
    let v_cycle = trapezoid(cycle, dt);
    let mean_rate = v_cycle / period;
    let max_osc = cycle.iter().map(|q| (q - mean_rate).abs()).fold(0.0, f64::max);
    let scale = cycle.iter().map(|q| q.abs()).fold(0.0, f64::max);
    let zero_oscillation = !(max_osc > 1e-15 * scale) || max_osc == 0.0;
    Ok(NetFlowMetrics {
        v_cycle,
        mean_rate,
        max_osc,
        eta: if zero_oscillation { 0.0 } else { mean_rate / max_osc },
        zero_oscillation,
    })
}

/// Relative change of V_cycle between the last two cycles. The reference
/// is floored at 1e-3 of the oscillatory stroke T·max|q_osc| so that
/// vanishing net flows do not divide by zero.
pub fn cycle_drift(series: &[f64], dt: f64, period: f64) -> Result<f64, PumpError> {
    let s = steps_per_cycle(period, dt)?;
    if series.len() < 2 * s + 1 {
        return Ok(0.0);
    }
    let last = net_flow_metrics(series, dt, period)?;
    let prev = net_flow_metrics(&series[..series.len() - s], dt, period)?;
    let reference = last.v_cycle.abs().max(1e-3 * period * last.max_osc);
    if reference == 0.0 {
        return Ok(0.0);
    }
    Ok((last.v_cycle - prev.v_cycle).abs() / reference)
}
