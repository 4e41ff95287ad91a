//! Cross-section resistance for concentric annuli.
//!
//! The unit-pressure-drop profile solves −(1/φ)(1/r)(r v′)′ + v/κ = 1 with
//! v = 0 on both walls. Its mean over the section feeds the lumped
//! resistance of the network equations.

use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum XsError {
    #[error("annulus is degenerate: ratio {0} must exceed 1")]
    DegenerateAnnulus(f64),
    #[error("invalid cross-section parameter {what} = {value}")]
    InvalidSpec { what: &'static str, value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSectionSpec {
    /// Inner radius R¹.
    pub r1: f64,
    /// β = R²/R¹.
    pub ratio: f64,
    pub porosity: f64,
    /// Permeability; `f64::INFINITY` for an open channel.
    pub permeability: f64,
    /// Kinematic viscosity ν.
    pub nu: f64,
}

impl CrossSectionSpec {
    pub fn open(r1: f64, ratio: f64, nu: f64) -> Self {
        Self {
            r1,
            ratio,
            porosity: 1.0,
            permeability: f64::INFINITY,
            nu,
        }
    }

    pub fn with_porous(mut self, porosity: f64, permeability: f64) -> Self {
        self.porosity = porosity;
        self.permeability = permeability;
        self
    }

    pub fn r2(&self) -> f64 {
        self.r1 * self.ratio
    }

    pub fn area(&self) -> f64 {
        PI * (self.r2().powi(2) - self.r1.powi(2))
    }

    pub fn is_open(&self) -> bool {
        self.porosity == 1.0 && self.permeability.is_infinite()
    }

    pub fn validate(&self) -> Result<(), XsError> {
        let bad = |what, value| Err(XsError::InvalidSpec { what, value });
        if !(self.r1 > 0.0 && self.r1.is_finite()) {
            return bad("inner radius", self.r1);
        }
        if !(self.ratio > 1.0 + 1e-9) {
            return Err(XsError::DegenerateAnnulus(self.ratio));
        }
        if !(self.porosity > 0.0 && self.porosity <= 1.0) {
            return bad("porosity", self.porosity);
        }
        if !(self.permeability > 0.0) {
            return bad("permeability", self.permeability);
        }
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return bad("viscosity", self.nu);
        }
        Ok(())
    }
}

/// Flux of the open-channel annular Poiseuille profile with unit forcing.
pub fn poiseuille_flux(r1: f64, r2: f64) -> f64 {
    let d2 = r2 * r2 - r1 * r1;
    PI / 8.0 * (r2.powi(4) - r1.powi(4) - d2 * d2 / (r2 / r1).ln())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdOptions {
    /// Grid points including both walls; `None` applies 1 + ⌈(β−1)·200⌉.
    pub points: Option<usize>,
    /// Combine the mean with the one from the twice-coarser grid.
    pub richardson: bool,
}

impl Default for FdOptions {
    fn default() -> Self {
        Self {
            points: None,
            richardson: true,
        }
    }
}

pub fn default_points(ratio: f64) -> usize {
    1 + ((ratio - 1.0) * 200.0).ceil() as usize
}

/// Mean profile value on a uniform grid of `n` points by the conservative
/// three-point scheme and the trapezoidal rule.
pub fn fd_mean(spec: &CrossSectionSpec, n: usize) -> f64 {
    assert!(n >= 3);
    let (r1, r2) = (spec.r1, spec.r2());
    let h = (r2 - r1) / (n - 1) as f64;
    let r = |i: usize| r1 + h * i as f64;
    let m = n - 2;
    let react = if spec.permeability.is_infinite() {
        0.0
    } else {
        1.0 / spec.permeability
    };
    let (mut lo, mut di, mut up) = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
    for k in 0..m {
        let i = k + 1;
        let (rp, rm) = (r(i) + 0.5 * h, r(i) - 0.5 * h);
        let s = 1.0 / (spec.porosity * h * h * r(i));
        di[k] = (rp + rm) * s + react;
        lo[k] = -rm * s;
        up[k] = -rp * s;
    }
    let v = thomas(&lo, &di, &up, vec![1.0; m]);
    // Interior trapezoid nodes (wall values vanish).
    let integral: f64 = v.iter().enumerate().map(|(k, vk)| vk * r(k + 1)).sum::<f64>() * h;
    2.0 * PI * integral / spec.area()
}

fn thomas(lo: &[f64], di: &[f64], up: &[f64], mut rhs: Vec<f64>) -> Vec<f64> {
    let n = di.len();
    let mut c = vec![0.0; n];
    let mut d = di.to_vec();
    for i in 1..n {
        let w = lo[i] / d[i - 1];
        d[i] -= w * up[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    let mut x = vec![0.0; n];
    x[n - 1] = rhs[n - 1] / d[n - 1];
    for i in (0..n - 1).rev() {
        c[i] = up[i];
        x[i] = (rhs[i] - c[i] * x[i + 1]) / d[i];
    }
    x
}

/// Cross-section mean v̄̄ of the unit-forcing profile.
pub fn annulus_profile_mean(spec: &CrossSectionSpec) -> Result<f64, XsError> {
    annulus_profile_mean_with(spec, FdOptions::default())
}

pub fn annulus_profile_mean_with(spec: &CrossSectionSpec, opts: FdOptions) -> Result<f64, XsError> {
    spec.validate()?;
    if spec.is_open() {
        return Ok(poiseuille_flux(spec.r1, spec.r2()) / spec.area());
    }
    Ok(fd_profile_mean(spec, opts))
}

/// Finite-difference mean regardless of whether a closed form exists.
pub fn fd_profile_mean(spec: &CrossSectionSpec, opts: FdOptions) -> f64 {
    let mut n = opts.points.unwrap_or_else(|| default_points(spec.ratio));
    if !opts.richardson {
        return fd_mean(spec, n);
    }
    if n % 2 == 0 {
        n += 1;
    }
    let fine = fd_mean(spec, n);
    let coarse = fd_mean(spec, n.div_ceil(2));
    (4.0 * fine - coarse) / 3.0
}

/// How the profile mean enters the resistance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// R = ν/Q^vp + 2ν/κ with Q^vp = A·v̄̄ the profile flux; R ∝ (R¹)⁻⁴.
    #[default]
    Flux,
    /// R = ν/v̄̄ + 2ν/κ; R ∝ (R¹)⁻².
    MeanVelocity,
}

impl Convention {
    /// Power of R¹ by which the open-channel resistance scales.
    pub fn scaling_exponent(self) -> i32 {
        match self {
            Convention::Flux => -4,
            Convention::MeanVelocity => -2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileResult {
    pub mean_velocity: f64,
    pub flux: f64,
    pub area: f64,
    pub resistance: f64,
    /// Resistance of the same shape scaled to unit inner radius.
    pub shape_resistance: f64,
}

fn porous_term(spec: &CrossSectionSpec) -> f64 {
    if spec.permeability.is_infinite() {
        0.0
    } else {
        2.0 * spec.nu / spec.permeability
    }
}

fn lumped(spec: &CrossSectionSpec, mean: f64, conv: Convention) -> f64 {
    let drag = match conv {
        Convention::Flux => spec.nu / (mean * spec.area()),
        Convention::MeanVelocity => spec.nu / mean,
    };
    drag + porous_term(spec)
}

pub fn resistance(spec: &CrossSectionSpec) -> Result<ProfileResult, XsError> {
    resistance_with(spec, Convention::default())
}

pub fn resistance_with(spec: &CrossSectionSpec, conv: Convention) -> Result<ProfileResult, XsError> {
    let mean = annulus_profile_mean(spec)?;
    // Same shape at unit inner radius: permeability scales with length².
    let unit = CrossSectionSpec {
        r1: 1.0,
        permeability: spec.permeability / (spec.r1 * spec.r1),
        ..*spec
    };
    let unit_mean = annulus_profile_mean(&unit)?;
    Ok(ProfileResult {
        mean_velocity: mean,
        flux: mean * spec.area(),
        area: spec.area(),
        resistance: lumped(spec, mean, conv),
        shape_resistance: lumped(&unit, unit_mean, conv),
    })
}

/// Open-channel resistance at inner radius `r1` from an externally supplied
/// shape resistance.
pub fn resistance_from_shape(shape_resistance: f64, r1: f64, conv: Convention) -> f64 {
    shape_resistance * r1.powi(conv.scaling_exponent())
}

/// How the cross-section changes when the inner wall moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeLaw {
    /// Outer wall stays at its baseline radius; the resistance is recomputed
    /// for the instantaneous annulus.
    #[default]
    FixedOuterWall,
    /// R = R̃/(R¹)⁴ with the baseline shape; the area still uses a fixed
    /// outer wall.
    FixedShape,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSample {
    pub resistance: f64,
    pub area: f64,
    pub nu_eff: f64,
}

/// Resistance, area and ν_eff when the inner radius of `baseline` has moved
/// to `r1_t`.
pub fn time_resistance(
    baseline: &CrossSectionSpec,
    r1_t: f64,
    law: TimeLaw,
    conv: Convention,
) -> Result<TimeSample, XsError> {
    let r2 = baseline.r2();
    let now = CrossSectionSpec {
        r1: r1_t,
        ratio: r2 / r1_t,
        ..*baseline
    };
    now.validate()?;
    let area = now.area();
    let resistance = match law {
        TimeLaw::FixedOuterWall => resistance_with(&now, conv)?.resistance,
        TimeLaw::FixedShape => {
            let base = resistance_with(baseline, conv)?;
            resistance_from_shape(base.shape_resistance, r1_t, conv)
        }
    };
    Ok(TimeSample {
        resistance,
        area,
        nu_eff: baseline.nu / (area * baseline.porosity),
    })
}
