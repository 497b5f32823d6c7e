//! Trajectory integration and population-series diagnostics.
//!
//! Classical orbits follow the canonical velocity field; quantum orbits
//! follow the gaussian-ensemble corrected field `w` from
//! [`crate::wigner_flow`]. Both are driven by an embedded Dormand–Prince
//! 5(4) pair with adaptive step control and fifth-order-consistent dense
//! output, so sample cadence and step selection are independent.
//!
//! On top of raw trajectories sit two diagnostics from the population
//! picture `y = e^(-x)`, `z = e^(-k)`:
//!
//! * extinction windows — intervals where a species density sits below a
//!   diagnostic threshold, with revival durations between them;
//! * de-phasing — per-cycle lag between classical and quantum prey peaks,
//!   measuring how the corrected flow slides out of phase with the
//!   classical orbit.

use std::fmt;

use crate::lotka_volterra::{
    classical_velocity, energy, to_species, LvParams, PhasePoint, SpeciesPoint, Velocity,
};
use crate::wigner_flow::{quantum_velocity, GaussianEnsemble};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Errors raised by integration and the series diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub enum DynamicsError {
    /// A config field violates its invariant.
    InvalidConfig { what: &'static str, value: f64 },
    /// Quantum mode needs an ensemble.
    MissingEnsemble,
    /// Step control collapsed below the resolvable scale; carries the last
    /// accepted state.
    StepSizeUnderflow { t: f64, last: PhasePoint },
    /// The velocity field produced a non-finite value at an accepted state.
    NonFiniteField { t: f64, point: PhasePoint },
    /// De-phasing needs at least two prey peaks in each input.
    InsufficientPeaks { classical: usize, quantum: usize },
}

impl fmt::Display for DynamicsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynamicsError::InvalidConfig { what, value } => {
                write!(f, "integrator config: {what} invalid (got {value})")
            }
            DynamicsError::MissingEnsemble => {
                write!(f, "quantum mode requires a gaussian ensemble")
            }
            DynamicsError::StepSizeUnderflow { t, last } => write!(
                f,
                "step size underflow at t = {t} (last state x = {}, k = {})",
                last.x, last.k
            ),
            DynamicsError::NonFiniteField { t, point } => write!(
                f,
                "velocity field non-finite at t = {t}, (x, k) = ({}, {})",
                point.x, point.k
            ),
            DynamicsError::InsufficientPeaks { classical, quantum } => write!(
                f,
                "de-phasing needs >= 2 prey peaks per series, found {classical} classical / {quantum} quantum"
            ),
        }
    }
}

impl std::error::Error for DynamicsError {}

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// Which velocity field drives the orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Classical,
    Quantum,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Classical => write!(f, "classical"),
            Mode::Quantum => write!(f, "quantum"),
        }
    }
}

/// Adaptive-integration controls and output cadence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub t_end: f64,
    pub sample_interval: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_step: 0.1,
            t_end: 100.0,
            sample_interval: 0.05,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<(), DynamicsError> {
        let positive_finite = |what, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(DynamicsError::InvalidConfig { what, value: v })
            }
        };
        positive_finite("rel_tol", self.rel_tol)?;
        positive_finite("abs_tol", self.abs_tol)?;
        positive_finite("max_step", self.max_step)?;
        positive_finite("t_end", self.t_end)?;
        positive_finite("sample_interval", self.sample_interval)?;
        if self.sample_interval > self.t_end {
            return Err(DynamicsError::InvalidConfig {
                what: "sample_interval exceeds t_end",
                value: self.sample_interval,
            });
        }
        Ok(())
    }
}

/// A sampled orbit with its population and energy series.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Strictly increasing sample times.
    pub times: Vec<f64>,
    pub points: Vec<PhasePoint>,
    /// `species[i] = to_species(points[i])`, cached for consumers.
    pub species: Vec<SpeciesPoint>,
    pub energy: Vec<f64>,
    pub mode: Mode,
}

/// Which population a window refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeciesTag {
    Prey,
    Predator,
}

impl fmt::Display for SpeciesTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpeciesTag::Prey => write!(f, "prey"),
            SpeciesTag::Predator => write!(f, "predator"),
        }
    }
}

/// One interval where a species density stays below the threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtinctionWindow {
    pub species: SpeciesTag,
    pub t_start: f64,
    pub t_end: f64,
}

impl ExtinctionWindow {
    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }
}

/// All below-threshold windows of a trajectory, chronological by start,
/// plus the above-threshold revival durations between consecutive windows.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtinctionReport {
    pub threshold: f64,
    pub windows: Vec<ExtinctionWindow>,
    pub revival_durations: Vec<f64>,
}

impl ExtinctionReport {
    /// Windows belonging to one species, chronological.
    pub fn windows_for(&self, tag: SpeciesTag) -> Vec<ExtinctionWindow> {
        self.windows.iter().copied().filter(|w| w.species == tag).collect()
    }

    /// Revival durations between consecutive windows of one species.
    pub fn revival_durations_for(&self, tag: SpeciesTag) -> Vec<f64> {
        let w = self.windows_for(tag);
        w.windows(2).map(|pair| (pair[1].t_start - pair[0].t_end).max(0.0)).collect()
    }
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4) with dense output
// ---------------------------------------------------------------------------

// Stage abscissae, kept so the tableau reads complete; both velocity
// fields are autonomous, so no stage ever consumes them.
#[allow(dead_code)]
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [0.2];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
/// Fifth-order weights (also the last stage row: first-same-as-last pair).
const B: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
/// Embedded fourth-order weights.
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];
/// Dense-output weights for the fifth-order interpolant.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

type State = [f64; 2];

fn axpy(y: State, h: f64, coeffs: &[f64], k: &[State]) -> State {
    let mut out = y;
    for (c, ki) in coeffs.iter().zip(k) {
        out[0] += h * c * ki[0];
        out[1] += h * c * ki[1];
    }
    out
}

/// Dense-output coefficients for one accepted step.
struct DenseSegment {
    t0: f64,
    h: f64,
    rcont: [State; 5],
}

impl DenseSegment {
    fn build(t0: f64, h: f64, y0: State, y1: State, k: &[State; 7]) -> Self {
        let dy = [y1[0] - y0[0], y1[1] - y0[1]];
        let r3 = [h * k[0][0] - dy[0], h * k[0][1] - dy[1]];
        let r4 = [dy[0] - h * k[6][0] - r3[0], dy[1] - h * k[6][1] - r3[1]];
        let mut r5 = [0.0, 0.0];
        for (d, ki) in D.iter().zip(k.iter()) {
            r5[0] += d * ki[0];
            r5[1] += d * ki[1];
        }
        r5[0] *= h;
        r5[1] *= h;
        DenseSegment { t0, h, rcont: [y0, dy, r3, r4, r5] }
    }

    fn eval(&self, t: f64) -> State {
        let theta = ((t - self.t0) / self.h).clamp(0.0, 1.0);
        let theta1 = 1.0 - theta;
        let [r1, r2, r3, r4, r5] = &self.rcont;
        let mut out = [0.0; 2];
        for i in 0..2 {
            out[i] = r1[i]
                + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
        }
        out
    }
}

/// Integrate one orbit and sample it at a fixed cadence.
///
/// Quantum mode requires `ens`; classical mode ignores it. Sampling lands
/// on exact multiples of `sample_interval` (via the dense interpolant, so
/// cadence does not constrain step selection), plus the exact final state
/// when `t_end` is not itself a multiple.
pub fn integrate(
    start: PhasePoint,
    mode: Mode,
    ens: Option<GaussianEnsemble>,
    params: LvParams,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, DynamicsError> {
    cfg.validate()?;
    let ens = match (mode, ens) {
        (Mode::Quantum, None) => return Err(DynamicsError::MissingEnsemble),
        (Mode::Quantum, Some(e)) => Some(e),
        (Mode::Classical, _) => None,
    };
    let deriv = |p: PhasePoint| -> Velocity {
        match ens {
            Some(e) => quantum_velocity(p, e, params),
            None => classical_velocity(p, params),
        }
    };
    let eval = |y: State| -> State {
        let v = deriv(PhasePoint::new(y[0], y[1]));
        [v.vx, v.vk]
    };

    let mut t = 0.0_f64;
    let mut y: State = [start.x, start.k];
    let mut k1 = eval(y);
    if !k1[0].is_finite() || !k1[1].is_finite() {
        return Err(DynamicsError::NonFiniteField { t, point: PhasePoint::new(y[0], y[1]) });
    }

    let mut times = Vec::new();
    let mut points = Vec::new();
    let push = |t: f64, y: State, times: &mut Vec<f64>, points: &mut Vec<PhasePoint>| {
        times.push(t);
        points.push(PhasePoint::new(y[0], y[1]));
    };
    push(t, y, &mut times, &mut points);
    let mut next_sample = 1_usize; // index j of the next t = j * sample_interval

    let mut h = cfg.max_step.min(cfg.t_end / 100.0).min(cfg.sample_interval);
    let mut rejected = false;
    let time_eps = 1e-12 * cfg.t_end;

    while t < cfg.t_end - time_eps {
        h = h.min(cfg.t_end - t);
        if h <= 1e-13 * t.abs().max(1.0) {
            return Err(DynamicsError::StepSizeUnderflow {
                t,
                last: PhasePoint::new(y[0], y[1]),
            });
        }

        // Stage evaluations (k1 carried over: first-same-as-last).
        let mut k = [[0.0_f64; 2]; 7];
        k[0] = k1;
        k[1] = eval(axpy(y, h, &A2, &k[..1]));
        k[2] = eval(axpy(y, h, &A3, &k[..2]));
        k[3] = eval(axpy(y, h, &A4, &k[..3]));
        k[4] = eval(axpy(y, h, &A5, &k[..4]));
        k[5] = eval(axpy(y, h, &A6, &k[..5]));
        let y1 = axpy(y, h, &B, &k[..6]);
        k[6] = eval(y1);

        // Scaled RMS error over the embedded pair.
        let mut err_sq = 0.0;
        for i in 0..2 {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += (B[j] - B4[j]) * kj[i];
            }
            e *= h;
            let sc = cfg.abs_tol + cfg.rel_tol * y[i].abs().max(y1[i].abs());
            err_sq += (e / sc) * (e / sc);
        }
        let err = (err_sq / 2.0).sqrt();

        if !err.is_finite() {
            // Overshoot into overflow territory: treat as a rejection.
            h *= 0.5;
            rejected = true;
            continue;
        }
        if err > 1.0 {
            h *= (0.9 * err.powf(-0.2)).max(0.2);
            rejected = true;
            continue;
        }

        // Accepted: emit every sample that falls inside (t, t + h].
        let seg = DenseSegment::build(t, h, y, y1, &k);
        loop {
            let ts = next_sample as f64 * cfg.sample_interval;
            if ts > t + h + time_eps || ts > cfg.t_end + time_eps {
                break;
            }
            push(ts, seg.eval(ts), &mut times, &mut points);
            next_sample += 1;
        }

        t += h;
        y = y1;
        k1 = k[6];
        if !k1[0].is_finite() || !k1[1].is_finite() {
            return Err(DynamicsError::NonFiniteField {
                t,
                point: PhasePoint::new(y[0], y[1]),
            });
        }

        let grow = if rejected { 1.0 } else { 5.0 };
        h = (h * (0.9 * err.powf(-0.2)).clamp(0.2, grow)).min(cfg.max_step);
        rejected = false;
    }

    // Final state if the cadence did not land on t_end exactly.
    if times.last().copied().unwrap_or(-1.0) < cfg.t_end - time_eps {
        push(cfg.t_end, y, &mut times, &mut points);
    }

    let species: Vec<SpeciesPoint> = points.iter().map(|p| to_species(*p)).collect();
    let energies: Vec<f64> = points.iter().map(|p| energy(*p, params)).collect();
    Ok(Trajectory { times, points, species, energy: energies, mode })
}

// ---------------------------------------------------------------------------
// Extinction windows
// ---------------------------------------------------------------------------

/// Locate all below-threshold windows of both species.
///
/// Crossing times come from linear interpolation between samples; a window
/// open at the first or last sample is closed at that sample's time. The
/// merged window list is ordered by start time, and `revival_durations[i]`
/// is the above-threshold gap between windows `i` and `i+1`.
pub fn detect_extinctions(traj: &Trajectory, threshold: f64) -> ExtinctionReport {
    debug_assert!(threshold > 0.0, "extinction threshold must be positive");
    let mut windows = Vec::new();
    for tag in [SpeciesTag::Prey, SpeciesTag::Predator] {
        let value = |i: usize| match tag {
            SpeciesTag::Prey => traj.species[i].y,
            SpeciesTag::Predator => traj.species[i].z,
        };
        let n = traj.times.len();
        if n == 0 {
            continue;
        }
        let mut below = value(0) < threshold;
        let mut open = below.then_some(traj.times[0]);
        for i in 1..n {
            let now_below = value(i) < threshold;
            if now_below != below {
                let (t0, t1) = (traj.times[i - 1], traj.times[i]);
                let (s0, s1) = (value(i - 1), value(i));
                let t_cross = t0 + (threshold - s0) / (s1 - s0) * (t1 - t0);
                if now_below {
                    open = Some(t_cross);
                } else if let Some(t_start) = open.take() {
                    windows.push(ExtinctionWindow { species: tag, t_start, t_end: t_cross });
                }
                below = now_below;
            }
        }
        if let Some(t_start) = open {
            windows.push(ExtinctionWindow { species: tag, t_start, t_end: traj.times[n - 1] });
        }
    }
    windows.sort_by(|a, b| a.t_start.total_cmp(&b.t_start));
    let revival_durations = windows
        .windows(2)
        .map(|pair| (pair[1].t_start - pair[0].t_end).max(0.0))
        .collect();
    ExtinctionReport { threshold, windows, revival_durations }
}

// ---------------------------------------------------------------------------
// De-phasing
// ---------------------------------------------------------------------------

/// Sub-sample prey-maximum times via a parabola through each local-maximum
/// sample and its neighbors.
pub fn prey_peak_times(traj: &Trajectory) -> Vec<f64> {
    let y: Vec<f64> = traj.species.iter().map(|s| s.y).collect();
    let t = &traj.times;
    let mut peaks = Vec::new();
    for i in 1..y.len().saturating_sub(1) {
        if y[i] > y[i - 1] && y[i] >= y[i + 1] {
            peaks.push(parabola_vertex(
                (t[i - 1], y[i - 1]),
                (t[i], y[i]),
                (t[i + 1], y[i + 1]),
            ));
        }
    }
    peaks
}

/// Vertex abscissa of the parabola through three points (falls back to the
/// middle abscissa when they are collinear).
fn parabola_vertex(p0: (f64, f64), p1: (f64, f64), p2: (f64, f64)) -> f64 {
    let (t0, y0) = p0;
    let (t1, y1) = p1;
    let (t2, y2) = p2;
    let dl = t1 - t0;
    let dr = t2 - t1;
    let num = dl * dl * (y1 - y2) - dr * dr * (y1 - y0);
    let den = dl * (y1 - y2) + dr * (y1 - y0);
    if den == 0.0 {
        t1
    } else {
        t1 - 0.5 * num / den
    }
}

/// Per-cycle lag between classical and quantum prey peaks.
///
/// Peaks are paired by index; `lag[i] = t_quantum[i] − t_classical[i]`, so
/// a quantum orbit running behind the classical one yields negative lags
/// of growing magnitude. Both inputs must expose at least two peaks.
pub fn dephasing(classical: &Trajectory, quantum: &Trajectory) -> Result<Vec<f64>, DynamicsError> {
    let pc = prey_peak_times(classical);
    let pq = prey_peak_times(quantum);
    if pc.len() < 2 || pq.len() < 2 {
        return Err(DynamicsError::InsufficientPeaks { classical: pc.len(), quantum: pq.len() });
    }
    Ok(pc.iter().zip(&pq).map(|(c, q)| q - c).collect())
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
