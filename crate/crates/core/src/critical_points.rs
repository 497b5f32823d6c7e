//! Equilibrium structure of the corrected velocity field.
//!
//! The classical field has a single center at the origin. Under the
//! gaussian-ensemble correction that center shifts slightly off the origin
//! for small spreading `α`, and for `α ≳ 1` additional zeros — saddles and
//! vortices — enter the window and break the closed-orbit pattern. This
//! module locates and classifies that structure:
//!
//! * grid scans thresholding `|w|` into connected envelope regions
//!   (4-connectivity, union-find labeling);
//! * damped-Newton sub-grid refinement of field zeros;
//! * winding numbers by angle accumulation around loops, with an
//!   under-sampling guard;
//! * Jacobian eigenvalue classification cross-checked against the winding
//!   number — disagreement is reported as `degenerate`, never guessed;
//! * α-sweeps producing a per-α census of components and zeros.
//!
//! Operations come in two flavors: the spec'd entry points bound to the
//! corrected field (with per-axis kernel caching for grid scans), and
//! `*_field` variants generic over any velocity field, used by synthetic
//! oracles in tests and available for experimentation.

use std::fmt;

use rayon::prelude::*;

use crate::lotka_volterra::{LvParams, PhasePoint, Velocity};
use crate::special::ComplexValue;
use crate::wigner_flow::{quantum_velocity, velocity_kernel, GaussianEnsemble};

/// Default |w| bar under which a node belongs to the equilibrium envelope.
pub const DEFAULT_SPEED_THRESHOLD: f64 = 0.07;
/// Newton refinement tolerance on |w|.
pub const DEFAULT_REFINE_TOL: f64 = 1e-10;
/// Finite-difference step for Jacobians.
const JACOBIAN_STEP: f64 = 1e-6;
/// Newton iteration cap.
const NEWTON_MAX_ITERS: usize = 50;
/// Loop radius used by classification's winding cross-check.
const CLASSIFY_LOOP_RADIUS: f64 = 0.05;
/// Winding-loop sample bounds.
const MIN_LOOP_SAMPLES: usize = 64;
const MAX_LOOP_SAMPLES: usize = 1024;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Errors raised by scanning, winding, and sweep operations.
#[derive(Debug, Clone, PartialEq)]
pub enum CriticalPointError {
    /// A scan-config field violates its invariant.
    InvalidConfig { what: &'static str, value: f64 },
    /// The winding loop passed exactly through a field zero.
    LoopThroughZero { sample_index: usize },
    /// Adjacent loop samples kept jumping more than π/2 even at the
    /// sample cap.
    UndersampledLoop { samples: usize },
    /// A sweep entry's spreading parameter was rejected by the ensemble.
    InvalidAlpha { alpha: f64 },
}

impl fmt::Display for CriticalPointError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriticalPointError::InvalidConfig { what, value } => {
                write!(f, "scan config: {what} invalid (got {value})")
            }
            CriticalPointError::LoopThroughZero { sample_index } => {
                write!(f, "winding loop passes through a field zero at sample {sample_index}")
            }
            CriticalPointError::UndersampledLoop { samples } => {
                write!(f, "winding loop under-sampled even at {samples} samples")
            }
            CriticalPointError::InvalidAlpha { alpha } => {
                write!(f, "sweep entry alpha = {alpha} rejected")
            }
        }
    }
}

impl std::error::Error for CriticalPointError {}

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// Scan window, grid resolution, and envelope threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub k_min: f64,
    pub k_max: f64,
    pub resolution: usize,
    pub speed_threshold: f64,
}

impl ScanConfig {
    pub fn new(
        x_range: (f64, f64),
        k_range: (f64, f64),
        resolution: usize,
        speed_threshold: f64,
    ) -> Result<Self, CriticalPointError> {
        let ordered = |what, (lo, hi): (f64, f64)| {
            if lo.is_finite() && hi.is_finite() && lo < hi {
                Ok(())
            } else {
                Err(CriticalPointError::InvalidConfig { what, value: hi - lo })
            }
        };
        ordered("x_range", x_range)?;
        ordered("k_range", k_range)?;
        if resolution < 16 {
            return Err(CriticalPointError::InvalidConfig {
                what: "resolution (min 16)",
                value: resolution as f64,
            });
        }
        if !(speed_threshold > 0.0) || !speed_threshold.is_finite() {
            return Err(CriticalPointError::InvalidConfig {
                what: "speed_threshold",
                value: speed_threshold,
            });
        }
        Ok(ScanConfig {
            x_min: x_range.0,
            x_max: x_range.1,
            k_min: k_range.0,
            k_max: k_range.1,
            resolution,
            speed_threshold,
        })
    }

    /// The default window: `[−3, 3]²` at resolution 256, threshold 0.07.
    pub fn standard() -> Self {
        ScanConfig::new((-3.0, 3.0), (-3.0, 3.0), 256, DEFAULT_SPEED_THRESHOLD)
            .expect("standard config is valid")
    }

    pub fn x_at(&self, i: usize) -> f64 {
        self.x_min + (self.x_max - self.x_min) * i as f64 / (self.resolution - 1) as f64
    }

    pub fn k_at(&self, j: usize) -> f64 {
        self.k_min + (self.k_max - self.k_min) * j as f64 / (self.resolution - 1) as f64
    }

    /// Area of one grid cell, for envelope area estimates.
    pub fn cell_area(&self) -> f64 {
        let n = (self.resolution - 1) as f64;
        (self.x_max - self.x_min) / n * ((self.k_max - self.k_min) / n)
    }

    pub fn contains(&self, p: PhasePoint) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.k >= self.k_min && p.k <= self.k_max
    }
}

/// Classification of a nondegenerate field zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalKind {
    VortexCcw,
    VortexCw,
    Saddle,
    QuasiStableFocus,
    Degenerate,
}

impl fmt::Display for CriticalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CriticalKind::VortexCcw => "vortex_ccw",
            CriticalKind::VortexCw => "vortex_cw",
            CriticalKind::Saddle => "saddle",
            CriticalKind::QuasiStableFocus => "quasi_stable_focus",
            CriticalKind::Degenerate => "degenerate",
        };
        write!(f, "{s}")
    }
}

/// A refined and classified zero of the velocity field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub location: PhasePoint,
    /// |w| at the location after refinement.
    pub speed: f64,
    pub kind: CriticalKind,
    pub winding: i32,
    pub jacobian_eigs: (ComplexValue, ComplexValue),
}

/// One 4-connected set of grid nodes with `|w|` below the threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeRegion {
    pub component_id: usize,
    /// Grid nodes `(i, j)` (x-index, k-index), in scan order.
    pub member_nodes: Vec<(usize, usize)>,
    /// Node count × cell area.
    pub area_estimate: f64,
}

/// Outcome of Newton refinement: a candidate zero plus its convergence
/// status. Non-converged candidates keep the seed location and its speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroCandidate {
    pub location: PhasePoint,
    pub speed: f64,
    pub converged: bool,
}

/// Census entry of a full scan→refine→classify pass at one α.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSummary {
    pub alpha: f64,
    pub n_components: usize,
    /// Refined, classified zeros sorted by (x, k).
    pub zeros: Vec<CriticalPoint>,
    /// Distance from the origin of the zero nearest it (NaN when no zero
    /// converged).
    pub dominant_displacement: f64,
}

// ---------------------------------------------------------------------------
// Grid scanning
// ---------------------------------------------------------------------------

/// `|w|` on the scan grid, row-major with x fastest.
///
/// The corrected field is separable per axis (`wx` needs the kernel only
/// at `x`, `wk` only at `k`), so the kernel is evaluated once per axis
/// node and reused across the whole grid; the resulting speeds are
/// identical to per-point [`quantum_velocity`] calls.
fn speed_grid(cfg: &ScanConfig, ens: GaussianEnsemble, params: LvParams) -> Vec<f64> {
    let n = cfg.resolution;
    let tx: Vec<f64> = (0..n).map(|i| velocity_kernel(cfg.x_at(i), ens)).collect();
    let tk: Vec<f64> = (0..n).map(|j| velocity_kernel(cfg.k_at(j), ens)).collect();
    let ex: Vec<f64> = (0..n).map(|i| (-cfg.x_at(i)).exp()).collect();
    let ek: Vec<f64> = (0..n).map(|j| (-cfg.k_at(j)).exp()).collect();
    let a = params.a();
    let mut grid = vec![0.0_f64; n * n];
    grid.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
        for (i, cell) in row.iter_mut().enumerate() {
            let wx = 1.0 - ek[j] * tx[i];
            let wk = -a * (1.0 - ex[i] * tk[j]);
            *cell = wx.hypot(wk);
        }
    });
    grid
}

fn speed_grid_field<F>(cfg: &ScanConfig, field: &F) -> Vec<f64>
where
    F: Fn(PhasePoint) -> Velocity + Sync,
{
    let n = cfg.resolution;
    let mut grid = vec![0.0_f64; n * n];
    grid.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
        for (i, cell) in row.iter_mut().enumerate() {
            let v = field(PhasePoint::new(cfg.x_at(i), cfg.k_at(j)));
            *cell = v.vx.hypot(v.vk);
        }
    });
    grid
}

/// Plain union-find with path halving.
struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn label_components(cfg: &ScanConfig, speeds: &[f64]) -> Vec<EnvelopeRegion> {
    let n = cfg.resolution;
    let below = |i: usize, j: usize| speeds[j * n + i] < cfg.speed_threshold;
    let mut dsu = Dsu::new(n * n);
    for j in 0..n {
        for i in 0..n {
            if !below(i, j) {
                continue;
            }
            if i + 1 < n && below(i + 1, j) {
                dsu.union(j * n + i, j * n + i + 1);
            }
            if j + 1 < n && below(i, j + 1) {
                dsu.union(j * n + i, (j + 1) * n + i);
            }
        }
    }
    // Collect members per root in scan order; roots are minimal member
    // indices, so ordering components by root is deterministic.
    let mut roots: Vec<usize> = Vec::new();
    let mut members: Vec<Vec<(usize, usize)>> = Vec::new();
    for j in 0..n {
        for i in 0..n {
            if !below(i, j) {
                continue;
            }
            let r = dsu.find(j * n + i);
            match roots.binary_search(&r) {
                Ok(pos) => members[pos].push((i, j)),
                Err(pos) => {
                    roots.insert(pos, r);
                    members.insert(pos, vec![(i, j)]);
                }
            }
        }
    }
    let cell = cfg.cell_area();
    members
        .into_iter()
        .enumerate()
        .map(|(id, nodes)| EnvelopeRegion {
            component_id: id,
            area_estimate: nodes.len() as f64 * cell,
            member_nodes: nodes,
        })
        .collect()
}

/// Threshold the corrected field's speed on the grid and label 4-connected
/// components.
pub fn scan_envelope(
    cfg: &ScanConfig,
    ens: GaussianEnsemble,
    params: LvParams,
) -> Vec<EnvelopeRegion> {
    label_components(cfg, &speed_grid(cfg, ens, params))
}

/// [`scan_envelope`] over an arbitrary velocity field.
pub fn scan_envelope_field<F>(cfg: &ScanConfig, field: &F) -> Vec<EnvelopeRegion>
where
    F: Fn(PhasePoint) -> Velocity + Sync,
{
    label_components(cfg, &speed_grid_field(cfg, field))
}

// ---------------------------------------------------------------------------
// Refinement
// ---------------------------------------------------------------------------

fn fd_jacobian<F>(field: &F, p: PhasePoint) -> [[f64; 2]; 2]
where
    F: Fn(PhasePoint) -> Velocity,
{
    let h = JACOBIAN_STEP;
    let fx_p = field(PhasePoint::new(p.x + h, p.k));
    let fx_m = field(PhasePoint::new(p.x - h, p.k));
    let fk_p = field(PhasePoint::new(p.x, p.k + h));
    let fk_m = field(PhasePoint::new(p.x, p.k - h));
    [
        [(fx_p.vx - fx_m.vx) / (2.0 * h), (fk_p.vx - fk_m.vx) / (2.0 * h)],
        [(fx_p.vk - fx_m.vk) / (2.0 * h), (fk_p.vk - fk_m.vk) / (2.0 * h)],
    ]
}

/// Damped Newton iteration on an arbitrary velocity field.
pub fn refine_zero_field<F>(seed: PhasePoint, field: &F, tol: f64) -> ZeroCandidate
where
    F: Fn(PhasePoint) -> Velocity,
{
    let speed_at = |p: PhasePoint| {
        let v = field(p);
        v.vx.hypot(v.vk)
    };
    let mut p = seed;
    let mut speed = speed_at(p);
    for _ in 0..NEWTON_MAX_ITERS {
        if speed <= tol {
            return ZeroCandidate { location: p, speed, converged: true };
        }
        let v = field(p);
        let j = fd_jacobian(field, p);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        // Full Newton step, halved until the residual actually drops.
        let dx = (-v.vx * j[1][1] + v.vk * j[0][1]) / det;
        let dk = (-v.vk * j[0][0] + v.vx * j[1][0]) / det;
        let mut damping = 1.0;
        let mut improved = false;
        for _ in 0..8 {
            let trial = PhasePoint::new(p.x + damping * dx, p.k + damping * dk);
            let trial_speed = speed_at(trial);
            if trial_speed < speed {
                p = trial;
                speed = trial_speed;
                improved = true;
                break;
            }
            damping *= 0.5;
        }
        if !improved {
            break;
        }
    }
    ZeroCandidate { location: p, speed, converged: speed <= tol }
}

/// Damped Newton refinement of a corrected-field zero.
pub fn refine_zero(
    seed: PhasePoint,
    ens: GaussianEnsemble,
    params: LvParams,
    tol: f64,
) -> ZeroCandidate {
    refine_zero_field(seed, &|p| quantum_velocity(p, ens, params), tol)
}

// ---------------------------------------------------------------------------
// Winding numbers
// ---------------------------------------------------------------------------

fn wrap_angle(d: f64) -> f64 {
    if d > std::f64::consts::PI {
        d - 2.0 * std::f64::consts::PI
    } else if d <= -std::f64::consts::PI {
        d + 2.0 * std::f64::consts::PI
    } else {
        d
    }
}

/// Accumulate the field angle around a closed polyline. `Err(None)` means
/// under-sampled (retryable); `Err(Some(e))` is fatal.
fn winding_over_loop<F>(pts: &[PhasePoint], field: &F) -> Result<i32, Option<CriticalPointError>>
where
    F: Fn(PhasePoint) -> Velocity,
{
    let angles: Vec<f64> = pts
        .iter()
        .enumerate()
        .map(|(idx, p)| {
            let v = field(*p);
            if v.vx == 0.0 && v.vk == 0.0 {
                Err(Some(CriticalPointError::LoopThroughZero { sample_index: idx }))
            } else {
                Ok(v.vk.atan2(v.vx))
            }
        })
        .collect::<Result<_, _>>()?;
    let mut total = 0.0;
    for i in 0..angles.len() {
        let next = angles[(i + 1) % angles.len()];
        let d = wrap_angle(next - angles[i]);
        if d.abs() > std::f64::consts::FRAC_PI_2 {
            return Err(None);
        }
        total += d;
    }
    Ok((total / (2.0 * std::f64::consts::PI)).round() as i32)
}

fn winding_with_refinement<F, B>(
    build: B,
    field: &F,
    samples: usize,
) -> Result<i32, CriticalPointError>
where
    F: Fn(PhasePoint) -> Velocity,
    B: Fn(usize) -> Vec<PhasePoint>,
{
    if samples < MIN_LOOP_SAMPLES {
        return Err(CriticalPointError::InvalidConfig {
            what: "loop samples (min 64)",
            value: samples as f64,
        });
    }
    let mut n = samples;
    loop {
        match winding_over_loop(&build(n), field) {
            Ok(w) => return Ok(w),
            Err(Some(e)) => return Err(e),
            Err(None) => {
                if n >= MAX_LOOP_SAMPLES {
                    return Err(CriticalPointError::UndersampledLoop { samples: n });
                }
                n = (n * 2).min(MAX_LOOP_SAMPLES);
            }
        }
    }
}

/// Winding number of an arbitrary field around a circle.
pub fn winding_number_field<F>(
    center: PhasePoint,
    radius: f64,
    field: &F,
    samples: usize,
) -> Result<i32, CriticalPointError>
where
    F: Fn(PhasePoint) -> Velocity,
{
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(CriticalPointError::InvalidConfig { what: "loop radius", value: radius });
    }
    let build = |n: usize| {
        (0..n)
            .map(|s| {
                let th = 2.0 * std::f64::consts::PI * s as f64 / n as f64;
                PhasePoint::new(center.x + radius * th.cos(), center.k + radius * th.sin())
            })
            .collect()
    };
    winding_with_refinement(build, field, samples)
}

/// Winding number of the corrected field around a circle.
pub fn winding_number(
    center: PhasePoint,
    radius: f64,
    ens: GaussianEnsemble,
    params: LvParams,
    samples: usize,
) -> Result<i32, CriticalPointError> {
    winding_number_field(center, radius, &|p| quantum_velocity(p, ens, params), samples)
}

/// Winding of the corrected field around the boundary rectangle of a scan
/// window — the total index of everything inside.
pub fn rectangle_winding(
    x_range: (f64, f64),
    k_range: (f64, f64),
    ens: GaussianEnsemble,
    params: LvParams,
    samples_per_edge: usize,
) -> Result<i32, CriticalPointError> {
    rectangle_winding_field(x_range, k_range, &|p| quantum_velocity(p, ens, params), samples_per_edge)
}

/// [`rectangle_winding`] over an arbitrary field.
pub fn rectangle_winding_field<F>(
    x_range: (f64, f64),
    k_range: (f64, f64),
    field: &F,
    samples_per_edge: usize,
) -> Result<i32, CriticalPointError>
where
    F: Fn(PhasePoint) -> Velocity,
{
    let (x0, x1) = x_range;
    let (k0, k1) = k_range;
    if !(x0 < x1) || !(k0 < k1) {
        return Err(CriticalPointError::InvalidConfig {
            what: "rectangle ranges",
            value: (x1 - x0).min(k1 - k0),
        });
    }
    let build = |n: usize| {
        // Counterclockwise: bottom, right, top, left; n samples per edge,
        // corner points not duplicated.
        let mut pts = Vec::with_capacity(4 * n);
        for s in 0..n {
            let f = s as f64 / n as f64;
            pts.push(PhasePoint::new(x0 + f * (x1 - x0), k0));
        }
        for s in 0..n {
            let f = s as f64 / n as f64;
            pts.push(PhasePoint::new(x1, k0 + f * (k1 - k0)));
        }
        for s in 0..n {
            let f = s as f64 / n as f64;
            pts.push(PhasePoint::new(x1 - f * (x1 - x0), k1));
        }
        for s in 0..n {
            let f = s as f64 / n as f64;
            pts.push(PhasePoint::new(x0, k1 - f * (k1 - k0)));
        }
        pts
    };
    winding_with_refinement(build, field, samples_per_edge)
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

fn eigenvalues(j: &[[f64; 2]; 2]) -> (ComplexValue, ComplexValue) {
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        let root = disc.sqrt();
        (ComplexValue::new((tr + root) / 2.0, 0.0), ComplexValue::new((tr - root) / 2.0, 0.0))
    } else {
        let root = (-disc).sqrt();
        (ComplexValue::new(tr / 2.0, root / 2.0), ComplexValue::new(tr / 2.0, -root / 2.0))
    }
}

/// Classify a refined candidate of an arbitrary field.
///
/// Non-converged candidates come back `degenerate` immediately. Converged
/// ones get a finite-difference Jacobian: real eigenvalues of opposite
/// sign mean saddle; a complex pair means rotation — a quasi-stable focus
/// when the shared real part is negligible against the imaginary part,
/// otherwise a vortex signed by the curl. The Jacobian verdict is then
/// cross-checked against the loop winding number (saddle ⟺ −1, rotation ⟺
/// +1); any mismatch, eigenvalue degeneracy, or winding failure demotes
/// the point to `degenerate` rather than guessing.
pub fn classify_field<F>(cand: ZeroCandidate, field: &F) -> CriticalPoint
where
    F: Fn(PhasePoint) -> Velocity,
{
    let degenerate = |speed: f64, eigs, winding| CriticalPoint {
        location: cand.location,
        speed,
        kind: CriticalKind::Degenerate,
        winding,
        jacobian_eigs: eigs,
    };
    let zero_pair = (ComplexValue::ZERO, ComplexValue::ZERO);
    if !cand.converged {
        return degenerate(cand.speed, zero_pair, 0);
    }
    let j = fd_jacobian(field, cand.location);
    let eigs = eigenvalues(&j);
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let kind = if det < 0.0 {
        CriticalKind::Saddle
    } else if eigs.0.im != 0.0 {
        if eigs.0.re.abs() < 1e-6 * eigs.0.im.abs() {
            CriticalKind::QuasiStableFocus
        } else {
            let curl = j[1][0] - j[0][1];
            if curl > 0.0 {
                CriticalKind::VortexCcw
            } else {
                CriticalKind::VortexCw
            }
        }
    } else {
        // Real eigenvalues of equal sign or zero determinant: outside the
        // vocabulary of nondegenerate rotation/saddle structure.
        return degenerate(cand.speed, eigs, 0);
    };
    let winding =
        match winding_number_field(cand.location, CLASSIFY_LOOP_RADIUS, field, MIN_LOOP_SAMPLES) {
            Ok(w) => w,
            Err(_) => return degenerate(cand.speed, eigs, 0),
        };
    let expected = if kind == CriticalKind::Saddle { -1 } else { 1 };
    if winding != expected {
        return degenerate(cand.speed, eigs, winding);
    }
    CriticalPoint { location: cand.location, speed: cand.speed, kind, winding, jacobian_eigs: eigs }
}

/// Classify a refined candidate of the corrected field.
pub fn classify(cand: ZeroCandidate, ens: GaussianEnsemble, params: LvParams) -> CriticalPoint {
    classify_field(cand, &|p| quantum_velocity(p, ens, params))
}

// ---------------------------------------------------------------------------
// Census and sweeps
// ---------------------------------------------------------------------------

/// Collect seeds, refine, deduplicate, and classify every zero of the
/// corrected field inside the scan window.
///
/// Seeds are the speed-minimizing node of each envelope component plus
/// every grid-local speed minimum below 0.3 (catching zeros whose
/// envelope would need a finer threshold). Non-converged refinements and
/// zeros that leave the window are dropped; survivors within 1e-6 of each
/// other are merged. Result sorted by (x, k).
pub fn zero_census(
    cfg: &ScanConfig,
    ens: GaussianEnsemble,
    params: LvParams,
) -> Vec<CriticalPoint> {
    let n = cfg.resolution;
    let speeds = speed_grid(cfg, ens, params);
    let at = |i: usize, j: usize| speeds[j * n + i];

    let mut seeds: Vec<(usize, usize)> = Vec::new();
    // Per-component minima.
    for region in label_components(cfg, &speeds) {
        if let Some(&(i, j)) = region
            .member_nodes
            .iter()
            .min_by(|a, b| at(a.0, a.1).total_cmp(&at(b.0, b.1)))
        {
            seeds.push((i, j));
        }
    }
    // Grid-local minima under a loose bar.
    for j in 0..n {
        for i in 0..n {
            let s = at(i, j);
            if s >= 0.3 {
                continue;
            }
            let le_left = i == 0 || s <= at(i - 1, j);
            let lt_right = i + 1 == n || s < at(i + 1, j);
            let le_down = j == 0 || s <= at(i, j - 1);
            let lt_up = j + 1 == n || s < at(i, j + 1);
            if le_left && lt_right && le_down && lt_up {
                seeds.push((i, j));
            }
        }
    }

    let mut zeros: Vec<CriticalPoint> = Vec::new();
    for (i, j) in seeds {
        let seed = PhasePoint::new(cfg.x_at(i), cfg.k_at(j));
        let cand = refine_zero(seed, ens, params, DEFAULT_REFINE_TOL);
        if !cand.converged || !cfg.contains(cand.location) {
            continue;
        }
        if zeros.iter().any(|z| z.location.distance(&cand.location) <= 1e-6) {
            continue;
        }
        zeros.push(classify(cand, ens, params));
    }
    zeros.sort_by(|a, b| {
        a.location
            .x
            .total_cmp(&b.location.x)
            .then(a.location.k.total_cmp(&b.location.k))
    });
    zeros
}

/// Scan→refine→classify at each α, without aborting on per-α failures.
pub fn alpha_sweep(
    alphas: &[f64],
    cfg: &ScanConfig,
    params: LvParams,
) -> Vec<Result<AlphaSummary, CriticalPointError>> {
    alphas
        .iter()
        .map(|&alpha| {
            let ens = GaussianEnsemble::new(alpha)
                .map_err(|_| CriticalPointError::InvalidAlpha { alpha })?;
            let n_components = scan_envelope(cfg, ens, params).len();
            let zeros = zero_census(cfg, ens, params);
            let dominant_displacement = zeros
                .iter()
                .map(|z| z.location.x.hypot(z.location.k))
                .min_by(f64::total_cmp)
                .unwrap_or(f64::NAN);
            Ok(AlphaSummary { alpha, n_components, zeros, dominant_displacement })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
