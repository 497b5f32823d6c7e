//! The classical prey–predator system in canonical log-density coordinates.
//!
//! Densities `(y, z)` map to coordinates `(x, k)` through `y = e^(-x)`,
//! `z = e^(-k)`, turning the textbook Lotka–Volterra equations into the
//! Hamiltonian system
//!
//! ```text
//! H(x, k) = a·x + k + a·e^(-x) + e^(-k),      a > 0
//! dx/dτ   =  ∂H/∂k = 1 − e^(-k)
//! dk/dτ   = −∂H/∂x = a·(e^(-x) − 1)
//! ```
//!
//! `H` is minimized at the coexistence equilibrium `(0, 0)` with value
//! `a + 1`, and every classical orbit is a closed level curve above that
//! minimum. Because `H` is a sum of a pure-`x` and a pure-`k` part, all of
//! its mixed partial derivatives vanish and the odd derivatives in each
//! variable take a two-term closed form — these feed the series expansion
//! of the ensemble-corrected currents in [`crate::wigner_flow`].

use std::fmt;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Errors raised by the classical-system layer.
#[derive(Debug, Clone, PartialEq)]
pub enum LotkaVolterraError {
    /// Coupling constant must be strictly positive.
    NonPositiveCoupling { a: f64 },
    /// Species densities must be strictly positive to have a log coordinate.
    NonPositiveDensity { y: f64, z: f64 },
}

impl fmt::Display for LotkaVolterraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LotkaVolterraError::NonPositiveCoupling { a } => {
                write!(f, "coupling a must be > 0, got {a}")
            }
            LotkaVolterraError::NonPositiveDensity { y, z } => {
                write!(f, "species densities must be > 0, got (y, z) = ({y}, {z})")
            }
        }
    }
}

impl std::error::Error for LotkaVolterraError {}

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// Model parameters: the prey–predator coupling `a > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LvParams {
    a: f64,
}

impl LvParams {
    pub fn new(a: f64) -> Result<Self, LotkaVolterraError> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(LotkaVolterraError::NonPositiveCoupling { a });
        }
        Ok(LvParams { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
}

/// A point of the canonical phase plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub x: f64,
    pub k: f64,
}

impl PhasePoint {
    pub fn new(x: f64, k: f64) -> Self {
        PhasePoint { x, k }
    }

    /// Euclidean distance to another phase point.
    pub fn distance(&self, other: &PhasePoint) -> f64 {
        (self.x - other.x).hypot(self.k - other.k)
    }
}

/// Species densities `(y, z) = (e^(-x), e^(-k))`; both strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeciesPoint {
    pub y: f64,
    pub z: f64,
}

/// A phase-plane velocity `(dx/dτ, dk/dτ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Velocity {
    pub vx: f64,
    pub vk: f64,
}

impl Velocity {
    pub fn speed(&self) -> f64 {
        self.vx.hypot(self.vk)
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// The conserved energy `a·x + k + a·e^(-x) + e^(-k)`.
///
/// Its minimum over the plane is `a + 1`, attained at the origin.
pub fn energy(p: PhasePoint, params: LvParams) -> f64 {
    let a = params.a();
    a * p.x + p.k + a * (-p.x).exp() + (-p.k).exp()
}

/// The classical velocity field `(1 − e^(-k), a·e^(-x) − a)`.
///
/// This is the symplectic gradient of [`energy`]; it vanishes only at the
/// origin.
pub fn classical_velocity(p: PhasePoint, params: LvParams) -> Velocity {
    Velocity {
        vx: 1.0 - (-p.k).exp(),
        vk: params.a() * ((-p.x).exp() - 1.0),
    }
}

/// Odd `x`-derivative of the Hamiltonian:
/// `∂ₓ^(2η+1) H = a·(δ_{η0} − e^(-x))`.
///
/// The linear term contributes only at η = 0; all higher odd derivatives
/// see just the exponential.
pub fn odd_derivative_x(p: PhasePoint, params: LvParams, eta: u32) -> f64 {
    let delta = if eta == 0 { 1.0 } else { 0.0 };
    params.a() * (delta - (-p.x).exp())
}

/// Odd `k`-derivative of the Hamiltonian:
/// `∂ₖ^(2η+1) H = δ_{η0} − e^(-k)`.
pub fn odd_derivative_k(p: PhasePoint, eta: u32) -> f64 {
    let delta = if eta == 0 { 1.0 } else { 0.0 };
    delta - (-p.k).exp()
}

/// Map a phase point to species densities.
pub fn to_species(p: PhasePoint) -> SpeciesPoint {
    SpeciesPoint { y: (-p.x).exp(), z: (-p.k).exp() }
}

/// Map species densities back to a phase point. Fails for non-positive
/// densities, which have no log coordinate.
pub fn from_species(s: SpeciesPoint) -> Result<PhasePoint, LotkaVolterraError> {
    if !(s.y > 0.0) || !(s.z > 0.0) {
        return Err(LotkaVolterraError::NonPositiveDensity { y: s.y, z: s.z });
    }
    Ok(PhasePoint { x: -s.y.ln(), k: -s.z.ln() })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn params(a: f64) -> LvParams {
        LvParams::new(a).unwrap()
    }

    #[test]
    fn params_reject_bad_coupling() {
        assert!(LvParams::new(0.0).is_err());
        assert!(LvParams::new(-1.0).is_err());
        assert!(LvParams::new(f64::NAN).is_err());
        assert!(LvParams::new(0.25).is_ok());
    }

    #[test]
    fn energy_at_known_points() {
        assert_eq!(energy(PhasePoint::new(0.0, 0.0), params(1.0)), 2.0);
        assert_eq!(energy(PhasePoint::new(0.0, 0.0), params(0.25)), 1.25);
        let e = energy(PhasePoint::new(1.0, 0.0), params(1.0));
        assert!((e - 2.367879441171442321596).abs() < 1e-15, "H(1,0) = {e}");
    }

    #[test]
    fn energy_minimum_at_origin() {
        // a + 1 is the global minimum; sample the plane to confirm no point
        // goes below it.
        let mut rng = StdRng::seed_from_u64(0xa11);
        for &a in &[0.25, 1.0, 4.0] {
            let pr = params(a);
            let floor = a + 1.0;
            for _ in 0..500 {
                let p = PhasePoint::new(rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0));
                assert!(energy(p, pr) >= floor - 1e-12, "energy below floor at {p:?}");
            }
        }
    }

    #[test]
    fn velocity_at_known_points() {
        let v = classical_velocity(PhasePoint::new(0.0, 0.0), params(3.0));
        assert_eq!((v.vx, v.vk), (0.0, 0.0));

        let v = classical_velocity(PhasePoint::new(0.0, 2.0f64.ln()), params(1.0));
        assert!((v.vx - 0.5).abs() < 1e-15 && v.vk == 0.0, "{v:?}");

        let v = classical_velocity(PhasePoint::new(2.0f64.ln(), 0.0), params(4.0));
        assert!(v.vx == 0.0 && (v.vk + 2.0).abs() < 1e-15, "{v:?}");
    }

    #[test]
    fn velocity_is_symplectic_gradient_of_energy() {
        // vx = ∂H/∂k and vk = −∂H/∂x by central finite differences.
        let h = 1e-6;
        let mut rng = StdRng::seed_from_u64(0x5e1f);
        for _ in 0..100 {
            let a = rng.gen_range(0.2..4.0);
            let pr = params(a);
            let p = PhasePoint::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let v = classical_velocity(p, pr);
            let dh_dk = (energy(PhasePoint::new(p.x, p.k + h), pr)
                - energy(PhasePoint::new(p.x, p.k - h), pr))
                / (2.0 * h);
            let dh_dx = (energy(PhasePoint::new(p.x + h, p.k), pr)
                - energy(PhasePoint::new(p.x - h, p.k), pr))
                / (2.0 * h);
            assert!((v.vx - dh_dk).abs() <= 1e-6 * dh_dk.abs().max(1.0), "vx at {p:?}");
            assert!((v.vk + dh_dx).abs() <= 1e-6 * dh_dx.abs().max(1.0), "vk at {p:?}");
        }
    }

    #[test]
    fn mixed_second_derivative_vanishes() {
        // H is separable, so ∂²H/∂x∂k = 0 and the four-point stencil cancels
        // exactly for any step width — there is no truncation term. A coarse
        // step keeps the rounding floor (~ulp(H)/4h²) well below tolerance.
        let h = 1e-2;
        let mut rng = StdRng::seed_from_u64(0x3e9);
        let pr = params(1.5);
        for _ in 0..100 {
            let (x, k) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let mixed = (energy(PhasePoint::new(x + h, k + h), pr)
                - energy(PhasePoint::new(x + h, k - h), pr)
                - energy(PhasePoint::new(x - h, k + h), pr)
                + energy(PhasePoint::new(x - h, k - h), pr))
                / (4.0 * h * h);
            assert!(mixed.abs() <= 1e-8, "mixed derivative {mixed:e} at ({x}, {k})");
        }
    }

    #[test]
    fn odd_derivatives_at_known_points() {
        let origin = PhasePoint::new(0.0, 0.0);
        assert_eq!(odd_derivative_x(origin, params(2.0), 0), 0.0);
        assert_eq!(odd_derivative_x(origin, params(1.0), 1), -1.0);
        assert_eq!(odd_derivative_k(origin, 0), 0.0);
        assert_eq!(odd_derivative_k(origin, 3), -1.0);
        let d = odd_derivative_k(PhasePoint::new(0.0, 1.0), 0);
        assert!((d - 0.6321205588285576784045).abs() < 1e-15, "{d}");
    }

    #[test]
    fn odd_derivatives_match_nested_finite_differences() {
        // For η ≥ 1 each additional derivative pair just re-differentiates
        // the exponential: ∂ₓ^(2η+1)H = ∂ₓ^(2η−1)(∂ₓ²H) at η ≥ 1 reduces to
        // checking that the second derivative of the closed form matches
        // the next odd order. Central second difference of the η-form must
        // reproduce the (η+1)-form.
        let h = 1e-4;
        let mut rng = StdRng::seed_from_u64(0xfd);
        let pr = params(0.7);
        for _ in 0..50 {
            let x = rng.gen_range(-2.0..2.0);
            let k = rng.gen_range(-2.0..2.0);
            for eta in 1..4u32 {
                let f = |xx: f64| odd_derivative_x(PhasePoint::new(xx, k), pr, eta);
                let second = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
                let next = odd_derivative_x(PhasePoint::new(x, k), pr, eta + 1);
                assert!(
                    (second - next).abs() <= 1e-5 * next.abs().max(1.0),
                    "x-derivative chain at eta {eta}, x {x}"
                );
                let g = |kk: f64| odd_derivative_k(PhasePoint::new(x, kk), eta);
                let second = (g(k + h) - 2.0 * g(k) + g(k - h)) / (h * h);
                let next = odd_derivative_k(PhasePoint::new(x, k), eta + 1);
                assert!(
                    (second - next).abs() <= 1e-5 * next.abs().max(1.0),
                    "k-derivative chain at eta {eta}, k {k}"
                );
            }
        }
    }

    #[test]
    fn eta_zero_derivatives_recover_velocity() {
        let mut rng = StdRng::seed_from_u64(0x77);
        let pr = params(2.5);
        for _ in 0..50 {
            let p = PhasePoint::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let v = classical_velocity(p, pr);
            assert_eq!(odd_derivative_x(p, pr, 0), -v.vk);
            assert_eq!(odd_derivative_k(p, 0), v.vx);
        }
    }

    #[test]
    fn species_mapping_known_values() {
        let s = to_species(PhasePoint::new(0.0, 0.0));
        assert_eq!((s.y, s.z), (1.0, 1.0));
        let s = to_species(PhasePoint::new(2.0f64.ln(), 4.0f64.ln()));
        assert!((s.y - 0.5).abs() < 1e-15 && (s.z - 0.25).abs() < 1e-15);
    }

    #[test]
    fn species_mapping_round_trips() {
        let mut rng = StdRng::seed_from_u64(0x1007);
        for _ in 0..1000 {
            let p = PhasePoint::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let q = from_species(to_species(p)).unwrap();
            assert!(
                (p.x - q.x).abs() <= 1e-14 && (p.k - q.k).abs() <= 1e-14,
                "round trip moved {p:?} to {q:?}"
            );
        }
    }

    #[test]
    fn from_species_rejects_non_positive() {
        assert!(from_species(SpeciesPoint { y: 0.0, z: 1.0 }).is_err());
        assert!(from_species(SpeciesPoint { y: 1.0, z: -0.5 }).is_err());
    }
}
