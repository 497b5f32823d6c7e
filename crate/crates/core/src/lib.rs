//! Phase-space analysis of prey–predator dynamics under a gaussian
//! statistical ensemble.
//!
//! The model is the canonical Lotka–Volterra system written in log-density
//! coordinates `(x, k)`, where the species densities are `y = e^(-x)`
//! (prey) and `z = e^(-k)` (predator) and the conserved classical energy is
//! `a·x + k + a·e^(-x) + e^(-k)` with coupling `a > 0`. Dressing the system
//! with an origin-centered gaussian ensemble of spreading `α` produces a
//! quasi-probability current whose ratio to the density defines a corrected
//! velocity field: trajectories of that field deviate from the classical
//! closed orbits in ways that depend on `α` and `a` — displaced equilibria,
//! amplified or suppressed oscillations, and (for `α ≳ 1`) extra vortex and
//! saddle structures in the flow.
//!
//! The crate is organized in five layers:
//!
//! * [`special`] — self-contained special-function kernels: Hermite
//!   polynomials, the error function at complex argument, `erfi`, and the
//!   scaled imaginary part of `erf` off the real axis that the closed-form
//!   velocity fields are built from.
//! * [`lotka_volterra`] — the classical system: energy, velocity field,
//!   higher odd derivatives of the Hamiltonian, species-density mapping.
//! * [`wigner_flow`] — ensemble density, closed-form current divergences
//!   and corrected velocities, their truncated-series counterparts, the
//!   stationarity/volume-preservation quantifiers, and parallel grid scans.
//! * [`dynamics`] — adaptive Dormand–Prince integration of classical and
//!   corrected trajectories, extinction/revival-window detection, and
//!   classical-vs-corrected de-phasing measurement.
//! * [`critical_points`] — envelope extraction (`|w|` thresholding with
//!   connected-component labeling), Newton refinement of field zeros,
//!   winding numbers, Jacobian classification, and `α`-sweeps.

pub mod critical_points;
pub mod dynamics;
pub mod lotka_volterra;
pub mod special;
pub mod wigner_flow;
