//! Special-function kernels: Hermite polynomials, the error function at
//! complex argument, the imaginary error function `erfi`, and the scaled
//! imaginary part of `erf` just off the real axis.
//!
//! Everything here is self-contained f64 numerics. The accuracy contract is
//! driven by the downstream field evaluations, which compare independent
//! formulations of the same quantity to 1e-10 relative: the kernels
//! therefore target ~1e-12 relative or better on their working domains.

use std::fmt;
use std::sync::OnceLock;

/// Number of quadrature nodes for a single-panel evaluation of the strip
/// integrals (integrands of the form `e^(t²)·cos(2ut)` over `[0, v]`).
const PANEL_NODES: usize = 48;
/// Node count per sub-panel for composite quadrature at larger `v`.
const COMPOSITE_NODES: usize = 32;
/// Maximum sub-panel width for composite quadrature.
const COMPOSITE_WIDTH: f64 = 0.5;
/// Single-panel / composite switchover point for the strip integrals.
const SINGLE_PANEL_LIMIT: f64 = 0.75;

/// Hermite order guard: callers never need more than ~2·η_max + 1 ≈ 121.
const HERMITE_MAX_ORDER: u32 = 200;
/// |Im z| guard for [`erf_complex`] and |u| guard for [`erfi`].
const IM_LIMIT: f64 = 10.0;
/// |z| boundary between the Maclaurin regime and the strip-decomposition
/// regime of [`erf_complex`].
const MACLAURIN_RADIUS: f64 = 3.5;
/// Real-axis abscissa beyond which the continued fraction replaces the
/// Maclaurin series inside the strip decomposition. The fraction converges
/// in under 40 terms with ~1e-15 relative error for u ≥ 2.8, while the
/// alternating series loses ~e^(u²)·ε absolute accuracy there.
const REAL_AXIS_CF_THRESHOLD: f64 = 3.0;

const SQRT_PI: f64 = 1.772453850905516_f64;
const TWO_OVER_SQRT_PI: f64 = 1.1283791670955126_f64;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Errors raised by the special-function kernels.
#[derive(Debug, Clone, PartialEq)]
pub enum SpecialError {
    /// Hermite order above the overflow guard.
    OrderTooLarge { n: u32, max: u32 },
    /// Argument outside the validated accuracy domain.
    OutsideDomain { what: &'static str, value: f64, limit: f64 },
}

impl fmt::Display for SpecialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecialError::OrderTooLarge { n, max } => {
                write!(f, "hermite order {n} exceeds guard {max}")
            }
            SpecialError::OutsideDomain { what, value, limit } => {
                write!(f, "{what} = {value} outside validated domain (|{what}| <= {limit})")
            }
        }
    }
}

impl std::error::Error for SpecialError {}

// ---------------------------------------------------------------------------
// Complex value
// ---------------------------------------------------------------------------

/// A complex number with f64 components.
///
/// Only the operations the kernels need are implemented; this is not a
/// general complex-arithmetic type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl ComplexValue {
    pub const ZERO: ComplexValue = ComplexValue { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Self {
        ComplexValue { re, im }
    }

    pub fn conj(self) -> Self {
        ComplexValue { re: self.re, im: -self.im }
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    fn mul(self, other: Self) -> Self {
        ComplexValue {
            re: self.re * other.re - self.im * other.im,
            im: self.re * other.im + self.im * other.re,
        }
    }

    fn scale(self, s: f64) -> Self {
        ComplexValue { re: self.re * s, im: self.im * s }
    }

    fn add(self, other: Self) -> Self {
        ComplexValue { re: self.re + other.re, im: self.im + other.im }
    }

    #[cfg(test)]
    fn neg(self) -> Self {
        ComplexValue { re: -self.re, im: -self.im }
    }
}

// ---------------------------------------------------------------------------
// Gauss–Legendre nodes
// ---------------------------------------------------------------------------

/// Gauss–Legendre nodes and weights on [-1, 1], computed on first use by
/// Newton iteration on the Legendre recurrence. Nodes converge to machine
/// precision in a handful of iterations from the Chebyshev-like initial
/// guess; accuracy is asserted by the moment tests below.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    // Symmetric rule: solve for the non-negative half and mirror.
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                // One polishing step after convergence, then stop.
                let mut q0 = 1.0;
                let mut q1 = x;
                for j in 2..=n {
                    let jf = j as f64;
                    let q2 = ((2.0 * jf - 1.0) * x * q1 - (jf - 1.0) * q0) / jf;
                    q0 = q1;
                    q1 = q2;
                }
                dp = n as f64 * (x * q1 - q0) / (x * x - 1.0);
                x -= q1 / dp;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_NODES))
}

fn composite_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(COMPOSITE_NODES))
}

// ---------------------------------------------------------------------------
// Public kernels
// ---------------------------------------------------------------------------

/// Physicists' Hermite polynomial `H_n(u)` by the stable three-term
/// recurrence `H_0 = 1`, `H_1 = 2u`, `H_{n+1} = 2u·H_n − 2n·H_{n−1}`.
pub fn hermite(n: u32, u: f64) -> Result<f64, SpecialError> {
    if n > HERMITE_MAX_ORDER {
        return Err(SpecialError::OrderTooLarge { n, max: HERMITE_MAX_ORDER });
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * u;
    for m in 1..n {
        let next = 2.0 * u * cur - 2.0 * (m as f64) * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Imaginary error function `erfi(u) = -i·erf(iu)`.
///
/// All-positive Maclaurin series `(2/√π)·Σ u^(2n+1)/(n!(2n+1))` — no
/// cancellation, so it is accurate over the whole guarded range |u| ≤ 10.
pub fn erfi(u: f64) -> Result<f64, SpecialError> {
    if u.abs() > IM_LIMIT {
        return Err(SpecialError::OutsideDomain { what: "u", value: u, limit: IM_LIMIT });
    }
    let u2 = u * u;
    let mut term = u;
    let mut sum = u;
    let mut n = 0u32;
    loop {
        n += 1;
        let nf = n as f64;
        // term_{n} = u^(2n+1)/n!; the series element divides by (2n+1).
        term *= u2 / nf;
        let element = term / (2.0 * nf + 1.0);
        sum += element;
        if element.abs() <= f64::EPSILON * sum.abs() || n > 400 {
            break;
        }
    }
    Ok(TWO_OVER_SQRT_PI * sum)
}

/// Error function at complex argument.
///
/// The argument is first folded into the closed first quadrant using
/// oddness (`erf(-z) = -erf(z)`) and conjugate symmetry
/// (`erf(z̄) = conj erf(z)`), which makes both identities hold exactly in
/// floating point. In the first quadrant a two-regime scheme is used:
///
/// * `|z| ≤ 3.5` — complex Maclaurin series (well-conditioned there);
/// * `|z| > 3.5` — strip decomposition along a vertical path,
///   `erf(u+iv) = erf(u) + (2/√π)·e^(-u²)·(I_s + i·I_c)` with
///   `I_s = ∫₀^v e^(t²) sin(2ut) dt` and `I_c = ∫₀^v e^(t²) cos(2ut) dt`
///   by Gauss–Legendre panels, and the real-axis value from the Maclaurin
///   series or a Lentz continued fraction for `erfc` at large `u`.
pub fn erf_complex(z: ComplexValue) -> Result<ComplexValue, SpecialError> {
    if z.im.abs() > IM_LIMIT {
        return Err(SpecialError::OutsideDomain { what: "Im z", value: z.im, limit: IM_LIMIT });
    }
    if !z.re.is_finite() {
        return Err(SpecialError::OutsideDomain {
            what: "Re z",
            value: z.re,
            limit: f64::MAX,
        });
    }
    let first_quadrant = ComplexValue::new(z.re.abs(), z.im.abs());
    let w = erf_first_quadrant(first_quadrant);
    // Undo the folding: x-sign flip negates the real part, y-sign flip
    // negates the imaginary part (combination of oddness and conjugation).
    let re = if z.re.is_sign_negative() { -w.re } else { w.re };
    let im = if z.im.is_sign_negative() { -w.im } else { w.im };
    Ok(ComplexValue::new(re, im))
}

fn erf_first_quadrant(z: ComplexValue) -> ComplexValue {
    if z.abs() <= MACLAURIN_RADIUS {
        erf_maclaurin(z)
    } else {
        let u = z.re;
        let v = z.im;
        let real_axis = if u < REAL_AXIS_CF_THRESHOLD {
            erf_maclaurin(ComplexValue::new(u, 0.0)).re
        } else {
            1.0 - erfc_continued_fraction(u)
        };
        if v == 0.0 {
            return ComplexValue::new(real_axis, 0.0);
        }
        let (int_cos, int_sin) = strip_integrals(u, v);
        let damp = (-u * u).exp();
        ComplexValue::new(
            real_axis + TWO_OVER_SQRT_PI * damp * int_sin,
            TWO_OVER_SQRT_PI * damp * int_cos,
        )
    }
}

/// Complex Maclaurin series `erf(z) = (2/√π)·Σ (-1)^n z^(2n+1)/(n!(2n+1))`.
/// Conditioning degrades like `e^(|z|²)·ε` from the alternating terms:
/// absolute error stays ≲ 1e-13 for |z| ≤ 3 and ≲ 2e-12 at the rim of the
/// |z| ≤ 3.5 disk.
fn erf_maclaurin(z: ComplexValue) -> ComplexValue {
    let z2 = z.mul(z);
    let mut power = z; // z^(2n+1)/n! with alternating sign folded in
    let mut sum = z;
    for n in 1..=200u32 {
        power = power.mul(z2).scale(-1.0 / n as f64);
        let element = power.scale(1.0 / (2.0 * n as f64 + 1.0));
        sum = sum.add(element);
        if element.abs() <= f64::EPSILON * sum.abs() {
            break;
        }
    }
    sum.scale(TWO_OVER_SQRT_PI)
}

/// `erfc(u)` for large positive `u` via the Laplace continued fraction,
/// evaluated with the modified Lentz algorithm:
/// `erfc(u) = e^(-u²)/(u√π) · 1/(1 + (1/2)/u²/(1 + (2/2)/u²/(1 + …)))`.
fn erfc_continued_fraction(u: f64) -> f64 {
    let u2 = u * u;
    let tiny = 1e-300;
    let mut f = 1.0f64;
    let mut c = f;
    let mut d = 0.0f64;
    for m in 1..200 {
        let a = 0.5 * m as f64 / u2;
        d = 1.0 + a * d;
        if d == 0.0 {
            d = tiny;
        }
        c = 1.0 + a / c;
        if c == 0.0 {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    // The Lentz loop above evaluates the ascending fraction
    // 1 + (1/2)/u²/(1 + (2/2)/u²/(1 + …)), whose reciprocal is the factor
    // multiplying the prefactor.
    (-u2).exp() / (u * SQRT_PI) / f
}

/// The pair `(∫₀^v e^(t²) cos(2ut) dt, ∫₀^v e^(t²) sin(2ut) dt)`.
///
/// Single Gauss–Legendre panel for small `v`; composite fixed-width panels
/// beyond, so the node density never dilutes as the strip grows.
fn strip_integrals(u: f64, v: f64) -> (f64, f64) {
    debug_assert!(v >= 0.0);
    if v <= SINGLE_PANEL_LIMIT {
        let (nodes, weights) = panel_rule();
        let half = 0.5 * v;
        let mut c = 0.0;
        let mut s = 0.0;
        for (&x, &w) in nodes.iter().zip(weights) {
            let t = half * (x + 1.0);
            let g = w * (t * t).exp();
            let (sin2ut, cos2ut) = (2.0 * u * t).sin_cos();
            c += g * cos2ut;
            s += g * sin2ut;
        }
        (half * c, half * s)
    } else {
        let (nodes, weights) = composite_rule();
        let n_panels = (v / COMPOSITE_WIDTH).ceil() as usize;
        let width = v / n_panels as f64;
        let mut c = 0.0;
        let mut s = 0.0;
        for p in 0..n_panels {
            let lo = p as f64 * width;
            let half = 0.5 * width;
            let mid = lo + half;
            for (&x, &w) in nodes.iter().zip(weights) {
                let t = mid + half * x;
                let g = w * (t * t).exp();
                let (sin2ut, cos2ut) = (2.0 * u * t).sin_cos();
                c += g * cos2ut;
                s += g * sin2ut;
            }
        }
        (0.5 * width * c, 0.5 * width * s)
    }
}

/// Scaled off-axis imaginary part of the error function:
/// `e^(u²) · Im erf(u + iv)` for `v ≥ 0`.
///
/// This is the combination the corrected velocity fields need, where the
/// `e^(u²)` factor is structural (it cancels a gaussian in the velocity
/// formula). Evaluating the product via the exact identity
/// `e^(u²)·Im erf(u+iv) = (2/√π)·∫₀^v e^(t²) cos(2ut) dt`
/// sidesteps the `e^(u²)` error amplification that computing `Im erf` and
/// multiplying afterwards would suffer (a ~1e-16 absolute error in
/// `Im erf` becomes ~1e-12·e^(u²) in the product — fatal at `u ≈ 3`).
/// The integral form keeps relative accuracy near machine precision for
/// all `u`; it is even in `u`, and `im_erf_scaled(0, v) = erfi(v)`.
pub fn im_erf_scaled(u: f64, v: f64) -> Result<f64, SpecialError> {
    if v < 0.0 || v > IM_LIMIT {
        return Err(SpecialError::OutsideDomain { what: "v", value: v, limit: IM_LIMIT });
    }
    if !u.is_finite() {
        return Err(SpecialError::OutsideDomain { what: "u", value: u, limit: f64::MAX });
    }
    let (int_cos, _) = strip_integrals(u, v);
    Ok(TWO_OVER_SQRT_PI * int_cos)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
        let scale = expected.abs().max(1.0);
        assert!(
            (actual - expected).abs() <= tol * scale,
            "{what}: got {actual:e}, want {expected:e} (tol {tol:e} rel-to-max-1)"
        );
    }

    #[test]
    fn gauss_legendre_integrates_monomials_exactly() {
        // An n-point rule is exact through degree 2n-1; check a spread of
        // even moments, which have simple closed forms on [-1, 1].
        for &n in &[PANEL_NODES, COMPOSITE_NODES] {
            let (nodes, weights) = gauss_legendre(n);
            assert_eq!(nodes.len(), n);
            for &p in &[0u32, 2, 8, 16, 40] {
                let exact = 2.0 / (p as f64 + 1.0);
                let q: f64 = nodes
                    .iter()
                    .zip(&weights)
                    .map(|(&x, &w)| w * x.powi(p as i32))
                    .sum();
                assert_close(q, exact, 1e-14, &format!("GL{n} moment {p}"));
            }
            // Odd moments vanish by symmetry.
            let q1: f64 = nodes.iter().zip(&weights).map(|(&x, &w)| w * x).sum();
            assert!(q1.abs() < 1e-15, "GL{n} first moment {q1:e}");
        }
    }

    #[test]
    fn hermite_low_orders() {
        assert_eq!(hermite(0, 0.7).unwrap(), 1.0);
        assert_eq!(hermite(1, 0.5).unwrap(), 1.0);
        assert_eq!(hermite(2, 1.0).unwrap(), 2.0); // 4u² − 2
        assert_close(hermite(3, 0.35).unwrap(), -3.857, 1e-15, "H3(0.35)");
    }

    #[test]
    fn hermite_matches_reference_values() {
        assert_close(hermite(10, 1.3).unwrap(), -66123.41303306240942109, 1e-14, "H10");
        assert_close(hermite(25, 0.4).unwrap(), 2775748264003756.202546, 1e-13, "H25");
        assert_close(hermite(50, 2.5).unwrap(), -4.371506248896345445362e40, 1e-12, "H50");
        assert_close(hermite(7, -0.9).unwrap(), -205.0434432000000566653, 1e-14, "H7");
    }

    #[test]
    fn hermite_order_guard() {
        assert!(hermite(201, 0.0).is_err());
        assert!(hermite(200, 0.3).is_ok());
    }

    #[test]
    fn hermite_derivative_identity() {
        // H_n'(u) = 2n·H_{n-1}(u), checked by central differences.
        let h = 1e-6;
        let mut rng = StdRng::seed_from_u64(0x48_65_72_6d);
        for n in 1..=10u32 {
            for _ in 0..20 {
                let u: f64 = rng.gen_range(-3.0..3.0);
                let fd = (hermite(n, u + h).unwrap() - hermite(n, u - h).unwrap()) / (2.0 * h);
                let exact = 2.0 * n as f64 * hermite(n - 1, u).unwrap();
                let scale = exact.abs().max(1.0);
                assert!(
                    (fd - exact).abs() <= 1e-6 * scale,
                    "H{n}'({u}): fd {fd:e} vs {exact:e}"
                );
            }
        }
    }

    #[test]
    fn erfi_reference_values() {
        assert_eq!(erfi(0.0).unwrap(), 0.0);
        assert_close(erfi(0.125).unwrap(), 0.1417854741302653892696, 1e-15, "erfi(1/8)");
        assert_close(erfi(0.25).unwrap(), 0.2880836197949719840347, 1e-15, "erfi(1/4)");
        assert_close(erfi(0.75).unwrap(), 1.035757284411962967860, 1e-15, "erfi(3/4)");
        assert_close(erfi(2.0).unwrap(), 18.56480241457555259870, 1e-15, "erfi(2)");
        assert_close(erfi(5.0).unwrap(), 8298273880.676803516146, 1e-14, "erfi(5)");
        assert_close(erfi(10.0).unwrap(), 1.524307422708669699361e42, 1e-14, "erfi(10)");
    }

    #[test]
    fn erfi_is_odd_and_guarded() {
        for &u in &[0.5, 1.25, 7.5] {
            assert_eq!(erfi(-u).unwrap(), -erfi(u).unwrap(), "oddness at {u}");
        }
        assert!(erfi(10.5).is_err());
    }

    #[test]
    fn erf_complex_trivials() {
        let w = erf_complex(ComplexValue::ZERO).unwrap();
        assert_eq!(w, ComplexValue::ZERO);

        let w = erf_complex(ComplexValue::new(1.0, 0.0)).unwrap();
        assert_close(w.re, 0.8427007929497148693412, 1e-15, "erf(1) re");
        assert_eq!(w.im, 0.0, "erf(1) im");

        // Purely imaginary argument gives a purely imaginary result equal
        // to i·erfi(y).
        let w = erf_complex(ComplexValue::new(0.0, 2.0)).unwrap();
        assert_eq!(w.re, 0.0, "erf(2i) re");
        assert_close(w.im, 18.56480241457555259870, 1e-14, "erf(2i) im");
    }

    #[test]
    fn erf_complex_reference_values() {
        // Spot values across both regimes (frozen from an independent
        // arbitrary-precision evaluation).
        let cases: [(f64, f64, f64, f64); 10] = [
            (1.0, 0.5, 0.9507097283189571738046, 0.1879734672233833136283),
            (3.0, 2.0, 0.9989632788568172688804, -0.00001154672437929060340631),
            (4.0, 1.0, 1.000000015096295250027, 3.794032969089071050123e-8),
            (0.5, 4.0, -663331.8972404588232779, -748715.4769997102859035),
            (5.0, 0.125, 0.9999999999995435288731, 1.493012132820743744128e-12),
            (2.5, 0.6, 1.000570481374675020225, -0.00003868232370670850057204),
            (3.4, 0.9, 0.9999966821841975771458, 2.608237991719235747045e-7),
            (3.6, 0.2, 0.9999999708384236062306, 3.687654771414345376024e-7),
            (0.3, 3.0, 1467.690283218231277739, -166.5609245255572038045),
            (2.0, 2.9, -12.30716628095910023065, -0.5205031403987480954976),
        ];
        for &(re, im, wre, wim) in &cases {
            let w = erf_complex(ComplexValue::new(re, im)).unwrap();
            let scale = wre.abs().max(wim.abs()).max(1.0);
            assert!(
                (w.re - wre).abs() <= 2e-13 * scale,
                "erf({re}+{im}i) re: {:e} vs {wre:e}",
                w.re
            );
            assert!(
                (w.im - wim).abs() <= 2e-13 * scale,
                "erf({re}+{im}i) im: {:e} vs {wim:e}",
                w.im
            );
        }
    }

    #[test]
    fn erf_complex_matches_maclaurin_oracle_on_disk() {
        // Independent 200-term Maclaurin summation (plain accumulation, no
        // early exit) as an in-test oracle over |z| <= 3.
        fn oracle(z: ComplexValue) -> ComplexValue {
            let z2 = z.mul(z);
            let mut power = z;
            let mut sum = z;
            for n in 1..=200u32 {
                power = power.mul(z2).scale(-1.0 / n as f64);
                sum = sum.add(power.scale(1.0 / (2.0 * n as f64 + 1.0)));
            }
            sum.scale(TWO_OVER_SQRT_PI)
        }
        let mut rng = StdRng::seed_from_u64(0xe4f);
        for _ in 0..300 {
            let r = rng.gen_range(0.0..3.0f64);
            let th = rng.gen_range(0.0..std::f64::consts::TAU);
            let z = ComplexValue::new(r * th.cos(), r * th.sin());
            let got = erf_complex(z).unwrap();
            let want = oracle(z);
            let scale = want.abs().max(1.0);
            assert!(
                (got.re - want.re).abs() <= 1e-13 * scale
                    && (got.im - want.im).abs() <= 1e-13 * scale,
                "oracle mismatch at ({}, {}): got ({:e},{:e}) want ({:e},{:e})",
                z.re,
                z.im,
                got.re,
                got.im,
                want.re,
                want.im
            );
        }
    }

    #[test]
    fn erf_complex_symmetries_exact() {
        // The first-quadrant folding makes oddness and conjugate symmetry
        // hold exactly, not merely to tolerance.
        let mut rng = StdRng::seed_from_u64(0x0dd);
        for _ in 0..200 {
            let z = ComplexValue::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let w = erf_complex(z).unwrap();
            let w_neg = erf_complex(z.neg()).unwrap();
            let w_conj = erf_complex(z.conj()).unwrap();
            assert_eq!(w_neg, w.neg(), "oddness at ({}, {})", z.re, z.im);
            assert_eq!(w_conj, w.conj(), "conjugation at ({}, {})", z.re, z.im);
        }
    }

    #[test]
    fn erf_complex_regime_seam_is_continuous() {
        // Walk a ring just outside the Maclaurin/strip switchover and make
        // sure both branches agree where they overlap. The tolerance is set
        // by the series' own rounding at this radius (measured ~1.2e-12
        // worst-case near the real axis), not by the strip scheme.
        for i in 0..40 {
            let th = i as f64 * std::f64::consts::PI / 2.0 / 39.0;
            let (u, v) = (3.5001 * th.cos(), 3.5001 * th.sin());
            let just_outside = erf_first_quadrant(ComplexValue::new(u, v));
            let series = erf_maclaurin(ComplexValue::new(u, v));
            let scale = series.abs().max(1.0);
            assert!(
                (just_outside.re - series.re).abs() <= 5e-12 * scale
                    && (just_outside.im - series.im).abs() <= 5e-12 * scale,
                "seam mismatch at angle {th}: ({:e},{:e}) vs ({:e},{:e})",
                just_outside.re,
                just_outside.im,
                series.re,
                series.im
            );
        }
    }

    #[test]
    fn erf_complex_domain_guard() {
        assert!(erf_complex(ComplexValue::new(0.0, 10.5)).is_err());
        assert!(erf_complex(ComplexValue::new(f64::NAN, 0.0)).is_err());
        assert!(erf_complex(ComplexValue::new(0.0, -10.5)).is_err());
    }

    #[test]
    fn im_erf_scaled_reference_values() {
        let cases: [(f64, f64, f64); 9] = [
            (0.0, 0.125, 0.1417854741302653892696),
            (0.75, 0.125, 0.1409527009937202389868),
            (3.0, 0.5, -0.002129887282223255486695),
            (-2.0, 0.25, 0.2416651067610018511691),
            (4.5, 0.75, 0.1242601040376603693393),
            (1.5, 0.05, 0.05625435901745158720770),
            (2.0, 1.0, -0.6147209003853182489760),
            (0.3, 2.0, 10.01732554001124117643),
            (5.0, 2.0, 5.642174639300540167658),
        ];
        for &(u, v, want) in &cases {
            let got = im_erf_scaled(u, v).unwrap();
            let scale = want.abs().max(1e-3);
            assert!(
                (got - want).abs() <= 1e-12 * scale,
                "im_erf_scaled({u},{v}): {got:e} vs {want:e}"
            );
        }
    }

    #[test]
    fn im_erf_scaled_reduces_to_erfi_at_zero() {
        for &v in &[0.05, 0.125, 0.5, 0.75, 2.0] {
            let a = im_erf_scaled(0.0, v).unwrap();
            let b = erfi(v).unwrap();
            assert_close(a, b, 1e-14, &format!("erfi reduction v={v}"));
        }
    }

    #[test]
    fn im_erf_scaled_is_even_in_u() {
        let mut rng = StdRng::seed_from_u64(0xeeee);
        for _ in 0..100 {
            let u = rng.gen_range(-6.0..6.0f64);
            let v = rng.gen_range(0.0..2.0f64);
            let a = im_erf_scaled(u, v).unwrap();
            let b = im_erf_scaled(-u, v).unwrap();
            assert_eq!(a, b, "evenness at ({u}, {v})");
        }
    }

    #[test]
    fn im_erf_scaled_consistent_with_erf_complex() {
        // Where the naive product e^(u²)·Im erf is still well-conditioned
        // (small u), the two paths must agree tightly.
        for &(u, v) in &[(0.2, 0.125), (0.8, 0.25), (1.2, 0.5), (0.0, 0.75)] {
            let direct = im_erf_scaled(u, v).unwrap();
            let via_erf = (u * u).exp() * erf_complex(ComplexValue::new(u, v)).unwrap().im;
            assert_close(direct, via_erf, 1e-12, &format!("path consistency ({u},{v})"));
        }
    }

    #[test]
    fn im_erf_scaled_domain_guard() {
        assert!(im_erf_scaled(0.0, -0.1).is_err());
        assert!(im_erf_scaled(0.0, 10.5).is_err());
        assert!(im_erf_scaled(f64::INFINITY, 0.5).is_err());
    }
}
