//! Gaussian analysis window, its Fourier transform, and the chirp-modulated
//! kernel G(ξ) with both a closed form and an independent quadrature oracle.
//!
//! The window is g(τ) = (1/√(2π))·exp(−τ²/2) with ĝ(ξ) = exp(−2π²ξ²).
//! Modulating g by a linear-chirp phase exp(iπσ²φ″τ²) turns ĝ into the
//! complex kernel G(ξ) whose magnitude peaks below 1; everything downstream
//! (zones, ridges, recovery correction, error bounds) is phrased in terms of
//! ĝ, G, their inverses on ξ ≥ 0, and the absolute moments of g.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Supported window shapes. Only the Gaussian ships; the closed forms below
/// are its specialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    Gaussian,
}

/// Window configuration: zero threshold τ₀ for essential supports and the
/// truncation half-width (the window is treated as zero beyond `truncation`
/// standard deviations).
#[derive(Debug, Clone, Copy)]
pub struct WindowSpec {
    pub kind: WindowKind,
    pub tau0: f64,
    pub truncation: f64,
}

impl WindowSpec {
    pub fn new(tau0: f64, truncation: f64) -> Result<Self> {
        if !(tau0 > 0.0 && tau0 < 1.0) {
            return Err(Error::invalid(format!("tau0 must lie in (0,1), got {tau0}")));
        }
        if !(truncation >= 3.0) {
            return Err(Error::invalid(format!(
                "truncation must be at least 3 window widths, got {truncation}"
            )));
        }
        Ok(WindowSpec { kind: WindowKind::Gaussian, tau0, truncation })
    }
}

impl Default for WindowSpec {
    fn default() -> Self {
        // tau0 = 0.2 keeps the two-LFM benchmark separable at sigma = 1/16;
        // L = 5 leaves tail mass below 1e-6.
        WindowSpec { kind: WindowKind::Gaussian, tau0: 0.2, truncation: 5.0 }
    }
}

/// Window parameter and local chirp rate entering the kernel G.
#[derive(Debug, Clone, Copy)]
pub struct KernelParams {
    /// Window width σ(t) in seconds.
    pub sigma: f64,
    /// Local chirp rate φ″(t) in Hz/s.
    pub chirp_rate: f64,
}

impl KernelParams {
    pub fn new(sigma: f64, chirp_rate: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
        }
        Ok(KernelParams { sigma, chirp_rate })
    }

    /// The dimensionless product φ″σ² that G depends on.
    pub fn lambda(&self) -> f64 {
        self.chirp_rate * self.sigma * self.sigma
    }
}

/// g(τ) = (1/√(2π))·exp(−τ²/2); integrates to 1.
pub fn g_value(tau: f64) -> f64 {
    (-0.5 * tau * tau).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// ĝ(ξ) = exp(−2π²ξ²).
pub fn g_hat(xi: f64) -> f64 {
    let p = std::f64::consts::PI * xi;
    (-2.0 * p * p).exp()
}

/// Essential-support radius: the ξ ≥ 0 with ĝ(ξ) = τ₀, i.e.
/// α = (1/2π)·√(2·ln(1/τ₀)).
pub fn alpha_from_tau0(tau0: f64) -> Result<f64> {
    if !(tau0 > 0.0 && tau0 < 1.0) {
        return Err(Error::invalid(format!("tau0 must lie in (0,1), got {tau0}")));
    }
    Ok((2.0 * (1.0 / tau0).ln()).sqrt() / (2.0 * std::f64::consts::PI))
}

/// Inverse of ĝ on ξ ≥ 0: |ĝ|⁻¹(y) = (1/π√2)·√(−ln y), for y ∈ (0, 1).
pub fn g_hat_inverse(y: f64) -> Result<f64> {
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::invalid(format!("g_hat inverse needs y in (0,1), got {y}")));
    }
    Ok((-y.ln()).sqrt() / (std::f64::consts::PI * std::f64::consts::SQRT_2))
}

/// Quadrature step for the oracle integrals; doubling the resolution moves
/// results by well under 1e-9 (the integrand decays like a Gaussian at the
/// interval ends, where the trapezoid rule converges spectrally).
const QUAD_STEP: f64 = 1e-3;
/// Half-width of the quadrature interval in window widths.
const QUAD_HALF_WIDTH: f64 = 8.0;

/// Chirp-modulated transform of g by direct quadrature:
/// ğ(ξ, λ) = ∫ g(τ)·exp(−i2πξτ − iπλτ²) dτ over [−L, L].
///
/// ğ(ξ, 0) = ĝ(ξ). Used for admissibility spot checks; the kernel oracle
/// below is the λ = −σ²φ″ special case.
pub fn breve_g(xi: f64, lambda: f64) -> Complex64 {
    trapezoid(QUAD_HALF_WIDTH, QUAD_STEP, |tau| {
        let phase = -2.0 * std::f64::consts::PI * xi * tau - std::f64::consts::PI * lambda * tau * tau;
        Complex64::from_polar(g_value(tau), phase)
    })
}

/// Closed form of the chirp-modulated kernel:
/// G(ξ) = (1 − i2πλ)^(−1/2) · exp(−2π²ξ²(1 + i2πλ)/(1 + (2πλ)²)), λ = φ″σ².
///
/// The square root of 1 − i2πλ is the complex root in the same quadrant as
/// 1 − i2πλ itself; since Re(1 − i2πλ) = 1 > 0 that is the principal root.
pub fn g_kernel_closed(xi: f64, params: &KernelParams) -> Complex64 {
    let b = 2.0 * std::f64::consts::PI * params.lambda();
    let denom = 1.0 + b * b;
    let p = std::f64::consts::PI * xi;
    let e = Complex64::new(-2.0 * p * p / denom, -2.0 * p * p * b / denom).exp();
    e / Complex64::new(1.0, -b).sqrt()
}

/// Kernel by direct quadrature of ∫ exp(iπσ²φ″τ²)·g(τ)·exp(−i2πξτ) dτ;
/// the independent oracle for `g_kernel_closed`.
pub fn g_kernel_numeric(xi: f64, params: &KernelParams) -> Complex64 {
    breve_g(xi, -params.lambda())
}

/// |G(ξ)| in closed form: the kernel magnitude is a Gaussian in ξ with peak
/// |G(0)| = (1 + (2πλ)²)^(−1/4).
pub fn g_kernel_abs(xi: f64, params: &KernelParams) -> f64 {
    let b = 2.0 * std::f64::consts::PI * params.lambda();
    let denom = 1.0 + b * b;
    let p = std::f64::consts::PI * xi;
    denom.powf(-0.25) * (-2.0 * p * p / denom).exp()
}

/// Peak kernel magnitude |G(0)|.
pub fn g_kernel_peak(params: &KernelParams) -> f64 {
    let b = 2.0 * std::f64::consts::PI * params.lambda();
    (1.0 + b * b).powf(-0.25)
}

/// Inverse of |G| on ξ ≥ 0:
/// |G|⁻¹(y) = (1/(π√2·|G(0)|²))·√(−ln(y/|G(0)|)), for y ∈ (0, |G(0)|).
pub fn g_kernel_abs_inverse(y: f64, params: &KernelParams) -> Result<f64> {
    let peak = g_kernel_peak(params);
    if !(y > 0.0 && y <= peak) {
        return Err(Error::invalid(format!(
            "kernel inverse needs y in (0, |G(0)|={peak}), got {y}"
        )));
    }
    let r = -(y / peak).ln();
    Ok(r.max(0.0).sqrt() / (std::f64::consts::PI * std::f64::consts::SQRT_2 * peak * peak))
}

/// Padded zone radius α_k = α·(1 + 2π|φ″|σ²). Always at least ξ_k, the exact
/// radius solving |G(ξ_k)| = τ₀.
pub fn alpha_k(params: &KernelParams, alpha: f64) -> f64 {
    alpha * (1.0 + 2.0 * std::f64::consts::PI * params.lambda().abs())
}

/// Exact zone radius ξ_k with |G(ξ_k)| = τ₀:
/// ξ_k = √(1+(2πλ)²)·(1/2π)·√(2·ln(1/τ₀) − ½·ln(1+(2πλ)²)).
///
/// Defined only while τ₀ ≤ |G(0)|, i.e. while the component still rises above
/// the threshold at all.
pub fn xi_k(params: &KernelParams, tau0: f64) -> Result<f64> {
    if !(tau0 > 0.0 && tau0 < 1.0) {
        return Err(Error::invalid(format!("tau0 must lie in (0,1), got {tau0}")));
    }
    let b = 2.0 * std::f64::consts::PI * params.lambda();
    let d = 1.0 + b * b;
    let r = 2.0 * (1.0 / tau0).ln() - 0.5 * d.ln();
    if r < 0.0 {
        return Err(Error::invalid(format!(
            "threshold {tau0} exceeds the kernel peak {}; zone radius undefined",
            d.powf(-0.25)
        )));
    }
    Ok(d.sqrt() * r.sqrt() / (2.0 * std::f64::consts::PI))
}

/// Absolute moments I_n = ∫ |τⁿ g(τ)| dτ of the standard Gaussian density,
/// for n ∈ {1, 2, 3}: I₁ = √(2/π), I₂ = 1, I₃ = 2√(2/π).
pub fn abs_moment(n: u32) -> Result<f64> {
    let two_over_pi = (2.0 / std::f64::consts::PI).sqrt();
    match n {
        1 => Ok(two_over_pi),
        2 => Ok(1.0),
        3 => Ok(2.0 * two_over_pi),
        _ => Err(Error::invalid(format!("absolute moment only defined for n in 1..=3, got {n}"))),
    }
}

/// Composite trapezoid over [−half, half] with the given step.
fn trapezoid(half: f64, step: f64, f: impl Fn(f64) -> Complex64) -> Complex64 {
    let n = (2.0 * half / step).round() as usize;
    let h = 2.0 * half / n as f64;
    let mut acc = 0.5 * (f(-half) + f(half));
    for i in 1..n {
        acc += f(-half + i as f64 * h);
    }
    acc * h
}
