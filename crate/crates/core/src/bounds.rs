//! Quantitative error bounds for IF estimation and component recovery, plus
//! the admissibility and separation conditions they require.
//!
//! This module is a certification harness, not an estimator: everything is
//! computed from ground truth (amplitudes, IFs and chirp rates known
//! analytically), so measured pipeline errors can be checked against the
//! theory frame by frame. Bounds whose preconditions fail are reported as
//! undefined rather than clamped.
//!
//! For real records the complex-model amplitudes are the real amplitudes
//! halved (the conjugate mirror carries the other half); the trend keeps its
//! full amplitude. All ratios entering the conditions are scale-invariant,
//! so this convention only matters for the absolute bound values.

use crate::error::{Error, Result};
use crate::signal::{GroundTruth, ModelAssumptions, SampledSignal};
use crate::stft::SigmaSeries;
use crate::window::{
    abs_moment, alpha_from_tau0, g_hat, g_hat_inverse, g_kernel_abs, g_kernel_abs_inverse,
    g_kernel_peak, xi_k, KernelParams,
};

/// Sinusoidal-model remainder scale: λ₀ = ε₁I₁σ + πε₂I₂σ².
pub fn lambda0(eps1: f64, eps2: f64, sigma: f64) -> f64 {
    let i1 = abs_moment(1).expect("moment 1");
    let i2 = abs_moment(2).expect("moment 2");
    eps1 * i1 * sigma + std::f64::consts::PI * eps2 * i2 * sigma * sigma
}

/// Chirp-model remainder scale: Π₀ = ε₁I₁σ + (π/3)ε₃I₃σ³.
pub fn pi0(eps1: f64, eps3: f64, sigma: f64) -> f64 {
    let i1 = abs_moment(1).expect("moment 1");
    let i3 = abs_moment(3).expect("moment 3");
    eps1 * i1 * sigma + std::f64::consts::PI / 3.0 * eps3 * i3 * sigma.powi(3)
}

/// Zone-separation distance Υ_{k,ℓ} = ρ_k + ρ_ℓ + 2·Σ(radii strictly
/// between k and ℓ), for k ≠ ℓ.
pub fn upsilon(radii: &[f64], k: usize, l: usize) -> f64 {
    assert_ne!(k, l, "upsilon is defined for distinct components");
    let (lo, hi) = (k.min(l), k.max(l));
    let between: f64 = radii[lo + 1..hi].iter().sum();
    radii[k] + radii[l] + 2.0 * between
}

/// Sinusoidal-model error level
/// err_ℓ = M·λ₀ + Σ_{k≠ℓ} A_k·ĝ(α·(2|ℓ−k|−1)).
pub fn err_sinusoidal(amps: &[f64], l: usize, alpha: f64, lam0: f64) -> f64 {
    let m_total: f64 = amps.iter().sum();
    let leak: f64 = amps
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != l)
        .map(|(k, &a)| a * g_hat(alpha * (2.0 * k.abs_diff(l) as f64 - 1.0)))
        .sum();
    m_total * lam0 + leak
}

/// Chirp-model error level
/// Err_ℓ = M·Π₀ + Σ_{k≠ℓ} A_k·|G_k(Υ_{k,ℓ} − ρ_ℓ)|.
pub fn err_linear_chirp(
    amps: &[f64],
    params: &[KernelParams],
    radii: &[f64],
    l: usize,
    pi0_val: f64,
) -> f64 {
    let m_total: f64 = amps.iter().sum();
    let leak: f64 = amps
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != l)
        .map(|(k, &a)| a * g_kernel_abs(upsilon(radii, k, l) - radii[l], &params[k]))
        .sum();
    m_total * pi0_val + leak
}

/// Theorem-1 bounds (bd1 for IF, bd2 for recovery); defined while
/// err_ℓ < A_ℓ/2:
///   bd1 = (1/σ)·|ĝ|⁻¹(1 − 2·err/A),  bd2 = err + 2πI₁A·σ·bd1.
pub fn theorem1_bounds(a_l: f64, err: f64, sigma: f64) -> Option<(f64, f64)> {
    if !(err < 0.5 * a_l) {
        return None;
    }
    let arg = 1.0 - 2.0 * err / a_l;
    let inv = if arg >= 1.0 { 0.0 } else { g_hat_inverse(arg).expect("arg in (0,1)") };
    let bd1 = inv / sigma;
    let bd2 = err + 2.0 * std::f64::consts::PI * abs_moment(1).expect("moment 1") * a_l * inv;
    Some((bd1, bd2))
}

/// Gaussian-simplified IF bound (√2/(σπ))·√(err/A); the corollary needs the
/// stronger err < A/4 and always dominates the exact bd1 there.
pub fn theorem1_bound_gaussian(a_l: f64, err: f64, sigma: f64) -> Option<f64> {
    if !(err < 0.25 * a_l) {
        return None;
    }
    Some(std::f64::consts::SQRT_2 / (sigma * std::f64::consts::PI) * (err / a_l).sqrt())
}

/// Theorem-2 bounds (Bd1 for IF, Bd2 for recovery against G(0)·x_ℓ);
/// defined while Err_ℓ < |G_ℓ(0)|·A_ℓ/2:
///   Bd1 = (1/σ)·|G_ℓ|⁻¹(|G_ℓ(0)| − 2·Err/A),  Bd2 = Err + 2πI₁A·σ·Bd1.
pub fn theorem2_bounds(a_l: f64, err: f64, params: &KernelParams) -> Option<(f64, f64)> {
    let peak = g_kernel_peak(params);
    if !(err < 0.5 * peak * a_l) {
        return None;
    }
    let arg = peak - 2.0 * err / a_l;
    let inv = g_kernel_abs_inverse(arg, params).expect("arg in (0, peak]");
    let bd1 = inv / params.sigma;
    let bd2 = err + 2.0 * std::f64::consts::PI * abs_moment(1).expect("moment 1") * a_l * inv;
    Some((bd1, bd2))
}

/// Gaussian-simplified Theorem-2 IF bound
/// (√2/(σπ))·(1+(2πφ″σ²)²)^(5/8)·√(Err/A); needs Err < |G(0)|A/4.
pub fn theorem2_bound_gaussian(a_l: f64, err: f64, params: &KernelParams) -> Option<f64> {
    let peak = g_kernel_peak(params);
    if !(err < 0.25 * peak * a_l) {
        return None;
    }
    let b = 2.0 * std::f64::consts::PI * params.lambda();
    Some(
        std::f64::consts::SQRT_2 / (params.sigma * std::f64::consts::PI)
            * (1.0 + b * b).powf(5.0 / 8.0)
            * (err / a_l).sqrt(),
    )
}

/// Which model's separation condition to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparationModel {
    /// σ(t)·(φ′_k − φ′_{k−1}) ≥ 2α for every adjacent pair.
    Sinusoidal,
    /// Zone disjointness σ(t)·(φ′_k − φ′_{k−1}) ≥ ξ_k + ξ_{k−1} with the
    /// exact threshold radii ξ solving |G(ξ)| = τ₀.
    LinearChirp,
}

/// Pass/fail conditions attached to each report row. The window flags for
/// the admissible-threshold interval coincide with the theorem conditions;
/// `epX_contains` additionally checks a realized ε̃₁ against the interval.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ConditionFlags {
    pub sep_sinusoidal: bool,
    pub sep_chirp: bool,
    /// 2M(τ₀ + λ₀) ≤ μ; equivalently the sinusoidal ε̃₁ window is non-empty.
    pub theorem1_cond: bool,
    /// 2M(τ₀ + Π₀) ≤ g₀μ; equivalently the chirp ε̃₁ window is non-empty.
    pub theorem2_cond: bool,
    /// err_ℓ < A_ℓ/2 (bd1/bd2 defined).
    pub err_within_half: bool,
    /// Err_ℓ < |G_ℓ(0)|A_ℓ/2 (Bd1/Bd2 defined).
    pub err_lc_within_half: bool,
    pub ep1_contains: Option<bool>,
    pub ep2_contains: Option<bool>,
}

/// Bounds and conditions for one (frame, component) pair. `component` is the
/// 1-based model index; 0 denotes the trend.
#[derive(Debug, Clone)]
pub struct BoundRow {
    pub frame: usize,
    pub t: f64,
    pub component: usize,
    pub lambda0: f64,
    pub pi0: f64,
    /// err_ℓ (sinusoidal model).
    pub err_sin: f64,
    /// Err_ℓ (chirp model).
    pub err_lc: f64,
    /// bd1, bd2 of Theorem 1.
    pub if_bound_sin: Option<f64>,
    pub rec_bound_sin: Option<f64>,
    /// Gaussian-simplified bd1.
    pub if_bound_sin_gauss: Option<f64>,
    /// Bd1, Bd2 of Theorem 2.
    pub if_bound_lc: Option<f64>,
    pub rec_bound_lc: Option<f64>,
    /// Gaussian-simplified Bd1.
    pub if_bound_lc_gauss: Option<f64>,
    pub mu: f64,
    pub m_total: f64,
    /// M_ℓ = Σ_{k≠ℓ} A_k; reported for completeness, no theorem consumes it.
    pub m_ell: f64,
    pub g0: f64,
    /// |G_ℓ(0)| for this component.
    pub g_peak: f64,
    pub flags: ConditionFlags,
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
    pub tau0: f64,
    pub assumptions: ModelAssumptions,
}

impl BoundReport {
    /// Rows of one component, in frame order.
    pub fn component(&self, l: usize) -> impl Iterator<Item = &BoundRow> {
        self.rows.iter().filter(move |r| r.component == l)
    }
}

/// Complex-model amplitudes at frame m: trend first when present, then the
/// oscillatory components; oscillatory amplitudes halve for real records.
fn model_amplitudes(truth: &GroundTruth, real: bool, m: usize) -> Vec<f64> {
    let half = if real { 0.5 } else { 1.0 };
    let mut amps = Vec::with_capacity(truth.components.len() + 1);
    if let Some(trend) = &truth.trend {
        amps.push(trend[m].abs());
    }
    amps.extend(truth.components.iter().map(|c| half * c.amplitude[m]));
    amps
}

/// Per-frame separation flags for the chosen model. Vacuously true with a
/// single component and no trend.
pub fn check_separation(
    truth: &GroundTruth,
    sigma: &SigmaSeries,
    tau0: f64,
    model: SeparationModel,
) -> Result<Vec<bool>> {
    let n = sigma.len();
    let alpha = alpha_from_tau0(tau0)?;
    let has_trend = truth.trend.is_some();
    let mut flags = vec![true; n];
    for m in 0..n {
        let s = sigma.values[m];
        // adjacent IFs, with the trend at 0 Hz when present
        let mut ifs: Vec<f64> = Vec::new();
        let mut crs: Vec<f64> = Vec::new();
        if has_trend {
            ifs.push(0.0);
            crs.push(0.0);
        }
        for c in &truth.components {
            ifs.push(c.if_hz[m]);
            crs.push(c.chirp_rate[m]);
        }
        for k in 1..ifs.len() {
            let gap = ifs[k] - ifs[k - 1];
            let ok = match model {
                SeparationModel::Sinusoidal => s * gap >= 2.0 * alpha,
                SeparationModel::LinearChirp => {
                    let rk = xi_k(&KernelParams::new(s, crs[k])?, tau0)?;
                    let rk1 = xi_k(&KernelParams::new(s, crs[k - 1])?, tau0)?;
                    s * gap >= rk + rk1
                }
            };
            if !ok {
                flags[m] = false;
            }
        }
    }
    Ok(flags)
}

/// Compute the full bound report for a ground-truth-equipped record.
/// `epsilon_tilde`, when given, is the realized threshold per frame and
/// feeds the ε̃₁-containment flags.
pub fn bound_report(
    signal: &SampledSignal,
    truth: &GroundTruth,
    sigma: &SigmaSeries,
    tau0: f64,
    assumptions: &ModelAssumptions,
    epsilon_tilde: Option<&[f64]>,
) -> Result<BoundReport> {
    let n = signal.len();
    if sigma.len() != n {
        return Err(Error::invalid("sigma series length does not match the record"));
    }
    if truth.components.is_empty() && truth.trend.is_none() {
        return Err(Error::invalid("bound report needs at least one component or a trend"));
    }
    let alpha = alpha_from_tau0(tau0)?;
    let real = signal.is_real();
    let has_trend = truth.trend.is_some();
    let k_osc = truth.components.len();

    let sep_sin = check_separation(truth, sigma, tau0, SeparationModel::Sinusoidal)?;
    let sep_lc = check_separation(truth, sigma, tau0, SeparationModel::LinearChirp)?;

    let mut rows = Vec::with_capacity(n * (k_osc + has_trend as usize));
    for m in 0..n {
        let s = sigma.values[m];
        let lam0 = lambda0(assumptions.eps1, assumptions.eps2, s);
        let p0 = pi0(assumptions.eps1, assumptions.eps3, s);
        let amps = model_amplitudes(truth, real, m);
        let m_total: f64 = amps.iter().sum();
        let mu = amps.iter().cloned().fold(f64::INFINITY, f64::min);

        // kernel params per model index (trend first when present)
        let mut params: Vec<KernelParams> = Vec::with_capacity(amps.len());
        if has_trend {
            params.push(KernelParams::new(s, 0.0)?);
        }
        for c in &truth.components {
            params.push(KernelParams::new(s, c.chirp_rate[m])?);
        }
        let radii: Vec<f64> =
            params.iter().map(|p| xi_k(p, tau0)).collect::<Result<_>>()?;
        let g0 = params.iter().map(g_kernel_peak).fold(f64::INFINITY, f64::min).min(1.0);

        let theorem1_cond = 2.0 * m_total * (tau0 + lam0) <= mu;
        let theorem2_cond = 2.0 * m_total * (tau0 + p0) <= g0 * mu;
        let ep1_contains = epsilon_tilde.map(|e| {
            let lo = m_total * (tau0 + lam0);
            lo <= e[m] && e[m] <= mu - lo
        });
        let ep2_contains = epsilon_tilde.map(|e| {
            let lo = m_total * (tau0 + p0);
            lo <= e[m] && e[m] <= g0 * mu - lo
        });

        for idx in 0..amps.len() {
            let a_l = amps[idx];
            let err = err_sinusoidal(&amps, idx, alpha, lam0);
            let err_lc = err_linear_chirp(&amps, &params, &radii, idx, p0);
            let t1 = theorem1_bounds(a_l, err, s);
            let t2 = theorem2_bounds(a_l, err_lc, &params[idx]);
            let component = if has_trend { idx } else { idx + 1 };
            rows.push(BoundRow {
                frame: m,
                t: signal.time(m),
                component,
                lambda0: lam0,
                pi0: p0,
                err_sin: err,
                err_lc,
                if_bound_sin: t1.map(|b| b.0),
                rec_bound_sin: t1.map(|b| b.1),
                if_bound_sin_gauss: theorem1_bound_gaussian(a_l, err, s),
                if_bound_lc: t2.map(|b| b.0),
                rec_bound_lc: t2.map(|b| b.1),
                if_bound_lc_gauss: theorem2_bound_gaussian(a_l, err_lc, &params[idx]),
                mu,
                m_total,
                m_ell: m_total - a_l,
                g0,
                g_peak: g_kernel_peak(&params[idx]),
                flags: ConditionFlags {
                    sep_sinusoidal: sep_sin[m],
                    sep_chirp: sep_lc[m],
                    theorem1_cond,
                    theorem2_cond,
                    err_within_half: t1.is_some(),
                    err_lc_within_half: t2.is_some(),
                    ep1_contains,
                    ep2_contains,
                },
            });
        }
    }
    Ok(BoundReport { rows, tau0, assumptions: *assumptions })
}
