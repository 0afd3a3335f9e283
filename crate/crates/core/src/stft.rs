//! Adaptive short-time Fourier transform on a time × frequency grid with a
//! per-frame window width σ(t_m).
//!
//! Each frame is a direct windowed quadrature
//!   V(t_m, η_n) = Δt·Σ_j x(t_j)·(1/σ_m)·g((t_j−t_m)/σ_m)·e^{−i2πη_n(t_j−t_m)}
//! over |t_j − t_m| ≤ L·σ_m with zero extension beyond the record. σ varies
//! per frame and the η grid is arbitrary, so there is no global fast
//! transform here; at desk scale the O(N·n_bins·window) cost is trivial and
//! frames parallelize with bit-identical results.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::signal::SampledSignal;
use crate::window::g_value;

/// Where a σ(t) series came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SigmaSource {
    Constant,
    UserFile,
    Sigma1Rule,
}

/// Window width per frame, in seconds.
#[derive(Debug, Clone)]
pub struct SigmaSeries {
    pub values: Vec<f64>,
    pub source: SigmaSource,
}

impl SigmaSeries {
    pub fn constant(sigma: f64, n: usize) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
        }
        Ok(SigmaSeries { values: vec![sigma; n], source: SigmaSource::Constant })
    }

    pub fn from_values(values: Vec<f64>, source: SigmaSource) -> Result<Self> {
        if values.is_empty() || values.iter().any(|&s| !(s > 0.0)) {
            return Err(Error::invalid("sigma series must be non-empty and strictly positive"));
        }
        Ok(SigmaSeries { values, source })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Uniform frequency grid η_n = eta_min + n·delta_eta, n = 0..n_bins.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct FreqGrid {
    pub eta_min: f64,
    pub delta_eta: f64,
    pub n_bins: usize,
}

impl FreqGrid {
    pub const MIN_BINS: usize = 8;

    pub fn new(eta_min: f64, delta_eta: f64, n_bins: usize) -> Result<Self> {
        if !(delta_eta > 0.0) {
            return Err(Error::invalid(format!("delta_eta must be positive, got {delta_eta}")));
        }
        if n_bins < Self::MIN_BINS {
            return Err(Error::invalid(format!("grid needs at least {} bins", Self::MIN_BINS)));
        }
        Ok(FreqGrid { eta_min, delta_eta, n_bins })
    }

    /// Default grid covering (0, rate/2] with `oversample`-fold resolution:
    /// Δη = rate/(oversample·n), η_min = Δη.
    pub fn default_for(rate: f64, n: usize, oversample: usize) -> Result<Self> {
        if oversample == 0 {
            return Err(Error::invalid("oversampling factor must be at least 1"));
        }
        let delta = rate / (oversample * n) as f64;
        FreqGrid::new(delta, delta, oversample * n / 2)
    }

    pub fn eta(&self, bin: usize) -> f64 {
        self.eta_min + bin as f64 * self.delta_eta
    }

    /// Grid bin nearest to the given frequency, clamped to the grid.
    pub fn nearest_bin(&self, eta: f64) -> usize {
        let i = ((eta - self.eta_min) / self.delta_eta).round();
        (i.max(0.0) as usize).min(self.n_bins - 1)
    }
}

/// Complex adaptive-STFT values over the time × frequency grid, along with
/// the σ series used and a DC column V(t_m, 0) for trend recovery.
#[derive(Debug, Clone)]
pub struct TFMatrix {
    values: Vec<Complex64>,
    pub grid: FreqGrid,
    pub sigma: SigmaSeries,
    /// Frame times t_m in seconds.
    pub times: Vec<f64>,
    /// V(t_m, 0), one per frame.
    pub dc: Vec<Complex64>,
    pub n_frames: usize,
}

impl TFMatrix {
    pub fn row(&self, m: usize) -> &[Complex64] {
        &self.values[m * self.grid.n_bins..(m + 1) * self.grid.n_bins]
    }

    pub fn value(&self, m: usize, bin: usize) -> Complex64 {
        self.values[m * self.grid.n_bins + bin]
    }

    pub fn abs_row(&self, m: usize) -> Vec<f64> {
        self.row(m).iter().map(|v| v.norm()).collect()
    }
}

/// One STFT frame: the row of V(t_m, η_n) over the grid, plus the DC value.
///
/// The j-outer/bin-inner loop with a per-sample phase recurrence keeps the
/// evaluation deterministic (fixed summation order) and avoids a complex
/// exponential per (j, n) pair.
pub fn stft_frame(
    signal: &SampledSignal,
    samples: &[Complex64],
    m: usize,
    sigma_m: f64,
    grid: &FreqGrid,
    truncation: f64,
) -> (Vec<Complex64>, Complex64) {
    let n = samples.len();
    let dt = signal.dt();
    let rate = signal.sample_rate;
    let half = (truncation * sigma_m * rate).ceil() as usize;
    let j0 = m.saturating_sub(half);
    let j1 = (m + half).min(n - 1);

    let mut row = vec![Complex64::new(0.0, 0.0); grid.n_bins];
    let mut dc = Complex64::new(0.0, 0.0);
    for j in j0..=j1 {
        let tau = (j as f64 - m as f64) * dt;
        let w = g_value(tau / sigma_m) / sigma_m * dt;
        let c = samples[j] * w;
        dc += c;
        let base = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * grid.delta_eta * tau);
        let mut p = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * grid.eta_min * tau) * c;
        for r in row.iter_mut() {
            *r += p;
            p *= base;
        }
    }
    (row, dc)
}

/// Full adaptive STFT with the default window truncation.
pub fn stft_all(signal: &SampledSignal, sigma: &SigmaSeries, grid: &FreqGrid) -> Result<TFMatrix> {
    stft_all_with(signal, sigma, grid, crate::window::WindowSpec::default().truncation)
}

/// Full adaptive STFT: rows are exactly `stft_frame` outputs, evaluated in
/// parallel over frames.
pub fn stft_all_with(
    signal: &SampledSignal,
    sigma: &SigmaSeries,
    grid: &FreqGrid,
    truncation: f64,
) -> Result<TFMatrix> {
    let n = signal.len();
    if sigma.len() != n {
        return Err(Error::invalid(format!(
            "sigma series length {} does not match signal length {n}",
            sigma.len()
        )));
    }
    let samples = signal.to_complex();

    let mut values = vec![Complex64::new(0.0, 0.0); n * grid.n_bins];
    let mut dc = vec![Complex64::new(0.0, 0.0); n];
    values
        .par_chunks_mut(grid.n_bins)
        .zip(dc.par_iter_mut())
        .enumerate()
        .for_each(|(m, (row_out, dc_out))| {
            let (row, d) = stft_frame(signal, &samples, m, sigma.values[m], grid, truncation);
            row_out.copy_from_slice(&row);
            *dc_out = d;
        });

    Ok(TFMatrix {
        values,
        grid: *grid,
        sigma: sigma.clone(),
        times: (0..n).map(|m| signal.time(m)).collect(),
        dc,
        n_frames: n,
    })
}
