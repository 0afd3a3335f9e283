//! Chirp-rate estimation from a ridge series: cubic B-spline smoothing,
//! five-point differentiation, and one re-smoothing pass.

use crate::error::{Error, Result};

/// Cubic B-spline filter taps; they sum to 1.
const BSPLINE_TAPS: [f64; 5] = [1.0 / 16.0, 4.0 / 16.0, 6.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0];

/// Raw and smoothed chirp-rate series r_ℓ(t_m), r̃_ℓ(t_m) in Hz/s.
#[derive(Debug, Clone)]
pub struct ChirpRateSeries {
    pub raw: Vec<f64>,
    pub smoothed: Vec<f64>,
}

/// Convolve with the cubic B-spline filter {1,4,6,4,1}/16, extending the
/// series by whole-sample mirroring at both ends.
pub fn bspline_smooth(series: &[f64]) -> Result<Vec<f64>> {
    let n = series.len();
    if n < 5 {
        return Err(Error::invalid(format!("B-spline smoothing needs at least 5 samples, got {n}")));
    }
    let mirror = |i: isize| -> f64 {
        let idx = if i < 0 {
            (-i) as usize
        } else if i as usize >= n {
            2 * (n - 1) - i as usize
        } else {
            i as usize
        };
        series[idx]
    };
    Ok((0..n as isize)
        .map(|m| {
            BSPLINE_TAPS
                .iter()
                .enumerate()
                .map(|(j, &w)| w * mirror(m + j as isize - 2))
                .sum()
        })
        .collect())
}

/// Five-point derivative: the fourth-order central stencil
/// (f_{m−2} − 8f_{m−1} + 8f_{m+1} − f_{m+2})/(12Δt) in the interior, with
/// fourth-order one-sided stencils at the first and last two points. Exact
/// through degree-4 polynomials.
pub fn five_point_derivative(series: &[f64], dt: f64) -> Result<Vec<f64>> {
    let n = series.len();
    if n < 5 {
        return Err(Error::invalid(format!("five-point derivative needs at least 5 samples, got {n}")));
    }
    if !(dt > 0.0) {
        return Err(Error::invalid(format!("dt must be positive, got {dt}")));
    }
    let f = series;
    let d = 12.0 * dt;
    let mut out = Vec::with_capacity(n);
    out.push((-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / d);
    out.push((-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / d);
    for m in 2..n - 2 {
        out.push((f[m - 2] - 8.0 * f[m - 1] + 8.0 * f[m + 1] - f[m + 2]) / d);
    }
    out.push((3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / d);
    out.push((25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / d);
    Ok(out)
}

/// The full pipeline: smooth the ridge, differentiate, smooth the derivative.
/// `smoothed` is what recovery uses as φ″_ℓ(t).
pub fn estimate_chirp_rate(eta_hat: &[f64], dt: f64) -> Result<ChirpRateSeries> {
    let smoothed_ridge = bspline_smooth(eta_hat)?;
    let raw = five_point_derivative(&smoothed_ridge, dt)?;
    let smoothed = bspline_smooth(&raw)?;
    Ok(ChirpRateSeries { raw, smoothed })
}
