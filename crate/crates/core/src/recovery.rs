//! Component and trend reconstruction from the ridge.
//!
//! The sinusoidal route reads the transform on the ridge directly; the
//! linear-chirp route additionally multiplies by √(1 − i2πφ″σ²), the exact
//! inverse of the kernel peak G(0), which is what makes it the more accurate
//! model for chirping components. For real records both routes double the
//! real part to undo the conjugate-mirror split; the trend (self-conjugate)
//! is not doubled.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ridge::RidgeSet;
use crate::stft::TFMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum RecoveryModel {
    Sinusoidal,
    LinearChirp,
}

/// Which chirp-rate series fed a linear-chirp recovery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ChirpRateSource {
    None,
    Estimated,
    GroundTruth,
}

/// One recovered component. For real inputs `x_hat` holds the real recovery
/// in the real part (imaginary part zero).
#[derive(Debug, Clone)]
pub struct RecoveredComponent {
    pub x_hat: Vec<Complex64>,
    /// Amplitude estimate |V(t_m, η̂_ℓ)|.
    pub a_hat: Vec<f64>,
    pub eta_hat: Vec<f64>,
    /// Chirp-rate series used, when the model needed one.
    pub r_tilde: Option<Vec<f64>>,
    /// Frames whose value was carried from the previous frame.
    pub flagged: Vec<bool>,
}

/// Trend reconstruction from the DC column.
#[derive(Debug, Clone)]
pub struct RecoveredTrend {
    pub x_hat: Vec<Complex64>,
    pub a_hat: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ComponentRecovery {
    pub model: RecoveryModel,
    pub chirp_source: ChirpRateSource,
    pub real_input: bool,
    pub components: Vec<RecoveredComponent>,
    pub trend: Option<RecoveredTrend>,
}

fn ridge_values(tf: &TFMatrix, ridges: &RidgeSet, l: usize) -> Vec<Complex64> {
    let comp = &ridges.components[l];
    (0..tf.n_frames).map(|m| tf.value(m, comp.bins[m])).collect()
}

fn recover_trend(tf: &TFMatrix, real_input: bool) -> RecoveredTrend {
    let x_hat: Vec<Complex64> = tf
        .dc
        .iter()
        .map(|&v| if real_input { Complex64::new(v.re, 0.0) } else { v })
        .collect();
    RecoveredTrend { a_hat: tf.dc.iter().map(|v| v.norm()).collect(), x_hat }
}

/// Apply the carry-forward rule to flagged frames and assemble a component.
fn assemble(
    tf: &TFMatrix,
    ridges: &RidgeSet,
    l: usize,
    mut values: Vec<Complex64>,
    r_tilde: Option<Vec<f64>>,
) -> RecoveredComponent {
    let mut a_hat: Vec<f64> = ridge_values(tf, ridges, l).iter().map(|v| v.norm()).collect();
    for m in 1..tf.n_frames {
        if ridges.flagged[m] {
            values[m] = values[m - 1];
            a_hat[m] = a_hat[m - 1];
        }
    }
    RecoveredComponent {
        x_hat: values,
        a_hat,
        eta_hat: ridges.components[l].eta_hat.clone(),
        r_tilde,
        flagged: ridges.flagged.clone(),
    }
}

/// Sinusoidal-model recovery: x̂_ℓ = V(t, η̂_ℓ), doubled to 2·Re(V) for real
/// records.
pub fn recover_sinusoidal(tf: &TFMatrix, ridges: &RidgeSet, real_input: bool) -> ComponentRecovery {
    let components = (0..ridges.num_components())
        .map(|l| {
            let values: Vec<Complex64> = ridge_values(tf, ridges, l)
                .into_iter()
                .map(|v| if real_input { Complex64::new(2.0 * v.re, 0.0) } else { v })
                .collect();
            assemble(tf, ridges, l, values, None)
        })
        .collect();
    ComponentRecovery {
        model: RecoveryModel::Sinusoidal,
        chirp_source: ChirpRateSource::None,
        real_input,
        components,
        trend: ridges.trend.then(|| recover_trend(tf, real_input)),
    }
}

/// Linear-chirp-model recovery with the given per-component chirp-rate
/// series: x̂_ℓ = √(1 − i2πφ″σ²)·V(t, η̌_ℓ), doubled to 2·Re(·) for real
/// records. The square root is taken in the same quadrant as its argument
/// (the principal root, since the real part is 1).
pub fn recover_linear_chirp(
    tf: &TFMatrix,
    ridges: &RidgeSet,
    chirp_rates: &[Vec<f64>],
    chirp_source: ChirpRateSource,
    real_input: bool,
) -> Result<ComponentRecovery> {
    let k = ridges.num_components();
    if chirp_rates.len() != k {
        return Err(Error::invalid(format!(
            "got {} chirp-rate series for {k} components",
            chirp_rates.len()
        )));
    }
    for (l, r) in chirp_rates.iter().enumerate() {
        if r.len() != tf.n_frames {
            return Err(Error::invalid(format!(
                "chirp-rate series {l} has {} frames, transform has {}",
                r.len(),
                tf.n_frames
            )));
        }
    }
    let components = (0..k)
        .map(|l| {
            let values: Vec<Complex64> = ridge_values(tf, ridges, l)
                .into_iter()
                .enumerate()
                .map(|(m, v)| {
                    let s = tf.sigma.values[m];
                    let b = 2.0 * std::f64::consts::PI * chirp_rates[l][m] * s * s;
                    let corrected = Complex64::new(1.0, -b).sqrt() * v;
                    if real_input {
                        Complex64::new(2.0 * corrected.re, 0.0)
                    } else {
                        corrected
                    }
                })
                .collect();
            assemble(tf, ridges, l, values, Some(chirp_rates[l].clone()))
        })
        .collect();
    Ok(ComponentRecovery {
        model: RecoveryModel::LinearChirp,
        chirp_source,
        real_input,
        components,
        trend: ridges.trend.then(|| recover_trend(tf, real_input)),
    })
}

/// Instantaneous-amplitude estimates Â_ℓ(t_m) = |V(t_m, η̂_ℓ)| per component.
pub fn estimate_amplitude(tf: &TFMatrix, ridges: &RidgeSet) -> Vec<Vec<f64>> {
    (0..ridges.num_components())
        .map(|l| ridge_values(tf, ridges, l).iter().map(|v| v.norm()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ridge::{track_ridges, KExpected, ThresholdPolicy};
    use crate::signal::{gen_cosine_if, synth_ahm, ComponentSpec};
    use crate::stft::{stft_all, FreqGrid, SigmaSeries};
    use approx::assert_abs_diff_eq;

    fn pipeline(
        sig: &crate::signal::SampledSignal,
        k: usize,
    ) -> (TFMatrix, RidgeSet) {
        let n = sig.len();
        let sigma = SigmaSeries::constant(1.0 / 16.0, n).unwrap();
        let grid = FreqGrid::default_for(sig.sample_rate, n, 4).unwrap();
        let tf = stft_all(sig, &sigma, &grid).unwrap();
        let ridges = track_ridges(&tf, &ThresholdPolicy::default(), KExpected::Fixed(k), false).unwrap();
        (tf, ridges)
    }

    #[test]
    fn complex_tone_recovers_itself() {
        let spec = ComponentSpec {
            amplitude: Box::new(|_| 0.8),
            phase: Box::new(|t| 20.0 * t),
            phase_deriv: Box::new(|_| 20.0),
            phase_deriv2: Box::new(|_| 0.0),
        };
        let (sig, gt) = synth_ahm(&[spec], None, 256, 128.0, false).unwrap();
        let (tf, ridges) = pipeline(&sig, 1);
        let rec = recover_sinusoidal(&tf, &ridges, false);
        for m in 32..224 {
            let truth = gt.components[0].analytic(m);
            assert!((rec.components[0].x_hat[m] - truth).norm() < 1e-2 * truth.norm());
        }
    }

    #[test]
    fn real_tone_recovers_cosine() {
        let spec = ComponentSpec {
            amplitude: Box::new(|_| 1.0),
            phase: Box::new(|t| 20.0 * t),
            phase_deriv: Box::new(|_| 20.0),
            phase_deriv2: Box::new(|_| 0.0),
        };
        let (sig, gt) = synth_ahm(&[spec], None, 256, 128.0, true).unwrap();
        let (tf, ridges) = pipeline(&sig, 1);
        let rec = recover_sinusoidal(&tf, &ridges, true);
        for m in 32..224 {
            let truth = gt.components[0].real_sample(m);
            assert!((rec.components[0].x_hat[m].re - truth).abs() < 1e-2);
            assert_eq!(rec.components[0].x_hat[m].im, 0.0);
        }
    }

    #[test]
    fn zero_chirp_rate_matches_sinusoidal_exactly() {
        let spec = ComponentSpec {
            amplitude: Box::new(|_| 1.0),
            phase: Box::new(|t| 20.0 * t),
            phase_deriv: Box::new(|_| 20.0),
            phase_deriv2: Box::new(|_| 0.0),
        };
        let (sig, _) = synth_ahm(&[spec], None, 256, 128.0, true).unwrap();
        let (tf, ridges) = pipeline(&sig, 1);
        let si = recover_sinusoidal(&tf, &ridges, true);
        let lc = recover_linear_chirp(&tf, &ridges, &[vec![0.0; 256]], ChirpRateSource::GroundTruth, true)
            .unwrap();
        for m in 0..256 {
            assert_eq!(si.components[0].x_hat[m].re, lc.components[0].x_hat[m].re);
        }
    }

    #[test]
    fn chirp_correction_beats_sinusoidal_on_a_chirp() {
        let (sig, gt) = crate::signal::gen_linear_chirp();
        let n = sig.len();
        let (tf, ridges) = pipeline(&sig, 1);
        let si = recover_sinusoidal(&tf, &ridges, true);
        let lc = recover_linear_chirp(
            &tf,
            &ridges,
            &[gt.components[0].chirp_rate.clone()],
            ChirpRateSource::GroundTruth,
            true,
        )
        .unwrap();
        let truth: Vec<f64> = gt.components[0].real_samples();
        let med = |rec: &ComponentRecovery| {
            let mut e: Vec<f64> = (n / 8..7 * n / 8)
                .map(|m| (rec.components[0].x_hat[m].re - truth[m]).abs())
                .collect();
            e.sort_by(|a, b| a.partial_cmp(b).unwrap());
            e[e.len() / 2]
        };
        let (esi, elc) = (med(&si), med(&lc));
        // the sinusoidal error is visibly nonzero; the corrected one is tiny
        assert!(esi > 0.05, "sinusoidal error unexpectedly small: {esi}");
        assert!(elc < 0.2 * esi, "correction did not help: si={esi}, lc={elc}");
    }

    #[test]
    fn amplitude_tracks_slow_envelope() {
        let (sig, gt) = gen_cosine_if();
        let n = sig.len();
        let (tf, ridges) = pipeline(&sig, 1);
        let amps = estimate_amplitude(&tf, &ridges);
        for m in (n / 8..7 * n / 8).step_by(41) {
            // real record: the transform sees half the real amplitude
            let expected = gt.components[0].amplitude[m] / 2.0;
            assert!((amps[0][m] - expected).abs() < 0.05 * expected, "at frame {m}");
        }
    }

    #[test]
    fn amplitude_of_zero_signal_is_zero() {
        // ridges from a tone, amplitudes evaluated on a silent record's transform
        let spec = ComponentSpec {
            amplitude: Box::new(|_| 1.0),
            phase: Box::new(|t| 20.0 * t),
            phase_deriv: Box::new(|_| 20.0),
            phase_deriv2: Box::new(|_| 0.0),
        };
        let (sig, _) = synth_ahm(&[spec], None, 64, 64.0, true).unwrap();
        let (_, ridges) = pipeline(&sig, 1);
        let silent = crate::signal::SampledSignal::new(
            crate::signal::Samples::Real(vec![0.0; 64]),
            64.0,
            0.0,
        )
        .unwrap();
        let sigma = SigmaSeries::constant(1.0 / 16.0, 64).unwrap();
        let grid = FreqGrid::default_for(64.0, 64, 4).unwrap();
        let zero_tf = stft_all(&silent, &sigma, &grid).unwrap();
        let amps = estimate_amplitude(&zero_tf, &ridges);
        assert!(amps[0].iter().all(|&a| a == 0.0));
    }

    #[test]
    fn constant_trend_recovery() {
        let trend = |_t: f64| 0.5;
        let (sig, _) = synth_ahm(&[], Some(&trend), 128, 128.0, true).unwrap();
        let n = sig.len();
        let sigma = SigmaSeries::constant(1.0 / 16.0, n).unwrap();
        let grid = FreqGrid::default_for(128.0, n, 4).unwrap();
        let tf = stft_all(&sig, &sigma, &grid).unwrap();
        let trend_rec = recover_trend(&tf, true);
        // frames whose full 5σ window fits inside the record
        for m in 40..88 {
            assert_abs_diff_eq!(trend_rec.x_hat[m].re, 0.5, epsilon = 1e-3);
            assert_abs_diff_eq!(trend_rec.a_hat[m], 0.5, epsilon = 1e-3);
        }
    }

    #[test]
    fn chirp_rate_length_mismatch_rejected() {
        let (sig, _) = crate::signal::gen_two_lfm();
        let (tf, ridges) = pipeline(&sig, 2);
        assert!(recover_linear_chirp(&tf, &ridges, &[vec![0.0; 128]], ChirpRateSource::Estimated, true)
            .is_err());
        assert!(recover_linear_chirp(
            &tf,
            &ridges,
            &[vec![0.0; 64], vec![0.0; 64]],
            ChirpRateSource::Estimated,
            true
        )
        .is_err());
    }
}
