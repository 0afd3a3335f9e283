//! Adaptive-STFT separation of non-stationary multicomponent signals.
//!
//! The pipeline estimates each component's instantaneous frequency as a
//! time-frequency ridge of an adaptive short-time Fourier transform whose
//! Gaussian window width σ(t) may vary per frame, then reconstructs the
//! component either directly from the transform on the ridge (sinusoidal
//! local model) or with the exact linear-chirp correction factor
//! √(1 − i2πφ″σ²) (linear-chirp local model). Alongside the estimators, the
//! [`bounds`] module evaluates the theoretical IF and recovery error bounds
//! of both models from ground truth, so synthetic experiments can certify
//! the theory frame by frame.
//!
//! Module map:
//! - [`signal`]: records, ground truth, benchmark generators, calibrated noise
//! - [`window`]: Gaussian window, chirp kernel closed forms and quadrature oracle
//! - [`stft`]: the adaptive transform on a time × frequency grid
//! - [`ridge`]: thresholding, clustering, and ridge tracking
//! - [`chirp_rate`]: B-spline smoothing and five-point differentiation
//! - [`recovery`]: sinusoidal and linear-chirp reconstruction
//! - [`bounds`]: error levels, theorem bounds, separation conditions
//! - [`eval`]: metrics and the benchmark experiments
//! - [`io`]: CSV/JSON file formats

// `!(x > 0)`-style guards are deliberate: they reject NaN along with the
// out-of-range values. Index-parallel loops over aligned series read better
// than zipped iterator chains here.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod chirp_rate;
pub mod error;
pub mod eval;
pub mod io;
pub mod recovery;
pub mod ridge;
pub mod signal;
pub mod stft;
pub mod window;

pub use error::{Error, Result};
pub use eval::{
    interior_range, interior_slice, noisy_median_errors, rmse, run_figures, run_table1,
    separate, ModelChoice, RunParams, Table1Sigma,
};
pub use recovery::{recover_linear_chirp, recover_sinusoidal, ChirpRateSource, RecoveryModel};
pub use ridge::{sigma1_rule, track_ridges, KExpected, ThresholdPolicy};
pub use signal::{
    add_noise, gen_cosine_if, gen_linear_chirp, gen_two_lfm, synth_ahm, ComponentSpec,
    GroundTruth, ModelAssumptions, SampledSignal, Samples, TestSignal,
};
pub use stft::{stft_all, stft_all_with, FreqGrid, SigmaSeries, SigmaSource, TFMatrix};
pub use window::{KernelParams, WindowKind, WindowSpec};
