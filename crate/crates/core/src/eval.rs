//! Error metrics, the separation pipeline runner, and the benchmark
//! experiments (the recovery-error table and the clean/noisy figure runs).
//!
//! All metrics live on the interior slice of the record; the first and last
//! eighth of the samples carry boundary effects and are excluded. Reports
//! carry two aggregates: `rmse`, the mean over components of the relative L2
//! errors, and `rmse_total`, their sum, which is the aggregate the reference
//! recovery table uses for multi-component records.

use num_complex::Complex64;

use crate::chirp_rate::{estimate_chirp_rate, ChirpRateSeries};
use crate::error::{Error, Result};
use crate::recovery::{
    recover_linear_chirp, recover_sinusoidal, ChirpRateSource, ComponentRecovery,
};
use crate::ridge::{track_ridges, KExpected, RidgeSet, ThresholdPolicy};
use crate::signal::{add_noise, GroundTruth, SampledSignal, TestSignal};
use crate::stft::{stft_all_with, FreqGrid, SigmaSeries, SigmaSource, TFMatrix};

/// Interior slice as 1-based inclusive sample numbers (N/8+1, 7N/8); this
/// drops exactly N/8 samples at each end.
pub fn interior_slice(n: usize) -> Result<(usize, usize)> {
    if n < 8 {
        return Err(Error::invalid(format!("interior slice needs at least 8 samples, got {n}")));
    }
    Ok((n / 8 + 1, 7 * n / 8))
}

/// Interior slice as a 0-based index range.
pub fn interior_range(n: usize) -> Result<std::ops::Range<usize>> {
    let (lo, hi) = interior_slice(n)?;
    Ok(lo - 1..hi)
}

/// Relative L2 error ‖υ − υ̂‖₂ / ‖υ‖₂ of one component (slices already cut
/// to the window of interest).
pub fn relative_l2(truth: &[Complex64], estimate: &[Complex64]) -> Result<f64> {
    if truth.len() != estimate.len() {
        return Err(Error::invalid("series length mismatch in relative error"));
    }
    let norm: f64 = truth.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::invalid("relative error undefined for a zero-norm truth"));
    }
    let diff: f64 =
        truth.iter().zip(estimate).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    Ok(diff / norm)
}

/// Mean over components of the relative L2 errors: (1/K)·Σ‖υ_k−υ̂_k‖/‖υ_k‖.
pub fn rmse(truth: &[Vec<Complex64>], recovered: &[Vec<Complex64>]) -> Result<f64> {
    if truth.is_empty() || truth.len() != recovered.len() {
        return Err(Error::invalid("rmse needs matching non-empty component sets"));
    }
    let mut acc = 0.0;
    for (t, r) in truth.iter().zip(recovered) {
        acc += relative_l2(t, r)?;
    }
    Ok(acc / truth.len() as f64)
}

/// Which recovery route an experiment uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ModelChoice {
    Sinusoidal,
    LinearChirpEstimated,
    LinearChirpTrue,
}

impl ModelChoice {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "si" => Ok(ModelChoice::Sinusoidal),
            "lc" => Ok(ModelChoice::LinearChirpEstimated),
            "lc-true-cr" => Ok(ModelChoice::LinearChirpTrue),
            other => Err(Error::invalid(format!(
                "unknown model '{other}' (expected si, lc, or lc-true-cr)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelChoice::Sinusoidal => "si",
            ModelChoice::LinearChirpEstimated => "lc",
            ModelChoice::LinearChirpTrue => "lc-true-cr",
        }
    }
}

/// Knobs of the extraction pipeline, with the documented defaults.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RunParams {
    /// Frequency-grid oversampling factor F (Δη = rate/(F·N)).
    pub oversample: usize,
    pub threshold: ThresholdPolicy,
    pub k: KExpected,
    pub trend: bool,
    /// Window truncation half-width in window widths.
    pub truncation: f64,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams {
            oversample: 4,
            threshold: ThresholdPolicy::default(),
            k: KExpected::Auto,
            trend: false,
            truncation: 5.0,
        }
    }
}

/// Everything a separation run produces.
pub struct SeparationOutput {
    pub tf: TFMatrix,
    pub ridges: RidgeSet,
    /// Chirp-rate pipeline output per component (always computed).
    pub chirp_rates: Vec<ChirpRateSeries>,
    pub recovery: ComponentRecovery,
}

fn recovery_for(
    tf: &TFMatrix,
    ridges: &RidgeSet,
    chirp_rates: &[ChirpRateSeries],
    model: ModelChoice,
    truth_chirp: Option<&[Vec<f64>]>,
    real_input: bool,
) -> Result<ComponentRecovery> {
    match model {
        ModelChoice::Sinusoidal => Ok(recover_sinusoidal(tf, ridges, real_input)),
        ModelChoice::LinearChirpEstimated => {
            let rates: Vec<Vec<f64>> = chirp_rates.iter().map(|c| c.smoothed.clone()).collect();
            recover_linear_chirp(tf, ridges, &rates, ChirpRateSource::Estimated, real_input)
        }
        ModelChoice::LinearChirpTrue => {
            let rates = truth_chirp.ok_or_else(|| {
                Error::config("lc-true-cr requires ground-truth chirp rates")
            })?;
            recover_linear_chirp(tf, ridges, rates, ChirpRateSource::GroundTruth, real_input)
        }
    }
}

/// Run the full pipeline: STFT → ridge tracking → chirp-rate estimation →
/// recovery under the chosen model.
pub fn separate(
    signal: &SampledSignal,
    sigma: &SigmaSeries,
    params: &RunParams,
    model: ModelChoice,
    truth_chirp: Option<&[Vec<f64>]>,
) -> Result<SeparationOutput> {
    let grid = FreqGrid::default_for(signal.sample_rate, signal.len(), params.oversample)?;
    let tf = stft_all_with(signal, sigma, &grid, params.truncation)?;
    let ridges = track_ridges(&tf, &params.threshold, params.k, params.trend)?;
    let chirp_rates: Vec<ChirpRateSeries> = ridges
        .components
        .iter()
        .map(|c| estimate_chirp_rate(&c.eta_hat, signal.dt()))
        .collect::<Result<_>>()?;
    let recovery = recovery_for(&tf, &ridges, &chirp_rates, model, truth_chirp, signal.is_real())?;
    Ok(SeparationOutput { tf, ridges, chirp_rates, recovery })
}

/// Config echo attached to every report.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ConfigEcho {
    pub signal: String,
    pub sigma_source: SigmaSource,
    pub sigma_first: f64,
    pub tau0: f64,
    pub threshold: ThresholdPolicy,
    pub oversample: usize,
    pub model: ModelChoice,
    pub snr_db: Option<f64>,
    pub seed: Option<u64>,
}

/// Recovery-error report for one experiment and one model.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EvalReport {
    pub name: String,
    pub config: ConfigEcho,
    /// 1-based inclusive interior sample numbers the metrics were cut to.
    pub interior: (usize, usize),
    /// Relative L2 error per component on the interior slice.
    pub component_rel_l2: Vec<f64>,
    /// Mean over components.
    pub rmse: f64,
    /// Sum over components (the multi-component table aggregate).
    pub rmse_total: f64,
    /// Interior absolute error series per component.
    pub abs_error: Vec<Vec<f64>>,
    /// Interior frame times.
    pub t_interior: Vec<f64>,
}

fn report_for(
    name: &str,
    signal: &SampledSignal,
    truth: &GroundTruth,
    out: &SeparationOutput,
    model: ModelChoice,
    config: ConfigEcho,
) -> Result<EvalReport> {
    let n = signal.len();
    let range = interior_range(n)?;
    let mut comp_errors = Vec::new();
    let mut abs_error = Vec::new();
    for (l, rec) in out.recovery.components.iter().enumerate() {
        let truth_series: Vec<Complex64> = if signal.is_real() {
            range.clone().map(|m| Complex64::new(truth.components[l].real_sample(m), 0.0)).collect()
        } else {
            range.clone().map(|m| truth.components[l].analytic(m)).collect()
        };
        let est: Vec<Complex64> = range.clone().map(|m| rec.x_hat[m]).collect();
        comp_errors.push(relative_l2(&truth_series, &est)?);
        abs_error.push(truth_series.iter().zip(&est).map(|(a, b)| (a - b).norm()).collect());
    }
    let k = comp_errors.len() as f64;
    let total: f64 = comp_errors.iter().sum();
    Ok(EvalReport {
        name: format!("{name}_{}", model.name()),
        config,
        interior: interior_slice(n)?,
        component_rel_l2: comp_errors,
        rmse: total / k,
        rmse_total: total,
        abs_error,
        t_interior: range.map(|m| signal.time(m)).collect(),
    })
}

/// Interior relative L2 error of each recovered component against ground
/// truth (real records compare against the real component samples).
pub fn component_errors(
    signal: &SampledSignal,
    truth: &GroundTruth,
    recovery: &ComponentRecovery,
) -> Result<Vec<f64>> {
    let range = interior_range(signal.len())?;
    let mut errs = Vec::new();
    for (l, c) in truth.components.iter().enumerate() {
        let truth_series: Vec<Complex64> = if signal.is_real() {
            range.clone().map(|m| Complex64::new(c.real_sample(m), 0.0)).collect()
        } else {
            range.clone().map(|m| c.analytic(m)).collect()
        };
        let est: Vec<Complex64> =
            range.clone().map(|m| recovery.components[l].x_hat[m]).collect();
        errs.push(relative_l2(&truth_series, &est)?);
    }
    Ok(errs)
}

/// σ choice for the recovery-error table.
pub enum Table1Sigma {
    /// The constant-window row, σ ≡ 1/16.
    ConstSixteenth,
    /// The time-varying row; the series is user-supplied (its selection
    /// algorithm is outside this crate).
    User(SigmaSeries),
}

/// Grid oversampling for the table run. The reference table's grid is not
/// stated; at F=8 grid quantization is negligible next to the model errors
/// the table measures.
pub const TABLE1_OVERSAMPLE: usize = 8;

/// Separate the two-LFM record and report recovery errors under all three
/// models: sinusoidal, linear-chirp with estimated rate, linear-chirp with
/// ground-truth rate.
pub fn run_table1(sigma_mode: Table1Sigma) -> Result<[EvalReport; 3]> {
    let (signal, truth) = TestSignal::TwoLfm.generate();
    let n = signal.len();
    let sigma = match sigma_mode {
        Table1Sigma::ConstSixteenth => SigmaSeries::constant(1.0 / 16.0, n)?,
        Table1Sigma::User(s) => {
            if s.len() != n {
                return Err(Error::invalid(format!(
                    "user sigma series has {} values, record has {n}",
                    s.len()
                )));
            }
            s
        }
    };
    let params = RunParams {
        oversample: TABLE1_OVERSAMPLE,
        k: KExpected::Fixed(2),
        ..RunParams::default()
    };
    let truth_chirp: Vec<Vec<f64>> =
        truth.components.iter().map(|c| c.chirp_rate.clone()).collect();

    // one transform and ridge set serve all three models
    let base = separate(&signal, &sigma, &params, ModelChoice::LinearChirpEstimated, None)?;
    let echo = |model: ModelChoice| ConfigEcho {
        signal: "two_lfm".into(),
        sigma_source: sigma.source,
        sigma_first: sigma.values[0],
        tau0: crate::window::WindowSpec::default().tau0,
        threshold: params.threshold,
        oversample: params.oversample,
        model,
        snr_db: None,
        seed: None,
    };

    let mut reports = Vec::with_capacity(3);
    for model in [ModelChoice::Sinusoidal, ModelChoice::LinearChirpEstimated, ModelChoice::LinearChirpTrue] {
        let recovery = recovery_for(
            &base.tf,
            &base.ridges,
            &base.chirp_rates,
            model,
            Some(&truth_chirp),
            true,
        )?;
        let out = SeparationOutput {
            tf: base.tf.clone(),
            ridges: base.ridges.clone(),
            chirp_rates: base.chirp_rates.clone(),
            recovery,
        };
        reports.push(report_for("table1", &signal, &truth, &out, model, echo(model))?);
    }
    reports.try_into().map_err(|_| Error::config("expected three reports"))
}

/// One figure-style experiment: interior absolute-error series for the
/// sinusoidal and estimated-chirp-rate recoveries, plus the true-chirp-rate
/// recovery on clean runs.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FigureReport {
    pub name: String,
    pub snr_db: Option<f64>,
    pub seed: Option<u64>,
    pub t_interior: Vec<f64>,
    pub err_si: Vec<f64>,
    pub err_lc_est: Vec<f64>,
    pub err_lc_true: Option<Vec<f64>>,
    pub median_si: f64,
    pub median_lc_est: f64,
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite errors"));
    v[v.len() / 2]
}

fn figure_run(
    kind: TestSignal,
    snr_db: Option<f64>,
    seed: u64,
    with_true_cr: bool,
) -> Result<FigureReport> {
    let (clean, truth) = kind.generate();
    let signal = match snr_db {
        Some(db) => add_noise(&clean, db, seed)?,
        None => clean.clone(),
    };
    let n = signal.len();
    let sigma = SigmaSeries::constant(1.0 / 16.0, n)?;
    let k = truth.components.len();
    let params = RunParams { k: KExpected::Fixed(k), ..RunParams::default() };
    let truth_chirp: Vec<Vec<f64>> =
        truth.components.iter().map(|c| c.chirp_rate.clone()).collect();

    let base = separate(&signal, &sigma, &params, ModelChoice::LinearChirpEstimated, None)?;
    let si = recovery_for(&base.tf, &base.ridges, &base.chirp_rates, ModelChoice::Sinusoidal, None, true)?;
    let lc_true = if with_true_cr {
        Some(recovery_for(
            &base.tf,
            &base.ridges,
            &base.chirp_rates,
            ModelChoice::LinearChirpTrue,
            Some(&truth_chirp),
            true,
        )?)
    } else {
        None
    };

    let range = interior_range(n)?;
    let abs_err = |rec: &ComponentRecovery| -> Vec<f64> {
        // mean over components of the per-frame absolute error
        range
            .clone()
            .map(|m| {
                (0..k)
                    .map(|l| (rec.components[l].x_hat[m].re - truth.components[l].real_sample(m)).abs())
                    .sum::<f64>()
                    / k as f64
            })
            .collect()
    };
    let err_si = abs_err(&si);
    let err_lc_est = abs_err(&base.recovery);
    let err_lc_true = lc_true.as_ref().map(&abs_err);
    Ok(FigureReport {
        name: match snr_db {
            Some(db) => format!("{}_noisy_{db}db", kind.name()),
            None => format!("{}_clean", kind.name()),
        },
        snr_db,
        seed: snr_db.map(|_| seed),
        t_interior: range.map(|m| signal.time(m)).collect(),
        median_si: median(&err_si),
        median_lc_est: median(&err_lc_est),
        err_si,
        err_lc_est,
        err_lc_true,
    })
}

/// The four figure experiments: the chirp record clean and at 10 dB, the
/// cosine-IF record clean and at 15 dB.
pub fn run_figures(seed: u64) -> Result<Vec<FigureReport>> {
    Ok(vec![
        figure_run(TestSignal::OneChirp, None, seed, true)?,
        figure_run(TestSignal::OneChirp, Some(10.0), seed, false)?,
        figure_run(TestSignal::OneCosine, None, seed, true)?,
        figure_run(TestSignal::OneCosine, Some(15.0), seed, false)?,
    ])
}

/// Interior median absolute recovery errors (sinusoidal, estimated-chirp)
/// for one noisy realization; the noisy-ordering checks aggregate these over
/// seeds.
pub fn noisy_median_errors(kind: TestSignal, snr_db: f64, seed: u64) -> Result<(f64, f64)> {
    let report = figure_run(kind, Some(snr_db), seed, false)?;
    Ok((report.median_si, report.median_lc_est))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn interior_slice_values() {
        assert_eq!(interior_slice(128).unwrap(), (17, 112));
        assert_eq!(interior_slice(512).unwrap(), (65, 448));
        assert_eq!(interior_slice(8).unwrap(), (2, 7));
        assert!(interior_slice(7).is_err());
        // drops exactly n/8 at each end
        for &n in &[8usize, 128, 512, 1024] {
            let r = interior_range(n).unwrap();
            assert_eq!(r.start, n / 8);
            assert_eq!(n - r.end, n / 8);
        }
    }

    #[test]
    fn rmse_reference_values() {
        let c = |v: &[f64]| -> Vec<Complex64> { v.iter().map(|&x| Complex64::new(x, 0.0)).collect() };
        let truth = vec![c(&[1.0, 2.0, -1.0])];
        assert_eq!(rmse(&truth, &truth).unwrap(), 0.0);
        let doubled = vec![c(&[2.0, 4.0, -2.0])];
        assert_abs_diff_eq!(rmse(&truth, &doubled).unwrap(), 1.0, epsilon = 1e-12);
        // K = 2 with component errors 0.1 and 0.3 averages to 0.2
        let t2 = vec![c(&[1.0, 0.0]), c(&[0.0, 1.0])];
        let e2 = vec![c(&[1.1, 0.0]), c(&[0.0, 1.3])];
        assert_abs_diff_eq!(rmse(&t2, &e2).unwrap(), 0.2, epsilon = 1e-12);
        // zero-norm truth is rejected
        let z = vec![c(&[0.0, 0.0])];
        assert!(rmse(&z, &z).is_err());
    }

    #[test]
    fn table1_const_sigma_row() {
        let reports = run_table1(Table1Sigma::ConstSixteenth).unwrap();
        let si = &reports[0];
        let lce = &reports[1];
        let lct = &reports[2];
        // strict ordering is the hard invariant
        assert!(lct.rmse_total < lce.rmse_total);
        assert!(lce.rmse_total < si.rmse_total);
        // values near the reference cells (full tolerance check lives in the
        // acceptance suite)
        assert!((si.rmse_total - 0.3254).abs() / 0.3254 < 0.25, "si = {}", si.rmse_total);
        assert_eq!(si.component_rel_l2.len(), 2);
        assert_abs_diff_eq!(si.rmse * 2.0, si.rmse_total, epsilon = 1e-12);
    }

    #[test]
    fn figures_clean_orderings() {
        let reports = run_figures(1).unwrap();
        let chirp_clean = &reports[0];
        assert!(chirp_clean.err_lc_true.is_some());
        assert!(chirp_clean.median_lc_est < chirp_clean.median_si);
        let cosine_clean = &reports[2];
        assert!(cosine_clean.median_lc_est < cosine_clean.median_si);
        // clean chirp: the true-rate recovery error is far below sinusoidal
        let lct = median(chirp_clean.err_lc_true.as_ref().unwrap());
        assert!(lct < 0.2 * chirp_clean.median_si);
    }

    #[test]
    fn noisy_runs_are_deterministic_per_seed() {
        let a = noisy_median_errors(TestSignal::OneChirp, 10.0, 5).unwrap();
        let b = noisy_median_errors(TestSignal::OneChirp, 10.0, 5).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn rmse_scale_invariant(
            scale in 0.01..100.0f64,
            vals in proptest::collection::vec(-10.0..10.0f64, 4..32),
        ) {
            prop_assume!(vals.iter().any(|&v| v.abs() > 1e-6));
            let truth: Vec<Complex64> = vals.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            let est: Vec<Complex64> = vals.iter().map(|&v| Complex64::new(v * 1.1 + 0.05, -0.02)).collect();
            let base = rmse(std::slice::from_ref(&truth), std::slice::from_ref(&est)).unwrap();
            let ts: Vec<Complex64> = truth.iter().map(|v| v * scale).collect();
            let es: Vec<Complex64> = est.iter().map(|v| v * scale).collect();
            let scaled = rmse(&[ts], &[es]).unwrap();
            prop_assert!((base - scaled).abs() < 1e-12 * base.max(1.0));
        }
    }
}
