//! Signals, ground truth, the benchmark generators, and calibrated noise.
//!
//! All generators evaluate amplitudes and phases in exact closed form, so the
//! ground-truth series (IF, chirp rate, component phases) carry no integration
//! error. Real records stay real; the complex adaptive-harmonic view is
//! recovered downstream through the 2·Re formulas.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Sample storage: a record is either purely real or complex.
#[derive(Debug, Clone)]
pub enum Samples {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl Samples {
    pub fn len(&self) -> usize {
        match self {
            Samples::Real(v) => v.len(),
            Samples::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value(&self, i: usize) -> Complex64 {
        match self {
            Samples::Real(v) => Complex64::new(v[i], 0.0),
            Samples::Complex(v) => v[i],
        }
    }
}

/// Uniformly sampled record with its rate and start time.
#[derive(Debug, Clone)]
pub struct SampledSignal {
    pub samples: Samples,
    /// Sample rate in Hz.
    pub sample_rate: f64,
    /// Start time in seconds.
    pub t0: f64,
}

impl SampledSignal {
    pub const MIN_LEN: usize = 16;

    pub fn new(samples: Samples, sample_rate: f64, t0: f64) -> Result<Self> {
        if !(sample_rate > 0.0) {
            return Err(Error::invalid(format!("sample_rate must be positive, got {sample_rate}")));
        }
        if samples.len() < Self::MIN_LEN {
            return Err(Error::invalid(format!(
                "record too short: {} samples (minimum {})",
                samples.len(),
                Self::MIN_LEN
            )));
        }
        Ok(SampledSignal { samples, sample_rate, t0 })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn is_real(&self) -> bool {
        matches!(self.samples, Samples::Real(_))
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.sample_rate
    }

    /// Time of sample m.
    pub fn time(&self, m: usize) -> f64 {
        self.t0 + m as f64 * self.dt()
    }

    /// Samples as complex values (imaginary part zero for real records).
    pub fn to_complex(&self) -> Vec<Complex64> {
        match &self.samples {
            Samples::Real(v) => v.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            Samples::Complex(v) => v.clone(),
        }
    }

    /// Total energy Σ|x|².
    pub fn energy(&self) -> f64 {
        match &self.samples {
            Samples::Real(v) => v.iter().map(|x| x * x).sum(),
            Samples::Complex(v) => v.iter().map(|x| x.norm_sqr()).sum(),
        }
    }
}

/// One component of an adaptive harmonic model: amplitude and phase (in
/// cycles) with the phase's first two derivative evaluators.
pub struct ComponentSpec {
    pub amplitude: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    /// Phase φ(t) in cycles.
    pub phase: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    /// Instantaneous frequency φ′(t) in Hz.
    pub phase_deriv: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    /// Chirp rate φ″(t) in Hz/s.
    pub phase_deriv2: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

/// Ground-truth series for one component, sampled on the record's grid.
#[derive(Debug, Clone)]
pub struct ComponentTruth {
    /// Instantaneous amplitude A(t_m).
    pub amplitude: Vec<f64>,
    /// Phase φ(t_m) in cycles.
    pub phase: Vec<f64>,
    /// IF φ′(t_m) in Hz.
    pub if_hz: Vec<f64>,
    /// Chirp rate φ″(t_m) in Hz/s.
    pub chirp_rate: Vec<f64>,
}

impl ComponentTruth {
    /// The analytic component A(t_m)·e^{i2πφ(t_m)}.
    pub fn analytic(&self, m: usize) -> Complex64 {
        Complex64::from_polar(self.amplitude[m], 2.0 * std::f64::consts::PI * self.phase[m])
    }

    /// The real component A(t_m)·cos(2πφ(t_m)).
    pub fn real_sample(&self, m: usize) -> f64 {
        self.amplitude[m] * (2.0 * std::f64::consts::PI * self.phase[m]).cos()
    }

    /// Real component series.
    pub fn real_samples(&self) -> Vec<f64> {
        (0..self.amplitude.len()).map(|m| self.real_sample(m)).collect()
    }
}

/// Per-component ground truth plus the trend samples, aligned with the record.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    /// Components ordered by increasing IF (k = 1..K in the model).
    pub components: Vec<ComponentTruth>,
    /// Trend A₀(t_m), when the model has one.
    pub trend: Option<Vec<f64>>,
}

impl GroundTruth {
    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    /// Pointwise minimal IF gap between adjacent components (Hz).
    pub fn if_gaps(&self) -> Result<Vec<f64>> {
        if self.components.len() < 2 {
            return Err(Error::invalid("IF gaps need at least two components"));
        }
        let n = self.components[0].if_hz.len();
        let mut gaps = vec![f64::INFINITY; n];
        for w in self.components.windows(2) {
            for m in 0..n {
                let gap = w[1].if_hz[m] - w[0].if_hz[m];
                if gaps[m] > gap {
                    gaps[m] = gap;
                }
            }
        }
        Ok(gaps)
    }

    /// Conservative model-regularity constants measured from the sampled
    /// series over the interior slice: ε₁ from |dA/dt|/A, ε₂ from |φ″|,
    /// ε₃ from |dφ″/dt|, d′ from the minimal IF gap.
    pub fn estimate_assumptions(&self, dt: f64) -> ModelAssumptions {
        let n = self.components[0].amplitude.len();
        let lo = n / 8;
        let hi = 7 * n / 8;
        let mut eps1: f64 = 0.0;
        let mut eps2: f64 = 0.0;
        let mut eps3: f64 = 0.0;
        for c in &self.components {
            for m in lo..hi.min(n - 1) {
                let da = (c.amplitude[m + 1] - c.amplitude[m]) / dt;
                eps1 = eps1.max((da / c.amplitude[m]).abs());
                let dcr = (c.chirp_rate[m + 1] - c.chirp_rate[m]) / dt;
                eps3 = eps3.max(dcr.abs());
            }
            for m in lo..hi {
                eps2 = eps2.max(c.chirp_rate[m].abs());
            }
        }
        let dprime = match self.if_gaps() {
            Ok(gaps) => gaps[lo..hi].iter().cloned().fold(f64::INFINITY, f64::min),
            Err(_) => f64::INFINITY,
        };
        ModelAssumptions { eps1, eps2, eps3, dprime }
    }
}

/// Regularity constants of the adaptive harmonic model: ε₁ bounds the
/// relative amplitude variation, ε₂ bounds |φ″| (sinusoidal model), ε₃
/// bounds |φ‴| (chirp model), d′ is the minimal IF gap.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct ModelAssumptions {
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
    pub dprime: f64,
}

impl ModelAssumptions {
    pub fn new(eps1: f64, eps2: f64, eps3: f64, dprime: f64) -> Result<Self> {
        if eps1 < 0.0 || eps2 < 0.0 || eps3 < 0.0 || dprime < 0.0 {
            return Err(Error::invalid("model assumption constants must be nonnegative"));
        }
        Ok(ModelAssumptions { eps1, eps2, eps3, dprime })
    }
}

fn sample_specs(
    components: &[ComponentSpec],
    trend: Option<&(dyn Fn(f64) -> f64 + Sync)>,
    n: usize,
    rate: f64,
) -> Result<(GroundTruth, Vec<f64>)> {
    let dt = 1.0 / rate;
    let mut truths = Vec::with_capacity(components.len());
    for (k, spec) in components.iter().enumerate() {
        let mut c = ComponentTruth {
            amplitude: Vec::with_capacity(n),
            phase: Vec::with_capacity(n),
            if_hz: Vec::with_capacity(n),
            chirp_rate: Vec::with_capacity(n),
        };
        for m in 0..n {
            let t = m as f64 * dt;
            let a = (spec.amplitude)(t);
            let f = (spec.phase_deriv)(t);
            if !(a > 0.0) {
                return Err(Error::invalid(format!("component {} amplitude not positive at t={t}", k + 1)));
            }
            if !(f > 0.0) {
                return Err(Error::invalid(format!("component {} IF not positive at t={t}", k + 1)));
            }
            c.amplitude.push(a);
            c.phase.push((spec.phase)(t));
            c.if_hz.push(f);
            c.chirp_rate.push((spec.phase_deriv2)(t));
        }
        truths.push(c);
    }
    // reject unordered IFs: the model assumes phi'_k > phi'_{k-1} pointwise
    for w in truths.windows(2) {
        for m in 0..n {
            if w[1].if_hz[m] <= w[0].if_hz[m] {
                return Err(Error::invalid(format!(
                    "component IFs not strictly increasing at sample {m}: {} <= {}",
                    w[1].if_hz[m], w[0].if_hz[m]
                )));
            }
        }
    }
    let trend_samples: Vec<f64> = match trend {
        Some(f) => (0..n).map(|m| f(m as f64 * dt)).collect(),
        None => Vec::new(),
    };
    let gt = GroundTruth {
        components: truths,
        trend: if trend.is_some() { Some(trend_samples.clone()) } else { None },
    };
    Ok((gt, trend_samples))
}

/// Synthesize an adaptive-harmonic-model record from component evaluators.
/// Emits the real part when `real` is set, the complex record otherwise.
pub fn synth_ahm(
    components: &[ComponentSpec],
    trend: Option<&(dyn Fn(f64) -> f64 + Sync)>,
    n: usize,
    rate: f64,
    real: bool,
) -> Result<(SampledSignal, GroundTruth)> {
    if components.is_empty() && trend.is_none() {
        return Err(Error::invalid("synth_ahm needs at least one component or a trend"));
    }
    let (gt, trend_samples) = sample_specs(components, trend, n, rate)?;
    let samples = if real {
        let mut v = vec![0.0f64; n];
        for c in &gt.components {
            for (m, s) in v.iter_mut().enumerate() {
                *s += c.real_sample(m);
            }
        }
        if !trend_samples.is_empty() {
            for (m, s) in v.iter_mut().enumerate() {
                *s += trend_samples[m];
            }
        }
        Samples::Real(v)
    } else {
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        for c in &gt.components {
            for (m, s) in v.iter_mut().enumerate() {
                *s += c.analytic(m);
            }
        }
        if !trend_samples.is_empty() {
            for (m, s) in v.iter_mut().enumerate() {
                *s += trend_samples[m];
            }
        }
        Samples::Complex(v)
    };
    Ok((SampledSignal::new(samples, rate, 0.0)?, gt))
}

/// x(t) = cos(2π(9t + 5t²)) on t ∈ [0, 4): N = 512 at 128 Hz.
/// IF 9 + 10t, chirp rate 10.
pub fn gen_linear_chirp() -> (SampledSignal, GroundTruth) {
    let spec = ComponentSpec {
        amplitude: Box::new(|_| 1.0),
        phase: Box::new(|t| 9.0 * t + 5.0 * t * t),
        phase_deriv: Box::new(|t| 9.0 + 10.0 * t),
        phase_deriv2: Box::new(|_| 10.0),
    };
    synth_ahm(&[spec], None, 512, 128.0, true).expect("fixed generator parameters are valid")
}

/// y(t) = ln(10 + √t)·cos(2π(16t + 0.5·cos(4t))) on t ∈ [0, 8): N = 1024
/// at 128 Hz. IF 16 − 2·sin(4t), chirp rate −8·cos(4t).
pub fn gen_cosine_if() -> (SampledSignal, GroundTruth) {
    let spec = ComponentSpec {
        amplitude: Box::new(|t| (10.0 + t.sqrt()).ln()),
        phase: Box::new(|t| 16.0 * t + 0.5 * (4.0 * t).cos()),
        phase_deriv: Box::new(|t| 16.0 - 2.0 * (4.0 * t).sin()),
        phase_deriv2: Box::new(|t| -8.0 * (4.0 * t).cos()),
    };
    synth_ahm(&[spec], None, 1024, 128.0, true).expect("fixed generator parameters are valid")
}

/// z(t) = cos(2π(10t + 5t²)) + cos(2π(20t + 9t²)) on t ∈ [0, 1): N = 128
/// at 128 Hz. IFs 10 + 10t and 20 + 18t.
pub fn gen_two_lfm() -> (SampledSignal, GroundTruth) {
    let specs = [
        ComponentSpec {
            amplitude: Box::new(|_| 1.0),
            phase: Box::new(|t| 10.0 * t + 5.0 * t * t),
            phase_deriv: Box::new(|t| 10.0 + 10.0 * t),
            phase_deriv2: Box::new(|_| 10.0),
        },
        ComponentSpec {
            amplitude: Box::new(|_| 1.0),
            phase: Box::new(|t| 20.0 * t + 9.0 * t * t),
            phase_deriv: Box::new(|t| 20.0 + 18.0 * t),
            phase_deriv2: Box::new(|_| 18.0),
        },
    ];
    synth_ahm(&specs, None, 128, 128.0, true).expect("fixed generator parameters are valid")
}

/// The named benchmark records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum TestSignal {
    OneChirp,
    OneCosine,
    TwoLfm,
}

impl TestSignal {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "one_chirp" => Ok(TestSignal::OneChirp),
            "one_cosine" => Ok(TestSignal::OneCosine),
            "two_lfm" => Ok(TestSignal::TwoLfm),
            other => Err(Error::invalid(format!(
                "unknown signal '{other}' (expected one_chirp, one_cosine, or two_lfm)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TestSignal::OneChirp => "one_chirp",
            TestSignal::OneCosine => "one_cosine",
            TestSignal::TwoLfm => "two_lfm",
        }
    }

    pub fn generate(&self) -> (SampledSignal, GroundTruth) {
        match self {
            TestSignal::OneChirp => gen_linear_chirp(),
            TestSignal::OneCosine => gen_cosine_if(),
            TestSignal::TwoLfm => gen_two_lfm(),
        }
    }

    /// Regularity constants for the record: analytic where the derivatives
    /// are exact (the LFM cases), measured from the sampled series where the
    /// amplitude derivative is unbounded at t = 0 (the cosine-IF case).
    pub fn assumptions(&self) -> ModelAssumptions {
        match self {
            TestSignal::OneChirp => ModelAssumptions { eps1: 0.0, eps2: 10.0, eps3: 0.0, dprime: f64::INFINITY },
            TestSignal::TwoLfm => ModelAssumptions { eps1: 0.0, eps2: 18.0, eps3: 0.0, dprime: 10.0 },
            TestSignal::OneCosine => {
                let (sig, gt) = self.generate();
                let mut a = gt.estimate_assumptions(sig.dt());
                a.eps2 = 8.0;
                a.eps3 = 32.0;
                a
            }
        }
    }
}

/// Add zero-mean white Gaussian noise scaled so the realized signal-to-noise
/// ratio equals `snr_db` exactly: 10·log₁₀(Σ|x|²/Σ|n|²) = snr_db.
/// `f64::INFINITY` is the no-noise sentinel. Deterministic under `seed`.
pub fn add_noise(signal: &SampledSignal, snr_db: f64, seed: u64) -> Result<SampledSignal> {
    if snr_db == f64::INFINITY {
        return Ok(signal.clone());
    }
    if !snr_db.is_finite() {
        return Err(Error::invalid(format!("snr_db must be finite or +inf, got {snr_db}")));
    }
    let ex = signal.energy();
    if ex == 0.0 {
        return Err(Error::invalid("SNR undefined for an all-zero signal"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = signal.len();
    let samples = match &signal.samples {
        Samples::Real(v) => {
            let noise: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            let en: f64 = noise.iter().map(|x| x * x).sum();
            let scale = (ex / (en * 10f64.powf(snr_db / 10.0))).sqrt();
            Samples::Real(v.iter().zip(&noise).map(|(&x, &w)| x + scale * w).collect())
        }
        Samples::Complex(v) => {
            let noise: Vec<Complex64> = (0..n)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex64::new(re, im)
                })
                .collect();
            let en: f64 = noise.iter().map(|x| x.norm_sqr()).sum();
            let scale = (ex / (en * 10f64.powf(snr_db / 10.0))).sqrt();
            Samples::Complex(v.iter().zip(&noise).map(|(&x, &w)| x + scale * w).collect())
        }
    };
    SampledSignal::new(samples, signal.sample_rate, signal.t0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn linear_chirp_matches_definition() {
        let (sig, gt) = gen_linear_chirp();
        assert_eq!(sig.len(), 512);
        assert_eq!(sig.sample_rate, 128.0);
        assert!(sig.is_real());
        assert_abs_diff_eq!(sig.samples.value(0).re, 1.0, epsilon = 1e-15);
        // IF at t = 2.0 (sample 256)
        assert_abs_diff_eq!(gt.components[0].if_hz[256], 29.0, epsilon = 1e-12);
        assert!(gt.components[0].chirp_rate.iter().all(|&r| r == 10.0));
    }

    #[test]
    fn cosine_if_matches_definition() {
        let (sig, gt) = gen_cosine_if();
        assert_eq!(sig.len(), 1024);
        assert_eq!(sig.sample_rate, 128.0);
        // A(0) = ln 10
        assert_abs_diff_eq!(gt.components[0].amplitude[0], std::f64::consts::LN_10, epsilon = 1e-12);
        assert_abs_diff_eq!(gt.components[0].if_hz[0], 16.0, epsilon = 1e-12);
        for &f in &gt.components[0].if_hz {
            assert!((14.0..=18.0).contains(&f));
        }
        // chirp rate −8·cos(4t)
        assert_abs_diff_eq!(gt.components[0].chirp_rate[0], -8.0, epsilon = 1e-12);
        let t = sig.time(300);
        assert_abs_diff_eq!(gt.components[0].chirp_rate[300], -8.0 * (4.0 * t).cos(), epsilon = 1e-12);
    }

    #[test]
    fn two_lfm_matches_definition() {
        let (sig, gt) = gen_two_lfm();
        assert_eq!(sig.len(), 128);
        assert_abs_diff_eq!(sig.samples.value(0).re, 2.0, epsilon = 1e-15);
        // second component IF at t = 0.5 (sample 64)
        assert_abs_diff_eq!(gt.components[1].if_hz[64], 29.0, epsilon = 1e-12);
        // IF gap at t = 0
        assert_abs_diff_eq!(gt.components[1].if_hz[0] - gt.components[0].if_hz[0], 10.0, epsilon = 1e-12);
    }

    type Gen = fn() -> (SampledSignal, GroundTruth);
    type Phase = Box<dyn Fn(f64) -> f64>;

    #[test]
    fn ground_truth_if_consistent_with_phase() {
        // central differences of the phase evaluators, h = 1e-6
        let h = 1e-6;
        let cases: [(Gen, Vec<Phase>); 3] = [
            (gen_linear_chirp, vec![Box::new(|t| 9.0 * t + 5.0 * t * t)]),
            (gen_cosine_if, vec![Box::new(|t: f64| 16.0 * t + 0.5 * (4.0 * t).cos())]),
            (gen_two_lfm, vec![
                Box::new(|t| 10.0 * t + 5.0 * t * t),
                Box::new(|t| 20.0 * t + 9.0 * t * t),
            ]),
        ];
        for (genf, phases) in cases {
            let (sig, gt) = genf();
            for (k, phase) in phases.iter().enumerate() {
                for m in (1..sig.len() - 1).step_by(13) {
                    let t = sig.time(m);
                    let fd = (phase(t + h) - phase(t - h)) / (2.0 * h);
                    let truth = gt.components[k].if_hz[m];
                    assert!((fd - truth).abs() / truth.abs() < 1e-6, "IF mismatch at t={t}");
                }
            }
        }
    }

    #[test]
    fn synth_matches_two_lfm_bytes() {
        let specs = [
            ComponentSpec {
                amplitude: Box::new(|_| 1.0),
                phase: Box::new(|t| 10.0 * t + 5.0 * t * t),
                phase_deriv: Box::new(|t| 10.0 + 10.0 * t),
                phase_deriv2: Box::new(|_| 10.0),
            },
            ComponentSpec {
                amplitude: Box::new(|_| 1.0),
                phase: Box::new(|t| 20.0 * t + 9.0 * t * t),
                phase_deriv: Box::new(|t| 20.0 + 18.0 * t),
                phase_deriv2: Box::new(|_| 18.0),
            },
        ];
        let (a, _) = synth_ahm(&specs, None, 128, 128.0, true).unwrap();
        let (b, _) = gen_two_lfm();
        match (&a.samples, &b.samples) {
            (Samples::Real(x), Samples::Real(y)) => {
                assert!(x.iter().zip(y).all(|(p, q)| p.to_bits() == q.to_bits()));
            }
            _ => panic!("expected real records"),
        }
    }

    #[test]
    fn synth_pure_cosine_and_trend() {
        let spec = ComponentSpec {
            amplitude: Box::new(|_| 1.0),
            phase: Box::new(|t| 5.0 * t),
            phase_deriv: Box::new(|_| 5.0),
            phase_deriv2: Box::new(|_| 0.0),
        };
        let (sig, _) = synth_ahm(&[spec], None, 64, 64.0, true).unwrap();
        for m in 0..64 {
            let t = m as f64 / 64.0;
            assert_abs_diff_eq!(
                sig.samples.value(m).re,
                (2.0 * std::f64::consts::PI * 5.0 * t).cos(),
                epsilon = 1e-12
            );
        }

        let trend = |_t: f64| 0.5;
        let (sig, gt) = synth_ahm(&[], Some(&trend), 64, 64.0, true).unwrap();
        assert!(gt.components.is_empty());
        assert!(sig.to_complex().iter().all(|v| v.re == 0.5 && v.im == 0.0));
    }

    #[test]
    fn synth_rejects_unordered_ifs() {
        let specs = [
            ComponentSpec {
                amplitude: Box::new(|_| 1.0),
                phase: Box::new(|t| 20.0 * t),
                phase_deriv: Box::new(|_| 20.0),
                phase_deriv2: Box::new(|_| 0.0),
            },
            ComponentSpec {
                amplitude: Box::new(|_| 1.0),
                phase: Box::new(|t| 10.0 * t),
                phase_deriv: Box::new(|_| 10.0),
                phase_deriv2: Box::new(|_| 0.0),
            },
        ];
        assert!(synth_ahm(&specs, None, 64, 64.0, true).is_err());
    }

    #[test]
    fn noise_energy_calibration() {
        let (sig, _) = gen_linear_chirp();
        for &snr in &[0.0, 10.0, 15.0, 30.0] {
            let noisy = add_noise(&sig, snr, 7).unwrap();
            let en: f64 = match (&noisy.samples, &sig.samples) {
                (Samples::Real(a), Samples::Real(b)) => {
                    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
                }
                _ => unreachable!(),
            };
            let realized = 10.0 * (sig.energy() / en).log10();
            assert!((realized - snr).abs() < 0.5, "realized {realized} vs requested {snr}");
            // the calibration is exact by construction
            assert_abs_diff_eq!(realized, snr, epsilon = 1e-9);
        }
    }

    #[test]
    fn noise_sentinel_and_determinism() {
        let (sig, _) = gen_two_lfm();
        let clean = add_noise(&sig, f64::INFINITY, 3).unwrap();
        match (&clean.samples, &sig.samples) {
            (Samples::Real(a), Samples::Real(b)) => assert_eq!(a, b),
            _ => unreachable!(),
        }
        let n1 = add_noise(&sig, 10.0, 42).unwrap();
        let n2 = add_noise(&sig, 10.0, 42).unwrap();
        match (&n1.samples, &n2.samples) {
            (Samples::Real(a), Samples::Real(b)) => {
                assert!(a.iter().zip(b).all(|(p, q)| p.to_bits() == q.to_bits()));
            }
            _ => unreachable!(),
        }
        let n3 = add_noise(&sig, 10.0, 43).unwrap();
        match (&n1.samples, &n3.samples) {
            (Samples::Real(a), Samples::Real(b)) => assert!(a != b),
            _ => unreachable!(),
        }
    }

    #[test]
    fn noise_rejects_zero_signal() {
        let sig = SampledSignal::new(Samples::Real(vec![0.0; 32]), 32.0, 0.0).unwrap();
        assert!(add_noise(&sig, 10.0, 0).is_err());
    }

    #[test]
    fn estimate_assumptions_exact_for_lfm() {
        let (sig, gt) = gen_two_lfm();
        let a = gt.estimate_assumptions(sig.dt());
        assert_abs_diff_eq!(a.eps1, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(a.eps2, 18.0, epsilon = 1e-12);
        assert_abs_diff_eq!(a.eps3, 0.0, epsilon = 1e-9);
        // gap 10 + 8t over the interior starts at t = 16/128
        assert_abs_diff_eq!(a.dprime, 11.0, epsilon = 1e-12);
    }

    #[test]
    fn signal_validation() {
        assert!(SampledSignal::new(Samples::Real(vec![1.0; 8]), 10.0, 0.0).is_err());
        assert!(SampledSignal::new(Samples::Real(vec![1.0; 16]), 0.0, 0.0).is_err());
        assert!(SampledSignal::new(Samples::Real(vec![1.0; 16]), 10.0, 0.0).is_ok());
    }
}
