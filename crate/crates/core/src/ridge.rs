//! Ridge extraction: per-frame thresholding of |V| into candidate sets,
//! clustering into contiguous bin runs, and tracking of the runs across
//! frames into per-component frequency estimates η̂_ℓ(t_m).
//!
//! Tracking is greedy: it seeds at the frame of maximal total energy, where
//! components are best expressed, and matches clusters to the previous
//! frame's estimates by nearest peak frequency in both directions. The model
//! assumes non-crossing IFs, so greedy matching cannot swap labels; frames
//! with missing clusters carry the previous estimate forward and are flagged.

use crate::error::{Error, Result};
use crate::stft::{SigmaSeries, SigmaSource, TFMatrix};

/// How the per-frame threshold ε̃₁ is chosen: a fixed magnitude, or a
/// fraction ρ of the frame's maximal |V|.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum ThresholdPolicy {
    Absolute(f64),
    Relative(f64),
}

impl ThresholdPolicy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ThresholdPolicy::Absolute(v) if v > 0.0 => Ok(()),
            ThresholdPolicy::Relative(r) if r > 0.0 && r < 1.0 => Ok(()),
            _ => Err(Error::invalid("threshold must be positive (relative: in (0,1))")),
        }
    }

    /// Resolve to the ε̃₁ value for a frame with the given max |V|.
    pub fn resolve(&self, row_max: f64) -> f64 {
        match *self {
            ThresholdPolicy::Absolute(v) => v,
            ThresholdPolicy::Relative(r) => r * row_max,
        }
    }
}

impl Default for ThresholdPolicy {
    fn default() -> Self {
        ThresholdPolicy::Relative(0.3)
    }
}

/// Inclusive bin interval of one cluster.
pub type BinInterval = (usize, usize);

/// Per-component ridge: the argmax frequency per frame plus the cluster it
/// came from (None on frames where the estimate was carried forward).
#[derive(Debug, Clone)]
pub struct ComponentRidge {
    pub bins: Vec<usize>,
    pub eta_hat: Vec<f64>,
    pub clusters: Vec<Option<BinInterval>>,
}

/// Ridges for all tracked components (ℓ = 1..K, ordered by frequency), plus
/// the trend ridge η̂₀ ≡ 0 when one was declared.
#[derive(Debug, Clone)]
pub struct RidgeSet {
    pub components: Vec<ComponentRidge>,
    /// Trend declared: η̂₀ ≡ 0, recovered from the DC column.
    pub trend: bool,
    /// Number of clusters detected per frame.
    pub k_detected: Vec<usize>,
    /// Frames where at least one component had no cluster to match.
    pub flagged: Vec<bool>,
    /// Frame the tracker was seeded at (maximal total energy).
    pub seed_frame: usize,
}

impl RidgeSet {
    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn n_frames(&self) -> usize {
        self.flagged.len()
    }
}

/// The thresholded support set 𝒢_t = {n : |V(t, η_n)| > ε̃₁} of one frame.
/// An empty support is allowed; the frame is flagged downstream, not fatal.
pub fn threshold_support(abs_row: &[f64], policy: &ThresholdPolicy) -> Result<Vec<usize>> {
    policy.validate()?;
    if abs_row.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("transform row contains non-finite values"));
    }
    let max = abs_row.iter().cloned().fold(0.0f64, f64::max);
    let eps = policy.resolve(max);
    Ok(abs_row
        .iter()
        .enumerate()
        .filter_map(|(i, &v)| (v > eps).then_some(i))
        .collect())
}

/// Maximal contiguous runs of the support set, ordered by frequency.
pub fn cluster_frame(support: &[usize]) -> Vec<BinInterval> {
    let mut runs = Vec::new();
    let mut iter = support.iter();
    let Some(&first) = iter.next() else {
        return runs;
    };
    let (mut lo, mut hi) = (first, first);
    for &b in iter {
        if b == hi + 1 {
            hi = b;
        } else {
            runs.push((lo, hi));
            lo = b;
            hi = b;
        }
    }
    runs.push((lo, hi));
    runs
}

/// Requested component count for the tracker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum KExpected {
    /// Use the cluster count at the seed frame.
    Auto,
    Fixed(usize),
}

fn peak_of(abs_row: &[f64], (lo, hi): BinInterval) -> usize {
    // first maximum wins: ties break to the lower-frequency bin
    let mut best = lo;
    for b in lo + 1..=hi {
        if abs_row[b] > abs_row[best] {
            best = b;
        }
    }
    best
}

/// Track threshold clusters across frames into per-component ridges.
///
/// When a trend is declared, the cluster nearest 0 Hz at each frame is
/// reserved for it (its own ridge is pinned at η̂₀ = 0) and excluded from
/// component matching.
pub fn track_ridges(
    tf: &TFMatrix,
    policy: &ThresholdPolicy,
    k_expected: KExpected,
    trend: bool,
) -> Result<RidgeSet> {
    policy.validate()?;
    let n = tf.n_frames;
    let abs_rows: Vec<Vec<f64>> = (0..n).map(|m| tf.abs_row(m)).collect();

    // clusters and their peak bins per frame
    let mut frame_clusters: Vec<Vec<BinInterval>> = Vec::with_capacity(n);
    for row in &abs_rows {
        let support = threshold_support(row, policy)?;
        let mut runs = cluster_frame(&support);
        if trend && !runs.is_empty() {
            runs.remove(0);
        }
        frame_clusters.push(runs);
    }

    let energy: Vec<f64> = abs_rows.iter().map(|r| r.iter().map(|v| v * v).sum()).collect();
    let max_energy_frame = energy
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite energies"))
        .map(|(i, _)| i)
        .expect("non-empty transform");
    let k = match k_expected {
        KExpected::Auto => frame_clusters[max_energy_frame].len(),
        KExpected::Fixed(k) => k,
    };
    if k == 0 {
        return Err(Error::invalid("no components to track (empty seed frame)"));
    }
    // seed at the most energetic frame that actually expresses k clusters;
    // under noise the global maximum can land on a frame where components
    // merge, which cannot anchor the matcher
    let seed = (0..n)
        .filter(|&m| frame_clusters[m].len() >= k)
        .max_by(|&a, &b| energy[a].partial_cmp(&energy[b]).expect("finite energies"))
        .ok_or_else(|| {
            Error::invalid(format!("no frame shows the {k} clusters expected; cannot seed tracking"))
        })?;
    let seed_runs = &frame_clusters[seed];

    let mut comps: Vec<ComponentRidge> = (0..k)
        .map(|_| ComponentRidge {
            bins: vec![0; n],
            eta_hat: vec![0.0; n],
            clusters: vec![None; n],
        })
        .collect();
    let mut flagged = vec![false; n];
    let k_detected: Vec<usize> = frame_clusters.iter().map(|c| c.len()).collect();

    // seed assignment: the k strongest clusters, in frequency order
    let mut order: Vec<usize> = (0..seed_runs.len()).collect();
    order.sort_by(|&a, &b| {
        let pa = abs_rows[seed][peak_of(&abs_rows[seed], seed_runs[a])];
        let pb = abs_rows[seed][peak_of(&abs_rows[seed], seed_runs[b])];
        pb.partial_cmp(&pa).expect("finite magnitudes")
    });
    let mut chosen: Vec<usize> = order[..k].to_vec();
    chosen.sort_unstable();
    for (l, &ci) in chosen.iter().enumerate() {
        let run = seed_runs[ci];
        let bin = peak_of(&abs_rows[seed], run);
        comps[l].bins[seed] = bin;
        comps[l].eta_hat[seed] = tf.grid.eta(bin);
        comps[l].clusters[seed] = Some(run);
    }

    // march outward from the seed in both directions
    let forward: Vec<usize> = (seed + 1..n).collect();
    let backward: Vec<usize> = (0..seed).rev().collect();
    for pass in [forward, backward] {
        let mut prev: Vec<f64> = (0..k).map(|l| comps[l].eta_hat[seed]).collect();
        for m in pass {
            let runs = &frame_clusters[m];
            let peaks: Vec<(usize, f64)> = runs
                .iter()
                .map(|&r| {
                    let b = peak_of(&abs_rows[m], r);
                    (b, tf.grid.eta(b))
                })
                .collect();
            // greedy 1-1 matching by |peak − previous η̂|
            let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(peaks.len() * k);
            for (ci, &(_, eta)) in peaks.iter().enumerate() {
                for (l, &p) in prev.iter().enumerate() {
                    pairs.push(((eta - p).abs(), ci, l));
                }
            }
            pairs.sort_by(|a, b| {
                a.0.partial_cmp(&b.0).expect("finite distances").then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2))
            });
            let mut used_cluster = vec![false; peaks.len()];
            let mut assigned: Vec<Option<usize>> = vec![None; k];
            let mut count = 0;
            for (_, ci, l) in pairs {
                if used_cluster[ci] || assigned[l].is_some() {
                    continue;
                }
                used_cluster[ci] = true;
                assigned[l] = Some(ci);
                count += 1;
                if count == k {
                    break;
                }
            }
            for l in 0..k {
                match assigned[l] {
                    Some(ci) => {
                        let (bin, eta) = peaks[ci];
                        comps[l].bins[m] = bin;
                        comps[l].eta_hat[m] = eta;
                        comps[l].clusters[m] = Some(runs[ci]);
                        prev[l] = eta;
                    }
                    None => {
                        // carry the previous estimate and flag the frame
                        comps[l].bins[m] = tf.grid.nearest_bin(prev[l]);
                        comps[l].eta_hat[m] = prev[l];
                        comps[l].clusters[m] = None;
                        flagged[m] = true;
                    }
                }
            }
        }
    }

    Ok(RidgeSet { components: comps, trend, k_detected, flagged, seed_frame: seed })
}

/// σ₁(t) = 2α / min_k(φ′_k(t) − φ′_{k−1}(t)): the smallest width meeting the
/// sinusoidal-model separation condition, per frame.
pub fn sigma1_rule(if_series: &[Vec<f64>], alpha: f64) -> Result<SigmaSeries> {
    if if_series.len() < 2 {
        return Err(Error::invalid("sigma1 rule needs at least two components"));
    }
    let n = if_series[0].len();
    let mut values = Vec::with_capacity(n);
    for m in 0..n {
        let mut min_gap = f64::INFINITY;
        for w in if_series.windows(2) {
            let gap = w[1][m] - w[0][m];
            if !(gap > 0.0) {
                return Err(Error::invalid(format!("nonpositive IF gap {gap} at sample {m}")));
            }
            min_gap = min_gap.min(gap);
        }
        values.push(2.0 * alpha / min_gap);
    }
    SigmaSeries::from_values(values, SigmaSource::Sigma1Rule)
}
