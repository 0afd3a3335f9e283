//! File formats: signal/ground-truth/σ CSVs, ridge and component dumps,
//! bound reports, and JSON experiment reports.
//!
//! Floats are written with Rust's shortest round-trip formatting, so files
//! re-read bit-exactly and identical runs produce identical bytes.
//!
//! Formats:
//! - signal: `t,value` (real) or `t,re,im` (complex)
//! - ground truth: `t,k,A,if,cr,re,im` (re/im of A·e^{i2πφ}; k=0 is the trend)
//! - sigma: `t,sigma`
//! - ridges: `m,t,l,eta_hat,cluster_lo,cluster_hi` (empty interval on
//!   carried frames)
//! - components: `m,t,l,xhat_re,xhat_im,A_hat,eta_hat,r_tilde,flag`
//! - tf dump: `m,n,t,eta,re,im`
//! - bounds: `t,l,lambda0,pi0,err,Err,bd1,bd2,Bd1,Bd2,flags` with flags as a
//!   fixed-order pass string (see below); undefined bounds stay empty
//!
//! The flags string has eight slots, `1`/`0` for pass/fail and `-` for
//! not-evaluated: sep_sinusoidal, sep_chirp, theorem1_cond, theorem2_cond,
//! err_within_half, err_lc_within_half, ep1_contains, ep2_contains.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::bounds::BoundReport;
use crate::error::{Error, Result};
use crate::recovery::ComponentRecovery;
use crate::ridge::RidgeSet;
use crate::signal::{GroundTruth, SampledSignal, Samples};
use crate::stft::{SigmaSeries, SigmaSource, TFMatrix};

fn writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    Ok(csv::Writer::from_writer(BufWriter::new(File::create(path)?)))
}

fn parse_f64(path: &Path, field: &str) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|e| Error::Parse {
        path: path.display().to_string(),
        msg: format!("bad float '{field}': {e}"),
    })
}

pub fn write_signal_csv(path: &Path, signal: &SampledSignal) -> Result<()> {
    let mut w = writer(path)?;
    match &signal.samples {
        Samples::Real(v) => {
            w.write_record(["t", "value"])?;
            for (m, &x) in v.iter().enumerate() {
                w.write_record([signal.time(m).to_string(), x.to_string()])?;
            }
        }
        Samples::Complex(v) => {
            w.write_record(["t", "re", "im"])?;
            for (m, x) in v.iter().enumerate() {
                w.write_record([signal.time(m).to_string(), x.re.to_string(), x.im.to_string()])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Read a signal CSV; the header decides real vs complex. The sample rate is
/// inferred from the first two time stamps and checked for uniformity.
pub fn read_signal_csv(path: &Path) -> Result<SampledSignal> {
    let mut r = csv::Reader::from_reader(BufReader::new(File::open(path)?));
    let headers = r.headers()?.clone();
    let cols: Vec<&str> = headers.iter().collect();
    let complex = match cols.as_slice() {
        ["t", "value"] => false,
        ["t", "re", "im"] => true,
        other => {
            return Err(Error::Parse {
                path: path.display().to_string(),
                msg: format!("unexpected signal header {other:?}"),
            })
        }
    };
    let mut times = Vec::new();
    let mut real = Vec::new();
    let mut cplx = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        times.push(parse_f64(path, &rec[0])?);
        if complex {
            cplx.push(Complex64::new(parse_f64(path, &rec[1])?, parse_f64(path, &rec[2])?));
        } else {
            real.push(parse_f64(path, &rec[1])?);
        }
    }
    if times.len() < 2 {
        return Err(Error::Parse {
            path: path.display().to_string(),
            msg: "signal file needs at least two rows".into(),
        });
    }
    let dt = times[1] - times[0];
    if !(dt > 0.0) {
        return Err(Error::Parse {
            path: path.display().to_string(),
            msg: format!("non-increasing time stamps (dt = {dt})"),
        });
    }
    for (i, w) in times.windows(2).enumerate() {
        let step = w[1] - w[0];
        if ((step - dt) / dt).abs() > 1e-6 {
            return Err(Error::Parse {
                path: path.display().to_string(),
                msg: format!("non-uniform sampling at row {} (step {step} vs {dt})", i + 1),
            });
        }
    }
    let samples = if complex { Samples::Complex(cplx) } else { Samples::Real(real) };
    SampledSignal::new(samples, 1.0 / dt, times[0])
}

pub fn write_ground_truth_csv(path: &Path, signal: &SampledSignal, truth: &GroundTruth) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["t", "k", "A", "if", "cr", "re", "im"])?;
    for m in 0..signal.len() {
        let t = signal.time(m).to_string();
        if let Some(trend) = &truth.trend {
            w.write_record([
                t.clone(),
                "0".into(),
                trend[m].to_string(),
                "0".into(),
                "0".into(),
                trend[m].to_string(),
                "0".into(),
            ])?;
        }
        for (k, c) in truth.components.iter().enumerate() {
            let z = c.analytic(m);
            w.write_record([
                t.clone(),
                (k + 1).to_string(),
                c.amplitude[m].to_string(),
                c.if_hz[m].to_string(),
                c.chirp_rate[m].to_string(),
                z.re.to_string(),
                z.im.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_sigma_csv(path: &Path, times: &[f64], sigma: &SigmaSeries) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["t", "sigma"])?;
    for (t, s) in times.iter().zip(&sigma.values) {
        w.write_record([t.to_string(), s.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sigma_csv(path: &Path) -> Result<SigmaSeries> {
    let mut r = csv::Reader::from_reader(BufReader::new(File::open(path)?));
    let headers = r.headers()?.clone();
    let cols: Vec<&str> = headers.iter().collect();
    if cols != ["t", "sigma"] {
        return Err(Error::Parse {
            path: path.display().to_string(),
            msg: format!("unexpected sigma header {cols:?}"),
        });
    }
    let mut values = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        values.push(parse_f64(path, &rec[1])?);
    }
    SigmaSeries::from_values(values, SigmaSource::UserFile)
}

pub fn write_ridge_csv(path: &Path, times: &[f64], ridges: &RidgeSet) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["m", "t", "l", "eta_hat", "cluster_lo", "cluster_hi"])?;
    for m in 0..ridges.n_frames() {
        if ridges.trend {
            w.write_record([
                m.to_string(),
                times[m].to_string(),
                "0".into(),
                "0".into(),
                String::new(),
                String::new(),
            ])?;
        }
        for (l, comp) in ridges.components.iter().enumerate() {
            let (lo, hi) = match comp.clusters[m] {
                Some((lo, hi)) => (lo.to_string(), hi.to_string()),
                None => (String::new(), String::new()),
            };
            w.write_record([
                m.to_string(),
                times[m].to_string(),
                (l + 1).to_string(),
                comp.eta_hat[m].to_string(),
                lo,
                hi,
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_components_csv(path: &Path, times: &[f64], recovery: &ComponentRecovery) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["m", "t", "l", "xhat_re", "xhat_im", "A_hat", "eta_hat", "r_tilde", "flag"])?;
    for m in 0..times.len() {
        if let Some(trend) = &recovery.trend {
            w.write_record([
                m.to_string(),
                times[m].to_string(),
                "0".into(),
                trend.x_hat[m].re.to_string(),
                trend.x_hat[m].im.to_string(),
                trend.a_hat[m].to_string(),
                "0".into(),
                String::new(),
                "0".into(),
            ])?;
        }
        for (l, comp) in recovery.components.iter().enumerate() {
            w.write_record([
                m.to_string(),
                times[m].to_string(),
                (l + 1).to_string(),
                comp.x_hat[m].re.to_string(),
                comp.x_hat[m].im.to_string(),
                comp.a_hat[m].to_string(),
                comp.eta_hat[m].to_string(),
                comp.r_tilde.as_ref().map(|r| r[m].to_string()).unwrap_or_default(),
                (comp.flagged[m] as u8).to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_tf_csv(path: &Path, tf: &TFMatrix) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["m", "n", "t", "eta", "re", "im"])?;
    for m in 0..tf.n_frames {
        let row = tf.row(m);
        for (n, v) in row.iter().enumerate() {
            w.write_record([
                m.to_string(),
                n.to_string(),
                tf.times[m].to_string(),
                tf.grid.eta(n).to_string(),
                v.re.to_string(),
                v.im.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn flag_char(b: bool) -> char {
    if b {
        '1'
    } else {
        '0'
    }
}

pub fn write_bounds_csv(path: &Path, report: &BoundReport) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["t", "l", "lambda0", "pi0", "err", "Err", "bd1", "bd2", "Bd1", "Bd2", "flags"])?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for row in &report.rows {
        let f = &row.flags;
        let flags: String = [
            flag_char(f.sep_sinusoidal),
            flag_char(f.sep_chirp),
            flag_char(f.theorem1_cond),
            flag_char(f.theorem2_cond),
            flag_char(f.err_within_half),
            flag_char(f.err_lc_within_half),
            f.ep1_contains.map(flag_char).unwrap_or('-'),
            f.ep2_contains.map(flag_char).unwrap_or('-'),
        ]
        .iter()
        .collect();
        w.write_record([
            row.t.to_string(),
            row.component.to_string(),
            row.lambda0.to_string(),
            row.pi0.to_string(),
            row.err_sin.to_string(),
            row.err_lc.to_string(),
            opt(row.if_bound_sin),
            opt(row.rec_bound_sin),
            opt(row.if_bound_lc),
            opt(row.rec_bound_lc),
            flags,
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Interior error series of one figure experiment:
/// `t,err_si,err_lc_est[,err_lc_true]`.
pub fn write_figure_csv(path: &Path, report: &crate::eval::FigureReport) -> Result<()> {
    let mut w = writer(path)?;
    let with_true = report.err_lc_true.is_some();
    if with_true {
        w.write_record(["t", "err_si", "err_lc_est", "err_lc_true"])?;
    } else {
        w.write_record(["t", "err_si", "err_lc_est"])?;
    }
    for i in 0..report.t_interior.len() {
        let mut rec = vec![
            report.t_interior[i].to_string(),
            report.err_si[i].to_string(),
            report.err_lc_est[i].to_string(),
        ];
        if let Some(lt) = &report.err_lc_true {
            rec.push(lt[i].to_string());
        }
        w.write_record(rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Serialize any report to pretty JSON.
pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value)
        .map_err(|e| Error::config(format!("JSON serialization failed: {e}")))?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{gen_two_lfm, synth_ahm, ComponentSpec};

    fn tempdir() -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!("astft-io-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn signal_round_trip_real() {
        let (sig, _) = gen_two_lfm();
        let path = tempdir().join("sig_real.csv");
        write_signal_csv(&path, &sig).unwrap();
        let back = read_signal_csv(&path).unwrap();
        assert!(back.is_real());
        assert_eq!(back.len(), sig.len());
        assert!((back.sample_rate - 128.0).abs() < 1e-6);
        for m in 0..sig.len() {
            assert_eq!(back.samples.value(m), sig.samples.value(m));
        }
    }

    #[test]
    fn signal_round_trip_complex() {
        let spec = ComponentSpec {
            amplitude: Box::new(|_| 1.0),
            phase: Box::new(|t| 20.0 * t),
            phase_deriv: Box::new(|_| 20.0),
            phase_deriv2: Box::new(|_| 0.0),
        };
        let (sig, _) = synth_ahm(&[spec], None, 64, 64.0, false).unwrap();
        let path = tempdir().join("sig_cplx.csv");
        write_signal_csv(&path, &sig).unwrap();
        let back = read_signal_csv(&path).unwrap();
        assert!(!back.is_real());
        for m in 0..sig.len() {
            assert_eq!(back.samples.value(m), sig.samples.value(m));
        }
    }

    #[test]
    fn sigma_round_trip() {
        let s = SigmaSeries::constant(1.0 / 16.0, 32).unwrap();
        let times: Vec<f64> = (0..32).map(|m| m as f64 / 128.0).collect();
        let path = tempdir().join("sigma.csv");
        write_sigma_csv(&path, &times, &s).unwrap();
        let back = read_sigma_csv(&path).unwrap();
        assert_eq!(back.values, s.values);
        assert_eq!(back.source, SigmaSource::UserFile);
    }

    #[test]
    fn rejects_malformed_signal_file() {
        let path = tempdir().join("bad.csv");
        std::fs::write(&path, "a,b\n1,2\n").unwrap();
        assert!(read_signal_csv(&path).is_err());
        std::fs::write(&path, "t,value\n0.0,1.0\n0.5,1.0\n0.6,1.0\n").unwrap();
        assert!(read_signal_csv(&path).is_err(), "non-uniform sampling accepted");
    }
}
