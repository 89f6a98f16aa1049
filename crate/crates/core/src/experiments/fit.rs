//! Peak times, decay constants, threshold times and front velocities.

use serde::{Deserialize, Serialize};

use super::{ResourceSeries, SpreadGrid};
use crate::{Error, Result};

/// Ordinary least squares `y = intercept + slope·x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Fit(format!("{} points for a line", x.len().min(y.len()))));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Ok(LinearFit { slope, intercept, r2 })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeakFit {
    pub tau_m: f64,
    pub value: f64,
}

/// Largest interior maximum, refined by a parabola through it and its two
/// neighbours. The maximum must exceed three standard errors.
pub fn extract_peak_time(times: &[f64], mean: &[f64], stderr: &[f64]) -> Result<PeakFit> {
    if mean.len() < 3 || times.len() != mean.len() || stderr.len() != mean.len() {
        return Err(Error::Fit("need at least three aligned samples".into()));
    }
    let k = argmax(mean);
    if k == 0 || k + 1 == mean.len() {
        return Err(Error::Fit(format!("maximum at the edge of the series (t = {})", times[k])));
    }
    if mean[k] <= 3.0 * stderr[k] {
        return Err(Error::Fit(format!("peak {} is within three standard errors of zero", mean[k])));
    }
    let (a, b, c) = (mean[k - 1], mean[k], mean[k + 1]);
    let curv = a - 2.0 * b + c;
    if curv >= 0.0 {
        return Ok(PeakFit { tau_m: times[k], value: b });
    }
    let offset = 0.5 * (a - c) / curv;
    let h = 0.5 * (times[k + 1] - times[k - 1]);
    Ok(PeakFit { tau_m: times[k] + offset * h, value: b - 0.25 * (a - c) * offset })
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

/// Number of local maxima whose topographic prominence exceeds three
/// standard errors.
pub fn significant_peaks(mean: &[f64], stderr: &[f64]) -> usize {
    let n = mean.len();
    let mut count = 0;
    for k in 1..n.saturating_sub(1) {
        if !(mean[k] > mean[k - 1] && mean[k] >= mean[k + 1]) {
            continue;
        }
        // Lowest point on each side before the series climbs above the peak.
        let side_min = |it: &mut dyn Iterator<Item = &f64>| {
            let mut lo = mean[k];
            for &v in it {
                if v > mean[k] {
                    break;
                }
                lo = lo.min(v);
            }
            lo
        };
        let left = side_min(&mut mean[..k].iter().rev());
        let right = side_min(&mut mean[k + 1..].iter());
        if mean[k] - left.max(right) > 3.0 * stderr[k] {
            count += 1;
        }
    }
    count
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub tau_d: f64,
    pub r2: f64,
    /// First and last time of the fitting window.
    pub window: (f64, f64),
    pub points: usize,
}

/// Exponential decay constant from `log M` against `t`, fitted from the first
/// time after the maximum where `M` drops below half of it to the last time
/// `M` stays above `max(1e-6, 10·stderr)`.
pub fn fit_decay(times: &[f64], mean: &[f64], stderr: &[f64]) -> Result<DecayFit> {
    if times.len() != mean.len() || stderr.len() != mean.len() || mean.is_empty() {
        return Err(Error::Fit("misaligned series".into()));
    }
    let kp = argmax(mean);
    let peak = mean[kp];
    let Some(first) = (kp..mean.len()).find(|&k| mean[k] < 0.5 * peak) else {
        return Err(Error::Fit("series never falls below half its maximum".into()));
    };
    let Some(last) = (first..mean.len()).rev().find(|&k| mean[k] > (10.0 * stderr[k]).max(1e-6)) else {
        return Err(Error::Fit("no post-peak point above the noise floor".into()));
    };
    let (x, y): (Vec<f64>, Vec<f64>) =
        (first..=last).filter(|&k| mean[k] > 0.0).map(|k| (times[k], mean[k].ln())).unzip();
    if x.len() < 5 {
        return Err(Error::Fit(format!("{} points in the decay window (need 5)", x.len())));
    }
    let line = linear_fit(&x, &y)?;
    if line.slope >= 0.0 {
        return Err(Error::Fit("series does not decay inside the window".into()));
    }
    Ok(DecayFit { tau_d: -1.0 / line.slope, r2: line.r2, window: (times[first], times[last]), points: x.len() })
}

/// Time of the last downward crossing of `theta`, linearly interpolated.
pub fn threshold_time(times: &[f64], mean: &[f64], theta: f64) -> Result<f64> {
    if times.len() != mean.len() || mean.is_empty() {
        return Err(Error::Fit("misaligned series".into()));
    }
    let Some(k) = mean.iter().rposition(|&v| v >= theta) else {
        return Err(Error::Censored(format!("series never reaches θ = {theta}")));
    };
    if k + 1 == mean.len() {
        return Err(Error::Censored(format!("series still at or above θ = {theta} at the final time {}", times[k])));
    }
    let (a, b) = (mean[k], mean[k + 1]);
    Ok(times[k] + (a - theta) / (a - b) * (times[k + 1] - times[k]))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontFit {
    /// Velocity from first-arrival times.
    pub v_front: f64,
    pub intercept: f64,
    pub r2: f64,
    pub arrivals: usize,
    /// Velocity from the times of maximal resource, when enough positions
    /// have an interior maximum.
    pub v_peak: Option<f64>,
    pub peak_intercept: Option<f64>,
    pub peak_r2: Option<f64>,
}

/// Positions whose mean is at or below `level` at the first time but rises
/// above it later, with the arrival time.
fn arrivals(grid: &SpreadGrid, level: f64) -> Vec<(usize, f64)> {
    grid.mean
        .iter()
        .enumerate()
        .filter_map(|(i, row)| {
            let k = row.iter().position(|&v| v > level)?;
            (k > 0).then(|| (i, grid.times[k] as f64))
        })
        .collect()
}

/// Front velocity from a line through first-arrival time against `|x_r|`,
/// plus the analogous fit for the time of the maximum. Positions already
/// above `level` at the first time are left out.
pub fn front_velocity(grid: &SpreadGrid, level: f64) -> Result<FrontFit> {
    let arr = arrivals(grid, level);
    if arr.len() < 4 {
        return Err(Error::Fit(format!("{} positions with a first arrival (need 4)", arr.len())));
    }
    let x: Vec<f64> = arr.iter().map(|&(i, _)| grid.x_r[i].abs()).collect();
    let t: Vec<f64> = arr.iter().map(|&(_, t)| t).collect();
    let line = linear_fit(&x, &t)?;
    if line.slope <= 0.0 {
        return Err(Error::Fit("arrival times do not grow with distance".into()));
    }
    let (mut px, mut pt) = (Vec::new(), Vec::new());
    for &(i, _) in &arr {
        let k = argmax(&grid.mean[i]);
        if k > 0 && k + 1 < grid.times.len() {
            px.push(grid.x_r[i].abs());
            pt.push(grid.times[k] as f64);
        }
    }
    let peak = if px.len() >= 4 { linear_fit(&px, &pt).ok().filter(|l| l.slope > 0.0) } else { None };
    Ok(FrontFit {
        v_front: 1.0 / line.slope,
        intercept: line.intercept,
        r2: line.r2,
        arrivals: arr.len(),
        v_peak: peak.map(|l| 1.0 / l.slope),
        peak_intercept: peak.map(|l| l.intercept),
        peak_r2: peak.map(|l| l.r2),
    })
}

/// Line through `ln(max_t M)` against `|x_r|` over the positions that start
/// at or below `level`; the slope is minus the attenuation rate.
pub fn peak_attenuation(grid: &SpreadGrid, level: f64) -> Result<LinearFit> {
    let (x, y): (Vec<f64>, Vec<f64>) = arrivals(grid, level)
        .into_iter()
        .map(|(i, _)| (grid.x_r[i].abs(), grid.mean[i].iter().cloned().fold(0.0, f64::max)))
        .filter(|&(_, p)| p > 0.0)
        .map(|(x, p)| (x, p.ln()))
        .unzip();
    if x.len() < 3 {
        return Err(Error::Fit(format!("{} positions with a peak (need 3)", x.len())));
    }
    linear_fit(&x, &y)
}

/// Extracted timescales for one growth curve or one spreading grid. Failed
/// extractions leave their field empty and add a note.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subsystem_size: Option<usize>,
    pub tau_m: Option<f64>,
    pub peak_value: Option<f64>,
    pub tau_d: Option<f64>,
    pub tau_d_r2: Option<f64>,
    pub decay_window: Option<(f64, f64)>,
    pub theta: Option<f64>,
    pub tau_theta: Option<f64>,
    pub v_front: Option<f64>,
    pub front_r2: Option<f64>,
    pub v_peak: Option<f64>,
    pub peak_r2: Option<f64>,
    pub notes: Vec<String>,
}

/// Runs every growth-curve extraction on each subsystem size.
pub fn fit_growth(series: &ResourceSeries, theta: f64) -> Vec<FitResult> {
    let times: Vec<f64> = series.times.iter().map(|&t| t as f64).collect();
    series
        .subsystem_sizes
        .iter()
        .enumerate()
        .map(|(i, &size)| {
            let (m, e) = (&series.mean[i], &series.stderr[i]);
            let mut r = FitResult { subsystem_size: Some(size), theta: Some(theta), ..Default::default() };
            match extract_peak_time(&times, m, e) {
                Ok(p) => {
                    r.tau_m = Some(p.tau_m);
                    r.peak_value = Some(p.value);
                }
                Err(err) => r.notes.push(format!("tau_m: {err}")),
            }
            match fit_decay(&times, m, e) {
                Ok(d) => {
                    r.tau_d = Some(d.tau_d);
                    r.tau_d_r2 = Some(d.r2);
                    r.decay_window = Some(d.window);
                }
                Err(err) => r.notes.push(format!("tau_d: {err}")),
            }
            match threshold_time(&times, m, theta) {
                Ok(t) => r.tau_theta = Some(t),
                Err(err) => r.notes.push(format!("tau_theta: {err}")),
            }
            r
        })
        .collect()
}

/// Front velocities of a spreading grid at arrival level `level`.
pub fn fit_spread(grid: &SpreadGrid, level: f64) -> FitResult {
    let mut r = FitResult { subsystem_size: Some(grid.subsystem_size), ..Default::default() };
    match front_velocity(grid, level) {
        Ok(f) => {
            r.v_front = Some(f.v_front);
            r.front_r2 = Some(f.r2);
            r.v_peak = f.v_peak;
            r.peak_r2 = f.peak_r2;
            if f.v_peak.is_none() {
                r.notes.push("v_peak: too few interior maxima".into());
            }
        }
        Err(err) => r.notes.push(format!("v_front: {err}")),
    }
    r
}
