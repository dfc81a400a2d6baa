//! Parameter fitting against measured points.

use nalgebra::{DMatrix, DVector};

use crate::electro::CrystalSpec;
use crate::error::{Error, Result};
use crate::units::format_number;

const MAX_ITERATIONS: usize = 200;
const MAX_HALVINGS: usize = 30;
const JACOBIAN_STEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    pub points: Vec<(f64, f64)>,
    pub x_label: String,
    pub y_label: String,
}

impl DataSet {
    pub fn new(points: Vec<(f64, f64)>) -> Self {
        DataSet {
            points,
            x_label: "x".into(),
            y_label: "y".into(),
        }
    }

    pub fn validate(&self, min_points: usize) -> Result<()> {
        if self.points.len() < min_points {
            return Err(Error::Fit {
                reason: format!("need at least {min_points} points, got {}", self.points.len()),
                residual_rms: f64::NAN,
            });
        }
        for (i, &(x, y)) in self.points.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::Fit {
                    reason: format!("point {i} is not finite"),
                    residual_rms: f64::NAN,
                });
            }
        }
        if self.points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Fit {
                reason: "x values must be strictly increasing".into(),
                residual_rms: f64::NAN,
            });
        }
        Ok(())
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.0)
    }

    pub fn ys(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }

    /// Parse `x,y` CSV text with a header row naming the two columns.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Calibration("empty data file".into()))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols.len() != 2 || cols.iter().any(|c| c.parse::<f64>().is_ok()) {
            return Err(Error::Calibration(format!(
                "line 1: expected a two-column header row, found `{header}`"
            )));
        }
        let mut points = Vec::new();
        for (n, line) in lines {
            let mut fields = line.split(',').map(str::trim);
            let (Some(x), Some(y), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(Error::Calibration(format!("line {n}: expected two columns")));
            };
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Calibration(format!("line {n}: `{s}` is not a number")))
            };
            points.push((parse(x)?, parse(y)?));
        }
        Ok(DataSet {
            points,
            x_label: cols[0].to_string(),
            y_label: cols[1].to_string(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("{},{}\n", self.x_label, self.y_label);
        for &(x, y) in &self.points {
            s.push_str(&format!("{},{}\n", format_number(x), format_number(y)));
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    Linear,
    SaturatingExponential,
}

impl FitModel {
    pub fn as_str(self) -> &'static str {
        match self {
            FitModel::Linear => "linear",
            FitModel::SaturatingExponential => "saturating_exponential",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: FitModel,
    pub params: Vec<(&'static str, f64)>,
    pub residual_rms: f64,
    pub r_squared: f64,
    pub iterations: usize,
}

impl FitResult {
    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(n, _)| *n == name).map(|p| p.1)
    }

    pub fn to_key_values(&self) -> String {
        let mut s = format!("model={}\n", self.model.as_str());
        for (k, v) in &self.params {
            s.push_str(&format!("{k}={}\n", format_number(*v)));
        }
        s.push_str(&format!("residual_rms={}\n", format_number(self.residual_rms)));
        s.push_str(&format!("r_squared={}\n", format_number(self.r_squared)));
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("name,value\n");
        for (k, v) in &self.params {
            s.push_str(&format!("{k},{}\n", format_number(*v)));
        }
        s.push_str(&format!("residual_rms,{}\n", format_number(self.residual_rms)));
        s.push_str(&format!("r_squared,{}\n", format_number(self.r_squared)));
        s
    }
}

fn goodness(data: &DataSet, model: impl Fn(f64) -> f64) -> (f64, f64) {
    let n = data.points.len() as f64;
    let mean = data.ys().sum::<f64>() / n;
    let (mut ss_res, mut ss_tot) = (0.0, 0.0);
    for &(x, y) in &data.points {
        ss_res += (y - model(x)).powi(2);
        ss_tot += (y - mean).powi(2);
    }
    let r2 = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).min(1.0)
    } else if ss_res == 0.0 {
        1.0
    } else {
        0.0
    };
    ((ss_res / n).sqrt(), r2)
}

/// Ordinary least squares `y = slope·x + intercept`.
pub fn fit_linear(data: &DataSet) -> Result<FitResult> {
    data.validate(2)?;
    let n = data.points.len() as f64;
    let mx = data.xs().sum::<f64>() / n;
    let my = data.ys().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y) in &data.points {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let (residual_rms, r_squared) = goodness(data, |x| slope * x + intercept);
    Ok(FitResult {
        model: FitModel::Linear,
        params: vec![("slope", slope), ("intercept", intercept)],
        residual_rms,
        r_squared,
        iterations: 0,
    })
}

pub fn saturating_exponential(x: f64, amplitude: f64, rate: f64, offset: f64) -> f64 {
    amplitude * (1.0 - (-(x - offset) / rate).exp())
}

fn residuals(data: &DataSet, p: &[f64; 3], out: &mut DVector<f64>) -> f64 {
    for (i, &(x, y)) in data.points.iter().enumerate() {
        out[i] = saturating_exponential(x, p[0], p[1], p[2]) - y;
    }
    let ss = out.norm_squared();
    if ss.is_finite() {
        ss
    } else {
        f64::INFINITY
    }
}

/// Damped Gauss–Newton fit of `y = a·(1 − exp(−(x − x0)/b))`.
pub fn fit_saturating_exponential(data: &DataSet) -> Result<FitResult> {
    data.validate(3)?;
    let n = data.points.len();
    let x_min = data.points[0].0;
    let x_max = data.points[n - 1].0;
    let mut p = [
        data.ys().fold(f64::NEG_INFINITY, f64::max),
        (x_max - x_min) / 3.0,
        x_min,
    ];
    let mut r = DVector::zeros(n);
    let mut trial_r = DVector::zeros(n);
    let mut cost = residuals(data, &p, &mut r);
    let scale = data.ys().map(f64::abs).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut jac = DMatrix::zeros(n, 3);
    let mut iterations = 0;
    let mut converged = cost == 0.0;

    while !converged && iterations < MAX_ITERATIONS {
        iterations += 1;
        for k in 0..3 {
            let h = JACOBIAN_STEP * p[k].abs().max(1.0);
            let (mut hi, mut lo) = (p, p);
            hi[k] += h;
            lo[k] -= h;
            for (i, &(x, _)) in data.points.iter().enumerate() {
                jac[(i, k)] = (saturating_exponential(x, hi[0], hi[1], hi[2])
                    - saturating_exponential(x, lo[0], lo[1], lo[2]))
                    / (2.0 * h);
            }
        }
        let step = jac
            .clone()
            .svd(true, true)
            .solve(&(-&r), 1e-14)
            .map_err(|e| Error::Fit {
                reason: format!("linear solve failed: {e}"),
                residual_rms: (cost / n as f64).sqrt(),
            })?;

        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let trial = [
                p[0] + lambda * step[0],
                p[1] + lambda * step[1],
                p[2] + lambda * step[2],
            ];
            let trial_cost = residuals(data, &trial, &mut trial_r);
            if trial_cost <= cost {
                let rel_step = (0..3)
                    .map(|k| (trial[k] - p[k]).abs() / p[k].abs().max(1e-300))
                    .fold(0.0, f64::max);
                let small_gain = cost - trial_cost <= 1e-15 * cost;
                p = trial;
                std::mem::swap(&mut r, &mut trial_r);
                cost = trial_cost;
                accepted = true;
                if rel_step < 1e-13 || small_gain || cost.sqrt() <= 1e-13 * scale {
                    converged = true;
                }
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            // no descent direction left at working precision
            converged = true;
        }
    }
    let residual_rms = (cost / n as f64).sqrt();
    if !converged {
        return Err(Error::Fit {
            reason: format!("no convergence after {MAX_ITERATIONS} iterations"),
            residual_rms,
        });
    }
    let (residual_rms, r_squared) = goodness(data, |x| saturating_exponential(x, p[0], p[1], p[2]));
    Ok(FitResult {
        model: FitModel::SaturatingExponential,
        params: vec![("amplitude", p[0]), ("rate", p[1]), ("offset", p[2])],
        residual_rms,
        r_squared,
        iterations,
    })
}

/// Leakage resistance that makes `v_max` the steady state of the peak source current.
pub fn infer_leak_resistance(v_max: f64, crystal: &CrystalSpec, dtdt_peak: f64) -> Result<f64> {
    if !(dtdt_peak > 0.0) || !dtdt_peak.is_finite() {
        return Err(Error::Calibration(format!(
            "peak dT/dt must be positive, got {dtdt_peak}"
        )));
    }
    if !(v_max >= 0.0) || !v_max.is_finite() {
        return Err(Error::Calibration(format!("v_max must be non-negative, got {v_max}")));
    }
    crystal.validate()?;
    Ok(v_max / (crystal.charge_per_kelvin() * dtdt_peak))
}

/// Coefficient `k` of `x = k·V²` through one measured point.
pub fn calibrate_actuator(displacement: f64, voltage: f64) -> Result<f64> {
    if voltage == 0.0 || !voltage.is_finite() || !displacement.is_finite() {
        return Err(Error::Calibration(format!(
            "need a finite non-zero voltage and finite displacement, got ({displacement}, {voltage})"
        )));
    }
    Ok(displacement / (voltage * voltage))
}
