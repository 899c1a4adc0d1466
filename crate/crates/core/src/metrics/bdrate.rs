//! Bjøntegaard delta rate between two RD curves.
//!
//! `log10(rate)` is modelled as a function of quality, by a cubic
//! least-squares fit (four or more points) or a monotone piecewise-cubic
//! Hermite interpolant (two or three points). The gap between the two
//! models is averaged over the common quality interval with the
//! trapezoidal rule.

use log::warn;

use super::rd::RdCurve;
use crate::error::{Error, Result};

/// Trapezoidal intervals used for the integration.
pub const INTEGRATION_STEPS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RateModel {
    CubicFit,
    /// Fewer than four points on at least one curve.
    PiecewiseCubic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BdRate {
    /// Average rate change of `test` relative to `anchor`, in percent.
    /// Negative means the test curve needs less rate.
    pub percent: f64,
    pub model: RateModel,
    pub quality_range: (f64, f64),
}

impl BdRate {
    pub fn is_fallback(&self) -> bool {
        self.model == RateModel::PiecewiseCubic
    }
}

enum LogRateModel {
    Cubic { coeffs: [f64; 4], center: f64, scale: f64 },
    Pchip { x: Vec<f64>, y: Vec<f64>, d: Vec<f64> },
}

impl LogRateModel {
    fn eval(&self, q: f64) -> f64 {
        match self {
            LogRateModel::Cubic { coeffs, center, scale } => {
                let u = (q - center) / scale;
                coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c)
            }
            LogRateModel::Pchip { x, y, d } => {
                let k = match x.iter().rposition(|&xi| xi <= q) {
                    Some(k) => k.min(x.len() - 2),
                    None => 0,
                };
                let h = x[k + 1] - x[k];
                let t = (q - x[k]) / h;
                let (t2, t3) = (t * t, t * t * t);
                (2.0 * t3 - 3.0 * t2 + 1.0) * y[k]
                    + (t3 - 2.0 * t2 + t) * h * d[k]
                    + (-2.0 * t3 + 3.0 * t2) * y[k + 1]
                    + (t3 - t2) * h * d[k + 1]
            }
        }
    }
}

/// Solves the 4x4 system `a x = b` by Gaussian elimination with partial pivoting.
fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let pivot = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let s: f64 = (row + 1..4).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

fn cubic_fit(q: &[f64], y: &[f64]) -> Result<LogRateModel> {
    let n = q.len() as f64;
    let center = q.iter().sum::<f64>() / n;
    let scale = q.iter().map(|v| (v - center).abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut ata = [[0.0; 4]; 4];
    let mut aty = [0.0; 4];
    for (&qi, &yi) in q.iter().zip(y) {
        let u = (qi - center) / scale;
        let pows = [1.0, u, u * u, u * u * u];
        for r in 0..4 {
            aty[r] += pows[r] * yi;
            for c in 0..4 {
                ata[r][c] += pows[r] * pows[c];
            }
        }
    }
    let coeffs = solve4(ata, aty)
        .ok_or_else(|| Error::BdRate("cubic fit is singular; need four distinct quality values".into()))?;
    Ok(LogRateModel::Cubic { coeffs, center, scale })
}

fn endpoint_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

fn pchip(q: &[f64], y: &[f64]) -> Result<LogRateModel> {
    let mut pairs: Vec<(f64, f64)> = q.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::BdRate("duplicate quality values".into()));
    }
    let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    let mut d = vec![0.0; n];
    if n == 2 {
        d = vec![delta[0]; 2];
    } else {
        for k in 1..n - 1 {
            if delta[k - 1] * delta[k] > 0.0 {
                let w1 = 2.0 * h[k] + h[k - 1];
                let w2 = h[k] + 2.0 * h[k - 1];
                d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
            }
        }
        d[0] = endpoint_slope(h[0], h[1], delta[0], delta[1]);
        d[n - 1] = endpoint_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }
    Ok(LogRateModel::Pchip { x, y, d })
}

fn model_for(curve: &RdCurve) -> Result<(LogRateModel, RateModel, f64, f64)> {
    if curve.len() < 2 {
        return Err(Error::BdRate(format!("{}: need at least 2 points, got {}", curve.label(), curve.len())));
    }
    if curve.points().iter().any(|p| !p.quality.is_finite()) {
        return Err(Error::BdRate(format!("{}: infinite quality cannot be fitted", curve.label())));
    }
    let q: Vec<f64> = curve.points().iter().map(|p| p.quality).collect();
    let y: Vec<f64> = curve.points().iter().map(|p| p.rate.log10()).collect();
    let lo = q.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if curve.len() >= 4 {
        Ok((cubic_fit(&q, &y)?, RateModel::CubicFit, lo, hi))
    } else {
        Ok((pchip(&q, &y)?, RateModel::PiecewiseCubic, lo, hi))
    }
}

/// BD-rate of `test` against `anchor`, in percent.
pub fn bd_rate(anchor: &RdCurve, test: &RdCurve) -> Result<BdRate> {
    let (ma, ka, alo, ahi) = model_for(anchor)?;
    let (mt, kt, tlo, thi) = model_for(test)?;
    let (lo, hi) = (alo.max(tlo), ahi.min(thi));
    if !(lo < hi) {
        return Err(Error::BdRate(format!(
            "no quality overlap between {} [{alo}, {ahi}] and {} [{tlo}, {thi}]",
            anchor.label(),
            test.label()
        )));
    }
    let model = if ka == RateModel::CubicFit && kt == RateModel::CubicFit {
        RateModel::CubicFit
    } else {
        warn!("BD-rate {} vs {}: fewer than 4 points, using piecewise-cubic interpolation", anchor.label(), test.label());
        RateModel::PiecewiseCubic
    };
    let step = (hi - lo) / INTEGRATION_STEPS as f64;
    let diff = |q: f64| mt.eval(q) - ma.eval(q);
    let mut integral = 0.5 * (diff(lo) + diff(hi));
    for i in 1..INTEGRATION_STEPS {
        integral += diff(lo + step * i as f64);
    }
    integral *= step;
    let mean = integral / (hi - lo);
    Ok(BdRate { percent: (10f64.powf(mean) - 1.0) * 100.0, model, quality_range: (lo, hi) })
}
