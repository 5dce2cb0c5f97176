//! Power-law and stretched-exponential models on rank-size data, and
//! detection of the large-rank break.
//!
//! All residuals are measured in log10 space over the same in-window points,
//! so the two models' `residual_sum` values are directly comparable.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::ranking::RankedSeries;
use crate::segmentation::MarkClass;

/// Inclusive rank interval `[r_min, r_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitWindow {
    pub r_min: usize,
    pub r_max: usize,
}

/// Curvature below this rank is excluded from fits by default.
pub const DEFAULT_R_MIN: usize = 5;

impl FitWindow {
    pub fn new(r_min: usize, r_max: usize) -> Result<Self> {
        if r_min == 0 {
            return Err(Error::InvalidWindow {
                r_min,
                r_max,
                reason: "ranks start at 1",
            });
        }
        if r_min >= r_max {
            return Err(Error::InvalidWindow {
                r_min,
                r_max,
                reason: "r_min must be below r_max",
            });
        }
        Ok(FitWindow { r_min, r_max })
    }

    /// Per-class defaults: wide windows for the frequent marks, narrow ones for
    /// the rarer marks.
    pub fn default_for(class: MarkClass) -> FitWindow {
        let r_max = match class {
            MarkClass::Dot | MarkClass::Comma | MarkClass::UnitOfThought => 500,
            MarkClass::Colon | MarkClass::Semicolon => 50,
            MarkClass::Exclamation | MarkClass::Question => 100,
        };
        FitWindow {
            r_min: DEFAULT_R_MIN,
            r_max,
        }
    }

    pub fn zipf_default() -> FitWindow {
        FitWindow {
            r_min: 10,
            r_max: 1000,
        }
    }

    /// Cap `r_max` at the series length and require at least three ranks.
    pub fn resolve(self, n_ranks: usize) -> Result<FitWindow> {
        let r_max = self.r_max.min(n_ranks);
        let available = (r_max + 1).saturating_sub(self.r_min);
        if available < 3 {
            return Err(Error::TooFewPoints(available));
        }
        Ok(FitWindow {
            r_min: self.r_min,
            r_max,
        })
    }

    pub fn len(&self) -> usize {
        self.r_max + 1 - self.r_min
    }

    pub fn is_empty(&self) -> bool {
        self.r_max < self.r_min
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Line {
    slope: f64,
    intercept: f64,
    /// Sum of squared residuals.
    ssr: f64,
    /// Total sum of squares of the response.
    sst: f64,
}

/// Ordinary least squares on centered data.
fn ols(xs: &[f64], ys: &[f64]) -> Line {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ssr = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    Line {
        slope,
        intercept,
        ssr,
        sst: syy,
    }
}

/// In-window (rank, value) points after validation.
fn window_points(series: &RankedSeries, window: FitWindow) -> Result<(FitWindow, Vec<(f64, f64)>)> {
    let window = window.resolve(series.len())?;
    let points = series.items[window.r_min - 1..window.r_max]
        .iter()
        .map(|it| {
            if it.value > 0.0 && it.value.is_finite() {
                Ok((it.rank as f64, it.value))
            } else {
                Err(Error::NonPositive {
                    ordinal: it.origin,
                    value: it.value,
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((window, points))
}

/// `value ≈ amplitude · rank^(−exponent)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub amplitude: f64,
    pub window: FitWindow,
    pub r_squared: f64,
    /// Sum of squared log10 residuals.
    pub residual_sum: f64,
    pub n_points: usize,
}

impl PowerLawFit {
    pub fn predict(&self, rank: f64) -> f64 {
        self.amplitude * rank.powf(-self.exponent)
    }
}

/// Least squares of log10(value) on log10(rank). The exponent is the negated
/// slope, so decreasing data gives a positive exponent.
pub fn fit_power_law(series: &RankedSeries, window: FitWindow) -> Result<PowerLawFit> {
    let (window, points) = window_points(series, window)?;
    let xs: Vec<f64> = points.iter().map(|p| p.0.log10()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.log10()).collect();
    let line = ols(&xs, &ys);
    let r_squared = if line.sst > 0.0 {
        (1.0 - line.ssr / line.sst).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(PowerLawFit {
        exponent: -line.slope,
        amplitude: 10f64.powf(line.intercept),
        window,
        r_squared,
        residual_sum: line.ssr,
        n_points: points.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StretchedExponentialParams {
    pub amplitude: f64,
    pub rate: f64,
    pub stretch_exponent: f64,
}

/// `value ≈ amplitude · exp(−rate · rank^stretch_exponent)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StretchedExponentialFit {
    pub amplitude: f64,
    pub rate: f64,
    pub stretch_exponent: f64,
    pub window: FitWindow,
    pub residual_sum: f64,
    pub n_points: usize,
    pub iterations: usize,
}

impl StretchedExponentialFit {
    pub fn predict(&self, rank: f64) -> f64 {
        self.amplitude * (-self.rate * rank.powf(self.stretch_exponent)).exp()
    }
}

pub const STRETCHED_MAX_ITERATIONS: usize = 500;
pub const STRETCHED_TOLERANCE: f64 = 1e-9;

/// Default search start: amplitude at `r_min`, stretch 0.5, and the rate that
/// makes the model pass through the value at `r_max`.
pub fn default_stretched_init(
    series: &RankedSeries,
    window: FitWindow,
) -> Result<StretchedExponentialParams> {
    let (window, points) = window_points(series, window)?;
    let amplitude = points[0].1;
    let last = points[points.len() - 1];
    let stretch_exponent = 0.5;
    let rate = (amplitude / last.1).ln() / (window.r_max as f64).powf(stretch_exponent);
    Ok(StretchedExponentialParams {
        amplitude,
        rate,
        stretch_exponent,
    })
}

/// Stretched-exponential fit by Nelder–Mead search over
/// `(ln amplitude, ln rate, stretch)`, minimizing squared log10 residuals.
///
/// A window whose values are all equal yields [`Error::Degenerate`], since the
/// rate would have to vanish and the stretch is then unidentifiable.
pub fn fit_stretched_exponential(
    series: &RankedSeries,
    window: FitWindow,
    init: Option<StretchedExponentialParams>,
) -> Result<StretchedExponentialFit> {
    let (window, points) = window_points(series, window)?;
    if points.iter().all(|p| p.1 == points[0].1) {
        return Err(Error::Degenerate("values are constant over the window"));
    }
    let init = match init {
        Some(p) => p,
        None => default_stretched_init(series, window)?,
    };
    let ranks: Vec<f64> = points.iter().map(|p| p.0).collect();
    let logs: Vec<f64> = points.iter().map(|p| p.1.log10()).collect();
    let objective = |theta: &[f64; 3]| -> f64 {
        let [ln_a, ln_rate, stretch] = *theta;
        if !(stretch > 0.0 && stretch <= 2.0) {
            return f64::INFINITY;
        }
        let rate = ln_rate.exp();
        ranks
            .iter()
            .zip(&logs)
            .map(|(r, ly)| {
                let model = (ln_a - rate * r.powf(stretch)) / std::f64::consts::LN_10;
                (ly - model) * (ly - model)
            })
            .sum()
    };

    // Increasing or flat-ended windows give a non-positive starting rate.
    let start_rate = if init.rate > 0.0 { init.rate } else { 1e-3 };
    let start = [
        init.amplitude.max(f64::MIN_POSITIVE).ln(),
        start_rate.ln(),
        init.stretch_exponent.clamp(1e-3, 2.0),
    ];
    let outcome = nelder_mead(
        objective,
        start,
        STRETCHED_MAX_ITERATIONS,
        STRETCHED_TOLERANCE,
    );
    let [ln_a, ln_rate, stretch] = outcome.best;
    let params = StretchedExponentialParams {
        amplitude: ln_a.exp(),
        rate: ln_rate.exp(),
        stretch_exponent: stretch,
    };
    if !outcome.converged {
        return Err(Error::NotConverged {
            iterations: outcome.iterations,
            best: params,
            residual_sum: outcome.value,
        });
    }
    Ok(StretchedExponentialFit {
        amplitude: params.amplitude,
        rate: params.rate,
        stretch_exponent: params.stretch_exponent,
        window,
        residual_sum: outcome.value,
        n_points: points.len(),
        iterations: outcome.iterations,
    })
}

struct SearchOutcome {
    best: [f64; 3],
    value: f64,
    iterations: usize,
    converged: bool,
}

/// Standard Nelder–Mead (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2). Converged once every vertex lies within `tolerance` of the
/// best vertex, relative to the parameter magnitude.
fn nelder_mead<F>(f: F, start: [f64; 3], max_iterations: usize, tolerance: f64) -> SearchOutcome
where
    F: Fn(&[f64; 3]) -> f64,
{
    const N: usize = 3;
    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    simplex.push((start, f(&start)));
    for d in 0..N {
        let mut v = start;
        v[d] += if v[d].abs() > 1e-8 {
            0.05 * v[d]
        } else {
            2.5e-4
        };
        simplex.push((v, f(&v)));
    }

    let combine = |a: &[f64; N], b: &[f64; N], t: f64| -> [f64; N] {
        let mut out = [0.0; N];
        for i in 0..N {
            out[i] = a[i] + t * (b[i] - a[i]);
        }
        out
    };

    let mut iterations = 0;
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].0;
        let spread = simplex[1..]
            .iter()
            .flat_map(|(v, _)| (0..N).map(move |i| (v[i] - best[i]).abs() / best[i].abs().max(1.0)))
            .fold(0.0, f64::max);
        if spread < tolerance {
            return SearchOutcome {
                best,
                value: simplex[0].1,
                iterations,
                converged: true,
            };
        }
        if iterations >= max_iterations {
            return SearchOutcome {
                best,
                value: simplex[0].1,
                iterations,
                converged: false,
            };
        }
        iterations += 1;

        let mut centroid = [0.0; N];
        for (v, _) in &simplex[..N] {
            for i in 0..N {
                centroid[i] += v[i] / N as f64;
            }
        }
        let (worst, f_worst) = simplex[N];
        let reflected = combine(&centroid, &worst, -1.0);
        let f_reflected = f(&reflected);

        if f_reflected < simplex[0].1 {
            let expanded = combine(&centroid, &worst, -2.0);
            let f_expanded = f(&expanded);
            simplex[N] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
        } else if f_reflected < simplex[N - 1].1 {
            simplex[N] = (reflected, f_reflected);
        } else {
            let contracted = if f_reflected < f_worst {
                combine(&centroid, &reflected, 0.5)
            } else {
                combine(&centroid, &worst, 0.5)
            };
            let f_contracted = f(&contracted);
            if f_contracted < f_worst.min(f_reflected) {
                simplex[N] = (contracted, f_contracted);
            } else {
                let anchor = simplex[0].0;
                for vertex in simplex.iter_mut().skip(1) {
                    let v = combine(&anchor, &vertex.0, 0.5);
                    *vertex = (v, f(&v));
                }
            }
        }
    }
}

/// Best two-line split of the log-log rank curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreakEstimate {
    pub break_rank: usize,
    pub break_length: f64,
    pub slope_before: f64,
    pub slope_after: f64,
    /// Squared log10 residuals of the two-line model.
    pub residual_split: f64,
    /// Squared log10 residuals of one line over the same points.
    pub residual_single: f64,
    pub relative_improvement: f64,
    /// At least 1% residual improvement with a steeper right-hand side.
    pub material: bool,
}

pub const MATERIAL_IMPROVEMENT: f64 = 0.01;
const MIN_SIDE_POINTS: usize = 3;

/// Scan every break rank `b` in `[r_min, max rank]` leaving three points on
/// each side; `b` ends the left-hand regime. Equal residuals resolve to the
/// smaller `b`.
pub fn detect_break(series: &RankedSeries, r_min: usize, exec: Execution) -> Result<BreakEstimate> {
    let n = series.len();
    let r_min = r_min.max(1);
    if n < r_min + 10 {
        return Err(Error::TooFewPoints(n.saturating_sub(r_min)));
    }
    let (_, points) = window_points(series, FitWindow { r_min, r_max: n })?;
    let xs: Vec<f64> = points.iter().map(|p| p.0.log10()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.log10()).collect();

    // Split index k puts points[..k] on the left.
    let splits = MIN_SIDE_POINTS..xs.len() - MIN_SIDE_POINTS + 1;
    let fit_split = |k: usize| {
        let left = ols(&xs[..k], &ys[..k]);
        let right = ols(&xs[k..], &ys[k..]);
        (left, right)
    };
    let (k, (left, right)) = exec
        .min_by_index(splits, fit_split, |(l, r)| l.ssr + r.ssr)
        .expect("at least one candidate split");

    let single = ols(&xs, &ys);
    let residual_split = left.ssr + right.ssr;
    let relative_improvement = if single.ssr > 1e-12 * single.sst.max(f64::MIN_POSITIVE) {
        ((single.ssr - residual_split) / single.ssr).max(0.0)
    } else {
        0.0
    };
    let break_index = k - 1;
    Ok(BreakEstimate {
        break_rank: r_min + break_index,
        break_length: points[break_index].1,
        slope_before: left.slope,
        slope_after: right.slope,
        residual_split,
        residual_single: single.ssr,
        relative_improvement,
        material: relative_improvement >= MATERIAL_IMPROVEMENT && right.slope < left.slope,
    })
}

/// JSON record for any fitted model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub label: String,
    pub model: String,
    pub params: BTreeMap<String, f64>,
    pub window: FitWindow,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_squared: Option<f64>,
    pub residual_sum: f64,
    pub n_points: usize,
}

impl FitRecord {
    pub fn power_law(label: &str, fit: &PowerLawFit) -> Self {
        FitRecord {
            label: label.to_owned(),
            model: "power_law".into(),
            params: BTreeMap::from([
                ("amplitude".to_owned(), fit.amplitude),
                ("exponent".to_owned(), fit.exponent),
            ]),
            window: fit.window,
            r_squared: Some(fit.r_squared),
            residual_sum: fit.residual_sum,
            n_points: fit.n_points,
        }
    }

    pub fn stretched(label: &str, fit: &StretchedExponentialFit) -> Self {
        FitRecord {
            label: label.to_owned(),
            model: "stretched_exponential".into(),
            params: BTreeMap::from([
                ("amplitude".to_owned(), fit.amplitude),
                ("rate".to_owned(), fit.rate),
                ("stretch_exponent".to_owned(), fit.stretch_exponent),
            ]),
            window: fit.window,
            r_squared: None,
            residual_sum: fit.residual_sum,
            n_points: fit.n_points,
        }
    }
}
