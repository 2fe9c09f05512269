//! Five-parameter logistic regression from objective to subjective scores:
//!
//! `f(x) = b1 * (1/2 - 1 / (1 + exp(b2 * (x - b3)))) + b4 * x + b5`
//!
//! fitted by Levenberg-Marquardt least squares.

use nalgebra::{Matrix5, Vector5};
use serde::{Deserialize, Serialize};

use super::rank::{mean, pearson};
use super::ScoreSeries;
use crate::error::{IqaError, Result};

pub const MAX_ITERATIONS: usize = 2000;
pub const RELATIVE_TOLERANCE: f64 = 1e-10;
const LAMBDA_INIT: f64 = 1e-3;
const LAMBDA_MAX: f64 = 1e16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogisticFit {
    pub beta: [f64; 5],
    pub converged: bool,
    pub residual_sse: f64,
}

impl LogisticFit {
    pub fn predict(&self, x: f64) -> f64 {
        logistic(&self.beta, x)
    }

    pub fn map(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.predict(x)).collect()
    }
}

/// `1 / (1 + exp(z))` without overflow.
#[inline]
fn falling_sigmoid(z: f64) -> f64 {
    if z > 0.0 {
        let e = (-z).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + z.exp())
    }
}

pub fn logistic(beta: &[f64; 5], x: f64) -> f64 {
    let g = falling_sigmoid(beta[1] * (x - beta[2]));
    beta[0] * (0.5 - g) + beta[3] * x + beta[4]
}

fn jacobian_row(beta: &[f64; 5], x: f64) -> Vector5<f64> {
    let g = falling_sigmoid(beta[1] * (x - beta[2]));
    let slope = g * (1.0 - g);
    Vector5::new(
        0.5 - g,
        beta[0] * slope * (x - beta[2]),
        -beta[0] * slope * beta[1],
        x,
        1.0,
    )
}

fn sse(beta: &[f64; 5], xs: &[f64], ys: &[f64]) -> f64 {
    xs.iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - logistic(beta, x);
            r * r
        })
        .sum()
}

struct Run {
    beta: [f64; 5],
    sse: f64,
    converged: bool,
}

/// Levenberg-Marquardt with Marquardt's diagonal scaling. Every accepted step
/// strictly lowers the SSE.
fn levenberg_marquardt(start: [f64; 5], xs: &[f64], ys: &[f64]) -> Run {
    let mut beta = start;
    let mut current = sse(&beta, xs, ys);
    if !current.is_finite() {
        return Run {
            beta,
            sse: f64::INFINITY,
            converged: false,
        };
    }
    let scale: f64 = ys.iter().map(|y| y * y).sum::<f64>().max(f64::MIN_POSITIVE);
    let mut lambda = LAMBDA_INIT;
    let mut fresh = true;
    let (mut jtj, mut jtr) = (Matrix5::zeros(), Vector5::zeros());

    for _ in 0..MAX_ITERATIONS {
        if current <= scale * 1e-30 {
            return Run {
                beta,
                sse: current,
                converged: true,
            };
        }
        if fresh {
            jtj = Matrix5::zeros();
            jtr = Vector5::zeros();
            for (&x, &y) in xs.iter().zip(ys) {
                let j = jacobian_row(&beta, x);
                let r = y - logistic(&beta, x);
                jtj += j * j.transpose();
                jtr += j * r;
            }
            fresh = false;
        }
        let floor = jtj.diagonal().max() * 1e-12 + f64::MIN_POSITIVE;
        let mut damped = jtj;
        for i in 0..5 {
            damped[(i, i)] += lambda * jtj[(i, i)].max(floor);
        }
        let step = damped.cholesky().map(|c| c.solve(&jtr));
        let candidate = step.map(|d| {
            let mut b = beta;
            for i in 0..5 {
                b[i] += d[i];
            }
            b
        });
        match candidate {
            Some(b) if b.iter().all(|v| v.is_finite()) && sse(&b, xs, ys) < current => {
                let next = sse(&b, xs, ys);
                let relative = (current - next) / current;
                beta = b;
                current = next;
                lambda = (lambda / 10.0).max(1e-15);
                fresh = true;
                if relative < RELATIVE_TOLERANCE {
                    return Run {
                        beta,
                        sse: current,
                        converged: true,
                    };
                }
            }
            _ => {
                lambda *= 10.0;
                if lambda > LAMBDA_MAX {
                    // No descent direction survives even a vanishing step: a
                    // minimum at working precision.
                    return Run {
                        beta,
                        sse: current,
                        converged: true,
                    };
                }
            }
        }
    }
    Run {
        beta,
        sse: current,
        converged: false,
    }
}

/// Fits the mapping from `series.objective` to `series.subjective`. Several
/// starting points are tried and the lowest SSE wins; the best parameters are
/// returned even when the optimizer did not converge.
pub fn fit_logistic(series: &ScoreSeries) -> Result<LogisticFit> {
    let (xs, ys) = (series.objective(), series.subjective());
    let (mx, my) = (mean(xs), mean(ys));
    let sx = (xs.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>() / xs.len() as f64).sqrt();
    if sx == 0.0 {
        return Err(IqaError::DegenerateSeries("constant objective scores".into()));
    }
    let (lo, hi) = ys
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &y| (l.min(y), h.max(y)));
    let direction = match pearson(xs, ys) {
        Ok(r) if r < 0.0 => -1.0,
        _ => 1.0,
    };
    let range = hi - lo;

    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / (sx * sx * xs.len() as f64);
    let intercept = my - slope * mx;

    let starts = [
        [direction * range, 1.0 / sx, mx, 0.0, my],
        [-direction * range, 1.0 / sx, mx, 0.0, my],
        [0.0, 1.0 / sx, mx, slope, intercept],
    ];
    let best = starts
        .iter()
        .map(|&s| levenberg_marquardt(s, xs, ys))
        .min_by(|a, b| a.sse.total_cmp(&b.sse))
        .expect("at least one start");
    Ok(LogisticFit {
        beta: best.beta,
        converged: best.converged,
        residual_sse: best.sse,
    })
}
