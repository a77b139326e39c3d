//! Continuous-time quantum walk `U(t) = exp(i t L)` with `L = I - J`,
//! started at vertex 0.
//!
//! Amplitudes, time-`t` distributions and time averages are all evaluated
//! from the eigenpairs of `J`; the finite-horizon average integrates the
//! oscillating cross terms exactly.

use num_complex::Complex64;
use serde::Serialize;

use crate::{pairwise_sum, Error, Result, SpectralData};

/// Position distribution at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CTQWDist {
    pub probs: Vec<f64>,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AverageKind {
    CtqwClosed,
    CtqwFiniteT,
    DtqwClosed,
    DtqwEmpirical,
}

/// A time-averaged position distribution over vertices `0..=n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeAveragedDist {
    pub probs: Vec<f64>,
    pub kind: AverageKind,
    /// Finite horizon `T`, present only for the finite-horizon kinds.
    pub horizon: Option<f64>,
}

impl TimeAveragedDist {
    pub fn n(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn total(&self) -> f64 {
        pairwise_sum(self.probs.iter().copied())
    }

    /// Largest absolute entrywise difference.
    pub fn sup_distance(&self, other: &TimeAveragedDist) -> Result<f64> {
        sup_distance(&self.probs, &other.probs)
    }
}

pub(crate) fn sup_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

/// `<k|U(t)|0> = e^{it} sum_l e^{-it lambda_l} v_l(k) v_l(0)`.
pub fn ctqw_amplitudes(spec: &SpectralData, t: f64) -> Vec<Complex64> {
    let phase = Complex64::cis(t);
    amplitudes_without_phase(spec, t)
        .into_iter()
        .map(|a| a * phase)
        .collect()
}

/// Amplitudes with the global factor `e^{it}` dropped.
pub fn amplitudes_without_phase(spec: &SpectralData, t: f64) -> Vec<Complex64> {
    let dim = spec.dim();
    let coeffs: Vec<Complex64> = spec
        .eigenvalues
        .iter()
        .zip(&spec.eigenvectors)
        .map(|(&lam, v)| Complex64::cis(-t * lam) * v[0])
        .collect();
    (0..dim)
        .map(|k| {
            let re = pairwise_sum(
                coeffs
                    .iter()
                    .zip(&spec.eigenvectors)
                    .map(|(c, v)| c.re * v[k]),
            );
            let im = pairwise_sum(
                coeffs
                    .iter()
                    .zip(&spec.eigenvectors)
                    .map(|(c, v)| c.im * v[k]),
            );
            Complex64::new(re, im)
        })
        .collect()
}

pub fn ctqw_distribution(spec: &SpectralData, t: f64) -> CTQWDist {
    let probs = amplitudes_without_phase(spec, t)
        .into_iter()
        .map(|a| a.norm_sqr())
        .collect();
    CTQWDist { probs, t }
}

/// `(1/T) int_0^T P(X_t = j) dt`, exact.
///
/// With `a_l = v_l(j) v_l(0)` the integrand is
/// `sum_l a_l^2 + 2 sum_{l<m} a_l a_m cos(t (lambda_l - lambda_m))`, whose
/// average over `[0, T]` replaces each cosine by `sin(T d) / (T d)`.
pub fn ctqw_time_average_finite(spec: &SpectralData, horizon: f64) -> Result<TimeAveragedDist> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "horizon must be positive and finite, got {horizon}"
        )));
    }
    let dim = spec.dim();
    let lam = &spec.eigenvalues;
    // sinc factors depend only on the eigenvalue pair.
    let mut sinc = vec![0.0; dim * dim];
    for l in 0..dim {
        for m in (l + 1)..dim {
            let x = horizon * (lam[l] - lam[m]);
            sinc[l * dim + m] = x.sin() / x;
        }
    }
    let probs = (0..dim)
        .map(|j| {
            let a: Vec<f64> = spec.eigenvectors.iter().map(|v| v[j] * v[0]).collect();
            let diagonal = pairwise_sum(a.iter().map(|x| x * x));
            let cross = pairwise_sum((0..dim).flat_map(|l| {
                let (a, sinc) = (&a, &sinc);
                ((l + 1)..dim).map(move |m| 2.0 * a[l] * a[m] * sinc[l * dim + m])
            }));
            diagonal + cross
        })
        .collect();
    Ok(TimeAveragedDist {
        probs,
        kind: AverageKind::CtqwFiniteT,
        horizon: Some(horizon),
    })
}

/// The `T -> infinity` limit `p_C(j) = sum_l v_l(j)^2 v_l(0)^2`.
pub fn ctqw_time_average(spec: &SpectralData) -> TimeAveragedDist {
    let weights = spec.origin_weights();
    let probs = (0..spec.dim())
        .map(|j| {
            pairwise_sum(
                spec.eigenvectors
                    .iter()
                    .zip(&weights)
                    .map(|(v, w)| v[j] * v[j] * w),
            )
        })
        .collect();
    TimeAveragedDist {
        probs,
        kind: AverageKind::CtqwClosed,
        horizon: None,
    }
}

/// Upper bound `C` in `|finite(T) - limit|(j) <= C / T`, maximised over `j`.
pub fn finite_average_error_constant(spec: &SpectralData) -> f64 {
    let dim = spec.dim();
    let lam = &spec.eigenvalues;
    (0..dim)
        .map(|j| {
            let a: Vec<f64> = spec.eigenvectors.iter().map(|v| v[j] * v[0]).collect();
            let mut c = 0.0;
            for l in 0..dim {
                for m in (l + 1)..dim {
                    c += 2.0 * (a[l] * a[m]).abs() / (lam[l] - lam[m]).abs();
                }
            }
            c
        })
        .fold(0.0, f64::max)
}
