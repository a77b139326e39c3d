//! Distribution functions of the time-averaged walks and the size sweep
//! comparing them.
//!
//! Both CDFs are step functions with jumps at the integers, so every
//! supremum below is taken over the lattice `k = 0..=n` (equivalently
//! `x = k / n` after rescaling) and is exact.

use rayon::prelude::*;
use serde::Serialize;

use crate::ctqw::{ctqw_time_average, AverageKind, TimeAveragedDist};
use crate::szegedy::dtqw_time_average;
use crate::{ChainFamily, Error, Result, SpectralData};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CdfKind {
    Ctqw,
    Dtqw,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepCDF {
    /// `values[k] = sum_{j <= k} p(j)`.
    pub values: Vec<f64>,
    pub kind: CdfKind,
}

impl StepCDF {
    pub fn from_dist(pbar: &TimeAveragedDist) -> Self {
        let kind = match pbar.kind {
            AverageKind::CtqwClosed | AverageKind::CtqwFiniteT => CdfKind::Ctqw,
            AverageKind::DtqwClosed | AverageKind::DtqwEmpirical => CdfKind::Dtqw,
        };
        let values = pbar
            .probs
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        StepCDF { values, kind }
    }

    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    /// `F(x) = values[floor x]`, 0 left of the origin and 1 (the last value)
    /// right of `n`.
    pub fn eval(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let k = (x.floor() as usize).min(self.n());
        self.values[k]
    }

    /// `F(floor(n x))`: the CDF of `X / n` at `x`.
    pub fn eval_rescaled(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        self.values[floor_index(self.n(), x).min(self.n())]
    }
}

/// `floor(n x)`, robust to `n x` landing a few ulps below an integer
/// (e.g. `x = 0.7`, `n = 10`).
pub fn floor_index(n: usize, x: f64) -> usize {
    let y = n as f64 * x;
    let r = y.round();
    let k = if (y - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        y.floor()
    };
    k.max(0.0) as usize
}

/// Kolmogorov distance `max_k |a(k) - b(k)|`.
pub fn ks_distance(a: &StepCDF, b: &StepCDF) -> Result<f64> {
    if a.values.len() != b.values.len() {
        return Err(Error::LengthMismatch {
            expected: a.values.len(),
            got: b.values.len(),
        });
    }
    Ok(a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

/// Arcsine law `F(x) = (2/pi) arcsin(sqrt x)`, clamped to `[0, 1]`.
pub fn arcsine_cdf(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    std::f64::consts::FRAC_2_PI * x.sqrt().asin()
}

/// Built-in reference limits for the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reference {
    Arcsine,
}

impl Reference {
    pub fn cdf(self, x: f64) -> f64 {
        match self {
            Reference::Arcsine => arcsine_cdf(x),
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "arcsine" => Some(Reference::Arcsine),
            _ => None,
        }
    }
}

/// `max_k |F(k) - reference(k / n)|`.
pub fn lattice_reference_distance(cdf: &StepCDF, reference: impl Fn(f64) -> f64) -> f64 {
    let nf = cdf.n() as f64;
    cdf.values
        .iter()
        .enumerate()
        .map(|(k, v)| (v - reference(k as f64 / nf)).abs())
        .fold(0.0, f64::max)
}

/// `max_x |F(floor(n x)) - reference(x)|` over the given points.
pub fn grid_reference_distance(cdf: &StepCDF, reference: impl Fn(f64) -> f64, xs: &[f64]) -> f64 {
    xs.iter()
        .map(|&x| (cdf.eval_rescaled(x) - reference(x)).abs())
        .fold(0.0, f64::max)
}

/// `sum_{l=1}^{n-1} v_l(k)^2 v_l(0)^2`, the interior overlap that has to
/// vanish at `k = floor(n x)` for the two limits to agree.
pub fn interior_overlap_sum(spec: &SpectralData, k: usize) -> f64 {
    let n = spec.n();
    crate::pairwise_sum((1..n).map(|l| {
        let v = spec.vector(l);
        v[k] * v[k] * v[0] * v[0]
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub n: usize,
    pub gap: Option<f64>,
    pub ks_cd: Option<f64>,
    pub ks_ref: Option<f64>,
    /// Set when this size failed; the other fields are then empty.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub family: String,
    pub rows: Vec<ScalingRow>,
}

impl ScalingReport {
    pub fn sizes(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.n).collect()
    }

    pub fn gaps(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.gap).collect()
    }

    pub fn ks_cd(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.ks_cd).collect()
    }

    pub fn failures(&self) -> impl Iterator<Item = &ScalingRow> {
        self.rows.iter().filter(|r| r.error.is_some())
    }
}

/// Per-size closed-form quantities behind one report row.
#[derive(Debug, Clone)]
pub struct SizeResult {
    pub spec: SpectralData,
    pub ctqw: TimeAveragedDist,
    pub dtqw: TimeAveragedDist,
    pub cdf_c: StepCDF,
    pub cdf_d: StepCDF,
}

pub fn evaluate_size(family: &ChainFamily, n: usize) -> Result<SizeResult> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "sweep sizes must be at least 2, got {n}"
        )));
    }
    let chain = family.build(n)?;
    let spec = SpectralData::from_chain(&chain)?;
    let ctqw = ctqw_time_average(&spec);
    let dtqw = dtqw_time_average(&chain, &spec)?;
    let cdf_c = StepCDF::from_dist(&ctqw);
    let cdf_d = StepCDF::from_dist(&dtqw);
    Ok(SizeResult {
        spec,
        ctqw,
        dtqw,
        cdf_c,
        cdf_d,
    })
}

/// Runs the CTQW/DTQW comparison for every size, in parallel. Rows come
/// back sorted by `n`; a failing size yields a row with `error` set and
/// does not stop the sweep.
pub fn theorem1_experiment(
    family: &ChainFamily,
    sizes: &[usize],
    reference: Option<&(dyn Fn(f64) -> f64 + Sync)>,
) -> ScalingReport {
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    let rows = sizes
        .par_iter()
        .map(|&n| match evaluate_size(family, n) {
            Ok(r) => {
                let ks = ks_distance(&r.cdf_c, &r.cdf_d).expect("same size by construction");
                ScalingRow {
                    n,
                    gap: Some(r.spec.spectral_gap()),
                    ks_cd: Some(ks),
                    ks_ref: reference.map(|f| lattice_reference_distance(&r.cdf_c, f)),
                    error: None,
                }
            }
            Err(e) => ScalingRow {
                n,
                gap: None,
                ks_cd: None,
                ks_ref: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    ScalingReport {
        family: family.label(),
        rows,
    }
}
