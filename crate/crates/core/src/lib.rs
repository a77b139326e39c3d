//! Birth-death chains on the path graph `P_{n+1}` and the two quantum walks
//! built from them: the continuous-time walk generated by the normalized
//! Laplacian and Szegedy's coined walk.
//!
//! Everything numeric flows from the Jacobi matrix of the chain. Its
//! eigenpairs give closed forms for both time-averaged distributions, and the
//! [`scaling`] module compares the rescaled distribution functions as the
//! path grows.

pub mod bdchain;
pub mod cli;
pub mod ctqw;
mod error;
pub mod scaling;
pub mod spectral;
pub mod szegedy;

pub use bdchain::{BDChain, ChainFamily, StationaryDist};
pub use ctqw::{AverageKind, CTQWDist, TimeAveragedDist};
pub use error::{Error, Result};
pub use scaling::{ScalingReport, StepCDF};
pub use spectral::{JacobiMatrix, SpectralData};
pub use szegedy::{CoinState, LiftedEigenpair, SzegedyOperator};

/// Pairwise (cascade) summation; keeps the rounding error at `O(log n)` ulps
/// for the long spectral sums.
pub(crate) fn pairwise_sum<I>(values: I) -> f64
where
    I: IntoIterator<Item = f64>,
{
    let v: Vec<f64> = values.into_iter().collect();
    pairwise_slice(&v)
}

fn pairwise_slice(v: &[f64]) -> f64 {
    if v.len() <= 32 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_slice(&v[..mid]) + pairwise_slice(&v[mid..])
}
