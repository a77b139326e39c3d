//! Jacobi matrix of a birth-death chain and its eigendecomposition.
//!
//! `J = D^{1/2} P D^{-1/2}` is symmetric tridiagonal with a zero diagonal and
//! off-diagonal entries `sqrt(pR[j] pL[j+1])`. The eigensolver here is the
//! implicit-shift QL iteration specialised to that band; nothing dense is
//! formed.

use serde::Serialize;

use crate::{BDChain, Error, Result};

const MAX_SWEEPS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobiMatrix {
    /// `offdiag[j]` is the `(j, j+1)` entry; length `n`.
    offdiag: Vec<f64>,
}

impl JacobiMatrix {
    pub fn from_chain(chain: &BDChain) -> Self {
        let (pr, pl) = (chain.p_right(), chain.p_left());
        let offdiag = (0..chain.n()).map(|j| (pr[j] * pl[j + 1]).sqrt()).collect();
        JacobiMatrix { offdiag }
    }

    /// Builds from an explicit band. Entries must be positive.
    pub fn from_offdiag(offdiag: Vec<f64>) -> Result<Self> {
        if offdiag.is_empty() {
            return Err(Error::InvalidArgument("Jacobi matrix needs n >= 1".into()));
        }
        if let Some(j) = offdiag.iter().position(|&b| !(b > 0.0 && b.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "off-diagonal entry {j} = {} is not positive",
                offdiag[j]
            )));
        }
        Ok(JacobiMatrix { offdiag })
    }

    pub fn n(&self) -> usize {
        self.offdiag.len()
    }

    pub fn dim(&self) -> usize {
        self.offdiag.len() + 1
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// `J x` using the stored band.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let dim = self.dim();
        if x.len() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                got: x.len(),
            });
        }
        let b = &self.offdiag;
        Ok((0..dim)
            .map(|j| {
                let left = if j > 0 { b[j - 1] * x[j - 1] } else { 0.0 };
                let right = if j + 1 < dim { b[j] * x[j + 1] } else { 0.0 };
                left + right
            })
            .collect())
    }

    /// Normalized Laplacian `(I - J) x`.
    pub fn laplacian_apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let jx = self.apply(x)?;
        Ok(x.iter().zip(jx).map(|(a, b)| a - b).collect())
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let dim = self.dim();
        let mut m = vec![vec![0.0; dim]; dim];
        for (j, &b) in self.offdiag.iter().enumerate() {
            m[j][j + 1] = b;
            m[j + 1][j] = b;
        }
        m
    }

    /// Full eigendecomposition, eigenvalues strictly descending and every
    /// eigenvector scaled so that its first component is positive.
    pub fn eigendecompose(&self) -> Result<SpectralData> {
        let dim = self.dim();
        let mut d = vec![0.0; dim];
        let mut e = self.offdiag.clone();
        e.push(0.0);
        // z[i] holds the i-th column of the accumulated rotation matrix, so
        // after convergence z[i] is the eigenvector belonging to d[i].
        let mut z: Vec<Vec<f64>> = (0..dim)
            .map(|i| {
                let mut row = vec![0.0; dim];
                row[i] = 1.0;
                row
            })
            .collect();
        tql2(&mut d, &mut e, &mut z)?;

        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| d[b].total_cmp(&d[a]));
        let eigenvalues: Vec<f64> = order.iter().map(|&i| d[i]).collect();
        let mut eigenvectors: Vec<Vec<f64>> = order.iter().map(|&i| z[i].clone()).collect();

        let scale = eigenvalues.iter().fold(1.0f64, |m, l| m.max(l.abs()));
        for l in 0..dim.saturating_sub(1) {
            let gap = eigenvalues[l] - eigenvalues[l + 1];
            if gap <= 4.0 * f64::EPSILON * scale {
                return Err(Error::DegenerateSpectrum {
                    index: l,
                    next: l + 1,
                    gap,
                });
            }
        }

        for v in &mut eigenvectors {
            let pivot = v.iter().copied().find(|c| *c != 0.0).unwrap_or(1.0);
            if pivot < 0.0 {
                v.iter_mut().for_each(|c| *c = -*c);
            }
        }

        Ok(SpectralData {
            eigenvalues,
            eigenvectors,
        })
    }
}

/// Implicit QL with Wilkinson-style shifts on a symmetric tridiagonal
/// matrix (diagonal `d`, sub-diagonal `e[0..dim-1]`, `e[dim-1] = 0`).
/// Rotations are accumulated into the rows of `z`.
fn tql2(d: &mut [f64], e: &mut [f64], z: &mut [Vec<f64>]) -> Result<()> {
    let dim = d.len();
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;

    for l in 0..dim {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < dim {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        // e[dim-1] = 0 always terminates the search.
        if m > l {
            let mut iterations = 0;
            loop {
                iterations += 1;
                if iterations > MAX_SWEEPS {
                    return Err(Error::NoConvergence {
                        index: l,
                        iterations: MAX_SWEEPS,
                    });
                }

                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (lo, hi) = z.split_at_mut(i + 1);
                    let (zi, zi1) = (&mut lo[i], &mut hi[0]);
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let hk = *b;
                        *b = s * *a + c * hk;
                        *a = c * *a - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Eigenpairs of a Jacobi matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralData {
    /// `lambda_0 > lambda_1 > ... > lambda_n`.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[l][j] = v_l(j)`; each row is one orthonormal eigenvector.
    pub eigenvectors: Vec<Vec<f64>>,
}

impl SpectralData {
    pub fn from_chain(chain: &BDChain) -> Result<Self> {
        JacobiMatrix::from_chain(chain).eigendecompose()
    }

    /// Index of the last vertex.
    pub fn n(&self) -> usize {
        self.eigenvalues.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, l: usize) -> &[f64] {
        &self.eigenvectors[l]
    }

    /// `1 - lambda_1`. For `n = 1`, `lambda_1 = lambda_n = -1` and the gap is 2.
    pub fn spectral_gap(&self) -> f64 {
        1.0 - self.eigenvalues[1]
    }

    /// `|v_l(0)|^2` for every `l`; the weights of the initial vertex.
    pub fn origin_weights(&self) -> Vec<f64> {
        self.eigenvectors.iter().map(|v| v[0] * v[0]).collect()
    }
}
