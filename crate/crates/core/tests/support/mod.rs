//! Independent oracles shared by the integration tests. Nothing here calls
//! into the eigensolver or the matrix-free walk.
#![allow(dead_code)]

use num_complex::Complex64;
use qwalk::BDChain;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type CMatrix = Vec<Vec<Complex64>>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Chain with interior probabilities uniform in `[low, high]`.
pub fn random_chain(rng: &mut ChaCha8Rng, n: usize, low: f64, high: f64) -> BDChain {
    let interior: Vec<f64> = (1..n).map(|_| rng.random_range(low..=high)).collect();
    BDChain::new(n, &interior).unwrap()
}

pub fn czero(dim: usize) -> CMatrix {
    vec![vec![Complex64::new(0.0, 0.0); dim]; dim]
}

pub fn cidentity(dim: usize) -> CMatrix {
    let mut m = czero(dim);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

pub fn cmatmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let dim = a.len();
    let mut c = czero(dim);
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i][k];
            if aik == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..dim {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

pub fn cmatvec(a: &CMatrix, x: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

fn one_norm(a: &CMatrix) -> f64 {
    let dim = a.len();
    (0..dim)
        .map(|j| (0..dim).map(|i| a[i][j].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(A)` by scaling and squaring with a degree-30 Taylor series.
pub fn expm(a: &CMatrix) -> CMatrix {
    let dim = a.len();
    let norm = one_norm(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = 0.5f64.powi(squarings as i32);
    let scaled: CMatrix = a
        .iter()
        .map(|row| row.iter().map(|x| x * scale).collect())
        .collect();
    let mut result = cidentity(dim);
    let mut term = cidentity(dim);
    for k in 1..=30 {
        term = cmatmul(&term, &scaled);
        for row in term.iter_mut() {
            for x in row.iter_mut() {
                *x /= k as f64;
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        result = cmatmul(&result, &result);
    }
    result
}

/// Dense `L = I - D^{1/2} P D^{-1/2}` from the transition matrix and the
/// product-formula stationary distribution.
pub fn dense_laplacian(chain: &BDChain) -> Vec<Vec<f64>> {
    let p = chain.transition_matrix();
    let pi = chain.stationary_distribution().unwrap().pi;
    let dim = p.len();
    let mut l = vec![vec![0.0; dim]; dim];
    for j in 0..dim {
        for k in 0..dim {
            let jac = pi[j].sqrt() * p[j][k] / pi[k].sqrt();
            l[j][k] = if j == k { 1.0 } else { 0.0 } - jac;
        }
    }
    l
}

/// `|exp(i t L)_{k,0}|^2` by brute force.
pub fn ctqw_distribution_dense(chain: &BDChain, t: f64) -> Vec<f64> {
    let l = dense_laplacian(chain);
    let a: CMatrix = l
        .iter()
        .map(|row| row.iter().map(|x| Complex64::new(0.0, t * x)).collect())
        .collect();
    let u = expm(&a);
    u.iter().map(|row| row[0].norm_sqr()).collect()
}

/// Number of eigenvalues of the zero-diagonal tridiagonal matrix with band
/// `b` that are strictly less than `x` (Sturm count).
pub fn sturm_count(b: &[f64], x: f64) -> usize {
    let dim = b.len() + 1;
    let mut count = 0;
    let mut q = -x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..dim {
        let denom = if q == 0.0 {
            f64::EPSILON * (b[i - 1].abs() + 1.0)
        } else {
            q
        };
        q = -x - b[i - 1] * b[i - 1] / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Eigenvalues (descending) by bisection on the Sturm count.
pub fn bisection_eigenvalues(b: &[f64]) -> Vec<f64> {
    let dim = b.len() + 1;
    let radius = 2.0 * b.iter().fold(0.0f64, |m, v| m.max(v.abs())) + 1e-3;
    let mut out: Vec<f64> = (0..dim)
        .map(|k| {
            // k-th smallest eigenvalue.
            let (mut lo, mut hi) = (-radius, radius);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if sturm_count(b, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect();
    out.reverse();
    out
}

/// Left Perron vector of `P` by solving `pi P = pi` with Gaussian
/// elimination (one equation replaced by normalization).
pub fn perron_by_linear_solve(p: &[Vec<f64>]) -> Vec<f64> {
    let dim = p.len();
    // Rows: (P^T - I) pi = 0, last row replaced by sum pi = 1.
    let mut a = vec![vec![0.0; dim + 1]; dim];
    for i in 0..dim {
        for j in 0..dim {
            a[i][j] = p[j][i] - if i == j { 1.0 } else { 0.0 };
        }
    }
    a[dim - 1].fill(1.0);
    for col in 0..dim {
        let piv = (col..dim)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        a.swap(col, piv);
        for row in 0..dim {
            if row != col {
                let f = a[row][col] / a[col][col];
                let pivot_row = a[col].clone();
                for (x, y) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= f * y;
                }
            }
        }
    }
    (0..dim).map(|i| a[i][dim] / a[i][i]).collect()
}

/// Dense Szegedy operator assembled from its definition: coin blocks
/// `2|phi><phi| - I` (identity at the walls), then the flip-flop shift
/// with the wall arcs `(0, L)` and `(n, R)` fixed.
pub fn dense_szegedy(chain: &BDChain) -> CMatrix {
    let n = chain.n();
    let dim = 2 * (n + 1);
    let mut coin = czero(dim);
    for j in 0..=n {
        let (a, b) = (2 * j, 2 * j + 1);
        if j == 0 || j == n {
            coin[a][a] = Complex64::new(1.0, 0.0);
            coin[b][b] = Complex64::new(1.0, 0.0);
        } else {
            let phi = [chain.p_left()[j].sqrt(), chain.p_right()[j].sqrt()];
            for (r, pr) in [a, b].into_iter().zip(phi) {
                for (c, pc) in [a, b].into_iter().zip(phi) {
                    let delta = if r == c { 1.0 } else { 0.0 };
                    coin[r][c] = Complex64::new(2.0 * pr * pc - delta, 0.0);
                }
            }
        }
    }
    let mut shift = czero(dim);
    for j in 0..=n {
        // (j, L) -> (j - 1, R); (j, R) -> (j + 1, L).
        let (l, r) = (2 * j, 2 * j + 1);
        if j > 0 {
            shift[2 * (j - 1) + 1][l] = Complex64::new(1.0, 0.0);
        } else {
            shift[l][l] = Complex64::new(1.0, 0.0);
        }
        if j < n {
            shift[2 * (j + 1)][r] = Complex64::new(1.0, 0.0);
        } else {
            shift[r][r] = Complex64::new(1.0, 0.0);
        }
    }
    cmatmul(&shift, &coin)
}

/// Cesaro mean of the position distribution using dense matrix-vector
/// products.
pub fn dtqw_average_dense(chain: &BDChain, horizon: usize) -> Vec<f64> {
    let n = chain.n();
    let u = dense_szegedy(chain);
    let mut psi = vec![Complex64::new(0.0, 0.0); 2 * (n + 1)];
    psi[1] = Complex64::new(1.0, 0.0);
    let mut acc = vec![0.0; n + 1];
    for _ in 0..horizon {
        for j in 0..=n {
            acc[j] += psi[2 * j].norm_sqr() + psi[2 * j + 1].norm_sqr();
        }
        psi = cmatvec(&u, &psi);
    }
    acc.iter().map(|a| a / horizon as f64).collect()
}

pub fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Ehrenfest time-averaged CTQW distribution `C(2j,j) C(2(n-j),n-j) / 4^n`,
/// from the Krawtchouk square-sum identity.
pub fn ehrenfest_ctqw_average(n: usize) -> Vec<f64> {
    (0..=n as u64)
        .map(|j| {
            let m = n as u64;
            // Central binomials normalized by 4^j and 4^(n-j) separately to stay in range.
            let a = binomial(2 * j, j) / 4f64.powi(j as i32);
            let b = binomial(2 * (m - j), m - j) / 4f64.powi((m - j) as i32);
            a * b
        })
        .collect()
}

pub fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
