//! Birth-death chains on the path graph with reflecting walls.
//!
//! A chain on `P_{n+1}` is fixed by the rightward step probabilities
//! `pR[j]`; the leftward ones are `pL[j] = 1 - pR[j]`. The walls force
//! `pR[0] = 1` and `pL[n] = 1`, and every interior probability lies strictly
//! inside `(0, 1)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BDChain {
    n: usize,
    #[serde(rename = "pR")]
    p_right: Vec<f64>,
    #[serde(rename = "pL")]
    p_left: Vec<f64>,
}

impl BDChain {
    /// Builds a chain from its interior rightward probabilities
    /// `pR[1..n]`. For `n = 1` the interior is empty.
    pub fn new(n: usize, interior_p_right: &[f64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidChain("n must be at least 1".into()));
        }
        if interior_p_right.len() != n - 1 {
            return Err(Error::InvalidChain(format!(
                "expected {} interior probabilities for n = {n}, got {}",
                n - 1,
                interior_p_right.len()
            )));
        }
        for (i, &p) in interior_p_right.iter().enumerate() {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::InvalidChain(format!(
                    "pR[{}] = {p} is outside the open interval (0, 1)",
                    i + 1
                )));
            }
        }
        let mut p_right = Vec::with_capacity(n + 1);
        p_right.push(1.0);
        p_right.extend_from_slice(interior_p_right);
        p_right.push(0.0);
        let p_left = p_right.iter().map(|p| 1.0 - p).collect();
        Ok(BDChain { n, p_right, p_left })
    }

    /// Space-homogeneous chain with `pR[j] = p` on the interior.
    pub fn homogeneous(n: usize, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidChain("n must be at least 1".into()));
        }
        Self::new(n, &vec![p; n - 1])
    }

    /// Ehrenfest urn: `pL[j] = j/n`, `pR[j] = 1 - j/n`.
    pub fn ehrenfest(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidChain("n must be at least 1".into()));
        }
        let nf = n as f64;
        let p_left: Vec<f64> = (0..=n).map(|j| j as f64 / nf).collect();
        let p_right = p_left.iter().map(|p| 1.0 - p).collect();
        Ok(BDChain { n, p_right, p_left })
    }

    /// Index of the last vertex; the path has `n + 1` vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn p_right(&self) -> &[f64] {
        &self.p_right
    }

    pub fn p_left(&self) -> &[f64] {
        &self.p_left
    }

    /// Dense row-stochastic transition matrix, `P[j][k]` = probability of a
    /// step from `j` to `k`.
    pub fn transition_matrix(&self) -> Vec<Vec<f64>> {
        let dim = self.n + 1;
        let mut p = vec![vec![0.0; dim]; dim];
        for j in 0..dim {
            if j + 1 < dim {
                p[j][j + 1] = self.p_right[j];
            }
            if j > 0 {
                p[j][j - 1] = self.p_left[j];
            }
        }
        p
    }

    /// Stationary distribution from the product formula, accumulated as a
    /// running ratio in log space.
    pub fn stationary_distribution(&self) -> Result<StationaryDist> {
        let mut log_w = Vec::with_capacity(self.n + 1);
        log_w.push(0.0f64);
        for j in 0..self.n {
            let next = log_w[j] + self.p_right[j].ln() - self.p_left[j + 1].ln();
            if !next.is_finite() {
                return Err(Error::NonFiniteStationary { vertex: j + 1 });
            }
            log_w.push(next);
        }
        let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let scaled: f64 = crate::pairwise_sum(log_w.iter().map(|w| (w - max).exp()));
        let log_total = max + scaled.ln();
        let pi: Vec<f64> = log_w.iter().map(|w| (w - log_total).exp()).collect();
        if let Some(vertex) = pi.iter().position(|&p| p <= 0.0 || !p.is_finite()) {
            return Err(Error::NonFiniteStationary { vertex });
        }
        // log_w[0] = 0, so C_pi = exp(log_total).
        let c_pi = log_total.exp();
        if !c_pi.is_finite() {
            return Err(Error::NonFiniteStationary { vertex: self.n });
        }
        Ok(StationaryDist { pi, c_pi })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationaryDist {
    pub pi: Vec<f64>,
    /// Normalizing constant `C_pi = 1 + sum_j prod pR / prod pL`.
    pub c_pi: f64,
}

/// Named chain families, as accepted by the CLI configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ChainFamily {
    Homogeneous {
        p: f64,
    },
    Ehrenfest,
    Explicit {
        #[serde(rename = "interior_pR")]
        interior_p_right: Vec<f64>,
    },
    /// Interior probabilities drawn uniformly from `[low, high]` with a
    /// seeded ChaCha8 stream.
    Random {
        seed: u64,
        low: f64,
        high: f64,
    },
}

impl ChainFamily {
    pub fn build(&self, n: usize) -> Result<BDChain> {
        match self {
            ChainFamily::Homogeneous { p } => BDChain::homogeneous(n, *p),
            ChainFamily::Ehrenfest => BDChain::ehrenfest(n),
            ChainFamily::Explicit { interior_p_right } => {
                if n != interior_p_right.len() + 1 {
                    return Err(Error::InvalidChain(format!(
                        "explicit chain has {} interior probabilities, which fixes n = {}, not {n}",
                        interior_p_right.len(),
                        interior_p_right.len() + 1
                    )));
                }
                BDChain::new(n, interior_p_right)
            }
            ChainFamily::Random { seed, low, high } => {
                if !(*low > 0.0 && *high < 1.0 && low <= high) {
                    return Err(Error::InvalidChain(format!(
                        "random family needs 0 < low <= high < 1, got [{low}, {high}]"
                    )));
                }
                if n == 0 {
                    return Err(Error::InvalidChain("n must be at least 1".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(n as u64));
                let interior: Vec<f64> = (1..n).map(|_| rng.random_range(*low..=*high)).collect();
                BDChain::new(n, &interior)
            }
        }
    }

    /// The single size an explicit chain admits, if any.
    pub fn fixed_size(&self) -> Option<usize> {
        match self {
            ChainFamily::Explicit { interior_p_right } => Some(interior_p_right.len() + 1),
            _ => None,
        }
    }

    /// Short label used in report tables.
    pub fn label(&self) -> String {
        match self {
            ChainFamily::Homogeneous { p } => format!("homogeneous(p={p})"),
            ChainFamily::Ehrenfest => "ehrenfest".to_string(),
            ChainFamily::Explicit { .. } => "explicit".to_string(),
            ChainFamily::Random { seed, low, high } => {
                format!("random(seed={seed};low={low};high={high})")
            }
        }
    }
}
