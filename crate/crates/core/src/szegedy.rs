//! Szegedy's walk `U = S C` on the arc space of the path graph.
//!
//! States live in `C^{2(n+1)}` with index `2 j + c`, `c = 0` for `L` and
//! `c = 1` for `R`. The coin is the identity at the two walls and the
//! reflection `2 |phi_j><phi_j| - I` inside, with
//! `phi_j = sqrt(pL_j) |L> + sqrt(pR_j) |R>`. The flip-flop shift swaps
//! `(j, L)` with `(j - 1, R)`; the two wall arcs `(0, L)` and `(n, R)` have
//! no partner and are left fixed.

use num_complex::Complex64;
use serde::Serialize;

use crate::ctqw::{AverageKind, TimeAveragedDist};
use crate::{pairwise_sum, BDChain, Error, Result, SpectralData};

/// Interior weights `1 - lambda^2` at or below this are treated as singular.
pub const MIN_INTERIOR_WEIGHT: f64 = 1e-13;

/// Nonzero interior eigenvectors are dumped only up to this size.
pub const MAX_EIGENPAIR_DUMP_N: usize = 64;

pub const COIN_L: usize = 0;
pub const COIN_R: usize = 1;

#[inline]
pub fn arc_index(vertex: usize, coin: usize) -> usize {
    2 * vertex + coin
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoinState {
    pub amps: Vec<Complex64>,
}

impl CoinState {
    /// `|vertex> (x) |coin>` on a path with last vertex `n`.
    pub fn basis(n: usize, vertex: usize, coin: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 2 * (n + 1)];
        amps[arc_index(vertex, coin)] = Complex64::new(1.0, 0.0);
        CoinState { amps }
    }

    /// The walk's fixed initial state `|0> (x) |R>`.
    pub fn initial(n: usize) -> Self {
        Self::basis(n, 0, COIN_R)
    }

    pub fn norm(&self) -> f64 {
        pairwise_sum(self.amps.iter().map(|a| a.norm_sqr())).sqrt()
    }

    /// Position marginal `|amp(j, L)|^2 + |amp(j, R)|^2`.
    pub fn position_probs(&self) -> Vec<f64> {
        self.amps
            .chunks_exact(2)
            .map(|p| p[0].norm_sqr() + p[1].norm_sqr())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SzegedyOperator {
    chain: BDChain,
    sqrt_left: Vec<f64>,
    sqrt_right: Vec<f64>,
}

impl SzegedyOperator {
    pub fn new(chain: &BDChain) -> Self {
        SzegedyOperator {
            sqrt_left: chain.p_left().iter().map(|p| p.sqrt()).collect(),
            sqrt_right: chain.p_right().iter().map(|p| p.sqrt()).collect(),
            chain: chain.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.chain.n()
    }

    pub fn chain(&self) -> &BDChain {
        &self.chain
    }

    pub fn state_len(&self) -> usize {
        2 * (self.n() + 1)
    }

    fn check_len(&self, amps: &[Complex64]) -> Result<()> {
        if amps.len() != self.state_len() {
            return Err(Error::LengthMismatch {
                expected: self.state_len(),
                got: amps.len(),
            });
        }
        Ok(())
    }

    pub fn apply_coin_in_place(&self, amps: &mut [Complex64]) -> Result<()> {
        self.check_len(amps)?;
        for j in 1..self.n() {
            let (l, r) = (self.sqrt_left[j], self.sqrt_right[j]);
            let (al, ar) = (amps[2 * j], amps[2 * j + 1]);
            let overlap = al * l + ar * r;
            amps[2 * j] = overlap * (2.0 * l) - al;
            amps[2 * j + 1] = overlap * (2.0 * r) - ar;
        }
        Ok(())
    }

    pub fn apply_shift_in_place(&self, amps: &mut [Complex64]) -> Result<()> {
        self.check_len(amps)?;
        for j in 1..=self.n() {
            amps.swap(2 * j - 1, 2 * j);
        }
        Ok(())
    }

    /// One step `S C`, in place. O(n).
    pub fn step_in_place(&self, amps: &mut [Complex64]) -> Result<()> {
        self.apply_coin_in_place(amps)?;
        self.apply_shift_in_place(amps)
    }

    pub fn apply(&self, state: &CoinState) -> Result<CoinState> {
        let mut next = state.clone();
        self.step_in_place(&mut next.amps)?;
        Ok(next)
    }

    /// Iterator over the position distributions at `t = 0, 1, 2, ...`.
    pub fn evolution(&self) -> Evolution<'_> {
        Evolution {
            op: self,
            state: CoinState::initial(self.n()),
        }
    }

    /// Embeds a vertex vector: `v(0)|0,R> + sum_j v(j)|j>|phi_j> + v(n)|n,L>`.
    pub fn lift_vector(&self, v: &[f64]) -> Result<Vec<Complex64>> {
        let n = self.n();
        if v.len() != n + 1 {
            return Err(Error::LengthMismatch {
                expected: n + 1,
                got: v.len(),
            });
        }
        // sqrt_left[0] = sqrt_right[n] = 0, so the walls need no special case.
        Ok((0..=n)
            .flat_map(|j| {
                [
                    Complex64::new(v[j] * self.sqrt_left[j], 0.0),
                    Complex64::new(v[j] * self.sqrt_right[j], 0.0),
                ]
            })
            .collect())
    }

    /// Dense `2(n+1)`-square matrix of `U`, column `k` = `U e_k`.
    /// Intended for small `n`.
    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let len = self.state_len();
        let mut cols = Vec::with_capacity(len);
        for k in 0..len {
            let mut e = vec![Complex64::new(0.0, 0.0); len];
            e[k] = Complex64::new(1.0, 0.0);
            self.step_in_place(&mut e).expect("length matches");
            cols.push(e);
        }
        (0..len)
            .map(|r| (0..len).map(|c| cols[c][r]).collect())
            .collect()
    }
}

pub struct Evolution<'a> {
    op: &'a SzegedyOperator,
    state: CoinState,
}

impl Evolution<'_> {
    pub fn state(&self) -> &CoinState {
        &self.state
    }
}

impl Iterator for Evolution<'_> {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        let probs = self.state.position_probs();
        self.op
            .step_in_place(&mut self.state.amps)
            .expect("state length is fixed by the operator");
        Some(probs)
    }
}

/// `P(X_t = j | X_0 = 0)` after `t` applications of `U`.
pub fn dtqw_distribution(op: &SzegedyOperator, t: usize) -> Vec<f64> {
    op.evolution().nth(t).expect("evolution is infinite")
}

/// Cesaro mean of the simulated distributions over `t = 0..T-1`.
pub fn dtqw_time_average_empirical(
    op: &SzegedyOperator,
    horizon: usize,
) -> Result<TimeAveragedDist> {
    let mut out = dtqw_time_average_checkpoints(op, &[horizon])?;
    Ok(out.remove(0))
}

/// Cesaro means at several horizons from a single simulation run.
/// Results are returned in the order of `horizons`.
pub fn dtqw_time_average_checkpoints(
    op: &SzegedyOperator,
    horizons: &[usize],
) -> Result<Vec<TimeAveragedDist>> {
    if horizons.contains(&0) {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let last = horizons.iter().copied().max().unwrap_or(0);
    let mut sorted: Vec<usize> = horizons.to_vec();
    sorted.sort_unstable();
    sorted.dedup();

    let dim = op.n() + 1;
    let mut acc = vec![0.0; dim];
    let mut snapshots = Vec::with_capacity(sorted.len());
    let mut next = sorted.iter().peekable();
    for (t, probs) in op.evolution().take(last).enumerate() {
        for (a, p) in acc.iter_mut().zip(&probs) {
            *a += p;
        }
        if next.peek() == Some(&&(t + 1)) {
            next.next();
            let inv = 1.0 / (t + 1) as f64;
            snapshots.push((t + 1, acc.iter().map(|a| a * inv).collect::<Vec<_>>()));
        }
    }
    Ok(horizons
        .iter()
        .map(|&h| {
            let probs = snapshots
                .iter()
                .find(|(t, _)| *t == h)
                .map(|(_, p)| p.clone())
                .expect("every horizon was recorded");
            TimeAveragedDist {
                probs,
                kind: AverageKind::DtqwEmpirical,
                horizon: Some(h as f64),
            }
        })
        .collect())
}

/// `1 / (1 - lambda_l^2)` for the interior eigenvalues `l = 1..n-1`.
fn interior_weights(spec: &SpectralData) -> Result<Vec<f64>> {
    let n = spec.n();
    (1..n)
        .map(|l| {
            let lam = spec.eigenvalues[l];
            let w = 1.0 - lam * lam;
            if w <= MIN_INTERIOR_WEIGHT {
                Err(Error::SingularInteriorWeight { index: l, value: w })
            } else {
                Ok(1.0 / w)
            }
        })
        .collect()
}

fn check_pair(chain: &BDChain, spec: &SpectralData) -> Result<()> {
    if chain.n() != spec.n() {
        return Err(Error::LengthMismatch {
            expected: chain.n() + 1,
            got: spec.dim(),
        });
    }
    Ok(())
}

/// Closed-form time-averaged distribution of the walk.
///
/// ```text
/// p_D(j) = 1/2 v_0(j)^2 v_0(0)^2 + 1/2 v_n(j)^2 v_n(0)^2 + 1/2 sum_l v_l(j)^2 v_l(0)^2
///        + 1/2 sum_{l=1}^{n-1} (pR_{j-1} v_l(j-1)^2 - lambda_l^2 v_l(j)^2
///                               + pL_{j+1} v_l(j+1)^2) v_l(0)^2 / (1 - lambda_l^2)
/// ```
/// with out-of-range terms taken as zero.
pub fn dtqw_time_average(chain: &BDChain, spec: &SpectralData) -> Result<TimeAveragedDist> {
    check_pair(chain, spec)?;
    let n = spec.n();
    let inv = interior_weights(spec)?;
    let w0 = spec.origin_weights();
    let (pr, pl) = (chain.p_right(), chain.p_left());
    let vec = |l: usize| spec.vector(l);

    let probs = (0..=n)
        .map(|j| {
            let edges = 0.5 * vec(0)[j].powi(2) * w0[0] + 0.5 * vec(n)[j].powi(2) * w0[n];
            let full = 0.5 * pairwise_sum((0..=n).map(|l| vec(l)[j].powi(2) * w0[l]));
            let interior = 0.5
                * pairwise_sum((1..n).map(|l| {
                    let v = vec(l);
                    let lam2 = spec.eigenvalues[l].powi(2);
                    let below = if j > 0 {
                        pr[j - 1] * v[j - 1].powi(2)
                    } else {
                        0.0
                    };
                    let above = if j < n {
                        pl[j + 1] * v[j + 1].powi(2)
                    } else {
                        0.0
                    };
                    (below - lam2 * v[j].powi(2) + above) * w0[l] * inv[l - 1]
                }));
            edges + full + interior
        })
        .collect();
    Ok(TimeAveragedDist {
        probs,
        kind: AverageKind::DtqwClosed,
        horizon: None,
    })
}

/// `F_D(k) - F_C(k)
///  = 1/2 sum_{l=1}^{n-1} (-pR_k v_l(k)^2 + pL_{k+1} v_l(k+1)^2) v_l(0)^2 / (1 - lambda_l^2)`
/// for `0 <= k <= n - 1`.
pub fn dtqw_cdf_correction(chain: &BDChain, spec: &SpectralData, k: usize) -> Result<f64> {
    check_pair(chain, spec)?;
    let n = spec.n();
    if k >= n {
        return Err(Error::IndexOutOfRange {
            index: k,
            max: n - 1,
        });
    }
    let inv = interior_weights(spec)?;
    let (pr, pl) = (chain.p_right(), chain.p_left());
    Ok(0.5
        * pairwise_sum((1..n).map(|l| {
            let v = spec.vector(l);
            (-pr[k] * v[k] * v[k] + pl[k + 1] * v[k + 1] * v[k + 1]) * v[0] * v[0] * inv[l - 1]
        })))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    /// `mu = 1`, eigenvector `lift v_0`.
    Top,
    /// `mu = exp(+- i arccos lambda_l)` for `1 <= l <= n - 1`.
    Interior,
    /// `mu = -1`, eigenvector `lift v_n`.
    Bottom,
}

/// An eigenpair of `U` built from an eigenpair of `J`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedEigenpair {
    pub kind: PairKind,
    /// Signed index: `0`, `n`, or `+l` / `-l` for the two interior branches.
    pub label: i64,
    pub lambda: f64,
    pub mu: Complex64,
    pub u: Vec<Complex64>,
}

impl LiftedEigenpair {
    /// Weight turning `|u><u|` into an orthogonal projector.
    pub fn projector_weight(&self) -> f64 {
        match self.kind {
            PairKind::Interior => 1.0 / (2.0 * (1.0 - self.lambda * self.lambda)),
            PairKind::Top | PairKind::Bottom => 1.0,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        pairwise_sum(self.u.iter().map(|c| c.norm_sqr()))
    }
}

/// The `2n` eigenpairs `(1, lift v_0)`, `(-1, lift v_n)` and, for each
/// interior `l`, `(mu, lift v_l - mu S lift v_l)` with
/// `mu = exp(+- i arccos lambda_l)`.
pub fn lifted_eigenpairs(chain: &BDChain, spec: &SpectralData) -> Result<Vec<LiftedEigenpair>> {
    check_pair(chain, spec)?;
    let op = SzegedyOperator::new(chain);
    let n = spec.n();
    let mut pairs = Vec::with_capacity(2 * n);
    pairs.push(LiftedEigenpair {
        kind: PairKind::Top,
        label: 0,
        lambda: spec.eigenvalues[0],
        mu: Complex64::new(1.0, 0.0),
        u: op.lift_vector(spec.vector(0))?,
    });
    for l in 1..n {
        let lambda = spec.eigenvalues[l];
        let lifted = op.lift_vector(spec.vector(l))?;
        let mut shifted = lifted.clone();
        op.apply_shift_in_place(&mut shifted)?;
        let theta = lambda.clamp(-1.0, 1.0).acos();
        for sign in [1i64, -1] {
            let mu = Complex64::cis(sign as f64 * theta);
            let u = lifted
                .iter()
                .zip(&shifted)
                .map(|(a, b)| a - mu * b)
                .collect();
            pairs.push(LiftedEigenpair {
                kind: PairKind::Interior,
                label: sign * l as i64,
                lambda,
                mu,
                u,
            });
        }
    }
    pairs.push(LiftedEigenpair {
        kind: PairKind::Bottom,
        label: n as i64,
        lambda: spec.eigenvalues[n],
        mu: Complex64::new(-1.0, 0.0),
        u: op.lift_vector(spec.vector(n))?,
    });
    Ok(pairs)
}

/// `U^t psi` rebuilt from the lifted eigenpairs:
/// `sum_k w_k mu_k^t |u_k><u_k|psi>`.
///
/// Exact only for states in the span of the lifted eigenvectors, which
/// includes the walk's initial state.
pub fn reconstruct_state(pairs: &[LiftedEigenpair], psi: &[Complex64], t: u32) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
    for pair in pairs {
        let overlap: Complex64 = pair.u.iter().zip(psi).map(|(u, p)| u.conj() * p).sum();
        let coeff = overlap * pair.mu.powu(t) * pair.projector_weight();
        for (o, u) in out.iter_mut().zip(&pair.u) {
            *o += coeff * u;
        }
    }
    out
}

#[derive(Debug, Serialize)]
struct EigenpairRecord {
    kind: PairKind,
    label: i64,
    lambda: f64,
    mu: [f64; 2],
    /// `[re, im]` per arc, arc index `2 j + c` with `L = 0`, `R = 1`.
    u: Vec<[f64; 2]>,
}

/// JSON diagnostics for the lifted eigenpairs. Refuses `n` above
/// [`MAX_EIGENPAIR_DUMP_N`].
pub fn eigenpairs_to_json(pairs: &[LiftedEigenpair]) -> Result<serde_json::Value> {
    let n = pairs.first().map(|p| p.u.len() / 2 - 1).unwrap_or(0);
    if n > MAX_EIGENPAIR_DUMP_N {
        return Err(Error::InvalidArgument(format!(
            "eigenpair dumps are limited to n <= {MAX_EIGENPAIR_DUMP_N}, got n = {n}"
        )));
    }
    let records: Vec<EigenpairRecord> = pairs
        .iter()
        .map(|p| EigenpairRecord {
            kind: p.kind,
            label: p.label,
            lambda: p.lambda,
            mu: [p.mu.re, p.mu.im],
            u: p.u.iter().map(|c| [c.re, c.im]).collect(),
        })
        .collect();
    Ok(serde_json::json!({ "n": n, "pairs": records }))
}
