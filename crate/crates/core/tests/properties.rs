mod support;

use num_complex::Complex64;
use proptest::prelude::*;
use qwalk::ctqw::{ctqw_time_average, ctqw_time_average_finite};
use qwalk::scaling::{ks_distance, StepCDF};
use qwalk::szegedy::{dtqw_cdf_correction, dtqw_time_average, SzegedyOperator};
use qwalk::{BDChain, JacobiMatrix, SpectralData};

fn chain_strategy(max_n: usize) -> impl Strategy<Value = BDChain> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(0.02f64..0.98, n - 1)
            .prop_map(move |interior| BDChain::new(n, &interior).unwrap())
    })
}

/// Random chains whose interior probabilities stay within `[low, high]`.
fn sized_chain(sizes: &'static [usize], low: f64, high: f64) -> impl Strategy<Value = BDChain> {
    prop::sample::select(sizes).prop_flat_map(move |n| {
        prop::collection::vec(low..=high, n - 1)
            .prop_map(move |interior| BDChain::new(n, &interior).unwrap())
    })
}

const SIZES: &[usize] = &[1, 2, 5, 10, 50, 200];

fn state_strategy(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len).prop_map(|v| {
        let mut amps: Vec<Complex64> = v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let norm = amps
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
            .max(1e-300);
        amps.iter_mut().for_each(|a| *a /= norm);
        amps
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn walls_and_stochasticity(chain in chain_strategy(500)) {
        let n = chain.n();
        prop_assert_eq!(chain.p_right()[0], 1.0);
        prop_assert_eq!(chain.p_left()[n], 1.0);
        for j in 0..=n {
            prop_assert_eq!(chain.p_left()[j] + chain.p_right()[j], 1.0);
        }
        if n <= 60 {
            for row in chain.transition_matrix() {
                prop_assert_eq!(row.iter().sum::<f64>(), 1.0);
            }
        }
    }

    #[test]
    fn detailed_balance(chain in chain_strategy(500)) {
        let (pr, pl) = (chain.p_right(), chain.p_left());
        let Ok(st) = chain.stationary_distribution() else {
            // Only a drift strong enough to underflow pi is allowed to fail.
            return Ok(());
        };
        prop_assert!((st.pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(st.pi.iter().all(|&p| p > 0.0));
        for j in 0..chain.n() {
            prop_assert!((st.pi[j] * pr[j] - pl[j + 1] * st.pi[j + 1]).abs() < 1e-12);
        }
    }

    #[test]
    fn spectral_invariants(chain in sized_chain(SIZES, 0.02, 0.98)) {
        let jac = JacobiMatrix::from_chain(&chain);
        // Strongly metastable chains can push lambda_0 - lambda_1 below
        // rounding; those are reported, not silently accepted.
        let spec = match jac.eigendecompose() {
            Ok(s) => s,
            Err(qwalk::Error::DegenerateSpectrum { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let n = spec.n();
        prop_assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-10);
        prop_assert!((spec.eigenvalues[n] + 1.0).abs() < 1e-10);
        for l in 0..=n {
            prop_assert!((spec.eigenvalues[l] + spec.eigenvalues[n - l]).abs() < 1e-10);
            if l < n {
                prop_assert!(spec.eigenvalues[l] > spec.eigenvalues[l + 1]);
            }
            let v = spec.vector(l);
            let jv = jac.apply(v).unwrap();
            let resid = jv.iter().zip(v).map(|(a, b)| (a - spec.eigenvalues[l] * b).abs()).fold(0.0, f64::max);
            prop_assert!(resid <= 1e-10, "residual {resid}");
            prop_assert!(v[0] >= 0.0);
            for m in l..=n {
                let dot: f64 = v.iter().zip(spec.vector(m)).map(|(a, b)| a * b).sum();
                let expected = if l == m { 1.0 } else { 0.0 };
                prop_assert!((dot - expected).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn perron_vector_is_sqrt_pi(chain in sized_chain(SIZES, 0.4, 0.6)) {
        let spec = SpectralData::from_chain(&chain).unwrap();
        let st = chain.stationary_distribution().unwrap();
        for (v, p) in spec.vector(0).iter().zip(&st.pi) {
            prop_assert!((v - p.sqrt()).abs() < 1e-10);
            prop_assert!((v * v - p).abs() < 1e-10);
        }
    }

    #[test]
    fn first_components_stay_positive(chain in sized_chain(SIZES, 0.4, 0.6)) {
        let spec = SpectralData::from_chain(&chain).unwrap();
        let min = spec.eigenvectors.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
        prop_assert!(min > 1e-14, "min v_l(0) = {min}");
    }

    #[test]
    fn ctqw_average_dominates_perron_term(chain in chain_strategy(60)) {
        let spec = SpectralData::from_chain(&chain).unwrap();
        let p = ctqw_time_average(&spec);
        prop_assert!((p.total() - 1.0).abs() < 1e-10);
        let v0 = spec.vector(0);
        for j in 0..=chain.n() {
            let floor = v0[j] * v0[j] * v0[0] * v0[0];
            prop_assert!(p.probs[j] >= floor * (1.0 - 1e-12));
        }
    }

    #[test]
    fn finite_horizon_approaches_the_limit(chain in chain_strategy(20)) {
        let spec = SpectralData::from_chain(&chain).unwrap();
        let limit = ctqw_time_average(&spec);
        let c = qwalk::ctqw::finite_average_error_constant(&spec);
        for t in [1e2, 1e3, 1e4, 2e4] {
            let d = ctqw_time_average_finite(&spec, t).unwrap().sup_distance(&limit).unwrap();
            prop_assert!(d <= c / t + 1e-12);
        }
    }

    #[test]
    fn szegedy_step_is_unitary(chain in chain_strategy(500), seed in any::<u64>()) {
        let op = SzegedyOperator::new(&chain);
        let len = op.state_len();
        let mut rng = support::rng(seed);
        let state = {
            use rand::Rng;
            let mut v: Vec<Complex64> = (0..len).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            v.iter_mut().for_each(|a| *a /= norm);
            v
        };
        let mut next = state.clone();
        op.step_in_place(&mut next).unwrap();
        let norm = next.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coin_and_shift_are_involutions(
        (chain, state) in chain_strategy(40).prop_flat_map(|c| {
            let len = 2 * (c.n() + 1);
            (Just(c), state_strategy(len))
        })
    ) {
        let op = SzegedyOperator::new(&chain);
        let mut s = state.clone();
        op.apply_coin_in_place(&mut s).unwrap();
        op.apply_coin_in_place(&mut s).unwrap();
        prop_assert!(s.iter().zip(&state).all(|(a, b)| (a - b).norm() < 1e-13));
        op.apply_shift_in_place(&mut s).unwrap();
        op.apply_shift_in_place(&mut s).unwrap();
        prop_assert!(s.iter().zip(&state).all(|(a, b)| (a - b).norm() < 1e-13));
    }

    #[test]
    fn cdf_difference_is_the_correction_term(chain in chain_strategy(50)) {
        let spec = SpectralData::from_chain(&chain).unwrap();
        let pc = ctqw_time_average(&spec);
        let pd = dtqw_time_average(&chain, &spec).unwrap();
        prop_assert!((pd.total() - 1.0).abs() < 1e-10);
        prop_assert!(pd.probs.iter().all(|&p| p >= -1e-12));
        let fc = StepCDF::from_dist(&pc);
        let fd = StepCDF::from_dist(&pd);
        let mut max_corr = 0.0f64;
        for k in 0..chain.n() {
            let corr = dtqw_cdf_correction(&chain, &spec, k).unwrap();
            prop_assert!((fd.values[k] - fc.values[k] - corr).abs() < 1e-10);
            max_corr = max_corr.max(corr.abs());
        }
        let ks = ks_distance(&fc, &fd).unwrap();
        prop_assert!((0.0..=1.0).contains(&ks));
        prop_assert!((ks - max_corr).abs() < 1e-10);
    }
}
