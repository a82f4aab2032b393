//! Property tests that cut across modules, driven by proptest seeds.

use proptest::prelude::*;
use stochgamma_core::cubical::{self, TruncatedCubicalSet};
use stochgamma_core::finprob;
use stochgamma_core::gapped;
use stochgamma_core::infoloss::{self, LossFunctional};
use stochgamma_core::linalg;
use stochgamma_core::quantum::{self, QuantumChannel};
use stochgamma_core::sample;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative_and_loss_additive(seed in any::<u64>(), a in 1usize..5, b in 1usize..5, c in 1usize..5, d in 1usize..5) {
        let mut rng = sample::rng(seed);
        let p = sample::probability(&mut rng, a, 12);
        let f = sample::morphism_from(&mut rng, &p, b, 6);
        let g = sample::morphism_from(&mut rng, f.target(), c, 6);
        let h = sample::morphism_from(&mut rng, g.target(), d, 6);
        let left = finprob::compose(&h, &finprob::compose(&g, &f).unwrap()).unwrap();
        let right = finprob::compose(&finprob::compose(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(&left, &right);
        let loss = LossFunctional::shannon(1.0);
        let sum = loss.eval(&f).unwrap() + loss.eval(&g).unwrap() + loss.eval(&h).unwrap();
        prop_assert!((loss.eval(&left).unwrap() - sum).abs() < 1e-12);
    }

    #[test]
    fn shannon_loss_matches_entropy_drop(seed in any::<u64>(), a in 1usize..6, b in 1usize..6) {
        let mut rng = sample::rng(seed);
        let p = sample::probability(&mut rng, a, 12);
        let f = sample::morphism_from(&mut rng, &p, b, 6);
        let drop = infoloss::shannon(f.target()) - infoloss::shannon(f.source());
        prop_assert!((infoloss::loss_fp(&f, 1.0) - drop).abs() < 1e-12);
    }

    #[test]
    fn smash_multiplies_reduced_euler(x in 1usize..7, y in 1usize..7) {
        let k = TruncatedCubicalSet::discrete(x, 1);
        let l = TruncatedCubicalSet::discrete(y, 1);
        let s = cubical::smash_cubical(&k, &l);
        prop_assert_eq!(s.reduced_euler(), k.reduced_euler() * l.reduced_euler());
    }

    #[test]
    fn channels_preserve_states(seed in any::<u64>(), din in 1usize..4, dout in 1usize..4, k in 1usize..4) {
        let mut rng = sample::rng(seed);
        let ch = QuantumChannel::from_kraus(quantum::random_kraus(&mut rng, din, dout, k)).unwrap();
        let rho = quantum::random_density(&mut rng, din);
        let out = ch.apply(&rho).unwrap();
        prop_assert!(quantum::validate_density(&out).is_ok());
    }

    #[test]
    fn gibbs_states_of_kronecker_sums_factor(seed in any::<u64>(), n in 1usize..4, m in 1usize..4, beta in 0.1f64..3.0) {
        let mut rng = sample::rng(seed);
        let h = gapped::random_gapped(&mut rng, n, 1.0, 2.0);
        let h2 = gapped::random_gapped(&mut rng, m, 1.0, 2.0);
        let s = gapped::kronecker_sum_gap(&h, &h2).unwrap();
        let joint = gapped::gibbs(&s, beta).unwrap();
        let product = linalg::kron(gapped::gibbs(&h, beta).unwrap().matrix(), gapped::gibbs(&h2, beta).unwrap().matrix());
        prop_assert!(linalg::max_abs(&(joint.matrix() - product)) < 1e-9);
    }
}
