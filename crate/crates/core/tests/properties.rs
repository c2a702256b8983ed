use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use trajent::oracle::{
    enumerate_trajectories, oracle_conditional_set, oracle_entropy, sequence_mass, set_mass, OracleConfig,
};
use trajent::{
    avoid_transform, entropy_avoiding, entropy_matrix, entropy_via_sequence, fixtures, gen, trajectory_entropy, Chain,
    Chain32, CondQuery, Error, StateId,
};

fn irreducible_chain() -> impl Strategy<Value = Chain> {
    (any::<u64>(), 2usize..=7, 0.05f64..0.7)
        .prop_map(|(seed, n, density)| gen::irreducible(&mut ChaCha8Rng::seed_from_u64(seed), n, density))
}

fn reaching_chain() -> impl Strategy<Value = (Chain, StateId)> {
    (any::<u64>(), 2usize..=7, 0.05f64..0.7).prop_map(|(seed, n, density)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = StateId(seed as usize % n);
        (gen::reaching(&mut rng, n, d, density), d)
    })
}

#[test]
fn oracle_matches_enumerable_fixture_entries() {
    // pairs whose trajectories must pass the fair 5 -> {1, 4} coin repeatedly
    // have too many paths to enumerate; the rest are checked
    let c = fixtures::five_state();
    let h = entropy_matrix(&c).unwrap();
    let config = OracleConfig {
        max_paths: 200_000,
        ..OracleConfig::default()
    };
    let mut checked = Vec::new();
    for s in c.states() {
        for d in c.states() {
            let Ok(e) = enumerate_trajectories(&c, s, d, &config) else {
                continue;
            };
            let brute = oracle_entropy(&e).unwrap();
            assert!(
                (brute - h.get(s, d)).abs() <= 1e-6,
                "{s} -> {d}: {brute} vs {}",
                h.get(s, d)
            );
            checked.push((c.label(s).to_string(), c.label(d).to_string()));
        }
    }
    assert!(checked.len() >= 10, "{checked:?}");
}

#[test]
fn set_conditioning_on_fixture() {
    let c = fixtures::five_state();
    let ids = |ls: &[&str]| ls.iter().map(|l| c.state(l).unwrap()).collect::<Vec<_>>();
    let e = enumerate_trajectories(
        &c,
        c.state("1").unwrap(),
        c.state("5").unwrap(),
        &OracleConfig::default(),
    )
    .unwrap();
    assert_eq!(oracle_conditional_set(&e, &ids(&["2", "3"])).unwrap(), 0.0);
    // sets ignore order, sequences do not
    assert!((set_mass(&e, &ids(&["2", "3"])) - sequence_mass(&e, &ids(&["3", "2"]))).abs() < 1e-15);
    assert_eq!(sequence_mass(&e, &ids(&["2", "3"])), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn entropies_satisfy_first_step_recursion(c in irreducible_chain()) {
        let h = entropy_matrix(&c).unwrap();
        for s in c.states() {
            for d in c.states().filter(|&d| d != s) {
                let rhs = c.local_entropy(s).unwrap()
                    + c.states().filter(|&k| k != d).map(|k| c.prob(s, k) * h.get(k, d)).sum::<f64>();
                prop_assert!((h.get(s, d) - rhs).abs() <= 1e-8 * (1.0 + rhs));
                prop_assert!(h.get(s, d) >= 0.0);
            }
        }
    }

    #[test]
    fn return_entropy_matches_first_step_form(c in irreducible_chain()) {
        let h = entropy_matrix(&c).unwrap();
        for d in c.states() {
            let rhs = c.local_entropy(d).unwrap()
                + c.states().filter(|&k| k != d).map(|k| c.prob(d, k) * h.get(k, d)).sum::<f64>();
            prop_assert!((h.get(d, d) - rhs).abs() <= 1e-8 * (1.0 + rhs));
        }
    }

    #[test]
    fn avoid_transform_kills_u_and_stays_stochastic((c, d) in reaching_chain(), pick in any::<usize>()) {
        let n = c.n_states();
        let u = StateId((d.0 + 1 + pick % (n - 1)) % n);
        let t = avoid_transform(&c, u, d).unwrap();
        for i in t.states() {
            let sum: f64 = t.row(i).iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-9);
            if i != u {
                let into_u = t.prob(i, u);
                // rows that cannot avoid u keep the absorbing-chain row
                prop_assert!(into_u == 0.0 || t.prob(i, d) == 0.0);
            }
        }
        prop_assert!(t.is_absorbing(u) && t.is_absorbing(d));
    }

    #[test]
    fn conditioning_sequence_legs_add_up((c, d) in reaching_chain(), a in any::<usize>(), b in any::<usize>()) {
        let n = c.n_states();
        let s = StateId(a % n);
        let u = StateId(b % n);
        prop_assume!(u != d);
        match entropy_via_sequence(&c, &CondQuery::new(s, d, vec![u])) {
            Ok(r) => {
                prop_assert_eq!(r.per_leg.len(), 2);
                prop_assert!((r.entropy - r.per_leg.iter().sum::<f64>()).abs() <= 1e-12);
                prop_assert!(r.event_probability > 0.0 && r.event_probability <= 1.0 + 1e-12);
                prop_assert!(r.per_leg.iter().all(|&h| h >= 0.0));
            }
            Err(e) => prop_assert!(matches!(e, Error::ImpossibleConditioning { .. }), "{e}"),
        }
    }

    #[test]
    fn conditioning_on_an_avoidable_event_never_fails_with_solver_errors(c in irreducible_chain(), a in any::<usize>(), b in any::<usize>()) {
        let n = c.n_states();
        prop_assume!(n >= 3);
        let s = StateId(a % n);
        let d = StateId((s.0 + 1) % n);
        let u = StateId((s.0 + 1 + 1 + b % (n - 2)) % n);
        match entropy_avoiding(&c, s, d, u) {
            Ok(h) => prop_assert!(h >= 0.0 && h.is_finite()),
            Err(e) => prop_assert!(matches!(e, Error::AlwaysPassesThroughU { .. }), "{e}"),
        }
    }

    #[test]
    fn single_precision_agrees_with_double(c in irreducible_chain()) {
        let c32 = Chain32::new(
            c.labels().to_vec(),
            c.matrix().into_iter().map(|r| r.into_iter().map(|x| x as f32).collect()).collect(),
        ).unwrap();
        let (s, d) = (StateId(0), StateId(c.n_states() - 1));
        let h64 = trajectory_entropy(&c, s, d).unwrap();
        let h32 = trajectory_entropy(&c32, s, d).unwrap();
        prop_assert!((h64 - f64::from(h32)).abs() <= 1e-3 * (1.0 + h64));
    }
}
