//! Absorbing-state analysis: absorption probabilities and fundamental
//! matrices, both computed by dense LU solves.

use crate::chain::{MarkovChain, StateId};
use crate::error::{Error, Result};
use crate::linalg::LuFactors;
use crate::scalar::Real;

/// Probabilities of being absorbed by `target_u` or by `target_d` once both
/// are made absorbing, for every starting state.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionResult<T> {
    pub target_u: StateId,
    pub target_d: StateId,
    pub a_u: Vec<T>,
    pub a_d: Vec<T>,
    /// States whose absorption probabilities are positive but below
    /// [`Real::conditioning_threshold`].
    pub poorly_conditioned: Vec<StateId>,
}

impl<T: Real> AbsorptionResult<T> {
    /// Probability that a walk from `s` hits `u` before `d`.
    pub fn alpha(&self, s: StateId) -> T {
        self.a_u[s.0]
    }
}

/// Expected number of visits to each transient state before hitting the
/// destination: the inverse of `I - Q_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct VisitCounts<T> {
    pub destination: StateId,
    /// Row and column order of `rows`.
    pub states: Vec<StateId>,
    rows: Vec<T>,
}

impl<T: Real> VisitCounts<T> {
    fn position(&self, s: StateId) -> Option<usize> {
        self.states.iter().position(|&x| x == s)
    }

    /// Expected visits to `k` starting from `s`; `None` if either is the destination.
    pub fn get(&self, s: StateId, k: StateId) -> Option<T> {
        let m = self.states.len();
        Some(self.rows[self.position(s)? * m + self.position(k)?])
    }

    /// Row for start state `s`, in the order of [`VisitCounts::states`].
    pub fn row(&self, s: StateId) -> Option<&[T]> {
        let m = self.states.len();
        let i = self.position(s)?;
        Some(&self.rows[i * m..(i + 1) * m])
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }
}

/// Replaces the rows of `targets` by unit self-loops. Other rows are untouched.
pub fn make_absorbing<T: Real>(chain: &MarkovChain<T>, targets: &[StateId]) -> Result<MarkovChain<T>> {
    if targets.is_empty() {
        return Err(Error::OutOfRange {
            name: "number of absorbing targets",
            value: 0.0,
        });
    }
    for &t in targets {
        chain.check(t)?;
    }
    let n = chain.n_states();
    let mut p = chain.flat().to_vec();
    for &t in targets {
        let row = &mut p[t.0 * n..(t.0 + 1) * n];
        row.iter_mut().for_each(|x| *x = T::zero());
        row[t.0] = T::one();
    }
    MarkovChain::from_flat(chain.labels().to_vec(), p)
}

/// Factors `I - Q` where `Q` is `chain` restricted to `states`.
pub(crate) fn factor_transient<T: Real>(chain: &MarkovChain<T>, states: &[StateId]) -> Result<LuFactors<T>> {
    let m = states.len();
    let mut a = vec![T::zero(); m * m];
    for (r, &i) in states.iter().enumerate() {
        for (c, &j) in states.iter().enumerate() {
            let ident = if r == c { T::one() } else { T::zero() };
            a[r * m + c] = ident - chain.prob(i, j);
        }
    }
    LuFactors::factor(m, a)
}

/// Probability of absorption in `target` from every state of `absorbing`,
/// a chain whose targets are already absorbing.
fn hitting_probabilities<T: Real>(absorbing: &MarkovChain<T>, target: StateId, others: &[StateId]) -> Result<Vec<T>> {
    let n = absorbing.n_states();
    let reach = absorbing.reaching(&[target]);
    let unknown: Vec<StateId> = absorbing
        .states()
        .filter(|&i| i != target && reach[i.0] && !others.contains(&i))
        .collect();
    let mut h = vec![T::zero(); n];
    h[target.0] = T::one();
    if unknown.is_empty() {
        return Ok(h);
    }
    let lu = factor_transient(absorbing, &unknown)?;
    let rhs: Vec<T> = unknown.iter().map(|&i| absorbing.prob(i, target)).collect();
    for (&i, x) in unknown.iter().zip(lu.solve(&rhs)) {
        h[i.0] = x.max(T::zero()).min(T::one());
    }
    Ok(h)
}

/// Makes `u` and `d` absorbing and solves for the absorption probabilities.
///
/// Absorption must be certain from every state: a state from which the walk
/// can wander into a region reaching neither target is reported as
/// [`Error::AbsorptionNotCertain`].
pub fn absorption_probabilities<T: Real>(
    chain: &MarkovChain<T>,
    u: StateId,
    d: StateId,
) -> Result<AbsorptionResult<T>> {
    chain.check(u)?;
    chain.check(d)?;
    if u == d {
        return Err(Error::TargetsEqual(chain.label(u).to_string()));
    }
    let bar = make_absorbing(chain, &[u, d])?;
    let reach_any = bar.reaching(&[u, d]);
    let stuck: Vec<StateId> = bar.states().filter(|i| !reach_any[i.0]).collect();
    if !stuck.is_empty() {
        let leaky = bar.reaching(&stuck);
        let first = bar
            .states()
            .find(|i| leaky[i.0])
            .expect("stuck states leak to themselves");
        return Err(Error::AbsorptionNotCertain {
            state: chain.label(first).to_string(),
        });
    }

    let mut a_u = hitting_probabilities(&bar, u, &[d])?;
    let mut a_d = hitting_probabilities(&bar, d, &[u])?;
    let eps = T::absorption_epsilon();
    let warn = T::conditioning_threshold();
    let mut poorly_conditioned = Vec::new();
    for i in 0..chain.n_states() {
        for v in [&mut a_u[i], &mut a_d[i]] {
            if *v <= eps {
                *v = T::zero();
            } else if *v < warn && !poorly_conditioned.contains(&StateId(i)) {
                poorly_conditioned.push(StateId(i));
            }
        }
    }
    Ok(AbsorptionResult {
        target_u: u,
        target_d: d,
        a_u,
        a_d,
        poorly_conditioned,
    })
}

/// `(I - Q_d)^{-1}` over all states other than `d`.
///
/// Every other state must reach `d` with positive probability.
pub fn expected_visits<T: Real>(chain: &MarkovChain<T>, d: StateId) -> Result<VisitCounts<T>> {
    chain.check(d)?;
    let reach = chain.reaching(&[d]);
    let unreachable: Vec<String> = chain
        .states()
        .filter(|i| !reach[i.0])
        .map(|i| chain.label(i).to_string())
        .collect();
    if !unreachable.is_empty() {
        return Err(Error::DestinationUnreachable { states: unreachable });
    }
    let states: Vec<StateId> = chain.states().filter(|&i| i != d).collect();
    let rows = if states.is_empty() {
        Vec::new()
    } else {
        factor_transient(chain, &states)?.inverse()
    };
    Ok(VisitCounts {
        destination: d,
        states,
        rows,
    })
}

/// Sub-chain on the states that can reach `d`, with the kept states in their
/// original order.
///
/// The kept set must be closed; for chains produced by the avoid transform
/// this always holds.
pub fn restrict_to_reaching<T: Real>(chain: &MarkovChain<T>, d: StateId) -> Result<(MarkovChain<T>, Vec<StateId>)> {
    chain.check(d)?;
    let reach = chain.reaching(&[d]);
    let kept: Vec<StateId> = chain.states().filter(|i| reach[i.0]).collect();
    for &i in &kept {
        if chain.successors(i).any(|(j, _)| !reach[j.0]) {
            return Err(Error::NotClosed {
                destination: chain.label(d).to_string(),
                state: chain.label(i).to_string(),
            });
        }
    }
    Ok((chain.induced(&kept)?, kept))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::five_state;

    fn st(c: &MarkovChain<f64>, l: &str) -> StateId {
        c.state(l).unwrap()
    }

    #[test]
    fn make_absorbing_replaces_only_target_rows() {
        let c = five_state();
        let five = st(&c, "5");
        let bar = make_absorbing(&c, &[five]).unwrap();
        assert_eq!(bar.row(five), &[0.0, 0.0, 0.0, 0.0, 1.0]);
        for i in c.states().filter(|&i| i != five) {
            assert_eq!(bar.row(i), c.row(i));
        }
        assert_eq!(make_absorbing(&bar, &[five]).unwrap(), bar);
        assert!(make_absorbing(&c, &[]).is_err());
    }

    #[test]
    fn fixture_absorption_probabilities() {
        let c = five_state();
        let (one, three, four, five) = (st(&c, "1"), st(&c, "3"), st(&c, "4"), st(&c, "5"));
        let ab = absorption_probabilities(&c, four, five).unwrap();
        assert!((ab.alpha(one) - 0.375).abs() < 1e-15);
        assert_eq!(ab.alpha(four), 1.0);
        assert_eq!(ab.alpha(five), 0.0);
        assert_eq!(ab.a_d[st(&c, "2").0], 1.0);
        assert!((ab.a_d[three.0] - 0.5).abs() < 1e-15);
        for i in 0..5 {
            assert!((ab.a_u[i] + ab.a_d[i] - 1.0).abs() < 1e-12);
        }
        let ab = absorption_probabilities(&c, three, five).unwrap();
        assert!((ab.alpha(one) - 0.75).abs() < 1e-15);
        assert_eq!(
            absorption_probabilities(&c, five, five).unwrap_err(),
            Error::TargetsEqual("5".into())
        );
    }

    #[test]
    fn absorption_vectors_are_fixed_points() {
        let c = five_state();
        let (u, d) = (st(&c, "3"), st(&c, "4"));
        let ab = absorption_probabilities(&c, u, d).unwrap();
        let bar = make_absorbing(&c, &[u, d]).unwrap();
        for v in [&ab.a_u, &ab.a_d] {
            for i in bar.states() {
                let pv: f64 = bar.states().map(|j| bar.prob(i, j) * v[j.0]).sum();
                assert!((pv - v[i.0]).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn uncertain_absorption_is_an_error() {
        // 0 -> {1, 2}; 2 is a trap reaching neither 1 nor 3
        let c = MarkovChain::from_rows(vec![
            vec![0.0_f64, 0.5, 0.5, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        let err = absorption_probabilities(&c, StateId(1), StateId(3)).unwrap_err();
        assert_eq!(err, Error::AbsorptionNotCertain { state: "0".into() });
    }

    #[test]
    fn fixture_fundamental_row() {
        let c = five_state();
        let v = expected_visits(&c, st(&c, "5")).unwrap();
        let row = v.row(st(&c, "1")).unwrap();
        for (got, want) in row.iter().zip([1.0, 0.625, 0.75, 0.375]) {
            assert!((got - want).abs() <= 1e-9);
        }
        for s in &v.states {
            assert!(v.get(*s, *s).unwrap() >= 1.0);
        }
        assert_eq!(v.get(st(&c, "5"), st(&c, "1")), None);
    }

    #[test]
    fn deterministic_step_visits_start_once() {
        let c = MarkovChain::from_rows(vec![vec![0.0_f64, 1.0], vec![1.0, 0.0]]).unwrap();
        let v = expected_visits(&c, StateId(1)).unwrap();
        assert_eq!(v.get(StateId(0), StateId(0)), Some(1.0));
    }

    #[test]
    fn unreachable_destination_is_listed() {
        let c = MarkovChain::from_rows(vec![vec![1.0_f64, 0.0], vec![0.5, 0.5]]).unwrap();
        assert_eq!(
            expected_visits(&c, StateId(1)).unwrap_err(),
            Error::DestinationUnreachable {
                states: vec!["0".into()]
            }
        );
    }

    #[test]
    fn restriction_of_irreducible_chain_is_identity() {
        let c = five_state();
        let (r, kept) = restrict_to_reaching(&c, st(&c, "5")).unwrap();
        assert_eq!(r, c);
        assert_eq!(kept.len(), 5);
    }

    #[test]
    fn restriction_drops_disconnected_component() {
        let c = MarkovChain::from_rows(vec![
            vec![0.5_f64, 0.5, 0.0, 0.0],
            vec![0.5, 0.5, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        let (r, kept) = restrict_to_reaching(&c, StateId(3)).unwrap();
        assert_eq!(kept, vec![StateId(2), StateId(3)]);
        assert_eq!(r.labels(), &["2", "3"]);
    }

    #[test]
    fn leaky_restriction_is_rejected() {
        let c =
            MarkovChain::from_rows(vec![vec![0.0_f64, 0.5, 0.5], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        assert!(matches!(
            restrict_to_reaching(&c, StateId(2)),
            Err(Error::NotClosed { .. })
        ));
    }
}
