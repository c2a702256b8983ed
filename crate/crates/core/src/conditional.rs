//! Trajectory entropies conditioned on intermediate states.
//!
//! Conditioning a trajectory on *not* visiting a state `u` is realised by a
//! new Markov chain: `u` and `d` are made absorbing and every remaining
//! transition `i -> j` is rescaled by `a_d(j) / a_d(i)`, where `a_d` is the
//! probability of being absorbed in `d` rather than `u`. Trajectories of the
//! rescaled chain from `s` to `d` have exactly the conditional law of the
//! original trajectories given that they avoid `u`.
//!
//! Conditioning on an ordered sequence `u_1 ... u_l` splits the trajectory at
//! the first visit to each `u_k`; the legs `u_k -> u_{k+1}` are conditioned on
//! avoiding `d`, the final leg `u_l -> d` is unconditioned, and the entropy is
//! the sum of the leg entropies.

use std::borrow::Cow;

use rayon::prelude::*;

use crate::absorb::{absorption_probabilities, make_absorbing, restrict_to_reaching, AbsorptionResult};
use crate::chain::{MarkovChain, StateId};
use crate::error::{Error, Result};
use crate::scalar::{neg_plog2p, Real};
use crate::trajectory::trajectory_entropy;

/// Trajectories from `source` to `destination` that visit `via` in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondQuery {
    pub source: StateId,
    pub destination: StateId,
    pub via: Vec<StateId>,
}

impl CondQuery {
    pub fn new(source: StateId, destination: StateId, via: Vec<StateId>) -> Self {
        CondQuery {
            source,
            destination,
            via,
        }
    }

    /// Resolves labels against `chain`.
    pub fn from_labels<T: Real>(chain: &MarkovChain<T>, source: &str, destination: &str, via: &[&str]) -> Result<Self> {
        Ok(CondQuery {
            source: chain.state(source)?,
            destination: chain.state(destination)?,
            via: via.iter().map(|l| chain.state(l)).collect::<Result<_>>()?,
        })
    }
}

/// Result of sequence conditioning.
#[derive(Debug, Clone, PartialEq)]
pub struct CondResult<T> {
    pub entropy: T,
    /// Entropies of the `l` avoid-destination legs followed by the final leg.
    pub per_leg: Vec<T>,
    /// For leg `k`, the probability of reaching `u_{k+1}` from `u_k` before
    /// the destination.
    pub leg_probabilities: Vec<T>,
    /// Probability that a trajectory visits the whole sequence.
    pub event_probability: T,
    /// Set when an absorption probability fell in the poorly conditioned band.
    pub poorly_conditioned: bool,
}

/// Result of single-state conditioning through the chain-rule identity.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleConditioning<T> {
    /// Entropy given that the trajectory visits `u`.
    pub entropy: T,
    /// Probability that the trajectory visits `u`.
    pub alpha: T,
    /// Entropy given that the trajectory avoids `u`; `None` when `alpha = 1`.
    pub avoid_entropy: Option<T>,
    pub unconditional: T,
}

/// Binary entropy in bits.
pub fn bernoulli_entropy<T: Real>(p: T) -> Result<T> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::OutOfRange {
            name: "probability",
            value: p.as_f64(),
        });
    }
    Ok(neg_plog2p(p) + neg_plog2p(T::one() - p))
}

fn avoid_transform_with<T: Real>(
    chain: &MarkovChain<T>,
    u: StateId,
    d: StateId,
) -> Result<(MarkovChain<T>, AbsorptionResult<T>)> {
    let ab = absorption_probabilities(chain, u, d)?;
    let bar = make_absorbing(chain, &[u, d])?;
    let n = chain.n_states();
    let mut p = bar.flat().to_vec();
    for i in chain.states().filter(|&i| i != u && i != d) {
        let a_i = ab.a_d[i.0];
        // a_d(i) = 0 means every walk from i hits u first; the row is left as is
        if a_i == T::zero() {
            continue;
        }
        for j in 0..n {
            p[i.0 * n + j] = p[i.0 * n + j] * ab.a_d[j] / a_i;
        }
    }
    Ok((MarkovChain::from_flat(chain.labels().to_vec(), p)?, ab))
}

/// The chain whose trajectories ending in `d` follow the original law
/// conditioned on never visiting `u`.
///
/// `u` and `d` are absorbing in the output, all transitions into `u` have
/// probability zero, and rows of states that cannot avoid `u` are those of the
/// absorbing chain.
pub fn avoid_transform<T: Real>(chain: &MarkovChain<T>, u: StateId, d: StateId) -> Result<MarkovChain<T>> {
    Ok(avoid_transform_with(chain, u, d)?.0)
}

enum Avoid<T> {
    Feasible {
        entropy: T,
        alpha: T,
        poorly_conditioned: bool,
    },
    /// No trajectory from the source reaches the destination without `u`.
    Blocked,
}

/// Shared core for `s`, `d`, `u` pairwise distinct.
///
/// Works on the states a walk from `s` can touch before absorption, so parts
/// of the chain irrelevant to the query cannot make it fail.
fn avoid_core<T: Real>(chain: &MarkovChain<T>, s: StateId, d: StateId, u: StateId) -> Result<Avoid<T>> {
    let bar = make_absorbing(chain, &[u, d])?;
    let touched = bar.reachable_from(s, &[]);
    if !touched[d.0] {
        return Ok(Avoid::Blocked);
    }
    let keep: Vec<StateId> = chain.states().filter(|i| touched[i.0]).collect();
    let local = |x: StateId| keep.iter().position(|&k| k == x).map(StateId);
    let sub = bar.induced(&keep)?;
    let (s1, d1) = (local(s).expect("source kept"), local(d).expect("destination kept"));
    let Some(u1) = local(u) else {
        // u is out of reach, so avoiding it is a sure event
        let entropy = trajectory_entropy(&sub, s1, d1)?;
        return Ok(Avoid::Feasible {
            entropy,
            alpha: T::zero(),
            poorly_conditioned: false,
        });
    };

    let (transformed, ab) = avoid_transform_with(&sub, u1, d1)?;
    if ab.a_d[s1.0] == T::zero() {
        return Ok(Avoid::Blocked);
    }
    let (restricted, kept) = restrict_to_reaching(&transformed, d1)?;
    let pos = |x: StateId| StateId(kept.iter().position(|&k| k == x).expect("endpoint reaches destination"));
    let entropy = trajectory_entropy(&restricted, pos(s1), pos(d1))?;
    Ok(Avoid::Feasible {
        entropy,
        alpha: ab.alpha(s1),
        poorly_conditioned: !ab.poorly_conditioned.is_empty(),
    })
}

fn require_distinct<T: Real>(chain: &MarkovChain<T>, s: StateId, d: StateId, u: StateId) -> Result<()> {
    if u == s || u == d {
        let names = [s, u, d].iter().map(|&x| chain.label(x).to_string()).collect();
        return Err(Error::StatesNotDistinct(names));
    }
    Ok(())
}

/// Probability that the walk from `s` visits `u` before `d`.
///
/// Only states reachable from `s` matter. `s == u` gives 1 and `s == d`
/// gives 0.
pub fn visit_probability<T: Real>(chain: &MarkovChain<T>, s: StateId, u: StateId, d: StateId) -> Result<T> {
    for x in [s, u, d] {
        chain.check(x)?;
    }
    if u == d {
        return Err(Error::TargetsEqual(chain.label(u).to_string()));
    }
    let bar = make_absorbing(chain, &[u, d])?;
    let touched = bar.reachable_from(s, &[]);
    if !touched[u.0] {
        return Ok(T::zero());
    }
    let keep: Vec<StateId> = chain.states().filter(|&i| touched[i.0] || i == d).collect();
    let local = |x: StateId| StateId(keep.iter().position(|&k| k == x).expect("kept"));
    let sub = bar.induced(&keep)?;
    let ab = absorption_probabilities(&sub, local(u), local(d))?;
    Ok(ab.alpha(local(s)))
}

/// Entropy of the trajectory from `s` to `d` given that it never visits `u`.
///
/// `u` must differ from both endpoints; `s == d` is handled by splitting `s`.
pub fn entropy_avoiding<T: Real>(chain: &MarkovChain<T>, s: StateId, d: StateId, u: StateId) -> Result<T> {
    for x in [s, d, u] {
        chain.check(x)?;
    }
    require_distinct(chain, s, d, u)?;
    if s == d {
        let (split, twin) = chain.split_state(s)?;
        return entropy_avoiding(&split, s, twin, u);
    }
    match avoid_core(chain, s, d, u)? {
        Avoid::Feasible { entropy, .. } => Ok(entropy),
        Avoid::Blocked if !chain.reaching(&[d])[s.0] => Err(Error::SourceCannotReachDestination {
            source_state: chain.label(s).to_string(),
            destination: chain.label(d).to_string(),
        }),
        Avoid::Blocked => Err(Error::AlwaysPassesThroughU {
            source_state: chain.label(s).to_string(),
            destination: chain.label(d).to_string(),
            via: chain.label(u).to_string(),
        }),
    }
}

/// Entropy given a visit to `u`, solved from
/// `H_sd = alpha H_sd|u + (1 - alpha) H_sd|not u + h(alpha)`.
pub fn entropy_via_single<T: Real>(
    chain: &MarkovChain<T>,
    s: StateId,
    d: StateId,
    u: StateId,
) -> Result<SingleConditioning<T>> {
    for x in [s, d, u] {
        chain.check(x)?;
    }
    require_distinct(chain, s, d, u)?;
    if s == d {
        let (split, twin) = chain.split_state(s)?;
        return entropy_via_single(&split, s, twin, u);
    }
    let unconditional = trajectory_entropy(chain, s, d)?;
    let (alpha, avoid_entropy) = match avoid_core(chain, s, d, u)? {
        Avoid::Blocked => (T::one(), None),
        Avoid::Feasible { entropy, alpha, .. } => (alpha, Some(entropy)),
    };
    if alpha == T::zero() {
        return Err(Error::NeverPassesThroughU {
            source_state: chain.label(s).to_string(),
            destination: chain.label(d).to_string(),
            via: chain.label(u).to_string(),
        });
    }
    let avoid_term = avoid_entropy.map_or(T::zero(), |h| (T::one() - alpha) * h);
    let entropy = (unconditional - avoid_term - bernoulli_entropy(alpha)?) / alpha;
    Ok(SingleConditioning {
        entropy: entropy.max(T::zero()),
        alpha,
        avoid_entropy,
        unconditional,
    })
}

/// Leg `from -> to` conditioned on avoiding `avoid`: (entropy, probability of
/// the leg event, poorly conditioned).
fn leg<T: Real>(chain: &MarkovChain<T>, from: StateId, to: StateId, avoid: StateId, k: usize) -> Result<(T, T, bool)> {
    let outcome = if from == to {
        let (split, twin) = chain.split_state(from)?;
        avoid_core(&split, from, twin, avoid)?
    } else {
        avoid_core(chain, from, to, avoid)?
    };
    match outcome {
        Avoid::Feasible {
            entropy,
            alpha,
            poorly_conditioned,
        } => Ok((entropy, T::one() - alpha, poorly_conditioned)),
        Avoid::Blocked => Err(Error::ImpossibleConditioning {
            leg: k,
            from: chain.label(from).to_string(),
            to: chain.label(to).to_string(),
        }),
    }
}

/// Entropy of the trajectory from `source` to `destination` given that it
/// visits `via` in order (other states may occur in between).
///
/// Legs are computed independently and in parallel; the first infeasible leg
/// is reported. An empty `via` gives the unconditional entropy.
pub fn entropy_via_sequence<T: Real>(chain: &MarkovChain<T>, query: &CondQuery) -> Result<CondResult<T>> {
    let (s, d) = (chain.check(query.source)?, chain.check(query.destination)?);
    for &u in &query.via {
        chain.check(u)?;
        if u == d {
            return Err(Error::DestinationInVia(chain.label(d).to_string()));
        }
    }
    let (work, dest): (Cow<'_, MarkovChain<T>>, StateId) = if s == d {
        let (split, twin) = chain.split_state(s)?;
        (Cow::Owned(split), twin)
    } else {
        (Cow::Borrowed(chain), d)
    };
    let work = work.as_ref();

    let mut points = Vec::with_capacity(query.via.len() + 1);
    points.push(s);
    points.extend_from_slice(&query.via);

    let legs: Vec<Result<(T, T, bool)>> = (0..query.via.len())
        .into_par_iter()
        .map(|k| leg(work, points[k], points[k + 1], dest, k))
        .collect();

    let mut per_leg = Vec::with_capacity(points.len());
    let mut leg_probabilities = Vec::with_capacity(query.via.len());
    let mut poorly_conditioned = false;
    for r in legs {
        let (h, p, pc) = r?;
        per_leg.push(h);
        leg_probabilities.push(p);
        poorly_conditioned |= pc;
    }

    let last = *points.last().expect("points start with the source");
    let tail = trajectory_entropy(work, last, dest).map_err(|e| match e {
        Error::SourceCannotReachDestination { .. } => Error::ImpossibleConditioning {
            leg: query.via.len(),
            from: work.label(last).to_string(),
            to: chain.label(d).to_string(),
        },
        other => other,
    })?;
    per_leg.push(tail);

    Ok(CondResult {
        entropy: per_leg.iter().copied().sum(),
        event_probability: leg_probabilities.iter().fold(T::one(), |acc, &p| acc * p),
        per_leg,
        leg_probabilities,
        poorly_conditioned,
    })
}

/// Difference between conditioning on the ordered pair `(3, 2)` and on the
/// unordered set `{2, 3}` in the two-parameter example chain with `m`
/// equiprobable parallel routes:
///
/// ```text
/// h(e0) - h(e0 e1 / (1 - e0 (1 - e1))) + (1 - e0) / (1 - e0 (1 - e1)) log2 m
/// ```
pub fn sequence_vs_set_gap<T: Real>(eps0: T, eps1: T, m: u64) -> Result<T> {
    if !(eps0 > T::zero() && eps0 < T::one()) {
        return Err(Error::OutOfRange {
            name: "eps0",
            value: eps0.as_f64(),
        });
    }
    if !(eps1 > T::zero() && eps1 <= T::one()) {
        return Err(Error::OutOfRange {
            name: "eps1",
            value: eps1.as_f64(),
        });
    }
    if m == 0 {
        return Err(Error::OutOfRange { name: "m", value: 0.0 });
    }
    let denom = T::one() - eps0 * (T::one() - eps1);
    let through_both = eps0 * eps1 / denom;
    let weight = (T::one() - eps0) / denom;
    let log_m = T::lit(m as f64).log2();
    Ok(bernoulli_entropy(eps0)? - bernoulli_entropy(through_both.min(T::one()))? + weight * log_m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::five_state;
    use crate::trajectory::trajectory_entropy;

    fn q(c: &MarkovChain<f64>, s: &str, d: &str, via: &[&str]) -> CondQuery {
        CondQuery::from_labels(c, s, d, via).unwrap()
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli_entropy(0.5_f64).unwrap(), 1.0);
        assert_eq!(bernoulli_entropy(0.0_f64).unwrap(), 0.0);
        assert_eq!(bernoulli_entropy(1.0_f64).unwrap(), 0.0);
        let direct = -0.375 * 0.375_f64.log2() - 0.625 * 0.625_f64.log2();
        assert!((bernoulli_entropy(0.375_f64).unwrap() - direct).abs() < 1e-15);
        assert!((direct - 0.9544).abs() < 5e-5);
        assert!(bernoulli_entropy(1.5_f64).is_err());
        assert!(bernoulli_entropy(f64::NAN).is_err());
    }

    #[test]
    fn avoid_transform_on_fixture() {
        let c = five_state();
        let id = |l: &str| c.state(l).unwrap();
        let t = avoid_transform(&c, id("4"), id("5")).unwrap();
        assert_eq!(t.prob(id("3"), id("2")), 1.0);
        assert_eq!(t.prob(id("3"), id("4")), 0.0);
        // from 1: 1->2 keeps a_d = 1, 1->3 has a_d = .5; a_d(1) = .625
        assert!((t.prob(id("1"), id("2")) - 0.4).abs() < 1e-15);
        assert!((t.prob(id("1"), id("3")) - 0.6).abs() < 1e-15);
        for i in t.states() {
            assert_eq!(t.prob(i, id("4")), if i == id("4") { 1.0 } else { 0.0 });
            let sum: f64 = t.row(i).iter().sum();
            assert!((sum - 1.0).abs() <= 1e-9);
        }
        assert!(t.is_absorbing(id("4")) && t.is_absorbing(id("5")));
    }

    #[test]
    fn avoid_transform_of_unreachable_u_keeps_other_rows() {
        // 2 has no in-edges
        let c =
            MarkovChain::from_rows(vec![vec![0.5_f64, 0.5, 0.0], vec![0.5, 0.5, 0.0], vec![0.3, 0.7, 0.0]]).unwrap();
        let t = avoid_transform(&c, StateId(2), StateId(1)).unwrap();
        let bar = make_absorbing(&c, &[StateId(2), StateId(1)]).unwrap();
        assert_eq!(t, bar);
    }

    #[test]
    fn visit_probabilities() {
        let c = five_state();
        let id = |l: &str| c.state(l).unwrap();
        assert!((visit_probability(&c, id("1"), id("4"), id("5")).unwrap() - 0.375).abs() < 1e-15);
        assert!((visit_probability(&c, id("1"), id("3"), id("5")).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(visit_probability(&c, id("4"), id("4"), id("5")).unwrap(), 1.0);
        assert_eq!(visit_probability(&c, id("5"), id("4"), id("5")).unwrap(), 0.0);
        assert_eq!(visit_probability(&c, id("2"), id("1"), id("5")).unwrap(), 0.0);
        assert!(matches!(
            visit_probability(&c, id("1"), id("5"), id("5")),
            Err(Error::TargetsEqual(_))
        ));
        // a stuck region elsewhere in the chain does not matter
        let c = MarkovChain::from_rows(vec![
            vec![0.0_f64, 0.5, 0.5, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.5, 0.0, 0.0, 0.5],
        ])
        .unwrap();
        assert_eq!(visit_probability(&c, StateId(0), StateId(1), StateId(2)).unwrap(), 0.5);
    }

    #[test]
    fn avoiding_entropies_on_fixture() {
        let c = five_state();
        let id = |l: &str| c.state(l).unwrap();
        let h = entropy_avoiding(&c, id("1"), id("5"), id("4")).unwrap();
        let h04 = -0.4 * 0.4_f64.log2() - 0.6 * 0.6_f64.log2();
        assert!((h - h04).abs() < 1e-12);
        assert!((h - 0.9710).abs() < 5e-5);
        assert_eq!(entropy_avoiding(&c, id("1"), id("3"), id("5")).unwrap(), 0.0);
        assert!(matches!(
            entropy_avoiding(&c, id("3"), id("4"), id("5")),
            Ok(x) if x.abs() < 1e-12
        ));
        assert!(matches!(
            entropy_avoiding(&c, id("2"), id("1"), id("5")),
            Err(Error::AlwaysPassesThroughU { .. })
        ));
        assert!(matches!(
            entropy_avoiding(&c, id("1"), id("5"), id("5")),
            Err(Error::StatesNotDistinct(_))
        ));
    }

    #[test]
    fn avoiding_an_untouched_state_is_unconditional() {
        // 3 is only reachable through the destination 2
        let c = MarkovChain::from_rows(vec![
            vec![0.2_f64, 0.5, 0.3, 0.0],
            vec![0.4, 0.0, 0.6, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        let plain = trajectory_entropy(&c, StateId(0), StateId(2)).unwrap();
        let avoid = entropy_avoiding(&c, StateId(0), StateId(2), StateId(3)).unwrap();
        assert!((plain - avoid).abs() < 1e-12);
    }

    #[test]
    fn single_state_conditioning_on_fixture() {
        let c = five_state();
        let id = |l: &str| c.state(l).unwrap();
        let r = entropy_via_single(&c, id("1"), id("5"), id("4")).unwrap();
        assert!(r.entropy.abs() <= 1e-9);
        assert!((r.alpha - 0.375).abs() < 1e-15);
        let r = entropy_via_single(&c, id("1"), id("5"), id("3")).unwrap();
        assert!((r.entropy - 1.0).abs() <= 1e-9);
        // every trajectory 3 -> 1 passes through 5
        let r = entropy_via_single(&c, id("3"), id("1"), id("5")).unwrap();
        assert_eq!(r.alpha, 1.0);
        assert_eq!(r.avoid_entropy, None);
        assert!((r.entropy - r.unconditional).abs() < 1e-12);
    }

    #[test]
    fn never_visiting_u_is_an_error() {
        let c =
            MarkovChain::from_rows(vec![vec![0.0_f64, 1.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.5, 0.5, 0.0]]).unwrap();
        assert!(matches!(
            entropy_via_single(&c, StateId(0), StateId(1), StateId(2)),
            Err(Error::NeverPassesThroughU { .. })
        ));
    }

    #[test]
    fn chain_rule_identity_on_fixture() {
        let c = five_state();
        let id = |l: &str| c.state(l).unwrap();
        let (s, u, d) = (id("1"), id("4"), id("5"));
        let given_u = entropy_via_sequence(&c, &CondQuery::new(s, d, vec![u]))
            .unwrap()
            .entropy;
        let avoid = entropy_avoiding(&c, s, d, u).unwrap();
        let alpha = 0.375;
        let total = alpha * given_u + (1.0 - alpha) * avoid + bernoulli_entropy(alpha).unwrap();
        assert!((total - trajectory_entropy(&c, s, d).unwrap()).abs() <= 1e-9);
        assert!((total - 1.5613).abs() < 5e-5);
    }

    #[test]
    fn sequence_conditioning_on_fixture() {
        let c = five_state();
        let r = entropy_via_sequence(&c, &q(&c, "1", "5", &["3", "2"])).unwrap();
        assert!(r.entropy.abs() <= 1e-9);
        assert_eq!(r.per_leg.len(), 3);
        assert!(r.per_leg.iter().all(|h| h.abs() <= 1e-9));
        assert!((r.event_probability - 0.375).abs() < 1e-12);

        let r = entropy_via_sequence(&c, &q(&c, "1", "5", &["4"])).unwrap();
        assert!(r.entropy.abs() <= 1e-9);
        let r = entropy_via_sequence(&c, &q(&c, "1", "5", &["3"])).unwrap();
        assert!((r.entropy - 1.0).abs() <= 1e-9);
        let r = entropy_via_sequence(&c, &q(&c, "1", "5", &[])).unwrap();
        assert!((r.entropy - 1.5613).abs() < 5e-5);
        assert_eq!(r.per_leg.len(), 1);
        let sum: f64 = r.per_leg.iter().sum();
        assert!((r.entropy - sum).abs() <= 1e-12);
    }

    #[test]
    fn additivity_does_not_hold() {
        let c = five_state();
        let id = |l: &str| c.state(l).unwrap();
        let naive =
            trajectory_entropy(&c, id("1"), id("4")).unwrap() + trajectory_entropy(&c, id("4"), id("5")).unwrap();
        assert!((naive - 3.18).abs() <= 0.01);
        let actual = entropy_via_sequence(&c, &q(&c, "1", "5", &["4"])).unwrap().entropy;
        assert!((naive - actual).abs() > 1.0);
    }

    #[test]
    fn sequence_errors() {
        let c = five_state();
        assert_eq!(
            entropy_via_sequence(&c, &q(&c, "1", "5", &["5"])).unwrap_err(),
            Error::DestinationInVia("5".into())
        );
        // from 2 the walk goes straight to 5, so 2 -> 3 avoiding 5 is impossible
        let err = entropy_via_sequence(&c, &q(&c, "2", "5", &["3"])).unwrap_err();
        assert_eq!(
            err,
            Error::ImpossibleConditioning {
                leg: 0,
                from: "2".into(),
                to: "3".into()
            }
        );
        let err = entropy_via_sequence(&c, &q(&c, "1", "5", &["4", "3"])).unwrap_err();
        assert_eq!(
            err,
            Error::ImpossibleConditioning {
                leg: 1,
                from: "4".into(),
                to: "3".into()
            }
        );
    }

    #[test]
    fn repeated_states_in_sequence() {
        let c = five_state();
        // returning to 1 requires passing through 5
        assert_eq!(
            entropy_via_sequence(&c, &q(&c, "1", "5", &["1"])).unwrap_err(),
            Error::ImpossibleConditioning {
                leg: 0,
                from: "1".into(),
                to: "1".into()
            }
        );
        let c =
            MarkovChain::from_rows(vec![vec![0.0_f64, 0.5, 0.5], vec![0.5, 0.0, 0.5], vec![1.0, 0.0, 0.0]]).unwrap();
        let query = CondQuery::new(StateId(0), StateId(2), vec![StateId(1), StateId(1)]);
        let r = entropy_via_sequence(&c, &query).unwrap();
        let e = crate::oracle::enumerate_trajectories(&c, StateId(0), StateId(2), &Default::default()).unwrap();
        let want = crate::oracle::oracle_conditional_sequence(&e, &query.via).unwrap();
        assert!((r.entropy - want).abs() < 1e-9, "{} vs {want}", r.entropy);
        assert!((r.event_probability - crate::oracle::sequence_mass(&e, &query.via)).abs() < 1e-9);
    }

    #[test]
    fn source_equal_to_destination() {
        let c = five_state();
        let r = entropy_via_sequence(&c, &q(&c, "1", "1", &[])).unwrap();
        assert!((r.entropy - 3.56).abs() <= 0.01);
        let via_five = entropy_via_sequence(&c, &q(&c, "1", "1", &["5"])).unwrap();
        assert!(via_five.entropy <= r.entropy + 1e-12);
    }

    #[test]
    fn gap_formula() {
        let g = sequence_vs_set_gap(0.5_f64, 0.5, 1).unwrap();
        let r = 0.25 / 0.75;
        let expected = 1.0 - bernoulli_entropy(r).unwrap();
        assert!((g - expected).abs() < 1e-15);
        assert!(sequence_vs_set_gap(0.5_f64, 0.5, 16).unwrap() > 0.0);
        assert!(sequence_vs_set_gap(0.0_f64, 0.5, 2).is_err());
        assert!(sequence_vs_set_gap(0.5_f64, 0.0, 2).is_err());
        assert!(sequence_vs_set_gap(0.5_f64, 0.5, 0).is_err());
        assert!(sequence_vs_set_gap(0.5_f64, 1.0, 4).is_ok());
    }
}
