//! Brute-force ground truth: explicit enumeration of trajectories and
//! Monte-Carlo simulation of walks.
//!
//! Enumeration is best first: the most probable unfinished prefix is always
//! extended next, so the covered mass grows as fast as possible. Prefixes
//! whose probability drops below `residual_mass_bound / max_paths`, or that
//! reach the length limit, are abandoned and their mass counted as
//! residual. Prefixes entering a state that cannot reach the destination are
//! dropped: that mass belongs to no trajectory.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chain::{MarkovChain, StateId, Trajectory};
use crate::error::{Error, Result};
use crate::scalar::{neg_plog2p, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub residual_mass_bound: f64,
    /// `None` means `10 N^2`.
    pub max_path_length: Option<usize>,
    pub max_paths: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            residual_mass_bound: 1e-12,
            max_path_length: None,
            max_paths: 10_000_000,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.residual_mass_bound > 0.0 && self.residual_mass_bound < 1.0) {
            return Err(Error::OutOfRange {
                name: "residual_mass_bound",
                value: self.residual_mass_bound,
            });
        }
        if self.max_paths == 0 {
            return Err(Error::OutOfRange {
                name: "max_paths",
                value: 0.0,
            });
        }
        if self.max_path_length == Some(0) {
            return Err(Error::OutOfRange {
                name: "max_path_length",
                value: 0.0,
            });
        }
        Ok(())
    }
}

/// Trajectories found by [`enumerate_trajectories`].
#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationResult<T> {
    /// In order of discovery.
    pub trajectories: Vec<Trajectory<T>>,
    /// Sum of the trajectory probabilities, accumulated in discovery order
    /// with compensated summation.
    pub covered_mass: T,
    /// `1 - covered_mass` exceeds the residual bound. Always false when the
    /// source cannot reach the destination.
    pub truncated: bool,
    pub residual_mass_bound: f64,
    pub labels: Vec<String>,
    pub source: StateId,
    pub destination: StateId,
}

/// Enumeration stopped on a limit before the residual bound was met.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationError<T> {
    pub partial: EnumerationResult<T>,
}

impl<T: Real> From<EnumerationError<T>> for Error {
    fn from(e: EnumerationError<T>) -> Self {
        Error::LimitsExceeded {
            paths: e.partial.trajectories.len(),
            covered: e.partial.covered_mass.as_f64(),
        }
    }
}

struct Node {
    state: usize,
    parent: usize,
    len: usize,
}

struct Frontier {
    prob: f64,
    node: usize,
}

impl PartialEq for Frontier {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Frontier {}
impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Frontier {
    // most probable first, earliest discovered among ties
    fn cmp(&self, other: &Self) -> Ordering {
        self.prob
            .total_cmp(&other.prob)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Neumaier-compensated running sum, used for the frontier mass which sees
/// many additions and removals.
#[derive(Default)]
struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Enumerates trajectories from `s` to `d` until the unaccounted mass is
/// at most `config.residual_mass_bound`.
pub fn enumerate_trajectories<T: Real>(
    chain: &MarkovChain<T>,
    s: StateId,
    d: StateId,
    config: &OracleConfig,
) -> std::result::Result<EnumerationResult<T>, EnumerationError<T>> {
    let mut result = EnumerationResult {
        trajectories: Vec::new(),
        covered_mass: T::zero(),
        truncated: false,
        residual_mass_bound: config.residual_mass_bound,
        labels: chain.labels().to_vec(),
        source: s,
        destination: d,
    };
    let reach = chain.reaching(&[d]);
    if !reach[s.0] {
        return Ok(result);
    }
    let n = chain.n_states();
    let max_len = config.max_path_length.unwrap_or(10 * n * n).max(2);
    let threshold = config.residual_mass_bound / config.max_paths as f64;

    let mut nodes = vec![Node {
        state: s.0,
        parent: usize::MAX,
        len: 1,
    }];
    let mut probs: Vec<T> = vec![T::one()];
    let mut heap = BinaryHeap::from([Frontier { prob: 1.0, node: 0 }]);
    let mut open = Compensated::default();
    open.add(1.0);
    let mut abandoned = 0.0_f64;
    let mut expansions = 0usize;
    let mut covered = Compensated::default();

    let path = |nodes: &[Node], mut k: usize, last: usize| {
        let mut states = vec![StateId(last)];
        while k != usize::MAX {
            states.push(StateId(nodes[k].state));
            k = nodes[k].parent;
        }
        states.reverse();
        states
    };

    let bound = config.residual_mass_bound;
    // the second test ends enumerations that lose mass to states which never
    // reach `d`; the covered mass cannot get close to one there
    while 1.0 - covered.value() > bound && open.value() + abandoned > 0.5 * bound {
        let Some(Frontier { prob, node }) = heap.pop() else {
            break;
        };
        open.add(-prob);
        if expansions >= config.max_paths {
            result.covered_mass = T::lit(covered.value());
            result.truncated = true;
            return Err(EnumerationError { partial: result });
        }
        expansions += 1;
        let (x, len, px) = (nodes[node].state, nodes[node].len, probs[node]);
        for (j, pj) in chain.successors(StateId(x)) {
            let q = px * pj;
            let qf = q.as_f64();
            if j == d {
                covered.add(qf);
                result.trajectories.push(Trajectory {
                    states: path(&nodes, node, j.0),
                    probability: q,
                });
            } else if !reach[j.0] {
                continue;
            } else if qf < threshold || len + 1 >= max_len {
                abandoned += qf;
            } else {
                nodes.push(Node {
                    state: j.0,
                    parent: node,
                    len: len + 1,
                });
                probs.push(q);
                heap.push(Frontier {
                    prob: qf,
                    node: nodes.len() - 1,
                });
                open.add(qf);
            }
        }
    }
    result.covered_mass = T::lit(covered.value());
    result.truncated = 1.0 - covered.value() > bound;
    Ok(result)
}

fn entropy_of<T: Real>(probs: impl Iterator<Item = T> + Clone) -> T {
    let total: T = probs.clone().sum();
    probs.map(|p| neg_plog2p(p / total)).sum::<T>().max(T::zero())
}

/// Entropy of the enumerated distribution, renormalized to the covered mass.
pub fn oracle_entropy<T: Real>(result: &EnumerationResult<T>) -> Result<T> {
    if result.covered_mass.as_f64() < 1.0 - result.residual_mass_bound {
        return Err(Error::InsufficientCoverage {
            covered: result.covered_mass.as_f64(),
        });
    }
    Ok(entropy_of(result.trajectories.iter().map(|t| t.probability)))
}

fn contains_subsequence(interior: &[StateId], via: &[StateId]) -> bool {
    let mut it = interior.iter();
    via.iter().all(|u| it.any(|x| x == u))
}

fn contains_all(interior: &[StateId], set: &[StateId]) -> bool {
    set.iter().all(|u| interior.contains(u))
}

fn filtered_entropy<T: Real>(result: &EnumerationResult<T>, keep: impl Fn(&Trajectory<T>) -> bool) -> Result<T> {
    oracle_entropy(result)?;
    let kept: Vec<T> = result
        .trajectories
        .iter()
        .filter(|t| keep(t))
        .map(|t| t.probability)
        .collect();
    if kept.is_empty() {
        return Err(Error::ImpossibleConditioning {
            leg: 0,
            from: result.labels[result.source.0].clone(),
            to: result.labels[result.destination.0].clone(),
        });
    }
    Ok(entropy_of(kept.into_iter()))
}

/// Entropy of the trajectories whose interior contains `via` as a
/// subsequence (other states may occur in between).
pub fn oracle_conditional_sequence<T: Real>(result: &EnumerationResult<T>, via: &[StateId]) -> Result<T> {
    filtered_entropy(result, |t| contains_subsequence(t.interior(), via))
}

/// Entropy of the trajectories whose interior visits every state of `set`,
/// in any order.
pub fn oracle_conditional_set<T: Real>(result: &EnumerationResult<T>, set: &[StateId]) -> Result<T> {
    filtered_entropy(result, |t| contains_all(t.interior(), set))
}

/// Enumerated probability of visiting `via` in order.
pub fn sequence_mass<T: Real>(result: &EnumerationResult<T>, via: &[StateId]) -> T {
    result
        .trajectories
        .iter()
        .filter(|t| contains_subsequence(t.interior(), via))
        .map(|t| t.probability)
        .sum()
}

/// Enumerated probability of visiting every state of `set`.
pub fn set_mass<T: Real>(result: &EnumerationResult<T>, set: &[StateId]) -> T {
    result
        .trajectories
        .iter()
        .filter(|t| contains_all(t.interior(), set))
        .map(|t| t.probability)
        .sum()
}

/// Summary of [`simulate_walks`].
#[derive(Debug, Clone, PartialEq)]
pub struct WalkStats {
    pub n_walks: usize,
    /// Walks that hit the step limit; they are excluded from the statistics.
    pub step_limited: usize,
    /// Mean number of visits to each state before absorption, counting the start.
    pub mean_visits: Vec<f64>,
    pub visits_std_error: Vec<f64>,
    /// Fraction of walks that visit each state before absorption.
    pub visited_fraction: Vec<f64>,
    pub visited_std_error: Vec<f64>,
}

#[derive(Clone)]
struct Tally {
    done: u64,
    limited: u64,
    visits: Vec<u64>,
    visits_sq: Vec<u64>,
    visited: Vec<u64>,
}

impl Tally {
    fn new(n: usize) -> Self {
        Tally {
            done: 0,
            limited: 0,
            visits: vec![0; n],
            visits_sq: vec![0; n],
            visited: vec![0; n],
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.done += other.done;
        self.limited += other.limited;
        for k in 0..self.visits.len() {
            self.visits[k] += other.visits[k];
            self.visits_sq[k] += other.visits_sq[k];
            self.visited[k] += other.visited[k];
        }
        self
    }
}

const BATCH: usize = 10_000;

fn samplers<T: Real>(chain: &MarkovChain<T>) -> Vec<WeightedIndex<f64>> {
    chain
        .states()
        .map(|i| WeightedIndex::new(chain.row(i).iter().map(|p| p.as_f64())).expect("rows are distributions"))
        .collect()
}

/// `n_walks` walks from `s` stopped on their first arrival at `d` (after at
/// least one step) or after `max_steps` steps.
///
/// Walks run in batches of 10 000; batch `b` draws from ChaCha8 seeded with
/// `seed` on stream `b`, so results depend only on the seed.
pub fn simulate_walks<T: Real>(
    chain: &MarkovChain<T>,
    s: StateId,
    d: StateId,
    n_walks: usize,
    seed: u64,
    max_steps: usize,
) -> Result<WalkStats> {
    chain.check(s)?;
    chain.check(d)?;
    if !chain.reaching(&[d])[s.0] || (s == d && chain.successors(s).next().is_none()) {
        return Err(Error::SourceCannotReachDestination {
            source_state: chain.label(s).to_string(),
            destination: chain.label(d).to_string(),
        });
    }
    let n = chain.n_states();
    let pick = samplers(chain);
    let batches = n_walks.div_ceil(BATCH);
    let tally = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let mut t = Tally::new(n);
            let mut counts = vec![0u64; n];
            let walks = BATCH.min(n_walks - b * BATCH);
            for _ in 0..walks {
                counts.iter_mut().for_each(|c| *c = 0);
                let mut x = s.0;
                counts[x] += 1;
                let mut hit = false;
                for _ in 0..max_steps {
                    x = pick[x].sample(&mut rng);
                    if x == d.0 {
                        hit = true;
                        break;
                    }
                    counts[x] += 1;
                }
                if !hit {
                    t.limited += 1;
                    continue;
                }
                t.done += 1;
                for k in 0..n {
                    t.visits[k] += counts[k];
                    t.visits_sq[k] += counts[k] * counts[k];
                    t.visited[k] += u64::from(counts[k] > 0);
                }
            }
            t
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::new(n), Tally::merge);

    let m = tally.done.max(1) as f64;
    let mean_visits: Vec<f64> = tally.visits.iter().map(|&v| v as f64 / m).collect();
    let visits_std_error = tally
        .visits_sq
        .iter()
        .zip(&mean_visits)
        .map(|(&sq, &mu)| ((sq as f64 / m - mu * mu).max(0.0) * m / (m - 1.0).max(1.0)).sqrt() / m.sqrt())
        .collect();
    let visited_fraction: Vec<f64> = tally.visited.iter().map(|&v| v as f64 / m).collect();
    let visited_std_error = visited_fraction.iter().map(|&p| (p * (1.0 - p) / m).sqrt()).collect();
    Ok(WalkStats {
        n_walks,
        step_limited: tally.limited as usize,
        mean_visits,
        visits_std_error,
        visited_fraction,
        visited_std_error,
    })
}

/// A single run of `len` states starting at `start`.
pub fn simulate_run<T: Real>(chain: &MarkovChain<T>, start: StateId, len: usize, seed: u64) -> Result<Vec<StateId>> {
    chain.check(start)?;
    let pick = samplers(chain);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = start.0;
    let mut run = Vec::with_capacity(len);
    for _ in 0..len {
        run.push(StateId(x));
        x = pick[x].sample(&mut rng);
    }
    Ok(run)
}

/// `-(1/n) log2 p(x_1 ... x_n)` of an observed run, conditioned on its first state.
pub fn empirical_entropy_rate<T: Real>(chain: &MarkovChain<T>, run: &[StateId]) -> Result<f64> {
    if run.len() < 2 {
        return Err(Error::TrajectoryTooShort);
    }
    let log_p: f64 = run.windows(2).map(|w| chain.prob(w[0], w[1]).as_f64().log2()).sum();
    Ok(-log_p / (run.len() - 1) as f64)
}
