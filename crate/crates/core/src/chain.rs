//! Finite Markov chains: validated transition matrices, local and stationary
//! quantities, trajectory probabilities and the state-splitting transform.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::linalg::LuFactors;
use crate::scalar::{entropy_bits, Real};

/// Index of a state within one chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Row-stochastic transition matrix with unique state labels.
///
/// Chains are immutable; every transform returns a new chain.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovChain<T> {
    labels: Vec<String>,
    lookup: HashMap<String, usize>,
    n: usize,
    p: Vec<T>,
}

/// Probability vector over the states of a chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T>(Vec<T>);

impl<T: Real> Distribution<T> {
    pub fn probs(&self) -> &[T] {
        &self.0
    }

    pub fn get(&self, s: StateId) -> T {
        self.0[s.0]
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }
}

/// A finite path `s ... d` with no interior occurrence of `d`, and its probability.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub states: Vec<StateId>,
    pub probability: T,
}

impl<T: Real> Trajectory<T> {
    /// Builds a trajectory, rejecting paths of probability zero.
    pub fn new(chain: &MarkovChain<T>, states: Vec<StateId>) -> Result<Self> {
        let probability = chain.trajectory_probability(&states)?;
        if probability <= T::zero() {
            return Err(Error::ZeroProbability);
        }
        Ok(Trajectory { states, probability })
    }

    pub fn source(&self) -> StateId {
        self.states[0]
    }

    pub fn destination(&self) -> StateId {
        *self.states.last().expect("trajectory has at least two states")
    }

    /// States strictly between the endpoints.
    pub fn interior(&self) -> &[StateId] {
        &self.states[1..self.states.len() - 1]
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

impl<T: Real> MarkovChain<T> {
    /// Validates and builds a chain.
    ///
    /// Rows whose sum is off by at most [`Real::row_sum_tolerance`] are
    /// renormalized; anything further off is rejected.
    pub fn new<S: Into<String>>(labels: Vec<S>, rows: Vec<Vec<T>>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        if labels.len() != n {
            return Err(Error::LabelCountMismatch {
                labels: labels.len(),
                states: n,
            });
        }
        let mut p = Vec::with_capacity(n * n);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(Error::NonSquare {
                    rows: n,
                    row,
                    len: r.len(),
                });
            }
            p.extend(r);
        }
        Self::from_flat(labels, p)
    }

    /// Builds a chain labelled `"0"`, `"1"`, ...
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let labels = default_labels(rows.len());
        Self::new(labels, rows)
    }

    /// Builds a chain from a row-major buffer of length `labels.len()^2`.
    pub fn from_flat(labels: Vec<String>, mut p: Vec<T>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        if p.len() != n * n {
            return Err(Error::NonSquare {
                rows: n,
                row: 0,
                len: p.len() / n.max(1),
            });
        }
        let mut lookup = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if lookup.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let tol = T::row_sum_tolerance();
        for row in 0..n {
            let r = &mut p[row * n..(row + 1) * n];
            for (col, &x) in r.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::NonFiniteEntry { row, col });
                }
                if x < T::zero() {
                    return Err(Error::NegativeEntry {
                        row,
                        col,
                        value: x.as_f64(),
                    });
                }
            }
            let sum: T = r.iter().copied().sum();
            if (sum - T::one()).abs() > tol {
                return Err(Error::RowSumViolation { row, sum: sum.as_f64() });
            }
            if sum != T::one() {
                r.iter_mut().for_each(|x| *x = *x / sum);
            }
        }
        Ok(MarkovChain { labels, lookup, n, p })
    }

    pub fn n_states(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, s: StateId) -> &str {
        &self.labels[s.0]
    }

    /// Resolves a label.
    pub fn state(&self, label: &str) -> Result<StateId> {
        self.lookup
            .get(label)
            .map(|&i| StateId(i))
            .ok_or_else(|| Error::UnknownState(label.to_string()))
    }

    /// Checks that `s` indexes a state of this chain.
    pub fn check(&self, s: StateId) -> Result<StateId> {
        if s.0 < self.n {
            Ok(s)
        } else {
            Err(Error::UnknownState(s.to_string()))
        }
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.n).map(StateId)
    }

    pub fn row(&self, s: StateId) -> &[T] {
        &self.p[s.0 * self.n..(s.0 + 1) * self.n]
    }

    #[inline]
    pub fn prob(&self, from: StateId, to: StateId) -> T {
        self.p[from.0 * self.n + to.0]
    }

    /// Row-major copy of the transition matrix.
    pub fn flat(&self) -> &[T] {
        &self.p
    }

    pub fn matrix(&self) -> Vec<Vec<T>> {
        self.p.chunks(self.n).map(<[T]>::to_vec).collect()
    }

    pub fn successors(&self, s: StateId) -> impl Iterator<Item = (StateId, T)> + '_ {
        self.row(s)
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > T::zero())
            .map(|(j, &x)| (StateId(j), x))
    }

    pub fn out_degree(&self, s: StateId) -> usize {
        self.row(s).iter().filter(|&&x| x > T::zero()).count()
    }

    pub fn is_absorbing(&self, s: StateId) -> bool {
        self.prob(s, s) == T::one()
    }

    /// Entropy in bits of the outgoing distribution of `s`.
    pub fn local_entropy(&self, s: StateId) -> Result<T> {
        self.check(s)?;
        Ok(entropy_bits(self.row(s)))
    }

    pub fn local_entropies(&self) -> Vec<T> {
        self.states().map(|s| entropy_bits(self.row(s))).collect()
    }

    /// Probability of following `states` step by step.
    ///
    /// The last state is the destination and may not appear at an interior
    /// position; the first state may coincide with it.
    pub fn trajectory_probability(&self, states: &[StateId]) -> Result<T> {
        if states.len() < 2 {
            return Err(Error::TrajectoryTooShort);
        }
        for &s in states {
            self.check(s)?;
        }
        let dest = states[states.len() - 1];
        if let Some(pos) = states[1..states.len() - 1].iter().position(|&x| x == dest) {
            return Err(Error::DestinationRevisited { position: pos + 1 });
        }
        Ok(states.windows(2).fold(T::one(), |acc, w| acc * self.prob(w[0], w[1])))
    }

    /// Redirects every transition into `s` to a new absorbing state `s'`.
    ///
    /// `s` keeps its outgoing row (its self-loop, if any, now leads to `s'`),
    /// so trajectories that leave `s` and come back correspond one to one with
    /// trajectories from `s` to `s'`, with identical probabilities.
    pub fn split_state(&self, s: StateId) -> Result<(Self, StateId)> {
        self.check(s)?;
        let n = self.n;
        let m = n + 1;
        let mut p = vec![T::zero(); m * m];
        for i in 0..n {
            for j in 0..n {
                p[i * m + j] = self.p[i * n + j];
            }
            p[i * m + n] = p[i * m + s.0];
            p[i * m + s.0] = T::zero();
        }
        p[n * m + n] = T::one();
        let mut twin = format!("{}'", self.labels[s.0]);
        while self.lookup.contains_key(&twin) {
            twin.push('\'');
        }
        let mut labels = self.labels.clone();
        labels.push(twin);
        Ok((Self::from_flat(labels, p)?, StateId(n)))
    }

    /// States with a path of positive probability to at least one of `targets`
    /// (targets included).
    pub fn reaching(&self, targets: &[StateId]) -> Vec<bool> {
        let n = self.n;
        let mut mark = vec![false; n];
        let mut queue = VecDeque::new();
        for &t in targets {
            if !mark[t.0] {
                mark[t.0] = true;
                queue.push_back(t.0);
            }
        }
        while let Some(j) = queue.pop_front() {
            for i in 0..n {
                if !mark[i] && self.p[i * n + j] > T::zero() {
                    mark[i] = true;
                    queue.push_back(i);
                }
            }
        }
        mark
    }

    /// States reachable from `source` without expanding any state in `stop`.
    ///
    /// `source` is always included and always expanded; stop states are
    /// included when reached.
    pub fn reachable_from(&self, source: StateId, stop: &[StateId]) -> Vec<bool> {
        let mut mark = vec![false; self.n];
        mark[source.0] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(i) = queue.pop_front() {
            if i != source && stop.contains(&i) {
                continue;
            }
            for (j, _) in self.successors(i) {
                if !mark[j.0] {
                    mark[j.0] = true;
                    queue.push_back(j);
                }
            }
        }
        mark
    }

    /// Sub-chain on `keep` (in the given order). `keep` must be closed: no
    /// kept state may put mass outside it.
    pub fn induced(&self, keep: &[StateId]) -> Result<Self> {
        let m = keep.len();
        let mut p = Vec::with_capacity(m * m);
        for &i in keep {
            for &j in keep {
                p.push(self.prob(i, j));
            }
        }
        let labels = keep.iter().map(|&s| self.labels[s.0].clone()).collect();
        Self::from_flat(labels, p)
    }

    pub fn strongly_connected_components(&self) -> Vec<Vec<StateId>> {
        let mut g = DiGraph::<(), ()>::with_capacity(self.n, 0);
        let nodes: Vec<_> = (0..self.n).map(|_| g.add_node(())).collect();
        for i in 0..self.n {
            for (j, _) in self.successors(StateId(i)) {
                g.add_edge(nodes[i], nodes[j.0], ());
            }
        }
        let mut comps: Vec<Vec<StateId>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut v: Vec<StateId> = c.into_iter().map(|x| StateId(x.index())).collect();
                v.sort();
                v
            })
            .collect();
        comps.sort();
        comps
    }

    pub fn is_irreducible(&self) -> bool {
        let from0 = self.reachable_from(StateId(0), &[]);
        from0.iter().all(|&b| b) && self.reaching(&[StateId(0)]).iter().all(|&b| b)
    }

    /// Period of an irreducible chain; `None` when the chain is reducible.
    pub fn period(&self) -> Option<usize> {
        if !self.is_irreducible() {
            return None;
        }
        let mut level = vec![usize::MAX; self.n];
        level[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        let mut g = 0usize;
        while let Some(i) = queue.pop_front() {
            for (j, _) in self.successors(StateId(i)) {
                if level[j.0] == usize::MAX {
                    level[j.0] = level[i] + 1;
                    queue.push_back(j.0);
                } else {
                    g = gcd(g, (level[i] + 1).abs_diff(level[j.0]));
                }
            }
        }
        Some(g.max(1))
    }

    /// Solves `pi = pi P`, `sum pi = 1` for an irreducible chain.
    ///
    /// Periodic chains are accepted: irreducibility alone makes the solution
    /// unique.
    pub fn stationary_distribution(&self) -> Result<Distribution<T>> {
        if !self.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        let n = self.n;
        // (I - P)^T pi = 0 with the last equation replaced by normalization.
        let mut a = vec![T::zero(); n * n];
        for r in 0..n {
            for c in 0..n {
                let ident = if r == c { T::one() } else { T::zero() };
                a[r * n + c] = ident - self.p[c * n + r];
            }
        }
        for c in 0..n {
            a[(n - 1) * n + c] = T::one();
        }
        let mut b = vec![T::zero(); n];
        b[n - 1] = T::one();
        let mut pi = LuFactors::factor(n, a)?.solve(&b);
        for x in pi.iter_mut() {
            *x = x.max(T::zero());
        }
        let total: T = pi.iter().copied().sum();
        pi.iter_mut().for_each(|x| *x = *x / total);
        Ok(Distribution(pi))
    }

    /// `sum_i pi(i) H(P_i.)` in bits.
    pub fn entropy_rate(&self) -> Result<T> {
        let pi = self.stationary_distribution()?;
        Ok(pi.probs().iter().zip(self.local_entropies()).map(|(&w, h)| w * h).sum())
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
