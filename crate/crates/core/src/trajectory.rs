//! Unconditional trajectory entropies.
//!
//! The entropy of the random trajectory from `s` to `d` is the expected
//! number of visits to each transient state weighted by that state's local
//! entropy, i.e. row `s` of `(I - Q_d)^{-1}` applied to the local-entropy
//! vector.

use rayon::prelude::*;

use crate::absorb::factor_transient;
use crate::chain::{MarkovChain, StateId};
use crate::error::{Error, Result};
use crate::scalar::{entropy_bits, Real};

/// `H[s][d]`: entropy in bits of the trajectory from `s` to `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyMatrix<T> {
    labels: Vec<String>,
    n: usize,
    values: Vec<T>,
}

impl<T: Real> EntropyMatrix<T> {
    pub fn n_states(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, s: StateId, d: StateId) -> T {
        self.values[s.0 * self.n + d.0]
    }

    pub fn row(&self, s: StateId) -> &[T] {
        &self.values[s.0 * self.n..(s.0 + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.values.chunks(self.n).map(<[T]>::to_vec).collect()
    }
}

/// One term of the visits-times-local-entropy decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyTerm<T> {
    pub state: StateId,
    pub expected_visits: T,
    pub local_entropy: T,
}

/// States a trajectory from `s` can visit before `d`, checked so that `d`
/// is hit with probability one.
fn transient_cone<T: Real>(chain: &MarkovChain<T>, s: StateId, d: StateId) -> Result<Vec<StateId>> {
    let reach = chain.reaching(&[d]);
    if !reach[s.0] {
        return Err(Error::SourceCannotReachDestination {
            source_state: chain.label(s).to_string(),
            destination: chain.label(d).to_string(),
        });
    }
    let cone = chain.reachable_from(s, &[d]);
    if let Some(bad) = chain.states().find(|i| cone[i.0] && !reach[i.0]) {
        return Err(Error::DestinationNotCertain {
            source_state: chain.label(s).to_string(),
            destination: chain.label(d).to_string(),
            via: chain.label(bad).to_string(),
        });
    }
    Ok(chain.states().filter(|&i| cone[i.0] && i != d).collect())
}

/// Entropy in bits of the trajectory from `s` to `d`.
///
/// Only states reachable from `s` before `d` take part, so the destination
/// needs to be reachable from those states alone. When `s == d` the state is
/// split first and the return trajectory to the twin is measured.
pub fn trajectory_entropy<T: Real>(chain: &MarkovChain<T>, s: StateId, d: StateId) -> Result<T> {
    chain.check(s)?;
    chain.check(d)?;
    if s == d {
        let (split, twin) = chain.split_state(s)?;
        return trajectory_entropy(&split, s, twin);
    }
    let cone = transient_cone(chain, s, d)?;
    let lu = factor_transient(chain, &cone)?;
    let local: Vec<T> = cone.iter().map(|&k| entropy_bits(chain.row(k))).collect();
    let h = lu.solve(&local);
    let pos = cone.iter().position(|&k| k == s).expect("source is in its own cone");
    Ok(h[pos].max(T::zero()))
}

/// The per-state terms whose sum is [`trajectory_entropy`]`(s, d)`.
pub fn entropy_terms<T: Real>(chain: &MarkovChain<T>, s: StateId, d: StateId) -> Result<Vec<EntropyTerm<T>>> {
    chain.check(s)?;
    chain.check(d)?;
    if s == d {
        let (split, twin) = chain.split_state(s)?;
        return entropy_terms(&split, s, twin);
    }
    let cone = transient_cone(chain, s, d)?;
    let lu = factor_transient(chain, &cone)?;
    let pos = cone.iter().position(|&k| k == s).expect("source is in its own cone");
    let mut unit = vec![T::zero(); cone.len()];
    unit[pos] = T::one();
    let visits = lu.solve_transpose(&unit);
    Ok(cone
        .iter()
        .zip(visits)
        .map(|(&k, v)| EntropyTerm {
            state: k,
            expected_visits: v,
            local_entropy: entropy_bits(chain.row(k)),
        })
        .collect())
}

/// Column `d` of the entropy matrix: one factorization of `I - Q_d` serves
/// every source, the diagonal entry goes through the split chain.
fn entropy_column<T: Real>(chain: &MarkovChain<T>, d: StateId, local: &[T]) -> Result<Vec<T>> {
    let n = chain.n_states();
    let others: Vec<StateId> = chain.states().filter(|&i| i != d).collect();
    let mut col = vec![T::zero(); n];
    if !others.is_empty() {
        let lu = factor_transient(chain, &others)?;
        let rhs: Vec<T> = others.iter().map(|k| local[k.0]).collect();
        for (k, h) in others.iter().zip(lu.solve(&rhs)) {
            col[k.0] = h.max(T::zero());
        }
    }
    col[d.0] = trajectory_entropy(chain, d, d)?;
    Ok(col)
}

/// All `N^2` trajectory entropies of an irreducible chain.
///
/// Columns are independent and computed in parallel.
pub fn entropy_matrix<T: Real>(chain: &MarkovChain<T>) -> Result<EntropyMatrix<T>> {
    if !chain.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let n = chain.n_states();
    let local = chain.local_entropies();
    let cols: Vec<Vec<T>> = (0..n)
        .into_par_iter()
        .map(|d| entropy_column(chain, StateId(d), &local))
        .collect::<Result<_>>()?;
    let mut values = vec![T::zero(); n * n];
    for (d, col) in cols.into_iter().enumerate() {
        for (s, h) in col.into_iter().enumerate() {
            values[s * n + d] = h;
        }
    }
    Ok(EntropyMatrix {
        labels: chain.labels().to_vec(),
        n,
        values,
    })
}
