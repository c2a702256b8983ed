//! Random chain generators for property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::chain::{MarkovChain, StateId};

fn normalize(rows: Vec<Vec<f64>>) -> MarkovChain<f64> {
    let rows = rows
        .into_iter()
        .map(|r| {
            let sum: f64 = r.iter().sum();
            r.into_iter().map(|x| x / sum).collect()
        })
        .collect();
    MarkovChain::from_rows(rows).expect("generated rows are distributions")
}

fn weight<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(0.05..1.0)
}

/// Irreducible chain on `n` states: a random Hamiltonian cycle plus each
/// other edge (self-loops included) with probability `density`.
pub fn irreducible<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> MarkovChain<f64> {
    let mut rows = vec![vec![0.0; n]; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for k in 0..n {
        rows[order[k]][order[(k + 1) % n]] = weight(rng);
    }
    for row in rows.iter_mut() {
        for x in row.iter_mut() {
            if *x == 0.0 && rng.random_bool(density) {
                *x = weight(rng);
            }
        }
    }
    normalize(rows)
}

/// Chain on `n` states in which every state reaches `d`, which may be
/// absorbing. Other states can be transient or recurrent.
pub fn reaching<R: Rng + ?Sized>(rng: &mut R, n: usize, d: StateId, density: f64) -> MarkovChain<f64> {
    let mut rows = vec![vec![0.0; n]; n];
    // random in-tree rooted at d
    let mut others: Vec<usize> = (0..n).filter(|&i| i != d.0).collect();
    others.shuffle(rng);
    let mut attached = vec![d.0];
    for &i in &others {
        let parent = attached[rng.random_range(0..attached.len())];
        rows[i][parent] = weight(rng);
        attached.push(i);
    }
    let absorbing = rng.random_bool(0.3);
    for (i, row) in rows.iter_mut().enumerate() {
        if i == d.0 && absorbing {
            row[i] = 1.0;
            continue;
        }
        for x in row.iter_mut() {
            if *x == 0.0 && rng.random_bool(density) {
                *x = weight(rng);
            }
        }
        if row.iter().all(|&x| x == 0.0) {
            row[rng.random_range(0..n)] = 1.0;
        }
    }
    normalize(rows)
}

/// Irreducible chain whose trajectories into `d` are cheap to enumerate.
///
/// States are laid out on a line ending in `d`. Forward moves carry most of
/// the mass; backward moves and self-loops share at most `back_mass` of each
/// row, so long trajectories are exponentially unlikely. `d` itself moves
/// back into the line.
pub fn enumerable<R: Rng + ?Sized>(rng: &mut R, n: usize, d: StateId, back_mass: f64) -> MarkovChain<f64> {
    let mut order: Vec<usize> = (0..n).filter(|&i| i != d.0).collect();
    order.shuffle(rng);
    order.push(d.0);
    let mut rows = vec![vec![0.0; n]; n];
    let spread = |rng: &mut R, row: &mut Vec<f64>, targets: &[usize], mass: f64| {
        let w: Vec<f64> = targets.iter().map(|_| weight(rng)).collect();
        let total: f64 = w.iter().sum();
        for (&j, x) in targets.iter().zip(w) {
            row[j] += mass * x / total;
        }
    };
    for k in 0..n - 1 {
        let forward: Vec<usize> = (k + 1..n)
            .filter(|&m| m == k + 1 || rng.random_bool(0.5))
            .map(|m| order[m])
            .collect();
        let backward: Vec<usize> = (0..=k).filter(|_| rng.random_bool(0.3)).map(|m| order[m]).collect();
        let back = if backward.is_empty() {
            0.0
        } else {
            rng.random_range(0.0..back_mass)
        };
        spread(rng, &mut rows[order[k]], &forward, 1.0 - back);
        if back > 0.0 {
            spread(rng, &mut rows[order[k]], &backward, back);
        }
    }
    let exits: Vec<usize> = (0..n)
        .filter(|&m| m == 0 || rng.random_bool(0.4))
        .map(|m| order[m])
        .collect();
    spread(rng, &mut rows[d.0], &exits, 1.0);
    normalize(rows)
}
