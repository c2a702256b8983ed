//! Shannon entropy of Markov-chain trajectories.
//!
//! A trajectory from `s` to `d` is the random path a chain started in `s`
//! follows until it first reaches `d`. This crate computes
//!
//! * the entropy of that path, [`trajectory_entropy`], and of all `N^2`
//!   pairs at once, [`entropy_matrix`];
//! * the entropy conditioned on avoiding a state, [`entropy_avoiding`], or on
//!   visiting an ordered sequence of states, [`entropy_via_sequence`];
//! * absorption probabilities and expected visit counts;
//! * brute-force ground truth by enumeration and simulation, in [`oracle`].
//!
//! Everything is generic over the scalar type ([`Real`], `f32` or `f64`);
//! the aliases below fix it to `f64`.
//!
//! ```
//! use trajent::{fixtures, trajectory_entropy, entropy_via_sequence, CondQuery};
//!
//! let chain = fixtures::five_state();
//! let (s, d) = (chain.state("1")?, chain.state("5")?);
//! let h = trajectory_entropy(&chain, s, d)?;
//! assert!((h - 1.5613).abs() < 1e-4);
//!
//! let q = CondQuery::from_labels(&chain, "1", "5", &["3"])?;
//! assert!((entropy_via_sequence(&chain, &q)?.entropy - 1.0).abs() < 1e-9);
//! # Ok::<(), trajent::Error>(())
//! ```

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod absorb;
pub mod chain;
pub mod conditional;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod scalar;
pub mod trajectory;

pub use absorb::{absorption_probabilities, expected_visits, make_absorbing, restrict_to_reaching};
pub use chain::{StateId, Trajectory};
pub use conditional::{
    avoid_transform, bernoulli_entropy, entropy_avoiding, entropy_via_sequence, entropy_via_single,
    sequence_vs_set_gap, visit_probability, CondQuery,
};
pub use error::{Error, ErrorKind, Result};
pub use scalar::{entropy_bits, Real};
pub use trajectory::{entropy_matrix, entropy_terms, trajectory_entropy};

pub type MarkovChain<T = f64> = chain::MarkovChain<T>;
pub type Chain = chain::MarkovChain<f64>;
pub type Chain32 = chain::MarkovChain<f32>;
pub type Distribution = chain::Distribution<f64>;
pub type EntropyMatrix = trajectory::EntropyMatrix<f64>;
pub type EntropyTerm = trajectory::EntropyTerm<f64>;
pub type AbsorptionResult = absorb::AbsorptionResult<f64>;
pub type VisitCounts = absorb::VisitCounts<f64>;
pub type CondResult = conditional::CondResult<f64>;
pub type SingleConditioning = conditional::SingleConditioning<f64>;
pub type EnumerationResult = oracle::EnumerationResult<f64>;
