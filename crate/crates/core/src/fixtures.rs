//! Reference chains used by examples, tests and the acceptance suite.

use crate::chain::MarkovChain;

/// Five-state chain with labels `"1"` to `"5"`:
///
/// ```text
/// 1 -> 2 (1/4), 1 -> 3 (3/4)
/// 2 -> 5
/// 3 -> 2 (1/2), 3 -> 4 (1/2)
/// 4 -> 5
/// 5 -> 1 (1/2), 5 -> 4 (1/2)
/// ```
pub fn five_state() -> MarkovChain<f64> {
    MarkovChain::new(
        vec!["1", "2", "3", "4", "5"],
        vec![
            vec![0.0, 0.25, 0.75, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.5, 0.0, 0.5, 0.0],
            vec![0.0, 0.0, 0.0, 0.0, 1.0],
            vec![0.5, 0.0, 0.0, 0.5, 0.0],
        ],
    )
    .expect("fixture is a valid chain")
}
