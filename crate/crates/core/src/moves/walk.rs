//! Seeded random walks in the move graph, used to generate test corpora.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dual_pair::DualPair;

use super::{apply_move, check_preconditions, AcMove, MoveSequence};

/// Draws per step before the step is skipped.
pub const RETRIES: usize = 64;

/// Walks `length` steps from `start`. Each step draws uniformly from all
/// parameter choices at the current rank and redraws on a failed
/// precondition; a step with no success after [`RETRIES`] draws is skipped.
pub fn random_walk(start: &DualPair, seed: u64, length: usize) -> (MoveSequence, DualPair) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log = MoveSequence::start(start);
    let mut pair = start.clone();
    for _ in 0..length {
        let candidates = AcMove::all(pair.d());
        for _ in 0..RETRIES {
            let mv = *candidates.choose(&mut rng).expect("at least m4+");
            if check_preconditions(&pair, mv).is_ok() {
                pair = apply_move(&pair, mv).expect("preconditions checked");
                log.push(mv, &pair);
                break;
            }
        }
    }
    (log, pair)
}

/// The standard corpus: seeds `0..100` from the trivial and both Z/2 seed
/// pairs, walk length `1 + seed % 30`. Yields `(start, log, end)`.
pub fn corpus() -> Vec<(DualPair, MoveSequence, DualPair)> {
    let starts = [DualPair::trivial(), DualPair::z2(false), DualPair::z2(true)];
    let mut out = Vec::new();
    for start in &starts {
        for seed in 0..100u64 {
            let (log, end) = random_walk(start, seed, 1 + (seed % 30) as usize);
            out.push((start.clone(), log, end));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual_pair::validate_dual_pair;
    use crate::presentation::abelian_invariants;

    #[test]
    fn empty_walk() {
        let (log, end) = random_walk(&DualPair::trivial(), 0, 0);
        assert!(log.is_empty());
        assert_eq!(end, DualPair::trivial());
    }

    #[test]
    fn walks_are_deterministic_and_valid() {
        let (a, pa) = random_walk(&DualPair::trivial(), 1, 50);
        let (b, pb) = random_walk(&DualPair::trivial(), 1, 50);
        assert_eq!(a, b);
        assert_eq!(pa, pb);
        assert!(validate_dual_pair(pa.p(), pa.pstar(), pa.family()).is_ok());
        let nonunit: Vec<i64> = abelian_invariants(pa.p()).into_iter().filter(|&x| x != 1).collect();
        assert!(nonunit.is_empty());

        let (_, z) = random_walk(&DualPair::z2(false), 7, 50);
        let nonunit: Vec<i64> = abelian_invariants(z.p()).into_iter().filter(|&x| x != 1).collect();
        assert_eq!(nonunit, vec![2]);
    }
}
