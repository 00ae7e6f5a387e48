//! Counter-based random streams.
//!
//! One master seed drives everything. Replication `r` draws the rewards of arm
//! `a` from a ChaCha8 stream keyed by the master seed with stream id
//! `(r << 16) | a`; the `k`-th pull of arm `a` consumes the `k`-th draw of that
//! stream. Perturbations for replication `r` use stream id `(r << 16) | 0xFFFF`.
//! The reward an arm yields on its `k`-th pull is therefore a function of
//! `(seed, r, a, k)` alone: it does not depend on which policy is run, on the
//! order replications execute in, or on how many workers run them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Slot reserved for the perturbation stream; arm indices must stay below it.
pub const PERTURBATION_SLOT: u64 = 0xFFFF;
pub const MAX_ARMS: usize = PERTURBATION_SLOT as usize;
pub const MAX_REPLICATION: u64 = (1 << 48) - 1;

fn stream(seed: u64, replication: u64, slot: u64) -> ChaCha8Rng {
    debug_assert!(replication <= MAX_REPLICATION);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((replication << 16) | slot);
    rng
}

pub fn arm_stream(seed: u64, replication: u64, arm: usize) -> ChaCha8Rng {
    assert!(arm < MAX_ARMS, "arm index {arm} collides with the perturbation slot");
    stream(seed, replication, arm as u64)
}

pub fn perturbation_stream(seed: u64, replication: u64) -> ChaCha8Rng {
    stream(seed, replication, PERTURBATION_SLOT)
}

/// All random streams owned by one replication.
#[derive(Debug, Clone)]
pub struct ReplicationStreams {
    arms: Vec<ChaCha8Rng>,
    perturbation: ChaCha8Rng,
}

impl ReplicationStreams {
    pub fn new(seed: u64, replication: u64, num_arms: usize) -> Self {
        Self {
            arms: (0..num_arms).map(|a| arm_stream(seed, replication, a)).collect(),
            perturbation: perturbation_stream(seed, replication),
        }
    }

    pub fn arm(&mut self, arm: usize) -> &mut ChaCha8Rng {
        &mut self.arms[arm]
    }

    pub fn perturbation(&mut self) -> &mut ChaCha8Rng {
        &mut self.perturbation
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn draws(mut rng: ChaCha8Rng) -> Vec<u64> {
        (0..8).map(|_| rng.random()).collect()
    }

    #[test]
    fn streams_are_distinct_and_reproducible() {
        let a = draws(arm_stream(7, 3, 1));
        assert_eq!(a, draws(arm_stream(7, 3, 1)));
        assert_ne!(a, draws(arm_stream(7, 3, 2)));
        assert_ne!(a, draws(arm_stream(7, 4, 1)));
        assert_ne!(a, draws(arm_stream(8, 3, 1)));
    }

    #[test]
    fn perturbation_stream_differs_from_arm_streams() {
        let mut p = perturbation_stream(1, 0);
        let mut a = arm_stream(1, 0, 0);
        assert_ne!(p.random::<u64>(), a.random::<u64>());
    }
}
