//! Named random streams derived from one root seed.
//!
//! Every stream is a ChaCha8 generator keyed by the root seed and set to a
//! fixed stream id, so draws in one stream never shift another and the
//! sequence is identical across platforms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    GraphSample = 0,
    TrueParams = 1,
    View = 2,
    PreSeed = 3,
    TieBreak = 4,
    Outcomes = 5,
}

pub fn stream(seed: u64, which: Stream) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(which as u64);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn draws(mut r: SimRng) -> Vec<u64> {
        (0..8).map(|_| r.random()).collect()
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        assert_eq!(draws(stream(42, Stream::View)), draws(stream(42, Stream::View)));
        assert_ne!(draws(stream(42, Stream::View)), draws(stream(42, Stream::PreSeed)));
        assert_ne!(draws(stream(42, Stream::View)), draws(stream(43, Stream::View)));
    }

    #[test]
    fn first_draw_is_pinned() {
        // guards against a silent change of generator or seeding scheme
        assert_eq!(stream(0, Stream::TrueParams).random::<u64>(), PINNED);
    }

    const PINNED: u64 = 13_937_087_304_575_520_531;
}
