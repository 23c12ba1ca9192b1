//! Seeding and parallel aggregation for Monte Carlo drivers.
//!
//! Each trial draws from its own ChaCha stream, addressed by `(seed, trial, lane)`,
//! so results do not depend on how trials are scheduled across workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub type StreamRng = ChaCha8Rng;

/// Independent randomness consumers inside one trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Lane {
    Referee = 0,
    Sender = 1,
    Receiver = 2,
    /// Dice rolling: round-2 streams are offset by this much.
    SecondRound = 4,
}

const LANES_PER_TRIAL: u64 = 16;

/// The RNG stream for `lane` in trial `trial` of an experiment seeded with `seed`.
pub fn stream_rng(seed: u64, trial: u64, lane: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial.wrapping_mul(LANES_PER_TRIAL).wrapping_add(lane));
    rng
}

/// Something that can be summed across trials in any order.
pub trait Tally: Default + Send {
    fn merge(self, other: Self) -> Self;
}

/// Runs `trial(i)` for `i in 0..trials` on the rayon pool and merges the tallies.
pub fn run_trials<T, F>(trials: u64, trial: F) -> T
where
    T: Tally,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..trials)
        .into_par_iter()
        .fold(T::default, |acc, i| acc.merge(trial(i)))
        .reduce(T::default, T::merge)
}

/// Binomial standard deviation of a frequency estimate.
pub fn binomial_sigma(prob: f64, trials: u64) -> f64 {
    (prob * (1.0 - prob) / trials as f64).sqrt()
}

/// `(empirical − analytic) / σ`; zero when both the spread and the error vanish.
pub fn z_score(empirical: f64, analytic: f64, trials: u64) -> f64 {
    let sigma = binomial_sigma(analytic, trials);
    let diff = empirical - analytic;
    if sigma > 0.0 {
        diff / sigma
    } else if diff.abs() < 1e-15 {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    }
}
