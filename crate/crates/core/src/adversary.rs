//! Optimal single-round cheating strategies and the grid oracles that certify them.
//!
//! A cheating sender prepares a state between the two bases and, once `b` is
//! known, reveals whichever `(a, r = b ⊕ target)` its state overlaps best with.
//! A cheating receiver measures the incoming qubit in the Helstrom basis for
//! `r`, then picks `b` so that `b ⊕ guess` is its target.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rand::Rng;

use crate::error::{Error, Result};
use crate::protocol::{ArrivalReport, Receiver, Sender, Verdict};
use crate::qubit::{measure, mixture_of_r, protocol_state, Angle, BasisBitPair, Bit, MeasurementBasis, PureState};
use crate::sim::StreamRng;

pub const MIN_GRID_POINTS: usize = 1000;

/// The outcome a cheater tries to force.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheatTarget {
    pub desired_outcome: Bit,
}

impl CheatTarget {
    pub fn new(desired_outcome: Bit) -> Self {
        CheatTarget { desired_outcome }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrategySearchResult {
    pub best_success: f64,
    /// State angle θ (sender search) or measurement angle μ (receiver search).
    pub argmax: f64,
    /// Spacing of the search grid in radians.
    pub resolution: f64,
    pub grid_points: usize,
}

/// Angle of the optimal cheating state, `α/2 + π/4`.
pub fn optimal_sender_angle(alpha: Angle) -> f64 {
    alpha.radians() / 2.0 + FRAC_PI_4
}

/// Angle of the optimal cheating measurement, `α/2`.
pub fn optimal_receiver_angle(alpha: Angle) -> f64 {
    alpha.radians() / 2.0
}

/// The basis that maximizes the pass probability of revealing `r` for `state`.
/// Ties go to `a = 0`.
pub fn best_reveal_basis(state: &PureState, r: Bit, alpha: Angle) -> Result<Bit> {
    let o0 = protocol_state(Bit::ZERO, r, alpha)?.overlap(state);
    let o1 = protocol_state(Bit::ONE, r, alpha)?.overlap(state);
    Ok(Bit::from(o1 > o0))
}

/// `½ Σ_r max_a |⟨φ(a,r)|ψ⟩|²`: the chance that a sender holding `state` passes
/// verification when the required `r` is uniform.
pub fn sender_pass_probability(state: &PureState, alpha: Angle) -> Result<f64> {
    let mut total = 0.0;
    for r in [Bit::ZERO, Bit::ONE] {
        let o0 = protocol_state(Bit::ZERO, r, alpha)?.overlap(state);
        let o1 = protocol_state(Bit::ONE, r, alpha)?.overlap(state);
        total += o0.max(o1);
    }
    Ok(0.5 * total)
}

/// Guessing probability for `r` when measuring in the basis rotated by `mu`
/// and reading outcome 0 as `r = 0`.
pub fn receiver_guess_probability(mu: Angle, alpha: Angle) -> Result<f64> {
    let rho0 = mixture_of_r(Bit::ZERO, alpha)?;
    let rho1 = mixture_of_r(Bit::ONE, alpha)?;
    let basis = MeasurementBasis::rotated(mu);
    Ok(0.5 * rho0.expectation(&basis.first()) + 0.5 * rho1.expectation(&basis.second()))
}

pub struct CheatingSender {
    target: CheatTarget,
    state: PureState,
    alpha: Angle,
}

impl CheatingSender {
    /// The optimal attack, preparing the state at `α/2 + π/4`.
    pub fn new(target: CheatTarget, alpha: Angle) -> Result<Self> {
        let alpha = alpha.check_protocol()?;
        Ok(Self::with_state_angle(target, alpha, Angle::new(optimal_sender_angle(alpha))))
    }

    /// An attack with an arbitrary real state `cos θ|0⟩ + sin θ|1⟩`.
    pub fn with_state_angle(target: CheatTarget, alpha: Angle, theta: Angle) -> Self {
        CheatingSender {
            target,
            state: PureState::from_angle(theta),
            alpha,
        }
    }

    pub fn state(&self) -> PureState {
        self.state
    }
}

impl Sender for CheatingSender {
    fn prepare(&mut self, alpha: Angle) -> PureState {
        self.alpha = alpha;
        self.state
    }

    fn reveal(&mut self, challenge: Bit) -> BasisBitPair {
        let r = challenge ^ self.target.desired_outcome;
        let a = best_reveal_basis(&self.state, r, self.alpha).expect("alpha validated by QcfConfig");
        BasisBitPair::new(a, r)
    }
}

pub struct CheatingReceiver {
    target: CheatTarget,
    rng: StreamRng,
    guess: Option<Bit>,
}

impl CheatingReceiver {
    pub fn new(target: CheatTarget, rng: StreamRng) -> Self {
        CheatingReceiver { target, rng, guess: None }
    }
}

impl Receiver for CheatingReceiver {
    fn on_arrival(&mut self, delivered: Option<PureState>, alpha: Angle) -> ArrivalReport {
        let Some(state) = delivered else {
            self.guess = None;
            return ArrivalReport::Failed;
        };
        let basis = MeasurementBasis::rotated(Angle::new(optimal_receiver_angle(alpha)));
        let u: f64 = self.rng.random();
        self.guess = measure(&state, &basis, u).ok();
        ArrivalReport::Confirmed
    }

    fn challenge(&mut self) -> Bit {
        self.guess.unwrap_or(Bit::ZERO) ^ self.target.desired_outcome
    }

    fn verify(&mut self, _reveal: BasisBitPair, _alpha: Angle) -> Verdict {
        Verdict::Accept
    }
}

fn check_grid(grid_points: usize) -> Result<()> {
    if grid_points < MIN_GRID_POINTS {
        return Err(Error::Domain {
            name: "grid_points",
            value: grid_points as f64,
            domain: "≥ 1000",
        });
    }
    Ok(())
}

fn grid_argmax<F>(points: impl Iterator<Item = f64>, mut objective: F) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut best = (f64::NEG_INFINITY, f64::NAN);
    for x in points {
        let v = objective(x)?;
        if v > best.0 {
            best = (v, x);
        }
    }
    Ok(best)
}

/// Scans real pure states `θ ∈ [−π/2, π/2]` for the highest sender pass probability.
///
/// Restricting to pure states loses nothing: the objective is a maximum of
/// linear functionals of the density operator, so it peaks at an extreme point.
pub fn oracle_sender_search(alpha: Angle, grid_points: usize) -> Result<StrategySearchResult> {
    let alpha = alpha.check_protocol()?;
    check_grid(grid_points)?;
    let step = PI / (grid_points - 1) as f64;
    let thetas = (0..grid_points).map(|k| -FRAC_PI_2 + k as f64 * step);
    let (best_success, argmax) = grid_argmax(thetas, |theta| {
        sender_pass_probability(&PureState::from_angle(Angle::new(theta)), alpha)
    })?;
    Ok(StrategySearchResult {
        best_success,
        argmax,
        resolution: step,
        grid_points,
    })
}

/// Scans projective measurements `μ ∈ [0, π)` for the best guess of `r`.
pub fn oracle_receiver_search(alpha: Angle, grid_points: usize) -> Result<StrategySearchResult> {
    let alpha = alpha.check_protocol()?;
    check_grid(grid_points)?;
    let step = PI / grid_points as f64;
    let mus = (0..grid_points).map(|k| k as f64 * step);
    let (best_success, argmax) = grid_argmax(mus, |mu| receiver_guess_probability(Angle::new(mu), alpha))?;
    Ok(StrategySearchResult {
        best_success,
        argmax,
        resolution: step,
        grid_points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::{helstrom_success, ALGEBRA_TOL};

    fn pa(x: f64) -> Angle {
        Angle::protocol(x).unwrap()
    }

    #[test]
    fn optimal_state_passes_with_closed_form_probability() {
        for k in 0..=20 {
            let alpha = k as f64 * FRAC_PI_2 / 20.0;
            let s = CheatingSender::new(CheatTarget::new(Bit::ONE), pa(alpha)).unwrap();
            let pass = sender_pass_probability(&s.state(), pa(alpha)).unwrap();
            assert!((pass - (1.0 + alpha.sin()) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn reveal_rule_for_optimal_state() {
        // θ* = α/2 + π/4: reveal a=1 when r=0 and a=0 when r=1.
        let alpha = pa(0.8);
        let target = CheatTarget::new(Bit::ZERO);
        let mut s = CheatingSender::new(target, alpha).unwrap();
        s.prepare(alpha);
        assert_eq!(s.reveal(Bit::ZERO), BasisBitPair::new(Bit::ONE, Bit::ZERO));
        assert_eq!(s.reveal(Bit::ONE), BasisBitPair::new(Bit::ZERO, Bit::ONE));
    }

    #[test]
    fn reveal_ties_break_to_basis_zero() {
        // At α = 0 both bases coincide, so every overlap pair ties.
        let alpha = pa(0.0);
        let mut s = CheatingSender::new(CheatTarget::new(Bit::ONE), alpha).unwrap();
        s.prepare(alpha);
        assert_eq!(s.reveal(Bit::ZERO).a, Bit::ZERO);
        assert_eq!(s.reveal(Bit::ONE).a, Bit::ZERO);
    }

    #[test]
    fn receiver_angle_is_helstrom_optimal() {
        for k in 0..=16 {
            let alpha = pa(k as f64 * FRAC_PI_2 / 16.0);
            let achieved = receiver_guess_probability(Angle::new(optimal_receiver_angle(alpha)), alpha).unwrap();
            let bound = helstrom_success(
                &mixture_of_r(Bit::ZERO, alpha).unwrap(),
                &mixture_of_r(Bit::ONE, alpha).unwrap(),
                0.5,
            )
            .unwrap();
            assert!((achieved - bound).abs() < ALGEBRA_TOL);
        }
    }

    #[test]
    fn sender_oracle_endpoints() {
        // At α = 0 the objective is ½(cos²θ + sin²θ) for every θ.
        let r = oracle_sender_search(pa(0.0), 2001).unwrap();
        assert!((r.best_success - 0.5).abs() < 1e-12);
        let r = oracle_sender_search(pa(FRAC_PI_2), 2001).unwrap();
        assert!((r.best_success - 1.0).abs() < 1e-5);
    }

    #[test]
    fn sender_oracle_matches_at_quarter_pi() {
        let r = oracle_sender_search(pa(FRAC_PI_4), 100_001).unwrap();
        assert!((r.best_success - (1.0 + FRAC_PI_4.sin()) / 2.0).abs() < 1e-8);
    }

    #[test]
    fn receiver_oracle_cases() {
        let r = oracle_receiver_search(pa(FRAC_PI_4), 10_000).unwrap();
        assert!((r.best_success - (1.0 + FRAC_PI_4.cos()) / 2.0).abs() < 1e-6);
        assert!((r.argmax - FRAC_PI_4 / 2.0).abs() <= r.resolution);
        let r = oracle_receiver_search(pa(FRAC_PI_2), 10_000).unwrap();
        assert!((r.best_success - 0.5).abs() < 1e-12);
    }

    #[test]
    fn oracles_reject_coarse_grids() {
        assert!(oracle_sender_search(pa(0.3), 999).is_err());
        assert!(oracle_receiver_search(pa(0.3), 10).is_err());
        assert!(oracle_sender_search(Angle::new(2.0), 2000).is_err());
    }

    #[test]
    fn sender_oracle_monotone_in_alpha() {
        let mut prev = 0.0;
        for k in 0..32 {
            let alpha = pa(k as f64 * FRAC_PI_2 / 31.0);
            let r = oracle_sender_search(alpha, 4001).unwrap();
            assert!(r.best_success >= prev - 1e-12);
            prev = r.best_success;
        }
    }
}
