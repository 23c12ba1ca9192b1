//! Three-party dice rolling as a two-round knockout of coin flips.
//!
//! Round 1: Alice (sender, angle α) against Bob (receiver); outcome 0 means the
//! sender advances. Round 2: the round-1 winner (sender, angle β) against
//! Charlie (receiver); outcome 0 means the sender wins overall.
//!
//! Fairness means every party's worst-case losing probability is the same
//! when the other two collude. [`dr_solve`] finds the `(α, β)` achieving that
//! and [`dr_bisect_beta`] certifies the `β` it picks.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use crate::adversary::{CheatTarget, CheatingReceiver, CheatingSender};
use crate::analysis::{bisect, check_ascending_grid, fair_sin_alpha};
use crate::error::{check_probability, check_sub_unit, Error, Result};
use crate::format::fmt_sig;
use crate::protocol::{run_qcf, HonestReceiver, HonestSender, LossModel, Outcome, QcfConfig, Receiver, Sender, Transcript, DEFAULT_RESTART_CAP};
use crate::qubit::{Angle, Bit};
use crate::sim::{run_trials, stream_rng, z_score, Lane, StreamRng, Tally};

/// Required agreement between the quadratic and bisection routes, and the
/// fairness residual bound.
pub const DR_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Party {
    Alice,
    Bob,
    Charlie,
}

impl Party {
    pub const ALL: [Party; 3] = [Party::Alice, Party::Bob, Party::Charlie];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Party::Alice => "alice",
            Party::Bob => "bob",
            Party::Charlie => "charlie",
        })
    }
}

impl FromStr for Party {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "alice" | "a" => Ok(Party::Alice),
            "bob" | "b" => Ok(Party::Bob),
            "charlie" | "c" => Ok(Party::Charlie),
            _ => Err(Error::Invariant(format!("unknown party {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DrConfig {
    pub alpha: Angle,
    pub beta: Angle,
    pub loss: LossModel,
    pub restart_cap: u32,
}

impl DrConfig {
    pub fn new(alpha: Angle, beta: Angle, loss: LossModel) -> Result<Self> {
        Ok(DrConfig {
            alpha: alpha.check_protocol()?,
            beta: beta.check_protocol()?,
            loss,
            restart_cap: DEFAULT_RESTART_CAP,
        })
    }

    fn round(&self, round: Round) -> QcfConfig {
        let alpha = match round {
            Round::First => self.alpha,
            Round::Second => self.beta,
        };
        QcfConfig::new(alpha, self.loss, self.restart_cap).expect("angles validated by DrConfig")
    }
}

/// Worst-case losing probabilities `(P̄_A, P̄_B, P̄_C)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WorstCaseProbs {
    pub p_a_bar: f64,
    pub p_b_bar: f64,
    pub p_c_bar: f64,
}

impl WorstCaseProbs {
    pub fn get(&self, party: Party) -> f64 {
        match party {
            Party::Alice => self.p_a_bar,
            Party::Bob => self.p_b_bar,
            Party::Charlie => self.p_c_bar,
        }
    }

    /// Largest deviation of the three values from `target`.
    pub fn residual(&self, target: f64) -> f64 {
        [self.p_a_bar, self.p_b_bar, self.p_c_bar]
            .iter()
            .map(|v| (v - target).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DrSolution {
    pub p: f64,
    pub alpha_star: Angle,
    pub beta_star: Angle,
    /// The common worst-case losing probability.
    pub p_star: f64,
    /// `p_star − 2/3`.
    pub epsilon: f64,
    /// `β` from the independent bisection route.
    pub beta_bisection: f64,
}

/// Probability that a receiver cheating at angle `α` wins the round: `(1 + cos α)/2`.
fn receiver_wins(alpha: f64) -> f64 {
    (1.0 + alpha.cos()) / 2.0
}

/// Probability that a sender cheating at angle `α` wins under memory loss `p`.
fn sender_wins(alpha: f64, p: f64) -> f64 {
    (1.0 + p + (1.0 - p) * alpha.sin()) / 2.0
}

pub fn dr_losing_probs(alpha: Angle, beta: Angle, p: f64) -> Result<WorstCaseProbs> {
    let (a, b) = (alpha.check_protocol()?.radians(), beta.check_protocol()?.radians());
    let p = check_probability("p", p)?;
    let round2 = receiver_wins(b);
    let first_a = receiver_wins(a);
    let first_b = sender_wins(a, p);
    Ok(WorstCaseProbs {
        p_a_bar: first_a + (1.0 - first_a) * round2,
        p_b_bar: first_b + (1.0 - first_b) * round2,
        p_c_bar: sender_wins(b, p),
    })
}

/// `1 − cos α`, computed without cancellation.
fn one_minus_cos(alpha: f64) -> f64 {
    2.0 * (alpha / 2.0).sin().powi(2)
}

/// Coefficients `(a, b, c)` of `a·P² − b·P + c = 0` for the common losing
/// probability `P = P̄_C`, obtained from `sin²β + cos²β = 1`.
pub fn dr_quadratic(alpha: Angle, p: f64) -> (f64, f64, f64) {
    let omc = one_minus_cos(alpha.radians());
    let opc = 1.0 + alpha.radians().cos();
    let q = 1.0 - p;
    let m = opc / omc + 0.5;
    let a = 16.0 / (omc * omc) + 4.0 / (q * q);
    let b = 4.0 * (1.0 + p) / (q * q) + 16.0 / omc * m;
    let c = 4.0 * m * m + ((1.0 + p) / q).powi(2) - 1.0;
    (a, b, c)
}

/// Both real roots of [`dr_quadratic`], larger first.
pub fn dr_quadratic_roots(alpha: Angle, p: f64) -> Result<[f64; 2]> {
    let (a, b, c) = dr_quadratic(alpha, p);
    let disc = b * b - 4.0 * a * c;
    if disc < -1e-12 * b * b {
        return Err(Error::Solver(format!("quadratic has no real roots (discriminant {disc})")));
    }
    let sq = disc.max(0.0).sqrt();
    // a·P² − b·P + c: the large root avoids cancellation, the small one uses Vieta.
    let big = (b + sq) / (2.0 * a);
    let small = c / (a * big);
    Ok([big, small])
}

/// `cos β` implied by `P̄_A = P`: `4P/(1−cos α) − [2(1+cos α)/(1−cos α) + 1]`.
pub fn reconstructed_cos_beta(p_c: f64, alpha: Angle) -> f64 {
    let omc = one_minus_cos(alpha.radians());
    4.0 * p_c / omc - (2.0 * (1.0 + alpha.radians().cos()) / omc + 1.0)
}

/// `sin β` implied by `P̄_C = P`: `(2P − 1 − p)/(1 − p)`.
pub fn sin_beta_from(p_c: f64, p: f64) -> f64 {
    (2.0 * p_c - 1.0 - p) / (1.0 - p)
}

/// Admissible `β` for a quadratic root, if any.
fn admissible_beta(p_c: f64, alpha: Angle, p: f64) -> Option<f64> {
    let s = sin_beta_from(p_c, p);
    let c = reconstructed_cos_beta(p_c, alpha);
    if !(-DR_TOL..=1.0 + DR_TOL).contains(&s) || c < -DR_TOL {
        return None;
    }
    let beta = s.clamp(0.0, 1.0).asin();
    ((beta.cos() - c).abs() <= DR_TOL).then_some(beta)
}

/// Fair `α`: the same equal-bias condition as for the two-party flip.
pub fn dr_alpha(p: f64) -> Result<Angle> {
    let p = check_sub_unit("p", p)?;
    Angle::protocol(fair_sin_alpha(p).clamp(0.0, 1.0).asin())
}

/// `β` solving `P̄_A(α, β, p) = P̄_C(β, p)` by bisection on `[0, π/2]`.
pub fn dr_bisect_beta(alpha: Angle, p: f64) -> Result<f64> {
    let a = alpha.check_protocol()?.radians();
    let p = check_sub_unit("p", p)?;
    let first = receiver_wins(a);
    bisect(
        |b| first + (1.0 - first) * receiver_wins(b) - sender_wins(b, p),
        0.0,
        FRAC_PI_2,
        1e-15,
    )
}

/// Solves the three-party fairness system for memory loss `p`.
pub fn dr_solve(p: f64) -> Result<DrSolution> {
    let p = check_sub_unit("p", p)?;
    let alpha = dr_alpha(p)?;
    let roots = dr_quadratic_roots(alpha, p)?;
    let (p_star, beta) = roots
        .iter()
        .find_map(|&root| admissible_beta(root, alpha, p).map(|beta| (root, beta)))
        .ok_or_else(|| Error::Solver(format!("no quadratic root {roots:?} yields β in [0, π/2] at p = {p}")))?;

    let beta_bisection = dr_bisect_beta(alpha, p)?;
    if (beta - beta_bisection).abs() > DR_TOL {
        return Err(Error::Solver(format!(
            "β from quadratic ({beta}) and bisection ({beta_bisection}) disagree at p = {p}"
        )));
    }
    let beta_star = Angle::protocol(beta)?;
    let residual = dr_losing_probs(alpha, beta_star, p)?.residual(p_star);
    if residual > DR_TOL {
        return Err(Error::Solver(format!("fairness residual {residual:e} at p = {p}")));
    }
    Ok(DrSolution {
        p,
        alpha_star: alpha,
        beta_star,
        p_star,
        epsilon: p_star - 2.0 / 3.0,
        beta_bisection,
    })
}

pub fn dr_curve(p_grid: &[f64]) -> Result<Vec<DrSolution>> {
    check_ascending_grid(p_grid)?;
    p_grid.iter().map(|&p| dr_solve(p)).collect()
}

/// CSV with header `p,alpha,beta,p_star,epsilon`, six significant digits.
pub fn write_dr_csv<W: Write>(rows: &[DrSolution], mut w: W) -> io::Result<()> {
    writeln!(w, "p,alpha,beta,p_star,epsilon")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_sig(row.p, 6),
            fmt_sig(row.alpha_star.radians(), 6),
            fmt_sig(row.beta_star.radians(), 6),
            fmt_sig(row.p_star, 6),
            fmt_sig(row.epsilon, 6)
        )?;
    }
    Ok(())
}

/// Chooses each party's strategy for one round.
pub trait Cast: Sync {
    fn sender(&self, party: Party, opponent: Party, alpha: Angle, rng: StreamRng) -> Box<dyn Sender>;
    fn receiver(&self, party: Party, opponent: Party, alpha: Angle, rng: StreamRng) -> Box<dyn Receiver>;
}

/// Who plays honestly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    AllHonest,
    /// The named party is honest and the other two collude against it: whoever
    /// faces the honest party plays the optimal attack to win that round, and
    /// colluders facing each other play honestly.
    Against(Party),
}

impl Scenario {
    fn cheats(&self, party: Party, opponent: Party) -> bool {
        match *self {
            Scenario::AllHonest => false,
            Scenario::Against(honest) => party != honest && opponent == honest,
        }
    }
}

impl Cast for Scenario {
    fn sender(&self, party: Party, opponent: Party, alpha: Angle, rng: StreamRng) -> Box<dyn Sender> {
        if self.cheats(party, opponent) {
            // Outcome 0 keeps the sender in the tournament.
            Box::new(CheatingSender::new(CheatTarget::new(Bit::ZERO), alpha).expect("alpha validated by DrConfig"))
        } else {
            Box::new(HonestSender::new(rng))
        }
    }

    fn receiver(&self, party: Party, opponent: Party, _alpha: Angle, rng: StreamRng) -> Box<dyn Receiver> {
        if self.cheats(party, opponent) {
            Box::new(CheatingReceiver::new(CheatTarget::new(Bit::ONE), rng))
        } else {
            Box::new(HonestReceiver::new(rng))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DrRun {
    /// `None` only if a round exhausted its restart budget.
    pub winner: Option<Party>,
    /// Parties caught cheating; each is disqualified from the round it lost.
    pub accused: Vec<Party>,
    pub transcripts: Vec<Transcript>,
}

/// Plays one coin flip; returns the round winner (`None` when restarts ran out).
#[allow(clippy::too_many_arguments)]
fn play_round(
    cast: &dyn Cast,
    sender: Party,
    receiver: Party,
    config: &QcfConfig,
    seed: u64,
    trial: u64,
    lane_base: u64,
    run: &mut DrRun,
) -> Option<Party> {
    let mut s = cast.sender(sender, receiver, config.alpha, stream_rng(seed, trial, lane_base + Lane::Sender as u64));
    let mut r = cast.receiver(receiver, sender, config.alpha, stream_rng(seed, trial, lane_base + Lane::Receiver as u64));
    let mut referee = stream_rng(seed, trial, lane_base + Lane::Referee as u64);
    let (outcome, transcript) = run_qcf(&mut s, &mut r, config, &mut referee);
    run.transcripts.push(transcript);
    match outcome {
        Outcome::Bit(b) if b == Bit::ZERO => Some(sender),
        Outcome::Bit(_) => Some(receiver),
        Outcome::Abort { .. } => {
            run.accused.push(sender);
            Some(receiver)
        }
        Outcome::RestartLimitExceeded => None,
    }
}

/// Runs the two-round tournament for trial `trial` of an experiment seeded with `seed`.
pub fn run_dr(cast: &dyn Cast, config: &DrConfig, seed: u64, trial: u64) -> DrRun {
    let mut run = DrRun {
        winner: None,
        accused: Vec::new(),
        transcripts: Vec::with_capacity(2),
    };
    let Some(finalist) = play_round(cast, Party::Alice, Party::Bob, &config.round(Round::First), seed, trial, 0, &mut run) else {
        return run;
    };
    run.winner = play_round(
        cast,
        finalist,
        Party::Charlie,
        &config.round(Round::Second),
        seed,
        trial,
        Lane::SecondRound as u64,
        &mut run,
    );
    run
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DrTally {
    pub trials: u64,
    pub wins: [u64; 3],
    pub no_winner: u64,
    pub accusations: [u64; 3],
}

impl Tally for DrTally {
    fn merge(self, o: Self) -> Self {
        let add3 = |x: [u64; 3], y: [u64; 3]| [x[0] + y[0], x[1] + y[1], x[2] + y[2]];
        DrTally {
            trials: self.trials + o.trials,
            wins: add3(self.wins, o.wins),
            no_winner: self.no_winner + o.no_winner,
            accusations: add3(self.accusations, o.accusations),
        }
    }
}

impl DrTally {
    pub fn win_frequency(&self, party: Party) -> f64 {
        self.wins[party.index()] as f64 / self.trials as f64
    }

    pub fn losing_frequency(&self, party: Party) -> f64 {
        1.0 - self.win_frequency(party)
    }
}

pub fn simulate_dr(cast: &dyn Cast, config: &DrConfig, trials: u64, seed: u64) -> DrTally {
    run_trials(trials, |t| {
        let run = run_dr(cast, config, seed, t);
        let mut tally = DrTally {
            trials: 1,
            ..DrTally::default()
        };
        match run.winner {
            Some(w) => tally.wins[w.index()] += 1,
            None => tally.no_winner += 1,
        }
        for a in run.accused {
            tally.accusations[a.index()] += 1;
        }
        tally
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WorstCaseEstimate {
    pub honest: Party,
    pub trials: u64,
    pub losing_frequency: f64,
    pub analytic: f64,
    pub z: f64,
}

pub const MIN_WORST_CASE_TRIALS: u64 = 10_000;

/// Monte Carlo estimate of the honest party's losing probability when the
/// other two collude, compared with the closed form.
pub fn estimate_worst_case(honest: Party, alpha: Angle, beta: Angle, p: f64, trials: u64, seed: u64) -> Result<WorstCaseEstimate> {
    if trials < MIN_WORST_CASE_TRIALS {
        return Err(Error::Domain {
            name: "trials",
            value: trials as f64,
            domain: "≥ 10000",
        });
    }
    let config = DrConfig::new(alpha, beta, LossModel::new(0.0, p)?)?;
    let tally = simulate_dr(&Scenario::Against(honest), &config, trials, seed);
    let losing_frequency = tally.losing_frequency(honest);
    let analytic = dr_losing_probs(alpha, beta, p)?.get(honest);
    Ok(WorstCaseEstimate {
        honest,
        trials,
        losing_frequency,
        analytic,
        z: z_score(losing_frequency, analytic, trials),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::uniform_grid;
    use std::f64::consts::FRAC_PI_4;

    fn pa(x: f64) -> Angle {
        Angle::protocol(x).unwrap()
    }

    #[test]
    fn losing_probs_endpoints() {
        let w = dr_losing_probs(pa(0.0), pa(0.0), 0.0).unwrap();
        assert_eq!(w.p_a_bar, 1.0);
        let w = dr_losing_probs(pa(FRAC_PI_2), pa(FRAC_PI_2), 0.0).unwrap();
        assert!((w.p_c_bar - 1.0).abs() < 1e-15);
        assert!(dr_losing_probs(pa(0.1), pa(0.1), 1.1).is_err());
    }

    #[test]
    fn solve_at_zero_loss() {
        let s = dr_solve(0.0).unwrap();
        assert!((s.alpha_star.radians() - FRAC_PI_4).abs() < 1e-12);
        assert!((s.epsilon - 0.2899).abs() < 5e-4);
        assert!((s.p_star - 0.9566).abs() < 5e-4);
        // Frozen from a 30-digit bisection of P̄_A = P̄_C at α = π/4, p = 0.
        assert!((s.beta_star.radians() - 1.151_128_071_824_335).abs() < 1e-9);
        let w = dr_losing_probs(s.alpha_star, s.beta_star, 0.0).unwrap();
        assert!(w.residual(s.p_star) < DR_TOL);
    }

    #[test]
    fn rejected_root_at_zero_loss() {
        let alpha = dr_alpha(0.0).unwrap();
        let [big, small] = dr_quadratic_roots(alpha, 0.0).unwrap();
        let s = dr_solve(0.0).unwrap();
        assert!((big - s.p_star).abs() < 1e-12);
        assert!((small - 0.88).abs() < 0.01, "small root {small}");
        assert!(reconstructed_cos_beta(small, alpha) < 0.0);
        assert!(admissible_beta(small, alpha, 0.0).is_none());
    }

    #[test]
    fn quadratic_agrees_with_bisection_on_grid() {
        for p in uniform_grid(0.0, 0.99, 64) {
            let s = dr_solve(p).unwrap();
            assert!((s.beta_star.radians() - s.beta_bisection).abs() < DR_TOL, "p={p}");
            let w = dr_losing_probs(s.alpha_star, s.beta_star, p).unwrap();
            assert!(w.residual(s.p_star) < DR_TOL, "p={p}");
        }
    }

    #[test]
    fn solve_rejects_degenerate_loss() {
        assert!(matches!(dr_solve(1.0), Err(Error::Domain { .. })));
        assert!(dr_solve(-0.5).is_err());
    }

    #[test]
    fn curve_increasing() {
        let rows = dr_curve(&uniform_grid(0.0, 0.95, 96)).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].epsilon > w[0].epsilon);
        }
        assert!(rows.iter().all(|r| r.epsilon < 1.0 / 3.0 + 1e-9));
    }

    #[test]
    fn csv_header_and_first_row() {
        let rows = dr_curve(&[0.0]).unwrap();
        let mut out = Vec::new();
        write_dr_csv(&rows, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("p,alpha,beta,p_star,epsilon"));
        assert_eq!(lines.next(), Some("0,0.785398,1.15113,0.956612,0.289945"));
    }

    #[test]
    fn honest_tournament_small_sample() {
        let config = DrConfig::new(pa(0.7), pa(0.9), LossModel::lossless()).unwrap();
        let tally = simulate_dr(&Scenario::AllHonest, &config, 40_000, 5);
        assert_eq!(tally.accusations, [0, 0, 0]);
        assert_eq!(tally.no_winner, 0);
        for (party, expected) in [(Party::Alice, 0.25), (Party::Bob, 0.25), (Party::Charlie, 0.5)] {
            let z = z_score(tally.win_frequency(party), expected, tally.trials);
            assert!(z.abs() < 4.0, "{party}: z={z}");
        }
    }

    #[test]
    fn colluders_only_cheat_against_the_honest_party() {
        let s = Scenario::Against(Party::Bob);
        assert!(s.cheats(Party::Alice, Party::Bob));
        assert!(s.cheats(Party::Charlie, Party::Bob));
        assert!(!s.cheats(Party::Alice, Party::Charlie));
        assert!(!s.cheats(Party::Bob, Party::Alice));
        assert!(!Scenario::AllHonest.cheats(Party::Alice, Party::Bob));
    }

    #[test]
    fn run_is_reproducible() {
        let config = DrConfig::new(pa(0.7), pa(0.9), LossModel::new(0.2, 0.3).unwrap()).unwrap();
        let cast = Scenario::Against(Party::Charlie);
        for t in 0..50 {
            assert_eq!(run_dr(&cast, &config, 99, t), run_dr(&cast, &config, 99, t));
        }
    }

    #[test]
    fn worst_case_needs_enough_trials() {
        assert!(estimate_worst_case(Party::Alice, pa(0.7), pa(0.9), 0.0, 100, 1).is_err());
    }

    #[test]
    fn party_parsing() {
        assert_eq!("Charlie".parse::<Party>().unwrap(), Party::Charlie);
        assert!("dave".parse::<Party>().is_err());
    }
}
