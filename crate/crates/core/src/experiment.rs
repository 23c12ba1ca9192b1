//! Monte Carlo experiments over many coin flips.

use std::fmt;
use std::str::FromStr;

use crate::adversary::{CheatTarget, CheatingReceiver, CheatingSender};
use crate::error::{Error, Result};
use crate::protocol::{run_qcf, HonestReceiver, HonestSender, Message, Outcome, QcfConfig, Receiver, Sender, Transcript};
use crate::qubit::Bit;
use crate::sim::{run_trials, stream_rng, z_score, Lane, Tally};

/// How one side of a coin flip behaves: `honest` or `cheat:0` / `cheat:1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartySpec {
    Honest,
    Cheat(CheatTarget),
}

impl FromStr for PartySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "honest" => Ok(PartySpec::Honest),
            "cheat:0" => Ok(PartySpec::Cheat(CheatTarget::new(Bit::ZERO))),
            "cheat:1" => Ok(PartySpec::Cheat(CheatTarget::new(Bit::ONE))),
            _ => Err(Error::Invariant(format!(
                "party spec {s:?} is not one of honest, cheat:0, cheat:1"
            ))),
        }
    }
}

impl fmt::Display for PartySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartySpec::Honest => f.write_str("honest"),
            PartySpec::Cheat(t) => write!(f, "cheat:{}", t.desired_outcome),
        }
    }
}

/// Runs trial `trial` of a coin-flip experiment.
pub fn qcf_trial(sender: PartySpec, receiver: PartySpec, config: &QcfConfig, seed: u64, trial: u64) -> (Outcome, Transcript) {
    let mut s: Box<dyn Sender> = match sender {
        PartySpec::Honest => Box::new(HonestSender::new(stream_rng(seed, trial, Lane::Sender as u64))),
        PartySpec::Cheat(target) => Box::new(CheatingSender::new(target, config.alpha).expect("alpha validated by QcfConfig")),
    };
    let receiver_rng = stream_rng(seed, trial, Lane::Receiver as u64);
    let mut r: Box<dyn Receiver> = match receiver {
        PartySpec::Honest => Box::new(HonestReceiver::new(receiver_rng)),
        PartySpec::Cheat(target) => Box::new(CheatingReceiver::new(target, receiver_rng)),
    };
    run_qcf(&mut s, &mut r, config, &mut stream_rng(seed, trial, Lane::Referee as u64))
}

/// Outcome and loss-event counts over many runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QcfTally {
    pub trials: u64,
    pub zeros: u64,
    pub ones: u64,
    pub aborts: u64,
    pub restart_exceeded: u64,
    /// Photon transmissions, including restarted ones.
    pub attempts: u64,
    pub arrival_failures: u64,
    /// Attempts that reached verification.
    pub verdicts: u64,
    pub memory_losses: u64,
}

impl Tally for QcfTally {
    fn merge(self, o: Self) -> Self {
        QcfTally {
            trials: self.trials + o.trials,
            zeros: self.zeros + o.zeros,
            ones: self.ones + o.ones,
            aborts: self.aborts + o.aborts,
            restart_exceeded: self.restart_exceeded + o.restart_exceeded,
            attempts: self.attempts + o.attempts,
            arrival_failures: self.arrival_failures + o.arrival_failures,
            verdicts: self.verdicts + o.verdicts,
            memory_losses: self.memory_losses + o.memory_losses,
        }
    }
}

impl QcfTally {
    pub fn from_run(outcome: Outcome, transcript: &Transcript) -> Self {
        let mut t = QcfTally {
            trials: 1,
            attempts: u64::from(transcript.attempts()),
            ..QcfTally::default()
        };
        match outcome {
            Outcome::Bit(b) if b == Bit::ZERO => t.zeros = 1,
            Outcome::Bit(_) => t.ones = 1,
            Outcome::Abort { .. } => t.aborts = 1,
            Outcome::RestartLimitExceeded => t.restart_exceeded = 1,
        }
        for e in &transcript.entries {
            match e.message {
                Message::ArrivalFailed => t.arrival_failures += 1,
                Message::Verdict { memory_lost, .. } => {
                    t.verdicts += 1;
                    t.memory_losses += u64::from(memory_lost);
                }
                _ => {}
            }
        }
        t
    }

    pub fn count(&self, outcome: Bit) -> u64 {
        if outcome.is_one() {
            self.ones
        } else {
            self.zeros
        }
    }

    pub fn frequency(&self, n: u64) -> f64 {
        n as f64 / self.trials as f64
    }
}

pub fn simulate_qcf(sender: PartySpec, receiver: PartySpec, config: &QcfConfig, trials: u64, seed: u64) -> QcfTally {
    run_trials(trials, |t| {
        let (outcome, transcript) = qcf_trial(sender, receiver, config, seed, t);
        QcfTally::from_run(outcome, &transcript)
    })
}

/// Reference success probability of the designated cheater against an honest
/// counterpart: `(1−p)(1+sin α)/2 + p` for the sender, `(1+cos α)/2` for the receiver.
pub fn analytic_success(sender: PartySpec, receiver: PartySpec, config: &QcfConfig) -> Result<Option<f64>> {
    let alpha = config.alpha.radians();
    let p = config.loss.memory_loss();
    match (sender, receiver) {
        (PartySpec::Honest, PartySpec::Honest) => Ok(None),
        (PartySpec::Cheat(_), PartySpec::Honest) => Ok(Some((1.0 - p) * (1.0 + alpha.sin()) / 2.0 + p)),
        (PartySpec::Honest, PartySpec::Cheat(_)) => Ok(Some((1.0 + alpha.cos()) / 2.0)),
        (PartySpec::Cheat(_), PartySpec::Cheat(_)) => Err(Error::Invariant(
            "at most one party may cheat; biases are defined against an honest counterpart".into(),
        )),
    }
}

/// Monte Carlo summary against the analytic reference.
///
/// With a designated cheater, `empirical` is its success frequency; with two
/// honest parties it is the frequency of outcome 0, referenced to ½.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunSummary {
    pub tally: QcfTally,
    pub empirical: f64,
    pub analytic: f64,
    pub z: f64,
}

pub fn summarize(sender: PartySpec, receiver: PartySpec, config: &QcfConfig, trials: u64, seed: u64) -> Result<RunSummary> {
    let analytic = analytic_success(sender, receiver, config)?;
    if trials == 0 {
        return Err(Error::Domain {
            name: "trials",
            value: 0.0,
            domain: "≥ 1",
        });
    }
    let tally = simulate_qcf(sender, receiver, config, trials, seed);
    let (empirical, analytic) = match (sender, receiver, analytic) {
        (PartySpec::Cheat(t), _, Some(a)) | (_, PartySpec::Cheat(t), Some(a)) => {
            (tally.frequency(tally.count(t.desired_outcome)), a)
        }
        _ => (tally.frequency(tally.zeros), 0.5),
    };
    Ok(RunSummary {
        tally,
        empirical,
        analytic,
        z: z_score(empirical, analytic, trials),
    })
}
