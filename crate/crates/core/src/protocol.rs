//! The coin-flipping protocol as a referee-driven message exchange.
//!
//! One attempt runs: the sender prepares and transmits a qubit; the receiver
//! confirms arrival (QND detection) or the attempt restarts; the receiver sends
//! a challenge bit `b`; the sender reveals `(a, r)`; the receiver either lost the
//! stored qubit (and accepts) or measures it in basis `a` and aborts on `r ≠ r_B`.
//! The coin is `b ⊕ r`.
//!
//! The referee owns the loss events. Each party owns its own randomness.

use std::io::{self, BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_sub_unit, Error, Result};
use crate::qubit::{basis_for, measure, protocol_state, Angle, BasisBitPair, Bit, PureState};
use crate::sim::StreamRng;

pub const DEFAULT_RESTART_CAP: u32 = 1000;

/// Loss probabilities: `transmission_loss` (in flight, detected, restartable) and
/// `memory_loss` (`p`, the stored qubit vanishes before verification).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossModel {
    transmission_loss: f64,
    memory_loss: f64,
}

impl LossModel {
    pub fn new(transmission_loss: f64, memory_loss: f64) -> Result<Self> {
        Ok(LossModel {
            transmission_loss: check_sub_unit("transmission_loss", transmission_loss)?,
            memory_loss: check_sub_unit("memory_loss", memory_loss)?,
        })
    }

    /// Like [`LossModel::new`] but also admits certain loss (`1.0`) on either
    /// channel, for degenerate-limit experiments.
    pub fn with_limits(transmission_loss: f64, memory_loss: f64) -> Result<Self> {
        Ok(LossModel {
            transmission_loss: crate::error::check_probability("transmission_loss", transmission_loss)?,
            memory_loss: crate::error::check_probability("memory_loss", memory_loss)?,
        })
    }

    pub fn lossless() -> Self {
        LossModel {
            transmission_loss: 0.0,
            memory_loss: 0.0,
        }
    }

    pub fn transmission_loss(&self) -> f64 {
        self.transmission_loss
    }

    pub fn memory_loss(&self) -> f64 {
        self.memory_loss
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QcfConfig {
    pub alpha: Angle,
    pub loss: LossModel,
    pub restart_cap: u32,
}

impl QcfConfig {
    pub fn new(alpha: Angle, loss: LossModel, restart_cap: u32) -> Result<Self> {
        let alpha = alpha.check_protocol()?;
        if restart_cap == 0 {
            return Err(Error::Domain {
                name: "restart_cap",
                value: 0.0,
                domain: "≥ 1",
            });
        }
        Ok(QcfConfig {
            alpha,
            loss,
            restart_cap,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Sender,
    Receiver,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArrivalReport {
    Confirmed,
    Failed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Abort,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Bit(Bit),
    Abort { accused: Role },
    RestartLimitExceeded,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Message {
    QubitSent { state: PureState },
    ArrivalConfirmed,
    ArrivalFailed,
    ChallengeBit { b: Bit },
    Reveal { a: Bit, r: Bit },
    /// `memory_lost` marks acceptance without a measurement.
    Verdict { accepted: bool, memory_lost: bool },
}

impl Message {
    pub fn tag(&self) -> &'static str {
        match self {
            Message::QubitSent { .. } => "qubit_sent",
            Message::ArrivalConfirmed => "arrival_confirmed",
            Message::ArrivalFailed => "arrival_failed",
            Message::ChallengeBit { .. } => "challenge",
            Message::Reveal { .. } => "reveal",
            Message::Verdict { .. } => "verdict",
        }
    }

    pub fn direction(&self) -> &'static str {
        match self {
            Message::QubitSent { .. } | Message::Reveal { .. } => "sender->receiver",
            _ => "receiver->sender",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TranscriptEntry {
    pub attempt: u32,
    pub message: Message,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transcript {
    pub entries: Vec<TranscriptEntry>,
    pub restart_count: u32,
    pub final_outcome: Outcome,
}

/// The qubit sender's side of the protocol.
pub trait Sender {
    /// Picks (and commits to) the state for a fresh attempt.
    fn prepare(&mut self, alpha: Angle) -> PureState;
    fn reveal(&mut self, challenge: Bit) -> BasisBitPair;
}

/// The qubit receiver's side of the protocol.
pub trait Receiver {
    /// `delivered` is `None` when the photon was lost in flight.
    fn on_arrival(&mut self, delivered: Option<PureState>, alpha: Angle) -> ArrivalReport;
    fn challenge(&mut self) -> Bit;
    /// Called only when the stored qubit survived.
    fn verify(&mut self, reveal: BasisBitPair, alpha: Angle) -> Verdict;
}

impl<T: Sender + ?Sized> Sender for Box<T> {
    fn prepare(&mut self, alpha: Angle) -> PureState {
        (**self).prepare(alpha)
    }
    fn reveal(&mut self, challenge: Bit) -> BasisBitPair {
        (**self).reveal(challenge)
    }
}

impl<T: Receiver + ?Sized> Receiver for Box<T> {
    fn on_arrival(&mut self, delivered: Option<PureState>, alpha: Angle) -> ArrivalReport {
        (**self).on_arrival(delivered, alpha)
    }
    fn challenge(&mut self) -> Bit {
        (**self).challenge()
    }
    fn verify(&mut self, reveal: BasisBitPair, alpha: Angle) -> Verdict {
        (**self).verify(reveal, alpha)
    }
}

/// Picks `(a, r)` uniformly per attempt and reveals it unchanged.
pub struct HonestSender {
    rng: StreamRng,
    committed: Option<BasisBitPair>,
}

impl HonestSender {
    pub fn new(rng: StreamRng) -> Self {
        HonestSender { rng, committed: None }
    }

    pub fn committed(&self) -> Option<BasisBitPair> {
        self.committed
    }
}

impl Sender for HonestSender {
    fn prepare(&mut self, alpha: Angle) -> PureState {
        let pair = BasisBitPair::new(Bit::from(self.rng.random::<bool>()), Bit::from(self.rng.random::<bool>()));
        self.committed = Some(pair);
        protocol_state(pair.a, pair.r, alpha).expect("alpha validated by QcfConfig")
    }

    fn reveal(&mut self, _challenge: Bit) -> BasisBitPair {
        self.committed.expect("reveal before prepare")
    }
}

/// Stores the qubit, issues a uniform challenge and verifies the reveal.
pub struct HonestReceiver {
    rng: StreamRng,
    stored: Option<PureState>,
}

impl HonestReceiver {
    pub fn new(rng: StreamRng) -> Self {
        HonestReceiver { rng, stored: None }
    }
}

impl Receiver for HonestReceiver {
    fn on_arrival(&mut self, delivered: Option<PureState>, _alpha: Angle) -> ArrivalReport {
        self.stored = delivered;
        match delivered {
            Some(_) => ArrivalReport::Confirmed,
            None => ArrivalReport::Failed,
        }
    }

    fn challenge(&mut self) -> Bit {
        Bit::from(self.rng.random::<bool>())
    }

    fn verify(&mut self, reveal: BasisBitPair, alpha: Angle) -> Verdict {
        let Some(state) = self.stored else {
            return Verdict::Accept;
        };
        let basis = basis_for(reveal.a, alpha).expect("alpha validated by QcfConfig");
        let u: f64 = self.rng.random();
        match measure(&state, &basis, u) {
            Ok(r_b) if r_b == reveal.r => Verdict::Accept,
            // A sender can only hand over normalized amplitudes through `prepare`;
            // anything else is treated as a failed check.
            _ => Verdict::Abort,
        }
    }
}

/// Runs one coin flip to completion. All loss events are drawn from `referee`.
pub fn run_qcf<S, R>(sender: &mut S, receiver: &mut R, config: &QcfConfig, referee: &mut StreamRng) -> (Outcome, Transcript)
where
    S: Sender + ?Sized,
    R: Receiver + ?Sized,
{
    let alpha = config.alpha;
    let mut entries = Vec::with_capacity(5);
    let mut restarts = 0u32;
    let mut attempt = 0u32;
    let mut push = |attempt: u32, message: Message| entries.push(TranscriptEntry { attempt, message });

    let outcome = loop {
        let state = sender.prepare(alpha);
        push(attempt, Message::QubitSent { state });

        let lost_in_flight = referee.random::<f64>() < config.loss.transmission_loss;
        let delivered = (!lost_in_flight).then_some(state);
        match receiver.on_arrival(delivered, alpha) {
            ArrivalReport::Failed => {
                push(attempt, Message::ArrivalFailed);
                if restarts >= config.restart_cap {
                    break Outcome::RestartLimitExceeded;
                }
                restarts += 1;
                attempt += 1;
                continue;
            }
            ArrivalReport::Confirmed => push(attempt, Message::ArrivalConfirmed),
        }

        let b = receiver.challenge();
        push(attempt, Message::ChallengeBit { b });

        let reveal = sender.reveal(b);
        push(attempt, Message::Reveal { a: reveal.a, r: reveal.r });

        let memory_lost = referee.random::<f64>() < config.loss.memory_loss;
        let accepted = memory_lost || receiver.verify(reveal, alpha) == Verdict::Accept;
        push(attempt, Message::Verdict { accepted, memory_lost });

        break if accepted {
            Outcome::Bit(b ^ reveal.r)
        } else {
            Outcome::Abort { accused: Role::Sender }
        };
    };

    let transcript = Transcript {
        entries,
        restart_count: restarts,
        final_outcome: outcome,
    };
    (outcome, transcript)
}

impl Transcript {
    pub fn attempts(&self) -> u32 {
        self.entries.last().map_or(0, |e| e.attempt + 1)
    }

    /// The reveal of the final attempt, if it got that far.
    pub fn final_reveal(&self) -> Option<BasisBitPair> {
        let last = self.attempts().checked_sub(1)?;
        self.entries.iter().rev().take_while(|e| e.attempt == last).find_map(|e| match e.message {
            Message::Reveal { a, r } => Some(BasisBitPair::new(a, r)),
            _ => None,
        })
    }

    pub fn final_challenge(&self) -> Option<Bit> {
        let last = self.attempts().checked_sub(1)?;
        self.entries.iter().rev().take_while(|e| e.attempt == last).find_map(|e| match e.message {
            Message::ChallengeBit { b } => Some(b),
            _ => None,
        })
    }

    /// Whether the final attempt was accepted because the stored qubit was lost.
    pub fn accepted_on_memory_loss(&self) -> bool {
        matches!(
            self.entries.last().map(|e| e.message),
            Some(Message::Verdict { memory_lost: true, .. })
        )
    }

    /// Checks the message grammar and that the recorded outcome follows from it.
    ///
    /// Each attempt is `QubitSent ArrivalFailed` or
    /// `QubitSent ArrivalConfirmed ChallengeBit Reveal Verdict`; only the last
    /// attempt may end in a verdict.
    pub fn validate(&self, restart_cap: Option<u32>) -> Result<()> {
        let bad = |msg: String| Err(Error::Transcript(msg));
        if self.entries.is_empty() {
            return bad("empty transcript".into());
        }
        let attempts = self.attempts();
        let mut idx = 0usize;
        let mut last_verdict = None;
        for attempt in 0..attempts {
            let group: Vec<&TranscriptEntry> = self.entries[idx..].iter().take_while(|e| e.attempt == attempt).collect();
            idx += group.len();
            let tags: Vec<&Message> = group.iter().map(|e| &e.message).collect();
            let is_last = attempt + 1 == attempts;
            match tags.as_slice() {
                [Message::QubitSent { .. }, Message::ArrivalFailed] => {}
                [Message::QubitSent { .. }, Message::ArrivalConfirmed, Message::ChallengeBit { b }, Message::Reveal { r, .. }, Message::Verdict { accepted, memory_lost }]
                    if is_last =>
                {
                    if *memory_lost && !*accepted {
                        return bad(format!("attempt {attempt}: memory loss must be accepted"));
                    }
                    last_verdict = Some((*b, *r, *accepted));
                }
                other => {
                    let names: Vec<&str> = other.iter().map(|m| m.tag()).collect();
                    return bad(format!("attempt {attempt}: unexpected message sequence {names:?}"));
                }
            }
        }
        if idx != self.entries.len() {
            return bad("attempt indices are not consecutive".into());
        }
        // Every attempt but the last was restarted, including when the cap is hit.
        if self.restart_count + 1 != attempts {
            return bad(format!("restart_count {} inconsistent with {attempts} attempts", self.restart_count));
        }
        if let Some(cap) = restart_cap {
            if self.restart_count > cap {
                return bad(format!("restart_count {} exceeds cap {cap}", self.restart_count));
            }
        }
        let expected = match last_verdict {
            None => Outcome::RestartLimitExceeded,
            Some((b, r, true)) => Outcome::Bit(b ^ r),
            Some((_, _, false)) => Outcome::Abort { accused: Role::Sender },
        };
        if expected != self.final_outcome {
            return bad(format!("outcome {:?} does not follow from messages ({expected:?})", self.final_outcome));
        }
        Ok(())
    }
}

/// One line of the JSONL transcript export.
///
/// Field order is fixed: `run`, `round`, `attempt`, `dir`, `tag`, then the
/// payload fields of that tag. Absent fields are omitted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranscriptRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub round: Option<u8>,
    pub attempt: u32,
    pub dir: String,
    pub tag: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accepted: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub memory_lost: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accused: Option<Role>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<u32>,
}

impl TranscriptRecord {
    fn bare(run: Option<u64>, round: Option<u8>, attempt: u32, dir: &str, tag: &str) -> Self {
        TranscriptRecord {
            run,
            round,
            attempt,
            dir: dir.to_string(),
            tag: tag.to_string(),
            c0: None,
            c1: None,
            b: None,
            a: None,
            r: None,
            accepted: None,
            memory_lost: None,
            outcome: None,
            value: None,
            accused: None,
            restarts: None,
        }
    }
}

impl Transcript {
    /// Flattens the transcript into export records, closing with an `outcome` line.
    pub fn records(&self, run: Option<u64>, round: Option<u8>) -> Vec<TranscriptRecord> {
        let mut out: Vec<TranscriptRecord> = self
            .entries
            .iter()
            .map(|e| {
                let mut rec = TranscriptRecord::bare(run, round, e.attempt, e.message.direction(), e.message.tag());
                match e.message {
                    Message::QubitSent { state } => {
                        rec.c0 = Some(state.c0);
                        rec.c1 = Some(state.c1);
                    }
                    Message::ChallengeBit { b } => rec.b = Some(b.value()),
                    Message::Reveal { a, r } => {
                        rec.a = Some(a.value());
                        rec.r = Some(r.value());
                    }
                    Message::Verdict { accepted, memory_lost } => {
                        rec.accepted = Some(accepted);
                        rec.memory_lost = Some(memory_lost);
                    }
                    Message::ArrivalConfirmed | Message::ArrivalFailed => {}
                }
                rec
            })
            .collect();
        let mut fin = TranscriptRecord::bare(run, round, self.attempts().saturating_sub(1), "referee", "outcome");
        fin.restarts = Some(self.restart_count);
        match self.final_outcome {
            Outcome::Bit(v) => {
                fin.outcome = Some("bit".into());
                fin.value = Some(v.value());
            }
            Outcome::Abort { accused } => {
                fin.outcome = Some("abort".into());
                fin.accused = Some(accused);
            }
            Outcome::RestartLimitExceeded => fin.outcome = Some("restart_limit_exceeded".into()),
        }
        out.push(fin);
        out
    }

    pub fn write_jsonl<W: Write>(&self, run: Option<u64>, round: Option<u8>, mut w: W) -> io::Result<()> {
        for rec in self.records(run, round) {
            serde_json::to_writer(&mut w, &rec)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(None, None, &mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }

    /// Rebuilds one transcript from its export records (the inverse of [`Transcript::records`]).
    pub fn from_records(records: &[TranscriptRecord]) -> Result<Self> {
        let bad = |msg: String| Error::Transcript(msg);
        let (fin, body) = records.split_last().ok_or_else(|| bad("no records".into()))?;
        if fin.tag != "outcome" {
            return Err(bad(format!("last record has tag {:?}, expected \"outcome\"", fin.tag)));
        }
        let bit = |v: Option<u8>, field: &str| -> Result<Bit> {
            Bit::new(v.ok_or_else(|| bad(format!("missing field {field}")))?).map_err(|e| bad(e.to_string()))
        };
        let mut entries = Vec::with_capacity(body.len());
        for rec in body {
            let message = match rec.tag.as_str() {
                "qubit_sent" => Message::QubitSent {
                    state: PureState {
                        c0: rec.c0.ok_or_else(|| bad("missing c0".into()))?,
                        c1: rec.c1.ok_or_else(|| bad("missing c1".into()))?,
                    },
                },
                "arrival_confirmed" => Message::ArrivalConfirmed,
                "arrival_failed" => Message::ArrivalFailed,
                "challenge" => Message::ChallengeBit { b: bit(rec.b, "b")? },
                "reveal" => Message::Reveal {
                    a: bit(rec.a, "a")?,
                    r: bit(rec.r, "r")?,
                },
                "verdict" => Message::Verdict {
                    accepted: rec.accepted.ok_or_else(|| bad("missing accepted".into()))?,
                    memory_lost: rec.memory_lost.ok_or_else(|| bad("missing memory_lost".into()))?,
                },
                other => return Err(bad(format!("unknown tag {other:?}"))),
            };
            entries.push(TranscriptEntry {
                attempt: rec.attempt,
                message,
            });
        }
        let final_outcome = match fin.outcome.as_deref() {
            Some("bit") => Outcome::Bit(bit(fin.value, "value")?),
            Some("abort") => Outcome::Abort {
                accused: fin.accused.ok_or_else(|| bad("missing accused".into()))?,
            },
            Some("restart_limit_exceeded") => Outcome::RestartLimitExceeded,
            other => return Err(bad(format!("unknown outcome {other:?}"))),
        };
        Ok(Transcript {
            entries,
            restart_count: fin.restarts.ok_or_else(|| bad("missing restarts".into()))?,
            final_outcome,
        })
    }

    /// Parses a JSONL stream holding exactly one transcript.
    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Self> {
        let mut records = Vec::new();
        for line in r.lines() {
            let line = line.map_err(|e| Error::Transcript(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            records.push(serde_json::from_str(&line).map_err(|e| Error::Transcript(e.to_string()))?);
        }
        Transcript::from_records(&records)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{stream_rng, Lane};
    use std::f64::consts::FRAC_PI_4;

    fn honest_run(alpha: f64, loss: LossModel, seed: u64, cap: u32) -> (Outcome, Transcript) {
        let config = QcfConfig::new(Angle::protocol(alpha).unwrap(), loss, cap).unwrap();
        let mut s = HonestSender::new(stream_rng(seed, 0, Lane::Sender as u64));
        let mut r = HonestReceiver::new(stream_rng(seed, 0, Lane::Receiver as u64));
        run_qcf(&mut s, &mut r, &config, &mut stream_rng(seed, 0, Lane::Referee as u64))
    }

    #[test]
    fn lossless_honest_run_never_aborts() {
        for seed in 0..500 {
            let alpha = (seed % 7) as f64 * 0.2;
            let (outcome, t) = honest_run(alpha, LossModel::lossless(), seed, DEFAULT_RESTART_CAP);
            assert!(matches!(outcome, Outcome::Bit(_)), "seed {seed}: {outcome:?}");
            assert_eq!(t.restart_count, 0);
            assert_eq!(t.entries.len(), 5);
            t.validate(Some(DEFAULT_RESTART_CAP)).unwrap();
        }
    }

    #[test]
    fn total_transmission_loss_exhausts_restarts() {
        let loss = LossModel::with_limits(1.0, 0.0).unwrap();
        let (outcome, t) = honest_run(FRAC_PI_4, loss, 3, 5);
        assert_eq!(outcome, Outcome::RestartLimitExceeded);
        assert_eq!(t.restart_count, 5);
        assert_eq!(t.attempts(), 6);
        t.validate(Some(5)).unwrap();
    }

    #[test]
    fn config_rejects_zero_cap_and_bad_loss() {
        assert!(QcfConfig::new(Angle::new(0.1), LossModel::lossless(), 0).is_err());
        assert!(QcfConfig::new(Angle::new(2.0), LossModel::lossless(), 1).is_err());
        assert!(LossModel::new(1.0, 0.0).is_err());
        assert!(LossModel::new(0.0, -0.1).is_err());
    }

    #[test]
    fn honest_reveal_ignores_challenge() {
        let mut s = HonestSender::new(stream_rng(1, 0, 1));
        s.prepare(Angle::new(0.5));
        assert_eq!(s.reveal(Bit::ZERO), s.reveal(Bit::ONE));
        assert_eq!(s.committed(), Some(s.reveal(Bit::ZERO)));
    }

    #[test]
    fn certain_memory_loss_always_accepts() {
        let loss = LossModel::with_limits(0.0, 1.0).unwrap();
        let (outcome, t) = honest_run(0.9, loss, 11, 10);
        assert!(matches!(outcome, Outcome::Bit(_)));
        assert!(t.accepted_on_memory_loss());
    }

    #[test]
    fn outcome_is_challenge_xor_reveal() {
        for seed in 0..200 {
            let (outcome, t) = honest_run(0.6, LossModel::new(0.3, 0.2).unwrap(), seed, 1000);
            let b = t.final_challenge().unwrap();
            let rev = t.final_reveal().unwrap();
            assert_eq!(outcome, Outcome::Bit(b ^ rev.r));
        }
    }

    #[test]
    fn validate_rejects_tampering() {
        let (_, t) = honest_run(0.6, LossModel::lossless(), 5, 10);
        let mut swapped = t.clone();
        swapped.entries.swap(2, 3);
        assert!(swapped.validate(None).is_err());

        let mut wrong = t.clone();
        wrong.final_outcome = match t.final_outcome {
            Outcome::Bit(v) => Outcome::Bit(v ^ Bit::ONE),
            o => o,
        };
        assert!(wrong.validate(None).is_err());

        let mut truncated = t.clone();
        truncated.entries.pop();
        assert!(truncated.validate(None).is_err());

        let mut restarts = t;
        restarts.restart_count = 3;
        assert!(restarts.validate(None).is_err());
    }

    #[test]
    fn jsonl_round_trip() {
        let (_, t) = honest_run(0.6, LossModel::new(0.5, 0.5).unwrap(), 9, 100);
        let text = t.to_jsonl();
        let back = Transcript::read_jsonl(text.as_bytes()).unwrap();
        assert_eq!(back, t);
    }
}
