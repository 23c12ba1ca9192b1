//! The `qcf` command-line tool.
//!
//! Exit codes: 0 on success, 1 on argument or domain errors (and unwritable
//! output paths), 2 on solver failures or when restarts dominate a run.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis::{bias_report, fair_alpha, qcf_curve, uniform_grid, write_qcf_csv};
use crate::dice::{dr_curve, dr_losing_probs, dr_solve, run_dr, simulate_dr, write_dr_csv, DrConfig, Party, Scenario};
use crate::error::Error;
use crate::experiment::{qcf_trial, summarize, PartySpec};
use crate::format::fmt_sig;
use crate::protocol::{LossModel, QcfConfig, DEFAULT_RESTART_CAP};
use crate::qubit::Angle;
use crate::sim::z_score;

#[derive(Parser, Debug)]
#[command(name = "qcf", version, about = "Quantum coin-flipping and dice-rolling simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form sender and receiver biases.
    QcfBias {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        p: f64,
    },
    /// Monte Carlo coin flips, compared against the closed forms.
    QcfRun {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        eta: f64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        /// honest, cheat:0 or cheat:1
        #[arg(long, default_value = "honest")]
        alice: PartySpec,
        /// honest, cheat:0 or cheat:1
        #[arg(long, default_value = "honest")]
        bob: PartySpec,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RESTART_CAP)]
        restart_cap: u32,
        /// Write transcripts of the first runs as JSON lines.
        #[arg(long)]
        dump_transcripts: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        dump_limit: u64,
    },
    /// Equal-bias angle for the coin flip.
    QcfFair {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
    },
    /// Fair (α, β) for three-party dice rolling.
    DrSolve {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
    },
    /// Write the ε(p) table as CSV.
    Curve {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        p_min: f64,
        #[arg(long, default_value_t = 0.95, allow_negative_numbers = true)]
        p_max: f64,
        #[arg(long, default_value_t = 96)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo dice rolling in a worst-case or honest scenario.
    DrRun {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        eta: f64,
        #[arg(long, value_enum, default_value_t = ScenarioArg::Honest)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Round-1 angle; defaults to the fair value for --p.
        #[arg(long)]
        alpha: Option<f64>,
        /// Round-2 angle; defaults to the fair value for --p.
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        dump_transcripts: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        dump_limit: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    Qcf,
    Dr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScenarioArg {
    Honest,
    VsAlice,
    VsBob,
    VsCharlie,
}

impl ScenarioArg {
    fn scenario(self) -> Scenario {
        match self {
            ScenarioArg::Honest => Scenario::AllHonest,
            ScenarioArg::VsAlice => Scenario::Against(Party::Alice),
            ScenarioArg::VsBob => Scenario::Against(Party::Bob),
            ScenarioArg::VsCharlie => Scenario::Against(Party::Charlie),
        }
    }
}

/// A command failure and the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Solver(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 1,
        message: format!("cannot write {}: {e}", path.display()),
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::QcfBias { alpha, p } => cmd_qcf_bias(alpha, p, out),
        Command::QcfRun {
            alpha,
            p,
            eta,
            trials,
            alice,
            bob,
            seed,
            restart_cap,
            dump_transcripts,
            dump_limit,
        } => cmd_qcf_run(alpha, p, eta, trials, alice, bob, seed, restart_cap, dump_transcripts.as_deref(), dump_limit, out),
        Command::QcfFair { p } => cmd_qcf_fair(p, out),
        Command::DrSolve { p } => cmd_dr_solve(p, out),
        Command::Curve {
            which,
            p_min,
            p_max,
            steps,
            out: path,
        } => cmd_curve(which, p_min, p_max, steps, &path, out),
        Command::DrRun {
            p,
            eta,
            scenario,
            trials,
            seed,
            alpha,
            beta,
            dump_transcripts,
            dump_limit,
        } => cmd_dr_run(p, eta, scenario, trials, seed, alpha, beta, dump_transcripts.as_deref(), dump_limit, out),
    }
}

macro_rules! line {
    ($out:expr, $key:expr, $val:expr) => {
        writeln!($out, "{}: {}", $key, $val).map_err(|e| Failure {
            code: 1,
            message: e.to_string(),
        })?
    };
}

fn cmd_qcf_bias(alpha: f64, p: f64, out: &mut dyn Write) -> CmdResult {
    let r = bias_report(Angle::protocol(alpha)?, p)?;
    line!(out, "alpha", fmt_sig(r.alpha.radians(), 9));
    line!(out, "p", fmt_sig(r.p, 6));
    line!(out, "eps_sender", fmt_sig(r.eps_sender, 6));
    line!(out, "eps_receiver", fmt_sig(r.eps_receiver, 6));
    line!(out, "eps_sender_berlin", fmt_sig(r.eps_sender_berlin, 6));
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_qcf_run(
    alpha: f64,
    p: f64,
    eta: f64,
    trials: u64,
    alice: PartySpec,
    bob: PartySpec,
    seed: u64,
    restart_cap: u32,
    dump: Option<&Path>,
    dump_limit: u64,
    out: &mut dyn Write,
) -> CmdResult {
    let config = QcfConfig::new(Angle::protocol(alpha)?, LossModel::new(eta, p)?, restart_cap)?;
    let s = summarize(alice, bob, &config, trials, seed)?;
    let t = s.tally;
    line!(out, "alice", alice);
    line!(out, "bob", bob);
    line!(out, "alpha", fmt_sig(config.alpha.radians(), 9));
    line!(out, "p", fmt_sig(p, 6));
    line!(out, "eta", fmt_sig(eta, 6));
    line!(out, "seed", seed);
    line!(out, "trials", t.trials);
    line!(out, "outcome_0", t.zeros);
    line!(out, "outcome_1", t.ones);
    line!(out, "abort", t.aborts);
    line!(out, "restart_exceeded", t.restart_exceeded);
    line!(out, "empirical", fmt_sig(s.empirical, 6));
    line!(out, "analytic", fmt_sig(s.analytic, 6));
    line!(out, "z", fmt_sig(s.z, 4));

    if let Some(path) = dump {
        let file = File::create(path).map_err(|e| io_failure(path, e))?;
        let mut w = BufWriter::new(file);
        for trial in 0..trials.min(dump_limit) {
            let (_, transcript) = qcf_trial(alice, bob, &config, seed, trial);
            transcript.write_jsonl(Some(trial), None, &mut w).map_err(|e| io_failure(path, e))?;
        }
        w.flush().map_err(|e| io_failure(path, e))?;
    }

    if t.restart_exceeded * 100 > t.trials {
        return Err(Failure {
            code: 2,
            message: format!("{} of {} runs exceeded the restart cap", t.restart_exceeded, t.trials),
        });
    }
    Ok(0)
}

fn cmd_qcf_fair(p: f64, out: &mut dyn Write) -> CmdResult {
    let fp = fair_alpha(p)?;
    line!(out, "p", fmt_sig(fp.p, 9));
    line!(out, "alpha", fmt_sig(fp.alpha_star.radians(), 9));
    line!(out, "epsilon", fmt_sig(fp.epsilon, 9));
    Ok(0)
}

fn cmd_dr_solve(p: f64, out: &mut dyn Write) -> CmdResult {
    let s = dr_solve(p)?;
    line!(out, "p", fmt_sig(s.p, 9));
    line!(out, "alpha", fmt_sig(s.alpha_star.radians(), 9));
    line!(out, "beta", fmt_sig(s.beta_star.radians(), 9));
    line!(out, "beta_bisection", fmt_sig(s.beta_bisection, 9));
    line!(out, "p_star", fmt_sig(s.p_star, 9));
    line!(out, "epsilon", fmt_sig(s.epsilon, 9));
    Ok(0)
}

fn cmd_curve(which: Which, p_min: f64, p_max: f64, steps: usize, path: &Path, _out: &mut dyn Write) -> CmdResult {
    if !(0.0..1.0).contains(&p_min) || !(p_min < p_max && p_max < 1.0) {
        return Err(Failure {
            code: 1,
            message: format!("need 0 ≤ p-min < p-max < 1, got p-min = {p_min}, p-max = {p_max}"),
        });
    }
    if steps < 2 {
        return Err(Failure {
            code: 1,
            message: "--steps must be at least 2".into(),
        });
    }
    let grid = uniform_grid(p_min, p_max, steps);
    // Solve before touching the file so a solver failure leaves nothing behind.
    let mut buf = Vec::new();
    match which {
        Which::Qcf => write_qcf_csv(&qcf_curve(&grid)?, &mut buf),
        Which::Dr => write_dr_csv(&dr_curve(&grid)?, &mut buf),
    }
    .expect("writing to a Vec cannot fail");
    std::fs::write(path, buf).map_err(|e| io_failure(path, e))?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_dr_run(
    p: f64,
    eta: f64,
    scenario: ScenarioArg,
    trials: u64,
    seed: u64,
    alpha: Option<f64>,
    beta: Option<f64>,
    dump: Option<&Path>,
    dump_limit: u64,
    out: &mut dyn Write,
) -> CmdResult {
    let loss = LossModel::new(eta, p)?;
    let (alpha, beta) = match (alpha, beta) {
        (Some(a), Some(b)) => (Angle::protocol(a)?, Angle::protocol(b)?),
        (a, b) => {
            let s = dr_solve(p)?;
            (
                a.map(Angle::protocol).transpose()?.unwrap_or(s.alpha_star),
                b.map(Angle::protocol).transpose()?.unwrap_or(s.beta_star),
            )
        }
    };
    if trials == 0 {
        return Err(Error::Domain {
            name: "trials",
            value: 0.0,
            domain: "≥ 1",
        }
        .into());
    }
    let config = DrConfig::new(alpha, beta, loss)?;
    let cast = scenario.scenario();
    let tally = simulate_dr(&cast, &config, trials, seed);

    line!(out, "scenario", format!("{scenario:?}").to_lowercase().replace("vs", "vs-"));
    line!(out, "p", fmt_sig(p, 6));
    line!(out, "eta", fmt_sig(eta, 6));
    line!(out, "alpha", fmt_sig(alpha.radians(), 9));
    line!(out, "beta", fmt_sig(beta.radians(), 9));
    line!(out, "seed", seed);
    line!(out, "trials", trials);
    for party in Party::ALL {
        line!(out, format!("wins_{party}"), tally.wins[party.index()]);
    }
    line!(out, "no_winner", tally.no_winner);
    for party in Party::ALL {
        line!(out, format!("accused_{party}"), tally.accusations[party.index()]);
    }
    match cast {
        Scenario::AllHonest => {
            for (party, expected) in [(Party::Alice, 0.25), (Party::Bob, 0.25), (Party::Charlie, 0.5)] {
                let f = tally.win_frequency(party);
                line!(out, format!("win_freq_{party}"), fmt_sig(f, 6));
                line!(out, format!("z_{party}"), fmt_sig(z_score(f, expected, trials), 4));
            }
        }
        Scenario::Against(honest) => {
            let analytic = dr_losing_probs(alpha, beta, p)?.get(honest);
            let f = tally.losing_frequency(honest);
            line!(out, "honest", honest);
            line!(out, "empirical", fmt_sig(f, 6));
            line!(out, "analytic", fmt_sig(analytic, 6));
            line!(out, "z", fmt_sig(z_score(f, analytic, trials), 4));
        }
    }

    if let Some(path) = dump {
        let file = File::create(path).map_err(|e| io_failure(path, e))?;
        let mut w = BufWriter::new(file);
        for trial in 0..trials.min(dump_limit) {
            let run = run_dr(&cast, &config, seed, trial);
            for (round, t) in run.transcripts.iter().enumerate() {
                t.write_jsonl(Some(trial), Some(round as u8 + 1), &mut w).map_err(|e| io_failure(path, e))?;
            }
        }
        w.flush().map_err(|e| io_failure(path, e))?;
    }

    if tally.no_winner * 100 > trials {
        return Err(Failure {
            code: 2,
            message: format!("{} of {trials} runs exceeded the restart cap", tally.no_winner),
        });
    }
    Ok(0)
}
