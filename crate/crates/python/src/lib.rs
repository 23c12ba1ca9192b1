//! Python bindings for the coin-flip and dice-rolling simulator.
//!
//! Angles are plain floats in radians and bits are ints 0/1. Domain errors
//! raise `ValueError`; solver failures raise `RuntimeError`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use qcf_core::adversary;
use qcf_core::analysis;
use qcf_core::dice::{self, Party};
use qcf_core::experiment::{self, qcf_trial, PartySpec};
use qcf_core::protocol::{LossModel, QcfConfig, DEFAULT_RESTART_CAP};
use qcf_core::qubit;
use qcf_core::{Angle, Bit, DensityOperator, Error};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Solver(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn angle(alpha: f64) -> PyResult<Angle> {
    Angle::protocol(alpha).map_err(py_err)
}

fn bit(v: u8) -> PyResult<Bit> {
    Bit::new(v).map_err(py_err)
}

fn spec(s: &str) -> PyResult<PartySpec> {
    s.parse().map_err(py_err)
}

fn density(m: [[f64; 2]; 2]) -> PyResult<DensityOperator> {
    if (m[0][1] - m[1][0]).abs() > 1e-12 {
        return Err(PyValueError::new_err("density matrix must be symmetric"));
    }
    DensityOperator::new(m[0][0], m[0][1], m[1][1]).map_err(py_err)
}

fn config(alpha: f64, p: f64, eta: f64, restart_cap: u32) -> PyResult<QcfConfig> {
    QcfConfig::new(angle(alpha)?, LossModel::new(eta, p).map_err(py_err)?, restart_cap).map_err(py_err)
}

#[pyclass(frozen, get_all, module = "qcfsim")]
struct FairPoint {
    p: f64,
    alpha: f64,
    epsilon: f64,
}

#[pymethods]
impl FairPoint {
    fn __repr__(&self) -> String {
        format!("FairPoint(p={}, alpha={}, epsilon={})", self.p, self.alpha, self.epsilon)
    }
}

impl From<analysis::FairPoint> for FairPoint {
    fn from(f: analysis::FairPoint) -> Self {
        FairPoint { p: f.p, alpha: f.alpha_star.radians(), epsilon: f.epsilon }
    }
}

#[pyclass(frozen, get_all, module = "qcfsim")]
struct DrSolution {
    p: f64,
    alpha: f64,
    beta: f64,
    beta_bisection: f64,
    p_star: f64,
    epsilon: f64,
}

#[pymethods]
impl DrSolution {
    fn __repr__(&self) -> String {
        format!(
            "DrSolution(p={}, alpha={}, beta={}, p_star={}, epsilon={})",
            self.p, self.alpha, self.beta, self.p_star, self.epsilon
        )
    }
}

impl From<dice::DrSolution> for DrSolution {
    fn from(s: dice::DrSolution) -> Self {
        DrSolution {
            p: s.p,
            alpha: s.alpha_star.radians(),
            beta: s.beta_star.radians(),
            beta_bisection: s.beta_bisection,
            p_star: s.p_star,
            epsilon: s.epsilon,
        }
    }
}

/// Monte Carlo coin flips against the closed form.
#[pyclass(frozen, get_all, module = "qcfsim")]
struct RunSummary {
    trials: u64,
    zeros: u64,
    ones: u64,
    aborts: u64,
    restart_exceeded: u64,
    empirical: f64,
    analytic: f64,
    z: f64,
}

#[pymethods]
impl RunSummary {
    fn __repr__(&self) -> String {
        format!(
            "RunSummary(trials={}, zeros={}, ones={}, aborts={}, empirical={}, analytic={}, z={})",
            self.trials, self.zeros, self.ones, self.aborts, self.empirical, self.analytic, self.z
        )
    }
}

#[pyclass(frozen, get_all, module = "qcfsim")]
struct WorstCaseEstimate {
    honest: String,
    trials: u64,
    losing_frequency: f64,
    analytic: f64,
    z: f64,
}

#[pymethods]
impl WorstCaseEstimate {
    fn __repr__(&self) -> String {
        format!(
            "WorstCaseEstimate(honest={:?}, losing_frequency={}, analytic={}, z={})",
            self.honest, self.losing_frequency, self.analytic, self.z
        )
    }
}

/// Amplitudes `(c0, c1)` of the protocol state for basis bit `a` and value bit `r`.
#[pyfunction]
fn protocol_state(a: u8, r: u8, alpha: f64) -> PyResult<(f64, f64)> {
    let s = qubit::protocol_state(bit(a)?, bit(r)?, angle(alpha)?).map_err(py_err)?;
    Ok((s.c0, s.c1))
}

/// Equal mixture over the two bases of the states carrying value `r`.
#[pyfunction]
fn mixture_of_r(r: u8, alpha: f64) -> PyResult<[[f64; 2]; 2]> {
    Ok(qubit::mixture_of_r(bit(r)?, angle(alpha)?).map_err(py_err)?.entries())
}

#[pyfunction]
fn trace_distance(rho0: [[f64; 2]; 2], rho1: [[f64; 2]; 2]) -> PyResult<f64> {
    Ok(qubit::trace_distance(&density(rho0)?, &density(rho1)?))
}

#[pyfunction]
#[pyo3(signature = (rho0, rho1, prior0 = 0.5))]
fn helstrom_success(rho0: [[f64; 2]; 2], rho1: [[f64; 2]; 2], prior0: f64) -> PyResult<f64> {
    qubit::helstrom_success(&density(rho0)?, &density(rho1)?, prior0).map_err(py_err)
}

#[pyfunction]
fn bias_sender(alpha: f64, p: f64) -> PyResult<f64> {
    analysis::bias_sender(angle(alpha)?, p).map_err(py_err)
}

#[pyfunction]
fn bias_receiver(alpha: f64) -> PyResult<f64> {
    analysis::bias_receiver(angle(alpha)?).map_err(py_err)
}

#[pyfunction]
fn bias_sender_berlin(alpha: f64) -> PyResult<f64> {
    analysis::bias_sender_berlin(angle(alpha)?).map_err(py_err)
}

#[pyfunction]
fn fair_alpha(p: f64) -> PyResult<FairPoint> {
    Ok(analysis::fair_alpha(p).map_err(py_err)?.into())
}

#[pyfunction]
fn qcf_curve(p_grid: Vec<f64>) -> PyResult<Vec<FairPoint>> {
    Ok(analysis::qcf_curve(&p_grid).map_err(py_err)?.into_iter().map(Into::into).collect())
}

/// The `p,alpha,epsilon` CSV table as a string.
#[pyfunction]
fn qcf_curve_csv(p_grid: Vec<f64>) -> PyResult<String> {
    let rows = analysis::qcf_curve(&p_grid).map_err(py_err)?;
    let mut out = Vec::new();
    analysis::write_qcf_csv(&rows, &mut out)?;
    Ok(String::from_utf8(out).expect("CSV is ASCII"))
}

/// Worst-case losing probabilities `(P̄_A, P̄_B, P̄_C)`.
#[pyfunction]
fn dr_losing_probs(alpha: f64, beta: f64, p: f64) -> PyResult<(f64, f64, f64)> {
    let w = dice::dr_losing_probs(angle(alpha)?, angle(beta)?, p).map_err(py_err)?;
    Ok((w.p_a_bar, w.p_b_bar, w.p_c_bar))
}

#[pyfunction]
fn dr_solve(p: f64) -> PyResult<DrSolution> {
    Ok(dice::dr_solve(p).map_err(py_err)?.into())
}

#[pyfunction]
fn dr_curve(p_grid: Vec<f64>) -> PyResult<Vec<DrSolution>> {
    Ok(dice::dr_curve(&p_grid).map_err(py_err)?.into_iter().map(Into::into).collect())
}

#[pyfunction]
fn dr_curve_csv(p_grid: Vec<f64>) -> PyResult<String> {
    let rows = dice::dr_curve(&p_grid).map_err(py_err)?;
    let mut out = Vec::new();
    dice::write_dr_csv(&rows, &mut out)?;
    Ok(String::from_utf8(out).expect("CSV is ASCII"))
}

/// Best cheating-sender pass probability over a grid of state angles: `(best, argmax)`.
#[pyfunction]
#[pyo3(signature = (alpha, grid_points = 10_000))]
fn oracle_sender_search(alpha: f64, grid_points: usize) -> PyResult<(f64, f64)> {
    let r = adversary::oracle_sender_search(angle(alpha)?, grid_points).map_err(py_err)?;
    Ok((r.best_success, r.argmax))
}

/// Best cheating-receiver guess probability over a grid of measurement angles: `(best, argmax)`.
#[pyfunction]
#[pyo3(signature = (alpha, grid_points = 10_000))]
fn oracle_receiver_search(alpha: f64, grid_points: usize) -> PyResult<(f64, f64)> {
    let r = adversary::oracle_receiver_search(angle(alpha)?, grid_points).map_err(py_err)?;
    Ok((r.best_success, r.argmax))
}

/// Runs `trials` coin flips. `alice` and `bob` are `"honest"`, `"cheat:0"` or `"cheat:1"`.
#[pyfunction]
#[pyo3(signature = (alpha, p = 0.0, eta = 0.0, alice = "honest", bob = "honest", trials = 100_000, seed = 1, restart_cap = DEFAULT_RESTART_CAP))]
#[allow(clippy::too_many_arguments)]
fn simulate_qcf(
    py: Python<'_>,
    alpha: f64,
    p: f64,
    eta: f64,
    alice: &str,
    bob: &str,
    trials: u64,
    seed: u64,
    restart_cap: u32,
) -> PyResult<RunSummary> {
    let c = config(alpha, p, eta, restart_cap)?;
    let (sender, receiver) = (spec(alice)?, spec(bob)?);
    let s = py.detach(|| experiment::summarize(sender, receiver, &c, trials, seed)).map_err(py_err)?;
    Ok(RunSummary {
        trials: s.tally.trials,
        zeros: s.tally.zeros,
        ones: s.tally.ones,
        aborts: s.tally.aborts,
        restart_exceeded: s.tally.restart_exceeded,
        empirical: s.empirical,
        analytic: s.analytic,
        z: s.z,
    })
}

/// Dice rolling with the other two parties colluding against `honest`.
#[pyfunction]
#[pyo3(signature = (honest, alpha, beta, p, trials = 100_000, seed = 1))]
fn estimate_worst_case(
    py: Python<'_>,
    honest: &str,
    alpha: f64,
    beta: f64,
    p: f64,
    trials: u64,
    seed: u64,
) -> PyResult<WorstCaseEstimate> {
    let party: Party = honest.parse().map_err(py_err)?;
    let (alpha, beta) = (angle(alpha)?, angle(beta)?);
    let e = py
        .detach(|| dice::estimate_worst_case(party, alpha, beta, p, trials, seed))
        .map_err(py_err)?;
    Ok(WorstCaseEstimate {
        honest: e.honest.to_string(),
        trials: e.trials,
        losing_frequency: e.losing_frequency,
        analytic: e.analytic,
        z: e.z,
    })
}

/// JSONL transcript of a single coin flip.
#[pyfunction]
#[pyo3(signature = (alpha, p = 0.0, eta = 0.0, alice = "honest", bob = "honest", seed = 1, trial = 0))]
fn qcf_transcript(alpha: f64, p: f64, eta: f64, alice: &str, bob: &str, seed: u64, trial: u64) -> PyResult<String> {
    let c = config(alpha, p, eta, DEFAULT_RESTART_CAP)?;
    let (sender, receiver) = (spec(alice)?, spec(bob)?);
    if sender != PartySpec::Honest && receiver != PartySpec::Honest {
        return Err(PyValueError::new_err("at most one party may cheat"));
    }
    Ok(qcf_trial(sender, receiver, &c, seed, trial).1.to_jsonl())
}

#[pymodule]
fn qcfsim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<FairPoint>()?;
    m.add_class::<DrSolution>()?;
    m.add_class::<RunSummary>()?;
    m.add_class::<WorstCaseEstimate>()?;
    m.add_function(wrap_pyfunction!(protocol_state, m)?)?;
    m.add_function(wrap_pyfunction!(mixture_of_r, m)?)?;
    m.add_function(wrap_pyfunction!(trace_distance, m)?)?;
    m.add_function(wrap_pyfunction!(helstrom_success, m)?)?;
    m.add_function(wrap_pyfunction!(bias_sender, m)?)?;
    m.add_function(wrap_pyfunction!(bias_receiver, m)?)?;
    m.add_function(wrap_pyfunction!(bias_sender_berlin, m)?)?;
    m.add_function(wrap_pyfunction!(fair_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(qcf_curve, m)?)?;
    m.add_function(wrap_pyfunction!(qcf_curve_csv, m)?)?;
    m.add_function(wrap_pyfunction!(dr_losing_probs, m)?)?;
    m.add_function(wrap_pyfunction!(dr_solve, m)?)?;
    m.add_function(wrap_pyfunction!(dr_curve, m)?)?;
    m.add_function(wrap_pyfunction!(dr_curve_csv, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_sender_search, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_receiver_search, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_qcf, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_worst_case, m)?)?;
    m.add_function(wrap_pyfunction!(qcf_transcript, m)?)?;
    Ok(())
}
