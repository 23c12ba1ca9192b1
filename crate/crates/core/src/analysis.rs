//! Closed-form biases of the coin flip and its equal-bias operating point.
//!
//! A bias is the cheater's best forcing probability minus ½. With memory-loss
//! probability `p` the sender's bias is `(1−p)·sin α/2 + p/2` and the receiver's
//! is `cos α/2`; the protocol is tuned by picking the `α` where they meet.

use std::f64::consts::FRAC_PI_2;
use std::io::{self, Write};

use crate::error::{check_probability, check_sub_unit, Error, Result};
use crate::format::fmt_sig;
use crate::qubit::Angle;

/// Agreement required between the closed-form and bisection fair points.
pub const FAIR_POINT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BiasReport {
    pub alpha: Angle,
    pub p: f64,
    pub eps_sender: f64,
    pub eps_receiver: f64,
    /// Sender bias of the measure-first variant, where the bases agree only half the time.
    pub eps_sender_berlin: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FairPoint {
    pub alpha_star: Angle,
    pub epsilon: f64,
    pub p: f64,
}

pub fn bias_sender(alpha: Angle, p: f64) -> Result<f64> {
    let alpha = alpha.check_protocol()?;
    let p = check_probability("p", p)?;
    Ok((1.0 - p) * alpha.radians().sin() / 2.0 + p / 2.0)
}

pub fn bias_receiver(alpha: Angle) -> Result<f64> {
    Ok(alpha.check_protocol()?.radians().cos() / 2.0)
}

/// `½·sin α/2 + ½·½ − ½ = sin α / 4`.
pub fn bias_sender_berlin(alpha: Angle) -> Result<f64> {
    Ok(alpha.check_protocol()?.radians().sin() / 4.0)
}

pub fn bias_report(alpha: Angle, p: f64) -> Result<BiasReport> {
    Ok(BiasReport {
        alpha: alpha.check_protocol()?,
        p,
        eps_sender: bias_sender(alpha, p)?,
        eps_receiver: bias_receiver(alpha)?,
        eps_sender_berlin: bias_sender_berlin(alpha)?,
    })
}

/// Positive root in `sin α` of `cos α = p + (1−p)·sin α`:
/// `(−p(1−p) + √(2−2p)) / (2 − 2p + p²)`.
pub fn fair_sin_alpha(p: f64) -> f64 {
    (-p * (1.0 - p) + (2.0 - 2.0 * p).sqrt()) / (2.0 - 2.0 * p + p * p)
}

/// Bisection on `[lo, hi]` for a continuous `f` with a sign change, to width `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Solver(format!(
            "no sign change on [{lo}, {hi}] (f = {flo}, {fhi})"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Equal-bias angle by bisection on `cos α − p − (1−p)·sin α`, which is
/// strictly decreasing on `[0, π/2]`.
pub fn fair_alpha_bisection(p: f64) -> Result<f64> {
    let p = check_sub_unit("p", p)?;
    bisect(|a| a.cos() - p - (1.0 - p) * a.sin(), 0.0, FRAC_PI_2, 1e-15)
}

/// The `α` equalizing sender and receiver bias, in closed form and
/// cross-checked by bisection.
pub fn fair_alpha(p: f64) -> Result<FairPoint> {
    let p = check_sub_unit("p", p)?;
    let alpha = fair_sin_alpha(p).clamp(0.0, 1.0).asin();
    let oracle = fair_alpha_bisection(p)?;
    if (alpha - oracle).abs() > FAIR_POINT_TOL {
        return Err(Error::Solver(format!(
            "fair α closed form {alpha} disagrees with bisection {oracle}"
        )));
    }
    let alpha_star = Angle::protocol(alpha)?;
    Ok(FairPoint {
        alpha_star,
        epsilon: bias_receiver(alpha_star)?,
        p,
    })
}

/// `steps` evenly spaced points from `min` to `max` inclusive.
pub fn uniform_grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => vec![],
        1 => vec![min],
        n => (0..n).map(|i| min + (max - min) * i as f64 / (n - 1) as f64).collect(),
    }
}

pub(crate) fn check_ascending_grid(grid: &[f64]) -> Result<()> {
    for &p in grid {
        check_sub_unit("p", p)?;
    }
    if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::Domain {
            name: "p grid",
            value: w[1],
            domain: "strictly ascending",
        });
    }
    Ok(())
}

pub fn qcf_curve(p_grid: &[f64]) -> Result<Vec<FairPoint>> {
    check_ascending_grid(p_grid)?;
    p_grid.iter().map(|&p| fair_alpha(p)).collect()
}

/// CSV with header `p,alpha,epsilon`, six significant digits.
pub fn write_qcf_csv<W: Write>(rows: &[FairPoint], mut w: W) -> io::Result<()> {
    writeln!(w, "p,alpha,epsilon")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{}",
            fmt_sig(row.p, 6),
            fmt_sig(row.alpha_star.radians(), 6),
            fmt_sig(row.epsilon, 6)
        )?;
    }
    Ok(())
}
