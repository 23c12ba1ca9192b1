//! Real-amplitude single-qubit algebra.
//!
//! Every state the protocol touches lies in the real span of `|0⟩` and `|1⟩`,
//! so a state is an amplitude pair and a density operator is a 2×2 real
//! symmetric matrix. Eigen-decompositions are done in closed form.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::ops::BitXor;

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};

/// Tolerance for algebraic identities (normalization, trace, orthogonality).
pub const ALGEBRA_TOL: f64 = 1e-12;

/// Slack accepted when validating protocol angles, so that decimal inputs such
/// as `1.5707963268` are treated as π/2.
const ANGLE_SLACK: f64 = 1e-9;

/// A classical bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub struct Bit(bool);

impl Bit {
    pub const ZERO: Bit = Bit(false);
    pub const ONE: Bit = Bit(true);

    pub fn new(value: u8) -> Result<Self> {
        match value {
            0 => Ok(Bit::ZERO),
            1 => Ok(Bit::ONE),
            v => Err(Error::Domain {
                name: "bit",
                value: f64::from(v),
                domain: "{0, 1}",
            }),
        }
    }

    pub fn value(self) -> u8 {
        u8::from(self.0)
    }

    pub fn is_one(self) -> bool {
        self.0
    }
}

impl From<bool> for Bit {
    fn from(b: bool) -> Self {
        Bit(b)
    }
}

impl From<Bit> for u8 {
    fn from(b: Bit) -> u8 {
        b.value()
    }
}

impl TryFrom<u8> for Bit {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        Bit::new(v)
    }
}

impl BitXor for Bit {
    type Output = Bit;

    fn bitxor(self, rhs: Bit) -> Bit {
        Bit(self.0 ^ rhs.0)
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// An angle in radians.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Angle(f64);

impl Angle {
    /// Any real angle, e.g. the direction of a cheating state.
    pub fn new(radians: f64) -> Self {
        Angle(radians)
    }

    /// A protocol angle, restricted to `[0, π/2]`.
    ///
    /// Values within `1e-9` of either endpoint are clamped onto it.
    pub fn protocol(radians: f64) -> Result<Self> {
        if radians.is_finite() && (-ANGLE_SLACK..=FRAC_PI_2 + ANGLE_SLACK).contains(&radians) {
            Ok(Angle(radians.clamp(0.0, FRAC_PI_2)))
        } else {
            Err(Error::Domain {
                name: "angle",
                value: radians,
                domain: "[0, π/2]",
            })
        }
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// Re-validates an angle that is used as a protocol parameter.
    pub fn check_protocol(self) -> Result<Self> {
        Angle::protocol(self.0)
    }
}

/// A basis choice `a` together with a bit `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisBitPair {
    pub a: Bit,
    pub r: Bit,
}

impl BasisBitPair {
    pub fn new(a: Bit, r: Bit) -> Self {
        BasisBitPair { a, r }
    }
}

/// A real-amplitude pure qubit state `c0|0⟩ + c1|1⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    pub c0: f64,
    pub c1: f64,
}

impl PureState {
    /// Builds a state, rejecting amplitude pairs that are not normalized.
    pub fn new(c0: f64, c1: f64) -> Result<Self> {
        let state = PureState { c0, c1 };
        state.check_normalized()?;
        Ok(state)
    }

    /// The state `cos θ |0⟩ + sin θ |1⟩`.
    pub fn from_angle(theta: Angle) -> Self {
        let (s, c) = theta.radians().sin_cos();
        PureState { c0: c, c1: s }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c0 * self.c0 + self.c1 * self.c1
    }

    pub fn check_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() <= ALGEBRA_TOL {
            Ok(())
        } else {
            Err(Error::Invariant(format!(
                "state ({}, {}) has squared norm {n}",
                self.c0, self.c1
            )))
        }
    }

    pub fn inner(&self, other: &PureState) -> f64 {
        self.c0 * other.c0 + self.c1 * other.c1
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &PureState) -> f64 {
        let i = self.inner(other);
        i * i
    }
}

/// An orthonormal measurement basis; outcome 0 corresponds to `first`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementBasis {
    first: PureState,
    second: PureState,
}

impl MeasurementBasis {
    pub fn new(first: PureState, second: PureState) -> Result<Self> {
        first.check_normalized()?;
        second.check_normalized()?;
        let ip = first.inner(&second);
        if ip.abs() > ALGEBRA_TOL {
            return Err(Error::Invariant(format!(
                "basis vectors are not orthogonal (inner product {ip})"
            )));
        }
        Ok(MeasurementBasis { first, second })
    }

    /// The basis `{(cos μ, sin μ), (−sin μ, cos μ)}`.
    pub fn rotated(mu: Angle) -> Self {
        let (s, c) = mu.radians().sin_cos();
        MeasurementBasis {
            first: PureState { c0: c, c1: s },
            second: PureState { c0: -s, c1: c },
        }
    }

    pub fn first(&self) -> PureState {
        self.first
    }

    pub fn second(&self) -> PureState {
        self.second
    }

    /// Born-rule probabilities `(P(0), P(1))` for measuring `state`.
    pub fn probabilities(&self, state: &PureState) -> (f64, f64) {
        let p0 = self.first.overlap(state);
        let p1 = self.second.overlap(state);
        // Renormalizing keeps eigenstate outcomes exactly certain.
        let total = p0 + p1;
        (p0 / total, p1 / total)
    }
}

/// The four conjugate-coding states `|φ(a, r)⟩`.
pub fn protocol_state(a: Bit, r: Bit, alpha: Angle) -> Result<PureState> {
    let alpha = alpha.check_protocol()?;
    let (s, c) = alpha.radians().sin_cos();
    Ok(match (a.is_one(), r.is_one()) {
        (false, false) => PureState { c0: 1.0, c1: 0.0 },
        (false, true) => PureState { c0: 0.0, c1: 1.0 },
        (true, false) => PureState { c0: c, c1: s },
        (true, true) => PureState { c0: s, c1: -c },
    })
}

/// The measurement basis `{|φ(a,0)⟩, |φ(a,1)⟩}` used to verify a reveal.
pub fn basis_for(a: Bit, alpha: Angle) -> Result<MeasurementBasis> {
    MeasurementBasis::new(
        protocol_state(a, Bit::ZERO, alpha)?,
        protocol_state(a, Bit::ONE, alpha)?,
    )
}

/// Measures `state` in `basis` given a uniform draw `u ∈ [0, 1)`.
///
/// Returns 0 iff `u < P(0)`, so the result is a deterministic function of the draw.
pub fn measure(state: &PureState, basis: &MeasurementBasis, u: f64) -> Result<Bit> {
    state.check_normalized()?;
    basis.first.check_normalized()?;
    basis.second.check_normalized()?;
    if !(0.0..1.0).contains(&u) {
        return Err(Error::Domain {
            name: "uniform draw",
            value: u,
            domain: "[0, 1)",
        });
    }
    let (p0, _) = basis.probabilities(state);
    Ok(Bit::from(u >= p0))
}

/// A 2×2 real symmetric density operator `[[a, b], [b, d]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityOperator {
    a: f64,
    b: f64,
    d: f64,
}

impl DensityOperator {
    /// Validates trace one and positive semidefiniteness.
    pub fn new(a: f64, b: f64, d: f64) -> Result<Self> {
        let rho = DensityOperator { a, b, d };
        let trace = a + d;
        if (trace - 1.0).abs() > ALGEBRA_TOL {
            return Err(Error::Invariant(format!("density operator has trace {trace}")));
        }
        let (lo, _) = symmetric_eigenvalues(a, b, d);
        if lo < -ALGEBRA_TOL {
            return Err(Error::Invariant(format!(
                "density operator has negative eigenvalue {lo}"
            )));
        }
        Ok(rho)
    }

    pub fn from_pure(state: &PureState) -> Self {
        DensityOperator {
            a: state.c0 * state.c0,
            b: state.c0 * state.c1,
            d: state.c1 * state.c1,
        }
    }

    /// `weight·self + (1 − weight)·other`.
    pub fn mix(&self, other: &DensityOperator, weight: f64) -> Self {
        let w = 1.0 - weight;
        DensityOperator {
            a: weight * self.a + w * other.a,
            b: weight * self.b + w * other.b,
            d: weight * self.d + w * other.d,
        }
    }

    /// Matrix entries `[[a, b], [b, d]]`.
    pub fn entries(&self) -> [[f64; 2]; 2] {
        [[self.a, self.b], [self.b, self.d]]
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        symmetric_eigenvalues(self.a, self.b, self.d)
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, state: &PureState) -> f64 {
        let (x, y) = (state.c0, state.c1);
        self.a * x * x + 2.0 * self.b * x * y + self.d * y * y
    }
}

fn symmetric_eigenvalues(a: f64, b: f64, d: f64) -> (f64, f64) {
    let mean = 0.5 * (a + d);
    let radius = (0.5 * (a - d)).hypot(b);
    (mean - radius, mean + radius)
}

/// Direction of the top eigenvector of `[[a, b], [b, d]]`.
fn top_eigenvector_angle(a: f64, b: f64, d: f64) -> f64 {
    0.5 * (2.0 * b).atan2(a - d)
}

/// Equal mixture of `|φ(0, r)⟩` and `|φ(1, r)⟩`: what a receiver holds about `r`
/// before the basis is revealed.
pub fn mixture_of_r(r: Bit, alpha: Angle) -> Result<DensityOperator> {
    let s0 = DensityOperator::from_pure(&protocol_state(Bit::ZERO, r, alpha)?);
    let s1 = DensityOperator::from_pure(&protocol_state(Bit::ONE, r, alpha)?);
    Ok(s0.mix(&s1, 0.5))
}

/// `½‖ρ0 − ρ1‖₁`.
pub fn trace_distance(rho0: &DensityOperator, rho1: &DensityOperator) -> f64 {
    let (lo, hi) = symmetric_eigenvalues(rho0.a - rho1.a, rho0.b - rho1.b, rho0.d - rho1.d);
    (0.5 * (lo.abs() + hi.abs())).clamp(0.0, 1.0)
}

/// Optimal probability of guessing which of `rho0` / `rho1` was prepared,
/// `½(1 + ‖p0·ρ0 − p1·ρ1‖₁)`.
pub fn helstrom_success(rho0: &DensityOperator, rho1: &DensityOperator, prior0: f64) -> Result<f64> {
    check_probability("prior0", prior0)?;
    let p1 = 1.0 - prior0;
    let (lo, hi) = symmetric_eigenvalues(
        prior0 * rho0.a - p1 * rho1.a,
        prior0 * rho0.b - p1 * rho1.b,
        prior0 * rho0.d - p1 * rho1.d,
    );
    Ok((0.5 * (1.0 + lo.abs() + hi.abs())).clamp(0.0, 1.0))
}

/// The measurement achieving [`helstrom_success`]; outcome 0 means "guess ρ0".
pub fn helstrom_basis(rho0: &DensityOperator, rho1: &DensityOperator, prior0: f64) -> Result<MeasurementBasis> {
    check_probability("prior0", prior0)?;
    let p1 = 1.0 - prior0;
    let theta = top_eigenvector_angle(
        prior0 * rho0.a - p1 * rho1.a,
        prior0 * rho0.b - p1 * rho1.b,
        prior0 * rho0.d - p1 * rho1.d,
    );
    Ok(MeasurementBasis::rotated(Angle::new(theta)))
}
