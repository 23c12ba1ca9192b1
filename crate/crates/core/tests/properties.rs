use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use qcf_core::adversary::{CheatTarget, CheatingSender};
use qcf_core::experiment::{qcf_trial, PartySpec};
use qcf_core::protocol::{Message, Outcome, QcfConfig, Sender, Transcript, LossModel};
use qcf_core::qubit::{basis_for, helstrom_success, measure, mixture_of_r, protocol_state, trace_distance};
use qcf_core::{Angle, Bit, MeasurementBasis, PureState};

fn bit() -> impl Strategy<Value = Bit> {
    any::<bool>().prop_map(Bit::from)
}

fn party() -> impl Strategy<Value = PartySpec> {
    prop_oneof![
        Just(PartySpec::Honest),
        bit().prop_map(|b| PartySpec::Cheat(CheatTarget::new(b))),
    ]
}

fn protocol_angle() -> impl Strategy<Value = Angle> {
    (0.0..=FRAC_PI_2).prop_map(|a| Angle::protocol(a).unwrap())
}

proptest! {
    #[test]
    fn protocol_states_are_normalized(a in bit(), r in bit(), alpha in protocol_angle()) {
        let s = protocol_state(a, r, alpha).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenstate_measurement_is_certain(a in bit(), r in bit(), alpha in protocol_angle(), u in 0.0..1.0f64) {
        let s = protocol_state(a, r, alpha).unwrap();
        prop_assert_eq!(measure(&s, &basis_for(a, alpha).unwrap(), u).unwrap(), r);
    }

    #[test]
    fn born_probabilities_sum_to_one(theta in -PI..PI, mu in -PI..PI) {
        let s = PureState::from_angle(Angle::new(theta));
        let (p0, p1) = MeasurementBasis::rotated(Angle::new(mu)).probabilities(&s);
        prop_assert!((p0 + p1 - 1.0).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&p0));
    }

    #[test]
    fn cheating_states_are_normalized(target in bit(), alpha in protocol_angle()) {
        let mut s = CheatingSender::new(CheatTarget::new(target), alpha).unwrap();
        let state = s.prepare(alpha);
        prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn runs_are_well_formed_and_reproducible(
        alice in party(),
        bob in party(),
        alpha in protocol_angle(),
        eta in 0.0..0.9f64,
        p in 0.0..0.99f64,
        cap in 1u32..20,
        seed in any::<u64>(),
        trial in 0u64..1_000_000,
    ) {
        prop_assume!(alice == PartySpec::Honest || bob == PartySpec::Honest);
        let config = QcfConfig::new(alpha, LossModel::new(eta, p).unwrap(), cap).unwrap();
        let (outcome, t) = qcf_trial(alice, bob, &config, seed, trial);
        t.validate(Some(cap)).unwrap();
        prop_assert_eq!(outcome, t.final_outcome);
        prop_assert!(t.restart_count <= cap);
        if let Outcome::Bit(x) = outcome {
            prop_assert_eq!(x, t.final_challenge().unwrap() ^ t.final_reveal().unwrap().r);
        }
        for e in &t.entries {
            if let Message::QubitSent { state } = e.message {
                prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
        let (_, again) = qcf_trial(alice, bob, &config, seed, trial);
        prop_assert_eq!(t.to_jsonl(), again.to_jsonl());
        prop_assert_eq!(Transcript::read_jsonl(t.to_jsonl().as_bytes()).unwrap(), t);
    }
}

#[test]
fn discrimination_identity_on_dense_grid() {
    for k in 0..256 {
        let alpha = Angle::protocol(k as f64 * FRAC_PI_2 / 255.0).unwrap();
        let d = trace_distance(&mixture_of_r(Bit::ZERO, alpha).unwrap(), &mixture_of_r(Bit::ONE, alpha).unwrap());
        assert!((d - alpha.radians().cos()).abs() < 1e-10, "alpha={}", alpha.radians());
    }
}

/// Exhaustive search over projective measurements, independent of the
/// eigenvalue formula behind `helstrom_success`.
#[test]
fn helstrom_matches_exhaustive_measurement_search() {
    for k in 0..=12 {
        let alpha = Angle::protocol(k as f64 * FRAC_PI_2 / 12.0).unwrap();
        let rho0 = mixture_of_r(Bit::ZERO, alpha).unwrap();
        let rho1 = mixture_of_r(Bit::ONE, alpha).unwrap();
        let best = (0..10_000)
            .map(|j| {
                let basis = MeasurementBasis::rotated(Angle::new(j as f64 * PI / 10_000.0));
                0.5 * rho0.expectation(&basis.first()) + 0.5 * rho1.expectation(&basis.second())
            })
            .fold(f64::NEG_INFINITY, f64::max);
        let bound = helstrom_success(&rho0, &rho1, 0.5).unwrap();
        assert!((best - bound).abs() < 1e-6, "alpha={}: {best} vs {bound}", alpha.radians());
        assert!((bound - (0.5 + 0.5 * trace_distance(&rho0, &rho1))).abs() < 1e-12);
    }
}
