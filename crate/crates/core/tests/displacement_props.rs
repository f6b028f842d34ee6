mod common;

use chordbar::barcode::{Bar, Barcode};
use chordbar::coefficients::{int, Rational};
use chordbar::complex::ActionValue;
use chordbar::displacement::{
    chord_drift, long_bar_witness, oscillation, theorem_bound, BettiProfile, Binding, DisplacementError,
    FloatProfile, OscillationProfile, SharpnessSchedule, SigmaProfile,
};
use chordbar::fixtures;
use common::{q, rng};
use rand::Rng;

fn fin(r: Rational) -> ActionValue {
    ActionValue::Finite(r)
}

fn count(sigma: &SigmaProfile, betti: &BettiProfile, l: &ActionValue, osc: &Rational) -> u64 {
    theorem_bound(sigma, betti, l, osc).unwrap().count
}

#[test]
fn sphere_counts_by_oscillation() {
    let (sigma, betti) = fixtures::standard_sphere_profiles(2, &int(2));
    let inf = ActionValue::PosInf;
    assert_eq!(count(&sigma, &betti, &inf, &int(1)), 2);
    // Only the middle (infinite) entry survives once osc reaches σ_0 = σ_2.
    let r = theorem_bound(&sigma, &betti, &inf, &int(2)).unwrap();
    assert_eq!(r.count, betti.values()[1]);
    assert!(r.at_threshold);
    assert!(!theorem_bound(&sigma, &betti, &inf, &int(3)).unwrap().at_threshold);
    let r = theorem_bound(&sigma, &betti, &int(1).into(), &int(1)).unwrap();
    assert_eq!(r.count, 0);
    assert_eq!(r.i_star, None);
    assert_eq!(r.binding, Some(Binding::L));
}

#[test]
fn stabilized_unknot_needs_small_oscillation_only_through_l() {
    let (sigma, betti) = fixtures::stabilized_unknot_profiles();
    for osc in [q(1, 2), int(3), int(100)] {
        assert_eq!(count(&sigma, &betti, &ActionValue::PosInf, &osc), betti.values().iter().sum::<u64>());
        assert_eq!(count(&sigma, &betti, &fin(osc.clone()), &osc), 0);
    }
}

#[test]
fn count_is_monotone() {
    let mut r = rng(41);
    for _ in 0..200 {
        let n = r.gen_range(1..=4usize);
        let mut vals: Vec<ActionValue> = vec![ActionValue::PosInf; n + 1];
        for k in 0..=n / 2 {
            let v = if r.gen_bool(0.2) {
                ActionValue::PosInf
            } else {
                fin(q(r.gen_range(1..=12), 2))
            };
            vals[k] = v.clone();
            vals[n - k] = v;
        }
        let sigma = SigmaProfile::new(vals).unwrap();
        let betti = BettiProfile::new((0..=n).map(|_| r.gen_range(0..=3)).collect());
        let l = if r.gen_bool(0.5) {
            ActionValue::PosInf
        } else {
            fin(int(r.gen_range(1..=7)))
        };
        let (a, b) = (q(r.gen_range(0..=14), 2), q(r.gen_range(0..=14), 2));
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        assert!(count(&sigma, &betti, &l, &lo) >= count(&sigma, &betti, &l, &hi));
        let l2 = match &l {
            ActionValue::Finite(x) => fin(x + int(1)),
            other => other.clone(),
        };
        assert!(count(&sigma, &betti, &l2, &lo) >= count(&sigma, &betti, &l, &lo));
    }
}

#[test]
fn ties_in_sigma_do_not_change_the_count() {
    // σ_0 = σ_1 = σ_2: the tie order must not matter.
    let sigma = SigmaProfile::new(vec![fin(int(2)); 3]).unwrap();
    let betti = BettiProfile::new(vec![1, 2, 1]);
    let r = theorem_bound(&sigma, &betti, &ActionValue::PosInf, &int(1)).unwrap();
    assert_eq!(r.ordering, vec![0, 1, 2]);
    assert_eq!(r.count, 4);
    assert_eq!(count(&sigma, &betti, &ActionValue::PosInf, &int(2)), 0);
}

#[test]
fn sigma_must_be_symmetric_and_positive() {
    assert!(SigmaProfile::new(vec![fin(int(1)), fin(int(2))]).is_err());
    assert!(SigmaProfile::new(vec![fin(int(0)), fin(int(0))]).is_err());
    assert!(SigmaProfile::new(vec![fin(int(1)), ActionValue::PosInf, fin(int(1))]).is_ok());
    let sigma = SigmaProfile::new(vec![fin(int(1)), fin(int(1))]).unwrap();
    assert!(matches!(
        theorem_bound(&sigma, &BettiProfile::new(vec![1]), &ActionValue::PosInf, &int(0)),
        Err(DisplacementError::LengthMismatch { .. })
    ));
}

#[test]
fn drift_never_exceeds_oscillation() {
    let mut r = rng(42);
    for _ in 0..300 {
        let (profile, end, start) = fixtures::random_rate_profile(&mut r);
        let out = chord_drift(&profile, &end, &start, &int(5)).unwrap();
        assert!(out.bound_holds, "|{}| > {}", out.delta, out.oscillation);
        assert_eq!(out.trajectory.first().unwrap().1, int(5));
        assert_eq!(out.oscillation, oscillation(&profile, profile.end()).unwrap());
    }
}

#[test]
fn extreme_rates_attain_the_bound() {
    let p = OscillationProfile::new(vec![(int(0), int(2), int(-1)), (int(2), int(1), int(-1))]).unwrap();
    let osc = oscillation(&p, &int(2)).unwrap();
    assert_eq!(osc, int(5));
    let hi = chordbar::displacement::PiecewiseLinear::new(vec![(int(0), int(2)), (int(2), int(1))]).unwrap();
    let lo = chordbar::displacement::PiecewiseLinear::constant(int(-1));
    let out = chord_drift(&p, &hi, &lo, &int(0)).unwrap();
    assert_eq!(out.delta, osc);
    let out = chord_drift(&p, &lo, &hi, &int(0)).unwrap();
    assert_eq!(out.delta, -osc);
    assert!(chord_drift(&p, &chordbar::displacement::PiecewiseLinear::constant(int(3)), &lo, &int(0)).is_err());
}

#[test]
fn float_profile_agrees_with_exact_one() {
    let p = OscillationProfile::new(vec![
        (int(0), int(1), int(0)),
        (q(1, 2), int(2), int(-1)),
        (int(1), int(1), int(-1)),
    ])
    .unwrap();
    let exact = oscillation(&p, &int(1)).unwrap();
    let fp = FloatProfile::new(vec![(0.0, 1.0, 0.0), (0.5, 2.0, -1.0), (1.0, 1.0, -1.0)]).unwrap();
    assert_eq!(exact, q(9, 4));
    assert!((fp.oscillation() - 2.25).abs() < 1e-12);
    assert!(fp.drift_within_bound(&[1.0, 2.0, 1.0], &[0.0, -1.0, -1.0]));
}

#[test]
fn sharpness_schedule_oscillation() {
    for (a, s, delta) in [(int(2), q(1, 2), q(1, 10)), (q(7, 3), q(9, 10), int(0)), (int(1), q(1, 3), q(1, 3))] {
        let sch = SharpnessSchedule {
            a: a.clone(),
            s: s.clone(),
            delta: delta.clone(),
        };
        assert_eq!(sch.total_oscillation().unwrap(), &s * &a + &delta);
    }
}

#[test]
fn long_bars_witness_threshold() {
    let b = Barcode::new(vec![
        Bar::finite(int(0), int(1), 0),
        Bar::finite(int(0), int(3), 0),
        Bar::infinite(int(2), 1),
    ]);
    assert_eq!(long_bar_witness(&b, &int(2)).len(), 2);
    assert_eq!(long_bar_witness(&b, &int(5)).len(), 1);
}
