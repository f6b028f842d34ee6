//! Oscillation budgets, chord-length drift and the displacement lower bound.
//!
//! All quantities are exact rationals. A float variant of the oscillation
//! profile exists for sampled, user-supplied data; it compares with an
//! absolute tolerance of [`FLOAT_TOLERANCE`].

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::barcode::{Bar, Barcode};
use crate::coefficients::Rational;
use crate::complex::ActionValue;

pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DisplacementError {
    #[error("sample times must start at 0 and strictly increase (sample {index})")]
    NonMonotoneTime { index: usize },
    #[error("max below min at sample {index}")]
    MaxBelowMin { index: usize },
    #[error("time {t} outside the profile domain")]
    OutOfDomain { t: Rational },
    #[error("rate {which} = {rate} leaves [min_H, max_H] = [{min}, {max}] at t = {t}")]
    RatesExceedProfile {
        which: &'static str,
        t: Box<Rational>,
        rate: Box<Rational>,
        min: Box<Rational>,
        max: Box<Rational>,
    },
    #[error("profile has no samples")]
    Empty,
    #[error("sigma profile must have positive entries and satisfy sigma_k = sigma_(n-k) (index {index})")]
    InvalidSigma { index: usize },
    #[error("betti profile has length {got}, sigma profile has length {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Continuous piecewise-linear function of time, constant outside its
/// breakpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinear {
    points: Vec<(Rational, Rational)>,
}

impl PiecewiseLinear {
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self, DisplacementError> {
        if points.is_empty() {
            return Err(DisplacementError::Empty);
        }
        if let Some(i) = points.windows(2).position(|w| w[0].0 >= w[1].0) {
            return Err(DisplacementError::NonMonotoneTime { index: i + 1 });
        }
        Ok(PiecewiseLinear { points })
    }

    pub fn constant(v: Rational) -> Self {
        PiecewiseLinear {
            points: vec![(Rational::zero(), v)],
        }
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let p = &self.points;
        if *t <= p[0].0 {
            return p[0].1.clone();
        }
        for w in p.windows(2) {
            let ((t0, v0), (t1, v1)) = (&w[0], &w[1]);
            if t <= t1 {
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
            }
        }
        p[p.len() - 1].1.clone()
    }

    /// Breakpoints strictly inside `(a, b)`.
    pub fn breakpoints_in(&self, a: &Rational, b: &Rational) -> Vec<Rational> {
        self.points
            .iter()
            .map(|(t, _)| t.clone())
            .filter(|t| t > a && t < b)
            .collect()
    }

    fn knots(&self, a: &Rational, b: &Rational) -> Vec<Rational> {
        let mut k = vec![a.clone()];
        k.extend(self.breakpoints_in(a, b));
        k.push(b.clone());
        k
    }

    pub fn min_on(&self, a: &Rational, b: &Rational) -> Rational {
        self.knots(a, b).iter().map(|t| self.eval(t)).min().expect("non-empty")
    }

    pub fn max_on(&self, a: &Rational, b: &Rational) -> Rational {
        self.knots(a, b).iter().map(|t| self.eval(t)).max().expect("non-empty")
    }

    pub fn constant_on(&self, a: &Rational, b: &Rational) -> Option<Rational> {
        let lo = self.min_on(a, b);
        (lo == self.max_on(a, b)).then_some(lo)
    }

    /// Exact integral over `[a, b]` by the trapezoid rule on the knots.
    pub fn integral(&self, a: &Rational, b: &Rational) -> Rational {
        let two = Rational::from_integer(2.into());
        self.knots(a, b)
            .windows(2)
            .map(|w| (&w[1] - &w[0]) * (self.eval(&w[0]) + self.eval(&w[1])) / &two)
            .sum()
    }
}

/// Samples `(t, max_H(t), min_H(t))` of a contact Hamiltonian along the
/// moving Legendrian, interpolated linearly. Times start at 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OscillationProfile {
    max: PiecewiseLinear,
    min: PiecewiseLinear,
}

impl OscillationProfile {
    pub fn new(samples: Vec<(Rational, Rational, Rational)>) -> Result<Self, DisplacementError> {
        if samples.is_empty() {
            return Err(DisplacementError::Empty);
        }
        if !samples[0].0.is_zero() {
            return Err(DisplacementError::NonMonotoneTime { index: 0 });
        }
        if let Some(index) = samples.iter().position(|(_, hi, lo)| hi < lo) {
            return Err(DisplacementError::MaxBelowMin { index });
        }
        let max = PiecewiseLinear::new(samples.iter().map(|(t, hi, _)| (t.clone(), hi.clone())).collect())?;
        let min = PiecewiseLinear::new(samples.iter().map(|(t, _, lo)| (t.clone(), lo.clone())).collect())?;
        Ok(OscillationProfile { max, min })
    }

    pub fn end(&self) -> &Rational {
        &self.max.points.last().expect("non-empty").0
    }

    pub fn max_at(&self, t: &Rational) -> Rational {
        self.max.eval(t)
    }

    pub fn min_at(&self, t: &Rational) -> Rational {
        self.min.eval(t)
    }

    fn knots(&self, t_end: &Rational) -> Vec<Rational> {
        let zero = Rational::zero();
        let mut k = vec![zero.clone()];
        let mut inner = self.max.breakpoints_in(&zero, t_end);
        inner.extend(self.min.breakpoints_in(&zero, t_end));
        inner.sort();
        inner.dedup();
        k.extend(inner);
        if !t_end.is_zero() {
            k.push(t_end.clone());
        }
        k
    }
}

/// `∫₀^{t_end} (max_H − min_H) dt`, exact.
pub fn oscillation(profile: &OscillationProfile, t_end: &Rational) -> Result<Rational, DisplacementError> {
    if t_end.is_negative() || t_end > profile.end() {
        return Err(DisplacementError::OutOfDomain { t: t_end.clone() });
    }
    let zero = Rational::zero();
    Ok(profile.max.integral(&zero, t_end) - profile.min.integral(&zero, t_end))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DriftOutcome {
    /// `ℓ(t_end) − ℓ(0)`.
    pub delta: Rational,
    /// `(t, ℓ(t))` at every knot of the rates and the profile.
    pub trajectory: Vec<(Rational, Rational)>,
    pub oscillation: Rational,
    /// `|Δℓ| ≤ oscillation`.
    pub bound_holds: bool,
}

/// Integrates `dℓ/dt = rate_end − rate_start` over the profile's domain.
///
/// Both rates must lie in `[min_H, max_H]` pointwise; all functions are
/// piecewise linear, so checking at the common knots is exact.
pub fn chord_drift(
    profile: &OscillationProfile,
    rate_end: &PiecewiseLinear,
    rate_start: &PiecewiseLinear,
    initial_length: &Rational,
) -> Result<DriftOutcome, DisplacementError> {
    let t_end = profile.end().clone();
    let mut knots = profile.knots(&t_end);
    let zero = Rational::zero();
    knots.extend(rate_end.breakpoints_in(&zero, &t_end));
    knots.extend(rate_start.breakpoints_in(&zero, &t_end));
    knots.sort();
    knots.dedup();
    for t in &knots {
        let (hi, lo) = (profile.max_at(t), profile.min_at(t));
        for (which, r) in [("at the chord end", rate_end.eval(t)), ("at the chord start", rate_start.eval(t))] {
            if r > hi || r < lo {
                return Err(DisplacementError::RatesExceedProfile {
                    which,
                    t: Box::new(t.clone()),
                    rate: Box::new(r),
                    min: Box::new(lo),
                    max: Box::new(hi),
                });
            }
        }
    }
    let mut trajectory = vec![(zero.clone(), initial_length.clone())];
    let two = Rational::from_integer(2.into());
    let speed = |t: &Rational| rate_end.eval(t) - rate_start.eval(t);
    let mut acc = initial_length.clone();
    for w in knots.windows(2) {
        acc += (&w[1] - &w[0]) * (speed(&w[0]) + speed(&w[1])) / &two;
        trajectory.push((w[1].clone(), acc.clone()));
    }
    let delta = &acc - initial_length;
    let osc = oscillation(profile, &t_end)?;
    Ok(DriftOutcome {
        bound_holds: delta.abs() <= osc,
        delta,
        trajectory,
        oscillation: osc,
    })
}

/// Float counterpart of [`OscillationProfile`] for sampled data.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatProfile {
    samples: Vec<(f64, f64, f64)>,
}

impl FloatProfile {
    pub fn new(samples: Vec<(f64, f64, f64)>) -> Result<Self, DisplacementError> {
        if samples.is_empty() {
            return Err(DisplacementError::Empty);
        }
        if samples[0].0 != 0.0 {
            return Err(DisplacementError::NonMonotoneTime { index: 0 });
        }
        if let Some(i) = samples.windows(2).position(|w| w[0].0 >= w[1].0) {
            return Err(DisplacementError::NonMonotoneTime { index: i + 1 });
        }
        if let Some(index) = samples.iter().position(|(_, hi, lo)| hi < lo) {
            return Err(DisplacementError::MaxBelowMin { index });
        }
        Ok(FloatProfile { samples })
    }

    pub fn oscillation(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| (w[1].0 - w[0].0) * ((w[0].1 - w[0].2) + (w[1].1 - w[1].2)) / 2.0)
            .sum()
    }

    /// `|Δℓ| ≤ osc + tolerance` for sampled rates aligned with the profile.
    pub fn drift_within_bound(&self, rate_end: &[f64], rate_start: &[f64]) -> bool {
        assert_eq!(rate_end.len(), self.samples.len());
        assert_eq!(rate_start.len(), self.samples.len());
        let speed: Vec<f64> = rate_end.iter().zip(rate_start).map(|(e, s)| e - s).collect();
        let delta: f64 = self
            .samples
            .windows(2)
            .zip(speed.windows(2))
            .map(|(w, v)| (w[1].0 - w[0].0) * (v[0] + v[1]) / 2.0)
            .sum();
        delta.abs() <= self.oscillation() + FLOAT_TOLERANCE
    }
}

/// `σ_0, …, σ_n`; entries are positive rationals or `+∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaProfile {
    values: Vec<ActionValue>,
}

impl SigmaProfile {
    pub fn new(values: Vec<ActionValue>) -> Result<Self, DisplacementError> {
        let n = values.len();
        for (k, v) in values.iter().enumerate() {
            let positive = match v {
                ActionValue::Finite(q) => q.is_positive(),
                ActionValue::PosInf => true,
                ActionValue::NegInf => false,
            };
            if !positive || *v != values[n - 1 - k] {
                return Err(DisplacementError::InvalidSigma { index: k });
            }
        }
        Ok(SigmaProfile { values })
    }

    pub fn values(&self) -> &[ActionValue] {
        &self.values
    }

    pub fn dimension(&self) -> usize {
        self.values.len().saturating_sub(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiProfile {
    values: Vec<u64>,
}

impl BettiProfile {
    pub fn new(values: Vec<u64>) -> Self {
        BettiProfile { values }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Binding {
    /// The action cutoff `l` is the smaller term.
    L,
    /// `σ_k` is the smaller term.
    Sigma(usize),
    /// `l = σ_k`.
    Both(usize),
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binding::L => write!(f, "l"),
            Binding::Sigma(k) => write!(f, "sigma_{k}"),
            Binding::Both(k) => write!(f, "l = sigma_{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub count: u64,
    pub i_star: Option<usize>,
    /// Degrees ordered by non-increasing `σ`, ties by ascending degree.
    pub ordering: Vec<usize>,
    /// Constraint attaining `min{l, σ_{ι_i}}` at `i*`, or at `i = 0` when no
    /// index qualifies.
    pub binding: Option<Binding>,
    /// `osc = min{l, σ_{ι_i}}` for some `i`: the strict inequality decides
    /// whether that index counts.
    pub at_threshold: bool,
    /// The bound assumes the displaced Legendrian is transverse to the Reeb
    /// flow applied to the original; this cannot be checked from the inputs.
    pub assumes_reeb_transversality: bool,
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.count == 0 && self.at_threshold {
            writeln!(f, "count: 0 (strict inequality required)")?;
        } else {
            writeln!(f, "count: {}", self.count)?;
        }
        match self.i_star {
            Some(i) => writeln!(f, "i_star: {i}")?,
            None => writeln!(f, "i_star: none")?,
        }
        let ord: Vec<String> = self.ordering.iter().map(usize::to_string).collect();
        writeln!(f, "ordering: {}", ord.join(" "))?;
        if let Some(b) = self.binding {
            writeln!(f, "binding: {b}")?;
        }
        writeln!(f, "hypothesis: displaced Legendrian transverse to the Reeb flow (not checked)")
    }
}

/// Lower bound on the number of Reeb chords between a Legendrian and its
/// image under a contact isotopy of oscillation `osc`: with `ι` ordering
/// degrees by non-increasing `σ`, `i*` is the largest `i` such that
/// `osc < min{l, σ_{ι_i}}` and the count is `Σ_{j ≤ i*} b_{ι_j}`.
pub fn theorem_bound(
    sigma: &SigmaProfile,
    betti: &BettiProfile,
    l: &ActionValue,
    osc: &Rational,
) -> Result<BoundReport, DisplacementError> {
    let n1 = sigma.values.len();
    if betti.values.len() != n1 {
        return Err(DisplacementError::LengthMismatch {
            expected: n1,
            got: betti.values.len(),
        });
    }
    let mut ordering: Vec<usize> = (0..n1).collect();
    ordering.sort_by(|&i, &j| sigma.values[j].cmp(&sigma.values[i]).then(i.cmp(&j)));
    let osc_v = ActionValue::Finite(osc.clone());
    let threshold = |i: usize| l.clone().min(sigma.values[ordering[i]].clone());
    let i_star = (0..n1).rev().find(|&i| osc_v < threshold(i));
    let count = i_star.map_or(0, |i| ordering[..=i].iter().map(|&k| betti.values[k]).sum());
    let binding = if n1 == 0 {
        None
    } else {
        let i = i_star.unwrap_or(0);
        let k = ordering[i];
        Some(match l.cmp(&sigma.values[k]) {
            std::cmp::Ordering::Less => Binding::L,
            std::cmp::Ordering::Greater => Binding::Sigma(k),
            std::cmp::Ordering::Equal => Binding::Both(k),
        })
    };
    let at_threshold = (0..n1).any(|i| osc_v == threshold(i));
    Ok(BoundReport {
        count,
        i_star,
        ordering,
        binding,
        at_threshold,
        assumes_reeb_transversality: true,
    })
}

/// Bars of length at least `threshold`; infinite bars always qualify.
pub fn long_bar_witness(b: &Barcode, threshold: &Rational) -> Vec<Bar> {
    b.bars()
        .iter()
        .filter(|bar| bar.length().is_none_or(|len| len >= *threshold))
        .cloned()
        .collect()
}

/// The rescaling isotopy `(x, y, z) ↦ (x, (1−t)y, (1−t)z)` applied to
/// `{|z| ≤ a/2}`, with contact Hamiltonian `H_t = −z/(1−t)`, followed by a
/// displacement of oscillation `delta` near the zero section.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharpnessSchedule {
    pub a: Rational,
    pub s: Rational,
    pub delta: Rational,
}

impl SharpnessSchedule {
    /// `(max, min)` of `H_t` over the image `{|z| ≤ (1−t)a/2}`, for `t < 1`.
    pub fn extrema(&self, t: &Rational) -> (Rational, Rational) {
        let one = Rational::from_integer(1.into());
        let two = Rational::from_integer(2.into());
        let shrink = &one - t;
        let z_top = &shrink * &self.a / &two;
        let h = |z: &Rational| -z / &shrink;
        // H is decreasing in z.
        (h(&-z_top.clone()), h(&z_top))
    }

    /// Profile of the rescaling stage on `[0, s]`, sampled at both ends (the
    /// extrema are constant in `t`).
    pub fn rescaling_profile(&self) -> Result<OscillationProfile, DisplacementError> {
        let zero = Rational::zero();
        let (h0, l0) = self.extrema(&zero);
        let (h1, l1) = self.extrema(&self.s);
        OscillationProfile::new(vec![(zero, h0, l0), (self.s.clone(), h1, l1)])
    }

    /// `s·a + delta`.
    pub fn total_oscillation(&self) -> Result<Rational, DisplacementError> {
        Ok(oscillation(&self.rescaling_profile()?, &self.s)? + &self.delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{int, rat};

    #[test]
    fn constant_gap_integrates_linearly() {
        let p = OscillationProfile::new(vec![(int(0), int(3), int(1)), (int(1), int(3), int(1))]).unwrap();
        assert_eq!(oscillation(&p, &rat(1, 4)).unwrap(), rat(1, 2));
        assert!(oscillation(&p, &int(2)).is_err());
    }

    #[test]
    fn non_monotone_rejected() {
        let err = OscillationProfile::new(vec![(int(0), int(1), int(0)), (int(0), int(1), int(0))]).unwrap_err();
        assert_eq!(err, DisplacementError::NonMonotoneTime { index: 1 });
    }

    #[test]
    fn saturated_drift_is_tight() {
        let p = OscillationProfile::new(vec![(int(0), int(2), int(-1)), (int(1), int(2), int(-1))]).unwrap();
        let out = chord_drift(&p, &PiecewiseLinear::constant(int(2)), &PiecewiseLinear::constant(int(-1)), &int(5)).unwrap();
        assert_eq!(out.delta, int(3));
        assert_eq!(out.oscillation, int(3));
        assert!(out.bound_holds);
        let too_fast = chord_drift(&p, &PiecewiseLinear::constant(int(3)), &PiecewiseLinear::constant(int(0)), &int(5));
        assert!(matches!(too_fast, Err(DisplacementError::RatesExceedProfile { .. })));
    }

    #[test]
    fn ties_in_sigma_break_by_degree() {
        let s = SigmaProfile::new(vec![int(2).into(), int(2).into(), int(2).into()]).unwrap();
        let b = BettiProfile::new(vec![1, 0, 1]);
        let r = theorem_bound(&s, &b, &ActionValue::PosInf, &int(1)).unwrap();
        assert_eq!(r.ordering, vec![0, 1, 2]);
        assert_eq!(r.count, 2);
        assert_eq!(r.binding, Some(Binding::Sigma(2)));
    }

    #[test]
    fn asymmetric_sigma_rejected() {
        assert!(SigmaProfile::new(vec![int(1).into(), int(2).into()]).is_err());
    }

    #[test]
    fn float_profile_matches_exact() {
        let f = FloatProfile::new(vec![(0.0, 1.0, -1.0), (0.5, 2.0, 0.0), (1.0, 1.0, -1.0)]).unwrap();
        assert!((f.oscillation() - 2.0).abs() < FLOAT_TOLERANCE);
        assert!(f.drift_within_bound(&[1.0, 2.0, 1.0], &[-1.0, 0.0, -1.0]));
    }
}
