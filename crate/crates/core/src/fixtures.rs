//! Named example objects and seeded random generators.
//!
//! Random complexes are built column by column in action order: the boundary
//! of each new generator is a random combination of a basis of the cycles
//! spanned by strictly lower generators of the right degree, so `∂² = 0` and
//! strict action decrease hold by construction. Random DGAs start from a
//! stabilized differential and are conjugated by random length-decreasing
//! elementary automorphisms, which carries a known augmentation along.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::barcode::{Bar, Barcode};
use crate::coefficients::{int, rat, FieldSpec, Rational, Scalar};
use crate::complex::{ActionValue, Chain, FilteredComplex, Generator, Window};
use crate::dga::{AlgebraElement, Augmentation, ChordDga, ChordKind, Chord, Word};
use crate::displacement::{BettiProfile, OscillationProfile, PiecewiseLinear, SigmaProfile};
use crate::linalg;
use crate::pwc::{DriftSegment, EventKind, State, Timeline};

/// `{c}` with `∂c = 0`.
pub fn one_generator(field: FieldSpec, action: Rational, degree: i64) -> FilteredComplex {
    FilteredComplex::build(
        field,
        Window::unbounded(),
        vec![Generator::new("c", action, degree)],
        BTreeMap::new(),
    )
    .expect("single generator")
}

/// `∂c₁ = c₀` with `ℓ(c₀) < ℓ(c₁)`.
pub fn acyclic_pair(field: FieldSpec, low: Rational, high: Rational, degree: i64) -> FilteredComplex {
    FilteredComplex::build(
        field,
        Window::unbounded(),
        vec![Generator::new("c0", low, degree), Generator::new("c1", high, degree + 1)],
        BTreeMap::from([("c1".to_string(), Chain::term("c0", field.one()))]),
    )
    .expect("acyclic pair")
}

pub fn random_scalar<R: Rng>(rng: &mut R, field: FieldSpec, nonzero: bool) -> Scalar {
    loop {
        let s = match field {
            FieldSpec::F2 => field.from_i64(rng.gen_range(0..2)),
            FieldSpec::Fp(p) => field.from_i64(rng.gen_range(0..p as i64)),
            FieldSpec::Q => {
                let q = rat(rng.gen_range(-3..=3), rng.gen_range(1..=3));
                field.from_rational(&q).expect("rational")
            }
        };
        if !(nonzero && s.is_zero()) {
            return s;
        }
    }
}

/// Boundary of a new generator: a random combination of a cycle basis for
/// the span of `candidates` (ids of existing generators).
fn random_cycle<R: Rng>(
    rng: &mut R,
    field: FieldSpec,
    ids: &[String],
    boundary: &BTreeMap<String, Chain>,
    candidates: &[usize],
) -> Chain {
    if candidates.is_empty() {
        return Chain::zero();
    }
    let columns: Vec<Vec<Scalar>> = candidates
        .iter()
        .map(|&c| {
            let d = boundary.get(&ids[c]).cloned().unwrap_or_default();
            ids.iter()
                .map(|id| d.get(id).cloned().unwrap_or_else(|| field.zero()))
                .collect()
        })
        .collect();
    let basis = linalg::kernel(field, ids.len(), &columns);
    let mut chain = Chain::zero();
    for v in &basis {
        let s = random_scalar(rng, field, false);
        if s.is_zero() {
            continue;
        }
        for (k, x) in v.iter().enumerate() {
            chain.add_term(ids[candidates[k]].clone(), x * &s);
        }
    }
    chain
}

/// Random complex on the given `(action, degree)` pairs. Ties in action are
/// allowed; they never carry differential entries between each other.
pub fn random_complex_on<R: Rng>(
    rng: &mut R,
    field: FieldSpec,
    window: Window,
    mut specs: Vec<(Rational, i64)>,
) -> FilteredComplex {
    specs.sort();
    let ids: Vec<String> = (0..specs.len()).map(|i| format!("g{i}")).collect();
    let mut boundary: BTreeMap<String, Chain> = BTreeMap::new();
    for j in 0..specs.len() {
        let (aj, dj) = &specs[j];
        let candidates: Vec<usize> = (0..j)
            .filter(|&i| specs[i].1 == dj - 1 && specs[i].0 < *aj)
            .collect();
        let chain = random_cycle(rng, field, &ids, &boundary, &candidates);
        if !chain.is_zero() {
            boundary.insert(ids[j].clone(), chain);
        }
    }
    let generators = specs
        .into_iter()
        .zip(&ids)
        .map(|((a, d), id)| Generator::new(id.clone(), a, d))
        .collect();
    FilteredComplex::build(field, window, generators, boundary).expect("random complex is valid by construction")
}

/// Random complex with `n` generators, integer actions in `[0, 2n)` (ties
/// occur) and degrees in `0..=2`.
pub fn random_complex<R: Rng>(rng: &mut R, field: FieldSpec, n: usize) -> FilteredComplex {
    let specs = (0..n)
        .map(|_| (int(rng.gen_range(0..(2 * n as i64).max(1))), rng.gen_range(0..=2)))
        .collect();
    random_complex_on(rng, field, Window::unbounded(), specs)
}

/// Random action-preserving upper-triangular base change for `c`: unit
/// diagonal scaled by random units, plus random entries from generators of
/// the same degree and no larger action.
pub fn random_base_change<R: Rng>(rng: &mut R, c: &FilteredComplex) -> linalg::Matrix {
    let field = c.field();
    let gens = c.generators();
    let mut u = linalg::Matrix::identity(field, gens.len());
    for j in 0..gens.len() {
        u.set(j, j, random_scalar(rng, field, true));
        for i in 0..j {
            if gens[i].degree == gens[j].degree && gens[i].action <= gens[j].action && rng.gen_bool(0.5) {
                u.set(i, j, random_scalar(rng, field, false));
            }
        }
    }
    u
}

/// Random barcode with `n` bars in degrees `0..=2`; about a quarter are
/// infinite.
pub fn random_barcode<R: Rng>(rng: &mut R, n: usize) -> Barcode {
    let bars = (0..n)
        .map(|_| {
            let start = rat(rng.gen_range(0..40), 4);
            let degree = rng.gen_range(0..=2);
            if rng.gen_bool(0.25) {
                Bar::infinite(start, degree)
            } else {
                let len = rat(rng.gen_range(1..20), 4);
                Bar::finite(start.clone(), start + len, degree)
            }
        })
        .collect();
    Barcode::new(bars)
}

/// Two clusters of generators: `n_low` with actions in `[l − 1/2, l]` and
/// `n_high` in `[A + l, A + l + 1/2]`.
pub fn two_cluster_complex<R: Rng>(
    rng: &mut R,
    field: FieldSpec,
    l: &Rational,
    gap: &Rational,
    n_low: usize,
    n_high: usize,
) -> FilteredComplex {
    let mut specs = Vec::new();
    for _ in 0..n_low {
        specs.push((l - rat(rng.gen_range(0..=8), 16), rng.gen_range(0..=2)));
    }
    for _ in 0..n_high {
        specs.push((gap + l + rat(rng.gen_range(0..=8), 16), rng.gen_range(0..=2)));
    }
    random_complex_on(rng, field, Window::unbounded(), specs)
}

/// Sample times `0 = t₀ < … < t_k` with random `max ≥ min` and endpoint
/// rates drawn inside `[min, max]` at the same knots, so the rates stay in
/// bounds on every segment.
pub fn random_rate_profile<R: Rng>(rng: &mut R) -> (OscillationProfile, PiecewiseLinear, PiecewiseLinear) {
    let k = rng.gen_range(1..=5);
    let mut t = Rational::zero();
    let mut samples = Vec::new();
    let mut end = Vec::new();
    let mut start = Vec::new();
    for i in 0..=k {
        if i > 0 {
            t += rat(rng.gen_range(1..=8), 4);
        }
        let lo = rat(rng.gen_range(-12..=4), 4);
        let hi = &lo + rat(rng.gen_range(0..=12), 4);
        let pick = |rng: &mut R| {
            let w = rat(rng.gen_range(0..=8), 8);
            &lo + (&hi - &lo) * w
        };
        end.push((t.clone(), pick(rng)));
        start.push((t.clone(), pick(rng)));
        samples.push((t.clone(), hi.clone(), lo.clone()));
    }
    (
        OscillationProfile::new(samples).expect("monotone"),
        PiecewiseLinear::new(end).expect("monotone"),
        PiecewiseLinear::new(start).expect("monotone"),
    )
}

/// Sphere data: `σ₀ = σ_n = a`, `σ_k = +∞` otherwise, Betti numbers of `Sⁿ`.
pub fn standard_sphere_profiles(n: usize, a: &Rational) -> (SigmaProfile, BettiProfile) {
    let sigma = (0..=n)
        .map(|k| if k == 0 || k == n { ActionValue::Finite(a.clone()) } else { ActionValue::PosInf })
        .collect();
    let mut betti = vec![0; n + 1];
    betti[0] += 1;
    betti[n] += 1;
    (SigmaProfile::new(sigma).expect("symmetric"), BettiProfile::new(betti))
}

/// Stabilized unknot with the point constraint near the crossing:
/// `σ₀ = σ₁ = +∞` and the Betti numbers of the circle.
pub fn stabilized_unknot_profiles() -> (SigmaProfile, BettiProfile) {
    (
        SigmaProfile::new(vec![ActionValue::PosInf, ActionValue::PosInf]).expect("symmetric"),
        BettiProfile::new(vec![1, 1]),
    )
}

/// Standard Legendrian `n`-sphere: one chord of degree `n` and length `a`
/// with vanishing differential.
pub fn standard_unknot_shape(field: FieldSpec, n: i64, a: Rational) -> ChordDga {
    ChordDga::new(field, vec![Chord::pure("c", a, n, 0)], BTreeMap::new()).expect("valid")
}

/// Stabilized unknot: chords `c1`, `c2` whose only disks with one positive
/// puncture have no negative punctures, `∂c₁ = ∂c₂ = 1`.
pub fn stabilized_unknot_shape(field: FieldSpec, l1: Rational, l2: Rational) -> ChordDga {
    ChordDga::new(
        field,
        vec![Chord::pure("c1", l1, 1, 0), Chord::pure("c2", l2, 1, 0)],
        BTreeMap::from([
            ("c1".to_string(), AlgebraElement::one(field)),
            ("c2".to_string(), AlgebraElement::one(field)),
        ]),
    )
    .expect("valid")
}

/// Morse critical point of the perturbing function on the shifted copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorseChord {
    pub label: String,
    pub index: i64,
    /// `ℓ(x) − N`.
    pub offset: Rational,
}

/// Two-copy template of a one-component DGA `base`: the original chords on
/// component 0, primed copies on component 1, mixed chords `p+_c`, `p-_c` of
/// lengths `N ± ℓ(c)` and Morse chords `x` of length `N + offset`.
///
/// Pure differentials are copied on both components. Morse chords carry the
/// supplied Morse differential (pairs `(x, [(coeff, y)])`); the `p±_c` carry
/// none. Degrees: `|p+_c| = |c| + 1`, `|p-_c| = |c|`, `|x| = index`.
pub fn two_copy_template(
    base: &ChordDga,
    shift: Rational,
    morse: &[MorseChord],
    morse_differential: &[(String, Vec<(i64, String)>)],
) -> ChordDga {
    let field = base.field();
    let prime = |l: &str| format!("{l}'");
    let mut chords = Vec::new();
    let mut differential = BTreeMap::new();
    for c in base.chords() {
        chords.push(Chord::pure(c.label.clone(), c.length.clone(), c.degree, 0));
        chords.push(Chord::pure(prime(&c.label), c.length.clone(), c.degree, 1));
        chords.push(Chord::mixed(format!("p+_{}", c.label), &shift + &c.length, c.degree + 1, 0, 1));
        chords.push(Chord::mixed(format!("p-_{}", c.label), &shift - &c.length, c.degree, 0, 1));
        let d = base.boundary(&c.label);
        if !d.is_zero() {
            let primed = AlgebraElement::from_terms(
                field,
                d.terms().map(|(w, s)| (Word(w.letters().iter().map(|l| prime(l)).collect()), s.clone())),
            );
            differential.insert(c.label.clone(), d);
            differential.insert(prime(&c.label), primed);
        }
    }
    for x in morse {
        chords.push(Chord::mixed(x.label.clone(), &shift + &x.offset, x.index, 0, 1));
    }
    for (x, terms) in morse_differential {
        let el = AlgebraElement::from_terms(
            field,
            terms.iter().map(|(c, y)| (Word::letter(y.clone()), field.from_i64(*c))),
        );
        differential.insert(x.clone(), el);
    }
    ChordDga::new(field, chords, differential).expect("template labels are consistent")
}

/// Same augmentation on both components of a two-copy template.
pub fn doubled_augmentation(eps: &Augmentation) -> Augmentation {
    let mut values = eps.values().clone();
    for (k, v) in eps.values() {
        values.insert(format!("{k}'"), v.clone());
    }
    Augmentation::new(values)
}

/// Random two-component DGA with a valid augmentation on all pure chords.
pub fn random_two_component_dga<R: Rng>(rng: &mut R, field: FieldSpec) -> (ChordDga, Augmentation) {
    let n = rng.gen_range(6..=12);
    let mut chords: Vec<Chord> = Vec::new();
    let mut used = BTreeSet::new();
    for i in 0..n {
        let kind = match i {
            0..=2 => ChordKind::Mixed { from: 0, to: 1 },
            _ => match rng.gen_range(0..10) {
                0..=2 => ChordKind::Pure { component: 0 },
                3..=5 => ChordKind::Pure { component: 1 },
                6..=8 => ChordKind::Mixed { from: 0, to: 1 },
                _ => ChordKind::Mixed { from: 1, to: 0 },
            },
        };
        let length = loop {
            let q = rat(rng.gen_range(1..=160), 8);
            if used.insert(q.clone()) {
                break q;
            }
        };
        let degree = match kind {
            ChordKind::Pure { .. } => [-1, 0, 0, 0, 1, 1][rng.gen_range(0..6)],
            ChordKind::Mixed { .. } => rng.gen_range(0..=2),
        };
        let label = match kind {
            ChordKind::Pure { component } => format!("q{component}_{i}"),
            ChordKind::Mixed { from: 0, .. } => format!("m{i}"),
            ChordKind::Mixed { .. } => format!("n{i}"),
        };
        chords.push(Chord { label, length, degree, kind });
    }

    // Stabilized starting differential: disjoint pairs ∂a = u·b.
    let mut differential: BTreeMap<String, AlgebraElement> = BTreeMap::new();
    let mut paired = BTreeSet::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for &i in &order {
        if paired.contains(&i) {
            continue;
        }
        let partner = order.iter().copied().find(|&j| {
            !paired.contains(&j)
                && j != i
                && chords[j].kind == chords[i].kind
                && chords[j].degree + 1 == chords[i].degree
                && chords[j].length < chords[i].length
        });
        if let Some(j) = partner {
            if rng.gen_bool(0.7) {
                paired.insert(i);
                paired.insert(j);
                differential.insert(
                    chords[i].label.clone(),
                    AlgebraElement::term(field, Word::letter(chords[j].label.clone()), random_scalar(rng, field, true)),
                );
            }
        }
    }
    let targets: BTreeSet<String> = differential.values().flat_map(|x| x.letters()).map(str::to_string).collect();
    let mut eps: BTreeMap<String, Scalar> = BTreeMap::new();
    for c in chords.iter().filter(|c| c.is_pure()) {
        let v = if c.degree == 0 && !targets.contains(&c.label) {
            random_scalar(rng, field, false)
        } else {
            field.zero()
        };
        eps.insert(c.label.clone(), v);
    }

    let mut dga = ChordDga::new(field, chords.clone(), differential).expect("labels consistent");
    let mut eps = Augmentation::new(eps);
    let slides = rng.gen_range(2..=5);
    for _ in 0..slides {
        let c = chords.choose(rng).expect("non-empty").clone();
        let Some(w) = random_compatible_word(rng, &dga, &c) else {
            continue;
        };
        let addend = AlgebraElement::term(field, w, random_scalar(rng, field, true));
        let (next, next_eps) = conjugate(&dga, &eps, &c.label, &addend);
        dga = next;
        eps = next_eps;
    }
    (dga, eps)
}

/// Word of degree `|c|` and length `< ℓ(c)` avoiding `c`, shaped like a
/// path between the end components of `c`.
fn random_compatible_word<R: Rng>(rng: &mut R, dga: &ChordDga, c: &Chord) -> Option<Word> {
    let pool = |kind: ChordKind| -> Vec<&Chord> {
        dga.chords()
            .filter(|x| x.kind == kind && x.label != c.label && x.length < c.length)
            .collect()
    };
    let p0 = pool(ChordKind::Pure { component: 0 });
    let p1 = pool(ChordKind::Pure { component: 1 });
    let m01 = pool(ChordKind::Mixed { from: 0, to: 1 });
    let m10 = pool(ChordKind::Mixed { from: 1, to: 0 });
    let pick_pure = |rng: &mut R, p: &[&Chord], max: usize| -> Vec<String> {
        let k = if p.is_empty() { 0 } else { rng.gen_range(0..=max) };
        (0..k).map(|_| p.choose(rng).expect("non-empty").label.clone()).collect()
    };
    for _ in 0..60 {
        let letters: Vec<String> = match c.kind {
            ChordKind::Pure { component } => {
                let p = if component == 0 { &p0 } else { &p1 };
                if p.is_empty() {
                    return None;
                }
                let k = rng.gen_range(1..=3);
                (0..k).map(|_| p.choose(rng).expect("non-empty").label.clone()).collect()
            }
            ChordKind::Mixed { from, .. } => {
                let (start, mid, end, back) = if from == 0 { (&p0, &m01, &p1, &m10) } else { (&p1, &m10, &p0, &m01) };
                let m = mid.choose(rng)?;
                let mut v = pick_pure(rng, start, 1);
                v.push(m.label.clone());
                if !back.is_empty() && rng.gen_bool(0.2) {
                    v.push(back.choose(rng).expect("non-empty").label.clone());
                    v.push(mid.choose(rng).expect("non-empty").label.clone());
                }
                v.extend(pick_pure(rng, end, 1));
                v
            }
        };
        let w = Word(letters);
        if dga.word_degree(&w) == c.degree && dga.word_length(&w) < c.length {
            return Some(w);
        }
    }
    None
}

/// Conjugates the differential by `φ: c ↦ c + addend` and pulls the
/// augmentation back along `φ⁻¹`.
pub fn conjugate(dga: &ChordDga, eps: &Augmentation, c: &str, addend: &AlgebraElement) -> (ChordDga, Augmentation) {
    let field = dga.field();
    let gen_c = AlgebraElement::generator(field, c);
    let phi = |x: &AlgebraElement| -> AlgebraElement {
        let mut out = AlgebraElement::zero(field);
        for (w, s) in x.terms() {
            let mut acc = AlgebraElement::constant(field, s.clone());
            for l in w.letters() {
                let img = if l == c {
                    gen_c.plus(addend)
                } else {
                    AlgebraElement::generator(field, l.clone())
                };
                acc = acc.mul(&img);
            }
            out.add_scaled(&acc, &field.one());
        }
        out
    };
    let mut differential = BTreeMap::new();
    for ch in dga.chords() {
        let mut d = dga.boundary(&ch.label);
        if ch.label == c {
            d = d.minus(&dga.apply(addend));
        }
        let d = phi(&d);
        if !d.is_zero() {
            differential.insert(ch.label.clone(), d);
        }
    }
    let next = ChordDga::new(field, dga.chords().cloned().collect(), differential).expect("same chords");
    let mut values = eps.values().clone();
    if let Some(v) = values.get(c).cloned() {
        let shift = eps.eval(addend).unwrap_or_else(|| field.zero());
        values.insert(c.to_string(), &v - &shift);
    }
    (next, Augmentation::new(values))
}

/// Random timeline on the live state of `initial`: alternating drifts and
/// events, at most `max_events` events, at most `max_generators` generators.
/// Every event is feasible by construction and each is followed by a drift.
pub fn random_timeline<R: Rng>(
    rng: &mut R,
    initial: &FilteredComplex,
    max_events: usize,
    max_generators: usize,
) -> Timeline {
    let field = initial.field();
    let mut state = State::from_complex(initial);
    let mut timeline = Timeline::new(Rational::zero());
    let mut t = Rational::zero();
    let mut fresh = 0usize;
    let mut new_id = |prefix: &str| {
        fresh += 1;
        format!("{prefix}{fresh}")
    };
    let step = Rational::one();

    let shuffle_drift = |rng: &mut R, state: &State, t: &Rational| -> (DriftSegment, State) {
        let seg = random_order_preserving_drift(rng, state, t, &(t + &step));
        let next = advance(state, &seg);
        (seg, next)
    };

    let (seg, next) = shuffle_drift(rng, &state, &t);
    timeline = timeline.drift(seg);
    state = next;
    t += &step;

    let events = rng.gen_range(1..=max_events.max(1));
    for _ in 0..events {
        let choice = rng.gen_range(0..7);
        let mut pre_drift: Option<DriftSegment> = None;
        let kind = match choice {
            0 => slide_event(rng, &state),
            1 if state.generators.len() + 2 <= max_generators => birth_event(rng, &state, &mut new_id),
            2 => death_setup(&state, &t, &(&t + &step)).map(|(seg, kind)| {
                pre_drift = Some(seg);
                kind
            }),
            3 => exit_setup(&state, &t, &(&t + &step), true).map(|(seg, kind)| {
                pre_drift = Some(seg);
                kind
            }),
            4 => exit_setup(&state, &t, &(&t + &step), false).map(|(seg, kind)| {
                pre_drift = Some(seg);
                kind
            }),
            5 if state.generators.len() < max_generators => entry_below_event(rng, &state, &mut new_id),
            6 if state.generators.len() < max_generators => entry_above_event(rng, &state, &mut new_id),
            _ => None,
        };
        let Some(kind) = kind else {
            continue;
        };
        if let Some(seg) = pre_drift {
            state = advance(&state, &seg);
            timeline = timeline.drift(seg);
            t += &step;
        }
        state = crate::pwc::apply_event(&state, &kind).expect("generated events are feasible");
        timeline = timeline.event(t.clone(), kind);
        let (seg, next) = shuffle_drift(rng, &state, &t);
        timeline = timeline.drift(seg);
        state = next;
        t += &step;
    }
    let _ = field;
    timeline
}

fn advance(state: &State, seg: &DriftSegment) -> State {
    let dt = &seg.to - &seg.from;
    let mut s = state.clone();
    for g in s.generators.values_mut() {
        g.action = &g.action + seg.rate(&g.id) * &dt;
    }
    if let ActionValue::Finite(a) = &mut s.window.lower {
        *a = &*a + &seg.lower_rate * &dt;
    }
    if let ActionValue::Finite(b) = &mut s.window.upper {
        *b = &*b + &seg.upper_rate * &dt;
    }
    s
}

/// Moves every generator to fresh, distinct actions strictly inside the
/// window, preserving the current order; ties (birth pairs) are split with
/// the boundary source on top.
fn random_order_preserving_drift<R: Rng>(rng: &mut R, state: &State, from: &Rational, to: &Rational) -> DriftSegment {
    let mut gens: Vec<&Generator> = state.generators.values().collect();
    let is_source_of = |x: &str, y: &str| state.differential.get(x).is_some_and(|c| c.get(y).is_some());
    gens.sort_by(|x, y| {
        x.action.cmp(&y.action).then_with(|| {
            if is_source_of(&x.id, &y.id) {
                std::cmp::Ordering::Greater
            } else if is_source_of(&y.id, &x.id) {
                std::cmp::Ordering::Less
            } else {
                x.id.cmp(&y.id)
            }
        })
    });
    let lo = state.window.lower.finite().cloned().unwrap_or_else(|| int(-10));
    let hi = state.window.upper.finite().cloned().unwrap_or_else(|| int(30));
    let n = gens.len();
    // n distinct grid points strictly inside (lo, hi).
    let slots = 4 * n + 8;
    let mut picks: BTreeSet<usize> = BTreeSet::new();
    while picks.len() < n {
        picks.insert(rng.gen_range(1..slots));
    }
    let dt = to - from;
    let mut seg = DriftSegment::new(from.clone(), to.clone());
    for (g, slot) in gens.iter().zip(picks) {
        let target = &lo + (&hi - &lo) * rat(slot as i64, slots as i64);
        let r = (target - &g.action) / &dt;
        if !r.is_zero() {
            seg = seg.with_rate(g.id.clone(), r);
        }
    }
    seg
}

fn slide_event<R: Rng>(rng: &mut R, state: &State) -> Option<EventKind> {
    let field = state.field;
    let gens: Vec<&Generator> = state.generators.values().collect();
    let target = gens.choose(rng)?;
    let lower: Vec<&&Generator> = gens
        .iter()
        .filter(|g| g.degree == target.degree && g.action < target.action)
        .collect();
    if lower.is_empty() {
        return None;
    }
    let mut addend = Chain::zero();
    for g in lower {
        if rng.gen_bool(0.6) {
            addend.add_term(g.id.clone(), random_scalar(rng, field, true));
        }
    }
    if addend.is_zero() {
        return None;
    }
    Some(EventKind::HandleSlide {
        target: target.id.clone(),
        addend,
        unit: random_scalar(rng, field, true),
    })
}

fn interior_free_action<R: Rng>(rng: &mut R, state: &State) -> Option<Rational> {
    let lo = state.window.lower.finite().cloned().unwrap_or_else(|| int(-10));
    let hi = state.window.upper.finite().cloned().unwrap_or_else(|| int(30));
    for _ in 0..20 {
        let a = &lo + (&hi - &lo) * rat(rng.gen_range(1..64), 64);
        if state.generators.values().all(|g| g.action != a) {
            return Some(a);
        }
    }
    None
}

fn birth_event<R: Rng>(rng: &mut R, state: &State, new_id: &mut impl FnMut(&str) -> String) -> Option<EventKind> {
    let a = interior_free_action(rng, state)?;
    let d = rng.gen_range(0..=2);
    Some(EventKind::Birth {
        x: Generator::new(new_id("x"), a.clone(), d + 1),
        y: Generator::new(new_id("y"), a, d),
        unit: random_scalar(rng, state.field, true),
    })
}

/// A canceling direct-summand pair with no generator at or between their
/// actions, brought together by a drift of the upper one.
fn death_setup(state: &State, from: &Rational, to: &Rational) -> Option<(DriftSegment, EventKind)> {
    for (x, chain) in &state.differential {
        if chain.len() != 1 {
            continue;
        }
        let (y, _) = chain.iter().next().expect("one term");
        if state.differential.get(y).is_some_and(|c| !c.is_zero()) {
            continue;
        }
        let hit = state
            .differential
            .iter()
            .any(|(z, c)| z != x && (c.get(x).is_some() || c.get(y).is_some()));
        if hit {
            continue;
        }
        let (ax, ay) = (&state.generators[x].action, &state.generators[y].action);
        let between = state
            .generators
            .values()
            .any(|g| g.id != *x && g.id != *y && &g.action >= ay && &g.action <= ax);
        if between {
            continue;
        }
        let seg = DriftSegment::new(from.clone(), to.clone()).with_rate(x.clone(), (ay - ax) / (to - from));
        return Some((seg, EventKind::Death { x: x.clone(), y: y.clone() }));
    }
    None
}

/// Moves a window bound onto the extreme generator, then removes it.
fn exit_setup(state: &State, from: &Rational, to: &Rational, below: bool) -> Option<(DriftSegment, EventKind)> {
    let gens: Vec<&Generator> = state.generators.values().collect();
    let g = if below {
        gens.iter().min_by(|a, b| a.action.cmp(&b.action))?
    } else {
        gens.iter().max_by(|a, b| a.action.cmp(&b.action))?
    };
    if gens.iter().filter(|h| h.action == g.action).count() != 1 {
        return None;
    }
    let dt = to - from;
    let seg = DriftSegment::new(from.clone(), to.clone());
    if below {
        let lo = state.window.lower.finite()?;
        let seg = seg.with_window_rates((&g.action - lo) / &dt, Rational::zero());
        Some((seg, EventKind::ExitBelow { id: g.id.clone() }))
    } else {
        let hi = state.window.upper.finite()?;
        let seg = seg.with_window_rates(Rational::zero(), (&g.action - hi) / &dt);
        Some((seg, EventKind::ExitAbove { id: g.id.clone() }))
    }
}

/// New generator on the lower bound; the incoming coefficients solve the
/// linear condition that keeps `∂² = 0`.
fn entry_below_event<R: Rng>(rng: &mut R, state: &State, new_id: &mut impl FnMut(&str) -> String) -> Option<EventKind> {
    let a = state.window.lower.finite()?.clone();
    if state.generators.values().any(|g| g.action == a) {
        return None;
    }
    let field = state.field;
    let d = rng.gen_range(0..=2);
    let sources: Vec<&Generator> = state.generators.values().filter(|g| g.degree == d + 1).collect();
    let above: Vec<&Generator> = state.generators.values().filter(|g| g.degree == d + 2).collect();
    // Coefficient of the new generator in ∂²g is Σ_h (∂g)_h c_h.
    let columns: Vec<Vec<Scalar>> = sources
        .iter()
        .map(|h| {
            above
                .iter()
                .map(|g| {
                    state
                        .differential
                        .get(&g.id)
                        .and_then(|c| c.get(&h.id).cloned())
                        .unwrap_or_else(|| field.zero())
                })
                .collect()
        })
        .collect();
    let mut incoming = Chain::zero();
    for v in linalg::kernel(field, above.len(), &columns) {
        let s = random_scalar(rng, field, false);
        for (h, x) in sources.iter().zip(&v) {
            incoming.add_term(h.id.clone(), x * &s);
        }
    }
    Some(EventKind::EntryBelow {
        generator: Generator::new(new_id("e"), a, d),
        incoming,
    })
}

/// New generator on the upper bound whose boundary is a random cycle.
fn entry_above_event<R: Rng>(rng: &mut R, state: &State, new_id: &mut impl FnMut(&str) -> String) -> Option<EventKind> {
    let b = state.window.upper.finite()?.clone();
    if state.generators.values().any(|g| g.action == b) {
        return None;
    }
    let d = rng.gen_range(0..=2);
    let ids: Vec<String> = state.generators.keys().cloned().collect();
    let candidates: Vec<usize> = ids
        .iter()
        .enumerate()
        .filter(|(_, id)| state.generators[*id].degree == d - 1)
        .map(|(i, _)| i)
        .collect();
    let boundary = random_cycle(rng, state.field, &ids, &state.differential, &candidates);
    Some(EventKind::EntryAbove {
        generator: Generator::new(new_id("u"), b, d),
        boundary,
    })
}

/// Random finite-window complex suitable as a timeline start: `n`
/// generators strictly inside `[0, 20)`.
pub fn random_windowed_complex<R: Rng>(rng: &mut R, field: FieldSpec, n: usize) -> FilteredComplex {
    let mut used = BTreeSet::new();
    let specs = (0..n)
        .map(|_| {
            let a = loop {
                let a = rat(rng.gen_range(1..160), 8);
                if used.insert(a.clone()) {
                    break a;
                }
            };
            (a, rng.gen_range(0..=2))
        })
        .collect();
    let window = Window::new(int(0).into(), int(20).into()).expect("valid window");
    random_complex_on(rng, field, window, specs)
}
