//! Piecewise-continuous (PWC) families of filtered complexes.
//!
//! A [`Timeline`] scripts a family: linear drift segments move generator
//! actions and window bounds, and singular events (handle-slides,
//! births/deaths, entries/exits at either end of the window) happen at
//! isolated times. Between scripted entries nothing moves.
//!
//! [`simulate`] replays a timeline exactly and samples the family at every
//! breakpoint that is not an event time and at the midpoint of every interval
//! between consecutive breakpoints. The midpoints double as the `t ± ε`
//! samples around events. [`check_transitions`] then compares each event's
//! one-sided limits against the rules for how barcodes change at simple
//! bifurcations, and checks that bars move continuously in between.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::barcode::{self, Bar, Barcode};
use crate::coefficients::{FieldSpec, Rational, Scalar};
use crate::complex::{ActionValue, Chain, ComplexError, FilteredComplex, Generator, Window};
use crate::displacement::PiecewiseLinear;

/// Linear motion on `[from, to]`. Generators without an entry in `rates`
/// stay put. Infinite window bounds must have rate zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DriftSegment {
    pub from: Rational,
    pub to: Rational,
    pub rates: BTreeMap<String, Rational>,
    pub lower_rate: Rational,
    pub upper_rate: Rational,
    /// Declares that the window shrinks at the oscillation rate on this
    /// segment; only consulted by [`drift_speed_audit`].
    pub shrink_with_oscillation: bool,
}

impl DriftSegment {
    pub fn new(from: Rational, to: Rational) -> Self {
        DriftSegment {
            from,
            to,
            rates: BTreeMap::new(),
            lower_rate: Rational::zero(),
            upper_rate: Rational::zero(),
            shrink_with_oscillation: false,
        }
    }

    pub fn rate(&self, id: &str) -> Rational {
        self.rates.get(id).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn with_rate(mut self, id: impl Into<String>, r: Rational) -> Self {
        self.rates.insert(id.into(), r);
        self
    }

    pub fn with_window_rates(mut self, lower: Rational, upper: Rational) -> Self {
        self.lower_rate = lower;
        self.upper_rate = upper;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventKind {
    /// Base change `e'_target = e_target + unit·addend`.
    HandleSlide {
        target: String,
        addend: Chain,
        unit: Scalar,
    },
    /// Adjoins `x`, `y` at a common action with `∂x = unit·y`.
    Birth {
        x: Generator,
        y: Generator,
        unit: Scalar,
    },
    /// Removes a canceling pair `∂x = u·y` sitting as a direct summand.
    Death { x: String, y: String },
    ExitBelow { id: String },
    /// Enters at the lower bound; `incoming` lists the generators whose
    /// differential gains a multiple of the new generator.
    EntryBelow { generator: Generator, incoming: Chain },
    ExitAbove { id: String },
    EntryAbove { generator: Generator, boundary: Chain },
}

impl EventKind {
    pub fn name(&self) -> &'static str {
        match self {
            EventKind::HandleSlide { .. } => "handle_slide",
            EventKind::Birth { .. } => "birth",
            EventKind::Death { .. } => "death",
            EventKind::ExitBelow { .. } => "exit_below",
            EventKind::EntryBelow { .. } => "entry_below",
            EventKind::ExitAbove { .. } => "exit_above",
            EventKind::EntryAbove { .. } => "entry_above",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularEvent {
    pub time: Rational,
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TimelineEntry {
    Drift(DriftSegment),
    Event(SingularEvent),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Timeline {
    pub start: Rational,
    pub entries: Vec<TimelineEntry>,
}

impl Timeline {
    pub fn new(start: Rational) -> Self {
        Timeline {
            start,
            entries: Vec::new(),
        }
    }

    pub fn drift(mut self, seg: DriftSegment) -> Self {
        self.entries.push(TimelineEntry::Drift(seg));
        self
    }

    pub fn event(mut self, time: Rational, kind: EventKind) -> Self {
        self.entries.push(TimelineEntry::Event(SingularEvent { time, kind }));
        self
    }

    pub fn events(&self) -> impl Iterator<Item = (usize, &SingularEvent)> {
        self.entries.iter().enumerate().filter_map(|(i, e)| match e {
            TimelineEntry::Event(ev) => Some((i, ev)),
            _ => None,
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PwcError {
    #[error("entry {index}: a second bifurcation at time {time}")]
    SimultaneousBifurcations { index: usize, time: Rational },
    #[error("entry {index}: event precondition violated: {reason}")]
    EventPreconditionViolated { index: usize, reason: String },
    #[error("action window violated at time {time}: {detail}")]
    ActionWindowViolation { time: Rational, detail: String },
    #[error("entry {index}: trajectories of {first} and {second} cross at time {time}")]
    NonGenericCrossing {
        index: usize,
        first: String,
        second: String,
        time: Rational,
    },
    #[error("entry {index}: malformed timeline: {reason}")]
    Malformed { index: usize, reason: String },
    #[error("invalid complex at time {time}: {source}")]
    InvalidComplex { time: Rational, source: ComplexError },
}

/// Raw family state. Unlike a [`FilteredComplex`] it may be singular (a
/// generator sitting on the upper bound, a birth pair at equal action),
/// which happens exactly at event times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub field: FieldSpec,
    pub window: Window,
    pub generators: BTreeMap<String, Generator>,
    pub differential: BTreeMap<String, Chain>,
}

impl State {
    pub fn from_complex(c: &FilteredComplex) -> Self {
        State {
            field: c.field(),
            window: c.window().clone(),
            generators: c.generators().iter().map(|g| (g.id.clone(), g.clone())).collect(),
            differential: c.differential(),
        }
    }

    pub fn to_complex(&self) -> Result<FilteredComplex, ComplexError> {
        FilteredComplex::build(
            self.field,
            self.window.clone(),
            self.generators.values().cloned().collect(),
            self.differential.clone(),
        )
    }

    pub fn action(&self, id: &str) -> Option<&Rational> {
        self.generators.get(id).map(|g| &g.action)
    }

    fn boundary(&self, id: &str) -> Chain {
        self.differential.get(id).cloned().unwrap_or_default()
    }

    fn at_action<'a>(&'a self, level: &'a Rational) -> impl Iterator<Item = &'a Generator> + 'a {
        self.generators.values().filter(move |g| g.action == *level)
    }

    fn advanced(&self, seg: &DriftSegment, dt: &Rational) -> State {
        let mut s = self.clone();
        for g in s.generators.values_mut() {
            g.action = &g.action + seg.rate(&g.id) * dt;
        }
        if let ActionValue::Finite(a) = &mut s.window.lower {
            *a = &*a + &seg.lower_rate * dt;
        }
        if let ActionValue::Finite(b) = &mut s.window.upper {
            *b = &*b + &seg.upper_rate * dt;
        }
        s
    }

    fn remove(&mut self, id: &str) {
        self.generators.remove(id);
        self.differential.remove(id);
        for chain in self.differential.values_mut() {
            chain.remove(id);
        }
        self.differential.retain(|_, c| !c.is_zero());
    }
}

/// A bar labelled by the generators realizing its endpoints in the
/// reduction's pairing; `end_id` is `None` for infinite bars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledBar {
    pub start_id: String,
    pub end_id: Option<String>,
}

fn labeled_pairing(c: &FilteredComplex) -> Vec<LabeledBar> {
    let form = barcode::canonical_form(c);
    let mut v: Vec<LabeledBar> = form
        .pairs
        .iter()
        .map(|p| LabeledBar {
            start_id: p.killed.clone(),
            end_id: Some(p.killer.clone()),
        })
        .chain(form.unpaired.iter().map(|id| LabeledBar {
            start_id: id.clone(),
            end_id: None,
        }))
        .collect();
    v.sort_by(|a, b| a.start_id.cmp(&b.start_id));
    v
}

/// Evaluates labelled bars at the actions of `state`. The result may hold
/// zero-length bars when paired generators share an action.
pub fn transport(pairing: &[LabeledBar], state: &State) -> Option<Barcode> {
    let mut bars = Vec::new();
    for lb in pairing {
        let s = state.generators.get(&lb.start_id)?;
        let end = match &lb.end_id {
            Some(id) => ActionValue::Finite(state.generators.get(id)?.action.clone()),
            None => ActionValue::PosInf,
        };
        bars.push(Bar {
            start: s.action.clone(),
            end,
            degree: s.degree,
        });
    }
    Some(Barcode::new(bars))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    Breakpoint,
    Interior,
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub t: Rational,
    pub kind: SampleKind,
    pub complex: FilteredComplex,
    pub barcode: Barcode,
    pub pairing: Vec<LabeledBar>,
}

/// Maximal interval between consecutive breakpoints.
#[derive(Debug, Clone)]
pub struct Piece {
    pub from: Rational,
    pub to: Rational,
    pub state_from: State,
    /// `None` for static gaps.
    pub drift: Option<DriftSegment>,
}

impl Piece {
    pub fn state_at(&self, t: &Rational) -> State {
        match &self.drift {
            Some(seg) => self.state_from.advanced(seg, &(t - &self.from)),
            None => self.state_from.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EventRecord {
    /// Position of the event in the timeline.
    pub index: usize,
    pub time: Rational,
    pub kind: EventKind,
    pub before: State,
    pub after: State,
    /// Samples at `t - ε` and `t + ε`.
    pub before_sample: usize,
    pub after_sample: usize,
}

#[derive(Debug, Clone)]
pub struct FamilyTrace {
    pub samples: Vec<Sample>,
    pub pieces: Vec<Piece>,
    pub events: Vec<EventRecord>,
    pub final_state: State,
}

impl FamilyTrace {
    pub fn final_complex(&self) -> Result<FilteredComplex, ComplexError> {
        self.final_state.to_complex()
    }
}

fn sign(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

struct Simulator {
    state: State,
    time: Rational,
    pieces: Vec<Piece>,
    events: Vec<(usize, Rational, EventKind, State, State)>,
    last_event_time: Option<Rational>,
    order: BTreeMap<(String, String), i8>,
}

impl Simulator {
    fn static_until(&mut self, t: &Rational) {
        if *t > self.time {
            self.pieces.push(Piece {
                from: self.time.clone(),
                to: t.clone(),
                state_from: self.state.clone(),
                drift: None,
            });
            self.time = t.clone();
        }
    }

    fn drift(&mut self, index: usize, seg: &DriftSegment) -> Result<(), PwcError> {
        let malformed = |reason: String| PwcError::Malformed { index, reason };
        if seg.from < self.time {
            return Err(malformed(format!("drift starts at {} before time {}", seg.from, self.time)));
        }
        if seg.to <= seg.from {
            return Err(malformed("drift segment has non-positive length".into()));
        }
        for id in seg.rates.keys() {
            if !self.state.generators.contains_key(id) {
                return Err(malformed(format!("rate for unknown generator {id}")));
            }
        }
        if (!self.state.window.lower.is_finite() && !seg.lower_rate.is_zero())
            || (!self.state.window.upper.is_finite() && !seg.upper_rate.is_zero())
        {
            return Err(malformed("infinite window bound with nonzero rate".into()));
        }
        self.static_until(&seg.from);
        let start = self.state.clone();
        let end = start.advanced(seg, &(&seg.to - &seg.from));
        if end.window.lower >= end.window.upper {
            return Err(PwcError::ActionWindowViolation {
                time: seg.to.clone(),
                detail: "window collapses".into(),
            });
        }
        let violation = |time: &Rational, id: &str, what: &str| PwcError::ActionWindowViolation {
            time: time.clone(),
            detail: format!("{id} {what}"),
        };
        for (id, g0) in &start.generators {
            let g1 = &end.generators[id];
            if let (ActionValue::Finite(a0), ActionValue::Finite(a1)) = (&start.window.lower, &end.window.lower) {
                if &g0.action < a0 {
                    return Err(violation(&seg.from, id, "lies below the window"));
                }
                if &g1.action < a1 {
                    return Err(violation(&seg.to, id, "leaves the window below"));
                }
            }
            if let (ActionValue::Finite(b0), ActionValue::Finite(b1)) = (&start.window.upper, &end.window.upper) {
                let (h0, h1) = (b0 - &g0.action, b1 - &g1.action);
                if h0.is_negative() || h1.is_negative() || (h0.is_zero() && h1.is_zero()) {
                    let t = if h0.is_negative() || h0.is_zero() { &seg.from } else { &seg.to };
                    return Err(violation(t, id, "leaves the window above"));
                }
            }
        }
        let ids: Vec<&String> = start.generators.keys().collect();
        for (x, chain) in &start.differential {
            for (y, _) in chain.iter() {
                let d0 = &start.generators[x].action - &start.generators[y].action;
                let d1 = &end.generators[x].action - &end.generators[y].action;
                if d0.is_negative() || d1.is_negative() || (d0.is_zero() && d1.is_zero()) {
                    return Err(PwcError::NonGenericCrossing {
                        index,
                        first: x.clone(),
                        second: y.clone(),
                        time: if d1.is_positive() { seg.from.clone() } else { seg.to.clone() },
                    });
                }
            }
        }
        for (i, x) in ids.iter().enumerate() {
            for y in &ids[i + 1..] {
                let s0 = sign(&(&start.generators[*x].action - &start.generators[*y].action));
                let s1 = sign(&(&end.generators[*x].action - &end.generators[*y].action));
                let key = ((*x).clone(), (*y).clone());
                let prior = self.order.get(&key).copied().unwrap_or(0);
                let flips = s0 * s1 < 0 || (s1 != 0 && prior * s1 < 0) || (s0 != 0 && prior * s0 < 0);
                if flips {
                    return Err(PwcError::NonGenericCrossing {
                        index,
                        first: (*x).clone(),
                        second: (*y).clone(),
                        time: seg.to.clone(),
                    });
                }
                for s in [s0, s1] {
                    if s != 0 {
                        self.order.insert(key.clone(), s);
                    }
                }
            }
        }
        self.pieces.push(Piece {
            from: seg.from.clone(),
            to: seg.to.clone(),
            state_from: start,
            drift: Some(seg.clone()),
        });
        self.state = end;
        self.time = seg.to.clone();
        Ok(())
    }

    fn event(&mut self, index: usize, ev: &SingularEvent, start: &Rational) -> Result<(), PwcError> {
        if ev.time < self.time {
            return Err(PwcError::Malformed {
                index,
                reason: format!("event at {} before time {}", ev.time, self.time),
            });
        }
        if ev.time == *start {
            return Err(PwcError::Malformed {
                index,
                reason: "event at the start time has no preceding interval".into(),
            });
        }
        if self.last_event_time.as_ref() == Some(&ev.time) {
            return Err(PwcError::SimultaneousBifurcations {
                index,
                time: ev.time.clone(),
            });
        }
        self.static_until(&ev.time);
        let before = self.state.clone();
        let after = apply_event(&before, &ev.kind).map_err(|reason| PwcError::EventPreconditionViolated { index, reason })?;
        for id in before.generators.keys() {
            if !after.generators.contains_key(id) {
                self.order.retain(|(x, y), _| x != id && y != id);
            }
        }
        self.events.push((index, ev.time.clone(), ev.kind.clone(), before, after.clone()));
        self.state = after;
        self.last_event_time = Some(ev.time.clone());
        Ok(())
    }
}

fn unique_at(state: &State, level: &Rational, allowed: &[&str]) -> Result<(), String> {
    let others: Vec<&str> = state
        .at_action(level)
        .map(|g| g.id.as_str())
        .filter(|id| !allowed.contains(id))
        .collect();
    if others.is_empty() {
        Ok(())
    } else {
        Err(format!("other generators share the event action {level}: {}", others.join(", ")))
    }
}

fn check_chain(state: &State, chain: &Chain, degree: i64) -> Result<(), String> {
    for (id, s) in chain.iter() {
        let g = state.generators.get(id).ok_or_else(|| format!("unknown generator {id}"))?;
        if g.degree != degree {
            return Err(format!("{id} has degree {}, expected {degree}", g.degree));
        }
        if s.field() != state.field {
            return Err(format!("coefficient of {id} is not in {}", state.field));
        }
    }
    Ok(())
}

/// Applies one singular event to the event-time state.
pub fn apply_event(state: &State, kind: &EventKind) -> Result<State, String> {
    let mut s = state.clone();
    match kind {
        EventKind::HandleSlide { target, addend, unit } => {
            let tg = state.generators.get(target).ok_or_else(|| format!("unknown target {target}"))?;
            if unit.is_zero() || unit.field() != state.field {
                return Err("handle-slide unit must be a nonzero scalar of the complex's field".into());
            }
            if addend.get(target).is_some() {
                return Err("handle-slide addend contains its target".into());
            }
            check_chain(state, addend, tg.degree)?;
            for (id, _) in addend.iter() {
                if state.generators[id].action > tg.action {
                    return Err(format!("addend {id} has larger action than target {target}"));
                }
            }
            let c = state.to_complex().map_err(|e| format!("complex invalid at handle-slide: {e}"))?;
            let slid = c.handle_slide(target, addend, unit).map_err(|e| e.to_string())?;
            s.differential = slid.differential();
        }
        EventKind::Birth { x, y, unit } => {
            if state.generators.contains_key(&x.id) || state.generators.contains_key(&y.id) || x.id == y.id {
                return Err("birth generators must carry new, distinct ids".into());
            }
            if x.action != y.action {
                return Err("birth pair must share its action".into());
            }
            if x.degree != y.degree + 1 {
                return Err("birth requires deg(x) = deg(y) + 1".into());
            }
            if !state.window.contains(&x.action) {
                return Err(format!("birth action {} outside the window", x.action));
            }
            if unit.is_zero() || unit.field() != state.field {
                return Err("birth unit must be a nonzero scalar of the complex's field".into());
            }
            unique_at(state, &x.action, &[])?;
            s.generators.insert(x.id.clone(), x.clone());
            s.generators.insert(y.id.clone(), y.clone());
            s.differential.insert(x.id.clone(), Chain::term(y.id.clone(), unit.clone()));
        }
        EventKind::Death { x, y } => {
            let (gx, gy) = match (state.generators.get(x), state.generators.get(y)) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err("death of unknown generators".into()),
            };
            if gx.action != gy.action {
                return Err(format!("death pair has distinct actions {} and {}", gx.action, gy.action));
            }
            unique_at(state, &gx.action, &[x, y])?;
            let dx = state.boundary(x);
            if dx.len() != 1 || dx.get(y).is_none() {
                return Err(format!("death pair not in canceling position: d({x}) = {dx}"));
            }
            if !state.boundary(y).is_zero() {
                return Err(format!("death pair not in canceling position: d({y}) != 0"));
            }
            for (z, chain) in state.differential.iter().filter(|(z, _)| *z != x) {
                if chain.get(x).is_some() || chain.get(y).is_some() {
                    return Err(format!("death pair not a direct summand: d({z}) = {chain}"));
                }
            }
            s.remove(x);
            s.remove(y);
        }
        EventKind::ExitBelow { id } => {
            let g = state.generators.get(id).ok_or_else(|| format!("unknown generator {id}"))?;
            if state.window.lower != ActionValue::Finite(g.action.clone()) {
                return Err(format!("{id} is at {} but the lower bound is {}", g.action, state.window.lower));
            }
            unique_at(state, &g.action, &[id])?;
            s.remove(id);
        }
        EventKind::EntryBelow { generator, incoming } => {
            if state.generators.contains_key(&generator.id) {
                return Err(format!("{} already present", generator.id));
            }
            if state.window.lower != ActionValue::Finite(generator.action.clone()) {
                return Err("entering generator must sit on the lower bound".into());
            }
            unique_at(state, &generator.action, &[])?;
            check_chain(state, incoming, generator.degree + 1)?;
            s.generators.insert(generator.id.clone(), generator.clone());
            for (h, coeff) in incoming.iter() {
                let mut chain = s.boundary(h);
                chain.add_term(generator.id.clone(), coeff.clone());
                s.differential.insert(h.clone(), chain);
            }
            s.differential.retain(|_, c| !c.is_zero());
            s.to_complex().map_err(|e| format!("entry below breaks the complex: {e}"))?;
        }
        EventKind::ExitAbove { id } => {
            let g = state.generators.get(id).ok_or_else(|| format!("unknown generator {id}"))?;
            if state.window.upper != ActionValue::Finite(g.action.clone()) {
                return Err(format!("{id} is at {} but the upper bound is {}", g.action, state.window.upper));
            }
            unique_at(state, &g.action, &[id])?;
            s.remove(id);
        }
        EventKind::EntryAbove { generator, boundary } => {
            if state.generators.contains_key(&generator.id) {
                return Err(format!("{} already present", generator.id));
            }
            if state.window.upper != ActionValue::Finite(generator.action.clone()) {
                return Err("entering generator must sit on the upper bound".into());
            }
            unique_at(state, &generator.action, &[])?;
            check_chain(state, boundary, generator.degree - 1)?;
            s.generators.insert(generator.id.clone(), generator.clone());
            if !boundary.is_zero() {
                s.differential.insert(generator.id.clone(), boundary.clone());
            }
            let mut widened = s.clone();
            widened.window = Window::unbounded();
            widened
                .to_complex()
                .map_err(|e| format!("entry above breaks the complex: {e}"))?;
        }
    }
    Ok(s)
}

/// Replays a timeline from a valid initial complex.
pub fn simulate(initial: &FilteredComplex, timeline: &Timeline) -> Result<FamilyTrace, PwcError> {
    let mut sim = Simulator {
        state: State::from_complex(initial),
        time: timeline.start.clone(),
        pieces: Vec::new(),
        events: Vec::new(),
        last_event_time: None,
        order: BTreeMap::new(),
    };
    for (index, entry) in timeline.entries.iter().enumerate() {
        match entry {
            TimelineEntry::Drift(seg) => sim.drift(index, seg)?,
            TimelineEntry::Event(ev) => sim.event(index, ev, &timeline.start)?,
        }
    }
    if sim.last_event_time.as_ref() == Some(&sim.time) {
        let t = &sim.time + Rational::from_integer(1.into());
        sim.static_until(&t);
    }

    let event_times: BTreeSet<Rational> = sim.events.iter().map(|e| e.1.clone()).collect();
    let mut samples: Vec<Sample> = Vec::new();
    let take = |t: &Rational, kind: SampleKind, state: &State, samples: &mut Vec<Sample>| -> Result<usize, PwcError> {
        let complex = state.to_complex().map_err(|e| match e {
            ComplexError::ActionOutsideWindow { .. } => PwcError::ActionWindowViolation {
                time: t.clone(),
                detail: e.to_string(),
            },
            other => PwcError::InvalidComplex {
                time: t.clone(),
                source: other,
            },
        })?;
        let pairing = labeled_pairing(&complex);
        let barcode = barcode::barcode(&complex);
        samples.push(Sample {
            t: t.clone(),
            kind,
            complex,
            barcode,
            pairing,
        });
        Ok(samples.len() - 1)
    };
    let two = Rational::from_integer(2.into());
    let mut interior_of_piece = Vec::new();
    if sim.pieces.is_empty() {
        take(&timeline.start, SampleKind::Breakpoint, &sim.state, &mut samples)?;
    }
    for (k, piece) in sim.pieces.iter().enumerate() {
        if k == 0 && !event_times.contains(&piece.from) {
            take(&piece.from, SampleKind::Breakpoint, &piece.state_from, &mut samples)?;
        }
        let mid = (&piece.from + &piece.to) / &two;
        interior_of_piece.push(take(&mid, SampleKind::Interior, &piece.state_at(&mid), &mut samples)?);
        if !event_times.contains(&piece.to) {
            take(&piece.to, SampleKind::Breakpoint, &piece.state_at(&piece.to), &mut samples)?;
        }
    }
    let events = sim
        .events
        .into_iter()
        .map(|(index, time, kind, before, after)| {
            let before_piece = sim.pieces.iter().position(|p| p.to == time).expect("piece before event");
            let after_piece = sim.pieces.iter().position(|p| p.from == time).expect("piece after event");
            EventRecord {
                index,
                time,
                kind,
                before,
                after,
                before_sample: interior_of_piece[before_piece],
                after_sample: interior_of_piece[after_piece],
            }
        })
        .collect();
    Ok(FamilyTrace {
        samples,
        pieces: sim.pieces,
        events,
        final_state: sim.state,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionCheck {
    /// Timeline index of the event, or `None` for a continuity check.
    pub index: Option<usize>,
    pub time: Rational,
    pub rule: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for TransitionCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.index {
            Some(i) => format!("event {i}"),
            None => "drift".to_string(),
        };
        let verdict = if self.passed { "pass" } else { "FAIL" };
        write!(f, "t={} {what} {}: {verdict}", self.time, self.rule)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransitionReport {
    pub checks: Vec<TransitionCheck>,
}

impl TransitionReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &TransitionCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn remove_one(bars: &mut Vec<Bar>, bar: &Bar) -> bool {
    match bars.iter().position(|b| b == bar) {
        Some(i) => {
            bars.remove(i);
            true
        }
        None => false,
    }
}

fn show(b: &Barcode) -> String {
    b.bars().iter().map(Bar::to_string).collect::<Vec<_>>().join("; ")
}

/// Predicts the barcode on one side of an exit/entry from the other side.
/// `level` is the event action, `below` selects the lower-bound rule.
fn exit_rule(from: &Barcode, level: &Rational, below: bool) -> Result<(Barcode, String), String> {
    let lvl = ActionValue::Finite(level.clone());
    let candidates: Vec<&Bar> = from
        .bars()
        .iter()
        .filter(|b| b.start == *level || (!below && b.end == lvl))
        .collect();
    if candidates.len() != 1 {
        return Err(format!("{} bars touch the event level {level}", candidates.len()));
    }
    let bar = candidates[0].clone();
    let mut bars = from.bars().to_vec();
    remove_one(&mut bars, &bar);
    let note = if below {
        match bar.end.finite() {
            Some(e) => {
                let replacement = Bar::infinite(e.clone(), bar.degree + 1);
                let note = format!("{bar} replaced by {replacement}");
                bars.push(replacement);
                note
            }
            None => format!("{bar} disappears"),
        }
    } else if bar.end == lvl {
        let replacement = Bar::infinite(bar.start.clone(), bar.degree);
        let note = format!("{bar} becomes {replacement}");
        bars.push(replacement);
        note
    } else {
        format!("{bar} disappears")
    };
    Ok((Barcode::new(bars), note))
}

/// Checks every event against the bifurcation rules and every drift interval
/// for continuity of bar endpoints.
pub fn check_transitions(trace: &FamilyTrace) -> TransitionReport {
    let mut report = TransitionReport::default();
    for ev in &trace.events {
        let before = &trace.samples[ev.before_sample];
        let after = &trace.samples[ev.after_sample];
        let (lim_before, lim_after) = match (transport(&before.pairing, &ev.before), transport(&after.pairing, &ev.after)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                report.checks.push(TransitionCheck {
                    index: Some(ev.index),
                    time: ev.time.clone(),
                    rule: ev.kind.name().into(),
                    passed: false,
                    detail: "sample pairing does not match the event-time generators".into(),
                });
                continue;
            }
        };
        let mut check = |rule: &str, passed: bool, detail: String| {
            report.checks.push(TransitionCheck {
                index: Some(ev.index),
                time: ev.time.clone(),
                rule: rule.into(),
                passed,
                detail,
            })
        };
        match &ev.kind {
            EventKind::HandleSlide { .. } => {
                let same = lim_before == lim_after && before.barcode.len() == after.barcode.len();
                let mut detail = String::new();
                if !same {
                    detail = format!("{} vs {}", show(&lim_before), show(&lim_after));
                }
                if let (Ok(cb), Ok(ca)) = (ev.before.to_complex(), ev.after.to_complex()) {
                    let (bb, ba) = (barcode::barcode(&cb), barcode::barcode(&ca));
                    if bb != ba {
                        detail = format!("at event time {} vs {}", show(&bb), show(&ba));
                        check("unaffected", false, detail);
                        continue;
                    }
                }
                check("unaffected", same, detail);
            }
            EventKind::Birth { x, y, .. } => {
                let mut predicted = lim_before.bars().to_vec();
                predicted.push(Bar {
                    start: x.action.clone(),
                    end: ActionValue::Finite(x.action.clone()),
                    degree: y.degree,
                });
                let predicted = Barcode::new(predicted);
                let ok_limits = predicted == lim_after;
                let sx = after.complex.generator(&x.id).map(|g| g.action.clone());
                let sy = after.complex.generator(&y.id).map(|g| g.action.clone());
                let visible = match (sx, sy) {
                    (Ok(ax), Ok(ay)) => after.barcode.bars().contains(&Bar::finite(ay, ax, y.degree)),
                    _ => false,
                };
                let detail = if ok_limits && visible {
                    String::new()
                } else {
                    format!("expected {} got {}", show(&predicted), show(&lim_after))
                };
                check("bar added", ok_limits && visible, detail);
            }
            EventKind::Death { x, y } => {
                let gx = &ev.before.generators[x];
                let gy = &ev.before.generators[y];
                let mut predicted = lim_after.bars().to_vec();
                predicted.push(Bar {
                    start: gx.action.clone(),
                    end: ActionValue::Finite(gx.action.clone()),
                    degree: gy.degree,
                });
                let predicted = Barcode::new(predicted);
                let ok_limits = predicted == lim_before;
                let sx = before.complex.generator(x).map(|g| g.action.clone());
                let sy = before.complex.generator(y).map(|g| g.action.clone());
                let visible = match (sx, sy) {
                    (Ok(ax), Ok(ay)) => before.barcode.bars().contains(&Bar::finite(ay, ax, gy.degree)),
                    _ => false,
                };
                let detail = if ok_limits && visible {
                    String::new()
                } else {
                    format!("expected {} got {}", show(&predicted), show(&lim_before))
                };
                check("bar removed", ok_limits && visible, detail);
            }
            EventKind::ExitBelow { id } | EventKind::ExitAbove { id } => {
                let below = matches!(ev.kind, EventKind::ExitBelow { .. });
                let level = ev.before.generators[id].action.clone();
                match exit_rule(&lim_before, &level, below) {
                    Ok((predicted, note)) => {
                        let ok = predicted == lim_after;
                        let detail = if ok { note } else { format!("{note}; expected {} got {}", show(&predicted), show(&lim_after)) };
                        check(ev.kind.name(), ok, detail);
                    }
                    Err(e) => check(ev.kind.name(), false, e),
                }
            }
            EventKind::EntryBelow { generator, .. } | EventKind::EntryAbove { generator, .. } => {
                let below = matches!(ev.kind, EventKind::EntryBelow { .. });
                match exit_rule(&lim_after, &generator.action, below) {
                    Ok((predicted, note)) => {
                        let ok = predicted == lim_before;
                        let detail = if ok { note } else { format!("{note}; expected {} got {}", show(&predicted), show(&lim_before)) };
                        check(ev.kind.name(), ok, detail);
                    }
                    Err(e) => check(ev.kind.name(), false, e),
                }
            }
        }
    }

    // Continuity: the pairing of each interior sample, evaluated at the
    // bounding breakpoints, must reproduce the barcodes sampled there.
    let breakpoint_sample: BTreeMap<&Rational, &Sample> = trace
        .samples
        .iter()
        .filter(|s| s.kind == SampleKind::Breakpoint)
        .map(|s| (&s.t, s))
        .collect();
    for piece in &trace.pieces {
        let mid_t = (&piece.from + &piece.to) / Rational::from_integer(2.into());
        let Some(mid) = trace.samples.iter().find(|s| s.kind == SampleKind::Interior && s.t == mid_t) else {
            continue;
        };
        for end in [&piece.from, &piece.to] {
            let Some(sample) = breakpoint_sample.get(end) else {
                continue;
            };
            let limit = transport(&mid.pairing, &piece.state_at(end));
            let ok = limit.as_ref() == Some(&sample.barcode);
            report.checks.push(TransitionCheck {
                index: None,
                time: end.clone(),
                rule: "continuous".into(),
                passed: ok,
                detail: if ok {
                    String::new()
                } else {
                    format!(
                        "limit {} vs sampled {}",
                        limit.map(|b| show(&b)).unwrap_or_default(),
                        show(&sample.barcode)
                    )
                },
            });
        }
    }
    report
}

/// CSV rows `t,bar_id,start,end`, one per bar per sample; a bar is named by
/// the generator at its starting point.
pub fn vineyard_csv(trace: &FamilyTrace) -> String {
    let mut out = String::from("t,bar_id,start,end\n");
    for s in &trace.samples {
        let state = State::from_complex(&s.complex);
        for lb in &s.pairing {
            let start = &state.generators[&lb.start_id].action;
            let end = match &lb.end_id {
                Some(id) => state.generators[id].action.to_string(),
                None => "inf".to_string(),
            };
            out.push_str(&format!("{},{},{},{}\n", s.t, lb.start_id, start, end));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuditKind {
    RateTooFast,
    WindowShrinkMismatch,
    GapShrinksTooFast,
    ForbiddenEntry,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditFinding {
    pub index: usize,
    pub kind: AuditKind,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub segments_checked: usize,
    pub findings: Vec<AuditFinding>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Audits declared drift rates against an oscillation rate `ω(t)`:
///
/// * every generator moves strictly slower than `ω`;
/// * on segments marked `shrink_with_oscillation` the window shrinks at
///   exactly `ω`;
/// * on those segments the gap between any two generators shrinks no faster
///   than `ω`;
/// * an entry is flagged when the rates of the following drift do not carry
///   the new generator into the window.
pub fn drift_speed_audit(initial: &FilteredComplex, timeline: &Timeline, omega: &PiecewiseLinear) -> AuditReport {
    let mut report = AuditReport::default();
    let mut ids: BTreeMap<String, Rational> = initial
        .generators()
        .iter()
        .map(|g| (g.id.clone(), g.action.clone()))
        .collect();
    for (index, entry) in timeline.entries.iter().enumerate() {
        match entry {
            TimelineEntry::Drift(seg) => {
                report.segments_checked += 1;
                let lo = omega.min_on(&seg.from, &seg.to);
                for id in ids.keys() {
                    let r = seg.rate(id);
                    if r.abs() >= lo {
                        report.findings.push(AuditFinding {
                            index,
                            kind: AuditKind::RateTooFast,
                            detail: format!("|d{id}/dt| = {} is not below the oscillation rate {lo}", r.abs()),
                        });
                    }
                }
                if seg.shrink_with_oscillation {
                    let shrink = &seg.lower_rate - &seg.upper_rate;
                    match omega.constant_on(&seg.from, &seg.to) {
                        Some(w) if w == shrink => {}
                        _ => report.findings.push(AuditFinding {
                            index,
                            kind: AuditKind::WindowShrinkMismatch,
                            detail: format!("window shrinks at {shrink}, oscillation rate is not constantly equal"),
                        }),
                    }
                    let keys: Vec<&String> = ids.keys().collect();
                    for (i, x) in keys.iter().enumerate() {
                        for y in &keys[i + 1..] {
                            let (lx, ly) = (&ids[*x], &ids[*y]);
                            let (lo_id, hi_id) = if lx <= ly { (x, y) } else { (y, x) };
                            let growth = seg.rate(hi_id) - seg.rate(lo_id);
                            if growth < -lo.clone() {
                                report.findings.push(AuditFinding {
                                    index,
                                    kind: AuditKind::GapShrinksTooFast,
                                    detail: format!("gap {hi_id} - {lo_id} changes at {growth}, below -{lo}"),
                                });
                            }
                        }
                    }
                }
                let dt = &seg.to - &seg.from;
                for (id, a) in ids.iter_mut() {
                    *a = &*a + seg.rate(id) * &dt;
                }
            }
            TimelineEntry::Event(ev) => match &ev.kind {
                EventKind::Birth { x, y, .. } => {
                    ids.insert(x.id.clone(), x.action.clone());
                    ids.insert(y.id.clone(), y.action.clone());
                }
                EventKind::Death { x, y } => {
                    ids.remove(x);
                    ids.remove(y);
                }
                EventKind::ExitBelow { id } | EventKind::ExitAbove { id } => {
                    ids.remove(id);
                }
                EventKind::EntryBelow { generator, .. } | EventKind::EntryAbove { generator, .. } => {
                    let below = matches!(ev.kind, EventKind::EntryBelow { .. });
                    let next = timeline.entries[index + 1..].iter().find_map(|e| match e {
                        TimelineEntry::Drift(s) => Some(s),
                        _ => None,
                    });
                    if let Some(seg) = next {
                        let r = seg.rate(&generator.id);
                        let enters = if below { r > seg.lower_rate } else { r < seg.upper_rate };
                        if !enters {
                            report.findings.push(AuditFinding {
                                index,
                                kind: AuditKind::ForbiddenEntry,
                                detail: format!(
                                    "{} cannot enter {}: its rate {r} does not carry it inside the window",
                                    generator.id,
                                    if below { "below" } else { "above" }
                                ),
                            });
                        }
                    }
                    ids.insert(generator.id.clone(), generator.action.clone());
                }
                EventKind::HandleSlide { .. } => {}
            },
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{int, rat};

    fn single(field: FieldSpec) -> FilteredComplex {
        FilteredComplex::build(
            field,
            Window::new(int(0).into(), int(10).into()).unwrap(),
            vec![Generator::new("c", int(2), 1)],
            BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn empty_timeline_single_sample() {
        let c = single(FieldSpec::F2);
        let trace = simulate(&c, &Timeline::new(int(0))).unwrap();
        assert_eq!(trace.samples.len(), 1);
        assert_eq!(trace.samples[0].complex, c);
    }

    #[test]
    fn birth_adds_short_bar() {
        let f = FieldSpec::F2;
        let c = single(f);
        let tl = Timeline::new(int(0))
            .event(
                int(1),
                EventKind::Birth {
                    x: Generator::new("x", int(5), 1),
                    y: Generator::new("y", int(5), 0),
                    unit: f.one(),
                },
            )
            .drift(DriftSegment::new(int(1), int(2)).with_rate("x", rat(1, 5)));
        let trace = simulate(&c, &tl).unwrap();
        let after = &trace.samples[trace.events[0].after_sample];
        assert!(after
            .barcode
            .bars()
            .contains(&Bar::finite(int(5), int(5) + rat(1, 10), 0)));
        let report = check_transitions(&trace);
        assert!(report.all_passed(), "{:?}", report);
    }

    #[test]
    fn simultaneous_events_rejected() {
        let f = FieldSpec::F2;
        let c = single(f);
        let slide = EventKind::HandleSlide {
            target: "c".into(),
            addend: Chain::zero(),
            unit: f.one(),
        };
        let tl = Timeline::new(int(0)).event(int(1), slide.clone()).event(int(1), slide);
        assert!(matches!(
            simulate(&c, &tl),
            Err(PwcError::SimultaneousBifurcations { index: 1, .. })
        ));
    }

    #[test]
    fn undeclared_crossing_rejected() {
        let f = FieldSpec::F2;
        let c = FilteredComplex::build(
            f,
            Window::unbounded(),
            vec![Generator::new("a", int(1), 0), Generator::new("b", int(2), 0)],
            BTreeMap::new(),
        )
        .unwrap();
        let tl = Timeline::new(int(0)).drift(DriftSegment::new(int(0), int(1)).with_rate("a", int(2)));
        assert!(matches!(simulate(&c, &tl), Err(PwcError::NonGenericCrossing { .. })));
    }
}
