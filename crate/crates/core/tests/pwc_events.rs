mod common;

use chordbar::barcode::{barcode, Bar, Barcode};
use chordbar::coefficients::{int, FieldSpec, Rational};
use chordbar::complex::{Chain, FilteredComplex, Generator, Window};
use chordbar::displacement::PiecewiseLinear;
use chordbar::fixtures;
use chordbar::pwc::{
    apply_event, check_transitions, drift_speed_audit, simulate, vineyard_csv, AuditKind, DriftSegment, EventKind,
    PwcError, State, Timeline,
};
use common::{q, rng, FIELDS};

fn complex(f: FieldSpec, lo: i64, hi: i64, gens: &[(&str, i64, i64)], diff: &[(&str, &str)]) -> FilteredComplex {
    FilteredComplex::build(
        f,
        Window::new(int(lo).into(), int(hi).into()).unwrap(),
        gens.iter().map(|(id, a, d)| Generator::new(*id, int(*a), *d)).collect(),
        diff.iter().map(|(x, y)| (x.to_string(), Chain::term(*y, f.one()))).collect(),
    )
    .unwrap()
}

fn barcode_at(trace: &chordbar::pwc::FamilyTrace, t: &Rational) -> Barcode {
    trace
        .samples
        .iter()
        .rev()
        .find(|s| s.t == *t)
        .map(|s| s.barcode.clone())
        .unwrap_or_else(|| panic!("no sample at {t}"))
}

fn birth_death(f: FieldSpec) -> (FilteredComplex, Timeline) {
    let c = complex(f, 0, 10, &[("c", 5, 0)], &[]);
    let t = Timeline::new(int(0))
        .drift(DriftSegment::new(int(0), int(1)))
        .event(
            int(1),
            EventKind::Birth {
                x: Generator::new("x", int(2), 1),
                y: Generator::new("y", int(2), 0),
                unit: f.one(),
            },
        )
        .drift(DriftSegment::new(int(1), int(2)).with_rate("x", q(1, 10)))
        .drift(DriftSegment::new(int(2), int(3)).with_rate("x", q(-1, 10)))
        .event(int(3), EventKind::Death { x: "x".into(), y: "y".into() })
        .drift(DriftSegment::new(int(3), int(4)));
    (c, t)
}

#[test]
fn birth_opens_a_short_bar_that_closes_at_death() {
    for f in FIELDS {
        let (c, t) = birth_death(f);
        let trace = simulate(&c, &t).unwrap();
        let report = check_transitions(&trace);
        assert!(report.all_passed(), "{report:?}");
        let at2 = barcode_at(&trace, &int(2));
        assert!(at2.bars().contains(&Bar::finite(int(2), q(21, 10), 0)), "{at2}");
        assert_eq!(barcode(&trace.final_complex().unwrap()), barcode(&c));
        assert!(vineyard_csv(&trace).starts_with("t,bar_id,start,end\n"));
    }
}

#[test]
fn exit_below_turns_finite_bar_into_infinite_bar() {
    for f in FIELDS {
        let c = complex(f, 0, 10, &[("y", 1, 0), ("x", 3, 1)], &[("x", "y")]);
        let t = Timeline::new(int(0))
            .drift(DriftSegment::new(int(0), int(1)).with_window_rates(int(1), int(0)))
            .event(int(1), EventKind::ExitBelow { id: "y".into() })
            .drift(DriftSegment::new(int(1), int(2)));
        let trace = simulate(&c, &t).unwrap();
        assert!(check_transitions(&trace).all_passed());
        let end = barcode(&trace.final_complex().unwrap());
        assert_eq!(end, Barcode::new(vec![Bar::infinite(int(3), 1)]));
    }
}

#[test]
fn exit_above_drops_the_top_generator() {
    for f in FIELDS {
        let c = complex(f, 0, 5, &[("y", 1, 0), ("x", 3, 1)], &[("x", "y")]);
        let t = Timeline::new(int(0))
            .drift(DriftSegment::new(int(0), int(1)).with_window_rates(int(0), int(-2)))
            .event(int(1), EventKind::ExitAbove { id: "x".into() })
            .drift(DriftSegment::new(int(1), int(2)));
        let trace = simulate(&c, &t).unwrap();
        assert!(check_transitions(&trace).all_passed());
        let end = barcode(&trace.final_complex().unwrap());
        assert_eq!(end, Barcode::new(vec![Bar::infinite(int(1), 0)]));
    }
}

#[test]
fn two_events_at_one_time_are_rejected() {
    let f = FieldSpec::Q;
    let c = complex(f, 0, 10, &[("a", 1, 0), ("b", 2, 0)], &[]);
    let slide = EventKind::HandleSlide {
        target: "b".into(),
        addend: Chain::term("a", f.one()),
        unit: f.one(),
    };
    let t = Timeline::new(int(0))
        .drift(DriftSegment::new(int(0), int(1)))
        .event(int(1), slide.clone())
        .event(int(1), slide)
        .drift(DriftSegment::new(int(1), int(2)));
    assert!(matches!(
        simulate(&c, &t),
        Err(PwcError::SimultaneousBifurcations { index: 2, .. })
    ));
}

#[test]
fn crossing_trajectories_are_rejected() {
    let f = FieldSpec::F2;
    let c = complex(f, 0, 10, &[("a", 1, 0), ("b", 2, 0)], &[]);
    let t = Timeline::new(int(0)).drift(DriftSegment::new(int(0), int(2)).with_rate("a", int(1)));
    assert!(matches!(simulate(&c, &t), Err(PwcError::NonGenericCrossing { .. })));
}

#[test]
fn leaving_the_window_without_an_event_is_rejected() {
    let f = FieldSpec::F2;
    let c = complex(f, 0, 4, &[("a", 3, 0)], &[]);
    let t = Timeline::new(int(0)).drift(DriftSegment::new(int(0), int(2)).with_rate("a", int(1)));
    assert!(simulate(&c, &t).is_err());
}

#[test]
fn handle_slide_is_invertible() {
    let mut r = rng(21);
    for f in FIELDS {
        for _ in 0..20 {
            let c = fixtures::random_complex(&mut r, f, 6);
            let gens = c.generators();
            let Some((lo, hi)) = gens.iter().enumerate().find_map(|(i, g)| {
                gens[i + 1..]
                    .iter()
                    .find(|h| h.degree == g.degree && h.action > g.action)
                    .map(|h| (g.id.clone(), h.id.clone()))
            }) else {
                continue;
            };
            let u = fixtures::random_scalar(&mut r, f, true);
            let s = State::from_complex(&c);
            let forward = EventKind::HandleSlide {
                target: hi.clone(),
                addend: Chain::term(lo.clone(), f.one()),
                unit: u.clone(),
            };
            let back = EventKind::HandleSlide {
                target: hi,
                addend: Chain::term(lo, f.one()),
                unit: u.neg_ref(),
            };
            let there = apply_event(&s, &forward).unwrap();
            assert_eq!(barcode(&there.to_complex().unwrap()), barcode(&c));
            let again = apply_event(&there, &back).unwrap();
            assert_eq!(again, s);
        }
    }
}

#[test]
fn birth_then_death_restores_the_state() {
    for f in FIELDS {
        let c = complex(f, 0, 10, &[("c", 5, 0)], &[]);
        let s = State::from_complex(&c);
        let born = apply_event(
            &s,
            &EventKind::Birth {
                x: Generator::new("x", int(2), 1),
                y: Generator::new("y", int(2), 0),
                unit: f.from_i64(2).canonical(),
            },
        );
        // 2 is zero in F2.
        if f == FieldSpec::F2 {
            assert!(born.is_err());
            continue;
        }
        let born = born.unwrap();
        let dead = apply_event(&born, &EventKind::Death { x: "x".into(), y: "y".into() }).unwrap();
        assert_eq!(dead, s);
    }
}

#[test]
fn death_requires_a_direct_summand() {
    let f = FieldSpec::Q;
    let mut dz = Chain::term("y", f.one());
    dz.add_term("w", f.one());
    let c = FilteredComplex::build(
        f,
        Window::unbounded(),
        vec![
            Generator::new("w", int(2), 0),
            Generator::new("y", int(2), 0),
            Generator::new("x", int(3), 1),
            Generator::new("z", int(4), 1),
        ],
        [("x".to_string(), Chain::term("y", f.one())), ("z".to_string(), dz)].into(),
    )
    .unwrap();
    let s = State::from_complex(&c);
    assert!(apply_event(&s, &EventKind::Death { x: "x".into(), y: "y".into() }).is_err());
}

#[test]
fn random_timelines_pass_event_rules() {
    let mut r = rng(22);
    let mut seen = std::collections::BTreeSet::new();
    for f in FIELDS {
        for _ in 0..60 {
            let c = fixtures::random_windowed_complex(&mut r, f, 5);
            let t = fixtures::random_timeline(&mut r, &c, 6, 9);
            for (_, e) in t.events() {
                seen.insert(e.kind.name());
            }
            let trace = simulate(&c, &t).unwrap();
            let report = check_transitions(&trace);
            assert!(report.all_passed(), "{:?}", report.failures().collect::<Vec<_>>());
        }
    }
    for kind in ["handle_slide", "birth", "death", "exit_below", "exit_above", "entry_below", "entry_above"] {
        assert!(seen.contains(kind), "no {kind} event generated");
    }
}

#[test]
fn audit_flags_fast_drifts_and_bad_entries() {
    let f = FieldSpec::Q;
    let c = complex(f, 0, 10, &[("a", 2, 0), ("b", 5, 0)], &[]);
    let omega = PiecewiseLinear::constant(int(1));

    let slow = Timeline::new(int(0)).drift(DriftSegment::new(int(0), int(1)).with_rate("a", q(1, 2)));
    let report = drift_speed_audit(&c, &slow, &omega);
    assert!(report.passed(), "{report:?}");
    assert_eq!(report.segments_checked, 1);

    let fast = Timeline::new(int(0)).drift(DriftSegment::new(int(0), int(1)).with_rate("a", int(1)));
    let report = drift_speed_audit(&c, &fast, &omega);
    assert_eq!(report.findings.len(), 1);
    assert_eq!(report.findings[0].kind, AuditKind::RateTooFast);

    let entry = Timeline::new(int(0))
        .drift(DriftSegment::new(int(0), int(1)))
        .event(
            int(1),
            EventKind::EntryBelow {
                generator: Generator::new("e", int(0), 0),
                incoming: Chain::zero(),
            },
        )
        .drift(DriftSegment::new(int(1), int(2)).with_rate("e", q(-1, 2)));
    let report = drift_speed_audit(&c, &entry, &omega);
    assert!(report.findings.iter().any(|x| x.kind == AuditKind::ForbiddenEntry), "{report:?}");
}

#[test]
fn static_timeline_keeps_barcode() {
    let mut r = rng(23);
    for f in FIELDS {
        let c = fixtures::random_windowed_complex(&mut r, f, 6);
        let t = Timeline::new(int(0)).drift(DriftSegment::new(int(0), int(3)));
        let trace = simulate(&c, &t).unwrap();
        for s in &trace.samples {
            assert_eq!(s.barcode, barcode(&c));
        }
        assert_eq!(trace.final_state, State::from_complex(&c));
    }
}
