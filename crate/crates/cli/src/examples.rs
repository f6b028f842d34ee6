//! Built-in example files for `chordbar fixtures`.

use chordbar::coefficients::{int, rat, FieldSpec};
use chordbar::complex::{Chain, FilteredComplex, Generator, Window};
use chordbar::dga::{AlgebraElement, Augmentation, Chord, ChordDga, Word};
use chordbar::displacement::SharpnessSchedule;
use chordbar::fixtures::{self, MorseChord};
use chordbar::pwc::{DriftSegment, EventKind, Timeline};
use chordbar::schema::{self, ComplexFile, DgaFile, Num};

pub const NAMES: &[&str] = &[
    "one-generator",
    "acyclic-pair",
    "handle-slide-timeline",
    "exit-below-timeline",
    "birth-death-timeline",
    "standard-unknot",
    "stabilized-unknot",
    "mixed-pair",
    "augmented-pair",
    "augmented-pair-augmentation",
    "two-copy-template",
    "two-copy-augmentation",
    "sphere-sigma",
    "sphere-betti",
    "stabilized-unknot-sigma",
    "stabilized-unknot-betti",
    "sharpness-profile",
];

/// File extension used by `--out-dir`.
pub fn extension(name: &str) -> &'static str {
    if name == "sharpness-profile" {
        "csv"
    } else {
        "json"
    }
}

fn window(a: i64, b: i64) -> Window {
    Window::new(int(a).into(), int(b).into()).expect("a < b")
}

fn complex(field: FieldSpec, gens: &[(&str, i64, i64)], diff: &[(&str, &str)]) -> FilteredComplex {
    FilteredComplex::build(
        field,
        window(0, 10),
        gens.iter().map(|(id, a, d)| Generator::new(*id, int(*a), *d)).collect(),
        diff.iter()
            .map(|(x, y)| (x.to_string(), Chain::term(*y, field.one())))
            .collect(),
    )
    .expect("example complex is valid")
}

fn json<T: serde::Serialize>(v: &T) -> String {
    schema::to_pretty(v) + "\n"
}

fn timeline_json(initial: &FilteredComplex, t: &Timeline) -> String {
    json(&schema::timeline_to_file(initial, t))
}

fn mixed_dga(field: FieldSpec, chords: Vec<Chord>, diff: &[(&str, AlgebraElement)]) -> ChordDga {
    ChordDga::new(field, chords, diff.iter().map(|(k, v)| (k.to_string(), v.clone())).collect())
        .expect("example DGA is valid")
}

pub fn render(name: &str, field: FieldSpec) -> Option<String> {
    let one = || field.one();
    let text = match name {
        "one-generator" => json(&ComplexFile::from(&complex(field, &[("c", 2, 1)], &[]))),
        "acyclic-pair" => json(&ComplexFile::from(&complex(field, &[("c0", 1, 0), ("c1", 2, 1)], &[("c1", "c0")]))),
        "handle-slide-timeline" => {
            let c = complex(field, &[("a", 1, 0), ("b", 2, 0), ("c", 4, 1)], &[("c", "b")]);
            let t = Timeline::new(int(0))
                .drift(DriftSegment::new(int(0), int(1)).with_rate("c", int(1)))
                .event(
                    int(1),
                    EventKind::HandleSlide {
                        target: "b".into(),
                        addend: Chain::term("a", one()),
                        unit: one(),
                    },
                )
                .drift(DriftSegment::new(int(1), int(2)).with_rate("a", rat(1, 2)));
            timeline_json(&c, &t)
        }
        "exit-below-timeline" => {
            let c = complex(field, &[("y", 1, 0), ("x", 3, 1)], &[("x", "y")]);
            let t = Timeline::new(int(0))
                .drift(DriftSegment::new(int(0), int(1)).with_window_rates(int(1), int(0)))
                .event(int(1), EventKind::ExitBelow { id: "y".into() })
                .drift(DriftSegment::new(int(1), int(2)));
            timeline_json(&c, &t)
        }
        "birth-death-timeline" => {
            let c = complex(field, &[("c", 5, 0)], &[]);
            let t = Timeline::new(int(0))
                .drift(DriftSegment::new(int(0), int(1)))
                .event(
                    int(1),
                    EventKind::Birth {
                        x: Generator::new("x", int(2), 1),
                        y: Generator::new("y", int(2), 0),
                        unit: one(),
                    },
                )
                .drift(DriftSegment::new(int(1), int(2)).with_rate("x", rat(1, 10)))
                .drift(DriftSegment::new(int(2), int(3)).with_rate("x", rat(-1, 10)))
                .event(int(3), EventKind::Death { x: "x".into(), y: "y".into() })
                .drift(DriftSegment::new(int(3), int(4)));
            timeline_json(&c, &t)
        }
        "standard-unknot" => json(&DgaFile::from(&fixtures::standard_unknot_shape(field, 1, int(1)))),
        "stabilized-unknot" => json(&DgaFile::from(&fixtures::stabilized_unknot_shape(field, int(1), rat(3, 2)))),
        "mixed-pair" => {
            let d = mixed_dga(
                field,
                vec![Chord::mixed("m1", int(1), 0, 0, 1), Chord::mixed("m2", int(2), 1, 0, 1)],
                &[("m2", AlgebraElement::generator(field, "m1"))],
            );
            json(&DgaFile::from(&d))
        }
        "augmented-pair" => {
            let d = mixed_dga(
                field,
                vec![
                    Chord::pure("p", rat(1, 2), 0, 0),
                    Chord::mixed("m1", int(1), 0, 0, 1),
                    Chord::mixed("m2", int(2), 1, 0, 1),
                ],
                &[("m2", AlgebraElement::term(field, Word::from_labels(["p", "m1"]), one()))],
            );
            json(&DgaFile::from(&d))
        }
        "augmented-pair-augmentation" => json(&schema::augmentation_to_file(&Augmentation::from_pairs([("p", one())]))),
        "two-copy-template" => json(&DgaFile::from(&two_copy(field))),
        "two-copy-augmentation" => {
            let eps = fixtures::doubled_augmentation(&Augmentation::from_pairs([("c", field.zero())]));
            json(&schema::augmentation_to_file(&eps))
        }
        "sphere-sigma" => json(&vec![Num::Text("3/2".into()), Num::Text("inf".into()), Num::Text("3/2".into())]),
        "sphere-betti" => json(&vec![1u64, 0, 1]),
        "stabilized-unknot-sigma" => json(&vec![Num::Text("inf".into()), Num::Text("inf".into())]),
        "stabilized-unknot-betti" => json(&vec![1u64, 1]),
        "sharpness-profile" => {
            let s = SharpnessSchedule {
                a: int(2),
                s: rat(1, 2),
                delta: int(0),
            };
            let p = s.rescaling_profile().expect("valid schedule");
            let mut out = String::from("t,max,min\n");
            for t in [int(0), rat(1, 2)] {
                out.push_str(&format!("{t},{},{}\n", p.max_at(&t), p.min_at(&t)));
            }
            out
        }
        _ => return None,
    };
    Some(text)
}

/// Two-copy template over the standard unknot with a perfect Morse function
/// on the circle: chords near `N = 10` and two Morse chords.
pub fn two_copy(field: FieldSpec) -> ChordDga {
    let base = fixtures::standard_unknot_shape(field, 1, int(1));
    let morse = [
        MorseChord {
            label: "x0".into(),
            index: 0,
            offset: rat(1, 10),
        },
        MorseChord {
            label: "x1".into(),
            index: 1,
            offset: rat(2, 10),
        },
    ];
    fixtures::two_copy_template(&base, int(10), &morse, &[])
}
