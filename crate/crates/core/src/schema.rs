//! JSON file formats. Rationals and scalars are written as strings such as
//! `"3/4"`; integers are also accepted as bare numbers. Window bounds and σ
//! values accept `"inf"`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::barcode::Barcode;
use crate::coefficients::{parse_rational, FieldSpec, Rational, Scalar};
use crate::complex::{ActionValue, Chain, FilteredComplex, Generator, Window};
use crate::dga::{AlgebraElement, Augmentation, Chord, ChordDga, ChordKind, Word};
use crate::displacement::{BettiProfile, SigmaProfile};
use crate::pwc::{DriftSegment, EventKind, Timeline, TimelineEntry};

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

impl From<serde_json::Error> for SchemaError {
    fn from(e: serde_json::Error) -> Self {
        SchemaError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, SchemaError> {
    Err(SchemaError::Invalid(msg.into()))
}

/// A number written either as a JSON string or as a JSON integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Int(n) => write!(f, "{n}"),
            Num::Text(s) => f.write_str(s),
        }
    }
}

impl From<&Rational> for Num {
    fn from(q: &Rational) -> Self {
        Num::Text(q.to_string())
    }
}

impl From<&Scalar> for Num {
    fn from(s: &Scalar) -> Self {
        Num::Text(s.to_string())
    }
}

impl From<&ActionValue> for Num {
    fn from(a: &ActionValue) -> Self {
        Num::Text(a.to_string())
    }
}

impl Num {
    fn rational(&self, what: &str) -> Result<Rational, SchemaError> {
        parse_rational(&self.to_string())
            .map_or_else(|| invalid(format!("{what}: `{self}` is not a rational number")), Ok)
    }

    fn action(&self, what: &str) -> Result<ActionValue, SchemaError> {
        self.to_string()
            .parse::<ActionValue>()
            .map_err(|e| SchemaError::Invalid(format!("{what}: {e}")))
    }

    fn scalar(&self, field: FieldSpec, what: &str) -> Result<Scalar, SchemaError> {
        field
            .parse_scalar(&self.to_string())
            .map_err(|e| SchemaError::Invalid(format!("{what}: {e}")))
    }
}

fn parse_field(tag: &str) -> Result<FieldSpec, SchemaError> {
    tag.parse().map_err(|e| SchemaError::Invalid(format!("field: {e}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDto {
    pub id: String,
    pub action: Num,
    pub degree: i64,
}

impl GeneratorDto {
    fn to_generator(&self) -> Result<Generator, SchemaError> {
        let action = self.action.rational(&format!("action of {}", self.id))?;
        Ok(Generator::new(self.id.clone(), action, self.degree))
    }
}

impl From<&Generator> for GeneratorDto {
    fn from(g: &Generator) -> Self {
        GeneratorDto {
            id: g.id.clone(),
            action: (&g.action).into(),
            degree: g.degree,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDto {
    pub id: String,
    pub coeff: Num,
}

fn chain_from(field: FieldSpec, terms: &[TermDto], what: &str) -> Result<Chain, SchemaError> {
    let mut c = Chain::zero();
    for t in terms {
        c.add_term(t.id.clone(), t.coeff.scalar(field, what)?);
    }
    Ok(c)
}

fn chain_to(c: &Chain) -> Vec<TermDto> {
    c.iter()
        .map(|(id, s)| TermDto {
            id: id.clone(),
            coeff: s.into(),
        })
        .collect()
}

/// `{ field, window: [a, b], generators: [{id, action, degree}],
/// differential: {id: [{id, coeff}]} }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub field: String,
    #[serde(default = "unbounded_window")]
    pub window: [Num; 2],
    pub generators: Vec<GeneratorDto>,
    #[serde(default)]
    pub differential: BTreeMap<String, Vec<TermDto>>,
}

fn unbounded_window() -> [Num; 2] {
    [Num::Text("-inf".into()), Num::Text("inf".into())]
}

/// Parses and builds a complex; schema problems are `SchemaError`, domain
/// problems are returned in the inner result.
pub fn complex_from_file(
    file: &ComplexFile,
) -> Result<Result<FilteredComplex, crate::complex::ComplexError>, SchemaError> {
    let field = parse_field(&file.field)?;
    let lower = file.window[0].action("window lower bound")?;
    let upper = file.window[1].action("window upper bound")?;
    let window = match Window::new(lower, upper) {
        Ok(w) => w,
        Err(e) => return Ok(Err(e)),
    };
    let generators = file
        .generators
        .iter()
        .map(GeneratorDto::to_generator)
        .collect::<Result<Vec<_>, _>>()?;
    let mut differential = BTreeMap::new();
    for (id, terms) in &file.differential {
        differential.insert(id.clone(), chain_from(field, terms, &format!("differential of {id}"))?);
    }
    Ok(FilteredComplex::build(field, window, generators, differential))
}

impl From<&FilteredComplex> for ComplexFile {
    fn from(c: &FilteredComplex) -> Self {
        let differential = c
            .differential()
            .into_iter()
            .filter(|(_, ch)| !ch.is_zero())
            .map(|(id, ch)| (id, chain_to(&ch)))
            .collect();
        ComplexFile {
            field: c.field().to_string(),
            window: [(&c.window().lower).into(), (&c.window().upper).into()],
            generators: c.generators().iter().map(GeneratorDto::from).collect(),
            differential,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChordKindDto {
    Pure,
    Mixed,
}

/// Pure chords give `component`; mixed chords give `ends: [from, to]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChordDto {
    pub label: String,
    pub length: Num,
    pub degree: i64,
    #[serde(default)]
    pub component: u8,
    #[serde(default = "pure_kind")]
    pub kind: ChordKindDto,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ends: Option<[u8; 2]>,
}

fn pure_kind() -> ChordKindDto {
    ChordKindDto::Pure
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordTermDto {
    pub coeff: Num,
    pub word: Vec<String>,
}

/// `{ field, chords: [...], differential: {label: [{coeff, word}]} }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DgaFile {
    pub field: String,
    pub chords: Vec<ChordDto>,
    #[serde(default)]
    pub differential: BTreeMap<String, Vec<WordTermDto>>,
}

pub fn dga_from_file(file: &DgaFile) -> Result<Result<ChordDga, crate::dga::DgaError>, SchemaError> {
    let field = parse_field(&file.field)?;
    let mut chords = Vec::new();
    for c in &file.chords {
        let length = c.length.rational(&format!("length of {}", c.label))?;
        let kind = match (c.kind, c.ends) {
            (ChordKindDto::Pure, None) => ChordKind::Pure { component: c.component },
            (ChordKindDto::Mixed, Some([from, to])) => ChordKind::Mixed { from, to },
            (ChordKindDto::Pure, Some(_)) => return invalid(format!("pure chord {} has `ends`", c.label)),
            (ChordKindDto::Mixed, None) => return invalid(format!("mixed chord {} needs `ends`", c.label)),
        };
        chords.push(Chord {
            label: c.label.clone(),
            length,
            degree: c.degree,
            kind,
        });
    }
    let mut differential = BTreeMap::new();
    for (label, terms) in &file.differential {
        let mut el = AlgebraElement::zero(field);
        for t in terms {
            el.add_term(Word(t.word.clone()), t.coeff.scalar(field, &format!("differential of {label}"))?);
        }
        differential.insert(label.clone(), el);
    }
    Ok(ChordDga::new(field, chords, differential))
}

impl From<&ChordDga> for DgaFile {
    fn from(d: &ChordDga) -> Self {
        let chords = d
            .chords()
            .map(|c| {
                let (component, kind, ends) = match c.kind {
                    ChordKind::Pure { component } => (component, ChordKindDto::Pure, None),
                    ChordKind::Mixed { from, to } => (from, ChordKindDto::Mixed, Some([from, to])),
                };
                ChordDto {
                    label: c.label.clone(),
                    length: (&c.length).into(),
                    degree: c.degree,
                    component,
                    kind,
                    ends,
                }
            })
            .collect();
        let differential = d
            .differential()
            .iter()
            .filter(|(_, el)| !el.is_zero())
            .map(|(k, el)| {
                let terms = el
                    .terms()
                    .map(|(w, s)| WordTermDto {
                        coeff: s.into(),
                        word: w.0.clone(),
                    })
                    .collect();
                (k.clone(), terms)
            })
            .collect();
        DgaFile {
            field: d.field().to_string(),
            chords,
            differential,
        }
    }
}

/// `{label: scalar}`.
pub type AugmentationFile = BTreeMap<String, Num>;

pub fn augmentation_from_file(field: FieldSpec, file: &AugmentationFile) -> Result<Augmentation, SchemaError> {
    let mut values = BTreeMap::new();
    for (k, v) in file {
        values.insert(k.clone(), v.scalar(field, &format!("augmentation value of {k}"))?);
    }
    Ok(Augmentation::new(values))
}

pub fn augmentation_to_file(eps: &Augmentation) -> AugmentationFile {
    eps.values().iter().map(|(k, v)| (k.clone(), v.into())).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum EntryDto {
    Drift {
        from: Num,
        to: Num,
        #[serde(default)]
        rates: BTreeMap<String, Num>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window_rates: Option<[Num; 2]>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        shrink_with_oscillation: bool,
    },
    HandleSlide {
        time: Num,
        target: String,
        addend: Vec<TermDto>,
        #[serde(default = "one")]
        unit: Num,
    },
    Birth {
        time: Num,
        x: GeneratorDto,
        y: GeneratorDto,
        #[serde(default = "one")]
        unit: Num,
    },
    Death {
        time: Num,
        x: String,
        y: String,
    },
    ExitBelow {
        time: Num,
        id: String,
    },
    EntryBelow {
        time: Num,
        generator: GeneratorDto,
        #[serde(default)]
        incoming: Vec<TermDto>,
    },
    ExitAbove {
        time: Num,
        id: String,
    },
    EntryAbove {
        time: Num,
        generator: GeneratorDto,
        #[serde(default)]
        boundary: Vec<TermDto>,
    },
}

fn one() -> Num {
    Num::Int(1)
}

/// `{ initial: <complex>, start, entries: [...] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimelineFile {
    pub initial: ComplexFile,
    #[serde(default = "zero")]
    pub start: Num,
    pub entries: Vec<EntryDto>,
}

fn zero() -> Num {
    Num::Int(0)
}

/// Initial complex (domain result) and the scripted timeline.
pub fn timeline_from_file(
    file: &TimelineFile,
) -> Result<(Result<FilteredComplex, crate::complex::ComplexError>, Timeline), SchemaError> {
    let field = parse_field(&file.initial.field)?;
    let initial = complex_from_file(&file.initial)?;
    let mut t = Timeline::new(file.start.rational("start")?);
    for (i, e) in file.entries.iter().enumerate() {
        let ctx = |s: &str| format!("entry {i}: {s}");
        let time = |n: &Num| n.rational(&ctx("time"));
        match e {
            EntryDto::Drift {
                from,
                to,
                rates,
                window_rates,
                shrink_with_oscillation,
            } => {
                let mut seg = DriftSegment::new(from.rational(&ctx("from"))?, to.rational(&ctx("to"))?);
                for (id, r) in rates {
                    seg = seg.with_rate(id.clone(), r.rational(&ctx("rate"))?);
                }
                if let Some([lo, hi]) = window_rates {
                    seg = seg.with_window_rates(lo.rational(&ctx("window rate"))?, hi.rational(&ctx("window rate"))?);
                }
                seg.shrink_with_oscillation = *shrink_with_oscillation;
                t = t.drift(seg);
            }
            EntryDto::HandleSlide {
                time: tm,
                target,
                addend,
                unit,
            } => {
                let kind = EventKind::HandleSlide {
                    target: target.clone(),
                    addend: chain_from(field, addend, &ctx("addend"))?,
                    unit: unit.scalar(field, &ctx("unit"))?,
                };
                t = t.event(time(tm)?, kind);
            }
            EntryDto::Birth { time: tm, x, y, unit } => {
                let kind = EventKind::Birth {
                    x: x.to_generator()?,
                    y: y.to_generator()?,
                    unit: unit.scalar(field, &ctx("unit"))?,
                };
                t = t.event(time(tm)?, kind);
            }
            EntryDto::Death { time: tm, x, y } => {
                t = t.event(time(tm)?, EventKind::Death { x: x.clone(), y: y.clone() });
            }
            EntryDto::ExitBelow { time: tm, id } => {
                t = t.event(time(tm)?, EventKind::ExitBelow { id: id.clone() });
            }
            EntryDto::ExitAbove { time: tm, id } => {
                t = t.event(time(tm)?, EventKind::ExitAbove { id: id.clone() });
            }
            EntryDto::EntryBelow {
                time: tm,
                generator,
                incoming,
            } => {
                let kind = EventKind::EntryBelow {
                    generator: generator.to_generator()?,
                    incoming: chain_from(field, incoming, &ctx("incoming"))?,
                };
                t = t.event(time(tm)?, kind);
            }
            EntryDto::EntryAbove {
                time: tm,
                generator,
                boundary,
            } => {
                let kind = EventKind::EntryAbove {
                    generator: generator.to_generator()?,
                    boundary: chain_from(field, boundary, &ctx("boundary"))?,
                };
                t = t.event(time(tm)?, kind);
            }
        }
    }
    Ok((initial, t))
}

pub fn timeline_to_file(initial: &FilteredComplex, timeline: &Timeline) -> TimelineFile {
    let entries = timeline
        .entries
        .iter()
        .map(|e| match e {
            TimelineEntry::Drift(seg) => EntryDto::Drift {
                from: (&seg.from).into(),
                to: (&seg.to).into(),
                rates: seg.rates.iter().map(|(k, r)| (k.clone(), r.into())).collect(),
                window_rates: if seg.lower_rate == Rational::from_integer(0.into())
                    && seg.upper_rate == Rational::from_integer(0.into())
                {
                    None
                } else {
                    Some([(&seg.lower_rate).into(), (&seg.upper_rate).into()])
                },
                shrink_with_oscillation: seg.shrink_with_oscillation,
            },
            TimelineEntry::Event(ev) => {
                let time: Num = (&ev.time).into();
                match &ev.kind {
                    EventKind::HandleSlide { target, addend, unit } => EntryDto::HandleSlide {
                        time,
                        target: target.clone(),
                        addend: chain_to(addend),
                        unit: unit.into(),
                    },
                    EventKind::Birth { x, y, unit } => EntryDto::Birth {
                        time,
                        x: x.into(),
                        y: y.into(),
                        unit: unit.into(),
                    },
                    EventKind::Death { x, y } => EntryDto::Death {
                        time,
                        x: x.clone(),
                        y: y.clone(),
                    },
                    EventKind::ExitBelow { id } => EntryDto::ExitBelow { time, id: id.clone() },
                    EventKind::ExitAbove { id } => EntryDto::ExitAbove { time, id: id.clone() },
                    EventKind::EntryBelow { generator, incoming } => EntryDto::EntryBelow {
                        time,
                        generator: generator.into(),
                        incoming: chain_to(incoming),
                    },
                    EventKind::EntryAbove { generator, boundary } => EntryDto::EntryAbove {
                        time,
                        generator: generator.into(),
                        boundary: chain_to(boundary),
                    },
                }
            }
        })
        .collect();
    TimelineFile {
        initial: initial.into(),
        start: (&timeline.start).into(),
        entries,
    }
}

/// `["inf", "3/2", ...]` indexed by degree.
pub fn sigma_from_values(values: &[Num]) -> Result<Result<SigmaProfile, crate::displacement::DisplacementError>, SchemaError> {
    let v = values
        .iter()
        .enumerate()
        .map(|(k, n)| n.action(&format!("sigma_{k}")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SigmaProfile::new(v))
}

pub fn betti_from_values(values: &[u64]) -> BettiProfile {
    BettiProfile::new(values.to_vec())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarDto {
    pub start: Num,
    pub end: Num,
    pub degree: i64,
}

pub fn barcode_to_dtos(b: &Barcode) -> Vec<BarDto> {
    b.bars()
        .iter()
        .map(|bar| BarDto {
            start: (&bar.start).into(),
            end: (&bar.end).into(),
            degree: bar.degree,
        })
        .collect()
}

pub fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, SchemaError> {
    Ok(serde_json::from_str(text)?)
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("schema types serialize")
}
