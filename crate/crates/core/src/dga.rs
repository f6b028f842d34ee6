//! Chord DGAs: free unital algebras on length-graded chords with a strictly
//! length-decreasing differential of degree −1.
//!
//! The differential extends to words by the Leibniz rule with Koszul signs,
//! `∂(xy) = ∂(x) y + (−1)^{|x|} x ∂(y)`; over 𝔽₂ every sign is trivial.
//!
//! Sub-DGAs cut at `l` keep chords of length strictly less than `l`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::coefficients::{FieldError, FieldSpec, Rational, Scalar};
use crate::complex::{ActionValue, Chain, ComplexError, FilteredComplex, Generator, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChordKind {
    Pure { component: u8 },
    /// Runs from component `from` to component `to`.
    Mixed { from: u8, to: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chord {
    pub label: String,
    pub length: Rational,
    pub degree: i64,
    pub kind: ChordKind,
}

impl Chord {
    pub fn pure(label: impl Into<String>, length: Rational, degree: i64, component: u8) -> Self {
        Chord {
            label: label.into(),
            length,
            degree,
            kind: ChordKind::Pure { component },
        }
    }

    pub fn mixed(label: impl Into<String>, length: Rational, degree: i64, from: u8, to: u8) -> Self {
        Chord {
            label: label.into(),
            length,
            degree,
            kind: ChordKind::Mixed { from, to },
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.kind, ChordKind::Pure { .. })
    }

    pub fn is_mixed(&self) -> bool {
        !self.is_pure()
    }

    /// Mixed chord from component 0 to component 1.
    pub fn is_distinguished_mixed(&self) -> bool {
        self.kind == ChordKind::Mixed { from: 0, to: 1 }
    }
}

/// Finite sequence of chord labels; the empty word is the unit.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<String>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn letter(label: impl Into<String>) -> Self {
        Word(vec![label.into()])
    }

    pub fn from_labels<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Word(labels.into_iter().map(Into::into).collect())
    }

    pub fn letters(&self) -> &[String] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", self.0.join("*"))
        }
    }
}

/// Sparse linear combination of words with nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    field: FieldSpec,
    terms: BTreeMap<Word, Scalar>,
}

impl AlgebraElement {
    pub fn zero(field: FieldSpec) -> Self {
        AlgebraElement {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: FieldSpec, s: Scalar) -> Self {
        AlgebraElement::term(field, Word::unit(), s)
    }

    pub fn one(field: FieldSpec) -> Self {
        AlgebraElement::constant(field, field.one())
    }

    pub fn generator(field: FieldSpec, label: impl Into<String>) -> Self {
        AlgebraElement::term(field, Word::letter(label), field.one())
    }

    pub fn term(field: FieldSpec, word: Word, coeff: Scalar) -> Self {
        let mut x = AlgebraElement::zero(field);
        x.add_term(word, coeff);
        x
    }

    pub fn from_terms<I>(field: FieldSpec, terms: I) -> Self
    where
        I: IntoIterator<Item = (Word, Scalar)>,
    {
        let mut x = AlgebraElement::zero(field);
        for (w, s) in terms {
            x.add_term(w, s);
        }
        x
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn add_term(&mut self, word: Word, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let sum = match self.terms.get(&word) {
            Some(old) => old + &coeff,
            None => coeff,
        };
        if sum.is_zero() {
            self.terms.remove(&word);
        } else {
            self.terms.insert(word, sum);
        }
    }

    pub fn add_scaled(&mut self, other: &AlgebraElement, factor: &Scalar) {
        for (w, s) in &other.terms {
            self.add_term(w.clone(), s * factor);
        }
    }

    pub fn scaled(&self, factor: &Scalar) -> AlgebraElement {
        let mut x = AlgebraElement::zero(self.field);
        x.add_scaled(self, factor);
        x
    }

    pub fn plus(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut x = self.clone();
        x.add_scaled(other, &self.field.one());
        x
    }

    pub fn minus(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut x = self.clone();
        x.add_scaled(other, &self.field.one().neg_ref());
        x
    }

    /// Concatenation product.
    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut x = AlgebraElement::zero(self.field);
        for (w1, s1) in &self.terms {
            for (w2, s2) in &other.terms {
                x.add_term(w1.concat(w2), s1 * s2);
            }
        }
        x
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Word::unit())
    }

    pub fn letters(&self) -> BTreeSet<&str> {
        self.terms.keys().flat_map(|w| w.0.iter().map(String::as_str)).collect()
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, s)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (s.is_one(), w.is_unit()) {
                (true, _) => write!(f, "{w}")?,
                (false, true) => write!(f, "{s}")?,
                (false, false) => write!(f, "{s}*{w}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DgaError {
    #[error("duplicate chord label {0}")]
    DuplicateLabel(String),
    #[error("unknown chord {label} in {context}")]
    UnknownChord { label: String, context: String },
    #[error("chord {0} must have positive length")]
    NonPositiveLength(String),
    #[error("chord {0} has a component outside {{0, 1}} or a mixed chord with equal ends")]
    BadComponent(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("exhaustive search needs {needed} assignments, budget is {budget}")]
    SearchBudgetExceeded { needed: String, budget: u64 },
    #[error("augmentation search over Q needs an explicit candidate set")]
    CandidatesRequired,
    #[error("not a chain map at {generator}: Phi(d {generator}) = {lhs} but d'(Phi {generator}) = {rhs}")]
    NotChainMap { generator: String, lhs: String, rhs: String },
    #[error("chord sets differ: {0}")]
    ChordMismatch(String),
    #[error("length of {word} exceeds length of {chord}")]
    StokesViolated { chord: String, word: String },
    #[error("chord lengths are not interleaved around the born pair: {0}")]
    OrderingViolated(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("window width {width} exceeds l = {l}; the partially linearized complex needs b - a <= l")]
    WindowTooWide { width: ActionValue, l: ActionValue },
    #[error("d {mixed} contains {word}, whose pure chord {chord} has length >= l, alongside a mixed chord in the window")]
    PureChordOfForbiddenLength { mixed: String, word: String, chord: String },
    #[error("augmentation invalid: {0}")]
    AugmentationInvalid(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DgaViolation {
    NotSquareZero { generator: String, residue: String },
    DegreeMismatch { generator: String, word: String, expected: i64, got: i64 },
    LengthNotDecreasing { generator: String, word: String, word_length: Rational, length: Rational },
    MixedOutputViolation { generator: String, word: String, reason: &'static str },
}

impl fmt::Display for DgaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DgaViolation::NotSquareZero { generator, residue } => {
                write!(f, "d^2 {generator} = {residue} != 0")
            }
            DgaViolation::DegreeMismatch { generator, word, expected, got } => {
                write!(f, "d {generator} contains {word} of degree {got}, expected {expected}")
            }
            DgaViolation::LengthNotDecreasing { generator, word, word_length, length } => {
                write!(f, "d {generator} contains {word} of length {word_length} >= {length}")
            }
            DgaViolation::MixedOutputViolation { generator, word, reason } => {
                write!(f, "d {generator} contains {word}: {reason}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DgaReport {
    pub violations: Vec<DgaViolation>,
}

impl DgaReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for DgaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChordDga {
    field: FieldSpec,
    chords: BTreeMap<String, Chord>,
    differential: BTreeMap<String, AlgebraElement>,
}

impl ChordDga {
    /// Assembles a DGA after syntactic checks. Chords absent from
    /// `differential` are cycles. Use [`ChordDga::validate`] for the algebraic
    /// invariants.
    pub fn new(
        field: FieldSpec,
        chords: Vec<Chord>,
        differential: BTreeMap<String, AlgebraElement>,
    ) -> Result<Self, DgaError> {
        let mut map = BTreeMap::new();
        for c in chords {
            if !c.length.is_positive() {
                return Err(DgaError::NonPositiveLength(c.label));
            }
            let ok = match c.kind {
                ChordKind::Pure { component } => component <= 1,
                ChordKind::Mixed { from, to } => from <= 1 && to <= 1 && from != to,
            };
            if !ok {
                return Err(DgaError::BadComponent(c.label));
            }
            if map.contains_key(&c.label) {
                return Err(DgaError::DuplicateLabel(c.label));
            }
            map.insert(c.label.clone(), c);
        }
        let mut diff = BTreeMap::new();
        for (label, x) in differential {
            if !map.contains_key(&label) {
                return Err(DgaError::UnknownChord {
                    label,
                    context: "differential".into(),
                });
            }
            if x.field != field {
                return Err(FieldError::FieldMismatch(field, x.field).into());
            }
            for (w, s) in x.terms() {
                if s.field() != field {
                    return Err(FieldError::FieldMismatch(field, s.field()).into());
                }
                if let Some(bad) = w.0.iter().find(|l| !map.contains_key(*l)) {
                    return Err(DgaError::UnknownChord {
                        label: bad.clone(),
                        context: format!("d {label}"),
                    });
                }
            }
            if !x.is_zero() {
                diff.insert(label, x);
            }
        }
        Ok(ChordDga {
            field,
            chords: map,
            differential: diff,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn chords(&self) -> impl Iterator<Item = &Chord> {
        self.chords.values()
    }

    pub fn labels(&self) -> BTreeSet<&str> {
        self.chords.keys().map(String::as_str).collect()
    }

    pub fn chord(&self, label: &str) -> Option<&Chord> {
        self.chords.get(label)
    }

    pub fn len(&self) -> usize {
        self.chords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chords.is_empty()
    }

    pub fn boundary(&self, label: &str) -> AlgebraElement {
        self.differential
            .get(label)
            .cloned()
            .unwrap_or_else(|| AlgebraElement::zero(self.field))
    }

    pub fn differential(&self) -> &BTreeMap<String, AlgebraElement> {
        &self.differential
    }

    /// Chords sorted by `(length, label)`.
    pub fn chords_by_length(&self) -> Vec<&Chord> {
        let mut v: Vec<&Chord> = self.chords.values().collect();
        v.sort_by(|a, b| a.length.cmp(&b.length).then_with(|| a.label.cmp(&b.label)));
        v
    }

    fn chord_or_panic(&self, label: &str) -> &Chord {
        self.chords
            .get(label)
            .unwrap_or_else(|| panic!("word letter {label} is not a chord of this DGA"))
    }

    pub fn word_length(&self, w: &Word) -> Rational {
        w.0.iter().map(|l| self.chord_or_panic(l).length.clone()).sum()
    }

    pub fn word_degree(&self, w: &Word) -> i64 {
        w.0.iter().map(|l| self.chord_or_panic(l).degree).sum()
    }

    /// Maximal total length of a word in `x`; zero for scalars and for 0.
    pub fn length(&self, x: &AlgebraElement) -> Rational {
        x.terms()
            .map(|(w, _)| self.word_length(w))
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// `∂` extended to the whole algebra.
    pub fn apply(&self, x: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.field);
        for (w, s) in x.terms() {
            let mut prefix_degree = 0i64;
            for (i, letter) in w.0.iter().enumerate() {
                let d = self.boundary(letter);
                if !d.is_zero() {
                    let sign = Scalar::sign(self.field, prefix_degree);
                    let left = Word(w.0[..i].to_vec());
                    let right = Word(w.0[i + 1..].to_vec());
                    let coeff = s * &sign;
                    for (dw, ds) in d.terms() {
                        out.add_term(left.concat(dw).concat(&right), &coeff * ds);
                    }
                }
                prefix_degree += self.chord_or_panic(letter).degree;
            }
        }
        out
    }

    pub fn validate(&self) -> DgaReport {
        let mut violations = Vec::new();
        for c in self.chords.values() {
            let d = self.boundary(&c.label);
            for (w, _) in d.terms() {
                let got = self.word_degree(w);
                if got != c.degree - 1 {
                    violations.push(DgaViolation::DegreeMismatch {
                        generator: c.label.clone(),
                        word: w.to_string(),
                        expected: c.degree - 1,
                        got,
                    });
                }
                let wl = self.word_length(w);
                if wl >= c.length {
                    violations.push(DgaViolation::LengthNotDecreasing {
                        generator: c.label.clone(),
                        word: w.to_string(),
                        word_length: wl,
                        length: c.length.clone(),
                    });
                }
                if let Some(reason) = self.output_rule(c, w) {
                    violations.push(DgaViolation::MixedOutputViolation {
                        generator: c.label.clone(),
                        word: w.to_string(),
                        reason,
                    });
                }
            }
            let dd = self.apply(&d);
            if !dd.is_zero() {
                violations.push(DgaViolation::NotSquareZero {
                    generator: c.label.clone(),
                    residue: dd.to_string(),
                });
            }
        }
        DgaReport { violations }
    }

    /// Mixed chords must output words with a mixed letter; pure chords output
    /// words of pure chords on their own component.
    fn output_rule(&self, c: &Chord, w: &Word) -> Option<&'static str> {
        let kinds: Vec<ChordKind> = w.0.iter().map(|l| self.chord_or_panic(l).kind).collect();
        match c.kind {
            ChordKind::Mixed { .. } => (!kinds.iter().any(|k| matches!(k, ChordKind::Mixed { .. })))
                .then_some("a mixed chord must output words with a mixed letter"),
            ChordKind::Pure { component } => kinds
                .iter()
                .any(|k| *k != ChordKind::Pure { component })
                .then_some("a pure chord must output pure words on its own component"),
        }
    }

    /// Sub-DGA on the chords of length strictly less than `l`.
    pub fn sub_dga(&self, l: &ActionValue) -> ChordDga {
        let keep = |c: &Chord| ActionValue::Finite(c.length.clone()) < *l;
        let chords: BTreeMap<String, Chord> = self
            .chords
            .iter()
            .filter(|(_, c)| keep(c))
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        let differential = self
            .differential
            .iter()
            .filter(|(k, _)| chords.contains_key(*k))
            .map(|(k, x)| (k.clone(), x.clone()))
            .collect();
        ChordDga {
            field: self.field,
            chords,
            differential,
        }
    }

    /// Sub-DGA on the pure chords of length strictly less than `l`.
    pub fn pure_sub_dga(&self, l: &ActionValue) -> ChordDga {
        let cut = self.sub_dga(l);
        let chords: BTreeMap<String, Chord> =
            cut.chords.into_iter().filter(|(_, c)| c.is_pure()).collect();
        let differential = cut
            .differential
            .into_iter()
            .filter(|(k, _)| chords.contains_key(k))
            .collect();
        ChordDga {
            field: self.field,
            chords,
            differential,
        }
    }
}

/// Scalar assignment on a declared set of chords.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Augmentation {
    values: BTreeMap<String, Scalar>,
}

impl Augmentation {
    pub fn new(values: BTreeMap<String, Scalar>) -> Self {
        Augmentation { values }
    }

    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, Scalar)>,
        S: Into<String>,
    {
        Augmentation {
            values: pairs.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }

    pub fn values(&self) -> &BTreeMap<String, Scalar> {
        &self.values
    }

    pub fn get(&self, label: &str) -> Option<&Scalar> {
        self.values.get(label)
    }

    pub fn domain(&self) -> BTreeSet<&str> {
        self.values.keys().map(String::as_str).collect()
    }

    /// `None` if a letter lies outside the domain.
    pub fn eval_word(&self, field: FieldSpec, w: &Word) -> Option<Scalar> {
        let mut acc = field.one();
        for l in &w.0 {
            acc = &acc * self.values.get(l)?;
        }
        Some(acc)
    }

    pub fn eval(&self, x: &AlgebraElement) -> Option<Scalar> {
        let mut acc = x.field().zero();
        for (w, s) in x.terms() {
            acc = &acc + &(s * &self.eval_word(x.field(), w)?);
        }
        Some(acc)
    }
}

impl fmt::Display for Augmentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AugmentationViolation {
    UnknownChord(String),
    NonzeroOffDegree { label: String, degree: i64 },
    NonzeroOnMixed(String),
    DomainNotClosed { label: String, missing: String },
    NotAnnihilated { label: String, value: Scalar },
}

impl fmt::Display for AugmentationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AugmentationViolation::UnknownChord(l) => write!(f, "{l} is not a chord"),
            AugmentationViolation::NonzeroOffDegree { label, degree } => {
                write!(f, "nonzero value on {label} of degree {degree}")
            }
            AugmentationViolation::NonzeroOnMixed(l) => write!(f, "nonzero value on mixed chord {l}"),
            AugmentationViolation::DomainNotClosed { label, missing } => {
                write!(f, "d {label} involves {missing}, which has no value")
            }
            AugmentationViolation::NotAnnihilated { label, value } => {
                write!(f, "epsilon(d {label}) = {value} != 0")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AugmentationReport {
    pub violations: Vec<AugmentationViolation>,
}

impl AugmentationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for AugmentationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

pub fn check_augmentation(dga: &ChordDga, eps: &Augmentation) -> AugmentationReport {
    let mut violations = Vec::new();
    for (label, value) in &eps.values {
        let Some(c) = dga.chord(label) else {
            violations.push(AugmentationViolation::UnknownChord(label.clone()));
            continue;
        };
        if value.is_zero() {
            continue;
        }
        if c.is_mixed() {
            violations.push(AugmentationViolation::NonzeroOnMixed(label.clone()));
        }
        if c.degree != 0 {
            violations.push(AugmentationViolation::NonzeroOffDegree {
                label: label.clone(),
                degree: c.degree,
            });
        }
    }
    for label in eps.values.keys().filter(|l| dga.chord(l).is_some()) {
        let d = dga.boundary(label);
        if let Some(missing) = d.letters().into_iter().find(|l| eps.get(l).is_none()) {
            violations.push(AugmentationViolation::DomainNotClosed {
                label: label.clone(),
                missing: missing.to_string(),
            });
            continue;
        }
        let value = eps.eval(&d).expect("domain checked");
        if !value.is_zero() {
            violations.push(AugmentationViolation::NotAnnihilated {
                label: label.clone(),
                value,
            });
        }
    }
    AugmentationReport { violations }
}

/// Enumerates augmentations defined on every chord of `dga`, letting the
/// chords in `vary` range over the field (or over `candidates`) and fixing
/// every other chord to zero.
pub fn find_augmentations(
    dga: &ChordDga,
    vary: &[String],
    candidates: Option<&[Scalar]>,
    budget: u64,
) -> Result<Vec<Augmentation>, DgaError> {
    for l in vary {
        if dga.chord(l).is_none() {
            return Err(DgaError::UnknownChord {
                label: l.clone(),
                context: "augmentation search".into(),
            });
        }
    }
    let values: Vec<Scalar> = match candidates {
        Some(c) => c.to_vec(),
        None => dga.field().elements().ok_or(DgaError::CandidatesRequired)?,
    };
    let needed = (values.len() as u128).checked_pow(vary.len() as u32);
    match needed {
        Some(n) if n <= budget as u128 => {}
        _ => {
            return Err(DgaError::SearchBudgetExceeded {
                needed: needed.map_or_else(|| format!("{}^{}", values.len(), vary.len()), |n| n.to_string()),
                budget,
            })
        }
    }
    let base: BTreeMap<String, Scalar> = dga
        .chords
        .keys()
        .map(|k| (k.clone(), dga.field().zero()))
        .collect();
    let mut found = Vec::new();
    let mut idx = vec![0usize; vary.len()];
    if values.is_empty() && !vary.is_empty() {
        return Ok(found);
    }
    loop {
        let mut assignment = base.clone();
        for (l, &i) in vary.iter().zip(&idx) {
            assignment.insert(l.clone(), values[i].clone());
        }
        let eps = Augmentation::new(assignment);
        if check_augmentation(dga, &eps).is_valid() {
            found.push(eps);
        }
        // Odometer increment.
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(found);
            }
            idx[k] += 1;
            if idx[k] < values.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Elementary substitution `generator ↦ generator + addend`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementarySlide {
    pub generator: String,
    pub addend: AlgebraElement,
}

impl fmt::Display for ElementarySlide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{0} -> {0} + {1}", self.generator, self.addend)
    }
}

/// Unital algebra morphism between DGAs, given on generators. Source and
/// target share chord labels; `c` in the source corresponds to `c` in the
/// target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DgaMorphism {
    source: ChordDga,
    target: ChordDga,
    images: BTreeMap<String, AlgebraElement>,
    steps: Vec<ElementarySlide>,
}

impl DgaMorphism {
    /// Generators missing from `images` map to the chord with the same label.
    pub fn from_generators(
        source: &ChordDga,
        target: &ChordDga,
        images: BTreeMap<String, AlgebraElement>,
    ) -> Result<Self, DgaError> {
        check_same_labels(source, target)?;
        for (k, x) in &images {
            if source.chord(k).is_none() {
                return Err(DgaError::UnknownChord {
                    label: k.clone(),
                    context: "morphism domain".into(),
                });
            }
            if let Some(bad) = x.letters().into_iter().find(|l| target.chord(l).is_none()) {
                return Err(DgaError::UnknownChord {
                    label: bad.to_string(),
                    context: format!("image of {k}"),
                });
            }
        }
        let images = source
            .chords
            .keys()
            .map(|k| {
                let img = images
                    .get(k)
                    .cloned()
                    .unwrap_or_else(|| AlgebraElement::generator(target.field, k.clone()));
                (k.clone(), img)
            })
            .collect();
        Ok(DgaMorphism {
            source: source.clone(),
            target: target.clone(),
            images,
            steps: Vec::new(),
        })
    }

    pub fn source(&self) -> &ChordDga {
        &self.source
    }

    pub fn target(&self) -> &ChordDga {
        &self.target
    }

    pub fn image(&self, label: &str) -> &AlgebraElement {
        &self.images[label]
    }

    pub fn images(&self) -> &BTreeMap<String, AlgebraElement> {
        &self.images
    }

    /// The elementary substitutions this morphism was assembled from.
    pub fn steps(&self) -> &[ElementarySlide] {
        &self.steps
    }

    pub fn apply(&self, x: &AlgebraElement) -> AlgebraElement {
        let field = self.target.field;
        let mut out = AlgebraElement::zero(field);
        for (w, s) in x.terms() {
            let mut acc = AlgebraElement::constant(field, s.clone());
            for l in &w.0 {
                acc = acc.mul(&self.images[l]);
                if acc.is_zero() {
                    break;
                }
            }
            out.add_scaled(&acc, &field.one());
        }
        out
    }

    /// First generator where `Φ∘∂ ≠ ∂′∘Φ`, with both sides.
    pub fn chain_map_defect(&self) -> Option<(String, AlgebraElement, AlgebraElement)> {
        self.source.chords.keys().find_map(|k| {
            let lhs = self.apply(&self.source.boundary(k));
            let rhs = self.target.apply(&self.images[k]);
            (lhs != rhs).then(|| (k.clone(), lhs, rhs))
        })
    }

    pub fn verify(&self) -> Result<(), DgaError> {
        match self.chain_map_defect() {
            None => Ok(()),
            Some((generator, lhs, rhs)) => Err(DgaError::NotChainMap {
                generator,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            }),
        }
    }

    /// `max_c ℓ(Φ(c)) − ℓ(c)`, lengths measured in the target.
    pub fn action_increase(&self) -> Rational {
        self.images
            .iter()
            .map(|(k, img)| self.target.length(img) - &self.target.chords[k].length)
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &DgaMorphism) -> Result<DgaMorphism, DgaError> {
        check_same_labels(&self.target, &then.source)?;
        let images = self
            .images
            .iter()
            .map(|(k, x)| (k.clone(), then.apply(x)))
            .collect();
        let mut steps = self.steps.clone();
        steps.extend(then.steps.iter().cloned());
        Ok(DgaMorphism {
            source: self.source.clone(),
            target: then.target.clone(),
            images,
            steps,
        })
    }
}

fn check_same_labels(a: &ChordDga, b: &ChordDga) -> Result<(), DgaError> {
    if a.field != b.field {
        return Err(FieldError::FieldMismatch(a.field, b.field).into());
    }
    let (la, lb) = (a.labels(), b.labels());
    if la != lb {
        let only_a: Vec<&str> = la.difference(&lb).copied().collect();
        let only_b: Vec<&str> = lb.difference(&la).copied().collect();
        return Err(DgaError::ChordMismatch(format!(
            "only in source: [{}], only in target: [{}]",
            only_a.join(", "),
            only_b.join(", ")
        )));
    }
    Ok(())
}

/// `Φ(c) = c + δ^a_c · unit · b₁⋯b_k`. If `a` is not a chord the morphism is
/// the identity on generators.
pub fn handle_slide_morphism(
    minus: &ChordDga,
    plus: &ChordDga,
    a: &str,
    word: &Word,
    unit: &Scalar,
) -> Result<DgaMorphism, DgaError> {
    check_same_labels(minus, plus)?;
    let mut images = BTreeMap::new();
    let mut steps = Vec::new();
    if minus.chord(a).is_some() {
        if unit.is_zero() {
            return Err(DgaError::PreconditionViolated("the slide coefficient must be a unit".into()));
        }
        if let Some(bad) = word.0.iter().find(|l| minus.chord(l).is_none()) {
            return Err(DgaError::UnknownChord {
                label: bad.clone(),
                context: "handle-slide word".into(),
            });
        }
        for d in [minus, plus] {
            if d.word_length(word) > d.chords[a].length {
                return Err(DgaError::StokesViolated {
                    chord: a.to_string(),
                    word: word.to_string(),
                });
            }
        }
        if plus.word_degree(word) != plus.chords[a].degree {
            return Err(DgaError::PreconditionViolated(format!(
                "word {word} has degree {} but {a} has degree {}",
                plus.word_degree(word),
                plus.chords[a].degree
            )));
        }
        let addend = AlgebraElement::term(plus.field, word.clone(), unit.clone());
        images.insert(a.to_string(), AlgebraElement::generator(plus.field, a).plus(&addend));
        steps.push(ElementarySlide {
            generator: a.to_string(),
            addend,
        });
    }
    let mut phi = DgaMorphism::from_generators(minus, plus, images)?;
    phi.steps = steps;
    phi.verify()?;
    Ok(phi)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BirthMorphism {
    pub morphism: DgaMorphism,
    /// Chords above the born pair, in increasing length.
    pub upper: Vec<String>,
    /// `ℓ(a⁺) − ℓ(b⁺)`.
    pub slack: Rational,
}

/// Replaces the first letter `b` in each word by `a`, dropping words without
/// `b`. The Koszul sign `−(−1)^{|α|}` of the prefix `α` is folded in so that
/// `∂(α a β)` cancels `α b β` when `∂a = b`; over 𝔽₂ it is `+1`.
fn replace_first(dga: &ChordDga, x: &AlgebraElement, b: &str, a: &str) -> AlgebraElement {
    let field = dga.field;
    let mut out = AlgebraElement::zero(field);
    for (w, s) in x.terms() {
        let Some(pos) = w.0.iter().position(|l| l == b) else {
            continue;
        };
        let prefix_degree: i64 = w.0[..pos].iter().map(|l| dga.chords[l].degree).sum();
        let sign = Scalar::sign(field, prefix_degree + 1);
        let mut letters = w.0.clone();
        letters[pos] = a.to_string();
        out.add_term(Word(letters), s * &sign);
    }
    out
}

/// Continuation map across the birth of `(a, b)`. `minus` is the stabilized
/// DGA before the birth, containing the artificial pair with `∂a = b`, and
/// shares its labels with `plus`.
///
/// `Φ₀` sends `b` to `∂⁺a` and then, for the chords `a_i` above the pair in
/// increasing length, `g_i(a_i) = a_i + f(∂⁺a_i)` with `f` replacing the first
/// `b` by `a`. If `ordering` is given it must list the `a_i` in that order.
pub fn birth_morphism(
    minus: &ChordDga,
    plus: &ChordDga,
    a: &str,
    b: &str,
    ordering: Option<&[String]>,
) -> Result<BirthMorphism, DgaError> {
    check_same_labels(minus, plus)?;
    for l in [a, b] {
        if plus.chord(l).is_none() {
            return Err(DgaError::UnknownChord {
                label: l.to_string(),
                context: "birth pair".into(),
            });
        }
    }
    let field = plus.field;
    if minus.boundary(a) != AlgebraElement::generator(field, b) || !minus.boundary(b).is_zero() {
        return Err(DgaError::PreconditionViolated(format!(
            "the stabilized DGA must have d {a} = {b} and d {b} = 0"
        )));
    }
    let (la, lb) = (&plus.chords[a].length, &plus.chords[b].length);
    if plus.chords[a].degree != plus.chords[b].degree + 1 || la <= lb {
        return Err(DgaError::PreconditionViolated(format!(
            "need |{a}| = |{b}| + 1 and l({a}) > l({b})"
        )));
    }
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for k in plus.chords.keys().filter(|k| *k != a && *k != b) {
        let (x, y) = (&minus.chords[k].length, &plus.chords[k].length);
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        if lo > la {
            upper.push((lo.clone(), hi.clone(), k.clone()));
        } else if hi < lb {
            lower.push((lo.clone(), hi.clone(), k.clone()));
        } else {
            return Err(DgaError::OrderingViolated(format!(
                "{k} has length between l({b}) and l({a})"
            )));
        }
    }
    for group in [&mut upper, &mut lower] {
        group.sort();
        if let Some(w) = group.windows(2).find(|w| w[0].1 >= w[1].0) {
            return Err(DgaError::OrderingViolated(format!(
                "lengths of {} and {} overlap across the event",
                w[0].2, w[1].2
            )));
        }
    }
    let upper: Vec<String> = upper.into_iter().map(|(_, _, k)| k).collect();
    if let Some(given) = ordering {
        if given != upper.as_slice() {
            return Err(DgaError::OrderingViolated(format!(
                "declared order [{}] differs from length order [{}]",
                given.join(", "),
                upper.join(", ")
            )));
        }
    }

    let identity_on = |d: &ChordDga| DgaMorphism::from_generators(d, d, BTreeMap::new());
    let correction = plus.boundary(a).minus(&AlgebraElement::generator(field, b));
    let mut phi = DgaMorphism::from_generators(
        minus,
        plus,
        BTreeMap::from([(b.to_string(), plus.boundary(a))]),
    )?;
    if !correction.is_zero() {
        phi.steps.push(ElementarySlide {
            generator: b.to_string(),
            addend: correction,
        });
    }
    for ai in &upper {
        let addend = replace_first(plus, &plus.boundary(ai), b, a);
        if addend.is_zero() {
            continue;
        }
        let mut g = identity_on(plus)?;
        g.images
            .insert(ai.clone(), AlgebraElement::generator(field, ai.clone()).plus(&addend));
        g.steps.push(ElementarySlide {
            generator: ai.clone(),
            addend,
        });
        phi = phi.then(&g)?;
    }
    phi.verify()?;
    Ok(BirthMorphism {
        morphism: phi,
        upper,
        slack: la - lb,
    })
}

/// Output of [`partial_linearization`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Linearization {
    pub complex: FilteredComplex,
    /// Words `(m, w)` in `∂m` that pair a pure chord of length `≥ l` with a
    /// distinguished mixed chord below the window. They drop out of the
    /// quotient, so the induced map on such generators is the identity.
    pub below_window_words: Vec<(String, Word)>,
}

/// The partially linearized complex on distinguished mixed chords with
/// length in `window`, using `eps` on the pure chords of length `< l`.
///
/// Each word of `∂m` with exactly one mixed letter, that letter distinguished
/// and in the window, and every other letter pure of length `< l`,
/// contributes `coeff · Π ε(pure letters)` to that mixed letter. Pure chords
/// of length `< l` missing from `eps` count as zero.
pub fn partial_linearization(
    dga: &ChordDga,
    eps: &Augmentation,
    window: &Window,
    l: &ActionValue,
) -> Result<Linearization, DgaError> {
    let width = match (&window.lower, &window.upper) {
        (ActionValue::Finite(a), ActionValue::Finite(b)) => ActionValue::Finite(b - a),
        _ => ActionValue::PosInf,
    };
    if width > *l {
        return Err(DgaError::WindowTooWide { width, l: l.clone() });
    }
    let field = dga.field;
    let pure = dga.pure_sub_dga(l);
    let mut values = BTreeMap::new();
    for (label, v) in &eps.values {
        match dga.chord(label) {
            None => return Err(DgaError::AugmentationInvalid(format!("{label} is not a chord"))),
            Some(c) if c.is_mixed() && !v.is_zero() => {
                return Err(DgaError::AugmentationInvalid(format!("nonzero value on mixed chord {label}")))
            }
            Some(_) => {}
        }
    }
    for c in pure.chords() {
        values.insert(
            c.label.clone(),
            eps.get(&c.label).cloned().unwrap_or_else(|| field.zero()),
        );
    }
    let restricted = Augmentation::new(values);
    let report = check_augmentation(&pure, &restricted);
    if !report.is_valid() {
        return Err(DgaError::AugmentationInvalid(report.to_string()));
    }

    let in_window = |c: &Chord| c.is_distinguished_mixed() && window.contains(&c.length);
    let generators: Vec<Generator> = dga
        .chords()
        .filter(|c| in_window(c))
        .map(|c| Generator::new(c.label.clone(), c.length.clone(), c.degree))
        .collect();
    let mut differential = BTreeMap::new();
    let mut below_window_words = Vec::new();
    for g in &generators {
        let mut chain = Chain::zero();
        for (w, coeff) in dga.boundary(&g.id).terms() {
            let mut mixed = w.0.iter().filter(|x| dga.chords[*x].is_mixed());
            let (Some(m), None) = (mixed.next(), mixed.next()) else {
                continue;
            };
            let target = &dga.chords[m];
            if !target.is_distinguished_mixed() {
                continue;
            }
            let forbidden = w
                .0
                .iter()
                .find(|x| dga.chords[*x].is_pure() && restricted.get(x).is_none());
            if let Some(p) = forbidden {
                if in_window(target) {
                    return Err(DgaError::PureChordOfForbiddenLength {
                        mixed: g.id.clone(),
                        word: w.to_string(),
                        chord: p.clone(),
                    });
                }
                if window.lower > ActionValue::Finite(target.length.clone()) {
                    below_window_words.push((g.id.clone(), w.clone()));
                }
                continue;
            }
            if !in_window(target) {
                continue;
            }
            let mut value = coeff.clone();
            for x in w.0.iter().filter(|x| *x != m) {
                value = &value * restricted.get(x).expect("pure letter below l");
            }
            chain.add_term(m.clone(), value);
        }
        if !chain.is_zero() {
            differential.insert(g.id.clone(), chain);
        }
    }
    let complex = FilteredComplex::build(field, window.clone(), generators, differential)?;
    Ok(Linearization {
        complex,
        below_window_words,
    })
}
