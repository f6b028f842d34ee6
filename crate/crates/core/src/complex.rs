//! Filtered chain complexes with a half-open action window `[a, b)`.
//!
//! A [`FilteredComplex`] stores a finite basis of generators, each with an
//! exact rational action and an integer degree, together with a differential
//! that lowers degree by one and strictly lowers action. The basis is kept
//! sorted by `(action, id)`; that order is the "action order" used by every
//! triangularity statement in the crate.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::coefficients::{FieldError, FieldSpec, Rational, Scalar};
use crate::linalg::{self, Echelon, Matrix};

/// Element of the extended action line. Generator actions are always finite;
/// the infinite values appear as window bounds, bar endpoints and as the
/// action of the zero chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionValue {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ActionValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ActionValue::Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ActionValue::Finite(_))
    }
}

impl From<Rational> for ActionValue {
    fn from(q: Rational) -> Self {
        ActionValue::Finite(q)
    }
}

impl From<&Rational> for ActionValue {
    fn from(q: &Rational) -> Self {
        ActionValue::Finite(q.clone())
    }
}

impl fmt::Display for ActionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionValue::NegInf => write!(f, "-inf"),
            ActionValue::Finite(q) => write!(f, "{q}"),
            ActionValue::PosInf => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for ActionValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" => Ok(ActionValue::PosInf),
            "-inf" => Ok(ActionValue::NegInf),
            t => crate::coefficients::parse_rational(t)
                .map(ActionValue::Finite)
                .ok_or_else(|| format!("cannot parse action value `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub id: String,
    pub action: Rational,
    pub degree: i64,
}

impl Generator {
    pub fn new(id: impl Into<String>, action: Rational, degree: i64) -> Self {
        Generator {
            id: id.into(),
            action,
            degree,
        }
    }
}

/// Half-open action window `[lower, upper)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Window {
    pub lower: ActionValue,
    pub upper: ActionValue,
}

impl Window {
    pub fn new(lower: ActionValue, upper: ActionValue) -> Result<Self, ComplexError> {
        if lower >= upper || lower == ActionValue::PosInf || upper == ActionValue::NegInf {
            return Err(ComplexError::InvalidWindow { lower, upper });
        }
        Ok(Window { lower, upper })
    }

    pub fn unbounded() -> Self {
        Window {
            lower: ActionValue::NegInf,
            upper: ActionValue::PosInf,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let x = ActionValue::Finite(x.clone());
        self.lower <= x && x < self.upper
    }

    pub fn contains_window(&self, other: &Window) -> bool {
        self.lower <= other.lower && other.upper <= self.upper
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lower, self.upper)
    }
}

/// Sparse chain: generator id to nonzero coefficient.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Chain {
    terms: BTreeMap<String, Scalar>,
}

impl Chain {
    pub fn zero() -> Self {
        Chain::default()
    }

    pub fn term(id: impl Into<String>, coeff: Scalar) -> Self {
        let mut c = Chain::zero();
        c.add_term(id, coeff);
        c
    }

    pub fn from_terms<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = (S, Scalar)>,
        S: Into<String>,
    {
        let mut c = Chain::zero();
        for (id, s) in terms {
            c.add_term(id, s);
        }
        c
    }

    pub fn add_term(&mut self, id: impl Into<String>, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let id = id.into();
        match self.terms.get(&id) {
            Some(old) => {
                let sum = old + &coeff;
                if sum.is_zero() {
                    self.terms.remove(&id);
                } else {
                    self.terms.insert(id, sum);
                }
            }
            None => {
                self.terms.insert(id, coeff);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Chain, factor: &Scalar) {
        for (id, s) in &other.terms {
            self.add_term(id.clone(), s * factor);
        }
    }

    pub fn scaled(&self, factor: &Scalar) -> Chain {
        let mut c = Chain::zero();
        c.add_scaled(self, factor);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Scalar> {
        self.terms.get(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn remove(&mut self, id: &str) -> Option<Scalar> {
        self.terms.remove(id)
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(id, s)| {
                if s.is_one() {
                    id.clone()
                } else {
                    format!("{s}*{id}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("differential does not square to zero: d(d({generator})) = {residue}")]
    NotSquareZero { generator: String, residue: String },
    #[error("differential does not decrease action: {source_id} (action {source_action}) -> {target} (action {target_action})")]
    ActionIncrease {
        source_id: String,
        source_action: Rational,
        target: String,
        target_action: Rational,
    },
    #[error("differential does not lower degree by one: {source_id} (degree {source_degree}) -> {target} (degree {target_degree})")]
    DegreeMismatch {
        source_id: String,
        source_degree: i64,
        target: String,
        target_degree: i64,
    },
    #[error("generator {id} has action {action} outside the window {window}")]
    ActionOutsideWindow {
        id: String,
        action: Rational,
        window: Window,
    },
    #[error("duplicate generator id {0}")]
    DuplicateId(String),
    #[error("unknown generator {0}")]
    ForeignGenerator(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("window {inner} is not contained in {outer}")]
    WindowNotNested { inner: Window, outer: Window },
    #[error("level {level} lies outside the window {window}")]
    LevelOutsideWindow { level: ActionValue, window: Window },
    #[error("invalid window [{lower}, {upper})")]
    InvalidWindow {
        lower: ActionValue,
        upper: ActionValue,
    },
    #[error("base change is not action preserving at ({row}, {col})")]
    NotActionPreserving { row: String, col: String },
    #[error("base change mixes degrees at ({row}, {col})")]
    BaseChangeMixesDegrees { row: String, col: String },
    #[error("base change is singular")]
    SingularBaseChange,
}

/// A finite filtered complex with action window. Immutable after [`build`].
///
/// [`build`]: FilteredComplex::build
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredComplex {
    field: FieldSpec,
    window: Window,
    generators: Vec<Generator>,
    index: BTreeMap<String, usize>,
    // Sparse columns of the differential, entries sorted by row index.
    boundary: Vec<Vec<(usize, Scalar)>>,
}

impl FilteredComplex {
    /// Validates and assembles a complex. Generators missing from
    /// `differential` are cycles.
    pub fn build(
        field: FieldSpec,
        window: Window,
        mut generators: Vec<Generator>,
        differential: BTreeMap<String, Chain>,
    ) -> Result<Self, ComplexError> {
        Window::new(window.lower.clone(), window.upper.clone())?;
        generators.sort_by(|x, y| x.action.cmp(&y.action).then_with(|| x.id.cmp(&y.id)));
        let mut index = BTreeMap::new();
        for (i, g) in generators.iter().enumerate() {
            if index.insert(g.id.clone(), i).is_some() {
                return Err(ComplexError::DuplicateId(g.id.clone()));
            }
        }
        for g in &generators {
            if !window.contains(&g.action) {
                return Err(ComplexError::ActionOutsideWindow {
                    id: g.id.clone(),
                    action: g.action.clone(),
                    window: window.clone(),
                });
            }
        }
        let mut boundary = vec![Vec::new(); generators.len()];
        for (src, chain) in &differential {
            let j = *index
                .get(src)
                .ok_or_else(|| ComplexError::ForeignGenerator(src.clone()))?;
            let mut col = Vec::new();
            for (tgt, s) in chain.iter() {
                let i = *index
                    .get(tgt)
                    .ok_or_else(|| ComplexError::ForeignGenerator(tgt.clone()))?;
                if s.field() != field {
                    return Err(FieldError::FieldMismatch(field, s.field()).into());
                }
                col.push((i, s.clone()));
            }
            col.sort_by_key(|(i, _)| *i);
            boundary[j] = col;
        }
        let c = FilteredComplex {
            field,
            window,
            generators,
            index,
            boundary,
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), ComplexError> {
        for (j, col) in self.boundary.iter().enumerate() {
            let src = &self.generators[j];
            for (i, _) in col {
                let tgt = &self.generators[*i];
                if tgt.degree != src.degree - 1 {
                    return Err(ComplexError::DegreeMismatch {
                        source_id: src.id.clone(),
                        source_degree: src.degree,
                        target: tgt.id.clone(),
                        target_degree: tgt.degree,
                    });
                }
            }
            for (i, _) in col {
                let tgt = &self.generators[*i];
                if tgt.action >= src.action {
                    return Err(ComplexError::ActionIncrease {
                        source_id: src.id.clone(),
                        source_action: src.action.clone(),
                        target: tgt.id.clone(),
                        target_action: tgt.action.clone(),
                    });
                }
            }
        }
        for (j, g) in self.generators.iter().enumerate() {
            let dd = self.apply_sparse(&self.boundary[j]);
            if !dd.is_empty() {
                let residue = self.to_chain(&dd).to_string();
                return Err(ComplexError::NotSquareZero {
                    generator: g.id.clone(),
                    residue,
                });
            }
        }
        Ok(())
    }

    fn apply_sparse(&self, v: &[(usize, Scalar)]) -> Vec<(usize, Scalar)> {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (j, s) in v {
            for (i, t) in &self.boundary[*j] {
                let term = s * t;
                let entry = acc.entry(*i).or_insert_with(|| self.field.zero());
                *entry = &*entry + &term;
            }
        }
        acc.into_iter().filter(|(_, s)| !s.is_zero()).collect()
    }

    fn to_chain(&self, v: &[(usize, Scalar)]) -> Chain {
        Chain::from_terms(
            v.iter()
                .map(|(i, s)| (self.generators[*i].id.clone(), s.clone())),
        )
    }

    fn coords_of(&self, c: &Chain) -> Result<Vec<(usize, Scalar)>, ComplexError> {
        let mut out = Vec::new();
        for (id, s) in c.iter() {
            let i = self.index_of(id)?;
            if s.field() != self.field {
                return Err(FieldError::FieldMismatch(self.field, s.field()).into());
            }
            out.push((i, s.clone()));
        }
        out.sort_by_key(|(i, _)| *i);
        Ok(out)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    /// Generators in action order.
    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Result<usize, ComplexError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| ComplexError::ForeignGenerator(id.to_string()))
    }

    pub fn generator(&self, id: &str) -> Result<&Generator, ComplexError> {
        Ok(&self.generators[self.index_of(id)?])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    /// `∂e` for a single generator.
    pub fn boundary_of(&self, id: &str) -> Result<Chain, ComplexError> {
        Ok(self.to_chain(&self.boundary[self.index_of(id)?]))
    }

    /// Applies `∂` to an arbitrary chain.
    pub fn apply(&self, x: &Chain) -> Result<Chain, ComplexError> {
        Ok(self.to_chain(&self.apply_sparse(&self.coords_of(x)?)))
    }

    /// The full differential as a map, omitting cycles.
    pub fn differential(&self) -> BTreeMap<String, Chain> {
        self.generators
            .iter()
            .enumerate()
            .filter(|(j, _)| !self.boundary[*j].is_empty())
            .map(|(j, g)| (g.id.clone(), self.to_chain(&self.boundary[j])))
            .collect()
    }

    /// Dense matrix of `∂` in action order; column `j` is `∂e_j`.
    pub fn boundary_matrix(&self) -> Matrix {
        let n = self.len();
        let mut m = Matrix::zeros(self.field, n, n);
        for (j, col) in self.boundary.iter().enumerate() {
            for (i, s) in col {
                m.set(*i, j, s.clone());
            }
        }
        m
    }

    /// `ℓ(x)`: largest action among generators with nonzero coefficient,
    /// `-∞` for the zero chain.
    pub fn action_of(&self, x: &Chain) -> Result<ActionValue, ComplexError> {
        let mut best = ActionValue::NegInf;
        for (id, _) in x.iter() {
            let a = ActionValue::Finite(self.generator(id)?.action.clone());
            if a > best {
                best = a;
            }
        }
        Ok(best)
    }

    /// Sorted distinct generator actions.
    pub fn distinct_actions(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.generators.iter().map(|g| g.action.clone()).collect();
        v.dedup();
        v
    }

    /// Half the minimal gap between distinct actions; `None` with fewer than
    /// two distinct actions.
    pub fn epsilon(&self) -> Option<Rational> {
        let acts = self.distinct_actions();
        acts.windows(2)
            .map(|w| &w[1] - &w[0])
            .min()
            .map(|gap| gap / Rational::from_integer(2.into()))
    }

    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.generators.iter().map(|g| g.degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    fn rebuild(&self, window: Window, keep: impl Fn(&Generator) -> bool) -> Result<Self, ComplexError> {
        let gens: Vec<Generator> = self.generators.iter().filter(|g| keep(g)).cloned().collect();
        let mut diff = BTreeMap::new();
        for (j, g) in self.generators.iter().enumerate() {
            if !keep(g) {
                continue;
            }
            let chain = Chain::from_terms(
                self.boundary[j]
                    .iter()
                    .filter(|(i, _)| keep(&self.generators[*i]))
                    .map(|(i, s)| (self.generators[*i].id.clone(), s.clone())),
            );
            if !chain.is_zero() {
                diff.insert(g.id.clone(), chain);
            }
        }
        FilteredComplex::build(self.field, window, gens, diff)
    }

    /// Quotient/subcomplex for a nested window `[a', b')`: terms below `a'`
    /// are deleted, generators at or above `b'` are dropped.
    pub fn restrict_window(&self, lower: ActionValue, upper: ActionValue) -> Result<Self, ComplexError> {
        let inner = Window::new(lower, upper)?;
        if !self.window.contains_window(&inner) {
            return Err(ComplexError::WindowNotNested {
                inner,
                outer: self.window.clone(),
            });
        }
        self.rebuild(inner.clone(), |g| inner.contains(&g.action))
    }

    /// Subcomplex spanned by generators of action `< c`, keeping the window.
    pub fn sublevel(&self, c: &ActionValue) -> Result<Self, ComplexError> {
        if *c < self.window.lower || *c > self.window.upper {
            return Err(ComplexError::LevelOutsideWindow {
                level: c.clone(),
                window: self.window.clone(),
            });
        }
        self.rebuild(self.window.clone(), |g| ActionValue::Finite(g.action.clone()) < *c)
    }

    /// Indices (in action order) of the generators of a given degree.
    pub fn degree_basis(&self, degree: i64) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.generators[i].degree == degree)
            .collect()
    }

    /// `∂e_j` in the coordinates of `target` (a degree basis).
    fn local_column(&self, j: usize, target: &[usize]) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); target.len()];
        for (i, s) in &self.boundary[j] {
            if let Ok(pos) = target.binary_search(i) {
                v[pos] = s.clone();
            }
        }
        v
    }

    fn below(&self, i: usize, c: &ActionValue) -> bool {
        ActionValue::Finite(self.generators[i].action.clone()) < *c
    }

    /// Basis of the degree-`d` cycles supported on generators of action
    /// `< c`, in the coordinates of `degree_basis(d)`.
    pub fn cycles_below(&self, c: &ActionValue, degree: i64) -> Vec<Vec<Scalar>> {
        let basis = self.degree_basis(degree);
        let lower = self.degree_basis(degree - 1);
        let support: Vec<usize> = (0..basis.len()).filter(|&k| self.below(basis[k], c)).collect();
        let cols: Vec<Vec<Scalar>> = support
            .iter()
            .map(|&k| self.local_column(basis[k], &lower))
            .collect();
        linalg::kernel(self.field, lower.len(), &cols)
            .into_iter()
            .map(|z| {
                let mut full = vec![self.field.zero(); basis.len()];
                for (pos, &k) in support.iter().enumerate() {
                    full[k] = z[pos].clone();
                }
                full
            })
            .collect()
    }

    /// Boundaries of degree-`(d+1)` chains of action `< c`, in the
    /// coordinates of `degree_basis(d)` (a spanning set, not a basis).
    pub fn boundaries_below(&self, c: &ActionValue, degree: i64) -> Vec<Vec<Scalar>> {
        let basis = self.degree_basis(degree);
        self.degree_basis(degree + 1)
            .into_iter()
            .filter(|&j| self.below(j, c))
            .map(|j| self.local_column(j, &basis))
            .collect()
    }

    /// `dim H_d`, by exact Gaussian elimination.
    pub fn homology_rank(&self, degree: i64) -> usize {
        let n = self.degree_basis(degree).len();
        let z = self.cycles_below(&ActionValue::PosInf, degree).len();
        let b = linalg::span_dim(self.field, n, &self.boundaries_below(&ActionValue::PosInf, degree));
        z - b
    }

    /// Betti numbers of every degree carrying generators.
    pub fn betti_numbers(&self) -> BTreeMap<i64, usize> {
        self.degrees()
            .into_iter()
            .map(|d| (d, self.homology_rank(d)))
            .collect()
    }

    /// Rank of `φ_{c0,c1}: H_d(C^{<c0}) → H_d(C^{<c1})`, computed as
    /// `dim(Z^{<c0} + B^{<c1}) − dim B^{<c1}`.
    pub fn inclusion_rank(&self, c0: &ActionValue, c1: &ActionValue, degree: i64) -> usize {
        assert!(c0 <= c1, "inclusion_rank requires c0 <= c1");
        let n = self.degree_basis(degree).len();
        let mut e = Echelon::new(self.field, n);
        for b in self.boundaries_below(c1, degree) {
            e.insert(&b);
        }
        let db = e.dim();
        for z in self.cycles_below(c0, degree) {
            e.insert(&z);
        }
        e.dim() - db
    }

    /// Direct sum; the window becomes the hull of both windows.
    pub fn direct_sum(&self, other: &FilteredComplex) -> Result<Self, ComplexError> {
        if self.field != other.field {
            return Err(FieldError::FieldMismatch(self.field, other.field).into());
        }
        let window = Window {
            lower: self.window.lower.clone().min(other.window.lower.clone()),
            upper: self.window.upper.clone().max(other.window.upper.clone()),
        };
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        let mut diff = self.differential();
        diff.extend(other.differential());
        FilteredComplex::build(self.field, window, gens, diff)
    }

    /// Replaces the window, revalidating generator containment.
    pub fn with_window(&self, window: Window) -> Result<Self, ComplexError> {
        FilteredComplex::build(self.field, window, self.generators.clone(), self.differential())
    }

    /// Changes basis to `e'_j = Σ_i U_ij e_i` and returns the complex whose
    /// differential is `U⁻¹ ∂ U`, keeping generator ids, actions and degrees.
    /// `U` must be invertible, action preserving and degree homogeneous.
    pub fn apply_base_change(&self, u: &Matrix) -> Result<Self, ComplexError> {
        let n = self.len();
        assert_eq!((u.rows(), u.cols()), (n, n), "base change has wrong shape");
        for i in 0..n {
            for j in 0..n {
                if u.get(i, j).is_zero() {
                    continue;
                }
                let (gi, gj) = (&self.generators[i], &self.generators[j]);
                if gi.action > gj.action {
                    return Err(ComplexError::NotActionPreserving {
                        row: gi.id.clone(),
                        col: gj.id.clone(),
                    });
                }
                if gi.degree != gj.degree {
                    return Err(ComplexError::BaseChangeMixesDegrees {
                        row: gi.id.clone(),
                        col: gj.id.clone(),
                    });
                }
            }
        }
        let inv = u.inverse().ok_or(ComplexError::SingularBaseChange)?;
        let d = inv.mul(&self.boundary_matrix()).mul(u);
        self.with_matrix(&d)
    }

    /// Same generators, differential given densely in action order.
    pub fn with_matrix(&self, d: &Matrix) -> Result<Self, ComplexError> {
        let mut diff = BTreeMap::new();
        for (j, g) in self.generators.iter().enumerate() {
            let chain = Chain::from_terms(
                (0..self.len()).map(|i| (self.generators[i].id.clone(), d.get(i, j).clone())),
            );
            if !chain.is_zero() {
                diff.insert(g.id.clone(), chain);
            }
        }
        FilteredComplex::build(self.field, self.window.clone(), self.generators.clone(), diff)
    }

    /// Elementary handle-slide `e'_target = e_target + unit·addend`.
    pub fn handle_slide(&self, target: &str, addend: &Chain, unit: &Scalar) -> Result<Self, ComplexError> {
        let j = self.index_of(target)?;
        let mut u = Matrix::identity(self.field, self.len());
        for (id, s) in addend.iter() {
            let i = self.index_of(id)?;
            let v = u.get(i, j) + &(s * unit);
            u.set(i, j, v);
        }
        self.apply_base_change(&u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::int;

    fn pair(field: FieldSpec) -> FilteredComplex {
        FilteredComplex::build(
            field,
            Window::new(int(0).into(), int(10).into()).unwrap(),
            vec![Generator::new("c0", int(1), 0), Generator::new("c1", int(2), 1)],
            BTreeMap::from([("c1".to_string(), Chain::term("c0", field.one()))]),
        )
        .unwrap()
    }

    #[test]
    fn action_increase_rejected() {
        let f = FieldSpec::F2;
        let err = FilteredComplex::build(
            f,
            Window::unbounded(),
            vec![Generator::new("c0", int(2), 0), Generator::new("c1", int(2), 1)],
            BTreeMap::from([("c1".to_string(), Chain::term("c0", f.one()))]),
        )
        .unwrap_err();
        assert!(matches!(err, ComplexError::ActionIncrease { .. }));
    }

    #[test]
    fn action_of_cancels_first() {
        let c = pair(FieldSpec::Q);
        let f = c.field();
        let mut x = Chain::term("c0", f.one());
        x.add_term("c1", f.one());
        x.add_term("c1", f.from_i64(-1));
        assert_eq!(c.action_of(&x).unwrap(), ActionValue::Finite(int(1)));
        assert_eq!(c.action_of(&Chain::zero()).unwrap(), ActionValue::NegInf);
        assert!(matches!(
            c.action_of(&Chain::term("zz", f.one())),
            Err(ComplexError::ForeignGenerator(_))
        ));
    }

    #[test]
    fn quotient_kills_lower_generator() {
        let c = pair(FieldSpec::F2);
        let r = c
            .restrict_window(ActionValue::Finite(crate::coefficients::rat(3, 2)), int(3).into())
            .unwrap();
        assert_eq!(r.len(), 1);
        assert!(r.boundary_of("c1").unwrap().is_zero());
    }

    #[test]
    fn sublevel_extremes() {
        let c = pair(FieldSpec::F2);
        assert_eq!(c.sublevel(&int(10).into()).unwrap().len(), 2);
        assert_eq!(c.sublevel(&int(0).into()).unwrap().len(), 0);
        assert!(c.sublevel(&int(11).into()).is_err());
    }

    #[test]
    fn acyclic_pair_has_no_homology() {
        let c = pair(FieldSpec::Fp(5));
        assert_eq!(c.homology_rank(0), 0);
        assert_eq!(c.homology_rank(1), 0);
        assert_eq!(c.inclusion_rank(&int(2).into(), &int(2).into(), 0), 1);
        assert_eq!(c.inclusion_rank(&int(2).into(), &int(3).into(), 0), 0);
    }

    #[test]
    fn square_zero_witness() {
        let f = FieldSpec::F2;
        let err = FilteredComplex::build(
            f,
            Window::unbounded(),
            vec![
                Generator::new("a", int(1), 0),
                Generator::new("b", int(2), 1),
                Generator::new("c", int(3), 2),
            ],
            BTreeMap::from([
                ("b".to_string(), Chain::term("a", f.one())),
                ("c".to_string(), Chain::term("b", f.one())),
            ]),
        )
        .unwrap_err();
        assert_eq!(
            err,
            ComplexError::NotSquareZero {
                generator: "c".into(),
                residue: "a".into()
            }
        );
    }
}
