//! Barcodes of filtered complexes.
//!
//! Two independent engines are provided:
//!
//! * [`canonical_form`] + [`barcode_from_canonical`]: the standard
//!   left-to-right column reduction in action order, pairing each column with
//!   its lowest nonzero entry. Every pair `(killer, killed)` is a bar
//!   `[ℓ(killed), ℓ(killer))`, every unpaired generator a bar `[ℓ(e), ∞)`.
//! * [`barcode_definitional`]: counts bars directly from ranks of the maps
//!   `φ_{c0,c1}: H(C^{<c0}) → H(C^{<c1})` induced by inclusion of sublevel
//!   complexes, degree by degree. It shares no code with the reduction and
//!   serves as its oracle.
//!
//! Bars carry the degree of the class born at their start.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::coefficients::{Rational, Scalar};
use crate::complex::{ActionValue, FilteredComplex};
use crate::linalg::{self, Echelon, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bar {
    pub start: Rational,
    pub end: ActionValue,
    pub degree: i64,
}

impl Bar {
    pub fn finite(start: Rational, end: Rational, degree: i64) -> Self {
        Bar {
            start,
            end: ActionValue::Finite(end),
            degree,
        }
    }

    pub fn infinite(start: Rational, degree: i64) -> Self {
        Bar {
            start,
            end: ActionValue::PosInf,
            degree,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.end == ActionValue::PosInf
    }

    /// `None` for infinite bars.
    pub fn length(&self) -> Option<Rational> {
        self.end.finite().map(|e| e - &self.start)
    }

    /// `l ∈ [s, e)`.
    pub fn persists_at(&self, level: &ActionValue) -> bool {
        ActionValue::Finite(self.start.clone()) <= *level && *level < self.end
    }

    pub fn interval(&self) -> Interval {
        Interval {
            start: self.start.clone(),
            end: self.end.clone(),
        }
    }
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}) deg {}", self.start, self.end, self.degree)
    }
}

/// A bar without degree, as recovered from a persistence table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub start: Rational,
    pub end: ActionValue,
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

/// Finite multiset of bars, kept sorted so that equality is multiset
/// equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Barcode {
    bars: Vec<Bar>,
}

impl Barcode {
    pub fn new(mut bars: Vec<Bar>) -> Self {
        bars.sort();
        Barcode { bars }
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn union(&self, other: &Barcode) -> Barcode {
        let mut bars = self.bars.clone();
        bars.extend(other.bars.iter().cloned());
        Barcode::new(bars)
    }

    pub fn in_degree(&self, degree: i64) -> Barcode {
        Barcode::new(self.bars.iter().filter(|b| b.degree == degree).cloned().collect())
    }

    /// Sorted intervals with degrees forgotten.
    pub fn intervals(&self) -> Vec<Interval> {
        let mut v: Vec<Interval> = self.bars.iter().map(Bar::interval).collect();
        v.sort();
        v
    }

    /// Sorted, distinct finite endpoints (starts and finite ends).
    pub fn critical_values(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self
            .bars
            .iter()
            .flat_map(|b| std::iter::once(b.start.clone()).chain(b.end.finite().cloned()))
            .collect();
        v.sort();
        v.dedup();
        v
    }
}

impl fmt::Display for Barcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bars {
            writeln!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Number of bars containing `level`; with `start_below = Some(c)` only bars
/// starting strictly below `c` are counted.
pub fn persisting_count(b: &Barcode, level: &ActionValue, start_below: Option<&ActionValue>) -> usize {
    b.bars
        .iter()
        .filter(|bar| bar.persists_at(level))
        .filter(|bar| start_below.is_none_or(|c| ActionValue::Finite(bar.start.clone()) < *c))
        .count()
}

/// Number of bars starting at `l` plus number of bars ending at `l`.
pub fn endpoints_at(b: &Barcode, l: &ActionValue) -> usize {
    let starts = b
        .bars
        .iter()
        .filter(|bar| ActionValue::Finite(bar.start.clone()) == *l)
        .count();
    let ends = b.bars.iter().filter(|bar| bar.end == *l).count();
    starts + ends
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pair {
    pub killer: String,
    pub killed: String,
    /// `∂e'_killer = coefficient · e'_killed` in the unit-diagonal basis.
    pub coefficient: Scalar,
}

/// Output of the column reduction.
///
/// `base_change` has unit diagonal and is upper triangular in action order;
/// its column `j` expresses the new basis element `e'_j` in the old basis.
/// Killers are the reduction's `V` columns, killed elements are the reduced
/// boundaries rescaled to a unit leading entry, so `∂e'_killer` is a nonzero
/// multiple of `e'_killed`. [`BarannikovForm::normalized`] rescales the
/// killers so that multiple becomes exactly 1, at the cost of the unit
/// diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarannikovForm {
    pub ids: Vec<String>,
    pub base_change: Matrix,
    pub pairs: Vec<Pair>,
    pub unpaired: Vec<String>,
}

impl BarannikovForm {
    /// `U⁻¹ ∂ U` for the stored base change.
    pub fn transformed_differential(&self, c: &FilteredComplex) -> Matrix {
        let inv = self.base_change.inverse().expect("unit-diagonal base change");
        inv.mul(&c.boundary_matrix()).mul(&self.base_change)
    }

    /// Base change whose killers satisfy `∂e'_killer = e'_killed` exactly.
    pub fn normalized(&self) -> Matrix {
        let mut u = self.base_change.clone();
        for p in &self.pairs {
            let j = self.ids.iter().position(|id| *id == p.killer).expect("killer id");
            let inv = p.coefficient.inv().expect("nonzero pivot");
            let col: Vec<Scalar> = u.column(j).iter().map(|x| x * &inv).collect();
            u.set_column(j, &col);
        }
        u
    }

    /// Checks every structural invariant against the source complex.
    pub fn verify(&self, c: &FilteredComplex) -> Result<(), String> {
        let n = c.len();
        let gens = c.generators();
        for i in 0..n {
            if !self.base_change.get(i, i).is_one() {
                return Err(format!("diagonal entry {i} is not 1"));
            }
            for j in 0..n {
                if !self.base_change.get(i, j).is_zero() && (i > j || gens[i].action > gens[j].action) {
                    return Err(format!("base change entry ({i}, {j}) breaks action order"));
                }
            }
        }
        let mut seen: Vec<&str> = self.unpaired.iter().map(String::as_str).collect();
        for p in &self.pairs {
            seen.push(&p.killer);
            seen.push(&p.killed);
            let (x, y) = (c.generator(&p.killer).map_err(|e| e.to_string())?, c.generator(&p.killed).map_err(|e| e.to_string())?);
            if y.action >= x.action {
                return Err(format!("pair ({}, {}) does not decrease action", p.killer, p.killed));
            }
        }
        seen.sort_unstable();
        let mut all: Vec<&str> = gens.iter().map(|g| g.id.as_str()).collect();
        all.sort_unstable();
        if seen != all {
            return Err("pairs and unpaired do not partition the basis".into());
        }
        let normalized = self.normalized();
        let inv = normalized.inverse().ok_or("normalized base change is singular")?;
        let d = inv.mul(&c.boundary_matrix()).mul(&normalized);
        let mut expected = Matrix::zeros(c.field(), n, n);
        for p in &self.pairs {
            let i = c.index_of(&p.killed).map_err(|e| e.to_string())?;
            let j = c.index_of(&p.killer).map_err(|e| e.to_string())?;
            expected.set(i, j, c.field().one());
        }
        if d != expected {
            return Err("transformed differential is not the pairing matrix".into());
        }
        Ok(())
    }
}

fn low(col: &[Scalar]) -> Option<usize> {
    col.iter().rposition(|x| !x.is_zero())
}

/// Standard column reduction in action order.
pub fn canonical_form(c: &FilteredComplex) -> BarannikovForm {
    let n = c.len();
    let field = c.field();
    let d = c.boundary_matrix();
    let mut r: Vec<Vec<Scalar>> = (0..n).map(|j| d.column(j)).collect();
    let mut v: Vec<Vec<Scalar>> = (0..n)
        .map(|j| {
            let mut e = vec![field.zero(); n];
            e[j] = field.one();
            e
        })
        .collect();
    let mut pivot_col: HashMap<usize, usize> = HashMap::new();
    for j in 0..n {
        while let Some(i) = low(&r[j]) {
            let Some(&k) = pivot_col.get(&i) else {
                pivot_col.insert(i, j);
                break;
            };
            let factor = (&r[j][i] * &r[k][i].inv().expect("pivot is nonzero")).neg_ref();
            let (rk, vk) = (r[k].clone(), v[k].clone());
            linalg::axpy(&mut r[j], &factor, &rk);
            linalg::axpy(&mut v[j], &factor, &vk);
        }
    }

    let ids: Vec<String> = c.generators().iter().map(|g| g.id.clone()).collect();
    let mut base = Matrix::identity(field, n);
    let mut pairs = Vec::new();
    let mut killed = vec![false; n];
    let mut killers: Vec<(usize, usize)> = pivot_col.iter().map(|(&i, &j)| (j, i)).collect();
    killers.sort_unstable();
    for &(j, i) in &killers {
        killed[i] = true;
        let coefficient = r[j][i].clone();
        let inv = coefficient.inv().expect("pivot is nonzero");
        let col: Vec<Scalar> = r[j].iter().map(|x| x * &inv).collect();
        base.set_column(i, &col);
        pairs.push(Pair {
            killer: ids[j].clone(),
            killed: ids[i].clone(),
            coefficient,
        });
    }
    let mut unpaired = Vec::new();
    for j in 0..n {
        if killed[j] {
            continue;
        }
        base.set_column(j, &v[j]);
        if r[j].iter().all(Scalar::is_zero) {
            unpaired.push(ids[j].clone());
        }
    }
    BarannikovForm {
        ids,
        base_change: base,
        pairs,
        unpaired,
    }
}

pub fn barcode_from_canonical(form: &BarannikovForm, c: &FilteredComplex) -> Barcode {
    let gen = |id: &str| c.generator(id).expect("form computed from this complex");
    let mut bars = Vec::new();
    for p in &form.pairs {
        let (x, y) = (gen(&p.killer), gen(&p.killed));
        bars.push(Bar::finite(y.action.clone(), x.action.clone(), y.degree));
    }
    for id in &form.unpaired {
        let e = gen(id);
        bars.push(Bar::infinite(e.action.clone(), e.degree));
    }
    Barcode::new(bars)
}

/// Convenience: reduction engine end to end.
pub fn barcode(c: &FilteredComplex) -> Barcode {
    barcode_from_canonical(&canonical_form(c), c)
}

/// Rank data of one degree, memoized on the sublevel sets actually reached.
struct DegreeRanks<'a> {
    c: &'a FilteredComplex,
    degree: i64,
    dim: usize,
    cycles: HashMap<usize, Vec<Vec<Scalar>>>,
    boundaries: HashMap<usize, Vec<Vec<Scalar>>>,
    joint: HashMap<(usize, usize), usize>,
}

impl<'a> DegreeRanks<'a> {
    fn new(c: &'a FilteredComplex, degree: i64) -> Self {
        DegreeRanks {
            c,
            degree,
            dim: c.degree_basis(degree).len(),
            cycles: HashMap::new(),
            boundaries: HashMap::new(),
            joint: HashMap::new(),
        }
    }

    fn count_below(&self, level: &ActionValue, degree: i64) -> usize {
        self.c
            .generators()
            .iter()
            .filter(|g| g.degree == degree && ActionValue::Finite(g.action.clone()) < *level)
            .count()
    }

    /// `dim(Z^{<c0} + B^{<c1})`.
    fn joint_dim(&mut self, c0: &ActionValue, c1: &ActionValue) -> usize {
        let key = (self.count_below(c0, self.degree), self.count_below(c1, self.degree + 1));
        if let Some(&d) = self.joint.get(&key) {
            return d;
        }
        let z = self
            .cycles
            .entry(key.0)
            .or_insert_with(|| self.c.cycles_below(c0, self.degree))
            .clone();
        let b = self
            .boundaries
            .entry(key.1)
            .or_insert_with(|| self.c.boundaries_below(c1, self.degree))
            .clone();
        let mut e = Echelon::new(self.c.field(), self.dim);
        for x in z.iter().chain(b.iter()) {
            e.insert(x);
        }
        self.joint.insert(key, e.dim());
        e.dim()
    }

    fn boundary_dim(&mut self, c: &ActionValue) -> usize {
        self.joint_dim(&ActionValue::NegInf, c)
    }

    fn homology_dim(&mut self, c: &ActionValue) -> usize {
        self.joint_dim(c, &ActionValue::NegInf) - self.boundary_dim(c)
    }

    fn rank_phi(&mut self, c0: &ActionValue, c1: &ActionValue) -> usize {
        self.joint_dim(c0, c1) - self.boundary_dim(c1)
    }
}

/// Barcode computed from the definition: for each candidate start `s` (a
/// generator action) the number of bars starting at `s` is
/// `dim coker φ_{s,s+ε}`, and the number of those persisting at `l ≥ s` is
/// `rank φ_{s+ε,l+ε} − rank φ_{s,l+ε}`. `ε` is half the smallest gap between
/// distinct actions.
pub fn barcode_definitional(c: &FilteredComplex) -> Barcode {
    let levels = c.distinct_actions();
    let eps = c.epsilon().unwrap_or_else(Rational::one);
    let up = |x: &Rational| ActionValue::Finite(x + &eps);
    let at = |x: &Rational| ActionValue::Finite(x.clone());
    let mut bars = Vec::new();
    for degree in c.degrees() {
        let mut ranks = DegreeRanks::new(c, degree);
        for (i, s) in levels.iter().enumerate() {
            let starting = ranks.homology_dim(&up(s)) - ranks.rank_phi(&at(s), &up(s));
            if starting == 0 {
                continue;
            }
            let persisting: Vec<usize> = levels[i..]
                .iter()
                .map(|l| ranks.rank_phi(&up(s), &up(l)) - ranks.rank_phi(&at(s), &up(l)))
                .collect();
            assert_eq!(persisting[0], starting, "every bar persists at its own start");
            for k in 1..persisting.len() {
                let ending = persisting[k - 1]
                    .checked_sub(persisting[k])
                    .expect("persistence counts are non-increasing");
                for _ in 0..ending {
                    bars.push(Bar::finite(s.clone(), levels[i + k].clone(), degree));
                }
            }
            for _ in 0..*persisting.last().expect("non-empty") {
                bars.push(Bar::infinite(s.clone(), degree));
            }
        }
    }
    Barcode::new(bars)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecoveryError {
    #[error("inconsistent persistence table: {0}")]
    InconsistentTable(String),
}

/// Data from which a barcode can be recovered: the critical values
/// `c_1 < … < c_k` and, for each start `c_j` and probe `l_i` (`j ≤ i`), the
/// number of bars starting at `c_j` that persist at `l_i`. Probes are the
/// midpoints `(c_i + c_{i+1})/2` and `c_k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PersistenceTable {
    pub critical: Vec<Rational>,
    /// `counts[j][i]`; entries with `i < j` are ignored.
    pub counts: Vec<Vec<usize>>,
}

impl PersistenceTable {
    pub fn probes(critical: &[Rational]) -> Vec<Rational> {
        let two = Rational::from_integer(2.into());
        let mut p: Vec<Rational> = critical.windows(2).map(|w| (&w[0] + &w[1]) / &two).collect();
        if let Some(top) = critical.last() {
            p.push(top + Rational::one());
        }
        p
    }
}

pub fn extract(b: &Barcode) -> PersistenceTable {
    let critical = b.critical_values();
    let probes = PersistenceTable::probes(&critical);
    let counts = critical
        .iter()
        .enumerate()
        .map(|(j, cj)| {
            probes
                .iter()
                .enumerate()
                .map(|(i, li)| {
                    if i < j {
                        return 0;
                    }
                    let level = ActionValue::Finite(li.clone());
                    b.bars
                        .iter()
                        .filter(|bar| bar.start == *cj && bar.persists_at(&level))
                        .count()
                })
                .collect()
        })
        .collect();
    PersistenceTable { critical, counts }
}

/// Inverse of [`extract`] up to degrees.
pub fn recover(table: &PersistenceTable) -> Result<Vec<Interval>, RecoveryError> {
    let k = table.critical.len();
    let bad = |m: String| Err(RecoveryError::InconsistentTable(m));
    if table.critical.windows(2).any(|w| w[0] >= w[1]) {
        return bad("critical values are not strictly increasing".into());
    }
    if table.counts.len() != k || table.counts.iter().any(|row| row.len() != k) {
        return bad(format!("expected a {k}x{k} table"));
    }
    let mut out = Vec::new();
    for (j, row) in table.counts.iter().enumerate() {
        for i in (j + 1)..k {
            let Some(ending) = row[i - 1].checked_sub(row[i]) else {
                return bad(format!(
                    "bars starting at {} increase from {} at probe {} to {} at probe {}",
                    table.critical[j],
                    row[i - 1],
                    i - 1,
                    row[i],
                    i
                ));
            };
            for _ in 0..ending {
                out.push(Interval {
                    start: table.critical[j].clone(),
                    end: ActionValue::Finite(table.critical[i].clone()),
                });
            }
        }
        for _ in 0..row[k - 1] {
            out.push(Interval {
                start: table.critical[j].clone(),
                end: ActionValue::PosInf,
            });
        }
    }
    out.sort();
    Ok(out)
}

/// One line per bar, `[s, e) deg d`.
pub fn render_table(b: &Barcode) -> String {
    b.to_string()
}

/// `start,end,degree` rows for plotting.
pub fn render_csv(b: &Barcode) -> String {
    let mut s = String::from("start,end,degree\n");
    for bar in &b.bars {
        s.push_str(&format!("{},{},{}\n", bar.start, bar.end, bar.degree));
    }
    s
}

/// Text bar diagram, one line per bar, scaled to `width` columns between the
/// smallest and largest finite endpoint. Infinite bars run off the right
/// edge as `>`.
pub fn render_diagram(b: &Barcode, width: usize) -> String {
    let width = width.max(2);
    let crit = b.critical_values();
    let (Some(lo), Some(hi)) = (crit.first(), crit.last()) else {
        return String::new();
    };
    let span = if hi > lo { hi - lo } else { Rational::one() };
    let col = |x: &Rational| -> usize {
        let scaled = (x - lo) * Rational::from_integer(((width - 1) as i64).into()) / &span;
        scaled.round().to_integer().to_usize().unwrap_or(0).min(width - 1)
    };
    let labels: Vec<String> = b.bars.iter().map(Bar::to_string).collect();
    let pad = labels.iter().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    for (bar, label) in b.bars.iter().zip(&labels) {
        let s = col(&bar.start);
        let mut line = vec![' '; width + 1];
        match bar.end.finite() {
            Some(e) => {
                let e = col(e).max(s + 1).min(width);
                for c in line.iter_mut().take(e).skip(s) {
                    *c = '=';
                }
            }
            None => {
                for c in line.iter_mut().take(width).skip(s) {
                    *c = '=';
                }
                line[width] = '>';
            }
        }
        let body: String = line.into_iter().collect();
        out.push_str(&format!("{label:<pad$} |{}\n", body.trim_end()));
    }
    out
}

/// Bars grouped by degree.
pub fn by_degree(b: &Barcode) -> BTreeMap<i64, Vec<Bar>> {
    let mut m: BTreeMap<i64, Vec<Bar>> = BTreeMap::new();
    for bar in &b.bars {
        m.entry(bar.degree).or_default().push(bar.clone());
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{int, rat, FieldSpec};
    use crate::complex::{Chain, Generator, Window};

    fn four_generator(field: FieldSpec) -> FilteredComplex {
        let one = field.one();
        FilteredComplex::build(
            field,
            Window::unbounded(),
            vec![
                Generator::new("y1", int(1), 0),
                Generator::new("y2", int(2), 0),
                Generator::new("x1", int(3), 1),
                Generator::new("x2", int(4), 1),
            ],
            BTreeMap::from([
                ("x1".to_string(), Chain::from_terms([("y1", one.clone()), ("y2", one.clone())])),
                ("x2".to_string(), Chain::term("y2", one)),
            ]),
        )
        .unwrap()
    }

    #[test]
    fn four_generator_pairing() {
        let c = four_generator(FieldSpec::F2);
        let form = canonical_form(&c);
        let mut pairs: Vec<(String, String)> = form
            .pairs
            .iter()
            .map(|p| (p.killer.clone(), p.killed.clone()))
            .collect();
        pairs.sort();
        assert_eq!(
            pairs,
            vec![("x1".into(), "y2".into()), ("x2".into(), "y1".into())]
        );
        form.verify(&c).unwrap();
        let b = barcode_from_canonical(&form, &c);
        assert_eq!(b, barcode_definitional(&c));
        assert_eq!(
            b,
            Barcode::new(vec![Bar::finite(int(1), int(4), 0), Bar::finite(int(2), int(3), 0)])
        );
    }

    #[test]
    fn equal_actions_give_two_infinite_bars() {
        let c = FilteredComplex::build(
            FieldSpec::Q,
            Window::unbounded(),
            vec![Generator::new("a", int(1), 0), Generator::new("b", int(1), 0)],
            BTreeMap::new(),
        )
        .unwrap();
        let expected = Barcode::new(vec![Bar::infinite(int(1), 0), Bar::infinite(int(1), 0)]);
        assert_eq!(barcode(&c), expected);
        assert_eq!(barcode_definitional(&c), expected);
    }

    #[test]
    fn persisting_and_endpoints() {
        let b = Barcode::new(vec![Bar::finite(int(1), int(2), 0), Bar::infinite(int(1), 0)]);
        assert_eq!(persisting_count(&b, &rat(3, 2).into(), None), 2);
        assert_eq!(persisting_count(&b, &int(2).into(), None), 1);
        assert_eq!(persisting_count(&b, &int(2).into(), Some(&int(1).into())), 0);
        let single = Barcode::new(vec![Bar::finite(int(1), int(2), 0)]);
        assert_eq!(endpoints_at(&single, &int(1).into()), 1);
        assert_eq!(endpoints_at(&single, &int(2).into()), 1);
        assert_eq!(endpoints_at(&single, &rat(3, 2).into()), 0);
    }

    #[test]
    fn roundtrip_and_inconsistency() {
        let b = Barcode::new(vec![
            Bar::finite(int(1), int(2), 0),
            Bar::infinite(int(1), 0),
            Bar::infinite(int(3), 1),
        ]);
        assert_eq!(recover(&extract(&b)).unwrap(), b.intervals());
        assert_eq!(recover(&extract(&Barcode::default())).unwrap(), vec![]);
        let bad = PersistenceTable {
            critical: vec![int(1), int(2), int(3)],
            counts: vec![vec![1, 2, 2], vec![0, 0, 0], vec![0, 0, 0]],
        };
        assert!(matches!(recover(&bad), Err(RecoveryError::InconsistentTable(_))));
    }

    #[test]
    fn diagram_shape() {
        let b = Barcode::new(vec![Bar::finite(int(0), int(2), 0), Bar::infinite(int(1), 1)]);
        let d = render_diagram(&b, 10);
        let lines: Vec<&str> = d.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("[0, 2) deg 0"));
        assert!(lines[1].ends_with('>'));
    }
}
