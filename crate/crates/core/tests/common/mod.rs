//! Independent oracles and hand-built fixtures shared by the integration
//! tests. The oracles use plain dense Gaussian elimination and direct
//! substitution, not the library's reduction code.

#![allow(dead_code)]

use std::collections::BTreeMap;

use chordbar::coefficients::{int, FieldSpec, Rational, Scalar};
use chordbar::complex::{ActionValue, Chain, FilteredComplex, Window};
use chordbar::dga::{AlgebraElement, Augmentation, Chord, ChordDga, Word};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const FIELDS: [FieldSpec; 3] = [FieldSpec::F2, FieldSpec::Fp(5), FieldSpec::Q];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rank of the span of `vectors` by row reduction.
pub fn rank(field: FieldSpec, vectors: &[Vec<Scalar>]) -> usize {
    let mut rows: Vec<Vec<Scalar>> = vectors.to_vec();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        let pivot: Vec<Scalar> = rows[r].iter().map(|x| x * &inv).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        rows[r] = pivot;
        r += 1;
    }
    let _ = field;
    r
}

fn coords(c: &FilteredComplex, chain: &Chain, ids: &[String]) -> Vec<Scalar> {
    ids.iter()
        .map(|id| chain.get(id).cloned().unwrap_or_else(|| c.field().zero()))
        .collect()
}

/// Rank of `H_d(C^{<c}) → H_d(C^{<c'})` for `c ≤ c'`, from ranks only:
/// `rank(B' + V_c) − rank B' − rank ∂_d|_{<c}`, with `B'` the degree-`d`
/// boundaries of generators below `c'` and `V_c` the degree-`d` generators
/// below `c`.
pub fn inclusion_rank_oracle(c: &FilteredComplex, lo: &ActionValue, hi: &ActionValue, d: i64) -> usize {
    let field = c.field();
    let below = |g: &chordbar::complex::Generator, lvl: &ActionValue| ActionValue::Finite(g.action.clone()) < *lvl;
    let ids_d: Vec<String> = c.generators().iter().filter(|g| g.degree == d).map(|g| g.id.clone()).collect();
    let ids_dm: Vec<String> = c.generators().iter().filter(|g| g.degree == d - 1).map(|g| g.id.clone()).collect();
    let b_hi: Vec<Vec<Scalar>> = c
        .generators()
        .iter()
        .filter(|g| g.degree == d + 1 && below(g, hi))
        .map(|g| coords(c, &c.boundary_of(&g.id).unwrap(), &ids_d))
        .collect();
    let v_lo: Vec<Vec<Scalar>> = ids_d
        .iter()
        .enumerate()
        .filter(|(_, id)| below(c.generator(id).unwrap(), lo))
        .map(|(k, _)| (0..ids_d.len()).map(|j| if j == k { field.one() } else { field.zero() }).collect())
        .collect();
    let d_lo: Vec<Vec<Scalar>> = c
        .generators()
        .iter()
        .filter(|g| g.degree == d && below(g, lo))
        .map(|g| coords(c, &c.boundary_of(&g.id).unwrap(), &ids_dm))
        .collect();
    let mut sum = b_hi.clone();
    sum.extend(v_lo);
    rank(field, &sum) - rank(field, &b_hi) - rank(field, &d_lo)
}

/// `∂∂g` computed term by term for every generator.
pub fn square_is_zero(c: &FilteredComplex) -> bool {
    c.generators().iter().all(|g| {
        let mut out = Chain::zero();
        for (id, s) in c.boundary_of(&g.id).unwrap().iter() {
            out.add_scaled(&c.boundary_of(id).unwrap(), s);
        }
        out.is_zero()
    })
}

/// Linearization by full substitution `c ↦ c + ε(c)` on pure chords shorter
/// than `l`, keeping single-letter words on distinguished mixed chords in
/// the window.
pub fn linearization_oracle(
    dga: &ChordDga,
    eps: &Augmentation,
    window: &Window,
    l: &ActionValue,
) -> BTreeMap<String, BTreeMap<String, Scalar>> {
    let field = dga.field();
    let in_window = |c: &Chord| c.is_distinguished_mixed() && window.contains(&c.length);
    let shifted = |label: &str| -> AlgebraElement {
        let c = dga.chord(label).unwrap();
        let g = AlgebraElement::generator(field, label);
        if c.is_pure() && ActionValue::Finite(c.length.clone()) < *l {
            let v = eps.get(label).cloned().unwrap_or_else(|| field.zero());
            g.plus(&AlgebraElement::constant(field, v))
        } else {
            g
        }
    };
    let mut out = BTreeMap::new();
    for m in dga.chords().filter(|c| in_window(c)) {
        let mut total = AlgebraElement::zero(field);
        for (w, s) in dga.boundary(&m.label).terms() {
            let mut acc = AlgebraElement::constant(field, s.clone());
            for x in w.letters() {
                acc = acc.mul(&shifted(x));
            }
            total = total.plus(&acc);
        }
        let mut row = BTreeMap::new();
        for (w, s) in total.terms() {
            if let [x] = w.letters() {
                if in_window(dga.chord(x).unwrap()) && !s.is_zero() {
                    row.insert(x.clone(), s.clone());
                }
            }
        }
        out.insert(m.label.clone(), row);
    }
    out
}

pub fn el(f: FieldSpec, terms: &[(i64, &[&str])]) -> AlgebraElement {
    AlgebraElement::from_terms(f, terms.iter().map(|(c, w)| (Word::from_labels(w.iter().copied()), f.from_i64(*c))))
}

pub fn dga(f: FieldSpec, chords: &[(&str, i64, i64)], diff: &[(&str, AlgebraElement)]) -> ChordDga {
    ChordDga::new(
        f,
        chords.iter().map(|(l, len, deg)| Chord::pure(*l, int(*len), *deg, 0)).collect(),
        diff.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
    )
    .unwrap()
}

/// Hand-built handle-slide: `Φ(x) = x + u·w` between `minus` and `plus`.
pub struct SlideFixture {
    pub name: &'static str,
    pub minus: ChordDga,
    pub plus: ChordDga,
    pub generator: &'static str,
    pub word: Word,
    pub unit: Scalar,
}

/// Hand-built birth of `(a, b)` with `∂⁻a = b`.
pub struct BirthFixture {
    pub name: &'static str,
    pub minus: ChordDga,
    pub plus: ChordDga,
    pub a: &'static str,
    pub b: &'static str,
}

pub fn slide_fixtures() -> Vec<SlideFixture> {
    let mut out = Vec::new();
    for f in FIELDS {
        let u = f.from_i64(if f == FieldSpec::F2 { 1 } else { 2 });

        // Sliding x over z with ∂z = w: ∂⁺x = y − u·w.
        let chords = [("w", 1, 0), ("y", 2, 0), ("z", 3, 1), ("x", 5, 1)];
        let minus = dga(f, &chords, &[("x", el(f, &[(1, &["y"])])), ("z", el(f, &[(1, &["w"])]))]);
        let mut dx = el(f, &[(1, &["y"])]);
        dx.add_term(Word::letter("w"), -&u);
        let plus = dga(f, &chords, &[("x", dx), ("z", el(f, &[(1, &["w"])]))]);
        out.push(SlideFixture {
            name: "single letter",
            minus,
            plus,
            generator: "x",
            word: Word::letter("z"),
            unit: u.clone(),
        });

        // Sliding over a product y·z picks up the Leibniz image y·w.
        let chords = [("v", 1, 0), ("w", 1, 0), ("y", 2, 0), ("z", 3, 1), ("x", 7, 1)];
        let minus = dga(f, &chords, &[("x", el(f, &[(1, &["v"])])), ("z", el(f, &[(1, &["w"])]))]);
        let plus = dga(
            f,
            &chords,
            &[("x", el(f, &[(1, &["v"]), (-1, &["y", "w"])])), ("z", el(f, &[(1, &["w"])]))],
        );
        out.push(SlideFixture {
            name: "product word",
            minus,
            plus,
            generator: "x",
            word: Word::from_labels(["y", "z"]),
            unit: f.one(),
        });

        // The slid chord appears in another differential: ∂⁺r = x + u·z.
        let chords = [("z", 3, 1), ("x", 4, 1), ("r", 6, 2)];
        let minus = dga(f, &chords, &[("r", el(f, &[(1, &["x"])]))]);
        let mut dr = el(f, &[(1, &["x"])]);
        dr.add_term(Word::letter("z"), u.clone());
        let plus = dga(f, &chords, &[("r", dr)]);
        out.push(SlideFixture {
            name: "slid chord downstream",
            minus,
            plus,
            generator: "x",
            word: Word::letter("z"),
            unit: u,
        });
    }
    out
}

pub fn birth_fixtures() -> Vec<BirthFixture> {
    let mut out = Vec::new();
    for f in FIELDS {
        // a1 gains a branch through the new pair.
        let chords = [("b1", 1, 0), ("b", 2, 0), ("a", 3, 1), ("a1", 4, 1)];
        let minus = dga(f, &chords, &[("a", el(f, &[(1, &["b"])])), ("a1", el(f, &[(-1, &["b1"])]))]);
        let plus = dga(
            f,
            &chords,
            &[("a", el(f, &[(1, &["b"])])), ("a1", el(f, &[(1, &["b"]), (-1, &["b1"])]))],
        );
        out.push(BirthFixture {
            name: "linear branch",
            minus,
            plus,
            a: "a",
            b: "b",
        });

        // The new pair appears after an odd letter: ∂⁺a1 = c·b.
        let chords = [("c", 1, 1), ("b", 2, 0), ("a", 3, 1), ("a1", 5, 2)];
        let minus = dga(f, &chords, &[("a", el(f, &[(1, &["b"])]))]);
        let plus = dga(f, &chords, &[("a", el(f, &[(1, &["b"])])), ("a1", el(f, &[(1, &["c", "b"])]))]);
        out.push(BirthFixture {
            name: "product branch",
            minus,
            plus,
            a: "a",
            b: "b",
        });

        // Several chords above the pair.
        let chords = [("b", 1, 0), ("a", 2, 1), ("e", 3, 1), ("a1", 4, 1), ("a2", 6, 2)];
        let minus = dga(f, &chords, &[("a", el(f, &[(1, &["b"])]))]);
        let plus = dga(
            f,
            &chords,
            &[
                ("a", el(f, &[(1, &["b"])])),
                ("a1", el(f, &[(1, &["b"])])),
                ("a2", el(f, &[(1, &["e", "b"])])),
            ],
        );
        out.push(BirthFixture {
            name: "stacked branches",
            minus,
            plus,
            a: "a",
            b: "b",
        });
    }
    out
}

/// Rational helper for test literals.
pub fn q(n: i64, d: i64) -> Rational {
    chordbar::coefficients::rat(n, d)
}
