//! Dense exact linear algebra over a [`FieldSpec`].
//!
//! The complexes handled here are small (tens of generators), so plain dense
//! Gaussian elimination is both the simplest and the fastest option.

use crate::coefficients::{FieldSpec, Scalar};

/// Incrementally maintained row-echelon basis of a subspace of `field^len`.
///
/// Rows are stored reduced against each other's pivots, so insertion is a
/// single sweep.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: FieldSpec,
    len: usize,
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Echelon {
    pub fn new(field: FieldSpec, len: usize) -> Self {
        Echelon {
            field,
            len,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored pivots and returns the remainder.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        debug_assert_eq!(v.len(), self.len);
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let factor = v[*pivot].clone();
            axpy(&mut v, &factor.neg_ref(), row);
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Adds `v` to the span. Returns `true` if the dimension grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut v = self.reduce(v);
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[pivot].inv().expect("nonzero pivot");
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[pivot].is_zero() {
                let factor = row[pivot].clone();
                axpy(row, &factor.neg_ref(), &v);
            }
        }
        self.rows.push((pivot, v));
        true
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
}

/// `y += a * x`
pub fn axpy(y: &mut [Scalar], a: &Scalar, x: &[Scalar]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi = &*yi + &(a * xi);
        }
    }
}

/// Dimension of the span of `vectors` (all of length `len`).
pub fn span_dim(field: FieldSpec, len: usize, vectors: &[Vec<Scalar>]) -> usize {
    let mut e = Echelon::new(field, len);
    for v in vectors {
        e.insert(v);
    }
    e.dim()
}

/// Basis of the kernel of the linear map whose `j`-th column is `columns[j]`
/// (each of length `nrows`). Returned vectors have length `columns.len()`.
pub fn kernel(field: FieldSpec, nrows: usize, columns: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let ncols = columns.len();
    // Row-reduce the nrows x ncols matrix.
    let mut m: Vec<Vec<Scalar>> = (0..nrows)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].neg_ref();
                axpy(row, &f, &pivot_row);
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = m[row][free].neg_ref();
        }
        basis.push(v);
    }
    basis
}

/// Dense square or rectangular matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[Scalar]) {
        for (i, x) in v.iter().enumerate() {
            self.set(i, j, x.clone());
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j);
                        let v = cur + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn rank(&self) -> usize {
        let cols: Vec<Vec<Scalar>> = (0..self.cols).map(|j| self.column(j)).collect();
        span_dim(self.field, self.rows, &cols)
    }

    /// Inverse by Gauss-Jordan; `None` if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(self.field, n);
        for c in 0..n {
            let p = (c..n).find(|&i| !a.get(i, c).is_zero())?;
            a.swap_rows(c, p);
            inv.swap_rows(c, p);
            let s = a.get(c, c).inv().ok()?;
            a.scale_row(c, &s);
            inv.scale_row(c, &s);
            for i in 0..n {
                if i != c && !a.get(i, c).is_zero() {
                    let f = a.get(i, c).neg_ref();
                    a.add_row_multiple(i, c, &f);
                    inv.add_row_multiple(i, c, &f);
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn scale_row(&mut self, i: usize, s: &Scalar) {
        for c in 0..self.cols {
            let v = self.get(i, c) * s;
            self.set(i, c, v);
        }
    }

    /// row_i += f * row_j
    fn add_row_multiple(&mut self, i: usize, j: usize, f: &Scalar) {
        for c in 0..self.cols {
            let b = self.get(j, c);
            if !b.is_zero() {
                let v = self.get(i, c) + &(f * b);
                self.set(i, c, v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(f: FieldSpec, xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| f.from_i64(x)).collect()
    }

    #[test]
    fn rank_depends_on_characteristic() {
        // [1 1; 1 -1] is singular only in characteristic 2.
        let cols = |f| vec![v(f, &[1, 1]), v(f, &[1, -1])];
        assert_eq!(span_dim(FieldSpec::F2, 2, &cols(FieldSpec::F2)), 1);
        assert_eq!(span_dim(FieldSpec::Q, 2, &cols(FieldSpec::Q)), 2);
    }

    #[test]
    fn kernel_is_annihilated() {
        let f = FieldSpec::Fp(5);
        let cols = vec![v(f, &[1, 2]), v(f, &[2, 4]), v(f, &[0, 1])];
        let ker = kernel(f, 2, &cols);
        assert_eq!(ker.len(), 1);
        for k in &ker {
            for row in 0..2 {
                let mut acc = f.zero();
                for (j, c) in cols.iter().enumerate() {
                    acc = acc + &c[row] * &k[j];
                }
                assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let f = FieldSpec::Q;
        let mut m = Matrix::identity(f, 3);
        m.set(0, 2, f.from_i64(3));
        m.set(1, 2, f.parse_scalar("1/2").unwrap());
        m.set(2, 0, f.from_i64(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(f, 3));
    }

    #[test]
    fn singular_has_no_inverse() {
        let f = FieldSpec::F2;
        let mut m = Matrix::zeros(f, 2, 2);
        m.set(0, 0, f.one());
        m.set(0, 1, f.one());
        assert!(m.inverse().is_none());
        assert_eq!(m.rank(), 1);
    }
}
