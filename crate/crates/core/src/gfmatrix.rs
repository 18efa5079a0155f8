//! Dense matrices over GF(q).
//!
//! Rows over GF(2) are bit-packed into `u64` words so row additions are
//! word-parallel XORs; every other field stores one [`FieldElem`] per entry.
//! The storage choice is internal and invisible through the accessors.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::gf::{FieldElem, FieldSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("entry {code} at ({row}, {col}) is not an element of GF({q})")]
    InvalidEntry { row: usize, col: usize, code: u32, q: u32 },
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("{size} columns of rank {rank} do not form a basis of a rank-{total} matrix")]
    NotABasis { size: usize, rank: usize, total: usize },
    #[error("vector has length {found}, matrix has {expected} rows")]
    VectorLength { expected: usize, found: usize },
    #[error("operands are over different fields")]
    FieldMismatch,
}

#[derive(Clone, PartialEq, Eq)]
enum Store {
    /// Row-major, `words` u64 per row, bit `c % 64` of word `c / 64` is column `c`.
    Bits { words: usize, data: Vec<u64> },
    Elems(Vec<FieldElem>),
}

#[derive(Clone, PartialEq, Eq)]
pub struct GFMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    store: Store,
}

/// Output of [`GFMatrix::rref`]: the reduced matrix keeps its zero rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: GFMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

fn words_for(cols: usize) -> usize {
    cols.div_ceil(64).max(1)
}

impl GFMatrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> GFMatrix {
        let store = if field.is_binary() {
            let words = words_for(cols);
            Store::Bits {
                words,
                data: vec![0; rows * words],
            }
        } else {
            Store::Elems(vec![FieldElem::ZERO; rows * cols])
        };
        GFMatrix {
            field: field.clone(),
            rows,
            cols,
            store,
        }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> GFMatrix {
        let mut m = GFMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, FieldElem::ONE);
        }
        m
    }

    /// Builds a matrix from row-major integer codes.
    pub fn from_codes(
        field: &FieldSpec,
        rows: usize,
        cols: usize,
        codes: &[u32],
    ) -> Result<GFMatrix, MatrixError> {
        if codes.len() != rows * cols {
            return Err(MatrixError::DimensionMismatch {
                expected: rows * cols,
                found: codes.len(),
            });
        }
        let mut m = GFMatrix::zeros(field, rows, cols);
        for (i, &code) in codes.iter().enumerate() {
            let (r, c) = (i / cols.max(1), i % cols.max(1));
            let v = field.elem(code).map_err(|_| MatrixError::InvalidEntry {
                row: r,
                col: c,
                code,
                q: field.order(),
            })?;
            m.set(r, c, v);
        }
        Ok(m)
    }

    /// Builds a matrix from a list of equal-length rows of codes.
    pub fn from_rows(field: &FieldSpec, rows: &[Vec<u32>]) -> Result<GFMatrix, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        let flat: Vec<u32> = rows.iter().flatten().copied().collect();
        GFMatrix::from_codes(field, rows.len(), cols, &flat)
    }

    /// Builds a matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(
        field: &FieldSpec,
        rows: usize,
        columns: &[Vec<FieldElem>],
    ) -> Result<GFMatrix, MatrixError> {
        let mut m = GFMatrix::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(MatrixError::VectorLength {
                    expected: rows,
                    found: col.len(),
                });
            }
            for (r, &v) in col.iter().enumerate() {
                if v.code() >= field.order() {
                    return Err(MatrixError::InvalidEntry {
                        row: r,
                        col: c,
                        code: v.code(),
                        q: field.order(),
                    });
                }
                m.set(r, c, v);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElem {
        debug_assert!(r < self.rows && c < self.cols);
        match &self.store {
            Store::Bits { words, data } => {
                if data[r * words + c / 64] >> (c % 64) & 1 == 1 {
                    FieldElem::ONE
                } else {
                    FieldElem::ZERO
                }
            }
            Store::Elems(data) => data[r * self.cols + c],
        }
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElem) {
        debug_assert!(r < self.rows && c < self.cols);
        match &mut self.store {
            Store::Bits { words, data } => {
                let w = &mut data[r * *words + c / 64];
                if v.is_zero() {
                    *w &= !(1u64 << (c % 64));
                } else {
                    *w |= 1u64 << (c % 64);
                }
            }
            Store::Elems(data) => data[r * self.cols + c] = v,
        }
    }

    pub fn row(&self, r: usize) -> Vec<FieldElem> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    pub fn column(&self, c: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero_column(&self, c: usize) -> bool {
        (0..self.rows).all(|r| self.get(r, c).is_zero())
    }

    /// Row-major integer codes.
    pub fn to_codes(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).code()).collect())
            .collect()
    }

    pub fn transpose(&self) -> GFMatrix {
        let mut t = GFMatrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn select_columns(&self, cols: &[usize]) -> GFMatrix {
        let mut m = GFMatrix::zeros(&self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m.set(r, j, self.get(r, c));
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> GFMatrix {
        let mut m = GFMatrix::zeros(&self.field, rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            for c in 0..self.cols {
                m.set(i, c, self.get(r, c));
            }
        }
        m
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &GFMatrix) -> Result<GFMatrix, MatrixError> {
        if self.field != other.field {
            return Err(MatrixError::FieldMismatch);
        }
        if self.rows != other.rows {
            return Err(MatrixError::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        let mut m = GFMatrix::zeros(&self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c));
            }
        }
        Ok(m)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        match &mut self.store {
            Store::Bits { words, data } => {
                for w in 0..*words {
                    data.swap(a * *words + w, b * *words + w);
                }
            }
            Store::Elems(data) => {
                for c in 0..self.cols {
                    data.swap(a * self.cols + c, b * self.cols + c);
                }
            }
        }
    }

    fn scale_row(&mut self, r: usize, s: FieldElem) {
        if let Store::Elems(data) = &mut self.store {
            for v in &mut data[r * self.cols..(r + 1) * self.cols] {
                *v = self.field.mul(*v, s);
            }
        }
        // over GF(2) the only nonzero scalar is 1
    }

    /// `row[dst] += s * row[src]`
    fn add_scaled_row(&mut self, dst: usize, src: usize, s: FieldElem) {
        if s.is_zero() || dst == src {
            return;
        }
        match &mut self.store {
            Store::Bits { words, data } => {
                for w in 0..*words {
                    let v = data[src * *words + w];
                    data[dst * *words + w] ^= v;
                }
            }
            Store::Elems(data) => {
                let n = self.cols;
                for c in 0..n {
                    let add = self.field.mul(s, data[src * n + c]);
                    data[dst * n + c] = self.field.add(data[dst * n + c], add);
                }
            }
        }
    }

    /// Pivots on `(row, col)`: normalizes the row and clears the column elsewhere.
    fn pivot(&mut self, row: usize, col: usize) {
        let lead = self.get(row, col);
        let inv = self.field.inv(lead).expect("pivot entry is nonzero");
        self.scale_row(row, inv);
        for r in 0..self.rows {
            if r != row {
                let f = self.get(r, col);
                if !f.is_zero() {
                    self.add_scaled_row(r, row, self.field.neg(f));
                }
            }
        }
    }

    /// Reduced row echelon form. Pivots are chosen by scanning columns left
    /// to right and taking the first nonzero entry at or below the current
    /// pivot row. Zero rows remain at the bottom of the output.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..m.cols {
            if next == m.rows {
                break;
            }
            let Some(r) = (next..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(next, r);
            m.pivot(next, c);
            pivots.push(c);
            next += 1;
        }
        Rref {
            matrix: m,
            rank: pivots.len(),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        ColumnPack::new(self).rank_of(0..self.cols)
    }

    /// Row-reduces and drops zero rows; the column matroid is unchanged.
    pub fn row_reduced(&self) -> GFMatrix {
        let r = self.rref();
        let keep: Vec<usize> = (0..r.rank).collect();
        r.matrix.select_rows(&keep)
    }

    /// Pivots on the given independent columns in order and removes the pivot
    /// rows together with those columns. This is matroid contraction of an
    /// independent set. Returns `None` when the columns are dependent.
    pub(crate) fn contract_columns(&self, cols: &[usize]) -> Option<GFMatrix> {
        let mut m = self.clone();
        let mut used = vec![false; m.rows];
        for &c in cols {
            let r = (0..m.rows).find(|&r| !used[r] && !m.get(r, c).is_zero())?;
            m.pivot(r, c);
            used[r] = true;
        }
        let keep_rows: Vec<usize> = (0..m.rows).filter(|&r| !used[r]).collect();
        let drop: BTreeSet<usize> = cols.iter().copied().collect();
        let keep_cols: Vec<usize> = (0..m.cols).filter(|c| !drop.contains(c)).collect();
        Some(m.select_rows(&keep_rows).select_columns(&keep_cols))
    }
}

impl fmt::Debug for GFMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GFMatrix over GF({}) {}x{}", self.field.order(), self.rows, self.cols)?;
        for row in self.to_codes() {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            writeln!(f, "  [{}]", line.join(" "))?;
        }
        Ok(())
    }
}

/// A basis-indexed representation `[I | A]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardForm {
    pub field: FieldSpec,
    /// Labels of the identity columns; row `i` of `a` belongs to `basis_order[i]`.
    pub basis_order: Vec<String>,
    pub nonbasis_order: Vec<String>,
    pub a: GFMatrix,
}

impl StandardForm {
    pub fn entry(&self, basis_row: usize, nonbasis_col: usize) -> FieldElem {
        self.a.get(basis_row, nonbasis_col)
    }

    pub fn column(&self, nonbasis_col: usize) -> Vec<FieldElem> {
        self.a.column(nonbasis_col)
    }

    /// The matrix `[I | A]` with its column labels.
    pub fn reassemble(&self) -> (GFMatrix, Vec<String>) {
        let identity = GFMatrix::identity(&self.field, self.basis_order.len());
        let m = identity.hconcat(&self.a).expect("row counts agree");
        let labels = self
            .basis_order
            .iter()
            .chain(&self.nonbasis_order)
            .cloned()
            .collect();
        (m, labels)
    }
}

/// Reduces `m` to `[I | A]` with respect to the columns labelled by `basis`.
/// Basis and non-basis columns both keep their input label order.
pub fn standard_form<S: AsRef<str>>(
    m: &GFMatrix,
    labels: &[String],
    basis: &[S],
) -> Result<StandardForm, MatrixError> {
    if labels.len() != m.cols() {
        return Err(MatrixError::DimensionMismatch {
            expected: m.cols(),
            found: labels.len(),
        });
    }
    let wanted: BTreeSet<&str> = basis.iter().map(AsRef::as_ref).collect();
    for w in &wanted {
        if !labels.iter().any(|l| l == w) {
            return Err(MatrixError::UnknownLabel(w.to_string()));
        }
    }
    let (basis_idx, rest_idx): (Vec<usize>, Vec<usize>) =
        (0..m.cols()).partition(|&c| wanted.contains(labels[c].as_str()));
    let total = m.rank();
    let pack = ColumnPack::new(m);
    let basis_rank = pack.rank_of(basis_idx.iter().copied());
    if basis_rank != basis_idx.len() || basis_rank != total {
        return Err(MatrixError::NotABasis {
            size: basis_idx.len(),
            rank: basis_rank,
            total,
        });
    }
    let order: Vec<usize> = basis_idx.iter().chain(&rest_idx).copied().collect();
    let reduced = m.select_columns(&order).rref();
    debug_assert_eq!(reduced.pivots, (0..basis_idx.len()).collect::<Vec<_>>());
    let rows: Vec<usize> = (0..basis_idx.len()).collect();
    let a_cols: Vec<usize> = (basis_idx.len()..m.cols()).collect();
    let a = reduced.matrix.select_rows(&rows).select_columns(&a_cols);
    Ok(StandardForm {
        field: m.field().clone(),
        basis_order: basis_idx.iter().map(|&c| labels[c].clone()).collect(),
        nonbasis_order: rest_idx.iter().map(|&c| labels[c].clone()).collect(),
        a,
    })
}

/// Coefficients expressing `v` over the columns `cols` of `m`, or `None`
/// when `v` lies outside their span. Free coefficients are set to zero.
pub fn in_span(
    m: &GFMatrix,
    cols: &[usize],
    v: &[FieldElem],
) -> Result<Option<Vec<FieldElem>>, MatrixError> {
    if v.len() != m.rows() {
        return Err(MatrixError::VectorLength {
            expected: m.rows(),
            found: v.len(),
        });
    }
    let target = GFMatrix::from_columns(m.field(), m.rows(), &[v.to_vec()])?;
    let aug = m.select_columns(cols).hconcat(&target)?;
    let red = aug.rref();
    if red.pivots.last() == Some(&cols.len()) {
        return Ok(None);
    }
    let mut coeffs = vec![FieldElem::ZERO; cols.len()];
    for (row, &p) in red.pivots.iter().enumerate() {
        coeffs[p] = red.matrix.get(row, cols.len());
    }
    Ok(Some(coeffs))
}

/// Columns of a matrix packed for fast repeated rank queries.
#[derive(Clone)]
pub struct ColumnPack {
    field: FieldSpec,
    len: usize,
    count: usize,
    data: PackData,
}

#[derive(Clone)]
enum PackData {
    /// `words` u64 per column.
    Bits { words: usize, data: Vec<u64> },
    /// `len` entries per column.
    Elems(Vec<FieldElem>),
}

impl ColumnPack {
    pub fn new(m: &GFMatrix) -> ColumnPack {
        let data = if m.field().is_binary() {
            let words = words_for(m.rows());
            let mut data = vec![0u64; words * m.cols()];
            for c in 0..m.cols() {
                for r in 0..m.rows() {
                    if !m.get(r, c).is_zero() {
                        data[c * words + r / 64] |= 1 << (r % 64);
                    }
                }
            }
            PackData::Bits { words, data }
        } else {
            let mut data = Vec::with_capacity(m.rows() * m.cols());
            for c in 0..m.cols() {
                data.extend(m.column(c));
            }
            PackData::Elems(data)
        };
        ColumnPack {
            field: m.field().clone(),
            len: m.rows(),
            count: m.cols(),
            data,
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn echelon(&self) -> Echelon<'_> {
        let rows = match self.data {
            PackData::Bits { .. } => EchelonRows::Bits(Vec::new()),
            PackData::Elems(_) => EchelonRows::Elems(Vec::new()),
        };
        Echelon {
            pack: self,
            pivots: Vec::new(),
            rows,
        }
    }

    pub fn rank_of(&self, cols: impl IntoIterator<Item = usize>) -> usize {
        let mut e = self.echelon();
        for c in cols {
            e.push(c);
        }
        e.rank()
    }
}

enum EchelonRows {
    Bits(Vec<u64>),
    Elems(Vec<FieldElem>),
}

/// Incrementally built row echelon basis of a set of packed columns.
///
/// Each stored vector has a leading 1 at its pivot and zeros at the pivots
/// of all vectors stored before it, so removing the most recent vectors with
/// [`Echelon::truncate`] leaves a valid basis of the remaining prefix.
pub struct Echelon<'a> {
    pack: &'a ColumnPack,
    pivots: Vec<usize>,
    rows: EchelonRows,
}

impl Echelon<'_> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds column `c`; returns `true` if it was independent of the basis.
    pub fn push(&mut self, c: usize) -> bool {
        let pack = self.pack;
        match (&pack.data, &mut self.rows) {
            (PackData::Bits { words, data }, EchelonRows::Bits(rows)) => {
                let w = *words;
                let mut v: Vec<u64> = data[c * w..(c + 1) * w].to_vec();
                for (i, &p) in self.pivots.iter().enumerate() {
                    if v[p / 64] >> (p % 64) & 1 == 1 {
                        for (x, y) in v.iter_mut().zip(&rows[i * w..(i + 1) * w]) {
                            *x ^= y;
                        }
                    }
                }
                let Some(wi) = v.iter().position(|&x| x != 0) else {
                    return false;
                };
                self.pivots.push(wi * 64 + v[wi].trailing_zeros() as usize);
                rows.extend_from_slice(&v);
                true
            }
            (PackData::Elems(data), EchelonRows::Elems(rows)) => {
                let (n, f) = (pack.len, &pack.field);
                let mut v: Vec<FieldElem> = data[c * n..(c + 1) * n].to_vec();
                for (i, &p) in self.pivots.iter().enumerate() {
                    let s = v[p];
                    if !s.is_zero() {
                        let neg = f.neg(s);
                        for (x, &y) in v.iter_mut().zip(&rows[i * n..(i + 1) * n]) {
                            *x = f.add(*x, f.mul(neg, y));
                        }
                    }
                }
                let Some(p) = v.iter().position(|x| !x.is_zero()) else {
                    return false;
                };
                let inv = f.inv(v[p]).expect("nonzero");
                for x in &mut v {
                    *x = f.mul(*x, inv);
                }
                self.pivots.push(p);
                rows.extend_from_slice(&v);
                true
            }
            _ => unreachable!("echelon storage matches its pack"),
        }
    }

    /// Keeps only the first `rank` stored vectors.
    pub fn truncate(&mut self, rank: usize) {
        self.pivots.truncate(rank);
        match &mut self.rows {
            EchelonRows::Bits(r) => {
                if let PackData::Bits { words, .. } = self.pack.data {
                    r.truncate(rank * words);
                }
            }
            EchelonRows::Elems(r) => r.truncate(rank * self.pack.len),
        }
    }
}
