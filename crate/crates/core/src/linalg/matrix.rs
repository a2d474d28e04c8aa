use std::fmt;

use super::{LinalgError, PrimeField};

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixF {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Result of Gauss-Jordan elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    /// The reduced matrix, same shape as the input; zero rows trail.
    pub matrix: MatrixF,
    pub rank: usize,
    /// Pivot column of each of the first `rank` rows, strictly increasing.
    pub pivots: Vec<usize>,
}

impl MatrixF {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from explicit rows. Every row must have length `cols`
    /// and every entry must already be a residue.
    pub fn from_rows<R: AsRef<[u32]>>(
        field: PrimeField,
        cols: usize,
        rows: &[R],
    ) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(LinalgError::RaggedRow {
                    row: i,
                    expected: cols,
                    found: row.len(),
                });
            }
            if let Some(&bad) = row.iter().find(|&&x| !field.contains(x)) {
                return Err(LinalgError::EntryOutOfRange {
                    value: bad,
                    modulus: field.modulus(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(self.field.contains(v));
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.row_iter().map(<[u32]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, rhs: &MatrixF) -> Result<MatrixF, LinalgError> {
        if self.field != rhs.field {
            return Err(LinalgError::FieldMismatch);
        }
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                left: self.cols,
                right: rhs.rows,
            });
        }
        let p = u64::from(self.field.modulus());
        let mut out = Self::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = 0u64;
                for k in 0..self.cols {
                    acc += u64::from(self.get(i, k)) * u64::from(rhs.get(k, j));
                }
                out.data[i * rhs.cols + j] = (acc % p) as u32;
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `x · self`.
    pub fn left_mul_vec(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.rows);
        let p = u64::from(self.field.modulus());
        (0..self.cols)
            .map(|c| {
                let acc: u64 = (0..self.rows)
                    .map(|r| u64::from(x[r]) * u64::from(self.get(r, c)))
                    .sum();
                (acc % p) as u32
            })
            .collect()
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &MatrixF) -> Result<MatrixF, LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch);
        }
        if self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                left: self.cols,
                right: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// New matrix made of the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> MatrixF {
        let mut out = Self::zeros(self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.data[r * cols.len() + j] = self.get(r, c);
            }
        }
        out
    }

    /// Keeps the first `n` rows.
    pub fn truncate_rows(mut self, n: usize) -> MatrixF {
        let n = n.min(self.rows);
        self.data.truncate(n * self.cols);
        self.rows = n;
        self
    }

    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            m.scale_row(r, inv);
            for i in 0..m.rows {
                if i != r {
                    let factor = m.get(i, c);
                    if factor != 0 {
                        m.add_scaled_row(i, r, f.neg(factor));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            matrix: m,
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<MatrixF> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let reduced = aug.rref();
        if reduced.pivots.iter().copied().take(n).ne(0..n) {
            return None;
        }
        let right: Vec<usize> = (n..2 * n).collect();
        Some(reduced.matrix.select_columns(&right))
    }

    /// Extends the rows of `self` (assumed independent) to a basis of
    /// `F^cols` by appending standard basis vectors greedily in index order.
    pub fn complete_basis(&self) -> MatrixF {
        let mut rows = self.to_rows();
        let mut span = super::Subspace::from_generators(self);
        for k in 0..self.cols {
            let mut e = vec![0u32; self.cols];
            e[k] = 1;
            if !span.contains(&e).expect("length matches") {
                rows.push(e);
                span = super::Subspace::from_rows(self.field, self.cols, &rows).expect("residues");
            }
        }
        MatrixF::from_rows(self.field, self.cols, &rows).expect("residues")
    }

    /// Right null space `{x : self · xᵀ = 0}`.
    pub fn kernel(&self) -> super::Subspace {
        let Rref {
            matrix, pivots, ..
        } = self.rref();
        let f = self.field;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![0; self.cols];
            x[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                x[pc] = f.neg(matrix.get(i, free));
            }
            basis.push(x);
        }
        let gens = MatrixF::from_rows(f, self.cols, &basis).expect("residues by construction");
        super::Subspace::from_generators(&gens)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, k: u32) {
        let f = self.field;
        for c in 0..self.cols {
            let v = &mut self.data[r * self.cols + c];
            *v = f.mul(*v, k);
        }
    }

    /// row[dst] += k * row[src]
    fn add_scaled_row(&mut self, dst: usize, src: usize, k: u32) {
        let f = self.field;
        for c in 0..self.cols {
            let s = self.data[src * self.cols + c];
            if s != 0 {
                let d = &mut self.data[dst * self.cols + c];
                *d = f.add(*d, f.mul(k, s));
            }
        }
    }
}

impl fmt::Debug for MatrixF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixF[{}; {}x{}](", self.field, self.rows, self.cols)?;
        for (i, row) in self.row_iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", crate::code::format_word(self.field, row))?;
        }
        write!(f, ")")
    }
}
