use super::{LinalgError, MatrixF, PrimeField};

/// A subspace of `F^ambient`, stored canonically as an RREF basis without
/// zero rows. Two subspaces are equal iff their bases are identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: MatrixF,
}

impl Subspace {
    /// Row space of `gens`.
    pub fn from_generators(gens: &MatrixF) -> Self {
        let r = gens.rref();
        Self {
            ambient: gens.cols(),
            basis: r.matrix.truncate_rows(r.rank),
        }
    }

    pub fn from_rows<R: AsRef<[u32]>>(
        field: PrimeField,
        ambient: usize,
        rows: &[R],
    ) -> Result<Self, LinalgError> {
        Ok(Self::from_generators(&MatrixF::from_rows(field, ambient, rows)?))
    }

    pub fn zero(field: PrimeField, ambient: usize) -> Self {
        Self {
            ambient,
            basis: MatrixF::zeros(field, 0, ambient),
        }
    }

    pub fn full(field: PrimeField, ambient: usize) -> Self {
        Self {
            ambient,
            basis: MatrixF::identity(field, ambient),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.basis.field()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// The canonical RREF basis.
    pub fn basis(&self) -> &MatrixF {
        &self.basis
    }

    /// A generator matrix of the orthogonal space, i.e. a parity-check
    /// matrix for `self`.
    pub fn parity_check(&self) -> MatrixF {
        self.orthogonal().basis
    }

    pub fn contains(&self, v: &[u32]) -> Result<bool, LinalgError> {
        if v.len() != self.ambient {
            return Err(LinalgError::DimensionMismatch {
                left: self.ambient,
                right: v.len(),
            });
        }
        let f = self.field();
        let mut x = v.to_vec();
        for row in self.basis.row_iter() {
            let pivot = row.iter().position(|&e| e != 0).expect("RREF rows are nonzero");
            let k = x[pivot];
            if k != 0 {
                for (xi, &ri) in x.iter_mut().zip(row) {
                    *xi = f.sub(*xi, f.mul(k, ri));
                }
            }
        }
        Ok(x.iter().all(|&e| e == 0))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check_compatible(other)?;
        for row in self.basis.row_iter() {
            if !other.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_compatible(other)?;
        Ok(Self::from_generators(&self.basis.vstack(&other.basis)?))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_compatible(other)?;
        let checks = self.parity_check().vstack(&other.parity_check())?;
        Ok(checks.kernel())
    }

    /// `{y : x·y = 0 for all x in self}` under the standard dot product.
    pub fn orthogonal(&self) -> Subspace {
        if self.basis.rows() == 0 {
            return Self::full(self.field(), self.ambient);
        }
        self.basis.kernel()
    }

    fn check_compatible(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.field() != other.field() {
            return Err(LinalgError::FieldMismatch);
        }
        if self.ambient != other.ambient {
            return Err(LinalgError::DimensionMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }
}
