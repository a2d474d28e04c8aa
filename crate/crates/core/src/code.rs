//! Linear codes whose coordinates are grouped into named blocks.
//!
//! Every symbol or state variable of a realization is one block; a constraint
//! code is a [`BlockedCode`] over the blocks of the variables it touches.

use std::collections::HashSet;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{LinalgError, MatrixF, PrimeField, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("unknown block `{0}`")]
    UnknownBlock(String),
    #[error("duplicate block `{0}`")]
    DuplicateBlock(String),
    #[error("code has {size} words, enumeration cap is {cap}")]
    EnumerationTooLarge { size: u128, cap: u64 },
    #[error("block `{block}` has dim {found}, map expects {expected}")]
    BlockDimMismatch {
        block: String,
        expected: usize,
        found: usize,
    },
    #[error("cannot parse word `{0}`")]
    BadWord(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    pub id: String,
    pub dim: usize,
}

impl Block {
    pub fn new(id: impl Into<String>, dim: usize) -> Self {
        Self { id: id.into(), dim }
    }
}

/// Ordered list of named coordinate blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockStructure {
    blocks: Vec<Block>,
    offsets: Vec<usize>,
}

impl BlockStructure {
    pub fn new(blocks: Vec<Block>) -> Result<Self, CodeError> {
        let mut seen = HashSet::new();
        for b in &blocks {
            if !seen.insert(b.id.as_str()) {
                return Err(CodeError::DuplicateBlock(b.id.clone()));
            }
        }
        let mut offsets = Vec::with_capacity(blocks.len() + 1);
        let mut acc = 0;
        for b in &blocks {
            offsets.push(acc);
            acc += b.dim;
        }
        offsets.push(acc);
        Ok(Self { blocks, offsets })
    }

    /// Convenience constructor from `(id, dim)` pairs.
    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, usize)]) -> Result<Self, CodeError> {
        Self::new(pairs.iter().map(|(id, d)| Block::new(id.as_ref(), *d)).collect())
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn total(&self) -> usize {
        *self.offsets.last().expect("offsets has a sentinel")
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.blocks.iter().position(|b| b.id == id)
    }

    pub fn range(&self, id: &str) -> Option<Range<usize>> {
        self.position(id).map(|i| self.range_at(i))
    }

    pub fn range_at(&self, index: usize) -> Range<usize> {
        self.offsets[index]..self.offsets[index + 1]
    }

    pub fn dim_of(&self, id: &str) -> Option<usize> {
        self.position(id).map(|i| self.blocks[i].dim)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.blocks.iter().map(|b| b.id.as_str())
    }

    /// Restriction to the named blocks in the given order, together with the
    /// parent column index of every child coordinate.
    pub fn select<S: AsRef<str>>(&self, ids: &[S]) -> Result<(BlockStructure, Vec<usize>), CodeError> {
        let mut blocks = Vec::with_capacity(ids.len());
        let mut cols = Vec::new();
        for id in ids {
            let id = id.as_ref();
            let i = self
                .position(id)
                .ok_or_else(|| CodeError::UnknownBlock(id.to_string()))?;
            blocks.push(self.blocks[i].clone());
            cols.extend(self.range_at(i));
        }
        Ok((BlockStructure::new(blocks)?, cols))
    }

    /// Same blocks with one dimension changed.
    fn with_dim(&self, index: usize, dim: usize) -> BlockStructure {
        let mut blocks = self.blocks.clone();
        blocks[index].dim = dim;
        BlockStructure::new(blocks).expect("ids unchanged")
    }
}

/// A linear code over a product of named blocks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BlockedCode {
    structure: BlockStructure,
    space: Subspace,
}

impl BlockedCode {
    pub fn new(structure: BlockStructure, space: Subspace) -> Result<Self, CodeError> {
        if space.ambient() != structure.total() {
            return Err(LinalgError::DimensionMismatch {
                left: structure.total(),
                right: space.ambient(),
            }
            .into());
        }
        Ok(Self { structure, space })
    }

    pub fn from_generators<R: AsRef<[u32]>>(
        field: PrimeField,
        structure: BlockStructure,
        rows: &[R],
    ) -> Result<Self, CodeError> {
        let space = Subspace::from_rows(field, structure.total(), rows)?;
        Self::new(structure, space)
    }

    pub fn zero(field: PrimeField, structure: BlockStructure) -> Self {
        let space = Subspace::zero(field, structure.total());
        Self { structure, space }
    }

    pub fn full(field: PrimeField, structure: BlockStructure) -> Self {
        let space = Subspace::full(field, structure.total());
        Self { structure, space }
    }

    pub fn field(&self) -> PrimeField {
        self.space.field()
    }

    pub fn structure(&self) -> &BlockStructure {
        &self.structure
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn length(&self) -> usize {
        self.structure.total()
    }

    /// Canonical RREF generator matrix.
    pub fn generators(&self) -> &MatrixF {
        self.space.basis()
    }

    pub fn contains(&self, word: &[u32]) -> Result<bool, CodeError> {
        Ok(self.space.contains(word)?)
    }

    /// Image of the code under the map that keeps only blocks `ids`, laid out
    /// in the order given.
    pub fn project<S: AsRef<str>>(&self, ids: &[S]) -> Result<BlockedCode, CodeError> {
        let (structure, cols) = self.structure.select(ids)?;
        let gens = self.generators().select_columns(&cols);
        Ok(Self {
            structure,
            space: Subspace::from_generators(&gens),
        })
    }

    /// Words `x` on blocks `ids` such that `x` padded with zeros elsewhere is
    /// a codeword.
    pub fn cross_section<S: AsRef<str>>(&self, ids: &[S]) -> Result<BlockedCode, CodeError> {
        let (structure, cols) = self.structure.select(ids)?;
        // (x_J, 0) ∈ C  ⟺  H_J x_J = 0
        let checks = self.space.parity_check().select_columns(&cols);
        Ok(Self {
            structure,
            space: checks.kernel(),
        })
    }

    pub fn dual(&self) -> BlockedCode {
        Self {
            structure: self.structure.clone(),
            space: self.space.orthogonal(),
        }
    }

    pub fn is_subcode_of(&self, other: &BlockedCode) -> Result<bool, CodeError> {
        Ok(self.space.is_subspace_of(&other.space)?)
    }

    /// All codewords, each once, ordered by coefficient vector with the first
    /// basis row varying fastest.
    pub fn enumerate(&self, cap: u64) -> Result<Vec<Vec<u32>>, CodeError> {
        let size = u128::from(self.field().order()).pow(self.dim() as u32);
        if size > u128::from(cap) {
            return Err(CodeError::EnumerationTooLarge { size, cap });
        }
        let f = self.field();
        let n = self.length();
        let basis = self.generators();
        let mut coeffs = vec![0u32; self.dim()];
        let mut out = Vec::with_capacity(size as usize);
        loop {
            let mut w = vec![0u32; n];
            for (row, &c) in basis.row_iter().zip(&coeffs) {
                if c != 0 {
                    for (wi, &gi) in w.iter_mut().zip(row) {
                        *wi = f.add(*wi, f.mul(c, gi));
                    }
                }
            }
            out.push(w);
            if !odometer_step(&mut coeffs, f.modulus()) {
                break;
            }
        }
        Ok(out)
    }

    /// Minimum nonzero Hamming weight over symbol coordinates, by enumeration.
    /// `None` for the zero code.
    pub fn min_distance(&self, cap: u64) -> Result<Option<usize>, CodeError> {
        Ok(self
            .enumerate(cap)?
            .iter()
            .map(|w| w.iter().filter(|&&x| x != 0).count())
            .filter(|&wt| wt > 0)
            .min())
    }

    /// `{(x, t) : (x, t·m) ∈ C}` where `m` is `new_dim × old_dim` and acts on
    /// block `id`. With `m` injective this restricts the block to the row
    /// space of `m` and recoordinatizes it.
    pub fn pullback_block(&self, id: &str, m: &MatrixF) -> Result<BlockedCode, CodeError> {
        let index = self
            .structure
            .position(id)
            .ok_or_else(|| CodeError::UnknownBlock(id.to_string()))?;
        let range = self.structure.range_at(index);
        if m.cols() != range.len() {
            return Err(CodeError::BlockDimMismatch {
                block: id.to_string(),
                expected: m.cols(),
                found: range.len(),
            });
        }
        let structure = self.structure.with_dim(index, m.rows());
        let h = self.space.parity_check();
        let block_part = h.select_columns(&range.clone().collect::<Vec<_>>());
        let replaced = block_part.mul(&m.transpose())?;
        let new_checks = splice_columns(&h, range, &replaced);
        let space = if new_checks.rows() == 0 {
            Subspace::full(self.field(), structure.total())
        } else {
            new_checks.kernel()
        };
        Ok(Self { structure, space })
    }

    /// Image of the code under `x_id ↦ x_id · q` where `q` is
    /// `old_dim × new_dim`.
    pub fn pushforward_block(&self, id: &str, q: &MatrixF) -> Result<BlockedCode, CodeError> {
        let index = self
            .structure
            .position(id)
            .ok_or_else(|| CodeError::UnknownBlock(id.to_string()))?;
        let range = self.structure.range_at(index);
        if q.rows() != range.len() {
            return Err(CodeError::BlockDimMismatch {
                block: id.to_string(),
                expected: q.rows(),
                found: range.len(),
            });
        }
        let structure = self.structure.with_dim(index, q.cols());
        let g = self.generators();
        let block_part = g.select_columns(&range.clone().collect::<Vec<_>>());
        let replaced = block_part.mul(q)?;
        let gens = splice_columns(g, range, &replaced);
        Ok(Self {
            structure,
            space: Subspace::from_generators(&gens),
        })
    }

    /// Slice of `word` belonging to block `id`.
    pub fn block_of<'a>(&self, word: &'a [u32], id: &str) -> Option<&'a [u32]> {
        self.structure.range(id).map(|r| &word[r])
    }
}

impl fmt::Debug for BlockedCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .structure
            .blocks()
            .iter()
            .map(|b| format!("{}:{}", b.id, b.dim))
            .collect();
        write!(f, "BlockedCode[{}]({:?})", blocks.join(","), self.generators())
    }
}

/// Replaces columns `range` of `m` with `replacement` (same row count).
fn splice_columns(m: &MatrixF, range: Range<usize>, replacement: &MatrixF) -> MatrixF {
    let new_cols = m.cols() - range.len() + replacement.cols();
    let mut out = MatrixF::zeros(m.field(), m.rows(), new_cols);
    for r in 0..m.rows() {
        let mut c_out = 0;
        for c in 0..range.start {
            out.set(r, c_out, m.get(r, c));
            c_out += 1;
        }
        for c in 0..replacement.cols() {
            out.set(r, c_out, replacement.get(r, c));
            c_out += 1;
        }
        for c in range.end..m.cols() {
            out.set(r, c_out, m.get(r, c));
            c_out += 1;
        }
    }
    out
}

/// Advances a little-endian base-`p` counter; false once it wraps to zero.
pub(crate) fn odometer_step(digits: &mut [u32], p: u32) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < p {
            return true;
        }
        *d = 0;
    }
    false
}

/// Renders a word as a digit string for `p <= 10`, comma-separated residues
/// otherwise.
pub fn format_word(field: PrimeField, word: &[u32]) -> String {
    if field.modulus() <= 10 {
        word.iter().map(|d| char::from_digit(*d, 10).unwrap_or('?')).collect()
    } else {
        word.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }
}

/// Inverse of [`format_word`]. Comma-separated input is accepted for every
/// field; bare digit strings only when `p <= 10`.
pub fn parse_word(field: PrimeField, text: &str) -> Result<Vec<u32>, CodeError> {
    let text = text.trim();
    let bad = || CodeError::BadWord(text.to_string());
    let word: Vec<u32> = if text.contains(',') || field.modulus() > 10 {
        if text.is_empty() {
            Vec::new()
        } else {
            text.split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        }
    } else {
        text.chars()
            .map(|c| c.to_digit(10).ok_or_else(bad))
            .collect::<Result<_, _>>()?
    };
    if word.iter().any(|&d| !field.contains(d)) {
        return Err(bad());
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    fn gf(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn code(p: u32, blocks: &[(&str, usize)], rows: &[&[u32]]) -> BlockedCode {
        BlockedCode::from_generators(gf(p), BlockStructure::from_pairs(blocks).unwrap(), rows).unwrap()
    }

    fn xyz() -> [(&'static str, usize); 3] {
        [("x", 1), ("y", 1), ("z", 1)]
    }

    fn words(c: &BlockedCode) -> Vec<String> {
        let mut w: Vec<String> = c
            .enumerate(1 << 20)
            .unwrap()
            .iter()
            .map(|w| format_word(c.field(), w))
            .collect();
        w.sort();
        w
    }

    #[test]
    fn projection_examples() {
        let even = code(2, &xyz(), &[&[1, 1, 0], &[1, 0, 1]]);
        let p = even.project(&["x", "y"]).unwrap();
        assert!(p.space().is_full());
        assert_eq!(p.structure().ids().collect::<Vec<_>>(), ["x", "y"]);
        assert_eq!(even.project(&["x", "y", "z"]).unwrap(), even);

        let rep = code(2, &xyz(), &[&[1, 1, 1]]);
        assert!(rep.project(&["x"]).unwrap().space().is_full());
    }

    #[test]
    fn projection_follows_caller_order() {
        let c = code(3, &xyz(), &[&[1, 2, 0]]);
        let p = c.project(&["y", "x"]).unwrap();
        assert_eq!(p.generators().to_rows(), vec![vec![1, 2]]);
    }

    #[test]
    fn cross_section_examples() {
        let even = code(2, &xyz(), &[&[1, 1, 0], &[1, 0, 1]]);
        assert_eq!(words(&even.cross_section(&["x", "y"]).unwrap()), ["00", "11"]);
        assert_eq!(even.cross_section(&["x", "y", "z"]).unwrap(), even);
        let rep = code(2, &xyz(), &[&[1, 1, 1]]);
        assert!(rep.cross_section(&["x"]).unwrap().space().is_trivial());
    }

    #[test]
    fn unknown_block_is_reported() {
        let rep = code(2, &xyz(), &[&[1, 1, 1]]);
        assert_eq!(rep.project(&["w"]).unwrap_err(), CodeError::UnknownBlock("w".into()));
        assert_eq!(rep.cross_section(&["x", "q"]).unwrap_err(), CodeError::UnknownBlock("q".into()));
        assert!(matches!(rep.project(&["x", "x"]), Err(CodeError::DuplicateBlock(_))));
    }

    #[test]
    fn dual_examples() {
        let even = code(2, &xyz(), &[&[1, 1, 0], &[1, 0, 1]]);
        assert_eq!(words(&even.dual()), ["000", "111"]);

        let full = BlockedCode::full(gf(3), BlockStructure::from_pairs(&[("x", 2)]).unwrap());
        assert!(full.dual().space().is_trivial());

        let five: Vec<(String, usize)> = (0..5).map(|k| (format!("a{k}"), 1)).collect();
        let s = BlockStructure::from_pairs(&five).unwrap();
        let c = BlockedCode::from_generators(
            gf(2),
            s.clone(),
            &[[0, 1, 1, 1, 0], [1, 0, 0, 1, 0], [0, 1, 1, 0, 1]],
        )
        .unwrap();
        let expected = BlockedCode::from_generators(gf(2), s, &[[1, 0, 1, 1, 1], [0, 1, 1, 0, 0]]).unwrap();
        assert_eq!(c.dual(), expected);
    }

    #[test]
    fn enumerate_counts_and_caps() {
        let even = code(2, &xyz(), &[&[1, 1, 0], &[1, 0, 1]]);
        assert_eq!(even.enumerate(4).unwrap().len(), 4);
        assert!(matches!(
            even.enumerate(3),
            Err(CodeError::EnumerationTooLarge { size: 4, cap: 3 })
        ));
        let zero = BlockedCode::zero(gf(5), BlockStructure::from_pairs(&[("x", 3)]).unwrap());
        assert_eq!(zero.enumerate(1).unwrap(), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn reed_muller_weights() {
        let blocks: Vec<(String, usize)> = (0..8).map(|k| (format!("a{k}"), 1)).collect();
        let rm = BlockedCode::from_generators(
            gf(2),
            BlockStructure::from_pairs(&blocks).unwrap(),
            &[
                [1, 1, 1, 1, 0, 0, 0, 0],
                [0, 0, 1, 1, 1, 1, 0, 0],
                [0, 0, 0, 0, 1, 1, 1, 1],
                [1, 1, 0, 0, 0, 0, 1, 1],
                [0, 1, 0, 1, 1, 0, 1, 0],
            ],
        )
        .unwrap();
        let all = rm.enumerate(16).unwrap();
        assert_eq!(all.len(), 16);
        for w in &all {
            let wt = w.iter().filter(|&&x| x == 1).count();
            assert!([0, 4, 8].contains(&wt));
        }
        assert_eq!(rm.min_distance(16).unwrap(), Some(4));
    }

    #[test]
    fn pullback_and_pushforward() {
        // C = {(s, a) : a = s0 + s1} with s of dim 2
        let c = code(2, &[("s", 2), ("a", 1)], &[&[1, 0, 1], &[0, 1, 1]]);
        // restrict s to span{11}: only (11, 0) survives
        let m = MatrixF::from_rows(gf(2), 2, &[[1, 1]]).unwrap();
        let r = c.pullback_block("s", &m).unwrap();
        assert_eq!(r.structure().dim_of("s"), Some(1));
        assert_eq!(words(&r), ["00", "10"]);
        // quotient by span{11}: keep the first coordinate
        let q = MatrixF::from_rows(gf(2), 1, &[[1], [0]]).unwrap();
        let im = c.pushforward_block("s", &q).unwrap();
        assert_eq!(words(&im), ["00", "01", "10", "11"]);
        assert!(matches!(
            c.pullback_block("a", &m),
            Err(CodeError::BlockDimMismatch { .. })
        ));
    }

    #[test]
    fn word_format_round_trip() {
        let f2 = gf(2);
        assert_eq!(format_word(f2, &[1, 0, 1]), "101");
        assert_eq!(parse_word(f2, "101").unwrap(), vec![1, 0, 1]);
        assert!(parse_word(f2, "102").is_err());
        let f13 = gf(13);
        assert_eq!(format_word(f13, &[12, 0, 3]), "12,0,3");
        assert_eq!(parse_word(f13, "12, 0,3").unwrap(), vec![12, 0, 3]);
        assert_eq!(parse_word(gf(3), "1,2").unwrap(), vec![1, 2]);
    }

    fn random_code() -> impl Strategy<Value = (u32, Vec<usize>, Vec<Vec<u32>>, Vec<bool>)> {
        (prop_oneof![Just(2u32), Just(3)], proptest::collection::vec(0usize..3, 1..5))
            .prop_flat_map(|(p, dims)| {
                let n: usize = dims.iter().sum();
                let k = dims.len();
                (
                    Just(p),
                    Just(dims),
                    proptest::collection::vec(proptest::collection::vec(0..p, n), 0..=n),
                    proptest::collection::vec(any::<bool>(), k),
                )
            })
            .prop_filter("enumerable", |(p, dims, _, _)| {
                (*p as u64).pow(dims.iter().sum::<usize>() as u32) <= 1 << 12
            })
    }

    fn build(p: u32, dims: &[usize], rows: &[Vec<u32>]) -> BlockedCode {
        let pairs: Vec<(String, usize)> = dims.iter().enumerate().map(|(i, &d)| (format!("b{i}"), d)).collect();
        BlockedCode::from_generators(gf(p), BlockStructure::from_pairs(&pairs).unwrap(), rows).unwrap()
    }

    proptest! {
        #[test]
        fn projection_cross_section_duality((p, dims, rows, mask) in random_code()) {
            let c = build(p, &dims, &rows);
            let j: Vec<String> = mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| format!("b{i}")).collect();
            let lhs = c.cross_section(&j).unwrap().dual();
            let rhs = c.dual().project(&j).unwrap();
            prop_assert_eq!(&lhs, &rhs);
            prop_assert!(c.cross_section(&j).unwrap().is_subcode_of(&c.project(&j).unwrap()).unwrap());
            let total: usize = j.iter().map(|id| c.structure().dim_of(id).unwrap()).sum();
            prop_assert_eq!(c.project(&j).unwrap().dim() + c.dual().cross_section(&j).unwrap().dim(), total);
            prop_assert_eq!(&c.dual().dual(), &c);
        }

        #[test]
        fn projection_and_cross_section_match_enumeration((p, dims, rows, mask) in random_code()) {
            let c = build(p, &dims, &rows);
            let f = gf(p);
            let j: Vec<String> = mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| format!("b{i}")).collect();
            let (_, cols) = c.structure().select(&j).unwrap();
            let brute = oracle::span_set(f, c.length(), &rows, 1 << 14).unwrap();
            let proj: HashSet<Vec<u32>> = brute.iter().map(|w| cols.iter().map(|&i| w[i]).collect()).collect();
            let keep: HashSet<usize> = cols.iter().copied().collect();
            let cross: HashSet<Vec<u32>> = brute
                .iter()
                .filter(|w| w.iter().enumerate().all(|(i, &x)| keep.contains(&i) || x == 0))
                .map(|w| cols.iter().map(|&i| w[i]).collect())
                .collect();
            let got_proj: HashSet<Vec<u32>> = c.project(&j).unwrap().enumerate(1 << 14).unwrap().into_iter().collect();
            let got_cross: HashSet<Vec<u32>> = c.cross_section(&j).unwrap().enumerate(1 << 14).unwrap().into_iter().collect();
            prop_assert_eq!(proj, got_proj);
            prop_assert_eq!(cross, got_cross);
        }
    }
}
