//! Dense linear algebra over GF(2) on word-packed bit matrices.

use std::fmt;

use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("subspaces live in different ambient spaces ({0} vs {1})")]
    AmbientMismatch(usize, usize),
}

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// Row-major matrix over GF(2); each row is packed into `u64` words with
/// bit `j` of a row at word `j / 64`, position `j % 64`. Bits past `cols` are
/// always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows.min(32) {
            let line: String = (0..self.cols.min(64))
                .map(|j| if self.get(i, j) { '1' } else { '.' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of booleans; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<bool>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row {i} has the wrong length");
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.stride + j / WORD] >> (j % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let w = &mut self.data[i * self.stride + j / WORD];
        let mask = 1u64 << (j % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.stride + j / WORD] ^= 1u64 << (j % WORD);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        self.row(i).iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `row[dst] ^= row[src]`, touching only the first `words` words.
    fn xor_rows(&mut self, dst: usize, src: usize, words: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..dst * s + words], &hi[..words])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..words], &lo[src * s..src * s + words])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= *y;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = self.data.split_at_mut(a.max(b) * s);
        lo[a.min(b) * s..a.min(b) * s + s].swap_with_slice(&mut hi[..s]);
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for (wi, &w) in self.row(i).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let j = wi * WORD + w.trailing_zeros() as usize;
                    t.set(j, i, true);
                    w &= w - 1;
                }
            }
        }
        t
    }

    /// The submatrix made of the first `k` columns.
    pub fn column_prefix(&self, k: usize) -> Self {
        assert!(k <= self.cols);
        let mut m = Self::zeros(self.rows, k);
        for i in 0..self.rows {
            let src = &self.data[i * self.stride..i * self.stride + m.stride];
            m.row_mut(i).copy_from_slice(src);
            if !k.is_multiple_of(WORD) {
                let last = m.stride - 1;
                m.row_mut(i)[last] &= (1u64 << (k % WORD)) - 1;
            }
        }
        m
    }

    /// Pads every row with zero columns up to `cols`.
    pub fn widen(&self, cols: usize) -> Self {
        assert!(cols >= self.cols);
        let mut m = Self::zeros(self.rows, cols);
        for i in 0..self.rows {
            m.row_mut(i)[..self.stride].copy_from_slice(self.row(i));
        }
        m
    }

    /// Stacks `other` below `self`.
    pub fn stack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            data,
        }
    }

    /// Product `self * v` for a column vector packed like a row of width `cols`.
    pub fn mul_vec(&self, v: &[u64]) -> Vec<bool> {
        assert_eq!(v.len(), self.stride);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| (a & b).count_ones())
                    .sum::<u32>()
                    % 2
                    == 1
            })
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    let s = out.stride;
                    let src = other.row(k);
                    for (x, y) in out.data[i * s..(i + 1) * s].iter_mut().zip(src) {
                        *x ^= *y;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Reduces to reduced row-echelon form in place and returns the pivot
    /// column of each nonzero row; zero rows are dropped from the end.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for j in 0..self.cols {
            if r == self.rows {
                break;
            }
            let word = j / WORD;
            let mask = 1u64 << (j % WORD);
            let Some(p) = (r..self.rows).find(|&i| self.data[i * self.stride + word] & mask != 0)
            else {
                continue;
            };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.data[i * self.stride + word] & mask != 0 {
                    self.xor_rows(i, r, self.stride);
                }
            }
            pivots.push(j);
            r += 1;
        }
        self.rows = r;
        self.data.truncate(r * self.stride);
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        // Forward elimination only; rank is the number of pivots found.
        let mut r = 0;
        for j in 0..m.cols {
            if r == m.rows {
                break;
            }
            let word = j / WORD;
            let mask = 1u64 << (j % WORD);
            let Some(p) = (r..m.rows).find(|&i| m.data[i * m.stride + word] & mask != 0) else {
                continue;
            };
            m.swap_rows(r, p);
            for i in r + 1..m.rows {
                if m.data[i * m.stride + word] & mask != 0 {
                    m.xor_rows(i, r, m.stride);
                }
            }
            r += 1;
        }
        r
    }

    /// Basis of `{v : self * v = 0}`.
    pub fn kernel_basis(&self) -> Subspace {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&j| !is_pivot[j]).collect();
        let mut basis = Self::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            basis.set(k, f, true);
            for (i, &p) in pivots.iter().enumerate() {
                if m.get(i, f) {
                    basis.set(k, p, true);
                }
            }
        }
        Subspace::from_vectors(basis)
    }

    /// Basis of the column space, as a subspace of GF(2)^rows.
    pub fn image_basis(&self) -> Subspace {
        Subspace::from_vectors(self.transpose())
    }
}

/// A subspace of GF(2)^ambient held as a basis in reduced row-echelon form.
/// The representation is canonical: equal subspaces have equal data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: BitMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Span of the rows of `vectors`.
    pub fn from_vectors(vectors: BitMatrix) -> Self {
        let mut basis = vectors;
        let pivots = basis.rref_in_place();
        Self { basis, pivots }
    }

    pub fn zero(ambient: usize) -> Self {
        Self::from_vectors(BitMatrix::zeros(0, ambient))
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_vectors(BitMatrix::identity(ambient))
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &BitMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The same vectors seen inside a larger ambient space (zero-padded).
    pub fn widen(&self, ambient: usize) -> Self {
        Self {
            basis: self.basis.widen(ambient),
            pivots: self.pivots.clone(),
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut v = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if v[p / WORD] >> (p % WORD) & 1 == 1 {
                for (x, y) in v.iter_mut().zip(self.basis.row(i)) {
                    *x ^= *y;
                }
            }
        }
        v.iter().all(|&w| w == 0)
    }
}

pub fn sum_dim(a: &Subspace, b: &Subspace) -> Result<usize, LinalgError> {
    if a.ambient() != b.ambient() {
        return Err(LinalgError::AmbientMismatch(a.ambient(), b.ambient()));
    }
    Ok(a.basis.stack(&b.basis).rank())
}

pub fn intersect_dim(a: &Subspace, b: &Subspace) -> Result<usize, LinalgError> {
    Ok(a.dim() + b.dim() - sum_dim(a, b)?)
}

/// Outcome of reducing a list of vectors left to right, where each vector
/// may only be modified by adding earlier ones and the pivot of a vector is
/// its highest set bit ("low" in persistence terminology).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowReduction {
    /// For each input vector, the pivot it ends with, or `None` if it reduced
    /// to zero. The `Some` pivots are pairwise distinct.
    pub lows: Vec<Option<usize>>,
}

impl LowReduction {
    /// Reduces the rows of `vectors` in order.
    pub fn new(vectors: BitMatrix) -> Self {
        let mut m = vectors;
        let mut owner: Vec<Option<usize>> = vec![None; m.cols()];
        let mut lows = Vec::with_capacity(m.rows());
        for j in 0..m.rows() {
            loop {
                let Some(low) = highest_bit(m.row(j)) else {
                    lows.push(None);
                    break;
                };
                match owner[low] {
                    Some(k) => m.xor_rows(j, k, low / WORD + 1),
                    None => {
                        owner[low] = Some(j);
                        lows.push(Some(low));
                        break;
                    }
                }
            }
        }
        Self { lows }
    }

    pub fn rank(&self) -> usize {
        self.lows.iter().filter(|l| l.is_some()).count()
    }
}

fn highest_bit(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .rev()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * WORD + (WORD - 1 - w.leading_zeros() as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
        (0..=max_rows, 0..=max_cols).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), c), r)
                .prop_map(move |rows| BitMatrix::from_rows(c, &rows))
        })
    }

    fn arb_pair(max_rows: usize, max_cols: usize) -> impl Strategy<Value = (BitMatrix, BitMatrix)> {
        (0..=max_cols).prop_flat_map(move |c| {
            let side = move || {
                proptest::collection::vec(proptest::collection::vec(any::<bool>(), c), 0..=max_rows)
                    .prop_map(move |rows| BitMatrix::from_rows(c, &rows))
            };
            (side(), side())
        })
    }

    fn enumerate_span(s: &Subspace) -> Vec<Vec<u64>> {
        let k = s.dim();
        (0u64..1 << k)
            .map(|mask| {
                let mut v = vec![0u64; words_for(s.ambient())];
                for i in 0..k {
                    if mask >> i & 1 == 1 {
                        for (x, y) in v.iter_mut().zip(s.basis().row(i)) {
                            *x ^= *y;
                        }
                    }
                }
                v
            })
            .collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(BitMatrix::zeros(4, 5).rank(), 0);
        assert_eq!(BitMatrix::zeros(0, 0).rank(), 0);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(BitMatrix::identity(5).kernel_basis().dim(), 0);
        let k = BitMatrix::zeros(3, 4).kernel_basis();
        assert_eq!(k.dim(), 4);
        assert_eq!(k, Subspace::full(4));
    }

    #[test]
    fn subspace_dimension_examples() {
        let a = Subspace::full(3);
        assert_eq!(sum_dim(&a, &a).unwrap(), 3);
        assert_eq!(intersect_dim(&a, &a).unwrap(), 3);
        let e01 = Subspace::from_vectors(BitMatrix::from_rows(
            4,
            &[
                vec![true, false, false, false],
                vec![false, true, false, false],
            ],
        ));
        let e23 = Subspace::from_vectors(BitMatrix::from_rows(
            4,
            &[
                vec![false, false, true, false],
                vec![false, false, false, true],
            ],
        ));
        assert_eq!(intersect_dim(&e01, &e23).unwrap(), 0);
        assert_eq!(sum_dim(&e01, &e23).unwrap(), 4);
        assert_eq!(
            sum_dim(&e01, &Subspace::zero(3)),
            Err(LinalgError::AmbientMismatch(4, 3))
        );
    }

    #[test]
    fn prefix_and_widen() {
        let m = BitMatrix::from_rows(3, &[vec![true, true, true]]);
        let p = m.column_prefix(2);
        assert_eq!(p.cols(), 2);
        assert_eq!(p.count_ones(), 2);
        assert_eq!(p.widen(3).count_ones(), 2);
        let wide = BitMatrix::from_rows(130, &[vec![true; 130]]);
        assert_eq!(wide.column_prefix(65).count_ones(), 65);
    }

    #[test]
    fn low_reduction_small() {
        // Columns of the boundary of a filled triangle's edges onto vertices.
        let m = BitMatrix::from_rows(
            3,
            &[
                vec![true, true, false],
                vec![false, true, true],
                vec![true, false, true],
            ],
        );
        let red = LowReduction::new(m);
        assert_eq!(red.lows, vec![Some(1), Some(2), None]);
        assert_eq!(red.rank(), 2);
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(m in arb_matrix(12, 140)) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_nullity(m in arb_matrix(12, 140)) {
            let k = m.kernel_basis();
            prop_assert_eq!(k.dim() + m.rank(), m.cols());
            for i in 0..k.dim() {
                prop_assert!(m.mul_vec(k.basis().row(i)).iter().all(|&b| !b));
            }
        }

        #[test]
        fn low_reduction_rank_matches(m in arb_matrix(20, 90)) {
            prop_assert_eq!(LowReduction::new(m.clone()).rank(), m.rank());
        }

        #[test]
        fn echelon_form_is_canonical(m in arb_matrix(10, 70)) {
            let a = Subspace::from_vectors(m.clone());
            let b = Subspace::from_vectors(m);
            prop_assert_eq!(a, b);
        }

        #[test]
        fn intersection_matches_enumeration((a, b) in arb_pair(6, 20)) {
            let sa = Subspace::from_vectors(a);
            let sb = Subspace::from_vectors(b);
            let common = enumerate_span(&sa)
                .into_iter()
                .filter(|v| sb.contains(v))
                .count();
            let dim = intersect_dim(&sa, &sb).unwrap();
            prop_assert_eq!(common, 1usize << dim);
            prop_assert!(sum_dim(&sa, &sb).unwrap() <= sa.dim() + sb.dim());
        }
    }

    #[test]
    fn intersection_matches_enumeration_in_twenty_dims() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..40 {
            let mut random = |k: usize| {
                let rows: Vec<Vec<bool>> = (0..k)
                    .map(|_| (0..20).map(|_| rng.gen_bool(0.5)).collect())
                    .collect();
                Subspace::from_vectors(BitMatrix::from_rows(20, &rows))
            };
            let sa = random(12);
            let sb = random(12);
            let common = enumerate_span(&sa)
                .into_iter()
                .filter(|v| sb.contains(v))
                .count();
            assert_eq!(common, 1usize << intersect_dim(&sa, &sb).unwrap());
        }
    }
}
