//! Bit-packed exact linear algebra over the two-element field.
//!
//! Vectors pack 64 coordinates per `u64` word; all arithmetic is word-wide
//! XOR/AND.  Every routine is deterministic: echelon forms pick the
//! leftmost possible pivot in the lowest-index row, kernel bases enumerate
//! free columns in increasing order, and `solve` fixes free coordinates to
//! zero.  These conventions are relied on by the homology layer, which
//! derives canonical bases from them.

use crate::{Error, Result};

const WORD: usize = 64;

/// A vector over `F₂` of fixed length.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    /// The zero vector of the given length.
    #[must_use]
    pub fn zeros(len: usize) -> Self {
        Gf2Vector { len, words: vec![0; len.div_ceil(WORD)] }
    }

    /// Build a vector from the indices of its nonzero coordinates.
    #[must_use]
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    /// Build from explicit bits.
    #[must_use]
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of bounds ({})", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of bounds ({})", self.len);
        if value {
            self.words[i / WORD] |= 1 << (i % WORD);
        } else {
            self.words[i / WORD] &= !(1 << (i % WORD));
        }
    }

    /// Flip coordinate `i`.
    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of bounds ({})", self.len);
        self.words[i / WORD] ^= 1 << (i % WORD);
    }

    /// In-place XOR with another vector of the same length.
    pub fn xor_assign(&mut self, other: &Gf2Vector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the leftmost (lowest-index) nonzero coordinate.
    pub fn leading(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Indices of all nonzero coordinates, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.count_ones());
        for (wi, &w) in self.words.iter().enumerate() {
            let mut rest = w;
            while rest != 0 {
                out.push(wi * WORD + rest.trailing_zeros() as usize);
                rest &= rest - 1;
            }
        }
        out
    }

    /// Parity of the coordinatewise product (the standard bilinear form).
    pub fn dot(&self, other: &Gf2Vector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let mut acc = 0u32;
        for (w, o) in self.words.iter().zip(&other.words) {
            acc ^= (w & o).count_ones() & 1;
        }
        acc & 1 == 1
    }
}

impl std::fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// A matrix over `F₂`, stored as packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    n_cols: usize,
    rows: Vec<Gf2Vector>,
}

impl Gf2Matrix {
    /// A matrix with no rows and the given column count.
    #[must_use]
    pub fn new(n_cols: usize) -> Self {
        Gf2Matrix { n_cols, rows: Vec::new() }
    }

    /// A zero matrix of the given shape.
    #[must_use]
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Gf2Matrix { n_cols, rows: vec![Gf2Vector::zeros(n_cols); n_rows] }
    }

    /// The identity matrix.
    #[must_use]
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    /// Build from 0/1 entries given row by row.
    #[must_use]
    pub fn from_entries(entries: &[&[u8]]) -> Self {
        let n_cols = entries.first().map_or(0, |r| r.len());
        let mut m = Self::new(n_cols);
        for row in entries {
            assert_eq!(row.len(), n_cols, "ragged rows");
            let mut v = Gf2Vector::zeros(n_cols);
            for (i, &b) in row.iter().enumerate() {
                if b != 0 {
                    v.set(i, true);
                }
            }
            m.rows.push(v);
        }
        m
    }

    pub fn from_rows(n_cols: usize, rows: Vec<Gf2Vector>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), n_cols, "row length mismatch");
        }
        Gf2Matrix { n_cols, rows }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &Gf2Vector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Gf2Vector] {
        &self.rows
    }

    pub fn push_row(&mut self, row: Gf2Vector) {
        assert_eq!(row.len(), self.n_cols, "row length mismatch");
        self.rows.push(row);
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    #[must_use]
    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.n_cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.support() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    /// Matrix–vector product `A·x`.
    #[must_use]
    pub fn mul_vec(&self, x: &Gf2Vector) -> Gf2Vector {
        assert_eq!(x.len(), self.n_cols, "dimension mismatch");
        let mut out = Gf2Vector::zeros(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            if row.dot(x) {
                out.set(r, true);
            }
        }
        out
    }

    /// Reduced row echelon form together with the pivot columns.
    ///
    /// Pivots take the leftmost available column in each successive row;
    /// the output rows are fully reduced and sorted by pivot column, with
    /// zero rows dropped.  The result is the canonical basis of the row
    /// space.
    #[must_use]
    pub fn rref(&self) -> (Gf2Matrix, Vec<usize>) {
        let mut ech = Echelon::new(self.n_cols);
        for row in &self.rows {
            ech.insert(row.clone());
        }
        let (rows, pivots) = ech.into_sorted_rows();
        (Gf2Matrix { n_cols: self.n_cols, rows }, pivots)
    }

    /// Rank of the matrix.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : A·x = 0}`.
    ///
    /// One basis vector per free column, produced in increasing column
    /// order; the vector for free column `f` has a one at `f` and at every
    /// pivot column whose row has a one at `f`.
    #[must_use]
    pub fn kernel_basis(&self) -> Vec<Gf2Vector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.n_cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for f in 0..self.n_cols {
            if is_pivot[f] {
                continue;
            }
            let mut v = Gf2Vector::zeros(self.n_cols);
            v.set(f, true);
            for (row, &p) in r.rows.iter().zip(&pivots) {
                if row.get(f) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Solve `A·x = b`, fixing every free coordinate to zero.
    ///
    /// Returns [`Error::NoSolution`] when the system is inconsistent.
    pub fn solve(&self, b: &Gf2Vector) -> Result<Gf2Vector> {
        assert_eq!(b.len(), self.rows.len(), "rhs length mismatch");
        // Eliminate on rows of [A | b].
        let mut ech = Echelon::new(self.n_cols + 1);
        for (r, row) in self.rows.iter().enumerate() {
            let mut aug = Gf2Vector::zeros(self.n_cols + 1);
            for c in row.support() {
                aug.set(c, true);
            }
            if b.get(r) {
                aug.set(self.n_cols, true);
            }
            ech.insert(aug);
        }
        let (rows, pivots) = ech.into_sorted_rows();
        let mut x = Gf2Vector::zeros(self.n_cols);
        for (row, &p) in rows.iter().zip(&pivots) {
            if p == self.n_cols {
                return Err(Error::NoSolution("inconsistent linear system".into()));
            }
            // Row is fully reduced, so with free coordinates pinned at
            // zero the pivot value is exactly the augmented bit.
            if row.get(self.n_cols) {
                x.set(p, true);
            }
        }
        Ok(x)
    }
}

impl std::fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for row in &self.rows {
            writeln!(f, "{row:?}")?;
        }
        Ok(())
    }
}

/// Incremental row-echelon accumulator with full back-substitution.
///
/// Rows are inserted one at a time; each insertion reduces the candidate
/// against the current pivots and, when a new pivot appears, clears that
/// column from all previously stored rows.  The stored rows therefore
/// always form the reduced echelon basis of the span of everything
/// inserted so far.
pub struct Echelon {
    n_cols: usize,
    rows: Vec<Gf2Vector>,
    pivots: Vec<usize>,
}

impl Echelon {
    #[must_use]
    pub fn new(n_cols: usize) -> Self {
        Echelon { n_cols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Fully reduce `v` against the stored rows.
    ///
    /// Every stored row has a one in its own pivot column and zeros in all
    /// other pivot columns, so one sweep clears every pivot coordinate of
    /// `v` and cannot reintroduce any.
    #[must_use]
    pub fn reduce(&self, mut v: Gf2Vector) -> Gf2Vector {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v
    }

    /// Whether `v` lies in the span of the inserted rows.
    pub fn contains(&self, v: &Gf2Vector) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    /// Insert a row; returns `true` when the rank grew.
    pub fn insert(&mut self, v: Gf2Vector) -> bool {
        let v = self.reduce(v);
        let Some(lead) = v.leading() else { return false };
        // Back-substitute the new pivot out of the existing rows, keeping
        // every stored row fully reduced.
        for row in &mut self.rows {
            if row.get(lead) {
                row.xor_assign(&v);
            }
        }
        self.rows.push(v);
        self.pivots.push(lead);
        true
    }

    /// Consume the accumulator, returning rows sorted by pivot column.
    pub fn into_sorted_rows(self) -> (Vec<Gf2Vector>, Vec<usize>) {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let mut rows = Vec::with_capacity(self.rows.len());
        let mut pivots = Vec::with_capacity(self.rows.len());
        let mut stash: Vec<Option<Gf2Vector>> = self.rows.into_iter().map(Some).collect();
        for i in order {
            rows.push(stash[i].take().expect("row taken twice"));
            pivots.push(self.pivots[i]);
        }
        (rows, pivots)
    }

    /// Borrow the stored rows (unsorted; pivot order of insertion).
    pub fn rows(&self) -> &[Gf2Vector] {
        &self.rows
    }
}

/// Canonical basis of a quotient `span(cycles) / span(boundaries)` with a
/// coordinate solver.
///
/// Representatives are chosen deterministically: cycles are scanned in the
/// given order and each one that enlarges the span modulo the boundaries
/// becomes the next representative.  `coords` reduces a vector against the
/// combined echelon while tracking which representatives were consumed,
/// which yields the coordinates of its class.
pub struct QuotientBasis {
    reps: Vec<Gf2Vector>,
    ech_rows: Vec<Gf2Vector>,
    tags: Vec<Gf2Vector>,
    pivot_row_of_col: Vec<Option<u32>>,
}

/// Compute the canonical quotient basis.  `boundaries` must be contained
/// in the span of `cycles` for the quotient to make sense; this is not
/// checked here (the homology layer guarantees it).
#[must_use]
pub fn quotient_basis(n_cols: usize, boundaries: &[Gf2Vector], cycles: &[Gf2Vector]) -> QuotientBasis {
    let mut picker = Echelon::new(n_cols);
    for b in boundaries {
        picker.insert(b.clone());
    }
    let mut reps = Vec::new();
    for z in cycles {
        if picker.insert(z.clone()) {
            reps.push(z.clone());
        }
    }
    // Tagged echelon: boundaries carry the zero tag, representative i the
    // indicator tag e_i.  Reduction then reports quotient coordinates.
    let k = reps.len();
    let mut q = QuotientBasis {
        reps: reps.clone(),
        ech_rows: Vec::new(),
        tags: Vec::new(),
        pivot_row_of_col: vec![None; n_cols + 1],
    };
    for b in boundaries {
        q.insert_tagged(b.clone(), Gf2Vector::zeros(k));
    }
    for (i, r) in reps.iter().enumerate() {
        let mut tag = Gf2Vector::zeros(k);
        tag.set(i, true);
        q.insert_tagged(r.clone(), tag);
    }
    q
}

impl QuotientBasis {
    fn insert_tagged(&mut self, mut v: Gf2Vector, mut tag: Gf2Vector) {
        loop {
            let Some(lead) = v.leading() else { return };
            match self.pivot_row_of_col[lead] {
                Some(r) => {
                    v.xor_assign(&self.ech_rows[r as usize]);
                    tag.xor_assign(&self.tags[r as usize]);
                }
                None => {
                    self.pivot_row_of_col[lead] = Some(self.ech_rows.len() as u32);
                    self.ech_rows.push(v);
                    self.tags.push(tag);
                    return;
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// The chosen representatives, in coordinate order.
    pub fn reps(&self) -> &[Gf2Vector] {
        &self.reps
    }

    /// Coordinates of the class of `v` in the representative basis, or
    /// `None` when `v` is outside `span(boundaries) + span(reps)`.
    pub fn coords(&self, v: &Gf2Vector) -> Option<Gf2Vector> {
        let mut v = v.clone();
        let mut tag = Gf2Vector::zeros(self.reps.len());
        loop {
            let Some(lead) = v.leading() else { return Some(tag) };
            match self.pivot_row_of_col[lead] {
                Some(r) => {
                    v.xor_assign(&self.ech_rows[r as usize]);
                    tag.xor_assign(&self.tags[r as usize]);
                }
                None => return None,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rref_small_rank_two() {
        let m = Gf2Matrix::from_entries(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]);
        let (r, pivots) = m.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(r.n_rows(), 2);
        assert_eq!(m.rank(), 2);
        // Fully reduced: row 0 = [1,0,1], row 1 = [0,1,1].
        assert_eq!(r.row(0), &Gf2Vector::from_bits(&[true, false, true]));
        assert_eq!(r.row(1), &Gf2Vector::from_bits(&[false, true, true]));
    }

    #[test]
    fn kernel_of_sum_functional() {
        let m = Gf2Matrix::from_entries(&[&[1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], Gf2Vector::from_bits(&[true, true]));
    }

    #[test]
    fn solve_prefers_zero_free_columns() {
        // x0 + x1 + x2 = 1 with x1, x2 free: solution must be (1,0,0).
        let m = Gf2Matrix::from_entries(&[&[1, 1, 1]]);
        let b = Gf2Vector::from_bits(&[true]);
        let x = m.solve(&b).unwrap();
        assert_eq!(x, Gf2Vector::from_bits(&[true, false, false]));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = Gf2Matrix::from_entries(&[&[1, 0], &[1, 0]]);
        let b = Gf2Vector::from_bits(&[true, false]);
        assert!(matches!(m.solve(&b), Err(Error::NoSolution(_))));
    }

    #[test]
    fn quotient_basis_picks_first_new_cycle() {
        let boundaries = [Gf2Vector::from_bits(&[true, true, false])];
        let cycles =
            [Gf2Vector::from_bits(&[true, true, false]), Gf2Vector::from_bits(&[false, true, true])];
        let q = quotient_basis(3, &boundaries, &cycles);
        assert_eq!(q.dim(), 1);
        assert_eq!(q.reps()[0], cycles[1]);
        // Coordinates: the boundary itself is the zero class.
        assert_eq!(q.coords(&boundaries[0]).unwrap(), Gf2Vector::zeros(1));
        let mut sum = cycles[0].clone();
        sum.xor_assign(&cycles[1]);
        assert_eq!(q.coords(&sum).unwrap(), Gf2Vector::from_bits(&[true]));
    }

    /// Plain O(n³) elimination with no packing tricks, used as an oracle.
    fn naive_rank(mut rows: Vec<Vec<u8>>, n_cols: usize) -> usize {
        let mut rank = 0;
        for c in 0..n_cols {
            if let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] == 1) {
                rows.swap(rank, p);
                for r in 0..rows.len() {
                    if r != rank && rows[r][c] == 1 {
                        for j in 0..n_cols {
                            rows[r][j] ^= rows[rank][j];
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn random_matrices_match_naive_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6f2);
        for _ in 0..200 {
            let (nr, nc) = (6, 9);
            let mut naive = vec![vec![0u8; nc]; nr];
            let mut m = Gf2Matrix::new(nc);
            for row in naive.iter_mut() {
                let mut v = Gf2Vector::zeros(nc);
                for (c, cell) in row.iter_mut().enumerate() {
                    if rng.gen_bool(0.3) {
                        *cell = 1;
                        v.set(c, true);
                    }
                }
                m.push_row(v);
            }
            assert_eq!(m.rank(), naive_rank(naive, nc));
            // Kernel vectors really are in the kernel, and there are
            // n_cols - rank of them.
            let kernel = m.kernel_basis();
            assert_eq!(kernel.len(), nc - m.rank());
            for k in &kernel {
                assert!(m.mul_vec(k).is_zero());
            }
            // rref is idempotent.
            let (r1, p1) = m.rref();
            let (r2, p2) = r1.rref();
            assert_eq!(p1, p2);
            assert!(r1.rows() == r2.rows());
        }
    }

    #[test]
    fn solve_round_trips_on_random_consistent_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xa11);
        for _ in 0..200 {
            let (nr, nc) = (7, 5);
            let mut m = Gf2Matrix::new(nc);
            for _ in 0..nr {
                let mut v = Gf2Vector::zeros(nc);
                for c in 0..nc {
                    if rng.gen_bool(0.4) {
                        v.set(c, true);
                    }
                }
                m.push_row(v);
            }
            let mut x = Gf2Vector::zeros(nc);
            for c in 0..nc {
                if rng.gen_bool(0.5) {
                    x.set(c, true);
                }
            }
            let b = m.mul_vec(&x);
            let solved = m.solve(&b).unwrap();
            assert_eq!(m.mul_vec(&solved), b);
        }
    }
}
