//! Linear algebra over GF(2), binary linear codes, and the binary expansion
//! of matrices over GF(2^m).

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2m::{FieldElement, FieldSpec};

const WORD: usize = 64;

/// Fixed-length bit vector packed into u64 words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Lowest `len` bits of `mask`, bit i = coordinate i.
    pub fn from_u64(mask: u64, len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len.min(64) {
            v.set(i, mask >> i & 1 == 1);
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
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        let bit = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= bit;
        } else {
            self.words[i / WORD] &= !bit;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Cyclic right shift: coordinate i moves to i + 1 mod len.
    pub fn rotate_right(&self) -> BitVec {
        let mut out = BitVec::zeros(self.len);
        for i in self.ones() {
            out.set((i + 1) % self.len, true);
        }
        out
    }

    /// Hex string with coordinate 0 as the lowest bit.
    pub fn to_hex(&self) -> String {
        let mut digits = String::with_capacity(self.len.div_ceil(4));
        for chunk in (0..self.len.max(1)).step_by(4) {
            let nibble = (0..4)
                .filter(|&k| chunk + k < self.len && self.get(chunk + k))
                .fold(0u32, |acc, k| acc | 1 << k);
            digits.push(char::from_digit(nibble, 16).unwrap());
        }
        digits.chars().rev().collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

/// Result of row reduction.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: BitMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch(bad.len(), cols));
        }
        Ok(BitMatrix { cols, rows })
    }

    pub fn from_bools(rows: &[Vec<bool>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(cols, rows.iter().map(|r| BitVec::from_bits(r)).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    pub fn push_row(&mut self, row: BitVec) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::LengthMismatch(row.len(), self.cols));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::LengthMismatch(self.cols, other.cols));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(BitMatrix {
            cols: self.cols,
            rows,
        })
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    /// self · v^T
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            out.set(i, row.dot(v));
        }
        out
    }

    /// self · other^T
    pub fn mul_transpose(&self, other: &BitMatrix) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows.len(), other.rows.len());
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in other.rows.iter().enumerate() {
                out.rows[i].set(j, a.dot(b));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    /// Reduced row echelon form; zero rows are kept at the bottom.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == m.rows.len() {
                break;
            }
            let Some(p) = (r..m.rows.len()).find(|&i| m.rows[i].get(c)) else {
                continue;
            };
            m.rows.swap(r, p);
            let pivot_row = m.rows[r].clone();
            for i in 0..m.rows.len() {
                if i != r && m.rows[i].get(c) {
                    m.rows[i].xor_assign(&pivot_row);
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

    /// Nonzero rows of the RREF.
    pub fn row_basis(&self) -> BitMatrix {
        let mut red = self.rref();
        red.matrix.rows.truncate(red.rank);
        red.matrix
    }

    /// Basis of {v : self · v^T = 0}, one row per free column.
    pub fn null_space(&self) -> BitMatrix {
        let red = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &red.pivots {
            is_pivot[p] = true;
        }
        let mut out = BitMatrix::zeros(0, self.cols);
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVec::zeros(self.cols);
            v.set(free, true);
            for (r, &p) in red.pivots.iter().enumerate() {
                if red.matrix.rows[r].get(free) {
                    v.set(p, true);
                }
            }
            out.rows.push(v);
        }
        out
    }

    pub fn hex_rows(&self) -> Vec<String> {
        self.rows.iter().map(BitVec::to_hex).collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.rows).finish()
    }
}

/// A binary linear code of length n, kept in canonical form.
#[derive(Clone)]
pub struct BinaryCode {
    n: usize,
    /// RREF generator matrix, exactly k rows.
    generator: BitMatrix,
    /// Full-rank parity-check matrix, n − k rows.
    parity: BitMatrix,
}

impl BinaryCode {
    pub fn from_generator(generator: &BitMatrix) -> Self {
        let g = generator.row_basis();
        let parity = g.null_space();
        BinaryCode {
            n: generator.ncols(),
            generator: g,
            parity,
        }
    }

    pub fn from_parity_check(h: &BitMatrix) -> Self {
        let generator = h.null_space().row_basis();
        BinaryCode {
            n: h.ncols(),
            generator,
            parity: h.row_basis(),
        }
    }

    pub fn full(n: usize) -> Self {
        Self::from_generator(&BitMatrix::identity(n))
    }

    pub fn zero(n: usize) -> Self {
        Self::from_parity_check(&BitMatrix::identity(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.generator.nrows()
    }

    pub fn is_zero(&self) -> bool {
        self.k() == 0
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity
    }

    pub fn contains(&self, v: &BitVec) -> Result<bool> {
        if v.len() != self.n {
            return Err(Error::LengthMismatch(v.len(), self.n));
        }
        Ok(self.parity.rows().iter().all(|h| !h.dot(v)))
    }

    pub fn intersection(&self, other: &BinaryCode) -> Result<BinaryCode> {
        if self.n != other.n {
            return Err(Error::LengthMismatch(self.n, other.n));
        }
        Ok(Self::from_parity_check(&self.parity.stack(&other.parity)?))
    }

    /// Every generator row has even weight, hence every codeword does.
    pub fn is_even(&self) -> bool {
        self.generator.rows().iter().all(|r| r.weight() % 2 == 0)
    }

    pub fn is_subcode_of(&self, other: &BinaryCode) -> Result<bool> {
        for r in self.generator.rows() {
            if !other.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl PartialEq for BinaryCode {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.generator == other.generator
    }
}

impl Eq for BinaryCode {}

impl fmt::Debug for BinaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] code", self.n, self.k())
    }
}

/// Dense matrix over one GF(2^m).
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FieldMatrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(field: &FieldSpec, rows: &[Vec<FieldElement>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::LengthMismatch(row.len(), cols));
            }
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x)?;
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.field.element(self.data[r * self.cols + c]).unwrap()
    }

    pub fn set(&mut self, r: usize, c: usize, x: &FieldElement) -> Result<()> {
        self.field.ensure_same(x.field())?;
        self.data[r * self.cols + c] = x.bits();
        Ok(())
    }

    /// M · c for a binary column vector c, computed in the big field.
    pub fn mul_binary(&self, v: &BitVec) -> Vec<FieldElement> {
        (0..self.rows)
            .map(|r| {
                let acc = v
                    .ones()
                    .fold(0u32, |acc, c| acc ^ self.data[r * self.cols + c]);
                self.field.element(acc).unwrap()
            })
            .collect()
    }

    /// Replaces every row by m binary rows, one per polynomial-basis
    /// coordinate. Row i·m + b holds bit b of the entries of row i.
    pub fn expand_to_bits(&self) -> BitMatrix {
        let m = self.field.m() as usize;
        let mut out = BitMatrix::zeros(self.rows * m, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let x = self.data[r * self.cols + c];
                for b in 0..m {
                    if x >> b & 1 == 1 {
                        out.set(r * m + b, c, true);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<FieldElement>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c)).collect())
            .collect();
        f.debug_list().entries(rows).finish()
    }
}
