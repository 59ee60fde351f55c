//! Exact integer linear algebra.
//!
//! Everything in the crate reduces to two primitives over `ℤ`: the Smith
//! normal form `U·A·V = D` and integer linear-system solving built on top
//! of it. Entries are arbitrary precision; no fixed-width arithmetic is used
//! anywhere on matrix entries.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntLinError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("malformed matrix text: {0}")]
    Parse(String),
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, IntLinError> {
        if data.len() != rows * cols {
            return Err(IntLinError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    /// Builds a matrix from small integers. Panics if `entries.len() != rows * cols`.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        Mat { rows, cols, data: entries.iter().map(|&x| BigInt::from(x)).collect() }
    }

    /// Builds a matrix from rows of small integers. All rows must have equal length;
    /// `cols` is needed for the zero-row case.
    pub fn from_rows(cols: usize, rows: &[&[i64]]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        Mat { rows: rows.len(), cols, data }
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.data[i * cols + i] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn column(&self, c: usize) -> Mat {
        self.select_cols(&[c])
    }

    pub fn select_cols(&self, cols: &[usize]) -> Mat {
        let mut m = Mat::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                m.data[r * cols.len() + k] = self.get(r, c).clone();
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Mat { rows: rows.len(), cols: self.cols, data }
    }

    /// Contiguous sub-block `[r0, r0+nr) × [c0, c0+nc)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Mat {
        let mut m = Mat::zeros(nr, nc);
        for r in 0..nr {
            for c in 0..nc {
                m.data[r * nc + c] = self.get(r0 + r, c0 + c).clone();
            }
        }
        m
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "hcat row mismatch");
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Mat { rows: self.rows, cols, data }
    }

    /// Vertical concatenation `[self; other]`.
    pub fn vcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "vcat column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(&self, other: &Mat) -> Mat {
        let mut m = Mat::zeros(self.rows + other.rows, self.cols + other.cols);
        m.paste(0, 0, self);
        m.paste(self.rows, self.cols, other);
        m
    }

    /// Overwrites the block starting at `(r0, c0)` with `src`.
    pub fn paste(&mut self, r0: usize, c0: usize, src: &Mat) {
        for r in 0..src.rows {
            for c in 0..src.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = src.get(r, c).clone();
            }
        }
    }

    pub fn scale(&self, k: &BigInt) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect() }
    }

    pub fn checked_mul(&self, other: &Mat) -> Result<Mat, IntLinError> {
        if self.cols != other.rows {
            return Err(IntLinError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.data[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, IntLinError> {
        if self.rows != self.cols {
            return Err(IntLinError::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&r| !m.get(r, k).is_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        Ok(sign * m.get(n - 1, n - 1))
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row[dst] += k * row[src]`
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for c in 0..self.cols {
            let delta = &self.data[src * self.cols + c] * k;
            self.data[dst * self.cols + c] += delta;
        }
    }

    /// `col[dst] += k * col[src]`
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for r in 0..self.rows {
            let delta = &self.data[r * self.cols + src] * k;
            self.data[r * self.cols + dst] += delta;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -std::mem::take(&mut self.data[r * self.cols + c]);
            self.data[r * self.cols + c] = v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -std::mem::take(&mut self.data[r * self.cols + c]);
            self.data[r * self.cols + c] = v;
        }
    }

    /// Serializes in the fixture text format: `"rows cols"` then the rows.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}", self.rows, self.cols);
        for r in 0..self.rows {
            s.push('\n');
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            s.push_str(&row.join(" "));
        }
        s
    }
}

impl FromStr for Mat {
    type Err = IntLinError;

    /// Parses `"rows cols"` followed by `rows * cols` whitespace-separated integers.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut tokens = text.split_whitespace();
        let mut dim = |what: &str| -> Result<usize, IntLinError> {
            tokens
                .next()
                .ok_or_else(|| IntLinError::Parse(format!("missing {what}")))?
                .parse::<usize>()
                .map_err(|e| IntLinError::Parse(format!("bad {what}: {e}")))
        };
        let rows = dim("row count")?;
        let cols = dim("column count")?;
        let data: Vec<BigInt> = tokens
            .map(|t| t.parse::<BigInt>().map_err(|e| IntLinError::Parse(format!("bad entry {t:?}: {e}"))))
            .collect::<Result<_, _>>()?;
        if data.len() != rows * cols {
            return Err(IntLinError::Parse(format!(
                "expected {} entries, found {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Mat { rows, cols, data })
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<'a> Mul<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn mul(self, rhs: &'a Mat) -> Mat {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl<'a> Add<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn add(self, rhs: &'a Mat) -> Mat {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn sub(self, rhs: &'a Mat) -> Mat {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

/// `U·A·V = D` with `U`, `V` unimodular and `D` diagonal, `d₁ | d₂ | … | d_r`,
/// all `dᵢ > 0`, followed by zeros. The inverses of `U` and `V` are tracked
/// alongside, since kernel and cokernel presentations need them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: Mat,
    pub d: Mat,
    pub v: Mat,
    pub u_inv: Mat,
    pub v_inv: Mat,
    rank: usize,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The nonzero diagonal entries `d₁ | … | d_r`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Diagonal entry `i` of `D`, zero past the rank (for `i < rows`).
    pub fn diag(&self, i: usize) -> BigInt {
        if i < self.rank {
            self.d.get(i, i).clone()
        } else {
            BigInt::zero()
        }
    }

    pub fn source_shape(&self) -> (usize, usize) {
        self.d.shape()
    }
}

struct SnfState {
    d: Mat,
    u: Mat,
    u_inv: Mat,
    v: Mat,
    v_inv: Mat,
}

impl SnfState {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    // row[dst] += k row[src]; the inverse absorbs col[src] -= k col[dst]
    fn row_op(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.d.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
        self.u_inv.add_col_multiple(src, dst, &-k);
    }

    // col[dst] += k col[src]; the inverse absorbs row[src] -= k row[dst]
    fn col_op(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.d.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
        self.v_inv.add_row_multiple(src, dst, &-k);
    }

    fn negate_col(&mut self, c: usize) {
        self.d.negate_col(c);
        self.v.negate_col(c);
        self.v_inv.negate_row(c);
    }

    /// Smallest nonzero |entry| in the block `[t.., t..]`, ties to lowest (row, col).
    fn block_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for r in t..self.d.rows {
            for c in t..self.d.cols {
                let x = self.d.get(r, c);
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((br, bc)) => x.abs() < self.d.get(br, bc).abs(),
                };
                if better {
                    best = Some((r, c));
                }
            }
        }
        best
    }

    /// Clears row `t` and column `t` beyond the pivot. Returns false when a
    /// nonzero remainder is left, after moving the smallest one to the pivot.
    fn clear_cross(&mut self, t: usize) -> bool {
        let (m, n) = self.d.shape();
        let pivot = self.d.get(t, t).clone();
        for i in t + 1..m {
            if !self.d.get(i, t).is_zero() {
                let q = self.d.get(i, t) / &pivot;
                if !q.is_zero() {
                    self.row_op(i, t, &-q);
                }
            }
        }
        for j in t + 1..n {
            if !self.d.get(t, j).is_zero() {
                let q = self.d.get(t, j) / &pivot;
                if !q.is_zero() {
                    self.col_op(j, t, &-q);
                }
            }
        }
        let mut best: Option<(bool, usize, BigInt)> = None;
        for i in t + 1..m {
            let x = self.d.get(i, t);
            if !x.is_zero() && best.as_ref().map_or(true, |(_, _, b)| x.abs() < *b) {
                best = Some((true, i, x.abs()));
            }
        }
        for j in t + 1..n {
            let x = self.d.get(t, j);
            if !x.is_zero() && best.as_ref().map_or(true, |(_, _, b)| x.abs() < *b) {
                best = Some((false, j, x.abs()));
            }
        }
        match best {
            None => true,
            Some((true, i, _)) => {
                self.swap_rows(t, i);
                false
            }
            Some((false, j, _)) => {
                self.swap_cols(t, j);
                false
            }
        }
    }
}

/// Smith normal form with transformation matrices. Deterministic and total.
pub fn smith_normal_form(a: &Mat) -> SmithDecomposition {
    let (m, n) = a.shape();
    let mut st = SnfState {
        d: a.clone(),
        u: Mat::identity(m),
        u_inv: Mat::identity(m),
        v: Mat::identity(n),
        v_inv: Mat::identity(n),
    };
    let mut t = 0;
    while t < m.min(n) {
        let Some((pr, pc)) = st.block_pivot(t) else { break };
        st.swap_rows(t, pr);
        st.swap_cols(t, pc);
        loop {
            if !st.clear_cross(t) {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let pivot = st.d.get(t, t).clone();
            let offender = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !st.d.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => st.row_op(t, i, &BigInt::one()),
                None => break,
            }
        }
        if st.d.get(t, t).is_negative() {
            st.negate_col(t);
        }
        t += 1;
    }
    SmithDecomposition { u: st.u, d: st.d, v: st.v, u_inv: st.u_inv, v_inv: st.v_inv, rank: t }
}

/// Result of [`solve_integer`]: a particular solution when one exists, and a
/// basis (as columns) of the integer kernel of the coefficient matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSolution {
    pub particular: Option<Mat>,
    pub kernel: Mat,
}

/// Solves `a·X = b` over `ℤ`. "No solution" is an answer, not an error.
pub fn solve_integer(a: &Mat, b: &Mat) -> Result<IntegerSolution, IntLinError> {
    if a.rows() != b.rows() {
        return Err(IntLinError::DimensionMismatch(format!(
            "coefficient matrix has {} rows, right-hand side has {}",
            a.rows(),
            b.rows()
        )));
    }
    let snf = smith_normal_form(a);
    Ok(solve_with(&snf, b))
}

/// Solves `a·X = b` given a precomputed Smith decomposition of `a`.
pub fn solve_with(snf: &SmithDecomposition, b: &Mat) -> IntegerSolution {
    let (m, n) = snf.source_shape();
    let r = snf.rank();
    let kernel = snf.v.select_cols(&(r..n).collect::<Vec<_>>());
    let ub = &snf.u * b;
    let k = b.cols();
    let mut y = Mat::zeros(n, k);
    let mut solvable = true;
    'outer: for c in 0..k {
        for i in 0..m {
            let x = ub.get(i, c);
            if i < r {
                let (q, rem) = x.div_rem(snf.d.get(i, i));
                if !rem.is_zero() {
                    solvable = false;
                    break 'outer;
                }
                y.set(i, c, q);
            } else if !x.is_zero() {
                solvable = false;
                break 'outer;
            }
        }
    }
    let particular = solvable.then(|| &snf.v * &y);
    IntegerSolution { particular, kernel }
}

/// A basis (as columns) of the lattice spanned by the columns of `gens`.
pub fn column_lattice_basis(gens: &Mat) -> Mat {
    let snf = smith_normal_form(gens);
    let mut basis = Mat::zeros(gens.rows(), snf.rank());
    for i in 0..snf.rank() {
        let col = snf.u_inv.column(i).scale(snf.d.get(i, i));
        basis.paste(0, i, &col);
    }
    basis
}
