//! Dense complex matrices with the tensor-index convention used throughout the crate.
//!
//! Matrices are stored row-major.  The Kronecker product follows the convention in
//! which the first factor's index varies fastest: `kron(a, b)` is the block matrix
//! whose (mu, nu) block, of size `a.rows x a.cols`, is `b[(mu, nu)] * a`.  In
//! particular `kron(identity(j), s)` is the block matrix with (mu, nu) block
//! `s[(mu, nu)] * identity(j)`, which is exactly the inflation used by
//! characteristic functions of colligations.

use num_complex::Complex;

use crate::error::{Error, Result};

/// Double-precision complex scalar used everywhere in the crate.
pub type Complex64 = Complex<f64>;

/// Shorthand for a real complex scalar.
pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex::new(re, im)
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    /// Number of rows.
    pub rows: usize,
    /// Number of columns.
    pub cols: usize,
    /// Entries in row-major order; always finite.
    pub data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major data, rejecting length and finiteness violations.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        for (k, z) in data.iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite { row: k / cols.max(1), col: k % cols.max(1) });
            }
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![Complex::new(0.0, 0.0); rows * cols] }
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::ShapeMismatch("ragged rows".into()));
            }
            data.extend_from_slice(row);
        }
        ComplexMatrix::new(r, c, data)
    }

    /// Builds a matrix with real entries from nested rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let lifted: Vec<Vec<Complex64>> =
            rows.iter().map(|row| row.iter().map(|&x| cx(x, 0.0)).collect()).collect();
        Self::from_rows(&lifted)
    }

    /// Builds a matrix by evaluating `f(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    /// Diagonal matrix from the given entries.
    pub fn diagonal(entries: &[Complex64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { cx(0.0, 0.0) })
    }

    /// True when the matrix is square.
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry accessor.
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.data[row * self.cols + col]
    }

    /// Entry mutator; the new value must be finite.
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        assert!(value.re.is_finite() && value.im.is_finite(), "non-finite entry");
        self.data[row * self.cols + col] = value;
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Transpose without conjugation.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).conj())
    }

    /// Matrix sum; shapes must agree.
    pub fn add(&self, rhs: &Self) -> Self {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch in add");
        let data = self.data.iter().zip(&rhs.data).map(|(x, y)| x + y).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Matrix difference; shapes must agree.
    pub fn sub(&self, rhs: &Self) -> Self {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch in sub");
        let data = self.data.iter().zip(&rhs.data).map(|(x, y)| x - y).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Scalar multiple.
    pub fn scale(&self, factor: Complex64) -> Self {
        let data = self.data.iter().map(|x| x * factor).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Matrix product; inner dimensions must agree.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert!(self.cols == rhs.rows, "shape mismatch in mul");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }

    /// Applies the matrix to a column vector given as a slice.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert!(self.cols == v.len(), "shape mismatch in apply");
        let mut out = vec![cx(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = cx(0.0, 0.0);
            for k in 0..self.cols {
                acc += self.data[i * self.cols + k] * v[k];
            }
            out[i] = acc;
        }
        out
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace needs a square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference against another matrix of the same shape.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch in diff");
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// Copies the `nr x nc` block with upper-left corner `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        assert!(r0 + nr <= self.rows && c0 + nc <= self.cols, "block out of bounds");
        Self::from_fn(nr, nc, |i, j| self.get(r0 + i, c0 + j))
    }

    /// Overwrites the block with upper-left corner `(r0, c0)` by `m`.
    pub fn set_block(&mut self, r0: usize, c0: usize, m: &Self) {
        assert!(r0 + m.rows <= self.rows && c0 + m.cols <= self.cols, "block out of bounds");
        for i in 0..m.rows {
            for j in 0..m.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = m.data[i * m.cols + j];
            }
        }
    }

    /// Column `j` as an `rows x 1` matrix.
    pub fn column(&self, j: usize) -> Self {
        self.block(0, j, self.rows, 1)
    }

    /// Block-diagonal sum `diag(self, rhs)`.
    pub fn direct_sum(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.rows + rhs.rows, self.cols + rhs.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, rhs);
        out
    }
}

/// Kronecker product in the first-factor-fastest convention.
///
/// The result has entry `a[(p, q)] * b[(mu, nu)]` at row `p + a.rows * mu` and
/// column `q + a.cols * nu`, so viewed as a `b.rows x b.cols` array of blocks of
/// the shape of `a`, the (mu, nu) block is `b[(mu, nu)] * a`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for mu in 0..b.rows {
        for nu in 0..b.cols {
            let w = b.get(mu, nu);
            if w.re == 0.0 && w.im == 0.0 {
                continue;
            }
            for p in 0..a.rows {
                for q in 0..a.cols {
                    let r = p + a.rows * mu;
                    let c = q + a.cols * nu;
                    out.data[r * out.cols + c] = a.get(p, q) * w;
                }
            }
        }
    }
    out
}

/// Applies `(a1 kron a2 kron ... kron ak)` to a vector without forming the product.
///
/// Factors multiply the vector index in the same first-factor-fastest convention
/// as `kron`; each factor must be square.
pub fn kron_chain_apply(factors: &[&ComplexMatrix], v: &[Complex64]) -> Vec<Complex64> {
    let total: usize = factors.iter().map(|f| f.rows).product();
    assert!(v.len() == total, "vector length must match product of factor sizes");
    for f in factors {
        assert!(f.is_square(), "kron chain factors must be square");
    }
    let mut cur = v.to_vec();
    // Apply factors one at a time: factor t acts on index slot t, with slots
    // ordered fastest-first to match `kron`.
    let mut stride = 1usize;
    for f in factors {
        let n = f.rows;
        if n == 0 {
            return Vec::new();
        }
        let mut next = vec![cx(0.0, 0.0); cur.len()];
        let outer = cur.len() / (n * stride);
        for o in 0..outer {
            for inner in 0..stride {
                let base = o * n * stride + inner;
                for i in 0..n {
                    let mut acc = cx(0.0, 0.0);
                    for k in 0..n {
                        acc += f.get(i, k) * cur[base + k * stride];
                    }
                    next[base + i * stride] = acc;
                }
            }
        }
        cur = next;
        stride *= n;
    }
    cur
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::add(self, rhs)
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::sub(self, rhs)
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::mul(self, rhs)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_rejects_bad_lengths_and_nonfinite() {
        assert!(ComplexMatrix::new(2, 2, vec![cx(1.0, 0.0); 3]).is_err());
        let bad = vec![cx(1.0, 0.0), cx(f64::NAN, 0.0), cx(0.0, 0.0), cx(0.0, 0.0)];
        assert!(matches!(
            ComplexMatrix::new(2, 2, bad),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        let inf = vec![cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, f64::INFINITY), cx(0.0, 0.0)];
        assert!(ComplexMatrix::new(2, 2, inf).is_err());
    }

    #[test]
    fn product_against_hand_computation() {
        let a = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let b = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let ab = a.mul(&b);
        let expected = ComplexMatrix::from_real_rows(&[vec![2.0, 1.0], vec![4.0, 3.0]]).unwrap();
        assert!(ab.max_abs_diff(&expected) == 0.0);
    }

    #[test]
    fn adjoint_conjugates_and_transposes() {
        let a = ComplexMatrix::from_rows(&[
            vec![cx(1.0, 2.0), cx(3.0, -1.0)],
            vec![cx(0.0, 1.0), cx(2.0, 0.0)],
        ])
        .unwrap();
        let ad = a.adjoint();
        assert_eq!(ad.get(0, 1), cx(0.0, -1.0));
        assert_eq!(ad.get(1, 0), cx(3.0, 1.0));
    }

    #[test]
    fn kron_identity_inflation_layout() {
        // kron(identity(2), s) must be the 2x2 block array with blocks s[(mu,nu)] * 1_2.
        let s = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let k = kron(&ComplexMatrix::identity(2), &s);
        let expected = ComplexMatrix::from_real_rows(&[
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert!(k.max_abs_diff(&expected) == 0.0);
    }

    #[test]
    fn kron_with_scalar_identity_is_identity_map() {
        let a = ComplexMatrix::from_rows(&[
            vec![cx(1.0, 1.0), cx(2.0, 0.0)],
            vec![cx(0.0, -1.0), cx(4.0, 3.0)],
        ])
        .unwrap();
        assert_eq!(kron(&a, &ComplexMatrix::identity(1)), a);
        assert_eq!(kron(&ComplexMatrix::identity(1), &a), a);
    }

    #[test]
    fn kron_mixed_product_rule() {
        // kron(a, b) * kron(c, d) = kron(a*c, b*d) for compatible shapes.
        let a = ComplexMatrix::from_rows(&[vec![cx(1.0, 2.0), cx(0.5, -1.0)]]).unwrap();
        let c = ComplexMatrix::from_rows(&[vec![cx(2.0, 0.0)], vec![cx(0.0, 1.0)]]).unwrap();
        let b = ComplexMatrix::from_rows(&[
            vec![cx(1.0, 0.0), cx(0.0, 3.0)],
            vec![cx(2.0, -1.0), cx(1.0, 1.0)],
        ])
        .unwrap();
        let d = ComplexMatrix::from_rows(&[
            vec![cx(0.0, 1.0), cx(1.0, 0.0)],
            vec![cx(1.0, -1.0), cx(0.0, 0.0)],
        ])
        .unwrap();
        let lhs = kron(&a, &b).mul(&kron(&c, &d));
        let rhs = kron(&a.mul(&c), &b.mul(&d));
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn kron_is_associative() {
        let a = ComplexMatrix::from_rows(&[vec![cx(1.0, 1.0), cx(2.0, 0.0)]]).unwrap();
        let b = ComplexMatrix::from_rows(&[vec![cx(0.0, 1.0)], vec![cx(3.0, -2.0)]]).unwrap();
        let c = ComplexMatrix::from_rows(&[
            vec![cx(1.0, 0.0), cx(0.5, 0.5)],
            vec![cx(0.0, -1.0), cx(2.0, 0.0)],
        ])
        .unwrap();
        let lhs = kron(&kron(&a, &b), &c);
        let rhs = kron(&a, &kron(&b, &c));
        assert!(lhs.max_abs_diff(&rhs) < 1e-13);
    }

    #[test]
    fn kron_chain_apply_matches_dense_kron() {
        let a = ComplexMatrix::from_rows(&[
            vec![cx(1.0, 0.5), cx(0.0, 1.0)],
            vec![cx(2.0, 0.0), cx(1.0, -1.0)],
        ])
        .unwrap();
        let b = ComplexMatrix::from_rows(&[
            vec![cx(0.0, 1.0), cx(1.0, 0.0), cx(0.5, 0.0)],
            vec![cx(1.0, 1.0), cx(0.0, 0.0), cx(0.0, -0.5)],
            vec![cx(0.3, 0.0), cx(0.0, 0.2), cx(1.0, 0.0)],
        ])
        .unwrap();
        let dense = kron(&a, &b);
        let v: Vec<Complex64> = (0..6).map(|k| cx(k as f64 * 0.3 - 1.0, 0.1 * k as f64)).collect();
        let via_chain = kron_chain_apply(&[&a, &b], &v);
        let via_dense = dense.apply(&v);
        let err = via_chain
            .iter()
            .zip(&via_dense)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-13, "chain apply disagrees with dense kron: {err}");
    }

    #[test]
    fn empty_matrices_are_usable() {
        let e = ComplexMatrix::zeros(0, 0);
        assert!(e.is_square());
        let a = ComplexMatrix::zeros(0, 3);
        let b = ComplexMatrix::zeros(3, 2);
        let ab = a.mul(&b);
        assert_eq!((ab.rows, ab.cols), (0, 2));
        assert_eq!(kron(&e, &e).rows, 0);
        assert_eq!(e.frobenius_norm(), 0.0);
    }

    #[test]
    fn block_roundtrip() {
        let a = ComplexMatrix::from_fn(4, 5, |i, j| cx(i as f64, j as f64));
        let blk = a.block(1, 2, 2, 3);
        assert_eq!(blk.get(0, 0), cx(1.0, 2.0));
        let mut z = ComplexMatrix::zeros(4, 5);
        z.set_block(1, 2, &blk);
        assert_eq!(z.get(2, 4), cx(2.0, 4.0));
        assert_eq!(z.get(0, 0), cx(0.0, 0.0));
    }

    #[test]
    fn direct_sum_places_blocks() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::from_real_rows(&[vec![3.0]]).unwrap();
        let s = a.direct_sum(&b);
        assert_eq!((s.rows, s.cols), (3, 3));
        assert_eq!(s.get(2, 2), cx(3.0, 0.0));
        assert_eq!(s.get(2, 0), cx(0.0, 0.0));
    }
}
