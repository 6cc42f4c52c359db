//! Exact generalised metrics on `T ⊕ T*` and the `O(d,d)` action.
//!
//! The action is `H ↦ Oᵗ H O`. Under it the B-shift
//! `[[1, 0], [-b', 1]]` sends `H(g, b)` to `H(g, b + b')` and the block swap
//! inverts `g` when `b = 0`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense row-major matrix over `Q`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square() && *self == -&self.transpose()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn try_mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!("{}x{} times {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or(Error::SingularMatrix)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let pv = a.get(col, col).clone();
            for j in 0..n {
                let x = a.get(col, j) / &pv;
                a.set(col, j, x);
                let y = inv.get(col, j) / &pv;
                inv.set(col, j, y);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..n {
                    let x = a.get(r, j) - &factor * a.get(col, j);
                    a.set(r, j, x);
                    let y = inv.get(r, j) - &factor * inv.get(col, j);
                    inv.set(r, j, y);
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// Sub-block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    /// `[[a, b], [c, d]]` from four `n×n` blocks.
    pub fn from_blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
        let n = a.rows;
        let mut out = Self::zeros(2 * n, 2 * n);
        for (blk, (r0, c0)) in [(a, (0, 0)), (b, (0, n)), (c, (n, 0)), (d, (n, n))] {
            for i in 0..n {
                for j in 0..n {
                    out.set(r0 + i, c0 + j, blk.get(i, j).clone());
                }
            }
        }
        out
    }

    /// Positive definiteness of a symmetric matrix via its elimination
    /// pivots.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        let n = self.rows;
        let mut a = self.clone();
        for k in 0..n {
            let pv = a.get(k, k).clone();
            if !pv.is_positive() {
                return false;
            }
            for r in k + 1..n {
                let factor = a.get(r, k) / &pv;
                for j in k..n {
                    let x = a.get(r, j) - &factor * a.get(k, j);
                    a.set(r, j, x);
                }
            }
        }
        true
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self + &(-rhs)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("shape mismatch in matrix product")
    }
}

/// Metric `g` and Kalb-Ramond field `b` on `R^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Background {
    g: Matrix,
    b: Matrix,
}

impl Background {
    pub fn new(g: Matrix, b: Matrix) -> Result<Self> {
        if !g.is_square() || !b.is_square() || g.rows() != b.rows() {
            return Err(Error::Shape("g and b must be square of equal size".into()));
        }
        if !g.is_symmetric() {
            return Err(Error::NotGeneralisedMetric("g is not symmetric".into()));
        }
        if !b.is_antisymmetric() {
            return Err(Error::NotGeneralisedMetric("b is not antisymmetric".into()));
        }
        g.inverse()?;
        Ok(Background { g, b })
    }

    pub fn g(&self) -> &Matrix {
        &self.g
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }
}

/// The `O(d,d)` pairing `[[0, 1], [1, 0]]`.
pub fn eta(d: usize) -> Matrix {
    let z = Matrix::zeros(d, d);
    let i = Matrix::identity(d);
    Matrix::from_blocks(&z, &i, &i, &z)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenMetric {
    h: Matrix,
    eta: Matrix,
}

impl GenMetric {
    /// Validates `Hᵗ = H` and `H η H = η`.
    pub fn new(h: Matrix) -> Result<Self> {
        if !h.is_square() || !h.rows().is_multiple_of(2) {
            return Err(Error::Shape("generalised metric must be 2d×2d".into()));
        }
        let eta = eta(h.rows() / 2);
        if !h.is_symmetric() {
            return Err(Error::NotGeneralisedMetric("H is not symmetric".into()));
        }
        if &(&h * &eta) * &h != eta {
            return Err(Error::NotGeneralisedMetric("H η H ≠ η".into()));
        }
        Ok(GenMetric { h, eta })
    }

    pub fn h(&self) -> &Matrix {
        &self.h
    }

    pub fn eta(&self) -> &Matrix {
        &self.eta
    }

    pub fn dim(&self) -> usize {
        self.h.rows() / 2
    }

    /// Both structural invariants, recomputed.
    pub fn invariants_hold(&self) -> bool {
        self.h.is_symmetric() && &(&self.h * &self.eta) * &self.h == self.eta
    }
}

/// `H = [[g - b g⁻¹ b, b g⁻¹], [-g⁻¹ b, g⁻¹]]`.
pub fn build_gen_metric(bg: &Background) -> Result<GenMetric> {
    let gi = bg.g.inverse()?;
    let bgi = &bg.b * &gi;
    let tl = &bg.g - &(&bgi * &bg.b);
    let bl = -&(&gi * &bg.b);
    GenMetric::new(Matrix::from_blocks(&tl, &bgi, &bl, &gi))
}

/// `Oᵗ η O = η`.
pub fn odd_check(o: &Matrix) -> bool {
    if !o.is_square() || !o.rows().is_multiple_of(2) {
        return false;
    }
    let e = eta(o.rows() / 2);
    &(&o.transpose() * &e) * o == e
}

/// `H' = Oᵗ H O`.
pub fn act(o: &Matrix, h: &GenMetric) -> Result<GenMetric> {
    if o.rows() != h.h.rows() {
        return Err(Error::Shape("O and H have different sizes".into()));
    }
    if !odd_check(o) {
        return Err(Error::NotInOdd);
    }
    GenMetric::new(&(&o.transpose() * &h.h) * o)
}

/// Recovers `(g, b)` as `g = (H₂₂)⁻¹`, `b = -g H₂₁`.
pub fn extract(h: &GenMetric) -> Result<Background> {
    let d = h.dim();
    let lr = h.h.block(d, d, d, d);
    let ll = h.h.block(d, 0, d, d);
    let g = lr.inverse()?;
    let b = -&(&g * &ll);
    let bg = Background::new(g, b)?;
    if build_gen_metric(&bg)? != *h {
        return Err(Error::NotGeneralisedMetric("H is not of the (g, b) block form".into()));
    }
    Ok(bg)
}

/// `[[1, 0], [-b', 1]]`, which shifts `b` by `b'` under [`act`].
pub fn b_shift(b: &Matrix) -> Result<Matrix> {
    if !b.is_antisymmetric() {
        return Err(Error::NotGeneralisedMetric("B-shift parameter must be antisymmetric".into()));
    }
    let d = b.rows();
    Ok(Matrix::from_blocks(&Matrix::identity(d), &Matrix::zeros(d, d), &-b, &Matrix::identity(d)))
}

/// `[[A, 0], [0, A^{-t}]]` for invertible `A`.
pub fn gl_embed(a: &Matrix) -> Result<Matrix> {
    let d = a.rows();
    let ait = a.inverse()?.transpose();
    Ok(Matrix::from_blocks(a, &Matrix::zeros(d, d), &Matrix::zeros(d, d), &ait))
}

/// `[[0, 1], [1, 0]]`, the full T-duality inversion.
pub fn block_swap(d: usize) -> Matrix {
    eta(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio};

    fn bg(g: &[&[i64]], b: &[&[i64]]) -> Background {
        Background::new(Matrix::from_i64(g), Matrix::from_i64(b)).unwrap()
    }

    #[test]
    fn identity_background() {
        let h = build_gen_metric(&bg(&[&[1, 0], &[0, 1]], &[&[0, 0], &[0, 0]])).unwrap();
        assert_eq!(*h.h(), Matrix::identity(4));
    }

    #[test]
    fn one_dimensional_background() {
        let h = build_gen_metric(&bg(&[&[2]], &[&[0]])).unwrap();
        let expected = Matrix::from_rows(vec![vec![rat(2), rat(0)], vec![rat(0), ratio(1, 2)]]).unwrap();
        assert_eq!(*h.h(), expected);
        let back = extract(&h).unwrap();
        assert_eq!(*back.g(), Matrix::from_i64(&[&[2]]));
    }

    #[test]
    fn two_dimensional_b_field() {
        let b = Matrix::from_i64(&[&[0, 1], &[-1, 0]]);
        let h = build_gen_metric(&Background::new(Matrix::identity(2), b.clone()).unwrap()).unwrap();
        let expected = Matrix::from_blocks(&Matrix::identity(2).scale(&rat(2)), &b, &-&b, &Matrix::identity(2));
        assert_eq!(*h.h(), expected);
        let back = extract(&h).unwrap();
        assert_eq!((back.g(), back.b()), (&Matrix::identity(2), &b));
    }

    #[test]
    fn odd_membership() {
        assert!(odd_check(&Matrix::identity(4)));
        assert!(odd_check(&block_swap(2)));
        assert!(!odd_check(&Matrix::identity(4).scale(&rat(2))));
    }

    #[test]
    fn actions() {
        let h = build_gen_metric(&bg(&[&[2]], &[&[0]])).unwrap();
        assert_eq!(act(&Matrix::identity(2), &h).unwrap(), h);
        let swapped = act(&block_swap(1), &h).unwrap();
        let expected = build_gen_metric(&Background::new(Matrix::from_rows(vec![vec![ratio(1, 2)]]).unwrap(), Matrix::zeros(1, 1)).unwrap()).unwrap();
        assert_eq!(swapped, expected);
        assert_eq!(act(&Matrix::identity(2).scale(&rat(2)), &h), Err(Error::NotInOdd));
    }

    #[test]
    fn b_shift_adds_b() {
        let g = Matrix::from_i64(&[&[2, 1], &[1, 3]]);
        let b = Matrix::from_i64(&[&[0, 1], &[-1, 0]]);
        let b2 = Matrix::from_i64(&[&[0, -3], &[3, 0]]);
        let h = build_gen_metric(&Background::new(g.clone(), b.clone()).unwrap()).unwrap();
        let shifted = act(&b_shift(&b2).unwrap(), &h).unwrap();
        assert_eq!(shifted, build_gen_metric(&Background::new(g, &b + &b2).unwrap()).unwrap());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(Background::new(Matrix::zeros(2, 2), Matrix::zeros(2, 2)), Err(Error::SingularMatrix));
        assert!(Background::new(Matrix::from_i64(&[&[1, 2], &[3, 1]]), Matrix::zeros(2, 2)).is_err());
        assert!(GenMetric::new(Matrix::identity(4).scale(&rat(2))).is_err());
        let not_block = GenMetric::new(Matrix::identity(2)).unwrap();
        assert!(extract(&not_block).is_ok());
    }

    #[test]
    fn positive_definiteness_diagnostic() {
        assert!(Matrix::from_i64(&[&[2, 1], &[1, 3]]).is_positive_definite());
        assert!(!Matrix::from_i64(&[&[-1, 0], &[0, 1]]).is_positive_definite());
    }
}
