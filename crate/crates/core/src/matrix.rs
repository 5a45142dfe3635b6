//! Dense matrices over the rational function field.

use std::fmt;

use crate::arith::{poly_lcm, ArithError, Poly, RatFunc};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Row-major matrix of normalized rational functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<RatFunc>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![RatFunc::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = RatFunc::one();
        }
        m
    }

    /// Builds from rows; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<RatFunc>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(MatrixError::DimensionMismatch(r, c, 1, row.len()));
            }
            data.extend(row);
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> RatFunc) -> Self {
        let mut f = f;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn scalar(n: usize, s: &RatFunc) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { s.clone() } else { RatFunc::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFunc) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[RatFunc] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[RatFunc] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RatFunc::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn map(&self, f: impl Fn(&RatFunc) -> RatFunc) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<E>(&self, f: impl Fn(&RatFunc) -> Result<RatFunc, E>) -> Result<Mat, E> {
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    fn check_same(&self, other: &Mat) -> Result<(), MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::DimensionMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Mat) -> Result<Mat, MatrixError> {
        self.check_same(other)?;
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat, MatrixError> {
        self.check_same(other)?;
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = RatFunc::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Product of a chain of matrices, left to right.
    pub fn product(factors: &[&Mat]) -> Result<Mat, MatrixError> {
        let (first, rest) = factors.split_first().expect("nonempty product");
        rest.iter().try_fold((*first).clone(), |acc, m| acc.mul(m))
    }

    pub fn scale(&self, s: &RatFunc) -> Mat {
        self.map(|e| e.mul(s))
    }

    pub fn neg(&self) -> Mat {
        self.map(RatFunc::neg)
    }

    /// `self * other - other * self`
    pub fn commutator(&self, other: &Mat) -> Result<Mat, MatrixError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Mat {
        let n = self.rows;
        let mut data = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != skip_row) {
            for j in (0..n).filter(|&j| j != skip_col) {
                data.push(self.get(i, j).clone());
            }
        }
        Mat {
            rows: n - 1,
            cols: n - 1,
            data,
        }
    }

    pub fn det(&self) -> Result<RatFunc, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare(self.rows, self.cols));
        }
        if self.rows <= 4 {
            Ok(self.cofactor_det())
        } else {
            self.bareiss_det()
        }
    }

    fn cofactor_det(&self) -> RatFunc {
        match self.rows {
            0 => RatFunc::one(),
            1 => self.data[0].clone(),
            2 => self
                .get(0, 0)
                .mul(self.get(1, 1))
                .sub(&self.get(0, 1).mul(self.get(1, 0))),
            n => {
                let mut acc = RatFunc::zero();
                for j in 0..n {
                    let a = self.get(0, j);
                    if a.is_zero() {
                        continue;
                    }
                    let t = a.mul(&self.minor(0, j).cofactor_det());
                    acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
                }
                acc
            }
        }
    }

    /// Fraction-free elimination after clearing each row to polynomial entries.
    fn bareiss_det(&self) -> Result<RatFunc, MatrixError> {
        let n = self.rows;
        let mut scale = RatFunc::one();
        let mut m: Vec<Vec<Poly>> = Vec::with_capacity(n);
        for i in 0..n {
            let row = self.row(i);
            let l = row
                .iter()
                .fold(Poly::one(), |acc, e| poly_lcm(&acc, e.den()));
            scale = scale.mul(&RatFunc::from(l.clone()));
            m.push(
                row.iter()
                    .map(|e| {
                        let cofactor = l.div_exact(e.den()).expect("lcm of denominators");
                        e.num() * &cofactor
                    })
                    .collect(),
            );
        }
        let d = crate::linalg::bareiss_det(m);
        Ok(RatFunc::from(d).div(&scale)?)
    }

    pub fn inv(&self) -> Result<Mat, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n <= 4 {
            let det = self.det()?;
            if det.is_zero() {
                return Err(MatrixError::Singular);
            }
            let dinv = det.inv()?;
            if n == 1 {
                return Ok(Mat::from_fn(1, 1, |_, _| dinv.clone()));
            }
            let mut out = Mat::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let c = self.minor(j, i).cofactor_det();
                    let c = if (i + j) % 2 == 0 { c } else { c.neg() };
                    out.set(i, j, c.mul(&dinv));
                }
            }
            Ok(out)
        } else {
            crate::linalg::gauss_jordan_inverse(self)
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.det().map(|d| !d.is_zero()).unwrap_or(false)
    }

    /// Column-major flattening (`vec` operator).
    pub fn vectorize(&self) -> Vec<RatFunc> {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.get(i, j).clone());
            }
        }
        out
    }

    pub fn unvectorize(rows: usize, cols: usize, v: &[RatFunc]) -> Mat {
        Mat::from_fn(rows, cols, |i, j| v[j * rows + i].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Var;

    fn v(i: u32) -> RatFunc {
        RatFunc::var(Var(i))
    }

    fn sample(n: usize) -> Mat {
        Mat::from_fn(n, n, |i, j| {
            let base = v((i + j) as u32 % 3).add(&RatFunc::from_int((i * n + j) as i64 + 1));
            if i == j {
                base.mul(&v(0))
            } else {
                base
            }
        })
    }

    #[test]
    fn inverse_round_trip() {
        for n in 1..=5 {
            let a = sample(n);
            let ai = a.inv().unwrap();
            assert!(a.mul(&ai).unwrap().is_identity(), "n = {n}");
        }
    }

    #[test]
    fn bareiss_agrees_with_cofactor() {
        let a = sample(4);
        assert_eq!(a.bareiss_det().unwrap(), a.cofactor_det());
    }

    #[test]
    fn singular_and_mismatch() {
        let s = Mat::from_rows(vec![
            vec![v(0), v(1)],
            vec![v(0).mul(&v(2)), v(1).mul(&v(2))],
        ])
        .unwrap();
        assert_eq!(s.inv(), Err(MatrixError::Singular));
        assert!(matches!(
            Mat::identity(2).mul(&Mat::identity(3)),
            Err(MatrixError::DimensionMismatch(..))
        ));
    }

    #[test]
    fn self_commutator_vanishes() {
        let b = sample(3);
        assert!(b.commutator(&b).unwrap().is_zero());
    }
}
