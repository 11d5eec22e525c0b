//! Dense square and rectangular matrices over a [`Ring`].

use std::fmt;

use crate::series::{Ring, SeriesElem, SeriesError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<SeriesElem>,
}

impl Matrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Matrix {
        Matrix { ring: ring.clone(), rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_fn(ring: &Ring, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> SeriesElem) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let x = f(i, j);
                assert!(x.ring() == ring, "entry in the wrong ring");
                data.push(x);
            }
        }
        Matrix { ring: ring.clone(), rows, cols, data }
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<SeriesElem>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix::from_fn(ring, r, c, |i, j| rows[i][j].clone())
    }

    /// `diag(x_1, .., x_n)`.
    pub fn diagonal(ring: &Ring, diag: &[SeriesElem]) -> Matrix {
        let n = diag.len();
        Matrix::from_fn(ring, n, n, |i, j| if i == j { diag[i].clone() } else { ring.zero() })
    }

    /// `C = blockdiag(E·I_d, I_c)`.
    pub fn c_matrix(ring: &Ring, d: usize, c: usize) -> Matrix {
        let e = ring.e_elem();
        let diag: Vec<SeriesElem> = (0..d + c).map(|i| if i < d { e.clone() } else { ring.one() }).collect();
        Matrix::diagonal(ring, &diag)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
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

    pub fn get(&self, i: usize, j: usize) -> &SeriesElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: SeriesElem) {
        assert!(x.ring() == &self.ring, "entry in the wrong ring");
        self.data[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> impl Iterator<Item = &SeriesElem> {
        self.data.iter()
    }

    pub fn map(&self, ring: &Ring, f: impl Fn(&SeriesElem) -> SeriesElem) -> Matrix {
        Matrix::from_fn(ring, self.rows, self.cols, |i, j| f(self.get(i, j)))
    }

    pub fn try_map(
        &self,
        ring: &Ring,
        f: impl Fn(&SeriesElem) -> Result<SeriesElem, SeriesError>,
    ) -> Result<Matrix, SeriesError> {
        let mut data = Vec::with_capacity(self.data.len());
        for x in &self.data {
            data.push(f(x)?);
        }
        Ok(Matrix { ring: ring.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(&self.ring, self.rows)
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        Matrix::from_fn(&self.ring, self.rows, self.cols, |i, j| self.get(i, j) + o.get(i, j))
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        Matrix::from_fn(&self.ring, self.rows, self.cols, |i, j| self.get(i, j) - o.get(i, j))
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        Matrix::from_fn(&self.ring, self.rows, o.cols, |i, j| {
            let mut acc = self.ring.zero();
            for k in 0..self.cols {
                let (x, y) = (self.get(i, k), o.get(k, j));
                if !x.is_zero() && !y.is_zero() {
                    acc = &acc + &(x * y);
                }
            }
            acc
        })
    }

    pub fn scale(&self, x: &SeriesElem) -> Matrix {
        self.map(&self.ring, |y| x * y)
    }

    pub fn scale_int(&self, k: i128) -> Matrix {
        self.map(&self.ring, |y| y.scale(k))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Entry-wise σ.
    pub fn frobenius(&self) -> Result<Matrix, SeriesError> {
        self.try_map(&self.ring, |x| x.frobenius())
    }

    pub fn reduce_mod_e(&self) -> Result<Matrix, SeriesError> {
        let first = self.ring.zero().reduce_mod_e()?;
        self.try_map(first.ring(), |x| x.reduce_mod_e())
    }

    pub fn coerce(&self, ring: &Ring) -> Result<Matrix, SeriesError> {
        self.try_map(ring, |x| x.coerce(ring))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(&self.ring, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn column(&self, j: usize) -> Vec<SeriesElem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
        assert!(a.ring == b.ring, "ring mismatch");
        let (r, c) = (a.rows + b.rows, a.cols + b.cols);
        Matrix::from_fn(&a.ring, r, c, |i, j| {
            if i < a.rows && j < a.cols {
                a.get(i, j).clone()
            } else if i >= a.rows && j >= a.cols {
                b.get(i - a.rows, j - a.cols).clone()
            } else {
                a.ring.zero()
            }
        })
    }

    /// Determinant by cofactor expansion along the first row; exact over any
    /// commutative ring. Sizes here stay tiny.
    pub fn det(&self) -> SeriesElem {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let idx: Vec<usize> = (0..n).collect();
        self.det_minor(&idx, &idx)
    }

    fn det_minor(&self, rows: &[usize], cols: &[usize]) -> SeriesElem {
        match rows.len() {
            0 => self.ring.one(),
            1 => self.get(rows[0], cols[0]).clone(),
            2 => {
                let a = self.get(rows[0], cols[0]) * self.get(rows[1], cols[1]);
                let b = self.get(rows[0], cols[1]) * self.get(rows[1], cols[0]);
                &a - &b
            }
            _ => {
                let mut acc = self.ring.zero();
                for (k, &c) in cols.iter().enumerate() {
                    let x = self.get(rows[0], c);
                    if x.is_zero() {
                        continue;
                    }
                    let rest: Vec<usize> = cols.iter().copied().filter(|&j| j != c).collect();
                    let term = x * &self.det_minor(&rows[1..], &rest);
                    acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                acc
            }
        }
    }

    /// Classical adjugate: `adj(M)·M = M·adj(M) = det(M)·I`.
    pub fn adjugate(&self) -> Matrix {
        assert!(self.is_square(), "adjugate of a non-square matrix");
        let n = self.rows;
        if n == 1 {
            return Matrix::identity(&self.ring, 1);
        }
        Matrix::from_fn(&self.ring, n, n, |i, j| {
            let rows: Vec<usize> = (0..n).filter(|&k| k != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&k| k != i).collect();
            let m = self.det_minor(&rows, &cols);
            if (i + j) % 2 == 0 {
                m
            } else {
                m.neg()
            }
        })
    }

    /// Inverse by Gauss-Jordan with unit pivots. In a local ring a matrix is
    /// invertible exactly when every column has a unit pivot in turn.
    pub fn inverse(&self) -> Result<Matrix, SeriesError> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(&self.ring, n);
        for col in 0..n {
            let piv = (col..n).find(|&r| a.get(r, col).is_unit()).ok_or(SeriesError::NotUnit)?;
            if piv != col {
                a.swap_rows(piv, col);
                inv.swap_rows(piv, col);
            }
            let pinv = a.get(col, col).invert()?;
            a.scale_row(col, &pinv);
            inv.scale_row(col, &pinv);
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                a.add_row_multiple(r, col, &f.neg());
                inv.add_row_multiple(r, col, &f.neg());
            }
        }
        Ok(inv)
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    fn scale_row(&mut self, i: usize, x: &SeriesElem) {
        for k in 0..self.cols {
            let v = x * self.get(i, k);
            self.data[i * self.cols + k] = v;
        }
    }

    /// row_i += f · row_j
    fn add_row_multiple(&mut self, i: usize, j: usize, f: &SeriesElem) {
        for k in 0..self.cols {
            let v = self.get(i, k) + &(f * self.get(j, k));
            self.data[i * self.cols + k] = v;
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{spec, Frame};

    #[test]
    fn inverse_and_adjugate() {
        let f = Frame::new(spec(3, 1, 1, 3, 5, 3, 2, "u + 3")).unwrap();
        let s = Ring::series(&f, 3);
        let m = Matrix::from_rows(
            &s,
            vec![vec![s.u(), &s.one() + &s.t(0)], vec![s.from_int(2), &s.u() + &s.from_int(3)]],
        );
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());
        let adj = m.adjugate();
        assert_eq!(adj.mul(&m), Matrix::identity(&s, 2).scale(&m.det()));
        let sing = Matrix::from_rows(&s, vec![vec![s.u(), s.from_int(3)], vec![s.t(0), s.u()]]);
        assert!(sing.inverse().is_err());
    }

    #[test]
    fn det_three_by_three() {
        let f = Frame::new(spec(5, 0, 1, 1, 4, 0, 2, "u + 5")).unwrap();
        let s = Ring::constants(&f, 4);
        let rows = [[2, 0, 1], [1, 3, 2], [1, 1, 1]];
        let m = Matrix::from_fn(&s, 3, 3, |i, j| s.from_int(rows[i][j]));
        // 2(3-2) - 0 + 1(1-3) = 0
        assert!(m.det().is_zero());
        let m = Matrix::from_fn(&s, 3, 3, |i, j| s.from_int(rows[i][j] + (i == j) as i128));
        // [[3,0,1],[1,4,2],[1,1,2]] -> 3(8-2) - 0 + 1(1-4) = 15
        assert_eq!(m.det(), s.from_int(15));
    }
}
