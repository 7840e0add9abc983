//! Matrices with polynomial entries.

use serde::{Deserialize, Serialize};

use super::linalg::Matrix;
use super::poly::MultiPoly;
use super::scalar::GaussRational;
use crate::error::{Error, Result};

/// Largest size handled by plain cofactor expansion; bigger matrices use
/// fraction-free elimination for the minors.
const COFACTOR_LIMIT: usize = 4;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn from_rows(nvars: usize, rows: Vec<Vec<MultiPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, found: row.len() });
            }
            for e in row {
                entries.push(e.with_nvars(nvars)?);
            }
        }
        Ok(PolyMatrix { rows: r, cols: c, nvars, entries })
    }

    pub fn zeros(nvars: usize, rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, nvars, entries: vec![MultiPoly::zero(nvars); rows * cols] }
    }

    pub fn identity(nvars: usize, n: usize) -> Self {
        let mut m = Self::zeros(nvars, n, n);
        for i in 0..n {
            m.entries[i * n + i] = MultiPoly::one(nvars);
        }
        m
    }

    pub fn from_constant(nvars: usize, m: &Matrix<GaussRational>) -> Self {
        let mut out = Self::zeros(nvars, m.rows, m.cols);
        for i in 0..m.rows {
            for j in 0..m.cols {
                out.set(i, j, MultiPoly::constant(nvars, m.data[i][j].clone()));
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: MultiPoly) {
        debug_assert_eq!(p.nvars(), self.nvars);
        self.entries[i * self.cols + j] = p;
    }

    pub fn to_rows(&self) -> Vec<Vec<MultiPoly>> {
        (0..self.rows).map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn max_degree(&self) -> u32 {
        self.entries.iter().filter_map(MultiPoly::degree).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.nvars, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = MultiPoly::zero(self.nvars);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[MultiPoly]) -> Result<Vec<MultiPoly>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(MultiPoly::zero(self.nvars), |acc, k| {
                    acc.add(&self.get(i, k).mul(&v[k]))
                })
            })
            .collect())
    }

    pub fn scale(&self, p: &MultiPoly) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            entries: self.entries.iter().map(|e| e.mul(p)).collect(),
        }
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(MultiPoly::is_zero)
    }

    pub fn eval(&self, point: &[GaussRational]) -> Result<Matrix<GaussRational>> {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[i][j] = self.get(i, j).eval(point)?;
            }
        }
        Ok(m)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = Self::zeros(self.nvars, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> PolyMatrix {
        let n = self.rows;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != skip_row) {
            for j in (0..n).filter(|&j| j != skip_col) {
                entries.push(self.get(i, j).clone());
            }
        }
        PolyMatrix { rows: n - 1, cols: n - 1, nvars: self.nvars, entries }
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> Result<MultiPoly> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        Ok(if self.rows <= COFACTOR_LIMIT { self.det_cofactor() } else { self.det_bareiss() })
    }

    fn det_cofactor(&self) -> MultiPoly {
        match self.rows {
            0 => MultiPoly::one(self.nvars),
            1 => self.get(0, 0).clone(),
            2 => self.get(0, 0).mul(self.get(1, 1)).sub(&self.get(0, 1).mul(self.get(1, 0))),
            n => {
                let mut acc = MultiPoly::zero(self.nvars);
                for j in 0..n {
                    let a = self.get(0, j);
                    if a.is_zero() {
                        continue;
                    }
                    let t = a.mul(&self.minor(0, j).det_cofactor());
                    acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
                }
                acc
            }
        }
    }

    /// Fraction-free (Bareiss) elimination; every division is exact.
    fn det_bareiss(&self) -> MultiPoly {
        let n = self.rows;
        if n == 0 {
            return MultiPoly::one(self.nvars);
        }
        let mut a = self.to_rows();
        let mut sign = false;
        let mut prev = MultiPoly::one(self.nvars);
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = !sign;
                    }
                    None => return MultiPoly::zero(self.nvars),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                    a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
                a[i][k] = MultiPoly::zero(self.nvars);
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if sign {
            d.neg()
        } else {
            d
        }
    }

    /// Adjugate and determinant, with `self · adj = det · I`.
    pub fn adjugate_det(&self) -> Result<(PolyMatrix, MultiPoly)> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let det = self.det()?;
        let mut adj = Self::zeros(self.nvars, n, n);
        if n == 1 {
            adj.set(0, 0, MultiPoly::one(self.nvars));
            return Ok((adj, det));
        }
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(i, j).det()?;
                // adj[j][i] = (-1)^{i+j} M_ij
                adj.set(j, i, if (i + j) % 2 == 0 { c } else { c.neg() });
            }
        }
        Ok((adj, det))
    }
}

#[derive(Serialize, Deserialize)]
struct PolyMatrixRepr(Vec<Vec<MultiPoly>>);

impl Serialize for PolyMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyMatrixRepr(self.to_rows()).serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64) -> GaussRational {
        GaussRational::from_int(n)
    }

    fn poly(nvars: usize, terms: &[(&[u32], i64)]) -> MultiPoly {
        MultiPoly::from_terms(nvars, terms.iter().map(|(e, c)| (e.to_vec(), g(*c)))).unwrap()
    }

    #[test]
    fn identity_adjugate() {
        let id = PolyMatrix::identity(2, 2);
        let (adj, det) = id.adjugate_det().unwrap();
        assert_eq!(adj, id);
        assert_eq!(det, MultiPoly::one(2));
    }

    #[test]
    fn upper_triangular_example() {
        // variables (z, w)
        let w = poly(2, &[(&[0, 1], 1)]);
        let zw = poly(2, &[(&[1, 1], 1)]);
        let w2 = poly(2, &[(&[0, 2], 1)]);
        let m = PolyMatrix::from_rows(
            2,
            vec![vec![w.clone(), zw.clone()], vec![MultiPoly::zero(2), w2.clone()]],
        )
        .unwrap();
        let (adj, det) = m.adjugate_det().unwrap();
        assert_eq!(det, poly(2, &[(&[0, 3], 1)]));
        let expected =
            PolyMatrix::from_rows(2, vec![vec![w2, zw.neg()], vec![MultiPoly::zero(2), w]])
                .unwrap();
        assert_eq!(adj, expected);
        let prod = m.mul(&adj).unwrap();
        assert_eq!(prod, PolyMatrix::identity(2, 2).scale(&det));
    }

    #[test]
    fn one_by_one() {
        // (1 - z b)^2 with b = 3
        let base = poly(1, &[(&[0], 1), (&[1], -3)]);
        let m = PolyMatrix::from_rows(1, vec![vec![base.pow(2)]]).unwrap();
        let (adj, det) = m.adjugate_det().unwrap();
        assert_eq!(det, base.pow(2));
        assert_eq!(adj, PolyMatrix::identity(1, 1));
    }

    #[test]
    fn bareiss_matches_cofactor() {
        // 5x5 with entries x^i + j*y + (i*j mod 3)
        let n = 5;
        let rows: Vec<Vec<MultiPoly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        poly(
                            2,
                            &[
                                (&[(i % 3) as u32, 0], 1),
                                (&[0, 1], j as i64 - 2),
                                (&[0, 0], ((i * j) % 3) as i64),
                            ],
                        )
                    })
                    .collect()
            })
            .collect();
        let m = PolyMatrix::from_rows(2, rows).unwrap();
        assert_eq!(m.det_bareiss(), m.det_cofactor());
        let (adj, det) = m.adjugate_det().unwrap();
        assert_eq!(m.mul(&adj).unwrap(), PolyMatrix::identity(2, n).scale(&det));
    }
}
