//! Dense exact linear algebra over ℚ and ℚ(i).

use super::scalar::Field;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<F>>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![vec![F::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = F::one();
        }
        m
    }

    pub fn from_rows(cols: usize, data: Vec<Vec<F>>) -> Self {
        debug_assert!(data.iter().all(|r| r.len() == cols));
        Matrix { rows: data.len(), cols, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i][j]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if b.is_zero() {
                        continue;
                    }
                    out.data[i][j] = out.data[i][j].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        self.data
            .iter()
            .map(|row| {
                row.iter().zip(v).fold(F::zero(), |acc, (a, b)| {
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        acc + a.clone() * b.clone()
                    }
                })
            })
            .collect()
    }

    /// Reduced row-echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.data[i][c].is_zero()) else {
                continue;
            };
            self.data.swap(r, p);
            let inv = F::one() / self.data[r][c].clone();
            for j in c..self.cols {
                if !self.data[r][j].is_zero() {
                    self.data[r][j] = self.data[r][j].clone() * inv.clone();
                }
            }
            for i in 0..self.rows {
                if i == r || self.data[i][c].is_zero() {
                    continue;
                }
                let f = self.data[i][c].clone();
                for j in c..self.cols {
                    if self.data[r][j].is_zero() {
                        continue;
                    }
                    let t = f.clone() * self.data[r][j].clone();
                    self.data[i][j] = self.data[i][j].clone() - t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![None; self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(row);
        }
        let mut out = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = -r.data[row][free].clone();
            }
            out.push(v);
        }
        out
    }

    /// Determinant by Gaussian elimination; square matrices only.
    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
                return F::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let piv = a[c][c].clone();
            det = det * piv.clone();
            for i in c + 1..n {
                if a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].clone() / piv.clone();
                for j in c..n {
                    if a[c][j].is_zero() {
                        continue;
                    }
                    let t = f.clone() * a[c][j].clone();
                    a[i][j] = a[i][j].clone() - t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i][j] = self.data[i][j].clone();
            }
            aug.data[i][n + i] = F::one();
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let data = aug.data.into_iter().map(|row| row[n..].to_vec()).collect();
        Some(Matrix { rows: n, cols: n, data })
    }

    /// Solves `self · x = b`; `None` when inconsistent. Picks free variables as zero.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i][j] = self.data[i][j].clone();
            }
            aug.data[i][self.cols] = b[i].clone();
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            x[c] = aug.data[row][self.cols].clone();
        }
        Some(x)
    }
}

/// Expresses vectors in a fixed basis (given as rows), or reports they leave its span.
#[derive(Clone, Debug)]
pub struct SpanSolver<F> {
    dim: usize,
    reduced: Vec<Vec<F>>,
    pivots: Vec<usize>,
    /// `transform · basis = reduced`.
    transform: Vec<Vec<F>>,
    independent: bool,
}

impl<F: Field> SpanSolver<F> {
    pub fn new(basis: &[Vec<F>], dim: usize) -> Self {
        let k = basis.len();
        let mut aug = Matrix::zeros(k, dim + k);
        for (i, row) in basis.iter().enumerate() {
            assert_eq!(row.len(), dim);
            for (j, v) in row.iter().enumerate() {
                aug.data[i][j] = v.clone();
            }
            aug.data[i][dim + i] = F::one();
        }
        let all_pivots = aug.rref_in_place();
        let pivots: Vec<usize> = all_pivots.iter().copied().filter(|&c| c < dim).collect();
        let r = pivots.len();
        let reduced = aug.data[..r].iter().map(|row| row[..dim].to_vec()).collect();
        let transform = aug.data[..r].iter().map(|row| row[dim..].to_vec()).collect();
        SpanSolver { dim, reduced, pivots, transform, independent: r == k }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_independent(&self) -> bool {
        self.independent
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.residual(v).iter().all(F::is_zero)
    }

    fn residual(&self, v: &[F]) -> Vec<F> {
        let mut res = v.to_vec();
        for (row, &c) in self.reduced.iter().zip(&self.pivots) {
            let f = v[c].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if !row[j].is_zero() {
                    res[j] = res[j].clone() - f.clone() * row[j].clone();
                }
            }
        }
        res
    }

    /// Coordinates of `v` in the original basis. Requires an independent basis.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        assert_eq!(v.len(), self.dim);
        if !self.contains(v) {
            return None;
        }
        let k = self.transform.first().map(|r| r.len()).unwrap_or(0);
        let mut out = vec![F::zero(); k];
        for (t, &c) in self.transform.iter().zip(&self.pivots) {
            let f = &v[c];
            if f.is_zero() {
                continue;
            }
            for j in 0..k {
                if !t[j].is_zero() {
                    out[j] = out[j].clone() + f.clone() * t[j].clone();
                }
            }
        }
        Some(out)
    }
}

impl<F: serde::Serialize> serde::Serialize for Matrix<F> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.data.serialize(s)
    }
}
