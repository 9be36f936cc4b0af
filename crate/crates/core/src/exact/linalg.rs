use std::fmt;
use std::ops::{Index, IndexMut};

use super::{ExactError, Rational};

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, ExactError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(ExactError::DimensionMismatch("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        Matrix::from_fn(entries.len(), entries.len(), |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                Rational::zero()
            }
        })
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

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, ExactError> {
        if self.cols != rhs.rows {
            return Err(ExactError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| &self[(i, k)] * &rhs[(k, j)]).sum()
        }))
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, ExactError> {
        if self.cols != v.len() {
            return Err(ExactError::DimensionMismatch(format!(
                "{}x{} * vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| &self[(i, i)]).sum()
    }

    /// Reduced row echelon form. Returns the reduced matrix and the pivot
    /// column of each nonzero row.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip().expect("pivot is nonzero");
            for j in c..m.cols {
                m[(r, j)] *= &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let factor = m[(i, c)].clone();
                    for j in c..m.cols {
                        let delta = &factor * &m[(r, j)];
                        m[(i, j)] -= delta;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn determinant(&self) -> Result<Rational, ExactError> {
        if !self.is_square() {
            return Err(ExactError::DimensionMismatch("determinant of non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det *= &pivot;
            for i in c + 1..n {
                if !m[(i, c)].is_zero() {
                    let factor = &m[(i, c)] / &pivot;
                    for j in c..n {
                        let delta = &factor * &m[(c, j)];
                        m[(i, j)] -= delta;
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix, ExactError> {
        if !self.is_square() {
            return Err(ExactError::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let augmented = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let (reduced, pivots) = augmented.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(ExactError::Singular { rank: self.rank(), dim: n });
        }
        Ok(Matrix::from_fn(n, n, |i, j| reduced[(i, j + n)].clone()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        f.debug_list().entries(rows).finish()
    }
}

/// `matrix · x = rhs` over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub matrix: Matrix,
    pub rhs: Vec<Rational>,
}

/// Solution set of a consistent linear system: `particular + span(kernel)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet {
    pub particular: Vec<Rational>,
    pub kernel: Vec<Vec<Rational>>,
}

impl LinearSystem {
    pub fn new(matrix: Matrix, rhs: Vec<Rational>) -> Result<Self, ExactError> {
        if matrix.rows() != rhs.len() {
            return Err(ExactError::DimensionMismatch(format!(
                "{} rows but rhs of length {}",
                matrix.rows(),
                rhs.len()
            )));
        }
        Ok(LinearSystem { matrix, rhs })
    }

    pub fn homogeneous(matrix: Matrix) -> Self {
        let rows = matrix.rows();
        LinearSystem {
            matrix,
            rhs: vec![Rational::zero(); rows],
        }
    }

    /// Basis of `{ v : matrix · v = 0 }`. One vector per free column, with a
    /// 1 in that column; the right-hand side is ignored.
    pub fn null_space(&self) -> Vec<Vec<Rational>> {
        null_space(&self.matrix)
    }

    /// Every solution of the system, or `None` when it is inconsistent.
    pub fn solve(&self) -> Option<SolutionSet> {
        let cols = self.matrix.cols();
        let augmented = Matrix::from_fn(self.matrix.rows(), cols + 1, |i, j| {
            if j < cols {
                self.matrix[(i, j)].clone()
            } else {
                self.rhs[i].clone()
            }
        });
        let (reduced, pivots) = augmented.rref();
        if pivots.last() == Some(&cols) {
            return None;
        }
        let mut particular = vec![Rational::zero(); cols];
        for (r, &c) in pivots.iter().enumerate() {
            particular[c] = reduced[(r, cols)].clone();
        }
        Some(SolutionSet {
            particular,
            kernel: self.null_space(),
        })
    }
}

pub fn null_space(matrix: &Matrix) -> Vec<Vec<Rational>> {
    let cols = matrix.cols();
    let (reduced, pivots) = matrix.rref();
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&free| !is_pivot[free])
        .map(|free| {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -&reduced[(r, free)];
            }
            v
        })
        .collect()
}

pub fn dot(u: &[Rational], v: &[Rational]) -> Rational {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Element of `particular + span(kernel)` with the least Euclidean norm.
pub fn minimal_norm(solutions: &SolutionSet) -> Vec<Rational> {
    let kernel = &solutions.kernel;
    if kernel.is_empty() {
        return solutions.particular.clone();
    }
    // Project out the kernel component: solve (K^T K) c = K^T x0.
    let gram = Matrix::from_fn(kernel.len(), kernel.len(), |i, j| dot(&kernel[i], &kernel[j]));
    let rhs: Vec<Rational> = kernel.iter().map(|k| dot(k, &solutions.particular)).collect();
    let coeffs = LinearSystem::new(gram, rhs)
        .expect("square gram system")
        .solve()
        .expect("gram matrix of independent vectors is invertible")
        .particular;
    let mut x = solutions.particular.clone();
    for (k, c) in kernel.iter().zip(&coeffs) {
        for (xi, ki) in x.iter_mut().zip(k) {
            *xi -= c * ki;
        }
    }
    x
}
