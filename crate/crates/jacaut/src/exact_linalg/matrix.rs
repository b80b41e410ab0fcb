use rug::{Integer, Rational};
use std::ops::{Index, IndexMut};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Serialized as a list of rows.
impl<T: serde::Serialize> serde::Serialize for Matrix<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for r in 0..self.rows {
            seq.serialize_element(&self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        seq.end()
    }
}

pub type IMatrix = Matrix<Integer>;
pub type QMatrix = Matrix<Rational>;

impl<T> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Matrix { rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self
    where
        T: Clone,
    {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self
    where
        T: Clone,
    {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix<i64> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| i64::from(i == j))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut out = vec![0i64; self.rows * o.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let orow = &o.data[k * o.cols..(k + 1) * o.cols];
                let dst = &mut out[i * o.cols..(i + 1) * o.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Matrix { rows: self.rows, cols: o.cols, data: out }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == i64::from(i == j)))
    }

    pub fn to_big(&self) -> IMatrix {
        self.map(|&x| Integer::from(x))
    }

    pub fn norm_sq(&self) -> i128 {
        self.data.iter().map(|&x| i128::from(x) * i128::from(x)).sum()
    }
}

impl IMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| Integer::new())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| Integer::from(i == j))
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Integer::from(x)).collect()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        Matrix::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = Integer::new();
            for k in 0..self.cols {
                acc += &self[(i, k)] * &o[(k, j)];
            }
            acc
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| *x == 0)
    }

    /// `None` if some entry does not fit in an i64.
    pub fn to_i64(&self) -> Option<Matrix<i64>> {
        let data: Option<Vec<i64>> = self.data.iter().map(Integer::to_i64).collect();
        data.map(|d| Matrix { rows: self.rows, cols: self.cols, data: d })
    }

    pub fn to_rational(&self) -> QMatrix {
        self.map(|x| Rational::from(x.clone()))
    }

    /// Bareiss fraction-free determinant.
    pub fn det(&self) -> Integer {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Integer::from(1);
        }
        let mut a = self.clone();
        let mut sign = 1;
        let mut prev = Integer::from(1);
        for k in 0..n - 1 {
            if a[(k, k)] == 0 {
                match (k + 1..n).find(|&i| a[(i, k)] != 0) {
                    Some(p) => {
                        a.swap_rows(k, p);
                        sign = -sign;
                    }
                    None => return Integer::new(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = Integer::from(&a[(i, j)] * &a[(k, k)]) - Integer::from(&a[(i, k)] * &a[(k, j)]);
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        let d = a[(n - 1, n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs() == 1
    }

    pub fn max_abs(&self) -> Integer {
        self.data.iter().map(|x| x.clone().abs()).max().unwrap_or_default()
    }
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| Rational::new())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| Rational::from(i64::from(i == j)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        Matrix::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = Rational::new();
            for k in 0..self.cols {
                acc += Rational::from(&self[(i, k)] * &o[(k, j)]);
            }
            acc
        })
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| *x.denom() == 1)
    }

    pub fn to_integer(&self) -> Option<IMatrix> {
        if self.is_integral() {
            Some(self.map(|x| x.numer().clone()))
        } else {
            None
        }
    }

    /// Least common denominator of all entries.
    pub fn common_denominator(&self) -> Integer {
        let mut l = Integer::from(1);
        for x in &self.data {
            l.lcm_mut(x.denom());
        }
        l
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMatrix::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| a[(r, c)] != 0)?;
            a.swap_rows(c, p);
            inv.swap_rows(c, p);
            let piv = a[(c, c)].clone();
            for j in 0..n {
                a[(c, j)] /= &piv;
                inv[(c, j)] /= &piv;
            }
            for r in 0..n {
                if r == c || a[(r, c)] == 0 {
                    continue;
                }
                let f = a[(r, c)].clone();
                for j in 0..n {
                    let t = Rational::from(&f * &a[(c, j)]);
                    a[(r, j)] -= t;
                    let t = Rational::from(&f * &inv[(c, j)]);
                    inv[(r, j)] -= t;
                }
            }
        }
        Some(inv)
    }
}
