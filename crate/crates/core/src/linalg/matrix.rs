use super::field::Field;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone + PartialEq> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Matrix<E> {
        Matrix { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Matrix<E> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<E>], rows: usize, zero: E) -> Matrix<E> {
        let mut m = Matrix::filled(rows, columns.len(), zero);
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, e) in c.iter().enumerate() {
                m[(i, j)] = e.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix<E> {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn map<G: Clone + PartialEq>(&self, f: impl Fn(&E) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<E> std::ops::Index<(usize, usize)> for Matrix<E> {
    type Output = E;
    fn index(&self, (i, j): (usize, usize)) -> &E {
        &self.data[i * self.cols + j]
    }
}

impl<E> std::ops::IndexMut<(usize, usize)> for Matrix<E> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        &mut self.data[i * self.cols + j]
    }
}

pub fn zero_matrix<F: Field>(f: &F, rows: usize, cols: usize) -> Matrix<F::Elem> {
    Matrix::filled(rows, cols, f.zero())
}

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F::Elem> {
    let mut m = zero_matrix(f, n, n);
    for i in 0..n {
        m[(i, i)] = f.one();
    }
    m
}

pub fn is_zero<F: Field>(f: &F, m: &Matrix<F::Elem>) -> bool {
    m.data.iter().all(|e| f.is_zero(e))
}

pub fn add<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Matrix { rows: a.rows, cols: a.cols, data: a.data.iter().zip(&b.data).map(|(x, y)| f.add(x, y)).collect() }
}

pub fn scale<F: Field>(f: &F, c: &F::Elem, a: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    a.map(|x| f.mul(c, x))
}

pub fn mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.cols, b.rows);
    let mut out = zero_matrix(f, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = &a[(i, k)];
            if f.is_zero(aik) {
                continue;
            }
            for j in 0..b.cols {
                let t = f.mul(aik, &b[(k, j)]);
                out[(i, j)] = f.add(&out[(i, j)], &t);
            }
        }
    }
    out
}

pub fn mul_vec<F: Field>(f: &F, a: &Matrix<F::Elem>, x: &[F::Elem]) -> Vec<F::Elem> {
    assert_eq!(a.cols, x.len());
    (0..a.rows)
        .map(|i| {
            let mut acc = f.zero();
            for (aij, xj) in a.row(i).iter().zip(x) {
                if !f.is_zero(aij) && !f.is_zero(xj) {
                    acc = f.add(&acc, &f.mul(aij, xj));
                }
            }
            acc
        })
        .collect()
}

/// In-place Gauss-Jordan reduction. Returns the pivot columns; after the call
/// the first `pivots.len()` rows hold the reduced row echelon form.
pub fn rref<F: Field>(f: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&m[(i, c)])) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(&m[(r, c)]).expect("nonzero pivot");
        if !f.is_one(&inv) {
            for j in c..cols {
                m[(r, j)] = f.mul(&m[(r, j)], &inv);
            }
        }
        let pivot_row: Vec<(usize, F::Elem)> =
            (c..cols).filter(|&j| !f.is_zero(&m[(r, j)])).map(|j| (j, m[(r, j)].clone())).collect();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = m[(i, c)].clone();
            if f.is_zero(&factor) {
                continue;
            }
            for (j, pj) in &pivot_row {
                let t = f.mul(&factor, pj);
                m[(i, *j)] = f.sub(&m[(i, *j)], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    let mut work = m.clone();
    rref(f, &mut work).len()
}

/// Rank of the matrix whose rows are `vectors`.
pub fn rank_of_vectors<F: Field>(f: &F, vectors: &[Vec<F::Elem>]) -> usize {
    match vectors.first() {
        None => 0,
        Some(v) => rank(f, &Matrix::from_rows(vectors.to_vec(), v.len())),
    }
}

/// Null space basis of `m`: one vector per free column `j`, with entry 1 at
/// `j` and 0 at the other free columns. Returns `(basis, free_columns)`.
pub fn kernel<F: Field>(f: &F, m: &Matrix<F::Elem>) -> (Vec<Vec<F::Elem>>, Vec<usize>) {
    let mut work = m.clone();
    let pivots = rref(f, &mut work);
    let mut is_pivot = vec![false; m.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..m.cols).filter(|&c| !is_pivot[c]).collect();
    let basis = free
        .iter()
        .map(|&j| {
            let mut v = vec![f.zero(); m.cols];
            v[j] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&work[(r, j)]);
            }
            v
        })
        .collect();
    (basis, free)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{PrimeField, Rationals};

    #[test]
    fn rank_over_fp_and_q_differ() {
        // det = 2: singular mod 2, invertible over Q
        let rows = [vec![1, 1], vec![1, -1]];
        let q = Rationals;
        let mq = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q.from_i64(x)).collect()).collect(), 2);
        assert_eq!(rank(&q, &mq), 2);
        let f2 = PrimeField::new(2);
        let m2 = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| f2.from_i64(x)).collect()).collect(), 2);
        assert_eq!(rank(&f2, &m2), 1);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = PrimeField::new(5);
        let m = Matrix::from_rows(vec![vec![1, 2, 3, 4], vec![2, 4, 1, 0], vec![3, 1, 4, 4]], 4);
        let (basis, free) = kernel(&f, &m);
        assert_eq!(basis.len() + rank(&f, &m), 4);
        for (v, &j) in basis.iter().zip(&free) {
            assert!(mul_vec(&f, &m, v).iter().all(|x| *x == 0));
            assert_eq!(v[j], 1);
        }
    }

    #[test]
    fn product_with_identity() {
        let f = PrimeField::new(3);
        let m = Matrix::from_rows(vec![vec![1, 2], vec![0, 1], vec![2, 2]], 2);
        assert_eq!(mul(&f, &m, &identity(&f, 2)), m);
        assert_eq!(mul(&f, &identity(&f, 3), &m), m);
    }
}
