use std::fmt;

use serde_json::json;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalars::{Field, Scalar};

/// Row vector.
pub type Vector = Vec<Scalar>;

/// Dense exact matrix, row-major. Vectors act on the left: `v * A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Mat {
        Mat {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        Mat::scalar(field.one(), n)
    }

    pub fn scalar(c: Scalar, n: usize) -> Mat {
        let mut m = Mat::zeros(c.field(), n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vector>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat {
            field,
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Mat {
        Mat::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        )
    }

    /// Zero-row matrix with the given number of columns.
    pub fn empty_rows(field: Field, cols: usize) -> Mat {
        Mat::zeros(field, 0, cols)
    }

    pub fn diag(entries: &[Scalar], field: Field) -> Mat {
        let mut m = Mat::zeros(field, entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// Companion matrix of a monic polynomial (row convention): e_i -> e_{i+1},
    /// and the last row holds the negated low coefficients.
    pub fn companion(f: &Poly) -> Mat {
        let field = f.field();
        let n = f.deg();
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n.saturating_sub(1) {
            m[(i, i + 1)] = field.one();
        }
        if n > 0 {
            for j in 0..n {
                m[(n - 1, j)] = -&f.coeff(j);
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
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

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    fn require_same_shape(&self, other: &Mat) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols || self.field != other.field {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows || self.field != other.field {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        self.try_mul(other).expect("matrix shapes")
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.require_same_shape(other).expect("matrix shapes");
        Mat {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Mat {
        self.scale(&-self.field.one())
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        Mat {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// self + c*I
    pub fn add_scalar(&self, c: &Scalar) -> Mat {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] = &m[(i, i)] + c;
        }
        m
    }

    pub fn pow(&self, e: usize) -> Mat {
        let mut acc = Mat::identity(self.field, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// p(self) by Horner's rule.
    pub fn eval_poly(&self, p: &Poly) -> Mat {
        let mut acc = Mat::zeros(self.field, self.rows, self.cols);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self).add_scalar(c);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_scalar(&self, c: &Scalar) -> bool {
        *self == Mat::scalar(c.clone(), self.rows)
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn is_antisymmetric(&self) -> bool {
        *self == self.transpose().neg()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
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
            let inv = m[(r, c)].inv().unwrap();
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let v = &m[(r, j)] * &f;
                        m[(i, j)] = &m[(i, j)] - &v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of non-square matrix".into()));
        }
        let mut m = self.clone();
        let mut det = self.field.one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = &det * &piv;
            let inv = piv.inv()?;
            for i in c + 1..m.rows {
                if !m[(i, c)].is_zero() {
                    let f = &m[(i, c)] * &inv;
                    for j in c..m.cols {
                        let v = &m[(c, j)] * &f;
                        m[(i, j)] = &m[(i, j)] - &v;
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn inv(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let aug = self.hstack(&Mat::identity(self.field, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(r.submatrix(0..n, n..2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Basis (RREF rows) of {x : x * self = 0}.
    pub fn left_kernel(&self) -> Mat {
        self.transpose().right_kernel()
    }

    /// Rows spanning {x : self * x^T = 0}, in canonical RREF.
    pub fn right_kernel(&self) -> Mat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![self.field.zero(); self.cols];
            v[f] = self.field.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -&r[(i, f)];
            }
            basis.push(v);
        }
        Mat::from_rows_cols(self.field, basis, self.cols).rref().0
    }

    pub(crate) fn from_rows_cols(field: Field, rows: Vec<Vector>, cols: usize) -> Mat {
        if rows.is_empty() {
            Mat::empty_rows(field, cols)
        } else {
            Mat::from_rows(field, rows)
        }
    }

    /// Solves `self * x = b` for a column vector x (one solution).
    pub fn solve(&self, b: &[Scalar]) -> Result<Vector> {
        if b.len() != self.rows {
            return Err(Error::Dimension("right-hand side length".into()));
        }
        let col = Mat::from_rows_cols(self.field, b.iter().map(|x| vec![x.clone()]).collect(), 1);
        let aug = self.hstack(&col);
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(Error::Inconsistent);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Ok(x)
    }

    /// Solves `x * self = b` for a row vector x.
    pub fn solve_left(&self, b: &[Scalar]) -> Result<Vector> {
        self.transpose().solve(b)
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut m = Mat::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat {
        let mut m = Mat::zeros(self.field, rows.len(), cols.len());
        for (i, r) in rows.clone().enumerate() {
            for (j, c) in cols.clone().enumerate() {
                m[(i, j)] = self[(r, c)].clone();
            }
        }
        m
    }

    /// [[a, b], [c, d]]
    pub fn block2(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
        a.hstack(b).vstack(&c.hstack(d))
    }

    pub fn block_diag(blocks: &[Mat]) -> Mat {
        let field = blocks.first().map_or(Field::Rational, |b| b.field);
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m_: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Mat::zeros(field, n, m_);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Transpose inverse.
    pub fn transpose_inverse(&self) -> Result<Mat> {
        self.transpose().inv()
    }

    /// self^-1 * other * self
    pub fn conjugate_by(&self, by: &Mat) -> Result<Mat> {
        Ok(by.inv()?.mul(self).mul(by))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..self.rows)
            .map(|i| {
                serde_json::Value::Array(
                    (0..self.cols).map(|j| self[(i, j)].to_json()).collect(),
                )
            })
            .collect();
        json!({ "field": self.field, "rows": rows })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Mat> {
        let field: Field = serde_json::from_value(
            v.get("field").cloned().ok_or_else(|| Error::Parse("missing field".into()))?,
        )
        .map_err(|e| {
            let msg = e.to_string();
            if msg.contains("unknown variant") {
                Error::Unsupported(format!("field {msg}"))
            } else {
                Error::Parse(msg)
            }
        })?;
        let field = match field {
            Field::Prime { p } => Field::prime(p)?,
            Field::Rational => field,
        };
        Mat::from_json_rows(field, v.get("rows").ok_or_else(|| Error::Parse("missing rows".into()))?)
    }

    pub fn from_json_rows(field: Field, rows: &serde_json::Value) -> Result<Mat> {
        let rows = rows
            .as_array()
            .ok_or_else(|| Error::Parse("rows must be an array".into()))?;
        let parsed = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Parse("row must be an array".into()))?
                    .iter()
                    .map(|x| Scalar::from_json(field, x))
                    .collect::<Result<Vector>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let c = parsed.first().map_or(0, |r| r.len());
        if parsed.iter().any(|r| r.len() != c) {
            return Err(Error::Parse("ragged matrix".into()));
        }
        Ok(Mat::from_rows_cols(field, parsed, c))
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// v * A
pub fn vec_mat(v: &[Scalar], a: &Mat) -> Vector {
    assert_eq!(v.len(), a.rows());
    let field = a.field();
    let mut out = vec![field.zero(); a.cols()];
    for (i, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            let y = &a[(i, j)];
            if !y.is_zero() {
                *o = &*o + &(x * y);
            }
        }
    }
    out
}

/// u * G * w^T
pub fn bilinear(u: &[Scalar], gram: &Mat, w: &[Scalar]) -> Scalar {
    let uv = vec_mat(u, gram);
    dot(&uv, w)
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let field = a.first().or(b.first()).map(|x| x.field());
    let mut acc = field.map_or_else(|| Field::Rational.zero(), |f| f.zero());
    for (x, y) in a.iter().zip(b) {
        acc = &acc + &(x * y);
    }
    acc
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_scale(a: &[Scalar], c: &Scalar) -> Vector {
    a.iter().map(|x| x * c).collect()
}

pub fn is_zero_vec(a: &[Scalar]) -> bool {
    a.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn core_examples() {
        let q = Field::rational();
        let a = Mat::from_i64(q, &[&[1, 1], &[0, 1]]);
        assert_eq!(a.inv().unwrap(), Mat::from_i64(q, &[&[1, -1], &[0, 1]]));
        assert_eq!(Mat::zeros(q, 3, 2).rank(), 0);
        let j = Mat::from_i64(q, &[&[0, 1], &[-1, 0]]);
        assert!(j.det().unwrap().is_one());
        assert_eq!(Mat::from_i64(q, &[&[1, 2], &[2, 4]]).inv(), Err(Error::Singular));
    }

    #[test]
    fn kernels_and_solve() {
        let f = f3();
        let a = Mat::from_i64(f, &[&[1, 1, 0], &[2, 2, 0]]);
        let rk = a.right_kernel();
        assert_eq!(rk.rows(), 2);
        for v in rk.row_vectors() {
            let col = Mat::from_rows(f, v.iter().map(|x| vec![x.clone()]).collect());
            assert!(a.mul(&col).is_zero());
        }
        let lk = a.left_kernel();
        assert_eq!(lk.rows(), 1);
        assert!(is_zero_vec(&vec_mat(&lk.row(0), &a)));
        let b = Mat::from_i64(f, &[&[1, 2], &[0, 1]]);
        let x = b.solve(&[f.one(), f.zero()]).unwrap();
        assert_eq!(x, vec![f.one(), f.zero()]);
        assert_eq!(
            Mat::from_i64(f, &[&[1, 0], &[1, 0]]).solve(&[f.one(), f.zero()]),
            Err(Error::Inconsistent)
        );
    }

    #[test]
    fn empty_matrices() {
        let f = f3();
        let e = Mat::identity(f, 0);
        assert_eq!(e.inv().unwrap(), e);
        assert!(e.det().unwrap().is_one());
        assert_eq!(e.rank(), 0);
    }

    #[test]
    fn companion_has_its_polynomial() {
        let f = f3();
        let p = Poly::from_i64s(f, &[2, 1, 0, 1]);
        let c = Mat::companion(&p);
        assert!(c.eval_poly(&p).is_zero());
    }

    #[test]
    fn json_roundtrip() {
        let q = Field::rational();
        let a = Mat::from_rows(q, vec![vec![q.from_frac(1, 2).unwrap(), q.from_i64(-3)]]);
        let j = a.to_json();
        assert_eq!(j["rows"][0][0], "1/2");
        assert_eq!(Mat::from_json(&j).unwrap(), a);
        assert!(Mat::from_json(&serde_json::json!({"field": {"kind":"prime","p":4}, "rows": []})).is_err());
    }
}
