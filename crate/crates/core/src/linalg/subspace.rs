use crate::linalg::mat::{bilinear, vec_mat, Mat, Vector};
use crate::scalars::{Field, Scalar};

/// Row space with a canonical reduced-row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Mat,
}

impl Subspace {
    pub fn from_rows(field: Field, ambient: usize, rows: Vec<Vector>) -> Subspace {
        let m = Mat::from_rows_cols(field, rows, ambient);
        Subspace::row_space(&m)
    }

    pub fn row_space(m: &Mat) -> Subspace {
        let (r, pivots) = m.rref();
        Subspace {
            basis: r.submatrix(0..pivots.len(), 0..m.cols()),
        }
    }

    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace {
            basis: Mat::empty_rows(field, ambient),
        }
    }

    pub fn whole(field: Field, ambient: usize) -> Subspace {
        Subspace {
            basis: Mat::identity(field, ambient),
        }
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let m = self.basis.vstack(&Mat::from_rows(self.field(), vec![v.to_vec()]));
        m.rank() == self.dim()
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        self.sum(other).dim() == self.dim()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::row_space(&self.basis.vstack(&other.basis))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let stacked = self.basis.vstack(&other.basis);
        let k = stacked.left_kernel();
        let rows = (0..k.rows())
            .map(|i| {
                let coeffs = &k.row(i)[..self.dim()];
                vec_mat(coeffs, &self.basis)
            })
            .collect();
        Subspace::from_rows(self.field(), self.ambient(), rows)
    }

    /// Image under a linear map acting on the right.
    pub fn image(&self, a: &Mat) -> Subspace {
        Subspace::row_space(&self.basis.mul(a))
    }

    pub fn is_invariant(&self, a: &Mat) -> bool {
        self.contains_space(&self.image(a))
    }

    /// Coordinates of v in this basis. Panics when v is outside the space.
    pub fn coordinates(&self, v: &[Scalar]) -> Vector {
        self.basis.solve_left(v).expect("vector lies in the subspace")
    }

    /// Matrix of `a` restricted to this invariant subspace, in the basis.
    pub fn restriction(&self, a: &Mat) -> Mat {
        let img = self.basis.mul(a);
        Mat::from_rows_cols(
            self.field(),
            (0..self.dim()).map(|i| self.coordinates(&img.row(i))).collect(),
            self.dim(),
        )
    }

    /// {x : x G b^T = 0 for all b in the space}.
    pub fn perp(&self, gram: &Mat) -> Subspace {
        let m = gram.mul(&self.basis.transpose());
        Subspace::row_space(&m.left_kernel())
    }

    /// B G B^T
    pub fn gram(&self, gram: &Mat) -> Mat {
        self.basis.mul(gram).mul(&self.basis.transpose())
    }

    pub fn is_totally_isotropic(&self, gram: &Mat) -> bool {
        self.gram(gram).is_zero()
    }

    pub fn is_regular(&self, gram: &Mat) -> bool {
        self.gram(gram).is_invertible()
    }

    /// Coordinate vectors completing this basis to a basis of the ambient space.
    pub fn complement(&self) -> Subspace {
        let field = self.field();
        let n = self.ambient();
        let mut rows = self.basis.row_vectors();
        let mut extra = Vec::new();
        for i in 0..n {
            let mut e = vec![field.zero(); n];
            e[i] = field.one();
            rows.push(e.clone());
            if Mat::from_rows(field, rows.clone()).rank() == rows.len() {
                extra.push(e);
            } else {
                rows.pop();
            }
        }
        Subspace::from_rows(field, n, extra)
    }

    pub fn vectors(&self) -> Vec<Vector> {
        self.basis.row_vectors()
    }

    /// f(u, w) for u, w given in ambient coordinates.
    pub fn form(u: &[Scalar], gram: &Mat, w: &[Scalar]) -> Scalar {
        bilinear(u, gram, w)
    }
}

/// Which of the three spaces attached to a linear map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    /// image of (A - 1)^j
    Bahn,
    /// kernel of (A - 1)^j
    Fix,
    /// kernel of (A + 1)^j
    Neg,
}

/// Bahn^j, Fix^j or Neg^j of a square matrix; `None` for j means the
/// stabilized space (j = dimension suffices).
pub fn spaces(a: &Mat, which: SpaceKind, j: Option<usize>) -> Subspace {
    let n = a.rows();
    let field = a.field();
    let j = j.unwrap_or(n.max(1));
    let shift = match which {
        SpaceKind::Bahn | SpaceKind::Fix => -field.one(),
        SpaceKind::Neg => field.one(),
    };
    let m = a.add_scalar(&shift).pow(j);
    match which {
        SpaceKind::Bahn => Subspace::row_space(&m),
        SpaceKind::Fix | SpaceKind::Neg => Subspace::row_space(&m.left_kernel()),
    }
}

pub fn bahn(a: &Mat, j: usize) -> Subspace {
    spaces(a, SpaceKind::Bahn, Some(j))
}

pub fn fix(a: &Mat, j: usize) -> Subspace {
    spaces(a, SpaceKind::Fix, Some(j))
}

pub fn neg(a: &Mat, j: usize) -> Subspace {
    spaces(a, SpaceKind::Neg, Some(j))
}

/// Cyclic subspace spanned by v, vA, vA^2, ...
pub fn cyclic_span(v: &[Scalar], a: &Mat) -> Subspace {
    let field = a.field();
    let n = a.rows();
    let mut rows: Vec<Vector> = Vec::new();
    let mut cur = v.to_vec();
    for _ in 0..n {
        rows.push(cur.clone());
        if Mat::from_rows(field, rows.clone()).rank() < rows.len() {
            rows.pop();
            break;
        }
        cur = vec_mat(&cur, a);
    }
    Subspace::from_rows(field, n, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_examples() {
        let f3 = Field::prime(3).unwrap();
        let id = Mat::identity(f3, 2);
        assert_eq!(fix(&id, 1).dim(), 2);
        assert_eq!(bahn(&id, 1).dim(), 0);
        let j = Mat::from_i64(f3, &[&[1, 1], &[0, 1]]);
        assert_eq!(bahn(&j, 1).dim(), 1);
        assert_eq!(fix(&j, 1).dim(), 1);
        assert_eq!(spaces(&j, SpaceKind::Fix, None).dim(), 2);
        assert_eq!(neg(&id.neg(), 1).dim(), 2);
    }

    #[test]
    fn intersection_and_perp() {
        let f5 = Field::prime(5).unwrap();
        let e = |v: &[i64]| v.iter().map(|&x| f5.from_i64(x)).collect::<Vector>();
        let u = Subspace::from_rows(f5, 3, vec![e(&[1, 0, 0]), e(&[0, 1, 0])]);
        let w = Subspace::from_rows(f5, 3, vec![e(&[0, 1, 0]), e(&[0, 0, 1])]);
        let i = u.intersect(&w);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&e(&[0, 2, 0])));
        let g = Mat::from_i64(f5, &[&[0, 1], &[-1, 0]]);
        let line = Subspace::from_rows(f5, 2, vec![e(&[1, 2])]);
        assert_eq!(line.perp(&g), line);
        assert_eq!(u.complement().dim(), 1);
    }
}
