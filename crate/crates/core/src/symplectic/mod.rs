//! Symplectic spaces and elements, Wall forms, orthogonal decompositions and
//! the symplectic factorization constructions.

pub mod decompose;
pub mod factor;
pub mod sympinv;
pub mod wall;

use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{Mat, Subspace, Vector};
use crate::scalars::{Field, Scalar};

pub use decompose::*;
pub use factor::*;
pub use sympinv::*;
pub use wall::*;

/// [[0, I], [-I, 0]]
pub fn standard_gram(field: Field, dim: usize) -> Mat {
    let n = dim / 2;
    let id = Mat::identity(field, n);
    let z = Mat::zeros(field, n, n);
    Mat::block2(&z, &id, &id.neg(), &z)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticSpace {
    gram: Mat,
}

impl SymplecticSpace {
    pub fn standard(field: Field, dim: usize) -> Result<SymplecticSpace> {
        if dim % 2 == 1 {
            return Err(Error::Dimension(format!("odd symplectic dimension {dim}")));
        }
        Ok(SymplecticSpace {
            gram: standard_gram(field, dim),
        })
    }

    pub fn with_gram(gram: Mat) -> Result<SymplecticSpace> {
        if !gram.is_square() || !gram.is_antisymmetric() {
            return Err(Error::Dimension("gram matrix must be antisymmetric".into()));
        }
        if !gram.is_invertible() {
            return Err(Error::Singular);
        }
        Ok(SymplecticSpace { gram })
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn field(&self) -> Field {
        self.gram.field()
    }

    pub fn is_standard(&self) -> bool {
        self.gram == standard_gram(self.field(), self.dim())
    }

    pub fn form(&self, u: &[Scalar], w: &[Scalar]) -> Scalar {
        crate::linalg::bilinear(u, &self.gram, w)
    }

    pub fn to_json(&self) -> Value {
        let gram = if self.is_standard() {
            Value::from("standard")
        } else {
            self.gram.to_json()["rows"].clone()
        };
        json!({"dim": self.dim(), "gram": gram})
    }

    pub fn from_json(field: Field, v: &Value) -> Result<SymplecticSpace> {
        let dim = v["dim"]
            .as_u64()
            .ok_or_else(|| Error::Parse("space.dim missing".into()))? as usize;
        let space = match &v["gram"] {
            Value::String(s) if s == "standard" => SymplecticSpace::standard(field, dim)?,
            Value::Null => SymplecticSpace::standard(field, dim)?,
            Value::Object(_) => SymplecticSpace::with_gram(Mat::from_json(&v["gram"])?)?,
            rows => SymplecticSpace::with_gram(Mat::from_json_rows(field, rows)?)?,
        };
        if space.dim() != dim {
            return Err(Error::Parse("gram size does not match dim".into()));
        }
        Ok(space)
    }
}

pub fn is_symplectic(p: &Mat, space: &SymplecticSpace) -> Result<bool> {
    automorph_sign(p, space).map(|s| s == Some(true))
}

pub fn is_skew_symplectic(p: &Mat, space: &SymplecticSpace) -> Result<bool> {
    automorph_sign(p, space).map(|s| s == Some(false))
}

/// Some(true) for P G P' = G, Some(false) for P G P' = -G.
fn automorph_sign(p: &Mat, space: &SymplecticSpace) -> Result<Option<bool>> {
    if !p.is_square() || p.rows() != space.dim() {
        return Err(Error::Dimension(format!(
            "{}x{} matrix on a {}-dimensional space",
            p.rows(),
            p.cols(),
            space.dim()
        )));
    }
    let g = space.gram();
    let image = p.mul(g).mul(&p.transpose());
    Ok(if &image == g {
        Some(true)
    } else if image == g.neg() {
        Some(false)
    } else {
        None
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticElement {
    matrix: Mat,
    space: SymplecticSpace,
}

impl SymplecticElement {
    pub fn new(matrix: Mat, space: SymplecticSpace) -> Result<SymplecticElement> {
        if !is_symplectic(&matrix, &space)? {
            return Err(Error::NotSymplectic);
        }
        Ok(SymplecticElement { matrix, space })
    }

    pub fn standard(matrix: Mat) -> Result<SymplecticElement> {
        let space = SymplecticSpace::standard(matrix.field(), matrix.rows())?;
        SymplecticElement::new(matrix, space)
    }

    pub fn identity(space: &SymplecticSpace) -> SymplecticElement {
        SymplecticElement {
            matrix: Mat::identity(space.field(), space.dim()),
            space: space.clone(),
        }
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn gram(&self) -> &Mat {
        self.space.gram()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn field(&self) -> Field {
        self.space.field()
    }

    /// Same space, new matrix; the caller guarantees symplecticity.
    pub(crate) fn with_matrix(&self, matrix: Mat) -> SymplecticElement {
        debug_assert!(is_symplectic(&matrix, &self.space).unwrap_or(false));
        SymplecticElement {
            matrix,
            space: self.space.clone(),
        }
    }

    pub fn inverse(&self) -> SymplecticElement {
        self.with_matrix(self.matrix.inv().expect("symplectic matrices are invertible"))
    }

    pub fn mul(&self, other: &SymplecticElement) -> SymplecticElement {
        self.with_matrix(self.matrix.mul(&other.matrix))
    }

    pub fn neg(&self) -> SymplecticElement {
        self.with_matrix(self.matrix.neg())
    }

    pub fn square(&self) -> SymplecticElement {
        self.mul(self)
    }

    /// alpha^-1 * self * alpha
    pub fn conjugate(&self, alpha: &Mat) -> Result<SymplecticElement> {
        SymplecticElement::new(alpha.inv()?.mul(&self.matrix).mul(alpha), self.space.clone())
    }

    /// Coordinates with respect to the rows of `b`: matrix B M B^-1, form B G B'.
    pub fn change_basis(&self, b: &Mat) -> Result<SymplecticElement> {
        let binv = b.inv()?;
        let space = SymplecticSpace::with_gram(b.mul(self.gram()).mul(&b.transpose()))?;
        SymplecticElement::new(b.mul(&self.matrix).mul(&binv), space)
    }

    /// Restriction to an invariant regular subspace, in its echelon basis.
    pub fn restrict(&self, w: &Subspace) -> Result<SymplecticElement> {
        if !w.is_invariant(&self.matrix) {
            return Err(Error::Precondition("subspace is not invariant".into()));
        }
        let space = SymplecticSpace::with_gram(w.gram(self.gram()))?;
        SymplecticElement::new(w.restriction(&self.matrix), space)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "space": self.space.to_json(),
            "matrix": self.matrix.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<SymplecticElement> {
        let matrix = Mat::from_json(&v["matrix"])?;
        let space = SymplecticSpace::from_json(matrix.field(), &v["space"])?;
        if space.dim() != matrix.rows() {
            return Err(Error::Dimension("matrix size does not match the space".into()));
        }
        SymplecticElement::new(matrix, space)
    }
}

/// x -> x + c f(x, v) v
pub fn transvection(space: &SymplecticSpace, v: &[Scalar], c: &Scalar) -> Mat {
    let n = space.dim();
    let field = space.field();
    let col = space.gram().mul(&Mat::from_rows_cols(field, vec![v.to_vec()], n).transpose());
    let mut t = Mat::identity(field, n);
    for i in 0..n {
        for j in 0..n {
            let add = &(&col[(i, 0)] * &v[j]) * c;
            t[(i, j)] = &t[(i, j)] + &add;
        }
    }
    t
}

pub fn random_scalar<R: Rng + ?Sized>(field: Field, rng: &mut R) -> Scalar {
    match field.modulus() {
        Some(p) => field.from_i64(rng.gen_range(0..p) as i64),
        None => field.from_i64(rng.gen_range(-3..=3)),
    }
}

pub fn random_vector<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Vector {
    (0..n).map(|_| random_scalar(field, rng)).collect()
}

/// Random combination of the rows of `basis`.
pub fn random_in<R: Rng + ?Sized>(basis: &Mat, rng: &mut R) -> Vector {
    let c = random_vector(basis.field(), basis.rows(), rng);
    crate::linalg::vec_mat(&c, basis)
}

/// Product of `steps` random transvections.
pub fn random_symplectic<R: Rng + ?Sized>(space: &SymplecticSpace, rng: &mut R, steps: usize) -> Mat {
    let field = space.field();
    let mut m = Mat::identity(field, space.dim());
    for _ in 0..steps {
        let v = random_vector(field, space.dim(), rng);
        let c = random_scalar(field, rng);
        m = m.mul(&transvection(space, &v, &c));
    }
    m
}

/// diag(A, A^+) on the standard space.
pub fn hyperbolic_element(a: &Mat) -> Result<SymplecticElement> {
    let ap = a.transpose_inverse()?;
    SymplecticElement::standard(Mat::block_diag(&[a.clone(), ap]))
}

/// Orthogonal sum of elements; the Gram matrix is block diagonal.
pub fn orthogonal_sum(parts: &[SymplecticElement]) -> Result<SymplecticElement> {
    let grams: Vec<Mat> = parts.iter().map(|p| p.gram().clone()).collect();
    let mats: Vec<Mat> = parts.iter().map(|p| p.matrix().clone()).collect();
    let space = SymplecticSpace::with_gram(Mat::block_diag(&grams))?;
    SymplecticElement::new(Mat::block_diag(&mats), space)
}

/// Matrix acting as `local[i]` on the span of `bases[i]` (in that basis);
/// the bases together must form a basis of the whole space.
pub fn assemble(bases: &[Mat], local: &[Mat]) -> Result<Mat> {
    let b = bases
        .iter()
        .skip(1)
        .fold(bases[0].clone(), |acc, m| acc.vstack(m));
    let d = Mat::block_diag(local);
    Ok(b.inv()?.mul(&d).mul(&b))
}

/// Decomposition V = L1 + L2 into invariant totally isotropic subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    pub l1: Subspace,
    pub l2: Subspace,
}

impl Splitting {
    pub fn is_valid(&self, phi: &SymplecticElement) -> bool {
        let g = phi.gram();
        self.l1.dim() + self.l2.dim() == phi.dim()
            && self.l1.dim() == self.l2.dim()
            && self.l1.sum(&self.l2).dim() == phi.dim()
            && self.l1.is_totally_isotropic(g)
            && self.l2.is_totally_isotropic(g)
            && self.l1.is_invariant(phi.matrix())
            && self.l2.is_invariant(phi.matrix())
    }

    /// Rows [E; F] with E spanning L1, F spanning L2 and [E; F] G [E; F]' standard.
    pub fn adapted_basis(&self, gram: &Mat) -> Result<Mat> {
        let e = self.l1.basis().clone();
        let f0 = self.l2.basis();
        let pairing = e.mul(gram).mul(&f0.transpose());
        let f = pairing.inv()?.transpose().mul(f0);
        Ok(e.vstack(&f))
    }

    /// The block A with B phi B^-1 = diag(A, A^+) in the adapted basis B.
    pub fn block(&self, phi: &SymplecticElement) -> Result<(Mat, Mat)> {
        let b = self.adapted_basis(phi.gram())?;
        let n = self.l1.dim();
        let m = b.mul(phi.matrix()).mul(&b.inv()?);
        Ok((b, m.submatrix(0..n, 0..n)))
    }

    /// Maps X on the standard space back to B^-1 X B.
    pub fn lift(&self, phi: &SymplecticElement, x: &Mat) -> Result<Mat> {
        let b = self.adapted_basis(phi.gram())?;
        Ok(b.inv()?.mul(x).mul(&b))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "l1": self.l1.basis().to_json()["rows"],
            "l2": self.l2.basis().to_json()["rows"],
        })
    }
}

/// Splitting of diag(A, A^+) into coordinate Lagrangians.
pub fn coordinate_splitting(field: Field, dim: usize) -> Splitting {
    let n = dim / 2;
    let id = Mat::identity(field, dim);
    Splitting {
        l1: Subspace::row_space(&id.submatrix(0..n, 0..dim)),
        l2: Subspace::row_space(&id.submatrix(n..dim, 0..dim)),
    }
}

/// Splitting transported along a change of coordinates: if psi = alpha^-1 phi alpha
/// then L * alpha is a splitting for psi.
pub fn transport_splitting(s: &Splitting, alpha: &Mat) -> Splitting {
    Splitting {
        l1: s.l1.image(alpha),
        l2: s.l2.image(alpha),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn automorph_examples() {
        let f3 = Field::prime(3).unwrap();
        let sp = SymplecticSpace::standard(f3, 4).unwrap();
        assert!(is_symplectic(&Mat::identity(f3, 4), &sp).unwrap());
        let a = Mat::from_i64(f3, &[&[1, 1], &[0, 2]]);
        assert!(hyperbolic_element(&a).is_ok());
        let bad = Mat::diag(&[f3.from_i64(2), f3.one(), f3.one(), f3.one()], f3);
        assert!(!is_symplectic(&bad, &sp).unwrap());
        assert!(is_symplectic(&Mat::identity(f3, 2), &sp).is_err());
        let h = Mat::from_i64(f3, &[&[0, 1], &[1, 0]]);
        let s2 = SymplecticSpace::standard(f3, 2).unwrap();
        assert!(is_skew_symplectic(&h, &s2).unwrap());
    }

    #[test]
    fn random_elements_are_symplectic() {
        let f7 = Field::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let sp = SymplecticSpace::standard(f7, 6).unwrap();
        for _ in 0..10 {
            let m = random_symplectic(&sp, &mut rng, 8);
            assert!(is_symplectic(&m, &sp).unwrap());
        }
    }

    #[test]
    fn splitting_lifts() {
        let f5 = Field::prime(5).unwrap();
        let a = Mat::from_i64(f5, &[&[2, 1], &[0, 1]]);
        let phi = hyperbolic_element(&a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let alpha = random_symplectic(phi.space(), &mut rng, 10);
        let psi = phi.conjugate(&alpha).unwrap();
        let s = transport_splitting(&coordinate_splitting(f5, 4), &alpha);
        assert!(s.is_valid(&psi));
        let (b, blk) = s.block(&psi).unwrap();
        assert!(is_similar_mat(&blk, &a));
        assert!(is_symplectic(&b.inv().unwrap(), &SymplecticSpace::with_gram(b.mul(psi.gram()).mul(&b.transpose())).unwrap()).is_ok());
        let json = psi.to_json();
        assert_eq!(SymplecticElement::from_json(&json).unwrap(), psi);
    }

    fn is_similar_mat(a: &Mat, b: &Mat) -> bool {
        crate::linalg::is_similar(a, b).unwrap()
    }
}
