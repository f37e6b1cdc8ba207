use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{bilinear, linear_elementary_divisors, minimal_polynomial, vec_mat, Mat, Subspace, Vector};
use crate::poly::Poly;
use crate::scalars::{Field, Scalar, SquareClass};

use super::{SymplecticElement, SymplecticSpace};

/// The Wall form on the path Bahn(phi) and its discriminant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallFormData {
    pub path_basis: Subspace,
    pub gram_omega: Mat,
    pub theta: Scalar,
    pub theta_class: SquareClass,
}

impl WallFormData {
    pub fn to_json(&self) -> Value {
        json!({
            "path_basis": self.path_basis.basis().to_json()["rows"],
            "gram_omega": self.gram_omega.to_json()["rows"],
            "theta": self.theta.to_json(),
            "theta_class": class_json(&self.theta_class),
        })
    }
}

pub fn class_json(c: &SquareClass) -> Value {
    match c {
        SquareClass::Square => Value::from("square"),
        SquareClass::NonSquare => Value::from("nonsquare"),
        SquareClass::Squarefree(s) => Value::from(s.clone()),
    }
}

/// 1 - phi as a right operator.
fn one_minus(phi: &SymplecticElement) -> Mat {
    Mat::identity(phi.field(), phi.dim()).sub(phi.matrix())
}

/// omega(u(1-phi), w(1-phi)) = f(u, w(1-phi)) on the echelon basis of the path.
pub fn wall_form(phi: &SymplecticElement) -> WallFormData {
    let field = phi.field();
    let n1 = one_minus(phi);
    let path = Subspace::row_space(&n1);
    let rows = path.vectors();
    let pre: Vec<Vector> = rows
        .iter()
        .map(|b| n1.solve_left(b).expect("path vectors have preimages"))
        .collect();
    let k = rows.len();
    let mut gram = Mat::zeros(field, k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = bilinear(&pre[i], phi.gram(), &rows[j]);
        }
    }
    let theta = if k == 0 {
        field.one()
    } else {
        gram.det().expect("square")
    };
    let theta_class = theta.square_class().expect("the Wall form is nondegenerate");
    WallFormData {
        path_basis: path,
        gram_omega: gram,
        theta,
        theta_class,
    }
}

/// Minimal polynomial (x - 1)^dim.
pub fn is_unipotent_cyclic(phi: &SymplecticElement) -> bool {
    let field = phi.field();
    minimal_polynomial(phi.matrix()) == Poly::linear(&field.one()).pow(phi.dim())
}

/// Unique upper antitriangular Gram matrix of the Wall form of a cyclic
/// unipotent phi, computed in the basis u(1-phi)^i for a vector u with
/// f(u(1-phi)^j, u(1-phi)^(j+1)) = 0 for j <= n-2, scaled so that
/// (-1)^(n+1) a_nn is the canonical representative of its square class.
pub fn wall_antitriangular(phi: &SymplecticElement) -> Result<Mat> {
    if phi.dim() == 0 || !is_unipotent_cyclic(phi) {
        return Err(Error::Precondition("expected a cyclic unipotent element".into()));
    }
    let field = phi.field();
    let n = phi.dim() / 2;
    let m = phi.matrix();
    let minv = m.inv()?;
    let g = phi.gram();
    let nop = one_minus(phi);
    let bahn = |k: usize| Subspace::row_space(&nop.pow(k));

    let top = bahn(n - 1);
    let next = bahn(n);
    let mut u = top
        .vectors()
        .into_iter()
        .find(|v| !next.contains(v))
        .expect("Bahn^(n-1) strictly contains Bahn^n");
    for k in (0..n.saturating_sub(1)).rev() {
        let bk = bahn(k);
        let img = bk.basis().mul(&nop);
        let c = img.solve_left(&u)?;
        let v = vec_mat(&c, bk.basis());
        let y: Vector = vec_mat(&v, &m.sub(&minv));
        let z = bahn(2 * n - k - 2)
            .vectors()
            .into_iter()
            .find(|z| !bilinear(z, g, &y).is_zero())
            .ok_or(Error::Inconsistent)?;
        let lambda = -&(&bilinear(&v, g, &vec_mat(&v, m)) / &bilinear(&z, g, &y));
        u = v
            .iter()
            .zip(&z)
            .map(|(a, b)| a + &(&lambda * b))
            .collect();
    }

    let table = |u: &Vector| {
        let mut us = vec![u.clone()];
        for _ in 1..2 * n {
            let last = vec_mat(us.last().unwrap(), &nop);
            us.push(last);
        }
        let size = 2 * n - 1;
        let mut a = Mat::zeros(field, size, size);
        for i in 1..=size {
            for j in 1..=size {
                a[(i - 1, j - 1)] = bilinear(&us[i - 1], g, &us[j]);
            }
        }
        a
    };
    let a = table(&u);
    let sign = if n % 2 == 1 { field.one() } else { -field.one() };
    let theta = &sign * &a[(n - 1, n - 1)];
    let rep = theta.square_class()?.representative(field);
    let c = (&rep / &theta).sqrt().ok_or(Error::Inconsistent)?;
    let u: Vector = u.iter().map(|x| x * &c).collect();
    Ok(table(&u))
}

/// Violated conditions (1)-(6) of the antitriangular normal form, as text;
/// condition (1) is checked in its strengthened form a_ii = 0 for i <= n-1.
pub fn antitriangular_violations(a: &Mat, theta_class: &SquareClass) -> Vec<String> {
    let size = a.rows();
    let n = size.div_ceil(2);
    let field = a.field();
    let at = |i: usize, j: usize| a[(i - 1, j - 1)].clone();
    let mut bad = Vec::new();
    for i in 1..n {
        if !at(i, i).is_zero() {
            bad.push(format!("(1) a[{i},{i}] != 0"));
        }
    }
    for i in 2..=size {
        for j in 1..size {
            if at(i, j) != -at(j + 1, i - 1) {
                bad.push(format!("(2) at ({i},{j})"));
            }
        }
    }
    for i in 1..size {
        for j in 1..=size {
            if &at(i, j) - &at(j, i) != at(i + 1, j) {
                bad.push(format!("(3) at ({i},{j})"));
            }
        }
    }
    for i in 1..=size {
        for j in 1..=size {
            if i + j > 2 * n && !at(i, j).is_zero() {
                bad.push(format!("(4) at ({i},{j})"));
            }
        }
    }
    let corner = at(1, size);
    for j in 1..=size {
        let sign = if (j - 1) % 2 == 0 { field.one() } else { -field.one() };
        if at(j, 2 * n - j) != &sign * &corner {
            bad.push(format!("(5) at j={j}"));
        }
    }
    let sign = if n % 2 == 1 { field.one() } else { -field.one() };
    let theta = &sign * &at(n, n);
    if theta.is_zero() || theta.square_class().ok().as_ref() != Some(theta_class) {
        bad.push("(6) a_nn does not represent the discriminant".into());
    }
    bad
}

/// Conjugacy test for cyclic unipotent elements by the discriminant class.
pub fn sp_conjugate_unipotent_cyclic(phi: &SymplecticElement, psi: &SymplecticElement) -> Result<bool> {
    if phi.space() != psi.space() {
        return Err(Error::Precondition("elements act on different spaces".into()));
    }
    if !is_unipotent_cyclic(phi) || !is_unipotent_cyclic(psi) {
        return Err(Error::Precondition("expected cyclic unipotent elements".into()));
    }
    Ok(wall_form(phi).theta_class == wall_form(psi).theta_class)
}

/// Bahn(phi) <= Fix(phi)
pub fn is_big_transvection(phi: &SymplecticElement) -> bool {
    let n = one_minus(phi);
    n.mul(&n).is_zero()
}

/// Normal form [[I, S], [0, I]] of a big transvection: `basis` is a
/// symplectic basis B (B G B' standard) with B phi B^-1 the normal form,
/// S = 0 + T with T of the size of the path.
#[derive(Clone, Debug)]
pub struct BigTransvectionData {
    pub basis: Mat,
    pub s: Mat,
    pub t: Mat,
}

pub fn big_transvection_data(phi: &SymplecticElement) -> Result<BigTransvectionData> {
    if !is_big_transvection(phi) {
        return Err(Error::Precondition("not a big transvection".into()));
    }
    let field = phi.field();
    let dim = phi.dim();
    let n = dim / 2;
    let g = phi.gram();
    let path = Subspace::row_space(&one_minus(phi));
    let m = path.dim();
    // Lagrangian F between the path and its perpendicular (the fix space)
    let mut ext: Vec<Vector> = Vec::new();
    let mut f_space = path.clone();
    while f_space.dim() < n {
        let v = f_space
            .perp(g)
            .vectors()
            .into_iter()
            .find(|v| !f_space.contains(v))
            .ok_or(Error::Inconsistent)?;
        f_space = f_space.sum(&Subspace::from_rows(field, dim, vec![v.clone()]));
        ext.push(v);
    }
    let mut f_rows = ext;
    f_rows.extend(path.vectors());
    let f = Mat::from_rows_cols(field, f_rows, dim);
    let w = f_space.complement().basis().clone();
    let pairing = w.mul(g).mul(&f.transpose());
    let e0 = pairing.inv()?.mul(&w);
    let a = e0.mul(g).mul(&e0.transpose());
    let half = field.from_i64(2).inv()?;
    let e = e0.add(&a.scale(&half).mul(&f));
    let basis = e.vstack(&f);
    let normal = basis.mul(phi.matrix()).mul(&basis.inv()?);
    let s = normal.submatrix(0..n, n..dim);
    let t = s.submatrix(n - m..n, n - m..n);
    Ok(BigTransvectionData { basis, s, t })
}

/// Congruence of nondegenerate symmetric matrices over a prime field
/// (dimension and discriminant class); `None` over the rationals.
pub fn congruent_symmetric(a: &Mat, b: &Mat) -> Option<bool> {
    if a.rows() != b.rows() {
        return Some(false);
    }
    if !a.field().is_finite() {
        return None;
    }
    if a.rows() == 0 {
        return Some(true);
    }
    let (da, db) = (a.det().ok()?, b.det().ok()?);
    if da.is_zero() || db.is_zero() {
        return Some(false);
    }
    Some(da.square_class().ok()? == db.square_class().ok()?)
}

/// g(a, b) = f(a (1-phi)^(2m-1), b) for phi bicyclic with elementary
/// divisors (x-1)^(2m) twice.
pub fn g_form(phi: &SymplecticElement, m: usize) -> Result<Mat> {
    let field = phi.field();
    if m == 0 || phi.dim() != 4 * m || linear_elementary_divisors(phi.matrix(), &field.one()) != vec![(2 * m, 2)] {
        return Err(Error::Precondition(format!(
            "expected elementary divisors (x-1)^{} twice",
            2 * m
        )));
    }
    let g = one_minus(phi).pow(2 * m - 1).mul(phi.gram());
    let rad = Subspace::row_space(&g.left_kernel());
    let path = Subspace::row_space(&one_minus(phi));
    if !g.is_symmetric() || rad != path {
        return Err(Error::Inconsistent);
    }
    Ok(g)
}

/// Nondegenerate part of a symmetric form: its Gram matrix on a complement
/// of the radical.
pub fn nondegenerate_part(form: &Mat) -> Mat {
    let rad = Subspace::row_space(&form.left_kernel());
    let c = rad.complement();
    c.gram(form)
}

/// Whether a nondegenerate symmetric form is an orthogonal sum of hyperbolic
/// planes; decided by dimension and discriminant over prime fields.
pub fn is_hyperbolic_quadratic(form: &Mat) -> Option<bool> {
    let k = form.rows();
    if k % 2 == 1 {
        return Some(false);
    }
    if k == 0 {
        return Some(true);
    }
    let field = form.field();
    let target = if (k / 2).is_multiple_of(2) { field.one() } else { -field.one() };
    let hyp = Mat::diag(
        &std::iter::repeat_n(field.one(), k - 1)
            .chain(std::iter::once(target))
            .collect::<Vec<_>>(),
        field,
    );
    congruent_symmetric(form, &hyp)
}

/// The element induced on Bahn(phi) / (Bahn(phi) ∩ Fix(phi)).
pub fn path_quotient(phi: &SymplecticElement) -> Result<SymplecticElement> {
    let field = phi.field();
    let dim = phi.dim();
    let nop = one_minus(phi);
    let path = Subspace::row_space(&nop);
    let rad = path.intersect(&Subspace::row_space(&nop.left_kernel()));
    let mut rows = rad.vectors();
    let mut extra = Vec::new();
    for v in path.vectors() {
        rows.push(v.clone());
        if Mat::from_rows_cols(field, rows.clone(), dim).rank() == rows.len() {
            extra.push(v);
        } else {
            rows.pop();
        }
    }
    let c = Mat::from_rows_cols(field, extra.clone(), dim);
    let full = c.vstack(rad.basis());
    let k = extra.len();
    let img = c.mul(phi.matrix());
    let mut mat = Mat::zeros(field, k, k);
    for i in 0..k {
        let coords = full.solve_left(&img.row(i))?;
        for j in 0..k {
            mat[(i, j)] = coords[j].clone();
        }
    }
    let space = SymplecticSpace::with_gram(c.mul(phi.gram()).mul(&c.transpose()))?;
    SymplecticElement::new(mat, space)
}

pub fn field_sign(field: Field, odd: bool) -> Scalar {
    if odd {
        -field.one()
    } else {
        field.one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{random_symplectic, SymplecticSpace};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    fn el(rows: &[&[i64]]) -> SymplecticElement {
        SymplecticElement::standard(Mat::from_i64(f3(), rows)).unwrap()
    }

    #[test]
    fn wall_form_examples() {
        let id = el(&[&[1, 0], &[0, 1]]);
        let w = wall_form(&id);
        assert_eq!(w.gram_omega.rows(), 0);
        assert_eq!(w.theta_class, SquareClass::Square);
        let t = el(&[&[1, 1], &[0, 1]]);
        let w = wall_form(&t);
        assert_eq!(w.gram_omega, Mat::from_i64(f3(), &[&[-1]]));
        assert_eq!(w.theta_class, SquareClass::NonSquare);
        let t2 = el(&[&[1, 2], &[0, 1]]);
        assert_eq!(wall_form(&t2).theta_class, SquareClass::Square);
        assert!(!sp_conjugate_unipotent_cyclic(&t, &t2).unwrap());
        assert!(sp_conjugate_unipotent_cyclic(&t, &t).unwrap());
    }

    /// omega(u, w) - omega(w, u) = f(u, w) on the path
    fn check_skew_part(phi: &SymplecticElement) {
        let w = wall_form(phi);
        let b = w.path_basis.basis();
        let f_on_path = b.mul(phi.gram()).mul(&b.transpose());
        assert_eq!(w.gram_omega.sub(&w.gram_omega.transpose()), f_on_path);
    }

    fn unipotent_cyclic_4() -> SymplecticElement {
        // diag(J, J^+) is not cyclic; this element is (x-1)^4 cyclic
        el(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, -1, 1]])
            .mul(&el(&[&[1, 0, 0, 0], &[0, 1, 0, 1], &[0, 0, 1, 0], &[0, 0, 0, 1]]))
    }

    #[test]
    fn antitriangular_form() {
        let t = el(&[&[1, 1], &[0, 1]]);
        let a = wall_antitriangular(&t).unwrap();
        assert_eq!(a.rows(), 1);
        assert!(antitriangular_violations(&a, &wall_form(&t).theta_class).is_empty());

        let phi = unipotent_cyclic_4();
        assert!(is_unipotent_cyclic(&phi));
        check_skew_part(&phi);
        let a = wall_antitriangular(&phi).unwrap();
        let class = wall_form(&phi).theta_class;
        assert!(antitriangular_violations(&a, &class).is_empty(), "{a}");
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let alpha = random_symplectic(phi.space(), &mut rng, 6);
            let psi = phi.conjugate(&alpha).unwrap();
            assert_eq!(wall_antitriangular(&psi).unwrap(), a);
            assert_eq!(wall_form(&psi).theta_class, class);
        }
    }

    #[test]
    fn quotient_discriminant_flips() {
        let phi = unipotent_cyclic_4();
        let hat = path_quotient(&phi).unwrap();
        assert!(is_unipotent_cyclic(&hat));
        let th = wall_form(&phi).theta;
        let th_hat = wall_form(&hat).theta;
        assert_eq!(th.square_class().unwrap(), (-th_hat).square_class().unwrap());
    }

    #[test]
    fn big_transvection_examples() {
        let id = el(&[&[1, 0], &[0, 1]]);
        assert!(big_transvection_data(&id).unwrap().s.is_zero());
        let t = el(&[&[1, 1], &[0, 1]]);
        let d = big_transvection_data(&t).unwrap();
        assert_eq!(d.t.rows(), 1);
        let omega = wall_form(&t).gram_omega;
        assert_eq!(congruent_symmetric(&d.t, &omega.neg()), Some(true));
        let sp = SymplecticSpace::standard(f3(), 2).unwrap();
        assert_eq!(d.basis.mul(sp.gram()).mul(&d.basis.transpose()), *sp.gram());
        assert!(wall_form(&t).gram_omega.is_symmetric());
    }

    #[test]
    fn g_form_properties() {
        let j = Mat::from_i64(f3(), &[&[1, 1], &[0, 1]]);
        let phi = crate::symplectic::hyperbolic_element(&j).unwrap();
        let g = g_form(&phi, 1).unwrap();
        assert!(g.is_symmetric());
        assert_eq!(g.rank(), 2);
        assert_eq!(is_hyperbolic_quadratic(&nondegenerate_part(&g)), Some(true));
        assert!(g_form(&unipotent_cyclic_4(), 1).is_err());
    }
}
