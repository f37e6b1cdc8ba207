//! Factorizations in GL(n): reversal conjugators, products of two
//! involutions, symmetric pairs, Dickson normal forms, Jordan-Chevalley
//! semisimple parts, and skew-involution reversers of cyclic matrices.

use crate::error::{Error, Result};
use crate::linalg::canonical::{
    cyclic_decomposition, intertwiners, invariant_factors, is_similar,
    linear_elementary_divisors, minimal_polynomial, pick_invertible, similarity_transform,
};
use crate::linalg::mat::{vec_mat, Mat, Vector};
use crate::poly::{factorize, radical, Poly};
use crate::scalars::Scalar;

fn require_invertible(a: &Mat) -> Result<Mat> {
    if !a.is_square() {
        return Err(Error::Dimension("expected a square matrix".into()));
    }
    a.inv()
}

/// Rows `v * a^j` (or `v * a^-j` when `inverse`) for j < len.
fn orbit_rows(v: &[Scalar], a: &Mat, len: usize) -> Vec<Vector> {
    let mut rows = Vec::with_capacity(len);
    let mut cur = v.to_vec();
    for _ in 0..len {
        rows.push(cur.clone());
        cur = vec_mat(&cur, a);
    }
    rows
}

/// Invertible R with R^-1 A R = A^-1, or `None` when A is not similar to
/// its inverse.
pub fn gl_reversal_conjugator(a: &Mat) -> Result<Option<Mat>> {
    let ainv = require_invertible(a)?;
    Ok(similarity_transform(a, &ainv))
}

/// Involutions S, T with A = S T, when A is similar to its inverse.
/// On each cyclic summand with generator u the map u A^j -> u A^-j is an
/// involution T inverting A; then S = A T.
pub fn wonenburger_involutions(a: &Mat) -> Result<Option<(Mat, Mat)>> {
    let ainv = require_invertible(a)?;
    if !is_similar(a, &ainv)? {
        return Ok(None);
    }
    let field = a.field();
    let n = a.rows();
    let dec = cyclic_decomposition(a);
    let mut basis = Vec::with_capacity(n);
    let mut images = Vec::with_capacity(n);
    for b in &dec.blocks {
        let d = b.poly.deg();
        basis.extend(orbit_rows(&b.generator, a, d));
        images.extend(orbit_rows(&b.generator, &ainv, d));
    }
    let p = Mat::from_rows_cols(field, basis, n);
    let img = Mat::from_rows_cols(field, images, n);
    let t = p.inv()?.mul(&img);
    let s = a.mul(&t);
    Ok(Some((s, t)))
}

/// Symmetric S, T with S invertible and Q = S T. A symmetric invertible X
/// with Q X = X Q^T gives S = Q X and T = X^-1; X is assembled from one
/// Hankel-type intertwiner per cyclic block.
pub fn symmetric_pair_factorization(q: &Mat) -> Result<(Mat, Mat)> {
    require_invertible(q)?;
    let field = q.field();
    if q.rows() == 0 {
        return Ok((q.clone(), q.clone()));
    }
    let dec = cyclic_decomposition(q);
    let mut blocks = Vec::with_capacity(dec.blocks.len());
    for (i, b) in dec.blocks.iter().enumerate() {
        let c = Mat::companion(&b.poly);
        let sols: Vec<Mat> = intertwiners(&c, &c.transpose())
            .into_iter()
            .filter(|x| x.is_symmetric())
            .collect();
        let x = pick_invertible(&sols, 0x5A11 + i as u64, 2000).ok_or_else(|| {
            Error::Precondition("no invertible symmetric intertwiner found".into())
        })?;
        blocks.push(x);
    }
    let xc = Mat::block_diag(&blocks);
    let p = dec.basis(q);
    let pinv = p.inv()?;
    let x = pinv.mul(&xc).mul(&pinv.transpose());
    let s = q.mul(&x);
    let t = x.inv()?;
    debug_assert!(s.is_symmetric() && t.is_symmetric());
    let _ = field;
    Ok((s, t))
}

/// [[0, I], [-lambda I, D]]
pub fn dickson_block(d: &Mat, lambda: &Scalar) -> Mat {
    let field = d.field();
    let m = d.rows();
    Mat::block2(
        &Mat::zeros(field, m, m),
        &Mat::identity(field, m),
        &Mat::scalar(-lambda, m),
        d,
    )
}

/// D with [[0, I], [-lambda I, D]] similar to the cyclic matrix A.
pub fn skew_cyclic_normal_form(a: &Mat, lambda: &Scalar) -> Result<Mat> {
    let ainv = require_invertible(a)?;
    let inv = invariant_factors(a);
    if !inv.is_cyclic() {
        return Err(Error::Precondition("matrix is not cyclic".into()));
    }
    if !is_similar(a, &ainv.scale(lambda))? {
        return Err(Error::Precondition("matrix is not similar to lambda * inverse".into()));
    }
    check_no_odd_divisor(&a.mul(a), lambda)?;
    let h = inv.characteristic_polynomial(a.field());
    let g = h.inverse_dickson(lambda).ok_or_else(|| {
        Error::Precondition(format!("{h} is not a lambda-Dickson transform"))
    })?;
    Ok(Mat::companion(&g))
}

fn check_no_odd_divisor(a2: &Mat, lambda: &Scalar) -> Result<()> {
    if let Some((t, _)) = linear_elementary_divisors(a2, lambda)
        .into_iter()
        .find(|(t, _)| t % 2 == 1)
    {
        return Err(Error::Precondition(format!(
            "square has elementary divisor (x - {lambda})^{t} of odd degree"
        )));
    }
    Ok(())
}

/// Semisimple part of A together with the polynomial s with s(A) = A_S.
#[derive(Clone, Debug)]
pub struct JordanChevalley {
    pub semisimple: Mat,
    pub poly: Poly,
}

/// Newton iteration s <- s - r(s)/r'(s) modulo the minimal polynomial,
/// r the radical of the minimal polynomial.
pub fn jordan_chevalley(a: &Mat) -> Result<JordanChevalley> {
    let field = a.field();
    if !field.is_finite() {
        return Err(Error::Unsupported("Jordan-Chevalley over the rationals".into()));
    }
    if !a.is_square() {
        return Err(Error::Dimension("expected a square matrix".into()));
    }
    let mu = minimal_polynomial(a);
    let r = radical(&mu)?;
    let dr = r.derivative();
    let mut s = Poly::x(field).rem(&mu);
    for _ in 0..64 {
        let e = r.compose(&s).rem(&mu);
        if e.is_zero() {
            return Ok(JordanChevalley {
                semisimple: a.eval_poly(&s),
                poly: s,
            });
        }
        let d = dr.compose(&s).rem(&mu);
        let dinv = d
            .inv_mod(&mu)
            .ok_or_else(|| Error::Precondition("derivative not invertible".into()))?;
        s = s.sub(&e.mul(&dinv)).rem(&mu);
    }
    Err(Error::Precondition("Newton iteration did not converge".into()))
}

/// Involution S and skew-involution H with P = S H, when P is similar to
/// -P^-1. Each cyclic summand is brought to [[0, I], [I, D]] =
/// [[I, 0], [D, -I]] * [[0, I], [-I, 0]].
pub fn gl_inv_skew_factorization(p: &Mat) -> Result<Option<(Mat, Mat)>> {
    let pinv = require_invertible(p)?;
    let field = p.field();
    let minus_one = -field.one();
    check_no_odd_divisor(&p.mul(p), &minus_one)?;
    if !is_similar(p, &pinv.neg())? {
        return Ok(None);
    }
    if p.rows() == 0 {
        return Ok(Some((p.clone(), p.clone())));
    }
    let dec = cyclic_decomposition(p);
    let (mut qs, mut ss, mut hs) = (Vec::new(), Vec::new(), Vec::new());
    for b in &dec.blocks {
        let g = b.poly.inverse_dickson(&minus_one).ok_or_else(|| {
            Error::Precondition(format!("{} has no Dickson preimage", b.poly))
        })?;
        let d = Mat::companion(&g);
        let m = d.rows();
        let id = Mat::identity(field, m);
        let z = Mat::zeros(field, m, m);
        qs.push(dickson_block(&d, &minus_one));
        ss.push(Mat::block2(&id, &z, &d, &id.neg()));
        hs.push(Mat::block2(&z, &id, &id.neg(), &z));
    }
    let q = Mat::block_diag(&qs);
    // R^-1 P R = Q  =>  P = R Q R^-1
    let r = similarity_transform(p, &q).ok_or_else(|| {
        Error::Precondition("Dickson normal form is not similar to the input".into())
    })?;
    let rinv = r.inv()?;
    let s = r.mul(&Mat::block_diag(&ss)).mul(&rinv);
    let h = r.mul(&Mat::block_diag(&hs)).mul(&rinv);
    Ok(Some((s, h)))
}

/// Skew-involution eta with eta^-1 A eta = A^-1 for a reversible cyclic A
/// whose minimal polynomial is a power of an irreducible of even degree.
/// Both eta and A*eta are then skew-involutions.
pub fn skew_reverser_cyclic(a: &Mat) -> Result<Mat> {
    let field = a.field();
    let p = field
        .modulus()
        .ok_or_else(|| Error::Unsupported("skew reverser over the rationals".into()))?;
    let ainv = require_invertible(a)?;
    let n = a.rows();
    let mu = minimal_polynomial(a);
    if mu.deg() != n {
        return Err(Error::Precondition("matrix is not cyclic".into()));
    }
    let fac = factorize(&mu)?;
    if fac.factors.len() != 1 || fac.factors[0].0.deg() % 2 == 1 {
        return Err(Error::Precondition(
            "minimal polynomial is not a power of an even-degree irreducible".into(),
        ));
    }
    if !is_similar(a, &ainv)? {
        return Err(Error::Precondition("matrix is not reversible".into()));
    }
    let d = fac.factors[0].0.deg();
    let jc = jordan_chevalley(a)?;
    let s = jc.semisimple;
    let sinv = s.inv()?;
    let u = cyclic_decomposition(a).blocks[0].generator.clone();
    let neg_u: Vector = u.iter().map(|x| -x).collect();
    // g ranges over K[x] of degree < d; the K[A_S]-span of u is a field
    let total = (p as usize).pow(d as u32);
    for idx in 1..total {
        let mut k = idx;
        let coeffs: Vec<i64> = (0..d)
            .map(|_| {
                let c = (k % p as usize) as i64;
                k /= p as usize;
                c
            })
            .collect();
        let g = Poly::from_i64s(field, &coeffs);
        let gs = s.eval_poly(&g);
        let w = vec_mat(&u, &gs);
        if vec_mat(&w, &sinv.eval_poly(&g)) != neg_u {
            continue;
        }
        let basis = Mat::from_rows(field, orbit_rows(&u, a, n));
        let img = Mat::from_rows(field, orbit_rows(&w, &ainv, n));
        let eta = basis.inv()?.mul(&img);
        return Ok(eta);
    }
    Err(Error::Precondition("no polynomial with g(A_S) g(A_S^-1) u = -u".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Field;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn check_reverser(a: &Mat, r: &Mat) {
        assert_eq!(r.inv().unwrap().mul(a).mul(r), a.inv().unwrap());
    }

    #[test]
    fn reversal_examples() {
        let f3 = f(3);
        let id = Mat::identity(f3, 3);
        assert_eq!(gl_reversal_conjugator(&id).unwrap(), Some(id.clone()));
        let j = Mat::from_i64(f3, &[&[0, 1], &[-1, 0]]);
        let r = gl_reversal_conjugator(&j).unwrap().unwrap();
        check_reverser(&j, &r);
        let d = Mat::diag(&[f3.from_i64(1), f3.from_i64(-1)], f3);
        check_reverser(&j, &d);
        let f7 = f(7);
        let a = Mat::diag(&[f7.from_i64(2), f7.one()], f7);
        assert_eq!(gl_reversal_conjugator(&a).unwrap(), None);
    }

    fn check_involutions(a: &Mat, s: &Mat, t: &Mat) {
        assert!(s.mul(s).is_identity());
        assert!(t.mul(t).is_identity());
        assert_eq!(&s.mul(t), a);
    }

    #[test]
    fn wonenburger_examples() {
        let f3 = f(3);
        let id = Mat::identity(f3, 2);
        let (s, t) = wonenburger_involutions(&id).unwrap().unwrap();
        check_involutions(&id, &s, &t);
        let j = Mat::from_i64(f3, &[&[0, 1], &[-1, 0]]);
        let (s, t) = wonenburger_involutions(&j).unwrap().unwrap();
        check_involutions(&j, &s, &t);
        let s0 = Mat::from_i64(f3, &[&[1, 0], &[0, -1]]);
        let t0 = Mat::from_i64(f3, &[&[0, 1], &[1, 0]]);
        check_involutions(&j, &s0, &t0);
        let j2 = Mat::from_i64(f3, &[&[1, 1], &[0, 1]]);
        let (s, t) = wonenburger_involutions(&j2).unwrap().unwrap();
        check_involutions(&j2, &s, &t);
        let f7 = f(7);
        let a = Mat::diag(&[f7.from_i64(2), f7.one()], f7);
        assert!(wonenburger_involutions(&a).unwrap().is_none());
    }

    fn check_symmetric_pair(q: &Mat) {
        let (s, t) = symmetric_pair_factorization(q).unwrap();
        assert!(s.is_symmetric() && t.is_symmetric());
        assert!(s.is_invertible());
        assert_eq!(&s.mul(&t), q);
    }

    #[test]
    fn symmetric_pair_examples() {
        let f7 = f(7);
        let sym = Mat::from_i64(f7, &[&[1, 2], &[2, 5]]);
        check_symmetric_pair(&sym);
        check_symmetric_pair(&Mat::from_i64(f7, &[&[0, 1], &[-1, 0]]));
        check_symmetric_pair(&Mat::companion(&Poly::from_i64s(f7, &[1, 1, 1])));
        check_symmetric_pair(&Mat::from_i64(f7, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]));
    }

    #[test]
    fn normal_form_examples() {
        let f3 = f(3);
        let one = f3.one();
        let j = Mat::from_i64(f3, &[&[0, 1], &[-1, 0]]);
        assert_eq!(skew_cyclic_normal_form(&j, &one).unwrap(), Mat::zeros(f3, 1, 1));
        for d in 0..3 {
            let c = Mat::companion(&Poly::linear(&f3.from_i64(d)).dickson(&one).unwrap());
            let dm = skew_cyclic_normal_form(&c, &one).unwrap();
            assert_eq!(dm, Mat::from_i64(f3, &[&[d]]));
        }
        // char poly (x^2+1)^2 = x^2 Dickson-transformed
        let a = Mat::companion(&Poly::from_i64s(f3, &[1, 0, 2, 0, 1]));
        let dm = skew_cyclic_normal_form(&a, &one).unwrap();
        assert_eq!(dm, Mat::companion(&Poly::from_i64s(f3, &[0, 0, 1])));
        assert!(is_similar(&dickson_block(&dm, &one), &a).unwrap());
        assert!(skew_cyclic_normal_form(&Mat::identity(f3, 2), &one).is_err());
    }

    #[test]
    fn jordan_chevalley_examples() {
        let f3 = f(3);
        let ss = Mat::from_i64(f3, &[&[0, 1], &[-1, 0]]);
        assert_eq!(jordan_chevalley(&ss).unwrap().semisimple, ss);
        let j2 = Mat::from_i64(f3, &[&[1, 1], &[0, 1]]);
        assert!(jordan_chevalley(&j2).unwrap().semisimple.is_identity());
        let a = Mat::companion(&Poly::from_i64s(f3, &[1, 0, 2, 0, 1]));
        let s = jordan_chevalley(&a).unwrap().semisimple;
        assert!(s.mul(&s).is_scalar(&-f3.one()));
        assert_eq!(s.mul(&a), a.mul(&s));
        let u = a.mul(&s.inv().unwrap());
        assert!(u.add_scalar(&-f3.one()).pow(4).is_zero());
        assert!(!u.is_identity());
    }

    fn check_inv_skew(p: &Mat) {
        let (s, h) = gl_inv_skew_factorization(p).unwrap().unwrap();
        assert!(s.mul(&s).is_identity());
        assert!(h.mul(&h).is_scalar(&-p.field().one()));
        assert_eq!(&s.mul(&h), p);
        assert_eq!(s.inv().unwrap().mul(p).mul(&s), p.inv().unwrap().neg());
    }

    #[test]
    fn inv_skew_examples() {
        let f3 = f(3);
        let h0 = Mat::from_i64(f3, &[&[0, 1], &[-1, 0]]);
        assert!(gl_inv_skew_factorization(&h0).is_err());
        check_inv_skew(&Mat::from_i64(f3, &[&[1, 1], &[0, 2]]));
        let m1 = -f3.one();
        for g in [[1, 1, 1], [2, 0, 1], [0, 1, 1]] {
            let f = Poly::from_i64s(f3, &g).dickson(&m1).unwrap();
            check_inv_skew(&Mat::companion(&f));
        }
        check_inv_skew(&Mat::from_i64(f3, &[&[0, 1], &[1, 0]]));
        let f7 = f(7);
        let a = Mat::diag(&[f7.from_i64(2), f7.one()], f7);
        assert_eq!(gl_inv_skew_factorization(&a).unwrap(), None);
    }

    #[test]
    fn skew_reverser_examples() {
        let f3 = f(3);
        let a = Mat::from_i64(f3, &[&[0, 1], &[-1, 0]]);
        let check = |a: &Mat| {
            let eta = skew_reverser_cyclic(a).unwrap();
            let m1 = -a.field().one();
            assert!(eta.mul(&eta).is_scalar(&m1));
            assert_eq!(eta.inv().unwrap().mul(a).mul(&eta), a.inv().unwrap());
            let ae = a.mul(&eta);
            assert!(ae.mul(&ae).is_scalar(&m1));
        };
        check(&a);
        check(&Mat::companion(&Poly::from_i64s(f3, &[1, 0, 2, 0, 1])));
        let odd = Mat::companion(&Poly::from_i64s(f3, &[1, 2, 0, 1]));
        assert!(skew_reverser_cyclic(&odd).is_err());
    }
}
