//! Similarity invariants: invariant factors (Smith form of xI - A over K[x]),
//! elementary divisors, and cyclic decompositions with explicit bases.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::mat::{is_zero_vec, vec_mat, Mat, Vector};
use crate::poly::{factorize, Poly};
use crate::scalars::{Field, Scalar};

/// Invariant factors (each dividing the next) and, over prime fields, the
/// elementary divisors as `(irreducible, exponent, multiplicity)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimilarityInvariants {
    pub invariant_factors: Vec<Poly>,
    pub elementary_divisors: Option<Vec<(Poly, u32, usize)>>,
}

impl SimilarityInvariants {
    pub fn characteristic_polynomial(&self, field: Field) -> Poly {
        self.invariant_factors
            .iter()
            .fold(Poly::one(field), |acc, f| acc.mul(f))
    }

    pub fn minimal_polynomial(&self, field: Field) -> Poly {
        self.invariant_factors
            .last()
            .cloned()
            .unwrap_or_else(|| Poly::one(field))
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() <= 1
    }

    /// Multiplicity of the elementary divisor p^t.
    pub fn multiplicity(&self, p: &Poly, t: u32) -> usize {
        self.elementary_divisors
            .as_ref()
            .and_then(|eds| eds.iter().find(|(q, e, _)| q == p && *e == t))
            .map_or(0, |(_, _, m)| *m)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "invariant_factors": self.invariant_factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "elementary_divisors": self.elementary_divisors.as_ref().map(|eds| {
                eds.iter().map(|(p, e, m)| json!({"base": p.to_string(), "exponent": e, "multiplicity": m})).collect::<Vec<_>>()
            }),
        })
    }
}

/// Smith form diagonal of a square polynomial matrix, monic, in divisibility order.
pub fn smith_diagonal(mut m: Vec<Vec<Poly>>, field: Field) -> Vec<Poly> {
    let n = m.len();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        loop {
            // pivot: nonzero entry of least degree
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in m.iter().enumerate().skip(k) {
                for (j, e) in row.iter().enumerate().skip(k) {
                    if !e.is_zero()
                        && best.is_none_or(|(bi, bj)| e.deg() < m[bi][bj].deg())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                // remaining block is zero
                for _ in k..n {
                    diag.push(Poly::zero(field));
                }
                return diag;
            };
            m.swap(k, pi);
            for row in m.iter_mut() {
                row.swap(k, pj);
            }
            let pivot = m[k][k].clone();
            let mut clean = true;
            for i in k + 1..n {
                if m[i][k].is_zero() {
                    continue;
                }
                let (q, r) = m[i][k].divmod(&pivot).unwrap();
                for j in k..n {
                    let t = q.mul(&m[k][j]);
                    m[i][j] = m[i][j].sub(&t);
                }
                debug_assert_eq!(m[i][k], r);
                if !r.is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..n {
                if m[k][j].is_zero() {
                    continue;
                }
                let (q, r) = m[k][j].divmod(&pivot).unwrap();
                for row in m.iter_mut().skip(k) {
                    let t = q.mul(&row[k]);
                    row[j] = row[j].sub(&t);
                }
                if !r.is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // pivot must divide the rest; otherwise fold an offending row in
            let bad = (k + 1..n).find(|&i| (k + 1..n).any(|j| !pivot.divides(&m[i][j])));
            match bad {
                Some(i) => {
                    for j in k..n {
                        let t = m[i][j].clone();
                        m[k][j] = m[k][j].add(&t);
                    }
                }
                None => {
                    diag.push(pivot.monic());
                    break;
                }
            }
        }
    }
    diag
}

/// Invariant factors of a square matrix (constant factors dropped).
pub fn invariant_factors(a: &Mat) -> SimilarityInvariants {
    let field = a.field();
    let n = a.rows();
    let x = Poly::x(field);
    let char_mat: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = Poly::constant(-&a[(i, j)]);
                    if i == j {
                        x.add(&c)
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    let invariant_factors: Vec<Poly> = smith_diagonal(char_mat, field)
        .into_iter()
        .filter(|p| p.deg() > 0)
        .collect();
    let elementary_divisors = field.is_finite().then(|| elementary_from_invariants(&invariant_factors));
    SimilarityInvariants {
        invariant_factors,
        elementary_divisors,
    }
}

fn elementary_from_invariants(ifs: &[Poly]) -> Vec<(Poly, u32, usize)> {
    let mut out: Vec<(Poly, u32, usize)> = Vec::new();
    for f in ifs {
        for (p, e) in factorize(f).expect("prime field").factors {
            match out.iter_mut().find(|(q, ee, _)| *q == p && *ee == e) {
                Some(entry) => entry.2 += 1,
                None => out.push((p, e, 1)),
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp_canonical(&b.0).then(a.1.cmp(&b.1)));
    out
}

/// Multiplicities of elementary divisors (x - c)^t from the rank sequence
/// r_k = rank (A - c)^k: mult(t) = r_{t-1} - 2 r_t + r_{t+1}.
pub fn linear_elementary_divisors(a: &Mat, c: &Scalar) -> Vec<(usize, usize)> {
    elementary_divisor_multiplicities(a, &Poly::linear(c))
}

/// Multiplicities of elementary divisors p^t for an irreducible p, from the
/// ranks of p(A)^k. Works over any field.
pub fn elementary_divisor_multiplicities(a: &Mat, p: &Poly) -> Vec<(usize, usize)> {
    let n = a.rows();
    let d = p.deg().max(1);
    let pa = a.eval_poly(p);
    let mut ranks = vec![n];
    let mut cur = Mat::identity(a.field(), n);
    loop {
        cur = cur.mul(&pa);
        let r = cur.rank();
        let last = *ranks.last().unwrap();
        ranks.push(r);
        if r == last {
            break;
        }
    }
    ranks.push(*ranks.last().unwrap());
    let mut out = Vec::new();
    for t in 1..ranks.len() - 1 {
        let m = ranks[t - 1] + ranks[t + 1] - 2 * ranks[t];
        if m > 0 {
            out.push((t, m / d));
        }
    }
    out
}

pub fn is_similar(a: &Mat, b: &Mat) -> Result<bool> {
    if a.rows() != b.rows() || !a.is_square() || !b.is_square() || a.field() != b.field() {
        return Err(Error::Dimension("similarity needs equal square shapes".into()));
    }
    Ok(invariant_factors(a).invariant_factors == invariant_factors(b).invariant_factors)
}

/// Monic minimal polynomial of v under A (row action).
pub fn vector_min_poly(v: &[Scalar], a: &Mat) -> Poly {
    let field = a.field();
    if is_zero_vec(v) {
        return Poly::one(field);
    }
    let mut rows: Vec<Vector> = vec![v.to_vec()];
    loop {
        let next = vec_mat(rows.last().unwrap(), a);
        let m = Mat::from_rows(field, rows.clone());
        match m.solve_left(&next) {
            Ok(c) => {
                let mut coeffs: Vec<Scalar> = c.iter().map(|x| -x).collect();
                coeffs.push(field.one());
                return Poly::new(field, coeffs);
            }
            Err(_) => rows.push(next),
        }
    }
}

/// One cyclic summand: the vectors `generator * A^j`, j < deg(poly), are part
/// of the decomposition basis and `poly` is the generator's minimal polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicBlock {
    pub generator: Vector,
    pub poly: Poly,
}

/// V = sum of A-cyclic subspaces with minimal polynomials equal to the
/// invariant factors, largest first.
#[derive(Clone, Debug)]
pub struct CyclicDecomposition {
    pub blocks: Vec<CyclicBlock>,
}

impl CyclicDecomposition {
    /// Rows are generator * A^j, block by block. `basis * A * basis^-1` is the
    /// rational canonical form.
    pub fn basis(&self, a: &Mat) -> Mat {
        let mut rows = Vec::new();
        for b in &self.blocks {
            let mut v = b.generator.clone();
            for _ in 0..b.poly.deg() {
                rows.push(v.clone());
                v = vec_mat(&v, a);
            }
        }
        Mat::from_rows_cols(a.field(), rows, a.rows())
    }

    pub fn canonical_form(&self, field: Field) -> Mat {
        let blocks: Vec<Mat> = self.blocks.iter().map(|b| Mat::companion(&b.poly)).collect();
        if blocks.is_empty() {
            return Mat::zeros(field, 0, 0);
        }
        Mat::block_diag(&blocks)
    }

    /// Invariant factors in divisibility order (smallest first).
    pub fn invariant_factors(&self) -> Vec<Poly> {
        self.blocks.iter().rev().map(|b| b.poly.clone()).collect()
    }
}

fn min_poly_of(a: &Mat) -> Poly {
    let field = a.field();
    let n = a.rows();
    let mut mu = Poly::one(field);
    for i in 0..n {
        let mut e = vec![field.zero(); n];
        e[i] = field.one();
        mu = mu.lcm(&vector_min_poly(&e, a));
    }
    mu
}

pub fn minimal_polynomial(a: &Mat) -> Poly {
    min_poly_of(a)
}

/// A vector whose minimal polynomial is the minimal polynomial of A.
fn maximal_vector(a: &Mat, mu: &Poly) -> Vector {
    let field = a.field();
    let n = a.rows();
    let basis: Vec<Vector> = (0..n)
        .map(|i| {
            let mut e = vec![field.zero(); n];
            e[i] = field.one();
            e
        })
        .collect();
    for e in &basis {
        if vector_min_poly(e, a).deg() == mu.deg() {
            return e.clone();
        }
    }
    if field.is_finite() {
        // one primary component at a time
        let mut v = vec![field.zero(); n];
        for (p, e) in factorize(mu).unwrap().factors {
            let pe = p.pow(e as usize);
            let cof = a.eval_poly(&mu.div_exact(&pe));
            let top = a.eval_poly(&p.pow(e as usize - 1));
            for b in &basis {
                let w = vec_mat(b, &cof);
                if !is_zero_vec(&vec_mat(&w, &top)) {
                    v = v.iter().zip(&w).map(|(x, y)| x + y).collect();
                    break;
                }
            }
        }
        debug_assert_eq!(vector_min_poly(&v, a), *mu);
        return v;
    }
    // infinite field: a random vector is generic
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1C1);
    for bound in [3i64, 10, 100, 1000, 1_000_000].iter().cycle().take(200) {
        let v: Vector = (0..n)
            .map(|_| field.from_i64(rng.gen_range(-bound..=*bound)))
            .collect();
        if vector_min_poly(&v, a).deg() == mu.deg() {
            return v;
        }
    }
    unreachable!("no generic vector found")
}

/// Cyclic decomposition with explicit generators.
pub fn cyclic_decomposition(a: &Mat) -> CyclicDecomposition {
    let field = a.field();
    let n = a.rows();
    let mut blocks = Vec::new();
    // current invariant subspace as basis rows (ambient coords) and the
    // restricted matrix in that basis
    let mut basis = Mat::identity(field, n);
    let mut r = a.clone();
    while r.rows() > 0 {
        let m = r.rows();
        let mu = min_poly_of(&r);
        let v = maximal_vector(&r, &mu);
        let d = mu.deg();
        blocks.push(CyclicBlock {
            generator: vec_mat(&v, &basis),
            poly: mu,
        });
        if d == m {
            break;
        }
        // functional vanishing on v R^j for j < d-1 and 1 on v R^(d-1)
        let mut zrows = Vec::with_capacity(d);
        let mut cur = v.clone();
        for _ in 0..d {
            zrows.push(cur.clone());
            cur = vec_mat(&cur, &r);
        }
        let z = Mat::from_rows(field, zrows);
        let mut target = vec![field.zero(); d];
        target[d - 1] = field.one();
        let lambda = z.solve(&target).expect("independent cyclic basis");
        // complement: x with x R^j lambda = 0 for all j < d
        let mut cols = Vec::with_capacity(d);
        let mut col = lambda;
        for _ in 0..d {
            cols.push(col.clone());
            col = {
                // R * col
                let cm = Mat::from_rows(field, col.iter().map(|x| vec![x.clone()]).collect());
                let rc = r.mul(&cm);
                (0..m).map(|i| rc[(i, 0)].clone()).collect()
            };
        }
        let lam_mat = Mat::from_rows(field, cols).transpose();
        let comp = lam_mat.left_kernel();
        let comp_sub = crate::linalg::subspace::Subspace::row_space(&comp);
        let r_next = comp_sub.restriction(&r);
        basis = comp_sub.basis().mul(&basis);
        r = r_next;
    }
    CyclicDecomposition { blocks }
}

/// R with R^-1 A R = B when A and B are similar.
pub fn similarity_transform(a: &Mat, b: &Mat) -> Option<Mat> {
    let da = cyclic_decomposition(a);
    let db = cyclic_decomposition(b);
    if da.invariant_factors() != db.invariant_factors() {
        return None;
    }
    // Pa A Pa^-1 = C = Pb B Pb^-1  =>  B = (Pa^-1 Pb)^-1 A (Pa^-1 Pb)
    let pa = da.basis(a);
    let pb = db.basis(b);
    Some(pa.inv().ok()?.mul(&pb))
}

/// Basis of the solution space {X : A X = X B}.
pub fn intertwiners(a: &Mat, b: &Mat) -> Vec<Mat> {
    let field = a.field();
    let n = a.rows();
    let m = b.rows();
    // unknown X is n x m, index (i, j) -> i*m + j
    let mut sys = Mat::zeros(field, n * m, n * m);
    for i in 0..n {
        for j in 0..m {
            let row = i * m + j;
            for k in 0..n {
                let idx = k * m + j;
                sys[(row, idx)] = &sys[(row, idx)] + &a[(i, k)];
            }
            for k in 0..m {
                let idx = i * m + k;
                sys[(row, idx)] = &sys[(row, idx)] - &b[(k, j)];
            }
        }
    }
    let k = sys.right_kernel();
    (0..k.rows())
        .map(|r| {
            let v = k.row(r);
            Mat::from_rows(field, v.chunks(m).map(|c| c.to_vec()).collect())
        })
        .collect()
}

/// First invertible element of span(basis): basis elements in order, then
/// seeded random combinations.
pub fn pick_invertible(basis: &[Mat], seed: u64, tries: usize) -> Option<Mat> {
    if let Some(m) = basis.iter().find(|m| m.is_invertible()) {
        return Some(m.clone());
    }
    let first = basis.first()?;
    let field = first.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = field.modulus().map_or(7, |p| p as i64);
    for _ in 0..tries {
        let mut acc = Mat::zeros(field, first.rows(), first.cols());
        for b in basis {
            let c = field.from_i64(rng.gen_range(0..range));
            acc = acc.add(&b.scale(&c));
        }
        if acc.is_invertible() {
            return Some(acc);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn invariant_factor_examples() {
        let f3 = f(3);
        let inv = invariant_factors(&Mat::identity(f3, 2));
        let xm1 = Poly::from_i64s(f3, &[-1, 1]);
        assert_eq!(inv.invariant_factors, vec![xm1.clone(), xm1]);
        let p = Poly::from_i64s(f3, &[1, 2, 0, 1]);
        assert_eq!(invariant_factors(&Mat::companion(&p)).invariant_factors, vec![p]);
        for d in 0..3 {
            let a = Mat::from_i64(f3, &[&[0, 1], &[-1, d]]);
            let expect = Poly::linear(&f3.from_i64(d)).dickson(&f3.one()).unwrap();
            assert_eq!(invariant_factors(&a).invariant_factors, vec![expect]);
        }
        assert!(invariant_factors(&Mat::zeros(f3, 0, 0)).invariant_factors.is_empty());
    }

    #[test]
    fn rank_sequence_examples() {
        let f3 = f(3);
        let one = f3.one();
        assert_eq!(linear_elementary_divisors(&Mat::identity(f3, 4), &one), vec![(1, 4)]);
        let j2 = Mat::from_i64(f3, &[&[1, 1], &[0, 1]]);
        assert_eq!(linear_elementary_divisors(&j2, &one), vec![(2, 1)]);
        let jj = Mat::block_diag(&[j2.clone(), j2]);
        assert_eq!(linear_elementary_divisors(&jj, &one), vec![(2, 2)]);
    }

    #[test]
    fn similarity_examples() {
        let f3 = f(3);
        let j2 = Mat::from_i64(f3, &[&[1, 1], &[0, 1]]);
        assert!(is_similar(&j2, &j2).unwrap());
        assert!(is_similar(&j2, &j2.inv().unwrap()).unwrap());
        let f7 = f(7);
        let a = Mat::from_i64(f7, &[&[2, 0], &[0, 1]]);
        let b = Mat::from_i64(f7, &[&[4, 0], &[0, 1]]);
        assert!(!is_similar(&a, &b).unwrap());
        assert!(is_similar(&a, &Mat::identity(f7, 3)).is_err());
    }

    #[test]
    fn cyclic_decomposition_matches_smith() {
        let f5 = f(5);
        let a = Mat::from_i64(
            f5,
            &[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 2]],
        );
        let dec = cyclic_decomposition(&a);
        assert_eq!(dec.invariant_factors(), invariant_factors(&a).invariant_factors);
        let p = dec.basis(&a);
        assert_eq!(p.mul(&a).mul(&p.inv().unwrap()), dec.canonical_form(f5));
    }

    #[test]
    fn rational_field_decomposition() {
        let q = Field::rational();
        let a = Mat::from_i64(q, &[&[2, 1, 0], &[0, 2, 0], &[0, 0, 2]]);
        let dec = cyclic_decomposition(&a);
        assert_eq!(dec.invariant_factors(), invariant_factors(&a).invariant_factors);
        let r = similarity_transform(&a, &a.transpose()).unwrap();
        assert_eq!(r.inv().unwrap().mul(&a).mul(&r), a.transpose());
    }
}
