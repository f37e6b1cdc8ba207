//! Symplectic factorizations into two involutions, two skew-involutions, or
//! an involution and a skew-involution.
//!
//! Every such factorization comes from a reverser of the matching kind:
//! an involution s with s^-1 phi s = phi^-1 gives phi = (phi s) s, a
//! skew-involution e with e^-1 phi e = phi^-1 gives phi = (phi e)(-e), and an
//! involution s with s^-1 phi s = -phi^-1 gives phi = s (s phi).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::budget::{Budget, Tri};
use crate::error::{Error, Result};
use crate::linalg::canonical::{cyclic_decomposition, intertwiners};
use crate::linalg::subspace::cyclic_span;
use crate::linalg::{
    gl_inv_skew_factorization, is_similar, skew_reverser_cyclic, symmetric_pair_factorization, vec_mat,
    wonenburger_involutions, Mat, Subspace, Vector,
};
use crate::poly::factorize;

use super::decompose::{is_hyperbolic, orthogonal_decomposition, primary_components, reversible_splitting};
use super::{assemble, random_scalar, Splitting, SymplecticElement};

/// The three product shapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProductKind {
    TwoInvolutions,
    TwoSkew,
    InvolutionSkew,
}

impl ProductKind {
    pub const ALL: [ProductKind; 3] = [ProductKind::TwoInvolutions, ProductKind::TwoSkew, ProductKind::InvolutionSkew];

    pub fn name(self) -> &'static str {
        match self {
            ProductKind::TwoInvolutions => "two_involutions",
            ProductKind::TwoSkew => "two_skew_involutions",
            ProductKind::InvolutionSkew => "involution_skew",
        }
    }

    /// (eps1, eps2) with a^2 = eps1, b^2 = eps2 for phi = a b.
    pub fn squares(self) -> (i64, i64) {
        match self {
            ProductKind::TwoInvolutions => (1, 1),
            ProductKind::TwoSkew => (-1, -1),
            ProductKind::InvolutionSkew => (1, -1),
        }
    }

    /// Square of the reverser and sign of the target (phi^r = sign * phi^-1).
    fn reverser_shape(self) -> (i64, i64) {
        match self {
            ProductKind::TwoInvolutions => (1, 1),
            ProductKind::TwoSkew => (-1, 1),
            ProductKind::InvolutionSkew => (1, -1),
        }
    }
}

fn signed_identity(m: &Mat, eps: i64) -> Mat {
    Mat::scalar(m.field().from_i64(eps), m.rows())
}

/// phi = a b with both factors in Sp and the claimed squares.
pub fn verify_product(phi: &SymplecticElement, a: &Mat, b: &Mat, kind: ProductKind) -> bool {
    let (e1, e2) = kind.squares();
    let sp = phi.space();
    let ok_sp = |x: &Mat| super::is_symplectic(x, sp).unwrap_or(false);
    a.mul(b) == *phi.matrix()
        && ok_sp(a)
        && ok_sp(b)
        && a.mul(a) == signed_identity(a, e1)
        && b.mul(b) == signed_identity(b, e2)
}

/// r in Sp with the right square and r^-1 phi r = +-phi^-1.
pub fn verify_reverser(phi: &SymplecticElement, r: &Mat, kind: ProductKind) -> bool {
    let (sq, sign) = kind.reverser_shape();
    let m = phi.matrix();
    let target = phi.inverse().matrix().scale(&m.field().from_i64(sign));
    super::is_symplectic(r, phi.space()).unwrap_or(false)
        && r.mul(r) == signed_identity(r, sq)
        && m.mul(r) == r.mul(&target)
}

pub fn factors_from_reverser(phi: &Mat, r: &Mat, kind: ProductKind) -> (Mat, Mat) {
    match kind {
        ProductKind::TwoInvolutions => (phi.mul(r), r.clone()),
        ProductKind::TwoSkew => (phi.mul(r), r.neg()),
        ProductKind::InvolutionSkew => (r.clone(), r.mul(phi)),
    }
}

pub fn reverser_from_factors(a: &Mat, b: &Mat, kind: ProductKind) -> Mat {
    match kind {
        ProductKind::TwoInvolutions | ProductKind::TwoSkew => b.clone(),
        ProductKind::InvolutionSkew => a.clone(),
    }
}

fn hyperbolic_splitting(p: &SymplecticElement, splitting: Option<&Splitting>, budget: &Budget) -> Result<Splitting> {
    if let Some(s) = splitting {
        if !s.is_valid(p) {
            return Err(Error::Precondition("not an invariant Lagrangian splitting".into()));
        }
        return Ok(s.clone());
    }
    let rep = is_hyperbolic(p, budget);
    match rep.status {
        Tri::True => Ok(rep.splitting.expect("splitting")),
        Tri::False => Err(Error::Precondition("element is not hyperbolic".into())),
        Tri::Unknown => Err(Error::Budget("hyperbolic splitting search".into())),
    }
}

/// [[0, X], [Y, 0]]
fn skew_sum(x: &Mat, y: &Mat) -> Mat {
    let f = x.field();
    Mat::block2(&Mat::zeros(f, x.rows(), y.cols()), x, y, &Mat::zeros(f, y.rows(), x.cols()))
}

fn plus(a: &Mat) -> Result<Mat> {
    a.transpose_inverse()
}

fn diag_plus(a: &Mat) -> Result<Mat> {
    let f = a.field();
    let n = a.rows();
    Ok(Mat::block2(a, &Mat::zeros(f, n, n), &Mat::zeros(f, n, n), &plus(a)?))
}

/// Hyperbolic P = eta1 eta2 with eta1 = [[0, S], [-S^-1, 0]] and
/// eta2 = [[0, -T^-1], [T, 0]] where the block is Q = S T, S and T symmetric.
pub fn sp_two_skew_hyperbolic(
    p: &SymplecticElement,
    splitting: Option<&Splitting>,
    budget: &Budget,
) -> Result<(Mat, Mat)> {
    let split = hyperbolic_splitting(p, splitting, budget)?;
    let (_, q) = split.block(p)?;
    let (s, t) = symmetric_pair_factorization(&q)?;
    let e1 = skew_sum(&s, &s.inv()?.neg());
    let e2 = skew_sum(&t.inv()?.neg(), &t);
    Ok((split.lift(p, &e1)?, split.lift(p, &e2)?))
}

/// P = diag(S, S^+) diag(T, T^+) from involutions S, T with A = S T, when
/// the block A of the splitting is similar to its inverse.
pub fn sp_two_involutions_hyperbolic(p: &SymplecticElement, split: &Splitting) -> Result<Option<(Mat, Mat)>> {
    if !split.is_valid(p) {
        return Err(Error::Precondition("not an invariant Lagrangian splitting".into()));
    }
    let (_, a) = split.block(p)?;
    let Some((s, t)) = wonenburger_involutions(&a)? else {
        return Ok(None);
    };
    Ok(Some((split.lift(p, &diag_plus(&s)?)?, split.lift(p, &diag_plus(&t)?)?)))
}

/// Basis R with R A R^-1 = [[0, I], [C, 0]] for A similar to -A: the first
/// half of the rows are g A^(2j), the second half their images under A.
fn even_normal_basis(a: &Mat) -> Result<Mat> {
    let dec = cyclic_decomposition(a);
    let mut e_rows: Vec<Vector> = Vec::new();
    let a2 = a.mul(a);
    for b in &dec.blocks {
        let odd_zero = (0..=b.poly.deg()).filter(|k| k % 2 == 1).all(|k| b.poly.coeff(k).is_zero());
        if !odd_zero {
            return Err(Error::Precondition("invariant factor is not even".into()));
        }
        let mut v = b.generator.clone();
        for _ in 0..b.poly.deg() / 2 {
            e_rows.push(v.clone());
            v = vec_mat(&v, &a2);
        }
    }
    let f_rows: Vec<Vector> = e_rows.iter().map(|v| vec_mat(v, a)).collect();
    e_rows.extend(f_rows);
    Ok(Mat::from_rows_cols(a.field(), e_rows, a.rows()))
}

/// Involution and skew-involution factors of diag(A, A^+) in standard
/// coordinates.
fn inv_skew_block(a: &Mat) -> Result<(Mat, Mat)> {
    let field = a.field();
    let neg_inv = a.inv()?.neg();
    if is_similar(a, &neg_inv)? {
        if let Ok(Some((s, h))) = gl_inv_skew_factorization(a) {
            return Ok((diag_plus(&s)?, diag_plus(&h)?));
        }
    }
    if !is_similar(a, &a.neg())? {
        return Err(Error::Precondition("block is similar to neither -A^-1 nor -A".into()));
    }
    let n = a.rows();
    let m = n / 2;
    let r = even_normal_basis(a)?;
    let an = r.mul(a).mul(&r.inv()?);
    let c = an.submatrix(m..n, 0..m);
    let (rs, ts) = symmetric_pair_factorization(&c)?;
    let z = Mat::zeros(field, m, m);
    let h = Mat::block2(&z, &rs, &rs.neg(), &z);
    let s = Mat::block2(&ts.neg(), &z, &z, &rs.inv()?);
    debug_assert_eq!(h.mul(&s), an);
    let sigma = skew_sum(&h, &plus(&h)?.neg());
    let eta = skew_sum(&s.inv()?.neg(), &s);
    let d = diag_plus(&r)?;
    let dinv = d.inv()?;
    Ok((dinv.mul(&sigma).mul(&d), dinv.mul(&eta).mul(&d)))
}

/// P = sigma eta for P = diag(A, A^+) in an invariant Lagrangian splitting
/// with A similar to -A^-1 or to -A.
pub fn sp_inv_skew_hyperbolic(
    p: &SymplecticElement,
    splitting: Option<&Splitting>,
    budget: &Budget,
) -> Result<(Mat, Mat)> {
    let split = hyperbolic_splitting(p, splitting, budget)?;
    let (_, a) = split.block(p)?;
    let (s, h) = inv_skew_block(&a)?;
    Ok((split.lift(p, &s)?, split.lift(p, &h)?))
}

/// Involution sigma in Sp with sigma^-1 phi sigma = -phi^-1 for cyclic phi
/// whose square is hyperbolic: u generates a totally isotropic phi^2-cyclic
/// subspace of half dimension and u phi^i sigma = (-1)^i u phi^-i.
pub fn sp_inv_skew_cyclic(phi: &SymplecticElement, budget: &Budget) -> Result<Mat> {
    let m = phi.matrix();
    let dim = phi.dim();
    let psi = phi.square();
    let rep = is_hyperbolic(&psi, budget);
    let split = match rep.status {
        Tri::True => rep.splitting.expect("splitting"),
        Tri::False => return Err(Error::Precondition("square is not hyperbolic".into())),
        Tri::Unknown => return Err(Error::Budget("hyperbolic splitting of the square".into())),
    };
    let minv = phi.inverse().matrix().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC7C1);
    let generates = |u: &Vector| {
        cyclic_span(u, psi.matrix()).dim() == dim / 2 && cyclic_span(u, m).dim() == dim
    };
    let mut found = None;
    'outer: for l in [&split.l1, &split.l2] {
        for u in l.basis().row_vectors() {
            if generates(&u) {
                found = Some(u);
                break 'outer;
            }
        }
        for _ in 0..200 {
            if !budget.spend(1) {
                return Err(Error::Budget("cyclic generator search".into()));
            }
            let u = super::random_in(l.basis(), &mut rng);
            if generates(&u) {
                found = Some(u);
                break 'outer;
            }
        }
    }
    let u = found.ok_or_else(|| Error::Precondition("no phi-cyclic isotropic generator".into()))?;
    let field = phi.field();
    let mut rows = Vec::with_capacity(dim);
    let mut imgs = Vec::with_capacity(dim);
    let (mut fw, mut bw) = (u.clone(), u.clone());
    for i in 0..dim {
        rows.push(fw.clone());
        let sign = if i % 2 == 0 { field.one() } else { -field.one() };
        imgs.push(bw.iter().map(|x| x * &sign).collect::<Vector>());
        fw = vec_mat(&fw, m);
        bw = vec_mat(&bw, &minv);
    }
    let b = Mat::from_rows_cols(field, rows, dim);
    let sigma = b.inv()?.mul(&Mat::from_rows_cols(field, imgs, dim));
    if !verify_reverser(phi, &sigma, ProductKind::InvolutionSkew) {
        return Err(Error::Inconsistent);
    }
    Ok(sigma)
}

/// Bounded random search in the linear space of intertwiners X with
/// phi X = X target, X G antisymmetric (involutions) or symmetric
/// (skew-involutions), for an element of Sp with X^2 = square * I.
pub fn sp_conjugator_search(
    phi: &SymplecticElement,
    target: &Mat,
    square: Option<i64>,
    budget: &Budget,
    tries: usize,
) -> Option<Mat> {
    let field = phi.field();
    let g = phi.gram();
    let n = phi.dim();
    let mut basis = intertwiners(phi.matrix(), target);
    if let Some(sq) = square {
        // X G symmetric iff X^2 = -1 for X in Sp, antisymmetric iff X^2 = 1
        let sym = sq == -1;
        let cons: Vec<Vector> = basis
            .iter()
            .map(|x| {
                let xg = x.mul(g);
                let d = if sym { xg.sub(&xg.transpose()) } else { xg.add(&xg.transpose()) };
                d.entries().to_vec()
            })
            .collect();
        if basis.is_empty() {
            return None;
        }
        let sys = Mat::from_rows_cols(field, cons, n * n).transpose();
        let ker = sys.right_kernel();
        basis = ker
            .row_vectors()
            .iter()
            .map(|c| {
                c.iter()
                    .zip(&basis)
                    .fold(Mat::zeros(field, n, n), |acc, (ci, b)| acc.add(&b.scale(ci)))
            })
            .collect();
    }
    if basis.is_empty() {
        return None;
    }
    let ok = |x: &Mat| {
        x.is_invertible()
            && super::is_symplectic(x, phi.space()).unwrap_or(false)
            && square.is_none_or(|s| x.mul(x) == Mat::scalar(field.from_i64(s), n))
    };
    for b in &basis {
        if !budget.spend(1) {
            return None;
        }
        if ok(b) {
            return Some(b.clone());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EA4C4);
    for _ in 0..tries {
        if !budget.spend(1) {
            return None;
        }
        let x = basis
            .iter()
            .fold(Mat::zeros(field, n, n), |acc, b| acc.add(&b.scale(&random_scalar(field, &mut rng))));
        if ok(&x) {
            return Some(x);
        }
    }
    None
}

const SEARCH_TRIES: usize = 4000;

fn reverser_target(phi: &SymplecticElement, kind: ProductKind) -> Mat {
    let (_, sign) = kind.reverser_shape();
    phi.inverse().matrix().scale(&phi.field().from_i64(sign))
}

/// Reverser on one invariant regular block: lemma constructions first, then
/// the linear-space search.
fn local_reverser(loc: &SymplecticElement, kind: ProductKind, budget: &Budget) -> Option<Mat> {
    let found = match kind {
        ProductKind::TwoInvolutions => {
            let rep = reversible_splitting(loc, budget);
            rep.splitting
                .and_then(|s| sp_two_involutions_hyperbolic(loc, &s).ok().flatten())
                .map(|(a, b)| reverser_from_factors(&a, &b, kind))
        }
        ProductKind::TwoSkew => skew_reverser_constructive(loc, budget),
        ProductKind::InvolutionSkew => inv_skew_constructive(loc, budget),
    };
    if let Some(r) = found.filter(|r| verify_reverser(loc, r, kind)) {
        return Some(r);
    }
    let (sq, _) = kind.reverser_shape();
    sp_conjugator_search(loc, &reverser_target(loc, kind), Some(sq), budget, SEARCH_TRIES)
}

fn skew_reverser_constructive(loc: &SymplecticElement, budget: &Budget) -> Option<Mat> {
    let m = loc.matrix();
    if crate::linalg::minimal_polynomial(m).deg() == loc.dim() && loc.field().is_finite() {
        let fac = factorize(&crate::linalg::minimal_polynomial(m)).ok()?;
        if fac.factors.len() == 1 && fac.factors[0].0.deg() % 2 == 0 {
            return skew_reverser_cyclic(m).ok();
        }
    }
    let rep = is_hyperbolic(loc, budget);
    let split = rep.splitting?;
    let (a, b) = sp_two_skew_hyperbolic(loc, Some(&split), budget).ok()?;
    Some(reverser_from_factors(&a, &b, ProductKind::TwoSkew))
}

fn inv_skew_constructive(loc: &SymplecticElement, budget: &Budget) -> Option<Mat> {
    let m = loc.matrix();
    if crate::linalg::minimal_polynomial(m).deg() == loc.dim() {
        if let Ok(s) = sp_inv_skew_cyclic(loc, budget) {
            return Some(s);
        }
    }
    let split = is_hyperbolic(loc, budget).splitting?;
    let (a, b) = sp_inv_skew_hyperbolic(loc, Some(&split), budget).ok()?;
    Some(reverser_from_factors(&a, &b, ProductKind::InvolutionSkew))
}

/// Blocks a reverser of the given kind must preserve: primary components
/// for phi^-1, merged along p -> p(-x) for -phi^-1.
fn reverser_blocks(phi: &SymplecticElement, kind: ProductKind) -> Result<Vec<Subspace>> {
    let comps = primary_components(phi)?;
    if kind != ProductKind::InvolutionSkew {
        return Ok(comps.into_iter().map(|c| c.space).collect());
    }
    let mut spaces: Vec<(Vec<crate::poly::Poly>, Subspace)> = comps
        .into_iter()
        .map(|c| {
            let mut polys = vec![c.base.clone()];
            polys.extend(c.partner);
            (polys, c.space)
        })
        .collect();
    let mut merged: Vec<(Vec<crate::poly::Poly>, Subspace)> = Vec::new();
    while let Some((polys, space)) = spaces.pop() {
        let twisted: Vec<crate::poly::Poly> = polys.iter().map(|p| p.negated_root_poly()).collect();
        if let Some(pos) = spaces.iter().position(|(qs, _)| qs.iter().any(|q| twisted.contains(q))) {
            let (qs, sp) = spaces.remove(pos);
            let mut all = polys;
            all.extend(qs);
            spaces.push((all, space.sum(&sp)));
        } else {
            merged.push((polys, space));
        }
    }
    Ok(merged.into_iter().map(|(_, s)| s).collect())
}

/// Assembles local solutions over the blocks, splitting a block into its
/// orthogonal pieces (alone or in pairs) when it has no solution as a whole.
fn blockwise<L, C>(phi: &SymplecticElement, blocks: Vec<Subspace>, budget: &Budget, local: L, check: C) -> Result<Option<Mat>>
where
    L: Fn(&SymplecticElement) -> Option<Mat>,
    C: Fn(&Mat) -> bool,
{
    let mut bases = Vec::new();
    let mut locals = Vec::new();
    for block in blocks {
        let loc = phi.restrict(&block)?;
        if let Some(r) = local(&loc) {
            bases.push(block.basis().clone());
            locals.push(r);
            continue;
        }
        let pieces = match orthogonal_decomposition(&loc, budget) {
            Ok(d) => d.pieces,
            Err(_) => return Ok(None),
        };
        let lb = block.basis().clone();
        let mut open: Vec<Subspace> = Vec::new();
        for pc in &pieces {
            match local(&pc.element) {
                Some(r) => {
                    bases.push(pc.subspace.basis().mul(&lb));
                    locals.push(r);
                }
                None => open.push(pc.subspace.clone()),
            }
        }
        while let Some(a) = open.pop() {
            let mut paired = None;
            for (j, b) in open.iter().enumerate() {
                let union = a.sum(b);
                if let Some(r) = local(&loc.restrict(&union)?) {
                    paired = Some((j, union, r));
                    break;
                }
            }
            match paired {
                Some((j, union, r)) => {
                    open.remove(j);
                    bases.push(union.basis().mul(&lb));
                    locals.push(r);
                }
                None => return Ok(None),
            }
        }
    }
    if bases.is_empty() {
        return Ok(Some(Mat::identity(phi.field(), 0)));
    }
    let r = assemble(&bases, &locals)?;
    Ok(check(&r).then_some(r))
}

/// Reverser of the requested kind, assembled over orthogonal blocks.
/// `Ok(None)` means no witness was found within the budget.
pub fn sp_reverser(phi: &SymplecticElement, kind: ProductKind, budget: &Budget) -> Result<Option<Mat>> {
    blockwise(
        phi,
        reverser_blocks(phi, kind)?,
        budget,
        |loc| local_reverser(loc, kind, budget),
        |r| verify_reverser(phi, r, kind),
    )
}

/// alpha in Sp with alpha^-1 phi alpha = -phi^-1, assembled blockwise.
pub fn sp_neg_inverse_conjugator(phi: &SymplecticElement, budget: &Budget) -> Result<Option<Mat>> {
    let kind = ProductKind::InvolutionSkew;
    let target = reverser_target(phi, kind);
    blockwise(
        phi,
        reverser_blocks(phi, kind)?,
        budget,
        |loc| {
            local_reverser(loc, kind, budget)
                .or_else(|| sp_conjugator_search(loc, &reverser_target(loc, kind), None, budget, SEARCH_TRIES))
        },
        |a| super::is_symplectic(a, phi.space()).unwrap_or(false) && phi.matrix().mul(a) == a.mul(&target),
    )
}

/// alpha in Sp with alpha^-1 phi alpha = phi^-1, assembled blockwise.
pub fn sp_reversal_conjugator(phi: &SymplecticElement, budget: &Budget) -> Result<Option<Mat>> {
    let target = phi.inverse().matrix().clone();
    blockwise(
        phi,
        reverser_blocks(phi, ProductKind::TwoSkew)?,
        budget,
        |loc| {
            local_reverser(loc, ProductKind::TwoSkew, budget)
                .or_else(|| local_reverser(loc, ProductKind::TwoInvolutions, budget))
                .or_else(|| sp_conjugator_search(loc, loc.inverse().matrix(), None, budget, SEARCH_TRIES))
        },
        |a| super::is_symplectic(a, phi.space()).unwrap_or(false) && phi.matrix().mul(a) == a.mul(&target),
    )
}

/// Largest intertwiner space (in elements) enumerated per block.
pub const EXHAUSTIVE_CONJUGATOR_LIMIT: u64 = 600_000;

/// Decides whether phi is Sp-conjugate to phi^-1 (or -phi^-1 when `neg`)
/// over a finite field by enumerating the intertwiner space of every block.
/// A conjugator must preserve the blocks, so one exists iff each block has
/// one. Returns the assembled conjugator when the answer is true.
pub fn sp_inverse_conjugacy_exhaustive(phi: &SymplecticElement, neg: bool, budget: &Budget) -> (Tri, Option<Mat>) {
    let Some(q) = phi.field().modulus() else {
        return (Tri::Unknown, None);
    };
    let kind = if neg { ProductKind::InvolutionSkew } else { ProductKind::TwoSkew };
    let Ok(blocks) = reverser_blocks(phi, kind) else {
        return (Tri::Unknown, None);
    };
    let field = phi.field();
    let mut bases = Vec::new();
    let mut locals = Vec::new();
    for block in blocks {
        let Ok(loc) = phi.restrict(&block) else {
            return (Tri::Unknown, None);
        };
        let target = reverser_target(&loc, kind);
        let basis = intertwiners(loc.matrix(), &target);
        let count = (q as u128).checked_pow(basis.len() as u32).unwrap_or(u128::MAX);
        if count > EXHAUSTIVE_CONJUGATOR_LIMIT as u128 || !budget.spend(count as u64) {
            return (Tri::Unknown, None);
        }
        let m = loc.dim();
        let mut digits = vec![0u64; basis.len()];
        let found = loop {
            let x = digits
                .iter()
                .zip(&basis)
                .filter(|(d, _)| **d != 0)
                .fold(Mat::zeros(field, m, m), |acc, (d, b)| acc.add(&b.scale(&field.from_i64(*d as i64))));
            if super::is_symplectic(&x, loc.space()).unwrap_or(false) {
                break Some(x);
            }
            // odometer over GF(q)^k
            match digits.iter().position(|&d| d + 1 < q) {
                Some(i) => {
                    digits[i] += 1;
                    digits[..i].iter_mut().for_each(|d| *d = 0);
                }
                None => break None,
            }
        };
        match found {
            Some(x) => {
                bases.push(block.basis().clone());
                locals.push(x);
            }
            None => return (Tri::False, None),
        }
    }
    if bases.is_empty() {
        return (Tri::True, Some(Mat::identity(field, 0)));
    }
    match assemble(&bases, &locals) {
        Ok(a) => (Tri::True, Some(a)),
        Err(_) => (Tri::Unknown, None),
    }
}

/// phi = a b of the requested kind, when a reverser is found.
pub fn sp_product(phi: &SymplecticElement, kind: ProductKind, budget: &Budget) -> Result<Option<(Mat, Mat)>> {
    Ok(sp_reverser(phi, kind, budget)?.map(|r| factors_from_reverser(phi.matrix(), &r, kind)))
}

/// Plain Sp conjugator alpha with alpha^-1 phi alpha = target (bounded search).
pub fn sp_conjugator(phi: &SymplecticElement, target: &Mat, budget: &Budget) -> Option<Mat> {
    sp_conjugator_search(phi, target, None, budget, SEARCH_TRIES)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Field;
    use crate::symplectic::{hyperbolic_element, random_symplectic, SymplecticSpace};
    use crate::Poly;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn conj(phi: &SymplecticElement, seed: u64) -> SymplecticElement {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha = random_symplectic(phi.space(), &mut rng, 3 * phi.dim());
        phi.conjugate(&alpha).unwrap()
    }

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn two_skew_hyperbolic_examples() {
        let f3 = f(3);
        let j = Mat::from_i64(f3, &[&[1, 1], &[0, 1]]);
        for phi in [
            hyperbolic_element(&j).unwrap(),
            conj(&hyperbolic_element(&j).unwrap(), 5),
            SymplecticElement::identity(&SymplecticSpace::standard(f3, 4).unwrap()),
            SymplecticElement::identity(&SymplecticSpace::standard(f3, 4).unwrap()).neg(),
        ] {
            let (a, c) = sp_two_skew_hyperbolic(&phi, None, &b()).unwrap();
            assert!(verify_product(&phi, &a, &c, ProductKind::TwoSkew));
        }
    }

    #[test]
    fn inv_skew_hyperbolic_examples() {
        let f3 = f(3);
        let h0 = Mat::from_i64(f3, &[&[0, 1], &[-1, 0]]);
        let a = Mat::from_i64(f3, &[&[0, 1], &[2, 0]]);
        for blk in [h0, a] {
            let phi = conj(&hyperbolic_element(&blk).unwrap(), 2);
            let (s, e) = sp_inv_skew_hyperbolic(&phi, None, &b()).unwrap();
            assert!(verify_product(&phi, &s, &e, ProductKind::InvolutionSkew));
        }
        let id = hyperbolic_element(&Mat::identity(f3, 2)).unwrap();
        assert!(sp_inv_skew_hyperbolic(&id, None, &b()).is_err());
    }

    #[test]
    fn inv_skew_cyclic_odd_exponent() {
        // x^2+1 over GF(3): cyclic of dim 2 is a skew-involution
        let f3 = f(3);
        let h = SymplecticElement::standard(Mat::from_i64(f3, &[&[0, 1], &[-1, 0]])).unwrap();
        let s = sp_inv_skew_cyclic(&h, &b()).unwrap();
        assert!(verify_reverser(&h, &s, ProductKind::InvolutionSkew));
        // (x^2+1)^2 in Sp(4,3): square not hyperbolic
        let hh = Mat::from_i64(f3, &[&[0, 1], &[-1, 0]]);
        let bb = Mat::from_i64(f3, &[&[0, 0], &[1, 0]]);
        let p = SymplecticElement::standard(Mat::block2(&hh, &bb, &Mat::zeros(f3, 2, 2), &hh)).unwrap();
        assert!(sp_inv_skew_cyclic(&p, &b()).is_err());
    }

    #[test]
    fn reversers_of_each_kind() {
        let f3 = f(3);
        let j = Mat::from_i64(f3, &[&[1, 1], &[0, 1]]);
        let phi = conj(&hyperbolic_element(&j).unwrap(), 7);
        for kind in [ProductKind::TwoInvolutions, ProductKind::TwoSkew] {
            let (a, c) = sp_product(&phi, kind, &b()).unwrap().unwrap();
            assert!(verify_product(&phi, &a, &c, kind));
        }
        // a transvection in Sp(2,3) has no skew reverser
        let t = SymplecticElement::standard(j.clone()).unwrap();
        assert!(sp_product(&t, ProductKind::TwoSkew, &b()).unwrap().is_none());
        // cyclic type 2 with irreducible minimal polynomial x^2+1 over GF(7)
        let f7 = f(7);
        let c = Mat::companion(&Poly::from_i64s(f7, &[1, 0, 1]));
        let phi = SymplecticElement::standard(c).unwrap();
        let (a, e) = sp_product(&phi, ProductKind::TwoSkew, &b()).unwrap().unwrap();
        assert!(verify_product(&phi, &a, &e, ProductKind::TwoSkew));
    }
}
