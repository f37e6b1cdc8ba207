use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::budget::{Budget, Tri};
use crate::error::{Error, Result};
use crate::linalg::canonical::cyclic_decomposition;
use crate::linalg::mat::is_zero_vec;
use crate::linalg::subspace::cyclic_span;
use crate::linalg::{elementary_divisor_multiplicities, minimal_polynomial, vec_mat, Mat, Subspace, Vector};
use crate::poly::{factorize, Poly};
use crate::scalars::Field;

use super::{random_in, Splitting, SymplecticElement};

/// Seed for the randomized vector searches; results are reproducible.
pub const SEARCH_SEED: u64 = 0x51A7E;
const RANDOM_TRIES: usize = 3000;
const PAIR_TRIES: usize = 200;

/// ker of (p p*)^e(phi) for an irreducible factor p of the minimal
/// polynomial; `partner` is p* when it differs from p.
#[derive(Clone, Debug)]
pub struct Component {
    pub base: Poly,
    pub partner: Option<Poly>,
    pub exponent: usize,
    pub space: Subspace,
}

impl Component {
    pub fn is_self_reciprocal(&self) -> bool {
        self.partner.is_none()
    }
}

fn linear_factors_only(mu: &Poly) -> Result<Vec<(Poly, u32)>> {
    let field = mu.field();
    let mut rest = mu.clone();
    let mut out = Vec::new();
    for c in [field.one(), -field.one()] {
        let l = Poly::linear(&c);
        let mut e = 0;
        while l.divides(&rest) {
            rest = rest.div_exact(&l);
            e += 1;
        }
        if e > 0 {
            out.push((l, e));
        }
    }
    if rest.deg() > 0 {
        return Err(Error::Unsupported(
            "orthogonal splitting over the rationals beyond the factors x-1, x+1".into(),
        ));
    }
    Ok(out)
}

/// Orthogonal primary decomposition along {p, p*} orbits of the irreducible
/// factors of the minimal polynomial.
pub fn primary_components(phi: &SymplecticElement) -> Result<Vec<Component>> {
    let m = phi.matrix();
    let mu = minimal_polynomial(m);
    let factors = if phi.field().is_finite() {
        factorize(&mu)?.factors
    } else {
        linear_factors_only(&mu)?
    };
    let mut used = vec![false; factors.len()];
    let mut out = Vec::new();
    for i in 0..factors.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let (p, e) = &factors[i];
        let pstar = p.reciprocal()?;
        let (partner, poly, exponent) = if &pstar == p {
            (None, p.pow(*e as usize), *e as usize)
        } else {
            let j = factors
                .iter()
                .position(|(q, _)| q == &pstar)
                .ok_or(Error::Inconsistent)?;
            used[j] = true;
            let ej = factors[j].1;
            (
                Some(pstar.clone()),
                p.pow(*e as usize).mul(&pstar.pow(ej as usize)),
                (*e).max(ej) as usize,
            )
        };
        let space = Subspace::row_space(&m.eval_poly(&poly).left_kernel());
        out.push(Component {
            base: p.clone(),
            partner,
            exponent,
            space,
        });
    }
    Ok(out)
}

/// Smallest k with rows * pm^k = 0.
fn exponent_of(rows: &Mat, pm: &Mat) -> usize {
    let mut cur = rows.clone();
    let mut k = 0;
    while !cur.is_zero() {
        cur = cur.mul(pm);
        k += 1;
    }
    k
}

fn embed(local: &Subspace, basis: &Mat) -> Subspace {
    Subspace::row_space(&local.basis().mul(basis))
}

/// Deterministic candidate stream: basis rows first, then seeded random
/// combinations.
struct Searcher<'a> {
    rng: ChaCha8Rng,
    budget: &'a Budget,
}

impl<'a> Searcher<'a> {
    fn new(budget: &'a Budget) -> Searcher<'a> {
        Searcher {
            rng: ChaCha8Rng::seed_from_u64(SEARCH_SEED),
            budget,
        }
    }

    fn find<F: FnMut(&Vector) -> bool>(&mut self, r: &Mat, tries: usize, mut accept: F) -> Option<Vector> {
        for i in 0..r.rows() {
            if !self.budget.spend(1) {
                return None;
            }
            let v = r.row(i);
            if accept(&v) {
                return Some(v);
            }
        }
        for _ in 0..tries {
            if !self.budget.spend(1) {
                return None;
            }
            let v = random_in(r, &mut self.rng);
            if !is_zero_vec(&v) && accept(&v) {
                return Some(v);
            }
        }
        None
    }

    /// Pair (u, w) with both accepted individually and jointly.
    fn find_pair<A, B, C>(&mut self, ru: &Mat, rw: &Mat, mut ok_u: A, mut ok_w: B, mut ok: C) -> Option<(Vector, Vector)>
    where
        A: FnMut(&Vector) -> bool,
        B: FnMut(&Vector) -> bool,
        C: FnMut(&Vector, &Vector) -> bool,
    {
        for _ in 0..RANDOM_TRIES / 10 {
            let u = self.find(ru, RANDOM_TRIES, &mut ok_u)?;
            let found = self.find(rw, PAIR_TRIES, |w| ok_w(w) && ok(&u, w));
            if let Some(w) = found {
                return Some((u, w));
            }
            if self.budget.exhausted() {
                return None;
            }
            // fresh u on the next round comes from the random stream
        }
        None
    }
}

/// Huppert's types of orthogonally indecomposable pieces, plus hyperbolic
/// planes on which phi = +-1 (decomposable, kept as a separate tag).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceKind {
    /// bicyclic, elementary divisors (x +- 1)^m twice
    Bicyclic,
    /// indecomposable in GL
    Indecomposable,
    /// cyclic with minimal polynomial (p p*)^t, p prime to p*
    Paired,
    /// hyperbolic plane on which phi acts as +-1
    Plane,
}

impl PieceKind {
    pub fn type_number(self) -> Option<u8> {
        match self {
            PieceKind::Bicyclic => Some(1),
            PieceKind::Indecomposable => Some(2),
            PieceKind::Paired => Some(3),
            PieceKind::Plane => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PieceKind::Bicyclic => "type1",
            PieceKind::Indecomposable => "type2",
            PieceKind::Paired => "type3",
            PieceKind::Plane => "plane",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Piece {
    pub subspace: Subspace,
    pub element: SymplecticElement,
    pub kind: PieceKind,
    pub base: Poly,
    pub exponent: usize,
}

#[derive(Clone, Debug)]
pub struct OrthogonalDecomposition {
    pub pieces: Vec<Piece>,
}

impl OrthogonalDecomposition {
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.pieces
                .iter()
                .map(|p| {
                    json!({
                        "kind": p.kind.name(),
                        "base": p.base.to_string(),
                        "exponent": p.exponent,
                        "dim": p.subspace.dim(),
                        "basis": p.subspace.basis().to_json()["rows"],
                    })
                })
                .collect(),
        )
    }

    /// Pairwise orthogonal, spanning, regular, invariant.
    pub fn is_valid(&self, phi: &SymplecticElement) -> bool {
        let g = phi.gram();
        let total: usize = self.pieces.iter().map(|p| p.subspace.dim()).sum();
        let mut sum = Subspace::zero(phi.field(), phi.dim());
        for (i, p) in self.pieces.iter().enumerate() {
            if !p.subspace.is_invariant(phi.matrix()) || !p.subspace.is_regular(g) {
                return false;
            }
            for q in &self.pieces[i + 1..] {
                if !p.subspace.basis().mul(g).mul(&q.subspace.basis().transpose()).is_zero() {
                    return false;
                }
            }
            sum = sum.sum(&p.subspace);
        }
        total == phi.dim() && sum.dim() == phi.dim()
    }
}

/// Greedy extraction of regular cyclic or bicyclic pieces of maximal
/// exponent inside each primary component.
pub fn orthogonal_decomposition(phi: &SymplecticElement, budget: &Budget) -> Result<OrthogonalDecomposition> {
    let mut searcher = Searcher::new(budget);
    let mut pieces = Vec::new();
    for comp in primary_components(phi)? {
        let (loc, basis) = localize(phi, &comp.space)?;
        for (sub, kind, exponent) in decompose_local(&loc, &comp, &mut searcher)? {
            let subspace = embed(&sub, &basis);
            let element = phi.restrict(&subspace)?;
            pieces.push(Piece {
                subspace,
                element,
                kind,
                base: comp.base.clone(),
                exponent,
            });
        }
    }
    Ok(OrthogonalDecomposition { pieces })
}

fn localize(phi: &SymplecticElement, space: &Subspace) -> Result<(SymplecticElement, Mat)> {
    Ok((phi.restrict(space)?, space.basis().clone()))
}

fn kernel_of(m: &Mat, p: &Poly, e: usize) -> Subspace {
    Subspace::row_space(&m.eval_poly(&p.pow(e)).left_kernel())
}

fn decompose_local(
    loc: &SymplecticElement,
    comp: &Component,
    s: &mut Searcher,
) -> Result<Vec<(Subspace, PieceKind, usize)>> {
    let field = loc.field();
    let m = loc.matrix();
    let g = loc.gram();
    let pm = m.eval_poly(&comp.base);
    let mut rest = Subspace::whole(field, loc.dim());
    let mut out = Vec::new();
    let budget_err = || Error::Budget("orthogonal decomposition search".into());
    while rest.dim() > 0 {
        let piece;
        let kind;
        let t;
        match &comp.partner {
            None => {
                t = exponent_of(rest.basis(), &pm);
                let top = pm.pow(t - 1);
                let full = |v: &Vector| !is_zero_vec(&vec_mat(v, &top));
                if comp.base.deg() == 1 && t % 2 == 1 {
                    let (u, w) = s
                        .find_pair(rest.basis(), rest.basis(), full, full, |u, w| {
                            let span = cyclic_span(u, m).sum(&cyclic_span(w, m));
                            span.dim() == 2 * t && span.is_regular(g)
                        })
                        .ok_or_else(budget_err)?;
                    piece = cyclic_span(&u, m).sum(&cyclic_span(&w, m));
                    kind = if t == 1 { PieceKind::Plane } else { PieceKind::Bicyclic };
                } else {
                    let u = s
                        .find(rest.basis(), RANDOM_TRIES, |v| full(v) && cyclic_span(v, m).is_regular(g))
                        .ok_or_else(budget_err)?;
                    piece = cyclic_span(&u, m);
                    kind = PieceKind::Indecomposable;
                }
            }
            Some(pstar) => {
                let qm = m.eval_poly(pstar);
                let x = kernel_of(m, &comp.base, comp.exponent).intersect(&rest);
                let y = kernel_of(m, pstar, comp.exponent).intersect(&rest);
                t = exponent_of(x.basis(), &pm);
                let top_p = pm.pow(t - 1);
                let top_q = qm.pow(t - 1);
                let (u, w) = s
                    .find_pair(
                        x.basis(),
                        y.basis(),
                        |v| !is_zero_vec(&vec_mat(v, &top_p)),
                        |v| !is_zero_vec(&vec_mat(v, &top_q)),
                        |u, w| cyclic_span(u, m).sum(&cyclic_span(w, m)).is_regular(g),
                    )
                    .ok_or_else(budget_err)?;
                piece = cyclic_span(&u, m).sum(&cyclic_span(&w, m));
                kind = PieceKind::Paired;
            }
        }
        rest = rest.intersect(&piece.perp(g));
        out.push((piece, kind, t));
    }
    Ok(out)
}

/// Outcome of a hyperbolicity test.
#[derive(Clone, Debug)]
pub struct HyperbolicReport {
    pub status: Tri,
    pub splitting: Option<Splitting>,
    pub method: &'static str,
}

/// Elementary divisors p^t with p = p* must have even multiplicity.
fn self_reciprocal_parity_ok(phi: &SymplecticElement, comps: &[Component]) -> bool {
    comps.iter().filter(|c| c.is_self_reciprocal()).all(|c| {
        elementary_divisor_multiplicities(phi.matrix(), &c.base)
            .iter()
            .all(|(_, mult)| mult % 2 == 0)
    })
}

/// Greedy isotropic pair extraction on a self-reciprocal component.
fn constructive_split_local(loc: &SymplecticElement, base: &Poly, s: &mut Searcher) -> Option<(Subspace, Subspace)> {
    let field = loc.field();
    let m = loc.matrix();
    let g = loc.gram();
    let pm = m.eval_poly(base);
    let mut rest = Subspace::whole(field, loc.dim());
    let mut l1 = Subspace::zero(field, loc.dim());
    let mut l2 = l1.clone();
    while rest.dim() > 0 {
        let t = exponent_of(rest.basis(), &pm);
        let top = pm.pow(t - 1);
        let ok = |v: &Vector| !is_zero_vec(&vec_mat(v, &top)) && cyclic_span(v, m).is_totally_isotropic(g);
        let (u, w) = s.find_pair(rest.basis(), rest.basis(), ok, ok, |u, w| {
            let (cu, cw) = (cyclic_span(u, m), cyclic_span(w, m));
            let sum = cu.sum(&cw);
            sum.dim() == cu.dim() + cw.dim() && sum.is_regular(g)
        })?;
        let (cu, cw) = (cyclic_span(&u, m), cyclic_span(&w, m));
        rest = rest.intersect(&cu.sum(&cw).perp(g));
        l1 = l1.sum(&cu);
        l2 = l2.sum(&cw);
    }
    Some((l1, l2))
}

/// Exhaustive dimension/field bounds for the subspace search.
pub const EXHAUSTIVE_MAX_DIM: usize = 6;
pub const EXHAUSTIVE_MAX_Q: u64 = 7;

fn exhaustive_allowed(field: Field, dim: usize) -> bool {
    matches!(field.modulus(), Some(q) if q <= EXHAUSTIVE_MAX_Q) && dim <= EXHAUSTIVE_MAX_DIM
}

fn all_vectors(field: Field, dim: usize) -> impl Iterator<Item = Vector> {
    let q = field.modulus().expect("prime field") as usize;
    let total = q.pow(dim as u32);
    (1..total).map(move |mut idx| {
        (0..dim)
            .map(|_| {
                let c = idx % q;
                idx /= q;
                field.from_i64(c as i64)
            })
            .collect()
    })
}

/// All invariant Lagrangian subspaces; `None` when the budget runs out.
pub fn invariant_lagrangians(phi: &SymplecticElement, budget: &Budget) -> Option<Vec<Subspace>> {
    let field = phi.field();
    let dim = phi.dim();
    let m = phi.matrix();
    let g = phi.gram();
    let mut cyclic: HashSet<Subspace> = HashSet::new();
    for v in all_vectors(field, dim) {
        if !budget.spend(1) {
            return None;
        }
        let c = cyclic_span(&v, m);
        if c.dim() <= dim / 2 && c.is_totally_isotropic(g) {
            cyclic.insert(c);
        }
    }
    let cyclic: Vec<Subspace> = cyclic.into_iter().collect();
    let mut seen: HashSet<Subspace> = HashSet::new();
    let mut frontier = vec![Subspace::zero(field, dim)];
    let mut lagrangians = Vec::new();
    if dim == 0 {
        return Some(frontier);
    }
    while let Some(s) = frontier.pop() {
        let perp = s.perp(g);
        for c in &cyclic {
            if !budget.spend(1) {
                return None;
            }
            if s.contains_space(c) || !perp.contains_space(c) {
                continue;
            }
            let t = s.sum(c);
            if seen.insert(t.clone()) {
                if t.dim() == dim / 2 {
                    lagrangians.push(t);
                } else {
                    frontier.push(t);
                }
            }
        }
    }
    lagrangians.sort_by(|a, b| a.basis().entries().cmp_by_key(b.basis().entries()));
    Some(lagrangians)
}

trait CmpEntries {
    fn cmp_by_key(&self, other: &Self) -> std::cmp::Ordering;
}

impl CmpEntries for [crate::scalars::Scalar] {
    fn cmp_by_key(&self, other: &Self) -> std::cmp::Ordering {
        let key = |s: &[crate::scalars::Scalar]| s.iter().map(|x| x.residue().unwrap_or(0)).collect::<Vec<_>>();
        key(self).cmp(&key(other))
    }
}

/// Exhaustive search for an invariant Lagrangian splitting of a local
/// element. Outer `None` means the budget ran out.
fn exhaustive_split_local(loc: &SymplecticElement, budget: &Budget) -> Option<Option<(Subspace, Subspace)>> {
    let lags = invariant_lagrangians(loc, budget)?;
    for (i, a) in lags.iter().enumerate() {
        for b in &lags[i + 1..] {
            if !budget.spend(1) {
                return None;
            }
            if a.intersect(b).dim() == 0 {
                return Some(Some((a.clone(), b.clone())));
            }
        }
    }
    if loc.dim() == 0 {
        let z = Subspace::zero(loc.field(), 0);
        return Some(Some((z.clone(), z)));
    }
    Some(None)
}

/// Splitting of one self-reciprocal component: constructive, then
/// exhaustive within bounds.
fn split_self_reciprocal(
    loc: &SymplecticElement,
    comp: &Component,
    s: &mut Searcher,
    budget: &Budget,
) -> (Tri, Option<(Subspace, Subspace)>, &'static str) {
    if let Some(pair) = constructive_split_local(loc, &comp.base, s) {
        return (Tri::True, Some(pair), "constructive");
    }
    if exhaustive_allowed(loc.field(), loc.dim()) {
        let fresh = Budget::new(budget.limit().saturating_sub(budget.used()));
        return match exhaustive_split_local(loc, &fresh) {
            Some(Some(pair)) => (Tri::True, Some(pair), "exhaustive"),
            Some(None) => (Tri::False, None, "exhaustive"),
            None => (Tri::Unknown, None, "budget"),
        };
    }
    (Tri::Unknown, None, "budget")
}

/// Splitting of a non-self-reciprocal component into ker p^e + ker p*^e, or
/// (`balanced`) into halves whose blocks are similar to their inverses.
fn split_paired(loc: &SymplecticElement, comp: &Component, balanced: bool) -> Option<(Subspace, Subspace)> {
    let m = loc.matrix();
    let g = loc.gram();
    let pstar = comp.partner.as_ref().expect("paired component");
    let x = kernel_of(m, &comp.base, comp.exponent);
    let y = kernel_of(m, pstar, comp.exponent);
    if !balanced {
        return Some((x, y));
    }
    let (xloc, xb) = (x.restriction(m), x.basis().clone());
    let dec = cyclic_decomposition(&xloc);
    let mut groups: Vec<(Poly, Vec<Subspace>)> = Vec::new();
    for b in &dec.blocks {
        let gen = vec_mat(&b.generator, &xb);
        let span = cyclic_span(&gen, m);
        match groups.iter_mut().find(|(p, _)| p == &b.poly) {
            Some((_, v)) => v.push(span),
            None => groups.push((b.poly.clone(), vec![span])),
        }
    }
    let field = loc.field();
    let mut x1 = Subspace::zero(field, loc.dim());
    let mut x2 = x1.clone();
    for (_, spans) in &groups {
        if spans.len() % 2 == 1 {
            return None;
        }
        let h = spans.len() / 2;
        for s in &spans[..h] {
            x1 = x1.sum(s);
        }
        for s in &spans[h..] {
            x2 = x2.sum(s);
        }
    }
    let l1 = x1.sum(&x1.perp(g).intersect(&y));
    let l2 = x2.sum(&x2.perp(g).intersect(&y));
    Some((l1, l2))
}

fn assemble_splitting(phi: &SymplecticElement, parts: &[(Subspace, Subspace)]) -> Splitting {
    let zero = Subspace::zero(phi.field(), phi.dim());
    let (l1, l2) = parts
        .iter()
        .fold((zero.clone(), zero), |(a, b), (x, y)| (a.sum(x), b.sum(y)));
    Splitting { l1, l2 }
}

/// V = L1 + L2 with L1, L2 invariant and totally isotropic.
/// Necessary condition first, then a constructive search, then an
/// exhaustive subspace search on small components.
pub fn is_hyperbolic(phi: &SymplecticElement, budget: &Budget) -> HyperbolicReport {
    splitting_search(phi, budget, false)
}

/// Invariant Lagrangian splitting whose block A is similar to A^-1.
pub fn reversible_splitting(phi: &SymplecticElement, budget: &Budget) -> HyperbolicReport {
    splitting_search(phi, budget, true)
}

fn splitting_search(phi: &SymplecticElement, budget: &Budget, balanced: bool) -> HyperbolicReport {
    let unknown = |method| HyperbolicReport {
        status: Tri::Unknown,
        splitting: None,
        method,
    };
    let comps = match primary_components(phi) {
        Ok(c) => c,
        Err(_) => return unknown("unsupported"),
    };
    let false_by = |method| HyperbolicReport {
        status: Tri::False,
        splitting: None,
        method,
    };
    if !self_reciprocal_parity_ok(phi, &comps) {
        return false_by("necessary_condition");
    }
    let mut searcher = Searcher::new(budget);
    let mut parts = Vec::new();
    let mut method = "constructive";
    for comp in &comps {
        let (loc, basis) = match localize(phi, &comp.space) {
            Ok(x) => x,
            Err(_) => return unknown("unsupported"),
        };
        let local_pair = if comp.is_self_reciprocal() {
            let (status, pair, how) = split_self_reciprocal(&loc, comp, &mut searcher, budget);
            if how == "exhaustive" {
                method = "exhaustive";
            }
            match status {
                Tri::True => pair.expect("splitting"),
                Tri::False => return false_by("exhaustive"),
                Tri::Unknown => return unknown("budget"),
            }
        } else {
            match split_paired(&loc, comp, balanced) {
                Some(pair) => pair,
                None => return false_by("necessary_condition"),
            }
        };
        parts.push((embed(&local_pair.0, &basis), embed(&local_pair.1, &basis)));
    }
    let splitting = assemble_splitting(phi, &parts);
    debug_assert!(splitting.is_valid(phi));
    HyperbolicReport {
        status: Tri::True,
        splitting: Some(splitting),
        method,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_similar;
    use crate::symplectic::{hyperbolic_element, random_symplectic, SymplecticSpace};
    use rand::SeedableRng;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn conj(phi: &SymplecticElement, seed: u64) -> SymplecticElement {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha = random_symplectic(phi.space(), &mut rng, 3 * phi.dim());
        phi.conjugate(&alpha).unwrap()
    }

    #[test]
    fn identity_splits_into_planes() {
        let sp = SymplecticSpace::standard(f(3), 4).unwrap();
        let id = SymplecticElement::identity(&sp);
        let d = orthogonal_decomposition(&id, &Budget::default()).unwrap();
        assert_eq!(d.pieces.len(), 2);
        assert!(d.pieces.iter().all(|p| p.kind == PieceKind::Plane));
        assert!(d.is_valid(&id));
    }

    #[test]
    fn decomposition_pieces_are_valid() {
        let f3 = f(3);
        let j = Mat::from_i64(f3, &[&[1, 1], &[0, 1]]);
        let phi = conj(&hyperbolic_element(&j).unwrap(), 3);
        let d = orthogonal_decomposition(&phi, &Budget::default()).unwrap();
        assert!(d.is_valid(&phi));
        for p in &d.pieces {
            assert!(p.kind != PieceKind::Bicyclic || p.subspace.dim() % 4 == 2);
        }
        let f7 = f(7);
        let a = Mat::from_i64(f7, &[&[2, 1, 0], &[0, 2, 0], &[0, 0, 3]]);
        let phi = conj(&hyperbolic_element(&a).unwrap(), 4);
        let d = orthogonal_decomposition(&phi, &Budget::default()).unwrap();
        assert!(d.is_valid(&phi));
        assert!(d.pieces.iter().all(|p| p.kind == PieceKind::Paired));
    }

    #[test]
    fn hyperbolic_examples() {
        let f5 = f(5);
        let a = Mat::from_i64(f5, &[&[2, 1], &[0, 2]]);
        let phi = hyperbolic_element(&a).unwrap();
        let r = is_hyperbolic(&phi, &Budget::default());
        assert_eq!(r.status, Tri::True);
        assert!(r.splitting.unwrap().is_valid(&phi));
        let psi = conj(&phi, 9);
        let r = reversible_splitting(&psi, &Budget::default());
        // blocks 2 (twice as a Jordan block) and 1/2: not balanced
        assert_eq!(r.status, Tri::False);

        let f3 = f(3);
        let t = SymplecticElement::standard(Mat::from_i64(f3, &[&[1, 1], &[0, 1]])).unwrap();
        assert_eq!(is_hyperbolic(&t, &Budget::default()).status, Tri::False);

        let j = Mat::from_i64(f3, &[&[1, 1], &[0, 1]]);
        let phi = conj(&hyperbolic_element(&j).unwrap(), 11);
        let r = reversible_splitting(&phi, &Budget::default());
        assert_eq!(r.status, Tri::True);
        let s = r.splitting.unwrap();
        assert!(s.is_valid(&phi));
        let (_, blk) = s.block(&phi).unwrap();
        assert!(is_similar(&blk, &blk.inv().unwrap()).unwrap());
    }

    #[test]
    fn exhaustive_agrees_on_small_cases() {
        let f3 = f(3);
        // cyclic with minimal polynomial (x^2+1)^2: square is not hyperbolic
        let h = Mat::from_i64(f3, &[&[0, 1], &[-1, 0]]);
        let b = Mat::from_i64(f3, &[&[0, 0], &[1, 0]]);
        let p = Mat::block2(&h, &b, &Mat::zeros(f3, 2, 2), &h);
        let phi = SymplecticElement::standard(p).unwrap();
        assert!(is_hyperbolic(&phi, &Budget::default()).status.is_false());
        let sq = phi.square();
        assert_eq!(is_hyperbolic(&sq, &Budget::default()).status, Tri::False);
        let id = SymplecticElement::identity(&SymplecticSpace::standard(f3, 4).unwrap());
        let lags = invariant_lagrangians(&id, &Budget::default()).unwrap();
        assert_eq!(lags.len(), 40);
    }
}
