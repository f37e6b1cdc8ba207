use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::linalg::mat::is_zero_vec;
use crate::linalg::subspace::{cyclic_span, fix, neg};
use crate::linalg::{bilinear, vec_mat, Mat, Subspace, Vector};

use super::decompose::primary_components;
use super::{random_in, SymplecticElement};

/// One summand V_i = U_i + W_i.
#[derive(Clone, Debug)]
pub struct SympinvPair {
    pub u: Subspace,
    pub w: Subspace,
}

impl SympinvPair {
    pub fn span(&self) -> Subspace {
        self.u.sum(&self.w)
    }
}

fn candidates<'a>(
    pools: &'a [Subspace],
    rng: &'a mut ChaCha8Rng,
    budget: &'a Budget,
    tries: usize,
) -> impl Iterator<Item = Vector> + 'a {
    let firsts: Vec<Vector> = pools.iter().flat_map(|p| p.basis().row_vectors()).collect();
    let nonempty: Vec<&Subspace> = pools.iter().filter(|p| p.dim() > 0).collect();
    let randoms = (0..tries).filter_map(move |i| {
        let p = nonempty.get(i % nonempty.len().max(1))?;
        Some(random_in(p.basis(), rng))
    });
    firsts
        .into_iter()
        .chain(randoms)
        .take_while(move |_| budget.spend(1))
        .filter(|v| !is_zero_vec(v))
}

/// Orthogonal decomposition into <phi, sigma>-invariant regular pieces
/// U + W with U, W totally isotropic, phi-cyclic and sigma-invariant, for an
/// involution sigma in Sp inverting phi.
pub fn sympinv_decomposition(
    phi: &SymplecticElement,
    sigma: &SymplecticElement,
    budget: &Budget,
) -> Result<Vec<SympinvPair>> {
    let m = phi.matrix();
    let s = sigma.matrix();
    let field = phi.field();
    let n = phi.dim();
    if s.mul(s) != Mat::identity(field, n) {
        return Err(Error::Precondition("sigma is not an involution".into()));
    }
    if s.mul(m).mul(s) != phi.inverse().matrix().clone() {
        return Err(Error::Precondition("sigma does not invert phi".into()));
    }
    let g = phi.gram();
    let fix_s = fix(s, 1);
    let neg_s = neg(s, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let mut out = Vec::new();
    for comp in primary_components(phi)? {
        let pm = m.eval_poly(&comp.base);
        let qm = comp.partner.as_ref().map(|q| m.eval_poly(q));
        let mut rest = comp.space.clone();
        while rest.dim() > 0 {
            let pools = [rest.intersect(&fix_s), rest.intersect(&neg_s)];
            let img_p = rest.image(&pm);
            let img_q = qm.as_ref().map(|q| rest.image(q));
            let avoid = |u: &Vector| !img_p.contains(u) && img_q.as_ref().is_none_or(|q| !q.contains(u));
            let u = candidates(&pools, &mut rng, budget, 2000)
                .find(avoid)
                .ok_or_else(|| Error::Budget("sympinv generator u".into()))?;
            let uspan = cyclic_span(&u, m);
            // u p(phi)^(t-1) and u p*(phi)^(t-1), t the exponent of p on rest
            let x = Subspace::row_space(&pm.pow(comp.exponent).left_kernel()).intersect(&rest);
            let mut t = 0;
            let mut cur = x.basis().clone();
            while !cur.is_zero() {
                cur = cur.mul(&pm);
                t += 1;
            }
            let up = vec_mat(&u, &pm.pow(t.max(1) - 1));
            let uq = qm.as_ref().map(|q| vec_mat(&u, &q.pow(t.max(1) - 1)));
            let pools = [rest.intersect(&fix_s), rest.intersect(&neg_s)];
            let good = |w: &Vector| {
                if bilinear(&up, g, w).is_zero() || uq.as_ref().is_some_and(|x| bilinear(x, g, w).is_zero()) {
                    return false;
                }
                let wspan = cyclic_span(w, m);
                let sum = uspan.sum(&wspan);
                sum.dim() == uspan.dim() + wspan.dim() && sum.is_regular(g)
            };
            let w = candidates(&pools, &mut rng, budget, 2000)
                .find(good)
                .ok_or_else(|| Error::Budget("sympinv partner w".into()))?;
            let wspan = cyclic_span(&w, m);
            let pair = SympinvPair { u: uspan, w: wspan };
            rest = rest.intersect(&pair.span().perp(g));
            out.push(pair);
        }
    }
    Ok(out)
}

/// The properties of each pair, plus orthogonality and spanning.
pub fn sympinv_violations(phi: &SymplecticElement, sigma: &SymplecticElement, pairs: &[SympinvPair]) -> Vec<String> {
    let m = phi.matrix();
    let s = sigma.matrix();
    let g = phi.gram();
    let mut bad = Vec::new();
    let mut total = Subspace::zero(phi.field(), phi.dim());
    for (i, p) in pairs.iter().enumerate() {
        for (name, x) in [("U", &p.u), ("W", &p.w)] {
            if !x.is_totally_isotropic(g) {
                bad.push(format!("{name}{i} not totally isotropic"));
            }
            if !x.is_invariant(s) || !x.is_invariant(m) {
                bad.push(format!("{name}{i} not invariant"));
            }
        }
        if !p.span().is_regular(g) || p.span().dim() != p.u.dim() + p.w.dim() {
            bad.push(format!("V{i} not a regular direct sum"));
        }
        for q in &pairs[i + 1..] {
            if !p.span().basis().mul(g).mul(&q.span().basis().transpose()).is_zero() {
                bad.push(format!("V{i} not orthogonal to a later summand"));
            }
        }
        total = total.sum(&p.span());
    }
    if total.dim() != phi.dim() {
        bad.push("summands do not span".into());
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Field;
    use crate::symplectic::factor::{sp_reverser, ProductKind};
    use crate::symplectic::{hyperbolic_element, SymplecticSpace};

    #[test]
    fn identity_gives_line_pairs() {
        let f3 = Field::prime(3).unwrap();
        let sp = SymplecticSpace::standard(f3, 4).unwrap();
        let id = SymplecticElement::identity(&sp);
        let pairs = sympinv_decomposition(&id, &id, &Budget::default()).unwrap();
        assert_eq!(pairs.len(), 2);
        assert!(pairs.iter().all(|p| p.u.dim() == 1 && p.w.dim() == 1));
        assert!(sympinv_violations(&id, &id, &pairs).is_empty());
    }

    #[test]
    fn reversible_elements() {
        let f7 = Field::prime(7).unwrap();
        let b = Budget::default();
        let cases = [
            SymplecticElement::standard(Mat::from_i64(f7, &[&[-1, 0], &[0, -1]])).unwrap(),
            hyperbolic_element(&Mat::from_i64(f7, &[&[2, 0], &[0, 4]])).unwrap(),
            hyperbolic_element(&Mat::from_i64(f7, &[&[1, 1], &[0, 1]])).unwrap(),
            hyperbolic_element(&Mat::from_i64(f7, &[&[3, 0], &[0, 5]])).unwrap(),
        ];
        for (i, phi) in cases.into_iter().enumerate() {
            let r = sp_reverser(&phi, ProductKind::TwoInvolutions, &b)
                .unwrap()
                .unwrap_or_else(|| panic!("case {i}"));
            let sigma = SymplecticElement::new(r, phi.space().clone()).unwrap();
            let pairs = sympinv_decomposition(&phi, &sigma, &b).unwrap();
            assert!(sympinv_violations(&phi, &sigma, &pairs).is_empty());
            if phi.dim() == 2 {
                assert_eq!(pairs.len(), 1);
            }
        }
    }
}
