//! Decision procedures for products of two involutions, two
//! skew-involutions, and an involution times a skew-involution in Sp, with
//! witnesses that re-multiply exactly.

use serde_json::{json, Value};

use crate::budget::{Budget, Tri, DEFAULT_BUDGET};
use crate::linalg::{elementary_divisor_multiplicities, invariant_factors, is_similar, Mat, SimilarityInvariants};
use crate::poly::Poly;
use crate::symplectic::factor::{
    sp_inverse_conjugacy_exhaustive, sp_neg_inverse_conjugator, sp_product, sp_reversal_conjugator, verify_product, ProductKind,
};
use crate::symplectic::{is_symplectic, reversible_splitting, sp_two_involutions_hyperbolic, SymplecticElement};

/// Ground truth for small groups, injected by the caller.
pub trait Oracle: Sync {
    /// `None` when phi lies outside the oracle's group; otherwise a
    /// factorization phi = a b of the given kind, if one exists.
    fn product(&self, phi: &Mat, kind: ProductKind) -> Option<Option<(Mat, Mat)>>;
    /// `None` when outside the group; otherwise alpha with alpha^-1 phi alpha = psi.
    fn conjugate(&self, phi: &Mat, psi: &Mat) -> Option<Option<Mat>>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Criterion,
    Oracle,
    Witness,
    Exhaustive,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Criterion => "criterion",
            Method::Oracle => "oracle",
            Method::Witness => "witness",
            Method::Exhaustive => "exhaustive",
        }
    }
}

/// Group in which conjugacy or membership was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ambient {
    Gl,
    Sp,
}

impl Ambient {
    pub fn as_str(self) -> &'static str {
        match self {
            Ambient::Gl => "GL",
            Ambient::Sp => "Sp",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    TwoInvolutions,
    TwoSkewInvolutions,
    InvolutionSkew,
    /// alpha^-1 phi alpha = phi^-1
    Reverser,
    /// alpha^-1 phi alpha = -phi^-1
    NegInverseConjugator,
}

impl WitnessKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessKind::TwoInvolutions => "two_involutions",
            WitnessKind::TwoSkewInvolutions => "two_skew_involutions",
            WitnessKind::InvolutionSkew => "involution_skew",
            WitnessKind::Reverser => "reverser",
            WitnessKind::NegInverseConjugator => "neg_inverse_conjugator",
        }
    }

    fn from_product(kind: ProductKind) -> WitnessKind {
        match kind {
            ProductKind::TwoInvolutions => WitnessKind::TwoInvolutions,
            ProductKind::TwoSkew => WitnessKind::TwoSkewInvolutions,
            ProductKind::InvolutionSkew => WitnessKind::InvolutionSkew,
        }
    }

    fn product_kind(self) -> Option<ProductKind> {
        match self {
            WitnessKind::TwoInvolutions => Some(ProductKind::TwoInvolutions),
            WitnessKind::TwoSkewInvolutions => Some(ProductKind::TwoSkew),
            WitnessKind::InvolutionSkew => Some(ProductKind::InvolutionSkew),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub kind: WitnessKind,
    pub factors: Vec<Mat>,
    pub conjugator: Option<Mat>,
}

impl Witness {
    pub fn product(kind: ProductKind, a: Mat, b: Mat) -> Witness {
        Witness {
            kind: WitnessKind::from_product(kind),
            factors: vec![a, b],
            conjugator: None,
        }
    }

    pub fn conjugation(kind: WitnessKind, alpha: Mat) -> Witness {
        Witness {
            kind,
            factors: Vec::new(),
            conjugator: Some(alpha),
        }
    }

    /// Exact re-check: product and squares, or the conjugation identity,
    /// with every matrix in Sp.
    pub fn verify(&self, phi: &SymplecticElement) -> bool {
        if let Some(kind) = self.kind.product_kind() {
            return self.factors.len() == 2 && verify_product(phi, &self.factors[0], &self.factors[1], kind);
        }
        let Some(alpha) = &self.conjugator else {
            return false;
        };
        let mut target = phi.inverse().matrix().clone();
        if self.kind == WitnessKind::NegInverseConjugator {
            target = target.neg();
        }
        is_symplectic(alpha, phi.space()).unwrap_or(false) && phi.matrix().mul(alpha) == alpha.mul(&target)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "kind": self.kind.as_str() });
        if !self.factors.is_empty() {
            v["factors"] = Value::Array(self.factors.iter().map(|m| m.to_json()["rows"].clone()).collect());
        }
        if let Some(c) = &self.conjugator {
            v["conjugator"] = c.to_json()["rows"].clone();
        }
        v
    }

    pub fn from_json(field: crate::Field, v: &Value) -> crate::Result<Witness> {
        let kind = match v["kind"].as_str() {
            Some("two_involutions") => WitnessKind::TwoInvolutions,
            Some("two_skew_involutions") => WitnessKind::TwoSkewInvolutions,
            Some("involution_skew") => WitnessKind::InvolutionSkew,
            Some("reverser") => WitnessKind::Reverser,
            Some("neg_inverse_conjugator") => WitnessKind::NegInverseConjugator,
            _ => return Err(crate::Error::Parse("unknown witness kind".into())),
        };
        let factors = match v.get("factors") {
            Some(Value::Array(fs)) => fs
                .iter()
                .map(|f| Mat::from_json_rows(field, f))
                .collect::<crate::Result<Vec<_>>>()?,
            _ => Vec::new(),
        };
        let conjugator = match v.get("conjugator") {
            Some(c) => Some(Mat::from_json_rows(field, c)?),
            None => None,
        };
        Ok(Witness {
            kind,
            factors,
            conjugator,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: Tri,
    pub method: Method,
    pub ambient: Ambient,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn new(status: Tri, method: Method, ambient: Ambient) -> Verdict {
        Verdict {
            status,
            method,
            ambient,
            witness: None,
        }
    }

    fn criterion(b: bool, ambient: Ambient) -> Verdict {
        Verdict::new(Tri::from_bool(b), Method::Criterion, ambient)
    }

    fn unknown() -> Verdict {
        Verdict::new(Tri::Unknown, Method::Criterion, Ambient::Sp)
    }

    fn witnessed(w: Witness, method: Method) -> Verdict {
        Verdict {
            status: Tri::True,
            method,
            ambient: Ambient::Sp,
            witness: Some(w),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "status": self.status.as_str(),
            "method": self.method.as_str(),
            "ambient": self.ambient.as_str(),
            "witness": self.witness.as_ref().map(|w| w.to_json()),
        })
    }
}

/// Budget and optional oracle shared by the procedures.
#[derive(Clone, Copy)]
pub struct Classifier<'a> {
    pub budget: u64,
    pub oracle: Option<&'a dyn Oracle>,
}

impl Default for Classifier<'_> {
    fn default() -> Self {
        Classifier {
            budget: DEFAULT_BUDGET,
            oracle: None,
        }
    }
}

fn x2p1(phi: &SymplecticElement) -> Poly {
    Poly::from_i64s(phi.field(), &[1, 0, 1])
}

/// Multiplicities of p^t with t even.
fn even_exponent_mults(phi: &SymplecticElement, p: &Poly) -> Vec<usize> {
    elementary_divisor_multiplicities(phi.matrix(), p)
        .into_iter()
        .filter(|(t, _)| t % 2 == 0)
        .map(|(_, m)| m)
        .collect()
}

fn criterion_field(phi: &SymplecticElement) -> bool {
    phi.field().is_finite() && phi.field().is_three_mod_four()
}

/// Every elementary divisor (x +- 1)^(2t) has even multiplicity.
pub fn plus_minus_one_parity(phi: &SymplecticElement) -> bool {
    let f = phi.field();
    [f.one(), -f.one()]
        .iter()
        .all(|c| even_exponent_mults(phi, &Poly::linear(c)).iter().all(|m| m % 2 == 0))
}

/// Every elementary divisor (x^2 + 1)^(2t) has even multiplicity.
pub fn x2p1_parity(phi: &SymplecticElement) -> bool {
    even_exponent_mults(phi, &x2p1(phi)).iter().all(|m| m % 2 == 0)
}

pub fn gl_reversible(phi: &SymplecticElement) -> bool {
    is_similar(phi.matrix(), phi.inverse().matrix()).unwrap_or(false)
}

pub fn gl_neg_inverse(phi: &SymplecticElement) -> bool {
    is_similar(phi.matrix(), &phi.inverse().matrix().neg()).unwrap_or(false)
}

/// Reversibility criterion for q = 3 mod 4; `None` elsewhere.
pub fn reversibility_criterion(phi: &SymplecticElement) -> Option<bool> {
    criterion_field(phi).then(|| plus_minus_one_parity(phi))
}

fn tri_and(a: Tri, b: Tri) -> Tri {
    if a.is_false() || b.is_false() {
        Tri::False
    } else if a.is_true() && b.is_true() {
        Tri::True
    } else {
        Tri::Unknown
    }
}

/// Involution-times-skew-involution criterion for q = 3 mod 4, given the
/// status of Sp-conjugacy between phi and -phi^-1. GL-similarity is not
/// enough: (x-1)^2 + (x+1)^2 in Sp(4,3) is GL-similar to -phi^-1 but not a
/// product of an involution and a skew-involution.
pub fn inv_skew_criterion(phi: &SymplecticElement, neg_inverse_sp: Tri) -> Option<Tri> {
    criterion_field(phi).then(|| tri_and(neg_inverse_sp, Tri::from_bool(x2p1_parity(phi))))
}

/// Image in PSp reversible but not bireflectional, for q = 3 mod 4:
/// phi Sp-conjugate to -phi^-1, and some (x^2+1)^(2t) and some (x-1)^(2t)
/// have odd multiplicity.
pub fn psp_criterion(phi: &SymplecticElement, neg_inverse_sp: Tri) -> Tri {
    if !criterion_field(phi) {
        return Tri::Unknown;
    }
    let f = phi.field();
    let odd = |p: &Poly| even_exponent_mults(phi, p).iter().any(|m| m % 2 == 1);
    tri_and(neg_inverse_sp, Tri::from_bool(odd(&x2p1(phi)) && odd(&Poly::linear(&f.one()))))
}

impl<'a> Classifier<'a> {
    pub fn new(budget: u64, oracle: Option<&'a dyn Oracle>) -> Classifier<'a> {
        Classifier { budget, oracle }
    }

    fn budget(&self) -> Budget {
        Budget::new(self.budget)
    }

    fn oracle_product(&self, phi: &SymplecticElement, kind: ProductKind) -> Option<Verdict> {
        let oracle = self.oracle.filter(|_| phi.space().is_standard())?;
        let (a, b) = match oracle.product(phi.matrix(), kind)? {
            Some(ab) => ab,
            None => return Some(Verdict::new(Tri::False, Method::Oracle, Ambient::Sp)),
        };
        Some(Verdict::witnessed(Witness::product(kind, a, b), Method::Oracle))
    }

    fn oracle_conjugate(&self, phi: &SymplecticElement, target: &Mat, kind: WitnessKind) -> Option<Verdict> {
        let oracle = self.oracle.filter(|_| phi.space().is_standard())?;
        match oracle.conjugate(phi.matrix(), target)? {
            Some(alpha) => Some(Verdict::witnessed(Witness::conjugation(kind, alpha), Method::Oracle)),
            None => Some(Verdict::new(Tri::False, Method::Oracle, Ambient::Sp)),
        }
    }

    fn constructive_product(&self, phi: &SymplecticElement, kind: ProductKind) -> Option<Verdict> {
        let (a, b) = sp_product(phi, kind, &self.budget()).ok()??;
        let w = Witness::product(kind, a, b);
        w.verify(phi).then(|| Verdict::witnessed(w, Method::Witness))
    }

    /// A criterion verdict of `true` gets a constructive or oracle witness
    /// when one is available.
    fn with_witness(&self, truth: Verdict, found: Option<Verdict>, oracle: impl FnOnce() -> Option<Verdict>) -> Verdict {
        if let Some(v) = found {
            return v;
        }
        match oracle() {
            Some(v) if v.status.is_true() => Verdict {
                method: Method::Criterion,
                ..v
            },
            _ => truth,
        }
    }

    /// Product of two involutions in Sp.
    pub fn is_bireflectional(&self, phi: &SymplecticElement) -> Verdict {
        if !gl_reversible(phi) {
            return Verdict::criterion(false, Ambient::Gl);
        }
        if reversibility_criterion(phi) == Some(false) {
            return Verdict::criterion(false, Ambient::Sp);
        }
        let budget = self.budget();
        let rep = reversible_splitting(phi, &budget);
        match rep.status {
            Tri::True => {
                let split = rep.splitting.expect("splitting");
                if let Ok(Some((a, b))) = sp_two_involutions_hyperbolic(phi, &split) {
                    let w = Witness::product(ProductKind::TwoInvolutions, a, b);
                    if w.verify(phi) {
                        return Verdict::witnessed(w, Method::Witness);
                    }
                }
                self.oracle_product(phi, ProductKind::TwoInvolutions)
                    .unwrap_or_else(|| Verdict::criterion(true, Ambient::Sp))
            }
            Tri::False => Verdict::criterion(false, Ambient::Sp),
            Tri::Unknown => self
                .constructive_product(phi, ProductKind::TwoInvolutions)
                .or_else(|| self.oracle_product(phi, ProductKind::TwoInvolutions))
                .unwrap_or_else(Verdict::unknown),
        }
    }

    /// Product of two skew-involutions in Sp.
    pub fn is_two_skew_product(&self, phi: &SymplecticElement) -> Verdict {
        let kind = ProductKind::TwoSkew;
        if !gl_reversible(phi) {
            return Verdict::criterion(false, Ambient::Gl);
        }
        match reversibility_criterion(phi) {
            Some(false) => Verdict::criterion(false, Ambient::Sp),
            Some(true) => self.with_witness(
                Verdict::criterion(true, Ambient::Sp),
                self.constructive_product(phi, kind),
                || self.oracle_product(phi, kind),
            ),
            None => self
                .constructive_product(phi, kind)
                .or_else(|| self.oracle_product(phi, kind))
                .unwrap_or_else(Verdict::unknown),
        }
    }

    /// Conjugate to its inverse in Sp.
    pub fn is_reversible_sp(&self, phi: &SymplecticElement) -> Verdict {
        if !gl_reversible(phi) {
            return Verdict::criterion(false, Ambient::Gl);
        }
        let found = sp_reversal_conjugator(phi, &self.budget())
            .ok()
            .flatten()
            .map(|a| Verdict::witnessed(Witness::conjugation(WitnessKind::Reverser, a), Method::Witness));
        let inv = phi.inverse().matrix().clone();
        match reversibility_criterion(phi) {
            Some(false) => Verdict::criterion(false, Ambient::Sp),
            Some(true) => self.with_witness(Verdict::criterion(true, Ambient::Sp), found, || {
                self.oracle_conjugate(phi, &inv, WitnessKind::Reverser)
            }),
            None => found
                .or_else(|| self.exhaustive_inverse(phi, false))
                .or_else(|| self.oracle_conjugate(phi, &inv, WitnessKind::Reverser))
                .unwrap_or_else(Verdict::unknown),
        }
    }

    /// Product of an involution and a skew-involution in Sp.
    pub fn is_inv_skew_product(&self, phi: &SymplecticElement) -> Verdict {
        let kind = ProductKind::InvolutionSkew;
        if !gl_neg_inverse(phi) {
            return Verdict::criterion(false, Ambient::Gl);
        }
        match inv_skew_criterion(phi, self.neg_inverse_sp(phi).status) {
            Some(Tri::False) => Verdict::criterion(false, Ambient::Sp),
            Some(Tri::True) => self.with_witness(
                Verdict::criterion(true, Ambient::Sp),
                self.constructive_product(phi, kind),
                || self.oracle_product(phi, kind),
            ),
            _ => self
                .constructive_product(phi, kind)
                .or_else(|| self.oracle_product(phi, kind))
                .unwrap_or_else(Verdict::unknown),
        }
    }

    /// Exhaustive intertwiner enumeration; `None` when out of reach.
    fn exhaustive_inverse(&self, phi: &SymplecticElement, neg: bool) -> Option<Verdict> {
        let kind = if neg { WitnessKind::NegInverseConjugator } else { WitnessKind::Reverser };
        match sp_inverse_conjugacy_exhaustive(phi, neg, &self.budget()) {
            (Tri::True, Some(a)) => Some(Verdict::witnessed(Witness::conjugation(kind, a), Method::Exhaustive)),
            (Tri::False, _) => Some(Verdict::new(Tri::False, Method::Exhaustive, Ambient::Sp)),
            _ => None,
        }
    }

    /// Conjugate to -phi^-1 inside Sp (as opposed to GL).
    pub fn neg_inverse_sp(&self, phi: &SymplecticElement) -> Verdict {
        if !gl_neg_inverse(phi) {
            return Verdict::criterion(false, Ambient::Gl);
        }
        if let Ok(Some(a)) = sp_neg_inverse_conjugator(phi, &self.budget()) {
            return Verdict::witnessed(Witness::conjugation(WitnessKind::NegInverseConjugator, a), Method::Witness);
        }
        let target = phi.inverse().matrix().neg();
        self.exhaustive_inverse(phi, true)
            .or_else(|| self.oracle_conjugate(phi, &target, WitnessKind::NegInverseConjugator))
            .unwrap_or_else(Verdict::unknown)
    }

    pub fn psp_reversible_not_bireflectional(&self, phi: &SymplecticElement) -> Tri {
        if !criterion_field(phi) {
            return Tri::Unknown;
        }
        psp_criterion(phi, self.neg_inverse_sp(phi).status)
    }

    pub fn classify(&self, phi: &SymplecticElement) -> ClassificationReport {
        let neg_inverse_sp = self.neg_inverse_sp(phi);
        ClassificationReport {
            dim: phi.dim(),
            field: phi.field(),
            invariants: invariant_factors(phi.matrix()),
            reversible_gl: gl_reversible(phi),
            reversible_sp: self.is_reversible_sp(phi),
            bireflectional: self.is_bireflectional(phi),
            two_skew: self.is_two_skew_product(phi),
            inv_skew: self.is_inv_skew_product(phi),
            neg_inverse_gl: gl_neg_inverse(phi),
            psp_reversible_not_bireflectional: psp_criterion(phi, neg_inverse_sp.status),
            neg_inverse_sp,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub dim: usize,
    pub field: crate::Field,
    pub invariants: SimilarityInvariants,
    pub reversible_gl: bool,
    pub reversible_sp: Verdict,
    pub bireflectional: Verdict,
    pub two_skew: Verdict,
    pub inv_skew: Verdict,
    pub neg_inverse_gl: bool,
    pub neg_inverse_sp: Verdict,
    pub psp_reversible_not_bireflectional: Tri,
}

impl ClassificationReport {
    pub fn verdicts(&self) -> [(&'static str, &Verdict); 5] {
        [
            ("reversible_sp", &self.reversible_sp),
            ("bireflectional", &self.bireflectional),
            ("two_skew", &self.two_skew),
            ("inv_skew", &self.inv_skew),
            ("neg_inverse_sp", &self.neg_inverse_sp),
        ]
    }

    /// Every true verdict with a witness re-verifies, and the implications
    /// bireflectional => reversible and two_skew => reversible hold.
    pub fn consistency_violations(&self, phi: &SymplecticElement) -> Vec<String> {
        let mut bad = Vec::new();
        for (name, v) in self.verdicts() {
            if let Some(w) = &v.witness {
                if !w.verify(phi) {
                    bad.push(format!("{name}: witness fails"));
                }
            }
        }
        for (name, v) in [("bireflectional", &self.bireflectional), ("two_skew", &self.two_skew)] {
            if v.status.is_true() && self.reversible_sp.status.is_false() {
                bad.push(format!("{name} true but not reversible"));
            }
        }
        if self.reversible_sp.status.is_true() && !self.reversible_gl {
            bad.push("Sp-reversible but not GL-reversible".into());
        }
        bad
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": self.field.to_string(),
            "dim": self.dim,
            "elementary_divisor_table": self.invariants.to_json(),
            "reversible_gl": self.reversible_gl,
            "reversible_sp": self.reversible_sp.to_json(),
            "bireflectional": self.bireflectional.to_json(),
            "two_skew": self.two_skew.to_json(),
            "inv_skew": self.inv_skew.to_json(),
            "neg_inverse_gl": self.neg_inverse_gl,
            "neg_inverse_sp": self.neg_inverse_sp.to_json(),
            "psp_reversible_not_bireflectional": self.psp_reversible_not_bireflectional.as_str(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{hyperbolic_element, orthogonal_sum, SymplecticSpace};
    use crate::Field;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn identity_and_minus_identity() {
        let c = Classifier::default();
        let sp = SymplecticSpace::standard(f3(), 4).unwrap();
        let id = SymplecticElement::identity(&sp);
        let r = c.classify(&id);
        assert!(r.bireflectional.status.is_true());
        assert!(r.inv_skew.status.is_false());
        assert!(r.reversible_sp.status.is_true());
        assert!(r.consistency_violations(&id).is_empty());
        let m = id.neg();
        let r = c.classify(&m);
        assert!(r.two_skew.status.is_true());
        assert!(r.two_skew.witness.as_ref().unwrap().verify(&m));
    }

    #[test]
    fn transvections() {
        let c = Classifier::default();
        let t = SymplecticElement::standard(Mat::from_i64(f3(), &[&[1, 1], &[0, 1]])).unwrap();
        let r = c.classify(&t);
        assert!(r.two_skew.status.is_false());
        assert!(r.reversible_sp.status.is_false());
        // one transvection in Sp(4,3): divisors (x-1)^2, (x-1), (x-1)
        let sp4 = orthogonal_sum(&[t.clone(), SymplecticElement::identity(t.space())]).unwrap();
        assert!(c.is_bireflectional(&sp4).status.is_false());
        let j = Mat::from_i64(f3(), &[&[1, 1], &[0, 1]]);
        let h = hyperbolic_element(&j).unwrap();
        let v = c.is_bireflectional(&h);
        assert!(v.status.is_true());
        assert!(v.witness.unwrap().verify(&h));
        let v = c.is_two_skew_product(&h);
        assert!(v.status.is_true() && v.witness.unwrap().verify(&h));
    }

    #[test]
    fn corollary_example_in_dimension_eight() {
        let f = f3();
        let hh = Mat::from_i64(f, &[&[0, 1], &[-1, 0]]);
        let bb = Mat::from_i64(f, &[&[0, 0], &[1, 0]]);
        let p = SymplecticElement::standard(Mat::block2(&hh, &bb, &Mat::zeros(f, 2, 2), &hh)).unwrap();
        let t = SymplecticElement::standard(Mat::from_i64(f, &[&[1, 1], &[0, 1]])).unwrap();
        let phi = orthogonal_sum(&[p, t.clone(), t.inverse().neg()]).unwrap();
        assert_eq!(Classifier::default().psp_reversible_not_bireflectional(&phi), Tri::True);
        let c = Classifier::default();
        assert!(c.is_bireflectional(&phi).status.is_false());
        let v = c.neg_inverse_sp(&phi);
        assert!(v.status.is_true());
        assert!(v.witness.unwrap().verify(&phi));
    }
}
