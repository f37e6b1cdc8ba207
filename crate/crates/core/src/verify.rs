//! Verification suites: exhaustive oracle equivalence on small groups and
//! randomized property checks. Each suite returns a report listing every
//! failed assertion.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::budget::{Budget, Tri};
use crate::classify::{
    gl_neg_inverse, plus_minus_one_parity, x2p1_parity, Classifier, Witness,
    WitnessKind,
};
use crate::error::Result;
use crate::linalg::subspace::bahn;
use crate::linalg::{dickson_block, invariant_factors, linear_elementary_divisors, Mat};
use crate::par::Exec;
use crate::poly::{factorize, Poly};
use crate::scalars::Field;
use crate::smallgroups::{classical_order, generate_group, ClassRecord, GroupTable};
use crate::symplectic::factor::{sp_neg_inverse_conjugator, sp_product, sp_reversal_conjugator, ProductKind};
use crate::symplectic::{
    hyperbolic_element, is_big_transvection, is_hyperbolic, is_unipotent_cyclic, orthogonal_sum, path_quotient,
    random_symplectic, random_vector, wall::congruent_symmetric, wall_antitriangular, wall::antitriangular_violations,
    wall_form, SymplecticElement, SymplecticSpace,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Theorem2,
    Theorem4,
    Theorem5,
    Corollary,
    Wall,
    Dickson,
    Invariants,
    Witnesses,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Theorem2,
        Suite::Theorem4,
        Suite::Theorem5,
        Suite::Corollary,
        Suite::Wall,
        Suite::Dickson,
        Suite::Invariants,
        Suite::Witnesses,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem2 => "theorem2",
            Suite::Theorem4 => "theorem4",
            Suite::Theorem5 => "theorem5",
            Suite::Corollary => "corollary",
            Suite::Wall => "wall",
            Suite::Dickson => "dickson",
            Suite::Invariants => "invariants",
            Suite::Witnesses => "witnesses",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub n: Option<usize>,
    pub q: Option<u64>,
    pub seed: u64,
    pub budget: u64,
    pub exec: Exec,
    /// Random trials per witness kind.
    pub witness_trials: usize,
    /// Random matrices per field for the Dickson suite.
    pub dickson_trials: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n: None,
            q: None,
            seed: 0,
            budget: crate::budget::DEFAULT_BUDGET,
            exec: Exec::default(),
            witness_trials: 1000,
            dickson_trials: 500,
        }
    }
}

impl VerifyConfig {
    fn groups(&self, defaults: &[(usize, u64)]) -> Vec<(usize, u64)> {
        if self.n.is_none() && self.q.is_none() {
            defaults.to_vec()
        } else {
            vec![(self.n.unwrap_or(1), self.q.unwrap_or(3))]
        }
    }

    fn fields(&self, defaults: &[u64]) -> Vec<u64> {
        self.q.map_or_else(|| defaults.to_vec(), |q| vec![q])
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    fn classifier(&self) -> Classifier<'static> {
        Classifier::new(self.budget, None)
    }
}

const NOTE: &str = "note: ";

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub suite: String,
    pub scope: Vec<String>,
    pub checks: usize,
    pub failures: Vec<String>,
    /// Observations that are not failures.
    pub notes: Vec<String>,
    pub skipped: Vec<String>,
    pub seconds: f64,
}

impl SuiteReport {
    fn new(suite: &str) -> SuiteReport {
        SuiteReport {
            suite: suite.into(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn absorb(&mut self, results: Vec<Vec<String>>) {
        self.checks += results.len();
        for line in results.into_iter().flatten() {
            match line.strip_prefix(NOTE) {
                Some(note) => self.notes.push(note.to_string()),
                None => self.failures.push(line),
            }
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(msg());
        }
    }

    fn merge(&mut self, other: SuiteReport) {
        self.scope.extend(other.scope);
        self.checks += other.checks;
        self.failures.extend(other.failures);
        self.notes.extend(other.notes);
        self.skipped.extend(other.skipped);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "passed": self.passed(),
            "scope": self.scope,
            "checks": self.checks,
            "failures": self.failures,
            "notes": self.notes,
            "skipped": self.skipped,
            "seconds": self.seconds,
        })
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut report = match suite {
        Suite::Theorem2 => theorem2(cfg),
        Suite::Theorem4 => theorem4(cfg),
        Suite::Theorem5 => theorem5(cfg),
        Suite::Corollary => corollary(cfg),
        Suite::Wall => wall(cfg),
        Suite::Dickson => dickson(cfg),
        Suite::Invariants => invariants(cfg),
        Suite::Witnesses => witnesses(cfg),
    }?;
    report.suite = suite.name().into();
    report.seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn label(g: &GroupTable, r: &ClassRecord) -> String {
    format!("Sp({},{}) class {} [{}]", g.dim(), g.q, r.id, r.elementary_divisors())
}

fn q_three_mod_four(q: u64) -> bool {
    q % 4 == 3
}

/// Runs `per_class` over every class of every listed group.
fn over_classes<F>(cfg: &VerifyConfig, name: &str, groups: &[(usize, u64)], per_class: F) -> Result<SuiteReport>
where
    F: Fn(&GroupTable, &ClassRecord) -> Result<Vec<String>> + Sync + Send,
{
    let mut report = SuiteReport::new(name);
    for &(n, q) in groups {
        let g = generate_group(n, q, cfg.exec)?;
        let classes = g.conjugacy_classes();
        let results = cfg.exec.map(&classes, |r| per_class(&g, r));
        report.scope.push(format!("Sp({},{}): {} classes", 2 * n, q, classes.len()));
        report.absorb(results.into_iter().collect::<Result<Vec<_>>>()?);
    }
    Ok(report)
}

fn witness_failures(phi: &SymplecticElement, what: &str, w: Option<&Witness>, out: &mut Vec<String>) {
    if let Some(w) = w {
        if !w.verify(phi) {
            out.push(format!("{what}: witness does not re-verify"));
        }
    }
}

/// Criterion (x +- 1)^(2t) parity = oracle(two skew-involutions) =
/// oracle(Sp-reversible), for q = 3 mod 4.
pub fn theorem4(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let groups = cfg.groups(&[(1, 3), (1, 7), (1, 11), (2, 3)]);
    let (run, skip): (Vec<_>, Vec<_>) = groups.into_iter().partition(|&(_, q)| q_three_mod_four(q));
    let c = cfg.classifier();
    let mut report = over_classes(cfg, "theorem4", &run, |g, r| {
        let phi = r.element();
        let m = &r.representative;
        let crit = plus_minus_one_parity(&phi);
        let skew = g.oracle_product(m, ProductKind::TwoSkew)?.is_some();
        let rev = g.oracle_conjugate(m, phi.inverse().matrix())?.is_some();
        let mut bad = Vec::new();
        let at = label(g, r);
        if crit != skew || crit != rev {
            bad.push(format!("{at}: criterion {crit}, two-skew oracle {skew}, reversible oracle {rev}"));
        }
        let v = c.is_two_skew_product(&phi);
        if v.status != Tri::from_bool(skew) {
            bad.push(format!("{at}: two_skew verdict {} vs oracle {skew}", v.status.as_str()));
        }
        witness_failures(&phi, &at, v.witness.as_ref(), &mut bad);
        let v = c.is_reversible_sp(&phi);
        if v.status != Tri::from_bool(rev) {
            bad.push(format!("{at}: reversible verdict {} vs oracle {rev}", v.status.as_str()));
        }
        witness_failures(&phi, &at, v.witness.as_ref(), &mut bad);
        Ok(bad)
    })?;
    report
        .skipped
        .extend(skip.iter().map(|(n, q)| format!("Sp({},{q}): q = 1 mod 4 lies outside the criterion", 2 * n)));
    Ok(report)
}

/// is_bireflectional (no oracle) = oracle(two involutions), with witnesses.
pub fn theorem2(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let groups = cfg.groups(&[(1, 3), (1, 7), (2, 3)]);
    let c = cfg.classifier();
    over_classes(cfg, "theorem2", &groups, |g, r| {
        let phi = r.element();
        let truth = g.oracle_product(&r.representative, ProductKind::TwoInvolutions)?;
        let at = label(g, r);
        let mut bad = Vec::new();
        if let Some((a, b)) = &truth {
            witness_failures(&phi, &at, Some(&Witness::product(ProductKind::TwoInvolutions, a.clone(), b.clone())), &mut bad);
        }
        let v = c.is_bireflectional(&phi);
        if v.status != Tri::from_bool(truth.is_some()) {
            bad.push(format!("{at}: bireflectional verdict {} vs oracle {}", v.status.as_str(), truth.is_some()));
        }
        if v.status.is_true() && v.witness.is_none() {
            bad.push(format!("{at}: true verdict without witness"));
        }
        witness_failures(&phi, &at, v.witness.as_ref(), &mut bad);
        Ok(bad)
    })
}

/// is_inv_skew_product = oracle(involution x skew-involution); the GL and
/// Sp readings of "conjugate to -phi^-1" give the same criterion; the PSp
/// predicate is false in dimension <= 4.
pub fn theorem5(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let groups = cfg.groups(&[(1, 3), (1, 7), (2, 3)]);
    let (run, skip): (Vec<_>, Vec<_>) = groups.into_iter().partition(|&(_, q)| q_three_mod_four(q));
    let c = cfg.classifier();
    let mut report = over_classes(cfg, "theorem5", &run, |g, r| {
        let phi = r.element();
        let m = &r.representative;
        let at = label(g, r);
        let mut bad = Vec::new();
        let truth = g.oracle_product(m, ProductKind::InvolutionSkew)?.is_some();
        let v = c.is_inv_skew_product(&phi);
        if v.status != Tri::from_bool(truth) {
            bad.push(format!("{at}: inv_skew verdict {} vs oracle {truth}", v.status.as_str()));
        }
        witness_failures(&phi, &at, v.witness.as_ref(), &mut bad);
        let parity = x2p1_parity(&phi);
        let gl = gl_neg_inverse(&phi);
        let sp = g.oracle_conjugate(m, &phi.inverse().matrix().neg())?.is_some();
        if (gl && parity) != (sp && parity) {
            bad.push(format!("{NOTE}{at}: GL reading {gl}, Sp reading {sp} of -phi^-1 conjugacy; oracle {truth}"));
        }
        if (sp && parity) != truth {
            bad.push(format!("{at}: criterion {} vs oracle {truth}", sp && parity));
        }
        let nv = c.neg_inverse_sp(&phi);
        if nv.status != Tri::from_bool(sp) {
            bad.push(format!("{at}: neg_inverse_sp verdict {} vs oracle {sp}", nv.status.as_str()));
        }
        witness_failures(&phi, &at, nv.witness.as_ref(), &mut bad);
        if g.dim() <= 4 && c.psp_reversible_not_bireflectional(&phi) != Tri::False {
            bad.push(format!("{at}: PSp predicate not false in dimension {}", g.dim()));
        }
        Ok(bad)
    })?;
    report
        .skipped
        .extend(skip.iter().map(|(n, q)| format!("Sp({},{q}): q = 1 mod 4 lies outside the criterion", 2 * n)));
    Ok(report)
}

/// 8-dimensional element over GF(3): a cyclic (x^2+1)^2 block, a
/// transvection T and -T^-1.
pub fn corollary_example() -> SymplecticElement {
    let f = Field::prime(3).expect("prime");
    let h = Mat::from_i64(f, &[&[0, 1], &[-1, 0]]);
    let b = Mat::from_i64(f, &[&[0, 0], &[1, 0]]);
    let p = SymplecticElement::standard(Mat::block2(&h, &b, &Mat::zeros(f, 2, 2), &h)).expect("symplectic");
    let t = SymplecticElement::standard(Mat::from_i64(f, &[&[1, 1], &[0, 1]])).expect("symplectic");
    orthogonal_sum(&[p, t.clone(), t.inverse().neg()]).expect("orthogonal sum")
}

/// The constructed example and random Sp-conjugates of it, plus the
/// dimension <= 4 sweep.
pub fn corollary(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("corollary");
    let base = corollary_example();
    let mut rng = cfg.rng(0xC0);
    let c = cfg.classifier();
    let mut cases = vec![base.clone()];
    for _ in 0..4 {
        cases.push(base.conjugate(&random_symplectic(base.space(), &mut rng, 12))?);
    }
    report.scope.push(format!("Sp(8,3) example and {} conjugates", cases.len() - 1));
    let results = cfg.exec.map(&cases, |phi| {
        let mut bad = Vec::new();
        if c.psp_reversible_not_bireflectional(phi) != Tri::True {
            bad.push("example: PSp predicate not true".into());
        }
        let nv = c.neg_inverse_sp(phi);
        if !nv.status.is_true() || !nv.witness.as_ref().is_some_and(|w| w.verify(phi)) {
            bad.push("example: no verified -phi^-1 conjugator".into());
        }
        let bv = c.is_bireflectional(phi);
        if bv.status != Tri::False {
            bad.push(format!("example: bireflectional verdict {}", bv.status.as_str()));
        }
        let rep = c.classify(phi);
        bad.extend(rep.consistency_violations(phi));
        bad
    });
    report.absorb(results);
    let sweep = over_classes(cfg, "corollary", &cfg.groups(&[(1, 3), (1, 7), (2, 3)]), |g, r| {
        let ok = c.psp_reversible_not_bireflectional(&r.element()) != Tri::True;
        Ok(if ok { vec![] } else { vec![format!("{}: PSp predicate true", label(g, r))] })
    })?;
    report.merge(sweep);
    Ok(report)
}

/// Random cyclic unipotent element [[A, A S], [0, A^+]] with A a unipotent
/// Jordan block and S random symmetric.
pub fn random_unipotent_cyclic<R: Rng>(field: Field, n: usize, rng: &mut R) -> SymplecticElement {
    let mut a = Mat::identity(field, n);
    for i in 0..n.saturating_sub(1) {
        a[(i, i + 1)] = field.one();
    }
    let ainv_t = a.transpose_inverse().expect("unipotent");
    loop {
        let mut s = Mat::zeros(field, n, n);
        for i in 0..n {
            for j in i..n {
                let v = crate::symplectic::random_scalar(field, rng);
                s[(i, j)] = v.clone();
                s[(j, i)] = v;
            }
        }
        let p = Mat::block2(&a, &a.mul(&s), &Mat::zeros(field, n, n), &ainv_t);
        let phi = SymplecticElement::standard(p).expect("Siegel parabolic elements are symplectic");
        if is_unipotent_cyclic(&phi) {
            return phi;
        }
    }
}

fn wall6_holds(phi: &SymplecticElement) -> Result<bool> {
    let hat = path_quotient(phi)?;
    let lhs = wall_form(phi).theta_class;
    let rhs = (-&wall_form(&hat).theta).square_class()?;
    Ok(lhs == rhs)
}

/// Antitriangular normal form, discriminant classification of cyclic
/// unipotent classes, and the quotient identity.
pub fn wall(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("wall");
    let q = cfg.q.unwrap_or(3);
    let field = Field::prime(q)?;
    let trials = 100;
    for n in [2, 3] {
        let mut rng = cfg.rng(0x3A11 + n as u64);
        let space = SymplecticSpace::standard(field, 2 * n)?;
        let cases: Vec<(SymplecticElement, Mat)> = (0..trials)
            .map(|_| (random_unipotent_cyclic(field, n, &mut rng), random_symplectic(&space, &mut rng, 10)))
            .collect();
        let results = cfg.exec.map(&cases, |(phi, alpha)| -> Result<Vec<String>> {
            let mut bad = Vec::new();
            let a = wall_antitriangular(phi)?;
            let theta = wall_form(phi).theta_class;
            for v in antitriangular_violations(&a, &theta) {
                bad.push(format!("Sp({},{q}) normal form: {v}", 2 * n));
            }
            if wall_antitriangular(&phi.conjugate(alpha)?)? != a {
                bad.push(format!("Sp({},{q}) normal form changes under conjugation", 2 * n));
            }
            if !wall6_holds(phi)? {
                bad.push(format!("Sp({},{q}) quotient discriminant identity fails", 2 * n));
            }
            Ok(bad)
        });
        report.scope.push(format!("Sp({},{q}): {trials} random cyclic unipotent elements", 2 * n));
        report.absorb(results.into_iter().collect::<Result<Vec<_>>>()?);
    }
    for (n, q) in cfg.groups(&[(1, 3), (2, 3)]) {
        let g = generate_group(n, q, cfg.exec)?;
        let classes: Vec<ClassRecord> = g
            .conjugacy_classes()
            .into_iter()
            .filter(|r| is_unipotent_cyclic(&r.element()))
            .collect();
        let reps: Vec<(usize, SymplecticElement)> = classes.iter().map(|r| (r.id, r.element())).collect();
        let members: Vec<(usize, usize)> = classes
            .iter()
            .flat_map(|r| g.class_members(r.id).into_iter().map(move |i| (r.id, i)))
            .collect();
        report.scope.push(format!(
            "Sp({},{q}): {} cyclic unipotent classes, {} elements",
            2 * n,
            classes.len(),
            members.len()
        ));
        let rep_theta: Vec<_> = reps.iter().map(|(id, r)| (*id, wall_form(r).theta_class)).collect();
        let results = cfg.exec.map(&members, |&(cid, i)| -> Result<Vec<String>> {
            let x = SymplecticElement::standard(g.element(i))?;
            let theta = wall_form(&x).theta_class;
            let mut bad = Vec::new();
            for (rid, rt) in &rep_theta {
                if (theta == *rt) != (cid == *rid) {
                    bad.push(format!("Sp({},{q}) element {i}: discriminant vs class {rid} disagrees with conjugacy", 2 * n));
                }
            }
            if g.dim() >= 4 && !wall6_holds(&x)? {
                bad.push(format!("Sp({},{q}) element {i}: quotient discriminant identity fails", 2 * n));
            }
            Ok(bad)
        });
        report.absorb(results.into_iter().collect::<Result<Vec<_>>>()?);
    }
    Ok(report)
}

fn random_matrix<R: Rng>(field: Field, n: usize, rng: &mut R) -> Mat {
    Mat::from_rows(field, (0..n).map(|_| random_vector(field, n, rng)).collect())
}

fn random_invertible<R: Rng>(field: Field, n: usize, rng: &mut R) -> Mat {
    loop {
        let m = random_matrix(field, n, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

fn nontrivial(fs: &[Poly]) -> Vec<Poly> {
    fs.iter().filter(|f| f.deg() > 0).cloned().collect()
}

/// Invariant factors of [[0, I], [-I, D]] are the Dickson transforms of
/// those of D.
pub fn dickson(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("dickson");
    for q in cfg.fields(&[3, 5, 7]) {
        let field = Field::prime(q)?;
        let mut rng = cfg.rng(0xD1C + q);
        let cases: Vec<Mat> = (0..cfg.dickson_trials)
            .map(|_| {
                let n = rng.gen_range(1..=6);
                random_matrix(field, n, &mut rng)
            })
            .collect();
        report.scope.push(format!("GF({q}): {} random D", cases.len()));
        let one = field.one();
        let results = cfg.exec.map(&cases, |d| -> Result<Vec<String>> {
            let lhs = nontrivial(&invariant_factors(&dickson_block(d, &one)).invariant_factors);
            let rhs = nontrivial(
                &invariant_factors(d)
                    .invariant_factors
                    .iter()
                    .map(|f| f.dickson(&one))
                    .collect::<Result<Vec<_>>>()?,
            );
            Ok(if lhs == rhs {
                vec![]
            } else {
                vec![format!("GF({q}) D = {}: invariant factors differ", d.to_json()["rows"])]
            })
        });
        report.absorb(results.into_iter().collect::<Result<Vec<_>>>()?);
    }
    Ok(report)
}

/// Group orders, linear elementary divisors against factorization, and
/// factorization round trips.
pub fn infrastructure(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("infrastructure");
    for (n, q) in [(1, 3), (1, 5), (1, 7), (1, 11), (2, 3)] {
        let g = generate_group(n, q, cfg.exec)?;
        report.check(Some(g.order() as u128) == classical_order(n, q), || {
            format!("Sp({},{q}) has order {}", 2 * n, g.order())
        });
    }
    report.scope.push("orders of Sp(2,3), Sp(2,5), Sp(2,7), Sp(2,11), Sp(4,3)".into());
    for q in [3, 5, 7] {
        let field = Field::prime(q)?;
        let mut rng = cfg.rng(0xED + q);
        let mats: Vec<Mat> = (0..200)
            .map(|_| {
                let n = rng.gen_range(1..=6);
                random_matrix(field, n, &mut rng)
            })
            .collect();
        let results = cfg.exec.map(&mats, |a| {
            let eds = invariant_factors(a).elementary_divisors.unwrap_or_default();
            let mut bad = Vec::new();
            for c in field.elements() {
                let base = Poly::linear(&c);
                let mut from_factors: Vec<(usize, usize)> = eds
                    .iter()
                    .filter(|(p, _, _)| *p == base)
                    .map(|(_, e, m)| (*e as usize, *m))
                    .collect();
                let mut from_ranks = linear_elementary_divisors(a, &c);
                from_factors.sort_unstable();
                from_ranks.sort_unstable();
                if from_factors != from_ranks {
                    bad.push(format!("GF({q}) {}: divisors at {c} differ", a.to_json()["rows"]));
                }
            }
            bad
        });
        report.absorb(results);
        let polys: Vec<Poly> = (0..500)
            .map(|_| {
                let deg = rng.gen_range(1..=12);
                let mut coeffs = random_vector(field, deg + 1, &mut rng);
                if coeffs[deg].is_zero() {
                    coeffs[deg] = field.one();
                }
                Poly::new(field, coeffs)
            })
            .collect();
        let results = cfg.exec.map(&polys, |f| match factorize(f) {
            Ok(fac) if fac.product() == *f => vec![],
            _ => vec![format!("GF({q}) factorization of {f} does not reconstruct")],
        });
        report.absorb(results);
        report.scope.push(format!("GF({q}): 200 matrices, 500 polynomials"));
    }
    Ok(report)
}

/// dim Bahn^t even for every t on every Sp-reversible class, q = 3 mod 4.
pub fn parity(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let groups: Vec<_> = cfg
        .groups(&[(1, 3), (1, 7), (1, 11), (2, 3)])
        .into_iter()
        .filter(|&(_, q)| q_three_mod_four(q))
        .collect();
    over_classes(cfg, "parity", &groups, |g, r| {
        let m = &r.representative;
        let inv = m.inv()?;
        if g.oracle_conjugate(m, &inv)?.is_none() {
            return Ok(vec![]);
        }
        Ok((1..=g.dim())
            .filter(|&t| bahn(m, t).dim() % 2 == 1)
            .map(|t| format!("{}: dim Bahn^{t} is odd", label(g, r)))
            .collect())
    })
}

/// Minimal polynomial (x^2+1)^2 in Sp(4,3): -phi^2 is a big transvection
/// with Wall form congruent to I_2 and phi^2 is not hyperbolic. Cyclic
/// (x^2+1)^k: phi^2 hyperbolic iff k is odd. Minimal polynomial x^2+1:
/// phi^2 = -I is hyperbolic.
pub fn skew_squares(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let groups: Vec<_> = cfg
        .groups(&[(1, 3), (1, 7), (1, 11), (2, 3)])
        .into_iter()
        .filter(|&(_, q)| q_three_mod_four(q))
        .collect();
    let budget = cfg.budget;
    over_classes(cfg, "skew_squares", &groups, |g, r| {
        let field = g.field();
        let x2p1 = Poly::from_i64s(field, &[1, 0, 1]);
        let mu = r.invariants.minimal_polynomial(field);
        let Some(k) = (1..=g.n).find(|&k| x2p1.pow(k) == mu) else {
            return Ok(vec![]);
        };
        let phi = r.element();
        let sq = phi.square();
        let at = label(g, r);
        let mut bad = Vec::new();
        let hyperbolic = is_hyperbolic(&sq, &Budget::new(budget)).status;
        if r.invariants.is_cyclic() {
            if hyperbolic != Tri::from_bool(k % 2 == 1) {
                bad.push(format!("{at}: phi^2 hyperbolic {} with k = {k}", hyperbolic.as_str()));
            }
        } else if k == 1 && (!sq.matrix().neg().is_identity() || !hyperbolic.is_true()) {
            bad.push(format!("{at}: phi^2 = -I not confirmed hyperbolic"));
        }
        if k == 2 && g.dim() == 4 {
            let t = sq.neg();
            if !is_big_transvection(&t) {
                bad.push(format!("{at}: -phi^2 is not a big transvection"));
            } else if congruent_symmetric(&wall_form(&t).gram_omega, &Mat::identity(field, 2)) != Some(true) {
                bad.push(format!("{at}: Wall form of -phi^2 not congruent to I_2"));
            }
        }
        Ok(bad)
    })
}

pub fn invariants(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = infrastructure(cfg)?;
    report.merge(parity(cfg)?);
    report.merge(skew_squares(cfg)?);
    Ok(report)
}

fn random_involution<R: Rng>(field: Field, k: usize, rng: &mut R) -> Mat {
    let signs: Vec<_> = (0..k).map(|_| if rng.gen() { field.one() } else { -field.one() }).collect();
    let p = random_invertible(field, k, rng);
    p.mul(&Mat::diag(&signs, field)).mul(&p.inv().expect("invertible"))
}

fn random_skew<R: Rng>(field: Field, k: usize, rng: &mut R) -> Mat {
    let h = k / 2;
    let j = Mat::block2(
        &Mat::zeros(field, h, h),
        &Mat::identity(field, h),
        &Mat::identity(field, h).neg(),
        &Mat::zeros(field, h, h),
    );
    let p = random_invertible(field, k, rng);
    p.mul(&j).mul(&p.inv().expect("invertible"))
}

/// Random Sp-conjugate of a hyperbolic element diag(A, A^+) whose block
/// meets the precondition of the construction for `kind`.
pub fn witness_instance<R: Rng>(kind: WitnessKind, q: u64, rng: &mut R) -> Result<SymplecticElement> {
    let field = Field::prime(q)?;
    let dims: &[usize] = match kind {
        WitnessKind::InvolutionSkew | WitnessKind::NegInverseConjugator => &[4, 8],
        _ => &[4, 6, 8],
    };
    let dim = dims[rng.gen_range(0..dims.len())];
    let k = dim / 2;
    let a = match kind {
        WitnessKind::TwoSkewInvolutions => random_invertible(field, k, rng),
        WitnessKind::TwoInvolutions | WitnessKind::Reverser => {
            random_involution(field, k, rng).mul(&random_involution(field, k, rng))
        }
        WitnessKind::InvolutionSkew | WitnessKind::NegInverseConjugator => {
            random_involution(field, k, rng).mul(&random_skew(field, k, rng))
        }
    };
    let phi = hyperbolic_element(&a)?;
    phi.conjugate(&random_symplectic(phi.space(), rng, 3 * dim))
}

fn find_witness(kind: WitnessKind, phi: &SymplecticElement, budget: &Budget) -> Result<Option<Witness>> {
    let product = |k: ProductKind| -> Result<Option<Witness>> {
        Ok(sp_product(phi, k, budget)?.map(|(a, b)| Witness::product(k, a, b)))
    };
    match kind {
        WitnessKind::TwoInvolutions => product(ProductKind::TwoInvolutions),
        WitnessKind::TwoSkewInvolutions => product(ProductKind::TwoSkew),
        WitnessKind::InvolutionSkew => product(ProductKind::InvolutionSkew),
        WitnessKind::Reverser => Ok(sp_reversal_conjugator(phi, budget)?.map(|a| Witness::conjugation(kind, a))),
        WitnessKind::NegInverseConjugator => {
            Ok(sp_neg_inverse_conjugator(phi, budget)?.map(|a| Witness::conjugation(kind, a)))
        }
    }
}

pub const WITNESS_KINDS: [WitnessKind; 5] = [
    WitnessKind::TwoInvolutions,
    WitnessKind::TwoSkewInvolutions,
    WitnessKind::InvolutionSkew,
    WitnessKind::Reverser,
    WitnessKind::NegInverseConjugator,
];

/// Every construction succeeds on inputs meeting its precondition and its
/// witness re-verifies exactly.
pub fn witnesses(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("witnesses");
    for (ki, kind) in WITNESS_KINDS.into_iter().enumerate() {
        for q in cfg.fields(&[3, 7]) {
            let mut rng = cfg.rng(0x717 + 31 * ki as u64 + q);
            let seeds: Vec<u64> = (0..cfg.witness_trials).map(|_| rng.gen()).collect();
            let results = cfg.exec.map(&seeds, |&s| -> Result<Vec<String>> {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                let phi = witness_instance(kind, q, &mut rng)?;
                let budget = Budget::new(cfg.budget);
                Ok(match find_witness(kind, &phi, &budget)? {
                    Some(w) if w.verify(&phi) => vec![],
                    Some(_) => vec![format!("{} GF({q}) seed {s}: witness fails", kind.as_str())],
                    None => vec![format!("{} GF({q}) seed {s}: no witness", kind.as_str())],
                })
            });
            report
                .scope
                .push(format!("{} over GF({q}): {} trials", kind.as_str(), seeds.len()));
            report.absorb(results.into_iter().collect::<Result<Vec<_>>>()?);
        }
    }
    Ok(report)
}

