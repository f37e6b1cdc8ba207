//! Exhaustive small symplectic groups over GF(q): closure from generators,
//! conjugacy classes, and brute-force factorization and conjugacy oracles.

use std::collections::HashSet;
use std::io::Write;
use std::sync::OnceLock;

use crate::budget::Tri;
use crate::classify::{Classifier, Oracle};
use crate::error::{Error, Result};
use crate::linalg::{invariant_factors, Mat, SimilarityInvariants};
use crate::par::Exec;
use crate::scalars::Field;
use crate::symplectic::factor::ProductKind;
use crate::symplectic::{standard_gram, transvection, SymplecticElement, SymplecticSpace};

/// Hard cap on stored elements.
pub const ELEMENT_CAP: u128 = 10_000_000;

const MAX_DIM: usize = 6;

/// |Sp(2n, q)| = q^(n^2) prod_{i=1..n} (q^(2i) - 1).
pub fn classical_order(n: usize, q: u64) -> Option<u128> {
    let q = q as u128;
    let mut order = q.checked_pow((n * n) as u32)?;
    for i in 1..=n {
        order = order.checked_mul(q.checked_pow(2 * i as u32)? - 1)?;
    }
    Some(order)
}

/// Matrices over GF(q) packed big-endian in base q, so numeric order is
/// lexicographic order on row-major entries.
#[derive(Clone, Copy, Debug)]
struct Packer {
    d: usize,
    q: u64,
}

type Entries = [u64; MAX_DIM * MAX_DIM];

impl Packer {
    fn new(d: usize, q: u64) -> Option<Packer> {
        if d > MAX_DIM {
            return None;
        }
        (q as u128).checked_pow((d * d) as u32).filter(|&m| m <= u64::MAX as u128)?;
        Some(Packer { d, q })
    }

    fn pack(&self, a: &Entries) -> u64 {
        a[..self.d * self.d].iter().fold(0, |acc, &e| acc * self.q + e)
    }

    fn unpack(&self, mut x: u64) -> Entries {
        let mut a = [0; MAX_DIM * MAX_DIM];
        for k in (0..self.d * self.d).rev() {
            a[k] = x % self.q;
            x /= self.q;
        }
        a
    }

    fn mul(&self, x: u64, y: u64) -> u64 {
        let (a, b, d) = (self.unpack(x), self.unpack(y), self.d);
        let mut c = [0; MAX_DIM * MAX_DIM];
        for i in 0..d {
            for j in 0..d {
                let s: u64 = (0..d).map(|k| a[i * d + k] * b[k * d + j]).sum();
                c[i * d + j] = s % self.q;
            }
        }
        self.pack(&c)
    }

    fn neg(&self, x: u64) -> u64 {
        let mut a = self.unpack(x);
        for e in a[..self.d * self.d].iter_mut() {
            *e = (self.q - *e) % self.q;
        }
        self.pack(&a)
    }

    fn transpose(&self, x: u64) -> u64 {
        let (a, d) = (self.unpack(x), self.d);
        let mut t = [0; MAX_DIM * MAX_DIM];
        for i in 0..d {
            for j in 0..d {
                t[j * d + i] = a[i * d + j];
            }
        }
        self.pack(&t)
    }

    fn identity(&self) -> u64 {
        let mut a = [0; MAX_DIM * MAX_DIM];
        for i in 0..self.d {
            a[i * self.d + i] = 1;
        }
        self.pack(&a)
    }

    fn from_mat(&self, m: &Mat) -> Option<u64> {
        if m.rows() != self.d || m.cols() != self.d || m.field().modulus() != Some(self.q) {
            return None;
        }
        let mut a = [0; MAX_DIM * MAX_DIM];
        for (k, s) in m.entries().iter().enumerate() {
            a[k] = s.residue()?;
        }
        Some(self.pack(&a))
    }

    fn to_mat(&self, field: Field, x: u64) -> Mat {
        let a = self.unpack(x);
        let rows: Vec<Vec<i64>> = (0..self.d)
            .map(|i| (0..self.d).map(|j| a[i * self.d + j] as i64).collect())
            .collect();
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        Mat::from_i64(field, &refs)
    }
}

#[derive(Debug)]
struct Classes {
    class_of: Vec<u32>,
    /// alpha with alpha^-1 rep alpha = element
    conj: Vec<u64>,
    reps: Vec<usize>,
    sizes: Vec<usize>,
    products: Vec<[OnceLock<Option<(u64, u64)>>; 3]>,
}

/// Sp(2n, q) for the standard form, as a sorted set of packed elements.
#[derive(Debug)]
pub struct GroupTable {
    pub n: usize,
    pub q: u64,
    field: Field,
    packer: Packer,
    gram: u64,
    pub generators: Vec<u64>,
    elements: Vec<u64>,
    classes: OnceLock<Classes>,
    squares: OnceLock<(Vec<u64>, Vec<u64>)>,
}

pub fn generate_group(n: usize, q: u64, exec: Exec) -> Result<GroupTable> {
    generate_group_capped(n, q, ELEMENT_CAP, exec)
}

/// Breadth-first closure from the transvections along e_i and e_i + e_j
/// plus the Weyl element (the Gram matrix itself).
pub fn generate_group_capped(n: usize, q: u64, cap: u128, exec: Exec) -> Result<GroupTable> {
    let field = Field::prime(q)?;
    let expected = classical_order(n, q).filter(|&o| o <= cap).ok_or_else(|| {
        Error::Budget(format!("Sp({}, {q}) exceeds the {cap}-element cap", 2 * n))
    })?;
    let d = 2 * n;
    let packer = Packer::new(d, q).ok_or_else(|| Error::Unsupported(format!("cannot pack {d}x{d} over GF({q})")))?;
    let space = SymplecticSpace::standard(field, d)?;
    let unit = |i: usize| (0..d).map(|k| field.from_i64((k == i) as i64)).collect::<Vec<_>>();
    let mut gens = Vec::new();
    for i in 0..d {
        gens.push(transvection(&space, &unit(i), &field.one()));
        for j in i + 1..d {
            let v: Vec<_> = unit(i).iter().zip(unit(j)).map(|(a, b)| a + &b).collect();
            gens.push(transvection(&space, &v, &field.one()));
        }
    }
    gens.push(standard_gram(field, d));
    let generators: Vec<u64> = gens.iter().map(|g| packer.from_mat(g).expect("packable")).collect();

    let id = packer.identity();
    let mut seen: HashSet<u64> = HashSet::from([id]);
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let next = exec.flat_map(&frontier, |&x| generators.iter().map(|&g| packer.mul(x, g)).collect());
        frontier.clear();
        for y in next {
            if seen.insert(y) {
                frontier.push(y);
            }
        }
        if seen.len() as u128 > cap {
            return Err(Error::Budget("group closure exceeded the element cap".into()));
        }
    }
    if seen.len() as u128 != expected {
        return Err(Error::Precondition(format!(
            "closure has {} elements, expected {expected}",
            seen.len()
        )));
    }
    let mut elements: Vec<u64> = seen.into_iter().collect();
    elements.sort_unstable();
    Ok(GroupTable {
        n,
        q,
        field,
        packer,
        gram: packer.from_mat(&standard_gram(field, d)).expect("packable"),
        generators,
        elements,
        classes: OnceLock::new(),
        squares: OnceLock::new(),
    })
}

fn kind_index(kind: ProductKind) -> usize {
    match kind {
        ProductKind::TwoInvolutions => 0,
        ProductKind::TwoSkew => 1,
        ProductKind::InvolutionSkew => 2,
    }
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn space(&self) -> SymplecticSpace {
        SymplecticSpace::standard(self.field, self.dim()).expect("even dimension")
    }

    pub fn element(&self, i: usize) -> Mat {
        self.packer.to_mat(self.field, self.elements[i])
    }

    fn index_of(&self, x: u64) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    fn locate(&self, m: &Mat) -> Result<usize> {
        self.packer
            .from_mat(m)
            .and_then(|x| self.index_of(x))
            .ok_or_else(|| Error::Precondition(format!("matrix is not in Sp({}, {})", self.dim(), self.q)))
    }

    pub fn contains(&self, m: &Mat) -> bool {
        self.locate(m).is_ok()
    }

    /// P^-1 = G P^T G^-1 for P in Sp.
    fn inv(&self, x: u64) -> u64 {
        let p = &self.packer;
        p.mul(p.mul(self.gram, p.transpose(x)), p.neg(self.gram))
    }

    pub fn element_order(&self, i: usize) -> usize {
        let (x, id) = (self.elements[i], self.packer.identity());
        let mut y = x;
        let mut k = 1;
        while y != id {
            y = self.packer.mul(y, x);
            k += 1;
        }
        k
    }

    /// Involutions and skew-involutions of the group.
    fn squares(&self) -> &(Vec<u64>, Vec<u64>) {
        self.squares.get_or_init(|| {
            let p = &self.packer;
            let (id, mid) = (p.identity(), p.neg(p.identity()));
            let mut inv = Vec::new();
            let mut skew = Vec::new();
            for &x in &self.elements {
                let s = p.mul(x, x);
                if s == id {
                    inv.push(x);
                } else if s == mid {
                    skew.push(x);
                }
            }
            (inv, skew)
        })
    }

    pub fn involution_count(&self) -> usize {
        self.squares().0.len()
    }

    pub fn skew_involution_count(&self) -> usize {
        self.squares().1.len()
    }

    fn classes(&self) -> &Classes {
        self.classes.get_or_init(|| {
            let p = &self.packer;
            let ginv: Vec<(u64, u64)> = self.generators.iter().map(|&g| (g, self.inv(g))).collect();
            let mut class_of = vec![u32::MAX; self.order()];
            let mut conj = vec![0; self.order()];
            let mut reps = Vec::new();
            let mut sizes = Vec::new();
            for start in 0..self.order() {
                if class_of[start] != u32::MAX {
                    continue;
                }
                let c = reps.len() as u32;
                reps.push(start);
                class_of[start] = c;
                conj[start] = p.identity();
                let mut stack = vec![start];
                let mut size = 1;
                while let Some(i) = stack.pop() {
                    let (y, a) = (self.elements[i], conj[i]);
                    for &(g, gi) in &ginv {
                        let j = self.index_of(p.mul(p.mul(gi, y), g)).expect("closed under conjugation");
                        if class_of[j] == u32::MAX {
                            class_of[j] = c;
                            conj[j] = p.mul(a, g);
                            size += 1;
                            stack.push(j);
                        }
                    }
                }
                sizes.push(size);
            }
            let products = reps.iter().map(|_| Default::default()).collect();
            Classes {
                class_of,
                conj,
                reps,
                sizes,
                products,
            }
        })
    }

    pub fn class_count(&self) -> usize {
        self.classes().reps.len()
    }

    pub fn class_of(&self, m: &Mat) -> Result<usize> {
        Ok(self.classes().class_of[self.locate(m)?] as usize)
    }

    /// Indices of the elements of a class, representative first.
    pub fn class_members(&self, class: usize) -> Vec<usize> {
        let cl = self.classes();
        let rep = cl.reps[class];
        std::iter::once(rep)
            .chain((0..self.order()).filter(|&i| i != rep && cl.class_of[i] as usize == class))
            .collect()
    }

    /// Factorization of a class representative by scanning all sigma with
    /// sigma^2 = e1 I and testing (sigma^-1 rep)^2 = e2 I.
    fn rep_product(&self, class: usize, kind: ProductKind) -> Option<(u64, u64)> {
        let cl = self.classes();
        *cl.products[class][kind_index(kind)].get_or_init(|| {
            let p = &self.packer;
            let rep = self.elements[cl.reps[class]];
            let (e1, e2) = kind.squares();
            let (inv, skew) = self.squares();
            let pool = if e1 == 1 { inv } else { skew };
            let want = if e2 == 1 { p.identity() } else { p.neg(p.identity()) };
            pool.iter().find_map(|&s| {
                // sigma^-1 = e1 sigma
                let s_inv = if e1 == 1 { s } else { p.neg(s) };
                let t = p.mul(s_inv, rep);
                (p.mul(t, t) == want).then_some((s, t))
            })
        })
    }

    /// phi = a b with a^2 = e1 I, b^2 = e2 I, both in the group, or none.
    pub fn oracle_product(&self, phi: &Mat, kind: ProductKind) -> Result<Option<(Mat, Mat)>> {
        let i = self.locate(phi)?;
        let cl = self.classes();
        let Some((s, t)) = self.rep_product(cl.class_of[i] as usize, kind) else {
            return Ok(None);
        };
        let p = &self.packer;
        let a = cl.conj[i];
        let ai = self.inv(a);
        let lift = |x: u64| p.to_mat(self.field, p.mul(p.mul(ai, x), a));
        Ok(Some((lift(s), lift(t))))
    }

    /// alpha in the group with alpha^-1 phi alpha = psi, or none.
    pub fn oracle_conjugate(&self, phi: &Mat, psi: &Mat) -> Result<Option<Mat>> {
        let (i, j) = (self.locate(phi)?, self.locate(psi)?);
        let cl = self.classes();
        if cl.class_of[i] != cl.class_of[j] {
            return Ok(None);
        }
        let alpha = self.packer.mul(self.inv(cl.conj[i]), cl.conj[j]);
        Ok(Some(self.packer.to_mat(self.field, alpha)))
    }

    pub fn conjugacy_classes(&self) -> Vec<ClassRecord> {
        let cl = self.classes();
        let p = &self.packer;
        let (id, mid) = (p.identity(), p.neg(p.identity()));
        (0..cl.reps.len())
            .map(|c| {
                let x = self.elements[cl.reps[c]];
                let rep = p.to_mat(self.field, x);
                let sq = p.mul(x, x);
                ClassRecord {
                    id: c,
                    invariants: invariant_factors(&rep),
                    representative: rep,
                    size: cl.sizes[c],
                    order: self.element_order(cl.reps[c]),
                    is_involution: sq == id,
                    is_skew_involution: sq == mid,
                    verdicts: None,
                }
            })
            .collect()
    }
}

impl Oracle for GroupTable {
    fn product(&self, phi: &Mat, kind: ProductKind) -> Option<Option<(Mat, Mat)>> {
        self.oracle_product(phi, kind).ok()
    }

    fn conjugate(&self, phi: &Mat, psi: &Mat) -> Option<Option<Mat>> {
        self.oracle_conjugate(phi, psi).ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassVerdicts {
    pub reversible: Tri,
    pub bireflectional: Tri,
    pub two_skew: Tri,
    pub inv_skew: Tri,
    pub psp_rev_not_biref: Tri,
}

#[derive(Clone, Debug)]
pub struct ClassRecord {
    pub id: usize,
    pub representative: Mat,
    pub size: usize,
    pub order: usize,
    pub invariants: SimilarityInvariants,
    pub is_involution: bool,
    pub is_skew_involution: bool,
    pub verdicts: Option<ClassVerdicts>,
}

impl ClassRecord {
    pub fn element(&self) -> SymplecticElement {
        SymplecticElement::standard(self.representative.clone()).expect("group elements are symplectic")
    }

    pub fn elementary_divisors(&self) -> String {
        match &self.invariants.elementary_divisors {
            Some(eds) => eds
                .iter()
                .map(|(p, e, m)| format!("({p})^{e}x{m}"))
                .collect::<Vec<_>>()
                .join("; "),
            None => String::new(),
        }
    }
}

/// Verdicts for one element, using the group as oracle.
pub fn verdicts_for(group: &GroupTable, phi: &SymplecticElement, budget: u64) -> ClassVerdicts {
    let c = Classifier::new(budget, Some(group));
    ClassVerdicts {
        reversible: c.is_reversible_sp(phi).status,
        bireflectional: c.is_bireflectional(phi).status,
        two_skew: c.is_two_skew_product(phi).status,
        inv_skew: c.is_inv_skew_product(phi).status,
        psp_rev_not_biref: c.psp_reversible_not_bireflectional(phi),
    }
}

/// Class records with verdicts filled in, parallel over classes.
pub fn class_table(group: &GroupTable, budget: u64, exec: Exec) -> Vec<ClassRecord> {
    let records = group.conjugacy_classes();
    let verdicts = exec.map(&records, |r| verdicts_for(group, &r.element(), budget));
    records
        .into_iter()
        .zip(verdicts)
        .map(|(r, v)| ClassRecord { verdicts: Some(v), ..r })
        .collect()
}

pub fn write_class_csv<W: Write>(records: &[ClassRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record([
        "class_id",
        "rep",
        "size",
        "order_of_element",
        "elementary_divisors",
        "is_involution",
        "is_skew_involution",
        "reversible",
        "bireflectional",
        "two_skew",
        "inv_skew",
        "psp_rev_not_biref",
    ])
    .map_err(io)?;
    for r in records {
        let v = r.verdicts;
        let tri = |f: fn(&ClassVerdicts) -> Tri| v.as_ref().map_or("", |v| f(v).as_str()).to_string();
        w.write_record([
            r.id.to_string(),
            r.representative.to_json()["rows"].to_string(),
            r.size.to_string(),
            r.order.to_string(),
            r.elementary_divisors(),
            r.is_involution.to_string(),
            r.is_skew_involution.to_string(),
            tri(|v| v.reversible),
            tri(|v| v.bireflectional),
            tri(|v| v.two_skew),
            tri(|v| v.inv_skew),
            tri(|v| v.psp_rev_not_biref),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_of_small_groups() {
        for (n, q) in [(1, 3), (1, 5), (1, 7), (1, 11)] {
            let g = generate_group(n, q, Exec::default()).unwrap();
            assert_eq!(g.order() as u128, classical_order(n, q).unwrap());
        }
        assert!(matches!(generate_group(3, 3, Exec::default()), Err(Error::Budget(_))));
    }

    #[test]
    fn sp23_classes_and_oracles() {
        let g = generate_group(1, 3, Exec::Sequential).unwrap();
        let classes = g.conjugacy_classes();
        assert_eq!(classes.iter().map(|c| c.size).sum::<usize>(), 24);
        let f = g.field();
        let id = Mat::identity(f, 2);
        assert_eq!(classes[g.class_of(&id).unwrap()].size, 1);
        assert_eq!(classes[g.class_of(&id.neg()).unwrap()].size, 1);
        assert!(classes[g.class_of(&id).unwrap()].representative.is_identity());

        let t = Mat::from_i64(f, &[&[1, 1], &[0, 1]]);
        let t2 = Mat::from_i64(f, &[&[1, 2], &[0, 1]]);
        assert!(g.oracle_product(&t, ProductKind::TwoSkew).unwrap().is_none());
        assert!(g.oracle_conjugate(&t, &t2).unwrap().is_none());
        let (a, b) = g.oracle_product(&id, ProductKind::TwoInvolutions).unwrap().unwrap();
        assert_eq!(a.mul(&b), id);
        let (a, b) = g.oracle_product(&id.neg(), ProductKind::TwoSkew).unwrap().unwrap();
        assert_eq!(a.mul(&b), id.neg());
        assert_eq!(a.mul(&a), id.neg());
        let alpha = g.oracle_conjugate(&t, &t).unwrap().unwrap();
        assert_eq!(alpha.inv().unwrap().mul(&t).mul(&alpha), t);
        assert!(g.oracle_product(&Mat::identity(f, 4), ProductKind::TwoSkew).is_err());
    }

    #[test]
    fn conjugators_are_correct() {
        let g = generate_group(1, 5, Exec::default()).unwrap();
        for c in 0..g.class_count() {
            let members = g.class_members(c);
            let rep = g.element(members[0]);
            for &m in members.iter().take(4) {
                let x = g.element(m);
                let a = g.oracle_conjugate(&rep, &x).unwrap().unwrap();
                assert_eq!(a.inv().unwrap().mul(&rep).mul(&a), x);
            }
        }
    }

    #[test]
    fn csv_has_one_row_per_class() {
        let g = generate_group(1, 3, Exec::default()).unwrap();
        let table = class_table(&g, 100_000, Exec::default());
        let mut buf = Vec::new();
        write_class_csv(&table, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), g.class_count() + 1);
        assert!(text.starts_with("class_id,rep,size"));
    }
}

