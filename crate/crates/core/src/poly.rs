//! Dense univariate polynomials, factorization over GF(p), and the
//! reciprocal and Dickson transforms.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalars::{Field, Scalar};

/// Seed used by [`factorize`] when the caller does not supply a generator.
pub const DEFAULT_FACTOR_SEED: u64 = 0x5EED_F00D;

/// Polynomial with coefficients lowest degree first. The coefficient vector
/// never ends in a zero, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        Poly { field, coeffs }
    }

    pub fn from_i64s(field: Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: Field) -> Poly {
        Poly { field, coeffs: vec![] }
    }

    pub fn one(field: Field) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(c: Scalar) -> Poly {
        let field = c.field();
        Poly::new(field, vec![c])
    }

    pub fn x(field: Field) -> Poly {
        Poly::monomial(field.one(), 1)
    }

    pub fn monomial(c: Scalar, k: usize) -> Poly {
        let field = c.field();
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        Poly::new(field, coeffs)
    }

    /// x - c
    pub fn linear(c: &Scalar) -> Poly {
        let field = c.field();
        Poly::new(field, vec![-c, field.one()])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of x^k (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; for callers that have
    /// already excluded zero.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().inv().expect("nonzero lead");
        self.scale(&inv)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check(other).expect("polynomial fields");
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(self.field, (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check(other).expect("polynomial fields");
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, out)
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one(self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Quotient and remainder.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = divisor.deg();
        let lead_inv = divisor.lead().inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return Ok((Poly::zero(self.field), self.clone()));
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &(&c * b);
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(self.field, quot), Poly::new(self.field, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.divmod(divisor).expect("nonzero divisor").1
    }

    pub fn div_exact(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.divmod(divisor).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*other = g`, g monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).unwrap();
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lead().inv().unwrap();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        self.mul(other).div_exact(&self.gcd(other)).monic()
    }

    /// Inverse modulo `modulus`, when coprime.
    pub fn inv_mod(&self, modulus: &Poly) -> Option<Poly> {
        let (g, s, _) = self.ext_gcd(modulus);
        g.is_one().then(|| s.rem(modulus))
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.field,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &self.field.from_i64(k as i64))
                .collect(),
        )
    }

    /// self(g(x))
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero(self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// self(-x)
    pub fn negate_variable(&self) -> Poly {
        Poly::new(
            self.field,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// self(-x) * (-1)^deg, monic when self is.
    pub fn negated_root_poly(&self) -> Poly {
        let p = self.negate_variable();
        if self.deg() % 2 == 1 {
            p.neg()
        } else {
            p
        }
    }

    pub fn pow_mod(&self, mut e: u128, modulus: &Poly) -> Poly {
        let mut base = self.rem(modulus);
        let mut acc = Poly::one(self.field).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    /// q*(x) = q(0)^-1 x^deg q(1/x).
    pub fn reciprocal(&self) -> Result<Poly> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::Precondition("reciprocal needs q(0) != 0".into()));
        }
        let inv = c0.inv()?;
        let rev: Vec<Scalar> = self.coeffs.iter().rev().cloned().collect();
        Ok(Poly::new(self.field, rev).scale(&inv))
    }

    pub fn is_self_reciprocal(&self) -> bool {
        self.reciprocal().is_ok_and(|r| r == self.monic())
    }

    /// f(x + lambda/x) * x^n for monic f of degree n.
    pub fn dickson(&self, lambda: &Scalar) -> Result<Poly> {
        if !self.is_monic() {
            return Err(Error::Precondition("dickson transform needs a monic input".into()));
        }
        let n = self.deg();
        let f = self.field;
        // (x^2 + lambda)^k * x^(n-k) summed with the coefficients of f
        let base = Poly::new(f, vec![lambda.clone(), f.zero(), f.one()]);
        let mut acc = Poly::zero(f);
        let mut power = Poly::one(f);
        for k in 0..=n {
            let term = power.mul(&Poly::monomial(self.coeff(k), n - k));
            acc = acc.add(&term);
            power = power.mul(&base);
        }
        Ok(acc)
    }

    /// The monic g of degree deg(h)/2 with `g.dickson(lambda) == h`, if any.
    /// The map is triangular in the coefficients of g, so the top half of h
    /// determines g and the bottom half is a consistency check.
    pub fn inverse_dickson(&self, lambda: &Scalar) -> Option<Poly> {
        if !self.is_monic() || self.deg() % 2 == 1 {
            return None;
        }
        let m = self.deg() / 2;
        let f = self.field;
        // coefficient of x^(m+j) in g.dickson is g_j + sum_{k>j} g_k * c(k, j)
        // where c(k, j) comes from (x^2+lambda)^k x^(m-k); solve from the top.
        let mut g = vec![f.zero(); m + 1];
        g[m] = f.one();
        for j in (0..m).rev() {
            let mut partial = g.clone();
            partial[j] = f.zero();
            let img = Poly::new(f, partial).dickson_unchecked(lambda, m);
            g[j] = &self.coeff(m + j) - &img.coeff(m + j);
        }
        let g = Poly::new(f, g);
        (g.dickson(lambda).ok()? == *self).then_some(g)
    }

    fn dickson_unchecked(&self, lambda: &Scalar, n: usize) -> Poly {
        let f = self.field;
        let base = Poly::new(f, vec![lambda.clone(), f.zero(), f.one()]);
        let mut acc = Poly::zero(f);
        let mut power = Poly::one(f);
        for k in 0..=n {
            acc = acc.add(&power.mul(&Poly::monomial(self.coeff(k), n - k)));
            power = power.mul(&base);
        }
        acc
    }

    /// Ordering key: degree first, then coefficients from the top.
    pub fn cmp_canonical(&self, other: &Poly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| {
                for (a, b) in self.coeffs.iter().rev().zip(other.coeffs.iter().rev()) {
                    let o = match (a.residue(), b.residue()) {
                        (Some(x), Some(y)) => x.cmp(&y),
                        _ => a.to_string().cmp(&b.to_string()),
                    };
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.coeffs.iter().map(|c| c.to_string().into()).collect())
    }

    pub fn from_json(field: Field, v: &serde_json::Value) -> Result<Poly> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("polynomial must be an array".into()))?;
        let coeffs = arr
            .iter()
            .map(|c| Scalar::from_json(field, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(field, coeffs))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (k, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{c}x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{c}x^{k}")?,
            }
        }
        Ok(())
    }
}

/// `unit * prod(factor^exponent)` with monic irreducible, pairwise distinct
/// factors sorted canonically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Scalar,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn product(&self) -> Poly {
        let mut acc = Poly::constant(self.unit.clone());
        for (p, e) in &self.factors {
            acc = acc.mul(&p.pow(*e as usize));
        }
        acc
    }

    pub fn exponent_of(&self, p: &Poly) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, e)| *e)
    }
}

fn require_prime(f: &Poly) -> Result<u64> {
    f.field().modulus().ok_or_else(|| {
        Error::Unsupported("factorization over the rationals".into())
    })
}

/// Full factorization over GF(p) with the default seed.
pub fn factorize(f: &Poly) -> Result<Factorization> {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_FACTOR_SEED);
    factorize_with(f, &mut rng)
}

/// Squarefree split, distinct-degree split, then Cantor-Zassenhaus.
pub fn factorize_with<R: Rng>(f: &Poly, rng: &mut R) -> Result<Factorization> {
    require_prime(f)?;
    if f.is_zero() {
        return Err(Error::Precondition("cannot factor the zero polynomial".into()));
    }
    let unit = f.lead();
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    for (sq, mult) in squarefree_decomposition(&f.monic()) {
        for (g, d) in distinct_degree(&sq) {
            for p in equal_degree(&g, d, rng) {
                factors.push((p, mult));
            }
        }
    }
    factors.sort_by(|a, b| a.0.cmp_canonical(&b.0).then(a.1.cmp(&b.1)));
    // merge duplicates that can arise across p-th power layers
    let mut merged: Vec<(Poly, u32)> = Vec::new();
    for (p, e) in factors {
        match merged.last_mut() {
            Some((q, ee)) if *q == p => *ee += e,
            _ => merged.push((p, e)),
        }
    }
    Ok(Factorization { unit, factors: merged })
}

/// Squarefree parts with multiplicities for monic f over GF(p).
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, u32)> {
    let p = f.field().modulus().expect("prime field") as usize;
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let d = f.derivative();
    if d.is_zero() {
        // f = g(x^p); over a prime field the p-th root just thins coefficients
        let g = Poly::new(
            f.field(),
            f.coeffs().iter().step_by(p).cloned().collect(),
        );
        for (h, m) in squarefree_decomposition(&g) {
            out.push((h, m * p as u32));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c);
    let mut i = 1u32;
    while w.deg() > 0 {
        let y = w.gcd(&c);
        let z = w.div_exact(&y);
        if z.deg() > 0 {
            out.push((z.monic(), i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if c.deg() > 0 {
        let g = Poly::new(
            c.field(),
            c.coeffs().iter().step_by(p).cloned().collect(),
        );
        for (h, m) in squarefree_decomposition(&g.monic()) {
            out.push((h, m * p as u32));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of irreducibles of
/// equal degree.
pub fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let p = f.field().modulus().expect("prime field") as u128;
    let x = Poly::x(f.field());
    let mut out = Vec::new();
    let mut rest = f.monic();
    let mut h = x.rem(&rest);
    let mut d = 0;
    while rest.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(p, &rest);
        let g = h.sub(&x).gcd(&rest);
        if g.deg() > 0 {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    if rest.deg() > 0 {
        let d = rest.deg();
        out.push((rest, d));
    }
    out
}

fn equal_degree<R: Rng>(f: &Poly, d: usize, rng: &mut R) -> Vec<Poly> {
    if f.deg() == d {
        return vec![f.monic()];
    }
    let field = f.field();
    let p = field.modulus().unwrap();
    let n = f.deg();
    loop {
        let a = Poly::new(
            field,
            (0..n).map(|_| field.from_i64(rng.gen_range(0..p) as i64)).collect(),
        );
        if a.deg() == 0 {
            continue;
        }
        // a^((p^d - 1)/2) = (a * a^p * ... * a^(p^(d-1)))^((p-1)/2)
        let mut norm = a.rem(f);
        let mut frob = norm.clone();
        for _ in 1..d {
            frob = frob.pow_mod(p as u128, f);
            norm = norm.mul(&frob).rem(f);
        }
        let b = norm.pow_mod(((p - 1) / 2) as u128, f).sub(&Poly::one(field));
        let g = b.gcd(f);
        if g.deg() > 0 && g.deg() < n {
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&f.div_exact(&g), d, rng));
            return out;
        }
    }
}

/// Monic product of the distinct irreducible factors.
pub fn radical(f: &Poly) -> Result<Poly> {
    let fac = factorize(f)?;
    Ok(fac
        .factors
        .iter()
        .fold(Poly::one(f.field()), |acc, (p, _)| acc.mul(p)))
}

/// Irreducibility via distinct degrees (Rabin-style gcd test).
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    require_prime(f)?;
    let n = match f.degree() {
        None | Some(0) => return Ok(false),
        Some(n) => n,
    };
    let f = f.monic();
    if !f.gcd(&f.derivative()).is_one() {
        return Ok(false);
    }
    let dd = distinct_degree(&f);
    Ok(dd.len() == 1 && dd[0].1 == n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let q = Field::rational();
        let a = Poly::from_i64s(q, &[-1, 0, 1]);
        let b = Poly::from_i64s(q, &[-1, 1]);
        assert_eq!(a.gcd(&b), b);
        let x3 = Poly::from_i64s(q, &[0, 0, 0, 1]);
        let x2 = Poly::from_i64s(q, &[0, 0, 1]);
        assert_eq!(x3.divmod(&x2).unwrap(), (Poly::x(q), Poly::zero(q)));
        let f3 = f(3);
        let m = Poly::from_i64s(f3, &[1, 1]).mul(&Poly::from_i64s(f3, &[2, 1]));
        assert_eq!(m, Poly::from_i64s(f3, &[2, 0, 1]));
        assert_eq!(x3.divmod(&Poly::zero(q)), Err(Error::DivisionByZero));
    }

    #[test]
    fn reciprocal_examples() {
        let f7 = f(7);
        let c = f7.from_i64(3);
        assert_eq!(
            Poly::linear(&c).reciprocal().unwrap(),
            Poly::linear(&c.inv().unwrap())
        );
        let f3 = f(3);
        let x2p1 = Poly::from_i64s(f3, &[1, 0, 1]);
        assert_eq!(x2p1.reciprocal().unwrap(), x2p1);
        // 2^-1 * (2x^2 + x + 1) = x^2 + 2x + 2 over GF(3)
        let q = Poly::from_i64s(f3, &[2, 1, 1]);
        assert_eq!(q.reciprocal().unwrap(), Poly::from_i64s(f3, &[2, 2, 1]));
        assert!(Poly::x(f3).reciprocal().is_err());
    }

    #[test]
    fn dickson_examples() {
        let f5 = f(5);
        let one = f5.one();
        let d = f5.from_i64(3);
        assert_eq!(
            Poly::linear(&d).dickson(&one).unwrap(),
            Poly::new(f5, vec![one.clone(), -&d, one.clone()])
        );
        assert_eq!(Poly::x(f5).dickson(&one).unwrap(), Poly::from_i64s(f5, &[1, 0, 1]));
        let f3 = f(3);
        assert_eq!(
            Poly::from_i64s(f3, &[0, 0, 1]).dickson(&f3.one()).unwrap(),
            Poly::from_i64s(f3, &[1, 0, 2, 0, 1])
        );
        // x -/+ 2 maps to (x -/+ 1)^2
        for s in [1, -1] {
            let l = Poly::from_i64s(f5, &[-2 * s, 1]);
            let sq = Poly::from_i64s(f5, &[-s, 1]).pow(2);
            assert_eq!(l.dickson(&one).unwrap(), sq);
        }
        assert!(Poly::from_i64s(f5, &[1, 2]).dickson(&one).is_err());
    }

    #[test]
    fn factor_examples() {
        let f3 = f(3);
        let x2p1 = Poly::from_i64s(f3, &[1, 0, 1]);
        assert_eq!(factorize(&x2p1).unwrap().factors, vec![(x2p1.clone(), 1)]);
        let f5 = f(5);
        let fac = factorize(&Poly::from_i64s(f5, &[1, 0, 1])).unwrap();
        assert_eq!(
            fac.factors,
            vec![
                (Poly::from_i64s(f5, &[2, 1]), 1),
                (Poly::from_i64s(f5, &[3, 1]), 1)
            ]
        );
        let fac = factorize(&Poly::from_i64s(f3, &[-1, 0, 0, 0, 1])).unwrap();
        assert_eq!(fac.factors.len(), 3);
        assert_eq!(fac.exponent_of(&Poly::from_i64s(f3, &[-1, 1])), 1);
        assert_eq!(fac.exponent_of(&Poly::from_i64s(f3, &[1, 1])), 1);
        assert_eq!(fac.exponent_of(&x2p1), 1);
        assert!(factorize(&Poly::one(Field::Rational)).is_err());
    }

    #[test]
    fn radical_examples() {
        let f3 = f(3);
        let xm1 = Poly::from_i64s(f3, &[-1, 1]);
        assert_eq!(radical(&xm1.pow(4)).unwrap(), xm1);
        let x2p1 = Poly::from_i64s(f3, &[1, 0, 1]);
        assert_eq!(radical(&x2p1).unwrap(), x2p1);
        assert_eq!(
            radical(&x2p1.pow(2).mul(&xm1)).unwrap(),
            x2p1.mul(&xm1)
        );
    }

    #[test]
    fn pth_power_inputs() {
        let f3 = f(3);
        // (x+1)^9 has zero derivative
        let g = Poly::from_i64s(f3, &[1, 1]).pow(9).mul(&Poly::from_i64s(f3, &[0, 1]));
        let fac = factorize(&g).unwrap();
        assert_eq!(fac.product(), g);
        assert_eq!(fac.exponent_of(&Poly::from_i64s(f3, &[1, 1])), 9);
    }

    #[test]
    fn inverse_dickson_recovers() {
        let f7 = f(7);
        let lam = f7.from_i64(3);
        let g = Poly::from_i64s(f7, &[2, 5, 0, 1]);
        let h = g.dickson(&lam).unwrap();
        assert_eq!(h.inverse_dickson(&lam), Some(g));
        assert_eq!(Poly::from_i64s(f7, &[1, 1, 0, 0, 1]).inverse_dickson(&lam), None);
    }

    fn brute_irreducible(f: &Poly) -> bool {
        // trial division by every monic polynomial of degree <= n/2
        let field = f.field();
        let p = field.modulus().unwrap() as i64;
        let n = f.deg();
        for d in 1..=n / 2 {
            let count = (p as usize).pow(d as u32);
            for idx in 0..count {
                let mut c = Vec::with_capacity(d + 1);
                let mut k = idx as i64;
                for _ in 0..d {
                    c.push(k % p);
                    k /= p;
                }
                c.push(1);
                if f.rem(&Poly::from_i64s(field, &c)).is_zero() {
                    return false;
                }
            }
        }
        n >= 1
    }

    proptest! {
        #[test]
        fn factorization_reconstructs(
            p in prop::sample::select(vec![3u64, 5, 7]),
            coeffs in prop::collection::vec(0i64..7, 1..9),
            lead in 1i64..7,
        ) {
            let field = f(p);
            let mut c = coeffs.clone();
            c.push(lead % p as i64 + if lead % p as i64 == 0 { 1 } else { 0 });
            let poly = Poly::from_i64s(field, &c);
            let fac = factorize(&poly).unwrap();
            prop_assert_eq!(fac.product(), poly);
            for (q, _) in &fac.factors {
                prop_assert!(q.is_monic());
                prop_assert!(brute_irreducible(q));
            }
        }

        #[test]
        fn dickson_degree_and_multiplicativity(
            p in prop::sample::select(vec![3u64, 5, 7]),
            a in prop::collection::vec(0i64..7, 0..4),
            b in prop::collection::vec(0i64..7, 0..4),
            lam in 1i64..7,
        ) {
            let field = f(p);
            let mut a = a; a.push(1);
            let mut b = b; b.push(1);
            let fa = Poly::from_i64s(field, &a);
            let fb = Poly::from_i64s(field, &b);
            let l = field.from_i64(lam);
            let da = fa.dickson(&l).unwrap();
            prop_assert_eq!(da.deg(), 2 * fa.deg());
            prop_assert_eq!(fa.mul(&fb).dickson(&l).unwrap(), da.mul(&fb.dickson(&l).unwrap()));
            prop_assert_eq!(da.inverse_dickson(&l), Some(fa));
        }

        #[test]
        fn double_reciprocal(
            p in prop::sample::select(vec![3u64, 5, 7]),
            mid in prop::collection::vec(0i64..7, 0..5),
            c0 in 1i64..7,
        ) {
            let field = f(p);
            let c0 = if c0 % p as i64 == 0 { 1 } else { c0 };
            let mut c = vec![c0];
            c.extend(mid);
            c.push(1);
            let q = Poly::from_i64s(field, &c);
            prop_assert_eq!(q.reciprocal().unwrap().reciprocal().unwrap(), q);
        }
    }
}
