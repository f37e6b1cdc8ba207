//! Exact arithmetic in odd prime fields and the rationals.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ground field: GF(p) for an odd prime p, or the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Field {
    Prime { p: u64 },
    Rational,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// GF(p). Rejects 2, composites, and moduli too large for `u32` products.
    pub fn prime(p: u64) -> Result<Field> {
        if p == 2 || !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::NotOddPrime(p));
        }
        Ok(Field::Prime { p })
    }

    pub fn rational() -> Field {
        Field::Rational
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            Field::Prime { p } => Some(*p),
            Field::Rational => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Field::Prime { .. })
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            Field::Prime { p } => Scalar::Mod {
                value: n.rem_euclid(p as i64) as u64,
                p,
            },
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
        }
    }

    /// Reduced fraction `num/den`; over GF(p) the denominator is inverted.
    pub fn from_frac(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        self.from_i64(num).checked_div(&self.from_i64(den))
    }

    /// All elements in residue order. Empty for the rationals.
    pub fn elements(&self) -> Vec<Scalar> {
        match *self {
            Field::Prime { p } => (0..p).map(|value| Scalar::Mod { value, p }).collect(),
            Field::Rational => Vec::new(),
        }
    }

    /// True when -1 is a square (p = 1 mod 4). Never for the rationals.
    pub fn minus_one_is_square(&self) -> bool {
        matches!(self, Field::Prime { p } if p % 4 == 1)
    }

    /// q = 3 mod 4, the standing hypothesis of the skew-involution criteria.
    pub fn is_three_mod_four(&self) -> bool {
        matches!(self, Field::Prime { p } if p % 4 == 3)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime { p } => write!(f, "GF({p})"),
            Field::Rational => write!(f, "Q"),
        }
    }
}

/// A field element in canonical form: a residue in `0..p` or a reduced
/// fraction with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod { value: u64, p: u64 },
    Rat(BigRational),
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Mod { p, .. } => Field::Prime { p: *p },
            Scalar::Rat(_) => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    /// Residue for prime fields.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Mod { value, .. } => Some(*value),
            Scalar::Rat(_) => None,
        }
    }

    fn same_field(&self, other: &Scalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch(
                self.field().to_string(),
                other.field().to_string(),
            ))
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: (a + b) % p,
                p: *p,
            },
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: a * b % p,
                p: *p,
            },
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Mod { value, p } => Scalar::Mod {
                value: (p - value) % p,
                p: *p,
            },
            Scalar::Rat(r) => Scalar::Rat(-r),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Mod { value, p } => Scalar::Mod {
                value: pow_mod(*value, p - 2, *p),
                p: *p,
            },
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
        })
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Square test: Euler's criterion over GF(p); over the rationals the
    /// reduced numerator and denominator must both be perfect squares.
    pub fn is_square(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::Precondition("is_square of zero".into()));
        }
        Ok(match self {
            Scalar::Mod { value, p } => pow_mod(*value, (p - 1) / 2, *p) == 1,
            Scalar::Rat(r) => {
                !r.is_negative() && is_perfect_square(r.numer()) && is_perfect_square(r.denom())
            }
        })
    }

    /// Canonical square class of a nonzero element.
    pub fn square_class(&self) -> Result<SquareClass> {
        match self {
            Scalar::Mod { .. } => Ok(if self.is_square()? {
                SquareClass::Square
            } else {
                SquareClass::NonSquare
            }),
            Scalar::Rat(r) => {
                if r.is_zero() {
                    return Err(Error::Precondition("square class of zero".into()));
                }
                // num/den ~ num*den modulo squares
                let prod = r.numer() * r.denom();
                Ok(SquareClass::Squarefree(squarefree_part(&prod).to_string()))
            }
        }
    }

    /// A square root when one exists in the field.
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Mod { value, p } => tonelli_shanks(*value, *p).map(|r| Scalar::Mod { value: r, p: *p }),
            Scalar::Rat(r) => {
                if r.is_negative() || !is_perfect_square(r.numer()) || !is_perfect_square(r.denom()) {
                    return None;
                }
                Some(Scalar::Rat(BigRational::new(r.numer().sqrt(), r.denom().sqrt())))
            }
        }
    }

    /// Integer form for prime fields (residue) or `num/den` text for rationals.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Scalar::Mod { value, .. } => serde_json::Value::from(*value),
            Scalar::Rat(r) => serde_json::Value::String(rat_string(r)),
        }
    }

    pub fn from_json(field: Field, v: &serde_json::Value) -> Result<Scalar> {
        match v {
            serde_json::Value::Number(n) => {
                let n = n
                    .as_i64()
                    .ok_or_else(|| Error::Parse(format!("integer out of range: {n}")))?;
                Ok(field.from_i64(n))
            }
            serde_json::Value::String(s) => Scalar::parse(field, s),
            other => Err(Error::Parse(format!("bad scalar {other}"))),
        }
    }

    pub fn parse(field: Field, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| Error::Parse(format!("bad scalar {s:?}")))?;
        let den: BigInt = den.parse().map_err(|_| Error::Parse(format!("bad scalar {s:?}")))?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match field {
            Field::Rational => Ok(Scalar::Rat(BigRational::new(num, den))),
            Field::Prime { p } => {
                let pb = BigInt::from(p);
                let n = num.mod_floor(&pb).to_i64().unwrap();
                let d = den.mod_floor(&pb).to_i64().unwrap();
                field.from_frac(n, d)
            }
        }
    }
}

fn rat_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn tonelli_shanks(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let (mut m, mut c, mut t, mut r) = (s, pow_mod(z, q, p), pow_mod(a, q, p), pow_mod(a, q.div_ceil(2), p));
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulm(t2, t2);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulm(b, b);
        t = mulm(t, c);
        r = mulm(r, b);
    }
    Some(r)
}

fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let s = n.sqrt();
    &s * &s == *n
}

fn squarefree_part(n: &BigInt) -> BigInt {
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.abs();
    let mut out = BigInt::one();
    let mut d = BigInt::from(2);
    while &d * &d <= m {
        let mut e = 0;
        while (&m % &d).is_zero() {
            m /= &d;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &d;
        }
        d += 1;
    }
    out * m * sign
}

/// Square class of a nonzero scalar.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SquareClass {
    Square,
    NonSquare,
    /// Signed squarefree integer representative (rationals).
    Squarefree(String),
}

impl SquareClass {
    /// Canonical representative: 1, the least nonsquare residue, or the
    /// squarefree integer.
    pub fn representative(&self, field: Field) -> Scalar {
        match self {
            SquareClass::Square => field.one(),
            SquareClass::NonSquare => {
                let p = field.modulus().unwrap_or(3);
                (2..p)
                    .map(|k| field.from_i64(k as i64))
                    .find(|c| !c.is_square().unwrap_or(true))
                    .unwrap_or_else(|| field.from_i64(-1))
            }
            SquareClass::Squarefree(s) => Scalar::parse(field, s).unwrap_or_else(|_| field.one()),
        }
    }

    pub fn is_square(&self) -> bool {
        match self {
            SquareClass::Square => true,
            SquareClass::NonSquare => false,
            SquareClass::Squarefree(s) => s == "1",
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod { value, .. } => write!(f, "{value}"),
            Scalar::Rat(r) => write!(f, "{}", rat_string(r)),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect("scalar arithmetic")
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.from_i64(2).inv().unwrap(), f3.from_i64(2));
        let q = Field::rational();
        let s = q.from_frac(1, 2).unwrap() + q.from_frac(1, 3).unwrap();
        assert_eq!(s, q.from_frac(5, 6).unwrap());
        assert!((-f3.zero()).is_zero());
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(Field::prime(2).is_err());
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(13).is_ok());
    }

    #[test]
    fn errors() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.zero().inv(), Err(Error::DivisionByZero));
        let q = Field::rational();
        assert!(matches!(
            f5.one().checked_add(&q.one()),
            Err(Error::FieldMismatch(..))
        ));
        assert!(f5.zero().is_square().is_err());
    }

    #[test]
    fn squares() {
        let f3 = Field::prime(3).unwrap();
        let f5 = Field::prime(5).unwrap();
        assert!(!(-f3.one()).is_square().unwrap());
        assert!((-f5.one()).is_square().unwrap());
        let q = Field::rational();
        assert!(q.from_frac(4, 9).unwrap().is_square().unwrap());
        assert!(!q.from_frac(2, 9).unwrap().is_square().unwrap());
        assert!(!q.from_i64(-4).is_square().unwrap());
        assert_eq!(
            q.from_frac(-8, 3).unwrap().square_class().unwrap(),
            SquareClass::Squarefree("-6".into())
        );
    }

    #[test]
    fn euler_matches_brute_force() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let f = Field::prime(p).unwrap();
            let squares: Vec<u64> = (1..p).map(|b| b * b % p).collect();
            for a in 1..p {
                assert_eq!(
                    f.from_i64(a as i64).is_square().unwrap(),
                    squares.contains(&a),
                    "p={p} a={a}"
                );
            }
            assert_eq!((-f.one()).is_square().unwrap(), p % 4 == 1);
            for a in 1..p as i64 {
                let x = f.from_i64(a);
                match x.sqrt() {
                    Some(r) => assert_eq!(&r * &r, x),
                    None => assert!(!x.is_square().unwrap()),
                }
            }
        }
        let q = Field::rational();
        assert_eq!(q.from_frac(9, 4).unwrap().sqrt(), Some(q.from_frac(3, 2).unwrap()));
        assert_eq!(q.from_i64(2).sqrt(), None);
    }

    #[test]
    fn parse_roundtrip() {
        let q = Field::rational();
        let x = Scalar::parse(q, "6/-4").unwrap();
        assert_eq!(x.to_string(), "-3/2");
        assert_eq!(Scalar::from_json(q, &x.to_json()).unwrap(), x);
        let f7 = Field::prime(7).unwrap();
        assert_eq!(Scalar::parse(f7, "1/2").unwrap(), f7.from_i64(4));
        let d: Field = serde_json::from_str(r#"{"kind":"prime","p":3}"#).unwrap();
        assert_eq!(d, Field::prime(3).unwrap());
        assert_eq!(serde_json::to_string(&Field::Rational).unwrap(), r#"{"kind":"rational"}"#);
    }
}
