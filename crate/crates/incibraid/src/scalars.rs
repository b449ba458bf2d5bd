//! Exact field elements: arbitrary-precision rationals and prime fields.
//!
//! The field is chosen at runtime (files declare it in a header), so a
//! scalar carries its field with it. Mixing fields in an operator panics;
//! the `try_*` methods return an error instead.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Bound on numerator and denominator magnitude of random rationals.
pub const RANDOM_HEIGHT: i64 = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("malformed scalar {0:?}")]
    Parse(String),
}

/// Which field a scalar lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

impl Field {
    /// GF(p); rejects composite moduli. Moduli are kept below 2^32.
    pub fn prime(p: u64) -> Result<Field, ScalarError> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(ScalarError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    /// Number of elements, `None` for Q.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(*p),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.int(0)
    }

    pub fn one(&self) -> Scalar {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Fp {
                v: n.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    pub fn ratio(&self, n: i64, d: i64) -> Result<Scalar, ScalarError> {
        self.int(n).try_div(&self.int(d))
    }

    /// All elements of a prime field in residue order.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        self.order()
            .map(|p| (0..p).map(|v| Scalar::Fp { v, p }).collect())
    }

    /// Parses "num/den", an integer, or "k mod p" into this field.
    pub fn parse(&self, s: &str) -> Result<Scalar, ScalarError> {
        let bad = || ScalarError::Parse(s.to_string());
        let t = s.trim();
        if let Some((k, m)) = t.split_once("mod") {
            let p: u64 = m.trim().parse().map_err(|_| bad())?;
            if *self != Field::Prime(p) {
                return Err(bad());
            }
            let k: i64 = k.trim().parse().map_err(|_| bad())?;
            return Ok(self.int(k));
        }
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        match *self {
            Field::Rational => Ok(Scalar::Rat(BigRational::new(n, d))),
            Field::Prime(p) => {
                let reduce = |x: &BigInt| {
                    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
                };
                let (n, d) = (reduce(&n), reduce(&d));
                let n = Scalar::Fp { v: n, p };
                n.try_div(&Scalar::Fp { v: d, p }).map_err(|_| bad())
            }
        }
    }

    /// Uniform in GF(p); over Q a rational with |num|, den <= 100.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, nonzero: bool) -> Scalar {
        loop {
            let x = match *self {
                Field::Rational => {
                    let n = rng.gen_range(-RANDOM_HEIGHT..=RANDOM_HEIGHT);
                    let d = rng.gen_range(1..=RANDOM_HEIGHT);
                    self.ratio(n, d).unwrap()
                }
                Field::Prime(p) => Scalar::Fp {
                    v: rng.gen_range(0..p),
                    p,
                },
            };
            if !nonzero || !x.is_zero() {
                return x;
            }
        }
    }

    /// A primitive n-th root of unity, if the field has one.
    pub fn primitive_root_of_unity(&self, n: u64) -> Option<Scalar> {
        if n == 0 {
            return None;
        }
        match *self {
            Field::Rational => match n {
                1 => Some(self.one()),
                2 => Some(self.int(-1)),
                _ => None,
            },
            Field::Prime(p) => {
                if (p - 1) % n != 0 {
                    return None;
                }
                (1..p).map(|v| Scalar::Fp { v, p }).find(|x| x.multiplicative_order() == Some(n))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "Q" {
            return Ok(Field::Rational);
        }
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| ScalarError::Parse(s.to_string()))?;
        let p: u64 = inner.trim().parse().map_err(|_| ScalarError::Parse(s.to_string()))?;
        Field::prime(p)
    }
}

/// Deterministic random element for a seed.
pub fn random_scalar(field: Field, nonzero: bool, seed: u64) -> Scalar {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    field.sample(&mut rng, nonzero)
}

pub fn primitive_root_of_unity(n: u64, field: Field) -> Option<Scalar> {
    field.primitive_root_of_unity(n)
}

/// One binary operation with field and zero-divisor checks.
pub fn field_arithmetic(a: &Scalar, b: &Scalar, op: Op) -> Result<Scalar, ScalarError> {
    match op {
        Op::Add => a.try_add(b),
        Op::Sub => a.try_sub(b),
        Op::Mul => a.try_mul(b),
        Op::Div => a.try_div(b),
    }
}

/// An exact field element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fp { v: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Rational,
            Scalar::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    fn check(&self, o: &Scalar) -> Result<(), ScalarError> {
        if self.field() == o.field() {
            Ok(())
        } else {
            Err(ScalarError::FieldMismatch(self.field(), o.field()))
        }
    }

    pub fn try_add(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(o)?;
        Ok(match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: (a + b) % p,
                p: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_add(&-o)
    }

    pub fn try_mul(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(o)?;
        Ok(match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: a * b % p,
                p: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rat(a) => Scalar::Rat(a.recip()),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: pow_mod(*v, p - 2, *p),
                p: *p,
            },
        })
    }

    pub fn try_div(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(o)?;
        self.try_mul(&o.inv()?)
    }

    pub fn pow(&self, e: u64) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(num_traits::pow(a.clone(), e as usize)),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: pow_mod(*v, e, *p),
                p: *p,
            },
        }
    }

    /// Integer power, negative exponents invert.
    pub fn powi(&self, e: i64) -> Result<Scalar, ScalarError> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Order in the multiplicative group; `None` for zero or infinite order.
    pub fn multiplicative_order(&self) -> Option<u64> {
        match self {
            Scalar::Rat(a) => {
                if a.is_one() {
                    Some(1)
                } else if (-a).is_one() {
                    Some(2)
                } else {
                    None
                }
            }
            Scalar::Fp { v, p } => {
                if *v == 0 {
                    return None;
                }
                let mut x = *v;
                let mut k = 1;
                while x != 1 {
                    x = ((x as u128 * *v as u128) % *p as u128) as u64;
                    k += 1;
                }
                Some(k)
            }
        }
    }

    /// Some n-th root in the field, if one exists.
    pub fn nth_root(&self, n: u64) -> Option<Scalar> {
        if n == 0 {
            return None;
        }
        match self {
            Scalar::Fp { p, .. } => {
                (0..*p).map(|v| Scalar::Fp { v, p: *p }).find(|x| &x.pow(n) == self)
            }
            Scalar::Rat(a) => {
                let neg = a.is_negative();
                if neg && n % 2 == 0 {
                    return None;
                }
                let num = int_root(&a.numer().abs(), n)?;
                let den = int_root(a.denom(), n)?;
                let r = BigRational::new(num, den);
                Some(Scalar::Rat(if neg { -r } else { r }))
            }
        }
    }

    /// The canonical residue, for prime-field scalars.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Fp { v, .. } => Some(*v),
            Scalar::Rat(_) => None,
        }
    }
}

impl Scalar {
    /// The value without its field: `3`, `-1/2`, or a residue.
    pub fn plain(&self) -> String {
        match self {
            Scalar::Rat(a) if a.is_integer() => a.numer().to_string(),
            Scalar::Rat(a) => format!("{}/{}", a.numer(), a.denom()),
            Scalar::Fp { v, .. } => v.to_string(),
        }
    }
}

fn int_root(x: &BigInt, n: u64) -> Option<BigInt> {
    let r = x.nth_root(n as u32);
    if num_traits::pow(r.clone(), n as usize) == *x {
        Some(r)
    } else {
        None
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(a) => write!(f, "{}/{}", a.numer(), a.denom()),
            Scalar::Fp { v, p } => write!(f, "{v} mod {p}"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: (p - v) % p,
                p: *p,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                self.$try(o).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$m(&o)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_examples() {
        let q = Field::Rational;
        let half = q.ratio(1, 2).unwrap();
        let third = q.ratio(1, 3).unwrap();
        assert_eq!(&half + &third, q.ratio(5, 6).unwrap());
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.int(2) * f5.int(3), f5.one());
        assert_eq!(
            field_arithmetic(&q.one(), &q.zero(), Op::Div),
            Err(ScalarError::DivisionByZero)
        );
        assert!(matches!(
            q.one().try_add(&f5.one()),
            Err(ScalarError::FieldMismatch(..))
        ));
    }

    #[test]
    fn parse_and_print() {
        let q = Field::Rational;
        assert_eq!(q.parse("-6/4").unwrap().to_string(), "-3/2");
        assert_eq!(q.parse("7").unwrap().to_string(), "7/1");
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.parse("-1").unwrap().to_string(), "4 mod 5");
        assert_eq!(f5.parse("1/2").unwrap(), f5.int(3));
        assert_eq!(f5.parse("3 mod 5").unwrap(), f5.int(3));
        assert!(f5.parse("3 mod 7").is_err());
        assert!(q.parse("1/0").is_err());
        assert_eq!("GF(7)".parse::<Field>().unwrap(), Field::Prime(7));
        assert!("GF(8)".parse::<Field>().is_err());
    }

    #[test]
    fn roots() {
        let q = Field::Rational;
        assert_eq!(q.primitive_root_of_unity(1), Some(q.one()));
        assert_eq!(q.primitive_root_of_unity(2), Some(q.int(-1)));
        assert_eq!(q.primitive_root_of_unity(3), None);
        let f5 = Field::prime(5).unwrap();
        let w = f5.primitive_root_of_unity(4).unwrap();
        assert_eq!(w.pow(4), f5.one());
        assert!((1..4).all(|k| !w.pow(k).is_one()));
        assert_eq!(q.ratio(9, 4).unwrap().nth_root(2), Some(q.ratio(3, 2).unwrap()));
        assert_eq!(q.int(-8).nth_root(3), Some(q.int(-2)));
        assert_eq!(q.int(2).nth_root(2), None);
        assert_eq!(f5.int(-1).nth_root(2).map(|x| x.pow(2)), Some(f5.int(4)));
    }

    #[test]
    fn random_is_deterministic() {
        let f3 = Field::prime(3).unwrap();
        for s in 0..20 {
            let x = random_scalar(f3, true, s);
            assert!(!x.is_zero());
            assert_eq!(x, random_scalar(f3, true, s));
        }
        assert_eq!(random_scalar(Field::Prime(2), true, 9), Field::Prime(2).one());
        assert_eq!(
            random_scalar(Field::Rational, false, 4),
            random_scalar(Field::Rational, false, 4)
        );
    }
}
