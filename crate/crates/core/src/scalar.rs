//! Exact scalar fields.
//!
//! Arithmetic is routed through a [`Field`] context object so that prime
//! fields with a runtime modulus and the rationals share one generic code
//! path. Elements themselves carry no field information.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("malformed scalar string {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("denominator of {value} is divisible by {p}")]
    NotIntegral { value: String, p: u64 },
    #[error("residue {value} out of range for p = {p}")]
    ResidueRange { value: u64, p: u64 },
}

/// A field with exact arithmetic.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// 0 for the rationals, p for F_p.
    fn characteristic(&self) -> u64;
    /// Image of a rational number; fails when the denominator is not invertible.
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem, ScalarError>;
    fn to_scalar(&self, a: &Self::Elem) -> Scalar;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// `acc += a * b`.
    fn add_mul(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        *acc = self.add(acc, &self.mul(a, b));
    }

    fn sign(&self, negative: bool) -> Self::Elem {
        if negative {
            self.neg(&self.one())
        } else {
            self.one()
        }
    }
}

/// The field of rational numbers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational, ScalarError> {
        Ok(q.clone())
    }
    fn to_scalar(&self, a: &BigRational) -> Scalar {
        Scalar::Rational(a.clone())
    }
    fn add_mul(&self, acc: &mut BigRational, a: &BigRational, b: &BigRational) {
        *acc += a * b;
    }
}

/// The prime field F_p for an odd prime p < 2^31.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, ScalarError> {
        if !is_odd_prime(p) || p >= (1 << 31) {
            return Err(ScalarError::NotOddPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn from_rational(&self, q: &BigRational) -> Result<u64, ScalarError> {
        let p = BigInt::from(self.p);
        let den = q.denom().mod_floor(&p);
        if den.is_zero() {
            return Err(ScalarError::NotIntegral { value: format_rational(q), p: self.p });
        }
        let num = q.numer().mod_floor(&p).to_u64().expect("residue fits");
        let den = den.to_u64().expect("residue fits");
        Ok(self.mul(&num, &self.inv(&den).expect("nonzero")))
    }
    fn to_scalar(&self, a: &u64) -> Scalar {
        Scalar::Modular { value: *a, p: self.p }
    }
    fn add_mul(&self, acc: &mut u64, a: &u64, b: &u64) {
        *acc = (*acc + a * b) % self.p;
    }
}

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A field-tagged scalar, used at serialization boundaries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular { value: u64, p: u64 },
}

impl Scalar {
    pub fn rational(n: i64, d: i64) -> Scalar {
        Scalar::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Modular { .. } => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => f.write_str(&format_rational(q)),
            Scalar::Modular { value, p } => write!(f, "{value} mod {p}"),
        }
    }
}

/// Always `num/den` with a positive reduced denominator.
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `n` or `n/d`; rejects a zero denominator.
pub fn parse_rational(s: &str) -> Result<BigRational, ScalarError> {
    let malformed = || ScalarError::Malformed(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| malformed())?;
    let den = BigInt::from_str(den).map_err(|_| malformed())?;
    if den.is_zero() {
        return Err(ScalarError::ZeroDenominator(s.to_string()));
    }
    Ok(BigRational::new(num, den))
}

/// True when `q` is the square of a rational; returns the non-negative root.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

#[derive(Serialize, Deserialize)]
struct ModularRepr {
    value: u64,
    p: u64,
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Rational(q) => s.serialize_str(&format_rational(q)),
            Scalar::Modular { value, p } => ModularRepr { value: *value, p: *p }.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Residue(ModularRepr),
        }
        match Repr::deserialize(d)? {
            Repr::Text(s) => parse_rational(&s).map(Scalar::Rational).map_err(serde::de::Error::custom),
            Repr::Residue(ModularRepr { value, p }) => {
                if !is_odd_prime(p) {
                    return Err(serde::de::Error::custom(ScalarError::NotOddPrime(p)));
                }
                if value >= p {
                    return Err(serde::de::Error::custom(ScalarError::ResidueRange { value, p }));
                }
                Ok(Scalar::Modular { value, p })
            }
        }
    }
}

/// Serde adapter for rationals stored as `num/den` strings.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.pow(&3, 6), 1);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f.from_rational(&half).unwrap(), 4);
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(9).is_err());
    }

    #[test]
    fn rational_strings_round_trip() {
        let q = parse_rational("-6/4").unwrap();
        assert_eq!(format_rational(&q), "-3/2");
        assert_eq!(parse_rational("5").unwrap(), BigRational::from_integer(5.into()));
        assert!(matches!(parse_rational("1/0"), Err(ScalarError::ZeroDenominator(_))));
        assert!(parse_rational("x/2").is_err());
    }

    #[test]
    fn scalar_json() {
        let s = Scalar::rational(2, -4);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, "\"-1/2\"");
        assert_eq!(serde_json::from_str::<Scalar>(&j).unwrap(), s);
        let m = Scalar::Modular { value: 3, p: 5 };
        let j = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<Scalar>(&j).unwrap(), m);
        assert!(serde_json::from_str::<Scalar>("\"1/0\"").is_err());
        assert!(serde_json::from_str::<Scalar>("{\"value\":5,\"p\":5}").is_err());
    }

    #[test]
    fn square_roots() {
        assert_eq!(rational_sqrt(&parse_rational("9/4").unwrap()), Some(parse_rational("3/2").unwrap()));
        assert_eq!(rational_sqrt(&parse_rational("2").unwrap()), None);
        assert_eq!(rational_sqrt(&parse_rational("-1").unwrap()), None);
    }
}
