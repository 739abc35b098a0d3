//! Ground fields and their elements.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rat::Rat;
use super::LinalgError;

/// The ground field of a computation: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    /// The field of rational numbers.
    Rational,
    /// The prime field with the given modulus, a prime below `2^31`.
    Prime(u32),
}

impl Field {
    /// Builds the prime field `F_p`, checking that `p` is a prime below `2^31`.
    pub fn prime(p: u32) -> Result<Field, LinalgError> {
        if !(2..1 << 31).contains(&p) || !is_prime(p) {
            return Err(LinalgError::BadModulus(p));
        }
        Ok(Field::Prime(p))
    }

    /// Additive identity.
    pub fn zero(self) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(Rat::ZERO),
            Field::Prime(p) => Scalar::P(0, p),
        }
    }

    /// Multiplicative identity.
    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    /// Image of an integer.
    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(Rat::from_int(n)),
            Field::Prime(p) => Scalar::P(n.rem_euclid(p as i64) as u32, p),
        }
    }

    /// Image of an exact rational, failing when its denominator is not invertible.
    pub fn from_rat(self, r: &Rat) -> Result<Scalar, LinalgError> {
        match self {
            Field::Rational => Ok(Scalar::Q(r.clone())),
            Field::Prime(p) => r
                .reduce_mod(p)
                .map(|v| Scalar::P(v, p))
                .ok_or_else(|| LinalgError::NotInvertible(r.denom().to_string())),
        }
    }

    /// Parses an exact fraction `"p/q"` or integer `"p"` into this field.
    pub fn parse(self, s: &str) -> Result<Scalar, LinalgError> {
        let r: Rat = s.parse().map_err(|e: super::rat::ParseRatError| LinalgError::Parse(e.0))?;
        self.from_rat(&r)
    }

    /// The sign `(-1)^e`.
    pub fn sign(self, e: i64) -> Scalar {
        if e.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.from_i64(-1)
        }
    }

    /// True iff the integer `n >= 1` is invertible in this field.
    pub fn unit_check(self, n: u64) -> bool {
        match self {
            Field::Rational => n != 0,
            Field::Prime(p) => !n.is_multiple_of(p as u64),
        }
    }

    /// The smallest positive integer that is not invertible, `None` for infinity.
    pub fn first_non_unit(self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(p as u64),
        }
    }

    /// True iff `n!` is invertible.
    pub fn factorial_is_unit(self, n: u64) -> bool {
        match self.first_non_unit() {
            None => true,
            Some(p) => n < p,
        }
    }

    /// Textual form used in files: `"Q"` or `"Fp:<p>"`.
    pub fn tag(self) -> String {
        match self {
            Field::Rational => "Q".to_string(),
            Field::Prime(p) => format!("Fp:{p}"),
        }
    }

    /// Inverse of [`Field::tag`].
    pub fn from_tag(s: &str) -> Result<Field, LinalgError> {
        let t = s.trim();
        if t == "Q" {
            return Ok(Field::Rational);
        }
        let p = t
            .strip_prefix("Fp:")
            .and_then(|p| p.trim().parse::<u32>().ok())
            .ok_or_else(|| LinalgError::Parse(format!("unknown field {t:?}, expected \"Q\" or \"Fp:<p>\"")))?;
        Field::prime(p)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if (p as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Inverse of `a` modulo `m`, when it exists.
pub(crate) fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// An element of a [`Field`].
///
/// Mixing elements of different fields in one operation is a programming
/// error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    /// A rational number.
    Q(Rat),
    /// A residue `v` in `[0, p)` of the prime field `F_p`, stored as `(v, p)`.
    P(u32, u32),
}

impl Scalar {
    /// The field this element belongs to.
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::P(_, p) => Field::Prime(*p),
        }
    }

    /// True for zero.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::P(v, _) => *v == 0,
        }
    }

    /// True for one.
    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::P(v, _) => *v == 1,
        }
    }

    /// Multiplicative inverse; dividing by zero is an error.
    pub fn inv(&self) -> Result<Scalar, LinalgError> {
        match self {
            Scalar::Q(r) => r.inv().map(Scalar::Q).ok_or(LinalgError::DivisionByZero),
            Scalar::P(v, p) => mod_inverse(*v as u64, *p as u64)
                .map(|i| Scalar::P(i as u32, *p))
                .ok_or(LinalgError::DivisionByZero),
        }
    }

    /// Quotient `self / other`.
    pub fn div(&self, other: &Scalar) -> Result<Scalar, LinalgError> {
        Ok(self * &other.inv()?)
    }

    /// Negation in place.
    pub fn negate(&mut self) {
        *self = -&*self;
    }

    fn check(a: u32, b: u32) {
        assert_eq!(a, b, "scalars from different prime fields combined");
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{r}"),
            Scalar::P(v, _) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Deserializes as a rational; callers map into the active field afterwards.
impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<Rat>().map(Scalar::Q).map_err(serde::de::Error::custom)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a.add(b)),
            (Scalar::P(a, p), Scalar::P(b, q)) => {
                Scalar::check(*p, *q);
                Scalar::P(((*a as u64 + *b as u64) % *p as u64) as u32, *p)
            }
            _ => panic!("rational and prime-field scalars combined"),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a.mul(b)),
            (Scalar::P(a, p), Scalar::P(b, q)) => {
                Scalar::check(*p, *q);
                Scalar::P(((*a as u64 * *b as u64) % *p as u64) as u32, *p)
            }
            _ => panic!("rational and prime-field scalars combined"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(a.neg()),
            Scalar::P(0, p) => Scalar::P(0, *p),
            Scalar::P(a, p) => Scalar::P(p - a, *p),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_check_examples() {
        assert!(Field::Rational.unit_check(7));
        let f5 = Field::prime(5).unwrap();
        assert!(!f5.unit_check(10));
        assert!(f5.unit_check(24));
        assert!(f5.factorial_is_unit(4));
        assert!(!f5.factorial_is_unit(5));
        assert_eq!(f5.first_non_unit(), Some(5));
        assert_eq!(Field::Rational.first_non_unit(), None);
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(2_147_483_659).is_err());
        assert!(Field::prime(2_147_483_647).is_ok());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(7).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(5);
        assert_eq!(&a + &b, f.from_i64(1));
        assert_eq!(&a * &b, f.from_i64(1));
        assert_eq!(a.inv().unwrap(), b);
        assert_eq!(-&a, f.from_i64(4));
        assert!(f.zero().inv().is_err());
        assert_eq!(f.parse("1/2").unwrap(), f.from_i64(4));
        assert!(f.parse("1/7").is_err());
    }

    #[test]
    fn rational_division_by_zero_is_error() {
        let q = Field::Rational;
        assert!(q.one().div(&q.zero()).is_err());
        assert_eq!(q.from_i64(3).div(&q.from_i64(6)).unwrap(), q.parse("1/2").unwrap());
    }

    #[test]
    fn field_tags_round_trip() {
        for f in [Field::Rational, Field::Prime(5), Field::Prime(7)] {
            assert_eq!(Field::from_tag(&f.tag()).unwrap(), f);
        }
        assert!(Field::from_tag("R").is_err());
    }
}
