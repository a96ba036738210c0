//! Coefficient domains: exact rationals over big integers, and `f64`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Field operations shared by every coefficient type, including the lazy
/// ones ([`crate::Series`], [`crate::Dif`]) so that they can nest.
///
/// `is_zero` is allowed to be conservative: lazy types answer `true` only
/// for their compact zero representation and never force anything.
pub trait Coeff: Clone + fmt::Debug + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn try_div(&self, rhs: &Self) -> Result<Self>;
}

/// Scalar elementary functions. Exact rationals only support the arguments
/// whose results stay rational (`exp 0`, `log 1`, perfect squares, ...).
pub trait Elementary: Coeff {
    fn try_exp(&self) -> Result<Self>;
    fn try_ln(&self) -> Result<Self>;
    fn try_sqrt(&self) -> Result<Self>;
    fn try_sin(&self) -> Result<Self>;
    fn try_cos(&self) -> Result<Self>;
    fn try_atan(&self) -> Result<Self>;
    fn try_asin(&self) -> Result<Self>;
    fn try_pow(&self, a: &Self) -> Result<Self>;
    /// `self > 0`, where that question can be answered.
    fn is_positive(&self) -> bool;
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn try_div(&self, rhs: &Self) -> Result<Self> {
        if *rhs == 0.0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(self / rhs)
        }
    }
}

impl Elementary for f64 {
    fn try_exp(&self) -> Result<Self> {
        Ok(self.exp())
    }
    fn try_ln(&self) -> Result<Self> {
        if *self > 0.0 {
            Ok(self.ln())
        } else {
            Err(Error::domain("log", format!("argument {self} is not positive")))
        }
    }
    fn try_sqrt(&self) -> Result<Self> {
        if *self >= 0.0 {
            Ok(self.sqrt())
        } else {
            Err(Error::domain("sqrt", format!("argument {self} is negative")))
        }
    }
    fn try_sin(&self) -> Result<Self> {
        Ok(self.sin())
    }
    fn try_cos(&self) -> Result<Self> {
        Ok(self.cos())
    }
    fn try_atan(&self) -> Result<Self> {
        Ok(self.atan())
    }
    fn try_asin(&self) -> Result<Self> {
        if self.abs() <= 1.0 {
            Ok(self.asin())
        } else {
            Err(Error::domain("asin", format!("|{self}| > 1")))
        }
    }
    fn try_pow(&self, a: &Self) -> Result<Self> {
        if *self > 0.0 || a.fract() == 0.0 {
            Ok(self.powf(*a))
        } else {
            Err(Error::domain("pow", format!("{self}^{a} is not real")))
        }
    }
    fn is_positive(&self) -> bool {
        *self > 0.0
    }
}

/// Exact rational number, always reduced, denominator positive.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn from_parts(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational> {
        if rhs.0.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Rational(&self.0 / &rhs.0))
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    fn exact_sqrt(&self) -> Option<Rational> {
        if self.0.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        (&n * &n == *self.numer() && &d * &d == *self.denom())
            .then(|| Rational(BigRational::new(n, d)))
    }

    fn integer_pow(&self, e: &BigInt) -> Result<Rational> {
        let e = e
            .to_i32()
            .ok_or_else(|| Error::domain("pow", "exponent too large"))?;
        if e < 0 && self.0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(num_traits::pow::Pow::pow(&self.0, e)))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parameter(format!("not a rational: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => Rational::from_parts(
                n.trim().parse::<BigInt>().map_err(|_| bad())?,
                d.trim().parse::<BigInt>().map_err(|_| bad())?,
            ),
            None => Ok(Rational::from_integer(
                s.parse::<BigInt>().map_err(|_| bad())?,
            )),
        }
    }
}

macro_rules! rational_op {
    ($tr:ident, $method:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

rational_op!(Add, add);
rational_op!(Sub, sub);
rational_op!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Coeff for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(n)
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn try_div(&self, rhs: &Self) -> Result<Self> {
        self.checked_div(rhs)
    }
}

impl Elementary for Rational {
    fn try_exp(&self) -> Result<Self> {
        if self.is_zero() {
            Ok(Self::one())
        } else {
            Err(Error::domain("exp", format!("exp({self}) is not rational")))
        }
    }
    fn try_ln(&self) -> Result<Self> {
        if self.0.is_one() {
            Ok(Self::zero())
        } else {
            Err(Error::domain("log", format!("log({self}) is not rational")))
        }
    }
    fn try_sqrt(&self) -> Result<Self> {
        self.exact_sqrt()
            .ok_or_else(|| Error::domain("sqrt", format!("sqrt({self}) is not rational")))
    }
    fn try_sin(&self) -> Result<Self> {
        if self.is_zero() {
            Ok(Self::zero())
        } else {
            Err(Error::domain("sin", format!("sin({self}) is not rational")))
        }
    }
    fn try_cos(&self) -> Result<Self> {
        if self.is_zero() {
            Ok(Self::one())
        } else {
            Err(Error::domain("cos", format!("cos({self}) is not rational")))
        }
    }
    fn try_atan(&self) -> Result<Self> {
        if self.is_zero() {
            Ok(Self::zero())
        } else {
            Err(Error::domain("atan", format!("atan({self}) is not rational")))
        }
    }
    fn try_asin(&self) -> Result<Self> {
        if self.is_zero() {
            Ok(Self::zero())
        } else {
            Err(Error::domain("asin", format!("asin({self}) is not rational")))
        }
    }
    fn try_pow(&self, a: &Self) -> Result<Self> {
        if self.0.is_one() {
            return Ok(Self::one());
        }
        if a.is_integer() {
            return self.integer_pow(a.numer());
        }
        if a.denom() == &BigInt::from(2) {
            if let Some(root) = self.exact_sqrt() {
                return root.integer_pow(a.numer());
            }
        }
        Err(Error::domain("pow", format!("{self}^({a}) is not rational")))
    }
    fn is_positive(&self) -> bool {
        self.0.is_positive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_parts(n, d).unwrap()
    }

    #[test]
    fn arithmetic() {
        assert_eq!(q(1, 4) + q(1, 32), q(9, 32));
        assert_eq!(q(3, 4) * q(4, 3), Rational::one());
        assert_eq!(q(1, 1).checked_div(&Rational::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn from_parts_normalizes() {
        assert_eq!(q(6, 4).to_string(), "3/2");
        assert_eq!(q(-2, -4).to_string(), "1/2");
        let z = q(0, 7);
        assert_eq!((z.numer().clone(), z.denom().clone()), (0.into(), 1.into()));
        assert_eq!(Rational::from_parts(1, 0), Err(Error::DivisionByZero));
    }

    #[test]
    fn text_form() {
        assert_eq!(q(75, 2048).to_string(), "75/2048");
        assert_eq!(q(5, 1).to_string(), "5");
        assert_eq!(q(-3, 128).to_string(), "-3/128");
        assert_eq!("-3/128".parse::<Rational>().unwrap(), q(-3, 128));
        assert_eq!("12".parse::<Rational>().unwrap(), q(12, 1));
        assert!("1/0".parse::<Rational>().is_err());
    }

    #[test]
    fn exact_elementary_cases() {
        assert_eq!(Rational::zero().try_exp().unwrap(), Rational::one());
        assert_eq!(Rational::one().try_ln().unwrap(), Rational::zero());
        assert_eq!(q(9, 4).try_sqrt().unwrap(), q(3, 2));
        assert!(q(2, 1).try_sqrt().is_err());
        assert_eq!(q(4, 9).try_pow(&q(-1, 2)).unwrap(), q(3, 2));
        assert_eq!(q(2, 3).try_pow(&q(-2, 1)).unwrap(), q(9, 4));
        assert!(q(2, 1).try_pow(&q(1, 3)).is_err());
        assert!(q(2, 1).try_exp().is_err());
    }

    #[test]
    fn float_domains() {
        assert!(0.0f64.try_ln().is_err());
        assert!((-1.0f64).try_sqrt().is_err());
        assert!(1.5f64.try_asin().is_err());
        assert_eq!(1.0f64.try_div(&0.0), Err(Error::DivisionByZero));
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..40).prop_map(|(n, d)| q(n, d))
    }

    fn reduced(r: &Rational) -> bool {
        use num_integer::Integer;
        r.denom() > &BigInt::zero() && r.numer().gcd(r.denom()) == BigInt::one()
    }

    proptest! {
        #[test]
        fn stays_reduced(a in small(), b in small()) {
            prop_assert!(reduced(&(&a + &b)));
            prop_assert!(reduced(&(&a - &b)));
            prop_assert!(reduced(&(&a * &b)));
            if !b.is_zero() {
                prop_assert!(reduced(&a.checked_div(&b).unwrap()));
            }
        }

        #[test]
        fn field_laws(a in small(), b in small(), c in small()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                prop_assert_eq!(a.checked_div(&a).unwrap(), Rational::one());
            }
        }
    }
}
