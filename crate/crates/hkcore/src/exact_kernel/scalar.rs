//! Exact rationals with a machine-word fast path.
//!
//! Values that fit in `i64/i64` stay inline; anything larger is promoted to
//! [`BigRational`] and demoted again as soon as it fits. The representation is
//! canonical, so derived equality and hashing agree with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::KernelError;

#[derive(Clone, Debug)]
enum Repr {
    /// numerator, denominator; denominator > 0 and gcd = 1
    Small(i64, i64),
    Big(BigRational),
}

/// An exact rational number in lowest terms.
#[derive(Clone, Debug)]
pub struct Scalar(Repr);

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Scalar(Repr::Small(1, 1))
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(Repr::Small(n, 1))
    }

    /// `n / d`; panics if `d == 0`.
    pub fn frac(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Self::from_i128(n as i128, d as i128)
    }

    fn from_i128(n: i128, d: i128) -> Self {
        let g = gcd_i128(n, d);
        let (mut n, mut d) = if g > 1 { (n / g, d / g) } else { (n, d) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Scalar(Repr::Small(n, d)),
            _ => Scalar(Repr::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    /// Takes an already-reduced big rational and demotes it if it fits.
    fn from_big(r: BigRational) -> Self {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            return Scalar(Repr::Small(n, d));
        }
        Scalar(Repr::Big(r))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(n))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        match &self.0 {
            Repr::Small(n, d) => Self::from_i128(*d as i128, *n as i128),
            Repr::Big(r) => Self::from_big(r.recip()),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact square root if this is the square of a rational.
    pub fn sqrt(&self) -> Option<Self> {
        match self.signum() {
            -1 => None,
            0 => Some(Scalar::zero()),
            _ => {
                let n = self.numer();
                let d = self.denom();
                let rn = n.sqrt();
                let rd = d.sqrt();
                if &rn * &rn == n && &rd * &rd == d {
                    Some(Self::from_big(BigRational::new(rn, rd)))
                } else {
                    None
                }
            }
        }
    }

    /// Bit length of numerator plus denominator; a proxy for height.
    pub fn height_bits(&self) -> u64 {
        match &self.0 {
            Repr::Small(n, d) => {
                (64 - n.unsigned_abs().leading_zeros() + 64 - d.unsigned_abs().leading_zeros()) as u64
            }
            Repr::Big(r) => r.numer().bits() + r.denom().bits(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Canonical `"p/q"` string (the denominator is always written).
    pub fn to_frac_string(&self) -> String {
        match &self.0 {
            Repr::Small(n, d) => format!("{n}/{d}"),
            Repr::Big(r) => format!("{}/{}", r.numer(), r.denom()),
        }
    }

    fn add_ref(&self, o: &Self) -> Self {
        match (&self.0, &o.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    return match a.checked_add(*c) {
                        Some(s) => Scalar(Repr::Small(s, 1)),
                        None => Self::from_i128(*a as i128 + *c as i128, 1),
                    };
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Self::from_i128(a * d + c * b, b * d)
            }
            _ => Self::from_big(big_add(&self.to_big(), &o.to_big())),
        }
    }

    fn mul_ref(&self, o: &Self) -> Self {
        match (&self.0, &o.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *a == 0 || *c == 0 {
                    return Scalar::zero();
                }
                if *b == 1 && *d == 1 {
                    return match a.checked_mul(*c) {
                        Some(p) => Scalar(Repr::Small(p, 1)),
                        None => Self::from_i128(*a as i128 * *c as i128, 1),
                    };
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Self::from_i128(a * c, b * d)
            }
            _ => {
                if self.is_zero() || o.is_zero() {
                    return Scalar::zero();
                }
                Self::from_big(big_mul(&self.to_big(), &o.to_big()))
            }
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Self) -> bool {
        match (&self.0, &o.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            _ => false,
        }
    }
}
impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, h: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(h);
                n.hash(h);
                d.hash(h);
            }
            Repr::Big(r) => {
                1u8.hash(h);
                r.hash(h);
            }
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Scalar {
    fn cmp(&self, o: &Self) -> Ordering {
        match (&self.0, &o.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&o.to_big()),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<i32> for Scalar {
    fn from(n: i32) -> Self {
        Scalar::from_int(n as i64)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_frac_string())
    }
}

impl FromStr for Scalar {
    type Err = KernelError;

    /// Accepts `"p/q"` or a bare integer `"p"`.
    fn from_str(s: &str) -> Result<Self, KernelError> {
        let s = s.trim();
        let bad = || KernelError::Parse(format!("not a rational: {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Self::from_big(BigRational::new(n, d)))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Small(n, d) => match n.checked_neg() {
                Some(m) => Scalar(Repr::Small(m, *d)),
                None => Scalar::from_i128(-(*n as i128), *d as i128),
            },
            Repr::Big(r) => Scalar::from_big(-r),
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
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Scalar = $body;
                f(self, o)
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

binop!(Add, add, |a, b| a.add_ref(b));
binop!(Sub, sub, |a, b| a.add_ref(&-b));
binop!(Mul, mul, |a, b| a.mul_ref(b));
binop!(Div, div, |a, b| a.mul_ref(&b.inv()));

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = self.add_ref(o);
    }
}
impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = self.add_ref(&-o);
    }
}
impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = self.mul_ref(o);
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(it: I) -> Scalar {
        it.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_frac_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Integer factorial as a scalar.
pub fn factorial(n: u32) -> Scalar {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Scalar::from_bigint(acc)
}

/// Least common multiple of denominators, used to clear a rational vector.
fn is_unit(x: &BigInt) -> bool {
    x.magnitude().is_one()
}

/// `gcd` that short-circuits on unit operands, where the binary algorithm of
/// the bigint crate needs one pass per bit.
fn gcd_fast(a: &BigInt, b: &BigInt) -> BigInt {
    if is_unit(a) || is_unit(b) {
        return BigInt::one();
    }
    a.gcd(b)
}

fn big_mul(x: &BigRational, y: &BigRational) -> BigRational {
    let (a, b, c, d) = (x.numer(), x.denom(), y.numer(), y.denom());
    let g1 = gcd_fast(a, d);
    let g2 = gcd_fast(c, b);
    let (n1, d2) = if g1.is_one() { (a.clone(), d.clone()) } else { (a / &g1, d / &g1) };
    let (n2, d1) = if g2.is_one() { (c.clone(), b.clone()) } else { (c / &g2, b / &g2) };
    BigRational::new_raw(n1 * n2, d1 * d2)
}

fn big_add(x: &BigRational, y: &BigRational) -> BigRational {
    let (a, b, c, d) = (x.numer(), x.denom(), y.numer(), y.denom());
    if is_unit(b) && is_unit(d) {
        return BigRational::new_raw(a + c, BigInt::one());
    }
    let (n, den) = if b == d { (a + c, b.clone()) } else { (a * d + c * b, b * d) };
    if n.is_zero() {
        return BigRational::zero();
    }
    let g = gcd_fast(&n, &den);
    if g.is_one() {
        BigRational::new_raw(n, den)
    } else {
        BigRational::new_raw(n / &g, den / &g)
    }
}

pub fn denominator_lcm<'a>(xs: impl IntoIterator<Item = &'a Scalar>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        assert_eq!(Scalar::frac(2, 4), Scalar::frac(-1, -2));
        assert_eq!(Scalar::frac(3, -6).to_string(), "-1/2");
        assert_eq!(Scalar::from_int(5).to_string(), "5/1");
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Scalar::from_int(i64::MAX);
        let s = &big + &big;
        assert_eq!(s.to_string(), format!("{}/1", 2 * (i64::MAX as i128)));
        let back = &s - &big;
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small(..)));
        let p = &big * &big;
        assert_eq!(&p / &big, big);
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0/1", "-7/3", "123456789012345678901234567891/7"] {
            let x: Scalar = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
        assert_eq!("4".parse::<Scalar>().unwrap(), Scalar::from_int(4));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
    }

    #[test]
    fn ordering_and_sqrt() {
        assert!(Scalar::frac(1, 3) < Scalar::frac(1, 2));
        assert_eq!(Scalar::frac(9, 4).sqrt(), Some(Scalar::frac(3, 2)));
        assert_eq!(Scalar::frac(3, 1).sqrt(), None);
        assert_eq!(Scalar::frac(-1, 1).sqrt(), None);
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), Scalar::one());
        assert_eq!(factorial(5), Scalar::from_int(120));
    }
}

#[cfg(test)]
mod arithmetic_props {
    use super::*;
    use proptest::prelude::*;

    fn big(parts: &[(i64, i64)]) -> (Scalar, BigRational) {
        // products of several i64 fractions overflow into the big representation
        let mut r = BigRational::one();
        for &(n, d) in parts {
            r *= BigRational::new(BigInt::from(n), BigInt::from(d));
        }
        (Scalar::from_big(r.clone()), r)
    }

    fn parts() -> impl Strategy<Value = Vec<(i64, i64)>> {
        proptest::collection::vec((prop_oneof![Just(1i64), Just(-1), any::<i64>()], prop_oneof![Just(1i64), 1..i64::MAX]), 1..5)
            .prop_filter("non-zero", |v| v.iter().all(|&(n, _)| n != 0))
    }

    proptest! {
        #[test]
        fn big_ops_match_reference(a in parts(), b in parts()) {
            let (x, rx) = big(&a);
            let (y, ry) = big(&b);
            prop_assert_eq!((&x * &y).to_big(), &rx * &ry);
            prop_assert_eq!((&x + &y).to_big(), &rx + &ry);
            prop_assert_eq!((&x - &y).to_big(), &rx - &ry);
            prop_assert_eq!((&x / &y).to_big(), &rx / &ry);
            prop_assert_eq!(&(&x * &y) / &y, x);
        }
    }
}
