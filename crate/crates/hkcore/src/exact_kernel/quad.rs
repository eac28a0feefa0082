//! The real quadratic field Q(√D) with exact sign decisions.

use std::fmt;
use std::str::FromStr;

use super::{Field, KernelError, Scalar};

/// `a + b·√D` for a fixed square-free `D > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadScalar<const D: u64> {
    pub a: Scalar,
    pub b: Scalar,
}

/// The default extension used by the twistor constructions.
pub type Q3 = QuadScalar<3>;

impl<const D: u64> QuadScalar<D> {
    pub fn new(a: Scalar, b: Scalar) -> Self {
        QuadScalar { a, b }
    }

    pub fn rational(a: Scalar) -> Self {
        QuadScalar { a, b: Scalar::zero() }
    }

    /// The generator √D.
    pub fn root() -> Self {
        QuadScalar { a: Scalar::zero(), b: Scalar::one() }
    }

    pub fn d() -> Scalar {
        Scalar::from_int(D as i64)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadScalar { a: self.a.clone(), b: -&self.b }
    }

    /// Field norm a² − D·b².
    pub fn norm(&self) -> Scalar {
        &self.a * &self.a - Self::d() * &self.b * &self.b
    }

    /// Exact sign of a + b√D: compare a² with D·b² when the signs of a and b disagree.
    pub fn signum(&self) -> i32 {
        let sa = self.a.signum();
        let sb = self.b.signum();
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let db2 = Self::d() * &self.b * &self.b;
        if a2 > db2 {
            sa
        } else {
            sb
        }
    }

    /// Square root inside the field, if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.b.is_zero() {
            if let Some(r) = self.a.sqrt() {
                return Some(Self::rational(r));
            }
            let r = (&self.a / Self::d()).sqrt()?;
            return Some(QuadScalar { a: Scalar::zero(), b: r });
        }
        // (x + y√D)² = a + b√D  ⇒  x² = (a ± √N)/2 with N = a² − D b²
        let n = self.norm().sqrt()?;
        let two = Scalar::from_int(2);
        for cand in [(&self.a + &n) / &two, (&self.a - &n) / &two] {
            if let Some(x) = cand.sqrt() {
                if x.is_zero() {
                    continue;
                }
                let y = &self.b / (&two * &x);
                let r = QuadScalar { a: x, b: y };
                if r.mul(&r) == *self {
                    return Some(r);
                }
            }
        }
        None
    }

    pub fn is_square(&self) -> bool {
        self.signum() >= 0 && self.sqrt().is_some()
    }

    /// Canonical string `"p/q+r/s*sqrt(D)"`.
    pub fn to_canonical_string(&self) -> String {
        let b = self.b.to_frac_string();
        if b.starts_with('-') {
            format!("{}{}*sqrt({})", self.a, b, D)
        } else {
            format!("{}+{}*sqrt({})", self.a, b, D)
        }
    }
}

impl<const D: u64> fmt::Display for QuadScalar<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl<const D: u64> FromStr for QuadScalar<D> {
    type Err = KernelError;

    /// Accepts the canonical form and also a bare rational.
    fn from_str(s: &str) -> Result<Self, KernelError> {
        let s = s.trim();
        let suffix = format!("*sqrt({D})");
        let Some(body) = s.strip_suffix(&suffix) else {
            return Ok(Self::rational(s.parse()?));
        };
        // split at the sign that starts the second rational, skipping a leading sign
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/')
            .ok_or_else(|| KernelError::Parse(format!("not a quadratic scalar: {s:?}")))?;
        let a: Scalar = body[..split].parse()?;
        let b_str = body[split..].trim_start_matches('+');
        let b: Scalar = b_str.parse()?;
        Ok(QuadScalar { a, b })
    }
}

impl<const D: u64> Field for QuadScalar<D> {
    fn zero() -> Self {
        Self::rational(Scalar::zero())
    }
    fn one() -> Self {
        Self::rational(Scalar::one())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        QuadScalar { a: &self.a + &o.a, b: &self.b + &o.b }
    }
    fn sub(&self, o: &Self) -> Self {
        QuadScalar { a: &self.a - &o.a, b: &self.b - &o.b }
    }
    fn mul(&self, o: &Self) -> Self {
        if self.b.is_zero() && o.b.is_zero() {
            return Self::rational(&self.a * &o.a);
        }
        QuadScalar {
            a: &self.a * &o.a + Self::d() * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
    fn neg(&self) -> Self {
        QuadScalar { a: -&self.a, b: -&self.b }
    }
    fn inv(&self) -> Self {
        assert!(!Field::is_zero(self), "inverse of zero");
        let n = self.norm().inv();
        QuadScalar { a: &self.a * &n, b: -(&self.b * &n) }
    }
    fn sign(&self) -> i32 {
        self.signum()
    }
    fn from_scalar(s: &Scalar) -> Self {
        Self::rational(s.clone())
    }
    fn parse_str(s: &str) -> Result<Self, KernelError> {
        s.parse()
    }
    fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * (D as f64).sqrt()
    }
}

macro_rules! quad_binop {
    ($tr:ident, $f:ident) => {
        impl<const D: u64> std::ops::$tr<&QuadScalar<D>> for &QuadScalar<D> {
            type Output = QuadScalar<D>;
            fn $f(self, o: &QuadScalar<D>) -> QuadScalar<D> {
                Field::$f(self, o)
            }
        }
        impl<const D: u64> std::ops::$tr for QuadScalar<D> {
            type Output = QuadScalar<D>;
            fn $f(self, o: QuadScalar<D>) -> QuadScalar<D> {
                Field::$f(&self, &o)
            }
        }
    };
}

quad_binop!(Add, add);
quad_binop!(Sub, sub);
quad_binop!(Mul, mul);
quad_binop!(Div, div);

impl<const D: u64> std::ops::Neg for &QuadScalar<D> {
    type Output = QuadScalar<D>;
    fn neg(self) -> QuadScalar<D> {
        Field::neg(self)
    }
}

impl<const D: u64> std::ops::Neg for QuadScalar<D> {
    type Output = QuadScalar<D>;
    fn neg(self) -> QuadScalar<D> {
        Field::neg(&self)
    }
}

impl<const D: u64> std::iter::Sum for QuadScalar<D> {
    fn sum<I: Iterator<Item = Self>>(it: I) -> Self {
        it.fold(<Self as Field>::zero(), |a, b| Field::add(&a, &b))
    }
}

impl<const D: u64> From<Scalar> for QuadScalar<D> {
    fn from(s: Scalar) -> Self {
        Self::rational(s)
    }
}

impl<const D: u64> serde::Serialize for QuadScalar<D> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_canonical_string())
    }
}

impl<'de, const D: u64> serde::Deserialize<'de> for QuadScalar<D> {
    fn deserialize<De: serde::Deserializer<'de>>(d: De) -> Result<Self, De::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: (i64, i64), b: (i64, i64)) -> Q3 {
        Q3::new(Scalar::frac(a.0, a.1), Scalar::frac(b.0, b.1))
    }

    #[test]
    fn sign_cases() {
        assert_eq!(q((2, 1), (-1, 1)).signum(), 1); // 2 - 1.732
        assert_eq!(q((1, 1), (-1, 1)).signum(), -1);
        assert_eq!(q((-2, 1), (1, 1)).signum(), -1);
        assert_eq!(q((-1, 1), (1, 1)).signum(), 1);
        assert_eq!(q((0, 1), (0, 1)).signum(), 0);
    }

    #[test]
    fn inverse_and_roots() {
        let x = q((1, 2), (1, 3));
        assert_eq!(x.mul(&x.inv()), Q3::one());
        let sq = x.mul(&x);
        let r = sq.sqrt().unwrap();
        assert!(r == x || r == x.neg());
        assert_eq!(Q3::rational(Scalar::from_int(3)).sqrt(), Some(Q3::root()));
        assert_eq!(Q3::rational(Scalar::from_int(2)).sqrt(), None);
        // (2 + √3) = ((√2 + √6)/2)² is not a square in Q(√3)
        assert_eq!(q((2, 1), (1, 1)).sqrt(), None);
        assert_eq!(q((4, 1), (2, 1)).sqrt().map(|r| r.mul(&r)), Some(q((4, 1), (2, 1))));
    }

    #[test]
    fn string_round_trip() {
        for x in [q((1, 2), (-3, 4)), q((-1, 1), (1, 1)), q((0, 1), (0, 1))] {
            let s = x.to_string();
            assert_eq!(s.parse::<Q3>().unwrap(), x, "{s}");
        }
        assert_eq!("1/2-3/4*sqrt(3)".parse::<Q3>().unwrap(), q((1, 2), (-3, 4)));
        assert_eq!("-5/1".parse::<Q3>().unwrap(), q((-5, 1), (0, 1)));
    }
}
