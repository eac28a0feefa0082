//! The ordered-field interface shared by rationals and the quadratic extension.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use super::Scalar;

/// Exact ordered field operations needed by the linear-algebra layer.
pub trait Field: Clone + Eq + Hash + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Panics on zero.
    fn inv(&self) -> Self;
    /// Sign under the real embedding (-1, 0, 1).
    fn sign(&self) -> i32;
    fn from_scalar(s: &Scalar) -> Self;
    /// Parse the canonical string form.
    fn parse_str(s: &str) -> Result<Self, super::KernelError>;
    fn to_f64(&self) -> f64;

    fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }
    fn from_int(n: i64) -> Self {
        Self::from_scalar(&Scalar::from_int(n))
    }
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        Scalar::inv(self)
    }
    fn sign(&self) -> i32 {
        self.signum()
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
    fn parse_str(s: &str) -> Result<Self, super::KernelError> {
        s.parse()
    }
    fn to_f64(&self) -> f64 {
        Scalar::to_f64(self)
    }
}
