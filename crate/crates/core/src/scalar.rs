//! Scalar traits shared by the cyclotomic and Laurent-polynomial layers.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};

/// Coefficient field of a cyclotomic number: exact rationals in practice,
/// floats for quick approximate experiments.
pub trait Coeff:
    Num + Clone + Neg<Output = Self> + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync
{
}

impl<T> Coeff for T where
    T: Num + Clone + Neg<Output = T> + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync
{
}

/// Minimal commutative-ring interface needed by [`crate::LaurentPoly`].
///
/// Cyclotomic numbers cannot implement `num_traits::Zero` because their zero
/// depends on the field, so the ring operations are spelled out here.
pub trait Ring: Clone + PartialEq + Debug {
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;

    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }
}

macro_rules! num_ring {
    ($($t:ty),*) => {$(
        impl Ring for $t {
            fn is_zero(&self) -> bool { Zero::is_zero(self) }
            fn add_ref(&self, other: &Self) -> Self { self.clone() + other.clone() }
            fn mul_ref(&self, other: &Self) -> Self { self.clone() * other.clone() }
            fn neg_ref(&self) -> Self { -self.clone() }
        }
    )*};
}

num_ring!(
    BigRational,
    Ratio<i64>,
    Ratio<i128>,
    f64,
    f32,
    i64,
    i128,
    BigInt
);

/// `q^e` as an exact rational.
pub fn rational_pow(q: u64, e: i32) -> BigRational {
    let base = BigInt::from(q);
    let mag = num_traits::pow(base, e.unsigned_abs() as usize);
    if e >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}
