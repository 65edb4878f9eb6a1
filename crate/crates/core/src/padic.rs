//! Capped-relative-precision elements of `Q_p`.
//!
//! A nonzero element is `p^val * unit` with `unit` known modulo `p^prec`.
//! Zero carries the best known lower bound on its valuation: `None` for an
//! exact zero, `Some(k)` for a value only known to lie in `p^k Z_p`.

use std::cmp::min;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::rational_pow;

const TABLE_PRIMES: usize = 64;
const TABLE_EXPS: usize = 64;

fn pow_table() -> &'static [[u64; TABLE_EXPS]] {
    static TABLE: OnceLock<Vec<[u64; TABLE_EXPS]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..TABLE_PRIMES as u64)
            .map(|p| {
                let mut row = [0u64; TABLE_EXPS];
                let mut acc = Some(1u64);
                for slot in row.iter_mut() {
                    *slot = acc.unwrap_or(0);
                    acc = acc.and_then(|a| a.checked_mul(p));
                }
                row
            })
            .collect()
    })
}

/// `p^e`, panicking on `u64` overflow.
#[inline]
pub fn pow_u64(p: u64, e: u32) -> u64 {
    if (p as usize) < TABLE_PRIMES && (e as usize) < TABLE_EXPS {
        let v = pow_table()[p as usize][e as usize];
        if v != 0 || p == 0 {
            return v;
        }
    }
    p.checked_pow(e).expect("p-adic modulus overflows u64")
}

/// Inverse of a unit modulo `m`.
pub fn inv_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut r0, mut r1) = (m as i64, (a % m) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert_eq!(r0, 1, "{a} is not invertible modulo {m}");
    s0.rem_euclid(m as i64) as u64
}

/// `a * b mod m`, avoiding 128-bit division when the product fits.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if m <= u32::MAX as u64 {
        a * b % m
    } else {
        (a as u128 * b as u128 % m as u128) as u64
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicNum {
    p: u64,
    /// Valuation when nonzero; lower bound on it for a capped zero.
    val: i32,
    /// Unit residue, `0` exactly for zeros.
    unit: u64,
    /// Relative precision in digits; `0` for zeros.
    prec: u32,
    exact_zero: bool,
}

impl PadicNum {
    pub fn zero(p: u64) -> Self {
        PadicNum {
            p,
            val: i32::MAX,
            unit: 0,
            prec: 0,
            exact_zero: true,
        }
    }

    /// A zero only known modulo `p^cap`.
    pub fn zero_with_cap(p: u64, cap: i32) -> Self {
        PadicNum {
            p,
            val: cap,
            unit: 0,
            prec: 0,
            exact_zero: false,
        }
    }

    /// `p^val * unit`, with `unit` reduced modulo `p^prec`.
    ///
    /// # Panics
    /// If `unit` is divisible by `p` or `prec == 0`.
    pub fn from_parts(p: u64, val: i32, unit: u64, prec: u32) -> Self {
        assert!(prec > 0, "relative precision must be positive");
        assert!(!unit.is_multiple_of(p), "unit part {unit} divisible by {p}");
        PadicNum {
            p,
            val,
            unit: unit % pow_u64(p, prec),
            prec,
            exact_zero: false,
        }
    }

    pub fn one(p: u64, prec: u32) -> Self {
        Self::from_parts(p, 0, 1, prec)
    }

    /// `p^k`.
    pub fn uniformizer_pow(p: u64, k: i32, prec: u32) -> Self {
        Self::from_parts(p, k, 1, prec)
    }

    pub fn from_i64(p: u64, n: i64, prec: u32) -> Self {
        if n == 0 {
            return Self::zero(p);
        }
        let mut m = n.unsigned_abs();
        let mut val = 0;
        while m.is_multiple_of(p) {
            m /= p;
            val += 1;
        }
        let modulus = pow_u64(p, prec) as u128;
        let mut unit = m as u128 % modulus;
        if n < 0 {
            unit = (modulus - unit) % modulus;
        }
        Self::from_parts(p, val, unit as u64, prec)
    }

    pub fn from_bigint(p: u64, n: &BigInt, prec: u32) -> Self {
        if n.is_zero() {
            return Self::zero(p);
        }
        let pb = BigInt::from(p);
        let mut n = n.clone();
        let mut val = 0;
        while (&n % &pb).is_zero() {
            n /= &pb;
            val += 1;
        }
        let m = BigInt::from(pow_u64(p, prec));
        let unit = n.mod_floor(&m).to_u64().expect("fits");
        Self::from_parts(p, val, unit, prec)
    }

    pub fn from_rational(p: u64, r: &BigRational, prec: u32) -> Self {
        if r.is_zero() {
            return Self::zero(p);
        }
        let num = Self::from_bigint(p, r.numer(), prec);
        let den = Self::from_bigint(p, r.denom(), prec);
        num.div(&den).expect("nonzero denominator")
    }

    /// Uniform random unit of `Z_p` at the given precision.
    pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, p: u64, prec: u32) -> Self {
        let m = pow_u64(p, prec);
        loop {
            let u = rng.gen_range(1..m);
            if u % p != 0 {
                return Self::from_parts(p, 0, u, prec);
            }
        }
    }

    /// Random nonzero element with valuation in `vals`.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        p: u64,
        vals: std::ops::RangeInclusive<i32>,
        prec: u32,
    ) -> Self {
        let v = rng.gen_range(vals);
        let u = Self::random_unit(rng, p, prec);
        Self::from_parts(p, v, u.unit, prec)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.unit == 0
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact_zero
    }

    /// Valuation of a nonzero element; `None` for any zero.
    pub fn valuation(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.val)
    }

    pub fn unit(&self) -> u64 {
        self.unit
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Absolute precision `val + prec`; `None` for an exact zero.
    pub fn abs_prec(&self) -> Option<i32> {
        if self.exact_zero {
            None
        } else if self.is_zero() {
            Some(self.val)
        } else {
            Some(self.val + self.prec as i32)
        }
    }

    /// Decides `v(x) >= k`, or reports that the stored digits cannot.
    pub fn valuation_at_least(&self, k: i32) -> Result<bool> {
        if self.exact_zero || self.val >= k {
            return Ok(true);
        }
        if !self.is_zero() {
            return Ok(false);
        }
        Err(Error::PrecisionExhausted(format!(
            "zero known modulo {}^{} cannot decide valuation >= {k}",
            self.p, self.val
        )))
    }

    /// Valuation when it can be decided to be below `bound`.
    pub fn valuation_below(&self, bound: i32) -> Result<Option<i32>> {
        if self.valuation_at_least(bound)? {
            Ok(None)
        } else {
            Ok(Some(self.val))
        }
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.val == 0
    }

    /// `|x| = p^(-v(x))` as an exact rational.
    pub fn abs(&self) -> BigRational {
        match self.valuation() {
            Some(v) => rational_pow(self.p, -v),
            None => BigRational::zero(),
        }
    }

    /// The unit part modulo `p^k`.
    pub fn unit_residue(&self, k: u32) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::NotAUnit);
        }
        if self.prec < k {
            return Err(Error::PrecisionExhausted(format!(
                "need {k} digits of the unit, have {}",
                self.prec
            )));
        }
        Ok(self.unit % pow_u64(self.p, k))
    }

    /// `x mod p^k` for integral `x`, as an integer in `[0, p^k)`.
    pub fn residue(&self, k: u32) -> Result<u64> {
        if self.valuation_at_least(k as i32)? {
            return Ok(0);
        }
        if self.val < 0 {
            return Err(Error::NotInSubgroup("o"));
        }
        let digits = k - self.val as u32;
        Ok(self.unit_residue(digits)? * pow_u64(self.p, self.val as u32))
    }

    /// Truncates the relative precision to at most `k` digits.
    pub fn truncate(&self, k: u32) -> Self {
        if self.is_zero() || self.prec <= k {
            return *self;
        }
        Self::from_parts(self.p, self.val, self.unit, k)
    }

    fn check_p(&self, other: &Self) {
        assert_eq!(self.p, other.p, "p-adic numbers over different primes");
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return *self;
        }
        let m = pow_u64(self.p, self.prec);
        PadicNum {
            unit: m - self.unit,
            ..*self
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_p(other);
        if self.exact_zero {
            return *other;
        }
        if other.exact_zero {
            return *self;
        }
        let p = self.p;
        let cap = min(self.abs_prec().unwrap(), other.abs_prec().unwrap());
        let v = min(self.val, other.val);
        if v >= cap {
            return Self::zero_with_cap(p, cap);
        }
        let digits = (cap - v) as u32;
        let modulus = pow_u64(p, digits);
        let term = |x: &Self| -> u64 {
            if x.is_zero() || x.val >= cap {
                return 0;
            }
            let shift = (x.val - v) as u32;
            (x.unit % pow_u64(p, digits - shift)) * pow_u64(p, shift)
        };
        let mut s = (term(self) + term(other)) % modulus;
        if s == 0 {
            return Self::zero_with_cap(p, cap);
        }
        let mut t = 0;
        while s.is_multiple_of(p) {
            s /= p;
            t += 1;
        }
        PadicNum {
            p,
            val: v + t as i32,
            unit: s,
            prec: digits - t,
            exact_zero: false,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_p(other);
        let p = self.p;
        if self.exact_zero || other.exact_zero {
            return Self::zero(p);
        }
        if self.is_zero() || other.is_zero() {
            return Self::zero_with_cap(p, self.val.saturating_add(other.val));
        }
        let prec = min(self.prec, other.prec);
        let m = pow_u64(p, prec);
        PadicNum {
            p,
            val: self.val + other.val,
            unit: mul_mod(self.unit % m, other.unit % m, m),
            prec,
            exact_zero: false,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = pow_u64(self.p, self.prec);
        Ok(PadicNum {
            val: -self.val,
            unit: inv_mod(self.unit, m),
            ..*self
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// `x * p^k`.
    pub fn shift(&self, k: i32) -> Self {
        if self.exact_zero {
            return *self;
        }
        PadicNum {
            val: self.val + k,
            ..*self
        }
    }

    /// Equality up to the precision both sides carry.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Fails unless the relative precision is at least `k` (zeros pass when
    /// exact).
    pub fn require_prec(&self, k: u32) -> Result<()> {
        if self.exact_zero || (!self.is_zero() && self.prec >= k) {
            Ok(())
        } else {
            Err(Error::PrecisionExhausted(format!(
                "{self} has fewer than {k} digits"
            )))
        }
    }

    /// Exact rational representative of the stored digits.
    pub fn to_rational(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        rational_pow(self.p, self.val) * BigRational::from_integer(BigInt::from(self.unit))
    }
}

impl fmt::Display for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact_zero {
            write!(f, "0")
        } else if self.is_zero() {
            write!(f, "O({}^{})", self.p, self.val)
        } else {
            write!(
                f,
                "{}^{}*{} + O({}^{})",
                self.p,
                self.val,
                self.unit,
                self.p,
                self.val + self.prec as i32
            )
        }
    }
}

impl fmt::Debug for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn product_of_parts() {
        let a = PadicNum::from_parts(3, 0, 2, 6);
        let b = PadicNum::from_parts(3, 1, 1, 6);
        let c = a.mul(&b);
        assert_eq!((c.valuation(), c.unit(), c.prec()), (Some(1), 2, 6));
    }

    #[test]
    fn carry_reduces_precision_by_its_depth() {
        for p in [2u64, 3, 5, 13] {
            let a = PadicNum::one(p, 6);
            let b = PadicNum::from_parts(p, 0, p - 1, 6);
            let s = a.add(&b);
            assert_eq!(s.valuation(), Some(1));
            assert_eq!(s.prec(), 5);
            assert_eq!(s.unit(), 1);
        }
        // a deeper carry: 1 + (5^3 - 1) = 5^3
        let s = PadicNum::one(5, 6).add(&PadicNum::from_parts(5, 0, 124, 6));
        assert_eq!((s.valuation(), s.prec()), (Some(3), 3));
    }

    #[test]
    fn total_cancellation_is_a_capped_zero() {
        let a = PadicNum::from_parts(7, -1, 3, 4);
        let z = a.sub(&a);
        assert!(z.is_zero() && !z.is_exact_zero());
        assert_eq!(z.abs_prec(), Some(3));
        assert!(z.valuation_at_least(3).unwrap());
        assert!(z.valuation_at_least(4).is_err());
    }

    #[test]
    fn inverse_example() {
        let a = PadicNum::from_parts(5, -2, 2, 5);
        let b = a.inv().unwrap();
        assert_eq!(b.valuation(), Some(2));
        assert_eq!(b.unit() % 5, 3);
        assert!(a.mul(&b).agrees_with(&PadicNum::one(5, 5)));
        assert_eq!(PadicNum::zero(5).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn rational_round_trip() {
        let r = BigRational::new(BigInt::from(-14), BigInt::from(45));
        let x = PadicNum::from_rational(3, &r, 8);
        assert_eq!(x.valuation(), Some(-2));
        let back = x.mul(&PadicNum::from_i64(3, 45, 8));
        assert!(back.agrees_with(&PadicNum::from_i64(3, -14, 8)));
    }

    #[test]
    fn residues() {
        let x = PadicNum::from_i64(3, 3 * 7, 5);
        assert_eq!(x.residue(2).unwrap(), 21 % 9);
        assert_eq!(PadicNum::from_i64(3, 27, 5).residue(2).unwrap(), 0);
        assert!(PadicNum::from_parts(3, -1, 1, 5).residue(1).is_err());
    }

    fn arb(p: u64) -> impl Strategy<Value = PadicNum> {
        (any::<u64>(), -3i32..4).prop_map(move |(seed, _)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            PadicNum::random(&mut rng, p, -3..=3, 8)
        })
    }

    proptest! {
        #[test]
        fn absolute_value_is_multiplicative(a in arb(3), b in arb(3)) {
            prop_assert_eq!(a.mul(&b).abs(), a.abs() * b.abs());
        }

        #[test]
        fn ultrametric(a in arb(2), b in arb(2)) {
            let s = a.add(&b);
            let bound = a.abs().max(b.abs());
            prop_assert!(s.abs() <= bound);
        }

        #[test]
        fn field_laws(a in arb(5), b in arb(5), c in arb(5)) {
            prop_assert!(a.mul(&b.add(&c)).agrees_with(&a.mul(&b).add(&a.mul(&c))));
            prop_assert!(a.div(&b).unwrap().mul(&b).agrees_with(&a));
            prop_assert!(a.add(&b).sub(&b).agrees_with(&a));
        }
    }
}
