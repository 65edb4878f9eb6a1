//! Shared parameters: the prime, conductor, shell depth, p-adic precision
//! and the cyclotomic field all values live in.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::character::{check_prime, Root};
use crate::cyclo::{CycloField, MAX_ORDER};
use crate::error::{Error, Result};
use crate::padic::PadicNum;
use crate::scalar::rational_pow;
use crate::CycNum;

/// Extra relative digits beyond `n_eta + shell_depth` carried by every
/// p-adic entry.
pub const GUARD_DIGITS: u32 = 4;

#[derive(Clone, Debug)]
pub struct FieldContext {
    p: u64,
    n_eta: u32,
    shell_depth: u32,
    prec: u32,
    one: PadicNum,
    field: Arc<CycloField>,
}

impl FieldContext {
    /// Context for conductor `n_eta` with integrals probed to shell depth
    /// `shell_depth + 2` (stability is checked one step of two past the base
    /// depth). The field is `Q(zeta_N)`, `N = lcm(p^(shell_depth + 2), 2)`.
    pub fn new(p: u64, n_eta: u32, shell_depth: u32) -> Result<Self> {
        check_prime(p)?;
        if n_eta == 0 {
            return Err(Error::InvalidConfig(
                "conductor exponent must be positive".into(),
            ));
        }
        if shell_depth == 0 {
            return Err(Error::InvalidConfig("shell depth must be positive".into()));
        }
        let prec = n_eta + shell_depth + GUARD_DIGITS;
        let fits = p.checked_pow(prec).is_some_and(|m| m < 1 << 62);
        if !fits {
            return Err(Error::ContextTooLarge(format!(
                "{p}^{prec} exceeds the 62-bit residue budget"
            )));
        }
        let pk = p.checked_pow(shell_depth + 2).unwrap_or(u64::MAX);
        let order = if p == 2 { pk } else { pk.saturating_mul(2) };
        if order > MAX_ORDER {
            return Err(Error::ContextTooLarge(format!(
                "cyclotomic order {order} exceeds {MAX_ORDER}"
            )));
        }
        Ok(FieldContext {
            p,
            n_eta,
            shell_depth,
            prec,
            one: PadicNum::one(p, prec),
            field: CycloField::get(order),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Residue field size; equal to `p` here.
    pub fn q(&self) -> u64 {
        self.p
    }

    pub fn n_eta(&self) -> u32 {
        self.n_eta
    }

    pub fn shell_depth(&self) -> u32 {
        self.shell_depth
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    /// The cyclotomic order `N`.
    pub fn order(&self) -> u64 {
        self.field.order()
    }

    pub fn one(&self) -> PadicNum {
        self.one
    }

    pub fn int(&self, n: i64) -> PadicNum {
        PadicNum::from_i64(self.p, n, self.prec)
    }

    pub fn unit(&self, u: u64) -> PadicNum {
        PadicNum::from_parts(self.p, 0, u, self.prec)
    }

    /// `p^k * u` for a unit residue `u`.
    pub fn elem(&self, k: i32, u: u64) -> PadicNum {
        PadicNum::from_parts(self.p, k, u, self.prec)
    }

    pub fn pi_pow(&self, k: i32) -> PadicNum {
        PadicNum::uniformizer_pow(self.p, k, self.prec)
    }

    pub fn zero(&self) -> PadicNum {
        PadicNum::zero(self.p)
    }

    pub fn cyc_zero(&self) -> CycNum {
        CycNum::zero(self.field.clone())
    }

    pub fn cyc_one(&self) -> CycNum {
        CycNum::one(self.field.clone())
    }

    pub fn cyc_int(&self, n: i64) -> CycNum {
        CycNum::from_i64(self.field.clone(), n)
    }

    pub fn cyc_rational(&self, r: BigRational) -> CycNum {
        CycNum::from_coeff(self.field.clone(), r)
    }

    /// `q^e` as an element of the field.
    pub fn cyc_q_pow(&self, e: i32) -> CycNum {
        self.cyc_rational(self.q_pow(e))
    }

    pub fn q_pow(&self, e: i32) -> BigRational {
        rational_pow(self.p, e)
    }

    pub fn root(&self, r: Root) -> Result<CycNum> {
        let e = r.exponent_in(self.order())?;
        Ok(CycNum::zeta_pow(self.field.clone(), e))
    }

    pub fn sign(&self, r: Root) -> Result<i64> {
        r.as_sign()
            .map(i64::from)
            .ok_or_else(|| Error::InvalidConfig(format!("{r} is not a sign")))
    }

    pub fn ratio(&self, n: i64, d: i64) -> CycNum {
        self.cyc_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_precision() {
        let ctx = FieldContext::new(3, 1, 3).unwrap();
        assert_eq!(ctx.order(), 2 * 243);
        assert!(ctx.prec() >= ctx.n_eta() + ctx.shell_depth() + 4);
        assert_eq!(FieldContext::new(2, 3, 5).unwrap().order(), 128);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            FieldContext::new(4, 1, 3),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            FieldContext::new(13, 1, 9),
            Err(Error::ContextTooLarge(_))
        ));
    }

    #[test]
    fn foreign_roots_are_rejected() {
        let ctx = FieldContext::new(5, 1, 1).unwrap();
        assert!(matches!(
            ctx.root(Root::new(1, 3)),
            Err(Error::ConductorExceedsContext {
                order: 3,
                field: 250
            })
        ));
        assert_eq!(ctx.root(Root::MINUS_ONE).unwrap(), ctx.cyc_int(-1));
    }
}
