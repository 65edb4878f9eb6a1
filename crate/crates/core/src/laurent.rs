//! Finite Laurent polynomials in the formal variable `X = q^(-s)`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::{rational_pow, Ring};
use crate::CycNum;

/// `sum c_k X^k` with finitely many nonzero `c_k`.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly<S> {
    coeffs: BTreeMap<i32, S>,
}

impl<S: Ring> Default for LaurentPoly<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Ring> LaurentPoly<S> {
    pub fn zero() -> Self {
        LaurentPoly {
            coeffs: BTreeMap::new(),
        }
    }

    /// `c * X^k`; the zero polynomial when `c` is zero.
    pub fn monomial(c: S, k: i32) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        LaurentPoly { coeffs }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, S)>) -> Self {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    pub fn coeffs(&self) -> &BTreeMap<i32, S> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: i32) -> Option<&S> {
        self.coeffs.get(&k)
    }

    pub fn add_term(&mut self, k: i32, c: S) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get(&k) {
            Some(old) => {
                let s = old.add_ref(&c);
                if s.is_zero() {
                    self.coeffs.remove(&k);
                } else {
                    self.coeffs.insert(k, s);
                }
            }
            None => {
                self.coeffs.insert(k, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &other.coeffs {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, c.neg_ref())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&k1, c1) in &self.coeffs {
            for (&k2, c2) in &other.coeffs {
                out.add_term(k1 + k2, c1.mul_ref(c2));
            }
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(&k, c)| (k, c.mul_ref(s))))
    }

    /// Multiplies by `X^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, c)| (e + k, c.clone()))
                .collect(),
        }
    }

    /// `X -> X^(-1)`, i.e. `s -> -s`.
    pub fn invert_variable(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&k, c)| (-k, c.clone())).collect(),
        }
    }

    /// The single term `(c, k)`, or an error when there are zero or several.
    pub fn as_monomial(&self) -> Result<(S, i32)> {
        if self.coeffs.len() != 1 {
            return Err(Error::NotAMonomial(format!("{:?}", self.coeffs)));
        }
        let (&k, c) = self.coeffs.iter().next().expect("one term");
        Ok((c.clone(), k))
    }
}

impl LaurentPoly<CycNum> {
    /// `s -> 1 - s`: `c X^k -> c q^(-k) X^(-k)`.
    pub fn reflect(&self, q: u64) -> Self {
        Self::from_terms(
            self.coeffs
                .iter()
                .map(|(&k, c)| (-k, c.scale(&rational_pow(q, -k)))),
        )
    }

    /// Quotient of two monomials.
    pub fn div_monomial(&self, other: &Self) -> Result<Self> {
        let (c1, k1) = self.as_monomial()?;
        let (c2, k2) = other.as_monomial()?;
        Ok(Self::monomial(c1.checked_div(&c2)?, k1 - k2))
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(&k, c)| (k, c.scale(r))))
    }
}

impl<S: Ring + fmt::Display> fmt::Display for LaurentPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*X^{k}")?;
            }
        }
        Ok(())
    }
}

impl<S: Ring + fmt::Display> fmt::Debug for LaurentPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly[{self}]")
    }
}

impl<S: Ring + fmt::Display> Ring for LaurentPoly<S> {
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
}
