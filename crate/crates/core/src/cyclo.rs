//! Exact arithmetic in a cyclotomic field `Q(zeta_N)`.
//!
//! Elements are stored as polynomials in `zeta` of degree `< phi(N)`, i.e. as
//! canonical remainders modulo the cyclotomic polynomial `Phi_N`. The field
//! data (order, `phi(N)` and the sparse low part of `Phi_N`) is shared through
//! an [`Arc`] and cached per order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::{Coeff, Ring};

/// Largest order accepted by [`CycloField::get`]; keeps the dense
/// intermediate polynomials in memory.
pub const MAX_ORDER: u64 = 1 << 26;

/// The field `Q(zeta_N)` as a reduction rule: `zeta^phi = -sum(low)`.
#[derive(Debug, PartialEq, Eq)]
pub struct CycloField {
    order: u64,
    phi: u64,
    /// Non-leading terms of the monic polynomial `Phi_N`, as `(exponent, coeff)`.
    low: Vec<(u64, i64)>,
}

fn cache() -> &'static Mutex<HashMap<u64, Arc<CycloField>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloField>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn proper_divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.retain(|&d| d != n);
    out.sort_unstable();
    out
}

impl CycloField {
    /// Field of order `n`, computed once and cached.
    ///
    /// # Panics
    /// If `n == 0` or `n > MAX_ORDER`.
    pub fn get(order: u64) -> Arc<CycloField> {
        assert!(
            (1..=MAX_ORDER).contains(&order),
            "cyclotomic order {order} out of range"
        );
        if let Some(f) = cache().lock().unwrap().get(&order) {
            return f.clone();
        }
        // built outside the lock: construction recurses into `get` for divisors
        let field = Arc::new(Self::build(order));
        cache()
            .lock()
            .unwrap()
            .entry(order)
            .or_insert(field)
            .clone()
    }

    /// `Phi_N` by iterated exact division of `X^N - 1` by `Phi_d`, `d | N`, `d < N`.
    fn build(order: u64) -> CycloField {
        let n = order as usize;
        let mut poly = vec![0i64; n + 1];
        poly[0] = -1;
        poly[n] = 1;
        for d in proper_divisors(order) {
            let div = CycloField::get(d);
            poly = exact_div_monic(&poly, div.phi as usize, &div.low);
        }
        let phi = (poly.len() - 1) as u64;
        debug_assert_eq!(poly[phi as usize], 1);
        let low = poly[..phi as usize]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i as u64, c))
            .collect();
        CycloField { order, phi, low }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Euler's `phi(N)`: the degree of the field.
    pub fn phi(&self) -> u64 {
        self.phi
    }

    /// Dense coefficients of `Phi_N`, constant term first.
    pub fn cyclotomic_poly(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.phi as usize + 1];
        for &(e, c) in &self.low {
            out[e as usize] = c;
        }
        out[self.phi as usize] = 1;
        out
    }

    /// Reduces an integer vector of length `N` (indexed by exponent of zeta)
    /// in place; afterwards only indices `< phi(N)` are nonzero.
    pub fn reduce_counts(&self, counts: &mut [i128]) {
        assert_eq!(counts.len() as u64, self.order);
        let phi = self.phi as usize;
        for e in (phi..counts.len()).rev() {
            let c = counts[e];
            if c == 0 {
                continue;
            }
            counts[e] = 0;
            let base = e - phi;
            for &(i, ci) in &self.low {
                counts[base + i as usize] -= c * ci as i128;
            }
        }
    }

    fn reduce_map<R: Coeff>(&self, mut map: BTreeMap<u64, R>) -> BTreeMap<u64, R> {
        while let Some((&e, _)) = map.last_key_value() {
            if e < self.phi {
                break;
            }
            let c = map.remove(&e).expect("present");
            let base = e - self.phi;
            for &(i, ci) in &self.low {
                let term = c.clone() * R::from_i64(ci).expect("small integer");
                accumulate(&mut map, base + i, -term);
            }
        }
        map
    }
}

fn exact_div_monic(num: &[i64], deg: usize, low: &[(u64, i64)]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let top = num.len() - 1;
    let mut quot = vec![0i64; top - deg + 1];
    for i in (deg..=top).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        quot[i - deg] = c;
        rem[i] = 0;
        for &(j, cj) in low {
            let idx = i - deg + j as usize;
            rem[idx] = rem[idx]
                .checked_sub(c.checked_mul(cj).expect("coefficient overflow"))
                .expect("coefficient overflow");
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "division was not exact");
    quot
}

fn accumulate<R: Coeff>(map: &mut BTreeMap<u64, R>, e: u64, c: R) {
    if c.is_zero() {
        return;
    }
    match map.entry(e) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get().clone() + c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

/// An element of `Q(zeta_N)` with coefficients in `R`.
#[derive(Clone)]
pub struct Cyclotomic<R> {
    field: Arc<CycloField>,
    coeffs: BTreeMap<u64, R>,
}

/// Canonical reduction of an arbitrary polynomial in `zeta_N`.
pub fn cyc_reduce<R: Coeff>(raw: impl IntoIterator<Item = (u64, R)>, order: u64) -> Cyclotomic<R> {
    Cyclotomic::from_terms(CycloField::get(order), raw)
}

impl<R: Coeff> Cyclotomic<R> {
    pub fn zero(field: Arc<CycloField>) -> Self {
        Cyclotomic {
            field,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(field: Arc<CycloField>) -> Self {
        Self::from_coeff(field, R::one())
    }

    pub fn from_coeff(field: Arc<CycloField>, c: R) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(0, c);
        }
        Cyclotomic { field, coeffs }
    }

    pub fn from_i64(field: Arc<CycloField>, n: i64) -> Self {
        Self::from_coeff(field, R::from_i64(n).expect("integer coefficient"))
    }

    /// `zeta_N^e` for any exponent.
    pub fn zeta_pow(field: Arc<CycloField>, e: u64) -> Self {
        let n = field.order;
        Self::from_terms(field, [(e % n, R::one())])
    }

    /// Sums `c * zeta^e` over the given terms and reduces modulo `Phi_N`.
    pub fn from_terms(field: Arc<CycloField>, raw: impl IntoIterator<Item = (u64, R)>) -> Self {
        let n = field.order;
        let mut map = BTreeMap::new();
        for (e, c) in raw {
            accumulate(&mut map, e % n, c);
        }
        let coeffs = field.reduce_map(map);
        Cyclotomic { field, coeffs }
    }

    /// Builds an element from integer counts indexed by exponent (length `N`),
    /// scaled by `weight`.
    pub fn from_counts(field: Arc<CycloField>, mut counts: Vec<i128>, weight: &R) -> Self {
        field.reduce_counts(&mut counts);
        let coeffs = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| {
                let c = R::from_i128(c).expect("count fits coefficient type");
                (e as u64, c * weight.clone())
            })
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Cyclotomic { field, coeffs }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn order(&self) -> u64 {
        self.field.order
    }

    /// Canonical coefficient map, exponent to coefficient, no zero entries.
    pub fn coeffs(&self) -> &BTreeMap<u64, R> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    /// The rational value, when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<R> {
        match self.coeffs.len() {
            0 => Some(R::zero()),
            1 => self.coeffs.get(&0).cloned(),
            _ => None,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field.order != other.field.order {
            return Err(Error::IncompatibleContext {
                left: self.field.order,
                right: other.field.order,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut coeffs = self.coeffs.clone();
        for (&e, c) in &other.coeffs {
            accumulate(&mut coeffs, e, c.clone());
        }
        Ok(Cyclotomic {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.field.order;
        let mut map = BTreeMap::new();
        for (&e1, c1) in &self.coeffs {
            for (&e2, c2) in &other.coeffs {
                accumulate(&mut map, (e1 + e2) % n, c1.clone() * c2.clone());
            }
        }
        Ok(Cyclotomic {
            field: self.field.clone(),
            coeffs: self.field.reduce_map(map),
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.checked_mul(&other.inverse()?)
    }

    /// Multiplicative inverse; monomials are inverted directly, everything
    /// else through the extended Euclidean algorithm against `Phi_N`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.field.order;
        if self.coeffs.len() == 1 {
            let (&e, c) = self.coeffs.iter().next().expect("one term");
            return Ok(Self::from_terms(
                self.field.clone(),
                [((n - e) % n, R::one() / c.clone())],
            ));
        }
        let modulus: Vec<R> = self
            .field
            .cyclotomic_poly()
            .into_iter()
            .map(|c| R::from_i64(c).expect("small integer"))
            .collect();
        let mut dense = vec![R::zero(); self.field.phi as usize];
        for (&e, c) in &self.coeffs {
            dense[e as usize] = c.clone();
        }
        let inv = poly_inverse_mod(dense, modulus);
        Ok(Self::from_terms(
            self.field.clone(),
            inv.into_iter().enumerate().map(|(i, c)| (i as u64, c)),
        ))
    }

    /// Complex conjugation `zeta -> zeta^(N-1)`.
    pub fn conjugate(&self) -> Self {
        let n = self.field.order;
        Self::from_terms(
            self.field.clone(),
            self.coeffs.iter().map(|(&e, c)| ((n - e) % n, c.clone())),
        )
    }

    pub fn scale(&self, k: &R) -> Self {
        if k.is_zero() {
            return Self::zero(self.field.clone());
        }
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, c)| (e, c.clone() * k.clone()))
                .collect(),
        }
    }

    /// `self^k` for a nonnegative exponent.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut acc = Self::one(self.field.clone());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Numerical value at `zeta = exp(2 pi i / N)`. Display only.
    pub fn embed(&self) -> Complex64 {
        let n = self.field.order as f64;
        self.coeffs
            .iter()
            .map(|(&e, c)| {
                let ang = std::f64::consts::TAU * e as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), ang)
            })
            .sum()
    }

    /// Re-expresses the element in `Q(zeta_M)` for a multiple `M` of `N`.
    pub fn lift(&self, target: Arc<CycloField>) -> Result<Self> {
        if !target.order.is_multiple_of(self.field.order) {
            return Err(Error::IncompatibleContext {
                left: self.field.order,
                right: target.order,
            });
        }
        let k = target.order / self.field.order;
        Ok(Self::from_terms(
            target,
            self.coeffs.iter().map(|(&e, c)| (e * k, c.clone())),
        ))
    }
}

fn trim<R: Coeff>(p: &mut Vec<R>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_divrem<R: Coeff>(num: &[R], den: &[R]) -> (Vec<R>, Vec<R>) {
    let mut rem = num.to_vec();
    trim(&mut rem);
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![R::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let f = rem[i].clone() / lead.clone();
        for (j, dj) in den.iter().enumerate() {
            let idx = i - dd + j;
            rem[idx] = rem[idx].clone() - f.clone() * dj.clone();
        }
        quot[i - dd] = f;
    }
    rem.truncate(dd);
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

fn poly_mul<R: Coeff>(a: &[R], b: &[R]) -> Vec<R> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![R::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    trim(&mut out);
    out
}

fn poly_sub<R: Coeff>(a: &[R], b: &[R]) -> Vec<R> {
    let len = a.len().max(b.len());
    let mut out: Vec<R> = (0..len)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(R::zero);
            let y = b.get(i).cloned().unwrap_or_else(R::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

/// Inverse of `b` modulo the irreducible `modulus`.
fn poly_inverse_mod<R: Coeff>(mut b: Vec<R>, modulus: Vec<R>) -> Vec<R> {
    trim(&mut b);
    let (mut r0, mut r1) = (modulus, b);
    let (mut s0, mut s1): (Vec<R>, Vec<R>) = (Vec::new(), vec![R::one()]);
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    assert_eq!(r0.len(), 1, "element not invertible modulo Phi_N");
    let c = r0[0].clone();
    s0.into_iter().map(|x| x / c.clone()).collect()
}

impl<R: Coeff> PartialEq for Cyclotomic<R> {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}

impl<R: Coeff> fmt::Debug for Cyclotomic<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic<{}>({})", self.field.order, self)
    }
}

impl<R: Coeff> fmt::Display for Cyclotomic<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*z^{e}")?;
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<R: Coeff> $tr<&Cyclotomic<R>> for &Cyclotomic<R> {
            type Output = Cyclotomic<R>;
            fn $method(self, rhs: &Cyclotomic<R>) -> Cyclotomic<R> {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<R: Coeff> $tr for Cyclotomic<R> {
            type Output = Cyclotomic<R>;
            fn $method(self, rhs: Cyclotomic<R>) -> Cyclotomic<R> {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl<R: Coeff> Neg for &Cyclotomic<R> {
    type Output = Cyclotomic<R>;
    fn neg(self) -> Cyclotomic<R> {
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }
}

impl<R: Coeff> Neg for Cyclotomic<R> {
    type Output = Cyclotomic<R>;
    fn neg(self) -> Cyclotomic<R> {
        -&self
    }
}

impl<R: Coeff> Ring for Cyclotomic<R> {
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}
