//! Characters of `Q_p^x` and `Q_p` with root-of-unity values.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::padic::{pow_u64, PadicNum};

/// The root of unity `zeta_order^exp`, kept in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Root {
    pub exp: u64,
    pub order: u64,
}

impl Root {
    pub const ONE: Root = Root { exp: 0, order: 1 };
    pub const MINUS_ONE: Root = Root { exp: 1, order: 2 };

    pub fn new(exp: u64, order: u64) -> Self {
        assert!(order > 0);
        let exp = exp % order;
        let g = exp.gcd(&order);
        Root {
            exp: exp / g,
            order: order / g,
        }
    }

    pub fn sign(s: i8) -> Self {
        if s >= 0 {
            Self::ONE
        } else {
            Self::MINUS_ONE
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Root) -> Root {
        let order = self.order.lcm(&other.order);
        let e = self.exp * (order / self.order) + other.exp * (order / other.order);
        Root::new(e, order)
    }

    pub fn inv(self) -> Root {
        Root::new(self.order - self.exp, self.order)
    }

    pub fn pow(self, k: i64) -> Root {
        let e = (self.exp as i128 * k as i128).rem_euclid(self.order as i128);
        Root::new(e as u64, self.order)
    }

    pub fn is_one(self) -> bool {
        self.exp == 0
    }

    /// `+1` or `-1` when the root is real.
    pub fn as_sign(self) -> Option<i8> {
        match (self.exp, self.order) {
            (0, 1) => Some(1),
            (1, 2) => Some(-1),
            _ => None,
        }
    }

    /// Exponent of this root as a power of `zeta_n`.
    pub fn exponent_in(self, n: u64) -> Result<u64> {
        if !n.is_multiple_of(self.order) {
            return Err(Error::ConductorExceedsContext {
                order: self.order,
                field: n,
            });
        }
        Ok(self.exp * (n / self.order))
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_sign() {
            Some(s) => write!(f, "{s}"),
            None => write!(f, "zeta_{}^{}", self.order, self.exp),
        }
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

pub fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("{p} is not prime")))
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Fixed generators of `(Z/p^level)^x` with their orders: a primitive root
/// for odd `p`, `{-1}` for `2^2` and `{-1, 5}` for `2^k`, `k >= 3`.
pub fn unit_group_generators(p: u64, level: u32) -> Vec<(u64, u64)> {
    let m = pow_u64(p, level);
    if p == 2 {
        return match level {
            0 | 1 => Vec::new(),
            2 => vec![(3, 2)],
            _ => vec![(m - 1, 2), (5, m / 4)],
        };
    }
    if level == 0 {
        return Vec::new();
    }
    let order = m / p * (p - 1);
    let factors: Vec<u64> = {
        let mut fs = Vec::new();
        let mut n = p - 1;
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                fs.push(d);
                while n.is_multiple_of(d) {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            fs.push(n);
        }
        fs
    };
    let mut g = (2..p)
        .find(|&g| factors.iter().all(|&f| pow_mod(g, (p - 1) / f, p) != 1))
        .unwrap_or(1);
    if level >= 2 && pow_mod(g, p - 1, p * p) == 1 {
        g += p;
    }
    vec![(g, order)]
}

/// A character of `Z_p^x` factoring through `(Z/p^level)^x`, stored as a
/// lookup table indexed by residue.
#[derive(Clone, PartialEq, Eq)]
pub struct MultCharacter {
    p: u64,
    level: u32,
    gens: Vec<(u64, u64)>,
    /// Value on each generator.
    exps: Vec<Root>,
    table: Vec<Option<Root>>,
}

impl MultCharacter {
    /// Character with the given values on [`unit_group_generators`].
    pub fn from_generator_values(p: u64, level: u32, exps: Vec<Root>) -> Self {
        let gens = unit_group_generators(p, level);
        assert_eq!(gens.len(), exps.len(), "one value per generator");
        let m = pow_u64(p, level);
        let mut table = vec![None; m as usize];
        let mut elems = vec![(1 % m, Root::ONE)];
        for (&(g, ord), &val) in gens.iter().zip(&exps) {
            let mut next = Vec::with_capacity(elems.len() * ord as usize);
            for &(x, r) in &elems {
                let (mut y, mut s) = (x, r);
                for _ in 0..ord {
                    next.push((y, s));
                    y = mul_mod(y, g, m);
                    s = s.mul(val);
                }
            }
            elems = next;
        }
        for (x, r) in elems {
            table[x as usize] = Some(r);
        }
        if m == 1 {
            table[0] = Some(Root::ONE);
        }
        MultCharacter {
            p,
            level,
            gens,
            exps,
            table,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The conductor exponent `n_eta`.
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn generators(&self) -> &[(u64, u64)] {
        &self.gens
    }

    pub fn generator_values(&self) -> &[Root] {
        &self.exps
    }

    /// Value on a residue modulo `p^level` (must be coprime to `p`).
    pub fn eval_residue(&self, u: u64) -> Root {
        let m = pow_u64(self.p, self.level);
        self.table[(u % m) as usize].expect("residue coprime to p")
    }

    pub fn eval(&self, x: &PadicNum) -> Result<Root> {
        if !x.is_unit() {
            return Err(Error::NotAUnit);
        }
        Ok(self.eval_residue(x.unit_residue(self.level)?))
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|r| r.is_one())
    }

    pub fn is_quadratic(&self) -> bool {
        self.exps.iter().all(|r| r.order <= 2)
    }

    pub fn inverse(&self) -> Self {
        Self::from_generator_values(
            self.p,
            self.level,
            self.exps.iter().map(|r| r.inv()).collect(),
        )
    }

    /// `eta(-1)`.
    pub fn at_minus_one(&self) -> Root {
        let m = pow_u64(self.p, self.level);
        self.eval_residue(m - 1)
    }

    /// Whether the character is trivial on `1 + p^k` (for `1 <= k <= level`).
    pub fn trivial_on_congruence(&self, k: u32) -> bool {
        let m = pow_u64(self.p, self.level);
        let step = pow_u64(self.p, k);
        (0..m / step).all(|t| self.eval_residue((1 + t * step) % m).is_one())
    }

    /// Least `n >= 1` with `1 + p^n` in the kernel.
    pub fn minimal_level(&self) -> u32 {
        (1..=self.level)
            .find(|&k| self.trivial_on_congruence(k))
            .unwrap_or(self.level)
    }
}

impl fmt::Debug for MultCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MultCharacter(p={}, level={}, values=[",
            self.p, self.level
        )?;
        for (i, ((g, _), r)) in self.gens.iter().zip(&self.exps).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}->{r}")?;
        }
        write!(f, "])")
    }
}

/// Extension of a unit character to `Q_p^x` by its value at `p`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtChar {
    pub unit_part: MultCharacter,
    pub w_pi: Root,
}

impl ExtChar {
    pub fn new(unit_part: MultCharacter, w_pi: Root) -> Self {
        ExtChar { unit_part, w_pi }
    }

    pub fn eval(&self, x: &PadicNum) -> Result<Root> {
        let v = x.valuation().ok_or(Error::DivisionByZero)?;
        let u = x.shift(-v);
        Ok(self.w_pi.pow(v as i64).mul(self.unit_part.eval(&u)?))
    }

    pub fn inverse(&self) -> Self {
        ExtChar {
            unit_part: self.unit_part.inverse(),
            w_pi: self.w_pi.inv(),
        }
    }

    /// `epsilon = eta(-1)`, independent of `w_pi`.
    pub fn epsilon(&self) -> Root {
        self.unit_part.at_minus_one()
    }

    pub fn level(&self) -> u32 {
        self.unit_part.level()
    }
}

/// The standard additive character `x -> zeta_{p^k}^{p^k frac(x)}`, or its
/// inverse when `conj` is set. Trivial on `Z_p`, nontrivial on `p^-1 Z_p`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct AddChar {
    pub conj: bool,
}

impl AddChar {
    pub const STANDARD: AddChar = AddChar { conj: false };

    pub fn inverse(self) -> Self {
        AddChar { conj: !self.conj }
    }

    pub fn eval(&self, x: &PadicNum) -> Result<Root> {
        if x.valuation_at_least(0)? {
            return Ok(Root::ONE);
        }
        let v = x.valuation().expect("nonzero");
        let k = (-v) as u32;
        let a = x.unit_residue(k)?;
        let order = pow_u64(x.p(), k);
        // a is prime to p, so the fraction is already reduced
        let exp = if self.conj { order - a } else { a };
        Ok(Root { exp, order })
    }
}

/// All ramified quadratic characters of `Z_p^x`, each at its minimal level.
/// Found by brute force over sign assignments on the generators of
/// `(Z/p)^x` (odd `p`) or `(Z/8)^x` (`p = 2`).
pub fn ramified_quadratic_chars(p: u64) -> Vec<MultCharacter> {
    let top = if p == 2 { 3 } else { 1 };
    let gens = unit_group_generators(p, top);
    let mut out = Vec::new();
    for mask in 1u32..(1 << gens.len()) {
        let exps: Vec<Root> = (0..gens.len())
            .map(|i| {
                if mask >> i & 1 == 1 && gens[i].1.is_multiple_of(2) {
                    Root::MINUS_ONE
                } else {
                    Root::ONE
                }
            })
            .collect();
        let chi = MultCharacter::from_generator_values(p, top, exps);
        if chi.is_trivial() {
            continue;
        }
        let level = chi.minimal_level();
        let small_gens = unit_group_generators(p, level);
        let values = small_gens
            .iter()
            .map(|&(g, _)| chi.eval_residue(g))
            .collect();
        let reduced = MultCharacter::from_generator_values(p, level, values);
        if !out.contains(&reduced) {
            out.push(reduced);
        }
    }
    out.sort_by_key(|c| (c.level(), c.at_minus_one().exp));
    out
}
