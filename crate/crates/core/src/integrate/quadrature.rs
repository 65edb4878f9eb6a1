//! Shell-by-shell evaluation of integrals over `Q_p` whose integrands take
//! monomial values `zeta_N^e * q^a * X^b`.
//!
//! A shell is `p^r o^x`; on it the integrand is sampled at one unit
//! representative per class modulo `p^d`, each weighted by the class volume
//! `q^(-r-d)`. Representatives carry exactly `d` significant digits, so an
//! integrand that looks at finer digits fails with `PrecisionExhausted`
//! instead of returning a class-dependent value; the shell is then redone
//! one digit deeper.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::context::FieldContext;
use crate::error::{Error, Result};
use crate::padic::{pow_u64, PadicNum};
use crate::{CycNum, Laurent};

/// The value `zeta_N^root * q^qpow * X^xpow`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mono {
    pub root: u64,
    pub qpow: i32,
    pub xpow: i32,
}

impl Mono {
    pub fn one() -> Self {
        Mono {
            root: 0,
            qpow: 0,
            xpow: 0,
        }
    }

    pub fn mul(self, o: Mono, order: u64) -> Mono {
        Mono {
            root: (self.root + o.root) % order,
            qpow: self.qpow + o.qpow,
            xpow: self.xpow + o.xpow,
        }
    }

    pub fn times_root(self, e: u64, order: u64) -> Mono {
        Mono {
            root: (self.root + e) % order,
            ..self
        }
    }

    pub fn to_laurent(self, ctx: &FieldContext) -> Laurent {
        let c = CycNum::zeta_pow(ctx.field().clone(), self.root).scale(&ctx.q_pow(self.qpow));
        Laurent::monomial(c, self.xpow)
    }
}

const DENSE_THRESHOLD: usize = 512;

/// Integer multiplicities of `zeta_N^e`; sparse until it gets crowded.
#[derive(Clone, Debug, Default)]
struct Counts {
    sparse: HashMap<u64, i64>,
    dense: Option<Vec<i64>>,
}

impl Counts {
    fn add(&mut self, e: u64, c: i64, order: u64) {
        if let Some(d) = &mut self.dense {
            d[e as usize] += c;
            return;
        }
        *self.sparse.entry(e).or_insert(0) += c;
        if self.sparse.len() > DENSE_THRESHOLD {
            let mut d = vec![0i64; order as usize];
            for (&k, &v) in &self.sparse {
                d[k as usize] += v;
            }
            self.sparse.clear();
            self.dense = Some(d);
        }
    }

    fn to_cyc(&self, ctx: &FieldContext, weight: &BigRational) -> CycNum {
        let field = ctx.field().clone();
        match &self.dense {
            Some(d) => CycNum::from_counts(field, d.iter().map(|&c| c as i128).collect(), weight),
            None => CycNum::from_terms(
                field,
                self.sparse
                    .iter()
                    .filter(|(_, &c)| c != 0)
                    .map(|(&e, &c)| (e, BigRational::from_integer(BigInt::from(c)) * weight)),
            ),
        }
    }
}

/// Running sum of monomials grouped by their `(q, X)` exponents.
#[derive(Clone, Debug, Default)]
pub struct MonoSum {
    terms: BTreeMap<(i32, i32), Counts>,
}

impl MonoSum {
    pub fn add(&mut self, m: Mono, order: u64) {
        self.terms
            .entry((m.qpow, m.xpow))
            .or_default()
            .add(m.root, 1, order);
    }

    pub fn to_laurent(&self, ctx: &FieldContext) -> Laurent {
        let mut out = Laurent::zero();
        for (&(qpow, xpow), counts) in &self.terms {
            out.add_term(xpow, counts.to_cyc(ctx, &ctx.q_pow(qpow)));
        }
        out
    }
}

/// Index into a pair of results for the two basis functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    I2 = 0,
    W0 = 1,
}

impl Basis {
    pub const ALL: [Basis; 2] = [Basis::I2, Basis::W0];
}

/// An integrand returning, at each point, at most one nonzero basis
/// component.
pub trait Integrand: Fn(&PadicNum) -> Result<Option<(Basis, Mono)>> {}
impl<F: Fn(&PadicNum) -> Result<Option<(Basis, Mono)>>> Integrand for F {}

pub type Pair = [Laurent; 2];

fn zero_pair() -> Pair {
    [Laurent::zero(), Laurent::zero()]
}

fn add_pair(a: &Pair, b: &Pair) -> Pair {
    [a[0].add(&b[0]), a[1].add(&b[1])]
}

/// `q^(-r-d) * sum_{u mod p^d, p ∤ u} f(p^r u)`, one sum per basis index.
pub fn shell_sum(ctx: &FieldContext, f: &impl Integrand, r: i32, d: u32) -> Result<Pair> {
    let p = ctx.p();
    let order = ctx.order();
    let count = pow_u64(p, d);
    let mut sums = [MonoSum::default(), MonoSum::default()];
    for u in 1..count {
        if u % p == 0 {
            continue;
        }
        if let Some((b, m)) = f(&PadicNum::from_parts(p, r, u, d))? {
            let m = Mono {
                qpow: m.qpow - r - d as i32,
                ..m
            };
            sums[b as usize].add(m, order);
        }
    }
    Ok([sums[0].to_laurent(ctx), sums[1].to_laurent(ctx)])
}

/// Deepest relative depth a shell may be refined to.
pub fn max_shell_depth(ctx: &FieldContext) -> u32 {
    ctx.shell_depth() + 3
}

/// Shell integral starting at relative depth `d` and refining while the
/// integrand needs more digits than the representatives carry.
pub fn shell_integral(ctx: &FieldContext, f: &impl Integrand, r: i32, d: u32) -> Result<Pair> {
    let mut d = d.max(1);
    loop {
        match shell_sum(ctx, f, r, d) {
            Err(Error::PrecisionExhausted(_)) if d < max_shell_depth(ctx) => d += 1,
            Err(Error::PrecisionExhausted(_)) => {
                return Err(Error::NonConstantIntegrand { shell: r, depth: d })
            }
            other => return other,
        }
    }
}

/// Integral over the ball `p^k`, evaluated at zero known only modulo `p^k`.
fn ball_term(ctx: &FieldContext, f: &impl Integrand, k: i32) -> Result<Pair> {
    let mut out = zero_pair();
    let value = f(&PadicNum::zero_with_cap(ctx.p(), k)).map_err(|e| match e {
        Error::PrecisionExhausted(_) => Error::NonConstantIntegrand { shell: k, depth: 0 },
        e => e,
    })?;
    if let Some((b, m)) = value {
        let m = Mono {
            qpow: m.qpow - k,
            ..m
        };
        out[b as usize] = m.to_laurent(ctx);
    }
    Ok(out)
}

/// A principal-value integral over `Q_p` together with its per-shell parts.
#[derive(Clone, Debug)]
pub struct PrincipalValue {
    pub depth: u32,
    pub total: Pair,
    /// The same truncation two shells further out; equal to `total`.
    pub total_next: Pair,
    /// Shell contributions for `|r| <= depth + 2`.
    pub shells: BTreeMap<i32, Pair>,
}

/// `int_{|x| <= q^m} f(x) dx` as the sum of shells `-m..=m` and the ball
/// `p^(m+1)`, checked against `m + 2`.
pub fn principal_value(
    ctx: &FieldContext,
    m: u32,
    depth_of: impl Fn(i32) -> u32,
    f: &impl Integrand,
) -> Result<PrincipalValue> {
    if m > ctx.shell_depth() {
        return Err(Error::InvalidConfig(format!(
            "depth {m} exceeds the context's shell depth {}",
            ctx.shell_depth()
        )));
    }
    let m = m as i32;
    let mut shells = BTreeMap::new();
    for r in -(m + 2)..=(m + 2) {
        shells.insert(r, shell_integral(ctx, f, r, depth_of(r))?);
    }
    let truncated = |k: i32| -> Result<Pair> {
        let mut acc = ball_term(ctx, f, k + 1)?;
        for r in -k..=k {
            acc = add_pair(&acc, &shells[&r]);
        }
        Ok(acc)
    };
    let total = truncated(m)?;
    let total_next = truncated(m + 2)?;
    if total != total_next {
        let (lhs, rhs) = if total[0] != total_next[0] {
            (&total[0], &total_next[0])
        } else {
            (&total[1], &total_next[1])
        };
        return Err(Error::UnstablePrincipalValue {
            depth: m as u32,
            next: m as u32 + 2,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }
    Ok(PrincipalValue {
        depth: m as u32,
        total,
        total_next,
        shells,
    })
}
