//! `SL2(Q_p)`: elements, the subgroups `K`, `J` and friends, and the
//! Iwahori and Bruhat-cell factorizations relative to `J`.
//!
//! `J` is the group of integral matrices whose lower-left entry lies in
//! `p^n` (`n` the conductor exponent) and `lambda(j) = eta(j_11)`.

use std::fmt;

use rand::Rng;

use crate::character::{MultCharacter, Root};
use crate::context::FieldContext;
use crate::error::{Error, Result};
use crate::padic::PadicNum;
use crate::CycNum;

/// `[[a, b], [c, d]]` with determinant one.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct GroupElem {
    pub a: PadicNum,
    pub b: PadicNum,
    pub c: PadicNum,
    pub d: PadicNum,
}

impl GroupElem {
    pub fn new(a: PadicNum, b: PadicNum, c: PadicNum, d: PadicNum) -> Self {
        GroupElem { a, b, c, d }
    }

    pub fn identity(ctx: &FieldContext) -> Self {
        Self::new(ctx.one(), ctx.zero(), ctx.zero(), ctx.one())
    }

    /// `[[0, -1], [1, 0]]`.
    pub fn w0(ctx: &FieldContext) -> Self {
        Self::new(ctx.zero(), ctx.one().neg(), ctx.one(), ctx.zero())
    }

    /// `[[1, x], [0, 1]]`.
    pub fn u(ctx: &FieldContext, x: PadicNum) -> Self {
        Self::new(ctx.one(), x, ctx.zero(), ctx.one())
    }

    /// `[[1, 0], [y, 1]]`.
    pub fn ubar(ctx: &FieldContext, y: PadicNum) -> Self {
        Self::new(ctx.one(), ctx.zero(), y, ctx.one())
    }

    /// `diag(t, t^-1)`.
    pub fn diag(ctx: &FieldContext, t: PadicNum) -> Result<Self> {
        Ok(Self::new(t, ctx.zero(), ctx.zero(), t.inv()?))
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        )
    }

    /// Inverse, using determinant one.
    pub fn inv(&self) -> Self {
        Self::new(self.d, self.b.neg(), self.c.neg(), self.a)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.a.neg(), self.b.neg(), self.c.neg(), self.d.neg())
    }

    pub fn det(&self) -> PadicNum {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    /// Entrywise equality to available precision.
    pub fn agrees_with(&self, o: &Self) -> bool {
        self.a.agrees_with(&o.a)
            && self.b.agrees_with(&o.b)
            && self.c.agrees_with(&o.c)
            && self.d.agrees_with(&o.d)
    }

    pub fn entries(&self) -> [PadicNum; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

impl fmt::Debug for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// `diag(a, a^-1)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TorusElem {
    pub a: PadicNum,
}

impl TorusElem {
    pub fn valuation(&self) -> i32 {
        self.a.valuation().expect("torus entry is nonzero")
    }

    /// `delta^(1/2)(t) = |a|`, as a power of `q`.
    pub fn delta_half_exponent(&self) -> i32 {
        -self.valuation()
    }

    /// `nu_s(t) = |a|^s = X^(v(a))` with `X = q^(-s)`.
    pub fn x_exponent(&self) -> i32 {
        self.valuation()
    }

    pub fn to_elem(&self, ctx: &FieldContext) -> Result<GroupElem> {
        GroupElem::diag(ctx, self.a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subgroup {
    J,
    K,
    U,
    Ubar,
    TUnits,
}

pub fn in_subgroup(ctx: &FieldContext, g: &GroupElem, which: Subgroup) -> Result<bool> {
    let one = ctx.one();
    let integral = |x: &PadicNum| x.valuation_at_least(0);
    Ok(match which {
        Subgroup::K => integral(&g.a)? && integral(&g.b)? && integral(&g.c)? && integral(&g.d)?,
        Subgroup::J => {
            in_subgroup(ctx, g, Subgroup::K)?
                && g.a.is_unit()
                && g.d.is_unit()
                && g.c.valuation_at_least(ctx.n_eta() as i32)?
        }
        Subgroup::U => g.a.agrees_with(&one) && g.d.agrees_with(&one) && g.c.is_zero(),
        Subgroup::Ubar => g.a.agrees_with(&one) && g.d.agrees_with(&one) && g.b.is_zero(),
        Subgroup::TUnits => g.a.is_unit() && g.b.is_zero() && g.c.is_zero(),
    })
}

/// `lambda(j) = eta(j_11)` as a root of unity.
pub fn lambda_root(ctx: &FieldContext, eta: &MultCharacter, g: &GroupElem) -> Result<Root> {
    if !in_subgroup(ctx, g, Subgroup::J)? {
        return Err(Error::NotInSubgroup("J"));
    }
    eta.eval(&g.a)
}

pub fn lambda_eval(ctx: &FieldContext, eta: &MultCharacter, g: &GroupElem) -> Result<CycNum> {
    ctx.root(lambda_root(ctx, eta, g)?)
}

/// `j = ubar(y) * diag(t, t^-1) * u(x)`, returned as `(y, t, x)`.
pub fn iwahori_factor(
    ctx: &FieldContext,
    j: &GroupElem,
) -> Result<(PadicNum, TorusElem, PadicNum)> {
    if !in_subgroup(ctx, j, Subgroup::J)? {
        return Err(Error::NotInSubgroup("J"));
    }
    let t = j.a;
    Ok((j.c.div(&t)?, TorusElem { a: t }, j.b.div(&t)?))
}

/// Position of `g` relative to `B \ G / J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellDecomp {
    /// `g = diag(a, a^-1) u(beta) j`.
    BJ {
        torus: TorusElem,
        beta: PadicNum,
        j: GroupElem,
    },
    /// `g = diag(a, a^-1) u(beta) w0 j`.
    Bw0J {
        torus: TorusElem,
        beta: PadicNum,
        j: GroupElem,
    },
    /// `v(d) < v(c) < v(d) + n`: only possible for `n >= 2`.
    Outside,
}

impl CellDecomp {
    /// Product of the factors; the input for `Outside` is not recoverable.
    pub fn reassemble(&self, ctx: &FieldContext) -> Result<Option<GroupElem>> {
        Ok(match self {
            CellDecomp::BJ { torus, beta, j } => {
                Some(torus.to_elem(ctx)?.mul(&GroupElem::u(ctx, *beta)).mul(j))
            }
            CellDecomp::Bw0J { torus, beta, j } => Some(
                torus
                    .to_elem(ctx)?
                    .mul(&GroupElem::u(ctx, *beta))
                    .mul(&GroupElem::w0(ctx))
                    .mul(j),
            ),
            CellDecomp::Outside => None,
        })
    }
}

/// Cell of `g` by column elimination on the bottom row `(c, d)`.
pub fn cell_decompose(ctx: &FieldContext, g: &GroupElem) -> Result<CellDecomp> {
    let n = ctx.n_eta() as i32;
    let GroupElem { a, b, c, d } = *g;
    let in_bj = match d.valuation() {
        Some(vd) => c.valuation_at_least(vd + n)?,
        None => false,
    };
    if in_bj {
        let d_inv = d.inv()?;
        let torus = TorusElem { a: d_inv };
        let j = GroupElem::ubar(ctx, c.mul(&d_inv));
        return Ok(CellDecomp::BJ {
            torus,
            beta: b.mul(&d),
            j,
        });
    }
    let vc = c.valuation().ok_or_else(|| {
        Error::PrecisionExhausted(format!("bottom row ({c}, {d}) is undecidable"))
    })?;
    if d.valuation_at_least(vc)? {
        let c_inv = c.inv()?;
        let torus = TorusElem { a: c_inv };
        let j = GroupElem::u(ctx, d.mul(&c_inv));
        return Ok(CellDecomp::Bw0J {
            torus,
            beta: a.mul(&c),
            j,
        });
    }
    Ok(CellDecomp::Outside)
}

/// Right-`J` coset representatives `u(t) w0`, `0 <= t < p^n`, of `J w0 J`.
pub fn coset_reps_jw0j(ctx: &FieldContext) -> Vec<GroupElem> {
    let count = ctx.p().pow(ctx.n_eta()) as i64;
    let w0 = GroupElem::w0(ctx);
    (0..count)
        .map(|t| GroupElem::u(ctx, ctx.int(t)).mul(&w0))
        .collect()
}

/// Whether `g` lies in `K` with a unit lower-left entry, i.e. in `J w0 J`.
pub fn in_jw0j(ctx: &FieldContext, g: &GroupElem) -> Result<bool> {
    Ok(in_subgroup(ctx, g, Subgroup::K)? && g.c.is_unit())
}

/// Random element of `J`: a word of the given length in `u(o)`,
/// `ubar(p^n)` and `diag(o^x)`.
pub fn random_j<R: Rng + ?Sized>(rng: &mut R, ctx: &FieldContext, len: usize) -> GroupElem {
    let mut g = GroupElem::identity(ctx);
    for _ in 0..len {
        let step = match rng.gen_range(0..3) {
            0 => GroupElem::u(ctx, random_integral(rng, ctx, 0)),
            1 => GroupElem::ubar(ctx, random_integral(rng, ctx, ctx.n_eta() as i32)),
            _ => {
                GroupElem::diag(ctx, PadicNum::random_unit(rng, ctx.p(), ctx.prec())).expect("unit")
            }
        };
        g = g.mul(&step);
    }
    g
}

/// Random element of `K`: `J`-words interleaved with `w0`.
pub fn random_k<R: Rng + ?Sized>(rng: &mut R, ctx: &FieldContext, len: usize) -> GroupElem {
    let w0 = GroupElem::w0(ctx);
    let mut g = random_j(rng, ctx, 2);
    for _ in 0..len {
        if rng.gen_bool(0.5) {
            g = g.mul(&w0);
        }
        g = g.mul(&random_j(rng, ctx, 2));
    }
    g
}

/// Random element of `p^k o`, occasionally exactly zero.
pub fn random_integral<R: Rng + ?Sized>(rng: &mut R, ctx: &FieldContext, k: i32) -> PadicNum {
    if rng.gen_ratio(1, 8) {
        return ctx.zero();
    }
    PadicNum::random(rng, ctx.p(), k..=k + 3, ctx.prec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::ramified_quadratic_chars;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx(p: u64, n: u32) -> FieldContext {
        FieldContext::new(p, n, n + 2).unwrap()
    }

    #[test]
    fn membership_examples() {
        for (p, n) in [(3, 1), (2, 2), (2, 3)] {
            let c = ctx(p, n);
            let id = GroupElem::identity(&c);
            assert!(in_subgroup(&c, &id, Subgroup::J).unwrap());
            assert!(in_subgroup(&c, &id, Subgroup::K).unwrap());
            let at = GroupElem::ubar(&c, c.pi_pow(n as i32));
            assert!(in_subgroup(&c, &at, Subgroup::J).unwrap());
            let below = GroupElem::ubar(&c, c.pi_pow(n as i32 - 1));
            assert!(!in_subgroup(&c, &below, Subgroup::J).unwrap());
            let w0 = GroupElem::w0(&c);
            assert!(!in_subgroup(&c, &w0, Subgroup::J).unwrap());
            assert!(in_subgroup(&c, &w0, Subgroup::K).unwrap());
        }
    }

    #[test]
    fn lambda_examples() {
        let c = ctx(3, 1);
        let eta = &ramified_quadratic_chars(3)[0];
        let id = GroupElem::identity(&c);
        assert!(lambda_eval(&c, eta, &id).unwrap().is_one());
        assert_eq!(lambda_eval(&c, eta, &id.neg()).unwrap(), c.cyc_int(-1));
        assert_eq!(
            lambda_eval(&c, eta, &GroupElem::w0(&c)),
            Err(Error::NotInSubgroup("J"))
        );
    }

    #[test]
    fn bruhat_identity_has_no_leading_sign() {
        // ubar(x) = diag(x^-1, x) u(x) w0 u(x^-1), checked at x = 1 and a random unit
        let c = ctx(5, 1);
        for x in [c.int(1), c.unit(7)] {
            let xi = x.inv().unwrap();
            let rhs = GroupElem::diag(&c, xi)
                .unwrap()
                .mul(&GroupElem::u(&c, x))
                .mul(&GroupElem::w0(&c))
                .mul(&GroupElem::u(&c, xi));
            assert!(rhs.agrees_with(&GroupElem::ubar(&c, x)));
            assert!(!rhs.neg().agrees_with(&GroupElem::ubar(&c, x)));
        }
    }

    #[test]
    fn cell_examples() {
        for (p, n) in [(3u64, 1u32), (2, 3)] {
            let c = ctx(p, n);
            let x = c.elem(-(n as i32) - 1, 2 * p - 1);
            let g = GroupElem::w0(&c).mul(&GroupElem::u(&c, x));
            match cell_decompose(&c, &g).unwrap() {
                CellDecomp::BJ { torus, .. } => {
                    assert!(torus.a.agrees_with(&x.inv().unwrap()))
                }
                other => panic!("expected BJ, got {other:?}"),
            }
            let y = c.unit(p + 1);
            match cell_decompose(&c, &GroupElem::ubar(&c, y)).unwrap() {
                CellDecomp::Bw0J { torus, .. } => {
                    assert!(torus.a.agrees_with(&y.inv().unwrap()))
                }
                other => panic!("expected Bw0J, got {other:?}"),
            }
            match cell_decompose(&c, &GroupElem::identity(&c)).unwrap() {
                CellDecomp::BJ { torus, beta, j } => {
                    assert!(torus.a.agrees_with(&c.int(1)));
                    assert!(beta.is_zero());
                    assert!(j.agrees_with(&GroupElem::identity(&c)));
                }
                other => panic!("expected BJ, got {other:?}"),
            }
        }
    }

    #[test]
    fn intermediate_cell_exists_for_deep_conductor() {
        let c = ctx(2, 2);
        let g = GroupElem::ubar(&c, c.int(2));
        assert_eq!(cell_decompose(&c, &g).unwrap(), CellDecomp::Outside);
        assert!(in_subgroup(&c, &g, Subgroup::K).unwrap());
        assert!(!in_subgroup(&c, &g, Subgroup::J).unwrap());
        assert!(!in_jw0j(&c, &g).unwrap());
    }

    #[test]
    fn coset_representatives() {
        let c = ctx(3, 1);
        let reps = coset_reps_jw0j(&c);
        assert_eq!(reps.len(), 3);
        assert!(reps[0].agrees_with(&GroupElem::w0(&c)));
        for (i, r) in reps.iter().enumerate() {
            assert!(in_subgroup(&c, r, Subgroup::K).unwrap());
            assert!(!in_subgroup(&c, r, Subgroup::J).unwrap());
            for s in &reps[i + 1..] {
                assert!(!in_subgroup(&c, &r.inv().mul(s), Subgroup::J).unwrap());
            }
        }
    }

    #[test]
    fn random_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, n) in [(2u64, 2u32), (2, 3), (3, 1), (13, 1)] {
            let c = ctx(p, n);
            let eta = &ramified_quadratic_chars(p)[0];
            for _ in 0..40 {
                let j = random_j(&mut rng, &c, 4);
                let (y, t, x) = iwahori_factor(&c, &j).unwrap();
                assert!(y.valuation_at_least(n as i32).unwrap());
                let back = GroupElem::ubar(&c, y)
                    .mul(&t.to_elem(&c).unwrap())
                    .mul(&GroupElem::u(&c, x));
                assert!(back.agrees_with(&j));
                assert_eq!(lambda_root(&c, eta, &j).unwrap(), eta.eval(&t.a).unwrap());
                let g = random_k(&mut rng, &c, 3);
                let cell = cell_decompose(&c, &g).unwrap();
                if let Some(h) = cell.reassemble(&c).unwrap() {
                    assert!(h.agrees_with(&g));
                }
            }
        }
    }
}
