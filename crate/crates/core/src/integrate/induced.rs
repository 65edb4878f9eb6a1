//! The two-dimensional `lambda`-isotypic part of the induced representation
//! `F(s, chi)`, spanned by the functions supported on `B J` and `B w0 J`.

use crate::character::{AddChar, ExtChar, MultCharacter, Root};
use crate::context::FieldContext;
use crate::error::Result;
use crate::integrate::quadrature::{Basis, Mono, MonoSum};
use crate::padic::{pow_u64, PadicNum};
use crate::sl2::{cell_decompose, CellDecomp, GroupElem};
use crate::{CycNum, Laurent};

/// `F(side * s, chi)`: `side = 1` for the source space, `-1` for the target
/// of an intertwiner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedSpace {
    pub chi: ExtChar,
    pub side: i32,
}

impl InducedSpace {
    pub fn new(chi: ExtChar) -> Self {
        InducedSpace { chi, side: 1 }
    }

    /// `F(-s, chi^-1)`.
    pub fn dual(&self) -> Self {
        InducedSpace {
            chi: self.chi.inverse(),
            side: -self.side,
        }
    }

    /// Value of the basis function supported on the cell of `g`:
    /// `chi(a) q^(-v(a)) X^(side v(a)) lambda(j)` for `g = diag(a, a^-1) u(beta) [w0] j`.
    pub fn basis_mono(&self, ctx: &FieldContext, g: &GroupElem) -> Result<Option<(Basis, Mono)>> {
        let (basis, torus, j) = match cell_decompose(ctx, g)? {
            CellDecomp::BJ { torus, j, .. } => (Basis::I2, torus, j),
            CellDecomp::Bw0J { torus, j, .. } => (Basis::W0, torus, j),
            CellDecomp::Outside => return Ok(None),
        };
        let v = torus.valuation();
        let root = self.chi.eval(&torus.a)?.mul(self.chi.unit_part.eval(&j.a)?);
        Ok(Some((
            basis,
            Mono {
                root: root.exponent_in(ctx.order())?,
                qpow: -v,
                xpow: self.side * v,
            },
        )))
    }
}

/// `coeff_i2 * f_I2 + coeff_w0 * f_w0` in an [`InducedSpace`].
#[derive(Clone, Debug, PartialEq)]
pub struct InducedVec {
    pub space: InducedSpace,
    pub coeff_i2: Laurent,
    pub coeff_w0: Laurent,
}

impl InducedVec {
    pub fn basis(ctx: &FieldContext, space: InducedSpace, b: Basis) -> Self {
        let one = Laurent::monomial(ctx.cyc_one(), 0);
        let (coeff_i2, coeff_w0) = match b {
            Basis::I2 => (one, Laurent::zero()),
            Basis::W0 => (Laurent::zero(), one),
        };
        InducedVec {
            space,
            coeff_i2,
            coeff_w0,
        }
    }

    pub fn coeff(&self, b: Basis) -> &Laurent {
        match b {
            Basis::I2 => &self.coeff_i2,
            Basis::W0 => &self.coeff_w0,
        }
    }
}

pub fn induced_eval(ctx: &FieldContext, v: &InducedVec, g: &GroupElem) -> Result<Laurent> {
    Ok(match v.space.basis_mono(ctx, g)? {
        Some((b, m)) => v.coeff(b).mul(&m.to_laurent(ctx)),
        None => Laurent::zero(),
    })
}

/// `tau(chi, psi, c) = int_{o^x} chi(x^-1) conj(psi(c x)) dx`, summed over
/// units modulo `p^max(1, level, -v(c))`.
pub fn gauss_sum(
    ctx: &FieldContext,
    chi: &MultCharacter,
    psi: AddChar,
    c: &PadicNum,
) -> Result<CycNum> {
    let p = ctx.p();
    let vc = c.valuation().unwrap_or(0);
    let d = 1.max(chi.level() as i32).max(-vc) as u32;
    let order = ctx.order();
    let mut sum = MonoSum::default();
    for u in 1..pow_u64(p, d) {
        if u % p == 0 {
            continue;
        }
        let x = ctx.unit(u);
        let root: Root = chi.eval(&x)?.inv().mul(psi.eval(&c.mul(&x))?.inv());
        sum.add(
            Mono {
                root: root.exponent_in(order)?,
                qpow: -(d as i32),
                xpow: 0,
            },
            order,
        );
    }
    let lp = sum.to_laurent(ctx);
    Ok(lp.coeff(0).cloned().unwrap_or_else(|| ctx.cyc_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::ramified_quadratic_chars;
    use crate::sl2::random_j;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(p: u64, which: usize, w: i8) -> (FieldContext, InducedSpace) {
        let eta = ramified_quadratic_chars(p)[which].clone();
        let ctx = FieldContext::new(p, eta.level(), eta.level() + 2).unwrap();
        (ctx, InducedSpace::new(ExtChar::new(eta, Root::sign(w))))
    }

    #[test]
    fn basis_values_at_simple_points() {
        let (ctx, space) = setup(3, 0, 1);
        let f_i2 = InducedVec::basis(&ctx, space.clone(), Basis::I2);
        let f_w0 = InducedVec::basis(&ctx, space, Basis::W0);
        let one = Laurent::monomial(ctx.cyc_one(), 0);
        let id = GroupElem::identity(&ctx);
        let w0 = GroupElem::w0(&ctx);
        assert_eq!(induced_eval(&ctx, &f_i2, &id).unwrap(), one);
        assert_eq!(induced_eval(&ctx, &f_w0, &w0).unwrap(), one);
        assert!(induced_eval(&ctx, &f_i2, &w0).unwrap().is_zero());
        assert!(induced_eval(&ctx, &f_w0, &id).unwrap().is_zero());
    }

    #[test]
    fn value_along_the_big_cell() {
        for (p, which) in [(3u64, 0usize), (2, 0), (2, 2)] {
            let (ctx, space) = setup(p, which, -1);
            let n = ctx.n_eta() as i32;
            let f = InducedVec::basis(&ctx, space.clone(), Basis::I2);
            for k in n..n + 2 {
                let x = ctx.elem(-k, 2 * p - 1);
                let g = GroupElem::w0(&ctx).mul(&GroupElem::u(&ctx, x));
                let expect = Laurent::monomial(
                    ctx.root(space.chi.eval(&x.inv().unwrap()).unwrap())
                        .unwrap()
                        .scale(&ctx.q_pow(-k)),
                    k,
                );
                assert_eq!(induced_eval(&ctx, &f, &g).unwrap(), expect);
            }
        }
    }

    #[test]
    fn right_lambda_equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, which) in [(2u64, 1usize), (5, 0)] {
            let (ctx, space) = setup(p, which, 1);
            let eta = space.chi.unit_part.clone();
            for b in Basis::ALL {
                let f = InducedVec::basis(&ctx, space.clone(), b);
                for _ in 0..20 {
                    let g = crate::sl2::random_k(&mut rng, &ctx, 3)
                        .mul(&GroupElem::diag(&ctx, ctx.pi_pow(rng_k(&mut rng))).unwrap());
                    let j = random_j(&mut rng, &ctx, 4);
                    let lam = crate::sl2::lambda_eval(&ctx, &eta, &j).unwrap();
                    let lhs = induced_eval(&ctx, &f, &g.mul(&j)).unwrap();
                    let rhs = induced_eval(&ctx, &f, &g).unwrap().scale(&lam);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    fn rng_k(rng: &mut ChaCha8Rng) -> i32 {
        use rand::Rng;
        rng.gen_range(-2..=2)
    }

    #[test]
    fn gauss_sum_examples() {
        let ctx = FieldContext::new(3, 1, 3).unwrap();
        let eta = &ramified_quadratic_chars(3)[0];
        // oracle: x = 1, 2 with volume 1/3 each; eta(x^-1) conj(psi(x/3))
        let z = |e| CycNum::zeta_pow(ctx.field().clone(), e);
        let n = ctx.order();
        let expect = (z(2 * n / 3) - z(n / 3)).scale(&ctx.q_pow(-1));
        let tau = gauss_sum(&ctx, eta, AddChar::STANDARD, &ctx.pi_pow(-1)).unwrap();
        assert_eq!(tau, expect);
        let trivial = MultCharacter::from_generator_values(3, 1, vec![Root::ONE]);
        let t = gauss_sum(&ctx, &trivial, AddChar::STANDARD, &ctx.int(1)).unwrap();
        assert_eq!(t, ctx.ratio(2, 3));
    }
}
