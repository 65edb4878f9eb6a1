//! Whittaker functionals, intertwining operators and the local coefficient,
//! each evaluated as a principal-value integral over `U ≅ Q_p`.

use crate::character::{AddChar, ExtChar};
use crate::context::FieldContext;
use crate::error::{Error, Result};
use crate::integrate::induced::{gauss_sum, InducedSpace, InducedVec};
use crate::integrate::quadrature::{principal_value, Basis, Mono, Pair, PrincipalValue};
use crate::sl2::GroupElem;
use crate::{CycNum, Laurent};

/// Relative depth making `x -> f(w0 u(x)) psi^-1(x)` constant on classes of
/// the shell `p^r o^x`.
pub fn whittaker_depth(ctx: &FieldContext, r: i32) -> u32 {
    1.max(ctx.n_eta() as i32).max(-r) as u32
}

/// Relative depth for integrands without an additive character.
pub fn intertwining_depth(ctx: &FieldContext, _r: i32) -> u32 {
    1.max(ctx.n_eta())
}

/// `Omega(f) = int_U f(w0 u) psi^-1(u) du` on both basis functions at once.
pub fn whittaker_basis(
    ctx: &FieldContext,
    space: &InducedSpace,
    psi: AddChar,
    m: u32,
) -> Result<PrincipalValue> {
    let w0 = GroupElem::w0(ctx);
    let order = ctx.order();
    let psi_inv = psi.inverse();
    let f = |x: &crate::PadicNum| -> Result<Option<(Basis, Mono)>> {
        let g = w0.mul(&GroupElem::u(ctx, *x));
        let Some((b, mono)) = space.basis_mono(ctx, &g)? else {
            return Ok(None);
        };
        let e = psi_inv.eval(x)?.exponent_in(order)?;
        Ok(Some((b, mono.times_root(e, order))))
    };
    principal_value(ctx, m, |r| whittaker_depth(ctx, r), &f)
}

fn combine(v: &InducedVec, pair: &Pair) -> Laurent {
    v.coeff_i2.mul(&pair[0]).add(&v.coeff_w0.mul(&pair[1]))
}

pub fn whittaker_omega(
    ctx: &FieldContext,
    v: &InducedVec,
    psi: AddChar,
    m: u32,
) -> Result<Laurent> {
    let pv = whittaker_basis(ctx, &v.space, psi, m)?;
    Ok(combine(v, &pv.total))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weyl {
    W0,
    W0Inv,
}

impl Weyl {
    pub fn elem(self, ctx: &FieldContext) -> GroupElem {
        match self {
            Weyl::W0 => GroupElem::w0(ctx),
            Weyl::W0Inv => GroupElem::w0(ctx).inv(),
        }
    }
}

/// `A(w)f(g) = int_U f(w u g) du` for both basis functions.
pub fn intertwine_at(
    ctx: &FieldContext,
    space: &InducedSpace,
    w: Weyl,
    g: &GroupElem,
    m: u32,
) -> Result<PrincipalValue> {
    let we = w.elem(ctx);
    let f = |x: &crate::PadicNum| -> Result<Option<(Basis, Mono)>> {
        space.basis_mono(ctx, &we.mul(&GroupElem::u(ctx, *x)).mul(g))
    };
    principal_value(ctx, m, |r| intertwining_depth(ctx, r), &f)
}

/// Matrix of `A(w)` from `space` to `space.dual()`: entry `[target][source]`.
/// The target coordinates are the values at `I2` and at `w0`.
pub fn intertwine_matrix(
    ctx: &FieldContext,
    space: &InducedSpace,
    w: Weyl,
    m: u32,
) -> Result<[Pair; 2]> {
    let at_id = intertwine_at(ctx, space, w, &GroupElem::identity(ctx), m)?;
    let at_w0 = intertwine_at(ctx, space, w, &GroupElem::w0(ctx), m)?;
    Ok([at_id.total, at_w0.total])
}

pub fn apply_matrix(mat: &[Pair; 2], v: &InducedVec) -> InducedVec {
    InducedVec {
        space: v.space.dual(),
        coeff_i2: combine(v, &mat[0]),
        coeff_w0: combine(v, &mat[1]),
    }
}

pub fn intertwine(ctx: &FieldContext, v: &InducedVec, w: Weyl, m: u32) -> Result<InducedVec> {
    let mat = intertwine_matrix(ctx, &v.space, w, m)?;
    Ok(apply_matrix(&mat, v))
}

/// The local coefficient together with the pieces it is built from.
#[derive(Clone, Debug)]
pub struct LocalCoefficient {
    /// `Omega_s(f_I2)`.
    pub numerator: Laurent,
    /// `(Omega'_s o A(w0))(f_I2)`.
    pub denominator: Laurent,
    pub ratio: Laurent,
    pub closed_form: Laurent,
    pub omega: PrincipalValue,
}

/// `chi(-p^n) tau(eta, psi, p^-n) q^n X^n`.
pub fn local_coefficient_closed_form(
    ctx: &FieldContext,
    chi: &ExtChar,
    psi: AddChar,
) -> Result<Laurent> {
    let n = ctx.n_eta() as i32;
    let tau = gauss_sum(ctx, &chi.unit_part, psi, &ctx.pi_pow(-n))?;
    let sign = ctx.root(chi.eval(&ctx.pi_pow(n).neg())?)?;
    Ok(Laurent::monomial(&sign * &tau.scale(&ctx.q_pow(n)), n))
}

/// `C_psi(s, chi) = Omega_s(f_I2) / (Omega'_s o A(s, chi, w0))(f_I2)`,
/// asserted equal to the closed form.
pub fn local_coefficient(
    ctx: &FieldContext,
    chi: &ExtChar,
    psi: AddChar,
    m: u32,
) -> Result<LocalCoefficient> {
    let space = InducedSpace::new(chi.clone());
    let f_i2 = InducedVec::basis(ctx, space.clone(), Basis::I2);
    let omega = whittaker_basis(ctx, &space, psi, m)?;
    let numerator = omega.total[Basis::I2 as usize].clone();
    let transported = intertwine(ctx, &f_i2, Weyl::W0, m)?;
    let denominator = whittaker_omega(ctx, &transported, psi, m)?;
    let ratio = numerator.div_monomial(&denominator)?;
    let closed_form = local_coefficient_closed_form(ctx, chi, psi)?;
    if ratio != closed_form {
        return Err(Error::MismatchWithClosedForm {
            computed: ratio.to_string(),
            expected: closed_form.to_string(),
        });
    }
    Ok(LocalCoefficient {
        numerator,
        denominator,
        ratio,
        closed_form,
        omega,
    })
}

/// The local factors and the identities tying them together.
#[derive(Clone, Debug)]
pub struct Factors {
    pub l_factor: Laurent,
    pub epsilon_factor: Laurent,
    /// `C(s, chi) C(1 - s, chi^-1)`.
    pub fe_product: CycNum,
    /// Scalar `c` with `A'(w0^-1) o A(w0) = c Id`.
    pub composition: Laurent,
    /// `mu = c^-1`.
    pub plancherel: Laurent,
    /// `C_psi(s, chi) C_{psi^-1}(-s, chi^-1)`.
    pub mu_from_coefficients: Laurent,
}

pub fn factors_and_equations(ctx: &FieldContext, chi: &ExtChar, m: u32) -> Result<Factors> {
    let psi = AddChar::STANDARD;
    let c = local_coefficient(ctx, chi, psi, m)?.ratio;
    let c_dual = local_coefficient(ctx, &chi.inverse(), psi, m)?.ratio;
    let (fe, k) = c.mul(&c_dual.reflect(ctx.q())).as_monomial()?;
    if k != 0 {
        return Err(Error::NotAMonomial(format!(
            "functional equation left X^{k}"
        )));
    }

    let space = InducedSpace::new(chi.clone());
    let forward = intertwine_matrix(ctx, &space, Weyl::W0, m)?;
    let back = intertwine_matrix(ctx, &space.dual(), Weyl::W0Inv, m)?;
    let mut images = Vec::new();
    for b in Basis::ALL {
        let v = InducedVec::basis(ctx, space.clone(), b);
        images.push(apply_matrix(&back, &apply_matrix(&forward, &v)));
    }
    let composition = images[0].coeff_i2.clone();
    let scalar = images[0].coeff_w0.is_zero()
        && images[1].coeff_i2.is_zero()
        && images[1].coeff_w0 == composition;
    if !scalar {
        return Err(Error::BasisResolutionFailure(format!(
            "intertwiner composition is not scalar: {images:?}"
        )));
    }
    let plancherel = Laurent::monomial(ctx.cyc_one(), 0).div_monomial(&composition)?;

    let c_conj = local_coefficient(ctx, &chi.inverse(), psi.inverse(), m)?.ratio;
    let mu_from_coefficients = c.mul(&c_conj.invert_variable());

    Ok(Factors {
        l_factor: Laurent::monomial(ctx.cyc_one(), 0),
        epsilon_factor: c,
        fe_product: fe,
        composition,
        plancherel,
        mu_from_coefficients,
    })
}
