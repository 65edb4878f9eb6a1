//! The two-dimensional Hecke algebra of `lambda`-biequivariant functions on
//! `K`, its action on the `lambda`-isotypic Whittaker functions, and the
//! projection of those functions to the torus.

use std::collections::BTreeMap;

use crate::character::{AddChar, MultCharacter, Root};
use crate::context::FieldContext;
use crate::error::{Error, Result};
use crate::integrate::quadrature::{principal_value, Basis, Mono};
use crate::padic::{pow_u64, PadicNum};
use crate::sl2::{
    cell_decompose, coset_reps_jw0j, in_subgroup, lambda_root, CellDecomp, GroupElem, Subgroup,
};
use crate::CycNum;

/// `coeff_i2 * T_I2 + coeff_w0 * T_w0`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeckeOp {
    pub coeff_i2: CycNum,
    pub coeff_w0: CycNum,
}

impl HeckeOp {
    pub fn basis(ctx: &FieldContext, b: Basis) -> Self {
        let (one, zero) = (ctx.cyc_one(), ctx.cyc_zero());
        match b {
            Basis::I2 => HeckeOp {
                coeff_i2: one,
                coeff_w0: zero,
            },
            Basis::W0 => HeckeOp {
                coeff_i2: zero,
                coeff_w0: one,
            },
        }
    }

    pub fn coeff(&self, b: Basis) -> &CycNum {
        match b {
            Basis::I2 => &self.coeff_i2,
            Basis::W0 => &self.coeff_w0,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        HeckeOp {
            coeff_i2: &self.coeff_i2 + &o.coeff_i2,
            coeff_w0: &self.coeff_w0 + &o.coeff_w0,
        }
    }

    pub fn scale(&self, s: &CycNum) -> Self {
        HeckeOp {
            coeff_i2: &self.coeff_i2 * s,
            coeff_w0: &self.coeff_w0 * s,
        }
    }
}

/// The right-`J` cosets making up `J ∪ J w0 J`, identity first.
pub fn support_reps(ctx: &FieldContext) -> Vec<GroupElem> {
    let mut reps = vec![GroupElem::identity(ctx)];
    reps.extend(coset_reps_jw0j(ctx));
    reps
}

/// Which basis operator is supported at `g`, with its value there.
fn basis_value(
    ctx: &FieldContext,
    eta: &MultCharacter,
    g: &GroupElem,
) -> Result<Option<(Basis, Root)>> {
    if !in_subgroup(ctx, g, Subgroup::K)? {
        return Err(Error::NotInK);
    }
    if in_subgroup(ctx, g, Subgroup::J)? {
        return Ok(Some((Basis::I2, lambda_root(ctx, eta, g)?.inv())));
    }
    if !g.c.is_unit() {
        return Ok(None);
    }
    let n = ctx.n_eta();
    let t = g.a.div(&g.c)?.residue(n)?;
    let rep = GroupElem::u(ctx, ctx.int(t as i64)).mul(&GroupElem::w0(ctx));
    let k = rep.inv().mul(g);
    Ok(Some((Basis::W0, lambda_root(ctx, eta, &k)?.inv())))
}

pub fn hecke_eval(
    ctx: &FieldContext,
    eta: &MultCharacter,
    t: &HeckeOp,
    g: &GroupElem,
) -> Result<CycNum> {
    Ok(match basis_value(ctx, eta, g)? {
        Some((b, root)) => t.coeff(b) * &ctx.root(root)?,
        None => ctx.cyc_zero(),
    })
}

/// Fixed probe points in `K` used to confirm that a resolved result agrees
/// with the brute-force values away from `I2` and `w0`.
fn probe_points(ctx: &FieldContext) -> Vec<GroupElem> {
    let n = ctx.n_eta() as i32;
    let w0 = GroupElem::w0(ctx);
    let u1 = GroupElem::u(ctx, ctx.int(1));
    let unit = ctx.unit(ctx.p() - 1);
    let mut pts = vec![
        u1,
        GroupElem::ubar(ctx, ctx.pi_pow(n)),
        GroupElem::diag(ctx, unit).expect("unit"),
        u1.mul(&w0).mul(&u1),
        GroupElem::ubar(ctx, ctx.int(1)),
        w0.neg(),
    ];
    if n >= 2 {
        pts.push(GroupElem::ubar(ctx, ctx.pi_pow(1)));
    }
    pts
}

/// `(A * B)(y) = sum over cosets x J in supp A of A(x) B(x^-1 y)`, with
/// `vol(J) = 1`.
fn convolve_at(
    ctx: &FieldContext,
    eta: &MultCharacter,
    a: &HeckeOp,
    b: &HeckeOp,
    reps: &[GroupElem],
    y: &GroupElem,
) -> Result<CycNum> {
    let mut acc = ctx.cyc_zero();
    for x in reps {
        let ax = hecke_eval(ctx, eta, a, x)?;
        if ax.is_zero() {
            continue;
        }
        acc = &acc + &(&ax * &hecke_eval(ctx, eta, b, &x.inv().mul(y))?);
    }
    Ok(acc)
}

pub fn convolve(
    ctx: &FieldContext,
    eta: &MultCharacter,
    a: &HeckeOp,
    b: &HeckeOp,
) -> Result<HeckeOp> {
    let reps = support_reps(ctx);
    let out = HeckeOp {
        coeff_i2: convolve_at(ctx, eta, a, b, &reps, &GroupElem::identity(ctx))?,
        coeff_w0: convolve_at(ctx, eta, a, b, &reps, &GroupElem::w0(ctx))?,
    };
    for y in probe_points(ctx) {
        let direct = convolve_at(ctx, eta, a, b, &reps, &y)?;
        if direct != hecke_eval(ctx, eta, &out, &y)? {
            return Err(Error::BasisResolutionFailure(format!(
                "convolution at {y:?} is {direct}, outside the span"
            )));
        }
    }
    Ok(out)
}

/// `coeff_i2 * phi_I2 + coeff_w0 * phi_w0`, where `phi_I2` is supported on
/// `U J` and `phi_w0` on `U w0 J`, both `psi(u) lambda(j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WhittakerVec {
    pub coeff_i2: CycNum,
    pub coeff_w0: CycNum,
}

impl WhittakerVec {
    pub fn basis(ctx: &FieldContext, b: Basis) -> Self {
        let h = HeckeOp::basis(ctx, b);
        WhittakerVec {
            coeff_i2: h.coeff_i2,
            coeff_w0: h.coeff_w0,
        }
    }

    pub fn coeff(&self, b: Basis) -> &CycNum {
        match b {
            Basis::I2 => &self.coeff_i2,
            Basis::W0 => &self.coeff_w0,
        }
    }

    pub fn scale(&self, s: &CycNum) -> Self {
        WhittakerVec {
            coeff_i2: &self.coeff_i2 * s,
            coeff_w0: &self.coeff_w0 * s,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        WhittakerVec {
            coeff_i2: &self.coeff_i2 + &o.coeff_i2,
            coeff_w0: &self.coeff_w0 + &o.coeff_w0,
        }
    }
}

/// Basis function whose support contains `g`, with its value there.
///
/// `g` lies in `U J` exactly when it is in `B J` with a unit torus part, and
/// in `U w0 J` exactly when it is in `B w0 J` with a unit torus part; the
/// torus then moves past `u(beta)` as `u(beta a^2)`.
pub fn whittaker_basis_value(
    ctx: &FieldContext,
    eta: &MultCharacter,
    psi: AddChar,
    g: &GroupElem,
) -> Result<Option<(Basis, Root)>> {
    let (basis, torus, beta, j) = match cell_decompose(ctx, g)? {
        CellDecomp::BJ { torus, beta, j } => (Basis::I2, torus, beta, j),
        CellDecomp::Bw0J { torus, beta, j } => (Basis::W0, torus, beta, j),
        CellDecomp::Outside => return Ok(None),
    };
    if torus.valuation() != 0 {
        return Ok(None);
    }
    let a = torus.a;
    let u_part = psi.eval(&beta.mul(&a).mul(&a))?;
    // diag(a, a^-1) w0 = w0 diag(a^-1, a)
    let t_part = match basis {
        Basis::I2 => eta.eval(&a)?,
        Basis::W0 => eta.eval(&a)?.inv(),
    };
    Ok(Some((basis, u_part.mul(t_part).mul(eta.eval(&j.a)?))))
}

pub fn whittaker_eval(
    ctx: &FieldContext,
    eta: &MultCharacter,
    psi: AddChar,
    v: &WhittakerVec,
    g: &GroupElem,
) -> Result<CycNum> {
    Ok(match whittaker_basis_value(ctx, eta, psi, g)? {
        Some((b, root)) => v.coeff(b) * &ctx.root(root)?,
        None => ctx.cyc_zero(),
    })
}

/// `(T * phi)(g) = sum over cosets x J in supp T of T(x) phi(g x)`.
fn act_at(
    ctx: &FieldContext,
    eta: &MultCharacter,
    psi: AddChar,
    t: &HeckeOp,
    v: &WhittakerVec,
    reps: &[GroupElem],
    g: &GroupElem,
) -> Result<CycNum> {
    let mut acc = ctx.cyc_zero();
    for x in reps {
        let tx = hecke_eval(ctx, eta, t, x)?;
        if tx.is_zero() {
            continue;
        }
        acc = &acc + &(&tx * &whittaker_eval(ctx, eta, psi, v, &g.mul(x))?);
    }
    Ok(acc)
}

/// Extra points, inside and outside `U J ∪ U w0 J`, at which an action result
/// is compared with its resolution.
fn whittaker_probes(ctx: &FieldContext) -> Vec<GroupElem> {
    let mut pts = probe_points(ctx);
    let u = GroupElem::u(ctx, ctx.pi_pow(-1));
    pts.push(u);
    pts.push(u.mul(&GroupElem::w0(ctx)));
    pts.push(GroupElem::diag(ctx, ctx.pi_pow(1)).expect("unit"));
    pts
}

pub fn act(
    ctx: &FieldContext,
    eta: &MultCharacter,
    psi: AddChar,
    t: &HeckeOp,
    v: &WhittakerVec,
) -> Result<WhittakerVec> {
    let reps = support_reps(ctx);
    let out = WhittakerVec {
        coeff_i2: act_at(ctx, eta, psi, t, v, &reps, &GroupElem::identity(ctx))?,
        coeff_w0: act_at(ctx, eta, psi, t, v, &reps, &GroupElem::w0(ctx))?,
    };
    for g in whittaker_probes(ctx) {
        let direct = act_at(ctx, eta, psi, t, v, &reps, &g)?;
        if direct != whittaker_eval(ctx, eta, psi, &out, &g)? {
            return Err(Error::BasisResolutionFailure(format!(
                "action at {g:?} is {direct}, outside the span"
            )));
        }
    }
    Ok(out)
}

/// `a + b * sigma` with `sigma^2 = eps q^-n`, the square of the normalising
/// scalar of `T_w0`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadExt {
    pub a: CycNum,
    pub b: CycNum,
}

/// Outcome of the sign-module check, kept radical-free.
#[derive(Clone, Debug)]
pub struct SignAction {
    pub square: HeckeOp,
    pub on_i2: WhittakerVec,
    pub on_w0: WhittakerVec,
    pub sigma_squared: CycNum,
    /// `sigma^2` times the `T_I2`-coefficient of `T_w0 * T_w0`; 1 when the
    /// normalized generator squares to the identity.
    pub normalized_square: CycNum,
    /// `sigma T_w0 v` for `v = phi_I2 - eps sigma phi_w0`, as coefficients in
    /// `phi_I2, phi_w0`.
    pub image: [QuadExt; 2],
    /// `-v` in the same coordinates.
    pub expected: [QuadExt; 2],
    pub passed: bool,
}

pub fn verify_sign_action(
    ctx: &FieldContext,
    eta: &MultCharacter,
    psi: AddChar,
) -> Result<SignAction> {
    let n = ctx.n_eta() as i32;
    let eps = ctx.root(eta.at_minus_one())?;
    let tw = HeckeOp::basis(ctx, Basis::W0);
    let square = convolve(ctx, eta, &tw, &tw)?;
    let on_i2 = act(ctx, eta, psi, &tw, &WhittakerVec::basis(ctx, Basis::I2))?;
    let on_w0 = act(ctx, eta, psi, &tw, &WhittakerVec::basis(ctx, Basis::W0))?;
    let sigma_squared = &eps * &ctx.cyc_q_pow(-n);
    let normalized_square = &sigma_squared * &square.coeff_i2;

    // v = phi_I2 - eps sigma phi_w0; T_w0 v = on_i2 - eps sigma on_w0;
    // multiplying by sigma folds sigma^2 back into the rational part.
    let neg_eps = -&eps;
    let tv = [
        QuadExt {
            a: on_i2.coeff_i2.clone(),
            b: &neg_eps * &on_w0.coeff_i2,
        },
        QuadExt {
            a: on_i2.coeff_w0.clone(),
            b: &neg_eps * &on_w0.coeff_w0,
        },
    ];
    let times_sigma = |z: &QuadExt| QuadExt {
        a: &z.b * &sigma_squared,
        b: z.a.clone(),
    };
    let image = [times_sigma(&tv[0]), times_sigma(&tv[1])];
    let expected = [
        QuadExt {
            a: -ctx.cyc_one(),
            b: ctx.cyc_zero(),
        },
        QuadExt {
            a: ctx.cyc_zero(),
            b: eps.clone(),
        },
    ];
    let passed = square.coeff_w0.is_zero()
        && normalized_square.is_one()
        && image == expected
        && on_i2 == WhittakerVec::basis(ctx, Basis::W0).scale(&eps)
        && on_w0 == WhittakerVec::basis(ctx, Basis::I2).scale(&ctx.cyc_q_pow(n));
    Ok(SignAction {
        square,
        on_i2,
        on_w0,
        sigma_squared,
        normalized_square,
        image,
        expected,
        passed,
    })
}

/// A finitely supported function of `t = diag(p^k u, .)`, keyed by `k` and the
/// unit residue `u mod p^n`. Zero values are not stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TorusFn {
    pub values: BTreeMap<(i32, u64), CycNum>,
}

impl TorusFn {
    pub fn get(&self, k: i32, u: u64) -> Option<&CycNum> {
        self.values.get(&(k, u))
    }

    fn insert(&mut self, k: i32, u: u64, v: CycNum) {
        if !v.is_zero() {
            self.values.insert((k, u), v);
        }
    }

    pub fn support(&self) -> impl Iterator<Item = (i32, u64)> + '_ {
        self.values.keys().copied()
    }
}

/// Both basis projections `t -> delta^(1/2)(t) int f(t ubar(x)) dx`.
pub fn s_delta_basis(
    ctx: &FieldContext,
    eta: &MultCharacter,
    psi: AddChar,
    torus_range: u32,
    depth: u32,
) -> Result<[TorusFn; 2]> {
    let n = ctx.n_eta();
    if torus_range < 2 || depth < n + 2 {
        return Err(Error::InvalidConfig(format!(
            "torus range {torus_range} must be >= 2 and depth {depth} >= {}",
            n + 2
        )));
    }
    let p = ctx.p();
    let order = ctx.order();
    let mut out = [TorusFn::default(), TorusFn::default()];
    let range = torus_range as i32;
    for k in -range..=range {
        for u in (1..pow_u64(p, n)).filter(|u| u % p != 0) {
            let a = ctx.elem(k, u);
            let t = GroupElem::diag(ctx, a)?;
            let f = |x: &PadicNum| -> Result<Option<(Basis, Mono)>> {
                let g = t.mul(&GroupElem::ubar(ctx, *x));
                Ok(whittaker_basis_value(ctx, eta, psi, &g)?.map(|(b, root)| {
                    (
                        b,
                        Mono {
                            root: root.exponent_in(order).expect("root of the context"),
                            qpow: -k,
                            xpow: 0,
                        },
                    )
                }))
            };
            let pv = principal_value(ctx, depth, |_| 1.max(n), &f)?;
            for b in Basis::ALL {
                let lp = &pv.total[b as usize];
                if lp.coeffs().keys().any(|&e| e != 0) {
                    return Err(Error::NotAMonomial(format!("torus projection {lp}")));
                }
                if let Some(c) = lp.coeff(0) {
                    out[b as usize].insert(k, u, c.clone());
                }
            }
        }
    }
    Ok(out)
}

pub fn s_delta_project(
    ctx: &FieldContext,
    eta: &MultCharacter,
    psi: AddChar,
    v: &WhittakerVec,
    torus_range: u32,
    depth: u32,
) -> Result<TorusFn> {
    let [f_i2, f_w0] = s_delta_basis(ctx, eta, psi, torus_range, depth)?;
    let mut out = TorusFn::default();
    let keys: std::collections::BTreeSet<_> = f_i2.support().chain(f_w0.support()).collect();
    for (k, u) in keys {
        let mut acc = ctx.cyc_zero();
        if let Some(x) = f_i2.get(k, u) {
            acc = &acc + &(&v.coeff_i2 * x);
        }
        if let Some(x) = f_w0.get(k, u) {
            acc = &acc + &(&v.coeff_w0 * x);
        }
        out.insert(k, u, acc);
    }
    Ok(out)
}

/// `ch(t) = q^-n eta(u)` on `T(o)`, zero elsewhere.
pub fn torus_characteristic(ctx: &FieldContext, eta: &MultCharacter) -> Result<TorusFn> {
    let n = ctx.n_eta();
    let mut out = TorusFn::default();
    for u in (1..pow_u64(ctx.p(), n)).filter(|u| u % ctx.p() != 0) {
        let v = &ctx.cyc_q_pow(-(n as i32)) * &ctx.root(eta.eval_residue(u))?;
        out.insert(0, u, v);
    }
    Ok(out)
}
