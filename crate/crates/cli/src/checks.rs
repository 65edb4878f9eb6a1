//! The check registry: every named check, the suite it belongs to, the
//! statements it covers and how it is evaluated on one configuration.

use std::cell::OnceCell;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sl2cover::character::{AddChar, ExtChar, MultCharacter, Root};
use sl2cover::error::{Error, Result};
use sl2cover::hecke::{
    act, convolve, s_delta_basis, torus_characteristic, verify_sign_action, whittaker_eval,
    HeckeOp, SignAction, TorusFn, WhittakerVec,
};
use sl2cover::integrate::functionals::{
    apply_matrix, intertwine_at, intertwine_matrix, whittaker_basis, Weyl,
};
use sl2cover::integrate::quadrature::Pair;
use sl2cover::integrate::{
    factors_and_equations, gauss_sum, induced_eval, local_coefficient, Basis, Factors,
    InducedSpace, InducedVec, LocalCoefficient,
};
use sl2cover::padic::PadicNum;
use sl2cover::sl2::{
    cell_decompose, coset_reps_jw0j, in_jw0j, in_subgroup, iwahori_factor, lambda_eval, random_j,
    random_k, CellDecomp, GroupElem, Subgroup,
};
use sl2cover::{CycNum, FieldContext, Laurent};

use crate::config::Suite;
use crate::report::{Check, Status, Value};

const PSI: AddChar = AddChar::STANDARD;

/// One `(p, eta, w_pi)` configuration with lazily computed shared pieces.
pub struct Case {
    pub ctx: FieldContext,
    pub eta: MultCharacter,
    pub chi: ExtChar,
    pub depth: u32,
    pub torus_range: u32,
    pub seed: u64,
    pub cases: usize,
    lc: OnceCell<std::result::Result<LocalCoefficient, String>>,
    factors: OnceCell<std::result::Result<Factors, String>>,
    matrices: OnceCell<std::result::Result<[[Pair; 2]; 2], String>>,
    sign: OnceCell<std::result::Result<SignAction, String>>,
    s_delta: OnceCell<std::result::Result<[TorusFn; 2], String>>,
}

fn memo<T>(
    cell: &OnceCell<std::result::Result<T, String>>,
    f: impl FnOnce() -> Result<T>,
) -> Result<&T> {
    cell.get_or_init(|| f().map_err(|e| e.to_string()))
        .as_ref()
        .map_err(|e| Error::InvalidConfig(e.clone()))
}

impl Case {
    pub fn new(
        p: u64,
        eta: MultCharacter,
        w_pi: i8,
        depth: u32,
        torus_range: u32,
        seed: u64,
        cases: usize,
    ) -> Result<Self> {
        let ctx = FieldContext::new(p, eta.level(), depth)?;
        let chi = ExtChar::new(eta.clone(), Root::sign(w_pi));
        Ok(Case {
            ctx,
            eta,
            chi,
            depth,
            torus_range,
            seed,
            cases,
            lc: OnceCell::new(),
            factors: OnceCell::new(),
            matrices: OnceCell::new(),
            sign: OnceCell::new(),
            s_delta: OnceCell::new(),
        })
    }

    fn n(&self) -> i32 {
        self.ctx.n_eta() as i32
    }

    fn eps(&self) -> Result<CycNum> {
        self.ctx.root(self.chi.epsilon())
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        let key =
            self.ctx.p() * 1_000_003 + self.ctx.n_eta() as u64 * 101 + self.eta.at_minus_one().exp;
        ChaCha8Rng::seed_from_u64(self.seed ^ key.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt)
    }

    fn lc(&self) -> Result<&LocalCoefficient> {
        memo(&self.lc, || {
            local_coefficient(&self.ctx, &self.chi, PSI, self.depth)
        })
    }

    fn factors(&self) -> Result<&Factors> {
        memo(&self.factors, || {
            factors_and_equations(&self.ctx, &self.chi, self.depth)
        })
    }

    /// Forward `A(w0)` and backward `A(w0^-1)` matrices on the source space.
    fn matrices(&self) -> Result<&[[Pair; 2]; 2]> {
        memo(&self.matrices, || {
            let space = InducedSpace::new(self.chi.clone());
            Ok([
                intertwine_matrix(&self.ctx, &space, Weyl::W0, self.depth)?,
                intertwine_matrix(&self.ctx, &space, Weyl::W0Inv, self.depth)?,
            ])
        })
    }

    fn sign(&self) -> Result<&SignAction> {
        memo(&self.sign, || verify_sign_action(&self.ctx, &self.eta, PSI))
    }

    fn s_delta(&self) -> Result<&[TorusFn; 2]> {
        memo(&self.s_delta, || {
            s_delta_basis(&self.ctx, &self.eta, PSI, self.torus_range, self.depth)
        })
    }

    fn constant(&self, c: CycNum) -> Laurent {
        Laurent::monomial(c, 0)
    }
}

type Outcome = Result<(bool, Value, Value)>;

pub struct CheckSpec {
    pub name: &'static str,
    pub suite: Suite,
    pub anchor: &'static str,
    /// Manifest entries this check exercises.
    pub covers: &'static [&'static str],
    pub run: fn(&Case) -> Outcome,
}

pub fn run_check(spec: &CheckSpec, case: &Case) -> Check {
    let start = Instant::now();
    let (status, lhs, rhs) = match (spec.run)(case) {
        Ok((true, l, r)) => (Status::Pass, l, r),
        Ok((false, l, r)) => (Status::Fail, l, r),
        Err(e) => (
            Status::Fail,
            Value::text(format!("error: {e}")),
            Value::default(),
        ),
    };
    Check {
        name: spec.name.to_string(),
        status,
        lhs,
        rhs,
        anchor: spec.anchor.to_string(),
        ms: start.elapsed().as_millis() as u64,
    }
}

fn same_laurent(a: &Laurent, b: &Laurent) -> Outcome {
    Ok((a == b, Value::laurent(a), Value::laurent(b)))
}

fn same_cyc(a: &CycNum, b: &CycNum) -> Outcome {
    Ok((a == b, Value::cyc(a), Value::cyc(b)))
}

/// Runs `trial` on `count` seeded cases and reports the first failure.
fn property(count: usize, mut trial: impl FnMut(usize) -> Result<Option<String>>) -> Outcome {
    for i in 0..count {
        if let Some(why) = trial(i)? {
            return Ok((
                false,
                Value::text(why),
                Value::text(format!("{count} cases hold")),
            ));
        }
    }
    Ok((
        true,
        Value::text(format!("{count} cases")),
        Value::text(format!("{count} cases hold")),
    ))
}

fn list(vals: &[&Laurent]) -> Value {
    let parts: Vec<Value> = vals.iter().map(|l| Value::laurent(l)).collect();
    Value {
        exact: parts
            .iter()
            .map(|v| v.exact.as_str())
            .collect::<Vec<_>>()
            .join("; "),
        approx: parts
            .iter()
            .map(|v| v.approx.as_str())
            .collect::<Vec<_>>()
            .join("; "),
    }
}

fn torus_value(f: &TorusFn) -> Value {
    let body = |g: &dyn Fn(&CycNum) -> String| {
        if f.values.is_empty() {
            return "0".to_string();
        }
        f.values
            .iter()
            .map(|((k, u), v)| format!("[{k},{u}]={}", g(v)))
            .collect::<Vec<_>>()
            .join(", ")
    };
    Value {
        exact: body(&|v| v.to_string()),
        approx: body(&|v| Value::cyc(v).approx),
    }
}

// ---- local coefficient -------------------------------------------------

fn coefficient_closed_form(c: &Case) -> Outcome {
    let lc = c.lc()?;
    same_laurent(&lc.ratio, &lc.closed_form)
}

fn whittaker_values(c: &Case) -> Outcome {
    let n = c.n();
    let lc = c.lc()?;
    let tau = gauss_sum(&c.ctx, &c.eta, PSI, &c.ctx.pi_pow(-n))?;
    let w = c.ctx.root(c.chi.w_pi.pow(n as i64).inv())?;
    let got = [&lc.omega.total[0], &lc.omega.total[1]];
    let want = [Laurent::monomial(&w * &tau, n), c.constant(c.ctx.cyc_one())];
    Ok((
        got[0] == &want[0] && got[1] == &want[1],
        list(&got),
        list(&[&want[0], &want[1]]),
    ))
}

fn shell_vanishing(c: &Case) -> Outcome {
    let n = c.n();
    let lc = c.lc()?;
    let live: Vec<String> = lc
        .omega
        .shells
        .iter()
        .filter(|(_, pair)| !pair[0].is_zero())
        .map(|(r, _)| r.to_string())
        .collect();
    let lo = lc.omega.shells.keys().next().copied().unwrap_or(0);
    let reaches = lo <= -(n + 2);
    Ok((
        live == [(-n).to_string()] && reaches,
        Value::text(format!(
            "nonzero shells [{}] of {}..={}",
            live.join(", "),
            lo,
            -lo
        )),
        Value::text(format!("nonzero shells [{}]", -n)),
    ))
}

fn local_factors(c: &Case) -> Outcome {
    let f = c.factors()?;
    let lc = c.lc()?;
    let monomial = lc.ratio.as_monomial().is_ok();
    let one = c.constant(c.ctx.cyc_one());
    Ok((
        monomial && f.l_factor == one && f.epsilon_factor == lc.ratio,
        list(&[&f.l_factor, &f.epsilon_factor]),
        list(&[&one, &lc.ratio]),
    ))
}

fn induced_basis(c: &Case) -> Outcome {
    let ctx = &c.ctx;
    let space = InducedSpace::new(c.chi.clone());
    let mut rng = c.rng(1);
    let f = [
        InducedVec::basis(ctx, space.clone(), Basis::I2),
        InducedVec::basis(ctx, space, Basis::W0),
    ];
    let id = GroupElem::identity(ctx);
    let w0 = GroupElem::w0(ctx);
    let one = c.constant(ctx.cyc_one());
    if induced_eval(ctx, &f[0], &id)? != one || induced_eval(ctx, &f[1], &w0)? != one {
        return Ok((
            false,
            Value::text("basis values at I2, w0"),
            Value::text("1, 1"),
        ));
    }
    property(c.cases, |_| {
        let t = ctx.pi_pow(rng.gen_range(-2..=2));
        let g = GroupElem::u(ctx, PadicNum::random(&mut rng, ctx.p(), -2..=2, ctx.prec()))
            .mul(&GroupElem::diag(ctx, t)?)
            .mul(&random_k(&mut rng, ctx, 2));
        let j = random_j(&mut rng, ctx, 3);
        let lam = lambda_eval(ctx, &c.eta, &j)?;
        for v in &f {
            let lhs = induced_eval(ctx, v, &g.mul(&j))?;
            let rhs = induced_eval(ctx, v, &g)?.scale(&lam);
            if lhs != rhs {
                return Ok(Some(format!(
                    "f({g:?} j) = {lhs} but f(g) lambda(j) = {rhs}"
                )));
            }
        }
        Ok(None)
    })
}

/// `A(w0) f_I2` evaluated directly at a few points agrees with its resolution
/// in the two-element basis.
fn isotypic_dimension(c: &Case) -> Outcome {
    let ctx = &c.ctx;
    let space = InducedSpace::new(c.chi.clone());
    let mats = c.matrices()?;
    let image = apply_matrix(&mats[0], &InducedVec::basis(ctx, space.clone(), Basis::I2));
    let mut rng = c.rng(2);
    property(4, |_| {
        let g = random_k(&mut rng, ctx, 2)
            .mul(&GroupElem::diag(ctx, ctx.pi_pow(rng.gen_range(-1..=1)))?);
        let direct = intertwine_at(ctx, &space, Weyl::W0, &g, c.depth)?.total[0].clone();
        let resolved = induced_eval(ctx, &image, &g)?;
        Ok((direct != resolved).then(|| format!("at {g:?}: {direct} vs {resolved}")))
    })
}

fn depth_stability(c: &Case) -> Outcome {
    let space = InducedSpace::new(c.chi.clone());
    let reference = &c.lc()?.omega.total;
    let n = c.ctx.n_eta();
    for m in n..c.depth {
        let pv = whittaker_basis(&c.ctx, &space, PSI, m)?;
        if &pv.total != reference {
            return Ok((
                false,
                list(&[&pv.total[0], &pv.total[1]]),
                list(&[&reference[0], &reference[1]]),
            ));
        }
    }
    Ok((
        true,
        Value::text(format!("depths {n}..={} agree", c.depth + 2)),
        list(&[&reference[0], &reference[1]]),
    ))
}

// ---- intertwining and Plancherel ----------------------------------------

fn intertwining_coefficients(c: &Case) -> Outcome {
    let n = c.n();
    let [fwd, back] = c.matrices()?;
    // source index 0 is f_I2, 1 is f_w0; first index is the target
    let got = [&fwd[0][0], &fwd[1][0], &back[0][1], &back[1][1]];
    let zero = Laurent::zero();
    let eps = c.eps()?;
    let a_w0 = c.constant(&eps * &c.ctx.cyc_q_pow(-n));
    let b_i2 = c.constant(eps);
    let want = [&zero, &a_w0, &b_i2, &zero];
    Ok((got == want, list(&got), list(&want)))
}

fn plancherel(c: &Case) -> Outcome {
    let n = c.n();
    let f = c.factors()?;
    let comp = c.constant(c.ctx.cyc_q_pow(-n));
    let mu = c.constant(c.ctx.cyc_q_pow(n));
    let ok = f.composition == comp && f.plancherel == mu && f.mu_from_coefficients == mu;
    Ok((
        ok,
        list(&[&f.composition, &f.plancherel, &f.mu_from_coefficients]),
        list(&[&comp, &mu, &mu]),
    ))
}

fn functional_equation(c: &Case) -> Outcome {
    same_cyc(&c.factors()?.fe_product, &c.eps()?)
}

// ---- Gauss sums ---------------------------------------------------------

fn gauss_sum_modulus(c: &Case) -> Outcome {
    let n = c.n();
    let at = c.ctx.pi_pow(-n);
    let tau = gauss_sum(&c.ctx, &c.eta, PSI, &at)?;
    let tau_dual = gauss_sum(&c.ctx, &c.eta.inverse(), PSI.inverse(), &at)?;
    same_cyc(&(&tau * &tau_dual), &c.ctx.cyc_q_pow(-n))
}

fn coefficient_modulus(c: &Case) -> Outcome {
    let n = c.n();
    let (coeff, _) = c.lc()?.ratio.as_monomial()?;
    let norm = coeff.embed().norm_sqr();
    let want = (c.ctx.q() as f64).powi(n);
    Ok((
        ((norm - want) / want).abs() < 1e-9,
        Value::text(format!("{norm:.12}")),
        Value::text(format!("{want:.12}")),
    ))
}

fn gauss_sum_conductor(c: &Case) -> Outcome {
    let n = c.n();
    let mut live = Vec::new();
    for k in 0..=n + 2 {
        if !gauss_sum(&c.ctx, &c.eta, PSI, &c.ctx.pi_pow(-k))?.is_zero() {
            live.push(k.to_string());
        }
    }
    Ok((
        live == [n.to_string()],
        Value::text(format!("nonzero at p^-k for k in [{}]", live.join(", "))),
        Value::text(format!("nonzero at p^-k for k in [{n}]")),
    ))
}

// ---- Hecke algebra ------------------------------------------------------

fn hecke_op_value(h: &HeckeOp) -> Value {
    Value {
        exact: format!("{} T_I2 + {} T_w0", h.coeff_i2, h.coeff_w0),
        approx: format!(
            "{} T_I2 + {} T_w0",
            Value::cyc(&h.coeff_i2).approx,
            Value::cyc(&h.coeff_w0).approx
        ),
    }
}

fn hecke_basis(c: &Case) -> Outcome {
    let ctx = &c.ctx;
    let t = [
        HeckeOp::basis(ctx, Basis::I2),
        HeckeOp::basis(ctx, Basis::W0),
    ];
    for a in &t {
        for b in &t {
            convolve(ctx, &c.eta, a, b)?;
        }
    }
    let left = convolve(ctx, &c.eta, &t[0], &t[1])?;
    let right = convolve(ctx, &c.eta, &t[1], &t[0])?;
    Ok((
        left == t[1] && right == t[1] && convolve(ctx, &c.eta, &t[0], &t[0])? == t[0],
        hecke_op_value(&left),
        hecke_op_value(&t[1]),
    ))
}

fn hecke_square(c: &Case) -> Outcome {
    let sign = c.sign()?;
    let want = HeckeOp::basis(&c.ctx, Basis::I2).scale(&(&c.eps()? * &c.ctx.cyc_q_pow(c.n())));
    Ok((
        sign.square == want,
        hecke_op_value(&sign.square),
        hecke_op_value(&want),
    ))
}

fn normalized_square(c: &Case) -> Outcome {
    let sign = c.sign()?;
    let ok = sign.normalized_square.is_one() && sign.square.coeff_w0.is_zero();
    Ok((
        ok,
        Value::text(format!(
            "sigma^2 = {}; sigma^2 T_w0*T_w0 = {} T_I2 + {} T_w0",
            sign.sigma_squared, sign.normalized_square, sign.square.coeff_w0
        )),
        Value::text("T_I2"),
    ))
}

fn random_op(rng: &mut ChaCha8Rng, ctx: &FieldContext) -> HeckeOp {
    HeckeOp {
        coeff_i2: ctx.ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3)),
        coeff_w0: CycNum::zeta_pow(ctx.field().clone(), rng.gen_range(0..ctx.order())),
    }
}

fn random_vec(rng: &mut ChaCha8Rng, ctx: &FieldContext) -> WhittakerVec {
    WhittakerVec {
        coeff_i2: CycNum::zeta_pow(ctx.field().clone(), rng.gen_range(0..ctx.order())),
        coeff_w0: ctx.ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3)),
    }
}

fn hecke_associativity(c: &Case) -> Outcome {
    let ctx = &c.ctx;
    let mut rng = c.rng(3);
    property(c.cases.min(20), |_| {
        let (a, b, d) = (
            random_op(&mut rng, ctx),
            random_op(&mut rng, ctx),
            random_op(&mut rng, ctx),
        );
        let l = convolve(ctx, &c.eta, &convolve(ctx, &c.eta, &a, &b)?, &d)?;
        let r = convolve(ctx, &c.eta, &a, &convolve(ctx, &c.eta, &b, &d)?)?;
        Ok((l != r).then(|| format!("{l:?} vs {r:?}")))
    })
}

fn coset_identification(c: &Case) -> Outcome {
    let ctx = &c.ctx;
    let reps = coset_reps_jw0j(ctx);
    for (i, a) in reps.iter().enumerate() {
        for b in &reps[i + 1..] {
            if in_subgroup(ctx, &a.inv().mul(b), Subgroup::J)? {
                return Ok((
                    false,
                    Value::text(format!("{a:?} J = {b:?} J")),
                    Value::text("distinct cosets"),
                ));
            }
        }
    }
    let mut rng = c.rng(4);
    let mut tried = 0;
    property(c.cases, |_| {
        let g = loop {
            tried += 1;
            let g = random_j(&mut rng, ctx, 2)
                .mul(&GroupElem::w0(ctx))
                .mul(&random_j(&mut rng, ctx, 2));
            if in_jw0j(ctx, &g)? {
                break g;
            }
        };
        let hits = reps
            .iter()
            .filter(|r| in_subgroup(ctx, &r.inv().mul(&g), Subgroup::J).unwrap_or(false))
            .count();
        Ok((hits != 1).then(|| format!("{g:?} lies in {hits} cosets")))
    })
}

// ---- Gelfand-Graev ------------------------------------------------------

fn whittaker_vec_value(v: &WhittakerVec) -> Value {
    Value {
        exact: format!("{} phi_I2 + {} phi_w0", v.coeff_i2, v.coeff_w0),
        approx: format!(
            "{} phi_I2 + {} phi_w0",
            Value::cyc(&v.coeff_i2).approx,
            Value::cyc(&v.coeff_w0).approx
        ),
    }
}

fn whittaker_hecke_action(c: &Case) -> Outcome {
    let ctx = &c.ctx;
    let sign = c.sign()?;
    let want_i2 = WhittakerVec::basis(ctx, Basis::W0).scale(&c.eps()?);
    let want_w0 = WhittakerVec::basis(ctx, Basis::I2).scale(&ctx.cyc_q_pow(c.n()));
    let join = |a: Value, b: Value| Value {
        exact: format!("{}; {}", a.exact, b.exact),
        approx: format!("{}; {}", a.approx, b.approx),
    };
    Ok((
        sign.on_i2 == want_i2 && sign.on_w0 == want_w0,
        join(
            whittaker_vec_value(&sign.on_i2),
            whittaker_vec_value(&sign.on_w0),
        ),
        join(whittaker_vec_value(&want_i2), whittaker_vec_value(&want_w0)),
    ))
}

fn sign_action(c: &Case) -> Outcome {
    let s = c.sign()?;
    let show = |v: &[sl2cover::hecke::QuadExt; 2]| {
        Value::text(format!(
            "({} + {} s) phi_I2 + ({} + {} s) phi_w0",
            v[0].a, v[0].b, v[1].a, v[1].b
        ))
    };
    Ok((s.passed, show(&s.image), show(&s.expected)))
}

fn s_delta(c: &Case) -> Outcome {
    let got = &c.s_delta()?[0];
    let want = torus_characteristic(&c.ctx, &c.eta)?;
    Ok((got == &want, torus_value(got), torus_value(&want)))
}

fn s_delta_second(c: &Case) -> Outcome {
    let got = &c.s_delta()?[1];
    Ok((got.values.is_empty(), torus_value(got), Value::text("0")))
}

fn random_group_elem(rng: &mut ChaCha8Rng, ctx: &FieldContext) -> Result<GroupElem> {
    let x = PadicNum::random(rng, ctx.p(), -3..=2, ctx.prec());
    let t = ctx.pi_pow(rng.gen_range(-1..=1));
    Ok(GroupElem::u(ctx, x)
        .mul(&GroupElem::diag(ctx, t)?)
        .mul(&random_k(rng, ctx, 2)))
}

fn support_confinement(c: &Case) -> Outcome {
    let ctx = &c.ctx;
    let mut rng = c.rng(5);
    let tw = HeckeOp::basis(ctx, Basis::W0);
    let image = act(ctx, &c.eta, PSI, &tw, &random_vec(&mut rng, ctx))?;
    let both = WhittakerVec {
        coeff_i2: ctx.cyc_one(),
        coeff_w0: ctx.cyc_one(),
    };
    property(30, |_| {
        let g = loop {
            let g = random_group_elem(&mut rng, ctx)?;
            if whittaker_eval(ctx, &c.eta, PSI, &both, &g)?.is_zero() {
                break g;
            }
        };
        let v = whittaker_eval(ctx, &c.eta, PSI, &image, &g)?;
        Ok((!v.is_zero()).then(|| format!("value {v} at {g:?}")))
    })
}

fn central_sign(c: &Case) -> Outcome {
    let ctx = &c.ctx;
    let eps = c.eps()?;
    let minus = GroupElem::identity(ctx).neg();
    let mut rng = c.rng(6);
    property(c.cases, |_| {
        let v = random_vec(&mut rng, ctx);
        let g = random_group_elem(&mut rng, ctx)?;
        let a = whittaker_eval(ctx, &c.eta, PSI, &v, &g.mul(&minus))?;
        let b = &whittaker_eval(ctx, &c.eta, PSI, &v, &g)? * &eps;
        Ok((a != b).then(|| format!("{a} vs {b} at {g:?}")))
    })
}

fn module_law(c: &Case) -> Outcome {
    let ctx = &c.ctx;
    let mut rng = c.rng(7);
    property(c.cases.min(20), |_| {
        let (a, b) = (random_op(&mut rng, ctx), random_op(&mut rng, ctx));
        let v = random_vec(&mut rng, ctx);
        let l = act(ctx, &c.eta, PSI, &convolve(ctx, &c.eta, &a, &b)?, &v)?;
        let r = act(ctx, &c.eta, PSI, &a, &act(ctx, &c.eta, PSI, &b, &v)?)?;
        Ok((l != r).then(|| format!("{l:?} vs {r:?}")))
    })
}

fn bruhat(c: &Case) -> Outcome {
    let ctx = &c.ctx;
    let mut rng = c.rng(8);
    property(c.cases, |_| {
        let x = PadicNum::random(&mut rng, ctx.p(), -3..=3, ctx.prec());
        let lhs = GroupElem::ubar(ctx, x);
        let rhs = GroupElem::diag(ctx, x.inv()?)?
            .mul(&GroupElem::u(ctx, x))
            .mul(&GroupElem::w0(ctx))
            .mul(&GroupElem::u(ctx, x.inv()?));
        Ok((!lhs.agrees_with(&rhs)).then(|| format!("x = {x}: {lhs:?} vs {rhs:?}")))
    })
}

// ---- structural invariants ---------------------------------------------

fn cover_subgroup(c: &Case) -> Outcome {
    let ctx = &c.ctx;
    let n = c.n();
    let outside = GroupElem::ubar(ctx, ctx.pi_pow(n - 1));
    if in_subgroup(ctx, &outside, Subgroup::J)? {
        return Ok((
            false,
            Value::text(format!("{outside:?} in J")),
            Value::text("not in J"),
        ));
    }
    let mut rng = c.rng(9);
    property(c.cases, |_| {
        let (a, b) = (random_j(&mut rng, ctx, 3), random_j(&mut rng, ctx, 3));
        let ok =
            in_subgroup(ctx, &a.mul(&b), Subgroup::J)? && in_subgroup(ctx, &a.inv(), Subgroup::J)?;
        Ok((!ok).then(|| format!("{a:?}, {b:?}")))
    })
}

fn cover_character(c: &Case) -> Outcome {
    let ctx = &c.ctx;
    let mut rng = c.rng(10);
    property(c.cases, |_| {
        let (a, b) = (random_j(&mut rng, ctx, 3), random_j(&mut rng, ctx, 3));
        let lhs = lambda_eval(ctx, &c.eta, &a.mul(&b))?;
        let rhs = &lambda_eval(ctx, &c.eta, &a)? * &lambda_eval(ctx, &c.eta, &b)?;
        Ok((lhs != rhs).then(|| format!("{a:?}, {b:?}: {lhs} vs {rhs}")))
    })
}

fn iwahori(c: &Case) -> Outcome {
    let ctx = &c.ctx;
    let mut rng = c.rng(11);
    property(c.cases, |_| {
        let j = random_j(&mut rng, ctx, 4);
        let (y, t, x) = iwahori_factor(ctx, &j)?;
        let ok = y.valuation_at_least(ctx.n_eta() as i32)?
            && x.valuation_at_least(0)?
            && t.valuation() == 0;
        let back = GroupElem::ubar(ctx, y)
            .mul(&t.to_elem(ctx)?)
            .mul(&GroupElem::u(ctx, x));
        Ok((!ok || !back.agrees_with(&j)).then(|| format!("{j:?}")))
    })
}

fn unipotent_triviality(c: &Case) -> Outcome {
    let ctx = &c.ctx;
    let n = c.n();
    let mut rng = c.rng(12);
    property(c.cases, |_| {
        let x = PadicNum::random(&mut rng, ctx.p(), 0..=3, ctx.prec());
        let y = PadicNum::random(&mut rng, ctx.p(), n..=n + 3, ctx.prec());
        let a = lambda_eval(ctx, &c.eta, &GroupElem::u(ctx, x))?;
        let b = lambda_eval(ctx, &c.eta, &GroupElem::ubar(ctx, y))?;
        Ok((!a.is_one() || !b.is_one()).then(|| format!("x = {x}, y = {y}")))
    })
}

fn cell_round_trip(c: &Case) -> Outcome {
    let ctx = &c.ctx;
    let mut rng = c.rng(13);
    property(c.cases, |_| {
        let g = random_group_elem(&mut rng, ctx)?;
        let cell = cell_decompose(ctx, &g)?;
        let back = cell.reassemble(ctx)?;
        let ok = match (&cell, back) {
            (CellDecomp::Outside, None) => true,
            (_, Some(h)) => h.agrees_with(&g),
            _ => false,
        };
        Ok((!ok).then(|| format!("{g:?}")))
    })
}

/// Elements of `K` together with, when `n >= 2`, a lower-left entry of
/// intermediate valuation.
fn k_samples(c: &Case, rng: &mut ChaCha8Rng) -> Vec<GroupElem> {
    let ctx = &c.ctx;
    let mut out: Vec<GroupElem> = (0..c.cases).map(|_| random_k(rng, ctx, 3)).collect();
    for k in 1..c.n() {
        out.push(GroupElem::ubar(ctx, ctx.pi_pow(k)));
    }
    out
}

fn k_partition(c: &Case) -> Outcome {
    let ctx = &c.ctx;
    let mut rng = c.rng(14);
    let samples = k_samples(c, &mut rng);
    let total = samples.len();
    property(total, |i| {
        let g = &samples[i];
        let j = in_subgroup(ctx, g, Subgroup::J)?;
        let w = in_jw0j(ctx, g)?;
        Ok((j == w).then(|| format!("{g:?} lies in neither J nor J w0 J")))
    })
}

fn k_three_way(c: &Case) -> Outcome {
    let ctx = &c.ctx;
    let n = c.n();
    let mut rng = c.rng(14);
    let samples = k_samples(c, &mut rng);
    let total = samples.len();
    property(total, |i| {
        let g = &samples[i];
        let middle = !g.c.is_unit() && !g.c.valuation_at_least(n)?;
        let hits = [in_subgroup(ctx, g, Subgroup::J)?, in_jw0j(ctx, g)?, middle]
            .iter()
            .filter(|&&b| b)
            .count();
        Ok((hits != 1).then(|| format!("{g:?} in {hits} parts")))
    })
}

fn cyclotomic_axioms(c: &Case) -> Outcome {
    let ctx = &c.ctx;
    let mut rng = c.rng(15);
    let rand_cyc = |rng: &mut ChaCha8Rng| {
        let terms: Vec<(u64, num_rational::BigRational)> = (0..3)
            .map(|_| {
                (
                    rng.gen_range(0..ctx.order()),
                    num_rational::BigRational::new(
                        rng.gen_range(-5..=5).into(),
                        rng.gen_range(1..=4).into(),
                    ),
                )
            })
            .collect();
        CycNum::from_terms(ctx.field().clone(), terms)
    };
    property(c.cases, |_| {
        let (a, b, d) = (rand_cyc(&mut rng), rand_cyc(&mut rng), rand_cyc(&mut rng));
        let assoc = &(&a * &b) * &d == &a * &(&b * &d);
        let distrib = &a * &(&b + &d) == &(&a * &b) + &(&a * &d);
        let comm = &a * &b == &b * &a;
        let unit = CycNum::zeta_pow(ctx.field().clone(), rng.gen_range(0..ctx.order()))
            .scale(&ctx.q_pow(1));
        let inverse = (&unit * &unit.inverse()?).is_one();
        Ok((!(assoc && distrib && comm && inverse)).then(|| format!("{a}, {b}, {d}")))
    })
}

fn padic_ultrametric(c: &Case) -> Outcome {
    let ctx = &c.ctx;
    let mut rng = c.rng(16);
    property(c.cases, |_| {
        let x = PadicNum::random(&mut rng, ctx.p(), -3..=3, ctx.prec());
        let y = PadicNum::random(&mut rng, ctx.p(), -3..=3, ctx.prec());
        let (vx, vy) = (
            x.valuation().unwrap_or(i32::MAX),
            y.valuation().unwrap_or(i32::MAX),
        );
        let s = x.add(&y);
        let ok = s.valuation_at_least(vx.min(vy))?
            && (vx == vy || s.valuation() == Some(vx.min(vy)))
            && x.mul(&y).valuation() == Some(vx + vy);
        Ok((!ok).then(|| format!("x = {x}, y = {y}")))
    })
}

fn character_laws(c: &Case) -> Outcome {
    let ctx = &c.ctx;
    let mut rng = c.rng(17);
    property(c.cases, |_| {
        let x = PadicNum::random_unit(&mut rng, ctx.p(), ctx.prec());
        let y = PadicNum::random_unit(&mut rng, ctx.p(), ctx.prec());
        let mult = c.eta.eval(&x.mul(&y))? == c.eta.eval(&x)?.mul(c.eta.eval(&y)?);
        let quadratic = c.eta.eval(&x)?.pow(2).is_one();
        let a = PadicNum::random(&mut rng, ctx.p(), -3..=1, ctx.prec());
        let b = PadicNum::random(&mut rng, ctx.p(), -3..=1, ctx.prec());
        let additive = PSI.eval(&a.add(&b))? == PSI.eval(&a)?.mul(PSI.eval(&b)?);
        let ext = c.chi.eval(&a.mul(&x))? == c.chi.eval(&a)?.mul(c.eta.eval(&x)?);
        Ok((!(mult && quadratic && additive && ext))
            .then(|| format!("x = {x}, y = {y}, a = {a}, b = {b}")))
    })
}

pub static REGISTRY: &[CheckSpec] = &[
    CheckSpec {
        name: "theorem-A",
        suite: Suite::LocalCoefficient,
        anchor: "local coefficient equals eta~(-p^n) tau(eta, psi, p^-n) q^n X^n",
        covers: &[
            "local-coefficient",
            "local-coefficient-relation",
            "intertwining-integral",
        ],
        run: coefficient_closed_form,
    },
    CheckSpec {
        name: "whittaker-values",
        suite: Suite::LocalCoefficient,
        anchor: "Whittaker functional on the basis of the induced space",
        covers: &["whittaker-functional", "gauss-sum"],
        run: whittaker_values,
    },
    CheckSpec {
        name: "shell-vanishing",
        suite: Suite::LocalCoefficient,
        anchor: "only the shell r = -n contributes",
        covers: &["shell-vanishing"],
        run: shell_vanishing,
    },
    CheckSpec {
        name: "local-factors",
        suite: Suite::LocalCoefficient,
        anchor: "L-factor 1 and epsilon factor equal to the local coefficient",
        covers: &["local-factors"],
        run: local_factors,
    },
    CheckSpec {
        name: "induced-basis",
        suite: Suite::LocalCoefficient,
        anchor: "basis functions on B J and B w0 J are lambda-isotypic",
        covers: &["induced-basis", "iwasawa-decomposition"],
        run: induced_basis,
    },
    CheckSpec {
        name: "isotypic-dimension",
        suite: Suite::LocalCoefficient,
        anchor: "lambda-isotypic part is spanned by the two basis functions",
        covers: &["isotypic-dimension"],
        run: isotypic_dimension,
    },
    CheckSpec {
        name: "pv-depth-stability",
        suite: Suite::LocalCoefficient,
        anchor: "principal values agree at every truncation depth",
        covers: &["measure-normalization"],
        run: depth_stability,
    },
    CheckSpec {
        name: "intertwining-coefficients",
        suite: Suite::Plancherel,
        anchor: "A(w0) f_I2 = eps q^-n f'_w0, A(w0^-1) f_w0 = eps f'_I2",
        covers: &["intertwining-coefficients", "intertwining-integral"],
        run: intertwining_coefficients,
    },
    CheckSpec {
        name: "plancherel",
        suite: Suite::Plancherel,
        anchor: "intertwiner composition q^-n, Plancherel constant q^n",
        covers: &["plancherel"],
        run: plancherel,
    },
    CheckSpec {
        name: "functional-equation",
        suite: Suite::FunctionalEquation,
        anchor: "C(s) C(1-s) = eps",
        covers: &["functional-equation"],
        run: functional_equation,
    },
    CheckSpec {
        name: "gauss-sum-modulus",
        suite: Suite::GaussSum,
        anchor: "tau(eta, psi, p^-n) tau(eta^-1, psi^-1, p^-n) = q^-n",
        covers: &["gauss-sum-modulus", "gauss-sum"],
        run: gauss_sum_modulus,
    },
    CheckSpec {
        name: "local-coefficient-modulus",
        suite: Suite::GaussSum,
        anchor: "|C|^2 = q^n in the complex embedding",
        covers: &["gauss-sum-modulus"],
        run: coefficient_modulus,
    },
    CheckSpec {
        name: "gauss-sum-conductor",
        suite: Suite::GaussSum,
        anchor: "tau(eta, psi, p^-k) vanishes unless k = n",
        covers: &["gauss-sum"],
        run: gauss_sum_conductor,
    },
    CheckSpec {
        name: "hecke-basis",
        suite: Suite::HeckeAlgebra,
        anchor: "T_I2 and T_w0 span a closed convolution algebra with unit T_I2",
        covers: &[
            "hecke-basis",
            "hecke-convolution",
            "hecke-operators",
            "measure-normalization",
        ],
        run: hecke_basis,
    },
    CheckSpec {
        name: "hecke-square",
        suite: Suite::HeckeAlgebra,
        anchor: "T_w0 * T_w0 = eps q^n T_I2",
        covers: &["hecke-basis", "hecke-convolution"],
        run: hecke_square,
    },
    CheckSpec {
        name: "normalized-square",
        suite: Suite::HeckeAlgebra,
        anchor: "normalized T_w0 squares to T_I2 (radical-free form)",
        covers: &["normalized-operators", "normalized-square"],
        run: normalized_square,
    },
    CheckSpec {
        name: "hecke-associativity",
        suite: Suite::HeckeAlgebra,
        anchor: "convolution is associative",
        covers: &["hecke-convolution"],
        run: hecke_associativity,
    },
    CheckSpec {
        name: "coset-identification",
        suite: Suite::HeckeAlgebra,
        anchor: "u(t) w0, t mod p^n, are the right J-cosets of J w0 J",
        covers: &["coset-identification"],
        run: coset_identification,
    },
    CheckSpec {
        name: "whittaker-hecke-action",
        suite: Suite::GelfandGraev,
        anchor: "T_w0 phi_I2 = eps phi_w0, T_w0 phi_w0 = q^n phi_I2",
        covers: &["whittaker-functions", "gelfand-graev-space"],
        run: whittaker_hecke_action,
    },
    CheckSpec {
        name: "sign-action",
        suite: Suite::GelfandGraev,
        anchor: "normalized T_w0 acts by -1 on the generator",
        covers: &["sign-action", "gelfand-graev-module"],
        run: sign_action,
    },
    CheckSpec {
        name: "s-delta",
        suite: Suite::GelfandGraev,
        anchor: "torus projection of phi_I2 is ch on T(o)",
        covers: &[
            "torus-projection",
            "torus-characteristic",
            "whittaker-hecke-projection",
        ],
        run: s_delta,
    },
    CheckSpec {
        name: "s-delta-second",
        suite: Suite::GelfandGraev,
        anchor: "torus projection of phi_w0 vanishes",
        covers: &["whittaker-hecke-projection"],
        run: s_delta_second,
    },
    CheckSpec {
        name: "support-confinement",
        suite: Suite::GelfandGraev,
        anchor: "T_w0 phi vanishes off U J and U w0 J",
        covers: &["gelfand-graev-space"],
        run: support_confinement,
    },
    CheckSpec {
        name: "central-sign",
        suite: Suite::GelfandGraev,
        anchor: "-I2 acts on phi by eps",
        covers: &["whittaker-functions"],
        run: central_sign,
    },
    CheckSpec {
        name: "module-law",
        suite: Suite::GelfandGraev,
        anchor: "(A * B) phi = A (B phi)",
        covers: &["gelfand-graev-module"],
        run: module_law,
    },
    CheckSpec {
        name: "bruhat-decomposition",
        suite: Suite::GelfandGraev,
        anchor: "ubar(x) = diag(x^-1, x) u(x) w0 u(x^-1)",
        covers: &["bruhat-decomposition"],
        run: bruhat,
    },
    CheckSpec {
        name: "cover-subgroup",
        suite: Suite::Invariants,
        anchor: "J is a group with lower-left entries in p^n",
        covers: &["cover-subgroup"],
        run: cover_subgroup,
    },
    CheckSpec {
        name: "cover-character",
        suite: Suite::Invariants,
        anchor: "lambda(j) = eta(j_11) is a character of J",
        covers: &["cover-character"],
        run: cover_character,
    },
    CheckSpec {
        name: "iwahori-factorization",
        suite: Suite::Invariants,
        anchor: "J = (J ∩ Ubar) T(o) (J ∩ U)",
        covers: &["iwahori-factorization"],
        run: iwahori,
    },
    CheckSpec {
        name: "unipotent-triviality",
        suite: Suite::Invariants,
        anchor: "lambda is trivial on J ∩ U and J ∩ Ubar",
        covers: &["unipotent-triviality"],
        run: unipotent_triviality,
    },
    CheckSpec {
        name: "cell-round-trip",
        suite: Suite::Invariants,
        anchor: "cell decomposition reassembles",
        covers: &["iwasawa-decomposition"],
        run: cell_round_trip,
    },
    CheckSpec {
        name: "k-partition",
        suite: Suite::Invariants,
        anchor: "K = J ∪ J w0 J",
        covers: &["coset-identification"],
        run: k_partition,
    },
    CheckSpec {
        name: "k-three-way-partition",
        suite: Suite::Invariants,
        anchor: "K = J ∪ J w0 J ∪ {0 < v(c) < n}",
        covers: &["coset-identification"],
        run: k_three_way,
    },
    CheckSpec {
        name: "cyclotomic-ring-axioms",
        suite: Suite::Invariants,
        anchor: "Q(zeta_N) field laws",
        covers: &[],
        run: cyclotomic_axioms,
    },
    CheckSpec {
        name: "padic-ultrametric",
        suite: Suite::Invariants,
        anchor: "v(x + y) >= min(v(x), v(y)), v(xy) = v(x) + v(y)",
        covers: &[],
        run: padic_ultrametric,
    },
    CheckSpec {
        name: "character-laws",
        suite: Suite::Invariants,
        anchor: "eta, eta~ multiplicative and psi additive",
        covers: &[],
        run: character_laws,
    },
];

/// Every statement the registry must exercise.
pub static MANIFEST: &[&str] = &[
    "cover-subgroup",
    "cover-character",
    "iwahori-factorization",
    "unipotent-triviality",
    "hecke-convolution",
    "measure-normalization",
    "induced-basis",
    "hecke-operators",
    "normalized-operators",
    "hecke-basis",
    "isotypic-dimension",
    "intertwining-integral",
    "iwasawa-decomposition",
    "intertwining-coefficients",
    "plancherel",
    "whittaker-functional",
    "local-coefficient-relation",
    "gauss-sum",
    "shell-vanishing",
    "local-coefficient",
    "local-factors",
    "functional-equation",
    "gauss-sum-modulus",
    "gelfand-graev-space",
    "whittaker-functions",
    "torus-projection",
    "torus-characteristic",
    "whittaker-hecke-projection",
    "sign-action",
    "bruhat-decomposition",
    "coset-identification",
    "normalized-square",
    "gelfand-graev-module",
];

/// Manifest entries no registered check covers.
pub fn uncovered() -> Vec<&'static str> {
    MANIFEST
        .iter()
        .copied()
        .filter(|m| !REGISTRY.iter().any(|c| c.covers.contains(m)))
        .collect()
}
