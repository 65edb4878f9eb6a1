use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sl2cover::character::{ramified_quadratic_chars, AddChar, MultCharacter};
use sl2cover::hecke::{
    act, convolve, hecke_eval, s_delta_basis, s_delta_project, torus_characteristic,
    verify_sign_action, whittaker_eval, HeckeOp, WhittakerVec,
};
use sl2cover::integrate::{gauss_sum, Basis};
use sl2cover::sl2::{lambda_eval, random_j, random_k, GroupElem};
use sl2cover::{CycNum, FieldContext, PadicNum};

const PSI: AddChar = AddChar::STANDARD;

fn configs() -> Vec<(FieldContext, MultCharacter)> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5, 7] {
        for eta in ramified_quadratic_chars(p) {
            let n = eta.level();
            out.push((FieldContext::new(p, n, n + 2).unwrap(), eta));
        }
    }
    out
}

fn eps(ctx: &FieldContext, eta: &MultCharacter) -> CycNum {
    ctx.root(eta.at_minus_one()).unwrap()
}

fn random_vec(rng: &mut ChaCha8Rng, ctx: &FieldContext) -> WhittakerVec {
    WhittakerVec {
        coeff_i2: ctx.cyc_int(rng.gen_range(-5..=5)),
        coeff_w0: ctx.ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4)),
    }
}

fn random_op(rng: &mut ChaCha8Rng, ctx: &FieldContext) -> HeckeOp {
    let z = CycNum::zeta_pow(ctx.field().clone(), rng.gen_range(0..ctx.order()));
    HeckeOp {
        coeff_i2: ctx.cyc_int(rng.gen_range(-3..=3)),
        coeff_w0: z,
    }
}

#[test]
fn hecke_values_on_generators() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (ctx, eta) in configs() {
        let t_i2 = HeckeOp::basis(&ctx, Basis::I2);
        let t_w0 = HeckeOp::basis(&ctx, Basis::W0);
        let id = GroupElem::identity(&ctx);
        let w0 = GroupElem::w0(&ctx);
        assert!(hecke_eval(&ctx, &eta, &t_i2, &id).unwrap().is_one());
        assert!(hecke_eval(&ctx, &eta, &t_w0, &id).unwrap().is_zero());
        assert!(hecke_eval(&ctx, &eta, &t_w0, &w0).unwrap().is_one());
        for _ in 0..10 {
            let j = random_j(&mut rng, &ctx, 4);
            let lam = lambda_eval(&ctx, &eta, &j).unwrap();
            assert_eq!(
                hecke_eval(&ctx, &eta, &t_i2, &j).unwrap(),
                lam.inverse().unwrap()
            );
        }
    }
}

// On J w0 J the value of T_w0 is eta(c)^-1, from g = u(a/c) w0 [[c, d], [0, 1/c]].
#[test]
fn t_w0_matches_lower_left_entry() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (ctx, eta) in configs() {
        let t_w0 = HeckeOp::basis(&ctx, Basis::W0);
        let mut seen = 0;
        while seen < 15 {
            let g = random_k(&mut rng, &ctx, 3);
            if !g.c.is_unit() {
                continue;
            }
            seen += 1;
            let expect = ctx.root(eta.eval(&g.c).unwrap().inv()).unwrap();
            assert_eq!(hecke_eval(&ctx, &eta, &t_w0, &g).unwrap(), expect);
        }
    }
}

#[test]
fn hecke_operators_are_biequivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (ctx, eta) in configs() {
        for _ in 0..10 {
            let t = random_op(&mut rng, &ctx);
            let g = random_k(&mut rng, &ctx, 2);
            let (h, k) = (random_j(&mut rng, &ctx, 3), random_j(&mut rng, &ctx, 3));
            let lh = lambda_eval(&ctx, &eta, &h).unwrap();
            let lk = lambda_eval(&ctx, &eta, &k).unwrap();
            let lhs = hecke_eval(&ctx, &eta, &t, &h.mul(&g).mul(&k)).unwrap();
            let rhs = (&hecke_eval(&ctx, &eta, &t, &g).unwrap() * &(&lh * &lk).inverse().unwrap())
                .clone();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn structure_constants() {
    for (ctx, eta) in configs() {
        let n = ctx.n_eta() as i32;
        let t_i2 = HeckeOp::basis(&ctx, Basis::I2);
        let t_w0 = HeckeOp::basis(&ctx, Basis::W0);
        assert_eq!(convolve(&ctx, &eta, &t_i2, &t_i2).unwrap(), t_i2);
        assert_eq!(convolve(&ctx, &eta, &t_i2, &t_w0).unwrap(), t_w0);
        assert_eq!(convolve(&ctx, &eta, &t_w0, &t_i2).unwrap(), t_w0);
        let sq = convolve(&ctx, &eta, &t_w0, &t_w0).unwrap();
        assert_eq!(sq, t_i2.scale(&(&eps(&ctx, &eta) * &ctx.cyc_q_pow(n))));
    }
}

#[test]
fn convolution_is_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (ctx, eta) in configs().into_iter().take(4) {
        for _ in 0..4 {
            let (a, b, c) = (
                random_op(&mut rng, &ctx),
                random_op(&mut rng, &ctx),
                random_op(&mut rng, &ctx),
            );
            let left = convolve(&ctx, &eta, &convolve(&ctx, &eta, &a, &b).unwrap(), &c).unwrap();
            let right = convolve(&ctx, &eta, &a, &convolve(&ctx, &eta, &b, &c).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }
}

/// Membership read off the bottom row: `U J` needs `v(c) >= n`, `d` a unit;
/// `U w0 J` needs `c` a unit, `d` integral.
fn whittaker_oracle(
    ctx: &FieldContext,
    eta: &MultCharacter,
    v: &WhittakerVec,
    g: &GroupElem,
) -> CycNum {
    let n = ctx.n_eta() as i32;
    let root = |r| ctx.root(r).unwrap();
    if g.c.valuation_at_least(n).unwrap() && g.d.is_unit() {
        let x = g.b.div(&g.d).unwrap();
        return &v.coeff_i2
            * &(&root(PSI.eval(&x).unwrap()) * &root(eta.eval(&g.d).unwrap().inv()));
    }
    if g.c.is_unit() && g.d.valuation_at_least(0).unwrap() {
        let x = g.a.div(&g.c).unwrap();
        return &v.coeff_w0 * &(&root(PSI.eval(&x).unwrap()) * &root(eta.eval(&g.c).unwrap()));
    }
    ctx.cyc_zero()
}

fn random_group_elem(rng: &mut ChaCha8Rng, ctx: &FieldContext) -> GroupElem {
    let x = PadicNum::random(rng, ctx.p(), -3..=2, ctx.prec());
    let t = ctx.pi_pow(rng.gen_range(-1..=1));
    GroupElem::u(ctx, x)
        .mul(&GroupElem::diag(ctx, t).unwrap())
        .mul(&random_k(rng, ctx, 2))
}

#[test]
fn whittaker_values_match_bottom_row_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (ctx, eta) in configs() {
        for _ in 0..40 {
            let v = random_vec(&mut rng, &ctx);
            let g = random_group_elem(&mut rng, &ctx);
            assert_eq!(
                whittaker_eval(&ctx, &eta, PSI, &v, &g).unwrap(),
                whittaker_oracle(&ctx, &eta, &v, &g),
                "{g:?}"
            );
        }
    }
}

#[test]
fn whittaker_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (ctx, eta) in configs() {
        let phi_i2 = WhittakerVec::basis(&ctx, Basis::I2);
        let phi_w0 = WhittakerVec::basis(&ctx, Basis::W0);
        let w0 = GroupElem::w0(&ctx);
        assert!(whittaker_eval(&ctx, &eta, PSI, &phi_i2, &w0)
            .unwrap()
            .is_zero());
        for _ in 0..8 {
            let x = PadicNum::random(&mut rng, ctx.p(), -3..=1, ctx.prec());
            let j = random_j(&mut rng, &ctx, 3);
            let g = GroupElem::u(&ctx, x).mul(&j);
            let expect =
                &ctx.root(PSI.eval(&x).unwrap()).unwrap() * &lambda_eval(&ctx, &eta, &j).unwrap();
            assert_eq!(
                whittaker_eval(&ctx, &eta, PSI, &phi_i2, &g).unwrap(),
                expect
            );

            let y = PadicNum::random(&mut rng, ctx.p(), 0..=2, ctx.prec());
            let g = GroupElem::u(&ctx, y).mul(&w0);
            assert!(whittaker_eval(&ctx, &eta, PSI, &phi_w0, &g)
                .unwrap()
                .is_one());

            let unit = PadicNum::random_unit(&mut rng, ctx.p(), ctx.prec());
            let g = GroupElem::ubar(&ctx, unit.neg()).neg();
            assert!(whittaker_eval(&ctx, &eta, PSI, &phi_i2, &g)
                .unwrap()
                .is_zero());
        }
    }
}

#[test]
fn whittaker_equivariance_and_central_sign() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (ctx, eta) in configs() {
        let minus = GroupElem::identity(&ctx).neg();
        for _ in 0..15 {
            let v = random_vec(&mut rng, &ctx);
            let g = random_group_elem(&mut rng, &ctx);
            let x = PadicNum::random(&mut rng, ctx.p(), -2..=2, ctx.prec());
            let j = random_j(&mut rng, &ctx, 3);
            let base = whittaker_eval(&ctx, &eta, PSI, &v, &g).unwrap();
            let moved = GroupElem::u(&ctx, x).mul(&g).mul(&j);
            let expect = &(&base * &ctx.root(PSI.eval(&x).unwrap()).unwrap())
                * &lambda_eval(&ctx, &eta, &j).unwrap();
            assert_eq!(whittaker_eval(&ctx, &eta, PSI, &v, &moved).unwrap(), expect);
            assert_eq!(
                whittaker_eval(&ctx, &eta, PSI, &v, &g.mul(&minus)).unwrap(),
                &base * &eps(&ctx, &eta)
            );
        }
    }
}

#[test]
fn action_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (ctx, eta) in configs() {
        let n = ctx.n_eta() as i32;
        let e = eps(&ctx, &eta);
        let t_i2 = HeckeOp::basis(&ctx, Basis::I2);
        let t_w0 = HeckeOp::basis(&ctx, Basis::W0);
        let phi_i2 = WhittakerVec::basis(&ctx, Basis::I2);
        let phi_w0 = WhittakerVec::basis(&ctx, Basis::W0);
        assert_eq!(
            act(&ctx, &eta, PSI, &t_w0, &phi_i2).unwrap(),
            phi_w0.scale(&e)
        );
        assert_eq!(
            act(&ctx, &eta, PSI, &t_w0, &phi_w0).unwrap(),
            phi_i2.scale(&ctx.cyc_q_pow(n))
        );
        for _ in 0..3 {
            let v = random_vec(&mut rng, &ctx);
            assert_eq!(act(&ctx, &eta, PSI, &t_i2, &v).unwrap(), v);
            let twice = act(
                &ctx,
                &eta,
                PSI,
                &t_w0,
                &act(&ctx, &eta, PSI, &t_w0, &v).unwrap(),
            )
            .unwrap();
            assert_eq!(twice, v.scale(&(&e * &ctx.cyc_q_pow(n))));
            let (a, b) = (random_op(&mut rng, &ctx), random_op(&mut rng, &ctx));
            let lhs = act(&ctx, &eta, PSI, &convolve(&ctx, &eta, &a, &b).unwrap(), &v).unwrap();
            let rhs = act(&ctx, &eta, PSI, &a, &act(&ctx, &eta, PSI, &b, &v).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn action_stays_on_the_two_cells() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let t_w0 = |ctx: &FieldContext| HeckeOp::basis(ctx, Basis::W0);
    for (ctx, eta) in configs() {
        let v = random_vec(&mut rng, &ctx);
        let image = act(&ctx, &eta, PSI, &t_w0(&ctx), &v).unwrap();
        let mut outside = 0;
        while outside < 30 {
            let g = random_group_elem(&mut rng, &ctx);
            let probe =
                WhittakerVec::basis(&ctx, Basis::I2).add(&WhittakerVec::basis(&ctx, Basis::W0));
            if !whittaker_oracle(&ctx, &eta, &probe, &g).is_zero() {
                continue;
            }
            outside += 1;
            assert!(whittaker_eval(&ctx, &eta, PSI, &image, &g)
                .unwrap()
                .is_zero());
        }
    }
}

#[test]
fn sign_action_holds() {
    for (ctx, eta) in configs() {
        let s = verify_sign_action(&ctx, &eta, PSI).unwrap();
        assert!(s.passed, "{s:?}");
        assert!(s.normalized_square.is_one());
    }
}

#[test]
fn torus_projection_of_spherical_vector() {
    for (ctx, eta) in configs() {
        let phi_i2 = WhittakerVec::basis(&ctx, Basis::I2);
        let got = s_delta_project(&ctx, &eta, PSI, &phi_i2, 3, ctx.n_eta() + 2).unwrap();
        assert_eq!(got, torus_characteristic(&ctx, &eta).unwrap());
    }
}

// Hand computation: t ubar(x) lies in U w0 J only for v(x) = k <= 0, where
// the integrand is psi(a^2 / x) eta(x / a); the unit integral is a Gauss sum
// that survives only at k = -n, giving q^(2n) eta(u) tau(eta, psi^-1, p^-n).
#[test]
fn torus_projection_of_second_vector() {
    for (ctx, eta) in configs() {
        let n = ctx.n_eta() as i32;
        let [_, got] = s_delta_basis(&ctx, &eta, PSI, 3, ctx.n_eta() + 2).unwrap();
        let tau = gauss_sum(&ctx, &eta, PSI.inverse(), &ctx.pi_pow(-n)).unwrap();
        let p = ctx.p();
        for k in -3..=3 {
            for u in (1..p.pow(n as u32)).filter(|u| u % p != 0) {
                let value = got.get(k, u);
                if k == -n {
                    let expect =
                        &(&ctx.cyc_q_pow(2 * n) * &ctx.root(eta.eval_residue(u)).unwrap()) * &tau;
                    assert_eq!(value, Some(&expect), "k = {k}, u = {u}");
                } else {
                    assert!(value.is_none(), "k = {k}, u = {u}");
                }
            }
        }
    }
}

#[test]
fn torus_projection_is_eta_equivariant() {
    for (ctx, eta) in configs() {
        let [a, b] = s_delta_basis(&ctx, &eta, PSI, 2, ctx.n_eta() + 2).unwrap();
        let m = ctx.p().pow(ctx.n_eta());
        for f in [a, b] {
            for ((k, u), v) in &f.values {
                for w in (1..m).filter(|w| w % ctx.p() != 0) {
                    let moved = f
                        .get(*k, u * w % m)
                        .cloned()
                        .unwrap_or_else(|| ctx.cyc_zero());
                    assert_eq!(moved, v * &ctx.root(eta.eval_residue(w)).unwrap());
                }
            }
        }
    }
}
