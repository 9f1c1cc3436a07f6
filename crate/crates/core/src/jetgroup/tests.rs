use super::*;
use crate::algebroid::fixtures::{ati, bla, bla_x, tan1, tan2};
use crate::differentials::{d_rho_tau, valid_differential_basis, KDifferential};
use crate::exactcore::{q, qf};
use crate::jet::mu_pi;

fn mat(rows: &[&[i64]]) -> RationalMatrix {
    RationalMatrix::from_int_rows(rows)
}

fn el(ctx: &Arc<PointContext>, rows: &[&[i64]]) -> JetGroupElement {
    JetGroupElement::new(ctx, mat(rows)).unwrap()
}

fn pt(m: usize, n: usize, idx: &[usize]) -> PointTensor {
    PointTensor::blade(m, n, idx, q(1))
}

fn random_pi(rng: &mut TestRng, p: &Presentation, k: usize) -> RhoTensor {
    let mut d = KDifferential::zero(p, k);
    for b in valid_differential_basis(p, k, 1).unwrap() {
        d = d.add(&b.scale(&random::small_rational(rng)));
    }
    d.rho_tensor()
}

#[test]
fn multiplication_examples() {
    let p = tan1();
    let ctx = PointContext::new(&p, &[q(0)]).unwrap();
    let g = el(&ctx, &[&[1]]);
    assert_eq!(jg_mul(&g, &g).unwrap().h, mat(&[&[3]]));
    assert_eq!(jg_mul(&g, &JetGroupElement::identity(&ctx)).unwrap(), g);

    let p = bla();
    let ctx = PointContext::new(&p, &[q(2)]).unwrap();
    let g1 = el(&ctx, &[&[1], &[2]]);
    let g2 = el(&ctx, &[&[-3], &[5]]);
    assert_eq!(jg_mul(&g1, &g2).unwrap().h, mat(&[&[-2], &[7]]));

    let other = PointContext::new(&p, &[q(1)]).unwrap();
    assert!(matches!(
        jg_mul(&g1, &JetGroupElement::identity(&other)),
        Err(Error::ContextMismatch)
    ));
}

#[test]
fn inverse_examples() {
    let p = tan1();
    let ctx = PointContext::new(&p, &[q(0)]).unwrap();
    assert!(jg_inv(&JetGroupElement::identity(&ctx))
        .unwrap()
        .is_identity());
    let g = el(&ctx, &[&[1]]);
    assert_eq!(jg_inv(&g).unwrap().h[(0, 0)], qf(-1, 2));
    assert!(matches!(
        JetGroupElement::new(&ctx, mat(&[&[-1]])),
        Err(Error::Singular)
    ));

    let p = bla();
    let ctx = PointContext::new(&p, &[q(0)]).unwrap();
    let g = el(&ctx, &[&[4], &[-1]]);
    assert_eq!(jg_inv(&g).unwrap().h, mat(&[&[-4], &[1]]));
}

#[test]
fn translation_examples() {
    let p = tan2();
    let ctx = PointContext::new(&p, &[q(0), q(0)]).unwrap();
    let g = el(&ctx, &[&[0, 0], &[1, 0]]);
    // ∂1 ↦ ∂1 + e2
    assert_eq!(
        jg_left_translate(&g, &pt(2, 2, &[0])).unwrap(),
        pt(2, 2, &[0]).add(&pt(2, 2, &[3]))
    );
    let w = pt(2, 2, &[0, 2]);
    let expected = pt(2, 2, &[0])
        .add(&pt(2, 2, &[3]))
        .wedge(&pt(2, 2, &[2]).add(&pt(2, 2, &[3])));
    assert_eq!(jg_left_translate(&g, &w).unwrap(), expected);

    assert_eq!(
        jg_right_translate(&JetGroupElement::identity(&ctx), &w).unwrap(),
        w
    );
    assert_eq!(
        jg_right_translate(&g, &pt(2, 2, &[2])).unwrap(),
        pt(2, 2, &[2])
    );

    let p = bla();
    let ctx = PointContext::new(&p, &[q(0)]).unwrap();
    let g = el(&ctx, &[&[3], &[1]]);
    assert_eq!(
        jg_left_translate(&g, &pt(1, 2, &[1])).unwrap(),
        pt(1, 2, &[1])
    );
    assert_eq!(jg_ad(&g, &pt(1, 2, &[2])).unwrap(), pt(1, 2, &[2]));
}

#[test]
fn adjoint_examples() {
    let p = tan1();
    let ctx = PointContext::new(&p, &[q(0)]).unwrap();
    let g = el(&ctx, &[&[1]]);
    assert_eq!(
        jg_ad(&g, &pt(1, 1, &[1])).unwrap(),
        PointTensor::blade(1, 1, &[1], q(2))
    );
    let w = pt(1, 1, &[0, 1]);
    assert_eq!(jg_ad(&JetGroupElement::identity(&ctx), &w).unwrap(), w);
}

#[test]
fn group_axioms() {
    let mut rng = random::rng(11);
    for p in [tan1(), tan2(), bla(), bla_x(), ati()] {
        for _ in 0..100 {
            let x = random::point(&mut rng, p.m());
            let ctx = PointContext::new(&p, &x).unwrap();
            let g1 = random_element(&mut rng, &ctx);
            let g2 = random_element(&mut rng, &ctx);
            let g3 = random_element(&mut rng, &ctx);
            let e = JetGroupElement::identity(&ctx);
            let l = jg_mul(&jg_mul(&g1, &g2).unwrap(), &g3).unwrap();
            let r = jg_mul(&g1, &jg_mul(&g2, &g3).unwrap()).unwrap();
            assert_eq!(l, r, "{}", p.name);
            assert_eq!(jg_mul(&e, &g1).unwrap(), g1);
            assert_eq!(jg_mul(&g1, &e).unwrap(), g1);
            let inv = jg_inv(&g1).unwrap();
            assert!(jg_mul(&g1, &inv).unwrap().is_identity());
            assert!(jg_mul(&inv, &g1).unwrap().is_identity());
        }
    }
}

#[test]
fn translations_and_adjoint_compose() {
    let mut rng = random::rng(12);
    for p in [tan2(), bla_x(), ati()] {
        let (m, n) = (p.m(), p.n());
        for _ in 0..20 {
            let ctx = PointContext::new(&p, &random::point(&mut rng, m)).unwrap();
            let g1 = random_element(&mut rng, &ctx);
            let g2 = random_element(&mut rng, &ctx);
            let g12 = jg_mul(&g1, &g2).unwrap();
            let inv = jg_inv(&g1).unwrap();
            let w = random_tensor(&mut rng, m, n, 2);

            let ad12 = jg_ad(&g12, &w).unwrap();
            assert_eq!(ad12, jg_ad(&g1, &jg_ad(&g2, &w).unwrap()).unwrap());
            let l12 = jg_left_translate(&g12, &w).unwrap();
            assert_eq!(
                l12,
                jg_left_translate(&g1, &jg_left_translate(&g2, &w).unwrap()).unwrap()
            );

            let lr = jg_left_translate(&g1, &jg_right_translate(&inv, &w).unwrap()).unwrap();
            assert_eq!(lr, jg_ad(&g1, &w).unwrap());
            let rl = jg_right_translate(&g1, &jg_left_translate(&inv, &w).unwrap()).unwrap();
            assert_eq!(rl, jg_ad(&inv, &w).unwrap());
        }
    }
}

#[test]
fn u_pi_examples() {
    let p = tan2();
    let ctx = PointContext::new(&p, &[q(0), q(0)]).unwrap();
    let pi = RhoTensor {
        k: 1,
        comps: vec![p.scalar(crate::exactcore::Poly::one(2)), p.zero_mv()],
    };
    assert!(u_pi(&p, &pi, &JetGroupElement::identity(&ctx))
        .unwrap()
        .is_zero());
    let g = el(&ctx, &[&[0, 0], &[1, 0]]);
    assert_eq!(
        u_pi(&p, &pi, &g).unwrap(),
        PointTensor::blade(2, 2, &[3], q(-1))
    );

    let h = mat(&[&[0, 0], &[1, 0]]);
    let inf = u_pi_infinitesimal(&p, &pi, &ctx, &h).unwrap();
    assert_eq!(inf, pt(2, 2, &[3]));
    assert!(u_pi_infinitesimal(&p, &pi, &ctx, &mat(&[&[0, 0], &[0, 0]]))
        .unwrap()
        .is_zero());
}

#[test]
fn u_pi_of_exact_tensor() {
    let mut rng = random::rng(13);
    for p in [tan1(), tan2(), ati(), bla_x()] {
        for k in 1..=p.top() {
            let tau = random::multivector(&mut rng, &p, k, 2);
            if tau.is_zero() {
                continue;
            }
            let pi = d_rho_tau(&p, &tau).unwrap();
            let ctx = PointContext::new(&p, &random::point(&mut rng, p.m())).unwrap();
            let g = random_element(&mut rng, &ctx);
            let tau_x = PointTensor {
                m: p.m(),
                n: p.n(),
                terms: tau
                    .eval(&ctx.point)
                    .into_iter()
                    .map(|(b, c)| (b.iter().map(|i| i + p.m()).collect(), c))
                    .collect(),
            };
            let expected = tau_x.sub(&jg_ad(&g, &tau_x).unwrap());
            assert_eq!(u_pi(&p, &pi, &g).unwrap(), expected, "{} k={k}", p.name);
        }
    }
}

#[test]
fn u_pi_cocycle_and_infinitesimal() {
    let mut rng = random::rng(14);
    for p in [tan1(), tan2(), ati(), bla_x(), bla()] {
        for k in 1..=p.top() {
            for _ in 0..4 {
                let pi = random_pi(&mut rng, &p, k);
                let ctx = PointContext::new(&p, &random::point(&mut rng, p.m())).unwrap();
                let g1 = random_element(&mut rng, &ctx);
                let g2 = random_element(&mut rng, &ctx);
                let r = u_pi_cocycle_residual(&p, &pi, &g1, &g2).unwrap();
                assert!(r.is_zero(), "{} k={k}", p.name);
                assert!(
                    u_pi_cocycle_residual(&p, &pi, &g1, &JetGroupElement::identity(&ctx))
                        .unwrap()
                        .is_zero()
                );

                let h = random_element(&mut rng, &ctx).h;
                let inf = u_pi_infinitesimal(&p, &pi, &ctx, &h).unwrap();
                let mu = mu_pi(&p, &pi, &h_element(&p, &h)).eval(&ctx.point);
                assert_eq!(inf.a_blades(), mu, "{} k={k}", p.name);
            }
        }
    }
}

#[test]
fn incompatible_tensor_leaves_wedge_a() {
    let p = tan1();
    let ctx = PointContext::new(&p, &[q(0)]).unwrap();
    let pi = RhoTensor {
        k: 2,
        comps: vec![p.e(0)],
    };
    let g = el(&ctx, &[&[1]]);
    assert!(matches!(u_pi(&p, &pi, &g), Err(Error::NotInWedgeA(_))));
}
