use super::*;
use crate::algebroid::fixtures::{aff1, all_valid, ati, bla, bla_x, sl2, sl2_broken, tan1, tan2};
use crate::differentials::{
    d_rho_tau, equivalence_witness, exact_differential, valid_differential_basis,
};
use crate::exactcore::Poly;
use crate::random::{self, TestRng};

fn random_valid(rng: &mut TestRng, p: &Presentation, k: usize) -> KDifferential {
    let basis = valid_differential_basis(p, k, 1).unwrap();
    let mut d = KDifferential::zero(p, k);
    for b in &basis {
        d = d.add(&b.scale(&random::small_rational(rng)));
    }
    d
}

fn random_h(rng: &mut TestRng, p: &Presentation) -> HElement {
    HElement(
        (0..p.m())
            .map(|_| (0..p.n()).map(|_| random::poly(rng, p.m(), 1)).collect())
            .collect(),
    )
}

fn ad_h(jp: &JetPresentation, h: &HElement, w: &Multivector) -> Multivector {
    let p = jp.base();
    let action = JetAdjoint { jet: jp, k: 0 };
    let mut out = p.zero_mv();
    for (a, row) in h.0.iter().enumerate() {
        for (i, c) in row.iter().enumerate() {
            out += &action.act(jp.f(a, i), w).mul_poly(c);
        }
    }
    out
}

#[test]
fn point_base_jet_is_the_algebra() {
    let p = sl2();
    let jp = build_jet(&p).unwrap();
    assert_eq!(jp.jet().n(), 3);
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(jp.jet().structure(i, j), p.structure(i, j));
        }
    }
}

#[test]
fn jets_are_algebroids() {
    for p in all_valid() {
        let jp = build_jet(&p).unwrap();
        assert_eq!(jp.jet().n(), p.n() * (1 + p.m()));
        assert!(validate_presentation(jp.jet()).passed(), "{}", p.name);
    }
    assert!(build_jet(&sl2_broken()).is_err());
}

#[test]
fn jet_tables() {
    let jp = build_jet(&tan1()).unwrap();
    assert_eq!(jp.jet().frame(), ["J_e1", "F_x_e1"]);
    assert!(jp.jet().bracket_frame(0, 1).is_zero());

    let p = bla();
    let jp = build_jet(&p).unwrap();
    let j = jp.jet();
    for s in 2..4 {
        for t in 2..4 {
            assert!(j.bracket_frame(s, t).is_zero());
        }
    }
    assert_eq!(j.bracket_frame(0, 1), j.e(1));

    // [e1, e2] = x e2 lifts with a dx⊗e2 correction.
    let p = bla_x();
    let jp = build_jet(&p).unwrap();
    let j = jp.jet();
    assert_eq!(
        j.bracket_frame(0, 1),
        j.e(1).mul_poly(&j.x(0)) + j.e(jp.f(0, 1))
    );
    assert_eq!(
        j.bracket_frame(0, jp.f(0, 1)),
        j.e(jp.f(0, 1)).mul_poly(&j.x(0))
    );
}

#[test]
fn adjoint_examples() {
    let p = sl2();
    let jp = build_jet(&p).unwrap();
    let ef = p.e(1).wedge(&p.e(2));
    assert!(jet_adjoint(&jp, 0, &ef).unwrap().is_zero());

    let p = tan1();
    let jp = build_jet(&p).unwrap();
    assert_eq!(jet_adjoint(&jp, jp.f(0, 0), &p.e(0)).unwrap(), -p.e(0));

    let p = bla();
    let jp = build_jet(&p).unwrap();
    let mut rng = random::rng(1);
    for k in 0..=2 {
        let w = random::multivector(&mut rng, &p, k, 2);
        for g in 2..4 {
            assert!(jet_adjoint(&jp, g, &w).unwrap().is_zero());
        }
    }
}

#[test]
fn mu_pi_examples() {
    let p = tan2();
    let pi = RhoTensor {
        k: 1,
        comps: vec![p.scalar(Poly::one(2)), p.zero_mv()],
    };
    assert_eq!(mu_pi(&p, &pi, &HElement::basis(&p, 0, 1)), p.e(1));
}

#[test]
fn mu_of_exact_tensor_is_a_coboundary() {
    let mut rng = random::rng(2);
    for p in [tan1(), tan2(), ati(), bla_x()] {
        let jp = build_jet(&p).unwrap();
        for k in 1..=p.top() {
            let tau = random::multivector(&mut rng, &p, k, 2);
            let pi = d_rho_tau(&p, &tau).unwrap();
            let action = JetAdjoint { jet: &jp, k };
            for a in 0..p.m() {
                for i in 0..p.n() {
                    let lhs = mu_pi(&p, &pi, &HElement::basis(&p, a, i));
                    assert_eq!(lhs, -action.act(jp.f(a, i), &tau), "{} k={k}", p.name);
                }
            }
        }
    }
}

#[test]
fn mu_pi_is_a_cocycle_on_h() {
    let mut rng = random::rng(3);
    for p in [tan1(), tan2(), ati()] {
        let jp = build_jet(&p).unwrap();
        for k in 1..=p.top() {
            let pi = random_valid(&mut rng, &p, k).rho_tensor();
            for _ in 0..3 {
                let h1 = random_h(&mut rng, &p);
                let h2 = random_h(&mut rng, &p);
                let s1 = h1.to_jet_section(&jp);
                let s2 = h2.to_jet_section(&jp);
                let br = HElement::from_jet_section(&jp, &schouten(jp.jet(), &s1, &s2).unwrap())
                    .unwrap();
                let lhs = mu_pi(&p, &pi, &br);
                let rhs =
                    ad_h(&jp, &h1, &mu_pi(&p, &pi, &h2)) - ad_h(&jp, &h2, &mu_pi(&p, &pi, &h1));
                assert_eq!(lhs, rhs, "{} k={k}", p.name);
            }
        }
    }
}

#[test]
fn round_trip() {
    let mut rng = random::rng(4);
    for p in [aff1(), sl2(), tan1(), tan2(), bla_x(), ati()] {
        let jp = build_jet(&p).unwrap();
        for k in 1..=p.top() {
            for _ in 0..3 {
                let d = random_valid(&mut rng, &p, k);
                let cp = char_pair_from_differential(&p, &d).unwrap();
                assert!(
                    char_pair_cocycle_check(&jp, &cp).unwrap().passed(),
                    "{} k={k}",
                    p.name
                );
                assert!(pullback_membership(&p, &cp).unwrap().passed());
                assert_eq!(differential_from_char_pair(&jp, &cp).unwrap(), d);
            }
        }
    }
}

#[test]
fn exact_pairs() {
    let p = aff1();
    let jp = build_jet(&p).unwrap();
    let cp = exact_char_pair(&jp, &p.e(1)).unwrap();
    assert_eq!(cp.chi_j, vec![-p.e(1), p.zero_mv()]);

    let p = tan1();
    let jp = build_jet(&p).unwrap();
    let cp = exact_char_pair(&jp, &p.e(0)).unwrap();
    assert_eq!(cp.pi.comps, vec![p.scalar(Poly::one(1))]);
    assert!(cp.chi_j[0].is_zero());

    let mut rng = random::rng(5);
    for p in all_valid() {
        let jp = build_jet(&p).unwrap();
        for k in 1..=p.top() {
            let tau = random::multivector(&mut rng, &p, k, 2);
            if tau.is_zero() {
                continue;
            }
            let cp = exact_char_pair(&jp, &tau).unwrap();
            assert!(
                char_pair_cocycle_check(&jp, &cp).unwrap().passed(),
                "{} k={k}",
                p.name
            );
            let from_d =
                char_pair_from_differential(&p, &exact_differential(&p, &tau).unwrap()).unwrap();
            assert_eq!(from_d, cp, "{} k={k}", p.name);
            let ext = CharPair::from_cochain(&jp, k, &exact_cochain(&jp, &tau)).unwrap();
            assert_eq!(ext.pi, cp.pi);
            assert!(pullback_membership(&p, &ext).unwrap().passed());
        }
    }
}

#[test]
fn failing_pairs() {
    let p = aff1();
    let jp = build_jet(&p).unwrap();
    let cp = CharPair::new(1, vec![p.e(0), p.zero_mv()], RhoTensor::zero(&p, 1));
    let r = char_pair_cocycle_check(&jp, &cp).unwrap();
    assert!(!r.passed());
    assert_eq!(r.cocycle.residuals[0].location, "(J_e1, J_e2)");
    assert!(matches!(
        differential_from_char_pair(&jp, &cp),
        Err(Error::CocycleFail(_))
    ));

    let p = tan2();
    let jp = build_jet(&p).unwrap();
    let mut rng = random::rng(6);
    let d = random_valid(&mut rng, &p, 2);
    let mut cp = char_pair_from_differential(&p, &d).unwrap().extended(&p);
    assert!(char_pair_cocycle_check(&jp, &cp).unwrap().passed());
    cp.pi.comps[0] += &p.e(1);
    let r = char_pair_cocycle_check(&jp, &cp).unwrap();
    assert!(!r.uniqueness.passed());

    let mut cp = char_pair_from_differential(&p, &d).unwrap().extended(&p);
    cp.explicit_f.as_mut().unwrap()[0] += &p.e(0);
    assert!(!pullback_membership(&p, &cp).unwrap().passed());
}

#[test]
fn equivalent_differentials_have_cohomologous_pairs() {
    let mut rng = random::rng(7);
    let p = ati();
    let jp = build_jet(&p).unwrap();
    for _ in 0..3 {
        let d = random_valid(&mut rng, &p, 1);
        let d2 = d.add(&exact_differential(&p, &random::multivector(&mut rng, &p, 1, 1)).unwrap());
        let tau = equivalence_witness(&p, &d, &d2, 2)
            .unwrap()
            .expect("witness");
        let c1 = char_pair_from_differential(&p, &d).unwrap();
        let c2 = char_pair_from_differential(&p, &d2).unwrap();
        let diff = CharPair::new(
            1,
            c2.chi_j.iter().zip(&c1.chi_j).map(|(a, b)| a - b).collect(),
            c2.pi.sub(&c1.pi),
        );
        assert_eq!(diff.to_cochain(&jp), exact_cochain(&jp, &tau));
    }
}
