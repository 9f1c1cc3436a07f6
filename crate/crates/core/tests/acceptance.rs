//! Acceptance suite: one line per criterion, all tolerances exact.
//!
//! Run with `cargo test -p liecalc --test acceptance`.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use liecalc::algebroid::fixtures::{
    self, ab2, aff1, ati, bla, bla_x, heis, sl2, sl2_broken, tan1, tan2,
};
use liecalc::algebroid::{
    compat_identities, inv_star, inv_star_direct, validate_presentation, Multivector, Presentation,
};
use liecalc::cli::run_command;
use liecalc::deform::{deformation_coboundary, gerstenhaber, is_cocycle, MultiDerivation};
use liecalc::differentials::{
    classify_top_plus_one, d_rho_tau, default_bound, equivalence_witness, exact_differential,
    exactness_witness, h1_trivial_coeffs_bounded, reduced_space_point_base, rho_compat_check,
    valid_differential_basis, validate_k_differential, KDifferential, RhoTensor,
};
use liecalc::exactcore::Rational;
use liecalc::jet::{
    build_jet, char_pair_cocycle_check, char_pair_from_differential, differential_from_char_pair,
    exact_char_pair, pullback_membership,
};
use liecalc::random::{self, derive_seed, TestRng};
use liecalc::transitive::{
    check_primary_pair, differential_from_primary_pair, lambda_from_pi, omega_class_witness,
    primary_pair_from_differential, Connection,
};

const SEED: u64 = 20240611;

#[derive(Serialize)]
struct Outcome {
    id: usize,
    title: &'static str,
    passed: bool,
    samples: usize,
    failures: Vec<String>,
}

struct Tally {
    samples: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            samples: 0,
            failures: Vec::new(),
        }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.samples += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn done(self, id: usize, title: &'static str) -> Outcome {
        Outcome {
            id,
            title,
            passed: self.failures.is_empty(),
            samples: self.samples,
            failures: self.failures,
        }
    }
}

struct Bases(BTreeMap<(String, usize), Vec<KDifferential>>);

impl Bases {
    fn get(&mut self, p: &Presentation, k: usize) -> &[KDifferential] {
        self.0
            .entry((p.name.clone(), k))
            .or_insert_with(|| valid_differential_basis(p, k, 1).unwrap())
    }
}

fn combination(
    rng: &mut TestRng,
    p: &Presentation,
    k: usize,
    basis: &[KDifferential],
) -> KDifferential {
    let mut d = KDifferential::zero(p, k);
    for b in basis {
        d = d.add(&b.scale(&random::small_rational(rng)));
    }
    d
}

fn arbitrary(rng: &mut TestRng, p: &Presentation, k: usize) -> KDifferential {
    let mut d = KDifferential::zero(p, k);
    if k <= p.top() {
        for v in d.delta0.iter_mut() {
            *v = random::multivector(rng, p, k, 1);
        }
    }
    for v in d.delta1.iter_mut() {
        *v = random::multivector(rng, p, k - 1, 1);
    }
    d
}

/// A ρ-compatible tensor: a valid symbol plus an exact one.
fn compatible(rng: &mut TestRng, p: &Presentation, k: usize, bases: &mut Bases) -> RhoTensor {
    let basis = bases.get(p, k).to_vec();
    let pi = combination(rng, p, k, &basis).rho_tensor();
    let tau = random::multivector(rng, p, k, 2);
    let exact = d_rho_tau(p, &tau).unwrap();
    RhoTensor {
        k,
        comps: pi
            .comps
            .iter()
            .zip(&exact.comps)
            .map(|(a, b)| a.clone() + b.clone())
            .collect(),
    }
}

fn connection(p: &Presentation) -> Connection {
    Connection::new(p, fixtures::connection(p).unwrap()).unwrap()
}

fn axioms() -> Outcome {
    let mut t = Tally::new();
    for p in fixtures::all_valid() {
        let v = validate_presentation(&p);
        t.expect(v.passed(), || format!("{}: {:?}", p.name, v));
        let m = MultiDerivation::schouten_structure(&p);
        let mm = gerstenhaber(&p, &m, &m).unwrap();
        t.expect(mm.is_zero(), || format!("{}: [m,m] != 0", p.name));
    }
    let p = sl2_broken();
    let v = validate_presentation(&p);
    t.expect(
        !v.jacobi.passed() && v.jacobi.residuals.iter().all(|r| r.value != "0"),
        || "broken sl2 passes Jacobi".into(),
    );
    let m = MultiDerivation::schouten_structure(&p);
    t.expect(!gerstenhaber(&p, &m, &m).unwrap().is_zero(), || {
        "broken sl2 has [m,m] = 0".into()
    });
    t.done(1, "axiom suite")
}

fn eps(a: (i64, i64), b: (i64, i64)) -> bool {
    (a.0 * b.0 + a.1 * b.1).rem_euclid(2) == 1
}

/// [x, y] + ε(x, y)[y, x], which vanishes by antisymmetry.
fn antisymmetry_residual(p: &Presentation, x: &MultiDerivation, y: &MultiDerivation) -> bool {
    let xy = gerstenhaber(p, x, y).unwrap();
    let yx = gerstenhaber(p, y, x).unwrap();
    let s = if eps(x.bidegree(), y.bidegree()) {
        xy.sub(&yx)
    } else {
        xy.add(&yx)
    };
    s.unwrap().is_zero()
}

/// Whether [x,[y,z]] = [[x,y],z] + ε(x,y)[y,[x,z]], or None when every
/// term vanishes.
fn jacobi_residual(
    p: &Presentation,
    x: &MultiDerivation,
    y: &MultiDerivation,
    z: &MultiDerivation,
) -> Option<bool> {
    let lhs = gerstenhaber(p, x, &gerstenhaber(p, y, z).unwrap()).unwrap();
    let a = gerstenhaber(p, &gerstenhaber(p, x, y).unwrap(), z).unwrap();
    let mut b = gerstenhaber(p, y, &gerstenhaber(p, x, z).unwrap()).unwrap();
    if lhs.is_zero() && a.is_zero() && b.is_zero() {
        return None;
    }
    if eps(x.bidegree(), y.bidegree()) {
        b = b.scale(&Rational::from_integer((-1).into()));
    }
    Some(lhs.sub(&a).unwrap().sub(&b).unwrap().is_zero())
}

/// Bidegrees ≤ (1, 2) whose multiderivations can be nonzero on `p`.
fn live_bidegrees(p: &Presentation) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for n in -1..=1 {
        for pd in 0..=2 {
            let z = MultiDerivation::zero(p, n, pd).unwrap();
            let live = z
                .keys()
                .iter()
                .any(|(_, coords)| z.value_degree(coords.len()).is_some_and(|q| q <= p.n()));
            if live {
                out.push((n, pd));
            }
        }
    }
    out
}

fn nonzero_multiderivation(
    rng: &mut TestRng,
    p: &Presentation,
    (n, pd): (i64, i64),
) -> MultiDerivation {
    loop {
        let d = random::multiderivation(rng, p, n, pd);
        if !d.is_zero() {
            return d;
        }
    }
}

fn deformation() -> Outcome {
    let mut t = Tally::new();
    for (f, p) in fixtures::all_valid().iter().enumerate() {
        let live = live_bidegrees(p);
        for s in 0..54u64 {
            let bd = live[s as usize % live.len()];
            let mut rng = random::rng(derive_seed(SEED, 1000 * f as u64 + s));
            let d = nonzero_multiderivation(&mut rng, p, bd);
            let dd = deformation_coboundary(p, &deformation_coboundary(p, &d).unwrap()).unwrap();
            t.expect(dd.is_zero(), || {
                format!("{}: d^2 != 0 at {bd:?}, sample {s}", p.name)
            });
        }
        let mut triples = 0;
        for s in 0..400u64 {
            if triples == 20 {
                break;
            }
            let mut rng = random::rng(derive_seed(SEED, 5000 + 1000 * f as u64 + s));
            let mut degs: Vec<(i64, i64)> =
                (0..3).map(|_| live[rng.gen_range(0..live.len())]).collect();
            // At most one bidegree (-1, p) keeps every bracket defined.
            for i in 1..3 {
                if degs[i].0 == -1 && degs[..i].iter().any(|d| d.0 == -1) {
                    degs[i].0 = 0;
                }
            }
            let [x, y, z] = [0, 1, 2].map(|i| nonzero_multiderivation(&mut rng, p, degs[i]));
            let Some(jacobi) = jacobi_residual(p, &x, &y, &z) else {
                continue;
            };
            triples += 1;
            t.expect(antisymmetry_residual(p, &x, &y), || {
                format!("{}: antisymmetry {:?}", p.name, &degs[..2])
            });
            t.expect(jacobi, || format!("{}: Jacobi {:?}", p.name, degs));
        }
        t.expect(triples == 20, || {
            format!("{}: only {triples} nontrivial triples", p.name)
        });
    }
    t.done(2, "deformation complex")
}

fn bridge(bases: &mut Bases) -> Outcome {
    let mut t = Tally::new();
    let mut verdicts = [0usize; 2];
    for (f, p) in fixtures::all_valid().iter().enumerate() {
        let mut rng = random::rng(derive_seed(SEED, 10_000 + f as u64));
        for s in 0..50 {
            let k = s % (p.top() + 2);
            let d = if s % 2 == 0 {
                let basis = bases.get(p, k).to_vec();
                combination(&mut rng, p, k, &basis)
            } else {
                arbitrary(&mut rng, p, k)
            };
            let v = validate_k_differential(p, &d).unwrap().passed();
            let c = is_cocycle(p, &d.to_multiderivation(p).unwrap())
                .unwrap()
                .passed();
            verdicts[v as usize] += 1;
            t.expect(v == c, || format!("{}: k = {k}, sample {s}", p.name));
        }
    }
    t.expect(verdicts[0] > 0 && verdicts[1] > 0, || {
        format!("only one verdict seen: {verdicts:?}")
    });
    t.done(3, "differentials vs cocycles")
}

fn identities(bases: &mut Bases) -> Outcome {
    let mut t = Tally::new();
    for (f, p) in fixtures::all_valid().iter().enumerate() {
        let mut rng = random::rng(derive_seed(SEED, 20_000 + f as u64));
        for s in 0..50 {
            let k = 1 + s % p.top();
            let pi = compatible(&mut rng, p, k, bases);
            t.expect(rho_compat_check(p, &pi).passed(), || {
                format!("{}: k = {k} sample not compatible", p.name)
            });
            let c = compat_identities(p, &pi.to_mixed(p), k).unwrap();
            t.expect(c.passed(), || {
                format!("{}: k = {k}: {:?}", p.name, c.residuals)
            });
            let w = liecalc::algebroid::MixedTensor::from_multivector(
                p,
                &random::multivector(&mut rng, p, k, 2),
            ) + pi.to_mixed(p);
            let ww = inv_star(p, &w);
            t.expect(
                inv_star(p, &ww) == w && ww == inv_star_direct(p, &w),
                || format!("{}: inv_star, k = {k}", p.name),
            );
        }
    }
    t.done(4, "compatible tensor identities")
}

fn transitive_suite(bases: &mut Bases) -> Outcome {
    let mut t = Tally::new();
    for (f, p) in [tan1(), tan2(), ati()].iter().enumerate() {
        let conn = connection(p);
        let frame = fixtures::kernel_frame(p);
        let mut rng = random::rng(derive_seed(SEED, 30_000 + f as u64));
        for s in 0..20 {
            let k = 1 + s % p.top();
            let pi = compatible(&mut rng, p, k, bases);
            let lambda = lambda_from_pi(p, &conn, &pi).unwrap();
            t.expect(d_rho_tau(p, &lambda).unwrap() == pi, || {
                format!("{}: D_rho Lambda != pi, k = {k}", p.name)
            });
            let basis = valid_differential_basis(p, k, 2).unwrap();
            let d = combination(&mut rng, p, k, &basis);
            let pp = primary_pair_from_differential(p, &d, &conn, frame.as_deref()).unwrap();
            t.expect(
                check_primary_pair(p, &pp, frame.as_deref())
                    .unwrap()
                    .passed(),
                || format!("{}: primary pair check, k = {k}", p.name),
            );
            t.expect(differential_from_primary_pair(p, &pp).unwrap() == d, || {
                format!("{}: round trip, k = {k}", p.name)
            });
        }
    }
    let p = ati();
    let conn = connection(&p);
    let frame = fixtures::kernel_frame(&p);
    let basis = valid_differential_basis(&p, 1, 2).unwrap();
    let mut rng = random::rng(derive_seed(SEED, 31_000));
    let mut samples = basis.clone();
    samples.extend((0..10).map(|_| combination(&mut rng, &p, 1, &basis)));
    for (s, d) in samples.iter().enumerate() {
        let bound = default_bound(d.coeff_degree());
        let tau = exactness_witness(&p, d, bound).unwrap();
        t.expect(
            tau.is_some_and(|tau| exact_differential(&p, &tau).unwrap() == *d),
            || format!("ati: no exactness witness for sample {s} at bound {bound}"),
        );
        let d2 = combination(&mut rng, &p, 1, &basis);
        let bound = default_bound(d.coeff_degree().max(d2.coeff_degree()));
        t.expect(
            equivalence_witness(&p, d, &d2, bound).unwrap().is_some(),
            || format!("ati: no equivalence witness for sample {s}"),
        );
        let pp = primary_pair_from_differential(&p, d, &conn, frame.as_deref()).unwrap();
        let pp2 = primary_pair_from_differential(&p, &d2, &conn, frame.as_deref()).unwrap();
        t.expect(
            omega_class_witness(&p, &pp, &pp2, bound).unwrap().is_some(),
            || format!("ati: Omega classes differ for sample {s}"),
        );
    }
    t.done(5, "transitive suite")
}

fn char_pairs(bases: &mut Bases) -> Outcome {
    let mut t = Tally::new();
    for (f, p) in fixtures::all_valid().iter().enumerate() {
        let jp = build_jet(p).unwrap();
        let mut rng = random::rng(derive_seed(SEED, 40_000 + f as u64));
        for s in 0..6 {
            let k = 1 + s % p.top();
            let basis = bases.get(p, k).to_vec();
            let d = combination(&mut rng, p, k, &basis);
            let cp = char_pair_from_differential(p, &d).unwrap();
            let ok = char_pair_cocycle_check(&jp, &cp).unwrap().passed()
                && pullback_membership(p, &cp).unwrap().passed()
                && differential_from_char_pair(&jp, &cp).unwrap() == d;
            t.expect(ok, || format!("{}: round trip, k = {k}", p.name));

            let mut tau = random::multivector(&mut rng, p, k, 2);
            while tau.is_zero() {
                tau = random::multivector(&mut rng, p, k, 2);
            }
            let from_d =
                char_pair_from_differential(p, &exact_differential(p, &tau).unwrap()).unwrap();
            t.expect(exact_char_pair(&jp, &tau).unwrap() == from_d, || {
                format!("{}: exact pair, k = {k}", p.name)
            });
        }
    }
    // π-tamperings break uniqueness; χ-tamperings on aff1 break the cocycle law.
    let mut tamper = 0u64;
    for p in [tan1(), tan2(), bla_x(), ati()] {
        let jp = build_jet(&p).unwrap();
        for _ in 0..4 {
            let mut rng = random::rng(derive_seed(SEED, 41_000 + tamper));
            let k = 1 + rng.gen_range(0..p.top());
            let basis = bases.get(&p, k).to_vec();
            let d = combination(&mut rng, &p, k, &basis);
            let mut cp = char_pair_from_differential(&p, &d).unwrap().extended(&p);
            let a = rng.gen_range(0..p.m());
            let mut w = random::multivector(&mut rng, &p, k - 1, 1);
            if w.is_zero() {
                let idx: Vec<usize> = (0..k - 1).collect();
                w = p.blade(&idx, p.x(a));
            }
            cp.pi.comps[a] += &w;
            let r = char_pair_cocycle_check(&jp, &cp).unwrap();
            t.expect(!r.passed(), || {
                format!("{}: tampering {tamper} accepted", p.name)
            });
            tamper += 1;
        }
    }
    let p = aff1();
    let jp = build_jet(&p).unwrap();
    for _ in 0..4 {
        let mut rng = random::rng(derive_seed(SEED, 41_000 + tamper));
        let basis = bases.get(&p, 1).to_vec();
        let d = combination(&mut rng, &p, 1, &basis);
        let mut cp = char_pair_from_differential(&p, &d).unwrap();
        let c = Rational::from_integer(rng.gen_range(1..=5).into());
        cp.chi_j[0] += &p.e(0).scale(&c);
        let r = char_pair_cocycle_check(&jp, &cp).unwrap();
        t.expect(!r.passed(), || format!("aff1: tampering {tamper} accepted"));
        tamper += 1;
    }
    t.done(6, "characteristic pairs")
}

fn cohomology() -> Outcome {
    let mut t = Tally::new();
    let cases: [(Presentation, usize, usize); 7] = [
        (ab2(), 1, 4),
        (sl2(), 1, 0),
        (sl2(), 2, 0),
        (sl2(), 3, 0),
        (aff1(), 2, 1),
        (aff1(), 0, 1),
        (heis(), 1, 4),
    ];
    for (p, k, expect) in cases {
        let h = reduced_space_point_base(&p, k).unwrap();
        t.expect(h.dim_h1 == expect, || {
            format!(
                "{} k = {k}: dim H1 = {}, expected {expect}",
                p.name, h.dim_h1
            )
        });
    }
    t.done(7, "point-base cohomology")
}

fn fixture_path(name: &str) -> String {
    let mut path = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    path.push("../../fixtures");
    path.push(format!("{name}.alg"));
    path.to_string_lossy().into_owned()
}

fn jet_group(reports: &mut Vec<String>) -> Outcome {
    let mut t = Tally::new();
    for p in fixtures::all_valid() {
        let out = run_command([
            "liecalc",
            "--json",
            "jetgroup-test",
            &fixture_path(&p.name),
            "--points",
            "100",
            "--seed",
            &SEED.to_string(),
        ]);
        t.expect(out.code == 0, || format!("{}: {}", p.name, out.stdout));
        reports.push(out.stdout);
    }
    t.done(8, "jet group suite")
}

fn exceptional() -> Outcome {
    let mut t = Tally::new();
    let line: Vec<Vec<Rational>> = [0, 1, -1, 2, -2]
        .iter()
        .map(|&v: &i64| vec![Rational::from_integer(v.into())])
        .collect();
    let top = |p: &Presentation, comps: Vec<Multivector>| RhoTensor {
        k: p.top() + 1,
        comps,
    };

    let p = tan1();
    let zero = classify_top_plus_one(&p, &RhoTensor::zero(&p, 2), &line).unwrap();
    let one = classify_top_plus_one(&p, &top(&p, vec![p.e(0)]), &line).unwrap();
    t.expect(zero.valid && !one.valid, || "tan1: verdicts".into());

    let p = bla();
    let e12 = p.e(0).wedge(&p.e(1));
    let zero = classify_top_plus_one(&p, &RhoTensor::zero(&p, 3), &line).unwrap();
    let c = classify_top_plus_one(&p, &top(&p, vec![e12.clone()]), &line).unwrap();
    t.expect(zero.valid && !c.valid, || "bla: verdicts".into());
    t.expect(c.points.iter().all(|v| v.traces[0] != "0"), || {
        "bla: trace obstruction missing".into()
    });

    let p = bla_x();
    let pi = top(&p, vec![e12.mul_poly(&p.x(0))]);
    let r = classify_top_plus_one(&p, &pi, &line).unwrap();
    t.expect(!r.valid && r.witness == Some(vec!["1".to_string()]), || {
        format!("bla-x: witness {:?}", r.witness)
    });

    let p = fixtures::ab2_line();
    let mut rng = random::rng(derive_seed(SEED, 50_000));
    for _ in 0..10 {
        let pi = top(&p, vec![random::multivector(&mut rng, &p, 2, 2)]);
        let r = classify_top_plus_one(&p, &pi, &line).unwrap();
        t.expect(
            r.valid
                && validate_k_differential(
                    &p,
                    &KDifferential {
                        k: 3,
                        delta0: vec![p.zero_mv(); 2],
                        delta1: pi.comps.clone(),
                    },
                )
                .unwrap()
                .passed(),
            || "ab2-line: a tensor was rejected".into(),
        );
    }

    let p = tan1();
    for d in 0..=6 {
        let h = h1_trivial_coeffs_bounded(&p, d).unwrap();
        t.expect(h.dim == 0, || {
            format!("tan1: H1 = {} at degree bound {d}", h.dim)
        });
    }
    t.done(9, "exceptional degrees")
}

fn suite(reports: &mut Vec<String>) -> Vec<Outcome> {
    let mut bases = Bases(BTreeMap::new());
    vec![
        axioms(),
        deformation(),
        bridge(&mut bases),
        identities(&mut bases),
        transitive_suite(&mut bases),
        char_pairs(&mut bases),
        cohomology(),
        jet_group(reports),
        exceptional(),
    ]
}

fn cli_reports() -> Vec<String> {
    let mut out = Vec::new();
    for name in ["sl2", "sl2-broken", "ati", "bla-x"] {
        let file = fixture_path(name);
        for args in [
            vec!["verify", file.as_str()],
            vec!["deform-check", file.as_str(), "--seed", "7"],
            vec!["exceptional", file.as_str(), "--k", "0"],
        ] {
            let mut argv = vec!["liecalc", "--json"];
            argv.extend(args);
            out.push(run_command(argv).stdout);
        }
    }
    out
}

fn main() {
    let start = Instant::now();
    let mut reports = Vec::new();
    let outcomes = suite(&mut reports);
    let first = serde_json::to_string_pretty(&outcomes).unwrap();
    reports.extend(cli_reports());

    let mut again = Vec::new();
    let second = serde_json::to_string_pretty(&suite(&mut again)).unwrap();
    again.extend(cli_reports());
    let mut t = Tally::new();
    t.expect(first == second, || {
        "suite reports differ between runs".into()
    });
    for (i, (a, b)) in reports.iter().zip(&again).enumerate() {
        t.expect(a == b, || format!("CLI report {i} differs between runs"));
    }
    let mut outcomes = outcomes;
    outcomes.push(t.done(10, "determinism"));

    let mut all = true;
    for o in &outcomes {
        all &= o.passed;
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {:<30} {verdict} ({} checks)",
            o.id, o.title, o.samples
        );
        for f in o.failures.iter().take(5) {
            println!("    {f}");
        }
    }
    println!("total time: {:.1}s", start.elapsed().as_secs_f64());
    if !all {
        std::process::exit(1);
    }
}
