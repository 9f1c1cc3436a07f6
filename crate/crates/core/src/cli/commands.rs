use std::collections::BTreeMap;
use std::sync::Arc;

use super::deffile::{load, Definition};
use super::expr::parse_multivector;
use super::report::Report;
use super::{Command, Degree};
use crate::algebroid::{schouten, validate_presentation, Multivector, Presentation};
use crate::check::Check;
use crate::deform::{
    ad_derivation, deformation_coboundary, gerstenhaber, is_cocycle, MultiDerivation,
};
use crate::differentials::{
    classify_top_plus_one, default_bound, equivalence_witness, exactness_witness,
    h1_trivial_coeffs_bounded, reduced_space_bounded, reduced_space_point_base,
    valid_differential_basis, validate_k_differential, KDifferential, RhoTensor,
};
use crate::error::{Error, Result};
use crate::exactcore::{Poly, Rational};
use crate::jet::{
    build_jet, char_pair_cocycle_check, char_pair_from_differential, differential_from_char_pair,
    mu_pi, pullback_membership,
};
use crate::jetgroup::{
    h_element, jg_ad, jg_inv, jg_mul, random_element, random_tensor, u_pi, u_pi_cocycle_residual,
    u_pi_infinitesimal, JetGroupElement, PointContext, PointTensor,
};
use crate::random;
use crate::transitive::{
    check_primary_pair, differential_from_primary_pair, find_connection, lambda_from_pi,
    omega_class_witness, primary_pair_from_differential, validate_connection, Connection,
};

pub(super) fn run(cmd: &Command, echo: String) -> Result<Report> {
    let mut r = Report::new(echo);
    match cmd {
        Command::Verify(f) => verify(&load(&f.file)?, &mut r)?,
        Command::Bracket { input, left, right } => {
            bracket(&load(&input.file)?, left, right, &mut r)?
        }
        Command::DeformCheck {
            input,
            diff,
            tensor,
            points,
            seed,
        } => deform_check(
            &load(&input.file)?,
            diff.as_deref(),
            tensor.as_deref(),
            *points,
            *seed,
            &mut r,
        )?,
        Command::DiffValidate { input, diff } => {
            diff_validate(&load(&input.file)?, diff.as_deref(), &mut r)?
        }
        Command::DiffWitness {
            input,
            diff,
            other,
            bound,
        } => diff_witness(&load(&input.file)?, diff, other.as_deref(), *bound, &mut r)?,
        Command::Charpair { input, diff, pair } => charpair(
            &load(&input.file)?,
            diff.as_deref(),
            pair.as_deref(),
            &mut r,
        )?,
        Command::Jet(f) => jet(&load(&f.file)?, &mut r)?,
        Command::JetgroupTest {
            input,
            points,
            seed,
            k,
        } => jetgroup_test(&load(&input.file)?, *points, *seed, *k, &mut r)?,
        Command::Transitive {
            input,
            diff,
            other,
            tensor,
            pair,
            bound,
        } => transitive(
            &load(&input.file)?,
            TransitiveArgs {
                diff: diff.as_deref(),
                other: other.as_deref(),
                tensor: tensor.as_deref(),
                pair: pair.as_deref(),
                bound: *bound,
            },
            &mut r,
        )?,
        Command::Cohomology { input, k, bound } => {
            cohomology(&load(&input.file)?, *k, *bound, &mut r)?
        }
        Command::Exceptional {
            input,
            k,
            bound,
            tensor,
            points,
        } => exceptional(
            &load(&input.file)?,
            *k,
            *bound,
            tensor.as_deref(),
            *points,
            &mut r,
        )?,
    }
    Ok(r)
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, name: &str, kind: &str) -> Result<&'a T> {
    map.get(name)
        .ok_or_else(|| Error::Malformed(format!("no {kind} named '{name}' in the file")))
}

fn pairs(v: Vec<(String, String)>) -> BTreeMap<String, String> {
    v.into_iter().collect()
}

fn render_point(p: &Presentation, t: &PointTensor) -> String {
    let names: Vec<String> = p
        .coords()
        .iter()
        .map(|c| format!("d{c}"))
        .chain(p.frame().iter().cloned())
        .collect();
    let w = Multivector::from_terms(
        0,
        p.m() + p.n(),
        t.terms
            .iter()
            .map(|(b, c)| (b.clone(), Poly::constant(0, c.clone()))),
    );
    w.render(&[], &names)
}

fn render_rationals(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn verify(def: &Definition, r: &mut Report) -> Result<()> {
    let p = &def.presentation;
    let v = validate_presentation(p);
    r.check(&v.jacobi);
    r.check(&v.anchor);
    let m = MultiDerivation::schouten_structure(p);
    r.check(&gerstenhaber(p, &m, &m)?.residuals(p, "gerstenhaber(m,m)"));
    r.witness("name", &p.name);
    r.witness("base_dimension", p.m());
    r.witness("rank", p.n());
    Ok(())
}

fn section(def: &Definition, s: &str) -> Result<Multivector> {
    match def.tensors.get(s) {
        Some(t) => Ok(t.clone()),
        None => parse_multivector(s, def.presentation.coords(), def.presentation.frame()),
    }
}

fn bracket(def: &Definition, left: &str, right: &str, r: &mut Report) -> Result<()> {
    let p = &def.presentation;
    let (a, b) = (section(def, left)?, section(def, right)?);
    let c = schouten(p, &a, &b)?;
    r.witness("bracket", p.render(&c));
    Ok(())
}

const BIDEGREES: [(i64, i64); 9] = [
    (-1, 0),
    (-1, 1),
    (-1, 2),
    (0, 0),
    (0, 1),
    (0, 2),
    (1, 0),
    (1, 1),
    (1, 2),
];

fn deform_check(
    def: &Definition,
    diff: Option<&str>,
    tensor: Option<&str>,
    points: usize,
    seed: u64,
    r: &mut Report,
) -> Result<()> {
    let p = &def.presentation;
    if let Some(name) = diff {
        let d = lookup(&def.differentials, name, "differential")?;
        let cocycle = is_cocycle(p, &d.to_multiderivation(p)?)?;
        let kd = validate_k_differential(p, d)?;
        r.check(&cocycle);
        r.witness("validate_k_differential", kd.passed());
        if kd.passed() != cocycle.passed() {
            r.fail("agreement", name, "validation and cocycle verdicts differ");
        } else {
            r.check(&Check::new("agreement"));
        }
        return Ok(());
    }
    if let Some(name) = tensor {
        let t = lookup(&def.tensors, name, "tensor")?;
        r.check(&is_cocycle(p, &ad_derivation(p, t)?)?);
        return Ok(());
    }
    r.seed = Some(seed);
    let mut check = Check::new("d_squared");
    for s in 0..points {
        let mut rng = random::rng(random::derive_seed(seed, s as u64));
        let (n, pd) = BIDEGREES[s % BIDEGREES.len()];
        let d = random::multiderivation(&mut rng, p, n, pd);
        let dd = deformation_coboundary(p, &deformation_coboundary(p, &d)?)?;
        for res in dd.residuals(p, "d_squared").residuals {
            check.push(
                format!("sample {s} ({n}, {pd}) {}", res.location),
                res.value,
            );
        }
    }
    r.check(&check);
    r.witness("samples", points);
    Ok(())
}

fn diff_validate(def: &Definition, diff: Option<&str>, r: &mut Report) -> Result<()> {
    let p = &def.presentation;
    let names: Vec<&String> = match diff {
        Some(name) => vec![def
            .differentials
            .get_key_value(name)
            .map(|(k, _)| k)
            .ok_or_else(|| {
                Error::Malformed(format!("no differential named '{name}' in the file"))
            })?],
        None => def.differentials.keys().collect(),
    };
    if names.is_empty() {
        return Err(Error::Malformed("the file names no differentials".into()));
    }
    let mut implied = BTreeMap::new();
    for name in names {
        let rep = validate_k_differential(p, &def.differentials[name])?;
        for c in rep.checks() {
            r.check_as(format!("{name}/{}", c.name), c);
        }
        implied.insert(name.clone(), rep.implied_consistent);
    }
    r.witness("implied_consistent", implied);
    Ok(())
}

fn diff_witness(
    def: &Definition,
    diff: &str,
    other: Option<&str>,
    bound: Option<u32>,
    r: &mut Report,
) -> Result<()> {
    let p = &def.presentation;
    let d = lookup(&def.differentials, diff, "differential")?;
    let d2 = other
        .map(|o| lookup(&def.differentials, o, "differential"))
        .transpose()?;
    let deg = d
        .coeff_degree()
        .max(d2.map_or(0, KDifferential::coeff_degree));
    let bound = bound.unwrap_or_else(|| default_bound(deg));
    r.witness("bound", bound);
    let tau = match d2 {
        Some(d2) => equivalence_witness(p, d, d2, bound)?,
        None => exactness_witness(p, d, bound)?,
    };
    match tau {
        Some(t) => {
            r.check(&Check::new("witness"));
            r.witness("tau", p.render(&t));
        }
        None => r.fail("witness", format!("bound {bound}"), "NONE_WITHIN_BOUND"),
    }
    Ok(())
}

fn charpair(
    def: &Definition,
    diff: Option<&str>,
    pair: Option<&str>,
    r: &mut Report,
) -> Result<()> {
    let p = &def.presentation;
    let jp = build_jet(p)?;
    let cp = match (diff, pair) {
        (Some(name), None) => {
            let d = lookup(&def.differentials, name, "differential")?;
            char_pair_from_differential(p, d)?
        }
        (None, Some(name)) => lookup(&def.char_pairs, name, "characteristic pair")?.clone(),
        _ => {
            return Err(Error::Malformed(
                "give exactly one of --diff and --pair".into(),
            ))
        }
    };
    let rep = char_pair_cocycle_check(&jp, &cp)?;
    for c in rep.checks() {
        r.check(c);
    }
    r.check(&pullback_membership(p, &cp)?);
    r.witness("pair", pairs(cp.render(p)));
    if pair.is_some() && rep.passed() {
        let d = differential_from_char_pair(&jp, &cp)?;
        r.witness("differential", pairs(d.render(p)));
    }
    Ok(())
}

fn jet(def: &Definition, r: &mut Report) -> Result<()> {
    let jp = build_jet(&def.presentation)?;
    let v = validate_presentation(jp.jet());
    r.check_as("jet/jacobi", &v.jacobi);
    r.check_as("jet/anchor", &v.anchor);
    r.witness("rank", jp.jet().n());
    r.witness("frame", jp.jet().frame());
    Ok(())
}

fn random_pi(
    rng: &mut random::TestRng,
    p: &Presentation,
    basis: &[KDifferential],
    k: usize,
) -> RhoTensor {
    let mut d = KDifferential::zero(p, k);
    for b in basis {
        d = d.add(&b.scale(&random::small_rational(rng)));
    }
    d.rho_tensor()
}

fn jetgroup_test(
    def: &Definition,
    points: usize,
    seed: u64,
    k: Option<Degree>,
    r: &mut Report,
) -> Result<()> {
    let p = &def.presentation;
    r.seed = Some(seed);
    let degrees: Vec<usize> = match k {
        Some(d) => vec![d.resolve(p.top())],
        None => (1..=p.top()).collect(),
    };
    let mut bases = Vec::new();
    for &k in &degrees {
        if k == 0 || k > p.top() {
            return Err(Error::DegreeOutOfRange(format!(
                "k = {k} outside 1..={}",
                p.top()
            )));
        }
        bases.push((k, valid_differential_basis(p, k, 1)?));
    }
    let mut checks: BTreeMap<&str, Check> = [
        "group/associativity",
        "group/identity",
        "group/inverse",
        "adjoint/multiplicative",
        "u_pi/wedge_a",
        "u_pi/cocycle",
        "u_pi/infinitesimal",
    ]
    .into_iter()
    .map(|n| (n, Check::new(n)))
    .collect();
    for s in 0..points {
        let mut rng = random::rng(random::derive_seed(seed, s as u64));
        let x = random::point(&mut rng, p.m());
        let at = format!("sample {s} at x = {}", render_rationals(&x));
        let ctx: Arc<PointContext> = PointContext::new(p, &x)?;
        let g1 = random_element(&mut rng, &ctx);
        let g2 = random_element(&mut rng, &ctx);
        let g3 = random_element(&mut rng, &ctx);
        let e = JetGroupElement::identity(&ctx);
        let lhs = jg_mul(&jg_mul(&g1, &g2)?, &g3)?;
        let rhs = jg_mul(&g1, &jg_mul(&g2, &g3)?)?;
        if lhs != rhs {
            checks
                .get_mut("group/associativity")
                .unwrap()
                .push(&at, format!("{} vs {}", lhs.h, rhs.h));
        }
        if jg_mul(&e, &g1)? != g1 || jg_mul(&g1, &e)? != g1 {
            checks
                .get_mut("group/identity")
                .unwrap()
                .push(&at, "e*g != g");
        }
        let inv = jg_inv(&g1)?;
        if !jg_mul(&g1, &inv)?.is_identity() || !jg_mul(&inv, &g1)?.is_identity() {
            checks
                .get_mut("group/inverse")
                .unwrap()
                .push(&at, "g*g^-1 != e");
        }
        let w = random_tensor(&mut rng, p.m(), p.n(), 2);
        let ad12 = jg_ad(&jg_mul(&g1, &g2)?, &w)?;
        let ad1ad2 = jg_ad(&g1, &jg_ad(&g2, &w)?)?;
        if ad12 != ad1ad2 {
            let diff = ad12.sub(&ad1ad2);
            checks
                .get_mut("adjoint/multiplicative")
                .unwrap()
                .push(&at, render_point(p, &diff));
        }
        for (k, basis) in &bases {
            let pi = random_pi(&mut rng, p, basis, *k);
            let loc = format!("{at}, k = {k}");
            match u_pi(p, &pi, &g1) {
                Ok(_) => {}
                Err(Error::NotInWedgeA(v)) => {
                    checks.get_mut("u_pi/wedge_a").unwrap().push(&loc, v);
                    continue;
                }
                Err(e) => return Err(e),
            }
            let res = u_pi_cocycle_residual(p, &pi, &g1, &g2)?;
            if !res.is_zero() {
                checks
                    .get_mut("u_pi/cocycle")
                    .unwrap()
                    .push(&loc, render_point(p, &res));
            }
            let h = random_element(&mut rng, &ctx).h;
            let inf = u_pi_infinitesimal(p, &pi, &ctx, &h)?;
            let mu = mu_pi(p, &pi, &h_element(p, &h)).eval(&ctx.point);
            if inf.a_blades() != mu {
                checks
                    .get_mut("u_pi/infinitesimal")
                    .unwrap()
                    .push(&loc, render_point(p, &inf));
            }
        }
    }
    for c in checks.values() {
        r.check(c);
    }
    r.witness("samples", points);
    r.witness("degrees", degrees);
    Ok(())
}

struct TransitiveArgs<'a> {
    diff: Option<&'a str>,
    other: Option<&'a str>,
    tensor: Option<&'a str>,
    pair: Option<&'a str>,
    bound: Option<u32>,
}

fn transitive(def: &Definition, args: TransitiveArgs<'_>, r: &mut Report) -> Result<()> {
    let p = &def.presentation;
    let conn: Connection = match &def.connection {
        Some(c) => c.clone(),
        None => match find_connection(p) {
            Some(c) => c,
            None => {
                r.fail(
                    "connection",
                    "rho*lambda = id",
                    "no connection with coefficients of degree <= 1",
                );
                return Ok(());
            }
        },
    };
    r.check(&validate_connection(p, &conn));
    r.witness("connection", pairs(conn.render(p)));
    let frame = def.kernel_frame.as_deref();

    if let Some(name) = args.tensor {
        let pi = lookup(&def.rho_tensors, name, "rho tensor")?;
        match lambda_from_pi(p, &conn, pi) {
            Ok(l) => {
                r.check(&Check::new("lambda"));
                r.witness("Lambda", p.render(&l));
            }
            Err(Error::IdentityFail(msg)) => r.fail("lambda", name, msg),
            Err(e) => return Err(e),
        }
    }
    if let Some(name) = args.pair {
        let pp = lookup(&def.primary_pairs, name, "primary pair")?;
        let rep = check_primary_pair(p, pp, frame)?;
        r.check(&rep.kernel_values);
        r.check(&rep.cocycle);
        let d = differential_from_primary_pair(p, pp)?;
        let v = validate_k_differential(p, &d)?;
        for c in v.checks() {
            r.check_as(format!("differential/{}", c.name), c);
        }
        r.witness("differential", pairs(d.render(p)));
    }
    if let Some(name) = args.diff {
        let d = lookup(&def.differentials, name, "differential")?;
        let pp = primary_pair_from_differential(p, d, &conn, frame)?;
        let rep = check_primary_pair(p, &pp, frame)?;
        r.check(&rep.kernel_values);
        r.check(&rep.cocycle);
        let back = differential_from_primary_pair(p, &pp)?;
        if back == *d {
            r.check(&Check::new("round_trip"));
        } else {
            r.fail("round_trip", name, "reassembled differential differs");
        }
        r.witness("pair", pairs(pp.render(p)));
        if let Some(o) = args.other {
            let d2 = lookup(&def.differentials, o, "differential")?;
            let pp2 = primary_pair_from_differential(p, d2, &conn, frame)?;
            let deg = d.coeff_degree().max(d2.coeff_degree());
            let bound = args.bound.unwrap_or_else(|| default_bound(deg));
            r.witness("bound", bound);
            match omega_class_witness(p, &pp, &pp2, bound)? {
                Some(nu) => {
                    r.check(&Check::new("omega_class"));
                    let tau = &(&pp2.lambda - &pp.lambda) - &nu;
                    r.witness("nu", p.render(&nu));
                    r.witness("tau", p.render(&tau));
                }
                None => r.fail("omega_class", format!("bound {bound}"), "NONE_WITHIN_BOUND"),
            }
        }
    } else if args.other.is_some() {
        return Err(Error::Malformed("--other needs --diff".into()));
    }
    Ok(())
}

fn cohomology(def: &Definition, k: Degree, bound: Option<u32>, r: &mut Report) -> Result<()> {
    let p = &def.presentation;
    let k = k.resolve(p.top());
    r.witness("k", k);
    if p.is_point_base() {
        let h = reduced_space_point_base(p, k)?;
        r.witness("dim_Z1", h.dim_z1);
        r.witness("dim_B1", h.dim_b1);
        r.witness("dim_H1", h.dim_h1);
        r.witness("representatives", h.representatives);
        return Ok(());
    }
    let d = bound.ok_or_else(|| {
        Error::Malformed("--bound is required when the base is not a point".into())
    })?;
    let t = reduced_space_bounded(p, k, d)?;
    r.witness("degree_bound", t.degree_bound);
    r.witness("dim_valid", t.dim_valid);
    r.witness("dim_exact", t.dim_exact);
    r.witness("dim_reduced", t.dim);
    Ok(())
}

/// The origin, then ±t along each axis for t = 1, 2, ...
fn sample_points(m: usize, count: usize) -> Vec<Vec<Rational>> {
    let mut out = vec![vec![Rational::from_integer(0.into()); m]];
    if m == 0 {
        return out;
    }
    let mut t = 1i64;
    while out.len() < count {
        for a in 0..m {
            for s in [t, -t] {
                let mut x = vec![Rational::from_integer(0.into()); m];
                x[a] = Rational::from_integer(s.into());
                out.push(x);
            }
        }
        t += 1;
    }
    out.truncate(count.max(1));
    out
}

fn exceptional(
    def: &Definition,
    k: Degree,
    bound: Option<u32>,
    tensor: Option<&str>,
    points: usize,
    r: &mut Report,
) -> Result<()> {
    let p = &def.presentation;
    let k = k.resolve(p.top());
    r.witness("k", k);
    if k == 0 {
        let d = bound.unwrap_or(2);
        let h = h1_trivial_coeffs_bounded(p, d)?;
        r.witness("degree_bound", h.degree_bound);
        r.witness("dim_closed", h.dim_closed);
        r.witness("dim_exact", h.dim_exact);
        r.witness("dim_H1", h.dim);
        return Ok(());
    }
    if k != p.top() + 1 {
        return Err(Error::DegreeOutOfRange(format!(
            "exceptional degrees are 0 and top+1 = {}",
            p.top() + 1
        )));
    }
    let names: Vec<&String> = match tensor {
        Some(name) => {
            lookup(&def.rho_tensors, name, "rho tensor")?;
            def.rho_tensors.keys().filter(|n| *n == name).collect()
        }
        None => def
            .rho_tensors
            .iter()
            .filter(|(_, t)| t.k == k)
            .map(|(n, _)| n)
            .collect(),
    };
    if names.is_empty() {
        return Err(Error::Malformed(format!(
            "the file names no rho tensors of degree {k}"
        )));
    }
    let pts = sample_points(p.m(), points);
    let mut verdicts = BTreeMap::new();
    for name in names {
        let pi = &def.rho_tensors[name];
        let rep = classify_top_plus_one(p, pi, &pts)?;
        for c in rep.differential.checks() {
            r.check_as(format!("{name}/{}", c.name), c);
        }
        match &rep.witness {
            Some(x) => r.fail(
                &format!("{name}/classification"),
                format!("x = ({})", x.join(", ")),
                "INVALID",
            ),
            None => r.check(&Check::new(format!("{name}/classification"))),
        }
        verdicts.insert(name.clone(), rep.points);
    }
    r.witness("points", verdicts);
    Ok(())
}
