//! Connections on transitive algebroids and the decomposition δ = [Λ, ·] + Ω.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebroid::{
    b_pi, ce_coboundary_residual, contract, contract_rho, schouten, Blade, CoefficientModule,
    Covector, MixedTensor, ModuleAction, Multivector, OneCochain, Presentation,
};
use crate::check::Check;
use crate::differentials::{
    d_rho_tau, rho_compat_check, section_basis, validate_k_differential, KDifferential, RhoTensor,
};
use crate::error::{Error, Result};
use crate::exactcore::{solve_sparse, Monomial, Poly, Rational};


/// A bundle map λ: TM → A, stored as λ(∂x_a) = Σ_i λ[a][i] e_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    pub lambda: Vec<Vec<Poly>>,
}

impl Connection {
    pub fn new(p: &Presentation, lambda: Vec<Vec<Poly>>) -> Result<Self> {
        if lambda.len() != p.m() {
            return Err(Error::Arity {
                expected: p.m(),
                got: lambda.len(),
            });
        }
        for row in &lambda {
            if row.len() != p.n() {
                return Err(Error::Arity {
                    expected: p.n(),
                    got: row.len(),
                });
            }
            if row.iter().any(|c| c.num_vars() != p.m()) {
                return Err(Error::HostMismatch(
                    "connection coefficients use the wrong number of coordinates".into(),
                ));
            }
        }
        Ok(Connection { lambda })
    }

    /// λ(∂x_a) as a section of A.
    pub fn image(&self, p: &Presentation, a: usize) -> Multivector {
        let mut out = p.zero_mv();
        for (i, c) in self.lambda[a].iter().enumerate() {
            if !c.is_zero() {
                out += &p.e(i).mul_poly(c);
            }
        }
        out
    }

    pub fn render(&self, p: &Presentation) -> Vec<(String, String)> {
        (0..p.m())
            .map(|a| {
                (
                    format!("lambda(d{})", p.coords()[a]),
                    p.render(&self.image(p, a)),
                )
            })
            .collect()
    }
}

/// Residuals of ρ∘λ = id, one per (a, b).
pub fn validate_connection(p: &Presentation, conn: &Connection) -> Check {
    let mut check = Check::new("connection");
    for a in 0..p.m() {
        for b in 0..p.m() {
            let mut r = p.poly_zero();
            for (i, c) in conn.lambda[a].iter().enumerate() {
                r += &(c.clone() * p.anchor(i)[b].clone());
            }
            if a == b {
                r -= &Poly::one(p.m());
            }
            check.expect_zero(
                format!("(d{}, d{})", p.coords()[a], p.coords()[b]),
                r.is_zero(),
                || p.render_poly(&r),
            );
        }
    }
    check
}

/// A connection with coefficients of degree ≤ 1, if one exists.
pub fn find_connection(p: &Presentation) -> Option<Connection> {
    let (m, n) = (p.m(), p.n());
    let monos = Monomial::up_to_degree(m, 1);
    let mut params = Vec::new();
    let mut cols: Vec<BTreeMap<(usize, usize, Monomial), Rational>> = Vec::new();
    for a in 0..m {
        for i in 0..n {
            for mono in &monos {
                let c = Poly::monomial(mono.clone(), Rational::from_integer(1.into()));
                let mut col = BTreeMap::new();
                for b in 0..m {
                    let prod = c.clone() * p.anchor(i)[b].clone();
                    for (mu, r) in prod.terms() {
                        col.insert((a, b, mu.clone()), r.clone());
                    }
                }
                params.push((a, i, c));
                cols.push(col);
            }
        }
    }
    let target: BTreeMap<_, _> = (0..m)
        .map(|a| ((a, a, Monomial::one(m)), Rational::from_integer(1.into())))
        .collect();
    let x = solve_sparse(&cols, &target)?;
    let mut lambda = vec![vec![p.poly_zero(); n]; m];
    for (v, (a, i, c)) in x.iter().zip(params) {
        lambda[a][i] += &c.scale(v);
    }
    Some(Connection { lambda })
}

/// Υ: replaces each TM leg X by λ(X) and keeps the A legs.
pub fn upsilon(p: &Presentation, conn: &Connection, w: &MixedTensor) -> Multivector {
    let images: Vec<Multivector> = (0..p.m())
        .map(|a| conn.image(p, a))
        .chain((0..p.n()).map(|i| p.e(i)))
        .collect();
    w.inner().morphism(&images, p.n())
}

/// Residuals of ι_{ρ*dx_a}Υ(W) = Υ(ι_{dx_a}W + ι_{ρ*dx_a}W).
pub fn upsilon_contraction_check(p: &Presentation, conn: &Connection, w: &MixedTensor) -> Check {
    let mut check = Check::new("upsilon-contraction");
    let uw = upsilon(p, conn, w);
    for a in 0..p.m() {
        let lhs = contract_rho(p, a, &uw);
        let inner = contract(p, Covector::Dx(a), w) + contract(p, Covector::RhoDx(a), w);
        let r = lhs - upsilon(p, conn, &inner);
        check.expect_zero(format!("d{}", p.coords()[a]), r.is_zero(), || p.render(&r));
    }
    check
}

/// Λ = Υ(Bπ), with [Λ, x_a] = (−1)^{k−1}π_a and D_ρΛ = π checked exactly.
pub fn lambda_from_pi(p: &Presentation, conn: &Connection, pi: &RhoTensor) -> Result<Multivector> {
    let c = validate_connection(p, conn);
    if !c.passed() {
        return Err(Error::Validation(format!(
            "connection fails rho*lambda = id at {}",
            c.residuals[0].location
        )));
    }
    let c = rho_compat_check(p, pi);
    if !c.passed() {
        return Err(Error::Validation(format!(
            "tensor is not rho-compatible at {}",
            c.residuals[0].location
        )));
    }
    let lambda = upsilon(p, conn, &b_pi(p, &pi.to_mixed(p), pi.k)?);
    let symbol = pi.symbol();
    for a in 0..p.m() {
        let r = schouten(p, &lambda, &p.scalar(p.x(a)))? - symbol[a].clone();
        if !r.is_zero() {
            return Err(Error::IdentityFail(format!(
                "[Lambda, {}] residual {}",
                p.coords()[a],
                p.render(&r)
            )));
        }
    }
    let back = if lambda.is_zero() {
        RhoTensor::zero(p, pi.k)
    } else {
        d_rho_tau(p, &lambda)?
    };
    let r = back.sub(pi);
    if !r.is_zero() {
        return Err(Error::IdentityFail(format!(
            "D_rho Lambda - pi = {}",
            r.render(p)
        )));
    }
    Ok(lambda)
}

/// A representative (Ω, Λ) of a primary pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimaryPair {
    pub k: usize,
    pub omega: OneCochain,
    pub lambda: Multivector,
}

impl PrimaryPair {
    /// The ν-shifted representative (Ω − [ν, ·], Λ + ν).
    pub fn shift(&self, p: &Presentation, nu: &Multivector) -> Result<Self> {
        let mut omega = self.omega.clone();
        for (i, v) in omega.values.iter_mut().enumerate() {
            *v -= &schouten(p, nu, &p.e(i))?;
        }
        Ok(PrimaryPair {
            k: self.k,
            omega,
            lambda: &self.lambda + nu,
        })
    }

    pub fn render(&self, p: &Presentation) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = self
            .omega
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| (format!("Omega({})", p.frame()[i]), p.render(v)))
            .collect();
        out.push(("Lambda".into(), p.render(&self.lambda)));
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimaryPairReport {
    pub kernel_values: Check,
    pub cocycle: Check,
}

impl PrimaryPairReport {
    pub fn passed(&self) -> bool {
        self.kernel_values.passed() && self.cocycle.passed()
    }

    pub fn checks(&self) -> Vec<&Check> {
        vec![&self.kernel_values, &self.cocycle]
    }
}

/// Ω takes values in ∧^k ker ρ (and in the span of `frame` when given) and
/// is a 1-cocycle for the adjoint action.
pub fn check_primary_pair(
    p: &Presentation,
    pp: &PrimaryPair,
    frame: Option<&[Multivector]>,
) -> Result<PrimaryPairReport> {
    if pp.omega.values.len() != p.n() {
        return Err(Error::Arity {
            expected: p.n(),
            got: pp.omega.values.len(),
        });
    }
    let module = match frame {
        Some(f) => CoefficientModule::KernelWedge {
            k: pp.k,
            frame: f.to_vec(),
        },
        None => CoefficientModule::AdjointWedge(pp.k),
    };
    let action = ModuleAction::new(p, module)?;
    let mut kernel_values = Check::new("kernel-values");
    for (i, v) in pp.omega.values.iter().enumerate() {
        p.check_host(v)?;
        if !v.is_zero() && v.homogeneous_degree() != Some(pp.k) {
            kernel_values.push(format!("Omega({})", p.frame()[i]), "wrong degree");
            continue;
        }
        for a in 0..p.m() {
            let r = contract_rho(p, a, v);
            kernel_values.expect_zero(
                format!("Omega({}), d{}", p.frame()[i], p.coords()[a]),
                r.is_zero(),
                || p.render(&r),
            );
        }
        if frame.is_some() && !action.module.contains(p, v) {
            kernel_values.push(
                format!("Omega({})", p.frame()[i]),
                "outside the span of the kernel frame",
            );
        }
    }
    let cocycle = ce_coboundary_residual(&action, &pp.omega)?;
    Ok(PrimaryPairReport {
        kernel_values,
        cocycle,
    })
}

/// Λ = Υ(Bπ) and Ω(u) = δ^{(0)}(u) − [Λ, u].
pub fn primary_pair_from_differential(
    p: &Presentation,
    d: &KDifferential,
    conn: &Connection,
    frame: Option<&[Multivector]>,
) -> Result<PrimaryPair> {
    if d.k == 0 || d.k > p.top() {
        return Err(Error::DegreeOutOfRange(format!(
            "k = {} outside 1..={}",
            d.k,
            p.top()
        )));
    }
    let report = validate_k_differential(p, d)?;
    if !report.passed() {
        return Err(Error::Validation("not a k-differential".into()));
    }
    let lambda = lambda_from_pi(p, conn, &d.rho_tensor())?;
    let mut values = Vec::with_capacity(p.n());
    for i in 0..p.n() {
        values.push(&d.delta0[i] - &schouten(p, &lambda, &p.e(i))?);
    }
    let pp = PrimaryPair {
        k: d.k,
        omega: OneCochain { values },
        lambda,
    };
    let report = check_primary_pair(p, &pp, frame)?;
    if !report.passed() {
        let bad = report
            .checks()
            .into_iter()
            .find(|c| !c.passed())
            .expect("a failing check");
        return Err(Error::Validation(format!(
            "{} fails at {}",
            bad.name, bad.residuals[0].location
        )));
    }
    Ok(pp)
}

/// δ = [Λ, ·] + Ω on generators.
pub fn differential_from_primary_pair(p: &Presentation, pp: &PrimaryPair) -> Result<KDifferential> {
    p.check_host(&pp.lambda)?;
    if pp.omega.values.len() != p.n() {
        return Err(Error::Arity {
            expected: p.n(),
            got: pp.omega.values.len(),
        });
    }
    let mut d = KDifferential::zero(p, pp.k);
    for i in 0..p.n() {
        d.delta0[i] = schouten(p, &pp.lambda, &p.e(i))? + pp.omega.values[i].clone();
    }
    if pp.k > 0 {
        for a in 0..p.m() {
            d.delta1[a] = schouten(p, &pp.lambda, &p.scalar(p.x(a)))?;
        }
    }
    Ok(d)
}

/// ν ∈ ∧^k ker ρ with Ω′ = Ω − [ν, ·] and Λ′ = Λ + ν, if the pairs are
/// related by one of coefficient degree ≤ `bound`.
pub fn primary_equivalence_witness(
    p: &Presentation,
    pp: &PrimaryPair,
    pp2: &PrimaryPair,
    bound: u32,
) -> Result<Option<Multivector>> {
    if pp.k != pp2.k {
        return Err(Error::WrongBidegree(format!(
            "degrees {} and {} differ",
            pp.k, pp2.k
        )));
    }
    let nu = &pp2.lambda - &pp.lambda;
    if nu.coeff_degree() > bound || (0..p.m()).any(|a| !contract_rho(p, a, &nu).is_zero()) {
        return Ok(None);
    }
    Ok((pp.shift(p, &nu)? == *pp2).then_some(nu))
}

/// ν ∈ ∧^k ker ρ of coefficient degree ≤ `bound` with Ω′ − Ω = d_A ν.
pub fn omega_class_witness(
    p: &Presentation,
    pp: &PrimaryPair,
    pp2: &PrimaryPair,
    bound: u32,
) -> Result<Option<Multivector>> {
    if pp.k != pp2.k {
        return Err(Error::WrongBidegree(format!(
            "degrees {} and {} differ",
            pp.k, pp2.k
        )));
    }
    type Key = (u8, usize, Blade, Monomial);
    fn flatten(out: &mut BTreeMap<Key, Rational>, tag: u8, slot: usize, w: &Multivector) {
        for (b, c) in w.terms() {
            for (mono, r) in c.terms() {
                out.insert((tag, slot, b.clone(), mono.clone()), r.clone());
            }
        }
    }
    let basis = section_basis(p, pp.k, bound);
    let mut cols = Vec::with_capacity(basis.len());
    for t in &basis {
        let mut col = BTreeMap::new();
        for i in 0..p.n() {
            flatten(&mut col, 0, i, &schouten(p, &p.e(i), t)?);
        }
        for a in 0..p.m() {
            flatten(&mut col, 1, a, &contract_rho(p, a, t));
        }
        cols.push(col);
    }
    let mut target = BTreeMap::new();
    for (i, v) in pp2.omega.sub(&pp.omega).values.iter().enumerate() {
        flatten(&mut target, 0, i, v);
    }
    let Some(x) = solve_sparse(&cols, &target) else {
        return Ok(None);
    };
    let mut nu = p.zero_mv();
    for (c, t) in x.iter().zip(&basis) {
        if !num_traits::Zero::is_zero(c) {
            nu += &t.scale(c);
        }
    }
    Ok(Some(nu))
}

/// Splitting of π into its part along the image directions `image`, which
/// `partial` lifts to A, and the remaining normal part. Returns the normal
/// part together with Λ₁ satisfying D_ρΛ₁ = π₁.
pub fn rho_reduction(
    p: &Presentation,
    pi: &RhoTensor,
    image: &[usize],
    partial: &Connection,
) -> Result<(RhoTensor, Multivector)> {
    let mut along = RhoTensor::zero(p, pi.k);
    let mut normal = pi.clone();
    for &a in image {
        along.comps[a] = pi.comps[a].clone();
        normal.comps[a] = p.zero_mv();
    }
    let lambda = upsilon(p, partial, &b_pi(p, &along.to_mixed(p), pi.k)?);
    let back = if lambda.is_zero() {
        RhoTensor::zero(p, pi.k)
    } else {
        d_rho_tau(p, &lambda)?
    };
    let r = back.sub(&along);
    if !r.is_zero() {
        return Err(Error::IdentityFail(format!(
            "D_rho Lambda_1 - pi_1 = {}",
            r.render(p)
        )));
    }
    Ok((normal, lambda))
}
