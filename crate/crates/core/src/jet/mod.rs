//! The jet algebroid 𝔍A with frame J_i = 𝕛¹e_i, F_{a,i} = dx_a⊗e_i, its
//! adjoint action on ∧^k A, and characteristic pairs.

use serde::Serialize;

use crate::algebroid::{
    ce_coboundary_residual, d_a, schouten, validate_presentation, Action, Multivector, OneCochain,
    Presentation,
};
use crate::check::Check;
use crate::differentials::{rho_compat_check, validate_k_differential, KDifferential, RhoTensor};
use crate::error::{Error, Result};
use crate::exactcore::{Poly, Rational};

#[derive(Clone, Debug)]
pub struct JetPresentation {
    base: Presentation,
    jet: Presentation,
}

impl JetPresentation {
    pub fn base(&self) -> &Presentation {
        &self.base
    }

    pub fn jet(&self) -> &Presentation {
        &self.jet
    }

    /// Index of J_i in the jet frame.
    pub fn j(&self, i: usize) -> usize {
        i
    }

    /// Index of F_{a,i} = dx_a⊗e_i in the jet frame.
    pub fn f(&self, a: usize, i: usize) -> usize {
        let n = self.base.n();
        n + a * n + i
    }

    /// Inverse of the frame numbering: Err(i) for J_i, Ok((a, i)) for F_{a,i}.
    pub fn split(&self, g: usize) -> std::result::Result<(usize, usize), usize> {
        let n = self.base.n();
        if g < n {
            Err(g)
        } else {
            Ok(((g - n) / n, (g - n) % n))
        }
    }
}

/// 𝔍A from the lifting rule 𝕛¹(fu) = f 𝕛¹u + df⊗u.
pub fn build_jet(p: &Presentation) -> Result<JetPresentation> {
    let report = validate_presentation(p);
    if !report.passed() {
        return Err(Error::Validation(format!(
            "{} is not a Lie algebroid",
            p.name
        )));
    }
    let (m, n) = (p.m(), p.n());
    let rank = n + m * n;
    let fi = |a: usize, i: usize| n + a * n + i;
    let mut frame: Vec<String> = p.frame().iter().map(|e| format!("J_{e}")).collect();
    for a in 0..m {
        for e in p.frame() {
            frame.push(format!("F_{}_{e}", p.coords()[a]));
        }
    }
    let mut anchor = vec![vec![Poly::zero(m); m]; rank];
    for (i, row) in anchor.iter_mut().enumerate().take(n) {
        *row = p.anchor(i).to_vec();
    }
    let mut table = vec![vec![vec![Poly::zero(m); rank]; rank]; rank];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let c = &p.structure(i, j)[k];
                if c.is_zero() {
                    continue;
                }
                // [J_i, J_j] = 𝕛¹(Σ c^k e_k)
                table[i][j][k] = &table[i][j][k] + c;
                for a in 0..m {
                    let slot = &mut table[i][j][fi(a, k)];
                    *slot = &*slot + &c.d(a);
                }
                // dx_a⊗[e_i, e_j] part of [J_i, F_{a,j}]
                for a in 0..m {
                    let slot = &mut table[i][fi(a, j)][fi(a, k)];
                    *slot = &*slot + c;
                }
            }
            // d(ρ_i x_a)⊗e_j part of [J_i, F_{a,j}]
            for a in 0..m {
                let r = &p.anchor(i)[a];
                for b in 0..m {
                    let slot = &mut table[i][fi(a, j)][fi(b, j)];
                    *slot = &*slot + &r.d(b);
                }
            }
        }
    }
    for a in 0..m {
        for i in 0..n {
            for b in 0..m {
                for j in 0..n {
                    let (s, t) = (fi(a, i), fi(b, j));
                    let slot = &mut table[s][t][fi(a, j)];
                    *slot = &*slot + &p.anchor(i)[b];
                    let slot = &mut table[s][t][fi(b, i)];
                    *slot = &*slot - &p.anchor(j)[a];
                }
            }
        }
    }
    let brackets = (0..rank)
        .flat_map(|s| (s + 1..rank).map(move |t| (s, t)))
        .filter(|&(s, t)| table[s][t].iter().any(|c| !c.is_zero()))
        .map(|(s, t)| ((s, t), table[s][t].clone()))
        .collect();
    let jet = Presentation::new(
        format!("jet({})", p.name),
        p.coords().to_vec(),
        frame,
        anchor,
        brackets,
    )?;
    Ok(JetPresentation {
        base: p.clone(),
        jet,
    })
}

/// 𝔍A acting on ∧^k A: ad_{J_i} w = [e_i, w], ad_{F_{a,i}} w = −[w, x_a]∧e_i.
pub struct JetAdjoint<'a> {
    pub jet: &'a JetPresentation,
    pub k: usize,
}

impl Action for JetAdjoint<'_> {
    fn acting(&self) -> &Presentation {
        &self.jet.jet
    }

    fn host(&self) -> &Presentation {
        &self.jet.base
    }

    fn degree(&self) -> usize {
        self.k
    }

    fn act(&self, gen: usize, w: &Multivector) -> Multivector {
        let p = &self.jet.base;
        match self.jet.split(gen) {
            Err(i) => schouten(p, &p.e(i), w).expect("same host"),
            Ok((a, i)) => -schouten(p, w, &p.scalar(p.x(a)))
                .expect("same host")
                .wedge(&p.e(i)),
        }
    }
}

pub fn jet_adjoint(jp: &JetPresentation, gen: usize, w: &Multivector) -> Result<Multivector> {
    jp.base.check_host(w)?;
    if gen >= jp.jet.n() {
        return Err(Error::Malformed(format!(
            "jet frame has {} sections",
            jp.jet.n()
        )));
    }
    let k = w.homogeneous_degree().unwrap_or(0);
    Ok(JetAdjoint { jet: jp, k }.act(gen, w))
}

/// An element Σ H_{a,i} dx_a⊗e_i of 𝔥 = T*M⊗A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HElement(pub Vec<Vec<Poly>>);

impl HElement {
    pub fn basis(p: &Presentation, a: usize, i: usize) -> Self {
        let mut h = vec![vec![Poly::zero(p.m()); p.n()]; p.m()];
        h[a][i] = Poly::one(p.m());
        HElement(h)
    }

    /// As a section of 𝔍A.
    pub fn to_jet_section(&self, jp: &JetPresentation) -> Multivector {
        let mut out = jp.jet.zero_mv();
        for (a, row) in self.0.iter().enumerate() {
            for (i, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    out += &jp.jet.blade(&[jp.f(a, i)], c.clone());
                }
            }
        }
        out
    }

    pub fn from_jet_section(jp: &JetPresentation, s: &Multivector) -> Result<Self> {
        let p = &jp.base;
        let mut h = vec![vec![Poly::zero(p.m()); p.n()]; p.m()];
        for (b, c) in s.terms() {
            match b.as_slice() {
                [g] => match jp.split(*g) {
                    Ok((a, i)) => h[a][i] = c.clone(),
                    Err(_) => return Err(Error::Malformed("section has a J component".into())),
                },
                _ => return Err(Error::Malformed("expected a section of degree 1".into())),
            }
        }
        Ok(HElement(h))
    }
}

/// µ_π(H) = (H⊗id)π = Σ_a H(∂_a)∧π_a.
pub fn mu_pi(p: &Presentation, pi: &RhoTensor, h: &HElement) -> Multivector {
    let mut out = p.zero_mv();
    for (a, row) in h.0.iter().enumerate() {
        let mut image = p.zero_mv();
        for (i, c) in row.iter().enumerate() {
            if !c.is_zero() {
                image += &p.e(i).mul_poly(c);
            }
        }
        out += &image.wedge(&pi.comps[a]);
    }
    out
}

/// χ on the J-frame together with π; the F-values are (−1)^{k−1}π_a∧e_i
/// unless given explicitly (extended form).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPair {
    pub k: usize,
    pub chi_j: Vec<Multivector>,
    pub pi: RhoTensor,
    /// Explicit χ(F_{a,i}), indexed a·n + i.
    pub explicit_f: Option<Vec<Multivector>>,
}

impl CharPair {
    pub fn new(k: usize, chi_j: Vec<Multivector>, pi: RhoTensor) -> Self {
        CharPair {
            k,
            chi_j,
            pi,
            explicit_f: None,
        }
    }

    fn check_shape(&self, p: &Presentation) -> Result<()> {
        if self.chi_j.len() != p.n() || self.pi.comps.len() != p.m() || self.pi.k != self.k {
            return Err(Error::Malformed(
                "characteristic pair has wrong shape".into(),
            ));
        }
        if let Some(f) = &self.explicit_f {
            if f.len() != p.m() * p.n() {
                return Err(Error::Malformed(
                    "explicit F-values have wrong length".into(),
                ));
            }
        }
        for w in self.chi_j.iter().chain(self.explicit_f.iter().flatten()) {
            p.check_host(w)?;
        }
        Ok(())
    }

    pub fn f_value(&self, p: &Presentation, a: usize, i: usize) -> Multivector {
        if let Some(f) = &self.explicit_f {
            return f[a * p.n() + i].clone();
        }
        let v = self.pi.comps[a].wedge(&p.e(i));
        if self.k.is_multiple_of(2) {
            -v
        } else {
            v
        }
    }

    /// The cochain on the whole jet frame.
    pub fn to_cochain(&self, jp: &JetPresentation) -> OneCochain {
        let p = &jp.base;
        let mut values = self.chi_j.clone();
        for a in 0..p.m() {
            for i in 0..p.n() {
                values.push(self.f_value(p, a, i));
            }
        }
        OneCochain { values }
    }

    /// Extended form with the F-values made explicit.
    pub fn extended(&self, p: &Presentation) -> Self {
        let f = (0..p.m())
            .flat_map(|a| (0..p.n()).map(move |i| (a, i)))
            .map(|(a, i)| self.f_value(p, a, i))
            .collect();
        CharPair {
            explicit_f: Some(f),
            ..self.clone()
        }
    }

    /// Extended form read off a cochain on the jet frame; π is recovered
    /// from the F-values.
    pub fn from_cochain(jp: &JetPresentation, k: usize, chi: &OneCochain) -> Result<Self> {
        let p = &jp.base;
        if chi.values.len() != jp.jet.n() {
            return Err(Error::Arity {
                expected: jp.jet.n(),
                got: chi.values.len(),
            });
        }
        let f: Vec<Multivector> = chi.values[p.n()..].to_vec();
        let pi = recover_pi(p, k, &f)?;
        Ok(CharPair {
            k,
            chi_j: chi.values[..p.n()].to_vec(),
            pi,
            explicit_f: Some(f),
        })
    }

    pub fn render(&self, p: &Presentation) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = self
            .chi_j
            .iter()
            .enumerate()
            .map(|(i, v)| (format!("chi(J_{})", p.frame()[i]), p.render(v)))
            .collect();
        out.push(("pi".into(), self.pi.render(p)));
        out
    }
}

/// π_a = 1/(n−k+1) Σ_i ι_{e^i} χ(F_{a,i}).
fn recover_pi(p: &Presentation, k: usize, f: &[Multivector]) -> Result<RhoTensor> {
    let n = p.n();
    if k == 0 || k > n {
        return Err(Error::DegreeOutOfRange(format!(
            "characteristic pairs need 1 <= k <= {n}"
        )));
    }
    let scale = Rational::new(1.into(), ((n - k + 1) as i64).into());
    let comps = (0..p.m())
        .map(|a| {
            let mut s = p.zero_mv();
            for i in 0..n {
                s += &f[a * n + i].interior_gen(i);
            }
            s.scale(&scale)
        })
        .collect();
    Ok(RhoTensor { k, comps })
}

fn check_ordinary(p: &Presentation, k: usize) -> Result<()> {
    if k == 0 || k > p.top() {
        return Err(Error::DegreeOutOfRange(format!(
            "k = {k} is outside 1..={}",
            p.top()
        )));
    }
    Ok(())
}

pub fn char_pair_from_differential(p: &Presentation, d: &KDifferential) -> Result<CharPair> {
    check_ordinary(p, d.k)?;
    let report = validate_k_differential(p, d)?;
    if !report.passed() {
        return Err(Error::Validation(format!("not a {}-differential", d.k)));
    }
    Ok(CharPair::new(d.k, d.delta0.clone(), d.rho_tensor()))
}

pub fn differential_from_char_pair(jp: &JetPresentation, cp: &CharPair) -> Result<KDifferential> {
    let report = char_pair_cocycle_check(jp, cp)?;
    if !report.passed() {
        let first = report
            .checks()
            .into_iter()
            .flat_map(|c| {
                c.residuals
                    .iter()
                    .map(move |r| format!("{} at {}", c.name, r.location))
            })
            .next()
            .unwrap_or_default();
        return Err(Error::CocycleFail(first));
    }
    let p = &jp.base;
    let mut d = KDifferential::zero(p, cp.k);
    d.delta0 = cp.chi_j.clone();
    d.delta1 = cp.pi.symbol();
    Ok(d)
}

/// χ = −d_{𝔍A}τ, π = D_ρτ.
pub fn exact_char_pair(jp: &JetPresentation, tau: &Multivector) -> Result<CharPair> {
    let p = &jp.base;
    p.check_host(tau)?;
    let k = tau
        .homogeneous_degree()
        .ok_or_else(|| Error::WrongBidegree("section is not homogeneous".into()))?;
    check_ordinary(p, k)?;
    let chi = d_a(&JetAdjoint { jet: jp, k }, tau).neg();
    let pi = crate::differentials::d_rho_tau(p, tau)?;
    Ok(CharPair::new(k, chi.values[..p.n()].to_vec(), pi))
}

/// −d_{𝔍A}τ on the whole jet frame.
pub fn exact_cochain(jp: &JetPresentation, tau: &Multivector) -> OneCochain {
    let k = tau.homogeneous_degree().unwrap_or(0);
    d_a(&JetAdjoint { jet: jp, k }, tau).neg()
}

#[derive(Clone, Debug, Serialize)]
pub struct CharPairReport {
    pub cocycle: Check,
    pub rho_compatibility: Check,
    pub uniqueness: Check,
}

impl CharPairReport {
    pub fn passed(&self) -> bool {
        self.checks().iter().all(|c| c.passed())
    }

    pub fn checks(&self) -> Vec<&Check> {
        vec![&self.cocycle, &self.rho_compatibility, &self.uniqueness]
    }
}

/// The cocycle condition over 𝔍A, ρ-compatibility of π, and the
/// re-derivation of π from the F-values.
pub fn char_pair_cocycle_check(jp: &JetPresentation, cp: &CharPair) -> Result<CharPairReport> {
    let p = &jp.base;
    cp.check_shape(p)?;
    check_ordinary(p, cp.k)?;
    let action = JetAdjoint { jet: jp, k: cp.k };
    let mut cocycle = ce_coboundary_residual(&action, &cp.to_cochain(jp))?;
    cocycle.name = "cocycle".into();
    let f: Vec<Multivector> = (0..p.m())
        .flat_map(|a| (0..p.n()).map(move |i| (a, i)))
        .map(|(a, i)| cp.f_value(p, a, i))
        .collect();
    let recovered = recover_pi(p, cp.k, &f)?;
    let mut uniqueness = Check::new("uniqueness");
    for a in 0..p.m() {
        let r = &recovered.comps[a] - &cp.pi.comps[a];
        uniqueness.expect_zero(format!("pi along d/{}", p.coords()[a]), r.is_zero(), || {
            p.render(&r)
        });
    }
    Ok(CharPairReport {
        cocycle,
        rho_compatibility: rho_compat_check(p, &cp.pi),
        uniqueness,
    })
}

/// χ|_𝔥 = µ_π on every F_{a,i}.
pub fn pullback_membership(p: &Presentation, cp: &CharPair) -> Result<Check> {
    cp.check_shape(p)?;
    let mut c = Check::new("pullback");
    for a in 0..p.m() {
        for i in 0..p.n() {
            let r = cp.f_value(p, a, i) - mu_pi(p, &cp.pi, &HElement::basis(p, a, i));
            c.expect_zero(
                format!("F_{}_{}", p.coords()[a], p.frame()[i]),
                r.is_zero(),
                || p.render(&r),
            );
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests;
