use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebroid::{
    contract, contract_rho, d_rho, schouten, Blade, Covector, MixedTensor, Multivector,
    Presentation,
};
use crate::check::Check;
use crate::deform::{derivation_from_values, MultiDerivation};
use crate::error::{Error, Result};
use crate::exactcore::{Monomial, Poly, Rational};

/// A degree-(k−1) derivation of Γ(∧•A) given by δ^{(0)}(e_i) ∈ ∧^k A and
/// δ^{(1)}(x_a) ∈ ∧^{k−1} A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KDifferential {
    pub k: usize,
    pub delta0: Vec<Multivector>,
    pub delta1: Vec<Multivector>,
}

/// π ∈ Γ(TM ⊗ ∧^{k−1} A), stored by the components π_a = ι_{dx_a} π.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoTensor {
    pub k: usize,
    pub comps: Vec<Multivector>,
}

/// Slot of a differential's generating table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slot {
    Section(usize),
    Coord(usize),
}

pub type DiffKey = (Slot, Blade, Monomial);

impl KDifferential {
    pub fn zero(p: &Presentation, k: usize) -> Self {
        KDifferential {
            k,
            delta0: vec![p.zero_mv(); p.n()],
            delta1: if k == 0 {
                Vec::new()
            } else {
                vec![p.zero_mv(); p.m()]
            },
        }
    }

    pub fn check_shape(&self, p: &Presentation) -> Result<()> {
        if self.k > p.top() + 1 {
            return Err(Error::DegreeOutOfRange(format!(
                "k = {} exceeds top + 1 = {}",
                self.k,
                p.top() + 1
            )));
        }
        let expect1 = if self.k == 0 { 0 } else { p.m() };
        if self.delta0.len() != p.n() || self.delta1.len() != expect1 {
            return Err(Error::Malformed(format!(
                "differential needs {} section values and {} coordinate values",
                p.n(),
                expect1
            )));
        }
        for (v, q) in self
            .delta0
            .iter()
            .map(|v| (v, self.k))
            .chain(self.delta1.iter().map(|v| (v, self.k.saturating_sub(1))))
        {
            p.check_host(v)?;
            if !v.is_zero() && v.homogeneous_degree() != Some(q) {
                return Err(Error::WrongBidegree(format!("value must be of degree {q}")));
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        KDifferential {
            k: self.k,
            delta0: self
                .delta0
                .iter()
                .zip(&other.delta0)
                .map(|(a, b)| a + b)
                .collect(),
            delta1: self
                .delta1
                .iter()
                .zip(&other.delta1)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        KDifferential {
            k: self.k,
            delta0: self
                .delta0
                .iter()
                .zip(&other.delta0)
                .map(|(a, b)| a - b)
                .collect(),
            delta1: self
                .delta1
                .iter()
                .zip(&other.delta1)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        KDifferential {
            k: self.k,
            delta0: self.delta0.iter().map(|a| a.scale(c)).collect(),
            delta1: self.delta1.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.delta0
            .iter()
            .chain(&self.delta1)
            .all(Multivector::is_zero)
    }

    pub fn coeff_degree(&self) -> u32 {
        self.delta0
            .iter()
            .chain(&self.delta1)
            .map(Multivector::coeff_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn coords(&self) -> BTreeMap<DiffKey, Rational> {
        let mut out = BTreeMap::new();
        let slots = self
            .delta0
            .iter()
            .enumerate()
            .map(|(i, v)| (Slot::Section(i), v))
            .chain(
                self.delta1
                    .iter()
                    .enumerate()
                    .map(|(a, v)| (Slot::Coord(a), v)),
            );
        for (slot, v) in slots {
            for (b, c) in v.terms() {
                for (mono, r) in c.terms() {
                    out.insert((slot, b.clone(), mono.clone()), r.clone());
                }
            }
        }
        out
    }

    pub fn from_coords(p: &Presentation, k: usize, coords: &BTreeMap<DiffKey, Rational>) -> Self {
        let mut d = Self::zero(p, k);
        for ((slot, blade, mono), r) in coords {
            let term = p.blade(blade, Poly::monomial(mono.clone(), r.clone()));
            match slot {
                Slot::Section(i) => d.delta0[*i] += &term,
                Slot::Coord(a) => d.delta1[*a] += &term,
            }
        }
        d
    }

    /// δ on a function: Σ_a ∂_a f · δ^{(1)}(x_a).
    pub fn apply_function(&self, p: &Presentation, f: &Poly) -> Multivector {
        let mut out = p.zero_mv();
        for (a, v) in self.delta1.iter().enumerate() {
            let da = f.d(a);
            if !da.is_zero() {
                out += &v.mul_poly(&da);
            }
        }
        out
    }

    /// δ on a section Σ f_i e_i: Σ δ(f_i)∧e_i + f_i δ^{(0)}(e_i).
    pub fn apply_section(&self, p: &Presentation, u: &Multivector) -> Multivector {
        let mut out = p.zero_mv();
        for (b, f) in u.terms() {
            assert_eq!(b.len(), 1, "apply_section expects a section of A");
            let i = b[0];
            out += &self.apply_function(p, f).wedge(&p.e(i));
            out += &self.delta0[i].mul_poly(f);
        }
        out
    }

    /// The 0-cochain of bidegree (0, k−1) with the same generating values.
    pub fn to_multiderivation(&self, p: &Presentation) -> Result<MultiDerivation> {
        derivation_from_values(p, self.k as i64 - 1, &self.delta0, &self.delta1)
    }

    /// π with δ^{(1)}(f) = (−1)^{k−1} ι_{df} π.
    pub fn rho_tensor(&self) -> RhoTensor {
        let sign = if self.k.is_multiple_of(2) { -1 } else { 1 };
        RhoTensor {
            k: self.k,
            comps: self
                .delta1
                .iter()
                .map(|v| if sign < 0 { -v } else { v.clone() })
                .collect(),
        }
    }

    pub fn render(&self, p: &Presentation) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = self
            .delta0
            .iter()
            .enumerate()
            .map(|(i, v)| (format!("delta({})", p.frame()[i]), p.render(v)))
            .collect();
        out.extend(
            self.delta1
                .iter()
                .enumerate()
                .map(|(a, v)| (format!("delta({})", p.coords()[a]), p.render(v))),
        );
        out
    }
}

impl RhoTensor {
    pub fn zero(p: &Presentation, k: usize) -> Self {
        RhoTensor {
            k,
            comps: vec![p.zero_mv(); p.m()],
        }
    }

    pub fn from_mixed(p: &Presentation, k: usize, w: &MixedTensor) -> Result<Self> {
        if k == 0 || !w.is_homogeneous(1, k - 1) {
            return Err(Error::WrongBidegree(format!(
                "expected (1, {}) tensor",
                k.saturating_sub(1)
            )));
        }
        Ok(RhoTensor {
            k,
            comps: w.tm_components(p),
        })
    }

    pub fn to_mixed(&self, p: &Presentation) -> MixedTensor {
        MixedTensor::from_components(p, &self.comps)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Multivector::is_zero)
    }

    pub fn sub(&self, other: &Self) -> Self {
        RhoTensor {
            k: self.k,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// The differential symbol δ^{(1)}(x_a) = (−1)^{k−1} π_a.
    pub fn symbol(&self) -> Vec<Multivector> {
        let neg = self.k.is_multiple_of(2);
        self.comps
            .iter()
            .map(|v| if neg { -v } else { v.clone() })
            .collect()
    }

    pub fn eval(&self, point: &[Rational]) -> Vec<BTreeMap<Blade, Rational>> {
        self.comps.iter().map(|c| c.eval(point)).collect()
    }

    pub fn render(&self, p: &Presentation) -> String {
        self.to_mixed(p).render(p)
    }
}

/// Residuals ι_{ρ*dx_a}π_b + ι_{ρ*dx_b}π_a for a ≤ b.
pub fn rho_compat_check(p: &Presentation, pi: &RhoTensor) -> Check {
    let mut c = Check::new("rho-compatibility");
    for a in 0..p.m() {
        for b in a..p.m() {
            let r = contract_rho(p, a, &pi.comps[b]) + contract_rho(p, b, &pi.comps[a]);
            c.expect_zero(
                format!("({}, {})", p.coords()[a], p.coords()[b]),
                r.is_zero(),
                || p.render(&r),
            );
        }
    }
    c
}

/// The (1, k−1) component of D_ρ τ.
pub fn d_rho_tau(p: &Presentation, tau: &Multivector) -> Result<RhoTensor> {
    p.check_host(tau)?;
    let k = tau
        .homogeneous_degree()
        .ok_or_else(|| Error::WrongBidegree("section is not homogeneous".into()))?;
    if k == 0 {
        return Ok(RhoTensor::zero(p, 0));
    }
    let w = d_rho(p, &MixedTensor::from_multivector(p, tau));
    let comps = (0..p.m())
        .map(|a| {
            contract(p, Covector::Dx(a), &w)
                .to_multivector(p)
                .expect("one TM leg")
        })
        .collect();
    Ok(RhoTensor { k, comps })
}

#[derive(Clone, Debug, Serialize)]
pub struct KDiffReport {
    pub k: usize,
    pub symbol_condition: Check,
    pub anchor_condition: Check,
    pub bracket_condition: Check,
    /// For 1 ≤ k ≤ top: whether "bracket condition on C∞-multiples ⇒ the
    /// other two" held on this input (`None` outside that range).
    pub implied_consistent: Option<bool>,
}

impl KDiffReport {
    pub fn passed(&self) -> bool {
        self.symbol_condition.passed()
            && self.anchor_condition.passed()
            && self.bracket_condition.passed()
    }

    pub fn checks(&self) -> Vec<&Check> {
        vec![
            &self.symbol_condition,
            &self.anchor_condition,
            &self.bracket_condition,
        ]
    }
}

/// All residuals of a differential, in a fixed order, unrendered.
pub(crate) fn residual_values(
    p: &Presentation,
    d: &KDifferential,
) -> Vec<(u8, String, Multivector)> {
    let mut out = Vec::new();
    let sign_odd = d.k.is_multiple_of(2);
    for a in 0..p.m() {
        for b in a..p.m() {
            if d.k == 0 {
                continue;
            }
            let xa = p.scalar(p.x(a));
            let xb = p.scalar(p.x(b));
            let t1 = schouten(p, &d.delta1[a], &xb).expect("host");
            let t2 = schouten(p, &xa, &d.delta1[b]).expect("host");
            let r = if sign_odd { t1 - t2 } else { t1 + t2 };
            out.push((0, format!("({}, {})", p.coords()[a], p.coords()[b]), r));
        }
    }
    for i in 0..p.n() {
        for a in 0..p.m() {
            let xa = p.scalar(p.x(a));
            let lhs = d.apply_function(p, &p.anchor(i)[a]);
            let r = lhs
                - schouten(p, &d.delta0[i], &xa).expect("host")
                - if d.k == 0 {
                    p.zero_mv()
                } else {
                    schouten(p, &p.e(i), &d.delta1[a]).expect("host")
                };
            out.push((1, format!("({}, {})", p.frame()[i], p.coords()[a]), r));
        }
    }
    for i in 0..p.n() {
        for j in i + 1..p.n() {
            let r = bracket_residual(p, d, &p.e(i), &p.e(j));
            out.push((2, format!("({}, {})", p.frame()[i], p.frame()[j]), r));
        }
    }
    out
}

/// δ[u,v] − [δu, v] − [u, δv] for sections u, v.
fn bracket_residual(
    p: &Presentation,
    d: &KDifferential,
    u: &Multivector,
    v: &Multivector,
) -> Multivector {
    let uv = schouten(p, u, v).expect("host");
    d.apply_section(p, &uv)
        - schouten(p, &d.apply_section(p, u), v).expect("host")
        - schouten(p, u, &d.apply_section(p, v)).expect("host")
}

/// Check the symbol, anchor and bracket conditions of a k-differential.
pub fn validate_k_differential(p: &Presentation, d: &KDifferential) -> Result<KDiffReport> {
    d.check_shape(p)?;
    let mut checks = [
        Check::new("symbol"),
        Check::new("anchor"),
        Check::new("bracket"),
    ];
    for (kind, loc, r) in residual_values(p, d) {
        checks[kind as usize].expect_zero(loc, r.is_zero(), || p.render(&r));
    }
    let [symbol_condition, anchor_condition, bracket_condition] = checks;
    let implied_consistent = (1..=p.top()).contains(&d.k).then(|| {
        let extended = extended_bracket_passes(p, d);
        !extended || (symbol_condition.passed() && anchor_condition.passed())
    });
    Ok(KDiffReport {
        k: d.k,
        symbol_condition,
        anchor_condition,
        bracket_condition,
        implied_consistent,
    })
}

/// The bracket condition on u = e_i, v = x_a e_j and u = x_a e_i, v = x_b e_j
/// as well as on the frame.
fn extended_bracket_passes(p: &Presentation, d: &KDifferential) -> bool {
    let mut sections: Vec<Multivector> = (0..p.n()).map(|i| p.e(i)).collect();
    for a in 0..p.m() {
        for i in 0..p.n() {
            sections.push(p.e(i).mul_poly(&p.x(a)));
        }
    }
    for (s, u) in sections.iter().enumerate() {
        for v in sections.iter().skip(s) {
            if !bracket_residual(p, d, u, v).is_zero() {
                return false;
            }
        }
    }
    true
}

/// δ = [τ, ·] on generators.
pub fn exact_differential(p: &Presentation, tau: &Multivector) -> Result<KDifferential> {
    p.check_host(tau)?;
    let k = tau
        .homogeneous_degree()
        .ok_or_else(|| Error::WrongBidegree("section is not homogeneous".into()))?;
    if k > p.top() {
        return Err(Error::DegreeOutOfRange(format!(
            "k = {k} exceeds top = {}",
            p.top()
        )));
    }
    let mut d = KDifferential::zero(p, k);
    for i in 0..p.n() {
        d.delta0[i] = schouten(p, tau, &p.e(i))?;
    }
    if k > 0 {
        for a in 0..p.m() {
            d.delta1[a] = schouten(p, tau, &p.scalar(p.x(a)))?;
        }
    }
    Ok(d)
}
