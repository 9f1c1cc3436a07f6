//! Chevalley–Eilenberg 1-cochains with values in sections of ∧^k A.

use std::collections::BTreeMap;

use serde::Serialize;

use super::mixed::contract_rho;
use super::multivector::Blade;
use super::schouten::schouten;
use super::{Multivector, Presentation};
use crate::check::Check;
use crate::error::{Error, Result};
use crate::exactcore::{
    combine_sparse, kernel_sparse, quotient_basis, solve_sparse, Flattener, Monomial, Poly,
    Rational,
};

/// A representation of an algebroid `B` on sections of ∧^k of some bundle `A`.
///
/// `act(i, w)` is ∇_{b_i} w for the i-th frame section of `B`.
pub trait Action {
    fn acting(&self) -> &Presentation;
    fn host(&self) -> &Presentation;
    fn degree(&self) -> usize;
    fn act(&self, gen: usize, w: &Multivector) -> Multivector;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientModule {
    TrivialR,
    AdjointWedge(usize),
    /// ∧^k of the span of a declared constant frame of ker ρ.
    KernelWedge {
        k: usize,
        frame: Vec<Multivector>,
    },
}

impl CoefficientModule {
    pub fn degree(&self) -> usize {
        match self {
            CoefficientModule::TrivialR => 0,
            CoefficientModule::AdjointWedge(k) => *k,
            CoefficientModule::KernelWedge { k, .. } => *k,
        }
    }

    pub fn validate(&self, p: &Presentation) -> Result<()> {
        if self.degree() > p.n() {
            return Err(Error::ModuleInvariant(format!(
                "degree {} exceeds rank {}",
                self.degree(),
                p.n()
            )));
        }
        if let CoefficientModule::KernelWedge { frame, .. } = self {
            for (s, u) in frame.iter().enumerate() {
                p.check_host(u)?;
                if u.homogeneous_degree() != Some(1) || u.is_zero() {
                    return Err(Error::ModuleInvariant(format!(
                        "kernel frame element {} is not a section",
                        s + 1
                    )));
                }
                if u.coeff_degree() > 0 {
                    return Err(Error::ModuleInvariant(format!(
                        "kernel frame element {} is not constant",
                        s + 1
                    )));
                }
                for a in 0..p.m() {
                    if !contract_rho(p, a, u).is_zero() {
                        return Err(Error::ModuleInvariant(format!(
                            "kernel frame element {} is not in ker rho",
                            s + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Constant sections spanning the fiber of the module.
    pub fn fiber_basis(&self, p: &Presentation) -> Vec<Multivector> {
        match self {
            CoefficientModule::TrivialR => vec![p.scalar(Poly::one(p.m()))],
            CoefficientModule::AdjointWedge(k) => subsets(p.n(), *k)
                .into_iter()
                .map(|s| p.blade(&s, Poly::one(p.m())))
                .collect(),
            CoefficientModule::KernelWedge { k, frame } => subsets(frame.len(), *k)
                .into_iter()
                .map(|s| {
                    s.iter()
                        .fold(p.scalar(Poly::one(p.m())), |acc, &i| acc.wedge(&frame[i]))
                })
                .filter(|w| !w.is_zero())
                .collect(),
        }
    }

    /// Whether `w` is a C∞-combination of [`Self::fiber_basis`].
    pub fn contains(&self, p: &Presentation, w: &Multivector) -> bool {
        match self {
            CoefficientModule::KernelWedge { .. } => {
                let basis = self.fiber_basis(p);
                let mut per_mono: BTreeMap<Monomial, BTreeMap<Blade, Rational>> = BTreeMap::new();
                for (b, c) in w.terms() {
                    for (mono, r) in c.terms() {
                        per_mono
                            .entry(mono.clone())
                            .or_default()
                            .insert(b.clone(), r.clone());
                    }
                }
                let cols: Vec<BTreeMap<Blade, Rational>> = basis
                    .iter()
                    .map(|u| {
                        u.terms()
                            .map(|(b, c)| (b.clone(), c.constant_term()))
                            .collect()
                    })
                    .collect();
                per_mono
                    .values()
                    .all(|target| solve_sparse(&cols, target).is_some())
            }
            _ => w.homogeneous_degree() == Some(self.degree()),
        }
    }
}

/// All increasing k-subsets of 0..n.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// The module of an algebroid on its own ∧^k A (or a submodule), acting by
/// the Schouten bracket.
pub struct ModuleAction<'a> {
    pub presentation: &'a Presentation,
    pub module: CoefficientModule,
}

impl<'a> ModuleAction<'a> {
    pub fn new(presentation: &'a Presentation, module: CoefficientModule) -> Result<Self> {
        module.validate(presentation)?;
        Ok(ModuleAction {
            presentation,
            module,
        })
    }
}

impl Action for ModuleAction<'_> {
    fn acting(&self) -> &Presentation {
        self.presentation
    }

    fn host(&self) -> &Presentation {
        self.presentation
    }

    fn degree(&self) -> usize {
        self.module.degree()
    }

    fn act(&self, gen: usize, w: &Multivector) -> Multivector {
        schouten(self.presentation, &self.presentation.e(gen), w).expect("same host")
    }
}

/// A bundle map from the acting algebroid into the module, given on its frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneCochain {
    pub values: Vec<Multivector>,
}

impl OneCochain {
    pub fn zero(action: &dyn Action) -> Self {
        OneCochain {
            values: vec![action.host().zero_mv(); action.acting().n()],
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        OneCochain {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        OneCochain {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        OneCochain {
            values: self.values.iter().map(|a| -a).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Multivector::is_zero)
    }

    /// Coordinates keyed by (frame slot, blade, monomial).
    pub fn coords(&self) -> BTreeMap<(usize, Blade, Monomial), Rational> {
        let mut out = BTreeMap::new();
        for (i, v) in self.values.iter().enumerate() {
            for (b, c) in v.terms() {
                for (mono, r) in c.terms() {
                    out.insert((i, b.clone(), mono.clone()), r.clone());
                }
            }
        }
        out
    }
}

/// d_A ν: u ↦ ∇_u ν.
pub fn d_a(action: &dyn Action, nu: &Multivector) -> OneCochain {
    OneCochain {
        values: (0..action.acting().n())
            .map(|i| action.act(i, nu))
            .collect(),
    }
}

/// Residuals χ[b_i,b_j] − ∇_{b_i}χ(b_j) + ∇_{b_j}χ(b_i) for i < j.
pub fn ce_coboundary_residual(action: &dyn Action, chi: &OneCochain) -> Result<Check> {
    let b = action.acting();
    let host = action.host();
    if chi.values.len() != b.n() {
        return Err(Error::Arity {
            expected: b.n(),
            got: chi.values.len(),
        });
    }
    for v in &chi.values {
        host.check_host(v)?;
    }
    let mut check = Check::new("cocycle");
    for i in 0..b.n() {
        for j in i + 1..b.n() {
            let mut r = host.zero_mv();
            for (k, c) in b.structure(i, j).iter().enumerate() {
                if !c.is_zero() {
                    r += &chi.values[k].mul_poly(c);
                }
            }
            r -= &action.act(i, &chi.values[j]);
            r += &action.act(j, &chi.values[i]);
            check.expect_zero(
                format!("({}, {})", b.frame()[i], b.frame()[j]),
                r.is_zero(),
                || host.render(&r),
            );
        }
    }
    Ok(check)
}

/// Residual check that also verifies the values lie in the module.
pub fn ce_check_in_module(ma: &ModuleAction<'_>, chi: &OneCochain) -> Result<Check> {
    for (i, v) in chi.values.iter().enumerate() {
        if !ma.module.contains(ma.presentation, v) {
            return Err(Error::ModuleInvariant(format!(
                "value on {} is not in the coefficient module",
                ma.presentation.frame()[i]
            )));
        }
    }
    ce_coboundary_residual(ma, chi)
}

#[derive(Clone, Debug, Serialize)]
pub struct H1Report {
    pub dim_z1: usize,
    pub dim_b1: usize,
    pub dim_h1: usize,
    /// Representative cocycles, rendered per frame section.
    pub representatives: Vec<Vec<String>>,
}

/// Exact H¹(g, V) for a Lie algebra (point base) with coefficients in V.
pub fn lie_algebra_h1(p: &Presentation, module: CoefficientModule) -> Result<H1Report> {
    if !p.is_point_base() {
        return Err(Error::NotPointBase(p.m()));
    }
    let action = ModuleAction::new(p, module)?;
    let basis = action.module.fiber_basis(p);
    let n = p.n();
    let mut params = Vec::new();
    for i in 0..n {
        for v in &basis {
            let mut c = OneCochain::zero(&action);
            c.values[i] = v.clone();
            params.push(c);
        }
    }
    let residual_cols: Vec<BTreeMap<(usize, usize, Blade), Rational>> = params
        .iter()
        .map(|c| {
            let mut col = BTreeMap::new();
            for i in 0..n {
                for j in i + 1..n {
                    let mut r = p.zero_mv();
                    for (k, s) in p.structure(i, j).iter().enumerate() {
                        r += &c.values[k].mul_poly(s);
                    }
                    r -= &action.act(i, &c.values[j]);
                    r += &action.act(j, &c.values[i]);
                    for (b, v) in r.terms() {
                        col.insert((i, j, b.clone()), v.constant_term());
                    }
                }
            }
            col
        })
        .collect();
    let param_coords: Vec<_> = params.iter().map(OneCochain::coords).collect();
    let z: Vec<_> = kernel_sparse(params.len(), &residual_cols)
        .iter()
        .map(|x| combine_sparse(x, &param_coords))
        .collect();
    let b: Vec<_> = basis.iter().map(|v| d_a(&action, v).coords()).collect();
    let mut flat = Flattener::new();
    for col in param_coords.iter().chain(&b) {
        for k in col.keys() {
            flat.register(k);
        }
    }
    let zm = flat.matrix(&z);
    let bm = flat.matrix(&b);
    let reps = quotient_basis(&zm, &bm)?;
    let keys = flat.keys();
    let representatives = reps
        .iter()
        .map(|v| {
            let mut c = OneCochain::zero(&action);
            for (idx, r) in v.iter().enumerate() {
                if num_traits::Zero::is_zero(r) {
                    continue;
                }
                let (slot, blade, _) = &keys[idx];
                c.values[*slot] += &p.blade(blade, Poly::constant(0, r.clone()));
            }
            c.values.iter().map(|w| p.render(w)).collect()
        })
        .collect();
    Ok(H1Report {
        dim_z1: zm.rank(),
        dim_b1: bm.rank(),
        dim_h1: reps.len(),
        representatives,
    })
}
