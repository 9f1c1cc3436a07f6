use std::collections::BTreeMap;

use serde::Serialize;

use super::kdiff::{exact_differential, residual_values, DiffKey, KDifferential, Slot};
use crate::algebroid::{
    lie_algebra_h1, subsets, CoefficientModule, H1Report, Multivector, Presentation,
};
use crate::error::{Error, Result};
use crate::exactcore::{
    combine_sparse, kernel_sparse, solve_sparse, Flattener, Monomial, Poly, Rational,
};

/// Every x^α e_I with |I| = k and |α| ≤ d.
pub fn section_basis(p: &Presentation, k: usize, d: u32) -> Vec<Multivector> {
    let monos = Monomial::up_to_degree(p.m(), d);
    let mut out = Vec::new();
    for s in subsets(p.n(), k) {
        for mono in &monos {
            out.push(p.blade(
                &s,
                Poly::monomial(mono.clone(), Rational::from_integer(1.into())),
            ));
        }
    }
    out
}

/// Some τ with coefficient degree ≤ d and [τ, ·] = δ on generators.
pub fn exactness_witness(
    p: &Presentation,
    d: &KDifferential,
    bound: u32,
) -> Result<Option<Multivector>> {
    d.check_shape(p)?;
    if d.k > p.top() {
        return Ok(if d.is_zero() { Some(p.zero_mv()) } else { None });
    }
    let basis = section_basis(p, d.k, bound);
    let cols = basis
        .iter()
        .map(|t| exact_differential(p, t).map(|e| e.coords()))
        .collect::<Result<Vec<_>>>()?;
    let Some(x) = solve_sparse(&cols, &d.coords()) else {
        return Ok(None);
    };
    let mut tau = p.zero_mv();
    for (c, t) in x.iter().zip(&basis) {
        if !num_traits::Zero::is_zero(c) {
            tau += &t.scale(c);
        }
    }
    Ok(Some(tau))
}

/// Some τ with δ′ − δ = [τ, ·].
pub fn equivalence_witness(
    p: &Presentation,
    d: &KDifferential,
    d2: &KDifferential,
    bound: u32,
) -> Result<Option<Multivector>> {
    if d.k != d2.k {
        return Err(Error::WrongBidegree(format!(
            "degrees {} and {} differ",
            d.k, d2.k
        )));
    }
    exactness_witness(p, &d2.sub(d), bound)
}

/// Basis of the k-differentials whose generating values have coefficient
/// degree ≤ d.
pub fn valid_differential_basis(p: &Presentation, k: usize, d: u32) -> Result<Vec<KDifferential>> {
    if k > p.top() + 1 {
        return Err(Error::DegreeOutOfRange(format!(
            "k = {k} exceeds top + 1 = {}",
            p.top() + 1
        )));
    }
    let monos = Monomial::up_to_degree(p.m(), d);
    let mut params: Vec<BTreeMap<DiffKey, Rational>> = Vec::new();
    let one = Rational::from_integer(1.into());
    let mut push = |slot: Slot, q: usize| {
        for s in subsets(p.n(), q) {
            for mono in &monos {
                params.push(BTreeMap::from([(
                    (slot, s.clone(), mono.clone()),
                    one.clone(),
                )]));
            }
        }
    };
    if k <= p.top() {
        for i in 0..p.n() {
            push(Slot::Section(i), k);
        }
    }
    if k > 0 {
        for a in 0..p.m() {
            push(Slot::Coord(a), k - 1);
        }
    }
    let residual_cols: Vec<BTreeMap<(usize, Vec<usize>, Monomial), Rational>> = params
        .iter()
        .map(|c| {
            let delta = KDifferential::from_coords(p, k, c);
            let mut col = BTreeMap::new();
            for (idx, (_, _, r)) in residual_values(p, &delta).into_iter().enumerate() {
                for (b, f) in r.terms() {
                    for (mono, v) in f.terms() {
                        col.insert((idx, b.clone(), mono.clone()), v.clone());
                    }
                }
            }
            col
        })
        .collect();
    Ok(kernel_sparse(params.len(), &residual_cols)
        .iter()
        .map(|x| KDifferential::from_coords(p, k, &combine_sparse(x, &params)))
        .collect())
}

/// R^k_diff at point base, as H¹(g, ∧^k g).
pub fn reduced_space_point_base(p: &Presentation, k: usize) -> Result<H1Report> {
    if !p.is_point_base() {
        return Err(Error::NotPointBase(p.m()));
    }
    if k > p.top() + 1 {
        return Err(Error::DegreeOutOfRange(format!(
            "k = {k} exceeds top + 1 = {}",
            p.top() + 1
        )));
    }
    if k > p.n() {
        return Ok(H1Report {
            dim_z1: 0,
            dim_b1: 0,
            dim_h1: 0,
            representatives: Vec::new(),
        });
    }
    lie_algebra_h1(p, CoefficientModule::AdjointWedge(k))
}

#[derive(Clone, Debug, Serialize)]
pub struct TruncatedReduced {
    pub k: usize,
    pub degree_bound: u32,
    /// Valid k-differentials with coefficient degree ≤ d.
    pub dim_valid: usize,
    /// Those that are [τ, ·] for some τ of degree ≤ d + 1.
    pub dim_exact: usize,
    pub dim: usize,
}

/// Valid k-differentials of coefficient degree ≤ d modulo the exact ones
/// [τ, ·] with deg τ ≤ d + 1.
pub fn reduced_space_bounded(p: &Presentation, k: usize, d: u32) -> Result<TruncatedReduced> {
    let valid: Vec<_> = valid_differential_basis(p, k, d)?
        .iter()
        .map(KDifferential::coords)
        .collect();
    let exact: Vec<_> = if k <= p.top() {
        section_basis(p, k, d + 1)
            .iter()
            .map(|t| exact_differential(p, t).map(|e| e.coords()))
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    let mut f = Flattener::new();
    let b = f.matrix(&exact);
    let all: Vec<_> = exact.iter().chain(&valid).cloned().collect();
    let zb = f.matrix(&all);
    let rank_b = if exact.is_empty() { 0 } else { b.rank() };
    let rank_zb = if all.is_empty() { 0 } else { zb.rank() };
    let dim = rank_zb - rank_b;
    Ok(TruncatedReduced {
        k,
        degree_bound: d,
        dim_valid: valid.len(),
        dim_exact: valid.len() - dim,
        dim,
    })
}
