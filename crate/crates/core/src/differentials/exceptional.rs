use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::kdiff::{validate_k_differential, KDiffReport, KDifferential, RhoTensor};
use crate::algebroid::Presentation;
use crate::error::{Error, Result};
use crate::exactcore::{
    combine_sparse, kernel_sparse, quotient_dimension, Flattener, Monomial, Poly, Rational,
};

#[derive(Clone, Debug, Serialize)]
pub struct PointVerdict {
    pub point: Vec<String>,
    pub anchor_vanishes: bool,
    /// tr ad_{e_i} at the point, one per frame section.
    pub traces: Vec<String>,
    pub pi_vanishes: bool,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TopPlusOneReport {
    pub points: Vec<PointVerdict>,
    pub differential: KDiffReport,
    pub valid: bool,
    /// First sample point where the pointwise condition failed.
    pub witness: Option<Vec<String>>,
}

/// Trace of ad_{e_i} at a point: Σ_k c_{ik}^k(x).
pub fn ad_traces(p: &Presentation, point: &[Rational]) -> Vec<Rational> {
    (0..p.n())
        .map(|i| {
            (0..p.n())
                .filter(|&k| k != i)
                .map(|k| {
                    if i < k {
                        p.structure(i, k)[k].eval(point)
                    } else {
                        -p.structure(k, i)[k].eval(point)
                    }
                })
                .fold(Rational::zero(), |acc, c| acc + c)
        })
        .collect()
}

/// Pointwise verdict for a (top+1)-differential with δ^{(0)} = 0 and symbol
/// π, together with the symbolic residuals.
pub fn classify_top_plus_one(
    p: &Presentation,
    pi: &RhoTensor,
    points: &[Vec<Rational>],
) -> Result<TopPlusOneReport> {
    if pi.k != p.top() + 1 || pi.comps.len() != p.m() {
        return Err(Error::WrongBidegree(format!(
            "expected a (1, {}) tensor",
            p.top()
        )));
    }
    for pt in points {
        if pt.len() != p.m() {
            return Err(Error::Malformed(format!(
                "point has {} coordinates, base has {}",
                pt.len(),
                p.m()
            )));
        }
    }
    let mut delta = KDifferential::zero(p, pi.k);
    delta.delta1 = pi.symbol();
    let differential = validate_k_differential(p, &delta)?;
    let mut verdicts = Vec::new();
    let mut witness = None;
    for pt in points {
        let anchor_vanishes = (0..p.n()).all(|i| p.anchor(i).iter().all(|f| f.eval(pt).is_zero()));
        let traces = ad_traces(p, pt);
        let pi_vanishes = pi.eval(pt).iter().all(|c| c.values().all(Zero::is_zero));
        let forced = !anchor_vanishes || traces.iter().any(|t| !t.is_zero());
        let ok = !forced || pi_vanishes;
        let point: Vec<String> = pt.iter().map(|r| r.to_string()).collect();
        if !ok && witness.is_none() {
            witness = Some(point.clone());
        }
        verdicts.push(PointVerdict {
            point,
            anchor_vanishes,
            traces: traces.iter().map(|t| t.to_string()).collect(),
            pi_vanishes,
            ok,
        });
    }
    let valid = witness.is_none() && differential.passed();
    Ok(TopPlusOneReport {
        points: verdicts,
        differential,
        valid,
        witness,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TruncatedH1 {
    pub degree_bound: u32,
    pub dim_closed: usize,
    pub dim_exact: usize,
    pub dim: usize,
}

type CochainKey = (usize, Monomial);

/// Closed 1-cochains with coefficients of degree ≤ d modulo the exact ones
/// d_A f (deg f ≤ d + 1) that stay in that truncation.
pub fn h1_trivial_coeffs_bounded(p: &Presentation, d: u32) -> Result<TruncatedH1> {
    let n = p.n();
    let m = p.m();
    let monos = Monomial::up_to_degree(m, d);
    let one = Rational::from_integer(1.into());
    let mut params: Vec<BTreeMap<CochainKey, Rational>> = Vec::new();
    for i in 0..n {
        for mono in &monos {
            params.push(BTreeMap::from([((i, mono.clone()), one.clone())]));
        }
    }
    let to_values = |c: &BTreeMap<CochainKey, Rational>| {
        let mut v = vec![Poly::zero(m); n];
        for ((i, mono), r) in c {
            v[*i] = &v[*i] + &Poly::monomial(mono.clone(), r.clone());
        }
        v
    };
    let residual_cols: Vec<BTreeMap<(usize, usize, Monomial), Rational>> = params
        .iter()
        .map(|c| {
            let chi = to_values(c);
            let mut col = BTreeMap::new();
            for i in 0..n {
                for j in i + 1..n {
                    let mut r = Poly::zero(m);
                    for (k, s) in p.structure(i, j).iter().enumerate() {
                        r = &r + &(s * &chi[k]);
                    }
                    r = &r - &p.anchor_apply(i, &chi[j]);
                    r = &r + &p.anchor_apply(j, &chi[i]);
                    for (mono, v) in r.terms() {
                        col.insert((i, j, mono.clone()), v.clone());
                    }
                }
            }
            col
        })
        .collect();
    let closed: Vec<_> = kernel_sparse(params.len(), &residual_cols)
        .iter()
        .map(|x| combine_sparse(x, &params))
        .collect();

    // d_A f = (ρ_i f)_i; keep the combinations with no terms above degree d.
    let exact_all: Vec<BTreeMap<CochainKey, Rational>> = Monomial::up_to_degree(m, d + 1)
        .into_iter()
        .map(|mono| {
            let f = Poly::monomial(mono, one.clone());
            let mut col = BTreeMap::new();
            for i in 0..n {
                for (mo, v) in p.anchor_apply(i, &f).terms() {
                    col.insert((i, mo.clone()), v.clone());
                }
            }
            col
        })
        .collect();
    let high: Vec<BTreeMap<CochainKey, Rational>> = exact_all
        .iter()
        .map(|c| {
            c.iter()
                .filter(|((_, mo), _)| mo.degree() > d)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect()
        })
        .collect();
    let exact: Vec<_> = kernel_sparse(exact_all.len(), &high)
        .iter()
        .map(|x| combine_sparse(x, &exact_all))
        .collect();

    let mut flat = Flattener::new();
    for col in params.iter().chain(&exact) {
        for k in col.keys() {
            flat.register(k);
        }
    }
    let zm = flat.matrix(&closed);
    let bm = flat.matrix(&exact);
    let dim = quotient_dimension(&zm, &bm)?;
    Ok(TruncatedH1 {
        degree_bound: d,
        dim_closed: closed.len(),
        dim_exact: bm.rank(),
        dim,
    })
}
