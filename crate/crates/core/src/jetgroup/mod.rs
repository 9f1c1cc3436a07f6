//! The isotropy jet group at a point: elements 1 + H with H: T_xM → A_x,
//! acting on ∧•(T_xM ⊕ A_x), and the group cocycle U_π.

mod scalar;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;

pub use scalar::{Dual, GMat, Scalar};

use crate::algebroid::{b_pi, Blade, Presentation};
use crate::differentials::RhoTensor;
use crate::error::{Error, Result};
use crate::exactcore::{Rational, RationalMatrix};
use crate::random::{self, TestRng};

/// A presentation evaluated at a rational base point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointContext {
    pub host: String,
    pub point: Vec<Rational>,
    /// ρ(e_i) = Σ_a anchor_at_x[i][a] ∂_a.
    pub anchor_at_x: RationalMatrix,
    pub m: usize,
    pub n: usize,
}

impl PointContext {
    pub fn new(p: &Presentation, point: &[Rational]) -> Result<Arc<Self>> {
        if point.len() != p.m() {
            return Err(Error::Malformed(format!(
                "point has {} coordinates, base has {}",
                point.len(),
                p.m()
            )));
        }
        let mut r = RationalMatrix::zeros(p.n(), p.m());
        for i in 0..p.n() {
            for a in 0..p.m() {
                r[(i, a)] = p.anchor(i)[a].eval(point);
            }
        }
        Ok(Arc::new(PointContext {
            host: p.name.clone(),
            point: point.to_vec(),
            anchor_at_x: r,
            m: p.m(),
            n: p.n(),
        }))
    }

    /// ρ_x as a map A_x → T_xM (m×n).
    fn rho<S: Scalar>(&self) -> GMat<S> {
        GMat::from_rational(&self.anchor_at_x.transpose())
    }

    fn check(&self, p: &Presentation) -> Result<()> {
        if p.name != self.host || p.m() != self.m || p.n() != self.n {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }
}

/// 1 + H with H: T_xM → A_x stored as an n×m matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct JetGroupElement {
    pub ctx: Arc<PointContext>,
    pub h: RationalMatrix,
}

impl JetGroupElement {
    pub fn new(ctx: &Arc<PointContext>, h: RationalMatrix) -> Result<Self> {
        if h.rows() != ctx.n || h.cols() != ctx.m {
            return Err(Error::Malformed(format!("H must be {}x{}", ctx.n, ctx.m)));
        }
        let g = JetGroupElement {
            ctx: ctx.clone(),
            h,
        };
        if g.twist::<Rational>().inverse().is_none() {
            return Err(Error::Singular);
        }
        Ok(g)
    }

    pub fn identity(ctx: &Arc<PointContext>) -> Self {
        JetGroupElement {
            ctx: ctx.clone(),
            h: RationalMatrix::zeros(ctx.n, ctx.m),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.h.is_zero()
    }

    fn hg<S: Scalar>(&self) -> GMat<S> {
        GMat::from_rational(&self.h)
    }

    /// 1 + ρH on T_xM.
    fn twist<S: Scalar>(&self) -> GMat<S> {
        twist(&self.ctx.rho(), &self.hg())
    }
}

fn twist<S: Scalar>(rho: &GMat<S>, h: &GMat<S>) -> GMat<S> {
    GMat::identity(rho.rows()).add(&rho.mul(h))
}

fn same_ctx(a: &JetGroupElement, b: &JetGroupElement) -> Result<()> {
    if a.ctx != b.ctx {
        return Err(Error::ContextMismatch);
    }
    Ok(())
}

fn mul_h<S: Scalar>(rho: &GMat<S>, h1: &GMat<S>, h2: &GMat<S>) -> GMat<S> {
    h1.add(h2).add(&h1.mul(rho).mul(h2))
}

fn inv_h<S: Scalar>(rho: &GMat<S>, h: &GMat<S>) -> Option<GMat<S>> {
    Some(h.mul(&twist(rho, h).inverse()?).neg())
}

/// (1 + H₁)(1 + H₂) = 1 + H₁ + H₂ + H₁ρH₂.
pub fn jg_mul(g1: &JetGroupElement, g2: &JetGroupElement) -> Result<JetGroupElement> {
    same_ctx(g1, g2)?;
    let h = mul_h(&g1.ctx.rho(), &g1.hg(), &g2.hg());
    JetGroupElement::new(&g1.ctx, h.to_rational())
}

/// (1 + H)⁻¹ = 1 − H(1 + ρH)⁻¹.
pub fn jg_inv(g: &JetGroupElement) -> Result<JetGroupElement> {
    let h = inv_h(&g.ctx.rho(), &g.hg()).ok_or(Error::Singular)?;
    JetGroupElement::new(&g.ctx, h.to_rational())
}

/// An element of ∧•(T_xM ⊕ A_x); generators 0..m are ∂_a, m + i are e_i.
#[derive(Clone, Debug, PartialEq)]
pub struct PointTensor<S: Scalar = Rational> {
    pub m: usize,
    pub n: usize,
    pub terms: BTreeMap<Blade, S>,
}

impl<S: Scalar> PointTensor<S> {
    pub fn zero(m: usize, n: usize) -> Self {
        PointTensor {
            m,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(m: usize, n: usize, c: S) -> Self {
        Self::blade(m, n, &[], c)
    }

    pub fn tm(m: usize, n: usize, a: usize) -> Self {
        Self::blade(m, n, &[a], S::one())
    }

    pub fn a(m: usize, n: usize, i: usize) -> Self {
        Self::blade(m, n, &[m + i], S::one())
    }

    /// c · v_{idx[0]}∧…; indices need not be sorted.
    pub fn blade(m: usize, n: usize, idx: &[usize], c: S) -> Self {
        let mut out = Self::zero(m, n);
        let mut sorted = idx.to_vec();
        let mut sign = false;
        for i in 0..sorted.len() {
            for j in 0..sorted.len() - 1 - i {
                if sorted[j] > sorted[j + 1] {
                    sorted.swap(j, j + 1);
                    sign = !sign;
                }
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return out;
        }
        out.add_term(sorted, if sign { -c } else { c });
        out
    }

    pub fn from_rational(t: &PointTensor<Rational>) -> Self {
        PointTensor {
            m: t.m,
            n: t.n,
            terms: t
                .terms
                .iter()
                .map(|(b, c)| (b.clone(), S::from_rational(c)))
                .collect(),
        }
    }

    fn add_term(&mut self, b: Blade, c: S) {
        if c.is_zero() {
            return;
        }
        let v = match self.terms.remove(&b) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(b, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.m, self.n);
        for (b, v) in &self.terms {
            out.add_term(b.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.m, self.n);
        for (b1, c1) in &self.terms {
            for (b2, c2) in &other.terms {
                let idx: Vec<usize> = b1.iter().chain(b2).copied().collect();
                out = out.add(&Self::blade(self.m, self.n, &idx, c1.clone() * c2.clone()));
            }
        }
        out
    }

    /// Extend the generator images as an algebra morphism.
    pub fn morphism(&self, images: &[Self]) -> Self {
        let mut out = Self::zero(self.m, self.n);
        for (b, c) in &self.terms {
            let mut acc = Self::scalar(self.m, self.n, c.clone());
            for &g in b {
                acc = acc.wedge(&images[g]);
            }
            out = out.add(&acc);
        }
        out
    }

    /// Part with at least one T_xM leg.
    pub fn tm_part(&self) -> Self {
        PointTensor {
            m: self.m,
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.iter().any(|&g| g < self.m))
                .map(|(b, c)| (b.clone(), c.clone()))
                .collect(),
        }
    }

    /// Blades of a tensor in ∧•A_x, reindexed to the frame of A.
    pub fn a_blades(&self) -> BTreeMap<Blade, S> {
        self.terms
            .iter()
            .filter(|(b, _)| b.iter().all(|&g| g >= self.m))
            .map(|(b, c)| (b.iter().map(|g| g - self.m).collect(), c.clone()))
            .collect()
    }
}

fn column<S: Scalar>(
    m: usize,
    n: usize,
    mat: &GMat<S>,
    col: usize,
    offset: usize,
) -> PointTensor<S> {
    let mut out = PointTensor::zero(m, n);
    for r in 0..mat.rows() {
        out = out.add(&PointTensor::blade(
            m,
            n,
            &[offset + r],
            mat.get(r, col).clone(),
        ));
    }
    out
}

/// L: ∂_a ↦ ∂_a + H∂_a, e_i ↦ e_i + Hρe_i.
fn left_images<S: Scalar>(rho: &GMat<S>, h: &GMat<S>) -> Vec<PointTensor<S>> {
    let (m, n) = (rho.rows(), rho.cols());
    let mut out = Vec::with_capacity(m + n);
    for a in 0..m {
        out.push(PointTensor::tm(m, n, a).add(&column(m, n, h, a, m)));
    }
    let a_map = GMat::identity(n).add(&h.mul(rho));
    for i in 0..n {
        out.push(column(m, n, &a_map, i, m));
    }
    out
}

/// R: ∂_a ↦ (1+ρH)⁻¹∂_a + H(1+ρH)⁻¹∂_a, e_i ↦ e_i.
fn right_images<S: Scalar>(rho: &GMat<S>, h: &GMat<S>) -> Option<Vec<PointTensor<S>>> {
    let (m, n) = (rho.rows(), rho.cols());
    let inv = twist(rho, h).inverse()?;
    let hi = h.mul(&inv);
    let mut out = Vec::with_capacity(m + n);
    for a in 0..m {
        out.push(column(m, n, &inv, a, 0).add(&column(m, n, &hi, a, m)));
    }
    for i in 0..n {
        out.push(PointTensor::a(m, n, i));
    }
    Some(out)
}

/// Ad: ∂ ↦ (1+ρH)∂, e ↦ (1+Hρ)e.
fn ad_images<S: Scalar>(rho: &GMat<S>, h: &GMat<S>) -> Vec<PointTensor<S>> {
    let (m, n) = (rho.rows(), rho.cols());
    let t = twist(rho, h);
    let a_map = GMat::identity(n).add(&h.mul(rho));
    let mut out = Vec::with_capacity(m + n);
    for a in 0..m {
        out.push(column(m, n, &t, a, 0));
    }
    for i in 0..n {
        out.push(column(m, n, &a_map, i, m));
    }
    out
}

fn check_tensor(g: &JetGroupElement, w: &PointTensor) -> Result<()> {
    if w.m != g.ctx.m || w.n != g.ctx.n {
        return Err(Error::ContextMismatch);
    }
    Ok(())
}

pub fn jg_left_translate(g: &JetGroupElement, w: &PointTensor) -> Result<PointTensor> {
    check_tensor(g, w)?;
    Ok(w.morphism(&left_images(&g.ctx.rho(), &g.hg())))
}

pub fn jg_right_translate(g: &JetGroupElement, w: &PointTensor) -> Result<PointTensor> {
    check_tensor(g, w)?;
    let images = right_images(&g.ctx.rho(), &g.hg()).ok_or(Error::Singular)?;
    Ok(w.morphism(&images))
}

pub fn jg_ad(g: &JetGroupElement, w: &PointTensor) -> Result<PointTensor> {
    check_tensor(g, w)?;
    Ok(w.morphism(&ad_images(&g.ctx.rho(), &g.hg())))
}

/// (Bπ)_x as a pointwise tensor.
pub fn b_pi_at(p: &Presentation, pi: &RhoTensor, ctx: &PointContext) -> Result<PointTensor> {
    ctx.check(p)?;
    let b = b_pi(p, &pi.to_mixed(p), pi.k)?;
    Ok(PointTensor {
        m: p.m(),
        n: p.n(),
        terms: b.inner().eval(&ctx.point),
    })
}

fn u_pi_generic<S: Scalar>(
    bpi: &PointTensor<Rational>,
    rho: &GMat<S>,
    h: &GMat<S>,
) -> Result<PointTensor<S>> {
    let b = PointTensor::<S>::from_rational(bpi);
    let u = b.sub(&b.morphism(&left_images(rho, h)));
    let stray = u.tm_part();
    if !stray.is_zero() {
        return Err(Error::NotInWedgeA(format!(
            "{} terms with a T_xM leg",
            stray.terms.len()
        )));
    }
    Ok(u)
}

/// U_π(g) = (Bπ)_x − L_g(Bπ)_x, which must lie in ∧^k A_x.
pub fn u_pi(p: &Presentation, pi: &RhoTensor, g: &JetGroupElement) -> Result<PointTensor> {
    let bpi = b_pi_at(p, pi, &g.ctx)?;
    u_pi_generic(&bpi, &g.ctx.rho(), &g.hg())
}

/// U_π(g₁g₂) − U_π(g₁) − Ad_{g₁}U_π(g₂).
pub fn u_pi_cocycle_residual(
    p: &Presentation,
    pi: &RhoTensor,
    g1: &JetGroupElement,
    g2: &JetGroupElement,
) -> Result<PointTensor> {
    let g12 = jg_mul(g1, g2)?;
    let u12 = u_pi(p, pi, &g12)?;
    let u1 = u_pi(p, pi, g1)?;
    let u2 = jg_ad(g1, &u_pi(p, pi, g2)?)?;
    Ok(u12.sub(&u1).sub(&u2))
}

/// The ε-coefficient of U_π((1 + εH)⁻¹).
pub fn u_pi_infinitesimal(
    p: &Presentation,
    pi: &RhoTensor,
    ctx: &Arc<PointContext>,
    h: &RationalMatrix,
) -> Result<PointTensor> {
    if h.rows() != ctx.n || h.cols() != ctx.m {
        return Err(Error::Malformed(format!("H must be {}x{}", ctx.n, ctx.m)));
    }
    let bpi = b_pi_at(p, pi, ctx)?;
    let eps_h = GMat::<Dual>::from_rational(h).scale(&Dual::eps());
    let rho = ctx.rho::<Dual>();
    let inv = inv_h(&rho, &eps_h).ok_or(Error::Singular)?;
    let u = u_pi_generic(&bpi, &rho, &inv)?;
    Ok(PointTensor {
        m: u.m,
        n: u.n,
        terms: u
            .terms
            .into_iter()
            .filter(|(_, c)| !Zero::is_zero(&c.eps))
            .map(|(b, c)| (b, c.eps))
            .collect(),
    })
}

/// H as an element of 𝔥 for `mu_pi`.
pub fn h_element(p: &Presentation, h: &RationalMatrix) -> crate::jet::HElement {
    crate::jet::HElement(
        (0..p.m())
            .map(|a| {
                (0..p.n())
                    .map(|i| crate::exactcore::Poly::constant(p.m(), h[(i, a)].clone()))
                    .collect()
            })
            .collect(),
    )
}

/// Random H with small rational entries, redrawn until 1 + ρH is invertible.
pub fn random_element(rng: &mut TestRng, ctx: &Arc<PointContext>) -> JetGroupElement {
    loop {
        let mut h = RationalMatrix::zeros(ctx.n, ctx.m);
        for i in 0..ctx.n {
            for a in 0..ctx.m {
                if rng.gen_bool(0.7) {
                    h[(i, a)] = random::small_rational(rng);
                }
            }
        }
        if let Ok(g) = JetGroupElement::new(ctx, h) {
            return g;
        }
    }
}

/// Random element of ∧•(T_xM ⊕ A_x) of total degree `deg`.
pub fn random_tensor(rng: &mut TestRng, m: usize, n: usize, deg: usize) -> PointTensor {
    let mut out = PointTensor::zero(m, n);
    for s in crate::algebroid::subsets(m + n, deg) {
        if rng.gen_bool(0.5) {
            out = out.add(&PointTensor::blade(m, n, &s, random::small_rational(rng)));
        }
    }
    out
}

#[cfg(test)]
mod tests;
