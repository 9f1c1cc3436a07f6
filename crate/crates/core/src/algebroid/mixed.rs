//! Mixed tensors in ∧•(TM ⊕ A), with TM legs written before A legs.

use num_traits::One;

use super::{Multivector, Presentation};
use crate::check::Check;
use crate::error::{Error, Result};
use crate::exactcore::{Poly, Rational};

/// Generators `0..m` are ∂/∂x_a, generators `m..m+n` are the frame sections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedTensor {
    m: usize,
    inner: Multivector,
}

/// Covector in the contraction operators: `dx_a` or `ρ*dx_a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Covector {
    Dx(usize),
    RhoDx(usize),
}

fn factorial(j: usize) -> Rational {
    (1..=j).fold(Rational::one(), |acc, i| {
        acc * Rational::from_integer(i.into())
    })
}

impl MixedTensor {
    pub fn zero(p: &Presentation) -> Self {
        MixedTensor {
            m: p.m(),
            inner: Multivector::zero(p.m(), p.m() + p.n()),
        }
    }

    pub fn from_inner(m: usize, inner: Multivector) -> Self {
        assert!(inner.num_gens() >= m);
        MixedTensor { m, inner }
    }

    /// Embed a section of ∧•A.
    pub fn from_multivector(p: &Presentation, w: &Multivector) -> Self {
        let m = p.m();
        MixedTensor {
            m,
            inner: w.relabel(|i| m + i, m + p.n()),
        }
    }

    pub fn tm(p: &Presentation, a: usize) -> Self {
        MixedTensor {
            m: p.m(),
            inner: Multivector::generator(p.m(), p.m() + p.n(), a),
        }
    }

    pub fn a(p: &Presentation, i: usize) -> Self {
        MixedTensor {
            m: p.m(),
            inner: Multivector::generator(p.m(), p.m() + p.n(), p.m() + i),
        }
    }

    /// Σ_a v^a ∂_a for a vector field given by components.
    pub fn vector_field(p: &Presentation, comps: &[Poly]) -> Self {
        let mut out = Self::zero(p);
        for (a, c) in comps.iter().enumerate() {
            out.inner += &Self::tm(p, a).inner.mul_poly(c);
        }
        out
    }

    /// The tensor Σ_a ∂_a ⊗ π_a built from its ι_{dx_a}-components.
    pub fn from_components(p: &Presentation, comps: &[Multivector]) -> Self {
        let mut out = Self::zero(p);
        for (a, c) in comps.iter().enumerate() {
            out = out + Self::tm(p, a).wedge(&Self::from_multivector(p, c));
        }
        out
    }

    pub fn inner(&self) -> &Multivector {
        &self.inner
    }

    pub fn base_dim(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn wrap(&self, inner: Multivector) -> Self {
        MixedTensor { m: self.m, inner }
    }

    /// Bidegrees (p, q) present.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self
            .inner
            .terms()
            .map(|(b, _)| {
                let p = b.iter().filter(|&&g| g < self.m).count();
                (p, b.len() - p)
            })
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn component(&self, p: usize, q: usize) -> Self {
        let m = self.m;
        let inner = Multivector::from_terms(
            self.inner.num_vars(),
            self.inner.num_gens(),
            self.inner
                .terms()
                .filter(|(b, _)| {
                    let tp = b.iter().filter(|&&g| g < m).count();
                    tp == p && b.len() - tp == q
                })
                .map(|(b, c)| (b.clone(), c.clone())),
        );
        self.wrap(inner)
    }

    pub fn is_homogeneous(&self, p: usize, q: usize) -> bool {
        self.bidegrees().iter().all(|&d| d == (p, q))
    }

    /// The A-part as a section of ∧•A, if no TM legs occur.
    pub fn to_multivector(&self, p: &Presentation) -> Option<Multivector> {
        if self
            .inner
            .terms()
            .any(|(b, _)| b.iter().any(|&g| g < self.m))
        {
            return None;
        }
        Some(Multivector::from_terms(
            p.m(),
            p.n(),
            self.inner
                .terms()
                .map(|(b, c)| (b.iter().map(|&g| g - self.m).collect(), c.clone())),
        ))
    }

    /// Terms with exactly `tp` TM legs.
    pub fn tm_part(&self, tp: usize) -> Self {
        let m = self.m;
        let inner = Multivector::from_terms(
            self.inner.num_vars(),
            self.inner.num_gens(),
            self.inner
                .terms()
                .filter(|(b, _)| b.iter().filter(|&&g| g < m).count() == tp)
                .map(|(b, c)| (b.clone(), c.clone())),
        );
        self.wrap(inner)
    }

    /// The components ι_{dx_a} of the part with one TM leg.
    pub fn tm_components(&self, p: &Presentation) -> Vec<Multivector> {
        let one = self.tm_part(1);
        (0..p.m())
            .map(|a| {
                contract(p, Covector::Dx(a), &one)
                    .to_multivector(p)
                    .expect("single TM leg removed")
            })
            .collect()
    }

    pub fn wedge(&self, other: &Self) -> Self {
        self.wrap(self.inner.wedge(&other.inner))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.wrap(self.inner.scale(c))
    }

    pub fn mul_poly(&self, f: &Poly) -> Self {
        self.wrap(self.inner.mul_poly(f))
    }

    pub fn render(&self, p: &Presentation) -> String {
        let names: Vec<String> = p
            .coords()
            .iter()
            .map(|c| format!("d{c}"))
            .chain(p.frame().iter().cloned())
            .collect();
        self.inner.render(p.coords(), &names)
    }
}

impl std::ops::Add for MixedTensor {
    type Output = MixedTensor;
    fn add(mut self, rhs: MixedTensor) -> MixedTensor {
        self.inner += &rhs.inner;
        self
    }
}

impl std::ops::Sub for MixedTensor {
    type Output = MixedTensor;
    fn sub(mut self, rhs: MixedTensor) -> MixedTensor {
        self.inner -= &rhs.inner;
        self
    }
}

impl std::ops::Neg for MixedTensor {
    type Output = MixedTensor;
    fn neg(self) -> MixedTensor {
        let inner = -&self.inner;
        MixedTensor { m: self.m, inner }
    }
}

/// ι_{dx_a} pairs a TM leg; ι_{ρ*dx_a} pairs an A leg with ρ.
pub fn contract(p: &Presentation, xi: Covector, w: &MixedTensor) -> MixedTensor {
    let m = p.m();
    let mut cov = vec![p.poly_zero(); m + p.n()];
    match xi {
        Covector::Dx(a) => cov[a] = Poly::one(m),
        Covector::RhoDx(a) => {
            for i in 0..p.n() {
                cov[m + i] = p.anchor(i)[a].clone();
            }
        }
    }
    w.wrap(w.inner.interior(&cov))
}

/// Contraction of a section of ∧•A with ρ*dx_a.
pub fn contract_rho(p: &Presentation, a: usize, w: &Multivector) -> Multivector {
    w.interior(&p.rho_dx(a))
}

/// The degree-0 derivation sending e_i to ρ(e_i) and TM legs to zero.
pub fn d_rho(p: &Presentation, w: &MixedTensor) -> MixedTensor {
    let m = p.m();
    let gens = m + p.n();
    let mut images = vec![Multivector::zero(m, gens); gens];
    for i in 0..p.n() {
        images[m + i] = MixedTensor::vector_field(p, p.anchor(i)).inner;
    }
    w.wrap(w.inner.derivation(&images, gens))
}

pub fn d_rho_pow(p: &Presentation, w: &MixedTensor, j: usize) -> MixedTensor {
    (0..j).fold(w.clone(), |acc, _| d_rho(p, &acc))
}

/// Bπ = Σ_{j<k} (−1)^j/(j+1)! D_ρ^j π for π of bidegree (1, k−1).
pub fn b_pi(p: &Presentation, pi: &MixedTensor, k: usize) -> Result<MixedTensor> {
    if k == 0 || (!pi.is_zero() && !pi.is_homogeneous(1, k - 1)) {
        return Err(Error::WrongBidegree(format!(
            "expected a (1, {}) tensor, found {:?}",
            k.saturating_sub(1),
            pi.bidegrees()
        )));
    }
    let mut out = MixedTensor::zero(p);
    let mut term = pi.clone();
    for j in 0..k {
        let mut c = factorial(j + 1).recip();
        if j % 2 == 1 {
            c = -c;
        }
        out = out + term.scale(&c);
        term = d_rho(p, &term);
    }
    Ok(out)
}

/// The automorphism induced by (X, u) ↦ (X + ρ(u), −u), computed on each
/// (p, q) component as (−1)^q Σ_{j≤q} (−1)^j/j! D_ρ^j W.
pub fn inv_star(p: &Presentation, w: &MixedTensor) -> MixedTensor {
    let mut out = MixedTensor::zero(p);
    for (tp, q) in w.bidegrees() {
        let comp = w.component(tp, q);
        let mut acc = MixedTensor::zero(p);
        let mut term = comp;
        for j in 0..=q {
            let mut c = factorial(j).recip();
            if (j + q) % 2 == 1 {
                c = -c;
            }
            acc = acc + term.scale(&c);
            term = d_rho(p, &term);
        }
        out = out + acc;
    }
    out
}

/// The same automorphism obtained by extending the degree-1 map multiplicatively.
pub fn inv_star_direct(p: &Presentation, w: &MixedTensor) -> MixedTensor {
    let m = p.m();
    let gens = m + p.n();
    let mut images: Vec<Multivector> = (0..m).map(|a| MixedTensor::tm(p, a).inner).collect();
    for i in 0..p.n() {
        images.push(MixedTensor::vector_field(p, p.anchor(i)).inner - MixedTensor::a(p, i).inner);
    }
    w.wrap(w.inner.morphism(&images, gens))
}

/// The contraction identities of a ρ-compatible π of type TM ⊗ ∧^{k−1}A:
/// ι_{ρ*dx} D_ρ^{j−1}π = D_ρ^j ι_{dx}π = ι_{dx} D_ρ^j π / (j+1) for 1 ≤ j < k,
/// ι_{dx}Bπ = (−1)^{k−1} inv_*(ι_{dx}π) and ι_{dx}Bπ + ι_{ρ*dx}Bπ = ι_{dx}π.
pub fn compat_identities(p: &Presentation, pi: &MixedTensor, k: usize) -> Result<Check> {
    let b = b_pi(p, pi, k)?;
    let mut check = Check::new("compat_identities");
    let coord = |a: usize| p.coords()[a].clone();
    for a in 0..p.m() {
        let ip = contract(p, Covector::Dx(a), pi);
        for j in 1..k {
            let lhs = contract(p, Covector::RhoDx(a), &d_rho_pow(p, pi, j - 1));
            let mid = d_rho_pow(p, &ip, j);
            let rhs = contract(p, Covector::Dx(a), &d_rho_pow(p, pi, j))
                .scale(&Rational::from_integer((j as i64 + 1).into()).recip());
            let r1 = lhs - mid.clone();
            check.expect_zero(
                format!("rho-contraction, d{}, j = {j}", coord(a)),
                r1.is_zero(),
                || r1.render(p),
            );
            let r2 = mid - rhs;
            check.expect_zero(
                format!("dx-contraction, d{}, j = {j}", coord(a)),
                r2.is_zero(),
                || r2.render(p),
            );
        }
        let ib = contract(p, Covector::Dx(a), &b);
        let mut inv = inv_star(p, &ip);
        if k.is_multiple_of(2) {
            inv = -inv;
        }
        let r3 = ib.clone() - inv;
        check.expect_zero(format!("B inverse, d{}", coord(a)), r3.is_zero(), || {
            r3.render(p)
        });
        let r4 = ib + contract(p, Covector::RhoDx(a), &b) - ip;
        check.expect_zero(format!("B sum, d{}", coord(a)), r4.is_zero(), || {
            r4.render(p)
        });
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::fixtures;
    use crate::exactcore::qf;

    #[test]
    fn contract_examples() {
        let p = fixtures::tan1();
        let w = MixedTensor::tm(&p, 0).wedge(&MixedTensor::a(&p, 0));
        assert_eq!(contract(&p, Covector::Dx(0), &w), MixedTensor::a(&p, 0));
        let e1 = MixedTensor::a(&p, 0);
        let one = MixedTensor::from_multivector(&p, &p.scalar(Poly::one(1)));
        assert_eq!(contract(&p, Covector::RhoDx(0), &e1), one);
        let t = fixtures::tan2();
        let w = MixedTensor::tm(&t, 0).wedge(&MixedTensor::tm(&t, 1));
        assert_eq!(contract(&t, Covector::Dx(0), &w), MixedTensor::tm(&t, 1));
    }

    #[test]
    fn d_rho_examples() {
        let p = fixtures::tan1();
        assert_eq!(d_rho(&p, &MixedTensor::a(&p, 0)), MixedTensor::tm(&p, 0));
        let t = fixtures::tan2();
        let w = MixedTensor::tm(&t, 0).wedge(&MixedTensor::a(&t, 1));
        let expect = MixedTensor::tm(&t, 0).wedge(&MixedTensor::tm(&t, 1));
        assert_eq!(d_rho(&t, &w), expect);
        let b = fixtures::bla();
        assert!(d_rho(&b, &MixedTensor::a(&b, 1)).is_zero());
    }

    #[test]
    fn b_pi_examples() {
        let t = fixtures::tan2();
        let pi = MixedTensor::tm(&t, 0).wedge(&MixedTensor::a(&t, 1));
        let dd = MixedTensor::tm(&t, 0).wedge(&MixedTensor::tm(&t, 1));
        assert_eq!(b_pi(&t, &pi, 2).unwrap(), pi.clone() - dd.scale(&qf(1, 2)));
        let p = fixtures::tan1();
        let pi = MixedTensor::tm(&p, 0);
        assert_eq!(b_pi(&p, &pi, 1).unwrap(), pi);
        assert!(matches!(b_pi(&p, &pi, 2), Err(Error::WrongBidegree(_))));
    }

    #[test]
    fn inv_star_examples() {
        let p = fixtures::tan1();
        let e1 = MixedTensor::a(&p, 0);
        let dx = MixedTensor::tm(&p, 0);
        assert_eq!(inv_star(&p, &e1), dx.clone() - e1.clone());
        assert_eq!(inv_star(&p, &dx), dx);
        let t = fixtures::tan2();
        let w = MixedTensor::a(&t, 0).wedge(&MixedTensor::a(&t, 1));
        assert_eq!(inv_star(&t, &inv_star(&t, &w)), w);
        assert_eq!(inv_star(&t, &w), inv_star_direct(&t, &w));
    }

    #[test]
    fn compat_identities_hold_on_exact_tensors() {
        let mut rng = crate::random::rng(21);
        for p in [fixtures::tan2(), fixtures::ati(), fixtures::bla_x()] {
            for k in 1..=p.top() {
                let tau = crate::random::multivector(&mut rng, &p, k, 2);
                let pi = d_rho(&p, &MixedTensor::from_multivector(&p, &tau));
                let c = compat_identities(&p, &pi, k).unwrap();
                assert!(c.passed(), "{} k={k}: {:?}", p.name, c.residuals);
            }
        }
        let t = fixtures::tan1();
        let bad = MixedTensor::tm(&t, 0)
            .wedge(&MixedTensor::a(&t, 0))
            .mul_poly(&t.x(0));
        assert!(!compat_identities(&t, &bad, 2).unwrap().passed());
    }
}
