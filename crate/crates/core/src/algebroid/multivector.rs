//! Sparse elements of a free exterior algebra over a polynomial ring.
//!
//! The same type serves for Γ(∧•A) (generators = frame sections) and, wrapped
//! in [`super::MixedTensor`], for ∧•(TM ⊕ A).

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_traits::Zero;

use crate::exactcore::{Poly, Rational};

/// Strictly increasing generator indices.
pub type Blade = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multivector {
    num_vars: usize,
    num_gens: usize,
    terms: BTreeMap<Blade, Poly>,
}

/// Sign of the permutation sorting `idx`, or `None` if an index repeats.
pub fn sort_sign(idx: &[usize]) -> Option<(i32, Blade)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    Some((sign, v))
}

fn merge_sign(a: &[usize], b: &[usize]) -> Option<(i32, Blade)> {
    let mut inversions = 0usize;
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            inversions += a.len() - i;
            out.push(b[j]);
            j += 1;
        } else {
            return None;
        }
    }
    Some((if inversions.is_multiple_of(2) { 1 } else { -1 }, out))
}

impl Multivector {
    pub fn zero(num_vars: usize, num_gens: usize) -> Self {
        Multivector {
            num_vars,
            num_gens,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(f: Poly, num_gens: usize) -> Self {
        let mut m = Self::zero(f.num_vars(), num_gens);
        m.add_term(Vec::new(), f);
        m
    }

    pub fn generator(num_vars: usize, num_gens: usize, i: usize) -> Self {
        assert!(i < num_gens, "generator {i} out of range {num_gens}");
        let mut m = Self::zero(num_vars, num_gens);
        m.add_term(vec![i], Poly::one(num_vars));
        m
    }

    /// `coeff · g_{i_1} ∧ … ∧ g_{i_q}` for indices in any order.
    pub fn blade(num_vars: usize, num_gens: usize, idx: &[usize], coeff: Poly) -> Self {
        let mut m = Self::zero(num_vars, num_gens);
        assert!(
            idx.iter().all(|&i| i < num_gens),
            "blade index out of range"
        );
        if let Some((s, b)) = sort_sign(idx) {
            m.add_term(b, if s < 0 { -coeff } else { coeff });
        }
        m
    }

    pub fn from_terms(
        num_vars: usize,
        num_gens: usize,
        terms: impl IntoIterator<Item = (Blade, Poly)>,
    ) -> Self {
        let mut m = Self::zero(num_vars, num_gens);
        for (b, p) in terms {
            let part = Self::blade(num_vars, num_gens, &b, p);
            m += &part;
        }
        m
    }

    fn add_term(&mut self, blade: Blade, coeff: Poly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&blade) {
            Some(c) => {
                *c += &coeff;
                if c.is_zero() {
                    self.terms.remove(&blade);
                }
            }
            None => {
                self.terms.insert(blade, coeff);
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_gens(&self) -> usize {
        self.num_gens
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &Poly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, blade: &[usize]) -> Poly {
        self.terms
            .get(blade)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.num_vars))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn same_space(&self, other: &Self) -> bool {
        self.num_vars == other.num_vars && self.num_gens == other.num_gens
    }

    /// The degree if all terms share one, `Some(0)` for zero.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Vec::len);
        match it.next() {
            None => Some(0),
            Some(d) => it.all(|e| e == d).then_some(d),
        }
    }

    pub fn component(&self, q: usize) -> Self {
        Multivector {
            num_vars: self.num_vars,
            num_gens: self.num_gens,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.len() == q)
                .map(|(b, p)| (b.clone(), p.clone()))
                .collect(),
        }
    }

    /// Largest polynomial degree among the coefficients (0 for the zero element).
    pub fn coeff_degree(&self) -> u32 {
        self.terms
            .values()
            .filter_map(Poly::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_vars, self.num_gens);
        }
        self.map_coeffs(|p| p.scale(c))
    }

    pub fn mul_poly(&self, f: &Poly) -> Self {
        self.map_coeffs(|p| p * f)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        let mut out = Self::zero(self.num_vars, self.num_gens);
        for (b, p) in &self.terms {
            out.add_term(b.clone(), f(p));
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert!(
            self.same_space(other),
            "wedge of elements from different spaces"
        );
        let mut out = Self::zero(self.num_vars, self.num_gens);
        for (a, p) in &self.terms {
            for (b, r) in &other.terms {
                if let Some((s, blade)) = merge_sign(a, b) {
                    let c = p * r;
                    out.add_term(blade, if s < 0 { -c } else { c });
                }
            }
        }
        out
    }

    /// Interior product by the covector with the given values on generators:
    /// ι(v_1∧…∧v_q) = Σ_s (−1)^s ξ(v_s) v_1∧…v̂_s…∧v_q.
    pub fn interior(&self, covector: &[Poly]) -> Self {
        assert_eq!(covector.len(), self.num_gens, "covector length");
        let mut out = Self::zero(self.num_vars, self.num_gens);
        for (b, p) in &self.terms {
            for (s, &g) in b.iter().enumerate() {
                if covector[g].is_zero() {
                    continue;
                }
                let mut rest = b.clone();
                rest.remove(s);
                let c = p * &covector[g];
                out.add_term(rest, if s % 2 == 1 { -c } else { c });
            }
        }
        out
    }

    /// Interior product by the dual basis covector of generator `g`.
    pub fn interior_gen(&self, g: usize) -> Self {
        let mut out = Self::zero(self.num_vars, self.num_gens);
        for (b, p) in &self.terms {
            if let Some(s) = b.iter().position(|&x| x == g) {
                let mut rest = b.clone();
                rest.remove(s);
                out.add_term(rest, if s % 2 == 1 { -p.clone() } else { p.clone() });
            }
        }
        out
    }

    /// Extend generator images as a degree-0 derivation that kills functions.
    /// Images must be homogeneous of degree 1 and may live in another space.
    pub fn derivation(&self, images: &[Multivector], target_gens: usize) -> Self {
        assert_eq!(images.len(), self.num_gens, "one image per generator");
        let mut out = Self::zero(self.num_vars, target_gens);
        for (b, p) in &self.terms {
            for s in 0..b.len() {
                let img = &images[b[s]];
                if img.is_zero() {
                    continue;
                }
                let mut acc = Self::scalar(p.clone(), target_gens);
                for (t, &g) in b.iter().enumerate() {
                    let factor = if t == s {
                        img.clone()
                    } else {
                        Self::generator(self.num_vars, target_gens, g)
                    };
                    acc = acc.wedge(&factor);
                }
                out += &acc;
            }
        }
        out
    }

    /// Extend generator images as an algebra morphism that fixes functions.
    pub fn morphism(&self, images: &[Multivector], target_gens: usize) -> Self {
        assert_eq!(images.len(), self.num_gens, "one image per generator");
        let mut out = Self::zero(self.num_vars, target_gens);
        for (b, p) in &self.terms {
            let mut acc = Self::scalar(p.clone(), target_gens);
            for &g in b {
                acc = acc.wedge(&images[g]);
                if acc.is_zero() {
                    break;
                }
            }
            out += &acc;
        }
        out
    }

    /// Relabel generators through an injective index map into a larger space.
    pub fn relabel(&self, map: impl Fn(usize) -> usize, target_gens: usize) -> Self {
        let mut out = Self::zero(self.num_vars, target_gens);
        for (b, p) in &self.terms {
            let idx: Vec<usize> = b.iter().map(|&g| map(g)).collect();
            let part = Self::blade(self.num_vars, target_gens, &idx, p.clone());
            out += &part;
        }
        out
    }

    /// Pointwise evaluation of all coefficients.
    pub fn eval(&self, point: &[Rational]) -> BTreeMap<Blade, Rational> {
        self.terms
            .iter()
            .map(|(b, p)| (b.clone(), p.eval(point)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    pub fn render(&self, coord_names: &[String], gen_names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (b, p) in &self.terms {
            let blade = b
                .iter()
                .map(|&g| gen_names[g].as_str())
                .collect::<Vec<_>>()
                .join("^");
            let coeff = p.render(coord_names);
            let piece = if b.is_empty() {
                coeff
            } else if coeff == "1" {
                blade
            } else if coeff == "-1" {
                format!("-{blade}")
            } else if p.num_terms() == 1 {
                format!("{coeff}*{blade}")
            } else {
                format!("({coeff})*{blade}")
            };
            parts.push(piece);
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            if let Some(stripped) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(stripped);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        s
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert!(
            self.same_space(rhs),
            "sum of elements from different spaces"
        );
        for (b, p) in &rhs.terms {
            self.add_term(b.clone(), p.clone());
        }
    }
}

impl SubAssign<&Multivector> for Multivector {
    fn sub_assign(&mut self, rhs: &Multivector) {
        assert!(
            self.same_space(rhs),
            "difference of elements from different spaces"
        );
        for (b, p) in &rhs.terms {
            self.add_term(b.clone(), -p);
        }
    }
}

impl Add<&Multivector> for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Multivector> for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(mut self, rhs: Multivector) -> Multivector {
        self += &rhs;
        self
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(mut self, rhs: Multivector) -> Multivector {
        self -= &rhs;
        self
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.map_coeffs(|p| -p)
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::q;

    fn gen(i: usize) -> Multivector {
        Multivector::generator(0, 3, i)
    }

    #[test]
    fn wedge_anticommutes() {
        let a = gen(0).wedge(&gen(1));
        let b = gen(1).wedge(&gen(0));
        assert_eq!(a, -b);
        assert!(gen(2).wedge(&gen(2)).is_zero());
    }

    #[test]
    fn interior_leading_sign() {
        let w = gen(0).wedge(&gen(1));
        assert_eq!(w.interior_gen(0), gen(1));
        assert_eq!(w.interior_gen(1), -gen(0));
    }

    #[test]
    fn derivation_and_morphism() {
        let w = gen(0).wedge(&gen(1));
        let images = vec![gen(2), Multivector::zero(0, 3), Multivector::zero(0, 3)];
        assert_eq!(w.derivation(&images, 3), gen(2).wedge(&gen(1)));
        let id: Vec<_> = (0..3).map(gen).collect();
        assert_eq!(w.morphism(&id, 3), w);
    }

    #[test]
    fn scale_by_zero_is_zero() {
        assert!(gen(0).scale(&q(0)).is_zero());
    }

    #[test]
    fn blade_sorting_sign() {
        let b = Multivector::blade(0, 3, &[2, 0], Poly::one(0));
        assert_eq!(b, -gen(0).wedge(&gen(2)));
        assert_eq!(sort_sign(&[1, 1]), None);
    }
}
