use serde::Serialize;

use super::schouten::schouten;
use super::Multivector;
use crate::check::Check;
use crate::error::{Error, Result};
use crate::exactcore::Poly;

/// A Lie algebroid of rank `n` over a polynomial patch of dimension `m`,
/// presented by a global frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    coords: Vec<String>,
    frame: Vec<String>,
    /// `anchor[i][a]`: component of ρ(e_i) along ∂/∂x_a.
    anchor: Vec<Vec<Poly>>,
    /// `structure[i][j][k] = c_{ij}^k`, antisymmetric in (i, j).
    structure: Vec<Vec<Vec<Poly>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PresentationReport {
    pub jacobi: Check,
    pub anchor: Check,
}

impl PresentationReport {
    pub fn passed(&self) -> bool {
        self.jacobi.passed() && self.anchor.passed()
    }
}

impl Presentation {
    /// Build from anchor rows and brackets given for i < j.
    pub fn new(
        name: impl Into<String>,
        coords: Vec<String>,
        frame: Vec<String>,
        anchor: Vec<Vec<Poly>>,
        brackets: Vec<((usize, usize), Vec<Poly>)>,
    ) -> Result<Self> {
        let m = coords.len();
        let n = frame.len();
        if anchor.len() != n || anchor.iter().any(|row| row.len() != m) {
            return Err(Error::Malformed(format!("anchor must be {n}x{m}")));
        }
        if anchor.iter().flatten().any(|p| p.num_vars() != m) {
            return Err(Error::Malformed("anchor polynomial in wrong ring".into()));
        }
        let mut structure = vec![vec![vec![Poly::zero(m); n]; n]; n];
        let mut seen = std::collections::BTreeSet::new();
        for ((i, j), coeffs) in brackets {
            if i >= j || j >= n {
                return Err(Error::Malformed(format!(
                    "bracket index pair ({}, {}) must satisfy i < j <= {n}",
                    i + 1,
                    j + 1
                )));
            }
            if !seen.insert((i, j)) {
                return Err(Error::Malformed(format!(
                    "bracket ({}, {}) given twice",
                    i + 1,
                    j + 1
                )));
            }
            if coeffs.len() != n || coeffs.iter().any(|p| p.num_vars() != m) {
                return Err(Error::Malformed(format!(
                    "bracket ({}, {}) has wrong shape",
                    i + 1,
                    j + 1
                )));
            }
            for (k, c) in coeffs.into_iter().enumerate() {
                structure[j][i][k] = -&c;
                structure[i][j][k] = c;
            }
        }
        Ok(Presentation {
            name: name.into(),
            coords,
            frame,
            anchor,
            structure,
        })
    }

    /// Build directly from a full structure tensor, which must be antisymmetric.
    pub fn from_tables(
        name: impl Into<String>,
        coords: Vec<String>,
        frame: Vec<String>,
        anchor: Vec<Vec<Poly>>,
        structure: Vec<Vec<Vec<Poly>>>,
    ) -> Result<Self> {
        let n = frame.len();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if structure[i][j][k] != -&structure[j][i][k] {
                        return Err(Error::Malformed(
                            "structure tensor not antisymmetric".into(),
                        ));
                    }
                }
                if i < j {
                    brackets.push(((i, j), structure[i][j].clone()));
                }
            }
        }
        Self::new(name, coords, frame, anchor, brackets)
    }

    pub fn m(&self) -> usize {
        self.coords.len()
    }

    pub fn n(&self) -> usize {
        self.frame.len()
    }

    /// Rank of the bundle, the largest degree with nonzero sections.
    pub fn top(&self) -> usize {
        self.n()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn frame(&self) -> &[String] {
        &self.frame
    }

    pub fn anchor(&self, i: usize) -> &[Poly] {
        &self.anchor[i]
    }

    pub fn structure(&self, i: usize, j: usize) -> &[Poly] {
        &self.structure[i][j]
    }

    pub fn poly_zero(&self) -> Poly {
        Poly::zero(self.m())
    }

    /// ρ(e_i) applied to a function.
    pub fn anchor_apply(&self, i: usize, f: &Poly) -> Poly {
        let mut out = self.poly_zero();
        for (a, r) in self.anchor[i].iter().enumerate() {
            if !r.is_zero() {
                out += &(r * &f.d(a));
            }
        }
        out
    }

    pub fn zero_mv(&self) -> Multivector {
        Multivector::zero(self.m(), self.n())
    }

    pub fn scalar(&self, f: Poly) -> Multivector {
        Multivector::scalar(f, self.n())
    }

    pub fn e(&self, i: usize) -> Multivector {
        Multivector::generator(self.m(), self.n(), i)
    }

    pub fn blade(&self, idx: &[usize], coeff: Poly) -> Multivector {
        Multivector::blade(self.m(), self.n(), idx, coeff)
    }

    pub fn x(&self, a: usize) -> Poly {
        Poly::var(self.m(), a)
    }

    /// [e_i, e_j] as a section.
    pub fn bracket_frame(&self, i: usize, j: usize) -> Multivector {
        let mut out = self.zero_mv();
        for (k, c) in self.structure[i][j].iter().enumerate() {
            if !c.is_zero() {
                out += &self.e(k).mul_poly(c);
            }
        }
        out
    }

    /// Covector ρ*dx_a on the frame: e_i ↦ ρ_i^a.
    pub fn rho_dx(&self, a: usize) -> Vec<Poly> {
        (0..self.n()).map(|i| self.anchor[i][a].clone()).collect()
    }

    pub fn is_point_base(&self) -> bool {
        self.m() == 0
    }

    pub fn anchor_is_zero(&self) -> bool {
        self.anchor.iter().flatten().all(Poly::is_zero)
    }

    pub fn check_host(&self, w: &Multivector) -> Result<()> {
        if w.num_vars() != self.m() || w.num_gens() != self.n() {
            return Err(Error::HostMismatch(format!(
                "element lives over ({} coordinates, {} generators), algebroid {} has ({}, {})",
                w.num_vars(),
                w.num_gens(),
                self.name,
                self.m(),
                self.n()
            )));
        }
        Ok(())
    }

    pub fn render(&self, w: &Multivector) -> String {
        w.render(&self.coords, &self.frame)
    }

    pub fn render_poly(&self, p: &Poly) -> String {
        p.render(&self.coords)
    }

    pub fn max_coeff_degree(&self) -> u32 {
        self.anchor
            .iter()
            .flatten()
            .chain(self.structure.iter().flatten().flatten())
            .filter_map(Poly::degree)
            .max()
            .unwrap_or(0)
    }
}

/// Check the Jacobi identity on frame triples and that ρ is a bracket morphism.
pub fn validate_presentation(p: &Presentation) -> PresentationReport {
    let n = p.n();
    let mut jacobi = Check::new("jacobi");
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let cyc = [(i, j, k), (j, k, i), (k, i, j)];
                let mut r = p.zero_mv();
                for (a, b, c) in cyc {
                    let inner = p.bracket_frame(a, b);
                    r += &schouten(p, &inner, &p.e(c)).expect("same host");
                }
                let names = p.frame();
                jacobi.expect_zero(
                    format!("({}, {}, {})", names[i], names[j], names[k]),
                    r.is_zero(),
                    || p.render(&r),
                );
            }
        }
    }
    let mut anchor = Check::new("anchor");
    for i in 0..n {
        for j in i + 1..n {
            for a in 0..p.m() {
                let mut lhs = p.poly_zero();
                for (k, c) in p.structure(i, j).iter().enumerate() {
                    lhs += &(c * &p.anchor(k)[a]);
                }
                let rhs = p.anchor_apply(i, &p.anchor(j)[a]) - p.anchor_apply(j, &p.anchor(i)[a]);
                let r = lhs - rhs;
                anchor.expect_zero(
                    format!(
                        "({}, {}) along d/d{}",
                        p.frame()[i],
                        p.frame()[j],
                        p.coords()[a]
                    ),
                    r.is_zero(),
                    || p.render_poly(&r),
                );
            }
        }
    }
    PresentationReport { jacobi, anchor }
}
