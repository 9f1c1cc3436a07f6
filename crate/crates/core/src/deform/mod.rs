//! Multiderivations Der^{n,p}(A), their composition and the bigraded
//! Gerstenhaber bracket.
//!
//! A multiderivation of bidegree (n, p) takes n+1 arguments and is stored by
//! its values on frame sections and coordinate functions: the symbol D^{(i)}
//! has n+1−i section slots followed by i coordinate slots and lands in
//! ∧^{p+1−i} A.

mod eval;

use std::collections::BTreeMap;

use crate::algebroid::{subsets, Multivector, Presentation};
use crate::check::Check;
use crate::error::{Error, Result};

pub use eval::Strategy;

/// Generating table key: (increasing section indices, sorted coordinate indices).
pub type SymbolKey = (Vec<usize>, Vec<usize>);

/// Largest arity index n that bracket results may have.
pub const DEFAULT_ARITY_CAP: i64 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiDerivation {
    num_vars: usize,
    num_gens: usize,
    n: i64,
    p: i64,
    table: BTreeMap<SymbolKey, Multivector>,
}

/// Argument types of a generator slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Generator {
    Section(usize),
    Coord(usize),
}

/// Multisets of size k drawn from 0..m, sorted.
fn multisets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for a in start..m {
            cur.push(a);
            rec(a, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}

impl MultiDerivation {
    pub fn zero(p: &Presentation, n: i64, pdeg: i64) -> Result<Self> {
        if n < -1 || pdeg < -1 {
            return Err(Error::WrongBidegree(format!(
                "({n}, {pdeg}) is below (-1, -1)"
            )));
        }
        Ok(MultiDerivation {
            num_vars: p.m(),
            num_gens: p.n(),
            n,
            p: pdeg,
            table: BTreeMap::new(),
        })
    }

    pub fn bidegree(&self) -> (i64, i64) {
        (self.n, self.p)
    }

    pub fn arity(&self) -> usize {
        (self.n + 1) as usize
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_gens(&self) -> usize {
        self.num_gens
    }

    pub fn table(&self) -> &BTreeMap<SymbolKey, Multivector> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    /// Number of function slots ℓ = min(n+1, p+1) of the last symbol.
    pub fn max_symbol(&self) -> usize {
        (self.n + 1).min(self.p + 1).max(0) as usize
    }

    /// All generating keys of the tables D^{(0)}, …, D^{(ℓ)}.
    pub fn keys(&self) -> Vec<SymbolKey> {
        let mut out = Vec::new();
        for i in 0..=self.max_symbol() {
            let secs = self.arity() - i;
            for s in subsets(self.num_gens, secs) {
                for c in multisets(self.num_vars, i) {
                    out.push((s.clone(), c));
                }
            }
        }
        out
    }

    /// Degree of the values of the symbol with `i` function slots.
    pub fn value_degree(&self, i: usize) -> Option<usize> {
        let d = self.p + 1 - i as i64;
        (d >= 0).then_some(d as usize)
    }

    /// Set a generating value; the key is canonicalized with the skew sign.
    pub fn set(&mut self, gens: &[Generator], value: Multivector) -> Result<()> {
        if gens.len() != self.arity() {
            return Err(Error::Arity {
                expected: self.arity(),
                got: gens.len(),
            });
        }
        let Some((sign, key)) = canonical_key(gens) else {
            return if value.is_zero() {
                Ok(())
            } else {
                Err(Error::Malformed(
                    "repeated section slot must have zero value".into(),
                ))
            };
        };
        let i = key.1.len();
        if i > self.max_symbol()
            || (!value.is_zero() && value.homogeneous_degree() != self.value_degree(i))
        {
            return Err(Error::WrongBidegree(format!(
                "value for {key:?} must have degree {:?}",
                self.value_degree(i)
            )));
        }
        if value.num_vars() != self.num_vars || value.num_gens() != self.num_gens {
            return Err(Error::HostMismatch(
                "table value from another algebroid".into(),
            ));
        }
        let v = if sign < 0 { -value } else { value };
        if v.is_zero() {
            self.table.remove(&key);
        } else {
            self.table.insert(key, v);
        }
        Ok(())
    }

    pub fn get(&self, key: &SymbolKey) -> Option<&Multivector> {
        self.table.get(key)
    }

    /// Build the generating tables of an operator from its values on generators.
    pub fn from_generator_values(
        p: &Presentation,
        n: i64,
        pdeg: i64,
        mut f: impl FnMut(&[Generator]) -> Result<Multivector>,
    ) -> Result<Self> {
        let mut d = Self::zero(p, n, pdeg)?;
        for (secs, coords) in d.keys() {
            let gens: Vec<Generator> = secs
                .iter()
                .map(|&s| Generator::Section(s))
                .chain(coords.iter().map(|&a| Generator::Coord(a)))
                .collect();
            let v = f(&gens)?;
            if !v.is_zero() {
                d.table.insert((secs, coords), v);
            }
        }
        Ok(d)
    }

    /// The bidegree (−1, p) element given by a section of ∧^{p+1} A.
    pub fn from_section(p: &Presentation, tau: &Multivector) -> Result<Self> {
        p.check_host(tau)?;
        let q = tau
            .homogeneous_degree()
            .ok_or_else(|| Error::WrongBidegree("section is not homogeneous".into()))?;
        let mut d = Self::zero(p, -1, q as i64 - 1)?;
        if !tau.is_zero() {
            d.table.insert((vec![], vec![]), tau.clone());
        }
        Ok(d)
    }

    /// The Schouten structure m of bidegree (1, 0).
    pub fn schouten_structure(p: &Presentation) -> Self {
        Self::from_generator_values(p, 1, 0, |g| {
            Ok(match (g[0], g[1]) {
                (Generator::Section(i), Generator::Section(j)) => p.bracket_frame(i, j),
                (Generator::Section(i), Generator::Coord(a)) => p.scalar(p.anchor(i)[a].clone()),
                _ => p.zero_mv(),
            })
        })
        .expect("bidegree (1, 0) is valid")
    }

    pub fn evaluate(&self, args: &[Multivector]) -> Result<Multivector> {
        self.evaluate_with(args, Strategy::LeftFold)
    }

    pub fn evaluate_with(&self, args: &[Multivector], strategy: Strategy) -> Result<Multivector> {
        if args.len() != self.arity() {
            return Err(Error::Arity {
                expected: self.arity(),
                got: args.len(),
            });
        }
        for a in args {
            if a.num_vars() != self.num_vars || a.num_gens() != self.num_gens {
                return Err(Error::HostMismatch(
                    "argument from another algebroid".into(),
                ));
            }
        }
        Ok(eval::evaluate(self, args, strategy))
    }

    pub fn scale(&self, c: &crate::exactcore::Rational) -> Self {
        let mut out = self.clone();
        out.table = self
            .table
            .iter()
            .map(|(k, v)| (k.clone(), v.scale(c)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (k, v) in &other.table {
            let e = out
                .table
                .entry(k.clone())
                .or_insert_with(|| Multivector::zero(self.num_vars, self.num_gens));
            *e += v;
        }
        out.table.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&crate::exactcore::q(-1)))
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars || self.num_gens != other.num_gens {
            return Err(Error::HostMismatch(
                "multiderivations over different algebroids".into(),
            ));
        }
        if self.bidegree() != other.bidegree() {
            return Err(Error::WrongBidegree(format!(
                "{:?} vs {:?}",
                self.bidegree(),
                other.bidegree()
            )));
        }
        Ok(())
    }

    /// Nonzero table entries as residuals.
    pub fn residuals(&self, p: &Presentation, name: &str) -> Check {
        let mut c = Check::new(name);
        for ((secs, coords), v) in &self.table {
            let args: Vec<String> = secs
                .iter()
                .map(|&s| p.frame()[s].clone())
                .chain(coords.iter().map(|&a| p.coords()[a].clone()))
                .collect();
            c.push(format!("({})", args.join(", ")), p.render(v));
        }
        c
    }
}

/// Sort generator slots into sections-then-coordinates order, returning the
/// sign of the shifted-degree skew symmetry, or `None` for a repeated section.
pub fn canonical_key(gens: &[Generator]) -> Option<(i32, SymbolKey)> {
    let mut v = gens.to_vec();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            if !matches!((v[j - 1], v[j]), (Generator::Coord(_), Generator::Coord(_))) {
                sign = -sign;
            }
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    let mut secs = Vec::new();
    let mut coords = Vec::new();
    for g in v {
        match g {
            Generator::Section(s) => {
                if secs.last() == Some(&s) {
                    return None;
                }
                secs.push(s);
            }
            Generator::Coord(a) => coords.push(a),
        }
    }
    Some((sign, (secs, coords)))
}

/// Generator values as multivectors.
pub fn generator_args(p: &Presentation, gens: &[Generator]) -> Vec<Multivector> {
    gens.iter()
        .map(|g| match *g {
            Generator::Section(s) => p.e(s),
            Generator::Coord(a) => p.scalar(p.x(a)),
        })
        .collect()
}

/// A (p, q)-shuffle: the first block and the remaining block, both increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shuffle {
    pub first: Vec<usize>,
    pub rest: Vec<usize>,
}

impl Shuffle {
    pub fn sequence(&self) -> Vec<usize> {
        self.first.iter().chain(&self.rest).copied().collect()
    }
}

/// All (k, total−k)-shuffles.
pub fn shuffles(total: usize, k: usize) -> Vec<Shuffle> {
    subsets(total, k)
        .into_iter()
        .map(|first| {
            let rest = (0..total).filter(|i| !first.contains(i)).collect();
            Shuffle { first, rest }
        })
        .collect()
}

/// Koszul sign of reordering X_0⊙…⊙X_N into X_{σ(0)}⊙…⊙X_{σ(N)} in the
/// symmetric algebra of the shifted elements. `degrees` are the exterior
/// degrees |X_i|; each transposition of X, Y contributes (−1)^{(|X|−1)(|Y|−1)}.
pub fn koszul_sign(sigma: &[usize], degrees: &[i64]) -> Result<i32> {
    if sigma.len() != degrees.len() {
        return Err(Error::Arity {
            expected: degrees.len(),
            got: sigma.len(),
        });
    }
    let mut sign = 1;
    for i in 0..sigma.len() {
        for j in i + 1..sigma.len() {
            if sigma[i] > sigma[j]
                && ((degrees[sigma[i]] - 1) * (degrees[sigma[j]] - 1)).rem_euclid(2) == 1
            {
                sign = -sign;
            }
        }
    }
    Ok(sign)
}

fn permutation_sign(sigma: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..sigma.len() {
        for j in i + 1..sigma.len() {
            if sigma[i] > sigma[j] {
                sign = -sign;
            }
        }
    }
    sign
}

fn degree_of(w: &Multivector) -> i64 {
    w.homogeneous_degree().expect("homogeneous argument") as i64
}

/// (D∘E)(X_0,…,X_{n+n'}) = Σ_σ (−1)^{|σ|} K(σ) D(E(X_{σ(0)},…,X_{σ(n')}), X_{σ(n'+1)},…).
pub fn compose(
    d: &MultiDerivation,
    e: &MultiDerivation,
    args: &[Multivector],
) -> Result<Multivector> {
    let total = (d.n + e.n + 1).max(0) as usize;
    if args.len() != total {
        return Err(Error::Arity {
            expected: total,
            got: args.len(),
        });
    }
    let mut out = Multivector::zero(d.num_vars, d.num_gens);
    if d.n < 0 {
        return Ok(out);
    }
    if let Some(pos) = args.iter().position(|a| a.homogeneous_degree().is_none()) {
        let mut degs: Vec<usize> = args[pos].terms().map(|(b, _)| b.len()).collect();
        degs.dedup();
        degs.sort();
        degs.dedup();
        for q in degs {
            let mut split = args.to_vec();
            split[pos] = args[pos].component(q);
            out += &compose(d, e, &split)?;
        }
        return Ok(out);
    }
    let degrees: Vec<i64> = args.iter().map(degree_of).collect();
    for sh in shuffles(total, e.arity()) {
        let seq = sh.sequence();
        let sign = permutation_sign(&seq) * koszul_sign(&seq, &degrees)?;
        let inner_args: Vec<Multivector> = sh.first.iter().map(|&i| args[i].clone()).collect();
        let inner = e.evaluate(&inner_args)?;
        if inner.is_zero() {
            continue;
        }
        let mut outer_args = vec![inner];
        outer_args.extend(sh.rest.iter().map(|&i| args[i].clone()));
        let v = d.evaluate(&outer_args)?;
        if sign < 0 {
            out -= &v;
        } else {
            out += &v;
        }
    }
    Ok(out)
}

/// [D, E] = (−1)^{nn'} D∘E − (−1)^{pp'} E∘D as generating tables.
pub fn gerstenhaber(
    p: &Presentation,
    d: &MultiDerivation,
    e: &MultiDerivation,
) -> Result<MultiDerivation> {
    gerstenhaber_capped(p, d, e, DEFAULT_ARITY_CAP)
}

pub fn gerstenhaber_capped(
    p: &Presentation,
    d: &MultiDerivation,
    e: &MultiDerivation,
    cap: i64,
) -> Result<MultiDerivation> {
    for x in [d, e] {
        if x.num_vars != p.m() || x.num_gens != p.n() {
            return Err(Error::HostMismatch(
                "multiderivation from another algebroid".into(),
            ));
        }
    }
    let (n, pd) = d.bidegree();
    let (n2, p2) = e.bidegree();
    let big_n = n + n2;
    if big_n < -1 {
        return Err(Error::WrongBidegree(format!(
            "bracket of two (-1, p) elements would have arity index {big_n}"
        )));
    }
    if big_n > cap {
        return Err(Error::WrongBidegree(format!(
            "arity index {big_n} exceeds cap {cap}"
        )));
    }
    let s1 = if (n * n2).rem_euclid(2) == 1 { -1 } else { 1 };
    let s2 = if (pd * p2).rem_euclid(2) == 1 { -1 } else { 1 };
    MultiDerivation::from_generator_values(p, big_n, pd + p2, |gens| {
        let args = generator_args(p, gens);
        let de = compose(d, e, &args)?;
        let ed = compose(e, d, &args)?;
        let mut v = if s1 < 0 { -de } else { de };
        if s2 < 0 {
            v += &ed;
        } else {
            v -= &ed;
        }
        Ok(v)
    })
}

/// ∂D = [m, D].
pub fn deformation_coboundary(p: &Presentation, d: &MultiDerivation) -> Result<MultiDerivation> {
    let m = MultiDerivation::schouten_structure(p);
    gerstenhaber(p, &m, d)
}

/// Whether a bidegree (0, p) multiderivation is closed, with the nonzero
/// entries of ∂D as residuals.
pub fn is_cocycle(p: &Presentation, d: &MultiDerivation) -> Result<Check> {
    if d.n != 0 {
        return Err(Error::WrongBidegree(format!(
            "expected (0, p), found {:?}",
            d.bidegree()
        )));
    }
    Ok(deformation_coboundary(p, d)?.residuals(p, "cocycle"))
}

/// The degree-p derivation [X, ·] built as a (0, p) multiderivation.
pub fn ad_derivation(p: &Presentation, x: &Multivector) -> Result<MultiDerivation> {
    p.check_host(x)?;
    let q = x
        .homogeneous_degree()
        .ok_or_else(|| Error::WrongBidegree("section is not homogeneous".into()))?
        as i64;
    MultiDerivation::from_generator_values(p, 0, q - 1, |g| {
        let arg = &generator_args(p, g)[0];
        crate::algebroid::schouten(p, x, arg)
    })
}

/// Values of a derivation given on generators: δ(e_i) and δ(x_a).
pub fn derivation_from_values(
    p: &Presentation,
    pdeg: i64,
    on_sections: &[Multivector],
    on_coords: &[Multivector],
) -> Result<MultiDerivation> {
    MultiDerivation::from_generator_values(p, 0, pdeg, |g| {
        Ok(match g[0] {
            Generator::Section(i) => on_sections[i].clone(),
            Generator::Coord(a) => on_coords.get(a).cloned().unwrap_or_else(|| p.zero_mv()),
        })
    })
}
