//! The Schouten bracket on Γ(∧•A).
//!
//! Terms are split into atoms (one function and frame sections) and the
//! bracket is reduced to atom pairs by
//!   [X, Y∧Z] = [X,Y]∧Z + (−1)^{(|X|−1)|Y|} Y∧[X,Z],
//!   [X, a]   = −(−1)^{(|X|−1)(|a|−1)} [a, X].

use super::{Multivector, Presentation};
use crate::error::Result;
use crate::exactcore::Poly;

#[derive(Clone, Debug)]
enum Atom {
    F(Poly),
    E(usize),
}

impl Atom {
    fn degree(&self) -> i64 {
        match self {
            Atom::F(_) => 0,
            Atom::E(_) => 1,
        }
    }
}

fn sign(exp: i64) -> bool {
    exp.rem_euclid(2) == 1
}

fn atoms_of(blade: &[usize], coeff: &Poly) -> Vec<Atom> {
    let mut out = Vec::with_capacity(blade.len() + 1);
    if blade.is_empty() || !is_one(coeff) {
        out.push(Atom::F(coeff.clone()));
    }
    out.extend(blade.iter().map(|&i| Atom::E(i)));
    out
}

fn is_one(p: &Poly) -> bool {
    p.is_constant() && p.constant_term() == num_traits::One::one()
}

fn product(p: &Presentation, atoms: &[Atom]) -> Multivector {
    let mut coeff = Poly::one(p.m());
    let mut idx = Vec::new();
    for a in atoms {
        match a {
            Atom::F(f) => coeff = &coeff * f,
            Atom::E(i) => idx.push(*i),
        }
    }
    p.blade(&idx, coeff)
}

fn degree(atoms: &[Atom]) -> i64 {
    atoms.iter().map(Atom::degree).sum()
}

fn atom_bracket(p: &Presentation, a: &Atom, b: &Atom) -> Multivector {
    match (a, b) {
        (Atom::F(_), Atom::F(_)) => p.zero_mv(),
        (Atom::E(i), Atom::E(j)) => p.bracket_frame(*i, *j),
        (Atom::E(i), Atom::F(g)) => p.scalar(p.anchor_apply(*i, g)),
        (Atom::F(f), Atom::E(j)) => p.scalar(-p.anchor_apply(*j, f)),
    }
}

fn bracket_atoms(p: &Presentation, xs: &[Atom], ys: &[Atom]) -> Multivector {
    let dx = degree(xs);
    if ys.len() > 1 {
        let (head, rest) = ys.split_at(1);
        let first = bracket_atoms(p, xs, head).wedge(&product(p, rest));
        let second = product(p, head).wedge(&bracket_atoms(p, xs, rest));
        if sign((dx - 1) * head[0].degree()) {
            first - second
        } else {
            first + second
        }
    } else if xs.len() > 1 {
        let swapped = bracket_atoms(p, ys, xs);
        if sign((dx - 1) * (ys[0].degree() - 1)) {
            swapped
        } else {
            -swapped
        }
    } else {
        atom_bracket(p, &xs[0], &ys[0])
    }
}

/// Schouten bracket [X, Y] of degree |X| + |Y| − 1.
pub fn schouten(p: &Presentation, x: &Multivector, y: &Multivector) -> Result<Multivector> {
    p.check_host(x)?;
    p.check_host(y)?;
    let mut out = p.zero_mv();
    for (bx, cx) in x.terms() {
        let xs = atoms_of(bx, cx);
        for (by, cy) in y.terms() {
            let ys = atoms_of(by, cy);
            out += &bracket_atoms(p, &xs, &ys);
        }
    }
    Ok(out)
}

/// [X, f] for a function f.
pub fn schouten_fn(p: &Presentation, x: &Multivector, f: &Poly) -> Result<Multivector> {
    schouten(p, x, &p.scalar(f.clone()))
}
