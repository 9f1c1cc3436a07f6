//! Evaluation of a multiderivation on arbitrary arguments by Leibniz expansion.

use super::{canonical_key, Generator, MultiDerivation};
use crate::algebroid::Multivector;
use crate::exactcore::Poly;

/// Which factor a composite slot is split at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Y∧Z with Y the first atom.
    LeftFold,
    /// Y∧Z with Z the last atom.
    RightFold,
}

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

struct Ctx<'a> {
    d: &'a MultiDerivation,
    strategy: Strategy,
}

fn odd(e: i64) -> bool {
    e.rem_euclid(2) == 1
}

fn is_one(p: &Poly) -> bool {
    p.is_constant() && p.constant_term() == num_traits::One::one()
}

fn term_atoms(blade: &[usize], coeff: &Poly) -> Vec<Atom> {
    let mut out = Vec::with_capacity(blade.len() + 1);
    if blade.is_empty() || !is_one(coeff) {
        out.push(Atom::F(coeff.clone()));
    }
    out.extend(blade.iter().map(|&i| Atom::E(i)));
    out
}

fn degree(atoms: &[Atom]) -> i64 {
    atoms.iter().map(Atom::degree).sum()
}

pub(super) fn evaluate(
    d: &MultiDerivation,
    args: &[Multivector],
    strategy: Strategy,
) -> Multivector {
    let ctx = Ctx { d, strategy };
    let mut out = Multivector::zero(d.num_vars, d.num_gens);
    let per_slot: Vec<Vec<Vec<Atom>>> = args
        .iter()
        .map(|a| a.terms().map(|(b, c)| term_atoms(b, c)).collect())
        .collect();
    if per_slot.iter().any(Vec::is_empty) {
        return out;
    }
    let mut idx = vec![0usize; args.len()];
    loop {
        let slots: Vec<Vec<Atom>> = idx
            .iter()
            .zip(&per_slot)
            .map(|(&i, s)| s[i].clone())
            .collect();
        out += &ctx.eval(slots);
        let mut pos = args.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < per_slot[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

impl Ctx<'_> {
    fn zero(&self) -> Multivector {
        Multivector::zero(self.d.num_vars, self.d.num_gens)
    }

    fn product(&self, atoms: &[Atom]) -> Multivector {
        let mut coeff = Poly::one(self.d.num_vars);
        let mut idx = Vec::new();
        for a in atoms {
            match a {
                Atom::F(f) => coeff = &coeff * f,
                Atom::E(i) => idx.push(*i),
            }
        }
        Multivector::blade(self.d.num_vars, self.d.num_gens, &idx, coeff)
    }

    fn eval(&self, mut slots: Vec<Vec<Atom>>) -> Multivector {
        let Some(s) = slots.iter().position(|a| a.len() > 1) else {
            return self.eval_atomic(&slots);
        };
        // Move slot s to the end: each transposition gives −(−1)^{(|X|−1)(|Y|−1)}.
        let ds = degree(&slots[s]);
        let mut sign = 1i64;
        for t in slots.iter().skip(s + 1) {
            if !odd((ds - 1) * (degree(t) - 1)) {
                sign = -sign;
            }
        }
        let last = slots.remove(s);
        let op_degree: i64 = slots.iter().map(|a| degree(a)).sum::<i64>() + self.d.p - self.d.n;
        let cut = match self.strategy {
            Strategy::LeftFold => 1,
            Strategy::RightFold => last.len() - 1,
        };
        let (y, z) = last.split_at(cut);
        let mut with_y = slots.clone();
        with_y.push(y.to_vec());
        let mut with_z = slots;
        with_z.push(z.to_vec());
        let first = self.eval(with_y).wedge(&self.product(z));
        let second = self.product(y).wedge(&self.eval(with_z));
        let mut v = if odd(degree(y) * op_degree) {
            first - second
        } else {
            first + second
        };
        if sign < 0 {
            v = -v;
        }
        v
    }

    /// Every slot is a single atom: apply the chain rule in function slots,
    /// then read the generating table.
    fn eval_atomic(&self, slots: &[Vec<Atom>]) -> Multivector {
        let m = self.d.num_vars;
        let mut expansions: Vec<(Poly, Vec<Generator>)> = vec![(Poly::one(m), Vec::new())];
        for slot in slots {
            let mut next = Vec::new();
            match &slot[0] {
                Atom::E(i) => {
                    for (c, g) in expansions {
                        let mut g = g;
                        g.push(Generator::Section(*i));
                        next.push((c, g));
                    }
                }
                Atom::F(f) => {
                    let partials: Vec<(usize, Poly)> = (0..m)
                        .map(|a| (a, f.d(a)))
                        .filter(|(_, p)| !p.is_zero())
                        .collect();
                    for (c, g) in &expansions {
                        for (a, pa) in &partials {
                            let mut g2 = g.clone();
                            g2.push(Generator::Coord(*a));
                            next.push((c * pa, g2));
                        }
                    }
                }
            }
            expansions = next;
            if expansions.is_empty() {
                return self.zero();
            }
        }
        let mut out = self.zero();
        for (c, gens) in expansions {
            let Some((sign, key)) = canonical_key(&gens) else {
                continue;
            };
            if let Some(v) = self.d.table.get(&key) {
                let term = v.mul_poly(&c);
                if sign < 0 {
                    out -= &term;
                } else {
                    out += &term;
                }
            }
        }
        out
    }
}
