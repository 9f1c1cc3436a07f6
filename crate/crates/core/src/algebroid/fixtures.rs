//! Bundled example algebroids.

use super::{Multivector, Presentation};
use crate::exactcore::Poly;

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Brackets with integer coefficients: ((i, j), [(k, c)]).
fn lie_algebra(
    name: &str,
    frame: &[&str],
    brackets: &[((usize, usize), &[(usize, i64)])],
) -> Presentation {
    with_base(name, &[], frame, vec![vec![]; frame.len()], brackets)
}

fn with_base(
    name: &str,
    coords: &[&str],
    frame: &[&str],
    anchor: Vec<Vec<Poly>>,
    brackets: &[((usize, usize), &[(usize, i64)])],
) -> Presentation {
    let m = coords.len();
    let n = frame.len();
    let br = brackets
        .iter()
        .map(|&(ij, coeffs)| {
            let mut row = vec![Poly::zero(m); n];
            for &(k, c) in coeffs {
                row[k] = Poly::from_int(m, c);
            }
            (ij, row)
        })
        .collect();
    Presentation::new(name, names(coords), names(frame), anchor, br)
        .expect("fixture is well formed")
}

pub fn ab2() -> Presentation {
    lie_algebra("ab2", &["e1", "e2"], &[])
}

pub fn aff1() -> Presentation {
    lie_algebra("aff1", &["e1", "e2"], &[((0, 1), &[(1, 1)])])
}

pub fn sl2() -> Presentation {
    lie_algebra(
        "sl2",
        &["h", "e", "f"],
        &[
            ((0, 1), &[(1, 2)]),
            ((0, 2), &[(2, -2)]),
            ((1, 2), &[(0, 1)]),
        ],
    )
}

/// sl2 with [e,f] = h + e, which breaks the Jacobi identity.
pub fn sl2_broken() -> Presentation {
    lie_algebra(
        "sl2-broken",
        &["h", "e", "f"],
        &[
            ((0, 1), &[(1, 2)]),
            ((0, 2), &[(2, -2)]),
            ((1, 2), &[(0, 1), (1, 1)]),
        ],
    )
}

pub fn heis() -> Presentation {
    lie_algebra("heis", &["e1", "e2", "e3"], &[((0, 1), &[(2, 1)])])
}

pub fn tan1() -> Presentation {
    with_base("tan1", &["x"], &["e1"], vec![vec![Poly::one(1)]], &[])
}

pub fn tan2() -> Presentation {
    with_base(
        "tan2",
        &["x1", "x2"],
        &["e1", "e2"],
        vec![
            vec![Poly::one(2), Poly::zero(2)],
            vec![Poly::zero(2), Poly::one(2)],
        ],
        &[],
    )
}

/// Bundle of Lie algebras over a line with constant aff(1) fibers.
pub fn bla() -> Presentation {
    with_base(
        "bla",
        &["x"],
        &["e1", "e2"],
        vec![vec![Poly::zero(1)]; 2],
        &[((0, 1), &[(1, 1)])],
    )
}

/// Bundle of Lie algebras over a line with [e1,e2] = x·e2.
pub fn bla_x() -> Presentation {
    let x = Poly::var(1, 0);
    Presentation::new(
        "bla-x",
        names(&["x"]),
        names(&["e1", "e2"]),
        vec![vec![Poly::zero(1)]; 2],
        vec![((0, 1), vec![Poly::zero(1), x])],
    )
    .expect("fixture is well formed")
}

/// Abelian rank-2 bundle of Lie algebras over a line.
pub fn ab2_line() -> Presentation {
    with_base(
        "ab2-line",
        &["x"],
        &["e1", "e2"],
        vec![vec![Poly::zero(1)]; 2],
        &[],
    )
}

/// Transitive algebroid TR ⊕ aff(1) over a line: ρ(e1) = ∂x, [e2,e3] = e3.
pub fn ati() -> Presentation {
    with_base(
        "ati",
        &["x"],
        &["e1", "e2", "e3"],
        vec![vec![Poly::one(1)], vec![Poly::zero(1)], vec![Poly::zero(1)]],
        &[((1, 2), &[(2, 1)])],
    )
}

/// The nine named fixtures that satisfy the algebroid axioms.
pub fn all_valid() -> Vec<Presentation> {
    vec![
        ab2(),
        aff1(),
        sl2(),
        heis(),
        tan1(),
        tan2(),
        bla(),
        bla_x(),
        ati(),
    ]
}

pub fn by_name(name: &str) -> Option<Presentation> {
    Some(match name {
        "ab2" => ab2(),
        "aff1" => aff1(),
        "sl2" => sl2(),
        "sl2-broken" => sl2_broken(),
        "heis" => heis(),
        "tan1" => tan1(),
        "tan2" => tan2(),
        "bla" => bla(),
        "bla-x" => bla_x(),
        "ab2-line" => ab2_line(),
        "ati" => ati(),
        _ => return None,
    })
}

/// Constant frame of ker ρ for fixtures that have one declared.
pub fn kernel_frame(p: &Presentation) -> Option<Vec<Multivector>> {
    match p.name.as_str() {
        "tan1" | "tan2" => Some(Vec::new()),
        "ati" => Some(vec![p.e(1), p.e(2)]),
        _ => None,
    }
}

/// The connection λ(∂x_a) = Σ λ_a^i e_i for transitive fixtures.
pub fn connection(p: &Presentation) -> Option<Vec<Vec<Poly>>> {
    let m = p.m();
    match p.name.as_str() {
        "tan1" => Some(vec![vec![Poly::one(m)]]),
        "tan2" => Some(vec![
            vec![Poly::one(m), Poly::zero(m)],
            vec![Poly::zero(m), Poly::one(m)],
        ]),
        "ati" => Some(vec![vec![Poly::one(m), Poly::zero(m), Poly::zero(m)]]),
        _ => None,
    }
}
