//! Dense exact linear algebra over the rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{ExactError, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: RationalMatrix,
    pub pivots: Vec<usize>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, ExactError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(ExactError::DimensionMismatch(
                "ragged rows in matrix literal".into(),
            ));
        }
        Ok(RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| Rational::from_integer(v.into()))
                        .collect()
                })
                .collect(),
        )
        .expect("rectangular literal")
    }

    /// Matrix whose columns are the given vectors, all of length `ambient`.
    pub fn from_columns(ambient: usize, columns: &[Vec<Rational>]) -> Result<Self, ExactError> {
        let mut m = Self::zeros(ambient, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != ambient {
                return Err(ExactError::DimensionMismatch(format!(
                    "column {j} has length {}, expected {ambient}",
                    col.len()
                )));
            }
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> Result<Self, ExactError> {
        if self.cols != rhs.rows {
            return Err(ExactError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, ExactError> {
        if v.len() != self.cols {
            return Err(ExactError::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn add(&self, rhs: &RationalMatrix) -> Result<Self, ExactError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(ExactError::DimensionMismatch("matrix sum".into()));
        }
        Ok(RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &m[(r, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let e = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !e.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (r, &p) in e.pivots.iter().enumerate() {
                    v[p] = -e.matrix[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Result<Option<Self>, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::DimensionMismatch(
                "inverse of non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let e = aug.rref();
        if e.pivots.len() < n || (n > 0 && e.pivots[n - 1] >= n) {
            return Ok(None);
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = e.matrix[(i, n + j)].clone();
            }
        }
        Ok(Some(inv))
    }

    pub fn determinant(&self) -> Result<Rational, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::DimensionMismatch(
                "determinant of non-square matrix".into(),
            ));
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &piv;
                for j in c..n {
                    let v = &m[(c, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(super::poly::render_rational)
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Solve `m * x = b` exactly.
///
/// Returns `Ok(None)` when the system is inconsistent. Otherwise the solution
/// read off the reduced echelon form with every free variable set to zero.
pub fn solve_linear(
    m: &RationalMatrix,
    b: &[Rational],
) -> Result<Option<Vec<Rational>>, ExactError> {
    if b.len() != m.rows {
        return Err(ExactError::DimensionMismatch(format!(
            "system has {} rows but right-hand side has length {}",
            m.rows,
            b.len()
        )));
    }
    let mut aug = RationalMatrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, m.cols)] = b[i].clone();
    }
    let e = aug.rref();
    if e.pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); m.cols];
    for (r, &p) in e.pivots.iter().enumerate() {
        x[p] = e.matrix[(r, m.cols)].clone();
    }
    Ok(Some(x))
}

/// `rank(Z) - rank(B)` for spanning sets given as matrix columns, after
/// checking that every column of `B` lies in the span of `Z`.
pub fn quotient_dimension(z: &RationalMatrix, b: &RationalMatrix) -> Result<usize, ExactError> {
    Ok(quotient_basis(z, b)?.len())
}

/// Columns of `Z` completing a basis of `span(B)` to a basis of `span(Z)`.
pub fn quotient_basis(
    z: &RationalMatrix,
    b: &RationalMatrix,
) -> Result<Vec<Vec<Rational>>, ExactError> {
    if z.rows != b.rows {
        return Err(ExactError::DimensionMismatch(format!(
            "ambient dimensions differ: {} vs {}",
            z.rows, b.rows
        )));
    }
    let rank_z = z.rank();
    for j in 0..b.cols {
        let col = b.column(j);
        if !in_span(z, rank_z, &col) {
            return Err(ExactError::BNotSubspace { column: j });
        }
    }
    let mut current: Vec<Vec<Rational>> = (0..b.cols).map(|j| b.column(j)).collect();
    let mut rank = if current.is_empty() {
        0
    } else {
        RationalMatrix::from_columns(z.rows, &current)?.rank()
    };
    let mut reps = Vec::new();
    for j in 0..z.cols {
        let col = z.column(j);
        current.push(col.clone());
        let r = RationalMatrix::from_columns(z.rows, &current)?.rank();
        if r > rank {
            rank = r;
            reps.push(col);
        } else {
            current.pop();
        }
    }
    Ok(reps)
}

fn in_span(z: &RationalMatrix, rank_z: usize, v: &[Rational]) -> bool {
    let mut cols: Vec<Vec<Rational>> = (0..z.cols).map(|j| z.column(j)).collect();
    cols.push(v.to_vec());
    RationalMatrix::from_columns(z.rows, &cols)
        .map(|m| m.rank() == rank_z)
        .unwrap_or(false)
}

/// Assigns dense indices to sparse keys so that linear maps built from
/// structured values (polynomial tables, multivector components) can be
/// assembled into a [`RationalMatrix`].
#[derive(Debug, Clone)]
pub struct Flattener<K: Ord + Clone> {
    index: BTreeMap<K, usize>,
}

impl<K: Ord + Clone> Default for Flattener<K> {
    fn default() -> Self {
        Flattener {
            index: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> Flattener<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, key: &K) -> usize {
        let next = self.index.len();
        *self.index.entry(key.clone()).or_insert(next)
    }

    pub fn get(&self, key: &K) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Keys in index order.
    pub fn keys(&self) -> Vec<K> {
        let mut v: Vec<(usize, K)> = self.index.iter().map(|(k, &i)| (i, k.clone())).collect();
        v.sort_by_key(|(i, _)| *i);
        v.into_iter().map(|(_, k)| k).collect()
    }

    /// Dense vector for a sparse map; keys must already be registered.
    pub fn dense(&self, sparse: &BTreeMap<K, Rational>) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.len()];
        for (k, c) in sparse {
            v[self.index[k]] = c.clone();
        }
        v
    }

    /// Register every key of each sparse column and assemble the matrix.
    pub fn matrix(&mut self, columns: &[BTreeMap<K, Rational>]) -> RationalMatrix {
        for col in columns {
            for k in col.keys() {
                self.register(k);
            }
        }
        let dense: Vec<Vec<Rational>> = columns.iter().map(|c| self.dense(c)).collect();
        RationalMatrix::from_columns(self.len(), &dense).expect("consistent lengths")
    }
}

/// Solve Σ_j x_j · columns[j] = target for sparse keyed vectors.
pub fn solve_sparse<K: Ord + Clone>(
    columns: &[BTreeMap<K, Rational>],
    target: &BTreeMap<K, Rational>,
) -> Option<Vec<Rational>> {
    let mut f = Flattener::new();
    for k in target.keys() {
        f.register(k);
    }
    let m = f.matrix(columns);
    let b = f.dense(target);
    solve_linear(&m, &b).expect("consistent dimensions")
}

/// Basis of {x : Σ_j x_j · columns[j] = 0} for sparse keyed vectors.
pub fn kernel_sparse<K: Ord + Clone>(
    num_params: usize,
    columns: &[BTreeMap<K, Rational>],
) -> Vec<Vec<Rational>> {
    assert_eq!(num_params, columns.len());
    let mut f = Flattener::new();
    let m = f.matrix(columns);
    m.kernel()
}

/// Σ_j x_j · columns[j].
pub fn combine_sparse<K: Ord + Clone>(
    x: &[Rational],
    columns: &[BTreeMap<K, Rational>],
) -> BTreeMap<K, Rational> {
    let mut out: BTreeMap<K, Rational> = BTreeMap::new();
    for (c, col) in x.iter().zip(columns) {
        if c.is_zero() {
            continue;
        }
        for (k, v) in col {
            let e = out.entry(k.clone()).or_insert_with(Rational::zero);
            *e += c * v;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}
