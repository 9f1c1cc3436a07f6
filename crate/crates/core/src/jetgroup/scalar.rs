use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::exactcore::{Rational, RationalMatrix};

/// Exact scalars the pointwise group computations run over.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse, if it exists.
    fn inv(&self) -> Option<Self>;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

/// a + bε with ε² = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual {
    pub re: Rational,
    pub eps: Rational,
}

impl Dual {
    pub fn eps() -> Self {
        Dual {
            re: Zero::zero(),
            eps: One::one(),
        }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual {
            re: self.re + o.re,
            eps: self.eps + o.eps,
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual {
            re: self.re - o.re,
            eps: self.eps - o.eps,
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual {
            eps: &self.re * &o.eps + &self.eps * &o.re,
            re: self.re * o.re,
        }
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual {
            re: -self.re,
            eps: -self.eps,
        }
    }
}

impl Scalar for Dual {
    fn zero() -> Self {
        Dual {
            re: Zero::zero(),
            eps: Zero::zero(),
        }
    }

    fn one() -> Self {
        Dual {
            re: One::one(),
            eps: Zero::zero(),
        }
    }

    fn from_rational(r: &Rational) -> Self {
        Dual {
            re: r.clone(),
            eps: Zero::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.eps)
    }

    fn inv(&self) -> Option<Self> {
        let r = Scalar::inv(&self.re)?;
        Some(Dual {
            eps: -(&self.eps * &r * &r),
            re: r,
        })
    }
}

/// Small dense matrix over a `Scalar`.
#[derive(Clone, Debug, PartialEq)]
pub struct GMat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> GMat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        GMat {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    pub fn from_rational(r: &RationalMatrix) -> Self {
        let mut m = Self::zeros(r.rows(), r.cols());
        for i in 0..r.rows() {
            for j in 0..r.cols() {
                m.data[i * r.cols() + j] = S::from_rational(&r[(i, j)]);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shapes");
        GMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn scale(&self, c: &S) -> Self {
        GMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix shapes");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * o.get(k, j).clone();
                }
            }
        }
        out
    }

    /// Gauss–Jordan with pivots chosen among invertible entries.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let r = (c..n).find(|&r| a.get(r, c).inv().is_some())?;
            a.swap_rows(r, c);
            inv.swap_rows(r, c);
            let p = a.get(c, c).inv()?;
            a.scale_row(c, &p);
            inv.scale_row(c, &p);
            for r in 0..n {
                if r == c || a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c).clone();
                a.axpy_row(r, c, &f);
                inv.axpy_row(r, c, &f);
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 != r2 {
            for j in 0..self.cols {
                self.data.swap(r1 * self.cols + j, r2 * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, c: &S) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = self.data[idx].clone() * c.clone();
        }
    }

    /// row[r] −= f · row[src]
    fn axpy_row(&mut self, r: usize, src: usize, f: &S) {
        for j in 0..self.cols {
            let v = self.get(src, j).clone() * f.clone();
            let idx = r * self.cols + j;
            self.data[idx] = self.data[idx].clone() - v;
        }
    }
}

impl GMat<Rational> {
    pub fn to_rational(&self) -> RationalMatrix {
        let rows: Vec<Vec<Rational>> = (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect();
        if self.rows == 0 {
            return RationalMatrix::zeros(0, self.cols);
        }
        RationalMatrix::from_rows(rows).expect("rectangular")
    }
}
