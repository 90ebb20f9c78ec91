//! Prime-field arithmetic and dense linear algebra over F_p.
//!
//! The modulus is a runtime value carried by every object ([`Prime`]). Raw
//! coefficients are stored as `u32` in `[0, p)`; all products go through `u64`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A validated prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    /// Checks primality by trial division.
    pub fn new(p: u64) -> Result<Self> {
        if !(2..=(u32::MAX as u64 >> 1)).contains(&p) {
            return Err(Error::NotPrime(p));
        }
        let mut d = 2u64;
        while d * d <= p {
            if p.is_multiple_of(d) {
                return Err(Error::NotPrime(p));
            }
            d += 1;
        }
        Ok(Prime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn reduce(self, v: u64) -> u32 {
        (v % self.0 as u64) as u32
    }

    /// Maps a signed integer into `[0, p)`.
    #[inline]
    pub fn from_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        if s >= self.0 as u64 {
            (s - self.0 as u64) as u32
        } else {
            s as u32
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.0 as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat. `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        let a = a % self.0;
        (a != 0).then(|| self.pow(a, self.0 as u64 - 2))
    }

    /// `binom(n, k) mod p` by Lucas' theorem.
    pub fn binomial(self, mut n: u64, mut k: u64) -> u32 {
        if k > n {
            return 0;
        }
        let p = self.0 as u64;
        let mut acc = 1u32;
        while k > 0 || n > 0 {
            let (nd, kd) = (n % p, k % p);
            if kd > nd {
                return 0;
            }
            acc = self.mul(acc, self.small_binomial(nd, kd));
            n /= p;
            k /= p;
        }
        acc
    }

    fn small_binomial(self, n: u64, k: u64) -> u32 {
        let k = k.min(n - k);
        let mut num = 1u32;
        let mut den = 1u32;
        for i in 0..k {
            num = self.mul(num, self.reduce(n - i));
            den = self.mul(den, self.reduce(i + 1));
        }
        self.mul(num, self.inv(den).expect("i + 1 < p is a unit"))
    }

    /// `n! mod p`.
    pub fn factorial(self, n: u64) -> u32 {
        if n >= self.0 as u64 {
            return 0;
        }
        (1..=n).fold(1 % self.0, |acc, i| self.mul(acc, i as u32))
    }

    /// Multinomial coefficient `(sum parts)! / prod(parts!)` mod p.
    pub fn multinomial(self, parts: &[u32]) -> u32 {
        let mut total = 0u64;
        let mut acc = 1 % self.0;
        for &k in parts {
            total += k as u64;
            acc = self.mul(acc, self.binomial(total, k as u64));
            if acc == 0 {
                break;
            }
        }
        acc
    }

    /// Representative in `(-p/2, p/2]`, used for display.
    pub fn signed(self, a: u32) -> i64 {
        if (a as u64) * 2 > self.0 as u64 {
            a as i64 - self.0 as i64
        } else {
            a as i64
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of F_p carrying its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u32,
    p: Prime,
}

/// The binary operations of [`FpScalar::apply`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FpOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl FpScalar {
    pub fn new(value: i64, p: Prime) -> Self {
        FpScalar {
            value: p.from_i64(value),
            p,
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> Prime {
        self.p
    }

    fn check(self, other: FpScalar) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch {
                left: self.p.get(),
                right: other.p.get(),
            });
        }
        Ok(())
    }

    /// Applies `op` exactly. For [`FpOp::Pow`] the value of `other` is the
    /// (non-negative) exponent.
    pub fn apply(self, op: FpOp, other: FpScalar) -> Result<FpScalar> {
        self.check(other)?;
        let p = self.p;
        let value = match op {
            FpOp::Add => p.add(self.value, other.value),
            FpOp::Sub => p.sub(self.value, other.value),
            FpOp::Mul => p.mul(self.value, other.value),
            FpOp::Div => {
                let inv = p.inv(other.value).ok_or(Error::DivisionByZero(p.get()))?;
                p.mul(self.value, inv)
            }
            FpOp::Pow => p.pow(self.value, other.value as u64),
        };
        Ok(FpScalar { value, p })
    }

    pub fn inverse(self) -> Result<FpScalar> {
        let value = self
            .p
            .inv(self.value)
            .ok_or(Error::DivisionByZero(self.p.get()))?;
        Ok(FpScalar { value, p: self.p })
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

/// Dense row-major matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    p: Prime,
    data: Vec<u32>,
}

/// Output of [`FpMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize, p: Prime) -> Self {
        FpMatrix {
            rows,
            cols,
            p,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, p: Prime) -> Self {
        let mut m = Self::zeros(n, n, p);
        for i in 0..n {
            m.data[i * n + i] = 1 % p.get();
        }
        m
    }

    /// Builds a matrix from rows; entries are reduced mod p.
    pub fn from_rows(rows: &[Vec<i64>], p: Prime) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            data.extend(row.iter().map(|&v| p.from_i64(v)));
        }
        Ok(FpMatrix {
            rows: rows.len(),
            cols,
            p,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<u32>], p: Prime) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols, p);
        for (j, c) in columns.iter().enumerate() {
            debug_assert_eq!(c.len(), rows);
            for (i, &v) in c.iter().enumerate() {
                m.data[i * cols + j] = v;
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

    pub fn modulus(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p.get();
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let p = self.p;
        let mut out = FpMatrix::zeros(self.rows, other.cols, p);
        let mut acc = vec![0u64; other.cols];
        // Entries are < 2^31, so each product is < 2^62; reduce after every add.
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for (acc_j, &b) in acc.iter_mut().zip(other.row(k)) {
                    if b != 0 {
                        *acc_j = (*acc_j + a * b as u64) % p.get() as u64;
                    }
                }
            }
            for (j, &a) in acc.iter().enumerate() {
                out.data[i * other.cols + j] = a as u32;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let p = self.p.get() as u64;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p)
                    as u32
            })
            .collect())
    }

    /// `self - c * I`; panics if the matrix is not square.
    pub fn minus_scalar_identity(&self, c: u32) -> FpMatrix {
        assert_eq!(self.rows, self.cols);
        let mut out = self.clone();
        for i in 0..self.rows {
            let v = out.get(i, i);
            out.data[i * self.cols + i] = self.p.sub(v, c);
        }
        out
    }

    /// Reduced row echelon form. Pivots are chosen as the first nonzero entry
    /// scanning each column top to bottom.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        Rref {
            rank: pivots.len(),
            matrix: m,
            pivots,
        }
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut lead_row = 0;
        for c in 0..cols {
            if lead_row == self.rows {
                break;
            }
            let Some(r) = (lead_row..self.rows).find(|&r| self.data[r * cols + c] != 0) else {
                continue;
            };
            if r != lead_row {
                for j in c..cols {
                    self.data.swap(r * cols + j, lead_row * cols + j);
                }
            }
            let inv = p
                .inv(self.data[lead_row * cols + c])
                .expect("pivot is nonzero");
            for j in c..cols {
                let idx = lead_row * cols + j;
                self.data[idx] = p.mul(self.data[idx], inv);
            }
            let pivot_row: Vec<u32> =
                self.data[lead_row * cols + c..(lead_row + 1) * cols].to_vec();
            for r in 0..self.rows {
                if r == lead_row {
                    continue;
                }
                let f = self.data[r * cols + c];
                if f == 0 {
                    continue;
                }
                let nf = (p.get() - f) as u64;
                let row = &mut self.data[r * cols + c..(r + 1) * cols];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    if y != 0 {
                        *x = ((*x as u64 + nf * y as u64) % p.get() as u64) as u32;
                    }
                }
            }
            pivots.push(c);
            lead_row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right null space, one vector per free column, each with a
    /// 1 in its free column.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let Rref { matrix, pivots, .. } = self.rref();
        let p = self.p;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u32; self.cols];
                v[free] = 1 % p.get();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = p.neg(matrix.get(r, free));
                }
                v
            })
            .collect()
    }
}

/// An incrementally built subspace of F_p^n held in semi-echelon form: each
/// stored row is monic at its pivot, the first nonzero coordinate.
#[derive(Clone, Debug)]
pub struct EchelonSpace {
    p: Prime,
    dim: usize,
    rows: BTreeMap<usize, Vec<u32>>,
}

impl EchelonSpace {
    pub fn new(dim: usize, p: Prime) -> Self {
        EchelonSpace {
            p,
            dim,
            rows: BTreeMap::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduces `v` against the stored rows; the result vanishes on every pivot.
    pub fn reduce(&self, mut v: Vec<u32>) -> Vec<u32> {
        debug_assert_eq!(v.len(), self.dim);
        let p = self.p;
        let pu = p.get() as u64;
        for (&c, row) in &self.rows {
            let f = v[c];
            if f == 0 {
                continue;
            }
            let nf = (pu - f as u64) % pu;
            for (x, &y) in v[c..].iter_mut().zip(&row[c..]) {
                if y != 0 {
                    *x = ((*x as u64 + nf * y as u64) % pu) as u32;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v.to_vec()).iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span. Returns `true` if the rank grew.
    pub fn insert(&mut self, v: Vec<u32>) -> bool {
        let mut v = self.reduce(v);
        let Some(pivot) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.p.inv(v[pivot]).expect("nonzero");
        for x in v[pivot..].iter_mut() {
            *x = self.p.mul(*x, inv);
        }
        self.rows.insert(pivot, v);
        true
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    /// Stored rows in pivot order.
    pub fn basis(&self) -> impl Iterator<Item = &[u32]> {
        self.rows.values().map(Vec::as_slice)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn primality_check() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(13).is_ok());
        assert_eq!(Prime::new(1), Err(Error::NotPrime(1)));
        assert_eq!(Prime::new(9), Err(Error::NotPrime(9)));
        assert!(Prime::new(2_147_483_647).is_ok());
    }

    #[test]
    fn scalar_ops() {
        let p3 = p(3);
        let a = FpScalar::new(2, p3);
        let b = FpScalar::new(4, p3);
        assert_eq!(a.apply(FpOp::Add, b).unwrap().value(), 0);

        let p5 = p(5);
        let one = FpScalar::new(1, p5);
        let two = FpScalar::new(2, p5);
        assert_eq!(one.apply(FpOp::Div, two).unwrap().value(), 3);

        let p7 = p(7);
        let r = FpScalar::new(2, p7)
            .apply(FpOp::Pow, FpScalar::new(6, p7))
            .unwrap();
        assert_eq!(r.value(), 1);
    }

    #[test]
    fn scalar_errors() {
        let a = FpScalar::new(1, p(3));
        let b = FpScalar::new(1, p(5));
        assert_eq!(
            a.apply(FpOp::Add, b),
            Err(Error::ModulusMismatch { left: 3, right: 5 })
        );
        let z = FpScalar::new(0, p(3));
        assert_eq!(a.apply(FpOp::Div, z), Err(Error::DivisionByZero(3)));
    }

    #[test]
    fn binomials_match_pascal() {
        for q in [2u64, 3, 5, 7] {
            let q = p(q);
            let mut row = vec![1u32];
            for n in 0..40u64 {
                for (k, &c) in row.iter().enumerate() {
                    assert_eq!(q.binomial(n, k as u64), c, "C({n},{k}) mod {q}");
                }
                let mut next = vec![1u32; row.len() + 1];
                for k in 1..row.len() {
                    next[k] = q.add(row[k - 1], row[k]);
                }
                row = next;
            }
        }
    }

    #[test]
    fn rref_examples() {
        let p5 = p(5);
        let id = FpMatrix::identity(3, p5).rref();
        assert_eq!(id.rank, 3);
        assert_eq!(id.pivots, vec![0, 1, 2]);

        let m = FpMatrix::from_rows(&[vec![1, 1], vec![2, 2]], p(3)).unwrap();
        assert_eq!(m.rank(), 1);

        let z = FpMatrix::zeros(2, 3, p5).rref();
        assert_eq!(z.rank, 0);
        assert!(z.pivots.is_empty());
    }

    #[test]
    fn kernel_examples() {
        let m = FpMatrix::from_rows(&[vec![1, 1], vec![2, 2]], p(3)).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k, vec![vec![2, 1]]);
        // (2, 1) is 2 * (1, 2): the same line.
        assert!(FpMatrix::identity(4, p(7)).kernel_basis().is_empty());
        assert_eq!(FpMatrix::zeros(1, 2, p(3)).kernel_basis().len(), 2);
    }

    #[test]
    fn echelon_space_tracks_span() {
        let q = p(3);
        let mut s = EchelonSpace::new(3, q);
        assert!(s.insert(vec![0, 1, 2]));
        assert!(!s.insert(vec![0, 2, 1]));
        assert!(s.insert(vec![1, 1, 1]));
        assert!(s.contains(&[1, 2, 0]));
        assert!(!s.contains(&[0, 0, 1]));
        assert_eq!(s.rank(), 2);
    }
}
