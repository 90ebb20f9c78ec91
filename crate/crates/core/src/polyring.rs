//! Sparse polynomials in `F_p[x_1, y_1, ..., x_m, y_m]`.
//!
//! Variables are addressed by block (0-based in code, 1-based when printed)
//! and kind. The total variable order is `y_1 > x_1 > y_2 > x_2 > ... > x_m`;
//! exponent vectors are laid out in that order, so slot `2i` is `y_{i+1}` and
//! slot `2i + 1` is `x_{i+1}`. Monomials compare by graded reverse
//! lexicographic order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::ffield::{FpMatrix, Prime};

pub type Exponent = u16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    X,
    Y,
}

/// One of the `2m` variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VarRef {
    pub block: usize,
    pub kind: VarKind,
}

impl VarRef {
    pub fn x(block: usize) -> Self {
        VarRef {
            block,
            kind: VarKind::X,
        }
    }

    pub fn y(block: usize) -> Self {
        VarRef {
            block,
            kind: VarKind::Y,
        }
    }

    /// Slot in the exponent vector.
    #[inline]
    pub fn slot(self) -> usize {
        2 * self.block
            + match self.kind {
                VarKind::Y => 0,
                VarKind::X => 1,
            }
    }

    pub fn from_slot(slot: usize) -> Self {
        VarRef {
            block: slot / 2,
            kind: if slot.is_multiple_of(2) {
                VarKind::Y
            } else {
                VarKind::X
            },
        }
    }
}

impl PartialOrd for VarRef {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VarRef {
    /// `y_1 > x_1 > y_2 > ...`: a smaller slot is a larger variable.
    fn cmp(&self, other: &Self) -> Ordering {
        other.slot().cmp(&self.slot())
    }
}

impl fmt::Display for VarRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            VarKind::X => 'x',
            VarKind::Y => 'y',
        };
        write!(f, "{}{}", k, self.block + 1)
    }
}

/// Multidegree `(λ_1, ..., λ_m)`: per-block total degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiDegree(pub Vec<u32>);

impl MultiDegree {
    pub fn new(parts: Vec<u32>) -> Self {
        MultiDegree(parts)
    }

    pub fn ones(m: usize) -> Self {
        MultiDegree(vec![1; m])
    }

    pub fn blocks(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// `Π (λ_i + 1)`, the dimension of the component.
    pub fn component_dim(&self) -> usize {
        self.0.iter().map(|&l| l as usize + 1).product()
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiDegree) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &MultiDegree) -> Option<MultiDegree> {
        if !other.le(self) {
            return None;
        }
        Some(MultiDegree(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// All multidegrees with `m` blocks and the given total, in lexicographic
    /// order of the parts.
    pub fn all_with_total(m: usize, total: u32) -> Vec<MultiDegree> {
        fn rec(m: usize, rest: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiDegree>) {
            if cur.len() + 1 == m {
                cur.push(rest);
                out.push(MultiDegree(cur.clone()));
                cur.pop();
                return;
            }
            for v in 0..=rest {
                cur.push(v);
                rec(m, rest - v, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if m == 0 {
            if total == 0 {
                out.push(MultiDegree(Vec::new()));
            }
            return out;
        }
        rec(m, total, &mut Vec::with_capacity(m), &mut out);
        out
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// A power product `z^E` over the `2m` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[Exponent; 8]>);

impl Monomial {
    pub fn one(m: usize) -> Self {
        Monomial(SmallVec::from_elem(0, 2 * m))
    }

    /// Exponents in slot order (`y_1, x_1, y_2, x_2, ...`).
    pub fn from_exponents(exps: &[Exponent]) -> Self {
        assert!(
            exps.len().is_multiple_of(2),
            "exponent vector must have even length"
        );
        Monomial(SmallVec::from_slice(exps))
    }

    /// Builds `Π x_i^{xs[i]} y_i^{ys[i]}`.
    pub fn from_xy(xs: &[Exponent], ys: &[Exponent]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let mut e = SmallVec::with_capacity(2 * xs.len());
        for (&x, &y) in xs.iter().zip(ys) {
            e.push(y);
            e.push(x);
        }
        Monomial(e)
    }

    pub fn var(m: usize, v: VarRef) -> Self {
        let mut e = Self::one(m);
        e.0[v.slot()] = 1;
        e
    }

    pub fn blocks(&self) -> usize {
        self.0.len() / 2
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.0
    }

    #[inline]
    pub fn exp(&self, v: VarRef) -> Exponent {
        self.0[v.slot()]
    }

    #[inline]
    pub fn x_exp(&self, block: usize) -> Exponent {
        self.0[2 * block + 1]
    }

    #[inline]
    pub fn y_exp(&self, block: usize) -> Exponent {
        self.0[2 * block]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn multidegree(&self) -> MultiDegree {
        MultiDegree(
            self.0
                .chunks_exact(2)
                .map(|c| c[0] as u32 + c[1] as u32)
                .collect(),
        )
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(
            self.0
                .iter()
                .map(|&a| Exponent::try_from(a as u32 * k).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other)
            .then(|| Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
    }

    /// Largest `k` with `self^k | other`; `None` if `self` is 1.
    pub fn max_power_dividing(&self, other: &Monomial) -> Option<u32> {
        let mut best: Option<u32> = None;
        for (&a, &b) in self.0.iter().zip(&other.0) {
            if let Some(k) = b.checked_div(a) {
                let k = k as u32;
                best = Some(best.map_or(k, |c| c.min(k)));
            }
        }
        best
    }

    /// Weight with `wt(x) = 1`, `wt(y) = -1`.
    pub fn weight(&self) -> i64 {
        self.0
            .chunks_exact(2)
            .map(|c| c[1] as i64 - c[0] as i64)
            .sum()
    }
}

/// Graded reverse lexicographic comparison; errors if the rings differ.
pub fn grevlex_cmp(a: &Monomial, b: &Monomial) -> Result<Ordering> {
    if a.0.len() != b.0.len() {
        return Err(Error::DimensionMismatch {
            expected: a.0.len(),
            got: b.0.len(),
        });
    }
    Ok(a.cmp(b))
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.0.len(), other.0.len());
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        // The smallest variable where the exponents differ decides; a smaller
        // exponent there makes the monomial larger.
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            match a.cmp(b) {
                Ordering::Equal => continue,
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for kind in [VarKind::X, VarKind::Y] {
            for block in 0..self.blocks() {
                let v = VarRef { block, kind };
                let e = self.exp(v);
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                if e == 1 {
                    write!(f, "{v}")?;
                } else {
                    write!(f, "{v}^{e}")?;
                }
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// A polynomial over F_p in `m` blocks of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    m: usize,
    p: Prime,
    terms: BTreeMap<Monomial, u32>,
}

impl Polynomial {
    pub fn zero(m: usize, p: Prime) -> Self {
        Polynomial {
            m,
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(m: usize, p: Prime, c: i64) -> Self {
        Self::monomial(Monomial::one(m), p, c)
    }

    pub fn one(m: usize, p: Prime) -> Self {
        Self::constant(m, p, 1)
    }

    pub fn monomial(mono: Monomial, p: Prime, c: i64) -> Self {
        let m = mono.blocks();
        let mut out = Self::zero(m, p);
        let c = p.from_i64(c);
        if c != 0 {
            out.terms.insert(mono, c);
        }
        out
    }

    pub fn var(m: usize, p: Prime, v: VarRef) -> Self {
        Self::monomial(Monomial::var(m, v), p, 1)
    }

    pub fn x(m: usize, p: Prime, block: usize) -> Self {
        Self::var(m, p, VarRef::x(block))
    }

    pub fn y(m: usize, p: Prime, block: usize) -> Self {
        Self::var(m, p, VarRef::y(block))
    }

    /// `u_ij = x_i y_j - x_j y_i`.
    pub fn u(m: usize, p: Prime, i: usize, j: usize) -> Self {
        let a = Monomial::var(m, VarRef::x(i)).mul(&Monomial::var(m, VarRef::y(j)));
        let b = Monomial::var(m, VarRef::x(j)).mul(&Monomial::var(m, VarRef::y(i)));
        Self::from_terms(m, p, [(a, 1), (b, -1)])
    }

    pub fn from_terms(
        m: usize,
        p: Prime,
        terms: impl IntoIterator<Item = (Monomial, i64)>,
    ) -> Self {
        let mut out = Self::zero(m, p);
        for (mono, c) in terms {
            assert_eq!(mono.blocks(), m, "monomial has the wrong number of blocks");
            out.add_term(mono, p.from_i64(c));
        }
        out
    }

    /// Adds `c * mono` in place.
    pub fn add_term(&mut self, mono: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        let p = self.p;
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = p.add(*e.get(), c);
                if s == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn blocks(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in grevlex-descending order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u32)> + ExactSizeIterator {
        self.terms.iter().rev().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, mono: &Monomial) -> u32 {
        self.terms.get(mono).copied().unwrap_or(0)
    }

    /// Grevlex-maximal term.
    pub fn lead(&self) -> Result<(Monomial, u32)> {
        self.terms
            .last_key_value()
            .map(|(m, &c)| (m.clone(), c))
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn lead_monomial(&self) -> Option<&Monomial> {
        self.terms.last_key_value().map(|(m, _)| m)
    }

    fn compatible(&self, other: &Polynomial) -> Result<()> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: other.m,
            });
        }
        if self.p != other.p {
            return Err(Error::ModulusMismatch {
                left: self.p.get(),
                right: other.p.get(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (mono, &c) in &other.terms {
            out.add_term(mono.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (mono, &c) in &other.terms {
            out.add_term(mono.clone(), self.p.neg(c));
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.compatible(other)?;
        let p = self.p;
        let pu = p.get() as u64;
        let mut acc: HashMap<Monomial, u64> = HashMap::with_capacity(self.len() * other.len());
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let e = acc.entry(a.mul(b)).or_insert(0);
                *e = (*e + ca as u64 * cb as u64) % pu;
            }
        }
        Ok(Polynomial {
            m: self.m,
            p,
            terms: acc
                .into_iter()
                .filter(|&(_, c)| c != 0)
                .map(|(k, c)| (k, c as u32))
                .collect(),
        })
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let c = c % self.p.get();
        if c == 0 {
            return Self::zero(self.m, self.p);
        }
        Polynomial {
            m: self.m,
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(k, &v)| (k.clone(), self.p.mul(v, c)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: u32) -> Polynomial {
        let mut out = Self::zero(self.m, self.p);
        for (k, &v) in &self.terms {
            out.add_term(k.mul(mono), self.p.mul(v, c));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Self::one(self.m, self.p);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// The common multidegree of all terms, if there is one.
    pub fn multidegree(&self) -> Option<MultiDegree> {
        let mut it = self.terms.keys().map(Monomial::multidegree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_multihomogeneous_of(&self, lambda: &MultiDegree) -> bool {
        self.terms.keys().all(|k| &k.multidegree() == lambda)
    }

    /// Projection `π_λ` onto one multidegree.
    pub fn project(&self, lambda: &MultiDegree) -> Polynomial {
        Polynomial {
            m: self.m,
            p: self.p,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| &k.multidegree() == lambda)
                .map(|(k, &c)| (k.clone(), c))
                .collect(),
        }
    }

    /// Makes the lead coefficient 1. Zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.terms.last_key_value() {
            None => self.clone(),
            Some((_, &c)) => self.scale(self.p.inv(c).expect("nonzero")),
        }
    }

    /// Relabels each monomial through `f`, summing collisions. `f` must
    /// produce monomials with `target_m` blocks.
    pub fn map_monomials(
        &self,
        target_m: usize,
        mut f: impl FnMut(&Monomial) -> Monomial,
    ) -> Polynomial {
        let mut out = Self::zero(target_m, self.p);
        for (k, &c) in &self.terms {
            out.add_term(f(k), c);
        }
        out
    }

    /// The algebra homomorphism sending slot `s` to `images[s]`.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != 2 * self.m {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.m,
                got: images.len(),
            });
        }
        let target_m = images.first().map_or(self.m, |f| f.m);
        for f in images {
            if f.m != target_m || f.p != self.p {
                return Err(Error::DimensionMismatch {
                    expected: target_m,
                    got: f.m,
                });
            }
        }
        let mut powers: HashMap<(usize, Exponent), Polynomial> = HashMap::new();
        let mut out = Self::zero(target_m, self.p);
        for (mono, &c) in &self.terms {
            let mut term = Self::constant(target_m, self.p, c as i64);
            for (slot, &e) in mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = powers
                    .entry((slot, e))
                    .or_insert_with(|| images[slot].pow(e as u32));
                term = &term * pw;
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Parses the canonical text form, e.g. `"x1*y2 - x2*y1"` or `"2*x1^3 + 1"`.
    pub fn parse(s: &str, m: usize, p: Prime) -> Result<Polynomial> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty input".into()));
        }
        let mut out = Self::zero(m, p);
        let bytes = s.as_bytes();
        let mut start = 0;
        let mut sign = 1i64;
        if bytes[0] == b'-' || bytes[0] == b'+' {
            sign = if bytes[0] == b'-' { -1 } else { 1 };
            start = 1;
        }
        let mut i = start;
        loop {
            if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^')
            {
                let (mono, c) = parse_term(&s[start..i], m)?;
                out.add_term(mono, p.from_i64(sign * c));
                if i == bytes.len() {
                    break;
                }
                sign = if bytes[i] == b'-' { -1 } else { 1 };
                start = i + 1;
            }
            i += 1;
        }
        Ok(out)
    }
}

fn parse_term(t: &str, m: usize) -> Result<(Monomial, i64)> {
    if t.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    let mut mono = Monomial::one(m);
    let mut c = 1i64;
    for factor in t.split('*') {
        let bad = || Error::Parse(format!("bad factor `{factor}`"));
        if let Ok(v) = factor.parse::<i64>() {
            c = c.checked_mul(v).ok_or_else(bad)?;
            continue;
        }
        let (kind, rest) = match factor.as_bytes().first() {
            Some(b'x') => (VarKind::X, &factor[1..]),
            Some(b'y') => (VarKind::Y, &factor[1..]),
            _ => return Err(bad()),
        };
        let (idx, e) = match rest.split_once('^') {
            Some((a, b)) => (a, b.parse::<Exponent>().map_err(|_| bad())?),
            None => (rest, 1),
        };
        let block: usize = idx.parse().map_err(|_| bad())?;
        if block == 0 || block > m {
            return Err(bad());
        }
        let slot = VarRef {
            block: block - 1,
            kind,
        }
        .slot();
        mono.0[slot] = mono.0[slot].checked_add(e).ok_or_else(bad)?;
    }
    Ok((mono, c))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (mono, c)) in self.terms().enumerate() {
            let s = self.p.signed(c);
            let mag = s.unsigned_abs();
            match (i, s < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mono.is_one() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("incompatible polynomial rings")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("incompatible polynomial rings")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("incompatible polynomial rings")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(self.p.neg(1))
    }
}

/// The graded piece `F[mV_2]_λ` with its monomial basis in grevlex-descending
/// order.
///
/// Within a fixed multidegree, a monomial is determined by its x-exponents
/// `(s_1, ..., s_m)` and the descending order is the ascending lexicographic
/// order on `(s_m, ..., s_1)`. Basis positions are therefore computed by mixed
/// radix arithmetic with `s_m` most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    lambda: MultiDegree,
    strides: Vec<usize>,
    dim: usize,
}

impl Component {
    pub fn new(lambda: MultiDegree) -> Self {
        let mut strides = Vec::with_capacity(lambda.blocks());
        let mut acc = 1usize;
        for &l in lambda.parts() {
            strides.push(acc);
            acc *= l as usize + 1;
        }
        Component {
            lambda,
            strides,
            dim: acc,
        }
    }

    pub fn multidegree(&self) -> &MultiDegree {
        &self.lambda
    }

    pub fn blocks(&self) -> usize {
        self.lambda.blocks()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn index_of(&self, mono: &Monomial) -> Option<usize> {
        if mono.blocks() != self.blocks() || mono.multidegree() != self.lambda {
            return None;
        }
        Some(
            (0..self.blocks())
                .map(|i| mono.x_exp(i) as usize * self.strides[i])
                .sum(),
        )
    }

    pub fn x_exponents_at(&self, mut idx: usize) -> Vec<u32> {
        self.lambda
            .0
            .iter()
            .map(|&l| {
                let r = l as usize + 1;
                let e = (idx % r) as u32;
                idx /= r;
                e
            })
            .collect()
    }

    pub fn monomial_at(&self, idx: usize) -> Monomial {
        let s = self.x_exponents_at(idx);
        let xs: Vec<Exponent> = s.iter().map(|&v| v as Exponent).collect();
        let ys: Vec<Exponent> = s
            .iter()
            .zip(&self.lambda.0)
            .map(|(&v, &l)| (l - v) as Exponent)
            .collect();
        Monomial::from_xy(&xs, &ys)
    }

    /// Monomial basis, grevlex-descending.
    pub fn basis(&self) -> Vec<Monomial> {
        (0..self.dim).map(|i| self.monomial_at(i)).collect()
    }

    pub fn to_vector(&self, f: &Polynomial) -> Result<Vec<u32>> {
        let mut v = vec![0u32; self.dim];
        for (mono, c) in f.terms() {
            let idx = self.index_of(mono).ok_or(Error::NotMultihomogeneous)?;
            v[idx] = c;
        }
        Ok(v)
    }

    pub fn from_vector(&self, v: &[u32], p: Prime) -> Polynomial {
        let mut out = Polynomial::zero(self.blocks(), p);
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                out.terms.insert(self.monomial_at(i), c % p.get());
            }
        }
        out
    }

    /// Matrix of `map` on this component: column `j` is the image of basis
    /// monomial `j`.
    pub fn operator_matrix(&self, map: &BlockLinearMap) -> FpMatrix {
        let p = map.p;
        let tables = map.block_tables(&self.lambda);
        let mut m = FpMatrix::zeros(self.dim, self.dim, p);
        for col in 0..self.dim {
            let s = self.x_exponents_at(col);
            for (row, c) in self.tensor_image(&tables, &s, p) {
                m.set(row, col, c);
            }
        }
        m
    }

    /// Matrix of `map` restricted to the basis columns listed in `cols`.
    pub fn operator_columns(&self, map: &BlockLinearMap, cols: &[usize]) -> Vec<Vec<u32>> {
        let p = map.p;
        let tables = map.block_tables(&self.lambda);
        cols.iter()
            .map(|&col| {
                let mut v = vec![0u32; self.dim];
                for (row, c) in self.tensor_image(&tables, &self.x_exponents_at(col), p) {
                    v[row] = c;
                }
                v
            })
            .collect()
    }

    fn tensor_image(&self, tables: &[Vec<Vec<u32>>], s: &[u32], p: Prime) -> Vec<(usize, u32)> {
        let mut acc: Vec<(usize, u32)> = vec![(0, 1 % p.get())];
        for (i, &si) in s.iter().enumerate() {
            let img = &tables[i][si as usize];
            let mut next = Vec::with_capacity(acc.len() * img.len());
            for &(idx, c) in &acc {
                for (t, &v) in img.iter().enumerate() {
                    if v != 0 {
                        next.push((idx + t * self.strides[i], p.mul(c, v)));
                    }
                }
            }
            acc = next;
        }
        acc
    }
}

/// The same 2×2 matrix `[[a, b], [c, d]]` applied to every block by
/// `x_i ↦ a x_i + c y_i`, `y_i ↦ b x_i + d y_i`, i.e. the row vector
/// `(x_i, y_i)` is multiplied on the right by the matrix.
///
/// With this convention `[[1, 1], [0, 1]]` is `σ: y ↦ y + x`, and composing
/// substitutions multiplies matrices in order: `apply(g, apply(h, f)) =
/// apply(g·h, f)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockLinearMap {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
    pub p: Prime,
}

impl BlockLinearMap {
    pub fn new(a: i64, b: i64, c: i64, d: i64, p: Prime) -> Self {
        BlockLinearMap {
            a: p.from_i64(a),
            b: p.from_i64(b),
            c: p.from_i64(c),
            d: p.from_i64(d),
            p,
        }
    }

    /// `σ^k: y ↦ y + k x`.
    pub fn sigma_power(k: u64, p: Prime) -> Self {
        Self::new(1, (k % p.get() as u64) as i64, 0, 1, p)
    }

    /// Dense image of `x^s y^(deg - s)` as coefficients of `x^t y^(deg - t)`.
    fn binary_form_image(&self, s: u32, deg: u32) -> Vec<u32> {
        let p = self.p;
        let t = deg - s;
        // (a x + c y)^s
        let first: Vec<u32> = (0..=s)
            .map(|j| {
                p.mul(
                    p.binomial(s as u64, j as u64),
                    p.mul(p.pow(self.a, j as u64), p.pow(self.c, (s - j) as u64)),
                )
            })
            .collect();
        // (b x + d y)^t
        let second: Vec<u32> = (0..=t)
            .map(|j| {
                p.mul(
                    p.binomial(t as u64, j as u64),
                    p.mul(p.pow(self.b, j as u64), p.pow(self.d, (t - j) as u64)),
                )
            })
            .collect();
        let mut out = vec![0u32; deg as usize + 1];
        for (i, &u) in first.iter().enumerate() {
            if u == 0 {
                continue;
            }
            for (j, &v) in second.iter().enumerate() {
                if v != 0 {
                    out[i + j] = p.add(out[i + j], p.mul(u, v));
                }
            }
        }
        out
    }

    fn block_tables(&self, lambda: &MultiDegree) -> Vec<Vec<Vec<u32>>> {
        let mut cache: HashMap<u32, Vec<Vec<u32>>> = HashMap::new();
        lambda
            .parts()
            .iter()
            .map(|&deg| {
                cache
                    .entry(deg)
                    .or_insert_with(|| (0..=deg).map(|s| self.binary_form_image(s, deg)).collect())
                    .clone()
            })
            .collect()
    }

    /// Applies the substitution to an arbitrary polynomial.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let p = self.p;
        let m = f.blocks();
        let mut out = Polynomial::zero(m, p);
        let mut cache: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
        for (mono, c) in f.terms() {
            // Expand block by block into (x-exponents, coefficient) pairs.
            let mut acc: Vec<(Vec<Exponent>, u32)> = vec![(Vec::with_capacity(m), c)];
            for i in 0..m {
                let s = mono.x_exp(i) as u32;
                let deg = s + mono.y_exp(i) as u32;
                let img = cache
                    .entry((s, deg))
                    .or_insert_with(|| self.binary_form_image(s, deg));
                let mut next = Vec::with_capacity(acc.len() * img.len());
                for (xs, cc) in &acc {
                    for (t, &v) in img.iter().enumerate() {
                        if v != 0 {
                            let mut xs2 = xs.clone();
                            xs2.push(t as Exponent);
                            next.push((xs2, p.mul(*cc, v)));
                        }
                    }
                }
                acc = next;
            }
            let degs = mono.multidegree();
            for (xs, cc) in acc {
                let ys: Vec<Exponent> = xs
                    .iter()
                    .zip(degs.parts())
                    .map(|(&x, &l)| (l as Exponent) - x)
                    .collect();
                out.add_term(Monomial::from_xy(&xs, &ys), cc);
            }
        }
        out
    }

    /// Matrix product `self · other` (apply `other` first, then `self`, as
    /// substitutions: `apply(self·other, f) = self.apply(other.apply(f))`).
    pub fn compose(&self, other: &BlockLinearMap) -> BlockLinearMap {
        let p = self.p;
        let dot = |a: u32, b: u32, c: u32, d: u32| p.add(p.mul(a, b), p.mul(c, d));
        BlockLinearMap {
            a: dot(self.a, other.a, self.b, other.c),
            b: dot(self.a, other.b, self.b, other.d),
            c: dot(self.c, other.a, self.d, other.c),
            d: dot(self.c, other.b, self.d, other.d),
            p,
        }
    }

    pub fn determinant(&self) -> u32 {
        self.p
            .sub(self.p.mul(self.a, self.d), self.p.mul(self.b, self.c))
    }
}

/// All monomials of multidegree `λ`, grevlex-descending.
pub fn component_basis(lambda: &MultiDegree) -> Vec<Monomial> {
    Component::new(lambda.clone()).basis()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn mono(m: usize, vars: &[(VarRef, Exponent)]) -> Monomial {
        let mut e = Monomial::one(m);
        for &(v, k) in vars {
            e.0[v.slot()] += k;
        }
        e
    }

    #[test]
    fn grevlex_examples() {
        let y1 = Monomial::var(1, VarRef::y(0));
        let x1 = Monomial::var(1, VarRef::x(0));
        assert_eq!(grevlex_cmp(&y1, &x1).unwrap(), Ordering::Greater);

        let x1y2 = mono(2, &[(VarRef::x(0), 1), (VarRef::y(1), 1)]);
        let x2y1 = mono(2, &[(VarRef::x(1), 1), (VarRef::y(0), 1)]);
        assert_eq!(grevlex_cmp(&x1y2, &x2y1).unwrap(), Ordering::Greater);

        let x1sq = mono(1, &[(VarRef::x(0), 2)]);
        assert_eq!(grevlex_cmp(&x1sq, &y1).unwrap(), Ordering::Greater);

        assert!(grevlex_cmp(&y1, &x1y2).is_err());
    }

    #[test]
    fn lead_of_u12_is_x1_y2() {
        let u = Polynomial::u(2, p(5), 0, 1);
        let (lm, c) = u.lead().unwrap();
        assert_eq!(lm.to_string(), "x1*y2");
        assert_eq!(c, 1);
        assert_eq!(u.to_string(), "x1*y2 - x2*y1");
    }

    #[test]
    fn arithmetic_examples() {
        let q = p(5);
        let x1 = Polynomial::x(1, q, 0);
        let y1 = Polynomial::y(1, q, 0);
        assert_eq!(&(&x1 + &y1) - &y1, x1);

        let p2 = p(2);
        let u = Polynomial::u(2, p2, 0, 1);
        assert_eq!((&u * &u).to_string(), "x1^2*y2^2 + x2^2*y1^2");

        let zero = Polynomial::zero(1, q);
        assert!((&x1 * &zero).is_zero());
        assert_eq!(zero.lead(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = Polynomial::x(1, p(5), 0);
        let b = Polynomial::x(2, p(5), 0);
        assert!(matches!(
            a.try_add(&b),
            Err(Error::DimensionMismatch { .. })
        ));
        let c = Polynomial::x(1, p(3), 0);
        assert!(matches!(a.try_mul(&c), Err(Error::ModulusMismatch { .. })));
    }

    #[test]
    fn component_basis_order_and_size() {
        let b = component_basis(&MultiDegree::new(vec![1]));
        assert_eq!(
            b.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            ["y1", "x1"]
        );

        let b = component_basis(&MultiDegree::new(vec![1, 1]));
        let names: Vec<String> = b.iter().map(|m| m.to_string()).collect();
        assert_eq!(names, ["y1*y2", "x1*y2", "x2*y1", "x1*x2"]);

        let lam = MultiDegree::new(vec![1, 1, 1, 2]);
        let b = component_basis(&lam);
        assert_eq!(b.len(), 24);
        for w in b.windows(2) {
            assert!(w[0] > w[1]);
        }
    }

    #[test]
    fn component_round_trip() {
        let q = p(7);
        let c = Component::new(MultiDegree::new(vec![2, 0, 3]));
        for (i, mono) in c.basis().iter().enumerate() {
            assert_eq!(c.index_of(mono), Some(i));
        }
        let f = Polynomial::parse("3*x1^2*y3^3 - x1*y1*x3^2*y3", 3, q).unwrap();
        let v = c.to_vector(&f).unwrap();
        assert_eq!(c.from_vector(&v, q), f);
    }

    #[test]
    fn parse_and_print() {
        let q = p(7);
        let f = Polynomial::parse("x1*y2 - x2*y1", 2, q).unwrap();
        assert_eq!(f, Polynomial::u(2, q, 0, 1));
        let g = Polynomial::parse("-2*x1^3 + 5 + y2", 2, q).unwrap();
        assert_eq!(g.to_string(), "-2*x1^3 + y2 - 2");
        assert!(Polynomial::parse("z1", 2, q).is_err());
        assert!(Polynomial::parse("x3", 2, q).is_err());
    }

    #[test]
    fn sigma_substitution() {
        let q = p(5);
        let sigma = BlockLinearMap::sigma_power(1, q);
        let y1 = Polynomial::y(1, q, 0);
        assert_eq!(sigma.apply(&y1).to_string(), "y1 + x1");
        let u = Polynomial::u(2, q, 0, 1);
        assert_eq!(sigma.apply(&u), u);
    }

    #[test]
    fn operator_matrix_matches_apply() {
        let q = p(3);
        let lam = MultiDegree::new(vec![2, 1]);
        let comp = Component::new(lam);
        let g = BlockLinearMap::new(2, 1, 1, 1, q);
        let mat = comp.operator_matrix(&g);
        for (j, mono) in comp.basis().into_iter().enumerate() {
            let img = g.apply(&Polynomial::monomial(mono, q, 1));
            assert_eq!(comp.to_vector(&img).unwrap(), mat.column(j));
        }
    }

    #[test]
    fn substitute_is_algebra_map() {
        let q = p(3);
        let f = Polynomial::parse("x1*y1^2 + x1", 1, q).unwrap();
        // x1 -> x1 + x2, y1 -> y1 + y2 in two blocks
        let images = vec![
            Polynomial::parse("y1 + y2", 2, q).unwrap(),
            Polynomial::parse("x1 + x2", 2, q).unwrap(),
        ];
        let g = f.substitute(&images).unwrap();
        let expect = &(&images[1] * &images[0].pow(2)) + &images[1];
        assert_eq!(g, expect);
    }
}
