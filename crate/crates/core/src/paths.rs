//! Lattice paths, their PDP/IDP classification, the counting recursions, and
//! the invariants `θ(γ)` that realize `⊗^d V_2` as a sum of indecomposables.

use std::fmt;
use std::str::FromStr;

use crate::cpaction::{transfer, ModuleDecomposition};
use crate::error::{Error, Result};
use crate::ffield::Prime;
use crate::polyring::{Monomial, Polynomial};

pub const MAX_PATH_LEN: usize = 63;

/// A word over `{x, y}`. Step `i` is stored in bit `i`; a set bit is a y-step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticePath {
    bits: u64,
    len: u8,
}

impl LatticePath {
    pub fn empty() -> Self {
        LatticePath { bits: 0, len: 0 }
    }

    pub fn from_steps(ys: impl IntoIterator<Item = bool>) -> Self {
        let mut out = Self::empty();
        for y in ys {
            assert!((out.len as usize) < MAX_PATH_LEN, "path too long");
            if y {
                out.bits |= 1 << out.len;
            }
            out.len += 1;
        }
        out
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn is_y(&self, i: usize) -> bool {
        debug_assert!(i < self.len());
        self.bits >> i & 1 == 1
    }

    pub fn steps(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(|i| self.is_y(i))
    }

    /// `max over prefixes of (#x - #y)`.
    pub fn height(&self) -> i32 {
        let mut h = 0;
        let mut best = 0;
        for y in self.steps() {
            h += if y { -1 } else { 1 };
            best = best.max(h);
        }
        best
    }

    /// `#x - #y`.
    pub fn finishing_height(&self) -> i32 {
        let ys = self.bits.count_ones() as i32;
        self.len as i32 - 2 * ys
    }

    pub fn prefix(&self, s: usize) -> LatticePath {
        assert!(s <= self.len());
        let mask = if s == 64 { u64::MAX } else { (1u64 << s) - 1 };
        LatticePath {
            bits: self.bits & mask,
            len: s as u8,
        }
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for y in self.steps() {
            f.write_str(if y { "y" } else { "x" })?;
        }
        Ok(())
    }
}

impl FromStr for LatticePath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() > MAX_PATH_LEN {
            return Err(Error::Parse(format!(
                "path longer than {MAX_PATH_LEN} steps"
            )));
        }
        let steps = s
            .chars()
            .map(|c| match c {
                'x' | 'X' => Ok(false),
                'y' | 'Y' => Ok(true),
                _ => Err(Error::Parse(format!("bad path step `{c}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticePath::from_steps(steps))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathClass {
    /// Partial Dyck path of height at most `p - 2` with this finishing height.
    Pdp(u32),
    /// Initial Dyck path of escape height `p - 1`.
    Idp,
    Neither,
}

impl PathClass {
    /// Dimension of the summand `V(γ)`.
    pub fn summand_dim(self, p: Prime) -> Option<usize> {
        match self {
            PathClass::Pdp(h) => Some(h as usize + 1),
            PathClass::Idp => Some(p.get() as usize),
            PathClass::Neither => None,
        }
    }
}

impl fmt::Display for PathClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathClass::Pdp(h) => write!(f, "PDP({h})"),
            PathClass::Idp => write!(f, "IDP"),
            PathClass::Neither => write!(f, "neither"),
        }
    }
}

/// Walks the path: it is an IDP as soon as the height reaches `p - 1` without
/// having gone above the diagonal, `Neither` if it goes above the diagonal
/// first, and otherwise a PDP whose height stayed below `p - 1`.
pub fn classify_path(path: &LatticePath, p: Prime) -> PathClass {
    escape_point(path, p).0
}

/// The class together with the escape step `s` (the prefix length at which an
/// IDP first reaches height `p - 1`).
fn escape_point(path: &LatticePath, p: Prime) -> (PathClass, Option<usize>) {
    let escape = p.get() as i32 - 1;
    let mut h = 0i32;
    for (i, y) in path.steps().enumerate() {
        h += if y { -1 } else { 1 };
        if h < 0 {
            return (PathClass::Neither, None);
        }
        if h == escape {
            return (PathClass::Idp, Some(i + 1));
        }
    }
    (PathClass::Pdp(h as u32), None)
}

/// All paths of length `d` in `PDP_d^{p-2} ⊔ IDP_d^{p-1}`, ordered by word
/// (`x < y`).
pub fn enumerate_paths(d: usize, p: Prime) -> Vec<(LatticePath, PathClass)> {
    assert!(d <= 40, "enumeration beyond 2^40 words is not supported");
    let mut out = Vec::new();
    for w in 0u64..(1u64 << d) {
        // Step i is the (d-1-i)-th bit of w so that counting order is word order.
        let bits = if d == 0 {
            0
        } else {
            w.reverse_bits() >> (64 - d)
        };
        let path = LatticePath { bits, len: d as u8 };
        let c = classify_path(&path, p);
        if c != PathClass::Neither {
            out.push((path, c));
        }
    }
    out
}

/// Counts of paths by class: `by_height[h]` PDPs of finishing height `h`
/// (`0 <= h <= p-2`) and `idp` initial Dyck paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCounts {
    pub by_height: Vec<u64>,
    pub idp: u64,
}

pub fn count_paths_brute(d: usize, p: Prime) -> PathCounts {
    let mut by_height = vec![0u64; p.get() as usize - 1];
    let mut idp = 0;
    for (_, c) in enumerate_paths(d, p) {
        match c {
            PathClass::Pdp(h) => by_height[h as usize] += 1,
            PathClass::Idp => idp += 1,
            PathClass::Neither => unreachable!(),
        }
    }
    PathCounts { by_height, idp }
}

/// `μ_p^d(h)`, `ν_{p-2}^d(h)` and `ν̄_{p-1}^d` for `0 <= d <= d_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTables {
    pub p: Prime,
    pub d_max: usize,
    /// `mu[d][h - 1]` for `1 <= h <= p`.
    pub mu: Vec<Vec<u64>>,
    /// `nu[d][h]` for `0 <= h <= p - 2`.
    pub nu: Vec<Vec<u64>>,
    /// `nu_bar[d]`.
    pub nu_bar: Vec<u64>,
}

impl CountTables {
    pub fn mu(&self, d: usize, h: usize) -> u64 {
        self.mu[d][h - 1]
    }

    pub fn nu(&self, d: usize, h: usize) -> u64 {
        self.nu[d][h]
    }

    pub fn nu_bar(&self, d: usize) -> u64 {
        self.nu_bar[d]
    }

    /// `μ_p^d(h) = ν_{p-2}^d(h-1)` for `h < p` and `μ_p^d(p) = ν̄_{p-1}^d`.
    pub fn corollary_holds(&self) -> bool {
        let p = self.p.get() as usize;
        (0..=self.d_max).all(|d| {
            (1..p).all(|h| self.mu(d, h) == self.nu(d, h - 1)) && self.mu(d, p) == self.nu_bar(d)
        })
    }
}

/// `ν_q^d(h)` for `0 <= h <= q`, one row per `d`.
pub fn nu_table(q: usize, d_max: usize) -> Vec<Vec<u64>> {
    let mut rows = vec![vec![0u64; q + 1]];
    rows[0][0] = 1;
    for d in 0..d_max {
        let prev = &rows[d];
        let next: Vec<u64> = (0..=q)
            .map(|h| {
                let down = if h >= 1 { prev[h - 1] } else { 0 };
                let up = if h < q { prev[h + 1] } else { 0 };
                down + up
            })
            .collect();
        rows.push(next);
    }
    rows
}

/// `ν̄_q^d` from `ν̄_q^{d+1} = ν_{q-1}^d(q-1) + 2 ν̄_q^d`, `ν̄_q^0 = 0`.
pub fn nu_bar_table(q: usize, d_max: usize) -> Vec<u64> {
    assert!(q >= 1);
    let nu = nu_table(q - 1, d_max);
    let mut out = vec![0u64];
    for d in 0..d_max {
        out.push(nu[d][q - 1] + 2 * out[d]);
    }
    out
}

/// `μ_p^d(h)` from the tensor rules `V_1 ⊗ V_2 = V_2`,
/// `V_h ⊗ V_2 = V_{h-1} ⊕ V_{h+1}` (`2 <= h <= p-1`) and `V_p ⊗ V_2 = 2 V_p`.
pub fn mu_table(p: Prime, d_max: usize) -> Vec<Vec<u64>> {
    let p = p.get() as usize;
    let mut rows = vec![vec![0u64; p]];
    rows[0][0] = 1;
    for d in 0..d_max {
        let prev = &rows[d];
        let mut next = vec![0u64; p];
        for h in 1..=p {
            let c = prev[h - 1];
            if c == 0 {
                continue;
            }
            if h == p {
                next[p - 1] += 2 * c;
            } else if h == 1 {
                next[1] += c;
            } else {
                next[h - 2] += c;
                next[h] += c;
            }
        }
        rows.push(next);
    }
    rows
}

pub fn count_tables(d_max: usize, p: Prime) -> CountTables {
    assert!(d_max <= MAX_PATH_LEN, "counts overflow beyond d = 63");
    let pu = p.get() as usize;
    CountTables {
        p,
        d_max,
        mu: mu_table(p, d_max),
        nu: nu_table(pu - 2, d_max),
        nu_bar: nu_bar_table(pu - 1, d_max),
    }
}

/// The greedy matching of y-steps with earlier x-steps, with positions
/// 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    /// `rho[j]` is the x-position matched to the y-step at `j`.
    pub rho: Vec<Option<usize>>,
    pub i1: Vec<usize>,
    pub i2: Vec<usize>,
    pub i3: Vec<usize>,
    pub i4: Vec<usize>,
    pub i5: Vec<usize>,
    /// Length of the PDP prefix for an IDP; the whole length for a PDP.
    pub s: usize,
    pub class: PathClass,
}

impl Matching {
    /// Pairs `(ρ(j), j)` in increasing `j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.i1.iter().map(|&j| (self.rho[j].expect("matched"), j))
    }
}

pub fn match_path(path: &LatticePath, p: Prime) -> Result<Matching> {
    let (class, escape) = escape_point(path, p);
    let s = match class {
        PathClass::Neither => return Err(Error::NotInDomain(path.to_string())),
        PathClass::Pdp(_) => path.len(),
        PathClass::Idp => escape.expect("IDP has an escape step"),
    };
    let d = path.len();
    let mut rho = vec![None; d];
    let mut open: Vec<usize> = Vec::new();
    let mut i1 = Vec::new();
    let mut matched = vec![false; d];
    for j in 0..s {
        if path.is_y(j) {
            let i = open.pop().ok_or(Error::UnmatchedY(j + 1))?;
            rho[j] = Some(i);
            matched[i] = true;
            matched[j] = true;
            i1.push(j);
        } else {
            open.push(j);
        }
    }
    let mut i2: Vec<usize> = i1.iter().map(|&j| rho[j].unwrap()).collect();
    i2.sort_unstable();
    let i3: Vec<usize> = (0..s).filter(|&i| !matched[i]).collect();
    let i4: Vec<usize> = (s..d).filter(|&i| !path.is_y(i)).collect();
    let i5: Vec<usize> = (s..d).filter(|&i| path.is_y(i)).collect();
    Ok(Matching {
        rho,
        i1,
        i2,
        i3,
        i4,
        i5,
        s,
        class,
    })
}

/// `Λ(γ) = z_1 ⋯ z_d` with `z_i = x_i` on x-steps and `y_i` on y-steps.
pub fn lambda_monomial(path: &LatticePath) -> Monomial {
    let d = path.len();
    let xs: Vec<u16> = path.steps().map(|y| u16::from(!y)).collect();
    let ys: Vec<u16> = path.steps().map(u16::from).collect();
    debug_assert_eq!(xs.len(), d);
    Monomial::from_xy(&xs, &ys)
}

fn product_of_vars(d: usize, p: Prime, idx: &[usize], y: bool) -> Polynomial {
    let mut xs = vec![0u16; d];
    let mut ys = vec![0u16; d];
    for &i in idx {
        if y {
            ys[i] += 1;
        } else {
            xs[i] += 1;
        }
    }
    Polynomial::monomial(Monomial::from_xy(&xs, &ys), p, 1)
}

fn u_product(d: usize, p: Prime, m: &Matching) -> Polynomial {
    m.pairs().fold(Polynomial::one(d, p), |acc, (i, j)| {
        &acc * &Polynomial::u(d, p, i, j)
    })
}

/// The socle generator `θ(γ)` of the summand `V(γ)`.
pub fn theta(path: &LatticePath, p: Prime) -> Result<Polynomial> {
    let d = path.len();
    let m = match_path(path, p)?;
    let us = u_product(d, p, &m);
    Ok(match m.class {
        PathClass::Pdp(_) => &us * &product_of_vars(d, p, &m.i3, false),
        PathClass::Idp => {
            let mut ys = m.i3.clone();
            ys.extend_from_slice(&m.i5);
            let tr = transfer(&product_of_vars(d, p, &ys, true));
            &(&tr * &us) * &product_of_vars(d, p, &m.i4, false)
        }
        PathClass::Neither => unreachable!(),
    })
}

/// The generator `θ'(γ)` of the summand `V(γ)`.
pub fn theta_prime(path: &LatticePath, p: Prime) -> Result<Polynomial> {
    let d = path.len();
    let m = match_path(path, p)?;
    let us = u_product(d, p, &m);
    let mut ys = m.i3.clone();
    ys.extend_from_slice(&m.i5);
    Ok(&(&us * &product_of_vars(d, p, &ys, true)) * &product_of_vars(d, p, &m.i4, false))
}

/// One summand per path, with its dimension.
pub fn tensor_decompose(d: usize, p: Prime) -> Vec<(LatticePath, usize)> {
    enumerate_paths(d, p)
        .into_iter()
        .map(|(g, c)| {
            (
                g,
                c.summand_dim(p)
                    .expect("enumerated paths are in the domain"),
            )
        })
        .collect()
}

/// Aggregated multiplicities of `⊗^d V_2` from the path decomposition.
pub fn tensor_decomposition(d: usize, p: Prime) -> ModuleDecomposition {
    let mut out = ModuleDecomposition::zero(p);
    for (_, n) in tensor_decompose(d, p) {
        out.add_summand(n, 1);
    }
    out
}
