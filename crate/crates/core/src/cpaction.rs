//! The action of `C_p = <σ>` on `F[mV_2]`, with `σ(x_i) = x_i` and
//! `σ(y_i) = y_i + x_i`.

use std::fmt;

use crate::error::{Error, Result};
use crate::ffield::{EchelonSpace, FpMatrix, Prime};
use crate::polyring::{BlockLinearMap, Component, MultiDegree, Polynomial};

/// `σ^k(f)`: substitutes `y_i ↦ y_i + k x_i`.
pub fn apply_sigma(f: &Polynomial, k: u64) -> Polynomial {
    BlockLinearMap::sigma_power(k, f.modulus()).apply(f)
}

/// `(σ - 1)^r (f)`.
pub fn delta_power(f: &Polynomial, r: u32) -> Polynomial {
    let mut g = f.clone();
    for _ in 0..r {
        if g.is_zero() {
            break;
        }
        g = &apply_sigma(&g, 1) - &g;
    }
    g
}

pub fn is_invariant(f: &Polynomial) -> bool {
    &apply_sigma(f, 1) == f
}

/// `Tr(f) = Σ_{k=0}^{p-1} σ^k(f)`.
pub fn transfer(f: &Polynomial) -> Polynomial {
    let p = f.modulus();
    let mut acc = f.clone();
    for k in 1..p.get() as u64 {
        acc = &acc + &apply_sigma(f, k);
    }
    acc
}

/// `N(y_i) = Π_k (y_i + k x_i) = y_i^p - x_i^(p-1) y_i`, computed as the product.
pub fn norm(m: usize, p: Prime, block: usize) -> Polynomial {
    let y = Polynomial::y(m, p, block);
    let mut acc = Polynomial::one(m, p);
    for k in 0..p.get() as u64 {
        acc = &acc * &apply_sigma(&y, k);
    }
    acc
}

/// `Σ_{i=0}^{p-1} i^t`, which is `-1` when `(p-1) | t` and `0` otherwise.
pub fn power_sum(t: u64, p: Prime) -> u32 {
    assert!(t >= 1, "power_sum needs a positive exponent");
    if t.is_multiple_of(p.get() as u64 - 1) {
        p.neg(1)
    } else {
        0
    }
}

/// Direct evaluation of the sum, for cross-checking [`power_sum`].
pub fn power_sum_brute(t: u64, p: Prime) -> u32 {
    (0..p.get()).fold(0, |acc, i| p.add(acc, p.pow(i, t)))
}

/// Multiplicities `(m_1, ..., m_p)` of the indecomposables `V_1, ..., V_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleDecomposition {
    p: Prime,
    multiplicities: Vec<u64>,
}

impl ModuleDecomposition {
    pub fn new(p: Prime, multiplicities: Vec<u64>) -> Self {
        assert_eq!(multiplicities.len(), p.get() as usize);
        ModuleDecomposition { p, multiplicities }
    }

    pub fn zero(p: Prime) -> Self {
        Self::new(p, vec![0; p.get() as usize])
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.multiplicities
    }

    /// Multiplicity of `V_n`, `1 <= n <= p`.
    pub fn multiplicity(&self, n: usize) -> u64 {
        self.multiplicities[n - 1]
    }

    pub fn add_summand(&mut self, n: usize, count: u64) {
        self.multiplicities[n - 1] += count;
    }

    /// `Σ i m_i`.
    pub fn dim(&self) -> u64 {
        self.summands().map(|(n, c)| n as u64 * c).sum()
    }

    /// `Σ m_i`, the dimension of the fixed points.
    pub fn socle_dim(&self) -> u64 {
        self.multiplicities.iter().sum()
    }

    /// Nonzero `(n, m_n)` pairs in increasing `n`.
    pub fn summands(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.multiplicities
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (i + 1, c))
    }

    pub fn with_projectives(&self, t: u64) -> Self {
        let mut out = self.clone();
        out.add_summand(self.p.get() as usize, t);
        out
    }
}

impl fmt::Display for ModuleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.summands() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c == 1 {
                write!(f, "V{n}")?;
            } else {
                write!(f, "{c}V{n}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `σ - 1` materialized on one graded component, with the images of its
/// powers kept in echelon form.
#[derive(Clone, Debug)]
pub struct SigmaOperator {
    component: Component,
    p: Prime,
    delta: FpMatrix,
    /// `images[r]` spans the image of `(σ - 1)^r`; `images[0]` is everything.
    images: Vec<EchelonSpace>,
}

impl SigmaOperator {
    pub fn new(lambda: &MultiDegree, p: Prime) -> Self {
        let component = Component::new(lambda.clone());
        let n = component.dim();
        let delta = component
            .operator_matrix(&BlockLinearMap::sigma_power(1, p))
            .minus_scalar_identity(1);
        let mut images = Vec::with_capacity(p.get() as usize + 1);
        let mut full = EchelonSpace::new(n, p);
        for i in 0..n {
            let mut e = vec![0u32; n];
            e[i] = 1;
            full.insert(e);
        }
        images.push(full);
        // Image of N^{r+1} is N applied to a spanning set of the image of N^r.
        for r in 0..p.get() as usize {
            let mut next = EchelonSpace::new(n, p);
            for v in images[r].basis() {
                let w = delta.mul_vec(v).expect("square operator");
                next.insert(w);
            }
            let done = next.rank() == 0;
            images.push(next);
            if done {
                break;
            }
        }
        SigmaOperator {
            component,
            p,
            delta,
            images,
        }
    }

    pub fn component(&self) -> &Component {
        &self.component
    }

    pub fn delta(&self) -> &FpMatrix {
        &self.delta
    }

    /// `rank (σ - 1)^j`.
    pub fn rank_of_power(&self, j: usize) -> usize {
        self.images.get(j).map_or(0, EchelonSpace::rank)
    }

    /// Rank profile `d_0, ..., d_{p+1}`.
    pub fn rank_profile(&self) -> Vec<usize> {
        (0..=self.p.get() as usize + 1)
            .map(|j| self.rank_of_power(j))
            .collect()
    }

    pub fn decomposition(&self) -> ModuleDecomposition {
        let d = self.rank_profile();
        let p = self.p.get() as usize;
        let mult: Vec<u64> = (1..=p)
            .map(|i| {
                let v = d[i - 1] as i64 - 2 * d[i] as i64 + d[i + 1] as i64;
                debug_assert!(v >= 0);
                v as u64
            })
            .collect();
        let out = ModuleDecomposition::new(self.p, mult);
        debug_assert!(satisfies_rank_system(&out, &d));
        out
    }

    pub fn is_invariant_vector(&self, v: &[u32]) -> bool {
        self.delta
            .mul_vec(v)
            .expect("vector has component dimension")
            .iter()
            .all(|&c| c == 0)
    }

    /// Length of an invariant vector in this component.
    pub fn length_of_vector(&self, v: &[u32]) -> Result<u32> {
        if v.len() != self.component.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.component.dim(),
                got: v.len(),
            });
        }
        if v.iter().all(|&c| c == 0) {
            return Err(Error::ZeroPolynomial);
        }
        if !self.is_invariant_vector(v) {
            return Err(Error::NotInvariant);
        }
        let mut r = 0;
        while r + 1 < self.images.len() && self.images[r + 1].contains(v) {
            r += 1;
        }
        Ok(r as u32 + 1)
    }

    pub fn length(&self, f: &Polynomial) -> Result<u32> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let v = self.component.to_vector(f)?;
        self.length_of_vector(&v)
    }

    /// `W_h = ker(σ - 1) ∩ im(σ - 1)^{h-1}` for `h = 1, ..., p`: the invariants
    /// of length at least `h`. Entry `h - 1` holds `W_h`.
    pub fn socle_filtration(&self) -> Vec<EchelonSpace> {
        let n = self.component.dim();
        (0..self.p.get() as usize)
            .map(|r| {
                let mut w = EchelonSpace::new(n, self.p);
                let Some(img) = self.images.get(r) else {
                    return w;
                };
                let basis: Vec<Vec<u32>> = img.basis().map(<[u32]>::to_vec).collect();
                if basis.is_empty() {
                    return w;
                }
                // Solve N·(Σ c_k b_k) = 0 for the coefficients c.
                let cols: Vec<Vec<u32>> = basis
                    .iter()
                    .map(|b| self.delta.mul_vec(b).expect("square operator"))
                    .collect();
                let nb = FpMatrix::from_columns(n, &cols, self.p);
                for c in nb.kernel_basis() {
                    let mut v = vec![0u32; n];
                    for (ck, b) in c.iter().zip(&basis) {
                        if *ck == 0 {
                            continue;
                        }
                        for (x, &y) in v.iter_mut().zip(b) {
                            *x = self.p.add(*x, self.p.mul(*ck, y));
                        }
                    }
                    w.insert(v);
                }
                w
            })
            .collect()
    }

    /// For each basis position that is the lead monomial of some invariant,
    /// the largest length of an invariant with that lead monomial.
    pub fn lead_lengths(&self) -> Vec<Option<u32>> {
        let mut out = vec![None; self.component.dim()];
        for (h, w) in self.socle_filtration().iter().enumerate() {
            for piv in w.pivots() {
                out[piv] = Some(h as u32 + 1);
            }
        }
        out
    }

    /// Basis of the fixed points in reduced echelon form with respect to the
    /// grevlex-descending monomial basis.
    pub fn invariant_vectors(&self) -> Vec<Vec<u32>> {
        let kernel = self.delta.kernel_basis();
        if kernel.is_empty() {
            return kernel;
        }
        let n = self.component.dim();
        let mut m = FpMatrix::zeros(kernel.len(), n, self.p);
        for (r, v) in kernel.iter().enumerate() {
            for (c, &x) in v.iter().enumerate() {
                m.set(r, c, x);
            }
        }
        let red = m.rref();
        (0..red.rank).map(|r| red.matrix.row(r).to_vec()).collect()
    }
}

/// Checks `Σ_{i>j} (i - j) m_i = d_j` for every `j`.
pub fn satisfies_rank_system(dec: &ModuleDecomposition, d: &[usize]) -> bool {
    let p = dec.modulus().get() as usize;
    (0..=p).all(|j| {
        let lhs: u64 = (j + 1..=p)
            .map(|i| (i - j) as u64 * dec.multiplicity(i))
            .sum();
        lhs == d.get(j).copied().unwrap_or(0) as u64
    })
}

/// Basis of `F[mV_2]^{C_p}_λ`: distinct monic leads, reduced echelon form.
pub fn invariant_basis(lambda: &MultiDegree, p: Prime) -> Vec<Polynomial> {
    let op = SigmaOperator::new(lambda, p);
    op.invariant_vectors()
        .iter()
        .map(|v| op.component().from_vector(v, p))
        .collect()
}

/// Length of a nonzero multihomogeneous invariant.
pub fn length(f: &Polynomial) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let lambda = f.multidegree().ok_or(Error::NotMultihomogeneous)?;
    if !is_invariant(f) {
        return Err(Error::NotInvariant);
    }
    SigmaOperator::new(&lambda, f.modulus()).length(f)
}

/// Length of the summand attached to `LM(f)`: the largest length of any
/// invariant whose lead monomial is `LM(f)`. This can exceed `length(f)` when
/// lower terms of `f` pull it into a shorter summand.
pub fn lead_length(f: &Polynomial) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let lambda = f.multidegree().ok_or(Error::NotMultihomogeneous)?;
    if !is_invariant(f) {
        return Err(Error::NotInvariant);
    }
    let op = SigmaOperator::new(&lambda, f.modulus());
    let idx = op
        .component()
        .index_of(f.lead_monomial().expect("nonzero"))
        .expect("lead lies in the component");
    Ok(op.lead_lengths()[idx].expect("invariant leads are covered"))
}

pub fn decompose_component(lambda: &MultiDegree, p: Prime) -> ModuleDecomposition {
    SigmaOperator::new(lambda, p).decomposition()
}

/// `F[V]_d ≅ F[V]_r ⊕ t V_p` with `r_i = d_i mod p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicityResult {
    pub reduced: MultiDegree,
    pub projective_count: u64,
}

pub fn periodicity_reduce(lambda: &MultiDegree, p: Prime) -> PeriodicityResult {
    let pu = p.get();
    let reduced = MultiDegree::new(lambda.parts().iter().map(|&d| d % pu).collect());
    let full = lambda.component_dim() as u64;
    let small = reduced.component_dim() as u64;
    debug_assert_eq!((full - small) % pu as u64, 0);
    PeriodicityResult {
        reduced,
        projective_count: (full - small) / pu as u64,
    }
}

/// Decomposes via the periodicity reduction when some `λ_i >= p`.
pub fn decompose_with_periodicity(lambda: &MultiDegree, p: Prime) -> ModuleDecomposition {
    let red = periodicity_reduce(lambda, p);
    decompose_component(&red.reduced, p).with_projectives(red.projective_count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Monomial;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn md(v: &[u32]) -> MultiDegree {
        MultiDegree::new(v.to_vec())
    }

    #[test]
    fn sigma_examples() {
        let q = p(5);
        let x = Polynomial::x(1, q, 0);
        let y = Polynomial::y(1, q, 0);
        assert_eq!(apply_sigma(&x, 1), x);
        assert_eq!(apply_sigma(&y, 1), &y + &x);
        let u = Polynomial::u(2, q, 0, 1);
        assert_eq!(apply_sigma(&u, 1), u);
        assert_eq!(apply_sigma(&y, 5), y);
    }

    #[test]
    fn transfer_examples() {
        let q = p(3);
        let f = Polynomial::parse("y1*y2", 2, q).unwrap();
        assert_eq!(transfer(&f).to_string(), "-x1*x2");
        let y = Polynomial::y(1, q, 0);
        assert!(transfer(&y).is_zero());
        assert_eq!(transfer(&y.pow(2)).to_string(), "-x1^2");
        for v in [5u64, 7] {
            assert!(transfer(&Polynomial::y(1, p(v), 0)).is_zero());
        }
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(1, p(3), 0).to_string(), "y1^3 - x1^2*y1");
        assert_eq!(norm(1, p(2), 0).to_string(), "y1^2 + x1*y1");
        for v in [2u64, 3, 5, 7] {
            let n = norm(2, p(v), 1);
            assert!(is_invariant(&n));
            let (lm, c) = n.lead().unwrap();
            assert_eq!(
                lm,
                Monomial::var(2, crate::polyring::VarRef::y(1)).pow(v as u32)
            );
            assert_eq!(c, 1);
        }
    }

    #[test]
    fn power_sum_examples() {
        assert_eq!(power_sum(2, p(3)), 2);
        assert_eq!(power_sum(3, p(5)), 0);
        for v in [2u64, 3, 5, 7, 11, 13] {
            let q = p(v);
            assert_eq!(power_sum(v - 1, q), q.neg(1));
            for t in 1..=3 * (v - 1) {
                assert_eq!(power_sum(t, q), power_sum_brute(t, q), "p={v} t={t}");
            }
        }
    }

    #[test]
    fn invariant_basis_examples() {
        let q = p(5);
        let b = invariant_basis(&md(&[1]), q);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].to_string(), "x1");

        let b = invariant_basis(&md(&[1, 1]), q);
        let leads: Vec<String> = b.iter().map(|f| f.lead().unwrap().0.to_string()).collect();
        assert_eq!(leads, ["x1*y2", "x1*x2"]);
        assert_eq!(b[0], Polynomial::u(2, q, 0, 1));

        for v in [2u64, 3, 5] {
            let q = p(v);
            let b = invariant_basis(&md(&[v as u32]), q);
            assert_eq!(b.len(), 2);
            assert_eq!(b[0], norm(1, q, 0));
            assert_eq!(b[1], Polynomial::x(1, q, 0).pow(v as u32));
        }
    }

    #[test]
    fn length_examples() {
        let q = p(5);
        assert_eq!(length(&Polynomial::x(1, q, 0)), Ok(2));
        assert_eq!(length(&Polynomial::u(2, q, 0, 1)), Ok(1));
        let xx = Polynomial::parse("x1*x2", 2, q).unwrap();
        assert_eq!(length(&xx), Ok(3));
        assert_eq!(length(&Polynomial::y(1, q, 0)), Err(Error::NotInvariant));
        assert_eq!(length(&Polynomial::zero(1, q)), Err(Error::ZeroPolynomial));
        let mixed = Polynomial::parse("x1 + x1*x2", 2, q).unwrap();
        assert_eq!(length(&mixed), Err(Error::NotMultihomogeneous));
    }

    #[test]
    fn decomposition_examples() {
        let d = decompose_component(&md(&[1, 1]), p(5));
        assert_eq!(d.to_string(), "V1 + V3");
        let lam = md(&[1, 1, 1, 2]);
        assert_eq!(
            decompose_component(&lam, p(7)).to_string(),
            "3V2 + 3V4 + V6"
        );
        assert_eq!(
            decompose_component(&lam, p(5)).to_string(),
            "3V2 + 2V4 + 2V5"
        );
        assert_eq!(decompose_component(&lam, p(3)).to_string(), "8V3");
        assert_eq!(decompose_component(&lam, p(2)).to_string(), "12V2");
    }

    #[test]
    fn decomposition_dimension_checks() {
        for v in [2u64, 3, 5] {
            let q = p(v);
            for lam in [md(&[2, 1]), md(&[3, 2]), md(&[1, 1, 1]), md(&[4])] {
                let op = SigmaOperator::new(&lam, q);
                let d = op.decomposition();
                assert_eq!(d.dim(), lam.component_dim() as u64);
                assert_eq!(d.socle_dim(), op.invariant_vectors().len() as u64);
                assert!(satisfies_rank_system(&d, &op.rank_profile()));
            }
        }
    }

    #[test]
    fn periodicity_examples() {
        for v in [3u64, 5, 7] {
            let q = p(v);
            let pu = v as u32;
            let lam = md(&[pu + 1, 1, 1, pu + 2]);
            let r = periodicity_reduce(&lam, q);
            assert_eq!(r.reduced, md(&[1, 1, 1, 2]));
            assert_eq!(r.projective_count, 4 * v + 20);
        }
        let r = periodicity_reduce(&md(&[2, 1]), p(5));
        assert_eq!(r.reduced, md(&[2, 1]));
        assert_eq!(r.projective_count, 0);
        let r = periodicity_reduce(&md(&[3]), p(3));
        assert_eq!(r.reduced, md(&[0]));
        assert_eq!(r.projective_count, 1);
    }

    #[test]
    fn periodicity_matches_direct_decomposition() {
        let q = p(3);
        for lam in [md(&[4, 1]), md(&[3, 2]), md(&[5, 4])] {
            assert_eq!(
                decompose_component(&lam, q),
                decompose_with_periodicity(&lam, q)
            );
        }
    }

    #[test]
    fn p2_delta_equals_transfer() {
        let q = p(2);
        let f = Polynomial::parse("y1*y2*x3 + y1^2*y3", 3, q).unwrap();
        assert_eq!(delta_power(&f, 1), transfer(&f));
    }
}
