//! `SL_2(F_p)` acting diagonally on `mV_2`: the group, Dickson invariants and
//! their polarizations, the set `S_m`, relative transfers, and minimal
//! generators of the invariant ring by product-span codimension.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;

use crate::cpaction::norm;
use crate::error::{Error, Result};
use crate::ffield::{EchelonSpace, FpMatrix, Prime};
use crate::polarize::{nabla_project, BlockSplit};
use crate::polyring::{BlockLinearMap, Component, Exponent, Monomial, MultiDegree, Polynomial};
use crate::sagbi::{GenTag, Generator, GeneratorSet, SetKind};

/// `[[a, b], [c, d]]` with `ad - bc = 1`. Acts on every block through
/// [`BlockLinearMap`], so `[[1, 1], [0, 1]]` is `σ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SL2Element {
    a: u32,
    b: u32,
    c: u32,
    d: u32,
    p: Prime,
}

impl SL2Element {
    pub fn new(a: i64, b: i64, c: i64, d: i64, p: Prime) -> Result<Self> {
        let g = SL2Element {
            a: p.from_i64(a),
            b: p.from_i64(b),
            c: p.from_i64(c),
            d: p.from_i64(d),
            p,
        };
        if g.to_block_map().determinant() != 1 % p.get() {
            return Err(Error::NotInDomain(format!(
                "det of [[{a},{b}],[{c},{d}]] is not 1 mod {p}"
            )));
        }
        Ok(g)
    }

    pub fn identity(p: Prime) -> Self {
        Self::new(1, 0, 0, 1, p).expect("det 1")
    }

    /// `[[1, k], [0, 1]]`, the element acting as `σ^k`.
    pub fn upper(k: i64, p: Prime) -> Self {
        Self::new(1, k, 0, 1, p).expect("det 1")
    }

    /// `[[1, 0], [k, 1]]`.
    pub fn lower(k: i64, p: Prime) -> Self {
        Self::new(1, 0, k, 1, p).expect("det 1")
    }

    /// `diag(t, t^{-1})`; `x_i ↦ t x_i`, `y_i ↦ t^{-1} y_i`.
    pub fn diagonal(t: u32, p: Prime) -> Result<Self> {
        let inv = p
            .inv(p.reduce(t as u64))
            .ok_or(Error::DivisionByZero(p.get()))?;
        Self::new(t as i64, 0, 0, inv as i64, p)
    }

    pub fn entries(&self) -> [u32; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn mul(&self, other: &SL2Element) -> SL2Element {
        let m = self.to_block_map().compose(&other.to_block_map());
        SL2Element {
            a: m.a,
            b: m.b,
            c: m.c,
            d: m.d,
            p: self.p,
        }
    }

    pub fn inverse(&self) -> SL2Element {
        let p = self.p;
        SL2Element {
            a: self.d,
            b: p.neg(self.b),
            c: p.neg(self.c),
            d: self.a,
            p,
        }
    }

    pub fn to_block_map(&self) -> BlockLinearMap {
        BlockLinearMap {
            a: self.a,
            b: self.b,
            c: self.c,
            d: self.d,
            p: self.p,
        }
    }

    /// All `p(p^2 - 1)` elements.
    pub fn all(p: Prime) -> Vec<SL2Element> {
        let q = p.get();
        let mut out = Vec::with_capacity((q * (q * q - 1)) as usize);
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    for d in 0..q {
                        if p.sub(p.mul(a, d), p.mul(b, c)) == 1 % q {
                            out.push(SL2Element { a, b, c, d, p });
                        }
                    }
                }
            }
        }
        out
    }

    /// The Borel subgroup of upper triangular elements.
    pub fn borel(p: Prime) -> Vec<SL2Element> {
        Self::all(p).into_iter().filter(|g| g.c == 0).collect()
    }

    /// The two elementary unitriangular generators.
    pub fn generators(p: Prime) -> [SL2Element; 2] {
        [Self::upper(1, p), Self::lower(1, p)]
    }
}

impl fmt::Display for SL2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

pub fn sl2_act(g: &SL2Element, f: &Polynomial) -> Polynomial {
    g.to_block_map().apply(f)
}

pub fn is_sl2_invariant(f: &Polynomial) -> bool {
    SL2Element::generators(f.modulus())
        .iter()
        .all(|g| &sl2_act(g, f) == f)
}

/// Smallest generator of `F_p^*`.
pub fn primitive_root(p: Prime) -> u32 {
    let q = p.get();
    if q == 2 {
        return 1;
    }
    (2..q)
        .find(|&g| (1..q - 1).all(|k| p.pow(g, k as u64) != 1))
        .expect("F_p^* is cyclic")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DicksonPair {
    pub l: Polynomial,
    pub d: Polynomial,
}

/// `L = x N(y)` and `D = N(y)^{p-1} + x^{p(p-1)}` on one block.
pub fn dickson(p: Prime) -> DicksonPair {
    let q = p.get();
    let n = norm(1, p, 0);
    let x = Polynomial::x(1, p, 0);
    DicksonPair {
        l: &x * &n,
        d: &n.pow(q - 1) + &x.pow(q * (q - 1)),
    }
}

/// `π_λ ∇_m(L)` when `|λ| = p + 1`, `π_λ ∇_m(D)` when `|λ| = p(p - 1)`.
pub fn polarize_ld(p: Prime, lambda: &MultiDegree) -> Result<Polynomial> {
    let q = p.get();
    let pair = dickson(p);
    let f = match lambda.total() {
        t if t == q + 1 => pair.l,
        t if t == q * (q - 1) => pair.d,
        t => {
            return Err(Error::DegreeMismatch {
                expected: q + 1,
                got: t,
            })
        }
    };
    nabla_project(&f, &BlockSplit::new(&[lambda.blocks() as u32]), lambda)
}

/// `𝒟_m`: multidegrees with every part divisible by `p` and total `p(p-1)`.
pub fn d_multidegrees(p: Prime, m: usize) -> Vec<MultiDegree> {
    let q = p.get();
    MultiDegree::all_with_total(m, q - 1)
        .into_iter()
        .map(|l| MultiDegree::new(l.parts().iter().map(|&v| v * q).collect()))
        .collect()
}

/// `S_m = {u_ij} ∪ {L_i} ∪ {L_ij : i ≠ j} ∪ {D_λ : λ ∈ 𝒟_m}`.
pub fn build_sm(p: Prime, m: usize) -> GeneratorSet {
    let q = p.get();
    let mut elements = Vec::new();
    let mut push = |tag: GenTag, f: Polynomial| {
        if !f.is_zero() {
            elements.push(Generator::new(tag, f).expect("nonzero"));
        }
    };
    for i in 0..m {
        for j in i + 1..m {
            push(GenTag::U(i, j), Polynomial::u(m, p, i, j));
        }
    }
    let unit = |i: usize, v: u32| {
        let mut l = vec![0; m];
        l[i] = v;
        l
    };
    for i in 0..m {
        let l = MultiDegree::new(unit(i, q + 1));
        push(GenTag::L(i), polarize_ld(p, &l).expect("degree p+1"));
    }
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let mut l = unit(i, 1);
                l[j] = q;
                push(
                    GenTag::Lij(i, j),
                    polarize_ld(p, &MultiDegree::new(l)).expect("degree p+1"),
                );
            }
        }
    }
    for l in d_multidegrees(p, m) {
        let f = polarize_ld(p, &l).expect("degree p(p-1)");
        push(GenTag::D(l.0), f);
    }
    GeneratorSet::from_elements(m, p, SetKind::SlTwo, elements)
}

/// `Tr_P^B(N(y)^α x^β)` by the weight rule: `-N(y)^α x^β` when
/// `|β| - |α| ≡ 0 mod (p - 1)`, else 0. Requires `p > 2`.
pub fn rel_transfer_pb(alpha: &[u32], beta: &[u32], p: Prime) -> Result<Polynomial> {
    if p.get() == 2 {
        return Err(Error::NotInDomain("the weight rule needs p > 2".into()));
    }
    if alpha.len() != beta.len() {
        return Err(Error::DimensionMismatch {
            expected: alpha.len(),
            got: beta.len(),
        });
    }
    let f = norm_x_monomial(alpha, beta, p);
    let w = beta.iter().sum::<u32>() as i64 - alpha.iter().sum::<u32>() as i64;
    if w.rem_euclid(p.get() as i64 - 1) == 0 {
        Ok(f.scale(p.neg(1)))
    } else {
        Ok(Polynomial::zero(alpha.len(), p))
    }
}

/// `Π N(y_i)^{α_i} x_i^{β_i}`.
pub fn norm_x_monomial(alpha: &[u32], beta: &[u32], p: Prime) -> Polynomial {
    let m = alpha.len();
    let xs: Vec<Exponent> = beta.iter().map(|&b| b as Exponent).collect();
    let mut f = Polynomial::monomial(Monomial::from_xy(&xs, &vec![0; m]), p, 1);
    for (i, &a) in alpha.iter().enumerate() {
        if a > 0 {
            f = &f * &norm(m, p, i).pow(a);
        }
    }
    f
}

/// `Σ_{t ∈ F_p^*} diag(t, t^{-1}) · f`, the coset sum for `B / P`. Valid for
/// any `p`, including `p = 2` where it is the identity.
pub fn rel_transfer_pb_coset(f: &Polynomial) -> Polynomial {
    let p = f.modulus();
    (1..p.get()).fold(Polynomial::zero(f.blocks(), p), |acc, t| {
        let g = SL2Element::diagonal(t, p).expect("unit");
        &acc + &sl2_act(&g, f)
    })
}

/// `Σ_{g ∈ SL_2(F_p)} g · f`.
pub fn transfer_sl2(f: &Polynomial) -> Polynomial {
    let p = f.modulus();
    SL2Element::all(p)
        .iter()
        .fold(Polynomial::zero(f.blocks(), p), |acc, g| {
            &acc + &sl2_act(g, f)
        })
}

/// Checks `L_ij = x_i N(y_j) + u_ij x_j^{p-1}` and
/// `L_ji = x_j N(y_i) - u_ij x_i^{p-1}` for all `i < j`; returns the number of
/// identities checked.
pub fn verify_l_identities(p: Prime, m: usize) -> Result<usize> {
    let q = p.get();
    let mut checked = 0;
    for i in 0..m {
        for j in i + 1..m {
            let u = Polynomial::u(m, p, i, j);
            let xi = Polynomial::x(m, p, i);
            let xj = Polynomial::x(m, p, j);
            let mut lij = vec![0; m];
            lij[i] = 1;
            lij[j] = q;
            let mut lji = vec![0; m];
            lji[j] = 1;
            lji[i] = q;
            let lhs = polarize_ld(p, &MultiDegree::new(lij))?;
            let rhs = &(&xi * &norm(m, p, j)) + &(&u * &xj.pow(q - 1));
            if lhs != rhs {
                return Err(Error::RelationFailed(format!("L{}{}", i + 1, j + 1)));
            }
            let lhs = polarize_ld(p, &MultiDegree::new(lji))?;
            let rhs = &(&xj * &norm(m, p, i)) - &(&u * &xi.pow(q - 1));
            if lhs != rhs {
                return Err(Error::RelationFailed(format!("L{}{}", j + 1, i + 1)));
            }
            checked += 2;
        }
    }
    Ok(checked)
}

/// The rank-one substitution `x_i ↦ a_i X`, `y_i ↦ a_i Y` into a ring with
/// `m + 1` blocks: `a_i` is `x_i` there and `(X, Y)` is block `m`.
pub fn rank_one_substitution(f: &Polynomial) -> Polynomial {
    let m = f.blocks();
    f.map_monomials(m + 1, |mono| {
        let mut xs = vec![0 as Exponent; m + 1];
        let mut ys = vec![0 as Exponent; m + 1];
        for i in 0..m {
            xs[i] = mono.x_exp(i) + mono.y_exp(i);
            xs[m] += mono.x_exp(i);
            ys[m] += mono.y_exp(i);
        }
        Monomial::from_xy(&xs, &ys)
    })
}

/// `∇_m(f)` for a one-block `f`: `x ↦ Σ x_i`, `y ↦ Σ y_i`.
pub fn nabla_full(f: &Polynomial, m: usize) -> Result<Polynomial> {
    let p = f.modulus();
    let sx = (0..m).fold(Polynomial::zero(m, p), |acc, i| {
        &acc + &Polynomial::x(m, p, i)
    });
    let sy = (0..m).fold(Polynomial::zero(m, p), |acc, i| {
        &acc + &Polynomial::y(m, p, i)
    });
    // Slot 0 is y, slot 1 is x.
    f.substitute(&[sy, sx])
}

/// Checks that `∇_m(D) - ((Σ N(y_i))^{p-1} + (Σ x_i)^{p(p-1)})` vanishes on the
/// rank-one locus, i.e. lies in the ideal generated by the `u_ij`.
pub fn verify_d_rank_one(p: Prime, m: usize) -> Result<()> {
    let q = p.get();
    let nd = nabla_full(&dickson(p).d, m)?;
    let sn = (0..m).fold(Polynomial::zero(m, p), |acc, i| &acc + &norm(m, p, i));
    let sx = (0..m).fold(Polynomial::zero(m, p), |acc, i| {
        &acc + &Polynomial::x(m, p, i)
    });
    let rhs = &sn.pow(q - 1) + &sx.pow(q * (q - 1));
    let diff = &nd - &rhs;
    if rank_one_substitution(&diff).is_zero() {
        Ok(())
    } else {
        Err(Error::RelationFailed(format!(
            "D rank-one test, p = {q}, m = {m}"
        )))
    }
}

/// Basis columns of `λ` whose monomial weight is `≡ 0 mod (p - 1)`.
pub fn weight_zero_columns(comp: &Component, p: Prime) -> Vec<usize> {
    let modw = p.get() as i64 - 1;
    (0..comp.dim())
        .filter(|&i| comp.monomial_at(i).weight().rem_euclid(modw) == 0)
        .collect()
}

/// Common fixed vectors of `maps` inside the span of `cols`, as full-length
/// vectors of the component, in reduced echelon form.
fn fixed_space(
    comp: &Component,
    p: Prime,
    maps: &[BlockLinearMap],
    cols: &[usize],
) -> Vec<Vec<u32>> {
    let n = comp.dim();
    if cols.is_empty() {
        return Vec::new();
    }
    let mut stacked = FpMatrix::zeros(n * maps.len(), cols.len(), p);
    for (k, g) in maps.iter().enumerate() {
        for (j, img) in comp.operator_columns(g, cols).into_iter().enumerate() {
            for (r, v) in img.into_iter().enumerate() {
                let v = if r == cols[j] { p.sub(v, 1) } else { v };
                stacked.set(k * n + r, j, v);
            }
        }
    }
    let kernel = stacked.kernel_basis();
    let mut space = EchelonSpace::new(n, p);
    for v in kernel {
        let mut full = vec![0u32; n];
        for (j, &c) in v.iter().enumerate() {
            full[cols[j]] = c;
        }
        space.insert(full);
    }
    reduced_basis(&space, p)
}

fn reduced_basis(space: &EchelonSpace, p: Prime) -> Vec<Vec<u32>> {
    let rows: Vec<&[u32]> = space.basis().collect();
    if rows.is_empty() {
        return Vec::new();
    }
    let mut m = FpMatrix::zeros(rows.len(), space.ambient_dim(), p);
    for (r, v) in rows.iter().enumerate() {
        for (c, &x) in v.iter().enumerate() {
            m.set(r, c, x);
        }
    }
    let red = m.rref();
    (0..red.rank).map(|r| red.matrix.row(r).to_vec()).collect()
}

/// `F[mV_2]^{SL_2(F_p)}_λ` as vectors of the component.
pub fn sl2_invariant_vectors(lambda: &MultiDegree, p: Prime) -> Vec<Vec<u32>> {
    let comp = Component::new(lambda.clone());
    let cols = weight_zero_columns(&comp, p);
    let maps = SL2Element::generators(p).map(|g| g.to_block_map());
    fixed_space(&comp, p, &maps, &cols)
}

pub fn sl2_invariant_basis(lambda: &MultiDegree, p: Prime) -> Vec<Polynomial> {
    let comp = Component::new(lambda.clone());
    sl2_invariant_vectors(lambda, p)
        .iter()
        .map(|v| comp.from_vector(v, p))
        .collect()
}

/// Compares the fixed space of the Borel subgroup with the weight-zero slice
/// of the `σ`-fixed space.
pub fn borel_invariants_match(lambda: &MultiDegree, p: Prime) -> bool {
    let comp = Component::new(lambda.clone());
    let all: Vec<usize> = (0..comp.dim()).collect();
    let sigma = BlockLinearMap::sigma_power(1, p);
    let torus = SL2Element::diagonal(primitive_root(p), p)
        .expect("unit")
        .to_block_map();
    let borel = fixed_space(&comp, p, &[sigma, torus], &all);
    let slice = fixed_space(&comp, p, &[sigma], &weight_zero_columns(&comp, p));
    borel == slice
}

#[derive(Clone, Debug)]
pub struct Sl2Config {
    pub d_max: u32,
    /// Largest component dimension accepted before `InfeasibleSize`.
    pub max_component_dim: usize,
    pub deadline: Option<Instant>,
}

impl Sl2Config {
    pub fn new(d_max: u32) -> Self {
        Sl2Config {
            d_max,
            max_component_dim: 20_000,
            deadline: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SL2GeneratorReport {
    pub p: u32,
    pub m: usize,
    pub d_max: u32,
    /// Number of new generators per total degree (degrees with none omitted).
    pub per_degree: BTreeMap<u32, usize>,
    pub per_multidegree: Vec<(MultiDegree, usize)>,
    /// Largest degree carrying a new generator, 0 if none.
    pub noether_number: u32,
    pub sm_size: usize,
    pub generators: Vec<(MultiDegree, Polynomial)>,
}

impl SL2GeneratorReport {
    pub fn total(&self) -> usize {
        self.per_degree.values().sum()
    }

    /// `(p + m - 2)(p - 1)`.
    pub fn noether_bound(&self) -> u32 {
        (self.p + self.m as u32 - 2) * (self.p - 1)
    }
}

struct DegreeItem {
    lambda: MultiDegree,
    invariants: Vec<Polynomial>,
    new_generators: Vec<Polynomial>,
}

fn product_span_item(
    lambda: &MultiDegree,
    p: Prime,
    invariants: &HashMap<MultiDegree, Vec<Polynomial>>,
    generators: &[(MultiDegree, Polynomial)],
) -> DegreeItem {
    let comp = Component::new(lambda.clone());
    let inv_vecs = sl2_invariant_vectors(lambda, p);
    let inv_polys: Vec<Polynomial> = inv_vecs.iter().map(|v| comp.from_vector(v, p)).collect();
    let mut span = EchelonSpace::new(comp.dim(), p);
    'outer: for (mu, g) in generators {
        let Some(rest) = lambda.checked_sub(mu) else {
            continue;
        };
        let Some(hs) = invariants.get(&rest) else {
            continue;
        };
        for h in hs {
            let v = comp.to_vector(&(g * h)).expect("multihomogeneous product");
            span.insert(v);
            if span.rank() == inv_vecs.len() {
                break 'outer;
            }
        }
    }
    let mut new_generators = Vec::new();
    for (v, f) in inv_vecs.into_iter().zip(&inv_polys) {
        if span.insert(v) {
            new_generators.push(f.clone());
        }
    }
    DegreeItem {
        lambda: lambda.clone(),
        invariants: inv_polys,
        new_generators,
    }
}

/// Minimal homogeneous generators of `F[mV_2]^{SL_2(F_p)}` up to degree
/// `d_max`. In each multidegree the number of new generators is the
/// codimension of the span of products of lower generators with invariants.
pub fn minimal_generators_sl2(
    p: Prime,
    m: usize,
    config: &Sl2Config,
) -> Result<SL2GeneratorReport> {
    let q = p.get();
    let widest = MultiDegree::all_with_total(m, config.d_max)
        .iter()
        .map(MultiDegree::component_dim)
        .max()
        .unwrap_or(1);
    if widest > config.max_component_dim {
        return Err(Error::InfeasibleSize {
            dim: widest,
            limit: config.max_component_dim,
        });
    }
    let mut invariants: HashMap<MultiDegree, Vec<Polynomial>> = HashMap::new();
    invariants.insert(MultiDegree::new(vec![0; m]), vec![Polynomial::one(m, p)]);
    let mut generators: Vec<(MultiDegree, Polynomial)> = Vec::new();
    let mut per_degree = BTreeMap::new();
    let mut per_multidegree = Vec::new();
    for d in 1..=config.d_max {
        if let Some(deadline) = config.deadline {
            if Instant::now() > deadline {
                return Err(Error::BudgetExceeded { completed: d - 1 });
            }
        }
        let lambdas = MultiDegree::all_with_total(m, d);
        let items: Vec<DegreeItem> = lambdas
            .par_iter()
            .map(|l| product_span_item(l, p, &invariants, &generators))
            .collect();
        let mut count = 0;
        for item in items {
            if !item.new_generators.is_empty() {
                count += item.new_generators.len();
                per_multidegree.push((item.lambda.clone(), item.new_generators.len()));
            }
            for g in item.new_generators {
                generators.push((item.lambda.clone(), g));
            }
            if !item.invariants.is_empty() {
                invariants.insert(item.lambda, item.invariants);
            }
        }
        if count > 0 {
            per_degree.insert(d, count);
        }
    }
    let noether_number = per_degree.keys().next_back().copied().unwrap_or(0);
    Ok(SL2GeneratorReport {
        p: q,
        m,
        d_max: config.d_max,
        per_degree,
        per_multidegree,
        noether_number,
        sm_size: build_sm(p, m).len(),
        generators,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    /// `(λ, dim of invariants, dim of the subalgebra generated by S_m and
    /// transfers)` for every multidegree with nonzero invariants.
    pub per_multidegree: Vec<(MultiDegree, usize, usize)>,
    pub generators_checked: usize,
    /// Multidegrees of minimal generators outside the subalgebra.
    pub missing: Vec<MultiDegree>,
    pub noether_number: u32,
}

impl MembershipReport {
    pub fn passed(&self) -> bool {
        self.missing.is_empty()
    }
}

/// Checks that every minimal generator up to `d_max` lies in the subalgebra
/// generated by `S_m` and `Tr^{SL_2}` of monomials.
pub fn verify_sm_membership(p: Prime, m: usize, config: &Sl2Config) -> Result<MembershipReport> {
    let report = minimal_generators_sl2(p, m, config)?;
    let group: Vec<BlockLinearMap> = SL2Element::all(p)
        .iter()
        .map(|g| g.to_block_map())
        .collect();
    let sm = build_sm(p, m);
    // Algebra generators by multidegree: S_m and a basis of each transfer image.
    let mut alg_gens: Vec<(MultiDegree, Polynomial)> = sm
        .elements()
        .iter()
        .filter(|g| g.poly.total_degree().is_some_and(|d| d <= config.d_max))
        .map(|g| {
            (
                g.poly.multidegree().expect("multihomogeneous"),
                g.poly.clone(),
            )
        })
        .collect();
    let mut algebra: HashMap<MultiDegree, Vec<Polynomial>> = HashMap::new();
    algebra.insert(MultiDegree::new(vec![0; m]), vec![Polynomial::one(m, p)]);
    let mut per_multidegree = Vec::new();
    let mut missing = Vec::new();
    let mut checked = 0;
    for d in 1..=config.d_max {
        let mut fresh = Vec::new();
        for lambda in MultiDegree::all_with_total(m, d) {
            let comp = Component::new(lambda.clone());
            let n = comp.dim();
            let mut tr = FpMatrix::zeros(n, n, p);
            for g in &group {
                let mg = comp.operator_matrix(g);
                for r in 0..n {
                    for c in 0..n {
                        let v = mg.get(r, c);
                        if v != 0 {
                            tr.set(r, c, p.add(tr.get(r, c), v));
                        }
                    }
                }
            }
            let mut images = EchelonSpace::new(n, p);
            for c in 0..n {
                images.insert(tr.column(c));
            }
            let mut span = EchelonSpace::new(n, p);
            for v in images.basis() {
                span.insert(v.to_vec());
            }
            for (mu, g) in &alg_gens {
                if mu == &lambda {
                    span.insert(comp.to_vector(g).expect("multihomogeneous"));
                    continue;
                }
                let Some(rest) = lambda.checked_sub(mu) else {
                    continue;
                };
                for h in algebra.get(&rest).into_iter().flatten() {
                    span.insert(comp.to_vector(&(g * h)).expect("multihomogeneous"));
                }
            }
            let inv_dim = sl2_invariant_vectors(&lambda, p).len();
            for (gl, g) in report.generators.iter().filter(|(gl, _)| gl == &lambda) {
                checked += 1;
                if !span.contains(&comp.to_vector(g).expect("multihomogeneous")) {
                    missing.push(gl.clone());
                }
            }
            if inv_dim > 0 {
                per_multidegree.push((lambda.clone(), inv_dim, span.rank()));
            }
            for v in images.basis() {
                fresh.push((lambda.clone(), comp.from_vector(v, p)));
            }
            let basis: Vec<Polynomial> = span.basis().map(|v| comp.from_vector(v, p)).collect();
            if !basis.is_empty() {
                algebra.insert(lambda, basis);
            }
        }
        alg_gens.extend(fresh);
    }
    Ok(MembershipReport {
        per_multidegree,
        generators_checked: checked,
        missing,
        noether_number: report.noether_number,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpaction::{apply_sigma, invariant_basis};

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn poly(s: &str, m: usize, q: Prime) -> Polynomial {
        Polynomial::parse(s, m, q).unwrap()
    }

    #[test]
    fn group_order_and_laws() {
        for v in [2u64, 3, 5] {
            let q = p(v);
            let g = SL2Element::all(q);
            assert_eq!(g.len() as u64, v * (v * v - 1));
            assert_eq!(SL2Element::borel(q).len() as u64, v * (v - 1));
        }
        let q = p(3);
        let f = poly("x1^2*y2 + y1*x2 - 2*y1^3", 2, q);
        let all = SL2Element::all(q);
        let id = SL2Element::identity(q);
        assert_eq!(sl2_act(&id, &f), f);
        for g in &all {
            assert_eq!(g.mul(&g.inverse()), id);
            for h in &all {
                assert_eq!(sl2_act(&g.mul(h), &f), sl2_act(g, &sl2_act(h, &f)));
            }
        }
    }

    #[test]
    fn action_examples() {
        let q = p(3);
        let y1 = Polynomial::y(2, q, 0);
        assert_eq!(
            sl2_act(&SL2Element::upper(1, q), &y1),
            poly("x1 + y1", 2, q)
        );
        let f = poly("x1*y2^2 + y1^2*x2", 2, q);
        assert_eq!(sl2_act(&SL2Element::upper(1, q), &f), apply_sigma(&f, 1));
        let u = Polynomial::u(2, q, 0, 1);
        for g in SL2Element::all(q) {
            assert_eq!(sl2_act(&g, &u), u);
        }
        let t = SL2Element::diagonal(primitive_root(q), q).unwrap();
        assert_eq!(
            sl2_act(&t, &Polynomial::x(2, q, 0)),
            Polynomial::x(2, q, 0).scale(2)
        );
        // A monomial of weight w is scaled by t^w.
        let mono = poly("x1^2*y2", 2, q);
        assert_eq!(sl2_act(&t, &mono), mono.scale(2));
        assert!(SL2Element::new(1, 1, 1, 1, q).is_err());
    }

    #[test]
    fn dickson_examples() {
        let q = p(2);
        let pair = dickson(q);
        assert_eq!(pair.l, poly("x1*y1^2 + x1^2*y1", 1, q));
        assert_eq!(pair.d, poly("y1^2 + x1*y1 + x1^2", 1, q));
        let q = p(3);
        let pair = dickson(q);
        assert_eq!(pair.l, poly("x1*y1^3 - x1^3*y1", 1, q));
        for v in [2u64, 3, 5, 7] {
            let pair = dickson(p(v));
            assert!(is_sl2_invariant(&pair.l) && is_sl2_invariant(&pair.d));
        }
    }

    #[test]
    fn polarization_examples() {
        let q = p(3);
        let l12 = polarize_ld(q, &MultiDegree::new(vec![1, 3])).unwrap();
        assert_eq!(l12, poly("x1*y2^3 - y1*x2^3", 2, q));
        let l1 = polarize_ld(q, &MultiDegree::new(vec![4, 0])).unwrap();
        assert_eq!(l1, poly("x1*y1^3 - x1^3*y1", 2, q));
        assert!(matches!(
            polarize_ld(q, &MultiDegree::new(vec![2, 3])),
            Err(Error::DegreeMismatch { .. })
        ));
        for v in [2u64, 3, 5] {
            for m in 1..=3 {
                assert_eq!(verify_l_identities(p(v), m).unwrap(), m * (m - 1));
            }
        }
    }

    #[test]
    fn d_rank_one() {
        for v in [2u64, 3] {
            for m in 1..=3 {
                verify_d_rank_one(p(v), m).unwrap();
            }
        }
        // The test does detect a wrong right-hand side.
        let q = p(3);
        let nd = nabla_full(&dickson(q).d, 2).unwrap();
        assert!(!rank_one_substitution(&nd).is_zero());
    }

    #[test]
    fn sm_examples() {
        let s = build_sm(p(3), 2);
        assert_eq!(s.len(), 8);
        assert!(s.elements().iter().all(|g| is_sl2_invariant(&g.poly)));
        let tags: Vec<String> = build_sm(p(3), 1)
            .elements()
            .iter()
            .map(|g| g.tag.to_string())
            .collect();
        assert_eq!(tags, ["L1", "D(6)"]);
        let d3: Vec<Vec<u32>> = d_multidegrees(p(2), 3).into_iter().map(|l| l.0).collect();
        assert_eq!(d3.len(), 3);
        assert!(
            d3.contains(&vec![2, 0, 0])
                && d3.contains(&vec![0, 2, 0])
                && d3.contains(&vec![0, 0, 2])
        );
        for v in [2u64, 5] {
            let s = build_sm(p(v), 3);
            assert!(s.elements().iter().all(|g| is_sl2_invariant(&g.poly)));
        }
    }

    #[test]
    fn relative_transfer() {
        for v in [3u64, 5, 7] {
            let q = p(v);
            for (alpha, beta) in [
                (vec![1, 0], vec![0, 1]),
                (vec![1, 0], vec![1, 1]),
                (vec![v as u32 - 1, 0], vec![0, 0]),
                (vec![2, 1], vec![1, 0]),
                (vec![0, 1], vec![2, 0]),
            ] {
                let f = norm_x_monomial(&alpha, &beta, q);
                let rule = rel_transfer_pb(&alpha, &beta, q).unwrap();
                assert_eq!(rule, rel_transfer_pb_coset(&f), "{alpha:?} {beta:?}");
            }
            let f = norm_x_monomial(&[1, 0], &[0, 1], q);
            assert_eq!(
                rel_transfer_pb(&[1, 0], &[0, 1], q).unwrap(),
                f.scale(q.neg(1))
            );
            assert!(rel_transfer_pb(&[1, 0], &[1, 1], q).unwrap().is_zero());
        }
        assert!(rel_transfer_pb(&[1], &[1], p(2)).is_err());
        let f = norm_x_monomial(&[1], &[1], p(2));
        assert_eq!(rel_transfer_pb_coset(&f), f);
    }

    #[test]
    fn borel_slice() {
        for v in [3u64, 5] {
            for l in [
                vec![2],
                vec![4],
                vec![1, 1],
                vec![2, 2],
                vec![1, 1, 2],
                vec![3, 1],
            ] {
                assert!(
                    borel_invariants_match(&MultiDegree::new(l.clone()), p(v)),
                    "{l:?}"
                );
            }
        }
    }

    #[test]
    fn sl2_invariants_are_sigma_invariants() {
        let q = p(3);
        let lambda = MultiDegree::new(vec![2, 2]);
        let c = invariant_basis(&lambda, q).len();
        let s = sl2_invariant_basis(&lambda, q);
        assert!(s.len() <= c);
        assert!(s.iter().all(is_sl2_invariant));
    }

    #[test]
    fn small_generator_reports() {
        let r = minimal_generators_sl2(p(3), 1, &Sl2Config::new(8)).unwrap();
        assert_eq!(r.per_degree, BTreeMap::from([(4, 1), (6, 1)]));
        assert_eq!(r.noether_number, 6);

        let r = minimal_generators_sl2(p(2), 2, &Sl2Config::new(5)).unwrap();
        assert_eq!(r.noether_number, 3);

        let r = minimal_generators_sl2(p(2), 3, &Sl2Config::new(5)).unwrap();
        assert_eq!(r.noether_number, 3);
        assert!(r.noether_number <= r.noether_bound());
    }

    #[test]
    fn membership_examples() {
        let r = verify_sm_membership(p(3), 1, &Sl2Config::new(6)).unwrap();
        assert!(r.passed());
        assert_eq!(r.noether_number, 6);
        let r = verify_sm_membership(p(2), 2, &Sl2Config::new(3)).unwrap();
        assert!(r.passed());
        assert_eq!(r.noether_number, 3);
        let r = verify_sm_membership(p(3), 2, &Sl2Config::new(6)).unwrap();
        assert!(r.passed());
    }
}
