//! Polarisation `∇`, full polarisation `𝒫`, restitution `ℛ`, and Young
//! symmetrization.
//!
//! A [`BlockSplit`] with parts `(λ_1, ..., λ_m)` sends source block `i` to
//! the consecutive run of `λ_i` target blocks. With the usual variable order
//! on the target ring this gives `y_{i1} > x_{i1} > y_{i2} > ... > y_{k1}`
//! for `i < k`.

use itertools::Itertools;

use crate::cpaction::{periodicity_reduce, transfer, ModuleDecomposition};
use crate::error::{Error, Result};
use crate::ffield::{EchelonSpace, Prime};
use crate::paths::{enumerate_paths, theta};
use crate::polyring::{Component, Exponent, Monomial, MultiDegree, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSplit {
    parts: Vec<u32>,
    offsets: Vec<usize>,
    provenance: Vec<usize>,
}

impl BlockSplit {
    pub fn new(parts: &[u32]) -> Self {
        let mut offsets = Vec::with_capacity(parts.len());
        let mut provenance = Vec::new();
        for (i, &r) in parts.iter().enumerate() {
            offsets.push(provenance.len());
            provenance.extend(std::iter::repeat_n(i, r as usize));
        }
        BlockSplit {
            parts: parts.to_vec(),
            offsets,
            provenance,
        }
    }

    pub fn source_blocks(&self) -> usize {
        self.parts.len()
    }

    pub fn target_blocks(&self) -> usize {
        self.provenance.len()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Source block of a target block.
    pub fn source_of(&self, target: usize) -> usize {
        self.provenance[target]
    }

    /// Target blocks coming from source block `i`.
    pub fn run(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i] + self.parts[i] as usize
    }

    /// `|Y| = Π λ_i!` as an integer.
    pub fn young_order(&self) -> u64 {
        self.parts
            .iter()
            .map(|&r| (1..=r as u64).product::<u64>())
            .product()
    }
}

/// Compositions of `total` into parts bounded by `caps`.
fn bounded_compositions(total: u32, caps: &[u32]) -> Vec<Vec<u32>> {
    fn rec(rest: u32, caps: &[u32], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if caps.is_empty() {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let room: u32 = caps[1..].iter().sum();
        let lo = rest.saturating_sub(room);
        for v in lo..=rest.min(caps[0]) {
            cur.push(v);
            rec(rest - v, &caps[1..], cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, caps, &mut Vec::with_capacity(caps.len()), &mut out);
    out
}

/// `π_μ ∇(f)`: substitutes `x_i ↦ Σ_j x_{ij}`, `y_i ↦ Σ_j y_{ij}` and keeps the
/// part of target multidegree `μ`. Expanded per monomial with multinomial
/// coefficients, so the full `∇(f)` is never formed.
pub fn nabla_project(
    f: &Polynomial,
    split: &BlockSplit,
    target: &MultiDegree,
) -> Result<Polynomial> {
    if f.blocks() != split.source_blocks() {
        return Err(Error::DimensionMismatch {
            expected: split.source_blocks(),
            got: f.blocks(),
        });
    }
    if target.blocks() != split.target_blocks() {
        return Err(Error::DimensionMismatch {
            expected: split.target_blocks(),
            got: target.blocks(),
        });
    }
    let p = f.modulus();
    let tm = split.target_blocks();
    let mut out = Polynomial::zero(tm, p);
    for (mono, c) in f.terms() {
        // Per source block: the list of (x-exponents on the run, coefficient).
        let mut per_block: Vec<Vec<(Vec<u32>, u32)>> = Vec::with_capacity(split.source_blocks());
        let mut feasible = true;
        for i in 0..split.source_blocks() {
            let run = split.run(i);
            let caps: Vec<u32> = target.parts()[run.clone()].to_vec();
            let a = mono.x_exp(i) as u32;
            let b = mono.y_exp(i) as u32;
            if caps.iter().sum::<u32>() != a + b {
                feasible = false;
                break;
            }
            let opts: Vec<(Vec<u32>, u32)> = bounded_compositions(a, &caps)
                .into_iter()
                .filter_map(|alpha| {
                    let beta: Vec<u32> = caps.iter().zip(&alpha).map(|(m, a)| m - a).collect();
                    let coeff = p.mul(p.multinomial(&alpha), p.multinomial(&beta));
                    (coeff != 0).then_some((alpha, coeff))
                })
                .collect();
            if opts.is_empty() {
                feasible = false;
                break;
            }
            per_block.push(opts);
        }
        if !feasible {
            continue;
        }
        for choice in per_block.iter().map(|v| v.iter()).multi_cartesian_product() {
            let mut xs = vec![0 as Exponent; tm];
            let mut coeff = c;
            for (i, (alpha, k)) in choice.iter().enumerate() {
                for (t, &a) in split.run(i).zip(alpha.iter()) {
                    xs[t] = a as Exponent;
                }
                coeff = p.mul(coeff, *k);
            }
            let ys: Vec<Exponent> = (0..tm)
                .map(|t| target.parts()[t] as Exponent - xs[t])
                .collect();
            out.add_term(Monomial::from_xy(&xs, &ys), coeff);
        }
        if split.source_blocks() == 0 {
            out.add_term(Monomial::one(tm), c);
        }
    }
    Ok(out)
}

/// `𝒫(f) = π_{(1,...,1)} ∇_λ(f)` for `f` of multidegree `λ`.
pub fn polarize_full(f: &Polynomial, lambda: &MultiDegree) -> Result<Polynomial> {
    if !f.is_multihomogeneous_of(lambda) || f.blocks() != lambda.blocks() {
        return Err(Error::NotMultihomogeneous);
    }
    let split = BlockSplit::new(lambda.parts());
    nabla_project(f, &split, &MultiDegree::ones(split.target_blocks()))
}

/// Erases subscripts: `x_{ij} ↦ x_i`, `y_{ij} ↦ y_i`.
pub fn restitute(big: &Polynomial, split: &BlockSplit) -> Result<Polynomial> {
    if big.blocks() != split.target_blocks() {
        return Err(Error::DimensionMismatch {
            expected: split.target_blocks(),
            got: big.blocks(),
        });
    }
    let m = split.source_blocks();
    Ok(big.map_monomials(m, |mono| restitute_monomial(mono, split)))
}

pub fn restitute_monomial(mono: &Monomial, split: &BlockSplit) -> Monomial {
    let m = split.source_blocks();
    let mut xs = vec![0 as Exponent; m];
    let mut ys = vec![0 as Exponent; m];
    for t in 0..split.target_blocks() {
        let s = split.source_of(t);
        xs[s] += mono.x_exp(t);
        ys[s] += mono.y_exp(t);
    }
    Monomial::from_xy(&xs, &ys)
}

fn permute_blocks(mono: &Monomial, perm: &[usize]) -> Monomial {
    let n = perm.len();
    let mut xs = vec![0 as Exponent; n];
    let mut ys = vec![0 as Exponent; n];
    for (t, &image) in perm.iter().enumerate() {
        xs[image] = mono.x_exp(t);
        ys[image] = mono.y_exp(t);
    }
    Monomial::from_xy(&xs, &ys)
}

/// All block permutations of the Young subgroup `Π Σ_{λ_i}`, as maps
/// `target block ↦ target block`.
pub fn young_subgroup(split: &BlockSplit) -> Vec<Vec<usize>> {
    let per_run: Vec<Vec<Vec<usize>>> = (0..split.source_blocks())
        .map(|i| {
            let run: Vec<usize> = split.run(i).collect();
            let k = run.len();
            run.into_iter().permutations(k).collect()
        })
        .collect();
    let n = split.target_blocks();
    per_run
        .iter()
        .map(|v| v.iter())
        .multi_cartesian_product()
        .map(|choice| {
            let mut perm = vec![0usize; n];
            for (i, images) in choice.into_iter().enumerate() {
                for (t, &img) in split.run(i).zip(images.iter()) {
                    perm[t] = img;
                }
            }
            perm
        })
        .collect()
}

/// `Σ_{y ∈ Y} y·F`.
pub fn young_symmetrize(big: &Polynomial, split: &BlockSplit) -> Result<Polynomial> {
    if big.blocks() != split.target_blocks() {
        return Err(Error::DimensionMismatch {
            expected: split.target_blocks(),
            got: big.blocks(),
        });
    }
    let n = split.target_blocks();
    let mut out = Polynomial::zero(n, big.modulus());
    for perm in young_subgroup(split) {
        out = &out + &big.map_monomials(n, |m| permute_blocks(m, &perm));
    }
    Ok(out)
}

/// Decomposes `F[mV_2]_λ` without the rank profile of `σ - 1`: reduce by
/// periodicity, take `θ(γ)` for every path of length `|r|`, symmetrize over
/// the Young subgroup and restitute. The restituted invariants coming from
/// paths of summand dimension at least `h` span the invariants of length at
/// least `h`, so successive rank differences give the multiplicities.
pub fn decompose_by_symmetrization(lambda: &MultiDegree, p: Prime) -> Result<ModuleDecomposition> {
    let red = periodicity_reduce(lambda, p);
    let r = red.reduced;
    let split = BlockSplit::new(r.parts());
    let d = split.target_blocks();
    let comp = Component::new(r.clone());
    let pu = p.get() as usize;
    let mut by_len: Vec<Vec<Vec<u32>>> = vec![Vec::new(); pu + 1];
    for (path, class) in enumerate_paths(d, p) {
        let h = class.summand_dim(p).expect("in domain");
        let t = theta(&path, p)?;
        let s = young_symmetrize(&t, &split)?;
        let f = restitute(&s, &split)?;
        by_len[h].push(comp.to_vector(&f)?);
    }
    // D_h = dim span of restitutions with summand dimension >= h.
    let mut space = EchelonSpace::new(comp.dim(), p);
    let mut dims = vec![0usize; pu + 2];
    for h in (1..=pu).rev() {
        for v in by_len[h].drain(..) {
            space.insert(v);
        }
        dims[h] = space.rank();
    }
    let mult: Vec<u64> = (1..=pu).map(|h| (dims[h] - dims[h + 1]) as u64).collect();
    Ok(ModuleDecomposition::new(p, mult).with_projectives(red.projective_count))
}

/// `Tr(y^E)` for exponent vector `E` over `m` blocks.
pub fn transfer_of_y_power(m: usize, p: Prime, e: &[u32]) -> Polynomial {
    let ys: Vec<Exponent> = e.iter().map(|&v| v as Exponent).collect();
    let xs = vec![0 as Exponent; m];
    transfer(&Polynomial::monomial(Monomial::from_xy(&xs, &ys), p, 1))
}
