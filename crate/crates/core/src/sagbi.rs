//! The generating sets `B` and `B'` of `F[mV_2]^{C_p}`, lead-monomial
//! factorization, SAGBI verification and subduction.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::cpaction::{invariant_basis, is_invariant, norm, transfer};
use crate::error::{Error, Result};
use crate::ffield::Prime;
use crate::polyring::{Exponent, Monomial, MultiDegree, Polynomial};

/// What a generator is. Blocks are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenTag {
    X(usize),
    NormY(usize),
    U(usize, usize),
    Trace(Vec<u32>),
    /// Dickson `L` of one block.
    L(usize),
    /// `L_ij`, the polarization of `L` with `λ_i = 1`, `λ_j = p`.
    Lij(usize, usize),
    /// `D_λ`.
    D(Vec<u32>),
}

impl fmt::Display for GenTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        match self {
            GenTag::X(i) => write!(f, "x{}", i + 1),
            GenTag::NormY(i) => write!(f, "N(y{})", i + 1),
            GenTag::U(i, j) => write!(f, "u{}{}", i + 1, j + 1),
            GenTag::Trace(e) => write!(f, "Tr(y^({}))", list(e)),
            GenTag::L(i) => write!(f, "L{}", i + 1),
            GenTag::Lij(i, j) => write!(f, "L{}{}", i + 1, j + 1),
            GenTag::D(l) => write!(f, "D({})", list(l)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SetKind {
    /// The set `B`: every nonzero `Tr(y^E)` with `0 <= e_i <= p-1`.
    Full,
    /// The set `B'`: only transfers with `|E| > 2(p-1)`.
    Minimal,
    /// `S_m` for `SL_2(F_p)`.
    SlTwo,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub tag: GenTag,
    pub poly: Polynomial,
    pub lead: Monomial,
}

impl Generator {
    pub fn new(tag: GenTag, poly: Polynomial) -> Result<Self> {
        let (lead, _) = poly.lead()?;
        Ok(Generator { tag, poly, lead })
    }
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    m: usize,
    p: Prime,
    kind: SetKind,
    elements: Vec<Generator>,
    /// Distinct leads, grevlex-descending, with the first generator carrying each.
    leads: Vec<(Monomial, usize)>,
}

impl GeneratorSet {
    pub fn from_elements(m: usize, p: Prime, kind: SetKind, elements: Vec<Generator>) -> Self {
        let mut seen: HashMap<Monomial, usize> = HashMap::new();
        for (k, g) in elements.iter().enumerate() {
            seen.entry(g.lead.clone()).or_insert(k);
        }
        let mut leads: Vec<(Monomial, usize)> = seen.into_iter().collect();
        leads.sort_by(|a, b| b.0.cmp(&a.0));
        GeneratorSet {
            m,
            p,
            kind,
            elements,
            leads,
        }
    }

    pub fn blocks(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn kind(&self) -> SetKind {
        self.kind
    }

    pub fn elements(&self) -> &[Generator] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn without(&self, index: usize) -> GeneratorSet {
        let mut e = self.elements.clone();
        e.remove(index);
        Self::from_elements(self.m, self.p, self.kind, e)
    }

    pub fn position(&self, tag: &GenTag) -> Option<usize> {
        self.elements.iter().position(|g| &g.tag == tag)
    }

    /// Writes `mon` as a product of generator leads: a list of
    /// `(generator index, exponent)`, or `None`.
    pub fn lm_factorizes(&self, mon: &Monomial) -> Option<Vec<(usize, u32)>> {
        let mut failed: HashSet<(Monomial, usize)> = HashSet::new();
        let mut picked = Vec::new();
        if self.factor_rec(mon, 0, &mut picked, &mut failed) {
            Some(picked)
        } else {
            None
        }
    }

    fn factor_rec(
        &self,
        rem: &Monomial,
        start: usize,
        picked: &mut Vec<(usize, u32)>,
        failed: &mut HashSet<(Monomial, usize)>,
    ) -> bool {
        if rem.is_one() {
            return true;
        }
        if failed.contains(&(rem.clone(), start)) {
            return false;
        }
        for k in start..self.leads.len() {
            let (lead, gi) = &self.leads[k];
            let Some(max_e) = lead.max_power_dividing(rem) else {
                continue;
            };
            for e in (1..=max_e).rev() {
                let next = lead.pow(e).quotient_of(rem).expect("divides");
                picked.push((*gi, e));
                if self.factor_rec(&next, k + 1, picked, failed) {
                    return true;
                }
                picked.pop();
            }
        }
        failed.insert((rem.clone(), start));
        false
    }

    /// `Π g_k^{e_k}` for a factorization.
    pub fn product(&self, factors: &[(usize, u32)]) -> Polynomial {
        factors
            .iter()
            .fold(Polynomial::one(self.m, self.p), |acc, &(k, e)| {
                &acc * &self.elements[k].poly.pow(e)
            })
    }
}

fn y_power(m: usize, e: &[u32]) -> Monomial {
    let xs = vec![0 as Exponent; m];
    let ys: Vec<Exponent> = e.iter().map(|&v| v as Exponent).collect();
    Monomial::from_xy(&xs, &ys)
}

/// All `E` with `0 <= e_i <= p-1`, in lexicographic order.
pub fn exponent_box(m: usize, p: Prime) -> Vec<Vec<u32>> {
    let q = p.get();
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..q).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

/// `x_i`, `N(y_i)`, `u_ij` and the transfers of `B` or `B'`.
pub fn build_generators(p: Prime, m: usize, kind: SetKind) -> GeneratorSet {
    build_generators_within(p, m, kind, None)
}

/// Like [`build_generators`], keeping only generators whose multidegree is
/// at most `cap`. These are the only ones that can occur in a factorization
/// of a lead monomial of multidegree `cap`.
pub fn build_generators_within(
    p: Prime,
    m: usize,
    kind: SetKind,
    cap: Option<&MultiDegree>,
) -> GeneratorSet {
    assert!(kind != SetKind::SlTwo, "use sl2::build_sm for S_m");
    let mut elements = Vec::new();
    let fits = |deg: &[u32]| cap.is_none_or(|c| deg.iter().zip(c.parts()).all(|(a, b)| a <= b));
    let push = |elements: &mut Vec<Generator>, tag, poly: Polynomial| {
        let g = Generator::new(tag, poly).expect("generators are nonzero");
        if fits(g.lead.multidegree().parts()) {
            elements.push(g);
        }
    };
    for i in 0..m {
        push(&mut elements, GenTag::X(i), Polynomial::x(m, p, i));
    }
    for i in 0..m {
        push(&mut elements, GenTag::NormY(i), norm(m, p, i));
    }
    for i in 0..m {
        for j in i + 1..m {
            push(&mut elements, GenTag::U(i, j), Polynomial::u(m, p, i, j));
        }
    }
    let bound = 2 * (p.get() - 1);
    for e in exponent_box(m, p) {
        let deg: u32 = e.iter().sum();
        if (kind == SetKind::Minimal && deg <= bound) || !fits(&e) {
            continue;
        }
        let t = transfer(&Polynomial::monomial(y_power(m, &e), p, 1));
        if !t.is_zero() {
            push(&mut elements, GenTag::Trace(e), t);
        }
    }
    GeneratorSet::from_elements(m, p, kind, elements)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SagbiReport {
    pub multidegree: MultiDegree,
    pub checked: usize,
    pub failures: Vec<Monomial>,
}

impl SagbiReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that the lead monomial of every invariant of multidegree `λ`
/// factors over the generator leads.
pub fn sagbi_verify(lambda: &MultiDegree, gens: &GeneratorSet) -> SagbiReport {
    let basis = invariant_basis(lambda, gens.modulus());
    let mut failures = Vec::new();
    for f in &basis {
        let lm = f.lead_monomial().expect("basis vectors are nonzero");
        if gens.lm_factorizes(lm).is_none() {
            failures.push(lm.clone());
        }
    }
    SagbiReport {
        multidegree: lambda.clone(),
        checked: basis.len(),
        failures,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubductionResult {
    /// `(coefficient, factorization)` for each subtracted product.
    pub expression: Vec<(u32, Vec<(usize, u32)>)>,
    pub remainder: Polynomial,
}

impl SubductionResult {
    pub fn is_member(&self) -> bool {
        self.remainder.is_zero()
    }
}

/// Repeatedly cancels the lead term by a product of generators; stops at the
/// first lead monomial that does not factor.
pub fn subduct(f: &Polynomial, gens: &GeneratorSet) -> Result<SubductionResult> {
    if !is_invariant(f) {
        return Err(Error::NotInvariant);
    }
    Ok(subduct_unchecked(f, gens))
}

/// [`subduct`] without the `σ`-invariance check, for other groups.
pub fn subduct_unchecked(f: &Polynomial, gens: &GeneratorSet) -> SubductionResult {
    let p = gens.modulus();
    let mut rem = f.clone();
    let mut expression = Vec::new();
    while let Ok((lm, c)) = rem.lead() {
        let Some(factors) = gens.lm_factorizes(&lm) else {
            break;
        };
        let prod = gens.product(&factors);
        let (plm, pc) = prod.lead().expect("product of nonzero polynomials");
        debug_assert_eq!(plm, lm);
        let scale = p.mul(c, p.inv(pc).expect("nonzero"));
        rem = &rem - &prod.scale(scale);
        expression.push((scale, factors));
    }
    SubductionResult {
        expression,
        remainder: rem,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityReport {
    /// Each generator of `B'` with whether subduction against the others
    /// leaves a nonzero remainder.
    pub indispensable: Vec<(GenTag, bool)>,
    /// Transfers with `p-1 <= |E| <= 2(p-1)` and whether they subduct to 0.
    pub redundant_transfers: Vec<(Vec<u32>, bool)>,
}

impl MinimalityReport {
    pub fn passed(&self) -> bool {
        self.indispensable.iter().all(|(_, ok)| *ok)
            && self.redundant_transfers.iter().all(|(_, ok)| *ok)
    }
}

pub fn minimality_report(p: Prime, m: usize) -> MinimalityReport {
    let gens = build_generators(p, m, SetKind::Minimal);
    let indispensable = (0..gens.len())
        .map(|k| {
            let rest = gens.without(k);
            let r = subduct_unchecked(&gens.elements()[k].poly, &rest);
            (gens.elements()[k].tag.clone(), !r.remainder.is_zero())
        })
        .collect();
    let bound = 2 * (p.get() - 1);
    let redundant_transfers = exponent_box(m, p)
        .into_iter()
        .filter(|e| {
            let d: u32 = e.iter().sum();
            d + 1 >= p.get() && d <= bound
        })
        .filter_map(|e| {
            let t = transfer(&Polynomial::monomial(y_power(m, &e), p, 1));
            (!t.is_zero()).then(|| {
                let ok = subduct_unchecked(&t, &gens).is_member();
                (e, ok)
            })
        })
        .collect();
    MinimalityReport {
        indispensable,
        redundant_transfers,
    }
}
