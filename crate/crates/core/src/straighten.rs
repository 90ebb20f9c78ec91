//! Products of `x_i` and `u_ij`: Kempe uncrossing, the Plücker and
//! three-term relations, and the summand-length criterion for products.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ffield::Prime;
use crate::polyring::Polynomial;

/// `Π x_i^{a_i} · Π u_ij^{b_ij}` with blocks 0-based and `i < j` on every edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UProduct {
    pub x_exp: Vec<u32>,
    pub edges: BTreeMap<(usize, usize), u32>,
}

impl UProduct {
    pub fn one(m: usize) -> Self {
        UProduct {
            x_exp: vec![0; m],
            edges: BTreeMap::new(),
        }
    }

    pub fn blocks(&self) -> usize {
        self.x_exp.len()
    }

    pub fn with_x(mut self, i: usize, e: u32) -> Self {
        self.x_exp[i] += e;
        self
    }

    /// Multiplies by `u_ij^e`. Panics unless `i < j < m`.
    pub fn with_u(mut self, i: usize, j: usize, e: u32) -> Self {
        assert!(i < j && j < self.blocks(), "edge ({i},{j}) out of range");
        if e > 0 {
            *self.edges.entry((i, j)).or_insert(0) += e;
        }
        self
    }

    pub fn degree(&self) -> u32 {
        self.x_exp.iter().sum::<u32>() + 2 * self.edges.values().sum::<u32>()
    }

    pub fn multidegree(&self) -> Vec<u32> {
        let mut d = self.x_exp.clone();
        for (&(i, j), &b) in &self.edges {
            d[i] += b;
            d[j] += b;
        }
        d
    }

    /// First pair of crossing edges `(i,k), (j,l)` with `i < j < k < l`, in
    /// lexicographic order of the edges.
    pub fn first_crossing(&self) -> Option<((usize, usize), (usize, usize))> {
        let es: Vec<(usize, usize)> = self.edges.keys().copied().collect();
        for (n, &(i, k)) in es.iter().enumerate() {
            for &(j, l) in &es[n + 1..] {
                if i < j && j < k && k < l {
                    return Some(((i, k), (j, l)));
                }
            }
        }
        None
    }

    pub fn is_noncrossing(&self) -> bool {
        self.first_crossing().is_none()
    }

    /// `Σ_edges b·f(j - i)` with `f(a) = a(m - a)`; strictly decreased by
    /// every uncrossing step.
    pub fn kempe_measure(&self) -> u64 {
        let m = self.blocks() as u64;
        self.edges
            .iter()
            .map(|(&(i, j), &b)| {
                let a = (j - i) as u64;
                b as u64 * a * (m - a)
            })
            .sum()
    }

    pub fn expand(&self, p: Prime) -> Polynomial {
        let m = self.blocks();
        let mut f = Polynomial::one(m, p);
        for (i, &a) in self.x_exp.iter().enumerate() {
            if a > 0 {
                f = &f * &Polynomial::x(m, p, i).pow(a);
            }
        }
        for (&(i, j), &b) in &self.edges {
            f = &f * &Polynomial::u(m, p, i, j).pow(b);
        }
        f
    }

    fn remove_edge(&mut self, e: (usize, usize)) {
        let c = self.edges.get_mut(&e).expect("edge present");
        *c -= 1;
        if *c == 0 {
            self.edges.remove(&e);
        }
    }

    fn add_edge(&mut self, e: (usize, usize)) {
        *self.edges.entry(e).or_insert(0) += 1;
    }
}

impl fmt::Display for UProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &a) in self.x_exp.iter().enumerate() {
            match a {
                0 => {}
                1 => parts.push(format!("x{}", i + 1)),
                _ => parts.push(format!("x{}^{}", i + 1, a)),
            }
        }
        for (&(i, j), &b) in &self.edges {
            if b == 1 {
                parts.push(format!("u{}{}", i + 1, j + 1));
            } else {
                parts.push(format!("u{}{}^{}", i + 1, j + 1, b));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Rewrites with `u_ik u_jl = u_ij u_kl + u_il u_jk` until nothing crosses.
/// Coefficients are the (positive) integer multiplicities of each
/// non-crossing product.
pub fn uncross(product: &UProduct) -> Vec<(u64, UProduct)> {
    let mut done: BTreeMap<UProduct, u64> = BTreeMap::new();
    let mut work: BTreeMap<UProduct, u64> = BTreeMap::new();
    work.insert(product.clone(), 1);
    while let Some((cur, c)) = work.pop_last() {
        match cur.first_crossing() {
            None => *done.entry(cur).or_insert(0) += c,
            Some(((i, k), (j, l))) => {
                let mut base = cur.clone();
                base.remove_edge((i, k));
                base.remove_edge((j, l));
                let mut a = base.clone();
                a.add_edge((i, j));
                a.add_edge((k, l));
                let mut b = base;
                b.add_edge((i, l));
                b.add_edge((j, k));
                debug_assert!(a.kempe_measure() < cur.kempe_measure());
                debug_assert!(b.kempe_measure() < cur.kempe_measure());
                *work.entry(a).or_insert(0) += c;
                *work.entry(b).or_insert(0) += c;
            }
        }
    }
    done.into_iter().map(|(u, c)| (c, u)).collect()
}

/// Evaluates a linear combination of products with integer coefficients.
pub fn expand_combination(terms: &[(u64, UProduct)], m: usize, p: Prime) -> Polynomial {
    terms.iter().fold(Polynomial::zero(m, p), |acc, (c, u)| {
        &acc + &u.expand(p).scale(p.reduce(*c))
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationReport {
    pub three_term_checked: usize,
    pub plucker_checked: usize,
}

/// Expands `x_i u_jk - x_j u_ik + x_k u_ij` for all `i < j < k` and
/// `u_ij u_kl - u_ik u_jl + u_il u_jk` for all `i < j < k < l`.
pub fn verify_relations(m: usize, p: Prime) -> Result<RelationReport> {
    let x = |i| Polynomial::x(m, p, i);
    let u = |i, j| Polynomial::u(m, p, i, j);
    let mut report = RelationReport::default();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let r = &(&(&x(i) * &u(j, k)) - &(&x(j) * &u(i, k))) + &(&x(k) * &u(i, j));
                if !r.is_zero() {
                    return Err(Error::RelationFailed(format!(
                        "x{a}u{b}{c} - x{b}u{a}{c} + x{c}u{a}{b}",
                        a = i + 1,
                        b = j + 1,
                        c = k + 1
                    )));
                }
                report.three_term_checked += 1;
                for l in k + 1..m {
                    let r =
                        &(&(&u(i, j) * &u(k, l)) - &(&u(i, k) * &u(j, l))) + &(&u(i, l) * &u(j, k));
                    if !r.is_zero() {
                        return Err(Error::RelationFailed(format!(
                            "u{a}{b}u{c}{d} - u{a}{c}u{b}{d} + u{a}{d}u{b}{c}",
                            a = i + 1,
                            b = j + 1,
                            c = k + 1,
                            d = l + 1
                        )));
                    }
                    report.plucker_checked += 1;
                }
            }
        }
    }
    Ok(report)
}

/// `p` if some `r` has `Σ_{i<=r} a_i + Σ_{i<=r<=j, i<j} b_ij >= p - 1`,
/// otherwise `1 + Σ a_i`.
pub fn summand_length_of_product(product: &UProduct, p: Prime) -> u32 {
    let target = p.get() - 1;
    let m = product.blocks();
    let mut a_prefix = 0u32;
    for r in 0..m {
        a_prefix += product.x_exp[r];
        let spanning: u32 = product
            .edges
            .iter()
            .filter(|(&(i, j), _)| i <= r && r <= j)
            .map(|(_, &b)| b)
            .sum();
        if a_prefix + spanning >= target {
            return p.get();
        }
    }
    1 + product.x_exp.iter().sum::<u32>()
}

/// `(u edge, x block, degree)`: an `x` slot has no edge.
type Slot = (Option<(usize, usize)>, usize, u32);

/// All products with `m` blocks and total degree at most `max_degree`
/// (each `x` counts 1, each `u` counts 2), including the empty product.
pub fn enumerate_products(m: usize, max_degree: u32) -> Vec<UProduct> {
    let mut slots: Vec<Slot> = Vec::new();
    for i in 0..m {
        slots.push((None, i, 1));
    }
    for i in 0..m {
        for j in i + 1..m {
            slots.push((Some((i, j)), 0, 2));
        }
    }
    let mut out = Vec::new();
    fn rec(slots: &[Slot], k: usize, budget: u32, cur: &mut UProduct, out: &mut Vec<UProduct>) {
        if k == slots.len() {
            out.push(cur.clone());
            return;
        }
        let (edge, i, w) = slots[k];
        let mut e = 0;
        loop {
            rec(slots, k + 1, budget - e * w, cur, out);
            if (e + 1) * w > budget {
                break;
            }
            e += 1;
            match edge {
                None => cur.x_exp[i] += 1,
                Some(ed) => *cur.edges.entry(ed).or_insert(0) += 1,
            }
        }
        match edge {
            None => cur.x_exp[i] -= e,
            Some(ed) => {
                if e > 0 {
                    cur.edges.remove(&ed);
                }
            }
        }
    }
    rec(&slots, 0, max_degree, &mut UProduct::one(m), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn uncross_basic() {
        let prod = UProduct::one(4).with_u(0, 2, 1).with_u(1, 3, 1);
        let out = uncross(&prod);
        let names: Vec<String> = out.iter().map(|(c, u)| format!("{c}*{u}")).collect();
        assert_eq!(names, ["1*u12*u34", "1*u14*u23"]);
        for v in [2u64, 3, 5] {
            assert_eq!(expand_combination(&out, 4, p(v)), prod.expand(p(v)));
        }
    }

    #[test]
    fn uncross_noncrossing_is_identity() {
        let prod = UProduct::one(4)
            .with_u(0, 1, 2)
            .with_u(2, 3, 1)
            .with_x(1, 1);
        assert_eq!(uncross(&prod), vec![(1, prod)]);
    }

    #[test]
    fn uncross_passes_x_through() {
        let prod = UProduct::one(5)
            .with_x(4, 1)
            .with_u(0, 2, 1)
            .with_u(1, 3, 1);
        let out = uncross(&prod);
        assert_eq!(out.len(), 2);
        assert!(out
            .iter()
            .all(|(c, u)| *c == 1 && u.x_exp[4] == 1 && u.is_noncrossing()));
        assert_eq!(expand_combination(&out, 5, p(7)), prod.expand(p(7)));
    }

    #[test]
    fn uncross_heavy() {
        let prod = UProduct::one(6)
            .with_u(0, 3, 2)
            .with_u(1, 4, 1)
            .with_u(2, 5, 1)
            .with_u(0, 4, 1);
        let out = uncross(&prod);
        assert!(out.iter().all(|(_, u)| u.is_noncrossing()));
        assert_eq!(expand_combination(&out, 6, p(7)), prod.expand(p(7)));
    }

    #[test]
    fn relations_vanish() {
        for v in [2u64, 3, 5, 7] {
            let r = verify_relations(4, p(v)).unwrap();
            assert_eq!(r.three_term_checked, 4);
            assert_eq!(r.plucker_checked, 1);
        }
        let r = verify_relations(3, p(5)).unwrap();
        assert_eq!(r.plucker_checked, 0);
    }

    #[test]
    fn summand_length_examples() {
        let f = UProduct::one(4)
            .with_x(3, 1)
            .with_u(0, 1, 1)
            .with_u(2, 3, 1);
        assert_eq!(summand_length_of_product(&f, p(7)), 2);
        let g = UProduct::one(4)
            .with_x(0, 1)
            .with_x(1, 1)
            .with_x(2, 1)
            .with_x(3, 2);
        assert_eq!(summand_length_of_product(&g, p(7)), 6);
        assert_eq!(summand_length_of_product(&g, p(5)), 5);
        assert_eq!(summand_length_of_product(&UProduct::one(3), p(5)), 1);
    }

    #[test]
    fn enumerate_products_counts() {
        // m = 2: x1^a x2^b u12^c with a + b + 2c <= 2: 1 + 2 + 3 + 1 = 7
        assert_eq!(enumerate_products(2, 2).len(), 7);
        let all = enumerate_products(3, 4);
        assert!(all.iter().all(|u| u.degree() <= 4));
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), all.len());
    }
}
