//! Oracle checks shared by `selftest` and the acceptance target.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::Instant;

use modinv::cpaction::{
    decompose_component, delta_power, invariant_basis, is_invariant, length, norm,
    periodicity_reduce, power_sum, power_sum_brute, transfer, SigmaOperator,
};
use modinv::paths::{
    count_paths_brute, count_tables, enumerate_paths, lambda_monomial, tensor_decomposition, theta,
};
use modinv::polarize::{
    decompose_by_symmetrization, polarize_full, restitute, restitute_monomial, young_symmetrize,
    BlockSplit,
};
use modinv::sagbi::{
    build_generators, build_generators_within, exponent_box, minimality_report, sagbi_verify,
    subduct, GenTag, SetKind,
};
use modinv::sl2::{
    build_sm, dickson, minimal_generators_sl2, norm_x_monomial, polarize_ld, rel_transfer_pb,
    rel_transfer_pb_coset, sl2_act, verify_d_rank_one, verify_l_identities, verify_sm_membership,
    SL2Element, Sl2Config,
};
use modinv::straighten::{
    enumerate_products, expand_combination, summand_length_of_product, uncross, verify_relations,
    UProduct,
};
use modinv::{
    grevlex_cmp, Component, ModuleDecomposition, Monomial, MultiDegree, Polynomial, Prime, VarRef,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// Deliberate bugs for testing that the self-test notices them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    TransferSign,
}

impl std::str::FromStr for Fault {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "transfer-sign" => Ok(Fault::TransferSign),
            _ => Err(format!("unknown fault `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Ctx {
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for Ctx {
    fn default() -> Self {
        Ctx {
            seed: DEFAULT_SEED,
            fault: None,
        }
    }
}

impl Ctx {
    fn transfer(&self, f: &Polynomial) -> Polynomial {
        let t = transfer(f);
        match self.fault {
            Some(Fault::TransferSign) => -&t,
            None => t,
        }
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

type Outcome = Result<String, String>;

fn run(name: impl Into<String>, f: impl FnOnce() -> Outcome) -> Check {
    let name = name.into();
    let res = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    match res {
        Ok(detail) => Check {
            name,
            passed: true,
            detail,
        },
        Err(detail) => Check {
            name,
            passed: false,
            detail,
        },
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pr(v: u64) -> Prime {
    Prime::new(v).expect("prime")
}

fn md(v: &[u32]) -> MultiDegree {
    MultiDegree::new(v.to_vec())
}

fn poly(s: &str, m: usize, p: Prime) -> Result<Polynomial, String> {
    Polynomial::parse(s, m, p).map_err(|e| e.to_string())
}

fn dec(p: Prime, pairs: &[(usize, u64)]) -> ModuleDecomposition {
    let mut d = ModuleDecomposition::zero(p);
    for &(n, c) in pairs {
        d.add_summand(n, c);
    }
    d
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn y_power(m: usize, p: Prime, e: &[u32]) -> Polynomial {
    let xs = vec![0; m];
    let ys: Vec<u16> = e.iter().map(|&v| v as u16).collect();
    Polynomial::monomial(Monomial::from_xy(&xs, &ys), p, 1)
}

// ---------------------------------------------------------------------------
// Acceptance criteria

pub const CRITERIA: [&str; 9] = [
    "counting corollary",
    "tensor decomposition",
    "degree (1,1,1,2) decompositions",
    "periodicity",
    "lemma suite",
    "SAGBI and minimality",
    "relations and summand lengths",
    "SL2 generators",
    "determinism",
];

/// Runs criterion `n` (1 to 8). Criterion 9 needs the binary and lives in
/// the acceptance target.
pub fn criterion(n: usize, ctx: &Ctx) -> Check {
    let name = format!("{n}. {}", CRITERIA[n - 1]);
    let t0 = Instant::now();
    let mut c = match n {
        1 => run(name, criterion_counting),
        2 => run(name, criterion_tensor),
        3 => run(name, criterion_degree_1112),
        4 => run(name, criterion_periodicity),
        5 => run(name, || criterion_lemmas(ctx)),
        6 => run(name, criterion_sagbi),
        7 => run(name, || criterion_relations(ctx)),
        8 => run(name, criterion_sl2),
        _ => panic!("no criterion {n}"),
    };
    c.detail = format!("{} [{:.1}s]", c.detail, t0.elapsed().as_secs_f64());
    c
}

fn criterion_counting() -> Outcome {
    let mut checked = 0;
    for v in [2u64, 3, 5, 7] {
        let p = pr(v);
        let tables = count_tables(12, p);
        ensure(tables.corollary_holds(), || {
            format!("corollary fails at p = {v}")
        })?;
        for d in 0..=12 {
            let b = count_paths_brute(d, p);
            for (h, &c) in b.by_height.iter().enumerate() {
                ensure(c == tables.nu(d, h), || {
                    format!(
                        "p = {v}, d = {d}: {c} PDPs of height {h}, table {}",
                        tables.nu(d, h)
                    )
                })?;
                ensure(c == tables.mu(d, h + 1), || {
                    format!("p = {v}, d = {d}: mu({}) != brute", h + 1)
                })?;
            }
            ensure(b.idp == tables.nu_bar(d), || {
                format!("p = {v}, d = {d}: IDP count {}", b.idp)
            })?;
            ensure(b.idp == tables.mu(d, v as usize), || {
                format!("p = {v}, d = {d}: mu(p) != IDP count")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (p, d) pairs"))
}

fn criterion_tensor() -> Outcome {
    let mut paths_checked = 0;
    for v in [2u64, 3, 5, 7] {
        let p = pr(v);
        for d in 1..=8usize {
            let lambda = MultiDegree::ones(d);
            let op = SigmaOperator::new(&lambda, p);
            let comp = op.component().clone();
            let mut total = 0usize;
            let mut leads = BTreeSet::new();
            for (path, class) in enumerate_paths(d, p) {
                let dim = class.summand_dim(p).ok_or("path outside the domain")?;
                total += dim;
                let t = theta(&path, p).map_err(err)?;
                ensure(is_invariant(&t), || {
                    format!("theta({path}) not invariant at p = {v}")
                })?;
                let lm = t.lead_monomial().ok_or("theta is zero")?.clone();
                ensure(lm == lambda_monomial(&path), || {
                    format!("LM(theta({path})) != Lambda at p = {v}")
                })?;
                let l = op
                    .length_of_vector(&comp.to_vector(&t).map_err(err)?)
                    .map_err(err)?;
                ensure(l as usize == dim, || {
                    format!("length(theta({path})) = {l}, expected {dim} at p = {v}")
                })?;
                leads.insert(lm);
                paths_checked += 1;
            }
            ensure(total == 1 << d, || {
                format!("dimensions sum to {total} at p = {v}, d = {d}")
            })?;
            let basis_leads: BTreeSet<Monomial> = op
                .invariant_vectors()
                .iter()
                .map(|w| {
                    comp.from_vector(w, p)
                        .lead_monomial()
                        .expect("nonzero")
                        .clone()
                })
                .collect();
            ensure(basis_leads == leads, || {
                format!("Lambda image differs from invariant leads at p = {v}, d = {d}")
            })?;
        }
    }
    Ok(format!("{paths_checked} paths"))
}

fn criterion_degree_1112() -> Outcome {
    let lambda = md(&[1, 1, 1, 2]);
    let expected = [
        (7u64, dec(pr(7), &[(2, 3), (4, 3), (6, 1)])),
        (5, dec(pr(5), &[(2, 3), (4, 2), (5, 2)])),
        (3, dec(pr(3), &[(3, 8)])),
        (2, dec(pr(2), &[(2, 12)])),
    ];
    for (v, want) in expected {
        let p = pr(v);
        let got = decompose_component(&lambda, p);
        ensure(got == want, || {
            format!("p = {v}: rank profile gives {got}, expected {want}")
        })?;
        let sym = decompose_by_symmetrization(&lambda, p).map_err(err)?;
        ensure(sym == want, || {
            format!("p = {v}: symmetrization gives {sym}, expected {want}")
        })?;
    }
    Ok("p = 7, 5, 3, 2 by both routes".into())
}

fn criterion_periodicity() -> Outcome {
    for v in [3u64, 5, 7] {
        let p = pr(v);
        let q = v as u32;
        let lambda = md(&[q + 1, 1, 1, q + 2]);
        let red = periodicity_reduce(&lambda, p);
        ensure(red.reduced == md(&[1, 1, 1, 2]), || {
            format!("p = {v}: reduced to {:?}", red.reduced.0)
        })?;
        ensure(red.projective_count == 4 * v + 20, || {
            format!("p = {v}: t = {}", red.projective_count)
        })?;
        let full = decompose_component(&lambda, p);
        let small = decompose_component(&red.reduced, p).with_projectives(red.projective_count);
        ensure(full == small, || format!("p = {v}: {full} != {small}"))?;
    }
    Ok("p = 3, 5, 7".into())
}

fn random_poly(rng: &mut ChaCha8Rng, lambda: &MultiDegree, p: Prime) -> Polynomial {
    let comp = Component::new(lambda.clone());
    let mut v: Vec<u32> = (0..comp.dim()).map(|_| rng.gen_range(0..p.get())).collect();
    if v.iter().all(|&c| c == 0) {
        v[0] = 1;
    }
    comp.from_vector(&v, p)
}

fn criterion_lemmas(ctx: &Ctx) -> Outcome {
    let mut rng = ctx.rng(5);
    for v in [2u64, 3, 5, 7, 11, 13] {
        let p = pr(v);
        for t in 1..=3 * (v - 1) {
            ensure(power_sum(t, p) == power_sum_brute(t, p), || {
                format!("power sum t = {t}, p = {v}")
            })?;
        }
    }
    // (σ - 1)^{|E|} y^E = |E|! x^E for square-free E.
    for _ in 0..50 {
        let v = *[3u64, 5, 7, 11, 13].choose(&mut rng).unwrap();
        let p = pr(v);
        let k = rng.gen_range(1..(v as usize).min(9));
        let m = k + rng.gen_range(0..=2);
        let mut blocks: Vec<usize> = (0..m).collect();
        blocks.shuffle(&mut rng);
        let mut e = vec![0u32; m];
        for &b in &blocks[..k] {
            e[b] = 1;
        }
        let ye = y_power(m, p, &e);
        let xs: Vec<u16> = e.iter().map(|&v| v as u16).collect();
        let xe = Polynomial::monomial(Monomial::from_xy(&xs, &vec![0; m]), p, 1)
            .scale(p.factorial(k as u64));
        ensure(delta_power(&ye, k as u32) == xe, || {
            format!("delta power for E = {e:?}, p = {v}")
        })?;
    }
    // R(P(f)) = Π λ_i! f.
    for _ in 0..50 {
        let v = *[3u64, 5, 7].choose(&mut rng).unwrap();
        let p = pr(v);
        let m = rng.gen_range(1..=3);
        let lambda = loop {
            let l: Vec<u32> = (0..m).map(|_| rng.gen_range(0..v as u32).min(4)).collect();
            if l.iter().sum::<u32>() > 0 && l.iter().sum::<u32>() <= 8 {
                break md(&l);
            }
        };
        let f = random_poly(&mut rng, &lambda, p);
        let split = BlockSplit::new(lambda.parts());
        let back = restitute(&polarize_full(&f, &lambda).map_err(err)?, &split).map_err(err)?;
        let scale = lambda
            .parts()
            .iter()
            .fold(1, |acc, &l| p.mul(acc, p.factorial(l as u64)));
        ensure(back == f.scale(scale), || {
            format!("R(P(f)) != prod(l_i!) f for {f} at p = {v}")
        })?;
    }
    // LM of traces: R(LM(Tr(y^E))) = LM(Tr(R(y^E))).
    for _ in 0..50 {
        let v = *[3u64, 5, 7].choose(&mut rng).unwrap();
        let p = pr(v);
        let m = rng.gen_range(1..=3);
        let parts: Vec<u32> = (0..m).map(|_| rng.gen_range(1..=3)).collect();
        let split = BlockSplit::new(&parts);
        let n = split.target_blocks();
        let e: Vec<u32> = loop {
            let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=1)).collect();
            if (0..m).all(|i| split.run(i).map(|t| e[t]).sum::<u32>() < v as u32) {
                break e;
            }
        };
        let big = ctx.transfer(&y_power(n, p, &e));
        let small_e: Vec<u32> = (0..m).map(|i| split.run(i).map(|t| e[t]).sum()).collect();
        let small = ctx.transfer(&y_power(m, p, &small_e));
        match (big.lead_monomial(), small.lead_monomial()) {
            (None, None) => {}
            (Some(a), Some(b)) => ensure(&restitute_monomial(a, &split) == b, || {
                format!("LM of traces fails for E = {e:?}, split {parts:?}, p = {v}")
            })?,
            _ => {
                return Err(format!(
                    "one transfer vanishes for E = {e:?}, split {parts:?}, p = {v}"
                ))
            }
        }
    }
    // Compatibility of polarization with the order.
    for _ in 0..50 {
        let v = *[3u64, 5, 7].choose(&mut rng).unwrap();
        let p = pr(v);
        let m = rng.gen_range(1..=3);
        let lambda = loop {
            let l: Vec<u32> = (0..m).map(|_| rng.gen_range(0..v as u32).min(4)).collect();
            if md(&l).component_dim() >= 2 {
                break md(&l);
            }
        };
        let comp = Component::new(lambda.clone());
        let i = rng.gen_range(0..comp.dim());
        let j = loop {
            let j = rng.gen_range(0..comp.dim());
            if j != i {
                break j;
            }
        };
        let (g1, g2) = {
            let a = comp.monomial_at(i);
            let b = comp.monomial_at(j);
            if a > b {
                (a, b)
            } else {
                (b, a)
            }
        };
        let lm = |g: &Monomial| -> Result<Monomial, String> {
            let f = polarize_full(&Polynomial::monomial(g.clone(), p, 1), &lambda).map_err(err)?;
            f.lead_monomial()
                .cloned()
                .ok_or_else(|| "polarization vanished".to_string())
        };
        let (l1, l2) = (lm(&g1)?, lm(&g2)?);
        ensure(grevlex_cmp(&l1, &l2).map_err(err)?.is_gt(), || {
            format!("compatibility fails for {g1} > {g2} at p = {v}")
        })?;
    }
    Ok("power sums, delta powers, R∘P, LM of traces, compatibility".into())
}

fn criterion_sagbi() -> Outcome {
    let mut invariants = 0;
    for v in [2u64, 3, 5] {
        let p = pr(v);
        for m in 1..=3usize {
            let gens = build_generators(p, m, SetKind::Minimal);
            for total in 0..=6 {
                for lambda in MultiDegree::all_with_total(m, total) {
                    let r = sagbi_verify(&lambda, &gens);
                    ensure(r.passed(), || {
                        format!(
                            "p = {v}, m = {m}, {:?}: lead {} does not factor",
                            lambda.0, r.failures[0]
                        )
                    })?;
                    for f in invariant_basis(&lambda, p) {
                        let s = subduct(&f, &gens).map_err(err)?;
                        ensure(s.is_member(), || {
                            format!("p = {v}, m = {m}: {f} leaves remainder {}", s.remainder)
                        })?;
                        invariants += 1;
                    }
                }
            }
            let mr = minimality_report(p, m);
            if let Some((t, _)) = mr.indispensable.iter().find(|(_, ok)| !ok) {
                return Err(format!("p = {v}, m = {m}: {t} subducts against the rest"));
            }
            if let Some((e, _)) = mr.redundant_transfers.iter().find(|(_, ok)| !ok) {
                return Err(format!(
                    "p = {v}, m = {m}: Tr(y^{e:?}) does not subduct to 0"
                ));
            }
            for e in exponent_box(m, p) {
                if e.iter().sum::<u32>() + 1 < v as u32 {
                    let t = transfer(&y_power(m, p, &e));
                    ensure(t.is_zero(), || format!("Tr(y^{e:?}) nonzero at p = {v}"))?;
                }
            }
        }
    }
    Ok(format!("{invariants} invariants subducted"))
}

fn random_crossing_product(rng: &mut ChaCha8Rng) -> UProduct {
    loop {
        let m = rng.gen_range(4..=6);
        let mut u = UProduct::one(m);
        for _ in 0..rng.gen_range(2..=4) {
            let i = rng.gen_range(0..m - 1);
            let j = rng.gen_range(i + 1..m);
            u = u.with_u(i, j, rng.gen_range(1..=2));
        }
        if rng.gen_bool(0.5) {
            let i = rng.gen_range(0..m);
            u = u.with_x(i, 1);
        }
        if !u.is_noncrossing() {
            return u;
        }
    }
}

fn criterion_relations(ctx: &Ctx) -> Outcome {
    for v in [2u64, 3, 5, 7] {
        let r = verify_relations(4, pr(v)).map_err(err)?;
        ensure(r.three_term_checked == 4 && r.plucker_checked == 1, || {
            format!("relation count at p = {v}")
        })?;
    }
    let mut rng = ctx.rng(7);
    for _ in 0..100 {
        let u = random_crossing_product(&mut rng);
        let p = pr(*[2u64, 3, 5, 7].choose(&mut rng).unwrap());
        let out = uncross(&u);
        ensure(out.iter().all(|(_, w)| w.is_noncrossing()), || {
            format!("uncross({u}) still crosses")
        })?;
        ensure(
            expand_combination(&out, u.blocks(), p) == u.expand(p),
            || format!("uncross({u}) changes the polynomial"),
        )?;
    }
    let mut products = 0;
    for v in [2u64, 3, 5, 7] {
        let p = pr(v);
        for m in 1..=4usize {
            let mut ops: HashMap<Vec<u32>, (Component, Vec<Option<u32>>)> = HashMap::new();
            for u in enumerate_products(m, 8) {
                let lambda = u.multidegree();
                let (comp, lead_lengths) = ops.entry(lambda.clone()).or_insert_with(|| {
                    let op = SigmaOperator::new(&md(&lambda), p);
                    (op.component().clone(), op.lead_lengths())
                });
                let f = u.expand(p);
                let idx = comp
                    .index_of(f.lead_monomial().ok_or("zero product")?)
                    .ok_or("lead outside component")?;
                let want = lead_lengths[idx].ok_or("lead not covered")?;
                let got = summand_length_of_product(&u, p);
                ensure(got == want, || {
                    format!("p = {v}: criterion gives {got} for {u}, summand length {want}")
                })?;
                products += 1;
            }
        }
    }
    Ok(format!("{products} products"))
}

fn criterion_sl2() -> Outcome {
    let r = minimal_generators_sl2(pr(3), 3, &Sl2Config::new(9)).map_err(err)?;
    let degrees: Vec<u32> = r.per_degree.keys().copied().collect();
    ensure(r.total() == 28 && degrees == [2, 4, 6, 8], || {
        format!(
            "p = 3, m = 3: {} generators in degrees {degrees:?}",
            r.total()
        )
    })?;
    for (m, want) in [(3usize, 3u32), (4, 4), (2, 3)] {
        let r = minimal_generators_sl2(pr(2), m, &Sl2Config::new(want + 2)).map_err(err)?;
        ensure(r.noether_number == want, || {
            format!("p = 2, m = {m}: Noether number {}", r.noether_number)
        })?;
        if m > 2 {
            ensure(r.noether_number <= r.noether_bound(), || {
                format!("p = 2, m = {m}: above the bound")
            })?;
        }
    }
    for v in [2u64, 3, 5] {
        for m in 1..=3 {
            verify_l_identities(pr(v), m).map_err(err)?;
            verify_d_rank_one(pr(v), m).map_err(err)?;
        }
    }
    Ok("28 generators in degrees 2,4,6,8; Noether numbers 3,4,3; L and D identities".into())
}

// ---------------------------------------------------------------------------
// Self-test

/// Documented oracle values, each checked in a few milliseconds.
pub fn quick_checks(ctx: &Ctx) -> Vec<Check> {
    let mut out = Vec::new();
    let p2 = pr(2);
    let p3 = pr(3);
    let p5 = pr(5);
    let p7 = pr(7);

    out.push(run("grevlex y1 > x1 > y2 > x2", || {
        let v = |r| Monomial::var(2, r);
        let chain = [
            v(VarRef::y(0)),
            v(VarRef::x(0)),
            v(VarRef::y(1)),
            v(VarRef::x(1)),
        ];
        ensure(chain.windows(2).all(|w| w[0] > w[1]), || {
            "variable order".into()
        })?;
        Ok(String::new())
    }));
    out.push(run("LM(u12) = x1*y2, LM(N(y1)) = y1^p", || {
        let u = Polynomial::u(2, p5, 0, 1);
        ensure(u.lead_monomial().unwrap().to_string() == "x1*y2", || {
            "LM(u12)".into()
        })?;
        for p in [p3, p5] {
            let n = norm(1, p, 0);
            ensure(
                n.lead_monomial().unwrap().to_string() == format!("y1^{p}"),
                || "LM(N)".into(),
            )?;
        }
        Ok(String::new())
    }));
    out.push(run("dim F[4V2]_(1,1,1,2) = 24", || {
        let d = md(&[1, 1, 1, 2]).component_dim();
        ensure(d == 24, || format!("got {d}"))?;
        Ok(String::new())
    }));
    out.push(run("sigma fixes x1 and sends y1 to y1 + x1", || {
        let s = modinv::cpaction::apply_sigma(&Polynomial::y(1, p5, 0), 1);
        ensure(s == poly("y1 + x1", 1, p5)?, || format!("sigma(y1) = {s}"))?;
        ensure(
            modinv::cpaction::apply_sigma(&Polynomial::x(1, p5, 0), 1) == Polynomial::x(1, p5, 0),
            || "sigma(x1)".into(),
        )?;
        Ok(String::new())
    }));
    out.push(run("N(y1) = y1^3 - x1^2*y1 at p = 3", || {
        ensure(norm(1, p3, 0) == poly("y1^3 - x1^2*y1", 1, p3)?, || {
            format!("got {}", norm(1, p3, 0))
        })?;
        Ok(String::new())
    }));
    out.push(run(
        "power sums: t = 2, p = 3 gives -1; t = 3, p = 5 gives 0",
        || {
            ensure(power_sum(2, p3) == 2 && power_sum(3, p5) == 0, || {
                "power sums".into()
            })?;
            Ok(String::new())
        },
    ));
    out.push(run("transfer of y1^(p-1) is -x1^(p-1)", || {
        for p in [p3, p5, p7] {
            let q = p.get();
            let t = ctx.transfer(&Polynomial::y(1, p, 0).pow(q - 1));
            let want = Polynomial::x(1, p, 0).pow(q - 1).scale(p.neg(1));
            ensure(t == want, || format!("p = {q}: got {t}"))?;
        }
        Ok(String::new())
    }));
    out.push(run("Tr(y1*y2) = -x1*x2 at p = 3", || {
        let t = ctx.transfer(&poly("y1*y2", 2, p3)?);
        ensure(t == poly("-x1*x2", 2, p3)?, || format!("got {t}"))?;
        Ok(String::new())
    }));
    out.push(run(
        "invariants of degree (1) are spanned by x1, of length 2",
        || {
            let b = invariant_basis(&md(&[1]), p5);
            ensure(b == vec![Polynomial::x(1, p5, 0)], || "basis".into())?;
            ensure(length(&b[0]).map_err(err)? == 2, || "length".into())?;
            Ok(String::new())
        },
    ));
    out.push(run("F[2V2]_(1,1) = V1 + V3 for p >= 3", || {
        for p in [p3, p5, p7] {
            let d = decompose_component(&md(&[1, 1]), p);
            ensure(d == dec(p, &[(1, 1), (3, 1)]), || format!("p = {p}: {d}"))?;
        }
        Ok(String::new())
    }));
    for (p, want) in [
        (p7, dec(p7, &[(2, 3), (4, 3), (6, 1)])),
        (p5, dec(p5, &[(2, 3), (4, 2), (5, 2)])),
        (p3, dec(p3, &[(3, 8)])),
        (p2, dec(p2, &[(2, 12)])),
    ] {
        out.push(run(format!("F[4V2]_(1,1,1,2) = {want} at p = {p}"), || {
            let d = decompose_component(&md(&[1, 1, 1, 2]), p);
            ensure(d == want, || format!("got {d}"))?;
            let s = decompose_by_symmetrization(&md(&[1, 1, 1, 2]), p).map_err(err)?;
            ensure(s == want, || format!("symmetrization gives {s}"))?;
            Ok(String::new())
        }));
    }
    out.push(run(
        "periodicity: (6,1,1,7) at p = 5 reduces with t = 40",
        || {
            let r = periodicity_reduce(&md(&[6, 1, 1, 7]), p5);
            ensure(
                r.reduced == md(&[1, 1, 1, 2]) && r.projective_count == 40,
                || format!("{r:?}"),
            )?;
            Ok(String::new())
        },
    ));
    out.push(run(
        "paths: d = 5, p = 7 heights 5/4/1, no IDP; d = 3, p = 3 has 2 IDPs",
        || {
            let c = count_paths_brute(5, p7);
            ensure(
                c.by_height[1] == 5 && c.by_height[3] == 4 && c.by_height[5] == 1 && c.idp == 0,
                || format!("{c:?}"),
            )?;
            ensure(count_paths_brute(3, p3).idp == 2, || "IDP count".into())?;
            Ok(String::new())
        },
    ));
    out.push(run(
        "mu tables: mu^1(h) = delta, mu_2^4(2) = 8, mu_3^d(3) = floor((2^d - 1)/3)",
        || {
            for p in [p2, p3, p5, p7] {
                let t = count_tables(1, p);
                ensure(
                    (1..=p.get() as usize).all(|h| t.mu(1, h) == u64::from(h == 2)),
                    || format!("mu^1 at p = {p}"),
                )?;
            }
            ensure(count_tables(4, p2).mu(4, 2) == 8, || "mu_2^4(2)".into())?;
            let t = count_tables(12, p3);
            ensure(t.mu(4, 3) == 5, || "mu_3^4(3)".into())?;
            ensure(
                (1..=12).all(|d| t.mu(d, 3) == ((1u64 << d) - 1) / 3),
                || "mu_3^d(3)".into(),
            )?;
            Ok(String::new())
        },
    ));
    out.push(run(
        "tensor powers: d = 5, p = 7 is 5V2 + 4V4 + V6; d = 2 is V1 + V3",
        || {
            ensure(
                tensor_decomposition(5, p7) == dec(p7, &[(2, 5), (4, 4), (6, 1)]),
                || "d = 5".into(),
            )?;
            ensure(
                tensor_decomposition(2, p5) == dec(p5, &[(1, 1), (3, 1)]),
                || "d = 2".into(),
            )?;
            Ok(String::new())
        },
    ));
    out.push(run(
        "u13*u24 = u12*u34 + u14*u23 and the relations vanish",
        || {
            let out = uncross(&UProduct::one(4).with_u(0, 2, 1).with_u(1, 3, 1));
            let names: Vec<String> = out.iter().map(|(c, u)| format!("{c}*{u}")).collect();
            ensure(names == ["1*u12*u34", "1*u14*u23"], || format!("{names:?}"))?;
            verify_relations(3, p5).map_err(err)?;
            verify_relations(4, p3).map_err(err)?;
            Ok(String::new())
        },
    ));
    out.push(run(
        "summand lengths of x4*u12*u34 and x1*x2*x3*x4^2",
        || {
            let a = UProduct::one(4)
                .with_x(3, 1)
                .with_u(0, 1, 1)
                .with_u(2, 3, 1);
            let b = UProduct::one(4)
                .with_x(0, 1)
                .with_x(1, 1)
                .with_x(2, 1)
                .with_x(3, 2);
            ensure(summand_length_of_product(&a, p7) == 2, || {
                "x4*u12*u34".into()
            })?;
            ensure(
                summand_length_of_product(&b, p7) == 6 && summand_length_of_product(&b, p5) == 5,
                || "x1*x2*x3*x4^2".into(),
            )?;
            Ok(String::new())
        },
    ));
    out.push(run(
        "restitution: R(P(x1*y1)) = 2*x1*y1 and the symmetrized x5*u12*u34",
        || {
            let f = poly("x1*y1", 1, p5)?;
            let split = BlockSplit::new(&[2]);
            ensure(
                restitute(&polarize_full(&f, &md(&[2])).map_err(err)?, &split).map_err(err)?
                    == f.scale(2),
                || "R(P)".into(),
            )?;
            let split = BlockSplit::new(&[1, 1, 1, 2]);
            let big = UProduct::one(5)
                .with_x(4, 1)
                .with_u(0, 1, 1)
                .with_u(2, 3, 1)
                .expand(p7);
            let sym = young_symmetrize(&big, &split).map_err(err)?;
            let other = UProduct::one(5)
                .with_x(3, 1)
                .with_u(0, 1, 1)
                .with_u(2, 4, 1)
                .expand(p7);
            ensure(sym == &big + &other, || "Young symmetrization".into())?;
            let r = restitute(&sym, &split).map_err(err)?;
            let want = UProduct::one(4)
                .with_x(3, 1)
                .with_u(0, 1, 1)
                .with_u(2, 3, 1)
                .expand(p7)
                .scale(2);
            ensure(r == want, || format!("got {r}"))?;
            let z = UProduct::one(5)
                .with_x(0, 1)
                .with_u(1, 2, 1)
                .with_u(3, 4, 1)
                .expand(p7);
            ensure(young_symmetrize(&z, &split).map_err(err)?.is_zero(), || {
                "x1*u23*u45".into()
            })?;
            Ok(String::new())
        },
    ));
    out.push(run(
        "generating sets: F[V2] = F[x1, N(y1)] and the hypersurface case",
        || {
            let tags = |p, m| -> Vec<String> {
                build_generators(p, m, SetKind::Minimal)
                    .elements()
                    .iter()
                    .map(|g| g.tag.to_string())
                    .collect()
            };
            ensure(tags(p2, 1) == ["x1", "N(y1)"], || "p = 2, m = 1".into())?;
            ensure(tags(p3, 2) == ["x1", "x2", "N(y1)", "N(y2)", "u12"], || {
                "p = 3, m = 2".into()
            })?;
            Ok(String::new())
        },
    ));
    out.push(run("SAGBI in degree (1,...,1) for d <= 6 at p = 5", || {
        for m in 1..=6 {
            let g = build_generators_within(p5, m, SetKind::Full, Some(&MultiDegree::ones(m)));
            ensure(sagbi_verify(&MultiDegree::ones(m), &g).passed(), || {
                format!("d = {m}")
            })?;
        }
        Ok(String::new())
    }));
    out.push(run(
        "Tr(y^(2,2,1)) is not generated by the rest of B' at p = 3",
        || {
            let g = build_generators(p3, 3, SetKind::Minimal);
            let k = g
                .position(&GenTag::Trace(vec![2, 2, 1]))
                .ok_or("missing generator")?;
            let r = modinv::sagbi::subduct_unchecked(&g.elements()[k].poly, &g.without(k));
            ensure(!r.is_member(), || "remainder is zero".into())?;
            Ok(String::new())
        },
    ));
    out.push(run(
        "SL2: L = x*y^3 - x^3*y, L_ij, L_i and the L identities",
        || {
            ensure(dickson(p3).l == poly("x1*y1^3 - x1^3*y1", 1, p3)?, || {
                "L".into()
            })?;
            ensure(
                polarize_ld(p3, &md(&[1, 3])).map_err(err)? == poly("x1*y2^3 - y1*x2^3", 2, p3)?,
                || "L12".into(),
            )?;
            ensure(
                polarize_ld(p3, &md(&[4, 0])).map_err(err)? == poly("x1*y1^3 - x1^3*y1", 2, p3)?,
                || "L1".into(),
            )?;
            let g = SL2Element::upper(1, p5);
            ensure(
                sl2_act(&g, &Polynomial::y(1, p5, 0)) == poly("y1 + x1", 1, p5)?,
                || "upper unitriangular".into(),
            )?;
            for p in [p2, p3, p5] {
                verify_l_identities(p, 3).map_err(err)?;
            }
            Ok(String::new())
        },
    ));
    out.push(run("SL2: relative transfer weight rule", || {
        for p in [p3, p5] {
            let f = norm_x_monomial(&[1, 0], &[0, 1], p);
            ensure(
                rel_transfer_pb(&[1, 0], &[0, 1], p).map_err(err)? == f.scale(p.neg(1)),
                || "|a| = |b|".into(),
            )?;
            ensure(
                rel_transfer_pb(&[1, 0], &[1, 1], p).map_err(err)?.is_zero(),
                || "|b| - |a| = 1".into(),
            )?;
            ensure(rel_transfer_pb_coset(&f) == f.scale(p.neg(1)), || {
                "coset sum".into()
            })?;
        }
        Ok(String::new())
    }));
    out.push(run(
        "SL2: Noether numbers p = 2 (m = 2, 3) and Dickson generators at p = 3",
        || {
            let r = verify_sm_membership(p2, 2, &Sl2Config::new(3)).map_err(err)?;
            ensure(r.passed() && r.noether_number == 3, || {
                "p = 2, m = 2".into()
            })?;
            let r = minimal_generators_sl2(p2, 3, &Sl2Config::new(5)).map_err(err)?;
            ensure(r.noether_number == 3, || "p = 2, m = 3".into())?;
            let r = verify_sm_membership(p3, 1, &Sl2Config::new(6)).map_err(err)?;
            ensure(r.passed() && r.noether_number == 6, || {
                "p = 3, m = 1".into()
            })?;
            let r = minimal_generators_sl2(p3, 1, &Sl2Config::new(6)).map_err(err)?;
            ensure(r.per_degree == BTreeMap::from([(4, 1), (6, 1)]), || {
                format!("{:?}", r.per_degree)
            })?;
            Ok(String::new())
        },
    ));
    out
}

/// Quick checks, the criteria sweeps, and the `p = 3, m = 3` SL2 run.
pub fn full_checks(ctx: &Ctx) -> Vec<Check> {
    let mut out = quick_checks(ctx);
    for n in 1..=8 {
        out.push(criterion(n, ctx));
    }
    out.push(run("SL2 membership: p = 3, m = 2 up to degree 6", || {
        let r = verify_sm_membership(pr(3), 2, &Sl2Config::new(6)).map_err(err)?;
        ensure(r.passed(), || format!("missing {:?}", r.missing))?;
        Ok(format!("{} generators", r.generators_checked))
    }));
    out.push(run("SL2 acts as a group on F[2V2] at p = 3", || {
        let p = pr(3);
        let f = poly("x1^2*y2 + y1*x2 - y1^3", 2, p)?;
        let all = SL2Element::all(p);
        for g in &all {
            for h in &all {
                ensure(
                    sl2_act(&g.mul(h), &f) == sl2_act(g, &sl2_act(h, &f)),
                    || format!("{g} {h}"),
                )?;
            }
        }
        let s = build_sm(p, 3);
        ensure(
            s.elements()
                .iter()
                .all(|g| all.iter().all(|a| sl2_act(a, &g.poly) == g.poly)),
            || "S_3 not invariant".into(),
        )?;
        Ok(format!("{} pairs", all.len() * all.len()))
    }));
    out
}
