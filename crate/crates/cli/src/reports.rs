//! Report builders for each subcommand. Every report has a JSON form with a
//! fixed key order and a plain-text table form.

use std::fmt::Write as _;
use std::time::Instant;

use modinv::cpaction::{decompose_component, decompose_with_periodicity, invariant_basis};
use modinv::paths::{
    count_paths_brute, count_tables, enumerate_paths, lambda_monomial, tensor_decomposition,
};
use modinv::sagbi::{build_generators, minimality_report, sagbi_verify, subduct, SetKind};
use modinv::sl2::{minimal_generators_sl2, Sl2Config};
use modinv::{Error, ModuleDecomposition, MultiDegree, Prime};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::checks::{full_checks, quick_checks, Check, Ctx};

/// Components larger than this are refused by `decompose`.
pub const MAX_DECOMPOSE_DIM: usize = 6000;
pub const MAX_PATH_LENGTH: usize = 20;

pub struct Report {
    pub json: Value,
    pub table: String,
    /// False when the report records a failed verification.
    pub verified: bool,
}

fn summands_json(d: &ModuleDecomposition) -> Value {
    let mut map = Map::new();
    for (n, c) in d.summands() {
        map.insert(n.to_string(), json!(c));
    }
    Value::Object(map)
}

fn keyed<T: Into<Value>>(items: impl IntoIterator<Item = (String, T)>) -> Value {
    Value::Object(items.into_iter().map(|(k, v)| (k, v.into())).collect())
}

fn tuple(parts: &[u32]) -> String {
    format!(
        "({})",
        parts
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    )
}

pub fn counts(p: Prime, d_max: usize) -> Report {
    let q = p.get() as usize;
    let tables = count_tables(d_max, p);
    let brute_limit = d_max.min(MAX_PATH_LENGTH);
    let mut brute_ok = true;
    let mut rows = Vec::new();
    let mut table = String::new();
    let _ = writeln!(table, "p = {q}");
    let mut header = String::from("  d |");
    for h in 1..=q {
        let _ = write!(header, " {:>8}", format!("mu({h})"));
    }
    header.push_str(" |");
    for h in 0..q - 1 {
        let _ = write!(header, " {:>8}", format!("nu({h})"));
    }
    let _ = writeln!(table, "{header} |   nu_bar");
    for d in 0..=d_max {
        let mu: Vec<u64> = (1..=q).map(|h| tables.mu(d, h)).collect();
        let nu: Vec<u64> = (0..q - 1).map(|h| tables.nu(d, h)).collect();
        let nu_bar = tables.nu_bar(d);
        if d <= brute_limit {
            let b = count_paths_brute(d, p);
            brute_ok &= b.by_height == nu && b.idp == nu_bar;
        }
        rows.push(json!({
            "d": d,
            "mu": keyed((1..=q).map(|h| (h.to_string(), mu[h - 1]))),
            "nu": keyed((0..q - 1).map(|h| (h.to_string(), nu[h]))),
            "nu_bar": nu_bar,
        }));
        let mut line = format!("{d:>3} |");
        for v in &mu {
            let _ = write!(line, " {v:>8}");
        }
        line.push_str(" |");
        for v in &nu {
            let _ = write!(line, " {v:>8}");
        }
        let _ = writeln!(table, "{line} | {nu_bar:>8}");
    }
    let corollary = tables.corollary_holds();
    let _ = writeln!(
        table,
        "corollary {}; brute force up to d = {brute_limit} {}",
        if corollary { "holds" } else { "FAILS" },
        if brute_ok { "agrees" } else { "DISAGREES" }
    );
    Report {
        json: json!({
            "p": q,
            "dmax": d_max,
            "rows": rows,
            "corollary": corollary,
            "brute_force_dmax": brute_limit,
            "brute_force_agrees": brute_ok,
        }),
        table,
        verified: corollary && brute_ok,
    }
}

pub fn paths(p: Prime, d: usize) -> Result<Report, Error> {
    if d > MAX_PATH_LENGTH {
        return Err(Error::InfeasibleSize {
            dim: 1 << d,
            limit: 1 << MAX_PATH_LENGTH,
        });
    }
    let mut items = Vec::new();
    let mut table = String::new();
    for (path, class) in enumerate_paths(d, p) {
        let dim = class
            .summand_dim(p)
            .expect("enumerated paths are in the domain");
        let lm = lambda_monomial(&path).to_string();
        let _ = writeln!(
            table,
            "{:<width$}  {:<8} V{dim:<3} {lm}",
            path.to_string(),
            class.to_string(),
            width = d.max(4)
        );
        items.push(json!({ "path": path.to_string(), "class": class.to_string(), "dim": dim, "lambda": lm }));
    }
    let counts = count_paths_brute(d, p);
    let _ = writeln!(
        table,
        "PDP by finishing height: {:?}; IDP: {}",
        counts.by_height, counts.idp
    );
    Ok(Report {
        json: json!({
            "p": p.get(),
            "d": d,
            "paths": items,
            "pdp_by_height": keyed(counts.by_height.iter().enumerate().map(|(h, &c)| (h.to_string(), c))),
            "idp": counts.idp,
        }),
        table,
        verified: true,
    })
}

pub fn tensor(p: Prime, d: usize) -> Result<Report, Error> {
    if d > MAX_PATH_LENGTH {
        return Err(Error::InfeasibleSize {
            dim: 1 << d,
            limit: 1 << MAX_PATH_LENGTH,
        });
    }
    let dec = tensor_decomposition(d, p);
    // Cross-check against the rank profile while the component is small.
    let rank_check = (d <= 10).then(|| decompose_component(&MultiDegree::ones(d), p) == dec);
    let table = format!(
        "tensor power {d} of V2 at p = {}: {dec} (dimension {}){}\n",
        p.get(),
        dec.dim(),
        match rank_check {
            Some(true) => "; rank profile agrees",
            Some(false) => "; rank profile DISAGREES",
            None => "",
        }
    );
    Ok(Report {
        json: json!({
            "p": p.get(),
            "d": d,
            "summands": summands_json(&dec),
            "dimension": dec.dim(),
            "rank_check": rank_check,
        }),
        table,
        verified: rank_check != Some(false) && dec.dim() == 1u64 << d,
    })
}

pub fn decompose(p: Prime, lambda: &MultiDegree) -> Result<Report, Error> {
    let reduced = MultiDegree::new(lambda.parts().iter().map(|&d| d % p.get()).collect());
    if reduced.component_dim() > MAX_DECOMPOSE_DIM {
        return Err(Error::InfeasibleSize {
            dim: reduced.component_dim(),
            limit: MAX_DECOMPOSE_DIM,
        });
    }
    let dec = decompose_with_periodicity(lambda, p);
    Ok(Report {
        json: json!({
            "p": p.get(),
            "multidegree": lambda.parts(),
            "summands": summands_json(&dec),
        }),
        table: format!(
            "F[{}V2]_{} = {dec}  (p = {})\n",
            lambda.blocks(),
            tuple(lambda.parts()),
            p.get()
        ),
        verified: true,
    })
}

struct SagbiItem {
    lambda: MultiDegree,
    invariants: usize,
    unfactored: Vec<String>,
    nonzero_remainders: usize,
}

pub fn sagbi(p: Prime, m: usize, d_max: u32, kind: SetKind) -> Report {
    let gens = build_generators(p, m, kind);
    let lambdas: Vec<MultiDegree> = (0..=d_max)
        .flat_map(|d| MultiDegree::all_with_total(m, d))
        .collect();
    let items: Vec<SagbiItem> = lambdas
        .par_iter()
        .map(|lambda| {
            let r = sagbi_verify(lambda, &gens);
            let basis = invariant_basis(lambda, p);
            let nonzero_remainders = basis
                .iter()
                .filter(|f| !subduct(f, &gens).expect("basis is invariant").is_member())
                .count();
            SagbiItem {
                lambda: lambda.clone(),
                invariants: basis.len(),
                unfactored: r.failures.iter().map(ToString::to_string).collect(),
                nonzero_remainders,
            }
        })
        .collect();
    let minimality = (kind == SetKind::Minimal).then(|| minimality_report(p, m));
    let invariants: usize = items.iter().map(|i| i.invariants).sum();
    let failures: Vec<Value> = items
        .iter()
        .filter(|i| !i.unfactored.is_empty() || i.nonzero_remainders > 0)
        .map(|i| {
            json!({
                "multidegree": i.lambda.parts(),
                "unfactored_leads": i.unfactored,
                "nonzero_remainders": i.nonzero_remainders,
            })
        })
        .collect();
    let minimal_ok = minimality.as_ref().is_none_or(|r| r.passed());
    let passed = failures.is_empty() && minimal_ok;
    let set_name = match kind {
        SetKind::Full => "full",
        _ => "minimal",
    };
    let generators: Vec<Value> = gens
        .elements()
        .iter()
        .map(|g| json!({ "tag": g.tag.to_string(), "degree": g.lead.degree(), "lead": g.lead.to_string() }))
        .collect();
    let mut table = String::new();
    let _ = writeln!(
        table,
        "{set_name} generating set for p = {}, m = {m}: {} generators",
        p.get(),
        gens.len()
    );
    for g in gens.elements() {
        let _ = writeln!(
            table,
            "  {:<14} degree {:<3} LM {}",
            g.tag.to_string(),
            g.lead.degree(),
            g.lead
        );
    }
    let _ = writeln!(
        table,
        "{} multidegrees up to degree {d_max}, {invariants} basis invariants: {}",
        items.len(),
        if failures.is_empty() {
            "all leads factor, all subduct to 0"
        } else {
            "FAILURES"
        }
    );
    let mut json = json!({
        "p": p.get(),
        "m": m,
        "dmax": d_max,
        "set": set_name,
        "generators": generators,
        "multidegrees": items.len(),
        "invariants": invariants,
        "failures": failures,
    });
    if let Some(r) = &minimality {
        let _ = writeln!(
            table,
            "minimality: {}",
            if r.passed() {
                "every generator is needed; small transfers are redundant"
            } else {
                "FAILS"
            }
        );
        json["minimality"] = json!({
            "indispensable": r.indispensable.iter().map(|(t, ok)| json!({ "tag": t.to_string(), "ok": ok })).collect::<Vec<_>>(),
            "redundant_transfers": r.redundant_transfers.iter().map(|(e, ok)| json!({ "exponents": e, "ok": ok })).collect::<Vec<_>>(),
        });
    }
    json["passed"] = json!(passed);
    Report {
        json,
        table,
        verified: passed,
    }
}

pub fn sl2(p: Prime, m: usize, d_max: u32, deadline: Option<Instant>) -> Result<Report, Error> {
    let mut config = Sl2Config::new(d_max);
    config.deadline = deadline;
    let r = minimal_generators_sl2(p, m, &config)?;
    let bound = (m > 2).then(|| r.noether_bound());
    let within = bound.is_none_or(|b| r.noether_number <= b);
    let mut table = String::new();
    let _ = writeln!(
        table,
        "SL2(F_{}) on {m}V2 up to degree {d_max}: {} minimal generators, |S_m| = {}",
        p.get(),
        r.total(),
        r.sm_size
    );
    for (d, c) in &r.per_degree {
        let _ = writeln!(table, "  degree {d:>3}: {c}");
    }
    let _ = writeln!(
        table,
        "Noether number {}{}",
        r.noether_number,
        match bound {
            Some(b) => format!(" (bound {b}{})", if within { "" } else { ", EXCEEDED" }),
            None => String::new(),
        }
    );
    Ok(Report {
        json: json!({
            "p": p.get(),
            "m": m,
            "dmax": d_max,
            "sm_size": r.sm_size,
            "generators": r.total(),
            "per_degree": keyed(r.per_degree.iter().map(|(d, c)| (d.to_string(), *c))),
            "per_multidegree": r.per_multidegree.iter().map(|(l, c)| json!({ "multidegree": l.parts(), "count": c })).collect::<Vec<_>>(),
            "noether_number": r.noether_number,
            "noether_bound": bound,
            "within_bound": within,
        }),
        table,
        verified: within,
    })
}

pub fn selftest(full: bool, ctx: &Ctx) -> Report {
    let checks: Vec<Check> = if full {
        full_checks(ctx)
    } else {
        quick_checks(ctx)
    };
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut table = String::new();
    for c in &checks {
        let _ = write!(
            table,
            "{} {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name
        );
        if !c.passed {
            let _ = write!(table, ": {}", c.detail);
        }
        table.push('\n');
    }
    let _ = writeln!(
        table,
        "{} checks, {} passed, {failed} failed",
        checks.len(),
        checks.len() - failed
    );
    Report {
        json: json!({
            "level": if full { "full" } else { "quick" },
            "seed": ctx.seed,
            "checks": checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed, "detail": if c.passed { Value::Null } else { json!(c.detail) } })).collect::<Vec<_>>(),
            "executed": checks.len(),
            "failed": failed,
        }),
        table,
        verified: failed == 0,
    }
}
