//! One function per subcommand. Each returns JSON records, a CSV view, and
//! summary lines for stderr.

use std::fmt::Write as _;

use anyhow::{anyhow, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sphere_hecke::afe::{conductor_q_d, l_central, q_infty, AfeResult};
use sphere_hecke::geodesics::{build_family, class_number, enumerate_e, verify_gauss, FamilyRecord};
use sphere_hecke::hecke::{HeckeEigenfunction, HeckeSpace, SumMode};
use sphere_hecke::hurwitz::{enumerate_norm, sigma};
use sphere_hecke::restriction::{norm_direct, norm_parseval, sweep, NORM_FLOOR};
use sphere_hecke::theta::{cm_form, lift, lift_hecke};

use crate::config::{Mode, RunConfig};
use crate::output::Table;

pub struct Report {
    pub records: Vec<Value>,
    pub table: Table,
    pub summary: Vec<String>,
    /// Failed checks; empty when everything requested passed.
    pub failures: Vec<String>,
    /// Failures that flag investigation rather than a broken build.
    pub exploratory_failures: Vec<String>,
    /// Extra text file (the sweep plot), written next to the main output.
    pub plot: Option<String>,
}

impl Report {
    fn new(table: Table) -> Self {
        Self {
            records: Vec::new(),
            table,
            summary: Vec::new(),
            failures: Vec::new(),
            exploratory_failures: Vec::new(),
            plot: None,
        }
    }
}

fn f(x: f64) -> String {
    format!("{x:e}")
}

fn value<T: Serialize>(t: &T) -> Result<Value> {
    Ok(serde_json::to_value(t)?)
}

fn sum_mode(m: Mode) -> SumMode {
    match m {
        Mode::Full => SumMode::Full,
        Mode::Cosets => SumMode::Cosets,
    }
}

fn odd_part(mut n: u64) -> u64 {
    while n > 0 && n.is_multiple_of(2) {
        n /= 2;
    }
    n
}

pub fn enumerate(cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::new(Table::new(&["n", "hurwitz_count", "expected", "lipschitz_count", "e_count"]));
    for &n in &cfg.n {
        if n == 0 {
            return Err(anyhow!("norm must be positive"));
        }
        let elems = enumerate_norm(n);
        let expected = 24 * sigma(odd_part(n));
        let lipschitz = elems.iter().filter(|q| q.is_lipschitz()).count();
        let e = enumerate_e(n as i64);
        let holds = elems.len() as u64 == expected;
        if !holds {
            r.failures.push(format!("n={n}: |O(n)| = {} but 24σ = {expected}", elems.len()));
        }
        r.summary.push(format!("n={n}: |O(n)|={} (24σ={expected}), |E(n)|={}", elems.len(), e.len()));
        r.table.push(vec![
            n.to_string(),
            elems.len().to_string(),
            expected.to_string(),
            lipschitz.to_string(),
            e.len().to_string(),
        ]);
        let doubled: Vec<[i64; 4]> = elems.iter().map(|q| q.doubled()).collect();
        r.records.push(json!({
            "n": n,
            "hurwitz_count": elems.len(),
            "expected": expected,
            "holds": holds,
            "lipschitz_count": lipschitz,
            "elements_doubled": doubled,
            "e_count": e.len(),
            "E": e,
        }));
    }
    Ok(r)
}

pub fn class(cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::new(Table::new(&["D", "n_D", "h_D", "c_D", "r3", "gauss", "orbits"]));
    for &d in &cfg.d {
        let cls = class_number(d)?;
        if cls.c_d.is_none() {
            r.summary.push(format!("D={d}: h={}, no geodesic family (D ≡ 1 mod 8 has no points on the sphere)", cls.h));
            r.table.push(vec![
                d.to_string(),
                String::new(),
                cls.h.to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ]);
            r.records
                .push(json!({"D": d, "h_D": cls.h, "c_D": null, "forms": cls.forms, "gauss": null, "family": null}));
            continue;
        }
        let gauss = verify_gauss(d)?;
        let family = build_family(d)?;
        let orbits_ok = family.geodesics.len() as u32 == family.c_d * family.h_d;
        let word = match gauss.holds {
            Some(true) => "OK",
            Some(false) => "FAIL",
            None => "n/a",
        };
        if gauss.holds == Some(false) {
            r.failures.push(format!(
                "D={d}: r3 = {} but {}·h = {}",
                gauss.r3,
                gauss.multiplier,
                gauss.multiplier * gauss.h as u64
            ));
        }
        if !orbits_ok {
            r.failures.push(format!(
                "D={d}: {} orbits, expected c_D·h_D = {}",
                family.geodesics.len(),
                family.c_d * family.h_d
            ));
        }
        r.summary.push(format!("D={d}: h={}, c_D={}, Gauss {word}", cls.h, family.c_d));
        r.table.push(vec![
            d.to_string(),
            family.n_d.to_string(),
            cls.h.to_string(),
            family.c_d.to_string(),
            gauss.r3.to_string(),
            word.to_string(),
            family.geodesics.len().to_string(),
        ]);
        r.records.push(json!({
            "D": d,
            "n_D": family.n_d,
            "h_D": cls.h,
            "c_D": family.c_d,
            "forms": cls.forms,
            "gauss": gauss,
            "orbits_ok": orbits_ok,
            "family": value(&FamilyRecord::from(&family))?,
        }));
    }
    Ok(r)
}

/// `(n, rows)`.
type Matrix = (u64, Vec<Vec<f64>>);

pub fn hecke(cfg: &RunConfig) -> Result<Report> {
    let mode = sum_mode(cfg.mode);
    let per: Vec<Result<(usize, usize, Vec<Matrix>)>> = (cfg.lmin..=cfg.lmax)
        .into_par_iter()
        .map(|ell| {
            let s = HeckeSpace::new(ell);
            let mut mats = Vec::new();
            if s.dim() > 0 {
                for &n in &cfg.n {
                    let m = s.matrix(n, mode)?.entries;
                    mats.push((n, (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()));
                }
            }
            Ok((ell, s.dim(), mats))
        })
        .collect();
    let mut r = Report::new(Table::new(&["ell", "n", "row", "col", "value"]));
    for item in per {
        let (ell, dim, mats) = item?;
        for (n, m) in &mats {
            for (i, row) in m.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    r.table.push(vec![ell.to_string(), n.to_string(), i.to_string(), j.to_string(), f(*v)]);
                }
            }
        }
        r.summary.push(format!("ℓ={ell}: dim {dim}"));
        let matrices: Vec<Value> = mats.iter().map(|(n, m)| json!({"n": n, "entries": m})).collect();
        r.records.push(json!({"ell": ell, "dim": dim, "mode": cfg.mode, "matrices": matrices}));
    }
    Ok(r)
}

fn eigenbases(cfg: &RunConfig, record: &[u64]) -> Result<Vec<(usize, Vec<HeckeEigenfunction>)>> {
    let mode = sum_mode(cfg.mode);
    (cfg.lmin..=cfg.lmax)
        .into_par_iter()
        .map(|ell| Ok((ell, HeckeSpace::new(ell).joint_eigenbasis(mode, record)?)))
        .collect()
}

pub fn eigen(cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::new(Table::new(&["ell", "eig_id", "n", "lambda", "residual"]));
    for (ell, eig) in eigenbases(cfg, &cfg.n)? {
        let mut fns = Vec::new();
        for (id, e) in eig.iter().enumerate() {
            let mut lam = Vec::new();
            for ((n, l), (_, res)) in e.eigenvalues.iter().zip(&e.residuals) {
                if *res > cfg.tol.algebra {
                    r.failures.push(format!("ℓ={ell} eig {id}: ‖T_{n}ψ − λψ‖ = {res:e}"));
                }
                r.table.push(vec![ell.to_string(), id.to_string(), n.to_string(), f(*l), f(*res)]);
                lam.push(json!({"n": n, "lambda": l, "residual": res}));
            }
            fns.push(json!({"eig_id": id, "eigenvalues": lam, "coeffs": e.coeffs}));
        }
        r.summary.push(format!("ℓ={ell}: {} eigenfunctions", eig.len()));
        r.records.push(json!({"ell": ell, "eigenfunctions": fns}));
    }
    Ok(r)
}

pub fn restrict(cfg: &RunConfig) -> Result<Report> {
    let eig = eigenbases(cfg, &[3])?;
    let mut r =
        Report::new(Table::new(&["D", "ell", "eig_id", "lambda3", "norm_direct", "norm_parseval", "relative_gap"]));
    for &d in &cfg.d {
        let fam = build_family(d)?;
        let mut worst: f64 = 0.0;
        for (ell, es) in &eig {
            for (id, e) in es.iter().enumerate() {
                let psi = e.function();
                let a = norm_direct(&psi, &fam, id);
                let b = norm_parseval(&psi, &fam, id);
                let gap = (a.total - b.total).abs() / a.total.max(NORM_FLOOR);
                worst = worst.max(gap);
                if gap > cfg.tol.route {
                    r.failures.push(format!("D={d} ℓ={ell} eig {id}: routes differ by {gap:e}"));
                }
                let l3 = e.lambda(3).unwrap_or(f64::NAN);
                r.table.push(vec![
                    d.to_string(),
                    ell.to_string(),
                    id.to_string(),
                    f(l3),
                    f(a.total),
                    f(b.total),
                    f(gap),
                ]);
                r.records
                    .push(json!({"lambda3": l3, "report": value(&a)?, "parseval_total": b.total, "relative_gap": gap}));
            }
        }
        r.summary.push(format!("D={d}: largest relative gap between routes {worst:.2e}"));
    }
    Ok(r)
}

pub fn sweep_cmd(cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::new(Table::new(&["D", "ell", "eig_id", "lambda3", "norm_sq", "ratio"]));
    let mut plot = String::new();
    for &d in &cfg.d {
        let t = sweep(d, cfg.lmin, cfg.lmax)?;
        if !plot.is_empty() {
            plot.push_str("\n\n");
        }
        writeln!(plot, "# D = {d}: ln(ell) ln(norm_sq)").unwrap();
        for row in &t.rows {
            r.table.push(vec![
                d.to_string(),
                row.ell.to_string(),
                row.eig_id.to_string(),
                f(row.lambda3),
                f(row.norm_sq),
                f(row.ratio),
            ]);
            if row.norm_sq > NORM_FLOOR && row.ell > 0 {
                writeln!(plot, "{:.16e} {:.16e}", (row.ell as f64).ln(), row.norm_sq.ln()).unwrap();
            }
        }
        let slope = t.slope.map_or("none".to_string(), |s| format!("{s:.4}"));
        r.summary.push(format!("D={d}: {} rows, slope {slope}", t.rows.len()));
        if t.slope.is_some_and(|s| s > cfg.tol.slope) {
            r.exploratory_failures.push(format!("D={d}: slope {slope} exceeds {}", cfg.tol.slope));
        }
        r.records.push(json!({"D": d, "lmin": cfg.lmin, "lmax": cfg.lmax, "slope": t.slope, "rows": t.rows}));
    }
    r.plot = Some(plot);
    Ok(r)
}

pub fn theta(cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::new(Table::new(&["ell", "eig_id", "m", "a_m"]));
    for (ell, es) in eigenbases(cfg, &[3])? {
        for (id, e) in es.iter().enumerate() {
            let q = lift(&e.function(), cfg.m)?;
            let a1 = q.coeff(1).unwrap_or(f64::NAN);
            if (a1 - 1.0).abs() > 1e-8 {
                r.failures.push(format!("ℓ={ell} eig {id}: a_1 = {a1}"));
            }
            for (m, a) in q.a.iter().enumerate() {
                r.table.push(vec![ell.to_string(), id.to_string(), (m + 1).to_string(), f(*a)]);
            }
            r.records.push(json!({"ell": ell, "eig_id": id, "qexp": value(&q)?}));
        }
        r.summary.push(format!("ℓ={ell}: {} lifts to weight {}", es.len(), 2 * ell + 2));
    }
    Ok(r)
}

pub fn cm(cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::new(Table::new(&["D", "n", "m", "a_m"]));
    for &d in &cfg.d {
        for &n in &cfg.n {
            let c = cm_form(d, n as u32, cfg.m)?;
            if !c.imaginary_exact_zero {
                r.failures.push(format!("D={d} n={n}: imaginary parts do not cancel"));
            }
            for (m, a) in c.exact.iter().enumerate() {
                r.table.push(vec![d.to_string(), n.to_string(), (m + 1).to_string(), a.clone()]);
            }
            r.summary.push(format!(
                "D={d} n={n}: weight {}, level {}, {} coefficients",
                c.qexp.weight,
                c.qexp.level,
                c.exact.len()
            ));
            r.records.push(json!({"D": d, "n": n, "imaginary_exact_zero": c.imaginary_exact_zero, "exact": c.exact, "qexp": value(&c.qexp)?}));
        }
    }
    Ok(r)
}

/// `q_D·√q∞`, the length past which `V` is negligible.
pub fn suggested_m(d: i64, ell: usize, n: u32) -> usize {
    (conductor_q_d(d) * q_infty(ell, n).sqrt()).ceil() as usize
}

#[derive(Serialize)]
struct AfeRecord {
    eig_id: usize,
    #[serde(flatten)]
    result: AfeResult,
}

pub fn afe(cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::new(Table::new(&["ell", "D", "n", "eig_id", "epsilon", "M", "value", "q_infty"]));
    let eig = eigenbases(cfg, &[3])?;
    for &d in &cfg.d {
        for &n in &cfg.n {
            let g = cm_form(d, n as u32, cfg.m)?.qexp;
            for (ell, es) in &eig {
                if n as usize > *ell {
                    r.summary.push(format!("skipping ℓ={ell}: angular index {n} exceeds the degree"));
                    continue;
                }
                let want = suggested_m(d, *ell, n as u32);
                if cfg.m < want {
                    r.summary.push(format!(
                        "warning: M = {} is below the suggested cap {want} for ℓ={ell}, D={d}, n={n}",
                        cfg.m
                    ));
                }
                for (id, e) in es.iter().enumerate() {
                    let fq = lift_hecke(&e.function(), cfg.m)?;
                    let res = l_central(&fq, &g, d, cfg.epsilon, cfg.m)?;
                    if res.value < -cfg.tol.afe {
                        r.failures.push(format!("ℓ={ell} D={d} n={n} eig {id}: L(1/2) = {:e} is negative", res.value));
                    }
                    r.summary.push(format!("ℓ={ell} D={d} n={n} eig {id}: L(1/2) ≈ {:.9}", res.value));
                    r.table.push(vec![
                        ell.to_string(),
                        d.to_string(),
                        n.to_string(),
                        id.to_string(),
                        res.epsilon.to_string(),
                        res.m.to_string(),
                        f(res.value),
                        f(res.q_infty),
                    ]);
                    r.records.push(value(&AfeRecord { eig_id: id, result: res })?);
                }
            }
        }
    }
    Ok(r)
}
