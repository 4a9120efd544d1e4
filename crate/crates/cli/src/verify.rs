//! The invariant suite behind `verify`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;
use sphere_hecke::afe::v::VEvaluator;
use sphere_hecke::afe::{l_central, lipschitz_count, q_infty, s_r_count, u_weight, w, w_b, LatticeRegion};
use sphere_hecke::geodesics::{build_family, discriminants_in, is_squarefree, n_of, orbits, verify_gauss};
use sphere_hecke::harmonics::{assoc_legendre, y_zero, QuadratureGrid, SphericalFunction};
use sphere_hecke::hecke::{HeckeSpace, SumMode};
use sphere_hecke::hurwitz::{enumerate_norm, sigma};
use sphere_hecke::restriction::{fourier_line, norm_direct, norm_parseval, sweep, NORM_FLOOR};
use sphere_hecke::theta::{cm_form, lift, lift_hecke};

use crate::commands::Report;
use crate::config::{RunConfig, Tolerances};
use crate::output::Table;

struct Check {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Check {
    Check { pass, detail }
}

fn hurwitz_counts(_: &Tolerances) -> Check {
    let mut bad = Vec::new();
    for (n, want) in [(1u64, 24usize), (3, 96)] {
        if enumerate_norm(n).len() != want {
            bad.push(n);
        }
    }
    for n in (1..=50u64).step_by(2) {
        if enumerate_norm(n).len() as u64 != 24 * sigma(n) {
            bad.push(n);
        }
    }
    check(bad.is_empty(), format!("|O(n)| = 24σ(n) for odd n ≤ 50; failures {bad:?}"))
}

fn gauss(_: &Tolerances) -> Check {
    let mut bad = Vec::new();
    let mut count = 0;
    for d in discriminants_in(4, 200) {
        let n = n_of(d);
        if !is_squarefree(n) || n.rem_euclid(8) == 7 {
            continue;
        }
        count += 1;
        if !matches!(verify_gauss(d), Ok(r) if r.holds == Some(true)) {
            bad.push(d);
        }
    }
    check(bad.is_empty(), format!("{count} discriminants; failures {bad:?}"))
}

fn orbit_counts(_: &Tolerances) -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for d in [-8, -20, -24, -40, -43] {
        match (build_family(d), orbits(d)) {
            (Ok(f), Ok(o)) => {
                ok &= o.len() as u32 == f.c_d * f.h_d;
                parts.push(format!("{d}:{}", o.len()));
            }
            _ => {
                ok = false;
                parts.push(format!("{d}:error"));
            }
        }
    }
    check(ok, parts.join(" "))
}

fn spaces(lmax: usize) -> Vec<HeckeSpace> {
    (0..=lmax).into_par_iter().map(HeckeSpace::new).collect()
}

fn hecke_algebra(t: &Tolerances) -> Check {
    let res: Vec<sphere_hecke::Result<(f64, f64, f64)>> = spaces(20)
        .par_iter()
        .filter(|s| s.dim() > 0)
        .map(|s| {
            let m = |n| s.matrix(n, SumMode::Full).map(|h| h.entries);
            let (t1, t3, t5, t7, t9, t15) = (m(1)?, m(3)?, m(5)?, m(7)?, m(9)?, m(15)?);
            let rec = (&t3 * &t5 - &t15).norm().max((&t3 * &t3 - &t9 - &t1 * 3.0).norm());
            let mut com: f64 = 0.0;
            for (a, b) in [(&t3, &t5), (&t3, &t7), (&t5, &t7), (&t3, &t15)] {
                com = com.max((a * b - b * a).norm());
            }
            let mut sym: f64 = 0.0;
            for a in [&t3, &t5, &t7, &t9, &t15] {
                sym = sym.max((a - a.transpose()).norm());
            }
            Ok((rec, com, sym))
        })
        .collect();
    let (mut rec, mut com, mut sym) = (0f64, 0f64, 0f64);
    for r in res {
        match r {
            Ok((a, b, c)) => {
                rec = rec.max(a);
                com = com.max(b);
                sym = sym.max(c);
            }
            Err(e) => return check(false, e.to_string()),
        }
    }
    let ok = rec < t.algebra && com < t.algebra && sym < t.symmetry;
    check(ok, format!("recurrences {rec:.1e}, commutators {com:.1e}, symmetry {sym:.1e}"))
}

fn dimension_oracle(ell: usize) -> usize {
    let c3 = [1i64, 0, -1][ell % 3];
    let c2 = if ell.is_multiple_of(2) { 1 } else { -1 };
    ((2 * ell as i64 + 1 + 8 * c3 + 3 * c2) / 12) as usize
}

fn dimensions(_: &Tolerances) -> Check {
    let bad: Vec<usize> = (0..=30).filter(|&l| HeckeSpace::new(l).dim() != dimension_oracle(l)).collect();
    check(bad.is_empty(), format!("ℓ ≤ 30; mismatches at {bad:?}"))
}

fn deligne(t: &Tolerances) -> Check {
    let mut worst = f64::NEG_INFINITY;
    let mut count = 0;
    for s in spaces(20).iter().filter(|s| s.ell() > 0) {
        let eig = match s.joint_eigenbasis(SumMode::Full, &[3, 5, 7, 11, 13]) {
            Ok(e) => e,
            Err(e) => return check(false, e.to_string()),
        };
        for e in eig {
            count += 1;
            for (p, l) in e.eigenvalues.iter().filter(|(p, _)| *p > 1) {
                worst = worst.max(l.abs() - 2.0 * (*p as f64).sqrt());
            }
        }
    }
    check(worst <= t.deligne, format!("{count} eigenfunctions with 1 ≤ ℓ ≤ 20; max |λ(p)| − 2√p = {worst:.3}"))
}

fn theta_lift(t: &Tolerances) -> Check {
    let odd = [1u64, 3, 5, 7, 9, 11, 13, 15];
    let (mut rel, mut a1, mut mult) = (0f64, 0f64, 0f64);
    for ell in [3usize, 4, 5, 6] {
        let eig = match HeckeSpace::new(ell).joint_eigenbasis(SumMode::Full, &odd) {
            Ok(e) => e,
            Err(e) => return check(false, e.to_string()),
        };
        for e in eig {
            let q = match lift(&e.function(), 15) {
                Ok(q) => q,
                Err(e) => return check(false, e.to_string()),
            };
            let a = |n: usize| q.coeff(n).unwrap_or(f64::NAN);
            for n in odd {
                let s = (n as f64).powi(ell as i32);
                rel = rel.max((a(n as usize) - e.lambda(n).unwrap_or(f64::NAN) * s).abs() / s);
            }
            a1 = a1.max((a(1) - 1.0).abs());
            mult = mult.max((a(3) * a(5) - a(15)).abs() / a(15).abs().max(1.0));
        }
    }
    check(
        rel < t.lift && a1 < 1e-8 && mult < t.lift,
        format!("coefficients {rel:.1e}, a_1 {a1:.1e}, a_3a_5 − a_15 {mult:.1e}"),
    )
}

fn eigenfunctions(lmax: usize) -> sphere_hecke::Result<Vec<SphericalFunction>> {
    let per: Vec<sphere_hecke::Result<Vec<SphericalFunction>>> = spaces(lmax)
        .par_iter()
        .map(|s| Ok(s.joint_eigenbasis(SumMode::Cosets, &[3])?.iter().map(|e| e.function()).collect()))
        .collect();
    let mut out = Vec::new();
    for p in per {
        out.extend(p?);
    }
    Ok(out)
}

fn vanishing(t: &Tolerances, eig: &[SphericalFunction]) -> Check {
    let mut worst: f64 = 0.0;
    for d in [-8, -20] {
        let fam = match build_family(d) {
            Ok(f) => f,
            Err(e) => return check(false, e.to_string()),
        };
        for f in eig {
            let l = f.degree as i64;
            for g in &fam.geodesics {
                let line = fourier_line(f, g, f.degree + 4);
                for n in -(l + 4)..=(l + 4) {
                    if n.abs() > l || (n - l).rem_euclid(2) == 1 {
                        worst = worst.max(line.get(n).norm());
                    }
                }
            }
        }
    }
    check(worst < t.vanish, format!("{} eigenfunctions; max |c_n| off the support {worst:.1e}", eig.len()))
}

fn routes(t: &Tolerances, eig: &[SphericalFunction]) -> Check {
    let mut worst: f64 = 0.0;
    for d in [-8, -20, -24] {
        let fam = match build_family(d) {
            Ok(f) => f,
            Err(e) => return check(false, e.to_string()),
        };
        for f in eig {
            let a = norm_direct(f, &fam, 0).total;
            let b = norm_parseval(f, &fam, 0).total;
            worst = worst.max((a - b).abs() / a.max(NORM_FLOOR));
        }
    }
    check(worst < t.route, format!("max relative gap {worst:.1e}"))
}

fn y_closed_form(t: &Tolerances) -> Check {
    let (mut rel, mut parity, mut lo, mut hi) = (0f64, true, f64::INFINITY, 0f64);
    for ell in 0..=60usize {
        let grid = QuadratureGrid::new(ell);
        for n in 0..=ell {
            let Ok(y) = y_zero(ell, n) else {
                return check(false, format!("y_zero({ell}, {n}) failed"));
            };
            if (ell + n) % 2 == 1 {
                parity &= y == 0.0;
                continue;
            }
            let p = |z: f64| assoc_legendre(ell, n, z).unwrap_or(f64::NAN);
            let want = p(0.0) / grid.integrate(|q| p(q[2]).powi(2)).sqrt();
            rel = rel.max((y - want).abs() / want.abs());
            if ell > 0 {
                let (l, m) = (ell as f64, n as f64);
                let r = y.abs() / (l.sqrt() * ((1.0 + l + m) * (1.0 + l - m)).powf(-0.25));
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
    }
    check(
        rel < t.y && parity && lo >= 0.2 && hi <= 5.0,
        format!("relative {rel:.1e}, parity zeros exact {parity}, window [{lo:.3}, {hi:.3}]"),
    )
}

fn growth(t: &Tolerances) -> Check {
    match sweep(-8, 3, 60) {
        Ok(s) => match s.slope {
            Some(k) => check(k <= t.slope, format!("{} rows, slope {k:.4}", s.rows.len())),
            None => check(false, "no slope".into()),
        },
        Err(e) => check(false, e.to_string()),
    }
}

fn afe(t: &Tolerances) -> Check {
    let mut ca: f64 = 0.0;
    for ell in [3usize, 6, 10] {
        let ev = VEvaluator::new(ell);
        for x in 0..=ell {
            let q = q_infty(ell, x as u32).sqrt();
            for k in -30..=30 {
                let y = 10f64.powf(k as f64 / 5.0);
                match ev.eval(y, x as f64) {
                    Ok(v) => ca = ca.max(v.abs() * (1.0 + y / q).powi(2)),
                    Err(e) => return check(false, e.to_string()),
                }
            }
        }
    }
    let run = || -> sphere_hecke::Result<Vec<(u32, f64, f64)>> {
        let psi = HeckeSpace::new(3).joint_eigenbasis(SumMode::Full, &[3])?[0].function();
        let mut out = Vec::new();
        for n in [1u32, 3] {
            let mut v = [0.0; 2];
            for (i, m) in [512usize, 1024].into_iter().enumerate() {
                v[i] = l_central(&lift_hecke(&psi, m)?, &cm_form(-8, n, m)?.qexp, -8, 1, m)?.value;
            }
            out.push((n, v[0], v[1]));
        }
        Ok(out)
    };
    let vals = match run() {
        Ok(v) => v,
        Err(e) => return check(false, e.to_string()),
    };
    let mut ok = ca <= 1.01;
    let mut parts = vec![format!("C_A {ca:.5}")];
    for (n, a, b) in vals {
        let drift = (a - b).abs() / b.abs();
        ok &= a >= -t.afe && b >= -t.afe && drift < t.afe;
        parts.push(format!("L(n={n}) {b:.6}, doubling drift {drift:.1e}"));
    }
    check(ok, parts.join("; "))
}

fn partition(t: &Tolerances) -> Check {
    let mut worst: f64 = 0.0;
    for k in 0..10_000 {
        let x = 10f64.powf(6.0 * k as f64 / 10_000.0);
        let s: f64 = (0..25).map(|j| w(x / 2f64.powi(j))).sum();
        worst = worst.max((s - 1.0).abs());
    }
    let mut nonzero = 0;
    for ell in 1..=120usize {
        let b0 = (0..40).find(|&b| 2f64.powi(b) >= 3.0 * ell as f64).unwrap_or(40);
        for b in b0..b0 + 3 {
            for n in -(4 * ell as i64)..=(ell as i64 + 1) {
                if w_b(b as u32, ell, n as f64) * u_weight(ell, n as f64) != 0.0 {
                    nonzero += 1;
                }
            }
        }
    }
    check(worst < t.partition && nonzero == 0, format!("max |Σ − 1| {worst:.1e}; nonzero W_b·U {nonzero}"))
}

fn lattice(_: &Tolerances) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cb: f64 = 0.0;
    let mut done = 0;
    while done < 100 {
        let v1 = [rng.gen_range(-12.0..12.0), rng.gen_range(-12.0..12.0)];
        let v2 = [rng.gen_range(-12.0..12.0), rng.gen_range(-12.0..12.0)];
        if let Ok(r) = LatticeRegion::new([1.0, 0.0], [0.0, 5f64.sqrt()], v1, v2) {
            let (c, b) = lipschitz_count(&r);
            cb = cb.max(c as f64 / b);
            done += 1;
        }
    }
    let (mut cd, mut contained) = (0f64, true);
    for d in [-3i64, -4, -8, -11, -19, -43] {
        for _ in 0..100 {
            let a = 10f64.powf(rng.gen_range(0.0..4.0));
            let r = rng.gen_range(0.001..1.0);
            match s_r_count(a, r, d) {
                Ok(s) => {
                    cd = cd.max(s.count as f64 / s.bound);
                    contained &= s.contained != Some(false);
                }
                Err(e) => return check(false, e.to_string()),
            }
        }
    }
    check(cb <= 4.0 && cd <= 8.0 && contained, format!("C_B {cb:.3} (≤ 4), C_D {cd:.3} (≤ 8), containment {contained}"))
}

const QUICK: [usize; 6] = [1, 2, 3, 5, 13, 14];
const EXPLORATORY: usize = 11;

pub fn run(cfg: &RunConfig) -> Report {
    let mut r = Report {
        records: Vec::new(),
        table: Table::new(&["id", "name", "exploratory", "pass", "detail"]),
        summary: Vec::new(),
        failures: Vec::new(),
        exploratory_failures: Vec::new(),
        plot: None,
    };
    let t = &cfg.tol;
    let mut eig: Option<sphere_hecke::Result<Vec<SphericalFunction>>> = None;
    let names = [
        "Hurwitz counts",
        "Gauss three-squares",
        "orbit counts",
        "Hecke algebra",
        "invariant dimensions",
        "Deligne bound",
        "theta lift",
        "Fourier vanishing",
        "route equivalence",
        "Y closed form",
        "growth probe",
        "AFE",
        "partition of unity",
        "lattice counting",
    ];
    for (i, name) in names.iter().enumerate() {
        let id = i + 1;
        if cfg.quick && !QUICK.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let c = match id {
            1 => hurwitz_counts(t),
            2 => gauss(t),
            3 => orbit_counts(t),
            4 => hecke_algebra(t),
            5 => dimensions(t),
            6 => deligne(t),
            7 => theta_lift(t),
            8 | 9 => match eig.get_or_insert_with(|| eigenfunctions(40)) {
                Ok(e) if id == 8 => vanishing(t, e),
                Ok(e) => routes(t, e),
                Err(e) => check(false, e.to_string()),
            },
            10 => y_closed_form(t),
            11 => growth(t),
            12 => afe(t),
            13 => partition(t),
            _ => lattice(t),
        };
        let exploratory = id == EXPLORATORY;
        let word = match (c.pass, exploratory) {
            (true, _) => "PASS",
            (false, false) => "FAIL",
            (false, true) => "INVESTIGATE",
        };
        r.summary.push(format!("{word} [{id:>2}] {name}: {} ({:.1}s)", c.detail, start.elapsed().as_secs_f64()));
        if !c.pass {
            let msg = format!("[{id}] {name}: {}", c.detail);
            if exploratory {
                r.exploratory_failures.push(msg);
            } else {
                r.failures.push(msg);
            }
        }
        r.table.push(vec![
            id.to_string(),
            name.to_string(),
            exploratory.to_string(),
            c.pass.to_string(),
            c.detail.clone(),
        ]);
        r.records.push(json!({"id": id, "name": name, "exploratory": exploratory, "pass": c.pass, "detail": c.detail}));
    }
    r
}
