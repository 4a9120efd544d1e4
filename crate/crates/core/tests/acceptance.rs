//! One line per acceptance criterion. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sphere_hecke::afe::v::VEvaluator;
use sphere_hecke::afe::*;
use sphere_hecke::geodesics::*;
use sphere_hecke::harmonics::{assoc_legendre, y_zero, QuadratureGrid, SphericalFunction};
use sphere_hecke::hecke::{HeckeSpace, SumMode};
use sphere_hecke::hurwitz::{enumerate_norm, sigma};
use sphere_hecke::restriction::{fourier_line, norm_direct, norm_parseval, sweep};
use sphere_hecke::theta::{cm_form, lift, lift_hecke};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(t: Instant, limit: Duration) -> (bool, String) {
    let e = t.elapsed();
    (e < limit, format!("{:.1}s of {}s", e.as_secs_f64(), limit.as_secs()))
}

fn hurwitz_counts() -> Outcome {
    let t = Instant::now();
    let mut ok = enumerate_norm(1).len() == 24 && enumerate_norm(3).len() == 96;
    for n in (1..=50u64).step_by(2) {
        ok &= enumerate_norm(n).len() as u64 == 24 * sigma(n);
    }
    let (fast, time) = within(t, Duration::from_secs(5));
    outcome(ok && fast, format!("odd n ≤ 50, {time}"))
}

fn gauss() -> Outcome {
    let t = Instant::now();
    let mut checked = 0;
    let mut bad = Vec::new();
    for d in discriminants_in(4, 200) {
        let n = n_of(d);
        if !is_squarefree(n) || n.rem_euclid(8) == 7 {
            continue;
        }
        checked += 1;
        match verify_gauss(d) {
            Ok(r) if r.holds == Some(true) => {}
            _ => bad.push(d),
        }
    }
    let (fast, time) = within(t, Duration::from_secs(10));
    outcome(bad.is_empty() && fast, format!("{checked} discriminants, failures {bad:?}, {time}"))
}

fn orbit_counts() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for d in [-8, -20, -24, -40, -43] {
        let fam = build_family(d).unwrap();
        let got = orbits(d).unwrap().len();
        ok &= got == (fam.c_d * fam.h_d) as usize;
        parts.push(format!("{d}:{got}"));
    }
    outcome(ok, parts.join(" "))
}

fn spaces(lmax: usize) -> Vec<HeckeSpace> {
    (0..=lmax).into_par_iter().map(HeckeSpace::new).collect()
}

fn hecke_algebra() -> Outcome {
    let t = Instant::now();
    let worst: Vec<[f64; 4]> = spaces(20)
        .par_iter()
        .filter(|s| s.dim() > 0)
        .map(|s| {
            let m = |n| s.matrix(n, SumMode::Full).unwrap().entries;
            let (t1, t3, t5, t7, t9, t15) = (m(1), m(3), m(5), m(7), m(9), m(15));
            let rec = (&t3 * &t5 - &t15).norm().max((&t3 * &t3 - &t9 - &t1 * 3.0).norm());
            let com = [(&t3, &t5), (&t3, &t7), (&t5, &t7)]
                .iter()
                .map(|(a, b)| (*a * *b - *b * *a).norm())
                .fold(0.0, f64::max);
            let sym = [&t3, &t5, &t7, &t9, &t15].iter().map(|a| (*a - a.transpose()).norm()).fold(0.0, f64::max);
            [rec, com, sym, 0.0]
        })
        .collect();
    let max = |i: usize| worst.iter().map(|w| w[i]).fold(0.0, f64::max);
    let (fast, time) = within(t, Duration::from_secs(120));
    let ok = max(0) < 1e-8 && max(1) < 1e-8 && max(2) < 1e-10 && fast;
    outcome(ok, format!("recurrence {:.1e}, commutator {:.1e}, symmetry {:.1e}, {time}", max(0), max(1), max(2)))
}

fn dimensions() -> Outcome {
    let mut ok = true;
    let mut seq = Vec::new();
    for ell in 0..=30usize {
        let c3 = [1i64, 0, -1][ell % 3];
        let c2 = if ell % 2 == 0 { 1 } else { -1 };
        let oracle = ((2 * ell as i64 + 1 + 8 * c3 + 3 * c2) / 12) as usize;
        let got = HeckeSpace::new(ell).dim();
        ok &= got == oracle;
        seq.push(got.to_string());
    }
    outcome(ok, format!("ℓ = 0..30: {}", seq.join(",")))
}

fn deligne() -> Outcome {
    let (mut worst, mut ratio): (f64, f64) = (f64::NEG_INFINITY, 0.0);
    let mut count = 0;
    for s in spaces(20).iter().filter(|s| s.ell() > 0) {
        for e in s.joint_eigenbasis(SumMode::Full, &[3, 5, 7, 11, 13]).unwrap() {
            count += 1;
            for (p, l) in &e.eigenvalues {
                let b = 2.0 * (*p as f64).sqrt();
                worst = worst.max(l.abs() - b);
                ratio = ratio.max(l.abs() / b);
            }
        }
    }
    outcome(worst <= 1e-6, format!("{count} nonconstant eigenfunctions, max |λ(p)|/2√p = {ratio:.4}"))
}

fn theta_lift() -> Outcome {
    let odd = [1u64, 3, 5, 7, 9, 11, 13, 15];
    let (mut rel, mut a1, mut mult): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut count = 0;
    for ell in [3usize, 4, 5, 6] {
        for e in HeckeSpace::new(ell).joint_eigenbasis(SumMode::Full, &odd).unwrap() {
            count += 1;
            let f = lift(&e.function(), 15).unwrap();
            for n in odd {
                let s = (n as f64).powi(ell as i32);
                rel = rel.max((f.coeff(n as usize).unwrap() - e.lambda(n).unwrap() * s).abs() / s);
            }
            a1 = a1.max((f.coeff(1).unwrap() - 1.0).abs());
            let (a3, a5, a15) = (f.coeff(3).unwrap(), f.coeff(5).unwrap(), f.coeff(15).unwrap());
            mult = mult.max((a3 * a5 - a15).abs() / a15.abs().max(1.0));
        }
    }
    outcome(
        rel < 1e-6 && a1 < 1e-8 && mult < 1e-6,
        format!("{count} lifts, |a_n − λn^ℓ|/n^ℓ {rel:.1e}, |a_1 − 1| {a1:.1e}, a3a5 vs a15 {mult:.1e}"),
    )
}

fn eigenfunctions(lmax: usize) -> Vec<SphericalFunction> {
    spaces(lmax)
        .par_iter()
        .flat_map(|s| s.joint_eigenbasis(SumMode::Cosets, &[3]).unwrap().into_par_iter().map(|e| e.function()))
        .collect()
}

fn vanishing(eig: &[SphericalFunction]) -> Outcome {
    let mut worst: f64 = 0.0;
    for d in [-8, -20] {
        let fam = build_family(d).unwrap();
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
    outcome(worst < 1e-9, format!("{} eigenfunctions, ℓ ≤ 40, max |c_n| {worst:.1e}", eig.len()))
}

fn routes(eig: &[SphericalFunction]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut zero = 0;
    for d in [-8, -20, -24] {
        let fam = build_family(d).unwrap();
        for f in eig {
            let a = norm_direct(f, &fam, 0).total;
            let b = norm_parseval(f, &fam, 0).total;
            if a > 1e-12 {
                worst = worst.max((a - b).abs() / a);
            } else {
                zero += 1;
                worst = worst.max((a - b).abs() / 1e-12);
            }
        }
    }
    outcome(worst < 1e-8, format!("max relative gap {worst:.1e} ({zero} vanishing norms compared absolutely)"))
}

fn y_closed_form() -> Outcome {
    let (mut rel, mut parity_ok, mut lo, mut hi) = (0f64, true, f64::INFINITY, 0f64);
    for ell in 0..=60usize {
        let grid = QuadratureGrid::new(ell);
        for n in 0..=ell {
            let y = y_zero(ell, n).unwrap();
            if (ell + n) % 2 == 1 {
                parity_ok &= y == 0.0;
                continue;
            }
            let norm2 = grid.integrate(|p| assoc_legendre(ell, n, p[2]).unwrap().powi(2));
            let want = assoc_legendre(ell, n, 0.0).unwrap() / norm2.sqrt();
            rel = rel.max((y - want).abs() / want.abs());
            if ell >= 1 {
                let (l, nf) = (ell as f64, n as f64);
                let r = y.abs() / (l.sqrt() * (1.0 + l + nf).powf(-0.25) * (1.0 + l - nf).powf(-0.25));
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
    }
    outcome(
        rel < 1e-10 && parity_ok && lo >= 0.2 && hi <= 5.0,
        format!("relative {rel:.1e}, parity zeros exact {parity_ok}, window [{lo:.3}, {hi:.3}]"),
    )
}

fn growth() -> Outcome {
    let t = Instant::now();
    let table = sweep(-8, 3, 60).unwrap();
    let (fast, time) = within(t, Duration::from_secs(900));
    match table.slope {
        Some(s) => outcome(s <= 0.5 && fast, format!("{} rows, slope {s:.4}, {time}", table.rows.len())),
        None => outcome(false, "no slope"),
    }
}

fn afe() -> Outcome {
    let mut ca: f64 = 0.0;
    for ell in [3usize, 6, 10] {
        let ev = VEvaluator::new(ell);
        for x in 0..=ell {
            let q = q_infty(ell, x as u32).sqrt();
            for k in -30..=30 {
                let y = 10f64.powf(k as f64 / 5.0);
                ca = ca.max(ev.eval(y, x as f64).unwrap().abs() * (1.0 + y / q).powi(2));
            }
        }
    }
    let psi = HeckeSpace::new(3).joint_eigenbasis(SumMode::Full, &[3]).unwrap()[0].function();
    let mut ok = ca <= 1.01;
    let mut parts = vec![format!("C_A {ca:.5}")];
    for n in [1u32, 3] {
        let v: Vec<f64> = [512usize, 1024]
            .iter()
            .map(|&m| {
                l_central(&lift_hecke(&psi, m).unwrap(), &cm_form(-8, n, m).unwrap().qexp, -8, 1, m).unwrap().value
            })
            .collect();
        let drift = (v[0] - v[1]).abs() / v[1].abs();
        ok &= v[0] >= -1e-3 && v[1] >= -1e-3 && drift < 1e-3;
        parts.push(format!("L(n={n}) {:.6} drift {drift:.1e}", v[1]));
    }
    outcome(ok, parts.join(", "))
}

fn partition() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let x = 10f64.powf(rng.gen_range(0.0..6.0));
        let s: f64 = (0..25).map(|k| w(x / 2f64.powi(k))).sum();
        worst = worst.max((s - 1.0).abs());
    }
    let mut nonzero = 0;
    for ell in 1..=120usize {
        let b0 = (0..).find(|&b| 2f64.powi(b) >= 3.0 * ell as f64).unwrap();
        for b in b0..b0 + 3 {
            for n in -(4 * ell as i64)..=(ell as i64 + 1) {
                if w_b(b as u32, ell, n as f64) * u_weight(ell, n as f64) != 0.0 {
                    nonzero += 1;
                }
            }
        }
    }
    outcome(worst < 1e-12 && nonzero == 0, format!("max |Σ − 1| {worst:.1e}, nonzero W_b·U {nonzero}"))
}

fn lattice() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let a2 = [0.0, 5f64.sqrt()];
    let mut cb: f64 = 0.0;
    let mut regions = 0;
    while regions < 100 {
        let v1 = [rng.gen_range(-12.0..12.0), rng.gen_range(-12.0..12.0)];
        let v2 = [rng.gen_range(-12.0..12.0), rng.gen_range(-12.0..12.0)];
        if let Ok(r) = LatticeRegion::new([1.0, 0.0], a2, v1, v2) {
            let (c, b) = lipschitz_count(&r);
            cb = cb.max(c as f64 / b);
            regions += 1;
        }
    }
    let mut cd: f64 = 0.0;
    let mut contained = true;
    for d in [-3i64, -4, -8, -11, -19, -43] {
        for _ in 0..100 {
            let a = 10f64.powf(rng.gen_range(0.0..4.0));
            let r = rng.gen_range(0.001..1.0);
            let s = s_r_count(a, r, d).unwrap();
            cd = cd.max(s.count as f64 / s.bound);
            contained &= s.contained != Some(false);
        }
    }
    outcome(
        cb <= 4.0 && cd <= 8.0 && contained,
        format!("C_B {cb:.3} (≤ 4), C_D {cd:.3} (≤ 8), S_R* ⊆ P_R {contained}"),
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(usize, &str, Outcome, f64)> = Vec::new();
    let mut run = |k: usize, name: &'static str, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let o = f();
        let s = t.elapsed().as_secs_f64();
        println!("{} [{k:>2}] {name}: {} ({s:.1}s)", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((k, name, o, s));
    };
    run(1, "Hurwitz counts", &hurwitz_counts);
    run(2, "Gauss three-squares", &gauss);
    run(3, "orbit counts", &orbit_counts);
    run(4, "Hecke algebra", &hecke_algebra);
    run(5, "invariant dimensions", &dimensions);
    run(6, "Deligne bound", &deligne);
    run(7, "theta lift", &theta_lift);
    let eig = eigenfunctions(40);
    run(8, "Fourier vanishing", &|| vanishing(&eig));
    run(9, "route equivalence", &|| routes(&eig));
    run(10, "Y closed form", &y_closed_form);
    run(11, "growth probe", &growth);
    run(12, "AFE", &afe);
    run(13, "partition of unity", &partition);
    run(14, "lattice counting", &lattice);
    let failed: Vec<usize> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!("acceptance: {} of {} criteria pass", results.len() - failed.len(), results.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
