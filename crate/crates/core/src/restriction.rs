//! Fourier coefficients of eigenfunctions along geodesics and restriction norms.
//!
//! The line measure is arc length `dθ` on `[0, 2π)`. For a family `C_D` the
//! squared norm is `Σ_γ c_γ ∫₀^{2π} |ψ(κ_γ⁻¹·e^{iθ}k)|² dθ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesics::{build_family, Geodesic, GeodesicFamily};
use crate::harmonics::{pairwise_sum, y_zero, HarmonicEvaluator, SphericalFunction};
use crate::hecke::{HeckeSpace, SumMode};
use crate::hurwitz::{apply, unit_rotations};

/// Coefficients `c_n = ∫₀^{2π} ψ(γ(θ)) e^{−inθ} dθ` for `|n| ≤ n_max`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FourierLine {
    pub orbit: usize,
    pub n_max: usize,
    pub coeffs: Vec<Complex64>,
}

impl FourierLine {
    pub fn get(&self, n: i64) -> Complex64 {
        if n.unsigned_abs() as usize > self.n_max {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[(n + self.n_max as i64) as usize]
    }
}

/// Samples `ψ` at `samples` equispaced angles along `γ`.
pub fn sample_line(psi: &SphericalFunction, geo: &Geodesic, samples: usize) -> Vec<f64> {
    let ev = HarmonicEvaluator::new(psi.degree);
    let m = geo.inverse_matrix();
    let mut buf = vec![0.0; ev.dim()];
    (0..samples)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / samples as f64;
            let (s, c) = t.sin_cos();
            ev.eval_all(apply(&m, [0.0, -s, c]), &mut buf);
            buf.iter().zip(&psi.coeffs).map(|(a, b)| a * b).sum()
        })
        .collect()
}

/// Fourier line with `2·max(ℓ, n_max) + 2` samples, exact for a trigonometric
/// polynomial of degree `ℓ`.
pub fn fourier_line(psi: &SphericalFunction, geo: &Geodesic, n_max: usize) -> FourierLine {
    fourier_line_sampled(psi, geo, n_max, 2 * psi.degree.max(n_max) + 2)
}

pub fn fourier_line_sampled(psi: &SphericalFunction, geo: &Geodesic, n_max: usize, samples: usize) -> FourierLine {
    let f = sample_line(psi, geo, samples);
    let h = 2.0 * PI / samples as f64;
    let coeffs = (-(n_max as i64)..=n_max as i64)
        .map(|n| {
            let (re, im): (Vec<f64>, Vec<f64>) = f
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    let a = -(n as f64) * h * k as f64;
                    (v * a.cos(), v * a.sin())
                })
                .unzip();
            Complex64::new(h * pairwise_sum(&re), h * pairwise_sum(&im))
        })
        .collect();
    FourierLine { orbit: geo.orbit, n_max, coeffs }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RestrictionReport {
    #[serde(rename = "D")]
    pub d: i64,
    pub ell: usize,
    pub eig_id: usize,
    /// `c_γ ∫_γ |ψ|²` per geodesic.
    pub per_geodesic: Vec<f64>,
    pub total: f64,
    /// `total / ℓ`, against the convexity scale.
    pub ratio: f64,
    pub warnings: Vec<String>,
}

/// `max |ψ(u·x) − ψ(x)|` over the unit rotations and a fixed set of points.
pub fn invariance_residual(psi: &SphericalFunction) -> f64 {
    let ev = HarmonicEvaluator::new(psi.degree);
    let pts = [[0.36, 0.48, 0.8], [-0.6, 0.0, 0.8], [0.2672612419124244, 0.5345224838248488, -0.8017837257372732]];
    let rots = unit_rotations();
    let mut worst: f64 = 0.0;
    for p in pts {
        let base = ev.eval(&psi.coeffs, p);
        for m in &rots {
            let mf = m.map(|r| r.map(|e| e as f64));
            worst = worst.max((ev.eval(&psi.coeffs, apply(&mf, p)) - base).abs());
        }
    }
    worst
}

fn report(d: i64, psi: &SphericalFunction, eig_id: usize, per_geodesic: Vec<f64>) -> RestrictionReport {
    let mut warnings = Vec::new();
    let inv = invariance_residual(psi);
    if inv > 1e-9 {
        warnings.push(format!("eigenfunction is not unit-invariant (residual {inv:.3e})"));
    }
    let total = pairwise_sum(&per_geodesic);
    let ratio = if psi.degree > 0 { total / psi.degree as f64 } else { f64::NAN };
    RestrictionReport { d, ell: psi.degree, eig_id, per_geodesic, total, ratio, warnings }
}

/// `Σ_γ c_γ ∫₀^{2π} |ψ|² dθ` by equispaced quadrature.
pub fn norm_direct(psi: &SphericalFunction, family: &GeodesicFamily, eig_id: usize) -> RestrictionReport {
    let samples = 2 * psi.degree + 2;
    let h = 2.0 * PI / samples as f64;
    let per = family
        .geodesics
        .iter()
        .map(|g| {
            let sq: Vec<f64> = sample_line(psi, g, samples).iter().map(|v| v * v).collect();
            g.length_factor * h * pairwise_sum(&sq)
        })
        .collect();
    report(family.d, psi, eig_id, per)
}

/// `Σ_γ c_γ (1/2π) Σ_{|n| ≤ ℓ} |c_n(γ)|²`.
pub fn norm_parseval(psi: &SphericalFunction, family: &GeodesicFamily, eig_id: usize) -> RestrictionReport {
    let per = family
        .geodesics
        .iter()
        .map(|g| {
            let line = fourier_line(psi, g, psi.degree);
            let sq: Vec<f64> = line.coeffs.iter().map(|c| c.norm_sqr()).collect();
            g.length_factor * pairwise_sum(&sq) / (2.0 * PI)
        })
        .collect();
    report(family.d, psi, eig_id, per)
}

/// `(Σ_χ |Σ_γ χ(γ) c_n(γ)|², k·Σ_γ |c_n(γ)|²)` over the `k ∈ {1, 2, 4}` sign
/// characters of `(Z/2)^{log₂ k}`, with the geodesics in their fixed order.
pub fn character_parseval(lines: &[FourierLine], n: i64) -> Result<(f64, f64)> {
    let k = lines.len();
    if !matches!(k, 1 | 2 | 4) {
        return Err(Error::Domain(format!("sign characters need 1, 2 or 4 geodesics, got {k}")));
    }
    let mut lhs = 0.0;
    for chi in 0..k {
        let mut s = Complex64::new(0.0, 0.0);
        for (g, line) in lines.iter().enumerate() {
            let sign = if (chi & g).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            s += line.get(n) * sign;
        }
        lhs += s.norm_sqr();
    }
    let rhs = k as f64 * lines.iter().map(|l| l.get(n).norm_sqr()).sum::<f64>();
    Ok((lhs, rhs))
}

/// `G(n) = Y_ℓ^{|n|}(0)² / (2ℓ+1)`, zero for `|n| > ℓ`.
pub fn weight_g(ell: usize, n: i64) -> f64 {
    let a = n.unsigned_abs() as usize;
    if a > ell {
        return 0.0;
    }
    let y = y_zero(ell, a).expect("order within degree");
    y * y / (2 * ell + 1) as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "D")]
    pub d: i64,
    pub ell: usize,
    pub eig_id: usize,
    pub lambda3: f64,
    pub norm_sq: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// Least-squares slope of `log norm²` against `log ℓ`.
    pub slope: Option<f64>,
}

/// Rows with `norm²` at or below this count as vanishing and are left out of the fit.
pub const NORM_FLOOR: f64 = 1e-12;

/// Restriction norms of every joint eigenfunction for `ℓ` in `[lmin, lmax]`.
pub fn sweep(d: i64, lmin: usize, lmax: usize) -> Result<SweepTable> {
    let family = build_family(d)?;
    let per_ell: Vec<Result<Vec<SweepRow>>> = (lmin..=lmax)
        .into_par_iter()
        .map(|ell| {
            let space = HeckeSpace::new(ell);
            let eig = space.joint_eigenbasis(SumMode::Cosets, &[3])?;
            Ok(eig
                .iter()
                .enumerate()
                .map(|(id, e)| {
                    let r = norm_direct(&e.function(), &family, id);
                    SweepRow {
                        d,
                        ell,
                        eig_id: id,
                        lambda3: e.lambda(3).unwrap_or(f64::NAN),
                        norm_sq: r.total,
                        ratio: r.ratio,
                    }
                })
                .collect())
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_ell {
        rows.extend(r?);
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.norm_sq > NORM_FLOOR && r.ell > 0)
        .map(|r| ((r.ell as f64).ln(), r.norm_sq.ln()))
        .collect();
    Ok(SweepTable { slope: ls_slope(&pts), rows })
}

/// Least-squares slope; `None` with fewer than two distinct abscissae.
pub fn ls_slope(pts: &[(f64, f64)]) -> Option<f64> {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}
