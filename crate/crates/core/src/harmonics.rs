//! Legendre functions, the real basis of H_ℓ, product quadrature on S², and
//! the closed form for Y_ℓ^n(0).
//!
//! Points are written `(x, y, z) = (sinφ cosθ, sinφ sinθ, cosφ)`. The basis of
//! H_ℓ is `P_ℓ(cosφ)` followed by `P_ℓ^m(cosφ) cos mθ`, `P_ℓ^m(cosφ) sin mθ`
//! for `m = 1..ℓ`, with the Condon–Shortley sign in `P_ℓ^m`. Coefficient
//! vectors of [`SphericalFunction`] refer to the L²-normalized versions of these
//! functions, in the same order.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Legendre polynomial `P_n(x)` by the three-term recurrence.
pub fn legendre(n: usize, x: f64) -> Result<f64> {
    assoc_legendre(n, 0, x)
}

/// Associated Legendre function `P_n^m(x) = (−1)^m (1−x²)^{m/2} dᵐ/dxᵐ P_n(x)`.
pub fn assoc_legendre(n: usize, m: usize, x: f64) -> Result<f64> {
    if m > n {
        return Err(Error::Domain(format!("order {m} exceeds degree {n}")));
    }
    if x.is_nan() || x.abs() > 1.0 {
        return Err(Error::Domain(format!("argument {x} outside [-1, 1]")));
    }
    let s = ((1.0 - x) * (1.0 + x)).sqrt();
    // P_m^m = (−1)^m (2m−1)!! s^m
    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= -((2 * k - 1) as f64) * s;
    }
    if n == m {
        return Ok(pmm);
    }
    let mut p_prev = pmm;
    let mut p = x * (2 * m + 1) as f64 * pmm;
    for k in (m + 2)..=n {
        let next = ((2 * k - 1) as f64 * x * p - (k + m - 1) as f64 * p_prev) / (k - m) as f64;
        p_prev = p;
        p = next;
    }
    Ok(p)
}

/// `ln k!` by summation.
pub fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Zonal,
    Cos,
    Sin,
}

/// One of the `2ℓ+1` basis functions of H_ℓ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisFunction {
    pub degree: usize,
    pub order: usize,
    pub kind: BasisKind,
}

impl BasisFunction {
    /// Index of this function in [`basis`].
    pub fn index(&self) -> usize {
        match self.kind {
            BasisKind::Zonal => 0,
            BasisKind::Cos => 2 * self.order - 1,
            BasisKind::Sin => 2 * self.order,
        }
    }

    /// The unnormalized function `P_ℓ^m(cosφ)·{1, cos mθ, sin mθ}` at a unit vector.
    pub fn eval_raw(&self, p: [f64; 3]) -> f64 {
        let z = p[2].clamp(-1.0, 1.0);
        let s = (p[0] * p[0] + p[1] * p[1]).sqrt();
        let plm = assoc_legendre(self.degree, self.order, z).expect("valid basis function");
        match self.kind {
            BasisKind::Zonal => plm,
            BasisKind::Cos | BasisKind::Sin => {
                if s == 0.0 {
                    return 0.0;
                }
                let theta = p[1].atan2(p[0]);
                let a = self.order as f64 * theta;
                plm * if self.kind == BasisKind::Cos { a.cos() } else { a.sin() }
            }
        }
    }

    /// `∫ |f|² dσ = π(1+[m=0])·2/(2ℓ+1)·(ℓ+m)!/(ℓ−m)!`.
    pub fn norm_sq(&self) -> f64 {
        let (l, m) = (self.degree, self.order);
        let ratio: f64 = (((l - m + 1)..=(l + m)).map(|k| (k as f64).ln()).sum::<f64>()).exp();
        let mult = if m == 0 { 2.0 } else { 1.0 };
        PI * mult * 2.0 / (2 * l + 1) as f64 * ratio
    }
}

/// The `2ℓ+1` basis functions of H_ℓ in coefficient order.
pub fn basis(ell: usize) -> Vec<BasisFunction> {
    let mut out = vec![BasisFunction { degree: ell, order: 0, kind: BasisKind::Zonal }];
    for m in 1..=ell {
        out.push(BasisFunction { degree: ell, order: m, kind: BasisKind::Cos });
        out.push(BasisFunction { degree: ell, order: m, kind: BasisKind::Sin });
    }
    out
}

/// Evaluates all L²-normalized basis functions of one degree.
///
/// Uses the normalized recurrence for `P̄_ℓ^m` without the `sin^m φ` factor and
/// multiplies by `Re/Im (x+iy)^m`, so no trigonometric calls are made.
#[derive(Clone, Debug)]
pub struct HarmonicEvaluator {
    ell: usize,
    /// `P̄_m^m` at the pole side, without `sin^m φ`, including `√2` for m ≥ 1.
    diag: Vec<f64>,
    /// `a_{k,m}` for `k > m+1`, flattened per m.
    rec: Vec<Vec<(f64, f64)>>,
}

impl HarmonicEvaluator {
    pub fn new(ell: usize) -> Self {
        let mut diag = Vec::with_capacity(ell + 1);
        let mut pmm = 1.0 / (4.0 * PI).sqrt();
        let mut rec = Vec::with_capacity(ell + 1);
        for m in 0..=ell {
            if m > 0 {
                pmm *= -((2 * m + 1) as f64 / (2 * m) as f64).sqrt();
            }
            diag.push(if m == 0 { pmm } else { pmm * std::f64::consts::SQRT_2 });
            let a = |k: usize| {
                let (k, m) = (k as f64, m as f64);
                ((4.0 * k * k - 1.0) / (k * k - m * m)).sqrt()
            };
            let mut r = Vec::new();
            for k in (m + 2)..=ell {
                r.push((a(k), 1.0 / a(k - 1)));
            }
            rec.push(r);
        }
        Self { ell, diag, rec }
    }

    pub fn degree(&self) -> usize {
        self.ell
    }

    pub fn dim(&self) -> usize {
        2 * self.ell + 1
    }

    /// Write the `2ℓ+1` normalized basis values at `p` into `out`.
    pub fn eval_all(&self, p: [f64; 3], out: &mut [f64]) {
        let [x, y, z] = p;
        let l = self.ell;
        let (mut cr, mut ci) = (1.0, 0.0);
        for m in 0..=l {
            if m > 0 {
                (cr, ci) = (cr * x - ci * y, cr * y + ci * x);
            }
            let pmm = self.diag[m];
            let v = if l == m {
                pmm
            } else {
                let mut p2 = pmm;
                let mut p1 = z * ((2 * m + 3) as f64).sqrt() * pmm;
                for &(a, inv_prev) in &self.rec[m] {
                    let p0 = a * (z * p1 - p2 * inv_prev);
                    p2 = p1;
                    p1 = p0;
                }
                p1
            };
            if m == 0 {
                out[0] = v;
            } else {
                out[2 * m - 1] = v * cr;
                out[2 * m] = v * ci;
            }
        }
    }

    /// Evaluate `Σ c_k b_k(p)`.
    pub fn eval(&self, coeffs: &[f64], p: [f64; 3]) -> f64 {
        let mut buf = vec![0.0; self.dim()];
        self.eval_all(p, &mut buf);
        buf.iter().zip(coeffs).map(|(a, b)| a * b).sum()
    }
}

/// An element of H_ℓ over the normalized basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphericalFunction {
    pub degree: usize,
    pub coeffs: Vec<f64>,
}

impl SphericalFunction {
    pub fn new(degree: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != 2 * degree + 1 {
            return Err(Error::Domain(format!(
                "degree {degree} needs {} coefficients, got {}",
                2 * degree + 1,
                coeffs.len()
            )));
        }
        Ok(Self { degree, coeffs })
    }

    pub fn eval(&self, p: [f64; 3]) -> f64 {
        HarmonicEvaluator::new(self.degree).eval(&self.coeffs, p)
    }

    /// L² norm, which equals the Euclidean norm of the coefficients.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0, x);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = -x;
        ws[i] = w;
        xs[n - 1 - i] = x;
        ws[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        xs[n / 2] = 0.0;
    }
    (xs, ws)
}

/// Product grid: `L+1` Gauss–Legendre nodes in `cosφ` times `2L+2` equispaced
/// angles. Exact for spherical polynomials of degree `≤ 2L+1`.
#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    pub lmax: usize,
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl QuadratureGrid {
    pub fn new(lmax: usize) -> Self {
        let (zs, wz) = gauss_legendre(lmax + 1);
        let nt = 2 * lmax + 2;
        let dt = 2.0 * PI / nt as f64;
        let mut points = Vec::with_capacity(zs.len() * nt);
        let mut weights = Vec::with_capacity(zs.len() * nt);
        for (z, w) in zs.iter().zip(&wz) {
            let s = ((1.0 - z) * (1.0 + z)).sqrt();
            for j in 0..nt {
                let t = j as f64 * dt;
                points.push([s * t.cos(), s * t.sin(), *z]);
                weights.push(w * dt);
            }
        }
        Self { lmax, points, weights }
    }

    pub fn exactness(&self) -> usize {
        2 * self.lmax + 1
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `∫ f dσ`.
    pub fn integrate<F: Fn([f64; 3]) -> f64>(&self, f: F) -> f64 {
        pairwise_sum_map(&self.weights, &self.points, f)
    }
}

fn pairwise_sum_map<F: Fn([f64; 3]) -> f64>(w: &[f64], p: &[[f64; 3]], f: F) -> f64 {
    let terms: Vec<f64> = w.iter().zip(p).map(|(w, p)| w * f(*p)).collect();
    pairwise_sum(&terms)
}

/// Pairwise summation, deterministic for a given input order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// `⟨f, g⟩ = ∫ f g dσ` by quadrature.
pub fn inner_product(f: &SphericalFunction, g: &SphericalFunction, grid: &QuadratureGrid) -> Result<f64> {
    let need = f.degree + g.degree;
    if need > grid.exactness() {
        return Err(Error::DegreeMismatch { function: need, grid: grid.exactness() });
    }
    let ef = HarmonicEvaluator::new(f.degree);
    let eg = HarmonicEvaluator::new(g.degree);
    Ok(grid.integrate(|p| ef.eval(&f.coeffs, p) * eg.eval(&g.coeffs, p)))
}

/// `ln C_m` for the Catalan number `C_m = binom(2m, m)/(m+1)`.
fn ln_catalan(m: usize) -> f64 {
    ln_factorial(2 * m) - 2.0 * ln_factorial(m) - ((m + 1) as f64).ln()
}

/// Closed form for `Y_ℓ^n(0)`, the normalized associated Legendre factor at the equator.
pub fn y_zero(ell: usize, n: usize) -> Result<f64> {
    if n > ell {
        return Err(Error::Domain(format!("order {n} exceeds degree {ell}")));
    }
    if (ell + n) % 2 == 1 {
        return Ok(0.0);
    }
    let (a, b) = ((ell + n) / 2, (ell - n) / 2);
    let ln_num = ((2 * ell + 1) as f64).ln()
        + ((ell + n + 2) as f64).ln()
        + ((ell - n + 2) as f64).ln()
        + ln_catalan(a)
        + ln_catalan(b);
    let ln_val = 0.5 * ln_num - (ell + 2) as f64 * std::f64::consts::LN_2 - 0.5 * PI.ln();
    let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * ln_val.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_examples() {
        for n in 0..=60 {
            assert!((legendre(n, 1.0).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!((legendre(2, 0.0).unwrap() + 0.5).abs() < 1e-15);
        assert!((assoc_legendre(1, 1, 0.0).unwrap() + 1.0).abs() < 1e-15);
        assert!(assoc_legendre(1, 2, 0.0).is_err());
        assert!(legendre(3, 1.5).is_err());
    }

    #[test]
    fn y_zero_examples() {
        assert!((y_zero(1, 1).unwrap() + 6f64.sqrt() / (4.0 * PI.sqrt())).abs() < 1e-15);
        assert!((y_zero(0, 0).unwrap() - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15);
        assert_eq!(y_zero(5, 2).unwrap(), 0.0);
    }

    #[test]
    fn gauss_weights_sum() {
        for n in 1..40 {
            let (_, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn normalized_matches_raw() {
        let ev = HarmonicEvaluator::new(7);
        let p = [0.36, -0.48, 0.8];
        let mut out = vec![0.0; ev.dim()];
        ev.eval_all(p, &mut out);
        for b in basis(7) {
            let want = b.eval_raw(p) / b.norm_sq().sqrt();
            assert!((out[b.index()] - want).abs() < 1e-13, "{b:?}");
        }
    }
}
