//! Complex log-gamma and the archimedean gamma quotient `F(u, ℓ, x)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `B_{2k} / (2k(2k−1))` for `k = 1..8`.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// `ln Γ(z)` up to a multiple of `2πi` in the imaginary part.
///
/// Shifts to `Re z ≥ 10` and applies the Stirling series; reflects for `Re z < 1/2`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let mut z = z;
    let mut prod = Complex64::new(1.0, 0.0);
    while z.re < 10.0 {
        prod *= z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series - prod.ln()
}

/// The four shifts `ℓ ∓ x + 1/2`, `ℓ ∓ x + 3/2`.
pub fn local_parameters(ell: usize, x: f64) -> [f64; 4] {
    let l = ell as f64;
    [l - x + 0.5, l - x + 1.5, l + x + 0.5, l + x + 1.5]
}

/// `ln γ(s, ℓ, x) = −2s ln π + Σ_j ln Γ((s + μ_j)/2)`.
pub fn ln_gamma_factor(s: Complex64, ell: usize, x: f64) -> Result<Complex64> {
    let mut acc = -2.0 * s * PI.ln();
    for mu in local_parameters(ell, x) {
        let a = (s + mu) / 2.0;
        let k = a.re.round();
        if k <= 0.0 && (a - k).norm() < 1e-6 {
            return Err(Error::PoleProximity(format!("gamma argument {a} is near the pole at {k}")));
        }
        acc += ln_gamma(a);
    }
    Ok(acc)
}

/// `F(u, ℓ, x) = γ(u + 1/2, ℓ, x) / γ(1/2, ℓ, x)`, by log-gamma differences.
pub fn gamma_quotient(u: Complex64, ell: usize, x: f64) -> Result<Complex64> {
    Ok(ln_gamma_quotient(u, ell, x)?.exp())
}

pub fn ln_gamma_quotient(u: Complex64, ell: usize, x: f64) -> Result<Complex64> {
    let half = Complex64::new(0.5, 0.0);
    Ok(ln_gamma_factor(u + half, ell, x)? - ln_gamma_factor(half, ell, x)?)
}
