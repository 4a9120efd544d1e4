//! Central values `L(1/2, f ⊗ g)` by the approximate functional equation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::v::{VEvaluator, VInterpolant};
use crate::error::{Error, Result};
use crate::harmonics::pairwise_sum;
use crate::theta::{hecke_normalize, kronecker_chi, QExpansion};

/// `q_D = √2·|D|` for even `D`, `2|D|` for odd `D`.
pub fn conductor_q_d(d: i64) -> f64 {
    let a = d.unsigned_abs() as f64;
    if d % 2 == 0 {
        std::f64::consts::SQRT_2 * a
    } else {
        2.0 * a
    }
}

/// Archimedean conductor `(4+ℓ+n)(4+ℓ−n)(5+ℓ+n)(5+ℓ−n)`.
pub fn q_infty(ell: usize, n: u32) -> f64 {
    let (l, n) = (ell as f64, n as f64);
    (4.0 + l + n) * (4.0 + l - n) * (5.0 + l + n) * (5.0 + l - n)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AfeResult {
    pub ell: usize,
    #[serde(rename = "D")]
    pub d: i64,
    pub n: u32,
    pub epsilon: i32,
    #[serde(rename = "M")]
    pub m: usize,
    pub value: f64,
    pub q_infty: f64,
}

/// `(1+ε) Σ_{m ≤ M, m odd} χ_D(m)/m Σ_{n ≤ M} λ_f(n)λ_g(n)/√n · V(m²n/q_D, x)`
/// where `f` has weight `2ℓ+2` and `g` has weight `2x+1`.
pub fn l_central(f: &QExpansion, g: &QExpansion, d: i64, epsilon: i32, m_cap: usize) -> Result<AfeResult> {
    if epsilon != 1 && epsilon != -1 {
        return Err(Error::Domain(format!("root number must be ±1, got {epsilon}")));
    }
    if f.weight < 2 || !f.weight.is_multiple_of(2) || g.weight % 2 != 1 {
        return Err(Error::Domain("expected f of even weight 2ℓ+2 and g of odd weight 2n+1".into()));
    }
    for q in [f, g] {
        if q.len() < m_cap {
            return Err(Error::InsufficientCoefficients { need: m_cap, have: q.len() });
        }
    }
    let ell = (f.weight as usize - 2) / 2;
    let n = (g.weight - 1) / 2;
    let x = n as f64;
    if n as usize > ell {
        return Err(Error::Domain(format!("angular index {n} exceeds ℓ = {ell}")));
    }
    let mut out = AfeResult { ell, d, n, epsilon, m: m_cap, value: 0.0, q_infty: q_infty(ell, n) };
    if epsilon == -1 {
        return Ok(out);
    }
    let lf = hecke_normalize(f)?;
    let lg = hecke_normalize(g)?;
    let qd = conductor_q_d(d);
    let coeff: Vec<f64> = (1..=m_cap).map(|k| lf.a[k - 1] * lg.a[k - 1] / (k as f64).sqrt()).collect();
    let y_min = 1.0 / qd;
    let y_max = (m_cap * m_cap * m_cap) as f64 / qd;
    let interp = VInterpolant::new(&VEvaluator::new(ell), x, y_min, y_max)?;
    let terms: Vec<f64> = (1..=m_cap)
        .into_par_iter()
        .filter(|m| m % 2 == 1)
        .map(|m| {
            let chi = kronecker_chi(d, m as u64);
            if chi == 0 {
                return 0.0;
            }
            let m2 = (m * m) as f64;
            let inner: Vec<f64> =
                coeff.iter().enumerate().map(|(k, c)| c * interp.eval(m2 * (k + 1) as f64 / qd)).collect();
            chi as f64 / m as f64 * pairwise_sum(&inner)
        })
        .collect();
    out.value = 2.0 * pairwise_sum(&terms);
    Ok(out)
}
