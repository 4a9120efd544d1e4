//! Lattice points in parallelograms and the sets `S_R`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::theta::{QuadInt, QuadRing};

/// A lattice `Z·α₁ + Z·α₂ ⊂ R²` and a parallelogram `{s·v₁ + t·v₂ : s, t ∈ [0, 1]}`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LatticeRegion {
    pub alpha1: [f64; 2],
    pub alpha2: [f64; 2],
    pub v1: [f64; 2],
    pub v2: [f64; 2],
}

fn det(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

impl LatticeRegion {
    pub fn new(alpha1: [f64; 2], alpha2: [f64; 2], v1: [f64; 2], v2: [f64; 2]) -> Result<Self> {
        let sa = norm(alpha1) * norm(alpha2);
        let sv = norm(v1) * norm(v2);
        if det(alpha1, alpha2).abs() <= 1e-12 * sa || sa == 0.0 {
            return Err(Error::Domain("lattice basis is degenerate".into()));
        }
        if det(v1, v2).abs() <= 1e-12 * sv || sv == 0.0 {
            return Err(Error::Domain("parallelogram sides are linearly dependent".into()));
        }
        Ok(LatticeRegion { alpha1, alpha2, v1, v2 })
    }

    /// Coordinates `(s, t)` of `p` in the basis `v₁, v₂`.
    fn param(&self, p: [f64; 2]) -> (f64, f64) {
        let d = det(self.v1, self.v2);
        (det(p, self.v2) / d, det(self.v1, p) / d)
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        const TOL: f64 = 1e-10;
        let (s, t) = self.param(p);
        (-TOL..=1.0 + TOL).contains(&s) && (-TOL..=1.0 + TOL).contains(&t)
    }
}

/// `‖v₁‖ + ‖v₂‖ + ‖v₁‖·‖v₂‖ + 1`.
pub fn lipschitz_bound(r: &LatticeRegion) -> f64 {
    let (a, b) = (norm(r.v1), norm(r.v2));
    a + b + a * b + 1.0
}

/// Exact `|P ∩ Λ|` and the bound value.
pub fn lipschitz_count(r: &LatticeRegion) -> (u64, f64) {
    let d = det(r.alpha1, r.alpha2);
    let coords = |p: [f64; 2]| (det(p, r.alpha2) / d, det(r.alpha1, p) / d);
    let corners = [[0.0, 0.0], r.v1, r.v2, [r.v1[0] + r.v2[0], r.v1[1] + r.v2[1]]];
    let (mut imin, mut imax, mut jmin, mut jmax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for c in corners {
        let (i, j) = coords(c);
        imin = imin.min(i);
        imax = imax.max(i);
        jmin = jmin.min(j);
        jmax = jmax.max(j);
    }
    let mut count = 0;
    for i in (imin.floor() as i64 - 1)..=(imax.ceil() as i64 + 1) {
        for j in (jmin.floor() as i64 - 1)..=(jmax.ceil() as i64 + 1) {
            let (fi, fj) = (i as f64, j as f64);
            let p = [fi * r.alpha1[0] + fj * r.alpha2[0], fi * r.alpha1[1] + fj * r.alpha2[1]];
            if r.contains(p) {
                count += 1;
            }
        }
    }
    (count, lipschitz_bound(r))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SRCount {
    pub d: i64,
    pub a: f64,
    pub r: f64,
    pub count: u64,
    pub bound: f64,
    /// Elements of `S_R` with `Im α ≥ 0`.
    pub upper: u64,
    /// Whether every upper element lies in `P_R`, reported for `R ≤ 1/2`.
    pub contained: Option<bool>,
}

/// Membership of `α` in `P_R = {s·(√(2A), 0) + t·(0, sin(πR)√(2A)) : s, t ∈ [0, 1]}`.
///
/// Signs and `Re α ≤ √(2A)` are decided in integers; only the height test
/// involves the transcendental `sin πR`.
pub fn in_p_r(ring: &QuadRing, e: QuadInt, a: f64, sin_r: f64) -> bool {
    // Re α = X or X/2; (Im α)² = k·Y² or |D|·Y²/4
    let (re2, im2) = if ring.is_even() {
        ((e.x * e.x) as f64, ((-ring.d / 4) * e.y * e.y) as f64)
    } else {
        ((e.x * e.x) as f64 / 4.0, ((-ring.d) * e.y * e.y) as f64 / 4.0)
    };
    e.x >= 0 && e.y >= 0 && re2 <= 2.0 * a && im2 <= 2.0 * a * sin_r * sin_r * (1.0 + 1e-14)
}

/// `S_R = {α ∈ F_D : |Arg α| ≤ πR, A/2 ≤ N(α) ≤ 2A}` by exact enumeration.
pub fn s_r_count(a: f64, r: f64, d: i64) -> Result<SRCount> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::Domain(format!("R must lie in (0, 1], got {r}")));
    }
    if a.is_nan() || a < 1.0 {
        return Err(Error::Domain(format!("A must be at least 1, got {a}")));
    }
    let ring = QuadRing::new(d)?;
    let lo = (a / 2.0).ceil() as i64;
    let hi = (2.0 * a).floor() as i64;
    let elems: Vec<QuadInt> =
        ring.elements_with_norm(lo, hi).into_iter().filter(|e| ring.in_fundamental_domain(*e)).collect();
    let sin_r = (PI * r).sin();
    let (mut count, mut upper, mut inside) = (0, 0, true);
    for e in &elems {
        let (x, y) = ring.embed(*e);
        if y.atan2(x).abs() > PI * r + 1e-12 {
            continue;
        }
        count += 1;
        if e.y >= 0 {
            upper += 1;
            inside &= in_p_r(&ring, *e, a, sin_r);
        }
    }
    Ok(SRCount { d, a, r, count, bound: a.sqrt() + r * a, upper, contained: (r <= 0.5).then_some(inside) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares() {
        let e = [[1.0, 0.0], [0.0, 1.0]];
        let unit = LatticeRegion::new(e[0], e[1], e[0], e[1]).unwrap();
        assert_eq!(lipschitz_count(&unit), (4, 4.0));
        let big = LatticeRegion::new(e[0], e[1], [10.0, 0.0], [0.0, 10.0]).unwrap();
        assert_eq!(lipschitz_count(&big).0, 121);
    }
}
