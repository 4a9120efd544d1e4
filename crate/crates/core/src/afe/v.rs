//! `V(y, x) = (1/2πi) ∫_{Re u = c} F(u, ℓ, x) y^{−u} e^{u²} du/u`.
//!
//! For small `y` the line `Re u = 3` cancels catastrophically (the integrand is of
//! size `y^{−3}` while the value is near 1), so [`v_half`] picks the abscissa that
//! minimises the integrand at `Im u = 0` and adds the residue `1` at `u = 0` when
//! the line lies to its left. [`v_half_on_line`] integrates on a fixed line.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::ln_gamma_quotient;
use crate::error::{Error, Result};

pub const DEFAULT_U_MAX: f64 = 12.0;
pub const DEFAULT_NODES: usize = 4001;
pub const DEFAULT_ABSCISSA: f64 = 3.0;
const CANDIDATES: [f64; 5] = [-0.25, 0.5, 1.0, 2.0, 3.0];

#[derive(Clone, Copy, Debug)]
pub struct VEvaluator {
    pub ell: usize,
    pub u_max: f64,
    pub nodes: usize,
}

impl VEvaluator {
    pub fn new(ell: usize) -> Self {
        VEvaluator { ell, u_max: DEFAULT_U_MAX, nodes: DEFAULT_NODES }
    }

    pub fn with_truncation(ell: usize, u_max: f64, nodes: usize) -> Self {
        VEvaluator { ell, u_max, nodes }
    }

    fn check(&self, y: f64, x: f64) -> Result<()> {
        if !y.is_finite() || y <= 0.0 {
            return Err(Error::Domain(format!("V needs y > 0, got {y}")));
        }
        if x.abs() > self.ell as f64 + 1.0 {
            return Err(Error::Domain(format!("|x| = {} exceeds ℓ + 1", x.abs())));
        }
        if self.nodes < 3 || self.nodes.is_multiple_of(2) {
            return Err(Error::Domain("node count must be odd and at least 3".into()));
        }
        Ok(())
    }

    /// Integral over `Re u = c` without residue correction.
    pub fn on_line(&self, y: f64, x: f64, c: f64) -> Result<f64> {
        self.check(y, x)?;
        if c == 0.0 {
            return Err(Error::PoleProximity("contour through u = 0".into()));
        }
        let half = (self.nodes - 1) / 2;
        let h = self.u_max / half as f64;
        let ly = y.ln();
        let term = |t: f64| -> Result<f64> {
            let u = Complex64::new(c, t);
            let lg = ln_gamma_quotient(u, self.ell, x)? - u * ly + u * u - u.ln();
            Ok(lg.exp().re)
        };
        // The integrand at −t is the conjugate of the one at t.
        let mut acc = term(0.0)?;
        for k in 1..=half {
            let w = if k == half { 1.0 } else { 2.0 };
            acc += w * term(k as f64 * h)?;
        }
        Ok(acc * h / (2.0 * PI))
    }

    fn log_size(&self, y: f64, x: f64, c: f64) -> Result<f64> {
        let u = Complex64::new(c, 0.0);
        Ok(ln_gamma_quotient(u, self.ell, x)?.re - c * y.ln() + c * c - c.abs().ln())
    }

    /// Abscissa used by [`VEvaluator::eval`]. Lines left of zero must stay clear of
    /// the first gamma pole at `u = −(1 + ℓ − |x|)`.
    pub fn abscissa(&self, y: f64, x: f64) -> Result<f64> {
        self.check(y, x)?;
        let first_pole = -(1.0 + self.ell as f64 - x.abs());
        let mut best = (f64::INFINITY, DEFAULT_ABSCISSA);
        for c in CANDIDATES {
            if c < 0.0 && c <= first_pole + 0.5 {
                continue;
            }
            let s = self.log_size(y, x, c)?;
            if s < best.0 {
                best = (s, c);
            }
        }
        Ok(best.1)
    }

    /// `V(y, x)`, equal to the integral on `Re u = 3`.
    pub fn eval(&self, y: f64, x: f64) -> Result<f64> {
        let c = self.abscissa(y, x)?;
        let v = self.on_line(y, x, c)?;
        Ok(if c < 0.0 { 1.0 + v } else { v })
    }
}

pub fn v_half(y: f64, x: f64, ell: usize) -> Result<f64> {
    VEvaluator::new(ell).eval(y, x)
}

pub fn v_half_on_line(y: f64, x: f64, ell: usize, c: f64) -> Result<f64> {
    VEvaluator::new(ell).on_line(y, x, c)
}

/// Piecewise Chebyshev interpolant of `ln y ↦ V(y, x)` on `[y_min, y_max]`.
/// Below `y_min` the value is taken as the interpolant at `y_min`; above `y_max` it is 0.
#[derive(Clone, Debug)]
pub struct VInterpolant {
    pub ell: usize,
    pub x: f64,
    lo: f64,
    width: f64,
    pieces: Vec<Vec<f64>>,
}

const CHEB_DEGREE: usize = 24;
const PIECE_WIDTH: f64 = 1.0;

impl VInterpolant {
    pub fn new(ev: &VEvaluator, x: f64, y_min: f64, y_max: f64) -> Result<Self> {
        if !(y_min > 0.0 && y_max > y_min) {
            return Err(Error::Domain("interpolation range must satisfy 0 < y_min < y_max".into()));
        }
        let lo = y_min.ln();
        let count = ((y_max.ln() - lo) / PIECE_WIDTH).ceil().max(1.0) as usize;
        let n = CHEB_DEGREE + 1;
        let nodes: Vec<f64> = (0..n).map(|j| (PI * (j as f64 + 0.5) / n as f64).cos()).collect();
        let mut pieces = Vec::with_capacity(count);
        for p in 0..count {
            let a = lo + p as f64 * PIECE_WIDTH;
            let vals = nodes
                .iter()
                .map(|t| ev.eval((a + (t + 1.0) * PIECE_WIDTH / 2.0).exp(), x))
                .collect::<Result<Vec<f64>>>()?;
            let coeffs = (0..n)
                .map(|k| {
                    let s: f64 = (0..n).map(|j| vals[j] * (PI * k as f64 * (j as f64 + 0.5) / n as f64).cos()).sum();
                    if k == 0 {
                        s / n as f64
                    } else {
                        2.0 * s / n as f64
                    }
                })
                .collect();
            pieces.push(coeffs);
        }
        Ok(VInterpolant { ell: ev.ell, x, lo, width: PIECE_WIDTH, pieces })
    }

    pub fn eval(&self, y: f64) -> f64 {
        let ly = y.ln().max(self.lo);
        let pos = (ly - self.lo) / self.width;
        let idx = pos.floor() as usize;
        let (idx, t) = if idx >= self.pieces.len() {
            if pos > self.pieces.len() as f64 {
                return 0.0;
            }
            (self.pieces.len() - 1, 1.0)
        } else {
            (idx, 2.0 * (pos - idx as f64) - 1.0)
        };
        // Clenshaw
        let c = &self.pieces[idx];
        let (mut b1, mut b2) = (0.0, 0.0);
        for &ck in c.iter().skip(1).rev() {
            let b0 = 2.0 * t * b1 - b2 + ck;
            b2 = b1;
            b1 = b0;
        }
        t * b1 - b2 + c[0]
    }
}
