//! Smooth dyadic partitions of unity built from `h(t) = e^{−1/t}`.

fn h(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// Smooth step: 0 for `t ≤ 0`, 1 for `t ≥ 1`.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = h(t);
        a / (a + h(1.0 - t))
    }
}

/// `B(t)`, supported on `[−1, 1]`, with `B(t) + B(t − 1) = 1` on `[0, 1]`.
pub fn bump_b(t: f64) -> f64 {
    if (-1.0..=0.0).contains(&t) {
        smooth_step(t + 1.0)
    } else if t > 0.0 && t < 1.0 {
        smooth_step(1.0 - t)
    } else {
        0.0
    }
}

/// `W(x) = B(log₂ x)`, supported on `[1/2, 2]`; `Σ_{k≥0} W(x/2^k) = 1` for `x ≥ 1`.
pub fn w(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        bump_b(x.log2())
    }
}

/// `W_b(x) = W((ℓ + 1 − x)/2^b)`.
pub fn w_b(b: u32, ell: usize, x: f64) -> f64 {
    w((ell as f64 + 1.0 - x) / 2f64.powi(b as i32))
}

/// `W'_a(x) = W(x/2^a)`.
pub fn w_a_prime(a: u32, x: f64) -> f64 {
    w(x / 2f64.powi(a as i32))
}

/// `U(x) = Ũ(x/ℓ)` with `Ũ = 1` on `[0, ∞)` and support `[−1/2, ∞)`.
pub fn u_weight(ell: usize, x: f64) -> f64 {
    smooth_step(2.0 * x / ell as f64 + 1.0)
}
