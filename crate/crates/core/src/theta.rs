//! The theta lift `ψ ↦ f_ψ`, CM theta series of imaginary quadratic fields of
//! class number one, and Hecke normalization of q-expansions.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesics::is_fundamental;
use crate::harmonics::SphericalFunction;
use crate::hecke::DegreeContext;
use crate::hurwitz::{enumerate_norm, left_coset_reps};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Plain coefficients `a_n`.
    Arithmetic,
    /// `λ(n) = a_n / n^{(k−1)/2}`.
    Hecke,
}

/// Coefficients `a_1, …, a_M` of a q-expansion; `a[0]` holds `a_1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QExpansion {
    pub weight: u32,
    pub level: u64,
    pub normalization: Normalization,
    pub a: Vec<f64>,
}

impl QExpansion {
    /// Coefficient of `q^n`, `n ≥ 1`.
    pub fn coeff(&self, n: usize) -> Option<f64> {
        if n == 0 {
            None
        } else {
            self.a.get(n - 1).copied()
        }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

/// `λ(n) = a_n / n^{(k−1)/2}`.
pub fn hecke_normalize(q: &QExpansion) -> Result<QExpansion> {
    if q.normalization == Normalization::Hecke {
        return Ok(q.clone());
    }
    match q.a.first() {
        Some(a1) if (a1 - 1.0).abs() <= 1e-6 => {}
        _ => return Err(Error::Domain("Hecke normalization needs a_1 = 1".into())),
    }
    let e = (q.weight as f64 - 1.0) / 2.0;
    let a = q.a.iter().enumerate().map(|(i, a)| a / ((i + 1) as f64).powf(e)).collect();
    Ok(QExpansion { normalization: Normalization::Hecke, a, ..q.clone() })
}

/// `⟨ψ, Σ_R w·ψ∘R⟩` by quadrature.
fn pair_with_rotations(ctx: &DegreeContext, psi: &SphericalFunction, rots: &[[[f64; 3]; 3]], w: f64) -> f64 {
    let c = nalgebra::DMatrix::from_column_slice(psi.coeffs.len(), 1, &psi.coeffs);
    let base = ctx.values_of(&c);
    let img = ctx.averaged_values(rots, w, Some(&c));
    ctx.gram(&base, &img)[(0, 0)]
}

/// The lift `a_m = (1/24) Σ_{nrd γ = m} m^ℓ ⟨ψ, ψ∘γ⟩` for `m ≤ M`; weight `2ℓ+2`, level 2.
///
/// `ψ(γξγ̄)` is the degree-ℓ homogeneous extension, hence the factor `m^ℓ`.
pub fn lift(psi: &SphericalFunction, m_max: usize) -> Result<QExpansion> {
    let ell = psi.degree;
    let ctx = DegreeContext::new(ell);
    let mut a = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let rots = enumerate_norm(m as u64).iter().map(|q| q.rotation_matrix()).collect::<Result<Vec<_>>>()?;
        let ip = pair_with_rotations(&ctx, psi, &rots, 1.0 / 24.0);
        a.push((m as f64).powi(ell as i32) * ip);
    }
    Ok(QExpansion { weight: 2 * ell as u32 + 2, level: 2, normalization: Normalization::Arithmetic, a })
}

/// Primes up to `n`.
pub fn primes_up_to(n: usize) -> Vec<usize> {
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if sieve[p] {
            out.push(p);
            let mut k = p * p;
            while k <= n {
                sieve[k] = false;
                k += p;
            }
        }
    }
    out
}

/// Hecke-normalized `λ_f(n)`, `n ≤ M`, of the lift of an invariant eigenfunction,
/// from `λ(p)` at primes and the Hecke relations.
///
/// For odd `p` the sum over `O(p)` runs over left coset representatives; for
/// `p = 2` over all of `O(2)`. Then `λ(p^{k+1}) = λ(p)λ(p^k) − λ(p^{k−1})` for
/// odd `p`, `λ(2^k) = λ(2)^k`, extended multiplicatively.
pub fn lift_hecke(psi: &SphericalFunction, m_max: usize) -> Result<QExpansion> {
    let ell = psi.degree;
    let ctx = DegreeContext::new(ell);
    let k_half = (2 * ell + 1) as f64 / 2.0;
    let mut lam = vec![f64::NAN; m_max + 1];
    if m_max >= 1 {
        lam[1] = 1.0;
    }
    for p in primes_up_to(m_max) {
        let (elems, w) = if p == 2 { (enumerate_norm(2), 1.0 / 24.0) } else { (left_coset_reps(p as u64)?, 1.0) };
        let rots = elems.iter().map(|q| q.rotation_matrix()).collect::<Result<Vec<_>>>()?;
        let ip = pair_with_rotations(&ctx, psi, &rots, w);
        // a_p = p^ℓ ip, λ(p) = a_p / p^{ℓ+1/2}
        let lp = ip / (p as f64).sqrt();
        let mut pk = p;
        let (mut prev, mut cur) = (1.0, lp);
        while pk <= m_max {
            lam[pk] = cur;
            let next = if p == 2 { cur * lp } else { lp * cur - prev };
            prev = cur;
            cur = next;
            pk = match pk.checked_mul(p) {
                Some(v) => v,
                None => break,
            };
        }
    }
    // multiplicative extension over the smallest prime power factor
    for n in 2..=m_max {
        if !lam[n].is_nan() {
            continue;
        }
        let p = (2..=n).find(|d| n % d == 0).expect("n ≥ 2 has a factor");
        let mut q = 1;
        let mut r = n;
        while r % p == 0 {
            r /= p;
            q *= p;
        }
        lam[n] = lam[q] * lam[r];
    }
    let a = (1..=m_max).map(|n| lam[n] * (n as f64).powf(k_half)).collect();
    Ok(QExpansion { weight: 2 * ell as u32 + 2, level: 2, normalization: Normalization::Arithmetic, a })
}

/// Kronecker symbol `(D/m)` for `m ≥ 1`.
pub fn kronecker_chi(d: i64, m: u64) -> i32 {
    if m == 0 {
        return if d.abs() == 1 { 1 } else { 0 };
    }
    let mut m = m;
    let mut result = 1;
    while m.is_multiple_of(2) {
        m /= 2;
        let r = d.rem_euclid(8);
        result *= match r {
            0 | 2 | 4 | 6 => 0,
            1 | 7 => 1,
            _ => -1,
        };
        if result == 0 {
            return 0;
        }
    }
    result * jacobi(d, m)
}

/// Jacobi symbol `(a/n)` for odd `n ≥ 1`.
pub fn jacobi(a: i64, n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Discriminants of class number one with `D ≢ 1 (mod 8)`.
pub const CLASS_ONE: [i64; 8] = [-3, -4, -8, -11, -19, -43, -67, -163];

/// An element of `O_E` as `(X + Y√D)/2` (D odd) or `X + Y√(D/4)` (D even).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadInt {
    pub x: i64,
    pub y: i64,
}

/// Ring-of-integers helper for a fixed discriminant.
#[derive(Clone, Copy, Debug)]
pub struct QuadRing {
    pub d: i64,
}

impl QuadRing {
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 || !is_fundamental(d) {
            return Err(Error::Discriminant { d, reason: "not a negative fundamental discriminant".into() });
        }
        Ok(Self { d })
    }

    pub fn is_even(&self) -> bool {
        self.d % 2 == 0
    }

    /// `(Re α, Im α)` as floats.
    pub fn embed(&self, a: QuadInt) -> (f64, f64) {
        if self.is_even() {
            (a.x as f64, a.y as f64 * ((-self.d / 4) as f64).sqrt())
        } else {
            (a.x as f64 / 2.0, a.y as f64 * ((-self.d) as f64).sqrt() / 2.0)
        }
    }

    pub fn norm(&self, a: QuadInt) -> i64 {
        if self.is_even() {
            a.x * a.x + (-self.d / 4) * a.y * a.y
        } else {
            (a.x * a.x + (-self.d) * a.y * a.y) / 4
        }
    }

    /// Elements with `lo ≤ N(α) ≤ hi`, including both signs.
    pub fn elements_with_norm(&self, lo: i64, hi: i64) -> Vec<QuadInt> {
        let mut out = Vec::new();
        let n = -self.d;
        if self.is_even() {
            let k = n / 4;
            let ymax = ((hi as f64 / k as f64).sqrt()) as i64 + 1;
            for y in -ymax..=ymax {
                let rest = hi - k * y * y;
                if rest < 0 {
                    continue;
                }
                let xmax = (rest as f64).sqrt() as i64 + 1;
                for x in -xmax..=xmax {
                    let a = QuadInt { x, y };
                    let nn = self.norm(a);
                    if nn >= lo && nn <= hi {
                        out.push(a);
                    }
                }
            }
        } else {
            let ymax = ((4.0 * hi as f64 / n as f64).sqrt()) as i64 + 1;
            for y in -ymax..=ymax {
                let rest = 4 * hi - n * y * y;
                if rest < 0 {
                    continue;
                }
                let xmax = (rest as f64).sqrt() as i64 + 2;
                for x in -xmax..=xmax {
                    if (x - y).rem_euclid(2) != 0 {
                        continue;
                    }
                    let a = QuadInt { x, y };
                    let nn = self.norm(a);
                    if nn >= lo && nn <= hi {
                        out.push(a);
                    }
                }
            }
        }
        out
    }

    /// Membership in the fundamental domain for the unit group.
    ///
    /// Generic `D`: `Re > 0`, or `Re = 0` and `Im < 0`. `D = −4`: `Re > 0` and
    /// `Im ≥ 0`. `D = −3`: `0 ≤ Arg α < π/3`.
    pub fn in_fundamental_domain(&self, a: QuadInt) -> bool {
        match self.d {
            -4 => a.x > 0 && a.y >= 0,
            -3 => {
                // α = (X + Y√−3)/2 and tan Arg = Y√3/X, so Arg ∈ [0, π/3) ⇔ 0 ≤ Y < X
                a.y >= 0 && a.y < a.x
            }
            _ => a.x > 0 || (a.x == 0 && a.y < 0),
        }
    }

    /// `(A, B)` with `α^k = (A + B√D)/2^k` (odd D) or `A + B√(D/4)` (even D).
    pub fn pow_exact(&self, a: QuadInt, k: u32) -> (BigInt, BigInt) {
        let r = BigInt::from(if self.is_even() { self.d / 4 } else { self.d });
        let (x, y) = (BigInt::from(a.x), BigInt::from(a.y));
        let (mut pa, mut pb) = (BigInt::one(), BigInt::zero());
        for _ in 0..k {
            let na = &pa * &x + &pb * &y * &r;
            let nb = &pa * &y + &pb * &x;
            pa = na;
            pb = nb;
        }
        (pa, pb)
    }

    pub fn units(&self) -> usize {
        match self.d {
            -3 => 6,
            -4 => 4,
            _ => 2,
        }
    }
}

/// A CM form with exact integer coefficients.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CmForm {
    pub d: i64,
    pub n: u32,
    /// Exact `a_m`, `m = 1..M`, as decimal strings.
    pub exact: Vec<String>,
    /// Sum of imaginary parts per `m`; zero when the conjugate pairing holds.
    pub imaginary_exact_zero: bool,
    pub qexp: QExpansion,
}

/// `a_m = Σ_{α ∈ F_D, N(α) = m} α^{2n}`, weight `2n+1`, level `|D|`.
pub fn cm_form(d: i64, n: u32, m_max: usize) -> Result<CmForm> {
    if !CLASS_ONE.contains(&d) {
        return Err(Error::Discriminant {
            d,
            reason: "CM forms are built only for class number one (D ∈ {−3, −4, −8, −11, −19, −43, −67, −163})".into(),
        });
    }
    if d == -4 && !n.is_multiple_of(2) {
        return Err(Error::Domain("D = −4 needs an even angular index".into()));
    }
    if d == -3 && !n.is_multiple_of(3) {
        return Err(Error::Domain("D = −3 needs an angular index divisible by 3".into()));
    }
    let ring = QuadRing::new(d)?;
    let k = 2 * n;
    let mut re = vec![BigInt::zero(); m_max + 1];
    let mut im = vec![BigInt::zero(); m_max + 1];
    for a in ring.elements_with_norm(1, m_max as i64) {
        if !ring.in_fundamental_domain(a) {
            continue;
        }
        let m = ring.norm(a) as usize;
        let (pa, pb) = ring.pow_exact(a, k);
        re[m] += pa;
        im[m] += pb;
    }
    let scale = if ring.is_even() { BigInt::one() } else { BigInt::one() << k as usize };
    let mut exact = Vec::with_capacity(m_max);
    let mut a = Vec::with_capacity(m_max);
    let mut imaginary_exact_zero = true;
    for m in 1..=m_max {
        let (q, r) = (&re[m] / &scale, &re[m] % &scale);
        if !r.is_zero() {
            return Err(Error::Domain(format!("coefficient a_{m} is not integral")));
        }
        imaginary_exact_zero &= im[m].is_zero();
        a.push(q.to_f64().unwrap_or(f64::NAN));
        exact.push(q.to_string());
    }
    Ok(CmForm {
        d,
        n,
        exact,
        imaginary_exact_zero,
        qexp: QExpansion { weight: 2 * n + 1, level: d.unsigned_abs(), normalization: Normalization::Arithmetic, a },
    })
}

/// Hecke-normalized CM coefficients `λ(m) = Σ cos(2n·Arg α)` in floating point.
pub fn cm_lambda_float(d: i64, n: u32, m_max: usize) -> Result<Vec<f64>> {
    let ring = QuadRing::new(d)?;
    let mut out = vec![0.0; m_max];
    for a in ring.elements_with_norm(1, m_max as i64) {
        if !ring.in_fundamental_domain(a) {
            continue;
        }
        let (x, y) = ring.embed(a);
        out[ring.norm(a) as usize - 1] += (2.0 * n as f64 * y.atan2(x)).cos();
    }
    Ok(out)
}
