//! Exact arithmetic in the Hurwitz order and its action on the sphere.
//!
//! Elements are stored by doubled coordinates `(2a, 2b, 2c, 2d)`; the four
//! doubled coordinates share a parity, which is exactly the Hurwitz condition.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element `a + bi + cj + dk` of the Hurwitz order, held as `(2a, 2b, 2c, 2d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HurwitzQuaternion {
    pub da: i64,
    pub db: i64,
    pub dc: i64,
    pub dd: i64,
}

impl HurwitzQuaternion {
    /// Build from doubled coordinates, checking the common-parity condition.
    pub fn from_doubled(da: i64, db: i64, dc: i64, dd: i64) -> Result<Self> {
        let p = da.rem_euclid(2);
        if db.rem_euclid(2) != p || dc.rem_euclid(2) != p || dd.rem_euclid(2) != p {
            return Err(Error::Domain(format!("doubled coordinates ({da},{db},{dc},{dd}) do not share parity")));
        }
        Ok(Self { da, db, dc, dd })
    }

    /// The Lipschitz element `a + bi + cj + dk` with integer coordinates.
    pub const fn lipschitz(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self { da: 2 * a, db: 2 * b, dc: 2 * c, dd: 2 * d }
    }

    pub const ONE: Self = Self::lipschitz(1, 0, 0, 0);
    pub const I: Self = Self::lipschitz(0, 1, 0, 0);
    pub const J: Self = Self::lipschitz(0, 0, 1, 0);
    pub const K: Self = Self::lipschitz(0, 0, 0, 1);

    pub fn doubled(&self) -> [i64; 4] {
        [self.da, self.db, self.dc, self.dd]
    }

    pub fn is_zero(&self) -> bool {
        self.doubled() == [0; 4]
    }

    /// True when all coordinates are integers.
    pub fn is_lipschitz(&self) -> bool {
        self.da % 2 == 0
    }

    pub fn conjugate(&self) -> Self {
        Self { da: self.da, db: -self.db, dc: -self.dc, dd: -self.dd }
    }

    /// Reduced norm `a² + b² + c² + d²`.
    pub fn nrd(&self) -> i64 {
        self.sum_sq_doubled() / 4
    }

    /// Reduced trace `2a`.
    pub fn trd(&self) -> i64 {
        self.da
    }

    fn sum_sq_doubled(&self) -> i64 {
        self.da * self.da + self.db * self.db + self.dc * self.dc + self.dd * self.dd
    }

    /// Rotation matrix of `v ↦ q v q⁻¹` as an integer numerator over `4·nrd(q)`.
    pub fn rotation_numerator(&self) -> Result<([[i64; 3]; 3], i64)> {
        if self.is_zero() {
            return Err(Error::Domain("rotation by the zero quaternion".into()));
        }
        let (a, b, c, d) = (self.da, self.db, self.dc, self.dd);
        let m = [
            [a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)],
            [2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)],
            [2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d],
        ];
        Ok((m, self.sum_sq_doubled()))
    }

    /// Floating-point rotation matrix of `v ↦ q v q⁻¹`.
    pub fn rotation_matrix(&self) -> Result<[[f64; 3]; 3]> {
        let (m, den) = self.rotation_numerator()?;
        let den = den as f64;
        Ok(m.map(|row| row.map(|e| e as f64 / den)))
    }

    /// Exact image of a rational vector under `v ↦ q v q⁻¹`.
    pub fn rotate_exact(&self, v: &RationalVec3) -> Result<RationalVec3> {
        let (m, den) = self.rotation_numerator()?;
        let mut num = [0i64; 3];
        for (r, row) in m.iter().enumerate() {
            num[r] = row[0] * v.num[0] + row[1] * v.num[1] + row[2] * v.num[2];
        }
        Ok(RationalVec3::new(num, den * v.den))
    }

    /// Floating-point image of a unit vector under `v ↦ q v q⁻¹`.
    pub fn rotate(&self, v: &UnitVector3) -> Result<UnitVector3> {
        let m = self.rotation_matrix()?;
        let out = apply(&m, v.xyz());
        let exact = match &v.exact {
            Some(r) => Some(self.rotate_exact(r)?),
            None => None,
        };
        Ok(UnitVector3 { x: out[0], y: out[1], z: out[2], exact })
    }

    pub fn to_real(&self) -> RealQuaternion {
        RealQuaternion::new(self.da as f64 / 2.0, self.db as f64 / 2.0, self.dc as f64 / 2.0, self.dd as f64 / 2.0)
    }
}

impl Mul for HurwitzQuaternion {
    type Output = Self;

    fn mul(self, q: Self) -> Self {
        let p = self;
        // Hamilton product of doubled coordinates is 4·pq; halve to get 2·pq.
        let w = p.da * q.da - p.db * q.db - p.dc * q.dc - p.dd * q.dd;
        let x = p.da * q.db + p.db * q.da + p.dc * q.dd - p.dd * q.dc;
        let y = p.da * q.dc - p.db * q.dd + p.dc * q.da + p.dd * q.db;
        let z = p.da * q.dd + p.db * q.dc - p.dc * q.db + p.dd * q.da;
        debug_assert!(w % 2 == 0 && x % 2 == 0 && y % 2 == 0 && z % 2 == 0);
        Self { da: w / 2, db: x / 2, dc: y / 2, dd: z / 2 }
    }
}

impl Neg for HurwitzQuaternion {
    type Output = Self;

    fn neg(self) -> Self {
        Self { da: -self.da, db: -self.db, dc: -self.dc, dd: -self.dd }
    }
}

impl fmt::Display for HurwitzQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_lipschitz() {
            write!(f, "{}+{}i+{}j+{}k", self.da / 2, self.db / 2, self.dc / 2, self.dd / 2)
        } else {
            write!(f, "({}+{}i+{}j+{}k)/2", self.da, self.db, self.dc, self.dd)
        }
    }
}

/// The 24 units: ±1, ±i, ±j, ±k and (±1±i±j±k)/2.
pub fn units() -> Vec<HurwitzQuaternion> {
    enumerate_norm(1)
}

/// Every element of reduced norm `n`, sorted.
///
/// Scans the box `|2a|,|2b|,|2c|,|2d| ≤ 2√n` for each parity class, solving for
/// the last coordinate instead of looping over it.
pub fn enumerate_norm(n: u64) -> Vec<HurwitzQuaternion> {
    let target = 4 * n as i64;
    let bound = isqrt(target as u64) as i64;
    let mut out = Vec::new();
    for parity in 0..2i64 {
        let start = if parity == 0 { -(bound - bound % 2) } else { -(bound - (bound + 1) % 2) };
        let mut a = start;
        while a <= bound {
            let ra = target - a * a;
            let mut b = start;
            while b <= bound {
                let rb = ra - b * b;
                if rb < 0 {
                    b += 2;
                    continue;
                }
                let mut c = start;
                while c <= bound {
                    let rc = rb - c * c;
                    if rc >= 0 {
                        let d = isqrt(rc as u64) as i64;
                        if d * d == rc && d.rem_euclid(2) == parity {
                            out.push(HurwitzQuaternion { da: a, db: b, dc: c, dd: d });
                            if d != 0 {
                                out.push(HurwitzQuaternion { da: a, db: b, dc: c, dd: -d });
                            }
                        }
                    }
                    c += 2;
                }
                b += 2;
            }
            a += 2;
        }
    }
    out.sort();
    out
}

/// One representative for each left coset `O^× γ` inside `O(n)`, for odd `n`.
///
/// Each such coset holds exactly eight Lipschitz elements, related by the
/// signed coordinate permutations `γ ↦ ±1·γ, ±i·γ, ±j·γ, ±k·γ`. The
/// representative is the Lipschitz element whose odd-one-out parity coordinate
/// sits in the real part, with the first nonzero coordinate positive.
pub fn left_coset_reps(n: u64) -> Result<Vec<HurwitzQuaternion>> {
    if n.is_multiple_of(2) {
        return Err(Error::Domain(format!("left coset representatives need odd n, got {n}")));
    }
    // n ≡ 1 (mod 4): one odd coordinate; n ≡ 3 (mod 4): one even coordinate.
    let real_parity = if n % 4 == 1 { 1 } else { 0 };
    let n = n as i64;
    let bound = isqrt(n as u64) as i64;
    let mut out = Vec::new();
    for a in 0..=bound {
        if a.rem_euclid(2) != real_parity {
            continue;
        }
        for b in -bound..=bound {
            let rb = n - a * a - b * b;
            if rb < 0 {
                continue;
            }
            for c in -bound..=bound {
                let rc = rb - c * c;
                if rc < 0 {
                    continue;
                }
                let d = isqrt(rc as u64) as i64;
                if d * d != rc {
                    continue;
                }
                for d in if d == 0 { vec![0] } else { vec![d, -d] } {
                    let q = HurwitzQuaternion::lipschitz(a, b, c, d);
                    let first = q.doubled().into_iter().find(|&x| x != 0).unwrap_or(0);
                    if first > 0 {
                        out.push(q);
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// The twelve distinct rotations induced by the units, as integer signed permutation matrices.
pub fn unit_rotations() -> Vec<[[i64; 3]; 3]> {
    let mut mats: Vec<[[i64; 3]; 3]> = units()
        .iter()
        .map(|u| {
            let (m, den) = u.rotation_numerator().expect("unit is nonzero");
            m.map(|row| row.map(|e| e / den))
        })
        .collect();
    mats.sort();
    mats.dedup();
    mats
}

/// Divisor sum `σ(n)`.
pub fn sigma(n: u64) -> u64 {
    let mut s = 0;
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += d;
            if d * d != n {
                s += n / d;
            }
        }
        d += 1;
    }
    s
}

pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub(crate) fn apply(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A rational vector `num / den` with `den > 0` and the fraction reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalVec3 {
    pub num: [i64; 3],
    pub den: i64,
}

impl RationalVec3 {
    pub fn new(num: [i64; 3], den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let s = den.signum();
        let g = gcd(gcd(gcd(num[0], num[1]), num[2]), den).max(1);
        Self { num: num.map(|x| s * x / g), den: s * den / g }
    }

    pub fn integer(v: [i64; 3]) -> Self {
        Self::new(v, 1)
    }

    pub fn to_f64(&self) -> [f64; 3] {
        self.num.map(|x| x as f64 / self.den as f64)
    }
}

/// A point of S², optionally carrying an exact rational form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitVector3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact: Option<RationalVec3>,
}

impl UnitVector3 {
    /// Normalize a nonzero vector.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let r = (x * x + y * y + z * z).sqrt();
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::Domain("cannot normalize a zero or non-finite vector".into()));
        }
        Ok(Self { x: x / r, y: y / r, z: z / r, exact: None })
    }

    /// A unit vector with rational coordinates; rejects vectors not of norm one.
    pub fn from_rational(r: RationalVec3) -> Result<Self> {
        let s: i64 = r.num.iter().map(|x| x * x).sum();
        if s != r.den * r.den {
            return Err(Error::Domain(format!("{:?} is not a unit vector", r)));
        }
        let [x, y, z] = r.to_f64();
        Ok(Self { x, y, z, exact: Some(r) })
    }

    pub fn xyz(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// A real quaternion `w + xi + yj + zk`, used for non-integral rotations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealQuaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl RealQuaternion {
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);

    pub fn conjugate(&self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sq(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn inverse(&self) -> Self {
        let n = self.norm_sq();
        let c = self.conjugate();
        Self::new(c.w / n, c.x / n, c.y / n, c.z / n)
    }

    /// Matrix of `v ↦ q v q⁻¹`.
    pub fn rotation_matrix(&self) -> [[f64; 3]; 3] {
        let (a, b, c, d) = (self.w, self.x, self.y, self.z);
        let n = self.norm_sq();
        [
            [(a * a + b * b - c * c - d * d) / n, 2.0 * (b * c - a * d) / n, 2.0 * (b * d + a * c) / n],
            [2.0 * (b * c + a * d) / n, (a * a - b * b + c * c - d * d) / n, 2.0 * (c * d - a * b) / n],
            [2.0 * (b * d - a * c) / n, 2.0 * (c * d + a * b) / n, (a * a - b * b - c * c + d * d) / n],
        ]
    }

    pub fn rotate(&self, v: [f64; 3]) -> [f64; 3] {
        apply(&self.rotation_matrix(), v)
    }
}

impl Mul for RealQuaternion {
    type Output = Self;

    fn mul(self, q: Self) -> Self {
        let p = self;
        Self::new(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )
    }
}

/// Lexicographic comparison of integer triples, used for orbit representatives.
pub fn lex_cmp(a: &[i64; 3], b: &[i64; 3]) -> Ordering {
    a.cmp(b)
}
