//! Lattice points on spheres, class numbers of imaginary quadratic fields, and
//! the geodesic families `C_D` on `O^× \ S²`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hurwitz::{isqrt, unit_rotations, RealQuaternion, UnitVector3};

/// A negative fundamental discriminant with `D ≢ 1 (mod 8)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discriminant {
    pub d: i64,
    pub n_d: i64,
}

impl Discriminant {
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 || !is_fundamental(d) {
            return Err(Error::Discriminant { d, reason: "not a negative fundamental discriminant".into() });
        }
        if d.rem_euclid(8) == 1 {
            return Err(Error::Discriminant { d, reason: "D ≡ 1 (mod 8) has no points on the sphere".into() });
        }
        Ok(Self { d, n_d: n_of(d) })
    }

    pub fn is_even(&self) -> bool {
        self.d % 2 == 0
    }

    /// 1 if `D ≡ 0 (mod 4)`, 2 if `D ≡ 5 (mod 8)`.
    pub fn c_d(&self) -> u32 {
        if self.d.rem_euclid(4) == 0 {
            1
        } else {
            2
        }
    }
}

/// `−D/4` if `4 | D`, else `−D`.
pub fn n_of(d: i64) -> i64 {
    if d % 4 == 0 {
        -d / 4
    } else {
        -d
    }
}

pub fn is_squarefree(n: i64) -> bool {
    let n = n.abs();
    let mut p = 2;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    n != 0
}

/// Fundamental discriminants: `D ≡ 1 (mod 4)` squarefree, or `D = 4m` with
/// `m ≡ 2, 3 (mod 4)` squarefree.
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    }
}

/// `E(n) = {(x, y, z) ∈ Z³ : x² + y² + z² = n}`, sorted.
pub fn enumerate_e(n: i64) -> Vec<[i64; 3]> {
    if n < 0 {
        return Vec::new();
    }
    let b = isqrt(n as u64) as i64;
    let mut out = Vec::new();
    for x in -b..=b {
        for y in -b..=b {
            let r = n - x * x - y * y;
            if r < 0 {
                continue;
            }
            let z = isqrt(r as u64) as i64;
            if z * z == r {
                out.push([x, y, -z]);
                if z != 0 {
                    out.push([x, y, z]);
                }
            }
        }
    }
    out.sort();
    out
}

/// A reduced binary quadratic form `ax² + bxy + cy²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassData {
    pub d: i64,
    pub h: u32,
    /// `None` for `D ≡ 1 (mod 8)`, where no geodesic family exists.
    pub c_d: Option<u32>,
    pub forms: Vec<Form>,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Class number by counting reduced primitive forms of discriminant `D`.
pub fn class_number(d: i64) -> Result<ClassData> {
    if d >= 0 || !is_fundamental(d) {
        return Err(Error::Discriminant { d, reason: "not a negative fundamental discriminant".into() });
    }
    let mut forms = Vec::new();
    // a ≤ √(|D|/3) for reduced forms
    let amax = isqrt((-d / 3) as u64) as i64 + 1;
    for a in 1..=amax {
        for b in -a..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            if (b.abs() == a || a == c) && b < 0 {
                continue;
            }
            if gcd(gcd(a, b), c) != 1 {
                continue;
            }
            forms.push(Form { a, b, c });
        }
    }
    let c_d = if d.rem_euclid(8) == 1 { None } else { Some(if d.rem_euclid(4) == 0 { 1 } else { 2 }) };
    Ok(ClassData { d, h: forms.len() as u32, c_d, forms })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussReport {
    #[serde(rename = "D")]
    pub d: i64,
    pub n: i64,
    pub r3: u64,
    pub h: u32,
    /// 12 or 24.
    pub multiplier: u64,
    /// `None` when the hypotheses fail and the comparison is only observational.
    pub holds: Option<bool>,
    pub note: String,
}

/// Compare `r₃(n_D)` with `12h_D` (`n ≡ 1, 2 mod 4`) or `24h_D` (`n ≡ 3 mod 8`).
pub fn verify_gauss(d: i64) -> Result<GaussReport> {
    let disc = Discriminant::new(d)?;
    let n = disc.n_d;
    let h = class_number(d)?.h;
    let r3 = enumerate_e(n).len() as u64;
    let multiplier = if n.rem_euclid(8) == 3 { 24 } else { 12 };
    let applies = n > 4 && is_squarefree(n) && n.rem_euclid(8) != 7;
    let equal = r3 == multiplier * h as u64;
    let (holds, note) = if applies {
        (Some(equal), String::new())
    } else {
        (None, format!("hypotheses fail for n = {n}; r3 = {multiplier}·h is {equal} (observational)"))
    };
    Ok(GaussReport { d, n, r3, h, multiplier, holds, note })
}

/// All fundamental `D < 0`, `D ≢ 1 (mod 8)`, with `lo < n_D ≤ hi`.
pub fn discriminants_in(lo: i64, hi: i64) -> Vec<i64> {
    (1..=4 * hi)
        .map(|k| -k)
        .filter(|&d| is_fundamental(d) && d.rem_euclid(8) != 1)
        .filter(|&d| {
            let n = n_of(d);
            n > lo && n <= hi
        })
        .collect()
}

/// Orbits of `E(n_D)` under the unit rotations, each sorted, ordered by representative.
pub fn orbits(d: i64) -> Result<Vec<Vec<[i64; 3]>>> {
    let disc = Discriminant::new(d)?;
    Ok(orbits_of_points(&enumerate_e(disc.n_d)))
}

pub fn orbits_of_points(points: &[[i64; 3]]) -> Vec<Vec<[i64; 3]>> {
    let rots = unit_rotations();
    let mut remaining: BTreeSet<[i64; 3]> = points.iter().copied().collect();
    let mut out = Vec::new();
    while let Some(&start) = remaining.iter().next() {
        let mut orbit = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(p) = stack.pop() {
            if !orbit.insert(p) {
                continue;
            }
            for m in &rots {
                let q = [
                    m[0][0] * p[0] + m[0][1] * p[1] + m[0][2] * p[2],
                    m[1][0] * p[0] + m[1][1] * p[1] + m[1][2] * p[2],
                    m[2][0] * p[0] + m[2][1] * p[1] + m[2][2] * p[2],
                ];
                if !orbit.contains(&q) {
                    stack.push(q);
                }
            }
        }
        for p in &orbit {
            remaining.remove(p);
        }
        out.push(orbit.into_iter().collect());
    }
    out
}

/// A unit quaternion `κ` with `κ·μ̂ = i`, built by axis and angle.
pub fn pole_to_rotation(mu: &UnitVector3) -> RealQuaternion {
    let m = mu.xyz();
    let cos_t = m[0].clamp(-1.0, 1.0);
    // axis μ̂ × i = (0, m_z, −m_y)
    let axis = [0.0, m[2], -m[1]];
    let s = (axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if s < 1e-15 {
        return if cos_t > 0.0 { RealQuaternion::ONE } else { RealQuaternion::new(0.0, 0.0, 0.0, 1.0) };
    }
    let t = cos_t.acos();
    let (h_s, h_c) = (t / 2.0).sin_cos();
    RealQuaternion::new(h_c, 0.0, h_s * axis[1] / s, h_s * axis[2] / s)
}

/// Ratio of the length of the projected geodesic to `2π`, read off the pole.
///
/// The projection has length `2π/|H|` with `H` the unit rotations that fix
/// the pole up to sign. Two zero entries give `H` of order 4, one zero entry
/// order 2, all absolute values equal order 3, anything else order 1.
pub fn length_factor(pole: [i64; 3]) -> f64 {
    let zeros = pole.iter().filter(|&&x| x == 0).count();
    let a = pole.map(|x| x.abs());
    match zeros {
        2 => 0.25,
        1 => 0.5,
        _ if a[0] == a[1] && a[1] == a[2] => 1.0 / 3.0,
        _ => 1.0,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Geodesic {
    pub pole: [i64; 3],
    pub unit: UnitVector3,
    pub kappa: RealQuaternion,
    pub length_factor: f64,
    pub orbit: usize,
    pub orbit_size: usize,
}

impl Geodesic {
    pub fn new(pole: [i64; 3], orbit: usize, orbit_size: usize) -> Result<Self> {
        let unit = UnitVector3::new(pole[0] as f64, pole[1] as f64, pole[2] as f64)?;
        let kappa = pole_to_rotation(&unit);
        Ok(Self { pole, unit, kappa, length_factor: length_factor(pole), orbit, orbit_size })
    }

    /// `θ ↦ κ⁻¹·(e^{iθ} k)`; `e^{iθ}k` is the pure quaternion `(0, −sin θ, cos θ)`.
    pub fn point(&self, theta: f64) -> [f64; 3] {
        let (s, c) = theta.sin_cos();
        self.kappa.inverse().rotate([0.0, -s, c])
    }

    /// Rotation matrix of `κ⁻¹`.
    pub fn inverse_matrix(&self) -> [[f64; 3]; 3] {
        self.kappa.inverse().rotation_matrix()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeodesicFamily {
    pub d: i64,
    pub n_d: i64,
    pub h_d: u32,
    pub c_d: u32,
    pub geodesics: Vec<Geodesic>,
}

/// One geodesic per orbit of `Ê(n_D)`; the pole is the lexicographically
/// smallest point of its orbit.
pub fn build_family(d: i64) -> Result<GeodesicFamily> {
    let disc = Discriminant::new(d)?;
    let class = class_number(d)?;
    let orbs = orbits(d)?;
    let geodesics =
        orbs.iter().enumerate().map(|(k, o)| Geodesic::new(o[0], k, o.len())).collect::<Result<Vec<_>>>()?;
    Ok(GeodesicFamily { d, n_d: disc.n_d, h_d: class.h, c_d: disc.c_d(), geodesics })
}

/// JSON view of a family: `{D, n_D, h_D, c_D, orbits: [{pole, length_factor}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyRecord {
    #[serde(rename = "D")]
    pub d: i64,
    #[serde(rename = "n_D")]
    pub n_d: i64,
    #[serde(rename = "h_D")]
    pub h_d: u32,
    #[serde(rename = "c_D")]
    pub c_d: u32,
    pub orbits: Vec<OrbitRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub pole: [i64; 3],
    pub length_factor: f64,
}

impl From<&GeodesicFamily> for FamilyRecord {
    fn from(f: &GeodesicFamily) -> Self {
        Self {
            d: f.d,
            n_d: f.n_d,
            h_d: f.h_d,
            c_d: f.c_d,
            orbits: f.geodesics.iter().map(|g| OrbitRecord { pole: g.pole, length_factor: g.length_factor }).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_numbers() {
        for (d, h) in [(-4, 1), (-8, 1), (-20, 2), (-24, 2), (-43, 1), (-3, 1), (-23, 3), (-56, 4)] {
            assert_eq!(class_number(d).unwrap().h, h, "D = {d}");
        }
        assert!(class_number(-12).is_err());
        assert!(Discriminant::new(-7).is_err());
    }

    #[test]
    fn small_families() {
        let f = build_family(-8).unwrap();
        assert_eq!(f.geodesics.len(), 1);
        assert_eq!(f.geodesics[0].pole, [-1, -1, 0]);
        assert_eq!(f.geodesics[0].length_factor, 0.5);
        assert_eq!(build_family(-20).unwrap().geodesics.len(), 2);
    }

    #[test]
    fn rotation_takes_pole_to_i() {
        for v in [[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.2, -0.3, 0.9]] {
            let mu = UnitVector3::new(v[0], v[1], v[2]).unwrap();
            let r = pole_to_rotation(&mu).rotate(mu.xyz());
            assert!((r[0] - 1.0).abs() < 1e-14 && r[1].abs() < 1e-14 && r[2].abs() < 1e-14, "{v:?}");
        }
    }
}
