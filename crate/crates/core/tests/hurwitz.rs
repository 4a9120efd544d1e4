use std::collections::HashSet;

use proptest::prelude::*;
use sphere_hecke::hurwitz::*;

fn brute_norm(n: i64) -> HashSet<[i64; 4]> {
    let b = 2 * ((n as f64).sqrt() as i64 + 1);
    let mut out = HashSet::new();
    for a in -b..=b {
        for c1 in -b..=b {
            for c2 in -b..=b {
                for c3 in -b..=b {
                    let p = a.rem_euclid(2);
                    if c1.rem_euclid(2) != p || c2.rem_euclid(2) != p || c3.rem_euclid(2) != p {
                        continue;
                    }
                    if a * a + c1 * c1 + c2 * c2 + c3 * c3 == 4 * n {
                        out.insert([a, c1, c2, c3]);
                    }
                }
            }
        }
    }
    out
}

/// Jacobi: `r₄(n) = 8σ(n)` Lipschitz elements for odd `n`; Hurwitz adds `16σ(n)`
/// half-integral ones. Counted here per divisor.
fn jacobi_count(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| 24 * d).sum()
}

#[test]
fn small_norms() {
    assert_eq!(units().len(), 24);
    assert_eq!(enumerate_norm(3).len(), 96);
    assert_eq!(enumerate_norm(5).len(), 144);
    let h = HurwitzQuaternion::from_doubled(1, 1, 1, 1).unwrap();
    assert_eq!(h.nrd(), 1);
    assert!(HurwitzQuaternion::from_doubled(1, 2, 1, 1).is_err());
}

#[test]
fn enumeration_matches_box_scan() {
    for n in 1..=24 {
        let got: HashSet<[i64; 4]> = enumerate_norm(n).iter().map(|q| q.doubled()).collect();
        assert_eq!(got, brute_norm(n as i64), "n = {n}");
    }
}

#[test]
fn odd_counts_follow_divisor_sums() {
    for n in (1..=50u64).step_by(2) {
        let c = enumerate_norm(n).len() as u64;
        assert_eq!(c, 24 * sigma(n));
        assert_eq!(c, jacobi_count(n));
        let lip = enumerate_norm(n).iter().filter(|q| q.is_lipschitz()).count() as u64;
        assert_eq!(lip, 8 * sigma(n));
    }
}

#[test]
fn quaternion_rules() {
    use HurwitzQuaternion as H;
    assert_eq!(H::I * H::J, H::K);
    assert_eq!(H::J * H::I, -H::K);
    let a = H::lipschitz(1, 1, 0, 0);
    let b = H::lipschitz(1, 0, 1, 0);
    assert_eq!(a.nrd(), 2);
    assert_eq!((a * b).nrd(), 4);
    for q in enumerate_norm(7) {
        assert_eq!(q * q.conjugate(), H::lipschitz(q.nrd(), 0, 0, 0));
        assert_eq!(q.trd(), q.doubled()[0]);
    }
}

#[test]
fn units_form_a_group() {
    let u = units();
    let set: HashSet<_> = u.iter().copied().collect();
    for a in &u {
        assert!(set.contains(&a.conjugate()));
        for b in &u {
            assert!(set.contains(&(*a * *b)));
        }
    }
    for s in 0..16 {
        let sg = |k: i32| if s >> k & 1 == 1 { -1 } else { 1 };
        let q = HurwitzQuaternion::from_doubled(sg(0), sg(1), sg(2), sg(3)).unwrap();
        assert!(set.contains(&q));
    }
}

#[test]
fn norm_sets_are_unit_stable() {
    for n in [2u64, 3, 9, 15] {
        let set: HashSet<_> = enumerate_norm(n).into_iter().collect();
        for u in units() {
            for q in &set {
                assert!(set.contains(&(u * *q)));
            }
        }
    }
}

#[test]
fn coset_representatives_cover() {
    for n in (1..=45u64).step_by(2) {
        let reps = left_coset_reps(n).unwrap();
        assert_eq!(reps.len() as u64, sigma(n));
        let mut seen = HashSet::new();
        for r in &reps {
            for u in units() {
                assert!(seen.insert(u * *r), "cosets overlap at n = {n}");
            }
        }
        let all: HashSet<_> = enumerate_norm(n).into_iter().collect();
        assert_eq!(seen, all);
    }
    assert!(left_coset_reps(4).is_err());
}

#[test]
fn rotation_examples() {
    let v = UnitVector3::from_rational(RationalVec3::new([2, 3, 6], 7)).unwrap();
    let r = HurwitzQuaternion::I.rotate(&v).unwrap();
    assert_eq!(r.exact.unwrap(), RationalVec3::new([2, -3, -6], 7));
    let w = HurwitzQuaternion::from_doubled(1, 1, 1, 1).unwrap();
    assert_eq!(w.rotate_exact(&RationalVec3::new([2, 3, 6], 7)).unwrap(), RationalVec3::new([6, 2, 3], 7));
    let id = HurwitzQuaternion::ONE.rotate(&v).unwrap();
    assert!((id.x - v.x).abs() + (id.y - v.y).abs() + (id.z - v.z).abs() < 1e-15);
    assert!(HurwitzQuaternion::from_doubled(0, 0, 0, 0).unwrap().rotate(&v).is_err());
    assert_eq!(unit_rotations().len(), 12);
}

fn hq() -> impl Strategy<Value = HurwitzQuaternion> {
    (any::<bool>(), [-20i64..20, -20..20, -20..20, -20..20]).prop_map(|(half, c)| {
        let s = if half { 1 } else { 0 };
        HurwitzQuaternion::from_doubled(2 * c[0] + s, 2 * c[1] + s, 2 * c[2] + s, 2 * c[3] + s).unwrap()
    })
}

fn det(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn nrd_is_multiplicative(p in hq(), q in hq()) {
        prop_assert_eq!((p * q).nrd(), p.nrd() * q.nrd());
        prop_assert_eq!((p * q).conjugate(), q.conjugate() * p.conjugate());
    }

    #[test]
    fn rotations_are_orthogonal(q in hq(), a in -1.0f64..1.0, b in -1.0f64..1.0, c in 0.1f64..1.0) {
        prop_assume!(!q.is_zero());
        let e1 = UnitVector3::new(a, b, c).unwrap();
        let t = UnitVector3::new(-b, a, 0.0).or_else(|_| UnitVector3::new(1.0, 0.0, 0.0)).unwrap();
        let x = e1.xyz();
        let tt = t.xyz();
        let dot = x[0] * tt[0] + x[1] * tt[1] + x[2] * tt[2];
        let e2 = UnitVector3::new(tt[0] - dot * x[0], tt[1] - dot * x[1], tt[2] - dot * x[2]).unwrap();
        let y = e2.xyz();
        let e3 = UnitVector3::new(x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]).unwrap();
        let img = [e1, e2, e3].map(|e| q.rotate(&e).unwrap().xyz());
        for i in 0..3 {
            for j in 0..3 {
                let d: f64 = (0..3).map(|k| img[i][k] * img[j][k]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((d - want).abs() < 1e-12);
            }
        }
        prop_assert!((det(img) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_rotation_preserves_norm(q in hq(), v in [-30i64..30, -30..30, -30..30]) {
        prop_assume!(!q.is_zero() && v != [0, 0, 0]);
        let r = q.rotate_exact(&RationalVec3::integer(v)).unwrap();
        let n2 = |u: [i64; 3]| (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]) as i128;
        prop_assert_eq!(n2(r.num) , n2(v) * (r.den as i128).pow(2));
    }
}
