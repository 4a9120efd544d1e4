//! The O^×-invariant subspace of H_ℓ, Hecke operators `T_n` on it, and the
//! joint Hecke eigenbasis.
//!
//! `(T_n f)(z) = (1/24) Σ_{γ ∈ O(n)} f(γ·z)`, with `γ·z = γ z γ⁻¹`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::{pairwise_sum, HarmonicEvaluator, QuadratureGrid, SphericalFunction};
use crate::hurwitz::{apply, enumerate_norm, left_coset_reps, unit_rotations};

/// Eigenvalue gap below which labels count as clustered.
pub const TIE_GAP: f64 = 1e-6;
/// Operators tried in turn to split clustered eigenvalues.
pub const TIE_LADDER: [u64; 5] = [3, 5, 7, 11, 13];

/// How the sum over `O(n)` is carried out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SumMode {
    /// All `24σ(n)` elements, weighted `1/24`.
    Full,
    /// One element per left coset `O^× γ`, weight 1. Equal to `Full` on invariant functions.
    Cosets,
}

/// Orthonormal basis of `H_ℓ^{O×}`, as columns over the normalized basis of `H_ℓ`.
#[derive(Clone, Debug)]
pub struct InvariantBasis {
    pub ell: usize,
    pub vectors: DMatrix<f64>,
}

impl InvariantBasis {
    pub fn dim(&self) -> usize {
        self.vectors.ncols()
    }
}

/// `T_n` restricted to the invariant subspace.
#[derive(Clone, Debug)]
pub struct HeckeMatrix {
    pub n: u64,
    pub entries: DMatrix<f64>,
}

/// A joint Hecke eigenfunction with its eigenvalues.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HeckeEigenfunction {
    pub ell: usize,
    pub coeffs: Vec<f64>,
    /// `(n, λ_ψ(n))` pairs, sorted by `n`.
    pub eigenvalues: Vec<(u64, f64)>,
    /// `(n, ‖T_n ψ − λ ψ‖)` pairs.
    pub residuals: Vec<(u64, f64)>,
}

impl HeckeEigenfunction {
    pub fn lambda(&self, n: u64) -> Option<f64> {
        self.eigenvalues.iter().find(|(m, _)| *m == n).map(|(_, l)| *l)
    }

    pub fn function(&self) -> SphericalFunction {
        SphericalFunction { degree: self.ell, coeffs: self.coeffs.clone() }
    }
}

/// Rotation matrices of the elements used for `T_n`, with their common weight.
pub fn hecke_rotations(n: u64, mode: SumMode) -> Result<(Vec<[[f64; 3]; 3]>, f64)> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::Domain(format!("Hecke operators are built for odd n, got {n}")));
    }
    let (elems, w) = match mode {
        SumMode::Full => (enumerate_norm(n), 1.0 / 24.0),
        SumMode::Cosets => (left_coset_reps(n)?, 1.0),
    };
    let mats = elems.iter().map(|q| q.rotation_matrix()).collect::<Result<Vec<_>>>()?;
    Ok((mats, w))
}

/// Quadrature data for one degree: grid, evaluator and basis values at the nodes.
#[derive(Clone, Debug)]
pub struct DegreeContext {
    pub ell: usize,
    pub grid: QuadratureGrid,
    pub eval: HarmonicEvaluator,
    /// `nodes × (2ℓ+1)` basis values at the grid nodes.
    pub values: DMatrix<f64>,
}

impl DegreeContext {
    pub fn new(ell: usize) -> Self {
        let grid = QuadratureGrid::new(ell);
        let eval = HarmonicEvaluator::new(ell);
        let mut values = DMatrix::zeros(grid.len(), eval.dim());
        let mut buf = vec![0.0; eval.dim()];
        for (r, p) in grid.points.iter().enumerate() {
            eval.eval_all(*p, &mut buf);
            for (c, v) in buf.iter().enumerate() {
                values[(r, c)] = *v;
            }
        }
        Self { ell, grid, eval, values }
    }

    /// `nodes × k` values of `Σ_γ w·f_c(R_γ x)` for the columns `f_c` of
    /// `coeffs`, or for every basis function when `coeffs` is `None`.
    pub fn averaged_values(&self, rots: &[[[f64; 3]; 3]], w: f64, coeffs: Option<&DMatrix<f64>>) -> DMatrix<f64> {
        let dim = self.eval.dim();
        let k = coeffs.map_or(dim, |c| c.ncols());
        let rows: Vec<Vec<f64>> = self
            .grid
            .points
            .par_iter()
            .map_init(
                || (vec![0.0; dim], vec![0.0; dim]),
                |(buf, sum), p| {
                    sum.iter_mut().for_each(|s| *s = 0.0);
                    for r in rots {
                        self.eval.eval_all(apply(r, *p), buf);
                        for (s, b) in sum.iter_mut().zip(buf.iter()) {
                            *s += b;
                        }
                    }
                    match coeffs {
                        None => sum.iter().map(|s| s * w).collect(),
                        Some(c) => (0..k)
                            .map(|j| w * c.column(j).iter().zip(sum.iter()).map(|(a, b)| a * b).sum::<f64>())
                            .collect(),
                    }
                },
            )
            .collect();
        DMatrix::from_fn(rows.len(), k, |r, c| rows[r][c])
    }

    /// `⟨f_i, g_j⟩` for node-value matrices `f` (nodes × a) and `g` (nodes × b).
    pub fn gram(&self, f: &DMatrix<f64>, g: &DMatrix<f64>) -> DMatrix<f64> {
        DMatrix::from_fn(f.ncols(), g.ncols(), |i, j| {
            let terms: Vec<f64> = (0..f.nrows()).map(|r| self.grid.weights[r] * f[(r, i)] * g[(r, j)]).collect();
            pairwise_sum(&terms)
        })
    }

    /// Node values of the columns of `coeffs`.
    pub fn values_of(&self, coeffs: &DMatrix<f64>) -> DMatrix<f64> {
        &self.values * coeffs
    }
}

/// `dim H_ℓ^{O×}` from the character of the rotation group of the units.
///
/// Classes: identity (1), rotations by `2π/3` (8), half turns (3), with
/// `χ_ℓ(t) = sin((2ℓ+1)t/2) / sin(t/2)`.
pub fn invariant_dimension(ell: usize) -> usize {
    let l = ell as f64;
    let chi = |t: f64| ((2.0 * l + 1.0) * t / 2.0).sin() / (t / 2.0).sin();
    let total = (2.0 * l + 1.0) + 8.0 * chi(2.0 * std::f64::consts::PI / 3.0) + 3.0 * chi(std::f64::consts::PI);
    (total / 12.0).round() as usize
}

/// Invariant subspace from the unit-averaging projector.
pub fn invariant_subspace(ell: usize) -> InvariantBasis {
    invariant_subspace_in(&DegreeContext::new(ell))
}

pub fn invariant_subspace_in(ctx: &DegreeContext) -> InvariantBasis {
    let dim = ctx.eval.dim();
    let rots: Vec<[[f64; 3]; 3]> = unit_rotations().iter().map(|m| m.map(|row| row.map(|e| e as f64))).collect();
    let avg = ctx.averaged_values(&rots, 1.0 / rots.len() as f64, None);
    let p = ctx.gram(&ctx.values, &avg);
    let p = (&p + p.transpose()) * 0.5;
    let eig = SymmetricEigen::new(p);
    let mut cols: Vec<DVector<f64>> = Vec::new();
    let mut idx: Vec<usize> = (0..dim).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    for i in idx {
        let mut v: DVector<f64> = eig.eigenvectors.column(i).into_owned();
        fix_sign(&mut v);
        cols.push(v);
    }
    let vectors = if cols.is_empty() { DMatrix::zeros(dim, 0) } else { DMatrix::from_columns(&cols) };
    InvariantBasis { ell: ctx.ell, vectors }
}

/// Make the largest-magnitude entry positive (first one on ties).
fn fix_sign(v: &mut DVector<f64>) {
    let mut best = 0;
    for i in 0..v.len() {
        if v[i].abs() > v[best].abs() + 1e-12 {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.neg_mut();
    }
}

/// Hecke operators on one `H_ℓ^{O×}`.
#[derive(Clone, Debug)]
pub struct HeckeSpace {
    pub ctx: DegreeContext,
    pub basis: InvariantBasis,
    /// Node values of the invariant basis.
    inv_values: DMatrix<f64>,
}

impl HeckeSpace {
    pub fn new(ell: usize) -> Self {
        let ctx = DegreeContext::new(ell);
        let basis = invariant_subspace_in(&ctx);
        let inv_values = ctx.values_of(&basis.vectors);
        Self { ctx, basis, inv_values }
    }

    pub fn ell(&self) -> usize {
        self.ctx.ell
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// `T_n` on the invariant basis: entry `(i, j) = ⟨T_n b_j, b_i⟩`.
    pub fn matrix(&self, n: u64, mode: SumMode) -> Result<HeckeMatrix> {
        let (rots, w) = hecke_rotations(n, mode)?;
        self.matrix_from_rotations(n, &rots, w)
    }

    pub fn matrix_from_rotations(&self, n: u64, rots: &[[[f64; 3]; 3]], w: f64) -> Result<HeckeMatrix> {
        if self.dim() == 0 {
            return Err(Error::Domain(format!("invariant subspace of degree {} is empty", self.ell())));
        }
        let img = self.ctx.averaged_values(rots, w, Some(&self.basis.vectors));
        let entries = self.ctx.gram(&self.inv_values, &img);
        Ok(HeckeMatrix { n, entries })
    }

    /// Size of the part of `T_n b` lying outside `H_ℓ`, for each ambient basis
    /// function `b`, measured on a grid of twice the degree.
    pub fn laplace_residuals(&self, n: u64, mode: SumMode) -> Result<Vec<f64>> {
        let (rots, w) = hecke_rotations(n, mode)?;
        let ell = self.ell();
        let fine = QuadratureGrid::new(2 * ell + 1);
        let dim = self.ctx.eval.dim();
        let mut base = DMatrix::<f64>::zeros(fine.len(), dim);
        let mut img = DMatrix::<f64>::zeros(fine.len(), dim);
        let mut buf = vec![0.0; dim];
        for (r, p) in fine.points.iter().enumerate() {
            self.ctx.eval.eval_all(*p, &mut buf);
            for c in 0..dim {
                base[(r, c)] = buf[c];
            }
            for rot in &rots {
                self.ctx.eval.eval_all(apply(rot, *p), &mut buf);
                for c in 0..dim {
                    img[(r, c)] += w * buf[c];
                }
            }
        }
        let mut out = Vec::with_capacity(dim);
        for c in 0..dim {
            let coeffs: Vec<f64> =
                (0..dim).map(|j| (0..fine.len()).map(|r| fine.weights[r] * base[(r, j)] * img[(r, c)]).sum()).collect();
            let res: f64 = (0..fine.len())
                .map(|r| {
                    let proj: f64 = (0..dim).map(|j| coeffs[j] * base[(r, j)]).sum();
                    fine.weights[r] * (img[(r, c)] - proj).powi(2)
                })
                .sum();
            out.push(res.max(0.0).sqrt());
        }
        Ok(out)
    }

    /// Joint eigenbasis: diagonalize `T_3`, split clusters with `T_5, T_7, …`,
    /// then record `λ_ψ(n)` for each `n` in `record`.
    pub fn joint_eigenbasis(&self, mode: SumMode, record: &[u64]) -> Result<Vec<HeckeEigenfunction>> {
        let d = self.dim();
        if d == 0 {
            return Ok(Vec::new());
        }
        let mut mats: Vec<(u64, DMatrix<f64>)> = Vec::new();
        let get = |n: u64, mats: &mut Vec<(u64, DMatrix<f64>)>| -> Result<DMatrix<f64>> {
            if let Some((_, m)) = mats.iter().find(|(k, _)| *k == n) {
                return Ok(m.clone());
            }
            let m = self.matrix(n, mode)?.entries;
            let m = (&m + m.transpose()) * 0.5;
            mats.push((n, m.clone()));
            Ok(m)
        };
        // Each entry: orthonormal columns spanning a cluster, and the ladder rung reached.
        let mut pending = vec![(DMatrix::<f64>::identity(d, d), 0usize)];
        let mut done: Vec<DVector<f64>> = Vec::new();
        while let Some((u, rung)) = pending.pop() {
            if u.ncols() == 1 {
                done.push(u.column(0).into_owned());
                continue;
            }
            if rung >= TIE_LADDER.len() {
                return Err(Error::NonSimpleSpectrum(self.ell()));
            }
            let t = get(TIE_LADDER[rung], &mut mats)?;
            let sub = u.transpose() * &t * &u;
            let sub = (&sub + sub.transpose()) * 0.5;
            let eig = SymmetricEigen::new(sub);
            let mut order: Vec<usize> = (0..u.ncols()).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            let mut start = 0;
            while start < order.len() {
                let mut end = start + 1;
                while end < order.len()
                    && (eig.eigenvalues[order[end]] - eig.eigenvalues[order[end - 1]]).abs() < TIE_GAP
                {
                    end += 1;
                }
                let cols: Vec<DVector<f64>> =
                    order[start..end].iter().map(|&i| &u * eig.eigenvectors.column(i)).collect();
                pending.push((DMatrix::from_columns(&cols), rung + 1));
                start = end;
            }
        }
        let mut record: Vec<u64> = record.to_vec();
        record.sort_unstable();
        record.dedup();
        let mut out = Vec::with_capacity(done.len());
        for v in done {
            let mut amb = &self.basis.vectors * &v;
            let nrm = amb.norm();
            amb /= nrm;
            fix_sign(&mut amb);
            let v = self.basis.vectors.transpose() * &amb;
            let mut eigenvalues = Vec::new();
            let mut residuals = Vec::new();
            for &n in &record {
                let t = get(n, &mut mats)?;
                let tv = &t * &v;
                let lam = v.dot(&tv);
                residuals.push((n, (&tv - &v * lam).norm()));
                eigenvalues.push((n, lam));
            }
            out.push(HeckeEigenfunction {
                ell: self.ell(),
                coeffs: amb.iter().copied().collect(),
                eigenvalues,
                residuals,
            });
        }
        let key = |e: &HeckeEigenfunction| e.lambda(3).unwrap_or(0.0);
        out.sort_by(|a, b| key(a).total_cmp(&key(b)));
        Ok(out)
    }
}

/// Convenience: `T_n` on `H_ℓ^{O×}` using the full sum.
pub fn hecke_matrix(ell: usize, n: u64) -> Result<HeckeMatrix> {
    HeckeSpace::new(ell).matrix(n, SumMode::Full)
}

/// Convenience: joint eigenbasis with `λ_ψ(p)` recorded for `p ≤ 13`.
pub fn joint_eigenbasis(ell: usize) -> Result<Vec<HeckeEigenfunction>> {
    let space = HeckeSpace::new(ell);
    if space.dim() == 0 {
        return Err(Error::Domain(format!("invariant subspace of degree {ell} is empty")));
    }
    space.joint_eigenbasis(SumMode::Full, &[1, 3, 5, 7, 11, 13])
}
