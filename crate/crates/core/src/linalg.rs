//! Small dense symmetric positive-definite kernel.
//!
//! Matrices are stored row-major in flat `Vec<f64>` buffers of length `d * d`.
//! [`PrecisionState`] holds the weighted information matrix
//! `W_t = γ I + Σ ρ(A_s)⁻² φ(A_s) φ(A_s)ᵀ` together with its inverse (kept in
//! sync by Sherman-Morrison), its log-determinant and its minimum eigenpair.

use crate::error::{invalid, Error, Result};

/// Number of rank-1 updates between full recomputations of the cached inverse
/// and log-determinant.
pub const REFRESH_INTERVAL: usize = 256;

/// Absolute asymmetry tolerated by the eigen solver, scaled by `max(1, max|a_ij|)`.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Jacobi stops once the off-diagonal Frobenius mass falls below this
/// fraction of the matrix Frobenius norm.
pub const JACOBI_TOLERANCE: f64 = 1e-12;

const JACOBI_MAX_SWEEPS: usize = 100;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y = A x` for a row-major `n × n` matrix.
pub fn mat_vec(a: &[f64], n: usize, x: &[f64]) -> Vec<f64> {
    (0..n).map(|i| dot(&a[i * n..(i + 1) * n], x)).collect()
}

fn check_square(matrix: &[f64], dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(invalid("matrix dimension must be positive"));
    }
    if matrix.len() != dim * dim {
        return Err(Error::DimensionMismatch {
            expected: dim * dim,
            got: matrix.len(),
        });
    }
    Ok(())
}

/// Largest absolute difference `|a_ij - a_ji|`.
pub fn max_asymmetry(matrix: &[f64], dim: usize) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..dim {
        for j in (i + 1)..dim {
            worst = worst.max((matrix[i * dim + j] - matrix[j * dim + i]).abs());
        }
    }
    worst
}

fn check_symmetric(matrix: &[f64], dim: usize) -> Result<()> {
    let scale = matrix.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let asym = max_asymmetry(matrix, dim);
    if !(asym <= SYMMETRY_TOLERANCE * scale) {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(())
}

/// Lower Cholesky factor `L` with `A = L Lᵀ`.
pub fn cholesky(matrix: &[f64], dim: usize) -> Result<Vec<f64>> {
    check_square(matrix, dim)?;
    let n = dim;
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut diag = matrix[j * n + j];
        for k in 0..j {
            diag -= l[j * n + k] * l[j * n + k];
        }
        if !(diag > 0.0) || !diag.is_finite() {
            return Err(Error::NotPositiveDefinite);
        }
        let ljj = diag.sqrt();
        l[j * n + j] = ljj;
        for i in (j + 1)..n {
            let mut s = matrix[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / ljj;
        }
    }
    Ok(l)
}

/// Inverse and log-determinant of an SPD matrix through its Cholesky factor.
pub fn spd_inverse_logdet(matrix: &[f64], dim: usize) -> Result<(Vec<f64>, f64)> {
    let n = dim;
    let l = cholesky(matrix, dim)?;
    let log_det = 2.0 * (0..n).map(|i| l[i * n + i].ln()).sum::<f64>();

    // L⁻¹ by forward substitution, column by column.
    let mut linv = vec![0.0; n * n];
    for c in 0..n {
        for i in c..n {
            let mut s = if i == c { 1.0 } else { 0.0 };
            for k in c..i {
                s -= l[i * n + k] * linv[k * n + c];
            }
            linv[i * n + c] = s / l[i * n + i];
        }
    }
    // A⁻¹ = L⁻ᵀ L⁻¹, symmetric by construction.
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let s: f64 = (j..n).map(|k| linv[k * n + i] * linv[k * n + j]).sum();
            inv[i * n + j] = s;
            inv[j * n + i] = s;
        }
    }
    Ok((inv, log_det))
}

/// Full eigendecomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub dim: usize,
    /// Eigenvalues in the order Jacobi leaves them (unsorted).
    pub values: Vec<f64>,
    /// Row-major; column `k` is the unit eigenvector of `values[k]`.
    pub vectors: Vec<f64>,
}

impl SymmetricEigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.dim).map(|i| self.vectors[i * self.dim + k]).collect()
    }
}

/// Cyclic Jacobi eigen solver for symmetric matrices.
pub fn symmetric_eigen(matrix: &[f64], dim: usize) -> Result<SymmetricEigen> {
    check_square(matrix, dim)?;
    check_symmetric(matrix, dim)?;
    let n = dim;
    let mut a = matrix.to_vec();
    // Exact symmetry keeps the rotations consistent.
    for i in 0..n {
        for j in (i + 1)..n {
            let m = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = m;
            a[j * n + i] = m;
        }
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tol = JACOBI_TOLERANCE * frob;

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = off_diagonal_norm(&a, n);
        if off <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                } else {
                    0.0
                };
                if t == 0.0 {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&a, n) > tol {
        return Err(Error::Numerical("Jacobi eigen solver did not converge".into()));
    }
    let values = (0..n).map(|i| a[i * n + i]).collect();
    Ok(SymmetricEigen {
        dim: n,
        values,
        vectors: v,
    })
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Index of the largest-magnitude component, lowest index on ties.
fn dominant_index(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    best
}

/// Flip `v` so that its first non-negligible component is positive.
fn canonical_sign(v: &mut [f64]) {
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Smallest eigenvalue and its unit eigenvector.
///
/// Ties between (numerically) equal eigenvalues go to the eigenvector whose
/// dominant coordinate has the lowest index, and the sign is fixed so the
/// first nonzero component is positive.
pub fn min_eigenpair(matrix: &[f64], dim: usize) -> Result<(f64, Vec<f64>)> {
    let eig = symmetric_eigen(matrix, dim)?;
    let lambda_min = eig.values.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = eig.values.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let tie = 1e-12 * spread;

    let mut chosen: Option<(usize, Vec<f64>)> = None;
    for k in 0..dim {
        if eig.values[k] - lambda_min > tie {
            continue;
        }
        let vk = eig.vector(k);
        let idx = dominant_index(&vk);
        match &chosen {
            Some((best, _)) if *best <= idx => {}
            _ => chosen = Some((idx, vk)),
        }
    }
    let (_, mut v) = chosen.ok_or_else(|| Error::Numerical("no eigenvalue found".into()))?;
    let nv = norm2(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    canonical_sign(&mut v);
    Ok((lambda_min, v))
}

/// The weighted information matrix `W_t` and its cached derived quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionState {
    dim: usize,
    w: Vec<f64>,
    w_inv: Vec<f64>,
    log_det: f64,
    min_eigenvalue: f64,
    min_eigenvector: Vec<f64>,
    updates_since_refresh: usize,
}

impl PrecisionState {
    /// `W_1 = γ I_d`.
    pub fn new(dim: usize, gamma: f64) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be at least 1"));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(invalid(format!("ridge penalty must be positive, got {gamma}")));
        }
        let mut w = vec![0.0; dim * dim];
        let mut w_inv = vec![0.0; dim * dim];
        for i in 0..dim {
            w[i * dim + i] = gamma;
            w_inv[i * dim + i] = 1.0 / gamma;
        }
        let mut min_eigenvector = vec![0.0; dim];
        min_eigenvector[0] = 1.0;
        Ok(Self {
            dim,
            w,
            w_inv,
            log_det: dim as f64 * gamma.ln(),
            min_eigenvalue: gamma,
            min_eigenvector,
            updates_since_refresh: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn w_matrix(&self) -> &[f64] {
        &self.w
    }

    pub fn w_inverse(&self) -> &[f64] {
        &self.w_inv
    }

    pub fn log_det(&self) -> f64 {
        self.log_det
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn min_eigenvector(&self) -> &[f64] {
        &self.min_eigenvector
    }

    pub fn updates_since_refresh(&self) -> usize {
        self.updates_since_refresh
    }

    fn check_len(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// `W ← W + weight · φφᵀ`, keeping inverse, log-determinant and the minimum
    /// eigenpair in sync. A zero `φ` leaves the state untouched.
    pub fn rank1_update(&mut self, weight: f64, phi: &[f64]) -> Result<()> {
        self.check_len(phi)?;
        if !(weight > 0.0) || !weight.is_finite() {
            return Err(invalid(format!("update weight must be positive, got {weight}")));
        }
        if phi.iter().all(|x| *x == 0.0) {
            return Ok(());
        }
        let n = self.dim;
        let u = mat_vec(&self.w_inv, n, phi);
        let s = dot(phi, &u).max(0.0);
        let k = weight / (1.0 + weight * s);
        for i in 0..n {
            for j in i..n {
                let inv = self.w_inv[i * n + j] - k * u[i] * u[j];
                self.w_inv[i * n + j] = inv;
                self.w_inv[j * n + i] = inv;
                let w = self.w[i * n + j] + weight * phi[i] * phi[j];
                self.w[i * n + j] = w;
                self.w[j * n + i] = w;
            }
        }
        self.log_det += (weight * s).ln_1p();
        self.updates_since_refresh += 1;
        if self.updates_since_refresh >= REFRESH_INTERVAL {
            self.refresh()?;
        } else {
            self.refresh_eigenpair()?;
        }
        Ok(())
    }

    /// Recompute inverse, log-determinant and eigenpair from `W` directly.
    pub fn refresh(&mut self) -> Result<()> {
        let (inv, log_det) = spd_inverse_logdet(&self.w, self.dim)?;
        self.w_inv = inv;
        self.log_det = log_det;
        self.updates_since_refresh = 0;
        self.refresh_eigenpair()
    }

    fn refresh_eigenpair(&mut self) -> Result<()> {
        let (lambda, v) = min_eigenpair(&self.w, self.dim)?;
        self.min_eigenvalue = lambda;
        self.min_eigenvector = v;
        Ok(())
    }

    /// `W⁻¹ v`.
    pub fn inv_mul(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_len(v)?;
        Ok(mat_vec(&self.w_inv, self.dim, v))
    }

    /// `‖v‖²_{W⁻¹} = ⟨v, W⁻¹ v⟩`, clamped at zero.
    pub fn quad_norm_inv(&self, v: &[f64]) -> Result<f64> {
        self.check_len(v)?;
        Ok(self.quad_inv_unchecked(v))
    }

    pub(crate) fn quad_inv_unchecked(&self, v: &[f64]) -> f64 {
        let n = self.dim;
        let mut s = 0.0;
        for i in 0..n {
            let row = &self.w_inv[i * n..(i + 1) * n];
            s += v[i] * dot(row, v);
        }
        s.max(0.0)
    }

    /// `‖v‖²_W = ⟨v, W v⟩`.
    pub fn quad_norm(&self, v: &[f64]) -> Result<f64> {
        self.check_len(v)?;
        Ok(dot(v, &mat_vec(&self.w, self.dim, v)))
    }

    /// `max_ij |(W W⁻¹ − I)_ij|`, a cheap drift diagnostic.
    pub fn inverse_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let s: f64 = (0..n).map(|k| self.w[i * n + k] * self.w_inv[k * n + j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn init_identity() {
        let s = PrecisionState::new(2, 1.0).unwrap();
        assert_eq!(s.w_matrix(), &[1.0, 0.0, 0.0, 1.0]);
        assert_eq!(s.log_det(), 0.0);
        assert_eq!(s.min_eigenvalue(), 1.0);
        assert_eq!(s.min_eigenvector(), &[1.0, 0.0]);
    }

    #[test]
    fn init_log_det_is_d_log_gamma() {
        let s = PrecisionState::new(3, 4.0).unwrap();
        assert_abs_diff_eq!(s.log_det(), 3.0 * 4.0_f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(s.log_det(), 4.1589, epsilon = 1e-4);
    }

    #[test]
    fn init_rejects_bad_inputs() {
        assert!(PrecisionState::new(5, 0.0).is_err());
        assert!(PrecisionState::new(5, -1.0).is_err());
        assert!(PrecisionState::new(0, 1.0).is_err());
    }

    #[test]
    fn diagonal_rank1() {
        let mut s = PrecisionState::new(2, 1.0).unwrap();
        s.rank1_update(1.0, &[1.0, 0.0]).unwrap();
        assert_eq!(s.w_matrix(), &[2.0, 0.0, 0.0, 1.0]);
        assert_abs_diff_eq!(s.w_inverse()[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.w_inverse()[3], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.log_det(), 2.0_f64.ln(), epsilon = 1e-15);
        assert_eq!(s.min_eigenvalue(), 1.0);
        assert_eq!(s.min_eigenvector(), &[0.0, 1.0]);
    }

    #[test]
    fn zero_vector_leaves_state_unchanged() {
        let mut s = PrecisionState::new(2, 1.0).unwrap();
        s.rank1_update(1.0, &[1.0, 0.0]).unwrap();
        s.rank1_update(4.0, &[0.0, 2.0]).unwrap();
        // W = diag(2, 5)
        let before = s.clone();
        s.rank1_update(3.0, &[0.0, 0.0]).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn rank1_rejects_bad_weight_and_length() {
        let mut s = PrecisionState::new(2, 1.0).unwrap();
        assert!(s.rank1_update(0.0, &[1.0, 0.0]).is_err());
        assert!(s.rank1_update(1.0, &[1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn quad_norm_inv_examples() {
        let s = PrecisionState::new(2, 1.0).unwrap();
        assert_abs_diff_eq!(s.quad_norm_inv(&[3.0, 4.0]).unwrap(), 25.0, epsilon = 1e-12);

        let mut s = PrecisionState::new(2, 1.0).unwrap();
        s.rank1_update(1.0, &[1.0, 0.0]).unwrap();
        s.rank1_update(4.0, &[0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(s.quad_norm_inv(&[0.0, 1.0]).unwrap(), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn min_eigenpair_diagonal() {
        let (l, v) = min_eigenpair(&[2.0, 0.0, 0.0, 5.0], 2).unwrap();
        assert_eq!(l, 2.0);
        assert_eq!(v, vec![1.0, 0.0]);
        let (l, v) = min_eigenpair(&[5.0, 0.0, 0.0, 2.0], 2).unwrap();
        assert_eq!(l, 2.0);
        assert_eq!(v, vec![0.0, 1.0]);
    }

    #[test]
    fn min_eigenpair_degenerate_spectrum_picks_first_axis() {
        let g = 3.5;
        let m = [g, 0.0, 0.0, 0.0, g, 0.0, 0.0, 0.0, g];
        let (l, v) = min_eigenpair(&m, 3).unwrap();
        assert_eq!(l, g);
        assert_eq!(v, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn min_eigenpair_sign_is_canonical() {
        // eigenvector of the smaller eigenvalue is ±(1, -1)/√2
        let (l, v) = min_eigenpair(&[2.0, 1.0, 1.0, 2.0], 2).unwrap();
        assert_abs_diff_eq!(l, 1.0, epsilon = 1e-14);
        assert!(v[0] > 0.0);
        assert_abs_diff_eq!(v[0], -v[1], epsilon = 1e-14);
    }

    #[test]
    fn min_eigenpair_rejects_asymmetric() {
        let err = min_eigenpair(&[1.0, 0.5, 0.0, 1.0], 2).unwrap_err();
        assert!(matches!(err, Error::NotSymmetric(_)));
    }

    #[test]
    fn refresh_resets_counter() {
        let mut s = PrecisionState::new(3, 1.0).unwrap();
        for k in 0..REFRESH_INTERVAL - 1 {
            s.rank1_update(1.0, &[1.0, (k % 3) as f64, 0.5]).unwrap();
        }
        assert_eq!(s.updates_since_refresh(), REFRESH_INTERVAL - 1);
        s.rank1_update(1.0, &[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(s.updates_since_refresh(), 0);
        assert!(s.inverse_residual() < 1e-10);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        assert!(matches!(
            cholesky(&[1.0, 2.0, 2.0, 1.0], 2),
            Err(Error::NotPositiveDefinite)
        ));
    }
}
