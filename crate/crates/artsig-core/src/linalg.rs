//! Dense complex matrices, a full complex SVD, and the Moore–Penrose
//! pseudo-inverse.
//!
//! The SVD is a one-sided Jacobi iteration on columns: numerically simple,
//! deterministic, and accurate to near machine precision for the small
//! matrices this crate works with. Column phases are canonicalized so that
//! every left singular vector has its largest-magnitude entry real and
//! positive, which makes repeated factorizations of identical inputs
//! bitwise reproducible.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Column vector of complex samples.
pub type ComplexVector = Vec<Complex64>;

/// Relative cutoff below which singular values are treated as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

/// Jacobi sweep threshold on the normalized column correlation.
const JACOBI_TOL: f64 = 1e-14;
const MAX_JACOBI_SWEEPS: usize = 64;

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("matrix dimensions must be positive"));
        }
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "entry count {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(d, 0.0));
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn hermitian(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> ComplexVector {
        assert_eq!(self.cols, v.len(), "mul_vec dimension mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for r in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..self.cols {
                acc += self.get(r, c) * v[c];
            }
            out[r] = acc;
        }
        out
    }

    /// Computes `self^H · v` without materializing the conjugate transpose.
    pub fn adjoint_mul_vec(&self, v: &[Complex64]) -> ComplexVector {
        assert_eq!(self.rows, v.len(), "adjoint_mul_vec dimension mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); self.cols];
        for r in 0..self.rows {
            let x = v[r];
            for c in 0..self.cols {
                out[c] += self.get(r, c).conj() * x;
            }
        }
        out
    }

    /// Scales row `r` by `factors[r]`.
    pub fn scale_rows(&self, factors: &[f64]) -> Self {
        assert_eq!(self.rows, factors.len(), "scale_rows dimension mismatch");
        Self::from_fn(self.rows, self.cols, |r, c| self.get(r, c) * factors[r])
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self.get(r, c) * factor)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, c) + other.get(r, c)
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, c) - other.get(r, c)
        })
    }

    pub fn column(&self, c: usize) -> ComplexVector {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// Copy of the first `count` columns.
    pub fn leading_columns(&self, count: usize) -> Self {
        assert!(count <= self.cols);
        Self::from_fn(self.rows, count, |r, c| self.get(r, c))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry magnitude of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian inner product `a^H · b`.
pub fn vec_dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vec_sub(a: &[Complex64], b: &[Complex64]) -> ComplexVector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_is_finite(v: &[Complex64]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Full singular value decomposition `A = left · diag(σ) · right^H`.
///
/// `left` is rows×rows unitary, `right` is cols×cols unitary, and
/// `singular_values` holds the min(rows, cols) values in descending order.
#[derive(Debug, Clone)]
pub struct SvdTriple {
    pub left: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub right: ComplexMatrix,
}

impl SvdTriple {
    /// Rebuilds the factored matrix; used by accuracy checks.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let m = self.left.rows();
        let n = self.right.rows();
        let mut out = ComplexMatrix::zeros(m, n);
        for (k, &sigma) in self.singular_values.iter().enumerate() {
            for r in 0..m {
                let u = self.left.get(r, k) * sigma;
                for c in 0..n {
                    let v = out.get(r, c) + u * self.right.get(c, k).conj();
                    out.set(r, c, v);
                }
            }
        }
        out
    }
}

/// Full SVD of a complex matrix.
pub fn svd(a: &ComplexMatrix) -> Result<SvdTriple> {
    if !a.is_finite() {
        return Err(Error::invalid("svd input contains non-finite entries"));
    }
    if a.rows() >= a.cols() {
        svd_tall(a)
    } else {
        // A = (A^H)^H: factor the tall adjoint and swap the roles.
        let t = svd_tall(&a.hermitian())?;
        let mut triple = SvdTriple {
            left: t.right,
            singular_values: t.singular_values,
            right: t.left,
        };
        canonicalize(&mut triple);
        Ok(triple)
    }
}

/// One-sided Jacobi SVD for rows ≥ cols.
fn svd_tall(a: &ComplexMatrix) -> Result<SvdTriple> {
    let m = a.rows();
    let n = a.cols();

    // Work on explicit columns; rotations touch two columns at a time.
    let mut b: Vec<ComplexVector> = (0..n).map(|c| a.column(c)).collect();
    let mut v: Vec<ComplexVector> = (0..n)
        .map(|c| {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[c] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    let mut converged = n < 2;
    for _sweep in 0..MAX_JACOBI_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha: f64 = b[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = b[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = vec_dot(&b[p], &b[q]);
                let g = gamma.norm();
                if g <= JACOBI_TOL * (alpha * beta).sqrt() || alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                rotated = true;

                // Phase-align the pair, then apply the real Jacobi rotation
                // that diagonalizes [[alpha, g], [g, beta]].
                let phase = gamma.conj() / g;
                let tau = (beta - alpha) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;

                for i in 0..m {
                    let bp = b[p][i];
                    let bq = phase * b[q][i];
                    b[p][i] = c * bp - s * bq;
                    b[q][i] = s * bp + c * bq;
                }
                for i in 0..n {
                    let vp = v[p][i];
                    let vq = phase * v[q][i];
                    v[p][i] = c * vp - s * vq;
                    v[q][i] = s * vp + c * vq;
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NumericalFailure(format!(
            "jacobi svd did not converge within {MAX_JACOBI_SWEEPS} sweeps"
        )));
    }

    let mut sigma: Vec<f64> = b.iter().map(|col| vec_norm(col)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap());
    let b: Vec<ComplexVector> = order.iter().map(|&j| core::mem::take(&mut b[j])).collect();
    let v: Vec<ComplexVector> = order.iter().map(|&j| core::mem::take(&mut v[j])).collect();
    sigma = order.iter().map(|&j| sigma[j]).collect();

    // Normalize the usable columns of U; fill the rest from a deterministic
    // orthonormal completion so the left factor is square unitary.
    let sigma_max = sigma.first().copied().unwrap_or(0.0);
    let usable = sigma_max * 1e-13;
    let mut u_cols: Vec<ComplexVector> = Vec::with_capacity(m);
    for (j, col) in b.iter().enumerate() {
        if sigma[j] > usable && sigma[j] > 0.0 {
            u_cols.push(col.iter().map(|z| z / sigma[j]).collect());
        }
    }
    complete_orthonormal_basis(&mut u_cols, m);

    let left = ComplexMatrix::from_fn(m, m, |r, c| u_cols[c][r]);
    let right = ComplexMatrix::from_fn(n, n, |r, c| v[c][r]);
    let mut triple = SvdTriple {
        left,
        singular_values: sigma,
        right,
    };
    canonicalize(&mut triple);
    Ok(triple)
}

/// Extends `cols` (orthonormal, length `dim` each) to a full basis of C^dim
/// by Gram-Schmidt over standard basis vectors, picking the candidate with
/// the largest residual at each step.
fn complete_orthonormal_basis(cols: &mut Vec<ComplexVector>, dim: usize) {
    while cols.len() < dim {
        let mut best: Option<(f64, ComplexVector)> = None;
        for k in 0..dim {
            let mut cand = vec![Complex64::new(0.0, 0.0); dim];
            cand[k] = Complex64::new(1.0, 0.0);
            // Two MGS passes keep the completion orthogonal to working precision.
            for _ in 0..2 {
                for col in cols.iter() {
                    let proj = vec_dot(col, &cand);
                    for i in 0..dim {
                        cand[i] -= proj * col[i];
                    }
                }
            }
            let norm = vec_norm(&cand);
            if best.as_ref().is_none_or(|(bn, _)| norm > *bn) {
                best = Some((norm, cand));
            }
        }
        let (norm, mut cand) = best.expect("dim > 0");
        for z in cand.iter_mut() {
            *z /= norm;
        }
        cols.push(cand);
    }
}

/// Rotates column phases so each left singular vector has its
/// largest-magnitude entry real and positive; paired right columns absorb
/// the conjugate phase so the product is unchanged. Unpaired basis-completion
/// columns are canonicalized on their own for determinism.
fn canonicalize(triple: &mut SvdTriple) {
    let m = triple.left.rows();
    let n = triple.right.rows();
    let paired = triple.singular_values.len();

    for j in 0..m {
        let phase = dominant_phase(&triple.left.column(j));
        apply_phase(&mut triple.left, j, phase);
        if j < paired && j < n {
            apply_phase(&mut triple.right, j, phase);
        }
    }
    for j in paired..n {
        let phase = dominant_phase(&triple.right.column(j));
        apply_phase(&mut triple.right, j, phase);
    }
}

/// Phase factor `e^{-i·arg(z_max)}` of the largest-magnitude entry.
fn dominant_phase(col: &[Complex64]) -> Complex64 {
    let mut idx = 0;
    let mut mag = 0.0;
    for (i, z) in col.iter().enumerate() {
        let a = z.norm();
        if a > mag {
            mag = a;
            idx = i;
        }
    }
    if mag == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        col[idx].conj() / mag
    }
}

fn apply_phase(mat: &mut ComplexMatrix, col: usize, phase: Complex64) {
    for r in 0..mat.rows() {
        let v = mat.get(r, col) * phase;
        mat.set(r, col, v);
    }
}

/// Moore–Penrose pseudo-inverse via the SVD, treating singular values below
/// `rank_tol · σ_max` as zero.
pub fn pseudo_inverse(a: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    if !a.is_finite() {
        return Err(Error::invalid(
            "pseudo_inverse input contains non-finite entries",
        ));
    }
    if !(rank_tol >= 0.0) {
        return Err(Error::invalid("rank_tol must be nonnegative"));
    }
    let t = svd(a)?;
    let sigma_max = t.singular_values.first().copied().unwrap_or(0.0);
    let cutoff = rank_tol * sigma_max;
    let mut out = ComplexMatrix::zeros(a.cols(), a.rows());
    for (k, &sigma) in t.singular_values.iter().enumerate() {
        if sigma <= cutoff || sigma == 0.0 {
            continue;
        }
        let inv = 1.0 / sigma;
        for r in 0..a.cols() {
            let vk = t.right.get(r, k) * inv;
            for c in 0..a.rows() {
                let val = out.get(r, c) + vk * t.left.get(c, k).conj();
                out.set(r, c, val);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    fn random_matrix(seed: u64, rows: usize, cols: usize) -> ComplexMatrix {
        let mut rng = SeededRng::new(seed, 0);
        crate::rng::sample_complex_gaussian(&mut rng, rows, cols, 1.0).unwrap()
    }

    fn check_triple(a: &ComplexMatrix, t: &SvdTriple) {
        let m = a.rows();
        let n = a.cols();
        // Unitarity of both factors.
        let eye_m = t.left.hermitian().matmul(&t.left);
        assert!(
            eye_m.max_abs_diff(&ComplexMatrix::identity(m)) < 1e-10,
            "left not unitary"
        );
        let eye_n = t.right.hermitian().matmul(&t.right);
        assert!(
            eye_n.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-10,
            "right not unitary"
        );
        // Ordering.
        for w in t.singular_values.windows(2) {
            assert!(
                w[0] >= w[1],
                "singular values not descending: {:?}",
                t.singular_values
            );
        }
        assert!(t.singular_values.iter().all(|&s| s >= 0.0));
        // Reconstruction.
        let err = t.reconstruct().sub(a).frobenius_norm();
        let denom = a.frobenius_norm().max(1e-300);
        assert!(err / denom < 1e-10, "reconstruction error {}", err / denom);
    }

    #[test]
    fn svd_identity() {
        let a = ComplexMatrix::identity(3);
        let t = svd(&a).unwrap();
        for &s in &t.singular_values {
            assert!((s - 1.0).abs() < 1e-12);
        }
        check_triple(&a, &t);
    }

    #[test]
    fn svd_diagonal() {
        let a = ComplexMatrix::from_diagonal(&[3.0, 1.0]);
        let t = svd(&a).unwrap();
        assert!((t.singular_values[0] - 3.0).abs() < 1e-12);
        assert!((t.singular_values[1] - 1.0).abs() < 1e-12);
        check_triple(&a, &t);
    }

    #[test]
    fn svd_random_shapes() {
        for (seed, rows, cols) in [
            (1, 4, 8),
            (2, 8, 4),
            (3, 2, 3),
            (4, 32, 16),
            (5, 5, 5),
            (6, 1, 7),
        ] {
            let a = random_matrix(seed, rows, cols);
            let t = svd(&a).unwrap();
            assert_eq!(t.left.rows(), rows);
            assert_eq!(t.right.rows(), cols);
            assert_eq!(t.singular_values.len(), rows.min(cols));
            check_triple(&a, &t);
        }
    }

    #[test]
    fn svd_rank_deficient() {
        // Two identical columns: rank 1.
        let col = [
            Complex64::new(1.0, 2.0),
            Complex64::new(-0.5, 0.25),
            Complex64::new(0.0, 1.0),
        ];
        let a = ComplexMatrix::from_fn(3, 2, |r, _| col[r]);
        let t = svd(&a).unwrap();
        assert!(t.singular_values[1] < 1e-12 * t.singular_values[0]);
        check_triple(&a, &t);
    }

    #[test]
    fn svd_zero_matrix() {
        let a = ComplexMatrix::zeros(3, 2);
        let t = svd(&a).unwrap();
        assert!(t.singular_values.iter().all(|&s| s == 0.0));
        check_triple(&a, &t);
    }

    #[test]
    fn svd_canonical_phase() {
        let a = random_matrix(7, 4, 6);
        let t = svd(&a).unwrap();
        for j in 0..4 {
            let col = t.left.column(j);
            let mut idx = 0;
            let mut mag = 0.0;
            for (i, z) in col.iter().enumerate() {
                if z.norm() > mag {
                    mag = z.norm();
                    idx = i;
                }
            }
            assert!(col[idx].re > 0.0, "dominant entry not positive real");
            assert!(col[idx].im.abs() < 1e-12 * col[idx].re);
        }
    }

    #[test]
    fn svd_deterministic() {
        let a = random_matrix(11, 4, 8);
        let t1 = svd(&a).unwrap();
        let t2 = svd(&a).unwrap();
        assert_eq!(t1.left, t2.left);
        assert_eq!(t1.right, t2.right);
        assert_eq!(t1.singular_values, t2.singular_values);
    }

    #[test]
    fn svd_rejects_non_finite() {
        let mut a = ComplexMatrix::identity(2);
        a.set(0, 1, Complex64::new(f64::NAN, 0.0));
        assert!(matches!(svd(&a), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn pinv_identity() {
        let a = ComplexMatrix::identity(4);
        let p = pseudo_inverse(&a, DEFAULT_RANK_TOL).unwrap();
        assert!(p.max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn pinv_rank_deficient_diagonal() {
        let a = ComplexMatrix::from_diagonal(&[2.0, 0.0]);
        let p = pseudo_inverse(&a, DEFAULT_RANK_TOL).unwrap();
        let expect = ComplexMatrix::from_diagonal(&[0.5, 0.0]);
        assert!(p.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn pinv_tall_full_rank() {
        let a = random_matrix(21, 32, 8);
        let p = pseudo_inverse(&a, DEFAULT_RANK_TOL).unwrap();
        let prod = p.matmul(&a);
        assert!(prod.max_abs_diff(&ComplexMatrix::identity(8)) < 1e-8);
    }

    #[test]
    fn pinv_penrose_conditions() {
        for (seed, rows, cols) in [(31, 4, 8), (32, 6, 3), (33, 5, 5)] {
            let a = random_matrix(seed, rows, cols);
            let p = pseudo_inverse(&a, DEFAULT_RANK_TOL).unwrap();
            let apa = a.matmul(&p).matmul(&a);
            assert!(apa.sub(&a).frobenius_norm() < 1e-8, "A A+ A = A");
            let pap = p.matmul(&a).matmul(&p);
            assert!(pap.sub(&p).frobenius_norm() < 1e-8, "A+ A A+ = A+");
            let ap = a.matmul(&p);
            assert!(
                ap.hermitian().sub(&ap).frobenius_norm() < 1e-8,
                "(A A+)^H = A A+"
            );
            let pa = p.matmul(&a);
            assert!(
                pa.hermitian().sub(&pa).frobenius_norm() < 1e-8,
                "(A+ A)^H = A+ A"
            );
        }
    }

    #[test]
    fn matrix_shape_validation() {
        assert!(ComplexMatrix::new(0, 3, vec![]).is_err());
        assert!(ComplexMatrix::new(2, 2, vec![Complex64::new(1.0, 0.0); 3]).is_err());
    }
}
