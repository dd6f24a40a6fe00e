//! Reference implementations for cross-checking numerical kernels in tests.
//!
//! Nothing here shares code with the production paths it validates: ridge
//! systems are solved by Gaussian elimination instead of the SVD, the
//! ball-constrained least-squares problem is solved by a λ-grid plus
//! golden-section search and independently by accelerated projected
//! gradient descent, and singular values are recovered from the eigenvalues
//! of the Gram matrix via a real symmetric Jacobi iteration.

// Indexed loops are kept where they mirror the subscripts of the formulas
// they implement.
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

use artsig_core::linalg::{vec_norm, vec_sub, ComplexMatrix};

/// Solves (A^H A + λI)·x = A^H·t by Gaussian elimination with partial
/// pivoting. Independent of any SVD.
pub fn ridge_solve_elimination(
    a: &ComplexMatrix,
    target: &[Complex64],
    lambda: f64,
) -> Vec<Complex64> {
    let k = a.cols();
    let mut g = vec![vec![Complex64::new(0.0, 0.0); k + 1]; k];
    // Normal-equation matrix with the ridge term, augmented by the RHS.
    for i in 0..k {
        for j in 0..k {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..a.rows() {
                acc += a.get(r, i).conj() * a.get(r, j);
            }
            if i == j {
                acc += lambda;
            }
            g[i][j] = acc;
        }
        let mut rhs = Complex64::new(0.0, 0.0);
        for r in 0..a.rows() {
            rhs += a.get(r, i).conj() * target[r];
        }
        g[i][k] = rhs;
    }

    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&i, &j| g[i][col].norm().partial_cmp(&g[j][col].norm()).unwrap())
            .unwrap();
        g.swap(col, pivot);
        let p = g[col][col];
        for i in col + 1..k {
            let f = g[i][col] / p;
            for j in col..=k {
                let sub = f * g[col][j];
                g[i][j] -= sub;
            }
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); k];
    for i in (0..k).rev() {
        let mut acc = g[i][k];
        for j in i + 1..k {
            acc -= g[i][j] * x[j];
        }
        x[i] = acc / g[i][i];
    }
    x
}

fn residual_of(a: &ComplexMatrix, target: &[Complex64], x: &[Complex64]) -> f64 {
    vec_norm(&vec_sub(&a.mul_vec(x), target))
}

/// Optimal residual of min ‖A·x − t‖ s.t. ‖x‖ ≤ r, located by bracketing the
/// boundary multiplier on a logarithmic λ grid and refining it with
/// golden-section search on |‖x(λ)‖ − r|.
pub fn grid_golden_oracle(a: &ComplexMatrix, target: &[Complex64], radius: f64) -> f64 {
    // Small positive floor keeps the elimination well posed when A^H A is
    // singular (wide or rank-deficient A).
    let lambda_floor = 1e-13;
    let x0 = ridge_solve_elimination(a, target, lambda_floor);
    if vec_norm(&x0) <= radius * (1.0 + 1e-9) {
        return residual_of(a, target, &x0);
    }

    let norm_at = |lambda: f64| vec_norm(&ridge_solve_elimination(a, target, lambda));

    let mut hi = 1.0;
    while norm_at(hi) > radius {
        hi *= 4.0;
        assert!(hi < 1e30, "oracle bracket expansion failed");
    }
    // Bracket the crossing on a log grid, then shrink with golden section.
    let lo0 = lambda_floor;
    let cells = 400usize;
    let ratio = (hi / lo0).powf(1.0 / cells as f64);
    let mut lo = lo0;
    let mut cell_hi = hi;
    let mut cursor = lo0;
    for _ in 0..cells {
        let next = cursor * ratio;
        if norm_at(next) <= radius {
            lo = cursor;
            cell_hi = next;
            break;
        }
        cursor = next;
    }
    let gap = |lambda: f64| (norm_at(lambda) - radius).abs();
    let gr = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a1, mut b1) = (lo, cell_hi);
    let mut c1 = b1 - gr * (b1 - a1);
    let mut d1 = a1 + gr * (b1 - a1);
    let (mut fc, mut fd) = (gap(c1), gap(d1));
    for _ in 0..200 {
        if fc < fd {
            b1 = d1;
            d1 = c1;
            fd = fc;
            c1 = b1 - gr * (b1 - a1);
            fc = gap(c1);
        } else {
            a1 = c1;
            c1 = d1;
            fc = fd;
            d1 = a1 + gr * (b1 - a1);
            fd = gap(d1);
        }
        if b1 - a1 < 1e-14 * b1.max(1.0) {
            break;
        }
    }
    let lambda_star = 0.5 * (a1 + b1);
    residual_of(a, target, &ridge_solve_elimination(a, target, lambda_star))
}

/// Optimal residual via accelerated projected gradient descent on the ball,
/// with adaptive restart. The Lipschitz constant comes from power iteration
/// on A^H A, not from a singular value decomposition.
pub fn projected_gradient_oracle(a: &ComplexMatrix, target: &[Complex64], radius: f64) -> f64 {
    let lipschitz = 2.0 * gram_spectral_norm(a).max(1e-30);
    let step = 1.0 / lipschitz;

    let project = |x: &mut Vec<Complex64>| {
        let n = vec_norm(x);
        if n > radius {
            let f = radius / n;
            for z in x.iter_mut() {
                *z *= f;
            }
        }
    };

    let objective = |x: &[Complex64]| {
        let r = vec_sub(&a.mul_vec(x), target);
        r.iter().map(|z| z.norm_sqr()).sum::<f64>()
    };

    // Warm start at the ball projection of the (ridge-floored) unconstrained
    // least-squares solution. The problem is convex, so the starting point
    // can only shorten the path to the unique constrained optimum — every
    // fixed point of the projected-gradient map is a global optimum — and
    // the answer stays independent of how the start was produced.
    let mut x = ridge_solve_elimination(a, target, 1e-13);
    project(&mut x);
    let mut y = x.clone();
    let mut t = 1.0f64;
    let mut prev_obj = objective(&x);
    let mut stall = 0u32;

    for _ in 0..200_000u32 {
        // Gradient of ‖Ay − t‖² is 2·A^H(Ay − t).
        let grad = a.adjoint_mul_vec(&vec_sub(&a.mul_vec(&y), target));
        let mut next: Vec<Complex64> = y
            .iter()
            .zip(&grad)
            .map(|(yi, gi)| yi - 2.0 * step * gi)
            .collect();
        project(&mut next);

        let obj = objective(&next);
        if obj > prev_obj + 1e-12 * (1.0 + prev_obj) {
            // Momentum overshot; restart acceleration from the last iterate.
            // Increases below the flatness scale are rounding noise, not
            // overshoot, and must fall through so the stall exit can fire.
            t = 1.0;
            y = x.clone();
            prev_obj = objective(&x);
            continue;
        }

        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let beta = (t - 1.0) / t_next;
        y = next
            .iter()
            .zip(&x)
            .map(|(n, o)| n + beta * (n - o))
            .collect();
        let moved = vec_norm(&vec_sub(&next, &x));
        x = next;
        t = t_next;
        // Stop once per-step progress is deep below the 1e-6 residual
        // tolerance this oracle is compared at; several quiet steps in a row
        // guard against a momentum-restart pause masquerading as a stall.
        if (prev_obj - obj).abs() <= 1e-12 * (1.0 + obj) && moved <= 1e-8 * radius.max(1.0) {
            stall += 1;
            if stall >= 8 {
                break;
            }
        } else {
            stall = 0;
        }
        prev_obj = obj;
    }
    residual_of(a, target, &x)
}

/// Spectral norm of A^H A by power iteration with a fixed deterministic start.
fn gram_spectral_norm(a: &ComplexMatrix) -> f64 {
    let k = a.cols();
    let mut v: Vec<Complex64> = (0..k)
        .map(|i| Complex64::new(1.0 + (i as f64) * 0.37, 0.31 - (i as f64) * 0.11))
        .collect();
    let mut norm = vec_norm(&v);
    for z in v.iter_mut() {
        *z /= norm;
    }
    let mut eig = 0.0;
    for _ in 0..200 {
        let mut w = a.adjoint_mul_vec(&a.mul_vec(&v));
        norm = vec_norm(&w);
        if norm == 0.0 {
            return 0.0;
        }
        for z in w.iter_mut() {
            *z /= norm;
        }
        v = w;
        eig = norm;
    }
    eig
}

/// Singular values of A recovered independently: eigenvalues of the Gram
/// matrix A^H A, computed by real symmetric Jacobi iteration on the 2n×2n
/// real embedding, each appearing twice.
pub fn singular_values_eigen_oracle(a: &ComplexMatrix) -> Vec<f64> {
    let n = a.cols();
    // Hermitian Gram matrix.
    let mut g = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..a.rows() {
                acc += a.get(r, i).conj() * a.get(r, j);
            }
            g[i][j] = acc;
        }
    }
    // Real symmetric embedding [[Re G, −Im G], [Im G, Re G]].
    let dim = 2 * n;
    let mut m = vec![vec![0.0f64; dim]; dim];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = g[i][j].re;
            m[i][j + n] = -g[i][j].im;
            m[i + n][j] = g[i][j].im;
            m[i + n][j + n] = g[i][j].re;
        }
    }
    let mut eigs = symmetric_eigenvalues(&mut m);
    eigs.sort_by(|x, y| y.partial_cmp(x).unwrap());
    // Each eigenvalue of G appears twice in the embedding; only the first
    // min(rows, cols) can be nonzero.
    (0..a.rows().min(n))
        .map(|i| eigs[2 * i].max(0.0).sqrt())
        .collect()
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
fn symmetric_eigenvalues(m: &mut [Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += m[p][q] * m[p][q];
            }
        }
        if off.sqrt() < 1e-14 {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let tau = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..n {
                    let mip = m[i][p];
                    let miq = m[i][q];
                    m[i][p] = c * mip - s * miq;
                    m[i][q] = s * mip + c * miq;
                }
                for i in 0..n {
                    let mpi = m[p][i];
                    let mqi = m[q][i];
                    m[p][i] = c * mpi - s * mqi;
                    m[q][i] = s * mpi + c * mqi;
                }
            }
        }
    }
    (0..n).map(|i| m[i][i]).collect()
}
