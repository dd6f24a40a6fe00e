//! Artificial-signal construction: least squares over a Euclidean ball.
//!
//! Both signal designs minimize ‖A·ξ − s‖ subject to ‖ξ‖ ≤ r. The solver
//! factors A once, takes the minimum-norm least-squares solution when it is
//! feasible, and otherwise finds the Lagrange multiplier λ > 0 on the
//! boundary through the secular equation ‖ξ(λ)‖ = r. The map λ ↦ ‖ξ(λ)‖ is
//! strictly decreasing and ‖ξ(λ)‖² − r² is convex in λ, so bracketed Newton
//! iteration from the left converges monotonically; bisection guards the
//! bracket.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::channel::ChannelRealization;
use crate::error::{Error, Result};
use crate::linalg::{svd, vec_is_finite, vec_norm, vec_sub, ComplexMatrix, ComplexVector};

/// Default relative tolerance on ‖ξ(λ)‖ at the boundary.
pub const DEFAULT_SOLVER_TOL: f64 = 1e-10;

/// Relative cutoff treating tiny singular values of A as zero.
const SINGULAR_CUTOFF: f64 = 1e-12;

const MAX_ROOT_ITERATIONS: u32 = 200;

/// One norm-ball-constrained least-squares instance.
#[derive(Debug, Clone)]
pub struct LsqiProblem {
    /// Effective linear map, m×k.
    pub a: ComplexMatrix,
    /// Right-hand side, length m.
    pub target: ComplexVector,
    /// Euclidean ball radius for ξ.
    pub radius: f64,
    /// Relative boundary tolerance.
    pub tol: f64,
}

impl LsqiProblem {
    pub fn new(a: ComplexMatrix, target: ComplexVector, radius: f64) -> Result<Self> {
        let p = Self {
            a,
            target,
            radius,
            tol: DEFAULT_SOLVER_TOL,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.a.is_finite() {
            return Err(Error::invalid("problem matrix contains non-finite entries"));
        }
        if !vec_is_finite(&self.target) {
            return Err(Error::invalid("target contains non-finite entries"));
        }
        if self.a.rows() != self.target.len() {
            return Err(Error::invalid("target length does not match matrix rows"));
        }
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(Error::invalid("radius must be positive and finite"));
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::invalid("tolerance must be positive and finite"));
        }
        Ok(())
    }
}

/// Solution of one constrained least-squares instance.
#[derive(Debug, Clone)]
pub struct SolverResult {
    /// Optimal signal, length k.
    pub xi: ComplexVector,
    /// Constraint multiplier; zero when the ball constraint is inactive.
    pub lambda: f64,
    /// Objective value ‖A·xi − target‖ at the optimum.
    pub residual: f64,
    /// Root-finding iterations spent (zero for interior optima).
    pub iterations: u32,
    /// True when the optimum lies on the ball boundary.
    pub constraint_active: bool,
}

/// Spectral data of A reused by the secular equation.
struct Spectrum {
    /// Right singular vectors, k×k.
    q: ComplexMatrix,
    /// Rotated target coordinates P^H·target, one per singular value.
    coeffs: Vec<Complex64>,
    /// Singular values above the effective-rank cutoff, descending.
    sigma: Vec<f64>,
}

impl Spectrum {
    fn factor(a: &ComplexMatrix, target: &[Complex64]) -> Result<Self> {
        let t = svd(a)?;
        let rotated = t.left.adjoint_mul_vec(target);
        let sigma_max = t.singular_values.first().copied().unwrap_or(0.0);
        let cutoff = SINGULAR_CUTOFF * sigma_max;
        let mut sigma = Vec::new();
        let mut coeffs = Vec::new();
        for (i, &s) in t.singular_values.iter().enumerate() {
            if s > cutoff && s > 0.0 {
                sigma.push(s);
                coeffs.push(rotated[i]);
            }
        }
        Ok(Self {
            q: t.right,
            coeffs,
            sigma,
        })
    }

    /// ξ(λ) = Q·diag(σᵢ/(σᵢ²+λ))·coeffs, the ridge-regularized solution.
    fn xi(&self, lambda: f64) -> ComplexVector {
        let k = self.q.rows();
        let mut out = vec![Complex64::new(0.0, 0.0); k];
        for (i, (&s, &c)) in self.sigma.iter().zip(&self.coeffs).enumerate() {
            let w = c * (s / (s * s + lambda));
            for r in 0..k {
                out[r] += self.q.get(r, i) * w;
            }
        }
        out
    }

    /// ‖ξ(λ)‖², strictly decreasing in λ.
    fn norm_sqr(&self, lambda: f64) -> f64 {
        self.sigma
            .iter()
            .zip(&self.coeffs)
            .map(|(&s, &c)| {
                let f = s / (s * s + lambda);
                f * f * c.norm_sqr()
            })
            .sum()
    }

    /// d/dλ ‖ξ(λ)‖².
    fn norm_sqr_derivative(&self, lambda: f64) -> f64 {
        self.sigma
            .iter()
            .zip(&self.coeffs)
            .map(|(&s, &c)| {
                let d = s * s + lambda;
                -2.0 * s * s * c.norm_sqr() / (d * d * d)
            })
            .sum()
    }
}

/// Solves min ‖A·ξ − target‖ subject to ‖ξ‖ ≤ radius.
pub fn solve_norm_constrained_ls(p: &LsqiProblem) -> Result<SolverResult> {
    p.validate()?;
    let spectrum = Spectrum::factor(&p.a, &p.target)?;

    let xi0 = spectrum.xi(0.0);
    if vec_norm(&xi0) <= p.radius {
        let residual = vec_norm(&vec_sub(&p.a.mul_vec(&xi0), &p.target));
        return Ok(SolverResult {
            xi: xi0,
            lambda: 0.0,
            residual,
            iterations: 0,
            constraint_active: false,
        });
    }

    let (lambda, iterations) = solve_secular(&spectrum, p)?;
    let xi = spectrum.xi(lambda);
    let residual = vec_norm(&vec_sub(&p.a.mul_vec(&xi), &p.target));
    Ok(SolverResult {
        xi,
        lambda,
        residual,
        iterations,
        constraint_active: true,
    })
}

/// Finds λ > 0 with ‖ξ(λ)‖ = radius by bracketed Newton on ‖ξ(λ)‖² − r².
fn solve_secular(spectrum: &Spectrum, p: &LsqiProblem) -> Result<(f64, u32)> {
    let r = p.radius;
    let r_sqr = r * r;
    let sigma_max = spectrum.sigma[0];

    // ‖ξ(λ)‖ ≤ σ_max·‖target‖/λ, so this upper end always brackets the root.
    let mut hi = sigma_max * vec_norm(&p.target) / r;
    let mut guard = 0;
    while spectrum.norm_sqr(hi) > r_sqr {
        hi *= 2.0;
        guard += 1;
        if guard > 64 {
            return Err(Error::NumericalFailure(
                "secular equation bracket expansion failed".into(),
            ));
        }
    }
    let mut lo = 0.0;
    let mut lambda = 0.0;
    let mut best = (f64::INFINITY, 0.0);

    for iter in 1..=MAX_ROOT_ITERATIONS {
        let g = spectrum.norm_sqr(lambda) - r_sqr;
        let norm = (g + r_sqr).max(0.0).sqrt();
        let gap = (norm - r).abs();
        if gap < best.0 {
            best = (gap, lambda);
        }
        if gap <= p.tol * r {
            return Ok((lambda, iter));
        }
        if g > 0.0 {
            lo = lambda;
        } else {
            hi = lambda;
        }
        let slope = spectrum.norm_sqr_derivative(lambda);
        let newton = lambda - g / slope;
        lambda = if slope < 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::NumericalFailure(format!(
        "secular root finding exhausted {MAX_ROOT_ITERATIONS} iterations; best |gap|/r = {:.3e} at lambda = {:.6e}",
        best.0 / r,
        best.1
    )))
}

/// Ridge-regularized solution ξ(λ) for a standalone (A, target) pair; exposes
/// the secular map for diagnostics and property checks.
pub fn ridge_solution(
    a: &ComplexMatrix,
    target: &[Complex64],
    lambda: f64,
) -> Result<ComplexVector> {
    if a.rows() != target.len() {
        return Err(Error::invalid("target length does not match matrix rows"));
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::invalid("lambda must be nonnegative and finite"));
    }
    let spectrum = Spectrum::factor(a, target)?;
    Ok(spectrum.xi(lambda))
}

/// Checks feasibility, complementary slackness, and stationarity of a
/// returned solution against its problem.
pub fn verify_kkt(p: &LsqiProblem, r: &SolverResult) -> Result<()> {
    let norm = vec_norm(&r.xi);
    if norm > p.radius * (1.0 + 1e-9) {
        return Err(Error::NumericalFailure(format!(
            "infeasible solution: ‖xi‖ = {norm} exceeds radius {}",
            p.radius
        )));
    }
    if r.constraint_active {
        if r.lambda <= 0.0 {
            return Err(Error::NumericalFailure(
                "active constraint requires lambda > 0".into(),
            ));
        }
        if (norm - p.radius).abs() > p.tol.max(1e-9) * p.radius {
            return Err(Error::NumericalFailure(format!(
                "active solution off the boundary: ‖xi‖ = {norm}, radius = {}",
                p.radius
            )));
        }
    } else if r.lambda != 0.0 {
        return Err(Error::NumericalFailure(
            "inactive constraint requires lambda = 0".into(),
        ));
    }

    // Stationarity: (A^H A + λ I) xi = A^H target.
    let aht = p.a.adjoint_mul_vec(&p.target);
    let ahaxi = p.a.adjoint_mul_vec(&p.a.mul_vec(&r.xi));
    let mut lhs = ahaxi;
    for (l, x) in lhs.iter_mut().zip(&r.xi) {
        *l += r.lambda * x;
    }
    let violation = vec_norm(&vec_sub(&lhs, &aht));
    let scale = vec_norm(&aht).max(1e-300);
    if violation > 1e-8 * scale {
        return Err(Error::NumericalFailure(format!(
            "stationarity violated: ‖(A^H A + λI)xi − A^H t‖ = {violation:.3e} vs scale {scale:.3e}"
        )));
    }
    Ok(())
}

/// Builds the precoded design: A = diag(D)^{-1}·Ũ^H·H·Ṽ with ξ of length M,
/// transmitted through the codebook precoder.
pub fn build_pas(real: &ChannelRealization, s: &[Complex64]) -> Result<SolverResult> {
    let a = pas_operator(real)?;
    let p = LsqiProblem::new(a, s.to_vec(), (real.tx_count() as f64).sqrt())?;
    solve_norm_constrained_ls(&p)
}

/// Builds the direct design: A = diag(D)^{-1}·Ũ^H·H with ξ of length N,
/// transmitted without the precoder.
pub fn build_as(real: &ChannelRealization, s: &[Complex64]) -> Result<SolverResult> {
    let a = as_operator(real)?;
    let p = LsqiProblem::new(a, s.to_vec(), (real.tx_count() as f64).sqrt())?;
    solve_norm_constrained_ls(&p)
}

/// Effective map seen by the combiner when the precoder stays in line.
pub fn pas_operator(real: &ChannelRealization) -> Result<ComplexMatrix> {
    Ok(combined_channel(real)?.matmul(&real.v_tilde))
}

/// Effective map seen by the combiner under direct transmission.
pub fn as_operator(real: &ChannelRealization) -> Result<ComplexMatrix> {
    combined_channel(real)
}

/// diag(D)^{-1}·Ũ^H·H, the common left part of both designs.
fn combined_channel(real: &ChannelRealization) -> Result<ComplexMatrix> {
    let inv_d: Vec<f64> = real
        .d
        .iter()
        .map(|&d| {
            if d > 0.0 {
                Ok(1.0 / d)
            } else {
                Err(Error::invalid("singular value must be positive"))
            }
        })
        .collect::<Result<_>>()?;
    Ok(real.u_tilde.hermitian().matmul(&real.h).scale_rows(&inv_d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::make_realization;
    use crate::modem::modulate;
    use crate::rng::SeededRng;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_problem(seed: u64, m: usize, k: usize, radius: f64) -> LsqiProblem {
        let mut rng = SeededRng::new(seed, 0);
        let a = crate::rng::sample_complex_gaussian(&mut rng, m, k, 1.0).unwrap();
        let target = crate::rng::sample_complex_gaussian_vec(&mut rng, m, 1.0).unwrap();
        LsqiProblem::new(a, target, radius).unwrap()
    }

    fn random_symbols(seed: u64, m: usize) -> Vec<Complex64> {
        let mut rng = SeededRng::new(seed, crate::rng::stream::BITS);
        modulate(&rng.bits(2 * m)).unwrap()
    }

    #[test]
    fn interior_optimum() {
        let p = LsqiProblem::new(
            ComplexMatrix::identity(2),
            alloc::vec![cx(1.0, 0.0), cx(0.0, 0.0)],
            2.0,
        )
        .unwrap();
        let r = solve_norm_constrained_ls(&p).unwrap();
        assert!(!r.constraint_active);
        assert_eq!(r.lambda, 0.0);
        assert!((r.xi[0] - cx(1.0, 0.0)).norm() < 1e-12);
        assert!(r.xi[1].norm() < 1e-12);
        assert!(r.residual < 1e-12);
        verify_kkt(&p, &r).unwrap();
    }

    #[test]
    fn boundary_optimum_closed_form() {
        // ξ = target/(1+λ) with ‖ξ‖ = 1 forces λ = 4 and residual 4.
        let p = LsqiProblem::new(
            ComplexMatrix::identity(2),
            alloc::vec![cx(3.0, 0.0), cx(4.0, 0.0)],
            1.0,
        )
        .unwrap();
        let r = solve_norm_constrained_ls(&p).unwrap();
        assert!(r.constraint_active);
        assert!((r.lambda - 4.0).abs() < 1e-6, "lambda {}", r.lambda);
        assert!((r.xi[0] - cx(0.6, 0.0)).norm() < 1e-8);
        assert!((r.xi[1] - cx(0.8, 0.0)).norm() < 1e-8);
        assert!((r.residual - 4.0).abs() < 1e-8);
        verify_kkt(&p, &r).unwrap();
    }

    #[test]
    fn zero_matrix_yields_zero_signal() {
        let p = LsqiProblem::new(
            ComplexMatrix::zeros(2, 3),
            alloc::vec![cx(1.0, 1.0), cx(2.0, 0.0)],
            1.0,
        )
        .unwrap();
        let r = solve_norm_constrained_ls(&p).unwrap();
        assert!(!r.constraint_active);
        assert!(vec_norm(&r.xi) < 1e-15);
        assert!((r.residual - vec_norm(&p.target)).abs() < 1e-12);
        verify_kkt(&p, &r).unwrap();
    }

    #[test]
    fn feasibility_and_kkt_on_random_instances() {
        for seed in 0..50u64 {
            let m = 2 + (seed % 7) as usize;
            let k = 2 + ((seed / 7) % 7) as usize;
            let radius = if seed % 3 == 0 {
                0.2
            } else {
                (k as f64).sqrt()
            };
            let p = random_problem(1000 + seed, m, k, radius);
            let r = solve_norm_constrained_ls(&p).unwrap();
            assert!(vec_norm(&r.xi) <= radius * (1.0 + 1e-9));
            verify_kkt(&p, &r).unwrap();
        }
    }

    #[test]
    fn secular_map_is_strictly_decreasing() {
        let p = random_problem(42, 4, 6, 0.5);
        let lambdas = [0.0, 1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0];
        let norms: Vec<f64> = lambdas
            .iter()
            .map(|&l| vec_norm(&ridge_solution(&p.a, &p.target, l).unwrap()))
            .collect();
        for w in norms.windows(2) {
            assert!(w[0] > w[1], "norms not strictly decreasing: {norms:?}");
        }
    }

    #[test]
    fn interior_solution_is_homogeneous_in_target() {
        let p = random_problem(7, 4, 8, 100.0);
        let r1 = solve_norm_constrained_ls(&p).unwrap();
        assert!(!r1.constraint_active);
        let scaled = LsqiProblem::new(
            p.a.clone(),
            p.target.iter().map(|z| z * 3.0).collect(),
            100.0 * 3.0,
        )
        .unwrap();
        let r3 = solve_norm_constrained_ls(&scaled).unwrap();
        for (a, b) in r1.xi.iter().zip(&r3.xi) {
            assert!((a * 3.0 - b).norm() < 1e-9);
        }
    }

    #[test]
    fn aligned_channel_recovers_symbols() {
        let real = make_realization(&SeededRng::new(5, 1), 4, 8, 1.0).unwrap();
        let s = random_symbols(5, 4);

        let pas = build_pas(&real, &s).unwrap();
        assert!(!pas.constraint_active);
        assert!(pas.residual < 1e-9);
        for (x, want) in pas.xi.iter().zip(&s) {
            assert!((x - want).norm() < 1e-9);
        }

        let ascr = build_as(&real, &s).unwrap();
        assert!(ascr.residual < 1e-9);
        let direct = real.v.mul_vec(&s);
        for (x, want) in ascr.xi.iter().zip(&direct) {
            assert!((x - want).norm() < 1e-9);
        }
        assert!((vec_norm(&ascr.xi) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn direct_design_dominates_precoded() {
        for seed in 0..30u64 {
            let phi = (seed % 10) as f64 / 10.0;
            let real = make_realization(&SeededRng::new(100 + seed, seed), 4, 8, phi).unwrap();
            let s = random_symbols(200 + seed, 4);
            let pas = build_pas(&real, &s).unwrap();
            let ascr = build_as(&real, &s).unwrap();
            assert!(
                ascr.residual <= pas.residual + 1e-9,
                "phi {phi}: AS {} vs PAS {}",
                ascr.residual,
                pas.residual
            );
            assert!(vec_norm(&pas.xi) <= 8f64.sqrt() * (1.0 + 1e-9));
            assert!(vec_norm(&ascr.xi) <= 8f64.sqrt() * (1.0 + 1e-9));
            assert_eq!(pas.xi.len(), 4);
            assert_eq!(ascr.xi.len(), 8);
        }
    }

    #[test]
    fn rejects_invalid_problems() {
        let a = ComplexMatrix::identity(2);
        let t = alloc::vec![cx(1.0, 0.0), cx(0.0, 0.0)];
        assert!(LsqiProblem::new(a.clone(), alloc::vec![cx(1.0, 0.0)], 1.0).is_err());
        assert!(LsqiProblem::new(a.clone(), t.clone(), 0.0).is_err());
        assert!(LsqiProblem::new(a.clone(), t.clone(), f64::NAN).is_err());
        let mut bad = a;
        bad.set(0, 0, cx(f64::INFINITY, 0.0));
        assert!(LsqiProblem::new(bad, t, 1.0).is_err());
    }
}
