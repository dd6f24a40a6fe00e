//! End-to-end transmit, propagate, and receive chains for every scheme.
//!
//! All four schemes share one trial's channel, symbols, and noise. Noise is
//! drawn from named substreams of the trial RNG, so re-deriving the same
//! substream replays identical noise for every scheme and for every SNR
//! point (scaled deterministically by the noise variance).

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::artsig::{build_as, build_pas, SolverResult};
use crate::channel::{ChannelRealization, EveChannel};
use crate::error::{Error, Result};
use crate::linalg::{vec_norm, ComplexMatrix, ComplexVector};
use crate::rng::{stream, SeededRng};

/// Transmission scheme under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scheme {
    /// True-factor precoding and combining; the performance reference.
    Ideal,
    /// Codebook precoder with the mismatched combiner chain.
    Conventional,
    /// Precoded artificial signal: length-M design sent through the codebook precoder.
    Pas,
    /// Direct artificial signal: length-N design sent without a precoder.
    As,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Ideal, Scheme::Conventional, Scheme::Pas, Scheme::As];

    /// Stable lowercase name used in CSV output and CLI parsing.
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Ideal => "ideal",
            Scheme::Conventional => "conventional",
            Scheme::Pas => "pas",
            Scheme::As => "as",
        }
    }
}

/// Everything observed in one trial of one scheme.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub scheme: Scheme,
    /// Information symbols, length M.
    pub s: ComplexVector,
    /// Transmitted vector, length N.
    pub tx: ComplexVector,
    /// ‖tx‖²; ≤ N for the signal designs, = M for symbol transmission.
    pub radiated_power: f64,
    /// Bob's symbol estimates, length M.
    pub s_hat_bob: ComplexVector,
    /// Eve's symbol estimates, length M; absent when Eve is disabled.
    pub s_breve_eve: Option<ComplexVector>,
    pub snr_db: f64,
    pub phi: f64,
    /// Root-finding iterations spent by the signal design (zero otherwise).
    pub solver_iterations: u32,
}

/// Builds the transmitted length-N vector for a scheme.
pub fn transmit(
    scheme: Scheme,
    real: &ChannelRealization,
    s: &[Complex64],
) -> Result<ComplexVector> {
    Ok(scheme_transmission(scheme, real, s)?.0)
}

/// Transmission plus the solver output when the scheme runs one. The result
/// is independent of the noise level, so sweeps reuse it across SNR points.
pub fn scheme_transmission(
    scheme: Scheme,
    real: &ChannelRealization,
    s: &[Complex64],
) -> Result<(ComplexVector, Option<SolverResult>)> {
    if s.len() != real.rx_count() {
        return Err(Error::invalid("symbol count does not match stream count"));
    }
    match scheme {
        Scheme::Ideal => Ok((real.v.mul_vec(s), None)),
        Scheme::Conventional => Ok((real.v_tilde.mul_vec(s), None)),
        Scheme::Pas => {
            let sol = build_pas(real, s)?;
            let tx = real.v_tilde.mul_vec(&sol.xi);
            Ok((tx, Some(sol)))
        }
        Scheme::As => {
            let sol = build_as(real, s)?;
            Ok((sol.xi.clone(), Some(sol)))
        }
    }
}

/// Applies a channel and adds receiver noise with per-entry variance 1/γ.
/// An infinite γ selects the noise-free mode.
pub fn propagate(
    channel: &ComplexMatrix,
    tx: &[Complex64],
    rng: &mut SeededRng,
    gamma: f64,
) -> Result<ComplexVector> {
    if channel.cols() != tx.len() {
        return Err(Error::invalid(format!(
            "transmit vector length {} does not match channel columns {}",
            tx.len(),
            channel.cols()
        )));
    }
    if !(gamma > 0.0) {
        return Err(Error::invalid("gamma must be positive or infinite"));
    }
    let mut y = channel.mul_vec(tx);
    if gamma.is_finite() {
        let variance = 1.0 / gamma;
        for entry in y.iter_mut() {
            *entry += rng.complex_normal(variance);
        }
    }
    Ok(y)
}

/// Bob's practical combiner: diag(D)^{-1}·Ũ^H·y.
pub fn receive_bob(y: &[Complex64], real: &ChannelRealization) -> Result<ComplexVector> {
    combine(y, &real.u_tilde, &real.d)
}

/// Bob's reference combiner with the true factors: diag(D)^{-1}·U^H·y.
pub fn receive_bob_ideal(y: &[Complex64], real: &ChannelRealization) -> Result<ComplexVector> {
    combine(y, &real.u, &real.d)
}

fn combine(y: &[Complex64], left: &ComplexMatrix, d: &[f64]) -> Result<ComplexVector> {
    if y.len() != left.rows() {
        return Err(Error::invalid(
            "received vector length does not match combiner",
        ));
    }
    let mut out = left.adjoint_mul_vec(y);
    for (entry, &dk) in out.iter_mut().zip(d) {
        if !(dk > 0.0) {
            return Err(Error::invalid("singular value must be positive"));
        }
        *entry /= dk;
    }
    Ok(out)
}

/// Eve's combiner: Ṽ^H·H̆⁺·y.
pub fn receive_eve(
    y_eve: &[Complex64],
    eve: &EveChannel,
    real: &ChannelRealization,
) -> Result<ComplexVector> {
    if y_eve.len() != eve.h_breve.rows() {
        return Err(Error::invalid(
            "received vector length does not match eavesdropper array",
        ));
    }
    let projected = eve.h_breve_pinv.mul_vec(y_eve);
    Ok(real.v_tilde.adjoint_mul_vec(&projected))
}

/// Runs one scheme through one trial: transmit, propagate to Bob (and Eve
/// when present), and combine. Noise substreams are re-derived from the trial
/// RNG, so every scheme in the trial sees identical noise.
pub fn run_trial(
    scheme: Scheme,
    real: &ChannelRealization,
    eve: Option<&EveChannel>,
    s: &[Complex64],
    trial_rng: &SeededRng,
    gamma: f64,
    snr_db: f64,
) -> Result<TrialRecord> {
    let (tx, sol) = scheme_transmission(scheme, real, s)?;
    let radiated_power = vec_norm(&tx).powi(2);

    let mut bob_noise = trial_rng.substream(stream::NOISE_BOB);
    let y_bob = propagate(&real.h, &tx, &mut bob_noise, gamma)?;
    let s_hat_bob = match scheme {
        Scheme::Ideal => receive_bob_ideal(&y_bob, real)?,
        _ => receive_bob(&y_bob, real)?,
    };

    let s_breve_eve = match eve {
        Some(eve) => {
            let mut eve_noise = trial_rng.substream(stream::NOISE_EVE);
            let y_eve = propagate(&eve.h_breve, &tx, &mut eve_noise, gamma)?;
            Some(receive_eve(&y_eve, eve, real)?)
        }
        None => None,
    };

    Ok(TrialRecord {
        scheme,
        s: s.to_vec(),
        tx,
        radiated_power,
        s_hat_bob,
        s_breve_eve,
        snr_db,
        phi: real.phi,
        solver_iterations: sol.map(|r| r.iterations).unwrap_or(0),
    })
}

/// Draws the trial's information symbols from the bit substream.
pub fn draw_symbols(trial_rng: &SeededRng, streams: usize) -> Result<(Vec<u8>, ComplexVector)> {
    let mut bit_rng = trial_rng.substream(stream::BITS);
    let bits = bit_rng.bits(streams * crate::modem::BITS_PER_SYMBOL);
    let symbols = crate::modem::modulate(&bits)?;
    Ok((bits, symbols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artsig::{build_as, build_pas};
    use crate::channel::{make_eve, make_realization};
    use crate::linalg::vec_sub;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn setup(seed: u64, trial: u64, phi: f64) -> (SeededRng, ChannelRealization) {
        let rng = SeededRng::new(seed, trial);
        let real = make_realization(&rng, 4, 8, phi).unwrap();
        (rng, real)
    }

    #[test]
    fn propagate_identity_noise_free() {
        let h = ComplexMatrix::identity(3);
        let tx = alloc::vec![cx(1.0, 2.0), cx(-0.5, 0.0), cx(0.0, -1.0)];
        let mut rng = SeededRng::new(1, 0);
        let y = propagate(&h, &tx, &mut rng, f64::INFINITY).unwrap();
        assert_eq!(y, tx);
    }

    #[test]
    fn propagate_noise_statistics() {
        // At gamma = 2 (3 dB) the per-entry noise variance is 1/2.
        let h = ComplexMatrix::zeros(4, 4);
        let tx = alloc::vec![cx(0.0, 0.0); 4];
        let mut rng = SeededRng::new(9, stream::NOISE_BOB);
        let trials = 25_000usize;
        let mut power = 0.0;
        for _ in 0..trials {
            let y = propagate(&h, &tx, &mut rng, 2.0).unwrap();
            power += y.iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
        let per_entry = power / (trials * 4) as f64;
        assert!((per_entry - 0.5).abs() < 0.01, "noise variance {per_entry}");
    }

    #[test]
    fn propagate_noise_is_replayable() {
        let h = ComplexMatrix::identity(2);
        let tx = alloc::vec![cx(1.0, 0.0), cx(0.0, 1.0)];
        let root = SeededRng::new(3, 17);
        let a = propagate(&h, &tx, &mut root.substream(stream::NOISE_BOB), 4.0).unwrap();
        let b = propagate(&h, &tx, &mut root.substream(stream::NOISE_BOB), 4.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn propagate_validates() {
        let h = ComplexMatrix::identity(2);
        let mut rng = SeededRng::new(0, 0);
        assert!(propagate(&h, &[cx(1.0, 0.0)], &mut rng, 1.0).is_err());
        assert!(propagate(&h, &[cx(1.0, 0.0), cx(0.0, 0.0)], &mut rng, 0.0).is_err());
        assert!(propagate(&h, &[cx(1.0, 0.0), cx(0.0, 0.0)], &mut rng, -1.0).is_err());
    }

    #[test]
    fn ideal_chain_is_exact_at_any_phi() {
        for phi in [0.0, 0.3, 0.8] {
            let (rng, real) = setup(11, 2, phi);
            let (_, s) = draw_symbols(&rng, 4).unwrap();
            let rec = run_trial(
                Scheme::Ideal,
                &real,
                None,
                &s,
                &rng,
                f64::INFINITY,
                f64::INFINITY,
            )
            .unwrap();
            let err = vec_norm(&vec_sub(&rec.s_hat_bob, &s));
            assert!(err < 1e-9, "phi {phi}: ideal error {err}");
            assert!((rec.radiated_power - 4.0).abs() < 1e-9);
        }
    }

    #[test]
    fn conventional_chain_is_exact_at_alignment() {
        let (rng, real) = setup(13, 0, 1.0);
        let (_, s) = draw_symbols(&rng, 4).unwrap();
        let rec = run_trial(
            Scheme::Conventional,
            &real,
            None,
            &s,
            &rng,
            f64::INFINITY,
            f64::INFINITY,
        )
        .unwrap();
        assert!(vec_norm(&vec_sub(&rec.s_hat_bob, &s)) < 1e-9);
        assert!((rec.radiated_power - 4.0).abs() < 1e-9);
    }

    #[test]
    fn design_chains_match_solver_residuals() {
        // Bob's noise-free estimation error equals the solver residual.
        for (trial, phi) in [(0u64, 0.5), (1, 0.2), (2, 0.8)] {
            let (rng, real) = setup(17, trial, phi);
            let (_, s) = draw_symbols(&rng, 4).unwrap();
            for scheme in [Scheme::Pas, Scheme::As] {
                let rec =
                    run_trial(scheme, &real, None, &s, &rng, f64::INFINITY, f64::INFINITY).unwrap();
                let err = vec_norm(&vec_sub(&rec.s_hat_bob, &s));
                let sol = match scheme {
                    Scheme::Pas => build_pas(&real, &s).unwrap(),
                    _ => build_as(&real, &s).unwrap(),
                };
                assert!(
                    (err - sol.residual).abs() < 1e-9,
                    "{}: chain {err} vs solver {}",
                    scheme.name(),
                    sol.residual
                );
            }
        }
    }

    #[test]
    fn power_accounting() {
        let (rng, real) = setup(19, 4, 0.3);
        let (_, s) = draw_symbols(&rng, 4).unwrap();
        for scheme in Scheme::ALL {
            let rec =
                run_trial(scheme, &real, None, &s, &rng, f64::INFINITY, f64::INFINITY).unwrap();
            match scheme {
                Scheme::Ideal | Scheme::Conventional => {
                    assert!((rec.radiated_power - 4.0).abs() < 1e-9, "{}", scheme.name());
                }
                Scheme::Pas | Scheme::As => {
                    assert!(
                        rec.radiated_power <= 8.0 * (1.0 + 1e-9),
                        "{}",
                        scheme.name()
                    );
                }
            }
            assert_eq!(rec.tx.len(), 8);
        }
    }

    #[test]
    fn eve_conventional_chain_is_exact() {
        for phi in [0.1, 0.6, 1.0] {
            let (rng, real) = setup(23, 1, phi);
            let eve = make_eve(&rng, 32, 8).unwrap();
            let (_, s) = draw_symbols(&rng, 4).unwrap();
            let rec = run_trial(
                Scheme::Conventional,
                &real,
                Some(&eve),
                &s,
                &rng,
                f64::INFINITY,
                f64::INFINITY,
            )
            .unwrap();
            let s_breve = rec.s_breve_eve.unwrap();
            let err = vec_norm(&vec_sub(&s_breve, &s));
            assert!(err < 1e-7, "phi {phi}: eve error {err}");
        }
    }

    #[test]
    fn eve_sees_projected_design_noise_free() {
        let (rng, real) = setup(29, 3, 0.4);
        let eve = make_eve(&rng, 32, 8).unwrap();
        let (_, s) = draw_symbols(&rng, 4).unwrap();
        let rec = run_trial(
            Scheme::As,
            &real,
            Some(&eve),
            &s,
            &rng,
            f64::INFINITY,
            f64::INFINITY,
        )
        .unwrap();
        // Noise-free: s̆ = Ṽ^H·(H̆⁺H̆)·x = Ṽ^H·x.
        let want = real.v_tilde.adjoint_mul_vec(&rec.tx);
        let got = rec.s_breve_eve.unwrap();
        let err = vec_norm(&vec_sub(&got, &want));
        assert!(err < 1e-7, "eve projection error {err}");
    }

    #[test]
    fn noise_is_shared_across_schemes() {
        let (rng, real) = setup(31, 6, 0.5);
        let (_, s) = draw_symbols(&rng, 4).unwrap();
        // Identical transmissions must see identical noisy receptions, even
        // across separate run_trial calls for different schemes.
        let a = run_trial(Scheme::Ideal, &real, None, &s, &rng, 10.0, 10.0).unwrap();
        let b = run_trial(Scheme::Ideal, &real, None, &s, &rng, 10.0, 10.0).unwrap();
        assert_eq!(a.s_hat_bob, b.s_hat_bob);
        let noise_a =
            propagate(&real.h, &a.tx, &mut rng.substream(stream::NOISE_BOB), 10.0).unwrap();
        let noise_b =
            propagate(&real.h, &b.tx, &mut rng.substream(stream::NOISE_BOB), 10.0).unwrap();
        assert_eq!(noise_a, noise_b);
    }

    #[test]
    fn noise_scales_deterministically_across_snr() {
        // The same substream at two gammas yields the same normals scaled
        // by √(γ₁/γ₂).
        let h = ComplexMatrix::zeros(2, 2);
        let tx = alloc::vec![cx(0.0, 0.0); 2];
        let root = SeededRng::new(37, 8);
        let y1 = propagate(&h, &tx, &mut root.substream(stream::NOISE_BOB), 1.0).unwrap();
        let y4 = propagate(&h, &tx, &mut root.substream(stream::NOISE_BOB), 4.0).unwrap();
        for (a, b) in y1.iter().zip(&y4) {
            assert!((a - b * 2.0).norm() < 1e-12);
        }
    }

    #[test]
    fn symbols_are_deterministic_per_trial() {
        let rng = SeededRng::new(41, 9);
        let (bits_a, s_a) = draw_symbols(&rng, 4).unwrap();
        let (bits_b, s_b) = draw_symbols(&rng, 4).unwrap();
        assert_eq!(bits_a, bits_b);
        assert_eq!(s_a, s_b);
        assert_eq!(bits_a.len(), 8);
        assert_eq!(s_a.len(), 4);
    }
}
