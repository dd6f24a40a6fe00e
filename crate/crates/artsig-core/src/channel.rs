//! Channel realizations: the true channel, the mismatch term, the induced
//! channel blending the two, and the public codebook factors derived from it.
//!
//! A `ChannelRealization` is a pure function of the trial RNG and the mixing
//! parameter phi. The codebook pair (U_tilde, V_tilde) comes from the same
//! canonicalized SVD as the true factors, so phi = 1 reproduces the true
//! factors exactly rather than merely approximately.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{pseudo_inverse, svd, ComplexMatrix, DEFAULT_RANK_TOL};
use crate::rng::{sample_complex_gaussian, stream, SeededRng};

/// Relative singular-value floor below which a draw counts as degenerate.
const DEGENERATE_TOL: f64 = 1e-9;

/// Redraw budget before giving up on a trial's channel stream.
const MAX_DRAW_ATTEMPTS: u32 = 16;

/// True channel, mismatch, induced channel, and both factor sets for one trial.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    /// True Bob channel, M×N.
    pub h: ComplexMatrix,
    /// Mismatch term, M×N.
    pub w: ComplexMatrix,
    /// Mixing parameter in [0, 1]; 1 means perfect precoder alignment.
    pub phi: f64,
    /// Induced channel √φ·H + (1−√φ)·W.
    pub h_tilde: ComplexMatrix,
    /// True left factor, M×M.
    pub u: ComplexMatrix,
    /// True singular values, length M, strictly positive.
    pub d: Vec<f64>,
    /// First M true right singular vectors, N×M.
    pub v: ComplexMatrix,
    /// Codebook combiner from the induced channel, M×M.
    pub u_tilde: ComplexMatrix,
    /// Codebook precoder from the induced channel, N×M.
    pub v_tilde: ComplexMatrix,
}

impl ChannelRealization {
    /// Receive antenna count M.
    pub fn rx_count(&self) -> usize {
        self.h.rows()
    }

    /// Transmit antenna count N.
    pub fn tx_count(&self) -> usize {
        self.h.cols()
    }
}

/// Eavesdropper channel with its cached left inverse.
#[derive(Debug, Clone)]
pub struct EveChannel {
    /// Alice-to-Eve channel, L×N with L > N.
    pub h_breve: ComplexMatrix,
    /// Pseudo-inverse, N×L; `h_breve_pinv · h_breve ≈ I_N`.
    pub h_breve_pinv: ComplexMatrix,
}

impl EveChannel {
    /// Eavesdropper antenna count L.
    pub fn antenna_count(&self) -> usize {
        self.h_breve.rows()
    }
}

/// Draws an rx×tx channel with i.i.d. unit-variance complex Gaussian entries.
pub fn generate_channel(rng: &mut SeededRng, rx: usize, tx: usize) -> Result<ComplexMatrix> {
    sample_complex_gaussian(rng, rx, tx, 1.0)
}

/// Blends the true channel with the mismatch term: √φ·H + (1−√φ)·W.
///
/// Both scalars are real, so φ = 1 returns H and φ = 0 returns W without
/// any floating-point perturbation.
pub fn induce_mismatch(h: &ComplexMatrix, w: &ComplexMatrix, phi: f64) -> Result<ComplexMatrix> {
    if h.rows() != w.rows() || h.cols() != w.cols() {
        return Err(Error::invalid("channel and mismatch shapes differ"));
    }
    if !(0.0..=1.0).contains(&phi) {
        return Err(Error::invalid("phi must lie in [0, 1]"));
    }
    let root = phi.sqrt();
    let blend = |a: Complex64, b: Complex64| {
        Complex64::new(
            root * a.re + (1.0 - root) * b.re,
            root * a.im + (1.0 - root) * b.im,
        )
    };
    Ok(ComplexMatrix::from_fn(h.rows(), h.cols(), |r, c| {
        blend(h.get(r, c), w.get(r, c))
    }))
}

/// Extracts the public codebook pair from the induced channel: the full left
/// factor and the first `streams` right singular vectors.
pub fn derive_codebook(
    h_tilde: &ComplexMatrix,
    streams: usize,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let rank_limit = h_tilde.rows().min(h_tilde.cols());
    if streams == 0 || streams > rank_limit {
        return Err(Error::invalid(
            "stream count must be in 1..=min(rows, cols)",
        ));
    }
    let t = svd(h_tilde)?;
    if t.singular_values[streams - 1] <= DEGENERATE_TOL * t.singular_values[0] {
        return Err(Error::invalid("stream count exceeds induced channel rank"));
    }
    let u_tilde = t.left;
    let v_tilde = t.right.leading_columns(streams);
    Ok((u_tilde, v_tilde))
}

/// Builds a full realization from the trial RNG. The channel and mismatch
/// substreams depend only on the trial RNG, not on phi, so every phi shares
/// the same (H, W) pair.
pub fn make_realization(
    trial_rng: &SeededRng,
    m: usize,
    n: usize,
    phi: f64,
) -> Result<ChannelRealization> {
    if m == 0 || m > n {
        return Err(Error::invalid("antenna counts must satisfy 1 <= M <= N"));
    }
    if !(0.0..=1.0).contains(&phi) {
        return Err(Error::invalid("phi must lie in [0, 1]"));
    }
    let mut h_rng = trial_rng.substream(stream::CHANNEL_H);
    let mut w_rng = trial_rng.substream(stream::MISMATCH_W);

    for _ in 0..MAX_DRAW_ATTEMPTS {
        let h = generate_channel(&mut h_rng, m, n)?;
        let w = generate_channel(&mut w_rng, m, n)?;
        let th = svd(&h)?;
        if th.singular_values[m - 1] <= DEGENERATE_TOL * th.singular_values[0] {
            continue;
        }
        let h_tilde = induce_mismatch(&h, &w, phi)?;
        // A rank-deficient induced channel cannot host a codebook; redraw.
        let (u_tilde, v_tilde) = match derive_codebook(&h_tilde, m) {
            Ok(pair) => pair,
            Err(_) => continue,
        };
        let u = th.left;
        let d = th.singular_values;
        let v = th.right.leading_columns(m);
        return Ok(ChannelRealization {
            h,
            w,
            phi,
            h_tilde,
            u,
            d,
            v,
            u_tilde,
            v_tilde,
        });
    }
    Err(Error::RejectedRealization {
        attempts: MAX_DRAW_ATTEMPTS,
    })
}

/// Builds the eavesdropper channel and caches its pseudo-inverse.
pub fn make_eve(trial_rng: &SeededRng, l: usize, n: usize) -> Result<EveChannel> {
    if n == 0 || l <= n {
        return Err(Error::invalid("eavesdropper needs L > N >= 1 antennas"));
    }
    let mut e_rng = trial_rng.substream(stream::EVE_CHANNEL);
    for _ in 0..MAX_DRAW_ATTEMPTS {
        let h_breve = generate_channel(&mut e_rng, l, n)?;
        let t = svd(&h_breve)?;
        if t.singular_values[n - 1] <= DEGENERATE_TOL * t.singular_values[0] {
            continue;
        }
        let h_breve_pinv = pseudo_inverse(&h_breve, DEFAULT_RANK_TOL)?;
        return Ok(EveChannel {
            h_breve,
            h_breve_pinv,
        });
    }
    Err(Error::RejectedRealization {
        attempts: MAX_DRAW_ATTEMPTS,
    })
}
