//! Link-level toolkit for artificial-signal transmission over mismatched
//! MIMO precoders.
//!
//! A transmitter restricted to a fixed codebook precoder loses the alignment
//! between the channel's singular vectors and the precoding operation. The
//! signal designs in [`artsig`] recover that alignment at the waveform
//! level: they solve a norm-ball-constrained least-squares problem so the
//! receiver's fixed combiner sees the intended symbols, while an
//! eavesdropper relying on the public precoder does not. The crate provides
//! the complex linear algebra, seeded randomness, modulation, channel
//! modeling, link chains, and metrics needed to quantify both effects.
//!
//! The crate is `no_std`-compatible (with `alloc`); the `std` feature, on by
//! default, only forwards to the dependencies' standard-library support.

#![cfg_attr(not(feature = "std"), no_std)]
// Validation guards are written `!(x > 0.0)` on purpose: the negated form is
// true for NaN, so non-finite inputs fail validation — a rewritten `x <= 0.0`
// would let NaN through. Indexed loops are kept where they mirror the
// subscripts of the formulas they implement.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod artsig;
pub mod channel;
pub mod error;
pub mod linalg;
pub mod link;
pub mod metrics;
pub mod modem;
pub mod rng;

pub use artsig::{
    as_operator, build_as, build_pas, pas_operator, ridge_solution, solve_norm_constrained_ls,
    verify_kkt, LsqiProblem, SolverResult, DEFAULT_SOLVER_TOL,
};
pub use channel::{
    derive_codebook, generate_channel, induce_mismatch, make_eve, make_realization,
    ChannelRealization, EveChannel,
};
pub use error::{Error, Result};
pub use linalg::{
    pseudo_inverse, svd, vec_norm, vec_sub, ComplexMatrix, ComplexVector, SvdTriple,
    DEFAULT_RANK_TOL,
};
pub use link::{
    draw_symbols, propagate, receive_bob, receive_bob_ideal, receive_eve, run_trial,
    scheme_transmission, transmit, Scheme, TrialRecord,
};
pub use metrics::{ber, evm_db, secrecy_capacity, stream_sinr, sum_capacity, MetricBatch};
pub use modem::{demodulate, modulate};
pub use rng::SeededRng;
