//! Error-vector, bit-error, and capacity metrics over batches of trials.
//!
//! Batches accumulate raw error vectors and bit counts; every reduction to a
//! scalar happens at read time. Merging two batches is associative, so
//! parallel workers can aggregate partial batches in any grouping without
//! changing the result.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::ComplexVector;

/// Lowest reportable error level in dB; perfect reception clamps here.
pub const EVM_FLOOR_DB: f64 = -150.0;

/// Largest reportable per-stream SINR; zero-error streams clamp here.
pub const SINR_CAP: f64 = 1e15;

/// Accumulated per-trial error vectors and bit counts for one receiver.
#[derive(Debug, Clone)]
pub struct MetricBatch {
    errors: Vec<ComplexVector>,
    signal_power: f64,
    bit_errors: u64,
    bit_total: u64,
}

impl MetricBatch {
    /// Starts an empty batch; `signal_power` is the per-stream reference
    /// power (1 for unit-energy constellations).
    pub fn new(signal_power: f64) -> Result<Self> {
        if !(signal_power > 0.0) || !signal_power.is_finite() {
            return Err(Error::invalid("signal power must be positive and finite"));
        }
        Ok(Self {
            errors: Vec::new(),
            signal_power,
            bit_errors: 0,
            bit_total: 0,
        })
    }

    /// Adds one trial's estimate error vector and its bit tallies.
    pub fn add_trial(
        &mut self,
        error: ComplexVector,
        bit_errors: u64,
        bit_total: u64,
    ) -> Result<()> {
        if error.is_empty() {
            return Err(Error::invalid("error vector must be nonempty"));
        }
        if let Some(first) = self.errors.first() {
            if error.len() != first.len() {
                return Err(Error::invalid("error vector length changed mid-batch"));
            }
        }
        if bit_errors > bit_total {
            return Err(Error::invalid("bit errors exceed bit total"));
        }
        self.errors.push(error);
        self.bit_errors += bit_errors;
        self.bit_total += bit_total;
        Ok(())
    }

    /// Merges another batch in; associative with `add_trial` ordering.
    pub fn merge(&mut self, other: MetricBatch) -> Result<()> {
        if (other.signal_power - self.signal_power).abs() > 1e-12 {
            return Err(Error::invalid(
                "cannot merge batches with different signal powers",
            ));
        }
        if let (Some(a), Some(b)) = (self.errors.first(), other.errors.first()) {
            if a.len() != b.len() {
                return Err(Error::invalid(
                    "cannot merge batches with different stream counts",
                ));
            }
        }
        self.errors.extend(other.errors);
        self.bit_errors += other.bit_errors;
        self.bit_total += other.bit_total;
        Ok(())
    }

    pub fn trials(&self) -> usize {
        self.errors.len()
    }

    pub fn bit_errors(&self) -> u64 {
        self.bit_errors
    }

    pub fn bit_total(&self) -> u64 {
        self.bit_total
    }

    pub fn signal_power(&self) -> f64 {
        self.signal_power
    }

    fn streams(&self) -> Result<usize> {
        self.errors
            .first()
            .map(|e| e.len())
            .ok_or_else(|| Error::invalid("metric batch is empty"))
    }
}

/// Aggregate error magnitude in dB: 10·log10(Σ‖e‖² / Σ‖s_ref‖²), clamped at
/// the floor. Aggregation happens in the power domain, not per-trial in dB.
pub fn evm_db(batch: &MetricBatch) -> Result<f64> {
    let streams = batch.streams()?;
    let error_power: f64 = batch
        .errors
        .iter()
        .flat_map(|e| e.iter())
        .map(|z| z.norm_sqr())
        .sum();
    let reference_power = batch.trials() as f64 * streams as f64 * batch.signal_power;
    let ratio = error_power / reference_power;
    Ok((10.0 * ratio.log10()).max(EVM_FLOOR_DB))
}

/// Fraction of bits in error.
pub fn ber(batch: &MetricBatch) -> Result<f64> {
    if batch.bit_total == 0 {
        return Err(Error::invalid("no bits recorded"));
    }
    Ok(batch.bit_errors as f64 / batch.bit_total as f64)
}

/// Per-stream SINR: signal power over the mean squared error of that stream,
/// capped for zero-error streams.
pub fn stream_sinr(batch: &MetricBatch) -> Result<Vec<f64>> {
    let streams = batch.streams()?;
    let trials = batch.trials() as f64;
    let mut mean_power = vec![0.0; streams];
    for e in &batch.errors {
        for (k, z) in e.iter().enumerate() {
            mean_power[k] += z.norm_sqr();
        }
    }
    Ok(mean_power
        .iter()
        .map(|&p| {
            let mean = p / trials;
            if mean <= 0.0 {
                SINR_CAP
            } else {
                (batch.signal_power / mean).min(SINR_CAP)
            }
        })
        .collect())
}

/// Sum of per-stream Shannon capacities, bits per channel use.
pub fn sum_capacity(sinr: &[f64]) -> Result<f64> {
    for &s in sinr {
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::invalid(
                "SINR entries must be nonnegative and finite",
            ));
        }
    }
    Ok(sinr.iter().map(|&s| (1.0 + s).log2()).sum())
}

/// Nonnegative capacity difference between the legitimate receiver and the
/// eavesdropper.
pub fn secrecy_capacity(sinr_bob: &[f64], sinr_eve: &[f64]) -> Result<f64> {
    if sinr_bob.len() != sinr_eve.len() {
        return Err(Error::invalid("SINR vector lengths differ"));
    }
    let diff = sum_capacity(sinr_bob)? - sum_capacity(sinr_eve)?;
    Ok(diff.max(0.0))
}
