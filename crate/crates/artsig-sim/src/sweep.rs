//! Monte Carlo sweep runner.
//!
//! Iterates the experiment grid (receiver antennas × alignment quality ×
//! SNR), running every configured scheme through shared channel, symbol, and
//! noise draws so that per-scheme curves differ only in the transmit design.
//! Trials run in parallel; aggregation folds in trial order, so results are
//! deterministic for a fixed seed regardless of thread count.

use crate::config::ExperimentConfig;
use artsig_core::rng::stream;
use artsig_core::{
    ber, evm_db, make_eve, make_realization, propagate, receive_bob, receive_bob_ideal,
    receive_eve, scheme_transmission, secrecy_capacity, stream_sinr, sum_capacity, vec_norm,
    vec_sub, ComplexVector, Error, MetricBatch, Result, Scheme, SeededRng,
};
use rayon::prelude::*;

/// Which end of the wiretap link a result row describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Receiver {
    Bob,
    Eve,
}

impl Receiver {
    pub fn name(&self) -> &'static str {
        match self {
            Receiver::Bob => "bob",
            Receiver::Eve => "eve",
        }
    }
}

/// One aggregated grid cell of a sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub scheme: Scheme,
    pub receiver: Receiver,
    pub n: usize,
    pub phi: f64,
    /// Per-stream SNR in dB; infinite for noise-free sweeps.
    pub snr_db: f64,
    pub trials: usize,
    pub evm_db: f64,
    pub ber: f64,
    /// Bob's sum capacity for this cell; repeated on the matching Eve row.
    pub capacity_bob: f64,
    /// Eve's sum capacity; NaN when the eavesdropper is disabled.
    pub capacity_eve: f64,
    /// Secrecy capacity of the pair; NaN when the eavesdropper is disabled.
    pub secrecy: f64,
    pub mean_radiated_power: f64,
    pub mean_solver_iterations: f64,
}

/// All rows of one sweep in canonical order.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Looks up a single cell. Float coordinates match within 1e-9.
    pub fn row(
        &self,
        scheme: Scheme,
        receiver: Receiver,
        n: usize,
        phi: f64,
        snr_db: f64,
    ) -> Option<&SweepRow> {
        self.rows.iter().find(|r| {
            r.scheme == scheme
                && r.receiver == receiver
                && r.n == n
                && (r.phi - phi).abs() < 1e-9
                && (r.snr_db == snr_db || (r.snr_db - snr_db).abs() < 1e-9)
        })
    }
}

/// Per-trial observations for one scheme: error vectors and bit error counts
/// for every SNR point, plus the noise-independent design diagnostics.
struct SchemeTrialOut {
    bob: Vec<(ComplexVector, u64)>,
    eve: Option<Vec<(ComplexVector, u64)>>,
    radiated_power: f64,
    solver_iterations: u32,
}

/// Running aggregate for one (scheme, n, phi) cell across all trials.
struct CellAcc {
    bob: Vec<MetricBatch>,
    eve: Option<Vec<MetricBatch>>,
    radiated_sum: f64,
    iteration_sum: u64,
}

impl CellAcc {
    fn new(snr_points: usize, with_eve: bool) -> Result<Self> {
        let fresh = |_| MetricBatch::new(1.0);
        Ok(Self {
            bob: (0..snr_points).map(fresh).collect::<Result<_>>()?,
            eve: if with_eve {
                Some((0..snr_points).map(fresh).collect::<Result<_>>()?)
            } else {
                None
            },
            radiated_sum: 0.0,
            iteration_sum: 0,
        })
    }

    fn fold(&mut self, out: SchemeTrialOut) -> Result<()> {
        for (batch, (error, bit_errors)) in self.bob.iter_mut().zip(out.bob) {
            let bit_total = error.len() as u64 * 2;
            batch.add_trial(error, bit_errors, bit_total)?;
        }
        if let (Some(batches), Some(observations)) = (self.eve.as_mut(), out.eve) {
            for (batch, (error, bit_errors)) in batches.iter_mut().zip(observations) {
                let bit_total = error.len() as u64 * 2;
                batch.add_trial(error, bit_errors, bit_total)?;
            }
        }
        self.radiated_sum += out.radiated_power;
        self.iteration_sum += u64::from(out.solver_iterations);
        Ok(())
    }
}

/// Runs the full sweep described by `config`.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepResult> {
    config.validate()?;
    let snr_points: Vec<f64> = if config.noise_free {
        vec![f64::INFINITY]
    } else {
        config.snr_grid_db.clone()
    };

    let mut rows = Vec::new();
    for &n in &config.n_list {
        for &phi in &config.phi_grid {
            let cell_rows = run_cell(config, n, phi, &snr_points)?;
            rows.extend(cell_rows);
        }
    }
    rows.sort_by(|a, b| {
        a.scheme
            .name()
            .cmp(b.scheme.name())
            .then(a.receiver.name().cmp(b.receiver.name()))
            .then(a.n.cmp(&b.n))
            .then(a.phi.total_cmp(&b.phi))
            .then(a.snr_db.total_cmp(&b.snr_db))
    });
    Ok(SweepResult { rows })
}

/// Runs all trials for one (n, phi) cell and aggregates every scheme and SNR
/// point into rows.
fn run_cell(
    config: &ExperimentConfig,
    n: usize,
    phi: f64,
    snr_points: &[f64],
) -> Result<Vec<SweepRow>> {
    let trial_outputs: Result<Vec<Vec<SchemeTrialOut>>> = (0..config.trials)
        .into_par_iter()
        .map(|trial| run_one_trial(config, n, phi, snr_points, trial as u64))
        .collect();
    let trial_outputs = trial_outputs?;

    let mut accs: Vec<CellAcc> = config
        .schemes
        .iter()
        .map(|_| CellAcc::new(snr_points.len(), config.eve_enabled))
        .collect::<Result<_>>()?;
    for per_scheme in trial_outputs {
        for (acc, out) in accs.iter_mut().zip(per_scheme) {
            acc.fold(out)?;
        }
    }

    let mut rows = Vec::new();
    for (scheme, acc) in config.schemes.iter().zip(&accs) {
        for (snr_idx, &snr_db) in snr_points.iter().enumerate() {
            rows.extend(finish_cell(config, *scheme, n, phi, snr_db, acc, snr_idx)?);
        }
    }
    Ok(rows)
}

/// Simulates every scheme for one trial: one channel draw, one symbol draw,
/// and shared noise across schemes and SNR points.
fn run_one_trial(
    config: &ExperimentConfig,
    n: usize,
    phi: f64,
    snr_points: &[f64],
    trial: u64,
) -> Result<Vec<SchemeTrialOut>> {
    let trial_rng = SeededRng::new(config.master_seed, trial);
    let real = make_realization(&trial_rng, config.m, n, phi)?;
    let eve = if config.eve_enabled {
        Some(make_eve(&trial_rng, config.l, n)?)
    } else {
        None
    };
    let (bits, s) = artsig_core::draw_symbols(&trial_rng, config.m)?;

    let mut outputs = Vec::with_capacity(config.schemes.len());
    for &scheme in &config.schemes {
        let (tx, sol) = scheme_transmission(scheme, &real, &s)?;
        let radiated_power = vec_norm(&tx).powi(2);
        let solver_iterations = sol.map(|r| r.iterations).unwrap_or(0);

        let mut bob = Vec::with_capacity(snr_points.len());
        let mut eve_obs = eve.as_ref().map(|_| Vec::with_capacity(snr_points.len()));
        for &snr_db in snr_points {
            let gamma = snr_to_gamma(snr_db);
            let mut bob_noise = trial_rng.substream(stream::NOISE_BOB);
            let y_bob = propagate(&real.h, &tx, &mut bob_noise, gamma)?;
            let s_hat = match scheme {
                Scheme::Ideal => receive_bob_ideal(&y_bob, &real)?,
                _ => receive_bob(&y_bob, &real)?,
            };
            bob.push(observe(&s_hat, &s, &bits));

            if let (Some(eve), Some(obs)) = (eve.as_ref(), eve_obs.as_mut()) {
                let mut eve_noise = trial_rng.substream(stream::NOISE_EVE);
                let y_eve = propagate(&eve.h_breve, &tx, &mut eve_noise, gamma)?;
                let s_breve = receive_eve(&y_eve, eve, &real)?;
                obs.push(observe(&s_breve, &s, &bits));
            }
        }
        outputs.push(SchemeTrialOut {
            bob,
            eve: eve_obs,
            radiated_power,
            solver_iterations,
        });
    }
    Ok(outputs)
}

/// Error vector and hard-decision bit error count for one estimate.
fn observe(
    estimate: &[num_complex::Complex64],
    s: &[num_complex::Complex64],
    bits: &[u8],
) -> (ComplexVector, u64) {
    let error = vec_sub(estimate, s);
    let decided = artsig_core::demodulate(estimate);
    let bit_errors = bits
        .iter()
        .zip(&decided)
        .filter(|(sent, got)| sent != got)
        .count() as u64;
    (error, bit_errors)
}

fn snr_to_gamma(snr_db: f64) -> f64 {
    if snr_db.is_infinite() {
        f64::INFINITY
    } else {
        10f64.powf(snr_db / 10.0)
    }
}

/// Turns one aggregated (scheme, n, phi, snr) cell into its Bob row and,
/// when the eavesdropper ran, the matching Eve row.
fn finish_cell(
    config: &ExperimentConfig,
    scheme: Scheme,
    n: usize,
    phi: f64,
    snr_db: f64,
    acc: &CellAcc,
    snr_idx: usize,
) -> Result<Vec<SweepRow>> {
    let trials = config.trials;
    let bob_batch = &acc.bob[snr_idx];
    let sinr_bob = stream_sinr(bob_batch)?;
    let capacity_bob = sum_capacity(&sinr_bob)?;
    let mean_radiated_power = acc.radiated_sum / trials as f64;
    let mean_solver_iterations = acc.iteration_sum as f64 / trials as f64;

    let (capacity_eve, secrecy, eve_batch) = match &acc.eve {
        Some(batches) => {
            let batch = &batches[snr_idx];
            let sinr_eve = stream_sinr(batch)?;
            let capacity_eve = sum_capacity(&sinr_eve)?;
            let secrecy = secrecy_capacity(&sinr_bob, &sinr_eve)?;
            (capacity_eve, secrecy, Some(batch))
        }
        None => (f64::NAN, f64::NAN, None),
    };

    let mut rows = vec![SweepRow {
        scheme,
        receiver: Receiver::Bob,
        n,
        phi,
        snr_db,
        trials,
        evm_db: evm_db(bob_batch)?,
        ber: ber(bob_batch)?,
        capacity_bob,
        capacity_eve,
        secrecy,
        mean_radiated_power,
        mean_solver_iterations,
    }];
    if let Some(batch) = eve_batch {
        rows.push(SweepRow {
            scheme,
            receiver: Receiver::Eve,
            n,
            phi,
            snr_db,
            trials,
            evm_db: evm_db(batch)?,
            ber: ber(batch)?,
            capacity_bob,
            capacity_eve,
            secrecy,
            mean_radiated_power,
            mean_solver_iterations,
        });
    }
    Ok(rows)
}

/// Expected row count for a validated config.
pub fn expected_rows(config: &ExperimentConfig) -> usize {
    let receivers = if config.eve_enabled { 2 } else { 1 };
    let snr_points = if config.noise_free {
        1
    } else {
        config.snr_grid_db.len()
    };
    config.schemes.len() * receivers * config.n_list.len() * config.phi_grid.len() * snr_points
}

/// Guards against misuse from the CLI: a sweep that cannot produce rows.
pub fn ensure_runnable(config: &ExperimentConfig) -> Result<()> {
    config.validate()?;
    if expected_rows(config) == 0 {
        return Err(Error::invalid("sweep would produce no rows"));
    }
    Ok(())
}
