//! Experiment configuration with layered overrides.
//!
//! Built-in defaults are overridden by an optional TOML config file, which is
//! in turn overridden by command-line flags. Validation happens once, after
//! all layers are applied.

use artsig_core::{Error, Result, Scheme};
use serde::Deserialize;
use std::path::Path;

/// Fully resolved experiment parameters for one sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Transmit antennas at the base station and spatial streams.
    pub m: usize,
    /// Legitimate receiver antenna counts to sweep over.
    pub n_list: Vec<usize>,
    /// Eavesdropper antenna count.
    pub l: usize,
    /// Codebook alignment quality grid, each value in [0, 1].
    pub phi_grid: Vec<f64>,
    /// Per-stream SNR grid in dB. Ignored when `noise_free` is set.
    pub snr_grid_db: Vec<f64>,
    /// Monte Carlo trials per grid cell.
    pub trials: usize,
    /// Master seed; every trial derives its randomness from this.
    pub master_seed: u64,
    /// Transmission schemes to simulate.
    pub schemes: Vec<Scheme>,
    /// Disable receiver noise and report a single infinite-SNR point.
    pub noise_free: bool,
    /// Simulate the eavesdropper alongside the legitimate receiver.
    pub eve_enabled: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            m: 4,
            n_list: vec![8, 16],
            l: 32,
            phi_grid: default_phi_grid(),
            snr_grid_db: default_snr_grid(),
            trials: 2000,
            master_seed: 1,
            schemes: Scheme::ALL.to_vec(),
            noise_free: false,
            eve_enabled: true,
        }
    }
}

/// The nine-point grid 0.1, 0.2, ..., 0.9.
pub fn default_phi_grid() -> Vec<f64> {
    (1..=9).map(|i| f64::from(i) / 10.0).collect()
}

/// Integer dB points 0 through 10.
pub fn default_snr_grid() -> Vec<f64> {
    (0..=10).map(f64::from).collect()
}

impl ExperimentConfig {
    /// Checks all cross-field constraints. Called by the sweep runner.
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::invalid("stream count m must be at least 1"));
        }
        if self.n_list.is_empty() {
            return Err(Error::invalid("n_list must not be empty"));
        }
        for &n in &self.n_list {
            if n < self.m {
                return Err(Error::invalid(format!(
                    "receiver antennas n = {n} must be at least the stream count m = {}",
                    self.m
                )));
            }
        }
        if self.eve_enabled {
            let n_max = self.n_list.iter().copied().max().unwrap_or(0);
            if self.l <= n_max {
                return Err(Error::invalid(format!(
                    "eavesdropper antennas l = {} must exceed every receiver antenna count \
                     (max n = {n_max}) so its channel has a left inverse",
                    self.l
                )));
            }
        }
        if self.phi_grid.is_empty() {
            return Err(Error::invalid("phi_grid must not be empty"));
        }
        for &phi in &self.phi_grid {
            if !(0.0..=1.0).contains(&phi) || phi.is_nan() {
                return Err(Error::invalid(format!("phi = {phi} is outside [0, 1]")));
            }
        }
        if !self.noise_free {
            if self.snr_grid_db.is_empty() {
                return Err(Error::invalid("snr_grid_db must not be empty"));
            }
            for &snr in &self.snr_grid_db {
                if !snr.is_finite() {
                    return Err(Error::invalid(format!("snr_db = {snr} must be finite")));
                }
            }
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if self.schemes.is_empty() {
            return Err(Error::invalid("at least one scheme must be selected"));
        }
        Ok(())
    }

    /// Applies the non-empty fields of a parsed config file.
    pub fn apply_overlay(&mut self, overlay: &ConfigOverlay) -> Result<()> {
        if let Some(m) = overlay.m {
            self.m = m;
        }
        if let Some(n_list) = &overlay.n_list {
            self.n_list = n_list.clone();
        }
        if let Some(l) = overlay.l {
            self.l = l;
        }
        if let Some(phi_grid) = &overlay.phi_grid {
            self.phi_grid = phi_grid.clone();
        }
        if let Some(snr_grid_db) = &overlay.snr_grid_db {
            self.snr_grid_db = snr_grid_db.clone();
        }
        if let Some(trials) = overlay.trials {
            self.trials = trials;
        }
        if let Some(master_seed) = overlay.master_seed {
            self.master_seed = master_seed;
        }
        if let Some(schemes) = &overlay.schemes {
            self.schemes = parse_scheme_names(schemes)?;
        }
        if let Some(noise_free) = overlay.noise_free {
            self.noise_free = noise_free;
        }
        if let Some(eve_enabled) = overlay.eve_enabled {
            self.eve_enabled = eve_enabled;
        }
        Ok(())
    }
}

/// Optional fields read from a TOML config file. Unknown keys are rejected
/// so typos fail loudly instead of being silently ignored.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverlay {
    pub m: Option<usize>,
    pub n_list: Option<Vec<usize>>,
    pub l: Option<usize>,
    pub phi_grid: Option<Vec<f64>>,
    pub snr_grid_db: Option<Vec<f64>>,
    pub trials: Option<usize>,
    pub master_seed: Option<u64>,
    pub schemes: Option<Vec<String>>,
    pub noise_free: Option<bool>,
    pub eve_enabled: Option<bool>,
}

/// Reads and parses a config file.
pub fn load_overlay(path: &Path) -> Result<ConfigOverlay> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Error::invalid(format!("config {}: {e}", path.display())))
}

/// Parses one scheme name as used in the CLI and in CSV output.
pub fn parse_scheme(name: &str) -> Result<Scheme> {
    match name.trim().to_ascii_lowercase().as_str() {
        "ideal" => Ok(Scheme::Ideal),
        "conventional" => Ok(Scheme::Conventional),
        "pas" => Ok(Scheme::Pas),
        "as" => Ok(Scheme::As),
        other => Err(Error::invalid(format!(
            "unknown scheme {other:?}; expected ideal, conventional, pas, or as"
        ))),
    }
}

/// Parses a comma-separated scheme list from the CLI, deduplicating while
/// keeping first-occurrence order.
pub fn parse_scheme_list(list: &str) -> Result<Vec<Scheme>> {
    let names: Vec<&str> = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if names.is_empty() {
        return Err(Error::invalid("scheme list is empty"));
    }
    let mut schemes = Vec::new();
    for name in names {
        let scheme = parse_scheme(name)?;
        if !schemes.contains(&scheme) {
            schemes.push(scheme);
        }
    }
    Ok(schemes)
}

fn parse_scheme_names(names: &[String]) -> Result<Vec<Scheme>> {
    if names.is_empty() {
        return Err(Error::invalid("scheme list is empty"));
    }
    let mut schemes = Vec::new();
    for name in names {
        let scheme = parse_scheme(name)?;
        if !schemes.contains(&scheme) {
            schemes.push(scheme);
        }
    }
    Ok(schemes)
}
