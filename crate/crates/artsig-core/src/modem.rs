//! Gray-coded QPSK mapping between bits and unit-energy symbols.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Bits per QPSK symbol.
pub const BITS_PER_SYMBOL: usize = 2;

/// Scaling that puts every constellation point on the unit circle.
const INV_SQRT2: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// Maps a bit pair to a unit-energy QPSK symbol.
///
/// Bit 0 selects the real sign, bit 1 the imaginary sign, each as
/// `(1 - 2b)/√2`, so adjacent constellation points differ in one bit.
pub fn map_symbol(b0: u8, b1: u8) -> Complex64 {
    debug_assert!(b0 <= 1 && b1 <= 1);
    Complex64::new(
        (1.0 - 2.0 * b0 as f64) * INV_SQRT2,
        (1.0 - 2.0 * b1 as f64) * INV_SQRT2,
    )
}

/// Hard decision back to the bit pair; boundary samples decide toward 0.
pub fn demap_symbol(z: Complex64) -> (u8, u8) {
    ((z.re < 0.0) as u8, (z.im < 0.0) as u8)
}

/// Modulates a bit string, two bits per symbol, in order.
pub fn modulate(bits: &[u8]) -> Result<Vec<Complex64>> {
    if !bits.len().is_multiple_of(BITS_PER_SYMBOL) {
        return Err(Error::invalid(format!(
            "bit count {} is not a multiple of {BITS_PER_SYMBOL}",
            bits.len()
        )));
    }
    if let Some(&bad) = bits.iter().find(|&&b| b > 1) {
        return Err(Error::invalid(format!("bit value {bad} is not 0 or 1")));
    }
    Ok(bits
        .chunks_exact(BITS_PER_SYMBOL)
        .map(|pair| map_symbol(pair[0], pair[1]))
        .collect())
}

/// Hard-demodulates a symbol vector back to bits.
pub fn demodulate(symbols: &[Complex64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(symbols.len() * BITS_PER_SYMBOL);
    for &z in symbols {
        let (b0, b1) = demap_symbol(z);
        out.push(b0);
        out.push(b1);
    }
    out
}

/// Fraction of positions where the bit strings disagree.
pub fn bit_error_rate(sent: &[u8], received: &[u8]) -> Result<f64> {
    if sent.len() != received.len() {
        return Err(Error::invalid(format!(
            "bit string lengths differ: {} vs {}",
            sent.len(),
            received.len()
        )));
    }
    if sent.is_empty() {
        return Err(Error::invalid("bit strings are empty"));
    }
    let errors = sent.iter().zip(received).filter(|(a, b)| a != b).count();
    Ok(errors as f64 / sent.len() as f64)
}
