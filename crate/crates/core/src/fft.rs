//! Thin internal wrappers over rustfft.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// In-place forward DFT: `out[k] = Σ_n buf[n] e^{-2πi k n / N}` (unscaled).
pub(crate) fn forward(buf: &mut [Complex64]) {
    FftPlanner::new().plan_fft_forward(buf.len()).process(buf);
}

/// In-place inverse-direction DFT: `out[k] = Σ_n buf[n] e^{+2πi k n / N}`
/// (unscaled), i.e. trigonometric synthesis on the uniform grid.
pub(crate) fn inverse(buf: &mut [Complex64]) {
    FftPlanner::new().plan_fft_inverse(buf.len()).process(buf);
}

/// Smallest power of two at least `n` (and at least 1).
pub(crate) fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}
