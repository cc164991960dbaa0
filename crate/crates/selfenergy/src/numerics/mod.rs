//! Shared numerical kernels: compensated summation, golden-section search,
//! adaptive quadrature, power-law fitting, and the 3-D convolution used by
//! profile kernels. All deterministic for fixed inputs.

pub mod fft;
pub mod fit;
pub mod golden;
pub mod kahan;
pub mod linalg;
pub mod quad;

pub use fit::{fit_powerlaw_xy, PowerLawFit};
pub use golden::{golden_min, golden_min_try, GoldenResult};
pub use kahan::KahanSum;
pub use quad::{adaptive_simpson, composite_simpson, CumulativeIntegral};

/// SplitMix64 mixing step; the standard finalizer of the SplitMix64 generator.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic per-item seed derived from a master seed and an index.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}
