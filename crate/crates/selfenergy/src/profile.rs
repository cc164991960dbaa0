//! Bandwidth-K trial profiles on the dual lattice.
//!
//! The profile is the positive function with Fourier coefficients
//! c_q ∝ (1 − |q|/K)³₊ on the dual grid q = 2πm/L (q = 0 included), discretely
//! normalized to Σ c_q² = 1. Its square enters the dressing matrix through
//! ĝ = (c * c)/V, the linear convolution of the coefficient cube with itself.

use ndarray::Array3;

use crate::error::{Error, Result};
use crate::lattice::ModeLattice;
use crate::numerics::{fft::self_convolve3, KahanSum};

/// Discrete trial profile: bandwidth, box side, and the coefficient cube.
///
/// Cube index `(i, j, l)` holds the coefficient at m = (i, j, l) − m_max.
/// All coefficients are nonnegative; support is strictly inside |q| < K.
#[derive(Debug, Clone)]
pub struct TrialProfile {
    /// Bandwidth K; 0 marks the uniform (q = 0 only) profile.
    pub k_bandwidth: f64,
    pub box_side: f64,
    m_max: i64,
    coeffs: Array3<f64>,
}

/// Overlap kernel table ĝ(n) = (1/V) Σ_a c_a c_{n−a}, supported on the cube
/// |n_i| ≤ reach. ĝ(0) = 1/V exactly by normalization.
#[derive(Debug, Clone)]
pub struct GhatTable {
    pub box_side: f64,
    reach: i64,
    cube: Array3<f64>,
}

impl GhatTable {
    /// ĝ at integer offset d; identically zero outside the band limit.
    #[inline]
    pub fn value(&self, d: [i64; 3]) -> f64 {
        let r = self.reach;
        if d[0].abs() > r || d[1].abs() > r || d[2].abs() > r {
            return 0.0;
        }
        self.cube[(
            (d[0] + r) as usize,
            (d[1] + r) as usize,
            (d[2] + r) as usize,
        )]
    }

    pub fn reach(&self) -> i64 {
        self.reach
    }
}

impl TrialProfile {
    /// Coefficient at dual point m (zero outside the stored cube).
    pub fn coeff(&self, m: [i64; 3]) -> f64 {
        let r = self.m_max;
        if m[0].abs() > r || m[1].abs() > r || m[2].abs() > r {
            return 0.0;
        }
        self.coeffs[(
            (m[0] + r) as usize,
            (m[1] + r) as usize,
            (m[2] + r) as usize,
        )]
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).collect::<KahanSum>().sum()
    }

    /// Number of nonzero coefficients.
    pub fn n_support(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0.0).count()
    }

    /// Kinetic term of the product ansatz: ½ Σ_q |q|² c_q².
    pub fn grad_term(&self) -> f64 {
        let step = 2.0 * core::f64::consts::PI / self.box_side;
        let r = self.m_max;
        let mut acc = KahanSum::new();
        for ((i, j, l), &c) in self.coeffs.indexed_iter() {
            let m = [i as i64 - r, j as i64 - r, l as i64 - r];
            let q2 = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]) as f64 * step * step;
            acc.add(0.5 * q2 * c * c);
        }
        acc.sum()
    }

    /// FFT the coefficient cube into the overlap kernel ĝ = (c * c)/V.
    ///
    /// The result is symmetrized under n → −n afterwards: it is exactly
    /// inversion-symmetric in exact arithmetic (c depends on |q| only), and
    /// restoring that symmetry makes downstream matrix assembly exactly
    /// Hermitian instead of Hermitian-to-roundoff.
    pub fn ghat(&self) -> GhatTable {
        let v = self.box_side.powi(3);
        let mut cube = self_convolve3(&self.coeffs);
        let side = cube.dim().0;
        for i in 0..side {
            for j in 0..side {
                for l in 0..side {
                    let mirror = (side - 1 - i, side - 1 - j, side - 1 - l);
                    if (i, j, l) < mirror {
                        let avg = 0.5 * (cube[(i, j, l)] + cube[mirror]);
                        cube[(i, j, l)] = avg;
                        cube[mirror] = avg;
                    }
                }
            }
        }
        cube.mapv_inplace(|x| x / v);
        GhatTable {
            box_side: self.box_side,
            reach: 2 * self.m_max,
            cube,
        }
    }
}

/// Build the (1 − |q|/K)³₊ profile on the dual grid of `lattice`'s box.
///
/// Errors with a degenerate-profile report when no nonzero dual point lies
/// inside |q| < K: the only surviving coefficient would be q = 0, which is the
/// uniform profile, and the bandwidth has no effect there.
pub fn trial_profile(k_bandwidth: f64, lattice: &ModeLattice) -> Result<TrialProfile> {
    let box_side = lattice.params.box_side;
    if !(k_bandwidth > 0.0) || !k_bandwidth.is_finite() {
        return Err(Error::InvalidInput(format!(
            "trial_profile: bandwidth K = {k_bandwidth} must be finite and > 0"
        )));
    }
    let ratio = k_bandwidth * box_side / (2.0 * core::f64::consts::PI);
    let m_max = (ratio.ceil() as i64 - 1).max(0);
    if m_max < 1 {
        return Err(Error::DegenerateProfile {
            bandwidth: k_bandwidth,
            box_side,
        });
    }
    let side = (2 * m_max + 1) as usize;
    let step = 2.0 * core::f64::consts::PI / box_side;
    let mut coeffs = Array3::<f64>::zeros((side, side, side));
    for ((i, j, l), c) in coeffs.indexed_iter_mut() {
        let m = [i as i64 - m_max, j as i64 - m_max, l as i64 - m_max];
        let q = ((m[0] * m[0] + m[1] * m[1] + m[2] * m[2]) as f64).sqrt() * step;
        if q < k_bandwidth {
            let t = 1.0 - q / k_bandwidth;
            *c = t * t * t;
        }
    }
    let norm: f64 = coeffs.iter().map(|c| c * c).collect::<KahanSum>().sum();
    let scale = 1.0 / norm.sqrt();
    coeffs.mapv_inplace(|c| c * scale);
    Ok(TrialProfile {
        k_bandwidth,
        box_side,
        m_max,
        coeffs,
    })
}

/// The uniform profile φ = V^{-1/2}: a single unit coefficient at q = 0.
/// Kept separate from `trial_profile` so closed-form tests don't route through
/// the degenerate-bandwidth path.
pub fn uniform_profile(lattice: &ModeLattice) -> TrialProfile {
    let mut coeffs = Array3::<f64>::zeros((1, 1, 1));
    coeffs[(0, 0, 0)] = 1.0;
    TrialProfile {
        k_bandwidth: 0.0,
        box_side: lattice.params.box_side,
        m_max: 0,
        coeffs,
    }
}
