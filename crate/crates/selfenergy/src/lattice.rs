//! Finite-volume cutoff photon lattices.
//!
//! Modes live at k = 2πn/L for integer n ≠ 0 with |k| < Λ strictly; each mode
//! carries two transverse polarizations, indexed by a contiguous pair index
//! 2·mode + λ. The lattice sums here are the finite-volume ancestors of the
//! continuum constants Λ²/4π² (vacuum A²), Λ³/9π² (transverse commutator
//! scale), and Λ⁴/8π² (field-energy scale).

use crate::error::{Error, Result};
use crate::numerics::KahanSum;

/// Physical parameters of a run: coupling, cutoff, box side, particle number.
/// Energies are in mc² units, lengths in Compton lengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub alpha: f64,
    pub lambda_uv: f64,
    pub box_side: f64,
    pub n_particles: u64,
}

impl PhysParams {
    pub fn new(alpha: f64, lambda_uv: f64, box_side: f64, n_particles: u64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidInput(format!("alpha = {alpha} must be finite and >= 0")));
        }
        if !lambda_uv.is_finite() || lambda_uv <= 0.0 {
            return Err(Error::InvalidInput(format!("lambda_uv = {lambda_uv} must be finite and > 0")));
        }
        if !box_side.is_finite() || box_side <= 0.0 {
            return Err(Error::InvalidInput(format!("box_side = {box_side} must be finite and > 0")));
        }
        if n_particles == 0 {
            return Err(Error::InvalidInput("n_particles must be >= 1".into()));
        }
        Ok(PhysParams { alpha, lambda_uv, box_side, n_particles })
    }

    pub fn volume(&self) -> f64 {
        self.box_side.powi(3)
    }
}

/// One photon mode: integer label n, momentum k = 2πn/L, and |k|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub n: [i64; 3],
    pub k: [f64; 3],
    pub norm_k: f64,
}

/// Orthonormal transverse pair attached to a mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationPair {
    pub eps1: [f64; 3],
    pub eps2: [f64; 3],
}

impl PolarizationPair {
    pub fn eps(&self, lambda: usize) -> [f64; 3] {
        match lambda {
            0 => self.eps1,
            1 => self.eps2,
            _ => panic!("polarization index {lambda} out of range"),
        }
    }
}

/// Field-operator coefficient tables at x = 0, indexed by pair index.
///
/// `a[p]` is the (real) vector coefficient of the annihilator in A(0),
/// (2V)^{-1/2}|k|^{-1/2} ε_λ(k). The Π(0) coefficient is −i times `pi_mag[p]`,
/// with `pi_mag[p]` = (2V)^{-1/2}|k|^{1/2} ε_λ(k); only its magnitude enters
/// real symmetric assemblies, so the phase is kept implicit.
#[derive(Debug, Clone)]
pub struct FieldOperatorSpec {
    pub a: Vec<[f64; 3]>,
    pub pi_mag: Vec<[f64; 3]>,
}

/// Cutoff mode lattice with polarization frames.
///
/// Mode order is lexicographic in n; pair index is 2·mode + λ. Immutable after
/// construction and safe to share across threads.
#[derive(Debug, Clone)]
pub struct ModeLattice {
    pub params: PhysParams,
    pub modes: Vec<Mode>,
    pub pols: Vec<PolarizationPair>,
}

/// Deterministic lattice sums feeding the finite-lattice bound constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeWeightedSums {
    /// (1/2V) Σ_{k,λ} 1/|k|; equals `vacuum_A2`.
    pub s_inv: f64,
    /// (1/V) Σ_k |k|.
    pub s_k: f64,
    /// (1/V) Σ_k (1 − k_j²/|k|²) per axis; equals the `transverse_sum` diagonal.
    pub s_perp: [f64; 3],
}

impl ModeLattice {
    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn n_pairs(&self) -> usize {
        2 * self.modes.len()
    }

    /// (mode, λ) → contiguous pair index.
    pub fn pair_index(&self, mode: usize, lambda: usize) -> usize {
        debug_assert!(mode < self.modes.len() && lambda < 2);
        2 * mode + lambda
    }

    /// Pair index → (mode, λ).
    pub fn pair_of(&self, pair: usize) -> (usize, usize) {
        debug_assert!(pair < self.n_pairs());
        (pair / 2, pair % 2)
    }

    pub fn mode_of_pair(&self, pair: usize) -> &Mode {
        &self.modes[pair / 2]
    }

    pub fn eps_of_pair(&self, pair: usize) -> [f64; 3] {
        self.pols[pair / 2].eps(pair % 2)
    }

    pub fn field_operator_spec(&self) -> FieldOperatorSpec {
        let v = self.params.volume();
        let mut a = Vec::with_capacity(self.n_pairs());
        let mut pi_mag = Vec::with_capacity(self.n_pairs());
        for p in 0..self.n_pairs() {
            let m = self.mode_of_pair(p);
            let eps = self.eps_of_pair(p);
            let wa = 1.0 / (2.0 * v * m.norm_k).sqrt();
            let wpi = (m.norm_k / (2.0 * v)).sqrt();
            a.push([wa * eps[0], wa * eps[1], wa * eps[2]]);
            pi_mag.push([wpi * eps[0], wpi * eps[1], wpi * eps[2]]);
        }
        FieldOperatorSpec { a, pi_mag }
    }
}

/// Enumerate all modes with 0 < |2πn/L| < Λ and attach polarization frames.
///
/// An empty lattice (cutoff below the first shell) is a valid result, not an
/// error, so sweeps over small Λ degrade gracefully.
pub fn build_lattice(params: PhysParams) -> Result<ModeLattice> {
    let two_pi = 2.0 * core::f64::consts::PI;
    let step = two_pi / params.box_side;
    // |n| < ΛL/2π componentwise bound for the enumeration box
    let n_max = (params.lambda_uv / step).floor() as i64;
    let mut modes = Vec::new();
    for n0 in -n_max..=n_max {
        for n1 in -n_max..=n_max {
            for n2 in -n_max..=n_max {
                if n0 == 0 && n1 == 0 && n2 == 0 {
                    continue;
                }
                let k = [step * n0 as f64, step * n1 as f64, step * n2 as f64];
                let norm_k = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
                if norm_k < params.lambda_uv {
                    modes.push(Mode { n: [n0, n1, n2], k, norm_k });
                }
            }
        }
    }
    // -n_max..=n_max triple loop already emits lexicographic order in n
    let pols = modes
        .iter()
        .map(|m| polarization(m.k))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModeLattice { params, modes, pols })
}

/// Deterministic transverse frame for a nonzero k.
///
/// Generic direction: eps1 = (k × ẑ)/|k × ẑ|, eps2 = k̂ × eps1 (right-handed
/// with k̂). Within 1e-10·|k| of the z axis the frame is pinned to
/// ((1,0,0), (0,1,0)).
pub fn polarization(k: [f64; 3]) -> Result<PolarizationPair> {
    let norm = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::InvalidInput(format!("polarization: |k| = {norm}")));
    }
    let cross = (k[0] * k[0] + k[1] * k[1]).sqrt(); // |k × ẑ|
    if cross > 1e-10 * norm {
        let eps1 = [k[1] / cross, -k[0] / cross, 0.0];
        let khat = [k[0] / norm, k[1] / norm, k[2] / norm];
        let eps2 = [
            khat[1] * eps1[2] - khat[2] * eps1[1],
            khat[2] * eps1[0] - khat[0] * eps1[2],
            khat[0] * eps1[1] - khat[1] * eps1[0],
        ];
        Ok(PolarizationPair { eps1, eps2 })
    } else {
        Ok(PolarizationPair { eps1: [1.0, 0.0, 0.0], eps2: [0.0, 1.0, 0.0] })
    }
}

/// Finite-volume vacuum expectation ⟨0|A(x)²|0⟩ = (1/2V) Σ_{k,λ} 1/|k|.
/// Continuum limit Λ²/4π².
pub fn vacuum_a2(lattice: &ModeLattice) -> f64 {
    let v = lattice.params.volume();
    let mut acc = KahanSum::new();
    for m in &lattice.modes {
        // two polarizations per mode
        acc.add(1.0 / m.norm_k);
    }
    acc.sum() / v
}

/// Commutator scale i[Π_i(x), A_j(x)] as a 3×3 matrix:
/// T_ij = (1/V) Σ_k (δ_ij − k_i k_j/|k|²). Continuum diagonal Λ³/9π².
pub fn transverse_sum(lattice: &ModeLattice) -> [[f64; 3]; 3] {
    let v = lattice.params.volume();
    let mut acc = [[KahanSum::new(); 3]; 3];
    for m in &lattice.modes {
        let k2 = m.norm_k * m.norm_k;
        for i in 0..3 {
            for j in 0..3 {
                let delta = if i == j { 1.0 } else { 0.0 };
                acc[i][j].add(delta - m.k[i] * m.k[j] / k2);
            }
        }
    }
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = acc[i][j].sum() / v;
        }
    }
    t
}

/// The sums entering the finite-lattice commutator bound constants.
pub fn mode_weighted_sums(lattice: &ModeLattice) -> ModeWeightedSums {
    let v = lattice.params.volume();
    let mut inv = KahanSum::new();
    let mut sk = KahanSum::new();
    let mut perp = [KahanSum::new(); 3];
    for m in &lattice.modes {
        inv.add(1.0 / m.norm_k);
        sk.add(m.norm_k);
        let k2 = m.norm_k * m.norm_k;
        for j in 0..3 {
            perp[j].add(1.0 - m.k[j] * m.k[j] / k2);
        }
    }
    ModeWeightedSums {
        s_inv: inv.sum() / v,
        s_k: sk.sum() / v,
        s_perp: [perp[0].sum() / v, perp[1].sum() / v, perp[2].sum() / v],
    }
}
