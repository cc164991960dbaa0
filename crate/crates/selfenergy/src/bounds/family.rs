//! Theorem-level bound families assembled from named constants.
//!
//! Everything here is closed-form arithmetic on a `ConstantsSet`: the
//! N-particle nonrelativistic pair (lower C₁ f(N) √α Λ^{3/2}, upper
//! C₂ g(N) α^{2/7} Λ^{12/7} with f, g fixed by statistics), the Pauli and
//! relativistic-fermion families whose constants are user-supplied, the
//! binding window ΔE(N) built from the nonrelativistic pair, and the integer
//! minimization behind the per-particle upper bound.

use crate::error::{Error, Result};
use crate::records::{BoundRecord, Model, Side, Statistics};

use super::constants::ConstantsSet;

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v <= 0.0 {
        return Err(Error::InvalidInput(format!("{name} = {v} must be finite and > 0")));
    }
    Ok(())
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v < 0.0 {
        return Err(Error::InvalidInput(format!("{name} = {v} must be finite and >= 0")));
    }
    Ok(())
}

/// Statistics-dependent N factors: lower bound scales like √N for bosons and
/// N for fermions; the upper bound like N^{5/7} and N. Single means N = 1.
fn n_factors(statistics: Statistics, n: u64) -> (f64, f64) {
    let nf = n as f64;
    match statistics {
        Statistics::Single => (1.0, 1.0),
        Statistics::Boson => (nf.sqrt(), nf.powf(5.0 / 7.0)),
        Statistics::Fermion => (nf, nf),
    }
}

/// Nonrelativistic (lower, upper) pair for N particles of the given
/// statistics. Uses `c_nonrel_lower` and `c_nonrel_upper`.
pub fn nonrel_theorem_bounds(
    n_particles: u64,
    alpha: f64,
    lambda_uv: f64,
    constants: &ConstantsSet,
    statistics: Statistics,
) -> Result<(BoundRecord, BoundRecord)> {
    check_nonneg("alpha", alpha)?;
    check_positive("lambda_uv", lambda_uv)?;
    if n_particles == 0 {
        return Err(Error::InvalidInput("n_particles must be >= 1".into()));
    }
    if statistics == Statistics::Single && n_particles != 1 {
        return Err(Error::InvalidInput(format!(
            "single-particle statistics with n_particles = {n_particles}"
        )));
    }
    let c1 = constants.get("c_nonrel_lower")?;
    let c2 = constants.get("c_nonrel_upper")?;
    let (f_low, f_high) = n_factors(statistics, n_particles);
    let lower = c1 * f_low * alpha.sqrt() * lambda_uv.powf(1.5);
    let upper = c2 * f_high * alpha.powf(2.0 / 7.0) * lambda_uv.powf(12.0 / 7.0);
    let lo = BoundRecord::new(Model::Nonrel, statistics, Side::Lower, lower, alpha, lambda_uv)
        .with_n(n_particles)
        .with_constant("c_nonrel_lower", c1);
    let hi = BoundRecord::new(Model::Nonrel, statistics, Side::Upper, upper, alpha, lambda_uv)
        .with_n(n_particles)
        .with_constant("c_nonrel_upper", c2);
    Ok((lo, hi))
}

/// Pauli-operator family for N fermions: one upper bound √α Λ^{3/2} N and a
/// two-regime lower bound, α Λ N for small α and α^{1/3} Λ N for large α.
/// All three constants are user-supplied; the regime crossover sits at
/// α = (c_lower_small/c_lower_large)^{-3/2} where the two branches meet.
pub fn pauli_bounds(
    alpha: f64,
    lambda_uv: f64,
    n_particles: u64,
    constants: &ConstantsSet,
) -> Result<Vec<BoundRecord>> {
    check_nonneg("alpha", alpha)?;
    check_positive("lambda_uv", lambda_uv)?;
    if n_particles == 0 {
        return Err(Error::InvalidInput("n_particles must be >= 1".into()));
    }
    let cu = constants.get("c_pauli_upper")?;
    let cs = constants.get("c_pauli_lower_small")?;
    let cl = constants.get("c_pauli_lower_large")?;
    let nf = n_particles as f64;
    let upper = cu * alpha.sqrt() * lambda_uv.powf(1.5) * nf;
    let lower_small = cs * alpha * lambda_uv * nf;
    let lower_large = cl * alpha.powf(1.0 / 3.0) * lambda_uv * nf;
    Ok(vec![
        BoundRecord::new(Model::Pauli, Statistics::Fermion, Side::Upper, upper, alpha, lambda_uv)
            .with_n(n_particles)
            .with_constant("c_pauli_upper", cu),
        BoundRecord::new(
            Model::Pauli,
            Statistics::Fermion,
            Side::Lower,
            lower_small,
            alpha,
            lambda_uv,
        )
        .with_n(n_particles)
        .with_constant("c_pauli_lower_small", cs)
        .with_regime("small alpha"),
        BoundRecord::new(
            Model::Pauli,
            Statistics::Fermion,
            Side::Lower,
            lower_large,
            alpha,
            lambda_uv,
        )
        .with_n(n_particles)
        .with_constant("c_pauli_lower_large", cl)
        .with_regime("large alpha"),
    ])
}

/// Relativistic-fermion family for N particles: upper √α Λ N, lower √α Λ N
/// for small α and Λ N for large α. Constants are user-supplied.
pub fn rel_fermion_bounds(
    n_particles: u64,
    alpha: f64,
    lambda_uv: f64,
    constants: &ConstantsSet,
) -> Result<Vec<BoundRecord>> {
    check_nonneg("alpha", alpha)?;
    check_positive("lambda_uv", lambda_uv)?;
    if n_particles == 0 {
        return Err(Error::InvalidInput("n_particles must be >= 1".into()));
    }
    let cu = constants.get("c_rel_fermion_upper")?;
    let cs = constants.get("c_rel_fermion_lower_small")?;
    let cl = constants.get("c_rel_fermion_lower_large")?;
    let nf = n_particles as f64;
    let root = alpha.sqrt() * lambda_uv * nf;
    Ok(vec![
        BoundRecord::new(Model::Rel, Statistics::Fermion, Side::Upper, cu * root, alpha, lambda_uv)
            .with_n(n_particles)
            .with_constant("c_rel_fermion_upper", cu),
        BoundRecord::new(
            Model::Rel,
            Statistics::Fermion,
            Side::Lower,
            cs * root,
            alpha,
            lambda_uv,
        )
        .with_n(n_particles)
        .with_constant("c_rel_fermion_lower_small", cs)
        .with_regime("small alpha"),
        BoundRecord::new(
            Model::Rel,
            Statistics::Fermion,
            Side::Lower,
            cl * lambda_uv * nf,
            alpha,
            lambda_uv,
        )
        .with_n(n_particles)
        .with_constant("c_rel_fermion_lower_large", cl)
        .with_regime("large alpha"),
    ])
}

/// Binding-energy window for N bosons against N separated particles.
///
/// ΔE_upper(N) = C₂ N^{5/7} X − N C₁ Y and ΔE_lower(N) = C₁ √N Y − N C₂ X
/// with X = α^{2/7} Λ^{12/7}, Y = √α Λ^{3/2}. The sublinear N^{5/7} growth
/// forces ΔE_upper < 0 eventually; `n_star` is the least such N.
#[derive(Debug, Clone, Copy)]
pub struct BindingWindow {
    pub alpha: f64,
    pub lambda_uv: f64,
    /// Least N with ΔE_upper(N) < 0.
    pub n_star: u64,
    /// Closed-form scale (C₂/C₁)^{7/2} α^{-3/4} Λ^{3/4}.
    pub n_star_estimate: f64,
    c1: f64,
    c2: f64,
}

impl BindingWindow {
    /// (ΔE_lower, ΔE_upper) at particle number n.
    pub fn delta_e(&self, n: u64) -> (f64, f64) {
        let nf = n as f64;
        let x = self.alpha.powf(2.0 / 7.0) * self.lambda_uv.powf(12.0 / 7.0);
        let y = self.alpha.sqrt() * self.lambda_uv.powf(1.5);
        let lower = self.c1 * nf.sqrt() * y - nf * self.c2 * x;
        let upper = self.c2 * nf.powf(5.0 / 7.0) * x - nf * self.c1 * y;
        (lower, upper)
    }
}

pub fn binding_window(alpha: f64, lambda_uv: f64, constants: &ConstantsSet) -> Result<BindingWindow> {
    check_positive("alpha", alpha)?;
    check_positive("lambda_uv", lambda_uv)?;
    let c1 = constants.get("c_nonrel_lower")?;
    let c2 = constants.get("c_nonrel_upper")?;
    let mut window = BindingWindow {
        alpha,
        lambda_uv,
        n_star: 0,
        n_star_estimate: (c2 / c1).powf(3.5) * alpha.powf(-0.75) * lambda_uv.powf(0.75),
        c1,
        c2,
    };
    // N^{5/7} X vs N Y: doubling must terminate once N^{2/7} > C₂X/(C₁Y)
    let mut hi = 1u64;
    while window.delta_e(hi).1 >= 0.0 {
        hi = hi.checked_mul(2).ok_or_else(|| {
            Error::InvalidInput(format!(
                "binding threshold overflows u64 at alpha = {alpha}, lambda_uv = {lambda_uv}"
            ))
        })?;
        if hi > 1 << 60 {
            return Err(Error::InvalidInput(format!(
                "binding threshold above 2^60 at alpha = {alpha}, lambda_uv = {lambda_uv}"
            )));
        }
    }
    let mut lo = hi / 2; // delta_e(lo).1 >= 0 when lo >= 1
    while hi - lo > 1 && lo >= 1 {
        let mid = lo + (hi - lo) / 2;
        if window.delta_e(mid).1 < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    window.n_star = hi;
    Ok(window)
}

/// Result of minimizing c_kin n^{2/3} + c_field (n+1)^{-1/2} over integers
/// n ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerParticleMin {
    pub n_star: u64,
    pub value: f64,
}

/// Integer minimizer for the per-particle energy tradeoff: the kinetic cost
/// of occupying n field modes against the field energy those modes absorb.
/// The continuum stationary point sits at n ≈ (3 c_field / 4 c_kin)^{6/7};
/// for small continuum minima every integer up to it is scanned, for huge
/// ones only a bracket around it (the function is unimodal).
pub fn per_particle_min(c_kin: f64, c_field: f64) -> Result<PerParticleMin> {
    check_positive("c_kin", c_kin)?;
    check_nonneg("c_field", c_field)?;
    if c_field == 0.0 {
        return Ok(PerParticleMin { n_star: 0, value: 0.0 });
    }
    let f = |n: u64| {
        let nf = n as f64;
        c_kin * nf.powf(2.0 / 3.0) + c_field / (nf + 1.0).sqrt()
    };
    let n_cont = (0.75 * c_field / c_kin).powf(6.0 / 7.0);
    let mut best = PerParticleMin { n_star: 0, value: f(0) };
    let mut consider = |n: u64| {
        let v = f(n);
        if v < best.value {
            best = PerParticleMin { n_star: n, value: v };
        }
    };
    if n_cont <= 1e6 {
        for n in 1..=(n_cont.ceil() as u64 + 8) {
            consider(n);
        }
    } else {
        let center = n_cont.floor() as u64;
        consider(1);
        for n in center.saturating_sub(2)..=center + 3 {
            consider(n);
        }
    }
    Ok(best)
}
