//! Relativistic one-body bounds.
//!
//! Upper line: the vacuum trial state gives E₀ ≤ (α/4π)^{1/2} Λ. Lower line:
//! an operator-valued gauge transformation trades the |p₁ + √α A₁| kinetic
//! term for coherently shifted oscillators; localizing the electron on
//! intervals of length ℓ/Λ turns the ground-state overlap between
//! neighboring shift states into the kernel
//!
//!   K_ℓ(α) = ∫₀¹∫₀¹ exp[ −α (ℓ/π²) |x−y| W(|x−y| ℓ/4) ] dx dy,
//!   W(z)   = ∫₀^z (sin t / t)² dt,
//!
//! and the localized energy e solves (1/ℓ − e/Λ)(1/2 − e/Λ) = √K_ℓ/(2ℓ).
//! The kernel is evaluated by iterated quadrature (cumulative inner table,
//! adaptive Simpson outer) with W served from a shared cumulative table and
//! its asymptotic expansion past the table end; the self-check against a
//! refined re-evaluation is returned with the value.
//!
//! `CoherentShift` holds the per-mode displacement data of the gauge
//! transformation on a finite lattice; `overlap_exponent_lattice` sums it
//! into the overlap exponent, which converges to the continuum kernel
//! exponent as the box grows (up to the documented constant: the displayed
//! closed form above carries an extra factor 4 relative to the shifted-state
//! overlap it summarizes; the lattice route is checked against the honest
//! limit).

use core::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::lattice::ModeLattice;
use crate::numerics::{adaptive_simpson, golden_min_try, CumulativeIntegral, KahanSum};
use crate::records::{BoundRecord, Model, Side, Statistics};

use super::constants::C_REL_UPPER;

/// Default absolute tolerance for kernel quadrature.
pub const KELL_DEFAULT_TOL: f64 = 1e-9;

/// ℓ-search grid: 40 log-spaced points on [0.1, 10³·α^{-1/2}].
const ELL_GRID: usize = 40;
const ELL_LO: f64 = 0.1;

fn check_finite(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::InvalidInput(format!("{name} = {v} must be finite")));
    }
    Ok(())
}

/// (sin t / t)²; series branch keeps the removable singularity smooth.
fn sinc_sq(t: f64) -> f64 {
    if t.abs() < 1e-4 {
        let t2 = t * t;
        1.0 - t2 / 3.0 + 2.0 * t2 * t2 / 45.0
    } else {
        let s = t.sin() / t;
        s * s
    }
}

const W_TABLE_END: f64 = 100.0;

fn w_table() -> &'static CumulativeIntegral {
    static TABLE: OnceLock<CumulativeIntegral> = OnceLock::new();
    TABLE.get_or_init(|| CumulativeIntegral::build(sinc_sq, 0.0, W_TABLE_END, 1e-13))
}

/// W(z) = ∫₀^z (sin t/t)² dt. Cumulative table on [0, 100]; past the end the
/// large-z expansion π/2 − 1/2z − sin 2z/4z² + cos 2z/4z³ + 3 sin 2z/8z⁴
/// (remainder O(z⁻⁵), below 1e-10 at the seam).
fn w(z: f64) -> f64 {
    debug_assert!(z >= 0.0);
    if z <= W_TABLE_END {
        w_table().eval(z)
    } else {
        let (s2, c2) = (2.0 * z).sin_cos();
        let inv = 1.0 / z;
        FRAC_PI_2
            - 0.5 * inv
            - s2 * 0.25 * inv * inv
            + c2 * 0.25 * inv * inv * inv
            + s2 * 0.375 * inv * inv * inv * inv
    }
}

/// Exponent of the kernel integrand at separation s = |x − y| ∈ [0, 1].
fn kernel_exponent(alpha: f64, ell: f64, s: f64) -> f64 {
    alpha * ell / (PI * PI) * s * w(0.25 * s * ell)
}

/// Adaptive Simpson over [a, b] in pieces no wider than `max_chunk`, error
/// budget proportional to piece length. Needed because W carries a sin(2z)
/// ripple: a panel spanning many ripple periods can alias it past the
/// refinement check.
fn integrate_chunked<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol_per_len: f64, max_chunk: f64) -> f64 {
    let len = b - a;
    if len <= 0.0 {
        return 0.0;
    }
    let n = (len / max_chunk).ceil().max(1.0) as usize;
    let h = len / n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        let lo = a + h * i as f64;
        let hi = if i + 1 == n { b } else { a + h * (i + 1) as f64 };
        acc += adaptive_simpson(f, lo, hi, tol_per_len * (hi - lo));
    }
    acc
}

/// Iterated quadrature over the unit square. At fixed x the inner integral
/// splits at the |x − y| kink into two prefix integrals of the same
/// one-variable factor, ∫₀¹ e^{−E(|x−y|)} dy = G(x) + G(1−x) with
/// G(t) = ∫₀ᵗ e^{−E(u)} du, so one cumulative table serves every outer
/// evaluation. Both the table build and the outer sweep are seeded at the
/// ripple period 4π/ℓ of W; wider panels alias the ripple past the
/// refinement checks (the outer integrand's ripple is period-suppressed but
/// still far above tolerance for moderate ℓ).
fn k_double_integral(alpha: f64, ell: f64, tol: f64) -> f64 {
    // half the ripple period: a full-period panel integrates the ripple to
    // zero and passes the refinement check while eval() still needs the
    // interior resolved, so seed below the period
    let half_ripple = 2.0 * PI / ell;
    let n_seed = (1.0 / half_ripple).ceil().max(1.0) as usize;
    let table = CumulativeIntegral::build_seeded(
        move |u: f64| (-kernel_exponent(alpha, ell, u)).exp(),
        0.0,
        1.0,
        0.25 * tol,
        n_seed,
    );
    let g = |x: f64| table.eval(x) + table.eval(1.0 - x);
    integrate_chunked(&g, 0.0, 1.0, 0.25 * tol, half_ripple)
}

/// Kernel evaluation: the double integral, its displayed single-integral
/// comparison ∫_{−1/2}^{1/2} exp(−α x² ℓ²/8π) dx, and the self-check error
/// estimate. The comparison majorizes K only on a bounded ℓ window: up to
/// ℓ ≈ 9.8 as α → 0, tightening to ℓ ≈ 6.5 by α = 5 (W saturates at π/2, so
/// for wide intervals the true exponent grows linearly in the separation
/// while the comparison's grows quadratically). Callers that rely on the
/// inequality must stay inside that window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KellRecord {
    pub alpha: f64,
    pub ell: f64,
    pub k_value: f64,
    pub k_single_integral_bound: f64,
    /// |coarse − fine| between the two quadrature resolutions.
    pub error_estimate: f64,
    pub tol: f64,
}

pub fn k_ell(alpha: f64, ell: f64, tol: f64) -> Result<KellRecord> {
    check_finite("alpha", alpha)?;
    check_finite("ell", ell)?;
    if alpha < 0.0 {
        return Err(Error::InvalidInput(format!("alpha = {alpha} must be >= 0")));
    }
    if ell <= 0.0 {
        return Err(Error::InvalidInput(format!("ell = {ell} must be > 0")));
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidInput(format!("tol = {tol} must be finite and > 0")));
    }
    let coarse = k_double_integral(alpha, ell, 0.5 * tol);
    let fine = k_double_integral(alpha, ell, 0.125 * tol);
    let error_estimate = (coarse - fine).abs();
    if !fine.is_finite() || error_estimate > tol {
        return Err(Error::NumericalFailure {
            what: "k_ell quadrature",
            residual: error_estimate,
            tol,
            detail: format!("alpha = {alpha}, ell = {ell}"),
        });
    }
    let gauss = |x: f64| (-(alpha * x * x * ell * ell) / (8.0 * PI)).exp();
    let k_single_integral_bound = adaptive_simpson(&gauss, -0.5, 0.5, tol.min(1e-10));
    Ok(KellRecord {
        alpha,
        ell,
        k_value: fine,
        k_single_integral_bound,
        error_estimate,
        tol,
    })
}

/// Vacuum-trial upper bound (α/4π)^{1/2} Λ.
pub fn rel_upper(alpha: f64, lambda_uv: f64) -> Result<BoundRecord> {
    check_finite("alpha", alpha)?;
    check_finite("lambda_uv", lambda_uv)?;
    if alpha < 0.0 {
        return Err(Error::InvalidInput(format!("alpha = {alpha} must be >= 0")));
    }
    if lambda_uv <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "lambda_uv = {lambda_uv} must be > 0"
        )));
    }
    let value = C_REL_UPPER * alpha.sqrt() * lambda_uv;
    Ok(
        BoundRecord::new(Model::Rel, Statistics::Single, Side::Upper, value, alpha, lambda_uv)
            .with_constant("c_rel_upper", C_REL_UPPER),
    )
}

/// Root of (1/ℓ − u)(1/2 − u) = √K/(2ℓ) in [0, min(1/2, 1/ℓ)).
///
/// The product decreases through that interval, so the quadratic has exactly
/// one admissible root; the 2c/(b + √disc) form avoids cancellation when
/// K → 1 drives the root to 0. `None` only when quadrature noise pushes
/// K above 1.
fn admissible_root(k_value: f64, ell: f64) -> Option<f64> {
    let b = 0.5 + 1.0 / ell;
    let c = (1.0 - k_value.sqrt()) / (2.0 * ell);
    if c < 0.0 {
        return None;
    }
    let disc = b * b - 4.0 * c;
    debug_assert!(disc >= 0.0, "discriminant (1/2 - 1/ell)^2 + 2 sqrt(K)/ell < 0");
    let u = 2.0 * c / (b + disc.sqrt());
    (u < 0.5f64.min(1.0 / ell)).then_some(u)
}

/// Localization lower bound: Λ · max_ℓ u(ℓ) over the ℓ grid, golden-refined
/// around the best grid point. Degenerate (value 0) if no ℓ admits a root.
///
/// Aux outputs: `ell_star`, `u_star`, `k_at_ell_star`.
pub fn rel_lower(alpha: f64, lambda_uv: f64) -> Result<BoundRecord> {
    check_finite("alpha", alpha)?;
    check_finite("lambda_uv", lambda_uv)?;
    if alpha <= 0.0 {
        return Err(Error::InvalidInput(format!("alpha = {alpha} must be > 0")));
    }
    if lambda_uv <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "lambda_uv = {lambda_uv} must be > 0"
        )));
    }
    let u_of = |ell: f64| -> Result<f64> {
        let rec = k_ell(alpha, ell, KELL_DEFAULT_TOL)?;
        Ok(admissible_root(rec.k_value, ell).unwrap_or(0.0))
    };

    let t_lo = ELL_LO.ln();
    let t_hi = (1e3 / alpha.sqrt()).ln();
    let mut best = (0usize, 0.0f64); // (grid index, u)
    let mut ts = [0.0f64; ELL_GRID];
    for (i, t) in ts.iter_mut().enumerate() {
        *t = t_lo + (t_hi - t_lo) * i as f64 / (ELL_GRID - 1) as f64;
        let u = u_of(t.exp())?;
        if u > best.1 {
            best = (i, u);
        }
    }

    let (mut u_star, mut ell_star) = (best.1, ts[best.0].exp());
    if u_star > 0.0 {
        let lo = ts[best.0.saturating_sub(1)];
        let hi = ts[(best.0 + 1).min(ELL_GRID - 1)];
        let refined = golden_min_try(|t| u_of(t.exp()).map(|u| -u), lo, hi, 1e-4)?;
        if -refined.fx > u_star {
            u_star = -refined.fx;
            ell_star = refined.x.exp();
        }
    }

    if u_star <= 0.0 {
        return Ok(BoundRecord::new(
            Model::Rel,
            Statistics::Single,
            Side::Lower,
            0.0,
            alpha,
            lambda_uv,
        )
        .flag_degenerate());
    }
    let k_at_star = k_ell(alpha, ell_star, KELL_DEFAULT_TOL)?.k_value;
    Ok(BoundRecord::new(
        Model::Rel,
        Statistics::Single,
        Side::Lower,
        lambda_uv * u_star,
        alpha,
        lambda_uv,
    )
    .with_aux("ell_star", ell_star)
    .with_aux("u_star", u_star)
    .with_aux("k_at_ell_star", k_at_star))
}

/// Gauge-transformation displacement table on the half-to-cutoff shell
/// Λ/2 < |k| < Λ of a mode lattice.
///
/// `f(i, x)` is the unweighted per-pair displacement
/// (ε_λ(k)·ê₁ / √|k|) · (e^{−i k₁ x} − 1)/k₁, with the k₁ = 0 limit −i x
/// taken exactly; the α and volume weights stay in the overlap sum. The
/// electron coordinate is one-dimensional along axis 1 (transverse
/// completeness makes the axis choice immaterial), and f(i, 0) = 0.
#[derive(Debug, Clone)]
pub struct CoherentShift<'a> {
    pub lattice: &'a ModeLattice,
    shell: Vec<usize>,
}

impl<'a> CoherentShift<'a> {
    pub fn new(lattice: &'a ModeLattice) -> Result<Self> {
        let lam = lattice.params.lambda_uv;
        let shell: Vec<usize> = (0..lattice.n_pairs())
            .filter(|&p| {
                let kn = lattice.mode_of_pair(p).norm_k;
                kn > 0.5 * lam && kn < lam
            })
            .collect();
        if shell.is_empty() {
            return Err(Error::InvalidInput(format!(
                "degenerate shell: no lattice modes with {} < |k| < {} on the L = {} box",
                0.5 * lam,
                lam,
                lattice.params.box_side
            )));
        }
        Ok(CoherentShift { lattice, shell })
    }

    pub fn n_shell_pairs(&self) -> usize {
        self.shell.len()
    }

    /// Lattice pair index of shell slot `i`.
    pub fn pair_index(&self, i: usize) -> usize {
        self.shell[i]
    }

    /// Displacement (re, im) of shell slot `i` at electron coordinate `x`.
    pub fn f(&self, i: usize, x: f64) -> (f64, f64) {
        let pair = self.shell[i];
        let mode = self.lattice.mode_of_pair(pair);
        let amp = self.lattice.eps_of_pair(pair)[0] / mode.norm_k.sqrt();
        let k1 = mode.k[0];
        if k1 == 0.0 {
            (0.0, -amp * x)
        } else {
            // (e^{−i k₁ x} − 1)/k₁ = (cos k₁x − 1)/k₁ − i sin k₁x / k₁
            let (s, c) = (k1 * x).sin_cos();
            (amp * (c - 1.0) / k1, -amp * s / k1)
        }
    }
}

/// Overlap exponent (α/2V) Σ_{shell, λ} |f(k, λ; x) − f(k, λ; y)|² between
/// shifted field ground states at electron coordinates x, y ∈ [0, ℓ/Λ].
/// Converges to the continuum shifted-state exponent as the box grows.
pub fn overlap_exponent_lattice(
    alpha: f64,
    ell: f64,
    x: f64,
    y: f64,
    lattice: &ModeLattice,
) -> Result<f64> {
    check_finite("alpha", alpha)?;
    check_finite("ell", ell)?;
    if alpha < 0.0 {
        return Err(Error::InvalidInput(format!("alpha = {alpha} must be >= 0")));
    }
    if ell <= 0.0 {
        return Err(Error::InvalidInput(format!("ell = {ell} must be > 0")));
    }
    let width = ell / lattice.params.lambda_uv;
    for (name, v) in [("x", x), ("y", y)] {
        if !v.is_finite() || !(0.0..=width).contains(&v) {
            return Err(Error::InvalidInput(format!(
                "{name} = {v} outside the localization interval [0, {width}]"
            )));
        }
    }
    let shift = CoherentShift::new(lattice)?;
    let mut acc = KahanSum::new();
    for i in 0..shift.n_shell_pairs() {
        let (fxr, fxi) = shift.f(i, x);
        let (fyr, fyi) = shift.f(i, y);
        let (dr, di) = (fxr - fyr, fxi - fyi);
        acc.add(dr * dr + di * di);
    }
    Ok(alpha / (2.0 * lattice.params.volume()) * acc.sum())
}

/// Small-coupling slope report for 1 − K_ℓ(α) against αℓ².
///
/// Two closed-form candidates circulate for this slope: 1/(96π), which is
/// the expansion of the single-integral comparison, and 1/(24π²), which is
/// what expanding the double integral itself gives. The report carries the
/// fitted value next to both and asserts nothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallCouplingReport {
    pub ell: f64,
    /// Through-origin least-squares slope of 1 − K over the sampled window.
    pub fitted: f64,
    /// 1/(96π).
    pub bound_expansion: f64,
    /// 1/(24π²).
    pub kernel_expansion: f64,
    pub r_squared: f64,
}

pub fn small_coupling_kernel_report(ell: f64, tol: f64) -> Result<SmallCouplingReport> {
    check_finite("ell", ell)?;
    if ell <= 0.0 {
        return Err(Error::InvalidInput(format!("ell = {ell} must be > 0")));
    }
    let quad_tol = tol.min(1e-10);
    // 8 log-spaced αℓ² targets across the linear window
    let (lo, hi) = (3e-4f64, 3e-2f64);
    let mut xs = Vec::with_capacity(8);
    let mut ys = Vec::with_capacity(8);
    for i in 0..8 {
        let target = lo * (hi / lo).powf(i as f64 / 7.0);
        let alpha = target / (ell * ell);
        let rec = k_ell(alpha, ell, quad_tol)?;
        xs.push(target);
        ys.push(1.0 - rec.k_value);
    }
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let fitted = sxy / sxx;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - fitted * x).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    Ok(SmallCouplingReport {
        ell,
        fitted,
        bound_expansion: 1.0 / (96.0 * PI),
        kernel_expansion: 1.0 / (24.0 * PI * PI),
        r_squared: 1.0 - ss_res / ss_tot,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_lattice, PhysParams};
    use crate::numerics::composite_simpson;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    const TWO_PI: f64 = 2.0 * PI;

    /// Independent W route: fixed-order composite Simpson of the raw
    /// integrand, panel count scaled with z.
    fn w_oracle(z: f64) -> f64 {
        if z == 0.0 {
            return 0.0;
        }
        let raw = |t: f64| {
            if t == 0.0 {
                1.0
            } else {
                (t.sin() / t).powi(2)
            }
        };
        let n = 2 * ((64.0 * z).ceil() as usize + 512);
        composite_simpson(&raw, 0.0, z, n)
    }

    /// Independent kernel route: the diagonal reduction of the double
    /// integral, K = 2 ∫₀¹ (1 − s) exp(−E(s)) ds, on a fixed composite grid.
    fn k_oracle(alpha: f64, ell: f64, panels: usize) -> f64 {
        let f = |s: f64| {
            let e = alpha * ell / (PI * PI) * s * w_oracle(0.25 * s * ell);
            2.0 * (1.0 - s) * (-e).exp()
        };
        composite_simpson(&f, 0.0, 1.0, panels)
    }

    #[test]
    fn w_table_matches_independent_composite_route() {
        // pinned value: Si(2) − sin²(1)
        assert!(
            (w(1.0) - 0.897_339_558_529_123_6).abs() < 1e-12,
            "W(1) = {}",
            w(1.0)
        );
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..40 {
            let z = rng.gen_range(0.0..120.0);
            let (got, want) = (w(z), w_oracle(z));
            assert!((got - want).abs() < 1e-8, "z = {z}: {got} vs {want}");
        }
        // seam continuity between table and expansion
        let (below, above) = (w(W_TABLE_END - 1e-9), w(W_TABLE_END + 1e-9));
        assert!((below - above).abs() < 1e-9, "seam jump {below} vs {above}");
        // monotone increasing toward π/2
        assert!(w(5.0) < w(50.0) && w(50.0) < w(5e3));
        assert!((w(1e8) - FRAC_PI_2).abs() < 1e-7);
    }

    #[test]
    fn kernel_is_one_at_zero_coupling() {
        let rec = k_ell(0.0, 7.0, 1e-10).unwrap();
        assert!((rec.k_value - 1.0).abs() < 1e-10);
        assert!((rec.k_single_integral_bound - 1.0).abs() < 1e-10);
        let rec = k_ell(3.0, 1e-9, 1e-10).unwrap();
        assert!((rec.k_value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn kernel_matches_independent_reduction_oracle() {
        let tol = 1e-9;
        let rec = k_ell(1.0, 10.0, tol).unwrap();
        // double-resolution stability of the oracle itself, then agreement
        let (o1, o2) = (k_oracle(1.0, 10.0, 1024), k_oracle(1.0, 10.0, 2048));
        assert!((o1 - o2).abs() < 1e-9, "oracle not converged: {o1} vs {o2}");
        assert!(
            (rec.k_value - o2).abs() <= 2.0 * tol,
            "k_ell {} vs oracle {o2}",
            rec.k_value
        );
        assert!(rec.error_estimate <= tol);

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..6 {
            let alpha = 10f64.powf(rng.gen_range(-2.0..0.5));
            let ell = 10f64.powf(rng.gen_range(-0.5..0.8));
            let rec = k_ell(alpha, ell, tol).unwrap();
            let want = k_oracle(alpha, ell, 2048);
            assert!(
                (rec.k_value - want).abs() <= 2.0 * tol,
                "alpha = {alpha}, ell = {ell}: {} vs {want}",
                rec.k_value
            );
        }
    }

    #[test]
    fn kernel_bounded_and_dominated_inside_the_window() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            // α, ℓ up to 5: inside the domination window with margin
            let alpha = 10f64.powf(rng.gen_range(-3.0..0.7));
            let ell = 10f64.powf(rng.gen_range(-1.0..0.7));
            let rec = k_ell(alpha, ell, 1e-9).unwrap();
            assert!(rec.k_value <= 1.0 + 2e-9, "K > 1 at ({alpha}, {ell})");
            assert!(rec.k_value > 0.0);
            assert!(
                rec.k_value <= rec.k_single_integral_bound + 2e-9,
                "K = {} above bound {} at ({alpha}, {ell})",
                rec.k_value,
                rec.k_single_integral_bound
            );
        }
    }

    #[test]
    fn kernel_monotone_in_alpha_and_ell() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10 {
            let ell = 10f64.powf(rng.gen_range(-0.5..1.0));
            let a1 = 10f64.powf(rng.gen_range(-2.0..0.0));
            let a2 = a1 * rng.gen_range(1.5..4.0);
            let k1 = k_ell(a1, ell, 1e-9).unwrap().k_value;
            let k2 = k_ell(a2, ell, 1e-9).unwrap().k_value;
            assert!(k2 <= k1 + 3e-9, "K not decreasing in alpha at ell = {ell}");

            let alpha = 10f64.powf(rng.gen_range(-2.0..0.0));
            let l1 = 10f64.powf(rng.gen_range(-0.5..1.0));
            let l2 = l1 * rng.gen_range(1.5..4.0);
            let k1 = k_ell(alpha, l1, 1e-9).unwrap().k_value;
            let k2 = k_ell(alpha, l2, 1e-9).unwrap().k_value;
            assert!(k2 <= k1 + 3e-9, "K not decreasing in ell at alpha = {alpha}");
        }
    }

    /// The single-integral comparison genuinely fails for wide intervals;
    /// this pins both edges of the window rather than asserting the
    /// inequality globally: the ℓ ≈ 9.8 edge survives α → 0, and coupling
    /// pulls it down to ℓ ≈ 6.5 by α = 5.
    #[test]
    fn single_integral_domination_crosses_over() {
        let margin = |alpha: f64, ell: f64| {
            let r = k_ell(alpha, ell, 1e-9).unwrap();
            r.k_single_integral_bound - r.k_value
        };
        assert!(margin(0.01, 9.5) > 0.0);
        assert!(margin(0.01, 10.0) < 0.0, "weak-coupling edge moved past ell = 10");
        assert!(margin(1.0, 5.0) > 0.0);
        assert!(margin(1.0, 10.0) < 0.0);
        assert!(margin(5.0, 6.0) > 0.0);
        assert!(margin(5.0, 7.0) < 0.0, "strong-coupling edge moved past ell = 7");
    }

    #[test]
    fn rel_upper_closed_form_and_homogeneity() {
        let r = rel_upper(4.0 * PI, 1.0).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = rel_upper(1.0, 100.0).unwrap();
        assert!((r.value - 28.209_479_177_387_813).abs() < 1e-10);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let alpha = rng.gen_range(0.01..50.0);
            let lam = rng.gen_range(0.1..100.0);
            let v = rel_upper(alpha, lam).unwrap().value;
            let v2 = rel_upper(alpha, 2.0 * lam).unwrap().value;
            let v4 = rel_upper(4.0 * alpha, lam).unwrap().value;
            assert!((v2 - 2.0 * v).abs() <= 1e-12 * v.abs());
            assert!((v4 - 2.0 * v).abs() <= 1e-12 * v.abs());
        }
        assert!(rel_upper(-1.0, 1.0).is_err());
        assert!(rel_upper(1.0, 0.0).is_err());
    }

    #[test]
    fn rel_lower_root_is_admissible_with_tiny_residual() {
        for alpha in [1e-3, 0.2, 2.0] {
            let rec = rel_lower(alpha, 1.0).unwrap();
            assert!(!rec.degenerate);
            let u = rec.aux_value("u_star").unwrap();
            let ell = rec.aux_value("ell_star").unwrap();
            let k = rec.aux_value("k_at_ell_star").unwrap();
            assert!(u > 0.0 && u < 0.5f64.min(1.0 / ell));
            let residual = ((1.0 / ell - u) * (0.5 - u) - k.sqrt() / (2.0 * ell)).abs();
            assert!(residual <= 1e-10, "alpha = {alpha}: residual {residual:e}");
            assert!((rec.value - u).abs() <= 1e-15); // Λ = 1
            // value scales linearly in Λ with the same root
            let scaled = rel_lower(alpha, 7.5).unwrap();
            assert!((scaled.value - 7.5 * u).abs() <= 7.5 * 1e-12 * u);
        }
    }

    #[test]
    fn rel_lower_stays_below_rel_upper() {
        for alpha in [1e-4, 1e-2, 0.3, 1.0, 3.0, 10.0, 100.0] {
            let lo = rel_lower(alpha, 1.0).unwrap().value;
            let hi = rel_upper(alpha, 1.0).unwrap().value;
            assert!(lo <= hi + 1e-12, "alpha = {alpha}: {lo} > {hi}");
        }
    }

    /// The claimed √α small-coupling law does not survive the saturation of
    /// W at π/2: for ℓ past a few units the kernel exponent grows like αℓ
    /// rather than αℓ², the optimal root scales linearly in α, and ℓ*·√α
    /// stays flat. This pins the measured behavior: exponent ≈ 1, ℓ*-spread
    /// within the factor-2 window.
    #[test]
    fn rel_lower_small_alpha_scaling_saturates_to_linear() {
        let alphas = [1e-4, 10f64.powf(-3.5), 1e-3, 10f64.powf(-2.5), 1e-2];
        let mut values = Vec::new();
        let mut spread = Vec::new();
        for &alpha in &alphas {
            let rec = rel_lower(alpha, 1.0).unwrap();
            values.push(rec.value);
            spread.push(rec.aux_value("ell_star").unwrap() * alpha.sqrt());
        }
        let fit = crate::numerics::fit_powerlaw_xy(&alphas, &values).unwrap();
        assert!(
            (0.93..=1.05).contains(&fit.exponent),
            "measured exponent {}",
            fit.exponent
        );
        let (min, max) = spread
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &s| (lo.min(s), hi.max(s)));
        assert!(max / min <= 2.0, "ell_star spread {min}..{max}");
    }

    #[test]
    fn coherent_shift_vanishes_at_origin_and_overlap_is_symmetric() {
        let params = PhysParams::new(1.0, 3.9, TWO_PI, 1).unwrap();
        let lattice = build_lattice(params).unwrap();
        let shift = CoherentShift::new(&lattice).unwrap();
        assert!(shift.n_shell_pairs() > 0);
        for i in 0..shift.n_shell_pairs() {
            assert_eq!(shift.f(i, 0.0), (0.0, 0.0));
            let kn = lattice.mode_of_pair(shift.pair_index(i)).norm_k;
            assert!(kn > 1.95 && kn < 3.9);
        }
        let ell = 2.0;
        let (x, y) = (0.11, 0.37);
        let fwd = overlap_exponent_lattice(1.3, ell, x, y, &lattice).unwrap();
        let rev = overlap_exponent_lattice(1.3, ell, y, x, &lattice).unwrap();
        assert_eq!(fwd, rev);
        assert_eq!(overlap_exponent_lattice(1.3, ell, x, x, &lattice).unwrap(), 0.0);
        assert!(fwd > 0.0);

        // domain and degenerate-shell errors
        assert!(overlap_exponent_lattice(1.3, ell, -0.1, y, &lattice).is_err());
        assert!(overlap_exponent_lattice(1.3, ell, x, 0.9, &lattice).is_err());
        let empty = build_lattice(PhysParams::new(1.0, 0.9, TWO_PI, 1).unwrap()).unwrap();
        assert!(CoherentShift::new(&empty).is_err());
    }

    /// Continuum comparator: the V → ∞ limit of the overlap exponent,
    /// E(u) = (α/2π²) ∫_{Λ/2}^Λ dk/k [k u W(ku/2) − 1 + sinc(ku)].
    fn continuum_exponent(alpha: f64, lambda_uv: f64, u: f64) -> f64 {
        let f = |k: f64| {
            let ku = k * u;
            if ku == 0.0 {
                return 0.0;
            }
            (ku * w(0.5 * ku) - 1.0 + ku.sin() / ku) / k
        };
        alpha / (2.0 * PI * PI)
            * adaptive_simpson(&f, 0.5 * lambda_uv, lambda_uv, 1e-12)
    }

    #[test]
    fn overlap_exponent_converges_to_continuum_limit() {
        // ΛL/2π = 10
        let params = PhysParams::new(1.0, 10.0, TWO_PI, 1).unwrap();
        let lattice = build_lattice(params).unwrap();
        let ell = 5.0; // interval [0, 1/2]
        for (x, y) in [(0.0, 0.04), (0.03, 0.2), (0.0, 0.33), (0.02, 0.48)] {
            let got = overlap_exponent_lattice(1.0, ell, x, y, &lattice).unwrap();
            let want = continuum_exponent(1.0, 10.0, (x - y).abs());
            let dev = (got - want).abs() / want;
            assert!(dev < 0.05, "u = {}: lattice {got} vs continuum {want}", (x - y).abs());
        }
    }

    /// The displayed kernel exponent is 4× the shifted-state overlap limit,
    /// exactly in both the quadratic and saturated regimes.
    #[test]
    fn displayed_kernel_exponent_is_four_times_the_overlap_limit() {
        let check = |ell: f64, s: f64, window: (f64, f64)| {
            let displayed = kernel_exponent(1.0, ell, s);
            // physical separation for Λ = 1 is s·ℓ
            let honest = continuum_exponent(1.0, 1.0, s * ell);
            let ratio = displayed / honest;
            assert!(
                (window.0..=window.1).contains(&ratio),
                "ell = {ell}, s = {s}: ratio {ratio}"
            );
        };
        check(0.4, 0.5, (3.95, 4.05)); // quadratic regime
        check(4000.0, 0.5, (3.95, 4.05)); // saturated regime
        check(16.0, 0.5, (3.8, 4.5)); // crossover region
    }

    #[test]
    fn small_coupling_slope_matches_direct_expansion() {
        let report = small_coupling_kernel_report(0.7, 1e-10).unwrap();
        assert!((report.bound_expansion - 1.0 / (96.0 * PI)).abs() < 1e-18);
        assert!((report.kernel_expansion - 1.0 / (24.0 * PI * PI)).abs() < 1e-18);
        assert!(report.r_squared > 0.9999, "r² = {}", report.r_squared);
        let dev = (report.fitted - report.kernel_expansion).abs() / report.kernel_expansion;
        assert!(dev < 0.02, "fitted {} vs derived {}", report.fitted, report.kernel_expansion);
        // the two candidates are genuinely distinct; the fit resolves them
        let gap = (report.kernel_expansion - report.bound_expansion).abs();
        assert!((report.fitted - report.bound_expansion).abs() > 0.5 * gap);
    }
}
