//! Twelve pinned acceptance checks covering the whole library surface.
//!
//! Each criterion reduces to one headline comparison (measured vs expected
//! within a tolerance pinned here) plus auxiliary sub-checks that report to
//! stderr when they fail. A criterion passes only if every sub-check holds
//! and its wall clock stays inside the budget. Errors never abort the suite:
//! an errored criterion is marked failed with a NaN measurement.
//!
//! Tolerance conventions: two-sided checks pass when
//! |measured - expected| <= tolerance; one-sided floors carry tolerance 0
//! and pass when measured >= expected (criterion 11 requires a strict >).
//! Criterion 12 counts fixtures, so measured is an integer out of expected.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use serde::Serialize;

use selfenergy::bounds::{binding_window, k_ell, per_particle_min, rel_lower, rel_upper};
use selfenergy::dressing::{a2_variational_energy, optimize_k};
use selfenergy::fock::{convergence_study, pt_slope_check, DensityTable, HamiltonianModel};
use selfenergy::lowerbounds::{a2_lower_bound, commutator_lower_bound, CommutatorMode};
use selfenergy::ltcheck::{lt_ratio, LtMode, OrbitalSet};
use selfenergy::numerics::{derive_seed, fit_powerlaw_xy, KahanSum};
use selfenergy::{build_lattice, ModeLattice, PhysParams};

use crate::config::{CliError, SweepConfig};
use crate::rows::{self, TOOL_VERSION};
use crate::tasks;

const TAU: f64 = 2.0 * PI;

/// Wall-clock budgets in seconds, criterion 1 through 12.
const BUDGETS: [f64; 12] = [
    1.0, 10.0, 60.0, 300.0, 600.0, 900.0, 300.0, 300.0, 60.0, 60.0, 600.0, 60.0,
];

/// One line of the acceptance report. Non-finite `measured` (an errored
/// criterion) serializes as JSON null.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub criterion_id: u32,
    pub status: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub runtime_s: f64,
    pub tool_version: String,
    pub seed: u64,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

/// Headline outcome of one criterion before timing is folded in.
struct Check {
    pass: bool,
    measured: f64,
    expected: f64,
    tolerance: f64,
}

impl Check {
    fn window(measured: f64, expected: f64, tolerance: f64) -> Self {
        Check {
            pass: (measured - expected).abs() <= tolerance,
            measured,
            expected,
            tolerance,
        }
    }

    fn floor(measured: f64, expected: f64) -> Self {
        Check {
            pass: measured >= expected,
            measured,
            expected,
            tolerance: 0.0,
        }
    }

    fn and(mut self, sub: bool) -> Self {
        self.pass &= sub;
        self
    }
}

/// Run criteria 1..=12 in order, printing one line each as they finish.
/// `bin` is the CLI binary exercised by the determinism fixtures.
pub fn run_all(cfg: &SweepConfig, bin: &Path) -> Vec<CriterionResult> {
    (1..=12).map(|id| run_one(id, cfg, bin)).collect()
}

pub fn run_one(id: u32, cfg: &SweepConfig, bin: &Path) -> CriterionResult {
    let started = Instant::now();
    let outcome = dispatch(id, cfg, bin);
    let runtime_s = started.elapsed().as_secs_f64();
    let budget = BUDGETS[(id - 1) as usize];
    let result = match outcome {
        Ok(check) => {
            if check.pass && runtime_s > budget {
                eprintln!("criterion {id}: checks passed but runtime {runtime_s:.1} s exceeds the {budget:.0} s budget");
            }
            CriterionResult {
                criterion_id: id,
                status: if check.pass && runtime_s <= budget { "pass" } else { "fail" }.into(),
                measured: check.measured,
                expected: check.expected,
                tolerance: check.tolerance,
                runtime_s,
                tool_version: TOOL_VERSION.into(),
                seed: cfg.seed,
            }
        }
        Err(err) => {
            eprintln!("criterion {id}: error: {err}");
            CriterionResult {
                criterion_id: id,
                status: "fail".into(),
                measured: f64::NAN,
                expected: f64::NAN,
                tolerance: f64::NAN,
                runtime_s,
                tool_version: TOOL_VERSION.into(),
                seed: cfg.seed,
            }
        }
    };
    println!(
        "criterion {id:>2}: {} measured {:.6e} expected {:.6e} tol {:.1e} ({:.1} s)",
        if result.passed() { "PASS" } else { "FAIL" },
        result.measured,
        result.expected,
        result.tolerance,
        result.runtime_s,
    );
    result
}

fn dispatch(id: u32, cfg: &SweepConfig, bin: &Path) -> Result<Check, CliError> {
    match id {
        1 => criterion_1(cfg),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(cfg),
        10 => criterion_10(),
        11 => criterion_11(cfg),
        12 => criterion_12(cfg, bin),
        other => Err(CliError::Config(format!("no criterion {other}"))),
    }
}

fn lattice18() -> Result<ModeLattice, CliError> {
    Ok(build_lattice(PhysParams::new(1.0, 1.5, TAU, 1)?)?)
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Closed-form constants, exact to 1e-12: the continuum commutator bound at
/// alpha = 2, Lambda = 1 equals 1/(3 pi) - 9/8, the relativistic upper bound
/// at alpha = 4 pi, Lambda = 1 equals 1, and the registered constants match
/// their defining expressions. The last check is what the perturbed-constant
/// fixture of criterion 12 trips.
fn criterion_1(cfg: &SweepConfig) -> Result<Check, CliError> {
    let set = cfg.constants_set()?;
    let mut dev = (commutator_lower_bound(2.0, 1.0, CommutatorMode::Continuum).value
        - (1.0 / (3.0 * PI) - 9.0 / 8.0))
        .abs();
    dev = dev.max((rel_upper(4.0 * PI, 1.0)?.value - 1.0).abs());
    dev = dev.max((set.get("c_rel_upper")? - (4.0 * PI).sqrt().recip()).abs());
    dev = dev.max((set.get("c_nonrel_lower")? - (3.0 * PI * 2f64.sqrt()).recip()).abs());
    Ok(Check::window(dev, 0.0, 1e-12))
}

/// Lattice sums at Lambda L / 2 pi = 8: transverse_sum diagonal within 2% of
/// Lambda^3 / 9 pi^2 and vacuum_A2 within 2% of Lambda^2 / 4 pi^2.
fn criterion_2() -> Result<Check, CliError> {
    let lambda = 8.0;
    let lat = build_lattice(PhysParams::new(1.0, lambda, TAU, 1)?)?;
    let ts = selfenergy::lattice::transverse_sum(&lat);
    let diag_target = lambda.powi(3) / (9.0 * PI * PI);
    let vac_target = lambda.powi(2) / (4.0 * PI * PI);
    let mut dev: f64 = (selfenergy::lattice::vacuum_a2(&lat) / vac_target - 1.0).abs();
    for i in 0..3 {
        dev = dev.max((ts[i][i] / diag_target - 1.0).abs());
    }
    Ok(Check::window(dev, 0.0, 0.02))
}

/// Uniform-density oracle against the decoupled-oscillator closed form
/// E0 = 1/2 sum_pairs (sqrt(|k|^2 + alpha/V) - |k|) on the 36-pair lattice.
/// Caps include 4 because the A^2 coupling preserves photon parity: the
/// 2 -> 3 step is zero by parity alone, 3 -> 4 is the genuine tail.
fn criterion_3() -> Result<Check, CliError> {
    let lat = lattice18()?;
    let alpha = 1.0;
    let v = lat.params.volume();
    let exact: f64 = lat
        .modes
        .iter()
        .map(|m| (m.norm_k * m.norm_k + alpha / v).sqrt() - m.norm_k)
        .collect::<KahanSum>()
        .sum();
    let uniform = DensityTable::uniform(lat.params.box_side);
    let trace = convergence_study(
        &lat,
        alpha,
        HamiltonianModel::DensityCoupled(&uniform),
        &[1, 2, 3, 4],
    )?;
    let e0 = trace.points.last().expect("nonempty cap ladder").e0;
    if !trace.converged {
        eprintln!("criterion 3: cap ladder did not converge");
    }
    Ok(Check::window((e0 / exact - 1.0).abs(), 0.0, 1e-8).and(trace.converged))
}

/// Variational upper bound at the optimal bandwidth dominates the oracle
/// ground energy of the matching A^2 model; measured is the smallest gap.
fn criterion_4() -> Result<Check, CliError> {
    let lat = lattice18()?;
    let mut min_gap = f64::INFINITY;
    for alpha in [0.5, 1.0, 2.0] {
        let upper = optimize_k(&lat, alpha)?.energy.total;
        let trace = convergence_study(&lat, alpha, HamiltonianModel::A2Only, &[1, 2, 3])?;
        let oracle = trace.points.last().expect("nonempty cap ladder").e0;
        let gap = upper - oracle;
        if gap < 0.0 {
            eprintln!("criterion 4: alpha = {alpha}: variational {upper} below oracle {oracle}");
        }
        min_gap = min_gap.min(gap);
    }
    Ok(Check::floor(min_gap, 0.0))
}

/// Sandwich on the 18-mode lattice: finite-lattice commutator bound below
/// the minimal-coupling oracle below the variational upper bound; measured
/// is the smallest of the six ordering margins.
fn criterion_5() -> Result<Check, CliError> {
    let lat = lattice18()?;
    let mut min_margin = f64::INFINITY;
    for alpha in [0.5, 1.0, 2.0] {
        let lower = commutator_lower_bound(alpha, 1.5, CommutatorMode::Lattice(&lat)).value;
        let trace = convergence_study(&lat, alpha, HamiltonianModel::MinimalCoupling, &[1, 2, 3])?;
        let oracle = trace.points.last().expect("nonempty cap ladder").e0;
        let upper = optimize_k(&lat, alpha)?.energy.total;
        for (label, margin) in [("oracle - lower", oracle - lower), ("upper - oracle", upper - oracle)] {
            if margin < 0.0 {
                eprintln!("criterion 5: alpha = {alpha}: {label} = {margin}");
            }
            min_margin = min_margin.min(margin);
        }
    }
    Ok(Check::floor(min_margin, 0.0))
}

/// Warm-started bandwidth refinement for the criterion 6 cutoff sweep: probe
/// the predicted optimum and two 15% flanks in log K, then take one parabola
/// step when it promises more than 1e-5 relative improvement. Falls back to
/// the full golden search if the prediction misses the bracket.
fn refine_k(lat: &ModeLattice, alpha: f64, k_hat: f64) -> Result<(f64, f64), CliError> {
    const RATIO: f64 = 1.15;
    let eval = |k: f64| -> Result<f64, CliError> { Ok(a2_variational_energy(lat, alpha, k)?.total) };
    let (k0, k1, k2) = (k_hat / RATIO, k_hat, k_hat * RATIO);
    let (e0, e1, e2) = (eval(k0)?, eval(k1)?, eval(k2)?);
    if e1 > e0 || e1 > e2 {
        let opt = optimize_k(lat, alpha)?;
        return Ok((opt.k_star, opt.energy.total));
    }
    let h = RATIO.ln();
    let denom = e0 - 2.0 * e1 + e2;
    let offset = if denom > 0.0 {
        (0.5 * h * (e0 - e2) / denom).clamp(-h, h)
    } else {
        0.0
    };
    // predicted improvement at the vertex of the interpolating parabola
    if denom > 0.0 && denom * (offset / h).powi(2) / 2.0 > 1e-5 * e1.abs() {
        let kv = k1 * offset.exp();
        let ev = eval(kv)?;
        if ev < e1 {
            return Ok((kv, ev));
        }
    }
    Ok((k1, e1))
}

/// Power-law exponents of the a2 lower-bound family. Closed-form path:
/// slope vs Lambda equals 12/7 +- 0.05 and vs alpha equals 2/7 +- 0.03, both
/// sampled at strong coupling where the bound sits on its 12/7 branch (the
/// -9/8 Lambda^2-type correction decays like (alpha Lambda^-2)^{-2/7}).
/// Lattice path: slope of the optimized variational total over
/// Lambda L / 2 pi in 4..=10 lands in [1.55, 1.90]; the optimum bandwidth is
/// continued with the 6/7 scaling law between cutoffs, so only the first
/// cutoff pays for a cold golden search.
fn criterion_6() -> Result<Check, CliError> {
    let lambdas = logspace(1e2, 1e4, 9);
    let vals: Vec<f64> = lambdas.iter().map(|&l| a2_lower_bound(1e4, l).value).collect();
    let s_lambda = fit_powerlaw_xy(&lambdas, &vals)?.exponent;
    let ok_lambda = (s_lambda - 12.0 / 7.0).abs() <= 0.05;
    if !ok_lambda {
        eprintln!("criterion 6: closed-form cutoff slope {s_lambda} outside 12/7 +- 0.05");
    }

    let alphas = logspace(1e5, 1e7, 9);
    let vals: Vec<f64> = alphas.iter().map(|&a| a2_lower_bound(a, 1e2).value).collect();
    let s_alpha = fit_powerlaw_xy(&alphas, &vals)?.exponent;
    let ok_alpha = (s_alpha - 2.0 / 7.0).abs() <= 0.03;
    if !ok_alpha {
        eprintln!("criterion 6: closed-form coupling slope {s_alpha} outside 2/7 +- 0.03");
    }

    let alpha = 100.0;
    let mut warm: Option<(f64, f64)> = None;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for m in 4..=10u32 {
        let lambda = f64::from(m);
        let lat = build_lattice(PhysParams::new(alpha, lambda, TAU, 1)?)?;
        let (k_star, total) = match warm {
            None => {
                let opt = optimize_k(&lat, alpha)?;
                (opt.k_star, opt.energy.total)
            }
            Some((prev_lambda, prev_k)) => {
                refine_k(&lat, alpha, prev_k * (lambda / prev_lambda).powf(6.0 / 7.0))?
            }
        };
        xs.push(lambda);
        ys.push(total);
        warm = Some((lambda, k_star));
    }
    let s_lattice = fit_powerlaw_xy(&xs, &ys)?.exponent;
    Ok(Check::window(s_lattice, 1.725, 0.175).and(ok_lambda).and(ok_alpha))
}

/// Perturbative slope on the 18-mode lattice: E0/alpha at the smallest
/// sampled alpha within 1% of the first-order value (half the vacuum A^2
/// expectation), and the remainder |E0 - alpha * first_order| fits a power
/// of alpha with exponent >= 1.8.
fn criterion_7() -> Result<Check, CliError> {
    let lat = lattice18()?;
    let alphas = [2.5e-4, 5e-4, 1e-3];
    let report = pt_slope_check(&lat, &alphas)?;
    let ratio = report.slope / report.reference;
    let devs: Vec<f64> = report
        .runs
        .iter()
        .map(|&(a, e0)| (e0 - a * report.reference).abs())
        .collect();
    let xs: Vec<f64> = report.runs.iter().map(|r| r.0).collect();
    let order = fit_powerlaw_xy(&xs, &devs)?.exponent;
    let ok_order = order >= 1.8;
    if !ok_order {
        eprintln!("criterion 7: remainder order {order} below 1.8");
    }
    Ok(Check::window(ratio, 1.0, 0.01).and(ok_order))
}

/// Relativistic pipeline. Sub-checks: (a) k_ell reproduced by rerunning the
/// quadrature at a quarter of the tolerance (at least double the resolution
/// wherever refinement stopped near threshold), agreement within twice the
/// coarse tolerance; (b) K <= its single-integral bound on an (alpha, ell)
/// grid inside the window where that bound dominates; (c) headline: the
/// alpha-exponent of rel_lower over [1e-4, 1e-2]; (d) ell_star alpha^{1/2}
/// constant within factor 2 across the sweep; (e) rel_lower <= rel_upper
/// pointwise.
fn criterion_8() -> Result<Check, CliError> {
    let tol = 1e-9;
    let mut ok = true;
    for (alpha, ell) in [(0.5, 1.0), (0.5, 5.0), (2.0, 1.0), (2.0, 5.0), (1e-3, 8.0)] {
        let coarse = k_ell(alpha, ell, tol)?;
        let fine = k_ell(alpha, ell, tol / 4.0)?;
        if (coarse.k_value - fine.k_value).abs() > 2.0 * tol {
            eprintln!(
                "criterion 8: k_ell({alpha}, {ell}) moved by {} under refinement",
                (coarse.k_value - fine.k_value).abs()
            );
            ok = false;
        }
    }
    for alpha in [0.01, 0.1, 0.5, 1.0, 2.0, 5.0] {
        for ell in [0.3, 1.0, 2.0, 4.0, 6.0] {
            let rec = k_ell(alpha, ell, tol)?;
            if rec.k_value > rec.k_single_integral_bound + 2.0 * tol {
                eprintln!("criterion 8: K({alpha}, {ell}) above its single-integral bound");
                ok = false;
            }
        }
    }
    let alphas = logspace(1e-4, 1e-2, 7);
    let mut vals = Vec::new();
    let mut products = Vec::new();
    for &alpha in &alphas {
        let rec = rel_lower(alpha, 1.0)?;
        if rec.degenerate {
            eprintln!("criterion 8: rel_lower degenerate at alpha = {alpha}");
            ok = false;
            continue;
        }
        let ell_star = rec.aux_value("ell_star").expect("non-degenerate carries ell_star");
        products.push(ell_star * alpha.sqrt());
        vals.push(rec.value);
        let upper = rel_upper(alpha, 1.0)?.value;
        if rec.value > upper {
            eprintln!("criterion 8: rel_lower {} above rel_upper {upper} at alpha = {alpha}", rec.value);
            ok = false;
        }
    }
    let spread = products.iter().cloned().fold(f64::MIN, f64::max)
        / products.iter().cloned().fold(f64::MAX, f64::min);
    if !(1.0..=2.0).contains(&spread) {
        eprintln!("criterion 8: ell_star spread {spread} off the alpha^-1/2 law by more than 2x");
        ok = false;
    }
    let s_alpha = fit_powerlaw_xy(&alphas, &vals)?.exponent;
    Ok(Check::window(s_alpha, 0.5, 0.05).and(ok))
}

/// Binding threshold N_star finite on the 3x3 grid and within factor 2 of
/// the analytic crossover; measured is the worst N_star / estimate factor.
fn criterion_9(cfg: &SweepConfig) -> Result<Check, CliError> {
    let set = cfg.constants_set()?;
    let mut worst = 1.0f64;
    for alpha in [0.1, 1.0, 10.0] {
        for lambda in [1e2, 1e3, 1e4] {
            let w = binding_window(alpha, lambda, &set)?;
            if w.n_star == 0 {
                eprintln!("criterion 9: no binding threshold at alpha = {alpha}, lambda = {lambda}");
                return Ok(Check::window(f64::INFINITY, 1.0, 1.0));
            }
            let f = w.n_star as f64 / w.n_star_estimate;
            worst = worst.max(f.max(1.0 / f));
        }
    }
    Ok(Check::window(worst, 1.0, 1.0))
}

/// Integer per-particle minimization reproduces the theorem exponents:
/// value scales like Lambda^{12/7} (headline) and alpha^{2/7} over two
/// decades with c_kin = Lambda^2 and c_field = sqrt(alpha) Lambda^{3/2}.
fn criterion_10() -> Result<Check, CliError> {
    let alpha0 = 1e12f64;
    let lambdas = logspace(1e2, 1e4, 9);
    let vals: Vec<f64> = lambdas
        .iter()
        .map(|&l| Ok(per_particle_min(l * l, alpha0.sqrt() * l.powf(1.5))?.value))
        .collect::<Result<_, CliError>>()?;
    let s_lambda = fit_powerlaw_xy(&lambdas, &vals)?.exponent;

    let alphas = logspace(1e6, 1e8, 9);
    let vals: Vec<f64> = alphas
        .iter()
        .map(|&a| Ok(per_particle_min(1.0, a.sqrt())?.value))
        .collect::<Result<_, CliError>>()?;
    let s_alpha = fit_powerlaw_xy(&alphas, &vals)?.exponent;
    let ok_alpha = (s_alpha - 2.0 / 7.0).abs() <= 0.03;
    if !ok_alpha {
        eprintln!("criterion 10: coupling exponent {s_alpha} outside 2/7 +- 0.03");
    }
    Ok(Check::window(s_lambda, 12.0 / 7.0, 0.03).and(ok_alpha))
}

/// Kinetic-energy comparison: ratio minus three standard errors stays above
/// 1 for N in {2, 4, 6}, both modes, R in {L/8, L/4}, q = 2, 10^4 samples
/// per run; measured is the smallest margin.
fn criterion_11(cfg: &SweepConfig) -> Result<Check, CliError> {
    let box_side = TAU;
    let mut min_margin = f64::INFINITY;
    let mut sub = 0u64;
    for n in [2usize, 4, 6] {
        let orbitals = OrbitalSet::lowest_modes(box_side, n)?;
        for mode in [LtMode::Nonrel, LtMode::Rel] {
            for divisor in [8.0, 4.0] {
                sub += 1;
                let rec = lt_ratio(
                    &orbitals,
                    box_side / divisor,
                    2,
                    mode,
                    10_000,
                    1_000,
                    derive_seed(cfg.seed, 1_000 + sub),
                )?;
                let margin = if rec.infinite {
                    f64::INFINITY
                } else {
                    rec.ratio - 3.0 * rec.stderr
                };
                if margin <= 1.0 {
                    eprintln!(
                        "criterion 11: margin {margin} at N = {n}, R = L/{divisor}, {:?}",
                        rec.mode
                    );
                }
                min_margin = min_margin.min(margin);
            }
        }
    }
    let pass = min_margin > 1.0;
    Ok(Check::floor(min_margin, 1.0).and(pass))
}

/// Harness determinism and the exit-code contract, five fixtures:
/// (a) one config + seed produces byte-identical CSV bodies across different
/// worker counts; (b) a numerical failure (power-law fit starved to two grid
/// points) exits 1 and still writes the partial rows; (c) an empty grid
/// exits 2 and writes nothing; (d) a clean run exits 0 with parseable rows;
/// (e) a perturbed closed-form constant makes criterion 1 itself fail, so a
/// broken report names the criterion. Measured is the fixture pass count.
fn criterion_12(cfg: &SweepConfig, bin: &Path) -> Result<Check, CliError> {
    let scratch = std::env::temp_dir().join(format!("qedbounds-accept-{}", std::process::id()));
    fs::create_dir_all(&scratch)
        .map_err(|e| CliError::Config(format!("scratch dir {}: {e}", scratch.display())))?;
    let outcome = fixtures(cfg, bin, &scratch);
    fs::remove_dir_all(&scratch).ok();
    let passed = outcome?;
    Ok(Check::window(passed as f64, 5.0, 0.0))
}

fn fixtures(cfg: &SweepConfig, bin: &Path, scratch: &Path) -> Result<usize, CliError> {
    let mut passed = 0usize;

    let det = SweepConfig::from_json(
        r#"{"task":"bounds","grid":{"alpha":[0.5,2.0],"lambda":[1.0,4.0]},"seed":7}"#,
    )?;
    let one = rows::csv_string("run one", &tasks::run(&det, 2)?.rows);
    let two = rows::csv_string("run two", &tasks::run(&det, 3)?.rows);
    let body = |s: &str| s.split_once('\n').map(|(_, rest)| rest.to_owned()).unwrap_or_default();
    if body(&one) == body(&two) {
        passed += 1;
    } else {
        eprintln!("criterion 12: CSV bodies differ between worker counts");
    }

    let spawn = |name: &str, json: &str, out: &Path| -> Result<Option<i32>, CliError> {
        let path = scratch.join(name);
        fs::write(&path, json).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let status = Command::new(bin)
            .env_remove("QEDBOUNDS_OUT_DIR")
            .arg(SweepConfig::from_json(json).map(|c| c.task.as_str()).unwrap_or("bounds"))
            .arg("--config")
            .arg(&path)
            .arg("--out")
            .arg(out)
            .status()
            .map_err(|e| CliError::Numerical(format!("spawning {}: {e}", bin.display())))?;
        Ok(status.code())
    };

    let out_fit = scratch.join("fit.csv");
    let code = spawn(
        "fit.json",
        r#"{"task":"fit","grid":{"alpha":[10000.0],"lambda":[100.0,1000.0]},"seed":11}"#,
        &out_fit,
    )?;
    let partial = fs::read_to_string(&out_fit)
        .ok()
        .and_then(|text| rows::parse_csv(&text).ok())
        .map(|rows| rows.iter().any(|r| r.is_ok()) && rows.iter().any(|r| !r.is_ok()))
        .unwrap_or(false);
    if code == Some(1) && partial {
        passed += 1;
    } else {
        eprintln!("criterion 12: starved fit exited {code:?}, partial rows present: {partial}");
    }

    let out_empty = scratch.join("empty.csv");
    let code = spawn("empty.json", r#"{"task":"bounds","grid":{"alpha":[]},"seed":3}"#, &out_empty)?;
    if code == Some(2) && !out_empty.exists() {
        passed += 1;
    } else {
        eprintln!("criterion 12: empty grid exited {code:?}, output exists: {}", out_empty.exists());
    }

    let out_good = scratch.join("good.csv");
    let code = spawn(
        "good.json",
        r#"{"task":"bounds","grid":{"alpha":[1.0],"lambda":[1.0]},"seed":5}"#,
        &out_good,
    )?;
    let clean = fs::read_to_string(&out_good)
        .ok()
        .and_then(|text| rows::parse_csv(&text).ok())
        .map(|rows| !rows.is_empty() && rows.iter().all(|r| r.is_ok()))
        .unwrap_or(false);
    if code == Some(0) && clean {
        passed += 1;
    } else {
        eprintln!("criterion 12: clean run exited {code:?}, rows ok: {clean}");
    }

    // a perturbed constant must fail criterion 1; the report names criteria
    // by construction, so the whole run would exit nonzero with this line
    let mut bad = cfg.clone();
    bad.constants
        .insert("c_rel_upper".into(), 1.05 * (4.0 * PI).sqrt().recip());
    match criterion_1(&bad) {
        Ok(check) if !check.pass => passed += 1,
        Ok(_) => eprintln!("criterion 12: perturbed constant not caught by criterion 1"),
        Err(err) => eprintln!("criterion 12: perturbed-constant fixture errored: {err}"),
    }

    Ok(passed)
}

pub fn report_json(results: &[CriterionResult]) -> String {
    serde_json::to_string_pretty(results).expect("report serializes") + "\n"
}
