//! Ground-state eigensolver: dense LAPACK below `DENSE_FALLBACK`, otherwise
//! Lanczos with full reorthogonalization and seeded random restarts.

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fock::hamiltonian::{CsrMatrix, SectorHamiltonian};
use crate::numerics::linalg::sym_eig_ground;

/// Below this dimension the matrix is densified and handed to LAPACK.
pub const DENSE_FALLBACK: usize = 2000;

const LANCZOS_SEED: u64 = 0x5e1f_e4e7_6eb0_11d5;
const MAX_STEPS_PER_RUN: usize = 400;
const MAX_RESTARTS: usize = 5;
const CHECK_INTERVAL: usize = 25;

/// Smallest eigenvalue with its verified residual ‖Hv − E₀v‖.
#[derive(Debug, Clone, Copy)]
pub struct GroundEnergy {
    pub e0: f64,
    pub residual: f64,
    pub dim: usize,
}

/// Ground energy of the assembled sector Hamiltonian.
pub fn ground_energy(h: &SectorHamiltonian, tol: f64) -> Result<GroundEnergy> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidInput(format!("tol = {tol} must be finite and > 0")));
    }
    ground_energy_csr(&h.matrix, tol)
}

pub(crate) fn ground_energy_csr(m: &CsrMatrix, tol: f64) -> Result<GroundEnergy> {
    let dim = m.n;
    if dim < DENSE_FALLBACK {
        let (e0, v) = sym_eig_ground(m.to_dense())?;
        let residual = residual_norm(m, v.as_slice().expect("contiguous"), e0);
        return Ok(GroundEnergy { e0, residual, dim });
    }
    lanczos_ground(m, tol)
}

fn residual_norm(m: &CsrMatrix, v: &[f64], theta: f64) -> f64 {
    let mut hv = vec![0.0; m.n];
    m.matvec(v, &mut hv);
    hv.iter().zip(v).map(|(h, x)| (h - theta * x).powi(2)).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn lanczos_ground(m: &CsrMatrix, tol: f64) -> Result<GroundEnergy> {
    let dim = m.n;
    let scale = m.norm_bound().max(1.0);
    let mut best: Option<(f64, f64)> = None; // (e0, residual)
    let mut matvecs = 0usize;

    for restart in 0..MAX_RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(LANCZOS_SEED.wrapping_add(restart as u64));
        let mut v: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() - 0.5).collect();
        let nrm = dot(&v, &v).sqrt();
        v.iter_mut().for_each(|x| *x /= nrm);

        let mut basis: Vec<Vec<f64>> = vec![v];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut w = vec![0.0; dim];

        for step in 0..MAX_STEPS_PER_RUN.min(dim) {
            let vj = &basis[step];
            m.matvec(vj, &mut w);
            matvecs += 1;
            let a_j = dot(vj, &w);
            alphas.push(a_j);
            for (x, y) in w.iter_mut().zip(vj) {
                *x -= a_j * y;
            }
            if step > 0 {
                let b_prev = betas[step - 1];
                for (x, y) in w.iter_mut().zip(&basis[step - 1]) {
                    *x -= b_prev * y;
                }
            }
            // full reorthogonalization, two sweeps
            for _ in 0..2 {
                for u in &basis {
                    let c = dot(u, &w);
                    if c != 0.0 {
                        for (x, y) in w.iter_mut().zip(u) {
                            *x -= c * y;
                        }
                    }
                }
            }
            let b_j = dot(&w, &w).sqrt();
            let breakdown = b_j <= 1e-14 * scale;
            let at_check =
                breakdown || step + 1 == MAX_STEPS_PER_RUN.min(dim) || (step + 1) % CHECK_INTERVAL == 0;
            if at_check {
                let (theta, s) = tridiag_ground(&alphas, &betas)?;
                // cheap residual estimate |β_j · s_last| decides whether to
                // pay for the Ritz vector
                let est = b_j * s[s.len() - 1].abs();
                if breakdown || est <= 0.5 * tol * theta.abs().max(1.0) {
                    let mut z = vec![0.0; dim];
                    for (coef, u) in s.iter().zip(&basis) {
                        for (zx, ux) in z.iter_mut().zip(u) {
                            *zx += coef * ux;
                        }
                    }
                    let res = residual_norm(m, &z, theta);
                    if res <= tol * theta.abs().max(1.0) {
                        return Ok(GroundEnergy { e0: theta, residual: res, dim });
                    }
                    if best.map_or(true, |(_, r)| res < r) {
                        best = Some((theta, res));
                    }
                    if breakdown {
                        break; // invariant subspace without convergence: restart
                    }
                }
            }
            if breakdown {
                break;
            }
            betas.push(b_j);
            let next: Vec<f64> = w.iter().map(|x| x / b_j).collect();
            basis.push(next);
        }
        // run exhausted without meeting tol; record best Ritz value
        let (theta, s) = tridiag_ground(&alphas, &betas)?;
        let mut z = vec![0.0; dim];
        for (coef, u) in s.iter().zip(&basis) {
            for (zx, ux) in z.iter_mut().zip(u) {
                *zx += coef * ux;
            }
        }
        let res = residual_norm(m, &z, theta);
        if res <= tol * theta.abs().max(1.0) {
            return Ok(GroundEnergy { e0: theta, residual: res, dim });
        }
        if best.map_or(true, |(_, r)| res < r) {
            best = Some((theta, res));
        }
    }

    let (e0, residual) = best.expect("at least one Ritz pair evaluated");
    Err(Error::NumericalFailure {
        what: "lanczos ground state",
        residual,
        tol,
        detail: format!(
            "dim {dim}: best E0 = {e0:.12e} after {matvecs} matvecs and {MAX_RESTARTS} restarts"
        ),
    })
}

/// Ground eigenpair of the symmetric tridiagonal (α, β) matrix.
fn tridiag_ground(alphas: &[f64], betas: &[f64]) -> Result<(f64, Array1<f64>)> {
    let j = alphas.len();
    let mut t = Array2::zeros((j, j));
    for (i, &a) in alphas.iter().enumerate() {
        t[[i, i]] = a;
    }
    for (i, &b) in betas.iter().enumerate().take(j.saturating_sub(1)) {
        t[[i, i + 1]] = b;
        t[[i + 1, i]] = b;
    }
    sym_eig_ground(t)
}
