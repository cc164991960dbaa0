//! Sector Hamiltonians on a truncated basis, assembled as sparse symmetric
//! matrices.
//!
//! At fixed total momentum P the electron momentum operator is P − Σ k a*a,
//! so every model is a polynomial in ladder operators:
//!
//!   minimal-coupling  ½(P − P_f + √α A(0))² + H_f
//!   a2-only           ½(P − P_f)² + (α/2) A(0)² + H_f
//!   density-coupled   H_f + (α/2) Σ_q ρ̂(q) (A·A)(q)
//!
//! The density-coupled model is the field under a fixed classical charge
//! density: the electron is integrated out entirely, which is what makes the
//! uniform-density case a set of decoupled shifted oscillators. A(0)² is the
//! ρ̂ ≡ 1 special case of the density form, so one assembly path serves all
//! three models.

use std::collections::HashMap;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::fock::basis::{photon_momentum_of, OccupationBasis};
use crate::profile::TrialProfile;

/// Symmetric sparse matrix, compressed rows, indices sorted within each row.
pub struct CsrMatrix {
    pub n: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<u32>,
    pub data: Vec<f64>,
}

impl CsrMatrix {
    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for i in 0..self.n {
            let mut acc = 0.0;
            for t in self.indptr[i]..self.indptr[i + 1] {
                acc += self.data[t] * x[self.indices[t] as usize];
            }
            y[i] = acc;
        }
    }

    /// Largest row sum of |entries|; cheap upper bound for ‖H‖₂.
    pub fn norm_bound(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                self.data[self.indptr[i]..self.indptr[i + 1]]
                    .iter()
                    .map(|v| v.abs())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let mut m = Array2::zeros((self.n, self.n));
        for i in 0..self.n {
            for t in self.indptr[i]..self.indptr[i + 1] {
                m[[i, self.indices[t] as usize]] = self.data[t];
            }
        }
        m
    }

    /// Build a symmetric CSR from a diagonal plus strictly-upper triplets.
    fn from_upper_triplets(n: usize, diag: Vec<f64>, upper: Vec<(u32, u32, f64)>) -> CsrMatrix {
        let mut counts = vec![1usize; n]; // diagonal always stored
        for &(i, j, _) in &upper {
            counts[i as usize] += 1;
            counts[j as usize] += 1;
        }
        let mut indptr = vec![0usize; n + 1];
        for i in 0..n {
            indptr[i + 1] = indptr[i] + counts[i];
        }
        let nnz = indptr[n];
        let mut indices = vec![0u32; nnz];
        let mut data = vec![0.0f64; nnz];
        let mut cursor = indptr.clone();
        for (i, d) in diag.into_iter().enumerate() {
            indices[cursor[i]] = i as u32;
            data[cursor[i]] = d;
            cursor[i] += 1;
        }
        for &(i, j, v) in &upper {
            let (iu, ju) = (i as usize, j as usize);
            indices[cursor[iu]] = j;
            data[cursor[iu]] = v;
            cursor[iu] += 1;
            indices[cursor[ju]] = i;
            data[cursor[ju]] = v;
            cursor[ju] += 1;
        }
        // sort each row by column for deterministic layout
        for i in 0..n {
            let lo = indptr[i];
            let hi = indptr[i + 1];
            let mut row: Vec<(u32, f64)> =
                indices[lo..hi].iter().copied().zip(data[lo..hi].iter().copied()).collect();
            row.sort_unstable_by_key(|&(c, _)| c);
            for (t, (c, v)) in row.into_iter().enumerate() {
                indices[lo + t] = c;
                data[lo + t] = v;
            }
        }
        CsrMatrix { n, indptr, indices, data }
    }
}

/// Real, even Fourier table ρ̂(n) of a classical density on the box dual
/// grid; absent entries are zero. ρ̂(0) = 1 for a normalized density.
#[derive(Debug, Clone)]
pub struct DensityTable {
    pub box_side: f64,
    entries: HashMap<[i64; 3], f64>,
}

impl DensityTable {
    pub fn new(box_side: f64, entries: HashMap<[i64; 3], f64>) -> Result<Self> {
        for (n, &v) in &entries {
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("density table entry {n:?} = {v}")));
            }
            let mirror = [-n[0], -n[1], -n[2]];
            let vm = entries.get(&mirror).copied().unwrap_or(0.0);
            if (v - vm).abs() > 1e-12 * v.abs().max(1.0) {
                return Err(Error::InvalidInput(format!(
                    "density table not even: ρ̂({n:?}) = {v}, ρ̂({mirror:?}) = {vm}"
                )));
            }
        }
        Ok(DensityTable { box_side, entries })
    }

    /// ρ = 1/V: the single Fourier coefficient ρ̂(0) = 1.
    pub fn uniform(box_side: f64) -> Self {
        DensityTable { box_side, entries: HashMap::from([([0, 0, 0], 1.0)]) }
    }

    /// |ψ|² of a trial profile; ρ̂(n) = V·ĝ(n), so ρ̂(0) = Σ|c|² = 1.
    pub fn from_profile(profile: &TrialProfile) -> Self {
        let ghat = profile.ghat();
        let v = profile.box_side.powi(3);
        let reach = ghat.reach();
        let mut entries = HashMap::new();
        for n0 in -reach..=reach {
            for n1 in -reach..=reach {
                for n2 in -reach..=reach {
                    let g = ghat.value([n0, n1, n2]);
                    if g != 0.0 {
                        entries.insert([n0, n1, n2], v * g);
                    }
                }
            }
        }
        DensityTable { box_side: profile.box_side, entries }
    }

    pub fn value(&self, n: [i64; 3]) -> f64 {
        self.entries.get(&n).copied().unwrap_or(0.0)
    }
}

/// Which Hamiltonian to assemble.
#[derive(Clone, Copy)]
pub enum HamiltonianModel<'t> {
    MinimalCoupling,
    A2Only,
    DensityCoupled(&'t DensityTable),
}

/// Tag retained on the assembled operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    MinimalCoupling,
    A2Only,
    DensityCoupled,
}

pub struct SectorHamiltonian<'b, 'a> {
    pub basis: &'b OccupationBasis<'a>,
    pub model: ModelKind,
    pub alpha: f64,
    pub matrix: CsrMatrix,
}

/// Assemble the model Hamiltonian over the basis. Only the diagonal and the
/// strictly-upper matrix elements are generated (raising monomials always
/// point to a later graded-lex state), then mirrored, so the result is
/// symmetric by construction.
pub fn assemble_hamiltonian<'b, 'a>(
    basis: &'b OccupationBasis<'a>,
    alpha: f64,
    model: HamiltonianModel<'_>,
) -> Result<SectorHamiltonian<'b, 'a>> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidInput(format!("alpha = {alpha} must be finite and >= 0")));
    }
    let lattice = basis.lattice;
    let (kind, kinetic, cross, density) = match model {
        HamiltonianModel::MinimalCoupling => (ModelKind::MinimalCoupling, true, true, None),
        HamiltonianModel::A2Only => (ModelKind::A2Only, true, false, None),
        HamiltonianModel::DensityCoupled(t) => {
            if (t.box_side - lattice.params.box_side).abs() > 1e-12 * lattice.params.box_side {
                return Err(Error::InvalidInput(format!(
                    "density table box {} does not match lattice box {}",
                    t.box_side, lattice.params.box_side
                )));
            }
            (ModelKind::DensityCoupled, false, false, Some(t))
        }
    };

    let np = basis.n_pairs();
    let dim = basis.dim();
    let spec = lattice.field_operator_spec();
    // scalar coefficient of A(0) per pair; polarization kept separate
    let c: Vec<f64> = (0..np)
        .map(|p| 1.0 / (2.0 * lattice.params.volume() * lattice.mode_of_pair(p).norm_k).sqrt())
        .collect();
    debug_assert!(np == 0 || (spec.a[0][0].hypot(spec.a[0][1]).hypot(spec.a[0][2]) - c[0]).abs() < 1e-15);
    let eps: Vec<[f64; 3]> = (0..np).map(|p| lattice.eps_of_pair(p)).collect();
    let knorm: Vec<f64> = (0..np).map(|p| lattice.mode_of_pair(p).norm_k).collect();

    // g∓[p][p'] = c_p c_p' (ε_p·ε_p') ρ̂(n_p ∓ n_p'); ρ̂ ≡ 1 away from the
    // density model (A(0) carries every Fourier phase equally)
    let mut g_minus = vec![0.0f64; np * np];
    let mut g_plus = vec![0.0f64; np * np];
    for p in 0..np {
        let n_p = lattice.mode_of_pair(p).n;
        for q in p..np {
            let n_q = lattice.mode_of_pair(q).n;
            let dot = eps[p][0] * eps[q][0] + eps[p][1] * eps[q][1] + eps[p][2] * eps[q][2];
            let base = c[p] * c[q] * dot;
            let (rm, rp) = match density {
                Some(t) => (
                    t.value([n_p[0] - n_q[0], n_p[1] - n_q[1], n_p[2] - n_q[2]]),
                    t.value([n_p[0] + n_q[0], n_p[1] + n_q[1], n_p[2] + n_q[2]]),
                ),
                None => (1.0, 1.0),
            };
            g_minus[p * np + q] = base * rm;
            g_minus[q * np + p] = base * rm;
            g_plus[p * np + q] = base * rp;
            g_plus[q * np + p] = base * rp;
        }
    }

    let sqrt_alpha = alpha.sqrt();
    let mut diag = Vec::with_capacity(dim);
    let mut upper: Vec<(u32, u32, f64)> = Vec::new();
    let mut scratch = vec![0u8; np];

    for i in 0..dim {
        let occ = basis.occ(i);
        let total: u32 = occ.iter().map(|&n| n as u32).sum();

        let mut d = 0.0;
        for p in 0..np {
            d += knorm[p] * occ[p] as f64;
        }
        if kinetic {
            let pe = {
                let kf = photon_momentum_of(lattice, occ);
                [
                    basis.total_momentum[0] - kf[0],
                    basis.total_momentum[1] - kf[1],
                    basis.total_momentum[2] - kf[2],
                ]
            };
            d += 0.5 * (pe[0] * pe[0] + pe[1] * pe[1] + pe[2] * pe[2]);
        }
        for p in 0..np {
            d += 0.5 * alpha * g_minus[p * np + p] * (2.0 * occ[p] as f64 + 1.0);
        }
        diag.push(d);

        // p·A, symmetrized: raising element √α c_p √(n_p+1) ε_p·(P − K_n)
        // evaluated on the lower state, which is this row
        if cross {
            let pe = {
                let kf = photon_momentum_of(lattice, occ);
                [
                    basis.total_momentum[0] - kf[0],
                    basis.total_momentum[1] - kf[1],
                    basis.total_momentum[2] - kf[2],
                ]
            };
            if total < basis.cap_total as u32 {
                for p in 0..np {
                    if occ[p] >= basis.cap_per_pair {
                        continue;
                    }
                    let amp = eps[p][0] * pe[0] + eps[p][1] * pe[1] + eps[p][2] * pe[2];
                    if amp == 0.0 {
                        continue;
                    }
                    scratch.copy_from_slice(occ);
                    scratch[p] += 1;
                    let j = basis.index_of(&scratch).expect("raised state within caps");
                    let val = sqrt_alpha * c[p] * ((occ[p] + 1) as f64).sqrt() * amp;
                    upper.push((i as u32, j as u32, val));
                }
            }
        }

        // A² / density quadratic form: photon number ±2 and 0
        for p in 0..np {
            // a*_p a*_p
            if g_plus[p * np + p] != 0.0
                && occ[p] as u32 + 2 <= basis.cap_per_pair as u32
                && total + 2 <= basis.cap_total as u32
            {
                scratch.copy_from_slice(occ);
                scratch[p] += 2;
                let j = basis.index_of(&scratch).expect("raised state within caps");
                let n_p = occ[p] as f64;
                let val = 0.5 * alpha * g_plus[p * np + p] * ((n_p + 1.0) * (n_p + 2.0)).sqrt();
                upper.push((i as u32, j as u32, val));
            }
            for q in (p + 1)..np {
                // a*_p a*_q
                let gp = g_plus[p * np + q];
                if gp != 0.0
                    && occ[p] < basis.cap_per_pair
                    && occ[q] < basis.cap_per_pair
                    && total + 2 <= basis.cap_total as u32
                {
                    scratch.copy_from_slice(occ);
                    scratch[p] += 1;
                    scratch[q] += 1;
                    let j = basis.index_of(&scratch).expect("raised state within caps");
                    let val =
                        alpha * gp * (((occ[p] + 1) as f64) * ((occ[q] + 1) as f64)).sqrt();
                    upper.push((i as u32, j as u32, val));
                }
                // a*_p a_q + a*_q a_p: same grade, keep the lexicographically
                // later target (the mirror row emits the other direction)
                let gm = g_minus[p * np + q];
                if gm != 0.0 {
                    for (up, down) in [(p, q), (q, p)] {
                        if occ[up] < basis.cap_per_pair && occ[down] > 0 {
                            scratch.copy_from_slice(occ);
                            scratch[up] += 1;
                            scratch[down] -= 1;
                            if let Some(j) = basis.index_of(&scratch) {
                                if j > i {
                                    let val = alpha
                                        * gm
                                        * (((occ[up] + 1) as f64) * (occ[down] as f64)).sqrt();
                                    upper.push((i as u32, j as u32, val));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    let matrix = CsrMatrix::from_upper_triplets(dim, diag, upper);
    Ok(SectorHamiltonian { basis, model: kind, alpha, matrix })
}
