//! Occupation-number bases on a momentum fiber.
//!
//! States are photon occupation vectors over the lattice pair index, ordered
//! graded-lexicographically: by total photon number first, then by ascending
//! lexicographic comparison of the occupation tuple. The electron coordinate
//! is eliminated at fixed total momentum, so a state's electron momentum is
//! derived, never stored.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lattice::ModeLattice;

/// Hard cap on basis dimension; enumeration errors out above it before
/// materializing anything.
pub const BASIS_CAPACITY: usize = 2_000_000;

/// Truncated bosonic basis at fixed total momentum.
#[derive(Debug)]
pub struct OccupationBasis<'a> {
    pub lattice: &'a ModeLattice,
    pub cap_per_pair: u8,
    pub cap_total: u8,
    pub total_momentum: [f64; 3],
    n_pairs: usize,
    states: Vec<u8>,
    index: HashMap<Vec<u8>, u32>,
}

impl<'a> OccupationBasis<'a> {
    pub fn dim(&self) -> usize {
        if self.n_pairs == 0 {
            1
        } else {
            self.states.len() / self.n_pairs
        }
    }

    pub fn n_pairs(&self) -> usize {
        self.n_pairs
    }

    pub fn occ(&self, i: usize) -> &[u8] {
        &self.states[i * self.n_pairs..(i + 1) * self.n_pairs]
    }

    pub fn index_of(&self, occ: &[u8]) -> Option<usize> {
        self.index.get(occ).map(|&i| i as usize)
    }

    pub fn total_photons(&self, i: usize) -> u32 {
        self.occ(i).iter().map(|&n| n as u32).sum()
    }

    /// Σ k·n over occupied pairs.
    pub fn photon_momentum(&self, i: usize) -> [f64; 3] {
        photon_momentum_of(self.lattice, self.occ(i))
    }

    /// total_momentum − photon momentum.
    pub fn electron_momentum(&self, i: usize) -> [f64; 3] {
        let kf = self.photon_momentum(i);
        [
            self.total_momentum[0] - kf[0],
            self.total_momentum[1] - kf[1],
            self.total_momentum[2] - kf[2],
        ]
    }
}

pub(crate) fn photon_momentum_of(lattice: &ModeLattice, occ: &[u8]) -> [f64; 3] {
    let mut kf = [0.0; 3];
    for (p, &n) in occ.iter().enumerate() {
        if n > 0 {
            let k = lattice.mode_of_pair(p).k;
            let w = n as f64;
            kf[0] += w * k[0];
            kf[1] += w * k[1];
            kf[2] += w * k[2];
        }
    }
    kf
}

/// Number of occupation vectors with `slots` entries, each ≤ cap_per_pair,
/// summing to at most cap_total.
fn count_states(slots: usize, cap_per_pair: u8, cap_total: u8) -> u128 {
    // per-slot polynomial multiplication truncated at cap_total
    let ct = cap_total as usize;
    let mut ways = vec![0u128; ct + 1];
    ways[0] = 1;
    for _ in 0..slots {
        let mut next = vec![0u128; ct + 1];
        for g in 0..=ct {
            if ways[g] == 0 {
                continue;
            }
            for v in 0..=(cap_per_pair as usize).min(ct - g) {
                next[g + v] = next[g + v].saturating_add(ways[g]);
            }
        }
        ways = next;
    }
    ways.iter().sum()
}

fn fill_grade(flat: &mut Vec<u8>, scratch: &mut [u8], slot: usize, remaining: u8, cap_per_pair: u8) {
    if slot == scratch.len() {
        if remaining == 0 {
            flat.extend_from_slice(scratch);
        }
        return;
    }
    let tail_capacity = (scratch.len() - slot - 1) as u32 * cap_per_pair as u32;
    for v in 0..=remaining.min(cap_per_pair) {
        if (remaining - v) as u32 <= tail_capacity {
            scratch[slot] = v;
            fill_grade(flat, scratch, slot + 1, remaining - v, cap_per_pair);
        }
    }
}

/// All occupation vectors over `n_pairs` slots within both caps, graded lex.
pub(crate) fn enumerate_occupations(n_pairs: usize, cap_per_pair: u8, cap_total: u8) -> Vec<u8> {
    let mut flat = Vec::new();
    let mut scratch = vec![0u8; n_pairs];
    for grade in 0..=cap_total {
        fill_grade(&mut flat, &mut scratch, 0, grade, cap_per_pair);
    }
    flat
}

/// Enumerate the truncated basis on the `total_momentum` fiber.
pub fn enumerate_basis(
    lattice: &ModeLattice,
    cap_per_pair: u8,
    cap_total: u8,
    total_momentum: [f64; 3],
) -> Result<OccupationBasis<'_>> {
    let n_pairs = lattice.n_pairs();
    if n_pairs == 0 && (cap_per_pair > 0 || cap_total > 0) {
        return Err(Error::InvalidInput(
            "empty lattice admits only zero caps (vacuum sector)".into(),
        ));
    }
    let projected = count_states(n_pairs, cap_per_pair, cap_total);
    if projected > BASIS_CAPACITY as u128 {
        return Err(Error::Capacity {
            dim: projected.min(usize::MAX as u128) as usize,
            limit: BASIS_CAPACITY,
        });
    }
    let states = enumerate_occupations(n_pairs, cap_per_pair, cap_total);
    let dim = if n_pairs == 0 { 1 } else { states.len() / n_pairs };
    let mut index = HashMap::with_capacity(dim);
    for i in 0..dim {
        index.insert(states[i * n_pairs..(i + 1) * n_pairs].to_vec(), i as u32);
    }
    Ok(OccupationBasis {
        lattice,
        cap_per_pair,
        cap_total,
        total_momentum,
        n_pairs,
        states,
        index,
    })
}
