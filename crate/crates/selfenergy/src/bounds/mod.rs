//! Theorem-level bound evaluators.
//!
//! Three layers: the provenanced constant ledger (`constants`), the
//! relativistic one-body machinery built on the localization kernel (`rel`),
//! and the closed-form theorem families with the boson binding window
//! (`family`). Everything here is pure evaluation; lattice oracles live in
//! `fock` and the variational route in `dressing`.

pub mod constants;
pub mod family;
pub mod rel;

pub use constants::{ConstantsSet, Provenance};
pub use family::{
    binding_window, nonrel_theorem_bounds, pauli_bounds, per_particle_min, rel_fermion_bounds,
    BindingWindow, PerParticleMin,
};
pub use rel::{
    k_ell, overlap_exponent_lattice, rel_lower, rel_upper, small_coupling_kernel_report,
    CoherentShift, KellRecord, SmallCouplingReport,
};
