//! Self-energy bounds for a charged particle coupled to an ultraviolet-cutoff
//! quantized radiation field, verified at desk scale against exact finite-mode
//! Fock-space diagonalization and independent quadrature oracles.
//!
//! Everything is phrased in units of mc² for energies and Compton lengths for
//! distances; the coupling `alpha` is dimensionless. Photon modes live on the
//! finite-volume lattice k = 2πn/L with the strict cutoff |k| < Λ.
//!
//! Module map:
//! - [`lattice`]: mode enumeration, polarization frames, lattice sums.
//! - [`profile`]: the bandwidth-K trial profile and its dressing kernel.
//! - [`dressing`]: trace-root spectral energies and the variational upper bound.
//! - [`lowerbounds`]: commutator and uncertainty-principle lower bounds.
//! - [`fock`]: truncated Fock-space diagonalization (the oracle).
//! - [`bounds`]: theorem-level bound evaluators (relativistic, many-body, Pauli).
//! - [`ltcheck`]: Monte Carlo check of the neighbor-counting kinetic inequality.
//! - [`numerics`]: shared numerical kernels (summation, quadrature, fits, FFT).

pub mod bounds;
pub mod dressing;
pub mod error;
pub mod fock;
pub mod lattice;
pub mod lowerbounds;
pub mod ltcheck;
pub mod numerics;
pub mod profile;
pub mod records;

pub use error::{Error, Result};
pub use lattice::{build_lattice, ModeLattice, PhysParams};
pub use records::{BoundRecord, Model, Side, Statistics};
