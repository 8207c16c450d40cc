//! Finite and eventually periodic Jacobi matrices.

mod bands;
mod periodicity;
mod spectrum;
mod tridiagonal;

pub use bands::{bands_periodic, BandStructure, PeriodicJacobi};
pub use periodicity::{
    antitree_coefficients, check_periodicity_transfer, detect_eventually_periodic, detect_eventually_periodic_by,
    essential_point_tcs2, PeriodicityTransfer,
};
pub use spectrum::{max_sorted_deviation, spectrum_union, SpectrumRow, SpectrumTable};
pub use tridiagonal::{eigenvalues_tridiagonal, sturm_count, JacobiMatrix};
