//! Dense complex linear algebra and special functions for small systems.

pub mod bessel;
pub mod eig;
pub mod expm;
pub mod fock;
pub mod matrix;
pub mod spin;

pub use bessel::{bessel_i0, bessel_i0_scaled};
pub use eig::{hermitian_eig, HermitianEig};
pub use expm::unitary_evolution;
pub use fock::{annihilation, coherent_amplitudes, displacement_operator, recommended_cutoff};
pub use matrix::{ComplexMatrix, C64};
pub use spin::{spin_operators, SpinLength, SpinOperators};
