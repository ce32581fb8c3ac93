//! Grid realizations of the Schrödinger representation of `H_1` on `L²(R)`
//! and of the operators in the `rho_h ⊗ rho_{-h}` intertwiner.

mod grid;
mod io;
mod plancherel;
mod schrodinger;

pub use grid::{fractional_shift, GridFunction, GridSpec};
pub use io::{read_binary, read_text, write_binary, write_text};
pub use plancherel::{
    fourier_plancherel, fourier_plancherel_inverse, intertwiner_residual, intertwiner_residual_with, rotate_exact,
    rotation_45, rotation_45_with, Direction, RotationGuard,
};
pub use schrodinger::{
    apply_schrodinger, apply_schrodinger_pair, central_character_residual, gaussian_coefficient, matrix_coefficient,
    pd_gram_min_eig, tensor_coefficient, CoefficientFunction,
};
