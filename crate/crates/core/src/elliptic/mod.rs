//! Elliptic genus of resolutions with exceptional divisors.
//!
//! Theta functions are expanded exactly in `q` with coefficients rational
//! functions of `ζ = e^{2πiz}`; cohomology arguments enter through the
//! nilpotent variable `y` with `w = e^y ζ^c`, so no powers of `2πi` appear.

mod chern;
pub mod cohomology;
mod genus;
mod jacobi;
mod theta;

pub use chern::{chern_root_product, chern_variables, power_sums};
pub use cohomology::{
    blown_up_plane, projective_space, ClassSpec, CohomologyModel, DivisorSpec, ModelSpec,
};
pub use genus::{bl_genus, chi_y, divisor_factor, root_factor};
pub use jacobi::JacobiSeries;
pub use theta::{theta_expand, theta_lattice_sum, ThetaSeries};

/// Default `q`-truncation order.
pub const DEFAULT_ORDER: u32 = 3;
