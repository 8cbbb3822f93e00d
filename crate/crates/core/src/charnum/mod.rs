//! Characteristic numbers: Stiefel–Whitney numbers of presented manifolds,
//! Wu classes, flop-invariant spans, and the Ochanine genus.

mod manifold;
mod ochanine;
mod span;
mod swpoly;

pub use manifold::{Element, Generator, ManifoldAtom};
pub use ochanine::{
    in_cp_subring, in_image_ring, lattice_contains, ochanine_cp, ochanine_cp_pontryagin,
    ochanine_log, ochanine_log_derivative, reversion, GenusPoly,
};
pub use span::{
    bordism_generator, bordism_partitions, bordism_rank, evaluation_rows, flop_relation_check,
    invariant_functionals, invariant_span_rank, is_indecomposable, partitions, span_equivalence,
    spanning_set, wu_functionals, wu_span_rank, FlopReport, FlopRow, MAX_GENERATOR_DIMENSION,
};
pub use swpoly::{
    monomial_degree, s_class, steenrod_sq, wu_class, wu_classes, SWPolynomial, SwMonomial,
};
