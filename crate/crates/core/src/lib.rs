//! Dirichlet heat kernels and heat traces on domains that tile space by
//! reflection, computed by the method of images, together with their
//! short-time expansions and an eigenvalue oracle for boxes.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asympt;
pub mod error;
pub mod geometry;
pub mod images;
pub mod kernel;
pub mod numeric;
pub mod quadrature;
pub mod reflgroup;
pub mod spectral;
pub mod ztrace;

pub use asympt::{
    box_contribution_table, corner_term, corner_term_curvature, cot2_sum, erf_integral_identities,
    expansion, hyperrectangle_asympt, interval_asympt, polygon_asympt, prism_asympt, sin2_inverse_sum,
    topological_constant, trihedral_constant, wedge_constant, AsymptoticExpansion,
};
pub use error::{Error, Result};
pub use geometry::{
    admissible_triangle, admissible_trihedral, make_domain, measures, DomainDescriptor, DomainKind,
    DomainParams, DomainSpec, GeometricMeasures, Shape, TriangleShape, Wall,
};
pub use images::{enumerate_images, enumerate_images_with_walls, ImageEntry, ImageSet};
pub use kernel::{diagonal_kernel, domain_kernel, free_kernel, reduced_norm, ImageSystem, KernelEstimate};
pub use reflgroup::{
    dihedral_generators, parity, reflection_matrix, trihedral_reflections, verify_presentation,
    CoxeterMatrix, Isometry, Root,
};
pub use spectral::{spectral_partition_box, SpectralSum};
pub use ztrace::{
    partition_numeric, topological_extrapolate, trihedral_constant_numeric, wedge_constant_numeric,
    QuadratureConfig, Scheme, TraceRow, TraceSeries,
};
