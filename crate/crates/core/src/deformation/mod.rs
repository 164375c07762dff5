//! Foliation intersections, length-spectrum Jacobians and isospectral paths.

pub mod foliation;
pub mod jacobian;
pub mod path;

pub use foliation::{
    foliation_intersection, integral_exact, integral_quadrature, verify_length_formula, IntegrationMode,
    LengthFormulaCheck,
};
pub use jacobian::{
    area_gradient, direction_gap, nullity_report, slice_tangent, spectrum_jacobian, NullityReport, SpectrumJacobian,
    RANK_TOL,
};
pub use path::{follow_isospectral_path, IsospectralPath, PathOptions, PathStep};
