//! Pointwise Riemannian geometry in a single chart.
//!
//! Christoffel symbols and their first derivatives come from exact jets of
//! the metric expressions. Finite differences are only used for composite
//! pointwise pipelines (see [`covariant_derivative_tensor11`]).

mod definition;
mod pointwise;
mod stencil;
mod tensor;

pub use definition::{Domain, ManifoldDefinition};
pub use pointwise::{
    curvature_symmetry_defect, geometry_at, killing_defect, killing_defect_of,
    metric_compatibility_defect, unit_defect, unit_defect_of, GeometryAtPoint,
};
pub(crate) use pointwise::jet_of;
pub(crate) use stencil::check_stencil;
pub use stencil::{
    central_differences, covariant_derivative_tensor11, covariant_derivative_tensor11_richardson,
    covariant_derivative_tensor11_scaled,
};
pub use tensor::{Tensor3, Tensor4};

#[cfg(test)]
mod tests;
